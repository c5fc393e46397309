//! Exact linear algebra over ℚ on small dense matrices.
//!
//! Matrices are `Vec<Vec<Rational>>` in row-major order. Symmetric bilinear
//! forms are passed as their Gram matrix; subspaces as a list of spanning
//! row vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn bilinear(gram: &[Vec<Rational>], u: &[Rational], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in gram.iter().enumerate() {
        if u[i].is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for (j, g) in row.iter().enumerate() {
            if !g.is_zero() && !v[j].is_zero() {
                inner += g * &v[j];
            }
        }
        acc += &u[i] * inner;
    }
    acc
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| exact::dot(row, v)).collect()
}

/// Gram matrix of `vectors` under `gram`.
pub fn restricted_gram(gram: &[Vec<Rational>], vectors: &[Vec<Rational>]) -> Matrix {
    vectors
        .iter()
        .map(|u| vectors.iter().map(|v| bilinear(gram, u, v)).collect())
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Canonical basis of `span(vectors)`: the nonzero rows of the reduced
/// echelon form, each scaled to a primitive integer vector.
pub fn canonical_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut m = vectors.to_vec();
    let r = rref(&mut m).len();
    m.truncate(r);
    m.iter().map(|v| exact::primitive(v)).collect()
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows · x = 0}` in `ncols` unknowns, one vector per free
/// column, in increasing column order.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Linearly independent subset of `vectors` spanning the same space.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        let mut trial = out.clone();
        trial.push(v.clone());
        if rank(&trial) == trial.len() {
            out = trial;
        }
    }
    out
}

pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut rows = basis.to_vec();
    let before = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == before
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Leading principal minors `det(m[..k][..k])` for `k = 1..=n`.
pub fn leading_minors(m: &[Vec<Rational>]) -> Vec<Rational> {
    (1..=m.len())
        .map(|k| {
            let sub: Matrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// The first leading principal minor that is not strictly positive, as
/// `(order, value)`; `None` means the matrix is positive definite.
pub fn first_nonpositive_minor(m: &[Vec<Rational>]) -> Option<(usize, Rational)> {
    leading_minors(m)
        .into_iter()
        .enumerate()
        .find(|(_, d)| !d.is_positive())
        .map(|(i, d)| (i + 1, d))
}

/// `{v : b(v, u) = 0 for every u in vectors}` in the ambient space.
pub fn orthogonal_complement(gram: &[Vec<Rational>], vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let rows: Matrix = vectors.iter().map(|u| mat_vec(gram, u)).collect();
    kernel(&rows, gram.len())
}

/// Vectors of `span(subspace)` orthogonal to every vector of `against`.
pub fn relative_complement(
    gram: &[Vec<Rational>],
    subspace: &[Vec<Rational>],
    against: &[Vec<Rational>],
) -> Vec<Vec<Rational>> {
    // Coefficients c with b(Σ c_i s_i, a) = 0 for all a.
    let rows: Matrix = against
        .iter()
        .map(|a| subspace.iter().map(|s| bilinear(gram, s, a)).collect())
        .collect();
    let coeffs = kernel(&rows, subspace.len());
    coeffs.iter().map(|c| combine(subspace, c)).collect()
}

/// Basis of `span(a) ∩ span(b)`; both inputs must be linearly independent.
pub fn intersect(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(dim) = a.first().or(b.first()).map(Vec::len) else {
        return Vec::new();
    };
    // Columns are a_1..a_r, b_1..b_s; a kernel vector (c, d) gives Σ c_i a_i = −Σ d_j b_j.
    let rows: Matrix = (0..dim)
        .map(|k| a.iter().chain(b).map(|v| v[k].clone()).collect())
        .collect();
    let coeffs = kernel(&rows, a.len() + b.len());
    let meet: Vec<Vec<Rational>> = coeffs.iter().map(|c| combine(a, &c[..a.len()])).collect();
    independent_subset(&meet)
}

/// Whether the form restricted to `span(vectors)` is negative definite.
pub fn is_negative_definite(gram: &[Vec<Rational>], vectors: &[Vec<Rational>]) -> bool {
    let negated: Matrix = restricted_gram(gram, vectors)
        .into_iter()
        .map(|row| row.into_iter().map(|x| -x).collect())
        .collect();
    first_nonpositive_minor(&negated).is_none()
}

pub fn combine(vectors: &[Vec<Rational>], coeffs: &[Rational]) -> Vec<Rational> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// A basis of the span of `vectors` that is orthogonal for `gram`, together
/// with the norms `q(b_i)`. Zero vectors are dropped. When every remaining
/// vector is isotropic but two of them pair nontrivially, their sum is used
/// as the next pivot.
pub fn orthogonalize(gram: &[Vec<Rational>], vectors: &[Vec<Rational>]) -> Vec<(Vec<Rational>, Rational)> {
    let mut pending: Vec<Vec<Rational>> = vectors.iter().filter(|v| !exact::is_zero_vec(v)).cloned().collect();
    let mut out = Vec::new();
    while !pending.is_empty() {
        let pivot_idx = pending.iter().position(|v| !bilinear(gram, v, v).is_zero());
        let idx = match pivot_idx {
            Some(i) => i,
            None => {
                let pair = (0..pending.len()).find_map(|i| {
                    (i + 1..pending.len())
                        .find(|&j| !bilinear(gram, &pending[i], &pending[j]).is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    Some((i, j)) => {
                        pending[i] = exact::add(&pending[i], &pending[j]);
                        i
                    }
                    None => {
                        for v in pending.drain(..) {
                            out.push((v, Rational::zero()));
                        }
                        break;
                    }
                }
            }
        };
        let pivot = pending.remove(idx);
        let norm = bilinear(gram, &pivot, &pivot);
        let inv = norm.recip();
        pending = pending
            .into_iter()
            .map(|v| {
                let f = bilinear(gram, &v, &pivot) * &inv;
                exact::sub(&v, &exact::scale(&pivot, &f))
            })
            .filter(|v| !exact::is_zero_vec(v))
            .collect();
        out.push((pivot, norm));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rats};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| rats(r)).collect()
    }

    #[test]
    fn determinant_and_minors() {
        let a = m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        assert_eq!(determinant(&a), rat(4));
        assert_eq!(leading_minors(&a), rats(&[2, 3, 4]));
        assert_eq!(first_nonpositive_minor(&a), None);
        let b = m(&[&[1, 0], &[0, 0]]);
        assert_eq!(first_nonpositive_minor(&b), Some((2, rat(0))));
    }

    #[test]
    fn kernel_of_coordinate_conditions() {
        let rows = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(kernel(&rows, 4), [rats(&[0, 0, 1, 0]), rats(&[0, 0, 0, 1])]);
    }

    #[test]
    fn intersection_of_planes() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = m(&[&[0, 1, 0], &[0, 0, 1]]);
        let meet = intersect(&a, &b);
        assert_eq!(meet.len(), 1);
        assert!(in_span(&[rats(&[0, 1, 0])], &meet[0]));
        assert!(intersect(&a, &m(&[&[0, 0, 1]])).is_empty());
    }

    #[test]
    fn orthogonalize_handles_hyperbolic_plane() {
        let u = m(&[&[0, 1], &[1, 0]]);
        let basis = m(&[&[1, 0], &[0, 1]]);
        let out = orthogonalize(&u, &basis);
        let mut signs: Vec<i32> = out
            .iter()
            .map(|(_, n)| if n.is_positive() { 1 } else if n.is_negative() { -1 } else { 0 })
            .collect();
        signs.sort();
        assert_eq!(signs, [-1, 1]);
        assert!(bilinear(&u, &out[0].0, &out[1].0).is_zero());
    }
}
