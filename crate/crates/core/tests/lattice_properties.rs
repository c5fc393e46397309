use hk_core::exact::{int, Integer, Rational};
use hk_core::lattice::{k3_lattice, IntegralLattice, Signature};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// Characteristic polynomial by Faddeev-LeVerrier; coefficients from x^n down.
fn char_poly(g: &[Vec<Integer>]) -> Vec<Rational> {
    let n = g.len();
    let a: Vec<Vec<Rational>> =
        g.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut coeffs = vec![Rational::from_integer(int(1))];
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[k - 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs.push(-tr / Rational::from_integer(int(k as i64)));
    }
    coeffs
}

fn sign_changes(c: &[Rational]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

// All roots of a symmetric matrix's characteristic polynomial are real, so
// Descartes' rule counts positive and negative eigenvalues exactly.
fn descartes_signature(g: &[Vec<Integer>]) -> Signature {
    let c = char_poly(g);
    let n = g.len();
    let zero = c.iter().rev().take_while(|x| x.is_zero()).count();
    let positive = sign_changes(&c);
    let flipped: Vec<Rational> =
        c.iter().enumerate().map(|(k, x)| if (n - k) % 2 == 1 { -x.clone() } else { x.clone() }).collect();
    Signature::new(positive, sign_changes(&flipped), zero)
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-4i64..=4, n * n).prop_map(move |flat| {
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                g[i][j] = flat[i * n + j];
                g[j][i] = flat[i * n + j];
            }
        }
        g
    })
}

fn lattice(g: &[Vec<i64>]) -> IntegralLattice {
    IntegralLattice::new(g.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Integer>> {
    proptest::collection::vec(-20i64..=20, n).prop_map(|v| v.into_iter().map(int).collect())
}

fn add(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

// Pᵀ G P for P a product of elementary operations col_i += k col_j.
fn change_basis(g: &[Vec<Integer>], ops: &[(usize, usize, i64)]) -> Vec<Vec<Integer>> {
    let mut g = g.to_vec();
    let n = g.len();
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let k = int(k);
        for row in g.iter_mut() {
            let d = &row[j] * &k;
            row[i] += d;
        }
        for c in 0..n {
            let d = &g[j][c] * &k;
            g[i][c] += d;
        }
    }
    g
}

#[test]
fn signature_agrees_with_descartes_on_standard_lattices() {
    let k3 = k3_lattice();
    assert_eq!(k3.signature(), descartes_signature(k3.gram()));
    assert_eq!(k3.signature(), Signature::new(3, 19, 0));
    let u = lattice(&[vec![0, 1], vec![1, 0]]);
    assert_eq!(descartes_signature(u.gram()), Signature::new(1, 1, 0));
}

#[test]
fn degenerate_forms_count_zero_squares() {
    let l = lattice(&[vec![0, 0, 0], vec![0, 0, 2], vec![0, 2, 0]]);
    assert_eq!(l.signature(), Signature::new(1, 1, 1));
    assert!(!l.is_nondegenerate());
    assert!(IntegralLattice::nondegenerate(l.gram().to_vec()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_matches_characteristic_polynomial(g in (1usize..=6).prop_flat_map(symmetric)) {
        let l = lattice(&g);
        let s = l.signature();
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert_eq!(s, descartes_signature(l.gram()));
    }

    #[test]
    fn signature_is_invariant_under_unimodular_change(
        g in (2usize..=6).prop_flat_map(symmetric),
        ops in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 1..12),
    ) {
        let l = lattice(&g);
        let moved = IntegralLattice::new(change_basis(l.gram(), &ops)).unwrap();
        prop_assert_eq!(moved.determinant(), l.determinant());
        prop_assert_eq!(moved.signature(), l.signature());
    }

    #[test]
    fn direct_sum_adds_signatures(a in (1usize..=4).prop_flat_map(symmetric), b in (1usize..=4).prop_flat_map(symmetric)) {
        let (la, lb) = (lattice(&a), lattice(&b));
        let sum = la.direct_sum(&lb);
        prop_assert_eq!(sum.rank(), la.rank() + lb.rank());
        prop_assert_eq!(sum.signature(), la.signature() + lb.signature());
        prop_assert_eq!(sum.determinant(), la.determinant() * lb.determinant());
    }

    #[test]
    fn evaluate_is_symmetric_and_bilinear(
        (g, u, v, w) in (1usize..=6).prop_flat_map(|n| (symmetric(n), vector(n), vector(n), vector(n))),
    ) {
        let l = lattice(&g);
        prop_assert_eq!(l.evaluate(&v, &w).unwrap(), l.evaluate(&w, &v).unwrap());
        let lhs = l.evaluate(&add(&u, &v), &w).unwrap();
        prop_assert_eq!(lhs, l.evaluate(&u, &w).unwrap() + l.evaluate(&v, &w).unwrap());
        let scaled: Vec<Integer> = v.iter().map(|x| x * int(-3)).collect();
        prop_assert_eq!(l.evaluate(&scaled, &w).unwrap(), l.evaluate(&v, &w).unwrap() * int(-3));
    }

    #[test]
    fn rescale_multiplies_every_value(
        (g, v, w) in (1usize..=5).prop_flat_map(|n| (symmetric(n), vector(n), vector(n))),
        m in prop_oneof![-7i64..=-1, 1i64..=7],
    ) {
        let l = lattice(&g);
        let r = l.rescale(&int(m)).unwrap();
        prop_assert_eq!(r.evaluate(&v, &w).unwrap(), l.evaluate(&v, &w).unwrap() * int(m));
    }
}

#[test]
fn evaluate_rejects_wrong_length() {
    let l = lattice(&[vec![1, 0], vec![0, 1]]);
    let err = l.evaluate(&[int(1)], &[int(1), int(0)]).unwrap_err();
    assert_eq!(err.kind(), hk_core::ErrorKind::Rejected);
    assert!(l.rescale(&int(0)).is_err());
}
