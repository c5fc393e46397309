//! Integral lattices `(Γ, q_Γ)` given by a symmetric integer Gram matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{check_len, Error, Result};
use crate::exact::{Integer, Rational};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: Vec<Vec<Integer>>,
}

/// Inertia counts of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Signature { positive, negative, zero }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

impl core::ops::Add for Signature {
    type Output = Signature;

    fn add(self, o: Signature) -> Signature {
        Signature::new(self.positive + o.positive, self.negative + o.negative, self.zero + o.zero)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardLattice {
    /// `U = [[0,1],[1,0]]`.
    Hyperbolic,
    /// The E8 root lattice with its form negated.
    E8Negative,
    /// `U ⊕ U ⊕ U ⊕ E8(−1) ⊕ E8(−1)`.
    K3,
}

impl FromStr for StandardLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(StandardLattice::Hyperbolic),
            "E8_minus" => Ok(StandardLattice::E8Negative),
            "K3" => Ok(StandardLattice::K3),
            other => Err(Error::rejected(format!("unknown standard lattice {other:?}"))),
        }
    }
}

// Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

impl IntegralLattice {
    /// Builds a lattice from a square symmetric Gram matrix. Degenerate forms
    /// are allowed; see [`IntegralLattice::nondegenerate`].
    pub fn new(gram: Vec<Vec<Integer>>) -> Result<Self> {
        let r = gram.len();
        if r == 0 {
            return Err(Error::rejected("lattice rank must be positive"));
        }
        for row in &gram {
            check_len(r, row.len())?;
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::rejected(format!("Gram matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(IntegralLattice { gram })
    }

    /// Like [`IntegralLattice::new`] but rejects a zero determinant.
    pub fn nondegenerate(gram: Vec<Vec<Integer>>) -> Result<Self> {
        let l = Self::new(gram)?;
        if l.determinant().is_zero() {
            return Err(Error::rejected("lattice declared nondegenerate has determinant 0"));
        }
        Ok(l)
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let r = entries.len();
        let mut gram = vec![vec![Integer::zero(); r]; r];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = BigInt::from(e);
        }
        IntegralLattice { gram }
    }

    pub fn standard(kind: StandardLattice) -> Self {
        match kind {
            StandardLattice::Hyperbolic => Self::from_rows(&[&[0, 1], &[1, 0]]).expect("symmetric"),
            StandardLattice::E8Negative => {
                let mut gram = vec![vec![Integer::zero(); 8]; 8];
                for (i, row) in gram.iter_mut().enumerate() {
                    row[i] = BigInt::from(-2);
                }
                for &(a, b) in &E8_EDGES {
                    gram[a][b] = BigInt::from(1);
                    gram[b][a] = BigInt::from(1);
                }
                let l = IntegralLattice { gram };
                debug_assert_eq!(l.signature(), Signature::new(0, 8, 0));
                l
            }
            StandardLattice::K3 => {
                let u = Self::standard(StandardLattice::Hyperbolic);
                let e8 = Self::standard(StandardLattice::E8Negative);
                u.direct_sum(&u).direct_sum(&u).direct_sum(&e8).direct_sum(&e8)
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Integer>] {
        &self.gram
    }

    pub fn gram_rational(&self) -> Vec<Vec<Rational>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect()
    }

    /// `vᵀ · gram · w`.
    pub fn evaluate(&self, v: &[Integer], w: &[Integer]) -> Result<Integer> {
        check_len(self.rank(), v.len())?;
        check_len(self.rank(), w.len())?;
        let mut acc = Integer::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            let inner = row.iter().zip(w).fold(Integer::zero(), |a, (g, x)| a + g * x);
            acc += &v[i] * inner;
        }
        Ok(acc)
    }

    /// The quadratic value `q(v) = b(v, v)`.
    pub fn square(&self, v: &[Integer]) -> Result<Integer> {
        self.evaluate(v, v)
    }

    /// The bilinear form extended to `Γ ⊗ ℚ`.
    pub fn pairing(&self, v: &[Rational], w: &[Rational]) -> Result<Rational> {
        check_len(self.rank(), v.len())?;
        check_len(self.rank(), w.len())?;
        let mut acc = Rational::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            let mut inner = Rational::zero();
            for (g, x) in row.iter().zip(w) {
                if !g.is_zero() && !x.is_zero() {
                    inner += x * g;
                }
            }
            acc += &v[i] * inner;
        }
        Ok(acc)
    }

    pub fn determinant(&self) -> Integer {
        let det = linalg::determinant(&self.gram_rational());
        debug_assert!(det.is_integer());
        det.to_integer()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| (&row[i] % BigInt::from(2)).is_zero())
    }

    /// Inertia by exact symmetric elimination over ℚ. A nonzero diagonal
    /// pivot contributes its sign; when every remaining diagonal entry is 0
    /// but some off-diagonal entry `a` is not, the 2×2 block `[[0,a],[a,0]]`
    /// is split off and contributes `(1,1)`.
    pub fn signature(&self) -> Signature {
        let mut a = self.gram_rational();
        let mut active: Vec<usize> = (0..self.rank()).collect();
        let mut sig = Signature::default();
        while !active.is_empty() {
            if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
                let p = active.remove(pos);
                let pivot = a[p][p].clone();
                if pivot.is_positive() {
                    sig.positive += 1;
                } else {
                    sig.negative += 1;
                }
                for &k in &active {
                    if a[k][p].is_zero() {
                        continue;
                    }
                    let f = &a[k][p] / &pivot;
                    for &l in &active {
                        let delta = &f * &a[p][l];
                        a[k][l] -= delta;
                    }
                }
                continue;
            }
            let pair = active.iter().enumerate().find_map(|(x, &i)| {
                active[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j))
            });
            let Some((i, j)) = pair else {
                sig.zero += active.len();
                break;
            };
            let off = a[i][j].clone();
            active.retain(|&k| k != i && k != j);
            sig.positive += 1;
            sig.negative += 1;
            for &k in &active {
                for &l in &active {
                    let delta = (&a[k][i] * &a[j][l] + &a[k][j] * &a[i][l]) / &off;
                    a[k][l] -= delta;
                }
            }
        }
        sig
    }

    /// Orthogonal direct sum (block-diagonal Gram).
    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let (r1, r2) = (self.rank(), other.rank());
        let mut gram = vec![vec![Integer::zero(); r1 + r2]; r1 + r2];
        for i in 0..r1 {
            gram[i][..r1].clone_from_slice(&self.gram[i]);
        }
        for i in 0..r2 {
            gram[r1 + i][r1..].clone_from_slice(&other.gram[i]);
        }
        IntegralLattice { gram }
    }

    /// `L(m)`: every entry multiplied by `m ≠ 0`.
    pub fn rescale(&self, m: &Integer) -> Result<IntegralLattice> {
        if m.is_zero() {
            return Err(Error::rejected("rescaling factor must be nonzero"));
        }
        let gram = self.gram.iter().map(|row| row.iter().map(|x| x * m).collect()).collect();
        Ok(IntegralLattice { gram })
    }

    /// `L ⊕ ⟨square⟩`, adjoining one generator orthogonal to `L`.
    pub fn extend_by_rank_one(&self, square: Integer) -> IntegralLattice {
        self.direct_sum(&IntegralLattice { gram: vec![vec![square]] })
    }
}

pub fn k3_lattice() -> IntegralLattice {
    IntegralLattice::standard(StandardLattice::K3)
}
