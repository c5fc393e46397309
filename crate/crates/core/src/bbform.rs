//! The Beauville–Bogomolov form and the Fujiki relation.
//!
//! A [`FujikiData`] packages the half-dimension `n`, a rational symmetric
//! form `q` on a basis of `H²`, and the Fujiki constant `c`, so that the top
//! self-intersection is `∫ α^{2n} = c · q(α)ⁿ`. The mixed intersection of
//! `2n` classes is the polarization of that identity: the sum over perfect
//! matchings of the `2n` slots of the product of pairings, divided by
//! `(2n−1)!!` (the number of matchings), so that it restricts to `c·q(α)ⁿ`
//! on the diagonal.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_len, Error, Result};
use crate::exact::{self, GaussianRational, Rational};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct FujikiData {
    n: u32,
    form: Vec<Vec<Rational>>,
    c: Rational,
}

impl FujikiData {
    pub fn new(n: u32, form: Vec<Vec<Rational>>, c: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::rejected("half-dimension n must be at least 1"));
        }
        if !c.is_positive() {
            return Err(Error::rejected("Fujiki constant must be positive"));
        }
        let r = form.len();
        if r == 0 {
            return Err(Error::rejected("form must have positive rank"));
        }
        for row in &form {
            check_len(r, row.len())?;
        }
        for i in 0..r {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(Error::rejected(format!("form is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(FujikiData { n, form, c })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn form(&self) -> &[Vec<Rational>] {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.len()
    }

    /// The constant in `∫α^{2n} = d_X q(α)ⁿ`; the model identifies it with `c`.
    pub fn d_x(&self) -> &Rational {
        &self.c
    }

    /// Positive real `n`-th root of `d_X`, evaluated in floating point.
    pub fn r_x(&self) -> f64 {
        libm::pow(exact::to_f64(&self.c), 1.0 / f64::from(self.n))
    }

    pub fn bilinear(&self, a: &[Rational], b: &[Rational]) -> Result<Rational> {
        check_len(self.dim(), a.len())?;
        check_len(self.dim(), b.len())?;
        Ok(linalg::bilinear(&self.form, a, b))
    }

    pub fn quadratic(&self, a: &[Rational]) -> Result<Rational> {
        self.bilinear(a, a)
    }

    /// `c · q(α)ⁿ`, the model of `∫ α^{2n}`.
    pub fn top_intersection(&self, alpha: &[Rational]) -> Result<Rational> {
        let q = self.quadratic(alpha)?;
        Ok(&self.c * pow(&q, self.n))
    }

    /// Mixed intersection `∫ α₁ ⋯ α_{2n}`.
    pub fn mixed_intersection(&self, alphas: &[Vec<Rational>]) -> Result<Rational> {
        let slots = 2 * self.n as usize;
        if alphas.len() != slots {
            return Err(Error::rejected(format!("expected {slots} classes, got {}", alphas.len())));
        }
        for a in alphas {
            check_len(self.dim(), a.len())?;
        }
        let table: Vec<Vec<Rational>> = alphas
            .iter()
            .map(|a| alphas.iter().map(|b| linalg::bilinear(&self.form, a, b)).collect())
            .collect();
        let sum = matching_sum(&table);
        Ok(&self.c * sum / BigRational::from_integer(odd_double_factorial(self.n)))
    }

    /// Mixed intersection with `copies` slots filled by an isotropic class
    /// `β` and the remaining slots by `fillers`. Whenever `copies ≥ n + 1`
    /// every matching pairs two copies of `β`, so the value is exactly 0.
    pub fn isotropic_power_vanishing(
        &self,
        beta: &[Rational],
        fillers: &[Vec<Rational>],
        copies: usize,
    ) -> Result<Rational> {
        if !self.quadratic(beta)?.is_zero() {
            return Err(Error::rejected("class is not isotropic: q(β) ≠ 0"));
        }
        let slots = 2 * self.n as usize;
        if copies + fillers.len() != slots {
            return Err(Error::rejected(format!(
                "{copies} copies and {} fillers do not fill {slots} slots",
                fillers.len()
            )));
        }
        let mut alphas: Vec<Vec<Rational>> = vec![beta.to_vec(); copies];
        alphas.extend(fillers.iter().cloned());
        self.mixed_intersection(&alphas)
    }
}

fn pow(q: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * q)
}

/// `(2n − 1)!! = 1·3·5⋯(2n−1)`, the number of perfect matchings of `2n` points.
pub fn odd_double_factorial(n: u32) -> BigInt {
    (1..=u64::from(n)).fold(BigInt::one(), |acc, k| acc * BigInt::from(2 * k - 1))
}

/// All perfect matchings of `{0, …, m−1}` (`m` even), each listed as pairs
/// `(i, j)` with `i < j`, in lexicographic order of construction.
pub fn perfect_matchings(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(current.clone());
            return;
        };
        for (k, &partner) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(k);
            current.push((first, partner));
            go(&remaining, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if m % 2 == 0 {
        let idx: Vec<usize> = (0..m).collect();
        go(&idx, &mut Vec::new(), &mut out);
    }
    out
}

/// `Σ_matchings Π q(α_i, α_j)` from a precomputed pairing table.
fn matching_sum(table: &[Vec<Rational>]) -> Rational {
    fn go(table: &[Vec<Rational>], rest: &[usize]) -> Rational {
        let Some((&first, tail)) = rest.split_first() else {
            return Rational::one();
        };
        let mut acc = Rational::zero();
        for (k, &partner) in tail.iter().enumerate() {
            let factor = &table[first][partner];
            if factor.is_zero() {
                continue;
            }
            let mut remaining = tail.to_vec();
            remaining.remove(k);
            acc += factor * go(table, &remaining);
        }
        acc
    }
    let idx: Vec<usize> = (0..table.len()).collect();
    go(table, &idx)
}

/// A class `α = λσ + β + μσ̄` with `β` in a model of `H^{1,1}` carrying the
/// pairing `Q11(β, β') = ∫ β β' (σσ̄)^{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDecomposedClass {
    pub lambda: GaussianRational,
    pub mu: GaussianRational,
    pub beta: Vec<Rational>,
    pub q11: Vec<Vec<Rational>>,
    /// Whether `σ` is normalized by `∫ (σσ̄)ⁿ = 1`; [`bb_eval`] needs it.
    pub unit_volume: bool,
}

/// `q_X(α) = λμ + (n/2) · Q11(β, β)`.
pub fn bb_eval(alpha: &HodgeDecomposedClass, n: u32) -> Result<GaussianRational> {
    if n == 0 {
        return Err(Error::rejected("half-dimension n must be at least 1"));
    }
    if !alpha.unit_volume {
        return Err(Error::rejected("the λμ + (n/2)Q11 formula needs σ normalized to ∫(σσ̄)ⁿ = 1"));
    }
    check_len(alpha.q11.len(), alpha.beta.len())?;
    for row in &alpha.q11 {
        check_len(alpha.beta.len(), row.len())?;
    }
    let beta_sq = linalg::bilinear(&alpha.q11, &alpha.beta, &alpha.beta);
    let half_n = BigRational::new(BigInt::from(n), BigInt::from(2));
    let real_part = GaussianRational::new(half_n * beta_sq, Rational::zero());
    Ok(&alpha.lambda * &alpha.mu + real_part)
}

/// The quantities `q(E)`, `q(A)`, `q(E, A)` of two divisors together with
/// `n` and the Fujiki constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorPairData {
    pub q_e: Rational,
    pub q_a: Rational,
    pub q_ea: Rational,
    pub n: u32,
    pub c: Rational,
}

/// Intersection numbers `E^m · A^{2n−m}` for `m = 0..=2n`, read off from
/// `(tE + A)^{2n} = c · (t²q(E) + 2t q(E,A) + q(A))ⁿ`: the coefficient of
/// `t^m` equals `C(2n, m) · E^m A^{2n−m}`.
pub fn matsushita_expand(d: &DivisorPairData) -> Result<Vec<Rational>> {
    if d.n == 0 {
        return Err(Error::rejected("half-dimension n must be at least 1"));
    }
    // Coefficients of the quadratic in t, lowest degree first.
    let quad = [d.q_a.clone(), &d.q_ea * BigRational::from_integer(BigInt::from(2)), d.q_e.clone()];
    let mut poly = vec![Rational::one()];
    for _ in 0..d.n {
        let mut next = vec![Rational::zero(); poly.len() + 2];
        for (i, p) in poly.iter().enumerate() {
            for (j, a) in quad.iter().enumerate() {
                next[i + j] += p * a;
            }
        }
        poly = next;
    }
    let two_n = 2 * u64::from(d.n);
    Ok(poly
        .iter()
        .enumerate()
        .map(|(m, coeff)| &d.c * coeff / BigRational::from_integer(exact::binomial(two_n, m as u64)))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrivialityReport {
    /// Both `q(E) = 0` and `q(E, A) = 0`.
    pub trivial: bool,
    pub q_e: Rational,
    pub q_ea: Rational,
}

/// Given the measured `E^{2n}` (`top_e`) and `E · A^{2n−1}` (`mixed`) for an
/// ample `A`, decides whether they force `q(E) = 0` and `q(E, A) = 0`.
/// The measurements must agree with the form data in `d`.
pub fn numerically_trivial_test(d: &DivisorPairData, top_e: &Rational, mixed: &Rational) -> Result<TrivialityReport> {
    if !d.q_a.is_positive() {
        return Err(Error::rejected("A must be ample, so q(A) > 0"));
    }
    let expansion = matsushita_expand(d)?;
    let two_n = 2 * d.n as usize;
    if &expansion[two_n] != top_e {
        return Err(Error::inconsistent(format!(
            "E^{two_n} = {top_e} but c·q(E)^n = {}",
            expansion[two_n]
        )));
    }
    if &expansion[1] != mixed {
        return Err(Error::inconsistent(format!(
            "E·A^{} = {mixed} but the form data give {}",
            two_n - 1,
            expansion[1]
        )));
    }
    // c > 0 and q(A) > 0: E^{2n} = c q(E)ⁿ = 0 forces q(E) = 0, and then
    // E·A^{2n−1} = c q(E,A) q(A)^{n−1} = 0 forces q(E,A) = 0.
    Ok(TrivialityReport {
        trivial: top_e.is_zero() && mixed.is_zero(),
        q_e: d.q_e.clone(),
        q_ea: d.q_ea.clone(),
    })
}

/// A symmetric multilinear table `T(e_{i₁}, …, e_{i_k})` on a basis,
/// stored row-major over the `k` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionTable {
    dim: usize,
    order: usize,
    values: Vec<Rational>,
}

impl IntersectionTable {
    pub fn new(dim: usize, order: usize, values: Vec<Rational>) -> Result<Self> {
        if dim == 0 || order == 0 {
            return Err(Error::rejected("table needs positive dimension and order"));
        }
        let expected = dim.checked_pow(order as u32).ok_or_else(|| Error::rejected("table too large"))?;
        check_len(expected, values.len())?;
        Ok(IntersectionTable { dim, order, values })
    }

    /// The table `∫ e_{i₁} ⋯ e_{i_{2n}}` determined by `fd`.
    pub fn from_fujiki(fd: &FujikiData) -> Self {
        let dim = fd.dim();
        let order = 2 * fd.n as usize;
        let total = dim.pow(order as u32);
        let norm = BigRational::from_integer(odd_double_factorial(fd.n));
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; order];
        for _ in 0..total {
            let table: Vec<Vec<Rational>> =
                idx.iter().map(|&a| idx.iter().map(|&b| fd.form[a][b].clone()).collect()).collect();
            values.push(&fd.c * matching_sum(&table) / &norm);
            for slot in (0..order).rev() {
                idx[slot] += 1;
                if idx[slot] < dim {
                    break;
                }
                idx[slot] = 0;
            }
        }
        IntersectionTable { dim, order, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        let flat = idx.iter().fold(0, |acc, &i| acc * self.dim + i);
        &self.values[flat]
    }

    /// Contracts the last slot against `v`, lowering the order by one.
    pub fn contract(&self, v: &[Rational]) -> Result<IntersectionTable> {
        check_len(self.dim, v.len())?;
        if self.order == 1 {
            return Err(Error::rejected("cannot contract an order-1 table to order 0"));
        }
        let values = self
            .values
            .chunks(self.dim)
            .map(|chunk| exact::dot(chunk, v))
            .collect();
        Ok(IntersectionTable { dim: self.dim, order: self.order - 1, values })
    }

    /// Full evaluation on `order` vectors.
    pub fn evaluate(&self, vectors: &[&[Rational]]) -> Result<Rational> {
        check_len(self.order, vectors.len())?;
        let (last, init) = vectors.split_last().expect("order >= 1");
        let mut t = self.clone();
        for v in init.iter().rev() {
            t = t.contract(v)?;
        }
        check_len(self.dim, last.len())?;
        Ok(exact::dot(&t.values, last))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecoveredForm {
    Exact(Vec<Vec<Rational>>),
    /// Floating fallback used when the pivot radicand is not a rational
    /// square; `residual` is the largest relative table mismatch.
    Approximate { gram: Vec<Vec<f64>>, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoverOptions {
    pub allow_float_fallback: bool,
    pub tolerance: f64,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions { allow_float_fallback: false, tolerance: 1e-12 }
    }
}

/// Recovers the form `q` from a top-intersection table (`n ∈ {1, 2}`).
///
/// For `n = 1` the table is `c · q`. For `n = 2` the reference class `r`
/// (with `q(r) ≠ 0`) is used as a pivot: `q(r) = √(T(r,r,r,r)/c)` is taken
/// positive, then `q(r, e_j) = T(r,r,r,e_j) / (c q(r))` and
/// `q(e_j, e_k) = (3 T(r,r,e_j,e_k)/c − 2 q(r,e_j) q(r,e_k)) / q(r)`.
/// The result is re-expanded and compared with the input table.
pub fn bb_recover(
    n: u32,
    c: &Rational,
    table: &IntersectionTable,
    reference: &[Rational],
    opts: RecoverOptions,
) -> Result<RecoveredForm> {
    if !c.is_positive() {
        return Err(Error::rejected("Fujiki constant must be positive"));
    }
    let dim = table.dim();
    check_len(dim, reference.len())?;
    match n {
        1 => {
            check_len(2, table.order())?;
            let q: Vec<Vec<Rational>> =
                (0..dim).map(|i| (0..dim).map(|j| table.get(&[i, j]) / c).collect()).collect();
            let fd = FujikiData::new(1, q.clone(), c.clone())
                .map_err(|_| Error::inconsistent("bilinear table is not symmetric"))?;
            let qr = fd.quadratic(reference)?;
            if qr.is_zero() {
                return Err(Error::rejected("reference class must have q(ref) ≠ 0"));
            }
            if qr.is_negative() {
                return Err(Error::inconsistent("for n = 1 the table fixes the sign and q(ref) < 0"));
            }
            Ok(RecoveredForm::Exact(q))
        }
        2 => {
            check_len(4, table.order())?;
            let t3 = table.contract(reference)?;
            let t2 = t3.contract(reference)?;
            let t1 = t2.contract(reference)?;
            let t0 = exact::dot(t1.values(), reference);
            let radicand = &t0 / c;
            if radicand.is_zero() {
                return Err(Error::rejected("reference class must have q(ref) ≠ 0"));
            }
            if radicand.is_negative() {
                return Err(Error::inconsistent("T(ref,ref,ref,ref)/c is negative, so no real form fits"));
            }
            let three = BigRational::from_integer(BigInt::from(3));
            let two = BigRational::from_integer(BigInt::from(2));
            match exact::sqrt_exact(&radicand) {
                Some(q_rr) => {
                    let q_rj: Vec<Rational> = t1.values().iter().map(|t| t / (c * &q_rr)).collect();
                    let q: Vec<Vec<Rational>> = (0..dim)
                        .map(|j| {
                            (0..dim)
                                .map(|k| (&three * t2.get(&[j, k]) / c - &two * &q_rj[j] * &q_rj[k]) / &q_rr)
                                .collect()
                        })
                        .collect();
                    let fd = FujikiData::new(2, q.clone(), c.clone())
                        .map_err(|_| Error::inconsistent("recovered form is not symmetric"))?;
                    if IntersectionTable::from_fujiki(&fd) != *table {
                        return Err(Error::inconsistent("table is not c·(polarized q²) for any symmetric q"));
                    }
                    Ok(RecoveredForm::Exact(q))
                }
                None if opts.allow_float_fallback => recover_quartic_f64(c, table, &t1, &t2, &radicand, opts),
                None => Err(Error::rejected(format!(
                    "T(ref⁴)/c = {radicand} is not a rational square; enable the floating fallback"
                ))),
            }
        }
        _ => Err(Error::rejected("form recovery is implemented for n = 1 and n = 2 only")),
    }
}

fn recover_quartic_f64(
    c: &Rational,
    table: &IntersectionTable,
    t1: &IntersectionTable,
    t2: &IntersectionTable,
    radicand: &Rational,
    opts: RecoverOptions,
) -> Result<RecoveredForm> {
    let dim = table.dim();
    let cf = exact::to_f64(c);
    let q_rr = libm::sqrt(exact::to_f64(radicand));
    let q_rj: Vec<f64> = t1.values().iter().map(|t| exact::to_f64(t) / (cf * q_rr)).collect();
    let gram: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| (3.0 * exact::to_f64(t2.get(&[j, k])) / cf - 2.0 * q_rj[j] * q_rj[k]) / q_rr)
                .collect()
        })
        .collect();
    let scale = table.values().iter().map(|t| exact::to_f64(t).abs()).fold(0.0f64, f64::max).max(1.0);
    let mut residual = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            for x in 0..dim {
                for y in 0..dim {
                    let model = cf / 3.0
                        * (gram[a][b] * gram[x][y] + gram[a][x] * gram[b][y] + gram[a][y] * gram[b][x]);
                    let diff = (model - exact::to_f64(table.get(&[a, b, x, y]))).abs() / scale;
                    residual = residual.max(diff);
                }
            }
        }
    }
    if residual > opts.tolerance {
        return Err(Error::inconsistent(format!("recovered form misses the table by {residual:e}")));
    }
    Ok(RecoveredForm::Approximate { gram, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, rats};

    fn u_form() -> Vec<Vec<Rational>> {
        vec![rats(&[0, 1]), rats(&[1, 0])]
    }

    #[test]
    fn bb_eval_examples() {
        let one = GaussianRational::new(rat(1), rat(0));
        let zero = GaussianRational::new(rat(0), rat(0));
        let class = |lambda: &GaussianRational, mu: &GaussianRational, beta: Vec<Rational>| HodgeDecomposedClass {
            lambda: lambda.clone(),
            mu: mu.clone(),
            beta,
            q11: vec![rats(&[3])],
            unit_volume: true,
        };
        for n in 1..4 {
            assert_eq!(bb_eval(&class(&one, &zero, rats(&[0])), n).unwrap(), zero);
            assert_eq!(bb_eval(&class(&one, &one, rats(&[0])), n).unwrap(), one);
        }
        let v = bb_eval(&class(&zero, &zero, rats(&[1])), 2).unwrap();
        assert_eq!(v, GaussianRational::new(rat(3), rat(0)));
        let mut bad = class(&zero, &zero, rats(&[1, 2]));
        assert!(matches!(bb_eval(&bad, 2), Err(Error::DimensionMismatch { .. })));
        bad = class(&zero, &zero, rats(&[1]));
        bad.unit_volume = false;
        assert!(bb_eval(&bad, 2).is_err());
    }

    #[test]
    fn fujiki_top_examples() {
        let fd = FujikiData::new(1, u_form(), rat(1)).unwrap();
        assert_eq!(fd.top_intersection(&rats(&[1, 1])).unwrap(), rat(2));
        let fd2 = FujikiData::new(2, vec![rats(&[2])], rat(3)).unwrap();
        assert_eq!(fd2.top_intersection(&rats(&[1])).unwrap(), rat(12));
        assert_eq!(fd2.top_intersection(&rats(&[0])).unwrap(), rat(0));
    }

    #[test]
    fn polarized_examples() {
        let fd = FujikiData::new(1, u_form(), rat(5)).unwrap();
        let (a, b) = (rats(&[1, 2]), rats(&[3, -1]));
        assert_eq!(fd.mixed_intersection(&[a.clone(), b.clone()]).unwrap(), rat(5) * fd.bilinear(&a, &b).unwrap());
        let fd2 = FujikiData::new(2, u_form(), rat(7)).unwrap();
        let expected = ratio(7, 3)
            * (fd2.quadratic(&a).unwrap() * fd2.quadratic(&b).unwrap()
                + rat(2) * fd2.bilinear(&a, &b).unwrap() * fd2.bilinear(&a, &b).unwrap());
        assert_eq!(fd2.mixed_intersection(&[a.clone(), a.clone(), b.clone(), b.clone()]).unwrap(), expected);
        assert!(fd2.mixed_intersection(&[a.clone(), b]).is_err());
        assert_eq!(fd2.mixed_intersection(&[a.clone(), a.clone(), a.clone(), a.clone()]).unwrap(), fd2.top_intersection(&a).unwrap());
    }

    #[test]
    fn isotropic_examples() {
        let beta = rats(&[1, 0]);
        let fd1 = FujikiData::new(1, u_form(), rat(2)).unwrap();
        assert_eq!(fd1.isotropic_power_vanishing(&beta, &[], 2).unwrap(), rat(0));
        let form3 = vec![rats(&[0, 1, 0]), rats(&[1, 0, 0]), rats(&[0, 0, 1])];
        let fd2 = FujikiData::new(2, form3, rat(3)).unwrap();
        let b3 = rats(&[1, 0, 0]);
        assert_eq!(fd2.isotropic_power_vanishing(&b3, &[rats(&[4, 5, 6])], 3).unwrap(), rat(0));
        // q(β,γ) = 1, q(γ) = 0.
        let gamma = rats(&[0, 1, 0]);
        let v = fd2.isotropic_power_vanishing(&b3, &[gamma.clone(), gamma], 2).unwrap();
        assert_eq!(v, ratio(2 * 3, 3));
        assert!(fd2.isotropic_power_vanishing(&rats(&[1, 1, 0]), &[rats(&[0, 0, 1])], 3).is_err());
        assert!(fd2.isotropic_power_vanishing(&b3, &[], 3).is_err());
    }

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(6).len(), 15);
        assert_eq!(perfect_matchings(8).len(), 105);
        assert_eq!(odd_double_factorial(4), BigInt::from(105));
    }

    fn pair(q_e: i64, q_ea: i64, q_a: i64, n: u32, c: i64) -> DivisorPairData {
        DivisorPairData { q_e: rat(q_e), q_a: rat(q_a), q_ea: rat(q_ea), n, c: rat(c) }
    }

    #[test]
    fn matsushita_examples() {
        assert_eq!(matsushita_expand(&pair(0, 1, 2, 1, 1)).unwrap(), rats(&[2, 1, 0]));
        assert_eq!(matsushita_expand(&pair(0, 1, 2, 2, 3)).unwrap(), rats(&[12, 6, 2, 0, 0]));
        let flat = matsushita_expand(&pair(0, 0, 5, 3, 2)).unwrap();
        assert!(flat[1..].iter().all(Zero::is_zero));
        assert_eq!(flat[0], rat(2 * 125));
    }

    #[test]
    fn numerically_trivial_examples() {
        let d = pair(0, 0, 2, 2, 3);
        assert!(numerically_trivial_test(&d, &rat(0), &rat(0)).unwrap().trivial);
        let d = pair(0, 1, 2, 2, 3);
        // c · q(E,A) · q(A)^{n-1} = 3 · 1 · 2.
        let report = numerically_trivial_test(&d, &rat(0), &rat(6)).unwrap();
        assert!(!report.trivial);
        let err = numerically_trivial_test(&d, &rat(1), &rat(6)).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Inconsistent);
    }

    #[test]
    fn recover_examples() {
        let table = IntersectionTable::from_fujiki(&FujikiData::new(1, u_form(), rat(2)).unwrap());
        let got = bb_recover(1, &rat(2), &table, &rats(&[1, 1]), RecoverOptions::default()).unwrap();
        assert_eq!(got, RecoveredForm::Exact(u_form()));

        let q = vec![rats(&[2, 0]), rats(&[0, -2])];
        let table = IntersectionTable::from_fujiki(&FujikiData::new(2, q.clone(), rat(3)).unwrap());
        let got = bb_recover(2, &rat(3), &table, &rats(&[1, 0]), RecoverOptions::default()).unwrap();
        assert_eq!(got, RecoveredForm::Exact(q.clone()));
        // Reference with q < 0 in the original sign: the global sign flips.
        let got = bb_recover(2, &rat(3), &table, &rats(&[0, 1]), RecoverOptions::default()).unwrap();
        let flipped: Vec<Vec<Rational>> = q.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert_eq!(got, RecoveredForm::Exact(flipped));
        assert!(bb_recover(3, &rat(3), &table, &rats(&[1, 0]), RecoverOptions::default()).is_err());
    }

    #[test]
    fn recover_needs_square_or_fallback() {
        // Table built with c = 2 but declared with c = 1, so T(ref⁴)/c = 2·q(ref)².
        let q = vec![rats(&[2, 1]), rats(&[1, -3])];
        let table = IntersectionTable::from_fujiki(&FujikiData::new(2, q, rat(2)).unwrap());
        let err = bb_recover(2, &rat(1), &table, &rats(&[1, 0]), RecoverOptions::default()).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Rejected);
        let opts = RecoverOptions { allow_float_fallback: true, tolerance: 1e-12 };
        match bb_recover(2, &rat(1), &table, &rats(&[1, 0]), opts).unwrap() {
            RecoveredForm::Approximate { gram, residual } => {
                assert!(residual < 1e-12);
                let s = core::f64::consts::SQRT_2;
                assert!((gram[0][0] - 2.0 * s).abs() < 1e-12);
                assert!((gram[0][1] - s).abs() < 1e-12);
                assert!((gram[1][1] + 3.0 * s).abs() < 1e-12);
            }
            other => panic!("expected fallback, got {other:?}"),
        }
    }

    #[test]
    fn recover_rejects_non_fujiki_table() {
        let mut values = vec![rat(0); 16];
        values[0] = rat(4);
        values[15] = rat(4);
        let t = IntersectionTable::new(2, 4, values).unwrap();
        let err = bb_recover(2, &rat(1), &t, &rats(&[1, 0]), RecoverOptions::default()).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Inconsistent);
    }
}
