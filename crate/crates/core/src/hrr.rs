//! Characteristic numbers of surfaces and the counting exercises built on
//! them: Riemann–Roch on surfaces, the K3 Hodge diamond, second Betti
//! numbers of symmetric powers and Hilbert schemes, Euler characteristics of
//! Hilbert schemes of points, compactified Jacobians, and decompositions by
//! holomorphic Euler characteristic.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};

/// `c₁(X)²` and `c₂(X)` of a compact complex surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceChernData {
    pub c1_sq: Integer,
    pub c2: Integer,
}

impl SurfaceChernData {
    pub fn new(c1_sq: i64, c2: i64) -> Self {
        SurfaceChernData { c1_sq: c1_sq.into(), c2: c2.into() }
    }

    pub fn k3() -> Self {
        Self::new(0, 24)
    }

    pub fn projective_plane() -> Self {
        Self::new(9, 3)
    }
}

/// Chern data of a bundle `F` on a surface `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleChernData {
    pub rank: u32,
    pub c1_sq: Integer,
    /// `c₁(F)·c₁(X)`.
    pub c1_dot_c1x: Integer,
    pub c2: Integer,
}

impl BundleChernData {
    pub fn new(rank: u32, c1_sq: i64, c1_dot_c1x: i64, c2: i64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::rejected("bundle rank must be at least 1"));
        }
        Ok(BundleChernData { rank, c1_sq: c1_sq.into(), c1_dot_c1x: c1_dot_c1x.into(), c2: c2.into() })
    }

    pub fn trivial() -> Self {
        BundleChernData { rank: 1, c1_sq: Integer::zero(), c1_dot_c1x: Integer::zero(), c2: Integer::zero() }
    }

    /// Data with the rank, `c₁·c₁(X)` and `ch₂` of `F ⊕ G`. The cross term
    /// `c₁F·c₁G` is unknown here, but it cancels in `ch₂`, which is all that
    /// Riemann–Roch sees.
    pub fn direct_sum(&self, other: &Self) -> Self {
        BundleChernData {
            rank: self.rank + other.rank,
            c1_sq: &self.c1_sq + &other.c1_sq,
            c1_dot_c1x: &self.c1_dot_c1x + &other.c1_dot_c1x,
            c2: &self.c2 + &other.c2,
        }
    }
}

/// Degree-one and degree-two coefficients of a Todd class
/// `1 + t₁c₁ + (a·c₁² + b·c₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToddClass {
    pub deg1: Rational,
    pub deg2_c1_sq: Rational,
    pub deg2_c2: Rational,
}

impl ToddClass {
    /// `1 + c₁/2 + (c₁² + c₂)/12`.
    pub fn standard() -> Self {
        ToddClass { deg1: exact::ratio(1, 2), deg2_c1_sq: exact::ratio(1, 12), deg2_c2: exact::ratio(1, 12) }
    }

    /// The same series with the degree-one term written as `c₁²/2`, which
    /// moves it into degree two. Kept to show which checks can tell the two
    /// apart: on surfaces with `c₁ = 0` they agree.
    pub fn squared_degree_one() -> Self {
        ToddClass { deg1: Rational::zero(), deg2_c1_sq: exact::ratio(7, 12), deg2_c2: exact::ratio(1, 12) }
    }
}

/// `χ(X, F) = ∫ ch(F)·td(X)` on a surface, with the standard Todd class.
pub fn hrr_chi_surface(x: &SurfaceChernData, f: &BundleChernData) -> Result<Integer> {
    hrr_chi_surface_with(x, f, &ToddClass::standard())
}

pub fn hrr_chi_surface_with(x: &SurfaceChernData, f: &BundleChernData, todd: &ToddClass) -> Result<Integer> {
    let chi = hrr_chi_rational(x, f, todd);
    if !chi.is_integer() {
        return Err(Error::inconsistent(format!("Riemann–Roch gives the non-integer χ = {chi}")));
    }
    Ok(chi.to_integer())
}

fn hrr_chi_rational(x: &SurfaceChernData, f: &BundleChernData, todd: &ToddClass) -> Rational {
    let r = |v: &Integer| Rational::from_integer(v.clone());
    let td2 = &todd.deg2_c1_sq * r(&x.c1_sq) + &todd.deg2_c2 * r(&x.c2);
    let ch2 = (r(&f.c1_sq) - Rational::from_integer(2.into()) * r(&f.c2)) / Rational::from_integer(2.into());
    Rational::from_integer(f.rank.into()) * td2 + &todd.deg1 * r(&f.c1_dot_c1x) + ch2
}

/// `c₂` from `χ(𝒪)` and `c₁²`: Noether's relation `12χ(𝒪) = c₁² + c₂`.
pub fn solve_c2(chi_o: &Integer, c1_sq: &Integer) -> Integer {
    BigInt::from(12) * chi_o - c1_sq
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiamond {
    /// `h[p][q] = h^{p,q}` for `0 ≤ p, q ≤ 2`.
    pub h: [[Integer; 3]; 3],
}

impl HodgeDiamond {
    pub fn betti(&self) -> [Integer; 5] {
        let mut b: [Integer; 5] = Default::default();
        for p in 0..3 {
            for q in 0..3 {
                b[p + q] += &self.h[p][q];
            }
        }
        b
    }

    pub fn euler(&self) -> Integer {
        self.betti().iter().enumerate().fold(Integer::zero(), |acc, (k, b)| if k % 2 == 0 { acc + b } else { acc - b })
    }
}

/// The Hodge diamond of a K3 surface, derived from `χ(𝒪) = 2`, `χ(Ω¹) = −20`
/// (both by Riemann–Roch), `b₁ = 0`, Serre duality and conjugation.
pub fn k3_hodge_diamond() -> Result<HodgeDiamond> {
    let x = SurfaceChernData::k3();
    let chi_o = hrr_chi_surface(&x, &BundleChernData::trivial())?;
    // Ω¹ of a K3: rank 2, c₁ = 0, c₂ = c₂(X).
    let omega = BundleChernData { rank: 2, c1_sq: Integer::zero(), c1_dot_c1x: Integer::zero(), c2: x.c2.clone() };
    let chi_omega = hrr_chi_surface(&x, &omega)?;
    let h00 = Integer::one();
    let h01 = Integer::zero();
    // χ(𝒪) = h⁰⁰ − h⁰¹ + h⁰².
    let h02 = &chi_o - &h00 + &h01;
    // χ(Ω¹) = h¹⁰ − h¹¹ + h¹², with h¹⁰ = h⁰¹ and h¹² = h¹⁰ by duality.
    let h10 = h01.clone();
    let h12 = h10.clone();
    let h11 = &h10 + &h12 - &chi_omega;
    let h = [
        [h00.clone(), h01.clone(), h02.clone()],
        [h10.clone(), h11, h12.clone()],
        [h02, h12, h00],
    ];
    Ok(HodgeDiamond { h })
}

/// `b₂` of the `r`-th symmetric power (`r ≥ 2`): `b₂ + C(b₁, 2)`.
pub fn sym_power_h2_rank(b1: u64, b2: u64) -> Integer {
    BigInt::from(b2) + exact::binomial(b1, 2)
}

/// `b₂` of the Hilbert scheme of `r ≥ 2` points: one more than the symmetric power.
pub fn hilb_h2_rank(b1: u64, b2: u64) -> Integer {
    sym_power_h2_rank(b1, b2) + 1
}

/// `b₂` of a generalized Kummer variety from `b₂` of the abelian surface.
pub fn kummer_b2(b2_a: u64) -> Integer {
    BigInt::from(b2_a) + 1
}

/// Power series truncated at an explicit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<Integer>,
}

impl IntegerSeries {
    pub fn new(coeffs: Vec<Integer>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::rejected("a series needs at least the constant term"));
        }
        Ok(IntegerSeries { coeffs })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&Integer> {
        self.coeffs.get(k)
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &IntegerSeries) -> IntegerSeries {
        let n = self.truncation().min(other.truncation());
        let coeffs = (0..=n)
            .map(|k| (0..=k).fold(Integer::zero(), |acc, i| acc + &self.coeffs[i] * &other.coeffs[k - i]))
            .collect();
        IntegerSeries { coeffs }
    }
}

fn divisor_sum(k: u64) -> Integer {
    (1..=k).filter(|d| k % d == 0).map(BigInt::from).sum()
}

/// `Π_{k≥1} (1 − q^k)^{−e}` to order `order`, via `n·a_n = e·Σ_{k=1}^{n} σ(k)·a_{n−k}`.
pub fn goettsche_series(e: i64, order: usize) -> IntegerSeries {
    let e = BigInt::from(e);
    let sigma: Vec<Integer> = (0..=order as u64).map(|k| if k == 0 { Integer::zero() } else { divisor_sum(k) }).collect();
    let mut a: Vec<Integer> = vec![Integer::one()];
    for n in 1..=order {
        let s = (1..=n).fold(Integer::zero(), |acc, k| acc + &sigma[k] * &a[n - k]);
        a.push(&e * s / BigInt::from(n));
    }
    IntegerSeries { coeffs: a }
}

/// `e(X^{[2]}) = (e² + 3e)/2`: the symmetric square blown up along the
/// diagonal, which is replaced by a `ℙ¹`-bundle over `X`.
pub fn hilb2_euler(e: i64) -> Integer {
    let e = BigInt::from(e);
    (&e * &e + BigInt::from(3) * &e) / BigInt::from(2)
}

/// Euler number of a nodal rational curve: `e(ℙ¹) − e(point) = 2 − 1`.
pub const NODAL_RATIONAL_EULER: i64 = 1;

/// Number of singular fibers of an elliptic fibration, each of Euler number
/// `e_singular`; smooth elliptic fibers contribute 0.
pub fn elliptic_fiber_count(e_total: i64, e_singular: i64) -> Result<Integer> {
    if e_singular < 1 {
        return Err(Error::rejected("singular fiber Euler number must be at least 1"));
    }
    if e_total % e_singular != 0 {
        return Err(Error::inconsistent(format!("{e_total} is not a multiple of {e_singular}")));
    }
    Ok(BigInt::from(e_total / e_singular))
}

/// `e(ℂ*) = e(ℙ¹) − 2`.
const EULER_CSTAR: i64 = 0;

/// Euler number of the compactified Jacobian of an integral curve with
/// `nodes` nodes whose normalization has genus `normalization_genus`.
/// Positive genus gives 0. For a rational normalization the Jacobian is
/// stratified by node subsets `S`, the stratum for `S` being `(ℂ*)^{nodes−|S|}`.
pub fn jacobian_euler(normalization_genus: u32, nodes: u32) -> Integer {
    if normalization_genus >= 1 {
        return Integer::zero();
    }
    let cstar = BigInt::from(EULER_CSTAR);
    (0..=nodes).fold(Integer::zero(), |acc, k| {
        let torus = num_traits::pow(cstar.clone(), (nodes - k) as usize);
        acc + exact::binomial(u64::from(nodes), u64::from(k)) * torus
    })
}

/// `(dim X^{[n]}, dim 𝒥̄)` for a surface and a genus `n` curve family: both `2n`.
pub fn moduli_dims(n: u64) -> (u64, u64) {
    (2 * n, 2 * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    Hyperkahler,
    StrictCalabiYau,
    Torus,
}

/// One factor of a decomposition, by complex dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecompositionFactor {
    pub kind: FactorKind,
    pub complex_dim: u32,
}

impl DecompositionFactor {
    pub fn new(kind: FactorKind, complex_dim: u32) -> Result<Self> {
        let ok = match kind {
            FactorKind::Hyperkahler => complex_dim >= 2 && complex_dim % 2 == 0,
            FactorKind::StrictCalabiYau => complex_dim >= 3,
            FactorKind::Torus => complex_dim >= 1,
        };
        if !ok {
            return Err(Error::rejected(format!("no {kind:?} factor of complex dimension {complex_dim}")));
        }
        Ok(DecompositionFactor { kind, complex_dim })
    }

    /// `χ(𝒪)`: `r + 1` for hyperkähler of dimension `2r`, `1 + (−1)^m` for
    /// strict Calabi–Yau of dimension `m`, 0 for tori.
    pub fn chi(&self) -> i64 {
        let d = i64::from(self.complex_dim);
        match self.kind {
            FactorKind::Hyperkahler => d / 2 + 1,
            FactorKind::StrictCalabiYau => 1 + if d % 2 == 0 { 1 } else { -1 },
            FactorKind::Torus => 0,
        }
    }

    pub fn label(&self) -> alloc::string::String {
        match self.kind {
            FactorKind::Hyperkahler => format!("HK({})", self.complex_dim),
            FactorKind::StrictCalabiYau => format!("StrictCY({})", self.complex_dim),
            FactorKind::Torus => format!("Torus({})", self.complex_dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    /// Each entry sorted, the list itself sorted.
    pub decompositions: Vec<Vec<DecompositionFactor>>,
    /// `χ = 0` cannot separate odd-dimensional Calabi–Yau factors from tori.
    pub ambiguous: bool,
}

/// All multisets of factors with total dimension `complex_dim` and product
/// of `χ(𝒪)` equal to `chi`. At most one torus factor appears, since a
/// product of tori is a torus.
pub fn chi_decomposition_enumerate(complex_dim: u32, chi: i64) -> Result<DecompositionReport> {
    if complex_dim == 0 {
        return Err(Error::rejected("complex dimension must be at least 1"));
    }
    let mut kinds = Vec::new();
    for d in 1..=complex_dim {
        for kind in [FactorKind::Hyperkahler, FactorKind::StrictCalabiYau, FactorKind::Torus] {
            if let Ok(f) = DecompositionFactor::new(kind, d) {
                kinds.push(f);
            }
        }
    }
    kinds.sort();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        kinds: &[DecompositionFactor],
        from: usize,
        remaining: u32,
        current: &mut Vec<DecompositionFactor>,
        chi: i64,
        out: &mut Vec<Vec<DecompositionFactor>>,
    ) {
        if remaining == 0 {
            let tori = current.iter().filter(|f| f.kind == FactorKind::Torus).count();
            let product: i64 = current.iter().map(DecompositionFactor::chi).product();
            if tori <= 1 && product == chi {
                out.push(current.clone());
            }
            return;
        }
        for (i, f) in kinds.iter().enumerate().skip(from) {
            if f.complex_dim <= remaining {
                current.push(*f);
                go(kinds, i, remaining - f.complex_dim, current, chi, out);
                current.pop();
            }
        }
    }
    go(&kinds, 0, complex_dim, &mut current, chi, &mut out);
    out.sort();
    Ok(DecompositionReport { decompositions: out, ambiguous: chi == 0 })
}

pub fn slope(deg: &Rational, rank: u32) -> Result<Rational> {
    if rank == 0 {
        return Err(Error::rejected("rank must be at least 1"));
    }
    Ok(deg / Rational::from_integer(rank.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stability {
    pub stable: bool,
    pub semistable: bool,
}

/// Compares the slope of `F` with the slopes of its proper subsheaves.
pub fn stability(f_slope: &Rational, sub_slopes: &[Rational]) -> Stability {
    Stability {
        stable: sub_slopes.iter().all(|s| s < f_slope),
        semistable: sub_slopes.iter().all(|s| s <= f_slope),
    }
}

/// Bitangents of a smooth plane curve of degree `d`: `d(d−2)(d−3)(d+3)/2`.
pub fn plane_curve_bitangents(d: u64) -> Result<Integer> {
    if d < 2 {
        return Err(Error::rejected("degree must be at least 2"));
    }
    let d = BigInt::from(d);
    Ok(&d * (&d - 2) * (&d - 3) * (&d + 3) / BigInt::from(2))
}

/// Bitangents of a very general plane sextic, read off the K3 count of
/// genus-2 rational curves and checked against the plane-curve formula.
pub fn bitangent_count_sextic() -> Result<Integer> {
    let from_series = goettsche_series(24, 2).coeffs[2].clone();
    let classical = plane_curve_bitangents(6)?;
    if from_series != classical {
        return Err(Error::inconsistent(format!("series gives {from_series}, plane formula gives {classical}")));
    }
    Ok(from_series)
}
