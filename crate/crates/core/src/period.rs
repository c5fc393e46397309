//! Period domain of a lattice, twistor conics and chains of conics.
//!
//! A period point is `α = x + i·√s·y` up to a nonzero complex scalar, with
//! `x`, `y` rational vectors and `s` a positive rational. Keeping `√s`
//! symbolic lets every point produced by orthonormalizing a rational plane
//! stay exact; `s = 1` is the ordinary `x + iy`.
//!
//! The domain is `{α : q(α) = 0, q(α + ᾱ) > 0}`, i.e. `q(x) = s·q(y)`,
//! `b(x, y) = 0` and `q(x) > 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::exact::{self, GaussianRational, Rational};
use crate::lattice::IntegralLattice;
use crate::linalg::{self, Matrix};

pub mod check;

/// Default bound on the number of conics in a chain.
pub const DEFAULT_MAX_STEPS: usize = 16;

const RESTARTS: u64 = 4;

#[derive(Debug, Clone)]
pub struct PeriodPoint {
    re: Vec<Rational>,
    im: Vec<Rational>,
    im_scale: Rational,
}

impl PeriodPoint {
    /// `x + iy`.
    pub fn new(re: Vec<Rational>, im: Vec<Rational>) -> Result<Self> {
        Self::with_im_scale(re, im, Rational::one())
    }

    /// `x + i·√s·y` with `s > 0`. When `s` is a rational square the root is
    /// folded into `y`.
    pub fn with_im_scale(re: Vec<Rational>, im: Vec<Rational>, im_scale: Rational) -> Result<Self> {
        check_len(re.len(), im.len())?;
        if !im_scale.is_positive() {
            return Err(Error::rejected("imaginary scale must be positive"));
        }
        if exact::is_zero_vec(&re) && exact::is_zero_vec(&im) {
            return Err(Error::rejected("period point must be nonzero"));
        }
        let (im, im_scale) = match exact::sqrt_exact(&im_scale) {
            Some(t) => (exact::scale(&im, &t), Rational::one()),
            None => (im, im_scale),
        };
        Ok(PeriodPoint { re, im, im_scale })
    }

    pub fn re(&self) -> &[Rational] {
        &self.re
    }

    pub fn im(&self) -> &[Rational] {
        &self.im
    }

    /// The `s` in `x + i·√s·y`; equal to 1 whenever the point is rational.
    pub fn im_scale(&self) -> &Rational {
        &self.im_scale
    }

    pub fn is_rational(&self) -> bool {
        self.im_scale.is_one()
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    /// `z·α` for a Gaussian rational `z ≠ 0`; only defined for rational points.
    pub fn times(&self, z: &GaussianRational) -> Result<PeriodPoint> {
        if !self.is_rational() {
            return Err(Error::rejected("complex rescaling needs a rational point"));
        }
        if z.re.is_zero() && z.im.is_zero() {
            return Err(Error::rejected("scalar must be nonzero"));
        }
        let re = exact::sub(&exact::scale(&self.re, &z.re), &exact::scale(&self.im, &z.im));
        let im = exact::add(&exact::scale(&self.re, &z.im), &exact::scale(&self.im, &z.re));
        PeriodPoint::new(re, im)
    }

    /// Complex conjugate `x − i√s·y`.
    pub fn conjugate(&self) -> PeriodPoint {
        PeriodPoint { re: self.re.clone(), im: self.im.iter().map(|v| -v).collect(), im_scale: self.im_scale.clone() }
    }

    /// Floating approximation `(x, √s·y)`.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let t = libm::sqrt(exact::to_f64(&self.im_scale));
        (
            self.re.iter().map(exact::to_f64).collect(),
            self.im.iter().map(|v| t * exact::to_f64(v)).collect(),
        )
    }
}

/// `a = √r · b`, decided exactly.
fn equals_root_times(a: &Rational, r: &Rational, b: &Rational) -> bool {
    if b.is_zero() {
        return a.is_zero();
    }
    a.signum() == b.signum() && a * a == r * b * b
}

impl PartialEq for PeriodPoint {
    /// Projective equality: every 2×2 minor of `(α, α')` vanishes.
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let (s, t) = (&self.im_scale, &other.im_scale);
        let st = s * t;
        let (x, y, xp, yp) = (&self.re, &self.im, &other.re, &other.im);
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let a = &x[i] * &xp[j] - &x[j] * &xp[i];
                let b = &y[i] * &yp[j] - &y[j] * &yp[i];
                if !equals_root_times(&a, &st, &b) {
                    return false;
                }
                // √t·c + √s·d = 0.
                let c = &x[i] * &yp[j] - &x[j] * &yp[i];
                let d = &y[i] * &xp[j] - &y[j] * &xp[i];
                let ok = match (c.is_zero(), d.is_zero()) {
                    (true, true) => true,
                    (false, false) => c.signum() == -d.signum() && t * &c * &c == s * &d * &d,
                    _ => false,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

struct Parts {
    qx: Rational,
    qy: Rational,
    bxy: Rational,
}

fn parts(gram: &[Vec<Rational>], p: &PeriodPoint) -> Parts {
    Parts {
        qx: linalg::bilinear(gram, &p.re, &p.re),
        qy: linalg::bilinear(gram, &p.im, &p.im),
        bxy: linalg::bilinear(gram, &p.re, &p.im),
    }
}

fn in_domain(gram: &[Vec<Rational>], p: &PeriodPoint) -> bool {
    let pr = parts(gram, p);
    pr.bxy.is_zero() && pr.qx == &p.im_scale * &pr.qy && pr.qx.is_positive()
}

/// `q(α) = 0` and `q(α + ᾱ) > 0`, decided exactly.
pub fn in_period_domain(lattice: &IntegralLattice, p: &PeriodPoint) -> Result<bool> {
    check_len(lattice.rank(), p.dim())?;
    Ok(in_domain(&lattice.gram_rational(), p))
}

/// The real and imaginary parts of `q(α)` with `q(α) = q(x) − s·q(y) + 2i√s·b(x,y)`,
/// returned as `(q(x) − s·q(y), b(x,y))`.
pub fn period_residual(lattice: &IntegralLattice, p: &PeriodPoint) -> Result<(Rational, Rational)> {
    check_len(lattice.rank(), p.dim())?;
    let pr = parts(&lattice.gram_rational(), p);
    Ok((pr.qx - &p.im_scale * pr.qy, pr.bxy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeStructureW2 {
    pub h20: usize,
    pub h11: usize,
    pub h02: usize,
    /// Rational basis of the real part of `H^{1,1}`, the orthogonal of `x` and `y`.
    pub h11_basis: Vec<Vec<Rational>>,
}

pub fn hodge_structure_from_period(lattice: &IntegralLattice, p: &PeriodPoint) -> Result<HodgeStructureW2> {
    if !in_period_domain(lattice, p)? {
        return Err(Error::rejected("point is not in the period domain"));
    }
    let gram = lattice.gram_rational();
    let basis = linalg::orthogonal_complement(&gram, &[p.re.clone(), p.im.clone()]);
    Ok(HodgeStructureW2 { h20: 1, h11: basis.len(), h02: 1, h11_basis: basis })
}

/// A three-dimensional subspace on which the form is positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveThreePlane {
    basis: Vec<Vec<Rational>>,
}

impl PositiveThreePlane {
    pub fn new(lattice: &IntegralLattice, basis: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &basis {
            check_len(lattice.rank(), v.len())?;
        }
        Self::from_gram(&lattice.gram_rational(), basis)
    }

    fn from_gram(gram: &[Vec<Rational>], basis: Vec<Vec<Rational>>) -> Result<Self> {
        if basis.len() != 3 {
            return Err(Error::rejected(format!("a 3-plane needs 3 vectors, got {}", basis.len())));
        }
        let g = linalg::restricted_gram(gram, &basis);
        if let Some((order, value)) = linalg::first_nonpositive_minor(&g) {
            return Err(Error::rejected(format!(
                "plane is not positive definite: leading minor of order {order} is {value}"
            )));
        }
        Ok(PositiveThreePlane { basis })
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn gram(&self, lattice: &IntegralLattice) -> Matrix {
        linalg::restricted_gram(&lattice.gram_rational(), &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        linalg::in_span(&self.basis, v)
    }
}

/// Point of the twistor conic of `plane` indexed by the direction
/// `λ = Σ coords_i w_i`: with `(λ, v, w)` a right-handed orthogonal frame of
/// the plane and `q(v) = s·q(w)`, the point is `v + i√s·w`.
pub fn conic_point(lattice: &IntegralLattice, plane: &PositiveThreePlane, coords: &[Rational]) -> Result<PeriodPoint> {
    check_len(3, coords.len())?;
    conic_point_in(&lattice.gram_rational(), plane, coords)
}

fn conic_point_in(gram: &[Vec<Rational>], plane: &PositiveThreePlane, coords: &[Rational]) -> Result<PeriodPoint> {
    if exact::is_zero_vec(coords) {
        return Err(Error::rejected("conic direction must be nonzero"));
    }
    let g = linalg::restricted_gram(gram, &plane.basis);
    let row = linalg::mat_vec(&g, coords);
    let perp = linalg::kernel(&[row], 3);
    let frame = linalg::orthogonalize(&g, &perp);
    let v = frame[0].0.clone();
    let mut w = frame[1].0.clone();
    if linalg::determinant(&[coords.to_vec(), v.clone(), w.clone()]).is_negative() {
        w = w.iter().map(|x| -x).collect();
    }
    let re = exact::primitive(&linalg::combine(&plane.basis, &v));
    let im = exact::primitive(&linalg::combine(&plane.basis, &w));
    let scale = linalg::bilinear(gram, &re, &re) / linalg::bilinear(gram, &im, &im);
    PeriodPoint::with_im_scale(re, im, scale)
}

/// `samples` points of the twistor conic of `plane`, indexed by directions
/// drawn from a seeded generator.
pub fn twistor_conic(
    lattice: &IntegralLattice,
    plane: &PositiveThreePlane,
    samples: usize,
    seed: u64,
) -> Result<Vec<PeriodPoint>> {
    let gram = lattice.gram_rational();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let coords: Vec<Rational> = (0..3).map(|_| exact::rat(rng.gen_range(-8..=8))).collect();
        if exact::is_zero_vec(&coords) {
            continue;
        }
        out.push(conic_point_in(&gram, plane, &coords)?);
    }
    Ok(out)
}

/// The plane spanned by `p` and the part of `w3` orthogonal to `p`.
pub fn conic_through(lattice: &IntegralLattice, p: &PeriodPoint, w3: &[Rational]) -> Result<PositiveThreePlane> {
    check_len(lattice.rank(), w3.len())?;
    if !in_period_domain(lattice, p)? {
        return Err(Error::rejected("point is not in the period domain"));
    }
    let gram = lattice.gram_rational();
    let pr = parts(&gram, p);
    let along_x = linalg::bilinear(&gram, w3, &p.re) / &pr.qx;
    let along_y = linalg::bilinear(&gram, w3, &p.im) / &pr.qy;
    let projected = exact::sub(&exact::sub(w3, &exact::scale(&p.re, &along_x)), &exact::scale(&p.im, &along_y));
    if exact::is_zero_vec(&projected) {
        return Err(Error::rejected("third direction lies in the plane of the point"));
    }
    PositiveThreePlane::from_gram(&gram, vec![p.re.clone(), p.im.clone(), projected])
}

/// A random point of the period domain: the point `v₁ + i√s·v₂` on two
/// orthogonal positive vectors, moved by `reflections` random rational
/// reflections.
pub fn sample_period_point(lattice: &IntegralLattice, seed: u64, reflections: usize) -> Result<PeriodPoint> {
    let gram = lattice.gram_rational();
    let basis: Vec<Vec<Rational>> = (0..lattice.rank())
        .map(|i| (0..lattice.rank()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let positives: Vec<(Vec<Rational>, Rational)> =
        linalg::orthogonalize(&gram, &basis).into_iter().filter(|(_, n)| n.is_positive()).collect();
    if positives.len() < 2 {
        return Err(Error::rejected("form has fewer than two positive directions"));
    }
    let (mut x, qx) = positives[0].clone();
    let (mut y, qy) = positives[1].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = 0;
    while applied < reflections {
        let r: Vec<Rational> = (0..lattice.rank()).map(|_| exact::rat(rng.gen_range(-2..=2))).collect();
        let qr = linalg::bilinear(&gram, &r, &r);
        if qr.is_zero() {
            continue;
        }
        let reflect = |v: &[Rational]| {
            let f = Rational::from_integer(2.into()) * linalg::bilinear(&gram, v, &r) / &qr;
            exact::sub(v, &exact::scale(&r, &f))
        };
        x = reflect(&x);
        y = reflect(&y);
        applied += 1;
    }
    PeriodPoint::with_im_scale(x, y, qx / qy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistorLink {
    pub plane: PositiveThreePlane,
    /// Point shared with the next conic; for the last link, the target.
    pub exit: PeriodPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistorChain {
    pub links: Vec<TwistorLink>,
    /// Restart whose chain was selected.
    pub restart: u64,
}

impl TwistorChain {
    /// Junction points whose imaginary scale is not a rational square.
    pub fn irrational_junctions(&self) -> usize {
        self.links.iter().filter(|l| !l.exit.is_rational()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathSearchOutcome {
    Found(TwistorChain),
    /// The step budget ran out. This says nothing about whether a chain exists.
    Inconclusive { partial: TwistorChain, reason: String },
}

/// Searches for a chain of twistor conics joining `start` to `end`.
///
/// Each conic plane is the orthogonal of a negative definite subspace `N`
/// of dimension `rank − 3`. Two conics meet when their `N`s share a
/// hyperplane. The search exchanges one direction of `N` at a time for a
/// direction of the target's `N`, so the overlap with the target grows at
/// every step. Several seeded restarts are tried and the shortest chain
/// wins, ties broken by fewer irrational junctions, then by restart index.
pub fn twistor_path_search(
    lattice: &IntegralLattice,
    start: &PeriodPoint,
    end: &PeriodPoint,
    max_steps: usize,
    seed: u64,
) -> Result<PathSearchOutcome> {
    let sig = lattice.signature();
    if sig.positive != 3 || sig.zero != 0 {
        return Err(Error::rejected(format!("path search needs a nondegenerate form with 3 positive directions, got {sig}")));
    }
    for p in [start, end] {
        if !in_period_domain(lattice, p)? {
            return Err(Error::rejected("point is not in the period domain"));
        }
    }
    let gram = lattice.gram_rational();
    if start == end {
        return Ok(PathSearchOutcome::Found(TwistorChain { links: Vec::new(), restart: 0 }));
    }
    let mut best: Option<TwistorChain> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        let links = search_once(&gram, start, end, &mut rng)?;
        let candidate = TwistorChain { links, restart };
        let better = match &best {
            None => true,
            Some(b) => rank_key(&candidate).cmp(&rank_key(b)) == Ordering::Less,
        };
        if better {
            best = Some(candidate);
        }
    }
    let mut chain = best.expect("at least one restart");
    if chain.links.len() > max_steps {
        let needed = chain.links.len();
        chain.links.truncate(max_steps);
        return Ok(PathSearchOutcome::Inconclusive {
            partial: chain,
            reason: format!("shortest chain found has {needed} conics, budget is {max_steps}"),
        });
    }
    Ok(PathSearchOutcome::Found(chain))
}

fn rank_key(c: &TwistorChain) -> (usize, usize, u64) {
    (c.links.len(), c.irrational_junctions(), c.restart)
}

fn search_once(gram: &[Vec<Rational>], start: &PeriodPoint, end: &PeriodPoint, rng: &mut ChaCha8Rng) -> Result<Vec<TwistorLink>> {
    let plane_a = vec![start.re.clone(), start.im.clone()];
    let plane_b = vec![end.re.clone(), end.im.clone()];
    let joint = linalg::independent_subset(&[plane_a.clone(), plane_b.clone()].concat());
    if joint.len() == 2 {
        let u = random_positive_in_complement(gram, &plane_a, rng)?;
        let plane = PositiveThreePlane::from_gram(gram, vec![start.re.clone(), start.im.clone(), u])?;
        return Ok(vec![TwistorLink { plane, exit: end.clone() }]);
    }
    if joint.len() == 3 && linalg::first_nonpositive_minor(&linalg::restricted_gram(gram, &joint)).is_none() {
        let plane = PositiveThreePlane::from_gram(gram, linalg::canonical_basis(&joint))?;
        return Ok(vec![TwistorLink { plane, exit: end.clone() }]);
    }

    let negative_for = |plane: &[Vec<Rational>], rng: &mut ChaCha8Rng| -> Result<Vec<Vec<Rational>>> {
        let u = random_positive_in_complement(gram, plane, rng)?;
        let mut span = plane.to_vec();
        span.push(u);
        Ok(primitive_all(linalg::orthogonal_complement(gram, &span)))
    };
    let target = negative_for(&plane_b, rng)?;
    let mut current = negative_for(&plane_a, rng)?;
    let mut sequence = vec![current.clone()];
    let m = target.len();
    while linalg::rank(&[current.clone(), target.clone()].concat()) > m {
        current = exchange_step(gram, &current, &target, rng)?;
        sequence.push(current.clone());
    }
    // The loop ends on a subspace equal to the target; use the target's basis.
    if let Some(last) = sequence.last_mut() {
        *last = target;
    }

    let mut links = Vec::with_capacity(sequence.len());
    for (i, neg) in sequence.iter().enumerate() {
        let basis = primitive_all(linalg::orthogonal_complement(gram, neg));
        let plane = PositiveThreePlane::from_gram(gram, basis)?;
        let exit = match sequence.get(i + 1) {
            Some(next) => junction(gram, neg, next)?,
            None => end.clone(),
        };
        links.push(TwistorLink { plane, exit });
    }
    Ok(links)
}

fn primitive_all(vectors: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    linalg::canonical_basis(&vectors)
}

fn random_coeff(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    exact::rat(rng.gen_range(-bound..=bound))
}

/// A vector `u` orthogonal to `plane` with `q(u) > 0`. The orthogonal of a
/// positive plane has exactly one positive direction.
fn random_positive_in_complement(
    gram: &[Vec<Rational>],
    plane: &[Vec<Rational>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Rational>> {
    let complement = linalg::orthogonal_complement(gram, plane);
    random_positive_in(gram, &complement, rng)
        .ok_or_else(|| Error::inconsistent("orthogonal of a positive plane has no positive direction"))
}

fn random_positive_in(gram: &[Vec<Rational>], span: &[Vec<Rational>], rng: &mut ChaCha8Rng) -> Option<Vec<Rational>> {
    let frame = linalg::orthogonalize(gram, span);
    let (pos, _) = frame.iter().find(|(_, n)| n.is_positive())?.clone();
    let others: Vec<&Vec<Rational>> = frame.iter().filter(|(_, n)| !n.is_positive()).map(|(v, _)| v).collect();
    for _ in 0..32 {
        let mut u = exact::scale(&pos, &exact::rat(rng.gen_range(1..=4)));
        for v in &others {
            u = exact::add(&u, &exact::scale(v, &random_coeff(rng, 1)));
        }
        if linalg::bilinear(gram, &u, &u).is_positive() {
            return Some(exact::primitive(&u));
        }
    }
    Some(exact::primitive(&pos))
}

/// One exchange: a negative definite `N'` of the same dimension as `current`,
/// sharing a hyperplane with it, whose overlap with `target` is one larger.
fn exchange_step(
    gram: &[Vec<Rational>],
    current: &[Vec<Rational>],
    target: &[Vec<Rational>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Rational>>> {
    let overlap = linalg::intersect(current, target);
    let fresh = (0..32)
        .map(|_| {
            let coeffs: Vec<Rational> = target.iter().map(|_| random_coeff(rng, 3)).collect();
            linalg::combine(target, &coeffs)
        })
        .find(|b| !linalg::in_span(current, b))
        .or_else(|| target.iter().find(|b| !linalg::in_span(current, b)).cloned())
        .ok_or_else(|| Error::inconsistent("target subspace is contained in the current one"))?;
    let mut widened = current.to_vec();
    widened.push(fresh.clone());
    let mut kept = overlap;
    kept.push(fresh);
    // Inside the widened space, the orthogonal of the kept part.
    let rest = linalg::relative_complement(gram, &widened, &kept);
    let frame = linalg::orthogonalize(gram, &rest);
    let complement: Vec<Vec<Rational>> = if frame.iter().any(|(_, n)| n.is_positive()) {
        let c = random_positive_in(gram, &rest, rng).expect("frame has a positive vector");
        linalg::relative_complement(gram, &rest, &[c])
    } else if frame.iter().any(|(_, n)| n.is_zero()) {
        frame.into_iter().filter(|(_, n)| n.is_negative()).map(|(v, _)| v).collect()
    } else {
        let coeffs: Vec<Rational> = rest.iter().map(|_| exact::rat(rng.gen_range(1..=3))).collect();
        let c = linalg::combine(&rest, &coeffs);
        linalg::relative_complement(gram, &rest, &[c])
    };
    let next = linalg::independent_subset(&[kept, complement].concat());
    if next.len() != current.len() || !linalg::is_negative_definite(gram, &next) {
        return Err(Error::inconsistent("exchange step left the negative definite locus"));
    }
    Ok(primitive_all(next))
}

/// The point on both conics: the orthogonal of `N₁ + N₂` is a positive plane.
fn junction(gram: &[Vec<Rational>], a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<PeriodPoint> {
    let shared = linalg::orthogonal_complement(gram, &[a.to_vec(), b.to_vec()].concat());
    if shared.len() != 2 {
        return Err(Error::inconsistent(format!("consecutive conic planes meet in dimension {}", shared.len())));
    }
    let frame = linalg::orthogonalize(gram, &shared);
    let v = exact::primitive(&frame[0].0);
    let w = exact::primitive(&frame[1].0);
    let qv = linalg::bilinear(gram, &v, &v);
    let qw = linalg::bilinear(gram, &w, &w);
    PeriodPoint::with_im_scale(v, w, qv / qw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, rats};

    fn l4() -> IntegralLattice {
        IntegralLattice::diagonal(&[1, 1, 1, -1])
    }

    fn point(re: &[i64], im: &[i64]) -> PeriodPoint {
        PeriodPoint::new(rats(re), rats(im)).unwrap()
    }

    #[test]
    fn membership_examples() {
        let l = l4();
        assert!(in_period_domain(&l, &point(&[1, 0, 0, 0], &[0, 1, 0, 0])).unwrap());
        assert!(!in_period_domain(&l, &point(&[1, 0, 0, 0], &[0, 0, 0, 0])).unwrap());
        assert!(!in_period_domain(&l, &point(&[1, 0, 0, 0], &[0, 0, 0, 1])).unwrap());
        let bad = PeriodPoint::new(rats(&[1, 0, 0]), rats(&[0, 1, 0])).unwrap();
        assert!(matches!(in_period_domain(&l, &bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scaled_points_are_exact() {
        let l = IntegralLattice::diagonal(&[2, 1, -1]);
        // q(e1) = 2 = 2·q(e2): e1 + i√2·e2.
        let p = PeriodPoint::with_im_scale(rats(&[1, 0, 0]), rats(&[0, 1, 0]), rat(2)).unwrap();
        assert!(in_period_domain(&l, &p).unwrap());
        let q = PeriodPoint::with_im_scale(rats(&[1, 0, 0]), rats(&[0, 1, 0]), rat(3)).unwrap();
        assert!(!in_period_domain(&l, &q).unwrap());
        let folded = PeriodPoint::with_im_scale(rats(&[1, 0]), rats(&[0, 1]), ratio(9, 4)).unwrap();
        assert!(folded.is_rational());
        assert_eq!(folded.im(), &[rat(0), ratio(3, 2)][..]);
    }

    #[test]
    fn projective_equality() {
        let p = point(&[1, 0, 0, 0], &[0, 1, 0, 0]);
        let z = exact::gaussian(rat(2), rat(-3));
        assert_eq!(p.times(&z).unwrap(), p);
        assert_ne!(p.conjugate(), p);
        // −i·(2e₁ + i√2·e₂) = √2·(e₂ − i√2·e₁) = √2·(e₂ + i√(1/2)·(−2e₁)).
        let s = PeriodPoint::with_im_scale(rats(&[2, 0, 0, 0]), rats(&[0, 1, 0, 0]), rat(2)).unwrap();
        let s2 = PeriodPoint::with_im_scale(rats(&[0, 1, 0, 0]), rats(&[-2, 0, 0, 0]), ratio(1, 2)).unwrap();
        assert_eq!(s, s2);
        assert_ne!(s, s2.conjugate());
    }

    #[test]
    fn hodge_examples() {
        let h = hodge_structure_from_period(&l4(), &point(&[1, 0, 0, 0], &[0, 1, 0, 0])).unwrap();
        assert_eq!((h.h20, h.h11, h.h02), (1, 2, 1));
        assert_eq!(h.h11_basis, [rats(&[0, 0, 1, 0]), rats(&[0, 0, 0, 1])]);
        let k3 = crate::lattice::k3_lattice();
        let p = sample_period_point(&k3, 7, 3).unwrap();
        let h = hodge_structure_from_period(&k3, &p).unwrap();
        assert_eq!((h.h20, h.h11, h.h02), (1, 20, 1));
        let l3 = IntegralLattice::diagonal(&[1, 1, -1]);
        let h = hodge_structure_from_period(&l3, &point(&[1, 0, 0], &[0, 1, 0])).unwrap();
        assert_eq!(h.h11, 1);
        assert!(hodge_structure_from_period(&l4(), &point(&[1, 0, 0, 0], &[0, 0, 0, 1])).is_err());
    }

    fn coordinate_plane() -> PositiveThreePlane {
        PositiveThreePlane::new(&l4(), vec![rats(&[1, 0, 0, 0]), rats(&[0, 1, 0, 0]), rats(&[0, 0, 1, 0])]).unwrap()
    }

    #[test]
    fn conic_examples() {
        let w = coordinate_plane();
        let p = conic_point(&l4(), &w, &rats(&[1, 0, 0])).unwrap();
        assert_eq!(p, point(&[0, 1, 0, 0], &[0, 0, 1, 0]));
        let q = conic_point(&l4(), &w, &rats(&[-1, 0, 0])).unwrap();
        assert_eq!(q, p.conjugate());
        for s in twistor_conic(&l4(), &w, 25, 3).unwrap() {
            assert!(in_period_domain(&l4(), &s).unwrap());
            assert!(s.re()[3].is_zero() && s.im()[3].is_zero());
        }
        let bad = PositiveThreePlane::new(&l4(), vec![rats(&[1, 0, 0, 0]), rats(&[0, 1, 0, 0]), rats(&[0, 0, 0, 1])]);
        assert!(bad.is_err());
    }

    #[test]
    fn conic_through_examples() {
        let l = l4();
        let p = point(&[1, 0, 0, 0], &[0, 1, 0, 0]);
        let w = conic_through(&l, &p, &rats(&[0, 0, 1, 0])).unwrap();
        assert_eq!(w, coordinate_plane());
        let err = conic_through(&l, &p, &rats(&[0, 0, 0, 1])).unwrap_err();
        assert!(format!("{err}").contains("order 3"));
        let err = conic_through(&l, &p, &rats(&[0, 0, 1, 1])).unwrap_err();
        assert!(format!("{err}").contains("order 3 is 0"));
        assert!(conic_through(&l, &p, &rats(&[1, 1, 0, 0])).is_err());
    }

    #[test]
    fn path_search_special_cases() {
        let l = IntegralLattice::diagonal(&[1, 1, 1, -1, -1]);
        let p = point(&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]);
        match twistor_path_search(&l, &p, &p.times(&exact::gaussian(rat(0), rat(1))).unwrap(), 16, 0).unwrap() {
            PathSearchOutcome::Found(c) => assert!(c.links.is_empty()),
            other => panic!("{other:?}"),
        }
        let q = point(&[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0]);
        match twistor_path_search(&l, &p, &q, 16, 0).unwrap() {
            PathSearchOutcome::Found(c) => assert_eq!(c.links.len(), 1),
            other => panic!("{other:?}"),
        }
        let not_three = IntegralLattice::diagonal(&[1, 1, -1]);
        let r = point(&[1, 0, 0], &[0, 1, 0]);
        assert!(twistor_path_search(&not_three, &r, &r, 16, 0).is_err());
    }

    #[test]
    fn path_search_general_pair() {
        let l = IntegralLattice::diagonal(&[1, 1, 1, -1, -1]);
        let p = sample_period_point(&l, 1, 4).unwrap();
        let q = sample_period_point(&l, 2, 4).unwrap();
        let PathSearchOutcome::Found(chain) = twistor_path_search(&l, &p, &q, 16, 0).unwrap() else {
            panic!("search failed");
        };
        assert!(!chain.links.is_empty() && chain.links.len() <= 3);
        let report = check::verify_chain(&l, &p, &q, &chain.links);
        assert!(report.verified, "{:?}", report.failures);
        let again = twistor_path_search(&l, &p, &q, 16, 0).unwrap();
        assert_eq!(again, PathSearchOutcome::Found(chain.clone()));
        match twistor_path_search(&l, &p, &q, 1, 0).unwrap() {
            PathSearchOutcome::Inconclusive { partial, .. } if chain.links.len() > 1 => {
                assert_eq!(partial.links.len(), 1)
            }
            PathSearchOutcome::Found(_) if chain.links.len() == 1 => {}
            other => panic!("{other:?}"),
        }
    }
}
