//! Chart-level Riemannian geometry in floating point.
//!
//! Conventions: `Γ^k_{ij}` with `∇_{∂i}∂j = Γ^k_{ij}∂k`;
//! `R^a_{bij} = ∂iΓ^a_{jb} − ∂jΓ^a_{ib} + Γ^a_{ic}Γ^c_{jb} − Γ^a_{jc}Γ^c_{ib}`,
//! so that `R(∂i,∂j)∂b = R^a_{bij}∂a`; the lowered tensor is
//! `R̃_{abij} = g_{ae}R^e_{bij}` and `Ric_{ab} = Σ_c R^c_{acb}`.
//!
//! Metric derivatives are exact for polynomial and constant entries and
//! central differences of step `h` otherwise. Derivatives of `Γ` are always
//! central differences, so curvature carries an `O(h²)` error.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<f64>>;
/// `Γ[k][i][j] = Γ^k_{ij}`.
pub type Christoffel = Vec<Vec<Vec<f64>>>;
/// `R[a][b][c][d]`.
pub type Tensor4 = Vec<Vec<Vec<Vec<f64>>>>;

pub const DEFAULT_STEP: f64 = 1e-4;
/// RK4 steps per unit of curve parameter.
pub const DEFAULT_STEPS_PER_UNIT: usize = 4096;

/// `Σ coeff · Π x_i^{e_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, Vec<u32>)>) -> Self {
        Polynomial { terms }
    }

    pub fn constant(c: f64, vars: usize) -> Self {
        Polynomial { terms: vec![(c, vec![0; vars])] }
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * libm::pow(xi, f64::from(k))))
            .sum()
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e.get(var).copied().unwrap_or(0) > 0)
            .map(|(c, e)| {
                let mut e = e.clone();
                let k = e[var];
                e[var] -= 1;
                (c * f64::from(k), e)
            })
            .collect();
        Polynomial { terms }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean { dim: usize },
    /// Flat metric with every coordinate periodic.
    FlatTorus { dim: usize, period: f64 },
    /// Round `Sⁿ(r)` in polar coordinates `(θ₁, …, θ_{n−1}, φ)`, `θ_i ∈ (0, π)`,
    /// `φ` periodic of period `2π`.
    Sphere { dim: usize, radius: f64 },
    /// Fubini–Study on `ℂP^m` in the affine chart, real coordinates
    /// `(x₁, y₁, …, x_m, y_m)` with `z_a = x_a + i y_a`.
    FubiniStudy { complex_dim: usize },
    /// Symmetric matrix of polynomial entries.
    Polynomial(Vec<Vec<Polynomial>>),
    Product(Box<Metric>, Box<Metric>),
    Scaled(f64, Box<Metric>),
}

impl Metric {
    pub fn dim(&self) -> usize {
        match self {
            Metric::Euclidean { dim } | Metric::FlatTorus { dim, .. } | Metric::Sphere { dim, .. } => *dim,
            Metric::FubiniStudy { complex_dim } => 2 * complex_dim,
            Metric::Polynomial(entries) => entries.len(),
            Metric::Product(a, b) => a.dim() + b.dim(),
            Metric::Scaled(_, m) => m.dim(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Metric::Euclidean { dim } | Metric::FlatTorus { dim, .. } | Metric::Sphere { dim, .. } if *dim == 0 => {
                Err(Error::rejected("metric dimension must be positive"))
            }
            Metric::FlatTorus { period, .. } if !period.is_finite() || *period <= 0.0 => Err(Error::rejected("torus period must be positive")),
            Metric::Sphere { radius, .. } if !radius.is_finite() || *radius <= 0.0 => Err(Error::rejected("sphere radius must be positive")),
            Metric::FubiniStudy { complex_dim: 0 } => Err(Error::rejected("complex dimension must be positive")),
            Metric::Polynomial(entries) => {
                let n = entries.len();
                if n == 0 || entries.iter().any(|r| r.len() != n) {
                    return Err(Error::rejected("polynomial metric must be a nonempty square matrix"));
                }
                for i in 0..n {
                    for j in 0..i {
                        if entries[i][j] != entries[j][i] {
                            return Err(Error::rejected(format!("polynomial metric is not symmetric at ({i},{j})")));
                        }
                    }
                }
                if entries.iter().flatten().flat_map(|p| p.terms.iter()).any(|(_, e)| e.len() != n) {
                    return Err(Error::rejected("monomial exponent vectors must have one entry per coordinate"));
                }
                Ok(())
            }
            Metric::Product(a, b) => a.validate().and(b.validate()),
            Metric::Scaled(c, m) if *c > 0.0 => m.validate(),
            Metric::Scaled(..) => Err(Error::rejected("metric scale must be positive")),
            _ => Ok(()),
        }
    }

    /// Period of each coordinate, if any.
    pub fn periods(&self) -> Vec<Option<f64>> {
        match self {
            Metric::FlatTorus { dim, period } => vec![Some(*period); *dim],
            Metric::Sphere { dim, .. } => {
                let mut p = vec![None; *dim];
                p[dim - 1] = Some(2.0 * PI);
                p
            }
            Metric::Product(a, b) => [a.periods(), b.periods()].concat(),
            Metric::Scaled(_, m) => m.periods(),
            other => vec![None; other.dim()],
        }
    }

    /// Whether `x` lies in the chart domain.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            Metric::Sphere { dim, .. } => x[..dim - 1].iter().all(|&t| t > 0.0 && t < PI),
            Metric::Product(a, b) => a.contains(&x[..a.dim()]) && b.contains(&x[a.dim()..]),
            Metric::Scaled(_, m) => m.contains(x),
            _ => true,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Mat {
        match self {
            Metric::Euclidean { dim } | Metric::FlatTorus { dim, .. } => identity(*dim),
            Metric::Sphere { dim, radius } => {
                let mut g = vec![vec![0.0; *dim]; *dim];
                let mut factor = radius * radius;
                for k in 0..*dim {
                    g[k][k] = factor;
                    if k + 1 < *dim {
                        let s = libm::sin(x[k]);
                        factor *= s * s;
                    }
                }
                g
            }
            Metric::FubiniStudy { complex_dim } => fubini_study(*complex_dim, x),
            Metric::Polynomial(entries) => entries.iter().map(|row| row.iter().map(|p| p.eval(x)).collect()).collect(),
            Metric::Product(a, b) => block_diag(&a.eval(&x[..a.dim()]), &b.eval(&x[a.dim()..])),
            Metric::Scaled(c, m) => scale_mat(&m.eval(x), *c),
        }
    }

    /// `∂_l g` for every `l`, when available in closed form.
    pub fn exact_derivative(&self, x: &[f64]) -> Option<Vec<Mat>> {
        match self {
            Metric::Euclidean { dim } | Metric::FlatTorus { dim, .. } => Some(vec![vec![vec![0.0; *dim]; *dim]; *dim]),
            Metric::Polynomial(entries) => Some(
                (0..entries.len())
                    .map(|l| entries.iter().map(|row| row.iter().map(|p| p.derivative(l).eval(x)).collect()).collect())
                    .collect(),
            ),
            Metric::Product(a, b) => {
                let da = a.exact_derivative(&x[..a.dim()])?;
                let db = b.exact_derivative(&x[a.dim()..])?;
                let za = vec![vec![0.0; a.dim()]; a.dim()];
                let zb = vec![vec![0.0; b.dim()]; b.dim()];
                Some(
                    da.iter()
                        .map(|d| block_diag(d, &zb))
                        .chain(db.iter().map(|d| block_diag(&za, d)))
                        .collect(),
                )
            }
            Metric::Scaled(c, m) => Some(m.exact_derivative(x)?.iter().map(|d| scale_mat(d, *c)).collect()),
            _ => None,
        }
    }

    /// A constant complex structure compatible with the metric, when the
    /// catalog provides one: `J∂x_a = ∂y_a` on consecutive coordinate pairs.
    pub fn complex_structure(&self) -> Option<Mat> {
        match self {
            Metric::Euclidean { dim } | Metric::FlatTorus { dim, .. } if dim % 2 == 0 => Some(standard_j(*dim)),
            Metric::FubiniStudy { complex_dim } => Some(standard_j(2 * complex_dim)),
            Metric::Product(a, b) => Some(block_diag(&a.complex_structure()?, &b.complex_structure()?)),
            Metric::Scaled(_, m) => m.complex_structure(),
            _ => None,
        }
    }
}

/// Hermitian `h_{ab̄} = ((1+|z|²)δ_{ab} − z̄_a z_b)/(1+|z|²)²`, realified as
/// `g(u, v) = Re Σ h_{ab̄} u_a v̄_b`.
fn fubini_study(m: usize, x: &[f64]) -> Mat {
    let z: Vec<(f64, f64)> = (0..m).map(|a| (x[2 * a], x[2 * a + 1])).collect();
    let norm2: f64 = z.iter().map(|(re, im)| re * re + im * im).sum();
    let w = 1.0 + norm2;
    let mut g = vec![vec![0.0; 2 * m]; 2 * m];
    for a in 0..m {
        for b in 0..m {
            // z̄_a z_b = (x_a − i y_a)(x_b + i y_b).
            let (xa, ya) = z[a];
            let (xb, yb) = z[b];
            let delta = if a == b { w } else { 0.0 };
            let re = (delta - (xa * xb + ya * yb)) / (w * w);
            let im = -(xa * yb - ya * xb) / (w * w);
            g[2 * a][2 * b] = re;
            g[2 * a + 1][2 * b + 1] = re;
            g[2 * a][2 * b + 1] = im;
            g[2 * a + 1][2 * b] = -im;
        }
    }
    g
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn standard_j(n: usize) -> Mat {
    let mut j = vec![vec![0.0; n]; n];
    for a in 0..n / 2 {
        j[2 * a + 1][2 * a] = 1.0;
        j[2 * a][2 * a + 1] = -1.0;
    }
    j
}

fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![0.0; na + nb]; na + nb];
    for i in 0..na {
        out[i][..na].copy_from_slice(&a[i]);
    }
    for i in 0..nb {
        out[na + i][na..].copy_from_slice(&b[i]);
    }
    out
}

fn scale_mat(m: &Mat, c: f64) -> Mat {
    m.iter().map(|r| r.iter().map(|v| v * c).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

fn transpose(a: &Mat) -> Mat {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Inverse by Gauss–Jordan with partial pivoting.
pub fn invert(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a: Mat = m.iter().zip(identity(n)).map(|(r, e)| [r.clone(), e].concat()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(p, c);
        let inv = 1.0 / a[c][c];
        for v in a[c].iter_mut() {
            *v *= inv;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                if f != 0.0 {
                    for j in 0..2 * n {
                        a[i][j] -= f * a[c][j];
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Cholesky pivots; `Err` carries the index of the first nonpositive pivot.
fn cholesky_pivots(m: &Mat) -> core::result::Result<Vec<f64>, usize> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let d = m[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if d.is_nan() || d <= 0.0 {
            return Err(j);
        }
        let s = libm::sqrt(d);
        pivots.push(d);
        l[j][j] = s;
        for i in j + 1..n {
            l[i][j] = (m[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>()) / s;
        }
    }
    Ok(pivots)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricChart {
    metric: Metric,
    step: f64,
}

impl MetricChart {
    pub fn new(metric: Metric) -> Result<Self> {
        Self::with_step(metric, DEFAULT_STEP)
    }

    pub fn with_step(metric: Metric, step: f64) -> Result<Self> {
        metric.validate()?;
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::rejected("finite-difference step must be positive"));
        }
        Ok(MetricChart { metric, step })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        if !self.metric.contains(x) {
            return Err(Error::rejected(format!("point {x:?} is outside the chart domain")));
        }
        Ok(())
    }

    /// Metric at `x`, checked positive definite.
    pub fn metric_at(&self, x: &[f64]) -> Result<Mat> {
        self.check_point(x)?;
        let g = self.metric.eval(x);
        match cholesky_pivots(&g) {
            Ok(p) => {
                let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = p.iter().copied().fold(0.0, f64::max);
                if lo / hi < 1e-14 {
                    return Err(Error::rejected(format!("metric is nearly singular at {x:?}: pivot ratio {:e}", lo / hi)));
                }
                Ok(g)
            }
            Err(k) => Err(Error::rejected(format!("metric is not positive definite at {x:?}: pivot {k} fails"))),
        }
    }

    /// `∂_l g_{ij}` as `dg[l][i][j]`.
    pub fn metric_derivative(&self, x: &[f64]) -> Result<Vec<Mat>> {
        self.check_point(x)?;
        if let Some(d) = self.metric.exact_derivative(x) {
            return Ok(d);
        }
        let h = self.step;
        (0..self.dim())
            .map(|l| {
                let plus = shifted(x, l, h);
                let minus = shifted(x, l, -h);
                self.check_point(&plus)?;
                self.check_point(&minus)?;
                let (gp, gm) = (self.metric.eval(&plus), self.metric.eval(&minus));
                Ok(gp.iter().zip(&gm).map(|(rp, rm)| rp.iter().zip(rm).map(|(a, b)| (a - b) / (2.0 * h)).collect()).collect())
            })
            .collect()
    }
}

fn shifted(x: &[f64], l: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[l] += h;
    y
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})`, symmetric in `i, j`
/// by construction.
pub fn christoffel(chart: &MetricChart, x: &[f64]) -> Result<Christoffel> {
    let g = chart.metric_at(x)?;
    let ginv = invert(&g).ok_or_else(|| Error::rejected(format!("metric is singular at {x:?}")))?;
    let dg = chart.metric_derivative(x)?;
    let n = chart.dim();
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let lowered: Vec<f64> = (0..n).map(|l| 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])).collect();
            for k in 0..n {
                let v: f64 = (0..n).map(|l| ginv[k][l] * lowered[l]).sum();
                gamma[k][i][j] = v;
                gamma[k][j][i] = v;
            }
        }
    }
    Ok(gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureAtPoint {
    pub metric: Mat,
    pub christoffel: Christoffel,
    /// `R^a_{bcd}`.
    pub riemann: Tensor4,
    /// `R̃_{abcd} = g_{ae}R^e_{bcd}`.
    pub lowered: Tensor4,
    pub ricci: Mat,
}

impl CurvatureAtPoint {
    pub fn dim(&self) -> usize {
        self.metric.len()
    }

    /// `R̃_{ijij} / (g_ii g_jj − g_ij²)`, the sectional curvature of the
    /// coordinate plane `(∂i, ∂j)`.
    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        let g = &self.metric;
        self.lowered[i][j][i][j] / (g[i][i] * g[j][j] - g[i][j] * g[i][j])
    }
}

pub fn curvature(chart: &MetricChart, x: &[f64]) -> Result<CurvatureAtPoint> {
    let n = chart.dim();
    let h = chart.step;
    let gamma = christoffel(chart, x)?;
    let g = chart.metric_at(x)?;
    // dgamma[i][a][j][b] = ∂_i Γ^a_{jb}.
    let mut dgamma = Vec::with_capacity(n);
    for i in 0..n {
        let plus = christoffel(chart, &shifted(x, i, h))?;
        let minus = christoffel(chart, &shifted(x, i, -h))?;
        let d: Christoffel = (0..n)
            .map(|a| (0..n).map(|j| (0..n).map(|b| (plus[a][j][b] - minus[a][j][b]) / (2.0 * h)).collect()).collect())
            .collect();
        dgamma.push(d);
    }
    let mut riemann = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dgamma[i][a][j][b] - dgamma[j][a][i][b];
                    for c in 0..n {
                        v += gamma[a][i][c] * gamma[c][j][b] - gamma[a][j][c] * gamma[c][i][b];
                    }
                    riemann[a][b][i][j] = v;
                }
            }
        }
    }
    let mut lowered = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    lowered[a][b][c][d] = (0..n).map(|e| g[a][e] * riemann[e][b][c][d]).sum();
                }
            }
        }
    }
    let ricci = (0..n).map(|a| (0..n).map(|b| (0..n).map(|c| riemann[c][a][c][b]).sum()).collect()).collect();
    Ok(CurvatureAtPoint { metric: g, christoffel: gamma, riemann, lowered, ricci })
}

pub fn ricci(chart: &MetricChart, x: &[f64]) -> Result<Mat> {
    Ok(curvature(chart, x)?.ricci)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BianchiResiduals {
    /// `max |R̃_{abcd} + R̃_{bcad} + R̃_{cabd}|`. In exact arithmetic this is
    /// the cyclic identity; numerically it carries the `O(h²)` error of the
    /// curvature because it mixes the two index pairs.
    pub first: f64,
    /// `max |R^a_{bcd} + R^a_{cdb} + R^a_{dbc}|`. The derivative terms cancel
    /// term by term here, so this stays at rounding level for any `h`.
    pub first_mixed: f64,
    /// `max |R̃_{abcd} − R̃_{cdab}|`.
    pub pair_symmetry: f64,
    /// `max` of `|R̃_{abcd} + R̃_{abdc}|` and `|R̃_{abcd} + R̃_{bacd}|`.
    pub antisymmetry: f64,
}

pub fn bianchi_residuals(cp: &CurvatureAtPoint) -> BianchiResiduals {
    let n = cp.dim();
    let (r, rt) = (&cp.riemann, &cp.lowered);
    let mut out = BianchiResiduals { first: 0.0, first_mixed: 0.0, pair_symmetry: 0.0, antisymmetry: 0.0 };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    out.first = out.first.max((rt[a][b][c][d] + rt[b][c][a][d] + rt[c][a][b][d]).abs());
                    out.first_mixed = out.first_mixed.max((r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c]).abs());
                    out.pair_symmetry = out.pair_symmetry.max((rt[a][b][c][d] - rt[c][d][a][b]).abs());
                    let anti = (rt[a][b][c][d] + rt[a][b][d][c]).abs().max((rt[a][b][c][d] + rt[b][a][c][d]).abs());
                    out.antisymmetry = out.antisymmetry.max(anti);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinFit {
    pub einstein: bool,
    /// Least-squares `k` in `Ric ≈ k·g` over all sampled points.
    pub constant: f64,
    /// `max |Ric − k·g|`.
    pub residual: f64,
}

pub fn is_einstein(chart: &MetricChart, points: &[Vec<f64>], tol: f64) -> Result<EinsteinFit> {
    if points.is_empty() {
        return Err(Error::rejected("need at least one sample point"));
    }
    let samples: Vec<(Mat, Mat)> = points
        .iter()
        .map(|x| curvature(chart, x).map(|cp| (cp.ricci, cp.metric)))
        .collect::<Result<_>>()?;
    let (mut num, mut den) = (0.0, 0.0);
    for (ric, g) in &samples {
        for (r, gv) in ric.iter().flatten().zip(g.iter().flatten()) {
            num += r * gv;
            den += gv * gv;
        }
    }
    let k = num / den;
    let residual = samples
        .iter()
        .map(|(ric, g)| max_abs_diff(ric, &scale_mat(g, k)))
        .fold(0.0, f64::max);
    Ok(EinsteinFit { einstein: residual <= tol, constant: k, residual })
}

pub fn is_ricci_flat(chart: &MetricChart, points: &[Vec<f64>], tol: f64) -> Result<bool> {
    for x in points {
        let ric = ricci(chart, x)?;
        if ric.iter().flatten().any(|v| v.abs() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn contract(gamma: &Christoffel, u: &[f64], v: &[f64]) -> Vec<f64> {
    gamma
        .iter()
        .map(|gk| gk.iter().zip(u).map(|(row, ui)| ui * row.iter().zip(v).map(|(g, vj)| g * vj).sum::<f64>()).sum())
        .collect()
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| xi + a * yi).collect()
}

fn g_norm(g: &Mat, v: &[f64]) -> f64 {
    let q: f64 = (0..v.len()).map(|i| (0..v.len()).map(|j| v[i] * g[i][j] * v[j]).sum::<f64>()).sum();
    libm::sqrt(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic {
    pub points: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    /// The integration stopped because the curve left the chart domain.
    pub exited: bool,
    /// `max |‖γ̇‖_g − ‖γ̇(0)‖_g|` over the computed samples.
    pub speed_drift: f64,
}

/// RK4 integration of `γ̈^k = −Γ^k_{ij}γ̇^iγ̇^j` for parameter time `t_total`.
pub fn geodesic(chart: &MetricChart, x0: &[f64], v0: &[f64], t_total: f64, steps: usize) -> Result<Geodesic> {
    if v0.len() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), found: v0.len() });
    }
    if steps == 0 {
        return Err(Error::rejected("step count must be positive"));
    }
    let g0 = chart.metric_at(x0)?;
    let speed0 = g_norm(&g0, v0);
    let dt = t_total / steps as f64;
    let accel = |x: &[f64], v: &[f64]| -> Result<Vec<f64>> {
        Ok(contract(&christoffel(chart, x)?, v, v).into_iter().map(|a| -a).collect())
    };
    let mut x = x0.to_vec();
    let mut v = v0.to_vec();
    let mut out = Geodesic { points: vec![x.clone()], velocities: vec![v.clone()], exited: false, speed_drift: 0.0 };
    for _ in 0..steps {
        let step = (|| -> Result<(Vec<f64>, Vec<f64>)> {
            let k1x = v.clone();
            let k1v = accel(&x, &v)?;
            let x2 = axpy(&x, dt / 2.0, &k1x);
            let k2x = axpy(&v, dt / 2.0, &k1v);
            let k2v = accel(&x2, &k2x)?;
            let x3 = axpy(&x, dt / 2.0, &k2x);
            let k3x = axpy(&v, dt / 2.0, &k2v);
            let k3v = accel(&x3, &k3x)?;
            let x4 = axpy(&x, dt, &k3x);
            let k4x = axpy(&v, dt, &k3v);
            let k4v = accel(&x4, &k4x)?;
            let nx = (0..x.len()).map(|i| x[i] + dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])).collect();
            let nv = (0..v.len()).map(|i| v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])).collect();
            Ok((nx, nv))
        })();
        let Ok((nx, nv)) = step else {
            out.exited = true;
            break;
        };
        let Ok(g) = chart.metric_at(&nx) else {
            out.exited = true;
            break;
        };
        out.speed_drift = out.speed_drift.max((g_norm(&g, &nv) - speed0).abs());
        x = nx;
        v = nv;
        out.points.push(x.clone());
        out.velocities.push(v.clone());
    }
    Ok(out)
}

/// Piecewise-linear curve in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Vec<f64>>,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::rejected("a path needs at least two vertices"));
        }
        let n = vertices[0].len();
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn start(&self) -> &[f64] {
        &self.vertices[0]
    }

    pub fn end(&self) -> &[f64] {
        &self.vertices[self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline { vertices }
    }

    /// `self` followed by `other` translated so that it starts where `self`
    /// ends. On a periodic chart the translation is a period vector.
    pub fn then(&self, other: &Polyline) -> Polyline {
        let shift: Vec<f64> = self.end().iter().zip(other.start()).map(|(a, b)| a - b).collect();
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices[1..].iter().map(|v| v.iter().zip(&shift).map(|(x, s)| x + s).collect()));
        Polyline { vertices }
    }
}

/// A polyline that closes up, possibly after wrapping periodic coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    path: Polyline,
}

const CLOSURE_TOL: f64 = 1e-9;

fn congruent(a: &[f64], b: &[f64], periods: &[Option<f64>]) -> bool {
    a.iter().zip(b).zip(periods).all(|((x, y), p)| {
        let d = x - y;
        match p {
            Some(p) => (d - p * libm::round(d / p)).abs() < CLOSURE_TOL,
            None => d.abs() < CLOSURE_TOL,
        }
    })
}

impl LoopPath {
    pub fn new(chart: &MetricChart, path: Polyline) -> Result<Self> {
        if path.start().len() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), found: path.start().len() });
        }
        if !congruent(path.start(), path.end(), &chart.metric.periods()) {
            return Err(Error::rejected("path does not close up"));
        }
        Ok(LoopPath { path })
    }

    pub fn path(&self) -> &Polyline {
        &self.path
    }

    pub fn basepoint(&self) -> &[f64] {
        self.path.start()
    }

    pub fn reversed(&self) -> LoopPath {
        LoopPath { path: self.path.reversed() }
    }

    /// Traverse `self`, then `other`.
    pub fn concat(&self, other: &LoopPath) -> LoopPath {
        LoopPath { path: self.path.then(&other.path) }
    }
}

/// Parallel transport of `v0` along `path`, RK4 with `steps` steps per segment.
pub fn parallel_transport(chart: &MetricChart, path: &Polyline, v0: &[f64], steps: usize) -> Result<Vec<f64>> {
    Ok(transport_frame(chart, path, &[v0.to_vec()], steps)?.remove(0))
}

fn transport_frame(chart: &MetricChart, path: &Polyline, vectors: &[Vec<f64>], steps: usize) -> Result<Vec<Vec<f64>>> {
    let n = chart.dim();
    if path.start().len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: path.start().len() });
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    if steps == 0 {
        return Err(Error::rejected("step count must be positive"));
    }
    let mut state: Vec<Vec<f64>> = vectors.to_vec();
    let dt = 1.0 / steps as f64;
    for seg in path.vertices.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let vel: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        let at = |t: f64| -> Vec<f64> { axpy(a, t, &vel) };
        for k in 0..steps {
            let t = k as f64 * dt;
            let g1 = christoffel(chart, &at(t))?;
            let g2 = christoffel(chart, &at(t + dt / 2.0))?;
            let g4 = christoffel(chart, &at(t + dt))?;
            for s in state.iter_mut() {
                let f = |gamma: &Christoffel, s: &[f64]| -> Vec<f64> { contract(gamma, &vel, s).into_iter().map(|x| -x).collect() };
                let k1 = f(&g1, s);
                let k2 = f(&g2, &axpy(s, dt / 2.0, &k1));
                let k3 = f(&g2, &axpy(s, dt / 2.0, &k2));
                let k4 = f(&g4, &axpy(s, dt, &k3));
                for i in 0..n {
                    s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomySample {
    /// Column `j` is the transport of `∂_j`.
    pub matrix: Mat,
    /// `max |PᵀGP − G|` with `G` the metric at the basepoint.
    pub isometry_residual: f64,
}

pub fn holonomy_matrix(chart: &MetricChart, lp: &LoopPath, steps: usize) -> Result<HolonomySample> {
    let n = chart.dim();
    let frame = identity(n);
    let columns = transport_frame(chart, &lp.path, &frame, steps)?;
    let matrix = transpose(&columns);
    let g = chart.metric_at(lp.basepoint())?;
    let pgp = mat_mul(&mat_mul(&transpose(&matrix), &g), &matrix);
    Ok(HolonomySample { isometry_residual: max_abs_diff(&pgp, &g), matrix })
}

/// Holonomy matrices of loops based at `basepoint`.
pub fn holonomy_sample(chart: &MetricChart, basepoint: &[f64], loops: &[LoopPath], steps: usize) -> Result<Vec<HolonomySample>> {
    let periods = chart.metric.periods();
    loops
        .iter()
        .map(|lp| {
            if lp.basepoint().len() != basepoint.len() || !congruent(lp.basepoint(), basepoint, &periods) {
                return Err(Error::rejected("loop is not based at the basepoint"));
            }
            holonomy_matrix(chart, lp, steps)
        })
        .collect()
}

/// Angle of a holonomy matrix on a 2-dimensional tangent space, measured in
/// a `g`-orthonormal frame, in `[0, 2π)`.
pub fn rotation_angle(g: &Mat, p: &Mat) -> Result<f64> {
    if g.len() != 2 || p.len() != 2 {
        return Err(Error::rejected("rotation angle needs a 2-dimensional tangent space"));
    }
    // Orthonormal frame e1 = ∂0/|∂0|, e2 ⊥ e1.
    let n0 = libm::sqrt(g[0][0]);
    let e1 = [1.0 / n0, 0.0];
    let b = [-g[0][1] / g[0][0], 1.0];
    let nb = g_norm(g, &b);
    let e2 = [b[0] / nb, b[1] / nb];
    let pe1 = [p[0][0] * e1[0] + p[0][1] * e1[1], p[1][0] * e1[0] + p[1][1] * e1[1]];
    let inner = |u: &[f64; 2], v: &[f64; 2]| (0..2).map(|i| (0..2).map(|j| u[i] * g[i][j] * v[j]).sum::<f64>()).sum::<f64>();
    let angle = libm::atan2(inner(&pe1, &e2), inner(&pe1, &e1));
    Ok(if angle < 0.0 { angle + 2.0 * PI } else { angle })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahlerResiduals {
    /// `max |dω|` with `ω(v, w) = g(Jv, w)`.
    pub d_omega: f64,
    /// `max |∇J|`.
    pub nabla_j: f64,
}

/// Residuals of `dω = 0` and `∇J = 0` for a constant complex structure `j`.
pub fn kahler_residuals(chart: &MetricChart, j: &Mat, points: &[Vec<f64>]) -> Result<KahlerResiduals> {
    let n = chart.dim();
    if n % 2 != 0 {
        return Err(Error::rejected("a complex structure needs even dimension"));
    }
    if j.len() != n || j.iter().any(|r| r.len() != n) {
        return Err(Error::rejected(format!("complex structure must be {n}×{n}")));
    }
    let jj = mat_mul(j, j);
    if max_abs_diff(&jj, &scale_mat(&identity(n), -1.0)) > 1e-12 {
        return Err(Error::rejected("J² ≠ −Id"));
    }
    let mut out = KahlerResiduals { d_omega: 0.0, nabla_j: 0.0 };
    for x in points {
        let dg = chart.metric_derivative(x)?;
        // ∂_l ω_{ab} = Σ_k J_{ka} ∂_l g_{kb}.
        let domega: Vec<Mat> = dg
            .iter()
            .map(|d| (0..n).map(|a| (0..n).map(|b| (0..n).map(|k| j[k][a] * d[k][b]).sum()).collect()).collect())
            .collect();
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let v = domega[l][a][b] + domega[a][b][l] + domega[b][l][a];
                    out.d_omega = out.d_omega.max(v.abs());
                }
            }
        }
        let gamma = christoffel(chart, x)?;
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let v: f64 = (0..n).map(|c| gamma[a][l][c] * j[c][b] - gamma[c][l][b] * j[a][c]).sum();
                    out.nabla_j = out.nabla_j.max(v.abs());
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BergerFlags {
    pub kahler: bool,
    pub ricci_flat: bool,
    /// The caller asserts the metric is not locally symmetric, which is
    /// where the list applies.
    pub symmetric_excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyCandidate {
    pub label: String,
    pub kahler: bool,
    pub ricci_flat: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BergerLookup {
    pub candidates: Vec<HolonomyCandidate>,
    /// Set when the caller did not exclude symmetric metrics.
    pub caveat: Option<&'static str>,
}

/// Restricted holonomy groups of irreducible nonsymmetric metrics in real
/// dimension `n` whose tags include every requested flag.
pub fn berger_lookup(n: usize, flags: BergerFlags) -> Result<BergerLookup> {
    if n == 0 {
        return Err(Error::rejected("dimension must be positive"));
    }
    let mut rows: Vec<HolonomyCandidate> = Vec::new();
    let mut push = |label: String, kahler: bool, ricci_flat: bool, note: Option<&'static str>| {
        rows.push(HolonomyCandidate { label, kahler, ricci_flat, note })
    };
    push(format!("SO({n})"), false, false, None);
    if n % 2 == 0 && n >= 4 {
        let m = n / 2;
        push(format!("U({m})"), true, false, None);
        let note = (m == 2).then_some("SU(2) and Sp(1) are isomorphic");
        push(format!("SU({m})"), true, true, note);
    }
    if n % 4 == 0 {
        let r = n / 4;
        let note = (r == 1).then_some("Sp(1) is isomorphic to SU(2)");
        push(format!("Sp({r})"), true, true, note);
        if n >= 8 {
            push(format!("Sp({r})Sp(1)"), false, false, None);
        }
    }
    if n == 7 {
        push(String::from("G2"), false, true, None);
    }
    if n == 8 {
        push(String::from("Spin(7)"), false, true, None);
    }
    rows.retain(|c| (!flags.kahler || c.kahler) && (!flags.ricci_flat || c.ricci_flat));
    let caveat = (!flags.symmetric_excluded).then_some("locally symmetric metrics are outside this list");
    Ok(BergerLookup { candidates: rows, caveat })
}
