//! Independent re-verification of twistor chains.
//!
//! Nothing here calls into the search or the shared linear algebra: the
//! form is evaluated by its own loop, spans are tested by fraction-free
//! elimination on integer rows, and positivity by explicit minors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{PeriodPoint, TwistorLink};
use crate::exact::Rational;
use crate::lattice::IntegralLattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub verified: bool,
    /// Point-on-conic incidences that were checked.
    pub incidences: usize,
    pub failures: Vec<String>,
}

/// Period-domain membership decided by this module's own arithmetic.
/// Points of the wrong length are not members.
pub fn is_period_point(lattice: &IntegralLattice, p: &PeriodPoint) -> bool {
    p.re.len() == lattice.rank() && p.im.len() == lattice.rank() && member(&gram_of(lattice), p)
}

fn gram_of(lattice: &IntegralLattice) -> Vec<Vec<Rational>> {
    lattice.gram().iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect()
}

pub fn verify_chain(lattice: &IntegralLattice, start: &PeriodPoint, end: &PeriodPoint, links: &[TwistorLink]) -> ChainReport {
    let g = gram_of(lattice);
    let mut failures = Vec::new();
    let mut incidences = 0;

    for (name, p) in [("start", start), ("end", end)] {
        if !member(&g, p) {
            failures.push(format!("{name} point is not in the period domain"));
        }
    }
    if links.is_empty() {
        if !same_point(&g, start, end) {
            failures.push(String::from("empty chain but the endpoints differ"));
        }
        return ChainReport { verified: failures.is_empty(), incidences, failures };
    }
    let mut entry = start;
    for (i, link) in links.iter().enumerate() {
        let basis = link.plane.basis();
        if basis.len() != 3 || !positive_three(&g, basis) {
            failures.push(format!("conic {i}: plane is not positive definite"));
        }
        if !member(&g, &link.exit) {
            failures.push(format!("conic {i}: exit point is not in the period domain"));
        }
        for (what, p) in [("entry", entry), ("exit", &link.exit)] {
            incidences += 1;
            if !spans_contain(basis, &p.re) || !spans_contain(basis, &p.im) {
                failures.push(format!("conic {i}: {what} point is not on the conic"));
            }
        }
        entry = &link.exit;
    }
    if !same_point(&g, entry, end) {
        failures.push(String::from("last conic does not end at the target"));
    }
    ChainReport { verified: failures.is_empty(), incidences, failures }
}

fn form(g: &[Vec<Rational>], u: &[Rational], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..u.len() {
        for j in 0..v.len() {
            acc += &u[i] * &g[i][j] * &v[j];
        }
    }
    acc
}

fn member(g: &[Vec<Rational>], p: &PeriodPoint) -> bool {
    let qx = form(g, &p.re, &p.re);
    let qy = form(g, &p.im, &p.im);
    p.im_scale.is_positive() && form(g, &p.re, &p.im).is_zero() && qx == &p.im_scale * qy && qx.is_positive()
}

/// Two domain points agree iff they span the same plane with the same
/// orientation.
fn same_point(g: &[Vec<Rational>], a: &PeriodPoint, b: &PeriodPoint) -> bool {
    let plane = [a.re.clone(), a.im.clone()];
    if !spans_contain(&plane, &b.re) || !spans_contain(&plane, &b.im) {
        return false;
    }
    let (qx, qy) = (form(g, &a.re, &a.re), form(g, &a.im, &a.im));
    // Coordinates of b's parts in the orthogonal basis (a.re, a.im).
    let c11 = form(g, &b.re, &a.re) / &qx;
    let c12 = form(g, &b.re, &a.im) / &qy;
    let c21 = form(g, &b.im, &a.re) / &qx;
    let c22 = form(g, &b.im, &a.im) / &qy;
    (c11 * c22 - c12 * c21).is_positive()
}

fn positive_three(g: &[Vec<Rational>], basis: &[Vec<Rational>]) -> bool {
    let m: Vec<Vec<Rational>> = basis.iter().map(|u| basis.iter().map(|v| form(g, u, v)).collect()).collect();
    let d1 = m[0][0].clone();
    let d2 = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let d3 = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    d1.is_positive() && d2.is_positive() && d3.is_positive()
}

fn spans_contain(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut rows: Vec<Vec<BigInt>> = basis.iter().map(|b| integer_row(b)).collect();
    let before = bareiss_rank(rows.clone());
    rows.push(integer_row(v));
    bareiss_rank(rows) == before
}

fn integer_row(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                let num = &m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k];
                m[r][k] = num / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::exact::rats;
    use crate::period::{PositiveThreePlane, TwistorLink};

    #[test]
    fn rank_by_bareiss() {
        let rows = [rats(&[1, 2, 3]), rats(&[2, 4, 6]), rats(&[0, 1, 1])];
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
        assert_eq!(bareiss_rank(ints), 2);
    }

    #[test]
    fn rejects_a_broken_chain() {
        let l = IntegralLattice::diagonal(&[1, 1, 1, -1]);
        let p = PeriodPoint::new(rats(&[1, 0, 0, 0]), rats(&[0, 1, 0, 0])).unwrap();
        let q = PeriodPoint::new(rats(&[0, 1, 0, 0]), rats(&[0, 0, 1, 0])).unwrap();
        let plane = PositiveThreePlane::new(&l, vec![rats(&[1, 0, 0, 0]), rats(&[0, 1, 0, 0]), rats(&[0, 0, 1, 0])]).unwrap();
        let good = [TwistorLink { plane: plane.clone(), exit: q.clone() }];
        assert!(verify_chain(&l, &p, &q, &good).verified);
        let wrong_end = [TwistorLink { plane, exit: q.conjugate() }];
        let report = verify_chain(&l, &p, &q, &wrong_end);
        assert!(!report.verified);
        assert!(!verify_chain(&l, &p, &q, &[]).verified);
        assert!(verify_chain(&l, &p, &p, &[]).verified);
    }

    #[test]
    fn membership() {
        let l = IntegralLattice::diagonal(&[1, 1, 1, -1]);
        let p = PeriodPoint::new(rats(&[1, 0, 0, 0]), rats(&[0, 1, 0, 0])).unwrap();
        assert!(is_period_point(&l, &p));
        let null = PeriodPoint::new(rats(&[1, 0, 0, 1]), rats(&[0, 1, 0, 0])).unwrap();
        assert!(!is_period_point(&l, &null));
        let short = PeriodPoint::new(rats(&[1, 0, 0]), rats(&[0, 1, 0])).unwrap();
        assert!(!is_period_point(&l, &short));
    }
}
