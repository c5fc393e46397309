//! Exact scalar types and small helpers shared by the algebraic modules.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;
/// Element of ℚ(i).
pub type GaussianRational = Complex<BigRational>;

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(values: &[i64]) -> Vec<Integer> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn rats(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

pub fn gaussian(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// Parses `"p/q"` or `"p"`. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Option<Rational> {
    BigRational::from_str(s.trim()).ok()
}

pub fn parse_integer(s: &str) -> Option<Integer> {
    BigInt::from_str(s.trim()).ok()
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// The non-negative rational square root of `q`, when it exists.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = sqrt_integer(q.numer())?;
    let d = sqrt_integer(q.denom())?;
    Some(BigRational::new(n, d))
}

fn sqrt_integer(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_rational_square(q: &Rational) -> bool {
    sqrt_exact(q).is_some()
}

pub fn to_rational_vec(v: &[Integer]) -> Vec<Rational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn scale(v: &[Rational], s: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * s).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Positive multiple of `v` with coprime integer entries; zero stays zero.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer as _;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    scaled.into_iter().map(|x| BigRational::from_integer(x / &gcd)).collect()
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
