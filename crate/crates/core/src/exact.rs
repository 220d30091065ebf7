//! Exact arithmetic over the rationals: binomials, Bernoulli numbers and
//! power series truncated at a fixed degree.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli numbers `B_0 ..= B_n` with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while table.len() <= n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let m = table.len() as u64;
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(m + 1, k as u64)) * b;
            }
        }
        let next = -acc / Rational::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[..=n].to_vec()
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is non-empty")
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(p, q))
    } else if let Some((ip, fp)) = s.split_once('.') {
        // terminating decimal
        let neg = ip.trim_start().starts_with('-');
        let ip: BigInt = if ip.is_empty() || ip == "-" { BigInt::zero() } else { ip.parse().map_err(|_| err())? };
        let digits: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().map_err(|_| err())? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac = Rational::new(digits, scale);
        let whole = Rational::from_integer(ip);
        Ok(if neg { whole - frac } else { whole + frac })
    } else {
        let p: BigInt = s.parse().map_err(|_| err())?;
        Ok(Rational::from_integer(p))
    }
}

/// Best rational approximation with denominator at most `max_den`, via the
/// continued fraction expansion of `x` (given exactly as a rational).
pub fn best_rational_approximation(x: &Rational, max_den: &BigInt) -> Rational {
    let neg = x.is_negative();
    let mut rem = x.abs();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = rem.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > max_den {
            // semiconvergent check
            let t = (max_den - &q0) / &q1;
            let ps = &t * &p1 + &p0;
            let qs = &t * &q1 + &q0;
            let cand_conv = Rational::new(p1.clone(), q1.clone());
            let best = if qs.is_positive() {
                let cand_semi = Rational::new(ps, qs);
                let target = x.abs();
                if (&cand_semi - &target).abs() < (&cand_conv - &target).abs() {
                    cand_semi
                } else {
                    cand_conv
                }
            } else {
                cand_conv
            };
            return if neg { -best } else { best };
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rem - Rational::from_integer(a);
        if frac.is_zero() {
            let r = Rational::new(p1, q1);
            return if neg { -r } else { r };
        }
        rem = frac.recip();
    }
}

pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Power series `sum_{n <= truncation} c_n t^n` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    pub fn zero(truncation: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); truncation + 1] }
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(Rational::one(), 0, truncation)
    }

    pub fn monomial(c: Rational, degree: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if degree <= truncation {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Builds a series from polynomial coefficients, padding or dropping
    /// terms to fit `truncation`.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = Rational>, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        for (i, c) in coeffs.into_iter().enumerate().take(truncation + 1) {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn from_integers(coeffs: &[i64], truncation: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)), truncation)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch { left: self.truncation(), right: other.truncation() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.truncation();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.truncation();
        let inv0 = c0.recip();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out.coeffs[k - j];
                }
            }
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    /// Coefficients as machine integers; `None` if any is non-integral or too large.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}] + O(t^{})", parts.join(", "), self.truncation() + 1)
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `gcd`-reduced check used by tests and serialization.
pub fn is_reduced(r: &Rational) -> bool {
    r.numer().gcd(r.denom()).is_one() && r.denom().is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence_holds() {
        let b = bernoulli_table(41);
        for n in 1..=40u64 {
            let s: Rational = (0..=n)
                .map(|k| Rational::from_integer(binomial(n + 1, k)) * &b[k as usize])
                .sum();
            assert!(s.is_zero(), "recurrence fails at n={n}");
        }
        for n in (3..=41).step_by(2) {
            assert!(b[n].is_zero());
        }
    }

    #[test]
    fn inverse_examples() {
        let s = RationalSeries::from_integers(&[1, 0, -1, -1], 12);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.to_integers().unwrap(), vec![1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12]);
        assert_eq!(RationalSeries::one(5).inverse().unwrap(), RationalSeries::one(5));
        let geo = RationalSeries::from_integers(&[1, -1], 4).inverse().unwrap();
        assert_eq!(geo.to_integers().unwrap(), vec![1; 5]);
        assert_eq!(
            RationalSeries::from_integers(&[0, 1], 3).inverse(),
            Err(Error::ZeroConstantTerm)
        );
    }

    #[test]
    fn mismatched_truncations_are_errors() {
        let a = RationalSeries::one(3);
        let b = RationalSeries::one(4);
        assert!(matches!(a.mul(&b), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(5197, 691)), "5197/691");
        assert_eq!(format_rational(&int(-3)), "-3");
        assert_eq!(parse_rational("10/4").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn continued_fraction_reconstruction() {
        let x = rat(5197, 691) + Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 40));
        let bound = BigInt::from(1_000_000);
        assert_eq!(best_rational_approximation(&x, &bound), rat(5197, 691));
        assert_eq!(best_rational_approximation(&rat(-5, 2), &bound), rat(-5, 2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn add_sub_roundtrip(a in small_rational(), b in small_rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert!(is_reduced(&(&a + &b)));
        }

        #[test]
        fn mul_associative(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        }

        #[test]
        fn series_inverse_is_inverse(cs in proptest::collection::vec(-20i64..20, 1..8), c0 in 1i64..5) {
            let mut coeffs = vec![c0];
            coeffs.extend(cs);
            let s = RationalSeries::from_integers(&coeffs, 10);
            let inv = s.inverse().unwrap();
            prop_assert_eq!(s.mul(&inv).unwrap(), RationalSeries::one(10));
        }
    }
}
