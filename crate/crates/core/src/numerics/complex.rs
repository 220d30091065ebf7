//! Complex numbers over [`BigReal`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::bigfloat::{BigReal, Context};
use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let im = BigReal::zero(re.precision());
        Self { re, im }
    }

    pub fn zero(prec: u64) -> Self {
        Self { re: BigReal::zero(prec), im: BigReal::zero(prec) }
    }

    pub fn one(prec: u64) -> Self {
        Self::from_real(BigReal::from_int(1, prec))
    }

    pub fn i(prec: u64) -> Self {
        Self { re: BigReal::zero(prec), im: BigReal::from_int(1, prec) }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u64) -> Self {
        Self { re: BigReal::from_rational(re, prec), im: BigReal::from_rational(im, prec) }
    }

    /// `2πi`.
    pub fn two_pi_i(prec: u64) -> Self {
        Self { re: BigReal::zero(prec), im: BigReal::pi(prec).mul_int(2) }
    }

    pub fn precision(&self) -> u64 {
        self.re.precision().min(self.im.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if o.im.is_zero() {
            return self.mul_real(&o.re);
        }
        if self.im.is_zero() {
            return o.mul_real(&self.re);
        }
        Self {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, r: &BigReal) -> Self {
        Self { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        Self { re: self.re.mul_bigint(n), im: self.im.mul_bigint(n) }
    }

    pub fn div_int(&self, n: i64) -> Self {
        Self { re: self.re.div_int(n), im: self.im.div_int(n) }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        Self { re: self.re.mul_rational(r), im: self.im.mul_rational(r) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    /// `max(|re|, |im|)`, a cheap norm for tolerance checks.
    pub fn max_abs(&self) -> BigReal {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a.cmp_value(&b).is_ge() {
            a
        } else {
            b
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self { re: self.re.div(&n), im: self.im.neg().div(&n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn powi(&self, n: u64) -> Self {
        let mut result = Self::one(self.precision());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// `e^z`, with the imaginary part reduced modulo `2π` first.
    pub fn exp(&self) -> Self {
        let prec = self.precision();
        let wp = prec + 32;
        let two_pi = BigReal::pi(wp).mul_int(2);
        let im = self.im.with_precision(wp);
        let k = im.div(&two_pi).round_to_bigint();
        let y = im.sub(&two_pi.mul_bigint(&k));
        let halvings = ((wp as f64).sqrt() as i64).max(4);
        let wp2 = wp + halvings as u64;
        let z = Self { re: BigReal::zero(wp2), im: y.with_precision(wp2).shl(-halvings) };
        let mut sum = Self::one(wp2);
        let mut term = Self::one(wp2);
        let eps = -(wp2 as i64) - 2;
        for n in 1.. {
            term = term.mul(&z).div_int(n);
            sum = sum.add(&term);
            let small = |x: &BigReal| x.log2_floor().is_none_or(|e| e < eps);
            if small(&term.re) && small(&term.im) {
                break;
            }
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        let r = self.re.with_precision(wp).exp();
        Self { re: sum.re.mul(&r).with_precision(prec), im: sum.im.mul(&r).with_precision(prec) }
    }

    /// Parses `a`, `bi`, `a+bi`, `(1+3i)/2`, `i`, `2i`.
    pub fn parse(s: &str, ctx: &Context) -> Result<Self> {
        let prec = ctx.bits();
        let err = || Error::Parse(format!("invalid complex number '{s}'"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = t.strip_prefix('(') {
            let (inner, rest) = body.split_once(')').ok_or_else(err)?;
            let z = Self::parse(inner, ctx)?;
            if rest.is_empty() {
                return Ok(z);
            }
            let d = rest.strip_prefix('/').ok_or_else(err)?;
            let d = BigReal::parse(d, prec).map_err(|_| err())?;
            return Ok(Self { re: z.re.div(&d), im: z.im.div(&d) });
        }
        let imag_coeff = |p: &str| -> Result<BigReal> {
            let p = p.trim_end_matches('i').trim_end_matches('*');
            match p {
                "" | "+" => Ok(BigReal::from_int(1, prec)),
                "-" => Ok(BigReal::from_int(-1, prec)),
                _ => BigReal::parse(p, prec).map_err(|_| err()),
            }
        };
        if !t.ends_with('i') {
            return Ok(Self::from_real(BigReal::parse(&t, prec).map_err(|_| err())?));
        }
        // split at the last sign that is not part of an exponent
        let bytes = t.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => Ok(Self {
                re: BigReal::parse(&t[..idx], prec).map_err(|_| err())?,
                im: imag_coeff(&t[idx..])?,
            }),
            None => Ok(Self { re: BigReal::zero(prec), im: imag_coeff(&t)? }),
        }
    }

    pub fn to_string_digits(&self, sig: usize) -> String {
        let im = self.im.to_decimal_string(sig);
        if let Some(abs) = im.strip_prefix('-') {
            format!("{} - {}i", self.re.to_decimal_string(sig), abs)
        } else {
            format!("{} + {}i", self.re.to_decimal_string(sig), im)
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_string_digits(sig))
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::add(self, rhs)
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::sub(self, rhs)
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::mul(self, rhs)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::neg(self)
    }
}
