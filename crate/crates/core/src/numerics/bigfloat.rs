//! Binary floating point on top of `num-bigint`: `mant · 2^exp` rounded to a
//! fixed number of significant bits.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

use std::f64::consts::LOG2_10;

/// Working precision. `digits` is the requested decimal accuracy; arithmetic
/// runs with extra guard digits on top of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    digits: u32,
}

impl Context {
    pub const GUARD_DIGITS: u32 = 20;

    pub fn new(digits: u32) -> Self {
        Self { digits: digits.max(1) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision used for every value created in this context.
    pub fn bits(&self) -> u64 {
        ((self.digits + Self::GUARD_DIGITS) as f64 * LOG2_10).ceil() as u64
    }

    /// `10^{-n}` in this context.
    pub fn epsilon(&self, n: i64) -> BigReal {
        BigReal::pow10(-n, self.bits())
    }

    pub fn zero(&self) -> BigReal {
        BigReal::zero(self.bits())
    }

    pub fn one(&self) -> BigReal {
        BigReal::from_int(1, self.bits())
    }

    pub fn int(&self, n: i64) -> BigReal {
        BigReal::from_int(n, self.bits())
    }

    pub fn rational(&self, r: &Rational) -> BigReal {
        BigReal::from_rational(r, self.bits())
    }

    pub fn pi(&self) -> BigReal {
        BigReal::pi(self.bits())
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new(50)
    }
}

#[derive(Clone, Debug)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
    prec: u64,
}

fn bitlen(n: &BigInt) -> u64 {
    n.bits()
}

/// `n >> shift` rounded to nearest, ties away from zero.
fn shr_round(n: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return n.clone();
    }
    let neg = n.is_negative();
    let mag = n.magnitude();
    let half = num_bigint::BigUint::one() << (shift - 1);
    let r = (mag + half) >> shift;
    let r = BigInt::from_biguint(Sign::Plus, r);
    if neg {
        -r
    } else {
        r
    }
}

impl BigReal {
    fn make(mant: BigInt, exp: i64, prec: u64) -> Self {
        let mut x = Self { mant, exp, prec };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bl = bitlen(&self.mant);
        if bl > self.prec {
            let shift = bl - self.prec;
            self.mant = shr_round(&self.mant, shift);
            self.exp += shift as i64;
        }
    }

    pub fn zero(prec: u64) -> Self {
        Self { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_int(n: i64, prec: u64) -> Self {
        Self::make(BigInt::from(n), 0, prec)
    }

    pub fn from_bigint(n: BigInt, prec: u64) -> Self {
        Self::make(n, 0, prec)
    }

    /// `m · 2^e`.
    pub fn from_parts(m: BigInt, e: i64, prec: u64) -> Self {
        Self::make(m, e, prec)
    }

    pub fn from_rational(r: &Rational, prec: u64) -> Self {
        Self::from_bigint(r.numer().clone(), prec).div(&Self::from_bigint(r.denom().clone(), prec))
    }

    /// Nearest value to an `f64` (exact conversion of the double).
    pub fn from_f64(x: f64, prec: u64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if (bits >> 63) == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::make(BigInt::from(m) * sign, e, prec)
    }

    pub fn pow10(n: i64, prec: u64) -> Self {
        let p = num_traits::pow(BigInt::from(10), n.unsigned_abs() as usize);
        if n >= 0 {
            Self::from_bigint(p, prec)
        } else {
            Self::from_int(1, prec).div(&Self::from_bigint(p, prec))
        }
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn with_precision(&self, prec: u64) -> Self {
        Self::make(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(bitlen(&self.mant) as i64 - 1 + self.exp)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bl = bitlen(&self.mant) as i64;
        let shift = (bl - 60).max(0);
        let m = shr_round(&self.mant, shift as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exp + shift).clamp(-1100, 1100) as i32)
    }

    fn prec2(&self, other: &Self) -> u64 {
        self.prec.min(other.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec2(other);
        if self.is_zero() {
            return other.with_precision(prec);
        }
        if other.is_zero() {
            return self.with_precision(prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        // lo is negligible when far below the precision of hi
        let hi_top = bitlen(&hi.mant) as i64 + hi.exp;
        let lo_top = bitlen(&lo.mant) as i64 + lo.exp;
        if hi_top - lo_top > prec as i64 + 4 {
            return hi.with_precision(prec);
        }
        if lo_top - hi_top > prec as i64 + 4 {
            return lo.with_precision(prec);
        }
        let shift = (hi.exp - lo.exp) as u64;
        let m = (&hi.mant << shift) + &lo.mant;
        Self::make(m, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::make(&self.mant * &other.mant, self.exp + other.exp, self.prec2(other))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec2(other);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + bitlen(&other.mant) as i64 - bitlen(&self.mant) as i64 + 2).max(0);
        let q = (&self.mant << shift as u64) / &other.mant;
        Self::make(q, self.exp - shift - other.exp, prec)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self::make(&self.mant * n, self.exp, self.prec)
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        Self::make(&self.mant * n, self.exp, self.prec)
    }

    pub fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        if self.is_zero() {
            return self.clone();
        }
        let shift = (self.prec as i64 + 66 - bitlen(&self.mant) as i64).max(0);
        let q = (&self.mant << shift as u64) / n;
        Self::make(q, self.exp - shift, self.prec)
    }

    pub fn div_bigint(&self, n: &BigInt) -> Self {
        self.div(&Self::from_bigint(n.clone(), self.prec))
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        if r.denom().is_one() {
            self.mul_bigint(r.numer())
        } else {
            self.mul_bigint(r.numer()).div_bigint(r.denom())
        }
    }

    /// `x · 2^k`, exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return Self::from_int(1, self.prec).div(&self.powi(-n));
        }
        let mut result = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.square();
            k >>= 1;
        }
        result
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of negative number");
        if self.is_zero() {
            return self.clone();
        }
        // make the exponent even and leave 2·prec bits under the root
        let mut shift = (2 * self.prec as i64 + 4 - bitlen(&self.mant) as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.mant << shift as u64).sqrt();
        Self::make(m, (self.exp - shift) / 2, self.prec)
    }

    /// `e^x` by argument halving and Taylor series.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::from_int(1, prec);
        }
        // split off an integer multiple of ln 2 to keep the reduced argument small
        let ln2 = Self::ln2(prec + 32);
        let x = self.with_precision(prec + 32);
        let k = x.div(&ln2).round_to_bigint();
        let k_i64 = k.to_i64().expect("exponent out of range");
        let r = x.sub(&ln2.mul_bigint(&k));
        let halvings = ((prec as f64).sqrt() as i64).max(4);
        let wp = prec + 32 + halvings as u64;
        let r = r.with_precision(wp).shl(-halvings);
        let mut sum = Self::from_int(1, wp);
        let mut term = Self::from_int(1, wp);
        let eps = -(wp as i64) - 2;
        for n in 1.. {
            term = term.mul(&r).div_int(n);
            sum = sum.add(&term);
            match term.log2_floor() {
                None => break,
                Some(e) if e < eps => break,
                _ => {}
            }
        }
        for _ in 0..halvings {
            sum = sum.square();
        }
        sum.shl(k_i64).with_precision(prec)
    }

    /// `log 2` by the series `Σ 1/(k 2^k)`, cached per precision.
    pub fn ln2(prec: u64) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u64, BigReal>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("ln2 cache").get(&prec) {
            return v.clone();
        }
        let wp = prec + 16;
        let scale = wp + 8;
        let one = BigInt::one() << scale;
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            let term = (&one >> k) / BigInt::from(k);
            if term.is_zero() {
                break;
            }
            sum += term;
            k += 1;
        }
        let v = Self::make(sum, -(scale as i64), prec);
        cache.lock().expect("ln2 cache").insert(prec, v.clone());
        v
    }

    /// `π` by Machin's formula, cached per precision.
    pub fn pi(prec: u64) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u64, BigReal>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("pi cache").get(&prec) {
            return v.clone();
        }
        let scale = prec + 24;
        let one = BigInt::one() << scale;
        let arctan_inv = |x: u64| {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut power = &one / &x;
            let mut sum = power.clone();
            let mut k = 1u64;
            loop {
                power /= &x2;
                if power.is_zero() {
                    break;
                }
                let term = &power / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    sum -= term;
                } else {
                    sum += term;
                }
                k += 1;
            }
            sum
        };
        let v = arctan_inv(5) * 16 - arctan_inv(239) * 4;
        let v = Self::make(v, -(scale as i64), prec);
        cache.lock().expect("pi cache").insert(prec, v.clone());
        v
    }

    /// Nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let d = BigInt::one() << (-self.exp) as u64;
            self.mant.div_floor(&d)
        }
    }

    /// Exact rational value of this binary float.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }

    /// `|self| < 10^{-n}`.
    pub fn abs_below_pow10(&self, n: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        self.abs().cmp_value(&Self::pow10(-n, self.prec)) == Ordering::Less
    }

    /// Decimal exponent `e` with `10^e <= |x| < 10^{e+1}`.
    pub fn decimal_exponent(&self) -> Option<i64> {
        let l2 = self.log2_floor()?;
        let mut e = ((l2 as f64) / LOG2_10).floor() as i64;
        let a = self.abs().to_rational();
        let ten = Rational::from_integer(BigInt::from(10));
        let p = |k: i64| {
            if k >= 0 {
                Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
            } else {
                Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-k) as usize))
            }
        };
        let mut low = p(e);
        while low > a {
            e -= 1;
            low = &low / &ten;
        }
        while &low * &ten <= a {
            e += 1;
            low = &low * &ten;
        }
        Some(e)
    }

    /// `sig` significant decimal digits as `(negative, digit string, exponent)`,
    /// value = 0.d1d2... · 10^{exponent+1}.
    fn decimal_digits(&self, sig: usize) -> (bool, String, i64) {
        let Some(mut e) = self.decimal_exponent() else {
            return (false, "0".repeat(sig), 0);
        };
        let a = self.abs().to_rational();
        let digits = loop {
            let shift = sig as i64 - 1 - e;
            let scaled = if shift >= 0 {
                a.clone() * Rational::from_integer(num_traits::pow(BigInt::from(10), shift as usize))
            } else {
                a.clone() / Rational::from_integer(num_traits::pow(BigInt::from(10), (-shift) as usize))
            };
            let n = (scaled + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
            let s = n.to_string();
            if s.len() > sig {
                e += 1;
                continue;
            }
            break s;
        };
        (self.is_negative(), digits, e)
    }

    /// Scientific notation with `sig` significant digits, e.g. `1.867e-3`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".into();
        }
        let (neg, d, e) = self.decimal_digits(sig);
        let mant = if d.len() > 1 { format!("{}.{}", &d[..1], &d[1..]) } else { d };
        format!("{}{}e{}", if neg { "-" } else { "" }, mant, e)
    }

    /// Positional notation with `sig` significant digits when the magnitude
    /// is moderate, scientific notation otherwise.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".into();
        }
        let (neg, d, e) = self.decimal_digits(sig);
        if !(-6..=40).contains(&e) {
            return self.to_sci_string(sig);
        }
        let sign = if neg { "-" } else { "" };
        let body = if e < 0 {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), d)
        } else if (e as usize) + 1 >= d.len() {
            format!("{}{}", d, "0".repeat(e as usize + 1 - d.len()))
        } else {
            format!("{}.{}", &d[..e as usize + 1], &d[e as usize + 1..])
        };
        format!("{sign}{body}")
    }

    /// Parses decimal or scientific notation exactly and rounds.
    pub fn parse(s: &str, prec: u64) -> Result<Self> {
        let t = s.trim();
        let (m, e) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| Error::Parse(format!("invalid number '{s}'")))?),
            None => (t, 0),
        };
        let r = crate::exact::parse_rational(m)?;
        Ok(Self::from_rational(&r, prec).mul(&Self::pow10(e, prec)))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) / LOG2_10).floor() as usize);
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && self.exp == other.exp
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal {
                BigReal::$m(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::neg(self)
    }
}

impl crate::ihara::SeriesCoeff for BigReal {
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn times_rational(&self, r: &Rational) -> Self {
        self.mul_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    const PI50: &str = "3.14159265358979323846264338327950288419716939937510";

    #[test]
    fn pi_digits() {
        let ctx = Context::new(50);
        assert!(ctx.pi().to_decimal_string(60).starts_with(PI50));
        let ctx = Context::new(100);
        assert_eq!(
            ctx.pi().to_decimal_string(101),
            "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170680"
        );
    }

    #[test]
    fn exp_and_ln2() {
        let ctx = Context::new(40);
        let e = ctx.one().exp();
        assert_eq!(e.to_decimal_string(41), "2.7182818284590452353602874713526624977572");
        let ln2 = BigReal::ln2(ctx.bits());
        assert!(ln2.to_decimal_string(40).starts_with("0.6931471805599453094172321214581765680755"));
        let x = ctx.int(-7).div_int(3);
        let prod = x.exp().mul(&x.neg().exp());
        assert!(prod.sub(&ctx.one()).abs_below_pow10(45));
        let big = ctx.pi().mul_int(2 * 60).exp();
        assert!(big.log2_floor().unwrap() > 540);
    }

    #[test]
    fn sqrt_and_division() {
        let ctx = Context::new(30);
        let two = ctx.int(2);
        let r = two.sqrt();
        assert_eq!(r.to_decimal_string(31), "1.414213562373095048801688724210");
        assert!(r.square().sub(&two).abs_below_pow10(45));
        let third = ctx.one().div_int(3);
        assert_eq!(third.to_decimal_string(10), "0.3333333333");
        assert_eq!(ctx.rational(&rat(-1, 8)).to_decimal_string(5), "-0.12500");
    }

    #[test]
    fn formatting_and_parsing() {
        let ctx = Context::new(30);
        let x = BigReal::parse("1.867e-3", ctx.bits()).unwrap();
        assert_eq!(x.to_sci_string(4), "1.867e-3");
        assert_eq!(ctx.int(12345).to_decimal_string(3), "12300");
        assert_eq!(ctx.int(999).to_decimal_string(2), "1000");
        assert_eq!(BigReal::parse("-2.5", ctx.bits()).unwrap().to_decimal_string(3), "-2.50");
        assert_eq!(ctx.epsilon(50).to_sci_string(2), "1.0e-50");
        assert_eq!(ctx.zero().to_decimal_string(5), "0");
    }

    #[test]
    fn f64_roundtrip() {
        let ctx = Context::new(30);
        for x in [1.5, -0.1, 3.0e-200, 123456.789] {
            assert_eq!(BigReal::from_f64(x, ctx.bits()).to_f64(), x);
        }
    }

    proptest! {
        #[test]
        fn field_axioms_to_precision(a in -1.0e6f64..1.0e6, b in 1.0f64..1.0e6, c in -1.0e3f64..1.0e3) {
            let p = Context::new(50).bits();
            let (a, b, c) = (BigReal::from_f64(a, p), BigReal::from_f64(b, p), BigReal::from_f64(c, p));
            let q = a.div(&b).mul(&b);
            prop_assert!(q.sub(&a).abs_below_pow10(50 - 6 - 1));
            let l = a.add(&c).mul(&b);
            let r = a.mul(&b).add(&c.mul(&b));
            prop_assert!(l.sub(&r).abs_below_pow10(50 - 12));
        }
    }
}
