//! Classical identities between zeta values, evaluated numerically.

use super::bigfloat::{BigReal, Context};
use super::mzv::{zeta, MzvEvaluator};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat, Rational};
use crate::words::Composition;

fn twos(n: usize) -> Composition {
    Composition::new(vec![2; n])
}

/// `π^{2n}/(2n+1)!`.
pub fn euler_block_closed_form(n: u32, ctx: &Context) -> BigReal {
    ctx.pi().powi(2 * n as i64).div_bigint(&factorial(2 * n as u64 + 1))
}

/// `|ζ(2,...,2) - π^{2n}/(2n+1)!` with `n` twos.
pub fn euler_block_residual(n: u32, ev: &MzvEvaluator) -> Result<BigReal> {
    let v = ev.mzv(&twos(n as usize))?;
    Ok(v.sub(&euler_block_closed_form(n, ev.context())).abs())
}

/// `A^r_{a,b} = C(2r, 2a+2)`.
pub fn zagier_a(r: u32, a: u32) -> Rational {
    Rational::from_integer(binomial(2 * r as u64, 2 * a as u64 + 2))
}

/// `B^r_{a,b} = (1 - 2^{-2r}) C(2r, 2b+1)`.
pub fn zagier_b(r: u32, b: u32) -> Rational {
    let factor = Rational::from_integer(1.into()) - Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), 2 * r as usize));
    factor * Rational::from_integer(binomial(2 * r as u64, 2 * b as u64 + 1))
}

/// Coefficients `2 (-1)^r (A^r - B^r)` of `ζ(2r+1) ζ(2^{a+b+1-r})`, for
/// `r = 1..=a+b+1`.
pub fn zagier_coefficients(a: u32, b: u32) -> Vec<(u32, Rational)> {
    (1..=a + b + 1)
        .map(|r| {
            let sign = if r % 2 == 0 { 1 } else { -1 };
            (r, rat(2 * sign, 1) * (zagier_a(r, a) - zagier_b(r, b)))
        })
        .collect()
}

/// `ζ(2^a, 3, 2^b)`.
pub fn zagier_composition(a: u32, b: u32) -> Composition {
    let mut parts = vec![2; a as usize];
    parts.push(3);
    parts.extend(std::iter::repeat_n(2, b as usize));
    Composition::new(parts)
}

/// `|ζ(2^a,3,2^b) - 2 Σ_r (-1)^r (A^r - B^r) ζ(2r+1) ζ(2^{a+b+1-r})|`.
pub fn zagier_identity_check(a: u32, b: u32, ev: &MzvEvaluator) -> Result<BigReal> {
    if a + b > 4 {
        return Err(Error::InvalidArgument("zagier check requires a + b <= 4".into()));
    }
    let lhs = ev.mzv(&zagier_composition(a, b))?;
    let mut rhs = ev.context().zero();
    for (r, coeff) in zagier_coefficients(a, b) {
        let block = ev.mzv(&twos((a + b + 1 - r) as usize))?;
        let odd = ev.mzv(&Composition::new(vec![2 * r + 1]))?;
        rhs = rhs.add(&odd.mul(&block).mul_rational(&coeff));
    }
    Ok(lhs.sub(&rhs).abs())
}

/// `|28ζ(3,9) + 150ζ(5,7) + 168ζ(7,5) - (5197/691) ζ(12)|`.
pub fn weight12_relation_residual(ev: &MzvEvaluator) -> Result<BigReal> {
    let z = |p: &[u32]| ev.mzv(&Composition::new(p.to_vec()));
    let lhs = z(&[3, 9])?.mul_int(28).add(&z(&[5, 7])?.mul_int(150)).add(&z(&[7, 5])?.mul_int(168));
    let rhs = z(&[12])?.mul_rational(&rat(5197, 691));
    Ok(lhs.sub(&rhs).abs())
}

#[derive(Clone, Debug)]
pub struct RamanujanCheck {
    pub residual: BigReal,
    pub terms: usize,
    pub first_term: BigReal,
    pub value: BigReal,
}

/// `ζ(3) = 7π³/180 - 2 Σ_{n>=1} 1/(n³(e^{2πn} - 1))`, with the Lambert series
/// cut once terms drop below `10^{-(digits+10)}`.
pub fn ramanujan_zeta3_check(ctx: &Context) -> Result<RamanujanCheck> {
    let pi = ctx.pi();
    let e2pi = pi.mul_int(2).exp();
    let cutoff = ctx.epsilon(ctx.digits() as i64 + 10);
    let one = ctx.one();
    let mut power = one.clone();
    let mut sum = ctx.zero();
    let mut first = ctx.zero();
    let mut terms = 0;
    for n in 1i64.. {
        power = power.mul(&e2pi);
        let term = one.div(&power.sub(&one).mul_int(n * n * n));
        if n == 1 {
            first = term.clone();
        }
        if term.cmp_value(&cutoff).is_lt() {
            break;
        }
        sum = sum.add(&term);
        terms += 1;
    }
    let value = pi.powi(3).mul_int(7).div_int(180).sub(&sum.mul_int(2));
    let residual = value.sub(&zeta(3, ctx)?).abs();
    Ok(RamanujanCheck { residual, terms, first_term: first, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zagier_coefficients_examples() {
        // (0,0): 2(-1)(A^1 - B^1) = 2(-1)(1 - 3/2) = 1
        assert_eq!(zagier_coefficients(0, 0), vec![(1, rat(1, 1))]);
        assert_eq!(zagier_a(2, 0), rat(6, 1));
        assert_eq!(zagier_a(2, 1), rat(1, 1));
        assert_eq!(zagier_a(1, 1), rat(0, 1));
        assert_eq!(Rational::from_integer(binomial(4, 2)), rat(6, 1));
        // (1,0): 3 ζ(3)ζ(2) - 11/2 ζ(5)
        assert_eq!(zagier_coefficients(1, 0), vec![(1, rat(3, 1)), (2, rat(-11, 2))]);
    }

    #[test]
    fn ramanujan_at_two_precisions() {
        let r = ramanujan_zeta3_check(&Context::new(50)).unwrap();
        assert!(r.residual.abs_below_pow10(45));
        assert!(r.terms <= 60);
        assert_eq!(r.first_term.to_sci_string(4), "1.871e-3");
        let r = ramanujan_zeta3_check(&Context::new(20)).unwrap();
        assert!(r.residual.abs_below_pow10(15));
    }

    #[test]
    fn zagier_small_cases() {
        let ev = MzvEvaluator::new(Context::new(50));
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert!(zagier_identity_check(a, b, &ev).unwrap().abs_below_pow10(40), "({a},{b})");
        }
    }

    #[test]
    fn euler_blocks() {
        let ev = MzvEvaluator::new(Context::new(50));
        for n in 1..=3 {
            assert!(euler_block_residual(n, &ev).unwrap().abs_below_pow10(40));
        }
    }
}
