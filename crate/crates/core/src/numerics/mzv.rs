//! Riemann zeta values, multiple zeta values and regularized iterated
//! integrals on the path from 0 to 1.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use super::bigfloat::{BigReal, Context};
use crate::error::{Error, Result};
use crate::exact::{bernoulli, factorial, Rational};
use crate::ihara::NoncommSeries;
use crate::words::{composition_to_word, shuffle_regularize, Composition, Word};

/// `ζ(s)` for an integer `s >= 2` by Euler–Maclaurin summation.
pub fn zeta(s: u32, ctx: &Context) -> Result<BigReal> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("zeta({s}) diverges")));
    }
    let prec = ctx.bits() + 16;
    let m = (0.6 * ctx.digits() as f64) as u32 + 12;
    let n = m as i64;
    let s_i = s as i64;
    let one = BigReal::from_int(1, prec);
    let mut sum = BigReal::zero(prec);
    for k in 1..n {
        sum = sum.add(&one.div(&BigReal::from_int(k, prec).powi(s_i)));
    }
    let big_n = BigReal::from_int(n, prec);
    let n_pow_s = big_n.powi(s_i);
    let inv_ns = one.div(&n_pow_s);
    // N^{1-s}/(s-1) + N^{-s}/2
    sum = sum.add(&big_n.mul(&inv_ns).div_int(s_i - 1));
    sum = sum.add(&inv_ns.div_int(2));
    // Σ_j B_{2j}/(2j)! · s(s+1)...(s+2j-2) · N^{-s-2j+1}
    let inv_n2 = one.div(&big_n.square());
    let mut power = inv_ns.mul(&big_n).mul(&inv_n2); // N^{-s-1}
    let mut rising = BigReal::from_int(s_i, prec); // s
    for j in 1..=m as i64 {
        let b = bernoulli(2 * j as usize);
        let coeff = b / Rational::from_integer(factorial(2 * j as u64));
        sum = sum.add(&rising.mul(&power).mul_rational(&coeff));
        rising = rising.mul_int(s_i + 2 * j - 1).mul_int(s_i + 2 * j);
        power = power.mul(&inv_n2);
    }
    Ok(sum.with_precision(ctx.bits()))
}

/// Values at `z = 1/2` of `I(0; a1..aj; z)` for every prefix of `word`
/// (including the empty prefix, with value 1). The first letter must be 1.
fn prefix_values_at_half(word: &[u8], prec: u64) -> Vec<BigReal> {
    let n = word.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigReal::from_int(1, prec));
    if n == 0 {
        return out;
    }
    assert_eq!(word[0], 1, "prefix must start with 1");
    let terms = prec as usize + 8 * n + 16;
    let one = BigReal::from_int(1, prec);
    // coefficients of z^k, k = 1..=terms
    let mut a: Vec<BigReal> = (1..=terms as i64).map(|k| one.div_int(k)).collect();
    let value = |a: &[BigReal]| {
        let mut s = BigReal::zero(prec);
        for (k, c) in a.iter().enumerate() {
            s = s.add(&c.shl(-(k as i64 + 1)));
        }
        s
    };
    out.push(value(&a));
    for &letter in &word[1..] {
        if letter == 0 {
            for (k, c) in a.iter_mut().enumerate() {
                *c = c.div_int(k as i64 + 1);
            }
        } else {
            let mut running = BigReal::zero(prec);
            let mut next = Vec::with_capacity(terms);
            for (k, c) in a.iter().enumerate() {
                next.push(running.div_int(k as i64 + 1));
                running = running.add(c);
            }
            a = next;
        }
        out.push(value(&a));
    }
    out
}

/// `ζ(c)` by splitting the path from 0 to 1 at 1/2, where every piece is a
/// multiple polylogarithm at 1/2 with terms decaying like `2^{-k}`.
pub fn mzv_accelerated(c: &Composition, ctx: &Context) -> Result<BigReal> {
    if !c.is_admissible() {
        return Err(Error::Inadmissible(c.clone()));
    }
    let prec = ctx.bits() + 8;
    let w = composition_to_word(c);
    let n = w.len();
    if n == 0 {
        return Ok(ctx.one());
    }
    // I(1/2; b; 1) = I(0; reversed complement of b; 1/2)
    let dual: Vec<u8> = w.letters().iter().rev().map(|a| 1 - a).collect();
    let p = prefix_values_at_half(w.letters(), prec);
    let q = prefix_values_at_half(&dual, prec);
    let mut sum = BigReal::zero(prec);
    for k in 0..=n {
        sum = sum.add(&p[k].mul(&q[n - k]));
    }
    Ok(sum.with_precision(ctx.bits()))
}

/// Truncated nested sum `Σ_{k1<...<kr<=N}` plus a first-order estimate of
/// the tail in the outermost index. Low accuracy; used as an independent
/// cross-check of [`mzv_accelerated`].
pub fn mzv_direct(c: &Composition, terms: usize, ctx: &Context) -> Result<BigReal> {
    if !c.is_admissible() {
        return Err(Error::Inadmissible(c.clone()));
    }
    let prec = ctx.bits();
    let parts = c.parts();
    if parts.is_empty() {
        return Ok(ctx.one());
    }
    let one = BigReal::from_int(1, prec);
    let inv_pows: Vec<Vec<BigReal>> = parts
        .iter()
        .map(|&s| {
            (1..=terms as i64)
                .map(|k| one.div(&BigReal::from_int(k, prec).powi(s as i64)))
                .collect()
        })
        .collect();
    // layer[k] = Σ over k1<...<kj = k+1 of the first j factors
    let mut layer: Vec<BigReal> = inv_pows[0].clone();
    let mut inner_total = BigReal::zero(prec);
    for (j, pows) in inv_pows.iter().enumerate().skip(1) {
        let mut running = BigReal::zero(prec);
        let mut next = Vec::with_capacity(terms);
        for k in 0..terms {
            next.push(running.mul(&pows[k]));
            running = running.add(&layer[k]);
        }
        if j == parts.len() - 1 {
            inner_total = running;
        }
        layer = next;
    }
    let mut sum = BigReal::zero(prec);
    for v in &layer {
        sum = sum.add(v);
    }
    // tail: inner sums ≈ their value at N, outer sum by Euler–Maclaurin
    let s = *parts.last().expect("non-empty") as i64;
    let n = BigReal::from_int(terms as i64, prec);
    let n_s = n.powi(s);
    let tail_zeta = n.div(&n_s).div_int(s - 1).sub(&one.div(&n_s).div_int(2));
    let inner = if parts.len() == 1 { one } else { inner_total };
    Ok(sum.add(&inner.mul(&tail_zeta)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectSum,
    Accelerated,
}

#[derive(Clone, Debug)]
pub struct MzvValue {
    pub composition: Composition,
    pub value: BigReal,
    pub method: Method,
    pub digits: u32,
}

impl Serialize for MzvValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MzvValue", 4)?;
        st.serialize_field("composition", &self.composition)?;
        st.serialize_field("value", &self.value.to_decimal_string(self.digits as usize))?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("digits", &self.digits)?;
        st.end()
    }
}

/// Evaluates multiple zeta values in a fixed context, caching by composition.
#[derive(Debug)]
pub struct MzvEvaluator {
    ctx: Context,
    cache: Mutex<HashMap<Composition, BigReal>>,
}

impl MzvEvaluator {
    pub fn new(ctx: Context) -> Self {
        Self { ctx, cache: Mutex::new(HashMap::new()) }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn mzv(&self, c: &Composition) -> Result<BigReal> {
        if let Some(v) = self.cache.lock().expect("mzv cache").get(c) {
            return Ok(v.clone());
        }
        let v = mzv_accelerated(c, &self.ctx)?;
        self.cache.lock().expect("mzv cache").insert(c.clone(), v.clone());
        Ok(v)
    }

    pub fn mzv_value(&self, c: &Composition) -> Result<MzvValue> {
        Ok(MzvValue {
            composition: c.clone(),
            value: self.mzv(c)?,
            method: Method::Accelerated,
            digits: self.ctx.digits(),
        })
    }

    /// Value of the shuffle-regularized integral `I(0; w; 1)`.
    pub fn regularized_word_value(&self, w: &Word) -> Result<BigReal> {
        let mut sum = self.ctx.zero();
        for (c, r) in shuffle_regularize(w).terms() {
            sum = sum.add(&self.mzv(c)?.mul_rational(r));
        }
        Ok(sum)
    }

    /// `Σ_w I(0; w; 1) w` over words of length at most `truncation`.
    pub fn associator(&self, truncation: usize) -> Result<NoncommSeries<BigReal>> {
        if truncation > 10 {
            return Err(Error::InvalidArgument("associator truncation must be at most 10".into()));
        }
        let mut out = NoncommSeries::zero(truncation);
        for len in 0..=truncation {
            for bits in 0u32..(1 << len) {
                let w = Word((0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect());
                let v = self.regularized_word_value(&w)?;
                out.add_term(w, v);
            }
        }
        Ok(out)
    }
}

pub fn mzv(c: &Composition, ctx: &Context) -> Result<BigReal> {
    mzv_accelerated(c, ctx)
}

pub fn regularized_word_value(w: &Word, ctx: &Context) -> Result<BigReal> {
    MzvEvaluator::new(*ctx).regularized_word_value(w)
}

pub fn associator_numeric(truncation: usize, ctx: &Context) -> Result<NoncommSeries<BigReal>> {
    MzvEvaluator::new(*ctx).associator(truncation)
}
