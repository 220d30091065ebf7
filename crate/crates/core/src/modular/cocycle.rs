//! The generating series `I(τ;∞) = Σ A_{i1}..A_{in} ∫_τ^{→∞} [ω_{i1}|..|ω_{in}]`
//! and the cocycle `C_γ = (I(γτ;∞)|_γ)^{-1} I(τ;∞)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::integrals::{BarWord, TauIntegrator};
use super::qexp::Form;
use super::vpoly::{complex_json, GammaElt, VTensor};
use crate::error::{Error, Result};
use crate::exact::{best_rational_approximation, bernoulli, binomial, factorial, format_rational, Rational};
use crate::numerics::{zeta, BigComplex, BigReal, Context};

/// Series in noncommuting symbols `A_i` (one per form) with tensor
/// coefficients, truncated at a depth. The empty sequence carries `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleSeries {
    forms: Vec<Form>,
    depth: usize,
    terms: BTreeMap<Vec<usize>, VTensor>,
}

fn sequences(nforms: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &layer {
            for i in 0..nforms {
                let mut t: Vec<usize> = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl CocycleSeries {
    fn check_depth(depth: usize) -> Result<()> {
        if depth > 2 {
            return Err(Error::InvalidArgument(format!("depth {depth} exceeds 2")));
        }
        Ok(())
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &VTensor)> {
        self.terms.iter()
    }

    pub fn get(&self, seq: &[usize]) -> Option<&VTensor> {
        self.terms.get(seq)
    }

    /// Coefficient of a sequence of forms.
    pub fn coefficient(&self, seq: &[Form]) -> Option<&VTensor> {
        let idx: Option<Vec<usize>> = seq.iter().map(|f| self.forms.iter().position(|g| g == f)).collect();
        self.terms.get(&idx?)
    }

    fn zero_like(&self, prec: u64) -> Self {
        let terms = sequences(self.forms.len(), self.depth)
            .into_iter()
            .map(|s| {
                let degrees = s.iter().map(|&i| self.forms[i].weight() - 2).collect();
                (s, VTensor::zero(degrees, prec))
            })
            .collect();
        Self { forms: self.forms.clone(), depth: self.depth, terms }
    }

    fn prec(&self) -> u64 {
        self.terms.get(&Vec::new()).map_or(64, |t| t.coeffs()[0].precision())
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.forms != o.forms || self.depth != o.depth {
            return Err(Error::InvalidArgument("series over different forms or depths".into()));
        }
        Ok(())
    }

    /// Concatenation product, truncated at the depth.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.zero_like(self.prec());
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                if u.len() + v.len() > self.depth {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                let slot = out.terms.get_mut(&w).expect("all sequences present");
                *slot = slot.add(&a.tensor(b))?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (w, b) in &o.terms {
            let slot = out.terms.get_mut(w).expect("same sequences");
            *slot = slot.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.negate())
    }

    /// Inverse via `1 - x + x^2 - ...` with `x = self - 1`.
    pub fn inverse(&self) -> Result<Self> {
        let prec = self.prec();
        let mut x = self.clone();
        let one = self.zero_like(prec).with_unit(prec);
        x = x.sub(&one)?;
        let mut result = one.clone();
        let mut power = one;
        for k in 1..=self.depth {
            power = power.mul(&x)?;
            result = if k % 2 == 1 { result.sub(&power)? } else { result.add(&power)? };
        }
        Ok(result)
    }

    fn with_unit(mut self, prec: u64) -> Self {
        self.terms.insert(Vec::new(), VTensor::one(prec));
        self
    }

    fn negate(&self) -> Self {
        Self { forms: self.forms.clone(), depth: self.depth, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect() }
    }

    /// Right action of `γ` on every coefficient.
    pub fn act(&self, g: &GammaElt) -> Self {
        Self { forms: self.forms.clone(), depth: self.depth, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.act(g))).collect() }
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<BigReal> {
        let d = self.sub(o)?;
        let prec = self.prec();
        Ok(d.terms.values().map(VTensor::max_abs).fold(BigReal::zero(prec), |m, x| if x.cmp_value(&m).is_gt() { x } else { m }))
    }

    pub fn to_json(&self, sig: usize) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let names: Vec<String> = k.iter().map(|&i| self.forms[i].to_string()).collect();
                serde_json::json!({ "sequence": names, "value": v.to_json(sig) })
            })
            .collect();
        serde_json::json!({
            "forms": self.forms.iter().map(Form::to_string).collect::<Vec<_>>(),
            "depth": self.depth,
            "coefficients": entries,
        })
    }
}

fn canonical_forms(forms: &[Form]) -> Result<Vec<Form>> {
    let mut f = forms.to_vec();
    f.sort();
    f.dedup();
    if f.is_empty() {
        return Err(Error::InvalidArgument("no forms given".into()));
    }
    Ok(f)
}

/// `I(τ;∞)` for all sequences of `forms` up to `depth <= 2`.
pub fn generating_series(tau: &BigComplex, forms: &[Form], depth: usize, ctx: &Context) -> Result<CocycleSeries> {
    CocycleSeries::check_depth(depth)?;
    let forms = canonical_forms(forms)?;
    let max_weight = forms.iter().map(Form::weight).max().unwrap_or(4);
    let it = TauIntegrator::new(tau, max_weight, ctx)?;
    let mut terms = BTreeMap::new();
    for seq in sequences(forms.len(), depth) {
        let word = BarWord(seq.iter().map(|&i| forms[i]).collect());
        terms.insert(seq, it.regularized(&word)?);
    }
    Ok(CocycleSeries { forms, depth, terms })
}

/// `C_γ = (I(γτ;∞)|_γ)^{-1} I(τ;∞)`, independent of `τ`.
pub fn cocycle(g: &GammaElt, tau: &BigComplex, forms: &[Form], depth: usize, ctx: &Context) -> Result<CocycleSeries> {
    let here = generating_series(tau, forms, depth, ctx)?;
    let there = generating_series(&g.apply(tau), forms, depth, ctx)?;
    there.act(g).inverse()?.mul(&here)
}

/// Closed form of the regularized `∫_0^{i∞}` of `e_{2k}`:
/// `(2k-2)!/2 ζ(2k-1)(Y^{2k-2} - X^{2k-2})
///  - (2πi)^{2k-1}/(4k(2k-1)) Σ_{a+b=2k} C(2k,a) B_a B_b X^{a-1} Y^{b-1}`.
pub fn eisenstein_closed_form(weight: u32, ctx: &Context) -> Result<VTensor> {
    let prec = ctx.bits();
    let n = weight - 2;
    let mut coeffs = vec![BigComplex::zero(prec); n as usize + 1];
    let z = zeta(weight - 1, ctx)?;
    let zterm = z.mul_bigint(&factorial(n as u64)).div_int(2);
    coeffs[0] = coeffs[0].add(&BigComplex::from_real(zterm.clone()));
    coeffs[n as usize] = coeffs[n as usize].sub(&BigComplex::from_real(zterm));
    let pre = BigComplex::two_pi_i(prec).powi(weight as u64 - 1).mul_rational(&Rational::new(BigInt::from(-1), BigInt::from(2 * weight as i64 * (weight as i64 - 1))));
    for a in 1..weight {
        let b = weight - a;
        let c = Rational::from_integer(binomial(weight as u64, a as u64)) * bernoulli(a as usize) * bernoulli(b as usize);
        if c.is_zero() {
            continue;
        }
        let e = (a - 1) as usize;
        coeffs[e] = coeffs[e].add(&pre.mul_rational(&c));
    }
    VTensor::polynomial(n, coeffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinCheck {
    pub weight: u32,
    #[serde(serialize_with = "ser_real")]
    pub residual: BigReal,
    /// `ζ(2k-1)` read off the `Y^{2k-2}` and `X^{2k-2}` coefficients.
    #[serde(serialize_with = "ser_real")]
    pub extracted_zeta: BigReal,
}

fn ser_real<S: serde::Serializer>(x: &BigReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_sci_string(6))
}

/// Compares the depth-one coefficient of `C_S` for `e_{2k}` with its closed form.
pub fn eisenstein_cocycle_check(weight: u32, ctx: &Context) -> Result<EisensteinCheck> {
    if !(4..=12).contains(&weight) || !weight.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("weight {weight} outside 4, 6, ..., 12")));
    }
    let form = Form::Eisenstein(weight);
    let tau = BigComplex::i(ctx.bits());
    let c = cocycle(&GammaElt::s(), &tau, &[form], 1, ctx)?;
    let value = c.coefficient(&[form]).expect("depth one term");
    let expect = eisenstein_closed_form(weight, ctx)?;
    let n = weight as usize - 2;
    let extracted = value.coeffs()[0].re.sub(&value.coeffs()[n].re).div_bigint(&factorial(n as u64));
    Ok(EisensteinCheck { weight, residual: value.max_abs_diff(&expect)?, extracted_zeta: extracted })
}

/// Best fit `c ≈ r (2πi)^d` with rational `r`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoPiFit {
    pub degree: u32,
    #[serde(serialize_with = "ser_opt_rational")]
    pub rational: Option<Rational>,
    #[serde(serialize_with = "ser_real")]
    pub residual: BigReal,
}

fn ser_opt_rational<S: serde::Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub const FIT_MAX_DENOMINATOR: u64 = 1_000_000;

/// Least-squares projection of `c` on `(2πi)^d`, followed by rational
/// reconstruction of the real coordinate.
pub fn fit_two_pi_i(c: &BigComplex, degree: u32, ctx: &Context) -> TwoPiFit {
    let prec = ctx.bits();
    let b = BigComplex::two_pi_i(prec).powi(degree as u64);
    let r = c.mul(&b.conj()).re.div(&b.norm_sqr());
    let q = best_rational_approximation(&r.to_rational(), &BigInt::from(FIT_MAX_DENOMINATOR));
    let residual = c.sub(&b.mul_rational(&q)).abs();
    let tol = ctx.epsilon(ctx.digits() as i64 - 15).mul(&ctx.one().add(&b.abs()).mul(&ctx.one().add(&r.abs())));
    let rational = residual.cmp_value(&tol).is_lt().then_some(q);
    TwoPiFit { degree, rational, residual }
}

#[derive(Clone, Debug, Serialize)]
pub struct TStructureReport {
    pub holds: bool,
    #[serde(serialize_with = "ser_real")]
    pub max_residual: BigReal,
    pub fits: Vec<TStructureEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TStructureEntry {
    pub sequence: Vec<String>,
    pub exponents: Vec<u32>,
    pub fit: TwoPiFit,
}

/// Checks that every coefficient of `C_T` lies in `Q (2πi)^d`, `d = Σ (k_i - 1)`.
pub fn cocycle_t_structure_check(forms: &[Form], depth: usize, ctx: &Context) -> Result<TStructureReport> {
    let tau = BigComplex::parse("0.25+1.1i", ctx)?;
    let c = cocycle(&GammaElt::t(), &tau, forms, depth, ctx)?;
    Ok(t_structure_of(&c, ctx))
}

/// The structure check applied to an already computed `C_T`.
pub fn t_structure_of(c: &CocycleSeries, ctx: &Context) -> TStructureReport {
    let mut fits = Vec::new();
    let mut holds = true;
    let mut max_residual = ctx.zero();
    for (seq, v) in c.terms() {
        if seq.is_empty() {
            continue;
        }
        let degree: u32 = seq.iter().map(|&i| c.forms()[i].weight() - 1).sum();
        for (idx, coeff) in v.coeffs().iter().enumerate() {
            let fit = fit_two_pi_i(coeff, degree, ctx);
            holds &= fit.rational.is_some();
            if fit.residual.cmp_value(&max_residual).is_gt() {
                max_residual = fit.residual.clone();
            }
            fits.push(TStructureEntry {
                sequence: seq.iter().map(|&i| c.forms()[i].to_string()).collect(),
                exponents: v.exponents(idx),
                fit,
            });
        }
    }
    TStructureReport { holds, max_residual, fits }
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspRelations {
    /// `max |r + r|_S|`.
    #[serde(serialize_with = "ser_real")]
    pub s_relation: BigReal,
    /// `max |r + r|_U + r|_{U^2}|`.
    #[serde(serialize_with = "ser_real")]
    pub u_relation: BigReal,
    #[serde(serialize_with = "ser_real")]
    pub size: BigReal,
}

/// Period relations of the depth-one cocycle `r = C_S` of a cusp form.
pub fn cusp_cocycle_relations(form: Form, ctx: &Context) -> Result<CuspRelations> {
    let tau = BigComplex::i(ctx.bits());
    let c = cocycle(&GammaElt::s(), &tau, &[form], 1, ctx)?;
    let r = c.coefficient(&[form]).expect("depth one").clone();
    let s_rel = r.add(&r.act(&GammaElt::s()))?.max_abs();
    let u = GammaElt::u();
    let u_rel = r.add(&r.act(&u))?.add(&r.act(&u.mul(&u)))?.max_abs();
    Ok(CuspRelations { s_relation: s_rel, u_relation: u_rel, size: r.max_abs() })
}

/// JSON rendering of one coefficient as `{re, im}` strings.
pub fn coefficient_json(c: &BigComplex, sig: usize) -> serde_json::Value {
    complex_json(c, sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(50)
    }

    #[test]
    fn eisenstein_check_small_weights() {
        let ctx = ctx();
        for w in [4, 6] {
            let c = eisenstein_cocycle_check(w, &ctx).unwrap();
            assert!(c.residual.abs_below_pow10(30), "weight {w}: {}", c.residual.to_sci_string(5));
        }
        let c = eisenstein_cocycle_check(4, &ctx).unwrap();
        let z3 = zeta(3, &ctx).unwrap();
        assert!(c.extracted_zeta.sub(&z3).abs().abs_below_pow10(30));
    }

    #[test]
    fn closed_form_shape() {
        let ctx = ctx();
        let p = eisenstein_closed_form(12, &ctx).unwrap();
        let n = 10;
        // ζ-term: +10!/2 ζ(11) on Y^10, the negative on X^10
        let z11 = zeta(11, &ctx).unwrap().mul_bigint(&factorial(10)).div_int(2);
        assert!(p.coeffs()[0].re.sub(&z11).abs().abs_below_pow10(30));
        assert!(p.coeffs()[0].re.add(&p.coeffs()[n].re).abs().abs_below_pow10(30));
    }

    #[test]
    fn s_cocycle_tau_independent_depth_one() {
        let ctx = ctx();
        let forms = [Form::Eisenstein(4), Form::Delta];
        let a = cocycle(&GammaElt::s(), &BigComplex::i(ctx.bits()), &forms, 1, &ctx).unwrap();
        let b = cocycle(&GammaElt::s(), &BigComplex::parse("(1+3i)/2", &ctx).unwrap(), &forms, 1, &ctx).unwrap();
        assert!(a.max_abs_diff(&b).unwrap().abs_below_pow10(25));
    }

    #[test]
    fn delta_period_relations() {
        let r = cusp_cocycle_relations(Form::Delta, &ctx()).unwrap();
        assert!(r.s_relation.abs_below_pow10(25));
        assert!(r.u_relation.abs_below_pow10(25));
        assert!(!r.size.abs_below_pow10(5));
    }

    #[test]
    fn t_structure_and_negative_control() {
        let ctx = ctx();
        let rep = cocycle_t_structure_check(&[Form::Eisenstein(4), Form::Delta], 1, &ctx).unwrap();
        assert!(rep.holds, "{:?}", rep.max_residual.to_sci_string(5));
        let c = cocycle(&GammaElt::t(), &BigComplex::i(ctx.bits()), &[Form::Eisenstein(4)], 1, &ctx).unwrap();
        let v = c.coefficient(&[Form::Eisenstein(4)]).unwrap();
        let coeff = v.coeffs().iter().find(|z| !z.is_zero()).unwrap();
        assert!(fit_two_pi_i(coeff, 3, &ctx).rational.is_some());
        let bumped = coeff.add(&BigComplex::from_real(ctx.epsilon(5)));
        assert!(fit_two_pi_i(&bumped, 3, &ctx).rational.is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let ctx = Context::new(30);
        let s = generating_series(&BigComplex::i(ctx.bits()), &[Form::Eisenstein(4), Form::Eisenstein(6)], 2, &ctx).unwrap();
        let one = s.inverse().unwrap().mul(&s).unwrap();
        for (k, v) in one.terms() {
            if k.is_empty() {
                continue;
            }
            assert!(v.max_abs().abs_below_pow10(30), "{k:?}");
        }
    }
}
