//! Regularized iterated Eichler integrals `∫_τ^{→∞} [ω1|...|ωn]`, `n <= 2`.
//!
//! Each form contributes `ω = (2πi)^{k-1} f(t) (X - tY)^{k-2} dt`. Writing
//! `f = f^0 + a_0` with `f^0` decaying at the cusp, the regularized value is
//! `Σ_i ∫_τ^{i∞} R[ω1..ωi] · ∫_τ^0 [ω_{i+1}^∞..ωn^∞]`. Integrals to `i∞` of
//! words whose last letter is a cusp part are evaluated termwise with
//! `∫_t^{i∞} s^j e^{αns} ds = -e^{αnt} Σ_m (-1)^m j!/(j-m)! t^{j-m} (αn)^{-m-1}`,
//! `α = 2πi`; integrals to 0 of constant parts are polynomial antiderivatives.

use std::collections::BTreeMap;
use std::fmt;

use super::qexp::{Form, QExpansion};
use super::vpoly::VTensor;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, Rational};
use crate::numerics::{BigComplex, BigReal, Context};
use crate::words::shuffle_slices;

/// Ordered forms `[ω1|...|ωn]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord(pub Vec<Form>);

impl BarWord {
    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(Form::to_string).collect();
        write!(f, "[{}]", v.join("|"))
    }
}

/// Letter of an expanded bar word: the form at position `pos` of the
/// original word, or its constant-term part `ω^∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarLetter {
    pub pos: usize,
    pub infinity: bool,
}

impl fmt::Display for BarLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}{}", self.pos + 1, if self.infinity { "^inf" } else { "" })
    }
}

/// `R[ω1..ωn] = Σ_i (-1)^{n-i} [ω1..ωi] ⧢ [ωn^∞..ω_{i+1}^∞]` on positions
/// `0..n`, as a combination of letter sequences.
pub fn r_operator(depth: usize) -> Result<Vec<(i64, Vec<BarLetter>)>> {
    if depth > 2 {
        return Err(Error::InvalidArgument(format!("R is implemented up to depth 2, got {depth}")));
    }
    let mut acc: BTreeMap<Vec<BarLetter>, i64> = BTreeMap::new();
    for i in 0..=depth {
        let sign = if (depth - i).is_multiple_of(2) { 1 } else { -1 };
        let left: Vec<BarLetter> = (0..i).map(|p| BarLetter { pos: p, infinity: false }).collect();
        let right: Vec<BarLetter> = (i..depth).rev().map(|p| BarLetter { pos: p, infinity: true }).collect();
        for (w, c) in shuffle_slices(&left, &right) {
            *acc.entry(w).or_insert(0) += sign * c as i64;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect())
}

pub fn format_combination(terms: &[(i64, Vec<BarLetter>)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .map(|(c, w)| {
            let inner: Vec<String> = w.iter().map(BarLetter::to_string).collect();
            format!("{c:+}[{}]", inner.join("|"))
        })
        .collect();
    parts.join(" ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Part {
    Cusp,
    Constant,
}

/// Numeric data of one form: weight and `a_0..a_M` as reals.
#[derive(Clone, Debug)]
struct LetterData {
    weight: u32,
    a: Vec<BigReal>,
}

impl LetterData {
    fn from_qexp(f: &QExpansion, prec: u64) -> Self {
        Self { weight: f.weight, a: f.coeffs.iter().map(|c| BigReal::from_rational(c, prec)).collect() }
    }

    fn degree(&self) -> u32 {
        self.weight - 2
    }

    fn has_constant(&self) -> bool {
        !self.a[0].is_zero()
    }

    /// Nonzero coefficients of the requested part, as `(n, a_n)`.
    fn part(&self, p: Part) -> Vec<(usize, BigReal)> {
        match p {
            Part::Constant => {
                if self.has_constant() {
                    vec![(0, self.a[0].clone())]
                } else {
                    Vec::new()
                }
            }
            Part::Cusp => self.a.iter().enumerate().skip(1).filter(|(_, a)| !a.is_zero()).map(|(n, a)| (n, a.clone())).collect(),
        }
    }
}

/// Smallest `M` with `e^{-2π M Im τ}` below `10^{-(digits+30)}`, plus margin.
pub fn truncation_order(tau: &BigComplex, ctx: &Context) -> Result<usize> {
    let y = tau.im.to_f64();
    if y.is_nan() || y <= 0.0 {
        return Err(Error::InvalidArgument("τ must lie in the upper half plane".into()));
    }
    if y < 0.5 {
        return Err(Error::InvalidArgument(format!("Im τ = {y} is too close to the real axis (need at least 1/2)")));
    }
    let target = (ctx.digits() + Context::GUARD_DIGITS + 10) as f64 * std::f64::consts::LN_10;
    Ok((target / (2.0 * std::f64::consts::PI * y)).ceil() as usize + 8)
}

/// Evaluator of iterated integrals at a fixed base point `τ`.
pub struct TauIntegrator {
    prec: u64,
    tau: BigComplex,
    order: usize,
    two_pi_i: BigComplex,
    /// `(2πi)^{-m}`.
    inv_alpha_pow: Vec<BigComplex>,
    /// `e^{2πiNτ}` for `N = 0..=order`.
    q_pow: Vec<BigComplex>,
    tau_pow: Vec<BigComplex>,
    /// `J(p, N) = ∫_τ^{i∞} t^p e^{2πiNt} dt`, indexed `[p][N]`.
    j_table: Vec<Vec<BigComplex>>,
}

impl TauIntegrator {
    pub fn new(tau: &BigComplex, max_weight: u32, ctx: &Context) -> Result<Self> {
        let order = truncation_order(tau, ctx)?;
        Self::with_order(tau, max_weight, order, ctx)
    }

    pub fn with_order(tau: &BigComplex, max_weight: u32, order: usize, ctx: &Context) -> Result<Self> {
        if !(tau.im.signum() > 0) {
            return Err(Error::InvalidArgument("τ must lie in the upper half plane".into()));
        }
        let prec = ctx.bits();
        let tau = BigComplex::new(tau.re.with_precision(prec), tau.im.with_precision(prec));
        let max_deg = max_weight.saturating_sub(2) as usize;
        let pmax = 2 * max_deg + 2;
        let two_pi_i = BigComplex::two_pi_i(prec);
        let inv = two_pi_i.recip();
        let mut inv_alpha_pow = vec![BigComplex::one(prec)];
        for _ in 0..=pmax + 1 {
            let last = inv_alpha_pow.last().expect("nonempty").mul(&inv);
            inv_alpha_pow.push(last);
        }
        let q = two_pi_i.mul(&tau).exp();
        let mut q_pow = vec![BigComplex::one(prec)];
        for _ in 0..order {
            let last = q_pow.last().expect("nonempty").mul(&q);
            q_pow.push(last);
        }
        let mut tau_pow = vec![BigComplex::one(prec)];
        for _ in 0..=pmax + 2 {
            let last = tau_pow.last().expect("nonempty").mul(&tau);
            tau_pow.push(last);
        }
        let mut this = Self { prec, tau, order, two_pi_i, inv_alpha_pow, q_pow, tau_pow, j_table: Vec::new() };
        let mut table = Vec::with_capacity(pmax + 1);
        for p in 0..=pmax {
            let mut row = vec![BigComplex::zero(prec)];
            for n in 1..=order {
                let tc = this.tail_coeffs(p, n);
                let mut s = BigComplex::zero(prec);
                for (pp, c) in tc.iter().enumerate() {
                    s = s.add(&c.mul(&this.tau_pow[pp]));
                }
                row.push(s.mul(&this.q_pow[n]));
            }
            table.push(row);
        }
        this.j_table = table;
        Ok(this)
    }

    pub fn tau(&self) -> &BigComplex {
        &self.tau
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    /// Coefficients `c_p` with `∫_t^{i∞} s^j e^{αns} ds = e^{αnt} Σ_p c_p t^p`.
    fn tail_coeffs(&self, j: usize, n: usize) -> Vec<BigComplex> {
        let jf = factorial(j as u64);
        (0..=j)
            .map(|p| {
                let m = j - p;
                let ratio = Rational::new(jf.clone(), factorial(p as u64));
                let sign = if m.is_multiple_of(2) { -1 } else { 1 };
                let mut c = self.inv_alpha_pow[m + 1].mul_rational(&(ratio * Rational::from_integer(sign.into())));
                for _ in 0..=m {
                    c = c.div_int(n as i64);
                }
                c
            })
            .collect()
    }

    fn j(&self, p: usize, n: usize) -> &BigComplex {
        &self.j_table[p][n]
    }

    /// `∫_τ^{i∞} t^j g(t) dt` for a cusp part `g = Σ_{n>=1} a_n q^n`.
    fn inf1(&self, g: &[(usize, BigReal)], j: usize) -> BigComplex {
        let mut s = BigComplex::zero(self.prec);
        for (n, a) in g {
            if *n > self.order {
                break;
            }
            s = s.add(&self.j(j, *n).mul_real(a));
        }
        s
    }

    /// `[j_out][j_in] ↦ ∫_τ^{i∞} t^{j_out} h(t) ∫_t^{i∞} s^{j_in} g(s) ds dt` with
    /// `g` a cusp part and `h` arbitrary.
    fn inf2_table(&self, h: &[(usize, BigReal)], jmax_out: usize, g: &[(usize, BigReal)], jmax_in: usize) -> Vec<Vec<BigComplex>> {
        let m = self.order;
        let mut out = vec![vec![BigComplex::zero(self.prec); jmax_in + 1]; jmax_out + 1];
        for j_in in 0..=jmax_in {
            // W[N][p] = Σ_{m+n=N} h_m g_n c_p(j_in, n)
            let mut w = vec![vec![BigComplex::zero(self.prec); j_in + 1]; m + 1];
            let mut touched = vec![false; m + 1];
            for (n, gn) in g {
                if *n > m {
                    break;
                }
                let tc: Vec<BigComplex> = self.tail_coeffs(j_in, *n).into_iter().map(|c| c.mul_real(gn)).collect();
                for (mm, hm) in h {
                    let big_n = n + mm;
                    if big_n > m {
                        break;
                    }
                    touched[big_n] = true;
                    for (p, c) in tc.iter().enumerate() {
                        w[big_n][p] = w[big_n][p].add(&c.mul_real(hm));
                    }
                }
            }
            for (j_out, row) in out.iter_mut().enumerate() {
                let mut s = BigComplex::zero(self.prec);
                for (big_n, wn) in w.iter().enumerate() {
                    if !touched[big_n] {
                        continue;
                    }
                    for (p, c) in wn.iter().enumerate() {
                        s = s.add(&c.mul(self.j(j_out + p, big_n)));
                    }
                }
                row[j_in] = s;
            }
        }
        out
    }

    /// `∫_τ^0 t^j dt = -τ^{j+1}/(j+1)`.
    fn zero1(&self, j: usize) -> BigComplex {
        self.tau_pow[j + 1].div_int(j as i64 + 1).neg()
    }

    /// `∫_τ^0 t^{j1} ∫_t^0 s^{j2} ds dt = τ^{j1+j2+2} / ((j2+1)(j1+j2+2))`.
    fn zero2(&self, j1: usize, j2: usize) -> BigComplex {
        self.tau_pow[j1 + j2 + 2].div_int((j2 as i64 + 1) * (j1 as i64 + j2 as i64 + 2))
    }

    /// `(2πi)^{k-1} C(k-2, j) (-1)^j`, the factor of `t^j X^{k-2-j} Y^j`.
    fn form_factor(&self, weight: u32, j: usize) -> BigComplex {
        let n = weight as u64 - 2;
        let sign = if j.is_multiple_of(2) { 1 } else { -1 };
        self.two_pi_i.powi(weight as u64 - 1).mul_bigint(&(binomial(n, j as u64) * sign))
    }

    /// Tensor over the positions of `letters` (sorted) from scalar integrals
    /// `s[j_0][j_1]...` indexed in word order.
    fn assemble(&self, letters: &[(usize, &LetterData)], scalar: impl Fn(&[usize]) -> BigComplex) -> VTensor {
        let mut order: Vec<usize> = (0..letters.len()).collect();
        order.sort_by_key(|&i| letters[i].0);
        let degrees: Vec<u32> = order.iter().map(|&i| letters[i].1.degree()).collect();
        let mut t = VTensor::zero(degrees, self.prec);
        let total: usize = letters.iter().map(|(_, l)| l.degree() as usize + 1).product();
        for flat in 0..total {
            let exps_sorted = t.exponents(flat);
            // powers of t in word order
            let mut js = vec![0usize; letters.len()];
            let mut factor = BigComplex::one(self.prec);
            for (slot, &wi) in order.iter().enumerate() {
                let l = letters[wi].1;
                let j = (l.degree() - exps_sorted[slot]) as usize;
                js[wi] = j;
                factor = factor.mul(&self.form_factor(l.weight, j));
            }
            *t.get_mut(&exps_sorted) = scalar(&js).mul(&factor);
        }
        t
    }

    /// `∫_τ^{i∞}` of a word over parts; the last part must be a cusp part.
    fn integrate_to_cusp(&self, word: &[(usize, Part)], data: &[LetterData]) -> Result<VTensor> {
        match word {
            [] => Ok(VTensor::one(self.prec)),
            [(p0, Part::Cusp)] => {
                let l = &data[*p0];
                let g = l.part(Part::Cusp);
                let vals: Vec<BigComplex> = (0..=l.degree() as usize).map(|j| self.inf1(&g, j)).collect();
                Ok(self.assemble(&[(*p0, l)], |js| vals[js[0]].clone()))
            }
            [(p0, part0), (p1, Part::Cusp)] => {
                let (l0, l1) = (&data[*p0], &data[*p1]);
                let h = l0.part(*part0);
                let g = l1.part(Part::Cusp);
                let table = self.inf2_table(&h, l0.degree() as usize, &g, l1.degree() as usize);
                Ok(self.assemble(&[(*p0, l0), (*p1, l1)], |js| table[js[0]][js[1]].clone()))
            }
            _ => Err(Error::InvalidArgument("integral to the cusp diverges or exceeds depth 2".into())),
        }
    }

    /// `∫_τ^0 [ω_{p1}^∞|...]` for constant parts at the given positions.
    fn integrate_to_zero(&self, positions: &[usize], data: &[LetterData]) -> Result<VTensor> {
        match positions {
            [] => Ok(VTensor::one(self.prec)),
            [p0] => {
                let l = &data[*p0];
                let a = l.a[0].clone();
                Ok(self.assemble(&[(*p0, l)], |js| self.zero1(js[0]).mul_real(&a)))
            }
            [p0, p1] => {
                let (l0, l1) = (&data[*p0], &data[*p1]);
                let a = l0.a[0].mul(&l1.a[0]);
                Ok(self.assemble(&[(*p0, l0), (*p1, l1)], |js| self.zero2(js[0], js[1]).mul_real(&a)))
            }
            _ => Err(Error::InvalidArgument("depth above 2".into())),
        }
    }

    /// `∫_τ^{i∞} R[ω_0..ω_{i-1}]` over the positions `0..i`.
    fn integrate_r(&self, i: usize, data: &[LetterData]) -> Result<VTensor> {
        let mut expanded: BTreeMap<Vec<(usize, Part)>, i64> = BTreeMap::new();
        for (c, w) in r_operator(i)? {
            let mut words: Vec<Vec<(usize, Part)>> = vec![Vec::new()];
            for l in &w {
                let parts: &[Part] = if l.infinity { &[Part::Constant] } else { &[Part::Cusp, Part::Constant] };
                words = words
                    .into_iter()
                    .flat_map(|pre| {
                        parts.iter().map(move |p| {
                            let mut v = pre.clone();
                            v.push((l.pos, *p));
                            v
                        })
                    })
                    .collect();
            }
            for v in words {
                *expanded.entry(v).or_insert(0) += c;
            }
        }
        let positions: Vec<u32> = data[..i].iter().map(LetterData::degree).collect();
        let mut total = VTensor::zero(positions, self.prec);
        for (w, c) in expanded {
            if c == 0 {
                continue;
            }
            // constant parts of cusp forms vanish
            if w.iter().any(|(p, part)| *part == Part::Constant && !data[*p].has_constant()) {
                continue;
            }
            if w.last().is_some_and(|(_, p)| *p == Part::Constant) {
                return Err(Error::InvalidArgument("R left a divergent word".into()));
            }
            let v = self.integrate_to_cusp(&w, data)?;
            total = total.add(&v.scale(&BigComplex::from_real(BigReal::from_int(c, self.prec))))?;
        }
        Ok(total)
    }

    fn letter_data(&self, word: &BarWord) -> Result<Vec<LetterData>> {
        word.0.iter().map(|f| Ok(LetterData::from_qexp(&f.qexp(self.order)?, self.prec))).collect()
    }

    /// `∫_τ^{→∞} [ω1|...|ωn]` for explicit q-expansions.
    pub fn regularized_qexp(&self, forms: &[QExpansion]) -> Result<VTensor> {
        let data: Vec<LetterData> = forms.iter().map(|f| LetterData::from_qexp(f, self.prec)).collect();
        self.regularized_data(&data)
    }

    fn regularized_data(&self, data: &[LetterData]) -> Result<VTensor> {
        let n = data.len();
        if n > 2 {
            return Err(Error::InvalidArgument(format!("depth {n} exceeds 2")));
        }
        let degrees: Vec<u32> = data.iter().map(LetterData::degree).collect();
        let mut total = VTensor::zero(degrees, self.prec);
        for i in 0..=n {
            let rest: Vec<usize> = (i..n).collect();
            if rest.iter().any(|&p| !data[p].has_constant()) {
                continue;
            }
            let left = self.integrate_r(i, data)?;
            let right = self.integrate_to_zero(&rest, data)?;
            total = total.add(&left.tensor(&right))?;
        }
        Ok(total)
    }

    pub fn regularized(&self, word: &BarWord) -> Result<VTensor> {
        let data = self.letter_data(word)?;
        self.regularized_data(&data)
    }
}

/// `∫_τ^{→∞} [ω1|...|ωn]` at `τ`, depth at most 2.
pub fn reg_iterated_integral(word: &BarWord, tau: &BigComplex, ctx: &Context) -> Result<VTensor> {
    if word.depth() > 2 {
        return Err(Error::InvalidArgument(format!("depth {} exceeds 2", word.depth())));
    }
    let max_weight = word.0.iter().map(Form::weight).max().unwrap_or(4);
    TauIntegrator::new(tau, max_weight, ctx)?.regularized(word)
}

/// `∫_{τ0}^{i∞} (2πi)^{k-1} f(τ) (X - τY)^{k-2} dτ` for a cusp form, using
/// the coefficients of `f` as given.
pub fn eichler_cusp(f: &QExpansion, tau0: &BigComplex, ctx: &Context) -> Result<VTensor> {
    if !f.is_cusp() {
        return Err(Error::InvalidArgument("eichler_cusp needs a cusp form".into()));
    }
    let it = TauIntegrator::with_order(tau0, f.weight, f.order(), ctx)?;
    it.regularized_qexp(std::slice::from_ref(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::qexp::{delta_qexp, eisenstein};

    #[test]
    fn r_operator_depths() {
        assert_eq!(r_operator(0).unwrap(), vec![(1, vec![])]);
        let l = |pos, infinity| BarLetter { pos, infinity };
        let r1 = r_operator(1).unwrap();
        assert_eq!(r1.len(), 2);
        assert!(r1.contains(&(1, vec![l(0, false)])));
        assert!(r1.contains(&(-1, vec![l(0, true)])));
        let r2 = r_operator(2).unwrap();
        let expect = [
            (1, vec![l(0, false), l(1, false)]),
            (-1, vec![l(0, false), l(1, true)]),
            (-1, vec![l(1, true), l(0, false)]),
            (1, vec![l(1, true), l(0, true)]),
        ];
        assert_eq!(r2.len(), expect.len());
        for e in expect {
            assert!(r2.contains(&e), "{e:?}");
        }
        assert!(r_operator(3).is_err());
    }

    #[test]
    fn cusp_linearity_and_tail() {
        let ctx = Context::new(50);
        let i = BigComplex::i(ctx.bits());
        let d = delta_qexp(100);
        let p = eichler_cusp(&d, &i, &ctx).unwrap();
        let p2 = eichler_cusp(&d.scale(&Rational::from_integer(2.into())), &i, &ctx).unwrap();
        let two = BigComplex::from_real(ctx.int(2));
        assert!(p2.max_abs_diff(&p.scale(&two)).unwrap().abs_below_pow10(45));
        let longer = eichler_cusp(&delta_qexp(150), &i, &ctx).unwrap();
        assert!(longer.max_abs_diff(&p).unwrap().abs_below_pow10(40));
        assert!(eichler_cusp(&eisenstein(4, 10).unwrap(), &i, &ctx).is_err());
    }

    #[test]
    fn cusp_depth_one_matches_eichler() {
        let ctx = Context::new(40);
        let tau = BigComplex::parse("0.3+1.1i", &ctx).unwrap();
        let a = reg_iterated_integral(&BarWord(vec![Form::Delta]), &tau, &ctx).unwrap();
        let m = truncation_order(&tau, &ctx).unwrap();
        let b = eichler_cusp(&delta_qexp(m), &tau, &ctx).unwrap();
        assert!(a.max_abs_diff(&b).unwrap().abs_below_pow10(40));
    }

    /// `∫_a^b` of `(2πi)^{k-1} f(t) (X - tY)^{k-2}` along the segment, by
    /// composite Simpson in double precision.
    fn simpson(f: &QExpansion, a: (f64, f64), b: (f64, f64)) -> Vec<(f64, f64)> {
        type C = (f64, f64);
        let mul = |x: C, y: C| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let add = |x: C, y: C| (x.0 + y.0, x.1 + y.1);
        let k = f.weight as usize;
        let n = k - 2;
        let coeffs: Vec<f64> = f.coeffs.iter().map(|c| c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap()).collect();
        let two_pi_i = (0.0, 2.0 * std::f64::consts::PI);
        let eval = |t: C| -> Vec<C> {
            let q = {
                let z = mul(two_pi_i, t);
                let r = z.0.exp();
                (r * z.1.cos(), r * z.1.sin())
            };
            let mut fv = (0.0, 0.0);
            let mut qn = (1.0, 0.0);
            for c in &coeffs {
                fv = add(fv, (qn.0 * c, qn.1 * c));
                qn = mul(qn, q);
            }
            let mut pre = (1.0, 0.0);
            for _ in 0..k - 1 {
                pre = mul(pre, two_pi_i);
            }
            let base = mul(pre, fv);
            // coefficient of X^e Y^{n-e}: C(n, n-e) (-t)^{n-e}
            (0..=n)
                .map(|e| {
                    let j = n - e;
                    let mut tp = (1.0, 0.0);
                    for _ in 0..j {
                        tp = mul(tp, (-t.0, -t.1));
                    }
                    let b = binomial(n as u64, j as u64).to_string().parse::<f64>().unwrap();
                    let v = mul(base, tp);
                    (v.0 * b, v.1 * b)
                })
                .collect()
        };
        let steps = 4000;
        let h = ((b.0 - a.0) / steps as f64, (b.1 - a.1) / steps as f64);
        let mut acc = vec![(0.0, 0.0); n + 1];
        for s in 0..=steps {
            let w = if s == 0 || s == steps { 1.0 } else if s % 2 == 1 { 4.0 } else { 2.0 };
            let t = (a.0 + h.0 * s as f64, a.1 + h.1 * s as f64);
            for (e, v) in eval(t).into_iter().enumerate() {
                acc[e] = add(acc[e], (v.0 * w, v.1 * w));
            }
        }
        acc.into_iter().map(|v| mul(v, (h.0 / 3.0, h.1 / 3.0))).collect()
    }

    #[test]
    fn path_composition_depth_one() {
        let ctx = Context::new(30);
        for form in [Form::Eisenstein(4), Form::Eisenstein(6), Form::Delta] {
            let (a, b) = ((0.1, 1.0), (-0.4, 0.8));
            let ta = BigComplex::parse("0.1+1i", &ctx).unwrap();
            let tb = BigComplex::parse("-0.4+0.8i", &ctx).unwrap();
            let w = BarWord(vec![form]);
            let ia = reg_iterated_integral(&w, &ta, &ctx).unwrap();
            let ib = reg_iterated_integral(&w, &tb, &ctx).unwrap();
            // I(a) = ∫_a^b ω + I(b)
            let seg = simpson(&form.qexp(60).unwrap(), a, b);
            for (e, (re, im)) in seg.iter().enumerate() {
                let d = ia.coeffs()[e].sub(&ib.coeffs()[e]);
                let scale = 1.0 + re.abs() + im.abs();
                assert!((d.re.to_f64() - re).abs() < 1e-8 * scale, "{form} e={e}");
                assert!((d.im.to_f64() - im).abs() < 1e-8 * scale, "{form} e={e}");
            }
        }
    }

    #[test]
    fn depth_two_derivative() {
        // d/dτ I[ω1|ω2](τ) = -ω1(τ) ⊗ I[ω2](τ), checked by a central difference
        let ctx = Context::new(40);
        let w = BarWord(vec![Form::Eisenstein(4), Form::Eisenstein(6)]);
        let h = BigComplex::parse("1e-12", &ctx).unwrap();
        let tau = BigComplex::parse("0.2+1.1i", &ctx).unwrap();
        let plus = reg_iterated_integral(&w, &tau.add(&h), &ctx).unwrap();
        let minus = reg_iterated_integral(&w, &tau.sub(&h), &ctx).unwrap();
        let deriv = plus.sub(&minus).unwrap().scale(&h.mul_int(2).recip());
        let inner = reg_iterated_integral(&BarWord(vec![Form::Eisenstein(6)]), &tau, &ctx).unwrap();
        // ω1(τ) as an element of V_2
        let it = TauIntegrator::new(&tau, 6, &ctx).unwrap();
        let e4 = eisenstein(4, it.order()).unwrap();
        let mut fval = BigComplex::zero(ctx.bits());
        for (n, a) in e4.coeffs.iter().enumerate() {
            fval = fval.add(&it.q_pow[n].mul_rational(a));
        }
        let omega = VTensor::polynomial(2, (0..=2).map(|e| fval.mul(&it.form_factor(4, 2 - e)).mul(&it.tau_pow[2 - e])).collect()).unwrap();
        let expect = omega.tensor(&inner).neg();
        let diff = deriv.max_abs_diff(&expect).unwrap();
        let scale = expect.max_abs();
        assert!(diff.div(&scale).abs_below_pow10(15), "{}", diff.to_sci_string(5));
    }
}
