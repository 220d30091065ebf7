//! Truncated noncommutative power series in `x0`, `x1`, the Ihara group law
//! `A ∘ G = G(x0, A x1 A^{-1}) A`, its linearized bracket and depth grading.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, Rational};
use crate::words::{Word, WordPoly};

/// Coefficient ring for [`NoncommSeries`].
pub trait SeriesCoeff: Clone + fmt::Debug {
    fn is_null(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn times_rational(&self, r: &Rational) -> Self;
}

impl SeriesCoeff for Rational {
    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_rational(&self, r: &Rational) -> Self {
        self * r
    }
}

/// `Σ c_w w` over words of length at most `truncation`; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncommSeries<C = Rational> {
    terms: BTreeMap<Word, C>,
    truncation: usize,
}

impl<C: SeriesCoeff> NoncommSeries<C> {
    pub fn zero(truncation: usize) -> Self {
        Self { terms: BTreeMap::new(), truncation }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, C)>, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if w.len() > self.truncation || c.is_null() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().plus(&c);
                if v.is_null() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch { left: self.truncation, right: other.truncation });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.times_rational(r))), self.truncation)
    }

    /// Concatenation product, truncated.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.truncation);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() <= self.truncation {
                    out.add_term(u.concat(v), a.times(b));
                }
            }
        }
        Ok(out)
    }

    /// Part of total degree exactly `n`.
    pub fn homogeneous(&self, n: usize) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())),
            self.truncation,
        )
    }

    /// Restriction to words with exactly `d` occurrences of `x1`.
    pub fn depth_component(&self, d: usize) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(w, _)| w.depth() == d).map(|(w, c)| (w.clone(), c.clone())),
            self.truncation,
        )
    }

    /// Smallest length of a word with nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).min()
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Word::empty())
    }

    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Word::empty());
        out
    }

    /// `self^k` by repeated multiplication.
    fn powers(&self, k: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(k);
        let mut cur = self.clone();
        for _ in 0..k {
            out.push(cur.clone());
            cur = cur.multiply(self).expect("same truncation");
        }
        out
    }

    /// `exp(a)` for `a` without constant term.
    pub fn exp_series_with(&self, one: C) -> Result<Self> {
        if self.constant_term().is_some() {
            return Err(Error::WrongConstantTerm { expected: "0".into(), found: "nonzero".into() });
        }
        let mut out = Self::from_terms([(Word::empty(), one)], self.truncation);
        let mut fact = BigInt::one();
        for (k, p) in self.powers(self.truncation).into_iter().enumerate() {
            fact *= BigInt::from(k + 1);
            out = out.add(&p.scale(&Rational::new(BigInt::one(), fact.clone())))?;
        }
        Ok(out)
    }

    /// `log(1 + b)` where `b` is `self` minus its constant term, which the
    /// caller guarantees to equal one.
    pub fn log_series_unchecked(&self) -> Self {
        let b = self.without_constant();
        let mut out = Self::zero(self.truncation);
        for (k, p) in b.powers(self.truncation).into_iter().enumerate() {
            let n = k as i64 + 1;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&p.scale(&Rational::new(BigInt::from(sign), BigInt::from(n)))).expect("same");
        }
        out
    }

    /// Dynkin operator: left-normed bracketing of each word.
    pub fn dynkin(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for (w, c) in &self.terms {
            for (v, m) in left_normed_bracket(w.letters()) {
                out.add_term(Word(v), c.times_rational(&int(m)));
            }
        }
        out
    }

    /// `θ(P) - n P` on each homogeneous degree `n`; zero exactly when the
    /// series (without constant term) is a Lie series.
    pub fn lie_defect(&self) -> Self {
        let d = self.without_constant().dynkin();
        let mut out = d;
        for (w, c) in &self.terms {
            if !w.is_empty() {
                out.add_term(w.clone(), c.times_rational(&int(-(w.len() as i64))));
            }
        }
        out
    }
}

/// Expansion of `[...[[a1, a2], a3], ..., an]` as signed word counts.
fn left_normed_bracket(letters: &[u8]) -> BTreeMap<Vec<u8>, i64> {
    let mut cur: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
    if letters.is_empty() {
        return cur;
    }
    cur.insert(vec![letters[0]], 1);
    for &a in &letters[1..] {
        let mut next = BTreeMap::new();
        for (v, m) in cur {
            let mut right = v.clone();
            right.push(a);
            *next.entry(right).or_insert(0) += m;
            let mut left = vec![a];
            left.extend(v);
            *next.entry(left).or_insert(0) -= m;
        }
        next.retain(|_, m| *m != 0);
        cur = next;
    }
    cur
}

impl NoncommSeries<Rational> {
    pub fn one(truncation: usize) -> Self {
        Self::from_terms([(Word::empty(), Rational::one())], truncation)
    }

    pub fn letter(a: u8, truncation: usize) -> Self {
        Self::from_terms([(Word(vec![a]), Rational::one())], truncation)
    }

    pub fn from_word_poly(p: &WordPoly, truncation: usize) -> Self {
        Self::from_terms(p.terms().map(|(w, c)| (w.clone(), c.clone())), truncation)
    }

    pub fn to_word_poly(&self) -> WordPoly {
        self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeff(&Word::empty());
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        // a = c0 (1 + b), a^{-1} = c0^{-1} Σ (-b)^k
        let inv0 = c0.recip();
        let neg_b = self.without_constant().scale(&-&inv0);
        let mut out = Self::one(self.truncation);
        let mut p = Self::one(self.truncation);
        for _ in 0..self.truncation {
            p = p.multiply(&neg_b)?;
            if p.is_zero() {
                break;
            }
            out = out.add(&p)?;
        }
        Ok(out.scale(&inv0))
    }

    /// Replaces `x0` by `s0` and `x1` by `s1` in every word of `self`.
    pub fn substitute(&self, s0: &Self, s1: &Self) -> Result<Self> {
        self.check(s0)?;
        self.check(s1)?;
        let t = self.truncation;
        // prefix products shared along a trie of the words of `self`
        let mut out = Self::zero(t);
        let mut stack: Vec<(usize, Self)> = Vec::new();
        let mut prev: Option<&Word> = None;
        for (w, c) in &self.terms {
            let common = prev
                .map(|p| p.letters().iter().zip(w.letters()).take_while(|(a, b)| a == b).count())
                .unwrap_or(0);
            stack.truncate(common);
            for i in stack.len()..w.len() {
                let base = if i == 0 { Self::one(t) } else { stack[i - 1].1.clone() };
                let s = if w.letters()[i] == 0 { s0 } else { s1 };
                stack.push((i, base.multiply(s)?));
            }
            let prod = if w.is_empty() { Self::one(t) } else { stack[w.len() - 1].1.clone() };
            out = out.add(&prod.scale(c))?;
            prev = Some(w);
        }
        Ok(out)
    }

    /// Replaces every `x1` by `s`.
    pub fn substitute_x1(&self, s: &Self) -> Result<Self> {
        self.substitute(&Self::letter(0, self.truncation), s)
    }

    pub fn exp_series(&self) -> Result<Self> {
        self.exp_series_with(Rational::one())
    }

    pub fn log_series(&self) -> Result<Self> {
        let c0 = self.coeff(&Word::empty());
        if !c0.is_one() {
            return Err(Error::WrongConstantTerm { expected: "1".into(), found: format_rational(&c0) });
        }
        Ok(self.log_series_unchecked())
    }

    /// Primitive for `Δ(x_i) = x_i ⊗ 1 + 1 ⊗ x_i`, i.e. a Lie series.
    pub fn is_primitive(&self) -> bool {
        self.constant_term().is_none() && self.lie_defect().is_zero()
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }
}

/// `A x1 A^{-1}`.
fn conjugated_x1(a: &NoncommSeries) -> Result<NoncommSeries> {
    let x1 = NoncommSeries::letter(1, a.truncation());
    a.multiply(&x1)?.multiply(&a.invert()?)
}

/// `A ∘ G = G(x0, A x1 A^{-1}) · A`.
pub fn ihara_compose(a: &NoncommSeries, g: &NoncommSeries) -> Result<NoncommSeries> {
    a.check(g)?;
    let s = conjugated_x1(a)?;
    g.substitute_x1(&s)?.multiply(a)
}

/// The automorphism `x0 ↦ x0, x1 ↦ A x1 A^{-1}` attached to `A`.
#[derive(Clone, Debug)]
pub struct IharaAutomorphism {
    a: NoncommSeries,
    image_x0: NoncommSeries,
    image_x1: NoncommSeries,
}

impl IharaAutomorphism {
    pub fn new(a: &NoncommSeries) -> Result<Self> {
        Ok(Self {
            a: a.clone(),
            image_x0: NoncommSeries::letter(0, a.truncation()),
            image_x1: conjugated_x1(a)?,
        })
    }

    /// Action on paths from 0 to 0: a ring homomorphism.
    pub fn apply_00(&self, g: &NoncommSeries) -> Result<NoncommSeries> {
        g.substitute(&self.image_x0, &self.image_x1)
    }

    /// Action on paths from 0 to 1: `a_00(G) · A`.
    pub fn apply_01(&self, g: &NoncommSeries) -> Result<NoncommSeries> {
        self.apply_00(g)?.multiply(&self.a)
    }
}

/// Coefficient of `ε` in a polynomial `P(ε)` of degree at most `degree`
/// from its values at `ε = 0, 1, ..., degree`.
fn linear_coefficient(
    degree: usize,
    mut eval: impl FnMut(&Rational) -> Result<NoncommSeries>,
) -> Result<NoncommSeries> {
    let nodes: Vec<Rational> = (0..=degree as i64).map(int).collect();
    let mut out: Option<NoncommSeries> = None;
    for (i, xi) in nodes.iter().enumerate() {
        // d/dε of the Lagrange basis polynomial L_i at ε = 0
        let mut denom = Rational::one();
        for (j, xj) in nodes.iter().enumerate() {
            if j != i {
                denom *= xi - xj;
            }
        }
        let others: Vec<&Rational> = nodes.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x).collect();
        // coefficient of ε in Π_{j≠i} (ε - x_j) = Σ_k Π_{j≠i,k} (-x_j)
        let mut lin = Rational::zero();
        for k in 0..others.len() {
            let mut prod = Rational::one();
            for (m, x) in others.iter().enumerate() {
                if m != k {
                    prod *= -(*x).clone();
                }
            }
            lin += prod;
        }
        let weight = lin / denom;
        if weight.is_zero() {
            continue;
        }
        let value = eval(xi)?.scale(&weight);
        out = Some(match out {
            None => value,
            Some(acc) => acc.add(&value)?,
        });
    }
    Ok(out.expect("at least one node"))
}

/// The `εδ` coefficient of `(1 + εf) ∘ (1 + δg)`: the infinitesimal action
/// of `f` on `g` read off from the group law.
pub fn ihara_action(f: &NoncommSeries, g: &NoncommSeries) -> Result<NoncommSeries> {
    f.check(g)?;
    let t = f.truncation();
    let one = NoncommSeries::one(t);
    let g1 = one.add(g)?;
    let Some(m) = f.min_degree() else {
        return Ok(NoncommSeries::zero(t));
    };
    if m == 0 {
        return Err(Error::InvalidArgument("argument has a constant term".into()));
    }
    // (1+εf)∘(1+δg) is linear in δ and of degree ≤ t/m in ε
    let degree = t / m;
    let lin = linear_coefficient(degree, |eps| ihara_compose(&one.add(&f.scale(eps))?, &g1))?;
    lin.sub(f)
}

/// Closed form of [`ihara_action`]: `D_f(g) + g f`, where `D_f` is the
/// derivation with `x0 ↦ 0` and `x1 ↦ f x1 - x1 f`.
pub fn ihara_action_closed_form(f: &NoncommSeries, g: &NoncommSeries) -> Result<NoncommSeries> {
    f.check(g)?;
    let t = f.truncation();
    let x1 = NoncommSeries::letter(1, t);
    let dx1 = f.commutator(&x1)?;
    let mut d = NoncommSeries::zero(t);
    for (w, c) in g.terms() {
        for (i, &a) in w.letters().iter().enumerate() {
            if a == 1 {
                let left = NoncommSeries::from_terms([(Word(w.letters()[..i].to_vec()), Rational::one())], t);
                let right = NoncommSeries::from_terms([(Word(w.letters()[i + 1..].to_vec()), Rational::one())], t);
                d = d.add(&left.multiply(&dx1)?.multiply(&right)?.scale(c))?;
            }
        }
    }
    d.add(&g.multiply(f)?)
}

/// `{f, g} = action(f on g) - action(g on f)`.
pub fn ihara_bracket(f: &NoncommSeries, g: &NoncommSeries) -> Result<NoncommSeries> {
    f.check(g)?;
    if !f.is_primitive() || !g.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    ihara_action(f, g)?.sub(&ihara_action(g, f)?)
}

/// `ad(x0)^{2n}(x1)`.
pub fn sigma_depth1(n: usize, truncation: usize) -> NoncommSeries {
    let x0 = NoncommSeries::letter(0, truncation);
    let mut cur = NoncommSeries::letter(1, truncation);
    for _ in 0..2 * n {
        cur = x0.commutator(&cur).expect("same truncation");
    }
    cur
}

/// `[x0,[x0,x1]] + [x1,[x1,x0]]`.
pub fn sigma3(truncation: usize) -> NoncommSeries {
    let x0 = NoncommSeries::letter(0, truncation);
    let x1 = NoncommSeries::letter(1, truncation);
    let a = x0.commutator(&x0.commutator(&x1).unwrap()).unwrap();
    let b = x1.commutator(&x1.commutator(&x0).unwrap()).unwrap();
    a.add(&b).unwrap()
}

/// Depth-2 parts of `{σ3,σ9} - 3{σ5,σ7}` and of the two brackets, using
/// depth-1 representatives at truncation 12.
#[derive(Clone, Debug)]
pub struct IharaTakao {
    pub combination: NoncommSeries,
    pub bracket_3_9: NoncommSeries,
    pub bracket_5_7: NoncommSeries,
}

impl IharaTakao {
    pub fn compute() -> Result<Self> {
        let t = 12;
        let s = |n| sigma_depth1(n, t);
        let b39 = ihara_bracket(&s(1), &s(4))?.depth_component(2);
        let b57 = ihara_bracket(&s(2), &s(3))?.depth_component(2);
        let combination = b39.sub(&b57.scale(&int(3)))?;
        Ok(Self { combination, bracket_3_9: b39, bracket_5_7: b57 })
    }

    pub fn vanishes(&self) -> bool {
        self.combination.is_zero()
    }
}

pub fn ihara_takao_check() -> Result<bool> {
    Ok(IharaTakao::compute()?.vanishes())
}

pub fn format_word_x(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters().iter().map(|a| format!("x{a}")).collect()
}

pub fn parse_word_x(s: &str) -> Result<Word> {
    let t = s.trim();
    if t == "1" || t.is_empty() {
        return Ok(Word::empty());
    }
    let mut letters = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        rest = rest.trim_start_matches(['*', ' ']);
        if let Some(r) = rest.strip_prefix("x0") {
            letters.push(0);
            rest = r;
        } else if let Some(r) = rest.strip_prefix("x1") {
            letters.push(1);
            rest = r;
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("invalid word '{s}'")));
        }
    }
    Ok(Word(letters))
}

/// Parses `"1 + 2*x0x1 - 1/2 x1"` at the given truncation; words longer than
/// the truncation are dropped.
pub fn parse_series(s: &str, truncation: usize) -> Result<NoncommSeries> {
    let mut out = NoncommSeries::zero(truncation);
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            terms.push((negative, std::mem::take(&mut cur)));
            negative = ch == '-';
        } else if ch == '+' || ch == '-' {
            negative ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push((negative, cur));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("empty series '{s}'")));
    }
    for (neg, t) in terms {
        let t = t.trim();
        let split = t.find('x').unwrap_or(t.len());
        let (coeff, word) = t.split_at(split);
        let coeff = coeff.trim().trim_end_matches(['*', '·']).trim();
        let word = if word.is_empty() { Word::empty() } else { parse_word_x(word)? };
        let mut c = if coeff.is_empty() { Rational::one() } else { parse_rational(coeff)? };
        if neg {
            c = -c;
        }
        if word.len() <= truncation {
            out.add_term(word, c);
        }
    }
    Ok(out)
}

impl fmt::Display for NoncommSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (w, c) in &self.terms {
            writeln!(f, "{} · {}", format_rational(c), format_word_x(w))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct XTerm {
    word: Vec<String>,
    coeff: String,
}

#[derive(Deserialize)]
struct SeriesRepr {
    truncation: usize,
    terms: Vec<XTerm>,
}

fn letters_x(w: &Word) -> Vec<String> {
    w.letters().iter().map(|a| format!("x{a}")).collect()
}

impl Serialize for NoncommSeries<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<XTerm> = self
            .terms
            .iter()
            .map(|(w, c)| XTerm { word: letters_x(w), coeff: format_rational(c) })
            .collect();
        let mut st = s.serialize_struct("NoncommSeries", 2)?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for NoncommSeries<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let mut out = NoncommSeries::zero(repr.truncation);
        for t in repr.terms {
            let w = parse_word_x(&t.word.concat()).map_err(serde::de::Error::custom)?;
            if w.len() > repr.truncation {
                return Err(serde::de::Error::custom("word exceeds truncation"));
            }
            out.add_term(w, parse_rational(&t.coeff).map_err(serde::de::Error::custom)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn s(terms: &[(&str, i64)], t: usize) -> NoncommSeries {
        NoncommSeries::from_terms(terms.iter().map(|(w, c)| (parse_word_x(w).unwrap(), int(*c))), t)
    }

    #[test]
    fn parse_series_text() {
        assert_eq!(parse_series("1 + 2*x0x1 - 1/2 x1", 4).unwrap(), s(&[("1", 1), ("x0x1", 2)], 4).sub(&NoncommSeries::letter(1, 4).scale(&rat(1, 2))).unwrap());
        assert_eq!(parse_series("x0x0x0 - 3", 2).unwrap(), s(&[("1", -3)], 2));
        assert!(parse_series("1 + y", 3).is_err());
        assert!(parse_series("", 3).is_err());
    }

    #[test]
    fn multiply_examples() {
        let a = s(&[("1", 1), ("x0", 1)], 4);
        let b = s(&[("1", 1), ("x1", 1)], 4);
        assert_eq!(a.multiply(&b).unwrap(), s(&[("1", 1), ("x0", 1), ("x1", 1), ("x0x1", 1)], 4));
        assert_eq!(b.multiply(&a).unwrap(), s(&[("1", 1), ("x0", 1), ("x1", 1), ("x1x0", 1)], 4));
        assert_eq!(NoncommSeries::one(4).multiply(&b).unwrap(), b);
        assert!(matches!(a.multiply(&NoncommSeries::one(3)), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn invert_examples() {
        let a = s(&[("1", 1), ("x0", 1)], 4);
        let inv = a.invert().unwrap();
        assert_eq!(inv, s(&[("1", 1), ("x0", -1), ("x0x0", 1), ("x0x0x0", -1), ("x0x0x0x0", 1)], 4));
        assert_eq!(NoncommSeries::one(3).invert().unwrap(), NoncommSeries::one(3));
        assert_eq!(s(&[("x0", 1)], 3).invert(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn substitute_examples() {
        let g = s(&[("1", 1), ("x1", 1)], 3);
        let sub = s(&[("x1", 1), ("x0x1", 1)], 3);
        assert_eq!(g.substitute_x1(&sub).unwrap(), s(&[("1", 1), ("x1", 1), ("x0x1", 1)], 3));
        let h = s(&[("x1x0x1", 2), ("x0", -1), ("x1x1", 3)], 3);
        assert_eq!(h.substitute_x1(&NoncommSeries::letter(1, 3)).unwrap(), h);
        let g0 = s(&[("1", 1), ("x0", 1)], 3);
        assert_eq!(g0.substitute_x1(&sub).unwrap(), g0);
    }

    #[test]
    fn compose_examples() {
        let a = s(&[("1", 1), ("x1", 1)], 2);
        let g = s(&[("1", 1), ("x0", 1)], 2);
        assert_eq!(
            ihara_compose(&a, &g).unwrap(),
            s(&[("1", 1), ("x0", 1), ("x1", 1), ("x0x1", 1)], 2)
        );
        assert_eq!(ihara_compose(&NoncommSeries::one(2), &g).unwrap(), g);
        assert_eq!(ihara_compose(&a, &NoncommSeries::one(2)).unwrap(), a);
    }

    #[test]
    fn sigma_examples() {
        let s1 = sigma_depth1(1, 6);
        assert_eq!(s1, s(&[("x0x0x1", 1), ("x0x1x0", -2), ("x1x0x0", 1)], 6));
        for n in 1..=5 {
            let sig = sigma_depth1(n, 12);
            assert_eq!(sig.depth_component(1), sig);
            assert!(sig.is_primitive());
        }
        let full = sigma3(6);
        assert_eq!(full.depth_component(1), s1);
        assert_eq!(full.depth_component(2), s(&[("x1x1x0", 1), ("x1x0x1", -2), ("x0x1x1", 1)], 6));
        let p = s(&[("1", 1), ("x0", 1)], 3);
        assert_eq!(p.depth_component(0), p);
    }

    #[test]
    fn bracket_rejects_non_primitive() {
        let f = sigma_depth1(1, 8);
        let x0x1 = s(&[("x0x1", 1)], 8);
        assert_eq!(ihara_bracket(&f, &x0x1), Err(Error::NotPrimitive));
        // x0 is itself a Lie element and is accepted
        assert!(ihara_bracket(&f, &NoncommSeries::letter(0, 8)).is_ok());
    }

    #[test]
    fn bracket_of_sigma3_sigma5_depth1() {
        let t = 8;
        let b = ihara_bracket(&sigma_depth1(1, t), &sigma_depth1(2, t)).unwrap();
        assert!(!b.is_zero());
        assert!(b.is_primitive());
        assert_eq!(b.depth_component(2), b);
        assert!(b.terms().all(|(w, _)| w.len() == 8));
        assert!(ihara_bracket(&sigma_depth1(1, t), &sigma_depth1(1, t)).unwrap().is_zero());
    }

    #[test]
    fn action_matches_closed_form() {
        let t = 7;
        let f = sigma3(t);
        let g = sigma_depth1(2, t);
        assert_eq!(ihara_action(&f, &g).unwrap(), ihara_action_closed_form(&f, &g).unwrap());
        let h = NoncommSeries::letter(1, t);
        assert_eq!(ihara_action(&g, &h).unwrap(), ihara_action_closed_form(&g, &h).unwrap());
    }

    #[test]
    fn ihara_takao_vanishes_with_controls() {
        let it = IharaTakao::compute().unwrap();
        assert!(it.vanishes());
        assert!(!it.bracket_3_9.is_zero());
        assert!(!it.bracket_5_7.is_zero());
        let wrong = it.bracket_3_9.sub(&it.bracket_5_7.scale(&int(2))).unwrap();
        assert!(!wrong.is_zero());
    }

    #[test]
    fn exp_log_examples() {
        let x0 = NoncommSeries::letter(0, 5);
        let e = x0.exp_series().unwrap();
        assert_eq!(e.coeff(&Word(vec![0; 4])), Rational::new(1.into(), 24.into()));
        let x1 = NoncommSeries::letter(1, 5);
        assert_eq!(x1.exp_series().unwrap().log_series().unwrap(), x1);
        assert!(matches!(x0.log_series(), Err(Error::WrongConstantTerm { .. })));
        assert!(matches!(e.exp_series(), Err(Error::WrongConstantTerm { .. })));
    }

    #[test]
    fn inertia_fixes_exp_x0() {
        let t = 6;
        let a = s(&[("1", 1), ("x1", 2), ("x0x1", -1), ("x1x0x1", 3)], t);
        let aut = IharaAutomorphism::new(&a).unwrap();
        let e = NoncommSeries::letter(0, t).exp_series().unwrap();
        assert_eq!(aut.apply_00(&e).unwrap(), e);
    }

    #[test]
    fn json_roundtrip() {
        let a = s(&[("1", 1), ("x0x1", -2)], 3);
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"{"truncation":3,"terms":[{"word":[],"coeff":"1"},{"word":["x0","x1"],"coeff":"-2"}]}"#);
        let b: NoncommSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(a, b);
    }

    pub(crate) fn random_series(t: usize, max_terms: usize) -> impl Strategy<Value = NoncommSeries> {
        let word = proptest::collection::vec(0u8..2, 1..=t);
        proptest::collection::vec((word, -3i64..=3), 0..=max_terms).prop_map(move |terms| {
            let mut out = NoncommSeries::one(t);
            for (w, c) in terms {
                out.add_term(Word(w), int(c));
            }
            out
        })
    }

    fn random_lie(t: usize) -> impl Strategy<Value = NoncommSeries> {
        // random combinations of left-normed brackets of letters
        let word = proptest::collection::vec(0u8..2, 1..=t);
        proptest::collection::vec((word, -2i64..=2), 1..4).prop_map(move |terms| {
            let p = NoncommSeries::from_terms(terms.into_iter().map(|(w, c)| (Word(w), int(c))), t);
            let mut out = NoncommSeries::zero(t);
            for n in 1..=t {
                out = out.add(&p.homogeneous(n).dynkin().scale(&Rational::new(1.into(), (n as i64).into()))).unwrap();
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn invert_is_involutive(a in random_series(5, 6)) {
            let inv = a.invert().unwrap();
            prop_assert_eq!(a.multiply(&inv).unwrap(), NoncommSeries::one(5));
            prop_assert_eq!(inv.invert().unwrap(), a);
        }

        #[test]
        fn automorphism_picture_matches(a in random_series(5, 4), g in random_series(5, 4)) {
            let aut = IharaAutomorphism::new(&a).unwrap();
            prop_assert_eq!(aut.apply_01(&g).unwrap(), ihara_compose(&a, &g).unwrap());
        }

        #[test]
        fn log_of_group_like_is_primitive(p in random_lie(5)) {
            prop_assert!(p.is_primitive());
            let e = p.exp_series().unwrap();
            let l = e.log_series().unwrap();
            prop_assert!(l.is_primitive());
            prop_assert_eq!(l, p);
        }

        #[test]
        fn bracket_antisymmetric_and_depth_graded(f in random_lie(6), g in random_lie(6)) {
            let fg = ihara_bracket(&f, &g).unwrap();
            let gf = ihara_bracket(&g, &f).unwrap();
            prop_assert_eq!(fg.add(&gf).unwrap(), NoncommSeries::zero(6));
            prop_assert!(fg.is_primitive());
        }
    }
}
