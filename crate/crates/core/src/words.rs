//! Words over {0,1}, compositions, the shuffle Hopf algebra, shuffle
//! regularization, Lyndon words and the dimension generating series.
//!
//! Letter 0 stands for `dt/t` and letter 1 for `dt/(1-t)`; the composition
//! `(n1,...,nr)` is encoded as `1 0^{n1-1} ... 1 0^{nr-1}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational, RationalSeries};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        let letters = letters.into();
        debug_assert!(letters.iter().all(|&a| a <= 1));
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Number of occurrences of the letter 1.
    pub fn depth(&self) -> usize {
        self.0.iter().filter(|&&a| a == 1).count()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Starts with 1 and ends with 0 (or is empty): the iterated integral
    /// from 0 to 1 converges.
    pub fn is_convergent(&self) -> bool {
        self.0.is_empty() || (self.0[0] == 1 && self.0[self.0.len() - 1] == 0)
    }

    /// Parses `"10100"` or `"1,0,1"`.
    pub fn parse(s: &str) -> Result<Word> {
        let letters: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid letter '{c}' in word '{s}'"))),
            })
            .collect::<Result<_>>()?;
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        Composition(parts.into())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// All parts positive and the last part at least 2. The empty
    /// composition (value 1) counts as admissible.
    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(|&n| n >= 1) && self.0.last().is_none_or(|&n| n >= 2)
    }

    /// Parses `"3,9"` or `"(3,9)"`.
    pub fn parse(s: &str) -> Result<Composition> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(Composition::default());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Parse(format!("invalid composition '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Composition(parts))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn composition_to_word(c: &Composition) -> Word {
    let mut letters = Vec::with_capacity(c.weight() as usize);
    for &n in c.parts() {
        letters.push(1);
        letters.extend(std::iter::repeat_n(0, n.saturating_sub(1) as usize));
    }
    Word(letters)
}

pub fn word_to_composition(w: &Word) -> Result<Composition> {
    if w.is_empty() || w.0[0] != 1 {
        return Err(Error::NotCompositionForm(w.to_string()));
    }
    let mut parts = Vec::new();
    for &a in &w.0 {
        if a == 1 {
            parts.push(1);
        } else {
            *parts.last_mut().expect("word starts with 1") += 1;
        }
    }
    Ok(Composition(parts))
}

/// All interleavings of `u` and `v` with multiplicities.
pub fn shuffle_slices<T: Clone + Ord>(u: &[T], v: &[T]) -> BTreeMap<Vec<T>, u64> {
    fn go<T: Clone + Ord>(u: &[T], v: &[T], prefix: &mut Vec<T>, out: &mut BTreeMap<Vec<T>, u64>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        prefix.push(u[0].clone());
        go(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0].clone());
        go(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = BTreeMap::new();
    go(u, v, &mut Vec::with_capacity(u.len() + v.len()), &mut out);
    out
}

/// Finite rational combination of words with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordPoly {
    terms: BTreeMap<Word, Rational>,
}

impl WordPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: Word, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &WordPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &WordPoly, s: &Rational) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Rational) -> WordPoly {
        let mut out = WordPoly::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn shuffle(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for (w, n) in shuffle_slices(&u.0, &v.0) {
                    out.add_term(Word(w), &ab * Rational::from_integer(BigInt::from(n)));
                }
            }
        }
        out
    }

    /// Applies `f` to every word and sums the results with coefficients.
    pub fn map_linear(&self, mut f: impl FnMut(&Word) -> WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// Appends `left` to the front and `right` to the back of every word.
    pub fn wrap(&self, left: &[u8], right: &[u8]) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in &self.terms {
            let mut v = left.to_vec();
            v.extend_from_slice(&w.0);
            v.extend_from_slice(right);
            out.add_term(Word(v), c.clone());
        }
        out
    }
}

impl FromIterator<(Word, Rational)> for WordPoly {
    fn from_iter<I: IntoIterator<Item = (Word, Rational)>>(iter: I) -> Self {
        let mut p = WordPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }
}

impl fmt::Display for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("{}·{}", format_rational(c), w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct WordTerm {
    word: Word,
    coeff: String,
}

impl Serialize for WordPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<WordTerm> = self
            .terms
            .iter()
            .map(|(w, c)| WordTerm { word: w.clone(), coeff: format_rational(c) })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WordPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<WordTerm>::deserialize(d)?;
        v.into_iter()
            .map(|t| Ok((t.word, parse_rational(&t.coeff).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

pub fn shuffle(u: &Word, v: &Word) -> WordPoly {
    shuffle_slices(&u.0, &v.0)
        .into_iter()
        .map(|(w, n)| (Word(w), Rational::from_integer(BigInt::from(n))))
        .collect()
}

pub fn deconcatenate(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| (Word(w.0[..i].to_vec()), Word(w.0[i..].to_vec()))).collect()
}

pub fn antipode(w: &Word) -> (Rational, Word) {
    let sign = if w.len().is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    (sign, w.reversed())
}

/// Rational combination of admissible compositions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularizedForm {
    terms: BTreeMap<Composition, Rational>,
}

impl RegularizedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &Composition) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, c: Composition, r: Rational) {
        if r.is_zero() {
            return;
        }
        let e = self.terms.entry(c.clone()).or_insert_with(Rational::zero);
        *e += r;
        if e.is_zero() {
            self.terms.remove(&c);
        }
    }

    /// Converts a combination of convergent words.
    pub fn from_convergent(p: &WordPoly) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in p.terms() {
            if !w.is_convergent() {
                return Err(Error::InvalidArgument(format!("word {w} is not convergent")));
            }
            let comp = if w.is_empty() { Composition::default() } else { word_to_composition(w)? };
            out.add_term(comp, c.clone());
        }
        Ok(out)
    }

    pub fn to_word_poly(&self) -> WordPoly {
        self.terms.iter().map(|(c, r)| (composition_to_word(c), r.clone())).collect()
    }
}

impl fmt::Display for RegularizedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(c, r)| format!("{}·ζ{}", format_rational(r), c)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CompositionTerm {
    composition: Composition,
    coeff: String,
}

impl Serialize for RegularizedForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<CompositionTerm> = self
            .terms
            .iter()
            .map(|(c, r)| CompositionTerm { composition: c.clone(), coeff: format_rational(r) })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RegularizedForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<CompositionTerm>::deserialize(d)?;
        let mut out = RegularizedForm::zero();
        for t in v {
            if !t.composition.is_admissible() {
                return Err(serde::de::Error::custom(format!(
                    "composition {} is not admissible",
                    t.composition
                )));
            }
            out.add_term(t.composition, parse_rational(&t.coeff).map_err(serde::de::Error::custom)?);
        }
        Ok(out)
    }
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Removes leading zeros: `0^k 1 u ≡ (-1)^k 1 (0^k ⧢ u)` modulo the shuffle
/// ideal generated by the word `0`.
fn strip_leading_zeros(w: &Word) -> WordPoly {
    let k = w.0.iter().take_while(|&&a| a == 0).count();
    if k == 0 {
        return WordPoly::from_word(w.clone());
    }
    if k == w.len() {
        return WordPoly::zero();
    }
    let rest = &w.0[k + 1..];
    let zeros = vec![0u8; k];
    let mut out = WordPoly::zero();
    let s = sign(k);
    for (v, n) in shuffle_slices(&zeros, rest) {
        let mut letters = Vec::with_capacity(v.len() + 1);
        letters.push(w.0[k]);
        letters.extend(v);
        out.add_term(Word(letters), &s * Rational::from_integer(BigInt::from(n)));
    }
    out
}

/// Removes trailing ones: `v 0 1^k ≡ (-1)^k (v ⧢ 1^k) 0` modulo the shuffle
/// ideal generated by the word `1`.
fn strip_trailing_ones(w: &Word) -> WordPoly {
    let k = w.0.iter().rev().take_while(|&&a| a == 1).count();
    if k == 0 {
        return WordPoly::from_word(w.clone());
    }
    if k == w.len() {
        return WordPoly::zero();
    }
    let n = w.len();
    let head = &w.0[..n - k - 1];
    let ones = vec![1u8; k];
    let mut out = WordPoly::zero();
    let s = sign(k);
    for (v, m) in shuffle_slices(head, &ones) {
        let mut letters = v;
        letters.push(w.0[n - k - 1]);
        out.add_term(Word(letters), &s * Rational::from_integer(BigInt::from(m)));
    }
    out
}

/// Which divergent end is removed first; both orders give the same result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularizationOrder {
    ZerosFirst,
    OnesFirst,
}

pub fn shuffle_regularize_poly(p: &WordPoly, order: RegularizationOrder) -> WordPoly {
    match order {
        RegularizationOrder::ZerosFirst => {
            p.map_linear(strip_leading_zeros).map_linear(strip_trailing_ones)
        }
        RegularizationOrder::OnesFirst => {
            p.map_linear(strip_trailing_ones).map_linear(strip_leading_zeros)
        }
    }
}

pub fn shuffle_regularize_with(w: &Word, order: RegularizationOrder) -> RegularizedForm {
    let p = shuffle_regularize_poly(&WordPoly::from_word(w.clone()), order);
    RegularizedForm::from_convergent(&p).expect("regularization yields convergent words")
}

/// Regularized value of `I(0; w; 1)` with both single-letter integrals set
/// to zero, as a combination of admissible compositions.
pub fn shuffle_regularize(w: &Word) -> RegularizedForm {
    shuffle_regularize_with(w, RegularizationOrder::ZerosFirst)
}

/// Lyndon words over the alphabet `0 < 1 < ... < weights.len()-1`, where
/// letter `i` has weight `weights[i]`, of total weight at most `max_weight`,
/// sorted lexicographically.
pub fn lyndon_words(weights: &[u32], max_weight: u32) -> Vec<Vec<usize>> {
    fn go(weights: &[u32], max_weight: u32, cur: &mut Vec<usize>, wt: u32, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() && is_lyndon(cur) {
            out.push(cur.clone());
        }
        for (i, &w) in weights.iter().enumerate() {
            if w > 0 && wt + w <= max_weight {
                cur.push(i);
                go(weights, max_weight, cur, wt + w, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, max_weight, &mut Vec::new(), 0, &mut out);
    out.sort();
    out
}

/// Strictly smaller than each of its proper non-trivial rotations.
pub fn is_lyndon<T: Ord>(w: &[T]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|i| {
        let rot = w[i..].iter().chain(w[..i].iter());
        w.iter().lt(rot)
    })
}

pub fn lyndon_weight(word: &[usize], weights: &[u32]) -> u32 {
    word.iter().map(|&i| weights[i]).sum()
}

/// Number of monomials (multisets) of Lyndon words of total weight `n`.
pub fn lyndon_monomial_count(weights: &[u32], n: u32) -> BigInt {
    let words = lyndon_words(weights, n);
    let mut counts = vec![BigInt::zero(); n as usize + 1];
    counts[0] = BigInt::one();
    for w in &words {
        let d = lyndon_weight(w, weights) as usize;
        for m in d..=n as usize {
            let prev = counts[m - d].clone();
            counts[m] += prev;
        }
    }
    counts[n as usize].clone()
}

/// Expansion of `1/(1-t^2-t^3)` up to `t^n`.
pub fn dimension_series(n: usize) -> RationalSeries {
    RationalSeries::from_integers(&[1, 0, -1, -1], n)
        .inverse()
        .expect("constant term is 1")
}

pub fn dimension_d(n: u32) -> BigInt {
    dimension_series(n as usize).coeff(n as usize).to_integer()
}

fn geometric_in_t(num: RationalSeries, factors: &[usize], trunc: usize) -> RationalSeries {
    let mut out = num;
    for &k in factors {
        let inv = RationalSeries::from_coeffs(
            (0..=trunc).map(|i| if i % k == 0 { Rational::one() } else { Rational::zero() }),
            trunc,
        );
        out = out.mul(&inv).expect("equal truncations");
    }
    out
}

/// Coefficients of `s^0 .. s^max_depth` in the bivariate depth-graded series,
/// each truncated at `t^n`.
pub fn bk_series(n: usize, max_depth: usize) -> Vec<RationalSeries> {
    let one = |deg: usize| RationalSeries::monomial(Rational::one(), deg, n);
    let e = geometric_in_t(one(2), &[2], n);
    let o = geometric_in_t(one(3), &[2], n);
    let s = geometric_in_t(one(12), &[4, 6], n);
    let neg_s = s.scale(&-Rational::one());
    let x = |i: usize| match i {
        1 => Some(&o),
        2 => Some(&neg_s),
        4 => Some(&s),
        _ => None,
    };
    let mut y: Vec<RationalSeries> = vec![RationalSeries::one(n)];
    for j in 1..=max_depth {
        let mut acc = RationalSeries::zero(n);
        for i in 1..=j.min(4) {
            if let Some(xi) = x(i) {
                acc = acc.add(&xi.mul(&y[j - i]).expect("equal")).expect("equal");
            }
        }
        y.push(acc);
    }
    (0..=max_depth)
        .map(|d| {
            if d == 0 {
                y[0].clone()
            } else {
                y[d].add(&e.mul(&y[d - 1]).expect("equal")).expect("equal")
            }
        })
        .collect()
}

pub fn bk_coefficient(n: u32, d: u32) -> BigInt {
    let series = bk_series(n as usize, d as usize);
    series[d as usize].coeff(n as usize).to_integer()
}

/// Number of compositions of `n` with all parts in {2,3}.
pub fn hoffman_count(n: u32) -> BigInt {
    let n = n as usize;
    let mut h = vec![BigInt::zero(); n + 1];
    h[0] = BigInt::one();
    for m in 1..=n {
        let mut v = BigInt::zero();
        if m >= 2 {
            v += &h[m - 2];
        }
        if m >= 3 {
            v += &h[m - 3];
        }
        h[m] = v;
    }
    h[n].clone()
}

/// Product over Lyndon words of `(1 - t^{weight})^{-1}` up to `t^n`.
pub fn lyndon_product_series(weights: &[u32], n: usize) -> RationalSeries {
    let mut out = RationalSeries::one(n);
    for w in lyndon_words(weights, n as u32) {
        let d = lyndon_weight(&w, weights) as usize;
        out = geometric_in_t(out, &[d], n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec())
    }

    #[test]
    fn composition_word_roundtrip() {
        assert_eq!(composition_to_word(&c(&[2])), w("10"));
        assert_eq!(composition_to_word(&c(&[3])), w("100"));
        assert_eq!(composition_to_word(&c(&[2, 3])), w("10100"));
        assert_eq!(word_to_composition(&w("100")).unwrap(), c(&[3]));
        assert_eq!(word_to_composition(&w("110")).unwrap(), c(&[1, 2]));
        assert!(matches!(word_to_composition(&w("01")), Err(Error::NotCompositionForm(_))));
        assert!(word_to_composition(&Word::empty()).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let p = shuffle(&w("0"), &w("1"));
        assert_eq!(p.coeff(&w("01")), int(1));
        assert_eq!(p.coeff(&w("10")), int(1));
        assert_eq!(p.len(), 2);
        assert_eq!(shuffle(&w("0"), &w("0")), WordPoly::term(w("00"), int(2)));
        let p = shuffle(&w("10"), &w("0"));
        assert_eq!(p.coeff(&w("010")), int(1));
        assert_eq!(p.coeff(&w("100")), int(2));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn shuffle_against_brute_force_positions() {
        // choose which positions of the result hold letters of u
        let u = w("101");
        let v = w("0110");
        let n = u.len() + v.len();
        let mut expected = WordPoly::zero();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != u.len() {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut letters = Vec::new();
            for pos in 0..n {
                if mask & (1 << pos) != 0 {
                    letters.push(u.0[i]);
                    i += 1;
                } else {
                    letters.push(v.0[j]);
                    j += 1;
                }
            }
            expected.add_term(Word(letters), int(1));
        }
        assert_eq!(shuffle(&u, &v), expected);
    }

    #[test]
    fn deconcatenation_and_antipode() {
        assert_eq!(
            deconcatenate(&w("10")),
            vec![(Word::empty(), w("10")), (w("1"), w("0")), (w("10"), Word::empty())]
        );
        assert_eq!(deconcatenate(&Word::empty()), vec![(Word::empty(), Word::empty())]);
        assert_eq!(antipode(&w("10")), (int(1), w("01")));
        assert_eq!(antipode(&w("1")), (int(-1), w("1")));
        assert_eq!(antipode(&Word::empty()), (int(1), Word::empty()));
    }

    #[test]
    fn regularization_examples() {
        let r = shuffle_regularize(&w("10"));
        assert_eq!(r.coeff(&c(&[2])), int(1));
        assert_eq!(r.len(), 1);
        assert!(shuffle_regularize(&w("0")).is_zero());
        assert!(shuffle_regularize(&w("1")).is_zero());
        let r = shuffle_regularize(&w("01"));
        assert_eq!(r.coeff(&c(&[2])), int(-1));
        assert_eq!(r.len(), 1);
        let r = shuffle_regularize(&Word::empty());
        assert_eq!(r.coeff(&Composition::default()), int(1));
    }

    #[test]
    fn regularization_of_two_letter_words_by_shuffle_identity() {
        // 0 ⧢ 10 = 010 + 2·100 gives reg(010) = -2 ζ(3)
        let r = shuffle_regularize(&w("010"));
        assert_eq!(r.coeff(&c(&[3])), int(-2));
        // 1 ⧢ 10 = 2·110 + 101 gives reg(101) = -2 ζ(1,2)
        let r = shuffle_regularize(&w("101"));
        assert_eq!(r.coeff(&c(&[1, 2])), int(-2));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn regularization_respects_shuffle_product() {
        // reg is a shuffle homomorphism: reg(u ⧢ v) for convergent u and v
        // equals the shuffle of the two, and vanishes when v is a single letter
        for u in ["10", "100", "110", "1010"] {
            let u = w(u);
            for letter in ["0", "1"] {
                let p = shuffle(&u, &w(letter));
                let reg = shuffle_regularize_poly(&p, RegularizationOrder::ZerosFirst);
                assert!(reg.is_zero(), "{u} ⧢ {letter}");
            }
        }
    }

    #[test]
    fn lyndon_examples() {
        let words = lyndon_words(&[1, 1], 3);
        let by_weight = |n: u32| words.iter().filter(|w| w.len() as u32 == n).count();
        assert_eq!((by_weight(1), by_weight(2), by_weight(3)), (2, 1, 2));
        let words = lyndon_words(&[3, 2], 6);
        assert_eq!(words.iter().filter(|w| lyndon_weight(w, &[3, 2]) == 6).count(), 0);
        assert!(is_lyndon(&[0usize]) && is_lyndon(&[1usize]));
        assert!(is_lyndon(&[0, 0, 1]) && !is_lyndon(&[0, 1, 0]) && !is_lyndon(&[1, 1]));
    }

    #[test]
    fn witt_formula_for_binary_alphabet() {
        // number of Lyndon words of length n over 2 letters is (1/n) Σ_{d|n} μ(d) 2^{n/d}
        let expected = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99];
        let words = lyndon_words(&[1, 1], 10);
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(words.iter().filter(|w| w.len() == n + 1).count(), e);
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension_d(12), BigInt::from(12));
        assert_eq!(dimension_d(0), BigInt::from(1));
        assert_eq!(dimension_d(1), BigInt::from(0));
        for n in 3..=30 {
            assert_eq!(dimension_d(n), dimension_d(n - 2) + dimension_d(n - 3));
        }
    }

    #[test]
    fn bk_examples() {
        assert_eq!(bk_coefficient(12, 2), BigInt::from(3));
        assert_eq!(bk_coefficient(2, 1), BigInt::from(1));
        for n in 0..=20usize {
            let series = bk_series(n, n);
            let total: Rational = series.iter().map(|s| s.coeff(n)).sum();
            assert_eq!(total, Rational::from_integer(dimension_d(n as u32)), "N={n}");
        }
    }

    fn brute_hoffman(n: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut total = 0;
        for part in [2, 3] {
            if n >= part {
                total += brute_hoffman(n - part);
            }
        }
        total
    }

    #[test]
    fn hoffman_examples() {
        assert_eq!(hoffman_count(12), BigInt::from(12));
        assert_eq!(hoffman_count(1), BigInt::from(0));
        assert_eq!(hoffman_count(5), BigInt::from(2));
        for n in 0..=30 {
            assert_eq!(hoffman_count(n), BigInt::from(brute_hoffman(n)));
            assert_eq!(hoffman_count(n), dimension_d(n));
        }
    }

    #[test]
    fn witt_identity_for_weights_three_two() {
        assert_eq!(lyndon_product_series(&[3, 2], 20), dimension_series(20));
        for n in 0..=20 {
            assert_eq!(lyndon_monomial_count(&[3, 2], n), dimension_d(n));
        }
    }

    #[test]
    fn wordpoly_json() {
        let p = shuffle(&w("10"), &w("0"));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[{"word":[0,1,0],"coeff":"1"},{"word":[1,0,0],"coeff":"2"}]"#);
        let back: WordPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let r = shuffle_regularize(&w("01"));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"[{"composition":[2],"coeff":"-1"}]"#);
        let _ = rat(1, 2);
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..2, 0..=max).prop_map(Word)
    }

    fn poly_from(p: &WordPoly) -> WordPoly {
        p.clone()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn shuffle_commutative(u in word_strategy(6), v in word_strategy(6)) {
            prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
        }

        #[test]
        fn shuffle_associative(u in word_strategy(4), v in word_strategy(4), x in word_strategy(4)) {
            let left = shuffle(&u, &v).shuffle(&WordPoly::from_word(x.clone()));
            let right = WordPoly::from_word(u.clone()).shuffle(&shuffle(&v, &x));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn shuffle_term_count(u in word_strategy(6), v in word_strategy(6)) {
            let total: Rational = shuffle(&u, &v).terms().map(|(_, c)| c.clone()).sum();
            let expected = crate::exact::binomial((u.len() + v.len()) as u64, u.len() as u64);
            prop_assert_eq!(total, Rational::from_integer(expected));
        }

        #[test]
        fn regularization_orders_agree(u in word_strategy(8)) {
            prop_assert_eq!(
                shuffle_regularize_with(&u, RegularizationOrder::ZerosFirst),
                shuffle_regularize_with(&u, RegularizationOrder::OnesFirst)
            );
        }

        #[test]
        fn regularization_idempotent(u in word_strategy(8)) {
            let once = shuffle_regularize(&u).to_word_poly();
            let twice = shuffle_regularize_poly(&once, RegularizationOrder::ZerosFirst);
            prop_assert_eq!(poly_from(&once), twice);
        }

        #[test]
        fn regularization_fixes_convergent(parts in proptest::collection::vec(1u32..4, 1..4), last in 2u32..4) {
            let mut parts = parts;
            parts.push(last);
            let comp = Composition::new(parts);
            let r = shuffle_regularize(&composition_to_word(&comp));
            prop_assert_eq!(r.len(), 1);
            prop_assert_eq!(r.coeff(&comp), int(1));
        }
    }
}
