//! Formal motivic iterated integrals `I(a0; a1..an; a_{n+1})` and
//! polynomial combinations of motivic multiple zeta values.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::ihara::SeriesCoeff;
use crate::numerics::{BigReal, MzvEvaluator};
use crate::words::{composition_to_word, shuffle_regularize, word_to_composition, Composition, RegularizedForm, Word, WordPoly};

/// `I(a0; a1..an; a_{n+1})` with all entries in {0,1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ISymbol {
    pub start: u8,
    pub word: Word,
    pub end: u8,
}

/// Unipotent symbols share shape and normalization with motivic ones.
pub type UnipotentSymbol = ISymbol;

impl ISymbol {
    pub fn new(start: u8, word: Word, end: u8) -> Self {
        Self { start, word, end }
    }

    /// `ζ(c) = I(0; 1 0^{n1-1} ... 1 0^{nr-1}; 1)`.
    pub fn zeta(c: &Composition) -> Self {
        Self::new(0, composition_to_word(c), 1)
    }

    pub fn weight(&self) -> usize {
        self.word.len()
    }

    /// The letter sequence `a0, a1, ..., a_{n+1}`.
    pub fn letters(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.word.len() + 2);
        v.push(self.start);
        v.extend_from_slice(self.word.letters());
        v.push(self.end);
        v
    }
}

impl fmt::Display for ISymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.word.letters().iter().map(|a| a.to_string()).collect();
        write!(f, "I({}; {}; {})", self.start, inner.join(","), self.end)
    }
}

/// Rewrites a symbol as a rational combination of admissible compositions:
/// equal endpoints give `δ_{w,∅}`, `I(1;w;0) = (-1)^{|w|} I(0;w reversed;1)`,
/// constant words vanish, and the rest is shuffle-regularized.
pub fn normalize(s: &ISymbol) -> RegularizedForm {
    let n = s.word.len();
    if s.start == s.end {
        let mut p = WordPoly::zero();
        if n == 0 {
            p.add_term(Word::empty(), Rational::one());
        }
        return RegularizedForm::from_convergent(&p).expect("empty word is convergent");
    }
    let (word, sign) = if s.start == 1 {
        let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        (s.word.reversed(), sign)
    } else {
        (s.word.clone(), Rational::one())
    };
    if n >= 1 && word.letters().iter().all(|&a| a == word.letters()[0]) {
        return RegularizedForm::zero();
    }
    let reg = shuffle_regularize(&word);
    if sign.is_one() {
        reg
    } else {
        let p = reg.to_word_poly().scale(&sign);
        RegularizedForm::from_convergent(&p).expect("convergent")
    }
}

/// Commutative product of motivic zeta values `ζ(c1)···ζ(ck)`, kept sorted.
/// The empty monomial is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Composition>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut factors: Vec<Composition>) -> Self {
        factors.retain(|c| !c.parts().is_empty());
        factors.sort();
        Self(factors)
    }

    pub fn single(c: Composition) -> Self {
        Self::new(vec![c])
    }

    pub fn factors(&self) -> &[Composition] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Composition::weight).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Monomial::new(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let inner: Vec<String> = self.0[i].parts().iter().map(|n| n.to_string()).collect();
            let base = format!("z({})", inner.join(","));
            parts.push(if j - i > 1 { format!("{base}^{}", j - i) } else { base });
            i = j;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Rational linear combination of monomials in motivic zeta values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotivicCombination {
    terms: BTreeMap<Monomial, Rational>,
}

impl MotivicCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Monomial::one(), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn zeta(c: &Composition) -> Self {
        Self::term(Monomial::single(c.clone()), Rational::one())
    }

    pub fn from_regularized(r: &RegularizedForm) -> Self {
        let mut out = Self::zero();
        for (c, q) in r.terms() {
            out.add_term(Monomial::single(c.clone()), q.clone());
        }
        out
    }

    /// `normalize(s)` as a combination.
    pub fn from_symbol(s: &ISymbol) -> Self {
        Self::from_regularized(&normalize(s))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    /// Weights of the monomials present.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(Monomial::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// The common weight of all monomials; zero counts as homogeneous of
    /// any weight and reports `None`.
    pub fn homogeneous_weight(&self) -> Result<Option<u32>> {
        match self.weights().as_slice() {
            [] => Ok(None),
            [w] => Ok(Some(*w)),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// Expands every product by the shuffle product, giving a combination of
    /// single zeta values (and the unit). Equal in value; canonical modulo
    /// shuffle relations only.
    pub fn linearize(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (comp, q) in linearize_monomial(m).terms() {
                out.add_term(Monomial::single(comp.clone()), c * q);
            }
            if m.is_one() {
                out.add_term(Monomial::one(), c.clone());
            }
        }
        out
    }

    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|m| m.factors().len() <= 1)
    }

    /// Numeric value.
    pub fn period(&self, ev: &MzvEvaluator) -> Result<BigReal> {
        let ctx = ev.context();
        let mut sum = ctx.zero();
        for (m, c) in &self.terms {
            let mut v = ctx.one();
            for f in m.factors() {
                v = v.mul(&ev.mzv(f)?);
            }
            sum = sum.add(&v.mul_rational(c));
        }
        Ok(sum)
    }

    /// `Σ |coefficients|`, used to scale numeric tolerances.
    pub fn coefficient_mass(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Parses expressions such as `28*z(3,9) + 150*z(5,7) - 1/2*z(2)^2`.
    pub fn parse(s: &str) -> Result<Self> {
        parse_combination(s)
    }
}

fn linearize_cache() -> &'static Mutex<HashMap<Monomial, RegularizedForm>> {
    static CACHE: OnceLock<Mutex<HashMap<Monomial, RegularizedForm>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shuffle expansion of a product of zeta values. The unit maps to zero
/// here; callers add it separately.
fn linearize_monomial(m: &Monomial) -> RegularizedForm {
    if m.is_one() {
        return RegularizedForm::zero();
    }
    if let Some(r) = linearize_cache().lock().expect("linearize cache").get(m) {
        return r.clone();
    }
    let mut p = WordPoly::from_word(Word::empty());
    for c in m.factors() {
        p = p.shuffle(&WordPoly::from_word(composition_to_word(c)));
    }
    let r = RegularizedForm::from_convergent(&p).expect("shuffles of convergent words are convergent");
    linearize_cache().lock().expect("linearize cache").insert(m.clone(), r.clone());
    r
}

impl SeriesCoeff for MotivicCombination {
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
        self.scale(r)
    }
}

impl fmt::Display for MotivicCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialTerm {
    monomial: Vec<Composition>,
    coeff: String,
}

impl Serialize for MotivicCombination {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MonomialTerm> = self
            .terms
            .iter()
            .map(|(m, c)| MonomialTerm { monomial: m.0.clone(), coeff: format_rational(c) })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MotivicCombination {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Terms(Vec<MonomialTerm>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => parse_combination(&s).map_err(serde::de::Error::custom),
            Repr::Terms(v) => {
                let mut out = MotivicCombination::zero();
                for t in v {
                    if let Some(c) = t.monomial.iter().find(|c| !c.is_admissible()) {
                        return Err(serde::de::Error::custom(format!("composition {c} is not admissible")));
                    }
                    let q = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
                    out.add_term(Monomial::new(t.monomial), q);
                }
                Ok(out)
            }
        }
    }
}

fn parse_factor(f: &str) -> Result<(Option<Monomial>, Rational)> {
    let err = || Error::Parse(format!("invalid factor '{f}'"));
    let f = f.trim();
    let (base, power) = match f.rsplit_once('^') {
        Some((b, p)) if b.trim_end().ends_with(')') => {
            (b.trim(), p.trim().parse::<usize>().map_err(|_| err())?)
        }
        _ => (f, 1),
    };
    let inner = base
        .strip_prefix("z(")
        .or_else(|| base.strip_prefix("ζ("))
        .or_else(|| base.strip_prefix("zeta("))
        .and_then(|r| r.strip_suffix(')'));
    match inner {
        Some(inner) => {
            let c = Composition::parse(inner)?;
            if c.parts().is_empty() || !c.is_admissible() {
                return Err(Error::Inadmissible(c));
            }
            Ok((Some(Monomial::new(vec![c; power])), Rational::one()))
        }
        None => {
            if power != 1 {
                return Err(err());
            }
            Ok((None, parse_rational(base)?))
        }
    }
}

fn parse_combination(s: &str) -> Result<MotivicCombination> {
    let mut out = MotivicCombination::zero();
    // split into signed terms at top-level + and -
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !cur.trim().ends_with('^') => {
                if !cur.trim().is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else {
                    cur.clear();
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("empty combination '{s}'")));
    }
    for (neg, t) in terms {
        let mut coeff = if neg { -Rational::one() } else { Rational::one() };
        let mut mono = Monomial::one();
        for f in t.split('*') {
            match parse_factor(f)? {
                (Some(m), _) => mono = mono.times(&m),
                (None, q) => coeff *= q,
            }
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

pub(crate) fn word_composition(w: &Word) -> Composition {
    if w.is_empty() {
        Composition::default()
    } else {
        word_to_composition(w).expect("convergent word starts with 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec())
    }

    #[test]
    fn normalize_examples() {
        assert!(normalize(&ISymbol::new(0, Word(vec![1, 0]), 0)).is_zero());
        let r = normalize(&ISymbol::new(1, Word(vec![0, 0, 1]), 0));
        assert_eq!(r.coeff(&comp(&[3])), int(-1));
        assert_eq!(r.len(), 1);
        let r = normalize(&ISymbol::new(0, Word(vec![0, 1]), 1));
        assert_eq!(r.coeff(&comp(&[2])), int(-1));
        assert_eq!(normalize(&ISymbol::new(1, Word::empty(), 1)).coeff(&Composition::default()), int(1));
        assert!(normalize(&ISymbol::new(0, Word(vec![1, 1, 1]), 1)).is_zero());
    }

    #[test]
    fn parse_and_display() {
        let x = MotivicCombination::parse("28*z(3,9) + 150*z(5,7) + 168*z(7,5)").unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x.coeff(&Monomial::single(comp(&[3, 9]))), int(28));
        assert_eq!(x.to_string(), "28*z(3,9) + 150*z(5,7) + 168*z(7,5)");
        let y = MotivicCombination::parse("z(2)^2 - 5/2*z(4)").unwrap();
        assert_eq!(y.coeff(&Monomial::new(vec![comp(&[2]), comp(&[2])])), int(1));
        assert_eq!(y.coeff(&Monomial::single(comp(&[4]))), rat(-5, 2));
        assert_eq!(y.to_string(), "z(2)^2 - 5/2*z(4)");
        assert!(MotivicCombination::parse("z(2,1)").is_err());
        assert!(MotivicCombination::parse("").is_err());
        let j = serde_json::to_string(&y).unwrap();
        let back: MotivicCombination = serde_json::from_str(&j).unwrap();
        assert_eq!(back, y);
        let from_text: MotivicCombination = serde_json::from_str("\"z(3) - z(1,2)\"").unwrap();
        assert_eq!(from_text.len(), 2);
    }

    #[test]
    fn linearize_product() {
        // ζ(2)ζ(2) = 4ζ(1,3) + 2ζ(2,2) by shuffling 10 with 10
        let x = MotivicCombination::parse("z(2)^2").unwrap().linearize();
        assert_eq!(x.coeff(&Monomial::single(comp(&[1, 3]))), int(4));
        assert_eq!(x.coeff(&Monomial::single(comp(&[2, 2]))), int(2));
        assert_eq!(x.len(), 2);
        assert!(x.is_linear());
    }

    #[test]
    fn homogeneity() {
        assert_eq!(MotivicCombination::parse("z(3) + z(1,2)").unwrap().homogeneous_weight().unwrap(), Some(3));
        assert_eq!(
            MotivicCombination::parse("z(3) + z(2)").unwrap().homogeneous_weight(),
            Err(Error::NonHomogeneous)
        );
    }
}
