//! The infinitesimal coaction
//! `D I(a0; a1..an; a_{n+1}) = Σ_{p<q} [I^u(a_p; a_{p+1}..a_q; a_{q+1})] ⊗ I^m(a0; a1..a_p, a_{q+1}..a_n; a_{n+1})`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::symbols::{normalize, word_composition, ISymbol, Monomial, MotivicCombination};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::words::{composition_to_word, is_lyndon, Composition, Word, WordPoly};

/// Letters compared with `1 < 0`, so that Lyndon words of length at least
/// two start with 1 and end with 0.
fn lie_key(w: &[u8]) -> Vec<u8> {
    w.iter().map(|a| 1 - a).collect()
}

/// Chen–Fox–Lyndon factorization (Duval) for the `1 < 0` order.
fn lyndon_factorization(w: &[u8]) -> Vec<Vec<u8>> {
    let key = lie_key(w);
    let n = key.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut j, mut k) = (i + 1, i);
        while j < n && key[k] <= key[j] {
            if key[k] < key[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(w[i..i + j - k].to_vec());
            i += j - k;
        }
    }
    out
}

fn lie_cache() -> &'static Mutex<HashMap<Word, WordPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, WordPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Projection of a convergent word onto the span of Lyndon words, modulo
/// shuffle products of convergent words.
pub fn indecomposable_part(w: &Word) -> WordPoly {
    if w.is_empty() {
        return WordPoly::zero();
    }
    if is_lyndon(&lie_key(w.letters())) {
        return WordPoly::from_word(w.clone());
    }
    if let Some(p) = lie_cache().lock().expect("lie cache").get(w) {
        return p.clone();
    }
    let factors = lyndon_factorization(w.letters());
    let mut prod = WordPoly::from_word(Word::empty());
    for f in &factors {
        prod = prod.shuffle(&WordPoly::from_word(Word(f.clone())));
    }
    // the concatenation of the factors is the largest word of their shuffle
    let lead = prod.coeff(w);
    debug_assert!(!lead.is_zero());
    let key = lie_key(w.letters());
    let mut out = WordPoly::zero();
    for (u, c) in prod.terms() {
        if u == w {
            continue;
        }
        debug_assert!(lie_key(u.letters()) < key);
        out.add_scaled(&indecomposable_part(u), &(-c / &lead));
    }
    lie_cache().lock().expect("lie cache").insert(w.clone(), out.clone());
    out
}

/// Class of a unipotent symbol in the Lie coalgebra, as a combination of
/// Lyndon compositions. Weight ≤ 2 and single even zeta values vanish.
pub fn lie_cofactor(s: &ISymbol) -> BTreeMap<Composition, Rational> {
    let mut out: BTreeMap<Composition, Rational> = BTreeMap::new();
    if s.weight() <= 2 {
        return out;
    }
    for (c, q) in normalize(s).terms() {
        for (u, r) in indecomposable_part(&composition_to_word(c)).terms() {
            let key = word_composition(u);
            if key.depth() == 1 && key.weight().is_multiple_of(2) {
                continue;
            }
            let e = out.entry(key.clone()).or_insert_with(Rational::zero);
            *e += q * r;
            if e.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

/// `Σ [ζ^u(c)] ⊗ R_c`, keyed by Lyndon cofactor compositions `c`, with right
/// factors kept linearized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorSum {
    terms: BTreeMap<Composition, MotivicCombination>,
}

impl TensorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &MotivicCombination)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, c: &Composition) -> Option<&MotivicCombination> {
        self.terms.get(c)
    }

    pub fn add_term(&mut self, cofactor: Composition, right: &MotivicCombination) {
        let right = right.linearize();
        if right.is_zero() {
            return;
        }
        match self.terms.entry(cofactor) {
            Entry::Vacant(e) => {
                e.insert(right);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().add(&right);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, r) in &other.terms {
            out.add_term(c.clone(), r);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (c, r) in &self.terms {
            out.add_term(c.clone(), &r.scale(s));
        }
        out
    }

    /// `(1 ⊗ x) · self`.
    pub fn right_multiply(&self, x: &MotivicCombination) -> Self {
        let mut out = Self::zero();
        for (c, r) in &self.terms {
            out.add_term(c.clone(), &r.mul(x));
        }
        out
    }

    /// Terms whose cofactor has weight `r`.
    pub fn weight_part(&self, r: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(c, _)| c.weight() == r).map(|(c, m)| (c.clone(), m.clone())).collect() }
    }
}

impl fmt::Display for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, r)| {
                let inner: Vec<String> = c.parts().iter().map(|n| n.to_string()).collect();
                format!("[zu({})] ⊗ ({})", inner.join(","), r)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TensorTerm<'a> {
    cofactor: &'a Composition,
    right: &'a MotivicCombination,
}

impl Serialize for TensorSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TensorTerm> = self.terms.iter().map(|(c, r)| TensorTerm { cofactor: c, right: r }).collect();
        v.serialize(s)
    }
}

/// The coaction of a single symbol restricted to cofactor weight in `weights`
/// (all weights when `None`).
fn coaction_symbol_filtered(s: &ISymbol, weight: Option<usize>) -> TensorSum {
    let a = s.letters();
    let n = s.word.len();
    let mut out = TensorSum::zero();
    for p in 0..n {
        for q in p + 1..=n {
            if weight.is_some_and(|r| q - p != r) || q - p < 3 {
                continue;
            }
            let cof = ISymbol::new(a[p], Word(a[p + 1..=q].to_vec()), a[q + 1]);
            let lie = lie_cofactor(&cof);
            if lie.is_empty() {
                continue;
            }
            let mut rest = a[1..=p].to_vec();
            rest.extend_from_slice(&a[q + 1..=n]);
            let right = MotivicCombination::from_symbol(&ISymbol::new(a[0], Word(rest), a[n + 1]));
            if right.is_zero() {
                continue;
            }
            for (c, lam) in lie {
                out.add_term(c, &right.scale(&lam));
            }
        }
    }
    out
}

pub fn coaction_d(s: &ISymbol) -> TensorSum {
    coaction_symbol_filtered(s, None)
}

fn monomial_coaction(m: &Monomial, weight: Option<usize>) -> TensorSum {
    // derivation rule over the factors
    let factors = m.factors();
    let mut out = TensorSum::zero();
    for i in 0..factors.len() {
        let d = coaction_symbol_filtered(&ISymbol::zeta(&factors[i]), weight);
        if d.is_zero() {
            continue;
        }
        let mut others = factors.to_vec();
        others.remove(i);
        let rest = MotivicCombination::term(Monomial::new(others), Rational::one());
        out = out.add(&d.right_multiply(&rest));
    }
    out
}

/// `D` extended to products as a derivation.
pub fn coaction_d_combination(x: &MotivicCombination) -> TensorSum {
    let mut out = TensorSum::zero();
    for (m, c) in x.terms() {
        out = out.add(&monomial_coaction(m, None).scale(c));
    }
    out
}

/// The part of `D` with cofactor weight `r` (odd, `3 <= r < weight`).
pub fn coaction_dr(x: &MotivicCombination, r: u32) -> Result<TensorSum> {
    if r.is_multiple_of(2) || r < 3 {
        return Err(Error::InvalidArgument(format!("D_{r}: r must be odd and at least 3")));
    }
    if let Some(n) = x.homogeneous_weight()? {
        if r >= n {
            return Err(Error::InvalidArgument(format!("D_{r}: r must be below the weight {n}")));
        }
    }
    Ok(coaction_dr_unchecked(x, r))
}

pub(crate) fn coaction_dr_unchecked(x: &MotivicCombination, r: u32) -> TensorSum {
    let mut out = TensorSum::zero();
    for (m, c) in x.terms() {
        out = out.add(&monomial_coaction(m, Some(r as usize)).scale(c));
    }
    out
}

pub fn is_unit_right(x: &MotivicCombination) -> bool {
    x.len() == 1 && x.coeff(&Monomial::one()).is_one()
}
