//! Recursive relation checking: `ξ` of weight `N` is a rational multiple of
//! `ζ^m(N)` iff `D_r ξ = 0` for every odd `3 <= r < N`.
//!
//! The Lie cofactors produced by the coaction are Lyndon compositions, which
//! are only canonical modulo shuffle products. In weight `s ∈ {3,5,7,9}` the
//! space of indecomposables is spanned by `ζ(s)`, so each cofactor is replaced
//! by `λ_c ζ^u(s)`, with `λ_c` read off an internal decomposition of `ζ^m(c)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::symbols::{ISymbol, Monomial, MotivicCombination};
use super::tensor::{coaction_dr_unchecked, TensorSum};
use crate::error::{Error, Result};
use crate::exact::{best_rational_approximation, Rational};
use crate::ihara::NoncommSeries;
use crate::numerics::identities::zagier_coefficients;
use crate::numerics::{BigReal, Context, MzvEvaluator};
use crate::words::{Composition, Word};

/// Largest denominator accepted by rational reconstruction.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Cofactor weights whose indecomposables are one-dimensional and reachable
/// by the internal decomposition.
const LIE_WEIGHTS: [u32; 4] = [3, 5, 7, 9];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Holds {
        #[serde(with = "crate::exact::serde_rational")]
        c: Rational,
    },
    Fails {
        witness: Witness,
    },
    Undecided {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn constant(&self) -> Option<&Rational> {
        match self {
            Verdict::Holds { c } => Some(c),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Undecided { .. } => "undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { c } => write!(f, "holds with c = {}", crate::exact::format_rational(c)),
            Verdict::Fails { witness } => write!(f, "fails: D_{} xi = z^u({}) ⊗ ({})", witness.r, witness.r, witness.right),
            Verdict::Undecided { reason } => write!(f, "undecided: {reason}"),
        }
    }
}

/// A nonzero graded piece `D_r ξ = ζ^u(r) ⊗ right`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub r: u32,
    pub right: MotivicCombination,
}

/// Outcome of a zero test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown(String),
}

/// Relation checker with its numeric context and memo tables.
pub struct RelationEngine {
    ev: MzvEvaluator,
    lambdas: Mutex<HashMap<Composition, Rational>>,
    decompositions: Mutex<HashMap<Composition, MotivicCombination>>,
}

impl RelationEngine {
    pub fn new(digits: u32) -> Self {
        Self::with_evaluator(MzvEvaluator::new(Context::new(digits)))
    }

    pub fn with_evaluator(ev: MzvEvaluator) -> Self {
        Self { ev, lambdas: Mutex::new(HashMap::new()), decompositions: Mutex::new(HashMap::new()) }
    }

    pub fn evaluator(&self) -> &MzvEvaluator {
        &self.ev
    }

    pub fn digits(&self) -> u32 {
        self.ev.context().digits()
    }

    fn tolerance(&self) -> BigReal {
        self.ev.context().epsilon(self.digits() as i64 - 10)
    }

    /// Rational `p/q` with `q <= 10^6` agreeing with `x` to the working
    /// tolerance, if any.
    pub fn reconstruct(&self, x: &BigReal) -> Option<Rational> {
        let q = best_rational_approximation(&x.to_rational(), &BigInt::from(MAX_DENOMINATOR));
        let err = x.sub(&self.ev.context().rational(&q)).abs();
        let scale = self.ev.context().one().add(&x.abs());
        (err.cmp_value(&self.tolerance().mul(&scale)).is_lt()).then_some(q)
    }

    /// `λ_c` with `[ζ^u(c)] = λ_c [ζ^u(s)]` in weight `s = |c|`.
    pub fn lambda(&self, c: &Composition) -> Result<Rational> {
        let s = c.weight();
        if !LIE_WEIGHTS.contains(&s) {
            return Err(Error::Unsupported(format!("indecomposables of weight {s}")));
        }
        if c.depth() == 1 {
            return Ok(Rational::one());
        }
        if let Some(l) = self.lambdas.lock().expect("lambda table").get(c) {
            return Ok(l.clone());
        }
        let d = self.decompose_zeta(c)?;
        let l = d.coeff(&Monomial::single(Composition::new(vec![s])));
        self.lambdas.lock().expect("lambda table").insert(c.clone(), l.clone());
        Ok(l)
    }

    fn decompose_zeta(&self, c: &Composition) -> Result<MotivicCombination> {
        if let Some(d) = self.decompositions.lock().expect("decomposition table").get(c) {
            return Ok(d.clone());
        }
        let d = self.decompose(&MotivicCombination::zeta(c), c.weight())?;
        self.decompositions.lock().expect("decomposition table").insert(c.clone(), d.clone());
        Ok(d)
    }

    /// `η_r = Σ_c λ_c R_c` for `D_r ξ = Σ_c [ζ^u(c)] ⊗ R_c`.
    pub fn graded_right_factor(&self, t: &TensorSum) -> Result<MotivicCombination> {
        let mut eta = MotivicCombination::zero();
        for (c, right) in t.terms() {
            let l = self.lambda(c)?;
            eta = eta.add(&right.scale(&l));
        }
        Ok(eta.linearize())
    }

    fn basis_remainder(m: u32) -> Monomial {
        if m % 2 == 1 {
            Monomial::single(Composition::new(vec![m]))
        } else {
            Monomial::new(vec![Composition::new(vec![2]); (m / 2) as usize])
        }
    }

    /// Writes a weight-`m` combination in the basis of products
    /// `ζ(2)^a ζ(s1)···ζ(sk)` with odd `s_i`. Available for `m <= 7` and
    /// `m = 9`, where these products span.
    pub fn decompose(&self, x: &MotivicCombination, m: u32) -> Result<MotivicCombination> {
        let x = x.linearize();
        if x.is_zero() {
            return Ok(MotivicCombination::zero());
        }
        if m == 0 {
            return Ok(x);
        }
        if m == 1 {
            return Err(Error::InvalidArgument("nonzero combination of weight 1".into()));
        }
        if m == 8 || m > 9 {
            return Err(Error::Unsupported(format!("decomposition in weight {m}")));
        }
        let mut coeffs: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for s in (3..m).step_by(2) {
            let t = coaction_dr_unchecked(&x, s);
            if t.is_zero() {
                continue;
            }
            let eta = self.graded_right_factor(&t)?;
            let inner = self.decompose(&eta, m - s)?;
            let zs = Composition::new(vec![s]);
            for (b, e) in inner.terms() {
                let full = b.times(&Monomial::single(zs.clone()));
                let mult = full.factors().iter().filter(|f| **f == zs).count() as i64;
                let mu = e / Rational::from_integer(mult.into());
                match coeffs.get(&full) {
                    Some(old) if *old != mu => {
                        return Err(Error::Unsupported(format!("inconsistent coefficient of {full} in weight {m}")));
                    }
                    _ => {
                        coeffs.insert(full, mu);
                    }
                }
            }
        }
        let mut out = MotivicCombination::zero();
        for (b, mu) in coeffs {
            out.add_term(b, mu);
        }
        let rem = Self::basis_remainder(m);
        let per_rem = MotivicCombination::term(rem.clone(), Rational::one()).period(&self.ev)?;
        let diff = x.period(&self.ev)?.sub(&out.period(&self.ev)?);
        let r = self
            .reconstruct(&diff.div(&per_rem))
            .ok_or_else(|| Error::Unsupported(format!("rational reconstruction of the {rem} coefficient")))?;
        out.add_term(rem, r);
        Ok(out)
    }

    /// Decides whether a weight-`m` combination vanishes motivically.
    pub fn is_zero(&self, eta: &MotivicCombination, m: u32) -> ZeroTest {
        let eta = eta.linearize();
        if eta.is_zero() {
            return ZeroTest::Zero;
        }
        for s in (3..m).step_by(2) {
            let t = coaction_dr_unchecked(&eta, s);
            if t.is_zero() {
                continue;
            }
            let inner = match self.graded_right_factor(&t) {
                Ok(x) => x,
                Err(e) => return ZeroTest::Unknown(e.to_string()),
            };
            match self.is_zero(&inner, m - s) {
                ZeroTest::Zero => {}
                other => return other,
            }
        }
        // all D_s vanish, so eta is a rational multiple of ζ(m)
        let per = match eta.period(&self.ev) {
            Ok(p) => p,
            Err(e) => return ZeroTest::Unknown(e.to_string()),
        };
        let mass = self.ev.context().rational(&(Rational::one() + eta.coefficient_mass()));
        if per.abs().cmp_value(&self.tolerance().mul(&mass)).is_lt() {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }

    /// Decides whether `ξ = c ζ^m(N)` and reports `c`.
    pub fn relation_check(&self, xi: &MotivicCombination) -> Result<Verdict> {
        let n = match xi.homogeneous_weight()? {
            None => return Ok(Verdict::Holds { c: Rational::zero() }),
            Some(n) => n,
        };
        if n < 3 {
            return Err(Error::InvalidArgument(format!("relation check needs weight at least 3, got {n}")));
        }
        for s in (3..n).step_by(2) {
            let t = coaction_dr_unchecked(xi, s);
            if t.is_zero() {
                continue;
            }
            let eta = match self.graded_right_factor(&t) {
                Ok(x) => x,
                Err(e) => return Ok(Verdict::Undecided { reason: format!("D_{s}: {e}") }),
            };
            match self.is_zero(&eta, n - s) {
                ZeroTest::Zero => {}
                ZeroTest::NonZero => return Ok(Verdict::Fails { witness: Witness { r: s, right: eta } }),
                ZeroTest::Unknown(reason) => return Ok(Verdict::Undecided { reason: format!("D_{s}: {reason}") }),
            }
        }
        let zn = self.ev.mzv(&Composition::new(vec![n]))?;
        let ratio = xi.period(&self.ev)?.div(&zn);
        Ok(match self.reconstruct(&ratio) {
            Some(c) => Verdict::Holds { c },
            None => Verdict::Undecided {
                reason: format!("no rational with denominator <= {MAX_DENOMINATOR} matches {}", ratio.to_sci_string(20)),
            },
        })
    }

    /// Motivic equality of two homogeneous combinations of the same weight.
    pub fn equal(&self, a: &MotivicCombination, b: &MotivicCombination) -> Result<bool> {
        let d = a.sub(b).linearize();
        match d.homogeneous_weight()? {
            None => Ok(true),
            Some(m) if m < 3 => Ok(matches!(self.is_zero(&d, m), ZeroTest::Zero)),
            Some(_) => Ok(self.relation_check(&d)?.constant().is_some_and(Rational::is_zero)),
        }
    }
}

/// `Z^m = Σ_w I^m(0; w; 1) w` up to the given word length.
pub fn motivic_associator(truncation: usize) -> Result<NoncommSeries<MotivicCombination>> {
    if truncation > 8 {
        return Err(Error::InvalidArgument("motivic associator supports truncation <= 8".into()));
    }
    let mut out = NoncommSeries::zero(truncation);
    for n in 0..=truncation {
        for bits in 0u32..(1 << n) {
            let w = Word((0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect());
            let c = MotivicCombination::from_symbol(&ISymbol::new(0, w.clone(), 1));
            if !c.is_zero() {
                out.add_term(w, c);
            }
        }
    }
    Ok(out)
}

fn twos(n: u32) -> Composition {
    Composition::new(vec![2; n as usize])
}

/// `Σ_r 2(-1)^r (A^r_{a,b} - B^r_{a,b}) ζ^m(2r+1) ζ^m(2^{a+b+1-r})`.
pub fn zagier_motivic_rhs(a: u32, b: u32) -> MotivicCombination {
    let k = a + b + 1;
    let mut out = MotivicCombination::zero();
    for (r, coeff) in zagier_coefficients(a, b) {
        let m = Monomial::new(vec![Composition::new(vec![2 * r + 1]), twos(k - r)]);
        out.add_term(m, coeff);
    }
    out
}

/// `ζ^m(2^a, 3, 2^b) - zagier_motivic_rhs(a, b)`.
pub fn zagier_motivic_difference(a: u32, b: u32) -> MotivicCombination {
    MotivicCombination::zeta(&crate::numerics::identities::zagier_composition(a, b)).sub(&zagier_motivic_rhs(a, b))
}

/// `ζ^m(2,...,2)` with `n` twos.
pub fn euler_block(n: u32) -> MotivicCombination {
    MotivicCombination::zeta(&twos(n))
}

/// `28 ζ^m(3,9) + 150 ζ^m(5,7) + 168 ζ^m(7,5)`.
pub fn weight12_combination() -> MotivicCombination {
    let mut out = MotivicCombination::zero();
    for (c, k) in [([3, 9], 28), ([5, 7], 150), ([7, 5], 168)] {
        out.add_term(Monomial::single(Composition::new(c.to_vec())), Rational::from_integer(k.into()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec())
    }

    #[test]
    fn lambda_weight3() {
        let e = RelationEngine::new(30);
        assert_eq!(e.lambda(&comp(&[3])).unwrap(), rat(1, 1));
        // ζ(1,2) = ζ(3)
        assert_eq!(e.lambda(&comp(&[1, 2])).unwrap(), rat(1, 1));
    }

    #[test]
    fn decompose_weight5() {
        let e = RelationEngine::new(40);
        // ζ(2,3) = 3ζ(2)ζ(3) - 11/2 ζ(5)
        let d = e.decompose(&MotivicCombination::zeta(&comp(&[2, 3])), 5).unwrap();
        assert_eq!(d.coeff(&Monomial::single(comp(&[5]))), rat(-11, 2));
        assert_eq!(d.coeff(&Monomial::new(vec![comp(&[2]), comp(&[3])])), rat(3, 1));
    }

    #[test]
    fn zeta2_squared() {
        let e = RelationEngine::new(50);
        let v = e.relation_check(&MotivicCombination::parse("z(2)^2").unwrap()).unwrap();
        assert_eq!(v, Verdict::Holds { c: rat(5, 2) });
    }

    #[test]
    fn weight12() {
        let e = RelationEngine::new(50);
        let v = e.relation_check(&weight12_combination()).unwrap();
        assert_eq!(v, Verdict::Holds { c: rat(5197, 691) });
        let v = e.relation_check(&MotivicCombination::zeta(&comp(&[3, 9]))).unwrap();
        assert!(matches!(v, Verdict::Fails { .. }), "{v:?}");
    }

    #[test]
    fn zagier_rhs_small() {
        assert_eq!(zagier_motivic_rhs(0, 0), MotivicCombination::zeta(&comp(&[3])));
        let e = RelationEngine::new(50);
        for (a, b) in [(0, 1), (1, 0), (1, 1)] {
            let v = e.relation_check(&zagier_motivic_difference(a, b)).unwrap();
            assert_eq!(v, Verdict::Holds { c: Rational::zero() }, "a={a} b={b}");
        }
    }

    #[test]
    fn product_is_not_single_zeta() {
        let e = RelationEngine::new(40);
        let v = e.relation_check(&MotivicCombination::parse("z(2)*z(3)").unwrap()).unwrap();
        assert!(matches!(v, Verdict::Fails { witness: Witness { r: 3, .. } }));
    }

    #[test]
    fn associator_low_weight() {
        let z = motivic_associator(3).unwrap();
        let z2 = MotivicCombination::zeta(&comp(&[2]));
        assert!(z.get(&Word::empty()).unwrap().coeff(&Monomial::one()).is_one());
        assert_eq!(z.get(&Word(vec![1, 0])).unwrap(), &z2);
        assert_eq!(z.get(&Word(vec![0, 1])).unwrap(), &z2.scale(&rat(-1, 1)));
        assert!(z.get(&Word(vec![0])).is_none());
        let e = RelationEngine::new(40);
        let z3 = MotivicCombination::zeta(&comp(&[3]));
        let expect = [([0, 0, 1], 1), ([0, 1, 0], -2), ([1, 0, 0], 1), ([1, 1, 0], 1), ([1, 0, 1], -2), ([0, 1, 1], 1)];
        for (w, k) in expect {
            let got = z.get(&Word(w.to_vec())).cloned().unwrap_or_default();
            assert!(e.equal(&got, &z3.scale(&rat(k, 1))).unwrap(), "{w:?}");
        }
        for w in [[0, 0, 0], [1, 1, 1]] {
            assert!(z.get(&Word(w.to_vec())).is_none());
        }
    }
}
