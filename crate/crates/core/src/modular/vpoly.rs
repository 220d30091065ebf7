//! `SL_2(Z)` elements and polynomial coefficient spaces `V_{n1} ⊗ ... ⊗ V_{nd}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::numerics::{BigComplex, BigReal};

/// `(a b; c d)` with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaElt {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaElt {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidArgument(format!("({a} {b}; {c} {d}) has determinant {}", a * d - b * c)));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn s() -> Self {
        Self { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn t() -> Self {
        Self { a: 1, b: 1, c: 0, d: 1 }
    }

    /// `U = TS`.
    pub fn u() -> Self {
        Self::t().mul(&Self::s())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `(aτ + b)/(cτ + d)`.
    pub fn apply(&self, tau: &BigComplex) -> BigComplex {
        let num = tau.mul_int(self.a).add(&BigComplex::from_real(BigReal::from_int(self.b, tau.precision())));
        let den = tau.mul_int(self.c).add(&BigComplex::from_real(BigReal::from_int(self.d, tau.precision())));
        num.div(&den)
    }

    /// Matrix of `P ↦ P|_γ` on `V_n` in the basis `X^e Y^{n-e}`: entry `[e][e2]`
    /// is the coefficient of `X^{e2} Y^{n-e2}` in `(aX+bY)^e (cX+dY)^{n-e}`.
    pub fn action_matrix(&self, n: u32) -> Vec<Vec<BigInt>> {
        let n = n as usize;
        let expand = |p: i64, q: i64, m: usize| -> Vec<BigInt> {
            // (pX + qY)^m by powers of X
            (0..=m)
                .map(|i| binomial(m as u64, i as u64) * num_traits::pow(BigInt::from(p), i) * num_traits::pow(BigInt::from(q), m - i))
                .collect()
        };
        (0..=n)
            .map(|e| {
                let u = expand(self.a, self.b, e);
                let v = expand(self.c, self.d, n - e);
                let mut row = vec![BigInt::zero(); n + 1];
                for (i, x) in u.iter().enumerate() {
                    for (j, y) in v.iter().enumerate() {
                        row[i + j] += x * y;
                    }
                }
                row
            })
            .collect()
    }
}

impl fmt::Display for GammaElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for GammaElt {
    type Err = Error;

    /// A word in `S`, `T`, `U` (such as `ST`), or four integers `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains(',') {
            let v: Vec<i64> = t
                .split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("invalid matrix '{s}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 4 {
                return Err(Error::Parse(format!("matrix '{s}' needs four entries")));
            }
            return Self::new(v[0], v[1], v[2], v[3]);
        }
        if t.is_empty() {
            return Err(Error::Parse("empty group element".into()));
        }
        let mut g = Self::identity();
        for ch in t.chars() {
            let h = match ch.to_ascii_uppercase() {
                'S' => Self::s(),
                'T' => Self::t(),
                'U' => Self::u(),
                'I' | '1' => Self::identity(),
                _ => return Err(Error::Parse(format!("unknown generator '{ch}' in '{s}'"))),
            };
            g = g.mul(&h);
        }
        Ok(g)
    }
}

/// Element of `V_{n1} ⊗ ... ⊗ V_{nd}`, stored densely. The coefficient of
/// `Π X_s^{e_s} Y_s^{n_s - e_s}` sits at the mixed-radix index of `(e_1..e_d)`,
/// first slot most significant. Depth 0 is the scalar line.
#[derive(Clone, Debug, PartialEq)]
pub struct VTensor {
    degrees: Vec<u32>,
    coeffs: Vec<BigComplex>,
}

/// A single factor `V_n`.
pub type VPolynomial = VTensor;

impl VTensor {
    pub fn zero(degrees: Vec<u32>, prec: u64) -> Self {
        let len = degrees.iter().map(|&n| n as usize + 1).product();
        Self { degrees, coeffs: vec![BigComplex::zero(prec); len] }
    }

    pub fn scalar(c: BigComplex) -> Self {
        Self { degrees: Vec::new(), coeffs: vec![c] }
    }

    pub fn one(prec: u64) -> Self {
        Self::scalar(BigComplex::one(prec))
    }

    /// `Σ_e coeffs[e] X^e Y^{n-e}`.
    pub fn polynomial(n: u32, coeffs: Vec<BigComplex>) -> Result<Self> {
        if coeffs.len() != n as usize + 1 {
            return Err(Error::InvalidArgument(format!("V_{n} needs {} coefficients", n + 1)));
        }
        Ok(Self { degrees: vec![n], coeffs })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn depth(&self) -> usize {
        self.degrees.len()
    }

    pub fn index(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.degrees).fold(0, |acc, (&e, &n)| acc * (n as usize + 1) + e as usize)
    }

    /// X-exponents of a flat index.
    pub fn exponents(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.degrees.len()];
        for s in (0..self.degrees.len()).rev() {
            let r = self.degrees[s] as usize + 1;
            out[s] = (idx % r) as u32;
            idx /= r;
        }
        out
    }

    pub fn get(&self, exps: &[u32]) -> &BigComplex {
        &self.coeffs[self.index(exps)]
    }

    pub fn get_mut(&mut self, exps: &[u32]) -> &mut BigComplex {
        let i = self.index(exps);
        &mut self.coeffs[i]
    }

    fn check_shape(&self, o: &Self) -> Result<()> {
        if self.degrees != o.degrees {
            return Err(Error::InvalidArgument(format!("shape {:?} vs {:?}", self.degrees, o.degrees)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_shape(o)?;
        Ok(Self { degrees: self.degrees.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_shape(o)?;
        Ok(Self { degrees: self.degrees.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn neg(&self) -> Self {
        Self { degrees: self.degrees.clone(), coeffs: self.coeffs.iter().map(BigComplex::neg).collect() }
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        Self { degrees: self.degrees.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// `self ⊗ o`, slots of `self` first.
    pub fn tensor(&self, o: &Self) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&o.degrees);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * o.coeffs.len());
        for a in &self.coeffs {
            for b in &o.coeffs {
                coeffs.push(a.mul(b));
            }
        }
        Self { degrees, coeffs }
    }

    /// Right action of `γ` in every slot.
    pub fn act(&self, g: &GammaElt) -> Self {
        let mut cur = self.coeffs.clone();
        let sizes: Vec<usize> = self.degrees.iter().map(|&n| n as usize + 1).collect();
        for (s, &n) in self.degrees.iter().enumerate() {
            let m = g.action_matrix(n);
            let inner: usize = sizes[s + 1..].iter().product();
            let outer: usize = sizes[..s].iter().product();
            let r = sizes[s];
            let prec = cur.first().map_or(64, BigComplex::precision);
            let mut next = vec![BigComplex::zero(prec); cur.len()];
            for o in 0..outer {
                for i in 0..inner {
                    for (e, row) in m.iter().enumerate() {
                        let src = &cur[(o * r + e) * inner + i];
                        if src.is_zero() {
                            continue;
                        }
                        for (e2, k) in row.iter().enumerate() {
                            if k.is_zero() {
                                continue;
                            }
                            let dst = &mut next[(o * r + e2) * inner + i];
                            *dst = dst.add(&src.mul_bigint(k));
                        }
                    }
                }
            }
            cur = next;
        }
        Self { degrees: self.degrees.clone(), coeffs: cur }
    }

    pub fn max_abs(&self) -> BigReal {
        let prec = self.coeffs.first().map_or(64, BigComplex::precision);
        self.coeffs.iter().map(BigComplex::abs).fold(BigReal::zero(prec), |m, x| if x.cmp_value(&m).is_gt() { x } else { m })
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<BigReal> {
        Ok(self.sub(o)?.max_abs())
    }

    /// Readable form such as `(1.5 + 0i) X1^2 Y2`.
    pub fn to_string_digits(&self, sig: usize) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = self.exponents(i);
            let mut mono = String::new();
            for (s, (&e, &n)) in exps.iter().zip(&self.degrees).enumerate() {
                let sub = if self.degrees.len() > 1 { (s + 1).to_string() } else { String::new() };
                for (var, p) in [("X", e), ("Y", n - e)] {
                    match p {
                        0 => {}
                        1 => mono.push_str(&format!(" {var}{sub}")),
                        _ => mono.push_str(&format!(" {var}{sub}^{p}")),
                    }
                }
            }
            parts.push(format!("({}){}", c.to_string_digits(sig), mono));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for VTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(f.precision().unwrap_or(20)))
    }
}

/// `{ "re": "...", "im": "..." }` with the requested number of significant digits.
pub fn complex_json(c: &BigComplex, sig: usize) -> serde_json::Value {
    serde_json::json!({ "re": c.re.to_decimal_string(sig), "im": c.im.to_decimal_string(sig) })
}

impl VTensor {
    /// JSON with `degrees` and the dense coefficient array, in index order.
    pub fn to_json(&self, sig: usize) -> serde_json::Value {
        serde_json::json!({
            "degrees": self.degrees,
            "coeffs": self.coeffs.iter().map(|c| complex_json(c, sig)).collect::<Vec<_>>(),
        })
    }
}

impl Serialize for VTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VTensor", 2)?;
        st.serialize_field("degrees", &self.degrees)?;
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(|c| complex_json(c, 40)).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Context;
    use proptest::prelude::*;

    fn poly(n: u32, c: &[i64], prec: u64) -> VTensor {
        VTensor::polynomial(n, c.iter().map(|&x| BigComplex::from_real(BigReal::from_int(x, prec))).collect()).unwrap()
    }

    #[test]
    fn generators() {
        let p = 128;
        let x = poly(1, &[0, 1], p);
        let y = poly(1, &[1, 0], p);
        assert_eq!(x.act(&GammaElt::s()), poly(1, &[-1, 0], p));
        assert_eq!(y.act(&GammaElt::s()), poly(1, &[0, 1], p));
        assert_eq!(x.act(&GammaElt::identity()), x);
        assert!(GammaElt::new(1, 1, 1, 1).is_err());
        assert_eq!("ST".parse::<GammaElt>().unwrap(), GammaElt::s().mul(&GammaElt::t()));
        assert_eq!("0,-1,1,0".parse::<GammaElt>().unwrap(), GammaElt::s());
        // S^2 = -1, (ST)^3 = -1
        let st = GammaElt::s().mul(&GammaElt::t());
        assert_eq!(st.mul(&st).mul(&st), GammaElt::new(-1, 0, 0, -1).unwrap());
    }

    #[test]
    fn apply_moebius() {
        let ctx = Context::new(30);
        let tau = BigComplex::parse("2i", &ctx).unwrap();
        let s = GammaElt::s().apply(&tau);
        assert!(s.sub(&BigComplex::parse("0.5i", &ctx).unwrap()).abs().abs_below_pow10(40));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn right_action(c in proptest::collection::vec(-9i64..10, 5), w1 in 0usize..4, w2 in 0usize..4) {
            let gens = [GammaElt::s(), GammaElt::t(), GammaElt::u(), GammaElt::t().inverse()];
            let (g, h) = (gens[w1], gens[w2]);
            let p = poly(4, &c, 128);
            prop_assert_eq!(p.act(&g).act(&h), p.act(&g.mul(&h)));
        }

        #[test]
        fn tensor_action(a in proptest::collection::vec(-5i64..6, 3), b in proptest::collection::vec(-5i64..6, 2)) {
            let (p, q) = (poly(2, &a, 128), poly(1, &b, 128));
            let g = GammaElt::u();
            prop_assert_eq!(p.tensor(&q).act(&g), p.act(&g).tensor(&q.act(&g)));
        }
    }
}
