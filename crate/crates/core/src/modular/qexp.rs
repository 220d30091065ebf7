//! q-expansions of the forms entering the iterated Eichler integrals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bernoulli, Rational};

/// `Σ_{n <= M} a_n q^n` for a modular form of weight `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QExpansion {
    pub weight: u32,
    #[serde(with = "rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl QExpansion {
    pub fn new(weight: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if !weight.is_multiple_of(2) || weight < 4 {
            return Err(Error::InvalidArgument(format!("weight {weight} must be even and at least 4")));
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument("q-expansion needs a_0 and a_1".into()));
        }
        Ok(Self { weight, coeffs })
    }

    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

/// `e_{2k} = -B_{2k}/(4k) + Σ σ_{2k-1}(n) q^n`; `weight` is `2k`.
pub fn eisenstein(weight: u32, order: usize) -> Result<QExpansion> {
    if !weight.is_multiple_of(2) || weight < 4 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight {weight} must be even and at least 4")));
    }
    let order = order.max(1);
    let mut coeffs = vec![-bernoulli(weight as usize) / Rational::from_integer(BigInt::from(2 * weight))];
    for n in 1..=order {
        let mut s = BigInt::zero();
        for d in 1..=n {
            if n % d == 0 {
                s += num_traits::pow(BigInt::from(d), weight as usize - 1);
            }
        }
        coeffs.push(Rational::from_integer(s));
    }
    QExpansion::new(weight, coeffs)
}

/// `Δ = q Π (1 - q^n)^24`.
pub fn delta_qexp(order: usize) -> QExpansion {
    let order = order.max(1);
    // Π (1 - q^n) up to q^{order-1}
    let mut eta = vec![BigInt::zero(); order];
    eta[0] = BigInt::one();
    for n in 1..order {
        for i in (n..order).rev() {
            let t = eta[i - n].clone();
            eta[i] -= t;
        }
    }
    let mul = |a: &[BigInt], b: &[BigInt]| {
        let mut c = vec![BigInt::zero(); order];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(order - i) {
                c[i + j] += x * y;
            }
        }
        c
    };
    let e2 = mul(&eta, &eta);
    let e4 = mul(&e2, &e2);
    let e8 = mul(&e4, &e4);
    let e16 = mul(&e8, &e8);
    let e24 = mul(&e16, &e8);
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend(e24.into_iter().map(Rational::from_integer));
    QExpansion { weight: 12, coeffs }
}

/// The constant-term part `a_0`, as a form with vanishing higher coefficients.
pub fn residue_form(f: &QExpansion) -> QExpansion {
    let mut coeffs = vec![Rational::zero(); f.coeffs.len()];
    coeffs[0] = f.coeffs[0].clone();
    QExpansion { weight: f.weight, coeffs }
}

/// Named forms. The derived order (Eisenstein series by weight, then `Δ`)
/// fixes the canonical ordering of the symbols `A_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    Eisenstein(u32),
    Delta,
}

impl Form {
    pub fn weight(&self) -> u32 {
        match self {
            Form::Eisenstein(w) => *w,
            Form::Delta => 12,
        }
    }

    pub fn qexp(&self, order: usize) -> Result<QExpansion> {
        match self {
            Form::Eisenstein(w) => eisenstein(*w, order),
            Form::Delta => Ok(delta_qexp(order)),
        }
    }

    /// Parses a comma-separated list such as `e4,e10,delta`, sorted canonically.
    pub fn parse_list(s: &str) -> Result<Vec<Form>> {
        let mut v = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<Vec<Form>>>()?;
        if v.is_empty() {
            return Err(Error::Parse("empty form list".into()));
        }
        v.sort();
        Ok(v)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Eisenstein(w) => write!(f, "e{w}"),
            Form::Delta => write!(f, "delta"),
        }
    }
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "delta" || t == "d" || t == "Δ" {
            return Ok(Form::Delta);
        }
        let w: u32 = t
            .strip_prefix('e')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Parse(format!("unknown form '{s}'")))?;
        if !w.is_multiple_of(2) || w < 4 {
            return Err(Error::Parse(format!("Eisenstein weight {w} must be even and at least 4")));
        }
        Ok(Form::Eisenstein(w))
    }
}

impl Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}
