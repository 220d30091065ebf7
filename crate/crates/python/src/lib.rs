//! Python module `pymzv`: thin wrappers over mzv-core. Exact results come
//! back as strings or Python ints, numbers as decimal strings.

use mzv_core::coaction::{coaction_d_combination, coaction_dr, MotivicCombination, RelationEngine};
use mzv_core::exact::format_rational;
use mzv_core::ihara::{ihara_compose as compose, parse_series, IharaTakao};
use mzv_core::modular::{cocycle as cocycle_series, eisenstein_cocycle_check, Form, GammaElt};
use mzv_core::numerics::{BigComplex, Context, MzvEvaluator};
use mzv_core::words::{self, Composition, Word};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: mzv_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn context(digits: u32) -> PyResult<Context> {
    if digits < 15 {
        return Err(PyValueError::new_err("digits must be at least 15"));
    }
    Ok(Context::new(digits))
}

fn composition(parts: Vec<u32>) -> PyResult<Composition> {
    if parts.contains(&0) {
        return Err(PyValueError::new_err("composition parts must be positive"));
    }
    Ok(Composition::new(parts))
}

/// Shuffle product of two 0/1 words as a list of (word, coefficient) pairs.
#[pyfunction]
fn shuffle(u: &str, v: &str) -> PyResult<Vec<(String, String)>> {
    let p = words::shuffle(&Word::parse(u).map_err(err)?, &Word::parse(v).map_err(err)?);
    Ok(p.terms().map(|(w, c)| (w.letters().iter().map(|a| a.to_string()).collect(), format_rational(c))).collect())
}

/// Shuffle regularization of a word as (composition, coefficient) pairs.
#[pyfunction]
fn regularize(word: &str) -> PyResult<Vec<(Vec<u32>, String)>> {
    let r = words::shuffle_regularize(&Word::parse(word).map_err(err)?);
    Ok(r.terms().map(|(c, q)| (c.parts().to_vec(), format_rational(q))).collect())
}

/// d_0, ..., d_max from 1/(1-t^2-t^3).
#[pyfunction]
fn dims(max: u32) -> Vec<BigInt> {
    let s = words::dimension_series(max as usize);
    (0..=max as usize).map(|n| s.coeff(n).to_integer()).collect()
}

/// Lyndon words over letters of the given weights, as lists of weights.
#[pyfunction]
#[pyo3(signature = (weights, max_weight))]
fn lyndon(weights: Vec<u32>, max_weight: u32) -> Vec<Vec<u32>> {
    words::lyndon_words(&weights, max_weight).into_iter().map(|w| w.iter().map(|&i| weights[i]).collect()).collect()
}

/// ζ(n1, ..., nr) as a decimal string.
#[pyfunction]
#[pyo3(signature = (parts, digits = 50))]
fn mzv(parts: Vec<u32>, digits: u32) -> PyResult<String> {
    let ev = MzvEvaluator::new(context(digits)?);
    Ok(ev.mzv(&composition(parts)?).map_err(err)?.to_decimal_string(digits as usize))
}

/// Infinitesimal coaction of a combination such as "z(2,3) - 3*z(2)*z(3)".
#[pyfunction]
#[pyo3(signature = (expr, r = None))]
fn coaction(expr: &str, r: Option<u32>) -> PyResult<String> {
    let x = MotivicCombination::parse(expr).map_err(err)?;
    let d = match r {
        Some(r) => coaction_dr(&x, r).map_err(err)?,
        None => coaction_d_combination(&x),
    };
    Ok(if d.is_zero() { "0".into() } else { d.to_string() })
}

/// Relation verdict as a dict: {"verdict": "holds", "c": "5197/691"}, etc.
#[pyfunction]
#[pyo3(signature = (expr, digits = 50))]
fn check_relation<'py>(py: Python<'py>, expr: &str, digits: u32) -> PyResult<Bound<'py, PyAny>> {
    let x = MotivicCombination::parse(expr).map_err(err)?;
    context(digits)?;
    let v = RelationEngine::new(digits).relation_check(&x).map_err(err)?;
    let value = serde_json::to_value(&v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Ihara composition a∘g of two series given as text, e.g. "1 + x0x1".
#[pyfunction]
#[pyo3(signature = (a, g, truncation = 8))]
fn ihara_compose(a: &str, g: &str, truncation: usize) -> PyResult<String> {
    let a = parse_series(a, truncation).map_err(err)?;
    let g = parse_series(g, truncation).map_err(err)?;
    Ok(compose(&a, &g).map_err(err)?.to_string())
}

/// True when {σ3,σ9} - 3{σ5,σ7} vanishes in depth two.
#[pyfunction]
fn ihara_takao() -> PyResult<bool> {
    Ok(IharaTakao::compute().map_err(err)?.vanishes())
}

/// Residual of the depth-one Eisenstein cocycle against its closed form,
/// and the ζ(k-1) read off from it.
#[pyfunction]
#[pyo3(signature = (weight, digits = 50))]
fn eisenstein_check(weight: u32, digits: u32) -> PyResult<(String, String)> {
    let c = eisenstein_cocycle_check(weight, &context(digits)?).map_err(err)?;
    Ok((c.residual.to_sci_string(3), c.extracted_zeta.to_decimal_string(digits as usize - 10)))
}

/// Cocycle C_γ as a dict keyed by bar words ("e4|e10"), each a nested
/// coefficient table of {"re", "im"} strings.
#[pyfunction]
#[pyo3(signature = (gamma, forms, depth = 1, tau = "i", digits = 50))]
fn cocycle<'py>(
    py: Python<'py>,
    gamma: &str,
    forms: &str,
    depth: usize,
    tau: &str,
    digits: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let ctx = context(digits)?;
    let g: GammaElt = gamma.parse().map_err(err)?;
    let forms = Form::parse_list(forms).map_err(err)?;
    let tau = BigComplex::parse(tau, &ctx).map_err(err)?;
    let c = cocycle_series(&g, &tau, &forms, depth, &ctx).map_err(err)?;
    json_to_py(py, &c.to_json(digits as usize - 10))
}

#[pymodule]
fn pymzv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(shuffle, m)?)?;
    m.add_function(wrap_pyfunction!(regularize, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(lyndon, m)?)?;
    m.add_function(wrap_pyfunction!(mzv, m)?)?;
    m.add_function(wrap_pyfunction!(coaction, m)?)?;
    m.add_function(wrap_pyfunction!(check_relation, m)?)?;
    m.add_function(wrap_pyfunction!(ihara_compose, m)?)?;
    m.add_function(wrap_pyfunction!(ihara_takao, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_check, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle, m)?)?;
    Ok(())
}
