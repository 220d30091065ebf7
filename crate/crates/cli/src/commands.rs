//! Handlers for the algebraic and numerical commands.

use std::path::Path;

use mzv_core::coaction::{coaction_d_combination, coaction_dr, motivic_associator, MotivicCombination, RelationDb};
use mzv_core::coaction::db::canonical_key;
use mzv_core::coaction::RelationEngine;
use mzv_core::exact::format_rational;
use mzv_core::ihara::{format_word_x, ihara_compose as compose, parse_series, IharaTakao};
use mzv_core::numerics::identities::{ramanujan_zeta3_check, zagier_identity_check};
use mzv_core::numerics::{BigReal, Context, MzvEvaluator};
use mzv_core::words::{
    bk_series as bk, dimension_series, hoffman_count, lyndon_weight, lyndon_words, shuffle as shuffle_words,
    shuffle_regularize, Composition, Word,
};
use serde_json::json;

use crate::{CliError, Config, Output, Status};

type CmdResult = Result<Status, CliError>;

/// `10^{-(digits - margin)}`: the tolerance for a check run at `digits`.
pub(crate) fn tolerance(ctx: &Context, margin: u32) -> BigReal {
    ctx.epsilon(ctx.digits().saturating_sub(margin) as i64)
}

pub(crate) fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::CheckFailed
    }
}

pub(crate) fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Significant digits shown for a value computed at `digits`.
pub(crate) fn shown_digits(cfg: &Config) -> usize {
    cfg.precision.saturating_sub(10).max(5) as usize
}

pub(crate) fn shuffle(u: &str, v: &str, out: &mut Output) -> CmdResult {
    let (u, v) = (Word::parse(u)?, Word::parse(v)?);
    let p = shuffle_words(&u, &v);
    if out.is_json() {
        out.json(&json!({ "u": u, "v": v, "shuffle": p }))?;
    } else {
        out.line(p.to_string())?;
    }
    Ok(Status::Ok)
}

pub(crate) fn regularize(word: &str, out: &mut Output) -> CmdResult {
    let w = Word::parse(word)?;
    let r = shuffle_regularize(&w);
    if out.is_json() {
        out.json(&json!({ "word": w, "regularized": r }))?;
    } else {
        out.line(r.to_string())?;
    }
    Ok(Status::Ok)
}

pub(crate) fn lyndon(weights: &[u32], max_weight: u32, out: &mut Output) -> CmdResult {
    if weights.is_empty() || weights.contains(&0) {
        return Err(CliError::Usage("weights must be positive".into()));
    }
    let words = lyndon_words(weights, max_weight);
    let mut sorted: Vec<(u32, Vec<u32>)> =
        words.iter().map(|w| (lyndon_weight(w, weights), w.iter().map(|&i| weights[i]).collect())).collect();
    sorted.sort();
    for (wt, letters) in &sorted {
        if out.is_json() {
            out.json(&json!({ "weight": wt, "letters": letters }))?;
        } else {
            let s: Vec<String> = letters.iter().map(u32::to_string).collect();
            out.line(format!("{wt}: ({})", s.join(",")))?;
        }
    }
    if !out.is_json() {
        out.line(format!("count: {}", sorted.len()))?;
    }
    Ok(Status::Ok)
}

pub(crate) fn dims(max: u32, out: &mut Output) -> CmdResult {
    let series = dimension_series(max as usize);
    for n in 0..=max {
        let d = series.coeff(n as usize).to_integer();
        if out.is_json() {
            out.json(&json!({ "n": n, "d": d.to_string(), "hoffman": hoffman_count(n).to_string() }))?;
        } else {
            out.line(format!("{n}: {d}"))?;
        }
    }
    Ok(Status::Ok)
}

pub(crate) fn bk_series(max: usize, depth: usize, out: &mut Output) -> CmdResult {
    let by_depth = bk(max, depth);
    for n in 0..=max {
        let row: Vec<String> = by_depth.iter().map(|s| format_rational(&s.coeff(n))).collect();
        if out.is_json() {
            out.json(&json!({ "n": n, "by_depth": row }))?;
        } else {
            out.line(format!("{n}: {}", row.join(" ")))?;
        }
    }
    Ok(Status::Ok)
}

pub(crate) fn coaction(expr: &str, r: Option<u32>, out: &mut Output) -> CmdResult {
    let x = MotivicCombination::parse(expr)?;
    let d = match r {
        Some(r) => coaction_dr(&x, r)?,
        None => coaction_d_combination(&x),
    };
    if out.is_json() {
        out.json(&json!({ "input": x.to_string(), "r": r, "coaction": d }))?;
    } else if d.is_zero() {
        out.line("0")?;
    } else {
        out.line(d.to_string())?;
    }
    Ok(Status::Ok)
}

fn read_combination(path: &Path) -> Result<MotivicCombination, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let bad = |e: String| CliError::Usage(format!("{}: {e}", path.display()));
    match serde_json::from_str::<serde_json::Value>(&text) {
        Ok(serde_json::Value::Object(mut m)) => {
            let v = m.remove("combination").ok_or_else(|| bad("missing \"combination\"".into()))?;
            serde_json::from_value(v).map_err(|e| bad(e.to_string()))
        }
        Ok(v) => serde_json::from_value(v).map_err(|e| bad(e.to_string())),
        // not JSON: the file holds the combination as text
        Err(_) => MotivicCombination::parse(text.trim()).map_err(|e| bad(e.to_string())),
    }
}

pub(crate) fn check_relation(expr: Option<&str>, file: Option<&Path>, cfg: &Config, out: &mut Output) -> CmdResult {
    let xi = match (expr, file) {
        (Some(e), None) => MotivicCombination::parse(e)?,
        (None, Some(f)) => read_combination(f)?,
        _ => return Err(CliError::Usage("give a combination or --file".into())),
    };
    let engine = RelationEngine::new(cfg.precision);
    let (verdict, cached) = match &cfg.db {
        Some(path) => RelationDb::open(path).check(&engine, &xi)?,
        None => (engine.relation_check(&xi)?, false),
    };
    if out.is_json() {
        let mut v = serde_json::to_value(&verdict)?;
        v["combination"] = json!(canonical_key(&xi));
        v["digits"] = json!(cfg.precision);
        v["cached"] = json!(cached);
        out.json(&v)?;
    } else {
        out.line(format!("{verdict}{}", if cached { " (cached)" } else { "" }))?;
    }
    Ok(status(verdict.holds()))
}

pub(crate) fn associator(symbolic: bool, cfg: &Config, out: &mut Output) -> CmdResult {
    let t = cfg.truncation;
    if symbolic {
        let z = motivic_associator(t)?;
        for (w, c) in z.terms() {
            if out.is_json() {
                out.json(&json!({ "word": format_word_x(w), "coefficient": c.to_string() }))?;
            } else {
                out.line(format!("{}: {c}", format_word_x(w)))?;
            }
        }
    } else {
        let ev = MzvEvaluator::new(Context::new(cfg.precision));
        let z = ev.associator(t)?;
        let sig = shown_digits(cfg);
        for (w, c) in z.terms() {
            let value = c.to_sci_string(sig);
            if out.is_json() {
                out.json(&json!({ "word": format_word_x(w), "value": value }))?;
            } else {
                out.line(format!("{}: {value}", format_word_x(w)))?;
            }
        }
    }
    Ok(Status::Ok)
}

pub(crate) fn ihara_compose(a: &str, g: &str, cfg: &Config, out: &mut Output) -> CmdResult {
    let t = cfg.truncation;
    let (a, g) = (parse_series(a, t)?, parse_series(g, t)?);
    let r = compose(&a, &g)?;
    if out.is_json() {
        out.json(&serde_json::to_value(&r)?)?;
    } else {
        for line in r.to_string().lines() {
            out.line(line)?;
        }
    }
    Ok(Status::Ok)
}

pub(crate) fn ihara_takao(out: &mut Output) -> CmdResult {
    let it = IharaTakao::compute()?;
    let ok = it.vanishes() && !it.bracket_3_9.is_zero() && !it.bracket_5_7.is_zero();
    if out.is_json() {
        out.json(&json!({
            "bracket_3_9_terms": it.bracket_3_9.len(),
            "bracket_5_7_terms": it.bracket_5_7.len(),
            "combination_terms": it.combination.len(),
            "pass": ok,
        }))?;
    } else {
        out.line(format!("{{σ3,σ9}} depth-2 terms: {}", it.bracket_3_9.len()))?;
        out.line(format!("{{σ5,σ7}} depth-2 terms: {}", it.bracket_5_7.len()))?;
        let size = if it.vanishes() { "0".to_string() } else { format!("{} terms", it.combination.len()) };
        out.line(format!("depth-2 component: {size} — {}", pass(ok)))?;
    }
    Ok(status(ok))
}

pub(crate) fn eval_mzv(composition: &str, cfg: &Config, out: &mut Output) -> CmdResult {
    let c = Composition::parse(composition)?;
    let ev = MzvEvaluator::new(Context::new(cfg.precision));
    let v = ev.mzv_value(&c)?;
    if out.is_json() {
        out.json(&serde_json::to_value(&v)?)?;
    } else {
        out.line(format!("ζ{c} = {}", v.value.to_decimal_string(cfg.precision as usize)))?;
    }
    Ok(Status::Ok)
}

pub(crate) fn zagier_check(max_sum: u32, cfg: &Config, out: &mut Output) -> CmdResult {
    let ev = MzvEvaluator::new(Context::new(cfg.precision));
    let tol = tolerance(ev.context(), 10);
    let mut all = true;
    for s in 0..=max_sum {
        for a in 0..=s {
            let b = s - a;
            let r = zagier_identity_check(a, b, &ev)?;
            let ok = r.cmp_value(&tol).is_lt();
            all &= ok;
            if out.is_json() {
                out.json(&json!({ "a": a, "b": b, "residual": r.to_sci_string(3), "pass": ok }))?;
            } else {
                out.line(format!("({a},{b}): residual {} {}", r.to_sci_string(3), pass(ok)))?;
            }
        }
    }
    Ok(status(all))
}

pub(crate) fn ramanujan_check(cfg: &Config, out: &mut Output) -> CmdResult {
    let ctx = Context::new(cfg.precision);
    let r = ramanujan_zeta3_check(&ctx)?;
    let ok = r.residual.cmp_value(&tolerance(&ctx, 5)).is_lt();
    if out.is_json() {
        out.json(&json!({
            "value": r.value.to_decimal_string(cfg.precision as usize),
            "residual": r.residual.to_sci_string(3),
            "terms": r.terms,
            "pass": ok,
        }))?;
    } else {
        out.line(format!("ζ(3) = {}", r.value.to_decimal_string(cfg.precision as usize)))?;
        out.line(format!("residual {} after {} terms {}", r.residual.to_sci_string(3), r.terms, pass(ok)))?;
    }
    Ok(status(ok))
}
