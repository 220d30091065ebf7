//! `mzv modular ...`: q-expansions, regularized integrals and cocycles.

use clap::Subcommand;
use mzv_core::exact::format_rational;
use mzv_core::modular::cocycle::t_structure_of;
use mzv_core::modular::{
    cocycle, cusp_cocycle_relations, eisenstein_cocycle_check, reg_iterated_integral, BarWord, Form, GammaElt,
};
use mzv_core::numerics::{BigComplex, Context};
use serde_json::json;

use crate::commands::{pass, shown_digits, status, tolerance};
use crate::{CliError, Config, Output, Status};

#[derive(Debug, Subcommand)]
pub enum ModularCommand {
    /// q-expansion coefficients of e4, e6, ..., or delta.
    Qexp {
        #[arg(long)]
        form: Form,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Regularized iterated integral from τ to the cusp of a bar word.
    Integral {
        /// Comma-separated forms, at most two.
        #[arg(long)]
        forms: String,
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        tau: String,
    },
    /// Cocycle C_γ on the generating series over the given forms.
    Cocycle {
        /// S, T, U, a word in them such as "ST", or "a,b,c,d".
        #[arg(long, default_value = "S")]
        gamma: GammaElt,
        #[arg(long)]
        forms: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        tau: String,
    },
    /// Depth-one Eisenstein part of C_S against its closed form.
    EisensteinCheck {
        /// One weight; all of 4, 6, ..., 12 when omitted.
        #[arg(long)]
        weight: Option<u32>,
    },
    /// Whether every coefficient of C_T is a rational multiple of (2πi)^d.
    TStructure {
        #[arg(long)]
        forms: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Period relations r|(1+S) = 0 and r|(1+U+U²) = 0 for a cusp form.
    CuspRelations {
        #[arg(long, default_value = "delta")]
        form: Form,
    },
}

type CmdResult = Result<Status, CliError>;

pub(crate) fn dispatch(cmd: &ModularCommand, cfg: &Config, out: &mut Output) -> CmdResult {
    let ctx = Context::new(cfg.precision);
    match cmd {
        ModularCommand::Qexp { form, order } => qexp(*form, *order, out),
        ModularCommand::Integral { forms, tau } => integral(forms, tau, &ctx, cfg, out),
        ModularCommand::Cocycle { gamma, forms, depth, tau } => cocycle_cmd(gamma, forms, *depth, tau, &ctx, cfg, out),
        ModularCommand::EisensteinCheck { weight } => eisenstein(*weight, &ctx, out),
        ModularCommand::TStructure { forms, depth } => t_structure(forms, *depth, &ctx, out),
        ModularCommand::CuspRelations { form } => cusp_relations(*form, &ctx, out),
    }
}

fn qexp(form: Form, order: usize, out: &mut Output) -> CmdResult {
    let q = form.qexp(order)?;
    let coeffs: Vec<String> = (0..=order).map(|n| format_rational(&q.coeff(n))).collect();
    if out.is_json() {
        out.json(&json!({ "form": form, "weight": form.weight(), "coeffs": coeffs }))?;
    } else {
        for (n, c) in coeffs.iter().enumerate() {
            out.line(format!("{n}: {c}"))?;
        }
    }
    Ok(Status::Ok)
}

fn integral(forms: &str, tau: &str, ctx: &Context, cfg: &Config, out: &mut Output) -> CmdResult {
    // bar words keep their order and may repeat forms, unlike form lists
    let word: Vec<Form> = forms.split(',').map(|f| f.trim().parse()).collect::<Result<_, _>>()?;
    let tau = BigComplex::parse(tau, ctx)?;
    let v = reg_iterated_integral(&BarWord(word.clone()), &tau, ctx)?;
    let sig = shown_digits(cfg);
    if out.is_json() {
        out.json(&json!({ "word": BarWord(word).to_string(), "value": v.to_json(sig) }))?;
    } else {
        out.line(v.to_string_digits(sig))?;
    }
    Ok(Status::Ok)
}

fn cocycle_cmd(
    gamma: &GammaElt,
    forms: &str,
    depth: usize,
    tau: &str,
    ctx: &Context,
    cfg: &Config,
    out: &mut Output,
) -> CmdResult {
    let forms = Form::parse_list(forms)?;
    let tau = BigComplex::parse(tau, ctx)?;
    let c = cocycle(gamma, &tau, &forms, depth, ctx)?;
    let sig = shown_digits(cfg);
    if out.is_json() {
        out.json(&json!({ "gamma": gamma.to_string(), "depth": depth, "cocycle": c.to_json(sig) }))?;
    } else {
        for (seq, v) in c.terms() {
            if seq.is_empty() {
                continue;
            }
            let names: Vec<String> = seq.iter().map(|&i| forms[i].to_string()).collect();
            out.line(format!("[{}]: {}", names.join("|"), v.to_string_digits(sig)))?;
        }
    }
    Ok(Status::Ok)
}

fn eisenstein(weight: Option<u32>, ctx: &Context, out: &mut Output) -> CmdResult {
    let weights = weight.map_or_else(|| vec![4, 6, 8, 10, 12], |w| vec![w]);
    let tol = tolerance(ctx, 20);
    let mut all = true;
    for w in weights {
        let c = eisenstein_cocycle_check(w, ctx)?;
        let ok = c.residual.cmp_value(&tol).is_lt();
        all &= ok;
        if out.is_json() {
            let mut v = serde_json::to_value(&c)?;
            v["pass"] = json!(ok);
            out.json(&v)?;
        } else {
            out.line(format!(
                "e{w}: residual {}, ζ({}) = {} {}",
                c.residual.to_sci_string(3),
                w - 1,
                c.extracted_zeta.to_decimal_string(20),
                pass(ok)
            ))?;
        }
    }
    Ok(status(all))
}

fn t_structure(forms: &str, depth: usize, ctx: &Context, out: &mut Output) -> CmdResult {
    let forms = Form::parse_list(forms)?;
    // T moves τ horizontally, so any point well inside the upper half-plane works
    let tau = BigComplex::parse("0.25+1.1i", ctx)?;
    let c = cocycle(&GammaElt::t(), &tau, &forms, depth, ctx)?;
    let report = t_structure_of(&c, ctx);
    if out.is_json() {
        for f in &report.fits {
            out.json(&serde_json::to_value(f)?)?;
        }
        out.json(&json!({ "holds": report.holds, "max_residual": report.max_residual.to_sci_string(3) }))?;
    } else {
        for f in &report.fits {
            let exps: Vec<String> = f.exponents.iter().map(u32::to_string).collect();
            let fit = match &f.fit.rational {
                Some(r) => format!("{} (2πi)^{}", format_rational(r), f.fit.degree),
                None => format!("no fit (residual {})", f.fit.residual.to_sci_string(3)),
            };
            out.line(format!("[{}] X^({}): {fit}", f.sequence.join("|"), exps.join(",")))?;
        }
        out.line(format!("C_T in Q[2πi]: {}", pass(report.holds)))?;
    }
    Ok(status(report.holds))
}

fn cusp_relations(form: Form, ctx: &Context, out: &mut Output) -> CmdResult {
    let r = cusp_cocycle_relations(form, ctx)?;
    let tol = tolerance(ctx, 25);
    let ok = r.s_relation.cmp_value(&tol).is_lt() && r.u_relation.cmp_value(&tol).is_lt();
    if out.is_json() {
        let mut v = serde_json::to_value(&r)?;
        v["pass"] = json!(ok);
        out.json(&v)?;
    } else {
        out.line(format!("r|(1+S): {}", r.s_relation.to_sci_string(3)))?;
        out.line(format!("r|(1+U+U²): {}", r.u_relation.to_sci_string(3)))?;
        out.line(format!("period relations for {form}: {}", pass(ok)))?;
    }
    Ok(status(ok))
}
