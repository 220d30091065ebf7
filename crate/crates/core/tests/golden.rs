//! Outputs compared against checked-in reference files in tests/data.
//! Set MZV_UPDATE_GOLDEN=1 to rewrite them.

use std::path::PathBuf;

use mzv_core::coaction::{coaction_d_combination, zagier_motivic_rhs, MotivicCombination};
use mzv_core::modular::integrals::format_combination;
use mzv_core::modular::{cocycle, r_operator, Form, GammaElt};
use mzv_core::numerics::{BigComplex, Context};
use mzv_core::words::Composition;

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    let actual = format!("{}\n", actual.trim_end());
    if std::env::var_os("MZV_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from the reference");
}

#[test]
fn coaction_of_zeta_2_3() {
    let d = coaction_d_combination(&MotivicCombination::zeta(&Composition::new(vec![2, 3])));
    check("coaction_zeta_2_3.txt", &d.to_string());
}

#[test]
fn zagier_rhs_1_0() {
    check("zagier_rhs_1_0.txt", &zagier_motivic_rhs(1, 0).to_string());
}

#[test]
fn r_operator_depth_two() {
    check("r_operator_depth2.txt", &format_combination(&r_operator(2).unwrap()));
}

#[test]
fn s_cocycle_e4_e10_at_i() {
    let ctx = Context::new(50);
    let forms = [Form::Eisenstein(4), Form::Eisenstein(10)];
    let c = cocycle(&GammaElt::s(), &BigComplex::i(ctx.bits()), &forms, 2, &ctx).unwrap();
    let v = c.coefficient(&forms).unwrap();
    check("cocycle_s_e4_e10.txt", &v.to_string_digits(20));
}
