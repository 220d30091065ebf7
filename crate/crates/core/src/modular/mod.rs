//! Multiple modular values for `SL_2(Z)`: q-expansions, regularized iterated
//! Eichler integrals up to depth 2 and the cocycles `C_S`, `C_T`.

pub mod cocycle;
pub mod integrals;
pub mod qexp;
pub mod vpoly;

pub use cocycle::{
    cocycle, cocycle_t_structure_check, cusp_cocycle_relations, eisenstein_closed_form, eisenstein_cocycle_check,
    fit_two_pi_i, generating_series, CocycleSeries, EisensteinCheck, TStructureReport,
};
pub use integrals::{eichler_cusp, r_operator, reg_iterated_integral, BarLetter, BarWord, TauIntegrator};
pub use qexp::{delta_qexp, eisenstein, residue_form, Form, QExpansion};
pub use vpoly::{GammaElt, VPolynomial, VTensor};
