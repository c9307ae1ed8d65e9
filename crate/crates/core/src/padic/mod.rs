//! `Q_p` at finite precision: characters, the normalized sums `τ(χ, ψ)`,
//! the invariants `c_{χ,ψ}` and `b_{χ,ψ}`, and the product relations for `τ`.

mod chars;
mod context;

pub use chars::{AddCharF, LiftJ, MultCharF};
pub use context::PadicContext;
mod tau;

pub use tau::{
    compute_b, compute_c, h_psi, residue_quad_sum, residue_sign, tau_closed, tau_conductor_one, tau_direct,
    taufor_value, BInvariant, CInvariant,
};
mod identities;

pub use identities::{
    character_report, finish_or_reject, lift_product, verify_b_properties, verify_c_properties, verify_hdtau1,
    verify_tau_closed, verify_tau_theorem, verify_taufor, verify_taulowtwist, verify_taumult,
};
pub(crate) use identities::precondition;
