//! Local L-, ε- and γ-factors as exact functions of `X = q^{-s}`, Weil indices,
//! the metaplectic ε̃ and γ̃, and the product identities they satisfy.

mod identities;
mod local;
mod weil;

pub use local::{epsilon_factor, epsilon_inverse, gamma_factor, l_factor, tilde_epsilon, tilde_gamma, EpsMonomial, GammaValue};
pub use weil::{
    eta_a, first_positive_level, non_square_unit, square_class_representatives, truncated_weil_sum, weil_index, weil_index_normalized,
    WeilIndex, WEIL_MAX_STEPS,
};
pub use identities::{
    verify_epsilon_properties, verify_mainres, verify_mainres_epsilon, verify_mainres_metaplectic,
    verify_mainres_quadratic, verify_verifygao, verify_weil, verify_weild,
};
