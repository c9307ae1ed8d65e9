//! Finite fields `F_q`, their characters, Gauss sums and the classical
//! product relation.

mod chars;
mod field;
mod identities;
mod products;

pub use chars::{gauss_sum, gauss_sum_complex, quad_gauss_sum, quad_gauss_sum_complex, AddCharK, MultCharK};
pub use field::{Elem, FiniteField};
pub use identities::{
    hd_sides, verify_d_and_sign, verify_gauss_inverse, verify_gauss_shift, verify_hd_all, verify_hd_classical,
    verify_quad_gauss, verify_twistprod,
};
pub use products::{ProductComparer, SumFactor, SumProduct};

pub(crate) use field::pow_mod;
