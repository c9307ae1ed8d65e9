use std::fmt;
use std::sync::Arc;

use crate::cyclonum::{CyclotomicElement, RootOfUnity, SymScalar};
use crate::padic::{AddCharF, MultCharF, PadicContext};
use crate::{Error, Result};

/// Number of consecutive truncation levels examined before giving up on stabilization.
pub const WEIL_MAX_STEPS: u32 = 6;

/// An eighth root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilIndex {
    value: CyclotomicElement,
}

impl WeilIndex {
    pub fn new(value: CyclotomicElement) -> Self {
        WeilIndex { value }
    }

    pub fn value(&self) -> &CyclotomicElement {
        &self.value
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(self.value.pow(e))
    }

    pub fn ratio(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.value.checked_div(&other.value)?))
    }

    pub fn to_scalar(&self) -> SymScalar {
        SymScalar::from_element(self.value.clone())
    }
}

impl fmt::Display for WeilIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `|2|^{1/2} ∫_{P^{-r}} ψ(x²) d_ψx` as an exact value.
///
/// The self-dual measure gives `P^t` volume `q^{e(ψ)/2 - t}`, so the integral
/// equals `q^{-e(ψ)/2 - r} Σ_{u mod p^n} ψ(p^{-2r} u²)` with `n = e(ψ) + 2r`
/// once `n ≥ 1`, and `q^{e(ψ)/2 + r}` while `n ≤ 0`.
pub fn truncated_weil_sum(psi: &AddCharF, r: i64) -> Result<SymScalar> {
    let ctx = psi.context();
    let p = ctx.p();
    let e = psi.conductor();
    let n = e + 2 * r;
    if n <= 0 {
        return Ok(SymScalar::sqrt_q_pow(p, e + 2 * r));
    }
    ctx.require(n as u32)?;
    let pn = ctx.p_pow(n as u32);
    let mut counts = vec![0i64; pn as usize];
    for u in 0..pn as i128 {
        counts[psi.eval(u * u, -2 * r).exponent_in(pn) as usize] += 1;
    }
    let sum = CyclotomicElement::from_dense_counts(pn, &mut counts).reduce_order();
    Ok(SymScalar::from_element(sum) * SymScalar::sqrt_q_pow(p, -e - 2 * r))
}

/// The smallest `r` with `e(ψ) + 2r ≥ 1`, from which the truncated integrals are constant.
pub fn first_positive_level(psi: &AddCharF) -> i64 {
    (2 - psi.conductor()).div_euclid(2)
}

/// The Weil index `γ(ψ)`, as the stable value of the truncated integrals.
pub fn weil_index(psi: &AddCharF) -> Result<WeilIndex> {
    let start = first_positive_level(psi);
    let mut previous = truncated_weil_sum(psi, start)?;
    for step in 1..=WEIL_MAX_STEPS {
        let current = truncated_weil_sum(psi, start + step as i64)?;
        if current == previous {
            let value = current.to_element();
            if value.pow(4) != CyclotomicElement::one() {
                return Err(Error::Internal(format!("Weil index {value} is not a fourth root of unity")));
            }
            return Ok(WeilIndex::new(value));
        }
        previous = current;
    }
    Err(Error::NonStabilization { steps: WEIL_MAX_STEPS })
}

/// `γ_ψ(a) = γ(ψ_a)/γ(ψ)` for `a = u p^v`.
pub fn weil_index_normalized(v: i64, u: u64, psi: &AddCharF) -> Result<WeilIndex> {
    weil_index(&psi.scaled(u, v))?.ratio(&weil_index(psi)?)
}

/// The quadratic character `η_a` with kernel `N(F(√a))` for `a = u p^v`, from the tame
/// Hilbert symbol `(a, b) = (-1)^{v(a)v(b)(p-1)/2} (u_a/p)^{v(b)} (u_b/p)^{v(a)}`.
pub fn eta_a(ctx: &Arc<PadicContext>, v: i64, u: u64) -> MultCharF {
    assert!(ctx.is_unit(u), "unit part must be prime to p");
    let p = ctx.p();
    let legendre_u = if ctx.residue_field().is_square((u % p) as u32) { 1 } else { -1 };
    let odd_v = v.rem_euclid(2) == 1;
    let minus_one_power = if odd_v && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
    let at_p = RootOfUnity::sign(legendre_u * minus_one_power == 1);
    let unit_exponent = if odd_v { ctx.unit_order() / 2 } else { 0 };
    MultCharF::new(ctx, unit_exponent as i128, at_p)
}

/// A unit that is not a square modulo `p`.
pub fn non_square_unit(ctx: &PadicContext) -> u64 {
    ctx.residue_field().generator() as u64
}

/// Representatives `(v, u)` of `F^*/(F^*)^2`: `1, u_0, p, u_0 p`.
pub fn square_class_representatives(ctx: &PadicContext) -> [(i64, u64); 4] {
    let u0 = non_square_unit(ctx);
    [(0, 1), (0, u0), (1, 1), (1, u0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::{quad_gauss_sum, AddCharK};

    fn ctx(p: u64) -> Arc<PadicContext> {
        PadicContext::new(p, 8).unwrap()
    }

    /// Whether `x² - a y² - b z² = 0` has a primitive solution modulo `p³`.
    fn hilbert_brute(p: u64, a: i64, b: i64) -> bool {
        let m = (p * p * p) as i64;
        let unit = |t: i64| t % p as i64 != 0;
        (0..m).any(|x| {
            (0..m).any(|y| {
                (0..m).any(|z| (unit(x) || unit(y) || unit(z)) && (x * x - a * y * y - b * z * z).rem_euclid(m) == 0)
            })
        })
    }

    #[test]
    fn eta_matches_norm_residue_symbol() {
        for p in [3u64, 5] {
            let c = ctx(p);
            let reps = square_class_representatives(&c);
            for &(va, ua) in &reps {
                for &(vb, ub) in &reps {
                    let a = ua as i64 * p.pow(va as u32) as i64;
                    let b = ub as i64 * p.pow(vb as u32) as i64;
                    let eta = eta_a(&c, va, ua);
                    let symbol = eta.eval(ub, vb);
                    assert_eq!(symbol.is_one(), hilbert_brute(p, a, b), "p={p} a={a} b={b}");
                    assert_eq!(symbol, eta_a(&c, vb, ub).eval(ua, va));
                }
            }
        }
    }

    #[test]
    fn eta_basics() {
        let c = ctx(7);
        assert!(eta_a(&c, 0, 4).eval(3, 1).is_one());
        for u in 1..7u64 {
            let expected = if c.residue_field().is_square(u as u32) { 1 } else { -1 };
            assert_eq!(eta_a(&c, 0, u).eval(1, 1), RootOfUnity::sign(expected == 1));
            assert!(!eta_a(&c, 0, u).is_ramified());
            assert!(eta_a(&c, 1, u).is_ramified());
        }
    }

    #[test]
    fn weil_index_values() {
        for p in [3u64, 5, 7, 13] {
            let c = ctx(p);
            for e in -2..=2 {
                for scale in [1, 2, p - 1] {
                    let psi = AddCharF::new(&c, e, scale);
                    let g = weil_index(&psi).unwrap();
                    assert_eq!(g.pow(4).value(), &CyclotomicElement::one());
                    let minus = weil_index_normalized(0, p - 1, &psi).unwrap();
                    assert_eq!(g.pow(2), minus, "p={p} e={e}");
                    if e % 2 == 0 {
                        assert!(g.value().is_one());
                    }
                }
            }
            // γ(ψ) for odd conductor is q^{-1/2} times the quadratic Gauss sum
            let g = weil_index(&AddCharF::new(&c, 1, 1)).unwrap();
            let gauss = quad_gauss_sum(&AddCharK::standard(c.residue_field())).unwrap();
            assert_eq!(g.to_scalar(), SymScalar::from_element(gauss) * SymScalar::sqrt_q_pow(p, -1));
        }
    }

    #[test]
    fn truncations_stabilize_from_first_positive_level() {
        let c = ctx(5);
        for e in -2i64..=2 {
            let psi = AddCharF::new(&c, e, 3);
            let first = (1 - e + 1).div_euclid(2);
            let v = truncated_weil_sum(&psi, first).unwrap();
            for r in first + 1..first + 3 {
                assert_eq!(truncated_weil_sum(&psi, r).unwrap(), v);
            }
        }
    }
}
