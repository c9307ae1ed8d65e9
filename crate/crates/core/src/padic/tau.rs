use super::chars::{AddCharF, MultCharF};
use super::context::PadicContext;
use crate::cyclonum::{CyclotomicElement, RootOfUnity, SymScalar};
use crate::finitefield::{gauss_sum, pow_mod, quad_gauss_sum, MultCharK};
use crate::{Error, Result};

/// `c_{χ,ψ}` as the representative in `0..p^k` of a class in `(O/P^k)^*`.
///
/// Formulas that need an element rather than a class use this representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CInvariant {
    pub k: u32,
    pub rep: u64,
}

/// `b_{χ,ψ}` as a residue in `0..p`, relative to the representative of `c_{χ,ψ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BInvariant {
    pub rep: u64,
}

impl CInvariant {
    /// Whether `self = a · other` in `(O/P^k)^*`.
    pub fn is_multiple(&self, a: u64, other: &CInvariant, p: u64) -> bool {
        let pk = p.pow(self.k) as u128;
        self.k == other.k && (a as u128 % pk * other.rep as u128) % pk == self.rep as u128
    }
}

fn check_precision(chi: &MultCharF, psi: &AddCharF) -> Result<()> {
    chi.context()
        .require(chi.conductor() + psi.conductor().unsigned_abs() as u32 + 2)
}

fn require_wild(chi: &MultCharF) -> Result<u32> {
    let m = chi.conductor();
    if m < 2 {
        return Err(Error::Precondition(format!("needs conductor at least 2, got {m}")));
    }
    Ok(m)
}

/// `τ(χ, ψ) = q^{-e(χ)/2} Σ_{a ∈ (O/P^{e(χ)})^*} χ(a) ψ(p^{e(ψ)-e(χ)} a)`, and 1 for unramified `χ`.
pub fn tau_direct(chi: &MultCharF, psi: &AddCharF) -> Result<SymScalar> {
    check_precision(chi, psi)?;
    let m = chi.conductor();
    if m == 0 {
        return Ok(SymScalar::one());
    }
    let ctx = chi.context();
    let p = ctx.p();
    let pm = p.pow(m);
    let wild = pm / p;
    // χ(g^k) = ζ_{p^{m-1}(p-1)}^{u k}
    let u = chi.unit_exponent() / ctx.p_pow(ctx.precision() - m);
    let level = wild * (p - 1);
    let c = psi.scale() % pm;
    let g = ctx.unit_generator() % pm;
    let step = pow_mod(g, p - 1, pm);
    let mut counts = vec![0i32; pm as usize];
    let mut total = CyclotomicElement::zero();
    // units a = g^{t + (p-1) j}: χ(a) = ζ_{level}^{u t} ζ_{p^{m-1}}^{u j}
    let mut start = 1u64;
    for t in 0..p - 1 {
        let mut a = start;
        for j in 0..wild {
            let e = (p * ((u % wild) * j % wild) + (c as u128 * a as u128 % pm as u128) as u64) % pm;
            counts[e as usize] += 1;
            a = (a as u128 * step as u128 % pm as u128) as u64;
        }
        let part = CyclotomicElement::from_dense_counts(pm, &mut counts);
        counts.iter_mut().for_each(|x| *x = 0);
        let tame = RootOfUnity::new((u as u128 * t as u128 % level as u128) as i128, level);
        total = total + part.mul_root(&tame);
        start = (start as u128 * g as u128 % pm as u128) as u64;
    }
    Ok(SymScalar::from_element(total.reduce_order()) * SymScalar::sqrt_q_pow(p, -(m as i64)))
}

/// `τ(χ, ψ) = q^{-1/2} G(χ', ψ')` for conductor one.
pub fn tau_conductor_one(chi: &MultCharF, psi: &AddCharF) -> Result<SymScalar> {
    if chi.conductor() != 1 {
        return Err(Error::Precondition("needs conductor exactly 1".into()));
    }
    let g = gauss_sum(&chi.residue(), &psi.residue())?;
    Ok(SymScalar::from_element(g) * SymScalar::sqrt_q_pow(chi.context().p(), -1))
}

/// `G_ψ(K) = Σ_{x ∈ K} ψ'(x²)`.
pub fn residue_quad_sum(psi: &AddCharF) -> CyclotomicElement {
    quad_gauss_sum(&psi.residue()).expect("the residue character of a nontrivial ψ is nontrivial")
}

/// `η_K(x)` for an integer prime to `p`.
pub fn residue_sign(ctx: &PadicContext, x: i64) -> RootOfUnity {
    MultCharK::quadratic(ctx.residue_field()).eval_int(x)
}

/// The unique `c ∈ (O/P^k)^*` with `ψ(c p^{-m}(x - 1)) = χ^{-1}(x)` on `1 + P^{m-k}/1 + P^m`,
/// where `m = e(χ)` and `k = ⌊m/2⌋`, found by exhaustive search.
///
/// `ψ` is replaced by its normalization `ψ_{p^{e(ψ)}}` first.
pub fn compute_c(chi: &MultCharF, psi: &AddCharF) -> Result<CInvariant> {
    let m = require_wild(chi)?;
    let ctx = chi.context();
    ctx.require(m + 2)?;
    let psi = psi.normalized();
    let p = ctx.p();
    let k = m / 2;
    let pk = p.pow(k);
    let lower = p.pow(m - k);
    let inv = chi.inv();
    // exponents of χ^{-1}(1 + u p^{m-k}) in Z/p^k
    let target: Vec<u64> = (0..pk).map(|u| inv.eval_unit(1 + u * lower).exponent_in(pk)).collect();
    let scale = psi.scale() % pk;
    let mut found = Vec::new();
    for a in (1..pk).filter(|a| a % p != 0) {
        let ca = scale * a % pk;
        if (0..pk).all(|u| (ca as u128 * u as u128 % pk as u128) as u64 == target[u as usize]) {
            found.push(a);
        }
    }
    match found.as_slice() {
        [rep] => Ok(CInvariant { k, rep: *rep }),
        _ => Err(Error::Internal(format!(
            "{} candidates for c among (O/P^{k})^* for {chi:?}",
            found.len()
        ))),
    }
}

/// The unique `b ∈ O/P` with
/// `χ(x) = ψ(2^{-1} c p^{-m}((x-1)² - 2(x-1))) ψ(c b p^{-(m+1)/2}(x-1))`
/// on `1 + P^{(m-1)/2}`, for odd `m = e(χ) ≥ 3`, found by exhaustive search.
pub fn compute_b(chi: &MultCharF, psi: &AddCharF) -> Result<BInvariant> {
    let m = require_wild(chi)?;
    if m % 2 == 0 {
        return Err(Error::Precondition(format!("needs odd conductor, got {m}")));
    }
    let c = compute_c(chi, psi)?.rep as i128;
    let psi = psi.normalized();
    let ctx = chi.context();
    let p = ctx.p();
    let half = ctx.inv(2) as i128;
    let k = (m - 1) / 2;
    let lower = p.pow(k) as i128;
    let count = p.pow(m - k);
    let chi_vals: Vec<RootOfUnity> = (0..count as i128).map(|u| chi.eval_unit((1 + u * lower) as u64)).collect();
    let modulus = ctx.modulus() as i128;
    let quadratic: Vec<RootOfUnity> = (0..count as i128)
        .map(|u| {
            let y = u * lower;
            let arg = (half * c % modulus) * ((y * y - 2 * y).rem_euclid(modulus)) % modulus;
            psi.eval(arg, -(m as i64))
        })
        .collect();
    let found: Vec<u64> = (0..p)
        .filter(|&b| {
            (0..count as usize).all(|u| {
                let linear = psi.eval(c * b as i128 * u as i128 * lower, -((m as i64 + 1) / 2));
                quadratic[u].mul(&linear) == chi_vals[u]
            })
        })
        .collect();
    match found.as_slice() {
        [rep] => Ok(BInvariant { rep: *rep }),
        _ => Err(Error::Internal(format!("{} candidates for b for {chi:?}", found.len()))),
    }
}

/// `τ(χ, ψ)` for `e(χ) ≥ 2` from `c_{χ,ψ}` and `b_{χ,ψ}`, without summation.
pub fn tau_closed(chi: &MultCharF, psi: &AddCharF) -> Result<SymScalar> {
    let m = require_wild(chi)?;
    check_precision(chi, psi)?;
    let psi = psi.normalized();
    let c = compute_c(chi, &psi)?.rep;
    let base = chi.eval_unit(c).mul(&psi.eval(c as i128, -(m as i64)));
    if m % 2 == 0 {
        return Ok(SymScalar::root(&base));
    }
    let ctx = chi.context();
    let b = compute_b(chi, &psi)?.rep as i128;
    let half = ctx.inv(2) as i128;
    let modulus = ctx.modulus() as i128;
    let shift = psi.eval(-(half * c as i128 % modulus) * (b * b), -1);
    let sign = residue_sign(ctx, 2 * (c % ctx.p()) as i64);
    let root = base.mul(&shift).mul(&sign);
    Ok(SymScalar::from_element(residue_quad_sum(&psi)).mul_root(&root) * SymScalar::sqrt_q_pow(ctx.p(), -1))
}

/// `q^{k - m/2} χ(c) Σ_{y ∈ 1+P^k/1+P^{m-k}} χ(y) ψ(c y p^{-m})`.
pub fn taufor_value(chi: &MultCharF, psi: &AddCharF) -> Result<SymScalar> {
    let m = require_wild(chi)?;
    check_precision(chi, psi)?;
    let psi = psi.normalized();
    let cinv = compute_c(chi, &psi)?;
    let ctx = chi.context();
    let p = ctx.p();
    let k = cinv.k;
    let c = cinv.rep as i128;
    let lower = p.pow(k) as i128;
    let sum: CyclotomicElement = (0..p.pow(m - 2 * k) as i128)
        .map(|u| {
            let y = 1 + u * lower;
            chi.eval_unit(y as u64).mul(&psi.eval(c * y, -(m as i64))).to_element()
        })
        .sum();
    let scale = SymScalar::sqrt_q_pow(p, 2 * k as i64 - m as i64);
    Ok(SymScalar::from_element(sum).mul_root(&chi.eval_unit(cinv.rep)) * scale)
}

/// `h_ψ(x) = ψ(p^{-m}(x - 1))` on `1 + P^{m-k}`, for a normalized `ψ` and `x = 1 + u p^{m-k}`.
pub fn h_psi(psi: &AddCharF, m: u32, u: u64) -> RootOfUnity {
    let k = m / 2;
    psi.normalized().eval(u as i128 * psi.context().p_pow(m - k) as i128, -(m as i64))
}
