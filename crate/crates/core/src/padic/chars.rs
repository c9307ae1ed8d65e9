use std::fmt;
use std::sync::Arc;

use super::context::PadicContext;
use crate::cyclonum::RootOfUnity;
use crate::finitefield::{AddCharK, Elem, MultCharK};

/// A character of `Q_p^*`: `g^k p^v ↦ ζ^{a k} · χ(p)^v` with `ζ` of order `p^{M-1}(p-1)`.
#[derive(Clone)]
pub struct MultCharF {
    ctx: Arc<PadicContext>,
    unit_exponent: u64,
    at_uniformizer: RootOfUnity,
}

impl MultCharF {
    pub fn new(ctx: &Arc<PadicContext>, unit_exponent: i128, at_uniformizer: RootOfUnity) -> Self {
        MultCharF {
            ctx: ctx.clone(),
            unit_exponent: unit_exponent.rem_euclid(ctx.unit_order() as i128) as u64,
            at_uniformizer,
        }
    }

    /// The unramified character with the given value at the uniformizer.
    pub fn unramified(ctx: &Arc<PadicContext>, at_uniformizer: RootOfUnity) -> Self {
        Self::new(ctx, 0, at_uniformizer)
    }

    pub fn trivial(ctx: &Arc<PadicContext>) -> Self {
        Self::unramified(ctx, RootOfUnity::ONE)
    }

    /// Pull-back of a residue-field character to the units, extended by its value at `p`.
    pub fn from_residue(ctx: &Arc<PadicContext>, residue: &MultCharK, at_uniformizer: RootOfUnity) -> Self {
        assert_eq!(residue.field().q(), ctx.p(), "residue character over the wrong field");
        let wild = (ctx.unit_order() / (ctx.p() - 1)) as i128;
        Self::new(ctx, residue.exponent() as i128 * wild, at_uniformizer)
    }

    /// The characters trivial on `1 + P^m`, indexed by `t mod p^{m-1}(p-1)`,
    /// have unit exponent `p^{M-m} t`.
    pub fn of_level(ctx: &Arc<PadicContext>, m: u32, index: u64, at_uniformizer: RootOfUnity) -> Self {
        assert!(m >= 1 && m <= ctx.precision(), "level {m} outside 1..=M");
        Self::new(ctx, index as i128 * ctx.p_pow(ctx.precision() - m) as i128, at_uniformizer)
    }

    /// Indices `t` for which [`Self::of_level`] has conductor exactly `m`.
    pub fn conductor_indices(ctx: &PadicContext, m: u32) -> impl Iterator<Item = u64> {
        let p = ctx.p();
        let count = if m == 0 { 1 } else { p.pow(m - 1) * (p - 1) };
        (0..count).filter(move |t| match m {
            0 => true,
            1 => *t != 0,
            _ => t % p != 0,
        })
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn unit_exponent(&self) -> u64 {
        self.unit_exponent
    }

    pub fn at_uniformizer(&self) -> &RootOfUnity {
        &self.at_uniformizer
    }

    pub fn is_ramified(&self) -> bool {
        self.unit_exponent != 0
    }

    /// Smallest `m` with `χ(1 + P^m) = 1`, or 0 when unramified.
    pub fn conductor(&self) -> u32 {
        if self.unit_exponent == 0 {
            return 0;
        }
        let p = self.ctx.p();
        let mut a = self.unit_exponent;
        let mut v = 0;
        while v < self.ctx.precision() - 1 && a.is_multiple_of(p) {
            a /= p;
            v += 1;
        }
        (self.ctx.precision() - v).max(1)
    }

    /// `χ(u)` for a unit `u`.
    pub fn eval_unit(&self, u: u64) -> RootOfUnity {
        self.eval_unit_log(self.ctx.dlog(u))
    }

    /// `χ(g^k)`.
    pub fn eval_unit_log(&self, k: u64) -> RootOfUnity {
        let n = self.ctx.unit_order();
        RootOfUnity::new((self.unit_exponent as u128 * k as u128 % n as u128) as i128, n)
    }

    /// `χ(u p^v)` for a unit `u`.
    pub fn eval(&self, u: u64, v: i64) -> RootOfUnity {
        self.eval_unit(u).mul(&self.at_uniformizer.pow(v))
    }

    /// `χ(x)` for a nonzero integer `x`.
    pub fn eval_int(&self, x: i128) -> RootOfUnity {
        let (v, u) = self.ctx.split(x);
        self.eval(u, v as i64)
    }

    /// The residue character `χ'` of a character with conductor at most one.
    pub fn residue(&self) -> MultCharK {
        assert!(self.conductor() <= 1, "only characters of conductor at most one restrict to the residue field");
        let wild = self.ctx.unit_order() / (self.ctx.p() - 1);
        MultCharK::new(self.ctx.residue_field(), (self.unit_exponent / wild) as i64)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_context(other);
        Self::new(
            &self.ctx,
            self.unit_exponent as i128 + other.unit_exponent as i128,
            self.at_uniformizer.mul(&other.at_uniformizer),
        )
    }

    pub fn pow(&self, e: i64) -> Self {
        let n = self.ctx.unit_order() as i128;
        Self::new(
            &self.ctx,
            (self.unit_exponent as i128 * e as i128).rem_euclid(n),
            self.at_uniformizer.pow(e),
        )
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    fn same_context(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.modulus() == other.ctx.modulus(),
            "characters over different contexts"
        );
    }
}

impl PartialEq for MultCharF {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.modulus() == other.ctx.modulus()
            && self.unit_exponent == other.unit_exponent
            && self.at_uniformizer == other.at_uniformizer
    }
}

impl fmt::Debug for MultCharF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultCharF(p={}, M={}, unit_exponent={}, at_p={}, e={})",
            self.ctx.p(),
            self.ctx.precision(),
            self.unit_exponent,
            self.at_uniformizer,
            self.conductor()
        )
    }
}

/// An additive character `x ↦ ψ_std(c p^{-e} x)` of conductor `e` and unit scale `c`,
/// where `ψ_std(a p^{-r}) = ζ_{p^r}^a`.
#[derive(Clone)]
pub struct AddCharF {
    ctx: Arc<PadicContext>,
    conductor: i64,
    scale: u64,
}

impl AddCharF {
    pub fn new(ctx: &Arc<PadicContext>, conductor: i64, scale: u64) -> Self {
        let scale = scale % ctx.modulus();
        assert!(ctx.is_unit(scale), "scale must be a unit");
        AddCharF {
            ctx: ctx.clone(),
            conductor,
            scale,
        }
    }

    /// The normalized character with scale one.
    pub fn standard(ctx: &Arc<PadicContext>) -> Self {
        Self::new(ctx, 0, 1)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    /// Smallest `n` with `ψ(P^n) = 1`.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_normalized(&self) -> bool {
        self.conductor == 0
    }

    /// `ψ_{p^{e(ψ)}}`, which has conductor zero.
    pub fn normalized(&self) -> Self {
        Self::new(&self.ctx, 0, self.scale)
    }

    /// `ψ_a : x ↦ ψ(a x)` for `a = u p^v`.
    pub fn scaled(&self, u: u64, v: i64) -> Self {
        Self::new(&self.ctx, self.conductor - v, self.ctx.mul(self.scale, u % self.ctx.modulus()))
    }

    /// `ψ_a` for a nonzero integer `a`.
    pub fn scaled_int(&self, a: i128) -> Self {
        let (v, u) = self.ctx.split(a);
        self.scaled(u, v as i64)
    }

    /// `ψ(x p^v)` for an integer `x`.
    pub fn eval(&self, x: i128, v: i64) -> RootOfUnity {
        let r = self.conductor - v;
        if r <= 0 {
            return RootOfUnity::ONE;
        }
        let r = r as u32;
        assert!(r <= self.ctx.precision(), "additive character value beyond working precision");
        let pr = self.ctx.p_pow(r);
        let a = (self.scale as u128 % pr as u128) * (x.rem_euclid(pr as i128) as u128) % pr as u128;
        RootOfUnity::new(a as i128, pr)
    }

    /// The residue character `ψ'(x) = ψ(x p^{e(ψ)-1})`.
    pub fn residue(&self) -> AddCharK {
        let k = self.ctx.residue_field();
        AddCharK::new(k, (self.scale % self.ctx.p()) as Elem)
    }
}

impl PartialEq for AddCharF {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.modulus() == other.ctx.modulus() && self.conductor == other.conductor && self.scale == other.scale
    }
}

impl fmt::Debug for AddCharF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AddCharF(p={}, M={}, e={}, scale={})",
            self.ctx.p(),
            self.ctx.precision(),
            self.conductor,
            self.scale
        )
    }
}

/// A lift `J` of the characters of `K^*/(K^*)^d`: the powers of `η_o`,
/// whose unit part pulls back the residue generator `g ↦ ζ_d`.
#[derive(Clone, Debug)]
pub struct LiftJ {
    d: u64,
    elements: Vec<MultCharF>,
}

impl LiftJ {
    /// The lift with `η(p) = 1` for every member.
    pub fn new(ctx: &Arc<PadicContext>, d: u64) -> Self {
        Self::with_uniformizer_value(ctx, d, 0)
    }

    /// The lift generated by the pull-back `η_o` with `η_o(p) = ζ_d^r`.
    pub fn with_uniformizer_value(ctx: &Arc<PadicContext>, d: u64, r: i64) -> Self {
        assert!(d >= 1 && (ctx.p() - 1).is_multiple_of(d), "d must divide p - 1");
        let residue = MultCharK::torsion_generator(ctx.residue_field(), d);
        let eta_o = MultCharF::from_residue(ctx, &residue, RootOfUnity::new(r as i128, d));
        LiftJ {
            d,
            elements: (0..d as i64).map(|j| eta_o.pow(j)).collect(),
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn elements(&self) -> &[MultCharF] {
        &self.elements
    }

    pub fn eta_o(&self) -> &MultCharF {
        &self.elements[(self.d > 1) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, m: u32) -> Arc<PadicContext> {
        PadicContext::new(p, m).unwrap()
    }

    #[test]
    fn conductors_of_levels() {
        let c = ctx(5, 6);
        for m in 0..=4 {
            for t in MultCharF::conductor_indices(&c, m).take(30) {
                let chi = MultCharF::of_level(&c, m.max(1), t, RootOfUnity::ONE);
                assert_eq!(chi.conductor(), m, "t={t}");
            }
        }
    }

    #[test]
    fn conductor_matches_kernel() {
        let c = ctx(5, 5);
        let chi = MultCharF::of_level(&c, 3, 7, RootOfUnity::ONE);
        let m = chi.conductor();
        assert_eq!(m, 3);
        let p = c.p();
        for u in 0..p.pow(2) {
            assert!(chi.eval_unit(1 + u * p.pow(m)).is_one());
        }
        assert!((0..p.pow(2)).any(|u| !chi.eval_unit(1 + u * p.pow(m - 1)).is_one()));
    }

    #[test]
    fn powers_keep_wild_conductor() {
        let c = ctx(7, 6);
        for t in MultCharF::conductor_indices(&c, 3).take(40) {
            let chi = MultCharF::of_level(&c, 3, t, RootOfUnity::ONE);
            for d in [2, 3, 6] {
                if chi.pow(d).is_ramified() {
                    assert_eq!(chi.pow(d).conductor(), 3);
                }
            }
        }
    }

    #[test]
    fn additive_conductor_and_scaling() {
        let c = ctx(5, 6);
        let psi = AddCharF::new(&c, 2, 3);
        assert!(psi.eval(1, 2).is_one());
        assert!(!psi.eval(1, 1).is_one());
        let shifted = psi.scaled(2, 1);
        assert_eq!(shifted.conductor(), 1);
        assert_eq!(shifted.eval(4, -1), psi.eval(8, 0));
        assert!(psi.normalized().is_normalized());
    }

    #[test]
    fn residue_restrictions_agree() {
        let c = ctx(7, 4);
        let k = c.residue_field().clone();
        for a in 1..6 {
            let chi = MultCharF::from_residue(&c, &MultCharK::new(&k, a), RootOfUnity::ONE);
            assert_eq!(chi.conductor(), 1);
            for x in 1..7u64 {
                assert_eq!(chi.eval_unit(x + 7 * 11), MultCharK::new(&k, a).eval(x as Elem));
            }
        }
        let psi = AddCharF::new(&c, -1, 3);
        let res = psi.residue();
        for x in 0..7 {
            assert_eq!(psi.eval(x, psi.conductor() - 1), res.eval(x as Elem));
        }
    }

    #[test]
    fn lift_is_well_formed() {
        let c = ctx(13, 4);
        for d in [1, 2, 3, 4, 6, 12] {
            let j = LiftJ::new(&c, d);
            assert_eq!(j.elements().len() as u64, d);
            let mut exps: Vec<u64> = j.elements().iter().map(|e| e.unit_exponent()).collect();
            exps.sort();
            exps.dedup();
            assert_eq!(exps.len() as u64, d);
            for eta in j.elements() {
                assert!(eta.conductor() <= 1);
                assert!(eta.at_uniformizer().is_one());
                assert!(eta.pow(d as i64).unit_exponent() == 0);
            }
        }
    }
}
