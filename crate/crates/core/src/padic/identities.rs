use super::chars::{AddCharF, LiftJ, MultCharF};
use super::tau::{
    compute_b, compute_c, residue_quad_sum, residue_sign, tau_closed, tau_direct, taufor_value, CInvariant,
};
use crate::cyclonum::{RootOfUnity, SymScalar};
use crate::report::{ReportBuilder, VerificationReport};
use crate::{Error, Result};

/// Starts a report carrying the parameters of `χ` and `ψ`.
pub fn character_report(task: &str, chi: &MultCharF, psi: &AddCharF) -> ReportBuilder {
    let ctx = chi.context();
    ReportBuilder::new(task)
        .param("p", ctx.p())
        .param("precision", ctx.precision())
        .param("chi-cond", chi.conductor())
        .param("chi-exp", chi.unit_exponent())
        .param("chi-at-p", chi.at_uniformizer())
        .param("psi-cond", psi.conductor())
        .param("psi-scale", psi.scale())
}

/// Turns precondition failures into rejected reports and propagates the rest.
pub fn finish_or_reject(b: ReportBuilder, body: impl FnOnce(&mut ReportBuilder) -> Result<()>) -> Result<VerificationReport> {
    let mut b = b;
    match body(&mut b) {
        Ok(()) => Ok(b.finish()),
        Err(Error::Precondition(msg)) => Ok(b.reject(msg)),
        Err(e) => Err(e),
    }
}

pub(crate) fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

/// `q^{-1/2} G_ψ(K)`.
fn normalized_quad_sum(psi: &AddCharF) -> SymScalar {
    SymScalar::from_element(residue_quad_sum(psi)) * SymScalar::sqrt_q_pow(psi.context().p(), -1)
}

fn residue_int(c: &CInvariant, p: u64) -> i64 {
    (c.rep % p) as i64
}

fn tame_hypotheses(chi: &MultCharF, d: u64) -> Result<()> {
    let p = chi.context().p();
    precondition(d >= 1 && (p - 1).is_multiple_of(d), || format!("d = {d} must divide p - 1 = {}", p - 1))
}

/// `tau_closed(χ, ψ) = tau_direct(χ, ψ)`.
pub fn verify_tau_closed(chi: &MultCharF, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(character_report("tau-closed", chi, psi), |b| {
        precondition(chi.conductor() >= 2, || "needs e(χ) ≥ 2".into())?;
        let closed = tau_closed(chi, psi)?;
        b.check("closed form against the defining sum", &closed, &tau_direct(chi, psi)?);
        Ok(())
    })
}

/// `τ(χ, ψ) = q^{k-m/2} χ(c) Σ_{y ∈ 1+P^k/1+P^{m-k}} χ(y) ψ(c y p^{-m})`.
pub fn verify_taufor(chi: &MultCharF, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(character_report("taufor", chi, psi), |b| {
        precondition(chi.conductor() >= 2, || "needs e(χ) ≥ 2".into())?;
        let reduced = taufor_value(chi, psi)?;
        b.check("reduced sum against the defining sum", &tau_direct(chi, psi)?, &reduced);
        Ok(())
    })
}

/// `τ(χη, ψ) = η(c_{χ,ψ}) τ(χ, ψ)` for `e(η) ≤ ⌊e(χ)/2⌋`.
pub fn verify_taulowtwist(chi: &MultCharF, eta: &MultCharF, psi: &AddCharF) -> Result<VerificationReport> {
    let b = character_report("taulowtwist", chi, psi)
        .param("eta-cond", eta.conductor())
        .param("eta-exp", eta.unit_exponent());
    finish_or_reject(b, |b| {
        let m = chi.conductor();
        precondition(m >= 2, || "needs e(χ) ≥ 2".into())?;
        precondition(eta.conductor() <= m / 2, || format!("needs e(η) ≤ {}", m / 2))?;
        let c = compute_c(chi, psi)?;
        let lhs = tau_direct(&chi.mul(eta), psi)?;
        let rhs = tau_direct(chi, psi)?.mul_root(&eta.eval_unit(c.rep));
        b.check("twist by a low-conductor character", &lhs, &rhs);
        Ok(())
    })
}

/// `τ(χ, ψ)^d = τ(χ^d, ψ_d)`, with the factor `q^{-1/2} η_K(2dc) G_ψ(K)` for even `d` and odd `e(χ)`.
pub fn verify_taumult(chi: &MultCharF, d: u64, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(character_report("taumult", chi, psi).param("d", d), |b| {
        let m = chi.conductor();
        precondition(m >= 2, || "needs e(χ) ≥ 2".into())?;
        tame_hypotheses(chi, d)?;
        let lhs = tau_direct(chi, psi)?.pow(d);
        let mut rhs = tau_direct(&chi.pow(d as i64), &psi.scaled_int(d as i128))?;
        if d.is_multiple_of(2) && m % 2 == 1 {
            let p = chi.context().p();
            let c = compute_c(chi, psi)?;
            let sign = residue_sign(chi.context(), (2 * d as i64 % p as i64) * residue_int(&c, p));
            rhs = rhs * normalized_quad_sum(psi).mul_root(&sign);
        }
        b.check("d-th power of tau", &lhs, &rhs);
        Ok(())
    })
}

/// `Π_{η ∈ J} τ(χη, ψ)`.
pub fn lift_product(chi: &MultCharF, lift: &LiftJ, psi: &AddCharF) -> Result<SymScalar> {
    let mut acc = SymScalar::one();
    for eta in lift.elements() {
        acc = acc * tau_direct(&chi.mul(eta), psi)?;
    }
    Ok(acc)
}

fn lift_report(task: &str, chi: &MultCharF, lift: &LiftJ, psi: &AddCharF) -> ReportBuilder {
    character_report(task, chi, psi)
        .param("d", lift.d())
        .param("eta-o-at-p", lift.eta_o().at_uniformizer())
}

/// The product of `τ(χη, ψ)` over a lift `J`, for `χ^d` ramified.
pub fn verify_tau_theorem(chi: &MultCharF, lift: &LiftJ, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(lift_report("tau-theorem", chi, lift, psi), |b| {
        let d = lift.d();
        tame_hypotheses(chi, d)?;
        let chi_d = chi.pow(d as i64);
        precondition(chi_d.is_ramified(), || format!("χ^{d} is unramified"))?;
        let ctx = chi.context();
        let p = ctx.p();
        let lhs = lift_product(chi, lift, psi)?;
        let mut rhs = tau_direct(&chi_d, &psi.scaled_int(d as i128))?;
        if d.is_multiple_of(2) {
            if chi.conductor().is_multiple_of(2) {
                let c = compute_c(chi, &psi.normalized())?;
                rhs = rhs.mul_root(&residue_sign(ctx, residue_int(&c, p)));
            } else {
                let sign = residue_sign(ctx, (2 * d % p) as i64);
                rhs = rhs * normalized_quad_sum(psi).mul_root(&sign);
            }
        }
        b.check("product over the lift", &lhs, &rhs);
        Ok(())
    })
}

/// The product of `τ(χη, ψ)` over a lift `J`, for `e(χ) ≤ 1`.
pub fn verify_hdtau1(chi: &MultCharF, lift: &LiftJ, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(lift_report("hdtau1", chi, lift, psi), |b| {
        let d = lift.d();
        tame_hypotheses(chi, d)?;
        precondition(chi.conductor() <= 1, || "needs e(χ) ≤ 1".into())?;
        let p = chi.context().p();
        let lhs = lift_product(chi, lift, psi)?;
        let mut rhs = tau_direct(&chi.pow(d as i64), &psi.scaled_int(d as i128))?;
        if d.is_multiple_of(2) {
            let sign = residue_sign(chi.context(), (2 * d % p) as i64);
            rhs = rhs * normalized_quad_sum(psi).mul_root(&sign);
        }
        b.check("product over the lift", &lhs, &rhs);
        Ok(())
    })
}

/// Units used to probe how invariants move under `ψ ↦ ψ_a`.
fn sample_units(p: u64) -> Vec<u64> {
    [2, 3, p - 1, p + 1, 2 * p + 3].into_iter().filter(|a| a % p != 0).collect()
}

/// Uniqueness of `c_{χ,ψ}` and its behaviour under powers and shifts of `ψ`.
pub fn verify_c_properties(chi: &MultCharF, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(character_report("c-properties", chi, psi), |b| {
        precondition(chi.conductor() >= 2, || "needs e(χ) ≥ 2".into())?;
        let ctx = chi.context();
        let p = ctx.p();
        let c = compute_c(chi, psi)?;
        b.check_bool("unique candidate for c", true, &c.rep.to_string());
        for l in [2i64, 3].into_iter().filter(|l| !(*l as u64).is_multiple_of(p)) {
            let cl = compute_c(&chi.pow(l), &psi.scaled_int(l as i128))?;
            b.check_bool(&format!("c for the {l}-th power"), cl == c, &cl.rep.to_string());
        }
        for a in sample_units(p) {
            let ca = compute_c(chi, &psi.scaled(a, 0))?;
            b.check_bool(&format!("c after shifting by {a}"), c.is_multiple(a, &ca, p), &ca.rep.to_string());
        }
        let pk = p.pow(c.k);
        let y = 1 + pk;
        let cy = compute_c(chi, &psi.scaled(y, 0))?;
        b.check_bool(&format!("c after shifting by {y} in 1 + P^k"), cy == c, &cy.rep.to_string());
        Ok(())
    })
}

/// Uniqueness of `b_{χ,ψ}` and its invariance under powers and low-conductor twists.
pub fn verify_b_properties(chi: &MultCharF, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(character_report("b-properties", chi, psi), |b| {
        let m = chi.conductor();
        precondition(m >= 3 && m % 2 == 1, || "needs odd e(χ) ≥ 3".into())?;
        let ctx = chi.context();
        let p = ctx.p();
        let base = compute_b(chi, psi)?;
        b.check_bool("unique candidate for b", true, &base.rep.to_string());
        for l in [2i64, 3].into_iter().filter(|l| !(*l as u64).is_multiple_of(p)) {
            let bl = compute_b(&chi.pow(l), &psi.scaled_int(l as i128))?;
            b.check_bool(&format!("b for the {l}-th power"), bl == base, &bl.rep.to_string());
        }
        for level in 1..=(m - 1) / 2 {
            let index = MultCharF::conductor_indices(ctx, level).next().expect("characters of each level exist");
            let eta = MultCharF::of_level(ctx, level, index, RootOfUnity::new(1, 4));
            let bt = compute_b(&chi.mul(&eta), psi)?;
            b.check_bool(&format!("b after a twist of conductor {level}"), bt == base, &bt.rep.to_string());
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;
    use crate::report::Verdict;
    use std::sync::Arc;

    fn ctx(p: u64, m: u32) -> Arc<PadicContext> {
        PadicContext::new(p, m).unwrap()
    }

    fn chars(c: &Arc<PadicContext>, m: u32, limit: usize) -> Vec<MultCharF> {
        MultCharF::conductor_indices(c, m)
            .step_by(5)
            .take(limit)
            .map(|t| MultCharF::of_level(c, m.max(1), t, RootOfUnity::new(1, 3)))
            .collect()
    }

    #[test]
    fn taufor_and_twists() {
        let c = ctx(7, 8);
        let psi = AddCharF::new(&c, 1, 3);
        for m in 2..=5 {
            for chi in chars(&c, m, 3) {
                assert!(verify_taufor(&chi, &psi).unwrap().passed());
                assert!(verify_tau_closed(&chi, &psi).unwrap().passed());
                for eta in chars(&c, m / 2, 2) {
                    assert!(verify_taulowtwist(&chi, &eta, &psi).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn lowtwist_rejects_large_conductor() {
        let c = ctx(7, 6);
        let chi = chars(&c, 2, 1).remove(0);
        let eta = chars(&c, 2, 1).remove(0);
        let r = verify_taulowtwist(&chi, &eta, &AddCharF::standard(&c)).unwrap();
        assert_eq!(r.verdict, Verdict::RejectedPrecondition);
    }

    #[test]
    fn taumult_p7_p13() {
        for (p, ds) in [(7u64, vec![1, 2, 3, 6]), (13, vec![2, 3, 4])] {
            let c = ctx(p, 6);
            for m in 2..=3 {
                for chi in chars(&c, m, 2) {
                    for &d in &ds {
                        let r = verify_taumult(&chi, d, &AddCharF::standard(&c)).unwrap();
                        assert!(r.passed(), "{r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn tau_theorem_and_hdtau1() {
        for p in [7u64, 13] {
            let c = ctx(p, 6);
            for d in [2u64, 3, 4, 6].into_iter().filter(|d| (p - 1) % d == 0) {
                let lift = LiftJ::new(&c, d);
                for m in 0..=3 {
                    for chi in chars(&c, m, 3) {
                        let psi = AddCharF::new(&c, -1, 2);
                        if chi.pow(d as i64).is_ramified() {
                            let r = verify_tau_theorem(&chi, &lift, &psi).unwrap();
                            assert!(r.passed(), "{r:?}");
                        }
                        if m <= 1 {
                            let r = verify_hdtau1(&chi, &lift, &psi).unwrap();
                            assert!(r.passed(), "{r:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn c_and_b_properties() {
        let c = ctx(5, 7);
        for m in 2..=5 {
            for chi in chars(&c, m, 2) {
                let psi = AddCharF::new(&c, 0, 3);
                assert!(verify_c_properties(&chi, &psi).unwrap().passed());
                if m % 2 == 1 {
                    assert!(verify_b_properties(&chi, &psi).unwrap().passed());
                }
            }
        }
    }
}
