use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::chars::{AddCharK, MultCharK};
use super::field::FiniteField;
use super::products::{ProductComparer, SumProduct};
use crate::cyclonum::{euler_phi, RootOfUnity};
use crate::report::{Rendered, ReportBuilder, VerificationReport};

/// Products whose direct expansion stays below this many coefficient
/// multiplications are also rendered as explicit cyclotomic numbers.
const DIRECT_RENDER_BUDGET: u64 = 4_000_000;

fn render(cmp: &ProductComparer, x: &SumProduct) -> Rendered {
    let field = cmp.field();
    let z = x.to_complex(field);
    let phi = euler_phi(field.p() * (field.q() - 1));
    let cost = phi * phi * x.factors().len() as u64;
    let exact = if cost <= DIRECT_RENDER_BUDGET {
        match x.to_element(field) {
            Ok(e) => e.to_string(),
            Err(_) => x.to_string(),
        }
    } else {
        x.to_string()
    };
    Rendered {
        exact,
        re: z.re,
        im: z.im,
    }
}

fn compare(b: &mut ReportBuilder, cmp: &ProductComparer, label: &str, lhs: &SumProduct, rhs: &SumProduct) -> bool {
    let rhs = if b.take_mutation() {
        rhs.clone().scale_int(2)
    } else {
        rhs.clone()
    };
    let holds = cmp.equal(lhs, &rhs);
    b.record(label, render(cmp, lhs), render(cmp, &rhs), holds)
}

fn field_params(b: ReportBuilder, k: &FiniteField) -> ReportBuilder {
    b.param("p", k.p()).param("f", k.f()).param("q", k.q())
}

/// `Π_{η^d = 1} G(χη, ψ)` and `G(χ^d, ψ_d) Π_{η ≠ 1} G(η, ψ)`.
pub fn hd_sides(chi: &MultCharK, d: u64, psi: &AddCharK) -> (SumProduct, SumProduct) {
    let k = chi.field();
    let eta = MultCharK::torsion_generator(k, d);
    let mut lhs = SumProduct::one();
    let mut rhs = SumProduct::gauss(&chi.pow(d as i64), &psi.scaled(k.from_int(d as i64)));
    for j in 0..d as i64 {
        let twist = eta.pow(j);
        lhs = lhs.mul(&SumProduct::gauss(&chi.mul(&twist), psi));
        if j != 0 {
            rhs = rhs.mul(&SumProduct::gauss(&twist, psi));
        }
    }
    (lhs, rhs)
}

/// The classical product relation for one character and the standard additive character.
pub fn verify_hd_classical(cmp: &ProductComparer, d: u64, chi: &MultCharK) -> VerificationReport {
    let k = cmp.field();
    let mut b = field_params(ReportBuilder::new("hd"), k)
        .param("d", d)
        .param("chi-exp", chi.exponent());
    if d == 0 || !(k.q() - 1).is_multiple_of(d) {
        return b.reject(format!("d = {d} does not divide q - 1 = {}", k.q() - 1));
    }
    if chi.pow(d as i64).is_trivial() {
        return b.reject("the d-th power of the character is trivial");
    }
    let psi = AddCharK::standard(k);
    let (lhs, rhs) = hd_sides(chi, d, &psi);
    compare(&mut b, cmp, "product of twisted Gauss sums", &lhs, &rhs);
    b.finish()
}

/// Runs [`verify_hd_classical`] for every character with nontrivial `d`-th power.
///
/// Characters in the same coset of the `d`-torsion give literally the same
/// identity, so each coset is compared once.
pub fn verify_hd_all(cmp: &ProductComparer, d: u64) -> Vec<VerificationReport> {
    let k = cmp.field();
    let m = k.q() - 1;
    if d == 0 || !m.is_multiple_of(d) {
        return vec![verify_hd_classical(cmp, d, &MultCharK::new(k, 1))];
    }
    let step = m / d;
    let mut by_coset: HashMap<u64, VerificationReport> = HashMap::new();
    let mut out = Vec::new();
    for a in 0..m {
        if (a * d).is_multiple_of(m) {
            continue;
        }
        let base = by_coset
            .entry(a % step)
            .or_insert_with(|| verify_hd_classical(cmp, d, &MultCharK::new(k, a as i64)));
        let mut r = base.clone();
        r.params.insert("chi-exp".into(), a.to_string());
        out.push(r);
    }
    out
}

/// `Π_{η^d = 1, η ≠ 1} G(η, ψ)` against its closed form.
pub fn verify_twistprod(cmp: &ProductComparer, d: u64, psi: &AddCharK) -> VerificationReport {
    let k = cmp.field();
    let mut b = field_params(ReportBuilder::new("twistprod"), k)
        .param("d", d)
        .param("psi-shift", psi.shift());
    if d == 0 || !(k.q() - 1).is_multiple_of(d) {
        return b.reject(format!("d = {d} does not divide q - 1 = {}", k.q() - 1));
    }
    if psi.is_trivial() {
        return b.reject("additive character must be nontrivial");
    }
    let eta = MultCharK::torsion_generator(k, d);
    let mut lhs = SumProduct::one();
    for j in 1..d as i64 {
        lhs = lhs.mul(&SumProduct::gauss(&eta.pow(j), psi));
    }
    let q_pow = |e: u64| BigRational::from(BigInt::from(k.q()).pow(e as u32));
    let rhs = if d % 2 == 1 {
        SumProduct::one().scale(&q_pow((d - 1) / 2))
    } else {
        let sign = eta.eval(k.neg(1)).pow((d * (d - 2) / 8) as i64);
        SumProduct::quad(psi).scale(&q_pow((d - 2) / 2)).mul_root(&sign)
    };
    compare(&mut b, cmp, "product over nontrivial twists", &lhs, &rhs);
    b.finish()
}

/// `η_K(d) = sign(K)^{(d-1)/2}` for odd `d`, `η_o(-1)^{d(d-2)/8} = η_K(2d)` for even `d`.
pub fn verify_d_and_sign(field: &Arc<FiniteField>, d: u64) -> VerificationReport {
    let mut b = field_params(ReportBuilder::new("d-and-sign"), field).param("d", d);
    if d == 0 || !(field.q() - 1).is_multiple_of(d) {
        return b.reject(format!("d = {d} does not divide q - 1 = {}", field.q() - 1));
    }
    let quad = MultCharK::quadratic(field);
    if d % 2 == 1 {
        let lhs = quad.eval_int(d as i64);
        let rhs = RootOfUnity::sign(field.sign() == 1).pow(((d - 1) / 2) as i64);
        b.check("quadratic character at d", &lhs, &rhs);
    } else {
        let eta = MultCharK::torsion_generator(field, d);
        let lhs = eta.eval(field.neg(1)).pow((d * (d - 2) / 8) as i64);
        let rhs = quad.eval_int(2 * d as i64);
        b.check("sign of the torsion generator", &lhs, &rhs);
    }
    b.finish()
}

/// `G(χ, ψ_a) = χ^{-1}(a) G(χ, ψ)` for every nonzero `a`.
pub fn verify_gauss_shift(cmp: &ProductComparer, chi: &MultCharK, psi: &AddCharK) -> VerificationReport {
    let k = cmp.field();
    let mut b = field_params(ReportBuilder::new("gauss-shift"), k)
        .param("chi-exp", chi.exponent())
        .param("psi-shift", psi.shift());
    let base = SumProduct::gauss(chi, psi);
    for a in k.nonzero() {
        let lhs = SumProduct::gauss(chi, &psi.scaled(a));
        let rhs = base.clone().mul_root(&chi.inv().eval(a));
        compare(&mut b, cmp, &format!("shift by {a}"), &lhs, &rhs);
    }
    b.finish()
}

/// `G(χ, ψ) G(χ^{-1}, ψ) = χ(-1) q` for nontrivial `χ`.
pub fn verify_gauss_inverse(cmp: &ProductComparer, chi: &MultCharK, psi: &AddCharK) -> VerificationReport {
    let k = cmp.field();
    let mut b = field_params(ReportBuilder::new("gauss-inverse"), k)
        .param("chi-exp", chi.exponent())
        .param("psi-shift", psi.shift());
    if chi.is_trivial() {
        return b.reject("character must be nontrivial");
    }
    let lhs = SumProduct::gauss(chi, psi).mul(&SumProduct::gauss(&chi.inv(), psi));
    let rhs = SumProduct::one()
        .scale_int(k.q() as i64)
        .mul_root(&chi.eval(k.neg(1)));
    compare(&mut b, cmp, "Gauss sum times its inverse", &lhs, &rhs);
    b.finish()
}

/// `Σ ψ(x²) = G(η_K, ψ)` and `G_{ψ_a} = η_K(a) G_ψ`.
pub fn verify_quad_gauss(cmp: &ProductComparer, psi: &AddCharK) -> VerificationReport {
    let k = cmp.field();
    let mut b = field_params(ReportBuilder::new("quadgauss"), k).param("psi-shift", psi.shift());
    let quad = MultCharK::quadratic(k);
    compare(
        &mut b,
        cmp,
        "quadratic sum equals Gauss sum of the quadratic character",
        &SumProduct::quad(psi),
        &SumProduct::gauss(&quad, psi),
    );
    for a in k.nonzero() {
        let lhs = SumProduct::quad(&psi.scaled(a));
        let rhs = SumProduct::quad(psi).mul_root(&quad.eval(a));
        compare(&mut b, cmp, &format!("shift by {a}"), &lhs, &rhs);
    }
    let sq = SumProduct::quad(psi).mul(&SumProduct::quad(psi));
    let expected = SumProduct::one().scale_int(k.sign() * k.q() as i64);
    compare(&mut b, cmp, "square is sign times q", &sq, &expected);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn field(p: u64, f: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, f).unwrap())
    }

    #[test]
    fn hd_small_fields() {
        for (p, f, d) in [(7, 1, 3), (5, 1, 2), (3, 2, 4), (13, 1, 6)] {
            let k = field(p, f);
            let cmp = ProductComparer::new(&k);
            for r in verify_hd_all(&cmp, d) {
                assert!(r.passed(), "{r:?}");
                assert!(r.numerically_consistent());
            }
        }
    }

    #[test]
    fn hd_rejects_trivial_power() {
        let k = field(7, 1);
        let cmp = ProductComparer::new(&k);
        let r = verify_hd_classical(&cmp, 3, &MultCharK::new(&k, 2));
        assert_eq!(r.verdict, Verdict::RejectedPrecondition);
        assert_eq!(verify_hd_all(&cmp, 3).len(), 3);
    }

    #[test]
    fn hd_mutation_fails() {
        let k = field(7, 1);
        let cmp = ProductComparer::new(&k);
        let mutated = crate::report::with_mutation(|| verify_hd_classical(&cmp, 3, &MultCharK::new(&k, 1)));
        assert_eq!(mutated.verdict, Verdict::Fail);
    }

    #[test]
    fn twistprod_and_sign() {
        for (p, f) in [(7, 1), (13, 1), (3, 2), (5, 2)] {
            let k = field(p, f);
            let cmp = ProductComparer::new(&k);
            for d in 1..k.q() {
                if (k.q() - 1).is_multiple_of(d) {
                    assert!(verify_twistprod(&cmp, d, &AddCharK::standard(&k)).passed(), "q={} d={d}", k.q());
                    assert!(verify_d_and_sign(&k, d).passed(), "q={} d={d}", k.q());
                }
            }
        }
    }

    #[test]
    fn twistprod_q7_d3_is_seven() {
        let k = field(7, 1);
        let cmp = ProductComparer::new(&k);
        let r = verify_twistprod(&cmp, 3, &AddCharK::standard(&k));
        assert_eq!(r.checks[0].rhs.exact, "7");
        assert_eq!(r.checks[0].lhs.exact, "7");
    }
}
