//! Local coefficients matrices of `n`-fold covers of `SL_2(F)` with ramified inducing data,
//! their determinants, Plancherel measures, and the identities relating them to γ-factors.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::cyclonum::{QsRational, RootOfUnity, SymScalar};
use crate::factors::{
    epsilon_factor, gamma_factor, l_factor, square_class_representatives, eta_a, tilde_epsilon, tilde_gamma,
    verify_mainres, EpsMonomial,
};
use crate::padic::{character_report, finish_or_reject, precondition, residue_sign, AddCharF, LiftJ, MultCharF};
use crate::report::{ReportBuilder, VerificationReport};
use crate::{Error, Result};

/// The degree `n`, the twist `c`, and the character `χ` whose powers `χ^d`, `χ^n`
/// parameterize the inducing data.
#[derive(Clone, Debug)]
pub struct CoverDatum {
    n: u64,
    c: i64,
    chi: MultCharF,
}

impl CoverDatum {
    pub fn new(n: u64, c: i64, chi: MultCharF) -> Result<Self> {
        let p = chi.context().p();
        if n == 0 || n.is_multiple_of(4) {
            return Err(Error::Precondition(format!("n = {n} must be positive and not divisible by 4")));
        }
        if !(p - 1).is_multiple_of(n) {
            return Err(Error::Precondition(format!("n = {n} must divide p - 1 = {}", p - 1)));
        }
        Ok(CoverDatum { n, c, chi })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn chi(&self) -> &MultCharF {
        &self.chi
    }

    /// `n` for odd `n`, `n/2` otherwise; always odd.
    pub fn d(&self) -> u64 {
        if self.n % 2 == 1 {
            self.n
        } else {
            self.n / 2
        }
    }

    fn twist_gcd(&self, m: u64) -> u64 {
        m.gcd(&((4 * self.c + 1).unsigned_abs()))
    }

    /// `n / gcd(n, 4c + 1)`.
    pub fn n_c(&self) -> u64 {
        self.n / self.twist_gcd(self.n)
    }

    /// `d / gcd(d, 4c + 1)`.
    pub fn d_c(&self) -> u64 {
        self.d() / self.twist_gcd(self.d())
    }

    /// Whether `n ≡ 2 mod 4`, where the entries are metaplectic ε̃-factors.
    pub fn is_metaplectic(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// The same cover with `χ` replaced by `χβ`.
    pub fn twisted(&self, beta: &MultCharF) -> Self {
        CoverDatum {
            n: self.n,
            c: self.c,
            chi: self.chi.mul(beta),
        }
    }

    fn lift(&self) -> LiftJ {
        LiftJ::new(self.chi.context(), self.d())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcmFlavor {
    Epsilon,
    TildeEpsilon,
}

/// A `d × d` generalized permutation matrix of ε- or ε̃-factors.
#[derive(Clone, Debug)]
pub struct LocalCoeffMatrix {
    q: u64,
    size: usize,
    support: usize,
    flavor: LcmFlavor,
    entries: BTreeMap<(usize, usize), EpsMonomial>,
}

impl LocalCoeffMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// The residue `r` with entries at `i - j ≡ r mod d`.
    pub fn support(&self) -> usize {
        self.support
    }

    pub fn flavor(&self) -> LcmFlavor {
        self.flavor
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&EpsMonomial> {
        self.entries.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &EpsMonomial)> {
        self.entries.iter()
    }

    /// Exactly one nonzero entry in every row and every column.
    pub fn is_generalized_permutation(&self) -> bool {
        let mut rows = vec![0usize; self.size];
        let mut cols = vec![0usize; self.size];
        for (i, j) in self.entries.keys() {
            rows[*i] += 1;
            cols[*j] += 1;
        }
        rows.iter().chain(&cols).all(|&k| k == 1)
    }

    /// The column of the nonzero entry in each row.
    fn permutation(&self) -> Vec<usize> {
        let mut perm = vec![usize::MAX; self.size];
        for (i, j) in self.entries.keys() {
            perm[*i] = *j;
        }
        perm
    }
}

/// `+1` or `-1` according to the parity of a permutation, from its cycle decomposition.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut length = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            length += 1;
        }
        transpositions += length.max(1) - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The local coefficients matrix built from the generator `eta` of `J`.
///
/// Entry `(i, j)` is `ε(1-s, χ^{-1} η^{i+j}, ψ)` for odd `n` and `ε̃(1-s, χ^{-1} η̃^{i+j}, ψ)`
/// with `η̃ = η^{(d+1)/2}` otherwise, on the support `i - j ≡ e(χ) - e(ψ) mod d`.
pub fn build_lcm_with(datum: &CoverDatum, psi: &AddCharF, eta: &MultCharF) -> Result<LocalCoeffMatrix> {
    let chi = datum.chi();
    precondition(chi.pow(datum.n() as i64).is_ramified(), || format!("χ^{} is unramified", datum.n()))?;
    let d = datum.d() as i64;
    let q = chi.context().p();
    let support = (chi.conductor() as i64 - psi.conductor()).rem_euclid(d) as usize;
    let flavor = if datum.is_metaplectic() { LcmFlavor::TildeEpsilon } else { LcmFlavor::Epsilon };
    let generator = match flavor {
        LcmFlavor::Epsilon => eta.clone(),
        LcmFlavor::TildeEpsilon => eta.pow((d + 1) / 2),
    };
    let mut entries = BTreeMap::new();
    let mut exponents = vec![false; d as usize];
    for i in 0..d as usize {
        let j = (i as i64 - support as i64).rem_euclid(d) as usize;
        let k = (i + j) as i64;
        exponents[(k % d) as usize] = true;
        let inner = chi.mul(&generator.pow(-k));
        let entry = match flavor {
            LcmFlavor::Epsilon => epsilon_factor(&inner.inv(), psi)?.affine(-1, 2),
            LcmFlavor::TildeEpsilon => tilde_epsilon(&inner, psi)?,
        };
        entries.insert((i, j), entry);
    }
    assert!(exponents.iter().all(|&b| b), "the support must meet every power of the generator once");
    Ok(LocalCoeffMatrix {
        q,
        size: d as usize,
        support,
        flavor,
        entries,
    })
}

/// The local coefficients matrix for the generator `η_o` of the lift with `η(p) = 1`.
pub fn build_lcm(datum: &CoverDatum, psi: &AddCharF) -> Result<LocalCoeffMatrix> {
    build_lcm_with(datum, psi, datum.lift().eta_o())
}

/// The determinant, as the permutation sign times the product of the support entries.
pub fn det_lcm(m: &LocalCoeffMatrix) -> QsRational {
    let sign = permutation_sign(&m.permutation());
    let product = m.entries.values().fold(EpsMonomial::one(m.q), |acc, e| acc.mul(e));
    product.scale(&SymScalar::from_integer(sign)).to_rational()
}

/// `μ(σ_o, s)`, held through its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct PlancherelMeasure {
    inverse: QsRational,
}

impl PlancherelMeasure {
    /// `μ(σ_o, s)^{-1}`.
    pub fn inverse(&self) -> &QsRational {
        &self.inverse
    }

    /// `μ(σ_o, s)^k`.
    pub fn power(&self, k: i64) -> QsRational {
        self.inverse.pow(-k)
    }
}

/// `μ^{-1} = q^{e(ψ)-e(χ^n)} L(ns, χ^n) L(-ns, χ^{-n}) / (L(1-ns, χ^{-n}) L(1+ns, χ^n))`.
pub fn plancherel(chi: &MultCharF, n: u64, psi: &AddCharF) -> PlancherelMeasure {
    let q = chi.context().p();
    let n = n as i64;
    let chi_n = chi.pow(n);
    let chi_n_inv = chi_n.inv();
    let num = l_factor(&chi_n).affine(n, 0).mul(&l_factor(&chi_n_inv).affine(-n, 0));
    let den = l_factor(&chi_n_inv).affine(-n, 2).mul(&l_factor(&chi_n).affine(n, 2));
    let power = SymScalar::sqrt_q_pow(q, 2 * (psi.conductor() - chi_n.conductor() as i64));
    PlancherelMeasure {
        inverse: num.div(&den).scale(&power),
    }
}

/// `D_o(σ_o, s, ψ)`.
fn d_o(datum: &CoverDatum, psi: &AddCharF) -> Result<QsRational> {
    Ok(det_lcm(&build_lcm(datum, psi)?))
}

/// `Π_{η ∈ J} ε(1-s, (χη)^{-1}, ψ)`, or the same with ε̃.
fn lift_product(datum: &CoverDatum, psi: &AddCharF) -> Result<QsRational> {
    let chi = datum.chi();
    let mut acc = EpsMonomial::one(chi.context().p());
    for eta in datum.lift().elements() {
        let twisted = chi.mul(eta);
        let factor = if datum.is_metaplectic() {
            tilde_epsilon(&twisted, psi)?
        } else {
            epsilon_factor(&twisted.inv(), psi)?.affine(-1, 2)
        };
        acc = acc.mul(&factor);
    }
    Ok(acc.to_rational())
}

/// `γ(1-ds, χ^{-d}, ψ)` for odd `n` and `γ̃(1-ds, χ^{-d}, ψ)` otherwise.
fn item_one_gamma(datum: &CoverDatum, psi: &AddCharF) -> Result<QsRational> {
    let d = datum.d() as i64;
    let chi_d = datum.chi().pow(d);
    if datum.is_metaplectic() {
        Ok(tilde_gamma(&chi_d, psi)?.affine(d, 0))
    } else {
        Ok(gamma_factor(&chi_d.inv(), psi)?.affine(-d, 2))
    }
}

fn cover_report(task: &str, datum: &CoverDatum, psi: &AddCharF) -> ReportBuilder {
    character_report(task, datum.chi(), psi)
        .param("n", datum.n())
        .param("c", datum.c())
        .param("d", datum.d())
        .param("n-c", datum.n_c())
        .param("d-c", datum.d_c())
}

const SUPPORT_FLAG: &str = "support congruence i - j ≡ e(χ) - e(ψ) taken mod d";

/// The determinant of the ramified local coefficients matrix against Plancherel measures and
/// γ-factors, for `D_o(σ_o)`, for the product over quadratic twists, and for `D(σ)`.
pub fn verify_ramdet(datum: &CoverDatum, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(cover_report("ramdet", datum, psi), |b| {
        let chi = datum.chi();
        let ctx = chi.context();
        let n = datum.n() as i64;
        let d = datum.d() as i64;
        let chi_n = chi.pow(n);
        precondition(chi_n.is_ramified(), || format!("χ^{n} is unramified"))?;
        b.flag(SUPPORT_FLAG);

        let matrix = build_lcm(datum, psi)?;
        b.check_bool(
            "generalized permutation matrix",
            matrix.is_generalized_permutation(),
            &format!("{0}×{0}, support {1}", matrix.size(), matrix.support()),
        );
        let det = det_lcm(&matrix);
        b.check("determinant equals the product over J", &det, &lift_product(datum, psi)?);

        let mu = plancherel(chi, datum.n(), psi);
        let item_one_rhs = |target: &AddCharF| -> Result<QsRational> {
            Ok(mu.power((1 - d) / 2).mul(&item_one_gamma(datum, target)?))
        };
        let psi_d = psi.scaled_int(d as i128);
        let item_one = b.check("item 1: D_o against the γ-factor at ψ_d", &det, &item_one_rhs(&psi_d)?);
        let mut at_psi = vec![("item 1", det == item_one_rhs(psi)?)];

        let which = if datum.is_metaplectic() { 2 } else { 1 };
        let mainres = verify_mainres(which, chi, Some(&datum.lift()), psi)?;
        b.check_bool(
            "item 1 agrees with the lift-product identity",
            item_one == mainres.passed(),
            &format!("item 1 {item_one}, lift-product identity {}", mainres.passed()),
        );

        let gamma_n = |target: &AddCharF| gamma_factor(&chi_n.inv(), target).map(|g| g.affine(-n, 2));
        let psi_n = psi.scaled_int(n as i128);
        let sign = residue_sign(ctx, -1).pow(chi_n.conductor() as i64);
        let n_c = datum.n_c() as i64;
        let d_sigma = if datum.is_metaplectic() {
            let mut product = QsRational::one(ctx.p());
            for (v, u) in square_class_representatives(ctx) {
                product = product.mul(&d_o(&datum.twisted(&eta_a(ctx, v, u)), psi)?);
            }
            let item_two_rhs = |target: &AddCharF| -> Result<QsRational> {
                Ok(mu.power(1 - n).mul(&gamma_n(target)?.pow(2)).scale(&SymScalar::root(&sign)))
            };
            b.check("item 2: product over quadratic twists against γ² at ψ_n", &product, &item_two_rhs(&psi_n)?);
            at_psi.push(("item 2", product == item_two_rhs(psi)?));
            product.pow(datum.d_c() as i64)
        } else {
            det.pow(n_c)
        };
        let sign_sigma = if datum.is_metaplectic() { sign } else { RootOfUnity::ONE };
        let item_three_rhs = |target: &AddCharF| -> Result<QsRational> {
            Ok(mu
                .power((1 - n) * n_c / 2)
                .mul(&gamma_n(target)?.pow(n_c))
                .scale(&SymScalar::root(&sign_sigma)))
        };
        b.check("item 3: D(σ) against γ^{n_c} at ψ_n", &d_sigma, &item_three_rhs(&psi_n)?);
        at_psi.push(("item 3", d_sigma == item_three_rhs(psi)?));
        let outcomes: Vec<String> = at_psi
            .iter()
            .map(|(item, ok)| format!("{item} {}", if *ok { "holds" } else { "fails" }))
            .collect();
        b.flag(&format!("γ-factors at ψ instead of ψ_d, ψ_n: {}", outcomes.join(", ")));
        Ok(())
    })
}

/// The determinant is the same for every generator of `J` in place of `η_o`.
pub fn verify_generator_independence(datum: &CoverDatum, psi: &AddCharF) -> Result<VerificationReport> {
    finish_or_reject(cover_report("generator-independence", datum, psi), |b| {
        b.flag(SUPPORT_FLAG);
        let lift = datum.lift();
        let base = det_lcm(&build_lcm_with(datum, psi, lift.eta_o())?);
        let d = datum.d();
        for k in (1..d.max(2)).filter(|k| k.gcd(&d) == 1) {
            let generator = lift.eta_o().pow(k as i64);
            let det = det_lcm(&build_lcm_with(datum, psi, &generator)?);
            b.check(&format!("generator η_o^{k}"), &det, &base);
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

    fn chi_of_level(c: &Arc<PadicContext>, m: u32, skip: usize) -> MultCharF {
        let t = MultCharF::conductor_indices(c, m).nth(skip).unwrap();
        MultCharF::of_level(c, m, t, RootOfUnity::ONE)
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[2, 3, 4, 0, 1]), 1);
        assert_eq!(permutation_sign(&[1, 0, 3, 2]), 1);
    }

    #[test]
    fn datum_parameters() {
        let c = ctx(7, 5);
        let chi = MultCharF::trivial(&c);
        let odd = CoverDatum::new(3, 0, chi.clone()).unwrap();
        assert_eq!((odd.d(), odd.n_c(), odd.d_c()), (3, 3, 3));
        let twisted = CoverDatum::new(3, 2, chi.clone()).unwrap();
        assert_eq!((twisted.n_c(), twisted.d_c()), (1, 1));
        let even = CoverDatum::new(6, 1, chi.clone()).unwrap();
        assert_eq!((even.d(), even.n_c(), even.d_c()), (3, 6, 3));
        assert!(CoverDatum::new(4, 0, chi.clone()).is_err());
        assert!(CoverDatum::new(5, 0, chi).is_err());
    }

    #[test]
    fn matrix_shape() {
        let c = ctx(7, 7);
        let datum = CoverDatum::new(3, 0, chi_of_level(&c, 2, 1)).unwrap();
        let m = build_lcm(&datum, &AddCharF::standard(&c)).unwrap();
        assert_eq!((m.size(), m.support(), m.flavor()), (3, 2, LcmFlavor::Epsilon));
        assert!(m.is_generalized_permutation());
        assert!(m.entry(2, 0).is_some() && m.entry(0, 0).is_none());
        let m = build_lcm(&datum, &AddCharF::new(&c, 2, 1)).unwrap();
        assert_eq!(m.support(), 0);
    }

    #[test]
    fn ramified_plancherel_is_constant() {
        let c = ctx(7, 7);
        let chi = chi_of_level(&c, 2, 1);
        let mu = plancherel(&chi, 3, &AddCharF::standard(&c));
        assert_eq!(mu.inverse(), &QsRational::one(7).scale(&SymScalar::sqrt_q_pow(7, -4)));
        let unram = plancherel(&MultCharF::trivial(&c), 3, &AddCharF::standard(&c));
        assert_ne!(unram.inverse().denominator().as_monomial().map(|(k, _)| k), Some(0));
    }

    #[test]
    fn unramified_inputs_are_rejected() {
        let c = ctx(7, 7);
        let datum = CoverDatum::new(3, 0, MultCharF::trivial(&c)).unwrap();
        let r = verify_ramdet(&datum, &AddCharF::standard(&c)).unwrap();
        assert_eq!(r.verdict, Verdict::RejectedPrecondition);
    }

    #[test]
    fn generator_independence() {
        let c = ctx(7, 7);
        for n in [3, 6] {
            let datum = CoverDatum::new(n, 0, chi_of_level(&c, 2, 3)).unwrap();
            let r = verify_generator_independence(&datum, &AddCharF::new(&c, 1, 2)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
