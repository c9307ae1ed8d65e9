use std::fmt;

use num_complex::Complex64;

use super::weil::weil_index;
use crate::cyclonum::{QsLaurent, QsRational, SymScalar};
use crate::padic::{tau_direct, AddCharF, MultCharF};
use crate::report::Checkable;
use crate::Result;

/// γ, γ̃ and L-quotients as rational functions of `X = q^{-s}`.
pub type GammaValue = QsRational;

/// `coeff · X^degree` with `X = q^{-s}`.
#[derive(Clone, Debug)]
pub struct EpsMonomial {
    q: u64,
    pub coeff: SymScalar,
    pub degree: i64,
}

impl EpsMonomial {
    pub fn new(q: u64, coeff: SymScalar, degree: i64) -> Self {
        EpsMonomial { q, coeff, degree }
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, SymScalar::one(), 0)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.q, &self.coeff * &other.coeff, self.degree + other.degree)
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::new(self.q, self.coeff.inv()?, -self.degree))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(self.q, self.coeff.pow(e), self.degree * e as i64)
    }

    pub fn scale(&self, c: &SymScalar) -> Self {
        Self::new(self.q, &self.coeff * c, self.degree)
    }

    /// The substitution `s ↦ a·s + b_half/2`.
    pub fn affine(&self, a: i64, b_half: i64) -> Self {
        Self::new(
            self.q,
            &self.coeff * &SymScalar::sqrt_q_pow(self.q, -self.degree * b_half),
            a * self.degree,
        )
    }

    /// The value at `s = half/2`.
    pub fn at_half_integer(&self, half: i64) -> SymScalar {
        &self.coeff * &SymScalar::sqrt_q_pow(self.q, -self.degree * half)
    }

    pub fn to_laurent(&self) -> QsLaurent {
        QsLaurent::monomial(self.q, self.coeff.clone(), self.degree)
    }

    pub fn to_rational(&self) -> QsRational {
        QsRational::from_laurent(self.to_laurent())
    }
}

impl PartialEq for EpsMonomial {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coeff == other.coeff
    }
}

impl fmt::Display for EpsMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl Checkable for EpsMonomial {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.to_rational().approx()
    }
    fn doubled(&self) -> Self {
        self.scale(&SymScalar::from_integer(2))
    }
}

fn q_of(chi: &MultCharF) -> u64 {
    chi.context().p()
}

/// `L(s, χ) = 1/(1 - χ(p) X)` for unramified `χ`, and 1 otherwise.
pub fn l_factor(chi: &MultCharF) -> QsRational {
    let q = q_of(chi);
    if chi.is_ramified() {
        QsRational::one(q)
    } else {
        QsRational::new(QsLaurent::one(q), QsLaurent::one_minus(q, chi.at_uniformizer()))
    }
}

/// `ε(s, χ, ψ) = (χ^{-1}(p) q^{s-1/2})^{e(ψ)-e(χ)} τ(χ^{-1}, ψ)`.
pub fn epsilon_factor(chi: &MultCharF, psi: &AddCharF) -> Result<EpsMonomial> {
    let q = q_of(chi);
    let shift = psi.conductor() - chi.conductor() as i64;
    let tau = tau_direct(&chi.inv(), psi)?;
    let coeff = tau.mul_root(&chi.at_uniformizer().pow(-shift)) * SymScalar::sqrt_q_pow(q, -shift);
    Ok(EpsMonomial::new(q, coeff, -shift))
}

/// `ε(s, χ, ψ)^{-1} = χ(-1) ε(1-s, χ^{-1}, ψ)`, which avoids inverting a Gauss sum.
pub fn epsilon_inverse(chi: &MultCharF, psi: &AddCharF) -> Result<EpsMonomial> {
    let sign = SymScalar::root(&chi.eval_int(-1));
    Ok(epsilon_factor(&chi.inv(), psi)?.affine(-1, 2).scale(&sign))
}

/// `γ(s, χ, ψ) = ε(s, χ, ψ) L(1-s, χ^{-1}) / L(s, χ)`.
pub fn gamma_factor(chi: &MultCharF, psi: &AddCharF) -> Result<GammaValue> {
    let eps = epsilon_factor(chi, psi)?.to_rational();
    Ok(eps.mul(&l_factor(&chi.inv()).affine(-1, 2)).div(&l_factor(chi)))
}

/// `ε̃(1-s, χ^{-1}, ψ) = γ(ψ) χ(-1) ε(s+1/2, χ, ψ) / ε(2s, χ², ψ_2)`, as a function of `s`.
pub fn tilde_epsilon(chi: &MultCharF, psi: &AddCharF) -> Result<EpsMonomial> {
    tilde_epsilon_shifted(chi, psi, 1)
}

/// [`tilde_epsilon`] with `ε(s + half/2, χ, ψ)` in the numerator.
pub(crate) fn tilde_epsilon_shifted(chi: &MultCharF, psi: &AddCharF, half: i64) -> Result<EpsMonomial> {
    let weil = weil_index(psi)?;
    let sign = chi.eval_int(-1);
    let numerator = epsilon_factor(chi, psi)?.affine(1, half);
    let inverse_denominator = epsilon_inverse(&chi.pow(2), &psi.scaled_int(2))?.affine(2, 0);
    Ok(numerator
        .mul(&inverse_denominator)
        .scale(&SymScalar::from_element(weil.value().clone()))
        .scale(&SymScalar::root(&sign)))
}

/// `γ̃(1-s, χ^{-1}, ψ) = ε̃(1-s, χ^{-1}, ψ) L(1/2-s, χ^{-1}) L(2s, χ²) / (L(1/2+s, χ) L(1-2s, χ^{-2}))`.
pub fn tilde_gamma(chi: &MultCharF, psi: &AddCharF) -> Result<GammaValue> {
    let eps = tilde_epsilon(chi, psi)?.to_rational();
    let chi2 = chi.pow(2);
    let num = l_factor(&chi.inv()).affine(-1, 1).mul(&l_factor(&chi2).affine(2, 0));
    let den = l_factor(chi).affine(1, 1).mul(&l_factor(&chi2.inv()).affine(-2, 2));
    Ok(eps.mul(&num).div(&den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclonum::RootOfUnity;
    use crate::padic::PadicContext;
    use crate::report::TEST_POINT;
    use std::sync::Arc;

    fn ctx(p: u64) -> Arc<PadicContext> {
        PadicContext::new(p, 7).unwrap()
    }

    #[test]
    fn l_factors() {
        let c = ctx(7);
        let x = QsLaurent::monomial(7, SymScalar::one(), 1);
        let one = QsLaurent::one(7);
        let chi = MultCharF::trivial(&c);
        assert_eq!(l_factor(&chi), QsRational::new(one.clone(), one.sub(&x)));
        let ramified = MultCharF::of_level(&c, 1, 1, RootOfUnity::ONE);
        assert_eq!(l_factor(&ramified), QsRational::one(7));
        let z3 = RootOfUnity::new(1, 3);
        let chi = MultCharF::unramified(&c, z3);
        let expected = QsRational::new(one.clone(), one.sub(&x.scale(&SymScalar::root(&z3))));
        assert_eq!(l_factor(&chi), expected);
    }

    #[test]
    fn unramified_epsilon_is_one() {
        let c = ctx(7);
        let eps = epsilon_factor(&MultCharF::trivial(&c), &AddCharF::standard(&c)).unwrap();
        assert_eq!(eps, EpsMonomial::one(7));
        let gamma = gamma_factor(&MultCharF::trivial(&c), &AddCharF::standard(&c)).unwrap();
        let x = QsLaurent::monomial(7, SymScalar::one(), 1);
        let inv_x = QsLaurent::monomial(7, SymScalar::sqrt_q_pow(7, -2), -1);
        let one = QsLaurent::one(7);
        assert_eq!(gamma, QsRational::new(one.sub(&x), one.sub(&inv_x)));
    }

    #[test]
    fn gamma_equals_epsilon_when_ramified() {
        let c = ctx(5);
        let chi = MultCharF::of_level(&c, 2, 3, RootOfUnity::new(1, 4));
        let psi = AddCharF::new(&c, 1, 2);
        assert_eq!(gamma_factor(&chi, &psi).unwrap(), epsilon_factor(&chi, &psi).unwrap().to_rational());
    }

    #[test]
    fn epsilon_inverse_matches_division() {
        let c = ctx(5);
        let psi = AddCharF::new(&c, -1, 2);
        for m in 0..=3 {
            let t = MultCharF::conductor_indices(&c, m).last().unwrap();
            let chi = MultCharF::of_level(&c, m.max(1), t, RootOfUnity::new(1, 4));
            let eps = epsilon_factor(&chi, &psi).unwrap();
            assert_eq!(epsilon_inverse(&chi, &psi).unwrap(), eps.inv().unwrap());
        }
    }

    #[test]
    fn affine_matches_evaluation() {
        let eps = EpsMonomial::new(5, SymScalar::sqrt_q_pow(5, 1), 3);
        let s = TEST_POINT;
        let shifted = eps.affine(-2, 3);
        let direct = eps.to_rational().eval(-2.0 * s + 1.5);
        assert!((shifted.to_rational().eval(s) - direct).norm() < 1e-9);
    }

    #[test]
    fn tilde_epsilon_is_monomial_for_ramified_square() {
        let c = ctx(7);
        let chi = MultCharF::of_level(&c, 2, 1, RootOfUnity::ONE);
        let psi = AddCharF::standard(&c);
        let eps = tilde_epsilon(&chi, &psi).unwrap();
        assert_eq!(tilde_gamma(&chi, &psi).unwrap(), eps.to_rational());
    }
}
