use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Elem, FiniteField};
use crate::cyclonum::{CyclotomicElement, RootOfUnity};
use crate::{Error, Result};

/// A multiplicative character `g^k ↦ ζ_{q-1}^{a·k}`.
#[derive(Clone, Debug)]
pub struct MultCharK {
    field: Arc<FiniteField>,
    exponent: u64,
}

impl MultCharK {
    pub fn new(field: &Arc<FiniteField>, exponent: i64) -> Self {
        let n = (field.q() - 1) as i64;
        MultCharK {
            field: field.clone(),
            exponent: exponent.rem_euclid(n) as u64,
        }
    }

    pub fn trivial(field: &Arc<FiniteField>) -> Self {
        Self::new(field, 0)
    }

    /// The unique character of order two.
    pub fn quadratic(field: &Arc<FiniteField>) -> Self {
        Self::new(field, ((field.q() - 1) / 2) as i64)
    }

    /// The character `g ↦ ζ_d` generating the characters of order dividing `d`.
    pub fn torsion_generator(field: &Arc<FiniteField>, d: u64) -> Self {
        assert!((field.q() - 1).is_multiple_of(d), "d must divide q - 1");
        Self::new(field, ((field.q() - 1) / d) as i64)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn order(&self) -> u64 {
        RootOfUnity::new(self.exponent as i128, self.field.q() - 1).order()
    }

    pub fn eval(&self, x: Elem) -> RootOfUnity {
        assert!(x != 0, "multiplicative character at zero");
        let k = self.field.dlog(x) as u128 * self.exponent as u128;
        RootOfUnity::new(k as i128, self.field.q() - 1)
    }

    /// Value at the image of an integer prime to `p`.
    pub fn eval_int(&self, n: i64) -> RootOfUnity {
        self.eval(self.field.from_int(n))
    }

    /// `±1` value of a character of order at most two.
    pub fn eval_sign(&self, x: Elem) -> i64 {
        let r = self.eval(x);
        match r.order() {
            1 => 1,
            2 => -1,
            o => panic!("character value of order {o} is not a sign"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.field, (self.exponent + other.exponent) as i64)
    }

    pub fn pow(&self, e: i64) -> Self {
        let n = (self.field.q() - 1) as i128;
        Self::new(&self.field, (self.exponent as i128 * e as i128).rem_euclid(n) as i64)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }
}

impl PartialEq for MultCharK {
    fn eq(&self, other: &Self) -> bool {
        self.exponent == other.exponent && self.field.q() == other.field.q()
    }
}

/// An additive character `x ↦ ζ_p^{Tr(t·x)}`.
#[derive(Clone, Debug)]
pub struct AddCharK {
    field: Arc<FiniteField>,
    shift: Elem,
}

impl AddCharK {
    pub fn new(field: &Arc<FiniteField>, shift: Elem) -> Self {
        assert!((shift as u64) < field.q());
        AddCharK {
            field: field.clone(),
            shift,
        }
    }

    /// Shift `1`.
    pub fn standard(field: &Arc<FiniteField>) -> Self {
        Self::new(field, 1)
    }

    pub fn shift(&self) -> Elem {
        self.shift
    }

    pub fn is_trivial(&self) -> bool {
        self.shift == 0
    }

    pub fn eval(&self, x: Elem) -> RootOfUnity {
        let t = self.field.trace(self.field.mul(self.shift, x));
        RootOfUnity::new(t as i128, self.field.p())
    }

    /// `x ↦ ψ(a·x)`.
    pub fn scaled(&self, a: Elem) -> Self {
        Self::new(&self.field, self.field.mul(self.shift, a))
    }
}

/// `Σ_{x ≠ 0} χ(x) ψ(x)` by direct summation.
pub fn gauss_sum(chi: &MultCharK, psi: &AddCharK) -> Result<CyclotomicElement> {
    let k = chi.field();
    if psi.is_trivial() {
        return Err(Error::Precondition("Gauss sum needs a nontrivial additive character".into()));
    }
    let p = k.p();
    let m = k.q() - 1;
    let n = p * m;
    let mut counts = vec![0i64; n as usize];
    for x in k.nonzero() {
        let e = chi.eval(x).exponent_in(m) * p + psi.eval(x).exponent_in(p) * m;
        counts[(e % n) as usize] += 1;
    }
    Ok(CyclotomicElement::from_dense_counts(n, &mut counts))
}

/// `Σ_{x} ψ(x²)`.
pub fn quad_gauss_sum(psi: &AddCharK) -> Result<CyclotomicElement> {
    if psi.is_trivial() {
        return Err(Error::Precondition("quadratic Gauss sum needs a nontrivial additive character".into()));
    }
    let k = &psi.field;
    let p = k.p();
    let mut counts = vec![0i64; p as usize];
    for x in k.elements() {
        counts[psi.eval(k.mul(x, x)).exponent_in(p) as usize] += 1;
    }
    Ok(CyclotomicElement::from_dense_counts(p, &mut counts))
}

/// Complex value of a Gauss sum, by floating-point summation.
pub fn gauss_sum_complex(chi: &MultCharK, psi: &AddCharK) -> Complex64 {
    chi.field()
        .nonzero()
        .map(|x| chi.eval(x).to_complex() * psi.eval(x).to_complex())
        .sum()
}

pub fn quad_gauss_sum_complex(psi: &AddCharK) -> Complex64 {
    let k = &psi.field;
    k.elements().map(|x| psi.eval(k.mul(x, x)).to_complex()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sum_q3() {
        let k = Arc::new(FiniteField::new(3, 1).unwrap());
        let g = gauss_sum(&MultCharK::quadratic(&k), &AddCharK::standard(&k)).unwrap();
        assert_eq!(g.to_string(), "z3 - z3^2");
    }

    #[test]
    fn trivial_character_sum() {
        let k = Arc::new(FiniteField::new(3, 2).unwrap());
        let g = gauss_sum(&MultCharK::trivial(&k), &AddCharK::standard(&k)).unwrap();
        assert_eq!(g, CyclotomicElement::from_integer(-1));
        assert!(gauss_sum(&MultCharK::trivial(&k), &AddCharK::new(&k, 0)).is_err());
    }

    #[test]
    fn quadratic_sums_square_to_signed_q() {
        for (p, f) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let k = Arc::new(FiniteField::new(p, f).unwrap());
            let g = quad_gauss_sum(&AddCharK::standard(&k)).unwrap();
            assert_eq!(&g * &g, CyclotomicElement::from_integer(k.sign() * k.q() as i64));
        }
    }
}
