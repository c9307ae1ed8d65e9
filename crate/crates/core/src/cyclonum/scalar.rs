use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::basis::factorize;
use super::{ArithError, CyclotomicElement, RootOfUnity};

/// `√p` as an explicit cyclotomic element, for a prime `p`.
pub fn sqrt_prime(p: u64) -> CyclotomicElement {
    if p == 2 {
        return CyclotomicElement::root_of_unity(8, 1) + CyclotomicElement::root_of_unity(8, -1);
    }
    let half = (p - 1) / 2;
    let mut counts = vec![0i64; p as usize];
    for x in 1..p {
        counts[x as usize] = if pow_mod(x, half, p) == 1 { 1 } else { -1 };
    }
    let g = CyclotomicElement::from_dense_counts(p, &mut counts);
    if p % 4 == 1 {
        g
    } else {
        g.mul_root(&RootOfUnity::new(3, 4))
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// `rational + radical · √q` with both parts cyclotomic and `√q` kept formal.
///
/// `q = 0` marks a value without a radical part whose `q` is not yet fixed;
/// it adopts the `q` of whatever it is combined with.
#[derive(Clone, Debug)]
pub struct SymScalar {
    q: u64,
    rational: CyclotomicElement,
    radical: CyclotomicElement,
}

impl SymScalar {
    pub fn new(q: u64, rational: CyclotomicElement, radical: CyclotomicElement) -> Self {
        let q = if radical.is_zero() && q == 0 { 0 } else { q };
        assert!(q != 0 || radical.is_zero(), "radical part needs q");
        SymScalar { q, rational, radical }
    }

    pub fn from_element(e: CyclotomicElement) -> Self {
        SymScalar {
            q: 0,
            rational: e,
            radical: CyclotomicElement::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_element(CyclotomicElement::from_rational(r))
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_element(CyclotomicElement::from_integer(i))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn root(r: &RootOfUnity) -> Self {
        Self::from_element(r.to_element())
    }

    /// `q^{h/2}`.
    pub fn sqrt_q_pow(q: u64, h: i64) -> Self {
        let whole = h.div_euclid(2);
        let base = BigRational::from_integer(BigInt::from(q));
        let mag = if whole >= 0 {
            num_traits::pow(base, whole as usize)
        } else {
            num_traits::pow(base.recip(), whole.unsigned_abs() as usize)
        };
        let mag = CyclotomicElement::from_rational(mag);
        if h.rem_euclid(2) == 0 {
            Self::from_element(mag)
        } else {
            SymScalar::new(q, CyclotomicElement::zero(), mag)
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rational_part(&self) -> &CyclotomicElement {
        &self.rational
    }

    pub fn radical_part(&self) -> &CyclotomicElement {
        &self.radical
    }

    fn join_q(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, x) | (x, 0) => x,
            (x, y) => {
                assert_eq!(x, y, "combining values over different q");
                x
            }
        }
    }

    /// `√q` as an explicit cyclotomic element.
    pub fn sqrt_q_element(q: u64) -> CyclotomicElement {
        let f = factorize(q);
        assert!(f.len() == 1, "q = {q} is not a prime power");
        let (p, e) = f[0];
        let c = CyclotomicElement::from_integer(p.pow(e / 2) as i64);
        if e % 2 == 0 {
            c
        } else {
            &c * &sqrt_prime(p)
        }
    }

    /// Exact value as a cyclotomic element, expanding `√q`.
    pub fn to_element(&self) -> CyclotomicElement {
        if self.radical.is_zero() {
            return self.rational.clone();
        }
        &self.rational + &(&self.radical * &Self::sqrt_q_element(self.q))
    }

    pub fn is_zero(&self) -> bool {
        match (self.rational.is_zero(), self.radical.is_zero()) {
            (_, true) => self.rational.is_zero(),
            (true, false) => false,
            (false, false) => self.to_element().is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &SymScalar::one()).is_zero()
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        SymScalar {
            q: self.q,
            rational: &self.rational * c,
            radical: &self.radical * c,
        }
    }

    pub fn mul_root(&self, r: &RootOfUnity) -> Self {
        SymScalar {
            q: self.q,
            rational: self.rational.mul_root(r),
            radical: self.radical.mul_root(r),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = SymScalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.radical.is_zero() {
            return Ok(SymScalar::from_element(self.rational.inv()?));
        }
        let qe = CyclotomicElement::from_integer(self.q as i64);
        if self.rational.is_zero() {
            // (b√q)^{-1} = b^{-1} √q / q
            let b_inv = self.radical.inv()?;
            return Ok(SymScalar::new(
                self.q,
                CyclotomicElement::zero(),
                b_inv.scale(&BigRational::new(BigInt::one(), BigInt::from(self.q))),
            ));
        }
        let norm = &(&self.rational * &self.rational) - &(&qe * &(&self.radical * &self.radical));
        if norm.is_zero() {
            // a = ±b√q as numbers, so the value is 0 or the cyclotomic 2a.
            return Ok(SymScalar::from_element(self.to_element().inv()?));
        }
        let ni = norm.inv()?;
        Ok(SymScalar::new(self.q, &self.rational * &ni, -(&self.radical * &ni)))
    }

    pub fn embed_complex(&self) -> Complex64 {
        let s = (self.q as f64).sqrt();
        self.rational.embed_complex() + self.radical.embed_complex() * s
    }

    fn add_impl(a: &SymScalar, b: &SymScalar, sign: bool) -> SymScalar {
        let q = Self::join_q(a.q, b.q);
        if sign {
            SymScalar::new(q, &a.rational + &b.rational, &a.radical + &b.radical)
        } else {
            SymScalar::new(q, &a.rational - &b.rational, &a.radical - &b.radical)
        }
    }

    fn mul_impl(a: &SymScalar, b: &SymScalar) -> SymScalar {
        let q = Self::join_q(a.q, b.q);
        let mut rational = &a.rational * &b.rational;
        let mut radical = CyclotomicElement::zero();
        if !a.radical.is_zero() && !b.radical.is_zero() {
            rational = rational + (&a.radical * &b.radical).scale_int(q as i64);
        }
        if !b.radical.is_zero() {
            radical = radical + &a.rational * &b.radical;
        }
        if !a.radical.is_zero() {
            radical = radical + &a.radical * &b.rational;
        }
        SymScalar::new(q, rational, radical)
    }
}

impl PartialEq for SymScalar {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for SymScalar {}

impl From<CyclotomicElement> for SymScalar {
    fn from(e: CyclotomicElement) -> Self {
        SymScalar::from_element(e)
    }
}

impl Add<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn add(self, rhs: &SymScalar) -> SymScalar {
        SymScalar::add_impl(self, rhs, true)
    }
}

impl Sub<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn sub(self, rhs: &SymScalar) -> SymScalar {
        SymScalar::add_impl(self, rhs, false)
    }
}

impl Mul<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: &SymScalar) -> SymScalar {
        SymScalar::mul_impl(self, rhs)
    }
}

impl Add for SymScalar {
    type Output = SymScalar;
    fn add(self, rhs: SymScalar) -> SymScalar {
        SymScalar::add_impl(&self, &rhs, true)
    }
}

impl Sub for SymScalar {
    type Output = SymScalar;
    fn sub(self, rhs: SymScalar) -> SymScalar {
        SymScalar::add_impl(&self, &rhs, false)
    }
}

impl Mul for SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: SymScalar) -> SymScalar {
        SymScalar::mul_impl(&self, &rhs)
    }
}

impl Neg for &SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        SymScalar {
            q: self.q,
            rational: -&self.rational,
            radical: -&self.radical,
        }
    }
}

impl Neg for SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        -&self
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = !self.rational.is_zero();
        let b = !self.radical.is_zero();
        let radical = |f: &mut fmt::Formatter<'_>| {
            if self.radical.is_one() {
                write!(f, "sqrt({})", self.q)
            } else if self.radical.to_rational().is_some() {
                write!(f, "{}*sqrt({})", self.radical, self.q)
            } else {
                write!(f, "({})*sqrt({})", self.radical, self.q)
            }
        };
        match (a, b) {
            (_, false) => write!(f, "{}", self.rational),
            (false, true) => radical(f),
            (true, true) => {
                write!(f, "{} + ", self.rational)?;
                radical(f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_prime_squares() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let s = sqrt_prime(p);
            assert_eq!(&s * &s, CyclotomicElement::from_integer(p as i64));
            assert!((s.embed_complex().re - (p as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn formal_radical_arithmetic() {
        let r = SymScalar::sqrt_q_pow(5, 1);
        assert_eq!(&r * &r, SymScalar::from_integer(5));
        assert_eq!(SymScalar::sqrt_q_pow(5, 3), &r * &SymScalar::from_integer(5));
        assert_eq!(SymScalar::sqrt_q_pow(25, -2), SymScalar::from_rational(BigRational::new(1.into(), 25.into())));
        let mixed = SymScalar::new(5, CyclotomicElement::from_integer(2), CyclotomicElement::from_integer(1));
        assert!((&mixed * &mixed.inv().unwrap()).is_one());
        // a formal radical equal to a cyclotomic value
        assert_eq!(SymScalar::sqrt_q_pow(5, 1), SymScalar::from_element(sqrt_prime(5)));
        assert_eq!(SymScalar::sqrt_q_pow(5, 1).to_string(), "sqrt(5)");
    }
}
