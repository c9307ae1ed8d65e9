use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{RootOfUnity, SymScalar};

/// A Laurent polynomial `Σ c_k X^k` in `X = q^{-s}` with [`SymScalar`] coefficients.
#[derive(Clone, Debug)]
pub struct QsLaurent {
    q: u64,
    coeffs: BTreeMap<i64, SymScalar>,
}

impl QsLaurent {
    pub fn zero(q: u64) -> Self {
        QsLaurent {
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(q: u64) -> Self {
        Self::monomial(q, SymScalar::one(), 0)
    }

    /// `c · X^k`, i.e. `c · q^{-k s}`.
    pub fn monomial(q: u64, c: SymScalar, k: i64) -> Self {
        let mut out = Self::zero(q);
        if !c.is_zero() {
            out.coeffs.insert(k, c);
        }
        out
    }

    /// `1 - a·X`, the reciprocal of a local L-factor.
    pub fn one_minus(q: u64, a: &RootOfUnity) -> Self {
        Self::one(q).sub(&Self::monomial(q, SymScalar::root(a), 1))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, &SymScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(SymScalar::is_zero)
    }

    /// The single term of a monomial.
    pub fn as_monomial(&self) -> Option<(i64, &SymScalar)> {
        let mut nz = self.coeffs.iter().filter(|(_, c)| !c.is_zero());
        let first = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((*first.0, first.1))
    }

    fn clean(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let e = out.coeffs.entry(*k).or_insert_with(SymScalar::zero);
            *e = &*e + c;
        }
        out.clean()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QsLaurent {
            q: self.q,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.q);
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                let e = out.coeffs.entry(k1 + k2).or_insert_with(SymScalar::zero);
                *e = &*e + &(c1 * c2);
            }
        }
        out.clean()
    }

    pub fn scale(&self, c: &SymScalar) -> Self {
        QsLaurent {
            q: self.q,
            coeffs: self.coeffs.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
        .clean()
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::one(self.q), |acc, _| acc.mul(self))
    }

    /// The substitution `s ↦ a·s + b_half/2`.
    ///
    /// `X^k` becomes `q^{-k·b_half/2} · X^{a·k}`.
    pub fn affine(&self, a: i64, b_half: i64) -> Self {
        assert!(a != 0, "degenerate substitution");
        QsLaurent {
            q: self.q,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (a * k, c * &SymScalar::sqrt_q_pow(self.q, -k * b_half)))
                .collect(),
        }
    }

    /// `s ↦ d·s`.
    pub fn substitute(&self, d: i64) -> Self {
        self.affine(d, 0)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let x = (-s * (self.q as f64).ln()).exp();
        self.coeffs
            .iter()
            .map(|(k, c)| c.embed_complex() * x.powi(*k as i32))
            .sum()
    }
}

impl PartialEq for QsLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for QsLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*X"),
                _ => format!("({c})*X^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A quotient of two [`QsLaurent`]s; equality is tested by cross-multiplication.
#[derive(Clone, Debug)]
pub struct QsRational {
    num: QsLaurent,
    den: QsLaurent,
}

impl QsRational {
    pub fn new(num: QsLaurent, den: QsLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        QsRational { num, den }
    }

    pub fn from_laurent(num: QsLaurent) -> Self {
        let q = num.q;
        QsRational {
            num,
            den: QsLaurent::one(q),
        }
    }

    pub fn one(q: u64) -> Self {
        Self::from_laurent(QsLaurent::one(q))
    }

    pub fn numerator(&self) -> &QsLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &QsLaurent {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        QsRational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        QsRational::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Self {
        QsRational::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &SymScalar) -> Self {
        QsRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let n = e.unsigned_abs();
        QsRational {
            num: base.num.pow(n),
            den: base.den.pow(n),
        }
    }

    pub fn affine(&self, a: i64, b_half: i64) -> Self {
        QsRational {
            num: self.num.affine(a, b_half),
            den: self.den.affine(a, b_half),
        }
    }

    pub fn substitute(&self, d: i64) -> Self {
        self.affine(d, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }
}

impl PartialEq for QsRational {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for QsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_monomial().is_some_and(|(k, c)| k == 0 && c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_composes() {
        let q = 7;
        let p = QsLaurent::monomial(q, SymScalar::from_integer(3), 2).add(&QsLaurent::one_minus(q, &RootOfUnity::new(1, 3)));
        // (s ↦ 2s + 1/2) after (s ↦ -s + 1) is s ↦ -2s + 1/2 + ... check pointwise
        let s = Complex64::new(0.37, 0.11);
        let lhs = p.affine(-1, 2).affine(2, 1).eval(s);
        let rhs = p.eval(-(s * 2.0 + 0.5) + 1.0);
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn rational_equality() {
        let q = 5;
        let a = QsLaurent::one_minus(q, &RootOfUnity::minus_one());
        let b = QsLaurent::one_minus(q, &RootOfUnity::ONE);
        let r1 = QsRational::new(a.mul(&b), b.clone());
        let r2 = QsRational::from_laurent(a.clone());
        assert_eq!(r1, r2);
        assert_ne!(r1, QsRational::from_laurent(b));
        assert_eq!(r1.pow(-2).pow(-1), r2.mul(&r2));
    }
}
