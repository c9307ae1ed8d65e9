use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, PrimInt, Signed, ToPrimitive, Zero};

use super::basis::{euler_phi, Basis};
use super::poly;
use super::{ArithError, RootOfUnity};

/// Largest `φ(N)` for which [`CyclotomicElement::inv`] runs the polynomial
/// extended Euclid algorithm.
pub const MAX_INVERSION_DEGREE: u64 = 4096;

/// Orders up to this size use a dense scratch buffer in multiplication.
const DENSE_SCRATCH_LIMIT: u64 = 1 << 22;

/// An exact element of `Q(ζ_N)`.
///
/// Stored as a sparse map from exponents to rational coefficients over the
/// basis described in [`super::basis`]. Elements of different orders can be
/// mixed freely; results live in the least common multiple of the orders.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    order: u64,
    terms: BTreeMap<u64, BigRational>,
}

fn rat(i: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Exponent-coefficient pairs, their common denominator, and the largest coefficient magnitude.
type IntegerForm = (Vec<(u64, i128)>, BigInt, u128);

impl CyclotomicElement {
    pub fn zero() -> Self {
        CyclotomicElement {
            order: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(rat(i as i128))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        CyclotomicElement { order: 1, terms }
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n > 0);
        let e = (k as i128).rem_euclid(n as i128) as u64;
        Self::from_terms(n, [(e, BigRational::one())])
    }

    /// `Σ c · ζ_order^k` over the given pairs; exponents need not be reduced.
    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut raw: HashMap<u64, BigRational> = HashMap::new();
        for (k, c) in terms {
            if !c.is_zero() {
                *raw.entry(k % order).or_insert_with(BigRational::zero) += c;
            }
        }
        Self::canonicalize(order, raw)
    }

    /// Builds `Σ counts[k] · ζ_order^k`. The buffer is reduced in place.
    pub fn from_dense_counts<T: PrimInt + Signed>(order: u64, counts: &mut [T]) -> Self {
        Basis::get(order).reduce_dense(counts);
        let terms = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, rat(c.to_i128().expect("count fits i128"))))
            .collect();
        CyclotomicElement { order, terms }
    }

    fn canonicalize(order: u64, raw: HashMap<u64, BigRational>) -> Self {
        let basis = Basis::get(order);
        let mut terms: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (k, c) in raw {
            if c.is_zero() {
                continue;
            }
            basis.expand(k, &mut |e, s| {
                let slot = terms.entry(e).or_insert_with(BigRational::zero);
                if s > 0 {
                    *slot += &c;
                } else {
                    *slot -= &c;
                }
            });
        }
        terms.retain(|_, c| !c.is_zero());
        CyclotomicElement { order, terms }
    }

    /// The order `N` of the ambient field this value is currently stored in.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|r| r.is_one())
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The same value written over `ζ_m`; `m` must be a multiple of the order.
    pub fn coerce(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.order), "cannot coerce order {} into {m}", self.order);
        if m == self.order {
            return self.clone();
        }
        let f = m / self.order;
        Self::canonicalize(m, self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect())
    }

    /// The same value written over the smallest cyclotomic field containing it.
    pub fn reduce_order(&self) -> Self {
        let g = self.terms.keys().fold(self.order, |g, k| g.gcd(k));
        if g == 1 {
            return self.clone();
        }
        let n = self.order / g;
        Self::canonicalize(n, self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect())
    }

    /// The order of the smallest cyclotomic field containing this value.
    pub fn minimal_order(&self) -> u64 {
        self.reduce_order().order
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.order.lcm(&b.order);
        (a.coerce(m), b.coerce(m))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CyclotomicElement {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn scale_int(&self, i: i64) -> Self {
        self.scale(&rat(i as i128))
    }

    /// Multiplication by a root of unity.
    pub fn mul_root(&self, r: &RootOfUnity) -> Self {
        if r.is_one() {
            return self.clone();
        }
        let m = self.order.lcm(&r.order());
        let f = m / self.order;
        let shift = r.exponent_in(m);
        Self::canonicalize(
            m,
            self.terms
                .iter()
                .map(|(k, c)| ((k * f + shift) % m, c.clone()))
                .collect(),
        )
    }

    /// Image under `ζ ↦ ζ^t`; `t` must be prime to the order.
    pub fn galois(&self, t: i64) -> Self {
        let n = self.order;
        if n == 1 {
            return self.clone();
        }
        let tt = (t as i128).rem_euclid(n as i128) as u128;
        assert_eq!((tt as u64).gcd(&n), 1, "galois exponent not a unit");
        Self::canonicalize(
            n,
            self.terms
                .iter()
                .map(|(k, c)| (((*k as u128 * tt) % n as u128) as u64, c.clone()))
                .collect(),
        )
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Integer coefficients with a common denominator, if small enough for i128.
    fn integer_form(&self) -> Option<IntegerForm> {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let mut max = 0u128;
        let mut out = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let v = (c.numer() * (&den / c.denom())).to_i128()?;
            max = max.max(v.unsigned_abs());
            out.push((*k, v));
        }
        Some((out, den, max))
    }

    fn mul_impl(a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return Self::zero();
        }
        if let Some(r) = a.to_rational() {
            return b.scale(&r);
        }
        if let Some(r) = b.to_rational() {
            return a.scale(&r);
        }
        let (a, b) = Self::common(a, b);
        let n = a.order;
        if let (Some((xa, da, ma)), Some((xb, db, mb))) = (a.integer_form(), b.integer_form()) {
            let bound = (ma as f64) * (mb as f64) * (xa.len() as f64) * (xb.len() as f64);
            if bound < 2f64.powi(120) {
                let den = BigRational::new(BigInt::one(), da * db);
                return Self::mul_integer(n, &xa, &xb).scale(&den);
            }
        }
        let mut raw: HashMap<u64, BigRational> = HashMap::new();
        for (k1, c1) in &a.terms {
            for (k2, c2) in &b.terms {
                *raw.entry((k1 + k2) % n).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        Self::canonicalize(n, raw)
    }

    fn mul_integer(n: u64, xa: &[(u64, i128)], xb: &[(u64, i128)]) -> Self {
        if n <= DENSE_SCRATCH_LIMIT {
            let mut buf = vec![0i128; n as usize];
            for (k1, c1) in xa {
                for (k2, c2) in xb {
                    let k = ((k1 + k2) % n) as usize;
                    buf[k] += c1 * c2;
                }
            }
            return Self::from_dense_counts(n, &mut buf);
        }
        let mut raw: HashMap<u64, i128> = HashMap::new();
        for (k1, c1) in xa {
            for (k2, c2) in xb {
                *raw.entry((k1 + k2) % n).or_default() += c1 * c2;
            }
        }
        let basis = Basis::get(n);
        let mut acc: HashMap<u64, i128> = HashMap::new();
        for (k, c) in raw {
            if c != 0 {
                basis.expand(k, &mut |e, s| *acc.entry(e).or_default() += s as i128 * c);
            }
        }
        CyclotomicElement {
            order: n,
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (k, rat(c)))
                .collect(),
        }
    }

    fn add_impl(a: &Self, b: &Self, sign: bool) -> Self {
        let (mut a, b) = Self::common(a, b);
        for (k, c) in b.terms {
            let slot = a.terms.entry(k).or_insert_with(BigRational::zero);
            if sign {
                *slot += c;
            } else {
                *slot -= c;
            }
            if slot.is_zero() {
                a.terms.remove(&k);
            }
        }
        a
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one();
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

    pub fn pow_signed(&self, e: i64) -> Result<Self, ArithError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            let root = CyclotomicElement::root_of_unity(self.order, -(*k as i64));
            return Ok(root.scale(&c.recip()));
        }
        let r = self.reduce_order();
        let n = r.order;
        let phi = euler_phi(n);
        if phi > MAX_INVERSION_DEGREE {
            return Err(ArithError::FieldTooLarge { order: n, degree: phi });
        }
        let mut dense = vec![BigRational::zero(); n as usize];
        for (k, c) in &r.terms {
            dense[*k as usize] = c.clone();
        }
        let modulus = poly::from_i64(&poly::cyclotomic_poly(n));
        let inv = poly::inverse_mod(&dense, &modulus).ok_or(ArithError::NonInvertible)?;
        Ok(Self::from_terms(n, inv.into_iter().enumerate().map(|(k, c)| (k as u64, c))))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * &other.inv()?)
    }

    /// Numerical value under `ζ_N ↦ exp(2πi/N)`.
    pub fn embed_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.terms
            .iter()
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * (*k as f64) / n;
                let v = c.to_f64().unwrap_or(f64::NAN);
                Complex64::new(v * theta.cos(), v * theta.sin())
            })
            .sum()
    }
}

impl CyclotomicElement {
    /// A representation with few terms for display.
    ///
    /// For an odd prime power order `p^e`, each block `{t + j·p^{e-1}}` sums
    /// to zero, so a constant may be subtracted from a block; the constant is
    /// chosen to minimize the number of nonzero terms, preferring to clear
    /// the `j = 0` slot on ties.
    fn sparsest_terms(&self) -> Vec<(u64, BigRational)> {
        let basis = Basis::get(self.order);
        let canonical: Vec<(u64, BigRational)> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        if basis.comps.len() != 1 || basis.comps[0].p == 2 {
            return canonical;
        }
        let comp = &basis.comps[0];
        let mut out = Vec::new();
        for t in 0..comp.top {
            let block: Vec<BigRational> = (0..comp.p)
                .map(|j| self.terms.get(&(t + j * comp.top)).cloned().unwrap_or_else(BigRational::zero))
                .collect();
            if block.iter().all(Zero::is_zero) {
                continue;
            }
            let count = |s: &BigRational| block.iter().filter(|v| *v != s).count();
            let mut best = BigRational::zero();
            let mut best_count = count(&best);
            for s in &block {
                let n = count(s);
                if n < best_count || (n == best_count && *s == block[0] && best.is_zero()) {
                    best = s.clone();
                    best_count = n;
                }
            }
            for (j, v) in block.iter().enumerate() {
                let d = v - &best;
                if !d.is_zero() {
                    out.push((t + j as u64 * comp.top, d));
                }
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.terms == other.terms;
        }
        let (a, b) = Self::common(self, other);
        a.terms == b.terms
    }
}

impl Eq for CyclotomicElement {}

impl Default for CyclotomicElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CyclotomicElement {
    fn from(i: i64) -> Self {
        Self::from_integer(i)
    }
}

impl From<RootOfUnity> for CyclotomicElement {
    fn from(r: RootOfUnity) -> Self {
        r.to_element()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CyclotomicElement> for &CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, rhs: &CyclotomicElement) -> CyclotomicElement {
                $body(self, rhs)
            }
        }
        impl $tr<CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, rhs: CyclotomicElement) -> CyclotomicElement {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, rhs: &CyclotomicElement) -> CyclotomicElement {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CyclotomicElement::add_impl(a, b, true));
binop!(Sub, sub, |a, b| CyclotomicElement::add_impl(a, b, false));
binop!(Mul, mul, CyclotomicElement::mul_impl);

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

impl std::iter::Sum for CyclotomicElement {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_order();
        if r.terms.is_empty() {
            return write!(f, "0");
        }
        let shown = r.sparsest_terms();
        for (i, (k, c)) in shown.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let monomial = match *k {
                0 => String::new(),
                1 => format!("z{}", r.order),
                _ => format!("z{}^{}", r.order, k),
            };
            if monomial.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{abs}*{monomial}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CyclotomicElement {
        CyclotomicElement::root_of_unity(n, k)
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..60u64 {
            let s: CyclotomicElement = (0..n as i64).map(|k| z(n, k)).sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn mixed_orders() {
        assert_eq!(z(4, 1) * z(4, 1), CyclotomicElement::from_integer(-1));
        assert_eq!(z(6, 1), -z(3, 2));
        assert_eq!(z(12, 3), z(4, 1));
        assert_eq!((z(3, 1) - z(3, 2)).to_string(), "z3 - z3^2");
        assert_eq!(z(10, 5).to_string(), "-1");
    }

    #[test]
    fn gauss_sum_square() {
        // (Σ_x (x/7) ζ_7^x)^2 = -7
        let g = [1i64, 2, 4].iter().map(|&x| z(7, x)).sum::<CyclotomicElement>()
            - [3i64, 5, 6].iter().map(|&x| z(7, x)).sum::<CyclotomicElement>();
        assert_eq!(&g * &g, CyclotomicElement::from_integer(-7));
        assert_eq!(g.minimal_order(), 7);
    }

    #[test]
    fn inverse() {
        let x = CyclotomicElement::from_integer(2) + z(15, 1) + z(15, 4).scale_int(3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CyclotomicElement::zero().inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn embedding_matches() {
        let x = z(12, 1) + z(12, 5).scale_int(2);
        let w = std::f64::consts::PI / 6.0;
        let expected = Complex64::new(w.cos(), w.sin()) + Complex64::new((5.0 * w).cos(), (5.0 * w).sin()) * 2.0;
        assert!((x.embed_complex() - expected).norm() < 1e-12);
    }

    #[test]
    fn dense_counts_match_sparse() {
        let n = 45u64;
        let mut counts: Vec<i64> = (0..n as i64).map(|k| (k * 7) % 5 - 2).collect();
        let sparse = CyclotomicElement::from_terms(
            n,
            counts.iter().enumerate().map(|(k, c)| (k as u64, rat(*c as i128))),
        );
        assert_eq!(CyclotomicElement::from_dense_counts(n, &mut counts), sparse);
    }
}
