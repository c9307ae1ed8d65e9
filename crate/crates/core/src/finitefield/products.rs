//! Exact comparison of products of Gauss sums.
//!
//! A product of `k` Gauss sums over `F_q` lives in `Z[ζ_n]`, `n = p(q-1)`,
//! but multiplying them out costs `O(φ(n)^2)` per factor. Instead both sides
//! of an identity are mapped to `Z[ζ_n]/ℓ ≅ F_ℓ^{φ(n)}` for primes `ℓ ≡ 1 mod n`,
//! where multiplication is pointwise. The conjugate `σ_t` of a Gauss sum is
//! again a Gauss sum, so one table per prime covers every embedding.
//!
//! The difference `x` of the two sides has integer coordinates in a Z-basis
//! of `Z[ζ_n]` bounded by the sum of the `ℓ¹` norms of the raw expansions of
//! both sides. If `x` vanishes modulo primes whose product exceeds twice that
//! bound, every coordinate is zero, so the comparison is exact.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::chars::{gauss_sum, gauss_sum_complex, quad_gauss_sum, quad_gauss_sum_complex, AddCharK, MultCharK};
use super::field::{pow_mod, Elem, FiniteField};
use crate::cyclonum::{factorize, CyclotomicElement, RootOfUnity};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumFactor {
    /// `G(χ_a, ψ_s)` with `χ_a(g^k) = ζ_{q-1}^{a k}` and shift `s`.
    Gauss { chi: u64, shift: Elem },
    /// `Σ_x ψ_s(x²)`.
    Quad { shift: Elem },
}

/// `coeff · root · Π factors`.
#[derive(Clone, Debug)]
pub struct SumProduct {
    coeff: BigRational,
    root: RootOfUnity,
    factors: Vec<SumFactor>,
}

impl SumProduct {
    pub fn one() -> Self {
        SumProduct {
            coeff: BigRational::one(),
            root: RootOfUnity::ONE,
            factors: Vec::new(),
        }
    }

    pub fn gauss(chi: &MultCharK, psi: &AddCharK) -> Self {
        Self::one().times(SumFactor::Gauss {
            chi: chi.exponent(),
            shift: psi.shift(),
        })
    }

    pub fn quad(psi: &AddCharK) -> Self {
        Self::one().times(SumFactor::Quad { shift: psi.shift() })
    }

    pub fn times(mut self, f: SumFactor) -> Self {
        self.factors.push(f);
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        SumProduct {
            coeff: &self.coeff * &other.coeff,
            root: self.root.mul(&other.root),
            factors,
        }
    }

    pub fn scale(mut self, c: &BigRational) -> Self {
        self.coeff *= c;
        self
    }

    pub fn scale_int(self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn mul_root(mut self, r: &RootOfUnity) -> Self {
        self.root = self.root.mul(r);
        self
    }

    pub fn factors(&self) -> &[SumFactor] {
        &self.factors
    }

    /// Log₂ of the `ℓ¹` norm of the raw expansion, an upper bound on every
    /// coordinate of the value.
    fn log2_norm(&self, q: u64) -> f64 {
        let c = self.coeff.numer().abs().to_f64().unwrap_or(f64::MAX).log2().max(0.0);
        c + self
            .factors
            .iter()
            .map(|f| match f {
                SumFactor::Gauss { .. } => ((q - 1) as f64).log2(),
                SumFactor::Quad { .. } => (q as f64).log2(),
            })
            .sum::<f64>()
    }

    /// Exact value by direct multiplication.
    pub fn to_element(&self, field: &Arc<FiniteField>) -> Result<CyclotomicElement> {
        let mut acc = CyclotomicElement::from_rational(self.coeff.clone()).mul_root(&self.root);
        for f in &self.factors {
            let v = match *f {
                SumFactor::Gauss { chi, shift } => gauss_sum(&MultCharK::new(field, chi as i64), &AddCharK::new(field, shift))?,
                SumFactor::Quad { shift } => quad_gauss_sum(&AddCharK::new(field, shift))?,
            };
            acc = &acc * &v;
        }
        Ok(acc)
    }

    pub fn to_complex(&self, field: &Arc<FiniteField>) -> Complex64 {
        let mut acc = self.root.to_complex() * self.coeff.to_f64().unwrap_or(f64::NAN);
        for f in &self.factors {
            acc *= match *f {
                SumFactor::Gauss { chi, shift } => gauss_sum_complex(&MultCharK::new(field, chi as i64), &AddCharK::new(field, shift)),
                SumFactor::Quad { shift } => quad_gauss_sum_complex(&AddCharK::new(field, shift)),
            };
        }
        acc
    }
}

impl fmt::Display for SumProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coeff.is_one() || (self.root.is_one() && self.factors.is_empty()) {
            parts.push(self.coeff.to_string());
        }
        if !self.root.is_one() {
            parts.push(self.root.to_string());
        }
        for fac in &self.factors {
            parts.push(match fac {
                SumFactor::Gauss { chi, shift } => format!("G(chi^{chi},psi_{shift})"),
                SumFactor::Quad { shift } => format!("Gq(psi_{shift})"),
            });
        }
        write!(f, "{}", parts.join("*"))
    }
}

struct PrimeTables {
    modulus: u64,
    /// `w^k` for a primitive `n`-th root `w`.
    powers: Vec<u64>,
    /// Image of `G(χ_a, ψ_s)` at index `a·q + s`.
    gauss: Vec<u64>,
    /// Image of the quadratic sum with shift `s`.
    quad: Vec<u64>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Multimodular images of Gauss sums over one finite field.
pub struct ProductComparer {
    field: Arc<FiniteField>,
    n: u64,
    units: Vec<u64>,
    tables: Mutex<Vec<Arc<PrimeTables>>>,
}

impl ProductComparer {
    pub fn new(field: &Arc<FiniteField>) -> Self {
        let n = field.p() * (field.q() - 1);
        ProductComparer {
            field: field.clone(),
            n,
            units: (1..n).filter(|t| t.gcd(&n) == 1).collect(),
            tables: Mutex::new(Vec::new()),
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    fn build_tables(&self, modulus: u64) -> PrimeTables {
        let n = self.n;
        let k = &self.field;
        let (p, q) = (k.p(), k.q());
        let m = q - 1;
        let prime_factors: Vec<u64> = factorize(n).into_iter().map(|(r, _)| r).collect();
        let w = (2..)
            .map(|h| pow_mod(h, (modulus - 1) / n, modulus))
            .find(|w| prime_factors.iter().all(|r| pow_mod(*w, n / r, modulus) != 1))
            .unwrap();
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = 1u64;
        for _ in 0..n {
            powers.push(cur);
            cur = mulmod(cur, w, modulus);
        }
        let mut gauss = vec![0u64; (m * q) as usize];
        for s in 1..q {
            let traces: Vec<u64> = (0..m).map(|j| k.trace(k.mul(s as Elem, k.exp(j as i64)))).collect();
            for a in 0..m {
                let mut acc = 0u64;
                for (j, tr) in traces.iter().enumerate() {
                    let e = ((a * j as u64) % m) * p + tr * m;
                    acc += powers[(e % n) as usize];
                    if acc >= modulus {
                        acc -= modulus;
                    }
                }
                gauss[(a * q + s) as usize] = acc;
            }
        }
        let mut quad = vec![0u64; q as usize];
        for s in 1..q {
            let mut acc = 0u64;
            for x in k.elements() {
                let tr = k.trace(k.mul(s as Elem, k.mul(x, x)));
                acc += powers[(tr * m % n) as usize];
                if acc >= modulus {
                    acc -= modulus;
                }
            }
            quad[s as usize] = acc;
        }
        PrimeTables {
            modulus,
            powers,
            gauss,
            quad,
        }
    }

    fn tables(&self, count: usize) -> Vec<Arc<PrimeTables>> {
        let mut tables = self.tables.lock().unwrap();
        while tables.len() < count {
            let mut candidate = match tables.last() {
                Some(t) => t.modulus - self.n,
                None => (1u64 << 62) / self.n * self.n + 1,
            };
            while !is_prime_u64(candidate) {
                candidate -= self.n;
            }
            tables.push(Arc::new(self.build_tables(candidate)));
        }
        tables[..count].to_vec()
    }

    fn image(&self, x: &SumProduct, t: u64, tb: &PrimeTables, scale: &BigInt) -> u64 {
        let l = tb.modulus;
        let k = &self.field;
        let q = k.q();
        let m = q - 1;
        let tp = k.from_int((t % k.p()) as i64);
        let c = (x.coeff.numer() * scale / x.coeff.denom()).mod_floor(&BigInt::from(l));
        let mut acc = c.to_u64().unwrap();
        let root_exp = x.root.exponent_in(self.n);
        acc = mulmod(acc, tb.powers[((root_exp as u128 * t as u128) % self.n as u128) as usize], l);
        for f in &x.factors {
            let v = match *f {
                SumFactor::Gauss { chi, shift } => {
                    let a = (chi as u128 * t as u128 % m as u128) as u64;
                    let s = k.mul(shift, tp) as u64;
                    tb.gauss[(a * q + s) as usize]
                }
                SumFactor::Quad { shift } => tb.quad[k.mul(shift, tp) as usize],
            };
            acc = mulmod(acc, v, l);
        }
        acc
    }

    /// Exact equality of two products.
    pub fn equal(&self, lhs: &SumProduct, rhs: &SumProduct) -> bool {
        for x in [lhs, rhs] {
            assert!(self.n.is_multiple_of(x.root.order()), "root of unity outside Q(ζ_n)");
            if x.factors.iter().any(|f| match f {
                SumFactor::Gauss { shift, .. } | SumFactor::Quad { shift } => *shift == 0,
            }) {
                panic!("Gauss sum with trivial additive character");
            }
        }
        let scale = lhs.coeff.denom().lcm(rhs.coeff.denom());
        let q = self.field.q();
        let scale_bits = scale.to_f64().unwrap_or(f64::MAX).log2();
        let bound_bits = 1.0 + scale_bits + lhs.log2_norm(q).max(rhs.log2_norm(q)) + 1.0;
        let count = ((bound_bits + 2.0) / 61.0).ceil().max(1.0) as usize;
        for tb in self.tables(count) {
            for &t in &self.units {
                if self.image(lhs, t, &tb, &scale) != self.image(rhs, t, &tb, &scale) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_direct_multiplication() {
        let k = Arc::new(FiniteField::new(7, 1).unwrap());
        let cmp = ProductComparer::new(&k);
        let psi = AddCharK::standard(&k);
        let a = SumProduct::gauss(&MultCharK::new(&k, 1), &psi);
        let b = SumProduct::gauss(&MultCharK::new(&k, 5), &psi);
        let prod = a.mul(&b);
        // G(χ)G(χ^{-1}) = χ(-1) q
        let chi = MultCharK::new(&k, 1);
        let expected = SumProduct::one().scale_int(7).mul_root(&chi.eval(k.neg(1)));
        assert!(cmp.equal(&prod, &expected));
        assert_eq!(prod.to_element(&k).unwrap(), expected.to_element(&k).unwrap());
        assert!(!cmp.equal(&prod, &expected.clone().scale_int(-1)));
        let c = SumProduct::gauss(&MultCharK::new(&k, 2), &psi);
        let direct = a.mul(&c).to_element(&k).unwrap() == b.mul(&c).to_element(&k).unwrap();
        assert_eq!(cmp.equal(&a.mul(&c), &b.mul(&c)), direct);
    }

    #[test]
    fn quadratic_sum_matches_gauss_sum_of_quadratic_character() {
        let k = Arc::new(FiniteField::new(3, 2).unwrap());
        let cmp = ProductComparer::new(&k);
        let psi = AddCharK::new(&k, 5);
        assert!(cmp.equal(&SumProduct::quad(&psi), &SumProduct::gauss(&MultCharK::quadratic(&k), &psi)));
    }
}
