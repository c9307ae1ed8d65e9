//! Dense polynomials over Q, used for inversion in small cyclotomic fields.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::basis::factorize;

/// Coefficients of `Φ_n`, lowest degree first.
pub(crate) fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&n) {
        return v.clone();
    }
    let v = Arc::new(build_cyclotomic(n));
    cache.write().unwrap().entry(n).or_insert(v).clone()
}

fn build_cyclotomic(n: u64) -> Vec<i64> {
    // Φ_n(x) = Φ_rad(x^{n/rad}) with rad the radical, and
    // Φ_rad = ∏_{d | rad} (x^d - 1)^{μ(rad/d)}.
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for mask in 0u32..(1 << primes.len()) {
        let sub: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .product();
        let d = rad / sub;
        let mut factor = vec![0i64; d as usize + 1];
        factor[0] = -1;
        factor[d as usize] = 1;
        if mask.count_ones() % 2 == 0 {
            num = mul_i64(&num, &factor);
        } else {
            den = mul_i64(&den, &factor);
        }
    }
    let base = div_exact_i64(&num, &den);
    let stretch = (n / rad) as usize;
    let mut out = vec![0i64; (base.len() - 1) * stretch + 1];
    for (i, c) in base.iter().enumerate() {
        out[i * stretch] = *c;
    }
    out
}

fn mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a polynomial with leading coefficient 1.
fn div_exact_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    assert_eq!(den[dl - 1], 1);
    let mut q = vec![0i64; num.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    q
}

pub(crate) type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn sub_scaled_shift(a: &mut QPoly, b: &QPoly, c: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (j, y) in b.iter().enumerate() {
        if !y.is_zero() {
            a[j + shift] -= c * y;
        }
    }
}

/// Quotient and remainder of `a / b` with `b` nonzero and trimmed.
pub(crate) fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let lead = b.last().expect("division by zero polynomial").clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        sub_scaled_shift(&mut r, b, &c, shift);
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m`, or `None` if they share a factor.
pub(crate) fn inverse_mod(a: &QPoly, m: &QPoly) -> Option<QPoly> {
    let (_, mut r0) = divrem(a, m);
    let mut r1 = m.clone();
    trim(&mut r1);
    let mut s0: QPoly = vec![BigRational::one()];
    let mut s1: QPoly = vec![];
    // invariant: r_i ≡ s_i · a (mod m)
    std::mem::swap(&mut r0, &mut r1);
    std::mem::swap(&mut s0, &mut s1);
    // now (r0, s0) = (m, 0), (r1, s1) = (a mod m, 1)
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let (_, out) = divrem(&s0.iter().map(|x| x / &c).collect(), m);
    Some(out)
}

pub(crate) fn from_i64(v: &[i64]) -> QPoly {
    v.iter()
        .map(|c| BigRational::from_integer(BigInt::from(*c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len(), 49);
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn inverse_mod_roundtrip() {
        let m = from_i64(&cyclotomic_poly(7));
        let a = from_i64(&[1, 2, 0, -3]);
        let inv = inverse_mod(&a, &m).unwrap();
        let (_, r) = divrem(&mul(&a, &inv), &m);
        assert_eq!(r, from_i64(&[1]));
    }
}
