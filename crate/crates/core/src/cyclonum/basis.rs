//! The prime-power tensor basis of `Q(ζ_N)`.
//!
//! Write `N = ∏ p_i^{e_i}` and let `ω_i = ζ_N^{E_i}` where `E_i` is the CRT
//! idempotent for the `i`-th factor. Then `ζ_N^k = ∏ ω_i^{k mod p_i^{e_i}}`.
//! Inside `Q(ω_i)` the relation `Σ_{j<p} ω^{t + j·p^{e-1}} = 0` lets every
//! exponent whose top base-`p` digit equals `p - 1` be rewritten through the
//! other `p - 1` digits. Exponents whose components all have top digit
//! `< p - 1` form a Z-basis of `Z[ζ_N]` of size `φ(N)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{PrimInt, Signed};

#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub p: u64,
    pub pe: u64,
    /// `pe / p`, the weight of the top digit.
    pub top: u64,
    /// CRT idempotent: `≡ 1 mod pe`, `≡ 0` modulo the other factors.
    pub idem: u64,
}

#[derive(Debug)]
pub(crate) struct Basis {
    pub order: u64,
    pub comps: Vec<Component>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let eg = (a as i128).extended_gcd(&(m as i128));
    assert_eq!(eg.gcd, 1, "{a} not invertible mod {m}");
    eg.x.rem_euclid(m as i128) as u64
}

impl Basis {
    fn build(order: u64) -> Basis {
        let comps = factorize(order)
            .into_iter()
            .map(|(p, e)| {
                let pe = p.pow(e);
                let cof = order / pe;
                let idem = ((cof as u128 * mod_inverse(cof % pe, pe) as u128) % order as u128) as u64;
                Component {
                    p,
                    pe,
                    top: pe / p,
                    idem,
                }
            })
            .collect();
        Basis { order, comps }
    }

    pub fn get(order: u64) -> Arc<Basis> {
        static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Basis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.read().unwrap().get(&order) {
            return b.clone();
        }
        let b = Arc::new(Basis::build(order));
        cache.write().unwrap().entry(order).or_insert(b).clone()
    }

    /// `k` shifted by `delta` in component `c` only.
    #[inline]
    fn shift(&self, k: u64, c: &Component, delta_down: u64) -> u64 {
        let n = self.order as u128;
        let d = (delta_down as u128 * c.idem as u128) % n;
        ((k as u128 + n - d) % n) as u64
    }

    #[cfg(test)]
    pub fn is_canonical(&self, k: u64) -> bool {
        self.comps
            .iter()
            .all(|c| (k % c.pe) / c.top != c.p - 1)
    }

    /// Writes `ζ^k` in the basis, calling `f(exponent, ±1)` per term.
    pub fn expand(&self, k: u64, f: &mut impl FnMut(u64, i64)) {
        self.expand_from(0, k % self.order, 1, f)
    }

    fn expand_from(&self, idx: usize, k: u64, sign: i64, f: &mut impl FnMut(u64, i64)) {
        if idx == self.comps.len() {
            f(k, sign);
            return;
        }
        let c = &self.comps[idx];
        if (k % c.pe) / c.top == c.p - 1 {
            for j in 0..c.p - 1 {
                let k2 = self.shift(k, c, (c.p - 1 - j) * c.top);
                self.expand_from(idx + 1, k2, -sign, f);
            }
        } else {
            self.expand_from(idx + 1, k, sign, f);
        }
    }

    /// In-place reduction of a dense coefficient vector indexed by exponent.
    pub fn reduce_dense<T: PrimInt + Signed>(&self, counts: &mut [T]) {
        assert_eq!(counts.len() as u64, self.order);
        for c in &self.comps {
            for k in 0..self.order {
                let v = counts[k as usize];
                if v.is_zero() || (k % c.pe) / c.top != c.p - 1 {
                    continue;
                }
                counts[k as usize] = T::zero();
                for j in 0..c.p - 1 {
                    let k2 = self.shift(k, c, (c.p - 1 - j) * c.top) as usize;
                    counts[k2] = counts[k2] - v;
                }
            }
        }
    }
}
