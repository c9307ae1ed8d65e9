use std::sync::Arc;

use crate::cyclonum::{factorize, mod_inverse};
use crate::finitefield::{pow_mod, FiniteField};
use crate::{Error, Result};

/// `Q_p` modelled through `O/P^M = Z/p^M`, with uniformizer `p`.
#[derive(Debug)]
pub struct PadicContext {
    p: u64,
    precision: u32,
    modulus: u64,
    unit_order: u64,
    generator: u64,
    tame_log: Vec<u32>,
    residue: Arc<FiniteField>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

impl PadicContext {
    /// Context for an odd prime `p` with working precision `M`.
    pub fn new(p: u64, precision: u32) -> Result<Arc<PadicContext>> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
        }
        if precision < 2 {
            return Err(Error::InvalidParameter("precision must be at least 2".into()));
        }
        let modulus = p
            .checked_pow(precision)
            .filter(|m| *m < 1 << 62)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{precision} exceeds the supported range")))?;
        let residue = Arc::new(FiniteField::new(p, 1)?);
        let mut generator = residue.generator() as u64;
        if pow_mod(generator, p - 1, p * p) == 1 {
            generator += p;
        }
        let unit_order = modulus / p * (p - 1);
        let tame_root = pow_mod(generator, modulus / p, modulus);
        let mut tame_log = vec![u32::MAX; p as usize];
        let mut x = 1;
        for k in 0..p - 1 {
            tame_log[(x % p) as usize] = k as u32;
            x = mul_mod(x, tame_root, modulus);
        }
        Ok(Arc::new(PadicContext {
            p,
            precision,
            modulus,
            unit_order,
            generator,
            tame_log,
            residue,
        }))
    }

    /// Context large enough for sums with conductors up to `max_conductor`
    /// and additive conductors up to `max_additive` in absolute value.
    pub fn for_conductors(p: u64, max_conductor: u32, max_additive: u32) -> Result<Arc<PadicContext>> {
        Self::new(p, max_conductor + max_additive + 2)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Working precision `M`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^M`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^k` for `k ≤ M`.
    pub fn p_pow(&self, k: u32) -> u64 {
        assert!(k <= self.precision, "p^{k} beyond working precision");
        self.p.pow(k)
    }

    /// Order `p^{M-1}(p-1)` of `(Z/p^M)*`.
    pub fn unit_order(&self) -> u64 {
        self.unit_order
    }

    pub fn unit_generator(&self) -> u64 {
        self.generator
    }

    pub fn residue_field(&self) -> &Arc<FiniteField> {
        &self.residue
    }

    pub fn require(&self, needed: u32) -> Result<()> {
        if needed > self.precision {
            Err(Error::Precision {
                needed,
                available: self.precision,
            })
        } else {
            Ok(())
        }
    }

    /// Residue of an integer modulo `p^M`.
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit modulo `p^M`.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(self.is_unit(a), "{a} is not a unit");
        self.pow(a, self.unit_order - 1)
    }

    /// `g^k` for the unit generator `g`.
    pub fn exp(&self, k: u64) -> u64 {
        self.pow(self.generator, k % self.unit_order)
    }

    /// Discrete logarithm of a unit base the unit generator, by Pohlig–Hellman
    /// on the tame part and `p`-adic digit extraction on `1 + P`.
    pub fn dlog(&self, a: u64) -> u64 {
        let a = a % self.modulus;
        assert!(self.is_unit(a), "logarithm of a non-unit");
        let p = self.p;
        let wild_order = self.modulus / p;
        let tame = self.tame_log[(self.pow(a, wild_order) % p) as usize] as u64;
        // y = a^{p-1} = h^j with h = g^{p-1} of order p^{M-1}
        let y = self.pow(a, p - 1);
        let h = self.pow(self.generator, p - 1);
        let h_inv = self.inv(h);
        let h_top = self.pow(h, wild_order / p);
        let mut j = 0u64;
        let mut place = 1u64;
        for i in 0..self.precision - 1 {
            let rest = self.mul(y, self.pow(h_inv, j));
            let probe = self.pow(rest, wild_order / p / place);
            let mut digit = 0;
            let mut t = 1;
            while t != probe {
                t = self.mul(t, h_top);
                digit += 1;
                debug_assert!(digit < p, "digit extraction failed at {i}");
            }
            j += digit * place;
            place *= p;
        }
        // a^{p-1} = h^k, so k ≡ j mod p^{M-1}
        crt(tame, p - 1, j, wild_order)
    }

    /// `v_p(x)` and the unit part of a nonzero integer modulo `p^M`.
    pub fn split(&self, x: i128) -> (u32, u64) {
        assert!(x != 0, "valuation of zero");
        let mut v = 0;
        let mut x = x;
        while x % self.p as i128 == 0 {
            x /= self.p as i128;
            v += 1;
        }
        (v, self.reduce(x))
    }
}

/// The solution modulo `mn` of `x ≡ a mod m`, `x ≡ b mod n` for coprime `m`, `n`.
fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let inv = mod_inverse(m % n, n);
    let t = ((b + n - a % n) % n) as u128 * inv as u128 % n as u128;
    (a as u128 + m as u128 * t) as u64 % (m * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_has_full_order() {
        for p in [3, 5, 7, 11, 13, 29, 487] {
            let ctx = PadicContext::new(p, 3).unwrap();
            let g = ctx.unit_generator();
            assert_eq!(ctx.pow(g, ctx.unit_order()), 1);
            for (r, _) in factorize(ctx.unit_order()) {
                assert_ne!(ctx.pow(g, ctx.unit_order() / r), 1, "p={p} r={r}");
            }
            assert_eq!(g % p, ctx.residue_field().generator() as u64);
        }
    }

    #[test]
    fn dlog_roundtrip() {
        for (p, m) in [(3, 4), (5, 5), (7, 3), (13, 6)] {
            let ctx = PadicContext::new(p, m).unwrap();
            for k in (0..ctx.unit_order()).step_by(1 + ctx.unit_order() as usize / 500) {
                assert_eq!(ctx.dlog(ctx.exp(k)), k, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn precision_is_enforced() {
        let ctx = PadicContext::new(5, 4).unwrap();
        assert!(ctx.require(4).is_ok());
        assert_eq!(ctx.require(5), Err(Error::Precision { needed: 5, available: 4 }));
        assert!(PadicContext::new(9, 3).is_err());
    }
}
