use crate::cyclonum::factorize;
use crate::{Error, Result};

/// The field with `q = p^f` elements.
///
/// Elements are encoded as integers `Σ c_i p^i` where `c_i` are the
/// coefficients of the representing polynomial modulo [`Self::modulus`].
#[derive(Debug)]
pub struct FiniteField {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

pub type Elem = u32;

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
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

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - dm;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let f = m.len() - 1;
    if f == 1 {
        return true;
    }
    if (0..p).any(|x| m.iter().rev().fold(0, |acc, c| (acc * x + c) % p) == 0) {
        return false;
    }
    // x^{p^i} mod m for i = 1..f/2; m is irreducible iff gcd(m, x^{p^i} - x) = 1
    let mut h = vec![0, 1];
    for _ in 1..=f / 2 {
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if poly_gcd(m, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

impl FiniteField {
    /// Builds `F_{p^f}` for an odd prime `p`.
    pub fn new(p: u64, f: u32) -> Result<FiniteField> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
        }
        if f == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        let q = p
            .checked_pow(f)
            .filter(|q| *q < 1 << 24)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{f} is too large")))?;
        let modulus = Self::find_modulus(p, f as usize);
        let decode = |x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(f as usize);
            let mut x = x;
            for _ in 0..f {
                v.push(x % p);
                x /= p;
            }
            poly_trim(&mut v);
            v
        };
        let encode = |v: &[u64]| -> u64 { v.iter().rev().fold(0, |acc, c| acc * p + c) };
        let order_factors: Vec<u64> = factorize(q - 1).into_iter().map(|(r, _)| r).collect();
        let pow = |x: &[u64], mut e: u64| -> Vec<u64> {
            let mut acc = vec![1u64];
            let mut base = x.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, &modulus, p);
                }
                base = poly_mulmod(&base, &base, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let gen = (1..q)
            .map(decode)
            .find(|g| order_factors.iter().all(|r| pow(g, (q - 1) / r) != vec![1]))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u64];
        for k in 0..q - 1 {
            let e = encode(&cur) as u32;
            exp.push(e);
            log[e as usize] = k as u32;
            cur = poly_mulmod(&cur, &gen, &modulus, p);
        }
        let mut field = FiniteField {
            p,
            f,
            q,
            modulus,
            exp,
            log,
            trace: Vec::new(),
        };
        field.trace = (0..q as u32).map(|x| field.compute_trace(x)).collect();
        Ok(field)
    }

    fn find_modulus(p: u64, f: usize) -> Vec<u64> {
        if f == 1 {
            return vec![0, 1];
        }
        let count = p.pow(f as u32);
        for c in 0..count {
            let mut m = Vec::with_capacity(f + 1);
            let mut x = c;
            for _ in 0..f {
                m.push(x % p);
                x /= p;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn compute_trace(&self, x: Elem) -> u32 {
        if x == 0 {
            return 0;
        }
        let mut acc: Elem = 0;
        let mut conj = x;
        for _ in 0..self.f {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.p);
        }
        debug_assert!((acc as u64) < self.p, "trace must lie in the prime field");
        acc
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficients of the defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp.iter().copied()
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p as u32;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.q - 1;
        let k = (self.log[a as usize] as u128 * e as u128 % n as u128) as usize;
        self.exp[k]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize] as u64) % n) as usize]
    }

    /// `g^k` for the fixed generator `g`.
    pub fn exp(&self, k: i64) -> Elem {
        let n = (self.q - 1) as i64;
        self.exp[k.rem_euclid(n) as usize]
    }

    /// Discrete logarithm base the fixed generator.
    pub fn dlog(&self, a: Elem) -> u64 {
        assert!(a != 0, "logarithm of zero");
        self.log[a as usize] as u64
    }

    /// Absolute trace to `F_p`, as an integer in `0..p`.
    pub fn trace(&self, a: Elem) -> u64 {
        self.trace[a as usize] as u64
    }

    /// `+1` if `-1` is a square in the multiplicative group, else `-1`.
    pub fn sign(&self) -> i64 {
        if (self.q - 1).is_multiple_of(4) {
            1
        } else {
            -1
        }
    }

    /// Whether `a` is a nonzero square.
    pub fn is_square(&self, a: Elem) -> bool {
        a != 0 && self.dlog(a).is_multiple_of(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dlog_roundtrip() {
        for (p, f) in [(3, 1), (3, 2), (5, 2), (7, 2), (3, 3), (11, 2)] {
            let k = FiniteField::new(p, f).unwrap();
            for x in k.nonzero() {
                assert_eq!(k.exp(k.dlog(x) as i64), x);
            }
            let g = k.generator();
            assert_eq!(k.pow(g, k.q() - 1), 1);
            for (r, _) in factorize(k.q() - 1) {
                assert_ne!(k.pow(g, (k.q() - 1) / r), 1);
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        let k = FiniteField::new(3, 2).unwrap();
        for a in k.elements() {
            assert_eq!(k.add(a, k.neg(a)), 0);
            for b in k.elements() {
                for c in [1, 4, 7] {
                    let lhs = k.mul(a, k.add(b, c));
                    let rhs = k.add(k.mul(a, b), k.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let k = FiniteField::new(5, 2).unwrap();
        for a in k.elements() {
            for b in k.elements() {
                assert_eq!(k.trace(k.add(a, b)), (k.trace(a) + k.trace(b)) % 5);
            }
        }
        assert!(k.elements().any(|x| k.trace(x) == 1));
    }

    #[test]
    fn sign_matches_square_test() {
        for (p, f) in [(5, 1), (7, 1), (3, 2), (3, 3), (13, 1)] {
            let k = FiniteField::new(p, f).unwrap();
            let minus_one = k.neg(1);
            assert_eq!(k.sign() == 1, k.is_square(minus_one));
        }
        assert_eq!(FiniteField::new(3, 2).unwrap().sign(), 1);
    }
}
