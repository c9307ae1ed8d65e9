use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::CyclotomicElement;

/// A root of unity `exp(2πi · num/den)` kept as a reduced fraction in `[0, 1)`.
///
/// Character values are produced in this form and only turned into
/// [`CyclotomicElement`]s when they enter a sum.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// `ζ_den^num`, reduced.
    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero order");
        let n = num.rem_euclid(den as i128) as u64;
        let g = n.gcd(&den);
        RootOfUnity {
            num: n / g,
            den: den / g,
        }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { num: 1, den: 2 }
    }

    /// `+1` or `-1`.
    pub fn sign(positive: bool) -> Self {
        if positive {
            Self::ONE
        } else {
            Self::minus_one()
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.den.lcm(&other.den);
        let a = self.num as u128 * (l / self.den) as u128 + other.num as u128 * (l / other.den) as u128;
        RootOfUnity::new((a % l as u128) as i128, l)
    }

    pub fn inv(&self) -> Self {
        RootOfUnity::new(-(self.num as i128), self.den)
    }

    pub fn pow(&self, e: i64) -> Self {
        let k = (self.num as i128 * (e as i128).rem_euclid(self.den as i128)) % self.den as i128;
        RootOfUnity::new(k, self.den)
    }

    /// Splits into a part of order prime to `p` and a part of `p`-power order,
    /// `self = tame · wild`.
    pub fn split(&self, p: u64) -> (RootOfUnity, RootOfUnity) {
        let mut wild = 1u64;
        let mut rest = self.den;
        while rest.is_multiple_of(p) {
            rest /= p;
            wild *= p;
        }
        if wild == 1 {
            return (*self, Self::ONE);
        }
        if rest == 1 {
            return (Self::ONE, *self);
        }
        // num/den = num·α/rest + num·β/wild where α·wild + β·rest = 1
        let eg = (wild as i128).extended_gcd(&(rest as i128));
        let alpha = eg.x;
        let beta = eg.y;
        let n = self.num as i128;
        let tame = RootOfUnity::new((n % rest as i128) * alpha.rem_euclid(rest as i128), rest);
        let wild_r = RootOfUnity::new((n % wild as i128) * beta.rem_euclid(wild as i128), wild);
        (tame, wild_r)
    }

    /// Exponent of this root in the cyclic group of order `n` (`self = ζ_n^k`).
    /// Panics if the order does not divide `n`.
    pub fn exponent_in(&self, n: u64) -> u64 {
        assert!(n.is_multiple_of(self.den), "order {} does not divide {}", self.den, n);
        self.num * (n / self.den)
    }

    pub fn to_element(&self) -> CyclotomicElement {
        CyclotomicElement::root_of_unity(self.den, self.num as i64)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64);
        num_complex::Complex64::new(theta.cos(), theta.sin())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, d) => write!(f, "z{d}"),
            (n, d) => write!(f, "z{d}^{n}"),
        }
    }
}
