use std::str::FromStr;
use std::sync::Arc;

use clap::Args;
use hdrel::cyclonum::RootOfUnity;
use hdrel::finitefield::{AddCharK, FiniteField, MultCharK};
use hdrel::padic::{AddCharF, LiftJ, MultCharF, PadicContext};

use crate::CliError;

/// A root of unity `ζ_N^k` written `N:k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootSpec {
    pub order: u64,
    pub exponent: i64,
}

impl RootSpec {
    pub const ONE: RootSpec = RootSpec { order: 1, exponent: 0 };

    pub fn root(&self) -> RootOfUnity {
        RootOfUnity::new(self.exponent as i128, self.order)
    }
}

impl FromStr for RootSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, k) = s.split_once(':').ok_or_else(|| format!("expected N:k, got {s:?}"))?;
        let order: u64 = n.trim().parse().map_err(|_| format!("bad order in {s:?}"))?;
        let exponent: i64 = k.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        if order == 0 {
            return Err("the order N must be positive".into());
        }
        Ok(RootSpec { order, exponent })
    }
}

impl std::fmt::Display for RootSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.order, self.exponent)
    }
}

/// Parameters shared by every computation and verification.
#[derive(Args, Clone, Debug)]
pub struct Params {
    /// Residue characteristic
    #[arg(long)]
    pub p: Option<u64>,
    /// Residue degree of the finite field F_{p^f}
    #[arg(long, default_value_t = 1)]
    pub f: u32,
    /// Finite field order, as an alternative to --p and --f
    #[arg(long)]
    pub q: Option<u64>,
    /// Order of the character group in the product relation
    #[arg(long)]
    pub d: Option<u64>,
    /// Degree of the cover
    #[arg(long)]
    pub n: Option<u64>,
    /// Twisting parameter of the cover
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub c: i64,
    /// Which product identity of the ε-factors to check (1, 2 or 3)
    #[arg(long)]
    pub which: Option<u8>,
    /// Conductor exponent of χ
    #[arg(long = "chi-cond", visible_alias = "cond", default_value_t = 0)]
    pub chi_cond: u32,
    /// Unit-exponent index of χ within its level, or the exponent of a finite-field character
    #[arg(long = "chi-exp")]
    pub chi_exp: Option<u64>,
    /// χ(ϖ) as N:k for ζ_N^k
    #[arg(long = "chi-at-p", default_value_t = RootSpec::ONE)]
    pub chi_at_p: RootSpec,
    /// Conductor exponent of ψ
    #[arg(long = "psi-cond", default_value_t = 0, allow_negative_numbers = true)]
    pub psi_cond: i64,
    /// Unit scaling ψ(x) ↦ ψ(ux) of the standard character
    #[arg(long = "psi-scale", default_value_t = 1)]
    pub psi_scale: u64,
    /// Finite-field additive character x ↦ ψ(ax), as the element index a
    #[arg(long = "psi-shift", default_value_t = 1)]
    pub psi_shift: u32,
    /// p-adic working precision; chosen from the conductors when omitted
    #[arg(long)]
    pub precision: Option<u32>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            p: None,
            f: 1,
            q: None,
            d: None,
            n: None,
            c: 0,
            which: None,
            chi_cond: 0,
            chi_exp: None,
            chi_at_p: RootSpec::ONE,
            psi_cond: 0,
            psi_scale: 1,
            psi_shift: 1,
            precision: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `(p, f)` with `q = p^f`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|r| r * r <= q).find(|r| q.is_multiple_of(*r)).unwrap_or(q);
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

/// Largest `M` with `p^M < 2^62`.
fn max_precision(p: u64) -> u32 {
    let mut m = 0;
    let mut pm: u128 = 1;
    while pm * (p as u128) < 1 << 62 {
        pm *= p as u128;
        m += 1;
    }
    m
}

impl Params {
    pub fn require_p(&self) -> Result<u64, CliError> {
        self.p.ok_or_else(|| usage("--p is required"))
    }

    pub fn require_d(&self) -> Result<u64, CliError> {
        self.d.ok_or_else(|| usage("--d is required"))
    }

    pub fn require_n(&self) -> Result<u64, CliError> {
        self.n.ok_or_else(|| usage("--n is required"))
    }

    pub fn field(&self) -> Result<Arc<FiniteField>, CliError> {
        let (p, f) = match (self.q, self.p) {
            (Some(q), _) => prime_power(q).ok_or_else(|| usage(format!("q = {q} is not a prime power")))?,
            (None, Some(p)) => (p, self.f),
            (None, None) => return Err(usage("--q or --p is required")),
        };
        Ok(Arc::new(FiniteField::new(p, f)?))
    }

    pub fn field_char(&self, k: &Arc<FiniteField>) -> MultCharK {
        MultCharK::new(k, self.chi_exp.unwrap_or(1) as i64)
    }

    pub fn field_psi(&self, k: &Arc<FiniteField>) -> Result<AddCharK, CliError> {
        if self.psi_shift as u64 >= k.q() {
            return Err(usage(format!("--psi-shift must be below q = {}", k.q())));
        }
        Ok(AddCharK::new(k, self.psi_shift))
    }

    pub fn context(&self) -> Result<Arc<PadicContext>, CliError> {
        let p = self.require_p()?;
        let default = (self.chi_cond.max(1) + self.psi_cond.unsigned_abs() as u32 + 4).max(6);
        let m = self.precision.unwrap_or_else(|| default.min(max_precision(p)));
        Ok(PadicContext::new(p, m)?)
    }

    /// Indices of the characters of exact conductor `--chi-cond`.
    pub fn chi_indices(&self, ctx: &PadicContext) -> Result<Vec<u64>, CliError> {
        if self.chi_cond > ctx.precision() {
            return Err(usage(format!(
                "conductor {} exceeds the working precision {}",
                self.chi_cond,
                ctx.precision()
            )));
        }
        Ok(MultCharF::conductor_indices(ctx, self.chi_cond).collect())
    }

    pub fn character_at(&self, ctx: &Arc<PadicContext>, index: u64) -> Result<MultCharF, CliError> {
        let at_p = self.chi_at_p.root();
        if self.chi_cond == 0 {
            if index != 0 {
                return Err(usage("an unramified character has unit-exponent index 0"));
            }
            return Ok(MultCharF::unramified(ctx, at_p));
        }
        if !MultCharF::conductor_indices(ctx, self.chi_cond).any(|t| t == index) {
            return Err(usage(format!(
                "index {index} does not give a character of exact conductor {}",
                self.chi_cond
            )));
        }
        Ok(MultCharF::of_level(ctx, self.chi_cond, index, at_p))
    }

    pub fn character(&self, ctx: &Arc<PadicContext>) -> Result<MultCharF, CliError> {
        let index = match self.chi_exp {
            Some(t) => t,
            None => *self
                .chi_indices(ctx)?
                .first()
                .ok_or_else(|| usage(format!("no characters of conductor {}", self.chi_cond)))?,
        };
        self.character_at(ctx, index)
    }

    pub fn psi(&self, ctx: &Arc<PadicContext>) -> Result<AddCharF, CliError> {
        if !ctx.is_unit(self.psi_scale) {
            return Err(usage("--psi-scale must be prime to p"));
        }
        Ok(AddCharF::new(ctx, self.psi_cond, self.psi_scale))
    }

    pub fn lift(&self, ctx: &Arc<PadicContext>) -> Result<LiftJ, CliError> {
        let d = self.require_d()?;
        if d == 0 || !(ctx.p() - 1).is_multiple_of(d) {
            return Err(usage(format!("d = {d} must divide p - 1 = {}", ctx.p() - 1)));
        }
        Ok(LiftJ::new(ctx, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_specs() {
        assert_eq!("4:1".parse::<RootSpec>().unwrap(), RootSpec { order: 4, exponent: 1 });
        assert_eq!("6:-1".parse::<RootSpec>().unwrap().exponent, -1);
        assert!("0:1".parse::<RootSpec>().is_err());
        assert!("3".parse::<RootSpec>().is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(121), Some((11, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn precision_bound() {
        assert_eq!(max_precision(2), 61);
        assert!(13u128.pow(max_precision(13)) < 1 << 62);
    }
}
