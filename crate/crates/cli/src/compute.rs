use std::io::Write;

use clap::ValueEnum;
use hdrel::covers::{build_lcm, det_lcm, plancherel, CoverDatum};
use hdrel::cyclonum::{QsLaurent, QsRational, SymScalar};
use hdrel::factors::{epsilon_factor, gamma_factor, tilde_gamma, weil_index};
use hdrel::finitefield::{gauss_sum, quad_gauss_sum};
use hdrel::padic::{compute_b, compute_c, tau_direct};
use hdrel::report::{Checkable, TEST_POINT};

use crate::params::Params;
use crate::CliError;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeTarget {
    Gauss,
    Quadgauss,
    Tau,
    CInvariant,
    BInvariant,
    Epsilon,
    Gamma,
    TildeGamma,
    Weil,
    Lcm,
    LcmDet,
    Plancherel,
}

/// One printed line: an exact rendering and, when available, a complex value.
struct Line {
    label: Option<String>,
    exact: String,
    approx: Option<(f64, f64)>,
}

fn value<T: Checkable>(v: &T) -> Line {
    let z = v.approx();
    Line {
        label: None,
        exact: v.exact(),
        approx: Some((z.re, z.im)),
    }
}

fn plain(s: String) -> Line {
    Line {
        label: None,
        exact: s,
        approx: None,
    }
}

/// The exponent `k` when `v` is the constant `q^k`.
fn q_power(q: u64, v: &QsRational) -> Option<i64> {
    (-64..=64).find(|k| *v == QsRational::from_laurent(QsLaurent::monomial(q, SymScalar::sqrt_q_pow(q, 2 * k), 0)))
}

fn datum(params: &Params) -> Result<(CoverDatum, hdrel::padic::AddCharF), CliError> {
    let ctx = params.context()?;
    let chi = params.character(&ctx)?;
    let psi = params.psi(&ctx)?;
    Ok((CoverDatum::new(params.require_n()?, params.c, chi)?, psi))
}

fn evaluate(target: ComputeTarget, params: &Params) -> Result<Vec<Line>, CliError> {
    use ComputeTarget::*;
    let lines = match target {
        Gauss => {
            let k = params.field()?;
            vec![value(&gauss_sum(&params.field_char(&k), &params.field_psi(&k)?)?)]
        }
        Quadgauss => {
            let k = params.field()?;
            vec![value(&quad_gauss_sum(&params.field_psi(&k)?)?)]
        }
        Weil => {
            let ctx = params.context()?;
            vec![value(&weil_index(&params.psi(&ctx)?)?.to_scalar())]
        }
        Lcm => {
            let (datum, psi) = datum(params)?;
            let m = build_lcm(&datum, &psi)?;
            m.entries()
                .map(|((i, j), e)| Line {
                    label: Some(format!("({i}, {j})")),
                    ..value(e)
                })
                .collect()
        }
        LcmDet => {
            let (datum, psi) = datum(params)?;
            vec![value(&det_lcm(&build_lcm(&datum, &psi)?))]
        }
        Plancherel => {
            let ctx = params.context()?;
            let chi = params.character(&ctx)?;
            let psi = params.psi(&ctx)?;
            let inverse = plancherel(&chi, params.require_n()?, &psi).inverse().clone();
            let mut line = value(&inverse);
            if let Some(k) = q_power(ctx.p(), &inverse) {
                line.exact = format!("q^{k}");
            }
            vec![line]
        }
        Tau | CInvariant | BInvariant | Epsilon | Gamma | TildeGamma => {
            let ctx = params.context()?;
            let chi = params.character(&ctx)?;
            let psi = params.psi(&ctx)?;
            match target {
                Tau => vec![value(&tau_direct(&chi, &psi)?)],
                CInvariant => {
                    let c = compute_c(&chi, &psi)?;
                    vec![plain(format!("{} mod {}^{}", c.rep, ctx.p(), c.k))]
                }
                BInvariant => vec![plain(format!("{} mod {}", compute_b(&chi, &psi)?.rep, ctx.p()))],
                Epsilon => vec![value(&epsilon_factor(&chi, &psi)?)],
                Gamma => vec![value(&gamma_factor(&chi, &psi)?)],
                _ => vec![value(&tilde_gamma(&chi, &psi)?)],
            }
        }
    };
    Ok(lines)
}

/// Prints the value of `target`; exits 0, or 2 through the returned error.
pub fn run(target: ComputeTarget, params: &Params, numeric: bool, out: &mut impl Write) -> Result<u8, CliError> {
    use ComputeTarget::*;
    let at = if matches!(target, Epsilon | Gamma | TildeGamma | Lcm | LcmDet | Plancherel) {
        format!(" at s = {}", TEST_POINT)
    } else {
        String::new()
    };
    for line in evaluate(target, params)? {
        if let Some(label) = &line.label {
            write!(out, "{label} ")?;
        }
        writeln!(out, "{}", line.exact)?;
        if let (true, Some((re, im))) = (numeric, line.approx) {
            writeln!(out, "  ≈ {re:.12} {im:+.12}i{at}")?;
        }
    }
    Ok(0)
}
