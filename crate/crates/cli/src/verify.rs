use std::io::Write;
use std::time::Instant;

use clap::{Args, ValueEnum};
use hdrel::covers::{verify_generator_independence, verify_ramdet, CoverDatum};
use hdrel::factors::{verify_mainres, verify_verifygao, verify_weild};
use hdrel::finitefield::{verify_d_and_sign, verify_hd_all, verify_hd_classical, verify_twistprod, ProductComparer};
use hdrel::padic::{verify_hdtau1, verify_tau_theorem, verify_taufor, verify_taumult, MultCharF};
use hdrel::report::VerificationReport;
use serde::{Deserialize, Serialize};

use crate::output::{table_header, write_report, Format, Tally};
use crate::params::Params;
use crate::CliError;

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTarget {
    Hd,
    Twistprod,
    DAndSign,
    TauTheorem,
    Hdtau1,
    Taumult,
    Taufor,
    Mainres,
    Verifygao,
    Weild,
    Ramdet,
    GeneratorIndependence,
}

impl VerifyTarget {
    /// Whether the target lives over a finite field rather than a p-adic field.
    pub fn is_finite_field(self) -> bool {
        matches!(self, VerifyTarget::Hd | VerifyTarget::Twistprod | VerifyTarget::DAndSign)
    }

    /// Whether the target takes a multiplicative character of `F`.
    pub fn takes_character(self) -> bool {
        !self.is_finite_field() && self != VerifyTarget::Weild
    }

    /// Whether the target is parameterized by `d` (as opposed to the cover degree `n`).
    pub fn takes_d(self) -> bool {
        use VerifyTarget::*;
        matches!(self, Hd | Twistprod | DAndSign | TauTheorem | Hdtau1 | Taumult | Weild)
    }

    pub fn takes_n(self) -> bool {
        matches!(self, VerifyTarget::Ramdet | VerifyTarget::GeneratorIndependence)
    }
}

fn for_character(
    target: VerifyTarget,
    params: &Params,
    chi: &MultCharF,
    psi: &hdrel::padic::AddCharF,
) -> Result<VerificationReport, CliError> {
    use VerifyTarget::*;
    let ctx = chi.context();
    let report = match target {
        TauTheorem => verify_tau_theorem(chi, &params.lift(ctx)?, psi)?,
        Hdtau1 => verify_hdtau1(chi, &params.lift(ctx)?, psi)?,
        Taumult => verify_taumult(chi, params.lift(ctx)?.d(), psi)?,
        Taufor => verify_taufor(chi, psi)?,
        Verifygao => verify_verifygao(chi, psi)?,
        Mainres => {
            let which = params.which.ok_or_else(|| CliError::Usage("--which is required".into()))?;
            match which {
                1 | 2 => verify_mainres(which, chi, Some(&params.lift(ctx)?), psi)?,
                3 => verify_mainres(3, chi, None, psi)?,
                _ => return Err(CliError::Usage(format!("--which must be 1, 2 or 3, got {which}"))),
            }
        }
        Ramdet | GeneratorIndependence => {
            let datum = CoverDatum::new(params.require_n()?, params.c, chi.clone())?;
            if target == Ramdet {
                verify_ramdet(&datum, psi)?
            } else {
                verify_generator_independence(&datum, psi)?
            }
        }
        Hd | Twistprod | DAndSign | Weild => unreachable!("{target:?} takes no p-adic character"),
    };
    Ok(report)
}

/// Runs one verification, over every character of the given conductor when `all_chi` is set.
/// With `timing`, each report carries its share of the elapsed time.
pub fn reports(
    target: VerifyTarget,
    params: &Params,
    all_chi: bool,
    timing: bool,
) -> Result<Vec<VerificationReport>, CliError> {
    use VerifyTarget::*;
    let start = Instant::now();
    let mut out = match target {
        Hd | Twistprod | DAndSign => {
            let k = params.field()?;
            let d = params.require_d()?;
            let cmp = ProductComparer::new(&k);
            match target {
                Hd if all_chi => verify_hd_all(&cmp, d),
                Hd => vec![verify_hd_classical(&cmp, d, &params.field_char(&k))],
                Twistprod => vec![verify_twistprod(&cmp, d, &params.field_psi(&k)?)],
                _ => vec![verify_d_and_sign(&k, d)],
            }
        }
        Weild => {
            let ctx = params.context()?;
            vec![verify_weild(params.require_d()?, &params.psi(&ctx)?)?]
        }
        _ => {
            let ctx = params.context()?;
            let psi = params.psi(&ctx)?;
            let characters = if all_chi {
                params
                    .chi_indices(&ctx)?
                    .into_iter()
                    .map(|t| params.character_at(&ctx, t))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                vec![params.character(&ctx)?]
            };
            characters
                .iter()
                .map(|chi| for_character(target, params, chi, &psi))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    if timing {
        let elapsed = start.elapsed().as_secs_f64() * 1e3 / out.len().max(1) as f64;
        for r in &mut out {
            r.elapsed_ms = Some(elapsed);
        }
    }
    Ok(out)
}

#[derive(Args, Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Run the check for every character of the given conductor
    #[arg(long = "all-chi")]
    pub all_chi: bool,
    /// Output format of the reports
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exit 0 when some inputs were rejected as outside the hypotheses
    #[arg(long = "allow-reject")]
    pub allow_reject: bool,
    /// Record the elapsed time in each report
    #[arg(long)]
    pub timing: bool,
}

pub fn run(
    target: VerifyTarget,
    params: &Params,
    options: &VerifyOptions,
    out: &mut impl Write,
) -> Result<u8, CliError> {
    let reports = reports(target, params, options.all_chi, options.timing)?;
    let mut tally = Tally::default();
    if options.format == Format::Table {
        table_header(out)?;
    }
    for r in &reports {
        write_report(out, r, options.format)?;
        tally.add(r);
    }
    Ok(tally.exit_code(options.allow_reject))
}
