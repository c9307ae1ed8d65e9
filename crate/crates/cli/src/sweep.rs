use std::io::Write;
use std::path::Path;

use clap::Args;
use hdrel::padic::{MultCharF, PadicContext};
use hdrel::report::{with_mutation, Verdict, VerificationReport};
use serde::Deserialize;

use crate::output::{table_header, write_report, Format, Tally};
use crate::params::{Params, RootSpec};
use crate::verify::{reports, VerifyTarget};
use crate::CliError;

/// A list of values, or an inclusive range `{ from, to }`.
#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum Axis<T> {
    List(Vec<T>),
    Range { from: T, to: T },
}

impl Axis<u32> {
    fn values(&self) -> Vec<u32> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

impl Axis<i64> {
    fn values(&self) -> Vec<i64> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

/// One block of a sweep: a verification task and the axes it ranges over.
#[derive(Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub task: VerifyTarget,
    #[serde(default)]
    pub primes: Vec<u64>,
    /// Residue degrees `f`, for the finite-field tasks.
    #[serde(default = "default_degrees")]
    pub degrees: Vec<u32>,
    /// Omitted: every divisor `d > 1` of `q - 1`.
    pub d: Option<Vec<u64>>,
    #[serde(default)]
    pub n: Vec<u64>,
    #[serde(default = "default_c")]
    pub c: Vec<i64>,
    #[serde(default = "default_which")]
    pub which: Vec<u8>,
    #[serde(default = "default_chi_conductors")]
    pub chi_conductors: Axis<u32>,
    /// Characters per conductor, spread evenly over the indices; 0 takes all of them.
    #[serde(default = "default_samples")]
    pub chi_samples: usize,
    #[serde(default = "default_psi_conductors")]
    pub psi_conductors: Axis<i64>,
    #[serde(default = "default_psi_scale")]
    pub psi_scale: u64,
    pub precision: Option<u32>,
}

fn default_degrees() -> Vec<u32> {
    vec![1]
}
fn default_c() -> Vec<i64> {
    vec![0]
}
fn default_which() -> Vec<u8> {
    vec![1, 2, 3]
}
fn default_chi_conductors() -> Axis<u32> {
    Axis::List(Vec::new())
}
fn default_samples() -> usize {
    4
}
fn default_psi_conductors() -> Axis<i64> {
    Axis::List(vec![0])
}
fn default_psi_scale() -> u64 {
    1
}

#[derive(Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Selects the cell perturbed by `--self-test`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sweep: Vec<SweepSpec>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub target: VerifyTarget,
    pub params: Params,
    pub all_chi: bool,
}

fn divisors_above_one(m: u64) -> Vec<u64> {
    (2..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// `(index, χ(ϖ))` for the sampled characters of conductor `m`.
fn sample_characters(ctx: &PadicContext, m: u32, samples: usize) -> Vec<(u64, RootSpec)> {
    let at_p = |k: usize| RootSpec {
        order: 4,
        exponent: (k % 4) as i64,
    };
    if m == 0 {
        let count = if samples == 0 { 4 } else { samples.min(4) };
        return (0..count).map(|k| (0, at_p(k))).collect();
    }
    let indices: Vec<u64> = MultCharF::conductor_indices(ctx, m).collect();
    let step = indices.len().checked_div(samples).unwrap_or(1).max(1);
    let take = if samples == 0 { indices.len() } else { samples };
    indices.into_iter().step_by(step).take(take).enumerate().map(|(k, t)| (t, at_p(k))).collect()
}

fn finite_field_cells(spec: &SweepSpec, p: u64, out: &mut Vec<Cell>) {
    for &f in &spec.degrees {
        let q = p.checked_pow(f).unwrap_or(u64::MAX);
        let ds = spec.d.clone().unwrap_or_else(|| divisors_above_one(q - 1));
        for d in ds {
            out.push(Cell {
                target: spec.task,
                params: Params {
                    p: Some(p),
                    f,
                    d: Some(d),
                    ..Params::default()
                },
                all_chi: spec.task == VerifyTarget::Hd,
            });
        }
    }
}

/// The `d`, `n`, `c` and `which` parameters of one cell.
#[derive(Clone, Copy, Default)]
struct Shape {
    d: Option<u64>,
    n: Option<u64>,
    c: i64,
    which: Option<u8>,
}

/// The shapes a task ranges over at the prime `p`.
fn shapes(spec: &SweepSpec, p: u64) -> Vec<Shape> {
    let ds: Vec<u64> = spec
        .d
        .clone()
        .unwrap_or_else(|| divisors_above_one(p - 1))
        .into_iter()
        .filter(|d| *d > 0 && (p - 1).is_multiple_of(*d))
        .collect();
    let task = spec.task;
    if task == VerifyTarget::Mainres {
        let mut out = Vec::new();
        for &which in &spec.which {
            if which == 3 {
                out.push(Shape {
                    which: Some(3),
                    ..Shape::default()
                });
            } else {
                out.extend(ds.iter().map(|d| Shape {
                    d: Some(*d),
                    which: Some(which),
                    ..Shape::default()
                }));
            }
        }
        out
    } else if task.takes_d() {
        ds.into_iter()
            .map(|d| Shape {
                d: Some(d),
                ..Shape::default()
            })
            .collect()
    } else if task.takes_n() {
        let ns = spec.n.iter().filter(|n| **n > 0 && *n % 4 != 0 && (p - 1).is_multiple_of(**n));
        ns.flat_map(|n| {
            spec.c.iter().map(move |c| Shape {
                n: Some(*n),
                c: *c,
                ..Shape::default()
            })
        })
        .collect()
    } else {
        vec![Shape::default()]
    }
}

fn padic_cells(spec: &SweepSpec, p: u64, out: &mut Vec<Cell>) -> Result<(), CliError> {
    let psi_conductors = spec.psi_conductors.values();
    let chi_conductors = if spec.task.takes_character() { spec.chi_conductors.values() } else { vec![0] };
    for Shape { d, n, c, which } in shapes(spec, p) {
        for &m in &chi_conductors {
            for &e in &psi_conductors {
                let base = Params {
                    p: Some(p),
                    d,
                    n,
                    c,
                    which,
                    chi_cond: m,
                    psi_cond: e,
                    psi_scale: spec.psi_scale,
                    precision: spec.precision,
                    ..Params::default()
                };
                let characters = if spec.task.takes_character() {
                    let ctx = base.context()?;
                    if m > ctx.precision() {
                        return Err(CliError::Config(format!("conductor {m} exceeds the precision at p = {p}")));
                    }
                    sample_characters(&ctx, m, spec.chi_samples)
                } else {
                    vec![(0, RootSpec::ONE)]
                };
                for (index, at_p) in characters {
                    out.push(Cell {
                        target: spec.task,
                        params: Params {
                            chi_exp: Some(index),
                            chi_at_p: at_p,
                            ..base.clone()
                        },
                        all_chi: false,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Every cell of the configuration, in a fixed order.
pub fn cells(config: &SweepConfig) -> Result<Vec<Cell>, CliError> {
    let mut out = Vec::new();
    for spec in &config.sweep {
        for &p in &spec.primes {
            if spec.task.is_finite_field() {
                finite_field_cells(spec, p, &mut out);
            } else {
                padic_cells(spec, p, &mut out)?;
            }
        }
    }
    Ok(out)
}

#[derive(Args, Clone, Debug, Default)]
pub struct SweepOptions {
    /// Perturb one comparison in the cell selected by the seed, which must then fail
    #[arg(long = "self-test")]
    pub self_test: bool,
    /// Exit 0 when some inputs were rejected as outside the hypotheses
    #[arg(long = "allow-reject")]
    pub allow_reject: bool,
    /// Output format of the reports
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cells evaluated concurrently; output order is unchanged
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Record the elapsed time in each report
    #[arg(long)]
    pub timing: bool,
}

type CellResult = Result<Vec<VerificationReport>, CliError>;

fn run_cell(cell: &Cell, timing: bool) -> CellResult {
    reports(cell.target, &cell.params, cell.all_chi, timing)
}

/// A cell whose run can be repeated with one perturbed comparison and yield exactly one failure.
fn mutable(result: &CellResult) -> bool {
    matches!(result, Ok(r) if r.len() == 1 && r[0].verdict == Verdict::Pass)
}

/// Runs every cell, writing reports to `out` and the summary to `summary`.
pub fn run(
    config: &SweepConfig,
    options: &SweepOptions,
    out: &mut impl Write,
    summary: &mut impl Write,
) -> Result<u8, CliError> {
    let cells = cells(config)?;
    let mut pending_mutation = (options.self_test && !cells.is_empty()).then(|| (config.seed % cells.len() as u64) as usize);
    let mut mutated = None;
    let mut tally = Tally::default();
    if options.format == Format::Table {
        table_header(out)?;
    }
    let jobs = options.jobs.max(1);
    for (chunk_index, chunk) in cells.chunks(jobs).enumerate() {
        let mut results: Vec<CellResult> = if jobs == 1 {
            chunk.iter().map(|c| run_cell(c, options.timing)).collect()
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = chunk.iter().map(|c| s.spawn(|| run_cell(c, options.timing))).collect();
                handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
            })
        };
        for (offset, result) in results.iter_mut().enumerate() {
            let index = chunk_index * jobs + offset;
            if pending_mutation.is_some_and(|target| index >= target) && mutable(result) {
                *result = with_mutation(|| run_cell(&chunk[offset], options.timing));
                pending_mutation = None;
                mutated = Some(index);
            }
            match result {
                Ok(reports) => {
                    for r in reports.iter() {
                        write_report(out, r, options.format)?;
                        tally.add(r);
                    }
                }
                Err(e) => {
                    tally.errors += 1;
                    writeln!(summary, "cell {index} ({:?} {:?}): {e}", chunk[offset].target, chunk[offset].params)?;
                }
            }
        }
    }
    writeln!(
        summary,
        "cells: {}, reports: {}, pass: {}, fail: {}, rejected: {}, errors: {}",
        cells.len(),
        tally.pass + tally.fail + tally.rejected,
        tally.pass,
        tally.fail,
        tally.rejected,
        tally.errors
    )?;
    if options.self_test {
        match mutated {
            Some(i) => writeln!(summary, "self-test: perturbed cell {i}")?,
            None => writeln!(summary, "self-test: no passing single-report cell to perturb")?,
        }
    }
    Ok(tally.exit_code(options.allow_reject))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axes() {
        let config = SweepConfig::parse(
            r#"
            seed = 3
            [[sweep]]
            task = "tau-theorem"
            primes = [7]
            d = [3]
            chi_conductors = { from = 1, to = 2 }
            psi_conductors = [-1, 0]
            chi_samples = 2
            "#,
        )
        .unwrap();
        assert_eq!(config.seed, 3);
        let cells = cells(&config).unwrap();
        assert_eq!(cells.len(), 2 * 2 * 2);
        assert!(cells.iter().all(|c| c.params.d == Some(3) && c.target == VerifyTarget::TauTheorem));
    }

    #[test]
    fn empty_axes_give_no_cells() {
        assert!(cells(&SweepConfig::parse("").unwrap()).unwrap().is_empty());
        let config = SweepConfig::parse("[[sweep]]\ntask = \"ramdet\"\nprimes = []\nn = [3]\n").unwrap();
        assert!(cells(&config).unwrap().is_empty());
    }

    #[test]
    fn invalid_shapes_are_skipped() {
        let config =
            SweepConfig::parse("[[sweep]]\ntask = \"ramdet\"\nprimes = [7, 11]\nn = [3, 4]\nchi_conductors = [2]\n")
                .unwrap();
        let cells = cells(&config).unwrap();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().all(|c| c.params.p == Some(7) && c.params.n == Some(3)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(SweepConfig::parse("[[sweep]]\ntask = \"hd\"\nprime = [7]\n").is_err());
        assert!(SweepConfig::parse("[[sweep]]\ntask = \"nope\"\n").is_err());
    }

    #[test]
    fn finite_field_cells_cover_divisors() {
        let config = SweepConfig::parse("[[sweep]]\ntask = \"hd\"\nprimes = [7]\ndegrees = [1, 2]\n").unwrap();
        let cells = cells(&config).unwrap();
        assert_eq!(cells.len(), 3 + 9);
        assert!(cells.iter().all(|c| c.all_chi));
    }
}
