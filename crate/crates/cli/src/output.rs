use std::io::Write;

use clap::ValueEnum;
use hdrel::report::{Verdict, VerificationReport};

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Tally of verdicts, and the exit code it implies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub rejected: usize,
    pub errors: usize,
}

impl Tally {
    pub fn add(&mut self, r: &VerificationReport) {
        match r.verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::RejectedPrecondition => self.rejected += 1,
        }
    }

    /// 1 on any failure, 2 on errors or on rejections that were not allowed, 0 otherwise.
    pub fn exit_code(&self, allow_reject: bool) -> u8 {
        if self.fail > 0 {
            1
        } else if self.errors > 0 || (self.rejected > 0 && !allow_reject) {
            2
        } else {
            0
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::RejectedPrecondition => "rejected",
    }
}

pub fn table_header(out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{:<24} {:<9} {:>7}  parameters", "task", "verdict", "checks")
}

pub fn write_report(out: &mut impl Write, r: &VerificationReport, format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, r)?;
            writeln!(out)
        }
        Format::Table => {
            let passed = r.checks.iter().filter(|c| c.verdict == Verdict::Pass).count();
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(
                out,
                "{:<24} {:<9} {:>7}  {}",
                r.task,
                verdict_name(r.verdict),
                format!("{passed}/{}", r.checks.len()),
                params.join(" ")
            )?;
            for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
                writeln!(out, "    failed: {}: {} vs {}", c.label, c.lhs.exact, c.rhs.exact)?;
            }
            if let Some(m) = &r.message {
                writeln!(out, "    {m}")?;
            }
            for f in &r.flags {
                writeln!(out, "    note: {f}")?;
            }
            Ok(())
        }
    }
}
