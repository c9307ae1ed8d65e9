//! Verification reports: exact verdicts with rendered values and numeric cross-checks.

use std::cell::Cell;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclonum::{CyclotomicElement, QsLaurent, QsRational, RootOfUnity, SymScalar};

pub const SCHEMA_VERSION: u32 = 1;

/// Relative tolerance for the numeric cross-check of exact comparisons.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

/// Point at which functions of `s` are evaluated for the numeric cross-check.
pub const TEST_POINT: Complex64 = Complex64 { re: 0.3141, im: 0.2718 };

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    RejectedPrecondition,
}

/// An exact value with its complex approximation.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Rendered {
    pub exact: String,
    pub re: f64,
    pub im: f64,
}

impl Rendered {
    pub fn of<T: Checkable>(v: &T) -> Self {
        let z = v.approx();
        Rendered {
            exact: v.exact(),
            re: z.re,
            im: z.im,
        }
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Values that can appear on either side of a verified identity.
pub trait Checkable: PartialEq + Sized {
    fn exact(&self) -> String;
    /// Complex value; functions of `s` are evaluated at [`TEST_POINT`].
    fn approx(&self) -> Complex64;
    /// A value guaranteed to differ from a nonzero `self`, used by self-tests.
    fn doubled(&self) -> Self;
}

impl Checkable for CyclotomicElement {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.embed_complex()
    }
    fn doubled(&self) -> Self {
        self.scale_int(2)
    }
}

impl Checkable for SymScalar {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.embed_complex()
    }
    fn doubled(&self) -> Self {
        self * &SymScalar::from_integer(2)
    }
}

impl Checkable for RootOfUnity {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.to_complex()
    }
    fn doubled(&self) -> Self {
        self.mul(&RootOfUnity::minus_one())
    }
}

impl Checkable for QsLaurent {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.eval(TEST_POINT)
    }
    fn doubled(&self) -> Self {
        self.scale(&SymScalar::from_integer(2))
    }
}

impl Checkable for QsRational {
    fn exact(&self) -> String {
        self.to_string()
    }
    fn approx(&self) -> Complex64 {
        self.eval(TEST_POINT)
    }
    fn doubled(&self) -> Self {
        self.scale(&SymScalar::from_integer(2))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub label: String,
    pub lhs: Rendered,
    pub rhs: Rendered,
    pub verdict: Verdict,
    /// Whether the two approximations agree to [`NUMERIC_TOLERANCE`].
    pub numeric_agrees: bool,
}

impl IdentityCheck {
    /// `true` when the numeric comparison is consistent with the exact verdict.
    pub fn numerically_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Pass => self.numeric_agrees,
            _ => true,
        }
    }
}

pub fn numerically_close(a: Complex64, b: Complex64) -> bool {
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= NUMERIC_TOLERANCE * scale
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub task: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub checks: Vec<IdentityCheck>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Every passing check also agrees numerically.
    pub fn numerically_consistent(&self) -> bool {
        self.checks.iter().all(IdentityCheck::numerically_consistent)
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

thread_local! {
    static MUTATION_ARMED: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with the first report started on this thread perturbing its first comparison.
///
/// Harness self-tests use this to confirm that a wrong value is reported as a failure.
pub fn with_mutation<T>(f: impl FnOnce() -> T) -> T {
    MUTATION_ARMED.with(|armed| armed.set(true));
    let out = f();
    MUTATION_ARMED.with(|armed| armed.set(false));
    out
}

/// Accumulates the checks of one verification task.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    task: String,
    params: BTreeMap<String, String>,
    checks: Vec<IdentityCheck>,
    flags: Vec<String>,
    mutate_next: bool,
}

impl ReportBuilder {
    pub fn new(task: &str) -> Self {
        ReportBuilder {
            task: task.to_string(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            flags: Vec::new(),
            mutate_next: MUTATION_ARMED.with(|armed| armed.replace(false)),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn flag(&mut self, note: &str) {
        if !self.flags.iter().any(|f| f == note) {
            self.flags.push(note.to_string());
        }
    }

    /// Replaces the right-hand side of the next check by a different value.
    pub fn mutate_next_check(&mut self) {
        self.mutate_next = true;
    }

    /// Whether a mutation is pending for the next comparison; clears it.
    pub fn take_mutation(&mut self) -> bool {
        std::mem::take(&mut self.mutate_next)
    }

    /// Compares two values exactly and records the outcome.
    pub fn check<T: Checkable>(&mut self, label: &str, lhs: &T, rhs: &T) -> bool {
        let mutated;
        let rhs = if std::mem::take(&mut self.mutate_next) {
            mutated = rhs.doubled();
            &mutated
        } else {
            rhs
        };
        let ok = lhs == rhs;
        let l = Rendered::of(lhs);
        let r = Rendered::of(rhs);
        let numeric_agrees = numerically_close(l.approx(), r.approx());
        self.checks.push(IdentityCheck {
            label: label.to_string(),
            lhs: l,
            rhs: r,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            numeric_agrees,
        });
        ok
    }

    /// Records a comparison decided elsewhere.
    ///
    /// Callers comparing outside [`Self::check`] consult [`Self::take_mutation`]
    /// and perturb their own right-hand side.
    pub fn record(&mut self, label: &str, lhs: Rendered, rhs: Rendered, holds: bool) -> bool {
        let numeric_agrees = numerically_close(lhs.approx(), rhs.approx());
        self.checks.push(IdentityCheck {
            label: label.to_string(),
            lhs,
            rhs,
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            numeric_agrees,
        });
        holds
    }

    /// Records a boolean condition as a check with textual sides.
    pub fn check_bool(&mut self, label: &str, holds: bool, detail: &str) -> bool {
        let side = |s: &str| Rendered {
            exact: s.to_string(),
            re: 0.0,
            im: 0.0,
        };
        self.checks.push(IdentityCheck {
            label: label.to_string(),
            lhs: side(detail),
            rhs: side(if holds { detail } else { "violated" }),
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            numeric_agrees: true,
        });
        holds
    }

    pub fn finish(self) -> VerificationReport {
        let verdict = if !self.checks.is_empty() && self.checks.iter().all(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            task: self.task,
            params: self.params,
            verdict,
            checks: self.checks,
            flags: self.flags,
            message: None,
            elapsed_ms: None,
        }
    }

    pub fn reject(self, message: impl ToString) -> VerificationReport {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            task: self.task,
            params: self.params,
            verdict: Verdict::RejectedPrecondition,
            checks: Vec::new(),
            flags: self.flags,
            message: Some(message.to_string()),
            elapsed_ms: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let mut b = ReportBuilder::new("demo").param("p", 7);
        let x = CyclotomicElement::root_of_unity(3, 1);
        assert!(b.check("same", &x, &x.clone()));
        let r = b.finish();
        assert!(r.passed());
        assert!(r.numerically_consistent());

        let mut b = ReportBuilder::new("demo");
        b.mutate_next_check();
        assert!(!b.check("mutated", &x, &x));
        assert!(b.check("clean", &x, &x));
        assert_eq!(b.finish().verdict, Verdict::Fail);

        let r = with_mutation(|| {
            let mut outer = ReportBuilder::new("outer");
            let mut inner = ReportBuilder::new("inner");
            (outer.check("a", &x, &x), inner.check("b", &x, &x))
        });
        assert_eq!(r, (false, true));
    }
}
