//! Per-sample checks and their aggregation into suite reports.

use std::collections::BTreeMap;

use serde::Serialize;

/// Rounds to 12 significant digits, the precision of every number the harness prints.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

/// Rounds to 12 decimal places, the display precision of entropies.
pub fn fixed12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let y: f64 = format!("{x:.12}").parse().expect("formatted float");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// One evaluated inequality or equality.
///
/// Inequalities report the signed slack `rhs − lhs`; equalities report `−|diff|`.
/// A check passes when `slack ≥ −tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub tag: &'static str,
    pub slack: f64,
    pub tol: f64,
}

impl Check {
    pub fn ineq(tag: &'static str, slack: f64, tol: f64) -> Self {
        Check { tag, slack, tol }
    }

    pub fn eq(tag: &'static str, diff: f64, tol: f64) -> Self {
        Check {
            tag,
            slack: -diff.abs(),
            tol,
        }
    }

    pub fn margin(&self) -> f64 {
        self.slack + self.tol
    }

    pub fn passes(&self) -> bool {
        self.margin() >= 0.0 && !self.slack.is_nan()
    }
}

/// Outcome of one sample: its checks or the error raised while drawing it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    pub index: u64,
    pub dim: usize,
    pub result: Result<Vec<Check>, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub tag: &'static str,
    pub evaluations: usize,
    pub tolerance: f64,
    pub worst_slack: f64,
    pub worst_index: u64,
    pub worst_dim: usize,
    pub violations: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleError {
    pub index: u64,
    pub dim: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Slack of the check with the smallest margin; negative beyond its tolerance is a failure.
    pub worst_violation: f64,
    pub worst_tolerance: f64,
    pub worst_check: String,
    pub worst_case_seed: u64,
    pub worst_case_index: u64,
    pub worst_case_dim: usize,
    pub replay_reproduced: bool,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    pub errors: Vec<SampleError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl SuiteReport {
    /// Rounds every float to 12 significant digits.
    pub fn rounded(mut self) -> Self {
        self.tolerance = sig12(self.tolerance);
        self.worst_violation = sig12(self.worst_violation);
        self.worst_tolerance = sig12(self.worst_tolerance);
        for c in &mut self.checks {
            c.tolerance = sig12(c.tolerance);
            c.worst_slack = sig12(c.worst_slack);
        }
        self.wall_time = self.wall_time.map(sig12);
        self
    }
}

/// Folds sample outcomes, in index order, into per-tag summaries and the overall worst case.
///
/// Ties on the margin go to the lowest sample index, so the result does not depend on
/// evaluation order.
pub fn aggregate(
    suite: &str,
    dims: &[usize],
    samples: usize,
    seed: u64,
    tolerance: f64,
    outcomes: &[SampleOutcome],
) -> SuiteReport {
    let mut sorted: Vec<&SampleOutcome> = outcomes.iter().collect();
    sorted.sort_by_key(|o| o.index);
    let mut by_tag: BTreeMap<&'static str, CheckSummary> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut worst: Option<(Check, u64, usize)> = None;
    for o in sorted {
        match &o.result {
            Err(message) => errors.push(SampleError {
                index: o.index,
                dim: o.dim,
                message: message.clone(),
            }),
            Ok(checks) => {
                for c in checks {
                    let entry = by_tag.entry(c.tag).or_insert(CheckSummary {
                        tag: c.tag,
                        evaluations: 0,
                        tolerance: c.tol,
                        worst_slack: f64::INFINITY,
                        worst_index: o.index,
                        worst_dim: o.dim,
                        violations: 0,
                        pass: true,
                    });
                    entry.evaluations += 1;
                    if c.slack < entry.worst_slack || c.slack.is_nan() {
                        entry.worst_slack = c.slack;
                        entry.worst_index = o.index;
                        entry.worst_dim = o.dim;
                    }
                    if !c.passes() {
                        entry.violations += 1;
                        entry.pass = false;
                    }
                    let better = match &worst {
                        None => true,
                        Some((w, _, _)) => {
                            c.margin() < w.margin() || (c.slack.is_nan() && !w.slack.is_nan())
                        }
                    };
                    if better {
                        worst = Some((*c, o.index, o.dim));
                    }
                }
            }
        }
    }
    let checks: Vec<CheckSummary> = by_tag.into_values().collect();
    let (worst_check, worst_index, worst_dim) =
        worst.unwrap_or((Check::ineq("none", f64::INFINITY, tolerance), 0, 0));
    let pass = errors.is_empty() && checks.iter().all(|c| c.pass);
    SuiteReport {
        suite: suite.to_string(),
        dims: dims.to_vec(),
        samples,
        seed,
        tolerance,
        worst_violation: worst_check.slack,
        worst_tolerance: worst_check.tol,
        worst_check: worst_check.tag.to_string(),
        worst_case_seed: seed,
        worst_case_index: worst_index,
        worst_case_dim: worst_dim,
        replay_reproduced: false,
        pass,
        checks,
        errors,
        wall_time: None,
    }
}
