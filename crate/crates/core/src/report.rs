//! Verification reports and their flat `key = value` serialization.

use std::fmt::Write as _;

use crate::engine::Mode;
use crate::hypergraph::{Hypergraph, LogSize};
use crate::params::Params;

/// Shortest stable decimal rendering: 12 fractional digits, trailing zeros
/// trimmed.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mut s = format!("{x:.12}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// The supplied sets are all independent sets of the hypergraph.
    Enumeration,
    Sample,
}

impl Coverage {
    fn as_str(self) -> &'static str {
        match self {
            Coverage::Enumeration => "enumeration",
            Coverage::Sample => "sampling",
        }
    }
}

/// Outcome of one condition, with the first counterexample found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Check {
    pub counterexample: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn verdict(&self, on_sample: bool) -> &'static str {
        match (self.passed(), on_sample) {
            (false, _) => "fail",
            (true, true) => "pass_on_sample",
            (true, false) => "pass",
        }
    }

    fn detail(&self) -> &str {
        self.counterexample.as_deref().unwrap_or("none")
    }
}

/// Outcome of the `|X \ C| >= n^{1-eps} / 4` diagnostic on non-expanding
/// top-level prints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    NotApplicable,
    NotAsserted,
    Pass,
    Fail,
}

impl Diagnostic {
    fn as_str(self) -> &'static str {
        match self {
            Diagnostic::NotApplicable => "n/a",
            Diagnostic::NotAsserted => "not_asserted",
            Diagnostic::Pass => "pass",
            Diagnostic::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSummary {
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub ldeg: f64,
    /// `delta`-bounded at `delta = 1 - pi`.
    pub bounded: bool,
    /// `(delta, eps)`-homogeneous.
    pub homogeneous: bool,
}

impl InstanceSummary {
    pub fn new(h: &Hypergraph, params: &Params) -> Self {
        InstanceSummary {
            n: h.n(),
            k: h.k(),
            edges: h.len(),
            ldeg: h.ldeg(),
            bounded: h.is_bounded(params.delta),
            homogeneous: h.is_homogeneous(params.delta, params.eps),
        }
    }

    fn write(&self, out: &mut String) {
        kv(out, "n", self.n);
        kv(out, "k", self.k);
        kv(out, "edges", self.edges);
        kv(out, "ldeg", fmt_real(self.ldeg));
        kv(out, "bounded", self.bounded);
        kv(out, "homogeneous", self.homogeneous);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainerStats {
    pub distinct_prints: usize,
    pub distinct_containers: usize,
    /// `log_n |X \ C|` over distinct containers.
    pub cocontainer_log_min: LogSize,
    pub cocontainer_log_max: LogSize,
    pub cocontainer_log_mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub instance: InstanceSummary,
    pub params: Params,
    pub mode: Mode,
    pub coverage: Coverage,
    pub samples: usize,
    pub cond_i: Check,
    pub cond_ii: Check,
    pub cond_iii: Check,
    pub cond_iv: Check,
    /// Condition (iv) is asserted only when the hypotheses hold: both
    /// parameter flags and `(delta, eps)`-homogeneity of the instance.
    pub cond_iv_asserted: bool,
    pub stats: ContainerStats,
    pub nonexpanding_prints: usize,
    pub quarter_bound: Diagnostic,
    /// Smallest `log_n |X \ C|` over non-expanding top-level prints.
    pub quarter_bound_min_log: Option<LogSize>,
    /// `(#independent sets, sum over distinct prints of 2^{|U P + C_P|})`.
    pub counting_bound: Option<(u128, u128)>,
    pub heuristic: bool,
}

impl VerificationReport {
    pub fn counting_bound_ok(&self) -> Option<bool> {
        self.counting_bound.map(|(lhs, rhs)| lhs <= rhs)
    }

    /// Every asserted condition and diagnostic passed.
    pub fn all_asserted_pass(&self) -> bool {
        self.cond_i.passed()
            && self.cond_ii.passed()
            && self.cond_iii.passed()
            && (!self.cond_iv_asserted || self.cond_iv.passed())
            && self.counting_bound_ok() != Some(false)
            && self.quarter_bound != Diagnostic::Fail
    }

    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        kv(&mut out, "status", "ok");
        self.instance.write(&mut out);
        write_params(&mut out, &self.params);
        kv(&mut out, "mode", self.mode);
        kv(&mut out, "coverage", self.coverage.as_str());
        kv(&mut out, "samples", self.samples);
        let sampled = self.coverage == Coverage::Sample;
        for (name, check, on_sample) in [
            ("cond_i", &self.cond_i, sampled),
            ("cond_ii", &self.cond_ii, sampled),
            ("cond_iii", &self.cond_iii, false),
            ("cond_iv", &self.cond_iv, false),
        ] {
            kv(&mut out, name, check.verdict(on_sample));
            kv(&mut out, &format!("{name}_counterexample"), check.detail());
        }
        kv(&mut out, "cond_iv_asserted", self.cond_iv_asserted);
        kv(&mut out, "distinct_prints", self.stats.distinct_prints);
        kv(&mut out, "distinct_containers", self.stats.distinct_containers);
        kv(&mut out, "cocontainer_log_min", self.stats.cocontainer_log_min);
        kv(&mut out, "cocontainer_log_max", self.stats.cocontainer_log_max);
        kv(
            &mut out,
            "cocontainer_log_mean",
            fmt_real(self.stats.cocontainer_log_mean),
        );
        kv(&mut out, "nonexpanding_prints", self.nonexpanding_prints);
        kv(&mut out, "quarter_bound", self.quarter_bound.as_str());
        kv(
            &mut out,
            "quarter_bound_min_log",
            self.quarter_bound_min_log
                .map_or_else(|| "n/a".to_string(), |l| l.to_string()),
        );
        match self.counting_bound {
            Some((lhs, rhs)) => {
                kv(&mut out, "counting_bound_lhs", lhs);
                kv(&mut out, "counting_bound_rhs", rhs);
                kv(&mut out, "counting_bound_ok", lhs <= rhs);
            }
            None => {
                kv(&mut out, "counting_bound_lhs", "n/a");
                kv(&mut out, "counting_bound_rhs", "n/a");
                kv(&mut out, "counting_bound_ok", "n/a");
            }
        }
        kv(
            &mut out,
            "oracle_mode",
            if self.heuristic { "heuristic" } else { "exact" },
        );
        kv(
            &mut out,
            "verdict",
            if self.all_asserted_pass() { "pass" } else { "fail" },
        );
        out
    }
}

/// Report written when strict mode refuses to run.
pub fn refusal_report(h: &Hypergraph, params: &Params, mode: Mode, reason: &str) -> String {
    let mut out = String::new();
    kv(&mut out, "status", "refused");
    kv(&mut out, "reason", reason);
    InstanceSummary::new(h, params).write(&mut out);
    write_params(&mut out, params);
    kv(&mut out, "mode", mode);
    out
}

fn write_params(out: &mut String, params: &Params) {
    for (key, value) in params.to_lines() {
        if key != "k" && key != "n" {
            kv(out, key, value);
        }
    }
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key} = {value}");
}
