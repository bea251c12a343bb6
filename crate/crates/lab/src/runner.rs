//! Task dispatch: one config in, findings and sidecar tables out.

use std::collections::BTreeMap;

use cesaro_core::carleson::{carleson_constant, dyadic_probes, moment_classify, CarlesonVerdict};
use cesaro_core::moments::{hausdorff_check, structural_check, HausdorffOutcome, HausdorffVerdict};
use cesaro_core::operator::{apply_cesaro, compactness_profile, continuity_functional, hinfty_summability, Profile, Summation};
use cesaro_core::spectrum::{
    eigen_coefficients, eigen_log_coefficients, eigen_residual, inverse_at_zero, korenblum_spectral_check, log_coefficients_csv, point_spectrum_bounds,
    product_bound_check, resolvent_solve, spectral_query, BoundBranch, ProductBoundQuery,
};
use cesaro_core::{BigRational, Check, Complex64, Measure, MomentSequence, Scalar, TruncatedSeries, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, GridSpec, Task};
use crate::reproduce;

/// Default prefix length for classifier tasks that do not set `N`.
pub const DEFAULT_CLASSIFIER_N: usize = 4096;
/// Relative residual accepted for eigenfunctions and resolvent solutions.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Default probe levels for the tail method.
pub const DEFAULT_PROBE_LEVELS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// A classification result, neither pass nor fail.
    Neutral,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
            Verdict::Skipped => Status::Neutral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub evidence: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Finding {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self { name: name.into(), status, outcome: None, value: None, evidence: Vec::new(), note: String::new() }
    }

    pub fn check(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn outcome(mut self, outcome: impl Into<String>) -> Self {
        self.outcome = Some(outcome.into());
        self
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn evidence(mut self, e: Vec<(f64, f64)>) -> Self {
        self.evidence = e;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl From<&Check> for Finding {
    fn from(c: &Check) -> Self {
        Finding { name: c.name.clone(), status: c.verdict.into(), outcome: None, value: c.value, evidence: c.evidence.clone(), note: c.note.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub name: String,
    pub contents: String,
}

/// Everything a task produced.
#[derive(Debug, Clone, Default)]
pub struct TaskOutput {
    pub findings: Vec<Finding>,
    pub data: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub sidecars: Vec<Sidecar>,
    pub arithmetic: &'static str,
}

impl TaskOutput {
    fn new() -> Self {
        Self { arithmetic: "f64", ..Self::default() }
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    pub fn status(&self) -> Status {
        let has = |s| self.findings.iter().any(|f| f.status == s);
        if has(Status::Fail) {
            Status::Fail
        } else if has(Status::Inconclusive) {
            Status::Inconclusive
        } else if self.findings.iter().all(|f| f.status == Status::Neutral) {
            Status::Neutral
        } else {
            Status::Pass
        }
    }

    fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    fn sidecar(&mut self, name: impl Into<String>, contents: String) {
        self.sidecars.push(Sidecar { name: name.into(), contents });
    }
}

/// Execution options that do not belong to the config itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub exact: bool,
}

impl RunOptions {
    pub fn from_env() -> Self {
        Self { exact: std::env::var("CESARO_LAB_EXACT").is_ok_and(|v| v.trim() == "1") }
    }
}

pub type TaskResult = Result<TaskOutput, cesaro_core::Error>;

/// Runs one validated config.
pub fn execute(cfg: &ExperimentConfig, opts: RunOptions) -> TaskResult {
    match cfg.task() {
        Task::Moments => moments(cfg, opts),
        Task::Hausdorff => hausdorff(cfg, opts),
        Task::Carleson => carleson(cfg),
        Task::Continuity => profile(cfg, true),
        Task::Compactness => profile(cfg, false),
        Task::Hinfty => hinfty(cfg),
        Task::Spectrum => spectrum(cfg),
        Task::Eigen => eigen(cfg, opts),
        Task::Resolvent => resolvent(cfg, opts),
        Task::ProductBounds => product_bounds(cfg),
        Task::ReproducePaper => reproduce::run_case(cfg, opts),
    }
}

fn measure(cfg: &ExperimentConfig) -> Result<Measure, cesaro_core::Error> {
    cfg.measure()?.ok_or_else(|| cesaro_core::Error::Precondition("task needs a measure".into()))
}

fn sequence(cfg: &ExperimentConfig, n: usize) -> Result<MomentSequence<f64>, cesaro_core::Error> {
    match &cfg.sequence {
        Some(v) => MomentSequence::from_raw(v.clone())?.truncate(n + 1),
        None => measure(cfg)?.moments_upto(n),
    }
}

/// Exact moments when the source allows them; `Err` carries the reason otherwise.
fn exact_sequence(cfg: &ExperimentConfig, n: usize) -> Result<MomentSequence<BigRational>, String> {
    match &cfg.sequence {
        Some(v) => {
            let q = v.iter().take(n + 1).map(|&x| BigRational::from_float(x).ok_or_else(|| format!("{x} has no rational value"))).collect::<Result<Vec<_>, _>>()?;
            MomentSequence::from_raw(q).map_err(|e| e.to_string())
        }
        None => measure(cfg).and_then(|m| m.exact_moments_upto(n)).map_err(|e| e.to_string()),
    }
}

fn fraction(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn moments(cfg: &ExperimentConfig, opts: RunOptions) -> TaskResult {
    let n = cfg.n.expect("validated");
    let mut out = TaskOutput::new();
    let seq = sequence(cfg, n)?;
    if opts.exact {
        match exact_sequence(cfg, n) {
            Ok(q) => {
                out.arithmetic = "exact";
                out.put("exact_moments", q.values().iter().map(fraction).collect::<Vec<_>>());
            }
            Err(reason) => out.put("exact_unavailable", reason),
        }
    }
    let mut csv = String::from("n,mu_n\n");
    for (i, v) in seq.values().iter().enumerate() {
        csv.push_str(&format!("{i},{v:e}\n"));
    }
    out.put("moments", seq.values());
    out.put("flags", json!({
        "decreasing": seq.flags().is_decreasing,
        "strictly_decreasing": seq.flags().is_strictly_decreasing,
        "log_convex": seq.flags().is_log_convex,
        "ratio_limit_estimate": seq.flags().ratio_limit_estimate,
    }));
    if seq.degree() >= 3 {
        let report = structural_check(&seq)?;
        out.findings.extend(report.checks.iter().map(Finding::from));
    } else {
        out.push(Finding::new("structure", Status::Neutral).note("structural checks need N >= 3"));
    }
    out.sidecar("moments.csv", csv);
    Ok(out)
}

fn hausdorff_finding<T: Scalar>(h: &HausdorffOutcome<T>) -> Finding {
    let table = &h.table;
    let evidence: Vec<(f64, f64)> = (0..=table.max_order())
        .map(|j| {
            let row = table.row(j).unwrap_or(&[]);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let min = row.iter().map(|v| sign * v.to_f64_lossy()).fold(f64::INFINITY, f64::min);
            (j as f64, min)
        })
        .collect();
    let f = Finding::new("hausdorff", h.verdict.verdict().into()).evidence(evidence).value(h.tail_slope);
    match &h.verdict {
        HausdorffVerdict::Pass { order } => f.outcome("completely_monotone").note(format!("alternating signs hold up to order {order}")),
        HausdorffVerdict::Fail { j, n, reason } => f.outcome(format!("violation at (j, n) = ({j}, {n})")).note(reason.clone()),
        HausdorffVerdict::Inconclusive { reason } => f.outcome("inconclusive").note(reason.clone()),
    }
}

fn hausdorff(cfg: &ExperimentConfig, opts: RunOptions) -> TaskResult {
    let n = cfg.n.expect("validated");
    let j = cfg.j.unwrap_or((n / 2).min(20));
    let mut out = TaskOutput::new();
    if opts.exact {
        match exact_sequence(cfg, n) {
            Ok(q) => {
                let h = hausdorff_check(&q, j)?;
                out.arithmetic = "exact";
                out.push(hausdorff_finding(&h));
                if let HausdorffVerdict::Fail { j, n, .. } = h.verdict {
                    out.put("violation", json!({ "j": j, "n": n }));
                }
                out.tolerances.insert("sign_tolerance".into(), 0.0);
                out.sidecar("hausdorff_differences.csv", h.table.to_csv());
                return Ok(out);
            }
            Err(reason) => out.put("exact_unavailable", reason),
        }
    }
    let seq = sequence(cfg, n)?;
    let h = hausdorff_check(&seq, j)?;
    out.push(hausdorff_finding(&h));
    if let HausdorffVerdict::Fail { j, n, .. } = h.verdict {
        out.put("violation", json!({ "j": j, "n": n }));
    }
    out.put("row_tolerances", (0..=j).map(|r| h.table.tolerance(r).copied().unwrap_or(f64::NAN)).collect::<Vec<_>>());
    out.tolerances.insert("sign_tolerance_row0".into(), h.table.tolerance(0).copied().unwrap_or(f64::NAN));
    out.sidecar("hausdorff_differences.csv", h.table.to_csv());
    Ok(out)
}

fn class_finding(name: &str, v: &CarlesonVerdict) -> Finding {
    let outcome = serde_json::to_value(v.class).ok().and_then(|x| x.as_str().map(str::to_string)).unwrap_or_default();
    let status = if outcome == "inconclusive" { Status::Inconclusive } else { Status::Neutral };
    Finding::new(name, status).outcome(outcome).evidence(v.evidence.clone())
}

fn carleson(cfg: &ExperimentConfig) -> TaskResult {
    let s = cfg.s.expect("validated");
    let mut out = TaskOutput::new();
    let m = measure(cfg)?;
    if m.representation() != "moment-defined" {
        let probes = match cfg.grid {
            Some(g) => g.build()?.points().to_vec(),
            None => dyadic_probes(DEFAULT_PROBE_LEVELS),
        };
        let c = carleson_constant(&m, s, &probes)?;
        out.push(class_finding("carleson_tail", &c.verdict).value(c.sup));
        out.sidecar("carleson_tail.csv", c.verdict.evidence_csv());
    } else {
        out.push(Finding::new("carleson_tail", Status::Neutral).outcome("skipped").note("tail masses are not available for moment-defined measures"));
    }
    let n = cfg.n.unwrap_or(DEFAULT_CLASSIFIER_N);
    let v = moment_classify(&m.moments_upto(n)?, s)?;
    out.push(class_finding("carleson_moment", &v));
    out.sidecar("carleson_moment.csv", v.evidence_csv());
    out.put("s", s);
    Ok(out)
}

fn profile_evidence(p: &Profile) -> Vec<(f64, f64)> {
    p.points.iter().map(|x| (x.r, x.product)).collect()
}

fn profile(cfg: &ExperimentConfig, continuity: bool) -> TaskResult {
    let (gamma, delta) = (cfg.gamma.expect("validated"), cfg.delta.expect("validated"));
    let grid = cfg.grid.unwrap_or(GridSpec::Default).build()?;
    let m = measure(cfg)?;
    let mut out = TaskOutput::new();
    let (name, p) = if continuity {
        ("continuity", continuity_functional(&m, gamma, delta, &grid)?)
    } else {
        ("compactness", compactness_profile(&m, gamma, delta, &grid)?)
    };
    let verdict = if continuity { serde_json::to_value(p.continuity()) } else { serde_json::to_value(p.compactness()) };
    let outcome = verdict.ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let status = if outcome == "inconclusive" { Status::Inconclusive } else { Status::Neutral };
    let divergent = p.divergent_points();
    let mut f = Finding::new(name, status).outcome(outcome).value(p.sup).evidence(profile_evidence(&p));
    if !divergent.is_empty() {
        f = f.note(format!("integral diverges at {} grid points", divergent.len()));
    }
    out.push(f);
    out.put("sup", p.sup);
    out.put("trend", p.stats);
    out.put("divergent_points", divergent);
    out.sidecar(format!("{name}_profile.csv"), p.to_csv());
    Ok(out)
}

fn summation_finding(name: &str, s: &Summation) -> Finding {
    Finding::new(name, Status::Neutral)
        .outcome(if s.convergent { "convergent" } else { "divergent" })
        .value(s.value)
        .evidence(vec![(0.0, s.value)])
        .note(s.method)
}

fn hinfty(cfg: &ExperimentConfig) -> TaskResult {
    let r = hinfty_summability(&measure(cfg)?)?;
    let mut out = TaskOutput::new();
    out.push(summation_finding("moment_sum", &r.moment_sum));
    out.push(summation_finding("gap_integral", &r.gap_integral));
    out.push(Finding::check("agreement", r.agree).evidence(vec![(0.0, r.moment_sum.value), (1.0, r.gap_integral.value)]));
    out.tolerances.insert("agreement_relative".into(), 1e-6);
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> TaskResult {
    let n = cfg.n.unwrap_or(if cfg.s.is_some() { DEFAULT_CLASSIFIER_N } else { 256 });
    let seq = measure(cfg)?.moments_upto(n)?;
    let mut out = TaskOutput::new();
    if let (Some(c), Some(gamma)) = (cfg.c, cfg.gamma) {
        let b = point_spectrum_bounds(&seq, gamma, c, cfg.d)?;
        let mu: Vec<(f64, f64)> = b.inner.iter().map(|&i| (i as f64, seq.values()[i])).collect();
        out.push(Finding::new("point_spectrum", Status::Neutral).outcome(format!("{} guaranteed eigenvalues", b.inner.len())).evidence(mu));
        let hyp = Finding::check("moment_hypothesis", b.violations.is_empty())
            .evidence(b.violations.iter().map(|&i| (i as f64, seq.values()[i] * i as f64)).collect());
        out.push(if b.violations.is_empty() { hyp } else { hyp.note("n mu_n leaves [D, C] on the second half of the prefix") });
        out.put("bracket", &b);
    }
    if let Some(lambda) = cfg.lambda {
        out.put("query", query_json(&spectral_query(&seq, lambda)));
    }
    if let Some(s) = cfg.s {
        let k = korenblum_spectral_check(&seq, s)?;
        let outcome = match k.verdict {
            Verdict::Pass => "zero_in_resolvent",
            Verdict::Fail => "zero_in_spectrum",
            _ => "inconclusive",
        };
        let status = if outcome == "inconclusive" { Status::Inconclusive } else { Status::Neutral };
        out.push(Finding::new("korenblum_spectral", status).outcome(outcome).evidence(k.evidence.clone()).note(format!("1/mu_n <= C n^s at s = {s}")));
    }
    Ok(out)
}

fn query_json(q: &cesaro_core::spectrum::SpectralQuery) -> Value {
    json!({
        "lambda": [q.lambda.re, q.lambda.im],
        "distance": q.distance,
        "nearest_index": q.nearest_index,
        "near_spectrum": q.near_spectrum,
    })
}

/// Coefficient prefix stored in the report body; the full list goes to a sidecar.
const COEFFICIENT_HEAD: usize = 100;

fn eigen(cfg: &ExperimentConfig, opts: RunOptions) -> TaskResult {
    let (n0, n) = (cfg.n0.expect("validated"), cfg.n.expect("validated"));
    let gamma = cfg.gamma.unwrap_or(n0 as f64 + 2.0);
    let seq = sequence(cfg, n)?;
    let mut out = TaskOutput::new();
    let head = n.min(COEFFICIENT_HEAD);
    if opts.exact {
        match exact_sequence(cfg, n) {
            Ok(q) => {
                let f = eigen_coefficients(&q, n0, head)?;
                out.arithmetic = "exact";
                out.put("exact_coefficients", f.coeffs().iter().map(fraction).collect::<Vec<_>>());
            }
            Err(reason) => out.put("exact_unavailable", reason),
        }
    }
    let f = eigen_coefficients(&seq, n0, head)?;
    out.put("eigenvalue", seq.values()[n0]);
    out.put("coefficients", f.coeffs());
    out.put("gamma", gamma);
    let logs = eigen_log_coefficients(&seq, n0, n)?;
    out.sidecar("eigen_coefficients.csv", log_coefficients_csv(&logs));
    let r = eigen_residual(&seq, n0, n, gamma)?;
    let rel = r.residual / r.norm;
    out.push(Finding::check("eigen_residual", rel <= RESIDUAL_TOL).value(rel).evidence(vec![(r.norm, r.residual)]).note("residual / norm on the default grid"));
    out.tolerances.insert("residual_relative".into(), RESIDUAL_TOL);
    Ok(out)
}

fn series_csv(coeffs: &[Complex64]) -> String {
    let mut csv = String::from("n,re,im\n");
    for (i, z) in coeffs.iter().enumerate() {
        csv.push_str(&format!("{i},{:e},{:e}\n", z.re, z.im));
    }
    csv
}

fn resolvent(cfg: &ExperimentConfig, opts: RunOptions) -> TaskResult {
    let n = cfg.n.expect("validated");
    let lambda = cfg.lambda.expect("validated");
    let spec = cfg.series.as_ref().expect("validated");
    let b = spec.build(n)?;
    let seq = sequence(cfg, n)?;
    let mut out = TaskOutput::new();
    out.tolerances.insert("residual_relative".into(), RESIDUAL_TOL);
    if lambda == Complex64::new(0.0, 0.0) {
        if opts.exact {
            match (exact_sequence(cfg, n), spec.build_real(n)) {
                (Ok(q), Ok(br)) => {
                    let bq = br.coeffs().iter().map(|&x| BigRational::from_float(x)).collect::<Option<Vec<_>>>();
                    if let Some(bq) = bq {
                        let bq = TruncatedSeries::new(bq)?;
                        let a = inverse_at_zero(&q, &bq)?;
                        let back = apply_cesaro(&q, &a)?;
                        out.arithmetic = "exact";
                        out.push(Finding::check("exact_round_trip", back == bq).evidence(vec![(n as f64, 0.0)]).note("C_mu applied to the exact inverse reproduces b"));
                        out.put("exact_solution_head", a.coeffs().iter().take(COEFFICIENT_HEAD + 1).map(fraction).collect::<Vec<_>>());
                    }
                }
                (Err(reason), _) => out.put("exact_unavailable", reason),
                (_, Err(e)) => out.put("exact_unavailable", e.to_string()),
            }
        }
        let a = inverse_at_zero(&seq, &b)?;
        let back = apply_cesaro(&seq, &a)?;
        let res = (0..=n).map(|k| (back.coeffs()[k] - b.coeffs()[k]).norm()).fold(0.0, f64::max);
        let rel = res / b.max_modulus().max(f64::MIN_POSITIVE);
        out.push(Finding::check("residual", rel <= RESIDUAL_TOL).value(rel).evidence(vec![(n as f64, res)]).note("zero-inverse: max_n |(C_mu g - b)_n| / max |b_n|"));
        out.put("max_solution_modulus", a.max_modulus());
        out.sidecar("resolvent_solution.csv", series_csv(a.coeffs()));
        return Ok(out);
    }
    let sol = resolvent_solve(&seq, lambda, &b)?;
    let cg = apply_cesaro(&seq, &sol.series)?;
    let res = (0..=n).map(|k| (cg.coeffs()[k] - lambda * sol.series.coeffs()[k] - b.coeffs()[k]).norm()).fold(0.0, f64::max);
    let scale = b.max_modulus().max(sol.series.max_modulus() * lambda.norm());
    let rel = res / scale;
    let mut f = Finding::check("residual", rel <= RESIDUAL_TOL).value(rel).evidence(vec![(n as f64, res)]);
    if let Some(w) = &sol.warning {
        f = f.note(w.clone());
    }
    out.push(f);
    out.put("query", query_json(&sol.query));
    out.put("max_partial_sum", sol.max_partial_sum);
    out.put("warning", &sol.warning);
    out.sidecar("resolvent_solution.csv", series_csv(sol.series.coeffs()));
    Ok(out)
}

fn branch_finding(name: &str, b: &BoundBranch) -> Finding {
    let f = Finding::check(name, b.holds).value(b.constant).outcome(format!("exponent {}", b.exponent)).evidence(b.evidence.clone());
    match b.first_failure {
        Some(k) => f.note(format!("first failure at k = {k}")),
        None => f,
    }
}

fn product_bounds(cfg: &ExperimentConfig) -> TaskResult {
    let k_max = cfg.k_max.expect("validated");
    let seq = measure(cfg)?.moments_upto(k_max)?;
    let q = ProductBoundQuery {
        lambda: cfg.lambda.expect("validated"),
        c: cfg.c.expect("validated"),
        start: cfg.start.unwrap_or(1),
        k_fit: cfg.k_fit.expect("validated"),
        k_max,
        upper: cfg.a.zip(cfg.d),
    };
    let r = product_bound_check(&seq, &q)?;
    let mut out = TaskOutput::new();
    let pre = Finding::new("precondition", r.precondition.into());
    out.push(if r.precondition_note.is_empty() { pre } else { pre.note(r.precondition_note.clone()) });
    if let Some(b) = &r.lower {
        out.push(branch_finding("lower_bound", b));
        out.put("lower_exponent", b.exponent);
    }
    if let Some(b) = &r.upper {
        out.push(branch_finding("upper_bound", b));
        out.put("upper_exponent", b.exponent);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_aggregation() {
        let mut out = TaskOutput::new();
        out.push(Finding::new("a", Status::Neutral));
        assert_eq!(out.status(), Status::Neutral);
        out.push(Finding::new("b", Status::Pass));
        assert_eq!(out.status(), Status::Pass);
        out.push(Finding::new("c", Status::Inconclusive));
        assert_eq!(out.status(), Status::Inconclusive);
        out.push(Finding::new("d", Status::Fail));
        assert_eq!(out.status(), Status::Fail);
    }

    #[test]
    fn fractions_print_in_lowest_terms() {
        assert_eq!(fraction(&BigRational::new(2.into(), 4.into())), "1/2");
        assert_eq!(fraction(&BigRational::new(6.into(), 3.into())), "2");
    }
}
