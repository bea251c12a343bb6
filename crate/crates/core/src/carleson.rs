//! s-Carleson classification from tail masses or from moments.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::measures::Measure;
use crate::moments::MomentSequence;
use crate::trend::{self, Trend, TrendPolicy, TrendStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CarlesonMethod {
    Tail,
    Moment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CarlesonClass {
    /// Ratio bounded but not vanishing.
    Carleson,
    /// Ratio tends to zero (implies Carleson).
    Vanishing,
    Neither,
    Inconclusive,
}

impl CarlesonClass {
    pub fn is_carleson(self) -> bool {
        matches!(self, CarlesonClass::Carleson | CarlesonClass::Vanishing)
    }
}

impl From<Trend> for CarlesonClass {
    fn from(t: Trend) -> Self {
        match t {
            Trend::Vanishing => CarlesonClass::Vanishing,
            Trend::Bounded => CarlesonClass::Carleson,
            Trend::Growing => CarlesonClass::Neither,
            Trend::Inconclusive => CarlesonClass::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonVerdict {
    pub s: f64,
    pub method: CarlesonMethod,
    pub class: CarlesonClass,
    /// `(probe point or index, ratio)`.
    pub evidence: Vec<(f64, f64)>,
    pub stats: TrendStats,
}

impl CarlesonVerdict {
    /// CSV with columns `probe_or_index,ratio`.
    pub fn evidence_csv(&self) -> String {
        let mut out = String::from("probe_or_index,ratio\n");
        for (x, r) in &self.evidence {
            out.push_str(&format!("{x:e},{r:e}\n"));
        }
        out
    }
}

/// Default probes `t_j = 1 - 2^-j`, `j = 1..=20`.
pub fn dyadic_probes(levels: u32) -> Vec<f64> {
    (1..=levels).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonConstant {
    pub sup: f64,
    pub verdict: CarlesonVerdict,
}

/// `max_t μ([t,1)) / (1-t)^s` over the probes, with a trend verdict.
pub fn carleson_constant(m: &Measure, s: f64, probes: &[f64]) -> Result<CarlesonConstant> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid("s", format!("{s} must be positive")));
    }
    if probes.is_empty() {
        return Err(invalid("probes", "probe grid is empty"));
    }
    let mut sorted = probes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut evidence = Vec::with_capacity(sorted.len());
    for &t in &sorted {
        let tail = m.tail_mass(t)?;
        evidence.push((t, tail / (1.0 - t).powf(s)));
    }
    let samples: Vec<(f64, f64)> = evidence.iter().map(|&(t, r)| (-(1.0 - t).log2(), r)).collect();
    let (trend, stats) = trend::classify(&samples, &TrendPolicy::default());
    let sup = evidence.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(CarlesonConstant { sup, verdict: CarlesonVerdict { s, method: CarlesonMethod::Tail, class: trend.into(), evidence, stats } })
}

/// Classifies `q_n = (n+1)^s μ_n` on a dyadic index ladder.
pub fn moment_classify(seq: &MomentSequence<f64>, s: f64) -> Result<CarlesonVerdict> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid("s", format!("{s} must be positive")));
    }
    if seq.degree() < 64 {
        return Err(invalid("N", format!("moment classification needs N >= 64, got {}", seq.degree())));
    }
    let evidence: Vec<(f64, f64)> =
        trend::dyadic_ladder(seq.degree()).into_iter().map(|n| (n as f64, (n as f64 + 1.0).powf(s) * seq.values()[n])).collect();
    let samples: Vec<(f64, f64)> = evidence.iter().map(|&(n, q)| (n.log2(), q)).collect();
    let (trend, stats) = trend::classify(&samples, &TrendPolicy::default());
    Ok(CarlesonVerdict { s, method: CarlesonMethod::Moment, class: trend.into(), evidence, stats })
}
