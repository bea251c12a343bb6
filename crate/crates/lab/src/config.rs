//! Experiment configuration in `key = value` form.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cesaro_core::grammar::{parse_measure, parse_series, SeriesSpec};
use cesaro_core::{Complex64, Measure, RadialGrid};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    Moments,
    Hausdorff,
    Carleson,
    Continuity,
    Compactness,
    Hinfty,
    Spectrum,
    Eigen,
    Resolvent,
    ProductBounds,
    ReproducePaper,
}

impl Task {
    pub const ALL: [Task; 11] = [
        Task::Moments,
        Task::Hausdorff,
        Task::Carleson,
        Task::Continuity,
        Task::Compactness,
        Task::Hinfty,
        Task::Spectrum,
        Task::Eigen,
        Task::Resolvent,
        Task::ProductBounds,
        Task::ReproducePaper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Moments => "moments",
            Task::Hausdorff => "hausdorff",
            Task::Carleson => "carleson",
            Task::Continuity => "continuity",
            Task::Compactness => "compactness",
            Task::Hinfty => "hinfty",
            Task::Spectrum => "spectrum",
            Task::Eigen => "eigen",
            Task::Resolvent => "resolvent",
            Task::ProductBounds => "product-bounds",
            Task::ReproducePaper => "reproduce-paper",
        }
    }

    /// Tasks whose verdicts come from the tail-trend classifier.
    pub fn is_classifier(self) -> bool {
        matches!(self, Task::Carleson | Task::Continuity | Task::Compactness | Task::Spectrum)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.as_str() == s.trim()).ok_or_else(|| {
            let names: Vec<&str> = Task::ALL.iter().map(|t| t.as_str()).collect();
            format!("unknown task {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Radial grid literal: `default`, `geometric:(levels)` or `log_gap:(points,min_gap)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Default,
    Geometric(u32),
    LogGap { points: usize, min_gap: f64 },
}

impl GridSpec {
    pub fn build(&self) -> cesaro_core::Result<RadialGrid> {
        match *self {
            GridSpec::Default => Ok(RadialGrid::default()),
            GridSpec::Geometric(levels) => Ok(RadialGrid::geometric(levels)),
            GridSpec::LogGap { points, min_gap } => RadialGrid::log_gap(points, min_gap),
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "default" {
            return Ok(GridSpec::Default);
        }
        let (kind, params) = s.split_once(':').ok_or("expected default, geometric:(levels) or log_gap:(points,min_gap)")?;
        let inner = params.trim().strip_prefix('(').and_then(|p| p.strip_suffix(')')).ok_or("parameters must be parenthesized")?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        match (kind.trim(), parts.as_slice()) {
            ("geometric", [levels]) => levels.parse().map(GridSpec::Geometric).map_err(|e| format!("levels: {e}")),
            ("log_gap", [points, gap]) => Ok(GridSpec::LogGap {
                points: points.parse().map_err(|e| format!("points: {e}"))?,
                min_gap: gap.parse().map_err(|e| format!("min_gap: {e}"))?,
            }),
            _ => Err(format!("unknown grid {s:?}")),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Default => f.write_str("default"),
            GridSpec::Geometric(l) => write!(f, "geometric:({l})"),
            GridSpec::LogGap { points, min_gap } => write!(f, "log_gap:({points},{min_gap})"),
        }
    }
}

/// Accepts `0.4`, `0.4+0.3i` or `(0.4,0.3)`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or("expected (re,im)")?;
        let re: f64 = re.trim().parse().map_err(|e| format!("real part: {e}"))?;
        let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part: {e}"))?;
        return Ok(Complex64::new(re, im));
    }
    let z = Complex64::from_str(s).map_err(|e| format!("{e:?}"))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("not finite".into())
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or("expected [v0, v1, ...]")?;
    inner
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("empty list".into()) } else { Ok(v) })
}

/// Canonical key names; unicode aliases map onto these.
const KEYS: &[&str] = &[
    "task", "measure", "sequence", "series", "gamma", "delta", "s", "lambda", "n0", "N", "J", "C", "D", "a", "start", "k_fit", "k_max", "grid", "case", "p", "alpha",
    "beta", "output",
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let key = key.trim();
    let alias = match key {
        "γ" => "gamma",
        "δ" => "delta",
        "λ" => "lambda",
        "α" => "alpha",
        "β" => "beta",
        other => other,
    };
    KEYS.iter().copied().find(|k| *k == alias)
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    pub task: Option<Task>,
    pub measure: Option<String>,
    pub sequence: Option<Vec<f64>>,
    pub series: Option<SeriesSpec>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub s: Option<f64>,
    pub lambda: Option<Complex64>,
    pub n0: Option<usize>,
    pub n: Option<usize>,
    pub j: Option<usize>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub a: Option<f64>,
    pub start: Option<usize>,
    pub k_fit: Option<usize>,
    pub k_max: Option<usize>,
    pub grid: Option<GridSpec>,
    pub case: Option<String>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub output: Option<PathBuf>,
    echo: BTreeMap<String, String>,
}

fn usage(field: &str, reason: impl Into<String>) -> LabError {
    LabError::Usage { field: field.to_string(), reason: reason.into() }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T, LabError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| usage(key, format!("{value:?}: {e}")))
}

fn finite(key: &str, value: &str) -> Result<f64, LabError> {
    let x: f64 = num(key, value)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(usage(key, format!("{value:?} is not finite")))
    }
}

impl ExperimentConfig {
    /// Parses the key-value text form. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| usage(&format!("line {}", i + 1), format!("expected key = value, got {line:?}")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Self::from_pairs(pairs)
    }

    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self, LabError> {
        let mut cfg = ExperimentConfig::default();
        let mut seen = BTreeMap::new();
        for (k, v) in pairs {
            let (k, v) = (k.as_ref(), v.as_ref().trim());
            let key = canonical_key(k).ok_or_else(|| usage(k, format!("unknown key; expected one of {}", KEYS.join(", "))))?;
            if seen.insert(key, ()).is_some() {
                return Err(usage(key, "given more than once"));
            }
            cfg.set(key, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &'static str, v: &str) -> Result<(), LabError> {
        match key {
            "task" => self.task = Some(v.parse().map_err(|e: String| usage(key, e))?),
            "measure" => {
                parse_measure(v).map_err(|e| usage(key, e.to_string()))?;
                self.measure = Some(v.to_string());
            }
            "sequence" => self.sequence = Some(parse_list(v).map_err(|e| usage(key, e))?),
            "series" => self.series = Some(parse_series(v).map_err(|e| usage(key, e.to_string()))?),
            "gamma" => self.gamma = Some(finite(key, v)?),
            "delta" => self.delta = Some(finite(key, v)?),
            "s" => self.s = Some(finite(key, v)?),
            "lambda" => self.lambda = Some(parse_complex(v).map_err(|e| usage(key, e))?),
            "n0" => self.n0 = Some(num(key, v)?),
            "N" => self.n = Some(num(key, v)?),
            "J" => self.j = Some(num(key, v)?),
            "C" => self.c = Some(finite(key, v)?),
            "D" => self.d = Some(finite(key, v)?),
            "a" => self.a = Some(finite(key, v)?),
            "start" => self.start = Some(num(key, v)?),
            "k_fit" => self.k_fit = Some(num(key, v)?),
            "k_max" => self.k_max = Some(num(key, v)?),
            "grid" => self.grid = Some(v.parse().map_err(|e: String| usage(key, e))?),
            "case" => self.case = Some(v.to_string()),
            "p" => self.p = Some(finite(key, v)?),
            "alpha" => self.alpha = Some(finite(key, v)?),
            "beta" => self.beta = Some(finite(key, v)?),
            "output" => self.output = Some(PathBuf::from(v)),
            _ => unreachable!("canonical keys are exhaustive"),
        }
        if key != "output" {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), LabError> {
        let task = self.task.ok_or_else(|| usage("task", "missing"))?;
        let need = |present: bool, field: &str| if present { Ok(()) } else { Err(usage(field, format!("required by task {task}"))) };
        let source = || need(self.measure.is_some() || (self.sequence.is_some() && matches!(task, Task::Moments | Task::Hausdorff)), "measure");
        if self.measure.is_some() && self.sequence.is_some() {
            return Err(usage("sequence", "give either measure or sequence, not both"));
        }
        match task {
            Task::Moments => {
                source()?;
                need(self.n.is_some(), "N")?;
            }
            Task::Hausdorff => {
                source()?;
                need(self.n.is_some(), "N")?;
            }
            Task::Carleson => {
                source()?;
                need(self.s.is_some(), "s")?;
            }
            Task::Continuity | Task::Compactness => {
                source()?;
                need(self.gamma.is_some(), "gamma")?;
                need(self.delta.is_some(), "delta")?;
            }
            Task::Hinfty => source()?,
            Task::Spectrum => {
                source()?;
                need(self.s.is_some() || self.c.is_some() || self.lambda.is_some(), "C")?;
                if self.c.is_some() {
                    need(self.gamma.is_some(), "gamma")?;
                }
            }
            Task::Eigen => {
                source()?;
                need(self.n0.is_some(), "n0")?;
                need(self.n.is_some(), "N")?;
            }
            Task::Resolvent => {
                source()?;
                need(self.lambda.is_some(), "lambda")?;
                need(self.series.is_some(), "series")?;
                need(self.n.is_some(), "N")?;
            }
            Task::ProductBounds => {
                source()?;
                need(self.lambda.is_some(), "lambda")?;
                need(self.c.is_some(), "C")?;
                need(self.k_fit.is_some(), "k_fit")?;
                need(self.k_max.is_some(), "k_max")?;
                if self.a.is_some() != self.d.is_some() {
                    return Err(usage(if self.a.is_some() { "D" } else { "a" }, "the upper branch needs both a and D"));
                }
            }
            Task::ReproducePaper => need(self.case.is_some(), "case")?,
        }
        if task.is_classifier() {
            if let Some(n) = self.n {
                if n < 64 {
                    return Err(usage("N", format!("task {task} classifies tail trends and needs N >= 64, got {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn task(&self) -> Task {
        self.task.expect("validated config has a task")
    }

    pub fn measure(&self) -> cesaro_core::Result<Option<Measure>> {
        self.measure.as_deref().map(parse_measure).transpose()
    }

    /// Canonical `key -> value` pairs as given, without output paths.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.echo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_aliases() {
        let cfg = ExperimentConfig::parse("# lebesgue\nmeasure = density:lebesgue\ntask = moments # inline\nN = 4\n").unwrap();
        assert_eq!(cfg.task(), Task::Moments);
        assert_eq!(cfg.n, Some(4));
        let cfg = ExperimentConfig::from_pairs([("task", "continuity"), ("measure", "moments:cesaro"), ("γ", "1"), ("δ", "0")]).unwrap();
        assert_eq!(cfg.gamma, Some(1.0));
        assert_eq!(cfg.echo().get("gamma").map(String::as_str), Some("1"));
    }

    #[test]
    fn diagnoses_bad_fields() {
        let field = |text: &str| match ExperimentConfig::parse(text) {
            Err(LabError::Usage { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field("task = moments\nN = 4"), "measure");
        assert_eq!(field("task = moments\nmeasure = density:nope\nN = 4"), "measure");
        assert_eq!(field("task = carleson\nmeasure = moments:cesaro\ns = 1\nN = 32"), "N");
        assert_eq!(field("task = moments\nbogus = 1"), "bogus");
        assert_eq!(field("task = moments\nN = 4\nN = 5"), "N");
        assert_eq!(field("task = sideways"), "task");
        assert_eq!(field("measure = moments:cesaro"), "task");
        assert_eq!(field("task = moments\nno equals sign"), "line 2");
    }

    #[test]
    fn complex_and_grid_literals() {
        assert_eq!(parse_complex("0.4+0.3i").unwrap(), Complex64::new(0.4, 0.3));
        assert_eq!(parse_complex("(0.4,-0.3)").unwrap(), Complex64::new(0.4, -0.3));
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert!(parse_complex("x").is_err());
        for g in ["default", "geometric:(80)", "log_gap:(1000,1e-8)"] {
            let spec: GridSpec = g.parse().unwrap();
            assert_eq!(spec.to_string().parse::<GridSpec>().unwrap(), spec);
        }
    }
}
