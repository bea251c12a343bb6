//! Text forms for measures and test series.
//!
//! ```text
//! atomic:[(t1,m1),(t2,m2),...]
//! density:lebesgue | density:poly:(a,b) | density:expgap:(alpha,beta)
//! moments:geometric:(a) | moments:power:(p) | moments:shifted | moments:cesaro | moments:custom:[m0,m1,...]
//! series:ones | series:binomial:(gamma) | series:monomial:(n) | series:custom:[c0,c1,...]
//! ```
//!
//! Custom series entries may be real numbers or `(re,im)` pairs.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::spaces::{binomial_series, TruncatedSeries};

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse { input: input.to_string(), reason: reason.into() }
}

fn strip_outer<'a>(input: &str, s: &'a str, open: char, close: char) -> Result<&'a str> {
    s.strip_prefix(open)
        .and_then(|s| s.strip_suffix(close))
        .ok_or_else(|| parse_err(input, format!("expected {open}...{close}, found {s:?}")))
}

fn number(input: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| parse_err(input, format!("{:?} is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(input, format!("{v} is not finite")));
    }
    Ok(v)
}

/// `(x1,x2,...)` with exactly `arity` entries.
fn tuple(input: &str, s: &str, arity: usize) -> Result<Vec<f64>> {
    let inner = strip_outer(input, s.trim(), '(', ')')?;
    let vals = inner.split(',').map(|p| number(input, p)).collect::<Result<Vec<_>>>()?;
    if vals.len() != arity {
        return Err(parse_err(input, format!("expected {arity} parameter(s), found {}", vals.len())));
    }
    Ok(vals)
}

/// Splits the body of `[...]` at top-level commas.
fn list_items<'a>(input: &str, s: &'a str) -> Result<Vec<&'a str>> {
    let inner = strip_outer(input, s.trim(), '[', ']')?.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(input, "unbalanced parentheses"));
                }
            }
            ',' if depth == 0 => {
                out.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(input, "unbalanced parentheses"));
    }
    out.push(inner[start..].trim());
    Ok(out)
}

fn no_args(input: &str, rest: Option<&str>) -> Result<()> {
    match rest {
        None => Ok(()),
        Some(r) => Err(parse_err(input, format!("unexpected parameters {r:?}"))),
    }
}

fn args<'a>(input: &str, rest: Option<&'a str>) -> Result<&'a str> {
    rest.ok_or_else(|| parse_err(input, "missing parameters"))
}

/// Parses a measure literal.
pub fn parse_measure(input: &str) -> Result<Measure> {
    let s = input.trim();
    let (family, rest) = s.split_once(':').ok_or_else(|| parse_err(input, "expected <family>:<form>"))?;
    match family.trim() {
        "atomic" => {
            let atoms = list_items(input, rest)?
                .into_iter()
                .map(|item| tuple(input, item, 2).map(|v| (v[0], v[1])))
                .collect::<Result<Vec<_>>>()?;
            Measure::atomic(atoms)
        }
        "density" => {
            let (kind, params) = match rest.split_once(':') {
                Some((k, p)) => (k.trim(), Some(p)),
                None => (rest.trim(), None),
            };
            match kind {
                "lebesgue" => no_args(input, params).map(|_| Measure::lebesgue()),
                "poly" => {
                    let v = tuple(input, args(input, params)?, 2)?;
                    Measure::poly(v[0], v[1])
                }
                "expgap" => {
                    let v = tuple(input, args(input, params)?, 2)?;
                    Measure::expgap(v[0], v[1])
                }
                other => Err(parse_err(input, format!("unknown density {other:?}"))),
            }
        }
        "moments" => {
            let (kind, params) = match rest.split_once(':') {
                Some((k, p)) => (k.trim(), Some(p)),
                None => (rest.trim(), None),
            };
            match kind {
                "geometric" => Measure::geometric(tuple(input, args(input, params)?, 1)?[0]),
                "power" => Measure::power(tuple(input, args(input, params)?, 1)?[0]),
                "shifted" => no_args(input, params).map(|_| Measure::shifted()),
                "cesaro" => no_args(input, params).map(|_| Measure::cesaro()),
                "custom" => {
                    let vals = list_items(input, args(input, params)?)?.into_iter().map(|p| number(input, p)).collect::<Result<Vec<_>>>()?;
                    Measure::custom_moments(vals)
                }
                other => Err(parse_err(input, format!("unknown moment rule {other:?}"))),
            }
        }
        other => Err(parse_err(input, format!("unknown measure family {other:?}"))),
    }
}

/// A test series whose truncation degree is chosen later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesSpec {
    Ones,
    Binomial { gamma: f64 },
    Monomial { n: usize },
    Custom { coeffs: Vec<Complex64> },
}

impl SeriesSpec {
    /// Coefficients up to `degree`; custom lists are padded with zeros or cut.
    pub fn build(&self, degree: usize) -> Result<TruncatedSeries<Complex64>> {
        match self {
            SeriesSpec::Ones => Ok(TruncatedSeries::ones(degree)),
            SeriesSpec::Binomial { gamma } => Ok(binomial_series(*gamma, degree)?.to_complex()),
            SeriesSpec::Monomial { n } => Ok(TruncatedSeries::monomial(*n).resized(degree)),
            SeriesSpec::Custom { coeffs } => Ok(TruncatedSeries::new(coeffs.clone())?.resized(degree)),
        }
    }

    /// Real coefficients, when the series has no imaginary parts.
    pub fn build_real(&self, degree: usize) -> Result<TruncatedSeries<f64>> {
        let c = self.build(degree)?;
        if c.coeffs().iter().any(|z| z.im != 0.0) {
            return Err(Error::Precondition("series has complex coefficients".into()));
        }
        TruncatedSeries::new(c.coeffs().iter().map(|z| z.re).collect())
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSpec::Ones => write!(f, "series:ones"),
            SeriesSpec::Binomial { gamma } => write!(f, "series:binomial:({gamma})"),
            SeriesSpec::Monomial { n } => write!(f, "series:monomial:({n})"),
            SeriesSpec::Custom { coeffs } => {
                let items: Vec<String> =
                    coeffs.iter().map(|z| if z.im == 0.0 { format!("{}", z.re) } else { format!("({},{})", z.re, z.im) }).collect();
                write!(f, "series:custom:[{}]", items.join(","))
            }
        }
    }
}

/// Parses a series literal.
pub fn parse_series(input: &str) -> Result<SeriesSpec> {
    let s = input.trim();
    let rest = s.strip_prefix("series:").ok_or_else(|| parse_err(input, "expected series:<form>"))?;
    let (kind, params) = match rest.split_once(':') {
        Some((k, p)) => (k.trim(), Some(p)),
        None => (rest.trim(), None),
    };
    match kind {
        "ones" => no_args(input, params).map(|_| SeriesSpec::Ones),
        "binomial" => {
            let gamma = tuple(input, args(input, params)?, 1)?[0];
            if gamma <= 0.0 {
                return Err(parse_err(input, "gamma must be positive"));
            }
            Ok(SeriesSpec::Binomial { gamma })
        }
        "monomial" => {
            let n = tuple(input, args(input, params)?, 1)?[0];
            if n < 0.0 || n.fract() != 0.0 {
                return Err(parse_err(input, format!("monomial degree {n} must be a nonnegative integer")));
            }
            Ok(SeriesSpec::Monomial { n: n as usize })
        }
        "custom" => {
            let coeffs = list_items(input, args(input, params)?)?
                .into_iter()
                .map(|item| {
                    if item.starts_with('(') {
                        tuple(input, item, 2).map(|v| Complex64::new(v[0], v[1]))
                    } else {
                        number(input, item).map(|x| Complex64::new(x, 0.0))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if coeffs.is_empty() {
                return Err(parse_err(input, "empty coefficient list"));
            }
            Ok(SeriesSpec::Custom { coeffs })
        }
        other => Err(parse_err(input, format!("unknown series form {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures_parse() {
        assert!(matches!(parse_measure("density:lebesgue").unwrap(), Measure::Density { .. }));
        let m = parse_measure("atomic:[(0.25, 0.5), (0.75,0.5)]").unwrap();
        assert!((m.total_mass().unwrap() - 1.0).abs() < 1e-15);
        assert!((parse_measure("moments:geometric:(0.5)").unwrap().moment(3).unwrap() - 0.125).abs() < 1e-15);
        assert!(parse_measure("moments:custom:[1,0.5,0.25]").is_ok());
        assert!(parse_measure("density:poly:(2,1)").is_ok());
        assert!(parse_measure("density:expgap:(1,1)").is_ok());
    }

    #[test]
    fn measure_errors_name_the_problem() {
        for bad in ["lebesgue", "density:poly:(2)", "atomic:[(1.5,1)]", "moments:power:(x)", "density:lebesgue:(1)", "atomic:[(0.5,1]"] {
            assert!(parse_measure(bad).is_err(), "{bad}");
        }
        assert!(matches!(parse_measure("moments:custom:[1,2]"), Err(Error::Precondition(_))));
    }

    #[test]
    fn series_round_trip() {
        for s in ["series:ones", "series:binomial:(2)", "series:monomial:(7)", "series:custom:[1,(0,2),-3]"] {
            let spec = parse_series(s).unwrap();
            assert_eq!(parse_series(&spec.to_string()).unwrap(), spec);
        }
        let b = parse_series("series:binomial:(2)").unwrap().build(4).unwrap();
        assert_eq!(b.coeffs()[3], Complex64::new(4.0, 0.0));
        assert_eq!(parse_series("series:monomial:(2)").unwrap().build(3).unwrap().coeffs()[2], Complex64::new(1.0, 0.0));
    }
}
