//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # NEAR plane at g = 3
//! regime = NEAR
//! axis1.name = l_over_t
//! axis1.min = 0.05
//! axis1.max = 0.7
//! axis1.steps = 60
//! axis2.name = d_over_t
//! axis2.min = 0.1
//! axis2.max = 0.95
//! axis2.steps = 60
//! fixed.g = 3
//! override_bounds = true
//! ```
//!
//! Optional keys: `log_base` (`e` or `2`, default `e`), `outputs` (a comma
//! separated subset of the measure columns, default all), `override_bounds`
//! (default `false`).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::LogBase;
use crate::regimes::Regime;

/// Measure columns a spec may select in `outputs`.
pub const MEASURE_NAMES: [&str; 15] = [
    "gamma_a",
    "gamma_b",
    "gamma_c",
    "phi_ab",
    "phi_ba",
    "s_ab",
    "s_b",
    "s_cond",
    "lambda_min",
    "negativity",
    "concurrence",
    "eof",
    "discord",
    "psd_ok",
    "class_label",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    G,
    LOverT,
    DOverT,
}

impl Variable {
    pub const ALL: [Variable; 3] = [Variable::G, Variable::LOverT, Variable::DOverT];

    pub fn name(self) -> &'static str {
        match self {
            Variable::G => "g",
            Variable::LOverT => "l_over_t",
            Variable::DOverT => "d_over_t",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown variable `{s}` (expected g, l_over_t or d_over_t)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: Variable,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// `steps` evenly spaced values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub regime: Regime,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: BTreeMap<Variable, f64>,
    pub log_base: LogBase,
    pub outputs: Vec<String>,
    pub override_bounds: bool,
}

impl SweepSpec {
    pub fn axes(&self) -> Vec<Axis> {
        std::iter::once(self.axis1).chain(self.axis2).collect()
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Canonical config text; `parse_config(&spec.to_config_string())` returns `spec`.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("regime", self.regime.to_string());
        for (prefix, axis) in [("axis1", Some(self.axis1)), ("axis2", self.axis2)] {
            if let Some(a) = axis {
                line(&format!("{prefix}.name"), a.name.to_string());
                line(&format!("{prefix}.min"), a.min.to_string());
                line(&format!("{prefix}.max"), a.max.to_string());
                line(&format!("{prefix}.steps"), a.steps.to_string());
            }
        }
        for (var, value) in &self.fixed {
            line(&format!("fixed.{var}"), value.to_string());
        }
        line("log_base", self.log_base.to_string());
        line("outputs", self.outputs.join(","));
        line("override_bounds", self.override_bounds.to_string());
        out
    }

    fn validate(&self) -> Result<()> {
        let axes = self.axes();
        for (i, a) in axes.iter().enumerate() {
            let key = |f: &str| format!("axis{}.{f}", i + 1);
            if a.steps < 2 {
                return Err(value_err(key("steps"), format!("must be ≥ 2, got {}", a.steps)));
            }
            if !a.min.is_finite() || a.min < 0.0 {
                return Err(value_err(key("min"), format!("must be finite and ≥ 0, got {}", a.min)));
            }
            if !a.max.is_finite() || a.max <= a.min {
                return Err(value_err(
                    key("max"),
                    format!("must be finite and > min, got {}", a.max),
                ));
            }
        }
        if let Some(a2) = self.axis2 {
            if a2.name == self.axis1.name {
                return Err(value_err(
                    "axis2.name".into(),
                    format!("duplicates axis1.name `{}`", a2.name),
                ));
            }
        }
        for var in Variable::ALL {
            let on_axis = axes.iter().any(|a| a.name == var);
            match (on_axis, self.fixed.get(&var)) {
                (true, Some(_)) => {
                    return Err(value_err(format!("fixed.{var}"), "is also a sweep axis".into()));
                }
                (false, None) => {
                    return Err(value_err(
                        format!("fixed.{var}"),
                        "missing; every input must be swept or fixed".into(),
                    ));
                }
                (false, Some(v)) if !v.is_finite() || *v < 0.0 => {
                    return Err(value_err(
                        format!("fixed.{var}"),
                        format!("must be finite and ≥ 0, got {v}"),
                    ));
                }
                _ => {}
            }
        }
        let mut seen = HashSet::new();
        for name in &self.outputs {
            if !MEASURE_NAMES.contains(&name.as_str()) {
                return Err(value_err("outputs".into(), format!("unknown measure `{name}`")));
            }
            if !seen.insert(name) {
                return Err(value_err("outputs".into(), format!("`{name}` listed twice")));
            }
        }
        Ok(())
    }
}

fn value_err(key: String, message: String) -> Error {
    Error::ConfigValue { key, message }
}

fn parse_num<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| value_err(key.to_string(), format!("cannot parse `{raw}`")))
}

#[derive(Default)]
struct PartialAxis {
    name: Option<Variable>,
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
}

impl PartialAxis {
    fn is_empty(&self) -> bool {
        self.name.is_none() && self.min.is_none() && self.max.is_none() && self.steps.is_none()
    }

    fn finish(self, prefix: &str) -> Result<Axis> {
        let missing = |f: &str| value_err(format!("{prefix}.{f}"), "missing".into());
        Ok(Axis {
            name: self.name.ok_or_else(|| missing("name"))?,
            min: self.min.ok_or_else(|| missing("min"))?,
            max: self.max.ok_or_else(|| missing("max"))?,
            steps: self.steps.ok_or_else(|| missing("steps"))?,
        })
    }
}

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut regime = None;
    let mut axes = [PartialAxis::default(), PartialAxis::default()];
    let mut fixed = BTreeMap::new();
    let mut log_base = LogBase::E;
    let mut outputs: Option<Vec<String>> = None;
    let mut override_bounds = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::ConfigParse { line: line_no, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_err("empty key".into()));
        }
        if !seen.insert(key.to_string()) {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }

        match key.split_once('.') {
            None => match key {
                "regime" => {
                    regime = Some(
                        value
                            .parse::<Regime>()
                            .map_err(|e| value_err(key.into(), e.to_string()))?,
                    )
                }
                "log_base" => log_base = value.parse().map_err(|e: Error| value_err(key.into(), e.to_string()))?,
                "outputs" => {
                    outputs = Some(
                        value
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(String::from)
                            .collect(),
                    )
                }
                "override_bounds" => override_bounds = parse_num(key, value)?,
                _ => return Err(parse_err(format!("unknown key `{key}`"))),
            },
            Some((group @ ("axis1" | "axis2"), field)) => {
                let axis = &mut axes[if group == "axis1" { 0 } else { 1 }];
                match field {
                    "name" => axis.name = Some(value.parse().map_err(|e: Error| value_err(key.into(), e.to_string()))?),
                    "min" => axis.min = Some(parse_num(key, value)?),
                    "max" => axis.max = Some(parse_num(key, value)?),
                    "steps" => axis.steps = Some(parse_num(key, value)?),
                    _ => return Err(parse_err(format!("unknown key `{key}`"))),
                }
            }
            Some(("fixed", name)) => {
                let var: Variable = name.parse().map_err(|_| parse_err(format!("unknown key `{key}`")))?;
                fixed.insert(var, parse_num(key, value)?);
            }
            Some(_) => return Err(parse_err(format!("unknown key `{key}`"))),
        }
    }

    let regime = regime.ok_or_else(|| value_err("regime".into(), "missing".into()))?;
    let [a1, a2] = axes;
    let axis1 = a1.finish("axis1")?;
    let axis2 = if a2.is_empty() { None } else { Some(a2.finish("axis2")?) };
    let spec = SweepSpec {
        regime,
        axis1,
        axis2,
        fixed,
        log_base,
        outputs: outputs.unwrap_or_else(|| MEASURE_NAMES.iter().map(|s| s.to_string()).collect()),
        override_bounds,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_D: &str = "regime = NEAR\naxis1.name = g\naxis1.min = 0.1\naxis1.max = 10\naxis1.steps = 100\nfixed.l_over_t = 0.3\nfixed.d_over_t = 0.8";

    #[test]
    fn parses_one_dimensional_spec() {
        let spec = parse_config(ONE_D).unwrap();
        assert_eq!(spec.regime, Regime::Near);
        assert_eq!(spec.axis1.name, Variable::G);
        assert_eq!(spec.axis1.steps, 100);
        assert!(spec.axis2.is_none());
        assert_eq!(spec.fixed[&Variable::DOverT], 0.8);
        assert_eq!(spec.len(), 100);
        assert_eq!(spec.outputs.len(), MEASURE_NAMES.len());
    }

    #[test]
    fn rejects_single_step() {
        let text = ONE_D.replace("axis1.steps = 100", "axis1.steps = 1");
        match parse_config(&text) {
            Err(Error::ConfigValue { key, .. }) => assert_eq!(key, "axis1.steps"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_key_names_the_key_and_line() {
        let text = format!("{ONE_D}\nfixed.d_over_t = 0.7");
        match parse_config(&text) {
            Err(Error::ConfigParse { line, message }) => {
                assert_eq!(line, 8);
                assert!(message.contains("fixed.d_over_t"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_garbage_fail() {
        assert!(matches!(
            parse_config(&format!("{ONE_D}\ncolour = red")),
            Err(Error::ConfigParse { line: 8, .. })
        ));
        assert!(matches!(
            parse_config(&format!("{ONE_D}\nfixed.mass = 1")),
            Err(Error::ConfigParse { .. })
        ));
        assert!(matches!(
            parse_config("regime NEAR"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config(&ONE_D.replace("0.1", "abc")),
            Err(Error::ConfigValue { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{}  # trailing\n", ONE_D.replace('\n', "\n\n"));
        assert_eq!(parse_config(&text).unwrap(), parse_config(ONE_D).unwrap());
    }

    #[test]
    fn inputs_must_be_covered_exactly_once() {
        let missing = ONE_D.replace("fixed.d_over_t = 0.8", "");
        assert!(matches!(parse_config(&missing), Err(Error::ConfigValue { .. })));
        let both = format!("{ONE_D}\nfixed.g = 1");
        assert!(matches!(parse_config(&both), Err(Error::ConfigValue { .. })));
        let same_axis = format!("{ONE_D}\naxis2.name = g\naxis2.min = 1\naxis2.max = 2\naxis2.steps = 3");
        assert!(matches!(parse_config(&same_axis), Err(Error::ConfigValue { .. })));
    }

    #[test]
    fn echo_round_trips() {
        let mut spec = parse_config(ONE_D).unwrap();
        spec.outputs = vec!["s_cond".into(), "negativity".into()];
        spec.log_base = LogBase::Two;
        assert_eq!(parse_config(&spec.to_config_string()).unwrap(), spec);
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = Axis {
            name: Variable::G,
            min: 0.1,
            max: 0.7,
            steps: 7,
        };
        let v = a.values();
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
        assert!((v[3] - 0.4).abs() < 1e-15);
    }
}
