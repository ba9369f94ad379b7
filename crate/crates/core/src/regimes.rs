//! Physical inputs `(g, L/T, D/T)` to coherence functionals.
//!
//! Two causal configurations are supported. `Far` is `D ≫ T ≫ L`: the
//! particles cannot signal each other during the experiment, so only the
//! later one (B) picks up a phase. `Near` is `T ≫ D ≫ L`: both exchange
//! signals and the setup is symmetric. All order-of-magnitude coefficients
//! are set to one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::CoherenceParams;

/// A hierarchy ratio below this many-fold is reported as marginal.
pub const HIERARCHY_RATIO: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    Far,
    Near,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Far => "FAR",
            Regime::Near => "NEAR",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "far" => Ok(Regime::Far),
            "near" => Ok(Regime::Near),
            other => Err(Error::Domain(format!("regime must be FAR or NEAR, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeInput {
    /// Dimensionless coupling, `g² = G m²`.
    pub g: f64,
    pub l_over_t: f64,
    pub d_over_t: f64,
    pub regime: Regime,
    /// Downgrade the ordering constraints (`L/T < 1`, `D/T > 1` for FAR,
    /// `L/T < D/T < 1` for NEAR) to warnings. Finiteness and positivity
    /// are always enforced.
    #[serde(default)]
    pub override_bounds: bool,
}

impl RegimeInput {
    pub fn new(regime: Regime, g: f64, l_over_t: f64, d_over_t: f64) -> Self {
        RegimeInput {
            g,
            l_over_t,
            d_over_t,
            regime,
            override_bounds: false,
        }
    }

    pub fn far(g: f64, l_over_t: f64, d_over_t: f64) -> Self {
        Self::new(Regime::Far, g, l_over_t, d_over_t)
    }

    pub fn near(g: f64, l_over_t: f64, d_over_t: f64) -> Self {
        Self::new(Regime::Near, g, l_over_t, d_over_t)
    }

    pub fn with_override(mut self, override_bounds: bool) -> Self {
        self.override_bounds = override_bounds;
        self
    }

    fn check(&self) -> Result<Vec<RegimeWarning>> {
        for (name, v) in [("g", self.g), ("l_over_t", self.l_over_t), ("d_over_t", self.d_over_t)] {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        if self.g < 0.0 {
            return Err(Error::param("g", format!("must be ≥ 0, got {}", self.g)));
        }
        if self.l_over_t <= 0.0 {
            return Err(Error::param("l_over_t", format!("must be > 0, got {}", self.l_over_t)));
        }
        if self.d_over_t <= 0.0 {
            return Err(Error::param("d_over_t", format!("must be > 0, got {}", self.d_over_t)));
        }
        let mut broken = Vec::new();
        if self.l_over_t >= 1.0 {
            broken.push(format!("L/T = {} must be < 1", self.l_over_t));
        }
        match self.regime {
            Regime::Far if self.d_over_t <= 1.0 => {
                broken.push(format!("FAR needs D/T > 1, got {}", self.d_over_t));
            }
            Regime::Near if !(self.l_over_t < self.d_over_t && self.d_over_t < 1.0) => {
                broken.push(format!(
                    "NEAR needs L/T < D/T < 1, got L/T = {}, D/T = {}",
                    self.l_over_t, self.d_over_t
                ));
            }
            _ => {}
        }
        if !broken.is_empty() && !self.override_bounds {
            return Err(Error::Regime(broken.join("; ")));
        }
        Ok(broken.into_iter().map(RegimeWarning::BoundsOverridden).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum RegimeWarning {
    /// A scale separation the regime relies on is less than [`HIERARCHY_RATIO`]-fold.
    MarginalHierarchy(String),
    /// The weak-field condition `g² λ_C / L ≪ 1` involves the Compton
    /// wavelength, which is not modeled; always reported.
    WeakFieldUnchecked,
    /// A hard ordering bound was violated under `override_bounds`.
    BoundsOverridden(String),
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::MarginalHierarchy(s) => write!(f, "marginal hierarchy: {s}"),
            RegimeWarning::WeakFieldUnchecked => {
                f.write_str("weak-field condition g²·λ_C/L ≪ 1 not assessed (λ_C not modeled)")
            }
            RegimeWarning::BoundsOverridden(s) => write!(f, "bounds overridden: {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeOutput {
    pub params: CoherenceParams,
    pub validity_warnings: Vec<RegimeWarning>,
}

/// Warnings only; never fails.
pub fn validate_regime(input: &RegimeInput) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    let (l, d) = (input.l_over_t, input.d_over_t);
    let mut weak = |what: String| out.push(RegimeWarning::MarginalHierarchy(what));
    match input.regime {
        Regime::Far => {
            if d < HIERARCHY_RATIO {
                weak(format!("D/T = {d} (want D ≫ T)"));
            }
        }
        Regime::Near => {
            if d * HIERARCHY_RATIO > 1.0 {
                weak(format!("D/T = {d} (want T ≫ D)"));
            }
            if l * HIERARCHY_RATIO > d {
                weak(format!("L/D = {} (want D ≫ L)", l / d));
            }
        }
    }
    if l * HIERARCHY_RATIO > 1.0 {
        weak(format!("L/T = {l} (want T ≫ L)"));
    }
    out.push(RegimeWarning::WeakFieldUnchecked);
    out
}

/// `g²(L/T)⁴`, the number of gravitons radiated by the quadrupole.
pub fn graviton_count(g: f64, l_over_t: f64) -> f64 {
    g * g * l_over_t.powi(4)
}

fn order_phase(input: &RegimeInput) -> f64 {
    input.g * input.g * input.l_over_t.powi(2) / input.d_over_t.powi(3)
}

fn finish(input: &RegimeInput, params: CoherenceParams, mut warnings: Vec<RegimeWarning>) -> RegimeOutput {
    warnings.extend(validate_regime(input));
    RegimeOutput {
        params,
        validity_warnings: warnings,
    }
}

/// `Γ_A = Γ_B = g²(L/T)⁴`, `Φ_AB = 0`, `Φ_BA = g²(L/T)²(T/D)³`,
/// `Γ_c = −g²(L/T)⁴(T/D)⁴`.
pub fn params_far(input: &RegimeInput) -> Result<RegimeOutput> {
    if input.regime != Regime::Far {
        return Err(Error::Regime("params_far called with a NEAR input".into()));
    }
    let warnings = input.check()?;
    let gamma = graviton_count(input.g, input.l_over_t);
    let params = CoherenceParams::new(gamma, gamma, -gamma / input.d_over_t.powi(4), 0.0, order_phase(input));
    Ok(finish(input, params, warnings))
}

/// `Γ_A = Γ_B = Γ_c = g²(L/T)⁴`, `Φ_AB = Φ_BA = g²(L/T)²(T/D)³`.
pub fn params_near(input: &RegimeInput) -> Result<RegimeOutput> {
    if input.regime != Regime::Near {
        return Err(Error::Regime("params_near called with a FAR input".into()));
    }
    let warnings = input.check()?;
    let gamma = graviton_count(input.g, input.l_over_t);
    let phi = order_phase(input);
    Ok(finish(input, CoherenceParams::symmetric(gamma, gamma, phi), warnings))
}

/// Dispatch on `input.regime`.
pub fn params_for(input: &RegimeInput) -> Result<RegimeOutput> {
    match input.regime {
        Regime::Far => params_far(input),
        Regime::Near => params_near(input),
    }
}

/// Signed Newtonian relative phase with `T = 1`:
/// `g²[−(1/(D−L) − 1/D) + (1/D − 1/(D+L))] = −2g²(L/T)²(T/D)³ / (1 − (L/D)²)`.
pub fn newtonian_phase_exact(g: f64, l_over_t: f64, d_over_t: f64) -> Result<f64> {
    if l_over_t.is_nan() || d_over_t <= l_over_t || l_over_t < 0.0 || !d_over_t.is_finite() {
        return Err(Error::Domain(format!(
            "need D/T > L/T ≥ 0, got L/T = {l_over_t}, D/T = {d_over_t}"
        )));
    }
    let (l, d) = (l_over_t, d_over_t);
    let ratio = l / d;
    Ok(-2.0 * g * g * l * l / d.powi(3) / (1.0 - ratio * ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn far_example() {
        let out = params_far(&RegimeInput::far(1.0, 0.3, 5.0)).unwrap();
        let p = out.params;
        assert!(close(p.gamma_a, 0.0081, 1e-12) && p.gamma_a == p.gamma_b);
        assert!(close(p.phi_ba, 7.2e-4, 1e-12));
        assert!(close(p.gamma_c, -1.296e-5, 1e-12));
        assert_eq!(p.phi_ab, 0.0);
        assert!(!out
            .validity_warnings
            .iter()
            .any(|w| matches!(w, RegimeWarning::MarginalHierarchy(_))));
    }

    #[test]
    fn far_decoupling_limit() {
        let p = params_far(&RegimeInput::far(1.0, 0.3, 1e6)).unwrap().params;
        assert!(p.phi_ba < 1e-18 && p.gamma_c.abs() < 1e-25);
        assert!(close(p.gamma_a, 0.0081, 1e-12));
    }

    #[test]
    fn near_examples() {
        let p = params_near(&RegimeInput::near(3.0, 0.3, 0.8)).unwrap().params;
        assert!(close(p.gamma_a, 0.0729, 1e-12) && p.gamma_c == p.gamma_a);
        assert!(close(p.phi_ab, 1.58203125, 1e-12) && p.phi_ba == p.phi_ab);
        let p = params_near(&RegimeInput::near(3.0, 0.5, 0.8)).unwrap().params;
        assert!(close(p.gamma_a, 0.5625, 1e-12));
        assert!(close(p.phi_ab, 4.39453125, 1e-12));
    }

    #[test]
    fn zero_coupling() {
        for out in [
            params_far(&RegimeInput::far(0.0, 0.3, 5.0)).unwrap(),
            params_near(&RegimeInput::near(0.0, 0.3, 0.8)).unwrap(),
        ] {
            let p = out.params;
            assert_eq!([p.gamma_a, p.gamma_b, p.gamma_c, p.phi_ab, p.phi_ba], [0.0; 5]);
        }
    }

    #[test]
    fn bounds_enforced_unless_overridden() {
        assert!(matches!(
            params_far(&RegimeInput::far(1.0, 0.3, 0.5)),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            params_near(&RegimeInput::near(1.0, 0.3, 0.2)),
            Err(Error::Regime(_))
        ));
        assert!(params_near(&RegimeInput::near(1.0, 1.2, 1.5)).is_err());
        let out = params_near(&RegimeInput::near(1.0, 0.3, 0.2).with_override(true)).unwrap();
        assert!(out
            .validity_warnings
            .iter()
            .any(|w| matches!(w, RegimeWarning::BoundsOverridden(_))));
        assert!(params_far(&RegimeInput::far(-1.0, 0.3, 5.0).with_override(true)).is_err());
        assert!(params_far(&RegimeInput::near(1.0, 0.3, 5.0)).is_err());
    }

    #[test]
    fn graviton_count_examples() {
        assert_eq!(graviton_count(1.0, 0.5), 0.0625);
        assert_eq!(graviton_count(1.0, 0.0), 0.0);
        let p = params_far(&RegimeInput::far(2.0, 0.4, 7.0)).unwrap().params;
        assert!((graviton_count(2.0, 0.4) - p.gamma_a).abs() < 1e-15);
    }

    #[test]
    fn newtonian_phase_examples() {
        let v = newtonian_phase_exact(1.0, 0.1, 10.0).unwrap();
        assert!(close(v, -2.00020002e-5, 1e-8), "{v}");
        assert_eq!(newtonian_phase_exact(1.0, 0.0, 10.0).unwrap(), 0.0);
        let v = newtonian_phase_exact(1.0, 1e-4, 1.0).unwrap();
        assert!(close(v.abs() / 1e-8, 2.0, 1e-7));
        assert!(newtonian_phase_exact(1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn newtonian_phase_matches_four_terms() {
        let (l, d): (f64, f64) = (0.13, 0.7);
        let direct = -(1.0 / (d - l) - 1.0 / d) + (1.0 / d - 1.0 / (d + l));
        let v = newtonian_phase_exact(1.0, l, d).unwrap();
        assert!(close(v, direct, 1e-12));
    }

    #[test]
    fn hierarchy_warnings() {
        let has_hierarchy = |input: RegimeInput| {
            validate_regime(&input)
                .iter()
                .any(|w| matches!(w, RegimeWarning::MarginalHierarchy(_)))
        };
        assert!(!has_hierarchy(RegimeInput::far(1.0, 0.3, 5.0)));
        assert!(has_hierarchy(RegimeInput::far(1.0, 0.3, 1.5)));
        assert!(has_hierarchy(RegimeInput::near(3.0, 0.6, 0.8)));
        assert!(validate_regime(&RegimeInput::far(1.0, 0.3, 5.0)).contains(&RegimeWarning::WeakFieldUnchecked));
    }

    #[test]
    fn regime_parsing() {
        assert_eq!("near".parse::<Regime>().unwrap(), Regime::Near);
        assert_eq!("FAR".parse::<Regime>().unwrap(), Regime::Far);
        assert!("mid".parse::<Regime>().is_err());
    }
}
