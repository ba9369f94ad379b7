use rayon::prelude::*;
use serde::Serialize;

use super::config::{SweepSpec, Variable};
use crate::measures::{is_degenerate, CorrelationClass, EntropyConfig, MeasureReport};
use crate::regimes::{params_for, RegimeInput};

/// One grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub l_over_t: f64,
    pub d_over_t: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub phi_ab: f64,
    pub phi_ba: f64,
    pub s_ab: f64,
    pub s_b: f64,
    pub s_cond: f64,
    pub lambda_min: f64,
    pub negativity: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub discord: f64,
    pub psd_ok: bool,
    pub class_label: CorrelationClass,
    /// `S(A|B) = 0` to tolerance (no coupling); the label is `S>0,N=0` by convention.
    pub degenerate: bool,
    /// Why the row could not be computed; measures are NaN when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(g: f64, l_over_t: f64, d_over_t: f64, error: String) -> Self {
        let nan = f64::NAN;
        SweepRow {
            g,
            l_over_t,
            d_over_t,
            gamma_a: nan,
            gamma_b: nan,
            gamma_c: nan,
            phi_ab: nan,
            phi_ba: nan,
            s_ab: nan,
            s_b: nan,
            s_cond: nan,
            lambda_min: nan,
            negativity: nan,
            concurrence: nan,
            eof: nan,
            discord: nan,
            psd_ok: false,
            class_label: CorrelationClass::Unphysical,
            degenerate: false,
            error: Some(error),
        }
    }

    /// Numeric value of a column by name; `psd_ok` maps to 0/1.
    pub fn field(&self, name: &str) -> Option<f64> {
        Some(match name {
            "g" => self.g,
            "l_over_t" => self.l_over_t,
            "d_over_t" => self.d_over_t,
            "gamma_a" => self.gamma_a,
            "gamma_b" => self.gamma_b,
            "gamma_c" => self.gamma_c,
            "phi_ab" => self.phi_ab,
            "phi_ba" => self.phi_ba,
            "s_ab" => self.s_ab,
            "s_b" => self.s_b,
            "s_cond" => self.s_cond,
            "lambda_min" => self.lambda_min,
            "negativity" => self.negativity,
            "concurrence" => self.concurrence,
            "eof" => self.eof,
            "discord" => self.discord,
            "psd_ok" => f64::from(u8::from(self.psd_ok)),
            _ => return None,
        })
    }

    pub fn coordinate(&self, var: Variable) -> f64 {
        match var {
            Variable::G => self.g,
            Variable::LOverT => self.l_over_t,
            Variable::DOverT => self.d_over_t,
        }
    }
}

/// Evaluate one point. Never fails; problems end up in `error`.
pub fn compute_row(input: &RegimeInput, config: EntropyConfig) -> SweepRow {
    let (g, l, d) = (input.g, input.l_over_t, input.d_over_t);
    let out = match params_for(input) {
        Ok(out) => out,
        Err(e) => return SweepRow::failed(g, l, d, e.to_string()),
    };
    let p = out.params;
    let m = match MeasureReport::compute(&p, config) {
        Ok(m) => m,
        Err(e) => return SweepRow::failed(g, l, d, e.to_string()),
    };
    SweepRow {
        g,
        l_over_t: l,
        d_over_t: d,
        gamma_a: p.gamma_a,
        gamma_b: p.gamma_b,
        gamma_c: p.gamma_c,
        phi_ab: p.phi_ab,
        phi_ba: p.phi_ba,
        s_ab: m.s_ab,
        s_b: m.s_b,
        s_cond: m.s_cond,
        lambda_min: m.lambda_min,
        negativity: m.negativity,
        concurrence: m.concurrence,
        eof: m.eof_ab,
        discord: m.discord_a_field,
        psd_ok: m.psd_ok,
        class_label: m.class,
        degenerate: m.psd_ok && is_degenerate(m.s_cond),
        error: None,
    }
}

fn grid_inputs(spec: &SweepSpec) -> Vec<RegimeInput> {
    let axes = spec.axes();
    let columns: Vec<(Variable, Vec<f64>)> = axes.iter().map(|a| (a.name, a.values())).collect();
    let mut points: Vec<Vec<(Variable, f64)>> = vec![Vec::new()];
    for (var, values) in &columns {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((*var, v));
                    p
                })
            })
            .collect();
    }
    points
        .into_iter()
        .map(|coords| {
            let value = |var: Variable| {
                coords
                    .iter()
                    .find(|(v, _)| *v == var)
                    .map(|&(_, x)| x)
                    .unwrap_or_else(|| spec.fixed[&var])
            };
            RegimeInput::new(
                spec.regime,
                value(Variable::G),
                value(Variable::LOverT),
                value(Variable::DOverT),
            )
            .with_override(spec.override_bounds)
        })
        .collect()
}

/// Row-major over `(axis1, axis2)`. Rows are computed in parallel and
/// collected in grid order, so the output does not depend on the thread count.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    let config = EntropyConfig {
        log_base: spec.log_base,
    };
    grid_inputs(spec)
        .par_iter()
        .map(|input| compute_row(input, config))
        .collect()
}
