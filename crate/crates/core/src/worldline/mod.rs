//! Electromagnetic decoherence functionals from superposed worldlines.
//!
//! Each particle follows `±X(t)` on its two branches with
//! `X(t) = 8L(1 − t/T)²(t/T)²`, so the branch differences are
//! `ΔV = 2X′` and `ΔA = 2X″`. Natural units, `c = ħ = 1`.
//!
//! Two quadrature schemes are offered. [`Scheme::IbpLog`] integrates by parts
//! twice (the velocities vanish at both ends) and takes `ε → 0` analytically,
//! leaving a logarithmic kernel against accelerations:
//!
//! ```text
//! Γ_self = −(e²/8π²) ∫∫ ΔA(t) ΔA(t′) ln|t − t′|
//! Γ_c    = −(e²/4π²) ∫∫ ΔA_A(t) ΔA_B(t′) F(t − t′, D)
//! F(τ, D) = [(D + τ) ln|D + τ| + (D − τ) ln|D − τ|] / 2D
//! ```
//!
//! [`Scheme::FiniteEps`] keeps the raw kernel at a sequence of cutoffs and
//! extrapolates to zero.

pub mod quadrature;
pub mod tensor;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use quadrature::{breakpoints, graded_rule, richardson_to_zero, Rule};

/// Relative change under node doubling above which a result is rejected.
pub const CONVERGENCE_TOL: f64 = 1e-4;
pub const MIN_NODES: usize = 16;
pub const DEFAULT_NODES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WorldlineRegime {
    /// One particle against itself.
    SelfTerm,
    /// Two particles side by side at distance `D`, same time window.
    CrossNear,
    /// B starts a light-travel time `D` after A, at distance `D`, so the two
    /// windows are lightlike-adjacent.
    CrossFar,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldlineConfig {
    /// Superposition size `L`.
    pub l: f64,
    /// Duration `T`.
    pub t_total: f64,
    /// Separation `D`.
    pub d: f64,
    /// Coupling `e`.
    pub charge: f64,
    pub regime: WorldlineRegime,
}

impl WorldlineConfig {
    pub fn self_term(l_over_t: f64, charge: f64) -> Self {
        WorldlineConfig {
            l: l_over_t,
            t_total: 1.0,
            d: 0.0,
            charge,
            regime: WorldlineRegime::SelfTerm,
        }
    }

    pub fn cross(regime: WorldlineRegime, l_over_t: f64, d_over_t: f64, charge: f64) -> Self {
        WorldlineConfig {
            l: l_over_t,
            t_total: 1.0,
            d: d_over_t,
            charge,
            regime,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("l", self.l),
            ("t_total", self.t_total),
            ("d", self.d),
            ("charge", self.charge),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        if self.l < 0.0 {
            return Err(Error::param("l", format!("must be ≥ 0, got {}", self.l)));
        }
        if self.t_total <= 0.0 {
            return Err(Error::param("t_total", format!("must be > 0, got {}", self.t_total)));
        }
        if self.d < 0.0 {
            return Err(Error::param("d", format!("must be ≥ 0, got {}", self.d)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[default]
    IbpLog,
    FiniteEps,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
    pub scheme: Scheme,
    /// Cutoffs for [`Scheme::FiniteEps`], in units of `T`.
    pub epsilon_sequence: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_axis: DEFAULT_NODES,
            scheme: Scheme::IbpLog,
            epsilon_sequence: vec![1e-3, 1e-4, 1e-5],
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes_per_axis = nodes;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < MIN_NODES {
            return Err(Error::param(
                "nodes_per_axis",
                format!("must be ≥ {MIN_NODES}, got {}", self.nodes_per_axis),
            ));
        }
        if self.scheme == Scheme::FiniteEps {
            if self.epsilon_sequence.is_empty() {
                return Err(Error::param("epsilon_sequence", "must not be empty"));
            }
            if self.epsilon_sequence.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                return Err(Error::param("epsilon_sequence", "entries must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// A converged quadrature value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureOutcome {
    /// Result at the requested node count.
    pub value: f64,
    pub nodes_per_axis: usize,
    /// `|v(2N) − v(N)| / |v(2N)|`; zero when both vanish.
    pub doubling_shift: f64,
}

/// Position, velocity, acceleration of the R branch at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub x: f64,
    pub v: f64,
    pub a: f64,
}

pub fn trajectory(t: f64, config: &WorldlineConfig) -> Result<TrajectoryPoint> {
    let tt = config.t_total;
    if !(0.0..=tt).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, {tt}]")));
    }
    Ok(trajectory_unchecked(t, config.l, tt))
}

fn trajectory_unchecked(t: f64, l: f64, tt: f64) -> TrajectoryPoint {
    let s = t / tt;
    let u = 1.0 - s;
    TrajectoryPoint {
        x: 8.0 * l * u * u * s * s,
        v: 16.0 * l / tt * s * u * (1.0 - 2.0 * s),
        a: 16.0 * l / (tt * tt) * (1.0 - 6.0 * s + 6.0 * s * s),
    }
}

/// `(1/4π²)·2Re[1/(−(dt − iε)² + r²)]`.
pub fn em_kernel(dt: f64, r: f64, eps: f64) -> f64 {
    let z = Complex64::new(dt, -eps);
    let w = Complex64::new(r * r, 0.0) - z * z;
    2.0 * w.inv().re / (4.0 * PI * PI)
}

/// `F(τ, D)` of the integrated-by-parts cross kernel.
fn cross_log_kernel(tau: f64, d: f64) -> f64 {
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() };
    (xlogx(d + tau) + xlogx(d - tau)) / (2.0 * d)
}

/// `(1 − x) ln|1 − x|` minus its Taylor polynomial through `x³`.
fn xlogx_tail(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // (1 − x) ln(1 − x) = −x + Σ_{k≥2} x^k / (k(k−1))
        let mut sum = 0.0;
        let mut p = x.powi(4);
        for k in 4..400 {
            let term = p / (k * (k - 1)) as f64;
            sum += term;
            if term.abs() < 1e-20 * sum.abs().max(1e-300) {
                break;
            }
            p *= x;
        }
        sum
    } else {
        let y = 1.0 - x;
        let head = if y == 0.0 { 0.0 } else { y * y.abs().ln() };
        head + x - x * x / 2.0 - x * x * x / 6.0
    }
}

/// One time-integrated ingredient of a double integral: `outer` evaluated on
/// its rule against an inner integral that depends on the outer time.
struct DoubleIntegral<'a> {
    tt: f64,
    outer_breaks: Vec<f64>,
    inner_singular: &'a (dyn Fn(f64) -> Vec<f64> + Sync),
    min_scale: f64,
    integrand: &'a (dyn Fn(f64, f64) -> f64 + Sync),
}

impl DoubleIntegral<'_> {
    fn evaluate(&self, nodes: usize) -> f64 {
        let outer = graded_rule(&self.outer_breaks, nodes, 0.0);
        let parts: Vec<f64> = outer
            .x
            .par_iter()
            .zip(outer.w.par_iter())
            .map(|(&t, &w)| {
                let inner: Rule = graded_rule(
                    &breakpoints(0.0, self.tt, &(self.inner_singular)(t)),
                    nodes,
                    self.min_scale,
                );
                w * inner.integrate(|u| (self.integrand)(t, u))
            })
            .collect();
        // Sequential sum keeps the result independent of the thread count.
        parts.iter().sum()
    }
}

fn converge(what: &'static str, nodes: usize, f: impl Fn(usize) -> f64) -> Result<QuadratureOutcome> {
    let coarse = f(nodes);
    let fine = f(2 * nodes);
    let shift = if fine == 0.0 && coarse == 0.0 {
        0.0
    } else {
        ((fine - coarse) / fine).abs()
    };
    if !shift.is_finite() || shift > CONVERGENCE_TOL {
        return Err(Error::NonConvergence { what, residual: shift });
    }
    Ok(QuadratureOutcome {
        value: coarse,
        nodes_per_axis: nodes,
        doubling_shift: shift,
    })
}

fn with_eps(quad: &QuadratureSpec, tt: f64, eval: impl Fn(usize, f64) -> f64) -> impl Fn(usize) -> f64 {
    let eps: Vec<f64> = quad.epsilon_sequence.iter().map(|e| e * tt).collect();
    move |n| {
        let values: Vec<f64> = eps.iter().map(|&e| eval(n, e)).collect();
        richardson_to_zero(&eps, &values)
    }
}

/// Self-decoherence exponent of one particle, `(32/3π²) e² (L/T)²` in closed form.
pub fn gamma_self_quadrature(config: &WorldlineConfig, quad: &QuadratureSpec) -> Result<QuadratureOutcome> {
    config.validate()?;
    quad.validate()?;
    if config.regime != WorldlineRegime::SelfTerm {
        return Err(Error::Domain("gamma_self_quadrature needs the SELF_TERM regime".into()));
    }
    let (l, tt, e2) = (config.l, config.t_total, config.charge * config.charge);
    let acc = move |t: f64| 2.0 * trajectory_unchecked(t, l, tt).a;
    let vel = move |t: f64| 2.0 * trajectory_unchecked(t, l, tt).v;
    let diagonal = |t: f64| vec![t];

    match quad.scheme {
        Scheme::IbpLog => {
            let integrand = move |t: f64, u: f64| {
                let s = (t - u).abs();
                if s == 0.0 {
                    0.0
                } else {
                    acc(t) * acc(u) * s.ln()
                }
            };
            let job = DoubleIntegral {
                tt,
                outer_breaks: vec![0.0, tt],
                inner_singular: &diagonal,
                min_scale: 0.0,
                integrand: &integrand,
            };
            converge("self-decoherence quadrature", quad.nodes_per_axis, |n| {
                -e2 / (8.0 * PI * PI) * job.evaluate(n)
            })
        }
        Scheme::FiniteEps => {
            let eval = |n: usize, eps: f64| {
                let integrand = move |t: f64, u: f64| vel(t) * vel(u) * em_kernel(t - u, 0.0, eps);
                let job = DoubleIntegral {
                    tt,
                    outer_breaks: vec![0.0, tt],
                    inner_singular: &diagonal,
                    min_scale: eps / 20.0,
                    integrand: &integrand,
                };
                e2 / 4.0 * job.evaluate(n)
            };
            converge(
                "self-decoherence quadrature",
                quad.nodes_per_axis,
                with_eps(quad, tt, eval),
            )
        }
    }
}

/// Cross-correlation exponent `Γ_c` between two particles at separation `D`.
pub fn gamma_cross_quadrature(config: &WorldlineConfig, quad: &QuadratureSpec) -> Result<QuadratureOutcome> {
    config.validate()?;
    quad.validate()?;
    if config.d <= 0.0 {
        return Err(Error::param("d", "cross terms need d > 0"));
    }
    let (l, tt, d, e2) = (config.l, config.t_total, config.d, config.charge * config.charge);
    let acc = move |t: f64| 2.0 * trajectory_unchecked(t, l, tt).a;
    let vel = move |t: f64| 2.0 * trajectory_unchecked(t, l, tt).v;

    match config.regime {
        WorldlineRegime::SelfTerm => Err(Error::Domain(
            "gamma_cross_quadrature needs a CROSS_NEAR or CROSS_FAR regime".into(),
        )),
        WorldlineRegime::CrossNear => {
            // Same time window; kernel singular on the light cone u = t ± D.
            let light_cone = move |t: f64| vec![t - d, t + d];
            let outer_breaks = breakpoints(0.0, tt, &[d, tt - d]);
            match quad.scheme {
                Scheme::IbpLog => {
                    let integrand = move |t: f64, u: f64| acc(t) * acc(u) * cross_log_kernel(t - u, d);
                    let job = DoubleIntegral {
                        tt,
                        outer_breaks,
                        inner_singular: &light_cone,
                        min_scale: 0.0,
                        integrand: &integrand,
                    };
                    converge("near cross-term quadrature", quad.nodes_per_axis, |n| {
                        -e2 / (4.0 * PI * PI) * job.evaluate(n)
                    })
                }
                Scheme::FiniteEps => {
                    let eval = |n: usize, eps: f64| {
                        let integrand = move |t: f64, u: f64| vel(t) * vel(u) * em_kernel(t - u, d, eps);
                        let job = DoubleIntegral {
                            tt,
                            outer_breaks: outer_breaks.clone(),
                            inner_singular: &light_cone,
                            min_scale: eps / 20.0,
                            integrand: &integrand,
                        };
                        e2 / 2.0 * job.evaluate(n)
                    };
                    converge(
                        "near cross-term quadrature",
                        quad.nodes_per_axis,
                        with_eps(quad, tt, eval),
                    )
                }
            }
        }
        WorldlineRegime::CrossFar => {
            // B's local time u ∈ [0, T] sits at global time u + D, so
            // τ = t − u − D and the light cone is at u = t and u = t − 2D.
            let light_cone = move |t: f64| vec![t, t - 2.0 * d];
            let outer_breaks = breakpoints(0.0, tt, &[2.0 * d]);
            match quad.scheme {
                Scheme::IbpLog => {
                    // With s = t − u: F = [s ln|s| + (2D − s) ln|2D − s|]/2D. Both
                    // accelerations have vanishing zeroth and first moments, so
                    // any polynomial of degree ≤ 3 in s integrates to zero and
                    // is dropped before summation to avoid cancellation.
                    let integrand = move |t: f64, u: f64| {
                        let s = t - u;
                        let near = if s == 0.0 { 0.0 } else { s * s.abs().ln() / (2.0 * d) };
                        acc(t) * acc(u) * (near + xlogx_tail(s / (2.0 * d)))
                    };
                    let job = DoubleIntegral {
                        tt,
                        outer_breaks,
                        inner_singular: &light_cone,
                        min_scale: 0.0,
                        integrand: &integrand,
                    };
                    converge("far cross-term quadrature", quad.nodes_per_axis, |n| {
                        -e2 / (4.0 * PI * PI) * job.evaluate(n)
                    })
                }
                Scheme::FiniteEps => {
                    let eval = |n: usize, eps: f64| {
                        let integrand = move |t: f64, u: f64| vel(t) * vel(u) * em_kernel(t - u - d, d, eps);
                        let job = DoubleIntegral {
                            tt,
                            outer_breaks: outer_breaks.clone(),
                            inner_singular: &light_cone,
                            min_scale: eps / 20.0,
                            integrand: &integrand,
                        };
                        e2 / 2.0 * job.evaluate(n)
                    };
                    converge(
                        "far cross-term quadrature",
                        quad.nodes_per_axis,
                        with_eps(quad, tt, eval),
                    )
                }
            }
        }
    }
}

/// `(32/3π²) e² (L/T)²`.
pub fn gamma_self_closed(l_over_t: f64, charge: f64) -> f64 {
    32.0 / (3.0 * PI * PI) * charge * charge * l_over_t * l_over_t
}

/// `(64/3π²) e² (L/T)² [1 + 4(D/T)² ln(D/T)]`.
pub fn gamma_cross_near_closed(l_over_t: f64, d_over_t: f64, charge: f64) -> f64 {
    64.0 / (3.0 * PI * PI) * charge * charge * l_over_t * l_over_t * (1.0 + 4.0 * d_over_t * d_over_t * d_over_t.ln())
}

/// `−(32/225π²) e² (L/T)² (T/D)⁴`.
pub fn gamma_cross_far_closed(l_over_t: f64, d_over_t: f64, charge: f64) -> f64 {
    -32.0 / (225.0 * PI * PI) * charge * charge * l_over_t * l_over_t / d_over_t.powi(4)
}
