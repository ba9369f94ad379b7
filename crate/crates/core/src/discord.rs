//! Two-qubit quantum discord with projective measurements on B.
//!
//! The measurement basis is `|n⟩ = (cos θ/2, e^{iφ} sin θ/2)`,
//! `|n⊥⟩ = (−e^{−iφ} sin θ/2, cos θ/2)`. The objective `Σ p_i S(ρ_{A|i})` is
//! minimized on a fixed 64×128 grid in `(θ, φ)` and then polished with
//! Nelder–Mead from the best few grid points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix2;
use crate::measures::{von_neumann_entropy, EntropyConfig};
use crate::state::{reduce, DensityMatrix4, QubitState, Subsystem, PSD_TOL};

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 128;
const REFINE_STARTS: usize = 4;
const REFINE_TOL: f64 = 1e-6;
const REFINE_MAX_ITER: usize = 400;

/// Conditional state of A given B projected on `n`, unnormalized.
fn conditional_block(rho: &DensityMatrix4, n: [Complex64; 2]) -> CMatrix2 {
    let m = rho.matrix();
    CMatrix2::from_fn(|a, ap| {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..2 {
            for bp in 0..2 {
                acc += n[b].conj() * m[(2 * a + b, 2 * ap + bp)] * n[bp];
            }
        }
        acc
    })
}

fn qubit_entropy(m: &CMatrix2, config: EntropyConfig) -> f64 {
    // Closed-form 2×2 Hermitian eigenvalues: (t ± √((a−d)² + 4|b|²))/2.
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let r = ((a - d).powi(2) + 4.0 * m[(0, 1)].norm_sqr()).sqrt();
    let lo = ((a + d - r) / 2.0).max(0.0);
    let hi = (a + d + r) / 2.0;
    let total = lo + hi;
    if total <= 0.0 {
        return 0.0;
    }
    von_neumann_entropy(&[hi / total, lo / total], config).unwrap_or(0.0)
}

fn measurement_cost(rho: &DensityMatrix4, theta: f64, phi: f64, config: EntropyConfig) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let n = [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)];
    let perp = [-Complex64::from_polar(s, -phi), Complex64::new(c, 0.0)];
    [n, perp]
        .into_iter()
        .map(|v| {
            let block = conditional_block(rho, v);
            let p = block[(0, 0)].re + block[(1, 1)].re;
            if p <= 0.0 {
                0.0
            } else {
                p * qubit_entropy(&block, config)
            }
        })
        .sum()
}

fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2]) -> f64 {
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut values = simplex.map(&f);
    for _ in 0..REFINE_MAX_ITER {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (simplex[1][0] - simplex[0][0])
            .abs()
            .max((simplex[2][1] - simplex[0][1]).abs());
        if values[2] - values[0] < REFINE_TOL * 1e-3 && size < 1e-9 {
            break;
        }
        if values[2] - values[0] < 1e-14 && size < 1e-7 {
            break;
        }
        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        (simplex[0][0] + simplex[k][0]) / 2.0,
                        (simplex[0][1] + simplex[k][1]) / 2.0,
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn check_psd(rho: &DensityMatrix4) -> Result<()> {
    let min = rho.spectrum()?.min();
    if min < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// `min Σ p_i S(ρ_{A|i})` over projective measurements on B.
pub fn min_conditional_measurement_entropy(rho: &DensityMatrix4, config: EntropyConfig) -> Result<f64> {
    check_psd(rho)?;
    let d_theta = PI / (GRID_THETA - 1) as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID_THETA * GRID_PHI);
    for i in 0..GRID_THETA {
        let theta = i as f64 * d_theta;
        for j in 0..GRID_PHI {
            let phi = j as f64 * d_phi;
            grid.push((measurement_cost(rho, theta, phi, config), theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let cost = |x: [f64; 2]| measurement_cost(rho, x[0], x[1], config);
    let best = grid
        .iter()
        .take(REFINE_STARTS)
        .map(|&(v, theta, phi)| nelder_mead(cost, [theta, phi], [d_theta / 2.0, d_phi / 2.0]).min(v))
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

fn entropy_of(q: &QubitState, config: EntropyConfig) -> Result<f64> {
    von_neumann_entropy(&q.spectrum()?.eigenvalues, config)
}

/// `J(A,B) = S(ρ_A) − min Σ p_i S(ρ_{A|i})`.
pub fn classical_correlation_two_qubit(rho: &DensityMatrix4, config: EntropyConfig) -> Result<f64> {
    let s_a = entropy_of(&reduce(rho, Subsystem::A), config)?;
    let min = min_conditional_measurement_entropy(rho, config)?;
    Ok((s_a - min).max(0.0))
}

/// `D(A,B) = I(A,B) − J(A,B) = S(ρ_B) − S(ρ_AB) + min Σ p_i S(ρ_{A|i})`.
pub fn discord_two_qubit(rho: &DensityMatrix4, config: EntropyConfig) -> Result<f64> {
    let s_ab = von_neumann_entropy(&rho.spectrum()?.eigenvalues, config)?;
    let s_b = entropy_of(&reduce(rho, Subsystem::B), config)?;
    let min = min_conditional_measurement_entropy(rho, config)?;
    let d = s_b - s_ab + min;
    if d < -1e-8 {
        return Err(Error::NonConvergence {
            what: "discord optimizer",
            residual: -d,
        });
    }
    Ok(d.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{build_rho_ab, CoherenceParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_state_has_no_discord() {
        let rho = build_rho_ab(&CoherenceParams::new(0.3, 0.7, 0.0, 0.0, 0.0)).unwrap();
        let d = discord_two_qubit(&rho, EntropyConfig::NATS).unwrap();
        assert!(d < 1e-6, "{d}");
    }

    #[test]
    fn maximally_mixed_has_no_discord() {
        let d = discord_two_qubit(&DensityMatrix4::maximally_mixed(), EntropyConfig::NATS).unwrap();
        assert!(d < 1e-9);
        let j = classical_correlation_two_qubit(&DensityMatrix4::maximally_mixed(), EntropyConfig::NATS).unwrap();
        assert!(j < 1e-9);
    }

    #[test]
    fn bell_state_discord_is_one_bit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix4::from_pure([c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, h)]);
        let d = discord_two_qubit(&rho, EntropyConfig::BITS).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn pure_state_discord_equals_entanglement_entropy() {
        let amps = [c(0.5, 0.1), c(-0.2, 0.4), c(0.3, -0.3), c(0.1, 0.58)];
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let rho = DensityMatrix4::from_pure(amps.map(|z| z / norm));
        let d = discord_two_qubit(&rho, EntropyConfig::NATS).unwrap();
        let s_a = entropy_of(&reduce(&rho, Subsystem::A), EntropyConfig::NATS).unwrap();
        assert!((d - s_a).abs() < 1e-4, "{d} vs {s_a}");
    }

    #[test]
    fn rejects_non_psd() {
        let rho = build_rho_ab(&CoherenceParams::new(0.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(discord_two_qubit(&rho, EntropyConfig::NATS).is_err());
    }
}
