//! The two-qubit branch state of particles A and B.
//!
//! Each particle is in a superposition of two trajectories, R and L. After
//! the field is traced out, the joint state in the branch basis
//! `(RR, RL, LR, LL)` is fixed by five functionals: the self-decoherence
//! exponents `Γ_A`, `Γ_B`, the cross term `Γ_c`, and the two retarded phases
//! `Φ_AB`, `Φ_BA`. Two optional local phases account for any purely local
//! branch-dependent phase (coherent background field, mean-field terms).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, CMatrix2, CMatrix4, SpectrumResult};

/// Tolerance on the least eigenvalue below which a state is reported non-PSD.
pub const PSD_TOL: f64 = 1e-10;

/// Branch sign: `+1` for R, `−1` for L.
const BRANCH_SIGN: [f64; 2] = [1.0, -1.0];

/// The five decoherence/phase functionals plus optional local phases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoherenceParams {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub phi_ab: f64,
    pub phi_ba: f64,
    #[serde(default)]
    pub phi_local_a: f64,
    #[serde(default)]
    pub phi_local_b: f64,
}

impl CoherenceParams {
    pub fn new(gamma_a: f64, gamma_b: f64, gamma_c: f64, phi_ab: f64, phi_ba: f64) -> Self {
        CoherenceParams {
            gamma_a,
            gamma_b,
            gamma_c,
            phi_ab,
            phi_ba,
            phi_local_a: 0.0,
            phi_local_b: 0.0,
        }
    }

    /// `Γ_A = Γ_B = Γ_c = γ`, `Φ_AB = Φ_BA = φ`.
    pub fn symmetric(gamma: f64, gamma_c: f64, phi: f64) -> Self {
        Self::new(gamma, gamma, gamma_c, phi, phi)
    }

    pub fn with_local_phases(mut self, phi_local_a: f64, phi_local_b: f64) -> Self {
        self.phi_local_a = phi_local_a;
        self.phi_local_b = phi_local_b;
        self
    }

    /// Hard checks: finite values and nonnegative self-decoherence exponents.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("gamma_c", self.gamma_c),
            ("phi_ab", self.phi_ab),
            ("phi_ba", self.phi_ba),
            ("phi_local_a", self.phi_local_a),
            ("phi_local_b", self.phi_local_b),
        ];
        for (name, value) in fields {
            // Γ_A, Γ_B = +∞ is full dephasing and still well defined.
            let infinite_ok = matches!(name, "gamma_a" | "gamma_b") && value == f64::INFINITY;
            if !value.is_finite() && !infinite_ok {
                return Err(Error::param(name, format!("must be finite, got {value}")));
            }
        }
        if self.gamma_a < 0.0 {
            return Err(Error::param("gamma_a", format!("must be ≥ 0, got {}", self.gamma_a)));
        }
        if self.gamma_b < 0.0 {
            return Err(Error::param("gamma_b", format!("must be ≥ 0, got {}", self.gamma_b)));
        }
        Ok(())
    }

    /// Soft check: `|Γ_c| ≤ 2√(Γ_A Γ_B)`, the Cauchy–Schwarz bound for a cross
    /// term of the same positive kernel.
    pub fn cross_term_within_bound(&self) -> bool {
        self.gamma_c.abs() <= 2.0 * (self.gamma_a * self.gamma_b).sqrt() * (1.0 + 1e-12)
    }
}

/// Which particle to keep when tracing out the other one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// A 4×4 two-qubit operator in the branch basis `(RR, RL, LR, LL)`.
///
/// Produced by [`build_rho_ab`] and [`partial_transpose_a`]; Hermitian with
/// unit trace but not necessarily positive (use [`validate_state`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4(pub CMatrix4);

/// A single-qubit state in the basis `(R, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(pub CMatrix2);

impl DensityMatrix4 {
    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix4(CMatrix4::identity().scale(0.25))
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) amplitude vector.
    pub fn from_pure(amplitudes: [Complex64; 4]) -> Self {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        DensityMatrix4(CMatrix4::from_fn(|i, j| amplitudes[i] * amplitudes[j].conj() / norm))
    }

    pub fn spectrum(&self) -> Result<SpectrumResult> {
        hermitian_spectrum(&self.0)
    }
}

impl QubitState {
    pub fn matrix(&self) -> &CMatrix2 {
        &self.0
    }

    pub fn spectrum(&self) -> Result<SpectrumResult> {
        hermitian_spectrum(&self.0)
    }
}

/// Build `ρ_AB` from the coherence functionals.
///
/// With branch signs `ε_R = +1`, `ε_L = −1`, the element between row
/// `(P, Q)` and column `(P′, Q′)` is `¼·exp(−Γ_el + iΦ_el)` where, using
/// `a = (ε_P − ε_P′)/2`, `b = (ε_Q − ε_Q′)/2`, `c = (ε_P + ε_P′)/2`,
/// `d = (ε_Q + ε_Q′)/2`:
///
/// ```text
/// Γ_el = a²Γ_A + b²Γ_B + abΓ_c
/// Φ_el = aΦ_loc,A + bΦ_loc,B − ½(ad·Φ_AB + bc·Φ_BA)
/// ```
///
/// ```
/// use monogamy::state::{build_rho_ab, CoherenceParams};
///
/// let rho = build_rho_ab(&CoherenceParams::default()).unwrap();
/// assert!((rho.matrix()[(0, 3)].re - 0.25).abs() < 1e-15);
/// ```
pub fn build_rho_ab(params: &CoherenceParams) -> Result<DensityMatrix4> {
    params.validate()?;
    let mut m = CMatrix4::zeros();
    for row in 0..4 {
        let (p, q) = (row / 2, row % 2);
        for col in 0..4 {
            let (pp, qp) = (col / 2, col % 2);
            let a = (BRANCH_SIGN[p] - BRANCH_SIGN[pp]) / 2.0;
            let b = (BRANCH_SIGN[q] - BRANCH_SIGN[qp]) / 2.0;
            let c = (BRANCH_SIGN[p] + BRANCH_SIGN[pp]) / 2.0;
            let d = (BRANCH_SIGN[q] + BRANCH_SIGN[qp]) / 2.0;

            // a, b ∈ {−1, 0, 1}; skip zero-weight terms so Γ = ∞ stays finite.
            let mut gamma = 0.0;
            if a != 0.0 {
                gamma += params.gamma_a;
            }
            if b != 0.0 {
                gamma += params.gamma_b;
            }
            gamma += a * b * params.gamma_c;
            let phase =
                a * params.phi_local_a + b * params.phi_local_b - 0.5 * (a * d * params.phi_ab + b * c * params.phi_ba);

            m[(row, col)] = Complex64::from_polar(0.25 * (-gamma).exp(), phase);
        }
    }
    Ok(DensityMatrix4(m))
}

/// Partial trace keeping `keep`.
pub fn reduce(rho: &DensityMatrix4, keep: Subsystem) -> QubitState {
    let m = rho.matrix();
    let mut out = CMatrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
                Subsystem::B => m[(i, j)] + m[(i + 2, j + 2)],
            };
        }
    }
    QubitState(out)
}

/// Transpose on the A index: `⟨P Q|ρ^{T_A}|P′ Q′⟩ = ⟨P′ Q|ρ|P Q′⟩`.
pub fn partial_transpose_a(rho: &DensityMatrix4) -> DensityMatrix4 {
    let m = rho.matrix();
    DensityMatrix4(CMatrix4::from_fn(|row, col| {
        let (p, q) = (row / 2, row % 2);
        let (pp, qp) = (col / 2, col % 2);
        m[(2 * pp + q, 2 * p + qp)]
    }))
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix();
    // tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ.
    m.0.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum()
}

/// Outcome of [`validate_state`]. Never an error: unphysical parameter sets
/// are reported so sweeps can flag them instead of aborting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_defect <= 1e-12 && self.trace_defect <= 1e-12 && self.psd
    }
}

pub fn validate_state<const N: usize>(m: &crate::linalg::CMatrix<N>, tol: f64) -> ValidationReport {
    let hermiticity_defect = m.hermiticity_defect();
    let trace = m.trace();
    let trace_defect = (trace - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = hermitian_spectrum(m).map(|s| s.min()).unwrap_or(f64::NAN);
    ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        psd: min_eigenvalue >= -tol,
    }
}
