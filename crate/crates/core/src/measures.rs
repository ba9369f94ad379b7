//! Entanglement and correlation measures of the two-particle state.
//!
//! Almost everything here exists twice: once as a closed form in the five
//! coherence functionals and once as a numerical route through the density
//! matrix. The two are kept independent so each can check the other.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CMatrix4};
use crate::state::{build_rho_ab, partial_transpose_a, reduce, CoherenceParams, DensityMatrix4, Subsystem, PSD_TOL};

/// Entries of a spectrum allowed below zero before it is rejected.
pub const SPECTRUM_NEG_TOL: f64 = 1e-10;
/// Allowed deviation of a spectrum's sum from one.
pub const SPECTRUM_SUM_TOL: f64 = 1e-8;
/// Most negative `α_i²` tolerated as rounding in the concurrence closed form.
pub const ALPHA_SQ_NEG_TOL: f64 = 1e-9;
/// Negativity at or below this is treated as zero when classifying.
pub const NEGATIVITY_ZERO_TOL: f64 = 1e-12;
/// `|S(A|B)|` at or below this is treated as zero when classifying.
pub const ENTROPY_ZERO_TOL: f64 = 1e-12;
/// Koashi–Winter slack: `E_f + S(A|B) ≥ −KW_TOL`.
pub const KW_TOL: f64 = 1e-9;
/// Small-Γ expansion of `S(A|B)` is flagged outside `Γ_B ≤ SMALL_GAMMA_LIMIT`.
pub const SMALL_GAMMA_LIMIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    /// Natural logarithm; entropies in nats.
    #[default]
    #[serde(rename = "e")]
    E,
    /// Base two; entropies in bits.
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
        }
    }

    /// Convert a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        nats / self.ln_base()
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::E => "nats",
            LogBase::Two => "bits",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "E" | "nats" => Ok(LogBase::E),
            "2" | "bits" => Ok(LogBase::Two),
            other => Err(Error::Domain(format!("log base must be `e` or `2`, got `{other}`"))),
        }
    }
}

/// One log base applied to every entropy-like quantity in a computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntropyConfig {
    pub log_base: LogBase,
}

impl EntropyConfig {
    pub const NATS: EntropyConfig = EntropyConfig { log_base: LogBase::E };
    pub const BITS: EntropyConfig = EntropyConfig { log_base: LogBase::Two };
}

/// `−Σ λ log λ` with `0 log 0 = 0`.
///
/// Entries in `[−1e-10, 0)` are clamped to zero; anything more negative, or a
/// sum more than `1e-8` away from one, is rejected.
pub fn von_neumann_entropy(spectrum: &[f64], config: EntropyConfig) -> Result<f64> {
    let mut sum = 0.0;
    for &x in spectrum {
        if !x.is_finite() || x < -SPECTRUM_NEG_TOL {
            return Err(Error::InvalidSpectrum(format!("entry {x:e} is not a probability")));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
        return Err(Error::InvalidSpectrum(format!("entries sum to {sum}, not 1")));
    }
    let nats: f64 = spectrum.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    Ok(config.log_base.from_nats(nats))
}

/// Binary entropy `h(x) = −x log x − (1−x) log(1−x)`.
pub fn binary_entropy(x: f64, config: EntropyConfig) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    config.log_base.from_nats(term(x) + term(1.0 - x))
}

/// Closed-form eigenvalues `{(1 ± e^{−Γ} cos(Φ/2))/2}` of a single-particle state,
/// `(Γ_A, Φ_AB)` for A and `(Γ_B, Φ_BA)` for B. Returned as `[λ₊, λ₋]`.
pub fn qubit_spectrum_closed(params: &CoherenceParams, which: Subsystem) -> [f64; 2] {
    let (gamma, phi) = match which {
        Subsystem::A => (params.gamma_a, params.phi_ab),
        Subsystem::B => (params.gamma_b, params.phi_ba),
    };
    let r = (-gamma).exp() * (phi / 2.0).cos();
    [(1.0 + r) / 2.0, (1.0 - r) / 2.0]
}

/// Shared skeleton of the joint and partially transposed spectra: the four
/// values `¼[1 ∓ E cosh Γ_c ± √(s + 4E sin²θ)]` and `¼[1 + E cosh Γ_c ± √(s + 4E cos²θ)]`
/// with `E = e^{−Γ_A−Γ_B}`.
fn four_level_spectrum(p: &CoherenceParams, theta: f64) -> [f64; 4] {
    let ea = (-p.gamma_a).exp();
    let eb = (-p.gamma_b).exp();
    let e = ea * eb;
    let base = e * p.gamma_c.cosh();
    let common = (ea - eb).powi(2) + (e * p.gamma_c.sinh()).powi(2);
    let r1 = (common + 4.0 * e * theta.sin().powi(2)).sqrt();
    let r2 = (common + 4.0 * e * theta.cos().powi(2)).sqrt();
    let mut out = [
        (1.0 + base + r2) / 4.0,
        (1.0 - base + r1) / 4.0,
        (1.0 + base - r2) / 4.0,
        (1.0 - base - r1) / 4.0,
    ];
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Closed-form spectrum of `ρ_AB`, descending. Depends on the phases only
/// through `(Φ_AB − Φ_BA)/4`; may contain negative values for unphysical
/// parameter sets.
pub fn rho_ab_spectrum_closed(params: &CoherenceParams) -> [f64; 4] {
    four_level_spectrum(params, (params.phi_ab - params.phi_ba) / 4.0)
}

/// Closed-form spectrum of `ρ_AB^{T_A}`, descending.
pub fn partial_transpose_spectrum_closed(params: &CoherenceParams) -> [f64; 4] {
    four_level_spectrum(params, (params.phi_ab + params.phi_ba) / 4.0)
}

/// The `λ₋` branch of the partially transposed spectrum,
/// `¼[1 − E cosh Γ_c − √(… + 4E sin²((Φ_AB+Φ_BA)/4) + …)]`.
///
/// This is the least eigenvalue whenever it is negative. When both it and
/// the `cos²` branch are nonnegative the `cos²` branch can be smaller, so
/// [`lambda_min_closed`] takes the minimum over all four values.
pub fn lambda_minus_pt(params: &CoherenceParams) -> f64 {
    let ea = (-params.gamma_a).exp();
    let eb = (-params.gamma_b).exp();
    let e = ea * eb;
    let s = ((params.phi_ab + params.phi_ba) / 4.0).sin();
    let disc = (ea - eb).powi(2) + 4.0 * e * s * s + (e * params.gamma_c.sinh()).powi(2);
    (1.0 - e * params.gamma_c.cosh() - disc.sqrt()) / 4.0
}

/// Least eigenvalue of `ρ_AB^{T_A}` from the closed forms.
pub fn lambda_min_closed(params: &CoherenceParams) -> f64 {
    partial_transpose_spectrum_closed(params)[3]
}

/// `max(−λ_min, 0)` from the closed form.
pub fn negativity(params: &CoherenceParams) -> f64 {
    (-lambda_min_closed(params)).max(0.0)
}

/// `max(−λ_min, 0)` by diagonalizing the partial transpose.
pub fn negativity_numeric(rho: &DensityMatrix4) -> Result<f64> {
    let min = partial_transpose_a(rho).spectrum()?.min();
    Ok((-min).max(0.0))
}

/// Closed-form `α_i²`, descending.
///
/// ```text
/// base = 1 + E² cosh 2Γ_c − e^{−2Γ_A} cos Φ_AB − e^{−2Γ_B} cos Φ_BA
/// X    = base + 2E cosh Γ_c − 2E cos((Φ_AB+Φ_BA)/2)
/// Y    = base − 2E cosh Γ_c + 2E cos((Φ_AB+Φ_BA)/2)
/// κ    = E cosh Γ_c − E cos((Φ_AB−Φ_BA)/2)
/// σ    = (1 − e^{−2Γ_A})(1 − e^{−2Γ_B})/2          (= 2E sinh Γ_A sinh Γ_B)
/// α²   = [X ± √(X² − 4(κ + σ)²)]/16,  [Y ± √(Y² − 4(κ − σ)²)]/16
/// ```
pub fn concurrence_alpha_sq_closed(params: &CoherenceParams) -> [f64; 4] {
    let p = params;
    let e = (-p.gamma_a - p.gamma_b).exp();
    let e2a = (-2.0 * p.gamma_a).exp();
    let e2b = (-2.0 * p.gamma_b).exp();
    let sum_half = ((p.phi_ab + p.phi_ba) / 2.0).cos();
    let diff_half = ((p.phi_ab - p.phi_ba) / 2.0).cos();

    let base = 1.0 + e * e * (2.0 * p.gamma_c).cosh() - e2a * p.phi_ab.cos() - e2b * p.phi_ba.cos();
    let x = base + 2.0 * e * p.gamma_c.cosh() - 2.0 * e * sum_half;
    let y = base - 2.0 * e * p.gamma_c.cosh() + 2.0 * e * sum_half;
    let kappa = e * p.gamma_c.cosh() - e * diff_half;
    let sigma = (1.0 - e2a) * (1.0 - e2b) / 2.0;

    // X and Y are sums of O(1) terms that cancel for pure states; anything
    // below their rounding error is zero, or its square root would leak
    // ~1e-8 into the concurrence.
    let magnitude = 1.0
        + e * e * (2.0 * p.gamma_c).cosh()
        + e2a * p.phi_ab.cos().abs()
        + e2b * p.phi_ba.cos().abs()
        + 2.0 * e * (p.gamma_c.cosh() + sum_half.abs());
    let floor = 4.0 * f64::EPSILON * magnitude;
    let clean = |r: f64| if r.abs() <= floor { 0.0 } else { r };
    // Roots of r² − (v/8) r + q²/64. The small root comes from the product
    // of roots, which avoids cancellation near pure states.
    let roots = |v: f64, q: f64| {
        let hi = clean((v + (v * v - 4.0 * q * q).max(0.0).sqrt()) / 16.0);
        let lo = if hi > 0.0 { q * q / (64.0 * hi) } else { v / 8.0 - hi };
        [hi, clean(lo)]
    };
    let [x_hi, x_lo] = roots(x, kappa + sigma);
    let [y_hi, y_lo] = roots(y, kappa - sigma);
    let mut out = [x_hi, x_lo, y_hi, y_lo];
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Concurrence from the closed-form `α_i`.
pub fn concurrence_closed(params: &CoherenceParams) -> Result<f64> {
    params.validate()?;
    let sq = concurrence_alpha_sq_closed(params);
    if let Some(&bad) = sq.iter().find(|&&v| v < -ALPHA_SQ_NEG_TOL || !v.is_finite()) {
        return Err(Error::Domain(format!(
            "closed-form α² = {bad:e} is negative; the state is not physical"
        )));
    }
    Ok(concurrence_from_alpha_sq(sq))
}

fn concurrence_from_alpha_sq(mut sq: [f64; 4]) -> f64 {
    sq.sort_by(|a, b| b.total_cmp(a));
    let a: Vec<f64> = sq.iter().map(|v| v.max(0.0).sqrt()).collect();
    (a[0] - a[1] - a[2] - a[3]).max(0.0)
}

fn sigma_y_sigma_y() -> CMatrix4 {
    let i = Complex64::new(0.0, 1.0);
    let sy = CMatrix::<2>([[Complex64::new(0.0, 0.0), -i], [i, Complex64::new(0.0, 0.0)]]);
    sy.kron(&sy)
}

/// Wootters concurrence via the Hermitian form `√ρ ρ̃ √ρ`, whose eigenvalues
/// equal those of the non-Hermitian `ρ ρ̃`.
pub fn concurrence_wootters(rho: &DensityMatrix4) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix())?;
    let min = eig.values[3];
    if min < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let sqrt_rho = eig.map_values(|x| if x > 0.0 { x.sqrt() } else { 0.0 });
    let yy = sigma_y_sigma_y();
    let tilde = yy * rho.matrix().conj() * yy;
    let r = sqrt_rho * tilde * sqrt_rho;
    let r = CMatrix4::from_fn(|i, j| (r[(i, j)] + r[(j, i)].conj()) * 0.5);
    let mu = hermitian_eigen(&r)?.values;
    Ok(concurrence_from_alpha_sq(mu))
}

/// `E_f = h((1 + √(1 − C²))/2)`.
pub fn entanglement_of_formation(concurrence: f64, config: EntropyConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::Domain(format!("concurrence {concurrence} outside [0, 1]")));
    }
    let x = (1.0 + (1.0 - concurrence * concurrence).sqrt()) / 2.0;
    Ok(binary_entropy(x, config))
}

/// `S(A|B) = S(ρ_AB) − S(ρ_B)` from the closed-form spectra.
pub fn conditional_entropy(params: &CoherenceParams, config: EntropyConfig) -> Result<f64> {
    params.validate()?;
    let s_ab = von_neumann_entropy(&rho_ab_spectrum_closed(params), config)?;
    let s_b = von_neumann_entropy(&qubit_spectrum_closed(params, Subsystem::B), config)?;
    Ok(s_ab - s_b)
}

/// `S(A|B)` by diagonalizing `ρ_AB` and `ρ_B`.
pub fn conditional_entropy_numeric(rho: &DensityMatrix4, config: EntropyConfig) -> Result<f64> {
    let s_ab = von_neumann_entropy(&rho.spectrum()?.eigenvalues, config)?;
    let s_b = von_neumann_entropy(&reduce(rho, Subsystem::B).spectrum()?.eigenvalues, config)?;
    Ok(s_ab - s_b)
}

/// Small-Γ expansion of `S(A|B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmallGammaApprox {
    /// `(Γ_B/2)(1 − ln(Γ_B/2))`, nats.
    pub value: f64,
    /// False when `Γ_B > 0.1`, where the expansion is not meant to hold.
    pub within_regime: bool,
}

pub fn conditional_entropy_approx(gamma_b: f64) -> Result<SmallGammaApprox> {
    if !gamma_b.is_finite() || gamma_b < 0.0 {
        return Err(Error::param(
            "gamma_b",
            format!("must be finite and ≥ 0, got {gamma_b}"),
        ));
    }
    let half = gamma_b / 2.0;
    let value = if half > 0.0 { half * (1.0 - half.ln()) } else { 0.0 };
    Ok(SmallGammaApprox {
        value,
        within_regime: gamma_b <= SMALL_GAMMA_LIMIT,
    })
}

/// Particle–field discord `E_f(ρ_AB) + S(A|B)`, both terms in the same base.
pub fn discord_a_field(params: &CoherenceParams, config: EntropyConfig) -> Result<f64> {
    let c = concurrence_closed(params)?;
    let ef = entanglement_of_formation(c.min(1.0), config)?;
    Ok(ef + conditional_entropy(params, config)?)
}

/// The sign pattern of `(S(A|B), N_AB)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrelationClass {
    /// `S(A|B) < 0`, `N > 0`: A and B entangled, particle–field entanglement undecided.
    #[serde(rename = "S<0,N>0")]
    NegativeEntangled,
    /// `S(A|B) > 0`, `N > 0`: both A–B and A–field entangled.
    #[serde(rename = "S>0,N>0")]
    PositiveEntangled,
    /// `S(A|B) > 0`, `N = 0`: A–B separable, A–field entangled.
    #[serde(rename = "S>0,N=0")]
    PositiveSeparable,
    #[serde(rename = "unphysical")]
    Unphysical,
}

impl CorrelationClass {
    /// Classify from the two signs. `S(A|B) = 0` with `N = 0` (no coupling at
    /// all) falls into `PositiveSeparable`; see [`is_degenerate`].
    pub fn classify(s_cond: f64, negativity: f64, psd_ok: bool) -> Self {
        if !psd_ok || !s_cond.is_finite() || !negativity.is_finite() {
            return CorrelationClass::Unphysical;
        }
        let entangled = negativity > NEGATIVITY_ZERO_TOL;
        if s_cond < -ENTROPY_ZERO_TOL {
            if entangled {
                CorrelationClass::NegativeEntangled
            } else {
                // Negative conditional entropy certifies entanglement, so
                // this combination only arises from a broken state.
                CorrelationClass::Unphysical
            }
        } else if entangled {
            CorrelationClass::PositiveEntangled
        } else {
            CorrelationClass::PositiveSeparable
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CorrelationClass::NegativeEntangled => "S<0,N>0",
            CorrelationClass::PositiveEntangled => "S>0,N>0",
            CorrelationClass::PositiveSeparable => "S>0,N=0",
            CorrelationClass::Unphysical => "unphysical",
        }
    }
}

/// True when `S(A|B)` is zero to tolerance: labeled `S>0,N=0` but carries no information.
pub fn is_degenerate(s_cond: f64) -> bool {
    s_cond.abs() <= ENTROPY_ZERO_TOL
}

impl fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Every measure of one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_cond: f64,
    pub lambda_min: f64,
    pub negativity: f64,
    pub concurrence: f64,
    pub eof_ab: f64,
    pub discord_a_field: f64,
    pub psd_ok: bool,
    pub class: CorrelationClass,
    pub log_base: LogBase,
}

impl MeasureReport {
    /// Closed-form route throughout; the state is diagonalized once only for
    /// the positivity check. Non-PSD parameter sets produce a report with
    /// `psd_ok = false` and NaN in the entropic fields.
    pub fn compute(params: &CoherenceParams, config: EntropyConfig) -> Result<Self> {
        params.validate()?;
        let spectrum = rho_ab_spectrum_closed(params);
        let psd_ok = spectrum[3] >= -PSD_TOL;
        let lambda_min = lambda_min_closed(params);
        let negativity = (-lambda_min).max(0.0);

        let entropy = |spec: &[f64]| von_neumann_entropy(spec, config).unwrap_or(f64::NAN);
        let (s_ab, s_a, s_b) = if psd_ok {
            (
                entropy(&spectrum),
                entropy(&qubit_spectrum_closed(params, Subsystem::A)),
                entropy(&qubit_spectrum_closed(params, Subsystem::B)),
            )
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        let s_cond = s_ab - s_b;

        let concurrence = if psd_ok {
            concurrence_closed(params).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        let eof_ab = if concurrence.is_finite() {
            entanglement_of_formation(concurrence.min(1.0), config)?
        } else {
            f64::NAN
        };

        Ok(MeasureReport {
            s_ab,
            s_a,
            s_b,
            s_cond,
            lambda_min,
            negativity,
            concurrence,
            eof_ab,
            discord_a_field: eof_ab + s_cond,
            psd_ok,
            class: CorrelationClass::classify(s_cond, negativity, psd_ok),
            log_base: config.log_base,
        })
    }
}

/// The monogamy bookkeeping for one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub s_cond: f64,
    /// Lower bound on the particle–field entanglement of formation, equal to `S(A|B)`.
    pub ef_a_field_lower_bound: f64,
    pub negativity: f64,
    pub eof_ab: f64,
    pub class: CorrelationClass,
    /// `E_f(ρ_AB) ≥ −S(A|B)` to [`KW_TOL`].
    pub reordered_bound_holds: bool,
    /// `N = 0 ∧ S(A|B) > 0`, which certifies particle–field entanglement.
    pub particle_field_certified: bool,
}

pub fn monogamy_report(params: &CoherenceParams, config: EntropyConfig) -> Result<MonogamyReport> {
    let m = MeasureReport::compute(params, config)?;
    if !m.psd_ok {
        return Err(Error::NotPositive {
            min_eigenvalue: rho_ab_spectrum_closed(params)[3],
        });
    }
    Ok(MonogamyReport {
        s_cond: m.s_cond,
        ef_a_field_lower_bound: m.s_cond,
        negativity: m.negativity,
        eof_ab: m.eof_ab,
        class: m.class,
        reordered_bound_holds: m.eof_ab + m.s_cond >= -KW_TOL,
        particle_field_certified: m.negativity <= NEGATIVITY_ZERO_TOL && m.s_cond > ENTROPY_ZERO_TOL,
    })
}

/// Convenience: the numerical route for the quantities that have one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericMeasures {
    pub spectrum: [f64; 4],
    pub lambda_min: f64,
    pub concurrence: f64,
    pub s_cond: f64,
}

pub fn numeric_measures(params: &CoherenceParams, config: EntropyConfig) -> Result<NumericMeasures> {
    let rho = build_rho_ab(params)?;
    let spec = rho.spectrum()?;
    let mut spectrum = [0.0; 4];
    spectrum.copy_from_slice(&spec.eigenvalues);
    Ok(NumericMeasures {
        spectrum,
        lambda_min: partial_transpose_a(&rho).spectrum()?.min(),
        concurrence: concurrence_wootters(&rho)?,
        s_cond: conditional_entropy_numeric(&rho, config)?,
    })
}
