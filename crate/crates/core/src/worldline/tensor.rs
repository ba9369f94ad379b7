//! Transverse-traceless polarization algebra of the graviton two-point function.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Spatial index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

fn delta(a: Axis, b: Axis) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `P_ab = δ_ab − k_a k_b`.
fn projector(k: [f64; 3], a: Axis, b: Axis) -> f64 {
    delta(a, b) - k[a.index()] * k[b.index()]
}

/// `Π_ijkl = (P_ik P_jl + P_il P_jk − P_ij P_kl)/2` for the direction of `khat`.
///
/// `khat` is normalized here; a zero vector yields NaN.
pub fn tt_polarization_sum(khat: [f64; 3], i: Axis, j: Axis, k: Axis, l: Axis) -> f64 {
    let norm = khat.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = khat.map(|x| x / norm);
    let p = |a, b| projector(n, a, b);
    (p(i, k) * p(j, l) + p(i, l) * p(j, k) - p(i, j) * p(k, l)) / 2.0
}

/// `δ_ik δ_jl + δ_il δ_jk − (2/3) δ_ij δ_kl`.
pub fn isotropic_tensor(i: Axis, j: Axis, k: Axis, l: Axis) -> f64 {
    delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k) - 2.0 / 3.0 * delta(i, j) * delta(k, l)
}

/// Angular average of [`tt_polarization_sum`] over the unit sphere,
/// `(1/5)·isotropic_tensor`.
pub fn tt_angular_average(i: Axis, j: Axis, k: Axis, l: Axis) -> f64 {
    isotropic_tensor(i, j, k, l) / 5.0
}

/// `(8/5π)·isotropic_tensor·2Re[1/(−(dt−iε)² + r²)]` with `G = 1`.
pub fn graviton_kernel(dt: f64, r: f64, eps: f64, i: Axis, j: Axis, k: Axis, l: Axis) -> f64 {
    let z = Complex64::new(dt, -eps);
    let w = Complex64::new(r * r, 0.0) - z * z;
    8.0 / (5.0 * PI) * isotropic_tensor(i, j, k, l) * 2.0 * w.inv().re
}
