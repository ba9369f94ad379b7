//! Small dense complex matrices and a cyclic Jacobi eigensolver for the
//! Hermitian 2×2 and 4×4 cases that show up in two-qubit work.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
/// Upper bound on the number of cyclic sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest eigenpair residual accepted by [`hermitian_spectrum`].
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Entrywise tolerance used when checking the Hermitian precondition.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major `N×N` complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[Complex64; N]; N]);

pub type CMatrix2 = CMatrix<2>;
pub type CMatrix4 = CMatrix<4>;

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self[(i, j)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self[(i, j)] * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in i..N {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64; N]) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self[(i, j)] * v[j]).sum();
        }
        out
    }

    pub fn column(&self, j: usize) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self[(i, j)];
        }
        out
    }
}

impl CMatrix<2> {
    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMatrix2) -> CMatrix4 {
        CMatrix4::from_fn(|r, c| self[(r / 2, c / 2)] * rhs[(r % 2, c % 2)])
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self[(i, j)] - rhs[(i, j)])
    }
}

/// Eigenvalues (descending) plus the worst eigenpair residual.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl SpectrumResult {
    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Full eigendecomposition `M = V diag(λ) V†`, eigenvalues descending and
/// eigenvectors stored as the matching columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMatrix<N>,
    pub residual: f64,
    pub sweeps: usize,
}

impl<const N: usize> HermitianEigen<N> {
    /// Rebuild `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        let mut out = CMatrix::<N>::zeros();
        for k in 0..N {
            let fk = f(self.values[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..N {
                for j in 0..N {
                    out[(i, j)] += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fk;
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Each `(p, q)` rotation zeroes one off-diagonal pair; sweeps repeat until
/// the off-diagonal Frobenius norm drops below [`JACOBI_OFF_TOL`] (scaled by
/// the matrix norm when that exceeds one). Returns
/// [`Error::NonConvergence`] if [`JACOBI_MAX_SWEEPS`] are exhausted or the
/// final residual exceeds [`RESIDUAL_TOL`].
pub fn hermitian_eigen<const N: usize>(m: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    let defect = m.hermiticity_defect();
    if !defect.is_finite() || defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    // Symmetrize so rounding in the input does not leak into the rotations.
    let mut a = CMatrix::<N>::from_fn(|i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = CMatrix::<N>::identity();
    let threshold = JACOBI_OFF_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    while a.off_diagonal_norm() > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            let residual = a.off_diagonal_norm();
            return Err(Error::NonConvergence {
                what: "Jacobi eigensolver",
                residual,
            });
        }
        sweeps += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    let diag: Vec<f64> = (0..N).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let mut values = [0.0; N];
    let mut vectors = CMatrix::<N>::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = diag[src];
        for i in 0..N {
            vectors[(i, dst)] = v[(i, src)];
        }
    }

    let residual = (0..N)
        .map(|k| {
            let col = vectors.column(k);
            let mv = m.mul_vec(&col);
            mv.iter()
                .zip(col.iter())
                .map(|(x, y)| (x - y * values[k]).norm())
                .fold(0.0_f64, f64::max)
        })
        .fold(0.0_f64, f64::max);
    if residual > RESIDUAL_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::NonConvergence {
            what: "Jacobi eigensolver",
            residual,
        });
    }

    Ok(HermitianEigen {
        values,
        vectors,
        residual,
        sweeps,
    })
}

/// One Jacobi rotation annihilating `a[p][q]` (and `a[q][p]`).
fn rotate<const N: usize>(a: &mut CMatrix<N>, v: &mut CMatrix<N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J acts on the (p, q) plane: columns p and q of A·J mix as below.
    let sp = phase * s;
    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * sp.conj();
        a[(k, q)] = akp * sp + akq * c;
    }
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * sp;
        a[(q, k)] = apk * sp.conj() + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..N {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sp.conj();
        v[(k, q)] = vkp * sp + vkq * c;
    }
}

/// Eigenvalues of a Hermitian matrix, descending, with the achieved residual.
pub fn hermitian_spectrum<const N: usize>(m: &CMatrix<N>) -> Result<SpectrumResult> {
    let eig = hermitian_eigen(m)?;
    Ok(SpectrumResult {
        eigenvalues: eig.values.to_vec(),
        residual: eig.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_quarter() {
        let spec = hermitian_spectrum(&CMatrix4::identity().scale(0.25)).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.25; 4]);
        assert_eq!(spec.residual, 0.0);
    }

    #[test]
    fn diagonal_any_order() {
        let m = CMatrix4::from_real_diagonal([0.2, 0.4, 0.1, 0.3]);
        let spec = hermitian_spectrum(&m).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.4, 0.3, 0.2, 0.1]);
    }

    #[test]
    fn pauli_y_two_by_two() {
        let m = CMatrix::<2>([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
        let eig = hermitian_eigen(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] + 1.0).abs() < 1e-15);
        assert!(eig.residual < 1e-14);
    }

    #[test]
    fn dense_complex_hermitian() {
        let m = CMatrix::<4>([
            [c(2.0, 0.0), c(0.3, 0.4), c(-0.1, 0.2), c(0.0, -0.5)],
            [c(0.3, -0.4), c(1.0, 0.0), c(0.7, 0.1), c(0.2, 0.2)],
            [c(-0.1, -0.2), c(0.7, -0.1), c(-1.0, 0.0), c(0.05, 0.0)],
            [c(0.0, 0.5), c(0.2, -0.2), c(0.05, 0.0), c(0.5, 0.0)],
        ]);
        let eig = hermitian_eigen(&m).unwrap();
        assert!(eig.residual < 1e-13);
        assert!((eig.values.iter().sum::<f64>() - 2.5).abs() < 1e-13);
        // V diag(λ) V† reproduces M.
        let back = eig.map_values(|x| x);
        assert!(back.max_abs_diff(&m) < 1e-13);
        // Descending order.
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix2::identity();
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn kron_of_identities() {
        let k = CMatrix2::identity().kron(&CMatrix2::identity());
        assert_eq!(k, CMatrix4::identity());
    }
}
