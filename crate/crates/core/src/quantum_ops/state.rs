use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{QuantumError, STATE_TOLERANCE};

/// A d×d density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates the state invariants to within [`STATE_TOLERANCE`].
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        check_square(&entries)?;
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let herm = hermiticity_defect(&entries);
        if herm > STATE_TOLERANCE {
            return Err(QuantumError::NotHermitian(herm));
        }
        let trace = entries.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(QuantumError::TraceNotUnit(trace.re));
        }
        let lowest = min_hermitian_eigenvalue(&entries);
        if lowest < -STATE_TOLERANCE {
            return Err(QuantumError::NotPositive(lowest));
        }
        Ok(Self { entries })
    }

    /// Wraps a matrix without checking the invariants.
    ///
    /// Used for numerically propagated states, whose admissibility is
    /// measured afterwards by [`super::admissibility_report`] rather than
    /// enforced.
    pub fn from_matrix_unchecked(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    /// |ψ⟩⟨ψ| for a normalized amplitude vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, QuantumError> {
        let psi = DVector::from_column_slice(amplitudes);
        Self::new(&psi * psi.adjoint())
    }

    /// Computational basis projector |k⟩⟨k|.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self { entries: m }
    }

    /// Qubit |+⟩⟨+|, every entry ½.
    pub fn plus() -> Self {
        Self { entries: DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0)) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

pub(crate) fn check_square(m: &DMatrix<Complex64>) -> Result<usize, QuantumError> {
    if m.nrows() != m.ncols() {
        return Err(QuantumError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// max |X_ij − conj(X_ji)|.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part (X + X†)/2, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// ℓ1-norm of coherence: Σ_{i≠j} |ρ_ij| in the computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.nrows();
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// Column-stacking vectorization.
pub fn vec(m: &DMatrix<Complex64>) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec`] for a d²-vector.
pub fn unvec(v: &DVector<Complex64>, dim: usize) -> DMatrix<Complex64> {
    debug_assert_eq!(v.len(), dim * dim);
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}
