use nalgebra::DMatrix;
use num_complex::Complex64;

use super::lindblad::{MapKind, MapMatrix};
use super::state::{hermiticity_defect, min_hermitian_eigenvalue};
use super::QuantumError;
use crate::fde_solver::Trajectory;

/// Choi matrix C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|) of a propagator.
///
/// Block (i, j) of C is Φ(|i⟩⟨j|), which in the column-stacking convention
/// is column i + d·j of the map matrix, reshaped.
pub fn choi_matrix(map: &MapMatrix) -> Result<DMatrix<Complex64>, QuantumError> {
    if map.kind() == MapKind::Generator {
        return Err(QuantumError::GeneratorNotPropagator);
    }
    let d = map.dim();
    let m = map.matrix();
    Ok(DMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, a) = (row / d, row % d);
        let (j, b) = (col / d, col % d);
        m[(a + d * b, i + d * j)]
    }))
}

/// Pass thresholds for [`admissibility_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditTolerances {
    pub trace: f64,
    pub hermiticity: f64,
    /// Largest tolerated magnitude of a negative eigenvalue.
    pub positivity: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        Self { trace: 1e-12, hermiticity: 1e-12, positivity: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDefects {
    pub time: f64,
    pub trace: f64,
    pub hermiticity: f64,
    /// max(0, −λ_min)
    pub negativity: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub steps: Vec<StepDefects>,
    pub max_trace_defect: f64,
    pub max_hermiticity_defect: f64,
    pub max_negativity: f64,
    pub min_eigenvalue: f64,
    pub tolerances: AuditTolerances,
    pub trace_ok: bool,
    pub hermitian_ok: bool,
    pub positive_ok: bool,
}

impl AdmissibilityReport {
    pub fn all_ok(&self) -> bool {
        self.trace_ok && self.hermitian_ok && self.positive_ok
    }
}

/// Measures trace, Hermiticity and positivity defects of every state.
pub fn admissibility_report(trajectory: &Trajectory, tolerances: AuditTolerances) -> AdmissibilityReport {
    let one = Complex64::new(1.0, 0.0);
    let steps: Vec<StepDefects> = trajectory
        .times()
        .iter()
        .zip(trajectory.states())
        .map(|(&time, rho)| {
            let m = rho.matrix();
            let min_eigenvalue = min_hermitian_eigenvalue(m);
            StepDefects {
                time,
                trace: (m.trace() - one).norm(),
                hermiticity: hermiticity_defect(m),
                negativity: (-min_eigenvalue).max(0.0),
                min_eigenvalue,
            }
        })
        .collect();
    let max_of = |f: fn(&StepDefects) -> f64| steps.iter().map(f).fold(0.0, f64::max);
    let max_trace_defect = max_of(|s| s.trace);
    let max_hermiticity_defect = max_of(|s| s.hermiticity);
    let max_negativity = max_of(|s| s.negativity);
    let min_eigenvalue = steps.iter().map(|s| s.min_eigenvalue).fold(f64::INFINITY, f64::min);
    AdmissibilityReport {
        max_trace_defect,
        max_hermiticity_defect,
        max_negativity,
        min_eigenvalue,
        tolerances,
        trace_ok: max_trace_defect <= tolerances.trace,
        hermitian_ok: max_hermiticity_defect <= tolerances.hermiticity,
        positive_ok: max_negativity <= tolerances.positivity,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_ops::{hermitian_eigenvalues, DensityMatrix};

    #[test]
    fn identity_choi_is_twice_the_bell_projector() {
        let choi = choi_matrix(&MapMatrix::identity(2)).unwrap();
        let ev = hermitian_eigenvalues(&choi);
        let want = [0.0, 0.0, 0.0, 2.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-14, "{ev:?}");
        }
        // Σ|ii⟩⟨jj|: ones at (0,0), (0,3), (3,0), (3,3)
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(choi[(r, c)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn generators_are_rejected() {
        let g = crate::quantum_ops::lindblad_superoperator(&crate::quantum_ops::LindbladModel::null(2));
        assert_eq!(choi_matrix(&g), Err(QuantumError::GeneratorNotPropagator));
    }

    #[test]
    fn constant_trajectory_has_no_defects() {
        let rho = DensityMatrix::basis(2, 0);
        let traj = Trajectory::new(vec![0.0, 1.0, 2.0], vec![rho.clone(), rho.clone(), rho]).unwrap();
        let report = admissibility_report(&traj, AuditTolerances::default());
        assert_eq!(report.max_trace_defect, 0.0);
        assert_eq!(report.max_hermiticity_defect, 0.0);
        assert_eq!(report.max_negativity, 0.0);
        assert!(report.all_ok());
        assert_eq!(report.steps.len(), 3);
    }

    #[test]
    fn negative_state_is_flagged() {
        let bad = DensityMatrix::from_matrix_unchecked(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.001, 0.0),
            Complex64::new(-0.001, 0.0),
        ])));
        let traj = Trajectory::new(vec![0.0], vec![bad]).unwrap();
        let report = admissibility_report(&traj, AuditTolerances::default());
        assert!(!report.positive_ok);
        assert!(report.trace_ok);
        assert!((report.max_negativity - 0.001).abs() < 1e-15);
    }
}
