//! Closed-form fractional dynamics.
//!
//! [`matrix_ml`] evaluates the operator Mittag-Leffler propagator
//! E_α(t^α L) by spectral decomposition. The amplitude-damping functions give
//! the same dynamics element by element, in the basis (|0⟩ ground, |1⟩
//! excited):
//!
//! ```text
//! ρ₁₁(t) = ρ₁₁(0) E_α(−γ t^α)        ρ₀₀(t) = 1 − ρ₁₁(t)
//! ρ₁₀(t) = ρ₁₀(0) E_α(−γ/2 t^α)      ρ₀₁(t) = conj ρ₁₀(t)
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::mlf::{ml_one, MlError};
use crate::quantum_ops::{DensityMatrix, MapKind, MapMatrix, QuantumError};

/// Imaginary parts below this (relative to the spectral radius) count as real.
const REAL_SPECTRUM_TOL: f64 = 1e-10;
/// Eigenvalues closer than this (relative) are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-8;
/// Singular values below this (relative) span the eigenspace of a cluster.
const NULL_SPACE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("{name} = {value} is outside {range}")]
    Domain { name: &'static str, value: f64, range: &'static str },
    #[error("generator has a complex eigenvalue {re} + {im}i; integrate with fde_solver::solve instead")]
    ComplexSpectrum { re: f64, im: f64 },
    #[error("generator is not diagonalizable (eigenvalue {eigenvalue} has geometric multiplicity {geometric} < {algebraic}); integrate with fde_solver::solve instead")]
    Defective { eigenvalue: f64, algebraic: usize, geometric: usize },
    #[error("matrix-ml expects a generator, got a propagator")]
    NotAGenerator,
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

fn check_time(t: f64) -> Result<(), AnalyticError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::Domain { name: "t", value: t, range: "[0, inf)" })
    }
}

fn check_alpha(alpha: f64) -> Result<(), AnalyticError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(AnalyticError::Domain { name: "alpha", value: alpha, range: "(0, 1]" })
    }
}

fn check_rate(gamma: f64) -> Result<(), AnalyticError> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::Domain { name: "gamma", value: gamma, range: "(0, inf)" })
    }
}

/// t^α as exp(α ln t), zero at t = 0.
fn time_power(t: f64, alpha: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        (alpha * t.ln()).exp()
    }
}

/// E_α(t^α L) = V diag(E_α(t^α λ_i)) V⁻¹ for a diagonalizable generator
/// with real spectrum.
pub fn matrix_ml(alpha: f64, t: f64, generator: &MapMatrix) -> Result<MapMatrix, AnalyticError> {
    check_alpha(alpha)?;
    check_time(t)?;
    if generator.kind() != MapKind::Generator {
        return Err(AnalyticError::NotAGenerator);
    }
    let d = generator.dim();
    if t == 0.0 {
        return Ok(MapMatrix::identity(d));
    }
    let (values, vectors) = real_eigendecomposition(generator.matrix())?;
    let inverse = vectors.clone().try_inverse().ok_or(AnalyticError::Defective {
        eigenvalue: values[0],
        algebraic: values.len(),
        geometric: 0,
    })?;
    let tp = time_power(t, alpha);
    let mut scaled = vectors;
    for (k, &lambda) in values.iter().enumerate() {
        let f = ml_one(alpha, tp * lambda)?;
        scaled.column_mut(k).scale_mut(f);
    }
    Ok(MapMatrix::new(scaled * inverse, MapKind::Propagator)?)
}

/// Real eigenvalues and a basis of eigenvectors (as columns).
fn real_eigendecomposition(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>), AnalyticError> {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eigenvalues = m.clone().schur().eigenvalues().expect("complex Schur form is triangular");
    let mut reals = Vec::with_capacity(n);
    for z in eigenvalues.iter() {
        if z.im.abs() > REAL_SPECTRUM_TOL * scale {
            return Err(AnalyticError::ComplexSpectrum { re: z.re, im: z.im });
        }
        reals.push(z.re);
    }
    reals.sort_by(f64::total_cmp);

    // cluster numerically repeated eigenvalues
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for &v in &reals {
        match clusters.last_mut() {
            Some(c) if (v - c[c.len() - 1]).abs() <= CLUSTER_TOL * scale => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    for cluster in clusters {
        let mut lambda = cluster.iter().sum::<f64>() / cluster.len() as f64;
        if lambda.abs() <= CLUSTER_TOL * scale {
            lambda = 0.0;
        }
        let shifted = m - DMatrix::<Complex64>::identity(n, n) * Complex64::new(lambda, 0.0);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let null: Vec<usize> =
            order.iter().copied().filter(|&k| svd.singular_values[k] <= NULL_SPACE_TOL * scale).collect();
        if null.len() < cluster.len() {
            return Err(AnalyticError::Defective {
                eigenvalue: lambda,
                algebraic: cluster.len(),
                geometric: null.len(),
            });
        }
        for &k in null.iter().take(cluster.len()) {
            columns.push(v_t.row(k).adjoint());
            values.push(lambda);
        }
    }
    Ok((values, DMatrix::from_columns(&columns)))
}

/// Parameters of the fractional amplitude-damping model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDampingParams {
    gamma: f64,
    alpha: f64,
}

impl AmplitudeDampingParams {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self, AnalyticError> {
        check_rate(gamma)?;
        check_alpha(alpha)?;
        Ok(Self { gamma, alpha })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Excited-state population ρ₁₁(0) E_α(−γ t^α).
pub fn ad_population(rho11_0: f64, params: AmplitudeDampingParams, t: f64) -> Result<f64, AnalyticError> {
    if !(0.0..=1.0).contains(&rho11_0) {
        return Err(AnalyticError::Domain { name: "rho11_0", value: rho11_0, range: "[0, 1]" });
    }
    check_time(t)?;
    Ok(rho11_0 * ml_one(params.alpha, -params.gamma * time_power(t, params.alpha))?)
}

/// Coherence ρ₁₀(0) E_α(−(γ/2) t^α).
pub fn ad_coherence(rho10_0: Complex64, params: AmplitudeDampingParams, t: f64) -> Result<Complex64, AnalyticError> {
    if !(rho10_0.norm() <= 0.5) {
        return Err(AnalyticError::Domain { name: "|rho10_0|", value: rho10_0.norm(), range: "[0, 1/2]" });
    }
    check_time(t)?;
    Ok(rho10_0 * ml_one(params.alpha, -0.5 * params.gamma * time_power(t, params.alpha))?)
}

/// Full qubit state at time t.
pub fn ad_density(
    rho0: &DensityMatrix,
    params: AmplitudeDampingParams,
    t: f64,
) -> Result<DensityMatrix, AnalyticError> {
    if rho0.dim() != 2 {
        return Err(QuantumError::DimensionMismatch { expected: 2, found: rho0.dim() }.into());
    }
    let rho11 = ad_population(rho0.get(1, 1).re, params, t)?;
    let rho10 = ad_coherence(rho0.get(1, 0), params, t)?;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(1.0 - rho11, 0.0), rho10.conj(), rho10, Complex64::new(rho11, 0.0)],
    );
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// C₀ e^{−γt}.
pub fn markov_coherence_decay(c0: f64, gamma: f64, t: f64) -> Result<f64, AnalyticError> {
    check_coherence_args(c0, gamma, t)?;
    Ok(c0 * (-gamma * t).exp())
}

/// C₀ E_α(−γ t^α).
pub fn fractional_coherence_decay(c0: f64, gamma: f64, alpha: f64, t: f64) -> Result<f64, AnalyticError> {
    check_coherence_args(c0, gamma, t)?;
    check_alpha(alpha)?;
    Ok(c0 * ml_one(alpha, -gamma * time_power(t, alpha))?)
}

fn check_coherence_args(c0: f64, gamma: f64, t: f64) -> Result<(), AnalyticError> {
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(AnalyticError::Domain { name: "c0", value: c0, range: "[0, inf)" });
    }
    check_rate(gamma)?;
    check_time(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_ops::{lindblad_superoperator, LindbladModel};

    const E_INV: f64 = 0.367_879_441_171_442_3;
    const ML_HALF_MINUS_ONE: f64 = 0.427_583_576_155_807;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(gamma: f64, alpha: f64) -> AmplitudeDampingParams {
        AmplitudeDampingParams::new(gamma, alpha).unwrap()
    }

    #[test]
    fn population_examples() {
        assert!((ad_population(1.0, params(1.0, 1.0), 1.0).unwrap() - E_INV).abs() < 1e-15);
        assert_eq!(ad_population(0.5, params(3.0, 0.4), 0.0).unwrap(), 0.5);
        assert!((ad_population(1.0, params(1.0, 0.5), 1.0).unwrap() - ML_HALF_MINUS_ONE).abs() < 1e-14);
    }

    #[test]
    fn coherence_examples() {
        let v = ad_coherence(c(0.5, 0.0), params(2.0, 1.0), 1.0).unwrap();
        assert!((v - c(0.183_939_720_585_721_2, 0.0)).norm() < 1e-15);
        assert_eq!(ad_coherence(c(0.0, 0.5), params(1.3, 0.6), 0.0).unwrap(), c(0.0, 0.5));
        let v = ad_coherence(c(0.5, 0.0), params(2.0, 0.5), 1.0).unwrap();
        assert!((v.re - 0.213_791_788_077_903_5).abs() < 1e-14);
    }

    #[test]
    fn decay_laws() {
        assert_eq!(markov_coherence_decay(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!((markov_coherence_decay(1.0, 1.0, 1.0).unwrap() - E_INV).abs() < 1e-16);
        assert_eq!(markov_coherence_decay(0.0, 5.0, 3.0).unwrap(), 0.0);
        assert!((fractional_coherence_decay(1.0, 1.0, 1.0, 1.0).unwrap() - E_INV).abs() < 1e-16);
        assert!((fractional_coherence_decay(1.0, 1.0, 0.5, 1.0).unwrap() - ML_HALF_MINUS_ONE).abs() < 1e-14);
        let tail = fractional_coherence_decay(1.0, 1.0, 0.5, 1e4).unwrap();
        let lead = 1e-2 / std::f64::consts::PI.sqrt();
        assert!((tail / lead - 1.0).abs() < 0.01);
        for t in [0.0, 0.3, 2.0, 17.0] {
            let a = markov_coherence_decay(0.7, 1.3, t).unwrap();
            let b = fractional_coherence_decay(0.7, 1.3, 1.0, t).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn density_examples() {
        let ground = DensityMatrix::basis(2, 0);
        for t in [0.0, 0.5, 10.0] {
            assert_eq!(ad_density(&ground, params(1.0, 0.7), t).unwrap().matrix(), ground.matrix());
        }
        let late = ad_density(&DensityMatrix::plus(), params(1.0, 1.0), 60.0).unwrap();
        assert!((late.matrix() - ground.matrix()).norm() < 1e-12);
        let rho = ad_density(&DensityMatrix::plus(), params(1.0, 0.5), 1.0).unwrap();
        assert!((rho.get(1, 1).re - 0.213_792).abs() < 1e-6);
        // ½ E_{1/2}(−½) = ½ e^{1/4} erfc(½)
        assert!((rho.get(1, 0).re - 0.307_845).abs() < 1e-6);
        assert!((rho.trace() - c(1.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(AmplitudeDampingParams::new(0.0, 0.5).is_err());
        assert!(AmplitudeDampingParams::new(1.0, 1.01).is_err());
        assert!(ad_population(1.1, params(1.0, 0.5), 1.0).is_err());
        assert!(ad_population(0.5, params(1.0, 0.5), -1.0).is_err());
        assert!(ad_coherence(c(0.6, 0.0), params(1.0, 0.5), 1.0).is_err());
        assert!(markov_coherence_decay(-1.0, 1.0, 1.0).is_err());
        assert!(fractional_coherence_decay(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(ad_density(&DensityMatrix::maximally_mixed(3), params(1.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn zero_generator_gives_identity() {
        let zero = lindblad_superoperator(&LindbladModel::null(2));
        for (alpha, t) in [(0.3, 1.0), (1.0, 5.0), (0.8, 0.0)] {
            let p = matrix_ml(alpha, t, &zero).unwrap();
            assert!((p.matrix() - DMatrix::identity(4, 4)).norm() < 1e-14);
        }
        assert_eq!(matrix_ml(0.6, 0.0, &zero).unwrap(), MapMatrix::identity(2));
    }

    #[test]
    fn half_order_propagator_on_excited_state() {
        let gen = lindblad_superoperator(&LindbladModel::amplitude_damping(1.0));
        let p = matrix_ml(0.5, 1.0, &gen).unwrap();
        let out = p.apply(DensityMatrix::basis(2, 1).matrix()).unwrap();
        assert!((out[(1, 1)].re - ML_HALF_MINUS_ONE).abs() < 1e-10);
    }

    #[test]
    fn refuses_complex_or_defective_spectra() {
        // σ_z Hamiltonian: coherences rotate, eigenvalues ±2i
        let h = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let gen = lindblad_superoperator(&LindbladModel::new(h, vec![]).unwrap());
        assert!(matches!(matrix_ml(0.5, 1.0, &gen), Err(AnalyticError::ComplexSpectrum { .. })));
        // Jordan block
        let jordan = DMatrix::from_row_slice(
            4,
            4,
            &[
                c(-1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-2.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-3.0, 0.0),
            ],
        );
        let gen = MapMatrix::new(jordan, MapKind::Generator).unwrap();
        assert!(matches!(matrix_ml(0.5, 1.0, &gen), Err(AnalyticError::Defective { algebraic: 2, geometric: 1, .. })));
        assert!(matches!(matrix_ml(0.5, 1.0, &MapMatrix::identity(2)), Err(AnalyticError::NotAGenerator)));
    }
}
