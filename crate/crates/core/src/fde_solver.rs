//! Fractional Adams-Bashforth-Moulton integration of D^α y = M y (Caputo).
//!
//! On the uniform grid t_n = n h, h = t_max / N, one PECE step reads
//!
//! ```text
//! predictor  y^P_{n+1} = y₀ + 1/Γ(α) Σ_{j=0}^{n} b_{j,n+1} M y_j
//!            b_{j,n+1} = h^α/α [(n+1−j)^α − (n−j)^α]
//! corrector  y_{n+1}   = y₀ + h^α/Γ(α+2) [M y^P_{n+1} + Σ_{j=0}^{n} a_{j,n+1} M y_j]
//!            a_{0,n+1} = n^{α+1} − (n−α)(n+1)^α
//!            a_{j,n+1} = (n−j+2)^{α+1} + (n−j)^{α+1} − 2(n−j+1)^{α+1}
//! ```
//!
//! The whole history enters every step (O(N²) work). Every update is y₀
//! plus a linear combination of M y_j, so any linear functional annihilating
//! M (the trace, for a Lindblad generator) is conserved up to rounding.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::gamma::gamma;
use crate::quantum_ops::{l1_coherence, unvec, vec, DensityMatrix, MapMatrix, QuantumError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid problem: {field} {reason}")]
    InvalidProblem { field: &'static str, reason: String },
    #[error("non-finite value produced at step {step}")]
    NonFinite { step: usize },
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(&'static str),
    #[error("convergence study needs at least two strictly increasing step counts")]
    InvalidStudy,
    #[error("reference grid with {reference} steps does not contain the grid with {steps} steps")]
    IncompatibleGrids { steps: usize, reference: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Initial-value problem D^α y = M y, y(0) = vec(ρ₀), on [0, t_max].
#[derive(Debug, Clone)]
pub struct CaputoProblem {
    alpha: f64,
    generator: MapMatrix,
    y0: DVector<Complex64>,
    t_max: f64,
    steps: usize,
    memory_window: Option<usize>,
}

impl CaputoProblem {
    pub fn new(
        alpha: f64,
        generator: MapMatrix,
        rho0: &DensityMatrix,
        t_max: f64,
        steps: usize,
    ) -> Result<Self, SolverError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(SolverError::InvalidProblem { field: "alpha", reason: format!("{alpha} not in (0, 1]") });
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(SolverError::InvalidProblem { field: "t_max", reason: format!("{t_max} must be positive") });
        }
        if steps == 0 {
            return Err(SolverError::InvalidProblem { field: "steps", reason: "must be at least 1".into() });
        }
        if rho0.dim() != generator.dim() {
            return Err(QuantumError::DimensionMismatch { expected: generator.dim(), found: rho0.dim() }.into());
        }
        Ok(Self { alpha, generator, y0: vec(rho0.matrix()), t_max, steps, memory_window: None })
    }

    /// Short-memory truncation: only the most recent `window` history terms
    /// enter each step. Off by default; it distorts the long-time tail.
    pub fn with_memory_window(mut self, window: usize) -> Result<Self, SolverError> {
        if window == 0 {
            return Err(SolverError::InvalidProblem { field: "memory_window", reason: "must be at least 1".into() });
        }
        self.memory_window = Some(window);
        Ok(self)
    }

    /// Same problem on a different grid.
    pub fn with_steps(&self, steps: usize) -> Result<Self, SolverError> {
        if steps == 0 {
            return Err(SolverError::InvalidProblem { field: "steps", reason: "must be at least 1".into() });
        }
        Ok(Self { steps, ..self.clone() })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn generator(&self) -> &MapMatrix {
        &self.generator
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn step_size(&self) -> f64 {
        self.t_max / self.steps as f64
    }

    pub fn initial_state(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(unvec(&self.y0, self.dim()))
    }
}

/// Sampled states ρ(t_n) with derived scalar series.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    series: BTreeMap<&'static str, Vec<f64>>,
}

impl Trajectory {
    /// `times` must start at 0 and increase strictly.
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self, SolverError> {
        if times.is_empty() || times.len() != states.len() {
            return Err(SolverError::InvalidTrajectory("times and states must be nonempty and of equal length"));
        }
        if times[0] != 0.0 {
            return Err(SolverError::InvalidTrajectory("times must start at 0"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SolverError::InvalidTrajectory("times must increase strictly"));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(SolverError::InvalidTrajectory("states must share one dimension"));
        }
        let mut series = BTreeMap::new();
        series.insert("rho00", states.iter().map(|s| s.get(0, 0).re).collect());
        if dim >= 2 {
            series.insert("rho11", states.iter().map(|s| s.get(1, 1).re).collect());
        }
        series.insert("c_l1", states.iter().map(l1_coherence).collect());
        let one = Complex64::new(1.0, 0.0);
        series.insert("trace_defect", states.iter().map(|s| (s.trace() - one).norm()).collect());
        Ok(Self { times, states, series })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// Named series: `rho00`, `rho11` (d ≥ 2), `c_l1`, `trace_defect`.
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.get(name).map(Vec::as_slice)
    }

    pub fn series_names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.series.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is nonempty")
    }
}

/// History weights, depending only on k = n − j.
struct Weights {
    predictor: Vec<f64>,
    corrector: Vec<f64>,
}

impl Weights {
    fn new(alpha: f64, steps: usize) -> Self {
        let a1 = alpha + 1.0;
        // b_k = (k+1)^α − k^α,  a_k = (k+2)^{α+1} + k^{α+1} − 2(k+1)^{α+1}
        let predictor = (0..steps).map(|k| (k as f64 + 1.0).powf(alpha) - (k as f64).powf(alpha)).collect();
        let corrector = (0..steps)
            .map(|k| {
                let k = k as f64;
                (k + 2.0).powf(a1) + k.powf(a1) - 2.0 * (k + 1.0).powf(a1)
            })
            .collect();
        Self { predictor, corrector }
    }

    /// a_{0,n+1}
    fn corrector_start(alpha: f64, n: usize) -> f64 {
        let n = n as f64;
        n.powf(alpha + 1.0) - (n - alpha) * (n + 1.0).powf(alpha)
    }
}

/// Integrates the problem, returning all N + 1 states.
pub fn solve(problem: &CaputoProblem) -> Result<Trajectory, SolverError> {
    let alpha = problem.alpha;
    let n_steps = problem.steps;
    let h = problem.step_size();
    let m = problem.generator.matrix();
    let y0 = &problem.y0;
    let weights = Weights::new(alpha, n_steps);
    let h_alpha = h.powf(alpha);
    let predictor_scale = Complex64::new(h_alpha / (alpha * gamma(alpha)), 0.0);
    let corrector_scale = Complex64::new(h_alpha / gamma(alpha + 2.0), 0.0);

    let mut ys: Vec<DVector<Complex64>> = Vec::with_capacity(n_steps + 1);
    let mut fs: Vec<DVector<Complex64>> = Vec::with_capacity(n_steps + 1);
    ys.push(y0.clone());
    fs.push(m * y0);

    let dim2 = y0.len();
    let mut pred_sum = DVector::<Complex64>::zeros(dim2);
    let mut corr_sum = DVector::<Complex64>::zeros(dim2);
    for n in 0..n_steps {
        let first = match problem.memory_window {
            Some(w) => (n + 1).saturating_sub(w),
            None => 0,
        };
        pred_sum.fill(Complex64::new(0.0, 0.0));
        corr_sum.fill(Complex64::new(0.0, 0.0));
        for (j, f) in fs.iter().enumerate().take(n + 1).skip(first) {
            let k = n - j;
            let b = weights.predictor[k];
            let a = if j == 0 { Weights::corrector_start(alpha, n) } else { weights.corrector[k] };
            pred_sum.axpy(Complex64::new(b, 0.0), f, Complex64::new(1.0, 0.0));
            corr_sum.axpy(Complex64::new(a, 0.0), f, Complex64::new(1.0, 0.0));
        }
        let y_pred = y0 + &pred_sum * predictor_scale;
        let f_pred = m * &y_pred;
        let y_next = y0 + (f_pred + &corr_sum) * corrector_scale;
        if y_next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SolverError::NonFinite { step: n + 1 });
        }
        fs.push(m * &y_next);
        ys.push(y_next);
    }

    let dim = problem.dim();
    let times = (0..=n_steps).map(|n| if n == n_steps { problem.t_max } else { n as f64 * h }).collect();
    let states = ys.iter().map(|y| DensityMatrix::from_matrix_unchecked(unvec(y, dim))).collect();
    Trajectory::new(times, states)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub max_error: f64,
    /// error(previous N) / error(this N)
    pub ratio: Option<f64>,
    /// log2(ratio) / log2(N / previous N)
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn errors_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_error < w[0].max_error)
    }
}

fn max_element_error(traj: &Trajectory, reference: impl Fn(usize, f64) -> DMatrix<Complex64>) -> f64 {
    traj.times()
        .iter()
        .zip(traj.states())
        .enumerate()
        .map(|(n, (&t, s))| (s.matrix() - reference(n, t)).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// Max-over-grid element errors for each step count.
///
/// With `reference = Some(f)`, errors are measured against f(t). Otherwise a
/// reference run with four times the largest step count is used; each
/// step count must then divide that reference count.
pub fn convergence_study(
    problem: &CaputoProblem,
    step_counts: &[usize],
    reference: Option<&dyn Fn(f64) -> DMatrix<Complex64>>,
) -> Result<ConvergenceTable, SolverError> {
    if step_counts.len() < 2 || step_counts.windows(2).any(|w| w[1] <= w[0]) || step_counts[0] == 0 {
        return Err(SolverError::InvalidStudy);
    }
    let fine = match reference {
        Some(_) => None,
        None => {
            let n_ref = 4 * step_counts[step_counts.len() - 1];
            if let Some(&bad) = step_counts.iter().find(|&&n| !n_ref.is_multiple_of(n)) {
                return Err(SolverError::IncompatibleGrids { steps: bad, reference: n_ref });
            }
            Some(solve(&problem.with_steps(n_ref)?)?)
        }
    };
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(step_counts.len());
    for &n in step_counts {
        let traj = solve(&problem.with_steps(n)?)?;
        let max_error = match (reference, &fine) {
            (Some(f), _) => max_element_error(&traj, |_, t| f(t)),
            (None, Some(fine)) => {
                let stride = fine.len().saturating_sub(1) / n;
                max_element_error(&traj, |k, _| fine.states()[k * stride].matrix().clone())
            }
            (None, None) => unreachable!(),
        };
        let (ratio, order) = match rows.last() {
            Some(prev) => {
                let ratio = prev.max_error / max_error;
                (Some(ratio), Some(ratio.log2() / (n as f64 / prev.steps as f64).log2()))
            }
            None => (None, None),
        };
        rows.push(ConvergenceRow { steps: n, max_error, ratio, order });
    }
    Ok(ConvergenceTable { rows })
}
