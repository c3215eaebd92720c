use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{check_square, hermiticity_defect, unvec, vec};
use super::{QuantumError, STATE_TOLERANCE};

/// Hamiltonian plus jump operators; rates are folded into the jump
/// operators (L = √γ σ₋ for amplitude damping).
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    hamiltonian: DMatrix<Complex64>,
    jump_ops: Vec<DMatrix<Complex64>>,
}

impl LindbladModel {
    pub fn new(hamiltonian: DMatrix<Complex64>, jump_ops: Vec<DMatrix<Complex64>>) -> Result<Self, QuantumError> {
        let dim = check_square(&hamiltonian)?;
        let herm = hermiticity_defect(&hamiltonian);
        if herm > STATE_TOLERANCE {
            return Err(QuantumError::NotHermitian(herm));
        }
        for op in &jump_ops {
            let found = check_square(op)?;
            if found != dim {
                return Err(QuantumError::DimensionMismatch { expected: dim, found });
            }
        }
        Ok(Self { hamiltonian, jump_ops })
    }

    /// No Hamiltonian, no dissipation.
    pub fn null(dim: usize) -> Self {
        Self { hamiltonian: DMatrix::zeros(dim, dim), jump_ops: Vec::new() }
    }

    /// Qubit amplitude damping at rate γ: H = 0, L = √γ |0⟩⟨1|.
    ///
    /// Basis order is (|0⟩ ground, |1⟩ excited).
    pub fn amplitude_damping(gamma: f64) -> Self {
        let mut lowering = DMatrix::zeros(2, 2);
        lowering[(0, 1)] = Complex64::new(gamma.sqrt(), 0.0);
        Self { hamiltonian: DMatrix::zeros(2, 2), jump_ops: vec![lowering] }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hamiltonian
    }

    pub fn jump_ops(&self) -> &[DMatrix<Complex64>] {
        &self.jump_ops
    }
}

/// Whether a [`MapMatrix`] is a generator (trace-annihilating) or a
/// propagator (trace-preserving dynamical map).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Generator,
    Propagator,
}

/// A d²×d² matrix acting on column-stacked vectorized d×d matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MapMatrix {
    dim: usize,
    kind: MapKind,
    entries: DMatrix<Complex64>,
}

impl MapMatrix {
    pub fn new(entries: DMatrix<Complex64>, kind: MapKind) -> Result<Self, QuantumError> {
        let side = check_square(&entries)?;
        let dim = (side as f64).sqrt().round() as usize;
        if dim * dim != side {
            return Err(QuantumError::NotPerfectSquare(side));
        }
        Ok(Self { dim, kind, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kind: MapKind::Propagator, entries: DMatrix::identity(dim * dim, dim * dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Applies the map to a d×d matrix.
    pub fn apply(&self, x: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, QuantumError> {
        let found = check_square(x)?;
        if found != self.dim {
            return Err(QuantumError::DimensionMismatch { expected: self.dim, found });
        }
        Ok(unvec(&(&self.entries * vec(x)), self.dim))
    }

    /// Row vector vec(I)† · M; zero for a trace-annihilating generator.
    pub fn trace_functional(&self) -> DVector<Complex64> {
        let id = vec(&DMatrix::identity(self.dim, self.dim));
        (id.adjoint() * &self.entries).transpose()
    }
}

/// −i[H, ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}).
pub fn lindblad_apply(model: &LindbladModel, rho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, QuantumError> {
    let found = check_square(rho)?;
    if found != model.dim() {
        return Err(QuantumError::DimensionMismatch { expected: model.dim(), found });
    }
    let h = model.hamiltonian();
    let minus_i = Complex64::new(0.0, -1.0);
    let half = Complex64::new(0.5, 0.0);
    let mut out = (h * rho - rho * h) * minus_i;
    for l in model.jump_ops() {
        let l_dag = l.adjoint();
        let l_dag_l = &l_dag * l;
        out += l * rho * &l_dag - (&l_dag_l * rho + rho * &l_dag_l) * half;
    }
    Ok(out)
}

/// Matrix of the Lindblad generator in the column-stacking convention:
///
/// −i(I⊗H − Hᵀ⊗I) + Σ_k [conj(L_k)⊗L_k − ½ I⊗(L_k†L_k) − ½ (L_k†L_k)ᵀ⊗I]
pub fn lindblad_superoperator(model: &LindbladModel) -> MapMatrix {
    let d = model.dim();
    let id = DMatrix::<Complex64>::identity(d, d);
    let h = model.hamiltonian();
    let minus_i = Complex64::new(0.0, -1.0);
    let half = Complex64::new(0.5, 0.0);
    let mut m = (id.kronecker(h) - h.transpose().kronecker(&id)) * minus_i;
    for l in model.jump_ops() {
        let l_dag_l = l.adjoint() * l;
        m += l.conjugate().kronecker(l) - (id.kronecker(&l_dag_l) + l_dag_l.transpose().kronecker(&id)) * half;
    }
    MapMatrix { dim: d, kind: MapKind::Generator, entries: m }
}
