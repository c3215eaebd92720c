#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analytic;
pub mod cli;
pub mod fde_solver;
mod gamma;
pub mod mlf;
pub mod plot;
mod quad;
pub mod quantum_ops;
