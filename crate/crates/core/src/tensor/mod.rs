//! States, operators and index bookkeeping for finite multipartite systems.

pub mod layout;
pub mod linalg;
pub mod op;
pub mod ops;
pub mod random;
pub mod spectral;
pub mod state;

pub use layout::{Subsystem, SystemLayout, DEFAULT_MAX_DIM, LABEL_A, LABEL_B, LABEL_M};
pub use linalg::{C64, CMatrix, CVector};
pub use op::{OpKind, QOp};
pub use spectral::{
    expm_hamiltonian, norms, operator_distance, relative_entropy, spectral_distance, spectral_norm,
    trace_distance, vn_entropy, Norms,
};
pub use state::{QState, DEFAULT_TOL};

/// Embed `op` into `target`; see [`QOp::embed`].
pub fn embed(op: &QOp, acting_on: &[&str], target: &SystemLayout) -> crate::Result<QOp> {
    op.embed(Some(acting_on), target)
}

pub fn partial_trace(state: &QState, keep: &[&str]) -> crate::Result<QState> {
    state.partial_trace(keep)
}

pub fn partial_transpose(state: &QState, on: &[&str]) -> crate::Result<CMatrix> {
    state.partial_transpose(on)
}
