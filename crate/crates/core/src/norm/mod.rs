//! Complex Minkowski norms on `g^{1,0}` and the Wirtinger differentiation
//! engine producing the fundamental and Cartan tensors.

pub mod io;
mod jet;
mod spec;
mod taylor;

pub use jet::{
    check_homogeneity, check_pseudoconvexity, euler_residuals, metric_jet, EulerResiduals, MetricJet,
    PseudoconvexityReport,
};
pub use spec::{CustomNorm, NormSpec, HERMITIAN_TOL};
pub use taylor::{DiffConfig, DiffMode};

pub(crate) use jet::{metric_jet_order, real_point, Fiber};
pub(crate) use taylor::real_taylor;

/// Jet invariants in dual mode.
pub const TOL_JET_DUAL: f64 = 1e-8;
/// Jet invariants in finite-difference mode.
pub const TOL_JET_FD: f64 = 1e-5;
