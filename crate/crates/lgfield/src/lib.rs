//! Two-time quasi-probability engine for a spatially coarse-grained Gaussian
//! quantum field, and scanning of parameter planes for regions where the
//! two-time Leggett-Garg inequalities are violated (`q < 0`).
//!
//! A dichotomic variable is read off a field smeared with a Gaussian window
//! of width `L`, either by its sign relative to a reference trajectory or by
//! membership of the band `|field| > w`. For Gaussian states (coherent,
//! uniformly squeezed, or both) the two-time quasi-probability
//! `q_{s1,s2}(t1,t2) = Re Tr[P_{s2}(t2) P_{s1}(t1) rho]` reduces to quadrant
//! integrals of a complex-covariance bivariate Gaussian whose kernels have
//! closed forms in the complex error function.
//!
//! Crate layout:
//!
//! * [`specfun`] — complex error-function family (`erf`, `erfc`, Faddeeva
//!   `w`) with certified accuracy;
//! * [`quadrature`] — adaptive Gauss–Kronrod rules (1D and tensor 2D) for
//!   complex-valued integrands;
//! * [`kernels`] — field models, Gaussian state parameters, closed-form
//!   correlation kernels and their direct mode-integral oracle;
//! * [`quasiprob`] — the quasi-probability engines (Cartesian quadrature,
//!   polar reduction, window-band assembly) and the two-time correlators;
//! * [`oracle`] — slow independent validators: orthant-probability closed
//!   form and a finite-mode discretized-field rebuild of `q`;
//! * [`scanner`] — deterministic (optionally rayon-parallel) 2D parameter
//!   scans with violation-region summaries;
//! * [`verify`] — the self-check suite exposed by the CLI.
//!
//! With the default `parallel` feature, grid scans fan out over rayon;
//! disabling it leaves a sequential fallback with bit-identical results.

pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod quasiprob;
pub mod scanner;
pub mod specfun;
pub mod verify;

pub use kernels::{FieldModel, FieldVariant, KernelSet, StateSpec};

/// Pin the number of worker threads used by parallel scans. Call once,
/// before the first scan; later calls report an error from the underlying
/// pool. Without the `parallel` feature this always errors.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) -> Result<(), String> {
    Err("this build has no `parallel` feature; scans run sequentially".into())
}
pub use quasiprob::{
    Engine, EngineUsed, ProjectionScheme, QuadratureConfig, QuasiProbQuery, QuasiProbResult,
    Reference, Sign,
};
pub use scanner::{AxisSpec, ScanBase, ScanGrid, ScanParameter};
