//! Slow, independent validators for the fast paths.
//!
//! * [`orthant_q`] — the zero-mean quadrant probability in closed form,
//!   `Re[1/4 + arcsin(s1 s2 b / sqrt(a1 a2)) / 2 pi]`, analytically
//!   continued to complex covariance. Checks both quadrature engines.
//! * [`DiscretizedField`] / [`discretized_q`] — rebuilds the kernels as
//!   finite midpoint sums over field modes (a bank of discrete harmonic
//!   modes, each displaced/squeezed like the continuum state) and pushes
//!   them through the same engines. Convergence towards the continuum value
//!   under mode refinement validates the whole pipeline end to end.
//!
//! Shipped (not test-only) so the command-line `verify` subcommand can run
//! the full suite in the field.

use crate::kernels::{coherent_mean, DomainError, FieldModel, FieldVariant, KernelSet, StateSpec};
use crate::quasiprob::{
    qp_sign_cartesian, qp_sign_polar, qp_window, Engine, ProjectionScheme, QuadratureConfig,
    QuasiProbError, QuasiProbQuery, Sign,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OrthantError {
    /// `b^2` is within rounding of `a1 a2`: the correlation is degenerate
    /// and the arcsin branch is ambiguous.
    #[error("degenerate correlation: |b^2/(a1 a2) - 1| < 1e-12")]
    BranchAmbiguity,
}

/// Zero-mean quadrant probability for covariance `[[a1, b], [b, a2]]` and
/// signs `(s1, s2)`.
pub fn orthant_q(
    a1: Complex64,
    a2: Complex64,
    b: Complex64,
    s1: Sign,
    s2: Sign,
) -> Result<f64, OrthantError> {
    let ratio = b * b / (a1 * a2);
    if (ratio - 1.0).norm() < 1e-12 {
        return Err(OrthantError::BranchAmbiguity);
    }
    let rho = b * (s1.value() * s2.value()) / (a1 * a2).sqrt();
    Ok((Complex64::new(0.25, 0.0) + rho.asin() / (2.0 * PI)).re)
}

/// Midpoint discretization of the radial mode measure: nodes
/// `k_j = (j + 1/2) k_max / n`, weights carrying the window, the mode
/// density and the model normalisation so that sums reproduce the continuum
/// integrals as `n -> inf`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscretizedField {
    n_modes: usize,
    k_max: f64,
    /// Mode spacing (the box normalisation constant).
    spacing: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscretizedField {
    pub fn new(model: &FieldModel, n_modes: usize, k_max: f64) -> Result<Self, DomainError> {
        if n_modes < 2 {
            return Err(DomainError(format!(
                "discretization.n_modes must be >= 2 (got {n_modes})"
            )));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(DomainError(format!(
                "discretization.k_max must be finite and > 0 (got {k_max})"
            )));
        }
        let h = k_max / n_modes as f64;
        let l = model.coarse_length();
        let norm = match model.variant() {
            FieldVariant::Scalar3d => 1.0 / (4.0 * PI * PI),
            FieldVariant::Chiral1d => 1.0 / (4.0 * PI),
        };
        let mut nodes = Vec::with_capacity(n_modes);
        let mut weights = Vec::with_capacity(n_modes);
        for j in 0..n_modes {
            let k = (j as f64 + 0.5) * h;
            nodes.push(k);
            weights.push(h * k * (-l * l * k * k / 2.0).exp() * norm);
        }
        Ok(DiscretizedField {
            n_modes,
            k_max,
            spacing: h,
            nodes,
            weights,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
    pub fn k_max(&self) -> f64 {
        self.k_max
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Kernels as finite sums over the mode bank.
    pub fn kernels(&self, model: &FieldModel, state: &StateSpec, t1: f64, t2: f64) -> KernelSet {
        let r = state.r();
        let th = state.theta();
        let c2r = (2.0 * r).cosh();
        let s2r = (2.0 * r).sinh();
        let ch2 = r.cosh() * r.cosh();
        let sh2 = r.sinh() * r.sinh();
        let mut a1 = 0.0;
        let mut a2 = 0.0;
        let mut b = Complex64::new(0.0, 0.0);
        let dt = t2 - t1;
        let ts = t1 + t2;
        for (&k, &w) in self.nodes.iter().zip(&self.weights) {
            a1 += w * (c2r - s2r * (2.0 * k * t1 - th).cos());
            a2 += w * (c2r - s2r * (2.0 * k * t2 - th).cos());
            let osc = Complex64::new(0.0, -k * dt).exp();
            b += (osc * ch2 + osc.conj() * sh2 - Complex64::new(s2r * (k * ts - th).cos(), 0.0))
                * w;
        }
        KernelSet::from_parts(
            Complex64::new(a1, 0.0),
            Complex64::new(a2, 0.0),
            b,
            coherent_mean(model, state, t1),
            coherent_mean(model, state, t2),
        )
    }
}

/// Quasi-probability evaluated on the discretized field: finite-sum kernels
/// pushed through the regular engines.
pub fn discretized_q(
    field: &DiscretizedField,
    model: &FieldModel,
    state: &StateSpec,
    scheme: &ProjectionScheme,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<f64, QuasiProbError> {
    let ks = field.kernels(model, state, query.t1, query.t2);
    match scheme {
        ProjectionScheme::SignThreshold { reference: _ } => {
            // only the zero reference is meaningful on the synthetic bank;
            // the coherent drift is already carried by e1/e2
            let res = match cfg.engine {
                Engine::Cartesian => qp_sign_cartesian(&ks, query, cfg)?,
                _ => qp_sign_polar(&ks, query, cfg)?,
            };
            Ok(res.q)
        }
        ProjectionScheme::WindowBand { w } => Ok(qp_window(&ks, *w, query, cfg)?.q),
    }
}
