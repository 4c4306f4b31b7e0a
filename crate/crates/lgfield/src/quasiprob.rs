//! Two-time quasi-probability `q_{s1,s2}(t1, t2)` of the dichotomic variable.
//!
//! After the Gaussian momentum integrals are done analytically, every scheme
//! reduces to quadrant integrals of a bivariate Gaussian with *complex*
//! covariance `[[a1, bt], [bt, a2]]` (`bt = s1 s2 b`) and real means:
//!
//! * sign-threshold: one quadrant block with means `(s1 m1, s2 m2)`,
//!   `m_i = E(t_i) - phi(t_i)`;
//! * window-band: two quadrant blocks (correlation `+bt` and `-bt`, means
//!   `(-s1 w, -s2 w)`), two one-dimensional complementary-error marginals
//!   and a constant.
//!
//! Quadrant blocks are evaluated by two independent routes:
//!
//! * **Cartesian** — adaptive tensor Gauss–Kronrod over the truncated
//!   quadrant, a direct transcription of the double integral;
//! * **Polar** — the radial integral is done in closed form, leaving a
//!   single smooth integral over the quadrant angle whose integrand needs
//!   `erfcx` at complex argument.
//!
//! Both use the principal square root of `det = a1 a2 - b^2`. Whenever the
//! real part of the covariance is positive definite (every Gaussian state
//! produces this), `det` stays off the negative real axis, so the principal
//! branch is the analytic continuation from the real-covariance limit and
//! `Re sqrt(det) > 0` automatically; no branch tracking is required.
//!
//! `Re[...]` is applied once, to the fully assembled complex value; the
//! discarded imaginary part is reported as `residual_imag`.

use crate::kernels::{self, DomainError, FieldModel, KernelSet, StateSpec};
use crate::quadrature::{adaptive_gk, adaptive_gk_2d, QuadratureFailure};
use crate::specfun::{self, SpecFunError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// A measurement outcome label, strictly `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];
}

impl TryFrom<i8> for Sign {
    type Error = DomainError;
    fn try_from(v: i8) -> Result<Self, DomainError> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(DomainError(format!(
                "query.s must be +1 or -1 (got {other})"
            ))),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Reference trajectory `phi(t)` subtracted from the smeared field before
/// taking the sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `phi(t) = 0`.
    Zero,
    /// `phi(t) = -E(t)` with `E` the coherent drift of the configured state.
    MinusE,
    /// Explicit values at the two query times only.
    Tabulated { phi1: f64, phi2: f64 },
}

impl Reference {
    fn phi(&self, model: &FieldModel, state: &StateSpec, t: f64, second: bool) -> f64 {
        match self {
            Reference::Zero => 0.0,
            Reference::MinusE => -kernels::coherent_mean(model, state, t),
            Reference::Tabulated { phi1, phi2 } => {
                if second {
                    *phi2
                } else {
                    *phi1
                }
            }
        }
    }
}

/// How the +/-1 variable is read off the smeared field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum ProjectionScheme {
    /// `Q = sgn(field - phi(t))`.
    SignThreshold { reference: Reference },
    /// `Q = +1` iff `|field| > w`.
    WindowBand { w: f64 },
}

impl ProjectionScheme {
    pub fn sign_zero() -> Self {
        ProjectionScheme::SignThreshold {
            reference: Reference::Zero,
        }
    }

    pub fn window(w: f64) -> Result<Self, DomainError> {
        if !(w.is_finite() && w >= 0.0) {
            return Err(DomainError(format!(
                "scheme.w must be finite and >= 0 (got {w})"
            )));
        }
        Ok(ProjectionScheme::WindowBand { w })
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if let ProjectionScheme::WindowBand { w } = self {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(DomainError(format!(
                    "scheme.w must be finite and >= 0 (got {w})"
                )));
            }
        }
        Ok(())
    }
}

/// The `(s1, s2, t1, t2)` tuple a single evaluation answers for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiProbQuery {
    pub s1: Sign,
    pub s2: Sign,
    pub t1: f64,
    pub t2: f64,
}

impl QuasiProbQuery {
    pub fn new(s1: Sign, s2: Sign, t1: f64, t2: f64) -> Result<Self, DomainError> {
        for (name, t) in [("query.t1", t1), ("query.t2", t2)] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(DomainError(format!(
                    "{name} must be finite and >= 0 (got {t})"
                )));
            }
        }
        Ok(QuasiProbQuery { s1, s2, t1, t2 })
    }
}

/// Quadrant-integration engine selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Cartesian,
    Polar,
    #[default]
    Auto,
}

/// Engine tolerances and guards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub engine: Engine,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Semi-infinite integrals are cut at this many Gaussian widths (plus
    /// the mean offset).
    pub trunc_sigmas: f64,
    /// Panel budget for adaptive refinement.
    pub max_subdiv: usize,
    /// Degeneracy threshold: the kernel determinant is considered singular
    /// when `|det| <= eps_det * |a1| |a2|`.
    pub eps_det: f64,
    /// Evaluate singular (coincident-time) queries at `t2 = t1 ± 1e-4 L`
    /// instead of failing.
    pub degenerate_shift: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            engine: Engine::Auto,
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            trunc_sigmas: 12.0,
            max_subdiv: 1 << 14,
            eps_det: 1e-12,
            degenerate_shift: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), DomainError> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.trunc_sigmas >= 6.0
            && self.max_subdiv >= 4
            && self.eps_det > 0.0;
        if ok {
            Ok(())
        } else {
            Err(DomainError(
                "quadrature config: tolerances must be > 0, trunc_sigmas >= 6, \
                 max_subdiv >= 4, eps_det > 0"
                    .into(),
            ))
        }
    }
}

/// Which evaluation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineUsed {
    Cartesian,
    Polar,
    WindowPolar,
    WindowCartesian,
    /// Coincident-time query answered at `t2 = t1 ± 1e-4 L`.
    DegenerateLimit,
}

/// A quasi-probability value with its numerical provenance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuasiProbResult {
    pub q: f64,
    pub est_error: f64,
    /// Imaginary part of the assembled expression before the final `Re`.
    pub residual_imag: f64,
    pub engine_used: EngineUsed,
    pub kernels: KernelSet,
}

#[derive(Debug, Clone, Error)]
pub enum QuasiProbError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
    #[error("kernel determinant is degenerate (coincident times) and the shifted evaluation is disabled")]
    DegenerateKernel,
    #[error("special function: {0}")]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("non-finite value produced by the {0} engine")]
    NonFinite(&'static str),
}

// ---------------------------------------------------------------------------
// Quadrant blocks
// ---------------------------------------------------------------------------

/// Quadrant integral of the complex-covariance Gaussian,
/// `(1/(2 pi sqrt(det))) int_0^inf int_0^inf exp(-Q(c)/2 det) dc1 dc2`
/// with `Q(c) = a2 (c1-mu1)^2 - 2 bt (c1-mu1)(c2-mu2) + a1 (c2-mu2)^2`,
/// via the polar reduction: the radial integral in closed form, the angle
/// integral adaptively.
fn quadrant_polar(
    a1: Complex64,
    a2: Complex64,
    bt: Complex64,
    mu1: f64,
    mu2: f64,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64), QuasiProbError> {
    let det = a1 * a2 - bt * bt;
    let sdet = det.sqrt(); // principal; Re > 0 on the physical domain
    let pref = 1.0 / (2.0 * PI * sdet);
    let kq = a2 * (mu1 * mu1) - bt * (2.0 * mu1 * mu2) + a1 * (mu2 * mu2);
    let k_over = kq / (2.0 * det);
    let ek = (-k_over).exp();
    if !ek.re.is_finite() || !ek.im.is_finite() {
        return Err(QuasiProbError::NonFinite("polar"));
    }
    let h1 = a2 * mu1 - bt * mu2;
    let h2 = a1 * mu2 - bt * mu1;
    let integrand = move |u: f64| {
        let (s, c) = u.sin_cos();
        let g = a2 * (c * c) + a1 * (s * s) - bt * (2.0 * s * c);
        let p = g / (2.0 * det);
        let sp = p.sqrt();
        let h = h1 * c + h2 * s;
        let ql = h / det;
        let zeta = -ql / (2.0 * sp);
        // exp(-K/2det) erfcx(zeta) without the inf*0 of the two factors:
        // when the mean sits deep inside the quadrant (Re zeta < 0), fold
        // the exponents using zeta^2 - K/(2 det) = -d^2/(2 g) with
        // d = mu1 sin u - mu2 cos u (a Gram identity; d is real).
        let scaled_erfc = if zeta.re < 0.0 {
            let d = mu1 * s - mu2 * c;
            2.0 * (-(d * d) / (2.0 * g)).exp() - ek * specfun::erfcx(-zeta)
        } else {
            ek * specfun::erfcx(zeta)
        };
        ek * (0.5 / p) + ql * PI.sqrt() / (4.0 * p * sp) * scaled_erfc
    };
    let out = adaptive_gk(
        integrand,
        0.0,
        PI / 2.0,
        cfg.abs_tol / pref.norm(),
        cfg.rel_tol,
        cfg.max_subdiv,
    )?;
    let value = pref * out.value;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(QuasiProbError::NonFinite("polar"));
    }
    Ok((value, pref.norm() * out.est_error))
}

/// Same quadrant integral by direct 2D adaptive quadrature over the
/// truncated quadrant; the independent cross-check of the polar route.
fn quadrant_cartesian(
    a1: Complex64,
    a2: Complex64,
    bt: Complex64,
    mu1: f64,
    mu2: f64,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64), QuasiProbError> {
    let det = a1 * a2 - bt * bt;
    let sdet = det.sqrt();
    let pref = 1.0 / (2.0 * PI * sdet);
    let u1 = cfg.trunc_sigmas * a1.norm().sqrt() + mu1.max(0.0);
    let u2 = cfg.trunc_sigmas * a2.norm().sqrt() + mu2.max(0.0);
    let inv2det = 0.5 / det;
    let f = move |c1: f64, c2: f64| {
        let d1 = c1 - mu1;
        let d2 = c2 - mu2;
        let q = a2 * (d1 * d1) - bt * (2.0 * d1 * d2) + a1 * (d2 * d2);
        (-q * inv2det).exp()
    };
    let out = adaptive_gk_2d(
        f,
        (0.0, u1),
        (0.0, u2),
        cfg.abs_tol / pref.norm(),
        cfg.rel_tol,
        cfg.max_subdiv,
    )?;
    let value = pref * out.value;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(QuasiProbError::NonFinite("cartesian"));
    }
    // truncated tail, bounded by the slowest decay direction of the quadrant
    let ts = cfg.trunc_sigmas;
    let tail = pref.norm() * u1 * u2 * (-0.25 * ts * ts).exp();
    Ok((value, pref.norm() * out.est_error + tail))
}

// ---------------------------------------------------------------------------
// Engines
// ---------------------------------------------------------------------------

fn sign_result(
    kernels: &KernelSet,
    query: &QuasiProbQuery,
    value: Complex64,
    est: f64,
    engine: EngineUsed,
) -> QuasiProbResult {
    let _ = query;
    QuasiProbResult {
        q: value.re,
        est_error: est,
        residual_imag: value.im,
        engine_used: engine,
        kernels: *kernels,
    }
}

/// Sign-scheme quasi-probability by direct 2D quadrature. The kernel set's
/// `e1`, `e2` are taken as the effective means `E(t) - phi(t)`.
pub fn qp_sign_cartesian(
    kernels: &KernelSet,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<QuasiProbResult, QuasiProbError> {
    let (s1, s2) = (query.s1.value(), query.s2.value());
    let bt = kernels.b * (s1 * s2);
    let (v, e) = quadrant_cartesian(
        kernels.a1,
        kernels.a2,
        bt,
        s1 * kernels.e1,
        s2 * kernels.e2,
        cfg,
    )?;
    Ok(sign_result(kernels, query, v, e, EngineUsed::Cartesian))
}

/// Sign-scheme quasi-probability through the polar reduction.
pub fn qp_sign_polar(
    kernels: &KernelSet,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<QuasiProbResult, QuasiProbError> {
    let (s1, s2) = (query.s1.value(), query.s2.value());
    let bt = kernels.b * (s1 * s2);
    let (v, e) = quadrant_polar(
        kernels.a1,
        kernels.a2,
        bt,
        s1 * kernels.e1,
        s2 * kernels.e2,
        cfg,
    )?;
    Ok(sign_result(kernels, query, v, e, EngineUsed::Polar))
}

/// Window-band quasi-probability: two quadrant blocks (`±bt`, means
/// `(-s1 w, -s2 w)`, each entering twice), the two one-time marginals and
/// the constant term, assembled complex with a single final `Re`.
pub fn qp_window(
    kernels: &KernelSet,
    w: f64,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<QuasiProbResult, QuasiProbError> {
    if !(w.is_finite() && w >= 0.0) {
        return Err(DomainError(format!("scheme.w must be finite and >= 0 (got {w})")).into());
    }
    let (s1, s2) = (query.s1.value(), query.s2.value());
    let bt = kernels.b * (s1 * s2);
    let (mu1, mu2) = (-s1 * w, -s2 * w);
    let quadrant = match cfg.engine {
        Engine::Cartesian => quadrant_cartesian,
        _ => quadrant_polar,
    };
    let (bp, ep) = quadrant(kernels.a1, kernels.a2, bt, mu1, mu2, cfg)?;
    let (bm, em) = quadrant(kernels.a1, kernels.a2, -bt, mu1, mu2, cfg)?;
    let m1 = specfun::erfc(Complex64::new(s1 * w, 0.0) / (2.0 * kernels.a1).sqrt())?;
    let m2 = specfun::erfc(Complex64::new(s2 * w, 0.0) / (2.0 * kernels.a2).sqrt())?;
    let value = 2.0 * (bp + bm)
        + 0.5 * (s2 - 1.0) * m1
        + 0.5 * (s1 - 1.0) * m2
        + 0.25 * (s1 - 1.0) * (s2 - 1.0);
    let engine = match cfg.engine {
        Engine::Cartesian => EngineUsed::WindowCartesian,
        _ => EngineUsed::WindowPolar,
    };
    Ok(QuasiProbResult {
        q: value.re,
        est_error: 2.0 * (ep + em) + 4.0 * f64::EPSILON,
        residual_imag: value.im,
        engine_used: engine,
        kernels: *kernels,
    })
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn dispatch(
    model: &FieldModel,
    state: &StateSpec,
    scheme: &ProjectionScheme,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<QuasiProbResult, QuasiProbError> {
    let ks = kernels::kernel_set(model, state, query.t1, query.t2);
    match scheme {
        ProjectionScheme::SignThreshold { reference } => {
            let m1 = ks.e1 - reference.phi(model, state, query.t1, false);
            let m2 = ks.e2 - reference.phi(model, state, query.t2, true);
            let eff = KernelSet { e1: m1, e2: m2, ..ks };
            match cfg.engine {
                Engine::Cartesian => qp_sign_cartesian(&eff, query, cfg),
                Engine::Polar | Engine::Auto => qp_sign_polar(&eff, query, cfg),
            }
        }
        ProjectionScheme::WindowBand { w } => qp_window(&ks, *w, query, cfg),
    }
}

/// Evaluate `q_{s1,s2}(t1, t2)` for the configured model, state and scheme.
///
/// Coincident times make the covariance block singular while the physical
/// limit stays finite; by default such queries are answered at
/// `t2 = t1 ± 1e-4 L` and tagged [`EngineUsed::DegenerateLimit`]. With
/// `cfg.degenerate_shift` disabled they fail with
/// [`QuasiProbError::DegenerateKernel`].
pub fn quasi_prob(
    model: &FieldModel,
    state: &StateSpec,
    scheme: &ProjectionScheme,
    query: &QuasiProbQuery,
    cfg: &QuadratureConfig,
) -> Result<QuasiProbResult, QuasiProbError> {
    cfg.validate()?;
    scheme.validate()?;
    let ks = kernels::kernel_set(model, state, query.t1, query.t2);
    let scale = ks.a1.norm() * ks.a2.norm();
    if ks.det.norm() <= cfg.eps_det * scale {
        if !cfg.degenerate_shift {
            return Err(QuasiProbError::DegenerateKernel);
        }
        let eps = 1e-4 * model.coarse_length();
        let t2 = if query.t2 >= query.t1 {
            query.t1 + eps
        } else {
            (query.t1 - eps).max(0.0)
        };
        let shifted = QuasiProbQuery { t2, ..*query };
        let mut res = dispatch(model, state, scheme, &shifted, cfg)?;
        res.engine_used = EngineUsed::DegenerateLimit;
        return Ok(res);
    }
    dispatch(model, state, scheme, query, cfg)
}

/// The sum-rule correlators: `<Q(t1)>`, `<Q(t2)>` and the symmetrised
/// two-time correlator, reassembled from the four sign pairs.
pub fn lg_correlators(
    model: &FieldModel,
    state: &StateSpec,
    scheme: &ProjectionScheme,
    t1: f64,
    t2: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64, f64), QuasiProbError> {
    let mut mean1 = 0.0;
    let mut mean2 = 0.0;
    let mut corr = 0.0;
    for s1 in Sign::BOTH {
        for s2 in Sign::BOTH {
            let query = QuasiProbQuery::new(s1, s2, t1, t2)?;
            let q = quasi_prob(model, state, scheme, &query, cfg)?.q;
            mean1 += s1.value() * q;
            mean2 += s2.value() * q;
            corr += s1.value() * s2.value() * q;
        }
    }
    Ok((mean1, mean2, corr))
}
