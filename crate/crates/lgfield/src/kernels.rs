//! Correlation kernels of the coarse-grained field in Gaussian states.
//!
//! Both field models reduce to one radial mode integral
//!
//! ```text
//! I(b; L) = int_0^inf k exp(-L^2 k^2 / 2) exp(-i b k) dk
//!         = (1/L^2) [ 1 - i (b/L) sqrt(pi/2) w(-b / (sqrt(2) L)) ]
//! ```
//!
//! with `w` the Faddeeva function at real argument, so every kernel is a
//! short, overflow-free closed form:
//!
//! * one-time variance   `A_sq(t)  = N [ cosh(2r)/L^2 - sinh(2r) Re(e^{i th} I(2t)) ]`
//! * two-time covariance `B_sq     = N [ cosh(2r) Re I(dt) + i Im I(dt)
//!                                        - sinh(2r) Re(e^{i th} I(t1+t2)) ]`
//! * coherent drift      `E(t)` from the displaced mode `ell` alone,
//!
//! where `N = 1/(4 pi^2)` for the 3+1D scalar and `1/(4 pi)` for the 1+1D
//! chiral derivative field, `dt = t2 - t1`. At `r = 0` these collapse
//! bit-exactly onto the vacuum kernels `A = N/L^2`, `B = N I(dt)`.
//!
//! [`oracle_kernels`] evaluates the defining mode integrals by adaptive
//! quadrature instead (no error function anywhere on that path), providing
//! an independent check of every closed form, including the relative signs
//! of the squeeze terms.

use crate::quadrature::{adaptive_gk, QuadratureFailure};
use crate::specfun::faddeeva;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// A constructor argument violated a type invariant; the message names the
/// offending field.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{0}")]
pub struct DomainError(pub String);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), DomainError> {
    if ok {
        Ok(())
    } else {
        Err(DomainError(msg()))
    }
}

/// Which field theory the coarse-grained variable is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldVariant {
    /// Massless scalar in 3+1D Minkowski, smeared with a Gaussian window.
    Scalar3d,
    /// Chiral massless field in 1+1D; the spatial derivative is smeared.
    Chiral1d,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldModelRaw {
    variant: FieldVariant,
    #[serde(rename = "L")]
    l: f64,
}

/// Field theory plus coarse-graining length `L` (natural units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldModelRaw", into = "FieldModelRaw")]
pub struct FieldModel {
    variant: FieldVariant,
    l: f64,
}

impl TryFrom<FieldModelRaw> for FieldModel {
    type Error = DomainError;
    fn try_from(raw: FieldModelRaw) -> Result<Self, DomainError> {
        FieldModel::new(raw.variant, raw.l)
    }
}

impl From<FieldModel> for FieldModelRaw {
    fn from(m: FieldModel) -> Self {
        FieldModelRaw {
            variant: m.variant,
            l: m.l,
        }
    }
}

impl FieldModel {
    pub fn new(variant: FieldVariant, coarse_length: f64) -> Result<Self, DomainError> {
        ensure(
            coarse_length.is_finite() && coarse_length > 0.0,
            || format!("model.L must be finite and > 0 (got {coarse_length})"),
        )?;
        Ok(FieldModel {
            variant,
            l: coarse_length,
        })
    }

    pub fn variant(&self) -> FieldVariant {
        self.variant
    }

    /// Coarse-graining length `L`.
    pub fn coarse_length(&self) -> f64 {
        self.l
    }

    pub fn set_coarse_length(&mut self, l: f64) -> Result<(), DomainError> {
        ensure(l.is_finite() && l > 0.0, || {
            format!("model.L must be finite and > 0 (got {l})")
        })?;
        self.l = l;
        Ok(())
    }

    /// Mode-measure normalisation in front of the radial integral.
    fn norm(&self) -> f64 {
        match self.variant {
            FieldVariant::Scalar3d => 1.0 / (4.0 * PI * PI),
            FieldVariant::Chiral1d => 1.0 / (4.0 * PI),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSpecRaw {
    #[serde(default)]
    xi: f64,
    #[serde(default = "one")]
    ell: f64,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    r: f64,
    #[serde(default)]
    theta: f64,
}

fn one() -> f64 {
    1.0
}

/// Gaussian state parameters: a coherent excitation of the single mode
/// `ell` (amplitude `xi >= 0`, phase `alpha`) on top of a uniform two-mode
/// squeeze (`r >= 0`, angle `theta`). Mode-dependent squeeze spectra are
/// rejected at construction by design: only the uniform case has closed
/// forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateSpecRaw", into = "StateSpecRaw")]
pub struct StateSpec {
    xi: f64,
    ell: f64,
    alpha: f64,
    r: f64,
    theta: f64,
}

impl TryFrom<StateSpecRaw> for StateSpec {
    type Error = DomainError;
    fn try_from(raw: StateSpecRaw) -> Result<Self, DomainError> {
        StateSpec::new(raw.xi, raw.ell, raw.alpha, raw.r, raw.theta)
    }
}

impl From<StateSpec> for StateSpecRaw {
    fn from(s: StateSpec) -> Self {
        StateSpecRaw {
            xi: s.xi,
            ell: s.ell,
            alpha: s.alpha,
            r: s.r,
            theta: s.theta,
        }
    }
}

impl StateSpec {
    pub fn new(xi: f64, ell: f64, alpha: f64, r: f64, theta: f64) -> Result<Self, DomainError> {
        ensure(xi.is_finite() && xi >= 0.0, || {
            format!("state.xi must be finite and >= 0 (got {xi})")
        })?;
        ensure(ell.is_finite() && ell > 0.0, || {
            format!("state.ell must be finite and > 0 (got {ell})")
        })?;
        ensure(alpha.is_finite(), || {
            format!("state.alpha must be finite (got {alpha})")
        })?;
        ensure(r.is_finite() && r >= 0.0, || {
            format!("state.r must be finite and >= 0 (got {r})")
        })?;
        ensure(theta.is_finite(), || {
            format!("state.theta must be finite (got {theta})")
        })?;
        Ok(StateSpec {
            xi,
            ell,
            alpha,
            r,
            theta,
        })
    }

    /// Vacuum: no displacement, no squeezing.
    pub fn vacuum() -> Self {
        StateSpec {
            xi: 0.0,
            ell: 1.0,
            alpha: 0.0,
            r: 0.0,
            theta: 0.0,
        }
    }

    /// Coherent state of mode `ell` with `alpha = 0`, no squeezing.
    pub fn coherent(xi: f64, ell: f64) -> Result<Self, DomainError> {
        StateSpec::new(xi, ell, 0.0, 0.0, 0.0)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn ell(&self) -> f64 {
        self.ell
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn is_vacuum(&self) -> bool {
        self.xi == 0.0 && self.r == 0.0
    }

    pub fn set_xi(&mut self, xi: f64) -> Result<(), DomainError> {
        ensure(xi.is_finite() && xi >= 0.0, || {
            format!("state.xi must be finite and >= 0 (got {xi})")
        })?;
        self.xi = xi;
        Ok(())
    }

    pub fn set_r(&mut self, r: f64) -> Result<(), DomainError> {
        ensure(r.is_finite() && r >= 0.0, || {
            format!("state.r must be finite and >= 0 (got {r})")
        })?;
        self.r = r;
        Ok(())
    }

    pub fn set_theta(&mut self, theta: f64) -> Result<(), DomainError> {
        ensure(theta.is_finite(), || {
            format!("state.theta must be finite (got {theta})")
        })?;
        self.theta = theta;
        Ok(())
    }
}

/// The evaluated kernels feeding every quasi-probability engine: one-time
/// variances `a1 = A_sq(t1)`, `a2 = A_sq(t2)`, two-time covariance
/// `b = B_sq(t1, t2)`, drifts `e1 = E(t1)`, `e2 = E(t2)`, and the
/// determinant `a1 a2 - b^2` of the covariance block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSet {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b: Complex64,
    pub e1: f64,
    pub e2: f64,
    pub det: Complex64,
}

impl KernelSet {
    pub fn from_parts(a1: Complex64, a2: Complex64, b: Complex64, e1: f64, e2: f64) -> Self {
        KernelSet {
            a1,
            a2,
            b,
            e1,
            e2,
            det: a1 * a2 - b * b,
        }
    }
}

/// The radial profile `I(b; L)`; real `b`, so the Faddeeva argument is real
/// and the evaluation never overflows. `I(0) = 1/L^2` exactly.
fn radial_profile(b: f64, l: f64) -> Complex64 {
    let w = faddeeva(Complex64::new(-b / (std::f64::consts::SQRT_2 * l), 0.0));
    let scale = (b / l) * (PI / 2.0).sqrt();
    Complex64::new(
        (1.0 + scale * w.im) / (l * l),
        -scale * w.re / (l * l),
    )
}

/// Mean trajectory `E(t)` of the smeared variable in the coherent state;
/// identically the expectation of the coarse-grained field itself.
pub fn coherent_mean(model: &FieldModel, state: &StateSpec, t: f64) -> f64 {
    let omega = state.ell; // massless dispersion
    let l = model.l;
    let window = (-l * l * state.ell * state.ell / 4.0).exp();
    match model.variant {
        FieldVariant::Scalar3d => {
            let pref = (2.0 * PI).powf(-1.5) * (2.0 / omega).sqrt();
            pref * state.xi * window * (omega * t - state.alpha).cos()
        }
        FieldVariant::Chiral1d => {
            (omega / PI).sqrt() * state.xi * window * (state.alpha - omega * t).sin()
        }
    }
}

/// Vacuum one-time variance `A`: `1/(4 pi^2 L^2)` (3D) or `1/(4 pi L^2)` (1D).
pub fn kernel_a(model: &FieldModel) -> f64 {
    model.norm() / (model.l * model.l)
}

/// Vacuum two-time covariance `B(t1, t2)`; depends on `t2 - t1` only and
/// equals `A` at coincident times.
pub fn kernel_b(model: &FieldModel, t1: f64, t2: f64) -> Complex64 {
    radial_profile(t2 - t1, model.l) * model.norm()
}

/// Squeezed one-time variance `A_sq(t)`; real, positive, and identical to
/// [`kernel_a`] at `r = 0`.
pub fn kernel_a_sq(model: &FieldModel, state: &StateSpec, t: f64) -> Complex64 {
    let c2r = (2.0 * state.r).cosh();
    let s2r = (2.0 * state.r).sinh();
    let i2t = radial_profile(2.0 * t, model.l);
    // written so the r = 0 case collapses onto kernel_a bit-exactly
    let squeeze =
        s2r * model.norm() * (state.theta.cos() * i2t.re - state.theta.sin() * i2t.im);
    Complex64::new(c2r * kernel_a(model) - squeeze, 0.0)
}

/// Squeezed two-time covariance `B_sq(t1, t2)`; reduces to [`kernel_b`] at
/// `r = 0` and to `A_sq(t)` at coincident times.
pub fn kernel_b_sq(model: &FieldModel, state: &StateSpec, t1: f64, t2: f64) -> Complex64 {
    let l = model.l;
    let c2r = (2.0 * state.r).cosh();
    let s2r = (2.0 * state.r).sinh();
    let id = radial_profile(t2 - t1, l);
    let it = radial_profile(t1 + t2, l);
    let squeeze =
        s2r * model.norm() * (state.theta.cos() * it.re - state.theta.sin() * it.im);
    Complex64::new(c2r * (id.re * model.norm()) - squeeze, id.im * model.norm())
}

/// Evaluate the full closed-form [`KernelSet`] at `(t1, t2)`.
pub fn kernel_set(model: &FieldModel, state: &StateSpec, t1: f64, t2: f64) -> KernelSet {
    KernelSet::from_parts(
        kernel_a_sq(model, state, t1),
        kernel_a_sq(model, state, t2),
        kernel_b_sq(model, state, t1, t2),
        coherent_mean(model, state, t1),
        coherent_mean(model, state, t2),
    )
}

/// Direct adaptive quadrature of the defining mode integrals: the slow,
/// independent route to the same [`KernelSet`]. The integrands use nothing
/// beyond `exp`/`sin`/`cos`, so agreement with the closed forms certifies
/// the error-function reductions and the squeeze-term signs. The radial
/// integral is truncated where the Gaussian window drops below `1e-18`;
/// the discarded tail is added to the error budget.
pub fn oracle_kernels(
    model: &FieldModel,
    state: &StateSpec,
    t1: f64,
    t2: f64,
) -> Result<KernelSet, QuadratureFailure> {
    let l = model.l;
    let n = model.norm();
    let r = state.r;
    let th = state.theta;
    let c2r = (2.0 * r).cosh();
    let s2r = (2.0 * r).sinh();
    let ch2 = r.cosh() * r.cosh();
    let sh2 = r.sinh() * r.sinh();
    // window < 1e-18 beyond k_up; tail mass <= e^{2r} * 1e-18 / L^2
    let k_up = (2.0 * 18.0 * std::f64::consts::LN_10).sqrt() / l;
    let tail = (2.0 * r).exp() * 1e-18 / (l * l) * n;
    let rho = move |k: f64| k * (-l * l * k * k / 2.0).exp() * n;

    let a_of = |t: f64| -> Result<(f64, f64), QuadratureFailure> {
        let out = adaptive_gk(
            |k| Complex64::new(rho(k) * (c2r - s2r * (2.0 * k * t - th).cos()), 0.0),
            0.0,
            k_up,
            1e-13,
            1e-12,
            8192,
        )?;
        Ok((out.value.re, out.est_error + tail))
    };
    let (a1, _) = a_of(t1)?;
    let (a2, _) = a_of(t2)?;
    let dt = t2 - t1;
    let ts = t1 + t2;
    let b_out = match model.variant {
        FieldVariant::Scalar3d => adaptive_gk(
            |k| {
                let osc = Complex64::new(0.0, -k * dt).exp();
                (osc * ch2 + osc.conj() * sh2
                    - Complex64::new(s2r * (k * ts - th).cos(), 0.0))
                    * rho(k)
            },
            0.0,
            k_up,
            1e-13,
            1e-12,
            8192,
        )?,
        FieldVariant::Chiral1d => adaptive_gk(
            |k| {
                Complex64::new(
                    c2r * (k * (t1 - t2)).cos() - s2r * (k * ts - th).cos(),
                    (k * (t1 - t2)).sin(),
                ) * rho(k)
            },
            0.0,
            k_up,
            1e-13,
            1e-12,
            8192,
        )?,
    };
    Ok(KernelSet::from_parts(
        Complex64::new(a1, 0.0),
        Complex64::new(a2, 0.0),
        b_out.value,
        coherent_mean(model, state, t1),
        coherent_mean(model, state, t2),
    ))
}
