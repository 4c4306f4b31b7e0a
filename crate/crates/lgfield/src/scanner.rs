//! Parameter-plane scans: evaluate the quasi-probability on a 2D grid,
//! extract robustly negative (violation) regions, and locate minima.
//!
//! Cells are pure functions of the base configuration and the two axis
//! values, evaluated in index order (or fanned out over rayon with the
//! `parallel` feature; results land in index-addressed storage, so serial
//! and parallel grids are bit-identical). Per-cell failures are recorded as
//! NaN sentinels and counted, never silently dropped.
//!
//! A cell is *robustly negative* when `q + est_error < 0`, so quadrature
//! noise cannot fabricate a violation.

use crate::kernels::{DomainError, FieldModel, StateSpec};
use crate::quasiprob::{quasi_prob, ProjectionScheme, QuadratureConfig, QuasiProbQuery};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scannable parameters. Dimensionless combinations are resolved against
/// the rest of the base configuration: `ellL` sets `L = v / ell`, `ellT2`
/// sets `t2 = v / ell`, `t2_over_L` sets `t2 = v * L`, `wL` sets
/// `w = v / L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanParameter {
    #[serde(rename = "ellL")]
    EllL,
    #[serde(rename = "ellT2")]
    EllT2,
    #[serde(rename = "xi")]
    Xi,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "wL")]
    WL,
    #[serde(rename = "t2_over_L")]
    T2OverL,
    #[serde(rename = "theta")]
    Theta,
}

impl ScanParameter {
    /// Parameters that must be bound before the derived, length- or
    /// frequency-relative ones.
    fn is_primary(self) -> bool {
        matches!(
            self,
            ScanParameter::EllL | ScanParameter::Xi | ScanParameter::R | ScanParameter::Theta
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisSpecRaw {
    parameter: ScanParameter,
    min: f64,
    max: f64,
    n: usize,
    #[serde(default)]
    scale: Scale,
}

/// One linearly sampled scan axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisSpecRaw", into = "AxisSpecRaw")]
pub struct AxisSpec {
    pub parameter: ScanParameter,
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub scale: Scale,
}

impl TryFrom<AxisSpecRaw> for AxisSpec {
    type Error = DomainError;
    fn try_from(raw: AxisSpecRaw) -> Result<Self, DomainError> {
        AxisSpec::new(raw.parameter, raw.min, raw.max, raw.n)
    }
}

impl From<AxisSpec> for AxisSpecRaw {
    fn from(a: AxisSpec) -> Self {
        AxisSpecRaw {
            parameter: a.parameter,
            min: a.min,
            max: a.max,
            n: a.n,
            scale: a.scale,
        }
    }
}

impl AxisSpec {
    pub fn new(parameter: ScanParameter, min: f64, max: f64, n: usize) -> Result<Self, DomainError> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(DomainError(format!(
                "axis {parameter:?}: need finite min < max (got {min}..{max})"
            )));
        }
        if n < 2 {
            return Err(DomainError(format!(
                "axis {parameter:?}: need n >= 2 (got {n})"
            )));
        }
        Ok(AxisSpec {
            parameter,
            min,
            max,
            n,
            scale: Scale::Linear,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * (i as f64) / (self.n as f64 - 1.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }
}

/// Everything a cell evaluation needs besides the two axis values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanBase {
    pub model: FieldModel,
    pub state: StateSpec,
    pub scheme: ProjectionScheme,
    pub query: QuasiProbQuery,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

impl ScanBase {
    /// Bind axis values onto a copy of the base configuration. Primary
    /// parameters (`ellL`, `xi`, `r`, `theta`) are applied before derived
    /// ones (`ellT2`, `t2_over_L`, `wL`), so e.g. a `wL` axis sees the
    /// `ellL` value from the same cell.
    fn bind(&self, bindings: &[(ScanParameter, f64)]) -> Result<ScanBase, DomainError> {
        let mut out = *self;
        for pass in [true, false] {
            for &(p, v) in bindings {
                if p.is_primary() != pass {
                    continue;
                }
                match p {
                    ScanParameter::EllL => out.model.set_coarse_length(v / out.state.ell())?,
                    ScanParameter::Xi => out.state.set_xi(v)?,
                    ScanParameter::R => out.state.set_r(v)?,
                    ScanParameter::Theta => out.state.set_theta(v)?,
                    ScanParameter::EllT2 => {
                        out.query = QuasiProbQuery::new(
                            out.query.s1,
                            out.query.s2,
                            out.query.t1,
                            v / out.state.ell(),
                        )?;
                    }
                    ScanParameter::T2OverL => {
                        out.query = QuasiProbQuery::new(
                            out.query.s1,
                            out.query.s2,
                            out.query.t1,
                            v * out.model.coarse_length(),
                        )?;
                    }
                    ScanParameter::WL => {
                        if !matches!(out.scheme, ProjectionScheme::WindowBand { .. }) {
                            return Err(DomainError(
                                "axis wL binds scheme.w and requires a window_band scheme".into(),
                            ));
                        }
                        out.scheme = ProjectionScheme::window(v / out.model.coarse_length())?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Sign classification of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellSign {
    Neg,
    NonNeg,
}

/// A completed scan: `values[ix * ny + iy]` layout, NaN for failed cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanGrid {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub fixed: ScanBase,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub sign_mask: Vec<CellSign>,
    /// Grid-resolution minimum `(x, y, q)` over finite cells.
    pub min_point: (f64, f64, f64),
    pub failed_cells: usize,
}

#[derive(Debug, Clone, Error)]
pub enum ScanError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("axes must bind distinct parameters")]
    DuplicateAxes,
    #[error("every grid cell failed")]
    AllCellsFailed,
}

impl ScanGrid {
    pub fn nx(&self) -> usize {
        self.x.n
    }
    pub fn ny(&self) -> usize {
        self.y.n
    }
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.y.n + iy]
    }
    pub fn error_at(&self, ix: usize, iy: usize) -> f64 {
        self.errors[ix * self.y.n + iy]
    }
    pub fn is_robust_negative(&self, ix: usize, iy: usize) -> bool {
        self.sign_mask[ix * self.y.n + iy] == CellSign::Neg
    }
}

fn eval_cell(base: &ScanBase, x: AxisSpec, y: AxisSpec, idx: usize) -> (f64, f64) {
    let ny = y.n;
    let (ix, iy) = (idx / ny, idx % ny);
    let bound = match base.bind(&[(x.parameter, x.value(ix)), (y.parameter, y.value(iy))]) {
        Ok(b) => b,
        Err(_) => return (f64::NAN, f64::NAN),
    };
    match quasi_prob(
        &bound.model,
        &bound.state,
        &bound.scheme,
        &bound.query,
        &bound.quadrature,
    ) {
        Ok(res) => (res.q, res.est_error),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

fn assemble(
    base: &ScanBase,
    x: AxisSpec,
    y: AxisSpec,
    cells: Vec<(f64, f64)>,
) -> Result<ScanGrid, ScanError> {
    let ny = y.n;
    let mut values = Vec::with_capacity(cells.len());
    let mut errors = Vec::with_capacity(cells.len());
    let mut sign_mask = Vec::with_capacity(cells.len());
    let mut failed = 0usize;
    let mut min: Option<(usize, f64)> = None;
    for (i, &(q, e)) in cells.iter().enumerate() {
        values.push(q);
        errors.push(e);
        if q.is_nan() {
            failed += 1;
            sign_mask.push(CellSign::NonNeg);
            continue;
        }
        sign_mask.push(if q + e < 0.0 {
            CellSign::Neg
        } else {
            CellSign::NonNeg
        });
        if min.map_or(true, |(_, best)| q < best) {
            min = Some((i, q));
        }
    }
    let (imin, qmin) = min.ok_or(ScanError::AllCellsFailed)?;
    Ok(ScanGrid {
        x,
        y,
        fixed: *base,
        values,
        errors,
        sign_mask,
        min_point: (x.value(imin / ny), y.value(imin % ny), qmin),
        failed_cells: failed,
    })
}

/// Evaluate the grid sequentially.
pub fn scan_plane_serial(base: &ScanBase, x: AxisSpec, y: AxisSpec) -> Result<ScanGrid, ScanError> {
    if x.parameter == y.parameter {
        return Err(ScanError::DuplicateAxes);
    }
    base.quadrature.validate()?;
    let cells: Vec<(f64, f64)> = (0..x.n * y.n).map(|i| eval_cell(base, x, y, i)).collect();
    assemble(base, x, y, cells)
}

/// Evaluate the grid, fanning cells out over rayon when the `parallel`
/// feature is enabled. Identical output to [`scan_plane_serial`].
pub fn scan_plane(base: &ScanBase, x: AxisSpec, y: AxisSpec) -> Result<ScanGrid, ScanError> {
    if x.parameter == y.parameter {
        return Err(ScanError::DuplicateAxes);
    }
    base.quadrature.validate()?;
    #[cfg(feature = "parallel")]
    let cells: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        (0..x.n * y.n)
            .into_par_iter()
            .map(|i| eval_cell(base, x, y, i))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cells: Vec<(f64, f64)> = (0..x.n * y.n).map(|i| eval_cell(base, x, y, i)).collect();
    assemble(base, x, y, cells)
}

fn golden_minimize<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Grid minimum with one local golden-section refinement pass along each
/// axis around the best cell. Ties break towards the lowest index.
pub fn find_min(grid: &ScanGrid) -> Result<(f64, f64, f64), ScanError> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut best: Option<(usize, usize, f64)> = None;
    for ix in 0..nx {
        for iy in 0..ny {
            let q = grid.at(ix, iy);
            if q.is_nan() {
                continue;
            }
            if best.map_or(true, |(_, _, b)| q < b) {
                best = Some((ix, iy, q));
            }
        }
    }
    let (ix, iy, qgrid) = best.ok_or(ScanError::AllCellsFailed)?;
    let eval = |xv: f64, yv: f64| -> f64 {
        grid.fixed
            .bind(&[(grid.x.parameter, xv), (grid.y.parameter, yv)])
            .ok()
            .and_then(|b| {
                quasi_prob(&b.model, &b.state, &b.scheme, &b.query, &b.quadrature).ok()
            })
            .map_or(f64::INFINITY, |r| r.q)
    };
    let (xa, xb) = (grid.x.value(ix.saturating_sub(1)), grid.x.value((ix + 1).min(nx - 1)));
    let y0 = grid.y.value(iy);
    let xstar = if xa < xb {
        golden_minimize(|x| eval(x, y0), xa, xb, 40)
    } else {
        grid.x.value(ix)
    };
    let (ya, yb) = (grid.y.value(iy.saturating_sub(1)), grid.y.value((iy + 1).min(ny - 1)));
    let ystar = if ya < yb {
        golden_minimize(|y| eval(xstar, y), ya, yb, 40)
    } else {
        y0
    };
    let qstar = eval(xstar, ystar);
    if qstar < qgrid {
        Ok((xstar, ystar, qstar))
    } else {
        Ok((grid.x.value(ix), y0, qgrid))
    }
}

/// Which axis a threshold crossing refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisId {
    X,
    Y,
}

/// Violation-region summary of a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationSummary {
    /// Fraction of cells that are robustly negative.
    pub fraction_neg: f64,
    pub min_q: f64,
    /// For each axis, the smallest grid value whose slice contains a
    /// robustly negative cell.
    pub threshold_crossings: Vec<(AxisId, f64)>,
}

pub fn violation_summary(grid: &ScanGrid) -> Result<ViolationSummary, ScanError> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let finite = grid.values.iter().filter(|v| !v.is_nan()).count();
    if finite == 0 {
        return Err(ScanError::AllCellsFailed);
    }
    let neg = grid
        .sign_mask
        .iter()
        .filter(|&&s| s == CellSign::Neg)
        .count();
    let min_q = grid
        .values
        .iter()
        .copied()
        .filter(|v| !v.is_nan())
        .fold(f64::INFINITY, f64::min);
    let mut crossings = Vec::new();
    'x: for ix in 0..nx {
        for iy in 0..ny {
            if grid.is_robust_negative(ix, iy) {
                crossings.push((AxisId::X, grid.x.value(ix)));
                break 'x;
            }
        }
    }
    'y: for iy in 0..ny {
        for ix in 0..nx {
            if grid.is_robust_negative(ix, iy) {
                crossings.push((AxisId::Y, grid.y.value(iy)));
                break 'y;
            }
        }
    }
    Ok(ViolationSummary {
        fraction_neg: neg as f64 / (nx * ny) as f64,
        min_q,
        threshold_crossings: crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::FieldVariant;
    use crate::quasiprob::Sign;

    fn vacuum_base() -> ScanBase {
        ScanBase {
            model: FieldModel::new(FieldVariant::Scalar3d, 1.0).unwrap(),
            state: StateSpec::vacuum(),
            scheme: ProjectionScheme::sign_zero(),
            query: QuasiProbQuery::new(Sign::Plus, Sign::Plus, 0.0, 15.0).unwrap(),
            quadrature: QuadratureConfig::default(),
        }
    }

    #[test]
    fn smoke_grid_factorises() {
        let base = vacuum_base();
        let x = AxisSpec::new(ScanParameter::EllL, 0.8, 1.2, 2).unwrap();
        let y = AxisSpec::new(ScanParameter::EllT2, 15.0, 25.0, 2).unwrap();
        let grid = scan_plane(&base, x, y).unwrap();
        assert_eq!(grid.values.len(), 4);
        assert_eq!(grid.failed_cells, 0);
        // factorised up to the power-law covariance tail (L/dt)^2
        for &v in &grid.values {
            assert!((v - 0.25).abs() < 2e-3, "{v}");
        }
        let summary = violation_summary(&grid).unwrap();
        assert_eq!(summary.fraction_neg, 0.0);
        assert!(summary.threshold_crossings.is_empty());
    }

    #[test]
    fn serial_and_parallel_grids_are_identical() {
        let base = vacuum_base();
        let x = AxisSpec::new(ScanParameter::EllL, 0.8, 2.0, 4).unwrap();
        let y = AxisSpec::new(ScanParameter::EllT2, 0.5, 6.0, 5).unwrap();
        let a = scan_plane(&base, x, y).unwrap();
        let b = scan_plane_serial(&base, x, y).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.errors, b.errors);
        let c = scan_plane(&base, x, y).unwrap();
        assert_eq!(a.values, c.values);
    }

    #[test]
    fn min_point_consistent_with_values() {
        let base = vacuum_base();
        let x = AxisSpec::new(ScanParameter::EllL, 0.8, 2.0, 3).unwrap();
        let y = AxisSpec::new(ScanParameter::EllT2, 0.5, 6.0, 4).unwrap();
        let grid = scan_plane(&base, x, y).unwrap();
        let qmin = grid
            .values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(grid.min_point.2, qmin);
        // recompute mask
        for ix in 0..grid.nx() {
            for iy in 0..grid.ny() {
                let expect = grid.at(ix, iy) + grid.error_at(ix, iy) < 0.0;
                assert_eq!(grid.is_robust_negative(ix, iy), expect);
            }
        }
    }

    #[test]
    fn duplicate_axes_rejected() {
        let base = vacuum_base();
        let x = AxisSpec::new(ScanParameter::Xi, 0.0, 1.0, 2).unwrap();
        let y = AxisSpec::new(ScanParameter::Xi, 0.0, 1.0, 2).unwrap();
        assert!(matches!(
            scan_plane(&base, x, y),
            Err(ScanError::DuplicateAxes)
        ));
    }

    #[test]
    fn find_min_constant_grid_tie_breaks_low_index() {
        let base = vacuum_base();
        let x = AxisSpec::new(ScanParameter::EllL, 1.0, 2.0, 3).unwrap();
        let y = AxisSpec::new(ScanParameter::EllT2, 20.0, 30.0, 3).unwrap();
        let grid = scan_plane(&base, x, y).unwrap();
        // essentially constant 0.25 grid: the reported grid min must be a
        // real cell and match values
        let (_x, _y, q) = find_min(&grid).unwrap();
        assert!(q <= grid.min_point.2 + 1e-12);
    }
}
