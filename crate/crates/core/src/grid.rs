//! Sup-norm estimation on `[0, 1]`: dense grid scan followed by
//! golden-section refinement around the surviving local maxima.
//!
//! Every estimate is the objective evaluated at concrete points, so it is an
//! underestimate of the true supremum; callers that feed estimates into
//! inequality checks apply slack in the direction that keeps the check
//! honest.

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Grid sizes and refinement effort for all scan-based estimates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    /// Points of the uniform x-grid for sup-norm scans.
    pub grid_points: usize,
    /// Golden-section refinement passes applied to each local maximum.
    pub refine_rounds: usize,
    /// h-grid points for the weighted second modulus.
    pub dt_h_points: usize,
    /// x-grid points per h for the weighted second modulus.
    pub dt_x_points: usize,
    /// h-grid points for the classical moduli.
    pub classical_h_points: usize,
    /// x-grid points per h for the classical moduli.
    pub classical_x_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            grid_points: 4097,
            refine_rounds: 3,
            dt_h_points: 513,
            dt_x_points: 2049,
            classical_h_points: 1025,
            classical_x_points: 2049,
        }
    }
}

impl GridConfig {
    /// Reduced grids for long n-sweeps. Estimates stay sup-underestimates;
    /// only their tightness drops.
    pub fn coarse() -> Self {
        GridConfig {
            grid_points: 513,
            refine_rounds: 2,
            dt_h_points: 65,
            dt_x_points: 257,
            classical_h_points: 129,
            classical_x_points: 257,
        }
    }

    /// Same validation the CLI applies to user-supplied values.
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 17 || self.grid_points.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid_points must be odd and at least 17, got {}",
                self.grid_points
            )));
        }
        for (name, v) in [
            ("dt_h_points", self.dt_h_points),
            ("dt_x_points", self.dt_x_points),
            ("classical_h_points", self.classical_h_points),
            ("classical_x_points", self.classical_x_points),
        ] {
            if v < 3 {
                return Err(Error::Config(format!("{name} must be at least 3, got {v}")));
            }
        }
        Ok(())
    }

    /// Replace the sup-scan grid size, keeping everything else.
    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.grid_points = points;
        self
    }

    /// Replace the refinement rounds, keeping everything else.
    pub fn with_refine_rounds(mut self, rounds: usize) -> Self {
        self.refine_rounds = rounds;
        self
    }
}

/// Tag for how an estimate relates to the true quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    /// Max over finitely many evaluated points: never above the true sup.
    SupUnderestimate,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::SupUnderestimate => "sup-underestimate",
        }
    }
}

/// A numerically estimated supremum over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    /// The largest |objective| value seen.
    pub value: f64,
    /// Where it was seen.
    pub argmax: f64,
    /// Size of the uniform scan grid.
    pub grid_size: usize,
    /// Refinement passes applied.
    pub refinement_rounds: usize,
    pub kind: EstimateKind,
}

/// Golden-section iterations per refinement round. Three rounds shrink a
/// bracket by ~1e-15 of its width, enough to pin interior maximizers of
/// smooth objectives to full precision.
const GOLDEN_ITERS_PER_ROUND: usize = 24;

/// Local maxima refined per scan; ties and noise plateaus can mark many grid
/// points, refining the strongest few is enough.
const MAX_REFINED_PEAKS: usize = 32;

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximize `f` over `[a, b]` by golden-section search; returns the best
/// point seen. `f` must already be the quantity to maximize (no abs applied).
pub(crate) fn golden_max<F>(mut f: F, a: f64, b: f64, iters: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if b <= a {
        let v = f(a)?;
        return Ok((a, v));
    }
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2)?;
        }
        let (cx, cv) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if cv > best.1 || (cv == best.1 && cx < best.0) {
            best = (cx, cv);
        }
    }
    Ok(best)
}

/// Estimate `sup |objective|` over `[0, 1]`.
pub fn sup_abs_on_unit_interval<F>(mut objective: F, cfg: &GridConfig) -> Result<NormEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = cfg.grid_points.max(3);
    let step = 1.0 / (m - 1) as f64;
    let mut values = Vec::with_capacity(m);
    for i in 0..m {
        let x = if i == m - 1 { 1.0 } else { i as f64 * step };
        let v = math::abs(objective(x)?);
        if !v.is_finite() {
            return Err(Error::Domain(crate::jet::DomainError {
                node: "norm objective",
                x,
                reason: crate::jet::DomainReason::NonFiniteResult,
            }));
        }
        values.push((x, v));
    }

    let mut best_x = values[0].0;
    let mut best_v = values[0].1;
    for &(x, v) in &values[1..] {
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }

    if cfg.refine_rounds > 0 {
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&i| {
                let v = values[i].1;
                let left_ok = i == 0 || v >= values[i - 1].1;
                let right_ok = i == m - 1 || v >= values[i + 1].1;
                left_ok && right_ok
            })
            .collect();
        peaks.sort_by(|&a, &b| {
            values[b]
                .1
                .partial_cmp(&values[a].1)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(values[a].0.partial_cmp(&values[b].0).unwrap())
        });
        peaks.truncate(MAX_REFINED_PEAKS);
        let iters = GOLDEN_ITERS_PER_ROUND * cfg.refine_rounds;
        for &i in &peaks {
            let lo = values[i.saturating_sub(1)].0;
            let hi = values[(i + 1).min(m - 1)].0;
            let (x, v) = golden_max(|x| Ok(math::abs(objective(x)?)), lo, hi, iters)?;
            if v > best_v || (v == best_v && x < best_x) {
                best_v = v;
                best_x = x;
            }
        }
    }

    Ok(NormEstimate {
        value: best_v,
        argmax: best_x,
        grid_size: m,
        refinement_rounds: cfg.refine_rounds,
        kind: EstimateKind::SupUnderestimate,
    })
}

/// Estimate `inf |objective|` over `[0, 1]`; returns `(value, argmin)`.
/// Used for hypothesis checks of the form `|f''| >= m`.
pub fn inf_abs_on_unit_interval<F>(mut objective: F, cfg: &GridConfig) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = cfg.grid_points.max(3);
    let step = 1.0 / (m - 1) as f64;
    let at = |i: usize| if i == m - 1 { 1.0 } else { i as f64 * step };
    let mut best_x = 0.0;
    let mut best_v = f64::INFINITY;
    let mut best_i = 0usize;
    for i in 0..m {
        let x = at(i);
        let v = math::abs(objective(x)?);
        if v < best_v {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    if cfg.refine_rounds > 0 && best_v > 0.0 {
        let lo = at(best_i.saturating_sub(1));
        let hi = at((best_i + 1).min(m - 1));
        let iters = GOLDEN_ITERS_PER_ROUND * cfg.refine_rounds;
        let (x, neg_v) = golden_max(|x| Ok(-math::abs(objective(x)?)), lo, hi, iters)?;
        if -neg_v < best_v {
            best_v = -neg_v;
            best_x = x;
        }
    }
    Ok((best_v, best_x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_documented_values() {
        let cfg = GridConfig::default();
        assert_eq!(cfg.grid_points, 4097);
        assert_eq!(cfg.refine_rounds, 3);
        assert_eq!(cfg.dt_h_points, 513);
        assert_eq!(cfg.dt_x_points, 2049);
        assert_eq!(cfg.classical_h_points, 1025);
        assert_eq!(cfg.classical_x_points, 2049);
        cfg.validate().unwrap();
        GridConfig::coarse().validate().unwrap();
    }

    #[test]
    fn validation_rejects_even_or_tiny_grids() {
        assert!(GridConfig::default().with_grid_points(16).validate().is_err());
        assert!(GridConfig::default().with_grid_points(64).validate().is_err());
        assert!(GridConfig::default().with_grid_points(17).validate().is_ok());
    }

    #[test]
    fn finds_interior_parabola_peak_to_high_precision() {
        // |x(1-x)| peaks at 1/4 on x = 1/2; 33 grid points plus refinement
        // must land on it almost exactly.
        let cfg = GridConfig {
            grid_points: 33,
            refine_rounds: 3,
            ..GridConfig::default()
        };
        let est = sup_abs_on_unit_interval(|x| Ok(x * (1.0 - x)), &cfg).unwrap();
        assert!((est.value - 0.25).abs() < 1e-12);
        assert!((est.argmax - 0.5).abs() < 1e-6);
    }

    #[test]
    fn value_is_monotone_under_grid_refinement() {
        let f = |x: f64| Ok(libm::sin(7.0 * x) * libm::exp(x));
        let mut prev = 0.0;
        for points in [17, 33, 65, 129, 257, 513] {
            let cfg = GridConfig {
                grid_points: points,
                refine_rounds: 2,
                ..GridConfig::default()
            };
            let est = sup_abs_on_unit_interval(f, &cfg).unwrap();
            assert!(
                est.value >= prev - 1e-12,
                "{points} points: {} < {prev}",
                est.value
            );
            prev = est.value;
        }
    }

    #[test]
    fn value_equals_objective_at_argmax() {
        let f = |x: f64| Ok(libm::cos(3.0 * x) - x);
        let cfg = GridConfig::coarse();
        let est = sup_abs_on_unit_interval(f, &cfg).unwrap();
        let at_argmax = libm::fabs(f(est.argmax).unwrap());
        assert!((est.value - at_argmax).abs() <= 1e-12);
    }

    #[test]
    fn zero_objective_reports_smallest_argmax() {
        let est =
            sup_abs_on_unit_interval(|_| Ok(0.0), &GridConfig::coarse()).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.argmax, 0.0);
    }

    #[test]
    fn inf_abs_finds_interior_zero() {
        let (v, x) = inf_abs_on_unit_interval(
            |x| Ok(x - 0.37),
            &GridConfig::coarse(),
        )
        .unwrap();
        assert!(v < 1e-9);
        assert!((x - 0.37).abs() < 1e-6);
    }
}
