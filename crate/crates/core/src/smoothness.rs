//! The weight `phi(x) = sqrt(x(1-x))`, weighted derivative norms, the
//! second-order Ditzian-Totik modulus through its explicit
//! admissible-interval definition
//!
//! ```text
//! w2_phi(f, d) = sup { |f(x + h phi(x)) - 2 f(x) + f(x - h phi(x))| :
//!                      0 <= h <= d,  x in [h^2/(1+h^2), 1/(1+h^2)] }
//! ```
//!
//! classical first/second moduli of continuity, and a two-sided K-functional
//! bracket with the explicit constants 1/16 and 10.

use alloc::format;

use crate::func::FunctionSpec;
use crate::grid::{self, GridConfig, NormEstimate};
use crate::math;
use crate::{Error, Result};

/// The endpoint weight `sqrt(x(1-x))`.
pub fn phi(x: f64) -> f64 {
    math::sqrt((x * (1.0 - x)).max(0.0))
}

/// `phi(x)^p` computed without `powf`: exact products for even powers, one
/// square root for odd ones.
fn phi_pow(x: f64, p: u32) -> f64 {
    let base = (x * (1.0 - x)).max(0.0);
    let mut acc = 1.0;
    for _ in 0..p / 2 {
        acc *= base;
    }
    if p % 2 == 1 {
        acc *= math::sqrt(base);
    }
    acc
}

/// An estimated modulus of smoothness together with its maximizer and grid
/// metadata. For the weighted modulus, `x_star` always lies in the
/// admissible interval of `h_star`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusResult {
    pub value: f64,
    /// The step bound the modulus was evaluated at.
    pub delta: f64,
    /// Maximizing step in `[0, delta]`.
    pub h_star: f64,
    /// Maximizing point.
    pub x_star: f64,
    pub grid_h: usize,
    pub grid_x: usize,
}

/// Two-sided bracket for the K-functional at step `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KInterval {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Order of a classical modulus of continuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusOrder {
    First,
    Second,
}

/// Estimate `sup |phi(x)^p f^(k)(x)|` over `[0, 1]`.
pub fn weighted_norm(
    f: &FunctionSpec,
    weight_power: u32,
    deriv_order: u8,
    cfg: &GridConfig,
) -> Result<NormEstimate> {
    if deriv_order > f.max_order() {
        return Err(Error::OrderTooLow {
            required: deriv_order,
            available: f.max_order(),
        });
    }
    let k = deriv_order as usize;
    grid::sup_abs_on_unit_interval(
        |x| Ok(phi_pow(x, weight_power) * f.jet(x, k)?.deriv(k)),
        cfg,
    )
}

/// The admissible x-interval for step `h`: both `x - h phi(x)` and
/// `x + h phi(x)` stay inside `[0, 1]` exactly when
/// `x in [h^2/(1+h^2), 1/(1+h^2)]`.
pub fn admissible_interval(h: f64) -> (f64, f64) {
    let h2 = h * h;
    (h2 / (1.0 + h2), 1.0 / (1.0 + h2))
}

/// The symmetric weighted second difference
/// `f(x + h phi(x)) - 2 f(x) + f(x - h phi(x))`, with the displaced
/// arguments clamped to `[0, 1]` against rounding at the admissible
/// boundary.
pub fn second_difference(f: &FunctionSpec, h: f64, x: f64) -> Result<f64> {
    let step = h * phi(x);
    let xp = (x + step).clamp(0.0, 1.0);
    let xm = (x - step).clamp(0.0, 1.0);
    Ok(f.eval(xp)? - 2.0 * f.eval(x)? + f.eval(xm)?)
}

/// Sup of `|second_difference|` over the admissible x-interval at a fixed
/// `h`, grid scan plus golden refinement; returns `(value, x_star)`.
pub fn dt_inner_sup(f: &FunctionSpec, h: f64, cfg: &GridConfig) -> Result<(f64, f64)> {
    let (lo, hi) = admissible_interval(h);
    let m = cfg.dt_x_points.max(3);
    let step = (hi - lo) / (m - 1) as f64;
    let mut best_v = 0.0;
    let mut best_x = lo;
    let mut best_i = 0;
    for i in 0..m {
        let x = if i == m - 1 { hi } else { lo + i as f64 * step };
        let v = math::abs(second_difference(f, h, x)?);
        if v > best_v {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    let a = lo + best_i.saturating_sub(1) as f64 * step;
    let b = (lo + (best_i + 1) as f64 * step).min(hi);
    let (x, v) = grid::golden_max(
        |x| Ok(math::abs(second_difference(f, h, x)?)),
        a,
        b,
        72,
    )?;
    if v > best_v {
        Ok((v, x))
    } else {
        Ok((best_v, best_x))
    }
}

/// Estimate the second-order weighted modulus at step bound `delta`
/// (`0 < delta <= 1`): double grid scan over `(h, x)` followed by one
/// coordinate-wise golden-section refinement around the incumbent.
pub fn dt_modulus2(f: &FunctionSpec, delta: f64, cfg: &GridConfig) -> Result<ModulusResult> {
    if delta.is_nan() || delta <= 0.0 || delta > 1.0 {
        return Err(Error::Config(format!(
            "modulus step bound must lie in (0, 1], got {delta}"
        )));
    }
    let hp = cfg.dt_h_points.max(3);
    let xp = cfg.dt_x_points.max(3);
    let dh = delta / (hp - 1) as f64;

    let mut best_v = 0.0_f64;
    let mut best_h = 0.0_f64;
    let mut best_x = 0.0_f64;
    for i in 0..hp {
        let h = if i == hp - 1 { delta } else { i as f64 * dh };
        let (lo, hi) = admissible_interval(h);
        let dx = (hi - lo) / (xp - 1) as f64;
        for j in 0..xp {
            let x = if j == xp - 1 { hi } else { lo + j as f64 * dx };
            let v = math::abs(second_difference(f, h, x)?);
            if v > best_v || (v == best_v && (h, x) < (best_h, best_x)) {
                best_v = v;
                best_h = h;
                best_x = x;
            }
        }
    }

    // One coordinate-wise refinement round: x at fixed h, then h with x
    // clamped into the admissible interval of the trial h.
    let (lo, hi) = admissible_interval(best_h);
    let dx = (hi - lo) / (xp - 1) as f64;
    let h_fixed = best_h;
    let (x, v) = grid::golden_max(
        |x| Ok(math::abs(second_difference(f, h_fixed, x)?)),
        (best_x - dx).max(lo),
        (best_x + dx).min(hi),
        72,
    )?;
    if v > best_v {
        best_v = v;
        best_x = x;
    }

    let x_anchor = best_x;
    let (h, v) = grid::golden_max(
        |h| {
            let (lo, hi) = admissible_interval(h);
            Ok(math::abs(second_difference(
                f,
                h,
                x_anchor.clamp(lo, hi),
            )?))
        },
        (best_h - dh).max(0.0),
        (best_h + dh).min(delta),
        72,
    )?;
    if v > best_v {
        best_v = v;
        best_h = h;
        let (lo, hi) = admissible_interval(h);
        best_x = x_anchor.clamp(lo, hi);
    }

    Ok(ModulusResult {
        value: best_v,
        delta,
        h_star: best_h,
        x_star: best_x,
        grid_h: hp,
        grid_x: xp,
    })
}

/// Classical modulus of continuity of `g = f^(use_deriv)`:
///
/// - order 1: `sup |g(x+h) - g(x)|` over `0 <= h <= delta`, `x, x+h in [0,1]`
/// - order 2: `sup |g(x+2h) - 2g(x+h) + g(x)|` over `x, x+2h in [0,1]`
///
/// Grid scan only, no refinement; the estimate stays below the true value,
/// which only tightens the bounds it feeds.
pub fn classical_modulus(
    f: &FunctionSpec,
    use_deriv: u8,
    order: ModulusOrder,
    delta: f64,
    cfg: &GridConfig,
) -> Result<ModulusResult> {
    if use_deriv > f.max_order() {
        return Err(Error::OrderTooLow {
            required: use_deriv,
            available: f.max_order(),
        });
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Config(format!(
            "modulus step bound must be positive, got {delta}"
        )));
    }
    let k = use_deriv as usize;
    let g = |x: f64| -> Result<f64> { Ok(f.jet(x, k)?.deriv(k)) };

    let span = match order {
        ModulusOrder::First => 1.0,
        ModulusOrder::Second => 2.0,
    };
    let h_cap = delta.min(1.0 / span);
    let hp = cfg.classical_h_points.max(3);
    let xp = cfg.classical_x_points.max(3);
    let dh = h_cap / (hp - 1) as f64;

    let mut best_v = 0.0_f64;
    let mut best_h = 0.0_f64;
    let mut best_x = 0.0_f64;
    for i in 0..hp {
        let h = if i == hp - 1 { h_cap } else { i as f64 * dh };
        let x_max = 1.0 - span * h;
        let dx = x_max / (xp - 1) as f64;
        for j in 0..xp {
            let x = if j == xp - 1 { x_max } else { j as f64 * dx };
            let v = match order {
                ModulusOrder::First => math::abs(g(x + h)? - g(x)?),
                ModulusOrder::Second => {
                    math::abs(g(x + 2.0 * h)? - 2.0 * g(x + h)? + g(x)?)
                }
            };
            if v > best_v || (v == best_v && (h, x) < (best_h, best_x)) {
                best_v = v;
                best_h = h;
                best_x = x;
            }
        }
    }

    Ok(ModulusResult {
        value: best_v,
        delta,
        h_star: best_h,
        x_star: best_x,
        grid_h: hp,
        grid_x: xp,
    })
}

/// Two-sided K-functional bracket at step `t in (0, 1/sqrt 2]`:
/// `lower = w2_phi(f, t) / 16` and
/// `upper = min(10 w2_phi(f, t), t^2 ||phi^2 f''||)`, the second member being
/// the `g = f` candidate of the defining infimum.
pub fn kfunctional_bounds(f: &FunctionSpec, t: f64, cfg: &GridConfig) -> Result<KInterval> {
    if t.is_nan() || t <= 0.0 || t > core::f64::consts::FRAC_1_SQRT_2 {
        return Err(Error::Config(format!(
            "K-functional step must lie in (0, 1/sqrt(2)], got {t}"
        )));
    }
    if f.max_order() < 2 {
        return Err(Error::OrderTooLow {
            required: 2,
            available: f.max_order(),
        });
    }
    let w2 = dt_modulus2(f, t, cfg)?.value;
    let smooth_candidate = t * t * weighted_norm(f, 2, 2, cfg)?.value;
    Ok(KInterval {
        t,
        lower: w2 / 16.0,
        upper: (10.0 * w2).min(smooth_candidate),
    })
}
