//! Every inequality, threshold formula, and worked example as a checkable
//! report: the two-sided sandwich between `||f - B_n f||` and the weighted
//! second modulus, the Voronovskaja-residual bounds, the `A_n` quotient and
//! its bracket, and the explicit indices from which the lower estimates are
//! certified.
//!
//! Directional slack policy: every scanned quantity is a sup-underestimate,
//! so upper-bound checks inflate their right side by `slack` and lower-bound
//! checks deflate it. That prevents false failures from grid resolution
//! while keeping a reported "holds" meaningful.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bernstein::{self, SampleVector};
use crate::func::FunctionSpec;
use crate::grid::{self, GridConfig, NormEstimate};
use crate::math;
use crate::smoothness::{self, ModulusOrder, ModulusResult};
use crate::{Error, Result};

/// Grid sizes plus the relative slack applied by the inequality checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub grid: GridConfig,
    /// Relative margin in `[0, 0.5)`; default 1e-2.
    pub slack: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            grid: GridConfig::default(),
            slack: 1e-2,
        }
    }
}

impl CheckConfig {
    /// Reduced grids for long sweeps, same slack.
    pub fn coarse() -> Self {
        CheckConfig {
            grid: GridConfig::coarse(),
            ..CheckConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(0.0..0.5).contains(&self.slack) {
            return Err(Error::Config(format!(
                "slack must lie in [0, 0.5), got {}",
                self.slack
            )));
        }
        Ok(())
    }
}

/// Which way a claimed inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Claim is `left <= right`; slack inflates the right side.
    Upper,
    /// Claim is `left >= right`; slack deflates the right side.
    Lower,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        }
    }
}

/// Where one side of a report came from.
#[derive(Debug, Clone, PartialEq)]
pub enum SideMeta {
    /// A sup-norm scan over `[0, 1]`.
    Norm {
        grid: usize,
        refinements: usize,
        argmax: f64,
    },
    /// A modulus scan over `(h, x)`.
    Modulus {
        grid_h: usize,
        grid_x: usize,
        h_star: f64,
        x_star: f64,
    },
    /// A closed-form expression with no grid content.
    Formula,
}

impl From<&NormEstimate> for SideMeta {
    fn from(e: &NormEstimate) -> Self {
        SideMeta::Norm {
            grid: e.grid_size,
            refinements: e.refinement_rounds,
            argmax: e.argmax,
        }
    }
}

impl From<&ModulusResult> for SideMeta {
    fn from(m: &ModulusResult) -> Self {
        SideMeta::Modulus {
            grid_h: m.grid_h,
            grid_x: m.grid_x,
            h_star: m.h_star,
            x_star: m.x_star,
        }
    }
}

/// Grid metadata for both sides of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub left: SideMeta,
    pub right: SideMeta,
}

/// Absolute floor under the slack comparisons: scanned quantities carry
/// float noise of order 1e-15 times their scale, so a purely relative
/// criterion would flip on noise whenever the bound side is exactly zero
/// (affine inputs, constant-curvature inputs in the classical-moduli bound).
pub const NOISE_FLOOR: f64 = 1e-12;

/// One theorem-instance check: `left` against `right` (the bound side,
/// constant included) with the directional slack already applied to `holds`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub claim_id: String,
    pub n: u32,
    pub left: f64,
    pub right: f64,
    /// The explicit constant baked into `right`.
    pub constant: f64,
    pub holds: bool,
    pub slack: f64,
    pub direction: Direction,
    pub provenance: Provenance,
}

impl BoundReport {
    fn upper(
        claim_id: &str,
        n: u32,
        left: f64,
        right: f64,
        constant: f64,
        slack: f64,
        provenance: Provenance,
    ) -> Self {
        BoundReport {
            claim_id: claim_id.to_string(),
            n,
            left,
            right,
            constant,
            holds: left <= right * (1.0 + slack) + NOISE_FLOOR,
            slack,
            direction: Direction::Upper,
            provenance,
        }
    }

    fn lower(
        claim_id: &str,
        n: u32,
        left: f64,
        right: f64,
        constant: f64,
        slack: f64,
        provenance: Provenance,
    ) -> Self {
        BoundReport {
            claim_id: claim_id.to_string(),
            n,
            left,
            right,
            constant,
            holds: left >= right * (1.0 - slack) - NOISE_FLOOR,
            slack,
            direction: Direction::Lower,
            provenance,
        }
    }

    fn trivial(claim_id: &str, n: u32, constant: f64, slack: f64, direction: Direction) -> Self {
        BoundReport {
            claim_id: claim_id.to_string(),
            n,
            left: 0.0,
            right: 0.0,
            constant,
            holds: true,
            slack,
            direction,
            provenance: Provenance {
                left: SideMeta::Formula,
                right: SideMeta::Formula,
            },
        }
    }
}

/// The two sandwich reports plus the raw ratio `||f - B_n f|| / w2_phi`
/// (`None` for affine inputs, where both sides vanish).
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub upper: BoundReport,
    pub lower: BoundReport,
    pub ratio: Option<f64>,
}

/// An explicit threshold index together with the named inputs it was
/// computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub formula_id: String,
    pub inputs: Vec<(String, f64)>,
    pub n_value: u64,
}

impl ThresholdResult {
    fn new(id: &str, inputs: &[(&str, f64)], n_value: u64) -> Self {
        ThresholdResult {
            formula_id: id.to_string(),
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            n_value,
        }
    }
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 || v >= 1.0 {
        return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn inv_sqrt(n: u32) -> f64 {
    1.0 / math::sqrt(f64::from(n))
}

fn cube(x: f64) -> f64 {
    x * x * x
}

fn require_degree(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::DegreeOutOfRange { min, n });
    }
    Ok(())
}

/// Sandwich check at degree `n`:
/// upper claim `||f - B_n f|| <= 3 w2_phi(f, 1/sqrt n)` and lower claim
/// `||f - B_n f|| >= (mu0/32) w2_phi(f, 1/sqrt n)`. Affine inputs hold
/// trivially with both sides zero.
pub fn sandwich_check(
    f: &FunctionSpec,
    n: u32,
    mu0: f64,
    cc: &CheckConfig,
) -> Result<SandwichReport> {
    check_unit_open("mu0", mu0)?;
    require_degree(n, 1)?;
    let lower_const = mu0 / 32.0;
    if f.is_affine_on_probe()? {
        return Ok(SandwichReport {
            upper: BoundReport::trivial("eq1.5-upper", n, 3.0, cc.slack, Direction::Upper),
            lower: BoundReport::trivial("eq1.5-lower", n, lower_const, cc.slack, Direction::Lower),
            ratio: None,
        });
    }
    let err = bernstein::approx_error_norm(f, n, &cc.grid)?;
    let w2 = smoothness::dt_modulus2(f, inv_sqrt(n), &cc.grid)?;
    let prov = || Provenance {
        left: SideMeta::from(&err),
        right: SideMeta::from(&w2),
    };
    let ratio = if w2.value > 0.0 {
        Some(err.value / w2.value)
    } else {
        None
    };
    Ok(SandwichReport {
        upper: BoundReport::upper(
            "eq1.5-upper",
            n,
            err.value,
            3.0 * w2.value,
            3.0,
            cc.slack,
            prov(),
        ),
        lower: BoundReport::lower(
            "eq1.5-lower",
            n,
            err.value,
            lower_const * w2.value,
            lower_const,
            cc.slack,
            prov(),
        ),
        ratio,
    })
}

/// The largest `lambda` for which
/// `lambda ||phi^2 f''|| / n <= w2_phi(f, 1/sqrt n)` holds at this `n`,
/// i.e. `n * w2_phi(f, 1/sqrt n) / ||phi^2 f''||`.
pub fn lambda_estimate(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<f64> {
    require_degree(n, 1)?;
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "lambda estimate is undefined for affine functions (0/0)",
        ));
    }
    let w2 = smoothness::dt_modulus2(f, inv_sqrt(n), &cc.grid)?.value;
    let n2 = smoothness::weighted_norm(f, 2, 2, &cc.grid)?.value;
    Ok(f64::from(n) * w2 / n2)
}

/// Degrees checked by [`find_n0`]: every integer up to 1024, geometrically
/// thinned (powers of two) above that, plus the horizon itself.
fn sampled_degrees(n_max: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (2..=n_max.min(1024)).collect();
    let mut k = 2048u32;
    while k < n_max {
        out.push(k);
        match k.checked_mul(2) {
            Some(next) => k = next,
            None => break,
        }
    }
    if n_max > 1024 {
        out.push(n_max);
    }
    out
}

/// Smallest sampled degree from which the lambda estimate stays at or above
/// `lambda0` through the horizon.
pub fn find_n0(
    f: &FunctionSpec,
    lambda0: f64,
    n_max: u32,
    cc: &CheckConfig,
) -> Result<ThresholdResult> {
    if lambda0 <= 0.0 || !lambda0.is_finite() {
        return Err(Error::Config(format!(
            "lambda0 must be positive, got {lambda0}"
        )));
    }
    if n_max < 2 {
        return Err(Error::Config("n_max must be at least 2".to_string()));
    }
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "the threshold search is undefined for affine functions",
        ));
    }
    let n2 = smoothness::weighted_norm(f, 2, 2, &cc.grid)?.value;
    let mut start: Option<u32> = None;
    for &k in sampled_degrees(n_max).iter().rev() {
        let w2 = smoothness::dt_modulus2(f, inv_sqrt(k), &cc.grid)?.value;
        if f64::from(k) * w2 / n2 >= lambda0 {
            start = Some(k);
        } else {
            break;
        }
    }
    let n_value = start.ok_or(Error::NotFound { n_max })?;
    Ok(ThresholdResult::new(
        "n0",
        &[("lambda0", lambda0), ("phi2_d2_norm", n2)],
        u64::from(n_value),
    ))
}

/// The quotient
/// `A_n = [(5/(8n)) w1(f'', 1/sqrt n) + (13/(64n)) w2(f'', 1/sqrt n)]
///        / w2_phi(f, 1/sqrt n)`.
pub fn an_value(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<f64> {
    require_degree(n, 2)?;
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "A_n is undefined for affine functions (0/0)",
        ));
    }
    let d = inv_sqrt(n);
    let om1 = smoothness::classical_modulus(f, 2, ModulusOrder::First, d, &cc.grid)?.value;
    let om2 = smoothness::classical_modulus(f, 2, ModulusOrder::Second, d, &cc.grid)?.value;
    let w2 = smoothness::dt_modulus2(f, d, &cc.grid)?.value;
    let nf = f64::from(n);
    Ok((5.0 / (8.0 * nf) * om1 + 13.0 / (64.0 * nf) * om2) / w2)
}

/// The bracket term `(5/8) w1(f'', 1/sqrt n) + (13/64) w2(f'', 1/sqrt n)`
/// shared by both members of the `A_n` double inequality.
fn an_bracket_term(f: &FunctionSpec, n: u32, grid_cfg: &GridConfig) -> Result<f64> {
    let d = inv_sqrt(n);
    let om1 = smoothness::classical_modulus(f, 2, ModulusOrder::First, d, grid_cfg)?.value;
    let om2 = smoothness::classical_modulus(f, 2, ModulusOrder::Second, d, grid_cfg)?.value;
    Ok(5.0 / 8.0 * om1 + 13.0 / 64.0 * om2)
}

/// The two sides of the `A_n` double inequality:
/// `bracket/(16 ||phi^2 f''||) <= A_n <= bracket/(lambda0 ||phi^2 f''||)`,
/// the upper member being valid from the index of [`find_n0`] on.
pub fn an_bracket(
    f: &FunctionSpec,
    n: u32,
    lambda0: f64,
    cc: &CheckConfig,
) -> Result<(f64, f64)> {
    check_unit_open("lambda0", lambda0)?;
    require_degree(n, 2)?;
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "the A_n bracket is undefined for affine functions",
        ));
    }
    let n2 = smoothness::weighted_norm(f, 2, 2, &cc.grid)?.value;
    let bracket = an_bracket_term(f, n, &cc.grid)?;
    Ok((bracket / (16.0 * n2), bracket / (lambda0 * n2)))
}

/// Smallest degree from which the one-sided certificate
/// `1/32 - upper_bracket(A_n) >= mu0/32` holds, i.e.
/// `upper_bracket(A_n) <= (1 - mu0)/32`. The upper member of the `A_n`
/// bracket is nonincreasing in `n`, so a doubling ladder plus integer
/// bisection finds the smallest such degree.
pub fn find_n1(
    f: &FunctionSpec,
    mu0: f64,
    lambda0: f64,
    n_max: u32,
    cc: &CheckConfig,
) -> Result<ThresholdResult> {
    check_unit_open("mu0", mu0)?;
    check_unit_open("lambda0", lambda0)?;
    if n_max < 2 {
        return Err(Error::Config("n_max must be at least 2".to_string()));
    }
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "the certificate search is undefined for affine functions",
        ));
    }
    let n2 = smoothness::weighted_norm(f, 2, 2, &cc.grid)?.value;
    let target = (1.0 - mu0) / 32.0;
    let cond = |n: u32| -> Result<bool> {
        Ok(an_bracket_term(f, n, &cc.grid)? / (lambda0 * n2) <= target)
    };

    let mut prev = 1u32;
    let mut probe = 2u32;
    let first_true = loop {
        if cond(probe)? {
            break probe;
        }
        if probe >= n_max {
            return Err(Error::NotFound { n_max });
        }
        prev = probe;
        probe = probe.saturating_mul(2).min(n_max);
    };
    let mut lo = prev;
    let mut hi = first_true;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if cond(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdResult::new(
        "n1",
        &[
            ("mu0", mu0),
            ("lambda0", lambda0),
            ("phi2_d2_norm", n2),
            ("target", target),
        ],
        u64::from(hi),
    ))
}

/// The explicit class threshold `n_1 = [1024 M^2 / m^2] + 1` for functions
/// with `||f'''|| <= M` and `|f''| >= m`.
pub fn corollary1_threshold(m_upper: f64, m_lower: f64) -> Result<ThresholdResult> {
    if m_upper <= 0.0 || m_lower <= 0.0 || !m_upper.is_finite() || !m_lower.is_finite() {
        return Err(Error::Config(format!(
            "the class bounds must be positive, got M = {m_upper}, m = {m_lower}"
        )));
    }
    let ratio = 1024.0 * m_upper * m_upper / (m_lower * m_lower);
    if !ratio.is_finite() || ratio >= 9.0e18 {
        return Err(Error::Config(format!(
            "threshold 1024 M^2/m^2 = {ratio} overflows the search range"
        )));
    }
    Ok(ThresholdResult::new(
        "corollary1-n1",
        &[("M", m_upper), ("m", m_lower), ("1024M^2/m^2", ratio)],
        math::floor(ratio) as u64 + 1,
    ))
}

/// The certified lower estimate with constant 1/64:
/// `||f - B_n f|| >= (1/64) w2_phi(f, 1/sqrt n)` for
/// `n >= corollary1_threshold(M, m)`. `M` and `m` are estimated on the grid
/// unless supplied explicitly (explicit values win).
pub fn corollary1_check(
    f: &FunctionSpec,
    n: u32,
    explicit_bounds: Option<(f64, f64)>,
    cc: &CheckConfig,
) -> Result<BoundReport> {
    require_degree(n, 1)?;
    let (m_upper, m_lower) = match explicit_bounds {
        Some(pair) => pair,
        None => {
            if f.max_order() < 3 {
                return Err(Error::Hypothesis(
                    "the class bound needs a third derivative (max_order >= 3)".to_string(),
                ));
            }
            let m3 = smoothness::weighted_norm(f, 0, 3, &cc.grid)?.value;
            let (m2_min, _) =
                grid::inf_abs_on_unit_interval(|x| Ok(f.jet(x, 2)?.deriv(2)), &cc.grid)?;
            (m3, m2_min)
        }
    };
    if m_lower <= 1e-9 {
        return Err(Error::Hypothesis(format!(
            "|f''| is not bounded away from zero on [0, 1] (inf estimate {m_lower})"
        )));
    }
    // M = 0 (vanishing third derivative) degenerates the class threshold
    // to 1; the strict formula itself demands M > 0.
    let threshold_n = if m_upper > 0.0 {
        corollary1_threshold(m_upper, m_lower)?.n_value
    } else {
        1
    };
    if u64::from(n) < threshold_n {
        return Err(Error::Hypothesis(format!(
            "n = {n} is below the class threshold n_1 = {threshold_n} \
             (M = {m_upper}, m = {m_lower})"
        )));
    }
    let err = bernstein::approx_error_norm(f, n, &cc.grid)?;
    let w2 = smoothness::dt_modulus2(f, inv_sqrt(n), &cc.grid)?;
    Ok(BoundReport::lower(
        "cor1",
        n,
        err.value,
        w2.value / 64.0,
        1.0 / 64.0,
        cc.slack,
        Provenance {
            left: SideMeta::from(&err),
            right: SideMeta::from(&w2),
        },
    ))
}

/// Residual bound with the modulus on the right:
/// `||B_n f - f - phi^2 f''/(2n)|| <= 4 w2_phi(f, 1/sqrt n)` (valid from an
/// index the caller certifies via [`find_n0`] at `lambda0 = 1/2`).
pub fn theorem3_check(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<BoundReport> {
    require_degree(n, 1)?;
    if f.is_affine_on_probe()? {
        return Ok(BoundReport::trivial("eq2.8", n, 4.0, cc.slack, Direction::Upper));
    }
    let left = bernstein::voronovskaja_residual_norm(f, n, &cc.grid)?;
    let w2 = smoothness::dt_modulus2(f, inv_sqrt(n), &cc.grid)?;
    Ok(BoundReport::upper(
        "eq2.8",
        n,
        left.value,
        4.0 * w2.value,
        4.0,
        cc.slack,
        Provenance {
            left: SideMeta::from(&left),
            right: SideMeta::from(&w2),
        },
    ))
}

/// Residual bound through the classical moduli of `f''`:
/// `||B_n f - f - phi^2 f''/(2n)||
///  <= (5/(8n)) w1(f'', 1/sqrt n) + (13/(64n)) w2(f'', 1/sqrt n)`, `n >= 2`.
pub fn theorem4_check(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<BoundReport> {
    require_degree(n, 2)?;
    if f.is_affine_on_probe()? {
        return Ok(BoundReport::trivial("eq2.9", n, 1.0, cc.slack, Direction::Upper));
    }
    let d = inv_sqrt(n);
    let left = bernstein::voronovskaja_residual_norm(f, n, &cc.grid)?;
    let om1 = smoothness::classical_modulus(f, 2, ModulusOrder::First, d, &cc.grid)?;
    let om2 = smoothness::classical_modulus(f, 2, ModulusOrder::Second, d, &cc.grid)?;
    let nf = f64::from(n);
    let right = 5.0 / (8.0 * nf) * om1.value + 13.0 / (64.0 * nf) * om2.value;
    Ok(BoundReport::upper(
        "eq2.9",
        n,
        left.value,
        right,
        1.0,
        cc.slack,
        Provenance {
            left: SideMeta::from(&left),
            right: SideMeta::from(&om1),
        },
    ))
}

/// Residual bound with the weighted third derivative:
/// `||B_n f - f - phi^2 f''/(2n)|| <= n^(-3/2) ||phi^3 f'''||`, `n >= 12`.
pub fn theorem_e_check(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<BoundReport> {
    require_degree(n, 12)?;
    if f.max_order() < 3 {
        return Err(Error::Hypothesis(
            "the weighted-third-derivative bound needs max_order >= 3".to_string(),
        ));
    }
    if f.is_affine_on_probe()? {
        return Ok(BoundReport::trivial("eq2.7", n, 1.0, cc.slack, Direction::Upper));
    }
    let left = bernstein::voronovskaja_residual_norm(f, n, &cc.grid)?;
    let n3 = smoothness::weighted_norm(f, 3, 3, &cc.grid)?;
    let right = math::powf(f64::from(n), -1.5) * n3.value;
    Ok(BoundReport::upper(
        "eq2.7",
        n,
        left.value,
        right,
        1.0,
        cc.slack,
        Provenance {
            left: SideMeta::from(&left),
            right: SideMeta::from(&n3),
        },
    ))
}

/// Modulus cap `w2_phi(f, 1/sqrt n) <= 16 ||phi^2 f''|| / n`, the constant
/// 16 being `1/A_1`.
pub fn modulus_cap_check(f: &FunctionSpec, n: u32, cc: &CheckConfig) -> Result<BoundReport> {
    require_degree(n, 1)?;
    if f.is_affine_on_probe()? {
        return Ok(BoundReport::trivial("eq2.4", n, 16.0, cc.slack, Direction::Upper));
    }
    let w2 = smoothness::dt_modulus2(f, inv_sqrt(n), &cc.grid)?;
    let n2 = smoothness::weighted_norm(f, 2, 2, &cc.grid)?;
    Ok(BoundReport::upper(
        "eq2.4",
        n,
        w2.value,
        16.0 * n2.value / f64::from(n),
        16.0,
        cc.slack,
        Provenance {
            left: SideMeta::from(&w2),
            right: SideMeta::from(&n2),
        },
    ))
}

/// Variant of the extra-smoothness threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Remark3Variant {
    /// Four continuous derivatives: bound the bracket with unweighted
    /// `||f'''||` and `||f''''||`, search the smallest degree by bisection.
    C4,
    /// Weighted third derivative: closed-form integer-part formula.
    W3Phi,
}

/// The smallest degree `n_2` that the certificate index must exceed, under
/// the extra smoothness of `variant`.
pub fn remark3_n2(
    f: &FunctionSpec,
    lambda0: f64,
    mu0: f64,
    variant: Remark3Variant,
    cc: &CheckConfig,
) -> Result<ThresholdResult> {
    check_unit_open("lambda0", lambda0)?;
    check_unit_open("mu0", mu0)?;
    let needed = match variant {
        Remark3Variant::C4 => 4,
        Remark3Variant::W3Phi => 3,
    };
    if f.max_order() < needed {
        return Err(Error::Hypothesis(format!(
            "this threshold variant needs max_order >= {needed}"
        )));
    }
    if f.is_affine_on_probe()? {
        return Err(Error::DegenerateInput(
            "the threshold is undefined for affine functions",
        ));
    }
    let n2_norm = smoothness::weighted_norm(f, 2, 2, &cc.grid)?.value;
    match variant {
        Remark3Variant::C4 => {
            let m3 = smoothness::weighted_norm(f, 0, 3, &cc.grid)?.value;
            let m4 = smoothness::weighted_norm(f, 0, 4, &cc.grid)?.value;
            let target = lambda0 * n2_norm * (1.0 - mu0) / 32.0;
            let lhs = |n: u64| {
                let nf = n as f64;
                5.0 / (8.0 * math::sqrt(nf)) * m3 + 13.0 / (64.0 * nf) * m4
            };
            let inputs: &[(&str, f64)] = &[
                ("lambda0", lambda0),
                ("mu0", mu0),
                ("d3_norm", m3),
                ("d4_norm", m4),
                ("phi2_d2_norm", n2_norm),
                ("target", target),
            ];
            if lhs(1) <= target {
                return Ok(ThresholdResult::new("n2-c4", inputs, 1));
            }
            let mut lo = 1u64;
            let mut hi = 2u64;
            while lhs(hi) > target {
                lo = hi;
                hi = hi.saturating_mul(2);
                if hi >= 1 << 62 {
                    return Err(Error::Config(
                        "the threshold exceeds the search range".to_string(),
                    ));
                }
            }
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if lhs(mid) <= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(ThresholdResult::new("n2-c4", inputs, hi))
        }
        Remark3Variant::W3Phi => {
            let n3 = smoothness::weighted_norm(f, 3, 3, &cc.grid)?.value;
            let ratio = 32.0 * n3 / (lambda0 * (1.0 - mu0) * n2_norm);
            let value = ratio * ratio;
            if !value.is_finite() || value >= 9.0e18 {
                return Err(Error::Config(
                    "the threshold exceeds the search range".to_string(),
                ));
            }
            Ok(ThresholdResult::new(
                "n2-w3phi",
                &[
                    ("lambda0", lambda0),
                    ("mu0", mu0),
                    ("phi3_d3_norm", n3),
                    ("phi2_d2_norm", n2_norm),
                    ("ratio", ratio),
                ],
                math::floor(value) as u64 + 1,
            ))
        }
    }
}

/// The explicit thresholds of the three worked examples, every supporting
/// constant included under a stable key. Both readings of the cosine
/// threshold are emitted (the printed `[1024/cos 1] + 1` and the
/// class-formula `[1024/cos^2 1] + 1`), as are both candidates for the sine
/// index (printed constant 212 and the rederived 106).
pub fn example_thresholds() -> Vec<ThresholdResult> {
    let e = core::f64::consts::E;
    let cos1 = math::cos(1.0);
    let sin_half = math::sin(0.5);
    let lambda0 = 32.0 / (27.0 * cube(core::f64::consts::PI));
    let mu0 = 0.5;

    let mut out = Vec::new();

    let e_sq = 1024.0 * e * e;
    out.push(ThresholdResult::new(
        "example1-exp-n1",
        &[("M", e), ("m", 1.0), ("1024e^2", e_sq)],
        math::floor(e_sq) as u64 + 1,
    ));

    let printed = 1024.0 / cos1;
    out.push(ThresholdResult::new(
        "example2-cos-n1-as-published",
        &[("cos(1)", cos1), ("1024/cos(1)", printed)],
        math::floor(printed) as u64 + 1,
    ));
    let by_formula = 1024.0 / (cos1 * cos1);
    out.push(ThresholdResult::new(
        "example2-cos-n1-corollary-formula",
        &[("M", 1.0), ("m", cos1), ("1024M^2/m^2", by_formula)],
        math::floor(by_formula) as u64 + 1,
    ));

    let sin_inputs = |c: f64| {
        [
            ("c", c),
            ("lambda0", lambda0),
            ("mu0", mu0),
            ("sin(1/2)", sin_half),
            ("max_x_phi^2", 4.0 / 27.0),
            ("quarter_sin_half", 0.25 * sin_half),
        ]
    };
    for (id, c) in [
        ("example3-sin-n2-as-published", 212.0),
        ("example3-sin-n2-rederived", 106.0),
    ] {
        let root = c / (lambda0 * (1.0 - mu0) * sin_half);
        out.push(ThresholdResult::new(
            id,
            &sin_inputs(c),
            math::floor(root * root) as u64 + 1,
        ));
    }

    out
}

/// Sup norm of `n (B_n f - f) - phi^2 f'' / 2`, the quantity whose uniform
/// decay witnesses the Voronovskaja limit.
pub fn voronovskaja_uniform_gap(
    f: &FunctionSpec,
    n: u32,
    grid_cfg: &GridConfig,
) -> Result<NormEstimate> {
    let s = SampleVector::sample(f, n)?;
    let nf = f64::from(n);
    grid::sup_abs_on_unit_interval(
        |x| {
            let j = f.jet(x, 2)?;
            Ok(nf * (s.eval(x) - j.value()) - x * (1.0 - x) * j.deriv(2) / 2.0)
        },
        grid_cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{builtin, builtin_corpus};

    fn spec(src: &str) -> FunctionSpec {
        FunctionSpec::new(src, src, 4).unwrap()
    }

    fn cc() -> CheckConfig {
        CheckConfig::coarse()
    }

    #[test]
    fn sandwich_quadratic_closed_forms() {
        // E = 1/(4n), W = 1/(2n), ratio 1/2.
        let r = sandwich_check(&spec("x^2"), 100, 0.5, &cc()).unwrap();
        assert!((r.upper.left - 0.0025).abs() < 1e-8);
        assert!((r.upper.right - 3.0 * 0.005).abs() < 1e-7);
        assert!((r.ratio.unwrap() - 0.5).abs() < 1e-4);
        assert!(r.upper.holds && r.lower.holds);
    }

    #[test]
    fn sandwich_affine_short_circuits() {
        let r = sandwich_check(&spec("1+0.5*x"), 17, 0.9, &cc()).unwrap();
        assert!(r.upper.holds && r.lower.holds);
        assert_eq!(r.upper.left, 0.0);
        assert_eq!(r.lower.right, 0.0);
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn lambda_estimate_is_one_for_quadratics() {
        for n in [2u32, 10, 100] {
            let l = lambda_estimate(&spec("x^2"), n, &cc()).unwrap();
            assert!((l - 1.0).abs() < 1e-3, "n={n}: {l}");
        }
    }

    #[test]
    fn lambda_estimate_rejects_affine_input() {
        assert!(matches!(
            lambda_estimate(&spec("x"), 10, &cc()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn lambda_estimate_respects_the_sixteen_cap() {
        for f in ["exp", "sin"] {
            let f = builtin(f).unwrap();
            for n in [2u32, 20, 100] {
                let l = lambda_estimate(&f, n, &cc()).unwrap();
                assert!(l > 0.0 && l <= 16.0 * 1.001, "{} n={n}: {l}", f.name());
            }
        }
    }

    #[test]
    fn find_n0_quadratic_and_unreachable_targets() {
        let t = find_n0(&spec("x^2"), 0.9, 64, &cc()).unwrap();
        assert_eq!(t.n_value, 2);
        // The estimate is identically 1, so 1.5 is never reached.
        assert!(matches!(
            find_n0(&spec("x^2"), 1.5, 64, &cc()),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn find_n0_sine_matches_the_worked_example() {
        let lambda0 = 32.0 / (27.0 * cube(core::f64::consts::PI));
        let t = find_n0(&builtin("sin").unwrap(), lambda0, 64, &cc()).unwrap();
        assert_eq!(t.n_value, 2);
    }

    #[test]
    fn sampled_degrees_are_dense_then_thinned() {
        let d = sampled_degrees(100);
        assert_eq!(d.first(), Some(&2));
        assert_eq!(d.last(), Some(&100));
        assert_eq!(d.len(), 99);
        let d = sampled_degrees(1_000_000);
        assert!(d.contains(&1024) && d.contains(&2048) && d.contains(&524288));
        assert_eq!(d.last(), Some(&1_000_000));
        assert!(d.len() < 1100);
    }

    #[test]
    fn an_value_cubic_closed_form() {
        // f'' = 6x: w1 = 6d, w2 = 0, dt modulus = (8/9)/n, so
        // A_n = (5/(8n)) 6/sqrt(n) * 9n/8 = (270/64)/sqrt(n).
        let a = an_value(&spec("x^3"), 100, &cc()).unwrap();
        let expected = 270.0 / 64.0 / 10.0;
        assert!((a - expected).abs() < 2e-3, "{a} vs {expected}");
    }

    #[test]
    fn an_value_of_constant_curvature_is_zero() {
        let a = an_value(&spec("x^2"), 50, &cc()).unwrap();
        assert!(a.abs() < 1e-12);
    }

    #[test]
    fn an_decays_and_bracket_contains_it() {
        for (name, lambda0) in [
            ("exp", 0.5),
            ("sin", 32.0 / (27.0 * cube(core::f64::consts::PI))),
            ("x^3", 0.9),
        ] {
            let f = builtin(name).unwrap_or_else(|| spec(name));
            let a100 = an_value(&f, 100, &cc()).unwrap();
            let a400 = an_value(&f, 400, &cc()).unwrap();
            assert!(a400 < a100, "{name}: {a400} !< {a100}");
            for n in [100u32, 400] {
                let a = an_value(&f, n, &cc()).unwrap();
                let (lo, hi) = an_bracket(&f, n, lambda0, &cc()).unwrap();
                assert!(
                    lo <= a * (1.0 + 1e-9) && a <= hi * (1.0 + 1e-9),
                    "{name} n={n}: {lo} <= {a} <= {hi}"
                );
            }
        }
    }

    #[test]
    fn bracket_contains_an_across_the_whole_corpus() {
        // lambda0 = 1/2 is reached by every corpus member from small n on,
        // which makes the upper member of the bracket valid here.
        for f in builtin_corpus() {
            if f.is_affine_on_probe().unwrap() {
                continue;
            }
            for n in [100u32, 500] {
                let a = an_value(&f, n, &cc()).unwrap();
                let (lo, hi) = an_bracket(&f, n, 0.5, &cc()).unwrap();
                assert!(
                    lo <= a + 1e-12 && a <= hi + 1e-12,
                    "{} n={n}: bracket [{lo}, {hi}] misses {a}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn find_n1_for_sine_stays_below_the_worked_example_index() {
        let lambda0 = 32.0 / (27.0 * cube(core::f64::consts::PI));
        let t = find_n1(&builtin("sin").unwrap(), 0.5, lambda0, 100_000_000, &cc()).unwrap();
        let n2_printed = example_thresholds()
            .into_iter()
            .find(|t| t.formula_id == "example3-sin-n2-as-published")
            .unwrap()
            .n_value;
        assert!(
            t.n_value <= n2_printed,
            "n_1 = {} exceeds the printed index {n2_printed}",
            t.n_value
        );
        assert!(t.n_value > 1_000_000, "n_1 = {} is suspiciously small", t.n_value);
    }

    #[test]
    fn find_n1_immediate_for_constant_curvature() {
        let t = find_n1(&spec("x^2"), 0.99, 0.5, 1000, &cc()).unwrap();
        assert_eq!(t.n_value, 2);
    }

    #[test]
    fn find_n1_certificate_is_sound_for_cubic() {
        let t = find_n1(&spec("x^3"), 0.5, 0.9, 1_000_000, &cc()).unwrap();
        let n1 = t.n_value as u32;
        assert!(n1 > 2 && n1 <= 1_000_000);
        for n in [n1, n1 + 1, 2 * n1] {
            let r = sandwich_check(&spec("x^3"), n, 0.5, &cc()).unwrap();
            assert!(r.lower.holds, "lower sandwich fails at n = {n}");
        }
    }

    #[test]
    fn corollary_threshold_values() {
        assert_eq!(corollary1_threshold(1.0, 1.0).unwrap().n_value, 1025);
        let e = core::f64::consts::E;
        assert_eq!(corollary1_threshold(e, 1.0).unwrap().n_value, 7567);
        let c = libm::cos(1.0);
        assert_eq!(corollary1_threshold(1.0, c).unwrap().n_value, 3508);
        assert!(corollary1_threshold(0.0, 1.0).is_err());
        assert!(corollary1_threshold(1.0, -2.0).is_err());
    }

    #[test]
    fn corollary_threshold_is_monotone() {
        let base = corollary1_threshold(2.0, 1.0).unwrap().n_value;
        assert!(corollary1_threshold(3.0, 1.0).unwrap().n_value >= base);
        assert!(corollary1_threshold(2.0, 2.0).unwrap().n_value <= base);
    }

    #[test]
    fn corollary_check_rejects_vanishing_curvature() {
        let err = corollary1_check(&builtin("sin").unwrap(), 5000, None, &cc()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)), "{err}");
    }

    #[test]
    fn corollary_check_rejects_degrees_below_threshold() {
        let err = corollary1_check(&builtin("exp").unwrap(), 100, None, &cc()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn residual_bounds_hold_for_cubic_at_twelve() {
        let f = spec("x^3");
        let r = theorem_e_check(&f, 12, &cc()).unwrap();
        // Closed forms: left = (1/(6 sqrt 3))/144, right = 0.75 * 12^(-3/2).
        let left = 1.0 / (6.0 * libm::sqrt(3.0)) / 144.0;
        let right = 6.0 * 0.125 * libm::pow(12.0, -1.5);
        assert!((r.left - left).abs() < 1e-6, "{} vs {left}", r.left);
        assert!((r.right - right).abs() < 1e-6, "{} vs {right}", r.right);
        assert!(r.holds);
    }

    #[test]
    fn residual_bounds_trivial_for_quadratic() {
        let f = spec("x^2");
        for check in [theorem3_check, theorem4_check] {
            let r = check(&f, 50, &cc()).unwrap();
            assert!(r.holds, "{}", r.claim_id);
            assert!(r.left <= 1e-10);
        }
        let r = theorem_e_check(&f, 50, &cc()).unwrap();
        assert!(r.holds && r.left <= 1e-10);
    }

    #[test]
    fn residual_bound_preconditions() {
        assert!(matches!(
            theorem4_check(&spec("x^2"), 1, &cc()),
            Err(Error::DegreeOutOfRange { min: 2, n: 1 })
        ));
        assert!(matches!(
            theorem_e_check(&spec("x^2"), 11, &cc()),
            Err(Error::DegreeOutOfRange { min: 12, n: 11 })
        ));
        let low_order = FunctionSpec::new("f", "x^2", 2).unwrap();
        assert!(matches!(
            theorem_e_check(&low_order, 20, &cc()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn remark3_thresholds() {
        // Vanishing higher derivatives give the immediate index.
        let t = remark3_n2(&spec("x^2"), 0.5, 0.5, Remark3Variant::C4, &cc()).unwrap();
        assert_eq!(t.n_value, 1);
        let t = remark3_n2(&spec("x^2"), 0.5, 0.5, Remark3Variant::W3Phi, &cc()).unwrap();
        assert_eq!(t.n_value, 1);

        // The closed form for exp against independently scanned norms.
        let f = builtin("exp").unwrap();
        let t = remark3_n2(&f, 0.5, 0.5, Remark3Variant::W3Phi, &cc()).unwrap();
        let dense = 200_001usize;
        let mut n3 = 0.0_f64;
        let mut n2 = 0.0_f64;
        for i in 0..dense {
            let x = i as f64 / (dense - 1) as f64;
            let w = (x * (1.0 - x)).max(0.0);
            let ex = libm::exp(x);
            n3 = n3.max(w * libm::sqrt(w) * ex);
            n2 = n2.max(w * ex);
        }
        let expected = {
            let ratio = 128.0 * n3 / n2;
            libm::floor(ratio * ratio) as u64 + 1
        };
        let got = t.n_value;
        let diff = got.abs_diff(expected);
        assert!(
            diff <= expected / 1000 + 2,
            "w3phi threshold {got} vs dense-grid oracle {expected}"
        );

        // The bisection variant satisfies its defining inequality tightly.
        let t = remark3_n2(&f, 0.5, 0.5, Remark3Variant::C4, &cc()).unwrap();
        let n = t.n_value;
        let m3 = smoothness::weighted_norm(&f, 0, 3, &cc().grid).unwrap().value;
        let m4 = smoothness::weighted_norm(&f, 0, 4, &cc().grid).unwrap().value;
        let n2_norm = smoothness::weighted_norm(&f, 2, 2, &cc().grid).unwrap().value;
        let target = 0.5 * n2_norm * 0.5 / 32.0;
        let lhs = |n: u64| 5.0 / (8.0 * libm::sqrt(n as f64)) * m3 + 13.0 / (64.0 * n as f64) * m4;
        assert!(lhs(n) <= target);
        assert!(lhs(n - 1) > target);
    }

    #[test]
    fn example_table_contains_all_published_indices() {
        let all = example_thresholds();
        let by_id = |id: &str| {
            all.iter()
                .find(|t| t.formula_id == id)
                .unwrap_or_else(|| panic!("missing {id}"))
        };
        assert_eq!(by_id("example1-exp-n1").n_value, 7567);
        assert_eq!(by_id("example2-cos-n1-as-published").n_value, 1896);
        assert_eq!(by_id("example2-cos-n1-corollary-formula").n_value, 3508);
        let sin_printed = by_id("example3-sin-n2-as-published");
        assert!(sin_printed.n_value > 100_000_000 && sin_printed.n_value < 1_000_000_000);
        let rederived = by_id("example3-sin-n2-rederived").n_value;
        assert!(rederived < sin_printed.n_value);
        // Deterministic across calls.
        assert_eq!(all, example_thresholds());
    }

    #[test]
    fn voronovskaja_gap_decays_uniformly() {
        let grid = GridConfig::coarse();
        for f in builtin_corpus() {
            let mut prev = f64::INFINITY;
            for n in [10u32, 20, 40, 80, 160] {
                let g = voronovskaja_uniform_gap(&f, n, &grid).unwrap().value;
                assert!(
                    g <= prev * 1.05 + 1e-12,
                    "{} at n={n}: {g} vs previous {prev}",
                    f.name()
                );
                prev = g;
            }
            assert!(prev < 0.05, "{} gap at n=160: {prev}", f.name());
        }
    }

    #[test]
    fn modulus_cap_check_reports() {
        let r = modulus_cap_check(&builtin("exp").unwrap(), 100, &cc()).unwrap();
        assert!(r.holds);
        assert_eq!(r.constant, 16.0);
    }

    #[test]
    fn config_validation() {
        assert!(CheckConfig::default().validate().is_ok());
        let bad = CheckConfig {
            slack: 0.7,
            ..CheckConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
