//! Named functions on `[0, 1]`: an expression tree plus the highest
//! derivative order guaranteed finite, validated on a probe grid at
//! construction.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::expr::{self, ExprNode};
use crate::jet::{self, Jet};
use crate::math;
use crate::{Error, Result};

/// Points of the uniform probe grid used to validate a function at
/// construction time. Cheap early failure for inadmissible expressions; it
/// does not guarantee admissibility between probe points.
pub const PROBE_POINTS: usize = 257;

/// Second derivatives at or below this sup-norm (relative to the value scale)
/// classify a function as affine for the degenerate-input short circuits.
const AFFINE_TOL: f64 = 1e-12;

/// A function on `[0, 1]` defined by an expression tree, evaluable together
/// with derivatives up to `max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    name: String,
    body: ExprNode,
    max_order: u8,
}

impl FunctionSpec {
    /// Parse `src` and validate finiteness of derivatives `0..=max_order` on
    /// the probe grid.
    pub fn new(name: &str, src: &str, max_order: u8) -> Result<Self> {
        let body = expr::parse(src)?;
        Self::from_expr(name, body, max_order)
    }

    /// Wrap an existing tree, with the same probe validation as [`new`].
    ///
    /// [`new`]: FunctionSpec::new
    pub fn from_expr(name: &str, body: ExprNode, max_order: u8) -> Result<Self> {
        if max_order > jet::MAX_ORDER as u8 {
            return Err(Error::OrderTooLow {
                required: max_order,
                available: jet::MAX_ORDER as u8,
            });
        }
        probe(&body, max_order as usize)?;
        Ok(FunctionSpec {
            name: name.to_string(),
            body,
            max_order,
        })
    }

    /// Parse `src` and pick the largest order in `0..=4` whose derivatives
    /// stay finite on the probe grid. Errors if even plain evaluation fails.
    pub fn auto(name: &str, src: &str) -> Result<Self> {
        let body = expr::parse(src)?;
        let mut last_err = None;
        for order in (0..=jet::MAX_ORDER as u8).rev() {
            match probe(&body, order as usize) {
                Ok(()) => {
                    return Ok(FunctionSpec {
                        name: name.to_string(),
                        body,
                        max_order: order,
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.expect("probe ran at least once"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn body(&self) -> &ExprNode {
        &self.body
    }

    pub fn max_order(&self) -> u8 {
        self.max_order
    }

    /// Canonical text of the body.
    pub fn rendered(&self) -> String {
        self.body.render()
    }

    /// Function value at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(jet::eval_value(&self.body, x)?)
    }

    /// Value and derivatives `0..=order`; `order` must not exceed
    /// [`max_order`](FunctionSpec::max_order).
    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        if order > self.max_order as usize {
            return Err(Error::OrderTooLow {
                required: order as u8,
                available: self.max_order,
            });
        }
        Ok(jet::eval_jet(&self.body, x, order)?)
    }

    /// The k-th derivative at `x`.
    pub fn deriv(&self, x: f64, order: usize) -> Result<f64> {
        Ok(self.jet(x, order)?.deriv(order))
    }

    /// Whether the second derivative vanishes on the probe grid (relative to
    /// the function's value scale), i.e. the function is affine for the
    /// purposes of the degenerate-input short circuits.
    pub fn is_affine_on_probe(&self) -> Result<bool> {
        if self.max_order < 2 {
            return Err(Error::OrderTooLow {
                required: 2,
                available: self.max_order,
            });
        }
        let mut max_d2 = 0.0_f64;
        let mut max_val = 0.0_f64;
        for i in 0..PROBE_POINTS {
            let x = i as f64 / (PROBE_POINTS - 1) as f64;
            let j = self.jet(x, 2)?;
            max_d2 = max_d2.max(math::abs(j.d[2]));
            max_val = max_val.max(math::abs(j.d[0]));
        }
        Ok(max_d2 <= AFFINE_TOL * (1.0 + max_val))
    }
}

fn probe(body: &ExprNode, order: usize) -> Result<()> {
    for i in 0..PROBE_POINTS {
        let x = i as f64 / (PROBE_POINTS - 1) as f64;
        jet::eval_jet(body, x, order)?;
    }
    Ok(())
}

/// The named function corpus used throughout the checks and the CLI:
/// `x`, `x^2`, `x^3`, `exp`, `sin`, `cos`, `atan`, and `1/(1+x^2)`,
/// each carrying derivatives up to order 4.
pub fn builtin_corpus() -> Vec<FunctionSpec> {
    let specs = [
        ("x", "x"),
        ("x^2", "x^2"),
        ("x^3", "x^3"),
        ("exp", "exp(x)"),
        ("sin", "sin(x)"),
        ("cos", "cos(x)"),
        ("atan", "atan(x)"),
        ("1/(1+x^2)", "1/(1+x^2)"),
    ];
    specs
        .iter()
        .map(|(name, src)| {
            FunctionSpec::new(name, src, 4).expect("corpus member must validate")
        })
        .collect()
}

/// Look up a corpus member by name.
pub fn builtin(name: &str) -> Option<FunctionSpec> {
    builtin_corpus().into_iter().find(|f| f.name() == name)
}
