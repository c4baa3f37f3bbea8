//! Bernstein operator evaluation and smoothness-modulus machinery on `[0, 1]`.
//!
//! The crate has four layers:
//!
//! - [`expr`], [`jet`], [`func`]: a small closed expression language with
//!   forward-mode jet arithmetic, so a function given as text can be evaluated
//!   together with its derivatives up to order 4 at any point of `[0, 1]`.
//! - [`bernstein`]: stable evaluation of the Bernstein polynomial `B_n f`
//!   (exact de Casteljau recursion for small `n`, log-space basis weights with
//!   compensated summation for large `n`), sup-norm estimates of `f - B_n f`,
//!   and the Voronovskaja residual `B_n f - f - phi^2 f''/(2n)`.
//! - [`smoothness`]: the weight `phi(x) = sqrt(x(1-x))`, weighted derivative
//!   norms, the second-order Ditzian-Totik modulus via its admissible-interval
//!   definition, classical first/second moduli, and a two-sided K-functional
//!   bracket.
//! - [`bounds`]: every inequality, threshold formula, and worked example as a
//!   checkable report with explicit constants and directional slack.
//!
//! All sup norms are grid estimates refined by golden-section search and are
//! reported as underestimates of the true supremum; the checkers in [`bounds`]
//! apply slack in the direction that keeps a reported "holds" honest.
//!
//! The crate is `no_std`-compatible (requires `alloc`); float math goes
//! through `libm` so results are identical with and without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bernstein;
pub mod bounds;
pub mod expr;
pub mod func;
pub mod grid;
pub mod jet;
pub mod smoothness;

mod math;

pub use bernstein::SampleVector;
pub use bounds::{BoundReport, CheckConfig, SandwichReport, ThresholdResult};
pub use expr::{ExprNode, ParseError};
pub use func::{builtin_corpus, FunctionSpec};
pub use grid::{GridConfig, NormEstimate};
pub use jet::{DomainError, Jet};
pub use smoothness::{KInterval, ModulusResult};

use alloc::string::String;
use core::fmt;

/// Any failure the crate can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Expression text did not parse.
    Parse(ParseError),
    /// Evaluation hit a point outside a node's admissible domain or produced
    /// a non-finite intermediate.
    Domain(DomainError),
    /// A grid or check configuration failed validation.
    Config(String),
    /// The operation needs derivatives beyond the function's guaranteed order.
    OrderTooLow { required: u8, available: u8 },
    /// The input function is affine (or otherwise degenerate) where the
    /// requested quantity is undefined.
    DegenerateInput(&'static str),
    /// A stated hypothesis of the inequality being checked does not hold for
    /// this input.
    Hypothesis(String),
    /// The check is not defined at this degree (e.g. a bound stated only
    /// from some minimal n on).
    DegreeOutOfRange { min: u32, n: u32 },
    /// A threshold search exhausted its horizon without finding an index.
    NotFound { n_max: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "{e}"),
            Error::Domain(e) => write!(f, "{e}"),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::OrderTooLow {
                required,
                available,
            } => write!(
                f,
                "derivative order {required} requested but only order {available} is guaranteed"
            ),
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::Hypothesis(msg) => write!(f, "hypothesis violation: {msg}"),
            Error::DegreeOutOfRange { min, n } => {
                write!(f, "the check is stated for n >= {min}, got n = {n}")
            }
            Error::NotFound { n_max } => {
                write!(f, "no index found up to the search horizon n_max = {n_max}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl From<DomainError> for Error {
    fn from(e: DomainError) -> Self {
        Error::Domain(e)
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
