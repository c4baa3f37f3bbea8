//! Forward-mode jet arithmetic: value and derivatives of order up to 4,
//! propagated through an expression tree by Leibniz products and the
//! Faa di Bruno composition rule.

use core::fmt;

use crate::expr::{BinaryOp, ExprNode, UnaryOp};
use crate::math;

/// Highest derivative order the jet machinery carries.
pub const MAX_ORDER: usize = 4;

/// Binomial coefficients C(k, j) for k, j <= 4, used by the Leibniz rules.
const CHOOSE: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Value and derivatives 0..=4 of a function at a point: `d[k]` is the k-th
/// derivative. Entries above the order an evaluation was asked for are zero
/// filled and carry no meaning.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub d: [f64; 5],
}

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet {
            d: [c, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn variable(x: f64) -> Self {
        Jet {
            d: [x, 1.0, 0.0, 0.0, 0.0],
        }
    }

    /// The function value.
    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// The k-th derivative, k <= 4.
    pub fn deriv(&self, k: usize) -> f64 {
        self.d[k]
    }

    fn is_finite_up_to(&self, order: usize) -> bool {
        self.d[..=order].iter().all(|v| v.is_finite())
    }
}

/// Why an evaluation left the admissible domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainReason {
    DivisionByZero,
    LogNonPositive,
    SqrtOfNegative,
    /// sqrt/pow derivative at a zero base.
    DerivativeSingularAtZero,
    TanPole,
    /// Negative base with a non-integer exponent.
    PowNegativeBase,
    NonFiniteResult,
}

/// Evaluation failure, naming the node that produced it and the evaluation
/// point.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    /// Operator tag of the offending node.
    pub node: &'static str,
    /// The point of `[0, 1]` at which the expression was being evaluated.
    pub x: f64,
    pub reason: DomainReason,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.reason {
            DomainReason::DivisionByZero => "division by zero",
            DomainReason::LogNonPositive => "log of a non-positive value",
            DomainReason::SqrtOfNegative => "sqrt of a negative value",
            DomainReason::DerivativeSingularAtZero => "derivative is singular at a zero base",
            DomainReason::TanPole => "tan evaluated at a pole",
            DomainReason::PowNegativeBase => "negative base with non-integer exponent",
            DomainReason::NonFiniteResult => "non-finite result",
        };
        write!(f, "domain error in '{}' at x = {}: {}", self.node, self.x, what)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DomainError {}

fn err(node: &'static str, x: f64, reason: DomainReason) -> DomainError {
    DomainError { node, x, reason }
}

fn add(a: &Jet, b: &Jet, order: usize) -> Jet {
    let mut out = Jet::default();
    for k in 0..=order {
        out.d[k] = a.d[k] + b.d[k];
    }
    out
}

fn sub(a: &Jet, b: &Jet, order: usize) -> Jet {
    let mut out = Jet::default();
    for k in 0..=order {
        out.d[k] = a.d[k] - b.d[k];
    }
    out
}

fn neg(a: &Jet, order: usize) -> Jet {
    let mut out = Jet::default();
    for k in 0..=order {
        out.d[k] = -a.d[k];
    }
    out
}

/// Leibniz rule: (fg)^(k) = sum_j C(k,j) f^(j) g^(k-j).
#[allow(clippy::needless_range_loop)]
fn mul(a: &Jet, b: &Jet, order: usize) -> Jet {
    let mut out = Jet::default();
    for k in 0..=order {
        let mut acc = 0.0;
        for j in 0..=k {
            acc += CHOOSE[k][j] * a.d[j] * b.d[k - j];
        }
        out.d[k] = acc;
    }
    out
}

/// Division solved from the Leibniz expansion of `a = q * b`.
#[allow(clippy::needless_range_loop)]
fn div(a: &Jet, b: &Jet, order: usize, x: f64) -> Result<Jet, DomainError> {
    if b.d[0] == 0.0 {
        return Err(err("div", x, DomainReason::DivisionByZero));
    }
    let mut q = Jet::default();
    for k in 0..=order {
        let mut acc = a.d[k];
        for j in 0..k {
            acc -= CHOOSE[k][j] * q.d[j] * b.d[k - j];
        }
        q.d[k] = acc / b.d[0];
    }
    Ok(q)
}

/// Faa di Bruno to order 4: `chain[k]` holds the k-th derivative of the outer
/// function evaluated at `g`'s value.
fn compose(chain: &[f64; 5], g: &Jet, order: usize) -> Jet {
    let mut out = Jet::default();
    out.d[0] = chain[0];
    let g1 = g.d[1];
    let g2 = g.d[2];
    let g3 = g.d[3];
    let g4 = g.d[4];
    if order >= 1 {
        out.d[1] = chain[1] * g1;
    }
    if order >= 2 {
        out.d[2] = chain[2] * g1 * g1 + chain[1] * g2;
    }
    if order >= 3 {
        out.d[3] = chain[3] * g1 * g1 * g1 + 3.0 * chain[2] * g1 * g2 + chain[1] * g3;
    }
    if order >= 4 {
        out.d[4] = chain[4] * g1 * g1 * g1 * g1
            + 6.0 * chain[3] * g1 * g1 * g2
            + chain[2] * (3.0 * g2 * g2 + 4.0 * g1 * g3)
            + chain[1] * g4;
    }
    out
}

fn exp_jet(g: &Jet, order: usize) -> Jet {
    let e = math::exp(g.d[0]);
    compose(&[e, e, e, e, e], g, order)
}

fn log_jet(g: &Jet, order: usize, x: f64) -> Result<Jet, DomainError> {
    let u = g.d[0];
    if u <= 0.0 {
        return Err(err("log", x, DomainReason::LogNonPositive));
    }
    let inv = 1.0 / u;
    let inv2 = inv * inv;
    let chain = [
        math::ln(u),
        inv,
        -inv2,
        2.0 * inv2 * inv,
        -6.0 * inv2 * inv2,
    ];
    Ok(compose(&chain, g, order))
}

fn sin_jet(g: &Jet, order: usize) -> Jet {
    let s = math::sin(g.d[0]);
    let c = math::cos(g.d[0]);
    compose(&[s, c, -s, -c, s], g, order)
}

fn cos_jet(g: &Jet, order: usize) -> Jet {
    let s = math::sin(g.d[0]);
    let c = math::cos(g.d[0]);
    compose(&[c, -s, -c, s, c], g, order)
}

fn tan_jet(g: &Jet, order: usize, x: f64) -> Result<Jet, DomainError> {
    let c = math::cos(g.d[0]);
    if c == 0.0 {
        return Err(err("tan", x, DomainReason::TanPole));
    }
    let t = math::tan(g.d[0]);
    let s = 1.0 + t * t;
    let chain = [
        t,
        s,
        2.0 * t * s,
        s * (2.0 + 6.0 * t * t),
        s * t * (16.0 + 24.0 * t * t),
    ];
    Ok(compose(&chain, g, order))
}

fn atan_jet(g: &Jet, order: usize) -> Jet {
    let u = g.d[0];
    let q = 1.0 + u * u;
    let q2 = q * q;
    let chain = [
        math::atan(u),
        1.0 / q,
        -2.0 * u / q2,
        (6.0 * u * u - 2.0) / (q2 * q),
        24.0 * u * (1.0 - u * u) / (q2 * q2),
    ];
    compose(&chain, g, order)
}

fn sqrt_jet(g: &Jet, order: usize, x: f64) -> Result<Jet, DomainError> {
    let u = g.d[0];
    if u < 0.0 {
        return Err(err("sqrt", x, DomainReason::SqrtOfNegative));
    }
    if u == 0.0 {
        if order == 0 {
            return Ok(Jet::constant(0.0));
        }
        return Err(err("sqrt", x, DomainReason::DerivativeSingularAtZero));
    }
    let r = math::sqrt(u);
    let inv = 1.0 / u;
    let chain = [
        r,
        0.5 * r * inv,
        -0.25 * r * inv * inv,
        0.375 * r * inv * inv * inv,
        -0.9375 * r * inv * inv * inv * inv,
    ];
    Ok(compose(&chain, g, order))
}

/// Integer power by binary exponentiation over jet multiplication; exact on
/// polynomials and well defined at a zero base.
fn powi_jet(base: &Jet, p: i64, order: usize, x: f64) -> Result<Jet, DomainError> {
    if p == 0 {
        return Ok(Jet::constant(1.0));
    }
    let mut e = p.unsigned_abs();
    let mut acc = Jet::constant(1.0);
    let mut sq = *base;
    loop {
        if e & 1 == 1 {
            acc = mul(&acc, &sq, order);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = mul(&sq, &sq, order);
    }
    if p < 0 {
        return div(&Jet::constant(1.0), &acc, order, x).map_err(|mut e| {
            e.node = "pow";
            e
        });
    }
    Ok(acc)
}

/// Real constant power `u^p` for non-integer `p`; requires `u > 0`.
fn powc_jet(base: &Jet, p: f64, order: usize, x: f64) -> Result<Jet, DomainError> {
    let u = base.d[0];
    if u < 0.0 {
        return Err(err("pow", x, DomainReason::PowNegativeBase));
    }
    if u == 0.0 {
        if order == 0 && p > 0.0 {
            return Ok(Jet::constant(0.0));
        }
        return Err(err("pow", x, DomainReason::DerivativeSingularAtZero));
    }
    let mut chain = [0.0; 5];
    let mut coeff = 1.0;
    for (k, slot) in chain.iter_mut().enumerate() {
        *slot = coeff * math::powf(u, p - k as f64);
        coeff *= p - k as f64;
    }
    Ok(compose(&chain, base, order))
}

/// Round-trip-exact integer detection for exponents.
fn as_integer(p: f64) -> Option<i64> {
    if p.is_finite() && math::floor(p) == p && math::abs(p) <= 9.0e15 {
        Some(p as i64)
    } else {
        None
    }
}

/// Evaluate `node` at `x`, producing derivatives `0..=order` (order <= 4).
///
/// The caller guarantees admissibility: interior singularities (log of a
/// non-positive value, division by zero, derivative blow-ups) surface as
/// [`DomainError`]s naming the offending node.
pub fn eval_jet(node: &ExprNode, x: f64, order: usize) -> Result<Jet, DomainError> {
    debug_assert!(order <= MAX_ORDER);
    let out = match node {
        ExprNode::Constant(c) => Jet::constant(*c),
        ExprNode::Variable => Jet::variable(x),
        ExprNode::Unary(op, a) => {
            let g = eval_jet(a, x, order)?;
            match op {
                UnaryOp::Neg => neg(&g, order),
                UnaryOp::Exp => exp_jet(&g, order),
                UnaryOp::Log => log_jet(&g, order, x)?,
                UnaryOp::Sin => sin_jet(&g, order),
                UnaryOp::Cos => cos_jet(&g, order),
                UnaryOp::Tan => tan_jet(&g, order, x)?,
                UnaryOp::Atan => atan_jet(&g, order),
                UnaryOp::Sqrt => sqrt_jet(&g, order, x)?,
            }
        }
        ExprNode::Binary(op, a, b) => {
            let ja = eval_jet(a, x, order)?;
            match op {
                BinaryOp::Add => add(&ja, &eval_jet(b, x, order)?, order),
                BinaryOp::Sub => sub(&ja, &eval_jet(b, x, order)?, order),
                BinaryOp::Mul => mul(&ja, &eval_jet(b, x, order)?, order),
                BinaryOp::Div => div(&ja, &eval_jet(b, x, order)?, order, x)?,
                BinaryOp::Pow => match b.as_ref() {
                    ExprNode::Constant(p) => match as_integer(*p) {
                        Some(k) => powi_jet(&ja, k, order, x)?,
                        None => powc_jet(&ja, *p, order, x)?,
                    },
                    _ => {
                        // General f^g as exp(g * log f); needs f > 0.
                        let jb = eval_jet(b, x, order)?;
                        let lf = log_jet(&ja, order, x)
                            .map_err(|_| err("pow", x, DomainReason::PowNegativeBase))?;
                        exp_jet(&mul(&jb, &lf, order), order)
                    }
                },
            }
        }
    };
    let tag = match node {
        ExprNode::Constant(_) => "const",
        ExprNode::Variable => "x",
        ExprNode::Unary(op, _) => op.name(),
        ExprNode::Binary(op, _, _) => op.name(),
    };
    if !out.is_finite_up_to(order) {
        return Err(err(tag, x, DomainReason::NonFiniteResult));
    }
    Ok(out)
}

/// Plain value evaluation, cheaper than a full jet; used by the grid scans.
pub fn eval_value(node: &ExprNode, x: f64) -> Result<f64, DomainError> {
    let v = match node {
        ExprNode::Constant(c) => *c,
        ExprNode::Variable => x,
        ExprNode::Unary(op, a) => {
            let u = eval_value(a, x)?;
            match op {
                UnaryOp::Neg => -u,
                UnaryOp::Exp => math::exp(u),
                UnaryOp::Log => {
                    if u <= 0.0 {
                        return Err(err("log", x, DomainReason::LogNonPositive));
                    }
                    math::ln(u)
                }
                UnaryOp::Sin => math::sin(u),
                UnaryOp::Cos => math::cos(u),
                UnaryOp::Tan => {
                    if math::cos(u) == 0.0 {
                        return Err(err("tan", x, DomainReason::TanPole));
                    }
                    math::tan(u)
                }
                UnaryOp::Atan => math::atan(u),
                UnaryOp::Sqrt => {
                    if u < 0.0 {
                        return Err(err("sqrt", x, DomainReason::SqrtOfNegative));
                    }
                    math::sqrt(u)
                }
            }
        }
        ExprNode::Binary(op, a, b) => {
            let u = eval_value(a, x)?;
            let v = eval_value(b, x)?;
            match op {
                BinaryOp::Add => u + v,
                BinaryOp::Sub => u - v,
                BinaryOp::Mul => u * v,
                BinaryOp::Div => {
                    if v == 0.0 {
                        return Err(err("div", x, DomainReason::DivisionByZero));
                    }
                    u / v
                }
                BinaryOp::Pow => match b.as_ref() {
                    // Constant integer exponents are exact products; this
                    // mirrors the jet path so both report the same domain.
                    ExprNode::Constant(p) => match as_integer(*p) {
                        Some(k) => {
                            let mut e = k.unsigned_abs();
                            let mut acc = 1.0;
                            let mut sq = u;
                            while e > 0 {
                                if e & 1 == 1 {
                                    acc *= sq;
                                }
                                sq *= sq;
                                e >>= 1;
                            }
                            if k < 0 {
                                if acc == 0.0 {
                                    return Err(err("pow", x, DomainReason::DivisionByZero));
                                }
                                1.0 / acc
                            } else {
                                acc
                            }
                        }
                        None => {
                            if u < 0.0 {
                                return Err(err("pow", x, DomainReason::PowNegativeBase));
                            }
                            math::powf(u, *p)
                        }
                    },
                    _ => {
                        // Mirrors the jet route exp(g * log f) bit for bit.
                        if u <= 0.0 {
                            return Err(err("pow", x, DomainReason::PowNegativeBase));
                        }
                        math::exp(v * math::ln(u))
                    }
                },
            }
        }
    };
    if !v.is_finite() {
        let tag = match node {
            ExprNode::Constant(_) => "const",
            ExprNode::Variable => "x",
            ExprNode::Unary(op, _) => op.name(),
            ExprNode::Binary(op, _, _) => op.name(),
        };
        return Err(err(tag, x, DomainReason::NonFiniteResult));
    }
    Ok(v)
}
