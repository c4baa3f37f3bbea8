//! Evaluation of the Bernstein polynomial
//! `B_n(f; x) = sum_k f(k/n) C(n,k) x^k (1-x)^(n-k)` and the sup-norm
//! quantities built on it.
//!
//! Two evaluation routes:
//!
//! - exact de Casteljau recursion for `n <= 64` (quadratic cost, the
//!   high-trust oracle);
//! - log-space basis weights above that: `ln C(n,k)` from a compensated
//!   ln-factorial table, the max exponent subtracted before exponentiation,
//!   compensated summation, and normalization by the summed weights. The
//!   basis weights are log-concave in `k`, so only the window of terms within
//!   `exp(-60)` of the peak contributes above rounding; this keeps single
//!   evaluations `O(sqrt n)` and scales far past `n = 1e5`.

use alloc::vec::Vec;

use crate::func::FunctionSpec;
use crate::grid::{self, GridConfig, NormEstimate};
use crate::math::{self, CompensatedSum};
use crate::{Error, Result};

/// Largest degree evaluated by the exact de Casteljau recursion.
pub const DE_CASTELJAU_MAX_N: u32 = 64;

/// Log-weight drop (relative to the peak term) below which terms are
/// discarded; exp(-60) ~ 9e-27 leaves the sum unchanged at f64 precision.
const LOG_WEIGHT_CUTOFF: f64 = 60.0;

/// Samples `f(k/n)`, `k = 0..=n`, plus the ln-factorial table the log-space
/// route needs. Immutable after construction and safe to share.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    n: u32,
    values: Vec<f64>,
    ln_fact: Vec<f64>,
}

impl SampleVector {
    /// Sample `f` at the `n + 1` equispaced nodes.
    pub fn sample(f: &FunctionSpec, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config(alloc::string::String::from(
                "Bernstein degree n must be at least 1",
            )));
        }
        let nf = f64::from(n);
        let mut values = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            values.push(f.eval(f64::from(k) / nf)?);
        }
        Self::from_values(values)
    }

    /// Wrap raw sample values; the length determines `n`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config(alloc::string::String::from(
                "a sample vector needs at least two entries",
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(alloc::string::String::from(
                "sample values must be finite",
            )));
        }
        let n = (values.len() - 1) as u32;
        let mut ln_fact = Vec::with_capacity(values.len());
        ln_fact.push(0.0);
        let mut acc = CompensatedSum::new();
        for k in 1..=n {
            acc.add(math::ln(f64::from(k)));
            ln_fact.push(acc.total());
        }
        Ok(SampleVector {
            n,
            values,
            ln_fact,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluate `B_n f` at `x`, dispatching on the degree.
    pub fn eval(&self, x: f64) -> f64 {
        if self.n <= DE_CASTELJAU_MAX_N {
            self.eval_de_casteljau(x)
        } else {
            self.eval_log_basis(x)
        }
    }

    /// Exact de Casteljau recursion; `O(n^2)` but backward stable.
    pub fn eval_de_casteljau(&self, x: f64) -> f64 {
        let mut b = self.values.clone();
        let y = 1.0 - x;
        for round in 1..=self.n as usize {
            for k in 0..=(self.n as usize - round) {
                b[k] = y * b[k] + x * b[k + 1];
            }
        }
        b[0]
    }

    /// Log-space basis weights with compensated, normalized summation.
    pub fn eval_log_basis(&self, x: f64) -> f64 {
        let n = self.n as usize;
        if x <= 0.0 {
            return self.values[0];
        }
        if x >= 1.0 {
            return self.values[n];
        }
        let lx = math::ln(x);
        let l1mx = math::ln_1p(-x);
        let lf = &self.ln_fact;
        let lw = |k: usize| {
            lf[n] - lf[k] - lf[n - k] + k as f64 * lx + (n - k) as f64 * l1mx
        };

        // The weights are log-concave in k with the peak at the binomial
        // mode floor((n+1)x); walk uphill from there in case of rounding,
        // then expand the window until the terms drop below the cutoff.
        let mut k_peak = (math::floor(x * (n as f64 + 1.0)) as usize).min(n);
        let mut peak_val = lw(k_peak);
        while k_peak < n && lw(k_peak + 1) > peak_val {
            k_peak += 1;
            peak_val = lw(k_peak);
        }
        while k_peak > 0 && lw(k_peak - 1) > peak_val {
            k_peak -= 1;
            peak_val = lw(k_peak);
        }

        let mut k_lo = k_peak;
        while k_lo > 0 && lw(k_lo - 1) >= peak_val - LOG_WEIGHT_CUTOFF {
            k_lo -= 1;
        }
        let mut k_hi = k_peak;
        while k_hi < n && lw(k_hi + 1) >= peak_val - LOG_WEIGHT_CUTOFF {
            k_hi += 1;
        }

        let mut num = CompensatedSum::new();
        let mut den = CompensatedSum::new();
        for k in k_lo..=k_hi {
            let w = math::exp(lw(k) - peak_val);
            num.add(self.values[k] * w);
            den.add(w);
        }
        num.total() / den.total()
    }
}

/// Estimate `sup |f - B_n f|` over `[0, 1]`.
pub fn approx_error_norm(f: &FunctionSpec, n: u32, cfg: &GridConfig) -> Result<NormEstimate> {
    let s = SampleVector::sample(f, n)?;
    grid::sup_abs_on_unit_interval(|x| Ok(f.eval(x)? - s.eval(x)), cfg)
}

/// The Voronovskaja residual `B_n f(x) - f(x) - x(1-x) f''(x) / (2n)` at one
/// point. Needs `f.max_order() >= 2`.
pub fn voronovskaja_residual(f: &FunctionSpec, n: u32, x: f64) -> Result<f64> {
    let s = SampleVector::sample(f, n)?;
    residual_at(f, &s, x)
}

/// Estimate the sup norm of the Voronovskaja residual over `[0, 1]`.
pub fn voronovskaja_residual_norm(
    f: &FunctionSpec,
    n: u32,
    cfg: &GridConfig,
) -> Result<NormEstimate> {
    let s = SampleVector::sample(f, n)?;
    grid::sup_abs_on_unit_interval(|x| residual_at(f, &s, x), cfg)
}

fn residual_at(f: &FunctionSpec, s: &SampleVector, x: f64) -> Result<f64> {
    let j = f.jet(x, 2)?;
    let phi2 = x * (1.0 - x);
    Ok(s.eval(x) - j.value() - phi2 * j.deriv(2) / (2.0 * f64::from(s.n())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::builtin;
    use crate::GridConfig;

    fn spec(src: &str) -> FunctionSpec {
        FunctionSpec::new(src, src, 4).unwrap()
    }

    #[test]
    fn sampling_hits_the_nodes() {
        let s = SampleVector::sample(&spec("x"), 4).unwrap();
        assert_eq!(s.values(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let s = SampleVector::sample(&spec("x^2"), 2).unwrap();
        assert_eq!(s.values(), &[0.0, 0.25, 1.0]);
        let s = SampleVector::sample(&builtin("exp").unwrap(), 1).unwrap();
        assert_eq!(s.values()[0], 1.0);
        // libm::exp(1) sits one ulp away from the E constant.
        assert!((s.values()[1] - core::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn affine_samples_reproduce_the_affine_function() {
        let s = SampleVector::sample(&spec("x"), 50).unwrap();
        assert!((s.eval(0.3) - 0.3).abs() <= 1e-12);
    }

    #[test]
    fn quadratic_moment_identity_at_half() {
        // B_n(x^2)(x) = x^2 + x(1-x)/n
        let s = SampleVector::sample(&spec("x^2"), 10).unwrap();
        assert!((s.eval(0.5) - 0.275).abs() <= 1e-13);
    }

    #[test]
    fn endpoints_interpolate_exactly() {
        for n in [1, 5, 64, 65, 300] {
            let s = SampleVector::sample(&builtin("exp").unwrap(), n).unwrap();
            assert_eq!(s.eval(0.0), s.values()[0]);
            assert_eq!(s.eval(1.0), s.values()[n as usize]);
            assert_eq!(s.eval_log_basis(0.0), s.values()[0]);
            assert_eq!(s.eval_log_basis(1.0), s.values()[n as usize]);
        }
    }

    #[test]
    fn log_route_matches_de_casteljau_for_small_n() {
        for f in ["exp", "sin", "1/(1+x^2)"] {
            let f = builtin(f).unwrap();
            for n in 1..=30 {
                let s = SampleVector::sample(&f, n).unwrap();
                for i in 0..=100 {
                    let x = f64::from(i) / 100.0;
                    let a = s.eval_de_casteljau(x);
                    let b = s.eval_log_basis(x);
                    assert!(
                        (a - b).abs() <= 1e-10,
                        "{} n={n} x={x}: {a} vs {b}",
                        f.name()
                    );
                }
            }
        }
    }

    #[test]
    fn positivity_is_preserved() {
        let f = spec("x^2*(1-x)");
        for n in [3, 40, 200] {
            let s = SampleVector::sample(&f, n).unwrap();
            for i in 0..=200 {
                let x = f64::from(i) / 200.0;
                assert!(s.eval(x) >= -1e-12);
            }
        }
    }

    #[test]
    fn affine_reproduction_across_degrees() {
        let f = spec("1+0.5*x");
        for n in [1, 2, 10, 64, 65, 100, 1000, 10000] {
            let s = SampleVector::sample(&f, n).unwrap();
            for i in 0..=50 {
                let x = f64::from(i) / 50.0;
                let expected = 1.0 + 0.5 * x;
                assert!(
                    (s.eval(x) - expected).abs() <= 1e-12,
                    "n={n} x={x}: {}",
                    s.eval(x)
                );
            }
        }
    }

    #[test]
    fn moment_identity_across_degrees() {
        let f = spec("x^2");
        for n in 1..=1000 {
            let s = SampleVector::sample(&f, n).unwrap();
            for i in 0..=100 {
                let x = f64::from(i) / 100.0;
                let lhs = s.eval(x) - x * x - x * (1.0 - x) / f64::from(n);
                assert!(lhs.abs() <= 1e-10, "n={n} x={x}: {lhs}");
            }
        }
    }

    #[test]
    fn error_norm_closed_forms() {
        let cfg = GridConfig::coarse();
        // Affine functions are reproduced exactly.
        let e = approx_error_norm(&spec("x"), 20, &cfg).unwrap();
        assert!(e.value <= 1e-12);
        // |B_n(x^2) - x^2| = x(1-x)/n peaks at 1/(4n).
        let e = approx_error_norm(&spec("x^2"), 10, &cfg).unwrap();
        assert!((e.value - 0.025).abs() < 1e-9);
        assert!((e.argmax - 0.5).abs() < 1e-6);
    }

    #[test]
    fn exp_degree_one_error_matches_chord_gap_oracle() {
        // B_1(exp)(x) = 1 + (e-1)x; the gap to exp is maximized where
        // exp(x) = e - 1. Golden-section on the closed form is the oracle.
        let (x_star, gap) = grid::golden_max(
            |x| Ok(1.0 + (core::f64::consts::E - 1.0) * x - libm::exp(x)),
            0.0,
            1.0,
            96,
        )
        .unwrap();
        assert!((x_star - libm::log(core::f64::consts::E - 1.0)).abs() < 1e-6);
        let e = approx_error_norm(&builtin("exp").unwrap(), 1, &GridConfig::coarse()).unwrap();
        assert!((e.value - gap).abs() < 1e-9, "{} vs oracle {gap}", e.value);
        assert!((e.value - 0.2118).abs() < 1e-3);
    }

    #[test]
    fn residual_closed_forms() {
        // Quadratics are Voronovskaja-exact.
        for &(n, x) in &[(2u32, 0.3), (10, 0.5), (77, 0.9)] {
            let r = voronovskaja_residual(&spec("x^2"), n, x).unwrap();
            assert!(r.abs() <= 1e-12, "n={n} x={x}: {r}");
            let r = voronovskaja_residual(&spec("x"), n, x).unwrap();
            assert!(r.abs() <= 1e-12);
        }
        // Cubic: residual is x(1-x)(1-2x)/n^2.
        let r = voronovskaja_residual(&spec("x^3"), 10, 0.25).unwrap();
        assert!((r - 0.0009375).abs() < 1e-12, "{r}");
    }

    #[test]
    fn residual_norm_closed_forms() {
        let cfg = GridConfig::coarse();
        let e = voronovskaja_residual_norm(&spec("x^2"), 10, &cfg).unwrap();
        assert!(e.value <= 1e-12);
        // max |x(1-x)(1-2x)| = 1/(6 sqrt 3)
        let expected = 1.0 / (6.0 * libm::sqrt(3.0)) / 100.0;
        let e = voronovskaja_residual_norm(&spec("x^3"), 10, &cfg).unwrap();
        assert!((e.value - expected).abs() < 1e-9, "{} vs {expected}", e.value);
    }

    #[test]
    fn residual_norm_of_sine_respects_weighted_third_derivative_cap() {
        let f = builtin("sin").unwrap();
        let cfg = GridConfig::coarse();
        let e = voronovskaja_residual_norm(&f, 100, &cfg).unwrap();
        assert!(e.value > 0.0);
        // n^(-3/2) * sup |phi^3 cos| with the crude bound sup <= 1/8.
        assert!(e.value <= libm::pow(100.0, -1.5) * 0.125);
    }

    #[test]
    fn direct_summation_oracle_agrees_with_both_routes() {
        // Independent route: exact u128 binomials, powers accumulated
        // separately from either evaluation path.
        fn binom(n: u32, k: u32) -> u128 {
            let mut acc: u128 = 1;
            for i in 0..k as u128 {
                acc = acc * (n as u128 - i) / (i + 1);
            }
            acc
        }
        for f in ["exp", "x^3"] {
            let f = builtin(f).unwrap();
            for n in [5u32, 17, 30] {
                let s = SampleVector::sample(&f, n).unwrap();
                for i in 1..10 {
                    let x = f64::from(i) / 10.0;
                    let mut direct = 0.0;
                    for k in 0..=n {
                        let w = binom(n, k) as f64
                            * libm::pow(x, f64::from(k))
                            * libm::pow(1.0 - x, f64::from(n - k));
                        direct += s.values()[k as usize] * w;
                    }
                    assert!((s.eval_de_casteljau(x) - direct).abs() < 1e-12);
                    assert!((s.eval_log_basis(x) - direct).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn degree_zero_is_rejected() {
        assert!(SampleVector::sample(&spec("x"), 0).is_err());
    }
}
