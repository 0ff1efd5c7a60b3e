//! Numerically guarded scalar functions.

use crate::error::{Error, Result};

pub const LN_2PI: f64 = 1.837877066409345483560659472811;

/// Logistic sigmoid, overflow-free for any finite input.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Exponential linear unit.
#[inline]
pub fn elu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        x.exp() - 1.0
    }
}

/// Derivative of [`elu`]; 1 at the origin.
#[inline]
pub fn elu_deriv(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        x.exp()
    }
}

/// Softmax computed after subtracting the maximum, so arbitrarily large
/// inputs cannot overflow. The output is renormalized to sum to one.
pub fn stable_softmax(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::domain("stable_softmax", "empty input vector"));
    }
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    for o in out.iter_mut() {
        *o /= sum;
    }
    Ok(out)
}

/// `ln(sum_i exp(v_i))` with max-shift.
pub fn log_sum_exp(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::domain("log_sum_exp", "empty input vector"));
    }
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Ok(max);
    }
    let sum: f64 = v.iter().map(|x| (x - max).exp()).sum();
    Ok(max + sum.ln())
}

/// Log density of a Gaussian with mean `mu` and variance `var`.
pub fn log_gaussian(y: f64, mu: f64, var: f64) -> Result<f64> {
    if var <= 0.0 {
        return Err(Error::domain(
            "log_gaussian",
            format!("variance must be positive, got {var}"),
        ));
    }
    let d = y - mu;
    Ok(-0.5 * (LN_2PI + var.ln()) - d * d / (2.0 * var))
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `ln(n!)` through the log-gamma function.
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma((n + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_symmetric_inputs() {
        let out = stable_softmax(&[0.0, 0.0, 0.0]).unwrap();
        for o in &out {
            assert!((o - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn softmax_analytic_logs() {
        let out = stable_softmax(&[1f64.ln(), 2f64.ln(), 3f64.ln()]).unwrap();
        let want = [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];
        for (o, w) in out.iter().zip(&want) {
            assert!((o - w).abs() < 1e-15, "{o} vs {w}");
        }
    }

    #[test]
    fn softmax_survives_huge_inputs() {
        let out = stable_softmax(&[1000.0, 1000.0]).unwrap();
        assert!((out[0] - 0.5).abs() < 1e-15);
        assert!((out[1] - 0.5).abs() < 1e-15);
        assert!(out.iter().all(|o| o.is_finite()));
    }

    #[test]
    fn softmax_empty_is_domain_error() {
        assert!(stable_softmax(&[]).is_err());
    }

    #[test]
    fn log_sum_exp_basics() {
        assert!((log_sum_exp(&[0.0, 0.0]).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[3.25]).unwrap(), 3.25);
        let v = log_sum_exp(&[-1000.0, -1000.0]).unwrap();
        assert!((v - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        assert!(log_sum_exp(&[]).is_err());
    }

    #[test]
    fn log_gaussian_standard_normal_at_mode() {
        let v = log_gaussian(0.0, 0.0, 1.0).unwrap();
        assert!((v - (-0.9189385332046727)).abs() < 1e-12);
    }

    #[test]
    fn log_gaussian_zero_residual() {
        for mu in [-3.0, 0.0, 7.5] {
            let v = log_gaussian(mu, mu, 2.5).unwrap();
            assert!((v - (-0.5 * (LN_2PI + 2.5f64.ln()))).abs() < 1e-12);
        }
    }

    #[test]
    fn log_gaussian_hand_case() {
        // -0.5 ln(8 pi) - 1/8
        let want = -0.5 * (8.0 * std::f64::consts::PI).ln() - 0.125;
        let v = log_gaussian(1.0, 0.0, 4.0).unwrap();
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn log_gaussian_rejects_bad_variance() {
        assert!(log_gaussian(0.0, 0.0, 0.0).is_err());
        assert!(log_gaussian(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-6);
        assert!((normal_cdf(-1.959964) - 0.025).abs() < 1e-6);
        // published 15-digit value of Phi(1)
        assert!((normal_cdf(1.0) - 0.841344746068543).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_symmetry() {
        for i in 0..100 {
            let z = -8.0 + 0.16 * i as f64;
            let s = normal_cdf(z) + normal_cdf(-z);
            assert!((s - 1.0).abs() < 1e-12, "z={z}, sum={s}");
        }
    }

    #[test]
    fn ln_factorial_small_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-12);
        assert!((ln_factorial(20) - 2432902008176640000f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn sigmoid_guarded_tails() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(800.0) <= 1.0 && sigmoid(800.0) > 0.999999);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(-800.0) < 1e-300);
        assert!(sigmoid(800.0).is_finite() && sigmoid(-800.0).is_finite());
    }

    #[test]
    fn elu_definition() {
        assert_eq!(elu(2.0), 2.0);
        assert!((elu(-30.0) - (-1.0)).abs() < 1e-12);
        assert_eq!(elu_deriv(0.0), 1.0);
        assert!((elu_deriv(-1.0) - (-1f64).exp()).abs() < 1e-15);
    }
}
