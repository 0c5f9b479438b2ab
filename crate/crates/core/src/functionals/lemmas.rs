//! Scalar inequalities behind the logarithmic Sobolev budgets.

use crate::error::{Error, Result};

/// `αx + αB − 1 − ln α − ln(x + B)`, nonnegative with equality at `x = 1/α − B`.
pub fn log1_gap(alpha: f64, b: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && b >= 0.0 && x > -b) {
        return Err(Error::Precondition(format!("log1 needs alpha > 0, B >= 0, x > -B; got alpha={alpha}, B={b}, x={x}")));
    }
    Ok(alpha * x + alpha * b - 1.0 - alpha.ln() - (x + b).ln())
}

/// `Ax − ln A + ln(γ + B) − ln γ − 1 − ln(x + B)` for `A ≥ 1/(γ + B)`, `x ≥ γ`.
///
/// Equality holds at `A = 1/γ`, `x = γ`.
pub fn log2_gap(a: f64, b: f64, gamma: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0 && b > 0.0) {
        return Err(Error::Precondition(format!("log2 needs gamma > 0, B > 0; got gamma={gamma}, B={b}")));
    }
    let a_min = 1.0 / (gamma + b);
    if !(a >= a_min * (1.0 - 1e-15)) {
        return Err(Error::Precondition(format!("log2 needs A >= 1/(gamma+B) = {a_min}; got {a}")));
    }
    if !(x >= gamma) {
        return Err(Error::Precondition(format!("log2 needs x >= gamma = {gamma}; got {x}")));
    }
    Ok(a * x - a.ln() + (gamma + b).ln() - gamma.ln() - 1.0 - (x + b).ln())
}

/// `α = (2e/n) e^{2b/n}`.
pub fn strong_alpha(n: f64, b: f64) -> f64 {
    2.0 * std::f64::consts::E / n * (2.0 * b / n).exp()
}

/// Minimum of `σ ↦ aσ − (n/2) ln σ + b` over `σ > 0`: `(σ*, value)` with
/// `σ* = n/(2a)` and value `(n/2) ln(α a)`, `α` from [`strong_alpha`].
pub fn lemma41_minimum(n: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && n > 0.0) {
        return Err(Error::Precondition(format!("need a > 0 and n > 0; got a={a}, n={n}")));
    }
    Ok((n / (2.0 * a), 0.5 * n * (strong_alpha(n, b) * a).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::minimize_scalar;
    use proptest::prelude::*;

    #[test]
    fn log1_examples() {
        assert!(log1_gap(1.0, 1.0, 0.0).unwrap().abs() < 1e-15);
        let v = log1_gap(2.0, 0.0, 1.0).unwrap();
        assert!((v - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!(log1_gap(0.0, 1.0, 0.0).is_err());
        assert!(log1_gap(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn log2_examples() {
        // x = γ = 1, B = 1, A = 1/(γ+B): the gap is ln 2 − 1/2
        let v = log2_gap(0.5, 1.0, 1.0, 1.0).unwrap();
        assert!((v - (2f64.ln() - 0.5)).abs() < 1e-15);
        assert!(log2_gap(1.0, 1.0, 1.0, 1.0).unwrap().abs() < 1e-15);
        assert!(log2_gap(0.4, 1.0, 1.0, 1.0).is_err());
        assert!(log2_gap(1.0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn lemma41_matches_minimizer() {
        let (s, v) = lemma41_minimum(3.0, 2.0, 0.5).unwrap();
        let f = |x: f64| 2.0 * x - 1.5 * x.ln() + 0.5;
        assert!((f(s) - v).abs() < 1e-13);
        let (xm, fm) = minimize_scalar(f, 1e-6, 10.0, 1e-12);
        assert!((xm - s).abs() < 1e-6 && (fm - v).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn log1_nonnegative(alpha in 1e-3f64..1e3, b in 0.0f64..10.0, t in 1e-6f64..100.0) {
            prop_assert!(log1_gap(alpha, b, t - b).unwrap() >= -1e-12);
        }

        #[test]
        fn log2_nonnegative(gamma in 1e-3f64..10.0, b in 1e-3f64..10.0, k in 1.0f64..100.0, d in 0.0f64..100.0) {
            let a = k / (gamma + b);
            prop_assert!(log2_gap(a, b, gamma, gamma + d).unwrap() >= -1e-12);
        }

        #[test]
        fn lemma41_is_a_lower_bound(n in 3.0f64..10.0, a in 1e-2f64..1e2, b in -10.0f64..10.0, s in 1e-4f64..1e3) {
            let (_, v) = lemma41_minimum(n, a, b).unwrap();
            prop_assert!(a * s - 0.5 * n * s.ln() + b >= v - 1e-10 * (1.0 + v.abs()));
        }
    }
}
