use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{InequalityReport, LsiProfile};
use crate::geometry::ScalarField;
use crate::quadrature::integrate;

use super::SchrodingerOperator;

/// `β(σ) = aσ − (μ/2) ln σ + b`, the budget of `∫u² ln u² ≤ σQ(u) + β(σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBeta {
    pub a: f64,
    pub mu: f64,
    pub b: f64,
}

impl LogBeta {
    pub fn new(a: f64, mu: f64, b: f64) -> Self {
        Self { a, mu, b }
    }

    /// The σ-form of an LSI profile. Profiles with a positive lower end on σ
    /// do not give a budget near 0 and are rejected.
    pub fn from_profile(p: &LsiProfile) -> Result<Self> {
        if p.sigma_min > 0.0 {
            return Err(Error::Precondition(format!(
                "{} holds only for sigma >= {}, not near 0",
                p.variant, p.sigma_min
            )));
        }
        let (a, b) = p
            .log_budget()
            .ok_or_else(|| Error::InvalidParameter(format!("{} has no uniform constant", p.variant)))?;
        Ok(Self { a, mu: p.mu, b })
    }

    pub fn at(&self, sigma: f64) -> f64 {
        self.a * sigma - 0.5 * self.mu * sigma.ln() + self.b
    }

    /// `∫₀^σ β`.
    pub fn primitive(&self, sigma: f64) -> f64 {
        if sigma == 0.0 {
            return 0.0;
        }
        0.5 * self.a * sigma * sigma - 0.5 * self.mu * (sigma * sigma.ln() - sigma) + self.b * sigma
    }

    /// Largest `σ*` with β nonincreasing on `(0, σ*)`.
    pub fn sigma_star(&self) -> f64 {
        if self.a > 0.0 {
            self.mu / (2.0 * self.a)
        } else {
            f64::INFINITY
        }
    }
}

/// `τ(t) = (1/2t)∫₀^t β = at/4 − (μ/4)(ln t − 1) + b/2`.
pub fn davies_tau(beta: &LogBeta, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange { what: "t", value: t, lo: 0.0, hi: f64::INFINITY });
    }
    Ok(beta.a * t / 4.0 - beta.mu / 4.0 * (t.ln() - 1.0) + beta.b / 2.0)
}

/// `τ(t)` for a general budget by adaptive quadrature.
pub fn davies_tau_quad(beta: impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange { what: "t", value: t, lo: 0.0, hi: f64::INFINITY });
    }
    let v = integrate(beta, 0.0, t, 1e-12, 1e-10)?;
    if !v.is_finite() {
        return Err(Error::DivergentIntegral(format!("(1/2t)∫β over (0, {t})")));
    }
    Ok(v / (2.0 * t))
}

/// Bounds and empirical norms at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltraBounds {
    pub t: f64,
    pub bound_2_inf: f64,
    pub bound_1_inf: f64,
    pub empirical_2_inf: f64,
    pub empirical_1_2: f64,
    pub empirical_1_inf: f64,
    pub reports: Vec<InequalityReport>,
}

/// `e^{τ(t) − (3t/4) inf Ψ⁻}` and `e^{2τ(t/2) − (3t/4) inf Ψ⁻}` against the
/// kernel norms of `e^{−tH}`.
pub fn ultracontractivity_bound(
    h: &SchrodingerOperator<'_>,
    beta: &LogBeta,
    t: f64,
    sigma_star: f64,
) -> Result<UltraBounds> {
    if !(sigma_star > 0.0 && sigma_star <= beta.sigma_star() * (1.0 + 1e-12)) {
        return Err(Error::Precondition(format!(
            "beta is nonincreasing only up to {}, got sigma* = {sigma_star}",
            beta.sigma_star()
        )));
    }
    if !(t > 0.0 && t < sigma_star / 4.0) {
        return Err(Error::OutOfRange { what: "t", value: t, lo: 0.0, hi: sigma_star / 4.0 });
    }
    let shift = -0.75 * t * h.inf_psi_minus();
    let bound_2_inf = (davies_tau(beta, t)? + shift).exp();
    let bound_1_inf = (2.0 * davies_tau(beta, t / 2.0)? + shift).exp();
    let empirical_2_inf = h.norm_2_inf(t);
    let empirical_1_2 = h.norm_1_2(t);
    let empirical_1_inf = h.norm_1_inf(t);
    let vol = h.manifold().total_volume();
    let tol = |b: f64| 1e-10 * b;
    let reports = vec![
        InequalityReport::new("heat.ultra_2_inf", empirical_2_inf, bound_2_inf, tol(bound_2_inf), "kernel")
            .with_param("t", t),
        InequalityReport::new("heat.ultra_1_2", empirical_1_2, bound_2_inf, tol(bound_2_inf), "kernel rows")
            .with_param("t", t),
        InequalityReport::new("heat.ultra_1_inf", empirical_1_inf, bound_1_inf, tol(bound_1_inf), "kernel")
            .with_param("t", t),
        InequalityReport::new("heat.duality_sanity", bound_2_inf * vol.powf(-0.5), bound_1_inf, 0.0, "bounds")
            .with_param("t", t)
            .informational(),
    ];
    Ok(UltraBounds { t, bound_2_inf, bound_1_inf, empirical_2_inf, empirical_1_2, empirical_1_inf, reports })
}

/// `N(s) = (1/2t)∫_{t−s}^t β`, so that `N(0) = 0` and `N(t) = τ(t)`.
pub fn davies_n(beta: &LogBeta, t: f64, s: f64) -> f64 {
    (beta.primitive(t) - beta.primitive(t - s)) / (2.0 * t)
}

/// `p(s) = 2t/(t − s)`.
pub fn davies_p(t: f64, s: f64) -> f64 {
    2.0 * t / (t - s)
}

/// Sample times `s_k = t(1 − 2^{−k/4})`, `k = 0..=40`.
pub fn davies_samples(t: f64) -> Vec<f64> {
    (0..=40).map(|k| t * (1.0 - 2f64.powf(-(k as f64) / 4.0))).collect()
}

/// `e^{−N(s)}‖e^{−sH}u‖_{p(s)}` along the Davies schedule.
pub fn davies_values(h: &SchrodingerOperator<'_>, u: &ScalarField, t: f64, beta: &LogBeta) -> Result<Vec<(f64, f64)>> {
    let g = h.manifold();
    davies_samples(t)
        .into_iter()
        .map(|s| {
            let us = h.heat_apply(u, s)?;
            Ok((s, (-davies_n(beta, t, s)).exp() * g.lp_norm(&us, davies_p(t, s))?))
        })
        .collect()
}

/// Monotonicity of the Davies quantity and the terminal bound
/// `‖e^{−tH}u‖_∞ ≤ e^{N*}‖u‖₂`.
pub fn davies_schedule_audit(
    h: &SchrodingerOperator<'_>,
    u: &ScalarField,
    t: f64,
    beta: &LogBeta,
    witness: &str,
) -> Result<Vec<InequalityReport>> {
    h.require_nonnegative_potential()?;
    if u.min() < 0.0 || u.sup_abs() == 0.0 {
        return Err(Error::Precondition(format!("{witness}: the schedule needs u >= 0, u != 0")));
    }
    if !(t > 0.0 && t < beta.sigma_star() / 4.0) {
        return Err(Error::OutOfRange { what: "t", value: t, lo: 0.0, hi: beta.sigma_star() / 4.0 });
    }
    let values = davies_values(h, u, t, beta)?;
    let worst = values
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / w[0].1)
        .fold(f64::NEG_INFINITY, f64::max);
    let g = h.manifold();
    let terminal = g.lp_norm(&h.heat_apply(u, t)?, f64::INFINITY)?;
    let bound = davies_tau(beta, t)?.exp() * g.lp_norm(u, 2.0)?;
    Ok(vec![
        InequalityReport::new("davies.monotone", worst, 0.0, 1e-6, witness).with_param("t", t),
        InequalityReport::new("davies.terminal", terminal, bound, 1e-6, witness).with_param("t", t),
    ])
}
