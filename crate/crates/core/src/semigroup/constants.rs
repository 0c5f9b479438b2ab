use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma_one_half;

/// Constants of the Sobolev inequality obtained from a heat bound
/// `‖e^{−tH}‖_{2→∞} ≤ c t^{−μ/4}`, at exponent `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C5Constants {
    pub mu: f64,
    pub p: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub gamma: f64,
    pub p0: f64,
    pub p1: f64,
    pub q0: f64,
    pub q1: f64,
    pub k: f64,
    pub c_final: f64,
}

fn check_mu_p(mu: f64, p: f64) -> Result<()> {
    if !(mu > 1.0) {
        return Err(Error::OutOfRange { what: "mu", value: mu, lo: 1.0, hi: f64::INFINITY });
    }
    if !(p > 1.0 && p < mu) {
        return Err(Error::OutOfRange { what: "p", value: p, lo: 1.0, hi: mu });
    }
    Ok(())
}

/// `(2p/(μ−p)) Γ(1/2)^{−1} (2^{μ/2} c²)^{1/p}`.
pub fn c1(mu: f64, c: f64, p: f64) -> f64 {
    2.0 * p / (mu - p) / gamma_one_half() * (2f64.powf(mu / 2.0) * c * c).powf(1.0 / p)
}

/// `2^{p(2μ−p)/(μ−p)} c₁^{p²/(μ−p)} Γ(1/2)^{−p}`, the weak-type constant
/// `|{|H^{−1/2}u| > α}| ≤ c₂ (‖u‖_p/α)^q`.
pub fn c2(mu: f64, c: f64, p: f64) -> f64 {
    let e = p * (2.0 * mu - p) / (mu - p);
    2f64.powf(e) * c1(mu, c, p).powf(p * p / (mu - p)) * gamma_one_half().powf(-p)
}

/// `1/q = 1/p − 1/μ`.
pub fn sobolev_exponent(mu: f64, p: f64) -> f64 {
    mu * p / (mu - p)
}

/// Marcinkiewicz constant at the midpoint, with `1/q = (1/q₀ + 1/q₁)/2`:
/// `2 q^{1/q} (q/(q − q₀) + q₁/(q₁ − q))^{1/q}`.
pub fn marcinkiewicz_k(q0: f64, q1: f64) -> f64 {
    let q = 2.0 / (1.0 / q0 + 1.0 / q1);
    2.0 * q.powf(1.0 / q) * (q / (q - q0) + q1 / (q1 - q)).powf(1.0 / q)
}

pub fn c5_constants(mu: f64, c: f64, p: f64) -> Result<C5Constants> {
    check_mu_p(mu, p)?;
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("heat constant must be positive, got {c}")));
    }
    let gamma = (p / (p - 1.0)).max(2.0).max((2.0 * mu - p) / (mu - p)) + 1.0;
    let p0 = (gamma - 1.0) / gamma * p;
    let p1 = (gamma - 1.0) / (gamma - 2.0) * p;
    let q0 = sobolev_exponent(mu, p0);
    let q1 = sobolev_exponent(mu, p1);
    let k = marcinkiewicz_k(q0, q1);
    let c_final = k * c2(mu, c, p0).powf(0.5 / q0) * c2(mu, c, p1).powf(0.5 / q1);
    Ok(C5Constants { mu, p, c, c1: c1(mu, c, p), c2: c2(mu, c, p), gamma, p0, p1, q0, q1, k, c_final })
}

/// Heat constant valid for all `t > 0` for `H₀ = H − inf Ψ⁻ + 1`, given
/// `c t^{−μ/4}` for `H` on `0 < t < 1`.
pub fn shifted_heat_constant(c: f64, mu: f64) -> f64 {
    c * (mu / (2.0 * std::f64::consts::E)).powf(mu / 4.0).max(1.0)
}

/// `C(c, μ)` in `‖u‖²_{2μ/(μ−2)} ≤ C(c, μ)(Q(u) + (1 − inf Ψ⁻)‖u‖₂²)`.
pub fn sobolev_from_heat(c: f64, mu: f64) -> Result<f64> {
    Ok(c5_constants(mu, shifted_heat_constant(c, mu), 2.0)?.c_final.powi(2))
}

/// Final Sobolev inequality from a uniform LSI
/// `∫u² ln u² ≤ σQ(u) − (μ/2) ln σ + C` on `(0, σ*)`:
/// `‖u‖²_{2μ/(μ−2)} ≤ a Q(u) + b ‖u‖₂²` with `b = a · l2_factor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D3Constants {
    pub c_lsi: f64,
    pub mu: f64,
    pub n: f64,
    pub sigma_star: f64,
    pub min_psi_minus: f64,
    pub bar_c: f64,
    /// `C(C̄, μ)`.
    pub c_mu: f64,
    /// `(σ*/4)^{1−n/μ}`.
    pub scale: f64,
    pub a: f64,
    /// `(4 − σ* min Ψ⁻)/σ*`.
    pub l2_factor: f64,
    pub b: f64,
}

impl D3Constants {
    /// Coefficient of the form without the `L²` term, using `Q(u) ≥ λ₀‖u‖₂²`.
    pub fn without_l2(&self, lambda0: f64) -> Result<f64> {
        if !(lambda0 > 0.0) {
            return Err(Error::Precondition(format!("need lambda0 > 0, got {lambda0}")));
        }
        Ok(self.a + self.b / lambda0)
    }
}

pub fn d3_constants(c_lsi: f64, mu: f64, n: f64, sigma_star: f64, min_psi_minus: f64) -> Result<D3Constants> {
    if !(sigma_star > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma* must be positive, got {sigma_star}")));
    }
    if !(mu > 2.0) {
        return Err(Error::OutOfRange { what: "mu", value: mu, lo: 2.0, hi: f64::INFINITY });
    }
    let mpm = min_psi_minus.min(0.0);
    let bar_c = 2f64.powf((mu - n) / 2.0)
        * sigma_star.powf((n - mu) / 4.0)
        * (mu / 4.0 - 3.0 * sigma_star / 16.0 * mpm + c_lsi / 2.0).exp();
    let c_mu = sobolev_from_heat(bar_c, mu)?;
    let scale = (sigma_star / 4.0).powf(1.0 - n / mu);
    let a = scale * c_mu;
    let l2_factor = (4.0 - sigma_star * mpm) / sigma_star;
    Ok(D3Constants { c_lsi, mu, n, sigma_star, min_psi_minus: mpm, bar_c, c_mu, scale, a, l2_factor, b: a * l2_factor })
}

/// `C` in `‖u‖_{np/(n−p)} ≤ C‖H₀^{1/2}u‖_p` with `H₀ = H − min Ψ⁻ + 1`, from
/// the heat constant `C̄` of [`d3_constants`] at `σ* = 4`, `μ = n`.
pub fn root_sobolev_constant(bar_c: f64, n: f64, p: f64) -> Result<f64> {
    Ok(c5_constants(n, shifted_heat_constant(bar_c, n), p)?.c_final)
}
