//! Backward conjugate heat equation for Perelman's `f`.
//!
//! With `τ = t* + σ − t` and `v = (4πτ)^{−n/2} e^{−f}`, the nonlinear equation
//! for `f` is equivalent to the linear conjugate heat equation
//! `∂_t v = −Δv + R v`. Since `∂_t dvol = −R dvol`, the product `w v`
//! satisfies `∂_t (w v) = K v`, which is discretized backward-implicitly as
//!
//! ```text
//! (W_k + Δt K_k) v_k = W_{k+1} v_{k+1}.
//! ```
//!
//! Columns of `K` sum to zero, so `Σ w v` (the normalization of `f`) is
//! conserved up to roundoff.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::ricci::FlowTrajectory;
use crate::geometry::{ScalarField, SpectralManifold};
use crate::linalg::SymTridiag;

pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const DRIFT_ABORT: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct ConjugateSolution {
    /// Snapshot times `t_0, …, t_K = t*`.
    pub times: Vec<f64>,
    pub taus: Vec<f64>,
    /// `f` at each time.
    pub f: Vec<ScalarField>,
    /// The density `v = (4πτ)^{−n/2} e^{−f}` at each time.
    pub v: Vec<ScalarField>,
    /// Largest `|∫ v dvol − 1|` seen along the solve.
    pub max_drift: f64,
}

/// `∫ (4πτ)^{−n/2} e^{−f} dvol`.
pub fn normalization(g: &SpectralManifold, f: &ScalarField, tau: f64) -> Result<f64> {
    let c = (4.0 * PI * tau).powf(-(g.n() as f64) / 2.0);
    let v = f.map(|x| c * (-x).exp())?;
    Ok(g.integral(v.values()))
}

/// Shifts `f` by a constant so that `∫ (4πτ)^{−n/2} e^{−f} dvol = 1`.
pub fn normalize_f(g: &SpectralManifold, f: &ScalarField, tau: f64) -> Result<ScalarField> {
    let z = normalization(g, f, tau)?;
    f.map(|x| x + z.ln())
}

/// The constant `f` with unit normalization at scale `τ`.
pub fn constant_f(g: &SpectralManifold, tau: f64) -> ScalarField {
    let nf = g.n() as f64;
    g.constant(g.total_volume().ln() - 0.5 * nf * (4.0 * PI * tau).ln())
}

pub fn conjugate_heat_solve(
    traj: &FlowTrajectory,
    f_terminal: &ScalarField,
    t_star: f64,
    sigma: f64,
) -> Result<ConjugateSolution> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let kend = traj.index_of(t_star).ok_or_else(|| {
        Error::Precondition(format!("t_star = {t_star} is not a snapshot time of the trajectory"))
    })?;
    let g_end = &traj.snapshots[kend];
    let n = g_end.n() as f64;
    let tau_of = |t: f64| t_star + sigma - t;
    let z = normalization(g_end, f_terminal, sigma)?;
    if (z - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Normalization(format!(
            "terminal f has normalization {z}, expected 1 within {NORMALIZATION_TOL:e}"
        )));
    }
    let density = |f: &ScalarField, tau: f64| -> Result<ScalarField> {
        let c = (4.0 * PI * tau).powf(-n / 2.0);
        f.map(|x| c * (-x).exp())
    };
    let mut v = vec![density(f_terminal, sigma)?];
    let mut f = vec![f_terminal.clone()];
    let mut max_drift = (z - 1.0).abs();
    for k in (0..kend).rev() {
        let gk = &traj.snapshots[k];
        let gk1 = &traj.snapshots[k + 1];
        let dt = traj.times[k + 1] - traj.times[k];
        let stiff = gk.stiffness();
        let lhs = SymTridiag::new(
            stiff.diag.iter().zip(gk.weights()).map(|(d, w)| w + dt * d).collect(),
            stiff.off.iter().map(|o| dt * o).collect(),
        );
        let last = v.last().unwrap();
        let rhs: Vec<f64> = gk1.weights().iter().zip(last.values()).map(|(w, x)| w * x).collect();
        let vk = lhs.solve(&rhs);
        let tau = tau_of(traj.times[k]);
        if let Some(j) = vk.iter().position(|x| !(*x > 0.0)) {
            return Err(Error::Normalization(format!(
                "conjugate heat density lost positivity at cell {j}, t = {}",
                traj.times[k]
            )));
        }
        let mass: f64 = gk.integral(&vk);
        let drift = (mass - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > DRIFT_ABORT {
            return Err(Error::NormalizationDrift { t: traj.times[k], drift });
        }
        let shift = 0.5 * n * (4.0 * PI * tau).ln();
        f.push(ScalarField::new(vk.iter().map(|x| -x.ln() - shift).collect())?);
        v.push(ScalarField::new(vk)?);
    }
    f.reverse();
    v.reverse();
    let times = traj.times[..=kend].to_vec();
    let taus = times.iter().map(|&t| tau_of(t)).collect();
    Ok(ConjugateSolution { times, taus, f, v, max_drift })
}
