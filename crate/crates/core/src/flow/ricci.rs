//! Ricci flow of rotationally symmetric metrics.
//!
//! The profile is kept on a grid that is uniform in arc length: with total
//! length `L(t)` and `ξ = s/L ∈ [0, 1]` fixed per cell, `∂g/∂t = −2 Ric` is
//! evolved through the slope `ψ = φ_s`:
//!
//! ```text
//! ∂ψ/∂t = ψ_ss + (n−3) ψ ψ_s/φ + (n−2)(1 − ψ²) ψ/φ² − ψ_s (S(s) − ξ S(L))
//! dL/dt = S(L),    S(s) = (n−1) ∫₀ˢ ψ_s/φ,    φ(s) = ∫₀ˢ ψ
//! ```
//!
//! The drift term is the tangential motion that keeps the cells equally long.
//! The equation for `φ` itself is only marginally stable at the poles (its
//! linearisation carries a Hardy-type potential `2(n−2)/s²` against a
//! constant of `(2n−3)²/4`), and fourth-order stencils tip it over; in `ψ`
//! the same potential enters with the damping sign. `∫₀ᴸ ψ = 0` is restored
//! after every stage by removing a multiple of `sin⁴(πξ)`.
//! Spatial derivatives use the fourth-order stencils of
//! [`WarpedProfile::derivatives`]; time stepping is classical RK4 with internal
//! substeps. The user step `dt` is the snapshot interval.

use crate::error::{Error, Result};
use crate::functionals::InequalityReport;
use crate::geometry::{d1, d2, to_faces, Parity, SpectralManifold, WarpedProfile};

#[derive(Debug, Clone)]
pub struct FlowConfig {
    /// Substep limit as a fraction of `2 h_s² / (n−1)`, `h_s` the cell length.
    pub cfl: f64,
    /// Maximum number of grid-limited substeps per snapshot interval.
    pub max_substeps: usize,
    /// Interior neck radius at which the run is truncated.
    pub pinch_threshold: f64,
    /// Eigen count of the emitted snapshots.
    pub k: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { cfl: 0.2, max_substeps: 64, pinch_threshold: 1e-3, k: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowDiagnostics {
    pub t: f64,
    pub min_r: f64,
    pub mean_r: f64,
    pub lambda0: f64,
    pub volume: f64,
    pub min_phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    /// Time at which the rejected step was attempted.
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralManifold>,
    pub diagnostics: Vec<FlowDiagnostics>,
    pub truncated: Option<Truncation>,
    /// `n / (2 R̂(0))`, the extinction time of the sphere with the same mean curvature.
    pub extinction_estimate: f64,
}

/// Extinction time `r0² / (2(n−1))` of the round sphere.
pub fn sphere_extinction_time(n: usize, r0: f64) -> f64 {
    r0 * r0 / (2.0 * (n as f64 - 1.0))
}

/// The round sphere of initial radius `r0` at time `t`, from the closed form
/// `r(t)² = r0² − 2(n−1)t`.
pub fn sphere_flow(n: usize, r0: f64, t: f64, m: usize, k: usize) -> Result<SpectralManifold> {
    let extinction = sphere_extinction_time(n, r0);
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("flow time must be nonnegative, got {t}")));
    }
    if t >= extinction {
        return Err(Error::FlowExtinct { t, extinction });
    }
    let r = (r0 * r0 - 2.0 * (n as f64 - 1.0) * t).sqrt();
    SpectralManifold::build_sphere(n, r, m, k)
}

/// Closed-form sphere trajectory sampled at `t_k = k dt`.
pub fn sphere_trajectory(n: usize, r0: f64, dt: f64, steps: usize, m: usize, k: usize) -> Result<FlowTrajectory> {
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let snapshots = times
        .iter()
        .map(|&t| sphere_flow(n, r0, t, m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowTrajectory::from_snapshots(times, snapshots))
}

fn diagnostics(t: f64, g: &SpectralManifold) -> FlowDiagnostics {
    FlowDiagnostics {
        t,
        min_r: g.min_curvature(),
        mean_r: g.mean_curvature(),
        lambda0: g.lambda0(),
        volume: g.total_volume(),
        min_phi: g.profile().phi().iter().copied().fold(f64::INFINITY, f64::min),
    }
}

fn extinction_estimate(g: &SpectralManifold) -> f64 {
    let rhat = g.mean_curvature();
    if rhat > 0.0 {
        g.n() as f64 / (2.0 * rhat)
    } else {
        f64::INFINITY
    }
}

/// Profile on the uniform arc-length grid: cell values of `ψ = φ_s` and the length `L`.
#[derive(Clone)]
struct ArcState {
    n: usize,
    psi: Vec<f64>,
    length: f64,
}

/// Closure bump for the `∫ψ = 0` constraint; vanishes to fourth order at both poles.
fn closure_bump(m: usize) -> Vec<f64> {
    (0..m).map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / m as f64).sin().powi(4)).collect()
}

/// `∫₀^{s_k} ψ` at the `m + 1` faces, Simpson per cell.
fn face_integrals(psi: &[f64], h: f64) -> Vec<f64> {
    let faces = to_faces(psi, Parity::Even);
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(psi.len() + 1);
    out.push(0.0);
    for j in 0..psi.len() {
        acc += h * (faces[j] + 4.0 * psi[j] + faces[j + 1]) / 6.0;
        out.push(acc);
    }
    out
}

impl ArcState {
    fn from_profile(p: &WarpedProfile) -> Self {
        let m = p.m();
        let length = p.s_max();
        let uniform = p.stretch().iter().all(|&a| (a - p.stretch()[0]).abs() <= 1e-14 * a);
        let phi: Vec<f64> = if uniform {
            p.phi().to_vec()
        } else {
            (0..m).map(|j| p.phi_at_s((j as f64 + 0.5) * length / m as f64)).collect()
        };
        let psi = d1(&phi, Parity::Odd, length / m as f64);
        Self { n: p.n(), psi, length }.closed()
    }

    /// The state with `∫₀ᴸ ψ = 0` restored.
    fn closed(mut self) -> Self {
        let h = self.h();
        let bump = closure_bump(self.psi.len());
        let c = face_integrals(&self.psi, h)[self.psi.len()] / face_integrals(&bump, h)[self.psi.len()];
        for (p, b) in self.psi.iter_mut().zip(&bump) {
            *p -= c * b;
        }
        self
    }

    /// Cell values of `φ`: face average minus `h²ψ_s/8`.
    fn phi(&self) -> Vec<f64> {
        let h = self.h();
        let f = face_integrals(&self.psi, h);
        let psi_s = d1(&self.psi, Parity::Even, h);
        (0..self.psi.len()).map(|j| 0.5 * (f[j] + f[j + 1]) - h * h / 8.0 * psi_s[j]).collect()
    }

    /// Profile with coordinate range `x_max` and constant stretch `L / x_max`.
    fn profile(&self, x_max: f64) -> Result<WarpedProfile> {
        let a = self.length / x_max;
        WarpedProfile::from_parts(self.n, x_max, self.phi(), vec![a; self.psi.len()])
    }

    fn h(&self) -> f64 {
        self.length / self.psi.len() as f64
    }

    fn neck(&self) -> Option<f64> {
        let f = self.phi();
        (1..f.len().saturating_sub(1))
            .filter(|&j| f[j] <= f[j - 1] && f[j] <= f[j + 1])
            .map(|j| f[j])
            .min_by(f64::total_cmp)
    }

    fn shifted(&self, dt: f64, k: &(Vec<f64>, f64)) -> Self {
        Self {
            n: self.n,
            psi: self.psi.iter().zip(&k.0).map(|(f, v)| f + dt * v).collect(),
            length: self.length + dt * k.1,
        }
        .closed()
    }

    fn velocity(&self) -> (Vec<f64>, f64) {
        let m = self.psi.len();
        let h = self.h();
        let nf = self.n as f64;
        let phi = self.phi();
        let psi = &self.psi;
        let psi_s = d1(psi, Parity::Even, h);
        let psi_ss = d2(psi, Parity::Even, h);
        let mut face = 0.0;
        let mut drift = Vec::with_capacity(m);
        for j in 0..m {
            let q = (nf - 1.0) * psi_s[j] / phi[j] * h;
            drift.push(face + 0.5 * q);
            face += q;
        }
        let dpsi = (0..m)
            .map(|j| {
                let xi = (j as f64 + 0.5) / m as f64;
                let (p, f) = (psi[j], phi[j]);
                psi_ss[j] + (nf - 3.0) * p * psi_s[j] / f + (nf - 2.0) * (1.0 - p * p) * p / (f * f)
                    - psi_s[j] * (drift[j] - xi * face)
            })
            .collect();
        (dpsi, face)
    }

    fn advance(&self, dt: f64) -> Result<Self> {
        let k1 = self.velocity();
        let k2 = self.shifted(0.5 * dt, &k1).velocity();
        let k3 = self.shifted(0.5 * dt, &k2).velocity();
        let k4 = self.shifted(dt, &k3).velocity();
        let psi: Vec<f64> = (0..self.psi.len())
            .map(|j| (k1.0[j] + 2.0 * k2.0[j] + 2.0 * k3.0[j] + k4.0[j]) / 6.0)
            .collect();
        let next = self.shifted(dt, &(psi, (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) / 6.0));
        if !(next.length > 0.0) {
            return Err(Error::InvalidParameter(format!("arc length collapsed to {}", next.length)));
        }
        if let Some((index, &value)) = next.phi().iter().enumerate().find(|(_, f)| !(**f > 0.0)) {
            return Err(Error::NonPositiveProfile { index, value });
        }
        Ok(next)
    }

    /// Largest stable substep: the singular `1/φ²` terms stiffen with `n`.
    fn substep(&self, cfl: f64, width: f64) -> f64 {
        cfl * 2.0 / (self.n as f64 - 1.0) * width * width
    }
}

/// Evolves `g0` by Ricci flow, emitting `steps + 1` snapshots spaced by `dt`.
pub fn warped_flow_evolve(g0: &SpectralManifold, dt: f64, steps: usize) -> Result<FlowTrajectory> {
    warped_flow_evolve_with(g0, dt, steps, &FlowConfig { k: g0.k(), ..FlowConfig::default() })
}

pub fn warped_flow_evolve_with(
    g0: &SpectralManifold,
    dt: f64,
    steps: usize,
    cfg: &FlowConfig,
) -> Result<FlowTrajectory> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let t_est = extinction_estimate(g0);
    let horizon = dt * steps as f64;
    if horizon >= t_est {
        return Err(Error::FlowExtinct { t: horizon, extinction: t_est });
    }
    let x_max = g0.profile().x_max();
    let mut state = ArcState::from_profile(g0.profile());
    let mut times = vec![0.0];
    let mut snapshots = vec![g0.clone()];
    let mut diags = vec![diagnostics(0.0, g0)];
    let mut truncated = None;

    'outer: for step in 1..=steps {
        let t0 = (step - 1) as f64 * dt;
        let needed = (dt / state.substep(cfg.cfl, state.h())).ceil() as usize;
        if needed > cfg.max_substeps {
            return Err(Error::CflViolation { dt, needed, limit: cfg.max_substeps });
        }
        let mut elapsed = 0.0;
        while elapsed < dt * (1.0 - 1e-12) {
            let width = state.neck().map_or(state.h(), |r| r.min(state.h()));
            let limit = state.substep(cfg.cfl, width);
            let remaining = dt - elapsed;
            let sub = remaining / (remaining / limit).ceil();
            state = match state.advance(sub) {
                Ok(next) => next,
                Err(e) => {
                    truncated = Some(Truncation { t: t0 + elapsed, reason: format!("step rejected: {e}") });
                    break 'outer;
                }
            };
            elapsed += sub;
            if let Some(r) = state.neck() {
                if r < cfg.pinch_threshold {
                    truncated = Some(Truncation {
                        t: t0 + elapsed,
                        reason: format!("neckpinch: interior minimum phi = {r:e}"),
                    });
                    break 'outer;
                }
            }
        }
        let t = step as f64 * dt;
        let g = match state.profile(x_max).and_then(|p| SpectralManifold::build_warped(p, cfg.k)) {
            Ok(g) => g,
            Err(e) => {
                truncated = Some(Truncation { t, reason: format!("snapshot rejected: {e}") });
                break;
            }
        };
        diags.push(diagnostics(t, &g));
        times.push(t);
        snapshots.push(g);
    }
    Ok(FlowTrajectory { times, snapshots, diagnostics: diags, truncated, extinction_estimate: t_est })
}

impl FlowTrajectory {
    pub fn from_snapshots(times: Vec<f64>, snapshots: Vec<SpectralManifold>) -> Self {
        assert_eq!(times.len(), snapshots.len());
        let diagnostics = times.iter().zip(&snapshots).map(|(&t, g)| diagnostics(t, g)).collect();
        let extinction_estimate = snapshots.first().map_or(f64::INFINITY, extinction_estimate);
        Self { times, snapshots, diagnostics, truncated: None, extinction_estimate }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated.is_some()
    }

    /// Index of the snapshot at time `t`, if one exists within `1e-9` relative.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-9 * (1.0 + t.abs()))
    }

    /// One report per step: `min R(t_k) ≥ min R(t_{k−1})` with tolerance `rel_tol·|min R|`.
    pub fn min_r_audit(&self, rel_tol: f64) -> Vec<InequalityReport> {
        self.diagnostics
            .windows(2)
            .map(|w| {
                let tol = rel_tol * w[0].min_r.abs().max(1e-300);
                InequalityReport::new("flow.min_r_nondecreasing", w[0].min_r, w[1].min_r, tol, format!("t={}", w[1].t))
                    .with_param("t", w[1].t)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sphere() {
        let g = sphere_flow(3, 1.0, 0.0, 256, 4).unwrap();
        assert!((g.mean_curvature() - 6.0).abs() < 1e-6);
        let g = sphere_flow(3, 1.0, 0.125, 256, 4).unwrap();
        assert!(g.curvature().values().iter().all(|r| (r - 12.0).abs() < 1e-3));
        assert!(matches!(sphere_flow(3, 1.0, 0.25, 256, 4), Err(Error::FlowExtinct { .. })));
        let v = sphere_flow(3, 1.0, 0.2499, 256, 4).unwrap().total_volume();
        assert!(v < 2e-4);
    }

    #[test]
    fn numeric_sphere_matches_closed_form() {
        let g0 = SpectralManifold::build_sphere(3, 1.0, 128, 8).unwrap();
        let traj = warped_flow_evolve(&g0, 1e-3, 100).unwrap();
        assert!(traj.truncated.is_none());
        for d in &traj.diagnostics {
            let exact = 6.0 / (1.0 - 4.0 * d.t);
            assert!((d.mean_r - exact).abs() / exact < 1e-3, "t = {}: {} vs {exact}", d.t, d.mean_r);
            assert!((d.min_r - exact).abs() / exact < 1e-3);
        }
        assert!(traj.min_r_audit(1e-6).iter().all(|r| r.pass));
    }

    #[test]
    fn higher_dimensional_sphere_is_stable() {
        for n in [4, 5] {
            let g0 = SpectralManifold::build_sphere(n, 1.0, 96, 4).unwrap();
            let t_end = 0.5 * sphere_extinction_time(n, 1.0);
            let steps = 50;
            let traj = warped_flow_evolve(&g0, t_end / steps as f64, steps).unwrap();
            let d = traj.diagnostics.last().unwrap();
            let r2 = 1.0 - 2.0 * (n as f64 - 1.0) * d.t;
            let exact = (n * (n - 1)) as f64 / r2;
            assert!((d.min_r - exact).abs() / exact < 1e-3, "n = {n}");
        }
    }

    #[test]
    fn large_dt_is_a_cfl_violation() {
        let g0 = SpectralManifold::build_sphere(3, 1.0, 128, 4).unwrap();
        assert!(matches!(warped_flow_evolve(&g0, 0.01, 5), Err(Error::CflViolation { .. })));
        assert!(matches!(warped_flow_evolve(&g0, 1e-3, 300), Err(Error::FlowExtinct { .. })));
    }

    #[test]
    fn thin_neck_pinches_before_extinction_estimate() {
        let g0 = SpectralManifold::build_warped(WarpedProfile::dumbbell(3, 0.03, 128).unwrap(), 4).unwrap();
        let dt = 1e-4;
        let steps = (0.999 * g0.n() as f64 / (2.0 * g0.mean_curvature()) / dt) as usize;
        let traj = warped_flow_evolve(&g0, dt, steps).unwrap();
        let cut = traj.truncated.as_ref().expect("neckpinch expected");
        assert!(cut.reason.contains("neckpinch"), "{}", cut.reason);
        assert!(cut.t < traj.extinction_estimate);
    }
}
