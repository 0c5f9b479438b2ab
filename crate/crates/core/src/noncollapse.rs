//! Faber–Krahn audits and volume lower bounds for pole-centred geodesic balls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::InequalityReport;
use crate::geometry::SpectralManifold;
use crate::linalg::SymTridiag;

/// Cells used to resample a ball for its Dirichlet problem.
pub const BALL_CELLS: usize = 400;

/// `(1/(2^{n+3}A + 2BL²))^{n/2} rⁿ`; `B = 0` gives the form without the `L²` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoncollapseBound {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub l: f64,
    pub r: f64,
}

impl NoncollapseBound {
    pub fn value(&self) -> f64 {
        let n = self.n as f64;
        let denom = 2f64.powf(n + 3.0) * self.a + 2.0 * self.b * self.l * self.l;
        denom.powf(-n / 2.0) * self.r.powf(n)
    }

    /// `κ = 2^{−n(n+3)/2} A^{−n/2}`.
    pub fn kappa(n: usize, a: f64) -> f64 {
        let n = n as f64;
        2f64.powf(-n * (n + 3.0) / 2.0) * a.powf(-n / 2.0)
    }
}

fn check_radius(g: &SpectralManifold, r: f64) -> Result<()> {
    if !(r > 0.0 && r < g.s_max()) {
        return Err(Error::OutOfRange { what: "ball radius", value: r, lo: 0.0, hi: g.s_max() });
    }
    Ok(())
}

/// First Dirichlet eigenvalue of `−Δ` on `B(pole, r)`, from the radial
/// Sturm–Liouville problem resampled on [`BALL_CELLS`] cells with `u(r) = 0`.
pub fn dirichlet_lambda1(g: &SpectralManifold, r: f64) -> Result<f64> {
    dirichlet_lambda1_with(g, r, BALL_CELLS)
}

pub fn dirichlet_lambda1_with(g: &SpectralManifold, r: f64, cells: usize) -> Result<f64> {
    check_radius(g, r)?;
    let p = g.profile();
    let e = (g.n() - 1) as i32;
    let h = r / cells as f64;
    let area = |s: f64| g.omega() * p.phi_at_s(s).max(0.0).powi(e);
    let w: Vec<f64> = (0..cells).map(|j| area((j as f64 + 0.5) * h) * h).collect();
    // c[f] couples cells f − 1 and f; the last face sits half a cell from the boundary node
    let mut c: Vec<f64> = (0..=cells).map(|f| area(f as f64 * h) / h).collect();
    c[0] = 0.0;
    c[cells] = area(r) / (0.5 * h);
    let diag = (0..cells).map(|j| (c[j] + c[j + 1]) / w[j]).collect();
    let off = (0..cells - 1).map(|j| -c[j + 1] / (w[j] * w[j + 1]).sqrt()).collect();
    Ok(SymTridiag::new(diag, off).lowest_eigenvalue())
}

/// `λ₁(B(ρ)) ≤ 4 vol(B(ρ)) / (ρ² vol(B(ρ/2)))` from the test function `ρ − d`.
pub fn rayleigh_bound(g: &SpectralManifold, rho: f64) -> Result<f64> {
    check_radius(g, rho)?;
    Ok(4.0 * g.ball_volume(rho)? / (rho * rho * g.ball_volume(rho / 2.0)?))
}

pub fn rayleigh_audit(g: &SpectralManifold, rho: f64, witness: &str) -> Result<InequalityReport> {
    let l1 = dirichlet_lambda1(g, rho)?;
    let bound = rayleigh_bound(g, rho)?;
    Ok(InequalityReport::new("noncollapse.rayleigh", l1, bound, 1e-8 * bound, witness).with_param("r", rho))
}

fn max_curvature_on_ball(g: &SpectralManifold, r: f64) -> f64 {
    g.profile()
        .cell_s()
        .iter()
        .zip(g.curvature().values())
        .filter(|(s, _)| **s <= r)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `λ₁(B) vol(B)^{2/n} ≥ 1/(2A)`, reported with the smaller side as `lhs`.
///
/// The bound follows from `‖u‖²_{2n/(n−2)} ≤ A∫(|∇u|² + Ru²/4)` when
/// `A vol^{2/n} max_B R⁺/4 ≤ 1/2`; otherwise the report is hypothesis-failed.
pub fn faber_krahn_audit(g: &SpectralManifold, r: f64, a: f64, witness: &str) -> Result<InequalityReport> {
    let l1 = dirichlet_lambda1(g, r)?;
    let vol = g.ball_volume(r)?;
    let n = g.n() as f64;
    let v2n = vol.powf(2.0 / n);
    let hyp = a * v2n * max_curvature_on_ball(g, r).max(0.0) / 4.0 <= 0.5;
    Ok(InequalityReport::new("noncollapse.faber_krahn", 0.5 / a, l1 * v2n, 1e-8 / a, witness)
        .with_hypothesis(hyp)
        .with_param("r", r)
        .with_param("lambda1", l1)
        .with_param("vol", vol))
}

/// Lower bounds after `j = 1..=m` steps of
/// `vol(B(ρ)) ≥ (ρ²/(8A))^{a} vol(B(ρ/2))^{a}`, `a = n/(n+2)`, together with
/// the limit `Π_{l≥1} (ρ² 4^{1−l}/(8A))^{a^l}` summed to convergence.
pub fn volume_iteration(
    a: f64,
    n: usize,
    rho: f64,
    vol_fn: impl Fn(f64) -> f64,
    m: usize,
) -> Result<(Vec<f64>, f64)> {
    if m < 1 {
        return Err(Error::InvalidParameter("volume iteration needs m >= 1".into()));
    }
    if !(a > 0.0 && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("need A > 0 and rho > 0, got A={a}, rho={rho}")));
    }
    let ratio = n as f64 / (n as f64 + 2.0);
    let log_step = |l: usize| ((rho / 2f64.powi(l as i32 - 1)).powi(2) / (8.0 * a)).ln();
    let mut log_prod = 0.0;
    let mut weight = 1.0;
    let mut seq = Vec::with_capacity(m);
    for j in 1..=m {
        weight *= ratio;
        log_prod += weight * log_step(j);
        let v = vol_fn(rho / 2f64.powi(j as i32));
        if !(v > 0.0) {
            return Err(Error::Precondition(format!("volume function not positive at radius {}", rho / 2f64.powi(j as i32))));
        }
        seq.push((log_prod + weight * v.ln()).exp());
    }
    let mut log_lim = 0.0;
    let mut weight = 1.0;
    for l in 1.. {
        weight *= ratio;
        let term = weight * log_step(l);
        log_lim += term;
        if term.abs() < 1e-18 * log_lim.abs().max(1.0) {
            break;
        }
    }
    Ok((seq, log_lim.exp()))
}

/// `(1/(2^{n+3}A))^{n/2} ρⁿ`.
pub fn iteration_limit(a: f64, n: usize, rho: f64) -> f64 {
    NoncollapseBound { n, a, b: 0.0, l: 0.0, r: rho }.value()
}

/// `vol(B(pole, r))` against [`NoncollapseBound`]; hypothesis `R ≤ 1/r²` on the ball.
pub fn kappa_check(g: &SpectralManifold, a: f64, b: f64, l: f64, r: f64, witness: &str) -> Result<InequalityReport> {
    check_radius(g, r)?;
    let bound = NoncollapseBound { n: g.n(), a, b, l, r }.value();
    let vol = g.ball_volume(r)?;
    let hyp = max_curvature_on_ball(g, r) <= 1.0 / (r * r);
    Ok(InequalityReport::new("noncollapse.kappa", bound, vol, 1e-12 * vol, witness)
        .with_hypothesis(hyp)
        .with_param("r", r)
        .with_param("A", a)
        .with_param("B", b)
        .with_param("L", l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn s3() -> SpectralManifold {
        SpectralManifold::build_sphere(3, 1.0, 256, 4).unwrap()
    }

    #[test]
    fn sphere_dirichlet_oracle() {
        let g = s3();
        let mut last = f64::INFINITY;
        for r in [0.3, 0.8, PI / 2.0, 2.5, 3.0] {
            let l1 = dirichlet_lambda1(&g, r).unwrap();
            let exact = (PI / r).powi(2) - 1.0;
            assert!((l1 - exact).abs() < 1e-4 * (PI / r).powi(2), "r={r}: {l1} vs {exact}");
            assert!(l1 < last);
            last = l1;
        }
        assert!(dirichlet_lambda1(&g, PI).is_err());
    }

    #[test]
    fn flat_limit_trend() {
        // λ₁ r² tends to π², the first Dirichlet eigenvalue of the unit ball in R³
        let g = s3();
        let gaps: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&r| (dirichlet_lambda1(&g, r).unwrap() * r * r - PI * PI).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }

    #[test]
    fn rayleigh_holds() {
        let g = s3();
        for r in [0.1, 0.5, 1.0, 2.0, 3.0] {
            assert!(rayleigh_audit(&g, r, "s3").unwrap().pass);
        }
        let d = SpectralManifold::build_warped(crate::WarpedProfile::dumbbell(4, 0.2, 256).unwrap(), 4).unwrap();
        for r in [0.2, 1.0, 1.6, 2.5] {
            assert!(rayleigh_audit(&d, r, "dumbbell").unwrap().pass);
        }
    }

    #[test]
    fn faber_krahn_scaling_in_a() {
        let g = s3();
        let one = faber_krahn_audit(&g, PI / 2.0, 1.0, "hemi").unwrap();
        let two = faber_krahn_audit(&g, PI / 2.0, 2.0, "hemi").unwrap();
        assert!((two.lhs - one.lhs / 2.0).abs() < 1e-15);
        // shrinking balls keep λ₁ vol^{2/3} bounded below
        let vals: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&r| faber_krahn_audit(&g, r, 1.0, "ball").unwrap().rhs)
            .collect();
        assert!(vals.iter().all(|v| *v > 10.0));
    }

    #[test]
    fn geometric_identities() {
        let a: f64 = 0.6;
        let s: f64 = (1..200).map(|l| a.powi(l)).sum();
        let sl: f64 = (1..400).map(|l| l as f64 * a.powi(l)).sum();
        assert!((s - 1.5).abs() < 1e-12 && (sl - 3.75).abs() < 1e-12);
        assert!((iteration_limit(1.0, 3, 1.0) - 2f64.powi(-9)).abs() < 1e-18);
    }

    #[test]
    fn iteration_converges_on_s3() {
        let g = s3();
        let (seq, lim) = volume_iteration(1.0, 3, 1.0, |r| g.ball_volume(r).unwrap(), 30).unwrap();
        let closed = iteration_limit(1.0, 3, 1.0);
        assert!((lim - closed).abs() < 1e-12 * closed);
        assert!((seq[29] - closed).abs() < 1e-6);
        assert!(volume_iteration(1.0, 3, 1.0, |_| 1.0, 0).is_err());
    }

    #[test]
    fn kappa_on_s3() {
        let g = s3();
        let r = kappa_check(&g, 1.0, 0.0, 0.0, 0.4, "s3").unwrap();
        assert!(r.hypothesis_ok && r.pass);
        let big = kappa_check(&g, 1.0, 0.0, 0.0, 0.5, "s3").unwrap();
        assert!(!big.hypothesis_ok && !big.is_failure());
        let g2 = g.scaled(2.0).unwrap();
        let s = kappa_check(&g2, 1.0, 0.0, 0.0, 0.8, "s3x2").unwrap();
        assert!((s.rhs / s.lhs - r.rhs / r.lhs).abs() < 1e-3 * (r.rhs / r.lhs));
    }

    proptest! {
        #[test]
        fn iteration_limit_matches(a in 0.1f64..10.0, n in 3usize..6, rho in 0.1f64..3.0) {
            let (_, lim) = volume_iteration(a, n, rho, |r| r.powi(n as i32), 1).unwrap();
            let closed = iteration_limit(a, n, rho);
            prop_assert!((lim - closed).abs() < 1e-6 * closed);
        }

        #[test]
        fn bound_monotone(a in 0.1f64..10.0, b in 0.0f64..5.0, l in 0.0f64..5.0, r in 0.1f64..2.0) {
            let bound = |a: f64, b: f64, l: f64, r: f64| NoncollapseBound { n: 3, a, b, l, r }.value();
            let v = bound(a, b, l, r);
            prop_assert!(v > 0.0);
            prop_assert!(bound(a * 1.1, b, l, r) < v);
            prop_assert!(bound(a, b + 0.1, l.max(0.1), r) <= v);
            let v2 = bound(a, b, l, 2.0 * r);
            prop_assert!((v2 / v - 8.0).abs() < 1e-9);
        }
    }
}
