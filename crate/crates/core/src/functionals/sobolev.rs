use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ScalarField, SpectralManifold};

/// Default inflation applied to sampled Sobolev constants before they enter a budget.
pub const SAFETY_FACTOR: f64 = 1.05;

/// Sampled lower estimates of the Sobolev and Poincaré–Sobolev constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevConstants {
    pub c_s_lower: f64,
    pub c_ps_lower: f64,
    /// `max(c_s_lower, 1)`.
    pub c_s_modified: f64,
    pub vol: f64,
    pub family: String,
}

impl SobolevConstants {
    /// The constant used inside budgets: `safety · c_s_lower`.
    pub fn c_s(&self, safety: f64) -> f64 {
        safety * self.c_s_lower
    }
}

fn critical_exponent(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0)
}

/// Per-member ratios `(‖u‖_q − vol^{−1/n}‖u‖₂)/‖∇u‖₂` and `‖u − ū‖_q/‖∇u‖₂`,
/// `None` for constant members.
pub fn sobolev_ratios(g: &SpectralManifold, u: &ScalarField) -> Result<Option<(f64, f64)>> {
    let grad = g.dirichlet_energy(u)?.sqrt();
    if !(grad > 1e-14 * g.lp_norm(u, 2.0)?.max(1e-300)) {
        return Ok(None);
    }
    let n = g.n() as f64;
    let q = critical_exponent(g.n());
    let vol = g.total_volume();
    let s = (g.lp_norm(u, q)? - vol.powf(-1.0 / n) * g.lp_norm(u, 2.0)?) / grad;
    let mean = g.mean(u)?;
    let centred = u.map(|v| v - mean)?;
    let ps = g.lp_norm(&centred, q)? / grad;
    Ok(Some((s.max(0.0), ps)))
}

pub fn sobolev_constants(g: &SpectralManifold, family: &[ScalarField], family_id: &str) -> Result<SobolevConstants> {
    let mut c_s = 0.0f64;
    let mut c_ps = 0.0f64;
    let mut any = false;
    for u in family {
        if let Some((s, ps)) = sobolev_ratios(g, u)? {
            c_s = c_s.max(s);
            c_ps = c_ps.max(ps);
            any = true;
        }
    }
    if !any {
        return Err(Error::AllConstantFamily);
    }
    Ok(SobolevConstants {
        c_s_lower: c_s,
        c_ps_lower: c_ps,
        c_s_modified: c_s.max(1.0),
        vol: g.total_volume(),
        family: family_id.to_string(),
    })
}

/// Smallest eigenvalue of `−Δ + R/4`.
pub fn lambda0(g: &SpectralManifold) -> f64 {
    g.lambda0()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::FunctionFamily;

    #[test]
    fn sphere_constants() {
        let g = SpectralManifold::build_sphere(3, 1.0, 128, 8).unwrap();
        let fam = FunctionFamily::sample(&g, 50, 1).unwrap();
        let c = sobolev_constants(&g, &fam.fields(), &fam.id).unwrap();
        assert!(c.c_s_lower > 0.0);
        assert!(c.c_s_lower <= c.c_ps_lower + 1e-12);
        assert!(c.c_s_modified >= 1.0);
        assert!((c.vol - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-3);
    }

    #[test]
    fn single_eigenfunction_is_clamped_nonnegative() {
        let g = SpectralManifold::build_sphere(3, 1.0, 64, 4).unwrap();
        let c = sobolev_constants(&g, &[g.eigenfunction(2).unwrap()], "eig2").unwrap();
        assert!(c.c_s_lower >= 0.0);
    }

    #[test]
    fn monotone_in_family_and_rejects_constants() {
        let g = SpectralManifold::build_sphere(4, 1.0, 64, 4).unwrap();
        let fam = FunctionFamily::sample(&g, 50, 3).unwrap().fields();
        let mut last = 0.0;
        for k in [1, 10, 30, 50] {
            let c = sobolev_constants(&g, &fam[..k], "prefix").unwrap();
            assert!(c.c_s_lower >= last);
            last = c.c_s_lower;
        }
        assert!(matches!(sobolev_constants(&g, &[g.constant(2.0)], "c"), Err(Error::AllConstantFamily)));
    }

    #[test]
    fn scale_invariant_on_spheres() {
        // every term of ‖u‖_q ≤ C‖∇u‖₂ + vol^{−1/n}‖u‖₂ scales by c^{(n−2)/2}
        let g1 = SpectralManifold::build_sphere(3, 1.0, 96, 4).unwrap();
        let g2 = SpectralManifold::build_sphere(3, 2.0, 96, 4).unwrap();
        let f1 = FunctionFamily::sample(&g1, 50, 5).unwrap();
        let f2 = FunctionFamily::sample(&g2, 50, 5).unwrap();
        let c1 = sobolev_constants(&g1, &f1.fields(), &f1.id).unwrap();
        let c2 = sobolev_constants(&g2, &f2.fields(), &f2.id).unwrap();
        assert!((c1.c_s_lower - c2.c_s_lower).abs() < 1e-9 * c1.c_s_lower);
        assert!((c1.c_ps_lower - c2.c_ps_lower).abs() < 1e-9 * c1.c_ps_lower);
    }

    #[test]
    fn lambda0_wrapper() {
        let g = SpectralManifold::build_sphere(3, 2.0, 128, 4).unwrap();
        assert!((lambda0(&g) - 0.375).abs() < 1e-6);
    }
}
