use crate::error::{Error, Result};
use crate::functionals::InequalityReport;
use crate::geometry::{ScalarField, SpectralManifold};

use super::{h_power, SchrodingerOperator};

/// Right-hand side of a Sobolev inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SobolevForm {
    /// `‖u‖²_{2n/(n−2)} ≤ a Q(u) + b ‖u‖₂²`.
    Quadratic { a: f64, b: f64 },
    /// `‖u‖_{np/(n−p)} ≤ c ‖H₀^{1/2}u‖_p`, where `H` is already `H₀`.
    Root { c: f64, p: f64 },
}

/// `R/4 − min R⁻/4 + 1`, the potential of `H₀`, with `min R⁻` taken on the
/// initial metric.
pub fn h0_potential(g: &SpectralManifold, min_r0: f64) -> ScalarField {
    let shift = 1.0 - 0.25 * min_r0.min(0.0);
    ScalarField::constant(g.m(), shift).axpy(0.25, g.curvature()).expect("grid sizes agree")
}

pub fn sobolev_check(h: &SchrodingerOperator<'_>, form: SobolevForm, u: &ScalarField, witness: &str) -> Result<InequalityReport> {
    let g = h.manifold();
    let n = g.n() as f64;
    let rep = match form {
        SobolevForm::Quadratic { a, b } => {
            let q = 2.0 * n / (n - 2.0);
            let lhs = g.lp_norm(u, q)?.powi(2);
            let rhs = a * h.quadratic_form(u)? + b * g.lp_norm(u, 2.0)?.powi(2);
            InequalityReport::new("sobolev.p2", lhs, rhs, 1e-10 * rhs.abs(), witness).with_param("p", 2.0)
        }
        SobolevForm::Root { c, p } => {
            if !(p > 1.0 && p < n) {
                return Err(Error::OutOfRange { what: "p", value: p, lo: 1.0, hi: n });
            }
            let q = n * p / (n - p);
            let lhs = g.lp_norm(u, q)?;
            let rhs = c * g.lp_norm(&h_power(h, u, 0.5)?, p)?;
            InequalityReport::new(format!("sobolev.p{p}"), lhs, rhs, 1e-10 * rhs.abs(), witness).with_param("p", p)
        }
    };
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{d3_constants, root_sobolev_constant};

    #[test]
    fn sphere_checks_pass() {
        let g = SpectralManifold::build_sphere(3, 1.0, 96, 4).unwrap();
        let h = SchrodingerOperator::conformal(&g).unwrap();
        let d = d3_constants(1.0, 3.0, 3.0, 4.0, 0.0).unwrap();
        let a = d.without_l2(g.lambda0()).unwrap();
        let form = SobolevForm::Quadratic { a, b: 0.0 };
        for (id, u) in [("const", g.constant(1.0)), ("eig2", g.eigenfunction(2).unwrap())] {
            let r = sobolev_check(&h, form, &u, id).unwrap();
            assert!(r.pass && r.slack > 0.0, "{r:?}");
        }
        let h0 = SchrodingerOperator::new(&g, h0_potential(&g, g.min_curvature())).unwrap();
        let c = root_sobolev_constant(d.bar_c, 3.0, 1.5).unwrap();
        let u = g.field_fn(|s| (-5.0 * s * s).exp()).unwrap();
        assert!(sobolev_check(&h0, SobolevForm::Root { c, p: 1.5 }, &u, "bump").unwrap().pass);
        assert!(sobolev_check(&h0, SobolevForm::Root { c, p: 3.0 }, &u, "bump").is_err());
    }
}
