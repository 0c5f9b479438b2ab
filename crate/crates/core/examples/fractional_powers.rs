//! H^{1/2} squared against the quadratic form, and H^{-1/2} by quadrature.
use rilab::semigroup::{c5_constants, h_neg_half_quadrature, h_power, project_out_zero_modes, SchrodingerOperator};
use rilab::SpectralManifold;

fn main() -> rilab::Result<()> {
    let g = SpectralManifold::build_sphere(3, 1.0, 128, 8)?;
    let h = SchrodingerOperator::conformal(&g)?;
    let u = g.field_fn(|s| (2.0 * s).cos() + 0.3 * s)?;
    let half = h_power(&h, &u, 0.5)?;
    println!("|H^1/2 u|^2 = {:.12}  Q(u) = {:.12}", g.lp_norm(&half, 2.0)?.powi(2), h.quadratic_form(&u)?);
    let v = project_out_zero_modes(&h, &u)?;
    let a = h_power(&h, &v, -0.5)?;
    for panels in [0.5, 1.0, 2.0, 4.0] {
        let b = h_neg_half_quadrature(&h, &v, panels)?;
        println!("panels/unit {panels}: rel err {:.3e}", g.lp_norm(&a.axpy(-1.0, &b)?, 2.0)? / g.lp_norm(&a, 2.0)?);
    }
    let k = c5_constants(4.0, 1.0, 2.0)?;
    println!("c1(mu=4, c=1, p=2) = {} (4/sqrt(pi) = {})", k.c1, 4.0 / std::f64::consts::PI.sqrt());
    Ok(())
}
