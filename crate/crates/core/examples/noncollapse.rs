//! Ball volumes against the noncollapsing bound, and the volume iteration.
use rilab::noncollapse::{iteration_limit, kappa_check, rayleigh_audit, volume_iteration};
use rilab::{SpectralManifold, WarpedProfile};

fn main() -> rilab::Result<()> {
    let g = SpectralManifold::build_warped(WarpedProfile::dumbbell(3, 0.3, 128)?, 6)?;
    let a = 2.0;
    for frac in [0.05, 0.1, 0.2, 0.4] {
        let r = frac * g.s_max();
        let k = kappa_check(&g, a, 0.0, r, r, "demo")?;
        let ray = rayleigh_audit(&g, r, "demo")?;
        println!("r = {r:.3}  vol = {:.4e}  bound = {:.4e}  R<=1/r^2: {}  rayleigh slack {:.3e}", k.rhs, k.lhs, k.hypothesis_ok, ray.slack);
    }
    let rho = 0.5 * g.s_max();
    let (seq, lim) = volume_iteration(a, g.n(), rho, |r| g.ball_volume(r).unwrap_or(f64::NAN), 30)?;
    println!("iterate 30 = {:.10e}  limit = {lim:.10e}  closed form = {:.10e}", seq[29], iteration_limit(a, g.n(), rho));
    Ok(())
}
