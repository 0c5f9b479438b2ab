//! W along the flow for the conjugate heat flow started from a constant.
use rilab::flow::{constant_f, monotonicity_audit, warped_flow_evolve};
use rilab::{SpectralManifold, WarpedProfile};

fn main() -> rilab::Result<()> {
    let g0 = SpectralManifold::build_warped(WarpedProfile::dumbbell(3, 0.4, 128)?, 6)?;
    let traj = warped_flow_evolve(&g0, 1e-3, 40)?;
    let t_star = *traj.times.last().unwrap();
    let g_star = traj.snapshots.last().unwrap();
    let audit = monotonicity_audit(&traj, t_star, 0.05, &constant_f(g_star, 0.05))?;
    for r in audit.records.iter().step_by(5) {
        println!("t = {:.3}  tau = {:.3}  W = {:.8}  dW/dt = {:.3e}", r.t, r.tau, r.w, r.dw_dt);
    }
    let worst = audit.reports.iter().filter(|r| r.name == "entropy.w_monotone").map(|r| r.slack).fold(f64::INFINITY, f64::min);
    println!("min monotonicity slack {worst:.3e}");
    Ok(())
}
