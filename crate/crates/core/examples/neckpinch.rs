//! A dumbbell with a thin neck: the neck radius shrinks while min R rises.
use rilab::flow::{warped_flow_evolve_with, FlowConfig};
use rilab::{SpectralManifold, WarpedProfile};

fn main() -> rilab::Result<()> {
    let neck = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let g0 = SpectralManifold::build_warped(WarpedProfile::dumbbell(3, neck, 192)?, 4)?;
    let cfg = FlowConfig { k: 4, ..FlowConfig::default() };
    let traj = warped_flow_evolve_with(&g0, 2e-4, 200, &cfg)?;
    for d in traj.diagnostics.iter().step_by(20) {
        println!("t = {:.4}  min phi = {:.5}  min R = {:9.3}  lambda0 = {:.4}", d.t, d.min_phi, d.min_r, d.lambda0);
    }
    if let Some(tr) = &traj.truncated {
        println!("stopped at t = {}: {}", tr.t, tr.reason);
    }
    Ok(())
}
