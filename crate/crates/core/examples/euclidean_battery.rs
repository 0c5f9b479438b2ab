//! Euclidean log-Sobolev inequalities on radial test functions.
use rilab::euclidean::{gaussian_sweep, run_battery};

fn main() -> rilab::Result<()> {
    let reports = run_battery(&[3, 4, 5])?;
    for r in &reports {
        println!("{:<22} {:<28} slack {:+.3e}", r.name, r.witness, r.slack);
    }
    for (l, s) in gaussian_sweep(3, &[0.25, 0.5, 1.0, 2.0, 4.0])? {
        println!("LOGGRAD gaussian lambda = {l}: slack {s:+.2e}");
    }
    Ok(())
}
