//! Measured Sobolev constants and every fixed-metric log-Sobolev variant.
use rilab::functionals::{lsi_check, lsi_fixed_metric, sobolev_constants, FunctionFamily, LsiVariant, MetricConstants, SAFETY_FACTOR};
use rilab::SpectralManifold;

fn main() -> rilab::Result<()> {
    let g = SpectralManifold::build_sphere(4, 1.0, 128, 8)?;
    let fam = FunctionFamily::sample(&g, 50, 7)?;
    let sob = sobolev_constants(&g, &fam.fields(), &fam.id)?;
    let k = MetricConstants::measure(&g, &sob, SAFETY_FACTOR);
    println!("{k:#?}");
    for v in LsiVariant::ALL.into_iter().filter(|v| v.is_fixed_metric()) {
        let p = match lsi_fixed_metric(&k, v) {
            Ok(p) => p,
            Err(e) => {
                println!("{v}: {e}");
                continue;
            }
        };
        let mut worst = f64::INFINITY;
        for m in &fam.members {
            for s in [0.01, 0.1, 1.0, 10.0] {
                worst = worst.min(lsi_check(&g, &p, p.sigma_min + s, &m.u, &m.id)?.slack);
            }
        }
        println!("{v}: min slack {worst:.4e}");
    }
    Ok(())
}
