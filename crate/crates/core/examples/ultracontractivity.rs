//! Heat kernel norms of the conformal operator against the Davies bound.
use rilab::functionals::{lsi_fixed_metric, sobolev_constants, FunctionFamily, LsiVariant, MetricConstants, SAFETY_FACTOR};
use rilab::semigroup::{ultracontractivity_bound, LogBeta, SchrodingerOperator};
use rilab::SpectralManifold;

fn main() -> rilab::Result<()> {
    let g = SpectralManifold::build_sphere(3, 1.0, 128, 8)?;
    let fam = FunctionFamily::sample(&g, 50, 1)?;
    let k = MetricConstants::measure(&g, &sobolev_constants(&g, &fam.fields(), &fam.id)?, SAFETY_FACTOR);
    let beta = LogBeta::from_profile(&lsi_fixed_metric(&k, LsiVariant::Rls3)?)?;
    let star = if beta.sigma_star().is_finite() { beta.sigma_star() } else { 4.0 };
    let h = SchrodingerOperator::conformal(&g)?;
    println!("sigma* = {star}");
    for i in 0..8 {
        let t = star / 4.0 * 10f64.powf(-3.0 + 0.4 * i as f64);
        let b = ultracontractivity_bound(&h, &beta, t, star)?;
        println!("t = {t:.3e}  |e^-tH|_2->inf = {:.4e}  bound = {:.4e}", b.empirical_2_inf, b.bound_2_inf);
    }
    Ok(())
}
