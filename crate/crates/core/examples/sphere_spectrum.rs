//! Laplace spectrum of a discretized round sphere against `l(l + n − 1)/r²`.
use rilab::SpectralManifold;

fn main() -> rilab::Result<()> {
    let (n, r) = (3, 1.5);
    let g = SpectralManifold::build_sphere(n, r, 256, 6)?;
    let (lambdas, _) = g.eigenpairs()?;
    println!("vol = {:.6} (exact {:.6})", g.total_volume(), 2.0 * std::f64::consts::PI.powi(2) * r.powi(3));
    for (l, lam) in lambdas.iter().enumerate() {
        let exact = (l * (l + n - 1)) as f64 / (r * r);
        println!("l = {l}: {lam:.6} vs {exact:.6}");
    }
    Ok(())
}
