use crate::error::{Error, Result};
use crate::geometry::ScalarField;
use crate::quadrature::kronrod15;
use crate::special::gamma_one_half;

use super::SchrodingerOperator;

/// Eigenvalues at or below this (relative to the top of the spectrum) are zero modes.
const ZERO_MODE_REL: f64 = 1e-10;
/// Largest zero-mode component, relative to `‖u‖₂`, accepted by negative powers.
const ZERO_MODE_TOL: f64 = 1e-8;

fn is_zero_mode(h: &SchrodingerOperator<'_>, lambda: f64) -> bool {
    let top = h.eigenvalues().last().copied().unwrap_or(1.0).abs().max(1.0);
    lambda.abs() <= ZERO_MODE_REL * top
}

/// `u` minus its components along zero modes of `H`.
pub fn project_out_zero_modes(h: &SchrodingerOperator<'_>, u: &ScalarField) -> Result<ScalarField> {
    let c: Vec<f64> = h
        .coefficients(u)?
        .into_iter()
        .zip(h.eigenvalues())
        .map(|(c, l)| if is_zero_mode(h, *l) { c } else { 0.0 })
        .collect();
    u.axpy(-1.0, &h.synthesize(&c, |_| 1.0)?)
}

fn nonzero_coefficients(h: &SchrodingerOperator<'_>, u: &ScalarField) -> Result<Vec<f64>> {
    let norm = h.manifold().lp_norm(u, 2.0)?;
    let mut c = h.coefficients(u)?;
    for (ci, l) in c.iter_mut().zip(h.eigenvalues()) {
        if is_zero_mode(h, *l) {
            if ci.abs() > ZERO_MODE_TOL * norm.max(1e-300) {
                return Err(Error::ZeroMode(*ci));
            }
            *ci = 0.0;
        } else if *l < 0.0 {
            return Err(Error::Precondition(format!("negative eigenvalue {l}; fractional powers need H >= 0")));
        }
    }
    Ok(c)
}

/// `H^e u` spectrally. Negative exponents reject zero-mode content.
pub fn h_power(h: &SchrodingerOperator<'_>, u: &ScalarField, exponent: f64) -> Result<ScalarField> {
    if exponent < 0.0 {
        let c = nonzero_coefficients(h, u)?;
        return h.synthesize(&c, |l| if l > 0.0 { l.powf(exponent) } else { 0.0 });
    }
    if let Some(l) = h.eigenvalues().iter().find(|l| **l < 0.0 && !is_zero_mode(h, **l)) {
        return Err(Error::Precondition(format!("negative eigenvalue {l}; fractional powers need H >= 0")));
    }
    let c = h.coefficients(u)?;
    h.synthesize(&c, |l| l.max(0.0).powf(exponent))
}

/// Per-mode weights `Γ(1/2)^{−1}∫₀^∞ t^{−1/2} e^{−λt} dt` by composite
/// Gauss–Kronrod in `ln t` over `[10⁻⁶/λ_max, 40/λ_min⁺]`, with the head
/// `∫₀^{t_min}` and the tail `∫_{t_max}^∞` added analytically.
pub fn neg_half_weights(lambdas: &[f64], panels_per_unit: f64) -> Result<Vec<f64>> {
    let pos: Vec<f64> = lambdas.iter().copied().filter(|l| *l > 0.0).collect();
    if pos.is_empty() {
        return Err(Error::InvalidParameter("no positive eigenvalue".into()));
    }
    let lmin = pos.iter().copied().fold(f64::INFINITY, f64::min);
    let lmax = pos.iter().copied().fold(0.0, f64::max);
    let (t0, t1) = (1e-6 / lmax, 40.0 / lmin);
    let (x0, x1) = (t0.ln(), t1.ln());
    let panels = ((x1 - x0) * panels_per_unit).ceil().max(1.0) as usize;
    let width = (x1 - x0) / panels as f64;
    let rule = kronrod15();
    let mut nodes = Vec::with_capacity(panels * rule.len());
    for k in 0..panels {
        let c = x0 + (k as f64 + 0.5) * width;
        for (x, w) in &rule {
            let t = (c + 0.5 * width * x).exp();
            // dt = t dx, so t^{−1/2} dt = t^{1/2} dx
            nodes.push((t, 0.5 * width * w * t.sqrt()));
        }
    }
    let gamma = gamma_one_half();
    Ok(lambdas
        .iter()
        .map(|&l| {
            if l <= 0.0 {
                return 0.0;
            }
            let body: f64 = nodes.iter().map(|(t, w)| w * (-l * t).exp()).sum();
            let y = l * t0;
            let head = 2.0 * t0.sqrt() * (1.0 - y / 3.0 + y * y / 10.0);
            let z = l * t1;
            // Γ(1/2, z)/√λ with the asymptotic series of the upper incomplete gamma
            let tail = (-z).exp() / (l * t1.sqrt()) * (1.0 - 0.5 / z + 0.75 / (z * z));
            (body + head + tail) / gamma
        })
        .collect())
}

/// `H^{−1/2} u` through the heat-semigroup integral.
pub fn h_neg_half_quadrature(h: &SchrodingerOperator<'_>, u: &ScalarField, panels_per_unit: f64) -> Result<ScalarField> {
    let c = nonzero_coefficients(h, u)?;
    let w = neg_half_weights(h.eigenvalues(), panels_per_unit)?;
    let scaled: Vec<f64> = c.iter().zip(&w).map(|(c, w)| c * w).collect();
    h.synthesize(&scaled, |_| 1.0)
}
