//! Logarithmic Sobolev inequalities on `Rⁿ`, checked on radial functions by
//! one-dimensional quadrature.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::InequalityReport;
use crate::quadrature::integrate;
use crate::special::{sphere_area, xlogx};

/// Upper end of the radial integrals.
pub const RHO_MAX: f64 = 12.0;
const QUAD_REL: f64 = 1e-10;
const QUAD_ABS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EuclideanVariant {
    /// `∫u² ln u² dμ ≤ 2∫|∇u|² dμ` for the Gaussian measure, `∫u² dμ = 1`.
    Gross,
    /// `∫u² ln u² ≤ 2∫|∇u|² + β ln β − (n/2) β ln(2πe²)` with `β = ∫u²`.
    Straight,
    /// `∫u² ln u² ≤ (n/2) ln((2/(πne))∫|∇u|²)` with `∫u² = 1`.
    LogGrad,
    /// `∫(|∇f|²/2 + f − n) e^{−f} ≥ 0` with `∫e^{−f} = (2π)^{n/2}`.
    Entropy,
}

impl EuclideanVariant {
    pub const ALL: [EuclideanVariant; 4] = [Self::Gross, Self::Straight, Self::LogGrad, Self::Entropy];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Gross => "GROSS",
            Self::Straight => "STRAIGHT",
            Self::LogGrad => "LOGGRAD",
            Self::Entropy => "ENTROPY",
        }
    }
}

impl fmt::Display for EuclideanVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Normalization {
    /// `∫u² dμ = 1`.
    GaussMeasure,
    /// `∫u² dx = 1`.
    LebesgueUnit,
    /// `∫u² dx = β`.
    LebesgueSpecial(f64),
}

type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial function `u(x) = v(|x|)` with its radial derivative.
#[derive(Clone)]
pub struct RadialTestFunction {
    pub n: usize,
    pub id: String,
    value: Radial,
    deriv: Radial,
    /// Points where `v` or `v'` may fail to be smooth.
    breaks: Vec<f64>,
    pub normalization: Normalization,
}

impl fmt::Debug for RadialTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialTestFunction")
            .field("n", &self.n)
            .field("id", &self.id)
            .field("normalization", &self.normalization)
            .finish()
    }
}

fn gauss_density(n: usize, rho: f64) -> f64 {
    (2.0 * PI).powf(-(n as f64) / 2.0) * (-rho * rho / 2.0).exp()
}

impl RadialTestFunction {
    pub fn new(
        n: usize,
        id: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        breaks: Vec<f64>,
    ) -> Self {
        Self {
            n,
            id: id.into(),
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            breaks,
            normalization: Normalization::LebesgueUnit,
        }
    }

    /// `e^{−λρ²}`.
    pub fn gaussian(n: usize, lambda: f64) -> Self {
        Self::new(n, format!("gauss{lambda}"), move |r| (-lambda * r * r).exp(), move |r| {
            -2.0 * lambda * r * (-lambda * r * r).exp()
        }, vec![])
    }

    /// `exp(−1/(1 − (ρ/w)²))` on `ρ < w`.
    pub fn bump(n: usize, w: f64) -> Self {
        let v = move |r: f64| {
            let y = r / w;
            if y < 1.0 {
                (-1.0 / (1.0 - y * y)).exp()
            } else {
                0.0
            }
        };
        let d = move |r: f64| {
            let y = r / w;
            if y < 1.0 {
                let q = 1.0 - y * y;
                -2.0 * y / (w * q * q) * (-1.0 / q).exp()
            } else {
                0.0
            }
        };
        Self::new(n, format!("bump{w}"), v, d, vec![w])
    }

    /// `max(0, 1 − ρ/w)`.
    pub fn tent(n: usize, w: f64) -> Self {
        Self::new(
            n,
            format!("tent{w}"),
            move |r| (1.0 - r / w).max(0.0),
            move |r| if r < w { -1.0 / w } else { 0.0 },
            vec![w],
        )
    }

    pub fn constant(n: usize) -> Self {
        Self::new(n, "const", |_| 1.0, |_| 0.0, vec![])
    }

    /// `u · (2π)^{−n/4} e^{−ρ²/4}`, which carries `L²(dμ)` isometrically onto `L²(dx)`.
    pub fn to_lebesgue(&self) -> Self {
        let n = self.n;
        let c = (2.0 * PI).powf(-(n as f64) / 4.0);
        let (v, d) = (self.value.clone(), self.deriv.clone());
        let v2 = v.clone();
        Self {
            n,
            id: format!("{}*gauss", self.id),
            value: Arc::new(move |r| c * v(r) * (-r * r / 4.0).exp()),
            deriv: Arc::new(move |r| c * (-r * r / 4.0).exp() * (d(r) - 0.5 * r * v2(r))),
            breaks: self.breaks.clone(),
            normalization: self.normalization,
        }
    }

    pub fn normalized(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn value(&self, rho: f64) -> f64 {
        (self.value)(rho)
    }

    pub fn deriv(&self, rho: f64) -> f64 {
        (self.deriv)(rho)
    }

    /// `ω_{n−1} ∫₀^{ρ_max} ρ^{n−1} f(ρ) dρ`, split at the break points.
    fn radial_integral(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let e = (self.n - 1) as i32;
        let mut pts = vec![0.0];
        pts.extend(self.breaks.iter().copied().filter(|b| *b > 0.0 && *b < RHO_MAX));
        pts.push(RHO_MAX);
        let mut total = 0.0;
        for w in pts.windows(2) {
            total += integrate(|r| r.powi(e) * f(r), w[0], w[1], QUAD_ABS, QUAD_REL)?;
        }
        Ok(sphere_area(self.n - 1) * total)
    }

    /// `ω_{n−1} ρ_max^{n−1} u(ρ_max)²`, a size indicator for the truncated tail.
    pub fn tail_indicator(&self, weighted: bool) -> f64 {
        let w = if weighted { gauss_density(self.n, RHO_MAX) } else { 1.0 };
        sphere_area(self.n - 1) * RHO_MAX.powi(self.n as i32 - 1) * self.value(RHO_MAX).powi(2) * w
    }
}

/// `∫(cu)²`, `∫(cu)² ln (cu)²` and `∫|∇(cu)|²` for `c² = scale2`.
#[derive(Debug, Clone, Copy)]
struct Moments {
    mass: f64,
    ent: f64,
    grad: f64,
}

fn moments(u: &RadialTestFunction, weighted: bool, scale2: f64) -> Result<Moments> {
    let n = u.n;
    let w = |r: f64| if weighted { gauss_density(n, r) } else { 1.0 };
    let mass = u.radial_integral(|r| scale2 * u.value(r).powi(2) * w(r))?;
    let ent = u.radial_integral(|r| xlogx(scale2 * u.value(r).powi(2)) * w(r))?;
    let grad = u.radial_integral(|r| scale2 * u.deriv(r).powi(2) * w(r))?;
    Ok(Moments { mass, ent, grad })
}

/// `c²` with `∫(cu)² = target` in the given measure.
fn scale_for(u: &RadialTestFunction, weighted: bool, target: f64) -> Result<f64> {
    let raw = moments(u, weighted, 1.0)?.mass;
    let sup = (0..=240).map(|k| u.value(RHO_MAX * k as f64 / 240.0).abs()).fold(0.0, f64::max);
    if !(raw > 0.0) || !raw.is_finite() {
        return Err(Error::Normalization(format!("{}: zero or non-finite mass", u.id)));
    }
    if !weighted && u.value(RHO_MAX).abs() > 1e-6 * sup {
        return Err(Error::Normalization(format!("{}: not square integrable on R^{}", u.id, u.n)));
    }
    Ok(target / raw)
}

pub fn euclidean_lsi_check(variant: EuclideanVariant, u: &RadialTestFunction) -> Result<InequalityReport> {
    let n = u.n;
    let nf = n as f64;
    let name = format!("euclidean.{variant}");
    let rep = match variant {
        EuclideanVariant::Gross => {
            let c2 = scale_for(u, true, 1.0)?;
            let m = moments(u, true, c2)?;
            InequalityReport::new(name, m.ent, 2.0 * m.grad, 1e-6, &u.id).with_param("tail", u.tail_indicator(true))
        }
        EuclideanVariant::Straight => {
            let (weighted, target) = match u.normalization {
                Normalization::LebesgueSpecial(beta) => (false, beta),
                Normalization::LebesgueUnit => (false, 1.0),
                Normalization::GaussMeasure => {
                    return Err(Error::Normalization("STRAIGHT needs a Lebesgue normalization".into()))
                }
            };
            let c2 = scale_for(u, weighted, target)?;
            let m = moments(u, weighted, c2)?;
            let beta = m.mass;
            let rhs = 2.0 * m.grad + beta * beta.ln() - 0.5 * nf * beta * (2.0 * PI * E * E).ln();
            InequalityReport::new(name, m.ent, rhs, 1e-6, &u.id)
                .with_param("beta", beta)
                .with_param("tail", u.tail_indicator(false))
        }
        EuclideanVariant::LogGrad => {
            let c2 = scale_for(u, false, 1.0)?;
            let m = moments(u, false, c2)?;
            let rhs = 0.5 * nf * (2.0 / (PI * nf * E) * m.grad).ln();
            InequalityReport::new(name, m.ent, rhs, 1e-6, &u.id).with_param("tail", u.tail_indicator(false))
        }
        EuclideanVariant::Entropy => {
            // e^{−f} = c²u², so |∇f|² e^{−f} = 4c²|∇u|² and f e^{−f} = −c²u² ln(c²u²)
            let c2 = scale_for(u, false, (2.0 * PI).powf(nf / 2.0))?;
            let m = moments(u, false, c2)?;
            let integral = 2.0 * m.grad - m.ent - nf * m.mass;
            InequalityReport::new(name, 0.0, integral, 1e-6, &u.id).with_param("tail", u.tail_indicator(false))
        }
    };
    Ok(rep.with_param("n", nf))
}

/// The default test functions for one variant in dimension `n`.
pub fn battery(variant: EuclideanVariant, n: usize) -> Vec<RadialTestFunction> {
    let mut base = vec![];
    for lambda in [0.1, 0.25, 0.5, 1.0, 2.0] {
        base.push(RadialTestFunction::gaussian(n, lambda));
    }
    base.push(RadialTestFunction::bump(n, 2.0));
    base.push(RadialTestFunction::tent(n, 1.5));
    match variant {
        EuclideanVariant::Gross => {
            base.push(RadialTestFunction::constant(n));
            base.into_iter().map(|u| u.normalized(Normalization::GaussMeasure)).collect()
        }
        EuclideanVariant::Straight => {
            let beta = (2.0 * PI).powf(n as f64 / 2.0) * E.powi(n as i32);
            let mut out: Vec<_> = base.iter().cloned().map(|u| u.normalized(Normalization::LebesgueSpecial(beta))).collect();
            out.extend(base.into_iter().map(|u| u.normalized(Normalization::LebesgueSpecial(0.5))));
            out
        }
        _ => base,
    }
}

/// Runs every variant on its battery for each `n`.
pub fn run_battery(dims: &[usize]) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    for &n in dims {
        for v in EuclideanVariant::ALL {
            for u in battery(v, n) {
                out.push(euclidean_lsi_check(v, &u)?);
            }
        }
    }
    Ok(out)
}

/// LOGGRAD slack over Gaussians `e^{−λρ²}` on a log grid of `λ`.
pub fn gaussian_sweep(n: usize, lambdas: &[f64]) -> Result<Vec<(f64, f64)>> {
    lambdas
        .iter()
        .map(|&l| Ok((l, euclidean_lsi_check(EuclideanVariant::LogGrad, &RadialTestFunction::gaussian(n, l))?.slack)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gross_constant_is_equality() {
        let r = euclidean_lsi_check(EuclideanVariant::Gross, &RadialTestFunction::constant(3)).unwrap();
        assert!(r.lhs.abs() < 1e-10 && r.rhs.abs() < 1e-12);
    }

    #[test]
    fn entropy_gaussian_is_equality() {
        for n in [3, 4, 5] {
            let r = euclidean_lsi_check(EuclideanVariant::Entropy, &RadialTestFunction::gaussian(n, 0.25)).unwrap();
            assert!(r.slack.abs() < 1e-8, "n={n}: {}", r.slack);
        }
    }

    #[test]
    fn loggrad_gaussians_are_extremal() {
        let lambdas: Vec<f64> = (0..25).map(|i| 0.15 * 60f64.powf(i as f64 / 24.0)).collect();
        let sweep = gaussian_sweep(3, &lambdas).unwrap();
        let best = sweep.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        assert!(best.abs() <= 1e-4);
    }

    #[test]
    fn battery_passes() {
        for r in run_battery(&[3, 4]).unwrap() {
            assert!(r.slack >= -1e-6, "{} {}: {}", r.name, r.witness, r.slack);
        }
    }

    #[test]
    fn gross_and_straight_agree() {
        for u in [RadialTestFunction::gaussian(3, 0.1), RadialTestFunction::tent(3, 2.0), RadialTestFunction::bump(4, 1.0)] {
            let g = euclidean_lsi_check(EuclideanVariant::Gross, &u.clone().normalized(Normalization::GaussMeasure)).unwrap();
            let v = u.to_lebesgue();
            let s1 = euclidean_lsi_check(EuclideanVariant::Straight, &v.clone().normalized(Normalization::LebesgueUnit)).unwrap();
            assert!((g.slack - s1.slack).abs() < 1e-7 * (1.0 + g.slack.abs()), "{}: {} vs {}", u.id, g.slack, s1.slack);
            for beta in [0.3, 7.0] {
                let sb = euclidean_lsi_check(EuclideanVariant::Straight, &v.clone().normalized(Normalization::LebesgueSpecial(beta))).unwrap();
                assert!((sb.slack - beta * s1.slack).abs() < 1e-7 * (1.0 + sb.slack.abs()));
            }
        }
    }

    #[test]
    fn infeasible_normalizations() {
        assert!(euclidean_lsi_check(EuclideanVariant::LogGrad, &RadialTestFunction::constant(3)).is_err());
        let zero = RadialTestFunction::new(3, "zero", |_| 0.0, |_| 0.0, vec![]);
        assert!(euclidean_lsi_check(EuclideanVariant::Gross, &zero).is_err());
    }
}
