//! Warping profiles of rotationally symmetric metrics.
//!
//! A profile describes the metric `a(x)² dx² + φ(x)² g_{S^{n-1}}` on
//! `x ∈ [0, X]`, sampled at the cell centres `x_j = (j + 1/2) h`, `h = X / m`.
//! The arc-length parameter is `s(x) = ∫₀ˣ a`. Freshly built profiles have
//! `a ≡ 1`, so `x` is arc length; Ricci flow keeps `x` fixed and evolves `a`.
//!
//! Derivatives use fourth-order central stencils. Ghost cells come from the
//! parity of a smooth rotationally symmetric metric at the poles: `φ` extends
//! oddly, `a` (and every zonal function) evenly.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::SymTridiag;

pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarpedProfile {
    n: usize,
    x_max: f64,
    phi: Vec<f64>,
    a: Vec<f64>,
}

/// First and second arc-length derivatives of `φ` at the cell centres.
#[derive(Debug, Clone)]
pub struct ProfileDerivatives {
    pub phi_s: Vec<f64>,
    pub phi_ss: Vec<f64>,
}

impl WarpedProfile {
    /// Builds a profile from cell-centre samples of `φ` and the stretch `a`.
    pub fn from_parts(n: usize, x_max: f64, phi: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let p = Self { n, x_max, phi, a };
        p.validate()?;
        Ok(p)
    }

    /// Round sphere of radius `r`: `φ(s) = r sin(s / r)` on `[0, π r]`.
    pub fn sphere(n: usize, r: f64, m: usize) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("sphere radius must be positive, got {r}")));
        }
        Self::from_fn(n, std::f64::consts::PI * r, m, |s| r * (s / r).sin())
    }

    /// Symmetric dumbbell `φ(s) = sin s · (1 − (1 − ν) sin² s)` on `[0, π]`.
    ///
    /// The equator is a neck of radius `ν` between two bulbs whenever `ν < 2/3`.
    pub fn dumbbell(n: usize, neck: f64, m: usize) -> Result<Self> {
        if !(neck > 0.0 && neck < 2.0 / 3.0) {
            return Err(Error::OutOfRange { what: "neck radius", value: neck, lo: 0.0, hi: 2.0 / 3.0 });
        }
        Self::from_fn(n, std::f64::consts::PI, m, |s| {
            let sn = s.sin();
            sn * (1.0 - (1.0 - neck) * sn * sn)
        })
    }

    /// Samples an arc-length profile `s ↦ φ(s)` on `[0, s_max]`.
    pub fn from_fn(n: usize, s_max: f64, m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_basic(n, m)?;
        if !(s_max > 0.0) {
            return Err(Error::InvalidParameter(format!("s_max must be positive, got {s_max}")));
        }
        let h = s_max / m as f64;
        let phi = (0..m).map(|j| f((j as f64 + 0.5) * h)).collect();
        Self::from_parts(n, s_max, phi, vec![1.0; m])
    }

    /// Resamples tabulated `(s, φ)` pairs with a natural cubic spline.
    ///
    /// The table must start at `s = 0` and end at `s_max`, where `φ` vanishes.
    pub fn from_samples(n: usize, s: &[f64], phi: &[f64], m: usize) -> Result<Self> {
        if s.len() != phi.len() || s.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "profile table needs >= 4 matching rows, got {} s and {} phi",
                s.len(),
                phi.len()
            )));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) || s[0] != 0.0 {
            return Err(Error::InvalidParameter("profile s column must start at 0 and increase".into()));
        }
        let spline = CubicSpline::natural(s, phi);
        let s_max = *s.last().unwrap();
        Self::from_fn(n, s_max, m, |x| spline.eval(x))
    }

    /// Reads a CSV with header columns `s` and `phi`.
    pub fn read_csv(path: impl AsRef<Path>, n: usize, m: usize) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::Config(format!("profile CSV lacks a '{name}' column")))
        };
        let (is, ip) = (col("s")?, col("phi")?);
        let (mut s, mut phi) = (Vec::new(), Vec::new());
        for rec in reader.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Config(format!("bad number in profile CSV row {:?}", rec.position())))
            };
            s.push(parse(is)?);
            phi.push(parse(ip)?);
        }
        Self::from_samples(n, &s, &phi, m)
    }

    pub fn validate(&self) -> Result<()> {
        check_basic(self.n, self.phi.len())?;
        if self.a.len() != self.phi.len() {
            return Err(Error::GridMismatch { expected: self.phi.len(), got: self.a.len() });
        }
        for (index, &value) in self.phi.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveProfile { index, value });
            }
        }
        if let Some(index) = self.a.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("stretch non-positive at cell {index}")));
        }
        let m = self.m();
        let h = self.h();
        for (pole, j) in [("north", 0), ("south", m - 1)] {
            let slope = self.phi[j] / (0.5 * self.a[j] * h);
            if (slope - 1.0).abs() > 0.1 {
                return Err(Error::PoleRegularity { pole, slope });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn h(&self) -> f64 {
        self.x_max / self.phi.len() as f64
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn stretch(&self) -> &[f64] {
        &self.a
    }

    /// Arc length of the whole profile.
    pub fn s_max(&self) -> f64 {
        self.a.iter().sum::<f64>() * self.h()
    }

    /// Arc-length coordinate of the cell faces (`m + 1` values from 0 to `s_max`).
    pub fn face_s(&self) -> Vec<f64> {
        let h = self.h();
        let mut out = Vec::with_capacity(self.m() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for a in &self.a {
            acc += a * h;
            out.push(acc);
        }
        out
    }

    /// Arc-length coordinate of the cell centres.
    pub fn cell_s(&self) -> Vec<f64> {
        let faces = self.face_s();
        faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Fixed coordinate `x` at arc length `s` (inverse of the piecewise linear `s(x)`).
    pub fn x_of_s(&self, s: f64) -> f64 {
        let faces = self.face_s();
        let s = s.clamp(0.0, *faces.last().unwrap());
        let j = faces.partition_point(|&f| f <= s).saturating_sub(1).min(self.m() - 1);
        j as f64 * self.h() + (s - faces[j]) / self.a[j]
    }

    /// Fourth-order Lagrange interpolation of `φ` at the fixed coordinate `x`.
    pub fn phi_at_x(&self, x: f64) -> f64 {
        interpolate(&self.phi, Parity::Odd, self.h(), x)
    }

    /// `φ` as a function of arc length.
    pub fn phi_at_s(&self, s: f64) -> f64 {
        self.phi_at_x(self.x_of_s(s))
    }

    pub fn derivatives(&self) -> ProfileDerivatives {
        let h = self.h();
        let px = d1(&self.phi, Parity::Odd, h);
        let pxx = d2(&self.phi, Parity::Odd, h);
        let ax = d1(&self.a, Parity::Even, h);
        let mut phi_s = Vec::with_capacity(self.m());
        let mut phi_ss = Vec::with_capacity(self.m());
        for j in 0..self.m() {
            let a = self.a[j];
            phi_s.push(px[j] / a);
            phi_ss.push(pxx[j] / (a * a) - px[j] * ax[j] / (a * a * a));
        }
        ProfileDerivatives { phi_s, phi_ss }
    }

    /// Scalar curvature `R = −2(n−1) φ_ss/φ + (n−1)(n−2)(1 − φ_s²)/φ²`.
    pub fn scalar_curvature(&self) -> Vec<f64> {
        let d = self.derivatives();
        let nf = self.n as f64;
        (0..self.m())
            .map(|j| {
                let p = self.phi[j];
                -2.0 * (nf - 1.0) * d.phi_ss[j] / p + (nf - 1.0) * (nf - 2.0) * (1.0 - d.phi_s[j].powi(2)) / (p * p)
            })
            .collect()
    }

    /// Ricci eigenvalues `(radial, tangential)`:
    /// `−(n−1) φ_ss/φ` and `−φ_ss/φ + (n−2)(1 − φ_s²)/φ²`.
    pub fn ricci(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.derivatives();
        let nf = self.n as f64;
        let mut rad = Vec::with_capacity(self.m());
        let mut tan = Vec::with_capacity(self.m());
        for j in 0..self.m() {
            let p = self.phi[j];
            rad.push(-(nf - 1.0) * d.phi_ss[j] / p);
            tan.push(-d.phi_ss[j] / p + (nf - 2.0) * (1.0 - d.phi_s[j].powi(2)) / (p * p));
        }
        (rad, tan)
    }

    /// Metric scaling `g ↦ c² g`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {c}")));
        }
        Self::from_parts(
            self.n,
            self.x_max,
            self.phi.iter().map(|p| c * p).collect(),
            self.a.iter().map(|a| c * a).collect(),
        )
    }

    /// Index of the interior local minimum of `φ` with the smallest value, if any.
    pub fn neck(&self) -> Option<usize> {
        let m = self.m();
        (1..m - 1)
            .filter(|&j| self.phi[j] <= self.phi[j - 1] && self.phi[j] <= self.phi[j + 1])
            .min_by(|&i, &j| self.phi[i].total_cmp(&self.phi[j]))
    }
}

fn check_basic(n: usize, m: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    if m < MIN_GRID {
        return Err(Error::GridTooSmall(m));
    }
    Ok(())
}

/// Copies `f` into a buffer with two ghost cells on each side.
pub(crate) fn extend(f: &[f64], parity: Parity) -> Vec<f64> {
    let m = f.len();
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut e = Vec::with_capacity(m + 4);
    e.push(sign * f[1]);
    e.push(sign * f[0]);
    e.extend_from_slice(f);
    e.push(sign * f[m - 1]);
    e.push(sign * f[m - 2]);
    e
}

pub(crate) fn d1(f: &[f64], parity: Parity, h: f64) -> Vec<f64> {
    let e = extend(f, parity);
    (0..f.len())
        .map(|j| (e[j] - 8.0 * e[j + 1] + 8.0 * e[j + 3] - e[j + 4]) / (12.0 * h))
        .collect()
}

pub(crate) fn d2(f: &[f64], parity: Parity, h: f64) -> Vec<f64> {
    let e = extend(f, parity);
    (0..f.len())
        .map(|j| (-e[j] + 16.0 * e[j + 1] - 30.0 * e[j + 2] + 16.0 * e[j + 3] - e[j + 4]) / (12.0 * h * h))
        .collect()
}

/// Values at the `m + 1` faces `x = f h`.
pub(crate) fn to_faces(f: &[f64], parity: Parity) -> Vec<f64> {
    let e = extend(f, parity);
    (0..=f.len())
        .map(|k| (-e[k] + 9.0 * e[k + 1] + 9.0 * e[k + 2] - e[k + 3]) / 16.0)
        .collect()
}

pub(crate) fn interpolate(f: &[f64], parity: Parity, h: f64, x: f64) -> f64 {
    let m = f.len();
    let t = (x / h - 0.5).clamp(-0.5, m as f64 - 0.5);
    let j = (t.floor() as isize).clamp(-1, m as isize - 1);
    let u = t - j as f64;
    let e = extend(f, parity);
    // cells j-1, j, j+1, j+2 sit at offsets -1, 0, 1, 2 from cell j
    let base = (j + 1) as usize;
    let (y0, y1, y2, y3) = (e[base], e[base + 1], e[base + 2], e[base + 3]);
    let l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    let l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    let l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    let l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3
}

struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    fn natural(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut diag = vec![1.0; n];
        let mut off = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            diag[i] = (h0 + h1) / 3.0;
            off[i] = h1 / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        // end moments are pinned to zero, so their couplings drop out
        off[0] = 0.0;
        off[n - 2] = 0.0;
        let m = SymTridiag::new(diag, off).solve(&rhs);
        Self { x: x.to_vec(), y: y.to_vec(), m }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = self.x.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_curvature_is_constant() {
        let p = WarpedProfile::sphere(3, 1.0, 512).unwrap();
        for r in p.scalar_curvature() {
            assert!((r - 6.0).abs() < 1e-3, "R = {r}");
        }
        let p = WarpedProfile::sphere(4, 2.0, 256).unwrap();
        for r in p.scalar_curvature() {
            assert!((r - 3.0).abs() < 1e-3, "R = {r}");
        }
    }

    #[test]
    fn sphere_ricci_is_einstein() {
        let p = WarpedProfile::sphere(3, 1.0, 256).unwrap();
        let (rad, tan) = p.ricci();
        for j in 0..p.m() {
            assert!((rad[j] - 2.0).abs() < 1e-3 && (tan[j] - 2.0).abs() < 1e-3);
        }
    }

    #[test]
    fn dumbbell_neck() {
        let p = WarpedProfile::dumbbell(3, 0.3, 512).unwrap();
        let neck = p.neck().unwrap();
        let m = p.m();
        let bulb_min = p.phi()[m / 4..3 * m / 4].iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(p.phi()[neck], bulb_min);
        assert!(neck == m / 2 || neck == m / 2 - 1);
        assert!((p.phi()[neck] - 0.3).abs() < 1e-4);
        let r = p.scalar_curvature();
        assert!(r[neck] > 6.0, "R_neck = {}", r[neck]);
    }

    #[test]
    fn stretched_profile_has_same_curvature() {
        // same sphere, parametrized by x ∈ [0, 1] with a = π
        let m = 256;
        let h = 1.0 / m as f64;
        let phi = (0..m).map(|j| (PI * (j as f64 + 0.5) * h).sin()).collect();
        let p = WarpedProfile::from_parts(3, 1.0, phi, vec![PI; m]).unwrap();
        assert!((p.s_max() - PI).abs() < 1e-12);
        for r in p.scalar_curvature() {
            assert!((r - 6.0).abs() < 1e-3);
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(WarpedProfile::sphere(2, 1.0, 64), Err(Error::InvalidDimension(2))));
        assert!(matches!(WarpedProfile::sphere(3, 1.0, 8), Err(Error::GridTooSmall(8))));
        let bad = WarpedProfile::from_fn(3, PI, 64, |s| s.sin() - 0.5);
        assert!(matches!(bad, Err(Error::NonPositiveProfile { .. })));
        let kinked = WarpedProfile::from_fn(3, PI, 64, |s| 2.0 * s.sin());
        assert!(matches!(kinked, Err(Error::PoleRegularity { .. })));
    }

    #[test]
    fn interpolation_reproduces_sine() {
        let p = WarpedProfile::sphere(3, 1.0, 128).unwrap();
        for s in [0.0, 0.001, 0.3, 1.5, 3.0, PI] {
            assert!((p.phi_at_s(s) - s.sin()).abs() < 1e-7, "s = {s}");
        }
    }

    #[test]
    fn spline_resampling_matches_source() {
        let k = 400;
        let s: Vec<f64> = (0..=k).map(|i| PI * i as f64 / k as f64).collect();
        let phi: Vec<f64> = s.iter().map(|v| v.sin()).collect();
        let p = WarpedProfile::from_samples(3, &s, &phi, 128).unwrap();
        let sphere = WarpedProfile::sphere(3, 1.0, 128).unwrap();
        for (a, b) in p.phi().iter().zip(sphere.phi()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn face_values_and_stencils_are_fourth_order() {
        let m = 64;
        let h = PI / m as f64;
        let f: Vec<f64> = (0..m).map(|j| ((j as f64 + 0.5) * h).cos()).collect();
        let faces = to_faces(&f, Parity::Even);
        for (k, v) in faces.iter().enumerate() {
            assert!((v - (k as f64 * h).cos()).abs() < 1e-6);
        }
        let dd = d2(&f, Parity::Even, h);
        for (j, v) in dd.iter().enumerate() {
            assert!((v + f[j]).abs() < 1e-5);
        }
    }
}
