//! Finite-volume model of a warped-product manifold acting on zonal functions.
//!
//! Cell `j` carries the volume weight `w_j = ω_{n−1} φ_j^{n−1} a_j h`, and the
//! face between cells `j` and `j+1` the conductance
//! `c = ω_{n−1} φ_f^{n−1} / (a_f h)` (face values by fourth-order
//! interpolation; the two pole faces carry no flux). With `K` the stiffness
//! matrix, `uᵀ K u = Σ c (u_{j+1} − u_j)²` is the Dirichlet energy and
//! `Δ = −W⁻¹K` is self-adjoint for the weighted inner product. Spectra are
//! taken from the symmetric similarity transform `W^{−1/2} K W^{−1/2}`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::field::{check_len, ScalarField};
use crate::geometry::profile::{interpolate, to_faces, Parity, WarpedProfile};
use crate::linalg::{EigenPairs, SymTridiag};
use crate::special::sphere_area;

#[derive(Debug, Clone)]
pub struct SpectralManifold {
    profile: WarpedProfile,
    k: usize,
    omega: f64,
    weights: Vec<f64>,
    conductance: Vec<f64>,
    cumulative: Vec<f64>,
    curvature: ScalarField,
    total_volume: f64,
    spectrum: OnceLock<EigenPairs>,
}

impl SpectralManifold {
    pub fn build_sphere(n: usize, r: f64, m: usize, k: usize) -> Result<Self> {
        Self::build_warped(WarpedProfile::sphere(n, r, m)?, k)
    }

    pub fn build_warped(profile: WarpedProfile, k: usize) -> Result<Self> {
        profile.validate()?;
        if k < 2 {
            return Err(Error::InvalidParameter(format!("eigen count k must be >= 2, got {k}")));
        }
        let n = profile.n();
        let m = profile.m();
        let h = profile.h();
        let omega = sphere_area(n - 1);
        let e = (n - 1) as i32;
        let phi = profile.phi();
        let a = profile.stretch();
        let weights: Vec<f64> = (0..m).map(|j| omega * phi[j].powi(e) * a[j] * h).collect();
        let phi_f = to_faces(phi, Parity::Odd);
        let a_f = to_faces(a, Parity::Even);
        let mut conductance: Vec<f64> = (0..=m).map(|f| omega * phi_f[f].powi(e) / (a_f[f] * h)).collect();
        conductance[0] = 0.0;
        conductance[m] = 0.0;
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(0.0);
        for w in &weights {
            cumulative.push(cumulative.last().unwrap() + w);
        }
        let total_volume = cumulative[m];
        let curvature = ScalarField::new(profile.scalar_curvature())?;
        Ok(Self {
            profile,
            k: k.min(m),
            omega,
            weights,
            conductance,
            cumulative,
            curvature,
            total_volume,
            spectrum: OnceLock::new(),
        })
    }

    /// Same geometry with the scalar curvature replaced by `r`.
    pub fn with_curvature(&self, r: ScalarField) -> Result<Self> {
        check_len(self.m(), r.len())?;
        let mut out = self.clone();
        out.curvature = r;
        Ok(out)
    }

    /// Metric scaling `g ↦ c² g`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::build_warped(self.profile.scaled(c)?, self.k)
    }

    pub fn profile(&self) -> &WarpedProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn conductances(&self) -> &[f64] {
        &self.conductance
    }

    pub fn curvature(&self) -> &ScalarField {
        &self.curvature
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn s_max(&self) -> f64 {
        self.profile.s_max()
    }

    /// Area of the unit `S^{n−1}`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn min_curvature(&self) -> f64 {
        self.curvature.min()
    }

    /// Volume-averaged scalar curvature R̂.
    pub fn mean_curvature(&self) -> f64 {
        self.integral(self.curvature.values()) / self.total_volume
    }

    pub fn constant(&self, c: f64) -> ScalarField {
        ScalarField::constant(self.m(), c)
    }

    pub fn field(&self, values: Vec<f64>) -> Result<ScalarField> {
        check_len(self.m(), values.len())?;
        ScalarField::new(values)
    }

    /// Samples `s ↦ f(s)` (arc length from the north pole) at the cell centres.
    pub fn field_fn(&self, f: impl Fn(f64) -> f64) -> Result<ScalarField> {
        ScalarField::new(self.profile.cell_s().into_iter().map(f).collect())
    }

    /// Value of a zonal field at arc length `s`, by fourth-order interpolation.
    pub fn field_at(&self, u: &ScalarField, s: f64) -> f64 {
        let x = self.profile.x_of_s(s);
        interpolate(u.values(), Parity::Even, self.profile.h(), x)
    }

    fn check(&self, u: &ScalarField) -> Result<()> {
        check_len(self.m(), u.len())
    }

    pub fn integral(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn inner(&self, u: &ScalarField, v: &ScalarField) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.weights.iter().zip(u.values()).zip(v.values()).map(|((w, a), b)| w * a * b).sum())
    }

    pub fn mean(&self, u: &ScalarField) -> Result<f64> {
        self.check(u)?;
        Ok(self.integral(u.values()) / self.total_volume)
    }

    /// `(Σ w_j |u_j|^p)^{1/p}`, or `max |u_j|` for `p = ∞`.
    pub fn lp_norm(&self, u: &ScalarField, p: f64) -> Result<f64> {
        self.check(u)?;
        if !(p >= 1.0) {
            return Err(Error::OutOfRange { what: "p", value: p, lo: 1.0, hi: f64::INFINITY });
        }
        if p.is_infinite() {
            return Ok(u.sup_abs());
        }
        let scale = u.sup_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let s: f64 = self.weights.iter().zip(u.values()).map(|(w, v)| w * (v.abs() / scale).powf(p)).sum();
        Ok(scale * s.powf(1.0 / p))
    }

    /// Stiffness `K u`, so that `−Δu = W⁻¹ K u`.
    pub fn stiffness_apply(&self, u: &[f64]) -> Vec<f64> {
        let m = self.m();
        let mut out = vec![0.0; m];
        for f in 1..m {
            let flux = self.conductance[f] * (u[f] - u[f - 1]);
            out[f - 1] -= flux;
            out[f] += flux;
        }
        out
    }

    pub fn laplacian(&self, u: &ScalarField) -> Result<ScalarField> {
        self.check(u)?;
        let ku = self.stiffness_apply(u.values());
        ScalarField::new(ku.iter().zip(&self.weights).map(|(k, w)| -k / w).collect())
    }

    /// `∫|∇u|² = Σ c_f (u_{j+1} − u_j)²`.
    pub fn dirichlet_energy(&self, u: &ScalarField) -> Result<f64> {
        self.check(u)?;
        Ok(self.energy_raw(u.values()))
    }

    pub(crate) fn energy_raw(&self, u: &[f64]) -> f64 {
        (1..self.m()).map(|f| self.conductance[f] * (u[f] - u[f - 1]).powi(2)).sum()
    }

    /// Stiffness matrix `K` as a tridiagonal.
    pub fn stiffness(&self) -> SymTridiag {
        let m = self.m();
        let diag = (0..m).map(|j| self.conductance[j] + self.conductance[j + 1]).collect();
        let off = (1..m).map(|f| -self.conductance[f]).collect();
        SymTridiag::new(diag, off)
    }

    /// `W^{−1/2}(K + W Ψ)W^{−1/2}`, the symmetric form of `−Δ + Ψ`.
    pub fn schrodinger_matrix(&self, psi: &[f64]) -> SymTridiag {
        let m = self.m();
        let w = &self.weights;
        let diag = (0..m)
            .map(|j| (self.conductance[j] + self.conductance[j + 1]) / w[j] + psi[j])
            .collect();
        let off = (1..m).map(|f| -self.conductance[f] / (w[f - 1] * w[f]).sqrt()).collect();
        SymTridiag::new(diag, off)
    }

    /// Converts eigenvectors of the symmetric form into weighted-orthonormal fields.
    pub(crate) fn unsymmetrize(&self, mut pairs: EigenPairs) -> EigenPairs {
        for v in &mut pairs.vectors {
            for (x, w) in v.iter_mut().zip(&self.weights) {
                *x /= w.sqrt();
            }
        }
        pairs
    }

    /// Full spectrum of `−Δ` with weighted-orthonormal eigenfunctions, computed once.
    pub fn spectrum(&self) -> Result<&EigenPairs> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let zeros = vec![0.0; self.m()];
        let pairs = self.unsymmetrize(self.schrodinger_matrix(&zeros).eigen()?);
        Ok(self.spectrum.get_or_init(|| pairs))
    }

    /// The first `k` eigenpairs of `−Δ`.
    pub fn eigenpairs(&self) -> Result<(&[f64], &[Vec<f64>])> {
        let s = self.spectrum()?;
        Ok((&s.values[..self.k], &s.vectors[..self.k]))
    }

    pub fn eigenfunction(&self, i: usize) -> Result<ScalarField> {
        let s = self.spectrum()?;
        let v = s.vectors.get(i).ok_or_else(|| {
            Error::InvalidParameter(format!("eigenfunction index {i} beyond grid size {}", self.m()))
        })?;
        ScalarField::new(v.clone())
    }

    /// Lowest eigenvalue of `−Δ + R/4`.
    pub fn lambda0(&self) -> f64 {
        let psi: Vec<f64> = self.curvature.values().iter().map(|r| r / 4.0).collect();
        self.schrodinger_matrix(&psi).lowest_eigenvalue()
    }

    /// Volume of the geodesic ball of radius `r` about the north pole.
    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        let s_max = self.s_max();
        if !(r > 0.0 && r <= s_max * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange { what: "ball radius", value: r, lo: 0.0, hi: s_max });
        }
        if r >= s_max {
            return Ok(self.total_volume);
        }
        let faces = self.profile.face_s();
        let j = faces.partition_point(|&f| f <= r).saturating_sub(1).min(self.m() - 1);
        let partial = |upper: f64| -> f64 {
            // three-point Gauss–Legendre on [faces[j], upper]
            let lo = faces[j];
            let half = 0.5 * (upper - lo);
            let mid = 0.5 * (upper + lo);
            let node = (0.6f64).sqrt() * half;
            let e = (self.n() - 1) as i32;
            let g = |s: f64| self.profile.phi_at_s(s).max(0.0).powi(e);
            half * (5.0 * g(mid - node) + 8.0 * g(mid) + 5.0 * g(mid + node)) / 9.0
        };
        let full = partial(faces[j + 1]);
        let frac = if full > 0.0 { (partial(r) / full).clamp(0.0, 1.0) } else { 0.0 };
        Ok(self.cumulative[j] + frac * self.weights[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn s3() -> SpectralManifold {
        SpectralManifold::build_sphere(3, 1.0, 512, 64).unwrap()
    }

    #[test]
    fn sphere_volume_and_spectrum() {
        let g = s3();
        assert!((g.total_volume() - 2.0 * PI * PI).abs() < 1e-4);
        let (vals, vecs) = g.eigenpairs().unwrap();
        assert!(vals[0].abs() < 1e-9);
        let c = vecs[0][0];
        assert!(vecs[0].iter().all(|v| (v - c).abs() < 1e-8));
        assert!((vals[1] - 3.0).abs() < 1e-3);
        assert!((vals[2] - 8.0).abs() < 1e-3);
    }

    #[test]
    fn eigenfunctions_are_weighted_orthonormal() {
        let g = s3();
        for (i, j) in [(0, 0), (1, 1), (1, 2), (3, 7), (10, 10)] {
            let a = g.eigenfunction(i).unwrap();
            let b = g.eigenfunction(j).unwrap();
            let ip = g.inner(&a, &b).unwrap();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((ip - expect).abs() < 1e-10, "<{i},{j}> = {ip}");
        }
    }

    #[test]
    fn norms_and_energy() {
        let g = s3();
        let one = g.constant(1.0);
        assert!((g.lp_norm(&one, 2.0).unwrap() - (2.0 * PI * PI).sqrt()).abs() < 1e-4);
        assert_eq!(g.lp_norm(&g.constant(0.0), 3.0).unwrap(), 0.0);
        assert!(g.lp_norm(&one, 0.5).is_err());
        assert!(g.dirichlet_energy(&g.constant(2.5)).unwrap().abs() < 1e-20);
        let (vals, _) = g.eigenpairs().unwrap();
        let p2 = g.eigenfunction(1).unwrap();
        let p3 = g.eigenfunction(2).unwrap();
        assert!((g.lp_norm(&p2, 2.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((g.dirichlet_energy(&p2).unwrap() - vals[1]).abs() < 1e-6);
        let sum = p2.add(&p3).unwrap();
        assert!((g.dirichlet_energy(&sum).unwrap() - vals[1] - vals[2]).abs() < 1e-6);
    }

    #[test]
    fn ball_volumes() {
        let g = s3();
        assert!((g.ball_volume(PI / 2.0).unwrap() - PI * PI).abs() < 1e-4);
        assert!((g.ball_volume(PI).unwrap() - 2.0 * PI * PI).abs() < 1e-4);
        let mut last = 0.0;
        for k in 1..200 {
            let r = PI * k as f64 / 200.0;
            let v = g.ball_volume(r).unwrap();
            let exact = 2.0 * PI * (r - 0.5 * (2.0 * r).sin());
            assert!((v - exact).abs() < 1e-4, "r = {r}: {v} vs {exact}");
            assert!(v > last);
            last = v;
        }
        assert!(g.ball_volume(0.0).is_err());
        assert!(g.ball_volume(4.0).is_err());
    }

    #[test]
    fn lambda0_of_spheres() {
        assert!((s3().lambda0() - 1.5).abs() < 1e-6);
        let g2 = SpectralManifold::build_sphere(3, 2.0, 512, 8).unwrap();
        assert!((g2.lambda0() - 0.375).abs() < 1e-6);
        let flat = g2.with_curvature(g2.constant(0.0)).unwrap();
        assert!(flat.lambda0().abs() < 1e-9);
    }

    #[test]
    fn scaling_divides_eigenvalues() {
        let g = SpectralManifold::build_warped(WarpedProfile::dumbbell(3, 0.3, 128).unwrap(), 8).unwrap();
        let c = 1.7;
        let gc = g.scaled(c).unwrap();
        let (a, _) = g.eigenpairs().unwrap();
        let (b, _) = gc.eigenpairs().unwrap();
        for i in 1..8 {
            assert!((b[i] * c * c - a[i]).abs() < 1e-9 * a[i]);
        }
    }

    #[test]
    fn laplacian_is_self_adjoint() {
        let g = SpectralManifold::build_warped(WarpedProfile::dumbbell(4, 0.4, 200).unwrap(), 4).unwrap();
        let u = g.field_fn(|s| (3.0 * s).cos() + s * s).unwrap();
        let v = g.field_fn(|s| (s - 1.0).exp()).unwrap();
        let a = g.inner(&g.laplacian(&u).unwrap(), &v).unwrap();
        let b = g.inner(&u, &g.laplacian(&v).unwrap()).unwrap();
        let scale = g.lp_norm(&u, 2.0).unwrap() * g.lp_norm(&v, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-10 * scale);
        let e = -g.inner(&g.laplacian(&u).unwrap(), &u).unwrap();
        assert!((e - g.dirichlet_energy(&u).unwrap()).abs() < 1e-9 * e.abs());
    }

    #[test]
    fn second_order_convergence() {
        let exact = [3.0, 8.0, 15.0, 24.0, 35.0];
        let err = |m: usize| -> Vec<f64> {
            let g = SpectralManifold::build_sphere(3, 1.0, m, 8).unwrap();
            let (v, _) = g.eigenpairs().unwrap();
            (0..5).map(|i| (v[i + 1] - exact[i]).abs()).collect()
        };
        let e1 = err(64);
        let e2 = err(128);
        for i in 0..5 {
            assert!(e1[i] / e2[i] > 3.5, "mode {i}: {} -> {}", e1[i], e2[i]);
        }
    }
}
