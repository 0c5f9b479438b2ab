use crate::error::{Error, Result};
use crate::functionals::InequalityReport;
use crate::geometry::{ScalarField, SpectralManifold};
use crate::linalg::EigenPairs;

/// `H = −Δ + Ψ` on a zonal grid with its weighted-orthonormal eigenbasis.
#[derive(Debug, Clone)]
pub struct SchrodingerOperator<'a> {
    g: &'a SpectralManifold,
    psi: ScalarField,
    pairs: EigenPairs,
    inf_psi_minus: f64,
}

impl<'a> SchrodingerOperator<'a> {
    /// Full eigendecomposition (`k = m`).
    pub fn new(g: &'a SpectralManifold, psi: ScalarField) -> Result<Self> {
        let m = g.m();
        Self::with_modes(g, psi, m)
    }

    /// Keeps the lowest `k` modes.
    pub fn with_modes(g: &'a SpectralManifold, psi: ScalarField, k: usize) -> Result<Self> {
        if psi.len() != g.m() {
            return Err(Error::GridMismatch { expected: g.m(), got: psi.len() });
        }
        if k == 0 || k > g.m() {
            return Err(Error::OutOfRange { what: "mode count", value: k as f64, lo: 1.0, hi: g.m() as f64 });
        }
        let mut pairs = g.unsymmetrize(g.schrodinger_matrix(psi.values()).eigen()?);
        pairs.values.truncate(k);
        pairs.vectors.truncate(k);
        let inf_psi_minus = psi.min().min(0.0);
        Ok(Self { g, psi, pairs, inf_psi_minus })
    }

    /// `H = −Δ + R/4`.
    pub fn conformal(g: &'a SpectralManifold) -> Result<Self> {
        Self::new(g, g.curvature().scale(0.25))
    }

    pub fn manifold(&self) -> &SpectralManifold {
        self.g
    }

    pub fn psi(&self) -> &ScalarField {
        &self.psi
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.pairs.values
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.pairs.vectors
    }

    pub fn modes(&self) -> usize {
        self.pairs.values.len()
    }

    /// `min(inf Ψ, 0)`.
    pub fn inf_psi_minus(&self) -> f64 {
        self.inf_psi_minus
    }

    /// `⟨u, φ_i⟩` for the retained modes.
    pub fn coefficients(&self, u: &ScalarField) -> Result<Vec<f64>> {
        if u.len() != self.g.m() {
            return Err(Error::GridMismatch { expected: self.g.m(), got: u.len() });
        }
        let w = self.g.weights();
        Ok(self
            .pairs
            .vectors
            .iter()
            .map(|phi| phi.iter().zip(u.values()).zip(w).map(|((p, v), w)| p * v * w).sum())
            .collect())
    }

    /// `Σ f(λ_i) c_i φ_i`.
    pub fn synthesize(&self, coeffs: &[f64], f: impl Fn(f64) -> f64) -> Result<ScalarField> {
        let mut out = vec![0.0; self.g.m()];
        for ((lambda, phi), c) in self.pairs.values.iter().zip(&self.pairs.vectors).zip(coeffs) {
            let a = f(*lambda) * c;
            if a != 0.0 {
                for (o, p) in out.iter_mut().zip(phi) {
                    *o += a * p;
                }
            }
        }
        ScalarField::new(out)
    }

    /// `e^{−tH}u` by the spectral sum over retained modes.
    pub fn heat_apply(&self, u: &ScalarField, t: f64) -> Result<ScalarField> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("heat time must be nonnegative, got {t}")));
        }
        let c = self.coefficients(u)?;
        self.synthesize(&c, |l| (-l * t).exp())
    }

    /// `H u` from the stencil, independent of the eigenbasis.
    pub fn apply(&self, u: &ScalarField) -> Result<ScalarField> {
        let lap = self.g.laplacian(u)?;
        ScalarField::new(
            lap.values().iter().zip(u.values()).zip(self.psi.values()).map(|((l, v), p)| -l + p * v).collect(),
        )
    }

    /// `Q(u) = ∫|∇u|² + Ψu²`.
    pub fn quadratic_form(&self, u: &ScalarField) -> Result<f64> {
        let pot: f64 = self
            .g
            .weights()
            .iter()
            .zip(u.values())
            .zip(self.psi.values())
            .map(|((w, v), p)| w * p * v * v)
            .sum();
        Ok(self.g.dirichlet_energy(u)? + pot)
    }

    /// `Σ_i e^{−s λ_i} φ_i(x)²` at every node.
    fn diagonal(&self, s: f64) -> Vec<f64> {
        let mut d = vec![0.0; self.g.m()];
        for (lambda, phi) in self.pairs.values.iter().zip(&self.pairs.vectors) {
            let e = (-s * lambda).exp();
            for (o, p) in d.iter_mut().zip(phi) {
                *o += e * p * p;
            }
        }
        d
    }

    /// `‖e^{−tH}‖_{2→∞} = max_x (Σ e^{−2λ_i t} φ_i(x)²)^{1/2}`.
    pub fn norm_2_inf(&self, t: f64) -> f64 {
        self.diagonal(2.0 * t).into_iter().fold(0.0, f64::max).sqrt()
    }

    /// `‖e^{−tH}‖_{1→2}`, the largest `L²` norm of a kernel row `K(·, y, t)`.
    pub fn norm_1_2(&self, t: f64) -> f64 {
        let m = self.g.m();
        (0..m)
            .map(|y| {
                let row: Vec<f64> = (0..m).map(|x| self.kernel(x, y, t)).collect();
                self.g.integral(&row.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `‖e^{−tH}‖_{1→∞} = max_{x,y} |K(x, y, t)|`.
    pub fn norm_1_inf(&self, t: f64) -> f64 {
        let m = self.g.m();
        let mut best = 0.0f64;
        for x in 0..m {
            for y in x..m {
                best = best.max(self.kernel(x, y, t).abs());
            }
        }
        best
    }

    /// Heat kernel `Σ e^{−λ_i t} φ_i(x) φ_i(y)`.
    pub fn kernel(&self, x: usize, y: usize, t: f64) -> f64 {
        self.pairs
            .values
            .iter()
            .zip(&self.pairs.vectors)
            .map(|(l, phi)| (-l * t).exp() * phi[x] * phi[y])
            .sum()
    }

    pub fn require_nonnegative_potential(&self) -> Result<()> {
        if let Some((j, v)) = self.psi.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::Precondition(format!("potential negative at node {j}: psi = {v}")));
        }
        Ok(())
    }
}

/// `L^p` contraction for each `(u, p)` and positivity preservation for
/// nonnegative `u`, at time `t`. Requires `Ψ ≥ 0`.
pub fn contraction_audit(
    h: &SchrodingerOperator<'_>,
    t: f64,
    family: &[(String, ScalarField)],
    p_list: &[f64],
) -> Result<Vec<InequalityReport>> {
    h.require_nonnegative_potential()?;
    let g = h.manifold();
    let mut out = Vec::new();
    for (id, u) in family {
        let v = h.heat_apply(u, t)?;
        for &p in p_list {
            let lhs = g.lp_norm(&v, p)?;
            let rhs = g.lp_norm(u, p)?;
            out.push(
                InequalityReport::new(format!("heat.contraction_p{p}"), lhs, rhs, 1e-8 * (1.0 + rhs), id.clone())
                    .with_param("t", t)
                    .with_param("p", p),
            );
        }
        if u.min() >= 0.0 {
            let floor = -1e-8 * u.sup_abs();
            out.push(
                InequalityReport::new("heat.positivity", floor, v.min(), 0.0, id.clone())
                    .with_param("t", t),
            );
        }
    }
    Ok(out)
}
