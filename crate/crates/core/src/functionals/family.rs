use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{ScalarField, SpectralManifold};

/// Bump widths `κ` in `exp(−κ d²)`.
pub const BUMP_KAPPAS: [f64; 3] = [1.0, 10.0, 100.0];

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub id: String,
    pub u: ScalarField,
}

/// A deterministic sample of zonal test functions on one manifold.
///
/// Members are eigenfunctions, eigenfunction mixtures, bumps about the poles
/// and about interior bands, near-constant perturbations and seeded random
/// low-frequency combinations. The same `(size, seed)` on grids of equal size
/// yields the same ids in the same order.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    pub id: String,
    pub members: Vec<FamilyMember>,
}

impl FunctionFamily {
    pub fn sample(g: &SpectralManifold, size: usize, seed: u64) -> Result<Self> {
        let modes = 8.min(g.m() - 1);
        let eig: Vec<ScalarField> = (1..=modes).map(|i| g.eigenfunction(i)).collect::<Result<_>>()?;
        let mut members = Vec::with_capacity(size);
        let mut push = |id: String, u: ScalarField| members.push(FamilyMember { id, u });

        for (i, e) in eig.iter().enumerate() {
            push(format!("eig{}", i + 1), e.clone());
        }
        let s_max = g.s_max();
        for (c, frac) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
            let s0 = frac * s_max;
            for kappa in BUMP_KAPPAS {
                // κ is measured against a unit-length axis
                let k = kappa / (s_max / std::f64::consts::PI).powi(2);
                push(format!("bump{c}_k{kappa}"), g.field_fn(|s| (-k * (s - s0).powi(2)).exp())?);
            }
        }
        for i in 0..modes.saturating_sub(1) {
            let mix = eig[i].add(&eig[i + 1])?;
            push(format!("mix{}_{}", i + 1, i + 2), mix);
        }
        let ones = g.constant(1.0);
        for (i, e) in eig.iter().take(3).enumerate() {
            let scale = 0.1 / e.sup_abs();
            push(format!("flat{}", i + 1), ones.axpy(scale, e)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = 0;
        while members.len() < size {
            let mut u = g.constant(if rng.random_bool(0.5) { rng.random_range(0.0..2.0) } else { 0.0 });
            for e in &eig[..modes.min(5)] {
                let c: f64 = rng.random_range(-1.0..1.0);
                u = u.axpy(c / e.sup_abs(), e)?;
            }
            if !u.is_constant(1e-12) {
                members.push(FamilyMember { id: format!("rand{r}"), u });
            }
            r += 1;
        }
        members.truncate(size.max(1));
        if members.iter().all(|m| m.u.is_constant(1e-14)) {
            return Err(Error::AllConstantFamily);
        }
        Ok(Self { id: format!("zonal-{size}-seed{seed}"), members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fields(&self) -> Vec<ScalarField> {
        self.members.iter().map(|m| m.u.clone()).collect()
    }
}

/// `u / ‖u‖₂`.
pub fn normalized(g: &SpectralManifold, u: &ScalarField) -> Result<ScalarField> {
    let norm = g.lp_norm(u, 2.0)?;
    if !(norm > 0.0) {
        return Err(Error::Normalization("cannot normalize the zero function".into()));
    }
    Ok(u.scale(1.0 / norm))
}
