//! Logarithmic Sobolev budgets `σ ↦ k σ Q(u) − (μ/2) ln σ + c(σ)`.
//!
//! `Q(u)` is `∫|∇u|²` or `∫(|∇u|² + R u²/4)` depending on the variant. The
//! fixed-metric variants are parametrised by `α` (RLS2, RLS3) or `A` (RLS4)
//! with `k = n C_S²/2`; the flow variants use `k = 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lemmas::strong_alpha;
use super::report::InequalityReport;
use super::sobolev::SobolevConstants;
use crate::error::{Error, Result};
use crate::geometry::{ScalarField, SpectralManifold};
use crate::special::xlogx;

/// Tolerance of every budget check.
pub const LSI_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LsiVariant {
    Rls2,
    Rls3,
    Rls4,
    ThmA,
    ThmB,
    ThmC,
}

impl LsiVariant {
    pub const ALL: [LsiVariant; 6] = [Self::Rls2, Self::Rls3, Self::Rls4, Self::ThmA, Self::ThmB, Self::ThmC];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Rls2 => "RLS2",
            Self::Rls3 => "RLS3",
            Self::Rls4 => "RLS4",
            Self::ThmA => "THM_A",
            Self::ThmB => "THM_B",
            Self::ThmC => "THM_C",
        }
    }

    pub fn is_fixed_metric(self) -> bool {
        matches!(self, Self::Rls2 | Self::Rls3 | Self::Rls4)
    }
}

impl fmt::Display for LsiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Constants of one metric that feed the budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConstants {
    pub n: usize,
    /// Sobolev constant used in the budgets (sampled estimate times safety).
    pub c_s: f64,
    pub vol: f64,
    pub min_r: f64,
    pub lambda0: f64,
}

impl MetricConstants {
    pub fn measure(g: &SpectralManifold, sob: &SobolevConstants, safety: f64) -> Self {
        Self {
            n: g.n(),
            c_s: sob.c_s(safety),
            vol: g.total_volume(),
            min_r: g.min_curvature(),
            lambda0: g.lambda0(),
        }
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `max(C_S, 1)`.
    pub fn c_tilde(&self) -> f64 {
        self.c_s.max(1.0)
    }

    /// `min(min R, 0)`.
    pub fn min_r_minus(&self) -> f64 {
        self.min_r.min(0.0)
    }

    fn vol_term(&self) -> f64 {
        self.vol.powf(-2.0 / self.nf())
    }

    fn require_lambda0(&self) -> Result<()> {
        if self.lambda0 > 0.0 {
            Ok(())
        } else {
            Err(Error::Precondition(format!("lambda0 = {} must be positive", self.lambda0)))
        }
    }

    /// `λ₀C² + vol^{−2/n} − C² min R⁻/4`.
    fn gamma_plus_b(&self) -> f64 {
        let c2 = self.c_s * self.c_s;
        self.lambda0 * c2 + self.vol_term() - c2 * self.min_r_minus() / 4.0
    }

    pub fn delta0(&self) -> Result<f64> {
        self.require_lambda0()?;
        Ok(1.0 / self.gamma_plus_b())
    }

    pub fn sigma0(&self) -> Result<f64> {
        self.require_lambda0()?;
        let gamma = self.lambda0 * self.c_s * self.c_s;
        Ok(0.5 * self.nf() * (self.gamma_plus_b().ln() - gamma.ln() - 1.0))
    }

    /// `(n/8) C² δ₀`, the time-plus-scale threshold of the large-scale budget.
    pub fn threshold(&self) -> Result<f64> {
        Ok(self.nf() / 8.0 * self.c_s * self.c_s * self.delta0()?)
    }

    pub fn a1(&self) -> f64 {
        let ct = self.c_tilde();
        4.0 / (ct * ct * self.vol.powf(2.0 / self.nf())) - self.min_r
    }

    pub fn a2(&self) -> f64 {
        let n = self.nf();
        n * self.c_tilde().ln() + 0.5 * n * (n.ln() - 1.0)
    }

    /// Constant of the large-scale budget: `(n/2) ln n + n ln C_S + σ₀`.
    pub fn c_b(&self) -> Result<f64> {
        let n = self.nf();
        Ok(0.5 * n * n.ln() + n * self.c_s.ln() + self.sigma0()?)
    }

    /// Time-uniform constant: `max(C_B, A₂ + max(A₁, 0)·threshold)`.
    pub fn uniform_c(&self) -> Result<f64> {
        Ok(self.c_b()?.max(self.a2() + self.a1().max(0.0) * self.threshold()?))
    }

    pub fn alpha_i(&self, t: f64) -> f64 {
        strong_alpha(self.nf(), self.a1() * t + self.a2())
    }

    pub fn alpha_ii(&self) -> Result<f64> {
        Ok(2.0 * std::f64::consts::E * self.c_s * self.c_s * (2.0 * self.sigma0()? / self.nf()).exp())
    }

    pub fn alpha_iii(&self) -> Result<f64> {
        Ok(strong_alpha(self.nf(), self.uniform_c()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Budget {
    /// `c0 + c1 σ`.
    Linear { c0: f64, c1: f64 },
    /// Small-scale budget below `t + σ = threshold`, the smaller of both above.
    Split { t: f64, a1: f64, a2: f64, c_b: f64, threshold: f64 },
}

impl Budget {
    fn at(&self, sigma: f64) -> f64 {
        match *self {
            Budget::Linear { c0, c1 } => c0 + c1 * sigma,
            Budget::Split { t, a1, a2, c_b, threshold } => {
                let small = a1 * (t + sigma / 4.0) + a2;
                if t + sigma >= threshold {
                    small.min(c_b)
                } else {
                    small
                }
            }
        }
    }
}

/// Right-hand side `k σ Q(u) − (μ/2) ln σ + c(σ)` of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsiProfile {
    pub variant: LsiVariant,
    pub n: usize,
    pub mu: f64,
    /// Whether `Q` includes `R u²/4`.
    pub curvature: bool,
    grad_scale: f64,
    budget: Budget,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Flow time the budget applies at (0 for fixed-metric variants).
    pub t: f64,
    pub params: BTreeMap<String, f64>,
}

impl LsiProfile {
    pub fn grad_coeff(&self, sigma: f64) -> f64 {
        self.grad_scale * sigma
    }

    pub fn constant(&self, sigma: f64) -> f64 {
        self.budget.at(sigma)
    }

    pub fn contains(&self, sigma: f64) -> bool {
        sigma > 0.0 && sigma >= self.sigma_min && sigma <= self.sigma_max
    }

    pub fn rhs(&self, sigma: f64, energy: f64) -> Result<f64> {
        if !self.contains(sigma) {
            return Err(Error::OutOfRange { what: "sigma", value: sigma, lo: self.sigma_min, hi: self.sigma_max });
        }
        Ok(self.grad_coeff(sigma) * energy - 0.5 * self.mu * sigma.ln() + self.constant(sigma))
    }

    /// The budget rewritten with unit gradient coefficient: `∫u² ln u² ≤ σQ + h(σ)`.
    pub fn h(&self, sigma: f64) -> Result<f64> {
        let p = sigma / self.grad_scale;
        self.rhs(p, 0.0)
    }

    /// `(c0, c1)` of a linear budget `c0 + c1 σ`.
    fn strong_parts(&self) -> Option<(f64, f64)> {
        match self.budget {
            Budget::Linear { c0, c1 } => Some((c0, c1)),
            Budget::Split { .. } => None,
        }
    }

    /// `(a, b)` with `h(σ) = aσ − (μ/2) ln σ + b`. Split budgets use the
    /// uniform constant `C`, which dominates them for every `σ`.
    pub fn log_budget(&self) -> Option<(f64, f64)> {
        match self.budget {
            Budget::Linear { c0, c1 } => {
                let k = self.grad_scale;
                Some((c1 / k, c0 + 0.5 * self.mu * k.ln()))
            }
            Budget::Split { .. } => self.param("C").map(|c| (0.0, c)),
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }
}

fn params(k: &MetricConstants) -> BTreeMap<String, f64> {
    let mut p = BTreeMap::new();
    p.insert("c_s".into(), k.c_s);
    p.insert("vol".into(), k.vol);
    p.insert("min_r".into(), k.min_r);
    p.insert("lambda0".into(), k.lambda0);
    p
}

/// Budget of a fixed metric from its own constants.
pub fn lsi_fixed_metric(k: &MetricConstants, variant: LsiVariant) -> Result<LsiProfile> {
    let n = k.nf();
    let grad_scale = 0.5 * n * k.c_s * k.c_s;
    let mut p = params(k);
    let (budget, curvature, sigma_min) = match variant {
        LsiVariant::Rls2 => {
            (Budget::Linear { c0: 0.5 * n * (2f64.ln() - 1.0), c1: 0.5 * n * k.vol_term() }, false, 0.0)
        }
        LsiVariant::Rls3 => {
            let c1 = 0.5 * n * (k.vol_term() - k.min_r_minus() * k.c_s * k.c_s / 4.0);
            (Budget::Linear { c0: 0.5 * n * (2f64.ln() - 1.0), c1 }, true, 0.0)
        }
        LsiVariant::Rls4 => {
            let delta0 = k.delta0()?;
            let sigma0 = k.sigma0()?;
            p.insert("delta0".into(), delta0);
            p.insert("sigma0".into(), sigma0);
            (Budget::Linear { c0: 0.5 * n * 2f64.ln() + sigma0, c1: 0.0 }, true, delta0)
        }
        other => return Err(Error::InvalidParameter(format!("{other} is not a fixed-metric variant"))),
    };
    Ok(LsiProfile {
        variant,
        n: k.n,
        mu: n,
        curvature,
        grad_scale,
        budget,
        sigma_min,
        sigma_max: f64::INFINITY,
        t: 0.0,
        params: p,
    })
}

/// Budget at flow time `t` from the constants of the initial metric.
pub fn theorem_abc_profile(k0: &MetricConstants, variant: LsiVariant, t: f64) -> Result<LsiProfile> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("flow time must be nonnegative, got {t}")));
    }
    let n = k0.nf();
    let a1 = k0.a1();
    let a2 = k0.a2();
    let mut p = params(k0);
    p.insert("t".into(), t);
    p.insert("A1".into(), a1);
    p.insert("A2".into(), a2);
    p.insert("alpha_I".into(), k0.alpha_i(t));
    let mut sigma_min = 0.0;
    let budget = match variant {
        LsiVariant::ThmA => Budget::Linear { c0: a1 * t + a2, c1: a1 / 4.0 },
        LsiVariant::ThmB | LsiVariant::ThmC => {
            let c_b = k0.c_b()?;
            let threshold = k0.threshold()?;
            p.insert("delta0".into(), k0.delta0()?);
            p.insert("sigma0".into(), k0.sigma0()?);
            p.insert("threshold".into(), threshold);
            p.insert("C_B".into(), c_b);
            p.insert("C".into(), k0.uniform_c()?);
            p.insert("alpha_II".into(), k0.alpha_ii()?);
            p.insert("alpha_III".into(), k0.alpha_iii()?);
            if variant == LsiVariant::ThmB {
                sigma_min = (threshold - t).max(0.0);
                Budget::Linear { c0: c_b, c1: 0.0 }
            } else {
                Budget::Split { t, a1, a2, c_b, threshold }
            }
        }
        other => return Err(Error::InvalidParameter(format!("{other} is not a flow variant"))),
    };
    Ok(LsiProfile {
        variant,
        n: k0.n,
        mu: n,
        curvature: true,
        grad_scale: 1.0,
        budget,
        sigma_min,
        sigma_max: f64::INFINITY,
        t,
        params: p,
    })
}

/// `∫u² ln u²`, `∫|∇u|²` and `∫R u²` of the normalised `u`.
pub fn lsi_terms(g: &SpectralManifold, u: &ScalarField) -> Result<(f64, f64, f64)> {
    let u = super::family::normalized(g, u)?;
    let ent: f64 = g.weights().iter().zip(u.values()).map(|(w, v)| w * xlogx(v * v)).sum();
    let grad = g.dirichlet_energy(&u)?;
    let pot: f64 = g
        .weights()
        .iter()
        .zip(u.values())
        .zip(g.curvature().values())
        .map(|((w, v), r)| w * r * v * v)
        .sum();
    Ok((ent, grad, pot))
}

/// Checks `∫u² ln u² ≤ rhs(σ)` for `u` renormalised to `‖u‖₂ = 1`.
pub fn lsi_check(
    g: &SpectralManifold,
    profile: &LsiProfile,
    sigma: f64,
    u: &ScalarField,
    witness: &str,
) -> Result<InequalityReport> {
    let (ent, grad, pot) = lsi_terms(g, u)?;
    let energy = if profile.curvature { grad + pot / 4.0 } else { grad };
    let rhs = profile.rhs(sigma, energy)?;
    let mut r = InequalityReport::new(format!("lsi.{}", profile.variant), ent, rhs, LSI_TOL, witness)
        .with_param("sigma", sigma)
        .with_param("t", profile.t);
    if let Some(c) = profile.param("c_s") {
        r = r.with_param("c_s", c);
    }
    Ok(r)
}

/// Strong form `∫u² ln u² ≤ (n/2) ln[α (Q + c1)]`, the minimum over `σ` of a
/// linear budget. For THM_C the uniform constant is used. The hypothesis
/// fails when `Q + c1 ≤ 0`.
pub fn strong_lsi_check(
    g: &SpectralManifold,
    profile: &LsiProfile,
    u: &ScalarField,
    witness: &str,
) -> Result<InequalityReport> {
    let (c0, c1) = match profile.variant {
        LsiVariant::ThmC => (profile.param("C").unwrap_or(f64::NAN), 0.0),
        _ => profile
            .strong_parts()
            .ok_or_else(|| Error::InvalidParameter(format!("{} has no strong form", profile.variant)))?,
    };
    let (ent, grad, pot) = lsi_terms(g, u)?;
    let energy = if profile.curvature { grad + pot / 4.0 } else { grad };
    let a = profile.grad_scale * energy + c1;
    let n = profile.mu;
    let (rhs, ok) = if a > 0.0 { (0.5 * n * (strong_alpha(n, c0) * a).ln(), true) } else { (f64::INFINITY, false) };
    Ok(InequalityReport::new(format!("lsi_strong.{}", profile.variant), ent, rhs, LSI_TOL, witness)
        .with_param("t", profile.t)
        .with_hypothesis(ok))
}

/// `∫u² ln u² ≤ n ln(C ‖∇u‖₂ + vol^{−1/n})` for normalised `u`.
pub fn rls1_check(g: &SpectralManifold, c_s: f64, u: &ScalarField, witness: &str) -> Result<InequalityReport> {
    let (ent, grad, _) = lsi_terms(g, u)?;
    let n = g.n() as f64;
    let rhs = n * (c_s * grad.sqrt() + g.total_volume().powf(-1.0 / n)).ln();
    Ok(InequalityReport::new("lsi.RLS1", ent, rhs, LSI_TOL, witness).with_param("c_s", c_s))
}

/// `σ ↦ h(4(t + σ))`.
pub fn transport_profile<F: Fn(f64) -> f64>(h: F, t: f64) -> Result<impl Fn(f64) -> f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("transport time must be finite and nonnegative, got {t}")));
    }
    Ok(move |sigma: f64| h(4.0 * (t + sigma)))
}

/// `e^{−1/4−C}`, times `R̂^{−n/2}` when `R̂ > 0`.
pub fn volume_corollary_bound(g: &SpectralManifold, c: f64) -> f64 {
    let base = (-0.25 - c).exp();
    let rhat = g.mean_curvature();
    if rhat > 0.0 {
        base * rhat.powf(-0.5 * g.n() as f64)
    } else {
        base
    }
}

pub fn volume_corollary_audit(g: &SpectralManifold, c: f64, witness: &str) -> InequalityReport {
    InequalityReport::new("lsi.volume_corollary", volume_corollary_bound(g, c), g.total_volume(), 1e-12, witness)
        .with_param("C", c)
        .with_param("rhat", g.mean_curvature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{sobolev_constants, FunctionFamily, SAFETY_FACTOR};

    fn s3(m: usize) -> SpectralManifold {
        SpectralManifold::build_sphere(3, 1.0, m, 8).unwrap()
    }

    fn constants(g: &SpectralManifold) -> (MetricConstants, FunctionFamily) {
        let fam = FunctionFamily::sample(g, 50, 11).unwrap();
        let sob = sobolev_constants(g, &fam.fields(), &fam.id).unwrap();
        (MetricConstants::measure(g, &sob, SAFETY_FACTOR), fam)
    }

    #[test]
    fn theorem_a_example_constants() {
        let k = MetricConstants { n: 3, c_s: 1.0, vol: 1.0, min_r: 6.0, lambda0: 1.5 };
        assert!((k.a1() + 2.0).abs() < 1e-15);
        assert!((k.a2() - 1.5 * (3f64.ln() - 1.0)).abs() < 1e-15);
        let p = theorem_abc_profile(&k, LsiVariant::ThmA, 0.0).unwrap();
        assert!((p.constant(2.0) - (-0.5 + k.a2() - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn theorem_a_constant_grows_with_t_when_a1_positive() {
        let k = MetricConstants { n: 3, c_s: 0.5, vol: 1.0, min_r: 0.0, lambda0: 0.1 };
        assert!(k.a1() > 0.0);
        let c = |t| theorem_abc_profile(&k, LsiVariant::ThmA, t).unwrap().constant(1.0);
        assert!(c(0.0) < c(0.5) && c(0.5) < c(1.0));
    }

    #[test]
    fn fixed_metric_constants_on_s3() {
        let g = s3(128);
        let (k, _) = constants(&g);
        let delta0 = k.delta0().unwrap();
        let sigma0 = k.sigma0().unwrap();
        assert!(delta0.is_finite() && delta0 > 0.0);
        assert!(sigma0 >= -1.5 - 1e-12);
        let bad = MetricConstants { lambda0: 0.0, ..k.clone() };
        assert!(lsi_fixed_metric(&bad, LsiVariant::Rls4).is_err());
        assert!(theorem_abc_profile(&bad, LsiVariant::ThmB, 0.0).is_err());
        let rls4 = lsi_fixed_metric(&k, LsiVariant::Rls4).unwrap();
        assert!(rls4.rhs(0.5 * delta0, 1.0).is_err());
        assert!(rls4.rhs(delta0, 1.0).is_ok());
    }

    #[test]
    fn rls3_reduces_to_rls2_without_negative_curvature() {
        let k = MetricConstants { n: 4, c_s: 0.7, vol: 3.0, min_r: 2.0, lambda0: 0.5 };
        let a = lsi_fixed_metric(&k, LsiVariant::Rls2).unwrap();
        let b = lsi_fixed_metric(&k, LsiVariant::Rls3).unwrap();
        for s in [0.1, 1.0, 10.0] {
            assert_eq!(a.rhs(s, 2.0).unwrap(), b.rhs(s, 2.0).unwrap());
        }
    }

    #[test]
    fn self_derived_budgets_pass_on_the_family() {
        let g = s3(128);
        let (k, fam) = constants(&g);
        let mut reports = Vec::new();
        for v in LsiVariant::ALL {
            let p = if v.is_fixed_metric() {
                lsi_fixed_metric(&k, v).unwrap()
            } else {
                theorem_abc_profile(&k, v, 0.0).unwrap()
            };
            for s in [0.01f64, 0.1, 1.0, 10.0, 100.0] {
                let s = s.max(p.sigma_min);
                for m in &fam.members {
                    reports.push(lsi_check(&g, &p, s, &m.u, &m.id).unwrap());
                }
            }
        }
        for m in &fam.members {
            reports.push(rls1_check(&g, k.c_s, &m.u, &m.id).unwrap());
        }
        let bad: Vec<_> = reports.iter().filter(|r| r.is_failure()).collect();
        assert!(bad.is_empty(), "{:?}", bad.first());
    }

    #[test]
    fn constant_function_closed_form() {
        let g = s3(128);
        let (k, _) = constants(&g);
        let p = theorem_abc_profile(&k, LsiVariant::ThmA, 0.0).unwrap();
        let r = lsi_check(&g, &p, 1.0, &g.constant(1.0), "const").unwrap();
        let vol = g.total_volume();
        assert!((r.lhs + vol.ln()).abs() < 1e-12);
        let expected = g.mean_curvature() / 4.0 + k.a1() / 4.0 + k.a2();
        assert!((r.rhs - expected).abs() < 1e-10);
    }

    #[test]
    fn spike_slack_shrinks_as_bump_narrows() {
        let g = SpectralManifold::build_sphere(3, 1.0, 512, 4).unwrap();
        let (k, _) = constants(&g);
        let p = theorem_abc_profile(&k, LsiVariant::ThmC, 0.0).unwrap();
        let mut last = f64::INFINITY;
        for kappa in [10.0, 100.0, 1000.0] {
            let u = g.field_fn(|s| (-kappa * s * s).exp()).unwrap();
            let r = lsi_check(&g, &p, 1e-3, &u, "spike").unwrap();
            assert!(r.pass);
            assert!(r.slack < last);
            last = r.slack;
        }
    }

    #[test]
    fn theorem_c_is_below_both_pieces() {
        let g = s3(96);
        let (k, _) = constants(&g);
        for t in [0.0, 0.05, 0.2] {
            let a = theorem_abc_profile(&k, LsiVariant::ThmA, t).unwrap();
            let b = theorem_abc_profile(&k, LsiVariant::ThmB, t).unwrap();
            let c = theorem_abc_profile(&k, LsiVariant::ThmC, t).unwrap();
            let th = c.param("threshold").unwrap();
            for i in 0..200 {
                let s = 1e-4 * 1.08f64.powi(i);
                let ra = a.constant(s);
                let rb = if b.contains(s) { b.constant(s) } else { f64::INFINITY };
                assert!(ra.min(rb) >= c.constant(s) - 1e-10);
                if t + s < th {
                    assert!((c.constant(s) - ra).abs() < 1e-12 * (1.0 + ra.abs()));
                }
                assert!(c.constant(s) <= c.param("C").unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn strong_forms_hold() {
        let g = s3(128);
        let (k, fam) = constants(&g);
        for v in [LsiVariant::ThmA, LsiVariant::ThmB, LsiVariant::ThmC] {
            let p = theorem_abc_profile(&k, v, 0.0).unwrap();
            for m in &fam.members {
                let r = strong_lsi_check(&g, &p, &m.u, &m.id).unwrap();
                assert!(!r.is_failure(), "{v} {}", m.id);
            }
        }
    }

    #[test]
    fn transport_algebra() {
        let n = 3.0;
        let h = |s: f64| -0.5 * n * s.ln() + 2.0;
        let t0 = transport_profile(h, 0.0).unwrap();
        for s in [0.1, 1.0, 7.0] {
            assert!((t0(s) - (h(s) - 0.5 * n * 4f64.ln())).abs() < 1e-12);
        }
        let c = transport_profile(|_| 5.0, 3.0).unwrap();
        assert_eq!(c(0.3), 5.0);
        let (t1, t2) = (0.2, 0.3);
        let once = transport_profile(h, t1 + t2).unwrap();
        let inner = transport_profile(h, t1).unwrap();
        let twice = transport_profile(inner, t2).unwrap();
        for s in [0.1, 1.0] {
            // the scale factors compound: twice(σ) = h(4(t1 + 4(t2 + σ)))
            assert!((twice(s) - h(4.0 * (t1 + 4.0 * (t2 + s)))).abs() < 1e-12);
            assert!(twice(s) < once(s));
        }
        assert!(transport_profile(h, -1.0).is_err());
    }

    #[test]
    fn volume_corollary() {
        let g = s3(128);
        let (k, _) = constants(&g);
        let c = k.uniform_c().unwrap();
        let r = volume_corollary_audit(&g, c, "s3");
        assert!(r.pass);
        let flat = g.with_curvature(g.constant(0.0)).unwrap();
        assert!((volume_corollary_bound(&flat, c) - (-0.25 - c).exp()).abs() < 1e-15);
        let big = g.with_curvature(g.constant(12.0)).unwrap();
        assert!(volume_corollary_bound(&big, c) < volume_corollary_bound(&g, c));
    }
}
