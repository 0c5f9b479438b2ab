use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SpectralManifold, WarpedProfile};

pub const SUITES: [&str; 5] = ["lsi", "semigroup", "noncollapse", "euclidean", "flow"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ManifoldSpec {
    Sphere {
        n: usize,
        #[serde(default = "one", alias = "r")]
        radius: f64,
        m: usize,
        #[serde(default = "default_k")]
        k: usize,
    },
    Dumbbell {
        n: usize,
        neck: f64,
        m: usize,
        #[serde(default = "default_k")]
        k: usize,
    },
    /// A profile given by samples `(s, phi)`, inline or from a CSV file.
    Warped {
        n: usize,
        m: usize,
        #[serde(default = "default_k")]
        k: usize,
        #[serde(default)]
        path: Option<PathBuf>,
        #[serde(default)]
        s: Vec<f64>,
        #[serde(default)]
        phi: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

fn default_k() -> usize {
    8
}

impl ManifoldSpec {
    pub fn n(&self) -> usize {
        match self {
            Self::Sphere { n, .. } | Self::Dumbbell { n, .. } | Self::Warped { n, .. } => *n,
        }
    }

    pub fn build(&self, base: &Path) -> Result<SpectralManifold> {
        let profile = match self {
            Self::Sphere { n, radius, m, .. } => WarpedProfile::sphere(*n, *radius, *m)?,
            Self::Dumbbell { n, neck, m, .. } => WarpedProfile::dumbbell(*n, *neck, *m)?,
            Self::Warped { n, m, path: Some(path), .. } => WarpedProfile::read_csv(base.join(path), *n, *m)?,
            Self::Warped { n, m, path: None, s, phi, .. } => WarpedProfile::from_samples(*n, s, phi, *m)?,
        };
        let k = match self {
            Self::Sphere { k, .. } | Self::Dumbbell { k, .. } | Self::Warped { k, .. } => *k,
        };
        SpectralManifold::build_warped(profile, k)
    }

    /// Initial radius when the manifold is a round sphere.
    pub fn sphere_radius(&self) -> Option<f64> {
        match self {
            Self::Sphere { radius, .. } => Some(*radius),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub dt: f64,
    pub steps: usize,
    /// Terminal time of the conjugate heat flow; defaults to the last snapshot.
    #[serde(default)]
    pub t_star: Option<f64>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_substeps")]
    pub max_substeps: usize,
}

fn default_sigma() -> f64 {
    0.05
}

fn default_cfl() -> f64 {
    0.2
}

fn default_substeps() -> usize {
    64
}

impl Default for FlowSpec {
    fn default() -> Self {
        Self { dt: 1e-3, steps: 50, t_star: None, sigma: default_sigma(), cfl: default_cfl(), max_substeps: 64 }
    }
}

impl FlowSpec {
    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: ManifoldSpec,
    #[serde(default)]
    pub flow: FlowSpec,
    #[serde(default = "all_suites")]
    pub suites: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_family")]
    pub family_size: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Tolerance overrides keyed by report-name prefix.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn all_suites() -> Vec<String> {
    vec!["all".into()]
}

fn default_seed() -> u64 {
    7
}

fn default_family() -> usize {
    50
}

fn default_out() -> PathBuf {
    PathBuf::from("rilab-out")
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.suites {
            if s != "all" && !SUITES.contains(&s.as_str()) {
                return Err(Error::Config(format!("unknown suite '{s}' (expected one of {SUITES:?} or all)")));
            }
        }
        if let ManifoldSpec::Warped { path, s, phi, .. } = &self.manifold {
            if path.is_some() == (!s.is_empty() || !phi.is_empty()) {
                return Err(Error::Config("warped manifold needs exactly one of `path` or inline `s`/`phi`".into()));
            }
        }
        if self.manifold.n() < 3 {
            return Err(Error::Config(format!("dimension n = {} must be at least 3", self.manifold.n())));
        }
        if !(self.flow.dt > 0.0) || self.flow.steps == 0 {
            return Err(Error::Config("flow needs dt > 0 and steps >= 1".into()));
        }
        if let Some(ts) = self.flow.t_star {
            if !(ts > 0.0 && ts <= self.flow.horizon() * (1.0 + 1e-12)) {
                return Err(Error::Config(format!("t_star = {ts} must lie in (0, dt * steps]")));
            }
        }
        if !(self.flow.sigma > 0.0) {
            return Err(Error::Config("flow.sigma must be positive".into()));
        }
        if self.family_size < 10 {
            return Err(Error::Config("family_size must be at least 10".into()));
        }
        for (k, v) in &self.tolerances {
            if !(*v >= 0.0) {
                return Err(Error::Config(format!("tolerance for '{k}' must be nonnegative")));
            }
        }
        Ok(())
    }

    /// Suites in canonical order, with `all` expanded.
    pub fn resolved_suites(&self) -> Vec<&'static str> {
        let all = self.suites.iter().any(|s| s == "all");
        SUITES.iter().copied().filter(|s| all || self.suites.iter().any(|x| x == s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = r#"
seed = 3
suites = ["lsi", "flow"]

[manifold]
kind = "sphere"
n = 3
m = 64

[flow]
dt = 0.001
steps = 10
"#;

    #[test]
    fn parses_and_resolves() {
        let c = RunConfig::from_toml(SPHERE).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.resolved_suites(), vec!["lsi", "flow"]);
        assert_eq!(c.manifold.sphere_radius(), Some(1.0));
        let g = c.manifold.build(Path::new(".")).unwrap();
        assert_eq!(g.m(), 64);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::from_toml("nonsense = ["), Err(Error::Config(_))));
        let bad = SPHERE.replace("\"flow\"]", "\"heat\"]");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
        let extra = format!("{SPHERE}\nbogus = 1\n");
        assert!(RunConfig::from_toml(&extra).is_err());
        let empty = SPHERE.replace("suites = [\"lsi\", \"flow\"]", "suites = []");
        assert!(RunConfig::from_toml(&empty).unwrap().resolved_suites().is_empty());
        let both = SPHERE.replace("kind = \"sphere\"", "kind = \"warped\"\npath = \"p.csv\"\ns = [0.0, 1.0]");
        assert!(matches!(RunConfig::from_toml(&both), Err(Error::Config(_))));
    }

    #[test]
    fn inline_warped_profile() {
        let s: Vec<String> = (0..=40).map(|i| format!("{}", std::f64::consts::PI * i as f64 / 40.0)).collect();
        let phi: Vec<String> = (0..=40).map(|i| format!("{}", (std::f64::consts::PI * i as f64 / 40.0).sin())).collect();
        let text = format!(
            "[manifold]\nkind = \"warped\"\nn = 3\nm = 48\ns = [{}]\nphi = [{}]\n",
            s.join(", "),
            phi.join(", ")
        );
        let c = RunConfig::from_toml(&text).unwrap();
        let g = c.manifold.build(Path::new(".")).unwrap();
        assert!((g.total_volume() - 2.0 * std::f64::consts::PI.powi(2)).abs() < 2e-2);
    }
}
