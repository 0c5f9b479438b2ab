use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one numerical inequality check.
///
/// `slack = rhs − lhs`; the check passes when `slack ≥ −tol`. Checks whose
/// hypotheses fail numerically keep `hypothesis_ok = false` and never count as
/// failures. Informational checks carry `params["asserted"] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    #[serde(with = "float_repr")]
    pub lhs: f64,
    #[serde(with = "float_repr")]
    pub rhs: f64,
    #[serde(with = "float_repr")]
    pub slack: f64,
    pub pass: bool,
    pub hypothesis_ok: bool,
    pub witness: String,
    #[serde(with = "float_map")]
    pub params: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64, witness: impl Into<String>) -> Self {
        let slack = rhs - lhs;
        let mut params = BTreeMap::new();
        params.insert("tol".to_string(), tol);
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -tol,
            hypothesis_ok: true,
            witness: witness.into(),
            params,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_hypothesis(mut self, ok: bool) -> Self {
        self.hypothesis_ok = ok;
        self
    }

    /// Marks the report as recorded but not asserted.
    pub fn informational(self) -> Self {
        self.with_param("asserted", 0.0)
    }

    /// Replaces the tolerance and recomputes `pass`.
    pub fn set_tol(&mut self, tol: f64) {
        self.params.insert("tol".to_string(), tol);
        self.pass = self.slack >= -tol;
    }

    pub fn tol(&self) -> f64 {
        self.params.get("tol").copied().unwrap_or(0.0)
    }

    pub fn is_asserted(&self) -> bool {
        self.params.get("asserted").is_none_or(|v| *v != 0.0)
    }

    /// True for an asserted check whose hypotheses hold and which failed.
    pub fn is_failure(&self) -> bool {
        self.is_asserted() && self.hypothesis_ok && !self.pass
    }
}

/// Smallest slack among asserted, hypothesis-satisfying reports.
pub fn min_slack(reports: &[InequalityReport]) -> f64 {
    reports
        .iter()
        .filter(|r| r.is_asserted() && r.hypothesis_ok)
        .map(|r| r.slack)
        .fold(f64::INFINITY, f64::min)
}

// serde_json writes non-finite floats as null; keep them readable instead.
mod float_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(super) enum Repr {
        Num(f64),
        Text(String),
    }

    pub(super) fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("expected a number, got {other:?}"))),
            },
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

mod float_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    struct F(f64);

    impl Serialize for F {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::float_repr::serialize(&self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &F(*v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw = BTreeMap::<String, super::float_repr::Repr>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| super::float_repr::from_repr(v).map(|f| (k, f)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_tolerance() {
        assert!(InequalityReport::new("a", 1.0, 1.0 - 1e-9, 1e-8, "w").pass);
        assert!(!InequalityReport::new("a", 1.0, 1.0 - 1e-7, 1e-8, "w").pass);
    }

    #[test]
    fn informational_and_hypothesis_never_fail() {
        let r = InequalityReport::new("a", 2.0, 1.0, 0.0, "w");
        assert!(r.is_failure());
        assert!(!r.clone().informational().is_failure());
        assert!(!r.with_hypothesis(false).is_failure());
    }

    #[test]
    fn json_round_trip_with_infinities() {
        let r = InequalityReport::new("x", f64::NEG_INFINITY, 0.5, 1e-8, "w").with_param("p", f64::INFINITY);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"-inf\""));
        let back: InequalityReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.lhs, f64::NEG_INFINITY);
        assert_eq!(back.params["p"], f64::INFINITY);
        assert_eq!(back.rhs, 0.5);
    }
}
