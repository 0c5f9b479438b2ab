use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of a zonal function at the cell centres of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "field value at cell {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(m: usize, c: f64) -> Self {
        Self { values: vec![c; m] }
    }

    pub fn from_fn(m: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..m).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn axpy(&self, c: f64, other: &ScalarField) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        })
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        let scale = self.sup_abs().max(1e-300);
        self.max() - self.min() <= tol * scale
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::GridMismatch { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan() {
        assert!(ScalarField::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn arithmetic_checks_lengths() {
        let a = ScalarField::constant(3, 1.0);
        let b = ScalarField::constant(4, 1.0);
        assert!(matches!(a.add(&b), Err(Error::GridMismatch { expected: 3, got: 4 })));
        let c = a.axpy(2.0, &a).unwrap();
        assert_eq!(c.values(), &[3.0, 3.0, 3.0]);
        assert!(c.is_constant(1e-15));
    }
}
