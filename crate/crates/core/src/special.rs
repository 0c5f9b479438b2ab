//! Closed-form constants used across the crate.

use std::f64::consts::PI;

/// Γ(k/2) for a positive integer k, by the half-integer recursion.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "gamma_half needs k >= 1");
    let (mut value, mut x) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while x + 0.5 < target {
        value *= x;
        x += 1.0;
    }
    value
}

/// Area of the unit sphere S^{d} ⊂ R^{d+1}, i.e. 2π^{(d+1)/2} / Γ((d+1)/2).
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf((d + 1) as f64 / 2.0) / gamma_half(d + 1)
}

/// Γ(1/2) = √π.
pub fn gamma_one_half() -> f64 {
    PI.sqrt()
}

/// `x ln x²`-style entropy density `v ln v` with the convention 0 ln 0 = 0.
pub(crate) fn xlogx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_matches_known_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half(4) - 1.0).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(8) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }
}
