//! The centered sawtooth ψ(t) = t - ⌊t⌋ - 1/2, its truncated Fourier
//! approximation with tapered coefficients, and the Fejér-kernel majorant
//! for the truncation error.
//!
//! The taper is Φ(t) = πt(1-|t|)cot(πt) + |t| on (-1, 1), extended by
//! continuity to Φ(0) = 1 and Φ(±1) = 0. Φ is even, so the two-sided
//! complex series collapses to a real sine series
//! ψ_H(x) = -Σ_{h=1}^{H} Φ(h/(H+1)) sin(2πhx)/(πh).

use crate::error::{Error, Result};
use crate::tolerances::VAALER_ROUNDING_SLACK;

/// Sawtooth ψ(t) = t - ⌊t⌋ - 1/2, in [-1/2, 1/2). ψ(integer) = -1/2.
#[inline]
pub fn psi(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// sin(2πr), reduced so that half-integer r gives exactly 0.
///
/// Folds r into [0, 1/4] with exact subtractions before the final sin call;
/// the only rounding left is the 2π multiply.
pub(crate) fn sin_2pi(r: f64) -> f64 {
    let mut r = r - r.round(); // [-1/2, 1/2]
    let mut sign = 1.0;
    if r < 0.0 {
        r = -r;
        sign = -1.0;
    }
    if r > 0.25 {
        r = 0.5 - r;
    }
    sign * (2.0 * std::f64::consts::PI * r).sin()
}

/// cos(2πr) with the same exact folding as [`sin_2pi`].
pub(crate) fn cos_2pi(r: f64) -> f64 {
    let r = (r - r.round()).abs(); // [0, 1/2]
    if r <= 0.25 {
        (2.0 * std::f64::consts::PI * r).cos()
    } else {
        -(2.0 * std::f64::consts::PI * (0.5 - r)).cos()
    }
}

/// Fractional part of h·x without losing the low bits of the product.
#[inline]
fn frac_prod(h: f64, x_frac: f64) -> f64 {
    // Dekker product: p + e == h * x_frac exactly.
    let p = h * x_frac;
    const SPLITTER: f64 = 134217729.0;
    let t = SPLITTER * h;
    let h_hi = t - (t - h);
    let h_lo = h - h_hi;
    let t = SPLITTER * x_frac;
    let x_hi = t - (t - x_frac);
    let x_lo = x_frac - x_hi;
    let e = ((h_hi * x_hi - p) + h_hi * x_lo + h_lo * x_hi) + h_lo * x_lo;
    (p - p.round()) + e
}

/// The tapering function Φ(t) = πt(1-|t|)cot(πt) + |t| for |t| <= 1,
/// with continuity values at t = 0 and |t| = 1.
///
/// Near t = 1 the cotangent is evaluated through sin(π(1-t)) so the
/// 0 · ∞ product stays fully accurate.
pub fn vaaler_phi(t: f64) -> Result<f64> {
    if !(t.abs() <= 1.0) {
        return Err(Error::domain(format!("vaaler_phi requires |t| <= 1, got {t}")));
    }
    let a = t.abs();
    if a == 0.0 {
        return Ok(1.0);
    }
    if a == 1.0 {
        return Ok(0.0);
    }
    let pi = std::f64::consts::PI;
    let value = if a <= 0.5 {
        pi * a * (1.0 - a) * ((pi * a).cos() / (pi * a).sin()) + a
    } else {
        // cot(πa) = -cos(πu)/sin(πu) with u = 1 - a (exact subtraction)
        let u = 1.0 - a;
        -pi * a * u * ((pi * u).cos() / (pi * u).sin()) + a
    };
    Ok(value)
}

/// Precomputed truncation: coefficient c_h = Φ(h/(H+1))/(πh), so that
/// ψ_H(x) = -Σ_h c_h sin(2πhx).
#[derive(Clone, Debug)]
pub struct VaalerSeries {
    h_max: u32,
    coeffs: Vec<f64>,
}

impl VaalerSeries {
    pub fn new(h_max: u32) -> Result<Self> {
        if h_max < 1 {
            return Err(Error::domain("truncation H must be >= 1".to_string()));
        }
        let denom = f64::from(h_max) + 1.0;
        let coeffs = (1..=h_max)
            .map(|h| {
                let phi = vaaler_phi(f64::from(h) / denom).expect("h/(H+1) < 1");
                phi / (std::f64::consts::PI * f64::from(h))
            })
            .collect();
        Ok(Self { h_max, coeffs })
    }

    pub fn h_max(&self) -> u32 {
        self.h_max
    }

    /// ψ_H(x): the truncated series at x.
    pub fn eval(&self, x: f64) -> f64 {
        let x_frac = x - x.floor();
        let mut sum = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let h = (i + 1) as f64;
            sum += c * sin_2pi(frac_prod(h, x_frac));
        }
        -sum
    }

    /// Fejér-kernel majorant of |ψ(x) - ψ_H(x)|:
    /// (2H+2)^{-1} Σ_{|h| <= H} (1 - |h|/(H+1)) e(hx), clamped into its
    /// mathematical range [0, 1/2] to shed float noise at kernel zeros.
    pub fn error_bound(&self, x: f64) -> f64 {
        let x_frac = x - x.floor();
        let denom = f64::from(self.h_max) + 1.0;
        let mut sum = 1.0;
        for h in 1..=self.h_max {
            let weight = 1.0 - f64::from(h) / denom;
            sum += 2.0 * weight * cos_2pi(frac_prod(f64::from(h), x_frac));
        }
        (sum / (2.0 * denom)).clamp(0.0, 0.5)
    }
}

/// One-shot ψ_H(x); callers looping over many x should hold a
/// [`VaalerSeries`] instead.
pub fn psi_truncated(x: f64, h_max: u32) -> Result<f64> {
    Ok(VaalerSeries::new(h_max)?.eval(x))
}

/// One-shot error majorant; see [`VaalerSeries::error_bound`].
pub fn vaaler_error_bound(x: f64, h_max: u32) -> Result<f64> {
    Ok(VaalerSeries::new(h_max)?.error_bound(x))
}

/// Checks |ψ(x) - ψ_H(x)| <= bound(x) + slack at one point.
pub fn truncation_within_bound(series: &VaalerSeries, x: f64) -> bool {
    (psi(x) - series.eval(x)).abs() <= series.error_bound(x) + VAALER_ROUNDING_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_basic_values() {
        assert_eq!(psi(0.25), -0.25);
        assert_eq!(psi(1.0), -0.5);
        assert!((psi(3.7) - 0.2).abs() < 1e-12);
        assert_eq!(psi(-2.0), -0.5);
    }

    #[test]
    fn psi_periodic_on_rational_grid() {
        for num in 0..64 {
            let x = num as f64 / 64.0;
            assert_eq!(psi(x + 1.0), psi(x), "x = {x}");
            assert_eq!(psi(x + 7.0), psi(x), "x = {x}");
        }
    }

    #[test]
    fn phi_midpoint_and_endpoints() {
        // cot(π/2) = 0 kills the first term, leaving |t|.
        assert!((vaaler_phi(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(vaaler_phi(0.0).unwrap(), 1.0);
        assert_eq!(vaaler_phi(1.0).unwrap(), 0.0);
        assert_eq!(vaaler_phi(-1.0).unwrap(), 0.0);
        assert!(vaaler_phi(1.0001).is_err());
    }

    #[test]
    fn phi_is_even_and_tends_to_one_at_zero() {
        for &t in &[0.1, 0.3, 0.45, 0.7, 0.99] {
            let a = vaaler_phi(t).unwrap();
            let b = vaaler_phi(-t).unwrap();
            assert!((a - b).abs() < 1e-15, "t = {t}");
        }
        // Low harmonics should be almost untapered.
        assert!((vaaler_phi(1e-6).unwrap() - 1.0).abs() < 1e-5);
        assert!(vaaler_phi(0.999_999).unwrap() < 1e-4);
    }

    #[test]
    fn truncation_vanishes_at_integers_and_half_integers() {
        let series = VaalerSeries::new(37).unwrap();
        assert_eq!(series.eval(4.0), 0.0);
        assert_eq!(series.eval(0.0), 0.0);
        assert_eq!(series.eval(2.5), 0.0);
        assert_eq!(series.eval(-3.5), 0.0);
    }

    #[test]
    fn error_bound_at_integers_is_half() {
        for h in [1u32, 10, 100] {
            let b = vaaler_error_bound(17.0, h).unwrap();
            assert!((b - 0.5).abs() < 1e-12, "H = {h}: {b}");
        }
    }

    #[test]
    fn error_bound_decays_at_fixed_interior_point() {
        let x = 0.3;
        let b10 = vaaler_error_bound(x, 10).unwrap();
        let b100 = vaaler_error_bound(x, 100).unwrap();
        let b1000 = vaaler_error_bound(x, 1000).unwrap();
        assert!(b100 < b10 && b1000 < b100, "{b10} {b100} {b1000}");
    }

    #[test]
    fn truncation_respects_bound_on_grid() {
        for h in [10u32, 100] {
            let series = VaalerSeries::new(h).unwrap();
            for k in 1..200 {
                let x = k as f64 / 200.0;
                assert!(truncation_within_bound(&series, x), "H = {h}, x = {x}");
            }
        }
    }

    #[test]
    fn fejer_closed_form_matches_sum() {
        // Σ_{|h|<=H} (1-|h|/(H+1)) e(hx) = (sin(π(H+1)x)/sin(πx))² / (H+1)
        let h = 25u32;
        let series = VaalerSeries::new(h).unwrap();
        for k in 1..40 {
            let x = k as f64 / 41.0;
            let lhs = series.error_bound(x);
            let n = f64::from(h) + 1.0;
            let s = (std::f64::consts::PI * n * x).sin() / (std::f64::consts::PI * x).sin();
            let rhs = s * s / n / (2.0 * n);
            assert!((lhs - rhs).abs() < 1e-9, "x = {x}: {lhs} vs {rhs}");
        }
    }
}
