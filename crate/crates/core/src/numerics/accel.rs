use crate::error::{domain, Result};
use alloc::format;
use core::f64::consts::PI;
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;

/// Default validity threshold for the near-horizon Rindler approximation:
/// the hover height above the horizon, in units of `2 r_s`, must be below this.
pub const DEFAULT_RINDLER_VALIDITY: f64 = 0.1;

/// Squeezing parameter seen by a uniformly accelerated detector:
/// `tanh r = exp(−ωπ/a)`.
pub fn squeezing_from_acceleration(omega: f64, a: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain("squeezing_from_acceleration", format!("frequency {omega} must be positive")));
    }
    if !(a > 0.0) {
        return Err(domain("squeezing_from_acceleration", format!("acceleration {a} must be positive")));
    }
    Ok((-omega * PI / a).exp().atanh())
}

/// Inverse of [`squeezing_from_acceleration`]: `a = −ωπ / ln tanh r`.
pub fn acceleration_from_squeezing(omega: f64, r: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain("acceleration_from_squeezing", format!("frequency {omega} must be positive")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain("acceleration_from_squeezing", format!("squeezing {r} must be positive and finite")));
    }
    Ok(-omega * PI / r.tanh().ln())
}

/// Proper acceleration of the Rindler approximation near a Schwarzschild horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerApprox {
    /// `a = 2 r_s √(1 − r_s/r0)`.
    pub a: f64,
    /// Whether `(r0 − r_s)/(2 r_s)` is below the validity threshold.
    pub valid: bool,
}

/// Near-horizon acceleration with the default validity threshold.
///
/// The formula is used exactly as stated, `a = 2 r_s √(1 − r_s/r0)`. Note that
/// it vanishes at the horizon (`r0 = r_s`, accepted and returning `a = 0`)
/// even though the thermal noise seen by a hovering observer diverges there;
/// callers wanting the physical near-horizon behaviour should be aware of this.
pub fn acceleration_from_schwarzschild(r_s: f64, r0: f64) -> Result<RindlerApprox> {
    acceleration_from_schwarzschild_with(r_s, r0, DEFAULT_RINDLER_VALIDITY)
}

/// [`acceleration_from_schwarzschild`] with an explicit validity threshold.
pub fn acceleration_from_schwarzschild_with(r_s: f64, r0: f64, threshold: f64) -> Result<RindlerApprox> {
    if !(r_s > 0.0) || !r_s.is_finite() {
        return Err(domain("acceleration_from_schwarzschild", format!("radius r_s = {r_s} must be positive")));
    }
    if !(r0 >= r_s) || !r0.is_finite() {
        return Err(domain("acceleration_from_schwarzschild", format!("hover radius {r0} lies inside the horizon r_s = {r_s}")));
    }
    if !(threshold > 0.0) {
        return Err(domain("acceleration_from_schwarzschild", format!("threshold {threshold} must be positive")));
    }
    let a = 2.0 * r_s * (1.0 - r_s / r0).sqrt();
    let valid = (r0 - r_s) / (2.0 * r_s) < threshold;
    Ok(RindlerApprox { a, valid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_value() {
        let r = squeezing_from_acceleration(1.0, PI).unwrap();
        assert!((r - 0.385_968_416_452_652_36).abs() < 1e-14);
    }

    #[test]
    fn small_acceleration_limit() {
        assert_eq!(squeezing_from_acceleration(1.0, 1e-3).unwrap(), 0.0);
        assert!(squeezing_from_acceleration(1.0, 0.1).unwrap() < 1e-13);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(squeezing_from_acceleration(0.0, 1.0).is_err());
        assert!(squeezing_from_acceleration(1.0, 0.0).is_err());
        assert!(squeezing_from_acceleration(1.0, -1.0).is_err());
        assert!(acceleration_from_squeezing(1.0, 0.0).is_err());
        assert!(acceleration_from_schwarzschild(1.0, 0.5).is_err());
        assert!(acceleration_from_schwarzschild(0.0, 1.0).is_err());
    }

    #[test]
    fn schwarzschild_examples() {
        let h = acceleration_from_schwarzschild(1.0, 1.0).unwrap();
        assert_eq!(h.a, 0.0);
        assert!(h.valid);
        assert!(acceleration_from_schwarzschild(1.0, 1.01).unwrap().valid);
        assert!(!acceleration_from_schwarzschild(1.0, 3.0).unwrap().valid);
        let a = acceleration_from_schwarzschild(1.0, 1.05).unwrap().a;
        assert!((a - 0.436_435_780_471_984_76).abs() < 1e-14);
        assert!(acceleration_from_schwarzschild_with(1.0, 3.0, 2.0).unwrap().valid);
    }
}
