use super::series::{sum_series, ConvergenceConfig, SeriesResult};
use crate::error::{domain, Error, Result};
use alloc::format;
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;

fn check_unit_interval(what: &'static str, z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain(what, format!("argument {z} outside [0, 1)")));
    }
    Ok(())
}

/// Polylogarithm `Li_s(z) = Σ_{k≥1} z^k / k^s` for real `z ∈ [0, 1)`.
pub fn polylog(s: f64, z: f64) -> Result<f64> {
    polylog_with(s, z, &ConvergenceConfig::default())?.into_result()
}

/// [`polylog`] with explicit tolerances, returning the raw series outcome.
pub fn polylog_with(s: f64, z: f64, cfg: &ConvergenceConfig) -> Result<SeriesResult> {
    check_unit_interval("polylog", z)?;
    cfg.validate()?;
    if z == 0.0 {
        return Ok(SeriesResult { value: 0.0, terms_used: 0, tail_estimate: 0.0, converged: true });
    }
    let mut zk = 1.0;
    Ok(sum_series(
        |k| {
            zk *= z;
            zk / ((k + 1) as f64).powf(s)
        },
        cfg,
    ))
}

/// Lerch transcendent `Φ(z, s, a) = Σ_{k≥0} z^k / (a+k)^s` for `z ∈ [0, 1)`, `a > 0`.
pub fn lerch_phi(z: f64, s: f64, a: f64) -> Result<f64> {
    lerch_phi_with(z, s, a, &ConvergenceConfig::default())?.into_result()
}

/// [`lerch_phi`] with explicit tolerances, returning the raw series outcome.
pub fn lerch_phi_with(z: f64, s: f64, a: f64, cfg: &ConvergenceConfig) -> Result<SeriesResult> {
    check_unit_interval("lerch_phi", z)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain("lerch_phi", format!("parameter a = {a} must be positive")));
    }
    cfg.validate()?;
    if z == 0.0 {
        let v = a.powf(-s);
        return Ok(SeriesResult { value: v, terms_used: 1, tail_estimate: 0.0, converged: true });
    }
    let mut zk = 1.0;
    Ok(sum_series(
        |k| {
            let t = zk / (a + k as f64).powf(s);
            zk *= z;
            t
        },
        cfg,
    ))
}

/// Generalised hypergeometric series `pFq(a; b; x)` for `|x| < 1`.
///
/// Terms are advanced by the ratio `Π(a_i+k)/Π(b_j+k) · x/(k+1)`, so no
/// Pochhammer symbol is ever formed explicitly. A numerator parameter that is
/// a non-positive integer terminates the series.
pub fn hypergeometric_pfq(a: &[f64], b: &[f64], x: f64, cfg: &ConvergenceConfig) -> Result<SeriesResult> {
    if !(x.abs() < 1.0) {
        return Err(domain("hypergeometric_pfq", format!("argument {x} outside |x| < 1")));
    }
    if let Some(bj) = b.iter().find(|&&bj| bj <= 0.0 && bj == bj.round()) {
        return Err(domain("hypergeometric_pfq", format!("denominator parameter {bj} is a non-positive integer")));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite hypergeometric parameter in {a:?}; {b:?}")));
    }
    cfg.validate()?;
    let mut term = 1.0_f64;
    Ok(sum_series(
        |k| {
            if k == 0 {
                return 1.0;
            }
            let kf = (k - 1) as f64;
            let mut ratio = x / (kf + 1.0);
            for &ai in a {
                ratio *= ai + kf;
            }
            for &bj in b {
                ratio /= bj + kf;
            }
            term *= ratio;
            term
        },
        cfg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute<F: Fn(usize) -> f64>(f: F, n: usize) -> f64 {
        // summed from the small end for accuracy
        (0..n).rev().map(f).sum()
    }

    #[test]
    fn li1_is_minus_log() {
        let v = polylog(1.0, 0.5).unwrap();
        assert!((v - core::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn li_at_zero() {
        for s in [-2.0, -0.5, 0.0, 1.0, 3.5] {
            assert_eq!(polylog(s, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn li_minus_half_tanh_sq_one() {
        // independent summation of 2·10⁴ terms in f64, frozen
        let z = 1.0f64.tanh().powi(2);
        let oracle = brute(|k| z.powi(k as i32 + 1) * ((k + 1) as f64).sqrt(), 20_000);
        let v = polylog(-0.5, z).unwrap();
        assert!((v - 2.011_726_102_916_360_6_f64).abs() < 1e-9, "{v}");
        assert!((v - oracle).abs() < 1e-9 * oracle);
    }

    #[test]
    fn domain_errors() {
        assert!(polylog(1.0, 1.0).is_err());
        assert!(polylog(1.0, -0.1).is_err());
        assert!(lerch_phi(0.5, 1.0, 0.0).is_err());
        assert!(lerch_phi(0.5, 1.0, -2.0).is_err());
        let cfg = ConvergenceConfig::default();
        assert!(hypergeometric_pfq(&[1.0], &[-2.0], 0.5, &cfg).is_err());
        assert!(hypergeometric_pfq(&[1.0], &[0.0], 0.5, &cfg).is_err());
        assert!(hypergeometric_pfq(&[1.0], &[2.0], 1.0, &cfg).is_err());
    }

    #[test]
    fn lerch_identities() {
        for &(z, s) in &[(0.3, 2.0), (0.7, -0.5), (0.95, 1.0)] {
            let phi = lerch_phi(z, s, 1.0).unwrap();
            let li = polylog(s, z).unwrap();
            assert!((phi - li / z).abs() < 1e-10 * phi.abs().max(1.0));
        }
        assert!((lerch_phi(0.0, 2.5, 3.0).unwrap() - 3.0f64.powf(-2.5)).abs() < 1e-15);
    }

    #[test]
    fn lerch_half_one_two() {
        // Φ(1/2, 1, 2) = 4·(ln 2 − 1/2)
        let exact = 4.0 * (core::f64::consts::LN_2 - 0.5);
        let oracle = brute(|k| 0.5f64.powi(k as i32) / (2.0 + k as f64), 10_000);
        let v = lerch_phi(0.5, 1.0, 2.0).unwrap();
        assert!((v - exact).abs() < 1e-10);
        assert!((oracle - exact).abs() < 1e-14);
    }

    #[test]
    fn pfq_identities() {
        let cfg = ConvergenceConfig::default();
        let r = hypergeometric_pfq(&[2.0, 2.0, 1.7], &[1.0, 2.7], 0.0, &cfg).unwrap();
        assert_eq!(r.value, 1.0);
        let r = hypergeometric_pfq(&[1.0, 1.0], &[2.0], 0.5, &cfg).unwrap();
        assert!((r.value - 2.0 * core::f64::consts::LN_2).abs() < 1e-10);
        // terminating: 2F1(-2, 1; 1; x) = (1-x)^2
        let r = hypergeometric_pfq(&[-2.0, 1.0], &[1.0], 0.3, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.49).abs() < 1e-14);
    }

    #[test]
    fn pfq_3f2_against_direct_sum() {
        // direct summation with explicit Pochhammer products in log space
        let lnpoch = |a: f64, k: usize| (0..k).map(|i| (a + i as f64).ln()).sum::<f64>();
        let oracle = brute(
            |k| {
                (lnpoch(2.0, k) * 2.0 + lnpoch(1.7, k) - lnpoch(1.0, k) - lnpoch(2.7, k) - lnpoch(1.0, k)
                    + k as f64 * 0.4f64.ln())
                .exp()
            },
            400,
        );
        let r = hypergeometric_pfq(&[2.0, 2.0, 1.7], &[1.0, 2.7], 0.4, &ConvergenceConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - 3.405_363_730_250_354_7).abs() < 1e-9, "{}", r.value);
        assert!((r.value - oracle).abs() < 1e-10 * oracle);
    }
}
