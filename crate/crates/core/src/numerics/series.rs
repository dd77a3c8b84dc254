use crate::error::{Error, Result};
use alloc::format;

/// Tolerances for [`sum_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceConfig {
    /// Relative size of the geometric tail estimate that counts as negligible.
    pub eps_tail: f64,
    /// Relative change of the tail-corrected sum between steps that counts as settled.
    pub eps_pc: f64,
    /// Maximum number of generator calls.
    pub max_terms: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self { eps_tail: 1e-10, eps_pc: 1e-10, max_terms: 100_000 }
    }
}

impl ConvergenceConfig {
    /// Reject non-positive tolerances or a budget below two terms.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_tail > 0.0) || !(self.eps_pc > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive (eps_tail={}, eps_pc={})",
                self.eps_tail, self.eps_pc
            )));
        }
        if self.max_terms < 2 {
            return Err(Error::InvalidParameter(format!("max_terms must be at least 2 (got {})", self.max_terms)));
        }
        Ok(())
    }

    /// Same tolerances with a different term budget.
    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// Outcome of a convergence-tested summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// Partial sum plus the geometric tail estimate.
    pub value: f64,
    /// Number of generator calls made.
    pub terms_used: usize,
    /// Geometric tail estimate `T = u·ρ/(1−ρ)` at the last ratio-tested step.
    pub tail_estimate: f64,
    /// Whether both the tail test and the step-change test passed.
    pub converged: bool,
}

impl SeriesResult {
    /// Turn a non-converged result into [`Error::NotConverged`].
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged { value: self.value, terms: self.terms_used })
        }
    }
}

/// Sum `Σ_{k≥0} term(k)` with a geometric tail estimate.
///
/// `term` is called with `0, 1, 2, …` in order, so generators may keep
/// running state. At each step with a nonzero predecessor the ratio
/// `ρ = u_i/u_{i−1}` is formed; only when `0 < ρ < 1` is a tail
/// `T_i = u_i·ρ/(1−ρ)` estimated, and the sum is accepted once
/// `|T_i/S_i| < eps_tail` and the tail-corrected sum `S_i + T_i` moved by
/// less than `eps_pc` (relative) since the previous ratio-tested step.
///
/// Leading exact zeros are skipped. Two consecutive exact zeros after a
/// nonzero term mark a terminating series (e.g. a hypergeometric series with
/// a non-positive integer numerator), which is reported converged with zero tail.
pub fn sum_series<F: FnMut(usize) -> f64>(mut term: F, cfg: &ConvergenceConfig) -> SeriesResult {
    let mut sum = 0.0_f64;
    let mut prev: Option<f64> = None;
    let mut zero_run = 0usize;
    let mut last_st: Option<f64> = None;
    let mut tail = f64::INFINITY;

    for i in 0..cfg.max_terms {
        let u = term(i);
        if !u.is_finite() {
            return SeriesResult { value: sum + u, terms_used: i + 1, tail_estimate: tail, converged: false };
        }
        sum += u;
        if u == 0.0 {
            if prev.is_some() {
                zero_run += 1;
                if zero_run >= 2 {
                    return SeriesResult { value: sum, terms_used: i + 1, tail_estimate: 0.0, converged: true };
                }
            }
            prev = prev.map(|_| 0.0);
            last_st = None;
            continue;
        }
        zero_run = 0;
        let before = prev.replace(u);
        let Some(p) = before else { continue };
        if p == 0.0 {
            continue;
        }
        let rho = u / p;
        if !(rho > 0.0 && rho < 1.0) {
            last_st = None;
            continue;
        }
        tail = u * rho / (1.0 - rho);
        let st = sum + tail;
        let tail_ok = if sum != 0.0 { (tail / sum).abs() < cfg.eps_tail } else { tail == 0.0 };
        let step_ok = match last_st {
            Some(prev_st) if st != 0.0 => ((st - prev_st) / st).abs() < cfg.eps_pc,
            Some(prev_st) => prev_st == 0.0,
            None => false,
        };
        last_st = Some(st);
        if tail_ok && step_ok {
            return SeriesResult { value: st, terms_used: i + 1, tail_estimate: tail, converged: true };
        }
    }
    let value = if tail.is_finite() { sum + tail } else { sum };
    SeriesResult { value, terms_used: cfg.max_terms, tail_estimate: tail, converged: false }
}
