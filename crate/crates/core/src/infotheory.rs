//! Entropic quantities, fidelities and the closed-form channel series.
//!
//! All entropies are in bits. Spectra are clamped: eigenvalues down to
//! `−NEGATIVE_CLAMP` are treated as numerical noise and set to zero, and
//! eigenvalues below `EIGEN_FLOOR` contribute nothing (`0·lb 0 = 0`).

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, JointBlocks, Marginals, ModeName};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, Matrix};
use crate::numerics::{lb, polylog_with, sum_series, ConvergenceConfig, SeriesResult};
use crate::C64;
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;

/// Eigenvalues below this contribute zero entropy.
pub const EIGEN_FLOOR: f64 = 1e-15;
/// Negative eigenvalues of smaller magnitude are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;
/// Default tolerance of [`subadditivity_check`].
pub const SUBADDITIVITY_TOL: f64 = 1e-6;

/// `−Σ p lb p` of a probability distribution (sum 1 to 1e-10).
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(bad) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(entropy_of(p.iter().copied()))
}

/// `−Σ λ lb λ` over eigenvalues above the floor, without normalisation checks.
fn entropy_of(vals: impl Iterator<Item = f64>) -> f64 {
    let s: f64 = vals.filter(|&l| l > EIGEN_FLOOR).map(|l| -l * lb(l)).sum();
    // avoid reporting −0
    s + 0.0
}

/// Entropy of a spectrum after clamping small negative eigenvalues.
pub fn spectral_entropy(spectrum: &[f64]) -> Result<f64> {
    if let Some(&neg) = spectrum.iter().find(|&&l| l < -NEGATIVE_CLAMP) {
        return Err(Error::NegativeEigenvalue(neg));
    }
    Ok(entropy_of(spectrum.iter().copied()))
}

/// `S(ρ) = −Tr ρ lb ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(&rho.spectrum()?)
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    shannon_entropy(&[p, 1.0 - p])
}

/// Entropies of a bipartite state and the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// `S(A) + S(B) − S(AB)`; the Holevo information for classical-quantum states.
    pub mutual: f64,
    /// `S(AB) − S(B)`.
    pub conditional_a_given_b: f64,
    /// `−S(A|B)`.
    pub coherent_a_to_b: f64,
}

impl EntropyReport {
    fn from_entropies(s_a: f64, s_b: f64, s_ab: f64) -> Self {
        let conditional = s_ab - s_b;
        Self { s_a, s_b, s_ab, mutual: s_a + s_b - s_ab, conditional_a_given_b: conditional, coherent_a_to_b: -conditional }
    }
}

fn check_partition(all: &[ModeName], a: &[ModeName], b: &[ModeName]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::PartitionMismatch("both parts must be non-empty".into()));
    }
    for m in a.iter().chain(b) {
        if !all.contains(m) {
            return Err(Error::PartitionMismatch(format!("mode {m} is not part of the state")));
        }
    }
    if a.iter().any(|m| b.contains(m)) {
        return Err(Error::PartitionMismatch("parts overlap".into()));
    }
    if a.len() + b.len() != all.len() {
        return Err(Error::PartitionMismatch(format!("parts cover {} of {} modes", a.len() + b.len(), all.len())));
    }
    Ok(())
}

/// Entropy report for the bipartition `a | b` of `state`; the parts must cover all modes.
pub fn entropy_report<M: Marginals + ?Sized>(state: &M, a: &[ModeName], b: &[ModeName]) -> Result<EntropyReport> {
    let all = state.mode_names();
    check_partition(&all, a, b)?;
    let s_a = von_neumann_entropy(&state.marginal(a)?)?;
    let s_b = von_neumann_entropy(&state.marginal(b)?)?;
    let s_ab = von_neumann_entropy(&state.marginal(&all)?)?;
    Ok(EntropyReport::from_entropies(s_a, s_b, s_ab))
}

/// `S(Σ p_x ρ_x) − Σ p_x S(ρ_x)` for an ensemble on a common layout.
pub fn holevo_quantity(ensemble: &[(f64, &DensityMatrix)]) -> Result<f64> {
    let total: f64 = ensemble.iter().map(|e| e.0).sum();
    if ensemble.iter().any(|e| !(e.0 >= 0.0)) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDistribution(format!("ensemble weights sum to {total}")));
    }
    let avg = DensityMatrix::linear_combination(ensemble)?;
    let mut chi = von_neumann_entropy(&avg)?;
    for &(p, rho) in ensemble {
        if p > 0.0 {
            chi -= p * von_neumann_entropy(rho)?;
        }
    }
    Ok(chi)
}

/// Whether two operators commute to `tol` in max-norm.
pub fn commute(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    let c = a.matmul(b)?.sub(&b.matmul(a)?)?;
    Ok(c.max_abs() < tol)
}

/// `Σ √λ` over the clamped spectrum of a PSD matrix.
fn trace_sqrt(vals: &[f64]) -> Result<f64> {
    if let Some(&neg) = vals.iter().find(|&&l| l < -NEGATIVE_CLAMP) {
        return Err(Error::NegativeEigenvalue(neg));
    }
    // eigenvalues at the rounding level of the solver are zero; their square
    // roots would otherwise add ~1e-8 per null direction
    let floor = vals.iter().fold(0.0f64, |m, &l| m.max(l.abs())) * vals.len() as f64 * f64::EPSILON;
    Ok(vals.iter().filter(|&&l| l > floor).map(|&l| l.sqrt()).sum())
}

/// Uhlmann fidelity `(Tr √(√ρ₁ ρ₂ √ρ₁))²`, clamped to `[0, 1]`.
///
/// Both operators are split into common invariant blocks. Blocks where both
/// are diagonal use `Σ √(a_i b_i)`; blocks where they commute use the
/// spectrum of `ρ₁ρ₂`; the rest form `√ρ₁` explicitly.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    rho1.same_layout(rho2)?;
    rho1.check_hermitian()?;
    rho2.check_hermitian()?;
    let jb = JointBlocks::new(&[rho1, rho2])?;
    let mut root_sum = 0.0;
    for b in 0..jb.len() {
        let n = jb.indices(b).len();
        let diag = |m: usize| jb.entries(b, m).iter().all(|e| e.0 == e.1);
        if diag(0) && diag(1) {
            let mut d1 = alloc::vec![0.0; n];
            let mut d2 = alloc::vec![0.0; n];
            for e in jb.entries(b, 0) {
                d1[e.0] = e.2.re;
            }
            for e in jb.entries(b, 1) {
                d2[e.0] = e.2.re;
            }
            root_sum += trace_sqrt(&d1.iter().zip(&d2).map(|(x, y)| x * y).collect::<Vec<_>>())?;
            continue;
        }
        let (m1, m2) = (jb.dense(b, 0), jb.dense(b, 1));
        if commute(&m1, &m2, 1e-12)? {
            let p = m1.matmul(&m2)?;
            let herm = p.add(&p.adjoint())?.scale(C64::new(0.5, 0.0));
            root_sum += trace_sqrt(&hermitian_eigenvalues(&herm)?)?;
            continue;
        }
        let e = hermitian_eigen(&m1)?;
        let sqrt1 = Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| e.vectors[(i, k)] * e.values[k].max(0.0).sqrt() * e.vectors[(j, k)].conj()).sum()
        });
        let inner = sqrt1.matmul(&m2)?.matmul(&sqrt1)?;
        let inner = inner.add(&inner.adjoint())?.scale(C64::new(0.5, 0.0));
        root_sum += trace_sqrt(&hermitian_eigenvalues(&inner)?)?;
    }
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Closed-form channel quantities evaluated as convergence-tested series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// Holevo information of the single-rail classical channel.
    HolevoSingleClassical,
    /// Holevo information of the dual-rail classical channel (α² = 1/2).
    HolevoDualClassical,
    /// `S(A|R)` of the single-rail quantum channel.
    CondEntropySingleQuantum,
    /// `S(A|R)` of the dual-rail quantum channel (α² = 1/2).
    CondEntropyDualQuantum,
    /// Fidelity between the two single-rail logical outputs.
    FidelitySingle,
    /// Fidelity between the two dual-rail logical outputs.
    FidelityDual,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 6] = [
        ClosedForm::HolevoSingleClassical,
        ClosedForm::HolevoDualClassical,
        ClosedForm::CondEntropySingleQuantum,
        ClosedForm::CondEntropyDualQuantum,
        ClosedForm::FidelitySingle,
        ClosedForm::FidelityDual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClosedForm::HolevoSingleClassical => "holevo_single_classical",
            ClosedForm::HolevoDualClassical => "holevo_dual_classical",
            ClosedForm::CondEntropySingleQuantum => "cond_entropy_single_quantum",
            ClosedForm::CondEntropyDualQuantum => "cond_entropy_dual_quantum",
            ClosedForm::FidelitySingle => "fidelity_single",
            ClosedForm::FidelityDual => "fidelity_dual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.as_str() == s)
    }
}

/// Term budget used by [`closed_form`]; large squeezing needs many terms
/// because the series decay like `tanh^{2n} r`.
pub const CLOSED_FORM_MAX_TERMS: usize = 20_000_000;

/// [`closed_form_with`] using the default tolerances and [`CLOSED_FORM_MAX_TERMS`].
pub fn closed_form(q: ClosedForm, r: f64, alpha2: f64) -> Result<f64> {
    closed_form_with(q, r, alpha2, &ConvergenceConfig::default().with_max_terms(CLOSED_FORM_MAX_TERMS))?.into_result()
}

fn exact(value: f64) -> SeriesResult {
    SeriesResult { value, terms_used: 0, tail_estimate: 0.0, converged: true }
}

/// Evaluate a closed-form quantity. `alpha2 = |α|²` is used only by the
/// single-rail entries; dual-rail entries are evaluated at `α² = 1/2`.
/// At `r = 0` the noiseless limits are returned exactly.
pub fn closed_form_with(q: ClosedForm, r: f64, alpha2: f64, cfg: &ConvergenceConfig) -> Result<SeriesResult> {
    cfg.validate()?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
    }
    if !(0.0..=1.0).contains(&alpha2) {
        return Err(Error::InvalidDistribution(format!("|α|² = {alpha2} outside [0, 1]")));
    }
    let (a2, b2) = (alpha2, 1.0 - alpha2);
    let (t, ch, sh) = (r.tanh(), r.cosh(), r.sinh());
    let (t2, ch2, sh2) = (t * t, ch * ch, sh * sh);
    let single_pure = a2 == 0.0 || b2 == 0.0;
    Ok(match q {
        ClosedForm::HolevoSingleClassical => {
            let h = binary_entropy(a2)?;
            if r == 0.0 || single_pure {
                return Ok(exact(if single_pure { 0.0 } else { h }));
            }
            let mut tn = 1.0;
            let s = sum_series(
                |n| {
                    let nf = n as f64;
                    let mut u = a2 / ch2 * tn * lb(1.0 + nf * b2 / (a2 * sh2));
                    if n > 0 {
                        u += nf * b2 / (ch2 * sh2) * tn * lb(1.0 + a2 * sh2 / (nf * b2));
                    }
                    tn *= t2;
                    u
                },
                cfg,
            );
            SeriesResult { value: h - s.value, ..s }
        }
        ClosedForm::HolevoDualClassical => {
            if r == 0.0 {
                return Ok(exact(1.0));
            }
            let c6 = ch2 * ch2 * ch2;
            // Σ_{q≤p} (q+1) lb((p+1)/(q+1)) = (p+1)(p+2)/2·lb(p+1) − Σ_{j≤p+1} j lb j
            let mut cum = 0.0;
            let mut tp = 1.0 / c6;
            let s = sum_series(
                |p| {
                    let j = (p + 1) as f64;
                    cum += j * lb(j);
                    let inner = j * (j + 1.0) / 2.0 * lb(j) - cum;
                    let u = tp * inner;
                    tp *= t2;
                    u
                },
                cfg,
            );
            SeriesResult { value: 1.0 - s.value, ..s }
        }
        ClosedForm::CondEntropySingleQuantum => {
            if single_pure {
                return Ok(exact(0.0));
            }
            if r == 0.0 {
                return Ok(exact(-binary_entropy(a2)?));
            }
            let ch4 = ch2 * ch2;
            let lt = lb(t);
            let mut tn = 1.0;
            let s = sum_series(
                |n| {
                    let nf = n as f64;
                    let mut u = a2 / ch2 * tn * lb(t2 * (a2 * ch2 + b2 * (nf + 1.0)) / (a2 * sh2 + b2 * nf));
                    u += 2.0 * nf * tn * b2 / ch2 * ((nf + 1.0) / ch2 - nf / sh2) * lt;
                    u += b2 / ch2 * tn * (nf + 1.0) / ch2 * lb(a2 / ch2 + b2 * (nf + 1.0) / ch4);
                    if n > 0 {
                        u -= b2 * nf / (sh2 * ch2) * tn * lb(a2 / ch2 + b2 * nf / (sh2 * ch2));
                    }
                    tn *= t2;
                    u
                },
                cfg,
            );
            SeriesResult { value: -s.value, ..s }
        }
        ClosedForm::CondEntropyDualQuantum => {
            if r == 0.0 {
                return Ok(exact(-1.0));
            }
            let c6 = ch2 * ch2 * ch2;
            let mut tp = 1.0 / c6;
            let s = sum_series(
                |p| {
                    let pf = p as f64;
                    let u = tp * lb((pf + 2.0) / (pf + 1.0)) * (pf + 1.0) * (pf + 2.0) / 2.0;
                    tp *= t2;
                    u
                },
                cfg,
            );
            SeriesResult { value: -s.value, ..s }
        }
        ClosedForm::FidelitySingle | ClosedForm::FidelityDual => {
            if r == 0.0 {
                return Ok(exact(0.0));
            }
            let li = polylog_with(-0.5, t2, cfg)?;
            let root = li.value / (sh * ch2);
            let f = root * root;
            let value = if q == ClosedForm::FidelityDual { f * f } else { f };
            SeriesResult { value, ..li }
        }
    })
}

/// Outcome of the strong-subadditivity check on a tripartite state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityReport {
    /// `S(A|AntiRob) + S(A|Rob)`.
    pub sum_conditional: f64,
    pub satisfied: bool,
}

/// Split mode names into (Alice, Rob, AntiRob) groups.
fn tripartite_groups(names: &[ModeName]) -> Result<(Vec<ModeName>, Vec<ModeName>, Vec<ModeName>)> {
    let a: Vec<_> = names.iter().copied().filter(|m| m.is_alice()).collect();
    let r: Vec<_> = names.iter().copied().filter(|m| m.is_rob()).collect();
    let rb: Vec<_> = names.iter().copied().filter(|m| m.is_antirob()).collect();
    if a.is_empty() || r.is_empty() || rb.is_empty() {
        return Err(Error::PartitionMismatch("state needs sender, receiver and partner modes".into()));
    }
    Ok((a, r, rb))
}

/// `[S(A Rbar) − S(Rbar)] + [S(A R) − S(R)]`, satisfied iff `≥ −tol`.
pub fn subadditivity_check_with<M: Marginals + ?Sized>(state: &M, tol: f64) -> Result<SubadditivityReport> {
    let (a, r, rb) = tripartite_groups(&state.mode_names())?;
    let cond = |other: &[ModeName]| -> Result<f64> {
        let joint: Vec<ModeName> = a.iter().chain(other).copied().collect();
        Ok(von_neumann_entropy(&state.marginal(&joint)?)? - von_neumann_entropy(&state.marginal(other)?)?)
    };
    let sum = cond(&rb)? + cond(&r)?;
    Ok(SubadditivityReport { sum_conditional: sum, satisfied: sum >= -tol })
}

/// [`subadditivity_check_with`] at [`SUBADDITIVITY_TOL`].
pub fn subadditivity_check<M: Marginals + ?Sized>(state: &M) -> Result<SubadditivityReport> {
    subadditivity_check_with(state, SUBADDITIVITY_TOL)
}

/// Coherent information from the sender to the receiver and to the partner.
pub fn coherent_informations<M: Marginals + ?Sized>(state: &M) -> Result<(f64, f64)> {
    let (a, r, rb) = tripartite_groups(&state.mode_names())?;
    let coh = |other: &[ModeName]| -> Result<f64> {
        let joint: Vec<ModeName> = a.iter().chain(other).copied().collect();
        Ok(von_neumann_entropy(&state.marginal(other)?)? - von_neumann_entropy(&state.marginal(&joint)?)?)
    };
    Ok((coh(&r)?, coh(&rb)?))
}
