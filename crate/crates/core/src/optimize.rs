//! Parameter sweeps, adaptive truncation, capacity optimisation and the
//! NOON decay fit.

use crate::channel::{build_channel_state, squeezed_tail_cutoff, ChannelParams, Encoding, Rail};
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Marginals, ModeName};
use crate::infotheory::von_neumann_entropy;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;

/// Raise the cutoff from `k0` one level at a time until
/// `|f(k+1) − f(k)| / max(|f(k+1)|, 1e-300) < eps`; returns `(f(k+1), k)`.
/// A constant evaluator therefore returns `k0` after two evaluations.
pub fn adaptive_truncation<F>(mut f: F, k0: usize, eps: f64, k_max: usize) -> Result<(f64, usize)>
where
    F: FnMut(usize) -> Result<f64>,
{
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {eps} must be positive")));
    }
    if k0 >= k_max {
        return Err(Error::InvalidParameter(format!("starting cutoff {k0} is not below the limit {k_max}")));
    }
    let mut prev = f(k0)?;
    let mut k = k0;
    while k < k_max {
        let next = f(k + 1)?;
        if next == prev || (next - prev).abs() / next.abs().max(1e-300) < eps {
            return Ok((next, k));
        }
        prev = next;
        k += 1;
    }
    Err(Error::TruncationNotConverged { value: prev, cutoff: k })
}

/// One named parameter axis of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("axis values must be finite and non-empty".into()));
        }
        Ok(Self { name: name.into(), values })
    }

    /// `start, start+step, …` up to `stop`, inclusive when `stop` lies within
    /// half a step of a grid point. Points are `start + i·step`, never accumulated.
    pub fn range(name: impl Into<String>, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(Error::InvalidParameter(format!("grid {start}:{stop}:{step} is empty or malformed")));
        }
        let n = ((stop - start) / step + 0.5).floor() as usize;
        if n > 10_000_000 {
            return Err(Error::InvalidParameter(format!("grid {start}:{stop}:{step} has too many points")));
        }
        Self::new(name, (0..=n).map(|i| start + i as f64 * step).collect())
    }
}

/// All grid points in lexicographic order of the axes (last axis fastest).
pub fn grid_points(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = alloc::vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.values.len());
        for p in &out {
            for &v in &axis.values {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Result of evaluating one quantity at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub cutoff_used: usize,
    pub converged: bool,
}

impl Evaluation {
    pub fn exact(value: f64, cutoff_used: usize) -> Self {
        Self { value, cutoff_used, converged: true }
    }
}

/// Turn an evaluator outcome into a row payload: convergence failures keep
/// their best estimate, other errors are recorded as messages.
pub fn settle(res: Result<Evaluation>) -> core::result::Result<Evaluation, String> {
    match res {
        Ok(e) => Ok(e),
        Err(Error::NotConverged { value, .. }) => Ok(Evaluation { value, cutoff_used: 0, converged: false }),
        Err(Error::TruncationNotConverged { value, cutoff }) => Ok(Evaluation { value, cutoff_used: cutoff, converged: false }),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub quantity: String,
    /// The evaluation, or the error message when the evaluator failed.
    pub outcome: core::result::Result<Evaluation, String>,
}

/// Rows of `(parameters, quantity) → value` in deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axes: Vec<Axis>,
    pub quantities: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Assemble a table from per-point results given in [`grid_points`] order,
    /// each holding one outcome per quantity.
    pub fn assemble(
        axes: Vec<Axis>,
        quantities: Vec<String>,
        results: Vec<Vec<core::result::Result<Evaluation, String>>>,
    ) -> Result<Self> {
        let points = grid_points(&axes);
        if points.len() != results.len() {
            return Err(Error::DimensionMismatch(points.len(), results.len()));
        }
        let mut rows = Vec::with_capacity(points.len() * quantities.len());
        for (p, res) in points.into_iter().zip(results) {
            if res.len() != quantities.len() {
                return Err(Error::DimensionMismatch(quantities.len(), res.len()));
            }
            for (q, outcome) in quantities.iter().zip(res) {
                let outcome = match outcome {
                    Ok(e) if !e.value.is_finite() => Err(format!("non-finite value {}", e.value)),
                    other => other,
                };
                rows.push(SweepRow { params: p.clone(), quantity: q.clone(), outcome });
            }
        }
        Ok(Self { axes, quantities, rows })
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| matches!(&r.outcome, Ok(e) if e.converged))
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    /// Values of one quantity in row order (failed rows give `None`).
    pub fn values(&self, quantity: &str) -> Vec<Option<f64>> {
        self.rows.iter().filter(|r| r.quantity == quantity).map(|r| r.outcome.as_ref().ok().map(|e| e.value)).collect()
    }
}

/// A named evaluator over grid points.
pub struct Quantity<'a> {
    pub name: String,
    pub eval: &'a dyn Fn(&[f64]) -> Result<Evaluation>,
}

/// Evaluate every quantity at every grid point, sequentially; failures are
/// recorded per row and the sweep continues.
pub fn parameter_sweep(quantities: &[Quantity<'_>], axes: Vec<Axis>) -> Result<SweepTable> {
    let results = grid_points(&axes).iter().map(|p| quantities.iter().map(|q| settle((q.eval)(p))).collect()).collect();
    SweepTable::assemble(axes, quantities.iter().map(|q| q.name.clone()).collect(), results)
}

/// Options of [`optimize_capacity_2d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeConfig {
    /// Norm lost by the initial cutoff guess.
    pub tail_tol: f64,
    /// Relative tolerance of the cutoff check at the reference point.
    pub eps: f64,
    pub k_max: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self { tail_tol: 1e-7, eps: 1e-8, k_max: 200_000 }
    }
}

/// Best point of a capacity optimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub alpha2: f64,
    pub q_r: f64,
    pub value: f64,
    pub cutoff_used: usize,
    /// Best value on the coarse grid, before refinement.
    pub coarse_value: f64,
}

/// Receiver states of the two classical single-rail inputs at one `q_R`.
#[derive(Debug, Clone)]
pub struct ClassicalPair {
    pub vacuum: DensityMatrix,
    pub excited: DensityMatrix,
    pub s_vacuum: f64,
    pub s_excited: f64,
}

impl ClassicalPair {
    pub fn new(r: f64, q_r: f64, cutoff: usize) -> Result<Self> {
        let p = ChannelParams::real_wedge(r, q_r, cutoff)?;
        let recv = |p0: f64| -> Result<DensityMatrix> {
            build_channel_state(&p, &Encoding::classical(Rail::Single, p0)?, false)?.marginal(&[ModeName::R])
        };
        let (vacuum, excited) = (recv(1.0)?, recv(0.0)?);
        let (s_vacuum, s_excited) = (von_neumann_entropy(&vacuum)?, von_neumann_entropy(&excited)?);
        Ok(Self { vacuum, excited, s_vacuum, s_excited })
    }

    /// Holevo information `S(α²ρ₀ + β²ρ₁) − α²S(ρ₀) − β²S(ρ₁)`.
    pub fn holevo(&self, alpha2: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::InvalidDistribution(format!("|α|² = {alpha2} outside [0, 1]")));
        }
        if alpha2 == 0.0 || alpha2 == 1.0 {
            return Ok(0.0);
        }
        let mix = DensityMatrix::linear_combination(&[(alpha2, &self.vacuum), (1.0 - alpha2, &self.excited)])?;
        Ok(von_neumann_entropy(&mix)? - alpha2 * self.s_vacuum - (1.0 - alpha2) * self.s_excited)
    }
}

/// Cutoff for the single-rail classical channel at squeezing `r`, chosen by
/// adaptive truncation of the Holevo information at `α² = 1/2, q_R = 1/√2`.
pub fn capacity_cutoff(r: f64, cfg: &OptimizeConfig) -> Result<usize> {
    let k0 = squeezed_tail_cutoff(1, r, cfg.tail_tol).max(4);
    let q = core::f64::consts::FRAC_1_SQRT_2;
    let (_, k) = adaptive_truncation(|k| ClassicalPair::new(r, q, k)?.holevo(0.5), k0, cfg.eps, cfg.k_max.max(k0 + 1))?;
    Ok(k)
}

/// Grid unit of the search: coordinates are `i / GRID_DENOM`.
const GRID_DENOM: usize = 200;
/// Coarse step in grid units (0.05).
const COARSE: usize = 10;

/// `(value, q index, α² index)` ordering: larger value, then larger `q_R`, then larger `α²`.
fn better(a: (f64, usize, usize), b: (f64, usize, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1 > b.1 || (a.1 == b.1 && a.2 > b.2)))
}

/// Best `α²` index in `idx` (contiguous, ascending) for one `q_R`. The Holevo
/// information is concave in the input distribution, so a ternary search
/// over the grid finds the same maximiser as a full scan.
fn best_alpha(pair: &ClassicalPair, idx: &[usize]) -> Result<(usize, f64)> {
    let mut memo: Vec<Option<f64>> = alloc::vec![None; idx.len()];
    let mut eval = |i: usize| -> Result<f64> {
        if let Some(v) = memo[i] {
            return Ok(v);
        }
        let v = pair.holevo(idx[i] as f64 / GRID_DENOM as f64)?;
        memo[i] = Some(v);
        Ok(v)
    };
    let (mut lo, mut hi) = (0usize, idx.len() - 1);
    while hi - lo >= 3 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        let (f1, f2) = (eval(m1)?, eval(m2)?);
        if f1 > f2 {
            hi = m2 - 1;
        } else {
            lo = m1 + 1;
        }
    }
    let mut best = (f64::NEG_INFINITY, 0usize);
    for i in lo..=hi {
        let v = eval(i)?;
        if v >= best.0 {
            best = (v, i);
        }
    }
    Ok((idx[best.1], best.0))
}

/// Maximise the single-rail classical Holevo information over `(α², q_R)`:
/// a 0.05 grid on both axes, then a 0.005 grid over the best coarse cell
/// (±0.025 around the best coarse point). Ties favour larger `q_R`, then
/// larger `α²`. One cutoff, chosen at the reference point, serves the whole
/// search.
pub fn optimize_capacity_2d(r: f64, cfg: &OptimizeConfig) -> Result<Optimum> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
    }
    let cutoff = capacity_cutoff(r, cfg)?;
    let search = |qs: &[usize], alphas: &[usize]| -> Result<(f64, usize, usize)> {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for &q in qs {
            let pair = ClassicalPair::new(r, q as f64 / GRID_DENOM as f64, cutoff)?;
            let (a, v) = best_alpha(&pair, alphas)?;
            if better((v, q, a), best) {
                best = (v, q, a);
            }
        }
        Ok(best)
    };
    let coarse: Vec<usize> = (0..=GRID_DENOM).step_by(COARSE).collect();
    let (coarse_value, cq, ca) = search(&coarse, &coarse)?;
    let half = COARSE / 2;
    let cell = |c: usize| -> Vec<usize> { (c.saturating_sub(half)..=(c + half).min(GRID_DENOM)).collect() };
    let (value, fq, fa) = search(&cell(cq), &cell(ca))?;
    let coord = |i: usize| i as f64 / GRID_DENOM as f64;
    Ok(Optimum { alpha2: coord(fa), q_r: coord(fq), value, cutoff_used: cutoff, coarse_value })
}

/// Least-squares straight line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Fit `y = slope·x + intercept` by least squares (at least two distinct x).
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter("a line needs at least two points".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidParameter("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok(LinearFit { slope, intercept, residual: (ss / n).sqrt() })
}

/// Decay model `F = N² e^{−aN + b}` fitted at one squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub a_r: f64,
    pub b_r: f64,
    /// RMS misfit of `ln(F/N²)`.
    pub residual: f64,
    /// Squeezing range the samples came from.
    pub window: (f64, f64),
}

/// Fit `ln(F/N²) = −aN + b` to `(N, F)` samples taken at squeezing `r`.
pub fn fit_noon_decay(samples: &[(usize, f64)], r: f64) -> Result<FitResult> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter(format!("{} samples; at least 3 are needed", samples.len())));
    }
    if let Some(&(n, f)) = samples.iter().find(|s| !(s.1 > 0.0) || s.0 == 0) {
        return Err(Error::InvalidParameter(format!("sample (N = {n}, F = {f}) is not usable")));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(n, f)| (n as f64, (f / (n * n) as f64).ln())).collect();
    let fit = linear_fit(&pts)?;
    Ok(FitResult { a_r: -fit.slope, b_r: fit.intercept, residual: fit.residual, window: (r, r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::{closed_form, entropy_report, ClosedForm};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn truncation_constant_and_convergent() {
        let mut calls = 0;
        let (v, k) = adaptive_truncation(
            |_| {
                calls += 1;
                Ok(2.5)
            },
            7,
            1e-9,
            100,
        )
        .unwrap();
        assert_eq!((v, k, calls), (2.5, 7, 2));
        let (v, k) = adaptive_truncation(|k| Ok(1.0 - 0.5f64.powi(k as i32)), 3, 1e-6, 100).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        // first k with 2^-(k+1) < 1e-6
        assert_eq!(k, 19);
        assert!(matches!(
            adaptive_truncation(|k| Ok(k as f64), 3, 1e-6, 10),
            Err(Error::TruncationNotConverged { cutoff: 10, .. })
        ));
    }

    #[test]
    fn dual_holevo_cutoff_choice() {
        let r = 1.5;
        let eval = |k: usize| -> Result<f64> {
            let p = ChannelParams::single_wedge(r, k)?;
            let rho = build_channel_state(&p, &Encoding::classical(Rail::Dual, 0.5)?, false)?;
            Ok(entropy_report(&rho, &[ModeName::A], &[ModeName::R0, ModeName::R1])?.mutual)
        };
        let (v, k) = adaptive_truncation(eval, 20, 1e-6, 200).unwrap();
        let reference = eval(60).unwrap();
        assert!((v - reference).abs() < 1e-4, "cutoff {k}: {v} vs {reference}");
        assert!((v - closed_form(ClosedForm::HolevoDualClassical, r, 0.5).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn axis_ranges() {
        let a = Axis::range("r", 0.0, 3.0, 0.1).unwrap();
        assert_eq!(a.values.len(), 31);
        assert!((a.values[30] - 3.0).abs() < 1e-12);
        assert_eq!(Axis::range("r", 0.0, 0.94, 0.1).unwrap().values.len(), 10);
        assert_eq!(Axis::range("r", 0.0, 0.96, 0.1).unwrap().values.len(), 11);
        assert!(Axis::range("r", 1.0, 0.0, 0.1).is_err());
        assert!(Axis::range("r", 0.0, 1.0, 0.0).is_err());
        let pts = grid_points(&[Axis::new("a", vec![1.0, 2.0]).unwrap(), Axis::new("b", vec![3.0, 4.0, 5.0]).unwrap()]);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![1.0, 4.0]);
        assert_eq!(pts[3], vec![2.0, 3.0]);
    }

    #[test]
    fn sweeps() {
        let holevo = |p: &[f64]| Ok(Evaluation::exact(closed_form(ClosedForm::HolevoSingleClassical, p[0], 0.5)?, 0));
        let failing =
            |p: &[f64]| if p[0] > 1.0 { Err(Error::InvalidParameter("boom".into())) } else { Ok(Evaluation::exact(p[0], 0)) };
        let quantities = [Quantity { name: "holevo".into(), eval: &holevo }, Quantity { name: "id".into(), eval: &failing }];
        let single = parameter_sweep(&quantities[..1], vec![Axis::new("r", vec![0.7]).unwrap()]).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.values("holevo")[0], Some(closed_form(ClosedForm::HolevoSingleClassical, 0.7, 0.5).unwrap()));
        let t = parameter_sweep(&quantities, vec![Axis::range("r", 0.0, 2.0, 0.25).unwrap()]).unwrap();
        assert_eq!(t.rows.len(), 18);
        assert_eq!(t.failures(), 4);
        let h: Vec<f64> = t.values("holevo").into_iter().map(Option::unwrap).collect();
        assert!(h.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn sweep_spot_checks_coherent_information() {
        let coh = |p: &[f64]| -> Result<Evaluation> {
            let params = ChannelParams::real_wedge(1.0, p[0], 40)?;
            let rho = build_channel_state(&params, &Encoding::quantum_real(Rail::Single, 0.5)?, false)?;
            Ok(Evaluation::exact(entropy_report(&rho, &[ModeName::A], &[ModeName::R])?.coherent_a_to_b, 40))
        };
        let t = parameter_sweep(&[Quantity { name: "coh".into(), eval: &coh }], vec![Axis::range("q_r", 0.0, 1.0, 0.5).unwrap()])
            .unwrap();
        for (row, q) in t.rows.iter().zip([0.0, 0.5, 1.0]) {
            assert_eq!(row.outcome.as_ref().unwrap().value, coh(&[q]).unwrap().value);
        }
    }

    #[test]
    fn classical_pair_matches_report() {
        let (r, q, a2, k) = (0.9, 0.6, 0.4, 60);
        let pair = ClassicalPair::new(r, q, k).unwrap();
        let rho = build_channel_state(
            &ChannelParams::real_wedge(r, q, k).unwrap(),
            &Encoding::classical(Rail::Single, a2).unwrap(),
            false,
        )
        .unwrap();
        let rep = entropy_report(&rho, &[ModeName::A], &[ModeName::R]).unwrap();
        assert!((pair.holevo(a2).unwrap() - rep.mutual).abs() < 1e-10);
    }

    #[test]
    fn optimizer_low_squeezing_prefers_single_wedge() {
        let opt = optimize_capacity_2d(0.5, &OptimizeConfig::default()).unwrap();
        assert!((opt.q_r - 1.0).abs() <= 0.005, "{opt:?}");
        assert!(opt.value >= opt.coarse_value);
        let fixed = ClassicalPair::new(0.5, 1.0, opt.cutoff_used).unwrap().holevo(0.5).unwrap();
        assert!(opt.value >= fixed);
    }

    #[test]
    fn concave_search_matches_full_scan() {
        for (r, q) in [(0.4, 1.0), (1.5, 0.55), (2.5, 0.8)] {
            let pair = ClassicalPair::new(r, q, 200).unwrap();
            let idx: Vec<usize> = (0..=GRID_DENOM).step_by(COARSE).collect();
            let mut full = (f64::NEG_INFINITY, 0);
            for &i in &idx {
                let v = pair.holevo(i as f64 / GRID_DENOM as f64).unwrap();
                if v >= full.0 {
                    full = (v, i);
                }
            }
            assert_eq!(best_alpha(&pair, &idx).unwrap(), (full.1, full.0));
            let window: Vec<usize> = (95..=105).collect();
            let fine = best_alpha(&pair, &window).unwrap();
            assert!(window.iter().all(|&i| pair.holevo(i as f64 / GRID_DENOM as f64).unwrap() <= fine.1));
        }
    }

    #[test]
    fn fits() {
        let samples: Vec<(usize, f64)> = (1..=8).map(|n| (n, (n * n) as f64 * (-0.37 * n as f64 + 0.12).exp())).collect();
        let fit = fit_noon_decay(&samples, 2.5).unwrap();
        assert!((fit.a_r - 0.37).abs() < 1e-12 && (fit.b_r - 0.12).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(fit_noon_decay(&samples[..2], 2.5).is_err());
        assert!(fit_noon_decay(&[(1, 1.0), (2, 0.0), (3, 1.0)], 2.5).is_err());
    }

    proptest! {
        #[test]
        fn line_recovery(m in -3.0f64..3.0, b in -2.0f64..2.0) {
            let pts: Vec<(f64, f64)> = (0..6).map(|i| (i as f64 * 0.4, m * i as f64 * 0.4 + b)).collect();
            let f = linear_fit(&pts).unwrap();
            prop_assert!((f.slope - m).abs() < 1e-10 && (f.intercept - b).abs() < 1e-10);
            prop_assert!(f.residual >= 0.0);
        }
    }
}
