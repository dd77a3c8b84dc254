//! Quantum Fisher information and the Cramér–Rao bound.
//!
//! The general path diagonalises `ρ` block by block, rotates `ρ′` into the
//! eigenbasis, applies the lowering superoperator and returns
//! `F = Tr[ρ′ L_ρ(ρ′)] = Σ_jk 2|B_jk|²/(λ_j + λ_k)`. Pairs whose eigenvalue sum
//! falls below [`SUPPORT_FLOOR`] are dropped (projection onto the support).

use crate::channel::{build_channel_state, build_channel_state_derivative, noon_state, squeezed_tail_cutoff};
use crate::channel::{ChannelParams, Encoding, Rail};
use crate::error::{domain, Error, Result};
use crate::fock::{BlockVectors, DensityMatrix, JointBlocks, ModeName};
use crate::linalg::Matrix;
use crate::numerics::{hypergeometric_pfq, lerch_phi_with, sum_series, ConvergenceConfig};
use crate::optimize::adaptive_truncation;
use crate::C64;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec;

#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

/// Eigenvalue pairs with `λ_j + λ_k` below this are projected out.
pub const SUPPORT_FLOOR: f64 = 1e-12;
/// Central finite-difference step used when no analytic derivative is given.
pub const FD_STEP: f64 = 1e-5;

/// `2B_jk/(λ_j + λ_k)`, zero where `λ_j + λ_k < SUPPORT_FLOOR`.
pub fn lowering_superoperator(eigs: &[f64], b: &Matrix) -> Result<Matrix> {
    if b.rows() != eigs.len() || b.cols() != eigs.len() {
        return Err(Error::DimensionMismatch(b.rows(), eigs.len()));
    }
    Ok(Matrix::from_fn(eigs.len(), eigs.len(), |j, k| {
        let s = eigs[j] + eigs[k];
        if s < SUPPORT_FLOOR {
            C64::zero()
        } else {
            b[(j, k)] * (2.0 / s)
        }
    }))
}

/// `(λ_j + λ_k) B_jk / 2`, the inverse of the lowering superoperator on the support.
pub fn raising_superoperator(eigs: &[f64], b: &Matrix) -> Result<Matrix> {
    if b.rows() != eigs.len() || b.cols() != eigs.len() {
        return Err(Error::DimensionMismatch(b.rows(), eigs.len()));
    }
    Ok(Matrix::from_fn(eigs.len(), eigs.len(), |j, k| b[(j, k)] * (0.5 * (eigs[j] + eigs[k]))))
}

type Builder = Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>;

/// A one-parameter family of states `ρ(θ)` evaluated at `theta`.
pub struct ParametrizedState {
    builder: Builder,
    derivative: Option<Builder>,
    pub theta: f64,
}

impl ParametrizedState {
    pub fn new<F>(builder: F, theta: f64) -> Self
    where
        F: Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
    {
        Self { builder: Box::new(builder), derivative: None, theta }
    }

    /// Attach the analytic derivative `dρ/dθ`.
    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
    {
        self.derivative = Some(Box::new(derivative));
        self
    }

    /// Drop the analytic derivative, forcing finite differences.
    pub fn without_derivative(mut self) -> Self {
        self.derivative = None;
        self
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        (self.builder)(self.theta)
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }
}

impl core::fmt::Debug for ParametrizedState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ParametrizedState").field("theta", &self.theta).field("analytic", &self.has_derivative()).finish()
    }
}

/// Which evaluation route produced a Fisher value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisherPath {
    Diagonal,
    General,
}

impl FisherPath {
    pub fn as_str(self) -> &'static str {
        match self {
            FisherPath::Diagonal => "diagonal",
            FisherPath::General => "general",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherResult {
    pub value: f64,
    pub path: FisherPath,
    /// Largest per-mode Fock dimension of the evaluated state.
    pub cutoff_used: usize,
    /// Finite-difference step, when no analytic derivative was available.
    pub fd_step: Option<f64>,
}

/// Options of [`qfi`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiConfig {
    /// Off-diagonal mass below which the diagonal formula is used.
    pub diagonal_tol: f64,
    /// Step of the central finite difference fallback.
    pub fd_step: f64,
}

impl Default for QfiConfig {
    fn default() -> Self {
        Self { diagonal_tol: 1e-12, fd_step: FD_STEP }
    }
}

fn off_diagonal_mass(m: &DensityMatrix) -> f64 {
    m.entries().iter().filter(|e| e.0 != e.1).map(|e| e.2.norm()).sum()
}

/// Quantum Fisher information of `state` at its `theta`.
pub fn qfi(state: &ParametrizedState, cfg: &QfiConfig) -> Result<FisherResult> {
    let rho = state.state()?;
    let (drho, fd_step) = match &state.derivative {
        Some(d) => (d(state.theta)?, None),
        None => {
            let h = cfg.fd_step;
            let plus = (state.builder)(state.theta + h)?;
            let minus = (state.builder)(state.theta - h)?;
            (DensityMatrix::linear_combination(&[(0.5 / h, &plus), (-0.5 / h, &minus)])?, Some(h))
        }
    };
    let mut res = qfi_of(&rho, &drho, cfg)?;
    res.fd_step = fd_step;
    Ok(res)
}

/// Fisher information of `ρ` with derivative `ρ′`.
pub fn qfi_of(rho: &DensityMatrix, drho: &DensityMatrix, cfg: &QfiConfig) -> Result<FisherResult> {
    rho.same_layout(drho)?;
    rho.check_hermitian()?;
    drho.check_hermitian()?;
    let cutoff_used = rho.modes().iter().map(|m| m.cutoff).max().unwrap_or(1);
    if off_diagonal_mass(rho) < cfg.diagonal_tol && off_diagonal_mass(drho) < cfg.diagonal_tol {
        let mut f = 0.0;
        for &(i, j, d) in drho.entries() {
            if i != j {
                continue;
            }
            let l = rho.get(i, i).re;
            if 2.0 * l >= SUPPORT_FLOOR {
                f += d.re * d.re / l;
            }
        }
        return Ok(FisherResult { value: f.max(0.0), path: FisherPath::Diagonal, cutoff_used, fd_step: None });
    }
    let jb = JointBlocks::new(&[rho, drho])?;
    let mut f = 0.0;
    for b in 0..jb.len() {
        if jb.entries(b, 1).is_empty() {
            continue;
        }
        let eig = jb.eigen(b, 0, true)?;
        f += match eig.vectors.as_ref().expect("vectors requested") {
            BlockVectors::Tridiagonal { phase, z } => {
                let n = phase.len();
                // X = P† ρ′ P, then B = Zᵀ X Z with Z real
                let mut y_re = vec![0.0; n * n];
                let mut y_im = vec![0.0; n * n];
                for &(i, j, v) in jb.entries(b, 1) {
                    let x = phase[i].conj() * v * phase[j];
                    for k in 0..n {
                        let zjk = z.get(j, k);
                        y_re[k * n + i] += x.re * zjk;
                        y_im[k * n + i] += x.im * zjk;
                    }
                }
                let mut acc = 0.0;
                for k in 0..n {
                    let zk = z.col(k);
                    for l in k..n {
                        let s = eig.values[k] + eig.values[l];
                        if s < SUPPORT_FLOOR {
                            continue;
                        }
                        let (yr, yi) = (&y_re[l * n..(l + 1) * n], &y_im[l * n..(l + 1) * n]);
                        let re: f64 = zk.iter().zip(yr).map(|(a, b)| a * b).sum();
                        let im: f64 = zk.iter().zip(yi).map(|(a, b)| a * b).sum();
                        let w = if k == l { 1.0 } else { 2.0 };
                        acc += w * 2.0 * (re * re + im * im) / s;
                    }
                }
                acc
            }
            BlockVectors::Dense(v) => {
                let b_mat = v.adjoint().matmul(&jb.dense(b, 1))?.matmul(v)?;
                let low = lowering_superoperator(&eig.values, &b_mat)?;
                // Tr[B·L(B)]
                let n = b_mat.rows();
                let mut acc = C64::zero();
                for j in 0..n {
                    for k in 0..n {
                        acc += b_mat[(j, k)] * low[(k, j)];
                    }
                }
                acc.re
            }
        };
    }
    Ok(FisherResult { value: f.max(0.0), path: FisherPath::General, cutoff_used, fd_step: None })
}

/// `1/(n·F)`; infinite for `F ≤ 0` (no information, unbounded variance).
pub fn cramer_rao_bound(fisher: f64, n_measurements: usize) -> Result<f64> {
    if n_measurements == 0 {
        return Err(Error::InvalidParameter("at least one measurement is required".into()));
    }
    if !fisher.is_finite() || fisher.is_nan() {
        return Err(Error::InvalidParameter(format!("Fisher information {fisher}")));
    }
    if fisher <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (n_measurements as f64 * fisher))
}

/// Measurement setups for estimating the amplitude angle θ of
/// `cos θ|0⟩ + sin θ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplitudeSetup {
    /// Receiver alone, single rail.
    SingleRob,
    /// Receiver alone, dual rail.
    DualRob,
    /// Sender and receiver jointly, single rail.
    SingleJoint,
    /// Sender and receiver jointly, dual rail.
    DualJoint,
    /// Classical bit with `p0 = cos²θ`, measured jointly (single rail).
    ClassicalJoint,
}

impl AmplitudeSetup {
    pub const ALL: [AmplitudeSetup; 5] = [
        AmplitudeSetup::SingleRob,
        AmplitudeSetup::DualRob,
        AmplitudeSetup::SingleJoint,
        AmplitudeSetup::DualJoint,
        AmplitudeSetup::ClassicalJoint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AmplitudeSetup::SingleRob => "single_rob",
            AmplitudeSetup::DualRob => "dual_rob",
            AmplitudeSetup::SingleJoint => "single_joint",
            AmplitudeSetup::DualJoint => "dual_joint",
            AmplitudeSetup::ClassicalJoint => "classical_joint",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.as_str() == s)
    }

    pub fn rail(self) -> Rail {
        match self {
            AmplitudeSetup::DualRob | AmplitudeSetup::DualJoint => Rail::Dual,
            _ => Rail::Single,
        }
    }

    fn receiver_only(self) -> bool {
        matches!(self, AmplitudeSetup::SingleRob | AmplitudeSetup::DualRob)
    }
}

/// The channel output of `setup` as a function of θ, with analytic derivative,
/// at single-wedge squeezing `r` and per-mode `cutoff`.
pub fn amplitude_state(setup: AmplitudeSetup, r: f64, theta: f64, cutoff: usize) -> Result<ParametrizedState> {
    let params = ChannelParams::single_wedge(r, cutoff)?;
    let rail = setup.rail();
    if setup == AmplitudeSetup::ClassicalJoint {
        let e0 = build_channel_state(&params, &Encoding::classical(rail, 1.0)?, false)?;
        let e1 = build_channel_state(&params, &Encoding::classical(rail, 0.0)?, false)?;
        let (a0, a1) = (e0.clone(), e1.clone());
        let builder = move |th: f64| {
            let c2 = th.cos().powi(2);
            DensityMatrix::linear_combination(&[(c2, &e0), (1.0 - c2, &e1)])
        };
        let derivative = move |th: f64| {
            let s2 = (2.0 * th).sin();
            DensityMatrix::linear_combination(&[(-s2, &a0), (s2, &a1)])
        };
        return Ok(ParametrizedState::new(builder, theta).with_derivative(derivative));
    }
    let solo = setup.receiver_only();
    let finish = move |rho: DensityMatrix| if solo { rho.partial_trace(&[ModeName::A]) } else { Ok(rho) };
    let builder = move |th: f64| finish(build_channel_state(&params, &Encoding::amplitude(rail, th)?, false)?);
    let derivative = move |th: f64| finish(build_channel_state_derivative(&params, &Encoding::amplitude(rail, th)?, false)?);
    Ok(ParametrizedState::new(builder, theta).with_derivative(derivative))
}

fn at_quarter_turn(theta: f64) -> bool {
    let (s, c) = theta.sin_cos();
    s.abs() < 1e-12 || c.abs() < 1e-12
}

/// Closed-form amplitude Fisher information. Joint setups are exactly 4; the
/// receiver-only setups are evaluated through generalised hypergeometric and
/// Lerch series (the dual rail with an outer convergence-tested sum), and are
/// undefined at θ a multiple of π/2.
pub fn qfi_closed_form_amplitude(setup: AmplitudeSetup, r: f64, theta: f64) -> Result<f64> {
    qfi_closed_form_amplitude_with(setup, r, theta, &ConvergenceConfig::default().with_max_terms(10_000_000))
}

pub fn qfi_closed_form_amplitude_with(setup: AmplitudeSetup, r: f64, theta: f64, cfg: &ConvergenceConfig) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
    }
    if !setup.receiver_only() {
        return Ok(4.0);
    }
    if at_quarter_turn(theta) {
        return Err(domain("qfi_closed_form_amplitude", format!("θ = {theta} is a multiple of π/2")));
    }
    if r == 0.0 {
        return Ok(4.0);
    }
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let z = r.tanh().powi(2);
    let sech2 = r.cosh().powi(-2);
    let csch2 = r.sinh().powi(-2);
    match setup {
        AmplitudeSetup::SingleRob => {
            let cc = c2 / s2 * r.sinh().powi(2);
            let a = 4.0 * c2 / (csch2 * s2 + c2);
            let f32 = hypergeometric_pfq(&[2.0, 2.0, cc + 1.0], &[1.0, cc + 2.0], z, cfg)?.into_result()?;
            let f21 = hypergeometric_pfq(&[2.0, cc + 1.0], &[cc + 2.0], z, cfg)?.into_result()?;
            let b = sech2 * sech2 * s2 * (csch2 * f32 - 2.0 * f21);
            let d = lerch_phi_with(z, 1.0, cc, cfg)?.into_result()? * (z * c2 + sech2 * s2);
            Ok(a * (b + d))
        }
        AmplitudeSetup::DualRob => {
            let tan2 = s2 / c2;
            let sin2t = (2.0 * theta).sin().powi(2);
            let mut err = None;
            let mut zn = 1.0;
            let res = sum_series(
                |n| {
                    let nf = n as f64;
                    let cc = nf * tan2;
                    let pre = -sech2 * sech2 * zn / (c2 + nf * s2);
                    zn *= z;
                    let term = (|| -> Result<f64> {
                        let t1 =
                            -hypergeometric_pfq(&[2.0, 2.0, 1.0 + cc], &[1.0, 2.0 + cc], z, cfg)?.into_result()? * sech2 * sin2t;
                        let t2 = if n == 0 {
                            0.0
                        } else {
                            let h1 = hypergeometric_pfq(&[1.0, cc], &[1.0 + cc], z, cfg)?.into_result()?;
                            let h2 = hypergeometric_pfq(&[2.0, 1.0 + cc], &[2.0 + cc], z, cfg)?.into_result()?;
                            2.0 * nf * (-2.0 * h1 * c2 * csch2 * (c2 + nf * s2) + h2 * sech2 * sin2t)
                        };
                        Ok(pre * (t1 + t2))
                    })();
                    term.unwrap_or_else(|e| {
                        err.get_or_insert(e);
                        f64::NAN
                    })
                },
                cfg,
            );
            if let Some(e) = err {
                return Err(e);
            }
            res.into_result()
        }
        _ => unreachable!("joint setups handled above"),
    }
}

/// Options of the NOON pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonConfig {
    /// Relative change between cutoffs `k` and `k+1` accepted as converged.
    pub eps: f64,
    /// Norm lost by the initial cutoff guess.
    pub tail_tol: f64,
    /// Largest per-mode cutoff tried.
    pub k_max: usize,
    pub qfi: QfiConfig,
}

impl Default for NoonConfig {
    fn default() -> Self {
        Self { eps: 1e-8, tail_tol: 1e-12, k_max: 20_000, qfi: QfiConfig::default() }
    }
}

/// Fisher information of the NOON-state channel output at one cutoff.
pub fn noon_qfi_at_cutoff(n: usize, rail: Rail, r: f64, theta: f64, cutoff: usize, cfg: &QfiConfig) -> Result<FisherResult> {
    let (rho, drho) = noon_state(n, rail, r, theta, cutoff)?;
    qfi_of(&rho, &drho, cfg)
}

/// Fisher information of the NOON state sent through the channel, with the
/// cutoff raised one level at a time until successive values agree.
pub fn noon_qfi(n: usize, rail: Rail, r: f64, theta: f64, cfg: &NoonConfig) -> Result<FisherResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("NOON excitation number must be at least 1".into()));
    }
    let k0 = squeezed_tail_cutoff(n, r, cfg.tail_tol).max(n + 1);
    let mut last = None;
    let (value, cutoff) = adaptive_truncation(
        |k| {
            let f = noon_qfi_at_cutoff(n, rail, r, theta, k, &cfg.qfi)?;
            last = Some(f);
            Ok(f.value)
        },
        k0,
        cfg.eps,
        cfg.k_max.max(k0 + 1),
    )?;
    let path = last.map_or(FisherPath::General, |f| f.path);
    Ok(FisherResult { value, path, cutoff_used: cutoff, fd_step: None })
}
