//! Field states seen by an accelerated receiver.
//!
//! An Unruh-mode excitation created by the inertial sender is seen by the
//! receiver (mode `R`) and the partner behind the horizon (mode `Rbar`) as a
//! two-mode squeezed state with `tanh r = exp(−ωπ/a)`. Global phases of the
//! squeezing amplitudes are dropped throughout: they cancel in every density
//! matrix built here, and `r` is taken real and non-negative.
//!
//! Outputs are linear in the sender's input operator, so every encoded state
//! is a [`BranchSum`] over the images of the logical basis states; reduced
//! states are taken from it directly.

use crate::error::{Error, Result};
use crate::fock::{BranchSum, DensityMatrix, Layout, ModeLabel, ModeName, PureState};
use crate::linalg::Matrix;
use crate::C64;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

/// Default per-mode Fock cutoff for noisy modes.
pub const DEFAULT_CUTOFF: usize = 30;

/// Squeezing strength, wedge weights and truncation of the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub r: f64,
    pub q_r: C64,
    pub q_l: C64,
    /// Fock dimension of every receiver-side mode.
    pub cutoff: usize,
}

impl ChannelParams {
    /// Validated parameters; `|q_R|² + |q_L|² = 1` to 1e-12.
    pub fn new(r: f64, q_r: C64, q_l: C64, cutoff: usize) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
        }
        let norm = q_r.norm_sqr() + q_l.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("|q_R|² + |q_L|² = {norm}, expected 1")));
        }
        if cutoff < 2 {
            return Err(Error::InvalidParameter(format!("cutoff {cutoff} must be at least 2")));
        }
        Ok(Self { r, q_r, q_l, cutoff })
    }

    /// Single-wedge parameters, `q_R = 1`.
    pub fn single_wedge(r: f64, cutoff: usize) -> Result<Self> {
        Self::new(r, C64::new(1.0, 0.0), C64::zero(), cutoff)
    }

    /// Real wedge weight `q_R ∈ [0, 1]` with `q_L = √(1 − q_R²)`.
    pub fn real_wedge(r: f64, q_r: f64, cutoff: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&q_r) {
            return Err(Error::InvalidParameter(format!("q_R = {q_r} outside [0, 1]")));
        }
        Self::new(r, C64::new(q_r, 0.0), C64::new((1.0 - q_r * q_r).max(0.0).sqrt(), 0.0), cutoff)
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Whether the excitation maps entirely into the receiver's wedge.
    pub fn is_single_wedge(&self) -> bool {
        self.q_r == C64::new(1.0, 0.0) && self.q_l == C64::zero()
    }
}

/// Single-rail (vacuum vs. one excitation) or dual-rail (one excitation in one of two modes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rail {
    Single,
    Dual,
}

/// What the sender puts into the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payload {
    /// Classical bit: logical 0 with probability `p0`, kept in the sender's register.
    ClassicalBit { p0: f64 },
    /// Qubit `α|0⟩ + β|1⟩`, entangled with the sender's register.
    QuantumQubit { alpha: C64, beta: C64 },
    /// `cos θ|0⟩ + sin θ|1⟩`, entangled with the sender's register.
    AmplitudeParam { theta: f64 },
    /// `(|0⟩ + e^{iNθ}|N⟩)/√2` (single rail) or `(|N,0⟩ + e^{iNθ}|0,N⟩)/√2` (dual rail); no register.
    Noon { n: usize, theta: f64, mode: Rail },
}

/// Rail choice plus payload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encoding {
    pub rail: Rail,
    pub payload: Payload,
}

impl Encoding {
    pub fn new(rail: Rail, payload: Payload) -> Result<Self> {
        let enc = Self { rail, payload };
        enc.validate()?;
        Ok(enc)
    }

    pub fn classical(rail: Rail, p0: f64) -> Result<Self> {
        Self::new(rail, Payload::ClassicalBit { p0 })
    }

    pub fn quantum(rail: Rail, alpha: C64, beta: C64) -> Result<Self> {
        Self::new(rail, Payload::QuantumQubit { alpha, beta })
    }

    /// Quantum payload with real amplitudes `√α², √(1−α²)`.
    pub fn quantum_real(rail: Rail, alpha2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::InvalidDistribution(format!("|α|² = {alpha2} outside [0, 1]")));
        }
        Self::quantum(rail, C64::new(alpha2.sqrt(), 0.0), C64::new((1.0 - alpha2).sqrt(), 0.0))
    }

    pub fn amplitude(rail: Rail, theta: f64) -> Result<Self> {
        Self::new(rail, Payload::AmplitudeParam { theta })
    }

    pub fn noon(rail: Rail, n: usize, theta: f64) -> Result<Self> {
        Self::new(rail, Payload::Noon { n, theta, mode: rail })
    }

    pub fn validate(&self) -> Result<()> {
        match self.payload {
            Payload::ClassicalBit { p0 } => {
                if !(0.0..=1.0).contains(&p0) {
                    return Err(Error::InvalidDistribution(format!("p0 = {p0} outside [0, 1]")));
                }
            }
            Payload::QuantumQubit { alpha, beta } => {
                let n = alpha.norm_sqr() + beta.norm_sqr();
                if (n - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidDistribution(format!("|α|² + |β|² = {n}, expected 1")));
                }
            }
            Payload::AmplitudeParam { theta } => {
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter(format!("θ = {theta}")));
                }
            }
            Payload::Noon { n, theta, mode } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("NOON excitation number must be at least 1".into()));
                }
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter(format!("θ = {theta}")));
                }
                if mode != self.rail {
                    return Err(Error::IncompatibleEncoding(format!(
                        "NOON state prepared for {mode:?} rail sent over {:?} rail",
                        self.rail
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_noon(&self) -> bool {
        matches!(self.payload, Payload::Noon { .. })
    }

    /// Input weights `w_ij` over the two logical branches, and their θ-derivative
    /// for parametrised payloads.
    fn weights(&self) -> (Matrix, Option<Matrix>) {
        let outer = |a: C64, b: C64| Matrix::from_fn(2, 2, |i, j| [a, b][i] * [a, b][j].conj());
        match self.payload {
            Payload::ClassicalBit { p0 } => (Matrix::from_diag(&[p0, 1.0 - p0]), None),
            Payload::QuantumQubit { alpha, beta } => (outer(alpha, beta), None),
            Payload::AmplitudeParam { theta } => {
                let (s, c) = theta.sin_cos();
                let (s2, c2) = (2.0 * theta).sin_cos();
                let d = Matrix::from_fn(2, 2, |i, j| C64::new([[-s2, c2], [c2, s2]][i][j], 0.0));
                (outer(C64::new(c, 0.0), C64::new(s, 0.0)), Some(d))
            }
            Payload::Noon { n, theta, .. } => {
                let nf = n as f64;
                let ph = C64::from_polar(1.0, nf * theta);
                let w = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                    (0, 1) => ph.conj() * 0.5,
                    (1, 0) => ph * 0.5,
                    _ => C64::new(0.5, 0.0),
                });
                let i_n = C64::new(0.0, nf * 0.5);
                let d = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                    (0, 1) => -i_n * ph.conj(),
                    (1, 0) => i_n * ph,
                    _ => C64::zero(),
                });
                (w, Some(d))
            }
        }
    }
}

/// Amplitudes `c_p = tanh^p r / cosh^{N+1} r · √C(p+N, p)` for `p < len`.
pub fn squeezing_amplitudes(n: usize, r: f64, len: usize) -> Vec<f64> {
    let t = r.tanh();
    let mut out = Vec::with_capacity(len);
    let mut c = r.cosh().powi(-(n as i32) - 1);
    for p in 0..len {
        if p > 0 {
            c *= t * (((p + n) as f64) / p as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// Smallest cutoff `K > n` such that the squeezed `|n⟩` loses less than `tol`
/// of its norm when truncated to `K` levels of the receiver's mode.
pub fn squeezed_tail_cutoff(n: usize, r: f64, tol: f64) -> usize {
    let t2 = r.tanh().powi(2);
    if t2 == 0.0 {
        return n + 1;
    }
    let mut c2 = r.cosh().powi(-2 * (n as i32) - 2);
    // the weights rise until p ≈ t²n/(1−t²) and decay geometrically after it
    let mode = t2 * n as f64 / (1.0 - t2);
    let mut kept = 0.0;
    let mut p = 0usize;
    loop {
        kept += c2;
        p += 1;
        // remaining mass 1 − kept; stop once below tol, or once the decaying
        // increments are below rounding and can no longer move `kept`
        if 1.0 - kept < tol || (p as f64 > mode && c2 < tol * 1e-3 && c2 < f64::EPSILON) {
            return n + p;
        }
        c2 *= t2 * ((p + n) as f64) / p as f64;
        if p > 50_000_000 {
            return n + p;
        }
    }
}

/// `Û|N⟩ = Σ_p c_p |N+p⟩_R |p⟩_Rbar`, truncated to `N + p < cutoff`.
pub fn squeeze_fock(n: usize, r: f64, cutoff: usize) -> Result<PureState> {
    if cutoff <= n {
        return Err(Error::InvalidParameter(format!("cutoff {cutoff} cannot hold {n} excitations")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
    }
    let modes = vec![ModeLabel::new(ModeName::R, cutoff), ModeLabel::new(ModeName::Rbar, cutoff)];
    let amps = squeezing_amplitudes(n, r, cutoff - n);
    let t = amps.iter().enumerate().map(|(p, &c)| ((n + p) * cutoff + p, C64::new(c, 0.0))).collect();
    PureState::from_amplitudes(modes, t)
}

/// Image on the receiver's mode of `|ket⟩⟨bra|` (`ket, bra ∈ {0, 1}`) after
/// squeezing and tracing out the partner mode.
pub fn transform_matrix_element(ket: usize, bra: usize, r: f64, cutoff: usize) -> Result<DensityMatrix> {
    if ket > 1 || bra > 1 {
        return Err(Error::InvalidParameter(format!("matrix element |{ket}⟩⟨{bra}| outside the qubit subspace")));
    }
    if cutoff < 2 {
        return Err(Error::InvalidParameter(format!("cutoff {cutoff} must be at least 2")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing r = {r} must be finite and non-negative")));
    }
    let t2 = r.tanh().powi(2);
    let ch = r.cosh();
    let (c2, c3, c4) = (ch.powi(-2), ch.powi(-3), ch.powi(-4));
    let mut trip = Vec::with_capacity(cutoff);
    let mut tn = 1.0;
    for n in 0..cutoff {
        let nf = n as f64;
        match (ket, bra) {
            (0, 0) => trip.push((n, n, C64::new(tn * c2, 0.0))),
            (0, 1) if n + 1 < cutoff => trip.push((n, n + 1, C64::new((nf + 1.0).sqrt() * tn * c3, 0.0))),
            (1, 0) if n + 1 < cutoff => trip.push((n + 1, n, C64::new((nf + 1.0).sqrt() * tn * c3, 0.0))),
            (1, 1) if n + 1 < cutoff => trip.push((n + 1, n + 1, C64::new((nf + 1.0) * tn * c4, 0.0))),
            _ => {}
        }
        tn *= t2;
        if tn == 0.0 {
            break;
        }
    }
    DensityMatrix::from_triplets(vec![ModeLabel::new(ModeName::R, cutoff)], trip)
}

/// Single-mode pieces as `((n_R, n_Rbar), amplitude)` lists.
fn squeezed_vacuum_pairs(r: f64, k: usize) -> Vec<((usize, usize), C64)> {
    squeezing_amplitudes(0, r, k).into_iter().enumerate().map(|(n, c)| ((n, n), C64::new(c, 0.0))).collect()
}

/// One Unruh excitation `(q_R a_R† + q_L a_Rbar†)` on the squeezed vacuum.
fn unruh_excitation_pairs(r: f64, q_r: C64, q_l: C64, k: usize) -> Vec<((usize, usize), C64)> {
    let t = r.tanh();
    let ch2 = r.cosh().powi(-2);
    let mut out = Vec::with_capacity(2 * k);
    let mut tn = 1.0;
    for n in 0..k {
        let amp = tn * ((n + 1) as f64).sqrt() * ch2;
        if n + 1 < k {
            if q_r != C64::zero() {
                out.push(((n + 1, n), q_r * amp));
            }
            if q_l != C64::zero() {
                out.push(((n, n + 1), q_l * amp));
            }
        }
        tn *= t;
        if tn == 0.0 {
            break;
        }
    }
    out
}

fn rail_modes(rail: Rail, with_register: bool, k: usize) -> Vec<ModeLabel> {
    let mut m = Vec::new();
    if with_register {
        m.push(ModeLabel::new(ModeName::A, 2));
    }
    match rail {
        Rail::Single => {
            m.push(ModeLabel::new(ModeName::R, k));
            m.push(ModeLabel::new(ModeName::Rbar, k));
        }
        Rail::Dual => {
            m.push(ModeLabel::new(ModeName::R0, k));
            m.push(ModeLabel::new(ModeName::R1, k));
            m.push(ModeLabel::new(ModeName::Rbar0, k));
            m.push(ModeLabel::new(ModeName::Rbar1, k));
        }
    }
    m
}

/// Assemble a branch from per-rail pair lists (and optional register value).
fn branch(layout: &Layout, reg: Option<usize>, rails: &[&[((usize, usize), C64)]]) -> Result<PureState> {
    let mut amps = Vec::new();
    match rails {
        [one] => {
            for &((a, b), v) in one.iter() {
                let occ: Vec<usize> = reg.into_iter().chain([a, b]).collect();
                if let Some(i) = layout.index(&occ) {
                    amps.push((i, v));
                }
            }
        }
        [r0, r1] => {
            for &((a0, b0), v0) in r0.iter() {
                for &((a1, b1), v1) in r1.iter() {
                    let occ: Vec<usize> = reg.into_iter().chain([a0, a1, b0, b1]).collect();
                    if let Some(i) = layout.index(&occ) {
                        amps.push((i, v0 * v1));
                    }
                }
            }
        }
        _ => unreachable!("one or two rails"),
    }
    PureState::from_amplitudes_in(layout.clone(), amps)
}

/// Full channel output including the partner modes, as a sum over the two
/// logical branches weighted by the sender's input operator.
pub fn field_state(params: &ChannelParams, enc: &Encoding) -> Result<BranchSum> {
    let (w, _) = enc.weights();
    BranchSum::new(field_branches(params, enc)?, w)
}

/// θ-derivative of [`field_state`] for parametrised payloads.
pub fn field_state_derivative(params: &ChannelParams, enc: &Encoding) -> Result<BranchSum> {
    let (_, dw) = enc.weights();
    let dw = dw.ok_or_else(|| Error::IncompatibleEncoding(format!("{:?} does not depend on θ", enc.payload)))?;
    BranchSum::new(field_branches(params, enc)?, dw)
}

fn field_branches(params: &ChannelParams, enc: &Encoding) -> Result<Vec<PureState>> {
    enc.validate()?;
    ChannelParams::new(params.r, params.q_r, params.q_l, params.cutoff)?;
    let (r, k) = (params.r, params.cutoff);
    if let Payload::Noon { n, .. } = enc.payload {
        if !params.is_single_wedge() {
            return Err(Error::IncompatibleEncoding("NOON states are only defined for q_R = 1".into()));
        }
        if k <= n {
            return Err(Error::InvalidParameter(format!("cutoff {k} cannot hold {n} excitations")));
        }
        let layout = Layout::new(rail_modes(enc.rail, false, k))?;
        let sq = |m: usize| -> Vec<((usize, usize), C64)> {
            squeezing_amplitudes(m, r, k - m).into_iter().enumerate().map(|(p, c)| ((m + p, p), C64::new(c, 0.0))).collect()
        };
        let (s0, sn) = (sq(0), sq(n));
        return Ok(match enc.rail {
            Rail::Single => vec![branch(&layout, None, &[&s0])?, branch(&layout, None, &[&sn])?],
            Rail::Dual => vec![branch(&layout, None, &[&sn, &s0])?, branch(&layout, None, &[&s0, &sn])?],
        });
    }
    let layout = Layout::new(rail_modes(enc.rail, true, k))?;
    let vac = squeezed_vacuum_pairs(r, k);
    let exc = unruh_excitation_pairs(r, params.q_r, params.q_l, k);
    Ok(match enc.rail {
        Rail::Single => vec![branch(&layout, Some(0), &[&vac])?, branch(&layout, Some(1), &[&exc])?],
        Rail::Dual => vec![branch(&layout, Some(0), &[&exc, &vac])?, branch(&layout, Some(1), &[&vac, &exc])?],
    })
}

fn antirob_modes(rail: Rail) -> Vec<ModeName> {
    match rail {
        Rail::Single => vec![ModeName::Rbar],
        Rail::Dual => vec![ModeName::Rbar0, ModeName::Rbar1],
    }
}

/// Channel output state. With `keep_antirob = false` the partner modes are
/// traced out; for qubit payloads at `q_R = 1` the closed-form single-wedge
/// construction is used.
pub fn build_channel_state(params: &ChannelParams, enc: &Encoding, keep_antirob: bool) -> Result<DensityMatrix> {
    enc.validate()?;
    if params.is_single_wedge() && !keep_antirob && !enc.is_noon() {
        ChannelParams::new(params.r, params.q_r, params.q_l, params.cutoff)?;
        let (w, _) = enc.weights();
        return single_wedge_state(params.r, enc.rail, &w, params.cutoff);
    }
    let fs = field_state(params, enc)?;
    let discard = if keep_antirob { Vec::new() } else { antirob_modes(enc.rail) };
    fs.reduce(&discard)
}

/// θ-derivative of [`build_channel_state`] for parametrised payloads.
pub fn build_channel_state_derivative(params: &ChannelParams, enc: &Encoding, keep_antirob: bool) -> Result<DensityMatrix> {
    enc.validate()?;
    if params.is_single_wedge() && !keep_antirob && !enc.is_noon() {
        let (_, dw) = enc.weights();
        let dw = dw.ok_or_else(|| Error::IncompatibleEncoding(format!("{:?} does not depend on θ", enc.payload)))?;
        return single_wedge_state(params.r, enc.rail, &dw, params.cutoff);
    }
    let fs = field_state_derivative(params, enc)?;
    let discard = if keep_antirob { Vec::new() } else { antirob_modes(enc.rail) };
    fs.reduce(&discard)
}

/// `Σ_ij w_ij |i⟩⟨j|_A ⊗ Λ(|i_L⟩⟨j_L|)` from the four matrix-element transforms.
fn single_wedge_state(r: f64, rail: Rail, w: &Matrix, k: usize) -> Result<DensityMatrix> {
    let t = |a, b| transform_matrix_element(a, b, r, k);
    let images: [[DensityMatrix; 2]; 2] = match rail {
        Rail::Single => [[t(0, 0)?, t(0, 1)?], [t(1, 0)?, t(1, 1)?]],
        Rail::Dual => {
            let rename = |m: DensityMatrix, name| -> Result<DensityMatrix> {
                DensityMatrix::from_triplets(vec![ModeLabel::new(name, k)], m.entries().to_vec())
            };
            let pair = |a0: usize, b0: usize, a1: usize, b1: usize| -> Result<DensityMatrix> {
                rename(t(a0, b0)?, ModeName::R0)?.tensor(&rename(t(a1, b1)?, ModeName::R1)?)
            };
            // logical 0 = excitation in rail 0, logical 1 = excitation in rail 1
            [[pair(1, 1, 0, 0)?, pair(1, 0, 0, 1)?], [pair(0, 1, 1, 0)?, pair(0, 0, 1, 1)?]]
        }
    };
    let field_modes = images[0][0].modes().to_vec();
    let dim_f = images[0][0].dim();
    let mut modes = vec![ModeLabel::new(ModeName::A, 2)];
    modes.extend(field_modes);
    let mut trip = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let wij = w[(i, j)];
            if wij == C64::zero() {
                continue;
            }
            for &(a, b, v) in images[i][j].entries() {
                trip.push((i * dim_f + a, j * dim_f + b, wij * v));
            }
        }
    }
    DensityMatrix::from_triplets(modes, trip)
}

/// NOON state after the channel on the receiver's modes, and its θ-derivative.
pub fn noon_state(n: usize, rail: Rail, r: f64, theta: f64, cutoff: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let params = ChannelParams::single_wedge(r, cutoff.max(2))?;
    let enc = Encoding::noon(rail, n, theta)?;
    Ok((build_channel_state(&params, &enc, false)?, build_channel_state_derivative(&params, &enc, false)?))
}

/// Vacuum of one frame expressed in another related by `b = α* a + β* a†`:
/// coefficients `v_0 … v_{p_max}` with `v_1 = 0`,
/// `v_{p+2} = −(β*/α*)·√(p+1)/√(p+2)·v_p`, and `v_0 > 0` fixed by unit norm.
pub fn bogoliubov_vacuum_coefficients(alpha: C64, beta: C64, p_max: usize) -> Result<Vec<C64>> {
    if alpha == C64::zero() {
        return Err(Error::InvalidParameter("α = 0 leaves the vacuum recursion undefined".into()));
    }
    let ratio = -(beta.conj() / alpha.conj());
    let mut v = vec![C64::zero(); p_max + 1];
    v[0] = C64::new(1.0, 0.0);
    let mut p = 0;
    while p + 2 <= p_max {
        v[p + 2] = ratio * (((p + 1) as f64) / ((p + 2) as f64)).sqrt() * v[p];
        p += 2;
    }
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    Ok(v)
}
