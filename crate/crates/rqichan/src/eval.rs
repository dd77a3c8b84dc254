//! Truncated-state evaluators with adaptive cutoffs, and the closed-form
//! counterparts where they exist (single-wedge mapping only).

use rqichan_core::channel::{build_channel_state, field_state, squeezed_tail_cutoff, ChannelParams, Encoding, Rail};
use rqichan_core::estimation::{amplitude_state, qfi, qfi_closed_form_amplitude_with, AmplitudeSetup, QfiConfig};
use rqichan_core::fock::{DensityMatrix, Marginals, ModeName};
use rqichan_core::infotheory::{
    closed_form_with, entropy_report, fidelity, subadditivity_check, von_neumann_entropy, ClosedForm,
};
use rqichan_core::numerics::ConvergenceConfig;
use rqichan_core::optimize::{adaptive_truncation, Evaluation};
use rqichan_core::{Error, Result};

use crate::config::Truncation;

/// Entropic quantities of the channel output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entropic {
    /// `I(A:Rob)` of the classical ensemble (bits).
    Holevo,
    /// `I(A:AntiRob)` of the classical ensemble.
    HolevoAntirob,
    /// `−S(A|Rob)` of the quantum payload.
    CoherentRob,
    /// `−S(A|AntiRob)` of the quantum payload.
    CoherentAntirob,
    /// `S(A|Rob) + S(A|AntiRob)` of the quantum payload.
    ConditionalSum,
}

impl Entropic {
    pub const ALL: [Entropic; 5] =
        [Entropic::Holevo, Entropic::HolevoAntirob, Entropic::CoherentRob, Entropic::CoherentAntirob, Entropic::ConditionalSum];

    pub fn as_str(self) -> &'static str {
        match self {
            Entropic::Holevo => "holevo",
            Entropic::HolevoAntirob => "holevo_antirob",
            Entropic::CoherentRob => "coherent_rob",
            Entropic::CoherentAntirob => "coherent_antirob",
            Entropic::ConditionalSum => "conditional_sum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.as_str() == s)
    }

    fn classical(self) -> bool {
        matches!(self, Entropic::Holevo | Entropic::HolevoAntirob)
    }
}

fn names(state: &impl Marginals, pick: fn(ModeName) -> bool) -> Vec<ModeName> {
    state.mode_names().into_iter().filter(|&m| pick(m)).collect()
}

fn joint(a: &[ModeName], b: &[ModeName]) -> Vec<ModeName> {
    a.iter().chain(b).copied().collect()
}

/// Value of `kind` at a fixed per-mode cutoff.
pub fn entropic_at(kind: Entropic, rail: Rail, r: f64, q_r: f64, alpha2: f64, cutoff: usize) -> Result<f64> {
    let params = ChannelParams::real_wedge(r, q_r, cutoff)?;
    let enc = if kind.classical() { Encoding::classical(rail, alpha2)? } else { Encoding::quantum_real(rail, alpha2)? };
    let s = |rho: &dyn Marginals, keep: &[ModeName]| -> Result<f64> { von_neumann_entropy(&rho.marginal(keep)?) };
    match kind {
        Entropic::Holevo | Entropic::CoherentRob => {
            let rho = build_channel_state(&params, &enc, false)?;
            let rep = entropy_report(&rho, &names(&rho, ModeName::is_alice), &names(&rho, ModeName::is_rob))?;
            Ok(if kind == Entropic::Holevo { rep.mutual } else { rep.coherent_a_to_b })
        }
        Entropic::HolevoAntirob | Entropic::CoherentAntirob => {
            let fs = field_state(&params, &enc)?;
            let (a, rb) = (names(&fs, ModeName::is_alice), names(&fs, ModeName::is_antirob));
            let s_rb = s(&fs, &rb)?;
            let s_arb = s(&fs, &joint(&a, &rb))?;
            Ok(if kind == Entropic::HolevoAntirob { s(&fs, &a)? + s_rb - s_arb } else { s_rb - s_arb })
        }
        Entropic::ConditionalSum => Ok(subadditivity_check(&field_state(&params, &enc)?)?.sum_conditional),
    }
}

/// Starting cutoff: the receiver's mode keeps all but `tail_tol` of the
/// squeezed single excitation.
pub fn start_cutoff(r: f64, tr: &Truncation) -> usize {
    squeezed_tail_cutoff(1, r, tr.tail_tol).max(2)
}

fn truncated<F: FnMut(usize) -> Result<f64>>(f: F, k0: usize, tr: &Truncation) -> Result<Evaluation> {
    if k0 >= tr.k_max {
        return Err(Error::TruncationNotConverged { value: f64::NAN, cutoff: k0 });
    }
    let (value, cutoff) = adaptive_truncation(f, k0, tr.eps, tr.k_max)?;
    Ok(Evaluation::exact(value, cutoff))
}

/// `kind` with the cutoff raised until it settles.
pub fn entropic(kind: Entropic, rail: Rail, r: f64, q_r: f64, alpha2: f64, tr: &Truncation) -> Result<Evaluation> {
    truncated(|k| entropic_at(kind, rail, r, q_r, alpha2, k), start_cutoff(r, tr), tr)
}

/// Closed-form counterpart of `kind` (single-wedge mapping), if one exists.
pub fn entropic_closed(kind: Entropic, rail: Rail, r: f64, alpha2: f64, cfg: &ConvergenceConfig) -> Option<Result<f64>> {
    let (form, sign) = match (kind, rail) {
        (Entropic::Holevo, Rail::Single) => (ClosedForm::HolevoSingleClassical, 1.0),
        (Entropic::Holevo, Rail::Dual) => (ClosedForm::HolevoDualClassical, 1.0),
        (Entropic::CoherentRob, Rail::Single) => (ClosedForm::CondEntropySingleQuantum, -1.0),
        (Entropic::CoherentRob, Rail::Dual) => (ClosedForm::CondEntropyDualQuantum, -1.0),
        _ => return None,
    };
    Some(closed_form_checked(form, r, alpha2, cfg).map(|v| sign * v))
}

/// Whether the closed form of `form` holds at `alpha2`: the dual-rail
/// series are derived for the balanced input only.
pub fn closed_form_applies(form: ClosedForm, alpha2: f64) -> bool {
    match form {
        ClosedForm::HolevoDualClassical | ClosedForm::CondEntropyDualQuantum => alpha2 == 0.5,
        _ => true,
    }
}

/// [`closed_form_with`], rejecting inputs outside the form's validity.
pub fn closed_form_checked(form: ClosedForm, r: f64, alpha2: f64, cfg: &ConvergenceConfig) -> Result<f64> {
    if !closed_form_applies(form, alpha2) {
        return Err(Error::InvalidParameter(format!("{} holds for alpha2 = 0.5 only (got {alpha2})", form.as_str())));
    }
    closed_form_with(form, r, alpha2, cfg)?.into_result()
}

/// Whether `kind` has a closed form for `rail` at `(q_r, alpha2)`.
pub fn entropic_closed_applies(kind: Entropic, rail: Rail, q_r: f64, alpha2: f64) -> bool {
    let balanced = rail == Rail::Single || alpha2 == 0.5;
    q_r == 1.0 && balanced && matches!(kind, Entropic::Holevo | Entropic::CoherentRob)
}

/// Receiver states for the logical inputs 0 and 1.
pub fn receiver_pair(rail: Rail, r: f64, q_r: f64, cutoff: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let params = ChannelParams::real_wedge(r, q_r, cutoff)?;
    let recv = |p0: f64| -> Result<DensityMatrix> {
        let rho = build_channel_state(&params, &Encoding::classical(rail, p0)?, false)?;
        rho.marginal(&names(&rho, ModeName::is_rob))
    };
    Ok((recv(1.0)?, recv(0.0)?))
}

/// Uhlmann fidelity of the two receiver states, adaptively truncated.
pub fn fidelity_numeric(rail: Rail, r: f64, q_r: f64, tr: &Truncation) -> Result<Evaluation> {
    truncated(
        |k| {
            let (a, b) = receiver_pair(rail, r, q_r, k)?;
            fidelity(&a, &b)
        },
        start_cutoff(r, tr),
        tr,
    )
}

pub fn fidelity_closed(rail: Rail, r: f64, cfg: &ConvergenceConfig) -> Result<f64> {
    let form = match rail {
        Rail::Single => ClosedForm::FidelitySingle,
        Rail::Dual => ClosedForm::FidelityDual,
    };
    closed_form_with(form, r, 0.5, cfg)?.into_result()
}

/// Amplitude-parameter Fisher information from truncated states.
pub fn amplitude_qfi_numeric(setup: AmplitudeSetup, r: f64, theta: f64, tr: &Truncation) -> Result<Evaluation> {
    let cfg = QfiConfig::default();
    truncated(|k| Ok(qfi(&amplitude_state(setup, r, theta, k)?, &cfg)?.value), start_cutoff(r, tr), tr)
}

pub fn amplitude_qfi_closed(setup: AmplitudeSetup, r: f64, theta: f64, cfg: &ConvergenceConfig) -> Result<f64> {
    qfi_closed_form_amplitude_with(setup, r, theta, cfg)
}
