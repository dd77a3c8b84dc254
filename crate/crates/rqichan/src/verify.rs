//! `verify`: a quick invariant suite over the library, one row per check.

use rqichan_core::channel::{bogoliubov_vacuum_coefficients, build_channel_state, field_state, ChannelParams, Encoding, Rail};
use rqichan_core::estimation::{noon_qfi, qfi_closed_form_amplitude, AmplitudeSetup, NoonConfig};
use rqichan_core::fock::DensityMatrix;
use rqichan_core::infotheory::{closed_form, coherent_informations, subadditivity_check, ClosedForm};
use rqichan_core::optimize::{optimize_capacity_2d, OptimizeConfig};
use rqichan_core::{Result, C64};

use crate::commands::Report;
use crate::config::Truncation;
use crate::error::CliResult;
use crate::eval::{amplitude_qfi_numeric, entropic, entropic_at, Entropic};
use crate::exec::Executor;
use crate::output::{Cell, Table};

type Check = fn() -> Result<Option<String>>;

/// `None` on success, otherwise a description of the violation.
fn expect(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(detail())
    }
}

fn valid_state(rho: &DensityMatrix) -> Result<Option<String>> {
    let min = rho.spectrum()?.into_iter().fold(f64::INFINITY, f64::min);
    let (tr, herm) = (rho.trace(), rho.hermitian_deviation());
    Ok(expect((tr - 1.0).abs() < 1e-6 && herm < 1e-12 && min > -1e-10, || {
        format!("trace {tr}, hermitian deviation {herm:e}, smallest eigenvalue {min:e}")
    }))
}

fn states() -> Result<Option<String>> {
    for rail in [Rail::Single, Rail::Dual] {
        let p = ChannelParams::real_wedge(0.6, 0.8, 24)?;
        for enc in [Encoding::classical(rail, 0.3)?, Encoding::quantum_real(rail, 0.6)?, Encoding::amplitude(rail, 0.4)?] {
            if let Some(v) = valid_state(&build_channel_state(&p, &enc, false)?)? {
                return Ok(Some(format!("{rail:?} {enc:?}: {v}")));
            }
        }
    }
    Ok(None)
}

fn fidelity_squaring() -> Result<Option<String>> {
    for r in [0.5, 1.0, 2.0] {
        let (s, d) = (closed_form(ClosedForm::FidelitySingle, r, 0.5)?, closed_form(ClosedForm::FidelityDual, r, 0.5)?);
        if (d - s * s).abs() > 1e-10 {
            return Ok(Some(format!("r={r}: dual {d} vs single² {}", s * s)));
        }
    }
    Ok(None)
}

fn joint_qfi() -> Result<Option<String>> {
    let closed = qfi_closed_form_amplitude(AmplitudeSetup::DualJoint, 0.9, 0.5)?;
    let num = amplitude_qfi_numeric(AmplitudeSetup::SingleJoint, 0.9, 0.5, &Truncation::default())?.value;
    Ok(expect((closed - 4.0).abs() < 1e-10 && (num - 4.0).abs() < 1e-6, || format!("closed {closed}, numeric {num}")))
}

fn noiseless_limits() -> Result<Option<String>> {
    let r = 1e-6;
    let h = closed_form(ClosedForm::HolevoDualClassical, r, 0.5)?;
    let c = closed_form(ClosedForm::CondEntropySingleQuantum, r, 0.5)?;
    let f = noon_qfi(3, Rail::Single, r, 0.65, &NoonConfig::default())?.value;
    Ok(expect((h - 1.0).abs() < 1e-4 && (c + 1.0).abs() < 1e-4 && (f - 9.0).abs() < 1e-4, || {
        format!("holevo {h}, conditional entropy {c}, NOON(3) {f}")
    }))
}

fn closed_vs_numeric() -> Result<Option<String>> {
    let tr = Truncation::default();
    let num = entropic(Entropic::Holevo, Rail::Single, 1.0, 1.0, 0.5, &tr)?.value;
    let cf = closed_form(ClosedForm::HolevoSingleClassical, 1.0, 0.5)?;
    Ok(expect((num - cf).abs() < 1e-8, || format!("numeric {num} vs closed {cf}")))
}

fn monogamy() -> Result<Option<String>> {
    let p = ChannelParams::real_wedge(1.0, 0.8, 30)?;
    let fs = field_state(&p, &Encoding::quantum_real(Rail::Single, 0.5)?)?;
    let rep = subadditivity_check(&fs)?;
    let (to_rob, to_anti) = coherent_informations(&fs)?;
    Ok(expect(rep.satisfied && rep.sum_conditional.abs() < 1e-6 && to_rob.min(to_anti) <= 1e-4, || {
        format!("sum of conditional entropies {}, coherent informations ({to_rob}, {to_anti})", rep.sum_conditional)
    }))
}

fn wedge_exchange() -> Result<Option<String>> {
    let (q, ql) = (0.4f64, (1.0 - 0.16f64).sqrt());
    let a = entropic_at(Entropic::HolevoAntirob, Rail::Single, 0.8, q, 0.5, 25)?;
    let b = entropic_at(Entropic::Holevo, Rail::Single, 0.8, ql, 0.5, 25)?;
    Ok(expect((a - b).abs() < 1e-8, || format!("{a} vs {b}")))
}

fn bogoliubov() -> Result<Option<String>> {
    let c = bogoliubov_vacuum_coefficients(C64::new(1.2f64.cosh(), 0.0), C64::new(1.2f64.sinh(), 0.0), 12)?;
    let odd_zero = c.iter().skip(1).step_by(2).all(|z| *z == C64::new(0.0, 0.0));
    let vac = bogoliubov_vacuum_coefficients(C64::new(1.0, 0.0), C64::new(0.0, 0.0), 6)?;
    let unchanged = vac[0] == C64::new(1.0, 0.0) && vac[1..].iter().all(|z| z.norm() == 0.0);
    Ok(expect(odd_zero && unchanged, || format!("odd coefficients zero: {odd_zero}, β=0 unchanged: {unchanged}")))
}

fn optimizer() -> Result<Option<String>> {
    let o = optimize_capacity_2d(0.5, &OptimizeConfig::default())?;
    Ok(expect((o.q_r - 1.0).abs() <= 0.005 && o.value >= o.coarse_value, || format!("{o:?}")))
}

const CHECKS: [(&str, Check); 9] = [
    ("channel_states_valid", states),
    ("fidelity_squaring_law", fidelity_squaring),
    ("joint_amplitude_qfi", joint_qfi),
    ("noiseless_limits", noiseless_limits),
    ("closed_form_vs_numeric", closed_vs_numeric),
    ("monogamy_subadditivity", monogamy),
    ("wedge_exchange_symmetry", wedge_exchange),
    ("bogoliubov_vacuum", bogoliubov),
    ("optimizer_single_wedge", optimizer),
];

pub fn run(exec: &Executor) -> CliResult<Report> {
    let results = exec.map(&CHECKS, |(_, check)| check());
    let mut table = Table::new(&["suite", "status", "detail"]);
    table.comment("invariant suite");
    let mut failed = 0;
    for ((name, _), res) in CHECKS.iter().zip(results) {
        let (status, detail) = match res {
            Ok(None) => ("passed", Cell::Empty),
            Ok(Some(d)) => ("failed", Cell::Text(d)),
            Err(e) => ("failed", Cell::Text(e.to_string())),
        };
        if status == "failed" {
            failed += 1;
        }
        table.push(vec![(*name).into(), status.into(), detail]);
    }
    table.comment(format!("{} of {} suites passed", CHECKS.len() - failed, CHECKS.len()));
    Ok(Report { table, exit_code: if failed == 0 { 0 } else { 3 } })
}
