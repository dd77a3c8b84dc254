//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//!
//! Criterion 10 (the NOON decay-slope fit) takes minutes and only runs with
//! `RQICHAN_ACCEPTANCE_HEAVY=1`; its single-vs-dual side assertion always runs.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::process::Command;
use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use rqichan::config::Truncation;
use rqichan::eval::{amplitude_qfi_numeric, entropic, entropic_at, fidelity_numeric, Entropic};
use rqichan_core::channel::{bogoliubov_vacuum_coefficients, field_state, squeezed_tail_cutoff, ChannelParams, Encoding, Rail};
use rqichan_core::estimation::{noon_qfi, noon_qfi_at_cutoff, qfi_closed_form_amplitude, AmplitudeSetup, NoonConfig};
use rqichan_core::infotheory::{closed_form, coherent_informations, subadditivity_check, ClosedForm};
use rqichan_core::optimize::{linear_fit, optimize_capacity_2d, OptimizeConfig};
use rqichan_core::C64;

type Outcome = Result<String, String>;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn tr(tail_tol: f64) -> Truncation {
    Truncation { tail_tol, ..Truncation::default() }
}

/// Joint-measurement amplitude QFI is 4 for every r and θ.
fn c1_joint_qfi() -> Outcome {
    let rs = [0.0, 0.5, 1.0, 1.5, 2.0];
    let thetas: Vec<f64> = (1..=5).map(|i| i as f64 * FRAC_PI_2 / 6.0).collect();
    let (mut worst_closed, mut worst_numeric) = (0.0f64, 0.0f64);
    for &r in &rs {
        for &th in &thetas {
            for setup in [AmplitudeSetup::SingleJoint, AmplitudeSetup::DualJoint] {
                let c = qfi_closed_form_amplitude(setup, r, th).map_err(err)?;
                worst_closed = worst_closed.max((c - 4.0).abs());
                let n = amplitude_qfi_numeric(setup, r, th, &tr(1e-8)).map_err(err)?.value;
                worst_numeric = worst_numeric.max((n - 4.0).abs());
            }
        }
    }
    check(
        worst_closed <= 1e-10 && worst_numeric <= 1e-3,
        format!("max |F−4|: closed {worst_closed:.1e}, numeric {worst_numeric:.1e} over 5 r × 5 θ × 2 rails"),
    )
}

/// Dual-rail fidelity is the square of the single-rail one; closed forms
/// agree with Uhlmann fidelity of truncated states.
fn c2_fidelity_squaring() -> Outcome {
    let (mut worst_sq, mut worst_num) = (0.0f64, 0.0f64);
    for i in 1..=15 {
        let r = 0.2 * i as f64;
        let s = closed_form(ClosedForm::FidelitySingle, r, 0.5).map_err(err)?;
        let d = closed_form(ClosedForm::FidelityDual, r, 0.5).map_err(err)?;
        worst_sq = worst_sq.max((d - s * s).abs());
        let ns = fidelity_numeric(Rail::Single, r, 1.0, &tr(1e-10)).map_err(err)?.value;
        worst_num = worst_num.max((ns - s).abs());
        // the dual-rail receiver space grows as K²; sample it on every third point
        if i % 3 == 0 {
            let nd = fidelity_numeric(Rail::Dual, r, 1.0, &tr(1e-10)).map_err(err)?.value;
            worst_num = worst_num.max((nd - d).abs());
        }
    }
    check(
        worst_sq <= 1e-10 && worst_num <= 1e-4,
        format!("max |F_d − F_s²| {worst_sq:.1e}; max |closed − numeric| {worst_num:.1e} on r = 0.2..3.0"),
    )
}

/// Noiseless limits at r = 1e-6.
fn c3_noiseless() -> Outcome {
    let r = 1e-6;
    let mut worst = 0.0f64;
    for (form, target) in [
        (ClosedForm::HolevoSingleClassical, 1.0),
        (ClosedForm::HolevoDualClassical, 1.0),
        (ClosedForm::CondEntropySingleQuantum, -1.0),
        (ClosedForm::CondEntropyDualQuantum, -1.0),
    ] {
        worst = worst.max((closed_form(form, r, 0.5).map_err(err)? - target).abs());
    }
    for rail in [Rail::Single, Rail::Dual] {
        let h = entropic(Entropic::Holevo, rail, r, 1.0, 0.5, &Truncation::default()).map_err(err)?.value;
        let c = entropic(Entropic::CoherentRob, rail, r, 1.0, 0.5, &Truncation::default()).map_err(err)?.value;
        worst = worst.max((h - 1.0).abs()).max((c - 1.0).abs());
    }
    let mut worst_noon = 0.0f64;
    for rail in [Rail::Single, Rail::Dual] {
        for n in [1usize, 2, 3, 5] {
            let f = noon_qfi(n, rail, r, 0.65, &NoonConfig::default()).map_err(err)?.value;
            worst_noon = worst_noon.max((f - (n * n) as f64).abs());
        }
    }
    check(worst <= 1e-4 && worst_noon <= 1e-4, format!("max deviation: entropic {worst:.1e}, NOON |F − N²| {worst_noon:.1e}"))
}

/// The four entropic series agree with entropy reports on truncated states.
fn c4_closed_vs_numeric() -> Outcome {
    let mut worst = (0.0f64, String::new());
    for r in [0.5, 1.0, 1.5, 2.0] {
        for (form, kind, rail, sign) in [
            (ClosedForm::HolevoSingleClassical, Entropic::Holevo, Rail::Single, 1.0),
            (ClosedForm::HolevoDualClassical, Entropic::Holevo, Rail::Dual, 1.0),
            (ClosedForm::CondEntropySingleQuantum, Entropic::CoherentRob, Rail::Single, -1.0),
            (ClosedForm::CondEntropyDualQuantum, Entropic::CoherentRob, Rail::Dual, -1.0),
        ] {
            let cf = closed_form(form, r, 0.5).map_err(err)?;
            let num = sign * entropic(kind, rail, r, 1.0, 0.5, &tr(1e-10)).map_err(err)?.value;
            let d = (cf - num).abs();
            if d >= worst.0 {
                worst = (d, format!("{} at r={r}", form.as_str()));
            }
        }
    }
    check(worst.0 <= 1e-3, format!("max |closed − numeric| {:.1e} ({})", worst.0, worst.1))
}

/// Classical capacity survives strong acceleration, quantum capacity decays
/// exponentially.
fn c5_asymptotic_split() -> Outcome {
    let h = closed_form(ClosedForm::HolevoDualClassical, 5.0, 0.5).map_err(err)?;
    let coh = -closed_form(ClosedForm::CondEntropyDualQuantum, 5.0, 0.5).map_err(err)?;
    let mut pts = Vec::new();
    for i in 0..=8 {
        let r = 2.0 + 0.25 * i as f64;
        let c = -closed_form(ClosedForm::CondEntropyDualQuantum, r, 0.5).map_err(err)?;
        if !(c > 0.0) {
            return Err(format!("coherent information {c} at r={r} is not positive"));
        }
        pts.push((r, c.ln()));
    }
    let gamma = -linear_fit(&pts).map_err(err)?.slope;
    check(
        h > 0.1 && coh < 0.01 && (gamma - 2.0).abs() <= 0.3,
        format!("r=5: Holevo {h:.4} bits, coherent {coh:.2e}; decay exponent γ = {gamma:.3} on r ∈ [2, 4]"),
    )
}

/// Subadditivity of the two conditional entropies, saturated by the pure
/// tripartite output; coherent information goes to at most one receiver.
fn c6_monogamy() -> Outcome {
    let (mut min_sum, mut max_abs, mut max_min_coh) = (f64::INFINITY, 0.0f64, f64::NEG_INFINITY);
    for r in [0.5, 1.0, 2.0] {
        let k = squeezed_tail_cutoff(1, r, 1e-10);
        for q in [0.0, 0.3, FRAC_1_SQRT_2, 0.9, 1.0] {
            let p = ChannelParams::real_wedge(r, q, k).map_err(err)?;
            let fs = field_state(&p, &Encoding::quantum_real(Rail::Single, 0.5).map_err(err)?).map_err(err)?;
            let rep = subadditivity_check(&fs).map_err(err)?;
            let (to_rob, to_anti) = coherent_informations(&fs).map_err(err)?;
            min_sum = min_sum.min(rep.sum_conditional);
            max_abs = max_abs.max(rep.sum_conditional.abs());
            max_min_coh = max_min_coh.max(to_rob.min(to_anti));
        }
    }
    check(
        min_sum >= -1e-4 && max_abs <= 1e-4 && max_min_coh <= 1e-4,
        format!(
            "sum of conditional entropies in [{min_sum:.1e}, {max_abs:.1e}]; max of min coherent information {max_min_coh:.1e}"
        ),
    )
}

/// Exchanging the wedges exchanges the receivers.
fn c7_wedge_exchange() -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 1.5] {
        let k = squeezed_tail_cutoff(1, r, 1e-10);
        for q in [0.3f64, FRAC_1_SQRT_2, 0.9] {
            let ql = (1.0 - q * q).sqrt();
            let rob = entropic_at(Entropic::Holevo, Rail::Single, r, q, 0.5, k).map_err(err)?;
            let anti = entropic_at(Entropic::HolevoAntirob, Rail::Single, r, ql, 0.5, k).map_err(err)?;
            worst = worst.max((rob - anti).abs());
        }
    }
    check(worst <= 1e-8, format!("max |I(A:Rob)(q_R,q_L) − I(A:AntiRob)(q_L,q_R)| {worst:.1e} on a 3×3 grid"))
}

/// Optimizer: single-wedge mapping at low acceleration, balanced wedges at
/// high acceleration, optimum non-increasing in r.
fn c8_optimizer() -> Outcome {
    let cfg = OptimizeConfig::default();
    let mut values = Vec::new();
    let mut low = None;
    for i in 1..=12 {
        let r = 0.25 * i as f64;
        let o = optimize_capacity_2d(r, &cfg).map_err(err)?;
        if i == 2 {
            low = Some(o);
        }
        values.push((r, o.value));
    }
    let low = low.expect("r = 0.5 is on the grid");
    let high = optimize_capacity_2d(4.0, &cfg).map_err(err)?;
    let monotone = values.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    check(
        (low.q_r - 1.0).abs() <= 0.005 && (high.q_r - FRAC_1_SQRT_2).abs() <= 0.02 && monotone,
        format!(
            "r=0.5: q_R={} (α²={}); r=4: q_R={} (α²={}, {:.6} bits); non-increasing over r=0.25..3: {monotone}",
            low.q_r, low.alpha2, high.q_r, high.alpha2, high.value
        ),
    )
}

/// Bogoliubov vacuum: even-only expansion, identity at β = 0, and agreement
/// with a direct null-space solve.
fn c9_bogoliubov() -> Outcome {
    let (alpha, beta, k) = (C64::new(1.25, 0.1), C64::new(0.45, -0.5), 12usize);
    let v = bogoliubov_vacuum_coefficients(alpha, beta, k - 1).map_err(err)?;
    let odd_zero = v.iter().skip(1).step_by(2).all(|c| c.re == 0.0 && c.im == 0.0);
    let vac = bogoliubov_vacuum_coefficients(C64::new(1.0, 0.0), C64::new(0.0, 0.0), k - 1).map_err(err)?;
    let unchanged = vac[0] == C64::new(1.0, 0.0) && vac[1..].iter().all(|c| c.norm() == 0.0);
    // (α* a + β* a†)|v⟩ = 0 restricted to the first k−1 rows
    let (ac, bc) = (Complex::new(alpha.re, -alpha.im), Complex::new(beta.re, -beta.im));
    let m = DMatrix::from_fn(k - 1, k, |row, col| {
        if col == row + 1 {
            ac * ((row + 1) as f64).sqrt()
        } else if row >= 1 && col + 1 == row {
            bc * (row as f64).sqrt()
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let eig = (m.adjoint() * &m).symmetric_eigen();
    let imin = eig.eigenvalues.iamin();
    let null = eig.eigenvectors.column(imin);
    let phase = null[0].conj() / null[0].norm();
    let dev = v.iter().zip(null.iter()).map(|(a, b)| (Complex::new(a.re, a.im) - b * phase).norm()).fold(0.0, f64::max);
    check(
        odd_zero && unchanged && dev <= 1e-10,
        format!(
            "odd coefficients zero: {odd_zero}; β=0 vacuum unchanged: {unchanged}; null-space deviation {dev:.1e} at cutoff {k}"
        ),
    )
}

/// NOON decay model: slope of the fitted a(r) across the window, and the
/// single rail beating the dual rail.
fn c10_noon(heavy: bool) -> Verdict {
    let cfg = NoonConfig::default();
    // the dual-rail receiver space grows as K² and K ≈ 500 already at r = 2.08,
    // so the comparison runs at one cutoff whose discarded tail is below 1e-10
    let ns: &[usize] = if heavy { &[1, 2, 3] } else { &[2, 3] };
    let r = 2.08;
    let mut side = Vec::new();
    for &n in ns {
        let k = squeezed_tail_cutoff(n, r, 1e-10);
        let s = noon_qfi_at_cutoff(n, Rail::Single, r, 0.65, k, &cfg.qfi);
        let d = noon_qfi_at_cutoff(n, Rail::Dual, r, 0.65, k, &cfg.qfi);
        match (s, d) {
            (Ok(s), Ok(d)) => side.push((n, r, s.value, d.value)),
            (Err(e), _) | (_, Err(e)) => return Verdict::Fail(format!("side assertion at N={n}, r={r}: {e}")),
        }
    }
    let side_ok = side.iter().all(|&(_, _, s, d)| s >= d);
    let side_text =
        format!("single ≥ dual at {}/{} sampled N (r = 2.08)", side.iter().filter(|&&(_, _, s, d)| s >= d).count(), side.len());
    if !side_ok {
        return Verdict::Fail(side_text);
    }
    if !heavy {
        return Verdict::Skip(format!("{side_text}; slope fit needs RQICHAN_ACCEPTANCE_HEAVY=1"));
    }
    let rs: Vec<f64> = (0..6).map(|i| 2.08 + i as f64 * (3.10 - 2.08) / 5.0).collect();
    let mut a = Vec::new();
    for &r in &rs {
        let mut samples = Vec::new();
        for n in 1..=18usize {
            match noon_qfi(n, Rail::Single, r, 0.65, &cfg) {
                Ok(f) => samples.push((n, f.value)),
                Err(e) => return Verdict::Fail(format!("N={n}, r={r}: {e}")),
            }
        }
        match rqichan_core::optimize::fit_noon_decay(&samples, r) {
            Ok(f) => a.push((r, f.a_r)),
            Err(e) => return Verdict::Fail(format!("fit at r={r}: {e}")),
        }
    }
    let slope = match linear_fit(&a) {
        Ok(l) => l.slope,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let a_text: Vec<String> = a.iter().map(|(r, a)| format!("{r:.3}:{a:.4}")).collect();
    let text =
        format!("slope of a(r) = {:.2}e-3 (target 41.6e-3 ± 3e-3); a(r) = [{}]; {side_text}", slope * 1e3, a_text.join(", "));
    if (slope - 41.6e-3).abs() <= 3e-3 {
        Verdict::Pass(text)
    } else {
        Verdict::Fail(text)
    }
}

/// Rerunning CLI commands gives byte-identical output for any worker count.
fn c11_reproducible() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["capacity", "--rail", "dual", "--r-grid", "0:3:0.1"],
        &["sweep", "--r-grid", "0.4:1.2:0.4", "--q-r-grid", "0.5,0.8,1", "--quantity", "holevo,coherent_rob,conditional_sum"],
        &["fisher", "--setup", "dual_rob", "--r-grid", "0.5:1.5:0.5", "--theta-grid", "0.3,0.9"],
        &["noon", "--rail", "single", "--r-grid", "0.5,1", "--n-grid", "1:4:1", "--format", "json"],
        &["fidelity", "--a-grid", "1:4:1", "--q-r-grid", "0.8,1"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "1", "2"] {
            let o =
                Command::new(env!("CARGO_BIN_EXE_rqichan")).args(args).env("RQICHAN_THREADS", threads).output().map_err(err)?;
            if o.status.code() != Some(0) {
                return Err(format!("`{}` exited with {:?}", args.join(" "), o.status.code()));
            }
            outputs.push(o.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("`{}` output differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} commands × 4 runs (1, 4, 1, 2 workers) byte-identical", runs.len()))
}

fn main() {
    let heavy = std::env::var("RQICHAN_ACCEPTANCE_HEAVY").is_ok_and(|v| v == "1");
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("joint-measurement amplitude QFI = 4", Box::new(|| c1_joint_qfi().into())),
        ("fidelity squaring law", Box::new(|| c2_fidelity_squaring().into())),
        ("noiseless limits", Box::new(|| c3_noiseless().into())),
        ("closed-form vs numeric entropic series", Box::new(|| c4_closed_vs_numeric().into())),
        ("asymptotic classical/quantum split", Box::new(|| c5_asymptotic_split().into())),
        ("monogamy and subadditivity", Box::new(|| c6_monogamy().into())),
        ("wedge-exchange symmetry", Box::new(|| c7_wedge_exchange().into())),
        ("optimizer behaviour", Box::new(|| c8_optimizer().into())),
        ("Bogoliubov vacuum structure", Box::new(|| c9_bogoliubov().into())),
        ("NOON decay-slope fit", Box::new(move || c10_noon(heavy))),
        ("CLI reproducibility", Box::new(|| c11_reproducible().into())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = run();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("{tag} [{:>2}] {name}: {detail} ({secs:.1}s)", i + 1);
    }
    println!("{} of {} criteria failed", failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

impl From<Outcome> for Verdict {
    fn from(o: Outcome) -> Self {
        match o {
            Ok(d) => Verdict::Pass(d),
            Err(d) => Verdict::Fail(d),
        }
    }
}
