//! The CLI commands. Each builds its parameter grid, evaluates it through the
//! executor and assembles a [`Table`] in grid order.

use rqichan_core::channel::Rail;
use rqichan_core::estimation::{noon_qfi, AmplitudeSetup, NoonConfig};
use rqichan_core::infotheory::ClosedForm;
use rqichan_core::optimize::{fit_noon_decay, grid_points, linear_fit, optimize_capacity_2d, Axis, Evaluation, OptimizeConfig};
use rqichan_core::{Error, Result};

use crate::config::{Command, Method, RunConfig, SqueezingAxis};
use crate::error::{core_exit_code, CliError, CliResult};
use crate::eval::{
    amplitude_qfi_closed, amplitude_qfi_numeric, closed_form_checked, entropic, entropic_closed, entropic_closed_applies,
    fidelity_closed, fidelity_numeric, Entropic,
};
use crate::exec::Executor;
use crate::output::{Cell, Table};
use crate::verify;

/// Output of a command and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub exit_code: i32,
}

pub fn run(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let mut report = match cfg.command {
        Command::Capacity => capacity(cfg, exec)?,
        Command::Fidelity => fidelity(cfg, exec)?,
        Command::Fisher => fisher(cfg, exec)?,
        Command::Noon => noon(cfg, exec)?,
        Command::Sweep => sweep(cfg, exec)?,
        Command::Optimize => optimize(cfg, exec)?,
        Command::Verify => verify::run(exec)?,
    };
    let mut header = vec![format!("rqichan {}", cfg.command)];
    header.append(&mut report.table.comments);
    let shown: Vec<String> =
        cfg.params.iter().filter(|(k, _)| !matches!(k.as_str(), "output" | "format")).map(|(k, v)| format!("{k}={v}")).collect();
    if !shown.is_empty() {
        header.push(format!("parameters: {}", shown.join(" ")));
    }
    report.table.comments = header;
    Ok(report)
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Closed,
    Numeric,
}

impl Via {
    fn as_str(self) -> &'static str {
        match self {
            Via::Closed => "closed",
            Via::Numeric => "numeric",
        }
    }
}

/// One evaluated cell of a grid: the value and how it was obtained, or the
/// failure.
type Outcome = Result<(Evaluation, Via)>;

fn closed(v: Result<f64>) -> Outcome {
    v.map(|v| (Evaluation::exact(v, 0), Via::Closed))
}

fn numeric(v: Result<Evaluation>) -> Outcome {
    v.map(|e| (e, Via::Numeric))
}

/// Collects rows `params…, [quantity], value, method, cutoff_used, converged[, note]`.
struct GridTable {
    axes: Vec<String>,
    value_column: String,
    with_quantity: bool,
    rows: Vec<(Vec<Cell>, Option<String>, Outcome)>,
}

impl GridTable {
    fn new(axes: &[&str], value_column: &str, with_quantity: bool) -> Self {
        Self {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            value_column: value_column.into(),
            with_quantity,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, params: Vec<Cell>, quantity: Option<&str>, outcome: Outcome) {
        self.rows.push((params, quantity.map(str::to_string), outcome));
    }

    fn finish(self, comments: Vec<String>) -> Report {
        let any_error = self.rows.iter().any(|r| r.2.is_err());
        let mut cols: Vec<&str> = self.axes.iter().map(String::as_str).collect();
        if self.with_quantity {
            cols.push("quantity");
        }
        cols.extend([self.value_column.as_str(), "method", "cutoff_used", "converged"]);
        if any_error {
            cols.push("note");
        }
        let mut table = Table::new(&cols);
        table.comments = comments;
        let mut exit_code = 0;
        for (mut row, quantity, outcome) in self.rows {
            if let Some(q) = quantity {
                row.push(Cell::Text(q));
            }
            let (cells, note, code) = outcome_cells(outcome);
            row.extend(cells);
            if any_error {
                row.push(note);
            }
            exit_code = worse(exit_code, code);
            table.push(row);
        }
        Report { table, exit_code }
    }
}

/// Exit-code precedence: invariant violation, then non-convergence, then usage.
fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        3 => 3,
        2 => 2,
        1 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn outcome_cells(outcome: Outcome) -> (Vec<Cell>, Cell, i32) {
    let cutoff = |k: usize| if k == 0 { Cell::Empty } else { Cell::Int(k) };
    match outcome {
        Ok((e, via)) => {
            let code = if e.converged { 0 } else { 2 };
            (vec![Cell::Num(e.value), via.as_str().into(), cutoff(e.cutoff_used), e.converged.into()], Cell::Empty, code)
        }
        Err(err) => {
            let code = core_exit_code(&err);
            let (value, k) = match err {
                Error::NotConverged { value, .. } => (value, 0),
                Error::TruncationNotConverged { value, cutoff: k } => (value, k),
                _ => (f64::NAN, 0),
            };
            let value = if value.is_finite() { Cell::Num(value) } else { Cell::Empty };
            (vec![value, Cell::Empty, cutoff(k), false.into()], Cell::Text(err.to_string()), code)
        }
    }
}

fn rail_name(rail: Rail) -> &'static str {
    match rail {
        Rail::Single => "single",
        Rail::Dual => "dual",
    }
}

fn scalar_axis(cfg: &RunConfig, name: &str, default: f64) -> CliResult<Axis> {
    Ok(cfg.axis(name, Some(default))?.expect("default supplied"))
}

fn check_unit(axis: &Axis) -> CliResult<()> {
    if axis.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::Usage(format!("{} values must lie in [0, 1]", axis.name)));
    }
    Ok(())
}

/// Closed form when requested, or in `auto` mode when one applies.
fn pick(method: Method, closed_available: bool) -> Via {
    match method {
        Method::Closed => Via::Closed,
        Method::Numeric => Via::Numeric,
        Method::Auto if closed_available => Via::Closed,
        Method::Auto => Via::Numeric,
    }
}

fn needs_single_wedge(q_r: f64) -> Result<()> {
    if q_r != 1.0 {
        return Err(Error::InvalidParameter(format!("closed forms assume q_r = 1 (got {q_r})")));
    }
    Ok(())
}

fn capacity(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let (q_axis, a_axis) = (scalar_axis(cfg, "q_r", 1.0)?, scalar_axis(cfg, "alpha2", 0.5)?);
    check_unit(&q_axis)?;
    check_unit(&a_axis)?;
    let rail = cfg.rail()?;
    let (kind, column, what) = match cfg.get("payload") {
        None | Some("classical") => (Entropic::Holevo, "holevo_bits", "classical channel capacity (Holevo information, bits)"),
        Some("quantum") => {
            (Entropic::CoherentRob, "coherent_information", "quantum channel capacity (coherent information, ebits)")
        }
        Some(p) => return Err(CliError::Usage(format!("payload: `{p}` (classical or quantum)"))),
    };
    let method = cfg.method()?;
    let axes = vec![sq.axis.clone(), q_axis, a_axis];
    let points = grid_points(&axes);
    let outcomes =
        exec.map(&points, |p| {
            let (r, q, a2) = (sq.to_r(p[0]), p[1], p[2]);
            match pick(method, entropic_closed_applies(kind, rail, q, a2)) {
                Via::Closed => closed(needs_single_wedge(q).and_then(|_| {
                    entropic_closed(kind, rail, r, a2, &cfg.series).expect("capacity quantities have closed forms")
                })),
                Via::Numeric => numeric(entropic(kind, rail, r, q, a2, &cfg.truncation)),
            }
        });
    let mut t = GridTable::new(&[&sq.axis.name, "r", "q_r", "alpha2"], column, false);
    for (p, o) in points.iter().zip(outcomes) {
        t.push(squeeze_cells(&sq, p[0]).into_iter().chain([p[1].into(), p[2].into()]).collect(), None, o);
    }
    Ok(dedupe_r(t.finish(vec![format!("figure: {what} vs acceleration, {} rail", rail_name(rail))]), &sq))
}

/// Cells for the squeezing axis: the given value, and `r` when the axis
/// holds accelerations.
fn squeeze_cells(sq: &SqueezingAxis, v: f64) -> Vec<Cell> {
    vec![Cell::Num(v), Cell::Num(sq.to_r(v))]
}

/// Drop the duplicated `r` column when the axis already is `r`.
fn dedupe_r(mut report: Report, sq: &SqueezingAxis) -> Report {
    if sq.omega.is_none() {
        report.table.columns.remove(1);
        for row in &mut report.table.rows {
            row.remove(1);
        }
    }
    report
}

fn fidelity(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let q_axis = scalar_axis(cfg, "q_r", 1.0)?;
    check_unit(&q_axis)?;
    let rail = cfg.rail()?;
    let method = cfg.method()?;
    let axes = vec![sq.axis.clone(), q_axis];
    let points = grid_points(&axes);
    let outcomes = exec.map(&points, |p| {
        let (r, q) = (sq.to_r(p[0]), p[1]);
        match pick(method, q == 1.0) {
            Via::Closed => closed(needs_single_wedge(q).and_then(|_| fidelity_closed(rail, r, &cfg.series))),
            Via::Numeric => numeric(fidelity_numeric(rail, r, q, &cfg.truncation)),
        }
    });
    let mut t = GridTable::new(&[&sq.axis.name, "r", "q_r"], "fidelity", false);
    for (p, o) in points.iter().zip(outcomes) {
        t.push(squeeze_cells(&sq, p[0]).into_iter().chain([p[1].into()]).collect(), None, o);
    }
    let what =
        format!("figure: fidelity between the receiver's states for logical 0 and 1 vs acceleration, {} rail", rail_name(rail));
    Ok(dedupe_r(t.finish(vec![what]), &sq))
}

fn fisher(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let theta = cfg.axis("theta", None)?.ok_or_else(|| CliError::Usage("missing theta or theta_grid".into()))?;
    let name = cfg.get("setup").ok_or_else(|| CliError::Usage("missing setup".into()))?;
    let setup = AmplitudeSetup::parse(name).ok_or_else(|| {
        let all: Vec<&str> = AmplitudeSetup::ALL.iter().map(|s| s.as_str()).collect();
        CliError::Usage(format!("setup: `{name}` ({})", all.join(", ")))
    })?;
    let method = cfg.method()?;
    let axes = vec![sq.axis.clone(), theta];
    let points = grid_points(&axes);
    let outcomes = exec.map(&points, |p| {
        let (r, th) = (sq.to_r(p[0]), p[1]);
        match method {
            Method::Numeric => numeric(amplitude_qfi_numeric(setup, r, th, &cfg.truncation)),
            Method::Closed => closed(amplitude_qfi_closed(setup, r, th, &cfg.series)),
            // receiver-only closed forms are undefined at quarter turns
            Method::Auto => match amplitude_qfi_closed(setup, r, th, &cfg.series) {
                Err(Error::Domain { .. } | Error::InvalidParameter(_)) => {
                    numeric(amplitude_qfi_numeric(setup, r, th, &cfg.truncation))
                }
                other => closed(other),
            },
        }
    });
    let mut t = GridTable::new(&[&sq.axis.name, "r", "theta"], "fisher", false);
    for (p, o) in points.iter().zip(outcomes) {
        t.push(squeeze_cells(&sq, p[0]).into_iter().chain([p[1].into()]).collect(), None, o);
    }
    let what = format!("figure: quantum Fisher information of the amplitude angle vs acceleration, setup {name}");
    Ok(dedupe_r(t.finish(vec![what]), &sq))
}

fn noon(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let n_axis = cfg.axis("n", None)?.ok_or_else(|| CliError::Usage("missing n or n_grid".into()))?;
    if n_axis.values.iter().any(|&n| n < 1.0 || n.fract() != 0.0) {
        return Err(CliError::Usage("NOON excitation numbers must be positive integers".into()));
    }
    let theta = cfg.f64_opt("theta")?.unwrap_or(0.65);
    let rail = cfg.rail()?;
    let fit = cfg.bool_or("fit", false)?;
    let tr = cfg.truncation;
    let ncfg = NoonConfig { eps: tr.eps, tail_tol: tr.tail_tol, k_max: tr.k_max, ..NoonConfig::default() };
    // squeezing outer, N inner, so each fit reads a contiguous block
    let axes = vec![sq.axis.clone(), n_axis.clone()];
    let points = grid_points(&axes);
    let outcomes: Vec<Outcome> = exec.map(&points, |p| {
        let f = noon_qfi(p[1] as usize, rail, sq.to_r(p[0]), theta, &ncfg);
        numeric(f.map(|f| Evaluation::exact(f.value, f.cutoff_used)))
    });
    let what =
        format!("figure: NOON-state quantum Fisher information vs N and acceleration, {} rail, theta={theta}", rail_name(rail));
    if !fit {
        let mut t = GridTable::new(&[&sq.axis.name, "r", "N"], "fisher", false);
        for (p, o) in points.iter().zip(outcomes) {
            t.push(squeeze_cells(&sq, p[0]).into_iter().chain([Cell::Int(p[1] as usize)]).collect(), None, o);
        }
        return Ok(dedupe_r(t.finish(vec![what]), &sq));
    }
    let per_r = n_axis.values.len();
    let mut table = Table::new(&["r", "a_r", "b_r", "residual", "samples", "converged"]);
    let mut exit_code = 0;
    let mut slope_points = Vec::new();
    for (i, block) in outcomes.chunks(per_r).enumerate() {
        let r = sq.to_r(sq.axis.values[i]);
        let mut samples = Vec::new();
        let mut converged = true;
        for (o, &n) in block.iter().zip(&n_axis.values) {
            match o {
                Ok((e, _)) => samples.push((n as usize, e.value)),
                Err(e) => {
                    converged = false;
                    exit_code = worse(exit_code, core_exit_code(e));
                    if let Error::TruncationNotConverged { value, .. } = e {
                        samples.push((n as usize, *value));
                    }
                }
            }
        }
        match fit_noon_decay(&samples, r) {
            Ok(f) => {
                slope_points.push((r, f.a_r));
                table.push(vec![r.into(), f.a_r.into(), f.b_r.into(), f.residual.into(), samples.len().into(), converged.into()]);
            }
            Err(e) => {
                exit_code = worse(exit_code, core_exit_code(&e));
                table.push(vec![r.into(), Cell::Empty, Cell::Empty, Cell::Empty, samples.len().into(), false.into()]);
            }
        }
    }
    table.comment(format!("{what}; fit ln(F/N^2) = -a_r N + b_r"));
    if slope_points.len() >= 2 {
        let line = linear_fit(&slope_points)?;
        table.comment(format!("slope of a_r vs r: {}", crate::output::format_number(line.slope)));
    }
    Ok(Report { table, exit_code })
}

/// Quantities accepted by `sweep`.
#[derive(Debug, Clone, Copy)]
enum SweepQuantity {
    Numeric(Entropic),
    Closed(ClosedForm),
}

impl SweepQuantity {
    fn parse(s: &str) -> Option<Self> {
        Entropic::parse(s).map(Self::Numeric).or_else(|| ClosedForm::parse(s).map(Self::Closed))
    }

    fn name(self) -> &'static str {
        match self {
            Self::Numeric(q) => q.as_str(),
            Self::Closed(q) => q.as_str(),
        }
    }
}

fn sweep(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let (q_axis, a_axis) = (scalar_axis(cfg, "q_r", 1.0)?, scalar_axis(cfg, "alpha2", 0.5)?);
    check_unit(&q_axis)?;
    check_unit(&a_axis)?;
    let rail = cfg.rail()?;
    let list = cfg.get("quantity").ok_or_else(|| CliError::Usage("missing quantity".into()))?;
    let quantities = list
        .split(',')
        .map(|s| {
            let s = s.trim();
            SweepQuantity::parse(s).ok_or_else(|| {
                let mut all: Vec<&str> = Entropic::ALL.iter().map(|q| q.as_str()).collect();
                all.extend(ClosedForm::ALL.iter().map(|q| q.as_str()));
                CliError::Usage(format!("quantity: `{s}` ({})", all.join(", ")))
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let axes = vec![sq.axis.clone(), q_axis, a_axis];
    let points = grid_points(&axes);
    let outcomes: Vec<Vec<Outcome>> = exec.map(&points, |p| {
        let (r, q, a2) = (sq.to_r(p[0]), p[1], p[2]);
        quantities
            .iter()
            .map(|&qty| match qty {
                SweepQuantity::Numeric(kind) => numeric(entropic(kind, rail, r, q, a2, &cfg.truncation)),
                SweepQuantity::Closed(form) => {
                    closed(needs_single_wedge(q).and_then(|_| closed_form_checked(form, r, a2, &cfg.series)))
                }
            })
            .collect()
    });
    let mut t = GridTable::new(&[&sq.axis.name, "r", "q_r", "alpha2"], "value", true);
    for (p, row) in points.iter().zip(outcomes) {
        for (&qty, o) in quantities.iter().zip(row) {
            let params = squeeze_cells(&sq, p[0]).into_iter().chain([p[1].into(), p[2].into()]).collect();
            t.push(params, Some(qty.name()), o);
        }
    }
    let what =
        format!("figure: entropic quantities beyond the single-wedge mapping vs (r, q_r, alpha2), {} rail", rail_name(rail));
    Ok(dedupe_r(t.finish(vec![what]), &sq))
}

fn optimize(cfg: &RunConfig, exec: &Executor) -> CliResult<Report> {
    let sq = cfg.squeezing_axis()?;
    let ocfg = OptimizeConfig {
        eps: cfg.f64_opt("eps")?.unwrap_or(OptimizeConfig::default().eps),
        k_max: cfg.usize_opt("k_max")?.unwrap_or(OptimizeConfig::default().k_max),
        tail_tol: cfg.f64_opt("tail_tol")?.unwrap_or(OptimizeConfig::default().tail_tol),
    };
    let values = sq.axis.values.clone();
    let results = exec.map(&values, |&v| optimize_capacity_2d(sq.to_r(v), &ocfg));
    let mut cols = vec![sq.axis.name.as_str()];
    if sq.omega.is_some() {
        cols.push("r");
    }
    cols.extend(["alpha2_opt", "q_r_opt", "holevo_bits", "coarse_holevo_bits", "cutoff_used", "converged"]);
    let mut table = Table::new(&cols);
    table.comment("figure: optimised single-rail Holevo information and optimal (alpha2, q_r) vs acceleration");
    let mut exit_code = 0;
    let mut notes = Vec::new();
    for (&v, res) in values.iter().zip(results) {
        let mut row = vec![Cell::Num(v)];
        if sq.omega.is_some() {
            row.push(Cell::Num(sq.to_r(v)));
        }
        match res {
            Ok(o) => row.extend([
                o.alpha2.into(),
                o.q_r.into(),
                o.value.into(),
                o.coarse_value.into(),
                o.cutoff_used.into(),
                true.into(),
            ]),
            Err(e) => {
                exit_code = worse(exit_code, core_exit_code(&e));
                notes.push(format!("{}: {e}", crate::output::format_number(v)));
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, false.into()]);
            }
        }
        table.push(row);
    }
    for n in notes {
        table.comment(format!("failed at {n}"));
    }
    Ok(Report { table, exit_code })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(cmd: &str, kv: &[(&str, &str)]) -> CliResult<Report> {
        let flags: Vec<(String, String)> = kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let cfg = RunConfig::from_sources(Some(cmd), &[], &flags)?;
        run(&cfg, &Executor::with_threads(Some(2))?)
    }

    #[test]
    fn capacity_rows_match_library_calls() {
        let rep = run_with("capacity", &[("rail", "dual"), ("r_grid", "0:3:0.1")]).unwrap();
        assert_eq!(rep.exit_code, 0);
        assert_eq!(rep.table.columns, ["r", "q_r", "alpha2", "holevo_bits", "method", "cutoff_used", "converged"]);
        assert_eq!(rep.table.rows.len(), 31);
        for i in [0usize, 12, 30] {
            let r = i as f64 * 0.1;
            let direct = rqichan_core::infotheory::closed_form(ClosedForm::HolevoDualClassical, r, 0.5).unwrap();
            assert_eq!(rep.table.rows[i][3], Cell::Num(direct), "row {i}");
        }
        assert!(rep.table.comments.iter().any(|c| c.starts_with("figure:")));
    }

    #[test]
    fn fisher_joint_is_four() {
        let rep = run_with("fisher", &[("setup", "single_joint"), ("r", "1.3"), ("theta", "0.7")]).unwrap();
        assert_eq!(rep.table.rows.len(), 1);
        assert_eq!(rep.table.rows[0][2], Cell::Num(4.0));
        let rep =
            run_with("fisher", &[("setup", "single_joint"), ("r", "1.3"), ("theta", "0.7"), ("method", "numeric")]).unwrap();
        let Cell::Num(v) = rep.table.rows[0][2] else { panic!("no value") };
        assert!((v - 4.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn numeric_capacity_beyond_single_wedge() {
        let rep = run_with("capacity", &[("r", "0.6"), ("q_r_grid", "0.6,1"), ("payload", "quantum")]).unwrap();
        assert_eq!(rep.table.rows[0][4], Cell::Text("numeric".into()));
        assert_eq!(rep.table.rows[1][4], Cell::Text("closed".into()));
        let (Cell::Num(a), Cell::Num(b)) = (&rep.table.rows[0][3], &rep.table.rows[1][3]) else { panic!() };
        assert!(a < b, "splitting the mode loses coherent information: {a} vs {b}");
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let rep = run_with("capacity", &[("r", "1"), ("q_r", "0.5"), ("method", "closed")]).unwrap();
        assert_eq!(rep.exit_code, 1);
        assert_eq!(rep.table.columns.last().unwrap(), "note");
        let rep = run_with("capacity", &[("r", "1.5"), ("method", "numeric"), ("k_max", "8"), ("tail_tol", "0.5")]).unwrap();
        assert_eq!(rep.exit_code, 2);
        assert_eq!(rep.table.rows[0][6], Cell::Bool(false));
    }

    #[test]
    fn noon_table_and_fit() {
        let rep = run_with("noon", &[("r", "0"), ("n_grid", "1:3:1")]).unwrap();
        assert_eq!(rep.exit_code, 0);
        for (i, row) in rep.table.rows.iter().enumerate() {
            let Cell::Num(f) = row[2] else { panic!() };
            assert!((f - ((i + 1) * (i + 1)) as f64).abs() < 1e-9);
            assert_eq!(row[4], Cell::Int(i + 2));
        }
        let rep = run_with("noon", &[("r_grid", "0.5,0.7"), ("n_grid", "1:4:1"), ("fit", "true")]).unwrap();
        assert_eq!(rep.table.rows.len(), 2);
        assert!(rep.table.comments.iter().any(|c| c.starts_with("slope of a_r")));
    }

    #[test]
    fn sweep_long_format() {
        let rep =
            run_with("sweep", &[("r", "0.7"), ("q_r_grid", "0.5,1"), ("quantity", "holevo,holevo_single_classical")]).unwrap();
        assert_eq!(rep.table.rows.len(), 4);
        assert_eq!(rep.table.rows[1][3], Cell::Text("holevo_single_classical".into()));
        assert_eq!(rep.exit_code, 1, "closed form at q_r = 0.5 is rejected per row");
        let (Cell::Num(a), Cell::Num(b)) = (&rep.table.rows[2][4], &rep.table.rows[3][4]) else { panic!() };
        assert!((a - b).abs() < 1e-7);
        assert!(run_with("sweep", &[("r", "0.7"), ("quantity", "entropy")]).is_err());
    }

    #[test]
    fn acceleration_axis_adds_r_column() {
        let rep = run_with("fidelity", &[("a_grid", "1,2")]).unwrap();
        assert_eq!(rep.table.columns[..2], ["a".to_string(), "r".to_string()]);
    }
}
