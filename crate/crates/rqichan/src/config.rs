//! Run configuration: command, key-value parameters (from a config file and
//! flags, flags winning), output target and numerical tolerances.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use rqichan_core::channel::Rail;
use rqichan_core::infotheory::CLOSED_FORM_MAX_TERMS;
use rqichan_core::numerics::{squeezing_from_acceleration, ConvergenceConfig};
use rqichan_core::optimize::Axis;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Capacity,
    Fidelity,
    Fisher,
    Noon,
    Sweep,
    Optimize,
    Verify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Capacity,
        Command::Fidelity,
        Command::Fisher,
        Command::Noon,
        Command::Sweep,
        Command::Optimize,
        Command::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::Fidelity => "fidelity",
            Command::Fisher => "fisher",
            Command::Noon => "noon",
            Command::Sweep => "sweep",
            Command::Optimize => "optimize",
            Command::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Capacity => "Holevo information or coherent information of the channel",
            Command::Fidelity => "fidelity between the receiver states of the two logical inputs",
            Command::Fisher => "quantum Fisher information for amplitude estimation",
            Command::Noon => "quantum Fisher information of NOON probes",
            Command::Sweep => "evaluate named quantities over a parameter grid",
            Command::Optimize => "maximise the single-rail Holevo information over (alpha2, q_r)",
            Command::Verify => "run the invariant suite",
        }
    }

    /// Parameter keys this command understands (besides the common ones).
    fn keys(self) -> &'static [&'static str] {
        const R: [&str; 5] = ["r", "r_grid", "a", "a_grid", "omega"];
        match self {
            Command::Capacity => {
                &[R[0], R[1], R[2], R[3], R[4], "q_r", "q_r_grid", "alpha2", "alpha2_grid", "rail", "payload", "method"]
            }
            Command::Fidelity => &[R[0], R[1], R[2], R[3], R[4], "q_r", "q_r_grid", "rail", "method"],
            Command::Fisher => &[R[0], R[1], R[2], R[3], R[4], "theta", "theta_grid", "setup", "method"],
            Command::Noon => &[R[0], R[1], R[2], R[3], R[4], "n", "n_grid", "theta", "rail", "fit"],
            Command::Sweep => &[R[0], R[1], R[2], R[3], R[4], "q_r", "q_r_grid", "alpha2", "alpha2_grid", "rail", "quantity"],
            Command::Optimize => &[R[0], R[1], R[2], R[3], R[4]],
            Command::Verify => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every configuration key with a one-line description. Flags are the same
/// names with `-` instead of `_`.
pub const KEYS: &[(&str, &str)] = &[
    ("r", "squeezing parameter"),
    ("r_grid", "squeezing grid start:stop:step or comma list"),
    ("a", "acceleration (converted with omega)"),
    ("a_grid", "acceleration grid"),
    ("omega", "mode frequency for acceleration input [default 1]"),
    ("q_r", "Unruh-mode weight of the receiver's wedge [default 1]"),
    ("q_r_grid", "q_r grid"),
    ("alpha2", "input probability |alpha|^2 [default 0.5]"),
    ("alpha2_grid", "alpha2 grid"),
    ("theta", "encoded phase/amplitude parameter"),
    ("theta_grid", "theta grid"),
    ("n", "NOON excitation number"),
    ("n_grid", "NOON excitation numbers start:stop:step or comma list"),
    ("rail", "single | dual [default single]"),
    ("payload", "classical | quantum [default classical]"),
    ("setup", "single_rob | dual_rob | single_joint | dual_joint | classical_joint"),
    ("quantity", "comma list of sweep quantities"),
    ("method", "auto | closed | numeric [default auto]"),
    ("fit", "noon: also fit F = N^2 exp(-aN + b) per r (true/false)"),
    ("output", "output file [default stdout]"),
    ("format", "csv | json [default csv]"),
    ("eps_tail", "series tail tolerance"),
    ("eps_pc", "series step-change tolerance"),
    ("max_terms", "series term budget"),
    ("eps", "relative tolerance of the cutoff k vs k+1 test"),
    ("k_max", "largest Fock cutoff tried"),
    ("tail_tol", "squeezing norm neglected by the starting cutoff"),
];

const COMMON: &[&str] = &["output", "format", "eps_tail", "eps_pc", "max_terms", "eps", "k_max", "tail_tol"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Closed,
    Numeric,
}

/// Cutoff search settings for truncated-state evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub eps: f64,
    pub k_max: usize,
    pub tail_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { eps: 1e-8, k_max: 20_000, tail_tol: 1e-12 }
    }
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Every key that was set, after merging, in key order.
    pub params: BTreeMap<String, String>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub series: ConvergenceConfig,
    pub truncation: Truncation,
}

/// Parse `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_key_values(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key or value", i + 1)));
        }
        out.push((k.replace('-', "_"), v.to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Merge config-file entries with flag entries (flags override) and
    /// validate. `command` may come from either source.
    pub fn from_sources(command: Option<&str>, file: &[(String, String)], flags: &[(String, String)]) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        let mut file_command = None;
        for (k, v) in file {
            if k == "command" {
                file_command = Some(v.clone());
                continue;
            }
            map.insert(k.clone(), v.clone());
        }
        for (k, v) in flags {
            map.insert(k.clone(), v.clone());
        }
        let name = command.map(str::to_string).or(file_command).ok_or_else(|| CliError::Usage("no command given".into()))?;
        let command = Command::parse(&name).ok_or_else(|| CliError::Usage(format!("unknown command `{name}`")))?;
        for k in map.keys() {
            if !KEYS.iter().any(|(n, _)| n == k) {
                return Err(CliError::Usage(format!("unknown key `{k}`")));
            }
            if !COMMON.contains(&k.as_str()) && !command.keys().contains(&k.as_str()) {
                return Err(CliError::Usage(format!("key `{k}` does not apply to `{command}`")));
            }
        }
        let format = match map.get("format").map(String::as_str) {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(f) => return Err(CliError::Usage(format!("unknown format `{f}` (csv or json)"))),
        };
        let mut cfg = Self {
            command,
            output: map.get("output").map(PathBuf::from),
            format,
            series: ConvergenceConfig::default().with_max_terms(CLOSED_FORM_MAX_TERMS),
            truncation: Truncation::default(),
            params: map,
        };
        if let Some(v) = cfg.f64_opt("eps_tail")? {
            cfg.series.eps_tail = v;
        }
        if let Some(v) = cfg.f64_opt("eps_pc")? {
            cfg.series.eps_pc = v;
        }
        if let Some(v) = cfg.usize_opt("max_terms")? {
            cfg.series.max_terms = v;
        }
        cfg.series.validate()?;
        if let Some(v) = cfg.f64_opt("eps")? {
            cfg.truncation.eps = v;
        }
        if let Some(v) = cfg.usize_opt("k_max")? {
            cfg.truncation.k_max = v;
        }
        if let Some(v) = cfg.f64_opt("tail_tol")? {
            cfg.truncation.tail_tol = v;
        }
        let t = cfg.truncation;
        if !(t.eps > 0.0) || !(t.tail_tol > 0.0 && t.tail_tol < 1.0) || t.k_max < 2 {
            return Err(CliError::Usage("eps and tail_tol must lie in (0, 1) and k_max ≥ 2".into()));
        }
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn usize_opt(&self, key: &str) -> CliResult<Option<usize>> {
        self.get(key)
            .map(|v| v.parse::<usize>().map_err(|_| CliError::Usage(format!("{key}: `{v}` is not a non-negative integer"))))
            .transpose()
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(CliError::Usage(format!("{key}: `{v}` is not a boolean"))),
        }
    }

    pub fn rail(&self) -> CliResult<Rail> {
        match self.get("rail") {
            None | Some("single") => Ok(Rail::Single),
            Some("dual") => Ok(Rail::Dual),
            Some(v) => Err(CliError::Usage(format!("rail: `{v}` (single or dual)"))),
        }
    }

    pub fn method(&self) -> CliResult<Method> {
        match self.get("method") {
            None | Some("auto") => Ok(Method::Auto),
            Some("closed") => Ok(Method::Closed),
            Some("numeric") => Ok(Method::Numeric),
            Some(v) => Err(CliError::Usage(format!("method: `{v}` (auto, closed or numeric)"))),
        }
    }

    /// Axis for parameter `name` from either `name` (one value) or
    /// `name_grid`; `default` applies when neither is set.
    pub fn axis(&self, name: &str, default: Option<f64>) -> CliResult<Option<Axis>> {
        let grid_key = format!("{name}_grid");
        match (self.get(name), self.get(&grid_key)) {
            (Some(_), Some(_)) => Err(CliError::Usage(format!("give either {name} or {grid_key}, not both"))),
            (Some(v), None) => Ok(Some(Axis::new(name, vec![parse_f64(name, v)?])?)),
            (None, Some(g)) => Ok(Some(parse_grid(name, g)?)),
            (None, None) => Ok(default.map(|d| Axis::new(name, vec![d])).transpose()?),
        }
    }

    /// The squeezing axis: `r`/`r_grid`, or `a`/`a_grid` (with `omega`).
    pub fn squeezing_axis(&self) -> CliResult<SqueezingAxis> {
        let r = self.axis("r", None)?;
        let a = self.axis("a", None)?;
        let omega = self.f64_opt("omega")?;
        match (r, a) {
            (Some(_), Some(_)) => Err(CliError::Usage("give the squeezing either as r or as a, not both".into())),
            (Some(axis), None) => {
                if omega.is_some() {
                    return Err(CliError::Usage("omega only applies to acceleration input".into()));
                }
                if axis.values.iter().any(|&r| r < 0.0) {
                    return Err(CliError::Usage("r must be non-negative".into()));
                }
                Ok(SqueezingAxis { axis, omega: None })
            }
            (None, Some(axis)) => {
                let omega = omega.unwrap_or(1.0);
                for &a in &axis.values {
                    squeezing_from_acceleration(omega, a)?;
                }
                Ok(SqueezingAxis { axis, omega: Some(omega) })
            }
            (None, None) => Err(CliError::Usage("missing squeezing: set r, r_grid, a or a_grid".into())),
        }
    }
}

/// Squeezing values, given directly or as accelerations.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingAxis {
    pub axis: Axis,
    /// Mode frequency when the axis holds accelerations.
    pub omega: Option<f64>,
}

impl SqueezingAxis {
    pub fn to_r(&self, v: f64) -> f64 {
        match self.omega {
            None => v,
            Some(omega) => squeezing_from_acceleration(omega, v).expect("validated when the axis was built"),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    let x: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("{key}: `{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("{key}: `{v}` is not finite")));
    }
    Ok(x)
}

/// `start:stop:step` (inclusive of `stop` within half a step) or `v1,v2,…`.
pub fn parse_grid(name: &str, spec: &str) -> CliResult<Axis> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse_f64(name, start)?, parse_f64(name, stop)?, parse_f64(name, step)?);
            Ok(Axis::range(name, start, stop, step)?)
        }
        [_] => {
            let values = spec.split(',').map(|v| parse_f64(name, v)).collect::<CliResult<Vec<_>>>()?;
            Ok(Axis::new(name, values)?)
        }
        _ => Err(CliError::Usage(format!("{name}_grid: `{spec}` is neither start:stop:step nor a comma list"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn flags_override_file() {
        let file = parse_key_values("# settings\ncommand = capacity\nr = 0.5\nrail = dual # trailing\n\n").unwrap();
        let cfg = RunConfig::from_sources(None, &file, &kv(&[("r", "1.25")])).unwrap();
        assert_eq!(cfg.command, Command::Capacity);
        assert_eq!(cfg.get("r"), Some("1.25"));
        assert_eq!(cfg.rail().unwrap(), Rail::Dual);
        let cfg = RunConfig::from_sources(Some("fidelity"), &kv(&[("command", "capacity")]), &kv(&[("r", "1")])).unwrap();
        assert_eq!(cfg.command, Command::Fidelity);
    }

    #[test]
    fn rejects_bad_keys() {
        assert!(matches!(RunConfig::from_sources(Some("capacity"), &[], &kv(&[("colour", "red")])), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::from_sources(Some("optimize"), &[], &kv(&[("theta", "1")])), Err(CliError::Usage(_))));
        assert!(RunConfig::from_sources(None, &[], &[]).is_err());
        assert!(RunConfig::from_sources(Some("plot"), &[], &[]).is_err());
        assert!(parse_key_values("r 0.5").is_err());
        assert!(RunConfig::from_sources(Some("capacity"), &[], &kv(&[("format", "xml")])).is_err());
        assert!(RunConfig::from_sources(Some("capacity"), &[], &kv(&[("eps_tail", "-1")])).is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("r", "0:3:0.1").unwrap();
        assert_eq!(g.values.len(), 31);
        assert_eq!(g.values[30], 3.0);
        assert_eq!(parse_grid("r", "0.5,1,2").unwrap().values, vec![0.5, 1.0, 2.0]);
        assert!(parse_grid("r", "0:1").is_err());
        assert!(parse_grid("r", "1:0:0.1").is_err());
        assert!(parse_grid("r", "a,b").is_err());
        let cfg = RunConfig::from_sources(Some("capacity"), &[], &kv(&[("r", "1"), ("r_grid", "0:1:0.5")])).unwrap();
        assert!(cfg.axis("r", None).is_err());
        let cfg = RunConfig::from_sources(Some("capacity"), &[], &kv(&[("q_r_grid", "0:1:0.5")])).unwrap();
        assert_eq!(cfg.axis("q_r", Some(1.0)).unwrap().unwrap().values, vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.axis("alpha2", Some(0.5)).unwrap().unwrap().values, vec![0.5]);
    }

    #[test]
    fn acceleration_input() {
        let cfg = RunConfig::from_sources(Some("fidelity"), &[], &kv(&[("a", "2"), ("omega", "1")])).unwrap();
        let s = cfg.squeezing_axis().unwrap();
        let r = s.to_r(2.0);
        assert!(((-core::f64::consts::PI / 2.0).exp() - r.tanh()).abs() < 1e-14);
        let cfg = RunConfig::from_sources(Some("fidelity"), &[], &kv(&[("a", "-2")])).unwrap();
        assert!(cfg.squeezing_axis().is_err());
        let cfg = RunConfig::from_sources(Some("fidelity"), &[], &kv(&[("r", "-2")])).unwrap();
        assert!(cfg.squeezing_axis().is_err());
    }
}
