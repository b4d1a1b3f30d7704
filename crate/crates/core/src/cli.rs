//! `rotor` command-line front end.
//!
//! A scenario is read from an optional config file (JSON, or TOML key-value
//! pairs) and then overridden by flags. Every command produces a [`Report`]
//! that renders to CSV or JSON with stable row order and 15 significant
//! digits, so identical inputs give byte-identical output.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or config error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::dynamics::{
    evolve_operator, expectation_series, uniform_grid, AmplitudeState, DynamicsError,
    InitialCondition, MixedState, Trajectory,
};
use crate::identities::{commutator_suite, IDENTITY_MARGIN};
use crate::ladder::{solve_ladder, verify_solution, Anchor, LadderError};
use crate::model::{ModelError, Observable, PhysicalParams, RotorModel};
use crate::operator::{IndexRange, OperatorError, Tolerance};
use crate::oracle::{grid_evolve_expectation, AngularGrid, GridObservable, OracleError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Smallest distance between the state's support and the window edge.
pub const STATE_EDGE_MARGIN: u64 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "rotor",
    version,
    about = "Matrix mechanics of the planar quantum rotor"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Energies E_n and upward Bohr frequencies for |n| <= N.
    Spectrum,
    /// Solve the commutator system for L and the trig elements.
    Solve,
    /// Evaluate the commutator identity suite on interior rows.
    Verify,
    /// Expectation value of an observable over a time grid.
    Evolve,
    /// Nonzero matrix elements of an observable at one time.
    Elements,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Evolve => "evolve",
            Command::Elements => "elements",
        }
    }
}

#[derive(Debug, Default, clap::Args)]
pub struct Overrides {
    /// Scenario file (JSON, or TOML key = value).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Cross-check `evolve` against the grid oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Absolute tolerance for every residual.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Offset of L's diagonal: 0 or half.
    #[arg(long, global = true)]
    pub anchor: Option<String>,
    /// Ladder window [-N, N].
    #[arg(long = "N", global = true, value_name = "N")]
    pub range_n: Option<u32>,
    /// Oracle grid points.
    #[arg(long = "M", global = true, value_name = "M")]
    pub grid_m: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// x, y, L, H, p_x, p_y, sin_phi or cos_phi.
    #[arg(long, global = true)]
    pub observable: Option<String>,
    /// Pure state as `n=re[:im],...`; amplitudes are normalised.
    #[arg(long, global = true, value_name = "SPEC", conflicts_with = "mixed")]
    pub state: Option<String>,
    /// Mixed state as `n=p,...`.
    #[arg(long, global = true, value_name = "SPEC")]
    pub mixed: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t_stop: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Time at which `elements` evaluates the observable.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    /// `(n, re, im)` triples; normalised on load.
    Pure { amplitudes: Vec<(i64, f64, f64)> },
    /// `(n, p)` pairs.
    Mixed { weights: Vec<(i64, f64)> },
}

impl Default for StateSpec {
    fn default() -> Self {
        StateSpec::Pure {
            amplitudes: vec![(1, 1.0, 0.0), (2, 1.0, 0.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 10.0,
            steps: 100,
        }
    }
}

/// On-disk scenario; every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub hbar: f64,
    pub mass: f64,
    pub radius: f64,
    pub range_n: u32,
    pub grid_m: usize,
    pub tolerance: f64,
    pub anchor: String,
    pub observable: Observable,
    pub state: StateSpec,
    pub time: TimeSpec,
    pub element_time: f64,
    pub format: Format,
    pub oracle: bool,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            radius: 1.0,
            range_n: 32,
            grid_m: 1024,
            tolerance: 1e-10,
            anchor: "0".to_owned(),
            observable: Observable::X,
            state: StateSpec::default(),
            time: TimeSpec::default(),
            element_time: 0.0,
            format: Format::Csv,
            oracle: false,
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value {
                    self.$field = v;
                }
            };
        }
        set!(hbar, o.hbar);
        set!(mass, o.mass);
        set!(radius, o.radius);
        set!(range_n, o.range_n);
        set!(grid_m, o.grid_m);
        set!(tolerance, o.tol);
        set!(anchor, o.anchor.clone());
        set!(format, o.format);
        set!(element_time, o.time);
        if let Some(obs) = &o.observable {
            self.observable = obs.parse()?;
        }
        if let Some(spec) = &o.state {
            self.state = StateSpec::Pure {
                amplitudes: parse_pairs(spec)?
                    .into_iter()
                    .map(|(n, re, im)| (n, re, im.unwrap_or(0.0)))
                    .collect(),
            };
        }
        if let Some(spec) = &o.mixed {
            let weights = parse_pairs(spec)?
                .into_iter()
                .map(|(n, p, extra)| match extra {
                    None => Ok((n, p)),
                    Some(_) => Err(CliError::Config(format!(
                        "mixed weight for {n} must be a single real number"
                    ))),
                })
                .collect::<Result<_, _>>()?;
            self.state = StateSpec::Mixed { weights };
        }
        if let Some(v) = o.t_start {
            self.time.start = v;
        }
        if let Some(v) = o.t_stop {
            self.time.stop = v;
        }
        if let Some(v) = o.steps {
            self.time.steps = v;
        }
        self.oracle |= o.oracle;
        Ok(())
    }
}

/// Parses `n=a[:b],...`.
fn parse_pairs(spec: &str) -> Result<Vec<(i64, f64, Option<f64>)>, CliError> {
    let bad = || {
        CliError::Config(format!(
            "cannot parse state `{spec}`; expected n=value[:imag],..."
        ))
    };
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (n, value) = item.split_once('=').ok_or_else(bad)?;
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let mut parts = value.split(':');
            let a: f64 = parts
                .next()
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())?;
            let b = match parts.next() {
                Some(s) => Some(s.trim().parse::<f64>().map_err(|_| bad())?),
                None => None,
            };
            if parts.next().is_some() {
                return Err(bad());
            }
            Ok((n, a, b))
        })
        .collect()
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: PhysicalParams,
    pub range: IndexRange,
    pub grid: AngularGrid,
    pub tol: Tolerance,
    pub anchor: Anchor,
    pub observable: Observable,
    pub state: InitialCondition,
    pub times: Vec<f64>,
    pub element_time: f64,
    pub format: Format,
    pub oracle: bool,
}

impl Scenario {
    pub fn from_config(cfg: &ConfigFile) -> Result<Self, CliError> {
        let params = PhysicalParams::new(cfg.hbar, cfg.mass, cfg.radius)?;
        if cfg.range_n < 2 {
            return Err(CliError::Config(format!(
                "N = {} is too small; need N >= 2",
                cfg.range_n
            )));
        }
        let range = IndexRange::symmetric(cfg.range_n);
        let grid = AngularGrid::new(cfg.grid_m)?;
        let tol = Tolerance::new(cfg.tolerance)?;
        let anchor: Anchor = cfg.anchor.parse()?;
        let state = match &cfg.state {
            StateSpec::Pure { amplitudes } => InitialCondition::Pure(AmplitudeState::normalized(
                amplitudes
                    .iter()
                    .map(|&(n, re, im)| (n, Complex64::new(re, im))),
            )?),
            StateSpec::Mixed { weights } => {
                InitialCondition::Mixed(MixedState::new(weights.iter().copied())?)
            }
        };
        let edge = state.max_label() + STATE_EDGE_MARGIN;
        if edge > u64::from(cfg.range_n) {
            return Err(CliError::Config(format!(
                "state support reaches |n| = {} which is within {} of the window edge N = {}; \
                 increase --N to at least {}",
                state.max_label(),
                STATE_EDGE_MARGIN,
                cfg.range_n,
                edge
            )));
        }
        let TimeSpec { start, stop, steps } = cfg.time;
        if steps < 1 || stop <= start || !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Config(format!(
                "time grid needs steps >= 1 and finite stop > start (got start={start}, stop={stop}, steps={steps})"
            )));
        }
        Ok(Self {
            params,
            range,
            grid,
            tol,
            anchor,
            observable: cfg.observable,
            state,
            times: uniform_grid(start, stop, steps),
            element_time: cfg.element_time,
            format: cfg.format,
            oracle: cfg.oracle,
        })
    }

    pub fn model(&self) -> RotorModel {
        RotorModel::new(self.params, self.range)
    }
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// 15 significant digits in scientific notation; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    format!("{:.14e}", x + 0.0)
}

/// `x` rounded to the 15 significant digits that [`format_float`] prints.
fn round_to_printed(x: f64) -> f64 {
    format_float(x).parse().unwrap_or(x)
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(round_to_printed(*v))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Tabular command output plus a pass flag for the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    pub passed: bool,
}

impl Report {
    fn new(command: Command, scenario: &Scenario, columns: Vec<&'static str>) -> Self {
        let p = scenario.params;
        let meta = vec![
            ("command".to_owned(), Cell::from(command.name())),
            ("version".to_owned(), Cell::from(env!("CARGO_PKG_VERSION"))),
            ("hbar".to_owned(), Cell::from(p.hbar())),
            ("mass".to_owned(), Cell::from(p.mass())),
            ("radius".to_owned(), Cell::from(p.radius())),
            ("inertia".to_owned(), Cell::from(p.inertia())),
            ("N".to_owned(), Cell::Int(scenario.range.n_max())),
            ("M".to_owned(), Cell::Int(scenario.grid.points() as i64)),
            ("tolerance".to_owned(), Cell::from(scenario.tol.abs())),
        ];
        Self {
            command: command.name(),
            meta,
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            passed: true,
        }
    }

    fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_owned(), value.into()));
    }

    fn summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_owned(), value.into()));
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let kv = |pairs: &[(String, Cell)]| {
            pairs
                .iter()
                .map(|(k, v)| format!("{k}={}", v.csv()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "# {}", kv(&self.meta));
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}={}", v.csv());
        }
        let _ = writeln!(
            out,
            "# status={}",
            if self.passed { "PASS" } else { "FAIL" }
        );
        out
    }

    pub fn to_json(&self) -> String {
        let object = |pairs: &[(String, Cell)]| {
            Value::Object(
                pairs
                    .iter()
                    .map(|(k, v)| (k.clone(), v.json()))
                    .collect::<Map<_, _>>(),
            )
        };
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| ((*c).to_owned(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".to_owned(), object(&self.meta));
        top.insert("rows".to_owned(), Value::Array(rows));
        let mut summary = object(&self.summary);
        if let Value::Object(map) = &mut summary {
            map.insert("passed".to_owned(), Value::Bool(self.passed));
        }
        top.insert("summary".to_owned(), summary);
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("serialisable");
        text.push('\n');
        text
    }
}

pub fn cmd_spectrum(s: &Scenario) -> Report {
    let mut report = Report::new(Command::Spectrum, s, vec!["n", "energy", "omega_up"]);
    let p = s.params;
    for entry in s.model().spectrum().entries() {
        let omega_up = (p.energy(entry.n + 1) - entry.energy) / p.hbar();
        report
            .rows
            .push(vec![entry.n.into(), entry.energy.into(), omega_up.into()]);
    }
    report
}

pub fn cmd_solve(s: &Scenario) -> Result<Report, CliError> {
    let sol = solve_ladder(&s.params, s.range, s.anchor)?;
    let residuals = verify_solution(&sol, &s.params);
    let mut report = Report::new(
        Command::Solve,
        s,
        vec!["n", "L_diag", "sin_re", "sin_im", "cos_re", "cos_im"],
    );
    report.meta("anchor", s.anchor.name());
    for n in s.range.labels() {
        let mut row = vec![Cell::Int(n), Cell::Float(sol.l_diag(n).unwrap_or(f64::NAN))];
        match (sol.s_plus(n), sol.c_plus(n)) {
            (Some(sp), Some(cp)) => row.extend([sp.re, sp.im, cp.re, cp.im].map(Cell::Float)),
            _ => row.extend(std::iter::repeat_n(Cell::Empty, 4)),
        }
        report.rows.push(row);
    }
    report.summary("residual_commutator_sin", residuals.commutator_sin);
    report.summary("residual_commutator_cos", residuals.commutator_cos);
    report.summary("residual_pythagorean", residuals.pythagorean);
    report.summary("residual_max", residuals.max());
    report.passed = residuals.max() <= s.tol.abs();
    Ok(report)
}

pub fn cmd_verify(s: &Scenario) -> Result<Report, CliError> {
    let checks = commutator_suite(&s.model(), IDENTITY_MARGIN, s.tol)?;
    let mut report = Report::new(
        Command::Verify,
        s,
        vec!["identity", "form", "residual", "status", "expected"],
    );
    report.meta("margin", IDENTITY_MARGIN as i64);
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    for check in &checks {
        let expected = status(check.form == crate::identities::Form::Exact);
        report.rows.push(vec![
            check.name.into(),
            check.form.name().into(),
            check.residual.into(),
            status(check.holds).into(),
            expected.into(),
        ]);
    }
    report.passed = checks.iter().all(|c| c.as_expected());
    Ok(report)
}

fn state_label(state: &InitialCondition) -> String {
    match state {
        InitialCondition::Pure(s) => s
            .amplitudes()
            .map(|(n, c)| format!("{n}={}:{}", format_float(c.re), format_float(c.im)))
            .collect::<Vec<_>>()
            .join(";"),
        InitialCondition::Mixed(s) => s
            .weights()
            .map(|(n, p)| format!("{n}={}", format_float(p)))
            .collect::<Vec<_>>()
            .join(";"),
    }
}

fn oracle_trajectory(s: &Scenario) -> Result<Trajectory, CliError> {
    let obs = GridObservable::for_observable(s.observable, &s.params);
    let name = s.observable.name();
    match &s.state {
        InitialCondition::Pure(state) => Ok(grid_evolve_expectation(
            state, &obs, &s.params, s.grid, &s.times, name,
        )?),
        InitialCondition::Mixed(mixed) => {
            let mut values = vec![Complex64::new(0.0, 0.0); s.times.len()];
            for (n, p) in mixed.weights() {
                let eigen = AmplitudeState::eigenstate(n);
                let traj =
                    grid_evolve_expectation(&eigen, &obs, &s.params, s.grid, &s.times, name)?;
                for (acc, v) in values.iter_mut().zip(traj.values()) {
                    *acc += v * p;
                }
            }
            Ok(Trajectory::new(s.times.clone(), values, name, true)?)
        }
    }
}

pub fn cmd_evolve(s: &Scenario) -> Result<Report, CliError> {
    let model = s.model();
    let op = model.observable(s.observable);
    let traj = expectation_series(
        &s.state,
        &op,
        &model.frequencies(),
        &s.times,
        s.observable.name(),
    )?;
    let mut columns = vec!["t", "re", "im"];
    let oracle = if s.oracle {
        columns.extend(["oracle_re", "oracle_im"]);
        Some(oracle_trajectory(s)?)
    } else {
        None
    };
    let mut report = Report::new(Command::Evolve, s, columns);
    report.meta("observable", s.observable.name());
    report.meta("state", state_label(&s.state).as_str());
    for (i, (&t, v)) in traj.times().iter().zip(traj.values()).enumerate() {
        let mut row = vec![Cell::Float(t), Cell::Float(v.re), Cell::Float(v.im)];
        if let Some(o) = &oracle {
            let w = o.values()[i];
            row.extend([Cell::Float(w.re), Cell::Float(w.im)]);
        }
        report.rows.push(row);
    }
    let max_imag = traj.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    report.summary("max_abs_imag", max_imag);
    if let Some(o) = &oracle {
        let deviation = traj.max_deviation(o).unwrap_or(f64::INFINITY);
        report.summary("max_oracle_deviation", deviation);
        report.passed = deviation <= s.tol.abs();
    }
    Ok(report)
}

pub fn cmd_elements(s: &Scenario) -> Result<Report, CliError> {
    let model = s.model();
    let op = model.observable(s.observable);
    let evolved = evolve_operator(&op, &model.frequencies(), s.element_time)?;
    let mut report = Report::new(Command::Elements, s, vec!["n", "m", "re", "im"]);
    report.meta("observable", s.observable.name());
    report.meta("t", s.element_time);
    for (n, m, z) in evolved.elements() {
        if z.norm() > 0.0 {
            report
                .rows
                .push(vec![n.into(), m.into(), z.re.into(), z.im.into()]);
        }
    }
    Ok(report)
}

pub fn execute(command: Command, s: &Scenario) -> Result<Report, CliError> {
    match command {
        Command::Spectrum => Ok(cmd_spectrum(s)),
        Command::Solve => cmd_solve(s),
        Command::Verify => cmd_verify(s),
        Command::Evolve => cmd_evolve(s),
        Command::Elements => cmd_elements(s),
    }
}

fn run_parsed(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.overrides.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    cfg.apply(&cli.overrides)?;
    let scenario = Scenario::from_config(&cfg)?;
    let report = execute(cli.command, &scenario)?;
    let text = report.render(scenario.format);
    match &cli.overrides.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_PASS
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match run_parsed(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rotor: {e}");
            EXIT_USAGE
        }
    }
}
