//! Command-line front end.
//!
//! Every subcommand builds a validated [`RunConfig`] before any simulation
//! starts, renders its result as JSON, CSV or Markdown, and reports whether
//! all requested comparisons passed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::errpoly::rational_approx;
use crate::noise::corpus::toy_corpus;
use crate::noise::oracle::dense_channel_oracle;
use crate::noise::{fidelity_polynomial, NoisyCircuit, Op, MAX_ORDER};
use crate::protocols::{
    angle_sweep, build_t_gate_pipeline, build_theta_construction, MethodId, PipelineConfig,
    ProtocolError, Stage, SweepReport,
};
use crate::reference::{Measure, SCHEMA};
use crate::tables::{all_pass, table1, table2, table3, AngleGrid, TableCell, TableError, TableOptions};

#[derive(Debug, Parser)]
#[command(name = "steane-tgate", version, about = "First-order fidelity tables for encoded T-gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Methods: ft, ge0, get or all (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub method: Vec<String>,
    /// Stages: state, t-gate, perfect-ec, noisy-ec or all (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub stage: Vec<String>,
    /// Truncation order K.
    #[arg(long, global = true, default_value_t = 1)]
    pub order: u8,
    /// Input angle α for a single evaluation point.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Input phase β for a single evaluation point.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Points per axis of the uniform angle grid.
    #[arg(long, global = true, default_value_t = 8)]
    pub grid: usize,
    /// Projection rounds for ft and ge0.
    #[arg(long, global = true)]
    pub rounds: Option<u8>,
    /// Compare against the bundled reference tables.
    #[arg(long, global = true)]
    pub compare: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Fidelities of the three |Θ> constructions.
    Table1,
    /// Output-state fidelities after the T-gate stages.
    Table2,
    /// Gate fidelities from process tomography.
    Table3,
    /// Angle sweep with trigonometric fits.
    Sweep,
    /// Engine against the dense oracle on the toy corpus.
    OracleCheck,
    /// Prints a pipeline circuit.
    DumpCircuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Invalid(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Engine(#[from] crate::noise::EngineError),
    #[error("csv output failed: {0}")]
    Csv(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Parsed and validated arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub methods: Vec<MethodId>,
    pub stages: Vec<Stage>,
    pub order: u8,
    pub grid: AngleGrid,
    pub alpha: f64,
    pub beta: f64,
    pub projection_rounds: u8,
    pub compare: bool,
    pub format: Format,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_list<T: Copy>(
    raw: &[String],
    all: &[T],
    parse: impl Fn(&str) -> Result<T, ProtocolError>,
) -> Result<Vec<T>, CliError> {
    if raw.is_empty() || raw.iter().any(|s| s == "all") {
        return Ok(all.to_vec());
    }
    Ok(raw.iter().map(|s| parse(s.trim())).collect::<Result<_, _>>()?)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let methods = parse_list(&cli.method, &MethodId::ALL, str::parse)?;
        let default_stages: &[Stage] = match cli.command {
            Command::Table1 => &[Stage::StateOnly],
            Command::DumpCircuit => &[Stage::TGate],
            _ => &Stage::GATE_STAGES,
        };
        let stages = parse_list(&cli.stage, default_stages, str::parse)?;
        if cli.order > MAX_ORDER {
            return Err(invalid(format!("--order {} exceeds the maximum {MAX_ORDER}", cli.order)));
        }
        if cli.order == 2 {
            log::warn!("--order 2 expands every pair of faults; large pipelines take much longer");
        }
        if cli.grid == 0 {
            return Err(invalid("--grid must be at least 1"));
        }
        if cli.workers == Some(0) {
            return Err(invalid("--workers must be at least 1"));
        }
        let d = PipelineConfig::default();
        let alpha = cli.alpha.unwrap_or(d.alpha);
        let beta = cli.beta.unwrap_or(d.beta);
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(invalid("--alpha and --beta must be finite"));
        }
        let grid = if cli.alpha.is_some() || cli.beta.is_some() {
            AngleGrid::Point { alpha, beta }
        } else {
            AngleGrid::Uniform(cli.grid)
        };
        if let Some(r) = cli.rounds {
            if !(1..=2).contains(&r) {
                return Err(invalid(format!("--rounds must be 1 or 2, got {r}")));
            }
            if !cli.method.is_empty() && methods.iter().all(|m| *m == MethodId::Get) {
                return Err(invalid(
                    "--rounds sets the |Θ> projection, which method get does not use; drop --rounds or pick ft/ge0",
                ));
            }
        }
        match cli.command {
            Command::Table1 if stages != [Stage::StateOnly] => {
                return Err(invalid("table1 covers the state stage only; drop --stage"));
            }
            Command::Table2 | Command::Table3 | Command::Sweep
                if stages.contains(&Stage::StateOnly) =>
            {
                return Err(invalid("the state stage has no T-gate output; use table1 for it"));
            }
            Command::Sweep if matches!(grid, AngleGrid::Point { .. }) => {
                return Err(invalid("sweep uses --grid; --alpha and --beta select a single point"));
            }
            Command::DumpCircuit if methods.len() != 1 || stages.len() != 1 => {
                return Err(invalid("dump-circuit needs exactly one --method and one --stage"));
            }
            _ => {}
        }
        Ok(RunConfig {
            command: cli.command,
            methods,
            stages,
            order: cli.order,
            grid,
            alpha,
            beta,
            projection_rounds: cli.rounds.unwrap_or(d.projection_rounds),
            compare: cli.compare,
            format: cli.format,
            workers: cli.workers,
            out: cli.out.clone(),
        })
    }

    fn table_options(&self) -> TableOptions {
        TableOptions {
            methods: self.methods.clone(),
            stages: self.stages.clone(),
            order: self.order,
            projection_rounds: self.projection_rounds,
            grid: self.grid,
            alpha: self.alpha,
            beta: self.beta,
            compare: self.compare,
        }
    }

    fn pipeline(&self, method: MethodId, stage: Stage) -> PipelineConfig {
        PipelineConfig {
            method,
            stage,
            projection_rounds: self.projection_rounds,
            alpha: self.alpha,
            beta: self.beta,
            order: self.order,
        }
    }
}

/// Rendered output and whether every comparison passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: Command,
    config: &'a RunConfig,
    all_pass: Option<bool>,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(config: &RunConfig, all_pass: Option<bool>, body: T) -> String {
    let e = Envelope {
        schema: SCHEMA,
        command: config.command,
        config,
        all_pass,
        body,
    };
    serde_json::to_string_pretty(&e).expect("report serializes") + "\n"
}

/// Runs the subcommand on the current thread pool.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Table1 | Command::Table2 | Command::Table3 => run_table(config),
        Command::Sweep => run_sweep(config),
        Command::OracleCheck => run_oracle_check(config),
        Command::DumpCircuit => run_dump(config),
    }
}

/// Parses, runs with the requested worker count, and writes the output.
/// Returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = RunConfig::from_cli(&cli).and_then(|config| {
        let outcome = match config.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Pool(e.to_string()))?
                .install(|| execute(&config))?,
            None => execute(&config)?,
        };
        match &config.out {
            Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[derive(Serialize)]
struct CellsBody<'a> {
    cells: &'a [TableCell],
}

fn run_table(config: &RunConfig) -> Result<Outcome, CliError> {
    let opts = config.table_options();
    let cells = match config.command {
        Command::Table1 => table1(&opts)?,
        Command::Table2 => table2(&opts)?,
        _ => table3(&opts)?,
    };
    let verdict = all_pass(&cells);
    let text = match config.format {
        Format::Json => envelope(config, verdict, CellsBody { cells: &cells }),
        Format::Csv => cells_csv(&cells)?,
        Format::Markdown => cells_markdown(config, &cells),
    };
    Ok(Outcome {
        text,
        pass: verdict.unwrap_or(true),
    })
}

/// A coefficient as a small fraction where one fits.
pub fn fraction(x: f64) -> String {
    if x.abs() < 1e-9 {
        return "0".into();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    match rational_approx(x.abs(), 64, 1e-6) {
        Some((n, 1)) => format!("{sign}{n}"),
        Some((n, d)) => format!("{sign}{n}/{d}"),
        None => format!("{x:.6}"),
    }
}

fn trig_form(c: [f64; 3]) -> String {
    let labels = ["", "cos4a", "sin²2a sin2b"];
    let mut parts = Vec::new();
    for (v, l) in c.iter().zip(labels) {
        if v.abs() < 1e-9 {
            continue;
        }
        let f = fraction(*v);
        parts.push(match (l.is_empty(), f.as_str()) {
            (true, _) => f,
            (false, "1") => l.to_string(),
            (false, "-1") => format!("-{l}"),
            (false, _) => format!("{f} {l}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// First-order part of a cell in the trig basis, or its polynomial.
pub fn cell_text(cell: &TableCell) -> String {
    match &cell.fit {
        Some(fits) if fits.iter().any(|f| f.coeffs[1].abs() > 1e-9 || f.coeffs[2].abs() > 1e-9) => {
            let mut s = String::from("1");
            for (f, v) in fits.iter().zip(["px", "py", "pz"]) {
                let t = trig_form(f.coeffs);
                if t != "0" {
                    let _ = write!(s, " + ({t}) {v}");
                }
            }
            if cell.polynomial.order() > 1 {
                s.push_str(" + O(p²)");
            }
            s
        }
        _ => cell.polynomial.pretty(),
    }
}

fn verdict_text(cell: &TableCell) -> String {
    match &cell.comparison {
        None => String::new(),
        Some(c) if c.pass => "pass".into(),
        Some(c) => format!("FAIL (max dev {:.3})", c.max_deviation),
    }
}

fn cells_markdown(config: &RunConfig, cells: &[TableCell]) -> String {
    let mut out = String::new();
    let title = match config.command {
        Command::Table1 => "Fidelity of the |Θ> constructions",
        Command::Table2 => "Output fidelity after the T-gate",
        _ => "Logical gate fidelity",
    };
    let _ = writeln!(out, "## {}\n", title.replace('|', "\\|"));
    let _ = write!(out, "| |");
    for m in &config.methods {
        let _ = write!(out, " {} |", m.label().replace('|', "\\|"));
    }
    let _ = write!(out, "\n|---|");
    for _ in &config.methods {
        let _ = write!(out, "---|");
    }
    out.push('\n');
    let mut rows: Vec<(Measure, Stage)> = Vec::new();
    for c in cells {
        if !rows.contains(&(c.measure, c.stage)) {
            rows.push((c.measure, c.stage));
        }
    }
    for (measure, stage) in rows {
        let head = match config.command {
            Command::Table1 => measure.label().to_string(),
            Command::Table2 => format!("{} {}", measure.label(), stage.label()),
            _ => stage.label().to_string(),
        };
        let _ = write!(out, "| {head} |");
        for m in &config.methods {
            let text = cells
                .iter()
                .find(|c| c.method == *m && c.stage == stage && c.measure == measure)
                .map(|c| {
                    let v = verdict_text(c);
                    if v.is_empty() {
                        format!("`{}`", cell_text(c))
                    } else {
                        format!("`{}` {v}", cell_text(c))
                    }
                })
                .unwrap_or_default();
            let _ = write!(out, " {text} |");
        }
        out.push('\n');
    }
    if let Some(ok) = all_pass(cells) {
        let n = cells.iter().filter(|c| c.comparison.as_ref().is_some_and(|x| x.pass)).count();
        let total = cells.iter().filter(|c| c.comparison.is_some()).count();
        let _ = writeln!(out, "\n{n}/{total} cells match the reference ({})", if ok { "all pass" } else { "mismatch" });
    }
    out
}

fn csv_text<F>(header: &[&str], fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Csv(e.to_string()))?;
    fill(&mut w).map_err(|e| CliError::Csv(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn cells_csv(cells: &[TableCell]) -> Result<String, CliError> {
    csv_text(
        &[
            "table", "method", "stage", "measure", "px", "py", "pz", "polynomial", "reference",
            "max_deviation", "pass",
        ],
        |w| {
            for c in cells {
                let lin = c.polynomial.linear();
                let (reference, dev, pass) = match &c.comparison {
                    Some(x) => (x.printed.clone(), format!("{:e}", x.max_deviation), x.pass.to_string()),
                    None => (String::new(), String::new(), String::new()),
                };
                w.write_record([
                    c.table.to_string(),
                    c.method.to_string(),
                    c.stage.to_string(),
                    c.measure.to_string(),
                    lin[0].to_string(),
                    lin[1].to_string(),
                    lin[2].to_string(),
                    cell_text(c),
                    reference,
                    dev,
                    pass,
                ])?;
            }
            Ok(())
        },
    )
}

#[derive(Serialize)]
struct SweepBody<'a> {
    sweeps: &'a [SweepReport],
}

fn run_sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let (alphas, betas) = config.grid.axes();
    let mut sweeps = Vec::new();
    for &stage in &config.stages {
        for &method in &config.methods {
            sweeps.push(angle_sweep(&config.pipeline(method, stage), &alphas, &betas)?);
        }
    }
    let text = match config.format {
        Format::Json => envelope(config, None, SweepBody { sweeps: &sweeps }),
        Format::Csv => csv_text(
            &["method", "stage", "measure", "variable", "const", "cos4a", "sin2a2_sin2b", "residual"],
            |w| {
                for s in &sweeps {
                    for (measure, fits) in [("seven_qubit", &s.seven_qubit_fits), ("one_qubit", &s.one_qubit_fits)] {
                        for (f, v) in fits.iter().zip(["px", "py", "pz"]) {
                            w.write_record([
                                s.method.to_string(),
                                s.stage.to_string(),
                                measure.to_string(),
                                v.to_string(),
                                f.coeffs[0].to_string(),
                                f.coeffs[1].to_string(),
                                f.coeffs[2].to_string(),
                                format!("{:e}", f.residual),
                            ])?;
                        }
                    }
                }
                Ok(())
            },
        )?,
        Format::Markdown => {
            let mut out = String::from("| method | stage | measure | px | py | pz | residual |\n|---|---|---|---|---|---|---|\n");
            for s in &sweeps {
                for (measure, fits) in [("7-qubit", &s.seven_qubit_fits), ("logical qubit", &s.one_qubit_fits)] {
                    let res = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
                    let _ = writeln!(
                        out,
                        "| {} | {} | {measure} | {} | {} | {} | {res:.1e} |",
                        s.method,
                        s.stage,
                        trig_form(fits[0].coeffs),
                        trig_form(fits[1].coeffs),
                        trig_form(fits[2].coeffs),
                    );
                }
            }
            out
        }
    };
    Ok(Outcome { text, pass: true })
}

/// One engine-versus-oracle evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub circuit: String,
    pub order: u8,
    pub p: f64,
    pub polynomial: f64,
    pub oracle: f64,
    pub deviation: f64,
    /// `100 p^(K+1)`.
    pub bound: f64,
    pub pass: bool,
}

/// Compares the truncated fidelity with the exact channel on every toy
/// circuit at `p = 1e-3` and `1e-4`.
pub fn oracle_rows(order: u8) -> Result<Vec<OracleRow>, CliError> {
    let mut rows = Vec::new();
    for toy in toy_corpus() {
        let poly = fidelity_polynomial(&toy.circuit, order)?;
        for p in [1e-3, 1e-4] {
            let (_, exact) = dense_channel_oracle(&toy.circuit, p, p, p)?;
            let approx = poly.fidelity.eval(p, p, p);
            let deviation = (approx - exact).abs();
            let bound = 100.0 * p.powi(order as i32 + 1);
            rows.push(OracleRow {
                circuit: toy.name.to_string(),
                order,
                p,
                polynomial: approx,
                oracle: exact,
                deviation,
                bound,
                pass: deviation <= bound,
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct OracleBody<'a> {
    max_deviation: f64,
    rows: &'a [OracleRow],
}

fn run_oracle_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let rows = oracle_rows(config.order)?;
    let pass = rows.iter().all(|r| r.pass);
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let text = match config.format {
        Format::Json => envelope(config, Some(pass), OracleBody { max_deviation, rows: &rows }),
        Format::Csv => csv_text(
            &["circuit", "order", "p", "polynomial", "oracle", "deviation", "bound", "pass"],
            |w| {
                for r in &rows {
                    w.write_record([
                        r.circuit.clone(),
                        r.order.to_string(),
                        format!("{:e}", r.p),
                        r.polynomial.to_string(),
                        r.oracle.to_string(),
                        format!("{:e}", r.deviation),
                        format!("{:e}", r.bound),
                        r.pass.to_string(),
                    ])?;
                }
                Ok(())
            },
        )?,
        Format::Markdown => {
            let mut out = String::from("| circuit | K | p | deviation | bound | |\n|---|---|---|---|---|---|\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {:e} | {:.2e} | {:.2e} | {} |",
                    r.circuit,
                    r.order,
                    r.p,
                    r.deviation,
                    r.bound,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(out, "\nmax deviation {max_deviation:.3e}");
            out
        }
    };
    Ok(Outcome { text, pass })
}

/// Short text for one operation.
pub fn describe(op: &Op) -> String {
    match op {
        Op::Init { wire } => format!("init q{wire}"),
        Op::Gate { gate, wires } => format!("{gate:?} {}", wire_list(wires)),
        Op::Measure { wire, basis, record } => {
            let rec = match record {
                crate::noise::Record::PostSelect { outcome } => format!("keep {}", u8::from(*outcome)),
                crate::noise::Record::Parity { register } => format!("-> r{register}"),
                crate::noise::Record::Parities { registers } => {
                    let r: Vec<String> = registers.iter().map(|r| format!("r{r}")).collect();
                    format!("-> {}", r.join(","))
                }
                crate::noise::Record::Discard => "discard".into(),
            };
            format!("measure{basis:?} q{wire} {rec}")
        }
        Op::PostSelectParity { register, odd } => {
            format!("keep r{register} {}", if *odd { "odd" } else { "even" })
        }
        Op::Prepare { wires, .. } => format!("prepare {}", wire_list(wires)),
        Op::Recover(r) => format!("perfect recovery {}", wire_list(&r.wires)),
    }
}

fn wire_list(wires: &[usize]) -> String {
    wires.iter().map(|w| format!("q{w}")).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct DumpBody<'a> {
    method: MethodId,
    stage: Stage,
    locations: usize,
    noisy_locations: usize,
    noisy_slots: usize,
    peak_live_qubits: usize,
    circuit: &'a NoisyCircuit,
}

fn run_dump(config: &RunConfig) -> Result<Outcome, CliError> {
    let (method, stage) = (config.methods[0], config.stages[0]);
    let circuit = if stage == Stage::StateOnly {
        build_theta_construction(method, config.projection_rounds)?
    } else {
        build_t_gate_pipeline(&config.pipeline(method, stage))?.circuit
    };
    let peak = circuit.validate()?;
    let text = match config.format {
        Format::Json => envelope(
            config,
            None,
            DumpBody {
                method,
                stage,
                locations: circuit.locations.len(),
                noisy_locations: circuit.noisy_locations(),
                noisy_slots: circuit.noisy_slots(),
                peak_live_qubits: peak,
                circuit: &circuit,
            },
        ),
        Format::Csv => csv_text(&["index", "op", "noisy"], |w| {
            for (i, l) in circuit.locations.iter().enumerate() {
                w.write_record([i.to_string(), describe(&l.op), l.noisy.to_string()])?;
            }
            Ok(())
        })?,
        Format::Markdown => {
            let mut out = format!(
                "{method} {stage}: {} locations, {} noisy slots, peak {peak} qubits\n\n| # | op | noisy |\n|---|---|---|\n",
                circuit.locations.len(),
                circuit.noisy_slots()
            );
            for (i, l) in circuit.locations.iter().enumerate() {
                let _ = writeln!(out, "| {i} | {} | {} |", describe(&l.op), if l.noisy { "yes" } else { "" });
            }
            out
        }
    };
    Ok(Outcome { text, pass: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["steane-tgate"];
        full.extend_from_slice(args);
        RunConfig::from_cli(&Cli::try_parse_from(full).expect("clap accepts"))
    }

    #[test]
    fn defaults() {
        let c = parse(&["table2"]).unwrap();
        assert_eq!(c.methods, MethodId::ALL);
        assert_eq!(c.stages, Stage::GATE_STAGES);
        assert_eq!(c.grid, AngleGrid::Uniform(8));
        assert_eq!(c.order, 1);
        assert_eq!(parse(&["table1"]).unwrap().stages, [Stage::StateOnly]);
    }

    #[test]
    fn lists_and_points() {
        let c = parse(&["table2", "--method", "ft,get", "--stage", "noisy-ec", "--alpha", "0.3", "--beta", "-1"]).unwrap();
        assert_eq!(c.methods, [MethodId::Ft, MethodId::Get]);
        assert_eq!(c.stages, [Stage::TGateNoisyEc]);
        assert_eq!(c.grid, AngleGrid::Point { alpha: 0.3, beta: -1.0 });
    }

    #[test]
    fn rejects_bad_combinations() {
        assert!(parse(&["table2", "--method", "get", "--rounds", "1"]).is_err());
        assert!(parse(&["table2", "--rounds", "3"]).is_err());
        assert!(parse(&["table2", "--method", "xyz"]).is_err());
        assert!(parse(&["table1", "--stage", "t-gate"]).is_err());
        assert!(parse(&["table3", "--stage", "state"]).is_err());
        assert!(parse(&["sweep", "--alpha", "1"]).is_err());
        assert!(parse(&["dump-circuit", "--method", "ft,ge0"]).is_err());
        assert!(parse(&["table1", "--order", "3"]).is_err());
        assert!(parse(&["table1", "--grid", "0"]).is_err());
        assert!(parse(&["table1", "--rounds", "1"]).is_ok());
    }

    #[test]
    fn fractions() {
        assert_eq!(fraction(-83.5), "-167/2");
        assert_eq!(fraction(0.25), "1/4");
        assert_eq!(fraction(1e-12), "0");
        assert_eq!(trig_form([-2.25, -0.75, 1.5]), "-9/4 - 3/4 cos4a + 3/2 sin²2a sin2b");
    }

    #[test]
    fn order_zero_tables_are_constant() {
        let c = parse(&["table1", "--order", "0", "--compare"]).unwrap();
        let out = execute(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["schema"], 1);
        for cell in v["cells"].as_array().unwrap() {
            assert_eq!(cell["polynomial"]["order"], 0);
        }
        assert!(!out.pass);
    }

    #[test]
    fn dump_lists_locations() {
        let c = parse(&["dump-circuit", "--method", "get", "--stage", "state", "--format", "markdown"]).unwrap();
        let out = execute(&c).unwrap();
        assert!(out.text.contains("| 0 | init q0 | yes |"));
        let c = parse(&["dump-circuit", "--method", "ft", "--stage", "noisy-ec"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&execute(&c).unwrap().text).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v["noisy_slots"].as_u64().unwrap() > 100);
    }
}
