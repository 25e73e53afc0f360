//! Configuration ingestion, experiment orchestration, and machine-readable
//! output (CSV or JSON tables plus a summary block embedding the fully
//! resolved configuration).
//!
//! Exit codes: 0 success, 2 config error, 3 truncation fault, 4 validation
//! failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{self, BudgetParams};
use crate::protocol::{self, JcPhase, ProtocolParams, StepRecord};
use crate::quantum::{self, random, DensityMatrix, SystemSpace};
use crate::walk::{self, JCParams, WalkVariant};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Walk,
    Protocol,
    FidelityCurve,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    Hadamard,
    Flip,
    #[default]
    Damped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Fully-resolved run configuration; a serialized copy rides along in every
/// summary block so any output can be reproduced from itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub g: f64,
    pub delta_g: f64,
    pub gamma: f64,
    pub gamma_c: f64,
    pub gamma_sted: f64,
    pub sigma_n: f64,
    pub n_target: usize,
    pub k: u32,
    pub n_max: Option<usize>,
    pub steps: usize,
    pub trajectories: usize,
    pub seed: u64,
    pub tau_gamma: Option<f64>,
    pub jc_phase: JcPhase,
    pub decay_coupling: bool,
    pub variant: WalkKind,
    pub eta: f64,
    pub targets: Vec<usize>,
    pub alpha: f64,
    pub wait_multiple: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = ProtocolParams::default();
        RunConfig {
            mode: None,
            g: p.g,
            delta_g: p.delta_g,
            gamma: p.gamma,
            gamma_c: p.gamma_c,
            gamma_sted: p.gamma_sted,
            sigma_n: p.sigma_n,
            n_target: p.n_target,
            k: p.k,
            n_max: None,
            steps: p.steps,
            trajectories: p.trajectories,
            seed: p.seed,
            tau_gamma: None,
            jc_phase: p.jc_phase,
            decay_coupling: p.decay_coupling,
            variant: WalkKind::Damped,
            eta: 0.0,
            targets: vec![],
            alpha: 0.5,
            wait_multiple: 5.0,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn n_max(&self) -> usize {
        self.n_max.unwrap_or(self.n_target + 10)
    }

    pub fn protocol_params(&self) -> ProtocolParams {
        ProtocolParams {
            g: self.g,
            delta_g: self.delta_g,
            gamma: self.gamma,
            gamma_c: self.gamma_c,
            gamma_sted: self.gamma_sted,
            sigma_n: self.sigma_n,
            n_target: self.n_target,
            k: self.k,
            n_max: self.n_max(),
            steps: self.steps,
            trajectories: self.trajectories,
            seed: self.seed,
            tau_gamma: self.tau_gamma,
            jc_phase: self.jc_phase,
            decay_coupling: self.decay_coupling,
        }
    }

    /// Copy with every optional field pinned, for embedding in summaries.
    pub fn resolved(&self, mode: Mode) -> RunConfig {
        let mut c = self.clone();
        c.mode = Some(mode);
        c.n_max = Some(self.n_max());
        c.tau_gamma = Some(self.tau_gamma.unwrap_or(5.0 / self.gamma_sted));
        c
    }
}

#[derive(Debug, Parser)]
#[command(name = "fockwalk", version, about = "Damped Jaynes-Cummings walk simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Abstract quantum-random-walk evolution (step, n, probability table)
    Walk(CommonArgs),
    /// Full experimental recurrence with noise ensembles (per-step records)
    Protocol(CommonArgs),
    /// Analytic vs numeric stationary fidelity across target Fock numbers
    FidelityCurve(CommonArgs),
    /// Run the built-in invariant suite and report pass/fail per property
    Validate,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML key-value file with any subset of the config fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub delta_g: Option<f64>,
    #[arg(long)]
    pub gamma_c: Option<f64>,
    #[arg(long)]
    pub gamma_sted: Option<f64>,
    #[arg(long)]
    pub sigma_n: Option<f64>,
    #[arg(long)]
    pub n_target: Option<usize>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tau_gamma: Option<f64>,
    #[arg(long)]
    pub variant: Option<WalkKind>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Comma-separated target Fock numbers for fidelity-curve
    #[arg(long)]
    pub targets: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

impl CommonArgs {
    pub fn build_config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { c.$field = v; })*
            };
        }
        set!(g, delta_g, gamma_c, gamma_sted, sigma_n, n_target, k, steps, trajectories, seed, eta, alpha, variant, format);
        if let Some(v) = self.n_max {
            c.n_max = Some(v);
        }
        if let Some(v) = self.tau_gamma {
            c.tau_gamma = Some(v);
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        if let Some(t) = &self.targets {
            c.targets = t
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Config(format!("bad target '{s}': {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

/// Column-labelled numeric table with deterministic, locale-independent
/// rendering (full double precision, scientific notation).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Cell::Int(v) => {
                        write!(out, "{v}").unwrap();
                    }
                    Cell::Float(v) => {
                        write!(out, "{v:.17e}").unwrap();
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (i, name) in self.columns.iter().enumerate() {
            let col: Vec<serde_json::Value> = self
                .rows
                .iter()
                .map(|row| match row[i] {
                    Cell::Int(v) => json!(v),
                    Cell::Float(v) => json!(v),
                })
                .collect();
            obj.insert(name.clone(), serde_json::Value::Array(col));
        }
        serde_json::Value::Object(obj)
    }
}

/// Write the table and summary to the configured destination: a JSON run is
/// one object with `columns` and `summary`; a CSV run writes the table and
/// puts the summary in a sibling `.summary.json` file (or trails it on
/// stdout).
pub fn emit(config: &RunConfig, table: &Table, summary: serde_json::Value) -> Result<()> {
    match config.format {
        OutputFormat::Json => {
            let doc = json!({ "columns": table.to_json(), "summary": summary });
            let text = serde_json::to_string_pretty(&doc).expect("json serialization");
            match &config.out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
        }
        OutputFormat::Csv => {
            let csv = table.to_csv();
            let summary_text =
                serde_json::to_string_pretty(&summary).expect("json serialization");
            match &config.out {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    let sibling = summary_path(path);
                    std::fs::write(sibling, summary_text + "\n")?;
                }
                None => {
                    print!("{csv}");
                    println!("{summary_text}");
                }
            }
        }
    }
    Ok(())
}

pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    out.with_file_name(format!("{stem}.summary.json"))
}

pub fn cmd_walk(config: &RunConfig) -> Result<()> {
    let n_max = config.n_max();
    let space = SystemSpace::new(n_max)?;
    let tau = walk::trapping_time(config.g, config.n_target, config.k)?;
    let params = JCParams::new(config.g, tau)?;
    let variant = match config.variant {
        WalkKind::Hadamard => WalkVariant::UnitaryHadamard,
        WalkKind::Flip => WalkVariant::UnitaryFlip,
        WalkKind::Damped => {
            if !(0.0..=1.0).contains(&config.eta) {
                return Err(Error::Config(format!("eta out of [0,1]: {}", config.eta)));
            }
            WalkVariant::Damped(config.eta)
        }
    };
    let initial = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
    let dists = walk::run_walk(variant, params, config.steps, &initial)?;

    let mut rows = Vec::with_capacity(dists.len() * space.fock_dim());
    for (step, dist) in dists.iter().enumerate() {
        for (n, p) in dist.iter().enumerate() {
            rows.push(vec![
                Cell::Int(step as i64),
                Cell::Int(n as i64),
                Cell::Float(*p),
            ]);
        }
    }
    let table = Table {
        columns: vec!["step".into(), "n".into(), "probability".into()],
        rows,
    };
    let last = dists.last().expect("at least the initial distribution");
    let summary = json!({
        "final_target_population": last[config.n_target],
        "config": config.resolved(Mode::Walk),
    });
    emit(config, &table, summary)
}

fn record_columns(n_max: usize) -> Vec<String> {
    let mut cols = vec![
        "step".to_string(),
        "fidelity".to_string(),
        "fidelity_std".to_string(),
        "leak".to_string(),
        "coin_excited".to_string(),
    ];
    for n in 0..=n_max {
        cols.push(format!("p{n}"));
    }
    cols
}

fn record_rows(records: &[StepRecord]) -> Vec<Vec<Cell>> {
    records
        .iter()
        .map(|r| {
            let mut row = vec![
                Cell::Int(r.step as i64),
                Cell::Float(r.fidelity),
                Cell::Float(r.fidelity_std),
                Cell::Float(r.leak),
                Cell::Float(r.coin_excited),
            ];
            row.extend(r.populations.iter().map(|&p| Cell::Float(p)));
            row
        })
        .collect()
}

pub fn cmd_protocol(config: &RunConfig) -> Result<()> {
    let params = config.protocol_params();
    let records = protocol::run_protocol(&params)?;

    let table = Table {
        columns: record_columns(params.n_max),
        rows: record_rows(&records),
    };
    let peak = records
        .iter()
        .max_by(|a, b| a.fidelity.partial_cmp(&b.fidelity).unwrap())
        .expect("non-empty records");
    let snapshot = records.iter().find(|r| r.step == 73);
    let summary = json!({
        "peak_fidelity": peak.fidelity,
        "peak_step": peak.step,
        "stabilization_step": protocol::stabilization_step(&records),
        "step73_populations": snapshot.map(|r| r.populations.clone()),
        "final_fidelity": records.last().map(|r| r.fidelity),
        "config": config.resolved(Mode::Protocol),
    });
    emit(config, &table, summary)
}

pub fn cmd_fidelity_curve(config: &RunConfig) -> Result<()> {
    if config.targets.is_empty() {
        return Err(Error::Config("no targets".into()));
    }
    let rate_ratio = config.gamma_c / config.gamma_sted;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for &n_t in &config.targets {
        if n_t < 1 {
            return Err(Error::Config("targets must be >= 1".into()));
        }
        let params = ProtocolParams {
            n_target: n_t,
            n_max: config.n_max.unwrap_or(n_t + 10),
            ..config.protocol_params()
        };
        let records = protocol::run_protocol(&params)?;
        let point = analysis::alpha_from_records(n_t, &records)?;
        let budget = BudgetParams {
            n_target: n_t,
            wait_multiple: config.wait_multiple,
            alpha: config.alpha,
            rate_ratio,
        };
        let f_analytic = analysis::analytic_fidelity(&budget)?;
        rows.push(vec![
            Cell::Int(n_t as i64),
            Cell::Float(f_analytic),
            Cell::Float(point.fidelity),
            Cell::Float(point.alpha),
        ]);
        points.push(point);
    }
    let table = Table {
        columns: vec![
            "n_target".into(),
            "f_analytic".into(),
            "f_numeric".into(),
            "alpha_estimate".into(),
        ],
        rows,
    };
    let estimate = analysis::estimate_alpha(&points)?;
    let summary = json!({
        "alpha_mean": estimate.mean,
        "rate_ratio": rate_ratio,
        "config": config.resolved(Mode::FidelityCurve),
    });
    emit(config, &table, summary)
}

/// Built-in invariant suite; prints one pass/fail line per property and
/// reports overall success.
pub fn cmd_validate() -> bool {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        all_ok &= ok;
    };

    check("kraus-completeness", {
        [0.0, 0.25, 0.5, 0.75, 1.0].iter().all(|&eta| {
            walk::coin_damping(eta)
                .map(|c| c.completeness_defect() <= 1e-12)
                .unwrap_or(false)
        })
    });

    check("jc-unitarity", {
        let space = SystemSpace::new(12).unwrap();
        let u = walk::jc_unitary(JCParams::new(2.1, 0.83).unwrap(), space);
        let prod = quantum::dagger(&u).dot(&u);
        quantum::max_abs_diff(&prod, &quantum::identity(space.dim())) <= 1e-12
    });

    check("trapping-fixed-point", {
        let n_t = 4;
        let space = SystemSpace::new(n_t + 5).unwrap();
        let tau = walk::trapping_time(1.0, n_t, 1).unwrap();
        let params = JCParams::new(1.0, tau).unwrap();
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, n_t));
        walk::walk_step(&rho, WalkVariant::Damped(0.0), params)
            .map(|out| quantum::max_abs_diff(out.mat(), rho.mat()) <= 1e-12)
            .unwrap_or(false)
    });

    check("coin-decay-oracle", {
        let gamma = 1.0e4;
        let t = 5.0 / gamma;
        let lind = crate::lindblad::Lindbladian::new(
            ndarray::Array2::zeros((2, 2)),
            vec![(quantum::ops::sigma_minus(), gamma)],
        )
        .unwrap();
        crate::lindblad::propagate(&lind, &DensityMatrix::basis_state(2, 0), t)
            .map(|out| (out.mat()[[0, 0]].re - (-5.0_f64).exp()).abs() <= 1e-9)
            .unwrap_or(false)
    });

    check("cavity-decay-oracle", {
        let f = 8;
        let gamma_c = 0.1;
        let t = 3.0;
        let lind = crate::lindblad::Lindbladian::new(
            ndarray::Array2::zeros((f, f)),
            vec![(quantum::ops::annihilation(f), gamma_c)],
        )
        .unwrap();
        (1..=6).all(|n| {
            crate::lindblad::propagate(&lind, &DensityMatrix::basis_state(f, n), t)
                .map(|out| {
                    (out.mat()[[n, n]].re - (-(n as f64) * gamma_c * t).exp()).abs() <= 1e-8
                })
                .unwrap_or(false)
        })
    });

    check("walk-step-cptp", {
        let space = SystemSpace::new(6).unwrap();
        let params = JCParams::new(1.4, 0.6).unwrap();
        let mut rng = random::rng(1001);
        [0.0, 0.4, 1.0].iter().all(|&eta| {
            (0..5).all(|_| {
                let rho = random::random_density(&mut rng, space.dim());
                walk::walk_step(&rho, WalkVariant::Damped(eta), params)
                    .and_then(|out| DensityMatrix::new(out.mat().clone()))
                    .is_ok()
            })
        })
    });

    check("expm-inverse", {
        let mut rng = random::rng(1002);
        (0..5).all(|_| {
            let m = random::random_cmatrix(&mut rng, 8);
            let e = quantum::expm(&m).unwrap();
            let einv = quantum::expm(&m.mapv(|z| -z)).unwrap();
            quantum::max_abs_diff(&e.dot(&einv), &quantum::identity(8)) <= 1e-10
        })
    });

    check("propagate-vs-rk4", {
        let space = SystemSpace::new(4).unwrap();
        let h = crate::lindblad::SystemHamiltonian {
            delta_g: 300.0,
            delta_s: 0.0,
            g: 30.0,
        }
        .build(space);
        let f = space.fock_dim();
        let lind = crate::lindblad::Lindbladian::new(
            h,
            vec![
                (
                    quantum::kron(&quantum::ops::sigma_minus(), &quantum::identity(f)),
                    1.0e4,
                ),
                (
                    quantum::kron(&quantum::identity(2), &quantum::ops::annihilation(f)),
                    0.1,
                ),
            ],
        )
        .unwrap();
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, 1));
        let t = 5.0e-4;
        let exact = crate::lindblad::propagate(&lind, &rho, t).unwrap();
        crate::lindblad::propagate_rk4(&lind, &rho, t, 4000)
            .map(|rk| quantum::max_abs_diff(exact.mat(), rk.mat()) <= 1e-7)
            .unwrap_or(false)
    });

    all_ok
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Walk(args) => args.build_config().and_then(|c| cmd_walk(&c)),
        Command::Protocol(args) => args.build_config().and_then(|c| cmd_protocol(&c)),
        Command::FidelityCurve(args) => {
            args.build_config().and_then(|c| cmd_fidelity_curve(&c))
        }
        Command::Validate => {
            return if cmd_validate() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            };
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter(_) => EXIT_CONFIG,
                Error::Truncation { .. } => EXIT_TRUNCATION,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rendering_is_deterministic() {
        let table = Table {
            columns: vec!["step".into(), "value".into()],
            rows: vec![
                vec![Cell::Int(0), Cell::Float(0.5)],
                vec![Cell::Int(1), Cell::Float(1.0 / 3.0)],
            ],
        };
        let csv = table.to_csv();
        assert!(csv.starts_with("step,value\n"));
        assert_eq!(csv, table.to_csv());
        assert!(csv.contains("3.33333333333333315e-1"));

        let j = table.to_json();
        assert_eq!(j["step"], json!([0, 1]));
    }

    #[test]
    fn config_defaults_and_overrides() {
        let args = CommonArgs {
            n_target: Some(4),
            sigma_n: Some(0.01),
            targets: Some("2, 4,6".into()),
            ..Default::default()
        };
        let c = args.build_config().unwrap();
        assert_eq!(c.n_target, 4);
        assert_eq!(c.n_max(), 14);
        assert_eq!(c.targets, vec![2, 4, 6]);
        assert_eq!(c.sigma_n, 0.01);

        let bad = CommonArgs {
            targets: Some("2,x".into()),
            ..Default::default()
        };
        assert!(bad.build_config().is_err());
    }

    #[test]
    fn config_file_roundtrip() {
        let c = RunConfig::default().resolved(Mode::Protocol);
        let text = toml::to_string(&c).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn summary_path_sibling() {
        let p = summary_path(Path::new("runs/case2.csv"));
        assert_eq!(p, PathBuf::from("runs/case2.summary.json"));
    }

    #[test]
    fn fidelity_curve_requires_targets() {
        let c = RunConfig::default();
        let err = cmd_fidelity_curve(&c).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
