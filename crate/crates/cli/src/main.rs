//! Command-line front end: runs the chart pipelines, verifiers, and oracles
//! and exports charts as JSON, ASCII grids, or static SVG.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quivex::assembly::{bp_pipeline, sphere_pipeline};
use quivex::bp_analysis::{bp_e2_chart, bp_einfty_check, toda_vanishing_check};
use quivex::couples::moore_resolution_check;
use quivex::linalg::graded::Window;
use quivex::linalg::scalar::Prime;
use quivex::quiver::ext::{ext, ExtChart};
use quivex::quiver::serial::{chart_to_json, preset_from_json, rep_from_json};
use quivex::steenrod::{cobar_ext_oracle, minimal_resolution};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "quivex", version, about = "Exact Adams E2 charts for quiver homology theories")]
struct Cli {
    /// Optional key=value config file presetting numeric options
    /// (e.g. `prime=2`); explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute and export charts
    #[command(subcommand)]
    Chart(ChartCmd),
    /// Exact-couple computations on representation files
    #[command(subcommand)]
    Couples(CouplesCmd),
    /// Run a verifier; nonzero exit and a witness cell on failure
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run an independent oracle computation
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum ChartCmd {
    /// Steenrod-algebra Ext chart from the minimal resolution (p = 2)
    ExtA {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
        /// Filtration bound; defaults to max-t
        #[arg(long)]
        max_s: Option<u32>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Integral Adams E2 chart of the sphere (p = 2)
    IntegralSphere {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_stem: Option<u32>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Integral Adams E2 chart of BP
    Bp {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
        /// `mv` assembles the chart; `closed-form` evaluates the formula
        #[arg(long, value_enum)]
        mode: BpMode,
        #[command(flatten)]
        out: OutOpts,
    },
}

#[derive(Subcommand)]
enum CouplesCmd {
    /// Ext chart between two representations read from a JSON file
    Ext {
        /// JSON document with `preset`, `x`, and `y` fields
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        max_s: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
        #[command(flatten)]
        out: OutOpts,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check the periodic resolution of the mod p^k Moore couple
    Moore {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Check vanishing of the BP obstruction cells through stage max-n
    Toda {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Check the predicted differential pattern against E∞ counting for BP
    EinftyBp {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
    },
    /// Cross-check the minimal resolution against the cobar complex (p = 2)
    Cobar {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Ext chart of the Steenrod algebra from the reduced cobar complex
    Cobar {
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        max_t: Option<i64>,
        #[command(flatten)]
        out: OutOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BpMode {
    Mv,
    ClosedForm,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Ascii,
    Svg,
}

#[derive(Args)]
struct OutOpts {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this path instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum CliError {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
    /// A verifier rejected the computation: exit 1, witness printed.
    Verification(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Run = Result<(), CliError>;

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("QA_THREADS") {
        match v.parse::<usize>() {
            Ok(n) => quivex::par::configure_threads(n),
            Err(_) => {
                eprintln!("error: QA_THREADS must be a non-negative integer, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests print and exit 0; real usage errors exit 2
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// config file and reproducibility header

#[derive(Default)]
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config {}: line {} is not key=value",
                    path.display(),
                    i + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config(map))
    }

    /// Flag value if given, else the config entry under `key`.
    fn resolve<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(key) {
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Usage(format!("config value `{raw}` for `{key}` is invalid"))
            }),
            None => Err(CliError::Usage(format!(
                "missing required option --{key} (no config default)"
            ))),
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

struct Header {
    command: String,
    prime: u32,
    window: String,
    presets: Vec<String>,
    fixtures: Vec<(String, u64)>,
}

impl Header {
    fn emit(&self) {
        let mut s = String::new();
        let _ = writeln!(s, "# quivex {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# prime: {}", self.prime);
        let _ = writeln!(s, "# window: {}", self.window);
        for p in &self.presets {
            let _ = writeln!(s, "# preset: {p}");
        }
        for (name, hash) in &self.fixtures {
            let _ = writeln!(s, "# fixture: {name} fnv1a={hash:016x}");
        }
        eprint!("{s}");
    }
}

fn emit_chart(chart: &ExtChart, out: &OutOpts) -> Run {
    let text = match out.format {
        Format::Json => chart_to_json(chart),
        Format::Ascii => render::ascii(chart),
        Format::Svg => render::svg(chart),
    };
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// dispatch

fn run(cli: Cli) -> Run {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Chart(c) => run_chart(c, &cfg),
        Cmd::Couples(c) => run_couples(c, &cfg),
        Cmd::Verify(c) => run_verify(c, &cfg),
        Cmd::Oracle(c) => run_oracle(c, &cfg),
    }
}

fn run_chart(cmd: ChartCmd, cfg: &Config) -> Run {
    match cmd {
        ChartCmd::ExtA { prime, max_t, max_s, out } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            if p != 2 {
                return Err(CliError::Usage(format!(
                    "the minimal-resolution chart is implemented at prime 2 only, got {p}"
                )));
            }
            let max_t: i64 = cfg.resolve(max_t, "max-t")?;
            let max_s = match max_s.or_else(|| cfg.resolve(None, "max-s").ok()) {
                Some(s) => s,
                None => max_t.max(0) as u32,
            };
            Header {
                command: "chart ext-a".into(),
                prime: p,
                window: format!("s ≤ {max_s}, 0 ≤ t ≤ {max_t}"),
                presets: vec!["milnor-basis-p2".into()],
                fixtures: vec![],
            }
            .emit();
            let chart = minimal_resolution(max_s, max_t).ext_chart();
            emit_chart(&chart, &out)
        }
        ChartCmd::IntegralSphere { prime, max_stem, out } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            let n: u32 = cfg.resolve(max_stem, "max-stem")?;
            let max_s = n + 1;
            let max_t = i64::from(n) + i64::from(max_s);
            Header {
                command: "chart integral-sphere".into(),
                prime: p,
                window: format!("stem ≤ {n}, s ≤ {max_s}"),
                presets: vec![format!("integral-{p}")],
                fixtures: vec![],
            }
            .emit();
            let full = sphere_pipeline(p, max_s, max_t).map_err(CliError::usage)?;
            // keep only the certified stems; higher ones are edge artifacts
            // of the computation window
            let mut chart = ExtChart::new(full.p, full.max_s, full.t_min, full.t_max);
            for (&(s, t), o) in &full.entries {
                if t - i64::from(s) <= i64::from(n) {
                    chart.set(s, t, o.clone());
                }
            }
            for (&(s, t), ls) in &full.labels {
                if t - i64::from(s) <= i64::from(n) {
                    chart.labels.insert((s, t), ls.clone());
                }
            }
            emit_chart(&chart, &out)
        }
        ChartCmd::Bp { prime, max_t, mode, out } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            let max_t: i64 = cfg.resolve(max_t, "max-t")?;
            Header {
                command: "chart bp".into(),
                prime: p,
                window: format!("s ≤ {}, 0 ≤ t ≤ {max_t}", max_t.max(0)),
                presets: vec![format!("integral-{p}")],
                fixtures: vec![],
            }
            .emit();
            let chart = match mode {
                BpMode::Mv => bp_pipeline(p, max_t)
                    .and_then(|r| r.chart())
                    .map_err(CliError::usage)?,
                BpMode::ClosedForm => bp_e2_chart(p, max_t),
            };
            emit_chart(&chart, &out)
        }
    }
}

fn run_couples(cmd: CouplesCmd, cfg: &Config) -> Run {
    let CouplesCmd::Ext { input, max_s, max_t, out } = cmd;
    let max_s: u32 = cfg.resolve(max_s, "max-s")?;
    let max_t: i64 = cfg.resolve(max_t, "max-t")?;
    let raw = std::fs::read(&input)
        .map_err(|e| CliError::Usage(format!("input {}: {e}", input.display())))?;
    let doc: serde_json::Value = serde_json::from_slice(&raw)
        .map_err(|e| CliError::Usage(format!("input {}: {e}", input.display())))?;
    let field = |name: &str| -> Result<String, CliError> {
        doc.get(name)
            .map(|v| v.to_string())
            .ok_or_else(|| CliError::Usage(format!("input is missing the `{name}` field")))
    };
    let preset = Arc::new(preset_from_json(&field("preset")?).map_err(CliError::usage)?);
    let x = rep_from_json(&field("x")?, &preset).map_err(CliError::usage)?;
    let y = rep_from_json(&field("y")?, &preset).map_err(CliError::usage)?;
    Header {
        command: "couples ext".into(),
        prime: preset.p.0,
        window: format!("s ≤ {max_s}, 0 ≤ t ≤ {max_t}"),
        presets: vec![preset.id.clone()],
        fixtures: vec![(input.display().to_string(), fnv1a(&raw))],
    }
    .emit();
    let window = Window::new(-max_t - 2, max_t + 2);
    let chart = ext(&x, &y, max_s, 0, max_t, window).map_err(CliError::usage)?;
    emit_chart(&chart, &out)
}

fn run_verify(cmd: VerifyCmd, cfg: &Config) -> Run {
    match cmd {
        VerifyCmd::Moore { prime, k } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            let k: u32 = cfg.resolve(k, "k")?;
            if k < 2 {
                return Err(CliError::Usage(format!(
                    "the two-step Moore resolution needs k ≥ 2, got {k}"
                )));
            }
            Header {
                command: "verify moore".into(),
                prime: p,
                window: format!("k = {k}"),
                presets: vec![format!("integral-{p}")],
                fixtures: vec![],
            }
            .emit();
            moore_resolution_check(Prime(p), k).map_err(CliError::Verification)?;
            println!("ok: mod {p}^{k} Moore couple has the periodic two-step resolution");
            Ok(())
        }
        VerifyCmd::Toda { prime, max_n } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            let max_n: u32 = cfg.resolve(max_n, "max-n")?;
            Header {
                command: "verify toda".into(),
                prime: p,
                window: format!("n ≤ {max_n}"),
                presets: vec![format!("integral-{p}")],
                fixtures: vec![],
            }
            .emit();
            let report = toda_vanishing_check(p, max_n).map_err(CliError::usage)?;
            if let Some(bad) = report.cells.iter().find(|c| c.dim != 0) {
                return Err(CliError::Verification(format!(
                    "obstruction cell (s, t) = ({}, {}) at stage n = {} is nonzero",
                    bad.s, bad.t, bad.n
                )));
            }
            println!(
                "ok: all {} obstruction cells vanish through stage {max_n} at p = {p}",
                report.cells.len()
            );
            Ok(())
        }
        VerifyCmd::EinftyBp { prime, max_t } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            let max_t: i64 = cfg.resolve(max_t, "max-t")?;
            Header {
                command: "verify einfty-bp".into(),
                prime: p,
                window: format!("0 ≤ t ≤ {max_t}"),
                presets: vec![format!("integral-{p}")],
                fixtures: vec![],
            }
            .emit();
            let report = bp_einfty_check(p, max_t).map_err(|e| CliError::Verification(e.to_string()))?;
            println!(
                "ok: predicted differentials hit every positive-filtration class exactly once \
                 ({} hits, t ≤ {max_t}, p = {p})",
                report.hits.len()
            );
            for (t, survivor, subring) in &report.survivor_ranks {
                println!(
                    "  t = {t}: surviving filtration-0 rank {survivor}, \
                     Hurewicz-subring rank {subring}"
                );
            }
            Ok(())
        }
        VerifyCmd::Cobar { prime, max_t } => {
            let p: u32 = cfg.resolve(prime, "prime")?;
            if p != 2 {
                return Err(CliError::Usage(format!(
                    "the cobar cross-check is implemented at prime 2 only, got {p}"
                )));
            }
            let max_t: i64 = cfg.resolve(max_t, "max-t")?;
            Header {
                command: "verify cobar".into(),
                prime: p,
                window: format!("0 ≤ t ≤ {max_t}"),
                presets: vec!["milnor-basis-p2".into()],
                fixtures: vec![],
            }
            .emit();
            let oracle = cobar_ext_oracle(max_t).map_err(CliError::usage)?;
            let resolved = minimal_resolution(max_t.max(0) as u32, max_t).ext_chart();
            for s in 0..=oracle.max_s {
                for t in 0..=max_t {
                    if oracle.dim(s, t) != resolved.dim(s, t) {
                        return Err(CliError::Verification(format!(
                            "cobar and minimal resolution disagree at (s, t) = ({s}, {t}): \
                             {} vs {}",
                            oracle.dim(s, t),
                            resolved.dim(s, t)
                        )));
                    }
                }
            }
            println!("ok: cobar complex matches the minimal resolution for t ≤ {max_t}");
            Ok(())
        }
    }
}

fn run_oracle(cmd: OracleCmd, cfg: &Config) -> Run {
    let OracleCmd::Cobar { prime, max_t, out } = cmd;
    let p: u32 = cfg.resolve(prime, "prime")?;
    if p != 2 {
        return Err(CliError::Usage(format!(
            "the cobar oracle is implemented at prime 2 only, got {p}"
        )));
    }
    let max_t: i64 = cfg.resolve(max_t, "max-t")?;
    Header {
        command: "oracle cobar".into(),
        prime: p,
        window: format!("0 ≤ t ≤ {max_t}"),
        presets: vec!["milnor-basis-p2".into()],
        fixtures: vec![],
    }
    .emit();
    let chart = cobar_ext_oracle(max_t).map_err(CliError::usage)?;
    emit_chart(&chart, &out)
}
