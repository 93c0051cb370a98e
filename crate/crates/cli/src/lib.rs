//! Command-line front end: argument parsing, JSON I/O and exit codes.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use mergeconv::bounds::{mds_merge_lower, rdel_lower, total_lower, BoundsError, MergeParams};
use mergeconv::code::CodeError;
use mergeconv::convert::{
    execute, verify_convertible, BundleJson, ConstructSpec, ConvertError, ConvertibleCode, VerificationReport,
};
use mergeconv::field::FieldElem;
use mergeconv::sim::{simulate, ClusterLayout, SimError};

pub mod demo;

/// Environment variable that redirects relative output paths.
pub const OUT_DIR_ENV: &str = "MERGECONV_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "mergeconv", version, about = "Build, run and verify access-optimal merge conversions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a convertible code from a construction spec and store it as a bundle.
    Construct {
        /// Construction spec (JSON file, or `-` for stdin).
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a conversion on codewords or messages.
    Convert {
        bundle: String,
        /// `{"codewords": [...]}` or `{"messages": [...]}`; random messages when absent.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check correctness, component optimality and access optimality.
    Verify {
        bundle: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bounds on conversion cost for merge parameters.
    Bounds {
        params: String,
        #[arg(long, value_enum, default_value_t = BoundKind::General)]
        kind: BoundKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the GF(23) example end to end and compare with its recorded values.
    DemoMdsexa {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a conversion on a storage layout and report per-node I/O.
    Simulate {
        bundle: String,
        /// Layout JSON; overrides `--layout-kind`.
        #[arg(long)]
        layout: Option<String>,
        #[arg(long, value_enum, default_value_t = LayoutKind::PerSymbol)]
        layout_kind: LayoutKind,
        /// Node count for the round-robin layout.
        #[arg(long, default_value_t = 4)]
        nodes: usize,
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    General,
    Mds,
    Rdel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutKind {
    Single,
    PerSymbol,
    RoundRobin,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Verification(_) => "verification",
            CliError::Infeasible(_) => "infeasible",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

impl From<ConvertError> for CliError {
    fn from(e: ConvertError) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Code(CodeError::Infeasible(m)) => CliError::Infeasible(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Convert(c) => c.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn read_input(src: &str) -> Result<String, CliError> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(s)
    } else {
        fs::read_to_string(src).map_err(|e| CliError::Io(format!("{src}: {e}")))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(src: &str) -> Result<T, CliError> {
    let text = read_input(src)?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{src}: {e}")))
}

fn load_bundle(src: &str) -> Result<ConvertibleCode, CliError> {
    let j: BundleJson = parse(src)?;
    Ok(ConvertibleCode::from_json(&j)?)
}

/// Relative output paths go under `MERGECONV_OUT_DIR` when it is set.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(p) = out {
        let p = resolve_out(p);
        if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::Io(e.to_string()))?;
        }
        fs::write(&p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        Ok(json!({ "written": p.display().to_string() }).to_string())
    } else {
        Ok(text)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WordsInput {
    #[serde(default)]
    codewords: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    messages: Option<Vec<Vec<i64>>>,
}

fn to_elems(cc: &ConvertibleCode, rows: &[Vec<i64>]) -> Result<Vec<Vec<FieldElem>>, CliError> {
    let f = cc.field();
    rows.iter()
        .map(|r| r.iter().map(|&v| f.elem(v).map_err(|e| CliError::Validation(e.to_string()))).collect())
        .collect()
}

/// Codewords from an input file, or from seeded random messages.
fn load_words(cc: &ConvertibleCode, input: Option<&str>, seed: u64) -> Result<Vec<Vec<FieldElem>>, CliError> {
    let encode = |msgs: Vec<Vec<FieldElem>>| -> Result<Vec<Vec<FieldElem>>, CliError> {
        if msgs.len() != cc.t() {
            return Err(CliError::Validation(format!("expected {} messages, got {}", cc.t(), msgs.len())));
        }
        msgs.iter()
            .zip(&cc.initial)
            .map(|(m, c)| c.code.encode(m).map_err(|e| CliError::Validation(e.to_string())))
            .collect()
    };
    match input {
        Some(src) => {
            let w: WordsInput = parse(src)?;
            match (w.codewords, w.messages) {
                (Some(c), None) => to_elems(cc, &c),
                (None, Some(m)) => encode(to_elems(cc, &m)?),
                _ => Err(CliError::Validation("input needs exactly one of `codewords` or `messages`".into())),
            }
        }
        None => {
            let f = cc.field();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let msgs = cc
                .initial
                .iter()
                .map(|c| (0..c.code.k()).map(|_| f.elem(rng.gen_range(0..f.q() as i64)).unwrap()).collect())
                .collect();
            encode(msgs)
        }
    }
}

fn values(w: &[FieldElem]) -> Vec<u32> {
    w.iter().map(|e| e.value()).collect()
}

fn verdict(rep: &VerificationReport) -> Result<(), CliError> {
    if rep.components.iter().any(|c| c.optimal.is_none()) {
        return Err(CliError::Infeasible("a component distance check exceeded its budget".into()));
    }
    if !rep.passed() || !rep.access_optimal {
        let reason = rep.failures.first().cloned().unwrap_or_else(|| "costs do not meet the lower bounds".into());
        return Err(CliError::Verification(reason));
    }
    Ok(())
}

/// Runs one command. On success returns the text for stdout; on a failed
/// verification the report is still returned alongside the error.
pub fn run(cli: Cli) -> Result<String, (CliError, Option<String>)> {
    let plain = |e: CliError| (e, None);
    match cli.command {
        Command::Construct { spec, out } => {
            let spec: ConstructSpec = parse(&spec).map_err(plain)?;
            let cc = spec.build().map_err(|e| plain(e.into()))?;
            emit(&cc.to_json(), out.as_deref()).map_err(plain)
        }
        Command::Convert { bundle, input, seed, out } => {
            let cc = load_bundle(&bundle).map_err(plain)?;
            let words = load_words(&cc, input.as_deref(), seed).map_err(plain)?;
            let (word, access) = execute(&cc, &words).map_err(|e| plain(e.into()))?;
            let body = json!({
                "initial": words.iter().map(|w| values(w)).collect::<Vec<_>>(),
                "final": values(&word),
                "access": access,
            });
            emit(&body, out.as_deref()).map_err(plain)
        }
        Command::Verify { bundle, seed, out } => {
            let cc = load_bundle(&bundle).map_err(plain)?;
            let rep = verify_convertible(&cc, seed).map_err(|e| plain(e.into()))?;
            let text = emit(&rep, out.as_deref()).map_err(plain)?;
            verdict(&rep).map_err(|e| (e, Some(text.clone())))?;
            Ok(text)
        }
        Command::Bounds { params, kind, out } => {
            let p: MergeParams = parse(&params).map_err(plain)?;
            let rep = match kind {
                BoundKind::General => total_lower(&p),
                BoundKind::Mds => mds_merge_lower(&p),
                BoundKind::Rdel => rdel_lower(&p),
            }
            .map_err(|e| plain(e.into()))?;
            emit(&rep, out.as_deref()).map_err(plain)
        }
        Command::DemoMdsexa { seed, out } => {
            let rep = demo::mdsexa(seed).map_err(plain)?;
            let text = emit(&rep, out.as_deref()).map_err(plain)?;
            if !rep.diff.is_empty() {
                return Err((CliError::Verification(format!("{} recorded values differ", rep.diff.len())), Some(text)));
            }
            Ok(text)
        }
        Command::Simulate { bundle, layout, layout_kind, nodes, input, seed, out } => {
            let cc = load_bundle(&bundle).map_err(plain)?;
            let layout: ClusterLayout = match layout {
                Some(src) => parse(&src).map_err(plain)?,
                None => match layout_kind {
                    LayoutKind::Single => ClusterLayout::single_node(&cc, "node0"),
                    LayoutKind::PerSymbol => ClusterLayout::per_symbol(&cc),
                    LayoutKind::RoundRobin => ClusterLayout::round_robin(&cc, nodes),
                },
            };
            let words = load_words(&cc, input.as_deref(), seed).map_err(plain)?;
            let rep = simulate(&cc, &layout, &words).map_err(|e| plain(e.into()))?;
            emit(&rep, out.as_deref()).map_err(plain)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(CliError::Validation("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 2);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 3);
        assert_eq!(CliError::Infeasible("x".into()).exit_code(), 4);
    }

    #[test]
    fn error_json_shape() {
        let j = CliError::Infeasible("budget".into()).to_json();
        assert_eq!(j, json!({ "error": { "kind": "infeasible", "message": "budget" } }));
    }

    #[test]
    fn only_budget_exhaustion_is_infeasible() {
        let e: CliError = ConvertError::InsufficientOrbits { need: 6, have: 5 }.into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = ConvertError::Code(CodeError::Infeasible("budget".into())).into();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn absolute_output_paths_are_kept() {
        let p = Path::new("/tmp/report.json");
        assert_eq!(resolve_out(p), p.to_path_buf());
    }

    #[test]
    fn demo_has_no_differences() {
        let rep = demo::mdsexa(11).unwrap();
        assert!(rep.diff.is_empty(), "{:?}", rep.diff);
    }
}
