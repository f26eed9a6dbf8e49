//! `rcrystal`: generate rigged-configuration crystals, fold Cartan matrices,
//! check virtualization and decompose tensor products.
//!
//! Exit status: 0 success, 1 domain error, 2 usage error, 3 property
//! violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rigged_crystals::cartan::CartanMatrix;
use rigged_crystals::explorer::generate;
use rigged_crystals::folding::{build_folding, verify_folding, virtualization_sweep};
use rigged_crystals::rigged::HighestWeight;
use rigged_crystals::tensor::lr_decompose;

#[derive(Parser)]
#[command(name = "rcrystal", version, about = "Rigged-configuration crystals of symmetrizable Kac-Moody algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate RC(inf) or RC(lambda) breadth-first from the empty configuration.
    Gen {
        #[arg(long)]
        cartan: String,
        /// `inf` or comma-separated fundamental-weight coefficients.
        #[arg(long, allow_hyphen_values = true)]
        hw: String,
        /// Number of lowering steps; required for `inf`.
        #[arg(long)]
        depth: Option<usize>,
        /// Depth cap used when `--depth` is omitted for a finite highest weight.
        #[arg(long, default_value_t = 1000)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the simply-laced folding of a Cartan matrix and verify it.
    Fold {
        #[arg(long)]
        cartan: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that virtualization commutes with the crystal structure.
    Virtcheck {
        #[arg(long)]
        cartan: String,
        #[arg(long, default_value = "inf", allow_hyphen_values = true)]
        hw: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decompose RC(mu) (x) RC(lambda) into irreducible components.
    Decompose {
        #[arg(long)]
        cartan: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Enumeration depth for RC(mu); required outside finite type.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Validate a Cartan matrix and print its symmetrizer.
    Validate {
        #[arg(long)]
        cartan: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
}

enum Failure {
    Domain(anyhow::Error),
    Usage(String),
    Violation(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("property violation: {msg}");
            ExitCode::from(3)
        }
    }
}

/// A named type (`A2`, `G2`, `A2~`), an inline JSON matrix, or a path to a
/// JSON file.
fn load_cartan(source: &str) -> Result<Arc<CartanMatrix>> {
    let trimmed = source.trim();
    let cartan = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        CartanMatrix::from_json(trimmed)?
    } else if Path::new(trimmed).is_file() {
        let text = fs::read_to_string(trimmed).with_context(|| format!("reading {trimmed}"))?;
        CartanMatrix::from_json(&text)?
    } else {
        CartanMatrix::named(trimmed)?
    };
    Ok(Arc::new(cartan))
}

fn parse_coeffs(text: &str, rank: usize, what: &str) -> Result<Vec<i64>, Failure> {
    let coeffs = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("{what} must be comma-separated integers, got {text:?}")))?;
    if coeffs.len() != rank {
        return Err(Failure::Usage(format!("{what} has {} coefficients, rank is {rank}", coeffs.len())));
    }
    Ok(coeffs)
}

fn parse_hw(text: &str, rank: usize) -> Result<HighestWeight, Failure> {
    if text.trim() == "inf" {
        return Ok(HighestWeight::Infinity);
    }
    let coeffs = parse_coeffs(text, rank, "highest weight")?;
    HighestWeight::dominant(coeffs).map_err(|e| Failure::Domain(e.into()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json") + "\n"
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { cartan, hw, depth, cap, format, output } => {
            let cartan = load_cartan(&cartan)?;
            let hw = parse_hw(&hw, cartan.rank())?;
            let depth = match (&hw, depth) {
                (_, Some(d)) => d,
                (HighestWeight::Infinity, None) => return Err(Failure::Usage("--depth is required for --hw inf".into())),
                (HighestWeight::Dominant(_), None) => cap,
            };
            let graph = generate(cartan, hw, depth).map_err(anyhow::Error::from)?;
            let text = match format {
                Format::Dot => graph.to_dot(),
                Format::Json => graph.to_json(),
                Format::Text => {
                    let mut s = format!(
                        "nodes: {}\nedges: {}\ncomplete: {}\n",
                        graph.node_count(),
                        graph.edge_count(),
                        graph.is_complete()
                    );
                    for (id, node) in graph.nodes().iter().enumerate() {
                        s.push_str(&format!("\n#{id}  wt = {}\n{}\n", node.weight(), node.canonical_text()));
                    }
                    s.push('\n');
                    for e in graph.edges() {
                        s.push_str(&format!("#{} -{}-> #{}\n", e.src, graph.cartan().label(e.index), e.dst));
                    }
                    s
                }
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Fold { cartan, format, output } => {
            let cartan = load_cartan(&cartan)?;
            let d = cartan.symmetrizer().map_err(anyhow::Error::from)?;
            let fd = build_folding(&cartan, &d).map_err(anyhow::Error::from)?;
            let report = verify_folding(&fd, &cartan);
            let text = match format {
                Format::Dot => fd.to_dot(),
                Format::Json => {
                    let mut v = fd.to_json_value();
                    v["checks"] = report.to_json_value();
                    pretty(&v)
                }
                Format::Text => format!(
                    "N = {}\nvertices: {}\nedges: {}\nsymmetrizer: {:?}\n{}",
                    fd.n().unwrap_or(1),
                    fd.vertices().len(),
                    fd.edges().len(),
                    d.values(),
                    report
                ),
            };
            emit(output.as_deref(), &text)?;
            if !report.all_passed() {
                return Err(Failure::Violation("folding checks failed".into()));
            }
        }
        Command::Virtcheck { cartan, hw, depth, format, output } => {
            let cartan = load_cartan(&cartan)?;
            let hw = parse_hw(&hw, cartan.rank())?;
            let d = cartan.symmetrizer().map_err(anyhow::Error::from)?;
            let fd = build_folding(&cartan, &d).map_err(anyhow::Error::from)?;
            let graph = generate(cartan.clone(), hw, depth).map_err(anyhow::Error::from)?;
            let report = virtualization_sweep(&fd, &graph).map_err(anyhow::Error::from)?;
            let text = match format {
                Format::Json => pretty(&json!({
                    "elements": report.elements,
                    "checks": report.checks,
                    "violations": report.violations.iter().map(|v| json!({
                        "node": v.node,
                        "index": cartan.label(v.index),
                        "kind": format!("{:?}", v.kind),
                    })).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut s = format!(
                        "elements: {}\nchecks: {}\nviolations: {}\n",
                        report.elements,
                        report.checks,
                        report.violations.len()
                    );
                    for v in &report.violations {
                        s.push_str(&format!("  node {} index {}: {:?}\n", v.node, cartan.label(v.index), v.kind));
                    }
                    s
                }
            };
            emit(output.as_deref(), &text)?;
            if !report.passed() {
                return Err(Failure::Violation(format!("{} virtualization violations", report.violations.len())));
            }
        }
        Command::Decompose { cartan, mu, lambda, depth, format, output } => {
            let cartan = load_cartan(&cartan)?;
            let mu = parse_coeffs(&mu, cartan.rank(), "mu")?;
            let lambda = parse_coeffs(&lambda, cartan.rank(), "lambda")?;
            let decomposition = lr_decompose(&cartan, &mu, &lambda, depth).map_err(anyhow::Error::from)?;
            let text = match format {
                Format::Json => pretty(&decomposition.to_json_value()),
                _ => decomposition.to_string(),
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Validate { cartan, format, output } => {
            let cartan = load_cartan(&cartan)?;
            let d = cartan.symmetrizer().map_err(anyhow::Error::from)?;
            let text = match format {
                Format::Json => {
                    let mut v = cartan.to_json_value();
                    v["symmetrizer"] = json!(d.values());
                    v["finite_type"] = json!(cartan.is_finite_type());
                    pretty(&v)
                }
                Format::Dot => return Err(Failure::Usage("validate supports text and json output".into())),
                Format::Text => format!(
                    "{}symmetrizer: {:?}\nfinite type: {}\n",
                    cartan,
                    d.values(),
                    cartan.is_finite_type()
                ),
            };
            emit(output.as_deref(), &text)?;
        }
    }
    Ok(())
}
