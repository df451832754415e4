//! Terminal front end: each subcommand runs one experiment, writes
//! the result (stdout text by default, CSV or JSON chosen by the
//! `--out` extension), and maps the outcome to an exit code.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error,
//! 3 quadrature non-convergence in a required row.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use inscribed::{
    hilbert_distance, region_area, ConvexDomain, ConvexPolygonDomain, DegenerationCase,
    LimitSymbol, QuadratureConfig, RatioLimit, Vec2,
};
use inscribed_cli::experiments::{
    run_bulge_counterexample, run_case_sweep, run_degeneration, run_triangle_table,
    DegenerationPath, DegenerationRun, GraphFamily, CATALOG,
};
use inscribed_cli::io;
use inscribed_cli::suite::run_invariant_suite;

#[derive(Parser)]
#[command(
    name = "inscribed",
    version,
    about = "Hilbert-geometry experiments on polygons inscribed in convex domains"
)]
struct Cli {
    /// Quadrature settings as a JSON file; omitted fields keep defaults
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the result here; .csv and .json select the format
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also print the full text report when writing to a file
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// f(x) = x (1 + c/log(1/x))
    Const,
    /// f(x) = x (1 + loglog(1/x)/log(1/x))
    LogLog,
    /// f(x) = x + x^(1+eps)
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitArg {
    Zero,
    Positive,
    Infinite,
}

impl From<LimitArg> for LimitSymbol {
    fn from(a: LimitArg) -> Self {
        match a {
            LimitArg::Zero => LimitSymbol::Zero,
            LimitArg::Positive => LimitSymbol::Positive,
            LimitArg::Infinite => LimitSymbol::Infinite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RatioArg {
    ToZero,
    ToInfinity,
}

impl From<RatioArg> for RatioLimit {
    fn from(a: RatioArg) -> Self {
        match a {
            RatioArg::ToZero => RatioLimit::ToZero,
            RatioArg::ToInfinity => RatioLimit::ToInfinity,
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (w, z) = s
        .split_once(',')
        .ok_or_else(|| format!("expected W,Z but got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {t:?}: {e}"))
    };
    Ok((parse(w)?, parse(z)?))
}

fn parse_point(s: &str) -> anyhow::Result<Vec2> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected x,y but got {s:?}"))?;
    Ok(Vec2::new(x.trim().parse()?, y.trim().parse()?))
}

#[derive(Subcommand)]
enum Command {
    /// Areas of inscribed triangles over a range of the invariant T
    TriangleTable {
        /// Comma-separated invariant values
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.001,0.01,0.1,1,10,100,1000"
        )]
        t_values: Vec<f64>,
    },

    /// Areas along a degenerating family of quadrilaterals
    Degenerate {
        /// Boundary-graph family for the path of the fourth vertex
        #[arg(long, value_enum, default_value_t = FamilyArg::Const)]
        family: FamilyArg,

        /// Constant of the const family
        #[arg(long, default_value_t = 1.0)]
        c: f64,

        /// Exponent offset of the power family
        #[arg(long, default_value_t = 0.5)]
        eps: f64,

        /// Widest sample of the graph parameter
        #[arg(long, default_value_t = 0.125)]
        x0: f64,

        /// Geometric step between samples, in (0, 1)
        #[arg(long, default_value_t = 0.5)]
        step: f64,

        #[arg(long, default_value_t = 20)]
        samples: usize,

        /// Triangle invariant T of the configuration
        #[arg(long, default_value_t = 1.0)]
        t: f64,

        /// Quadrilateral invariant Y of the configuration
        #[arg(long, default_value_t = 1.0)]
        y: f64,

        /// Explicit W,Z ladder; repeat the flag once per sample
        /// (overrides the graph family)
        #[arg(long = "pair", value_parser = parse_pair, value_name = "W,Z")]
        pairs: Vec<(f64, f64)>,
    },

    /// Run catalogued degeneration cases and compare observations
    CaseSweep {
        /// Limit of Z
        #[arg(long, value_enum, requires = "w", requires = "ratio")]
        z: Option<LimitArg>,

        /// Limit of W
        #[arg(long, value_enum, requires = "z")]
        w: Option<LimitArg>,

        /// Limit of Z/W
        #[arg(long, value_enum, requires = "z")]
        ratio: Option<RatioArg>,

        /// Samples per case
        #[arg(long, default_value_t = 10)]
        length: usize,

        /// Sweep every catalogued case
        #[arg(long, conflicts_with = "z")]
        all: bool,
    },

    /// Walk the ray where the bulge coordinate diverges but areas stay
    /// in a band
    BulgeCounterexample {
        #[arg(long, default_value_t = 16)]
        length: usize,
    },

    /// Randomized invariant suite over the geometric dictionary
    Invariants,

    /// Busemann area of a polygonal region inside a domain
    Area {
        /// Domain JSON ({"type":"polygon",...} or {"type":"ellipse",...})
        #[arg(long, value_name = "FILE")]
        domain: PathBuf,

        /// Region JSON ({"vertices": [[x,y],...]})
        #[arg(long, value_name = "FILE")]
        region: PathBuf,
    },

    /// Hilbert distance between two interior points
    Distance {
        #[arg(long, value_name = "FILE")]
        domain: PathBuf,

        #[arg(long, value_name = "x,y")]
        from: String,

        #[arg(long, value_name = "x,y")]
        to: String,
    },
}

/// Where the rendered result goes. Text is always available; CSV only
/// for tabular results.
struct Rendering {
    text: String,
    csv: Option<String>,
    json: String,
}

fn emit(out: Option<&Path>, verbose: bool, r: &Rendering) -> anyhow::Result<()> {
    let Some(path) = out else {
        print!("{}", r.text);
        return Ok(());
    };
    let payload = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => r
            .csv
            .as_deref()
            .ok_or_else(|| anyhow!("this subcommand has no CSV form; use .json"))?,
        Some("json") => &r.json,
        _ => bail!(
            "cannot infer a format from {}: use a .csv or .json extension",
            path.display()
        ),
    };
    std::fs::write(path, payload)
        .with_context(|| format!("cannot write {}", path.display()))?;
    if verbose {
        print!("{}", r.text);
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// A run fails with exit code 3 only when a required area neither
/// converged nor was recognized as divergent.
fn required_rows_converged(run: &DegenerationRun) -> bool {
    run.records
        .iter()
        .filter_map(|r| r.area.as_ref())
        .all(|a| a.converged || a.divergent)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => io::load_quadrature_config(path)?,
        None => QuadratureConfig::default(),
    };
    let out = cli.out.as_deref();

    match cli.command {
        Command::TriangleTable { t_values } => {
            let table = run_triangle_table(&t_values, &config)?;
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: io::triangle_text(&table),
                    csv: Some(io::triangle_csv(&table)),
                    json: io::triangle_json(&table),
                },
            )?;
            let ok = table.rows.iter().all(|r| r.area.converged);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }

        Command::Degenerate {
            family,
            c,
            eps,
            x0,
            step,
            samples,
            t,
            y,
            pairs,
        } => {
            let path = if pairs.is_empty() {
                let family = match family {
                    FamilyArg::Const => GraphFamily::Constant { c },
                    FamilyArg::LogLog => GraphFamily::LogLog,
                    FamilyArg::Power => GraphFamily::Power { eps },
                };
                DegenerationPath::Graph {
                    family,
                    x0,
                    step,
                    samples,
                }
            } else {
                DegenerationPath::WzSequence { pairs }
            };
            let run = run_degeneration(&path, t, y, &config)?;
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: io::degeneration_text(&run),
                    csv: Some(io::degeneration_csv(&run)),
                    json: io::degeneration_json(&run),
                },
            )?;
            Ok(if required_rows_converged(&run) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }

        Command::CaseSweep {
            z,
            w,
            ratio,
            length,
            all,
        } => {
            let cases: Vec<DegenerationCase> = if all {
                CATALOG
                    .iter()
                    .map(|&(z, w, ratio)| DegenerationCase { z, w, ratio })
                    .collect()
            } else {
                let (Some(z), Some(w), Some(ratio)) = (z, w, ratio) else {
                    bail!("pass --z, --w and --ratio together, or --all");
                };
                vec![DegenerationCase {
                    z: z.into(),
                    w: w.into(),
                    ratio: ratio.into(),
                }]
            };
            let sweeps = cases
                .iter()
                .map(|case| run_case_sweep(case, length, &config))
                .collect::<inscribed::Result<Vec<_>>>()?;
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: io::sweeps_text(&sweeps),
                    csv: None,
                    json: io::sweeps_json(&sweeps),
                },
            )?;
            // Sweeps report what happened; disagreement with the
            // catalog is a finding, not a failure.
            Ok(ExitCode::SUCCESS)
        }

        Command::BulgeCounterexample { length } => {
            let outcome = run_bulge_counterexample(length, &config)?;
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: io::bulge_text(&outcome),
                    csv: Some(io::degeneration_csv(&outcome.run)),
                    json: io::bulge_json(&outcome),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Invariants => {
            let report = run_invariant_suite(cli.seed);
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: report.render(),
                    csv: None,
                    json: io::report_json(&report),
                },
            )?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Area { domain, region } => {
            let domain: ConvexDomain = load_json(&domain)?;
            let region: ConvexPolygonDomain = load_json(&region)?;
            let area = region_area(&domain, &region, &config)?;
            let text = if area.divergent {
                format!("area inf (flagged divergent after {} evaluations)\n", area.evaluations)
            } else {
                format!(
                    "area {} (error estimate {:.3e}, {} evaluations, converged: {})\n",
                    area.value, area.error_estimate, area.evaluations, area.converged
                )
            };
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text,
                    csv: None,
                    json: serde_json::to_string_pretty(&area).unwrap(),
                },
            )?;
            Ok(if area.converged || area.divergent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }

        Command::Distance { domain, from, to } => {
            let domain: ConvexDomain = load_json(&domain)?;
            let (from, to) = (parse_point(&from)?, parse_point(&to)?);
            let d = hilbert_distance(&domain, &from, &to)?;
            emit(
                out,
                cli.verbose,
                &Rendering {
                    text: format!("distance {d}\n"),
                    csv: None,
                    json: serde_json::to_string_pretty(&serde_json::json!({ "distance": d }))
                        .unwrap(),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
