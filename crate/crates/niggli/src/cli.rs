//! Command-line interface: reduce | boundaries | classify | census |
//! enumerate | project, with JSON output and reproducible seeds.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::boundary;
use crate::characters;
use crate::enumerate::{self, set_to_string};
use crate::error::{NiggliError, Result};
use crate::g6::{g6_to_cell, parse_cell_or_g6, InputKind, G6};
use crate::probe::{self, ProbeConfig};
use crate::projector::{intersect_projectors, projector_dimension};
use crate::reduce;

const DEFAULT_SEED: u64 = 20260824;

/// Like `println!`, but exits quietly when stdout is a closed pipe
/// (e.g. piping into `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "niggli",
    version,
    about = "Niggli reduction and the boundary geometry of the reduced-cell cone in G6"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for boundary and classification queries.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// RNG seed for randomized subcommands (env NIGGLI_SEED overrides).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel subcommands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CellInput {
    /// Six numbers: a cell "a b c alpha beta gamma" or a G6 vector.
    input: String,

    /// Force cell-parameter interpretation of the input.
    #[arg(long, conflicts_with = "g6")]
    cell: bool,

    /// Force G6 interpretation of the input.
    #[arg(long)]
    g6: bool,
}

impl CellInput {
    fn parse(&self) -> Result<G6> {
        let kind = if self.cell {
            InputKind::Cell
        } else if self.g6 {
            InputKind::G6
        } else {
            InputKind::Auto
        };
        parse_cell_or_g6(&self.input, kind)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Niggli-reduce a cell and report the transformation.
    Reduce(CellInput),
    /// Distances and membership for all fifteen 5-D boundary cases.
    Boundaries(CellInput),
    /// Rank the lattice characters by subspace distance.
    Classify {
        #[command(flatten)]
        input: CellInput,
        /// Number of candidates to print.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Monte Carlo census of reduction transforms near the boundaries.
    Census {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        /// Perturbation magnitude relative to the vector norm.
        #[arg(long, default_value_t = 1e-4)]
        scale: f64,
        /// Case ids naming a boundary to probe (e.g. "12"); probes the
        /// whole cone when absent.
        #[arg(long)]
        boundary: Option<String>,
        /// Fraction to step back into the cone after projecting.
        #[arg(long)]
        step_back: Option<f64>,
        /// Random cell edge range, low..high.
        #[arg(long, default_value = "1,100", value_parser = parse_range)]
        edges: (f64, f64),
        /// Write a log-scale population chart to this SVG file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Enumerate the catalog of boundary polytopes.
    Enumerate {
        /// Compare against a checked-in catalog file; nonzero exit on
        /// mismatch.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Intersect case projectors and report the result.
    Project {
        /// Comma-separated case ids, e.g. "1,2,F".
        #[arg(long, value_parser = parse_cases)]
        cases: CaseList,
    },
}

#[derive(Clone)]
struct CaseList(Vec<char>);

fn parse_cases(text: &str) -> std::result::Result<CaseList, String> {
    let ids: Vec<char> = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            if t.len() == 1 {
                Ok(t.chars().next().unwrap())
            } else {
                Err(format!("bad case id '{t}'"))
            }
        })
        .collect::<std::result::Result<_, _>>()?;
    if ids.is_empty() {
        return Err("need at least one case id".into());
    }
    Ok(CaseList(ids))
}

fn parse_range(text: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = text.split_once(',').ok_or("expected low,high")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn effective_seed(flag: Option<u64>) -> u64 {
    if let Ok(text) = std::env::var("NIGGLI_SEED") {
        if let Ok(seed) = text.trim().parse() {
            return seed;
        }
    }
    flag.unwrap_or(DEFAULT_SEED)
}

fn g6_json(g: &G6) -> serde_json::Value {
    json!(g.0.to_vec())
}

fn matrix_json(m: &[[i64; 6]; 6]) -> serde_json::Value {
    json!(m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// Runs the parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.threads {
        // Ignore failure: the global pool can only be set once (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Reduce(input) => cmd_reduce(cli, input),
        Command::Boundaries(input) => cmd_boundaries(cli, input),
        Command::Classify { input, top } => cmd_classify(cli, input, *top),
        Command::Census {
            trials,
            scale,
            boundary,
            step_back,
            edges,
            plot,
        } => cmd_census(cli, *trials, *scale, boundary.as_deref(), *step_back, *edges, plot.as_deref()),
        Command::Enumerate { golden } => cmd_enumerate(cli, golden.as_deref()),
        Command::Project { cases } => cmd_project(cli, &cases.0),
    }
}

fn cmd_reduce(cli: &Cli, input: &CellInput) -> Result<i32> {
    let g = input.parse()?;
    let r = reduce::niggli_reduce(&g, 1e-12)?;
    let cell = g6_to_cell(&r.reduced)?;
    if cli.json {
        let doc = json!({
            "input": g6_json(&g),
            "reduced": g6_json(&r.reduced),
            "cell": {
                "a": cell.a, "b": cell.b, "c": cell.c,
                "alpha": cell.alpha, "beta": cell.beta, "gamma": cell.gamma,
            },
            "basis_transform": r.basis_transform.0.iter().map(|row| row.to_vec()).collect::<Vec<_>>(),
            "g6_transform": matrix_json(&r.g6_transform.to_ints().expect("integral transform")),
            "steps": r.steps,
            "iterations": r.iterations,
        });
        out!("{doc}");
    } else {
        out!("input:   {g}");
        out!("reduced: {}", r.reduced);
        out!("cell:    {cell}");
        out!(
            "steps ({}, {} iterations): {}",
            r.steps.len(),
            r.iterations,
            r.steps.join(", ")
        );
        out!("basis transform rows: {:?}", r.basis_transform.0);
    }
    Ok(0)
}

fn cmd_boundaries(cli: &Cli, input: &CellInput) -> Result<i32> {
    let g = input.parse()?;
    let mut rows = Vec::new();
    for case in boundary::catalog() {
        rows.push(json!({
            "case": case.id.to_string(),
            "distance": boundary::boundary_distance(case.id, &g)?,
            "on_boundary": boundary::on_boundary(case.id, &g, cli.tol)?,
            "special_position": boundary::special_subspace_fixed(case.id, &g, cli.tol)?,
        }));
    }
    if cli.json {
        out!("{}", json!({ "input": g6_json(&g), "cases": rows }));
    } else {
        out!("input: {g}");
        out!("case  distance      on-boundary  special-position");
        for row in &rows {
            out!(
                "{:>4}  {:<12.6}  {:<11}  {}",
                row["case"].as_str().unwrap(),
                row["distance"].as_f64().unwrap(),
                row["on_boundary"].as_bool().unwrap(),
                row["special_position"].as_bool().unwrap()
            );
        }
    }
    Ok(0)
}

fn cmd_classify(cli: &Cli, input: &CellInput, top: usize) -> Result<i32> {
    let g = input.parse()?;
    let reduced = reduce::niggli_reduce(&g, 1e-12)?.reduced;
    let classification = characters::classify(&reduced, cli.tol)?;
    let shown: Vec<_> = classification.ranked.iter().take(top).collect();
    if cli.json {
        let rows: Vec<_> = shown
            .iter()
            .map(|c| {
                json!({
                    "roof_symbol": c.entry.roof_symbol,
                    "it_character": c.entry.it_character,
                    "bravais": c.entry.bravais,
                    "pattern": c.entry.subspace_pattern,
                    "distance": if c.distance.is_finite() { json!(c.distance) } else { json!("infeasible") },
                    "projected": g6_json(&c.projected),
                })
            })
            .collect();
        out!(
            "{}",
            json!({
                "input": g6_json(&g),
                "reduced": g6_json(&reduced),
                "tol": cli.tol,
                "matches": classification.matches().len(),
                "candidates": rows,
            })
        );
    } else {
        out!("reduced: {reduced}");
        out!("roof  char  bravais  distance");
        for c in shown {
            let d = if c.distance.is_finite() {
                format!("{:.6e}", c.distance)
            } else {
                "infeasible".to_string()
            };
            out!(
                "{:>4}  {:>4}  {:>7}  {d}",
                c.entry.roof_symbol, c.entry.it_character, c.entry.bravais
            );
        }
    }
    Ok(0)
}

fn cmd_census(
    cli: &Cli,
    trials: u64,
    scale: f64,
    boundary_cases: Option<&str>,
    step_back: Option<f64>,
    edges: (f64, f64),
    plot: Option<&std::path::Path>,
) -> Result<i32> {
    let seed = effective_seed(cli.seed);
    let projector = boundary_cases
        .map(|text| {
            let ids: Vec<char> = text.chars().collect();
            intersect_projectors(&ids)
        })
        .transpose()?;
    let targeted = projector.is_some();
    let cfg = ProbeConfig {
        seed,
        trials,
        perturbation_scale: scale,
        edge_range: edges,
        boundary_projector: projector,
        step_back,
        ..ProbeConfig::default()
    };
    let census = if targeted {
        probe::probe_boundary(&cfg)?
    } else {
        probe::probe_5d(&cfg)?
    };
    let report = probe::zscore_analysis(&census);
    let pops = census.sorted_populations();
    let case_of = |m: &[[i64; 6]; 6]| {
        boundary::catalog()
            .iter()
            .find(|c| c.m.to_ints().as_ref() == Some(m))
            .map(|c| c.id.to_string())
    };
    if cli.json {
        let rows: Vec<_> = pops
            .iter()
            .enumerate()
            .map(|(i, (m, count))| {
                let z = report
                    .as_ref()
                    .ok()
                    .and_then(|r| r.entries.get(i))
                    .map(|e| e.z)
                    .filter(|z| z.is_finite());
                json!({
                    "matrix": matrix_json(m),
                    "case": case_of(m),
                    "population": count,
                    "z": z,
                })
            })
            .collect();
        out!(
            "{}",
            json!({
                "seed": seed,
                "trials": census.total_trials,
                "discarded": census.discarded,
                "cutoff_index": report.as_ref().ok().map(|r| r.cutoff_index),
                "populations": rows,
            })
        );
    } else {
        out!("seed {seed}, {} trials, {} discarded", census.total_trials, census.discarded);
        out!("rank  population  case  z");
        for (i, (m, count)) in pops.iter().enumerate().take(30) {
            let z = report
                .as_ref()
                .ok()
                .and_then(|r| r.entries.get(i))
                .map(|e| {
                    if e.z.is_finite() {
                        format!("{:+.2}", e.z)
                    } else {
                        "-".to_string()
                    }
                })
                .unwrap_or_else(|| "-".to_string());
            out!(
                "{:>4}  {:>10}  {:>4}  {z}",
                i + 1,
                count,
                case_of(m).unwrap_or_else(|| "-".into())
            );
        }
    }
    if let Some(path) = plot {
        let bars: Vec<(String, u64)> = pops
            .iter()
            .take(40)
            .map(|(m, c)| (case_of(m).unwrap_or_else(|| "·".into()), *c))
            .collect();
        write_svg_bars(path, &bars)?;
    }
    Ok(0)
}

/// A minimal log-scale bar chart.
fn write_svg_bars(path: &std::path::Path, bars: &[(String, u64)]) -> Result<()> {
    let width = 1200.0;
    let height = 400.0;
    let margin = 40.0;
    let max = bars.iter().map(|b| b.1).max().unwrap_or(1) as f64;
    let logmax = (max + 1.0).log10();
    let bw = (width - 2.0 * margin) / bars.len().max(1) as f64;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\">\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{margin}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        height - margin,
        width - margin
    ));
    for (i, (label, count)) in bars.iter().enumerate() {
        let h = (height - 2.0 * margin) * ((*count as f64 + 1.0).log10() / logmax);
        let x = margin + i as f64 * bw;
        let y = height - margin - h;
        svg.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{y:.1}\" width=\"{:.1}\" height=\"{h:.1}\" fill=\"steelblue\"/>\n",
            x + 1.0,
            bw - 2.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">{label}</text>\n",
            x + bw / 2.0,
            height - margin + 12.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" text-anchor=\"middle\">{count}</text>\n",
            x + bw / 2.0,
            y - 3.0
        ));
    }
    svg.push_str("</svg>\n");
    let mut file = std::fs::File::create(path)
        .map_err(|e| NiggliError::InvalidConfig(format!("cannot write plot: {e}")))?;
    file.write_all(svg.as_bytes())
        .map_err(|e| NiggliError::InvalidConfig(format!("cannot write plot: {e}")))?;
    Ok(())
}

/// Canonical catalog serialization: one JSON line per class, then a census
/// summary line.
pub fn catalog_lines() -> Vec<String> {
    let e = enumerate::enumerate_polytopes();
    let mut lines: Vec<String> = Vec::new();
    for class in &e.classes {
        let presentations: Vec<String> =
            class.presentations.iter().map(|&p| set_to_string(p)).collect();
        lines.push(
            json!({
                "generators": class.key,
                "dimension": class.dim,
                "pattern": class.pattern,
                "equivalents": presentations,
            })
            .to_string(),
        );
    }
    let census: BTreeMap<String, usize> =
        e.census.iter().map(|(d, n)| (d.to_string(), *n)).collect();
    lines.push(json!({ "census": census, "total": e.classes.len() }).to_string());
    lines
}

fn cmd_enumerate(_cli: &Cli, golden: Option<&std::path::Path>) -> Result<i32> {
    let lines = catalog_lines();
    match golden {
        None => {
            for line in &lines {
                out!("{line}");
            }
            Ok(0)
        }
        Some(path) => {
            let expected = std::fs::read_to_string(path)
                .map_err(|e| NiggliError::InvalidConfig(format!("cannot read golden file: {e}")))?;
            let expected: Vec<&str> = expected.lines().filter(|l| !l.trim().is_empty()).collect();
            let actual: Vec<&str> = lines.iter().map(|s| s.as_str()).collect();
            if expected == actual {
                out!("catalog matches golden file ({} lines)", actual.len());
                Ok(0)
            } else {
                let mut shown = 0;
                for i in 0..expected.len().max(actual.len()) {
                    let e = expected.get(i).copied().unwrap_or("<missing>");
                    let a = actual.get(i).copied().unwrap_or("<missing>");
                    if e != a && shown < 5 {
                        eprintln!("line {}: expected {e}\n          actual {a}", i + 1);
                        shown += 1;
                    }
                }
                eprintln!("catalog differs from golden file");
                Ok(1)
            }
        }
    }
}

fn cmd_project(cli: &Cli, cases: &[char]) -> Result<i32> {
    let p = intersect_projectors(cases)?;
    let dim = projector_dimension(&p)?;
    if cli.json {
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..6).map(|j| p.0[(i, j)]).collect())
            .collect();
        out!(
            "{}",
            json!({
                "cases": cases.iter().collect::<String>(),
                "dimension": dim,
                "projector": rows,
            })
        );
    } else {
        out!("cases {}  dimension {dim}", cases.iter().collect::<String>());
        for i in 0..6 {
            let row: Vec<String> = (0..6).map(|j| format!("{:+.6}", p.0[(i, j)])).collect();
            out!("  [{}]", row.join(", "));
        }
    }
    Ok(0)
}
