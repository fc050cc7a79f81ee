use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use plumbing_hf::char_lattice::DEFAULT_BOX_CAP;
use plumbing_hf::graded_module::{format_grading, parse_grading};
use plumbing_hf::hf_plumbing::{
    compute_hplus_detailed, find_full_path, spanning_set, DEFAULT_HULL_MARGIN, DEFAULT_SEARCH_CAP,
};
use plumbing_hf::{
    check_exactness, solve_unknown, Error, HfConfig, LatticeContext, PathCertificate, PlumbingGraph, Term, Verdict,
};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_NOT_APPLICABLE, EXIT_OK};
use crate::graph_file::{parse_graph_file, render_graph_file};
use crate::triangle_file::parse_triangle_file;

#[derive(Debug, Parser)]
#[command(name = "hfplumb", version, about = "Heegaard-Floer homology of negative-definite plumbings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave the timing field out of JSON reports.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Largest basic box that will be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_BOX_CAP)]
    pub box_cap: usize,
    /// Vectors visited per full-path search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_CAP)]
    pub search_cap: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_HULL_MARGIN)]
    pub hull_margin: u32,
    /// Highest U-level explored while assembling HF+ (default 16 + |G|).
    #[arg(long, global = true)]
    pub level_cap: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    /// Boundary orientation Y(G).
    Plus,
    /// Reversed orientation -Y(G).
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a graph is a negative-definite tree with at most one bad vertex.
    Validate { graph: PathBuf },
    /// Enumerate the basic box of characteristic vectors.
    Box {
        graph: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// Characteristic vectors of the box that admit a full path.
    Spanning { graph: PathBuf },
    /// Search for a full path from one characteristic vector.
    Path {
        graph: PathBuf,
        /// Comma-separated entries in vertex order, e.g. "1,0,-3,-2,0".
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Compute HF+ of the boundary.
    Hf {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = OrientationArg::Plus)]
        orientation: OrientationArg,
    },
    /// Write the star-shaped plumbing bounded by a Brieskorn sphere.
    Brieskorn {
        p: i64,
        q: i64,
        r: i64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check or solve a surgery exact triangle.
    Triangle {
        file: PathBuf,
        /// Overrides the file's summand budget.
        #[arg(long)]
        budget: Option<usize>,
        /// Overrides the file's window, as "LO,HI".
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Box { .. } => "box",
            Command::Spanning { .. } => "spanning",
            Command::Path { .. } => "path",
            Command::Hf { .. } => "hf",
            Command::Brieskorn { .. } => "brieskorn",
            Command::Triangle { .. } => "triangle",
        }
    }

    fn input(&self) -> Value {
        match self {
            Command::Validate { graph } | Command::Spanning { graph } => json!({ "graph": graph }),
            Command::Box { graph, count_only } => json!({ "graph": graph, "count_only": count_only }),
            Command::Path { graph, vector } => json!({ "graph": graph, "vector": vector }),
            Command::Hf { graph, orientation } => json!({
                "graph": graph,
                "orientation": if *orientation == OrientationArg::Plus { "plus" } else { "minus" },
            }),
            Command::Brieskorn { p, q, r, output } => json!({ "p": p, "q": q, "r": r, "output": output }),
            Command::Triangle { file, budget, window } => json!({ "file": file, "budget": budget, "window": window }),
        }
    }
}

/// What the process prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Success {
    result: Value,
    text: String,
    code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

fn load_graph(path: &Path) -> Result<PlumbingGraph, CliError> {
    parse_graph_file(&read(path)?)
}

fn parse_vector(s: &str) -> Result<Vec<i64>, CliError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad vector entry `{}`", t.trim()))))
        .collect()
}

fn join_steps(steps: &[usize]) -> String {
    steps.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn path_json(p: &PathCertificate) -> Value {
    json!({ "start": p.start.0, "steps": p.steps_one_based(), "terminal": p.terminal.0 })
}

fn hf_config(cli: &Cli) -> HfConfig {
    HfConfig {
        search_cap: cli.search_cap,
        hull_margin: cli.hull_margin,
        level_cap: cli.level_cap,
        threads: cli.threads.max(1),
    }
}

fn context(cli: &Cli, graph: PlumbingGraph) -> LatticeContext {
    let mut ctx = LatticeContext::new(graph);
    ctx.box_cap = cli.box_cap;
    ctx
}

fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Result<Success, CliError> {
    match &cli.command {
        Command::Validate { graph } => {
            let r = load_graph(graph)?.validate();
            let yes = |b: bool| if b { "yes" } else { "no" };
            let bad = if r.bad_vertices.is_empty() { "none".to_string() } else { r.bad_vertices.join(",") };
            let text = format!(
                "tree: {}\nnegative definite: {}\ndeterminant: {}\nbad vertices: {}\napplicable: {}\n",
                yes(r.is_tree),
                yes(r.is_negative_definite),
                r.determinant,
                bad,
                yes(r.algorithm_applicable)
            );
            let result = json!({
                "is_tree": r.is_tree,
                "is_negative_definite": r.is_negative_definite,
                "determinant": r.determinant.to_string(),
                "bad_vertices": r.bad_vertices,
                "algorithm_applicable": r.algorithm_applicable,
            });
            let code = if r.algorithm_applicable { EXIT_OK } else { EXIT_NOT_APPLICABLE };
            Ok(Success { result, text, code })
        }
        Command::Box { graph, count_only } => {
            let ctx = context(cli, load_graph(graph)?);
            if *count_only {
                if !ctx.form().is_negative_definite() {
                    return Err(Error::NotNegativeDefinite.into());
                }
                let count = ctx.box_size();
                return Ok(Success {
                    result: json!({ "count": count }),
                    text: format!("count: {count}\n"),
                    code: EXIT_OK,
                });
            }
            let vectors = ctx.basic_box()?;
            let mut text = format!("count: {}\n", vectors.len());
            for v in &vectors {
                text.push_str(&format!("{v}\n"));
            }
            let rows: Vec<&Vec<i64>> = vectors.iter().map(|v| &v.0).collect();
            Ok(Success { result: json!({ "count": vectors.len(), "vectors": rows }), text, code: EXIT_OK })
        }
        Command::Spanning { graph } => {
            let ctx = context(cli, load_graph(graph)?);
            let set = spanning_set(&ctx, &hf_config(cli))?;
            let mut text = String::new();
            for (k, p) in &set {
                text.push_str(&format!("{k} path: {}\n", join_steps(&p.steps_one_based())));
            }
            let rows: Vec<Value> = set.iter().map(|(_, p)| path_json(p)).collect();
            Ok(Success { result: json!({ "count": set.len(), "vectors": rows }), text, code: EXIT_OK })
        }
        Command::Path { graph, vector } => {
            let ctx = context(cli, load_graph(graph)?);
            let xi = parse_vector(vector)?;
            let (result, text) = match find_full_path(&ctx, &xi, cli.search_cap)? {
                Some(p) => {
                    let text = format!("path: {}\nterminal: {}\n", join_steps(&p.steps_one_based()), p.terminal);
                    (json!({ "found": true, "path": path_json(&p) }), text)
                }
                None => (json!({ "found": false, "path": Value::Null }), "none\n".to_string()),
            };
            Ok(Success { result, text, code: EXIT_OK })
        }
        Command::Hf { graph, orientation } => {
            let ctx = context(cli, load_graph(graph)?);
            let detailed = compute_hplus_detailed(&ctx, &hf_config(cli))?;
            warnings.extend(detailed.warnings.iter().cloned());
            let module = match orientation {
                OrientationArg::Plus => detailed.module.reverse_orientation(),
                OrientationArg::Minus => detailed.module.clone(),
            };
            let d = module.d_invariant().ok().map(format_grading);
            let ranks: Vec<Value> =
                detailed.ranks.iter().map(|(g, r)| json!({ "grading": format_grading(*g), "rank": r })).collect();
            let result = json!({ "module": module.to_string(), "d_invariant": d, "lattice_ranks": ranks });
            Ok(Success { result, text: format!("{module}\n"), code: EXIT_OK })
        }
        Command::Brieskorn { p, q, r, output } => {
            let graph = PlumbingGraph::brieskorn(*p, *q, *r)?;
            let body = render_graph_file(&graph, Some(&format!("Sigma({p},{q},{r})")));
            let text = match output {
                Some(path) => {
                    fs::write(path, &body).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
                    String::new()
                }
                None => body.clone(),
            };
            Ok(Success { result: json!({ "graph_file": body }), text, code: EXIT_OK })
        }
        Command::Triangle { file, budget, window } => {
            let (mut spec, file_budget) = parse_triangle_file(&read(file)?)?;
            if let Some(w) = window {
                let parts: Vec<&str> = w.split(',').collect();
                let [lo, hi] = parts.as_slice() else {
                    return Err(CliError::Usage("window must be LO,HI".into()));
                };
                spec.window = (parse_grading(lo.trim())?, parse_grading(hi.trim())?);
            }
            let budget = budget.unwrap_or(file_budget);
            if spec.terms.iter().all(|t| *t != Term::Unknown) {
                let report = check_exactness(&spec)?;
                let verdict = if report.verdict == Verdict::Consistent { "consistent" } else { "inconsistent" };
                let mut text = format!("verdict: {verdict}\n");
                if let Some(reason) = &report.reason {
                    text.push_str(&format!("reason: {reason}\n"));
                }
                let mut ranks = Vec::new();
                for ((arrow, g), r) in &report.ranks {
                    text.push_str(&format!("{arrow} at {}: {r}\n", format_grading(*g)));
                    ranks.push(json!({ "arrow": arrow.to_string(), "grading": format_grading(*g), "rank": r }));
                }
                let result = json!({ "verdict": verdict, "reason": report.reason, "ranks": ranks });
                return Ok(Success { result, text, code: EXIT_OK });
            }
            let solved = solve_unknown(&spec, budget)?;
            let candidates: Vec<String> = solved.candidates.iter().map(|c| c.to_string()).collect();
            let mut text = format!("status: {}\n", solved.status);
            for c in &candidates {
                text.push_str(&format!("{c}\n"));
            }
            let result = json!({ "status": solved.status.to_string(), "candidates": candidates });
            Ok(Success { result, text, code: EXIT_OK })
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let started = Instant::now();
    let mut warnings = Vec::new();
    let outcome = execute(cli, &mut warnings);
    let elapsed = started.elapsed().as_secs_f64();
    let (result, text, code, error) = match outcome {
        Ok(s) => (s.result, s.text, s.code, None),
        Err(e) => {
            let code = e.exit_code();
            (json!({ "error": e.to_string(), "exit_code": code }), String::new(), code, Some(e.to_string()))
        }
    };
    if cli.json {
        let mut report = json!({
            "command": cli.command.name(),
            "input": cli.command.input(),
            "result": result,
            "warnings": warnings,
        });
        if !cli.no_timing {
            report["timing"] = json!({ "seconds": elapsed });
        }
        let stdout = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        return Output { stdout, stderr: String::new(), code };
    }
    let mut stderr: String = warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    if let Some(e) = error {
        stderr.push_str(&format!("error: {e}\n"));
    }
    Output { stdout: text, stderr, code }
}
