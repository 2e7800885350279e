//! `motgraph` — batch front end to the graph DGA engine.
//!
//! Every verb reads JSON files (a single graph or a weighted sum, see
//! `motgraph::corpus::SumFile`) and writes a text report, or pretty JSON with
//! `--json`. Exit status: 0 success/true, 1 false or verification failed,
//! 2 usage or parse error, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use motgraph::augmented::{bold_eps, check_circular_closure_with, eps_boundary_formula, generic_args, make_eps};
use motgraph::bar::{check_completely_decomposable_with, coboundary_witness_search, lift_to_bar_closure, Decomposability};
use motgraph::corpus::{names, verify_example, verify_sum, SumFile};
use motgraph::cycles::{emit_parametrization, emit_polynomial_system};
use motgraph::dga::{differential_with, is_admissible};
use motgraph::hodge_numeric::{necklace_period_with, DEFAULT_TOL};
use motgraph::{Budget, Error, GraphSum, Monomial};

#[derive(Parser)]
#[command(name = "motgraph", version, about = "Exact DGA of labeled oriented graphs, bar constructions and necklace periods")]
struct Cli {
    /// Largest component canonicalized by brute force.
    #[arg(long, global = true, default_value_t = Budget::default().vertices)]
    budget_vertices: usize,
    /// Largest number of simple cycles enumerated.
    #[arg(long, global = true, default_value_t = Budget::default().cycles)]
    budget_cycles: usize,
    /// Maximum tensor length of a lift.
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    /// Quadrature tolerance for `period`.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Pretty JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Canonical form of a graph or sum.
    Canonicalize { file: PathBuf },
    /// The differential ∂.
    Diff { file: PathBuf },
    /// Admissibility of every summand; false if any fails.
    Admissible { file: PathBuf },
    /// Complete decomposability of a sum.
    Decompose { file: PathBuf },
    /// A closed bar element extending the sum; false if obstructed.
    Lift { file: PathBuf },
    /// Rational x with ∂(Σ xᵢ cᵢ) equal to the target up to decomposables.
    Witness {
        target: PathBuf,
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
    },
    /// Parametrization and polynomial system of a single graph.
    EmitCycle { file: PathBuf },
    /// ε^n, its boundary and the boundary formula.
    Necklace {
        /// Number of beads.
        n: usize,
        /// Labels a₀,a₁,…,aₙ as monomials; generic symbols if omitted.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
    },
    /// (∂ + δ + μ)(bold-ξⁿ − 1⊗bold-εⁿ) = 0 and the intermediate identities.
    CircularCheck { n: usize },
    /// Numerical period of bold-ξⁿ at real labels a₀,…,aₙ > 1.
    Period {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<f64>,
    },
    /// Check a built-in example (or a sum file); `all` runs every built-in one.
    VerifyExample { name: String },
}

/// Outcome of a verb: a report and whether it is "true".
struct Report {
    ok: bool,
    text: String,
    json: serde_json::Value,
}

fn read_sum(path: &Path) -> Result<SumFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    SumFile::parse(&text)
}

fn single_graph(path: &Path) -> Result<motgraph::Graph, Error> {
    let f = read_sum(path)?;
    match f.terms.as_slice() {
        [t] => Ok(t.graph.clone()),
        _ => Err(Error::Parse(format!("{}: expected a single graph", path.display()))),
    }
}

fn sum_report(s: &GraphSum) -> Report {
    Report { ok: true, text: s.to_string(), json: s.to_json() }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::VertexBudgetExceeded(..) | Error::CycleBudgetExceeded(_) | Error::DepthExceeded(_) => 3,
        Error::LiftObstructed(_) | Error::ClosureFailed(_) | Error::NonConvergent(_) | Error::ToleranceNotMet(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let budget = Budget { vertices: cli.budget_vertices, cycles: cli.budget_cycles };
    Ok(match &cli.verb {
        Verb::Canonicalize { file } => sum_report(&read_sum(file)?.to_sum(&budget)?),
        Verb::Diff { file } => sum_report(&differential_with(&read_sum(file)?.to_sum(&budget)?, &budget)?),
        Verb::Admissible { file } => {
            let f = read_sum(file)?;
            let mut reports = Vec::new();
            for t in &f.terms {
                reports.push(is_admissible(&t.graph, &budget)?);
            }
            let text = reports
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let why: Vec<String> = r.failures.iter().map(|f| format!("{f:?}")).collect();
                    format!("{i}: {}{}", if r.admissible { "admissible" } else { "not admissible" }, if why.is_empty() { String::new() } else { format!(" ({})", why.join("; ")) })
                })
                .collect::<Vec<_>>()
                .join("\n");
            Report { ok: reports.iter().all(|r| r.admissible), text, json: serde_json::to_value(&reports).unwrap() }
        }
        Verb::Decompose { file } => {
            let s = read_sum(file)?.to_sum(&budget)?;
            match check_completely_decomposable_with(&s, cli.depth, &budget)? {
                Decomposability::Yes { lift, layers } => Report {
                    ok: true,
                    text: format!("completely decomposable; lift layers {:?}", layers.iter().map(|l| l.len()).collect::<Vec<_>>()),
                    json: json!({
                        "completelyDecomposable": true,
                        "layers": layers.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
                        "lift": lift.to_json(),
                    }),
                },
                Decomposability::No { reason, survivors } => Report {
                    ok: false,
                    text: format!("not completely decomposable: {reason}\n{survivors}"),
                    json: json!({ "completelyDecomposable": false, "reason": reason, "survivors": survivors.to_json() }),
                },
            }
        }
        Verb::Lift { file } => {
            let s = read_sum(file)?.to_sum(&budget)?;
            match lift_to_bar_closure(&s, cli.depth, &budget) {
                Ok(l) => Report { ok: true, text: l.to_string(), json: l.to_json() },
                Err(Error::LiftObstructed(n)) => Report {
                    ok: false,
                    text: format!("lift obstructed; residue has {n} terms"),
                    json: json!({ "obstructed": true, "residueTerms": n }),
                },
                Err(e) => return Err(e),
            }
        }
        Verb::Witness { target, candidates } => {
            let eps = read_sum(target)?.to_sum(&budget)?;
            let mut cands = Vec::new();
            for c in candidates {
                cands.push(read_sum(c)?.to_sum(&budget)?);
            }
            match coboundary_witness_search(&eps, &cands, &budget)? {
                Some(x) => {
                    let coeffs: Vec<String> = x.iter().map(|q| q.to_string()).collect();
                    Report { ok: true, text: coeffs.join(" "), json: json!({ "witness": coeffs }) }
                }
                None => Report { ok: false, text: "no witness".into(), json: json!({ "witness": null }) },
            }
        }
        Verb::EmitCycle { file } => {
            let g = single_graph(file)?;
            let (p, sys) = (emit_parametrization(&g), emit_polynomial_system(&g, None));
            Report {
                ok: true,
                text: format!("{}\n{}", p.text(), sys.text()),
                json: json!({ "parametrization": p.to_json(), "system": sys.to_json() }),
            }
        }
        Verb::Necklace { n, labels } => {
            let (a0, a) = match labels {
                None => generic_args(*n),
                Some(ls) => {
                    if ls.len() != n + 1 {
                        return Err(Error::Parse(format!("expected {} labels, got {}", n + 1, ls.len())));
                    }
                    let ms = ls.iter().map(|l| Monomial::parse(l)).collect::<Result<Vec<_>, _>>()?;
                    (ms[0].clone(), ms[1..].to_vec())
                }
            };
            let eps = make_eps(&a0, &a)?;
            let d = differential_with(&eps, &budget)?;
            let formula = eps_boundary_formula(&a0, &a)?;
            let holds = d.sub(&formula).is_zero();
            let bold = bold_eps(&a0, &a)?;
            Report {
                ok: holds,
                text: format!("eps:\n{eps}\nboundary:\n{d}\nboundary formula holds: {holds}\nbold eps:\n{bold}"),
                json: json!({
                    "eps": eps.to_json(),
                    "boundary": d.to_json(),
                    "formulaHolds": holds,
                    "boldEps": bold.to_json(),
                }),
            }
        }
        Verb::CircularCheck { n } => {
            let r = check_circular_closure_with(*n, Default::default(), &budget)?;
            let mut text: Vec<String> =
                r.identities.iter().map(|i| format!("{} m={}: {}", i.name, i.m, if i.holds { "holds" } else { "FAILS" })).collect();
            text.push(format!("closure ({} terms): {}", r.element_terms, if r.closed { "closed" } else { "NOT closed" }));
            Report { ok: r.all_hold(), text: text.join("\n"), json: serde_json::to_value(&r).unwrap() }
        }
        Verb::Period { labels } => {
            let r = necklace_period_with(labels, cli.tol)?;
            // always JSON
            let json = serde_json::to_value(&r).unwrap();
            Report { ok: true, text: serde_json::to_string_pretty(&json).unwrap(), json }
        }
        Verb::VerifyExample { name } => {
            let list: Vec<&str> = if name == "all" { names().collect() } else { vec![name.as_str()] };
            let mut reports = Vec::new();
            for n in list {
                // a path to a sum file is verified like a built-in example
                let path = Path::new(n);
                reports.push(if path.is_file() {
                    verify_sum(n, &read_sum(path)?, cli.depth, &budget)?
                } else {
                    verify_example(n, cli.depth, &budget)?
                });
            }
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "{}: {} (admissible {}, handles {:?}, signs {:?}, completely decomposable {})",
                        r.name,
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.admissible,
                        r.handles,
                        r.signs,
                        r.completely_decomposable
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let ok = reports.iter().all(|r| r.passed());
            let json = if reports.len() == 1 { serde_json::to_value(&reports[0]).unwrap() } else { serde_json::to_value(&reports).unwrap() };
            Report { ok, text, json }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).unwrap());
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("motgraph: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
