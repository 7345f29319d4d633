//! Command-line driver: inspect distributions, reproduce the numbered
//! results, and enumerate symmetry orbits.

mod report;
mod targets;

use bellkit::bell::{chsh_orbit, i2233_orbit, violated_set};
use bellkit::catalog;
use bellkit::dist::Distribution;
use bellkit::entropy::{bc_values, entropy_vector};
use bellkit::lp::{local_weight, local_weight_json};
use bellkit::rat::{format_rat, parse_rat, Rat};
use bellkit::scenario::Scenario;
use bellkit::sym::{relabelling_orbit_with_ops, SymmetryOp};
use clap::{Parser, Subcommand};
use report::OutputDir;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bellkit",
    version,
    about = "Bell-scenario correlations: exact polytope certificates and entropic inequality analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV/JSON artifacts and the run manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed for search-based targets.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Violation tolerance for entropic checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Epsilon parameter for parameterized builtins, e.g. 4/7 or 0.6.
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Mixing parameter v for parameterized builtins.
    #[arg(long, global = true)]
    v: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Report no-signalling status, violated Bell functionals, local weight
    /// and entropic values of a distribution (builtin:NAME or a JSON file).
    Check {
        input: String,
        /// Comma-separated Tsallis orders (1 = Shannon).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        q: Vec<f64>,
    },
    /// Run a reproduction pipeline and verify its built-in checks.
    Reproduce {
        /// One of: prop1 prop2 prop3 prop4 prop5 propCG propR1 table1 fig1
        /// fig2a fig2b conjA conjB footnote
        target: String,
        /// Grid resolution for scans.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Dirichlet restarts for searches.
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// Enumerate the symmetry orbit of a distribution or functional
    /// (functional:chsh22 | functional:chsh33 | functional:i2233).
    Orbit {
        input: String,
        /// Group to use for distribution orbits: local | full.
        #[arg(long, default_value = "local")]
        group: String,
    },
}

/// Accepts `n/d`, integers, and decimal strings (parsed exactly).
fn parse_param(s: &str) -> Result<Rat, String> {
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if !frac_part.is_empty() && frac_part.chars().all(|c| c.is_ascii_digit()) {
            let denom = format!("1{}", "0".repeat(frac_part.len()));
            let combined = format!("{}{}", int_part, frac_part);
            return parse_rat(&format!("{combined}/{denom}"));
        }
    }
    parse_rat(s)
}

fn resolve_distribution(
    input: &str,
    eps: &Option<String>,
    v: &Option<String>,
) -> Result<Distribution, String> {
    let eps = eps.as_deref().map(parse_param).transpose()?;
    let v = v.as_deref().map(parse_param).transpose()?;
    if let Some(name) = input.strip_prefix("builtin:") {
        return catalog::lookup(name, eps.as_ref(), v.as_ref()).map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))?;
    Distribution::from_json_str(&text).map_err(|e| e.to_string())
}

fn cmd_check(cli: &Cli, input: &str, q_list: &[f64]) -> Result<ExitCode, String> {
    let d = resolve_distribution(input, &cli.eps, &cli.v)?;
    let s = d.scenario();
    println!(
        "scenario: ({}, {}, {}, {})",
        s.inputs_a(),
        s.inputs_b(),
        s.outputs_a(),
        s.outputs_b()
    );
    let ns = d.is_no_signalling();
    println!("no-signalling: {ns}");

    let mut violations_json = serde_json::json!({});
    if s == Scenario::two_two_three_three() && ns {
        let report = violated_set(&d).map_err(|e| e.to_string())?;
        println!(
            "violated facets: {} CHSH-type, {} I2233-type",
            report.chsh.len(),
            report.i2233.len()
        );
        for (i, val) in report.i2233.iter().take(8) {
            println!("  I2233 #{i} -> {val}");
        }
        for (i, val) in report.chsh.iter().take(8) {
            println!("  CHSH #{i} -> {val}");
        }
        violations_json = serde_json::to_value(&report).unwrap();
    } else if s == Scenario::two_two_two_two() && ns {
        let orbit = chsh_orbit(s).map_err(|e| e.to_string())?;
        let violated: Vec<(usize, String)> = orbit
            .iter()
            .enumerate()
            .filter(|(_, f)| f.violates(&d).unwrap())
            .map(|(i, f)| (i + 1, format_rat(&f.evaluate(&d).unwrap())))
            .collect();
        println!("violated CHSH inequalities: {}", violated.len());
        for (i, val) in &violated {
            println!("  CHSH #{i} -> {val}");
        }
        violations_json = serde_json::json!({ "chsh": violated });
    }

    let mut weight_json = serde_json::json!({});
    if ns {
        let cert = local_weight(&d).map_err(|e| e.to_string())?;
        println!("local weight: {}", format_rat(&cert.alpha));
        if let Some(f) = &cert.separating {
            println!(
                "separating functional attached (family {:?}, bound {})",
                f.family,
                format_rat(&f.bound)
            );
        }
        weight_json = local_weight_json(&cert);
    } else {
        println!("local weight: skipped (signalling input)");
    }

    if ns && s.inputs_a() == 2 && s.inputs_b() == 2 {
        for &q in q_list {
            let vec = entropy_vector(&d, q).map_err(|e| e.to_string())?;
            let bc = bc_values(&vec);
            println!(
                "q = {q}: H(X0 X1 Y0 Y1 | X0Y0 X0Y1 X1Y0 X1Y1) = [{}]",
                vec.components.map(report::fmt_f64).join(", ")
            );
            println!(
                "q = {q}: I_BC = [{}] violated = {:?}",
                bc.values.map(report::fmt_f64).join(", "),
                bc.violated
            );
        }
    }

    if let Some(out) = &cli.out {
        let mut dir = OutputDir::create(out).map_err(|e| e.to_string())?;
        if ns && s.inputs_a() == 2 && s.inputs_b() == 2 {
            dir.write(
                "check_entropy.csv",
                &targets::entropy_csv(input, &d, q_list),
            )
            .map_err(|e| e.to_string())?;
        }
        dir.write(
            "check_report.json",
            &serde_json::to_string_pretty(&serde_json::json!({
                "input": input,
                "no_signalling": ns,
                "violations": violations_json,
                "local_weight": weight_json,
            }))
            .unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let config =
            serde_json::json!({"command": "check", "input": input, "q": q_list, "tol": cli.tol});
        dir.finish_manifest(
            &std::env::args().collect::<Vec<_>>().join(" "),
            cli.seed,
            &config,
        )
        .map_err(|e| e.to_string())?;
        println!("artifacts written to {}", dir.root().display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(
    cli: &Cli,
    target: &str,
    grid: usize,
    restarts: usize,
) -> Result<ExitCode, String> {
    let cfg = targets::TargetConfig {
        grid,
        restarts,
        seed: cli.seed,
        tol: cli.tol,
    };
    let outcome = targets::run_target(target, &cfg)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("out_{target}")));
    let mut dir = OutputDir::create(&out_dir).map_err(|e| e.to_string())?;
    for (name, contents) in &outcome.files {
        dir.write(name, contents).map_err(|e| e.to_string())?;
    }
    let config = serde_json::json!({
        "command": "reproduce",
        "target": target,
        "grid": grid,
        "restarts": restarts,
        "tol": cli.tol,
    });
    dir.finish_manifest(
        &std::env::args().collect::<Vec<_>>().join(" "),
        cli.seed,
        &config,
    )
    .map_err(|e| e.to_string())?;
    println!("artifacts written to {}", dir.root().display());
    if outcome.pass {
        println!("{target}: all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{target}: CHECK FAILED");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_orbit(cli: &Cli, input: &str, group: &str) -> Result<ExitCode, String> {
    let mut csv = String::new();
    let count;
    if let Some(name) = input.strip_prefix("functional:") {
        let orbit = match name {
            "chsh22" => chsh_orbit(Scenario::two_two_two_two()).unwrap(),
            "chsh33" => chsh_orbit(Scenario::two_two_three_three()).unwrap(),
            "i2233" => i2233_orbit(),
            other => return Err(format!("unknown functional {other:?}")),
        };
        count = orbit.len();
        csv.push_str("index,bound,coeffs\n");
        for (i, f) in orbit.iter().enumerate() {
            let flat = f.to_json().coeffs.join(";");
            csv.push_str(&format!("{},{},{}\n", i + 1, format_rat(&f.bound), flat));
        }
    } else {
        let d = resolve_distribution(input, &cli.eps, &cli.v)?;
        match group {
            "local" => {
                let orbit = relabelling_orbit_with_ops(&d);
                count = orbit.len();
                csv.push_str("index,op,entries\n");
                for (i, (dist, op)) in orbit.iter().enumerate() {
                    let flat: Vec<String> = dist.flatten().iter().map(format_rat).collect();
                    csv.push_str(&format!(
                        "{},{},{}\n",
                        i + 1,
                        serde_json::to_string(op).unwrap().replace(',', " "),
                        flat.join(";")
                    ));
                }
            }
            "full" => {
                let ops = SymmetryOp::enumerate(d.scenario());
                let (n, orbit) = bellkit::lp::orbit_vertex_count(std::slice::from_ref(&d), &ops);
                count = n;
                csv.push_str("index,entries\n");
                for (i, dist) in orbit.iter().enumerate() {
                    let flat: Vec<String> = dist.flatten().iter().map(format_rat).collect();
                    csv.push_str(&format!("{},{}\n", i + 1, flat.join(";")));
                }
            }
            other => return Err(format!("unknown group {other:?}; use local or full")),
        }
    }
    println!("orbit size: {count}");
    if let Some(out) = &cli.out {
        let mut dir = OutputDir::create(out).map_err(|e| e.to_string())?;
        dir.write("orbit.csv", &csv).map_err(|e| e.to_string())?;
        let config = serde_json::json!({"command": "orbit", "input": input, "group": group});
        dir.finish_manifest(
            &std::env::args().collect::<Vec<_>>().join(" "),
            cli.seed,
            &config,
        )
        .map_err(|e| e.to_string())?;
        println!("artifacts written to {}", dir.root().display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = match &cli.command {
        Command::Check { input, q } => cmd_check(&cli, input, q),
        Command::Reproduce {
            target,
            grid,
            restarts,
        } => cmd_reproduce(&cli, target, *grid, *restarts),
        Command::Orbit { input, group } => cmd_orbit(&cli, input, group),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
