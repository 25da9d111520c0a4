//! `qzx`: build, verify and inspect qutrit constructions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 malformed input file.

mod args;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qutrit_zx::circuits::{circuit_matrix, count_resources, decompose_phases, Circuit};
use qutrit_zx::json::{from_json, to_json};
use qutrit_zx::matrix::Matrix;
use qutrit_zx::report::full_report;
use qutrit_zx::rewrite::{replay, simplify_traced, verify_all, ProofScript};
use qutrit_zx::semantics::eval;
use qutrit_zx::synth::{build_named, SynthResult, CONSTRUCTIONS};
use qutrit_zx::{Diagram, Error};

use args::PhaseArgs;

#[derive(Parser)]
#[command(name = "qzx", version, about = "Qutrit ZX-calculus constructions and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the available constructions.
    List,
    /// Build a construction and write circuit.txt, diagram.json, counts.json and meta.json.
    Build {
        construction: String,
        #[command(flatten)]
        phases: PhaseArgs,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Check a built directory against its reference.
    Verify {
        dir: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Resource counts of a circuit file or built directory.
    Count {
        path: PathBuf,
        /// Count after splitting phases into Clifford, T and R gates.
        #[arg(long)]
        decompose: bool,
    },
    /// Simplify a diagram JSON file.
    Simplify {
        diagram: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check every rewrite rule on random instances.
    VerifyRules {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Replay proof scripts.
    ReplayProof {
        #[arg(required = true)]
        scripts: Vec<PathBuf>,
    },
    /// Render a diagram JSON file.
    Render {
        diagram: PathBuf,
        /// Graphviz DOT output.
        #[arg(long)]
        dot: bool,
    },
    /// Write the matrix of a circuit (.txt) or diagram (.json).
    ExportMatrix {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Full verification report as JSON.
    Report {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Npy,
}

enum Failure {
    Verify(String),
    Usage(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Usage(m) | Failure::Input(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input_err(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn usage_err(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    Circuit::parse(&read(path)?).map_err(input_err(path))
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    from_json(&read(path)?).map_err(input_err(path))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn build(construction: &str, phases: &PhaseArgs, out: &Path) -> Outcome {
    if !CONSTRUCTIONS.contains(&construction) {
        return Err(Failure::Usage(format!(
            "unknown construction {construction:?}; expected one of {}",
            CONSTRUCTIONS.join(", ")
        )));
    }
    let params = phases.to_params().map_err(Failure::Usage)?;
    let r = build_named(construction, &params).map_err(usage_err)?;
    fs::create_dir_all(out).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    write(&out.join("circuit.txt"), &r.circuit.to_text())?;
    let mut d = to_json(&r.diagram);
    d.push('\n');
    write(&out.join("diagram.json"), &d)?;
    write(&out.join("counts.json"), &pretty(&r.counts))?;
    let meta = json!({
        "construction": construction,
        "params": args::params_json(&params),
        "target": r.target.describe(),
        "metadata": r.metadata,
    });
    write(&out.join("meta.json"), &pretty(&meta))?;
    println!("{}: {} wires, {} gates -> {}", r.name, r.circuit.n_wires, r.circuit.len(), out.display());
    Ok(())
}

fn rebuild(dir: &Path) -> Result<SynthResult, Failure> {
    let meta_path = dir.join("meta.json");
    let meta: Value = serde_json::from_str(&read(&meta_path)?).map_err(|e| Failure::Input(format!("{}: {e}", meta_path.display())))?;
    let name = meta["construction"].as_str().ok_or_else(|| Failure::Input(format!("{}: no construction", meta_path.display())))?;
    let params = args::params_from_json(&meta["params"]).map_err(|e| Failure::Input(format!("{}: {e}", meta_path.display())))?;
    let mut r = build_named(name, &params).map_err(|e| Failure::Input(e.to_string()))?;
    r.circuit = load_circuit(&dir.join("circuit.txt"))?;
    r.diagram = load_diagram(&dir.join("diagram.json"))?;
    Ok(r)
}

fn verify(dir: &Path, tol: f64) -> Outcome {
    let r = rebuild(dir)?;
    let v = r.verify(tol).map_err(|e| Failure::Input(e.to_string()))?;
    println!("{}", pretty(&v).trim_end());
    if v.passed {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} failed verification, max residual {:.3e}", v.name, v.max_residual())))
    }
}

fn count(path: &Path, decompose: bool) -> Outcome {
    let file = if path.is_dir() { path.join("circuit.txt") } else { path.to_path_buf() };
    let mut c = load_circuit(&file)?;
    if decompose {
        c = decompose_phases(&c);
    }
    let n = count_resources(&c);
    print!("{}", pretty(&n));
    Ok(())
}

fn simplify(path: &Path, out: Option<&Path>) -> Outcome {
    let d = load_diagram(path)?;
    let (s, trace) = simplify_traced(&d);
    let mut text = to_json(&s);
    text.push('\n');
    eprintln!("{} rewrites: {} -> {} vertices", trace.len(), d.num_vertices(), s.num_vertices());
    match out {
        Some(o) => write(o, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify_rules(trials: usize, seed: u64) -> Outcome {
    let reports = verify_all(trials, seed);
    println!("{:<6} {:>7} {:>7} {:>9} {:>12}  exact", "rule", "trials", "checks", "failures", "max_resid");
    for r in &reports {
        println!("{:<6} {:>7} {:>7} {:>9} {:>12.3e}  {}", r.rule, r.trials, r.checks, r.failures, r.max_residual, r.exact);
    }
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    match reports.iter().filter(|r| !r.passed()).map(|r| r.rule.as_str()).collect::<Vec<_>>() {
        bad if bad.is_empty() => Ok(()),
        bad => Err(Failure::Verify(format!("rules {bad:?} failed, max residual {worst:.3e}"))),
    }
}

fn replay_proofs(scripts: &[PathBuf]) -> Outcome {
    let mut failed = Vec::new();
    for path in scripts {
        let script = ProofScript::from_json(&read(path)?).map_err(input_err(path))?;
        match replay(&script) {
            Ok(r) => println!("{}: ok, {} steps, derives {}, max residual {:.3e}", r.name, r.steps, r.derives, r.max_residual),
            Err(e) => {
                println!("{}: FAILED: {e}", script.name);
                failed.push(script.name);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} script(s) failed: {failed:?}", failed.len())))
    }
}

fn export_matrix(input: &Path, format: Format, out: &Path) -> Outcome {
    let m: Matrix = if input.extension().is_some_and(|e| e == "json") {
        eval(&load_diagram(input)?).map_err(input_err(input))?
    } else {
        circuit_matrix(&load_circuit(input)?).map_err(input_err(input))?
    };
    let file = fs::File::create(out).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let res = match format {
        Format::Csv => m.write_csv(&mut w),
        Format::Npy => m.write_npy(&mut w),
    };
    res.and_then(|_| w.flush()).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
    println!("{}x{} matrix -> {}", m.rows(), m.cols(), out.display());
    Ok(())
}

fn report(seed: u64, trials: usize, tol: f64, out: Option<&Path>) -> Outcome {
    let r = full_report(seed, trials, tol).map_err(|e| Failure::Verify(e.to_string()))?;
    let mut text = r.to_json();
    text.push('\n');
    match out {
        Some(o) => write(o, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::List => {
            for c in CONSTRUCTIONS {
                println!("{c}");
            }
            Ok(())
        }
        Command::Build { construction, phases, out } => build(&construction, &phases, &out),
        Command::Verify { dir, tol } => verify(&dir, tol),
        Command::Count { path, decompose } => count(&path, decompose),
        Command::Simplify { diagram, out } => simplify(&diagram, out.as_deref()),
        Command::VerifyRules { trials, seed } => verify_rules(trials, seed),
        Command::ReplayProof { scripts } => replay_proofs(&scripts),
        Command::Render { diagram, dot } => {
            let d = load_diagram(&diagram)?;
            print!("{}", if dot { render::dot(&d) } else { render::summary(&d) });
            Ok(())
        }
        Command::ExportMatrix { input, format, out } => export_matrix(&input, format, &out),
        Command::Report { seed, trials, tol, out } => report(seed, trials, tol, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qzx: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
