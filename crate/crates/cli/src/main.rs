use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gadgetlab::config::validate_axis;
use gadgetlab::record::{to_csv_string, write_atomic, write_csv_atomic};
use gadgetlab::{
    compile, energy, load_target, run_bounds, swcheck_target, sweep_target, verify_target, Axis,
    GadgetMode, HarnessError, EXIT_ERROR, EXIT_VIOLATION,
};
use gadgetlab_core::{Caps, KindChoice};

#[derive(Parser)]
#[command(
    name = "gadgetlab",
    version,
    about = "Compile k-local Hamiltonians to 2-local simulators and check the error bounds"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest register realized as a dense matrix.
    #[arg(long, global = true, default_value_t = Caps::default().dense)]
    dense_cap: usize,
    /// Largest register handled by the iterative eigensolver.
    #[arg(long, global = true, default_value_t = Caps::default().iterative)]
    iterative_cap: usize,
    /// Record zero wall time so repeated runs produce identical output.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Hamiltonian to a simulator and write it in text format.
    Compile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        /// full, subdivision, three-to-two or auto.
        #[arg(long, default_value = "full")]
        kind: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Ground energy of a Hamiltonian.
    Energy {
        #[arg(long)]
        input: PathBuf,
        /// Register size; defaults to the highest qubit index plus one.
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Compare target and simulator ground energies against the budget εJn.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "full")]
        kind: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify along a gap or precision axis and fit the log-log slope.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        /// delta or eps.
        #[arg(long, default_value = "delta")]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// subdivision, three-to-two or auto.
        #[arg(long, default_value = "auto")]
        kind: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Schrieffer-Wolff checks per gadget and for the whole simulator.
    Swcheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        /// subdivision, three-to-two or auto.
        #[arg(long, default_value = "auto")]
        kind: String,
    },
    /// Commutator-series remainder, chain growth and cross-gadget checks.
    Bounds {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn check_eps(eps: f64) -> Result<(), HarnessError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(HarnessError::Config(format!(
            "epsilon must lie in (0, 1), found {eps}"
        )))
    }
}

fn kind(s: &str) -> Result<KindChoice, HarnessError> {
    KindChoice::parse(s).ok_or_else(|| HarnessError::Config(format!("unknown gadget kind `{s}`")))
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), HarnessError> {
    match output {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report(failures: &[String]) -> i32 {
    for f in failures {
        eprintln!("FAIL {f}");
    }
    if failures.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    let caps = Caps {
        dense: cli.global.dense_cap,
        iterative: cli.global.iterative_cap,
        ..Caps::default()
    };
    let det = cli.global.deterministic;
    match cli.command {
        Command::Compile {
            input,
            eps,
            kind,
            output,
        } => {
            check_eps(eps)?;
            let target = load_target(&input)?;
            let c = compile(&target, eps, GadgetMode::parse(&kind)?)?;
            emit(output.as_ref(), &c.to_text())?;
            Ok(0)
        }
        Command::Energy { input, qubits } => {
            let target = load_target(&input)?;
            let n = qubits.unwrap_or_else(|| target.min_qubits());
            println!("{:.16e}", energy(&target, n, &caps)?);
            Ok(0)
        }
        Command::Verify {
            input,
            eps,
            kind,
            output,
        } => {
            check_eps(eps)?;
            let target = load_target(&input)?;
            let r = verify_target(&target, eps, GadgetMode::parse(&kind)?, &caps, det)?;
            let within = r.within_budget();
            match &output {
                Some(p) => write_csv_atomic(p, std::slice::from_ref(&r))?,
                None => print!("{}", to_csv_string(std::slice::from_ref(&r))?),
            }
            let failures = if within {
                vec![]
            } else {
                vec![format!(
                    "abs_error {:e} exceeds budget {:e}",
                    r.abs_error, r.budget
                )]
            };
            Ok(report(&failures))
        }
        Command::Sweep {
            input,
            axis,
            values,
            kind: k,
            output,
        } => {
            let axis = Axis::parse(&axis)?;
            validate_axis(axis, &values)?;
            let target = load_target(&input)?;
            let r = sweep_target(&target, axis, &values, kind(&k)?, &caps, det)?;
            match &output {
                Some(p) => write_csv_atomic(p, &r.records)?,
                None => print!("{}", to_csv_string(&r.records)?),
            }
            let show = |s: Option<f64>| s.map_or("absent".to_string(), |v| format!("{v:.6}"));
            eprintln!("energy slope: {}", show(r.energy_slope));
            eprintln!("heff slope: {}", show(r.heff_slope));
            let mut failures: Vec<String> = r
                .failures
                .iter()
                .map(|(v, e)| format!("point {v:e}: {e}"))
                .collect();
            failures.extend(r.records.iter().filter(|x| !x.within_budget()).map(|x| {
                format!(
                    "Δ={:e}: abs_error {:e} exceeds budget {:e}",
                    x.delta, x.abs_error, x.budget
                )
            }));
            if !r.failures.is_empty() && r.records.is_empty() {
                for f in &failures {
                    eprintln!("FAIL {f}");
                }
                return Ok(EXIT_ERROR);
            }
            Ok(report(&failures))
        }
        Command::Swcheck {
            input,
            eps,
            kind: k,
        } => {
            check_eps(eps)?;
            let target = load_target(&input)?;
            let r = swcheck_target(&target, eps, kind(&k)?, &caps)?;
            println!("mediator,kind,generator_mismatch,offdiag_residual,target_error,truncation_error,truncation_bound,exact_offdiag_residual");
            for g in &r.gadgets {
                println!(
                    "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    g.mediator,
                    g.kind,
                    g.generator_mismatch,
                    g.offdiag_residual,
                    g.target_error,
                    g.truncation_error,
                    g.truncation_bound,
                    g.exact_offdiag_residual
                );
            }
            match r.global_residual {
                Some(v) => eprintln!("global residual: {v:e} (budget {:e})", r.global_budget),
                None => eprintln!("global residual: absent"),
            }
            eprintln!(
                "cross-gadget total: {:e} over {} pairs (budget {:e})",
                r.cross.total,
                r.cross.pairs.len(),
                r.cross.budget
            );
            for n in &r.notes {
                eprintln!("note: {n}");
            }
            Ok(report(&r.failures()))
        }
        Command::Bounds {
            trials,
            seed,
            output,
        } => {
            if trials == 0 {
                return Err(HarnessError::Config("--trials must be positive".into()));
            }
            let r = run_bounds(trials, seed, &caps)?;
            emit(output.as_ref(), &to_csv_string(&r.records)?)?;
            let failures: Vec<String> = r
                .violations()
                .iter()
                .map(|b| {
                    format!(
                        "{} instance {} k={} t={}: {:e} > {:e}",
                        b.suite, b.instance, b.k, b.t, b.value, b.bound
                    )
                })
                .collect();
            Ok(report(&failures))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
