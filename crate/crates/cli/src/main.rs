//! Command line driver: run catalog problems, produce convergence tables
//! and inspect the problem catalog. Run configurations are flat
//! `key = value` files; see `pcweno describe` and the README for the key
//! reference.

use clap::{Parser, Subcommand};
use pcweno::harness::{
    convergence_study, init_threads, parse_config, run_simulation, write_convergence,
    RunSettings, CONFIG_KEYS,
};
use pcweno::problems::{build_problem, problem_ids};
use pcweno::systems::SystemModel;
use pcweno::SolverError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pcweno", about = "finite-difference WENO solver for systems with non-conservative products", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance a problem to its stopping time.
    Run { config: PathBuf },
    /// Mesh-refinement study (requires an exact solution and a `meshes` list).
    Convergence { config: PathBuf },
    /// List the catalog problem ids.
    ListProblems,
    /// Show the full setup of one catalog problem.
    Describe { id: String },
}

fn main() -> ExitCode {
    init_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage problems exit with code 1; --help/--version exit 0
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<SolverError>().map(is_config_error).unwrap_or(false) {
                1
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}

fn is_config_error(e: &SolverError) -> bool {
    matches!(e, SolverError::Config(_) | SolverError::UnknownProblem(..))
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::ListProblems => {
            for id in problem_ids() {
                let p = build_problem(id)?;
                println!("{id:22} {}", p.describe);
            }
            Ok(())
        }
        Command::Describe { id } => {
            let p = build_problem(&id)?;
            println!("id:            {}", p.id);
            println!("description:   {}", p.describe);
            println!("model:         {}", p.model.name());
            println!("variables:     {}", p.model.var_names().join(" "));
            println!("dimensions:    {}", p.ndim);
            if p.ndim == 1 {
                println!("domain:        [{}, {}]", p.domain.0, p.domain.1);
                println!("default mesh:  {}", p.default_mesh.0);
            } else {
                println!(
                    "domain:        [{}, {}] x [{}, {}]",
                    p.domain.0, p.domain.1, p.domain.2, p.domain.3
                );
                println!("default mesh:  {} x {}", p.default_mesh.0, p.default_mesh.1);
            }
            println!("boundaries:    x {:?}, y {:?}", p.bc.x, p.bc.y);
            println!("t_end:         {}", p.t_end);
            println!("cfl:           {}", p.cfl);
            println!("error norm on: {}", p.error_var_name);
            println!("integrator:    {:?}", p.integrator);
            println!("antidiffusion: {}", if p.antidiffusion { "on" } else { "off" });
            println!("recon basis:   {:?}", p.basis);
            println!("exact solution: {}", if p.exact.is_some() { "yes" } else { "no" });
            if !p.notes.is_empty() {
                println!("notes:         {}", p.notes);
            }
            println!("\nconfig keys:");
            for (k, d) in CONFIG_KEYS {
                println!("  {k:14} {d}");
            }
            Ok(())
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| SolverError::Io { path: config.display().to_string(), source: e })?;
            let rc = parse_config(&text)?;
            let settings = RunSettings::from_config(&rc)?;
            let out = run_simulation(&settings, None)?;
            println!("problem:          {}", settings.problem.id);
            println!("mesh:             {} x {}", settings.mesh.0, settings.mesh.1);
            println!("final time:       {}", out.t);
            println!("steps:            {}", out.steps);
            println!("floor hits:       {}", out.floored);
            println!("max riemann iter: {}", out.max_riemann_iters);
            println!("char fallbacks:   {}", out.char_fallbacks);
            if !out.initial_sums.is_empty() {
                let last = &out.conservation.last().unwrap().1;
                for (k, (s0, s1)) in out.initial_sums.iter().zip(last.iter()).enumerate() {
                    let drift = if *s0 != 0.0 { (s1 / s0 - 1.0).abs() } else { (s1 - s0).abs() };
                    println!("mass[{k}] drift:    {drift:.3e}");
                }
            }
            if let Some(dir) = &rc.output_dir {
                println!("output:           {dir}");
            }
            Ok(())
        }
        Command::Convergence { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| SolverError::Io { path: config.display().to_string(), source: e })?;
            let rc = parse_config(&text)?;
            if rc.meshes.is_empty() {
                return Err(SolverError::Config("convergence needs a `meshes` list".into()).into());
            }
            let settings = RunSettings::from_config(&rc)?;
            let rows = convergence_study(&settings.problem, &settings.scheme, &rc.meshes)?;
            println!("{:>6} {:>14} {:>6} {:>14} {:>6}", "N", "L1", "ord", "Linf", "ord");
            for r in &rows {
                let o = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
                println!(
                    "{:>6} {:>14.6e} {:>6} {:>14.6e} {:>6}",
                    r.n,
                    r.l1,
                    o(r.l1_order),
                    r.linf,
                    o(r.linf_order)
                );
            }
            if let Some(dir) = &rc.output_dir {
                std::fs::create_dir_all(dir)
                    .map_err(|e| SolverError::Io { path: dir.clone(), source: e })?;
                let path = PathBuf::from(dir).join(format!("{}_convergence.dat", rc.problem));
                write_convergence(&rows, &path)?;
                println!("table written to {}", path.display());
            }
            Ok(())
        }
    }
}
