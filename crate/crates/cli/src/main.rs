//! reduxion: configuration-driven runner for the state-reduction engine.
//!
//! Subcommands:
//!   run     execute a scenario per a JSON config file
//!   list    print the scenario catalog with parameter summaries
//!   verify  run the closed-form verification table
//!
//! Exit codes: 0 success, 1 verify failures, 2 invalid config or usage,
//! 3 solver did not converge, 4 cascade exceeded its stage budget.

mod config;
mod output;

use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reduxion_core::cascade::{self, CascadeError};
use reduxion_core::reduction::ReductionError;
use reduxion_core::scenarios::ScenarioParams;
use reduxion_core::verify;

use config::{Format, Mode, RunConfig};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NONCONVERGENT: u8 = 3;
const EXIT_STAGE_OVERFLOW: u8 = 4;

fn usage() -> &'static str {
    "\
reduxion: gauge-mode state-reduction cascades

USAGE:
  reduxion run --config PATH [--seed N|auto] [--out PATH] [--format json|csv]
  reduxion list
  reduxion verify [--filter NAME] [--out PATH] [--format json|csv]

MODES (config \"mode\" field):
  trajectory    one stochastic cascade; writes the jump log
  ensemble      n_traj seeded cascades; writes the empirical distribution
  enumerate     exact outcome distribution from the branch tree
  entropy-scan  first-stage (t, weights..., sigma) rows on the solver grid
  verify        the closed-form verification table

ENVIRONMENT:
  REDUXION_THREADS   caps ensemble worker count (results are identical
                     for any value)

The seed defaults to 0; `--seed auto` derives one from the wall clock.
Without --out or a config output block, results go to stdout as JSON.
"
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("list") => cmd_list(),
        Some("verify") => cmd_verify(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{}", usage());
            EXIT_OK
        }
        _ => {
            eprintln!("{}", usage());
            EXIT_CONFIG
        }
    };
    ExitCode::from(code)
}

fn cmd_list() -> u8 {
    for (name, params) in ScenarioParams::catalog() {
        println!("{name:<22} {params}");
    }
    EXIT_OK
}

struct CommonFlags {
    config: Option<String>,
    seed: Option<SeedFlag>,
    out: Option<String>,
    format: Option<Format>,
    filter: Option<String>,
}

enum SeedFlag {
    Fixed(u64),
    Auto,
}

fn parse_flags(args: &[String]) -> Result<CommonFlags, String> {
    let mut flags = CommonFlags {
        config: None,
        seed: None,
        out: None,
        format: None,
        filter: None,
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                flags.config = Some(it.next().ok_or("missing value for --config")?.clone());
            }
            "--seed" => {
                let v = it.next().ok_or("missing value for --seed")?;
                flags.seed = Some(if v == "auto" {
                    SeedFlag::Auto
                } else {
                    SeedFlag::Fixed(v.parse().map_err(|_| format!("bad seed `{v}`"))?)
                });
            }
            "--out" => {
                flags.out = Some(it.next().ok_or("missing value for --out")?.clone());
            }
            "--format" => {
                let v = it.next().ok_or("missing value for --format")?;
                flags.format = Some(match v.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(format!("bad format `{v}` (expected json or csv)")),
                });
            }
            "--filter" => {
                flags.filter = Some(it.next().ok_or("missing value for --filter")?.clone());
            }
            other => return Err(format!("unknown flag `{other}`")),
        }
    }
    Ok(flags)
}

fn auto_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(1)
}

fn emit(path: Option<&str>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("cannot write `{p}`: {e}")),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn run_error_code(err: &CascadeError) -> u8 {
    match err {
        CascadeError::StageOverflow { .. } => EXIT_STAGE_OVERFLOW,
        CascadeError::Reduction(ReductionError::NonConvergent { .. }) => EXIT_NONCONVERGENT,
        _ => EXIT_CONFIG,
    }
}

fn cmd_run(args: &[String]) -> u8 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}\n\n{}", usage());
            return EXIT_CONFIG;
        }
    };
    let Some(config_path) = flags.config else {
        eprintln!("error: run requires --config PATH\n\n{}", usage());
        return EXIT_CONFIG;
    };
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read `{config_path}`: {e}");
            return EXIT_CONFIG;
        }
    };
    let mut cfg: RunConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: invalid config: {e}");
            return EXIT_CONFIG;
        }
    };
    match flags.seed {
        Some(SeedFlag::Fixed(s)) => cfg.seed = s,
        Some(SeedFlag::Auto) => cfg.seed = auto_seed(),
        None => {}
    }
    let out_path = flags.out.or(cfg.output.as_ref().map(|o| o.path.clone()));
    let format = flags
        .format
        .or(cfg.output.as_ref().map(|o| o.format))
        .unwrap_or(Format::Json);

    if cfg.mode == Mode::Verify {
        return verify_and_emit(None, out_path.as_deref(), format);
    }

    let sc = match cfg.scenario.build(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: invalid scenario: {e}");
            return EXIT_CONFIG;
        }
    };

    let result: Result<String, CascadeError> = match cfg.mode {
        Mode::Trajectory => {
            // Same stream as trajectory index 0 of an ensemble.
            let mut rng = ChaCha8Rng::seed_from_u64(cascade::mix_seed(cfg.seed, 0));
            cascade::run_trajectory(&sc, &mut rng).map(|t| match format {
                Format::Json => output::trajectory_json(&t),
                Format::Csv => output::trajectory_csv(&t),
            })
        }
        Mode::Ensemble => cascade::run_ensemble(&sc, cfg.n_traj, cfg.seed).map(|r| match format {
            Format::Json => output::ensemble_json(&r),
            Format::Csv => output::ensemble_csv(&r),
        }),
        Mode::Enumerate => cascade::enumerate_outcomes(&sc).map(|d| match format {
            Format::Json => output::distribution_json(&d),
            Format::Csv => output::distribution_csv(&d),
        }),
        Mode::EntropyScan => {
            cascade::entropy_scan(&sc, cfg.solver.grid_steps).map(|rows| match format {
                Format::Json => output::entropy_scan_json(&rows),
                Format::Csv => output::entropy_scan_csv(&rows),
            })
        }
        Mode::Verify => unreachable!("handled above"),
    };

    match result {
        Ok(content) => match emit(out_path.as_deref(), &content) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            run_error_code(&e)
        }
    }
}

fn verify_and_emit(filter: Option<&str>, out_path: Option<&str>, format: Format) -> u8 {
    let rows = verify::run_all(filter);
    for row in &rows {
        println!("{}", row.line());
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} rows, {} failed", rows.len(), failed);
    if let Some(path) = out_path {
        let content = match format {
            Format::Json => output::verify_json(&rows),
            Format::Csv => output::verify_csv(&rows),
        };
        if let Err(e) = emit(Some(path), &content) {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    }
    if failed > 0 {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    }
}

fn cmd_verify(args: &[String]) -> u8 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}\n\n{}", usage());
            return EXIT_CONFIG;
        }
    };
    verify_and_emit(
        flags.filter.as_deref(),
        flags.out.as_deref(),
        flags.format.unwrap_or(Format::Json),
    )
}
