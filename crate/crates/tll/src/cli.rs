//! Command-line front end: construction, energy evaluation, certified
//! optimization, degeneracy sampling, stability tests, density scans and
//! spectral checks, emitting JSON/CSV for downstream tooling.
//!
//! Exit codes: 0 on success, 1 when a certified gap or an invariant
//! violation is found (so CI can gate on conformance), 2 on usage errors.

use std::path::{Path, PathBuf};
use std::sync::Once;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{chain_lower_bound, energy_density_formula};
use crate::config::{
    build_tower_config, profile_of, sample_overlap_degenerate, Configuration, Domain,
    TowerProfile,
};
use crate::energy::{energy_per_length, ring_energy, total_energy};
use crate::error::Error;
use crate::optimizer::{
    anneal, brute_force_min, local_stability_test, AnnealSchedule, Certificate,
    OptimizationResult,
};
use crate::potential::{validate_family, PotentialSpec};
use crate::spectral::{functional_kspace, minimality_scan, Measure};

const EXIT_OK: i32 = 0;
const EXIT_VIOLATION: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "tll",
    version,
    about = "Tower-lattice ground states of range-1 pair potentials in 1D",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tower configuration: m+1 particles at each tall site, m
    /// elsewhere on the integer sites of [0, n].
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Comma-separated sorted tall sites, e.g. --tall-sites 0,2
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        tall_sites: Vec<u32>,
    },
    /// Total pair energy of a configuration file under a potential file.
    Energy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        /// Evaluate with periodic boundary conditions (ring of length n+1).
        #[arg(long)]
        ring: bool,
    },
    /// Closed-form ground energy and chain lower bound for N particles on [0, n].
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        n_particles: u64,
    },
    /// Search for a ground state and certify it against the chain bound.
    Minimize {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        n_particles: u64,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON file overriding the default annealing schedule.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Exhaustive grid enumeration instead of annealing.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = 0.25)]
        grid_step: f64,
    },
    /// Perturb particles inside a window of a ring configuration and report
    /// the minimum energy change.
    Stability {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        /// Window as "a,b".
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a degenerate overlap ground state on Ring(n+1) and verify its
    /// energy equals the closed form.
    Degeneracy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Comma-separated sorted offsets in [0,1), one per sub-lattice.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        offsets: Vec<f64>,
        /// Superpose an extra spread family with consecutive gaps >= 1.
        #[arg(long)]
        extra_spread: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV scan of measured ring energy per length against the closed-form
    /// density formula. Columns: rho,formula_energy,measured_energy,gap
    /// (12 significant digits).
    DensityScan {
        #[arg(long)]
        rho_min: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 64)]
        repeats: u32,
        #[arg(long)]
        potential: PathBuf,
    },
    /// Monte-Carlo minimality scan of the spectral functional I[mu].
    Spectral {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long = "L")]
        length: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cutoff: u32,
    },
    /// Check the family invariants of a potential file on a grid.
    ValidatePotential {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
    },
}

/// Entry point used by the `tll` binary; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    init_thread_pool();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; --help/--version are successes.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let params: Vec<String> = argv.iter().skip(1).cloned().collect();
    match dispatch(cli.command, &params) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

static THREAD_POOL: Once = Once::new();

/// TLL_THREADS caps the parallelism of annealing restarts and scans.
fn init_thread_pool() {
    THREAD_POOL.call_once(|| {
        if let Ok(raw) = std::env::var("TLL_THREADS") {
            if let Ok(threads) = raw.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads.max(1))
                    .build_global();
            }
        }
    });
}

fn dispatch(command: Command, params: &[String]) -> Result<i32, String> {
    match command {
        Command::Construct { n, m, tall_sites } => {
            let config = build_tower_config(n, m, &tall_sites).map_err(stringify)?;
            emit("construct", params, None, to_value(&config));
            Ok(EXIT_OK)
        }
        Command::Energy {
            config,
            potential,
            ring,
        } => {
            let cfg: Configuration = load_json(&config)?;
            let spec: PotentialSpec = load_json(&potential)?;
            let use_ring = ring || cfg.domain().is_ring();
            let report = if use_ring {
                let cfg = cfg.on_ring().map_err(stringify)?;
                let length = cfg.domain().site_count() as i64;
                let periodized = spec.periodize(length).map_err(stringify)?;
                ring_energy(&cfg, &periodized).map_err(stringify)?
            } else {
                total_energy(&cfg, &spec).map_err(stringify)?
            };
            emit("energy", params, None, to_value(&report));
            Ok(EXIT_OK)
        }
        Command::Bound { n, n_particles } => {
            let report = chain_lower_bound(n, n_particles).map_err(stringify)?;
            emit("bound", params, None, to_value(&report));
            Ok(EXIT_OK)
        }
        Command::Minimize {
            n,
            n_particles,
            potential,
            seed,
            schedule,
            brute_force,
            grid_step,
        } => {
            let spec: PotentialSpec = load_json(&potential)?;
            let result = if brute_force {
                brute_force_min(n, n_particles, &spec, grid_step)
                    .map_err(stringify)?
                    .result
            } else {
                let schedule = match schedule {
                    Some(path) => load_json::<AnnealSchedule>(&path)?,
                    None => AnnealSchedule::default_for(n_particles),
                };
                anneal(n, n_particles, &spec, &schedule, seed).map_err(stringify)?
            };
            let gap_found = matches!(
                result.certificate,
                Some(Certificate::GapRemaining { .. })
            );
            emit("minimize", params, Some(seed), minimize_report(&result));
            Ok(if gap_found { EXIT_VIOLATION } else { EXIT_OK })
        }
        Command::Stability {
            config,
            potential,
            window,
            trials,
            seed,
        } => {
            let cfg: Configuration = load_json(&config)?;
            let spec: PotentialSpec = load_json(&potential)?;
            let (a, b) = parse_window(&window)?;
            let length = match cfg.domain() {
                Domain::Ring { length } => length,
                Domain::Interval { .. } => {
                    return Err("stability requires a ring configuration file".into())
                }
            };
            let periodized = spec.periodize(length as i64).map_err(stringify)?;
            let report = local_stability_test(&cfg, &periodized, (a, b), trials, seed)
                .map_err(stringify)?;
            let payload = json!({
                "min_delta": report.min_delta,
                "stable": report.is_stable(),
                "violating": report.violating.as_ref().map(to_value),
                "trials": report.trials,
            });
            emit("stability", params, Some(seed), payload);
            Ok(if report.is_stable() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Degeneracy {
            n,
            m,
            offsets,
            extra_spread,
            seed,
        } => {
            let cfg = sample_overlap_degenerate(n, m, &offsets, extra_spread, seed)
                .map_err(stringify)?;
            let overlap = PotentialSpec::overlap();
            let periodized = overlap.periodize(n as i64 + 1).map_err(stringify)?;
            let measured = ring_energy(&cfg, &periodized).map_err(stringify)?.total;
            let formula =
                crate::bounds::ground_energy(n, cfg.len() as u64).map_err(stringify)? as f64;
            let equal = (measured - formula).abs() <= 1e-9;
            let payload = json!({
                "config": to_value(&cfg),
                "n_particles": cfg.len(),
                "ring_energy": measured,
                "ground_energy": formula,
                "equal_energy": equal,
            });
            emit("degeneracy", params, Some(seed), payload);
            Ok(if equal { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::DensityScan {
            rho_min,
            rho_max,
            steps,
            repeats,
            potential,
        } => {
            let spec: PotentialSpec = load_json(&potential)?;
            if steps < 1 {
                return Err("steps must be >= 1".into());
            }
            println!("rho,formula_energy,measured_energy,gap");
            let mut worst: f64 = 0.0;
            for i in 0..steps {
                let rho = if steps == 1 {
                    rho_min
                } else {
                    rho_min + (rho_max - rho_min) * i as f64 / (steps - 1) as f64
                };
                let formula = energy_density_formula(rho).map_err(stringify)?;
                let profile = density_profile(rho, repeats);
                let measured =
                    energy_per_length(&profile, &spec, repeats).map_err(stringify)?;
                let gap = measured - formula;
                worst = worst.max(gap.abs());
                println!(
                    "{},{},{},{}",
                    sig12(rho),
                    sig12(formula),
                    sig12(measured),
                    sig12(gap)
                );
            }
            Ok(if worst <= 0.02 { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Spectral {
            potential,
            length,
            samples,
            seed,
            cutoff,
        } => {
            let spec: PotentialSpec = load_json(&potential)?;
            let scan = minimality_scan(&spec, length, samples, seed).map_err(stringify)?;
            let mu0 = Measure::lattice(length).map_err(stringify)?;
            let kspace = functional_kspace(&mu0, &spec, cutoff).map_err(stringify)?;
            let minimal = scan.min_value >= 0.5 - 1e-9;
            let payload = json!({
                "samples": scan.samples,
                "min_value": scan.min_value,
                "mu0_value": scan.mu0_value,
                "argmin": to_value(&scan.argmin),
                "mu0_kspace": {
                    "value": kspace.value,
                    "truncation_estimate": kspace.truncation_estimate,
                },
                "minimal": minimal,
            });
            emit("spectral", params, Some(seed), payload);
            Ok(if minimal { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::ValidatePotential {
            potential,
            grid_step,
        } => {
            let spec: PotentialSpec = load_json(&potential)?;
            let report = validate_family(&spec, grid_step).map_err(stringify)?;
            let valid = report.is_valid();
            emit("validate-potential", params, None, to_value(&report));
            Ok(if valid { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

/// Two-height profile of density rho on `period` sites: base height
/// floor(rho) with round(frac * period) tall sites spread evenly. The
/// smallest period reproducing the fractional part exactly is used.
fn density_profile(rho: f64, max_period: u32) -> TowerProfile {
    let m = rho.floor() as u32;
    let frac = rho - m as f64;
    let mut period = max_period.max(1);
    for q in 1..=max_period.max(1) {
        if (frac * q as f64 - (frac * q as f64).round()).abs() < 1e-9 {
            period = q;
            break;
        }
    }
    let talls = (frac * period as f64).round() as u32;
    let heights = (0..period)
        .map(|i| {
            let before = (i as u64 * talls as u64) / period as u64;
            let after = ((i as u64 + 1) * talls as u64) / period as u64;
            if after > before {
                m + 1
            } else {
                m
            }
        })
        .collect();
    TowerProfile::new(heights)
}

fn minimize_report(result: &OptimizationResult) -> Value {
    let certificate = result.certificate.map(|c| match c {
        Certificate::CertifiedOptimal => json!({"status": "optimal", "gap": 0.0}),
        Certificate::GapRemaining { gap } => json!({"status": "gap", "gap": gap}),
    });
    let profile = profile_of(&result.best_config, 1e-4).map(|p| p.heights);
    json!({
        "best_energy": result.best_energy,
        "certificate": certificate,
        "config": result.best_config.positions(),
        "profile": profile,
        "seed": result.seed,
        "iterations": result.iterations,
    })
}

fn parse_window(raw: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("window \"{raw}\" must be \"a,b\""));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("window start \"{}\" is not a number", parts[0]))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("window end \"{}\" is not a number", parts[1]))?;
    Ok((a, b))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", path.display()))
}

fn stringify(e: Error) -> String {
    e.to_string()
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable report")
}

/// 12 significant digits, plain decimal notation.
fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Trim trailing zeros but keep at least one digit after the point.
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0');
        let trimmed = trimmed.strip_suffix('.').unwrap_or(trimmed);
        trimmed.to_string()
    } else {
        s
    }
}

/// Wraps a report in the reproducibility manifest: command, parameters,
/// seed, tool version and a SHA-256 digest of the report payload.
fn emit(command: &str, params: &[String], seed: Option<u64>, report: Value) {
    let payload = serde_json::to_string(&report).expect("serializable report");
    let digest = hex_digest(payload.as_bytes());
    let out = json!({
        "manifest": {
            "command": command,
            "params": params,
            "seed": seed,
            "version": env!("CARGO_PKG_VERSION"),
            "digest": digest,
        },
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("render"));
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
