//! Command implementations behind the `mtf` binary. Each returns the
//! process exit code: 0 success, 1 configuration error, 2 non-convergence,
//! 3 partial scan failure.

use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::eos::{self, GasState};
use crate::error::{MtfError, Result};
use crate::fields::RadialGrid;
use crate::functional::{
    eval_free_energy_functional, scf_solve, Beta, ScaledProblem, SolveOptions,
};
use crate::scaling::{limit_scan, scale_params, PhysicalParams, ScanMode};

use super::config::RunConfig;
use super::selftest::{self, SelftestOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Tabulate the free-gas equation of state over the Cartesian grid of the
/// requested μ/T/B values, sorted lexicographically.
pub fn run_eos_table(cfg: &RunConfig, out_dir: &Path) -> Result<i32> {
    let block = cfg
        .eos_table
        .as_ref()
        .ok_or_else(|| MtfError::Config("eos-table needs an [eos_table] section".into()))?;
    let mut mus = block.mu.clone();
    let mut ts = block.t.clone();
    let mut bs = block.b.clone();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut csv = String::from("mu,T,B,pressure,density,lower_bound,upper_bound\n");
    if mus.is_empty() || ts.is_empty() || bs.is_empty() {
        eprintln!("warning: empty eos-table range, emitting header-only file");
    }
    for &mu in &mus {
        for &t in &ts {
            for &b in &bs {
                let state = GasState::new(mu, t, b)?;
                let bounds = eos::pressure_bounds(&state)?;
                let density = eos::landau_density(&state)?;
                csv.push_str(&format!(
                    "{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                    mu, t, b, bounds.value, density, bounds.lower, bounds.upper
                ));
            }
        }
    }
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("eos_table.csv"), csv)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ProblemEcho {
    mu_tilde: f64,
    t_tilde: f64,
    beta: Beta,
    z: f64,
    confinement_amplitude: f64,
    confinement_exponent: f64,
    grid_n: usize,
    grid_r_min: f64,
    grid_r_max: f64,
}

#[derive(Serialize)]
struct DualityEcho {
    free_energy_functional: f64,
    mu_n_minus_pressure: f64,
    rel_gap: f64,
}

#[derive(Serialize)]
struct UnscaledEcho {
    big_z: f64,
    ell: f64,
    pressure: f64,
    particle_number: f64,
}

#[derive(Serialize)]
struct SolveArtifact {
    spec_version: u32,
    timestamp_unix_s: u64,
    command: &'static str,
    problem: ProblemEcho,
    solver: SolveOptions,
    pressure: f64,
    converged: bool,
    iterations: usize,
    particle_number: f64,
    hartree: f64,
    pressure_integral: f64,
    duality: DualityEcho,
    residual_history: Vec<f64>,
    unscaled: Option<UnscaledEcho>,
}

/// Build the scaled problem from whichever parameter block is present
/// (exactly one is required).
fn problem_from_config(cfg: &RunConfig) -> Result<(ScaledProblem, Option<PhysicalParams>)> {
    let (mu_tilde, t_tilde, beta, z, physical) = match (&cfg.scaled, &cfg.physical) {
        (Some(_), Some(_)) => {
            return Err(MtfError::Config(
                "give exactly one of [scaled] or [physical], not both".into(),
            ))
        }
        (None, None) => {
            return Err(MtfError::Config(
                "give exactly one of [scaled] or [physical]".into(),
            ))
        }
        (Some(s), None) => (s.mu_tilde, s.t_tilde, s.beta, s.z, None),
        (None, Some(p)) => {
            let params =
                PhysicalParams::new(p.big_z, p.b, p.t, p.mu, p.z1, cfg.confinement)
                    .map_err(|e| MtfError::Config(e.to_string()))?;
            let s = scale_params(&params)?;
            (s.mu_tilde, s.t_tilde, Beta::Finite(s.beta), p.z1, Some(params))
        }
    };
    let grid = match (cfg.grid.r_min, cfg.grid.r_max) {
        (Some(lo), Some(hi)) => Arc::new(RadialGrid::log_spaced(lo, hi, cfg.grid.n)?),
        (None, None) => ScaledProblem::default_grid(mu_tilde, t_tilde, &cfg.confinement, cfg.grid.n)?,
        _ => {
            return Err(MtfError::Config(
                "grid.r_min and grid.r_max must be given together".into(),
            ))
        }
    };
    let prob = ScaledProblem::new(mu_tilde, t_tilde, beta, z, cfg.confinement, grid)?;
    Ok((prob, physical))
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        damping: cfg.solver.damping,
        tol: cfg.solver.tol,
        max_iter: cfg.solver.max_iter,
        anderson_depth: cfg.solver.anderson,
    }
}

/// Solve the minimization problem; write `density.csv` and `report.json`.
pub fn run_solve(cfg: &RunConfig, out_dir: &Path, emit_unscaled: bool) -> Result<i32> {
    let (prob, physical) = problem_from_config(cfg)?;
    if emit_unscaled && physical.is_none() {
        return Err(MtfError::Config(
            "--emit-unscaled needs the [physical] block (Z is required to undo the scaling)".into(),
        ));
    }
    let opts = solve_options(cfg);
    let report = scf_solve(&prob, &opts)?;

    let f_func = eval_free_energy_functional(&report.density, &prob)?;
    let dual = prob.mu_tilde * report.particle_number - report.pressure;
    let duality = DualityEcho {
        free_energy_functional: f_func,
        mu_n_minus_pressure: dual,
        rel_gap: ((f_func - dual) / report.pressure.abs().max(1e-300)).abs(),
    };

    let unscaled = match (&physical, emit_unscaled) {
        (Some(params), true) => {
            let s = scale_params(params)?;
            let rho_u = crate::scaling::scale_density(&report.density, params)?;
            fs::create_dir_all(out_dir)?;
            let mut file = fs::File::create(out_dir.join("density_unscaled.csv"))?;
            rho_u.write_csv(&mut file)?;
            Some(UnscaledEcho {
                big_z: params.big_z,
                ell: s.ell,
                pressure: params.big_z * params.big_z / s.ell * report.pressure,
                particle_number: params.big_z * report.particle_number,
            })
        }
        _ => None,
    };

    let artifact = SolveArtifact {
        spec_version: 1,
        timestamp_unix_s: timestamp(),
        command: "solve",
        problem: ProblemEcho {
            mu_tilde: prob.mu_tilde,
            t_tilde: prob.t_tilde,
            beta: prob.beta,
            z: prob.z,
            confinement_amplitude: prob.confinement.amplitude,
            confinement_exponent: prob.confinement.exponent,
            grid_n: prob.grid.len(),
            grid_r_min: prob.grid.r_min(),
            grid_r_max: prob.grid.r_max(),
        },
        solver: opts,
        pressure: report.pressure,
        converged: report.converged,
        iterations: report.iterations,
        particle_number: report.particle_number,
        hartree: report.hartree,
        pressure_integral: report.functional_terms.pressure_integral,
        duality,
        residual_history: report.residual_history.clone(),
        unscaled,
    };

    fs::create_dir_all(out_dir)?;
    let mut file = fs::File::create(out_dir.join("density.csv"))?;
    report.density.write_csv(&mut file)?;
    fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&artifact)?)?;

    Ok(if report.converged { EXIT_OK } else { EXIT_NONCONVERGENCE })
}

#[derive(Serialize)]
struct ScanSummary {
    spec_version: u32,
    timestamp_unix_s: u64,
    command: &'static str,
    mode: ScanMode,
    betas: Vec<f64>,
    limit_pressure: f64,
    limit_converged: bool,
    failed_betas: Vec<f64>,
    decay_exponent: Option<f64>,
    note: Option<&'static str>,
}

/// Run a β scan toward the requested limit; write `scan.csv` and
/// `scan_summary.json`.
pub fn run_scan(cfg: &RunConfig, out_dir: &Path) -> Result<i32> {
    let block = cfg
        .scan
        .as_ref()
        .ok_or_else(|| MtfError::Config("scan needs a [scan] section".into()))?
        .clone();
    let (template, _) = problem_from_config(cfg)?;
    let opts = solve_options(cfg);
    let table = limit_scan(&template, &block.betas, block.mode, &opts)?;

    fs::create_dir_all(out_dir)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    fs::write(out_dir.join("scan.csv"), csv)?;

    let failed: Vec<f64> =
        table.rows.iter().filter(|r| !r.converged).map(|r| r.beta).collect();
    let exponent = table.decay_exponent();
    let summary = ScanSummary {
        spec_version: 1,
        timestamp_unix_s: timestamp(),
        command: "scan",
        mode: table.mode,
        betas: block.betas.clone(),
        limit_pressure: table.limit_pressure,
        limit_converged: table.limit_converged,
        failed_betas: failed.clone(),
        decay_exponent: exponent,
        note: if exponent.is_none() { Some("fewer than 3 usable points; no exponent fit") } else { None },
    };
    fs::write(out_dir.join("scan_summary.json"), serde_json::to_string_pretty(&summary)?)?;

    if !failed.is_empty() || !table.limit_converged {
        eprintln!("warning: {} scan member(s) did not converge", failed.len());
        return Ok(EXIT_PARTIAL);
    }
    Ok(EXIT_OK)
}

/// Run the invariant battery and print one pass/fail line per check.
pub fn run_selftest(cfg: &RunConfig) -> Result<i32> {
    let opts = SelftestOptions { tolerance_scale: cfg.tolerance_scale, sommerfeld_coefficient: None };
    let results = selftest::run_battery(&opts);
    print!("{}", selftest::render_table(&results));
    Ok(if selftest::all_passed(&results) { EXIT_OK } else { EXIT_CONFIG })
}
