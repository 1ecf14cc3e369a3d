//! The exchange-correction diagnostics: C_γ = (3/5γ)∫ρ^{5/3}, the shifted
//! chemical potential μ + 3.68γ, and the admissible γ window.

use mtf::fields::Confinement;
use mtf::functional::{exchange_correction, gamma_window, scf_solve, Beta, ScaledProblem, SolveOptions};

fn main() -> mtf::Result<()> {
    let conf = Confinement::harmonic();
    let grid = ScaledProblem::default_grid(0.0, 0.5, &conf, 1200)?;
    let prob = ScaledProblem::new(0.0, 0.5, Beta::Finite(1.0), 1.0, conf, grid)?;
    let rep = scf_solve(&prob, &SolveOptions::default())?;
    println!("minimizer at (μ̃ = 0, T̃ = 0.5, β = 1): N = {:.6}, P = {:.6}\n", rep.particle_number, rep.pressure);

    println!("{:>8}  {:>14} {:>12}", "gamma", "C_gamma", "mu shift");
    for gamma in [0.5, 1.0, 2.0, 5.0] {
        let c = exchange_correction(&rep.density, gamma)?;
        println!("{gamma:>8}  {:>14.8e} {:>12.4}", c.c_gamma, c.mu_shift);
    }

    // the window (1+β)^{2/5} ≪ γ ≪ Z^{4/3}(1+β)^{2/5}; both ratios must be
    // large for the correction to stay subleading
    println!("\nγ window diagnostics at β = 1:");
    println!("{:>8} {:>8}  {:>12} {:>12}", "Z", "gamma", "γ/(1+β)^0.4", "upper/γ");
    for (big_z, gamma) in [(10.0, 3.0), (100.0, 10.0), (1000.0, 40.0), (1000.0, 2.0)] {
        let (lo, hi) = gamma_window(gamma, big_z, 1.0)?;
        let verdict = if lo > 3.0 && hi > 3.0 { "admissible" } else { "marginal" };
        println!("{big_z:>8} {gamma:>8}  {lo:>12.3} {hi:>12.3}  {verdict}");
    }
    Ok(())
}
