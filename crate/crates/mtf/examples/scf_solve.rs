//! Minimize the pressure functional by damped self-consistent iteration and
//! inspect the solution: residuals, functional terms, minimality, duality.

use std::sync::Arc;

use mtf::fields::{Confinement, DensityField};
use mtf::functional::{
    eval_free_energy_functional, eval_pressure_functional, scf_solve, tf_residual, Beta,
    ScaledProblem, SolveOptions,
};

fn main() -> mtf::Result<()> {
    let conf = Confinement::harmonic();
    let grid = ScaledProblem::default_grid(0.0, 0.5, &conf, 2000)?;
    let prob = ScaledProblem::new(0.0, 0.5, Beta::Finite(1.0), 1.0, conf, grid)?;
    let opts = SolveOptions::default();

    let rep = scf_solve(&prob, &opts)?;
    println!("μ̃ = {}, T̃ = {}, β = 1, z = 1, n = {}", prob.mu_tilde, prob.t_tilde, prob.grid.len());
    println!("converged          : {} in {} iterations", rep.converged, rep.iterations);
    println!("pressure           : {:.12}", rep.pressure);
    println!("  ∫ P(μ̃ - Ṽ) term  : {:.12}", rep.functional_terms.pressure_integral);
    println!("  Hartree term     : {:.12}", rep.functional_terms.hartree);
    println!("particle number    : {:.12}", rep.particle_number);

    let res = tf_residual(&rep.density, &prob)?;
    println!("residual sup-norm  : {:.3e}", res.sup_norm);

    print!("residual history   :");
    for (i, r) in rep.residual_history.iter().enumerate() {
        if i % 5 == 0 {
            print!(" {r:.1e}");
        }
    }
    println!();

    // the minimizer beats nearby admissible densities
    let zero = DensityField::zero(Arc::clone(&prob.grid));
    println!("functional at 0    : {:.12}", eval_pressure_functional(&zero, &prob)?);
    let inflated = DensityField::new(
        Arc::clone(&prob.grid),
        rep.density.values().iter().map(|v| v * 1.05).collect(),
    )?;
    println!("functional at 1.05ρ: {:.12}", eval_pressure_functional(&inflated, &prob)?);

    // grand-canonical duality F[ρ*] = μ̃N - P
    let f = eval_free_energy_functional(&rep.density, &prob)?;
    let dual = prob.mu_tilde * rep.particle_number - rep.pressure;
    println!("free energy F[ρ*]  : {f:.12}");
    println!("μ̃N - P             : {dual:.12}");

    // density profile snapshot
    println!("\nr, ρ(r) along the decade marks:");
    for &r in &[1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0] {
        println!("  {r:>8}: {:.6e}", prob.grid.interpolate(rep.density.values(), r));
    }
    Ok(())
}
