//! The Legendre transform pair: pressure P(μ) of the homogeneous gas and
//! free energy density f(ρ), with f' inverting P'.

use mtf::eos::{landau_density, landau_pressure, GasState};
use mtf::functional::{chemical_potential_of_density, free_energy_density};

fn main() -> mtf::Result<()> {
    let (t, b) = (1.0, 1.0);
    println!("gas at T = {t}, B = {b}\n");
    println!("{:>6}  {:>16} {:>16} {:>16} {:>14}", "mu", "rho = P'(mu)", "f(rho)", "mu rho - P", "f'(rho)");
    for mu in [-5.0, -2.0, 0.0, 2.0, 5.0] {
        let s = GasState::new(mu, t, b)?;
        let rho = landau_density(&s)?;
        let p = landau_pressure(&s)?;
        let f = free_energy_density(rho, t, b)?;
        let mu_back = chemical_potential_of_density(rho, t, b)?;
        println!("{mu:>6}  {rho:>16.10e} {f:>16.10e} {:>16.10e} {mu_back:>14.10}", mu * rho - p);
    }

    println!("\nf(0) = {}", free_energy_density(0.0, t, b)?);

    // convexity of f along a density ray
    println!("\nf is convex: second differences along a ρ-ray are positive");
    let rho0 = landau_density(&GasState::new(1.0, t, b)?)?;
    let h = 0.1 * rho0;
    for k in 1..=5 {
        let r = k as f64 * h;
        let second = free_energy_density(r + h, t, b)? - 2.0 * free_energy_density(r, t, b)?
            + free_energy_density(r - h, t, b)?;
        println!("  ρ = {r:.4e}: Δ²f = {second:.6e}");
    }
    Ok(())
}
