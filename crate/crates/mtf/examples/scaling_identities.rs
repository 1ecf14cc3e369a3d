//! The (Z, B, T, μ) ↔ (β, ℓ, μ̃, T̃, B̃, h, b) dictionary, its exact algebraic
//! identities, and the dual-path check of the pressure rescaling.

use std::sync::Arc;

use mtf::fields::{Confinement, DensityField, RadialGrid};
use mtf::scaling::{pressure_rescale_check, scale_density, scale_params, PhysicalParams};

fn main() -> mtf::Result<()> {
    println!("{:>8} {:>10}  {:>10} {:>10} {:>10} {:>10} {:>10}", "Z", "B", "beta", "ell", "B~", "h", "b");
    for (big_z, b) in [(1.0, 0.0), (8.0, 16.0), (8.0, 1e3), (100.0, 1e2), (1e4, 1e8)] {
        let p = PhysicalParams::new(big_z, b, 1.0, 0.0, 1.0, Confinement::harmonic())?;
        let s = scale_params(&p)?;
        println!(
            "{big_z:>8} {b:>10}  {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            s.beta, s.ell, s.b_tilde, s.h, s.b
        );
    }

    let p = PhysicalParams::new(8.0, 16.0, 1.0, 0.0, 1.0, Confinement::harmonic())?;
    let s = scale_params(&p)?;
    println!("\nidentities at (Z, B) = (8, 16):");
    println!("  h·b = {:.16e}", s.h * s.b);
    println!("  B̃   = {:.16e}", s.b_tilde);
    println!("  h³  = {:.16e}", s.h * s.h * s.h);
    println!("  Z⁻¹(1+β)^(3/5) = {:.16e}", (1.0 + s.beta).powf(0.6) / 8.0);

    // mass scaling ∫ρ = Z ∫ρ̃ and the Z²ℓ⁻¹ functional rescaling
    let g = Arc::new(RadialGrid::log_spaced(1e-5, 12.0, 1200)?);
    let rho_t = DensityField::from_fn(Arc::clone(&g), |r| 0.3 * (-r).exp())?;
    let rho = scale_density(&rho_t, &p)?;
    println!("\ndensity scaling: ∫ρ̃ = {:.8}, ∫ρ = {:.8} (= Z ∫ρ̃)", rho_t.particle_number(), rho.particle_number());

    println!("\ndual-path evaluation of the pressure functional:");
    for (big_z, beta) in [(1.0_f64, 0.0_f64), (2.0, 1.0), (10.0, 0.0)] {
        let b = beta * big_z.powf(4.0 / 3.0);
        let params = PhysicalParams::new(big_z, b, 0.4, -1.0, 1.0, Confinement::harmonic())?;
        let rep = pressure_rescale_check(&rho_t, &params)?;
        println!(
            "  Z = {big_z:>4}, β = {beta}: unscaled {:.10e}, Z²ℓ⁻¹·scaled {:.10e}, rel gap {:.2e}",
            rep.unscaled, rep.scaled_mapped, rep.rel_discrepancy
        );
    }
    Ok(())
}
