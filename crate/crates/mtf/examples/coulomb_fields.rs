//! Radial field machinery: Coulomb potentials, Hartree energies, mollifiers
//! and L^p norms, checked against closed forms for a uniform ball.

use std::sync::Arc;

use mtf::fields::{
    coulomb_potential, hartree_energy, lp_norm, mollify, DensityField, Mollifier, PotentialField,
    RadialGrid, Region,
};

fn main() -> mtf::Result<()> {
    // grid with nodes pinned at the ball edge and the probe radii
    let g = Arc::new(RadialGrid::log_spaced_with(
        1e-4,
        8.0,
        20_000,
        &[0.5, 1.0 - 1e-9, 1.0 + 1e-9, 2.0],
    )?);
    let ball = DensityField::uniform_ball(Arc::clone(&g), 1.0, 1.0 - 0.5e-9)?;
    let v = coulomb_potential(&ball);

    println!("uniform ball, Q = 1, R = 1:");
    for (r, exact) in [(0.5, 1.375), (1.0, 1.0), (2.0, 0.5)] {
        let got = g.interpolate(v.values(), r);
        println!("  v({r}) = {got:.10}   closed form {exact}");
    }
    let d = hartree_energy(&ball);
    println!("  D(ρ,ρ) = {d:.10}   closed form 3/5");
    println!("  N      = {:.10}", ball.particle_number());
    println!("  ‖ρ‖₁   = {:.10}   (ball volume × density = 1)", lp_norm(&g, ball.values(), 1.0, Region::All)?);
    println!("  ‖v‖₆   = {:.10}", lp_norm(&g, v.values(), 6.0, Region::All)?);

    // Newton: beyond the support every lump looks like a point charge
    let lump = DensityField::from_fn(Arc::clone(&g), |r| if r < 1.2 { (2.0 * r).cos().powi(2) } else { 0.0 })?;
    let q = lump.particle_number();
    let vl = coulomb_potential(&lump);
    println!("\nNewton exterior law for a cos² lump of charge Q = {q:.6}:");
    for (i, &r) in g.nodes().iter().enumerate() {
        if (2.4..2.45).contains(&r) || (4.0..4.01).contains(&r) {
            println!("  r = {r:.4}: r·v(r) = {:.12}", vl.values()[i] * r);
        }
    }

    // mollification: constants pass through, harmonic tails are invariant
    let gm = Arc::new(RadialGrid::log_spaced(1e-3, 6.0, 1200)?);
    let m = Mollifier::new(0.1)?;
    let inv = PotentialField::from_fn(Arc::clone(&gm), |r| 1.0 / r)?;
    let smooth = mollify(&inv, &m)?;
    println!("\nmollified 1/r at scale 0.1 (harmonic mean-value property):");
    for r in [0.05, 0.3, 1.0, 2.0] {
        println!(
            "  r = {r:>5}: raw {:>10.6}, mollified {:>10.6}",
            1.0 / r,
            gm.interpolate(smooth.values(), r)
        );
    }
    Ok(())
}
