//! The magnetized free-electron-gas equation of state: pressure, density,
//! integrated density of states, envelope estimates, and the joins to the
//! B = 0 and T = 0 branches.

use mtf::eos::{
    integrated_dos, landau_density, landau_pressure, lll_pressure, pressure_bounds,
    zero_t_pressure, GasState,
};

fn main() -> mtf::Result<()> {
    println!("{:>7} {:>6} {:>6}  {:>14} {:>14}  {:>12} {:>12}", "mu", "T", "B", "P", "P'", "lower", "upper");
    for (mu, t, b) in [
        (-5.0, 1.0, 1.0),
        (0.0, 1.0, 1.0),
        (1.0, 0.1, 10.0),
        (5.0, 0.5, 2.0),
        (10.0, 1.0, 0.25),
        (50.0, 1.0, 0.05),
    ] {
        let s = GasState::new(mu, t, b)?;
        let rep = pressure_bounds(&s)?;
        println!(
            "{:>7} {:>6} {:>6}  {:>14.6e} {:>14.6e}  {:>12.4e} {:>12.4e}  {}",
            mu,
            t,
            b,
            rep.value,
            landau_density(&s)?,
            rep.lower,
            rep.upper,
            if rep.contained { "contained" } else { "VIOLATED" },
        );
    }

    println!("\nintegrated density of states at B = 2 (Landau edges at ε = 0, 4, 8, ...):");
    for eps in [0.0, 1.0, 2.0, 3.9, 4.0, 4.1, 8.5] {
        println!("  G({eps:>4}) = {:.10}", integrated_dos(eps, 2.0)?);
    }

    // the Landau sum joins the continuum as the field switches off
    let mu = 5.0;
    println!("\nB → 0 continuity at (μ = {mu}, T = 1):");
    for b in [1.0, 0.1, 0.01, 0.0] {
        let p = landau_pressure(&GasState::new(mu, 1.0, b)?)?;
        println!("  B = {b:>6}: P = {p:.12}");
    }

    // and the ground-state form as the temperature vanishes
    println!("\nT → 0 continuity at (μ = 1, B = 5):");
    for t in [0.5, 0.05, 0.005] {
        let p = landau_pressure(&GasState::new(1.0, t, 5.0)?)?;
        println!("  T = {t:>6}: P = {p:.10}");
    }
    println!("  T = 0     : P = {:.10}  (closed form)", zero_t_pressure(1.0, 5.0)?);

    // the lowest Landau level carries everything as β → ∞
    println!("\n(1+β)^(-3/5) P at the scaled field approaches the lowest-level branch:");
    let (mu, t) = (0.7, 0.8);
    for beta in [1e2_f64, 1e4, 1e6] {
        let b_tilde = beta * (1.0 + beta).powf(-0.4);
        let p = (1.0 + beta).powf(-0.6) * landau_pressure(&GasState::new(mu, t, b_tilde)?)?;
        println!("  β = {beta:>9.0e}: {p:.12}");
    }
    println!("  β = ∞       : {:.12}", lll_pressure(mu, t)?);
    Ok(())
}
