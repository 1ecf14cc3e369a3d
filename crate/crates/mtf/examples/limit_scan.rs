//! Convergence of the minimized pressure toward its two limit branches:
//! the nonmagnetic functional as β → 0 and the lowest-Landau-level
//! functional as β → ∞.

use mtf::fields::Confinement;
use mtf::functional::{Beta, ScaledProblem, SolveOptions};
use mtf::scaling::{limit_scan, ScanMode};

fn main() -> mtf::Result<()> {
    let conf = Confinement::harmonic();
    let grid = ScaledProblem::default_grid(0.0, 0.5, &conf, 1200)?;
    let template = ScaledProblem::new(0.0, 0.5, Beta::Finite(1.0), 1.0, conf, grid)?;
    let opts = SolveOptions::default();

    for (mode, betas, label) in [
        (ScanMode::BetaToInf, vec![1e2, 1e3, 1e4, 1e5, 1e6], "β → ∞ (lowest Landau level)"),
        (ScanMode::BetaToZero, vec![1.0, 0.3, 0.1, 0.03, 0.01], "β → 0 (nonmagnetic)"),
    ] {
        let table = limit_scan(&template, &betas, mode, &opts)?;
        println!("{label}: limit pressure {:.12}", table.limit_pressure);
        println!("{:>10} {:>18} {:>12}", "beta", "pressure", "rel gap");
        for row in &table.rows {
            println!("{:>10.0e} {:>18.12} {:>12.3e}", row.beta, row.pressure, row.rel_gap);
        }
        if let Some(slope) = table.decay_exponent() {
            println!("fitted gap decay: gap ∝ β^{slope:.2}\n");
        }

        let mut csv = Vec::new();
        table.write_csv(&mut csv)?;
        let name = match mode {
            ScanMode::BetaToInf => "scan_to_inf.csv",
            ScanMode::BetaToZero => "scan_to_zero.csv",
        };
        std::fs::write(name, csv)?;
        println!("wrote {name}\n");
    }
    Ok(())
}
