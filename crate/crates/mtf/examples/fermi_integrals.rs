//! Evaluate the Fermi-Dirac integrals I_k(x) across their regimes and
//! show the classical limiting behaviour on both sides.

use mtf::fermi::{fermi_integral, fermi_integral_prime, FermiOrder};

fn main() -> mtf::Result<()> {
    println!("I_k(x) for k = -1/2, 1/2, 3/2\n");
    println!("{:>10}  {:>24}  {:>24}  {:>24}", "x", "I_{-1/2}", "I_{1/2}", "I_{3/2}");
    for x in [-700.0, -30.0, -5.0, -1.0, 0.0, 1.0, 5.0, 30.0, 100.0, 700.0] {
        println!(
            "{:>10}  {:>24.16e}  {:>24.16e}  {:>24.16e}",
            x,
            fermi_integral(FermiOrder::MinusHalf, x)?,
            fermi_integral(FermiOrder::Half, x)?,
            fermi_integral(FermiOrder::ThreeHalves, x)?,
        );
    }

    println!("\nnondegenerate limit: I_k(x) → Γ(k+1) e^x as x → -∞");
    let x = -30.0;
    for (k, gamma) in [
        (FermiOrder::MinusHalf, std::f64::consts::PI.sqrt()),
        (FermiOrder::Half, std::f64::consts::PI.sqrt() / 2.0),
        (FermiOrder::ThreeHalves, 0.75 * std::f64::consts::PI.sqrt()),
    ] {
        let ratio = fermi_integral(k, x)? / (gamma * x.exp());
        println!("  k = {:>4}: ratio at x = -30 is {ratio:.12}", k.k());
    }

    println!("\ndegenerate limit: I_k(x) → x^(k+1)/(k+1) as x → +∞");
    let x: f64 = 400.0;
    for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
        let ratio = fermi_integral(k, x)? / (x.powf(k.k() + 1.0) / (k.k() + 1.0));
        println!("  k = {:>4}: ratio at x = 400 is {ratio:.12}", k.k());
    }

    println!("\nderivative identity I'_k = k I_(k-1) against finite differences:");
    for x in [-10.0_f64, 0.0, 12.0] {
        let h = 1e-6 * (1.0 + x.abs());
        let fd = (fermi_integral(FermiOrder::Half, x + h)? - fermi_integral(FermiOrder::Half, x - h)?)
            / (2.0 * h);
        let an = fermi_integral_prime(FermiOrder::Half, x)?;
        println!("  x = {x:>6}: analytic {an:.12e}, finite difference {fd:.12e}");
    }
    Ok(())
}
