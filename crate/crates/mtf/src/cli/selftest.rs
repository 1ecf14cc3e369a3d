//! The self-test battery: one fast check per library invariant, runnable
//! from the command line. Each check reports a measured defect against a
//! threshold; a tolerance scale multiplies every threshold (a scale of zero
//! turns the battery into a falsification probe that must report failures).

use std::sync::Arc;

use crate::eos;
use crate::fermi::{fermi_integral, fermi_integral_prime, FermiOrder};
use crate::fields::{
    self, coulomb_potential, hartree_cross, hartree_energy, lp_norm, mollify, Confinement,
    DensityField, Mollifier, PotentialField, RadialGrid, Region,
};
use crate::functional::{
    chemical_potential_of_density, eval_free_energy_functional, eval_pressure_functional,
    exchange_correction, free_energy_density, scf_solve, tf_residual, Beta, ScaledProblem,
    SolveOptions,
};
use crate::numerics::quad;
use crate::numerics::rng::SplitMix64;
use crate::numerics::ulp_distance;
use crate::scaling::{scale_density, scale_params, unscale_density, PhysicalParams};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    /// multiplies every threshold; 1.0 is the contract level
    pub tolerance_scale: f64,
    /// override of the leading degenerate-expansion coefficient of I_{1/2}
    /// (test fixture: injecting a wrong value must fail the asymptotics check)
    pub sommerfeld_coefficient: Option<f64>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { tolerance_scale: 1.0, sommerfeld_coefficient: None }
    }
}

struct Battery {
    scale: f64,
    results: Vec<CheckResult>,
}

impl Battery {
    fn record(&mut self, name: &'static str, measured: f64, threshold: f64, detail: String) {
        let passed = measured <= threshold * self.scale;
        self.results.push(CheckResult { name, passed, measured, threshold, detail });
    }
}

pub fn run_battery(opts: &SelftestOptions) -> Vec<CheckResult> {
    let mut b = Battery { scale: opts.tolerance_scale, results: Vec::new() };

    fermi_checks(&mut b, opts);
    eos_checks(&mut b);
    field_checks(&mut b);
    scaling_checks(&mut b);
    solver_checks(&mut b);

    b.results
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{mark}] {:<28} measured {:>12.3e}  threshold {:>9.1e}  {}\n",
            r.name, r.measured, r.threshold, r.detail
        ));
    }
    let n_fail = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", results.len(), n_fail));
    out
}

// ---------------------------------------------------------------------------

fn fermi_checks(b: &mut Battery, opts: &SelftestOptions) {
    // analytic anchors I_k(0) = Γ(k+1) η(k+1)
    let anchors = [
        (FermiOrder::MinusHalf, 1.072_154_929_940_191_3),
        (FermiOrder::Half, 0.678_093_895_153_101),
        (FermiOrder::ThreeHalves, 1.152_803_837_088_361_3),
    ];
    let mut worst: f64 = 0.0;
    for (k, reference) in anchors {
        let got = fermi_integral(k, 0.0).unwrap();
        worst = worst.max(((got - reference) / reference).abs());
    }
    b.record("fermi-anchors", worst, 1e-10, "I_k(0) vs Γ(k+1)η(k+1)".into());

    // monotone and midpoint-convex on a grid
    let mut violation: f64 = 0.0;
    for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
        let vs: Vec<f64> = (0..120)
            .map(|i| fermi_integral(k, -30.0 + 60.0 * i as f64 / 119.0).unwrap())
            .collect();
        for w in vs.windows(2) {
            violation = violation.max(w[0] - w[1]);
        }
        if k != FermiOrder::MinusHalf {
            for w in vs.windows(3) {
                violation = violation.max(-(w[2] - 2.0 * w[1] + w[0]) / w[2].abs().max(1e-30));
            }
        }
    }
    b.record("fermi-monotone-convex", violation.max(0.0), 1e-12, "grid sweep".into());

    // derivative identity against centered differences
    let mut worst: f64 = 0.0;
    for k in [FermiOrder::Half, FermiOrder::ThreeHalves] {
        for x in [-20.0_f64, -1.0, 0.0, 1.0, 20.0, 100.0] {
            let h = 1e-5 * (1.0 + x.abs());
            let fd = (fermi_integral(k, x + h).unwrap() - fermi_integral(k, x - h).unwrap()) / (2.0 * h);
            let an = fermi_integral_prime(k, x).unwrap();
            worst = worst.max(((an - fd) / an.abs().max(1.0)).abs());
        }
    }
    b.record("fermi-derivative-identity", worst, 1e-6, "I'_k vs finite difference".into());

    // limiting regimes
    let mut worst: f64 = 0.0;
    for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
        let kk = k.k();
        let gamma = crate::numerics::special::gamma_half(k.two_k() + 2);
        let nondeg = fermi_integral(k, -30.0).unwrap() / (gamma * (-30.0_f64).exp());
        worst = worst.max((nondeg - 1.0).abs() / 1e-3);
        let deg = fermi_integral(k, 400.0).unwrap() / (400.0_f64.powf(kk + 1.0) / (kk + 1.0));
        worst = worst.max((deg - 1.0).abs() / 1e-2);
    }
    b.record("fermi-limits", worst, 1.0, "nondegenerate and degenerate tails".into());

    // leading Sommerfeld coefficient of I_{1/2}: (I/(2/3 x^{3/2}) - 1)·x² → π²/8
    let expected = opts.sommerfeld_coefficient.unwrap_or(std::f64::consts::PI.powi(2) / 8.0);
    let x: f64 = 50.0;
    let measured_c =
        (fermi_integral(FermiOrder::Half, x).unwrap() / (2.0 / 3.0 * x.powf(1.5)) - 1.0) * x * x;
    b.record(
        "fermi-sommerfeld-coefficient",
        (measured_c - expected).abs(),
        5e-3,
        format!("measured {measured_c:.6}, expected {expected:.6}"),
    );
}

fn eos_checks(b: &mut Battery) {
    // thermodynamic consistency on random states
    let mut rng = SplitMix64::new(0x00C0FFEE);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mu = rng.uniform(-20.0, 20.0);
        let t = rng.uniform(0.1, 10.0);
        let bb = rng.uniform(0.0, 100.0);
        let s = eos::GasState::new(mu, t, bb).unwrap();
        let h = 1e-3 * t.min(1.0);
        let fd = (eos::landau_pressure(&eos::GasState::new(mu + h, t, bb).unwrap()).unwrap()
            - eos::landau_pressure(&eos::GasState::new(mu - h, t, bb).unwrap()).unwrap())
            / (2.0 * h);
        let an = eos::landau_density(&s).unwrap();
        worst = worst.max(((an - fd) / an).abs());
    }
    b.record("eos-thermo-consistency", worst, 1e-6, "P' vs finite difference, 20 states".into());

    // Landau-sum pressure against quadrature of the integrated DOS
    let mut rng = SplitMix64::new(0xDA7A);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let mu = rng.uniform(-3.0, 8.0);
        let t = rng.uniform(0.3, 2.0);
        let bb = rng.uniform(0.2, 5.0);
        let p_sum = eos::landau_pressure(&eos::GasState::new(mu, t, bb).unwrap()).unwrap();
        let p_dos = dos_pressure_quadrature(mu, t, bb);
        worst = worst.max(((p_sum - p_dos) / p_sum).abs());
    }
    b.record("eos-form-equivalence", worst, 1e-8, "level sum vs ∫G(ε)f(ε)dε, 10 states".into());

    // envelope containment on a 5×5×5 grid
    let mut violations = 0usize;
    for &mu in &[-10.0, -1.0, 0.5, 5.0, 20.0] {
        for &t in &[0.05, 0.2, 1.0, 3.0, 10.0] {
            for &bb in &[0.0, 0.5, 2.0, 20.0, 80.0] {
                let rep = eos::pressure_bounds(&eos::GasState::new(mu, t, bb).unwrap()).unwrap();
                if !rep.contained {
                    violations += 1;
                }
            }
        }
    }
    b.record("eos-envelope", violations as f64, 0.5, "containment on 125 states".into());

    // continuity toward the B = 0 and T = 0 branches
    let p_small_b = eos::landau_pressure(&eos::GasState::new(5.0, 1.0, 0.01).unwrap()).unwrap();
    let p_zero_b = eos::landau_pressure(&eos::GasState::new(5.0, 1.0, 0.0).unwrap()).unwrap();
    let mut worst = ((p_small_b - p_zero_b) / p_zero_b).abs() / 1e-3;
    let p_small_t = eos::landau_pressure(&eos::GasState::new(1.0, 1e-3, 5.0).unwrap()).unwrap();
    let p_zero_t = eos::zero_t_pressure(1.0, 5.0).unwrap();
    worst = worst.max(((p_small_t - p_zero_t) / p_zero_t).abs() / 1e-3);
    b.record("eos-limit-continuity", worst, 1.0, "B→0 and T→0 joins".into());
}

/// P via ∫ G(ε) f(ε) dε with the square-root edges handled by substitution.
fn dos_pressure_quadrature(mu: f64, t: f64, bb: f64) -> f64 {
    let cutoff = mu + 45.0 * t;
    let mut total = 0.0;
    let mut nu = 0u64;
    loop {
        let lo = 2.0 * bb * nu as f64;
        if lo >= cutoff {
            break;
        }
        let hi = (lo + 2.0 * bb).min(cutoff);
        // ε = lo + u², du-integration removes the edge singularity of G
        let f = |u: f64| {
            let eps = lo + u * u;
            let g = eos::integrated_dos(eps, bb).unwrap();
            2.0 * u * g / (((eps - mu) / t).exp() + 1.0)
        };
        total += quad::adaptive(&f, 0.0, (hi - lo).sqrt(), 1e-11, 1e-300);
        nu += 1;
    }
    total
}

fn field_checks(b: &mut Battery) {
    let g = Arc::new(
        RadialGrid::log_spaced_with(1e-4, 8.0, 12_000, &[0.5, 1.0 - 1e-9, 1.0 + 1e-9, 2.0])
            .unwrap(),
    );
    let ball = DensityField::uniform_ball(Arc::clone(&g), 1.0, 1.0 - 0.5e-9).unwrap();
    let v = coulomb_potential(&ball);
    let at = |r: f64| g.interpolate(v.values(), r);
    let mut worst = ((at(0.5) - 1.375) / 1.375).abs();
    worst = worst.max(((at(2.0) - 0.5) / 0.5).abs());
    worst = worst.max(((hartree_energy(&ball) - 0.6) / 0.6).abs());
    b.record("coulomb-ball-oracles", worst, 1e-5, "uniform ball v and D vs closed forms".into());

    // Newton exterior law for a compact lump
    let lump = DensityField::from_fn(Arc::clone(&g), |r| if r < 1.0 { (1.5 * r).cos().powi(2) } else { 0.0 })
        .unwrap();
    let q = lump.particle_number();
    let vl = coulomb_potential(&lump);
    let mut worst: f64 = 0.0;
    for (i, &r) in g.nodes().iter().enumerate() {
        if r >= 2.0 {
            worst = worst.max((vl.values()[i] * r / q - 1.0).abs());
        }
    }
    b.record("newton-exterior", worst, 1e-10, "r·v/Q beyond twice the support".into());

    // bilinearity of the Hartree form
    let r1 = DensityField::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
    let r2 = DensityField::from_fn(Arc::clone(&g), |r| (-(r - 1.0) * (r - 1.0) * 3.0).exp()).unwrap();
    let sum = DensityField::new(
        Arc::clone(&g),
        r1.values().iter().zip(r2.values()).map(|(a, b)| a + b).collect(),
    )
    .unwrap();
    let lhs = hartree_energy(&sum);
    let rhs = hartree_energy(&r1) + 2.0 * hartree_cross(&r1, &r2).unwrap() + hartree_energy(&r2);
    b.record(
        "hartree-bilinearity",
        ((lhs - rhs) / lhs).abs(),
        1e-10,
        "D(ρ₁+ρ₂) expansion".into(),
    );

    // Coulomb bound over the density family
    let mut worst: f64 = 0.0;
    for rho in density_family(&g) {
        let vr = coulomb_potential(&rho);
        let n6 = lp_norm(&g, vr.values(), 6.0, Region::All).unwrap();
        let d = hartree_energy(&rho);
        worst = worst.max(n6 * n6 / d / fields::COULOMB_SOBOLEV_RATIO_BOUND);
    }
    b.record("coulomb-sobolev-bound", worst, 1.0, "‖v‖₆²/D against the frozen bound".into());

    // mollifier: constants exactly, harmonic mean value, L^p convergence
    let gm = Arc::new(RadialGrid::log_spaced(1e-3, 6.0, 900).unwrap());
    let c = PotentialField::from_fn(Arc::clone(&gm), |_| 2.0).unwrap();
    let m = Mollifier::new(0.1).unwrap();
    let mc = mollify(&c, &m).unwrap();
    let mut worst = mc.values().iter().map(|&x| (x - 2.0).abs()).fold(0.0, f64::max) / 1e-12;
    let inv = PotentialField::from_fn(Arc::clone(&gm), |r| 1.0 / r).unwrap();
    let mi = mollify(&inv, &m).unwrap();
    worst = worst.max((gm.interpolate(mi.values(), 1.0) - 1.0).abs() / 1e-4);
    // ‖v - v∗j_r‖ shrinks with the smoothing scale
    let smooth = PotentialField::from_fn(Arc::clone(&gm), |r| (-r * r).exp()).unwrap();
    let gap = |scale: f64| {
        let out = mollify(&smooth, &Mollifier::new(scale).unwrap()).unwrap();
        let diff: Vec<f64> =
            out.values().iter().zip(smooth.values()).map(|(a, b)| a - b).collect();
        lp_norm(&gm, &diff, 2.0, Region::Ball(3.0)).unwrap()
    };
    let (g1, g2) = (gap(0.2), gap(0.1));
    worst = worst.max(g2 / g1 / 0.5); // at least halves when the scale halves
    b.record("mollifier", worst, 1.0, "constants, mean value, shrinking smoothing error".into());
}

fn scaling_checks(b: &mut Battery) {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let big_z = 10.0_f64.powf(6.0 * i as f64 / 9.0);
            let bb = if j == 0 { 0.0 } else { 10.0_f64.powf(10.0 * j as f64 / 9.0 - 1.0) };
            let p = PhysicalParams::new(big_z, bb, 1.0, 0.0, 1.0, Confinement::harmonic()).unwrap();
            let s = scale_params(&p).unwrap();
            worst = worst.max(ulp_distance(s.h * s.b, s.b_tilde));
            worst = worst.max(ulp_distance(s.h * s.h * s.h, (1.0 + s.beta).powf(0.6) / big_z));
        }
    }
    b.record("scaling-identities", worst, 4.0, "h·b = B̃ and h³ = Z⁻¹(1+β)^{3/5}, in ulp".into());

    let g = Arc::new(RadialGrid::log_spaced(1e-4, 10.0, 700).unwrap());
    let rho_t = DensityField::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
    let p = PhysicalParams::new(8.0, 16.0, 1.0, 0.0, 1.0, Confinement::harmonic()).unwrap();
    let rho = scale_density(&rho_t, &p).unwrap();
    let back = unscale_density(&rho, &p).unwrap();
    let mut worst: f64 = 0.0;
    for (a, bb) in back.values().iter().zip(rho_t.values()) {
        worst = worst.max((a - bb).abs() / bb.abs().max(1e-300));
    }
    b.record("scaling-roundtrip", worst, 1e-12, "scale then unscale a density".into());
}

fn solver_checks(b: &mut Battery) {
    let conf = Confinement::harmonic();
    let grid = ScaledProblem::default_grid(0.0, 0.5, &conf, 500).unwrap();
    let prob = ScaledProblem::new(0.0, 0.5, Beta::Finite(1.0), 1.0, conf, grid).unwrap();
    let rep = scf_solve(&prob, &SolveOptions { tol: 1e-8, ..Default::default() }).unwrap();
    let res = tf_residual(&rep.density, &prob).unwrap();
    let measured = if rep.converged { res.sup_norm } else { f64::INFINITY };
    b.record("solver-residual", measured, 1e-6, format!("{} iterations", rep.iterations));

    // minimality against a few admissible perturbations
    let mut worst: f64 = 0.0;
    for center in [0.1, 0.5, 1.5] {
        for sign in [1.0, -1.0] {
            let values: Vec<f64> = rep
                .density
                .values()
                .iter()
                .zip(prob.grid.nodes())
                .map(|(&v, &r)| {
                    (v + sign * 0.05 * (-(r - center) * (r - center) * 8.0).exp() * (1.0 + v)).max(0.0)
                })
                .collect();
            let pert = DensityField::new(Arc::clone(&prob.grid), values).unwrap();
            let val = eval_pressure_functional(&pert, &prob).unwrap();
            worst = worst.max((rep.pressure - val) / rep.pressure.abs());
        }
    }
    b.record("solver-minimality", worst.max(0.0), 1e-9, "six bump perturbations".into());

    // Legendre duality of the homogeneous gas
    let (t, bb) = (1.0, 1.0);
    let mut worst: f64 = 0.0;
    for mu in [-5.0, 0.0, 5.0] {
        let rho = eos::landau_density(&eos::GasState::new(mu, t, bb).unwrap()).unwrap();
        let h = 1e-5 * rho;
        let fd = (free_energy_density(rho + h, t, bb).unwrap()
            - free_energy_density(rho - h, t, bb).unwrap())
            / (2.0 * h);
        worst = worst.max((fd - mu).abs() / mu.abs().max(1.0));
        let mu_back = chemical_potential_of_density(rho, t, bb).unwrap();
        worst = worst.max((mu_back - mu).abs() / mu.abs().max(1.0));
    }
    b.record("legendre-duality", worst, 1e-6, "f'(P'(μ)) = μ".into());

    // grand-canonical duality at the minimizer
    let f_func = eval_free_energy_functional(&rep.density, &prob).unwrap();
    let dual = prob.mu_tilde * rep.particle_number - rep.pressure;
    b.record(
        "duality-grand-canonical",
        ((f_func - dual) / rep.pressure).abs(),
        1e-5,
        "F[ρ*] = μ̃N - P".into(),
    );

    // midpoint convexity of the functional
    let mk = |f: &dyn Fn(f64) -> f64| DensityField::from_fn(Arc::clone(&prob.grid), f).unwrap();
    let pairs = [
        (mk(&|r| (-r * r).exp()), mk(&|r| (-(r - 1.0) * (r - 1.0) * 2.0).exp())),
        (mk(&|r| (-r).exp()), mk(&|r| 1.0 / (1.0 + r.powi(4)))),
        (mk(&|r| if r < 0.8 { 0.4 } else { 0.0 }), mk(&|r| 0.2 * (-r).exp())),
    ];
    let mut worst: f64 = 0.0;
    for (r1, r2) in pairs {
        let p1 = eval_pressure_functional(&r1, &prob).unwrap();
        let p2 = eval_pressure_functional(&r2, &prob).unwrap();
        let mix: Vec<f64> =
            r1.values().iter().zip(r2.values()).map(|(&a, &b)| 0.5 * (a + b)).collect();
        let pm =
            eval_pressure_functional(&DensityField::new(Arc::clone(&prob.grid), mix).unwrap(), &prob)
                .unwrap();
        worst = worst.max((pm - 0.5 * (p1 + p2)) / (p1.abs() + p2.abs()).max(1.0));
    }
    b.record("functional-convexity", worst.max(0.0), 1e-10, "midpoint test, 3 pairs".into());

    // exchange-correction scaling in γ
    let ball = DensityField::from_fn(Arc::clone(&prob.grid), |r| (-r * r).exp()).unwrap();
    let c1 = exchange_correction(&ball, 1.0).unwrap();
    let c2 = exchange_correction(&ball, 2.0).unwrap();
    b.record(
        "exchange-gamma-scaling",
        (2.0 * c2.c_gamma - c1.c_gamma).abs() / c1.c_gamma,
        1e-14,
        "C_γ ∝ 1/γ".into(),
    );
}

/// Balls, Gaussians, shells, exponentials: the reference density family.
fn density_family(g: &Arc<RadialGrid>) -> Vec<DensityField> {
    let mk = |f: Box<dyn Fn(f64) -> f64>| DensityField::from_fn(Arc::clone(g), f).unwrap();
    vec![
        mk(Box::new(|r| if r <= 0.5 { 1.0 } else { 0.0 })),
        mk(Box::new(|r| if r <= 1.0 { 0.3 } else { 0.0 })),
        mk(Box::new(|r| if r <= 2.0 { 2.0 } else { 0.0 })),
        mk(Box::new(|r| (-r * r).exp())),
        mk(Box::new(|r| (-(r / 0.3) * (r / 0.3)).exp())),
        mk(Box::new(|r| 5.0 * (-(r / 2.0) * (r / 2.0)).exp())),
        mk(Box::new(|r| if (1.0..2.0).contains(&r) { 1.0 } else { 0.0 })),
        mk(Box::new(|r| if (0.2..0.4).contains(&r) { 4.0 } else { 0.0 })),
        mk(Box::new(|r| (-r).exp())),
        mk(Box::new(|r| (1.0 + r * r).powi(-3))),
    ]
}
