//! Test-side oracles, kept independent of the library's evaluation paths:
//! adaptive Simpson quadrature on the defining integrals, and a deterministic
//! sample generator.

#![allow(dead_code)]

/// Adaptive Simpson with explicit error control.
#[allow(clippy::too_many_arguments)]
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Brute-force Fermi-Dirac integral ∫₀^∞ y^k/(e^{y-x}+1) dy for any real
/// k > -1, via the substitution y = t² that regularizes the k = -1/2 end.
pub fn fermi_oracle(k: f64, x: f64) -> f64 {
    let t_max = (x.max(0.0) + 60.0).sqrt();
    let integrand = |t: f64| {
        let v = t * t - x;
        let sigma = if v > 40.0 { (-v).exp() } else { 1.0 / (v.exp() + 1.0) };
        2.0 * t.powf(2.0 * k + 1.0) * sigma
    };
    // scale the absolute tolerance to the expected magnitude
    let scale = if x > 1.0 { x.powf(k + 1.0) / (k + 1.0) } else { x.exp().min(1.0) };
    simpson(&integrand, 0.0, t_max, 1e-13 * scale.max(1e-300))
}

/// Landau-level pressure summed directly from the oracle integrals, in the
/// convention P = (B T^{3/2}/π) [I_{1/2}(μ/T) + 2 Σ_{ν≥1} I_{1/2}(...)].
pub fn landau_pressure_oracle(mu: f64, t: f64, b: f64) -> f64 {
    let mut sum = fermi_oracle(0.5, mu / t);
    let mut nu = 1.0;
    loop {
        let x = (mu - 2.0 * b * nu) / t;
        if x < -45.0 {
            break;
        }
        sum += 2.0 * fermi_oracle(0.5, x);
        nu += 1.0;
    }
    b * t.powf(1.5) / std::f64::consts::PI * sum
}

/// Nonmagnetic limit of the Landau sum, computed as the oracle's continuum
/// integral (1/2π) ∫ dε [2 T^{3/2} I_{1/2}((μ-ε)/T)].
pub fn continuum_pressure_oracle(mu: f64, t: f64) -> f64 {
    let upper = mu + 45.0 * t;
    let f = |eps: f64| 2.0 * t.powf(1.5) * fermi_oracle(0.5, (mu - eps) / t);
    simpson(&f, 0.0, upper.max(1.0), 1e-11) / (2.0 * std::f64::consts::PI)
}

/// SplitMix64, reimplemented here so test sampling never depends on
/// library internals.
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed }
    }

    pub fn next_f64(&mut self) -> f64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Distance between two floats in units in the last place of the larger.
pub fn ulp_distance(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    let ulp = if scale > 0.0 {
        f64::from_bits(scale.to_bits() + 1) - scale
    } else {
        f64::MIN_POSITIVE
    };
    (a - b).abs() / ulp
}
