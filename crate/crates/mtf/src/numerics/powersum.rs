//! Truncated power sums Σ_{j=0}^{n-1} (q + j)^p in O(1) via the asymptotic
//! expansion of the Hurwitz zeta function. These are the backbone of the
//! zero-temperature Landau-level sums, where the level count can reach 10^6
//! or more and term-by-term summation is not an option.

use super::special::BERNOULLI_EVEN;

/// Hurwitz zeta ζ(s, q) for real s ≠ 1 and q > 0, by shifting q past 16 and
/// applying the large-q expansion
/// ζ(s,q) ≈ q^{1-s}/(s-1) + q^{-s}/2 + Σ_m B_{2m}/(2m)! (s)_{2m-1} q^{-s-2m+1}.
pub(crate) fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0 && s != 1.0);
    let mut shift = 0.0;
    let mut q = q;
    while q < 16.0 {
        shift += q.powf(-s);
        q += 1.0;
    }
    let mut z = q.powf(1.0 - s) / (s - 1.0) + 0.5 * q.powf(-s);
    // rising factorial (s)_{2m-1} built incrementally
    let mut poch = s; // (s)_1
    let mut fact = 2.0; // (2m)!
    let mut qpow = q.powf(-s - 1.0);
    let q2 = 1.0 / (q * q);
    for (m, &b2m) in BERNOULLI_EVEN.iter().enumerate() {
        z += b2m / fact * poch * qpow;
        // advance to (s)_{2m+1} and (2m+2)!
        let k = 2 * (m + 1);
        poch *= (s + k as f64 - 1.0) * (s + k as f64);
        fact *= (k + 1) as f64 * (k + 2) as f64;
        qpow *= q2;
    }
    z + shift
}

/// Σ_{j=0}^{count-1} (q0 + j)^p for p > -1, q0 ≥ 0 (a q0 of exactly zero with
/// p > 0 contributes nothing from the first term).
pub(crate) fn sum_power_range(p: f64, q0: f64, count: u64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    if count <= 64 {
        let mut s = 0.0;
        for j in 0..count {
            let base = q0 + j as f64;
            if base > 0.0 {
                s += base.powf(p);
            }
        }
        return s;
    }
    // peel the first terms so both zeta arguments are comfortably positive
    let mut head = 0.0;
    let mut q = q0;
    let mut n = count;
    for _ in 0..16 {
        if q > 0.0 {
            head += q.powf(p);
        }
        q += 1.0;
        n -= 1;
    }
    head + hurwitz_zeta(-p, q) - hurwitz_zeta(-p, q + n as f64)
}

#[cfg(test)]
mod tests {
    use super::{hurwitz_zeta, sum_power_range};

    #[test]
    fn matches_direct_summation() {
        for &p in &[1.5, 0.5, -0.5, -2.5] {
            for &q0 in &[0.0, 0.37, 1.0] {
                for &count in &[65_u64, 300, 5000] {
                    if q0 == 0.0 && p < 0.0 {
                        continue;
                    }
                    let mut direct = 0.0;
                    for j in 0..count {
                        let b = q0 + j as f64;
                        if b > 0.0 {
                            direct += b.powf(p);
                        }
                    }
                    let fast = sum_power_range(p, q0, count);
                    assert!(
                        (fast - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                        "p={p} q0={q0} n={count}: {fast} vs {direct}"
                    );
                }
            }
        }
    }

    #[test]
    fn zeta_at_known_point() {
        // ζ(2, 1) = π²/6
        let v = hurwitz_zeta(2.0, 1.0);
        assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
        // ζ(-1, 1) = -1/12
        let v = hurwitz_zeta(-1.0, 1.0);
        assert!((v + 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn large_count_is_consistent_under_split() {
        // Σ_{0}^{n-1} = Σ_{0}^{k-1} + Σ over the remainder starting at q0+k
        let p = 1.5;
        let total = sum_power_range(p, 0.25, 2_000_000);
        let a = sum_power_range(p, 0.25, 700_000);
        let b = sum_power_range(p, 0.25 + 700_000.0, 1_300_000);
        assert!((total - (a + b)).abs() < 1e-9 * total);
    }
}
