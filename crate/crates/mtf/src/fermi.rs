//! Fermi-Dirac integrals
//!
//! ```text
//!     I_k(x) = ∫₀^∞ y^k / (e^{y-x} + 1) dy ,   k ∈ {-1/2, 1/2, 3/2}
//! ```
//!
//! evaluated to ~1e-11 relative accuracy uniformly over x ∈ [-700, 700].
//!
//! Everything reduces to the family F_s(x) = -Li_s(-e^x), related by
//! I_k = Γ(k+1) F_{k+1} and d/dx F_s = F_{s-1}, so derivatives of any order
//! come for free from lower-order members. Three regimes:
//!
//! * x ≤ -5: the alternating series Σ (-1)^{n+1} e^{nx} / n^s,
//! * -5 < x < 30: Chebyshev interpolants fitted once per process from
//!   adaptive Gauss-Kronrod quadrature of the defining integral (with the
//!   substitution y = t², which removes the y^{-1/2} endpoint singularity),
//! * x ≥ 30: the Sommerfeld asymptotic series
//!   x^s/Γ(s+1) + 2 Σ_m η(2m) x^{s-2m} / Γ(s-2m+1), truncated at its
//!   smallest term (remainder is O(e^{-x})).

use std::sync::OnceLock;

use crate::error::{MtfError, Result};
use crate::numerics::chebyshev::Chebyshev;
use crate::numerics::quad;
use crate::numerics::special::{gamma_half, ETA_EVEN};

/// Supported half-integer orders of `fermi_integral`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermiOrder {
    MinusHalf,
    Half,
    ThreeHalves,
}

impl FermiOrder {
    /// The order as a float.
    pub fn k(self) -> f64 {
        self.two_k() as f64 / 2.0
    }

    pub(crate) fn two_k(self) -> i64 {
        match self {
            FermiOrder::MinusHalf => -1,
            FermiOrder::Half => 1,
            FermiOrder::ThreeHalves => 3,
        }
    }
}

/// I_k(x). Strictly positive and strictly increasing in x.
pub fn fermi_integral(k: FermiOrder, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(MtfError::Domain(format!("fermi argument must be finite, got {x}")));
    }
    Ok(fermi_i(k.two_k(), x))
}

/// d/dx I_k(x) = k I_{k-1}(x), for k ∈ {1/2, 3/2}.
pub fn fermi_integral_prime(k: FermiOrder, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(MtfError::Domain(format!("fermi argument must be finite, got {x}")));
    }
    match k {
        FermiOrder::MinusHalf => Err(MtfError::UnsupportedOrder(
            "derivative of I_{-1/2} reaches below the supported orders".into(),
        )),
        FermiOrder::Half | FermiOrder::ThreeHalves => Ok(fermi_i_deriv(k.two_k(), 1, x)),
    }
}

/// I_k(x) for two_k ∈ {-1, 1, 3}; no validation.
pub(crate) fn fermi_i(two_k: i64, x: f64) -> f64 {
    gamma_half(two_k + 2) * fermi_f(two_k + 2, x)
}

/// m-th x-derivative of I_k: Γ(k+1) F_{k+1-m}(x).
pub(crate) fn fermi_i_deriv(two_k: i64, m: i64, x: f64) -> f64 {
    gamma_half(two_k + 2) * fermi_f(two_k + 2 - 2 * m, x)
}

const X_SERIES: f64 = -5.0;
const X_ASYM: f64 = 30.0;

/// Orders two_s carried by the engine; index = (5 - two_s) / 2.
const TWO_S: [i64; 8] = [5, 3, 1, -1, -3, -5, -7, -9];

fn s_index(two_s: i64) -> usize {
    ((5 - two_s) / 2) as usize
}

/// F_s(x) = -Li_s(-e^x) for half-integer s = two_s / 2.
pub(crate) fn fermi_f(two_s: i64, x: f64) -> f64 {
    debug_assert!(TWO_S.contains(&two_s), "unsupported engine order {two_s}/2");
    if x <= X_SERIES {
        f_series(two_s, x)
    } else if x >= X_ASYM {
        f_asymptotic(two_s, x)
    } else {
        let seg = &tables()[s_index(two_s)];
        if x < 4.0 {
            seg[0].eval(x)
        } else if x < 12.0 {
            seg[1].eval(x)
        } else {
            seg[2].eval(x)
        }
    }
}

fn f_series(two_s: i64, x: f64) -> f64 {
    let s = two_s as f64 / 2.0;
    let p = x.exp();
    if p == 0.0 {
        return 0.0;
    }
    let mut sum = p; // n = 1 term
    let mut pn = p;
    let mut sign = -1.0;
    for n in 2..200_u32 {
        pn *= p;
        if pn == 0.0 {
            break;
        }
        let term = sign * pn / (n as f64).powf(s);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    sum
}

fn f_asymptotic(two_s: i64, x: f64) -> f64 {
    let s = two_s as f64 / 2.0;
    let lead = x.powf(s) / gamma_half(two_s + 2);
    let mut sum = lead;
    let mut prev = f64::INFINITY;
    let scale = lead.abs().max(x.powf(s - 2.0));
    for (m, &eta) in ETA_EVEN.iter().enumerate() {
        let two_m = 2 * (m as i64 + 1);
        let term = 2.0 * eta * x.powf(s - two_m as f64) / gamma_half(two_s + 2 - 2 * two_m);
        if term.abs() > prev {
            break; // asymptotic tail started growing
        }
        sum += term;
        prev = term.abs();
        if term.abs() <= 1e-17 * scale {
            break;
        }
    }
    sum
}

type Segments = [Chebyshev; 3];

static TABLES: OnceLock<Vec<Segments>> = OnceLock::new();

fn tables() -> &'static Vec<Segments> {
    TABLES.get_or_init(|| TWO_S.iter().map(|&two_s| build_segments(two_s)).collect())
}

fn build_segments(two_s: i64) -> Segments {
    let cuts = [X_SERIES, 4.0, 12.0, X_ASYM];
    let fit = |a: f64, b: f64| Chebyshev::fit(|x| f_quadrature(two_s, x), a, b, 96, 1e-15);
    [fit(cuts[0], cuts[1]), fit(cuts[1], cuts[2]), fit(cuts[2], cuts[3])]
}

/// Reference evaluation by adaptive quadrature; only used to seed the tables.
///
/// For s ≥ 1/2:  F_s(x) = (2/Γ(s)) ∫₀^∞ t^{2s-1} σ(t²-x) dt with σ the Fermi
/// factor. For lower s, differentiate under the integral: each x-derivative
/// multiplies the integrand by a polynomial in σ generated by
/// D(σ^j) = j (σ^j - σ^{j+1}).
fn f_quadrature(two_s: i64, x: f64) -> f64 {
    let t_max = (x.max(0.0) + 60.0).sqrt();
    let (base_two_s, m) = if two_s >= 1 { (two_s, 0usize) } else { (1, ((1 - two_s) / 2) as usize) };
    let power = base_two_s - 1; // t^{2s-1}, here an even non-negative power
    let poly = sigma_derivative_poly(m);
    let integrand = |t: f64| {
        let v = t * t - x;
        let sigma = if v > 40.0 { (-v).exp() } else { 1.0 / (v.exp() + 1.0) };
        let mut kernel = 0.0;
        for &c in poly.iter().rev() {
            kernel = kernel * sigma + c;
        }
        t.powi(power as i32) * kernel
    };
    let norm = 2.0 / gamma_half(base_two_s);
    norm * quad::adaptive(&integrand, 0.0, t_max, 2e-13, 1e-280)
}

/// Coefficients (in powers of σ) of d^m/dx^m σ(t²-x).
fn sigma_derivative_poly(m: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0, 1.0]; // σ
    for _ in 0..m {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                // D(σ^j) = j σ^j - j σ^{j+1}
                next[j] += c * j as f64;
                next[j + 1] -= c * j as f64;
            }
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // I_k(0) = Γ(k+1) η(k+1); values computed with 40-digit arithmetic.
    const I_MHALF_0: f64 = 1.072_154_929_940_191_3;
    const I_HALF_0: f64 = 0.678_093_895_153_101;
    const I_3HALF_0: f64 = 1.152_803_837_088_361_3;

    #[test]
    fn anchors_at_zero() {
        assert_relative_eq!(fermi_integral(FermiOrder::MinusHalf, 0.0).unwrap(), I_MHALF_0, max_relative = 1e-12);
        assert_relative_eq!(fermi_integral(FermiOrder::Half, 0.0).unwrap(), I_HALF_0, max_relative = 1e-12);
        assert_relative_eq!(fermi_integral(FermiOrder::ThreeHalves, 0.0).unwrap(), I_3HALF_0, max_relative = 1e-12);
    }

    #[test]
    fn high_precision_reference_values() {
        // frozen from 40-digit quadrature of the defining integral
        let cases: [(i64, f64, f64); 12] = [
            (-1, -5.0, 0.011_886_110_954_227_804),
            (-1, 1.0, 1.820_411_357_146_962_7),
            (-1, 12.0, 6.907_728_085_687_976),
            (-1, 100.0, 19.999_177_177_245_056),
            (1, -1.0, 0.290_500_896_169_917_53),
            (1, 5.0, 7.837_976_057_293_097),
            (1, 30.0, 109.694_818_337_266_5),
            (1, 700.0, 12_346.870_538_021_43),
            (3, -30.0, 1.243_946_614_983_18e-13),
            (3, 1.0, 2.661_682_624_732_004_2),
            (3, 12.0, 208.061_958_682_070_72),
            (3, 400.0, 1_280_049.347_933_219),
        ];
        for (two_k, x, expect) in cases {
            let got = fermi_i(two_k, x);
            assert_relative_eq!(got, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn branch_seams_are_continuous() {
        // compare the two evaluation routes meeting at each seam, at the seam
        // point itself; the slack floor absorbs the O(e^{-x}) remainder of the
        // asymptotic branch, which is negligible against the dominant I-scale
        for two_s in TWO_S {
            let check = |lhs: f64, rhs: f64, x: f64, what: &str| {
                let scale = lhs.abs().max(rhs.abs());
                let tol = 5e-11 * scale + 1e-12 * fermi_f(3, x).abs() + 1e-13;
                assert!(
                    (lhs - rhs).abs() < tol,
                    "two_s={two_s} {what} at x={x}: {lhs} vs {rhs}"
                );
            };
            check(f_series(two_s, X_SERIES), f_quadrature(two_s, X_SERIES), X_SERIES, "series/quad");
            check(f_asymptotic(two_s, X_ASYM), f_quadrature(two_s, X_ASYM), X_ASYM, "asym/quad");
            for seam in [4.0, 12.0] {
                check(fermi_f(two_s, seam - 1e-12), f_quadrature(two_s, seam), seam, "cheby/quad");
                check(fermi_f(two_s, seam + 1e-12), f_quadrature(two_s, seam), seam, "cheby/quad");
            }
        }
    }

    #[test]
    fn deep_nondegenerate_tail_underflows_safely() {
        let v = fermi_integral(FermiOrder::Half, -700.0).unwrap();
        assert!(v > 0.0 && v < 1e-300);
        let w = fermi_integral(FermiOrder::Half, -800.0).unwrap();
        assert!(w >= 0.0); // silently underflows to zero, no NaN
    }

    #[test]
    fn nondegenerate_limit_ratio() {
        for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
            let x = -30.0;
            let ratio = fermi_integral(k, x).unwrap() / (gamma_half(k.two_k() + 2) * x.exp());
            assert!((0.999..=1.001).contains(&ratio), "k={:?} ratio={ratio}", k);
        }
    }

    #[test]
    fn degenerate_limit_ratio() {
        for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
            let x: f64 = 400.0;
            let kk = k.k();
            let ratio = fermi_integral(k, x).unwrap() / (x.powf(kk + 1.0) / (kk + 1.0));
            assert!((0.99..=1.01).contains(&ratio), "k={:?} ratio={ratio}", k);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for k in [FermiOrder::Half, FermiOrder::ThreeHalves] {
            for x in [-20.0_f64, -1.0, 0.0, 1.0, 20.0, 100.0] {
                let h = 1e-5 * (1.0 + x.abs());
                let fd = (fermi_integral(k, x + h).unwrap() - fermi_integral(k, x - h).unwrap()) / (2.0 * h);
                let an = fermi_integral_prime(k, x).unwrap();
                let denom = an.abs().max(1.0);
                assert!(((an - fd) / denom).abs() < 1e-6, "k={:?} x={x}: {an} vs {fd}", k);
            }
        }
    }

    #[test]
    fn prime_nondegenerate_anchor() {
        // I'_{3/2}(-50) ≈ (3/2) Γ(3/2) e^{-50}
        let got = fermi_integral_prime(FermiOrder::ThreeHalves, -50.0).unwrap();
        let want = 1.5 * gamma_half(3) * (-50.0_f64).exp();
        assert_relative_eq!(got, want, max_relative = 1e-10);
    }

    #[test]
    fn prime_identity_against_lower_order() {
        // I'_k = k I_{k-1}
        for x in [-3.0, 0.0, 7.5, 50.0] {
            let lhs = fermi_integral_prime(FermiOrder::Half, x).unwrap();
            let rhs = 0.5 * fermi_integral(FermiOrder::MinusHalf, x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            let lhs = fermi_integral_prime(FermiOrder::ThreeHalves, x).unwrap();
            let rhs = 1.5 * fermi_integral(FermiOrder::Half, x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(fermi_integral(FermiOrder::Half, f64::NAN), Err(MtfError::Domain(_))));
        assert!(matches!(fermi_integral(FermiOrder::Half, f64::INFINITY), Err(MtfError::Domain(_))));
        assert!(matches!(
            fermi_integral_prime(FermiOrder::MinusHalf, 0.0),
            Err(MtfError::UnsupportedOrder(_))
        ));
    }

    #[test]
    fn monotone_and_convex_on_grid() {
        for k in [FermiOrder::MinusHalf, FermiOrder::Half, FermiOrder::ThreeHalves] {
            let xs: Vec<f64> = (0..200).map(|i| -40.0 + 80.0 * i as f64 / 199.0).collect();
            let vs: Vec<f64> = xs.iter().map(|&x| fermi_integral(k, x).unwrap()).collect();
            for w in vs.windows(2) {
                assert!(w[1] > w[0]);
            }
            if k != FermiOrder::MinusHalf {
                for w in vs.windows(3) {
                    assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12 * w[2].abs());
                }
            }
        }
    }

    #[test]
    fn engine_derivative_chain_is_consistent() {
        // F_{s-1} must be the derivative of F_s for every adjacent engine pair.
        for pair in TWO_S.windows(2) {
            let (hi, lo) = (pair[0], pair[1]);
            for x in [-8.0_f64, -2.0, 1.0, 8.0, 20.0, 45.0] {
                let h = 1e-5 * (1.0 + x.abs());
                let fd = (fermi_f(hi, x + h) - fermi_f(hi, x - h)) / (2.0 * h);
                let an = fermi_f(lo, x);
                let denom = an.abs().max(fermi_f(hi, x).abs()).max(1e-12);
                assert!(
                    ((an - fd) / denom).abs() < 2e-5,
                    "two_s {hi}->{lo} at x={x}: {an} vs {fd}"
                );
            }
        }
    }
}
