//! Internal numerical toolbox: adaptive quadrature, Chebyshev approximation,
//! special-function constants, truncated power sums, and a small deterministic
//! generator for the self-test battery.

pub(crate) mod chebyshev;
pub(crate) mod powersum;
pub(crate) mod quad;
pub(crate) mod rng;
pub(crate) mod special;

/// Distance between two floats in units in the last place of the larger one.
pub(crate) fn ulp_distance(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    let ulp = if scale > 0.0 {
        let up = f64::from_bits(scale.to_bits() + 1);
        up - scale
    } else {
        f64::MIN_POSITIVE
    };
    (a - b).abs() / ulp
}
