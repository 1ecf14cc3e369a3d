//! Special-function constants: Γ at half-integer arguments, Dirichlet η values,
//! Bernoulli numbers.

/// Γ(two_a / 2) for odd `two_a` (positive or negative half-integers) and
/// Γ(n) for even `two_a = 2n > 0`.
pub(crate) fn gamma_half(two_a: i64) -> f64 {
    const SQRT_PI: f64 = 1.772_453_850_905_516;
    if two_a % 2 == 0 {
        let n = two_a / 2;
        assert!(n > 0, "gamma pole at non-positive integer");
        let mut g = 1.0;
        for k in 2..n {
            g *= k as f64;
        }
        return g;
    }
    // Γ(1/2) = √π, climb up or down with Γ(z+1) = zΓ(z)
    let mut g = SQRT_PI;
    let mut t = 1; // current two_a
    while t < two_a {
        g *= t as f64 / 2.0;
        t += 2;
    }
    while t > two_a {
        t -= 2;
        g /= t as f64 / 2.0;
    }
    g
}

/// η(2m) = (1 − 2^{1−2m}) ζ(2m) for m = 1..=13, index m-1.
pub(crate) const ETA_EVEN: [f64; 13] = [
    0.822_467_033_424_113_2,
    0.947_032_829_497_245_9,
    0.985_551_091_297_435_1,
    0.996_233_001_852_647_8,
    0.999_039_507_598_271_5,
    0.999_757_685_143_858_2,
    0.999_939_170_345_979_7,
    0.999_984_764_214_906_1,
    0.999_996_187_869_610_1,
    0.999_999_046_611_581_6,
    0.999_999_761_613_230_8,
    0.999_999_940_398_892_4,
    0.999_999_985_099_232,
];

/// Bernoulli numbers B_{2m} for m = 1..=8, index m-1.
pub(crate) const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];
