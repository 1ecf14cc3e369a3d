//! Adaptive Gauss-Kronrod (G7, K15) quadrature on finite intervals.

/// 15-point Kronrod abscissae on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// 7-point Gauss weights (for the embedded error estimate).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One non-adaptive K15 panel; for integrands known to be smooth on [a, b].
pub(crate) fn gk15_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    gk15(f, a, b).0
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(c);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(c - dx) + f(c + dx);
        res_k += WGK[j] * fsum;
        if j % 2 == 1 {
            res_g += WG[j / 2] * fsum;
        }
    }
    let err = ((res_k - res_g) * half).abs();
    (res_k * half, err)
}

/// Integrate `f` over [a, b] to the requested tolerances by bisection of the
/// worst subinterval. Starts from several panels so a deceptively smooth
/// single-panel error estimate cannot end the refinement prematurely.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut segs: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let mut total = 0.0;
    let mut total_err = 0.0;
    const INITIAL: usize = 8;
    for i in 0..INITIAL {
        let sa = a + (b - a) * i as f64 / INITIAL as f64;
        let sb = a + (b - a) * (i + 1) as f64 / INITIAL as f64;
        let (v, e) = gk15(f, sa, sb);
        segs.push((e, sa, sb, v));
        total += v;
        total_err += e;
    }
    let mut prev_err = f64::INFINITY;
    let mut stagnant = 0;
    for _ in 0..800 {
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        if total_err >= prev_err {
            stagnant += 1;
            if stagnant > 40 {
                break; // machine-precision plateau
            }
        } else {
            stagnant = 0;
        }
        prev_err = total_err;
        // split the segment with the largest error estimate
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            if s.0 > segs[worst].0 {
                worst = i;
            }
        }
        let (err, sa, sb, sv) = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // interval exhausted at machine precision
            segs.push((0.0, sa, sb, sv));
            total_err -= err;
            continue;
        }
        let (v1, e1) = gk15(f, sa, mid);
        let (v2, e2) = gk15(f, mid, sb);
        total += v1 + v2 - sv;
        total_err += e1 + e2 - err;
        segs.push((e1, sa, mid, v1));
        segs.push((e2, mid, sb, v2));
    }
    total
}
