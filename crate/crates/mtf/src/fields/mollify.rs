//! Radial mollification v ↦ v ∗ j_r with a smooth compactly supported kernel.

use std::sync::Arc;

use crate::error::{MtfError, Result};
use crate::numerics::chebyshev::Chebyshev;
use crate::numerics::quad;

use super::{PotentialField, RadialGrid};

/// Smoothing kernel j_r(x) = r⁻³ j(x/r) built from the bump profile
/// j(y) ∝ exp(-1/(1-|y|²)) on |y| < 1, unit mass. The discrete convolution
/// weights are renormalized per target node so constants are preserved
/// exactly.
pub struct Mollifier {
    scale: f64,
    /// smooth fit of Y(η) = ∫₀^η y ĵ(y) dy, ĵ the unit-mass profile
    ring: Chebyshev,
    ring_total: f64,
}

fn bump(y: f64) -> f64 {
    if y.abs() < 1.0 {
        (-1.0 / (1.0 - y * y)).exp()
    } else {
        0.0
    }
}

impl Mollifier {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(MtfError::Domain(format!("mollifier scale must be > 0, got {scale}")));
        }
        let mass = 4.0 * std::f64::consts::PI
            * quad::adaptive(&|y: f64| bump(y) * y * y, 0.0, 1.0, 1e-13, 1e-300);
        let norm = 1.0 / mass;
        let ring = Chebyshev::fit(
            |eta| quad::adaptive(&|y: f64| norm * bump(y) * y, 0.0, eta, 1e-13, 1e-300),
            0.0,
            1.0,
            96,
            1e-15,
        );
        let ring_total = ring.eval(1.0);
        Ok(Mollifier { scale, ring, ring_total })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// J(u) = ∫₀^u t j_r(t) dt = Y(u/r) / r, saturating past the support.
    fn ring_cumulant(&self, u: f64) -> f64 {
        let eta = u / self.scale;
        let y = if eta >= 1.0 {
            self.ring_total
        } else if eta <= 0.0 {
            0.0
        } else {
            self.ring.eval(eta)
        };
        y / self.scale
    }
}

/// Convolve a potential with the mollifier. For radial functions
///
/// ```text
///   (v ∗ j_r)(x) = (2π/|x|) ∫ s v(s) [J(min(|x|+s, r)) - J(||x|-s|)] ds
/// ```
///
/// with J the ring cumulant of the kernel. Weights are normalized per node
/// (the same integral with v ≡ 1), so constants pass through unchanged.
pub fn mollify(v: &PotentialField, m: &Mollifier) -> Result<PotentialField> {
    let grid: &Arc<RadialGrid> = v.grid();
    if m.scale >= grid.r_max() {
        return Err(MtfError::Domain(format!(
            "mollifier scale {} exceeds the grid extent {}",
            m.scale,
            grid.r_max()
        )));
    }
    let vals = v.values();
    let nodes = grid.nodes();
    let mut out = Vec::with_capacity(grid.len());
    let mut brk: Vec<f64> = Vec::new();
    for &r in nodes {
        let lo = (r - m.scale).max(0.0);
        let hi = r + m.scale;
        // panel breakpoints: the window ends, every grid node inside (the
        // sampled field has curvature kinks there), and the kernel's own
        // kink locations
        brk.clear();
        brk.push(lo);
        let from = nodes.partition_point(|&x| x <= lo);
        // keep the node breakpoints, but never let panels get finer than a
        // small fraction of the window; near the origin a log grid packs
        // thousands of nodes into the window while carrying negligible mass
        let min_width = (hi - lo) / 96.0;
        for &x in &nodes[from..] {
            if x >= hi {
                break;
            }
            if x - brk.last().unwrap() >= min_width {
                brk.push(x);
            }
        }
        for cand in [r, m.scale - r] {
            if cand > lo && cand < hi {
                brk.push(cand);
            }
        }
        brk.push(hi);
        brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let kernel = |s: f64| s * (m.ring_cumulant(hi.min(s + r)) - m.ring_cumulant((r - s).abs()));
        let mut num = 0.0;
        let mut den = 0.0;
        for pair in brk.windows(2) {
            if pair[1] <= pair[0] {
                continue;
            }
            num += quad::gk15_panel(&|s: f64| grid.interpolate(vals, s) * kernel(s), pair[0], pair[1]);
            den += quad::gk15_panel(&kernel, pair[0], pair[1]);
        }
        out.push(num / den);
    }
    PotentialField::new(Arc::clone(grid), out)
}
