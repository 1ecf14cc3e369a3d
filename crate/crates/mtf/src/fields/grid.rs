//! Radial grids with quadrature weights for ∫₀^∞ f(r) 4πr² dr.
//!
//! Grid functions are treated as piecewise linear in ln r. On each interval
//! the moments of e^{px} dx (p = 3 for s² ds, p = 2 for s ds) against the two
//! linear hat functions have closed forms, so constants integrate exactly:
//! the quadrature of 1 over a truncated ball is 4πR³/3 to machine precision
//! regardless of node placement. The stretch [0, r_0] is assigned to the
//! first node with the exact ball volume, so the origin itself never carries
//! a sample.

use crate::error::{MtfError, Result};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Per-interval moment pair: ∫ f e^{px} dx = f_left * a + f_right * b.
fn moment_pair(p: f64, h: f64) -> (f64, f64) {
    debug_assert!(h > 0.0);
    let ph = p * h;
    if ph < 0.01 {
        // series in h, stable where the closed form cancels
        let a = h * (0.5 + ph * (1.0 / 6.0 + ph * (1.0 / 24.0 + ph / 120.0)));
        let b = h * (0.5 + ph * (1.0 / 3.0 + ph * (0.125 + ph / 30.0)));
        (a, b)
    } else {
        let e = ph.exp();
        let a = (e - ph - 1.0) / (h * p * p);
        let b = (e * (ph - 1.0) + 1.0) / (h * p * p);
        (a, b)
    }
}

#[derive(Debug)]
pub struct RadialGrid {
    r: Vec<f64>,
    /// volume quadrature weights (include the 4πr² measure)
    w: Vec<f64>,
    /// interval moments of s² ds against the left/right hat
    m3: Vec<(f64, f64)>,
    /// interval moments of s ds against the left/right hat
    m2: Vec<(f64, f64)>,
}

impl RadialGrid {
    /// Logarithmically spaced nodes on [r_min, r_max].
    pub fn log_spaced(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(MtfError::Domain(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 4 {
            return Err(MtfError::Domain(format!("grid needs at least 4 nodes, got {n}")));
        }
        let (la, lb) = (r_min.ln(), r_max.ln());
        let nodes = (0..n)
            .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
            .collect();
        Self::from_nodes(nodes)
    }

    /// Log-spaced nodes with extra nodes merged in (useful to resolve a
    /// density edge or to sample a specific radius exactly).
    pub fn log_spaced_with(r_min: f64, r_max: f64, n: usize, extra: &[f64]) -> Result<Self> {
        let base = Self::log_spaced(r_min, r_max, n)?;
        let mut nodes = base.r;
        for &x in extra {
            if !(x > 0.0) || !x.is_finite() {
                return Err(MtfError::Domain(format!("extra node must be positive, got {x}")));
            }
            nodes.push(x);
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
        Self::from_nodes(nodes)
    }

    /// Build a grid from arbitrary strictly increasing positive nodes.
    pub fn from_nodes(r: Vec<f64>) -> Result<Self> {
        if r.len() < 4 {
            return Err(MtfError::Domain(format!("grid needs at least 4 nodes, got {}", r.len())));
        }
        if !(r[0] > 0.0) {
            return Err(MtfError::Domain("first node must be strictly positive".into()));
        }
        for pair in r.windows(2) {
            if !(pair[1] > pair[0]) || !pair[1].is_finite() {
                return Err(MtfError::Domain("nodes must be strictly increasing and finite".into()));
            }
        }
        let n = r.len();
        let mut m3 = Vec::with_capacity(n - 1);
        let mut m2 = Vec::with_capacity(n - 1);
        let mut w = vec![0.0; n];
        // the ball [0, r_0], where the integrand is taken constant
        w[0] = FOUR_PI * r[0].powi(3) / 3.0;
        for i in 0..n - 1 {
            let h = (r[i + 1] / r[i]).ln();
            let (a3, b3) = moment_pair(3.0, h);
            let (a2, b2) = moment_pair(2.0, h);
            let c3 = (r[i].powi(3) * a3, r[i].powi(3) * b3);
            let c2 = (r[i].powi(2) * a2, r[i].powi(2) * b2);
            w[i] += FOUR_PI * c3.0;
            w[i + 1] += FOUR_PI * c3.1;
            m3.push(c3);
            m2.push(c2);
        }
        Ok(RadialGrid { r, w, m3, m2 })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn r_min(&self) -> f64 {
        self.r[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// ∫ f 4πr² dr over the whole grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.r.len());
        self.w.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// ∫ f 4πr² dr over the ball of radius `radius` (partial last interval
    /// handled with the same exact moments).
    pub fn integrate_ball(&self, values: &[f64], radius: f64) -> f64 {
        debug_assert_eq!(values.len(), self.r.len());
        if radius >= self.r_max() {
            return self.integrate(values);
        }
        let mut total = values[0] * FOUR_PI * self.r[0].powi(3) / 3.0;
        if radius <= self.r[0] {
            return values[0] * FOUR_PI * radius.powi(3) / 3.0;
        }
        for i in 0..self.r.len() - 1 {
            if self.r[i + 1] <= radius {
                total += FOUR_PI * (values[i] * self.m3[i].0 + values[i + 1] * self.m3[i].1);
            } else {
                // partial interval [r_i, radius]
                let h_full = (self.r[i + 1] / self.r[i]).ln();
                let h = (radius / self.r[i]).ln();
                if h > 0.0 {
                    let frac = h / h_full;
                    let f_end = values[i] + (values[i + 1] - values[i]) * frac;
                    let (a3, b3) = moment_pair(3.0, h);
                    total += FOUR_PI * self.r[i].powi(3) * (values[i] * a3 + f_end * b3);
                }
                break;
            }
        }
        total
    }

    /// Running integrals M_in[j] = ∫₀^{r_j} f s² ds (no 4π).
    pub fn cumulative_inner(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.r.len());
        let mut out = Vec::with_capacity(self.r.len());
        let mut acc = values[0] * self.r[0].powi(3) / 3.0;
        out.push(acc);
        for i in 0..self.r.len() - 1 {
            acc += values[i] * self.m3[i].0 + values[i + 1] * self.m3[i].1;
            out.push(acc);
        }
        out
    }

    /// Tail integrals M_out[j] = ∫_{r_j}^{r_max} f s ds (no 4π).
    pub fn cumulative_outer(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.r.len());
        let n = self.r.len();
        let mut out = vec![0.0; n];
        let mut acc = 0.0;
        for i in (0..n - 1).rev() {
            acc += values[i] * self.m2[i].0 + values[i + 1] * self.m2[i].1;
            out[i] = acc;
        }
        out
    }

    /// Linear-in-log-r interpolation of a grid function, clamped at the ends.
    pub fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        debug_assert_eq!(values.len(), self.r.len());
        if r <= self.r[0] {
            return values[0];
        }
        if r >= self.r_max() {
            return *values.last().unwrap();
        }
        let i = match self.r.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => return values[i],
            Err(i) => i - 1,
        };
        let t = (r / self.r[i]).ln() / (self.r[i + 1] / self.r[i]).ln();
        values[i] + (values[i + 1] - values[i]) * t
    }
}
