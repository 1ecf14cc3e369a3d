//! Discretized radial densities and potentials: Coulomb convolution,
//! Hartree energy, external potential assembly, mollification, L^p norms.

mod grid;
mod mollify;

pub use grid::RadialGrid;
pub use mollify::{mollify, Mollifier};

use std::io::Write;
use std::sync::Arc;

use crate::error::{MtfError, Result};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Confining potential W(r) = amplitude · r^exponent. Any polynomial growth
/// keeps e^{-W/T} integrable; the harmonic default follows the reference
/// setup used throughout.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Confinement {
    pub amplitude: f64,
    pub exponent: f64,
}

impl Confinement {
    pub fn new(amplitude: f64, exponent: f64) -> Result<Self> {
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(MtfError::Domain(format!("confinement amplitude must be > 0, got {amplitude}")));
        }
        if !(exponent >= 1.0) || !exponent.is_finite() {
            return Err(MtfError::Domain(format!("confinement exponent must be ≥ 1, got {exponent}")));
        }
        Ok(Confinement { amplitude, exponent })
    }

    pub fn harmonic() -> Self {
        Confinement { amplitude: 1.0, exponent: 2.0 }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.amplitude * r.powf(self.exponent)
    }

    /// Radius at which W(r) reaches the given height.
    pub fn radius_at(&self, height: f64) -> f64 {
        (height.max(0.0) / self.amplitude).powf(1.0 / self.exponent)
    }
}

impl Default for Confinement {
    fn default() -> Self {
        Confinement::harmonic()
    }
}

macro_rules! field_common {
    ($t:ident) => {
        impl $t {
            pub fn grid(&self) -> &Arc<RadialGrid> {
                &self.grid
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            /// Snapshot as CSV with columns `r,value`.
            pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
                writeln!(out, "r,value")?;
                for (r, v) in self.grid.nodes().iter().zip(&self.values) {
                    writeln!(out, "{:e},{:e}", r, v)?;
                }
                Ok(())
            }
        }
    };
}

/// Nonnegative electron density on a radial grid.
#[derive(Debug, Clone)]
pub struct DensityField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

field_common!(DensityField);

impl DensityField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(MtfError::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(MtfError::Invariant("density values must be finite and ≥ 0".into()));
        }
        Ok(DensityField { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: Arc<RadialGrid>) -> Self {
        let values = vec![0.0; grid.len()];
        DensityField { grid, values }
    }

    /// Total particle number ∫ρ 4πr² dr.
    pub fn particle_number(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Uniform ball of total charge `q` and radius `radius` (the grid should
    /// carry nodes close to the edge if a sharp profile matters).
    pub fn uniform_ball(grid: Arc<RadialGrid>, q: f64, radius: f64) -> Result<Self> {
        let rho = q / (FOUR_PI / 3.0 * radius.powi(3));
        Self::from_fn(grid, |r| if r <= radius { rho } else { 0.0 })
    }
}

/// Potential samples on a radial grid (finite at every node; the Coulomb
/// singularity lives at r = 0, which is never a node).
#[derive(Debug, Clone)]
pub struct PotentialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

field_common!(PotentialField);

impl PotentialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(MtfError::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MtfError::Invariant("potential values must be finite".into()));
        }
        Ok(PotentialField { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }
}

fn same_grid(a: &Arc<RadialGrid>, b: &Arc<RadialGrid>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        Ok(())
    } else {
        Err(MtfError::GridMismatch)
    }
}

/// Coulomb potential v_ρ = ρ ∗ |x|⁻¹ of a radial density:
///
/// ```text
///   v(r) = 4π [ (1/r) ∫₀^r ρ(s) s² ds + ∫_r^∞ ρ(s) s ds ]
/// ```
pub fn coulomb_potential(rho: &DensityField) -> PotentialField {
    let g = rho.grid();
    let inner = g.cumulative_inner(rho.values());
    let outer = g.cumulative_outer(rho.values());
    let values = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| FOUR_PI * (inner[i] / r + outer[i]))
        .collect();
    PotentialField { grid: Arc::clone(g), values }
}

/// Hartree self-energy D(ρ, ρ) = ½ ∫ ρ v_ρ ≥ 0.
pub fn hartree_energy(rho: &DensityField) -> f64 {
    let v = coulomb_potential(rho);
    let prod: Vec<f64> = rho.values().iter().zip(v.values()).map(|(a, b)| a * b).collect();
    0.5 * rho.grid().integrate(&prod)
}

/// Symmetric bilinear extension D(ρ₁, ρ₂); D(ρ, ρ) equals [`hartree_energy`].
pub fn hartree_cross(rho1: &DensityField, rho2: &DensityField) -> Result<f64> {
    same_grid(rho1.grid(), rho2.grid())?;
    let g = rho1.grid();
    let v1 = coulomb_potential(rho1);
    let v2 = coulomb_potential(rho2);
    let p12: Vec<f64> = rho1.values().iter().zip(v2.values()).map(|(a, b)| a * b).collect();
    let p21: Vec<f64> = rho2.values().iter().zip(v1.values()).map(|(a, b)| a * b).collect();
    Ok(0.25 * (g.integrate(&p12) + g.integrate(&p21)))
}

/// Unscaled external potential of a single nucleus at the origin plus
/// confinement: V(r) = -Z z₁ / r + Z ℓ⁻¹ W(ℓ⁻¹ r).
pub fn external_potential(
    big_z: f64,
    z1: f64,
    ell: f64,
    w: &Confinement,
    grid: &Arc<RadialGrid>,
) -> Result<PotentialField> {
    if !(big_z > 0.0) {
        return Err(MtfError::Domain(format!("Z must be > 0, got {big_z}")));
    }
    if !(z1 > 0.0 && z1 <= 1.0) {
        return Err(MtfError::Domain(format!("charge fraction must lie in (0, 1], got {z1}")));
    }
    if !(ell > 0.0) {
        return Err(MtfError::Domain(format!("length scale must be > 0, got {ell}")));
    }
    PotentialField::from_fn(Arc::clone(grid), |r| {
        -big_z * z1 / r + big_z / ell * w.eval(r / ell)
    })
}

/// Scaled external potential -z Φ_C + W with Φ_C(r) = 1/r.
pub fn scaled_external_potential(z1: f64, w: &Confinement, grid: &Arc<RadialGrid>) -> Result<PotentialField> {
    if !(0.0..=1.0).contains(&z1) {
        return Err(MtfError::Domain(format!("charge fraction must lie in [0, 1], got {z1}")));
    }
    PotentialField::from_fn(Arc::clone(grid), |r| -z1 / r + w.eval(r))
}

/// Integration region for norms.
#[derive(Debug, Clone, Copy)]
pub enum Region {
    /// The whole grid.
    All,
    /// Ball of the given radius.
    Ball(f64),
}

/// L^p norm (∫ |f|^p 4πr² dr)^{1/p} over the region.
pub fn lp_norm(grid: &RadialGrid, values: &[f64], p: f64, region: Region) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(MtfError::Domain(format!("exponent must be ≥ 1, got {p}")));
    }
    let powed: Vec<f64> = values.iter().map(|v| v.abs().powf(p)).collect();
    let integral = match region {
        Region::All => grid.integrate(&powed),
        Region::Ball(radius) => {
            if !(radius > 0.0) {
                return Err(MtfError::Domain(format!("ball radius must be > 0, got {radius}")));
            }
            grid.integrate_ball(&powed, radius)
        }
    };
    Ok(integral.powf(1.0 / p))
}

/// Empirical upper bound for ‖v_ρ‖₆² / D(ρ,ρ) over the reference density
/// family (largest observed ratio times a safety factor of 2, frozen).
pub const COULOMB_SOBOLEV_RATIO_BOUND: f64 = 23.0;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Grid resolving a unit-ball edge and the probe radii 0.5 and 2.
    fn ball_grid() -> Arc<RadialGrid> {
        Arc::new(
            RadialGrid::log_spaced_with(
                1e-4,
                8.0,
                24_000,
                &[0.5, 1.0 - 1e-9, 1.0 + 1e-9, 2.0],
            )
            .unwrap(),
        )
    }

    fn unit_ball(g: &Arc<RadialGrid>) -> DensityField {
        DensityField::uniform_ball(Arc::clone(g), 1.0, 1.0 - 0.5e-9).unwrap()
    }

    #[test]
    fn uniform_ball_potential_matches_closed_form() {
        let g = ball_grid();
        let rho = unit_ball(&g);
        let v = coulomb_potential(&rho);
        let at = |r: f64| g.interpolate(v.values(), r);
        // exterior: point charge
        assert_relative_eq!(at(2.0), 0.5, max_relative = 1e-8);
        // interior: Q(3R² - r²)/(2R³)
        assert_relative_eq!(at(0.5), 1.375, max_relative = 1e-7);
        // near the origin the potential plateaus at 3/2
        assert_relative_eq!(at(g.r_min()), 1.5, max_relative = 1e-6);
    }

    #[test]
    fn zero_density_gives_zero_potential() {
        let g = ball_grid();
        let v = coulomb_potential(&DensityField::zero(Arc::clone(&g)));
        assert!(v.values().iter().all(|&x| x == 0.0));
        assert_eq!(hartree_energy(&DensityField::zero(Arc::clone(&g))), 0.0);
    }

    #[test]
    fn hartree_energy_of_unit_ball() {
        let g = ball_grid();
        let d = hartree_energy(&unit_ball(&g));
        assert_relative_eq!(d, 0.6, max_relative = 1e-6);
    }

    #[test]
    fn newton_exterior_law() {
        // any compactly supported density looks like Q/r beyond its support
        let g = Arc::new(RadialGrid::log_spaced(1e-5, 20.0, 4_000).unwrap());
        let rho = DensityField::from_fn(Arc::clone(&g), |r| {
            if r < 2.0 {
                (1.0 + (3.0 * r).sin().powi(2)) * (-r).exp()
            } else {
                0.0
            }
        })
        .unwrap();
        let q = rho.particle_number();
        let v = coulomb_potential(&rho);
        // probe at grid nodes beyond twice the support radius
        for (i, &r) in g.nodes().iter().enumerate() {
            if r >= 4.0 {
                assert_relative_eq!(v.values()[i] * r, q, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn exterior_potential_is_nonincreasing() {
        let g = ball_grid();
        let v = coulomb_potential(&unit_ball(&g));
        let start = g.nodes().iter().position(|&r| r > 1.0).unwrap();
        for i in start..g.len() - 1 {
            assert!(v.values()[i + 1] <= v.values()[i] * (1.0 + 1e-14));
        }
    }

    #[test]
    fn bilinearity_is_exact() {
        let g = Arc::new(RadialGrid::log_spaced(1e-4, 10.0, 900).unwrap());
        let r1 = DensityField::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
        let r2 = DensityField::from_fn(Arc::clone(&g), |r| (-(r - 1.5) * (r - 1.5) * 4.0).exp()).unwrap();
        let sum = DensityField::new(
            Arc::clone(&g),
            r1.values().iter().zip(r2.values()).map(|(a, b)| a + b).collect(),
        )
        .unwrap();
        let lhs = hartree_energy(&sum);
        let rhs = hartree_energy(&r1) + 2.0 * hartree_cross(&r1, &r2).unwrap() + hartree_energy(&r2);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        assert!(hartree_cross(&r1, &r2).unwrap() > 0.0);
    }

    #[test]
    fn hartree_scaling_law() {
        // ρ_λ(x) = λ³ρ(λx) has D(ρ_λ) = λ D(ρ)
        let g = Arc::new(RadialGrid::log_spaced(1e-5, 12.0, 3_000).unwrap());
        let profile = |r: f64| (-r * r).exp();
        let rho = DensityField::from_fn(Arc::clone(&g), profile).unwrap();
        let lam = 2.0;
        let g2 = Arc::new(RadialGrid::log_spaced(1e-5 / lam, 12.0 / lam, 3_000).unwrap());
        let rho_l = DensityField::from_fn(Arc::clone(&g2), |r| lam.powi(3) * profile(lam * r)).unwrap();
        assert_relative_eq!(hartree_energy(&rho_l), lam * hartree_energy(&rho), max_relative = 1e-8);
    }

    #[test]
    fn poisson_consistency_second_order() {
        // Δv = -4πρ for the discrete radial Laplacian, second order in mesh
        let err_at = |n: usize| {
            let g = Arc::new(RadialGrid::log_spaced(1e-3, 12.0, n).unwrap());
            let rho = DensityField::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
            let v = coulomb_potential(&rho);
            let (r, vv) = (g.nodes(), v.values());
            let mut worst: f64 = 0.0;
            for i in 1..g.len() - 1 {
                if r[i] < 0.3 || r[i] > 4.0 {
                    continue; // interior window away from the ends
                }
                let (h1, h2) = (r[i] - r[i - 1], r[i + 1] - r[i]);
                let d1 = (vv[i + 1] * h1 * h1 - vv[i - 1] * h2 * h2
                    + vv[i] * (h2 * h2 - h1 * h1))
                    / (h1 * h2 * (h1 + h2));
                let d2 = 2.0 * (vv[i - 1] * h2 + vv[i + 1] * h1 - vv[i] * (h1 + h2))
                    / (h1 * h2 * (h1 + h2));
                let lap = d2 + 2.0 / r[i] * d1;
                worst = worst.max((lap + FOUR_PI * rho.values()[i]).abs());
            }
            worst
        };
        let (e1, e2) = (err_at(1000), err_at(2000));
        assert!(e1 / e2 > 3.0, "laplacian errors {e1:.3e} {e2:.3e}");
    }

    #[test]
    fn lp_norms() {
        let g = ball_grid();
        let ind = DensityField::from_fn(Arc::clone(&g), |r| if r <= 1.0 - 0.5e-9 { 1.0 } else { 0.0 }).unwrap();
        let n1 = lp_norm(&g, ind.values(), 1.0, Region::All).unwrap();
        assert_relative_eq!(n1, FOUR_PI / 3.0, max_relative = 1e-7);
        let zero = DensityField::zero(Arc::clone(&g));
        assert_eq!(lp_norm(&g, zero.values(), 2.0, Region::All).unwrap(), 0.0);
        assert!(lp_norm(&g, ind.values(), 0.5, Region::All).is_err());
        // ball region restriction
        let ones = vec![1.0; g.len()];
        let nb = lp_norm(&g, &ones, 1.0, Region::Ball(2.0)).unwrap();
        assert_relative_eq!(nb, FOUR_PI * 8.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn six_norm_of_ball_potential_is_finite() {
        let g = ball_grid();
        let v = coulomb_potential(&unit_ball(&g));
        let n6 = lp_norm(&g, v.values(), 6.0, Region::All).unwrap();
        assert!(n6.is_finite() && n6 > 0.0);
        let d = hartree_energy(&unit_ball(&g));
        assert!(n6 * n6 / d < COULOMB_SOBOLEV_RATIO_BOUND);
    }

    #[test]
    fn external_potential_shapes() {
        let g = Arc::new(RadialGrid::log_spaced_with(1e-6, 10.0, 2_000, &[1.0]).unwrap());
        // scaled variant: -z/r + W; at r = 1 with W = r² and z = 1 it vanishes
        let v = scaled_external_potential(1.0, &Confinement::harmonic(), &g).unwrap();
        let at1 = g.interpolate(v.values(), 1.0);
        assert!(at1.abs() < 1e-12);
        // Coulomb dominance near the origin: r · (V + Z ℓ⁻¹ W(ℓ⁻¹ r)) → -Z z₁
        let (big_z, z1) = (8.0_f64, 1.0);
        let beta = 1.0_f64;
        let ell = big_z.powf(-1.0 / 3.0) * (1.0 + beta).powf(-0.4);
        let w = Confinement::harmonic();
        let vv = external_potential(big_z, z1, ell, &w, &g).unwrap();
        for (i, &r) in g.nodes().iter().enumerate().take(5) {
            let coul = vv.values()[i] - big_z / ell * w.eval(r / ell);
            assert_relative_eq!(r * coul, -big_z * z1, max_relative = 1e-10);
        }
        assert!(external_potential(8.0, 1.5, ell, &w, &g).is_err());
        assert!(external_potential(-1.0, 0.5, ell, &w, &g).is_err());
    }

    #[test]
    fn density_rejects_negative_values() {
        let g = ball_grid();
        let res = DensityField::new(Arc::clone(&g), vec![-1.0; g.len()]);
        assert!(matches!(res, Err(MtfError::Invariant(_))));
    }

    /// Regenerates [`COULOMB_SOBOLEV_RATIO_BOUND`]; run with
    /// `cargo test -p mtf calibrate_sobolev --release -- --ignored --nocapture`.
    #[test]
    #[ignore]
    fn calibrate_sobolev_ratio() {
        let g = Arc::new(RadialGrid::log_spaced(1e-5, 60.0, 6_000).unwrap());
        let mut worst: f64 = 0.0;
        for rho in density_family(&g) {
            let v = coulomb_potential(&rho);
            let n6 = lp_norm(&g, v.values(), 6.0, Region::All).unwrap();
            let d = hartree_energy(&rho);
            let ratio = n6 * n6 / d;
            println!("ratio = {ratio:.4}");
            worst = worst.max(ratio);
        }
        println!("max ratio {worst:.4} -> bound {:.4}", worst * 2.0);
    }

    /// The reference density family: balls, Gaussians, shells, exponentials.
    pub(crate) fn density_family(g: &Arc<RadialGrid>) -> Vec<DensityField> {
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
}
