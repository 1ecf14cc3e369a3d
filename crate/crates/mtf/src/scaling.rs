//! Parameter scalings between the physical problem (Z, B, T, μ) and the
//! scaled one (β, ℓ, μ̃, T̃, B̃, h, b):
//!
//! ```text
//!   β = B/Z^{4/3}            ℓ = Z^{-1/3} (1+β)^{-2/5}
//!   μ̃ = μ/(Zℓ⁻¹)             T̃ = T/(Zℓ⁻¹)        B̃ = β (1+β)^{-2/5}
//!   h = ℓ^{-1/2} Z^{-1/2} = Z^{-1/3}(1+β)^{1/5}
//!   b = B ℓ^{3/2} Z^{-1/2} = Z^{1/3} β (1+β)^{-3/5}
//! ```
//!
//! together with the exactness check of the pressure rescaling
//! P[ρ; μ,T,B,Z] = Z²ℓ⁻¹ P̃[ρ̃; μ̃,T̃,β] and convergence scans toward the
//! nonmagnetic (β → 0) and lowest-Landau-level (β → ∞) branches.

use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{MtfError, Result};
use crate::fields::{self, Confinement, DensityField, RadialGrid};
use crate::functional::{
    functional_value_with, scf_solve, Beta, PressureModel, ScaledProblem, SolveOptions,
    SolveReport,
};

/// Unscaled problem data. The radial reference path supports a single
/// nucleus at the origin (one charge fraction, position fixed).
#[derive(Debug, Clone)]
pub struct PhysicalParams {
    pub big_z: f64,
    pub b: f64,
    pub t: f64,
    pub mu: f64,
    /// nuclear charge fractions z_k ∈ (0, 1]
    pub z_fracs: Vec<f64>,
    /// nuclear positions (pre-ℓ-scaling); the radial path requires the origin
    pub positions: Vec<[f64; 3]>,
    pub confinement: Confinement,
}

impl PhysicalParams {
    pub fn new(big_z: f64, b: f64, t: f64, mu: f64, z1: f64, confinement: Confinement) -> Result<Self> {
        let p = PhysicalParams {
            big_z,
            b,
            t,
            mu,
            z_fracs: vec![z1],
            positions: vec![[0.0; 3]],
            confinement,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.big_z > 0.0) || !self.big_z.is_finite() {
            return Err(MtfError::Domain(format!("Z must be > 0, got {}", self.big_z)));
        }
        if !(self.b >= 0.0) || !self.b.is_finite() {
            return Err(MtfError::Domain(format!("B must be ≥ 0, got {}", self.b)));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(MtfError::Domain(format!("T must be > 0, got {}", self.t)));
        }
        if !self.mu.is_finite() {
            return Err(MtfError::Domain("μ must be finite".into()));
        }
        if self.z_fracs.is_empty() || self.z_fracs.len() != self.positions.len() {
            return Err(MtfError::Domain("need matching charge fractions and positions".into()));
        }
        for &z in &self.z_fracs {
            if !(z > 0.0 && z <= 1.0) {
                return Err(MtfError::Domain(format!("charge fractions must lie in (0, 1], got {z}")));
            }
        }
        Ok(())
    }

    fn require_radial(&self) -> Result<()> {
        let origin = self.positions.len() == 1 && self.positions[0] == [0.0; 3];
        if !origin {
            return Err(MtfError::Geometry(
                "the radial path supports exactly one nucleus at the origin".into(),
            ));
        }
        Ok(())
    }

    /// Unscaled external potential V_{Z,B}(r) on a grid.
    pub fn external_potential(&self, grid: &Arc<RadialGrid>) -> Result<fields::PotentialField> {
        self.require_radial()?;
        let s = scale_params(self)?;
        fields::external_potential(self.big_z, self.z_fracs[0], s.ell, &self.confinement, grid)
    }

    /// The scaled problem this instance maps to, on the given grid.
    pub fn to_scaled_problem(&self, grid: Arc<RadialGrid>) -> Result<ScaledProblem> {
        self.require_radial()?;
        let s = scale_params(self)?;
        ScaledProblem::new(
            s.mu_tilde,
            s.t_tilde,
            Beta::Finite(s.beta),
            self.z_fracs[0],
            self.confinement,
            grid,
        )
    }
}

/// Derived scaled quantities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScaledParams {
    pub beta: f64,
    pub ell: f64,
    pub mu_tilde: f64,
    pub t_tilde: f64,
    pub b_tilde: f64,
    pub h: f64,
    pub b: f64,
}

/// Map physical parameters to the scaled set. The stored fields are computed
/// from shared intermediates so the algebraic identities h·b = B̃ and
/// h³ = Z⁻¹(1+β)^{3/5} hold to a few ulp.
pub fn scale_params(p: &PhysicalParams) -> Result<ScaledParams> {
    p.validate()?;
    let beta = p.b / p.big_z.powf(4.0 / 3.0);
    let zp13 = p.big_z.cbrt();
    let g2 = (1.0 + beta).powf(0.4); // (1+β)^{2/5}
    let ell = 1.0 / (zp13 * g2);
    // cube root of the exact cube keeps h³ = Z⁻¹(1+β)^{3/5} at the ulp level
    let h = ((1.0 + beta).powf(0.6) / p.big_z).cbrt();
    let b_tilde = beta / g2;
    let b = b_tilde / h;
    let z_over_ell = p.big_z / ell;
    Ok(ScaledParams {
        beta,
        ell,
        mu_tilde: p.mu / z_over_ell,
        t_tilde: p.t / z_over_ell,
        b_tilde,
        h,
        b,
    })
}

/// Unscale a density: ρ(x) = Z ℓ⁻³ ρ̃(ℓ⁻¹x) on the correspondingly scaled
/// grid; particle number transforms as ∫ρ = Z ∫ρ̃.
pub fn scale_density(rho_tilde: &DensityField, p: &PhysicalParams) -> Result<DensityField> {
    let s = scale_params(p)?;
    let nodes: Vec<f64> = rho_tilde.grid().nodes().iter().map(|&r| s.ell * r).collect();
    let grid = Arc::new(RadialGrid::from_nodes(nodes)?);
    let amp = p.big_z / (s.ell * s.ell * s.ell);
    let values = rho_tilde.values().iter().map(|&v| amp * v).collect();
    DensityField::new(grid, values)
}

/// Inverse of [`scale_density`].
pub fn unscale_density(rho: &DensityField, p: &PhysicalParams) -> Result<DensityField> {
    let s = scale_params(p)?;
    let nodes: Vec<f64> = rho.grid().nodes().iter().map(|&r| r / s.ell).collect();
    let grid = Arc::new(RadialGrid::from_nodes(nodes)?);
    let amp = s.ell * s.ell * s.ell / p.big_z;
    let values = rho.values().iter().map(|&v| amp * v).collect();
    DensityField::new(grid, values)
}

/// Outcome of the dual-path functional evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RescaleReport {
    /// P[ρ; μ, T, B, Z] evaluated in physical variables
    pub unscaled: f64,
    /// P̃[ρ̃; μ̃, T̃, β] evaluated in scaled variables
    pub scaled: f64,
    /// Z²ℓ⁻¹ · scaled
    pub scaled_mapped: f64,
    pub rel_discrepancy: f64,
}

/// Evaluate the pressure functional along both routes and report the
/// relative discrepancy |unscaled - Z²ℓ⁻¹·scaled| / |unscaled|.
pub fn pressure_rescale_check(rho_tilde: &DensityField, p: &PhysicalParams) -> Result<RescaleReport> {
    p.require_radial()?;
    let s = scale_params(p)?;
    let z_over_ell = p.big_z / s.ell;
    // the unscaled integrand reaches (Zℓ⁻¹)^{5/2}-sized values; refuse
    // configurations that would overflow and advise the scaled route
    if z_over_ell.powf(2.5) > 1e280 {
        return Err(MtfError::Range(
            "unscaled functional would overflow at this Z; evaluate in scaled variables".into(),
        ));
    }

    // scaled route
    let grid_t = rho_tilde.grid();
    let z1 = p.z_fracs[0];
    let model_t = PressureModel::finite_beta(s.t_tilde, s.beta);
    let w_base_t: Vec<f64> = grid_t
        .nodes()
        .iter()
        .map(|&r| s.mu_tilde + z1 / r - p.confinement.eval(r))
        .collect();
    let v_t = crate::fields::coulomb_potential(rho_tilde);
    let terms_t =
        functional_value_with(&model_t, &w_base_t, grid_t, rho_tilde.values(), v_t.values());
    let scaled = terms_t.pressure_integral + terms_t.hartree;

    // physical route
    let rho = scale_density(rho_tilde, p)?;
    let grid_u = rho.grid();
    let model_u = PressureModel::bare(p.t, p.b);
    let w_base_u: Vec<f64> = grid_u
        .nodes()
        .iter()
        .map(|&r| p.mu + p.big_z * z1 / r - p.big_z / s.ell * p.confinement.eval(r / s.ell))
        .collect();
    let v_u = crate::fields::coulomb_potential(&rho);
    let terms_u = functional_value_with(&model_u, &w_base_u, grid_u, rho.values(), v_u.values());
    let unscaled = terms_u.pressure_integral + terms_u.hartree;

    let scaled_mapped = p.big_z * p.big_z / s.ell * scaled;
    let rel = ((unscaled - scaled_mapped) / unscaled).abs();
    Ok(RescaleReport { unscaled, scaled, scaled_mapped, rel_discrepancy: rel })
}

/// Direction of a limit scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    BetaToInf,
    BetaToZero,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub beta: f64,
    pub pressure: f64,
    pub converged: bool,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub mode: ScanMode,
    pub rows: Vec<ScanRow>,
    pub limit_pressure: f64,
    pub limit_converged: bool,
}

impl ScanTable {
    pub fn all_converged(&self) -> bool {
        self.limit_converged && self.rows.iter().all(|r| r.converged)
    }

    /// CSV with columns beta, pressure, limit_pressure, rel_gap; the limit
    /// branch is the last row. Failed members carry NaN gaps.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "beta,pressure,limit_pressure,rel_gap")?;
        for row in &self.rows {
            writeln!(out, "{:e},{:e},{:e},{:e}", row.beta, row.pressure, self.limit_pressure, row.rel_gap)?;
        }
        let limit_beta = match self.mode {
            ScanMode::BetaToInf => f64::INFINITY,
            ScanMode::BetaToZero => 0.0,
        };
        writeln!(out, "{:e},{:e},{:e},{:e}", limit_beta, self.limit_pressure, self.limit_pressure, 0.0)?;
        Ok(())
    }

    /// Least-squares slope of ln(gap) against ln(β); needs ≥ 3 points.
    pub fn decay_exponent(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.converged && r.rel_gap > 0.0 && r.beta > 0.0)
            .map(|r| (r.beta.ln(), r.rel_gap.ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    }
}

/// Solve the scaled problem across a monotone β schedule and against the
/// corresponding limit branch (β = ∞ or β = 0), reporting relative gaps.
/// Individual non-converged members are flagged, not fatal.
pub fn limit_scan(
    template: &ScaledProblem,
    betas: &[f64],
    mode: ScanMode,
    opts: &SolveOptions,
) -> Result<ScanTable> {
    if betas.is_empty() {
        return Err(MtfError::Domain("scan needs at least one beta".into()));
    }
    for pair in betas.windows(2) {
        let ok = match mode {
            ScanMode::BetaToInf => pair[1] > pair[0],
            ScanMode::BetaToZero => pair[1] < pair[0],
        };
        if !ok {
            return Err(MtfError::Domain(
                "beta schedule must be strictly monotone toward the limit".into(),
            ));
        }
    }
    for &b in betas {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(MtfError::Domain(format!("beta must be finite and ≥ 0, got {b}")));
        }
    }

    let limit_beta = match mode {
        ScanMode::BetaToInf => Beta::Infinite,
        ScanMode::BetaToZero => Beta::Finite(0.0),
    };
    let limit_prob = with_beta(template, limit_beta)?;
    let limit_rep = scf_solve(&limit_prob, opts)?;

    let mut rows = Vec::with_capacity(betas.len());
    for &beta in betas {
        let prob = with_beta(template, Beta::Finite(beta))?;
        let rep: SolveReport = scf_solve(&prob, opts)?;
        let rel_gap = if rep.converged && limit_rep.converged {
            ((rep.pressure - limit_rep.pressure) / limit_rep.pressure).abs()
        } else {
            f64::NAN
        };
        rows.push(ScanRow { beta, pressure: rep.pressure, converged: rep.converged, rel_gap });
    }
    Ok(ScanTable {
        mode,
        rows,
        limit_pressure: limit_rep.pressure,
        limit_converged: limit_rep.converged,
    })
}

fn with_beta(template: &ScaledProblem, beta: Beta) -> Result<ScaledProblem> {
    ScaledProblem::new(
        template.mu_tilde,
        template.t_tilde,
        beta,
        template.z,
        template.confinement,
        Arc::clone(&template.grid),
    )
}
