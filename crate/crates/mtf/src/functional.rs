//! The grand-canonical pressure functional of the electron density,
//!
//! ```text
//!   P̃[ρ] = (1+β)^{-3/5} ∫ P_{T̃,B̃}(μ̃ - Ṽ_ρ(x)) d³x + D(ρ, ρ) ,
//!   Ṽ_ρ = -z Φ_C + W + ρ ∗ |x|⁻¹ ,     B̃ = β (1+β)^{-2/5} ,
//! ```
//!
//! its variational (fixed-point) equation
//! ρ = (1+β)^{-3/5} P′_{T̃,B̃}(μ̃ - Ṽ_ρ), the damped self-consistent solver,
//! the Legendre-dual free-energy description, and the exchange-correction
//! diagnostic. The β = ∞ branch replaces the pressure by its
//! lowest-Landau-level limit; it is a separate functional, not a large-β
//! approximation.
//!
//! The functional is strictly convex on the cone of admissible densities, so
//! the minimizer is unique and the fixed-point direction Φ(ρ) - ρ is always
//! a descent direction: the Gateaux derivative along it equals
//! -2 D(Φ(ρ)-ρ, Φ(ρ)-ρ) < 0. The solver exploits this with a backtracking
//! line search on the functional value.

use std::sync::Arc;

use serde::Serialize;

use crate::eos;
use crate::error::{MtfError, Result};
use crate::fields::{coulomb_potential, Confinement, DensityField, RadialGrid};

/// Field-strength parameter β = B/Z^{4/3}, with the lowest-Landau-level
/// limit as an explicit branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_infinite() && value > 0.0 {
            return Ok(Beta::Infinite);
        }
        if !(value >= 0.0) || !value.is_finite() {
            return Err(MtfError::Domain(format!("beta must be ≥ 0 or ∞, got {value}")));
        }
        Ok(Beta::Finite(value))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Beta::Finite(b) => *b,
            Beta::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Beta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Beta::Finite(b) => s.serialize_f64(*b),
            Beta::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A fully scaled minimization problem on its grid.
#[derive(Debug, Clone)]
pub struct ScaledProblem {
    pub mu_tilde: f64,
    pub t_tilde: f64,
    pub beta: Beta,
    /// nuclear charge fraction z₁ ∈ [0, 1]; z = 0 removes the nucleus
    pub z: f64,
    pub confinement: Confinement,
    pub grid: Arc<RadialGrid>,
}

impl ScaledProblem {
    pub fn new(
        mu_tilde: f64,
        t_tilde: f64,
        beta: Beta,
        z: f64,
        confinement: Confinement,
        grid: Arc<RadialGrid>,
    ) -> Result<Self> {
        if !mu_tilde.is_finite() {
            return Err(MtfError::Domain(format!("scaled μ must be finite, got {mu_tilde}")));
        }
        if !(t_tilde > 0.0) || !t_tilde.is_finite() {
            return Err(MtfError::Domain(format!("scaled T must be > 0, got {t_tilde}")));
        }
        if !(0.0..=1.0).contains(&z) {
            return Err(MtfError::Domain(format!("charge fraction must lie in [0, 1], got {z}")));
        }
        // the truncated grid must reach deep into the confined region,
        // otherwise the pressure integral has an unresolved tail
        let margin = (confinement.eval(grid.r_max()) - mu_tilde) / t_tilde;
        if margin < 25.0 {
            return Err(MtfError::Setup(format!(
                "grid extent {} leaves W(r_max) - μ̃ at only {margin:.1} T̃; enlarge r_max",
                grid.r_max()
            )));
        }
        Ok(ScaledProblem { mu_tilde, t_tilde, beta, z, confinement, grid })
    }

    /// A log grid adequate for this (μ̃, T̃, W): extends past the classical
    /// turning point by a wide thermal margin and resolves the Coulomb cusp.
    pub fn default_grid(
        mu_tilde: f64,
        t_tilde: f64,
        confinement: &Confinement,
        n: usize,
    ) -> Result<Arc<RadialGrid>> {
        let turning = confinement.radius_at(mu_tilde.max(0.0) + 50.0 * t_tilde + 10.0);
        let r_max = 1.6 * turning + 1.0;
        Ok(Arc::new(RadialGrid::log_spaced(1e-6 * r_max, r_max, n)?))
    }

    /// μ̃ - V_ext at the nodes (the pressure argument before screening).
    pub(crate) fn w_base(&self) -> Vec<f64> {
        self.grid
            .nodes()
            .iter()
            .map(|&r| self.mu_tilde + self.z / r - self.confinement.eval(r))
            .collect()
    }

    pub(crate) fn model(&self) -> PressureModel {
        match self.beta {
            Beta::Finite(b) => PressureModel::finite_beta(self.t_tilde, b),
            Beta::Infinite => PressureModel::Lll { t: self.t_tilde },
        }
    }
}

/// The homogeneous-gas pressure entering the functional, with the
/// β-dependent prefactor folded in.
#[derive(Debug, Clone, Copy)]
pub(crate) enum PressureModel {
    /// pref · P_{t,b}(w) and pref · P′_{t,b}(w)
    Finite { t: f64, b: f64, pref: f64 },
    /// lowest Landau level: P^∞_t(w)
    Lll { t: f64 },
}

impl PressureModel {
    pub(crate) fn finite_beta(t_tilde: f64, beta: f64) -> Self {
        let b_tilde = beta * (1.0 + beta).powf(-0.4);
        PressureModel::Finite { t: t_tilde, b: b_tilde, pref: (1.0 + beta).powf(-0.6) }
    }

    /// Unscaled gas at (T, B), unit prefactor.
    pub(crate) fn bare(t: f64, b: f64) -> Self {
        PressureModel::Finite { t, b, pref: 1.0 }
    }

    pub(crate) fn pressure(&self, w: f64) -> f64 {
        match *self {
            PressureModel::Finite { t, b, pref } => pref * eos::pressure_tb(w, t, b),
            PressureModel::Lll { t } => {
                t.powf(1.5) / std::f64::consts::PI * crate::fermi::fermi_i(1, w / t)
            }
        }
    }

    pub(crate) fn density(&self, w: f64) -> f64 {
        match *self {
            PressureModel::Finite { t, b, pref } => pref * eos::density_tb(w, t, b),
            PressureModel::Lll { t } => {
                t.sqrt() / (2.0 * std::f64::consts::PI) * crate::fermi::fermi_i(-1, w / t)
            }
        }
    }

    fn temperature(&self) -> f64 {
        match *self {
            PressureModel::Finite { t, .. } => t,
            PressureModel::Lll { t } => t,
        }
    }
}

/// Functional value split into its two terms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FunctionalTerms {
    pub pressure_integral: f64,
    pub hartree: f64,
}

/// Shared evaluation core: ∫ pref·P(w_base - v_ρ) + D(ρ,ρ) given the
/// already-computed Coulomb potential of ρ.
pub(crate) fn functional_value_with(
    model: &PressureModel,
    w_base: &[f64],
    grid: &RadialGrid,
    rho: &[f64],
    v_rho: &[f64],
) -> FunctionalTerms {
    let integrand: Vec<f64> =
        w_base.iter().zip(v_rho).map(|(&w, &v)| model.pressure(w - v)).collect();
    let pressure_integral = grid.integrate(&integrand);
    let prod: Vec<f64> = rho.iter().zip(v_rho).map(|(a, b)| a * b).collect();
    let hartree = 0.5 * grid.integrate(&prod);
    FunctionalTerms { pressure_integral, hartree }
}

/// Evaluate the pressure functional P̃[ρ] for a density in the admissible
/// cone (nonnegative, finite Hartree energy).
pub fn eval_pressure_functional(rho: &DensityField, prob: &ScaledProblem) -> Result<f64> {
    ensure_same_grid(rho, prob)?;
    let v = coulomb_potential(rho);
    let terms =
        functional_value_with(&prob.model(), &prob.w_base(), &prob.grid, rho.values(), v.values());
    Ok(terms.pressure_integral + terms.hartree)
}

fn ensure_same_grid(rho: &DensityField, prob: &ScaledProblem) -> Result<()> {
    if Arc::ptr_eq(rho.grid(), &prob.grid) {
        Ok(())
    } else {
        Err(MtfError::GridMismatch)
    }
}

/// Pointwise residual of the variational equation and its weighted sup norm.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// ρ - pref·P′(μ̃ - Ṽ_ρ) at the nodes
    pub values: Vec<f64>,
    /// sup |residual| / (1 + ρ): relative where the density is large,
    /// absolute where it vanishes
    pub sup_norm: f64,
}

pub fn tf_residual(rho: &DensityField, prob: &ScaledProblem) -> Result<ResidualReport> {
    ensure_same_grid(rho, prob)?;
    let model = prob.model();
    let w_base = prob.w_base();
    let v = coulomb_potential(rho);
    Ok(residual_inner(&model, &w_base, rho.values(), v.values()))
}

fn residual_inner(
    model: &PressureModel,
    w_base: &[f64],
    rho: &[f64],
    v_rho: &[f64],
) -> ResidualReport {
    let mut values = Vec::with_capacity(rho.len());
    let mut sup: f64 = 0.0;
    for i in 0..rho.len() {
        let map = model.density(w_base[i] - v_rho[i]);
        let res = rho[i] - map;
        sup = sup.max(res.abs() / (1.0 + rho[i]));
        values.push(res);
    }
    ResidualReport { values, sup_norm: sup }
}

/// Solver controls.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOptions {
    /// initial mixing parameter α ∈ (0, 1]
    pub damping: f64,
    /// convergence threshold on the weighted residual sup norm
    pub tol: f64,
    pub max_iter: usize,
    /// Anderson mixing depth; 0 disables acceleration
    pub anderson_depth: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { damping: 0.5, tol: 1e-8, max_iter: 600, anderson_depth: 0 }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(MtfError::Domain(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if !(self.tol > 0.0) {
            return Err(MtfError::Domain(format!("tolerance must be > 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Converged (or best-effort) solution of the variational equation.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub density: DensityField,
    /// functional value at the returned density (the pressure at convergence)
    pub pressure: f64,
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub hartree: f64,
    pub functional_terms: FunctionalTerms,
    pub particle_number: f64,
}

/// Damped fixed-point iteration ρ ← (1-α)ρ + α·pref·P′(μ̃ - Ṽ_ρ) with a
/// functional-descent backtracking line search. The start is the unscreened
/// density pref·P′(μ̃ - V_ext), a pointwise upper bound for the minimizer.
/// Non-convergence is reported in the result, not as an error.
pub fn scf_solve(prob: &ScaledProblem, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    let model = prob.model();
    let w_base = prob.w_base();
    let grid = &prob.grid;

    let mut rho: Vec<f64> = w_base.iter().map(|&w| model.density(w)).collect();
    let mut v = coulomb_values(grid, &rho);
    let mut terms = functional_value_with(&model, &w_base, grid, &rho, &v);
    let mut f_val = terms.pressure_integral + terms.hartree;

    let mut history = Vec::new();
    let mut anderson = AndersonMixer::new(opts.anderson_depth);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iter {
        iterations = iter + 1;
        let phi: Vec<f64> = w_base.iter().zip(&v).map(|(&w, &vv)| model.density(w - vv)).collect();
        let mut sup: f64 = 0.0;
        for i in 0..rho.len() {
            sup = sup.max((phi[i] - rho[i]).abs() / (1.0 + rho[i]));
        }
        history.push(sup);
        if sup <= opts.tol {
            converged = true;
            break;
        }

        // Anderson candidate, guarded by the same descent test
        if let Some(cand) = anderson.propose(&rho, &phi, grid.weights()) {
            let v_cand = coulomb_values(grid, &cand);
            let t_cand = functional_value_with(&model, &w_base, grid, &cand, &v_cand);
            let f_cand = t_cand.pressure_integral + t_cand.hartree;
            if f_cand <= f_val + descent_slack(f_val) {
                rho = cand;
                v = v_cand;
                terms = t_cand;
                f_val = f_cand;
                continue;
            }
        }

        let mut alpha = opts.damping;
        loop {
            let cand: Vec<f64> = rho.iter().zip(&phi).map(|(&r, &p)| r + alpha * (p - r)).collect();
            let v_cand = coulomb_values(grid, &cand);
            let t_cand = functional_value_with(&model, &w_base, grid, &cand, &v_cand);
            let f_cand = t_cand.pressure_integral + t_cand.hartree;
            if f_cand <= f_val + descent_slack(f_val) || alpha < 1e-6 {
                rho = cand;
                v = v_cand;
                terms = t_cand;
                f_val = f_cand;
                break;
            }
            alpha *= 0.5;
        }
    }

    let density = DensityField::new(Arc::clone(grid), rho)?;
    let particle_number = density.particle_number();
    Ok(SolveReport {
        pressure: f_val,
        residual_history: history,
        iterations,
        converged,
        hartree: terms.hartree,
        functional_terms: terms,
        particle_number,
        density,
    })
}

fn descent_slack(f: f64) -> f64 {
    f.abs() * 1e-13 + 1e-300
}

fn coulomb_values(grid: &Arc<RadialGrid>, rho: &[f64]) -> Vec<f64> {
    let inner = grid.cumulative_inner(rho);
    let outer = grid.cumulative_outer(rho);
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| 4.0 * std::f64::consts::PI * (inner[i] / r + outer[i]))
        .collect()
}

/// Anderson mixing over residual differences, solved by small dense
/// normal equations weighted with the quadrature weights.
struct AndersonMixer {
    depth: usize,
    rhos: Vec<Vec<f64>>,
    phis: Vec<Vec<f64>>,
}

impl AndersonMixer {
    fn new(depth: usize) -> Self {
        AndersonMixer { depth, rhos: Vec::new(), phis: Vec::new() }
    }

    fn propose(&mut self, rho: &[f64], phi: &[f64], w: &[f64]) -> Option<Vec<f64>> {
        if self.depth == 0 {
            return None;
        }
        self.rhos.push(rho.to_vec());
        self.phis.push(phi.to_vec());
        if self.rhos.len() > self.depth + 1 {
            self.rhos.remove(0);
            self.phis.remove(0);
        }
        let k = self.rhos.len() - 1;
        if k == 0 {
            return None;
        }
        let n = rho.len();
        let f = |j: usize, i: usize| self.phis[j][i] - self.rhos[j][i];
        let m = k.min(self.depth);
        let mut a = vec![0.0; m * m];
        let mut b = vec![0.0; m];
        for p in 0..m {
            for q in 0..m {
                let mut s = 0.0;
                for i in 0..n {
                    let dp = f(k, i) - f(k - 1 - p, i);
                    let dq = f(k, i) - f(k - 1 - q, i);
                    s += w[i] * dp * dq;
                }
                a[p * m + q] = s;
            }
            let mut s = 0.0;
            for i in 0..n {
                s += w[i] * (f(k, i) - f(k - 1 - p, i)) * f(k, i);
            }
            b[p] = s;
        }
        let gamma = solve_dense(&mut a, &mut b, m)?;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut g = self.phis[k][i];
            for (p, &gp) in gamma.iter().enumerate() {
                g -= gp * (self.phis[k][i] - self.phis[k - 1 - p][i]);
            }
            out[i] = g.max(0.0);
        }
        Some(out)
    }
}

/// Gaussian elimination with partial pivoting for the tiny Anderson systems.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[piv * n + col].abs() {
                piv = row;
            }
        }
        if a[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            b.swap(col, piv);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            for j in col..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for j in col + 1..n {
            s -= a[col * n + j] * x[j];
        }
        x[col] = s / a[col * n + col];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Legendre duality
// ---------------------------------------------------------------------------

/// Free energy density f(ρ) = sup_μ {μρ - P_{T,B}(μ)} of the homogeneous
/// gas, via the monotone root-find P′(μ) = ρ.
pub fn free_energy_density(rho_val: f64, t: f64, b: f64) -> Result<f64> {
    eos::GasState::new(0.0, t, b)?;
    if t <= 0.0 {
        return Err(MtfError::Domain("temperature must be > 0".into()));
    }
    let model = PressureModel::bare(t, b);
    Ok(model_free_energy(&model, rho_val)?.0)
}

/// The maximizing μ in the Legendre transform, i.e. f′(ρ) = (P′)⁻¹(ρ).
pub fn chemical_potential_of_density(rho_val: f64, t: f64, b: f64) -> Result<f64> {
    eos::GasState::new(0.0, t, b)?;
    if t <= 0.0 {
        return Err(MtfError::Domain("temperature must be > 0".into()));
    }
    let model = PressureModel::bare(t, b);
    invert_density(&model, rho_val)
}

/// (f(ρ), maximizing μ) for any pressure model.
pub(crate) fn model_free_energy(model: &PressureModel, rho_val: f64) -> Result<(f64, f64)> {
    if rho_val < 0.0 || !rho_val.is_finite() {
        return Err(MtfError::Domain(format!("density must be ≥ 0, got {rho_val}")));
    }
    if rho_val < 1e-250 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let mu = invert_density(model, rho_val)?;
    Ok((mu * rho_val - model.pressure(mu), mu))
}

/// Solve pref·P′(μ) = ρ for μ. P′ is strictly increasing with range (0, ∞)
/// at T > 0, so a geometric bracket expansion always succeeds.
fn invert_density(model: &PressureModel, rho_val: f64) -> Result<f64> {
    if !(rho_val > 0.0) || !rho_val.is_finite() {
        return Err(MtfError::Domain(format!("density must be > 0 to invert, got {rho_val}")));
    }
    let t = model.temperature();
    let mut lo = -t;
    let mut hi = t;
    let mut k = 0;
    while model.density(hi) < rho_val {
        hi = hi * 2.0 + t;
        k += 1;
        if k > 600 {
            return Err(MtfError::Numeric(format!(
                "density inversion bracket failed expanding up: ρ={rho_val}, reached μ={hi}"
            )));
        }
    }
    while model.density(lo) > rho_val {
        lo = lo * 2.0 - t;
        k += 1;
        if k > 1200 {
            return Err(MtfError::Numeric(format!(
                "density inversion bracket failed expanding down: ρ={rho_val}, reached μ={lo}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if model.density(mid) < rho_val {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Free energy functional F[ρ] = ∫ { f(ρ) + V_ext ρ } + D(ρ, ρ) in scaled
/// variables; at the minimizer it satisfies F[ρ*] = μ̃ N - P̃[ρ*].
pub fn eval_free_energy_functional(rho: &DensityField, prob: &ScaledProblem) -> Result<f64> {
    ensure_same_grid(rho, prob)?;
    let model = prob.model();
    let grid = &prob.grid;
    let mut integrand = Vec::with_capacity(grid.len());
    for (&r, &rv) in grid.nodes().iter().zip(rho.values()) {
        let f = model_free_energy(&model, rv)?.0;
        let v_ext = -prob.z / r + prob.confinement.eval(r);
        integrand.push(f + v_ext * rv);
    }
    Ok(grid.integrate(&integrand) + crate::fields::hartree_energy(rho))
}

// ---------------------------------------------------------------------------
// Exchange correction diagnostics
// ---------------------------------------------------------------------------

/// The correction pair (C_γ, μ-shift) from the exchange inequality:
/// C_{γ,ρ} = (3/5γ) ∫ ρ^{5/3} and the chemical-potential shift 3.68 γ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExchangeCorrection {
    pub c_gamma: f64,
    pub mu_shift: f64,
}

pub fn exchange_correction(rho: &DensityField, gamma: f64) -> Result<ExchangeCorrection> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(MtfError::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    let powed: Vec<f64> = rho.values().iter().map(|v| v.powf(5.0 / 3.0)).collect();
    let integral = rho.grid().integrate(&powed);
    Ok(ExchangeCorrection { c_gamma: 3.0 / (5.0 * gamma) * integral, mu_shift: 3.68 * gamma })
}

/// The admissibility window (1+β)^{2/5} ≪ γ ≪ Z^{4/3}(1+β)^{2/5} as two
/// ratios; both must be ≫ 1 for the correction to be subleading.
pub fn gamma_window(gamma: f64, big_z: f64, beta: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0) || !(big_z > 0.0) || !(beta >= 0.0) {
        return Err(MtfError::Domain("need γ > 0, Z > 0, β ≥ 0".into()));
    }
    let base = (1.0 + beta).powf(0.4);
    Ok((gamma / base, big_z.powf(4.0 / 3.0) * base / gamma))
}
