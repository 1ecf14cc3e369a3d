//! Finite-temperature Thomas-Fermi theory of the electron gas in a strong
//! homogeneous magnetic field.
//!
//! The crate provides, bottom up:
//!
//! * [`fermi`] — Fermi-Dirac integrals I_k(x) and derivatives,
//! * [`eos`] — the free-gas equation of state over Landau levels: pressure
//!   P_{T,B}(μ), density P′_{T,B}(μ), integrated density of states, limiting
//!   forms and two-sided envelope estimates,
//! * [`fields`] — radial grids, Coulomb potentials, Hartree energies,
//!   mollifiers and L^p norms,
//! * [`functional`] — the grand-canonical pressure functional of the electron
//!   density, its variational equation, a damped self-consistent solver, the
//!   Legendre-dual free energy, and the exchange-correction diagnostic,
//! * [`scaling`] — the (Z, B, T, μ) ↔ (β, ℓ, μ̃, T̃, B̃, h, b) parameter maps,
//!   exactness checks of the pressure rescaling, and limit scans toward the
//!   nonmagnetic (β → 0) and lowest-Landau-level (β → ∞) branches,
//! * [`cli`] — configuration parsing and the `mtf` command implementations.
//!
//! See the `examples/` directory for one runnable program per capability.

// frozen high-precision decimal literals keep their full reference digits
#![allow(clippy::excessive_precision)]
// negated comparisons like !(x > 0.0) deliberately reject NaN in validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// indexed loops over coupled stencil arrays stay indexed
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod eos;
pub mod error;
pub mod fermi;
pub mod fields;
pub mod functional;
mod numerics;
pub mod scaling;

pub use error::{MtfError, Result};
