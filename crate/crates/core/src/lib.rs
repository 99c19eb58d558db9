//! Ground-state fidelity of the periodic transverse-field Ising chain.
//!
//! The crate is organised around the free-fermion solution of
//! `H(g) = -Σ (σˣᵢσˣᵢ₊₁ + g σᶻᵢ)`:
//!
//! * [`model`]: momentum quantisation per parity sector, Bogoliubov angles,
//!   parity gaps.
//! * [`susceptibility`]: exact and asymptotic fidelity susceptibility and
//!   finite-`N` fidelity.
//! * [`elliptic`] and [`scaling`]: thermodynamic-limit fidelity per site.
//! * [`quench`]: linear ramps across the critical point.
//! * [`oracle`]: dense exact diagonalisation used to validate everything
//!   above on small chains.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod fit;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod quench;
pub mod scaling;
pub mod susceptibility;

pub use elliptic::{elliptic_e, elliptic_k, EllipticValue};
pub use error::{IsingError, Result};
pub use fit::{linear_fit, FitResult};
pub use model::{
    bogoliubov_angle, correlation_length, ground_state_parity, momentum_grid, parity_gap,
    sector_ground_energy, GapResult, ModeAngle, Momentum, MomentumGrid, ParitySector, Regime,
};
pub use oracle::{
    dense_ground_state, oracle_fidelity, oracle_parity_gap, oracle_quench, oracle_sector_energy,
    DenseGround, DenseState,
};
pub use quench::{
    adiabatic_finite_size, adiabatic_impulse_p_gs, evolve_mode, fit_size, fit_tau, ghat,
    kz_scaling, mode_hamiltonian, run_quench, CriticalExponents, ModeState, QuenchProtocol,
    QuenchResult, SweepFit, SweepPoint, TrajectoryPoint,
};
pub use scaling::{
    ln_fidelity_per_site, scaling_a, scaling_a_far, sum_minus_integral, thermo_onset, OnsetCheck,
    ScalingPoint,
};
pub use susceptibility::{
    chi_asymptote, chi_exact, chi_finite_difference, chi_max_location, chi_minus, chi_mode_sum,
    chi_plus, fidelity, ChiResult, ChiVariant, FidelityResult, Phase,
};
