//! Python bindings for `ising-fidelity`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ising_fidelity as core;
use ising_fidelity::quench::{DEFAULT_G_END, DEFAULT_G_START, DEFAULT_TOL, FITTED_CONST};
use ising_fidelity::IsingError;
use num_complex::Complex64;

fn to_py(e: IsingError) -> PyErr {
    match e {
        IsingError::InvalidArgument(_) | IsingError::InvalidSize { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(eq, eq_int, from_py_object, module = "ising_fidelity")]
#[derive(Clone, Copy, PartialEq)]
pub enum ParitySector {
    Positive,
    Negative,
}

impl From<ParitySector> for core::ParitySector {
    fn from(s: ParitySector) -> Self {
        match s {
            ParitySector::Positive => core::ParitySector::Positive,
            ParitySector::Negative => core::ParitySector::Negative,
        }
    }
}

impl From<core::ParitySector> for ParitySector {
    fn from(s: core::ParitySector) -> Self {
        match s {
            core::ParitySector::Positive => ParitySector::Positive,
            core::ParitySector::Negative => ParitySector::Negative,
        }
    }
}

/// Linear ramp `g(t) = -t/tau_q` from `g_start` down to `g_end`.
#[pyclass(from_py_object, module = "ising_fidelity")]
#[derive(Clone, Copy)]
pub struct QuenchProtocol {
    inner: core::QuenchProtocol,
}

#[pymethods]
impl QuenchProtocol {
    #[new]
    #[pyo3(signature = (n_spins, tau_q, g_start = DEFAULT_G_START, g_end = DEFAULT_G_END))]
    fn new(n_spins: usize, tau_q: f64, g_start: f64, g_end: f64) -> PyResult<Self> {
        let inner = core::QuenchProtocol::with_fields(n_spins, tau_q, g_start, g_end).py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_spins(&self) -> usize {
        self.inner.n_spins
    }

    #[getter]
    fn tau_q(&self) -> f64 {
        self.inner.tau_q
    }

    #[getter]
    fn g_start(&self) -> f64 {
        self.inner.g_start
    }

    #[getter]
    fn g_end(&self) -> f64 {
        self.inner.g_end
    }

    fn field_at(&self, t: f64) -> f64 {
        self.inner.field_at(t)
    }

    fn __repr__(&self) -> String {
        format!(
            "QuenchProtocol(n_spins={}, tau_q={}, g_start={}, g_end={})",
            self.inner.n_spins, self.inner.tau_q, self.inner.g_start, self.inner.g_end
        )
    }
}

#[pyclass(get_all, module = "ising_fidelity")]
pub struct QuenchResult {
    p_gs_final: f64,
    ln_p_gs_final: f64,
    norm_drift: f64,
    /// `(t, g, p)` triples, empty unless requested.
    trajectory: Vec<(f64, f64, f64)>,
}

#[pyclass(get_all, module = "ising_fidelity")]
pub struct FitResult {
    intercept: f64,
    slope: f64,
    stderr_intercept: f64,
    stderr_slope: f64,
    r_squared: f64,
    /// `(n, tau_q, ln_p_gs)` triples behind the fit.
    points: Vec<(usize, f64, f64)>,
}

#[pymethods]
impl FitResult {
    fn __repr__(&self) -> String {
        format!(
            "FitResult(intercept={}, slope={}, r_squared={})",
            self.intercept, self.slope, self.r_squared
        )
    }
}

impl From<core::SweepFit> for FitResult {
    fn from(s: core::SweepFit) -> Self {
        Self {
            intercept: s.fit.intercept,
            slope: s.fit.slope,
            stderr_intercept: s.fit.stderr_intercept,
            stderr_slope: s.fit.stderr_slope,
            r_squared: s.fit.r_squared,
            points: s.points.iter().map(|p| (p.n, p.tau_q, p.ln_p_gs)).collect(),
        }
    }
}

#[pyfunction]
fn chi_exact(g: f64, n: usize) -> PyResult<f64> {
    Ok(core::chi_exact(g, n).py()?.chi)
}

#[pyfunction]
fn chi_plus(g: f64, n: usize) -> PyResult<f64> {
    Ok(core::chi_plus(g, n).py()?.chi)
}

#[pyfunction]
fn chi_minus(g: f64, n: usize) -> PyResult<f64> {
    Ok(core::chi_minus(g, n).py()?.chi)
}

#[pyfunction]
fn chi_mode_sum(g: f64, n: usize, sector: ParitySector) -> PyResult<f64> {
    Ok(core::chi_mode_sum(g, n, sector.into()).py()?.chi)
}

/// `1 - g_max` for the susceptibility peak of an `n`-site chain.
#[pyfunction]
fn chi_max_location(n: usize) -> PyResult<f64> {
    core::chi_max_location(n).py()
}

/// `F(g, delta)` for `n` spins.
#[pyfunction]
fn fidelity(g: f64, delta: f64, n: usize) -> PyResult<f64> {
    Ok(core::fidelity(g, delta, n).py()?.value)
}

#[pyfunction]
fn ground_state_parity(g: f64, n: usize) -> PyResult<ParitySector> {
    Ok(core::ground_state_parity(g, n).py()?.into())
}

#[pyfunction]
fn momentum_grid(n: usize, sector: ParitySector) -> PyResult<Vec<f64>> {
    Ok(core::momentum_grid(n, sector.into()).py()?.momenta())
}

#[pyfunction]
fn bogoliubov_angle(g: f64, k: f64) -> PyResult<f64> {
    Ok(core::bogoliubov_angle(g, k).py()?.theta())
}

#[pyfunction]
#[pyo3(signature = (g, n, tol = 1e-10))]
fn parity_gap(g: f64, n: usize, tol: f64) -> PyResult<f64> {
    Ok(core::parity_gap(g, n, tol).py()?.value)
}

#[pyfunction]
fn elliptic_k(m: f64) -> PyResult<f64> {
    Ok(core::elliptic_k(m).py()?.value.re)
}

#[pyfunction]
fn elliptic_e(m: f64) -> PyResult<Complex64> {
    Ok(core::elliptic_e(m).py()?.value)
}

#[pyfunction]
fn scaling_a(c: f64) -> PyResult<f64> {
    Ok(core::scaling_a(c).py()?.a_value)
}

#[pyfunction]
fn sum_minus_integral(g: f64, delta: f64, n: usize) -> PyResult<f64> {
    core::sum_minus_integral(g, delta, n).py()
}

#[pyfunction]
#[pyo3(signature = (protocol, tol = DEFAULT_TOL, trajectory = false))]
fn run_quench(protocol: QuenchProtocol, tol: f64, trajectory: bool) -> PyResult<QuenchResult> {
    let r = core::run_quench(&protocol.inner, tol, trajectory).py()?;
    Ok(QuenchResult {
        p_gs_final: r.p_gs_final,
        ln_p_gs_final: r.ln_p_gs_final,
        norm_drift: r.norm_drift,
        trajectory: r
            .trajectory
            .unwrap_or_default()
            .iter()
            .map(|p| (p.t, p.g, p.p))
            .collect(),
    })
}

#[pyfunction]
#[pyo3(signature = (tau_q, sizes, g_start = DEFAULT_G_START, g_end = DEFAULT_G_END, tol = DEFAULT_TOL))]
fn fit_size(
    tau_q: f64,
    sizes: Vec<usize>,
    g_start: f64,
    g_end: f64,
    tol: f64,
) -> PyResult<FitResult> {
    Ok(core::fit_size(tau_q, &sizes, g_start, g_end, tol)
        .py()?
        .into())
}

#[pyfunction]
#[pyo3(signature = (n, taus, g_start = DEFAULT_G_START, g_end = DEFAULT_G_END, tol = DEFAULT_TOL))]
fn fit_tau(n: usize, taus: Vec<f64>, g_start: f64, g_end: f64, tol: f64) -> PyResult<FitResult> {
    Ok(core::fit_tau(n, &taus, g_start, g_end, tol).py()?.into())
}

/// `2 exp(-n konst / sqrt(tau_q))`.
#[pyfunction]
#[pyo3(signature = (n, tau_q, konst = FITTED_CONST))]
fn adiabatic_impulse_p_gs(n: usize, tau_q: f64, konst: f64) -> f64 {
    core::adiabatic_impulse_p_gs(n, tau_q, konst)
}

#[pyfunction]
fn adiabatic_finite_size(n: usize, tau_q: f64) -> f64 {
    core::adiabatic_finite_size(n, tau_q)
}

#[pyfunction]
fn oracle_fidelity(g: f64, delta: f64, n: usize) -> PyResult<f64> {
    core::oracle_fidelity(g, delta, n).py()
}

#[pyfunction]
fn oracle_parity_gap(g: f64, n: usize) -> PyResult<f64> {
    core::oracle_parity_gap(g, n).py()
}

#[pyfunction]
#[pyo3(signature = (protocol, tol = 1e-12))]
fn oracle_quench(protocol: QuenchProtocol, tol: f64) -> PyResult<f64> {
    core::oracle_quench(&protocol.inner, tol).py()
}

#[pymodule(name = "ising_fidelity")]
mod module {
    #[pymodule_export]
    use super::{
        adiabatic_finite_size, adiabatic_impulse_p_gs, bogoliubov_angle, chi_exact,
        chi_max_location, chi_minus, chi_mode_sum, chi_plus, elliptic_e, elliptic_k, fidelity,
        fit_size, fit_tau, ground_state_parity, momentum_grid, oracle_fidelity, oracle_parity_gap,
        oracle_quench, parity_gap, run_quench, scaling_a, sum_minus_integral, FitResult,
        ParitySector, QuenchProtocol, QuenchResult,
    };
}
