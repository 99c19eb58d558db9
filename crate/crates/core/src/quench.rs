//! Linear ramps `g(t) = -t/τ_Q` across the critical point.
//!
//! Parity is conserved, so the positive-sector ground state evolves mode by
//! mode in the two-dimensional space spanned by `|vac_k⟩` and
//! `c_k† c_{-k}† |vac_k⟩`, where
//!
//! ```text
//! H_k = 2 [ -(g - cos k) σᶻ + sin k σˣ ]
//! ```
//!
//! has the ground state `(cos θ_k/2, -sin θ_k/2)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};
use crate::fit::{linear_fit, FitResult};
use crate::model::{half_angle, ModeTrig, Momentum, MomentumGrid, ParitySector};
use crate::ode::{solve, OdeOptions};

pub const DEFAULT_G_START: f64 = 5.0;
pub const DEFAULT_G_END: f64 = 0.0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const TRAJECTORY_POINTS: usize = 201;

/// `const` in `p_GS = 2 exp(-N const/√τ_Q)` from the adiabatic-impulse
/// estimate with `ĝ = 1/√τ_Q`: `F²(1, ĝ)` per site gives `2·ĝ/4`.
pub const IMPULSE_CONST: f64 = 0.5;

/// `const` calibrated on simulated ramps: slope `-0.020800730` per spin at
/// `τ_Q = 50`.
pub const FITTED_CONST: f64 = 0.020_800_730 * 7.071_067_811_865_475;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchProtocol {
    pub tau_q: f64,
    pub g_start: f64,
    pub g_end: f64,
    pub n_spins: usize,
}

impl QuenchProtocol {
    /// Ramp from `g = 5` to `g = 0`.
    pub fn new(n_spins: usize, tau_q: f64) -> Result<Self> {
        Self::with_fields(n_spins, tau_q, DEFAULT_G_START, DEFAULT_G_END)
    }

    pub fn with_fields(n_spins: usize, tau_q: f64, g_start: f64, g_end: f64) -> Result<Self> {
        let p = Self {
            tau_q,
            g_start,
            g_end,
            n_spins,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_q > 0.0) || !self.tau_q.is_finite() {
            return Err(IsingError::InvalidArgument(format!(
                "quench time must be positive, got {}",
                self.tau_q
            )));
        }
        if !(self.g_start > self.g_end) || !self.g_start.is_finite() || !self.g_end.is_finite() {
            return Err(IsingError::InvalidArgument(format!(
                "ramp must decrease the field, got {} -> {}",
                self.g_start, self.g_end
            )));
        }
        if self.n_spins < 2 {
            return Err(IsingError::InvalidSize {
                n: self.n_spins,
                reason: "at least two spins are required",
            });
        }
        Ok(())
    }

    pub fn t_start(&self) -> f64 {
        -self.g_start * self.tau_q
    }

    pub fn t_end(&self) -> f64 {
        -self.g_end * self.tau_q
    }

    pub fn field_at(&self, t: f64) -> f64 {
        -t / self.tau_q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    pub k: f64,
    pub amp_vac: Complex64,
    pub amp_pair: Complex64,
}

impl ModeState {
    pub fn norm_sqr(&self) -> f64 {
        self.amp_vac.norm_sqr() + self.amp_pair.norm_sqr()
    }

    /// `|⟨gs_k(g)|ψ_k⟩|²`
    pub fn ground_overlap(&self, g: f64) -> f64 {
        let [c, s] = mode_ground_state(g, self.k);
        (self.amp_vac * c - self.amp_pair * s).norm_sqr()
    }
}

/// `H_k(g)` in the basis `(|vac_k⟩, c_k† c_{-k}† |vac_k⟩)`.
pub fn mode_hamiltonian(g: f64, k: f64) -> [[f64; 2]; 2] {
    mode_hamiltonian_trig(g, ModeTrig::from_radians(k))
}

fn mode_hamiltonian_trig(g: f64, trig: ModeTrig) -> [[f64; 2]; 2] {
    let a = trig.detuning(g);
    let s = trig.sin_k;
    [[-2.0 * a, 2.0 * s], [2.0 * s, 2.0 * a]]
}

/// `(cos θ_k/2, sin θ_k/2)`; the ground state is `(cos θ_k/2, -sin θ_k/2)`.
pub fn mode_ground_state(g: f64, k: f64) -> [f64; 2] {
    let (c, s, _) = half_angle(g, ModeTrig::from_radians(k));
    [c, s]
}

struct ModeRun {
    state: ModeState,
    /// `ln |⟨gs_k(g(t))|ψ_k(t)⟩|²` at each sample time.
    log_overlaps: Vec<f64>,
}

/// `∫ Λ dg = [(g - cos k)Λ + sin²k ln(g - cos k + Λ)] / 2`
fn lambda_antiderivative(g: f64, trig: ModeTrig) -> f64 {
    let a = trig.detuning(g);
    let lambda = a.hypot(trig.sin_k);
    let s2 = trig.sin_k * trig.sin_k;
    let log = if a >= 0.0 {
        (a + lambda).ln()
    } else {
        // a + Λ = sin²k / (Λ - a)
        s2.ln() - (lambda - a).ln()
    };
    0.5 * (a * lambda + s2 * log)
}

/// Integrates one mode in the instantaneous eigenbasis,
/// `ψ = α e^{iφ} |gs⟩ + β e^{-iφ} |ex⟩` with `φ = ∫ 2Λ dt`, where
///
/// ```text
/// α' = -(θ'/2) β e^{-2iφ},   β' = (θ'/2) α e^{2iφ},   θ' = sin k / (τ_Q Λ²)
/// ```
///
/// The right-hand side is small away from the critical region, so steps stay
/// long there, and `|α|²` is the instantaneous ground-state probability.
fn run_mode(
    k: f64,
    trig: ModeTrig,
    protocol: &QuenchProtocol,
    tol: f64,
    sample_times: &[f64],
) -> Result<ModeRun> {
    let tau = protocol.tau_q;
    let f0 = lambda_antiderivative(protocol.g_start, trig);
    let phase = |g: f64| 2.0 * tau * (f0 - lambda_antiderivative(g, trig));
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let g = -t / tau;
        let half_rate = 0.5 * trig.sin_k / (tau * trig.lambda_sq(g));
        let rot = Complex64::from_polar(half_rate, -2.0 * phase(g));
        dy[0] = -(y[1] * rot);
        dy[1] = y[0] * rot.conj();
    };
    let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let sol = solve(
        rhs,
        protocol.t_start(),
        protocol.t_end(),
        &y0,
        OdeOptions::new(tol),
        sample_times,
    )
    .map_err(|e| IsingError::ModeIntegration {
        k,
        source: Box::new(e),
    })?;
    let log_overlaps = sol.samples.iter().map(|y| y[0].norm_sqr().ln()).collect();

    let g_end = protocol.g_end;
    let (c, s, _) = half_angle(g_end, trig);
    let w = Complex64::from_polar(1.0, phase(g_end));
    let a = sol.y[0] * w;
    let b = sol.y[1] * w.conj();
    Ok(ModeRun {
        state: ModeState {
            k,
            amp_vac: a * c + b * s,
            amp_pair: b * c - a * s,
        },
        log_overlaps,
    })
}

/// Evolves the ground state of `H_k(g_start)` through the ramp.
pub fn evolve_mode(k: f64, protocol: &QuenchProtocol, tol: f64) -> Result<ModeState> {
    protocol.validate()?;
    if !(k > 0.0 && k < std::f64::consts::PI) {
        return Err(IsingError::InvalidArgument(format!(
            "mode momentum must lie in (0, π), got {k}"
        )));
    }
    Ok(run_mode(k, ModeTrig::from_radians(k), protocol, tol, &[])?.state)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub g: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchResult {
    pub protocol: QuenchProtocol,
    pub p_gs_final: f64,
    pub ln_p_gs_final: f64,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    /// Largest `| |ψ_k|² - 1 |` over modes.
    pub norm_drift: f64,
}

/// Evolves every positive-sector mode and multiplies the ground-state
/// overlaps. Requires an even chain and non-negative fields.
pub fn run_quench(
    protocol: &QuenchProtocol,
    tol: f64,
    record_trajectory: bool,
) -> Result<QuenchResult> {
    protocol.validate()?;
    if protocol.n_spins % 2 == 1 {
        return Err(IsingError::InvalidSize {
            n: protocol.n_spins,
            reason: "quench dynamics assumes an even number of spins",
        });
    }
    if protocol.g_end < 0.0 {
        return Err(IsingError::InvalidArgument(format!(
            "ramp must stay at non-negative fields, got g_end = {}",
            protocol.g_end
        )));
    }
    let grid = MomentumGrid::new(protocol.n_spins, ParitySector::Positive)?;
    let momenta: Vec<Momentum> = grid.paired().collect();
    let (t0, t1) = (protocol.t_start(), protocol.t_end());
    let sample_times: Vec<f64> = if record_trajectory {
        let m = TRAJECTORY_POINTS - 1;
        (0..=m)
            .map(|j| {
                if j == m {
                    t1
                } else {
                    t0 + (t1 - t0) * j as f64 / m as f64
                }
            })
            .collect()
    } else {
        vec![t1]
    };

    let runs: Vec<ModeRun> = momenta
        .par_iter()
        .map(|k| run_mode(k.radians(), k.trig(), protocol, tol, &sample_times))
        .collect::<Result<_>>()?;

    let mut log_p = vec![0.0; sample_times.len()];
    let mut norm_drift: f64 = 0.0;
    for run in &runs {
        for (acc, l) in log_p.iter_mut().zip(&run.log_overlaps) {
            *acc += l;
        }
        norm_drift = norm_drift.max((run.state.norm_sqr() - 1.0).abs());
    }
    let ln_final = *log_p.last().expect("at least one sample");
    let trajectory = record_trajectory.then(|| {
        sample_times
            .iter()
            .zip(&log_p)
            .map(|(&t, &l)| TrajectoryPoint {
                t,
                g: protocol.field_at(t),
                p: l.exp().min(1.0),
            })
            .collect()
    });
    Ok(QuenchResult {
        protocol: *protocol,
        p_gs_final: ln_final.exp().min(1.0),
        ln_p_gs_final: ln_final,
        trajectory,
        norm_drift,
    })
}

/// `ĝ = 1/√τ_Q`, the half-width of the impulse window.
pub fn ghat(tau_q: f64) -> f64 {
    if tau_q < 1.0 {
        log::warn!("ĝ = 1/√τ_Q is a slow-quench estimate; τ_Q = {tau_q} is not slow");
    }
    1.0 / tau_q.sqrt()
}

/// `2 exp(-N const/√τ_Q)`.
pub fn adiabatic_impulse_p_gs(n: usize, tau_q: f64, konst: f64) -> f64 {
    let nf = n as f64;
    if nf < 10.0 * tau_q.sqrt() {
        log::warn!(
            "adiabatic-impulse estimate needs N >> √τ_Q, got N = {n}, √τ_Q = {:.3}",
            tau_q.sqrt()
        );
    }
    2.0 * (-nf * konst / tau_q.sqrt()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponents {
    pub z: f64,
    pub nu: f64,
    pub d: f64,
}

impl CriticalExponents {
    pub const ISING: Self = Self {
        z: 1.0,
        nu: 1.0,
        d: 1.0,
    };

    /// `dν / (1 + zν)`
    pub fn kz_exponent(&self) -> f64 {
        self.d * self.nu / (1.0 + self.z * self.nu)
    }
}

/// `exp(-N const / τ_Q^{dν/(1+zν)})`
pub fn kz_scaling(n: usize, tau_q: f64, exps: CriticalExponents, konst: f64) -> Result<f64> {
    if !(tau_q > 0.0 && exps.z > 0.0 && exps.nu > 0.0 && exps.d > 0.0 && konst > 0.0) {
        return Err(IsingError::InvalidArgument(
            "Kibble-Zurek scaling needs positive arguments".into(),
        ));
    }
    Ok((-(n as f64) * konst / tau_q.powf(exps.kz_exponent())).exp())
}

/// `1 - exp(-2π³τ_Q/N²)`
pub fn adiabatic_finite_size(n: usize, tau_q: f64) -> f64 {
    let pi3 = std::f64::consts::PI.powi(3);
    let nf = n as f64;
    -(-2.0 * pi3 * tau_q / (nf * nf)).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub tau_q: f64,
    pub ln_p_gs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub fit: FitResult,
    pub points: Vec<SweepPoint>,
}

fn sweep(protocols: Vec<QuenchProtocol>, tol: f64) -> Result<Vec<SweepPoint>> {
    protocols
        .par_iter()
        .map(|p| {
            run_quench(p, tol, false).map(|r| SweepPoint {
                n: p.n_spins,
                tau_q: p.tau_q,
                ln_p_gs: r.ln_p_gs_final,
            })
        })
        .collect()
}

/// `ln p_GS` against `N` at fixed `τ_Q`.
pub fn fit_size(
    tau_q: f64,
    sizes: &[usize],
    g_start: f64,
    g_end: f64,
    tol: f64,
) -> Result<SweepFit> {
    let protocols = sizes
        .iter()
        .map(|&n| QuenchProtocol::with_fields(n, tau_q, g_start, g_end))
        .collect::<Result<Vec<_>>>()?;
    let points = sweep(protocols, tol)?;
    let xy: Vec<_> = points.iter().map(|p| (p.n as f64, p.ln_p_gs)).collect();
    Ok(SweepFit {
        fit: linear_fit(&xy)?,
        points,
    })
}

/// `ln p_GS` against `1/√τ_Q` at fixed `N`.
pub fn fit_tau(n: usize, taus: &[f64], g_start: f64, g_end: f64, tol: f64) -> Result<SweepFit> {
    let protocols = taus
        .iter()
        .map(|&t| QuenchProtocol::with_fields(n, t, g_start, g_end))
        .collect::<Result<Vec<_>>>()?;
    let points = sweep(protocols, tol)?;
    let xy: Vec<_> = points
        .iter()
        .map(|p| (1.0 / p.tau_q.sqrt(), p.ln_p_gs))
        .collect();
    Ok(SweepFit {
        fit: linear_fit(&xy)?,
        points,
    })
}
