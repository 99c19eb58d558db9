//! Free-fermion description of the periodic transverse-field Ising chain
//! `H = -Σ (σˣᵢσˣᵢ₊₁ + g σᶻᵢ)`.
//!
//! Momenta are kept as integer multiples of π/N and only converted to
//! radians (or to sines and cosines) on demand, with the reductions chosen
//! so that `k = 0` and `k = π` are represented exactly.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};
use crate::quadrature::{self, QuadOptions};

/// Eigenvalue sector of the parity operator `P = Π σᶻᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParitySector {
    /// `P = +1`: antiperiodic fermions, odd multiples of π/N.
    Positive,
    /// `P = -1`: periodic fermions, even multiples of π/N.
    Negative,
}

impl ParitySector {
    pub fn eigenvalue(self) -> i32 {
        match self {
            ParitySector::Positive => 1,
            ParitySector::Negative => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            ParitySector::Positive => ParitySector::Negative,
            ParitySector::Negative => ParitySector::Positive,
        }
    }
}

/// A single allowed momentum `k = multiple · π / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Momentum {
    multiple: usize,
    n_spins: usize,
}

impl Momentum {
    pub fn multiple(&self) -> usize {
        self.multiple
    }

    pub fn radians(&self) -> f64 {
        self.multiple as f64 * PI / self.n_spins as f64
    }

    /// `k = 0` or `k = π`: modes without a `-k` partner.
    pub fn is_unpaired(&self) -> bool {
        self.multiple == 0 || self.multiple == self.n_spins
    }

    pub fn sin(&self) -> f64 {
        let m = self.multiple.min(self.n_spins - self.multiple);
        if m == 0 {
            0.0
        } else {
            (m as f64 * PI / self.n_spins as f64).sin()
        }
    }

    pub fn cos(&self) -> f64 {
        let n = self.n_spins;
        if 2 * self.multiple == n {
            0.0
        } else if 2 * self.multiple < n {
            (self.multiple as f64 * PI / n as f64).cos()
        } else {
            -((n - self.multiple) as f64 * PI / n as f64).cos()
        }
    }

    /// `sin²(k/2)`
    pub fn sin_half_sq(&self) -> f64 {
        let s = (self.multiple as f64 * FRAC_PI_2 / self.n_spins as f64).sin();
        s * s
    }

    /// `cos²(k/2)`
    pub fn cos_half_sq(&self) -> f64 {
        let s = ((self.n_spins - self.multiple) as f64 * FRAC_PI_2 / self.n_spins as f64).sin();
        s * s
    }

    pub(crate) fn trig(&self) -> ModeTrig {
        ModeTrig {
            sin_k: self.sin(),
            sin_half_sq: self.sin_half_sq(),
            cos_half_sq: self.cos_half_sq(),
        }
    }
}

/// The trigonometric data of a momentum that every mode formula needs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeTrig {
    pub sin_k: f64,
    pub sin_half_sq: f64,
    pub cos_half_sq: f64,
}

impl ModeTrig {
    pub fn from_radians(k: f64) -> Self {
        let sh = (0.5 * k).sin();
        let ch = (0.5 * k).cos();
        Self {
            sin_k: k.sin(),
            sin_half_sq: sh * sh,
            cos_half_sq: ch * ch,
        }
    }

    /// `g - cos k`, evaluated without cancellation near `g = ±1`.
    pub fn detuning(&self, g: f64) -> f64 {
        if g >= 0.0 {
            (g - 1.0) + 2.0 * self.sin_half_sq
        } else {
            (g + 1.0) - 2.0 * self.cos_half_sq
        }
    }

    /// `Λ = √(g² - 2g cos k + 1)`
    pub fn lambda(&self, g: f64) -> f64 {
        self.detuning(g).hypot(self.sin_k)
    }

    pub fn lambda_sq(&self, g: f64) -> f64 {
        let a = self.detuning(g);
        a * a + self.sin_k * self.sin_k
    }
}

/// Allowed momenta in `[0, π]` of one parity sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumGrid {
    n_spins: usize,
    sector: ParitySector,
    multiples: Vec<usize>,
}

impl MomentumGrid {
    pub fn new(n_spins: usize, sector: ParitySector) -> Result<Self> {
        if n_spins < 2 {
            return Err(IsingError::InvalidSize {
                n: n_spins,
                reason: "at least two spins are required",
            });
        }
        let start = match sector {
            ParitySector::Positive => 1,
            ParitySector::Negative => 0,
        };
        let multiples = (start..=n_spins).step_by(2).collect();
        Ok(Self {
            n_spins,
            sector,
            multiples,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn sector(&self) -> ParitySector {
        self.sector
    }

    pub fn multiples(&self) -> &[usize] {
        &self.multiples
    }

    pub fn len(&self) -> usize {
        self.multiples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Momentum> + '_ {
        let n_spins = self.n_spins;
        self.multiples
            .iter()
            .map(move |&multiple| Momentum { multiple, n_spins })
    }

    /// Momenta with `0 < k < π`, the only ones entering overlaps and `χ`.
    pub fn paired(&self) -> impl Iterator<Item = Momentum> + '_ {
        self.iter().filter(|k| !k.is_unpaired())
    }

    pub fn momenta(&self) -> Vec<f64> {
        self.iter().map(|k| k.radians()).collect()
    }
}

pub fn momentum_grid(n: usize, sector: ParitySector) -> Result<MomentumGrid> {
    MomentumGrid::new(n, sector)
}

/// Bogoliubov angle `θ_k` and single-quasiparticle energy `2Λ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAngle {
    pub g: f64,
    pub k: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    pub energy: f64,
}

impl ModeAngle {
    pub fn theta(&self) -> f64 {
        self.sin_theta.atan2(self.cos_theta)
    }

    pub(crate) fn from_trig(g: f64, k: f64, trig: ModeTrig) -> Result<Self> {
        let a = trig.detuning(g);
        let lambda = a.hypot(trig.sin_k);
        if lambda <= 8.0 * f64::EPSILON * (1.0 + g.abs()) {
            return Err(IsingError::DegenerateMode { g, k });
        }
        Ok(Self {
            g,
            k,
            sin_theta: trig.sin_k / lambda,
            cos_theta: a / lambda,
            energy: 2.0 * lambda,
        })
    }

    pub fn on_grid(g: f64, k: &Momentum) -> Result<Self> {
        Self::from_trig(g, k.radians(), k.trig())
    }
}

pub fn bogoliubov_angle(g: f64, k: f64) -> Result<ModeAngle> {
    if !g.is_finite() || !k.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "non-finite mode parameters g = {g}, k = {k}"
        )));
    }
    ModeAngle::from_trig(g, k, ModeTrig::from_radians(k))
}

/// `ξ(g) = 1 / |ln |g||` of the infinite chain.
pub fn correlation_length(g: f64) -> Result<f64> {
    if g == 0.0 {
        return Err(IsingError::InvalidArgument(
            "correlation length is undefined at g = 0".into(),
        ));
    }
    let log = g.abs().ln();
    if log == 0.0 {
        return Err(IsingError::CriticalDivergence(g));
    }
    Ok(1.0 / log.abs())
}

/// Parity of the finite-chain ground state: `sign(ε⁻ - ε⁺) = sign(gᴺ)`.
pub fn ground_state_parity(g: f64, n: usize) -> Result<ParitySector> {
    if n < 2 {
        return Err(IsingError::InvalidSize {
            n,
            reason: "at least two spins are required",
        });
    }
    if n.is_multiple_of(2) || g > 0.0 {
        Ok(ParitySector::Positive)
    } else if g < 0.0 {
        Ok(ParitySector::Negative)
    } else {
        Err(IsingError::AmbiguousParity(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Ferro,
    Para,
    Critical,
}

impl Regime {
    pub fn of(g: f64) -> Self {
        let a = g.abs();
        if a < 1.0 {
            Regime::Ferro
        } else if a > 1.0 {
            Regime::Para
        } else {
            Regime::Critical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Ferro => "ferro",
            Regime::Para => "para",
            Regime::Critical => "critical",
        }
    }
}

/// `ε⁻ - ε⁺`, the splitting between the lowest levels of the two sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub value: f64,
    pub regime: Regime,
    pub quadrature_error: f64,
}

/// Parity gap from its integral representation.
///
/// The integrals over `t ∈ [0, 1]` are mapped to `φ ∈ [0, π/2]` with
/// `t = sin²φ`, which absorbs both the `√(1-t)` and the `t^{N-3/2}` endpoint
/// behaviour into a smooth integrand.
pub fn parity_gap(g: f64, n: usize, tol: f64) -> Result<GapResult> {
    if n < 2 {
        return Err(IsingError::InvalidSize {
            n,
            reason: "at least two spins are required",
        });
    }
    if !(tol > 0.0) {
        return Err(IsingError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let nf = n as f64;
    let sign = if g < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let regime = Regime::of(g);
    let ag = g.abs();
    if regime == Regime::Critical {
        return Ok(GapResult {
            value: sign * 2.0 * (PI / (4.0 * nf)).tan(),
            regime,
            quadrature_error: 0.0,
        });
    }
    if g == 0.0 {
        // gᴺ prefactor vanishes while the integral stays finite
        return Ok(GapResult {
            value: 0.0,
            regime,
            quadrature_error: 0.0,
        });
    }

    let pow = 2 * n as i32 - 2;
    let prefactor_8n = 8.0 * nf / PI;
    let (prefactor, offset) = match regime {
        Regime::Ferro => (sign * ag.powi(n as i32), 0.0),
        _ => (sign * ag.powi(-(n as i32)), sign * (2.0 * ag - 2.0)),
    };
    let g2 = ag * ag;
    let integrand = |phi: f64| -> f64 {
        let (s, c) = phi.sin_cos();
        let t = s * s;
        let c2 = c * c;
        let (root, denom) = match regime {
            // 1 - g²t = cos²φ + (1 - g²) sin²φ
            Regime::Ferro => (
                (c2 + (1.0 - g2) * t).sqrt(),
                -(2.0 * nf * (ag * t).ln()).exp_m1(),
            ),
            // g² - t = cos²φ + (g² - 1)
            _ => (
                (c2 + (g2 - 1.0)).sqrt(),
                -(2.0 * nf * (t / ag).ln()).exp_m1(),
            ),
        };
        if t == 0.0 {
            return 0.0;
        }
        prefactor_8n * s.powi(pow) * c2 * root / denom
    };

    let mut points = vec![0.0];
    let knee = FRAC_PI_2 - 4.0 / nf.sqrt();
    if knee > 0.1 {
        points.push(knee);
    }
    points.push(FRAC_PI_2);
    let opts = QuadOptions {
        abs_tol: tol / prefactor.abs(),
        rel_tol: 1e-14,
        max_intervals: 4000,
    };
    let est = quadrature::integrate(integrand, &points, opts)?;
    let quadrature_error = est.error * prefactor.abs();
    if quadrature_error > tol {
        return Err(IsingError::Quadrature {
            achieved: quadrature_error,
            requested: tol,
        });
    }
    Ok(GapResult {
        value: offset + prefactor * est.value,
        regime,
        quadrature_error,
    })
}

/// Lowest energy of `H(g)` restricted to one parity sector.
///
/// Paired modes contribute `-2 cos k - 2Λ_k`; the unpaired `k = 0, π` modes
/// contribute `-g` when empty and `2(g - cos k)` more when filled. The total
/// fermion number must be even (odd) in the positive (negative) sector, so
/// the cheapest parity-fixing excitation is added when needed.
pub fn sector_ground_energy(g: f64, n: usize, sector: ParitySector) -> Result<f64> {
    let grid = MomentumGrid::new(n, sector)?;
    let mut base = 0.0;
    let mut costs = Vec::with_capacity(2 * grid.len());
    for k in grid.iter() {
        if k.is_unpaired() {
            base -= g;
            costs.push(2.0 * (g - k.cos()));
        } else {
            let lambda = k.trig().lambda(g);
            base += -2.0 * k.cos() - 2.0 * lambda;
            costs.push(2.0 * lambda);
            costs.push(2.0 * lambda);
        }
    }
    let negatives: Vec<f64> = costs.iter().copied().filter(|&c| c < 0.0).collect();
    let mut energy = base + negatives.iter().sum::<f64>();
    let want_odd = sector == ParitySector::Negative;
    if (negatives.len() % 2 == 1) != want_odd {
        let add = costs
            .iter()
            .copied()
            .filter(|&c| c >= 0.0)
            .fold(f64::INFINITY, f64::min);
        let drop = negatives.iter().map(|c| -c).fold(f64::INFINITY, f64::min);
        energy += add.min(drop);
    }
    Ok(energy)
}

/// `(cos θ/2, sin θ/2, Λ)`, both half-angle terms free of cancellation.
pub(crate) fn half_angle(g: f64, trig: ModeTrig) -> (f64, f64, f64) {
    let a = trig.detuning(g);
    let lambda = a.hypot(trig.sin_k);
    let s2 = trig.sin_k * trig.sin_k;
    let (c_sq, s_sq) = if a >= 0.0 {
        let c_sq = (lambda + a) / (2.0 * lambda);
        (c_sq, s2 / (2.0 * lambda * (lambda + a)))
    } else {
        let s_sq = (lambda - a) / (2.0 * lambda);
        (s2 / (2.0 * lambda * (lambda - a)), s_sq)
    };
    (c_sq.sqrt(), s_sq.sqrt(), lambda)
}

/// `ln cos((θ(g₂) - θ(g₁))/2)` for one mode, with `dg = g₂ - g₁` supplied
/// separately so that small shifts do not lose digits.
pub(crate) fn log_overlap(g1: f64, g2: f64, dg: f64, trig: ModeTrig) -> f64 {
    let half = |g: f64| half_angle(g, trig);
    let (c1, s1, l1) = half(g1);
    let (c2, s2, l2) = half(g2);
    let cos_half = c1 * c2 + s1 * s2;
    // sin(θ₂ - θ₁) = sin k (a₁ - a₂)/(Λ₁Λ₂) and a₁ - a₂ = -dg
    let sin_full = -trig.sin_k * dg / (l1 * l2);
    let sin_half = sin_full / (2.0 * cos_half);
    let sin_half_sq = sin_half * sin_half;
    if sin_half_sq < 0.5 {
        0.5 * (-sin_half_sq).ln_1p()
    } else {
        cos_half.ln()
    }
}

/// [`log_overlap`] on a continuous momentum, for integrals over `k`.
pub fn log_overlap_at(g1: f64, g2: f64, k: f64) -> f64 {
    log_overlap(g1, g2, g2 - g1, ModeTrig::from_radians(k))
}
