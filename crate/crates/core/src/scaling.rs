//! Fidelity per lattice site near the critical point in the thermodynamic
//! limit, and the finite-size remainder left by replacing the mode sum with
//! an integral.
//!
//! With `c = (g - 1)/|δ|`, `c₁ = -4|c|/(|c|-1)²` and `c₂ = (|c|+1)²/(|c|-1)²`:
//!
//! ```text
//! A(c) = 1/4 + |c|K(c₁)/2π + (|c|-1) Im E(c₂)/4π      |c| < 1
//! A(c) = |c|/4 - |c|K(c₁)/2π - (|c|-1) Im E(c₂)/4π    |c| > 1
//! ```
//!
//! Both branches tend to `1/4 - 1/2π` at `|c| = 1`, which is used there.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::{elliptic_e, elliptic_k};
use crate::error::{IsingError, Result};
use crate::model::{log_overlap_at, MomentumGrid};
use crate::quadrature::{integrate, QuadOptions};
use crate::susceptibility::{common_sector, log_fidelity_on};

/// `A(±1)`
pub const A_AT_UNIT_C: f64 = 0.25 - 0.5 / PI;

pub const DEFAULT_ONSET_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub c: f64,
    pub a_value: f64,
    /// Infinite at `|c| = 1`.
    pub c1: f64,
    pub c2: f64,
}

/// Scaling function `A(c)`. Loses relative accuracy like `ε·16|c|²` for very
/// large `|c|`, where [`scaling_a_far`] is the better choice.
pub fn scaling_a(c: f64) -> Result<ScalingPoint> {
    if !c.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "scaling variable must be finite, got c = {c}"
        )));
    }
    let a = c.abs();
    if a == 1.0 {
        return Ok(ScalingPoint {
            c,
            a_value: A_AT_UNIT_C,
            c1: f64::NEG_INFINITY,
            c2: f64::INFINITY,
        });
    }
    let d = a - 1.0;
    let c1 = -4.0 * a / (d * d);
    let c2 = (a + 1.0) * (a + 1.0) / (d * d);
    let k = elliptic_k(c1)?.value.re;
    let im_e = elliptic_e(c2)?.value.im;
    let a_value = if a < 1.0 {
        0.25 + a * k / (2.0 * PI) + d * im_e / (4.0 * PI)
    } else {
        a / 4.0 - a * k / (2.0 * PI) - d * im_e / (4.0 * PI)
    };
    Ok(ScalingPoint { c, a_value, c1, c2 })
}

/// Far-field form `1/(16|c|)`, valid for `|c| ≥ 1`.
pub fn scaling_a_far(c: f64) -> Result<f64> {
    if !(c.abs() >= 1.0) {
        return Err(IsingError::InvalidArgument(format!(
            "far-field scaling form needs |c| >= 1, got c = {c}"
        )));
    }
    Ok(1.0 / (16.0 * c.abs()))
}

/// `ln F / N ≈ -|δ| A((g - 1)/|δ|)`; meaningful for small `|δ|` and `|g - 1|`.
pub fn ln_fidelity_per_site(g: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    let d = delta.abs();
    Ok(-d * scaling_a((g - 1.0) / d)?.a_value)
}

/// `Σ_k ln cos(Δθ_k/2) - (N/2π)∫₀^π ln cos(Δθ(k)/2) dk` over the ground-state
/// sector of `g ± δ`.
pub fn sum_minus_integral(g: f64, delta: f64, n: usize) -> Result<f64> {
    if !g.is_finite() || !delta.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "non-finite arguments g = {g}, delta = {delta}"
        )));
    }
    if delta == 0.0 {
        MomentumGrid::new(n, crate::model::ParitySector::Positive)?;
        return Ok(0.0);
    }
    let sector = common_sector(g - delta, g + delta, n)?;
    let grid = MomentumGrid::new(n, sector)?;
    let sum = log_fidelity_on(&grid, g, delta);

    // the integrand varies on the scales |δ| and |g ∓ 1| near k = 0 and π
    let mut points = vec![0.0, PI];
    let d = delta.abs();
    for scale in [d, (g - 1.0).abs(), (g + 1.0).abs()] {
        if scale == 0.0 {
            continue;
        }
        let mut s = scale / 64.0;
        while s < 1.0 {
            points.push(s);
            points.push(PI - s);
            s *= 4.0;
        }
    }
    points.retain(|p| (0.0..=PI).contains(p));
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let (g1, g2) = (g - delta, g + delta);
    let est = integrate(
        |k| log_overlap_at(g1, g2, k),
        &points,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        },
    )?;
    Ok(sum - n as f64 / (2.0 * PI) * est.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetCheck {
    /// `N|δ|`
    pub ratio: f64,
    pub reached: bool,
}

/// Whether `N|δ|` reaches `threshold`, the thermodynamic-limit condition.
pub fn thermo_onset(n: usize, delta: f64, threshold: f64) -> OnsetCheck {
    let ratio = n as f64 * delta.abs();
    OnsetCheck {
        ratio,
        reached: ratio >= threshold,
    }
}
