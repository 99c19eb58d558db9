//! Complete elliptic integrals in the parameter convention
//! `K(m) = ∫₀^{π/2} dφ / √(1 - m sin²φ)`, `E(m) = ∫₀^{π/2} √(1 - m sin²φ) dφ`,
//! evaluated through Carlson's symmetric forms `R_F` and `R_D`.
//!
//! For `m > 1` the integrand of `E` turns imaginary beyond
//! `sin²φ = 1/m`; with the principal square root the result is
//!
//! ```text
//! Re E(m) = √m [E(1/m) - (1 - 1/m) K(1/m)]
//! Im E(m) = √m [E(1 - 1/m) - (1/m) K(1 - 1/m)]   (≥ 0)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};

// Duplication stops once all arguments agree to this relative spread; the
// truncated series error then scales like its sixth power.
const SPREAD_TOL: f64 = 5e-4;

/// Carlson's `R_F(x, y, z)` for non-negative arguments, at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < SPREAD_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
    }
}

/// Carlson's `R_D(x, y, z)` for `x, y ≥ 0` (not both zero) and `z > 0`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = 0.2 * (x + y + 3.0 * z);
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < SPREAD_TOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let series = 1.0
                + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 9.0 / 52.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
            return 3.0 * sum + fac * series / (mean * mean.sqrt());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticValue {
    pub parameter: f64,
    pub value: Complex64,
}

fn real_k(m: f64) -> f64 {
    carlson_rf(0.0, 1.0 - m, 1.0)
}

fn real_e(m: f64) -> f64 {
    if m == 1.0 {
        return 1.0;
    }
    let y = 1.0 - m;
    carlson_rf(0.0, y, 1.0) - m / 3.0 * carlson_rd(0.0, y, 1.0)
}

/// `K(m)` on its real branch `m < 1`.
pub fn elliptic_k(m: f64) -> Result<EllipticValue> {
    if m.is_nan() {
        return Err(IsingError::InvalidArgument(
            "K(m) with NaN parameter".into(),
        ));
    }
    if m == 1.0 {
        return Err(IsingError::InvalidArgument(
            "K(m) diverges logarithmically at m = 1".into(),
        ));
    }
    if m > 1.0 {
        return Err(IsingError::InvalidArgument(format!(
            "K(m) is only evaluated on the real branch m < 1, got m = {m}"
        )));
    }
    Ok(EllipticValue {
        parameter: m,
        value: Complex64::new(real_k(m), 0.0),
    })
}

/// `E(m)` for any real `m`, complex for `m > 1` (principal square root).
pub fn elliptic_e(m: f64) -> Result<EllipticValue> {
    if m.is_nan() {
        return Err(IsingError::InvalidArgument(
            "E(m) with NaN parameter".into(),
        ));
    }
    let value = if m <= 1.0 {
        Complex64::new(real_e(m), 0.0)
    } else {
        let inv = 1.0 / m;
        let comp = 1.0 - inv;
        let root = m.sqrt();
        let re = root * (real_e(inv) - comp * real_k(inv));
        let im = root * (real_e(comp) - inv * real_k(comp));
        Complex64::new(re, im)
    };
    Ok(EllipticValue {
        parameter: m,
        value,
    })
}
