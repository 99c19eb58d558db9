//! Dormand–Prince 5(4) integrator for complex linear systems, with the
//! fourth-order continuous extension used to sample between steps.

use num_complex::Complex64;

use crate::error::{IsingError, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Used as both the absolute and the relative tolerance.
    pub tol: f64,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            initial_step: None,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub y: Vec<Complex64>,
    /// States at the requested sample times, in order.
    pub samples: Vec<Vec<Complex64>>,
    pub stats: OdeStats,
}

fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(w, k) in terms {
            acc += k[i] * w;
        }
        *o = y[i] + acc * h;
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`.
///
/// `f(t, y, dy)` writes the derivative into `dy`. `sample_times` must be
/// sorted and lie in `[t0, t1]`; each is filled by dense output.
pub fn solve<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[Complex64],
    opts: OdeOptions,
    sample_times: &[f64],
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "integration interval [{t0}, {t1}] must be finite and increasing"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(IsingError::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if sample_times.windows(2).any(|w| w[1] < w[0])
        || sample_times.iter().any(|&s| s < t0 || s > t1)
    {
        return Err(IsingError::InvalidArgument(
            "sample times must be sorted and inside the integration interval".into(),
        ));
    }

    let dim = y0.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut y = y0.to_vec();
    let mut y_new = vec![zero; dim];
    let mut stage = vec![zero; dim];
    let mut k: Vec<Vec<Complex64>> = vec![vec![zero; dim]; 7];
    let mut stats = OdeStats::default();
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    while next_sample < sample_times.len() && sample_times[next_sample] == t0 {
        samples.push(y.clone());
        next_sample += 1;
    }

    let tol = opts.tol;
    let scale = |a: Complex64, b: Complex64| tol + tol * a.norm().max(b.norm());

    f(t0, &y, &mut k[0]);
    stats.evaluations += 1;

    let mut h = match opts.initial_step {
        Some(h) => h,
        None => {
            let d0 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let d1 = k[0].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if d1 > 0.0 {
                (0.01 * (d0.max(tol) / d1)) * tol.powf(0.2)
            } else {
                1e-6 * (t1 - t0)
            }
        }
    }
    .min(t1 - t0);
    let mut t = t0;
    let mut last_rejected = false;

    while t < t1 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(IsingError::StepUnderflow { t, h });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(IsingError::StepUnderflow { t, h });
        }

        let (k1, rest) = k.split_first_mut().unwrap();
        let (k2, rest) = rest.split_first_mut().unwrap();
        let (k3, rest) = rest.split_first_mut().unwrap();
        let (k4, rest) = rest.split_first_mut().unwrap();
        let (k5, rest) = rest.split_first_mut().unwrap();
        let (k6, rest) = rest.split_first_mut().unwrap();
        let k7 = &mut rest[0];

        combine(&mut stage, &y, h, &[(A21, k1)]);
        f(t + C2 * h, &stage, k2);
        combine(&mut stage, &y, h, &[(A31, k1), (A32, k2)]);
        f(t + C3 * h, &stage, k3);
        combine(&mut stage, &y, h, &[(A41, k1), (A42, k2), (A43, k3)]);
        f(t + C4 * h, &stage, k4);
        combine(
            &mut stage,
            &y,
            h,
            &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)],
        );
        f(t + C5 * h, &stage, k5);
        combine(
            &mut stage,
            &y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        );
        f(t + h, &stage, k6);
        combine(
            &mut y_new,
            &y,
            h,
            &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
        );
        let t_new = if last { t1 } else { t + h };
        f(t_new, &y_new, k7);
        stats.evaluations += 6;

        let mut err_sq = 0.0;
        for i in 0..dim {
            let e =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let r = e.norm() / scale(y[i], y_new[i]);
            err_sq += r * r;
        }
        let err = (err_sq / dim.max(1) as f64).sqrt();

        if err <= 1.0 {
            stats.accepted += 1;
            while next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                let theta = (sample_times[next_sample] - t) / h;
                let mut out = vec![zero; dim];
                for i in 0..dim {
                    let r2 = y_new[i] - y[i];
                    let r3 = k1[i] * h - r2;
                    let r4 = r2 - k7[i] * h - r3;
                    let r5 = (k1[i] * D1
                        + k3[i] * D3
                        + k4[i] * D4
                        + k5[i] * D5
                        + k6[i] * D6
                        + k7[i] * D7)
                        * h;
                    out[i] = y[i]
                        + (r2 + (r3 + (r4 + r5 * (1.0 - theta)) * theta) * (1.0 - theta)) * theta;
                }
                samples.push(out);
                next_sample += 1;
            }
            std::mem::swap(&mut y, &mut y_new);
            // first-same-as-last
            k1.copy_from_slice(k7);
            t = t_new;
            let mut factor = (0.9 * err.powf(-0.2)).clamp(0.2, 10.0);
            if last_rejected {
                factor = factor.min(1.0);
            }
            h *= factor;
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }

    Ok(OdeSolution { y, samples, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn harmonic_phase_is_exact() {
        // y' = -i ω y
        let w = 3.0;
        let sol = solve(
            |_, y, dy| dy[0] = c(0.0, -w) * y[0],
            0.0,
            10.0,
            &[c(1.0, 0.0)],
            OdeOptions::new(1e-10),
            &[],
        )
        .unwrap();
        let exact = c(0.0, -w * 10.0).exp();
        assert!((sol.y[0] - exact).norm() < 1e-8, "{:?}", sol.y[0]);
        assert!(sol.stats.accepted > 10);
    }

    #[test]
    fn dense_output_tracks_solution() {
        let times: Vec<f64> = (0..=50).map(|j| 0.1 * j as f64).collect();
        let sol = solve(
            |_, y, dy| dy[0] = c(0.0, -2.0) * y[0],
            0.0,
            5.0,
            &[c(1.0, 0.0)],
            OdeOptions::new(1e-10),
            &times,
        )
        .unwrap();
        assert_eq!(sol.samples.len(), times.len());
        for (t, s) in times.iter().zip(&sol.samples) {
            assert!((s[0] - c(0.0, -2.0 * t).exp()).norm() < 1e-8);
        }
    }

    #[test]
    fn rabi_oscillation_preserves_norm() {
        // two-level system with constant coupling, exact Rabi solution
        let omega = 1.7;
        let sol = solve(
            |_, y, dy| {
                dy[0] = c(0.0, -omega) * y[1];
                dy[1] = c(0.0, -omega) * y[0];
            },
            0.0,
            20.0,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            OdeOptions::new(1e-11),
            &[],
        )
        .unwrap();
        let norm: f64 = sol.y.iter().map(|v| v.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-9);
        assert!((sol.y[0].re - (omega * 20.0).cos()).abs() < 1e-8);
        assert!((sol.y[1].im + (omega * 20.0).sin()).abs() < 1e-8);
    }

    #[test]
    fn time_dependent_right_hand_side() {
        // y' = i t y  →  y = exp(i t²/2)
        let sol = solve(
            |t, y, dy| dy[0] = c(0.0, t) * y[0],
            -3.0,
            2.0,
            &[c(0.0, 4.5).exp()],
            OdeOptions::new(1e-10),
            &[0.0],
        )
        .unwrap();
        assert!((sol.samples[0][0] - c(1.0, 0.0)).norm() < 1e-8);
        assert!((sol.y[0] - c(0.0, 2.0).exp()).norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_setup() {
        let f = |_: f64, _: &[Complex64], _: &mut [Complex64]| {};
        let y0 = [c(1.0, 0.0)];
        assert!(solve(f, 1.0, 0.0, &y0, OdeOptions::new(1e-8), &[]).is_err());
        assert!(solve(f, 0.0, 1.0, &y0, OdeOptions::new(0.0), &[]).is_err());
        assert!(solve(f, 0.0, 1.0, &y0, OdeOptions::new(1e-8), &[2.0]).is_err());
    }

    #[test]
    fn step_budget_exhaustion_is_reported() {
        let opts = OdeOptions {
            max_steps: 3,
            ..OdeOptions::new(1e-12)
        };
        let err = solve(
            |_, y, dy| dy[0] = c(0.0, -50.0) * y[0],
            0.0,
            100.0,
            &[c(1.0, 0.0)],
            opts,
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, IsingError::StepUnderflow { .. }));
    }
}
