//! Fidelity susceptibility and finite-size fidelity of the Ising chain.
//!
//! The sector closed forms are evaluated through `x = ln|g|`. Writing
//! `M = N - 1`, both reduce to
//!
//! ```text
//! g²χ⁺ = N [sinh(Mx)/sinh x + M] / (64 cosh²(Nx/2))
//! g²χ⁻ = N [sinh(Mx)/sinh x - M] / (64 sinh²(Nx/2))
//! ```
//!
//! which are even in `x`, finite at `x = 0`, and can be rescaled by `e^{-N|x|}`
//! so that large `N|x|` never overflows. `χ⁻` cancels to `O(x³)/O(x³)` near
//! the critical point and switches to a power series there.

use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};
use crate::model::{self, ground_state_parity, MomentumGrid, ParitySector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiVariant {
    Exact,
    PositiveSector,
    NegativeSector,
    ModeSum,
    ParaAsymptote,
    FerroAsymptote,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiResult {
    pub g: f64,
    pub n: usize,
    pub chi: f64,
    pub variant: ChiVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub g: f64,
    pub delta: f64,
    pub n: usize,
    pub value: f64,
    /// `ln F / N`
    pub log_per_site: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Para,
    Ferro,
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(IsingError::InvalidSize {
            n,
            reason: "at least two spins are required",
        });
    }
    Ok(())
}

fn check_field(g: f64) -> Result<()> {
    if g == 0.0 || !g.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "closed-form susceptibility needs a finite non-zero field, got g = {g}"
        )));
    }
    Ok(())
}

/// `|ln|g||`, using `ln_1p` close to the critical point.
fn log_abs_field(g: f64) -> f64 {
    let a = g.abs();
    if (0.5..=2.0).contains(&a) {
        (a - 1.0).ln_1p().abs()
    } else {
        a.ln().abs()
    }
}

fn sinhc(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.sinh() / z
    }
}

/// `sinh((N-1)x) e^{-Nx} / sinh x` for `x > 0`.
fn scaled_sinh_ratio(nf: f64, x: f64) -> f64 {
    -(-x).exp() * (-2.0 * (nf - 1.0) * x).exp_m1() / (2.0 * x.sinh())
}

/// `g²χ⁺` as a function of `x = |ln|g|| ≥ 0`.
fn reduced_plus(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let m = nf - 1.0;
    if x == 0.0 {
        return nf * m / 32.0;
    }
    let e = (-nf * x).exp();
    let a = scaled_sinh_ratio(nf, x);
    nf / 16.0 * (a + m * e) / ((1.0 + e) * (1.0 + e))
}

/// `g²χ⁻` as a function of `x = |ln|g|| ≥ 0`.
fn reduced_minus(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let m = nf - 1.0;
    if n == 2 {
        // only k = 0, π: no paired modes
        return 0.0;
    }
    let y = m * x;
    if y <= 1.0 {
        // [sinh(Mx) - M sinh x]/y³ = Σ_{j≥1} y^{2j-2}(1 - M^{-2j})/(2j+1)!
        let inv_m2 = 1.0 / (m * m);
        let y2 = y * y;
        let mut series = 0.0;
        let mut ypow = 1.0;
        let mut mpow = inv_m2;
        let mut fact = 6.0;
        for j in 1..40 {
            let term = ypow * (1.0 - mpow) / fact;
            series += term;
            if term.abs() < 1e-18 * series.abs() {
                break;
            }
            ypow *= y2;
            mpow *= inv_m2;
            let j = j as f64;
            fact *= (2.0 * j + 2.0) * (2.0 * j + 3.0);
        }
        let s = sinhc(0.5 * nf * x);
        return m * m * m / (16.0 * nf) * series / (s * s * sinhc(x));
    }
    let e = (-nf * x).exp();
    let a = scaled_sinh_ratio(nf, x);
    nf / 16.0 * (a - m * e) / ((1.0 - e) * (1.0 - e))
}

fn sector_reduced(g: f64, n: usize, sector: ParitySector) -> f64 {
    let x = log_abs_field(g);
    // for g < 0 and odd N the sign of gᴺ flips and the two formulas swap
    let swapped = g < 0.0 && n % 2 == 1;
    match (sector, swapped) {
        (ParitySector::Positive, false) | (ParitySector::Negative, true) => reduced_plus(n, x),
        _ => reduced_minus(n, x),
    }
}

/// Susceptibility summed over the positive-parity momenta, in closed form.
pub fn chi_plus(g: f64, n: usize) -> Result<ChiResult> {
    check_size(n)?;
    check_field(g)?;
    Ok(ChiResult {
        g,
        n,
        chi: sector_reduced(g, n, ParitySector::Positive) / (g * g),
        variant: ChiVariant::PositiveSector,
    })
}

/// Susceptibility summed over the negative-parity momenta, in closed form.
pub fn chi_minus(g: f64, n: usize) -> Result<ChiResult> {
    check_size(n)?;
    check_field(g)?;
    Ok(ChiResult {
        g,
        n,
        chi: sector_reduced(g, n, ParitySector::Negative) / (g * g),
        variant: ChiVariant::NegativeSector,
    })
}

/// Ground-state fidelity susceptibility for any `N ≥ 2` and `g ≠ 0`.
///
/// Equals `χ⁺(|g|)`, which coincides with whichever sector formula the
/// ground-state parity selects.
pub fn chi_exact(g: f64, n: usize) -> Result<ChiResult> {
    check_size(n)?;
    check_field(g)?;
    Ok(ChiResult {
        g,
        n,
        chi: reduced_plus(n, log_abs_field(g)) / (g * g),
        variant: ChiVariant::Exact,
    })
}

/// `χ = ¼ Σ_k sin²k / (g² - 2g cos k + 1)²` over the sector grid.
pub fn chi_mode_sum(g: f64, n: usize, sector: ParitySector) -> Result<ChiResult> {
    let grid = MomentumGrid::new(n, sector)?;
    let chi = 0.25
        * grid
            .paired()
            .map(|k| {
                let trig = k.trig();
                let l2 = trig.lambda_sq(g);
                trig.sin_k * trig.sin_k / (l2 * l2)
            })
            .sum::<f64>();
    Ok(ChiResult {
        g,
        n,
        chi,
        variant: ChiVariant::ModeSum,
    })
}

/// Leading large-`N` behaviour away from the critical point.
pub fn chi_asymptote(g: f64, n: usize, phase: Phase) -> Result<ChiResult> {
    check_size(n)?;
    let g2 = g * g;
    if g2 == 1.0 {
        return Err(IsingError::CriticalDivergence(g));
    }
    let nf = n as f64;
    let (chi, variant) = match phase {
        Phase::Para => {
            if g == 0.0 {
                return Err(IsingError::InvalidArgument(
                    "paramagnetic asymptote is undefined at g = 0".into(),
                ));
            }
            (nf / (16.0 * g2 * (g2 - 1.0)), ChiVariant::ParaAsymptote)
        }
        Phase::Ferro => (nf / (16.0 * (1.0 - g2)), ChiVariant::FerroAsymptote),
    };
    Ok(ChiResult { g, n, chi, variant })
}

/// Sector shared by `g - δ` and `g + δ`, or a mismatch error.
pub(crate) fn common_sector(g_lo: f64, g_hi: f64, n: usize) -> Result<ParitySector> {
    let lo = ground_state_parity(g_lo, n)?;
    let hi = ground_state_parity(g_hi, n)?;
    if lo != hi {
        return Err(IsingError::ParityMismatch { g_lo, g_hi, lo, hi });
    }
    Ok(lo)
}

/// `Σ_k ln cos((θ(g+δ) - θ(g-δ))/2)` over the paired momenta of `grid`.
pub(crate) fn log_fidelity_on(grid: &MomentumGrid, g: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let (g1, g2) = (g - delta, g + delta);
    grid.paired()
        .map(|k| model::log_overlap(g1, g2, 2.0 * delta, k.trig()))
        .sum()
}

/// `F(g, δ) = |⟨g-δ|g+δ⟩| = Π_k cos((θ₊ - θ₋)/2)`, accumulated as a log sum.
pub fn fidelity(g: f64, delta: f64, n: usize) -> Result<FidelityResult> {
    check_size(n)?;
    if !g.is_finite() || !delta.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "non-finite fidelity arguments g = {g}, delta = {delta}"
        )));
    }
    let sector = common_sector(g - delta.abs(), g + delta.abs(), n)?;
    let grid = MomentumGrid::new(n, sector)?;
    let log_sum = log_fidelity_on(&grid, g, delta);
    Ok(FidelityResult {
        g,
        delta,
        n,
        value: log_sum.exp(),
        log_per_site: log_sum / n as f64,
    })
}

/// `χ ≈ (1 - F(g, h))/(2h²)`, optionally Richardson-extrapolated from
/// steps `h` and `h/2`.
pub fn chi_finite_difference(g: f64, n: usize, h: f64, richardson: bool) -> Result<ChiResult> {
    if !(h > 0.0) {
        return Err(IsingError::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let estimate = |h: f64| -> Result<f64> {
        let f = fidelity(g, h, n)?;
        // 1 - F without cancellation
        let one_minus = -(f.log_per_site * n as f64).exp_m1();
        Ok(one_minus / (2.0 * h * h))
    };
    let coarse = estimate(h)?;
    let chi = if richardson {
        (4.0 * estimate(0.5 * h)? - coarse) / 3.0
    } else {
        coarse
    };
    Ok(ChiResult {
        g,
        n,
        chi,
        variant: ChiVariant::FiniteDifference,
    })
}

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// `d ln χ / dx` at `x = ln g` (positive-field ground-state branch).
fn log_chi_slope(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let m = nf - 1.0;
    let p = if x == 0.0 {
        2.0 * m
    } else {
        (m * x).sinh() / x.sinh() + m
    };
    let y = (m + 1.0) * x;
    let dp = if x == 0.0 {
        0.0
    } else if y.abs() <= 1.0 {
        // ½[(M-1)sinh((M+1)x) - (M+1)sinh((M-1)x)] as a series in y = (M+1)x,
        // divided by x³; then P' = that · x / sinhc²(x)
        let ln_r = (-2.0 / (m + 1.0)).ln_1p();
        let y2 = y * y;
        let mut series = 0.0;
        let mut ypow = 1.0;
        let mut fact = 6.0;
        for j in 1..40 {
            let one_minus_r = -(2.0 * j as f64 * ln_r).exp_m1();
            let term = ypow * one_minus_r / fact;
            series += term;
            if term.abs() < 1e-18 * series.abs() {
                break;
            }
            ypow *= y2;
            let j = j as f64;
            fact *= (2.0 * j + 2.0) * (2.0 * j + 3.0);
        }
        let num_over_x3 = 0.5 * (m * m - 1.0) * (m + 1.0) * (m + 1.0) * series;
        let s = sinhc(x);
        num_over_x3 * x / (s * s)
    } else {
        let (sx, cx) = (x.sinh(), x.cosh());
        (m * (m * x).cosh() * sx - (m * x).sinh() * cx) / (sx * sx)
    };
    dp / p - nf * (0.5 * nf * x).tanh() - 2.0
}

/// Distance `1 - g_max` of the susceptibility maximum from `g_c = 1`.
///
/// The stationary point is bracketed on the ferromagnetic side and located
/// by bisection on the analytic derivative of `ln χ`.
pub fn chi_max_location(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(IsingError::InvalidSize {
            n,
            reason: "the susceptibility maximum is defined for N >= 4",
        });
    }
    let nf = n as f64;
    let mut hi = 0.0f64;
    let mut lo = -12.0 / (nf * nf);
    let mut expansions = 0;
    while log_chi_slope(n, lo) <= 0.0 {
        hi = lo;
        lo *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(IsingError::NoBracket { lo, hi: 0.0 });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_chi_slope(n, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(-(0.5 * (lo + hi)).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// Independent oracle: direct mode sum in radians, no shared helpers.
    fn naive_sum(g: f64, n: usize, sector: ParitySector) -> f64 {
        let start = if sector == ParitySector::Positive {
            1
        } else {
            0
        };
        (start..=n)
            .step_by(2)
            .map(|m| m as f64 * std::f64::consts::PI / n as f64)
            .filter(|&k| k > 1e-12 && k < std::f64::consts::PI - 1e-12)
            .map(|k| {
                let d = g * g - 2.0 * g * k.cos() + 1.0;
                0.25 * k.sin().powi(2) / (d * d)
            })
            .sum()
    }

    #[test]
    fn hand_sums() {
        // two terms at k = π/4, 3π/4 for g = 2
        let r2 = 2f64.sqrt();
        let two_terms = 0.125 * ((5.0 - 2.0 * r2).powi(-2) + (5.0 + 2.0 * r2).powi(-2));
        let s = chi_mode_sum(2.0, 4, ParitySector::Positive).unwrap().chi;
        assert!(rel(s, two_terms) < 1e-15);
        assert!((s - 0.028_546_6).abs() < 2e-7, "{s}");
        let s = chi_mode_sum(0.5, 2, ParitySector::Positive).unwrap().chi;
        assert!(rel(s, 0.16) < 1e-15);
        assert!(rel(chi_exact(2.0, 4).unwrap().chi, s_naive(2.0, 4)) < 1e-14);
        assert!(rel(chi_plus(2.0, 4).unwrap().chi, 0.028_546_6) < 1e-5);
        let neg = chi_minus(2.0, 4).unwrap().chi;
        assert!(rel(neg, naive_sum(2.0, 4, ParitySector::Negative)) < 1e-14);
    }

    fn s_naive(g: f64, n: usize) -> f64 {
        naive_sum(g, n, ParitySector::Positive)
    }

    #[test]
    fn critical_values() {
        for n in [2usize, 3, 4, 40, 41, 1000] {
            let nf = n as f64;
            for g in [1.0, -1.0] {
                assert!(rel(chi_exact(g, n).unwrap().chi, nf * (nf - 1.0) / 32.0) < 1e-14);
            }
        }
        assert_eq!(chi_exact(1.0, 40).unwrap().chi, 48.75);
        let ratio = chi_plus(1.0, 40).unwrap().chi / chi_minus(1.0, 40).unwrap().chi;
        assert!(rel(ratio, 3.0 * 40.0 / 38.0) < 1e-13);
    }

    #[test]
    fn odd_chains_break_field_reversal_per_sector() {
        let a = chi_minus(-2.0, 5).unwrap().chi;
        let b = chi_minus(2.0, 5).unwrap().chi;
        assert!(rel(a, b) > 1e-3);
        assert!(rel(a, naive_sum(-2.0, 5, ParitySector::Negative)) < 1e-13);
    }

    #[test]
    fn exact_follows_ground_state_sector() {
        for n in [5usize, 6, 41] {
            for g in [-1.7, -0.4, 0.4, 1.7] {
                let sector = ground_state_parity(g, n).unwrap();
                let exact = chi_exact(g, n).unwrap().chi;
                let sector_value = match sector {
                    ParitySector::Positive => chi_plus(g, n).unwrap().chi,
                    ParitySector::Negative => chi_minus(g, n).unwrap().chi,
                };
                assert!(rel(exact, sector_value) < 1e-14);
            }
        }
    }

    #[test]
    fn paramagnet_freezes() {
        let mut prev = f64::INFINITY;
        for g in [10.0, 100.0, 1000.0] {
            let c = chi_plus(g, 8).unwrap().chi;
            assert!(c < prev);
            prev = c;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn rejects_zero_field() {
        assert!(chi_plus(0.0, 4).is_err());
        assert!(chi_minus(0.0, 4).is_err());
        assert!(chi_exact(0.0, 4).is_err());
        assert!(chi_exact(0.5, 1).is_err());
        // the mode sum itself is regular at g = 0
        assert!(
            rel(
                chi_mode_sum(0.0, 8, ParitySector::Positive).unwrap().chi,
                0.5
            ) < 1e-14
        );
    }

    #[test]
    fn near_zero_field_is_finite() {
        // χ(g → 0) → N/16
        assert!(rel(chi_exact(1e-8, 8).unwrap().chi, 0.5) < 1e-6);
    }

    #[test]
    fn asymptotes() {
        let para = chi_asymptote(2.0, 1000, Phase::Para).unwrap().chi;
        assert!(rel(para, 1000.0 / 192.0) < 1e-15);
        assert!(rel(chi_exact(2.0, 1000).unwrap().chi, para) < 1e-3);
        let ferro = chi_asymptote(0.5, 1000, Phase::Ferro).unwrap().chi;
        assert!(rel(ferro, 1000.0 / 12.0) < 1e-15);
        assert!(rel(chi_exact(0.5, 1000).unwrap().chi, ferro) < 1e-3);
        // g² χ_para(g) = g⁻² χ_ferro(1/g)
        let g = 3.0;
        let a = g * g * chi_asymptote(g, 50, Phase::Para).unwrap().chi;
        let b = chi_asymptote(1.0 / g, 50, Phase::Ferro).unwrap().chi / (g * g);
        assert!(rel(a, b) < 1e-14);
        assert!(chi_asymptote(1.0, 10, Phase::Para).is_err());
        assert!(chi_asymptote(-1.0, 10, Phase::Ferro).is_err());
    }

    #[test]
    fn fidelity_basics() {
        let f = fidelity(0.7, 0.0, 30).unwrap();
        assert_eq!(f.value, 1.0);
        let f = fidelity(1.0, 1e-4, 100).unwrap();
        let expected = 1.0 - 100.0 * 99.0 * 1e-8 / 16.0;
        assert!(
            (f.value - expected).abs() < 1e-7,
            "{} vs {}",
            f.value,
            expected
        );
        assert!(f.value <= 1.0 && f.value > 0.0);
        assert!(matches!(
            fidelity(0.01, 0.05, 7),
            Err(IsingError::ParityMismatch { .. })
        ));
        // even chains never straddle sectors
        assert!(fidelity(0.01, 0.05, 8).is_ok());
    }

    #[test]
    fn finite_difference_examples() {
        let c = chi_finite_difference(1.0, 40, 1e-5, false).unwrap().chi;
        assert!(rel(c, 48.75) < 1e-4);
        let c = chi_finite_difference(2.0, 4, 1e-5, false).unwrap().chi;
        assert!(rel(c, 0.028_546_6) < 1e-5);
        let c = chi_finite_difference(0.5, 2, 1e-5, false).unwrap().chi;
        assert!(rel(c, 0.16) < 1e-5);
        let plain = chi_finite_difference(1.0, 40, 1e-3, false).unwrap().chi;
        let rich = chi_finite_difference(1.0, 40, 1e-3, true).unwrap().chi;
        assert!(rel(rich, 48.75) < rel(plain, 48.75));
        assert!(chi_finite_difference(1.0, 40, 0.0, false).is_err());
    }

    #[test]
    fn maximum_sits_on_ferromagnetic_side() {
        for n in [4usize, 10, 40, 100, 1000] {
            let d = chi_max_location(n).unwrap();
            assert!(d > 0.0);
            // golden-section check on χ itself
            let f = |g: f64| chi_exact(g, n).unwrap().chi;
            let (mut a, mut b) = (1.0 - 30.0 / (n * n) as f64, 1.0);
            let r = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let c = b - r * (b - a);
                let e = a + r * (b - a);
                if f(c) > f(e) {
                    b = e
                } else {
                    a = c
                }
            }
            let golden = 1.0 - 0.5 * (a + b);
            assert!(
                (golden - d).abs() < 1e-7 / n as f64,
                "n = {n}: {golden} vs {d}"
            );
        }
        assert!((chi_max_location(100).unwrap() - 5.94e-4).abs() < 2e-7);
        assert!((chi_max_location(1000).unwrap() - 5.994e-6).abs() < 1e-9);
        assert!(chi_max_location(3).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_mode_sums(g in -4.0f64..4.0, n in 2usize..300) {
            prop_assume!(g.abs() > 1e-3 && (g.abs() - 1.0).abs() > 1e-6);
            for (sector, closed) in [
                (ParitySector::Positive, chi_plus(g, n).unwrap().chi),
                (ParitySector::Negative, chi_minus(g, n).unwrap().chi),
            ] {
                let direct = naive_sum(g, n, sector);
                if direct > 0.0 {
                    prop_assert!(rel(closed, direct) < 1e-11, "{:?} {} vs {}", sector, closed, direct);
                } else {
                    prop_assert!(closed.abs() < 1e-300);
                }
            }
        }

        #[test]
        fn field_reversal_symmetry(g in 0.01f64..20.0, n in 2usize..500) {
            prop_assert_eq!(chi_exact(g, n).unwrap().chi, chi_exact(-g, n).unwrap().chi);
        }

        #[test]
        fn fidelity_in_unit_interval(g in 0.05f64..3.0, d in 0.0f64..0.04, n in 2usize..200) {
            let f = fidelity(g, d, 2 * n).unwrap();
            prop_assert!(f.value >= 0.0 && f.value <= 1.0);
        }
    }
}
