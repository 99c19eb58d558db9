use std::path::Path;

use ising_fidelity::*;
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit, emit_json, float, Format, Row};
use crate::Ramp;

/// `steps` evenly spaced values from `min` to `max`; `max` is hit exactly.
pub fn linspace(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() {
        return Err(CliError::Usage("range bounds must be finite".into()));
    }
    if min > max {
        return Err(CliError::Usage(format!(
            "range minimum {min} exceeds maximum {max}"
        )));
    }
    Ok(match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let last = steps - 1;
            (0..steps)
                .map(|j| {
                    if j == last {
                        max
                    } else {
                        min + (max - min) * j as f64 / last as f64
                    }
                })
                .collect()
        }
    })
}

/// Evaluates `f` on every input in parallel, keeping input order.
fn sweep<T: Sync, R: Send>(
    inputs: &[T],
    f: impl Fn(&T) -> Result<R> + Sync + Send,
) -> CliResult<Vec<R>> {
    Ok(inputs.par_iter().map(f).collect::<Result<Vec<_>>>()?)
}

#[derive(Serialize)]
pub struct ChiRow {
    g: f64,
    n: usize,
    chi_exact: f64,
    chi_plus: f64,
    chi_minus: f64,
}

impl Row for ChiRow {
    const HEADER: &'static [&'static str] = &["g", "n", "chi_exact", "chi_plus", "chi_minus"];
    fn cells(&self) -> Vec<String> {
        vec![
            float(self.g),
            self.n.to_string(),
            float(self.chi_exact),
            float(self.chi_plus),
            float(self.chi_minus),
        ]
    }
}

pub fn chi(
    n: usize,
    g_min: f64,
    g_max: f64,
    steps: usize,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let gs = linspace(g_min, g_max, steps)?;
    let rows = sweep(&gs, |&g| {
        Ok(ChiRow {
            g,
            n,
            chi_exact: chi_exact(g, n)?.chi,
            chi_plus: chi_plus(g, n)?.chi,
            chi_minus: chi_minus(g, n)?.chi,
        })
    })?;
    emit(&rows, format, out)
}

#[derive(Serialize)]
pub struct FidelityRow {
    g: f64,
    delta: f64,
    n: usize,
    #[serde(rename = "F")]
    f: f64,
    #[serde(rename = "lnF_per_site")]
    ln_f_per_site: f64,
}

impl Row for FidelityRow {
    const HEADER: &'static [&'static str] = &["g", "delta", "n", "F", "lnF_per_site"];
    fn cells(&self) -> Vec<String> {
        vec![
            float(self.g),
            float(self.delta),
            self.n.to_string(),
            float(self.f),
            float(self.ln_f_per_site),
        ]
    }
}

#[allow(clippy::too_many_arguments)]
pub fn fidelity(
    n: usize,
    delta: f64,
    g_min: f64,
    g_max: f64,
    steps: usize,
    threshold: f64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let onset = thermo_onset(n, delta, threshold);
    if !onset.reached {
        warn!(
            "N|delta| = {} is below {threshold}; per-site values are not in the thermodynamic regime",
            onset.ratio
        );
    }
    let gs = linspace(g_min, g_max, steps)?;
    let rows = sweep(&gs, |&g| {
        let f = ising_fidelity::fidelity(g, delta, n)?;
        Ok(FidelityRow {
            g,
            delta,
            n,
            f: f.value,
            ln_f_per_site: f.log_per_site,
        })
    })?;
    emit(&rows, format, out)
}

#[derive(Serialize)]
pub struct ScalingRow {
    c: f64,
    #[serde(rename = "A")]
    a: f64,
}

impl Row for ScalingRow {
    const HEADER: &'static [&'static str] = &["c", "A"];
    fn cells(&self) -> Vec<String> {
        vec![float(self.c), float(self.a)]
    }
}

pub fn scaling(
    c_min: f64,
    c_max: f64,
    steps: usize,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let cs = linspace(c_min, c_max, steps)?;
    let rows = sweep(&cs, |&c| {
        Ok(ScalingRow {
            c,
            a: scaling_a(c)?.a_value,
        })
    })?;
    emit(&rows, format, out)
}

#[derive(Serialize)]
pub struct GapRow {
    g: f64,
    n: usize,
    gap: f64,
    regime: &'static str,
}

impl Row for GapRow {
    const HEADER: &'static [&'static str] = &["g", "n", "gap", "regime"];
    fn cells(&self) -> Vec<String> {
        vec![
            float(self.g),
            self.n.to_string(),
            float(self.gap),
            self.regime.to_string(),
        ]
    }
}

#[allow(clippy::too_many_arguments)]
pub fn gap(
    n: usize,
    g_min: f64,
    g_max: f64,
    steps: usize,
    tol: f64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let gs = linspace(g_min, g_max, steps)?;
    let rows = sweep(&gs, |&g| {
        let r = parity_gap(g, n, tol)?;
        Ok(GapRow {
            g,
            n,
            gap: r.value,
            regime: r.regime.as_str(),
        })
    })?;
    emit(&rows, format, out)
}

#[derive(Serialize)]
pub struct TrajectoryRow {
    t: f64,
    g: f64,
    p_instantaneous: f64,
}

impl Row for TrajectoryRow {
    const HEADER: &'static [&'static str] = &["t", "g", "p_instantaneous"];
    fn cells(&self) -> Vec<String> {
        vec![float(self.t), float(self.g), float(self.p_instantaneous)]
    }
}

pub fn quench(
    n: usize,
    tau_q: f64,
    ramp: Ramp,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let protocol = QuenchProtocol::with_fields(n, tau_q, ramp.g_start, ramp.g_end)?;
    let result = run_quench(&protocol, ramp.tol, true)?;
    let rows: Vec<TrajectoryRow> = result
        .trajectory
        .unwrap_or_default()
        .into_iter()
        .map(|p| TrajectoryRow {
            t: p.t,
            g: p.g,
            p_instantaneous: p.p,
        })
        .collect();
    emit(&rows, format, out)
}

#[derive(Serialize)]
struct FitReport {
    #[serde(flatten)]
    fit: FitResult,
    points: Vec<SweepPoint>,
}

#[derive(Serialize)]
struct PointRow(SweepPoint);

impl Row for PointRow {
    const HEADER: &'static [&'static str] = &["n", "tau_q", "ln_p_gs"];
    fn cells(&self) -> Vec<String> {
        vec![
            self.0.n.to_string(),
            float(self.0.tau_q),
            float(self.0.ln_p_gs),
        ]
    }
}

fn emit_fit(sweep: SweepFit, format: Option<Format>, out: Option<&Path>) -> CliResult<()> {
    match format {
        Some(Format::Csv) => {
            let rows: Vec<PointRow> = sweep.points.into_iter().map(PointRow).collect();
            emit(&rows, Format::Csv, out)
        }
        _ => emit_json(
            &FitReport {
                fit: sweep.fit,
                points: sweep.points,
            },
            out,
        ),
    }
}

pub fn fit_size(
    tau_q: f64,
    n_min: usize,
    n_max: usize,
    n_step: usize,
    ramp: Ramp,
    format: Option<Format>,
    out: Option<&Path>,
) -> CliResult<()> {
    if n_step == 0 || n_min > n_max {
        return Err(CliError::Usage(
            "size range needs n-min <= n-max and n-step >= 1".into(),
        ));
    }
    let sizes: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
    let sweep = ising_fidelity::fit_size(tau_q, &sizes, ramp.g_start, ramp.g_end, ramp.tol)?;
    emit_fit(sweep, format, out)
}

pub fn fit_tau(
    n: usize,
    tau_min: f64,
    tau_max: f64,
    tau_step: f64,
    ramp: Ramp,
    format: Option<Format>,
    out: Option<&Path>,
) -> CliResult<()> {
    if !(tau_step > 0.0) || !(tau_min <= tau_max) {
        return Err(CliError::Usage(
            "ramp-time range needs tau-min <= tau-max and tau-step > 0".into(),
        ));
    }
    let count = ((tau_max - tau_min) / tau_step + 1e-9).floor() as usize + 1;
    let taus: Vec<f64> = (0..count).map(|j| tau_min + tau_step * j as f64).collect();
    let sweep = ising_fidelity::fit_tau(n, &taus, ramp.g_start, ramp.g_end, ramp.tol)?;
    emit_fit(sweep, format, out)
}

#[derive(Serialize)]
pub struct OracleRow {
    quantity: &'static str,
    free_fermion: f64,
    dense: f64,
    abs_diff: f64,
}

impl OracleRow {
    fn new(quantity: &'static str, free_fermion: f64, dense: f64) -> Self {
        Self {
            quantity,
            free_fermion,
            dense,
            abs_diff: (free_fermion - dense).abs(),
        }
    }
}

impl Row for OracleRow {
    const HEADER: &'static [&'static str] = &["quantity", "free_fermion", "dense", "abs_diff"];
    fn cells(&self) -> Vec<String> {
        vec![
            self.quantity.to_string(),
            float(self.free_fermion),
            float(self.dense),
            float(self.abs_diff),
        ]
    }
}

#[allow(clippy::too_many_arguments)]
pub fn oracle(
    n: usize,
    g: f64,
    delta: f64,
    tau_q: Option<f64>,
    ramp: Ramp,
    oracle_tol: f64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut rows = Vec::new();
    for (name, sector) in [
        ("energy_positive", ParitySector::Positive),
        ("energy_negative", ParitySector::Negative),
    ] {
        rows.push(OracleRow::new(
            name,
            sector_ground_energy(g, n, sector)?,
            oracle_sector_energy(g, n, sector)?,
        ));
    }
    rows.push(OracleRow::new(
        "parity_gap",
        parity_gap(g, n, 1e-12)?.value,
        oracle_parity_gap(g, n)?,
    ));
    if delta != 0.0 {
        rows.push(OracleRow::new(
            "fidelity",
            ising_fidelity::fidelity(g, delta, n)?.value,
            oracle_fidelity(g, delta, n)?,
        ));
    }
    if let Some(tau) = tau_q {
        let protocol = QuenchProtocol::with_fields(n, tau, ramp.g_start, ramp.g_end)?;
        rows.push(OracleRow::new(
            "quench_p_gs",
            run_quench(&protocol, ramp.tol, false)?.p_gs_final,
            oracle_quench(&protocol, oracle_tol)?,
        ));
    }
    emit(&rows, format, out)
}
