//! Brute-force reference results from the full `2ᴺ`-dimensional spin chain
//!
//! ```text
//! H = -Σᵢ (σˣᵢ σˣᵢ₊₁ + g σᶻᵢ),   σ_{N+1} ≡ σ_1
//! ```
//!
//! diagonalized in the two eigenspaces of `P = Πᵢ σᶻᵢ`. Basis state `s` has
//! spin `i` down when bit `i` of `s` is set.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{IsingError, Result};
use crate::model::ParitySector;
use crate::ode::{solve, OdeOptions};
use crate::quench::QuenchProtocol;

pub const MAX_SPINS: usize = 12;
pub const MAX_QUENCH_SPINS: usize = 10;

fn check_size(n: usize, max: usize) -> Result<()> {
    if n < 2 {
        return Err(IsingError::InvalidSize {
            n,
            reason: "at least two spins are required",
        });
    }
    if n > max {
        return Err(IsingError::InvalidSize {
            n,
            reason: "dense diagonalization is limited to small chains",
        });
    }
    Ok(())
}

fn parity_of(s: usize) -> ParitySector {
    if s.count_ones().is_multiple_of(2) {
        ParitySector::Positive
    } else {
        ParitySector::Negative
    }
}

/// `Σᵢ σᶻᵢ` on basis state `s`.
fn magnetization(s: usize, n: usize) -> f64 {
    n as f64 - 2.0 * s.count_ones() as f64
}

/// Index bookkeeping for one parity block.
struct Block {
    n: usize,
    states: Vec<usize>,
    /// For each block state, the block indices reached by each bond flip.
    flips: Vec<Vec<usize>>,
    mag: Vec<f64>,
}

impl Block {
    fn new(n: usize, sector: ParitySector) -> Self {
        let dim = 1usize << n;
        let states: Vec<usize> = (0..dim).filter(|&s| parity_of(s) == sector).collect();
        let mut position = vec![usize::MAX; dim];
        for (j, &s) in states.iter().enumerate() {
            position[s] = j;
        }
        let flips = states
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|i| {
                        let mask = (1 << i) | (1 << ((i + 1) % n));
                        position[s ^ mask]
                    })
                    .collect()
            })
            .collect();
        let mag = states.iter().map(|&s| magnetization(s, n)).collect();
        Self {
            n,
            states,
            flips,
            mag,
        }
    }

    fn dim(&self) -> usize {
        self.states.len()
    }

    fn matrix(&self, g: f64) -> DMatrix<f64> {
        let d = self.dim();
        let mut h = DMatrix::zeros(d, d);
        for j in 0..d {
            h[(j, j)] = -g * self.mag[j];
            for &m in &self.flips[j] {
                h[(m, j)] -= 1.0;
            }
        }
        h
    }

    fn ground(&self, g: f64) -> (f64, DVector<f64>) {
        let eig = SymmetricEigen::new(self.matrix(g));
        let (idx, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty block");
        (e, eig.eigenvectors.column(idx).into_owned())
    }

    fn ground_energy(&self, g: f64) -> f64 {
        self.matrix(g)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    fn embed(&self, v: &DVector<f64>) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for (j, &s) in self.states.iter().enumerate() {
            out[s] = Complex64::new(v[j], 0.0);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseState {
    pub n_spins: usize,
    pub amplitudes: Vec<Complex64>,
    pub parity: ParitySector,
}

impl DenseState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `⟨P⟩`
    pub fn parity_expectation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(s, a)| parity_of(s).eigenvalue() as f64 * a.norm_sqr())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseGround {
    pub state: DenseState,
    pub energy: f64,
}

/// Lowest eigenpair overall, or within `sector` when given. Without a sector
/// the lower of the two sector ground states is returned, the positive one
/// on an exact tie.
pub fn dense_ground_state(g: f64, n: usize, sector: Option<ParitySector>) -> Result<DenseGround> {
    check_size(n, MAX_SPINS)?;
    if !g.is_finite() {
        return Err(IsingError::InvalidArgument(format!(
            "non-finite field g = {g}"
        )));
    }
    let solve_sector = |sector: ParitySector| {
        let block = Block::new(n, sector);
        let (energy, v) = block.ground(g);
        DenseGround {
            state: DenseState {
                n_spins: n,
                amplitudes: block.embed(&v),
                parity: sector,
            },
            energy,
        }
    };
    Ok(match sector {
        Some(s) => solve_sector(s),
        None => {
            let pos = solve_sector(ParitySector::Positive);
            let neg = solve_sector(ParitySector::Negative);
            if neg.energy < pos.energy {
                neg
            } else {
                pos
            }
        }
    })
}

/// `E₀` of one parity sector.
pub fn oracle_sector_energy(g: f64, n: usize, sector: ParitySector) -> Result<f64> {
    check_size(n, MAX_SPINS)?;
    Ok(Block::new(n, sector).ground_energy(g))
}

/// `|⟨g - δ|g + δ⟩|` from dense ground states.
pub fn oracle_fidelity(g: f64, delta: f64, n: usize) -> Result<f64> {
    let lo = dense_ground_state(g - delta, n, None)?;
    let hi = dense_ground_state(g + delta, n, None)?;
    if lo.state.parity != hi.state.parity {
        return Err(IsingError::ParityMismatch {
            g_lo: g - delta,
            g_hi: g + delta,
            lo: lo.state.parity,
            hi: hi.state.parity,
        });
    }
    Ok(lo.state.inner(&hi.state).norm().min(1.0))
}

/// `E₀(negative) - E₀(positive)`.
pub fn oracle_parity_gap(g: f64, n: usize) -> Result<f64> {
    Ok(oracle_sector_energy(g, n, ParitySector::Negative)?
        - oracle_sector_energy(g, n, ParitySector::Positive)?)
}

/// Dense Hamiltonian on all `2ᴺ` states.
pub fn dense_hamiltonian(g: f64, n: usize) -> Result<DMatrix<f64>> {
    check_size(n, MAX_SPINS)?;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = -g * magnetization(s, n);
        for i in 0..n {
            let t = s ^ ((1 << i) | (1 << ((i + 1) % n)));
            h[(t, s)] -= 1.0;
        }
    }
    Ok(h)
}

/// Frobenius norm of `[H, P]`.
pub fn parity_commutator_norm(g: f64, n: usize) -> Result<f64> {
    let h = dense_hamiltonian(g, n)?;
    let p = DMatrix::from_diagonal(&DVector::from_iterator(
        1 << n,
        (0..1usize << n).map(|s| parity_of(s).eigenvalue() as f64),
    ));
    Ok((&h * &p - &p * &h).norm())
}

/// Integrates the full positive-sector state through the ramp and returns
/// `|⟨gs(g_end)|ψ(t_end)⟩|²`.
pub fn oracle_quench(protocol: &QuenchProtocol, tol: f64) -> Result<f64> {
    protocol.validate()?;
    let n = protocol.n_spins;
    check_size(n, MAX_QUENCH_SPINS)?;
    let block = Block::new(n, ParitySector::Positive);
    let (_, start) = block.ground(protocol.g_start);
    let (_, end) = block.ground(protocol.g_end);
    let y0: Vec<Complex64> = start.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let tau = protocol.tau_q;
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let g = -t / tau;
        for (j, d) in dy.iter_mut().enumerate() {
            let mut acc = y[j] * (-g * block.mag[j]);
            for &m in &block.flips[j] {
                acc -= y[m];
            }
            *d = minus_i * acc;
        }
    };
    let sol = solve(
        rhs,
        protocol.t_start(),
        protocol.t_end(),
        &y0,
        OdeOptions::new(tol),
        &[],
    )?;
    let overlap: Complex64 = end.iter().zip(&sol.y).map(|(&a, b)| b * a).sum();
    Ok(overlap.norm_sqr())
}
