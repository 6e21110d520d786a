//! Closed-system dynamics under Poissonian resetting to the initial state.
//!
//! Every producer here works spectrally: the initial density matrix is moved
//! to the energy basis once, each element picks up an exact scalar factor,
//! and the result is rotated back. No time stepping anywhere.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cmatrix::{clamp_psd_eigenvalue, Complex, ComplexMatrix, HermitianEigensystem, ONE};
use crate::error::{Error, Result};

/// Tolerance on |tr(rho0) - 1| and on Hermiticity of rho0 at construction.
pub const STATE_TOL: f64 = 1e-10;
/// Energies closer than this fraction of ||H||_F count as degenerate in the stationary state.
pub const DEGENERACY_REL_TOL: f64 = 1e-9;
/// Below this value of |r + i omega| t the renewal factor uses its first-order series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Hamiltonian, its cached eigensystem, and the initial (= reset) density matrix.
#[derive(Debug, Clone)]
pub struct QuantumSystem {
    hamiltonian: ComplexMatrix,
    eigensystem: HermitianEigensystem,
    rho0: ComplexMatrix,
    rho0_energy: ComplexMatrix,
}

impl QuantumSystem {
    pub fn new(hamiltonian: ComplexMatrix, rho0: ComplexMatrix) -> Result<Self> {
        if hamiltonian.dim() != rho0.dim() {
            return Err(Error::DimensionMismatch { expected: hamiltonian.dim(), got: rho0.dim() });
        }
        let eigensystem = hamiltonian.hermitian_eig()?;
        validate_density_matrix(&rho0)?;
        let rho0_energy = eigensystem.to_eigenbasis(&rho0);
        Ok(Self { hamiltonian, eigensystem, rho0, rho0_energy })
    }

    /// System started (and reset) in the pure state `psi`.
    pub fn with_pure_state(hamiltonian: ComplexMatrix, psi: &[Complex]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(hamiltonian, ComplexMatrix::projector(psi))
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn eigensystem(&self) -> &HermitianEigensystem {
        &self.eigensystem
    }

    pub fn rho0(&self) -> &ComplexMatrix {
        &self.rho0
    }

    /// Elements <E|rho0|E'>.
    pub fn rho0_energy_basis(&self) -> &ComplexMatrix {
        &self.rho0_energy
    }

    pub fn energies(&self) -> &[f64] {
        &self.eigensystem.eigenvalues
    }

    pub fn degeneracy_tol(&self) -> f64 {
        DEGENERACY_REL_TOL * self.hamiltonian.frobenius_norm()
    }

    fn apply_energy_factors(&self, factor: impl Fn(usize, usize) -> Complex) -> ComplexMatrix {
        let n = self.dim();
        let mut m = self.rho0_energy.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= factor(i, j);
            }
        }
        self.eigensystem.from_eigenbasis(&m).hermitian_part()
    }

    /// rho(t) = e^{-iHt} rho0 e^{iHt}.
    pub fn unitary_evolve(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return self.rho0.clone();
        }
        let e = self.energies();
        self.apply_energy_factors(|i, j| phase_factor(e[i] - e[j], t))
    }

    /// rho_r(t) = e^{-rt} rho(t) + r int_0^t e^{-r tau} rho(tau) d tau, evaluated exactly.
    pub fn reset_density(&self, reset: ResetSpec, t: f64) -> ComplexMatrix {
        let r = reset.rate();
        if r == 0.0 {
            return self.unitary_evolve(t);
        }
        if t == 0.0 {
            return self.rho0.clone();
        }
        let e = self.energies();
        self.apply_energy_factors(|i, j| renewal_factor(r, e[i] - e[j], t))
    }

    /// The t -> infinity limit of [`Self::reset_density`]: off-diagonal energy-basis
    /// elements are multiplied by r / (r + i (E - E')), degenerate ones kept intact.
    pub fn ness_density(&self, reset: ResetSpec) -> Result<ComplexMatrix> {
        let r = reset.rate();
        if r == 0.0 {
            return Err(Error::InvalidParameter("stationary state requires a positive reset rate".into()));
        }
        let e = self.energies();
        let tol = self.degeneracy_tol();
        Ok(self.apply_energy_factors(|i, j| {
            let omega = e[i] - e[j];
            if omega.abs() <= tol {
                ONE
            } else {
                let rr = Complex::new(r, 0.0);
                rr / Complex::new(r, omega)
            }
        }))
    }
}

fn phase_factor(omega: f64, t: f64) -> Complex {
    Complex::new(0.0, -omega * t).exp()
}

/// e^{-zt} + r (1 - e^{-zt}) / z with z = r + i omega.
fn renewal_factor(r: f64, omega: f64, t: f64) -> Complex {
    let z = Complex::new(r, omega);
    if z.norm() * t < SERIES_THRESHOLD {
        return ONE - z * t + Complex::new(r * t, 0.0);
    }
    let decay = (-z * t).exp();
    decay + (ONE - decay) * r / z
}

/// Checks Hermiticity, unit trace and positivity of a density matrix.
pub fn validate_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    let deviation = rho.hermiticity_defect();
    if deviation > STATE_TOL {
        return Err(Error::NotHermitian { deviation, tolerance: STATE_TOL });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::BadTrace { trace: tr.re });
    }
    let eig = rho.hermitian_eig()?;
    if let Some(&min) = eig.eigenvalues.first() {
        clamp_psd_eigenvalue(min, 1.0)?;
    }
    Ok(())
}

/// Resetting rate r (inverse time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetSpec {
    rate: f64,
}

impl ResetSpec {
    pub fn new(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidParameter(format!("reset rate must be finite and >= 0, got {rate}")));
        }
        Ok(Self { rate })
    }

    pub fn rate(self) -> f64 {
        self.rate
    }
}

/// Bipartition of a Hilbert space of dimension `dim_a * dim_b`; subsystem A is the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsystemSplit {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl SubsystemSplit {
    pub const TWO_QUBITS: Self = Self { dim_a: 2, dim_b: 2 };

    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidParameter("subsystem dimensions must be positive".into()));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn total(self) -> usize {
        self.dim_a * self.dim_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Reduced density matrix of the kept subsystem: (rho_A)_{ij} = sum_a rho_{(i,a),(j,a)}.
pub fn partial_trace(rho: &ComplexMatrix, split: SubsystemSplit, keep: Keep) -> Result<ComplexMatrix> {
    if rho.dim() != split.total() {
        return Err(Error::DimensionMismatch { expected: split.total(), got: rho.dim() });
    }
    let (da, db) = (split.dim_a, split.dim_b);
    let idx = |i: usize, a: usize| i * db + a;
    let out = match keep {
        Keep::A => {
            let mut m = ComplexMatrix::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    m[(i, j)] = (0..db).map(|a| rho[(idx(i, a), idx(j, a))]).sum();
                }
            }
            m
        }
        Keep::B => {
            let mut m = ComplexMatrix::zeros(db);
            for a in 0..db {
                for b in 0..db {
                    m[(a, b)] = (0..da).map(|i| rho[(idx(i, a), idx(i, b))]).sum();
                }
            }
            m
        }
    };
    Ok(out)
}

/// On-disk form of a Hamiltonian or density matrix:
/// `{"dim": n, "matrix": [[re, im], ...]}` with n*n row-major entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub matrix: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { dim: m.dim(), matrix: m.as_slice().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_vec(self.dim, self.matrix.iter().map(|&[re, im]| Complex::new(re, im)).collect())
    }

    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serializes")
    }
}

/// Loads a Hamiltonian file (must be Hermitian).
pub fn load_hamiltonian(path: &Path) -> std::result::Result<ComplexMatrix, LoadError> {
    let m = load_matrix(path)?;
    m.check_hermitian()?;
    Ok(m)
}

/// Loads a density-matrix file (must be a valid density matrix).
pub fn load_density_matrix(path: &Path) -> std::result::Result<ComplexMatrix, LoadError> {
    let m = load_matrix(path)?;
    validate_density_matrix(&m)?;
    Ok(m)
}

fn load_matrix(path: &Path) -> std::result::Result<ComplexMatrix, LoadError> {
    let text = std::fs::read_to_string(path)?;
    Ok(MatrixFile::parse(&text)?.to_matrix()?)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed matrix file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}
