//! Correlation and distance measures on density matrices.

use crate::cmatrix::{clamp_psd_eigenvalue, kron, pauli_y, psd_sqrt, Complex, ComplexMatrix};
use crate::error::{Error, Result};
use crate::system::{partial_trace, validate_density_matrix, Keep, SubsystemSplit};

/// Minimum purity accepted as a pure state by [`concurrence_pure`].
pub const PURE_STATE_TOL: f64 = 1e-10;

/// Von Neumann entropy in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue {
    pub nats: f64,
}

/// Wootters concurrence together with the spectrum it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    /// Eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), descending.
    pub mu: [f64; 4],
}

/// Spectrum of a density matrix, clamped to [0, 1].
fn density_spectrum(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    validate_density_matrix(rho)?;
    let eig = rho.hermitian_eig()?;
    eig.eigenvalues.iter().map(|&l| clamp_psd_eigenvalue(l, 1.0).map(|l| l.min(1.0))).collect()
}

/// -tr(rho ln rho), with 0 ln 0 = 0.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<EntropyValue> {
    let nats = density_spectrum(rho)?.into_iter().filter(|&l| l > 0.0).map(|l| -l * l.ln()).sum::<f64>();
    Ok(EntropyValue { nats: nats.max(0.0) })
}

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    validate_density_matrix(rho)?;
    validate_density_matrix(sigma)?;
    let s = psd_sqrt(rho)?;
    let inner = (&(&s * sigma) * &s).hermitian_part();
    let root = psd_sqrt(&inner)?;
    let tr = root.trace().re;
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// <psi|rho|psi> for a normalized pure reference state.
pub fn fidelity_pure(rho: &ComplexMatrix, psi: &[Complex]) -> Result<f64> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm });
    }
    validate_density_matrix(rho)?;
    let rho_psi = rho.mul_vec(psi)?;
    let value: Complex = psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
    debug_assert!(value.im.abs() <= 1e-12, "imaginary expectation value {}", value.im);
    Ok(value.re.clamp(0.0, 1.0))
}

/// tr(rho^2).
pub fn purity(rho: &ComplexMatrix) -> Result<f64> {
    validate_density_matrix(rho)?;
    Ok(purity_unchecked(rho))
}

fn purity_unchecked(rho: &ComplexMatrix) -> f64 {
    // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    Ok(())
}

/// (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_two_qubit(rho)?;
    validate_density_matrix(rho)?;
    let yy = kron(&pauli_y(), &pauli_y());
    Ok((&(&yy * &rho.conj()) * &yy).hermitian_part())
}

/// Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4), with the mu taken from the
/// Hermitian matrix sqrt(sqrt(rho) rho~ sqrt(rho)).
pub fn concurrence(rho: &ComplexMatrix) -> Result<ConcurrenceValue> {
    let flipped = spin_flip(rho)?;
    let s = psd_sqrt(rho)?;
    let sandwich = (&(&s * &flipped) * &s).hermitian_part();
    let r = psd_sqrt(&sandwich)?;
    let eig = r.hermitian_eig()?;
    let mut mu = [0.0; 4];
    for (k, &l) in eig.eigenvalues.iter().rev().enumerate() {
        mu[k] = l.max(0.0);
    }
    let value = (mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceValue { value, mu })
}

/// sqrt(2 (1 - tr rho_A^2)) for a pure two-qubit state.
pub fn concurrence_pure(rho: &ComplexMatrix, split: SubsystemSplit) -> Result<f64> {
    check_two_qubit(rho)?;
    let p = purity(rho)?;
    if p < 1.0 - PURE_STATE_TOL {
        return Err(Error::NotPure { purity: p });
    }
    let reduced = partial_trace(rho, split, Keep::A)?;
    let pa = purity_unchecked(&reduced);
    Ok((2.0 * (1.0 - pa)).max(0.0).sqrt())
}
