//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are square, row-major and owned by value. The eigensolver is a
//! cyclic complex Jacobi iteration, which is accurate to a few ulps for the
//! dimensions this crate deals with (two qubits, occasionally a few more).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Relative tolerance on ||A - A^H||_F accepted by `hermitian_eig`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLIP_TOL, 0)` are treated as round-off and clamped.
pub const PSD_CLIP_TOL: f64 = 1e-10;
/// Jacobi convergence: off-diagonal Frobenius norm relative to ||A||_F.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues below `NULL_EIG_FACTOR * eps * max(1, lambda_max)` are numerically zero.
const NULL_EIG_FACTOR: f64 = 64.0;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries, rejecting non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape { expected: dim * dim, got: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / dim, col: k % dim });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<Complex> = diag.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// The projector |psi><psi|.
    pub fn projector(psi: &[Complex]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let n = self.dim;
        Ok((0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Kronecker product; the index of `self` varies slowest.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self[(i, j)];
                for k in 0..nb {
                    for l in 0..nb {
                        out.data[(i * nb + k) * n + (j * nb + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// (A + A^H) / 2.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_defect() <= rel_tol * self.frobenius_norm()
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_defect();
        let tolerance = HERMITICITY_TOL * self.frobenius_norm();
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        Ok(())
    }

    pub fn hermitian_eig(&self) -> Result<HermitianEigensystem> {
        hermitian_eig(self)
    }

    pub fn psd_sqrt(&self) -> Result<Self> {
        psd_sqrt(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::mat_mul`] for a fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mat_mul(rhs).expect("dimension mismatch in mul")
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mat_mul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn trace(a: &ComplexMatrix) -> Complex {
    a.trace()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, vec![ZERO, -I, I, ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// Eigen-decomposition `A = V diag(eigenvalues) V^H` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigensystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V diag(f(lambda)) V^H.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> Complex) -> ComplexMatrix {
        let d: Vec<Complex> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.from_eigenbasis_diag(&d)
    }

    /// V diag(d) V^H.
    pub fn from_eigenbasis_diag(&self, d: &[Complex]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * d[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    /// V^H A V: the matrix elements <E|A|E'>.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(&v.adjoint() * a) * v
    }

    /// V A V^H, inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(v * a) * &v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| Complex::new(l, 0.0))
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
pub fn hermitian_eig(input: &ComplexMatrix) -> Result<HermitianEigensystem> {
    input.check_hermitian()?;
    let n = input.dim();
    let norm = input.frobenius_norm();
    let mut a = input.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_TOL * norm;

    let mut converged = off_diagonal_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: off_diagonal_norm(&a) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]).then(x.cmp(&y)));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }

    // Degenerate clusters: re-orthonormalize in ascending column order.
    let cluster_tol = 1e-12 * norm.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt_columns(&mut vectors, start, end);
        }
        start = end;
    }
    for col in 0..n {
        fix_phase(&mut vectors, col);
    }

    Ok(HermitianEigensystem { eigenvalues, eigenvectors: vectors })
}

/// One two-sided rotation zeroing `a[p][q]`: A <- U^H A U, V <- V U.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    let u_pp = Complex::new(c, 0.0);
    let u_pq = Complex::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

fn gram_schmidt_columns(v: &mut ComplexMatrix, start: usize, end: usize) {
    let n = v.dim();
    for col in start..end {
        for prev in start..col {
            let proj: Complex = (0..n).map(|i| v[(i, prev)].conj() * v[(i, col)]).sum();
            for i in 0..n {
                let d = proj * v[(i, prev)];
                v[(i, col)] -= d;
            }
        }
        let norm = (0..n).map(|i| v[(i, col)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            v[(i, col)] /= norm;
        }
    }
}

/// Rotates column `col` so its first non-negligible component is real positive.
fn fix_phase(v: &mut ComplexMatrix, col: usize) {
    let n = v.dim();
    let Some(k) = (0..n).find(|&i| v[(i, col)].norm() > 1e-8) else {
        return;
    };
    let z = v[(k, col)];
    let rot = z.conj() / z.norm();
    for i in 0..n {
        v[(i, col)] *= rot;
    }
}

/// Clamps an eigenvalue of a PSD matrix; `scale` is the largest eigenvalue.
pub(crate) fn clamp_psd_eigenvalue(lambda: f64, scale: f64) -> Result<f64> {
    if lambda < -PSD_CLIP_TOL {
        return Err(Error::NotPsd { eigenvalue: lambda, tolerance: PSD_CLIP_TOL });
    }
    let null_tol = NULL_EIG_FACTOR * f64::EPSILON * scale.max(1.0);
    Ok(if lambda <= null_tol { 0.0 } else { lambda })
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-PSD_CLIP_TOL, 0)` are clamped to zero, as are positive
/// eigenvalues at the round-off floor of the decomposition.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let roots = eig
        .eigenvalues
        .iter()
        .map(|&l| clamp_psd_eigenvalue(l, scale).map(|l| Complex::new(l.sqrt(), 0.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.from_eigenbasis_diag(&roots).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "max diff {d:e} > {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn products_of_involutions() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(mat_mul(&i2, &i2).unwrap(), i2);
        let sy = pauli_y();
        assert_close(&mat_mul(&sy, &sy).unwrap(), &i2, 0.0);
        let yy = kron(&sy, &sy);
        assert_close(&mat_mul(&yy, &yy).unwrap(), &ComplexMatrix::identity(4), 0.0);
    }

    #[test]
    fn mat_mul_rejects_mismatch() {
        let e = mat_mul(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4)).unwrap_err();
        assert_eq!(e, Error::DimensionMismatch { expected: 2, got: 4 });
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
        assert_eq!(adjoint(&pauli_y()), pauli_y());
        let d = ComplexMatrix::from_diag(&[I, -I]);
        assert_eq!(adjoint(&d), ComplexMatrix::from_diag(&[-I, I]));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&ComplexMatrix::identity(4)), Complex::new(4.0, 0.0));
        assert_eq!(trace(&pauli_y()), ZERO);
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        // Hand expansion of sigma_y (x) sigma_y: anti-diagonal (-1, 1, 1, -1).
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 3)] = Complex::new(-1.0, 0.0);
        expected[(1, 2)] = ONE;
        expected[(2, 1)] = ONE;
        expected[(3, 0)] = Complex::new(-1.0, 0.0);
        assert_eq!(kron(&pauli_y(), &pauli_y()), expected);

        let up = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(kron(&up, &i2), ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn eig_simple() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = hermitian_eig(&pauli_y()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert_close(&e.reconstruct(), &pauli_y(), 1e-15);
    }

    #[test]
    fn eig_two_spin_hamiltonian() {
        // J = Omega = 1: symmetric sector {|uu>+|dd>, |ud>+|du>} gives -/+ sqrt(2),
        // |uu>-|dd> gives -1, singlet gives +1.
        let h = ComplexMatrix::from_real(
            4,
            &[-1.0, 0.5, 0.5, 0.0, 0.5, 1.0, 0.0, 0.5, 0.5, 0.0, 1.0, 0.5, 0.0, 0.5, 0.5, -1.0],
        )
        .unwrap();
        let e = hermitian_eig(&h).unwrap();
        let s2 = 2f64.sqrt();
        for (got, want) in e.eigenvalues.iter().zip([-s2, -1.0, 1.0, s2]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_is_deterministic() {
        let h = &kron(&pauli_x(), &pauli_z()) + &kron(&pauli_y(), &pauli_y());
        assert_eq!(hermitian_eig(&h).unwrap(), hermitian_eig(&h).unwrap());
    }

    #[test]
    fn psd_sqrt_examples() {
        assert_close(&psd_sqrt(&ComplexMatrix::identity(4)).unwrap(), &ComplexMatrix::identity(4), 1e-15);
        let a = ComplexMatrix::from_real_diag(&[4.0, 1.0, 0.0, 0.0]);
        assert_close(&psd_sqrt(&a).unwrap(), &ComplexMatrix::from_real_diag(&[2.0, 1.0, 0.0, 0.0]), 1e-15);
    }

    #[test]
    fn psd_sqrt_clips_round_off_but_rejects_negative() {
        let a = ComplexMatrix::from_real_diag(&[1.0, -5e-11]);
        assert_close(&psd_sqrt(&a).unwrap(), &ComplexMatrix::from_real_diag(&[1.0, 0.0]), 0.0);
        let b = ComplexMatrix::from_real_diag(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&b), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn from_vec_validates() {
        assert!(matches!(ComplexMatrix::from_vec(2, vec![ONE; 3]), Err(Error::BadShape { .. })));
        assert!(matches!(ComplexMatrix::from_vec(0, vec![]), Err(Error::BadShape { .. })));
        let mut d = vec![ONE; 4];
        d[3] = Complex::new(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::from_vec(2, d).unwrap_err(), Error::NonFinite { row: 1, col: 1 });
    }
}
