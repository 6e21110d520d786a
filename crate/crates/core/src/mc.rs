//! Trajectory-level simulation of the resetting protocol.
//!
//! Each trajectory draws its Poisson reset times from its own ChaCha stream
//! keyed by `(master_seed, trajectory_index)`, evolves the pure state over the
//! segment after the last reset, and contributes |psi><psi| to the ensemble
//! mean. Trajectories are summed in fixed-size chunks whose partial sums are
//! combined in index order, so the estimate does not depend on thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::cmatrix::{Complex, ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::system::QuantumSystem;

const CHUNK: usize = 1024;
/// Required purity of rho0 for trajectory unraveling.
pub const PURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub n_traj: usize,
    pub master_seed: u64,
    pub t_final: f64,
    pub rate: f64,
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_traj == 0 {
            return Err(Error::InvalidParameter("n_traj must be >= 1".into()));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_final must be finite and >= 0, got {}", self.t_final)));
        }
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::InvalidParameter(format!("rate must be finite and >= 0, got {}", self.rate)));
        }
        Ok(())
    }
}

/// Ensemble mean of |psi(t)><psi(t)| with per-entry standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEstimate {
    pub rho_hat: ComplexMatrix,
    /// Standard errors of the real parts, row-major.
    pub stderr_re: Vec<f64>,
    /// Standard errors of the imaginary parts, row-major.
    pub stderr_im: Vec<f64>,
    pub n_traj: usize,
}

impl TrajectoryEstimate {
    /// Largest |estimate - exact| / stderr over real and imaginary parts of all entries.
    /// Differences at the round-off level (<= 1e-12) count as zero.
    pub fn max_standardized_deviation(&self, exact: &ComplexMatrix) -> f64 {
        let z = |diff: f64, se: f64| {
            if diff.abs() <= 1e-12 {
                0.0
            } else if se > 0.0 {
                diff.abs() / se
            } else {
                f64::INFINITY
            }
        };
        self.rho_hat
            .as_slice()
            .iter()
            .zip(exact.as_slice())
            .enumerate()
            .map(|(k, (est, ex))| {
                let d = est - ex;
                z(d.re, self.stderr_re[k]).max(z(d.im, self.stderr_im[k]))
            })
            .fold(0.0, f64::max)
    }
}

/// The RNG stream of one trajectory.
pub fn trajectory_rng(master_seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trajectory_index);
    rng
}

/// Arrival times of a rate-`rate` Poisson process on (0, t_final), ascending.
pub fn sample_reset_times<R: Rng + ?Sized>(rate: f64, t_final: f64, rng: &mut R) -> Vec<f64> {
    let mut times = Vec::new();
    if rate <= 0.0 || t_final <= 0.0 {
        return times;
    }
    let gaps = Exp::new(rate).expect("positive finite rate");
    let mut t = 0.0;
    loop {
        t += gaps.sample(rng);
        if t >= t_final {
            break;
        }
        if t > 0.0 {
            times.push(t);
        }
    }
    times
}

/// A normalized vector spanning the range of a pure density matrix.
pub fn pure_state_of(rho: &ComplexMatrix) -> Result<Vec<Complex>> {
    let purity: f64 = rho.as_slice().iter().map(|z| z.norm_sqr()).sum();
    if purity < 1.0 - PURE_TOL {
        return Err(Error::NotPure { purity });
    }
    let eig = rho.hermitian_eig()?;
    Ok(eig.eigenvector(eig.dim() - 1))
}

/// Spectral propagator for a fixed initial state: psi(tau) = V (c * e^{-iE tau}), c = V^H psi0.
struct Propagator<'a> {
    sys: &'a QuantumSystem,
    coeffs: Vec<Complex>,
}

impl<'a> Propagator<'a> {
    fn new(sys: &'a QuantumSystem) -> Result<Self> {
        let psi0 = pure_state_of(sys.rho0())?;
        let coeffs = sys.eigensystem().eigenvectors.adjoint().mul_vec(&psi0)?;
        Ok(Self { sys, coeffs })
    }

    fn evolve(&self, tau: f64) -> Vec<Complex> {
        let energies = self.sys.energies();
        let phased: Vec<Complex> =
            self.coeffs.iter().zip(energies).map(|(c, &e)| c * Complex::new(0.0, -e * tau).exp()).collect();
        self.sys.eigensystem().eigenvectors.mul_vec(&phased).expect("dimensions agree")
    }
}

/// State at `t_final` given the reset times; only the segment after the last reset matters.
pub fn evolve_trajectory(sys: &QuantumSystem, resets: &[f64], t_final: f64) -> Result<Vec<Complex>> {
    let last = resets.last().copied().unwrap_or(0.0);
    if resets.windows(2).any(|w| w[0] >= w[1]) || resets.iter().any(|&t| !(t > 0.0 && t < t_final)) {
        return Err(Error::InvalidParameter("reset times must be ascending within (0, t_final)".into()));
    }
    Ok(Propagator::new(sys)?.evolve(t_final - last))
}

/// Monte Carlo estimate of rho_r(t_final) from `cfg.n_traj` independent trajectories.
pub fn estimate_density(sys: &QuantumSystem, cfg: &TrajectoryConfig) -> Result<TrajectoryEstimate> {
    cfg.validate()?;
    let prop = Propagator::new(sys)?;
    let n = sys.dim();
    let entries = n * n;

    let n_chunks = cfg.n_traj.div_ceil(CHUNK);
    let partials: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::new(entries);
            let start = c * CHUNK;
            let end = (start + CHUNK).min(cfg.n_traj);
            for idx in start..end {
                let mut rng = trajectory_rng(cfg.master_seed, idx as u64);
                let resets = sample_reset_times(cfg.rate, cfg.t_final, &mut rng);
                let last = resets.last().copied().unwrap_or(0.0);
                let psi = prop.evolve(cfg.t_final - last);
                m.add_projector(&psi);
            }
            m
        })
        .collect();

    let mut total = Moments::new(entries);
    for p in &partials {
        total.merge(p);
    }
    Ok(total.finish(n, cfg.n_traj))
}

struct Moments {
    sum: Vec<Complex>,
    sq_re: Vec<f64>,
    sq_im: Vec<f64>,
}

impl Moments {
    fn new(entries: usize) -> Self {
        Self { sum: vec![ZERO; entries], sq_re: vec![0.0; entries], sq_im: vec![0.0; entries] }
    }

    fn add_projector(&mut self, psi: &[Complex]) {
        let n = psi.len();
        for i in 0..n {
            for j in 0..n {
                let z = psi[i] * psi[j].conj();
                let k = i * n + j;
                self.sum[k] += z;
                self.sq_re[k] += z.re * z.re;
                self.sq_im[k] += z.im * z.im;
            }
        }
    }

    fn merge(&mut self, other: &Self) {
        for k in 0..self.sum.len() {
            self.sum[k] += other.sum[k];
            self.sq_re[k] += other.sq_re[k];
            self.sq_im[k] += other.sq_im[k];
        }
    }

    fn finish(self, dim: usize, count: usize) -> TrajectoryEstimate {
        let nf = count as f64;
        let mean: Vec<Complex> = self.sum.iter().map(|s| s / nf).collect();
        let se = |sq: f64, m: f64| {
            if count < 2 {
                return 0.0;
            }
            let var = ((sq - nf * m * m) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        };
        let stderr_re = self.sq_re.iter().zip(&mean).map(|(&s, m)| se(s, m.re)).collect();
        let stderr_im = self.sq_im.iter().zip(&mean).map(|(&s, m)| se(s, m.im)).collect();
        TrajectoryEstimate {
            rho_hat: ComplexMatrix::from_vec(dim, mean).expect("finite mean"),
            stderr_re,
            stderr_im,
            n_traj: count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::ONE;
    use crate::twospin::{down_down, TwoSpinParams};

    fn sys() -> QuantumSystem {
        TwoSpinParams::dimensionless(1.0, 1.0).unwrap().system()
    }

    #[test]
    fn no_resets_at_zero_rate() {
        let mut rng = trajectory_rng(7, 0);
        assert!(sample_reset_times(0.0, 100.0, &mut rng).is_empty());
    }

    #[test]
    fn reset_times_are_ordered_and_in_range() {
        let mut rng = trajectory_rng(3, 11);
        let times = sample_reset_times(5.0, 20.0, &mut rng);
        assert!(!times.is_empty());
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert!(times.iter().all(|&t| t > 0.0 && t < 20.0));
    }

    #[test]
    fn poisson_count_statistics() {
        let mut rng = trajectory_rng(2024, 0);
        let count = sample_reset_times(2.0, 1000.0, &mut rng).len() as f64;
        assert!((count - 2000.0).abs() <= 3.0 * 2000f64.sqrt(), "count {count}");
    }

    #[test]
    fn trajectory_without_resets_is_unitary() {
        let s = sys();
        let psi = evolve_trajectory(&s, &[], 2.3).unwrap();
        let rho = ComplexMatrix::projector(&psi);
        assert!(rho.max_abs_diff(&s.unitary_evolve(2.3)) < 1e-13);
    }

    #[test]
    fn fresh_reset_returns_initial_state() {
        let s = sys();
        let psi = evolve_trajectory(&s, &[0.5, 3.0 - 1e-15], 3.0).unwrap();
        let overlap: Complex = psi.iter().zip(down_down()).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trajectory_matches_unitary_after_last_reset() {
        let s = sys();
        let (t_final, tau) = (5.0, 1.7);
        let psi = evolve_trajectory(&s, &[0.2, 1.1, t_final - tau], t_final).unwrap();
        let exact = s.unitary_evolve(tau);
        // <psi|rho_exact|psi> = |<psi|psi_exact>|^2 for a pure exact state.
        let rho_psi = exact.mul_vec(&psi).unwrap();
        let overlap: Complex = psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.re.sqrt() - 1.0).abs() < 1e-12);
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_resets_and_mixed_states() {
        let s = sys();
        assert!(evolve_trajectory(&s, &[2.0, 1.0], 3.0).is_err());
        assert!(evolve_trajectory(&s, &[4.0], 3.0).is_err());
        let mixed = QuantumSystem::new(s.hamiltonian().clone(), ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert!(matches!(evolve_trajectory(&mixed, &[], 1.0), Err(Error::NotPure { .. })));
    }

    #[test]
    fn zero_rate_estimate_is_the_unitary_state() {
        let s = sys();
        let cfg = TrajectoryConfig { n_traj: 500, master_seed: 1, t_final: 2.0, rate: 0.0 };
        let est = estimate_density(&s, &cfg).unwrap();
        let exact = s.unitary_evolve(2.0);
        assert!(est.rho_hat.max_abs_diff(&exact) < 1e-12);
        assert_eq!(est.max_standardized_deviation(&exact), 0.0);
    }

    #[test]
    fn estimate_is_trace_one_and_hermitian() {
        let s = sys();
        let cfg = TrajectoryConfig { n_traj: 3000, master_seed: 9, t_final: 3.0, rate: 1.0 };
        let est = estimate_density(&s, &cfg).unwrap();
        assert!((est.rho_hat.trace() - ONE).norm() < 1e-12);
        assert!(est.rho_hat.hermiticity_defect() < 1e-12);
        assert!(est.stderr_re.iter().chain(&est.stderr_im).all(|&x| x >= 0.0));
    }

    #[test]
    fn config_validation() {
        let s = sys();
        let bad = TrajectoryConfig { n_traj: 0, master_seed: 0, t_final: 1.0, rate: 1.0 };
        assert!(estimate_density(&s, &bad).is_err());
        let bad = TrajectoryConfig { n_traj: 1, master_seed: 0, t_final: f64::INFINITY, rate: 1.0 };
        assert!(estimate_density(&s, &bad).is_err());
    }
}
