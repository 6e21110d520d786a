//! Two ferromagnetically coupled spins in a transverse field, started in and
//! reset to |dd>.
//!
//! H = -J sz1 sz2 + (Omega/2)(sx1 + sx2) in the basis |uu>, |ud>, |du>, |dd>.
//! Closed forms take the dimensionless rate R = r/Omega, coupling
//! alpha = J/Omega and time in units of 1/Omega; they double as oracles for
//! the generic engine in [`crate::system`].

use std::f64::consts::LN_2;

use crate::cmatrix::{kron, pauli_x, pauli_z, Complex, ComplexMatrix, ONE, ZERO};
use crate::dual::Scalar;
use crate::error::{Error, Result};
use crate::observables::concurrence;
use crate::system::{QuantumSystem, ResetSpec};

/// Transverse field Omega, coupling J and reset rate r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinParams {
    omega: f64,
    j: f64,
    r: f64,
}

impl TwoSpinParams {
    pub fn new(omega: f64, j: f64, r: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
        }
        if !(j.is_finite() && j >= 0.0) {
            return Err(Error::InvalidParameter(format!("J must be >= 0, got {j}")));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("reset rate must be >= 0, got {r}")));
        }
        Ok(Self { omega, j, r })
    }

    /// Omega = 1, J = alpha, r = R.
    pub fn dimensionless(big_r: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, alpha, big_r)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// R = r / Omega.
    pub fn big_r(&self) -> f64 {
        self.r / self.omega
    }

    /// alpha = J / Omega.
    pub fn alpha(&self) -> f64 {
        self.j / self.omega
    }

    /// gamma = sqrt(alpha^2 + 1).
    pub fn gamma(&self) -> f64 {
        self.alpha().hypot(1.0)
    }

    pub fn reset(&self) -> ResetSpec {
        ResetSpec::new(self.r).expect("validated at construction")
    }

    /// The generic engine's view of this model, starting from |dd>.
    pub fn system(&self) -> QuantumSystem {
        QuantumSystem::with_pure_state(hamiltonian(self), &down_down())
            .expect("two-spin Hamiltonian and |dd> are valid")
    }
}

/// |dd> = (0, 0, 0, 1).
pub fn down_down() -> Vec<Complex> {
    vec![ZERO, ZERO, ZERO, ONE]
}

pub fn hamiltonian(p: &TwoSpinParams) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let zz = kron(&pauli_z(), &pauli_z()).scale_real(-p.j);
    let field = (&kron(&pauli_x(), &id) + &kron(&id, &pauli_x())).scale_real(p.omega / 2.0);
    &zz + &field
}

/// The 2x2 reduced state [[v, w], [w*, 1 - v]] of spin 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedVW {
    pub v: f64,
    pub w: Complex,
}

impl ReducedVW {
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(
            2,
            vec![Complex::new(self.v, 0.0), self.w, self.w.conj(), Complex::new(1.0 - self.v, 0.0)],
        )
        .expect("finite entries")
    }

    pub fn det(&self) -> f64 {
        self.v * (1.0 - self.v) - self.w.norm_sqr()
    }

    /// y = sqrt(1 - 4 det), the eigenvalue splitting.
    pub fn y(&self) -> f64 {
        (1.0 - 4.0 * self.det()).max(0.0).sqrt().min(1.0)
    }

    pub fn entropy(&self) -> f64 {
        entropy_from_y(self.y())
    }
}

/// ln 2 - (1+y)/2 ln(1+y) - (1-y)/2 ln(1-y).
pub fn entropy_from_y<T: Scalar>(y: T) -> T {
    let one = T::constant(1.0);
    let half = T::constant(0.5);
    let plus = one + y;
    let minus = one - y;
    let tail = if minus.value() > 0.0 { half * minus * minus.ln() } else { T::constant(0.0) };
    T::constant(LN_2) - half * plus * plus.ln() - tail
}

/// Unitary (no reset) reduced state of spin 1 at rescaled time t.
pub fn reduced_vw(t: f64, p: &TwoSpinParams) -> ReducedVW {
    let a = p.alpha();
    let g = p.gamma();
    let (sa, ca) = (a * t).sin_cos();
    let (sg, cg) = (g * t).sin_cos();
    let v = 0.5 * (1.0 - ca * cg - a / g * sa * sg);
    let w = -Complex::new(a * sg, g * ca) * sg / (2.0 * g * g);
    ReducedVW { v, w }
}

/// Reduced state of spin 1 under resetting at rescaled time t, valid for R >= 0.
pub fn reduced_vw_reset(t: f64, p: &TwoSpinParams) -> ReducedVW {
    let big_r = p.big_r();
    let a = p.alpha();
    let g = p.gamma();
    let r2 = big_r * big_r;
    let (sa, ca) = (a * t).sin_cos();
    let (sg, cg) = (g * t).sin_cos();

    let v_inf = (1.0 + r2) / (2.0 + 2.0 * r2 * (2.0 + r2 + 4.0 * a * a));
    let v_t = (-ca * (g * (r2 + 1.0) * cg + big_r * (2.0 * g * g + r2 - 1.0) * sg)
        + a * sa * ((r2 - 1.0) * sg + 2.0 * g * big_r * cg))
        / (8.0 * g.powi(3) * r2 + 2.0 * g * (r2 - 1.0).powi(2));

    let w_inf = ness_w(big_r, a);
    let (s2g, c2g) = (2.0 * g * t).sin_cos();
    let am = a - g;
    let ap = a + g;
    let (sm, cm) = (am * t).sin_cos();
    let (sp, cp) = (ap * t).sin_cos();
    let dm = am * am + r2;
    let dp = ap * ap + r2;
    let d2g = 4.0 * g * g + r2;
    let re = 2.0 * a * big_r * s2g / d2g + 4.0 * a * g * c2g / d2g;
    let im = am * am * sm / dm - ap * ap * sp / dp - big_r * am * cm / dm + big_r * ap * cp / dp;
    let w_t = Complex::new(re, im) / (4.0 * g);

    let decay = (-big_r * t).exp();
    ReducedVW { v: v_inf + decay * v_t, w: w_inf + w_t * decay }
}

fn ness_denominator(big_r: f64, a: f64) -> f64 {
    let r2 = big_r * big_r;
    2.0 + 2.0 * r2 * (2.0 + r2 + 4.0 * a * a)
}

fn ness_w(big_r: f64, a: f64) -> Complex {
    let r2 = big_r * big_r;
    Complex::new(-a / (r2 + 4.0 + 4.0 * a * a), -(big_r + big_r * r2) / ness_denominator(big_r, a))
}

/// Stationary reduced state of spin 1; requires R > 0 (see [`zero_reset_limit_vw`]).
pub fn ness_vw(p: &TwoSpinParams) -> Result<ReducedVW> {
    let big_r = p.big_r();
    if big_r <= 0.0 {
        return Err(Error::InvalidParameter(
            "stationary state needs R > 0; use zero_reset_limit_vw for R -> 0+".into(),
        ));
    }
    let a = p.alpha();
    Ok(ReducedVW { v: (1.0 + big_r * big_r) / ness_denominator(big_r, a), w: ness_w(big_r, a) })
}

/// lim_{R -> 0+} of the stationary reduced state (taken after t -> infinity).
pub fn zero_reset_limit_vw(alpha: f64) -> ReducedVW {
    ReducedVW { v: 0.5, w: Complex::new(-alpha / (4.0 * (alpha * alpha + 1.0)), 0.0) }
}

/// Entanglement entropy of spin 1 at rescaled time t under resetting.
pub fn entropy_t(t: f64, p: &TwoSpinParams) -> f64 {
    reduced_vw_reset(t, p).entropy()
}

/// Stationary y as an explicit function of (R, alpha).
pub fn ness_y<T: Scalar>(big_r: T, alpha: T) -> T {
    let c = T::constant;
    let r2 = big_r * big_r;
    let r4 = r2 * r2;
    let a2 = alpha * alpha;
    let q = c(4.0) * a2 + r2 + c(4.0);
    let num = (r2 + c(1.0)) * ((c(8.0) * a2 + c(2.0)) * r2 + r4 + c(1.0));
    let den = (c(4.0) * a2 + c(2.0)) * r2 + r4 + c(1.0);
    (c(1.0) + c(4.0) * a2 / (q * q) - num / (den * den)).clamp_nonneg().sqrt()
}

/// Stationary entropy S_st(R, alpha) for R > 0.
pub fn entropy_ness(p: &TwoSpinParams) -> Result<f64> {
    if p.big_r() <= 0.0 {
        return Err(Error::InvalidParameter(
            "stationary entropy needs R > 0; use entropy_zero_reset for R -> 0+".into(),
        ));
    }
    Ok(entropy_ness_generic(p.big_r(), p.alpha()))
}

/// S_st evaluated for any scalar type, so that derivatives in alpha come out exactly.
pub fn entropy_ness_generic<T: Scalar>(big_r: T, alpha: T) -> T {
    entropy_from_y(ness_y(big_r, alpha))
}

/// S_st(0+, alpha).
pub fn entropy_zero_reset(alpha: f64) -> f64 {
    entropy_from_y(alpha / (2.0 * (1.0 + alpha * alpha)))
}

/// Crossover function F(z) with S_st(R, alpha) -> F(alpha R) for R -> 0, alpha -> infinity.
pub fn scaling_f(z: f64) -> f64 {
    let u = 1.0 + 4.0 * z * z;
    let ratio = (1.0 + 8.0 * z * z) / u;
    LN_2 - 0.5 * ratio * ratio.ln() + 0.5 / u * u.ln()
}

/// <dd| rho_st |dd>; at R = 0 this is the R -> 0+ limit.
pub fn fidelity_ness(p: &TwoSpinParams) -> f64 {
    let r2 = p.big_r() * p.big_r();
    let a2 = p.alpha() * p.alpha();
    1.0 - 0.5 * (r2 + 1.0) / (1.0 + r2 * r2 + r2 * (4.0 * a2 + 2.0)) - 0.5 / (4.0 * a2 + r2 + 4.0)
}

/// Full 4x4 stationary density matrix from the generic engine.
pub fn ness_density(p: &TwoSpinParams) -> Result<ComplexMatrix> {
    p.system().ness_density(p.reset())
}

/// Concurrence of the stationary state, via the exact NESS and the Wootters formula.
pub fn concurrence_ness(p: &TwoSpinParams) -> Result<f64> {
    Ok(concurrence(&ness_density(p)?)?.value)
}
