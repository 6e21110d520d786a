//! Parameter sweeps and searches over the two-spin model, plus record output.
//!
//! Everything here is deterministic: grid points may be evaluated in
//! parallel, but records are always emitted in canonical order
//! (alpha outer, R inner) with 17 significant digits.

use std::f64::consts::LN_2;
use std::io::Write;

use rayon::prelude::*;

use crate::dual::Jet2;
use crate::error::{Error, Result};
use crate::mc::{estimate_density, TrajectoryConfig};
use crate::observables::{fidelity_pure, purity};
use crate::optimize::{bisect, bracketed_max, Maximum};
use crate::twospin::{
    concurrence_ness, down_down, entropy_ness, entropy_ness_generic, entropy_t, fidelity_ness, ness_density,
    TwoSpinParams,
};

/// Slack allowed on observable bounds before a record is rejected.
pub const BOUND_SLACK: f64 = 1e-12;
/// Pass threshold for the Monte Carlo check, in standard errors.
pub const MC_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Entropy,
    Fidelity,
    Purity,
    Concurrence,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Self::Entropy, Self::Fidelity, Self::Purity, Self::Concurrence];

    pub fn parse(name: &str) -> Result<Self> {
        match name.trim() {
            "entropy" => Ok(Self::Entropy),
            "fidelity" => Ok(Self::Fidelity),
            "purity" => Ok(Self::Purity),
            "concurrence" => Ok(Self::Concurrence),
            other => Err(Error::InvalidParameter(format!("unknown observable '{other}'"))),
        }
    }
}

/// Evenly (or log-evenly) spaced axis, parsed from `lo:hi:n[:log]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("axis must look like lo:hi:n[:log], got '{spec}'"));
        let parts: Vec<&str> = spec.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        let axis = Self { lo, hi, n, log };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.n >= 1
            && (self.lo < self.hi || (self.n == 1 && self.lo == self.hi))
            && (!self.log || self.lo > 0.0);
        if !ok {
            return Err(Error::InvalidParameter(format!("invalid axis {self:?}")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|k| {
                if k == self.n - 1 {
                    return self.hi;
                }
                let u = k as f64 / (self.n - 1) as f64;
                if self.log {
                    (self.lo.ln() + u * (self.hi.ln() - self.lo.ln())).exp()
                } else {
                    self.lo + u * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

/// The (R, alpha) plane to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    r_values: Vec<f64>,
    alpha_values: Vec<f64>,
    observables: Vec<Observable>,
}

impl SweepGrid {
    pub fn new(r_values: Vec<f64>, alpha_values: Vec<f64>, observables: Vec<Observable>) -> Result<Self> {
        let ascending = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if r_values.is_empty() || alpha_values.is_empty() {
            return Err(Error::InvalidParameter("grid axes must be non-empty".into()));
        }
        if !r_values.iter().all(|&r| r.is_finite() && r > 0.0) || !ascending(&r_values) {
            return Err(Error::InvalidParameter("R values must be finite, positive and ascending".into()));
        }
        if !alpha_values.iter().all(|&a| a.is_finite() && a >= 0.0) || !ascending(&alpha_values) {
            return Err(Error::InvalidParameter("alpha values must be finite, >= 0 and ascending".into()));
        }
        if observables.is_empty() {
            return Err(Error::InvalidParameter("select at least one observable".into()));
        }
        Ok(Self { r_values, alpha_values, observables })
    }

    pub fn r_values(&self) -> &[f64] {
        &self.r_values
    }

    pub fn alpha_values(&self) -> &[f64] {
        &self.alpha_values
    }

    pub fn len(&self) -> usize {
        self.r_values.len() * self.alpha_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObservableRecord {
    pub r: f64,
    pub alpha: f64,
    pub t: Option<f64>,
    pub entropy: Option<f64>,
    pub fidelity: Option<f64>,
    pub purity: Option<f64>,
    pub concurrence: Option<f64>,
}

impl ObservableRecord {
    /// Entropy in [0, ln 2], the rest in [0, 1], up to [`BOUND_SLACK`].
    pub fn check_bounds(&self) -> Result<()> {
        let within =
            |v: Option<f64>, hi: f64| v.is_none_or(|x| x.is_finite() && x >= -BOUND_SLACK && x <= hi + BOUND_SLACK);
        if within(self.entropy, LN_2)
            && within(self.fidelity, 1.0)
            && within(self.purity, 1.0)
            && within(self.concurrence, 1.0)
        {
            Ok(())
        } else {
            Err(Error::OutOfBounds(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

pub const CSV_HEADER: &str = "r,alpha,t,entropy,fidelity,purity,concurrence";

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes records in the given format.
pub struct RecordWriter<W: Write> {
    out: W,
    format: OutputFormat,
    header_written: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: OutputFormat) -> Self {
        Self { out, format, header_written: false }
    }

    pub fn write(&mut self, rec: &ObservableRecord) -> std::io::Result<()> {
        let fields = [
            ("r", Some(rec.r)),
            ("alpha", Some(rec.alpha)),
            ("t", rec.t),
            ("entropy", rec.entropy),
            ("fidelity", rec.fidelity),
            ("purity", rec.purity),
            ("concurrence", rec.concurrence),
        ];
        match self.format {
            OutputFormat::Csv => {
                if !self.header_written {
                    writeln!(self.out, "{CSV_HEADER}")?;
                    self.header_written = true;
                }
                let row: Vec<String> = fields.iter().map(|(_, v)| v.map(fmt_float).unwrap_or_default()).collect();
                writeln!(self.out, "{}", row.join(","))
            }
            OutputFormat::JsonLines => {
                let body: Vec<String> =
                    fields.iter().filter_map(|(k, v)| v.map(|x| format!("\"{k}\":{}", fmt_float(x)))).collect();
                writeln!(self.out, "{{{}}}", body.join(","))
            }
        }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Observables of the stationary state at one (R, alpha) point.
pub fn evaluate_point(big_r: f64, alpha: f64, grid: &SweepGrid) -> Result<ObservableRecord> {
    let p = TwoSpinParams::dimensionless(big_r, alpha)?;
    let mut rec = ObservableRecord { r: big_r, alpha, ..Default::default() };
    if grid.wants(Observable::Entropy) {
        rec.entropy = Some(entropy_ness(&p)?);
    }
    if grid.wants(Observable::Fidelity) {
        rec.fidelity = Some(fidelity_ness(&p));
    }
    if grid.wants(Observable::Purity) {
        rec.purity = Some(purity(&ness_density(&p)?)?);
    }
    if grid.wants(Observable::Concurrence) {
        rec.concurrence = Some(concurrence_ness(&p)?);
    }
    Ok(rec)
}

/// All records of the grid in canonical order (alpha outer, R inner).
pub fn sweep_records(grid: &SweepGrid) -> Result<Vec<ObservableRecord>> {
    let points: Vec<(f64, f64)> =
        grid.alpha_values.iter().flat_map(|&a| grid.r_values.iter().map(move |&r| (r, a))).collect();
    let records = points.par_iter().map(|&(r, a)| evaluate_point(r, a, grid)).collect::<Result<Vec<_>>>()?;
    for rec in &records {
        rec.check_bounds()?;
    }
    Ok(records)
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Compute(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Evaluates the grid and writes one record per point; returns the record count.
pub fn run_sweep<W: Write>(grid: &SweepGrid, sink: &mut RecordWriter<W>) -> std::result::Result<usize, SweepError> {
    let records = sweep_records(grid)?;
    for rec in &records {
        sink.write(rec)?;
    }
    Ok(records.len())
}

/// Entropy (and fidelity to |dd>) of rho_r(t) along rescaled times `t_values`.
pub fn timeseries(p: &TwoSpinParams, t_values: &[f64]) -> Result<Vec<ObservableRecord>> {
    if t_values.iter().any(|&t| !(t.is_finite() && t >= 0.0)) || t_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("times must be finite, >= 0 and ascending".into()));
    }
    let sys = p.system();
    let psi0 = down_down();
    t_values
        .iter()
        .map(|&t| {
            let rho = sys.reset_density(p.reset(), t / p.omega());
            let rec = ObservableRecord {
                r: p.big_r(),
                alpha: p.alpha(),
                t: Some(t),
                entropy: Some(entropy_t(t, p)),
                fidelity: Some(fidelity_pure(&rho, &psi0)?),
                ..Default::default()
            };
            rec.check_bounds()?;
            Ok(rec)
        })
        .collect()
}

const SEARCH_SAMPLES: usize = 161;
const SEARCH_TOL: f64 = 1e-8;

/// Maximizes the stationary concurrence over R at fixed alpha.
pub fn optimize_concurrence(alpha: f64, r_bounds: (f64, f64)) -> Result<Maximum> {
    let (lo, hi) = r_bounds;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidParameter(format!("need 0 < r_lo < r_hi, got [{lo}, {hi}]")));
    }
    let c = |r: f64| TwoSpinParams::dimensionless(r, alpha).and_then(|p| concurrence_ness(&p)).unwrap_or(f64::NAN);
    bracketed_max(c, lo, hi, SEARCH_SAMPLES, true, SEARCH_TOL, 1e-10)
}

/// Maximizes the finite-time entropy S_r(t) over R at fixed (t, alpha).
pub fn find_entropy_peak_r(t: f64, alpha: f64, r_bounds: (f64, f64)) -> Result<Maximum> {
    let (lo, hi) = r_bounds;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("peak search needs t > 0, got {t}")));
    }
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidParameter(format!("need 0 < r_lo < r_hi, got [{lo}, {hi}]")));
    }
    let s = |r: f64| TwoSpinParams::dimensionless(r, alpha).map(|p| entropy_t(t, &p)).unwrap_or(f64::NAN);
    bracketed_max(s, lo, hi, SEARCH_SAMPLES, true, SEARCH_TOL, 0.0)
}

/// (dS_st/dalpha, d^2S_st/dalpha^2) at (R, alpha), exact to round-off.
pub fn entropy_alpha_derivatives(big_r: f64, alpha: f64) -> (f64, f64) {
    let j = entropy_ness_generic(Jet2 { v: big_r, d1: 0.0, d2: 0.0 }, Jet2::variable(alpha));
    (j.d1, j.d2)
}

/// Central-difference (dS/dalpha, d^2S/dalpha^2) with one Richardson step (h, h/2).
pub fn entropy_alpha_derivatives_fd(big_r: f64, alpha: f64, h: f64) -> (f64, f64) {
    let s = |a: f64| entropy_ness_generic(big_r, a);
    let d1 = |h: f64| (s(alpha + h) - s(alpha - h)) / (2.0 * h);
    let d2 = |h: f64| (s(alpha + h) - 2.0 * s(alpha) + s(alpha - h)) / (h * h);
    let rich = |f: &dyn Fn(f64) -> f64| (4.0 * f(h / 2.0) - f(h)) / 3.0;
    (rich(&d1), rich(&d2))
}

/// Rectangle in the (R, alpha) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub r: (f64, f64),
    pub alpha: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        Self { r: (0.05, 0.3), alpha: (0.8, 2.0) }
    }
}

/// The point where the entropy's local minimum and maximum in alpha merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub r_c: f64,
    pub alpha_c: f64,
    /// (|dS/dalpha|, |d^2S/dalpha^2|) at the solution.
    pub residuals: (f64, f64),
}

const INFLECTION_SAMPLES: usize = 241;

/// Highest local maximum of dS/dalpha over the alpha range, as (alpha, dS/dalpha).
/// Falls back to the largest sampled value when dS/dalpha has no interior maximum.
fn steepest_ascent_in_alpha(big_r: f64, (a_lo, a_hi): (f64, f64)) -> (f64, f64) {
    let alphas: Vec<f64> =
        (0..INFLECTION_SAMPLES).map(|k| a_lo + (a_hi - a_lo) * k as f64 / (INFLECTION_SAMPLES - 1) as f64).collect();
    let derivs: Vec<(f64, f64)> = alphas.iter().map(|&a| entropy_alpha_derivatives(big_r, a)).collect();

    let mut best: Option<(f64, f64)> = None;
    for k in 0..INFLECTION_SAMPLES - 1 {
        // d2 crossing from + to - brackets a local maximum of d1.
        if derivs[k].1 > 0.0 && derivs[k + 1].1 <= 0.0 {
            let a =
                bisect(|a| entropy_alpha_derivatives(big_r, a).1, alphas[k], alphas[k + 1], 1e-15).expect("bracketed");
            let d1 = entropy_alpha_derivatives(big_r, a).0;
            if best.is_none_or(|(_, b)| d1 > b) {
                best = Some((a, d1));
            }
        }
    }
    best.unwrap_or_else(|| {
        let k = (0..INFLECTION_SAMPLES).max_by(|&i, &j| derivs[i].0.total_cmp(&derivs[j].0)).expect("non-empty");
        (alphas[k], derivs[k].0)
    })
}

/// Solves dS/dalpha = 0 = d^2S/dalpha^2 inside the box: for each R the inner
/// problem locates the local maximum of dS/dalpha, and the outer bisection in R
/// drives that maximum to zero.
pub fn find_inflection(search: SearchBox) -> Result<CriticalPoint> {
    let (r_lo, r_hi) = search.r;
    let (a_lo, a_hi) = search.alpha;
    if !(r_lo > 0.0 && r_lo < r_hi && a_lo >= 0.0 && a_lo < a_hi) {
        return Err(Error::InvalidParameter(format!("invalid search box {search:?}")));
    }
    let phi = |r: f64| steepest_ascent_in_alpha(r, search.alpha).1;
    let r_c =
        bisect(phi, r_lo, r_hi, 1e-14).map_err(|e| Error::NoRoot(format!("no spinodal point in {search:?}: {e}")))?;
    let (alpha_c, _) = steepest_ascent_in_alpha(r_c, search.alpha);
    if alpha_c <= a_lo || alpha_c >= a_hi {
        return Err(Error::NoRoot(format!("inflection at alpha = {alpha_c} is on the box boundary")));
    }
    let (d1, d2) = entropy_alpha_derivatives(r_c, alpha_c);
    Ok(CriticalPoint { r_c, alpha_c, residuals: (d1.abs(), d2.abs()) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub n_traj: usize,
    /// Max |estimate - rho_r(t)| / stderr.
    pub max_z: f64,
    /// Max |estimate - rho_r(inf)| / stderr, when r > 0.
    pub max_z_ness: Option<f64>,
    pub pass: bool,
}

/// Compares a trajectory estimate at rescaled time t against the exact rho_r(t)
/// (or, with `against_ness`, against the stationary state).
pub fn mc_validate(p: &TwoSpinParams, t: f64, n_traj: usize, seed: u64, against_ness: bool) -> Result<McReport> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
    }
    let sys = p.system();
    let t_phys = t / p.omega();
    let cfg = TrajectoryConfig { n_traj, master_seed: seed, t_final: t_phys, rate: p.r() };
    let est = estimate_density(&sys, &cfg)?;
    let max_z = est.max_standardized_deviation(&sys.reset_density(p.reset(), t_phys));
    let max_z_ness =
        if p.r() > 0.0 { Some(est.max_standardized_deviation(&sys.ness_density(p.reset())?)) } else { None };
    if against_ness && max_z_ness.is_none() {
        return Err(Error::InvalidParameter("comparison against the stationary state needs r > 0".into()));
    }
    let decisive = if against_ness { max_z_ness.unwrap_or(f64::INFINITY) } else { max_z };
    Ok(McReport { n_traj, max_z, max_z_ness, pass: decisive < MC_THRESHOLD })
}
