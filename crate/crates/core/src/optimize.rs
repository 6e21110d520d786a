//! One-dimensional maximization and root bracketing.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoRoot(format!("f({lo}) = {flo:e} and f({hi}) = {fhi:e} have the same sign")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Outcome of a bracketed maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// The largest sampled value sat on an endpoint, so no interior peak was refined.
    pub on_boundary: bool,
    /// The function is flat (all samples within `flat_tol` of each other).
    pub degenerate: bool,
}

/// Samples `f` on `samples` points (log-spaced when `log`), brackets the best
/// sample by its neighbours, then refines with golden-section search.
pub fn bracketed_max(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    samples: usize,
    log: bool,
    tol: f64,
    flat_tol: f64,
) -> Result<Maximum> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || (log && lo <= 0.0) || samples < 3 {
        return Err(Error::InvalidParameter(format!("invalid search interval [{lo}, {hi}]")));
    }
    let xs: Vec<f64> = (0..samples)
        .map(|k| {
            let u = k as f64 / (samples - 1) as f64;
            if log {
                (lo.ln() + u * (hi.ln() - lo.ln())).exp()
            } else {
                lo + u * (hi - lo)
            }
        })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (best, &ymax) = ys.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))).expect("non-empty");
    let ymin = ys.iter().copied().fold(f64::INFINITY, f64::min);
    if ymax - ymin <= flat_tol {
        return Ok(Maximum { x: xs[best], value: ymax, on_boundary: false, degenerate: true });
    }
    if best == 0 || best == samples - 1 {
        return Ok(Maximum { x: xs[best], value: ymax, on_boundary: true, degenerate: false });
    }
    let (x, value) = golden_section_max(&f, xs[best - 1], xs[best + 1], tol);
    Ok(Maximum { x, value, on_boundary: false, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx.abs() < 1e-18);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn bracketed_max_flags() {
        let interior = bracketed_max(|x| (-(x.ln() - 1.0).powi(2)).exp(), 0.1, 100.0, 41, true, 1e-10, 1e-14).unwrap();
        assert!((interior.x - 1f64.exp()).abs() < 1e-6);
        assert!(!interior.on_boundary && !interior.degenerate);

        let edge = bracketed_max(|x| x, 0.0, 1.0, 11, false, 1e-10, 1e-14).unwrap();
        assert!(edge.on_boundary && edge.x == 1.0);

        let flat = bracketed_max(|_| 0.0, 0.0, 1.0, 11, false, 1e-10, 1e-14).unwrap();
        assert!(flat.degenerate);

        assert!(bracketed_max(|x| x, 1.0, 0.0, 11, false, 1e-10, 0.0).is_err());
        assert!(bracketed_max(|x| x, 0.0, 1.0, 11, true, 1e-10, 0.0).is_err());
    }
}
