//! Bracketed bisection.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct Bisection<T> {
    /// Stop once `|hi − lo| ≤ rel_tol·|mid|`.
    pub rel_tol: T,
    pub max_iter: usize,
}

/// Result of a bisection run.
#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub iterations: usize,
}

/// Bisects `f` on `[lo, hi]` given the known signs of `f` at the endpoints.
///
/// The endpoints themselves are never evaluated, which allows brackets whose
/// ends sit on poles of `f` with an analytically known sign.
pub fn bisect_with_signs<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    mut lo: T,
    mut hi: T,
    lo_positive: bool,
    ctl: Bisection<T>,
) -> Result<Root<T>> {
    if !(lo < hi) {
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let half = T::lit(0.5);
    let mut iterations = 0;
    while iterations < ctl.max_iter {
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (hi - lo) <= ctl.rel_tol * mid.abs() {
            break;
        }
        let fm = f(mid);
        iterations += 1;
        if fm == T::zero() {
            return Ok(Root { x: mid, iterations });
        }
        if fm.is_nan() {
            return Err(Error::Bracket {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        if (fm > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Root {
        x: half * (lo + hi),
        iterations,
    })
}

/// Bisects `f` on `[lo, hi]`; fails with [`Error::Bracket`] when the endpoint
/// values do not differ in sign.
pub fn bisect<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, ctl: Bisection<T>) -> Result<Root<T>> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(Root { x: lo, iterations: 0 });
    }
    if fhi == T::zero() {
        return Ok(Root { x: hi, iterations: 0 });
    }
    if flo.is_nan() || fhi.is_nan() || (flo > T::zero()) == (fhi > T::zero()) {
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    bisect_with_signs(f, lo, hi, flo > T::zero(), ctl)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CTL: Bisection<f64> = Bisection {
        rel_tol: 1e-14,
        max_iter: 200,
    };

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, CTL).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, CTL),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn endpoint_on_pole() {
        // 1/x − 2 on (0, 1]: +∞ at the left end
        let r = bisect_with_signs(|x| 1.0 / x - 2.0, 0.0, 1.0, true, CTL).unwrap();
        assert!((r.x - 0.5).abs() < 1e-13);
    }
}
