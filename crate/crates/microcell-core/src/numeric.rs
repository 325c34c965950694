//! Small numeric helpers used across the models.
//!
//! Transcendentals go through `libm` so that results are identical on `std`
//! and `no_std` builds.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Bracketed bisection for a continuous function with `f(lo)` and `f(hi)` of
/// opposite sign. Converges to `|hi - lo| <= max(tol_abs, tol_rel * |x|)`.
///
/// The iteration count is bounded; 200 halvings of any finite bracket reach
/// f64 resolution long before the cap.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    tol_abs: f64,
    tol_rel: f64,
    mut f: F,
) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol_abs.max(tol_rel * mid.abs()) {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo > 0.0) == (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
