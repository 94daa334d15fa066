//! Derivative-free scalar root finding.

/// Maximum number of doublings when searching for a bracket.
pub const MAX_EXPANSIONS: u32 = 64;

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
/// Runs until the interval stops shrinking in floating point and returns
/// the endpoint with the smaller residual.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(
        flo.signum() != fhi.signum(),
        "no sign change on [{lo}, {hi}]"
    );
    for _ in 0..2100 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if flo.abs() <= fhi.abs() {
        lo
    } else {
        hi
    }
}

/// Walks from `start` in direction `dir` (±1) with doubling steps until `f`
/// changes sign. Returns the bracket in increasing order.
pub fn bracket_outward(f: impl Fn(f64) -> f64, start: f64, dir: f64) -> Option<(f64, f64)> {
    let f0 = f(start);
    let mut inner = start;
    let mut step = 1.0;
    for _ in 0..MAX_EXPANSIONS {
        let x = start + dir * step;
        let fx = f(x);
        if !fx.is_finite() {
            return None;
        }
        if fx == 0.0 || fx.signum() != f0.signum() {
            return Some(if dir > 0.0 { (inner, x) } else { (x, inner) });
        }
        inner = x;
        step *= 2.0;
    }
    None
}

/// Largest `x` in `[lo, hi]` where the monotone predicate still holds,
/// given that it holds at `lo`. Stops once the interval is below `tol`.
pub fn last_true(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if pred(hi) {
        return hi;
    }
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
