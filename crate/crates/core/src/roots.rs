//! Bracketed one-dimensional root finders.

/// Bisection on a sign change. `f(lo)` and `f(hi)` must differ in sign (or
/// one of them be zero). Runs until the bracket cannot shrink any further.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(if flo.abs() < f(hi).abs() { lo } else { hi })
}

/// Newton iteration kept inside a sign-change bracket. `fdf` returns the
/// function value and its derivative. Steps that would leave the bracket
/// fall back to bisection.
pub fn safeguarded_newton<F: Fn(f64) -> (f64, f64)>(
    fdf: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
) -> Option<f64> {
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let lo_sign = flo.signum();
    let mut x = start.clamp(lo, hi);
    for _ in 0..100 {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
            // polish: pick the better of the two neighbours
            let (fn_, _) = fdf(next);
            return Some(if fn_.abs() < fx.abs() { next } else { x });
        }
        x = next;
    }
    Some(x)
}
