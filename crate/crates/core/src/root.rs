//! Bracketing bisection used by the fixed-point solvers.

/// Outcome of a bisection run on a bracket `[lo, hi]` with `f(lo)` and
/// `f(hi)` of opposite sign.
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    pub root: f64,
    pub iterations: usize,
}

/// Bisects until the bracket is narrower than `x_tol` (absolute) or
/// `rel_tol · |x|`, or `f` hits zero exactly. Midpoints are geometric while
/// the bracket spans more than a factor of four on the positive axis.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Bisection {
    let mut f_lo = f(lo);
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Bisection {
                root: mid,
                iterations,
            };
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= x_tol.max(rel_tol * hi.abs()) {
            break;
        }
    }
    Bisection {
        root: 0.5 * (lo + hi),
        iterations,
    }
}
