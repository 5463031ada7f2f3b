//! Bracketed scalar root finding.

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolution {
    pub root: f64,
    pub iterations: usize,
    /// Final bracket `(lo, hi)`; `f` changes sign (or vanishes) across it.
    pub bracket: (f64, f64),
    /// `f(root)`.
    pub residual: f64,
}

/// Brent's method on `[a, b]`, assuming `f(a)` and `f(b)` have opposite signs.
///
/// Stops as soon as `|f| <= ftol`, or when the bracket has shrunk to a couple
/// of ulps, or after `max_iter` iterations. Returns `None` if the endpoints
/// do not bracket a root.
pub fn brent<F>(mut f: F, a: f64, b: f64, ftol: f64, max_iter: usize) -> Option<RootSolution>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(RootSolution {
            root: a,
            iterations: 0,
            bracket: (a, a),
            residual: 0.0,
        });
    }
    if fb == 0.0 {
        return Some(RootSolution {
            root: b,
            iterations: 0,
            bracket: (b, b),
            residual: 0.0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }

    // b is the best estimate, a the previous one, c the contrapoint.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let mut iterations = 0;

    while iterations < max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let xtol = 2.0 * f64::EPSILON * b.abs() + 0.5e-300;
        let half = 0.5 * (c - b);
        if fb.abs() <= ftol || half.abs() <= xtol {
            break;
        }
        iterations += 1;

        if e.abs() >= xtol && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when a == c.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * half * q - (xtol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > xtol {
            d
        } else {
            xtol.copysign(half)
        };
        fb = f(b);
    }

    let bracket = if b <= c { (b, c) } else { (c, b) };
    Some(RootSolution {
        root: b,
        iterations,
        bracket,
        residual: fb,
    })
}

/// Plain bisection on `[lo, hi]` until the bracket is narrower than `xtol`.
/// Requires `f(lo) < 0 < f(hi)` or the reverse.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Option<RootSolution>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    let increasing = flo < 0.0;
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut fmid = f(mid);
    while (hi - lo) > xtol && iterations < max_iter {
        if fmid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (fmid < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
        iterations += 1;
    }
    Some(RootSolution {
        root: mid,
        iterations,
        bracket: (lo, hi),
        residual: fmid,
    })
}
