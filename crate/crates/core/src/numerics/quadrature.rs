//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        // Gauss nodes are the odd-indexed Kronrod nodes.
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` by global adaptive bisection until the summed
/// error estimate drops below `abs_tol`, or `max_intervals` is reached.
///
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// tolerated.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;

    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= abs_tol || intervals.len() >= max_intervals {
            break;
        }
        // split the interval with the largest error estimate
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval cannot be split further at double precision
            intervals.push((lo, hi, 0.0, 0.0));
            continue;
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }

    // sum in interval order for a deterministic result
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = intervals.iter().map(|iv| iv.2).sum();
    let abs_error = intervals.iter().map(|iv| iv.3).sum();
    QuadResult {
        value,
        abs_error,
        evaluations,
    }
}

/// Integrates `f` over `[0, ∞)` by splitting at 1 and mapping the tail
/// `[1, ∞)` onto `(0, 1]` with `x = 1/u`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    let head = integrate(&mut f, 0.0, 1.0, 0.5 * abs_tol, max_intervals);
    let tail = integrate(
        |u| f(1.0 / u) / (u * u),
        0.0,
        1.0,
        0.5 * abs_tol,
        max_intervals,
    );
    QuadResult {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
        evaluations: head.evaluations + tail.evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 50);
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-10, 2000);
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn half_line_gaussian() {
        let r = integrate_half_line(|x| (-0.5 * x * x).exp(), 1e-12, 500);
        assert!((r.value - (PI / 2.0).sqrt()).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn half_line_power_tail() {
        // ∫_0^∞ 1/(1+x)^3 dx = 1/2
        let r = integrate_half_line(|x| (1.0 + x).powi(-3), 1e-12, 500);
        assert!((r.value - 0.5).abs() < 1e-11);
    }
}
