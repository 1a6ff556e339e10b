//! Deterministic one-dimensional maximisation: a uniform scan followed by
//! golden-section refinement around the best sample.

/// Inverse golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a one-dimensional maximisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

fn rank(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping when
/// the bracket is narrower than `tol`.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (rank(f(c)), rank(f(d)));
    let mut evaluations = 2;
    while b - a > tol && evaluations < 400 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = rank(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = rank(f(d));
        }
        evaluations += 1;
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Maximum {
        x,
        value,
        evaluations,
    }
}

/// Scans `n` equispaced points on `[lo, hi]` plus any `seeds` inside the
/// interval, then refines between the neighbours of the best sample.
///
/// Never returns a value worse than the best scanned sample.
pub fn scan_refine(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
    seeds: &[f64],
    tol: f64,
) -> Maximum {
    let n = n.max(2);
    let mut xs: Vec<f64> = (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .chain(seeds.iter().copied().filter(|s| s.is_finite() && (lo..=hi).contains(s)))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let values: Vec<f64> = xs.iter().map(|&x| rank(f(x))).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |i, (j, &v)| if v > values[i] { j } else { i });
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(xs.len() - 1)];
    let refined = golden_max(&mut f, a, b, tol);
    let evaluations = xs.len() + refined.evaluations;
    if refined.value >= values[best] {
        Maximum {
            evaluations,
            ..refined
        }
    } else {
        Maximum {
            x: xs[best],
            value: values[best],
            evaluations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let m = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-8);
    }

    #[test]
    fn scan_picks_global_peak() {
        // two bumps; golden alone from the full bracket could pick either
        let f = |x: f64| (-(x + 2.0).powi(2)).exp() + 2.0 * (-(x - 3.0).powi(2) * 50.0).exp();
        let m = scan_refine(f, -5.0, 5.0, 64, &[], 1e-10);
        assert!((m.x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn seeds_rescue_narrow_peaks() {
        let f = |x: f64| if (x - 0.123).abs() < 1e-4 { 1.0 - (x - 0.123).abs() } else { 0.0 };
        let m = scan_refine(f, -5.0, 5.0, 64, &[0.123], 1e-10);
        assert!((m.x - 0.123).abs() < 1e-6);
    }

    #[test]
    fn nan_is_worst() {
        let m = scan_refine(|x| if x < 0.0 { f64::NAN } else { -x }, -1.0, 1.0, 11, &[], 1e-9);
        assert!(m.x.abs() < 1e-6);
    }
}
