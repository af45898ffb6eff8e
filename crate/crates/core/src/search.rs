//! One-dimensional monotone and unimodal search.

/// Upper limit used when bracketing a generalized inverse.
pub const SEARCH_CAP: f64 = 1e300;

/// `inf { s >= 0 : f(s) > t }` for nondecreasing `f`, to full double precision.
///
/// Returns `+inf` when `f(s) <= t` up to [`SEARCH_CAP`].
pub fn generalized_inverse(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    if f(0.0) > t {
        return 0.0;
    }
    let (mut lo, mut hi);
    if f(1.0) > t {
        hi = 1.0;
        while hi > f64::MIN_POSITIVE && f(hi * 0.5) > t {
            hi *= 0.5;
        }
        lo = hi * 0.5;
        if hi <= f64::MIN_POSITIVE {
            lo = 0.0;
        }
    } else {
        lo = 1.0;
        loop {
            let next = lo * 2.0;
            if next > SEARCH_CAP {
                return f64::INFINITY;
            }
            if f(next) > t {
                hi = next;
                break;
            }
            lo = next;
        }
    }
    // invariant: f(lo) <= t < f(hi)
    for _ in 0..200 {
        let mid = lo + (hi - lo) * 0.5;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Returns the best abscissa seen and its value.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rel_width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut best = if f(lo) >= f(hi) { (lo, f(lo)) } else { (hi, f(hi)) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        let width = hi - lo;
        if width <= rel_width * lo.abs().max(hi.abs()) || width < 1e-300 {
            break;
        }
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
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}
