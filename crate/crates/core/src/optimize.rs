//! One-dimensional search for unimodal objectives.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = golden_section_max(|t| -f(t), a, b, tol);
    (x, -fx)
}

/// Maximum of a unimodal `f` on `[lo, hi]`: a coarse scan of `points` evenly
/// spaced abscissae locates the peak, golden-section refines it. Endpoints
/// are always candidates.
pub fn maximize_unimodal(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, tol: f64) -> (f64, f64) {
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for i in 1..points {
        if ys[i] > ys[best] {
            best = i;
        }
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(points - 1)];
    let (x, fx) = golden_section_max(&f, a, b, tol);
    if fx >= ys[best] {
        (x, fx)
    } else {
        (xs[best], ys[best])
    }
}
