//! Spectral radius, Perron vectors and Collatz–Wielandt bounds for
//! non-negative matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;
use crate::matrix::FloatMatrix;

/// Relative accuracy required of every spectral-radius estimate.
pub const RHO_TOLERANCE: f64 = 1e-9;
/// Cap on power iterations.
pub const ITERATION_CAP: usize = 10_000;
/// Repeated squaring stops after `2^64`-th powers at the latest.
const MAX_SQUARINGS: usize = 64;
/// Residual target for Perron vectors.
pub const PERRON_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    PowerIteration,
    RepeatedSquaringGelfand,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub rho: f64,
    pub method: SpectralMethod,
    pub iterations: usize,
    /// Relative residual: Collatz–Wielandt bracket width for power iteration,
    /// last successive-estimate change for repeated squaring.
    pub residual: f64,
    /// Estimate from the other route, when one was computed.
    pub cross_check: Option<f64>,
}

struct Estimate {
    rho: f64,
    iterations: usize,
    residual: f64,
}

/// `rho = lim ||K^n||^{1/n}` along `n = 2^j`, renormalizing every square and
/// accumulating the log of the scale factors.
fn gelfand(k: &FloatMatrix) -> Estimate {
    let norm = k.norm_inf();
    if norm == 0.0 {
        return Estimate {
            rho: 0.0,
            iterations: 0,
            residual: 0.0,
        };
    }
    let mut m = k.scale(1.0 / norm);
    let mut log_scale = norm.ln();
    let mut prev = norm;
    let mut residual = f64::INFINITY;
    for j in 1..=MAX_SQUARINGS {
        m = m.mul(&m);
        let c = m.norm_inf();
        if c == 0.0 {
            return Estimate {
                rho: 0.0,
                iterations: j,
                residual: 0.0,
            };
        }
        m = m.scale(1.0 / c);
        log_scale = 2.0 * log_scale + c.ln();
        let est = (log_scale / 2f64.powi(j as i32)).exp();
        residual = (est - prev).abs() / est;
        prev = est;
        if j >= 4 && residual <= 4.0 * f64::EPSILON {
            return Estimate {
                rho: est,
                iterations: j,
                residual,
            };
        }
    }
    Estimate {
        rho: prev,
        iterations: MAX_SQUARINGS,
        residual,
    }
}

/// Power iteration on `K + shift*I` for an irreducible `K`. The positive
/// iterate yields the Collatz–Wielandt bracket `min (Kv)_z/v_z <= rho <= max`.
fn power_iteration(k: &FloatMatrix, shift: f64) -> (Estimate, Vec<f64>) {
    let n = k.dim();
    let mut v = vec![1.0 / n as f64; n];
    let mut best = Estimate {
        rho: f64::NAN,
        iterations: 0,
        residual: f64::INFINITY,
    };
    for it in 1..=ITERATION_CAP {
        let kv = k.mul_vec(&v);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (a, b) in kv.iter().zip(&v) {
            let r = a / b;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let width = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
        best = Estimate {
            rho: 0.5 * (lo + hi),
            iterations: it,
            residual: width,
        };
        if width <= 1e-14 {
            break;
        }
        let mut next: Vec<f64> = kv.iter().zip(&v).map(|(a, b)| a + shift * b).collect();
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        v = next;
    }
    (best, v)
}

fn irreducible(k: &FloatMatrix) -> bool {
    graph::is_strongly_connected(&k.support())
}

/// Spectral radius of a square non-negative matrix, to relative accuracy
/// [`RHO_TOLERANCE`].
///
/// Repeated squaring always runs. For irreducible matrices the reported value
/// comes from shifted power iteration (certified by its Collatz–Wielandt
/// bracket), with the squaring estimate kept as a cross-check; for reducible
/// matrices the squaring estimate is reported and cross-checked against the
/// largest radius over strongly connected diagonal blocks.
pub fn spectral_radius(k: &FloatMatrix) -> Result<SpectralReport> {
    k.check_nonnegative()?;
    let n = k.dim();
    if n == 0 {
        return Ok(SpectralReport {
            rho: 0.0,
            method: SpectralMethod::RepeatedSquaringGelfand,
            iterations: 0,
            residual: 0.0,
            cross_check: None,
        });
    }
    if n == 1 {
        return Ok(SpectralReport {
            rho: k.get(0, 0),
            method: SpectralMethod::PowerIteration,
            iterations: 0,
            residual: 0.0,
            cross_check: None,
        });
    }
    let g = gelfand(k);
    if irreducible(k) {
        let shift = if g.rho > 0.0 { g.rho } else { 1.0 };
        let (p, _) = power_iteration(k, shift);
        if p.residual <= RHO_TOLERANCE {
            return Ok(SpectralReport {
                rho: p.rho,
                method: SpectralMethod::PowerIteration,
                iterations: p.iterations,
                residual: p.residual,
                cross_check: Some(g.rho),
            });
        }
    }
    if g.residual > RHO_TOLERANCE {
        return Err(Error::NonConvergence {
            iterations: g.iterations,
            residual: g.residual,
        });
    }
    Ok(SpectralReport {
        rho: g.rho,
        method: SpectralMethod::RepeatedSquaringGelfand,
        iterations: g.iterations,
        residual: g.residual,
        cross_check: blockwise_radius(k),
    })
}

/// Largest spectral radius over the irreducible diagonal blocks.
fn blockwise_radius(k: &FloatMatrix) -> Option<f64> {
    let mut best = 0.0f64;
    for comp in graph::strongly_connected_components(&k.support()) {
        let block = k.submatrix(&comp);
        let r = if comp.len() == 1 {
            block.get(0, 0)
        } else {
            let g = gelfand(&block);
            let shift = if g.rho > 0.0 { g.rho } else { 1.0 };
            let (p, _) = power_iteration(&block, shift);
            if p.residual > RHO_TOLERANCE {
                return None;
            }
            p.rho
        };
        best = best.max(r);
    }
    Some(best)
}

/// Left and right Perron vectors of an irreducible matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronVectors {
    pub rho: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub left_residual: f64,
    pub right_residual: f64,
}

fn perron_right(k: &FloatMatrix, rho: f64) -> (Vec<f64>, f64) {
    let shift = if rho > 0.0 { rho } else { 1.0 };
    let (_, v) = power_iteration(k, shift);
    let residual = eigen_residual(k, &v, rho);
    (v, residual)
}

fn eigen_residual(k: &FloatMatrix, v: &[f64], rho: f64) -> f64 {
    k.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(a, b)| (a - rho * b).abs())
        .fold(0.0, f64::max)
}

/// Strictly positive left (`u^T K = rho u^T`) and right (`K v = rho v`)
/// eigenvectors, each normalized to unit sum.
pub fn perron_vectors(k: &FloatMatrix) -> Result<PerronVectors> {
    k.check_nonnegative()?;
    if k.dim() == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if !irreducible(k) {
        return Err(Error::Reducible);
    }
    let rho = spectral_radius(k)?.rho;
    let (right, right_residual) = perron_right(k, rho);
    let (left, left_residual) = perron_right(&k.transpose(), rho);
    let worst = right_residual.max(left_residual);
    if worst > PERRON_TOLERANCE {
        return Err(Error::NonConvergence {
            iterations: ITERATION_CAP,
            residual: worst,
        });
    }
    Ok(PerronVectors {
        rho,
        left,
        right,
        left_residual,
        right_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Lower,
    Upper,
}

/// Collatz–Wielandt ratio bound: min (lower) or max (upper) of `[Kw]_z / w_z`
/// over the support of `w`. The lower bound is certified for every
/// non-negative non-zero `w`; the upper bound needs `w > 0` wherever
/// `[Kw]_z > 0`, which is checked.
pub fn collatz_wielandt(k: &FloatMatrix, w: &[f64], mode: Bound) -> Result<f64> {
    if w.len() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: w.len(),
        });
    }
    if let Some(bad) = w.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::InvalidParameter(format!("negative weight {bad}")));
    }
    if w.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    let kw = k.mul_vec(w);
    if mode == Bound::Upper && kw.iter().zip(w).any(|(a, b)| *b == 0.0 && *a > 0.0) {
        return Err(Error::InvalidParameter(
            "upper bound needs positive weights wherever [Kw] is positive".into(),
        ));
    }
    let ratios = kw.iter().zip(w).filter(|(_, b)| **b > 0.0).map(|(a, b)| a / b);
    Ok(match mode {
        Bound::Lower => ratios.fold(f64::INFINITY, f64::min),
        Bound::Upper => ratios.fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> FloatMatrix {
        FloatMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn example1() -> FloatMatrix {
        m(&[&[0.0, 1.0, 0.25], &[0.75, 0.0, 0.0], &[1.0, 0.0, 0.0]])
    }

    /// Closed form for the spectral radius of a 2x2 matrix with real eigenvalues.
    fn rho_2x2(a: &FloatMatrix) -> f64 {
        let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
        let tr = p + s;
        let det = p * s - q * r;
        let disc = (tr * tr / 4.0 - det).sqrt();
        (tr / 2.0 + disc).abs().max((tr / 2.0 - disc).abs())
    }

    #[test]
    fn example1_radius_is_one() {
        let r = spectral_radius(&example1()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-9, "{r:?}");
        assert_eq!(r.method, SpectralMethod::PowerIteration);
        assert!((r.cross_check.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scalar_and_zero() {
        assert_eq!(spectral_radius(&m(&[&[1.0]])).unwrap().rho, 1.0);
        assert_eq!(spectral_radius(&m(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap().rho, 0.0);
    }

    #[test]
    fn counterexample_product() {
        let eps: f64 = 0.1;
        let a = m(&[&[eps, 1.0 / eps], &[0.0, eps]]);
        let b = a.transpose();
        let closed = eps * eps + 1.0 / (2.0 * eps * eps) + (1.0 + 1.0 / (4.0 * eps.powi(4))).sqrt();
        let r = spectral_radius(&a.mul(&b)).unwrap();
        assert!((r.rho - closed).abs() < 1e-6 * closed, "{} vs {}", r.rho, closed);
        assert!((closed - 100.02).abs() < 1e-3);
        let ra = spectral_radius(&a).unwrap();
        assert_eq!(ra.method, SpectralMethod::RepeatedSquaringGelfand);
        assert!((ra.rho - eps).abs() < 1e-12, "{ra:?}");
        assert!((spectral_radius(&b).unwrap().rho - eps).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_entries() {
        assert!(matches!(spectral_radius(&m(&[&[1.0, -1.0], &[0.0, 1.0]])), Err(Error::NegativeEntry { .. })));
    }

    #[test]
    fn perron_vectors_example1() {
        let k = example1();
        let p = perron_vectors(&k).unwrap();
        assert!(p.right.iter().all(|&x| x > 0.0));
        assert!(p.left.iter().all(|&x| x > 0.0));
        let kv = k.mul_vec(&p.right);
        for (a, b) in kv.iter().zip(&p.right) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!((p.right.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // (K - I) v = 0 solved by hand: v = (1, 3/4, 1) / (11/4)
        let exact = [4.0 / 11.0, 3.0 / 11.0, 4.0 / 11.0];
        for (a, b) in p.right.iter().zip(exact) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn perron_vectors_trivial_and_symmetric() {
        let p = perron_vectors(&m(&[&[1.0]])).unwrap();
        assert_eq!((p.left.clone(), p.right.clone()), (vec![1.0], vec![1.0]));
        let sym = m(&[&[0.5, 0.25, 0.0], &[0.25, 0.0, 0.5], &[0.0, 0.5, 0.25]]);
        let p = perron_vectors(&sym).unwrap();
        for (a, b) in p.left.iter().zip(&p.right) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(matches!(perron_vectors(&m(&[&[1.0, 1.0], &[0.0, 1.0]])), Err(Error::Reducible)));
    }

    #[test]
    fn collatz_wielandt_example1() {
        let k = example1();
        let p = perron_vectors(&k).unwrap();
        let lo = collatz_wielandt(&k, &p.right, Bound::Lower).unwrap();
        let hi = collatz_wielandt(&k, &p.right, Bound::Upper).unwrap();
        assert!((lo - 1.0).abs() < 1e-8 && (hi - 1.0).abs() < 1e-8);
        assert_eq!(collatz_wielandt(&k, &[1.0; 3], Bound::Lower).unwrap(), 0.75);
        assert_eq!(collatz_wielandt(&k, &[1.0; 3], Bound::Upper).unwrap(), 1.25);
        assert!(matches!(collatz_wielandt(&k, &[0.0; 3], Bound::Lower), Err(Error::ZeroVector)));
        assert_eq!(collatz_wielandt(&m(&[&[1.0]]), &[1.0], Bound::Upper).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn matches_closed_form_2x2(p in 0.0f64..4.0, q in 0.01f64..4.0, r in 0.01f64..4.0, s in 0.0f64..4.0) {
            let a = m(&[&[p, q], &[r, s]]);
            let rho = spectral_radius(&a).unwrap().rho;
            let exact = rho_2x2(&a);
            prop_assert!((rho - exact).abs() <= 1e-9 * exact.max(1e-300));
        }

        #[test]
        fn triangular_2x2(p in 0.0f64..4.0, q in 0.0f64..4.0, s in 0.0f64..4.0) {
            let a = m(&[&[p, q], &[0.0, s]]);
            let rho = spectral_radius(&a).unwrap().rho;
            let exact = p.max(s);
            prop_assert!((rho - exact).abs() <= 1e-9 * exact.max(1e-300));
        }
    }
}
