use nalgebra::DMatrix;

use crate::copositive::MatrixSet;
use crate::error::{Error, Result};

/// Squarings before giving up; `2^k` stays representable well past this.
pub const MAX_SQUARINGS: usize = 200;
pub const MAX_PRODUCTS: u128 = 1_000_000;

fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.sum()).fold(0.0, f64::max)
}

/// Perron root of a nonnegative square matrix.
///
/// Power iteration on the matrix powers themselves: `B ← B² / ‖B²‖_∞`
/// with the scale kept in log form, so that after `k` squarings the estimate
/// is `‖A^{2^k}‖_∞^{1/2^k}`. This converges to `ρ(A)` for every matrix,
/// including periodic and defective ones where vector iteration stalls, and
/// involves no cancellation because every entry stays nonnegative.
/// Iteration stops when two successive estimates differ by less than `tol`.
pub fn spectral_radius(a: &DMatrix<f64>, tol: f64) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
    }
    if let Some((index, &value)) = a.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::NegativeMatrixEntry { index, value });
    }
    let norm = inf_norm(a);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let mut b = a / norm;
    let mut log_scale = norm.ln();
    let mut power = 1.0f64;
    let mut previous = norm;
    for _ in 0..MAX_SQUARINGS {
        let square = &b * &b;
        let norm = inf_norm(&square);
        if norm == 0.0 {
            return Ok(0.0);
        }
        b = square / norm;
        log_scale = 2.0 * log_scale + norm.ln();
        power *= 2.0;
        let estimate = (log_scale / power).exp();
        if (estimate - previous).abs() < tol {
            return Ok(estimate);
        }
        previous = estimate;
    }
    Err(Error::NoConvergence { iterations: MAX_SQUARINGS, estimate: previous })
}

/// Bounds on the joint spectral radius from all products of length at most
/// `depth`: the lower bound is `max ρ(P)^{1/k}` and the upper bound is
/// `min_k max ‖P‖_∞^{1/k}`.
pub fn brute_force_bounds(a: &MatrixSet, depth: usize) -> Result<(f64, f64)> {
    if depth < 1 {
        return Err(Error::InvalidParameter("product depth must be at least 1".into()));
    }
    let m = a.len() as u128;
    let total: u128 = (1..=depth as u32).map(|k| m.saturating_pow(k)).fold(0, u128::saturating_add);
    if total > MAX_PRODUCTS {
        return Err(Error::CapExceeded { what: "number of matrix products", size: total, cap: MAX_PRODUCTS });
    }

    let mut lower: f64 = 0.0;
    let mut norm_max = vec![0.0f64; depth];
    // depth-first over words, extending each product on the left
    let mut stack: Vec<(DMatrix<f64>, usize)> = a.matrices().iter().map(|p| (p.clone(), 1)).collect();
    while let Some((product, k)) = stack.pop() {
        let exponent = 1.0 / k as f64;
        let rho = spectral_radius(&product, 1e-13)?;
        lower = lower.max(rho.powf(exponent));
        let inf_norm = inf_norm(&product);
        norm_max[k - 1] = norm_max[k - 1].max(inf_norm.powf(exponent));
        if k < depth {
            for next in a.matrices() {
                stack.push((next * &product, k + 1));
            }
        }
    }
    let upper = norm_max.into_iter().fold(f64::INFINITY, f64::min);
    Ok((lower, upper))
}
