//! Dense phase-one simplex for `{ y >= 0 : G y <= h }`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum Phase1 {
    Feasible(Vec<f64>),
    Infeasible,
}

/// Decides feasibility of `G y <= h, y >= 0` by minimizing the sum of
/// artificial variables. Pivoting follows Bland's rule, so the method
/// terminates and is deterministic.
///
/// `rows` holds `G` row-major with `n_vars` columns.
pub fn phase_one(rows: &[Vec<f64>], rhs: &[f64], n_vars: usize, max_pivots: usize) -> Result<Phase1> {
    let m = rows.len();
    if rhs.iter().all(|&h| h >= 0.0) {
        return Ok(Phase1::Feasible(vec![0.0; n_vars]));
    }
    let needs_art: Vec<usize> = (0..m).filter(|&r| rhs[r] < 0.0).collect();
    let n_art = needs_art.len();
    let width = n_vars + m + n_art;
    let slack = |r: usize| n_vars + r;

    let mut tab = vec![vec![0.0; width]; m];
    let mut b = vec![0.0; m];
    let mut basis = vec![0usize; m];
    let mut art_col = n_vars + m;
    for r in 0..m {
        let flip = rhs[r] < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        for (j, &v) in rows[r].iter().enumerate() {
            tab[r][j] = sign * v;
        }
        tab[r][slack(r)] = sign;
        b[r] = sign * rhs[r];
        if flip {
            tab[r][art_col] = 1.0;
            basis[r] = art_col;
            art_col += 1;
        } else {
            basis[r] = slack(r);
        }
    }

    let original = tab.clone();
    let original_b = b.clone();
    let is_art = |j: usize| j >= n_vars + m;
    let scale = 1.0 + rhs.iter().fold(0.0f64, |acc, h| acc.max(h.abs()));
    let mut pivots = 0;
    let mut obj;
    loop {
        // reduced costs read off the current tableau, so they cannot drift
        let art_rows: Vec<usize> = (0..m).filter(|&r| is_art(basis[r])).collect();
        obj = art_rows.iter().map(|&r| b[r]).sum::<f64>();
        if obj <= 1e-11 * scale {
            break;
        }
        let reduced = |j: usize| f64::from(u8::from(is_art(j))) - art_rows.iter().map(|&r| tab[r][j]).sum::<f64>();
        let has_pivot = |j: usize| (0..m).any(|r| tab[r][j] > PIVOT_EPS);
        let Some(enter) = (0..width).find(|&j| reduced(j) < -COST_EPS && has_pivot(j)) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if tab[r][enter] > PIVOT_EPS {
                let ratio = b[r] / tab[r][enter];
                leave = match leave {
                    None => Some(r),
                    Some(best) => {
                        let best_ratio = b[best] / tab[best][enter];
                        if ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[best]) {
                            Some(r)
                        } else {
                            Some(best)
                        }
                    }
                };
            }
        }
        let leave = leave.expect("entering column has a pivot row");

        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::IterationCap(max_pivots));
        }
        let p = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v /= p;
        }
        b[leave] /= p;
        let pivot_row = tab[leave].clone();
        let pivot_b = b[leave];
        for r in 0..m {
            if r != leave {
                let f = tab[r][enter];
                if f != 0.0 {
                    for (v, pv) in tab[r].iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    b[r] -= f * pivot_b;
                    if b[r] < 0.0 && b[r] > -PIVOT_EPS {
                        b[r] = 0.0;
                    }
                }
            }
        }
        basis[leave] = enter;
    }

    if obj > 1e-9 * scale {
        return Ok(Phase1::Infeasible);
    }
    // recompute the basic solution from the original data to shed pivoting round-off
    let basis_matrix = DMatrix::from_fn(m, m, |i, k| original[i][basis[k]]);
    let values = basis_matrix.lu().solve(&DVector::from_vec(original_b)).map(|x| x.data.into()).unwrap_or(b);
    if values.iter().any(|&v| v < -1e-7 * scale) {
        log::debug!("phase-one basis drifted from the original system; witness will fail verification");
    }
    let mut y = vec![0.0; n_vars];
    for r in 0..m {
        if basis[r] < n_vars {
            y[basis[r]] = values[r].max(0.0);
        }
    }
    Ok(Phase1::Feasible(y))
}
