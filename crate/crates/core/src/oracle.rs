//! Solver-independent ground truth: brute-force vertex enumeration for the
//! true minimum, and the Chebyshev-center LP whose optimum is the inradius.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lp::LinearProgram;

pub const DEFAULT_ENUMERATION_GUARD: u128 = 1_000_000;

/// Feasibility slack allowed when classifying enumerated basic points.
/// Scaled by the row magnitude so large-coefficient instances are not
/// misclassified.
const FEASIBILITY_TOL: f64 = 1e-8;

fn binomial(m: usize, n: usize) -> u128 {
    if n > m {
        return 0;
    }
    let k = n.min(m - n);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    num
}

/// Exact minimum of a bounded LP by enumerating all n-subsets of rows,
/// solving each square system, and keeping the feasible basic points.
///
/// Refuses to start when `C(m, n)` exceeds `guard` (default 10^6).
/// Singular bases are skipped; ties are resolved by value alone.
pub fn min_value_oracle(lp: &LinearProgram, guard: Option<u128>) -> Result<f64> {
    let guard = guard.unwrap_or(DEFAULT_ENUMERATION_GUARD);
    let m = lp.num_constraints();
    let n = lp.num_vars();
    let combos = binomial(m, n);
    if combos > guard {
        return Err(Error::GuardExceeded {
            m,
            n,
            combinations: combos,
            guard,
        });
    }

    let a = lp.a();
    let b = lp.b();
    let row_scale: Vec<f64> = (0..m)
        .map(|i| a.row(i).iter().map(|v| v.abs()).fold(1.0f64, f64::max) + b[i].abs())
        .collect();

    let mut best: Option<f64> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    let mut basis = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);

    loop {
        for (k, &i) in subset.iter().enumerate() {
            basis.row_mut(k).copy_from(&a.row(i));
            rhs[k] = b[i];
        }
        if let Some(x) = basis.clone().lu().solve(&rhs) {
            // LU "solves" nearly singular systems with huge components;
            // re-check the residual before trusting the point.
            let residual_ok = subset.iter().all(|&i| {
                let r = a.row(i).transpose().dot(&x) - b[i];
                r.abs() <= FEASIBILITY_TOL * row_scale[i] * x.amax().max(1.0)
            });
            if residual_ok {
                let s = b - a * &x;
                let feasible = (0..m).all(|i| s[i] >= -FEASIBILITY_TOL * row_scale[i] * x.amax().max(1.0));
                if feasible {
                    let v = lp.objective(&x);
                    best = Some(match best {
                        Some(cur) => cur.min(v),
                        None => v,
                    });
                }
            }
        }

        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return best.ok_or(Error::NoFeasibleVertex);
            }
            i -= 1;
            if subset[i] != i + m - n {
                break;
            }
        }
        if subset[i] == i + m - n {
            return best.ok_or(Error::NoFeasibleVertex);
        }
        subset[i] += 1;
        for j in i + 1..n {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// The Chebyshev-center LP of `lp`: in variables (x, rho),
///
/// ```text
///   min -rho   s.t.   a_i'x + rho * ||a_i||_2 <= b_i,   -rho <= 0
/// ```
///
/// Its optimal value is minus the inradius of `{Ax <= b}`, and the x-part of
/// an optimizer is a deepest interior point. When the source instance has an
/// interior witness, a strictly feasible (x, rho) pair is attached so the
/// result can be path-followed directly.
pub fn chebyshev_lp(lp: &LinearProgram) -> Result<LinearProgram> {
    let m = lp.num_constraints();
    let n = lp.num_vars();
    let a = lp.a();
    let b = lp.b();

    let mut a2 = DMatrix::<f64>::zeros(m + 1, n + 1);
    let mut b2 = DVector::<f64>::zeros(m + 1);
    for i in 0..m {
        for j in 0..n {
            a2[(i, j)] = a[(i, j)];
        }
        a2[(i, n)] = a.row(i).norm();
        b2[i] = b[i];
    }
    a2[(m, n)] = -1.0;
    b2[m] = 0.0;

    let mut c2 = DVector::<f64>::zeros(n + 1);
    c2[n] = -1.0;

    let mut out = LinearProgram::new(a2, b2, c2)?;
    if let Some(w) = &lp.interior_witness {
        let s = lp.slacks(w)?;
        let max_norm = (0..m).map(|i| a.row(i).norm()).fold(0.0f64, f64::max);
        if max_norm > 0.0 {
            let rho0 = 0.5 * s.min() / max_norm;
            if rho0 > 0.0 {
                let mut w2 = DVector::<f64>::zeros(n + 1);
                w2.rows_mut(0, n).copy_from(w);
                w2[n] = rho0;
                out = out.with_interior_witness(w2)?;
            }
        }
    }
    Ok(out)
}
