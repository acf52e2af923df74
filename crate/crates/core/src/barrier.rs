//! Logarithmic and weighted-logarithmic barriers over `{Ax <= b}`, their
//! derivatives, the local norms they induce, and ellipsoid machinery.
//!
//! For weights w_i >= 1 the barrier is
//!
//! ```text
//!   phi(x) = -sum_i w_i ln(b - Ax)_i
//! ```
//!
//! with parameter nu = sum_i w_i (nu = m for the plain barrier). Two
//! inequalities make it a nu-self-concordant barrier and both are checkable
//! numerically:
//!
//! ```text
//!   |D^3 phi(x)[h,h,h]| <= 2 (D^2 phi(x)[h,h])^(3/2)
//!   |D phi(x)[h]|       <= (nu * D^2 phi(x)[h,h])^(1/2)
//! ```

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::LinearProgram;

/// Barrier value, gradient, and Hessian at a strictly feasible point.
#[derive(Debug, Clone)]
pub struct BarrierEval {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

/// Serializable description of a barrier, for manifests and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub nu: f64,
}

/// A barrier bound to the instance it lives on.
#[derive(Debug, Clone)]
pub struct Barrier<'a> {
    lp: &'a LinearProgram,
    /// None means the plain logarithmic barrier (all weights 1).
    weights: Option<DVector<f64>>,
    nu: f64,
}

impl<'a> Barrier<'a> {
    /// The plain logarithmic barrier; nu = m exactly.
    pub fn log(lp: &'a LinearProgram) -> Self {
        Self {
            lp,
            weights: None,
            nu: lp.num_constraints() as f64,
        }
    }

    /// Weighted-log barrier. Every weight must be >= 1 for the
    /// self-concordance parameter to be sum(w).
    pub fn weighted_log(lp: &'a LinearProgram, weights: DVector<f64>) -> Result<Self> {
        if weights.len() != lp.num_constraints() {
            return Err(Error::Dimension {
                what: "weights",
                expected: lp.num_constraints(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|&&w| !(w >= 1.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "barrier weights must be finite and >= 1, got {w}"
            )));
        }
        let nu = weights.sum();
        Ok(Self {
            lp,
            weights: Some(weights),
            nu,
        })
    }

    /// The default non-trivial weighting: alternating 2, 1, 2, 1, ...
    pub fn alternating(lp: &'a LinearProgram) -> Self {
        let w = DVector::from_fn(lp.num_constraints(), |i, _| {
            if i % 2 == 0 {
                2.0
            } else {
                1.0
            }
        });
        Self::weighted_log(lp, w).expect("alternating weights are valid")
    }

    pub fn lp(&self) -> &'a LinearProgram {
        self.lp
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn weights(&self) -> Option<&DVector<f64>> {
        self.weights.as_ref()
    }

    pub fn spec(&self) -> BarrierSpec {
        BarrierSpec {
            kind: if self.weights.is_some() {
                "weighted-log".into()
            } else {
                "log".into()
            },
            weights: self.weights.as_ref().map(|w| w.iter().copied().collect()),
            nu: self.nu,
        }
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Value, gradient `sum w_i a_i / s_i`, and Hessian
    /// `sum w_i a_i a_i' / s_i^2` at `x`. Errors when `x` is not interior.
    pub fn eval(&self, x: &DVector<f64>) -> Result<BarrierEval> {
        let s = self.lp.slacks(x)?;
        if let Some(row) = (0..s.len()).find(|&i| s[i] <= 0.0) {
            return Err(Error::NotInterior {
                row,
                min_slack: s[row],
            });
        }
        let a = self.lp.a();
        let (m, n) = a.shape();

        let mut value = 0.0;
        let mut gradient = DVector::<f64>::zeros(n);
        let mut hessian = DMatrix::<f64>::zeros(n, n);
        for i in 0..m {
            let w = self.weight(i);
            value -= w * s[i].ln();
            let row = a.row(i);
            let gi = w / s[i];
            let hi = w / (s[i] * s[i]);
            for j in 0..n {
                gradient[j] += gi * row[j];
                for k in j..n {
                    hessian[(j, k)] += hi * row[j] * row[k];
                }
            }
        }
        for j in 0..n {
            for k in 0..j {
                hessian[(j, k)] = hessian[(k, j)];
            }
        }
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    /// Dikin ellipsoid `E(hessian(x), x)`; always inside the feasible region.
    pub fn dikin_ellipsoid(&self, x: &DVector<f64>) -> Result<Ellipsoid> {
        let e = self.eval(x)?;
        Ok(Ellipsoid {
            q: e.hessian,
            center: x.clone(),
        })
    }
}

/// Cholesky factor of a positive definite matrix, wrapped so call sites get
/// dual norms and solves without re-factoring.
pub struct PdFactor {
    chol: Cholesky<f64, Dyn>,
}

impl PdFactor {
    pub fn new(h: &DMatrix<f64>) -> Result<Self> {
        Cholesky::new(h.clone())
            .map(|chol| Self { chol })
            .ok_or(Error::NotPositiveDefinite)
    }

    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(v)
    }

    /// `sqrt(v' H^-1 v)`, clamped against tiny negative round-off.
    pub fn dual_norm(&self, v: &DVector<f64>) -> f64 {
        let y = self.chol.solve(v);
        v.dot(&y).max(0.0).sqrt()
    }

    /// Maps a unit vector u to a point d with `d' H d = ||u||^2`
    /// (solves `L' d = u`).
    pub fn unit_to_boundary(&self, u: &DVector<f64>) -> DVector<f64> {
        self.chol
            .l()
            .transpose()
            .solve_upper_triangular(u)
            .expect("Cholesky factor has positive diagonal")
    }
}

/// `sqrt(h' H h)`: the norm the Hessian induces at the evaluation point.
pub fn local_norm(h_matrix: &DMatrix<f64>, h: &DVector<f64>) -> f64 {
    ((h_matrix * h).dot(h)).max(0.0).sqrt()
}

/// `sqrt(h' H^-1 h)`: the dual local norm. Factors once per call; prefer
/// [`PdFactor`] when several norms share a Hessian.
pub fn dual_norm(h_matrix: &DMatrix<f64>, h: &DVector<f64>) -> Result<f64> {
    Ok(PdFactor::new(h_matrix)?.dual_norm(h))
}

/// `{ y : (y - center)' Q (y - center) <= 1 }` with Q positive definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub q: DMatrix<f64>,
    pub center: DVector<f64>,
}

/// Extremes of a linear functional over an ellipsoid.
#[derive(Debug, Clone)]
pub struct EllipsoidOpt {
    pub max_value: f64,
    pub min_value: f64,
    pub argmax: DVector<f64>,
    pub argmin: DVector<f64>,
}

/// Closed-form linear optimization over an ellipsoid:
/// `max a'y = a'center + sqrt(a' Q^-1 a)`, attained at
/// `center + Q^-1 a / sqrt(a' Q^-1 a)`; min mirrored.
pub fn ellipsoid_linopt(e: &Ellipsoid, a: &DVector<f64>) -> Result<EllipsoidOpt> {
    if a.len() != e.center.len() {
        return Err(Error::Dimension {
            what: "direction entries",
            expected: e.center.len(),
            got: a.len(),
        });
    }
    if a.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroDirection);
    }
    let factor = PdFactor::new(&e.q)?;
    let qinv_a = factor.solve(a);
    let radius = a.dot(&qinv_a).max(0.0).sqrt();
    let base = a.dot(&e.center);
    let dir = &qinv_a / radius;
    Ok(EllipsoidOpt {
        max_value: base + radius,
        min_value: base - radius,
        argmax: &e.center + &dir,
        argmin: &e.center - &dir,
    })
}

/// The path-proximity constant `C_nu = nu + 2 sqrt(nu)`.
pub fn c_nu(nu: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "c_nu needs nu >= 0, got {nu}"
        )));
    }
    Ok(nu + 2.0 * nu.sqrt())
}

/// Outcome of a single inequality check: satisfied iff
/// `lhs <= rhs * (1 + rel_tol) + abs_tol`.
#[derive(Debug, Clone, Copy)]
pub struct IneqCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Self-concordance inequality along direction h. The third derivative is
/// estimated by a central finite difference of `h' hessian(.) h` along h:
///
/// ```text
///   lhs = |h' H(x + e h) h - h' H(x - e h) h| / (2e)
///   rhs = 2 (h' H(x) h)^(3/2)
/// ```
///
/// Pass `fd_tol` as the relative slack absorbing the O(e^2) truncation
/// error; 5e-3 works with the default step.
pub fn check_sc_inequality(
    bar: &Barrier<'_>,
    x: &DVector<f64>,
    h: &DVector<f64>,
    fd_step: f64,
    fd_tol: f64,
) -> Result<IneqCheck> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {fd_step}"
        )));
    }
    let e0 = bar.eval(x)?;
    let quad0 = local_norm(&e0.hessian, h);
    let rhs = 2.0 * quad0.powi(3);

    let xp = x + h * fd_step;
    let xm = x - h * fd_step;
    let ep = bar.eval(&xp)?;
    let em = bar.eval(&xm)?;
    let qp = (&ep.hessian * h).dot(h);
    let qm = (&em.hessian * h).dot(h);
    let lhs = ((qp - qm) / (2.0 * fd_step)).abs();

    Ok(IneqCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + fd_tol) + 1e-10,
    })
}

/// The nu-barrier inequality `|grad(x)'h| <= sqrt(nu * h' H(x) h)`,
/// checked exactly (no finite differences) with absolute slack `tol`.
pub fn check_nu_sc(
    bar: &Barrier<'_>,
    x: &DVector<f64>,
    h: &DVector<f64>,
    tol: f64,
) -> Result<IneqCheck> {
    let e = bar.eval(x)?;
    let lhs = e.gradient.dot(h).abs();
    let rhs = (bar.nu() * (&e.hessian * h).dot(h)).max(0.0).sqrt();
    Ok(IneqCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{generate_lw, unit_box, LwParams};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fd_gradient(bar: &Barrier<'_>, x: &DVector<f64>, step: f64) -> DVector<f64> {
        let n = x.len();
        DVector::from_fn(n, |j, _| {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            (bar.eval(&xp).unwrap().value - bar.eval(&xm).unwrap().value) / (2.0 * step)
        })
    }

    fn fd_hessian_column(bar: &Barrier<'_>, x: &DVector<f64>, j: usize, step: f64) -> DVector<f64> {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += step;
        xm[j] -= step;
        (bar.eval(&xp).unwrap().gradient - bar.eval(&xm).unwrap().gradient) / (2.0 * step)
    }

    #[test]
    fn box_derivatives_match_hand_values() {
        let lp = unit_box();
        let bar = Barrier::log(&lp);
        let x = DVector::from_vec(vec![0.9]);
        let e = bar.eval(&x).unwrap();
        // gradient = 1/s1 - 1/s2 with s = (0.1, 0.9)
        assert_relative_eq!(e.gradient[0], 1.0 / 0.1 - 1.0 / 0.9, max_relative = 1e-14);
        assert_relative_eq!(
            e.hessian[(0, 0)],
            1.0 / 0.01 + 1.0 / 0.81,
            max_relative = 1e-14
        );

        let wbar = Barrier::alternating(&lp);
        let x = DVector::from_vec(vec![0.5]);
        let e = wbar.eval(&x).unwrap();
        assert_relative_eq!(e.gradient[0], 2.0, max_relative = 1e-14);
        assert_eq!(wbar.nu(), 3.0);
    }

    #[test]
    fn derivatives_match_finite_differences_on_lw() {
        let params = LwParams::new(2, 4.0).unwrap();
        let lp = generate_lw(params);
        let mut rng = ChaCha8Rng::seed_from_u64(20240901);
        let base = crate::lp::lw_interior_point(params);
        for bar in [Barrier::log(&lp), Barrier::alternating(&lp)] {
            for _ in 0..20 {
                // random interior point near the witness
                let mut x = base.clone();
                for v in x.iter_mut() {
                    *v *= 0.5 + rng.gen::<f64>();
                }
                if !lp.is_interior(&x) {
                    continue;
                }
                let step = 1e-5 * (x.norm() + 1.0);
                let e = bar.eval(&x).unwrap();
                let g_fd = fd_gradient(&bar, &x, step);
                for j in 0..x.len() {
                    let denom = e.gradient[j].abs().max(1.0);
                    assert!(
                        (e.gradient[j] - g_fd[j]).abs() / denom <= 1e-6,
                        "gradient mismatch at {j}: {} vs {}",
                        e.gradient[j],
                        g_fd[j]
                    );
                    let h_fd = fd_hessian_column(&bar, &x, j, step);
                    for k in 0..x.len() {
                        let denom = e.hessian[(k, j)].abs().max(1.0);
                        assert!(
                            (e.hessian[(k, j)] - h_fd[k]).abs() / denom <= 1e-6,
                            "hessian mismatch at ({k},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn third_derivative_on_box_matches_analytic_reference() {
        // For the 1-D box, phi'''(x) = 2/s1^3 - 2/s2^3 with s1 = 1-x, s2 = x.
        let lp = unit_box();
        let bar = Barrier::log(&lp);
        let x = DVector::from_vec(vec![0.9]);
        let h = DVector::from_vec(vec![1.0]);
        let exact = 2.0 / 0.1f64.powi(3) - 2.0 / 0.9f64.powi(3);
        let step = 1e-6;
        let ep = bar.eval(&(&x + &h * step)).unwrap();
        let em = bar.eval(&(&x - &h * step)).unwrap();
        let fd = (ep.hessian[(0, 0)] - em.hessian[(0, 0)]) / (2.0 * step);
        assert_relative_eq!(fd, exact, max_relative = 1e-6);
    }

    #[test]
    fn sc_inequalities_hold_on_random_draws() {
        let params = LwParams::new(2, 4.0).unwrap();
        let lp = generate_lw(params);
        let base = crate::lp::lw_interior_point(params);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bar in [Barrier::log(&lp), Barrier::alternating(&lp)] {
            for _ in 0..50 {
                let mut x = base.clone();
                for v in x.iter_mut() {
                    *v *= 0.5 + rng.gen::<f64>();
                }
                if !lp.is_interior(&x) {
                    continue;
                }
                let h = DVector::from_fn(x.len(), |_, _| rng.gen::<f64>() - 0.5);
                let step = 1e-5 * (x.norm() + 1.0);
                // keep x +- step*h interior for the stencil
                if !lp.is_interior(&(&x + &h * step)) || !lp.is_interior(&(&x - &h * step)) {
                    continue;
                }
                let sc = check_sc_inequality(&bar, &x, &h, step, 5e-3).unwrap();
                assert!(sc.satisfied, "SC failed: lhs={} rhs={}", sc.lhs, sc.rhs);
                let nu = check_nu_sc(&bar, &x, &h, 1e-8).unwrap();
                assert!(nu.satisfied, "nu-SC failed: lhs={} rhs={}", nu.lhs, nu.rhs);
            }
        }
    }

    #[test]
    fn dikin_ellipsoid_stays_feasible() {
        let params = LwParams::new(3, 10.0).unwrap();
        let lp = generate_lw(params);
        let bar = Barrier::log(&lp);
        let x = crate::lp::lw_interior_point(params);
        let e = bar.dikin_ellipsoid(&x).unwrap();
        let factor = PdFactor::new(&e.q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut u = DVector::from_fn(x.len(), |_, _| {
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            u /= u.norm();
            let d = factor.unit_to_boundary(&u);
            // boundary points of the ellipsoid must remain feasible
            let y = &x + &d;
            let s = lp.slacks(&y).unwrap();
            assert!(
                s.iter().all(|&v| v >= -1e-9),
                "Dikin boundary left the region: min slack {:e}",
                s.min()
            );
        }
    }

    #[test]
    fn ellipsoid_linopt_matches_hand_example_and_boundary() {
        let e = Ellipsoid {
            q: DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]),
            center: DVector::from_vec(vec![0.0, 0.0]),
        };
        let a = DVector::from_vec(vec![1.0, 0.0]);
        let opt = ellipsoid_linopt(&e, &a).unwrap();
        assert_relative_eq!(opt.max_value, 0.5, max_relative = 1e-14);
        assert_relative_eq!(opt.min_value, -0.5, max_relative = 1e-14);
        let d = &opt.argmax - &e.center;
        assert_relative_eq!((&e.q * &d).dot(&d), 1.0, max_relative = 1e-12);

        // interior samples never beat the closed-form max
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let factor = PdFactor::new(&e.q).unwrap();
        for _ in 0..100 {
            let mut u = DVector::from_fn(2, |_, _| {
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            u /= u.norm();
            let scale = rng.gen::<f64>().sqrt();
            let y = &e.center + factor.unit_to_boundary(&(u * scale));
            let v = a.dot(&y);
            assert!(v <= opt.max_value + 1e-12 && v >= opt.min_value - 1e-12);
        }

        assert!(matches!(
            ellipsoid_linopt(&e, &DVector::from_vec(vec![0.0, 0.0])),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn c_nu_matches_hand_value() {
        assert_relative_eq!(c_nu(7.0).unwrap(), 12.291502622129181, max_relative = 1e-15);
        assert!(c_nu(-1.0).is_err());
    }

    #[test]
    fn weighted_barrier_rejects_small_weights() {
        let lp = unit_box();
        let err = Barrier::weighted_log(&lp, DVector::from_vec(vec![0.5, 1.0])).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn eval_rejects_exterior_points() {
        let lp = unit_box();
        let bar = Barrier::log(&lp);
        let err = bar.eval(&DVector::from_vec(vec![1.5])).unwrap_err();
        assert!(matches!(err, Error::NotInterior { .. }));
    }
}
