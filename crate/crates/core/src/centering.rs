//! Damped Newton centering, the central path, and the path-following solver.
//!
//! The centering problem at parameter mu is `min c'x / mu + phi(x)` (just
//! `min phi(x)` at mu = infinity, the analytic center). Progress is measured
//! by the Newton decrement
//!
//! ```text
//!   lambda(x, mu) = || c/mu + grad phi(x) ||*_x
//! ```
//!
//! the dual local norm of the residual. Steps are damped by 1/(1+lambda)
//! while lambda >= 1/4 and full afterwards, which keeps every iterate
//! strictly feasible and converges quadratically near the center.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::barrier::{Barrier, BarrierSpec, PdFactor};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;

/// Path parameter: a positive real, or the analytic-center limit.
/// Kept as a real tag rather than a large float so serialization and
/// arithmetic can't confuse the two regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mu {
    Finite(f64),
    Infinite,
}

impl Mu {
    pub fn finite(v: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive and finite, got {v}"
            )));
        }
        Ok(Mu::Finite(v))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Mu::Finite(v) => Some(*v),
            Mu::Infinite => None,
        }
    }
}

impl std::fmt::Display for Mu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mu::Finite(v) => write!(f, "{v}"),
            Mu::Infinite => write!(f, "inf"),
        }
    }
}

/// Where a centering run ended up.
#[derive(Debug, Clone)]
pub struct CenteringResult {
    pub x: DVector<f64>,
    pub mu: Mu,
    pub newton_decrement: f64,
    pub iterations: usize,
    /// True iff the decrement reached the requested tolerance.
    pub converged: bool,
}

/// Tolerances and caps for a centering run.
#[derive(Debug, Clone, Copy)]
pub struct CenterOptions {
    /// Stop when the decrement drops to this value.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for CenterOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 500,
        }
    }
}

impl CenterOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

fn residual(bar: &Barrier<'_>, gradient: &DVector<f64>, mu: Mu) -> DVector<f64> {
    match mu {
        Mu::Finite(v) => bar.lp().c() / v + gradient,
        Mu::Infinite => gradient.clone(),
    }
}

/// Newton decrement `|| c/mu + grad phi(x) ||*_x` (just `||grad phi||*_x`
/// at mu = infinity).
pub fn newton_decrement(bar: &Barrier<'_>, x: &DVector<f64>, mu: Mu) -> Result<f64> {
    let e = bar.eval(x)?;
    let r = residual(bar, &e.gradient, mu);
    let factor = PdFactor::new(&e.hessian)?;
    Ok(factor.dual_norm(&r))
}

/// Damped Newton centering from `x0`, which must be strictly feasible.
/// Returns the final iterate together with the decrement sequence
/// (one entry per evaluation, the last being the returned decrement).
pub fn center_traced(
    bar: &Barrier<'_>,
    mu: Mu,
    x0: &DVector<f64>,
    opts: &CenterOptions,
) -> Result<(CenteringResult, Vec<f64>)> {
    let lp = bar.lp();
    let mut x = x0.clone();
    let mut decrements = Vec::new();

    for iter in 0..=opts.max_iterations {
        let e = bar.eval(&x)?;
        let r = residual(bar, &e.gradient, mu);
        let factor = PdFactor::new(&e.hessian)?;
        let newton = factor.solve(&r);
        let lambda = r.dot(&newton).max(0.0).sqrt();
        decrements.push(lambda);

        if lambda <= opts.tol {
            return Ok((
                CenteringResult {
                    x,
                    mu,
                    newton_decrement: lambda,
                    iterations: iter,
                    converged: true,
                },
                decrements,
            ));
        }
        if iter == opts.max_iterations {
            break;
        }

        let mut step = if lambda >= 0.25 {
            1.0 / (1.0 + lambda)
        } else {
            1.0
        };
        // The damped step is feasible in exact arithmetic; rounding near the
        // boundary can still produce a nonpositive slack, so back off.
        let mut candidate = &x - &newton * step;
        let mut backoffs = 0;
        while !lp.is_interior(&candidate) {
            step *= 0.5;
            backoffs += 1;
            if backoffs > 80 {
                return Err(Error::IterationCap {
                    cap: opts.max_iterations,
                    decrement: lambda,
                    tol: opts.tol,
                });
            }
            candidate = &x - &newton * step;
        }
        x = candidate;
    }

    let last = *decrements.last().expect("at least one evaluation");
    Err(Error::IterationCap {
        cap: opts.max_iterations,
        decrement: last,
        tol: opts.tol,
    })
}

/// Damped Newton centering; see [`center_traced`].
pub fn center(
    bar: &Barrier<'_>,
    mu: Mu,
    x0: &DVector<f64>,
    opts: &CenterOptions,
) -> Result<CenteringResult> {
    center_traced(bar, mu, x0, opts).map(|(r, _)| r)
}

/// The infinity-analytic center: minimizer of the bare barrier.
pub fn analytic_center(
    bar: &Barrier<'_>,
    x0: &DVector<f64>,
    opts: &CenterOptions,
) -> Result<CenteringResult> {
    center(bar, Mu::Infinite, x0, opts)
}

/// A sequence of centers mu_0 > mu_1 > ... with their diagnostics.
#[derive(Debug, Clone)]
pub struct CentralPath {
    pub barrier: BarrierSpec,
    pub points: Vec<CenteringResult>,
}

/// Centers at `mu = mu_hi * shrink^k` for k = 0, 1, ... down to `mu_lo`
/// (inclusive up to round-off), warm-starting each solve from the previous
/// center. Starts from `x0` or the instance witness.
pub fn trace_path(
    bar: &Barrier<'_>,
    mu_hi: f64,
    mu_lo: f64,
    shrink: f64,
    x0: Option<&DVector<f64>>,
    opts: &CenterOptions,
) -> Result<CentralPath> {
    if !(mu_hi > 0.0 && mu_lo > 0.0 && mu_lo <= mu_hi) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < mu_lo <= mu_hi, got mu_lo={mu_lo}, mu_hi={mu_hi}"
        )));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "shrink must be in (0,1), got {shrink}"
        )));
    }
    let witness;
    let start = match x0 {
        Some(x) => x,
        None => {
            witness = bar
                .lp()
                .interior_witness
                .clone()
                .ok_or(Error::MissingInteriorWitness)?;
            &witness
        }
    };

    let mut points = Vec::new();
    let mut x = start.clone();
    let mut mu = mu_hi;
    loop {
        let res = center(bar, Mu::Finite(mu), &x, opts)?;
        x = res.x.clone();
        points.push(res);
        if mu <= mu_lo * (1.0 + 1e-12) {
            break;
        }
        mu *= shrink;
        if mu < mu_lo {
            mu = mu_lo;
        }
    }
    Ok(CentralPath {
        barrier: bar.spec(),
        points,
    })
}

/// Result of a path-following solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x: DVector<f64>,
    pub value: f64,
    pub final_mu: f64,
    pub centering_iterations: usize,
}

/// Minimizes the LP by following the log-barrier path until `mu * m <= tol`,
/// at which point the objective is within `tol` of the optimum (the duality
/// gap at a mu-center is at most mu times the barrier parameter).
///
/// Needs an interior witness on the instance. Centering along the way runs
/// at a loose tolerance; the answer's accuracy comes from the stop rule.
pub fn solve_lp(lp: &LinearProgram, tol: f64) -> Result<SolveResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "solve tolerance must be positive, got {tol}"
        )));
    }
    let witness = lp
        .interior_witness
        .clone()
        .ok_or(Error::MissingInteriorWitness)?;
    let bar = Barrier::log(lp);
    let m = lp.num_constraints() as f64;

    // A decrement of 1e-4 costs at most a (1 + 1e-4/sqrt(m)) factor on the
    // gap bound, absorbed by the 0.999 margin in the stop rule below.
    // Tighter settings are unreachable near a degenerate vertex: at
    // mu ~ tol/m the computed decrement bottoms out around
    // eps * kappa(H)^(1/2), which can exceed 1e-6.
    let loose = CenterOptions {
        tol: 1e-4,
        max_iterations: 500,
    };
    let mut total_iters = 0;

    // Analytic center first: it makes a mu0 choice with a provably small
    // initial decrement possible (lambda(x_ac, mu0) ~ ||c||*/mu0).
    let ac = analytic_center(&bar, &witness, &loose)?;
    total_iters += ac.iterations;
    let e = bar.eval(&ac.x)?;
    let cstar = PdFactor::new(&e.hessian)?.dual_norm(lp.c());
    if cstar == 0.0 {
        // Objective is orthogonal to the feasible region's interior span;
        // the analytic center already minimizes.
        return Ok(SolveResult {
            value: lp.objective(&ac.x),
            x: ac.x,
            final_mu: f64::INFINITY,
            centering_iterations: total_iters,
        });
    }

    // The mu floor sits strictly below the stop threshold (0.995 vs
    // 0.999) so rounding in `mu * m` can never strand the loop at the
    // floor with the stop test unsatisfied.
    let mu_floor = tol / m * 0.995;
    let mut mu = (10.0 * cstar).max(mu_floor);
    let mut x = ac.x;
    let shrink = 0.5;
    loop {
        let res = center(&bar, Mu::Finite(mu), &x, &loose)?;
        total_iters += res.iterations;
        x = res.x;
        if mu * m <= tol * 0.999 {
            return Ok(SolveResult {
                value: lp.objective(&x),
                x,
                final_mu: mu,
                centering_iterations: total_iters,
            });
        }
        mu = (mu * shrink).max(mu_floor);
    }
}
