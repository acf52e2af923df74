//! Neighborhoods of the central path and the quantities attached to them:
//! the l2 neighborhood `lambda(x, mu) <= theta`, the proximity-to-ratio
//! bound `beta(theta)`, gap matching between two barriers' paths, and the
//! wide-neighborhood certificate extracted from a matched pair of points.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::barrier::{c_nu, local_norm, Barrier, PdFactor};
use crate::centering::{center, newton_decrement, CenterOptions, Mu};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;

/// Largest theta for which `beta(theta) < 1`, namely `(sqrt(69) - 3) / 10`.
/// Past it the slack-ratio window `[1 - beta, 1 + beta]` loses its lower
/// side and the proximity bounds say nothing.
pub fn theta_critical() -> f64 {
    (69.0f64.sqrt() - 3.0) / 10.0
}

/// Slack-ratio half-width for the l2 neighborhood of radius `theta`:
/// with `q = theta^2 / (1 - theta)`,
///
/// `beta = (q + sqrt(q^2 + 9q)) / 3`.
///
/// Any `x` with `lambda(x, mu) <= theta` has every slack within a factor
/// `[1 - beta, 1 + beta]` of the mu-center's, and its gap too.
pub fn beta(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta needs theta in (0,1), got {theta}"
        )));
    }
    let q = theta * theta / (1.0 - theta);
    Ok((q + (q * q + 9.0 * q).sqrt()) / 3.0)
}

/// The set of mu > 0 whose l2 neighborhood of radius theta contains a
/// fixed point x. Always one of: nothing, a closed interval, or a ray
/// `[lo, inf)` (the ray occurs exactly when x is within theta of the
/// analytic center, so that large mu always works).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuInterval {
    Empty,
    Interval { lo: f64, hi: f64 },
    HalfLine { lo: f64 },
}

impl MuInterval {
    pub fn contains(&self, mu: f64) -> bool {
        match *self {
            MuInterval::Empty => false,
            MuInterval::Interval { lo, hi } => mu >= lo && mu <= hi,
            MuInterval::HalfLine { lo } => mu >= lo,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, MuInterval::Empty)
    }
}

fn membership_coefficients(bar: &Barrier<'_>, x: &DVector<f64>) -> Result<(f64, f64, f64)> {
    let e = bar.eval(x)?;
    let factor = PdFactor::new(&e.hessian)?;
    let c = bar.lp().c();
    let hc = factor.solve(c);
    let hg = factor.solve(&e.gradient);
    let a = c.dot(&hc).max(0.0);
    let bhat = c.dot(&hg);
    let d = e.gradient.dot(&hg).max(0.0);
    Ok((a, bhat, d))
}

/// All mu > 0 with `lambda(x, mu) <= theta`, solved in closed form.
///
/// Squaring the membership condition `|| c + mu grad ||_x^* <= theta mu`
/// gives `(d - theta^2) mu^2 + 2 bhat mu + a <= 0` with
/// `a = c' H^-1 c`, `bhat = c' H^-1 g`, `d = g' H^-1 g`; the roots are
/// taken in the cancellation-free form.
pub fn l2_membership(bar: &Barrier<'_>, x: &DVector<f64>, theta: f64) -> Result<MuInterval> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "l2 membership needs theta in (0,1), got {theta}"
        )));
    }
    let (a, bhat, d) = membership_coefficients(bar, x)?;
    let qa = d - theta * theta;
    let qb = 2.0 * bhat;
    let qc = a;
    if qa > 0.0 {
        // parabola opens up; a solution interval exists only when the
        // vertex dips below zero on the positive axis, which needs bhat < 0
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 || qb >= 0.0 {
            return Ok(MuInterval::Empty);
        }
        let q = (-qb + disc.sqrt()) / 2.0;
        Ok(MuInterval::Interval {
            lo: qc / q,
            hi: q / qa,
        })
    } else {
        // opens down (or is linear): qc >= 0 forces exactly one
        // nonnegative crossing, and everything beyond it is inside
        let disc = qb * qb - 4.0 * qa * qc;
        let denom = -qb + disc.sqrt();
        let lo = if denom > 0.0 { 2.0 * qc / denom } else { 0.0 };
        Ok(MuInterval::HalfLine { lo })
    }
}

/// The mu minimizing `lambda(x, mu)` and the minimum value. The minimizer
/// is `-a / bhat` when `bhat < 0`; otherwise the decrement only improves
/// as mu grows and the infimum `sqrt(d)` sits at mu = infinity.
pub fn best_centrality(bar: &Barrier<'_>, x: &DVector<f64>) -> Result<(Mu, f64)> {
    let (a, bhat, d) = membership_coefficients(bar, x)?;
    if a <= 0.0 || bhat >= 0.0 {
        return Ok((Mu::Infinite, d.sqrt()));
    }
    let mu = -a / bhat;
    let lambda2 = (d - bhat * bhat / a).max(0.0);
    Ok((Mu::Finite(mu), lambda2.sqrt()))
}

/// A draw from the l2 neighborhood of the mu-center: a random direction
/// scaled to local length theta, halved until the point is certifiably
/// inside (interior and decrement at most theta).
///
/// `center_x` must already be well centered at mu or the halving loop has
/// nothing to converge to.
pub fn sample_l2_point<R: Rng + ?Sized>(
    bar: &Barrier<'_>,
    mu: f64,
    center_x: &DVector<f64>,
    theta: f64,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let lp = bar.lp();
    let e = bar.eval(center_x)?;
    let n = lp.num_vars();
    let h = loop {
        let u = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let len = local_norm(&e.hessian, &u);
        if len > 1e-12 {
            break u * (theta / len);
        }
    };
    let mut s = 1.0;
    for _ in 0..60 {
        let x = center_x + &h * s;
        if lp.is_interior(&x) && newton_decrement(bar, &x, Mu::Finite(mu))? <= theta {
            return Ok(x);
        }
        s *= 0.5;
    }
    Err(Error::PreconditionViolated(format!(
        "no neighborhood point found near the given center; lambda(center, mu) = {:e}",
        newton_decrement(bar, center_x, Mu::Finite(mu))?
    )))
}

/// Result of matching a path parameter to a target gap.
#[derive(Debug, Clone)]
pub struct EtaMatch {
    pub eta: f64,
    pub x: DVector<f64>,
    pub gap: f64,
    /// Centering solves spent on bracketing plus bisection.
    pub evaluations: usize,
}

/// Finds `eta` with `gap(x(eta)) = target_gap` on the barrier's central
/// path, by bisection in `ln eta`; the path's gap is strictly increasing
/// in the parameter, so the match is unique.
///
/// `start` seeds the first centering; each subsequent centering is warm
/// started from the previous one. Stops when the gap is within `rel_tol`
/// of the target (relative).
pub fn match_eta(
    bar: &Barrier<'_>,
    target_gap: f64,
    rel_tol: f64,
    opts: &CenterOptions,
    start: Option<&DVector<f64>>,
) -> Result<EtaMatch> {
    if !(target_gap > 0.0) || !target_gap.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target gap must be positive and finite, got {target_gap}"
        )));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rel_tol must be in (0,1), got {rel_tol}"
        )));
    }
    let lp = bar.lp();
    let mut warm = match start {
        Some(x) => x.clone(),
        None => lp
            .interior_witness
            .clone()
            .ok_or(Error::MissingInteriorWitness)?,
    };
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |eta: f64, warm: &mut DVector<f64>| -> Result<(f64, DVector<f64>)> {
        let res = center(bar, Mu::Finite(eta), warm, opts)?;
        *warm = res.x.clone();
        evaluations.set(evaluations.get() + 1);
        Ok((lp.gap(&res.x)?, res.x))
    };

    // gap(x(eta)) <= nu * eta gives eta >= gap/nu; seed the bracket around
    // that and expand geometrically if the seed misses
    let mut lo = target_gap / (2.0 * bar.nu());
    let mut hi = 4.0 * target_gap;
    let mut expansions = 0;
    while eval(lo, &mut warm)?.0 > target_gap {
        lo /= 8.0;
        expansions += 1;
        if expansions > 80 || lo < 1e-300 {
            return Err(Error::BracketFailure(format!(
                "no lower eta bracket below {lo:e} for target gap {target_gap:e}"
            )));
        }
    }
    while eval(hi, &mut warm)?.0 < target_gap {
        hi *= 8.0;
        expansions += 1;
        if expansions > 80 || hi > 1e300 {
            return Err(Error::BracketFailure(format!(
                "no upper eta bracket above {hi:e} for target gap {target_gap:e}"
            )));
        }
    }

    let mut best: Option<EtaMatch> = None;
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let (gap, x) = eval(mid, &mut warm)?;
        let better = best
            .as_ref()
            .map(|b| (gap - target_gap).abs() < (b.gap - target_gap).abs())
            .unwrap_or(true);
        if better {
            best = Some(EtaMatch {
                eta: mid,
                x,
                gap,
                evaluations: evaluations.get(),
            });
        }
        if (gap - target_gap).abs() <= rel_tol * target_gap {
            let mut m = best.expect("just set");
            m.evaluations = evaluations.get();
            return Ok(m);
        }
        if gap > target_gap {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let m = best.ok_or_else(|| Error::BracketFailure("bisection made no evaluation".into()))?;
    if (m.gap - target_gap).abs() <= 1e3 * rel_tol * target_gap {
        // the bracket collapsed before the gap tolerance was met; the
        // match is still as tight as centering noise allows
        return Ok(EtaMatch {
            evaluations: evaluations.get(),
            ..m
        });
    }
    Err(Error::BracketFailure(format!(
        "eta bracket collapsed at gap {:e}, target {:e}",
        m.gap, target_gap
    )))
}

/// Dual weights extracted from a matched pair: `y_i = eta / s_i(x_ln)`
/// with `x_ln` the log-barrier path point whose gap matches x's.
///
/// The certificate places x in a wide (one-sided) neighborhood at
/// `mu = y's(x) / m` with effective radius
/// `theta_eff = 1 - m min_i y_i s_i(x) / y's(x)`.
#[derive(Debug, Clone)]
pub struct WideCertificate {
    pub y: DVector<f64>,
    pub mu: f64,
    pub theta_effective: f64,
}

pub fn wide_certificate(
    lp: &LinearProgram,
    x: &DVector<f64>,
    x_ln: &DVector<f64>,
    eta: f64,
) -> Result<WideCertificate> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive and finite, got {eta}"
        )));
    }
    let s = lp.slacks(x)?;
    let s_ln = lp.slacks(x_ln)?;
    for (i, (&si, &sli)) in s.iter().zip(s_ln.iter()).enumerate() {
        if si <= 0.0 || sli <= 0.0 {
            return Err(Error::NotInterior {
                row: i,
                min_slack: si.min(sli),
            });
        }
    }
    let y = s_ln.map(|v| eta / v);
    let products = y.component_mul(&s);
    let ys = products.sum();
    let m = lp.num_constraints() as f64;
    Ok(WideCertificate {
        mu: ys / m,
        theta_effective: 1.0 - m * products.min() / ys,
        y,
    })
}

/// Wide-neighborhood radius that the matched-pair certificate is
/// guaranteed to satisfy when the source point sits in an l2 neighborhood
/// of radius theta:
///
/// `omega = 1 - (1 - beta) / ((1 + beta)(1 + C_nu)(1 + C_m))`
///
/// with `beta = beta(theta)`, `C_k = k + 2 sqrt(k)`, nu the source
/// barrier's parameter and m the constraint count (the log barrier's
/// parameter).
pub fn corollary_omega(theta: f64, nu: f64, m: usize) -> Result<f64> {
    let b = beta(theta)?;
    let cn = c_nu(nu)?;
    let cm = c_nu(m as f64)?;
    Ok(1.0 - (1.0 - b) / ((1.0 + b) * (1.0 + cn) * (1.0 + cm)))
}

/// Gap thresholds bracketing the audited stretch of a run on the worst
/// case family with r blocks and parameter t, both in the sharp form and
/// in the simplified closed form.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryThresholds {
    /// Smallest starting gap the argument needs.
    pub gap_start_min: f64,
    /// Largest final gap the argument allows.
    pub gap_end_max: f64,
    /// `320 r m sqrt(t)`, a weaker but closed-form version of the start
    /// threshold.
    pub gap_start_min_simplified: f64,
    /// `1 / (180 r)`, the matching simplified end threshold.
    pub gap_end_max_simplified: f64,
}

pub fn corollary_thresholds(r: u32, t: f64, theta: f64) -> Result<CorollaryThresholds> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t must exceed 1 and be finite, got {t}"
        )));
    }
    let b = beta(theta)?;
    let m = (3 * r + 1) as f64;
    let cm = c_nu(m)?;
    Ok(CorollaryThresholds {
        gap_start_min: (1.0 + b) * m * (1.0 + cm) * t.sqrt() / (1.0 - b),
        gap_end_max: (1.0 - b) / (2.0 * (1.0 + b) * (1.0 + cm)),
        gap_start_min_simplified: 320.0 * r as f64 * m * t.sqrt(),
        gap_end_max_simplified: 1.0 / (180.0 * r as f64),
    })
}

/// Base-10 logarithm of the iteration threshold below which a method
/// confined to a wide neighborhood of radius omega cannot finish the
/// worst-case instance with r blocks:
///
/// `2^(r+2) [ log10 2 + log10(5r-1) + 4 log10(10r-1)
///            + 8 ln Gamma(10r-1) / ln 10 - log10(1-omega) ]`.
///
/// The count itself overflows f64 beyond tiny r, hence the log form.
pub fn iteration_threshold_log10(r: u32, omega: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&omega) {
        return Err(Error::InvalidParameter(format!(
            "omega must lie in [0,1), got {omega}"
        )));
    }
    let rf = r as f64;
    let ln10 = std::f64::consts::LN_10;
    let bracket = 2.0f64.log10()
        + (5.0 * rf - 1.0).log10()
        + 4.0 * (10.0 * rf - 1.0).log10()
        + 8.0 * libm::lgamma(10.0 * rf - 1.0) / ln10
        - (1.0 - omega).log10();
    Ok(2.0f64.powi(r as i32 + 2) * bracket)
}
