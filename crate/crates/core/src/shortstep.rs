//! The short-step method: shrink mu geometrically, take one Newton
//! centering step, and stay inside the l2 neighborhood the whole way.
//!
//! Each accepted step multiplies mu by `1 - gamma_k/sqrt(nu)`; the recorded
//! iterates all satisfy `lambda(x_k, mu_k) <= theta`, which is what makes
//! the polygonal curve through them a certified neighborhood path.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::barrier::{Barrier, PdFactor};
use crate::centering::{newton_decrement, Mu};
use crate::error::{Error, Result};

/// Why a short-step run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GapTargetReached,
    IterationCap,
    SafeguardFailure,
}

/// One recorded iterate of a run.
#[derive(Debug, Clone)]
pub struct ShortStepIterate {
    pub x: DVector<f64>,
    pub mu: f64,
    /// Newton decrement at (x, mu); at most theta for accepted iterates.
    pub lambda: f64,
    pub gap: f64,
}

/// A completed short-step run.
#[derive(Debug, Clone)]
pub struct ShortStepRun {
    pub theta: f64,
    pub gamma: f64,
    pub iterates: Vec<ShortStepIterate>,
    /// Realized gamma per accepted step (gamma halved where the safeguard
    /// fired). `iterates.len() == step_gammas.len() + 1`.
    pub step_gammas: Vec<f64>,
    pub safeguard_count: usize,
    pub termination: Termination,
}

impl ShortStepRun {
    pub fn steps(&self) -> usize {
        self.step_gammas.len()
    }

    pub fn first(&self) -> &ShortStepIterate {
        self.iterates.first().expect("runs hold at least the start")
    }

    pub fn last(&self) -> &ShortStepIterate {
        self.iterates.last().expect("runs hold at least the start")
    }
}

/// Knobs for a short-step run.
#[derive(Debug, Clone, Copy)]
pub struct ShortStepOptions {
    pub theta: f64,
    pub gamma: f64,
    pub gap_target: f64,
    pub max_steps: usize,
}

impl Default for ShortStepOptions {
    fn default() -> Self {
        Self {
            theta: 0.2,
            gamma: 0.125,
            gap_target: 1e-4,
            max_steps: 100_000,
        }
    }
}

/// Runs the short-step method from `(x0, mu0)`, which must satisfy
/// `lambda(x0, mu0) <= theta`.
///
/// Per step: shrink mu by `1 - gamma/sqrt(nu)`, take one damped Newton
/// centering step at the new mu, and accept if the decrement is back under
/// theta. If not, the shrink is halved and the step retried from the same
/// iterate, up to 10 times; exhausting the retries ends the run with
/// [`Termination::SafeguardFailure`].
pub fn short_step(
    bar: &Barrier<'_>,
    mu0: f64,
    x0: &DVector<f64>,
    opts: &ShortStepOptions,
) -> Result<ShortStepRun> {
    if !(opts.theta > 0.0 && opts.theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta must be in (0,1), got {}",
            opts.theta
        )));
    }
    if !(opts.gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive, got {}",
            opts.gamma
        )));
    }
    if !(mu0 > 0.0) || !mu0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mu0 must be positive and finite, got {mu0}"
        )));
    }
    let lp = bar.lp();
    let nu_sqrt = bar.nu().sqrt();
    if opts.gamma >= nu_sqrt {
        return Err(Error::InvalidParameter(format!(
            "gamma {} must be below sqrt(nu) = {nu_sqrt}",
            opts.gamma
        )));
    }

    let lambda0 = newton_decrement(bar, x0, Mu::Finite(mu0))?;
    if lambda0 > opts.theta * (1.0 + 1e-9) {
        return Err(Error::PreconditionViolated(format!(
            "start is outside the neighborhood: lambda(x0, mu0) = {lambda0:e} > theta = {}",
            opts.theta
        )));
    }

    let mut iterates = vec![ShortStepIterate {
        x: x0.clone(),
        mu: mu0,
        lambda: lambda0,
        gap: lp.gap(x0)?,
    }];
    let mut step_gammas = Vec::new();
    let mut safeguard_count = 0usize;

    let mut termination = Termination::IterationCap;
    while iterates.len() <= opts.max_steps {
        let current = iterates.last().expect("non-empty");
        if current.gap <= opts.gap_target {
            termination = Termination::GapTargetReached;
            break;
        }

        let mut gamma = opts.gamma;
        let mut accepted = None;
        for attempt in 0..=10 {
            let mu_new = current.mu * (1.0 - gamma / nu_sqrt);
            let e = bar.eval(&current.x)?;
            let r = lp.c() / mu_new + &e.gradient;
            let factor = PdFactor::new(&e.hessian)?;
            let newton = factor.solve(&r);
            let lambda_pre = r.dot(&newton).max(0.0).sqrt();
            let mut step = if lambda_pre >= 0.25 {
                1.0 / (1.0 + lambda_pre)
            } else {
                1.0
            };
            let mut candidate = &current.x - &newton * step;
            let mut backoffs = 0;
            while !lp.is_interior(&candidate) && backoffs < 60 {
                step *= 0.5;
                backoffs += 1;
                candidate = &current.x - &newton * step;
            }
            let lambda_new = newton_decrement(bar, &candidate, Mu::Finite(mu_new))?;
            if lambda_new <= opts.theta {
                accepted = Some((candidate, mu_new, lambda_new, gamma));
                break;
            }
            if attempt < 10 {
                safeguard_count += 1;
                gamma *= 0.5;
            }
        }

        match accepted {
            Some((x, mu, lambda, gamma)) => {
                let gap = lp.gap(&x)?;
                iterates.push(ShortStepIterate { x, mu, lambda, gap });
                step_gammas.push(gamma);
            }
            None => {
                termination = Termination::SafeguardFailure;
                break;
            }
        }
    }

    Ok(ShortStepRun {
        theta: opts.theta,
        gamma: opts.gamma,
        iterates,
        step_gammas,
        safeguard_count,
        termination,
    })
}

/// A point on the run's polygonal curve: segment k, parameter s in [0,1],
/// position `(1-s) x_k + s x_{k+1}`.
#[derive(Debug, Clone)]
pub struct SegmentSample {
    pub segment: usize,
    pub s: f64,
    pub x: DVector<f64>,
}

/// Equispaced samples of every segment, endpoints included
/// (`samples` per segment, so consecutive segments share a point).
pub fn segment_points(run: &ShortStepRun, samples: usize) -> Result<Vec<SegmentSample>> {
    if run.iterates.len() < 2 {
        return Err(Error::PreconditionViolated(
            "run has no segments to sample".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples per segment, got {samples}"
        )));
    }
    let mut out = Vec::with_capacity((run.iterates.len() - 1) * samples);
    for k in 0..run.iterates.len() - 1 {
        let a = &run.iterates[k].x;
        let b = &run.iterates[k + 1].x;
        for j in 0..samples {
            let s = j as f64 / (samples - 1) as f64;
            out.push(SegmentSample {
                segment: k,
                s,
                x: a * (1.0 - s) + b * s,
            });
        }
    }
    Ok(out)
}

/// `ceil( ln(mu0/muK) / -ln(1 - gamma/sqrt(nu)) )`: the step count the
/// mu-shrink law implies for driving mu0 down to muK.
pub fn predicted_iterations(nu: f64, gamma: f64, mu0: f64, mu_k: f64) -> Result<u64> {
    if !(nu > 0.0 && gamma > 0.0 && mu0 > 0.0 && mu_k > 0.0) {
        return Err(Error::InvalidParameter(
            "predicted_iterations needs positive nu, gamma, mu0, muK".into(),
        ));
    }
    if gamma >= nu.sqrt() {
        return Err(Error::InvalidParameter(format!(
            "gamma {gamma} must be below sqrt(nu) = {}",
            nu.sqrt()
        )));
    }
    if mu_k > mu0 {
        return Err(Error::InvalidParameter(format!(
            "muK = {mu_k} must not exceed mu0 = {mu0}"
        )));
    }
    let per_step = -(1.0 - gamma / nu.sqrt()).ln();
    Ok(((mu0 / mu_k).ln() / per_step).ceil() as u64)
}
