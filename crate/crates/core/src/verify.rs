//! Numerical verification suites: each one re-derives a bound's two sides
//! at desk scale and reports the comparison, never asserting internally.
//! Callers (CLI, tests) decide what a failed check means.

use std::fmt;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::barrier::{c_nu, check_nu_sc, check_sc_inequality, local_norm, Barrier, PdFactor};
use crate::centering::{analytic_center, center, solve_lp, CenterOptions, Mu};
use crate::error::{Error, Result};
use crate::lp::{generate_lw, LinearProgram, LwParams};
use crate::neighborhood::{
    beta, corollary_omega, iteration_threshold_log10, l2_membership, match_eta, sample_l2_point,
    theta_critical, wide_certificate,
};
use crate::oracle::chebyshev_lp;
use crate::shortstep::{segment_points, short_step, ShortStepOptions, ShortStepRun, Termination};

/// Default slack on inequality checks: `lhs <= rhs` passes when
/// `lhs <= rhs (1 + REL_SLACK) + ABS_SLACK`, absorbing roundoff without
/// hiding a real violation.
pub const REL_SLACK: f64 = 1e-8;
pub const ABS_SLACK: f64 = 1e-10;

/// One audited inequality, stored as `lhs <= rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub label: String,
    /// Which statement the check audits; one of the suite tokens
    /// (thm1, thm2, prop1, prop2, lemma3, corollary, sc).
    pub paper_anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn le(label: impl Into<String>, anchor: &str, lhs: f64, rhs: f64) -> Self {
        let satisfied =
            lhs.is_finite() && rhs.is_finite() && lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK;
        Self {
            label: label.into(),
            paper_anchor: anchor.to_string(),
            lhs,
            rhs,
            margin: rhs - lhs,
            satisfied,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
}

/// A suite's outcome: the checks, free-form notes, and any preconditions
/// that kept part of the audit from running (those are not failures, but
/// they are not passes either and get surfaced separately).
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<BoundCheck>,
    pub notes: Vec<String>,
    pub precondition_failures: Vec<String>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            precondition_failures: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, check: BoundCheck) {
        self.summary.total += 1;
        if !check.satisfied {
            self.summary.failed += 1;
        }
        self.checks.push(check);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn precondition_failure(&mut self, s: impl Into<String>) {
        self.precondition_failures.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
        self.notes.extend(other.notes);
        self.precondition_failures
            .extend(other.precondition_failures);
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {} checks, {} failed",
            self.suite, self.summary.total, self.summary.failed
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{} [{}] {}: lhs={:e} rhs={:e} margin={:e}",
                if c.satisfied { "PASS" } else { "FAIL" },
                c.paper_anchor,
                c.label,
                c.lhs,
                c.rhs,
                c.margin
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        for p in &self.precondition_failures {
            writeln!(f, "precondition: {p}")?;
        }
        Ok(())
    }
}

fn witness_of(lp: &LinearProgram) -> Result<DVector<f64>> {
    lp.interior_witness
        .clone()
        .ok_or(Error::MissingInteriorWitness)
}

fn instance_tag(lp: &LinearProgram) -> String {
    match &lp.meta {
        Some(meta) => match (meta.r, meta.t) {
            (Some(r), Some(t)) => format!("{} r={r} t={t}", meta.family),
            _ => meta.family.clone(),
        },
        None => format!("{}x{}", lp.num_constraints(), lp.num_vars()),
    }
}

fn descending(mus: &[f64]) -> Vec<f64> {
    let mut v = mus.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).expect("mu grids are finite"));
    v
}

/// Gap threshold below which the log-path sandwich `eta/2 <= gap <= m eta`
/// is claimed on the worst-case family.
pub fn lemma3_guard(r: u32, t: f64) -> f64 {
    let m = (3 * r + 1) as f64;
    t / (4.0 * m + 8.0 * m.sqrt())
}

/// Self-concordance spot checks: the third-directional-derivative bound
/// and the gradient bound, on a seeded Dikin walk through the interior.
pub fn verify_sc(lp: &LinearProgram, draws: usize, seed: u64) -> Result<Report> {
    let mut report = Report::new("sc");
    let tag = instance_tag(lp);
    let barriers = [
        ("log", Barrier::log(lp)),
        ("alternating weighted log", Barrier::alternating(lp)),
    ];
    let row_scale: Vec<f64> = lp
        .a()
        .row_iter()
        .map(|row| row.norm().max(1.0))
        .collect();
    for (name, bar) in barriers {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = witness_of(lp)?;
        let mut sc_violations = 0usize;
        let mut nu_violations = 0usize;
        let mut sc_worst = f64::NEG_INFINITY;
        let mut nu_worst = f64::NEG_INFINITY;
        for _ in 0..draws {
            // wander: a step of at most 0.8 in the local norm stays
            // interior, but reject moves into the boundary skin where the
            // finite-difference probes below would poke outside
            let e = bar.eval(&x)?;
            let n = lp.num_vars();
            let u = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let len = local_norm(&e.hessian, &u);
            if len > 1e-12 {
                let scale: f64 = rng.gen_range(0.0..0.8);
                let candidate = &x + &u * (scale / len);
                let margin = 1e-3 * (1.0 + candidate.norm());
                let s = lp.slacks(&candidate)?;
                if (0..s.len()).all(|i| s[i] > margin * row_scale[i]) {
                    x = candidate;
                }
            }
            let h = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let fd_step = 1e-5 * (x.norm() + 1.0);
            let sc = check_sc_inequality(&bar, &x, &h, fd_step, 5e-3)?;
            if !sc.satisfied {
                sc_violations += 1;
            }
            if sc.rhs > 0.0 {
                sc_worst = sc_worst.max(sc.lhs / sc.rhs);
            }
            let nu = check_nu_sc(&bar, &x, &h, 1e-8)?;
            if !nu.satisfied {
                nu_violations += 1;
            }
            if nu.rhs > 0.0 {
                nu_worst = nu_worst.max(nu.lhs / nu.rhs);
            }
        }
        report.push(BoundCheck::le(
            format!("third-derivative bound violations over {draws} draws, {name} barrier, {tag}"),
            "sc",
            sc_violations as f64,
            0.0,
        ));
        report.push(BoundCheck::le(
            format!("gradient bound violations over {draws} draws, {name} barrier, {tag}"),
            "sc",
            nu_violations as f64,
            0.0,
        ));
        report.note(format!(
            "{name} barrier, {tag}: worst third-derivative ratio {sc_worst:.6}, worst gradient ratio {nu_worst:.6}"
        ));
    }
    Ok(report)
}

/// Slack ratios between gap-matched points of two central paths stay in
/// `[(1 + C_nu_phi)^-1, 1 + C_nu_psi]`; phi is the alternating weighted
/// barrier, psi the plain log barrier.
pub fn verify_thm1(lp: &LinearProgram, mus: &[f64]) -> Result<Report> {
    let mut report = Report::new("thm1");
    let tag = instance_tag(lp);
    let phi = Barrier::alternating(lp);
    let psi = Barrier::log(lp);
    let lower = 1.0 / (1.0 + c_nu(phi.nu())?);
    let upper = 1.0 + c_nu(psi.nu())?;
    let tight = CenterOptions::with_tol(1e-13);
    let mut warm_phi = witness_of(lp)?;
    let mut warm_psi: Option<DVector<f64>> = None;
    for mu in descending(mus) {
        let cen = center(&phi, Mu::Finite(mu), &warm_phi, &tight)?;
        warm_phi = cen.x.clone();
        let target = lp.gap(&cen.x)?;
        let matched = match_eta(&psi, target, 1e-10, &tight, warm_psi.as_ref())?;
        warm_psi = Some(matched.x.clone());
        let s_phi = lp.slacks(&cen.x)?;
        let s_psi = lp.slacks(&matched.x)?;
        let ratios = s_phi.component_div(&s_psi);
        report.push(BoundCheck::le(
            format!("slack ratio lower bound at mu={mu:e}, {tag}"),
            "thm1",
            lower,
            ratios.min(),
        ));
        report.push(BoundCheck::le(
            format!("slack ratio upper bound at mu={mu:e}, {tag}"),
            "thm1",
            ratios.max(),
            upper,
        ));
        report.push(BoundCheck::le(
            format!("gap match residual at mu={mu:e}, {tag}"),
            "thm1",
            (matched.gap - target).abs(),
            1e-8 * target,
        ));
    }
    Ok(report)
}

/// The gap along the log-barrier path is sandwiched:
/// `min(mu/2, rho ||c|| / (2 nu + 4 sqrt(nu))) <= gap(x(mu)) <= nu mu`,
/// with rho the feasible region's inradius.
pub fn verify_thm2(lp: &LinearProgram, mus: &[f64]) -> Result<Report> {
    let mut report = Report::new("thm2");
    let tag = instance_tag(lp);
    let bar = Barrier::log(lp);
    let nu = bar.nu();
    let cheb = chebyshev_lp(lp)?;
    let rho = -solve_lp(&cheb, 1e-8)?.value;
    let lower_cap = rho * lp.c().norm() / (2.0 * nu + 4.0 * nu.sqrt());
    report.note(format!("{tag}: inradius {rho:.12e}"));
    // Both sandwich bounds carry O(1) margins, so 1e-5 centers lose
    // nothing; tighter decrements are not attainable in f64 on badly
    // conditioned instances (large t), where the computed decrement
    // bottoms out near eps * kappa(H)^(1/2) ~ 1e-6.
    let opts = CenterOptions::with_tol(1e-5);
    let mut warm = witness_of(lp)?;
    for mu in descending(mus) {
        let cen = center(&bar, Mu::Finite(mu), &warm, &opts)?;
        warm = cen.x.clone();
        let gap = lp.gap(&cen.x)?;
        report.push(BoundCheck::le(
            format!("gap at most nu*mu at mu={mu:e}, {tag}"),
            "thm2",
            gap,
            nu * mu,
        ));
        report.push(BoundCheck::le(
            format!("gap at least min(mu/2, inradius term) at mu={mu:e}, {tag}"),
            "thm2",
            (mu / 2.0).min(lower_cap),
            gap,
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy)]
enum PropKind {
    Slacks,
    Gap,
}

fn verify_prop(
    lp: &LinearProgram,
    kind: PropKind,
    thetas: &[f64],
    mus: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let (suite, what) = match kind {
        PropKind::Slacks => ("prop1", "slack"),
        PropKind::Gap => ("prop2", "gap"),
    };
    let mut report = Report::new(suite);
    let tag = instance_tag(lp);
    let bar = Barrier::log(lp);
    let tight = CenterOptions::with_tol(1e-12);
    let crit = theta_critical();
    for &theta in thetas {
        if !(theta > 0.0 && theta < crit) {
            return Err(Error::InvalidParameter(format!(
                "ratio bounds need theta in (0, {crit}), got {theta}"
            )));
        }
        let b = beta(theta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut warm = witness_of(lp)?;
        for mu in descending(mus) {
            let cen = center(&bar, Mu::Finite(mu), &warm, &tight)?;
            warm = cen.x.clone();
            let s_center = lp.slacks(&cen.x)?;
            let gap_center = lp.gap(&cen.x)?;
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for _ in 0..samples {
                let x = sample_l2_point(&bar, mu, &cen.x, theta, &mut rng)?;
                match kind {
                    PropKind::Slacks => {
                        let r = lp.slacks(&x)?.component_div(&s_center);
                        lo = lo.min(r.min());
                        hi = hi.max(r.max());
                    }
                    PropKind::Gap => {
                        let r = lp.gap(&x)? / gap_center;
                        lo = lo.min(r);
                        hi = hi.max(r);
                    }
                }
            }
            report.push(BoundCheck::le(
                format!(
                    "{what} ratio lower bound over {samples} draws at theta={theta}, mu={mu:e}, {tag}"
                ),
                suite,
                1.0 - b,
                lo,
            ));
            report.push(BoundCheck::le(
                format!(
                    "{what} ratio upper bound over {samples} draws at theta={theta}, mu={mu:e}, {tag}"
                ),
                suite,
                hi,
                1.0 + b,
            ));
        }
    }
    Ok(report)
}

/// Neighborhood points' slacks stay within `[1 - beta, 1 + beta]` of the
/// center's, per constraint.
pub fn verify_prop1(
    lp: &LinearProgram,
    thetas: &[f64],
    mus: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Report> {
    verify_prop(lp, PropKind::Slacks, thetas, mus, samples, seed)
}

/// Neighborhood points' gaps stay within `[1 - beta, 1 + beta]` of the
/// center's.
pub fn verify_prop2(
    lp: &LinearProgram,
    thetas: &[f64],
    mus: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Report> {
    verify_prop(lp, PropKind::Gap, thetas, mus, samples, seed)
}

/// Parameters for the run-based suites on the worst-case family.
#[derive(Debug, Clone, Copy)]
pub struct RunAuditParams {
    pub r: u32,
    pub t: f64,
    pub theta: f64,
    pub gamma: f64,
    pub gap_target: f64,
}

impl Default for RunAuditParams {
    fn default() -> Self {
        Self {
            r: 2,
            t: 10.0,
            theta: 0.2,
            gamma: 0.125,
            gap_target: 1e-4,
        }
    }
}

fn lw_run(p: &RunAuditParams, bar: &Barrier<'_>) -> Result<ShortStepRun> {
    let lp = bar.lp();
    let w = witness_of(lp)?;
    let ac = analytic_center(bar, &w, &CenterOptions::default())?;
    let e = bar.eval(&ac.x)?;
    let cstar = PdFactor::new(&e.hessian)?.dual_norm(lp.c());
    let mu0 = 2.0 * cstar / p.theta;
    short_step(
        bar,
        mu0,
        &ac.x,
        &ShortStepOptions {
            theta: p.theta,
            gamma: p.gamma,
            gap_target: p.gap_target,
            max_steps: 500_000,
        },
    )
}

/// Along a short-step run on the worst-case family, every iterate whose
/// gap is below the guard has its matched log-path parameter sandwiched:
/// `eta/2 <= gap <= m eta`.
pub fn verify_lemma3(p: &RunAuditParams) -> Result<Report> {
    let mut report = Report::new("lemma3");
    let params = LwParams::new(p.r, p.t)?;
    let lp = generate_lw(params);
    let tag = instance_tag(&lp);
    let m = lp.num_constraints() as f64;
    let guard = lemma3_guard(p.r, p.t);

    // the run follows the weighted path; the matching is against the log
    // path, so the pair is genuinely distinct
    let phi = Barrier::alternating(&lp);
    let psi = Barrier::log(&lp);
    let run = lw_run(p, &phi)?;
    if run.termination != Termination::GapTargetReached {
        report.precondition_failure(format!(
            "run on {tag} ended with {:?} before reaching gap {:e}",
            run.termination, p.gap_target
        ));
        return Ok(report);
    }
    report.note(format!(
        "{tag}: {} steps, {} safeguard halvings, gap guard {guard:e}",
        run.steps(),
        run.safeguard_count
    ));

    let opts = CenterOptions::default();
    let mut warm: Option<DVector<f64>> = None;
    let mut audited = 0usize;
    let mut skipped = 0usize;
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = f64::NEG_INFINITY;
    for it in &run.iterates {
        if it.gap >= guard {
            skipped += 1;
            continue;
        }
        let matched = match_eta(&psi, it.gap, 1e-9, &opts, warm.as_ref())?;
        warm = Some(matched.x.clone());
        let ratio = it.gap / matched.eta;
        ratio_min = ratio_min.min(ratio);
        ratio_max = ratio_max.max(ratio);
        audited += 1;
    }
    if audited == 0 {
        report.precondition_failure(format!(
            "no iterate of the {tag} run had gap below the guard {guard:e}; nothing to audit"
        ));
        return Ok(report);
    }
    report.note(format!(
        "audited {audited} iterates below the guard, skipped {skipped} above it"
    ));
    report.push(BoundCheck::le(
        format!("matched eta at most twice the gap over {audited} audited iterates, {tag}"),
        "lemma3",
        0.5,
        ratio_min,
    ));
    report.push(BoundCheck::le(
        format!("gap at most m times matched eta over {audited} audited iterates, {tag}"),
        "lemma3",
        ratio_max,
        m,
    ));
    Ok(report)
}

/// Full chain audit along a short-step run on the worst-case family:
/// every polygonal sample sits in some l2 neighborhood; below the gap
/// guard, the matched-pair certificate obeys the per-constraint slack
/// bound, the dual-mass bounds, and the wide-radius bound omega; the run
/// endpoints obey the corresponding gap-to-eta inequalities.
///
/// The run follows the alternating weighted barrier's path while the
/// matching is against the log path, so the certificate is extracted from
/// a genuinely distinct pair.
pub fn verify_corollary(p: &RunAuditParams, samples_per_segment: usize) -> Result<Report> {
    let mut report = Report::new("corollary");
    let params = LwParams::new(p.r, p.t)?;
    let lp = generate_lw(params);
    let tag = instance_tag(&lp);
    let m = lp.num_constraints() as f64;
    let guard = lemma3_guard(p.r, p.t);

    let bar = Barrier::alternating(&lp);
    let bar_ln = Barrier::log(&lp);
    let nu = bar.nu();
    let b = beta(p.theta)?;
    let cn = c_nu(nu)?;
    let cm = c_nu(m)?;
    let omega = corollary_omega(p.theta, nu, lp.num_constraints())?;

    let run = lw_run(p, &bar)?;
    if run.termination != Termination::GapTargetReached {
        report.precondition_failure(format!(
            "run on {tag} ended with {:?} before reaching gap {:e}",
            run.termination, p.gap_target
        ));
        return Ok(report);
    }
    report.note(format!(
        "{tag}: {} steps, {} safeguard halvings, gap guard {guard:e}, omega {omega:.12}",
        run.steps(),
        run.safeguard_count
    ));

    let samples = segment_points(&run, samples_per_segment)?;

    // (a) the polygonal path never leaves the union of l2 neighborhoods
    let mut outside = 0usize;
    for smp in &samples {
        if l2_membership(&bar, &smp.x, p.theta)?.is_empty() {
            outside += 1;
        }
    }
    report.push(BoundCheck::le(
        format!(
            "samples outside every l2 neighborhood, {} polygonal samples, {tag}",
            samples.len()
        ),
        "corollary",
        outside as f64,
        0.0,
    ));

    // (b) certificate bounds at every sample below the guard
    let opts = CenterOptions::default();
    let mut warm: Option<DVector<f64>> = None;
    let mut audited = 0usize;
    let mut skipped = 0usize;
    let mut slack_ratio_min = f64::INFINITY;
    let mut dual_mass_max = f64::NEG_INFINITY;
    let mut dual_product_min = f64::INFINITY;
    let mut theta_eff_max = f64::NEG_INFINITY;
    for smp in &samples {
        let gap = lp.gap(&smp.x)?;
        if gap >= guard {
            skipped += 1;
            continue;
        }
        let matched = match_eta(&bar_ln, gap, 1e-9, &opts, warm.as_ref())?;
        warm = Some(matched.x.clone());
        let cert = wide_certificate(&lp, &smp.x, &matched.x, matched.eta)?;
        let s = lp.slacks(&smp.x)?;
        let s_ln = lp.slacks(&matched.x)?;
        slack_ratio_min = slack_ratio_min.min(s.component_div(&s_ln).min());
        // cert.mu = y's(x)/m, so mu/eta is the normalized dual mass
        dual_mass_max = dual_mass_max.max(cert.mu / matched.eta);
        dual_product_min =
            dual_product_min.min(cert.y.component_mul(&s).min() / matched.eta);
        theta_eff_max = theta_eff_max.max(cert.theta_effective);
        audited += 1;
    }
    if audited == 0 {
        report.precondition_failure(format!(
            "no polygonal sample of the {tag} run had gap below the guard {guard:e}"
        ));
    } else {
        report.note(format!(
            "audited {audited} of {} samples below the guard, skipped {skipped}",
            samples.len()
        ));
        report.push(BoundCheck::le(
            format!("per-constraint slack ratio lower bound over {audited} audited samples, {tag}"),
            "corollary",
            (1.0 - b) / (1.0 + cn),
            slack_ratio_min,
        ));
        report.push(BoundCheck::le(
            format!("normalized dual mass upper bound over {audited} audited samples, {tag}"),
            "corollary",
            dual_mass_max,
            (1.0 + b) * (1.0 + cm),
        ));
        report.push(BoundCheck::le(
            format!("dual-slack product lower bound over {audited} audited samples, {tag}"),
            "corollary",
            (1.0 - b) / (1.0 + cn),
            dual_product_min,
        ));
        report.push(BoundCheck::le(
            format!("certified wide radius at most omega over {audited} audited samples, {tag}"),
            "corollary",
            theta_eff_max,
            omega,
        ));
    }

    // (c) endpoint inequalities; the final iterate is audited as the
    // run-end parameter (the one consistent reading of the endpoint pair)
    let last = run.last();
    if last.gap < guard {
        let matched = match_eta(&bar_ln, last.gap, 1e-9, &opts, warm.as_ref())?;
        report.push(BoundCheck::le(
            format!("run-end matched eta upper bound, {tag}"),
            "corollary",
            matched.eta,
            2.0 * (1.0 + b) * (1.0 + cm) * last.gap / (1.0 - b),
        ));
    } else {
        report.precondition_failure(format!(
            "run-end gap {:e} not below the guard {guard:e}; end bound not audited",
            last.gap
        ));
    }
    let first = run.first();
    if first.gap < guard {
        let matched = match_eta(&bar_ln, first.gap, 1e-9, &opts, None)?;
        report.push(BoundCheck::le(
            format!("run-start matched eta lower bound, {tag}"),
            "corollary",
            (1.0 - b) * first.gap / ((1.0 + b) * m * (1.0 + cn)),
            matched.eta,
        ));
    } else {
        report.precondition_failure(format!(
            "run-start gap {:e} above the guard {guard:e}; start bound not audited (expected: \
             runs begin far from optimal)",
            first.gap
        ));
    }

    Ok(report)
}

/// Formula-level checks attached to the corollary: the simplified
/// thresholds dominate the sharp ones on a moderate-theta grid, and the
/// doubly exponential iteration threshold matches frozen reference values.
pub fn verify_corollary_formulas(r: u32, t: f64) -> Result<Report> {
    let mut report = Report::new("corollary");
    let mut start_margin = f64::INFINITY;
    let mut end_margin = f64::INFINITY;
    for k in 1..=9 {
        let theta = k as f64 * 0.05;
        let th = crate::neighborhood::corollary_thresholds(r, t, theta)?;
        start_margin = start_margin.min(th.gap_start_min_simplified - th.gap_start_min);
        end_margin = end_margin.min(th.gap_end_max - th.gap_end_max_simplified);
    }
    report.push(BoundCheck::le(
        format!("sharp start threshold below simplified form, theta grid 0.05..0.45, r={r} t={t}"),
        "corollary",
        0.0,
        start_margin,
    ));
    report.push(BoundCheck::le(
        format!("simplified end threshold below sharp form, theta grid 0.05..0.45, r={r} t={t}"),
        "corollary",
        0.0,
        end_margin,
    ));
    report.note(
        "the dominance direction flips past theta ~ 0.48, so the grid stops at 0.45".to_string(),
    );
    for (rr, omega, frozen) in [
        (1u32, 0.5, 334.9220336633),
        (2u32, 0.5, 2129.9527210667),
    ] {
        let v = iteration_threshold_log10(rr, omega)?;
        report.push(BoundCheck::le(
            format!("iteration threshold log10 matches frozen value at r={rr}, omega={omega}"),
            "corollary",
            (v - frozen).abs(),
            1e-9 * frozen,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{unit_box, unit_square};

    #[test]
    fn bound_check_pass_rule() {
        assert!(BoundCheck::le("eq", "sc", 1.0, 1.0).satisfied);
        assert!(BoundCheck::le("tiny slack", "sc", 1.0 + 5e-9, 1.0).satisfied);
        assert!(!BoundCheck::le("real violation", "sc", 1.0 + 1e-7, 1.0).satisfied);
        assert!(BoundCheck::le("zero rhs", "sc", 0.0, 0.0).satisfied);
        assert!(!BoundCheck::le("nan", "sc", f64::NAN, 1.0).satisfied);
        let c = BoundCheck::le("margin", "sc", 1.0, 3.0);
        assert_eq!(c.margin, 2.0);
    }

    #[test]
    fn report_counts_and_merges() {
        let mut a = Report::new("sc");
        a.push(BoundCheck::le("ok", "sc", 0.0, 1.0));
        let mut b = Report::new("sc");
        b.push(BoundCheck::le("bad", "sc", 2.0, 1.0));
        b.precondition_failure("skipped something");
        a.merge(b);
        assert_eq!(a.summary.total, 2);
        assert_eq!(a.summary.failed, 1);
        assert_eq!(a.precondition_failures.len(), 1);
        assert!(!a.all_passed());
        let text = a.to_string();
        assert!(text.contains("PASS"));
        assert!(text.contains("FAIL"));
        assert!(text.contains("precondition"));
    }

    #[test]
    fn sc_suite_passes_on_the_square() {
        let lp = unit_square();
        let report = verify_sc(&lp, 30, 20240901).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn thm2_suite_passes_on_the_box() {
        let lp = unit_box();
        let report = verify_thm2(&lp, &[0.01, 1.0, 100.0]).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.summary.total, 6);
    }

    #[test]
    fn thm1_suite_passes_on_a_small_lw_instance() {
        let lp = generate_lw(LwParams::new(2, 4.0).unwrap());
        let report = verify_thm1(&lp, &[0.1, 10.0]).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn prop_suites_pass_on_the_box() {
        let lp = unit_box();
        let r1 = verify_prop1(&lp, &[0.2], &[0.5], 25, 20240901).unwrap();
        assert!(r1.all_passed(), "{r1}");
        let r2 = verify_prop2(&lp, &[0.2], &[0.5], 25, 20240901).unwrap();
        assert!(r2.all_passed(), "{r2}");
    }

    #[test]
    fn prop_suite_rejects_theta_past_critical() {
        let lp = unit_box();
        assert!(verify_prop1(&lp, &[0.54], &[1.0], 5, 1).is_err());
    }

    #[test]
    fn lemma3_suite_passes_at_desk_scale() {
        let p = RunAuditParams {
            r: 1,
            gap_target: 1e-3,
            ..RunAuditParams::default()
        };
        let report = verify_lemma3(&p).unwrap();
        assert!(report.all_passed(), "{report}");
        assert!(report.precondition_failures.is_empty(), "{report}");
        assert_eq!(report.summary.total, 2);
    }

    #[test]
    fn corollary_suite_passes_at_desk_scale() {
        let p = RunAuditParams {
            r: 1,
            gap_target: 1e-3,
            ..RunAuditParams::default()
        };
        let report = verify_corollary(&p, 3).unwrap();
        assert!(report.all_passed(), "{report}");
        // the start endpoint is expected to sit above the guard
        assert_eq!(report.precondition_failures.len(), 1, "{report}");
    }

    #[test]
    fn corollary_formulas_pass() {
        let report = verify_corollary_formulas(2, 10.0).unwrap();
        assert!(report.all_passed(), "{report}");
    }
}
