//! Command-line front end: generate instances, center, trace paths, run
//! the short-step method, and drive the verification suites.
//!
//! Exit codes: 0 success, 1 usage, 2 numerical failure, 3 verification
//! failure (some audited bound did not hold).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use pathlab::barrier::{Barrier, BarrierSpec, PdFactor};
use pathlab::centering::{
    analytic_center, center, solve_lp, trace_path, CenterOptions, Mu,
};
use pathlab::error::Result;
use pathlab::io::{
    read_lp, sha256_file, write_lp, write_manifest, write_run_csv, write_trace_csv, OutputFile,
    RunManifest,
};
use pathlab::lp::{generate_lw, unit_box, unit_square, LinearProgram, LwParams};
use pathlab::neighborhood::corollary_omega;
use pathlab::shortstep::{predicted_iterations, short_step, ShortStepOptions, Termination};
use pathlab::verify::{
    verify_corollary, verify_corollary_formulas, verify_lemma3, verify_prop1, verify_prop2,
    verify_sc, verify_thm1, verify_thm2, Report, RunAuditParams,
};
use pathlab::DEFAULT_SEED;

/// println that shrugs off a closed pipe (e.g. `pathlab ... | head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// print (no trailing newline) with the same closed-pipe tolerance.
macro_rules! say_raw {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "pathlab",
    version,
    about = "laboratory for path-following interior-point methods on inequality-form LPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// worst-case family with r blocks and growth parameter t
    Lw,
    /// the interval [0,1] with two constraints
    Box,
    /// the unit square
    Square,
}

#[derive(Clone, Copy, ValueEnum)]
enum BarrierKind {
    Log,
    /// weighted log barrier with weights alternating 2,1,2,1,...
    Alternating,
}

#[derive(Args)]
struct InstanceArgs {
    /// LP interchange JSON file (mutually exclusive with --family)
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    instance: Option<PathBuf>,
    /// built-in instance family [default: lw]
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// blocks of the lw family (also the run-audit suites' instance size)
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// growth parameter of the lw family
    #[arg(long, default_value_t = 10.0)]
    t: f64,
}

impl InstanceArgs {
    fn load(&self) -> Result<(LinearProgram, String)> {
        if let Some(path) = &self.instance {
            let lp = read_lp(path)?;
            let descriptor = format!("{} sha256={}", path.display(), sha256_file(path)?);
            return Ok((lp, descriptor));
        }
        match self.family.unwrap_or(Family::Lw) {
            Family::Lw => {
                let params = LwParams::new(self.r, self.t)?;
                let lp = generate_lw(params);
                Ok((lp, format!("LW r={} t={}", self.r, self.t)))
            }
            Family::Box => Ok((unit_box(), "unit box".into())),
            Family::Square => Ok((unit_square(), "unit square".into())),
        }
    }
}

fn parse_mu(s: &str) -> std::result::Result<Mu, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
        return Ok(Mu::Infinite);
    }
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    Mu::finite(v).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Thm1,
    Thm2,
    Prop1,
    Prop2,
    Lemma3,
    Corollary,
    Sc,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a worst-case instance as interchange JSON
    LwGen {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Center at one barrier parameter and print the point
    Center {
        #[command(flatten)]
        instance: InstanceArgs,
        /// barrier parameter; "inf" centers at the analytic center
        #[arg(long, value_parser = parse_mu)]
        mu: Mu,
        #[arg(long, value_enum, default_value_t = BarrierKind::Log)]
        barrier: BarrierKind,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// also write the result as JSON
        #[arg(long, value_name = "FILE")]
        out_json: Option<PathBuf>,
    },
    /// Trace the central path over a geometric mu grid to CSV
    Trace {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 100.0)]
        mu_hi: f64,
        #[arg(long, default_value_t = 1e-4)]
        mu_lo: f64,
        /// grid ratio in (0,1)
        #[arg(long, default_value_t = 0.5)]
        shrink: f64,
        #[arg(long, value_enum, default_value_t = BarrierKind::Log)]
        barrier: BarrierKind,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Solve to a target gap by following the central path
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_name = "FILE")]
        out_json: Option<PathBuf>,
    },
    /// Run the short-step method from the analytic center
    Shortstep {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        #[arg(long, default_value_t = 0.125)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-4)]
        gap_target: f64,
        #[arg(long, default_value_t = 200_000)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = BarrierKind::Log)]
        barrier: BarrierKind,
        /// write the iterates as CSV
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Audit one of the numbered statements numerically
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        instance: InstanceArgs,
        /// draws for the sampling suites (sc, prop1, prop2)
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        #[arg(long, default_value_t = 0.125)]
        gamma: f64,
        /// run suites stop at this gap (lemma3, corollary)
        #[arg(long, default_value_t = 1e-4)]
        gap_target: f64,
        /// polygonal samples per segment in the corollary audit
        #[arg(long, default_value_t = 9)]
        segment_samples: usize,
        /// write all reports as a JSON array
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Batch experiments
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Short-step iteration counts across instance sizes, against the
    /// doubly exponential wide-neighborhood threshold
    Scaling {
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        /// comma-separated block counts
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        r_list: Vec<u32>,
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        #[arg(long, default_value_t = 0.125)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-4)]
        gap_target: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}

fn barrier_of(kind: BarrierKind, lp: &LinearProgram) -> Barrier<'_> {
    match kind {
        BarrierKind::Log => Barrier::log(lp),
        BarrierKind::Alternating => Barrier::alternating(lp),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[allow(clippy::too_many_arguments)]
fn emit_manifest(
    out_files: &[&Path],
    instance: &str,
    barrier: Option<BarrierSpec>,
    params: serde_json::Value,
    seed: u64,
    started: Instant,
) -> Result<()> {
    let outputs = out_files
        .iter()
        .map(|p| {
            Ok(OutputFile {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        instance: instance.to_string(),
        barrier,
        params,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs,
    };
    write_manifest(manifest_path(out_files[0]), &manifest)
}

fn start_of_run(bar: &Barrier<'_>, theta: f64) -> Result<(DVector<f64>, f64)> {
    let lp = bar.lp();
    let w = lp
        .interior_witness
        .clone()
        .ok_or(pathlab::Error::MissingInteriorWitness)?;
    let ac = analytic_center(bar, &w, &CenterOptions::default())?;
    let e = bar.eval(&ac.x)?;
    let cstar = PdFactor::new(&e.hessian)?.dual_norm(lp.c());
    // the initial decrement is then about theta/2, safely inside
    Ok((ac.x.clone(), 2.0 * cstar / theta))
}

fn point_json(lp: &LinearProgram, x: &DVector<f64>, mu: &Mu, decrement: f64, iterations: usize) -> Result<serde_json::Value> {
    let slacks = lp.slacks(x)?;
    Ok(serde_json::json!({
        "mu": match mu { Mu::Finite(v) => serde_json::json!(v), Mu::Infinite => serde_json::json!("inf") },
        "x": x.iter().copied().collect::<Vec<_>>(),
        "slacks": slacks.iter().copied().collect::<Vec<_>>(),
        "objective": lp.objective(x),
        "gap": lp.optimal_value.map(|_| lp.gap(x).unwrap()),
        "newton_decrement": decrement,
        "iterations": iterations,
    }))
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::LwGen { r, t, out } => {
            let started = Instant::now();
            let params = LwParams::new(r, t)?;
            let lp = generate_lw(params);
            write_lp(&out, &lp)?;
            emit_manifest(
                &[&out],
                &format!("LW r={r} t={t}"),
                None,
                serde_json::json!({"r": r, "t": t}),
                DEFAULT_SEED,
                started,
            )?;
            say!(
                "wrote LW r={r} t={t}: {} constraints, {} variables, optimal value 0 -> {}",
                lp.num_constraints(),
                lp.num_vars(),
                out.display()
            );
            Ok(0)
        }
        Command::Center {
            instance,
            mu,
            barrier,
            tol,
            out_json,
        } => {
            let started = Instant::now();
            let (lp, descriptor) = instance.load()?;
            let bar = barrier_of(barrier, &lp);
            let w = lp
                .interior_witness
                .clone()
                .ok_or(pathlab::Error::MissingInteriorWitness)?;
            let opts = CenterOptions::with_tol(tol);
            let res = center(&bar, mu, &w, &opts)?;
            let value = point_json(&lp, &res.x, &res.mu, res.newton_decrement, res.iterations)?;
            say!("{}", serde_json::to_string_pretty(&value)?);
            if let Some(path) = out_json {
                std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&value)?))?;
                emit_manifest(
                    &[&path],
                    &descriptor,
                    Some(bar.spec()),
                    serde_json::json!({"mu": format!("{}", res.mu), "tol": tol}),
                    DEFAULT_SEED,
                    started,
                )?;
            }
            Ok(0)
        }
        Command::Trace {
            instance,
            mu_hi,
            mu_lo,
            shrink,
            barrier,
            tol,
            out,
        } => {
            let started = Instant::now();
            let (lp, descriptor) = instance.load()?;
            let bar = barrier_of(barrier, &lp);
            let opts = CenterOptions::with_tol(tol);
            let path = trace_path(&bar, mu_hi, mu_lo, shrink, None, &opts)?;
            write_trace_csv(&out, &bar, &path.points)?;
            emit_manifest(
                &[&out],
                &descriptor,
                Some(bar.spec()),
                serde_json::json!({"mu_hi": mu_hi, "mu_lo": mu_lo, "shrink": shrink, "tol": tol}),
                DEFAULT_SEED,
                started,
            )?;
            say!(
                "traced {} path points from mu={mu_hi} down to mu={mu_lo} -> {}",
                path.points.len(),
                out.display()
            );
            Ok(0)
        }
        Command::Solve {
            instance,
            tol,
            out_json,
        } => {
            let started = Instant::now();
            let (lp, descriptor) = instance.load()?;
            let res = solve_lp(&lp, tol)?;
            let value = serde_json::json!({
                "value": res.value,
                "x": res.x.iter().copied().collect::<Vec<_>>(),
                "final_mu": res.final_mu,
                "centering_iterations": res.centering_iterations,
                "known_optimal_value": lp.optimal_value,
            });
            say!("{}", serde_json::to_string_pretty(&value)?);
            if let Some(path) = out_json {
                std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&value)?))?;
                emit_manifest(
                    &[&path],
                    &descriptor,
                    None,
                    serde_json::json!({"tol": tol}),
                    DEFAULT_SEED,
                    started,
                )?;
            }
            Ok(0)
        }
        Command::Shortstep {
            instance,
            theta,
            gamma,
            gap_target,
            max_steps,
            barrier,
            out,
        } => {
            let started = Instant::now();
            let (lp, descriptor) = instance.load()?;
            let bar = barrier_of(barrier, &lp);
            let (x0, mu0) = start_of_run(&bar, theta)?;
            let run = short_step(
                &bar,
                mu0,
                &x0,
                &ShortStepOptions {
                    theta,
                    gamma,
                    gap_target,
                    max_steps,
                },
            )?;
            let predicted =
                predicted_iterations(bar.nu(), gamma, run.first().mu, run.last().mu)?;
            say!(
                "{} steps ({} predicted by the mu-shrink law), {} safeguard halvings, \
                 mu {:.6e} -> {:.6e}, gap {:.6e} -> {:.6e}, termination {:?}",
                run.steps(),
                predicted,
                run.safeguard_count,
                run.first().mu,
                run.last().mu,
                run.first().gap,
                run.last().gap,
                run.termination
            );
            if let Some(path) = &out {
                write_run_csv(path, &lp, &run)?;
                emit_manifest(
                    &[path],
                    &descriptor,
                    Some(bar.spec()),
                    serde_json::json!({
                        "theta": theta, "gamma": gamma, "gap_target": gap_target,
                        "max_steps": max_steps, "mu0": mu0,
                    }),
                    DEFAULT_SEED,
                    started,
                )?;
                say!("wrote {} iterates -> {}", run.iterates.len(), path.display());
            }
            Ok(match run.termination {
                Termination::GapTargetReached => 0,
                _ => 2,
            })
        }
        Command::Verify {
            suite,
            instance,
            draws,
            seed,
            theta,
            gamma,
            gap_target,
            segment_samples,
            json,
        } => {
            let audit = RunAuditParams {
                r: instance.r,
                t: instance.t,
                theta,
                gamma,
                gap_target,
            };
            let thm1_mus = [1e-2, 1.0, 1e2];
            let thm2_mus: Vec<f64> = (0..13).map(|k| 1e-3 * 10f64.powf(k as f64 * 0.5)).collect();
            let prop_thetas = [0.1, 0.2, 0.5];
            let prop_mus = [1e-2, 1.0, 1e2];

            let needs_instance = matches!(
                suite,
                Suite::Sc | Suite::Thm1 | Suite::Thm2 | Suite::Prop1 | Suite::Prop2 | Suite::All
            );
            let loaded = if needs_instance {
                Some(instance.load()?)
            } else {
                None
            };

            let mut reports: Vec<Report> = Vec::new();
            {
                let lp = loaded.as_ref().map(|(lp, _)| lp);
                let with_lp = |f: &dyn Fn(&LinearProgram) -> Result<Report>,
                                   reports: &mut Vec<Report>|
                 -> Result<()> {
                    reports.push(f(lp.expect("suite needs an instance"))?);
                    Ok(())
                };
                match suite {
                    Suite::Sc => with_lp(&|lp| verify_sc(lp, draws, seed), &mut reports)?,
                    Suite::Thm1 => with_lp(&|lp| verify_thm1(lp, &thm1_mus), &mut reports)?,
                    Suite::Thm2 => with_lp(&|lp| verify_thm2(lp, &thm2_mus), &mut reports)?,
                    Suite::Prop1 => with_lp(
                        &|lp| verify_prop1(lp, &prop_thetas, &prop_mus, draws, seed),
                        &mut reports,
                    )?,
                    Suite::Prop2 => with_lp(
                        &|lp| verify_prop2(lp, &prop_thetas, &prop_mus, draws, seed),
                        &mut reports,
                    )?,
                    Suite::Lemma3 => reports.push(verify_lemma3(&audit)?),
                    Suite::Corollary => {
                        reports.push(verify_corollary(&audit, segment_samples)?);
                        reports.push(verify_corollary_formulas(audit.r, audit.t)?);
                    }
                    Suite::All => {
                        with_lp(&|lp| verify_sc(lp, draws, seed), &mut reports)?;
                        with_lp(&|lp| verify_thm1(lp, &thm1_mus), &mut reports)?;
                        with_lp(&|lp| verify_thm2(lp, &thm2_mus), &mut reports)?;
                        with_lp(
                            &|lp| verify_prop1(lp, &prop_thetas, &prop_mus, draws, seed),
                            &mut reports,
                        )?;
                        with_lp(
                            &|lp| verify_prop2(lp, &prop_thetas, &prop_mus, draws, seed),
                            &mut reports,
                        )?;
                        reports.push(verify_lemma3(&audit)?);
                        reports.push(verify_corollary(&audit, segment_samples)?);
                        reports.push(verify_corollary_formulas(audit.r, audit.t)?);
                    }
                }
            }

            for r in &reports {
                say_raw!("{r}");
            }
            let total: usize = reports.iter().map(|r| r.summary.total).sum();
            let failed: usize = reports.iter().map(|r| r.summary.failed).sum();
            say!("total: {total} checks, {failed} failed");
            if let Some(path) = json {
                std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&reports)?))?;
            }
            Ok(if failed > 0 {
                3
            } else if total == 0 {
                2
            } else {
                0
            })
        }
        Command::Experiment(ExperimentCommand::Scaling {
            t,
            r_list,
            theta,
            gamma,
            gap_target,
            out,
        }) => {
            let started = Instant::now();
            let mut rows = Vec::new();
            say!(
                "{:>3} {:>4} {:>4} {:>7} {:>7} {:>12} {:>12} {:>10} {:>18}",
                "r", "m", "n", "steps", "pred", "gap0", "gapK", "safeguards", "log10(threshold)"
            );
            for &r in &r_list {
                let params = LwParams::new(r, t)?;
                let lp = generate_lw(params);
                let bar = Barrier::log(&lp);
                let (x0, mu0) = start_of_run(&bar, theta)?;
                let run = short_step(
                    &bar,
                    mu0,
                    &x0,
                    &ShortStepOptions {
                        theta,
                        gamma,
                        gap_target,
                        max_steps: 500_000,
                    },
                )?;
                let predicted =
                    predicted_iterations(bar.nu(), gamma, run.first().mu, run.last().mu)?;
                let omega = corollary_omega(theta, bar.nu(), lp.num_constraints())?;
                let log_threshold =
                    pathlab::neighborhood::iteration_threshold_log10(r, omega)?;
                say!(
                    "{:>3} {:>4} {:>4} {:>7} {:>7} {:>12.4e} {:>12.4e} {:>10} {:>18.4}",
                    r,
                    lp.num_constraints(),
                    lp.num_vars(),
                    run.steps(),
                    predicted,
                    run.first().gap,
                    run.last().gap,
                    run.safeguard_count,
                    log_threshold
                );
                rows.push((r, lp, run, predicted, omega, log_threshold));
            }
            if let Some(path) = &out {
                use std::io::Write as _;
                let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                writeln!(
                    f,
                    "r,m,n,nu,mu0,muK,steps,predicted,safeguards,gap0,gapK,omega,log10_threshold"
                )?;
                for (r, lp, run, predicted, omega, log_threshold) in &rows {
                    writeln!(
                        f,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        r,
                        lp.num_constraints(),
                        lp.num_vars(),
                        lp.num_constraints(),
                        run.first().mu,
                        run.last().mu,
                        run.steps(),
                        predicted,
                        run.safeguard_count,
                        run.first().gap,
                        run.last().gap,
                        omega,
                        log_threshold
                    )?;
                }
                f.flush()?;
                drop(f);
                emit_manifest(
                    &[path],
                    &format!("LW t={t}, r in {r_list:?}"),
                    None,
                    serde_json::json!({
                        "t": t, "theta": theta, "gamma": gamma, "gap_target": gap_target,
                    }),
                    DEFAULT_SEED,
                    started,
                )?;
                say!("wrote {} rows -> {}", rows.len(), path.display());
            }
            Ok(0)
        }
    }
}
