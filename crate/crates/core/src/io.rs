//! On-disk formats: the LP interchange JSON, CSV traces of paths and
//! runs, and the manifest that makes a CLI invocation reproducible.
//!
//! Floats are written through Rust's shortest-roundtrip formatting (and
//! serde_json's equivalent), so read-back is bit exact.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::barrier::{Barrier, BarrierSpec};
use crate::centering::{CenteringResult, Mu};
use crate::error::{Error, Result};
use crate::lp::{InstanceMeta, LinearProgram};
use crate::shortstep::ShortStepRun;

/// The interchange form of an LP: dense row-major A with `b`, `c`, and
/// the optional exact pieces that make verification possible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpFile {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior_witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

impl From<&LinearProgram> for LpFile {
    fn from(lp: &LinearProgram) -> Self {
        let a = lp.a().row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()).collect();
        Self {
            m: lp.num_constraints(),
            n: lp.num_vars(),
            a,
            b: lp.b().iter().copied().collect(),
            c: lp.c().iter().copied().collect(),
            optimal_value: lp.optimal_value,
            interior_witness: lp.interior_witness.as_ref().map(|w| w.iter().copied().collect()),
            meta: lp.meta.clone(),
        }
    }
}

impl TryFrom<LpFile> for LinearProgram {
    type Error = Error;

    fn try_from(f: LpFile) -> Result<Self> {
        if f.a.len() != f.m * f.n {
            return Err(Error::Dimension {
                what: "row-major A",
                expected: f.m * f.n,
                got: f.a.len(),
            });
        }
        if f.b.len() != f.m {
            return Err(Error::Dimension {
                what: "b",
                expected: f.m,
                got: f.b.len(),
            });
        }
        if f.c.len() != f.n {
            return Err(Error::Dimension {
                what: "c",
                expected: f.n,
                got: f.c.len(),
            });
        }
        let a = DMatrix::from_row_slice(f.m, f.n, &f.a);
        let b = DVector::from_vec(f.b);
        let c = DVector::from_vec(f.c);
        let mut lp = LinearProgram::new(a, b, c)?;
        if let Some(v) = f.optimal_value {
            lp = lp.with_optimal_value(v);
        }
        if let Some(w) = f.interior_witness {
            if w.len() != f.n {
                return Err(Error::Dimension {
                    what: "interior witness",
                    expected: f.n,
                    got: w.len(),
                });
            }
            lp = lp.with_interior_witness(DVector::from_vec(w))?;
        }
        lp.meta = f.meta;
        Ok(lp)
    }
}

pub fn write_lp<P: AsRef<Path>>(path: P, lp: &LinearProgram) -> Result<()> {
    let file = LpFile::from(lp);
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, &file)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn read_lp<P: AsRef<Path>>(path: P) -> Result<LinearProgram> {
    let text = std::fs::read_to_string(path)?;
    let file: LpFile = serde_json::from_str(&text)?;
    LinearProgram::try_from(file)
}

/// CSV of centered path points: mu, the point, its slacks, gap (blank
/// when the instance carries no optimal value), decrement, Newton count.
pub fn write_trace_csv<P: AsRef<Path>>(
    path: P,
    bar: &Barrier<'_>,
    points: &[CenteringResult],
) -> Result<()> {
    let lp = bar.lp();
    let mut f = BufWriter::new(File::create(path)?);
    write!(f, "mu")?;
    for j in 1..=lp.num_vars() {
        write!(f, ",x_{j}")?;
    }
    for i in 1..=lp.num_constraints() {
        write!(f, ",s_{i}")?;
    }
    writeln!(f, ",gap,newton_decrement,iterations")?;
    for p in points {
        match p.mu {
            Mu::Finite(v) => write!(f, "{v}")?,
            Mu::Infinite => write!(f, "inf")?,
        }
        for v in p.x.iter() {
            write!(f, ",{v}")?;
        }
        for v in lp.slacks(&p.x)?.iter() {
            write!(f, ",{v}")?;
        }
        if lp.optimal_value.is_some() {
            write!(f, ",{}", lp.gap(&p.x)?)?;
        } else {
            write!(f, ",")?;
        }
        writeln!(f, ",{},{}", p.newton_decrement, p.iterations)?;
    }
    f.flush()?;
    Ok(())
}

/// CSV of short-step iterates: step index, mu, decrement, gap, the point.
pub fn write_run_csv<P: AsRef<Path>>(path: P, lp: &LinearProgram, run: &ShortStepRun) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    write!(f, "k,mu,lambda,gap")?;
    for j in 1..=lp.num_vars() {
        write!(f, ",x_{j}")?;
    }
    writeln!(f)?;
    for (k, it) in run.iterates.iter().enumerate() {
        write!(f, "{k},{},{},{}", it.mu, it.lambda, it.gap)?;
        for v in it.x.iter() {
            write!(f, ",{v}")?;
        }
        writeln!(f)?;
    }
    f.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a CLI invocation and recognize its
/// outputs: the command, the instance, the knobs, the seed, and a hash
/// per written file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier: Option<BarrierSpec>,
    pub params: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_file<P: AsRef<Path>>(path: P) -> Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

pub fn write_manifest<P: AsRef<Path>>(path: P, manifest: &RunManifest) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, manifest)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
