//! Inequality-form linear programs `min c'x  s.t.  Ax <= b` and the
//! worst-case instance family used throughout the test suite.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag identifying where an instance came from, carried through the JSON
/// interchange format. The `lw` family tag is load-bearing: eta-matching
/// applies its feasible-region guard only when it knows r and t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

/// Parameters of the winding family `LW_r(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LwParams {
    pub r: u32,
    pub t: f64,
}

impl LwParams {
    pub fn new(r: u32, t: f64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter("LW family needs r >= 1".into()));
        }
        if !(t > 1.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "LW family needs finite t > 1, got {t}"
            )));
        }
        Ok(Self { r, t })
    }

    pub fn num_vars(&self) -> usize {
        2 * self.r as usize
    }

    pub fn num_constraints(&self) -> usize {
        3 * self.r as usize + 1
    }
}

/// A linear program `min c'x` over the polyhedron `{x : Ax <= b}`.
///
/// The feasible region is expected to be bounded with nonempty interior;
/// operations that need those properties fail with explicit errors when the
/// data violates them (singular Hessians, no feasible vertex) rather than
/// checking them up front.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    /// Known optimal value, when the construction provides one.
    pub optimal_value: Option<f64>,
    /// A strictly feasible point, when the construction provides one.
    pub interior_witness: Option<DVector<f64>>,
    pub meta: Option<InstanceMeta>,
}

impl LinearProgram {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Result<Self> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "constraint matrix must be nonempty".into(),
            ));
        }
        if b.len() != m {
            return Err(Error::Dimension {
                what: "rows in b",
                expected: m,
                got: b.len(),
            });
        }
        if c.len() != n {
            return Err(Error::Dimension {
                what: "entries in c",
                expected: n,
                got: c.len(),
            });
        }
        Ok(Self {
            a,
            b,
            c,
            optimal_value: None,
            interior_witness: None,
            meta: None,
        })
    }

    pub fn with_optimal_value(mut self, v: f64) -> Self {
        self.optimal_value = Some(v);
        self
    }

    /// Attaches a strictly feasible starting point, validating it.
    pub fn with_interior_witness(mut self, x: DVector<f64>) -> Result<Self> {
        let s = self.slacks(&x)?;
        if let Some(row) = (0..s.len()).find(|&i| s[i] <= 0.0) {
            return Err(Error::NotInterior {
                row,
                min_slack: s[row],
            });
        }
        self.interior_witness = Some(x);
        Ok(self)
    }

    pub fn num_constraints(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_vars(&self) -> usize {
        self.a.ncols()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        self.c.dot(x)
    }

    /// Slack vector `b - Ax`.
    pub fn slacks(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.num_vars() {
            return Err(Error::Dimension {
                what: "entries in x",
                expected: self.num_vars(),
                got: x.len(),
            });
        }
        Ok(&self.b - &self.a * x)
    }

    /// True iff every slack is strictly positive.
    pub fn is_interior(&self, x: &DVector<f64>) -> bool {
        match self.slacks(x) {
            Ok(s) => s.iter().all(|&v| v > 0.0),
            Err(_) => false,
        }
    }

    /// Optimality gap `c'x - optimal_value`. Needs a recorded optimum.
    pub fn gap(&self, x: &DVector<f64>) -> Result<f64> {
        let opt = self.optimal_value.ok_or(Error::MissingOptimalValue)?;
        if x.len() != self.num_vars() {
            return Err(Error::Dimension {
                what: "entries in x",
                expected: self.num_vars(),
                got: x.len(),
            });
        }
        Ok(self.objective(x) - opt)
    }

    /// The LW parameters, when this instance carries the family tag.
    pub fn lw_params(&self) -> Option<LwParams> {
        let meta = self.meta.as_ref()?;
        if meta.family != "LW" {
            return None;
        }
        match (meta.r, meta.t) {
            (Some(r), Some(t)) => LwParams::new(r, t).ok(),
            _ => None,
        }
    }
}

/// `t^(1 - 2^-j)` evaluated in log space so large `t` and deep levels stay
/// accurate.
fn t_pow(t: f64, j: u32) -> f64 {
    let e = 1.0 - 0.5f64.powi(j as i32);
    (e * t.ln()).exp()
}

/// Builds `LW_r(t)`: `min x_1` over
///
/// ```text
///   x_1 <= t^2,   x_2 <= t,
///   x_{2j+1} <= t x_{2j-1}          (j = 1..r-1)
///   x_{2j+1} <= t x_{2j}            (j = 1..r-1)
///   x_{2j+2} <= t^(1-1/2^j) (x_{2j-1} + x_{2j})   (j = 1..r-1)
///   x_{2r-1} >= 0,  x_{2r} >= 0
/// ```
///
/// in exactly that row order, with n = 2r variables and m = 3r+1 rows.
/// The optimal value is 0 and the point from [`lw_interior_point`] is
/// strictly feasible for every t > 1.
pub fn generate_lw(params: LwParams) -> LinearProgram {
    let r = params.r as usize;
    let t = params.t;
    let n = params.num_vars();
    let m = params.num_constraints();

    let mut a = DMatrix::<f64>::zeros(m, n);
    let mut b = DVector::<f64>::zeros(m);

    a[(0, 0)] = 1.0;
    b[0] = t * t;
    a[(1, 1)] = 1.0;
    b[1] = t;

    let mut row = 2;
    for j in 1..r {
        // x_{2j+1} <= t x_{2j-1}
        a[(row, 2 * j)] = 1.0;
        a[(row, 2 * j - 2)] = -t;
        row += 1;
        // x_{2j+1} <= t x_{2j}
        a[(row, 2 * j)] = 1.0;
        a[(row, 2 * j - 1)] = -t;
        row += 1;
        // x_{2j+2} <= t^(1-1/2^j) (x_{2j-1} + x_{2j})
        let tj = t_pow(t, j as u32);
        a[(row, 2 * j + 1)] = 1.0;
        a[(row, 2 * j - 2)] = -tj;
        a[(row, 2 * j - 1)] = -tj;
        row += 1;
    }
    a[(row, n - 2)] = -1.0;
    row += 1;
    a[(row, n - 1)] = -1.0;

    let mut c = DVector::<f64>::zeros(n);
    c[0] = 1.0;

    let witness = lw_interior_point(params);
    let lp = LinearProgram::new(a, b, c)
        .expect("LW dimensions are consistent by construction")
        .with_optimal_value(0.0);
    let mut lp = lp
        .with_interior_witness(witness)
        .expect("LW witness is strictly feasible for t > 1");
    lp.meta = Some(InstanceMeta {
        family: "LW".into(),
        r: Some(params.r),
        t: Some(t),
    });
    lp
}

/// The canonical strictly feasible point of `LW_r(t)`:
/// `x_{2j-1} = x_{2j} = 2^-j` for j = 1..r.
pub fn lw_interior_point(params: LwParams) -> DVector<f64> {
    let r = params.r as usize;
    let mut x = DVector::<f64>::zeros(2 * r);
    for j in 1..=r {
        let v = 0.5f64.powi(j as i32);
        x[2 * j - 2] = v;
        x[2 * j - 1] = v;
    }
    x
}

/// The 1-D box `min x` over `0 <= x <= 1`: rows `x <= 1`, `-x <= 0`.
/// The canonical hand-checkable instance.
pub fn unit_box() -> LinearProgram {
    let a = DMatrix::from_row_slice(2, 1, &[1.0, -1.0]);
    let b = DVector::from_vec(vec![1.0, 0.0]);
    let c = DVector::from_vec(vec![1.0]);
    let mut lp = LinearProgram::new(a, b, c)
        .expect("box dimensions consistent")
        .with_optimal_value(0.0)
        .with_interior_witness(DVector::from_vec(vec![0.5]))
        .expect("0.5 is interior");
    lp.meta = Some(InstanceMeta {
        family: "box".into(),
        r: None,
        t: None,
    });
    lp
}

/// The unit square `min x_1` over `[0,1]^2`.
pub fn unit_square() -> LinearProgram {
    let a = DMatrix::from_row_slice(
        4,
        2,
        &[1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0],
    );
    let b = DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
    let c = DVector::from_vec(vec![1.0, 0.0]);
    let mut lp = LinearProgram::new(a, b, c)
        .expect("square dimensions consistent")
        .with_optimal_value(0.0)
        .with_interior_witness(DVector::from_vec(vec![0.5, 0.5]))
        .expect("(0.5, 0.5) is interior");
    lp.meta = Some(InstanceMeta {
        family: "square".into(),
        r: None,
        t: None,
    });
    lp
}
