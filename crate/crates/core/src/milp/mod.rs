//! MILP data in the canonical form
//!
//! ```text
//! min c·x + h·z   s.t.  A x + G z >= b,  x, z >= 0,  x integer
//! ```
//!
//! with `A` holding the `k` integer columns and `G` the `n - k` continuous ones.

mod enumerate;
mod format;
mod generate;

use ndarray::{concatenate, Array1, Array2, ArrayView1, Axis};

use crate::error::{Error, Result};
use crate::simplex::LpProblem;

pub(crate) use format::{dense, triplets};
pub use enumerate::{enumerate_feasible, FeasiblePoint, FeasiblePointSet, ENUMERATION_BUDGET};
pub use format::{load_instance, parse_instance, save_instance, to_json};
pub use generate::{generate_max_indep_set, generate_random_mixed, generate_set_cover};

#[derive(Debug, Clone, PartialEq)]
pub struct MilpInstance {
    pub name: String,
    pub a: Array2<f64>,
    pub g: Array2<f64>,
    pub b: Array1<f64>,
    pub c: Array1<f64>,
    pub h: Array1<f64>,
    pub known_optimum: Option<f64>,
}

impl MilpInstance {
    pub fn new(
        name: impl Into<String>,
        a: Array2<f64>,
        g: Array2<f64>,
        b: Array1<f64>,
        c: Array1<f64>,
        h: Array1<f64>,
        known_optimum: Option<f64>,
    ) -> Result<Self> {
        let inst = MilpInstance {
            name: name.into(),
            a,
            g,
            b,
            c,
            h,
            known_optimum,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Pure-integer instance with no continuous columns.
    pub fn pure_integer(
        name: impl Into<String>,
        a: Array2<f64>,
        b: Array1<f64>,
        c: Array1<f64>,
    ) -> Result<Self> {
        let m = a.nrows();
        MilpInstance::new(name, a, Array2::zeros((m, 0)), b, c, Array1::zeros(0), None)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.b.len();
        if m == 0 {
            return Err(Error::validation("m", "instance needs at least one row"));
        }
        if self.a.nrows() != m {
            return Err(Error::validation(
                "A",
                format!("has {} rows, expected m = {m}", self.a.nrows()),
            ));
        }
        if self.g.nrows() != m {
            return Err(Error::validation(
                "G",
                format!("has {} rows, expected m = {m}", self.g.nrows()),
            ));
        }
        if self.c.len() != self.a.ncols() {
            return Err(Error::validation(
                "c",
                format!("has {} entries, expected k = {}", self.c.len(), self.a.ncols()),
            ));
        }
        if self.h.len() != self.g.ncols() {
            return Err(Error::validation(
                "h",
                format!("has {} entries, expected n - k = {}", self.h.len(), self.g.ncols()),
            ));
        }
        let fields: [(&str, Box<dyn Iterator<Item = &f64>>); 5] = [
            ("A", Box::new(self.a.iter())),
            ("G", Box::new(self.g.iter())),
            ("b", Box::new(self.b.iter())),
            ("c", Box::new(self.c.iter())),
            ("h", Box::new(self.h.iter())),
        ];
        for (name, mut it) in fields {
            if it.any(|v| !v.is_finite()) {
                return Err(Error::validation(name, "non-finite entry"));
            }
        }
        if let Some(z) = self.known_optimum {
            if !z.is_finite() {
                return Err(Error::validation("known_optimum", "non-finite value"));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Number of integer variables.
    pub fn k(&self) -> usize {
        self.a.ncols()
    }

    pub fn n(&self) -> usize {
        self.a.ncols() + self.g.ncols()
    }

    pub fn num_continuous(&self) -> usize {
        self.g.ncols()
    }

    pub fn is_pure_integer(&self) -> bool {
        self.g.ncols() == 0
    }

    pub fn objective(&self, x: ArrayView1<f64>, z: ArrayView1<f64>) -> f64 {
        self.c.dot(&x) + self.h.dot(&z)
    }

    /// Row activities `A x + G z`.
    pub fn activity(&self, x: ArrayView1<f64>, z: ArrayView1<f64>) -> Array1<f64> {
        self.a.dot(&x) + self.g.dot(&z)
    }

    pub fn is_feasible(&self, x: ArrayView1<f64>, z: ArrayView1<f64>, tol: f64) -> bool {
        x.iter().chain(z.iter()).all(|&v| v >= -tol)
            && self
                .activity(x, z)
                .iter()
                .zip(self.b.iter())
                .all(|(&act, &rhs)| act >= rhs - tol)
    }

    /// The LP relaxation as an [`LpProblem`] over `u = [x, z]`.
    pub fn lp_relaxation(&self) -> LpProblem {
        let matrix = concatenate(Axis(1), &[self.a.view(), self.g.view()])
            .expect("A and G share the row count");
        let cost = concatenate(Axis(0), &[self.c.view(), self.h.view()]).expect("1-d concat");
        LpProblem::new(matrix, self.b.clone(), cost).expect("validated instance")
    }

    /// Copy with explicit rows `-x_j >= -bound` for every integer variable.
    pub fn with_integer_upper_bounds(&self, bound: f64) -> Self {
        let k = self.k();
        let mut a = self.a.clone();
        let mut g = self.g.clone();
        let mut b = self.b.to_vec();
        for j in 0..k {
            let mut row = Array1::zeros(k);
            row[j] = -1.0;
            a.push_row(row.view()).expect("row width k");
            g.push_row(Array1::zeros(self.g.ncols()).view()).expect("row width n - k");
            b.push(-bound);
        }
        MilpInstance {
            name: self.name.clone(),
            a,
            g,
            b: Array1::from(b),
            c: self.c.clone(),
            h: self.h.clone(),
            known_optimum: self.known_optimum,
        }
    }
}

/// How a gap value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    /// `(z* - z) / |z*|`
    Relative,
    /// `z* - z`, used when `z*` is numerically zero.
    Absolute,
}

const GAP_GUARD: f64 = 1e-12;

/// Relative optimality gap `(z* - z) / |z*|` of a dual bound `z`.
pub fn optimality_gap(z: f64, z_star: f64) -> Result<f64> {
    if z == z_star {
        return Ok(0.0);
    }
    if z_star.abs() < GAP_GUARD {
        return Err(Error::DivisionGuard { z_star });
    }
    Ok((z_star - z) / z_star.abs())
}

/// Like [`optimality_gap`] but falls back to the absolute difference when
/// `z*` is zero instead of failing.
pub fn gap_with_fallback(z: f64, z_star: f64) -> (f64, GapKind) {
    match optimality_gap(z, z_star) {
        Ok(g) => (g, GapKind::Relative),
        Err(_) => (z_star - z, GapKind::Absolute),
    }
}
