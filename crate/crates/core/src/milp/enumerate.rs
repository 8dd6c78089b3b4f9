//! Brute-force oracle over the integer box `[0, bound]^k`.

use std::fmt::Write as _;

use ndarray::Array1;

use super::MilpInstance;
use crate::error::{Error, Result};
use crate::simplex::{self, LpProblem, LpStatus};

/// Largest number of integer points `enumerate_feasible` will visit.
pub const ENUMERATION_BUDGET: f64 = 1e7;

const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePoint {
    pub x: Array1<f64>,
    pub z: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePointSet {
    pub points: Vec<FeasiblePoint>,
    pub bound: u32,
}

impl FeasiblePointSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Best objective over the enumerated points, or `None` if there are none.
    pub fn best_objective(&self, inst: &MilpInstance) -> Option<f64> {
        self.points
            .iter()
            .map(|p| inst.objective(p.x.view(), p.z.view()))
            .min_by(|a, b| a.total_cmp(b))
    }

    /// One point per line, `x` then `z`, comma separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let fields: Vec<String> = p.x.iter().chain(p.z.iter()).map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

/// All integer `x` in `[0, bound]^k` that admit a continuous completion.
///
/// For mixed instances the completion is the cheapest `z` for that `x`
/// (an LP over `z`), falling back to any feasible `z` when that LP is
/// unbounded, so [`FeasiblePointSet::best_objective`] is the optimum over
/// the box.
pub fn enumerate_feasible(inst: &MilpInstance, bound: u32) -> Result<FeasiblePointSet> {
    let k = inst.k();
    let count = (bound as f64 + 1.0).powi(k as i32);
    if count > ENUMERATION_BUDGET {
        return Err(Error::Explosion {
            points: count,
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut points = Vec::new();
    let mut x = vec![0u32; k];
    loop {
        let xf = Array1::from_iter(x.iter().map(|&v| v as f64));
        if let Some(z) = best_completion(inst, &xf)? {
            points.push(FeasiblePoint { x: xf, z });
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(FeasiblePointSet { points, bound });
            }
            if x[pos] < bound {
                x[pos] += 1;
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
    }
}

/// Cheapest continuous completion for a fixed integer part; `None` if infeasible.
pub(crate) fn best_completion(inst: &MilpInstance, x: &Array1<f64>) -> Result<Option<Array1<f64>>> {
    let residual = &inst.b - &inst.a.dot(x);
    if inst.is_pure_integer() {
        let ok = residual.iter().all(|&r| r <= FEAS_TOL);
        return Ok(ok.then(|| Array1::zeros(0)));
    }
    let sub = LpProblem::new(inst.g.clone(), residual.clone(), inst.h.clone())?;
    let sol = simplex::solve(&sub, None)?;
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.primal)),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => {
            let feas = LpProblem::new(
                inst.g.clone(),
                residual,
                Array1::zeros(inst.num_continuous()),
            )?;
            let sol = simplex::solve(&feas, None)?;
            Ok(sol.is_optimal().then_some(sol.primal))
        }
    }
}
