//! Best-bound branch and bound over the simplex solver, used for reference optima.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::trace;
use ndarray::{s, Array1};

use crate::error::{Error, Result};
use crate::milp::{FeasiblePoint, MilpInstance};
use crate::simplex::{self, Basis, LpProblem, LpStatus};

const INTEGRALITY_TOL: f64 = 1e-6;
/// A node is pruned when its bound is not below the incumbent by more than this.
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnbStatus {
    Optimal,
    Infeasible,
    NodeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbResult {
    pub status: BnbStatus,
    /// Incumbent objective, `+∞` without an incumbent.
    pub optimum: f64,
    pub incumbent: Option<FeasiblePoint>,
    /// Valid global lower bound on the MILP optimum.
    pub lower_bound: f64,
    pub nodes: usize,
}

struct Node {
    /// Parent LP bound (a lower bound for this subtree).
    bound: f64,
    id: usize,
    lp: LpProblem,
    warm: Basis,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: smallest bound first, then oldest node.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Integer variable whose LP value has fractional part closest to 0.5.
fn most_fractional(x: &[f64]) -> Option<usize> {
    x.iter()
        .enumerate()
        .map(|(j, &v)| (j, v - v.floor()))
        .filter(|&(_, f)| f > INTEGRALITY_TOL && f < 1.0 - INTEGRALITY_TOL)
        .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()))
        .map(|(j, _)| j)
}

pub fn branch_and_bound(inst: &MilpInstance, node_limit: usize) -> Result<BnbResult> {
    let k = inst.k();
    let cols = inst.n();
    let root = inst.lp_relaxation();
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        id: 0,
        warm: Basis::slack(root.rows(), cols),
        lp: root,
    });
    let mut next_id = 1;
    let mut nodes = 0;
    let mut incumbent: Option<FeasiblePoint> = None;
    let mut best = f64::INFINITY;

    while let Some(node) = heap.peek() {
        if node.bound >= best - PRUNE_TOL {
            // best-bound order: every remaining node is dominated
            heap.clear();
            break;
        }
        if nodes >= node_limit {
            break;
        }
        let node = heap.pop().expect("peeked");
        nodes += 1;
        let sol = simplex::solve(&node.lp, Some(&node.warm))?;
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(Error::LpNotOptimal(LpStatus::Unbounded)),
            LpStatus::Optimal => {}
        }
        trace!("node {} bound {} lp {}", node.id, node.bound, sol.objective);
        if sol.objective >= best - PRUNE_TOL {
            continue;
        }
        let x = sol.primal.slice(s![..k]).to_vec();
        match most_fractional(&x) {
            None => {
                let x = Array1::from_iter(x.iter().map(|v| v.round()));
                let z = sol.primal.slice(s![k..]).to_owned();
                let value = inst.objective(x.view(), z.view());
                if value < best {
                    best = value;
                    incumbent = Some(FeasiblePoint { x, z });
                }
            }
            Some(j) => {
                let v = x[j];
                let mut up = Array1::zeros(cols);
                up[j] = 1.0;
                let down = -&up;
                for (coeffs, rhs) in [(up, v.ceil()), (down, -v.floor())] {
                    let lp = node.lp.with_row(coeffs.view(), rhs)?;
                    heap.push(Node {
                        bound: sol.objective,
                        id: next_id,
                        warm: sol.basis.extended(cols, node.lp.rows(), 1),
                        lp,
                    });
                    next_id += 1;
                }
            }
        }
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    let lower_bound = open_bound.min(best);
    let status = if !heap.is_empty() {
        BnbStatus::NodeLimit
    } else if incumbent.is_some() {
        BnbStatus::Optimal
    } else {
        BnbStatus::Infeasible
    };
    Ok(BnbResult {
        status,
        optimum: best,
        incumbent,
        lower_bound,
        nodes,
    })
}
