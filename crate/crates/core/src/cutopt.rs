//! The two-step heuristic: solve the LP enlarged by the network's cuts, then
//! take gradient steps on the network until the LP optimum is cut off, and
//! repeat until the bound stops moving or a budget runs out.

use std::fmt::Write as _;
use std::time::Instant;

use log::{debug, info};
use ndarray::{concatenate, s, Array1, ArrayView1, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::milp::{gap_with_fallback, MilpInstance};
use crate::net::{cutoff_loss, loss_gradients, net_forward, NetOutput, SubadditiveNet};
use crate::simplex::{self, Basis, LpProblem};

/// Integrality tolerance used to recognise an LP optimum that is already MILP-optimal.
const INTEGRALITY_TOL: f64 = 1e-6;

/// `min c·x + h·z  s.t.  f(A) x + f̄(G) z >= f(b),  x, z >= 0`.
pub fn build_enlarged_lp(net: &SubadditiveNet, inst: &MilpInstance) -> Result<LpProblem> {
    let output = net_forward(net, inst.a.view(), inst.g.view(), inst.b.view())?;
    Ok(enlarged_lp_from_output(inst, &output))
}

pub(crate) fn enlarged_lp_from_output(inst: &MilpInstance, output: &NetOutput) -> LpProblem {
    let matrix = concatenate(Axis(1), &[output.fa.view(), output.fg.view()]).expect("same row count");
    let cost = concatenate(Axis(0), &[inst.c.view(), inst.h.view()]).expect("1-d concat");
    LpProblem {
        matrix,
        rhs: output.fb.clone(),
        cost,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Gradient step size.
    pub alpha: f64,
    /// Standard deviation of the noise added to the LP optimum.
    pub beta: f64,
    pub max_outer: usize,
    /// Gradient steps allowed per outer iteration.
    pub max_inner: usize,
    /// Gradient steps allowed over the whole run.
    pub max_total_steps: usize,
    /// Relative best-bound improvement below which the run has converged.
    pub conv_tol: f64,
    /// Number of trace records the improvement is measured over.
    pub conv_window: usize,
    pub seed: u64,
    /// A cut row must be violated by more than this at the LP optimum for the
    /// inner loop to stop.
    pub cut_tol: f64,
    /// Fill the `seconds` trace column; off by default so traces are reproducible byte for byte.
    pub record_time: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            alpha: 1e-3,
            beta: 1e-4,
            max_outer: 1000,
            max_inner: 1000,
            max_total_steps: 2000,
            conv_tol: 1e-6,
            conv_window: 50,
            seed: 0,
            cut_tol: 1e-6,
            record_time: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("alpha", self.alpha > 0.0 && self.alpha.is_finite()),
            ("beta", self.beta >= 0.0 && self.beta.is_finite()),
            ("max_outer", self.max_outer >= 1),
            ("max_inner", self.max_inner >= 1),
            ("max_total_steps", self.max_total_steps >= 1),
            ("conv_tol", self.conv_tol > 0.0),
            ("conv_window", self.conv_window >= 1),
            ("cut_tol", self.cut_tol >= 0.0),
        ];
        for (field, ok) in checks {
            if !ok {
                return Err(Error::validation(field, "out of range"));
            }
        }
        Ok(())
    }
}

/// One LP solve of the outer loop.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Gradient steps taken before this solve.
    pub step: usize,
    pub outer_iter: usize,
    pub dual_bound: f64,
    pub best_bound: f64,
    pub gap: Option<f64>,
    /// Gradient steps of the inner loop that produced this network.
    pub inner_steps: usize,
    pub pivots: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Best bound stalled over the convergence window.
    Converged,
    /// The LP optimum is integral, so it is MILP-optimal and cannot be cut.
    IntegralOptimum,
    OuterBudget,
    StepBudget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub termination: Option<Termination>,
}

pub const TRACE_HEADER: &str = "step,outer_iter,dual_bound,best_bound,gap,inner_steps,pivots,seconds";

impl RunTrace {
    pub fn new() -> Self {
        RunTrace {
            records: Vec::new(),
            termination: None,
        }
    }

    pub fn first(&self) -> Option<&TraceRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn best_bound(&self) -> Option<f64> {
        self.last().map(|r| r.best_bound)
    }

    pub fn total_steps(&self) -> usize {
        self.last().map_or(0, |r| r.step)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            let gap = r.gap.map(|g| g.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.step, r.outer_iter, r.dual_bound, r.best_bound, gap, r.inner_steps, r.pivots, r.seconds
            );
        }
        out
    }
}

impl Default for RunTrace {
    fn default() -> Self {
        RunTrace::new()
    }
}

fn stopping_reason(trace: &RunTrace, config: &OptimizerConfig) -> Option<Termination> {
    let last = trace.last()?;
    if trace.records.len() >= config.max_outer {
        return Some(Termination::OuterBudget);
    }
    if last.step >= config.max_total_steps {
        return Some(Termination::StepBudget);
    }
    let n = trace.records.len();
    if n > config.conv_window {
        let earlier = trace.records[n - 1 - config.conv_window].best_bound;
        if last.best_bound - earlier < config.conv_tol * (1.0 + last.best_bound.abs()) {
            return Some(Termination::Converged);
        }
    }
    None
}

/// True when the best bound has improved by less than
/// `conv_tol · (1 + |best|)` across the last `conv_window` outer iterations,
/// or when a budget is exhausted.
pub fn converged(trace: &RunTrace, config: &OptimizerConfig) -> bool {
    stopping_reason(trace, config).is_some()
}

#[derive(Debug, Clone)]
pub struct InnerOutcome {
    pub net: SubadditiveNet,
    pub steps: usize,
    /// Whether the LP optimum ended up cut off.
    pub cut: bool,
    /// Violations of the cut rows at the LP optimum for the final network.
    pub violation: Array1<f64>,
}

/// Gradient steps on the mean violation at noisy copies of `(x*, z*)` until
/// one of the network's cut rows is violated by more than `cut_tol` at
/// `(x*, z*)` itself, or `max_steps` steps have been taken.
pub fn inner_loop(
    net: &SubadditiveNet,
    inst: &MilpInstance,
    x_star: ArrayView1<f64>,
    z_star: ArrayView1<f64>,
    config: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
    max_steps: usize,
) -> Result<InnerOutcome> {
    let m = inst.m();
    let mut net = net.clone();
    let mut steps = 0;
    loop {
        let at_opt = cutoff_loss(&net, inst, x_star, z_star)?;
        let violation = at_opt.violation.slice(s![m..]).to_owned();
        let cut = violation.iter().any(|&v| v < -config.cut_tol);
        if cut || steps >= max_steps {
            return Ok(InnerOutcome {
                net,
                steps,
                cut,
                violation,
            });
        }
        let xbar = noisy(x_star, config.beta, rng);
        let zbar = noisy(z_star, config.beta, rng);
        let target = cutoff_loss(&net, inst, xbar.view(), zbar.view())?;
        let grads = loss_gradients(&net, inst, xbar.view(), zbar.view(), &target.output.cache)?;
        if !grads.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "non-finite gradient after {steps} inner steps"
            )));
        }
        net = net.apply_gradient(&grads, config.alpha)?;
        steps += 1;
    }
}

fn noisy(x: ArrayView1<f64>, beta: f64, rng: &mut ChaCha8Rng) -> Array1<f64> {
    x.mapv(|v| {
        let eps: f64 = StandardNormal.sample(rng);
        v + beta * eps
    })
}

fn is_integral(x: ArrayView1<f64>) -> bool {
    x.iter().all(|&v| (v - v.round()).abs() <= INTEGRALITY_TOL)
}

/// Alternates LP solves (warm-started from the previous basis) with the
/// inner gradient loop. Returns the network that produced the best bound
/// and the trace of every LP solve.
pub fn two_step_optimize(
    inst: &MilpInstance,
    net0: &SubadditiveNet,
    config: &OptimizerConfig,
) -> Result<(SubadditiveNet, RunTrace)> {
    config.validate()?;
    if net0.input_dim() != inst.m() {
        return Err(Error::DimensionMismatch(format!(
            "network input dimension {} but instance has {} rows",
            net0.input_dim(),
            inst.m()
        )));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trace = RunTrace::new();
    let mut net = net0.clone();
    let mut best_net = net0.clone();
    let mut best = f64::NEG_INFINITY;
    let mut basis: Option<Basis> = None;
    let mut total_steps = 0;
    let mut inner_steps = 0;
    let k = inst.k();

    for outer_iter in 0.. {
        let lp = build_enlarged_lp(&net, inst)?;
        let sol = simplex::solve(&lp, basis.as_ref())?;
        if !sol.is_optimal() {
            return Err(Error::LpNotOptimal(sol.status));
        }
        if sol.objective > best {
            best = sol.objective;
            best_net = net.clone();
        }
        trace.records.push(TraceRecord {
            step: total_steps,
            outer_iter,
            dual_bound: sol.objective,
            best_bound: best,
            gap: inst.known_optimum.map(|z| gap_with_fallback(best, z).0),
            inner_steps,
            pivots: sol.pivots,
            seconds: if config.record_time {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            },
        });
        debug!("outer {outer_iter}: bound {} best {best} after {total_steps} steps", sol.objective);

        let x_star = sol.primal.slice(s![..k]);
        let z_star = sol.primal.slice(s![k..]);
        if is_integral(x_star) {
            trace.termination = Some(Termination::IntegralOptimum);
            break;
        }
        if let Some(reason) = stopping_reason(&trace, config) {
            trace.termination = Some(reason);
            break;
        }

        let budget = config.max_inner.min(config.max_total_steps - total_steps);
        let outcome = inner_loop(&net, inst, x_star, z_star, config, &mut rng, budget)?;
        if !outcome.cut {
            info!("inner loop stalled after {} steps at outer iteration {outer_iter}", outcome.steps);
        }
        net = outcome.net;
        inner_steps = outcome.steps;
        total_steps += outcome.steps;
        basis = Some(sol.basis);
    }
    Ok((best_net, trace))
}
