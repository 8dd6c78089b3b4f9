//! The two initializers: classical GMI rounds and random orthogonal weights.

use ndarray::{concatenate, s, Array1, Array2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{clamped_frac, net_forward, GmiLayer, SubadditiveNet, Variant, FRAC_EPS};
use crate::cutopt::enlarged_lp_from_output;
use crate::error::{Error, Result};
use crate::milp::MilpInstance;
use crate::simplex::{self, extract_fractional_rows, Basis};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmStartOptions {
    /// Basic values whose fractional part is within this of an integer are
    /// not used as cut sources.
    pub frac_tol: f64,
    pub variant: Variant,
}

impl Default for WarmStartOptions {
    fn default() -> Self {
        WarmStartOptions {
            frac_tol: 1e-3,
            variant: Variant::Gmi,
        }
    }
}

/// One layer per entry of `widths`, each holding the most violated classical
/// GMI cuts (`W = B⁻¹` rows, `v = B⁻¹b`) of the LP enlarged by the previous
/// layers, padded with dummy rows.
pub fn gmi_warm_start(
    inst: &MilpInstance,
    widths: &[usize],
    opts: &WarmStartOptions,
) -> Result<SubadditiveNet> {
    if widths.is_empty() || widths.contains(&0) {
        return Err(Error::validation("widths", "need at least one layer, each of width >= 1"));
    }
    let mut net = SubadditiveNet::empty(inst.m());
    let mut basis: Option<Basis> = None;
    for &width in widths {
        let output = net_forward(&net, inst.a.view(), inst.g.view(), inst.b.view())?;
        let lp = enlarged_lp_from_output(inst, &output);
        let sol = simplex::solve(&lp, basis.as_ref())?;
        if !sol.is_optimal() {
            return Err(Error::LpNotOptimal(sol.status));
        }
        let candidates = extract_fractional_rows(&lp, &sol, inst.k(), opts.frac_tol);
        let indim = net.next_indim();
        let layer = if candidates.is_empty() {
            GmiLayer::dummy(width, indim, opts.variant)
        } else {
            let mut w = Array2::zeros((candidates.len(), indim));
            let mut v = Array1::zeros(candidates.len());
            for (r, row) in candidates.iter().enumerate() {
                w.row_mut(r).assign(&row.w_row);
                v[r] = row.value;
            }
            let all = GmiLayer::new(w, v, opts.variant)?;
            let order = rank_by_violation(&all, &output, &sol.primal, inst.k())?;
            let mut layer = GmiLayer::dummy(width, indim, opts.variant);
            for (r, &src) in order.iter().take(width).enumerate() {
                layer.w.row_mut(r).assign(&all.w.row(src));
                layer.v[r] = all.v[src];
            }
            layer
        };
        net.push(layer)?;
        basis = Some(sol.basis.extended(lp.cols(), lp.rows(), width));
    }
    Ok(net)
}

/// Candidate rows sorted by `(rhs − lhs at the LP optimum) / max(1, ‖row‖)`,
/// most violated first; ties keep the basis order.
fn rank_by_violation(
    candidates: &GmiLayer,
    output: &super::NetOutput,
    primal: &Array1<f64>,
    k: usize,
) -> Result<Vec<usize>> {
    let fb_col = output.fb.view().insert_axis(Axis(1));
    let int_in = concatenate(Axis(1), &[output.fa.view(), fb_col]).expect("same row count");
    // the GMI value at an integral rhs is the plain (log-free) layer
    let plain = GmiLayer {
        variant: Variant::Gmi,
        ..candidates.clone()
    };
    let int_rows = plain.phi(int_in.view())?;
    let cont_rows = plain.phi_bar(output.fg.view())?;
    let x = primal.slice(s![..k]);
    let z = primal.slice(s![k..]);
    let fa = int_rows.slice(s![.., ..k]);
    let fb = int_rows.column(k);
    let score: Vec<f64> = (0..plain.width())
        .map(|r| {
            let lhs = fa.row(r).dot(&x) + cont_rows.row(r).dot(&z);
            let norm = fa.row(r).iter().chain(cont_rows.row(r).iter()).map(|a| a * a).sum::<f64>().sqrt();
            (fb[r] - lhs) / norm.max(1.0)
        })
        .collect();
    let mut order: Vec<usize> = (0..plain.width()).collect();
    order.sort_by(|&a, &b| score[b].total_cmp(&score[a]));
    Ok(order)
}

/// Layers whose `W` rows are orthonormal Gaussian directions (in blocks of
/// `indim` rows when the layer is wider than its input) and whose `v` is
/// standard normal.
pub fn random_orthogonal_init(
    m: usize,
    widths: &[usize],
    seed: u64,
    variant: Variant,
) -> Result<SubadditiveNet> {
    if widths.is_empty() || widths.contains(&0) {
        return Err(Error::validation("widths", "need at least one layer, each of width >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = SubadditiveNet::empty(m);
    for &width in widths {
        let indim = net.next_indim();
        let mut w = Array2::from_shape_fn((width, indim), |_| StandardNormal.sample(&mut rng));
        for start in (0..width).step_by(indim) {
            let end = (start + indim).min(width);
            orthonormalize_rows(&mut w, start, end);
        }
        let v = Array1::from_shape_fn(width, |_| {
            let v: f64 = StandardNormal.sample(&mut rng);
            if clamped_frac(v).1 {
                v
            } else {
                v.round() + FRAC_EPS
            }
        });
        net.push(GmiLayer::new(w, v, variant)?)?;
    }
    Ok(net)
}

/// Modified Gram–Schmidt on rows `start..end`. A row that collapses
/// numerically is replaced by the first unit vector orthogonal to the others.
fn orthonormalize_rows(w: &mut Array2<f64>, start: usize, end: usize) {
    let dim = w.ncols();
    for i in start..end {
        for attempt in 0..=dim {
            for j in start..i {
                let proj = w.row(i).dot(&w.row(j));
                let basis = w.row(j).to_owned();
                w.row_mut(i).scaled_add(-proj, &basis);
            }
            let norm = w.row(i).dot(&w.row(i)).sqrt();
            if norm > 1e-8 {
                w.row_mut(i).mapv_inplace(|x| x / norm);
                break;
            }
            let mut e = Array1::zeros(dim);
            e[attempt % dim] = 1.0;
            w.row_mut(i).assign(&e);
        }
    }
}
