//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use ndarray::{s, Array1, Array2, ArrayView1};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use subcut::net::{cutoff_loss, frac_part, GradientSet};
use subcut::simplex::LpSolution;
use subcut::{GmiLayer, LpProblem, MilpInstance, SubadditiveNet, Variant};

pub fn worked() -> MilpInstance {
    let mut inst =
        MilpInstance::pure_integer("worked", ndarray::array![[-2.0, -2.0]], ndarray::array![-3.0], ndarray::array![-1.0, -1.0])
            .unwrap();
    inst.known_optimum = Some(-1.0);
    inst
}

/// Pure-integer instance with `m` random rows, integer entries in `[-4, 4]`,
/// a hidden feasible point in `{0..=2}^k`, costs in `[-5, 5]`, and explicit
/// bound rows `-x_j >= -bound`, so enumeration over `[0, bound]^k` is exact.
pub fn tiny_pure(rng: &mut ChaCha8Rng, m: usize, k: usize, bound: f64) -> MilpInstance {
    let a = Array2::from_shape_fn((m, k), |_| rng.random_range(-4..=4) as f64);
    let x0 = Array1::from_shape_fn(k, |_| rng.random_range(0..=2) as f64);
    let slack = Array1::from_shape_fn(m, |_| rng.random_range(0..=1) as f64);
    let b = a.dot(&x0) - slack;
    let c = Array1::from_shape_fn(k, |_| rng.random_range(-5..=5) as f64);
    MilpInstance::pure_integer("tiny", a, b, c)
        .unwrap()
        .with_integer_upper_bounds(bound)
}

/// Random layer stack with `W` entries in `[-2, 2]` and `{v}` kept away
/// from the clamp band.
pub fn random_net(rng: &mut ChaCha8Rng, m: usize, widths: &[usize], variant: Variant) -> SubadditiveNet {
    let mut net = SubadditiveNet::empty(m);
    for &w in widths {
        let indim = net.next_indim();
        let wm = Array2::from_shape_fn((w, indim), |_| rng.random_range(-2.0..2.0));
        let v = Array1::from_shape_fn(w, |_| {
            rng.random_range(-2..=2) as f64 + rng.random_range(0.05..0.95)
        });
        net.push(GmiLayer::new(wm, v, variant).unwrap()).unwrap();
    }
    net
}

/// Textbook GMI cut from row `pos` of the optimal tableau of `lp`, with the
/// basis inverse recomputed by nalgebra, expressed in structural variables
/// by substituting the surplus `s = M u − q`. Returns `(coefficients, rhs)`
/// of `coeffs · u >= rhs`; the first `num_integer` columns are integer.
pub fn tableau_gmi_cut(lp: &LpProblem, sol: &LpSolution, pos: usize, num_integer: usize) -> (Array1<f64>, f64) {
    let rows = lp.rows();
    let cols = lp.cols();
    let column = |j: usize| -> Vec<f64> {
        if j < cols {
            lp.matrix.column(j).to_vec()
        } else {
            let mut e = vec![0.0; rows];
            e[j - cols] = -1.0;
            e
        }
    };
    let basis = sol.basis.indices();
    let b = DMatrix::from_fn(rows, rows, |i, r| column(basis[r])[i]);
    let binv = b.try_inverse().expect("optimal basis is invertible");
    let q = nalgebra::DVector::from_iterator(rows, lp.rhs.iter().copied());
    let bbar = (&binv * q)[pos];
    let f0 = bbar - bbar.floor();

    // cut Σ π_j u_j + Σ σ_r s_r >= 1 over all columns (basic ones get 0)
    let mut pi = Array1::zeros(cols);
    let mut sigma = Array1::zeros(rows);
    for j in 0..cols + rows {
        if basis.contains(&j) {
            continue;
        }
        let col = nalgebra::DVector::from_vec(column(j));
        let abar = (binv.row(pos) * col)[0];
        if j < num_integer {
            let fj = abar - abar.floor();
            pi[j] = (fj / f0).min((1.0 - fj) / (1.0 - f0));
        } else {
            let coef = (abar / f0).max(-abar / (1.0 - f0));
            if j < cols {
                pi[j] = coef;
            } else {
                sigma[j - cols] = coef;
            }
        }
    }
    let coeffs = &pi + &lp.matrix.t().dot(&sigma);
    let rhs = 1.0 + sigma.dot(&lp.rhs);
    (coeffs, rhs)
}

/// Finite-difference gradient of the cut-off loss in every parameter:
/// central with `lo = -h`, forward with `lo = 0`. `None` if a perturbed
/// network leaves the log domain.
pub fn fd_gradient(
    net: &SubadditiveNet,
    inst: &MilpInstance,
    x: ArrayView1<f64>,
    z: ArrayView1<f64>,
    h: f64,
) -> Option<GradientSet> {
    difference_gradient(net, inst, x, z, h, -h)
}

pub fn difference_gradient(
    net: &SubadditiveNet,
    inst: &MilpInstance,
    x: ArrayView1<f64>,
    z: ArrayView1<f64>,
    hi: f64,
    lo: f64,
) -> Option<GradientSet> {
    let mut grads = GradientSet::zeros_like(net);
    let loss_at = |layers: Vec<GmiLayer>| -> Option<f64> {
        let n = SubadditiveNet::new(net.input_dim(), layers).unwrap();
        cutoff_loss(&n, inst, x, z).ok().map(|c| c.loss)
    };
    for (l, layer) in net.layers().iter().enumerate() {
        for idx in 0..layer.w.len() {
            let (i, j) = (idx / layer.indim(), idx % layer.indim());
            let mut plus = net.layers().to_vec();
            plus[l].w[[i, j]] += hi;
            let mut minus = net.layers().to_vec();
            minus[l].w[[i, j]] += lo;
            grads.layers[l].dw[[i, j]] = (loss_at(plus)? - loss_at(minus)?) / (hi - lo);
        }
        for i in 0..layer.width() {
            let mut plus = net.layers().to_vec();
            plus[l].v[i] += hi;
            let mut minus = net.layers().to_vec();
            minus[l].v[i] += lo;
            grads.layers[l].dv[i] = (loss_at(plus)? - loss_at(minus)?) / (hi - lo);
        }
    }
    Some(grads)
}

pub fn flatten(g: &GradientSet) -> Vec<f64> {
    g.layers
        .iter()
        .flat_map(|l| l.dw.iter().chain(l.dv.iter()).copied().collect::<Vec<_>>())
        .collect()
}

/// True if any scalar min/max, fractional part or `{v}` of the evaluation
/// of `net` on the instance's columns sits within `margin` of a kink.
pub fn near_breakpoint(net: &SubadditiveNet, inst: &MilpInstance, margin: f64) -> bool {
    let k = inst.k();
    let mut ab = Array2::zeros((inst.m(), k + 1));
    ab.slice_mut(s![.., ..k]).assign(&inst.a);
    ab.column_mut(k).assign(&inst.b);
    let Ok(int_out) = net.eval(ab.view()) else {
        return true; // outside the log domain
    };
    let cont_out = net.eval_bar(inst.g.view()).unwrap();
    for layer in net.layers() {
        let indim = layer.indim();
        for (i, &v) in layer.v.iter().enumerate() {
            let fv = frac_part(v);
            if fv < margin || fv > 1.0 - margin {
                return true;
            }
            for &w in layer.w.row(i) {
                if (-w / fv - w / (1.0 - fv)).abs() < margin {
                    return true;
                }
            }
        }
        let fv = layer.frac_v();
        let s_int = layer.w.dot(&int_out.slice(s![..indim, ..]));
        for ((i, _), &sv) in s_int.indexed_iter() {
            let t = frac_part(sv);
            if t < margin || t > 1.0 - margin || (t / fv[i] - (1.0 - t) / (1.0 - fv[i])).abs() < margin {
                return true;
            }
        }
        let s_cont = layer.w.dot(&cont_out.slice(s![..indim, ..]));
        for ((i, _), &sv) in s_cont.indexed_iter() {
            if (sv / fv[i] + sv / (1.0 - fv[i])).abs() < margin {
                return true;
            }
        }
    }
    false
}
