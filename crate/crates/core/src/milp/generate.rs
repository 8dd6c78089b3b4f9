//! Seeded desk-scale instance generators. All `<=` constraints are negated
//! into the canonical `>=` form.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MilpInstance;
use crate::error::{Error, Result};

const MAX_RESAMPLES: usize = 1000;

/// Minimum set cover: `min Σ c_j x_j` with costs uniform on `1..=100` and one
/// covering row `Σ_{j∈S_i} x_j >= 1` per element.
pub fn generate_set_cover(rows: usize, cols: usize, density: f64, seed: u64) -> Result<MilpInstance> {
    if rows < 1 {
        return Err(Error::InfeasibleParameters("set cover needs rows >= 1".into()));
    }
    if cols < 2 {
        return Err(Error::InfeasibleParameters("set cover needs cols >= 2".into()));
    }
    if !(density > 0.0 && density < 1.0) || density * (cols as f64) < 1.0 {
        return Err(Error::InfeasibleParameters(format!(
            "density {density} must lie in (0, 1) with density * cols >= 1"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let a = Array2::from_shape_fn((rows, cols), |_| {
            if rng.random_bool(density) {
                1.0
            } else {
                0.0
            }
        });
        let rows_ok = a.rows().into_iter().all(|r| r.iter().any(|&v| v != 0.0));
        let cols_ok = a.columns().into_iter().all(|c| c.iter().any(|&v| v != 0.0));
        if !(rows_ok && cols_ok) {
            continue;
        }
        let c = Array1::from_shape_fn(cols, |_| rng.random_range(1..=100) as f64);
        let name = format!("setcover_r{rows}_c{cols}_d{density}_s{seed}");
        return MilpInstance::new(
            name,
            a,
            Array2::zeros((rows, 0)),
            Array1::ones(rows),
            c,
            Array1::zeros(0),
            None,
        );
    }
    Err(Error::InfeasibleParameters(format!(
        "no set cover with every row and column covered after {MAX_RESAMPLES} samples"
    )))
}

/// Maximum independent set on an Erdős–Rényi graph, as `min -Σ x_u` with a
/// row `-x_u - x_v >= -1` per edge followed by `-x_u >= -1` per node.
pub fn generate_max_indep_set(nodes: usize, edge_prob: f64, seed: u64) -> Result<MilpInstance> {
    if nodes < 2 {
        return Err(Error::InfeasibleParameters("independent set needs nodes >= 2".into()));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::InfeasibleParameters(format!(
            "edge probability {edge_prob} must lie in (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in u + 1..nodes {
            if rng.random_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let m = edges.len() + nodes;
    let mut a = Array2::zeros((m, nodes));
    for (r, &(u, v)) in edges.iter().enumerate() {
        a[[r, u]] = -1.0;
        a[[r, v]] = -1.0;
    }
    for u in 0..nodes {
        a[[edges.len() + u, u]] = -1.0;
    }
    MilpInstance::new(
        format!("indepset_n{nodes}_p{edge_prob}_s{seed}"),
        a,
        Array2::zeros((m, 0)),
        Array1::from_elem(m, -1.0),
        Array1::from_elem(nodes, -1.0),
        Array1::zeros(0),
        None,
    )
}

/// Small mixed instance with integer coefficients in `[-5, 5]`.
///
/// The right-hand side is built around a hidden point `(x0, z0)` with
/// entries in `{0, 1, 2}`, so the instance is feasible with a feasible point
/// inside the box `[0, 2]^n`. Costs are positive, so it is bounded. Samples
/// whose origin is feasible or which have an all-zero row or `G` column are
/// rejected.
pub fn generate_random_mixed(m: usize, k: usize, ncont: usize, seed: u64) -> Result<MilpInstance> {
    if m < 1 || k < 1 || ncont < 1 {
        return Err(Error::InfeasibleParameters(
            "mixed instances need m, k, ncont >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let a = Array2::from_shape_fn((m, k), |_| rng.random_range(-5..=5) as f64);
        let g = Array2::from_shape_fn((m, ncont), |_| rng.random_range(-5..=5) as f64);
        let x0 = Array1::from_shape_fn(k, |_| rng.random_range(0..=2) as f64);
        let z0 = Array1::from_shape_fn(ncont, |_| rng.random_range(0..=2) as f64);
        let slack = Array1::from_shape_fn(m, |_| rng.random_range(0..=2) as f64);
        let b = a.dot(&x0) + g.dot(&z0) - slack;
        let c = Array1::from_shape_fn(k, |_| rng.random_range(1..=10) as f64);
        let h = Array1::from_shape_fn(ncont, |_| rng.random_range(1..=10) as f64);

        let row_ok = (0..m).all(|i| a.row(i).iter().chain(g.row(i).iter()).any(|&v| v != 0.0));
        let g_ok = g.columns().into_iter().all(|col| col.iter().any(|&v| v != 0.0));
        let origin_cut = b.iter().any(|&v| v > 0.0);
        if row_ok && g_ok && origin_cut {
            return MilpInstance::new(
                format!("mixed_m{m}_k{k}_c{ncont}_s{seed}"),
                a,
                g,
                b,
                c,
                h,
                None,
            );
        }
    }
    Err(Error::InfeasibleParameters(format!(
        "no acceptable mixed instance after {MAX_RESAMPLES} samples"
    )))
}
