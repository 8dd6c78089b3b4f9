//! Forward evaluation of `f_θ` / `f̄_θ` with branch bookkeeping, and
//! reverse accumulation of parameter gradients through it.

use ndarray::{concatenate, s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use super::{clamped_frac, frac_part, GmiLayer, GradientSet, LayerGradient, SubadditiveNet, Variant};
use crate::error::{Error, Result};
use crate::milp::MilpInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Path {
    /// `φ` on integer columns and the right-hand side.
    Phi,
    /// `φ̄` on continuous columns.
    PhiBar,
}

#[derive(Debug, Clone)]
struct LayerCache {
    input: Array2<f64>,
    pre: Array2<f64>,
    /// Scalar min (`φ`) or max (`φ̄`) took its first argument.
    first: Array2<bool>,
    /// Layer value before the log transform.
    value: Array2<f64>,
}

/// Per-layer inputs, pre-activations `Wy` and branch choices for both paths.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    int_path: Vec<LayerCache>,
    cont_path: Vec<LayerCache>,
    num_integer: usize,
}

#[derive(Debug, Clone)]
pub struct NetOutput {
    /// `f_θ(A)`, p × k.
    pub fa: Array2<f64>,
    /// `f̄_θ(G)`, p × (n − k).
    pub fg: Array2<f64>,
    /// `f_θ(b)`, length p.
    pub fb: Array1<f64>,
    pub cache: ForwardCache,
}

fn layer_forward(layer: &GmiLayer, y: &Array2<f64>, path: Path) -> Result<(Array2<f64>, LayerCache)> {
    let fv = layer.frac_v();
    let (lin, _) = layer.linear_coefficients();
    let pre = layer.w.dot(y);
    let mut value = lin.dot(y);
    let mut first = Array2::from_elem(pre.dim(), false);
    for ((i, c), val) in value.indexed_iter_mut() {
        let s = pre[[i, c]];
        let (a, b, take_first) = match path {
            Path::Phi => {
                let t = frac_part(s);
                let a = t / fv[i];
                let b = (1.0 - t) / (1.0 - fv[i]);
                (a, b, a <= b)
            }
            Path::PhiBar => {
                let a = s / fv[i];
                let b = -s / (1.0 - fv[i]);
                (a, b, a >= b)
            }
        };
        first[[i, c]] = take_first;
        *val += if take_first { a } else { b };
    }
    let out = if path == Path::Phi && layer.variant == Variant::Log {
        let mut out = value.clone();
        for o in out.iter_mut() {
            if *o <= -1.0 + 1e-12 {
                return Err(Error::LogDomain { value: *o });
            }
            *o = o.ln_1p();
        }
        out
    } else {
        value.clone()
    };
    Ok((
        out,
        LayerCache {
            input: y.clone(),
            pre,
            first,
            value,
        },
    ))
}

fn path_forward(net: &SubadditiveNet, y0: Array2<f64>, path: Path) -> Result<(Array2<f64>, Vec<LayerCache>)> {
    let mut cur = y0;
    let mut caches = Vec::with_capacity(net.layers().len());
    for layer in net.layers() {
        let (phi, cache) = layer_forward(layer, &cur, path)?;
        cur = concatenate(Axis(0), &[cur.view(), phi.view()]).expect("same column count");
        caches.push(cache);
    }
    Ok((cur, caches))
}

/// Evaluates `f_θ(A)`, `f̄_θ(G)` and `f_θ(b)`; the first `m` output rows are
/// the inputs unchanged.
pub fn net_forward(
    net: &SubadditiveNet,
    a: ArrayView2<f64>,
    g: ArrayView2<f64>,
    b: ArrayView1<f64>,
) -> Result<NetOutput> {
    let m = net.input_dim();
    if a.nrows() != m || g.nrows() != m || b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "network input dimension is {m}, data has A: {}, G: {}, b: {} rows",
            a.nrows(),
            g.nrows(),
            b.len()
        )));
    }
    let k = a.ncols();
    let ab = concatenate(Axis(1), &[a, b.insert_axis(Axis(1))]).expect("same row count");
    let (int_out, int_path) = path_forward(net, ab, Path::Phi)?;
    let (fg, cont_path) = path_forward(net, g.to_owned(), Path::PhiBar)?;
    Ok(NetOutput {
        fa: int_out.slice(s![.., ..k]).to_owned(),
        fb: int_out.column(k).to_owned(),
        fg,
        cache: ForwardCache {
            int_path,
            cont_path,
            num_integer: k,
        },
    })
}

fn layer_backward(
    layer: &GmiLayer,
    cache: &LayerCache,
    path: Path,
    upstream: ArrayView2<f64>,
) -> (LayerGradient, Array2<f64>) {
    let width = layer.width();
    let (lin, lin_first) = layer.linear_coefficients();
    let fv_info: Vec<(f64, bool)> = layer.v.iter().map(|&v| clamped_frac(v)).collect();

    let mut u = upstream.to_owned();
    if path == Path::Phi && layer.variant == Variant::Log {
        u.zip_mut_with(&cache.value, |ui, &val| *ui /= 1.0 + val);
    }

    // d(scalar branch)/d(Wy), scaled by the upstream gradient
    let mut gs = Array2::zeros(u.dim());
    let mut dv = Array1::zeros(width);
    for ((i, c), g) in gs.indexed_iter_mut() {
        let (fv, _) = fv_info[i];
        let ui = u[[i, c]];
        if ui == 0.0 {
            continue;
        }
        let first = cache.first[[i, c]];
        *g = ui * if first { 1.0 / fv } else { -1.0 / (1.0 - fv) };
        let s = cache.pre[[i, c]];
        let dfv = match (path, first) {
            (Path::Phi, true) => -frac_part(s) / (fv * fv),
            (Path::Phi, false) => (1.0 - frac_part(s)) / ((1.0 - fv) * (1.0 - fv)),
            (Path::PhiBar, true) => -s / (fv * fv),
            (Path::PhiBar, false) => -s / ((1.0 - fv) * (1.0 - fv)),
        };
        dv[i] += ui * dfv;
    }

    let y = &cache.input;
    let uy = u.dot(&y.t());
    let mut dw = gs.dot(&y.t());
    for ((i, j), d) in dw.indexed_iter_mut() {
        let (fv, _) = fv_info[i];
        let w = layer.w[[i, j]];
        let (dl_dw, dl_dfv) = if lin_first[[i, j]] {
            (-1.0 / fv, w / (fv * fv))
        } else {
            (1.0 / (1.0 - fv), w / ((1.0 - fv) * (1.0 - fv)))
        };
        *d += dl_dw * uy[[i, j]];
        dv[i] += dl_dfv * uy[[i, j]];
    }
    for (i, d) in dv.iter_mut().enumerate() {
        if !fv_info[i].1 {
            *d = 0.0;
        }
    }
    let dy = layer.w.t().dot(&gs) + lin.t().dot(&u);
    (LayerGradient { dw, dv }, dy)
}

fn path_backward(
    net: &SubadditiveNet,
    caches: &[LayerCache],
    path: Path,
    upstream: Array2<f64>,
    grads: &mut GradientSet,
) {
    let mut up = upstream;
    for (l, layer) in net.layers().iter().enumerate().rev() {
        let indim = layer.indim();
        let phi_u = up.slice(s![indim..indim + layer.width(), ..]);
        let (g, dy) = layer_backward(layer, &caches[l], path, phi_u);
        grads.layers[l].dw += &g.dw;
        grads.layers[l].dv += &g.dv;
        up = &up.slice(s![..indim, ..]) + &dy;
    }
}

/// Gradient of `Σ U_int ⊙ [f_θ(A) | f_θ(b)] + Σ U_cont ⊙ f̄_θ(G)` with respect
/// to every layer's `W` and `v`.
pub fn net_backward(
    net: &SubadditiveNet,
    cache: &ForwardCache,
    upstream_int: ArrayView2<f64>,
    upstream_cont: ArrayView2<f64>,
) -> Result<GradientSet> {
    let p = net.output_dim();
    if upstream_int.dim() != (p, cache.num_integer + 1) {
        return Err(Error::DimensionMismatch(format!(
            "integer-path upstream is {:?}, expected ({p}, {})",
            upstream_int.dim(),
            cache.num_integer + 1
        )));
    }
    let ncont = cache.cont_path.first().map_or(upstream_cont.ncols(), |c| c.input.ncols());
    if upstream_cont.dim() != (p, ncont) {
        return Err(Error::DimensionMismatch(format!(
            "continuous-path upstream is {:?}, expected ({p}, {ncont})",
            upstream_cont.dim()
        )));
    }
    let mut grads = GradientSet::zeros_like(net);
    path_backward(net, &cache.int_path, Path::Phi, upstream_int.to_owned(), &mut grads);
    if ncont > 0 {
        path_backward(net, &cache.cont_path, Path::PhiBar, upstream_cont.to_owned(), &mut grads);
    }
    Ok(grads)
}

#[derive(Debug, Clone)]
pub struct CutoffLoss {
    /// Mean of `violation`.
    pub loss: f64,
    /// `f_θ(A) x̄ + f̄_θ(G) z̄ − f_θ(b)`; a negative entry is a row cutting the point off.
    pub violation: Array1<f64>,
    pub output: NetOutput,
}

fn check_point(inst: &MilpInstance, xbar: ArrayView1<f64>, zbar: ArrayView1<f64>) -> Result<()> {
    if xbar.len() != inst.k() || zbar.len() != inst.num_continuous() {
        return Err(Error::DimensionMismatch(format!(
            "point has ({}, {}) entries, instance has ({}, {}) variables",
            xbar.len(),
            zbar.len(),
            inst.k(),
            inst.num_continuous()
        )));
    }
    Ok(())
}

pub fn cutoff_loss(
    net: &SubadditiveNet,
    inst: &MilpInstance,
    xbar: ArrayView1<f64>,
    zbar: ArrayView1<f64>,
) -> Result<CutoffLoss> {
    check_point(inst, xbar, zbar)?;
    let output = net_forward(net, inst.a.view(), inst.g.view(), inst.b.view())?;
    let violation = output.fa.dot(&xbar) + output.fg.dot(&zbar) - &output.fb;
    let loss = violation.mean().unwrap_or(0.0);
    Ok(CutoffLoss {
        loss,
        violation,
        output,
    })
}

/// Gradient of [`cutoff_loss`]'s mean violation, using the branch choices in `cache`.
pub fn loss_gradients(
    net: &SubadditiveNet,
    inst: &MilpInstance,
    xbar: ArrayView1<f64>,
    zbar: ArrayView1<f64>,
    cache: &ForwardCache,
) -> Result<GradientSet> {
    check_point(inst, xbar, zbar)?;
    if net.layers().is_empty() {
        return Ok(GradientSet::default());
    }
    let p = net.output_dim();
    let scale = 1.0 / p as f64;
    let k = inst.k();
    let up_int = Array2::from_shape_fn((p, k + 1), |(_, j)| {
        if j < k {
            xbar[j] * scale
        } else {
            -scale
        }
    });
    let up_cont = Array2::from_shape_fn((p, inst.num_continuous()), |(_, j)| zbar[j] * scale);
    net_backward(net, cache, up_int.view(), up_cont.view())
}
