//! Generalized Gomory mixed-integer layers and the subadditive network they form.
//!
//! A layer with weights `W` (width × indim) and offsets `v` evaluates, row by row,
//!
//! ```text
//! φ(y) = min({Wy}/{v}, (1 - {Wy})/(1 - {v})) + max(-W/{v}, W/(1 - {v})) y
//! ```
//!
//! where `{·}` is the fractional part and the second `max` is taken entry by
//! entry over the matrix before multiplying by `y`. Its upper directional
//! derivative at zero is
//!
//! ```text
//! φ̄(y) = max(Wy/{v}, -Wy/(1 - {v})) + max(-W/{v}, W/(1 - {v})) y
//! ```
//!
//! Every such `φ` is subadditive, non-decreasing and centered, so
//! `φ(A)x + φ̄(G)z >= φ(b)` is valid for the MILP. A [`SubadditiveNet`] stacks
//! lifted layers `y ↦ [y, φ(y)]`: the integer columns and the right-hand side
//! go through the `φ` path, the continuous columns through the `φ̄` path.
//!
//! Scalar `min`/`max` ties take the first argument; the fractional part is
//! differentiated as the identity; `{v}` is clamped to
//! `[FRAC_EPS, 1 - FRAC_EPS]` wherever it divides.

mod checkpoint;
mod forward;
mod init;

use ndarray::{Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checkpoint::{load_net, net_from_json, net_to_json, save_net};
pub use forward::{
    cutoff_loss, loss_gradients, net_backward, net_forward, CutoffLoss, ForwardCache, NetOutput,
};
pub use init::{gmi_warm_start, random_orthogonal_init, WarmStartOptions};

/// Lower clamp for `{v}`.
pub const FRAC_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain generalized GMI layer.
    #[default]
    Gmi,
    /// `log(1 + φ)`; its directional derivative at zero is the same as `Gmi`'s.
    Log,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gmi" => Ok(Variant::Gmi),
            "log" => Ok(Variant::Log),
            other => Err(format!("unknown variant `{other}` (expected gmi or log)")),
        }
    }
}

/// Fractional part `x − ⌊x⌋`.
pub fn frac_part(x: f64) -> f64 {
    x - x.floor()
}

/// `{v}` clamped into `[FRAC_EPS, 1 - FRAC_EPS]`, and whether the clamp is inactive
/// (so that `d{v}/dv = 1`).
pub(crate) fn clamped_frac(v: f64) -> (f64, bool) {
    let f = frac_part(v);
    if f < FRAC_EPS {
        (FRAC_EPS, false)
    } else if f > 1.0 - FRAC_EPS {
        (1.0 - FRAC_EPS, false)
    } else {
        (f, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmiLayer {
    pub w: Array2<f64>,
    pub v: Array1<f64>,
    pub variant: Variant,
}

impl GmiLayer {
    pub fn new(w: Array2<f64>, v: Array1<f64>, variant: Variant) -> Result<Self> {
        if w.nrows() == 0 {
            return Err(Error::validation("W", "layer width must be at least 1"));
        }
        if w.nrows() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "W has {} rows but v has {} entries",
                w.nrows(),
                v.len()
            )));
        }
        if !w.iter().chain(v.iter()).all(|x| x.is_finite()) {
            return Err(Error::validation("layer", "non-finite weight"));
        }
        Ok(GmiLayer { w, v, variant })
    }

    /// A layer of inert rows (`W` row zero, `v = 0.5`), each evaluating to 0.
    pub fn dummy(width: usize, indim: usize, variant: Variant) -> Self {
        GmiLayer {
            w: Array2::zeros((width, indim)),
            v: Array1::from_elem(width, 0.5),
            variant,
        }
    }

    pub fn width(&self) -> usize {
        self.w.nrows()
    }

    pub fn indim(&self) -> usize {
        self.w.ncols()
    }

    /// Clamped fractional parts of `v`.
    pub fn frac_v(&self) -> Array1<f64> {
        self.v.mapv(|v| clamped_frac(v).0)
    }

    /// The matrix `max(-W/{v}, W/(1-{v}))`, with `true` where the first
    /// argument was taken.
    pub fn linear_coefficients(&self) -> (Array2<f64>, Array2<bool>) {
        let fv = self.frac_v();
        let mut coeffs = Array2::zeros(self.w.dim());
        let mut first = Array2::from_elem(self.w.dim(), false);
        for ((i, j), &w) in self.w.indexed_iter() {
            let a = -w / fv[i];
            let b = w / (1.0 - fv[i]);
            if a >= b {
                coeffs[[i, j]] = a;
                first[[i, j]] = true;
            } else {
                coeffs[[i, j]] = b;
            }
        }
        (coeffs, first)
    }

    fn check_input(&self, y: &ArrayView2<f64>) -> Result<()> {
        if y.nrows() != self.indim() {
            return Err(Error::DimensionMismatch(format!(
                "layer expects {} inputs, got {}",
                self.indim(),
                y.nrows()
            )));
        }
        Ok(())
    }

    /// `φ` applied column-wise to `y` (indim × t).
    pub fn phi(&self, y: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_input(&y)?;
        let fv = self.frac_v();
        let (lin, _) = self.linear_coefficients();
        let s = self.w.dot(&y);
        let mut out = lin.dot(&y);
        for ((i, c), o) in out.indexed_iter_mut() {
            let t = frac_part(s[[i, c]]);
            *o += (t / fv[i]).min((1.0 - t) / (1.0 - fv[i]));
        }
        if self.variant == Variant::Log {
            for o in out.iter_mut() {
                if *o <= -1.0 + 1e-12 {
                    return Err(Error::LogDomain { value: *o });
                }
                *o = o.ln_1p();
            }
        }
        Ok(out)
    }

    /// `φ̄` applied column-wise; identical for both variants.
    pub fn phi_bar(&self, y: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_input(&y)?;
        let fv = self.frac_v();
        let (lin, _) = self.linear_coefficients();
        let s = self.w.dot(&y);
        let mut out = lin.dot(&y);
        for ((i, c), o) in out.indexed_iter_mut() {
            let si = s[[i, c]];
            *o += (si / fv[i]).max(-si / (1.0 - fv[i]));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubadditiveNet {
    input_dim: usize,
    layers: Vec<GmiLayer>,
}

impl SubadditiveNet {
    pub fn new(input_dim: usize, layers: Vec<GmiLayer>) -> Result<Self> {
        let mut dim = input_dim;
        for (k, layer) in layers.iter().enumerate() {
            if layer.indim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "layer {k} expects {} inputs but receives {dim}",
                    layer.indim()
                )));
            }
            dim += layer.width();
        }
        Ok(SubadditiveNet { input_dim, layers })
    }

    /// The zero-layer network (identity).
    pub fn empty(input_dim: usize) -> Self {
        SubadditiveNet {
            input_dim,
            layers: Vec::new(),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.input_dim + self.layers.iter().map(GmiLayer::width).sum::<usize>()
    }

    /// Input dimension of the next layer to be pushed.
    pub fn next_indim(&self) -> usize {
        self.output_dim()
    }

    pub fn layers(&self) -> &[GmiLayer] {
        &self.layers
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(GmiLayer::width).collect()
    }

    pub fn push(&mut self, layer: GmiLayer) -> Result<()> {
        if layer.indim() != self.output_dim() {
            return Err(Error::DimensionMismatch(format!(
                "new layer expects {} inputs, network outputs {}",
                layer.indim(),
                self.output_dim()
            )));
        }
        self.layers.push(layer);
        Ok(())
    }

    /// `θ - step · ∇θ`.
    pub fn apply_gradient(&self, grads: &GradientSet, step: f64) -> Result<Self> {
        if grads.layers.len() != self.layers.len() {
            return Err(Error::DimensionMismatch(format!(
                "gradient has {} layers, network has {}",
                grads.layers.len(),
                self.layers.len()
            )));
        }
        let layers = self
            .layers
            .iter()
            .zip(&grads.layers)
            .map(|(layer, g)| {
                if g.dw.dim() != layer.w.dim() || g.dv.len() != layer.v.len() {
                    return Err(Error::DimensionMismatch("gradient shape".into()));
                }
                Ok(GmiLayer {
                    w: &layer.w - &(&g.dw * step),
                    v: &layer.v - &(&g.dv * step),
                    variant: layer.variant,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubadditiveNet {
            input_dim: self.input_dim,
            layers,
        })
    }

    /// `f_θ(Y)` for the integer/right-hand-side path, without a cache.
    pub fn eval(&self, y: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut cur = y.to_owned();
        for layer in &self.layers {
            let phi = layer.phi(cur.view())?;
            cur = ndarray::concatenate(ndarray::Axis(0), &[cur.view(), phi.view()])
                .expect("same column count");
        }
        Ok(cur)
    }

    /// `f̄_θ(Y)` for continuous columns, without a cache.
    pub fn eval_bar(&self, y: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut cur = y.to_owned();
        for layer in &self.layers {
            let phi = layer.phi_bar(cur.view())?;
            cur = ndarray::concatenate(ndarray::Axis(0), &[cur.view(), phi.view()])
                .expect("same column count");
        }
        Ok(cur)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGradient {
    pub dw: Array2<f64>,
    pub dv: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradientSet {
    pub layers: Vec<LayerGradient>,
}

impl GradientSet {
    pub fn zeros_like(net: &SubadditiveNet) -> Self {
        GradientSet {
            layers: net
                .layers()
                .iter()
                .map(|l| LayerGradient {
                    dw: Array2::zeros(l.w.dim()),
                    dv: Array1::zeros(l.v.len()),
                })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|g| g.dw.iter().chain(g.dv.iter()).all(|x| x.is_finite()))
    }

    pub fn norm(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|g| g.dw.iter().chain(g.dv.iter()))
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }
}
