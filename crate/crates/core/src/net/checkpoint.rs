//! JSON checkpoints: `input_dim`, `variant` and per-layer `W` triplets plus `v`.

use std::fs;
use std::path::Path;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::{GmiLayer, SubadditiveNet, Variant};
use crate::error::{Error, Result};
use crate::milp::{dense, triplets};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerFile {
    #[serde(rename = "W")]
    w: Vec<(usize, usize, f64)>,
    v: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetFile {
    input_dim: usize,
    variant: Variant,
    layers: Vec<LayerFile>,
}

pub fn net_to_json(net: &SubadditiveNet) -> String {
    let raw = NetFile {
        input_dim: net.input_dim(),
        variant: net.layers().first().map_or(Variant::Gmi, |l| l.variant),
        layers: net
            .layers()
            .iter()
            .map(|l| LayerFile {
                w: triplets(&l.w),
                v: l.v.to_vec(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn net_from_json(text: &str) -> Result<SubadditiveNet> {
    let raw: NetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        field: "checkpoint".into(),
        message: e.to_string(),
    })?;
    let mut net = SubadditiveNet::empty(raw.input_dim);
    for (k, layer) in raw.layers.into_iter().enumerate() {
        let w = dense(&format!("layers[{k}].W"), layer.v.len(), net.next_indim(), &layer.w)?;
        net.push(GmiLayer::new(w, Array1::from(layer.v), raw.variant)?)?;
    }
    Ok(net)
}

pub fn save_net(net: &SubadditiveNet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, net_to_json(net)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_net(path: impl AsRef<Path>) -> Result<SubadditiveNet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    net_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn round_trip_is_exact() {
        let l1 = GmiLayer::new(array![[0.1, -1.0 / 3.0]], array![std::f64::consts::PI], Variant::Log).unwrap();
        let l2 = GmiLayer::new(array![[1e-300, 0.0, 2.5], [0.0, 0.0, 0.0]], array![0.5, -7.25], Variant::Log)
            .unwrap();
        let net = SubadditiveNet::new(2, vec![l1, l2]).unwrap();
        let back = net_from_json(&net_to_json(&net)).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn empty_net_round_trip() {
        let net = SubadditiveNet::empty(4);
        assert_eq!(net_from_json(&net_to_json(&net)).unwrap(), net);
    }

    #[test]
    fn bad_triplet_is_rejected() {
        let text = r#"{"input_dim":1,"variant":"gmi","layers":[{"W":[[0,3,1.0]],"v":[0.5]}]}"#;
        assert!(matches!(net_from_json(text), Err(Error::Validation { .. })));
    }
}
