//! JSON instance files with sparse `[row, col, value]` triplets for `A` and `G`.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::MilpInstance;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    k: usize,
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<(usize, usize, f64)>,
    #[serde(rename = "G")]
    g: Vec<(usize, usize, f64)>,
    b: Vec<f64>,
    c: Vec<f64>,
    h: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known_optimum: Option<f64>,
}

pub(crate) fn triplets(m: &Array2<f64>) -> Vec<(usize, usize, f64)> {
    m.indexed_iter()
        .filter(|(_, &v)| v != 0.0)
        .map(|((i, j), &v)| (i, j, v))
        .collect()
}

pub(crate) fn dense(
    field: &str,
    rows: usize,
    cols: usize,
    entries: &[(usize, usize, f64)],
) -> Result<Array2<f64>> {
    let mut out = Array2::zeros((rows, cols));
    let mut seen = std::collections::HashSet::new();
    for &(i, j, v) in entries {
        if i >= rows || j >= cols {
            return Err(Error::validation(
                field,
                format!("triplet ({i}, {j}) outside a {rows}x{cols} matrix"),
            ));
        }
        if !seen.insert((i, j)) {
            return Err(Error::validation(field, format!("duplicate triplet ({i}, {j})")));
        }
        if !v.is_finite() {
            return Err(Error::validation(field, "non-finite entry"));
        }
        out[[i, j]] = v;
    }
    Ok(out)
}

fn parse_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    // serde_json reports "missing field `b`" / "unknown field `x`"
    let field = msg
        .split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| "instance".to_owned());
    Error::Parse { field, message: msg }
}

pub fn parse_instance(text: &str) -> Result<MilpInstance> {
    let raw: InstanceFile = serde_json::from_str(text).map_err(parse_error)?;
    if raw.k > raw.n {
        return Err(Error::validation("k", format!("k = {} exceeds n = {}", raw.k, raw.n)));
    }
    if raw.m == 0 {
        return Err(Error::validation("m", "instance needs at least one row"));
    }
    if raw.b.len() != raw.m {
        return Err(Error::validation(
            "b",
            format!("has {} entries, expected m = {}", raw.b.len(), raw.m),
        ));
    }
    let a = dense("A", raw.m, raw.k, &raw.a)?;
    let g = dense("G", raw.m, raw.n - raw.k, &raw.g)?;
    MilpInstance::new(
        raw.name,
        a,
        g,
        Array1::from(raw.b),
        Array1::from(raw.c),
        Array1::from(raw.h),
        raw.known_optimum,
    )
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<MilpInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_instance(&text)
}

pub fn to_json(inst: &MilpInstance) -> String {
    let raw = InstanceFile {
        name: inst.name.clone(),
        k: inst.k(),
        n: inst.n(),
        m: inst.m(),
        a: triplets(&inst.a),
        g: triplets(&inst.g),
        b: inst.b.to_vec(),
        c: inst.c.to_vec(),
        h: inst.h.to_vec(),
        known_optimum: inst.known_optimum,
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn save_instance(inst: &MilpInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(inst)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
