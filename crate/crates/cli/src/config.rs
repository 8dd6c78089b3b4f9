//! Merging of `optimize` options from the command line and a config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use subcut::cutopt::OptimizerConfig;
use subcut::Variant;

use crate::args::{parse_widths, Init, OptimizeArgs, VariantArg};
use crate::{CliError, CliResult};

pub const DEFAULT_WIDTHS: [usize; 1] = [32];
pub const DEFAULT_NODE_LIMIT: usize = 100_000;

/// Fully resolved `optimize` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub instances: Vec<PathBuf>,
    pub widths: Vec<usize>,
    pub init: Init,
    pub variant: Variant,
    pub config: OptimizerConfig,
    pub trace: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub node_limit: usize,
    pub jobs: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(PathBuf),
    Many(Vec<PathBuf>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WidthsValue {
    List(Vec<usize>),
    Text(String),
}

/// Config file contents; keys are the long flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    instance: Option<OneOrMany>,
    widths: Option<WidthsValue>,
    init: Option<Init>,
    variant: Option<VariantArg>,
    alpha: Option<f64>,
    beta: Option<f64>,
    max_steps: Option<usize>,
    max_inner: Option<usize>,
    max_outer: Option<usize>,
    conv_tol: Option<f64>,
    conv_window: Option<usize>,
    seed: Option<u64>,
    trace: Option<PathBuf>,
    out: Option<PathBuf>,
    node_limit: Option<usize>,
    jobs: Option<usize>,
    time: Option<bool>,
}

fn read_config(path: &Path) -> CliResult<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|source| subcut::Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::from(subcut::Error::Parse {
            field: path.display().to_string(),
            message: e.to_string(),
        })
    })
}

/// Applies the config file (if any) under the command-line flags, then the
/// defaults, and validates the result.
pub fn resolve_run_spec(args: &OptimizeArgs) -> CliResult<RunSpec> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => ConfigFile::default(),
    };
    let instances = if !args.instance.is_empty() {
        args.instance.clone()
    } else {
        match file.instance {
            Some(OneOrMany::One(p)) => vec![p],
            Some(OneOrMany::Many(ps)) => ps,
            None => Vec::new(),
        }
    };
    if instances.is_empty() {
        return Err(CliError::Usage("optimize needs at least one --instance".into()));
    }
    let widths = match (args.widths.clone(), file.widths) {
        (Some(text), _) | (None, Some(WidthsValue::Text(text))) => parse_widths(&text).map_err(CliError::Usage)?,
        (None, Some(WidthsValue::List(list))) => {
            if list.is_empty() || list.contains(&0) {
                return Err(CliError::Usage("widths must be a nonempty list of positive counts".into()));
            }
            list
        }
        (None, None) => DEFAULT_WIDTHS.to_vec(),
    };
    let defaults = OptimizerConfig::default();
    let config = OptimizerConfig {
        alpha: args.alpha.or(file.alpha).unwrap_or(defaults.alpha),
        beta: args.beta.or(file.beta).unwrap_or(defaults.beta),
        max_outer: args.max_outer.or(file.max_outer).unwrap_or(defaults.max_outer),
        max_inner: args.max_inner.or(file.max_inner).unwrap_or(defaults.max_inner),
        max_total_steps: args.max_steps.or(file.max_steps).unwrap_or(defaults.max_total_steps),
        conv_tol: args.conv_tol.or(file.conv_tol).unwrap_or(defaults.conv_tol),
        conv_window: args.conv_window.or(file.conv_window).unwrap_or(defaults.conv_window),
        seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        cut_tol: defaults.cut_tol,
        record_time: args.time || file.time.unwrap_or(false),
    };
    config.validate()?;
    let jobs = args.jobs.or(file.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(RunSpec {
        instances,
        widths,
        init: args.init.or(file.init).unwrap_or(Init::Gmi),
        variant: args.variant.or(file.variant).unwrap_or(VariantArg::Gmi).into(),
        config,
        trace: args.trace.clone().or(file.trace),
        out: args.out.clone().or(file.out),
        node_limit: args.node_limit.or(file.node_limit).unwrap_or(DEFAULT_NODE_LIMIT),
        jobs,
    })
}
