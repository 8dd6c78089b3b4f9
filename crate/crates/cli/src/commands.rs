use std::path::{Path, PathBuf};
use std::process::{Child, Command as Process};

use clap::ValueEnum;
use log::{info, warn};
use subcut::cutopt::{build_enlarged_lp, two_step_optimize, RunTrace};
use subcut::exact::{branch_and_bound, BnbStatus};
use subcut::milp::{
    enumerate_feasible, gap_with_fallback, generate_max_indep_set, generate_random_mixed, generate_set_cover,
    load_instance, save_instance, GapKind,
};
use subcut::net::{gmi_warm_start, random_orthogonal_init, save_net, WarmStartOptions};
use subcut::{simplex, LpProblem, MilpInstance, SubadditiveNet};

use crate::args::{
    parse_widths, BaselineArgs, Command, EnumerateArgs, Family, GenerateArgs, Init, OptimizeArgs, SolveExactArgs,
    VariantArg,
};
use crate::config::{resolve_run_spec, RunSpec};
use crate::{CliError, CliResult, EXIT_INFEASIBLE, EXIT_NODE_LIMIT, EXIT_OK};

pub fn dispatch(command: Command) -> CliResult<i32> {
    match command {
        Command::Generate(args) => generate(&args),
        Command::Baseline(args) => baseline(&args),
        Command::Optimize(args) => optimize(&args),
        Command::SolveExact(args) => solve_exact(&args),
        Command::Enumerate(args) => enumerate(&args),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    subcut::Error::Io {
        path: path.to_path_buf(),
        source,
    }
    .into()
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn generate(args: &GenerateArgs) -> CliResult<i32> {
    let inst = match args.family {
        Family::Setcover => generate_set_cover(args.rows, args.cols, args.density, args.seed)?,
        Family::Indepset => generate_max_indep_set(args.nodes, args.edge_prob, args.seed)?,
        Family::Mixed => generate_random_mixed(args.m, args.k, args.ncont, args.seed)?,
    };
    save_instance(&inst, &args.out)?;
    println!("{}: m={} n={} k={}", inst.name, inst.m(), inst.n(), inst.k());
    Ok(EXIT_OK)
}

/// Loads an instance and, when it carries no optimum, tries to compute one
/// within `node_limit` branch-and-bound nodes so gaps can be reported.
fn load_with_optimum(path: &Path, node_limit: usize) -> CliResult<MilpInstance> {
    let mut inst = load_instance(path)?;
    if inst.known_optimum.is_none() {
        let result = branch_and_bound(&inst, node_limit)?;
        match result.status {
            BnbStatus::Optimal => {
                info!("computed optimum {} in {} nodes", result.optimum, result.nodes);
                inst.known_optimum = Some(result.optimum);
            }
            status => warn!("no optimum for {} ({status:?}); gaps are not reported", path.display()),
        }
    }
    Ok(inst)
}

fn solve_lp(lp: &LpProblem) -> CliResult<f64> {
    let sol = simplex::solve(lp, None)?;
    if !sol.is_optimal() {
        return Err(subcut::Error::LpNotOptimal(sol.status).into());
    }
    Ok(sol.objective)
}

fn format_gap(bound: f64, optimum: Option<f64>) -> String {
    match optimum.map(|z| gap_with_fallback(bound, z)) {
        Some((g, GapKind::Relative)) => format!("{g}"),
        Some((g, GapKind::Absolute)) => format!("{g} (absolute)"),
        None => "n/a".into(),
    }
}

/// One width per round: a single value is repeated, otherwise the list
/// length must equal the round count.
fn round_widths(text: &str, rounds: usize) -> CliResult<Vec<usize>> {
    let widths = parse_widths(text).map_err(CliError::Usage)?;
    match widths.len() {
        1 => Ok(vec![widths[0]; rounds]),
        n if n == rounds => Ok(widths),
        n => Err(CliError::Usage(format!("{n} widths given for {rounds} rounds"))),
    }
}

fn baseline(args: &BaselineArgs) -> CliResult<i32> {
    if args.rounds == 0 {
        return Err(CliError::Usage("--rounds must be at least 1".into()));
    }
    let widths = round_widths(&args.widths, args.rounds)?;
    let inst = load_with_optimum(&args.instance, args.node_limit)?;
    let opts = WarmStartOptions {
        variant: args.variant.into(),
        ..WarmStartOptions::default()
    };
    let net = gmi_warm_start(&inst, &widths, &opts)?;
    let lp_bound = solve_lp(&inst.lp_relaxation())?;
    println!("round 0: bound {lp_bound} gap {}", format_gap(lp_bound, inst.known_optimum));
    for r in 1..=args.rounds {
        let prefix = SubadditiveNet::new(inst.m(), net.layers()[..r].to_vec())?;
        let bound = solve_lp(&build_enlarged_lp(&prefix, &inst)?)?;
        println!("round {r}: bound {bound} gap {}", format_gap(bound, inst.known_optimum));
    }
    if let Some(out) = &args.out {
        save_net(&net, out)?;
    }
    Ok(EXIT_OK)
}

fn optimize(args: &OptimizeArgs) -> CliResult<i32> {
    let spec = resolve_run_spec(args)?;
    if spec.instances.len() == 1 {
        let path = spec.instances[0].clone();
        optimize_one(&spec, &path, spec.trace.as_deref(), spec.out.as_deref())?;
        Ok(EXIT_OK)
    } else {
        optimize_batch(&spec)
    }
}

fn initial_net(spec: &RunSpec, inst: &MilpInstance) -> CliResult<SubadditiveNet> {
    Ok(match spec.init {
        Init::Gmi => gmi_warm_start(
            inst,
            &spec.widths,
            &WarmStartOptions {
                variant: spec.variant,
                ..WarmStartOptions::default()
            },
        )?,
        Init::Random => random_orthogonal_init(inst.m(), &spec.widths, spec.config.seed, spec.variant)?,
    })
}

fn optimize_one(spec: &RunSpec, path: &Path, trace_path: Option<&Path>, out: Option<&Path>) -> CliResult<RunTrace> {
    let inst = load_with_optimum(path, spec.node_limit)?;
    let net0 = initial_net(spec, &inst)?;
    let (best, trace) = two_step_optimize(&inst, &net0, &spec.config)?;
    if let Some(p) = trace_path {
        write_file(p, &trace.to_csv())?;
    }
    if let Some(p) = out {
        save_net(&best, p)?;
    }
    let first = trace.first().map(|r| r.dual_bound).unwrap_or(f64::NAN);
    let best_bound = trace.best_bound().unwrap_or(f64::NAN);
    println!("{}: initial bound {first}", inst.name);
    println!("{}: best bound {best_bound} gap {}", inst.name, format_gap(best_bound, inst.known_optimum));
    println!(
        "{}: {} gradient steps over {} LP solves, stopped by {}",
        inst.name,
        trace.total_steps(),
        trace.records.len(),
        trace.termination.map_or("nothing".to_string(), |t| format!("{t:?}"))
    );
    Ok(trace)
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn ensure_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| io_error(path, e))
}

/// Child argument list running `spec` on a single instance.
fn child_args(spec: &RunSpec, instance: &Path) -> Vec<String> {
    let c = &spec.config;
    let variant = match spec.variant {
        subcut::Variant::Gmi => VariantArg::Gmi,
        subcut::Variant::Log => VariantArg::Log,
    };
    let widths: Vec<String> = spec.widths.iter().map(|w| w.to_string()).collect();
    let stem = instance.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let mut out = vec![
        "optimize".to_string(),
        "--instance".into(),
        instance.display().to_string(),
        "--widths".into(),
        widths.join(","),
        "--init".into(),
        value_name(spec.init),
        "--variant".into(),
        value_name(variant),
        "--alpha".into(),
        c.alpha.to_string(),
        "--beta".into(),
        c.beta.to_string(),
        "--max-steps".into(),
        c.max_total_steps.to_string(),
        "--max-inner".into(),
        c.max_inner.to_string(),
        "--max-outer".into(),
        c.max_outer.to_string(),
        "--conv-tol".into(),
        c.conv_tol.to_string(),
        "--conv-window".into(),
        c.conv_window.to_string(),
        "--seed".into(),
        c.seed.to_string(),
        "--node-limit".into(),
        spec.node_limit.to_string(),
    ];
    if c.record_time {
        out.push("--time".into());
    }
    if let Some(dir) = &spec.trace {
        out.push("--trace".into());
        out.push(dir.join(format!("{stem}.csv")).display().to_string());
    }
    if let Some(dir) = &spec.out {
        out.push("--out".into());
        out.push(dir.join(format!("{stem}.net.json")).display().to_string());
    }
    out
}

/// Runs every instance in its own worker process, at most `jobs` at a
/// time; `--trace` and `--out` name directories. Returns the largest child
/// exit code.
fn optimize_batch(spec: &RunSpec) -> CliResult<i32> {
    for dir in [&spec.trace, &spec.out].into_iter().flatten() {
        ensure_dir(dir)?;
    }
    let exe = std::env::current_exe().map_err(|e| io_error(Path::new("current executable"), e))?;
    let mut running: Vec<(PathBuf, Child)> = Vec::new();
    let mut worst = EXIT_OK;
    let mut wait_one = |running: &mut Vec<(PathBuf, Child)>| -> CliResult<()> {
        let (path, mut child) = running.remove(0);
        let status = child.wait().map_err(|e| io_error(&path, e))?;
        let code = status.code().unwrap_or(crate::EXIT_NUMERICAL);
        if code != EXIT_OK {
            warn!("{} exited with {code}", path.display());
        }
        worst = worst.max(code);
        Ok(())
    };
    for instance in &spec.instances {
        if running.len() >= spec.jobs {
            wait_one(&mut running)?;
        }
        let child = Process::new(&exe)
            .args(child_args(spec, instance))
            .spawn()
            .map_err(|e| io_error(&exe, e))?;
        running.push((instance.clone(), child));
    }
    while !running.is_empty() {
        wait_one(&mut running)?;
    }
    Ok(worst)
}

fn solve_exact(args: &SolveExactArgs) -> CliResult<i32> {
    let mut inst = load_instance(&args.instance)?;
    let result = branch_and_bound(&inst, args.node_limit)?;
    let incumbent = |r: &subcut::exact::BnbResult| match &r.incumbent {
        Some(p) => format!("{} at x = {}", r.optimum, p.x),
        None => "none".to_string(),
    };
    match result.status {
        BnbStatus::Optimal => {
            println!("optimum {} ({} nodes)", result.optimum, result.nodes);
            println!("incumbent {}", incumbent(&result));
            if args.write_back {
                inst.known_optimum = Some(result.optimum);
                save_instance(&inst, &args.instance)?;
            }
            Ok(EXIT_OK)
        }
        BnbStatus::NodeLimit => {
            println!("node limit reached after {} nodes", result.nodes);
            println!("lower bound {}", result.lower_bound);
            println!("incumbent {}", incumbent(&result));
            Ok(EXIT_NODE_LIMIT)
        }
        BnbStatus::Infeasible => {
            println!("infeasible ({} nodes)", result.nodes);
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn enumerate(args: &EnumerateArgs) -> CliResult<i32> {
    let inst = load_instance(&args.instance)?;
    let points = enumerate_feasible(&inst, args.bound)?;
    match &args.out {
        Some(path) => {
            write_file(path, &points.to_csv())?;
            println!("{} feasible points", points.len());
        }
        None => print!("{}", points.to_csv()),
    }
    if let Some(best) = points.best_objective(&inst) {
        info!("best enumerated objective {best}");
    }
    Ok(EXIT_OK)
}
