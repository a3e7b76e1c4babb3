use std::collections::BTreeSet;
use std::path::Path as FsPath;

use anyhow::{anyhow, bail, Context, Result};
use backbend_core::estimate::{
    bisect_pc, bisect_window_ladder, estimate_block_event, estimate_theta, BisectOptions, ExperimentPlan, PcStatistic,
    SuccessPredicate, SyntheticThreshold,
};
use backbend_core::reach::{reach_saw_oracle, BlockEvent};
use backbend_core::{
    reach_walk, validate_path as check_path, BackbendSpec, ClusterQuery, EdgeConfig, OracleGuard, Path, PathVerdict,
    Region, RngKey, Vertex, Window,
};
use serde::Serialize;

use crate::record::{Metadata, Record, Seed};
use crate::{checked_dim, Outcome, RunArgs};

/// Reads one vertex per line; blank lines and `#` comments are skipped.
pub fn read_path_file(text: &str, dim: Option<usize>) -> Result<Path> {
    let mut vertices = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(str::parse::<i64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| anyhow!("line {}: {e}", i + 1))?;
        if let Some(d) = dim {
            if coords.len() != d {
                bail!("line {}: expected {d} coordinates, found {}", i + 1, coords.len());
            }
        }
        vertices.push(Vertex::new(&coords).map_err(|e| anyhow!("line {}: {e}", i + 1))?);
    }
    Path::new(vertices).map_err(|e| anyhow!("{e}"))
}

pub fn validate_path(spec: &BackbendSpec, dim: Option<usize>, region: &Region, file: &FsPath) -> Result<Outcome> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let path = read_path_file(&text, dim)?;
    let d = path.start().dim();
    if path.vertices().iter().any(|v| v.dim() != d) {
        bail!("path mixes dimensions");
    }
    region.validate(d)?;
    println!("beta: {}", spec.canonical());
    println!("class: {}", spec.classify());
    match check_path(spec, &path, region) {
        PathVerdict::Valid => {
            println!("valid");
            Ok(Outcome::Ok)
        }
        PathVerdict::Violation { index, clause } => {
            println!("violation at index {index} ({}): {clause}", path.vertices()[index]);
            Ok(Outcome::InvalidPath)
        }
    }
}

fn plan_for(run: &RunArgs, window: Window, trials: u64, seed: Seed) -> Result<ExperimentPlan> {
    checked_dim(run.dim, &window)?;
    Ok(ExperimentPlan::new(run.region.clone(), window, run.beta.clone(), trials, seed.value))
}

pub fn theta(
    run: &RunArgs,
    window: Window,
    p: f64,
    trials: u64,
    predicate: SuccessPredicate,
    sources: Option<Vec<Vertex>>,
) -> Result<Outcome> {
    let seed = Seed::resolve(run.seed, None);
    let mut plan = plan_for(run, window, trials, seed)?.with_predicate(predicate);
    plan.sources = sources;
    let est = estimate_theta(&plan, p)?;
    Record::new("theta", Metadata::new(seed, Some(window), run.reproducible), &plan, est).emit(run.out.as_deref())?;
    Ok(Outcome::Ok)
}

pub struct PcRequest<'a> {
    pub run: &'a RunArgs,
    pub windows: &'a [Window],
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub target: f64,
    pub trials: u64,
    pub max_trials: u64,
    pub predicate: SuccessPredicate,
    pub statistic: PcStatistic,
    pub synthetic: Option<f64>,
}

#[derive(Serialize)]
struct PcPlanEcho<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    plan: Option<&'a ExperimentPlan>,
    windows: &'a [Window],
    statistic: PcStatistic,
    bisect: BisectOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    synthetic_threshold: Option<f64>,
}

pub fn pc(req: PcRequest<'_>) -> Result<Outcome> {
    let mut opts = BisectOptions::new(req.lo, req.hi, req.tol).with_trials(req.trials, req.max_trials);
    opts.target = req.target;
    if let Some(threshold) = req.synthetic {
        let seed = Seed::resolve(req.run.seed, Some(0));
        let est = bisect_pc(&SyntheticThreshold { threshold }, &opts)?;
        let echo = PcPlanEcho {
            plan: None,
            windows: &[],
            statistic: req.statistic,
            bisect: opts,
            synthetic_threshold: Some(threshold),
        };
        Record::new("pc", Metadata::new(seed, None, req.run.reproducible), echo, est).emit(req.run.out.as_deref())?;
        return Ok(Outcome::Ok);
    }
    let largest = *req.windows.last().ok_or_else(|| anyhow!("--window-ladder is empty"))?;
    for w in req.windows {
        checked_dim(req.run.dim, w)?;
        if w.dim() != largest.dim() {
            bail!("ladder windows differ in dimension");
        }
    }
    let seed = Seed::resolve(req.run.seed, None);
    let plan = plan_for(req.run, largest, 1, seed)?.with_predicate(req.predicate);
    let ladder = bisect_window_ladder(&plan, req.windows, req.statistic, &opts)?;
    let echo = PcPlanEcho {
        plan: Some(&plan),
        windows: req.windows,
        statistic: req.statistic,
        bisect: opts,
        synthetic_threshold: None,
    };
    Record::new("pc", Metadata::new(seed, Some(largest), req.run.reproducible), echo, ladder)
        .emit(req.run.out.as_deref())?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct OracleReport {
    exact_walk: bool,
    walk: BTreeSet<Vertex>,
    paths: BTreeSet<Vertex>,
    walk_only: Vec<Vertex>,
    paths_only: Vec<Vertex>,
    equal: bool,
}

#[derive(Serialize)]
struct OracleEcho<'a> {
    region: &'a Region,
    spec: &'a BackbendSpec,
    sources: &'a [Vertex],
    p: f64,
    trial: u64,
}

pub fn oracle(
    run: &RunArgs,
    window: Window,
    p: f64,
    trial: u64,
    sources: Option<Vec<Vertex>>,
    force: bool,
    dump: Option<&FsPath>,
) -> Result<Outcome> {
    let d = checked_dim(run.dim, &window)?;
    let seed = Seed::resolve(run.seed, None);
    let sources = match sources {
        Some(s) => s,
        None => vec![Vertex::origin(d)?],
    };
    let query = ClusterQuery::new(run.region.clone(), window, run.beta.clone(), sources)?;
    let config = EdgeConfig::new(RngKey::new(seed.value, trial), window);
    let walk = reach_walk(&query, &config, p)?;
    let guard = OracleGuard {
        force,
        ..OracleGuard::default()
    };
    let paths = reach_saw_oracle(&query, &config, p, guard)?;
    if let Some(path) = dump {
        write_cluster_csv(path, &walk.reached)?;
    }
    if !paths.reached.is_subset(&walk.reached) {
        bail!("internal error: self-avoiding cluster exceeds walk cluster");
    }
    let walk_only: Vec<Vertex> = walk.reached.difference(&paths.reached).copied().collect();
    let report = OracleReport {
        exact_walk: walk.exact,
        equal: walk_only.is_empty(),
        paths_only: Vec::new(),
        walk_only,
        walk: walk.reached,
        paths: paths.reached,
    };
    let outcome = if report.equal {
        Outcome::Ok
    } else {
        Outcome::WalkExceedsPaths
    };
    let echo = OracleEcho {
        region: &query.region,
        spec: &query.spec,
        sources: &query.sources,
        p,
        trial,
    };
    Record::new("oracle", Metadata::new(seed, Some(window), run.reproducible), echo, report).emit(run.out.as_deref())?;
    Ok(outcome)
}

/// One row per vertex, one column per coordinate.
pub fn write_cluster_csv(path: &FsPath, vertices: &BTreeSet<Vertex>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    if let Some(first) = vertices.iter().next() {
        w.write_record((1..=first.dim()).map(|i| format!("x{i}")))?;
    }
    for v in vertices {
        w.write_record(v.coords().iter().map(i64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

pub fn block_event(run: &RunArgs, window: Window, r: i64, x: Vertex, z: Vertex, p: f64, trials: u64) -> Result<Outcome> {
    let seed = Seed::resolve(run.seed, None);
    let event = BlockEvent { r, x, z };
    let plan = plan_for(run, window, trials, seed)?.with_predicate(SuccessPredicate::BlockEvent(event));
    let est = estimate_block_event(&plan, event, p)?;
    Record::new("block-event", Metadata::new(seed, Some(window), run.reproducible), &plan, est)
        .emit(run.out.as_deref())?;
    Ok(Outcome::Ok)
}
