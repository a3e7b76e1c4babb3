//! Config-file experiments.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use backbend_core::estimate::{
    compare_specs_coupled, crossing_curve, slab_ladder, BisectOptions, ExperimentPlan, PcStatistic, SuccessPredicate,
};
use backbend_core::{BackbendSpec, Region, Vertex, Window};
use serde::{Deserialize, Deserializer, Serialize};

use crate::record::{Metadata, Record, Seed};

/// A value written in its command-line grammar inside the config file.
#[derive(Clone, Debug)]
struct Grammar<T>(T);

impl<'de, T> Deserialize<'de> for Grammar<T>
where
    T: FromStr,
    T::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map(Grammar).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
struct Predicate(SuccessPredicate);

impl<'de> Deserialize<'de> for Predicate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        crate::parse_predicate(&s).map(Predicate).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
struct Statistic(PcStatistic);

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        crate::parse_statistic(&s).map(Statistic).map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Curve,
    Ladder,
    Compare,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    mode: Mode,
    dimension: Option<usize>,
    region: Option<Grammar<Region>>,
    window: Option<Grammar<Window>>,
    beta: Option<Grammar<BackbendSpec>>,
    trials: Option<u64>,
    seed: Option<u64>,
    predicate: Option<Predicate>,
    sources: Option<Vec<Grammar<Vertex>>>,
    p_grid: Option<Vec<f64>>,
    e: Option<usize>,
    l: Option<Vec<i64>>,
    bisect: Option<BisectOptions>,
    statistic: Option<Statistic>,
    spec_a: Option<Grammar<BackbendSpec>>,
    spec_b: Option<Grammar<BackbendSpec>>,
    csv: Option<String>,
}

/// Parses a config, reporting schema violations with the JSON pointer of the
/// offending field.
fn parse_config(text: &str) -> Result<SweepConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        anyhow!("config schema error at {pointer}: {}", e.inner())
    })
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

#[derive(Serialize)]
struct SweepEcho<'a> {
    mode: Mode,
    plan: &'a ExperimentPlan,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_grid: Option<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<&'a [i64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bisect: Option<BisectOptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    statistic: Option<PcStatistic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec_a: Option<&'a BackbendSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec_b: Option<&'a BackbendSpec>,
}

fn require<T>(v: Option<T>, field: &str, mode: Mode) -> Result<T> {
    v.ok_or_else(|| anyhow!("config schema error at /{field}: required for mode {mode:?}"))
}

pub fn run(
    config_path: &Path,
    seed_flag: Option<u64>,
    trials_flag: Option<u64>,
    reproducible: bool,
    out: Option<&Path>,
    csv_flag: Option<&Path>,
) -> Result<crate::Outcome> {
    let text = std::fs::read_to_string(config_path).with_context(|| format!("reading {}", config_path.display()))?;
    let cfg = parse_config(&text)?;
    let window = match (&cfg.window, cfg.dimension) {
        (Some(w), _) => w.0,
        (None, d) => Window::centered(d.unwrap_or(2), 16, 16)?,
    };
    crate::checked_dim(cfg.dimension, &window)?;
    let seed = Seed::resolve(seed_flag, cfg.seed);
    let mut plan = ExperimentPlan::new(
        cfg.region.clone().map_or(Region::HalfSpace, |r| r.0),
        window,
        cfg.beta.clone().map_or_else(BackbendSpec::oriented, |b| b.0),
        trials_flag.or(cfg.trials).unwrap_or(1000),
        seed.value,
    );
    if let Some(p) = &cfg.predicate {
        plan.predicate = p.0.clone();
    }
    plan.sources = cfg.sources.as_ref().map(|s| s.iter().map(|v| v.0).collect());
    plan.validate()?;
    let csv_path = csv_flag.map(Path::to_path_buf).or(cfg.csv.as_ref().map(Into::into));
    let mut echo = SweepEcho {
        mode: cfg.mode,
        plan: &plan,
        p_grid: None,
        e: None,
        l: None,
        bisect: None,
        statistic: None,
        spec_a: None,
        spec_b: None,
    };
    let meta = Metadata::new(seed, Some(window), reproducible);
    match cfg.mode {
        Mode::Curve => {
            let grid = require(cfg.p_grid.as_deref(), "p_grid", cfg.mode)?;
            let curve = crossing_curve(&plan, grid)?;
            if let Some(path) = &csv_path {
                let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
                w.write_record(["p", "estimate", "ci_lo", "ci_hi", "trials"])?;
                for t in &curve {
                    w.serialize((t.p, t.estimate, t.ci_lo, t.ci_hi, t.trials))?;
                }
                w.flush()?;
            }
            echo.p_grid = Some(grid);
            Record::new("sweep", meta, echo, curve).emit(out)?;
        }
        Mode::Ladder => {
            let e = require(cfg.e, "e", cfg.mode)?;
            let ls = require(cfg.l.as_deref(), "l", cfg.mode)?;
            let opts = require(cfg.bisect, "bisect", cfg.mode)?;
            let statistic = cfg.statistic.clone().map_or(PcStatistic::Frequency, |s| s.0);
            let ladder = slab_ladder(&plan, e, ls, statistic, &opts)?;
            if let Some(path) = &csv_path {
                let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
                w.write_record(["l", "lo", "hi", "midpoint", "status"])?;
                for (l, est) in &ladder.rows {
                    w.write_record([
                        l.to_string(),
                        est.lo.to_string(),
                        est.hi.to_string(),
                        est.midpoint().to_string(),
                        format!("{:?}", est.status).to_lowercase(),
                    ])?;
                }
                w.flush()?;
            }
            echo.e = Some(e);
            echo.l = Some(ls);
            echo.bisect = Some(opts);
            echo.statistic = Some(statistic);
            Record::new("sweep", meta, echo, ladder).emit(out)?;
        }
        Mode::Compare => {
            let a = &require(cfg.spec_a.as_ref(), "spec_a", cfg.mode)?.0;
            let b = &require(cfg.spec_b.as_ref(), "spec_b", cfg.mode)?.0;
            let grid = require(cfg.p_grid.as_deref(), "p_grid", cfg.mode)?;
            if grid.windows(2).any(|w| w[0] > w[1]) {
                bail!("config schema error at /p_grid: must be ascending");
            }
            let rows = grid
                .iter()
                .map(|&p| compare_specs_coupled(&plan, a, b, p))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(path) = &csv_path {
                let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
                w.write_record(["p", "trials", "contained", "equal", "estimate_a", "estimate_b"])?;
                for r in &rows {
                    w.serialize((r.p, r.trials, r.contained, r.equal, r.a.estimate, r.b.estimate))?;
                }
                w.flush()?;
            }
            echo.p_grid = Some(grid);
            echo.spec_a = Some(a);
            echo.spec_b = Some(b);
            Record::new("sweep", meta, echo, rows).emit(out)?;
        }
    }
    Ok(crate::Outcome::Ok)
}
