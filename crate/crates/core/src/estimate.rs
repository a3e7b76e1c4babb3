//! Monte Carlo estimators built on [`crate::reach`].
//!
//! Every trial `t` of a plan uses the configuration keyed by
//! `(master_seed, t)`, and success counts are integer sums over trials, so
//! results do not depend on how trials are scheduled across threads. The same
//! trials are reused at every `p`, which makes estimates along a grid
//! monotone per seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backbend::BackbendSpec;
use crate::config::{check_probability, EdgeConfig, RngKey};
use crate::error::{EstimateError, ReachError};
use crate::lattice::{Region, Vertex, Window};
use crate::reach::{BlockEvent, ClusterQuery, Explorer, StopRule};
use crate::stats::{wilson, wilson95, Z99};

fn default_trials() -> u64 {
    1000
}

/// What counts as a successful trial.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SuccessPredicate {
    /// The cluster reaches `level` (the window top when omitted).
    SurviveToLevel {
        #[serde(default)]
        level: Option<i64>,
    },
    /// The cluster has at least `min` vertices.
    ClusterSize { min: usize },
    /// The cluster started from the low face of `axis` reaches the high face.
    /// Faces are two lattice layers thick so both parity classes appear.
    Span { axis: usize },
    /// Seed-block propagation `D* + z ⊆ C(D* + x)`.
    BlockEvent(BlockEvent),
}

impl Default for SuccessPredicate {
    fn default() -> Self {
        SuccessPredicate::SurviveToLevel { level: None }
    }
}

/// One Monte Carlo experiment: geometry, sequence, trials and success rule.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub region: Region,
    pub window: Window,
    pub spec: BackbendSpec,
    #[serde(default = "default_trials")]
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub predicate: SuccessPredicate,
    /// Sources for survival and size predicates; the origin when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<Vertex>>,
}

impl ExperimentPlan {
    pub fn new(region: Region, window: Window, spec: BackbendSpec, trials: u64, master_seed: u64) -> Self {
        Self {
            region,
            window,
            spec,
            trials,
            master_seed,
            predicate: SuccessPredicate::default(),
            sources: None,
        }
    }

    pub fn with_predicate(mut self, predicate: SuccessPredicate) -> Self {
        self.predicate = predicate;
        self
    }

    pub fn with_region(mut self, region: Region) -> Self {
        self.region = region;
        self
    }

    pub fn with_spec(mut self, spec: BackbendSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn dimension(&self) -> usize {
        self.window.dim()
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        if self.trials == 0 {
            return Err(EstimateError::InvalidPlan("trials must be at least 1".into()));
        }
        Runner::new(self).map(|_| ())
    }
}

/// Success frequency at one `p`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub p: f64,
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl ThetaEstimate {
    pub fn from_counts(p: f64, successes: u64, trials: u64) -> Self {
        let ci = wilson95(successes, trials);
        Self {
            p,
            successes,
            trials,
            estimate: successes as f64 / trials as f64,
            ci_lo: ci.lo,
            ci_hi: ci.hi,
        }
    }

    pub fn standard_error(&self) -> f64 {
        crate::stats::proportion_se(self.successes, self.trials)
    }
}

/// A plan compiled to sources, stop rule and a prototype search engine.
#[derive(Clone, Debug)]
struct Runner {
    plan: ExperimentPlan,
    explorer: Explorer,
    stop: StopRule,
    target: Option<Vec<Vertex>>,
}

impl Runner {
    fn new(plan: &ExperimentPlan) -> Result<Self, EstimateError> {
        let d = plan.dimension();
        let w = plan.window;
        plan.region.validate(d)?;
        let mut target = None;
        let (sources, stop) = match &plan.predicate {
            SuccessPredicate::SurviveToLevel { level } => {
                let level = level.unwrap_or(w.top());
                if level > w.top() {
                    return Err(EstimateError::InvalidPlan(format!(
                        "survival level {level} above window top {}",
                        w.top()
                    )));
                }
                (plan_sources(plan)?, StopRule::AtLevel(level))
            }
            SuccessPredicate::ClusterSize { min } => (plan_sources(plan)?, StopRule::AtSize(*min)),
            SuccessPredicate::Span { axis } => {
                let axis = *axis;
                if axis >= d {
                    return Err(EstimateError::InvalidPlan(format!("span axis {axis} out of range")));
                }
                let lo = w.lo()[axis];
                let hi = w.hi()[axis];
                if hi - lo < 3 {
                    return Err(EstimateError::InvalidPlan("window too thin to span".into()));
                }
                let sources: Vec<Vertex> = w
                    .vertices()
                    .into_iter()
                    .filter(|v| v.coords()[axis] <= lo + 1 && v.level() >= 0 && plan.region.contains(v))
                    .collect();
                (sources, StopRule::AtFace { axis, value: hi - 1 })
            }
            SuccessPredicate::BlockEvent(ev) => {
                let (src, dst) = ev.blocks(&plan.region, &w)?;
                target = Some(dst);
                (src, StopRule::Never)
            }
        };
        if sources.is_empty() {
            return Err(ReachError::NoSources.into());
        }
        let query = ClusterQuery::new(plan.region.clone(), w, plan.spec.clone(), sources)?;
        Ok(Self {
            plan: plan.clone(),
            explorer: Explorer::new(query)?,
            stop,
            target,
        })
    }

    fn config(&self, trial: u64) -> EdgeConfig {
        EdgeConfig::new(RngKey::new(self.plan.master_seed, trial), self.plan.window)
    }

    fn success(&self, ex: &mut Explorer, trial: u64, p: f64) -> bool {
        let cfg = self.config(trial);
        let edges = |e: &crate::lattice::EdgeKey| cfg.uniform(e) < p;
        let out = ex.explore(&edges, self.stop);
        match &self.target {
            Some(dst) => dst.iter().all(|v| ex.is_reached(v)),
            None => out.stopped,
        }
    }

    /// The success predicate evaluated on a completed exploration.
    fn reached_goal(&self, ex: &Explorer) -> bool {
        match (&self.target, self.stop) {
            (Some(dst), _) => dst.iter().all(|v| ex.is_reached(v)),
            (None, StopRule::AtLevel(l)) => ex.reached().iter().any(|v| v.level() >= l),
            (None, StopRule::AtSize(n)) => ex.reached().len() >= n,
            (None, StopRule::AtFace { axis, value }) => ex.reached().iter().any(|v| v.coords()[axis] >= value),
            (None, StopRule::Never) => false,
        }
    }

    /// Highest level reached, exploring until `cap` is reached.
    fn max_level(&self, ex: &mut Explorer, trial: u64, p: f64, cap: i64) -> i64 {
        let cfg = self.config(trial);
        let edges = |e: &crate::lattice::EdgeKey| cfg.uniform(e) < p;
        ex.explore(&edges, StopRule::AtLevel(cap)).max_level
    }

    /// Sums `f` over trials `range` in parallel. Integer sums keep the result
    /// independent of scheduling.
    fn sum_trials<const N: usize, F>(&self, range: std::ops::Range<u64>, f: F) -> [u64; N]
    where
        F: Fn(&Self, &mut Explorer, u64) -> [u64; N] + Sync,
    {
        sum_chunked(range, || self.explorer.clone(), |ex, t| f(self, ex, t))
    }

    fn count(&self, p: f64, range: std::ops::Range<u64>) -> u64 {
        self.sum_trials(range, |r, ex, t| [r.success(ex, t, p) as u64])[0]
    }
}

const CHUNK: u64 = 64;

/// Parallel sum of per-trial integer vectors. Each worker reuses one scratch
/// value built by `init`.
fn sum_chunked<const N: usize, S, I, F>(range: std::ops::Range<u64>, init: I, f: F) -> [u64; N]
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> [u64; N] + Sync + Send,
{
    let chunks: Vec<std::ops::Range<u64>> = (range.start..range.end)
        .step_by(CHUNK as usize)
        .map(|a| a..(a + CHUNK).min(range.end))
        .collect();
    let add = |mut a: [u64; N], b: [u64; N]| {
        for i in 0..N {
            a[i] += b[i];
        }
        a
    };
    chunks
        .into_par_iter()
        .map_init(init, |scratch, chunk| chunk.map(|t| f(scratch, t)).fold([0; N], add))
        .reduce(|| [0; N], add)
}

fn plan_sources(plan: &ExperimentPlan) -> Result<Vec<Vertex>, EstimateError> {
    match &plan.sources {
        Some(s) => Ok(s.clone()),
        None => Ok(vec![Vertex::origin(plan.dimension())?]),
    }
}

/// Success frequency of `plan` at `p` over trials `0..plan.trials`.
pub fn estimate_theta(plan: &ExperimentPlan, p: f64) -> Result<ThetaEstimate, EstimateError> {
    plan.validate()?;
    check_probability(p)?;
    let runner = Runner::new(plan)?;
    Ok(ThetaEstimate::from_counts(p, runner.count(p, 0..plan.trials), plan.trials))
}

/// Coupled estimates along an ascending grid.
pub fn crossing_curve(plan: &ExperimentPlan, grid: &[f64]) -> Result<Vec<ThetaEstimate>, EstimateError> {
    plan.validate()?;
    for &p in grid {
        check_probability(p)?;
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(EstimateError::UnsortedGrid);
    }
    let runner = Runner::new(plan)?;
    Ok(grid
        .iter()
        .map(|&p| ThetaEstimate::from_counts(p, runner.count(p, 0..plan.trials), plan.trials))
        .collect())
}

/// Frequency of the seed-block event at `p`.
pub fn estimate_block_event(plan: &ExperimentPlan, event: BlockEvent, p: f64) -> Result<ThetaEstimate, EstimateError> {
    let plan = plan.clone().with_predicate(SuccessPredicate::BlockEvent(event));
    estimate_theta(&plan, p)
}

/// Per-trial comparison of two sequences on identical configurations.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct SpecComparison {
    pub p: f64,
    pub trials: u64,
    /// Whether `spec_a ≤ spec_b` pointwise, so containment must be total.
    pub dominated: bool,
    /// Trials where cluster(a) ⊆ cluster(b).
    pub contained: u64,
    /// Trials where the clusters coincide.
    pub equal: u64,
    pub a: ThetaEstimate,
    pub b: ThetaEstimate,
}

pub fn compare_specs_coupled(
    plan: &ExperimentPlan,
    spec_a: &BackbendSpec,
    spec_b: &BackbendSpec,
    p: f64,
) -> Result<SpecComparison, EstimateError> {
    check_probability(p)?;
    let ra = Runner::new(&plan.clone().with_spec(spec_a.clone()))?;
    let rb = Runner::new(&plan.clone().with_spec(spec_b.clone()))?;
    plan.validate()?;
    let [contained, equal, sa, sb] = sum_chunked(
        0..plan.trials,
        || (ra.explorer.clone(), rb.explorer.clone()),
        |(ea, eb), t| {
            let cfg = ra.config(t);
            let edges = |e: &crate::lattice::EdgeKey| cfg.uniform(e) < p;
            ea.explore(&edges, StopRule::Never);
            eb.explore(&edges, StopRule::Never);
            let sub = ea.reached().iter().all(|v| eb.is_reached(v));
            let eq = sub && ea.reached().len() == eb.reached().len();
            [sub as u64, eq as u64, ra.reached_goal(ea) as u64, rb.reached_goal(eb) as u64]
        },
    );
    Ok(SpecComparison {
        p,
        trials: plan.trials,
        dominated: spec_a.dominated_by(spec_b),
        contained,
        equal,
        a: ThetaEstimate::from_counts(p, sa, plan.trials),
        b: ThetaEstimate::from_counts(p, sb, plan.trials),
    })
}

/// Which side of the target a measurement falls on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
    Undecided,
}

/// A statistic with a confidence interval at one `p`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Measurement {
    pub p: f64,
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
}

impl Measurement {
    pub fn side(&self, target: f64) -> Side {
        if self.ci_lo > target {
            Side::Above
        } else if self.ci_hi < target {
            Side::Below
        } else {
            Side::Undecided
        }
    }
}

/// Anything whose crossing of a target level can be bisected in `p`.
pub trait CrossingProcess: Sync {
    /// The statistic at `p` over `trials` trials, with a two-sided interval
    /// at normal quantile `z`.
    fn measure(&self, p: f64, trials: u64, z: f64) -> Result<Measurement, EstimateError>;

    fn window(&self) -> Option<Window> {
        None
    }
}

/// Deterministic process: value 1 iff `p > threshold`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SyntheticThreshold {
    pub threshold: f64,
}

impl CrossingProcess for SyntheticThreshold {
    fn measure(&self, p: f64, trials: u64, _z: f64) -> Result<Measurement, EstimateError> {
        check_probability(p)?;
        let value = if p > self.threshold { 1.0 } else { 0.0 };
        Ok(Measurement {
            p,
            value,
            ci_lo: value,
            ci_hi: value,
            trials,
        })
    }
}

/// The statistic bisected by [`bisect_pc`] for a plan.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PcStatistic {
    /// Success frequency of the plan's predicate.
    #[default]
    Frequency,
    /// Power-law test on survival to `base`, `2·base` and `4·base` from the
    /// plan's sources. With `P_k` the survival frequencies,
    /// `X = ln P_4 + ln P_1 − 2 ln P_2` vanishes for pure power-law decay,
    /// is positive when survival levels off (supercritical) and negative
    /// when it decays faster (subcritical). Reported as `1 / (1 + e^{−X})`,
    /// so the target is 0.5.
    SurvivalCurvature { base: i64 },
}

/// A plan viewed as a [`CrossingProcess`].
#[derive(Clone, Debug)]
pub struct PlanProcess {
    runner: Runner,
    statistic: PcStatistic,
}

impl PlanProcess {
    pub fn new(plan: &ExperimentPlan, statistic: PcStatistic) -> Result<Self, EstimateError> {
        let runner = Runner::new(plan)?;
        if let PcStatistic::SurvivalCurvature { base } = statistic {
            if base < 1 || 4 * base > plan.window.top() {
                return Err(EstimateError::InvalidPlan(format!(
                    "curvature levels {base}, {}, {} must lie in (0, window top {}]",
                    2 * base,
                    4 * base,
                    plan.window.top()
                )));
            }
        }
        Ok(Self { runner, statistic })
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl CrossingProcess for PlanProcess {
    fn measure(&self, p: f64, trials: u64, z: f64) -> Result<Measurement, EstimateError> {
        check_probability(p)?;
        match self.statistic {
            PcStatistic::Frequency => {
                let s = self.runner.count(p, 0..trials);
                let (ci_lo, ci_hi) = wilson(s, trials, z);
                Ok(Measurement {
                    p,
                    value: s as f64 / trials as f64,
                    ci_lo,
                    ci_hi,
                    trials,
                })
            }
            PcStatistic::SurvivalCurvature { base } => {
                let levels = [base, 2 * base, 4 * base];
                let counts = self.runner.sum_trials(0..trials, |r, ex, t| {
                    let top = r.max_level(ex, t, p, levels[2]);
                    levels.map(|l| (top >= l) as u64)
                });
                // X = ln r_2 − ln r_1 with r_1 = P_2/P_1 and r_2 = P_4/P_2.
                // Given the counts the two ratios are independent binomials,
                // so Wilson intervals stay honest when a count is zero.
                let [c1, c2, c4] = counts;
                let zi = z / std::f64::consts::SQRT_2;
                let (r1_lo, r1_hi) = wilson(c2, c1, zi);
                let (r2_lo, r2_hi) = wilson(c4, c2, zi);
                let ratio = |k: u64, m: u64| (k as f64 + 0.5) / (m as f64 + 1.0);
                // with no survivor at 2·base nothing is known about r_2
                let x = if c2 == 0 { 0.0 } else { ratio(c4, c2).ln() - ratio(c2, c1).ln() };
                Ok(Measurement {
                    p,
                    value: logistic(x),
                    ci_lo: logistic(r2_lo.ln() - r1_hi.ln()),
                    ci_hi: logistic(r2_hi.ln() - r1_lo.ln()),
                    trials,
                })
            }
        }
    }

    fn window(&self) -> Option<Window> {
        Some(self.runner.plan.window)
    }
}

/// Settings for [`bisect_pc`].
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BisectOptions {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "half")]
    pub target: f64,
    pub tol: f64,
    #[serde(default = "default_initial_trials")]
    pub initial_trials: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    /// Normal quantile of the decision interval.
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn half() -> f64 {
    0.5
}
fn default_initial_trials() -> u64 {
    400
}
fn default_max_trials() -> u64 {
    25_600
}
fn default_z() -> f64 {
    Z99
}
fn default_max_iterations() -> usize {
    40
}

impl BisectOptions {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Self {
        Self {
            lo,
            hi,
            target: 0.5,
            tol,
            initial_trials: default_initial_trials(),
            max_trials: default_max_trials(),
            z: default_z(),
            max_iterations: default_max_iterations(),
        }
    }

    pub fn with_trials(mut self, initial: u64, max: u64) -> Self {
        self.initial_trials = initial;
        self.max_trials = max;
        self
    }

    fn validate(&self) -> Result<(), EstimateError> {
        check_probability(self.lo)?;
        check_probability(self.hi)?;
        let bad = |m: &str| Err(EstimateError::InvalidPlan(m.into()));
        if self.lo >= self.hi {
            return bad("bisection needs lo < hi");
        }
        if !(self.target > 0.0 && self.target < 1.0) {
            return bad("target must lie in (0, 1)");
        }
        if self.tol <= 0.0 {
            return bad("tol must be positive");
        }
        if self.initial_trials == 0 || self.max_trials < self.initial_trials {
            return bad("need 1 <= initial_trials <= max_trials");
        }
        if self.z <= 0.0 {
            return bad("z must be positive");
        }
        Ok(())
    }
}

/// Why bisection stopped.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BisectStatus {
    /// Bracket width ≤ tol.
    Converged,
    /// A midpoint stayed undecided at `max_trials`.
    Undecided,
    IterationLimit,
}

/// One evaluated midpoint (or endpoint).
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct BisectStep {
    pub measurement: Measurement,
    pub side: Side,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PcEstimate {
    pub lo: f64,
    pub hi: f64,
    pub status: BisectStatus,
    /// Midpoints evaluated, endpoints first.
    pub steps: Vec<BisectStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

impl PcEstimate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    /// Bisection iterations after the endpoint checks.
    pub fn iterations(&self) -> usize {
        self.steps.len().saturating_sub(2)
    }
}

fn measure_adaptive<P: CrossingProcess + ?Sized>(
    process: &P,
    p: f64,
    opts: &BisectOptions,
) -> Result<BisectStep, EstimateError> {
    let mut n = opts.initial_trials;
    loop {
        let m = process.measure(p, n, opts.z)?;
        let side = m.side(opts.target);
        if side != Side::Undecided || n >= opts.max_trials {
            return Ok(BisectStep { measurement: m, side });
        }
        n = (2 * n).min(opts.max_trials);
    }
}

/// Bisects the crossing of `opts.target`. The trial count at each point
/// doubles while the interval straddles the target.
pub fn bisect_pc<P: CrossingProcess + ?Sized>(process: &P, opts: &BisectOptions) -> Result<PcEstimate, EstimateError> {
    opts.validate()?;
    let lo_step = measure_adaptive(process, opts.lo, opts)?;
    let hi_step = measure_adaptive(process, opts.hi, opts)?;
    if lo_step.side != Side::Below || hi_step.side != Side::Above {
        return Err(EstimateError::NonBracketing {
            lo: opts.lo,
            hi: opts.hi,
            target: opts.target,
            lo_value: lo_step.measurement.value,
            hi_value: hi_step.measurement.value,
        });
    }
    let (mut lo, mut hi) = (opts.lo, opts.hi);
    let mut steps = vec![lo_step, hi_step];
    let mut status = BisectStatus::Converged;
    let mut iterations = 0;
    while hi - lo > opts.tol {
        if iterations == opts.max_iterations {
            status = BisectStatus::IterationLimit;
            break;
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let step = measure_adaptive(process, mid, opts)?;
        steps.push(step);
        match step.side {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
            Side::Undecided => {
                status = BisectStatus::Undecided;
                break;
            }
        }
    }
    Ok(PcEstimate {
        lo,
        hi,
        status,
        steps,
        window: process.window(),
    })
}

/// Bisection for a plan.
pub fn bisect_plan(plan: &ExperimentPlan, statistic: PcStatistic, opts: &BisectOptions) -> Result<PcEstimate, EstimateError> {
    plan.validate()?;
    bisect_pc(&PlanProcess::new(plan, statistic)?, opts)
}

/// Brackets over a ladder of windows, smallest first.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct WindowLadder {
    pub per_window: Vec<PcEstimate>,
    /// Hull of the brackets of the two largest windows.
    pub systematic: (f64, f64),
}

impl WindowLadder {
    /// Bracket at the largest window.
    pub fn primary(&self) -> &PcEstimate {
        self.per_window.last().expect("ladder is nonempty")
    }
}

pub fn bisect_window_ladder(
    plan: &ExperimentPlan,
    windows: &[Window],
    statistic: PcStatistic,
    opts: &BisectOptions,
) -> Result<WindowLadder, EstimateError> {
    if windows.is_empty() {
        return Err(EstimateError::InvalidPlan("window ladder is empty".into()));
    }
    let per_window = windows
        .iter()
        .map(|w| bisect_plan(&plan.clone().with_window(*w), statistic, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let tail = &per_window[per_window.len().saturating_sub(2)..];
    let systematic = (
        tail.iter().map(|e| e.lo).fold(f64::INFINITY, f64::min),
        tail.iter().map(|e| e.hi).fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(WindowLadder { per_window, systematic })
}

/// Brackets for half-slabs `Q_l^e` over ascending `l`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SlabLadder {
    pub e: usize,
    pub rows: Vec<(i64, PcEstimate)>,
    /// Midpoints fail to be nonincreasing by more than the combined
    /// half-widths of adjacent brackets.
    pub trend_violation: bool,
}

pub fn slab_ladder(
    plan: &ExperimentPlan,
    e: usize,
    ls: &[i64],
    statistic: PcStatistic,
    opts: &BisectOptions,
) -> Result<SlabLadder, EstimateError> {
    let d = plan.dimension();
    if e < 2 || e > d {
        return Err(EstimateError::InvalidPlan(format!("half-slab needs 2 <= e <= {d}")));
    }
    if ls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EstimateError::InvalidPlan("l values must be strictly ascending".into()));
    }
    let rows = ls
        .iter()
        .map(|&l| Ok((l, bisect_plan(&plan.clone().with_region(Region::HalfSlab { l, e }), statistic, opts)?)))
        .collect::<Result<Vec<_>, EstimateError>>()?;
    let trend_violation = rows.windows(2).any(|w| {
        let (a, b) = (&w[0].1, &w[1].1);
        b.midpoint() - a.midpoint() > 0.5 * (a.width() + b.width())
    });
    Ok(SlabLadder {
        e,
        rows,
        trend_violation,
    })
}
