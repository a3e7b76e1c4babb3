//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! `ACCEPTANCE_ONLY=1,5a,10` restricts the run to the listed criteria.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};
use std::process::Command;
use std::time::{Duration, Instant};

use backbend_core::estimate::{
    bisect_pc, bisect_plan, bisect_window_ladder, estimate_block_event, estimate_theta, BisectOptions, ExperimentPlan, PcEstimate,
    PcStatistic, SuccessPredicate, SyntheticThreshold,
};
use backbend_core::lattice::EdgeIndexer;
use backbend_core::reach::{reach_saw_oracle_with, BlockEvent};
use backbend_core::config::MaskedEdges;
use backbend_core::{
    reach_saw_oracle, reach_walk, validate_path, Backbend, BackbendSpec, ClusterQuery, EdgeConfig, OracleGuard, Path,
    Region, RngKey, Vertex, Window,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn v(c: &[i64]) -> Vertex {
    Vertex::new(c).unwrap()
}

fn origin(d: usize) -> Vertex {
    Vertex::origin(d).unwrap()
}

fn spec(s: &str) -> BackbendSpec {
    s.parse().unwrap()
}

fn fmt_bracket(e: &PcEstimate) -> String {
    format!("[{:.4}, {:.4}] ({:?})", e.lo, e.hi, e.status)
}

fn minutes(t: Duration) -> f64 {
    t.as_secs_f64() / 60.0
}

// ---------------------------------------------------------------------------
// 1. Path-validator laws

/// Random self-avoiding path from the origin, biased upwards so that strict
/// sequences accept a useful fraction.
fn random_saw(rng: &mut ChaCha8Rng, d: usize, len: usize) -> Path {
    let mut path = vec![origin(d)];
    let mut seen: BTreeSet<Vertex> = path.iter().copied().collect();
    let up_bias: f64 = rng.gen_range(0.5..0.95);
    while path.len() < len {
        let last = *path.last().unwrap();
        let free: Vec<Vertex> = last.neighbors().filter(|w| !seen.contains(w)).collect();
        if free.is_empty() {
            break;
        }
        let ups: Vec<Vertex> = free.iter().copied().filter(|w| w.level() > last.level()).collect();
        let next = if !ups.is_empty() && rng.gen_bool(up_bias) {
            *ups.choose(rng).unwrap()
        } else {
            *free.choose(rng).unwrap()
        };
        seen.insert(next);
        path.push(next);
    }
    Path::new(path).unwrap()
}

/// Direct reading of the backbend rule: every vertex stays at or above
/// `h − β_h` for the running record `h`.
fn admissible(beta: &dyn Fn(i64) -> Option<i64>, path: &Path) -> bool {
    let mut record = i64::MIN;
    path.vertices().iter().all(|u| {
        record = record.max(u.level());
        match beta(record) {
            None => true,
            Some(b) => u.level() >= record - b,
        }
    })
}

fn random_entry(rng: &mut ChaCha8Rng) -> Option<u64> {
    if rng.gen_bool(0.1) {
        None
    } else {
        Some(rng.gen_range(0..5))
    }
}

fn to_backbend(x: Option<u64>) -> Backbend {
    x.map_or(Backbend::Infinite, Backbend::Finite)
}

fn criterion_1() -> Outcome {
    const PATHS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let full = Region::FullSpace;
    let (oriented, unoriented) = (BackbendSpec::oriented(), BackbendSpec::unoriented());
    let mut failures = Vec::new();

    let mut accepted_oriented = 0;
    for _ in 0..PATHS {
        let d = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=30);
        let path = random_saw(&mut rng, d, len);
        let strictly_up = path.vertices().windows(2).all(|w| w[1].level() > w[0].level());
        let ok = validate_path(&oriented, &path, &full).is_valid();
        accepted_oriented += ok as usize;
        if ok != strictly_up {
            failures.push(format!("const:0 on {:?}", path.vertices()));
        }
    }

    for _ in 0..PATHS {
        let d = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=30);
        let path = random_saw(&mut rng, d, len);
        if !validate_path(&unoriented, &path, &full).is_valid() {
            failures.push(format!("inf on {:?}", path.vertices()));
        }
    }

    // Domination: b is a pointwise enlargement of a with the same shape.
    let (mut pairs, mut accepted_a, mut accepted_b) = (0, 0, 0);
    for _ in 0..PATHS / 50 {
        let prefix_len = rng.gen_range(0..4);
        let tail_len = rng.gen_range(1..4);
        let a: Vec<Option<u64>> = (0..prefix_len + tail_len).map(|_| random_entry(&mut rng)).collect();
        let b: Vec<Option<u64>> = a
            .iter()
            .map(|x| match x {
                Some(k) if !rng.gen_bool(0.1) => Some(k + rng.gen_range(0..3)),
                _ => None,
            })
            .collect();
        let build = |xs: &[Option<u64>]| {
            BackbendSpec::new(
                xs[..prefix_len].iter().map(|&x| to_backbend(x)).collect(),
                xs[prefix_len..].iter().map(|&x| to_backbend(x)).collect(),
            )
            .unwrap()
        };
        let (sa, sb) = (build(&a), build(&b));
        if !sa.dominated_by(&sb) {
            failures.push(format!("{sa} not dominated by {sb}"));
        }
        let lookup = |xs: Vec<Option<u64>>| {
            move |h: i64| {
                let h = h as usize;
                let i = if h < prefix_len { h } else { prefix_len + (h - prefix_len) % tail_len };
                xs[i].map(|k| k as i64)
            }
        };
        let (fa, fb) = (lookup(a.clone()), lookup(b.clone()));
        for _ in 0..50 {
            pairs += 1;
            let d = rng.gen_range(2..=3);
            let len = rng.gen_range(2..=30);
            let path = random_saw(&mut rng, d, len);
            let ok_a = validate_path(&sa, &path, &full).is_valid();
            let ok_b = validate_path(&sb, &path, &full).is_valid();
            accepted_a += ok_a as usize;
            accepted_b += ok_b as usize;
            if ok_a != admissible(&fa, &path) || ok_b != admissible(&fb, &path) {
                failures.push(format!("rule mismatch for {sa} / {sb} on {:?}", path.vertices()));
            }
            if ok_a && !ok_b {
                failures.push(format!("{sa} accepts but {sb} rejects {:?}", path.vertices()));
            }
        }
    }

    outcome(
        failures.is_empty(),
        format!(
            "{PATHS} paths per class; const:0 accepted {accepted_oriented}; {pairs} dominated pairs \
             (a accepted {accepted_a}, b accepted {accepted_b}); {} counterexamples{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// 2. Oracle equivalence

fn criterion_2() -> Outcome {
    let setups: Vec<(Region, Window)> = vec![
        (Region::HalfSpace, Window::new(&[-3, 0], &[3, 6]).unwrap()),
        (Region::HalfSpace, Window::new(&[-2, -2, 0], &[2, 2, 3]).unwrap()),
        (Region::HalfSlab { l: 1, e: 2 }, Window::new(&[-3, -3, 0], &[3, 3, 3]).unwrap()),
        (Region::Slab { t: 3 }, Window::new(&[-5, 0], &[5, 8]).unwrap()),
    ];
    let specs = ["const:0", "const:1", "const:3", "inf", "cyclic:1,2"];
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let mut largest = 0;
    for (region, window) in &setups {
        let n = window.vertices().iter().filter(|u| region.contains(u)).count();
        largest = largest.max(n);
        if n > 30 {
            return outcome(false, format!("setup {region} has {n} vertices"));
        }
        for s in specs {
            let q = ClusterQuery::new(region.clone(), *window, spec(s), vec![origin(window.dim())]).unwrap();
            for trial in 0..100u64 {
                let p = 0.3 + 0.5 * (trial as f64 / 99.0);
                let config = EdgeConfig::new(RngKey::new(2002, trial), *window);
                let walk = reach_walk(&q, &config, p).unwrap();
                let paths = reach_saw_oracle(&q, &config, p, OracleGuard::default()).unwrap();
                checked += 1;
                if walk.reached != paths.reached {
                    mismatches.push(format!("{s} on {region} trial {trial}"));
                }
            }
        }
    }

    // The floor sequence 0, 4, 2, 6, ... (tail [0, 5]) is not monotone.
    let (mut differ, mut total) = (0, 0);
    for (region, window) in &setups {
        let q = ClusterQuery::new(region.clone(), *window, spec("cyclic:0,5"), vec![origin(window.dim())]).unwrap();
        for trial in 0..100u64 {
            let p = 0.3 + 0.5 * (trial as f64 / 99.0);
            let config = EdgeConfig::new(RngKey::new(2002, trial), *window);
            let walk = reach_walk(&q, &config, p).unwrap();
            let paths = reach_saw_oracle(&q, &config, p, OracleGuard::default()).unwrap();
            if !paths.reached.is_subset(&walk.reached) {
                mismatches.push(format!("cyclic:0,5 oracle exceeds walk on {region} trial {trial}"));
            }
            total += 1;
            differ += (walk.reached != paths.reached) as usize;
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{checked} monotone-floor comparisons (windows up to {largest} vertices), {} mismatches; \
             tail [0,5] discrepancy rate {differ}/{total} = {:.3}",
            mismatches.len(),
            differ as f64 / total as f64
        ),
    )
}

// ---------------------------------------------------------------------------
// 3. Coupling exactness

fn criterion_3() -> Outcome {
    let window = Window::new(&[-8, -8, 0], &[8, 8, 16]).unwrap();
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let specs = ["const:0", "prefix:0,1,2,3;const:0", "cyclic:1,2", "cyclic:0,5", "inf"];
    let (mut pairs, mut violations, mut survival_drops) = (0, 0, 0);
    for s in specs {
        let q = ClusterQuery::new(Region::HalfSpace, window, spec(s), vec![origin(3)]).unwrap();
        for trial in 0..100 {
            let config = EdgeConfig::new(RngKey::new(33, trial), window);
            let mut prev: Option<BTreeSet<Vertex>> = None;
            let mut survived = false;
            for &p in &grid {
                let c = reach_walk(&q, &config, p).unwrap();
                let top = c.max_level >= window.top();
                if survived && !top {
                    survival_drops += 1;
                }
                survived = top;
                if let Some(prev) = &prev {
                    pairs += 1;
                    violations += (!prev.is_subset(&c.reached)) as usize;
                }
                prev = Some(c.reached);
            }
        }
    }
    outcome(
        violations == 0 && survival_drops == 0,
        format!("{pairs} adjacent-p pairs, {violations} containment violations, {survival_drops} survival drops"),
    )
}

// ---------------------------------------------------------------------------
// 4. Exhaustive enumeration

/// Exact probability of `event` by summing over all 2^E open sets.
fn exact_probability(ix: &EdgeIndexer, p: f64, event: impl Fn(&MaskedEdges) -> bool) -> f64 {
    let e = ix.len();
    assert!(e <= 18);
    (0u64..1 << e)
        .map(|mask| {
            let k = mask.count_ones() as i32;
            let weight = p.powi(k) * (1.0 - p).powi(e as i32 - k);
            if event(&MaskedEdges::new(ix, mask)) {
                weight
            } else {
                0.0
            }
        })
        .sum()
}

fn criterion_4() -> Outcome {
    const TRIALS: u64 = 10_000;
    let mut rows = Vec::new();
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let mut check = |label: String, exact: f64, mc: f64| {
        let se = (exact * (1.0 - exact) / TRIALS as f64).sqrt();
        let ok = if se == 0.0 { mc == exact } else { (mc - exact).abs() <= 3.0 * se };
        if se > 0.0 {
            worst = worst.max((mc - exact).abs() / se);
        }
        pass &= ok;
        compared += 1;
        if !ok {
            rows.push(format!("{label}: exact {exact:.4} mc {mc:.4}"));
        }
    };

    let survival_window = Window::new(&[-3, 0], &[3, 3]).unwrap();
    let block_window = Window::new(&[-2, 0], &[2, 4]).unwrap();
    let (ix_s, ix_b) = (EdgeIndexer::new(&survival_window), EdgeIndexer::new(&block_window));
    let guard = OracleGuard::default();
    for s in ["const:0", "const:1", "inf"] {
        let q = ClusterQuery::new(Region::HalfSpace, survival_window, spec(s), vec![origin(2)]).unwrap();
        let plan = ExperimentPlan::new(Region::HalfSpace, survival_window, spec(s), TRIALS, 404);
        for p in [0.3, 0.5, 0.8] {
            let exact = exact_probability(&ix_s, p, |edges| {
                reach_saw_oracle_with(&q, edges, guard).unwrap().max_level >= survival_window.top()
            });
            let mc = estimate_theta(&plan, p).unwrap().estimate;
            check(format!("survival {s} p={p}"), exact, mc);
        }
        for r in [1, 2] {
            let event = BlockEvent {
                r,
                x: origin(2),
                z: v(&[0, 4]),
            };
            let (src, dst) = event.blocks(&Region::HalfSpace, &block_window).unwrap();
            let q = ClusterQuery::new(Region::HalfSpace, block_window, spec(s), src).unwrap();
            let plan = ExperimentPlan::new(Region::HalfSpace, block_window, spec(s), TRIALS, 405);
            for p in [0.3, 0.5, 0.8] {
                let exact = exact_probability(&ix_b, p, |edges| {
                    let c = reach_saw_oracle_with(&q, edges, guard).unwrap();
                    dst.iter().all(|u| c.reached.contains(u))
                });
                let mc = estimate_block_event(&plan, event, p).unwrap().estimate;
                check(format!("block r={r} {s} p={p}"), exact, mc);
            }
        }
    }
    outcome(
        pass,
        format!(
            "E = {} and {} edges, {compared} comparisons at {TRIALS} trials, worst deviation {worst:.2} SE{}",
            ix_s.len(),
            ix_b.len(),
            rows.first().map(|r| format!("; {r}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// 5. Threshold brackets

fn criterion_5a() -> Outcome {
    let start = Instant::now();
    let windows = [
        Window::new(&[-24, -24, 0], &[24, 24, 3]).unwrap(),
        Window::new(&[-48, -48, 0], &[48, 48, 3]).unwrap(),
    ];
    let plan = ExperimentPlan::new(Region::Slab { t: 3 }, windows[1], BackbendSpec::unoriented(), 1, 51)
        .with_predicate(SuccessPredicate::Span { axis: 0 });
    let opts = BisectOptions::new(0.15, 0.35, 0.02);
    let ladder = match bisect_window_ladder(&plan, &windows, PcStatistic::Frequency, &opts) {
        Ok(l) => l,
        Err(e) => return outcome(false, format!("bisection failed: {e}")),
    };
    let primary = ladder.primary();
    let elapsed = start.elapsed();
    let pass = primary.contains(0.2111) && primary.width() <= 0.02 + 1e-12 && elapsed <= Duration::from_secs(15 * 60);
    outcome(
        pass,
        format!(
            "S_3 crossing, 49x49x4 {} and 97x97x4 {}; target 0.2111; {:.1} min",
            fmt_bracket(&ladder.per_window[0]),
            fmt_bracket(primary),
            minutes(elapsed)
        ),
    )
}

/// Survival-curvature bracket for the oriented half-space.
fn h_plan(spec_text: &str, region: Region, seed: u64) -> ExperimentPlan {
    ExperimentPlan::new(region, Window::new(&[-48, -48, 0], &[48, 48, 96]).unwrap(), spec(spec_text), 1, seed)
}

const CURVATURE: PcStatistic = PcStatistic::SurvivalCurvature { base: 24 };

fn criterion_5b() -> Outcome {
    let start = Instant::now();
    // p = 0.29 sits 0.003 above the target, where the curvature signal is weak.
    let opts = BisectOptions { max_trials: 409_600, ..BisectOptions::new(0.25, 0.33, 0.02) };
    let est = match bisect_plan(&h_plan("const:0", Region::HalfSpace, 52), CURVATURE, &opts) {
        Ok(e) => e,
        Err(e) => return outcome(false, format!("bisection failed: {e}")),
    };
    let elapsed = start.elapsed();
    let pass = est.contains(0.2873) && est.width() <= 0.02 + 1e-12 && elapsed <= Duration::from_secs(30 * 60);
    outcome(
        pass,
        format!("H oriented, 97x97x97 {}; target 0.2873; {:.1} min", fmt_bracket(&est), minutes(elapsed)),
    )
}

// ---------------------------------------------------------------------------
// 6-8. Orderings, all with the default 0.5 survival-frequency crossing

const ORIENTED: &str = "const:0";
const CONVERGING: &str = "prefix:0,1,2,3;const:0";

fn ordering_opts() -> BisectOptions {
    BisectOptions::new(0.15, 0.55, 0.01)
}

/// Bracket for `spec` on `region` in `window`, computed once per run.
fn cached_bracket(spec_text: &str, region: Region, window: Window) -> (Result<PcEstimate, String>, Duration) {
    type Key = (String, String, String);
    static CACHE: OnceLock<Mutex<HashMap<Key, Result<PcEstimate, String>>>> = OnceLock::new();
    let key = (spec_text.to_string(), region.to_string(), window.to_string());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return (hit.clone(), Duration::ZERO);
    }
    let start = Instant::now();
    let plan = ExperimentPlan::new(region, window, spec(spec_text), 1, 60);
    let est = bisect_plan(&plan, PcStatistic::Frequency, &ordering_opts()).map_err(|e| e.to_string());
    cache.lock().unwrap().insert(key, est.clone());
    (est, start.elapsed())
}

fn h_window() -> Window {
    Window::new(&[-48, -48, 0], &[48, 48, 96]).unwrap()
}

fn strip_window(height: i64) -> Window {
    Window::new(&[-16, -32, 0], &[16, 32, height]).unwrap()
}

/// `a ≤ b` for bracket midpoints, up to the combined half-widths. This is
/// `a.lo ≤ b.hi`; comparing endpoints keeps brackets that touch at a shared
/// bisection point from being split by rounding.
fn ordered(a: &PcEstimate, b: &PcEstimate) -> bool {
    a.lo <= b.hi + 1e-12
}

fn criterion_6() -> Outcome {
    let (tilde, t1) = cached_bracket(CONVERGING, Region::HalfSpace, h_window());
    let (beta, t2) = cached_bracket(ORIENTED, Region::HalfSpace, h_window());
    let (tilde, beta) = match (tilde, beta) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return outcome(false, format!("bisection failed: {a:?} {b:?}")),
    };
    let elapsed = t1 + t2;
    outcome(
        tilde.hi < beta.lo && elapsed <= Duration::from_secs(30 * 60),
        format!(
            "97x97x97 survival crossing: converging {} vs oriented {}; {:.1} min",
            fmt_bracket(&tilde),
            fmt_bracket(&beta),
            minutes(elapsed)
        ),
    )
}

const STRIP_HEIGHT_7: i64 = 192;

fn criterion_7() -> Outcome {
    let w = strip_window(STRIP_HEIGHT_7);
    let mut elapsed = Duration::ZERO;
    let mut get = |s: &str, l: i64| {
        let (est, t) = cached_bracket(s, Region::HalfSlab { l, e: 2 }, w);
        elapsed += t;
        est
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for l in [2, 4] {
        let (a, b, c) = match (get(ORIENTED, 2 * l), get(CONVERGING, l), get(ORIENTED, l)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            r => return outcome(false, format!("bisection failed: {r:?}")),
        };
        let ok = ordered(&a, &b) && ordered(&b, &c);
        pass &= ok;
        parts.push(format!(
            "l={l}: beta Q_{} [{:.4}, {:.4}], tilde Q_{l} [{:.4}, {:.4}], beta Q_{l} [{:.4}, {:.4}] [{}]",
            2 * l,
            a.lo,
            a.hi,
            b.lo,
            b.hi,
            c.lo,
            c.hi,
            if ok { "ok" } else { "violated" }
        ));
    }
    outcome(
        pass && elapsed <= Duration::from_secs(30 * 60),
        format!("strips 33x65x{}, {}; {:.1} min", STRIP_HEIGHT_7 + 1, parts.join("; "), minutes(elapsed)),
    )
}

fn criterion_8() -> Outcome {
    let w = strip_window(96);
    let mut elapsed = Duration::ZERO;
    let mut rows = Vec::new();
    for l in [1, 2, 4, 8] {
        let (est, t) = cached_bracket(ORIENTED, Region::HalfSlab { l, e: 2 }, w);
        elapsed += t;
        match est {
            Ok(e) => rows.push((l, e)),
            Err(e) => return outcome(false, format!("Q_{l}: {e}")),
        }
    }
    let (h, t) = cached_bracket(ORIENTED, Region::HalfSpace, h_window());
    elapsed += t;
    let h = match h {
        Ok(h) => h,
        Err(e) => return outcome(false, format!("H: {e}")),
    };
    let nonincreasing = rows.windows(2).all(|p| ordered(&p[1].1, &p[0].1));
    let above_h = rows.iter().all(|(_, e)| ordered(&h, e));
    let table: Vec<String> = rows.iter().map(|(l, e)| format!("Q_{l} {:.4}", e.midpoint())).collect();
    outcome(
        nonincreasing && above_h && elapsed <= Duration::from_secs(30 * 60),
        format!(
            "oriented, height 97: {}; H {:.4}; nonincreasing {nonincreasing}, above H {above_h}; {:.1} min",
            table.join(", "),
            h.midpoint(),
            minutes(elapsed)
        ),
    )
}

// ---------------------------------------------------------------------------
// 9. Determinism across thread counts

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("backbend-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("sweep.json");
    std::fs::write(
        &config,
        r#"{"mode": "curve", "dimension": 3, "window": "-8..8x-8..8x0..16", "beta": "prefix:0,1,2,3;const:0",
            "p_grid": [0.2, 0.3, 0.4], "trials": 500, "seed": 9}"#,
    )
    .unwrap();
    let config = config.to_string_lossy().into_owned();
    let commands: Vec<Vec<&str>> = vec![
        vec!["theta", "--window=-10..10x-10..10x0..20", "--p", "0.29", "--trials", "2000", "--seed", "1"],
        vec!["theta", "--region", "slab:3", "--beta", "inf", "--window=-12..12x-12..12x0..3", "--p", "0.25",
             "--trials", "1000", "--predicate", "span:0", "--seed", "2"],
        vec!["pc", "--window-ladder=-6..6x-6..6x0..12,-10..10x-10..10x0..20", "--tol", "0.02", "--trials", "200",
             "--max-trials", "1600", "--seed", "3"],
        vec!["block-event", "--window=-8..8x-8..8x0..8", "--r", "2", "--x=0,0,0", "--z=0,0,6", "--p", "0.5",
             "--trials", "1000", "--seed", "4"],
        vec!["oracle", "--beta", "const:1", "--window=-3..3x0..6", "--p", "0.6", "--seed", "5"],
        vec!["sweep", "--config", &config],
    ];
    let mut failures = Vec::new();
    for args in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "4"] {
            let out = Command::new(env!("CARGO_BIN_EXE_backbend-perc"))
                .args(["--threads", threads])
                .args(args)
                .arg("--reproducible")
                .output()
                .expect("spawn backbend-perc");
            if !out.status.success() {
                failures.push(format!("{} exited {:?}", args[0], out.status.code()));
            }
            outputs.push(out.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{} output differs", args[0]));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        failures.is_empty(),
        format!("{} commands at threads 1/4/4: {}", commands.len(), if failures.is_empty() { "byte-identical".into() } else { failures.join(", ") }),
    )
}

// ---------------------------------------------------------------------------
// 10. Synthetic bisection

fn criterion_10() -> Outcome {
    let opts = BisectOptions::new(0.0, 1.0, 1e-3);
    match bisect_pc(&SyntheticThreshold { threshold: 0.4 }, &opts) {
        Ok(e) => outcome(
            e.contains(0.4) && e.width() <= 1e-3 && e.iterations() <= 20,
            format!("{} width {:.2e} in {} iterations", fmt_bracket(&e), e.width(), e.iterations()),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: Vec<(&str, &str, fn() -> Outcome)> = vec![
        ("1", "path-validator laws", criterion_1),
        ("2", "oracle equivalence", criterion_2),
        ("3", "coupling exactness", criterion_3),
        ("4", "exhaustive enumeration", criterion_4),
        ("5a", "S_3 unoriented threshold", criterion_5a),
        ("5b", "H oriented threshold", criterion_5b),
        ("6", "converging sequence lowers the half-space threshold", criterion_6),
        ("7", "two-dimensional half-slab sandwich", criterion_7),
        ("8", "half-slab ladder trend", criterion_8),
        ("9", "determinism", criterion_9),
        ("10", "synthetic bisection", criterion_10),
    ];
    let only: Option<Vec<String>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').map(|t| t.trim().to_string()).collect());
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|t| t == id)) {
            continue;
        }
        let start = Instant::now();
        let r = run();
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>3} {verdict} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), r.detail);
        if !r.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: {} failed ({})", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
