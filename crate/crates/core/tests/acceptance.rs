//! Acceptance checks. Run with
//! `cargo test -p spx-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use spx::geometry::{crossing_angle, Segment};
use spx::graph::{all_pairs_shortest_paths, generate_binary_tree, generate_community_graph, generate_random_dag, Edge};
use spx::metrics::{count_crossings, neighborhood_preservation, upward_fraction};
use spx::optimizer::*;
use spx::penalties::{solve_separator, AngleGradient, PenaltyMode};
use spx::stress::{stress_majorize_traced, MajorizeOptions};
use spx::{Graph, Layout};

const FD_REL_TOL: f64 = 1e-5;
const FD_INSTANCES: usize = 50;
const SEP_PAIRS: usize = 10_000;
const SEP_ZERO_TOL: f64 = 1e-9;
const SEP_ORACLE_PAIRS: usize = 100;
const SEP_ORACLE_TOL: f64 = 1e-3;
const ANGLE_TOL: f64 = 1e-9;
const COMMUNITY_GRAPHS: u64 = 20;
const TRACE_DROP: f64 = 0.9;
const MAJORIZE_SLACK: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let took = t.elapsed();
    let pass = out.pass && took <= budget;
    println!(
        "[{}] {id}. {name}: {} ({:.1} s, budget {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn community(seed: u64) -> Graph {
    generate_community_graph(50, 5, 0.3, 0.01, seed).unwrap()
}

fn gradients() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut seed = 0u64;
    while used < FD_INSTANCES && seed < 5000 {
        seed += 1;
        let n = 5 + (seed as usize % 11);
        let Some((g, dm, layout, states)) = frozen_instance(n, seed, 1e-6) else {
            continue;
        };
        used += 1;
        worst = worst.max(stress_fd_error(&g, &dm, &layout));
        for (mode, angle) in [
            (PenaltyMode::CrossingOnly, AngleGradient::Full),
            (PenaltyMode::CrossingAngle, AngleGradient::Full),
            (PenaltyMode::CrossingAngle, AngleGradient::Frozen),
        ] {
            worst = worst.max(penalty_fd_error(&g, &layout, &states, mode, angle));
        }
    }
    Outcome {
        pass: used >= FD_INSTANCES && worst < FD_REL_TOL,
        detail: format!("{used} instances, max relative error {worst:.2e} (< {FD_REL_TOL:e})"),
    }
}

fn separator() -> Outcome {
    let mut r = rng(2024);
    let seg = |p: [f64; 2], q: [f64; 2]| Segment::from_coords(p, q);
    let (mut mismatches, mut max_pen, mut crossing) = (0, 0.0f64, 0);
    for _ in 0..SEP_PAIRS {
        let p: Vec<[f64; 2]> = (0..4).map(|_| [r.random::<f64>() * 10.0, r.random::<f64>() * 10.0]).collect();
        let sol = solve_separator(&seg(p[0], p[1]), &seg(p[2], p[3])).unwrap();
        let crosses = segments_intersect_param(p[0], p[1], p[2], p[3]);
        crossing += crosses as usize;
        if (sol.penalty > SEP_ZERO_TOL) != crosses {
            mismatches += 1;
        }
        max_pen = max_pen.max(sol.penalty);
    }
    let mut gap = 0.0f64;
    let mut done = 0;
    while done < SEP_ORACLE_PAIRS {
        let p: Vec<[f64; 2]> = (0..4).map(|_| [r.random::<f64>() * 4.0, r.random::<f64>() * 4.0]).collect();
        if !segments_intersect_param(p[0], p[1], p[2], p[3]) {
            continue;
        }
        let sol = solve_separator(&seg(p[0], p[1]), &seg(p[2], p[3])).unwrap();
        let oracle = grid_separator_oracle([p[0], p[1]], [p[2], p[3]]);
        gap = gap.max((sol.penalty - oracle).abs());
        done += 1;
    }
    Outcome {
        pass: mismatches == 0 && max_pen <= 2.0 + 1e-12 && gap < SEP_ORACLE_TOL,
        detail: format!(
            "{SEP_PAIRS} pairs ({crossing} crossing), {mismatches} zero/crossing mismatches, max penalty {max_pen:.4}, \
             max oracle gap {gap:.1e} on {SEP_ORACLE_PAIRS} crossing pairs"
        ),
    }
}

fn metric_oracles() -> Outcome {
    let mut crossing_mismatch = 0;
    for seed in 0..200u64 {
        let n = 6 + (seed as usize % 20);
        let g = random_graph(n, seed);
        let l = random_coords(n, 4.0, &mut rng(seed + 1000));
        if count_crossings(&l, &g) != brute_crossings(&l, &g) {
            crossing_mismatch += 1;
        }
    }
    let mut r = rng(77);
    let mut angle_err = 0.0f64;
    for _ in 0..2000 {
        let c = random_coords(4, 1.0, &mut r).coords;
        let ours = crossing_angle(&Segment::from_coords(c[0], c[1]), &Segment::from_coords(c[2], c[3])).unwrap();
        let oracle = atan2_angle([c[1][0] - c[0][0], c[1][1] - c[0][1]], [c[3][0] - c[2][0], c[3][1] - c[2][1]]);
        angle_err = angle_err.max((ours - oracle).abs());
    }
    let c4 = Graph::new(4, (0..4).map(|i| Edge::undirected(i, (i + 1) % 4)).collect()).unwrap();
    let square = Layout::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    let np_c4 = neighborhood_preservation(&square, &c4);
    let np_kn = (3..10usize)
        .map(|n| {
            let kn = Graph::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| Edge::undirected(i, j))).collect())
                .unwrap();
            neighborhood_preservation(&random_coords(n, 3.0, &mut rng(n as u64)), &kn)
        })
        .fold(1.0f64, f64::min);
    Outcome {
        pass: crossing_mismatch == 0 && angle_err < ANGLE_TOL && np_c4 == 1.0 && np_kn == 1.0,
        detail: format!(
            "crossing mismatches {crossing_mismatch}/200, max angle error {angle_err:.1e}, NP(C4)={np_c4}, min NP(K_n)={np_kn}"
        ),
    }
}

fn fewer_crossings() -> Outcome {
    let (mut spx_total, mut sm_total) = (0usize, 0usize);
    for seed in 0..COMMUNITY_GRAPHS {
        let g = community(seed);
        let dm = all_pairs_shortest_paths(&g).unwrap();
        let base = RunConfig {
            seed,
            selection: Selection::MinCost,
            ..RunConfig::for_graph(&dm)
        };
        let grid = SweepGrid {
            k_values: vec![1.0, 2.0, 4.0],
            variants: [GdKind::Vanilla, GdKind::Adam]
                .iter()
                .map(|&k| GdVariant::with_defaults(k, dm.diameter()))
                .collect(),
            inits: vec![InitMethod::StressMajorization],
            restarts: 5,
        };
        let out = sweep(&g, &dm, &grid, &base).unwrap();
        spx_total += out.best.final_crossings;
        let sm = initial_layout(&g, &dm, InitMethod::StressMajorization, init_seed(seed, InitMethod::StressMajorization, 0))
            .unwrap();
        sm_total += count_crossings(&sm, &g);
    }
    let k = COMMUNITY_GRAPHS as f64;
    let (spx_mean, sm_mean) = (spx_total as f64 / k, sm_total as f64 / k);
    Outcome {
        pass: spx_mean < sm_mean,
        detail: format!("mean crossings SPX {spx_mean:.2} vs stress majorization {sm_mean:.2} over {COMMUNITY_GRAPHS} graphs"),
    }
}

fn upwardness() -> Outcome {
    let mut tree_crossings = Vec::new();
    let mut not_upward = 0;
    let mut runs = 0;
    let variants = |d: f64| {
        [GdKind::Adam, GdKind::RmsProp, GdKind::Vanilla]
            .iter()
            .map(|&k| GdVariant::with_defaults(k, d))
            .collect::<Vec<_>>()
    };
    for depth in 2..=5 {
        let g = generate_binary_tree(depth).unwrap();
        let dm = all_pairs_shortest_paths(&g).unwrap();
        let base = RunConfig {
            upward: true,
            seed: depth as u64,
            selection: Selection::MinCrossings,
            ..RunConfig::for_graph(&dm)
        };
        let grid = SweepGrid {
            k_values: (0..=4).map(|e| 2f64.powi(e)).collect(),
            variants: variants(dm.diameter()),
            inits: vec![InitMethod::StressMajorization],
            restarts: 2,
        };
        let out = sweep(&g, &dm, &grid, &base).unwrap();
        runs += out.runs.len();
        not_upward += out.runs.iter().filter(|r| upward_fraction(&r.layout, &g) != 1.0).count();
        tree_crossings.push(out.best.final_crossings);
    }
    for seed in 0..30u64 {
        let n = 5 + (seed as usize % 20);
        let g = generate_random_dag(n, 2.0, seed).unwrap();
        let dm = all_pairs_shortest_paths(&g).unwrap();
        let base = RunConfig {
            upward: true,
            seed,
            ..RunConfig::for_graph(&dm)
        };
        let grid = SweepGrid {
            k_values: vec![1.0, 2.0, 4.0],
            variants: variants(dm.diameter()),
            inits: vec![InitMethod::StressMajorization],
            restarts: 1,
        };
        let out = sweep(&g, &dm, &grid, &base).unwrap();
        runs += out.runs.len();
        not_upward += out.runs.iter().filter(|r| upward_fraction(&r.layout, &g) != 1.0).count();
    }
    Outcome {
        pass: not_upward == 0 && tree_crossings.iter().all(|&c| c == 0),
        detail: format!("{not_upward}/{runs} runs not fully upward, tree crossings (depth 2..5) {tree_crossings:?}"),
    }
}

fn trace_shape() -> Outcome {
    let g = community(100);
    let dm = all_pairs_shortest_paths(&g).unwrap();
    let ratios: Vec<(GdKind, f64)> = GdKind::ALL
        .iter()
        .map(|&kind| {
            let cfg = RunConfig {
                variant: GdVariant::with_defaults(kind, dm.diameter()),
                init: InitMethod::Random,
                seed: 1,
                ..RunConfig::for_graph(&dm)
            };
            let r = spx_optimize(&g, &dm, &cfg).unwrap();
            let ratio = if r.is_valid() { r.final_cost / r.trace[0].cost } else { f64::INFINITY };
            (kind, ratio)
        })
        .collect();
    let listed: Vec<String> = ratios.iter().map(|(k, r)| format!("{}={r:.3}", k.name())).collect();
    Outcome {
        pass: ratios.iter().any(|&(_, r)| r <= TRACE_DROP),
        detail: format!("final/initial cost after 100 iterations: {}", listed.join(" ")),
    }
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let g = spx::io::write_graph(&community(7));
    std::fs::write(d.join("g.txt"), g).unwrap();
    let run = |threads: &str, tag: &str| -> Option<(Vec<u8>, Vec<u8>)> {
        let ok = Command::new(env!("CARGO_BIN_EXE_spx"))
            .args(["sweep", "g.txt", "--k-grid", "0..2", "--variants", "vanilla,adam", "--inits", "stress,random"])
            .args(["--restarts", "2", "--iters", "30", "--seed", "42"])
            .args(["-o", &format!("best-{tag}.json"), "--all-csv", &format!("runs-{tag}.csv")])
            .env("RAYON_NUM_THREADS", threads)
            .current_dir(d)
            .output()
            .ok()?
            .status
            .success();
        let read = |p: &Path| std::fs::read(p).ok();
        ok.then(|| Some((read(&d.join(format!("best-{tag}.json")))?, read(&d.join(format!("runs-{tag}.csv")))?)))
            .flatten()
    };
    let a = run("1", "a");
    let b = run("4", "b");
    let c = run("4", "c");
    let same = a.is_some() && a == b && b == c;
    Outcome {
        pass: same,
        detail: format!(
            "best.json and runs.csv {} across RAYON_NUM_THREADS=1,4,4",
            if same { "byte-identical" } else { "differ or missing" }
        ),
    }
}

fn majorization() -> Outcome {
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 0..50u64 {
        let n = 5 + (seed as usize % 40);
        let g = random_graph(n, seed);
        let dm = all_pairs_shortest_paths(&g).unwrap();
        let init = random_coords(n, 5.0, &mut rng(seed));
        let (_, hist) = stress_majorize_traced(&g, &dm, &init, MajorizeOptions::default()).unwrap();
        for w in hist.windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
    }
    Outcome {
        pass: worst_rise <= MAJORIZE_SLACK,
        detail: format!("largest per-iteration stress increase {worst_rise:.2e} over 50 graphs"),
    }
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        check(1, "gradient correctness", s(30), gradients),
        check(2, "separator soundness", s(60), separator),
        check(3, "metric oracles", s(60), metric_oracles),
        check(4, "fewer crossings than stress majorization", s(900), fewer_crossings),
        check(5, "upward drawings", s(600), upwardness),
        check(6, "convergence trace", s(300), trace_shape),
        check(7, "sweep determinism", s(300), determinism),
        check(8, "majorization monotonicity", s(60), majorization),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    assert_eq!(passed, results.len());
}
