//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dyncolor::degeneracy::smallest_last;
use dyncolor::harness::{
    coin_experiment, generate, run, Family, GeneratorKind, RunConfig, RunReport, WorkloadEvent,
};
use dyncolor::oracle::{brute_degeneracy, peeling_degeneracy};
use dyncolor::orientation::current_cap;
use dyncolor::{NodeId, OrientationStrategy, OrientedGraph, Orienter, PolicyKind, StrategyKind};

const POLICIES: [PolicyKind; 2] = [PolicyKind::Deterministic, PolicyKind::Randomized];
const STRATEGIES: [StrategyKind; 2] = [StrategyKind::StaticRecompute, StrategyKind::AmortizedFlip];

struct Outcome {
    pass: bool,
    detail: String,
}

fn config(
    policy: PolicyKind,
    orientation: StrategyKind,
    k: usize,
    seed: u64,
    strict: bool,
) -> RunConfig {
    RunConfig {
        policy,
        orientation,
        partition_k: k,
        seed,
        strict,
        ..RunConfig::default()
    }
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

/// Criterion 1 runs, shared with criteria 2 and 4.
fn properness_runs() -> Vec<RunReport> {
    let jobs: Vec<(u64, PolicyKind, StrategyKind, usize)> = (0..100u64)
        .flat_map(|s| {
            POLICIES.into_iter().flat_map(move |p| {
                STRATEGIES
                    .into_iter()
                    .flat_map(move |o| [1usize, 4].map(|k| (s, p, o, k)))
            })
        })
        .collect();
    jobs.into_par_iter()
        .map(|(seed, policy, orient, k)| {
            let n = 1000;
            let m = [n, 3 * n, 5 * n][seed as usize % 3];
            let w = generate(GeneratorKind::GnmSweep { n, m }, seed).expect("valid gnm parameters");
            run(&w, &config(policy, orient, k, seed, true)).expect("well-formed workload")
        })
        .collect()
}

fn stress_runs() -> Vec<RunReport> {
    Family::ALL
        .par_iter()
        .enumerate()
        .map(|(i, &family)| {
            let w = generate(
                GeneratorKind::AmortizedStress { n: 500, family },
                100 + i as u64,
            )
            .unwrap();
            run(
                &w,
                &config(
                    PolicyKind::Deterministic,
                    StrategyKind::AmortizedFlip,
                    1,
                    i as u64,
                    true,
                ),
            )
            .unwrap()
        })
        .collect()
}

fn c1(reports: &[RunReport], elapsed: Duration) -> Outcome {
    let sweeps: usize = reports.iter().map(|r| r.summary.sweeps).sum();
    let conflicts: usize = reports.iter().map(|r| r.summary.conflicts).sum();
    Outcome {
        pass: conflicts == 0 && sweeps == reports.len() && within(elapsed, 120),
        detail: format!(
            "{} runs, {sweeps} sweeps, {conflicts} conflicts, {:.1}s",
            reports.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn c2(reports: &[RunReport]) -> Outcome {
    let mut bad = 0;
    let mut worst = 0.0f64;
    for r in reports {
        for q in &r.records {
            let bound = 9 * q.d as u32;
            if q.local_color > bound {
                bad += 1;
            }
            worst = worst.max(q.local_color as f64 / bound as f64);
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{bad} colors above 9d; max color/9d = {worst:.3}"),
    }
}

fn c3(reports: &[RunReport], elapsed: Duration) -> Outcome {
    let mut bad = 0;
    let mut tightest = 0.0f64;
    for r in reports {
        for (i, q) in r.records.iter().enumerate() {
            let bound = 6 * (i + 1) / 5 + 1;
            if q.colored > bound {
                bad += 1;
            }
            tightest = tightest.max(q.colored as f64 / bound as f64);
        }
    }
    Outcome {
        pass: bad == 0 && within(elapsed, 30),
        detail: format!(
            "{} families, {bad} prefix violations, max colored/bound = {tightest:.3}, {:.1}s",
            reports.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn c4(groups: &[&[RunReport]]) -> Outcome {
    let runs: usize = groups.iter().map(|g| g.len()).sum();
    let violations: Vec<&String> = groups
        .iter()
        .flat_map(|g| g.iter())
        .flat_map(|r| &r.violations)
        .collect();
    Outcome {
        pass: violations.is_empty(),
        detail: match violations.first() {
            None => format!("{runs} strict runs, 0 violations"),
            Some(v) => format!("{} violations, first: {v}", violations.len()),
        },
    }
}

fn c5() -> Outcome {
    let started = Instant::now();
    let n = 4096;
    let maxima: Vec<(bool, usize)> = (0..50u64)
        .into_par_iter()
        .flat_map(|seed| {
            let gnm = generate(GeneratorKind::GnmSweep { n, m: 4 * n }, seed).unwrap();
            let funnel = generate(
                GeneratorKind::VstarStress {
                    n,
                    d: 2,
                    fan_in: 11,
                },
                seed,
            )
            .unwrap();
            [(true, gnm), (false, funnel)]
                .into_par_iter()
                .map(move |(is_gnm, w)| {
                    let cfg = config(
                        PolicyKind::Randomized,
                        StrategyKind::AmortizedFlip,
                        1,
                        seed,
                        false,
                    );
                    (is_gnm, run(&w, &cfg).unwrap().summary.vstar_max)
                })
        })
        .collect();
    let limit = (100.0 * (n as f64).log2()).ceil() as usize;
    let max_of = |g: bool| {
        maxima
            .iter()
            .filter(|m| m.0 == g)
            .map(|m| m.1)
            .max()
            .unwrap_or(0)
    };
    let elapsed = started.elapsed();
    let worst = max_of(true).max(max_of(false));
    Outcome {
        pass: worst <= limit && within(elapsed, 180),
        detail: format!(
            "{} runs, max |V*| gnm {} / funnels {} (limit {limit}), {:.1}s",
            maxima.len(),
            max_of(true),
            max_of(false),
            elapsed.as_secs_f64()
        ),
    }
}

fn c6() -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for (d, seed) in [(2usize, 6u64), (5, 7)] {
        let exp = coin_experiment(d, 1_000_000, seed).unwrap();
        worst = worst.max(exp.max_abs_deviation);
    }
    let elapsed = started.elapsed();
    Outcome {
        pass: worst <= 0.002 && within(elapsed, 20),
        detail: format!(
            "max |empirical - analytic| = {worst:.5} (tolerance 0.002), {:.1}s",
            elapsed.as_secs_f64()
        ),
    }
}

fn c7() -> Outcome {
    let agrees = |k: u32, edges: &[(NodeId, NodeId)]| {
        let nodes: Vec<NodeId> = (0..k).map(NodeId).collect();
        smallest_last(&nodes, edges).degeneracy == brute_degeneracy(&nodes, edges).unwrap()
    };
    let (mut checked, mut mismatches) = (0usize, 0usize);
    for k in 1..=5u32 {
        let pairs: Vec<(NodeId, NodeId)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (NodeId(a), NodeId(b))))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            checked += 1;
            mismatches += usize::from(!agrees(k, &edges));
        }
    }
    let exhaustive = checked;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let k = rng.random_range(1..=12u32);
        let p: f64 = rng.random();
        let edges: Vec<_> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (NodeId(a), NodeId(b))))
            .filter(|_| rng.random_bool(p))
            .collect();
        checked += 1;
        mismatches += usize::from(!agrees(k, &edges));
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!(
            "{exhaustive} exhaustive + {} random graphs, {mismatches} mismatches",
            checked - exhaustive
        ),
    }
}

fn churn_violations(kind: StrategyKind) -> (usize, usize, usize) {
    let n = 500;
    let w = generate(
        GeneratorKind::Churn {
            n,
            ops: 10_000,
            target_m: 3 * n,
        },
        8,
    )
    .unwrap();
    let mut g = OrientedGraph::new(n);
    let mut o = Orienter::new(OrientationStrategy::of_kind(kind)).unwrap();
    let (mut steps, mut over_cap, mut cap_mismatch) = (0, 0, 0);
    for e in &w.events {
        match *e {
            WorkloadEvent::Insert(u, v) => {
                g.insert_edge(u, v, &mut o).unwrap();
            }
            WorkloadEvent::Delete(u, v) => g.delete_edge(u, v, &mut o).unwrap(),
            _ => continue,
        }
        steps += 1;
        let cap = current_cap(&g);
        if g.max_out_degree() > cap {
            over_cap += 1;
        }
        if kind == StrategyKind::StaticRecompute && cap != peeling_degeneracy(n, &g.edges()).max(2)
        {
            cap_mismatch += 1;
        }
    }
    (steps, over_cap, cap_mismatch)
}

fn c8() -> Outcome {
    let results: Vec<(usize, usize, usize)> = STRATEGIES
        .par_iter()
        .map(|&k| churn_violations(k))
        .collect();
    let over: usize = results.iter().map(|r| r.1).sum();
    let mismatch: usize = results.iter().map(|r| r.2).sum();
    Outcome {
        pass: over == 0 && mismatch == 0,
        detail: format!(
            "{} + {} updates, {over} cap violations, {mismatch} static cap != max(2, degeneracy)",
            results[0].0, results[1].0
        ),
    }
}

fn c9() -> Outcome {
    let jobs: Vec<(u64, PolicyKind)> = (0..20u64).flat_map(|s| POLICIES.map(|p| (s, p))).collect();
    let results: Vec<(usize, Vec<String>)> = jobs
        .into_par_iter()
        .map(|(seed, policy)| {
            let w = generate(
                GeneratorKind::Churn {
                    n: 200,
                    ops: 3000,
                    target_m: 600,
                },
                900 + seed,
            )
            .unwrap();
            let r = run(
                &w,
                &config(policy, StrategyKind::AmortizedFlip, 1, seed, true),
            )
            .unwrap();
            (r.records.len(), r.violations)
        })
        .collect();
    let queries: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1.len()).sum();
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} runs, {queries} queries checked, {bad} violations",
            results.len()
        ),
    }
}

fn c10() -> Outcome {
    let cases = [
        (
            GeneratorKind::GnmSweep { n: 1000, m: 3000 },
            PolicyKind::Randomized,
            StrategyKind::AmortizedFlip,
            4,
        ),
        (
            GeneratorKind::Churn {
                n: 300,
                ops: 5000,
                target_m: 900,
            },
            PolicyKind::Randomized,
            StrategyKind::StaticRecompute,
            1,
        ),
        (
            GeneratorKind::VstarStress {
                n: 1200,
                d: 2,
                fan_in: 11,
            },
            PolicyKind::Deterministic,
            StrategyKind::AmortizedFlip,
            1,
        ),
    ];
    let mut differing = 0;
    let mut bytes = 0;
    for (i, (kind, policy, orient, k)) in cases.into_iter().enumerate() {
        let seed = 31 + i as u64;
        let cfg = config(policy, orient, k, seed, false);
        let a = run(&generate(kind, seed).unwrap(), &cfg)
            .unwrap()
            .to_jsonl();
        let b = run(&generate(kind, seed).unwrap(), &cfg)
            .unwrap()
            .to_jsonl();
        bytes += a.len();
        if a != b {
            differing += 1;
        }
    }
    Outcome {
        pass: differing == 0,
        detail: format!(
            "{} configurations, {bytes} bytes each pass, {differing} differ",
            cases.len()
        ),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let c1_runs = properness_runs();
    let c1_time = started.elapsed();
    let started = Instant::now();
    let c3_runs = stress_runs();
    let c3_time = started.elapsed();

    let results = [
        ("properness", c1(&c1_runs, c1_time)),
        ("palette bound", c2(&c1_runs)),
        ("amortized colored bound", c3(&c3_runs, c3_time)),
        ("uncolored-count invariant", c4(&[&c1_runs, &c3_runs])),
        ("worst-case V* size", c5()),
        ("coin distribution", c6()),
        ("degeneracy oracle equivalence", c7()),
        ("orientation contract", c8()),
        ("processed-arc reconstruction", c9()),
        ("determinism", c10()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
