//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

mod common;

use std::time::Instant;

use common::{brute_force_optimum, improving_single_move, naive_cut, naive_feasible, random_blocks, random_hypergraph, report};
use hgpart::coarsening::{CoarseningConfig, CoarseningMonitor, Decision, DynamicHypergraph};
use hgpart::fm::{fm_refine, FmConfig};
use hgpart::harness::stats::{rank_sum, signed_rank, simpson_auc};
use hgpart::harness::synth::{gen_synthetic, SyntheticSpec};
use hgpart::hypergraph::metrics::{cut_size, km1};
use hgpart::landscape::{fdc_fit_xy, scaled_distance};
use hgpart::memetic::{ea_run, mutation_ladder, repair, seed_population, EaConfig};
use hgpart::pool::PoolConfig;
use hgpart::rng::seeded;
use hgpart::{partition, DriverConfig, InitialPartitioner, Partition};
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn brute_force_optimality() {
    let start = Instant::now();
    let mut rng = seeded(2024);
    let (mut matched, mut below) = (0, 0);
    let instances = 50;
    for i in 0..instances {
        let n = rng.gen_range(8..=14);
        let m = rng.gen_range(n..=30);
        let hg = random_hypergraph(&mut rng, n, m, 4, 1);
        let optimum = brute_force_optimum(&hg, 0.1).expect("unit weights admit a balanced split");
        let cfg = DriverConfig {
            initial: InitialPartitioner::Ea(
                EaConfig { mu: 8, lambda: 16, seed_multiplier: 0, ..EaConfig::default() },
                PoolConfig::default(),
            ),
            budget: 2000,
            seed: i,
            ..DriverConfig::default()
        };
        let (part, r) = partition(&hg, &cfg).unwrap();
        assert_eq!(naive_cut(&hg, part.blocks()), r.final_cut);
        assert!(naive_feasible(&hg, part.blocks(), 0.1));
        if r.final_cut == optimum {
            matched += 1;
        }
        if r.final_cut < optimum {
            below += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = matched * 100 >= 95 * instances && below == 0 && secs < 60.0;
    report(
        "brute-force optimality",
        pass,
        &format!("{matched}/{instances} optimal, {below} below optimum, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn projection_invariance() {
    let mut rng = seeded(7);
    let mut mismatches = 0;
    let cases = 100;
    for _ in 0..cases {
        let n = rng.gen_range(6..40);
        let m = rng.gen_range(3..60);
        let hg = random_hypergraph(&mut rng, n, m, 5, 3);
        let mut d = DynamicHypergraph::from(&hg);
        let mut absorbed_into: Vec<u32> = (0..n as u32).collect();
        let steps = rng.gen_range(1..n);
        for _ in 0..steps {
            let active: Vec<u32> = d.active_vertices().collect();
            let pair: Vec<&u32> = active.choose_multiple(&mut rng, 2).collect();
            let (a, b) = (*pair[0], *pair[1]);
            d.contract(a, b).unwrap();
            for r in absorbed_into.iter_mut() {
                if *r == b {
                    *r = a;
                }
            }
        }
        let (coarse, map) = d.snapshot();
        let coarse_blocks = random_blocks(&mut rng, coarse.num_vertices(), 2);
        let mut local = vec![u32::MAX; n];
        for (i, &v) in map.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let fine_blocks: Vec<u32> = (0..n).map(|v| coarse_blocks[local[absorbed_into[v] as usize] as usize]).collect();
        let coarse_cut = cut_size(&coarse, &Partition::new(&coarse, coarse_blocks, 2).unwrap()).unwrap();
        if coarse_cut != naive_cut(&hg, &fine_blocks) {
            mismatches += 1;
        }
    }
    let pass = mismatches == 0;
    report("projection invariance", pass, &format!("{mismatches} mismatches in {cases} prefixes"));
    assert!(pass);
}

#[test]
fn uncontract_inverse() {
    let mut rng = seeded(11);
    let mut failures = 0;
    let cases = 1000;
    for _ in 0..cases {
        let n = rng.gen_range(2..25);
        let m = rng.gen_range(0..40);
        let hg = random_hypergraph(&mut rng, n, m, 6, 4);
        let mut d = DynamicHypergraph::from(&hg);
        let mut stack = Vec::new();
        let mut states = vec![d.clone()];
        for _ in 0..rng.gen_range(1..n) {
            let active: Vec<u32> = d.active_vertices().collect();
            let pair: Vec<&u32> = active.choose_multiple(&mut rng, 2).collect();
            stack.push(d.contract(*pair[0], *pair[1]).unwrap());
            states.push(d.clone());
        }
        states.pop();
        while let Some(m) = stack.pop() {
            d.uncontract(&m).unwrap();
            if Some(&d) != states.last() {
                failures += 1;
                break;
            }
            states.pop();
        }
        if d != DynamicHypergraph::from(&hg) || d.snapshot().0 != hg {
            failures += 1;
        }
    }
    let pass = failures == 0;
    report("uncontract inverse", pass, &format!("{failures} failures in {cases} cases"));
    assert!(pass);
}

#[test]
fn fm_monotonicity_and_local_optimality() {
    let mut rng = seeded(13);
    let (mut increased, mut not_local) = (0, 0);
    let cases = 500;
    let cfg = FmConfig::default();
    for _ in 0..cases {
        let n = rng.gen_range(2..40);
        let m = rng.gen_range(0..80);
        let hg = random_hypergraph(&mut rng, n, m, 5, 3);
        let mut part = Partition::new(&hg, random_blocks(&mut rng, n, 2), 2).unwrap();
        repair(&hg, &mut part, cfg.epsilon, &mut rng);
        let before = naive_cut(&hg, part.blocks());
        let was_feasible = naive_feasible(&hg, part.blocks(), cfg.epsilon);
        fm_refine(&hg, &mut part, &cfg, &mut rng).unwrap();
        let after = naive_cut(&hg, part.blocks());
        if was_feasible && after > before {
            increased += 1;
        }
        if improving_single_move(&hg, part.blocks(), cfg.epsilon).is_some() {
            not_local += 1;
        }
    }
    let pass = increased == 0 && not_local == 0;
    report(
        "FM monotonicity and local optimality",
        pass,
        &format!("{increased} cut increases, {not_local} non-local outputs in {cases} pairs"),
    );
    assert!(pass);
}

#[test]
fn km1_equals_cut_for_bipartitions() {
    let mut rng = seeded(17);
    let cases = 500;
    let mut mismatches = 0;
    for _ in 0..cases {
        let n = rng.gen_range(1..50);
        let m = rng.gen_range(0..100);
        let hg = random_hypergraph(&mut rng, n, m, 8, 10);
        let p = Partition::new(&hg, random_blocks(&mut rng, n, 2), 2).unwrap();
        if km1(&hg, &p).unwrap() != cut_size(&hg, &p).unwrap() {
            mismatches += 1;
        }
    }
    let pass = mismatches == 0;
    report("k=2 metric identity", pass, &format!("{mismatches} mismatches in {cases} pairs"));
    assert!(pass);
}

/// Squared Pearson correlation of `(index, value)`, computed directly.
fn r_squared_oracle(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    }
}

#[test]
fn adaptive_stop_calibration() {
    let start = Instant::now();
    let knee = 100;
    let mut curve: Vec<usize> = (0..knee).map(|i| 1_000_000 - 1000 * i).collect();
    let last = *curve.last().unwrap() as f64;
    curve.extend((1..=60).map(|j| (last * 0.7f64.powi(j)).round() as usize));

    let cfg = CoarseningConfig {
        sample_stride: 1,
        sample_window: 10,
        r_squared_threshold: 0.99,
        ..CoarseningConfig::default()
    };
    let run = || {
        let mut mon = CoarseningMonitor::new(&cfg);
        mon.activate();
        curve.iter().position(|&p| mon.step(p) == Decision::Stop)
    };
    let stop = run();
    let oracle = (10..=curve.len()).find(|&end| {
        let w: Vec<f64> = curve[end - 10..end].iter().map(|&p| p as f64).collect();
        r_squared_oracle(&w) < 0.99
    });
    let secs = start.elapsed().as_secs_f64();
    let within = stop.is_some_and(|s| s >= knee && s < knee + 10);
    let pass = within && stop.map(|s| s + 1) == oracle && run() == stop && secs < 1.0;
    report(
        "adaptive stop calibration",
        pass,
        &format!("stopped at sample {stop:?} (knee at {knee}, oracle end {oracle:?}), {secs:.4}s"),
    );
    assert!(pass);
}

#[test]
fn planted_recovery() {
    let start = Instant::now();
    let inst = gen_synthetic(&SyntheticSpec { seed: 1, ..SyntheticSpec::default() }).unwrap();
    assert_eq!(inst.hypergraph.num_vertices(), 1000);
    assert_eq!(inst.planted_cut, 10);
    let runs = 20;
    let mut hits = 0;
    let mut cuts = Vec::new();
    let mut adaptive_stops = 0;
    for seed in 0..runs {
        let cfg = DriverConfig {
            coarsening: CoarseningConfig {
                adaptive: true,
                sample_stride: 5,
                sample_window: 20,
                ..CoarseningConfig::default()
            },
            initial: InitialPartitioner::Ea(
                EaConfig { mu: 20, lambda: 40, seed_multiplier: 0, ..EaConfig::default() },
                PoolConfig::default(),
            ),
            budget: 500,
            seed,
            ..DriverConfig::default()
        };
        let (part, r) = partition(&inst.hypergraph, &cfg).unwrap();
        assert!(part.is_feasible(&inst.hypergraph, 0.1));
        if r.stop_reason == hgpart::coarsening::StopReason::Adaptive {
            adaptive_stops += 1;
        }
        cuts.push(r.final_cut);
        if r.final_cut <= inst.planted_cut {
            hits += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = hits * 100 >= 80 * runs && secs < 300.0;
    report(
        "planted recovery",
        pass,
        &format!("{hits}/{runs} runs with cut <= 10 (cuts {cuts:?}, {adaptive_stops} adaptive stops), {secs:.1}s"),
    );
    assert!(pass);
}

/// Two-sided p of the rank-sum statistic by relabelling every subset of
/// the pooled sample; ranks are doubled to stay integral.
fn rank_sum_oracle(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let rank2 = |i: usize| -> u64 {
        let less = pooled.iter().filter(|&&x| x < pooled[i]).count() as u64;
        let equal = pooled.iter().filter(|&&x| x == pooled[i]).count() as u64;
        2 * less + equal + 1
    };
    let ranks: Vec<u64> = (0..n).map(rank2).collect();
    let observed: u64 = ranks[..a.len()].iter().sum();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let s: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        total += 1;
        le += u64::from(s <= observed);
        ge += u64::from(s >= observed);
    }
    (2.0 * (le as f64 / total as f64).min(ge as f64 / total as f64)).min(1.0)
}

fn signed_rank_oracle(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    let rank2 = |i: usize| -> u64 {
        let less = d.iter().filter(|x| x.abs() < d[i].abs()).count() as u64;
        let equal = d.iter().filter(|x| x.abs() == d[i].abs()).count() as u64;
        2 * less + equal + 1
    };
    let ranks: Vec<u64> = (0..n).map(rank2).collect();
    let observed: u64 = (0..n).filter(|&i| d[i] > 0.0).map(|i| ranks[i]).sum();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        let s: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        le += u64::from(s <= observed);
        ge += u64::from(s >= observed);
    }
    let total = (1u64 << n) as f64;
    (2.0 * (le as f64 / total).min(ge as f64 / total)).min(1.0)
}

#[test]
fn statistics_oracles() {
    let mut rng = seeded(19);
    let mut worst_simpson: f64 = 0.0;
    for _ in 0..500 {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let points = rng.gen_range(3..40);
        let (lo, h) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.01..0.1));
        let xs: Vec<f64> = (0..points).map(|i| lo + h * i as f64).collect();
        let f = |x: f64| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x;
        let antiderivative = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let exact = antiderivative(xs[points - 1]) - antiderivative(xs[0]);
        worst_simpson = worst_simpson.max((simpson_auc(&xs, &ys).unwrap() - exact).abs());
    }

    let mut mismatches = 0;
    let mut cases = 0;
    for n in 1..10 {
        for m in 1..=(10 - n) {
            for _ in 0..20 {
                let a: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..6))).collect();
                let b: Vec<f64> = (0..m).map(|_| f64::from(rng.gen_range(0..6))).collect();
                let r = rank_sum(&a, &b).unwrap();
                cases += 1;
                if !r.exact || r.p_value != rank_sum_oracle(&a, &b) {
                    mismatches += 1;
                }
            }
        }
    }
    for n in 1..=10 {
        for _ in 0..40 {
            let a: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..6))).collect();
            let b: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..6))).collect();
            let r = signed_rank(&a, &b).unwrap();
            cases += 1;
            if !r.exact || r.p_value != signed_rank_oracle(&a, &b) {
                mismatches += 1;
            }
        }
    }
    let pass = worst_simpson <= 1e-12 && mismatches == 0;
    report(
        "statistics oracles",
        pass,
        &format!("max Simpson error {worst_simpson:.2e} on cubics; {mismatches}/{cases} Wilcoxon p mismatches"),
    );
    assert!(pass);
}

#[test]
fn ea_bookkeeping() {
    let mut rng = seeded(23);
    let hg = random_hypergraph(&mut rng, 30, 60, 4, 1);
    let ladder = mutation_ladder(hg.num_vertices()).unwrap();
    let mut problems = Vec::new();

    // 100 x 100 seeding consumes exactly 10000 pool evaluations
    let big = EaConfig { mu: 100, lambda: 50, seed_multiplier: 100, ..EaConfig::default() };
    let seeding = seed_population(&hg, &big, &PoolConfig::default(), &mut seeded(1)).unwrap();
    if seeding.evaluations() != 10000 || seeding.population.len() != 100 {
        problems.push(format!("seeding used {} evaluations", seeding.evaluations()));
    }
    if seeding.log.iter().any(|r| r.source == "ea") {
        problems.push("seeding log contains offspring".into());
    }

    let cases = [
        (EaConfig { mu: 8, lambda: 16, seed_multiplier: 0, ..EaConfig::default() }, 200),
        (EaConfig { mu: 5, lambda: 7, seed_multiplier: 4, ..EaConfig::default() }, 100),
        (EaConfig { mu: 10, lambda: 30, seed_multiplier: 3, ..EaConfig::default() }, 95),
    ];
    for (cfg, budget) in cases {
        let out = ea_run(&hg, &cfg, &PoolConfig::default(), budget, &mut seeded(budget as u64)).unwrap();
        let seeding = cfg.seeding_evaluations();
        let offspring = budget - seeding;
        if out.evaluations() != budget || out.seeding_evaluations != seeding {
            problems.push(format!("budget {budget}: {} evaluations", out.evaluations()));
        }
        if out.generations != offspring.div_ceil(cfg.lambda) {
            problems.push(format!("budget {budget}: {} generations", out.generations));
        }
        if out.log[seeding..].iter().any(|r| r.source != "ea") || out.log[..seeding].iter().any(|r| r.source == "ea") {
            problems.push(format!("budget {budget}: log sources out of order"));
        }
        let rates = out.log.iter().filter_map(|r| r.mutation_rate).chain(out.final_population.iter().map(|i| i.mutation_rate));
        if rates.clone().any(|r| !ladder.contains(&r)) {
            problems.push(format!("budget {budget}: rate outside ladder"));
        }
        if out.log.windows(2).any(|w| w[1].best_so_far > w[0].best_so_far)
            || out.generation_best.windows(2).any(|w| w[1] > w[0])
        {
            problems.push(format!("budget {budget}: best-so-far increased"));
        }
        let min_logged = out.log.iter().filter(|r| r.feasible).map(|r| r.cut).min().unwrap();
        if out.best.cut() != min_logged || out.log.last().unwrap().best_so_far != min_logged {
            problems.push(format!("budget {budget}: best is not the logged minimum"));
        }
        if out.log[seeding..].iter().any(|r| !r.feasible) {
            problems.push(format!("budget {budget}: infeasible offspring"));
        }
    }
    let pass = problems.is_empty();
    report("EA bookkeeping", pass, &if pass { "10000 seeding evaluations; counts, ladder and elitism hold".to_owned() } else { problems.join("; ") });
    assert!(pass);
}

#[test]
fn fdc_correctness() {
    let mut rng = seeded(29);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let c = rng.gen_range(0.1..50.0);
        let n = rng.gen_range(2..200);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x).collect();
        let m = fdc_fit_xy(&xs, &ys).unwrap();
        worst = worst.max((m.slope - c).abs()).max((m.r_squared - 1.0).abs());
    }
    let mut asymmetric = 0;
    let pairs = 1000;
    for _ in 0..pairs {
        let n = rng.gen_range(1..100);
        let l = random_blocks(&mut rng, n, 2);
        let g = random_blocks(&mut rng, n, 2);
        let lc: Vec<u32> = l.iter().map(|b| 1 - b).collect();
        if scaled_distance(&l, &g).unwrap() != scaled_distance(&lc, &g).unwrap() {
            asymmetric += 1;
        }
    }
    let pass = worst <= 1e-12 && asymmetric == 0;
    report(
        "FDC correctness",
        pass,
        &format!("max fit error {worst:.2e}; {asymmetric}/{pairs} asymmetric distance pairs"),
    );
    assert!(pass);
}

