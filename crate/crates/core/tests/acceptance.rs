//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p grho-core --test acceptance -- --nocapture --test-threads=1`.

use std::time::{Duration, Instant};

use grho_core::bounds::{bounds, IntervalObservation};
use grho_core::chain::{generate_chain, Chain, Scenario};
use grho_core::exec;
use grho_core::grho::{components, GrhoConfig, WeightConvention};
use grho_core::oracle::{
    brute_force_extremes, brute_force_feasible_extremes, definition_z, enumerate_interleavings, is_feasible,
};
use grho_core::survival::{build_dataset, km_estimate, Dataset, Group, Observation, Status};
use grho_core::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Status::{Censored as C, Failure as F};

const G0_STATUSES: [Status; 5] = [F, C, F, F, C];
const G1_STATUSES: [Status; 5] = [F, F, C, F, C];
const G0_TIMES: [&str; 5] = ["1", "2", "3", "4", "5"];
const G1_TIMES: [&str; 5] = ["6", "7", "8", "9", "10"];

/// Worked example: pooled order of the ten observations and z at rho = 0.5.
const WORKED_EXAMPLE: [(&str, f64); 26] = [
    ("1 2⁺ 3 4 5⁺ 6 7 8⁺ 9 10⁺", -2.1901),
    ("1 2⁺ 3 4 6 5⁺ 7 8⁺ 9 10⁺", -1.8797),
    ("1 2⁺ 3 6 4 5⁺ 7 8⁺ 9 10⁺", -1.5791),
    ("1 2⁺ 6 3 4 5⁺ 7 8⁺ 9 10⁺", -1.3374),
    ("1 6 2⁺ 3 4 5⁺ 7 8⁺ 9 10⁺", -1.2602),
    ("6 1 2⁺ 3 4 5⁺ 7 8⁺ 9 10⁺", -1.0872),
    ("6 1 2⁺ 3 4 7 5⁺ 8⁺ 9 10⁺", -0.8729),
    ("6 1 2⁺ 3 7 4 5⁺ 8⁺ 9 10⁺", -0.6236),
    ("6 1 2⁺ 7 3 4 5⁺ 8⁺ 9 10⁺", -0.4107),
    ("6 1 7 2⁺ 3 4 5⁺ 8⁺ 9 10⁺", -0.3533),
    ("6 7 1 2⁺ 3 4 5⁺ 8⁺ 9 10⁺", -0.1873),
    ("6 7 1 2⁺ 3 4 8⁺ 5⁺ 9 10⁺", -0.1873),
    ("6 7 1 2⁺ 3 8⁺ 4 5⁺ 9 10⁺", -0.1096),
    ("6 7 1 2⁺ 8⁺ 3 4 5⁺ 9 10⁺", -0.0175),
    ("6 7 1 8⁺ 2⁺ 3 4 5⁺ 9 10⁺", -0.0175),
    ("6 7 8⁺ 1 2⁺ 3 4 5⁺ 9 10⁺", 0.0722),
    ("6 7 8⁺ 1 2⁺ 3 4 9 5⁺ 10⁺", 0.2798),
    ("6 7 8⁺ 1 2⁺ 3 9 4 5⁺ 10⁺", 0.5884),
    ("6 7 8⁺ 1 2⁺ 9 3 4 5⁺ 10⁺", 0.8718),
    ("6 7 8⁺ 1 9 2⁺ 3 4 5⁺ 10⁺", 0.9208),
    ("6 7 8⁺ 9 1 2⁺ 3 4 5⁺ 10⁺", 1.1602),
    ("6 7 8⁺ 9 1 2⁺ 3 4 10⁺ 5⁺", 1.1602),
    ("6 7 8⁺ 9 1 2⁺ 3 10⁺ 4 5⁺", 1.4627),
    ("6 7 8⁺ 9 1 2⁺ 10⁺ 3 4 5⁺", 1.7874),
    ("6 7 8⁺ 9 1 10⁺ 2⁺ 3 4 5⁺", 1.7874),
    ("6 7 8⁺ 9 10⁺ 1 2⁺ 3 4 5⁺", 2.0898),
];
const TABLE_TOLERANCE: f64 = 5e-4;

const MONOTONE_TOLERANCE: f64 = 1e-9;
const IDENTITY_TOLERANCE: f64 = 1e-12;
const ORACLE_TOLERANCE: f64 = 1e-10;

fn verdict(id: u32, name: &str, passed: bool, detail: String) {
    println!("[{}] AC{id} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "AC{id} {name} failed: {detail}");
}

fn rendered(chain: &Chain) -> Vec<String> {
    chain
        .arrangements()
        .map(|arr| {
            arr.render_with(|m| match m.group {
                Group::G0 => G0_TIMES[m.index].to_string(),
                Group::G1 => G1_TIMES[m.index].to_string(),
            })
            .join(" ")
        })
        .collect()
}

fn table_mismatches(chain: &Chain) -> usize {
    chain
        .z_values()
        .iter()
        .zip(WORKED_EXAMPLE.iter())
        .filter(|(z, (_, expected))| (*z - expected).abs() > TABLE_TOLERANCE)
        .count()
}

#[test]
fn ac1_worked_example_reproduction() {
    let start = Instant::now();
    let left = generate_chain(
        &G0_STATUSES,
        &G1_STATUSES,
        &GrhoConfig::new(0.5)
            .unwrap()
            .with_convention(WeightConvention::LeftLimit),
    )
    .unwrap();
    let right = generate_chain(
        &G0_STATUSES,
        &G1_STATUSES,
        &GrhoConfig::new(0.5)
            .unwrap()
            .with_convention(WeightConvention::RightContinuous),
    )
    .unwrap();
    let elapsed = start.elapsed();

    let order_matches = rendered(&left)
        .iter()
        .zip(WORKED_EXAMPLE.iter())
        .all(|(got, (expected, _))| got == expected);
    let (left_miss, right_miss) = (table_mismatches(&left), table_mismatches(&right));
    let default_is_left = GrhoConfig::new(0.5).unwrap().convention() == WeightConvention::LeftLimit;
    let max_err = left
        .z_values()
        .iter()
        .zip(WORKED_EXAMPLE.iter())
        .map(|(z, (_, e))| (z - e).abs())
        .fold(0.0, f64::max);

    verdict(
        1,
        "worked example reproduction",
        left.z_values().len() == 26
            && order_matches
            && left_miss == 0
            && right_miss > 0
            && default_is_left
            && elapsed < Duration::from_secs(1),
        format!(
            "left-limit misses {left_miss}/26 (max |err| {max_err:.2e}), right-continuous misses {right_miss}/26, \
             row order matches: {order_matches}, default left-limit: {default_is_left}, {elapsed:?}"
        ),
    );
}

#[test]
fn ac2_rho_sweep_monotone_and_s1_flat() {
    let mut all_ok = true;
    let mut notes = Vec::new();
    for k in 0..=10 {
        let rho = k as f64 / 10.0;
        let chain = generate_chain(&G0_STATUSES, &G1_STATUSES, &GrhoConfig::new(rho).unwrap()).unwrap();
        let z = chain.z_values();
        let monotone = z.windows(2).all(|w| w[1] >= w[0] - MONOTONE_TOLERANCE);
        // table rows (11,12), (14,15), (21,22), (24,25) are steps 11, 14, 21, 24
        let s1_steps: Vec<usize> = chain
            .steps
            .iter()
            .filter(|s| s.scenario() == Scenario::S1)
            .map(|s| s.index)
            .collect();
        let flat = [11usize, 14, 21, 24].iter().all(|&row| z[row - 1] == z[row]);
        let ok = monotone && flat && s1_steps == vec![11, 14, 21, 24];
        if !ok {
            notes.push(format!("rho={rho}: monotone={monotone} flat={flat} s1={s1_steps:?}"));
        }
        all_ok &= ok;
    }
    verdict(
        2,
        "rho sweep non-decreasing, S1 rows equal",
        all_ok,
        if notes.is_empty() {
            "11 values of rho, 26 rows each".to_string()
        } else {
            notes.join("; ")
        },
    );
}

/// Random status vector with at least one failure.
fn statuses(rng: &mut ChaCha8Rng, n: usize) -> Vec<Status> {
    loop {
        let s: Vec<Status> = (0..n).map(|_| if rng.random_bool(0.5) { F } else { C }).collect();
        if s.contains(&F) {
            return s;
        }
    }
}

/// Chain instances. Each group carries a failure, which keeps V > 0 for every
/// interleaving: at the first pooled failure both risk sets are nonempty.
fn chain_instances(count: usize, seed: u64) -> Vec<(Vec<Status>, Vec<Status>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n0 = rng.random_range(1..=6);
            let n1 = rng.random_range(1..=6);
            (statuses(&mut rng, n0), statuses(&mut rng, n1))
        })
        .collect()
}

const CHAIN_RHOS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

#[derive(Default)]
struct ChainTally {
    steps: usize,
    sandwich: usize,
    failures: Vec<String>,
}

#[test]
fn ac3_monotonicity_property_suite() {
    let start = Instant::now();
    let instances = chain_instances(1000, 3);
    let tallies = exec::map(Execution::default(), &instances, |(s0, s1)| {
        let mut t = ChainTally::default();
        for rho in CHAIN_RHOS {
            let chain = match generate_chain(s0, s1, &GrhoConfig::new(rho).unwrap()) {
                Ok(c) => c,
                Err(e) => {
                    t.failures.push(format!("{s0:?}/{s1:?} rho={rho}: {e}"));
                    continue;
                }
            };
            for step in &chain.steps {
                t.steps += 1;
                if step.z_before > step.z_after + MONOTONE_TOLERANCE {
                    t.failures
                        .push(format!("{s0:?}/{s1:?} rho={rho} step {}: decrease", step.index));
                }
                let d = step.sandwich();
                if d.applicable {
                    t.sandwich += 1;
                    let ok = d.d3 > d.d1
                        && d.d2 > d.d4
                        && (d.d2 - (d.d4 + d.z_increment)).abs() <= IDENTITY_TOLERANCE
                        && (d.d3 - (d.d1 + d.z_increment)).abs() <= IDENTITY_TOLERANCE;
                    if !ok {
                        t.failures
                            .push(format!("{s0:?}/{s1:?} rho={rho} step {}: sandwich {d:?}", step.index));
                    }
                }
            }
        }
        t
    });
    let elapsed = start.elapsed();
    let steps: usize = tallies.iter().map(|t| t.steps).sum();
    let sandwich: usize = tallies.iter().map(|t| t.sandwich).sum();
    let failures: Vec<&String> = tallies.iter().flat_map(|t| &t.failures).collect();
    verdict(
        3,
        "monotonicity theorem property suite",
        failures.is_empty() && elapsed < Duration::from_secs(30) && sandwich > 0,
        format!(
            "{} instances x {} rho, {steps} steps, {sandwich} sandwich checks, {} failures {:?}, {elapsed:?}",
            instances.len(),
            CHAIN_RHOS.len(),
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn ac4_oracle_equivalence() {
    let instances = chain_instances(1000, 3);
    let tallies = exec::map(Execution::default(), &instances, |(s0, s1)| {
        let mut failures = Vec::new();
        let mut compared = 0usize;
        for rho in CHAIN_RHOS {
            let cfg = GrhoConfig::new(rho).unwrap();
            let chain = generate_chain(s0, s1, &cfg).unwrap();
            let z = chain.z_values();
            let ex = brute_force_extremes(s0, s1, &cfg).unwrap();
            if (z[0] - ex.z_min).abs() > ORACLE_TOLERANCE || (z[z.len() - 1] - ex.z_max).abs() > ORACLE_TOLERANCE {
                failures.push(format!("{s0:?}/{s1:?} rho={rho}: endpoints differ from oracle"));
            }
            for labels in enumerate_interleavings(s0.len(), s1.len()).unwrap() {
                let arr = grho_core::chain::Arrangement::from_labels(&labels, s0, s1).unwrap();
                let seq: Vec<(Group, Status)> = arr.members().iter().map(|m| (m.group, m.status)).collect();
                let engine = arr.evaluate(&cfg).unwrap().z().unwrap();
                let reference = definition_z(&seq, &cfg).unwrap();
                compared += 1;
                if (engine - reference).abs() > ORACLE_TOLERANCE {
                    failures.push(format!("{arr} rho={rho}: {engine} vs {reference}"));
                }
            }
        }
        (compared, failures)
    });
    let compared: usize = tallies.iter().map(|t| t.0).sum();
    let failures: Vec<&String> = tallies.iter().flat_map(|t| &t.1).collect();
    verdict(
        4,
        "oracle equivalence",
        failures.is_empty(),
        format!(
            "{} instances x {} rho, {compared} interleavings compared, {} failures {:?}",
            instances.len(),
            CHAIN_RHOS.len(),
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

fn interval_group(rng: &mut ChaCha8Rng, n: usize, group: Group) -> Vec<IntervalObservation> {
    let mut lowers: Vec<f64> = (0..n).map(|_| rng.random_range(0..=15) as f64).collect();
    lowers.sort_by(f64::total_cmp);
    let st = statuses(rng, n);
    let mut prev = f64::NEG_INFINITY;
    lowers
        .into_iter()
        .zip(st)
        .map(|(lower, status)| {
            let upper = (lower + rng.random_range(0..=6) as f64).max(prev);
            prev = upper;
            IntervalObservation::new(lower, upper, status, group)
        })
        .collect()
}

fn point_tie(g0: &[IntervalObservation], g1: &[IntervalObservation]) -> bool {
    g0.iter().any(|x| {
        g1.iter()
            .any(|y| x.lower == x.upper && y.lower == y.upper && x.lower == y.lower)
    })
}

#[test]
fn ac5_bounds_sharpness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances = Vec::new();
    while instances.len() < 500 {
        let n0 = rng.random_range(1..=9);
        let n1 = rng.random_range(1..=10 - n0);
        let g0 = interval_group(&mut rng, n0, Group::G0);
        let g1 = interval_group(&mut rng, n1, Group::G1);
        if !point_tie(&g0, &g1) {
            instances.push((g0, g1));
        }
    }
    let results = exec::map(Execution::default(), &instances, |(g0, g1)| {
        let mut failures = Vec::new();
        for rho in [0.0, 0.5, 1.0] {
            let cfg = GrhoConfig::new(rho).unwrap();
            let fast = bounds(g0, g1, &cfg).unwrap();
            let exact = brute_force_feasible_extremes(g0, g1, &cfg).unwrap();
            let feasible = is_feasible(&fast.arg_min.labels(), g0, g1) && is_feasible(&fast.arg_max.labels(), g0, g1);
            if (fast.z_min - exact.z_min).abs() > ORACLE_TOLERANCE
                || (fast.z_max - exact.z_max).abs() > ORACLE_TOLERANCE
                || !feasible
            {
                failures.push(format!(
                    "{g0:?} {g1:?} rho={rho}: [{}, {}] vs [{}, {}], feasible witnesses {feasible}",
                    fast.z_min, fast.z_max, exact.z_min, exact.z_max
                ));
            }
        }
        failures
    });
    let elapsed = start.elapsed();
    let failures: Vec<&String> = results.iter().flatten().collect();
    verdict(
        5,
        "bounds sharpness",
        failures.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "{} interval instances x 3 rho, {} disagreements {:?}, {elapsed:?}",
            instances.len(),
            failures.len(),
            failures.iter().take(2).collect::<Vec<_>>()
        ),
    );
}

/// Random strict dataset with a failure in each group, times in (0, 5).
fn random_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    loop {
        let n = rng.random_range(2..=14);
        let obs: Vec<Observation> = (0..n)
            .map(|_| {
                let group = if rng.random_bool(0.5) { Group::G0 } else { Group::G1 };
                let status = if rng.random_bool(0.6) { F } else { C };
                Observation::new(rng.random_range(0.001..5.0), status, group)
            })
            .collect();
        let has_failure = |g| obs.iter().any(|o| o.group == g && o.status == F);
        if !has_failure(Group::G0) || !has_failure(Group::G1) {
            continue;
        }
        if let Ok(ds) = build_dataset(obs) {
            if ds.is_strict() {
                return ds;
            }
        }
    }
}

/// Unweighted log-rank straight from the observations.
fn plain_logrank(ds: &Dataset) -> (f64, f64, f64) {
    let obs = ds.observations();
    let (mut o, mut e, mut v) = (0.0, 0.0, 0.0);
    for fail in obs.iter().filter(|x| x.status == F) {
        let y0 = obs
            .iter()
            .filter(|x| x.group == Group::G0 && x.time >= fail.time)
            .count() as f64;
        let y1 = obs
            .iter()
            .filter(|x| x.group == Group::G1 && x.time >= fail.time)
            .count() as f64;
        let y = y0 + y1;
        if fail.group == Group::G1 {
            o += 1.0;
        }
        e += y1 / y;
        v += y0 * y1 / (y * y);
    }
    (o, e, v)
}

fn transformed(ds: &Dataset, f: impl Fn(f64) -> f64) -> Dataset {
    build_dataset(
        ds.observations()
            .iter()
            .map(|o| Observation::new(f(o.time), o.status, o.group)),
    )
    .unwrap()
}

#[test]
fn ac6_analytic_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let zero = GrhoConfig::new(0.0).unwrap();
    for i in 0..100 {
        let ds = random_dataset(&mut rng);
        let res = components(&ds, &zero).unwrap();
        let (o, e, v) = plain_logrank(&ds);
        if (res.o - o).abs() > 1e-12 || (res.e - e).abs() > 1e-12 || (res.v - v).abs() > 1e-12 {
            failures.push(format!("instance {i}: rho=0 differs from plain log-rank"));
        }

        for rho in [0.0, 0.5, 1.0, 2.0] {
            let cfg = GrhoConfig::new(rho).unwrap();
            let z = components(&ds, &cfg).unwrap().z().unwrap();

            let swapped = build_dataset(
                ds.observations()
                    .iter()
                    .map(|o| Observation::new(o.time, o.status, o.group.other())),
            )
            .unwrap();
            let z_swapped = components(&swapped, &cfg).unwrap().z().unwrap();
            if (z + z_swapped).abs() > 1e-12 {
                failures.push(format!("instance {i} rho={rho}: relabel gives {z_swapped} for {z}"));
            }

            for (name, f) in [
                ("t^3+7", (|t: f64| t.powi(3) + 7.0) as fn(f64) -> f64),
                ("exp", f64::exp),
            ] {
                let moved = transformed(&ds, f);
                let z_moved = components(&moved, &cfg).unwrap().z().unwrap();
                if z_moved != z {
                    failures.push(format!("instance {i} rho={rho}: {name} changes z {z} -> {z_moved}"));
                }
            }
        }

        // no censoring: KM equals the empirical survival function exactly
        let uncensored = build_dataset(ds.observations().iter().map(|o| Observation::new(o.time, F, o.group))).unwrap();
        let n = uncensored.len();
        let curve = km_estimate(&uncensored).unwrap();
        for (j, step) in curve.steps().iter().enumerate() {
            let empirical = (n - j - 1) as f64 / n as f64;
            if step.survival != empirical {
                failures.push(format!("instance {i}: KM step {j} = {} vs {empirical}", step.survival));
            }
        }
    }
    verdict(
        6,
        "analytic invariants",
        failures.is_empty(),
        format!(
            "100 instances: rho=0 reduction, relabel antisymmetry, t^3+7 and exp invariance, uncensored KM; {} failures {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn ac7_chain_count() {
    let cfg = GrhoConfig::default();
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n0 in 1..=6 {
        for n1 in 1..=6 {
            let (s0, s1) = (statuses(&mut rng, n0), statuses(&mut rng, n1));
            let chain = generate_chain(&s0, &s1, &cfg).unwrap();
            ok &= chain.steps.len() == n0 * n1;
            ok &= chain.last().labels().iter().take(n1).all(|&g| g == Group::G1);
        }
    }
    let three = generate_chain(&[F, F, F], &[F, F, F], &cfg).unwrap().steps.len();
    verdict(
        7,
        "chain count",
        ok && three == 9,
        format!("n0*n1 steps for all n0, n1 in 1..=6; 3x3 gives {three}"),
    );
}
