//! Seeded randomized self-checks: chain monotonicity, chain/oracle agreement
//! and bounds sharpness.
//!
//! Instances are drawn sequentially from one seeded stream and only then
//! evaluated (possibly in parallel), so reports are identical across runs and
//! execution modes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{bounds_with, IntervalObservation};
use crate::chain::{generate_chain, verify_monotone};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::grho::{GrhoConfig, WeightConvention};
use crate::oracle::{self, brute_force_extremes_with, brute_force_feasible_extremes_with, definition_z};
use crate::survival::{Group, Status};

/// Agreement tolerance between the engine and the oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest group size drawn.
    pub max_n: usize,
    /// Random instances per suite.
    pub cases: usize,
    pub rhos: Vec<f64>,
    pub convention: WeightConvention,
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            max_n: 6,
            cases: 200,
            rhos: vec![0.0, 0.5, 1.0, 2.0],
            convention: WeightConvention::default(),
            tolerance: crate::chain::DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Random status list of length `n` with at least one failure.
pub fn random_statuses<R: Rng>(rng: &mut R, n: usize) -> Vec<Status> {
    let mut statuses: Vec<Status> = (0..n)
        .map(|_| {
            if rng.random_bool(0.6) {
                Status::Failure
            } else {
                Status::Censored
            }
        })
        .collect();
    if !statuses.iter().any(|s| s.is_failure()) {
        let k = rng.random_range(0..n);
        statuses[k] = Status::Failure;
    }
    statuses
}

/// Random valid intervals on a coarse integer grid, so shared endpoints and
/// point intervals occur often.
pub fn random_intervals<R: Rng>(rng: &mut R, n: usize, group: Group) -> Vec<IntervalObservation> {
    let mut lowers: Vec<u32> = (0..n).map(|_| rng.random_range(0..=20)).collect();
    lowers.sort_unstable();
    let mut prev_upper = 0;
    let statuses = random_statuses(rng, n);
    lowers
        .into_iter()
        .zip(statuses)
        .map(|(lower, status)| {
            let upper = (lower + rng.random_range(0..=8)).max(prev_upper);
            prev_upper = upper;
            IntervalObservation::new(lower as f64, upper as f64, status, group)
        })
        .collect()
}

fn has_forced_tie(g0: &[IntervalObservation], g1: &[IntervalObservation]) -> bool {
    g0.iter().any(|x| {
        g1.iter()
            .any(|y| x.lower == x.upper && y.lower == y.upper && x.lower == y.lower)
    })
}

fn configs(cfg: &VerifyConfig) -> Result<Vec<GrhoConfig>> {
    cfg.rhos
        .iter()
        .map(|&rho| GrhoConfig::new(rho).map(|c| c.with_convention(cfg.convention)))
        .collect()
}

struct Outcome {
    checks: u64,
    failures: Vec<String>,
}

fn check_chain_instance(
    id: usize,
    s0: &[Status],
    s1: &[Status],
    configs: &[GrhoConfig],
    tol: f64,
    with_oracle: bool,
) -> Outcome {
    let mut out = Outcome {
        checks: 0,
        failures: Vec::new(),
    };
    let tag = |cfg: &GrhoConfig| format!("instance {id} (n0={}, n1={}, rho={})", s0.len(), s1.len(), cfg.rho());
    for cfg in configs {
        let chain = match generate_chain(s0, s1, cfg) {
            Ok(chain) => chain,
            Err(err) => {
                out.failures.push(format!("{}: {err}", tag(cfg)));
                continue;
            }
        };
        if !with_oracle {
            out.checks += chain.steps.len() as u64;
            if let Err(err) = verify_monotone(&chain.steps, tol) {
                out.failures.push(format!("{}: {err}", tag(cfg)));
            }
            continue;
        }

        match brute_force_extremes_with(s0, s1, cfg, Execution::Sequential) {
            Ok(ex) => {
                out.checks += 2;
                let z = chain.z_values();
                let (first, last) = (z[0], z[z.len() - 1]);
                if (first - ex.z_min).abs() > ORACLE_TOLERANCE || (last - ex.z_max).abs() > ORACLE_TOLERANCE {
                    out.failures.push(format!(
                        "{}: chain endpoints [{first}, {last}] vs oracle [{}, {}]",
                        tag(cfg),
                        ex.z_min,
                        ex.z_max
                    ));
                }
            }
            Err(err) => out.failures.push(format!("{}: oracle {err}", tag(cfg))),
        }

        let Ok(all) = oracle::enumerate_interleavings(s0.len(), s1.len()) else {
            continue;
        };
        for labels in all {
            let Ok(arr) = crate::chain::Arrangement::from_labels(&labels, s0, s1) else {
                continue;
            };
            let seq: Vec<(Group, Status)> = arr.members().iter().map(|m| (m.group, m.status)).collect();
            let engine = arr.evaluate(cfg).and_then(|r| r.z()).ok();
            let reference = definition_z(&seq, cfg);
            out.checks += 1;
            let agree = match (engine, reference) {
                (Some(a), Some(b)) => (a - b).abs() <= ORACLE_TOLERANCE,
                (None, None) => true,
                _ => false,
            };
            if !agree {
                out.failures.push(format!(
                    "{}: {arr}: engine {engine:?} vs oracle {reference:?}",
                    tag(cfg)
                ));
            }
        }
    }
    out
}

fn check_bounds_instance(
    id: usize,
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
    configs: &[GrhoConfig],
) -> Outcome {
    let mut out = Outcome {
        checks: 0,
        failures: Vec::new(),
    };
    for cfg in configs {
        let tag = format!(
            "bounds instance {id} (n0={}, n1={}, rho={})",
            g0.len(),
            g1.len(),
            cfg.rho()
        );
        let fast = bounds_with(g0, g1, cfg, Execution::Sequential);
        let slow = brute_force_feasible_extremes_with(g0, g1, cfg, Execution::Sequential);
        out.checks += 1;
        match (fast, slow) {
            (Ok(b), Ok(ex)) => {
                if (b.z_min - ex.z_min).abs() > ORACLE_TOLERANCE || (b.z_max - ex.z_max).abs() > ORACLE_TOLERANCE {
                    out.failures.push(format!(
                        "{tag}: bounds [{}, {}] vs oracle [{}, {}]",
                        b.z_min, b.z_max, ex.z_min, ex.z_max
                    ));
                }
            }
            (Err(err), _) | (_, Err(err)) => out.failures.push(format!("{tag}: {err}")),
        }
    }
    out
}

fn collect(name: &'static str, instances: usize, outcomes: Vec<Outcome>) -> SuiteReport {
    let mut report = SuiteReport {
        name,
        instances,
        ..Default::default()
    };
    for o in outcomes {
        report.checks += o.checks;
        report.failures.extend(o.failures);
    }
    report
}

pub fn run(cfg: &VerifyConfig, exec: Execution) -> Result<VerifyReport> {
    if cfg.max_n == 0 || cfg.cases == 0 {
        return Err(Error::Input("max-n and cases must be positive".into()));
    }
    if cfg.tolerance.is_nan() || cfg.tolerance <= 0.0 {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    if 2 * cfg.max_n > oracle::DEFAULT_CAP {
        return Err(Error::CapExceeded {
            total: 2 * cfg.max_n,
            cap: oracle::DEFAULT_CAP,
        });
    }
    let configs = configs(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let chain_cases: Vec<(usize, Vec<Status>, Vec<Status>)> = (0..cfg.cases)
        .map(|id| {
            let n0 = rng.random_range(1..=cfg.max_n);
            let n1 = rng.random_range(1..=cfg.max_n);
            (id, random_statuses(&mut rng, n0), random_statuses(&mut rng, n1))
        })
        .collect();

    // pooled size stays small enough for exhaustive feasible enumeration
    let pooled_cap = (2 * cfg.max_n).min(10);
    let mut bounds_cases = Vec::with_capacity(cfg.cases);
    while bounds_cases.len() < cfg.cases {
        let n0 = rng.random_range(1..pooled_cap);
        let n1 = rng.random_range(1..=pooled_cap - n0);
        let g0 = random_intervals(&mut rng, n0, Group::G0);
        let g1 = random_intervals(&mut rng, n1, Group::G1);
        if !has_forced_tie(&g0, &g1) {
            bounds_cases.push((bounds_cases.len(), g0, g1));
        }
    }

    let monotone = exec::map(exec, &chain_cases, |(id, s0, s1)| {
        check_chain_instance(*id, s0, s1, &configs, cfg.tolerance, false)
    });
    let agreement = exec::map(exec, &chain_cases, |(id, s0, s1)| {
        check_chain_instance(*id, s0, s1, &configs, cfg.tolerance, true)
    });
    let sharp = exec::map(exec, &bounds_cases, |(id, g0, g1)| {
        check_bounds_instance(*id, g0, g1, &configs)
    });

    Ok(VerifyReport {
        seed: cfg.seed,
        suites: vec![
            collect("monotonicity", chain_cases.len(), monotone),
            collect("oracle-agreement", chain_cases.len(), agreement),
            collect("bounds-sharpness", bounds_cases.len(), sharp),
        ],
    })
}
