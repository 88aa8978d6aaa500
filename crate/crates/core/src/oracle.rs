//! Exhaustive reference for the chain and bounds machinery.
//!
//! Everything here recomputes risk sets, the Kaplan-Meier weight and the
//! statistic directly from the pooled sequence, without touching
//! [`crate::survival`] or [`crate::grho`], so a bug in one path cannot hide in
//! the other.

use crate::bounds::{validate_intervals, IntervalObservation};
use crate::chain::Arrangement;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::grho::{GrhoConfig, WeightConvention};
use crate::survival::{Group, Status};

/// Largest pooled sample the oracle will enumerate (C(20, 10) = 184,756 sequences).
pub const DEFAULT_CAP: usize = 20;

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// All group-label sequences with `n0` G0 and `n1` G1 entries, in
/// lexicographic order (G0 before G1).
#[derive(Debug, Clone)]
pub struct Interleavings {
    next: Option<Vec<Group>>,
    total: u64,
}

impl Interleavings {
    pub fn new(n0: usize, n1: usize) -> Result<Self> {
        Self::with_cap(n0, n1, DEFAULT_CAP)
    }

    pub fn with_cap(n0: usize, n1: usize, cap: usize) -> Result<Self> {
        check_cap(n0 + n1, cap)?;
        let first = std::iter::repeat_n(Group::G0, n0)
            .chain(std::iter::repeat_n(Group::G1, n1))
            .collect();
        Ok(Self {
            next: Some(first),
            total: binomial(n0 + n1, n0),
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn check_cap(total: usize, cap: usize) -> Result<()> {
    if total > cap {
        Err(Error::CapExceeded { total, cap })
    } else {
        Ok(())
    }
}

impl Iterator for Interleavings {
    type Item = Vec<Group>;

    fn next(&mut self) -> Option<Vec<Group>> {
        let current = self.next.take()?;
        // rightmost (G0, G1) pair: bump it, then reset the suffix to its smallest form
        if let Some(i) = (0..current.len().saturating_sub(1))
            .rev()
            .find(|&i| current[i] == Group::G0 && current[i + 1] == Group::G1)
        {
            let mut succ = current.clone();
            succ[i] = Group::G1;
            let ones = succ[i + 1..].iter().filter(|&&g| g == Group::G1).count() - 1;
            let zeros = succ.len() - (i + 1) - ones;
            for (k, slot) in succ[i + 1..].iter_mut().enumerate() {
                *slot = if k < zeros { Group::G0 } else { Group::G1 };
            }
            self.next = Some(succ);
        }
        Some(current)
    }
}

pub fn enumerate_interleavings(n0: usize, n1: usize) -> Result<Interleavings> {
    Interleavings::new(n0, n1)
}

/// The `rank`-th sequence of [`Interleavings`], without walking the others.
pub fn unrank(mut rank: u64, n0: usize, n1: usize) -> Vec<Group> {
    let (mut r0, mut r1) = (n0, n1);
    let mut labels = Vec::with_capacity(n0 + n1);
    while r0 + r1 > 0 {
        let with_g0 = if r0 == 0 { 0 } else { binomial(r0 + r1 - 1, r0 - 1) };
        if rank < with_g0 {
            labels.push(Group::G0);
            r0 -= 1;
        } else {
            rank -= with_g0;
            labels.push(Group::G1);
            r1 -= 1;
        }
    }
    labels
}

/// Z for the pooled sequence at rank times, straight from the definitions.
/// `None` when the variance is zero.
pub fn definition_z(seq: &[(Group, Status)], cfg: &GrhoConfig) -> Option<f64> {
    let n = seq.len();
    let at_risk = |k: usize, group: Group| seq[k..].iter().filter(|(g, _)| *g == group).count() as f64;
    // product-limit over failures strictly before position k (inclusive when `through`)
    let km = |k: usize, through: bool| -> f64 {
        let end = if through { k + 1 } else { k };
        seq[..end]
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| *s == Status::Failure)
            .map(|(l, _)| 1.0 - 1.0 / (n - l) as f64)
            .product()
    };

    let (mut o, mut e, mut v) = (0.0, 0.0, 0.0);
    for (k, &(group, status)) in seq.iter().enumerate() {
        if status != Status::Failure {
            continue;
        }
        let (y0, y1) = (at_risk(k, Group::G0), at_risk(k, Group::G1));
        let y = y0 + y1;
        let s = match cfg.convention() {
            WeightConvention::LeftLimit => km(k, false),
            WeightConvention::RightContinuous => km(k, true),
        };
        let w = s.powf(cfg.rho());
        if group == Group::G1 {
            o += w;
        }
        e += w * y1 / y;
        v += w * w * y0 * y1 / (y * y);
    }
    (v > 0.0).then(|| (o - e) / v.sqrt())
}

fn pooled(labels: &[Group], statuses_g0: &[Status], statuses_g1: &[Status]) -> Vec<(Group, Status)> {
    let mut next = [0usize; 2];
    labels
        .iter()
        .map(|&g| {
            let list = if g == Group::G0 { statuses_g0 } else { statuses_g1 };
            let s = list[next[g.index()]];
            next[g.index()] += 1;
            (g, s)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub z_min: f64,
    pub z_max: f64,
    pub arg_min: Arrangement,
    pub arg_max: Arrangement,
    /// Interleavings with a defined Z.
    pub evaluated: u64,
    /// Interleavings skipped because V = 0.
    pub degenerate: u64,
    /// Interleavings excluded as infeasible (interval variant only).
    pub infeasible: u64,
}

#[derive(Clone, Copy, Default)]
struct Acc {
    min: Option<(f64, u64)>,
    max: Option<(f64, u64)>,
    evaluated: u64,
    degenerate: u64,
    infeasible: u64,
}

// ties go to the lower rank so the witness does not depend on scheduling
fn pick(a: Option<(f64, u64)>, b: Option<(f64, u64)>, want_max: bool) -> Option<(f64, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(p), Some(q)) => {
            let ord = p.0.total_cmp(&q.0);
            let p_wins = if ord.is_eq() {
                p.1 < q.1
            } else {
                ord.is_gt() == want_max
            };
            Some(if p_wins { p } else { q })
        }
    }
}

impl Acc {
    fn merge(self, other: Acc) -> Acc {
        Acc {
            min: pick(self.min, other.min, false),
            max: pick(self.max, other.max, true),
            evaluated: self.evaluated + other.evaluated,
            degenerate: self.degenerate + other.degenerate,
            infeasible: self.infeasible + other.infeasible,
        }
    }
}

fn scan<F>(
    statuses_g0: &[Status],
    statuses_g1: &[Status],
    cfg: &GrhoConfig,
    exec: Execution,
    feasible: F,
) -> Result<Extremes>
where
    F: Fn(&[Group]) -> bool + Sync + Send,
{
    let (n0, n1) = (statuses_g0.len(), statuses_g1.len());
    if n0 == 0 {
        return Err(Error::EmptyGroup(Group::G0));
    }
    if n1 == 0 {
        return Err(Error::EmptyGroup(Group::G1));
    }
    check_cap(n0 + n1, DEFAULT_CAP)?;
    let total = binomial(n0 + n1, n0);

    let acc = exec::fold_range(
        exec,
        0..total as usize,
        Acc::default,
        |mut acc, rank| {
            let rank = rank as u64;
            let labels = unrank(rank, n0, n1);
            if !feasible(&labels) {
                acc.infeasible += 1;
                return acc;
            }
            match definition_z(&pooled(&labels, statuses_g0, statuses_g1), cfg) {
                Some(z) => {
                    acc.evaluated += 1;
                    acc.min = pick(acc.min, Some((z, rank)), false);
                    acc.max = pick(acc.max, Some((z, rank)), true);
                }
                None => acc.degenerate += 1,
            }
            acc
        },
        Acc::merge,
    );

    if acc.infeasible == total {
        return Err(Error::NoFeasible);
    }
    let (Some((z_min, min_rank)), Some((z_max, max_rank))) = (acc.min, acc.max) else {
        return Err(Error::AllDegenerate);
    };
    let witness = |rank| Arrangement::from_labels(&unrank(rank, n0, n1), statuses_g0, statuses_g1);
    Ok(Extremes {
        z_min,
        z_max,
        arg_min: witness(min_rank)?,
        arg_max: witness(max_rank)?,
        evaluated: acc.evaluated,
        degenerate: acc.degenerate,
        infeasible: acc.infeasible,
    })
}

/// Exact min and max of Z over every interleaving of the two groups.
pub fn brute_force_extremes(statuses_g0: &[Status], statuses_g1: &[Status], cfg: &GrhoConfig) -> Result<Extremes> {
    brute_force_extremes_with(statuses_g0, statuses_g1, cfg, Execution::default())
}

pub fn brute_force_extremes_with(
    statuses_g0: &[Status],
    statuses_g1: &[Status],
    cfg: &GrhoConfig,
    exec: Execution,
) -> Result<Extremes> {
    scan(statuses_g0, statuses_g1, cfg, exec, |_| true)
}

/// True when some assignment of values inside the intervals, non-decreasing
/// along `labels`, realizes that order.
pub fn is_feasible(labels: &[Group], g0: &[IntervalObservation], g1: &[IntervalObservation]) -> bool {
    let mut next = [0usize; 2];
    let mut max_lower = f64::NEG_INFINITY;
    for &g in labels {
        let list = if g == Group::G0 { g0 } else { g1 };
        let obs = &list[next[g.index()]];
        next[g.index()] += 1;
        max_lower = max_lower.max(obs.lower);
        // every earlier lower endpoint must fit below this upper endpoint
        if max_lower > obs.upper {
            return false;
        }
    }
    true
}

/// Exact min and max of Z over the interleavings consistent with the intervals.
pub fn brute_force_feasible_extremes(
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
    cfg: &GrhoConfig,
) -> Result<Extremes> {
    brute_force_feasible_extremes_with(g0, g1, cfg, Execution::default())
}

pub fn brute_force_feasible_extremes_with(
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
    cfg: &GrhoConfig,
    exec: Execution,
) -> Result<Extremes> {
    validate_intervals(g0, g1)?;
    let s0: Vec<Status> = g0.iter().map(|o| o.status).collect();
    let s1: Vec<Status> = g1.iter().map(|o| o.status).collect();
    scan(&s0, &s1, cfg, exec, |labels| is_feasible(labels, g0, g1))
}
