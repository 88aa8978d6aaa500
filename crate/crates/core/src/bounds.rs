//! Bounds on Z when observations are only known to lie in intervals.
//!
//! Each group's internal order is known; only the interleaving between the
//! groups is uncertain. A G0 member must precede a G1 member only when its
//! interval ends strictly before the other begins (and vice versa); closed
//! intervals that share an endpoint may be ordered either way.
//!
//! Moving a G1 member ahead of an adjacent G0 member never lowers Z, so the
//! maximum sits at the feasible interleaving with every permissible G1-first
//! pair inverted, and the minimum at the one with none. Both are found by a
//! single merge on interval endpoints.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::chain::Arrangement;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::grho::GrhoConfig;
use crate::survival::{Group, Status};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalObservation {
    pub lower: f64,
    pub upper: f64,
    pub status: Status,
    pub group: Group,
}

impl IntervalObservation {
    pub fn new(lower: f64, upper: f64, status: Status, group: Group) -> Self {
        Self {
            lower,
            upper,
            status,
            group,
        }
    }

    /// A precisely known value.
    pub fn point(value: f64, status: Status, group: Group) -> Self {
        Self::new(value, value, status, group)
    }

    fn is_point(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsResult {
    pub rho: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub arg_min: Arrangement,
    pub arg_max: Arrangement,
}

fn validate_group(members: &[IntervalObservation], group: Group) -> Result<()> {
    if members.is_empty() {
        return Err(Error::EmptyGroup(group));
    }
    for (index, obs) in members.iter().enumerate() {
        if obs.group != group {
            return Err(Error::Input(format!(
                "interval {index} is labelled {} but listed under {group}",
                obs.group
            )));
        }
        if !obs.lower.is_finite() || !obs.upper.is_finite() || obs.lower > obs.upper {
            return Err(Error::InvalidInterval { group, index });
        }
    }
    for (i, pair) in members.windows(2).enumerate() {
        if pair[1].lower < pair[0].lower || pair[1].upper < pair[0].upper {
            return Err(Error::InconsistentWithinGroupOrder {
                group,
                first: i,
                second: i + 1,
            });
        }
    }
    Ok(())
}

/// Each group's list must be in its known order with non-decreasing lower and
/// upper endpoints.
pub fn validate_intervals(g0: &[IntervalObservation], g1: &[IntervalObservation]) -> Result<()> {
    validate_group(g0, Group::G0)?;
    validate_group(g1, Group::G1)
}

fn statuses(members: &[IntervalObservation]) -> Vec<Status> {
    members.iter().map(|m| m.status).collect()
}

/// Merges the two groups by `key`, taking from G1 on ties when `g1_first`.
fn merge_by<K0, K1>(
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
    key0: K0,
    key1: K1,
    g1_first: bool,
) -> Vec<Group>
where
    K0: Fn(&IntervalObservation) -> f64,
    K1: Fn(&IntervalObservation) -> f64,
{
    let (mut i, mut j) = (0, 0);
    let mut labels = Vec::with_capacity(g0.len() + g1.len());
    while i < g0.len() || j < g1.len() {
        let take_g1 = if i == g0.len() {
            true
        } else if j == g1.len() {
            false
        } else {
            let (a, b) = (key0(&g0[i]), key1(&g1[j]));
            if g1_first {
                b <= a
            } else {
                b < a
            }
        };
        if take_g1 {
            labels.push(Group::G1);
            j += 1;
        } else {
            labels.push(Group::G0);
            i += 1;
        }
    }
    labels
}

/// Returns `(min_arrangement, max_arrangement)`.
pub fn extreme_arrangements(
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
) -> Result<(Arrangement, Arrangement)> {
    validate_intervals(g0, g1)?;
    for (g0_index, x) in g0.iter().enumerate() {
        for (g1_index, y) in g1.iter().enumerate() {
            if x.is_point() && y.is_point() && x.lower == y.lower {
                return Err(Error::ForcedTie { g0_index, g1_index });
            }
        }
    }
    let (s0, s1) = (statuses(g0), statuses(g1));
    // G0 as early as possible, G1 as late as possible
    let min_labels = merge_by(g0, g1, |x| x.lower, |y| y.upper, false);
    // G1 as early as possible, G0 as late as possible
    let max_labels = merge_by(g0, g1, |x| x.upper, |y| y.lower, true);
    Ok((
        Arrangement::from_labels(&min_labels, &s0, &s1)?,
        Arrangement::from_labels(&max_labels, &s0, &s1)?,
    ))
}

pub fn bounds(g0: &[IntervalObservation], g1: &[IntervalObservation], cfg: &GrhoConfig) -> Result<BoundsResult> {
    bounds_with(g0, g1, cfg, Execution::default())
}

pub fn bounds_with(
    g0: &[IntervalObservation],
    g1: &[IntervalObservation],
    cfg: &GrhoConfig,
    exec: Execution,
) -> Result<BoundsResult> {
    let (arg_min, arg_max) = extreme_arrangements(g0, g1)?;
    let eval = |arr: &Arrangement| arr.evaluate(cfg).and_then(|r| r.z());
    let (z_min, z_max) = exec::join(exec, || eval(&arg_min), || eval(&arg_max));
    Ok(BoundsResult {
        rho: cfg.rho(),
        z_min: z_min?,
        z_max: z_max?,
        arg_min,
        arg_max,
    })
}

#[derive(Deserialize)]
struct CsvRecord {
    lower: f64,
    upper: f64,
    status: u8,
    group: u8,
}

/// Reads the `lower,upper,status,group` CSV schema, returning each group in file order.
pub fn read_csv<R: Read>(reader: R) -> Result<(Vec<IntervalObservation>, Vec<IntervalObservation>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let (mut g0, mut g1) = (Vec::new(), Vec::new());
    for (row, rec) in rdr.deserialize::<CsvRecord>().enumerate() {
        let rec = rec?;
        let status = Status::from_code(rec.status)
            .ok_or_else(|| Error::Input(format!("row {}: status must be 0 or 1", row + 1)))?;
        let group = Group::from_code(rec.group)
            .ok_or_else(|| Error::Input(format!("row {}: group must be 0 or 1", row + 1)))?;
        let obs = IntervalObservation::new(rec.lower, rec.upper, status, group);
        match group {
            Group::G0 => g0.push(obs),
            Group::G1 => g1.push(obs),
        }
    }
    validate_intervals(&g0, &g1)?;
    Ok((g0, g1))
}
