//! Right-censored two-sample data, pooled risk sets and the Kaplan-Meier estimate.
//!
//! Times are compared exactly as given. When a censoring and a failure share a
//! time, the censored observation is treated as leaving the risk set just after
//! the failure, so it still counts as at risk at that failure time.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Failure,
    Censored,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Failure
    }

    /// Decodes the 1 = failure, 0 = censored column convention.
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Status::Failure),
            0 => Some(Status::Censored),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    G0,
    G1,
}

impl Group {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Group::G0),
            1 => Some(Group::G1),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Group::G0 => 0,
            Group::G1 => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Group::G0 => Group::G1,
            Group::G1 => Group::G0,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::G0 => f.write_str("G0"),
            Group::G1 => f.write_str("G1"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub time: f64,
    pub status: Status,
    pub group: Group,
}

impl Observation {
    pub fn new(time: f64, status: Status, group: Group) -> Self {
        Self { time, status, group }
    }

    pub fn failure(time: f64, group: Group) -> Self {
        Self::new(time, Status::Failure, group)
    }

    pub fn censored(time: f64, group: Group) -> Self {
        Self::new(time, Status::Censored, group)
    }
}

/// A validated two-sample dataset. Input order is preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
    n0: usize,
    n1: usize,
    strict: bool,
}

impl Dataset {
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// True when all observation times are pairwise distinct.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Observations of one group, sorted by time.
    pub fn group_sorted(&self, group: Group) -> Vec<Observation> {
        let mut members: Vec<Observation> = self.observations.iter().filter(|o| o.group == group).copied().collect();
        members.sort_by(|a, b| a.time.total_cmp(&b.time).then(status_rank(a).cmp(&status_rank(b))));
        members
    }

    fn sorted(&self) -> Vec<Observation> {
        let mut all = self.observations.clone();
        all.sort_by(|a, b| a.time.total_cmp(&b.time).then(status_rank(a).cmp(&status_rank(b))));
        all
    }
}

// failures before censorings at equal times
fn status_rank(o: &Observation) -> u8 {
    match o.status {
        Status::Failure => 0,
        Status::Censored => 1,
    }
}

pub fn build_dataset<I>(records: I) -> Result<Dataset>
where
    I: IntoIterator<Item = Observation>,
{
    let observations: Vec<Observation> = records.into_iter().collect();
    let mut counts = [0usize; 2];
    for (index, obs) in observations.iter().enumerate() {
        if !obs.time.is_finite() {
            return Err(Error::NonFiniteTime { index });
        }
        if obs.time < 0.0 {
            return Err(Error::NegativeTime { index, time: obs.time });
        }
        counts[obs.group.index()] += 1;
    }
    if counts[0] == 0 {
        return Err(Error::EmptyGroup(Group::G0));
    }
    if counts[1] == 0 {
        return Err(Error::EmptyGroup(Group::G1));
    }

    let mut times: Vec<f64> = observations.iter().map(|o| o.time).collect();
    times.sort_by(f64::total_cmp);
    let strict = times.windows(2).all(|w| w[0] != w[1]);

    Ok(Dataset {
        observations,
        n0: counts[0],
        n1: counts[1],
        strict,
    })
}

#[derive(Deserialize)]
struct CsvRecord {
    time: f64,
    status: u8,
    group: u8,
}

/// Reads the `time,status,group` CSV schema.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut records = Vec::new();
    for (row, rec) in rdr.deserialize::<CsvRecord>().enumerate() {
        let rec = rec?;
        let status = Status::from_code(rec.status)
            .ok_or_else(|| Error::Input(format!("row {}: status must be 0 or 1", row + 1)))?;
        let group = Group::from_code(rec.group)
            .ok_or_else(|| Error::Input(format!("row {}: group must be 0 or 1", row + 1)))?;
        records.push(Observation::new(rec.time, status, group));
    }
    build_dataset(records)
}

/// The 2x2 summary at one distinct failure time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskTable {
    pub tau: f64,
    pub d0: usize,
    pub d1: usize,
    pub y0: usize,
    pub y1: usize,
    /// Censored G0 members that left the risk set since the previous failure time.
    pub u0: usize,
    /// Censored G1 members that left the risk set since the previous failure time.
    pub u1: usize,
}

impl RiskTable {
    pub fn deaths(&self) -> usize {
        self.d0 + self.d1
    }

    pub fn at_risk(&self) -> usize {
        self.y0 + self.y1
    }

    pub fn censored_in_gap(&self) -> usize {
        self.u0 + self.u1
    }
}

/// One table per distinct failure time, ascending.
pub fn risk_tables(ds: &Dataset) -> Result<Vec<RiskTable>> {
    let sorted = ds.sorted();
    let n = [ds.n0, ds.n1];
    let mut removed = [0usize; 2];
    let mut pending_censored = [0usize; 2];
    let mut tables = Vec::new();

    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i].time;
        let mut deaths = [0usize; 2];
        let mut censored = [0usize; 2];
        while i < sorted.len() && sorted[i].time == t {
            let g = sorted[i].group.index();
            match sorted[i].status {
                Status::Failure => deaths[g] += 1,
                Status::Censored => censored[g] += 1,
            }
            i += 1;
        }
        if deaths[0] + deaths[1] > 0 {
            tables.push(RiskTable {
                tau: t,
                d0: deaths[0],
                d1: deaths[1],
                y0: n[0] - removed[0],
                y1: n[1] - removed[1],
                u0: pending_censored[0],
                u1: pending_censored[1],
            });
            pending_censored = [0, 0];
        }
        for g in 0..2 {
            pending_censored[g] += censored[g];
            removed[g] += deaths[g] + censored[g];
        }
    }

    if tables.is_empty() {
        return Err(Error::NoFailures);
    }
    Ok(tables)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KmStep {
    pub time: f64,
    pub survival: f64,
}

/// Right-continuous product-limit step function. Equals 1 before the first step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmCurve {
    steps: Vec<KmStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Side {
    /// S(t-), the value just before t.
    #[default]
    LeftLimit,
    /// S(t).
    RightContinuous,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "left" | "leftlimit" => Ok(Side::LeftLimit),
            "right" | "rightcontinuous" => Ok(Side::RightContinuous),
            other => Err(Error::Input(format!("unknown weight convention '{other}'"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::LeftLimit => f.write_str("left-limit"),
            Side::RightContinuous => f.write_str("right-continuous"),
        }
    }
}

impl KmCurve {
    pub fn steps(&self) -> &[KmStep] {
        &self.steps
    }

    pub fn at(&self, t: f64, side: Side) -> f64 {
        km_at(self, t, side)
    }
}

pub fn km_estimate(ds: &Dataset) -> Result<KmCurve> {
    let tables = risk_tables(ds)?;
    Ok(km_from_tables(&tables))
}

pub(crate) fn km_from_tables(tables: &[RiskTable]) -> KmCurve {
    // Between censorings the factors telescope: prod (Y_l - d_l)/Y_l over a run
    // collapses to (Y_last - d_last)/Y_first, so each run costs one rounding.
    let mut steps = Vec::with_capacity(tables.len());
    let mut base = 1.0;
    let mut anchor = 0usize;
    let mut survival = 1.0;
    for (j, table) in tables.iter().enumerate() {
        if j == 0 || table.censored_in_gap() > 0 {
            base = survival;
            anchor = table.at_risk();
        }
        let remaining = table.at_risk() - table.deaths();
        survival = base * (remaining as f64 / anchor as f64);
        steps.push(KmStep {
            time: table.tau,
            survival,
        });
    }
    KmCurve { steps }
}

pub fn km_at(curve: &KmCurve, t: f64, side: Side) -> f64 {
    let passed = match side {
        Side::LeftLimit => curve.steps.partition_point(|s| s.time < t),
        Side::RightContinuous => curve.steps.partition_point(|s| s.time <= t),
    };
    if passed == 0 {
        1.0
    } else {
        curve.steps[passed - 1].survival
    }
}
