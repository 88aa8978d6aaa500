//! Adjacent-swap chains between the two extreme interleavings of a two-sample
//! dataset, and the checks that Z never decreases along them.
//!
//! An [`Arrangement`] carries no real times: member `k` of the pooled order is
//! evaluated at time `k + 1`. Only ranks enter the statistic, so this loses
//! nothing and makes every chain exactly reproducible.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::grho::{components, GrhoConfig, GrhoResult};
use crate::survival::{build_dataset, Dataset, Group, Observation, Status};

/// Tolerance for the two algebraic identities of the sandwich check.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Default slack for `z_before <= z_after` and for S1 equality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One pooled position: which group, its status, and its rank inside its group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Member {
    pub group: Group,
    pub status: Status,
    /// Zero-based position within the member's own group.
    pub index: usize,
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.group {
            Group::G0 => 'x',
            Group::G1 => 'y',
        };
        write!(f, "{letter}{}", self.index + 1)?;
        if self.status == Status::Censored {
            f.write_str("⁺")?;
        }
        Ok(())
    }
}

/// A pooled interleaving of the two groups that keeps each group's own order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    members: Vec<Member>,
}

impl Arrangement {
    /// Builds an arrangement from a group-label sequence, taking statuses from
    /// each group's list in order.
    pub fn from_labels(labels: &[Group], statuses_g0: &[Status], statuses_g1: &[Status]) -> Result<Self> {
        let statuses = [statuses_g0, statuses_g1];
        let mut next = [0usize; 2];
        let mut members = Vec::with_capacity(labels.len());
        for &group in labels {
            let g = group.index();
            let status = *statuses[g]
                .get(next[g])
                .ok_or_else(|| Error::Input(format!("too many {group} labels")))?;
            members.push(Member {
                group,
                status,
                index: next[g],
            });
            next[g] += 1;
        }
        if next[0] != statuses_g0.len() || next[1] != statuses_g1.len() {
            return Err(Error::Input("label counts do not match group sizes".into()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn count(&self, group: Group) -> usize {
        self.members.iter().filter(|m| m.group == group).count()
    }

    pub fn labels(&self) -> Vec<Group> {
        self.members.iter().map(|m| m.group).collect()
    }

    /// Number of (G1, G0) pairs with the G1 member first.
    pub fn inversions(&self) -> usize {
        let mut seen_g1 = 0;
        let mut total = 0;
        for m in &self.members {
            match m.group {
                Group::G1 => seen_g1 += 1,
                Group::G0 => total += seen_g1,
            }
        }
        total
    }

    /// The dataset with member `k` observed at time `k + 1`.
    pub fn to_dataset(&self) -> Result<Dataset> {
        build_dataset(
            self.members
                .iter()
                .enumerate()
                .map(|(k, m)| Observation::new((k + 1) as f64, m.status, m.group)),
        )
    }

    pub fn evaluate(&self, cfg: &GrhoConfig) -> Result<GrhoResult> {
        components(&self.to_dataset()?, cfg)
    }

    /// Exchanges the G0 member at `position` with the G1 member right after it.
    pub fn swap_forward(&self, position: usize) -> Result<Self> {
        self.check_pair(position)?;
        let mut members = self.members.clone();
        members.swap(position, position + 1);
        Ok(Self { members })
    }

    fn check_pair(&self, position: usize) -> Result<(Member, Member)> {
        match (self.members.get(position), self.members.get(position + 1)) {
            (Some(&x), Some(&y)) if x.group == Group::G0 && y.group == Group::G1 => Ok((x, y)),
            _ => Err(Error::NotAdjacentPair { position }),
        }
    }

    /// Renders each member with a caller-supplied label, censored ones marked `⁺`.
    pub fn render_with<F>(&self, mut label: F) -> Vec<String>
    where
        F: FnMut(&Member) -> String,
    {
        self.members
            .iter()
            .map(|m| {
                let mut s = label(m);
                if m.status == Status::Censored {
                    s.push('⁺');
                }
                s
            })
            .collect()
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for Arrangement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn initial_arrangement(statuses_g0: &[Status], statuses_g1: &[Status]) -> Result<Arrangement> {
    if statuses_g0.is_empty() {
        return Err(Error::EmptyGroup(Group::G0));
    }
    if statuses_g1.is_empty() {
        return Err(Error::EmptyGroup(Group::G1));
    }
    let labels: Vec<Group> = std::iter::repeat_n(Group::G0, statuses_g0.len())
        .chain(std::iter::repeat_n(Group::G1, statuses_g1.len()))
        .collect();
    Arrangement::from_labels(&labels, statuses_g0, statuses_g1)
}

/// Swap type by the statuses of the exchanged (G0, G1) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scenario {
    /// Both censored.
    S1,
    /// G0 member fails, G1 member censored.
    S2,
    /// G0 member censored, G1 member fails.
    S3,
    /// Both fail.
    S4,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// How the unweighted variance contribution of the affected failure times
/// moves across the swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VarianceShift {
    Unchanged,
    Increases,
    Decreases,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapClass {
    pub scenario: Scenario,
    pub shift: VarianceShift,
}

impl SwapClass {
    /// Sub-case tag such as `S2-i`, `S3-iia` or `S4-iib`; S1 has no sub-cases.
    pub fn subcase(&self) -> String {
        if self.scenario == Scenario::S1 {
            return "S1".to_string();
        }
        let tag = match self.shift {
            VarianceShift::Unchanged => "i",
            VarianceShift::Increases => "iia",
            VarianceShift::Decreases => "iib",
        };
        format!("{}-{tag}", self.scenario)
    }
}

impl fmt::Display for SwapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.subcase())
    }
}

/// Exact fraction `num / den` with integer parts, compared by cross-multiplication.
#[derive(Clone, Copy)]
struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    fn new(num: usize, den: usize) -> Self {
        Self {
            num: num as u128,
            den: den as u128,
        }
    }

    fn add(self, other: Ratio) -> Ratio {
        Ratio {
            num: self.num * other.den + other.num * self.den,
            den: self.den * other.den,
        }
    }

    fn cmp(self, other: Ratio) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Classifies the swap of the adjacent (G0, G1) pair at `position`.
///
/// The sub-case compares the exact unweighted variance terms of the failure
/// times whose risk table the swap changes. With `Y0`, `Y1`, `Y` the risk
/// counts at the pair before the swap:
/// - S2: the G0 failure moves one rank later, losing the G1 member from its risk set;
/// - S3: the G1 failure moves one rank earlier, gaining the G0 member;
/// - S4: both failures keep their ranks but exchange groups, so the shift
///   reduces to comparing `Y1` with `Y0`.
pub fn classify_swap(arr: &Arrangement, position: usize) -> Result<SwapClass> {
    let (x, y) = arr.check_pair(position)?;
    let tail = &arr.members[position..];
    let y0 = tail.iter().filter(|m| m.group == Group::G0).count();
    let y1 = tail.len() - y0;
    let n = tail.len();

    let (scenario, before, after) = match (x.status, y.status) {
        (Status::Censored, Status::Censored) => {
            return Ok(SwapClass {
                scenario: Scenario::S1,
                shift: VarianceShift::Unchanged,
            })
        }
        (Status::Failure, Status::Censored) => (
            Scenario::S2,
            Ratio::new(y0 * y1, n * n),
            Ratio::new(y0 * (y1 - 1), (n - 1) * (n - 1)),
        ),
        (Status::Censored, Status::Failure) => (
            Scenario::S3,
            Ratio::new((y0 - 1) * y1, (n - 1) * (n - 1)),
            Ratio::new(y0 * y1, n * n),
        ),
        (Status::Failure, Status::Failure) => {
            let first = Ratio::new(y0 * y1, n * n);
            (
                Scenario::S4,
                first.add(Ratio::new((y0 - 1) * y1, (n - 1) * (n - 1))),
                first.add(Ratio::new(y0 * (y1 - 1), (n - 1) * (n - 1))),
            )
        }
    };
    let shift = match before.cmp(after) {
        Ordering::Equal => VarianceShift::Unchanged,
        Ordering::Less => VarianceShift::Increases,
        Ordering::Greater => VarianceShift::Decreases,
    };
    Ok(SwapClass { scenario, shift })
}

/// Aggregate weighted observed, expected and variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub o: f64,
    pub e: f64,
    pub v: f64,
}

impl Moments {
    pub fn numerator(&self) -> f64 {
        self.o - self.e
    }
}

impl From<&GrhoResult> for Moments {
    fn from(r: &GrhoResult) -> Self {
        Self { o: r.o, e: r.e, v: r.v }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapStep {
    /// 1-based step number.
    pub index: usize,
    /// Pooled position of the G0 member before the swap.
    pub position: usize,
    pub class: SwapClass,
    pub z_before: f64,
    pub z_after: f64,
    pub before: Moments,
    pub after: Moments,
    pub arrangement_after: Arrangement,
}

impl SwapStep {
    pub fn scenario(&self) -> Scenario {
        self.class.scenario
    }

    pub fn sandwich(&self) -> SandwichDiagnostic {
        SandwichDiagnostic::new(&self.before, &self.after)
    }
}

/// The four gaps between `N_B/sqrt(V_A)`, `N_B/sqrt(V_B)`, `N_A/sqrt(V_A)` and
/// `N_A/sqrt(V_B)` (with `N = O - E`), used when numerator and variance move
/// the same way and `z_before <= z_after` is not immediate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichDiagnostic {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    /// Both numerators positive with growing variance, or both negative with
    /// shrinking variance.
    pub applicable: bool,
    pub z_increment: f64,
}

impl SandwichDiagnostic {
    pub fn new(before: &Moments, after: &Moments) -> Self {
        let (nb, na) = (before.numerator(), after.numerator());
        let (sb, sa) = (before.v.sqrt(), after.v.sqrt());
        let applicable = (nb > 0.0 && na > 0.0 && before.v < after.v) || (nb < 0.0 && na < 0.0 && before.v > after.v);
        Self {
            d1: nb / sb - nb / sa,
            d2: na / sb - nb / sb,
            d3: na / sa - nb / sa,
            d4: na / sb - na / sa,
            applicable,
            z_increment: na / sa - nb / sb,
        }
    }

    /// `d3 > d1`, `d2 > d4`, and both decompositions hold within `IDENTITY_TOLERANCE`.
    pub fn holds(&self) -> bool {
        self.d3 > self.d1
            && self.d2 > self.d4
            && (self.d2 - (self.d4 + self.z_increment)).abs() <= IDENTITY_TOLERANCE
            && (self.d3 - (self.d1 + self.z_increment)).abs() <= IDENTITY_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub rho: f64,
    pub initial: Arrangement,
    pub initial_z: f64,
    pub initial_moments: Moments,
    pub steps: Vec<SwapStep>,
}

impl Chain {
    /// Z for every arrangement, initial first: `steps.len() + 1` values.
    pub fn z_values(&self) -> Vec<f64> {
        std::iter::once(self.initial_z)
            .chain(self.steps.iter().map(|s| s.z_after))
            .collect()
    }

    pub fn arrangements(&self) -> impl Iterator<Item = &Arrangement> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.arrangement_after))
    }

    pub fn last(&self) -> &Arrangement {
        self.steps.last().map_or(&self.initial, |s| &s.arrangement_after)
    }
}

fn evaluate_at(arr: &Arrangement, cfg: &GrhoConfig, step: usize) -> Result<(f64, Moments)> {
    let result = arr.evaluate(cfg)?;
    let z = result.z().map_err(|_| Error::DegenerateVariance { step: Some(step) })?;
    Ok((z, Moments::from(&result)))
}

/// The canonical chain: for each G1 member in turn, move it left one swap at a
/// time past every G0 member still ahead of it. Produces `n0 * n1` steps.
pub fn generate_chain(statuses_g0: &[Status], statuses_g1: &[Status], cfg: &GrhoConfig) -> Result<Chain> {
    let initial = initial_arrangement(statuses_g0, statuses_g1)?;
    if !statuses_g0.iter().chain(statuses_g1).any(|s| s.is_failure()) {
        return Err(Error::NoFailures);
    }
    let (n0, n1) = (statuses_g0.len(), statuses_g1.len());
    let (initial_z, initial_moments) = evaluate_at(&initial, cfg, 0)?;

    let mut steps = Vec::with_capacity(n0 * n1);
    let mut current = initial.clone();
    let mut z_before = initial_z;
    let mut before = initial_moments;
    for j in 0..n1 {
        let mut pos = n0 + j;
        while pos > j {
            let position = pos - 1;
            let class = classify_swap(&current, position)?;
            let next = current.swap_forward(position)?;
            let index = steps.len() + 1;
            let (z_after, after) = evaluate_at(&next, cfg, index)?;
            steps.push(SwapStep {
                index,
                position,
                class,
                z_before,
                z_after,
                before,
                after,
                arrangement_after: next.clone(),
            });
            current = next;
            z_before = z_after;
            before = after;
            pos -= 1;
        }
    }

    Ok(Chain {
        rho: cfg.rho(),
        initial,
        initial_z,
        initial_moments,
        steps,
    })
}

/// One chain per configuration, evaluated independently.
pub fn generate_chains(
    statuses_g0: &[Status],
    statuses_g1: &[Status],
    configs: &[GrhoConfig],
    exec: Execution,
) -> Result<Vec<Chain>> {
    exec::map(exec, configs, |cfg| generate_chain(statuses_g0, statuses_g1, cfg))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub steps: usize,
    pub s1_steps: usize,
    pub sandwich_checked: usize,
    /// Smallest `z_after - z_before` over all steps.
    pub min_increment: f64,
    pub tolerance: f64,
}

/// Checks a sequence of swaps (canonical or not) against the monotonicity
/// guarantee, S1 invariance and, where applicable, the sandwich diagnostic.
pub fn verify_monotone(steps: &[SwapStep], tol: f64) -> Result<VerificationReport> {
    if steps.is_empty() {
        return Err(Error::Input("cannot verify an empty chain".into()));
    }
    let violation = |step: &SwapStep, detail: String| Error::MonotonicityViolation {
        step: step.index,
        scenario: step.scenario(),
        detail,
    };

    let mut report = VerificationReport {
        steps: steps.len(),
        s1_steps: 0,
        sandwich_checked: 0,
        min_increment: f64::INFINITY,
        tolerance: tol,
    };
    for step in steps {
        let increment = step.z_after - step.z_before;
        report.min_increment = report.min_increment.min(increment);
        if increment.is_nan() || increment < -tol {
            return Err(violation(
                step,
                format!("z decreased from {} to {}", step.z_before, step.z_after),
            ));
        }
        if step.scenario() == Scenario::S1 {
            report.s1_steps += 1;
            if increment.abs() > tol {
                return Err(violation(step, format!("S1 swap changed z by {increment}")));
            }
        }
        let sandwich = step.sandwich();
        if sandwich.applicable {
            report.sandwich_checked += 1;
            if !sandwich.holds() {
                return Err(violation(step, format!("sandwich check failed: {sandwich:?}")));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Status::{Censored as C, Failure as F};

    const G0_STATUSES: [Status; 5] = [F, C, F, F, C];
    const G1_STATUSES: [Status; 5] = [F, F, C, F, C];

    #[test]
    fn initial_worked_example() {
        let arr = initial_arrangement(&G0_STATUSES, &G1_STATUSES).unwrap();
        assert_eq!(arr.to_string(), "x1 x2⁺ x3 x4 x5⁺ y1 y2 y3⁺ y4 y5⁺");
        assert_eq!(arr.inversions(), 0);
    }

    #[test]
    fn initial_single_pair_and_empty() {
        let arr = initial_arrangement(&[F], &[F]).unwrap();
        assert_eq!(arr.to_string(), "x1 y1");
        assert_eq!(
            initial_arrangement(&[], &[F]).unwrap_err(),
            Error::EmptyGroup(Group::G0)
        );
    }

    #[test]
    fn nine_swaps_for_three_by_three() {
        let chain = generate_chain(&[F, F, F], &[F, F, F], &GrhoConfig::default()).unwrap();
        assert_eq!(chain.steps.len(), 9);
        assert_eq!(chain.last().to_string(), "y1 y2 y3 x1 x2 x3");
    }

    #[test]
    fn single_pair_flips_sign() {
        let chain = generate_chain(&[F], &[F], &GrhoConfig::new(0.5).unwrap()).unwrap();
        assert_eq!(chain.steps.len(), 1);
        let step = &chain.steps[0];
        assert!((step.z_after + step.z_before).abs() < 1e-15);
        assert!(step.z_before < 0.0);
    }

    #[test]
    fn worked_example_progression() {
        let chain = generate_chain(&G0_STATUSES, &G1_STATUSES, &GrhoConfig::new(0.5).unwrap()).unwrap();
        let arrangements: Vec<String> = chain.arrangements().map(|a| a.to_string()).collect();
        assert_eq!(arrangements[1], "x1 x2⁺ x3 x4 y1 x5⁺ y2 y3⁺ y4 y5⁺");
        assert_eq!(arrangements[5], "y1 x1 x2⁺ x3 x4 x5⁺ y2 y3⁺ y4 y5⁺");
        assert_eq!(arrangements[25], "y1 y2 y3⁺ y4 y5⁺ x1 x2⁺ x3 x4 x5⁺");
        assert_eq!(chain.steps[0].class.scenario, Scenario::S3);
        assert_eq!(chain.steps[10].class.scenario, Scenario::S1);
    }

    #[test]
    fn classify_rejects_wrong_pairs() {
        let arr = initial_arrangement(&[F, F], &[F]).unwrap();
        assert_eq!(
            classify_swap(&arr, 0).unwrap_err(),
            Error::NotAdjacentPair { position: 0 }
        );
        assert_eq!(
            classify_swap(&arr, 2).unwrap_err(),
            Error::NotAdjacentPair { position: 2 }
        );
        assert!(classify_swap(&arr, 1).is_ok());
    }

    #[test]
    fn s1_classification() {
        let arr = initial_arrangement(&[F, C], &[C, F]).unwrap();
        let class = classify_swap(&arr, 1).unwrap();
        assert_eq!(class.scenario, Scenario::S1);
        assert_eq!(class.subcase(), "S1");
    }

    #[test]
    fn s4_subcases_follow_risk_counts() {
        // pair at the front: Y0 = Y1 -> unchanged
        let arr = Arrangement::from_labels(&[Group::G0, Group::G1], &[F], &[F]).unwrap();
        assert_eq!(classify_swap(&arr, 0).unwrap().subcase(), "S4-i");
        // Y1 = 2 > Y0 = 1
        let arr = Arrangement::from_labels(&[Group::G0, Group::G1, Group::G1], &[F], &[F, F]).unwrap();
        assert_eq!(classify_swap(&arr, 0).unwrap().subcase(), "S4-iia");
        // Y0 = 2 > Y1 = 1
        let arr = Arrangement::from_labels(&[Group::G0, Group::G0, Group::G1], &[F, F], &[F]).unwrap();
        assert_eq!(classify_swap(&arr, 1).unwrap().subcase(), "S4-i");
        let arr = Arrangement::from_labels(&[Group::G0, Group::G1, Group::G0], &[F, F], &[F]).unwrap();
        assert_eq!(classify_swap(&arr, 0).unwrap().subcase(), "S4-iib");
    }

    #[test]
    fn subcase_matches_unweighted_variance_change() {
        let cfg = GrhoConfig::new(0.0).unwrap();
        let chain = generate_chain(&G0_STATUSES, &G1_STATUSES, &cfg).unwrap();
        for step in &chain.steps {
            let expected = match step.before.v.partial_cmp(&step.after.v).unwrap() {
                _ if (step.before.v - step.after.v).abs() < 1e-12 => VarianceShift::Unchanged,
                Ordering::Less => VarianceShift::Increases,
                _ => VarianceShift::Decreases,
            };
            assert_eq!(step.class.shift, expected, "step {}", step.index);
        }
    }

    #[test]
    fn degenerate_chain_reports_step() {
        // no G0 failure: initial arrangement has Y0 = 0 at every failure
        let err = generate_chain(&[C], &[F], &GrhoConfig::default()).unwrap_err();
        assert_eq!(err, Error::DegenerateVariance { step: Some(0) });
        // no G1 failure: the last arrangement is degenerate
        let err = generate_chain(&[F, F], &[C], &GrhoConfig::default()).unwrap_err();
        assert_eq!(err, Error::DegenerateVariance { step: Some(2) });
    }

    #[test]
    fn verify_flags_decrease() {
        let chain = generate_chain(&G0_STATUSES, &G1_STATUSES, &GrhoConfig::new(0.5).unwrap()).unwrap();
        let report = verify_monotone(&chain.steps, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(report.steps, 25);
        assert_eq!(report.s1_steps, 4);

        let mut broken = chain.steps.clone();
        let step = &mut broken[3];
        std::mem::swap(&mut step.z_before, &mut step.z_after);
        match verify_monotone(&broken, DEFAULT_TOLERANCE).unwrap_err() {
            Error::MonotonicityViolation { step, scenario, .. } => {
                assert_eq!(step, 4);
                assert_eq!(scenario, broken[3].scenario());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(verify_monotone(&[], DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn single_s1_swap_is_exact() {
        let chain = generate_chain(&[F, C], &[C, F], &GrhoConfig::new(1.0).unwrap()).unwrap();
        let s1 = chain.steps.iter().find(|s| s.scenario() == Scenario::S1).unwrap();
        assert_eq!(s1.z_after - s1.z_before, 0.0);
        assert_eq!(s1.before, s1.after);
    }

    #[test]
    fn sandwich_identities() {
        let before = Moments { o: 3.0, e: 1.0, v: 1.0 };
        let after = Moments {
            o: 3.0,
            e: 0.5,
            v: 1.21,
        };
        let d = SandwichDiagnostic::new(&before, &after);
        assert!(d.applicable);
        assert!(d.holds());
        let not_applicable = SandwichDiagnostic::new(&before, &Moments { o: 3.0, e: 0.5, v: 0.9 });
        assert!(!not_applicable.applicable);
    }

    #[test]
    fn chains_per_rho_agree_across_modes() {
        let configs: Vec<GrhoConfig> = (0..=10).map(|k| GrhoConfig::new(k as f64 / 10.0).unwrap()).collect();
        let seq = generate_chains(&G0_STATUSES, &G1_STATUSES, &configs, Execution::Sequential).unwrap();
        let par = generate_chains(&G0_STATUSES, &G1_STATUSES, &configs, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}
