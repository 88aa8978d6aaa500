//! The G-rho family of weighted log-rank statistics for untied data.
//!
//! At each failure time the weight is the pooled Kaplan-Meier estimate raised
//! to `rho`; `rho = 0` is the Mantel-Haenszel log-rank test and `rho = 1` the
//! Peto-Prentice variant. The observed count `O` is taken from group G1.

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::survival::{km_at, km_from_tables, risk_tables, Dataset, Side};

/// Which side of the Kaplan-Meier step the weight reads at a failure time.
///
/// `LeftLimit` uses the estimate just before the failure and is the default.
pub type WeightConvention = Side;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrhoConfig {
    rho: f64,
    convention: WeightConvention,
}

impl GrhoConfig {
    pub fn new(rho: f64) -> Result<Self> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::InvalidRho(rho));
        }
        Ok(Self {
            rho,
            convention: WeightConvention::default(),
        })
    }

    pub fn with_convention(mut self, convention: WeightConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn convention(&self) -> WeightConvention {
        self.convention
    }
}

impl Default for GrhoConfig {
    fn default() -> Self {
        Self {
            rho: 0.0,
            convention: WeightConvention::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailureTerm {
    pub tau: f64,
    pub weight: f64,
    pub o: f64,
    pub e: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrhoResult {
    pub rho: f64,
    pub convention: WeightConvention,
    pub per_failure: Vec<FailureTerm>,
    pub o: f64,
    pub e: f64,
    pub v: f64,
}

impl GrhoResult {
    pub fn z(&self) -> Result<f64> {
        z_statistic(self)
    }
}

pub fn components(ds: &Dataset, cfg: &GrhoConfig) -> Result<GrhoResult> {
    if !ds.is_strict() {
        return Err(Error::TiesPresent);
    }
    let tables = risk_tables(ds)?;
    let curve = km_from_tables(&tables);

    let mut per_failure = Vec::with_capacity(tables.len());
    let (mut o, mut e, mut v) = (0.0, 0.0, 0.0);
    for table in &tables {
        let weight = km_at(&curve, table.tau, cfg.convention).powf(cfg.rho);
        let y = table.at_risk() as f64;
        let term = FailureTerm {
            tau: table.tau,
            weight,
            o: weight * table.d1 as f64,
            e: weight * table.y1 as f64 / y,
            v: weight * weight * (table.y0 * table.y1) as f64 / (y * y),
        };
        o += term.o;
        e += term.e;
        v += term.v;
        per_failure.push(term);
    }

    Ok(GrhoResult {
        rho: cfg.rho,
        convention: cfg.convention,
        per_failure,
        o,
        e,
        v,
    })
}

pub fn z_statistic(result: &GrhoResult) -> Result<f64> {
    if result.v <= 0.0 {
        return Err(Error::DegenerateVariance { step: None });
    }
    Ok((result.o - result.e) / result.v.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternative {
    #[default]
    TwoSided,
}

/// Normal-approximation p-value; `z^2` is the equivalent chi-square(1) statistic.
pub fn p_value(z: f64, alternative: Alternative) -> f64 {
    match alternative {
        Alternative::TwoSided => erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0),
    }
}

/// Serialized form of a test result.
#[derive(Debug, Clone, Serialize)]
pub struct GrhoReport {
    pub rho: f64,
    pub convention: WeightConvention,
    #[serde(rename = "O")]
    pub o: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub p: f64,
    pub chi_square: f64,
    pub per_failure: Vec<FailureTerm>,
}

impl GrhoReport {
    pub fn new(result: &GrhoResult) -> Result<Self> {
        let z = result.z()?;
        Ok(Self {
            rho: result.rho,
            convention: result.convention,
            o: result.o,
            e: result.e,
            v: result.v,
            z,
            p: p_value(z, Alternative::TwoSided),
            chi_square: z * z,
            per_failure: result.per_failure.clone(),
        })
    }
}
