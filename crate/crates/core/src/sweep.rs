//! One-dimensional parameter sweeps over a base scenario.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::costing::{cost, CostModel};
use crate::dimensioning::{dimension, ArchitectureKind, Mode, PtmpCountMode};
use crate::error::{Error, SweepError};
use crate::parallel::{map_ordered, Execution};
use crate::scenario::{generate_topology, NetworkScenario};
use crate::spectrum::{feasibility_report, SpectrumPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepField {
    A4Gbps,
    Eta,
    H4,
    FanoutM,
}

impl SweepField {
    pub fn name(self) -> &'static str {
        match self {
            SweepField::A4Gbps => "a4_gbps",
            SweepField::Eta => "eta",
            SweepField::H4 => "h4",
            SweepField::FanoutM => "fanout_m",
        }
    }

    pub fn is_integral(self) -> bool {
        matches!(self, SweepField::H4 | SweepField::FanoutM)
    }
}

impl fmt::Display for SweepField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepField {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "a4_gbps" => Ok(SweepField::A4Gbps),
            "eta" => Ok(SweepField::Eta),
            "h4" => Ok(SweepField::H4),
            "fanout_m" => Ok(SweepField::FanoutM),
            other => Err(SweepError::UnknownField(other.to_string())),
        }
    }
}

/// `field=start:stop:step`, inclusive of `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub field: SweepField,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for SweepSpec {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (field, range) = s.split_once('=').ok_or_else(|| SweepError::Malformed(s.to_string()))?;
        let field: SweepField = field.parse()?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(SweepError::Malformed(s.to_string()));
        };
        let num = |x: &str| -> Result<f64, SweepError> {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| SweepError::Malformed(s.to_string()))
        };
        let spec = SweepSpec { field, start: num(start)?, stop: num(stop)?, step: num(step)? };
        let bad = |reason: &str| Err(SweepError::BadRange { spec: s.to_string(), reason: reason.to_string() });
        if spec.step <= 0.0 {
            return bad("step must be positive");
        }
        if spec.stop < spec.start {
            return bad("stop is below start");
        }
        Ok(spec)
    }
}

impl SweepSpec {
    /// Swept values in ascending order.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }

    /// Base scenario with the swept field replaced by `value`.
    pub fn apply(&self, base: &NetworkScenario, value: f64) -> Result<NetworkScenario, SweepError> {
        let mut s = base.clone();
        let whole = |v: f64| -> Result<u32, SweepError> {
            if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
                return Err(SweepError::NotIntegral { field: self.field.name(), value: v });
            }
            Ok(v as u32)
        };
        match self.field {
            SweepField::A4Gbps => s.a4_gbps = value,
            SweepField::Eta => s.eta = value,
            SweepField::H4 => s.h4 = whole(value)?,
            SweepField::FanoutM => s.fanout_m = whole(value)?,
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub architecture: ArchitectureKind,
    pub total: u64,
    pub total_cu: f64,
    /// Present when a spectrum plan was supplied.
    pub feasible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub entries: Vec<SweepEntry>,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub architectures: Vec<ArchitectureKind>,
    pub ptmp_count_mode: PtmpCountMode,
    pub cost_model: CostModel,
    pub plan: Option<SpectrumPlan>,
    pub execution: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            architectures: ArchitectureKind::ALL.to_vec(),
            ptmp_count_mode: PtmpCountMode::WorkedExample,
            cost_model: CostModel::default(),
            plan: None,
            execution: Execution::Parallel,
        }
    }
}

fn evaluate_point(
    base: &NetworkScenario,
    spec: &SweepSpec,
    value: f64,
    options: &SweepOptions,
) -> Result<SweepRow, Error> {
    let s = spec.apply(base, value)?;
    s.validate()?;
    let topology = generate_topology(&s)?;
    let entries = options
        .architectures
        .iter()
        .map(|&arch| {
            let r = dimension(&s, arch, Mode::Exact, options.ptmp_count_mode, Some(&topology))?;
            let c = cost(&r, &options.cost_model, &s)?;
            let feasible = match &options.plan {
                Some(plan) => Some(feasibility_report(plan, &topology, arch, &s)?.feasible),
                None => None,
            };
            Ok(SweepEntry { architecture: arch, total: c.transceiver_count, total_cu: c.total_cu, feasible })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SweepRow { value, entries })
}

/// Evaluates every swept value; rows come back in sweep order regardless
/// of execution strategy.
pub fn run_sweep(base: &NetworkScenario, spec: &SweepSpec, options: &SweepOptions) -> Result<Vec<SweepRow>, Error> {
    let values = spec.values();
    map_ordered(&values, options.execution, |&v| evaluate_point(base, spec, v, options))
        .into_iter()
        .collect()
}
