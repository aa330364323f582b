//! CAPEX in normalised cost units (CU) and pairwise savings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dimensioning::{ArchitectureKind, DimensioningResult};
use crate::error::CostError;
use crate::scenario::NetworkScenario;

fn default_transponder_cu() -> f64 {
    12.0
}
fn default_ptmp_cu() -> f64 {
    12.0
}
fn default_router_cu() -> f64 {
    64.0
}
fn default_routers_per_hl3() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    /// Point-to-point 400G-class transponder.
    #[serde(default = "default_transponder_cu")]
    pub transponder_cu: f64,
    /// Sliceable PtMP pluggable; priced like a transponder unless set.
    #[serde(default = "default_ptmp_cu")]
    pub ptmp_module_cu: f64,
    /// Large IP router at an HL3 grooming site.
    #[serde(default = "default_router_cu")]
    pub router_large_cu: f64,
    #[serde(default = "default_routers_per_hl3")]
    pub routers_per_hl3: u32,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            transponder_cu: default_transponder_cu(),
            ptmp_module_cu: default_ptmp_cu(),
            router_large_cu: default_router_cu(),
            routers_per_hl3: default_routers_per_hl3(),
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<&Self, CostError> {
        for (field, v) in [
            ("transponder_cu", self.transponder_cu),
            ("ptmp_module_cu", self.ptmp_module_cu),
            ("router_large_cu", self.router_large_cu),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CostError::Invalid { field, reason: format!("must be a non-negative number, got {v}") });
            }
        }
        Ok(self)
    }

    /// Every unit price multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        CostModel {
            transponder_cu: self.transponder_cu * k,
            ptmp_module_cu: self.ptmp_module_cu * k,
            router_large_cu: self.router_large_cu * k,
            routers_per_hl3: self.routers_per_hl3,
        }
    }
}

pub fn parse_cost_model(text: &str) -> Result<CostModel, CostError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let model: CostModel = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CostError::Parse { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
    })?;
    model.validate()?;
    Ok(model)
}

pub fn load_cost_model(path: impl AsRef<Path>) -> Result<CostModel, CostError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CostError::Io { path: path.display().to_string(), source })?;
    parse_cost_model(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureCost {
    pub architecture: ArchitectureKind,
    pub transceiver_count: u64,
    pub transceiver_cost_cu: f64,
    pub router_count: u64,
    pub router_cost_cu: f64,
    pub total_cu: f64,
}

pub fn cost(
    result: &DimensioningResult,
    model: &CostModel,
    scenario: &NetworkScenario,
) -> Result<ArchitectureCost, CostError> {
    let count = result.exact_total().ok_or(CostError::ApproximateResult)?;
    let unit = match result.architecture {
        ArchitectureKind::PtmpPluggable => model.ptmp_module_cu,
        _ => model.transponder_cu,
    };
    let router_count = match result.architecture {
        ArchitectureKind::GroomingHierarchical => u64::from(scenario.h3) * u64::from(model.routers_per_hl3),
        _ => 0,
    };
    let transceiver_cost_cu = count as f64 * unit;
    let router_cost_cu = router_count as f64 * model.router_large_cu;
    Ok(ArchitectureCost {
        architecture: result.architecture,
        transceiver_count: count,
        transceiver_cost_cu,
        router_count,
        router_cost_cu,
        total_cu: transceiver_cost_cu + router_cost_cu,
    })
}

/// `(baseline - candidate) / baseline * 100`. Undefined when the baseline
/// is zero and the candidate is not; 0 when both are zero.
pub fn savings_pct(baseline: f64, candidate: f64) -> Option<f64> {
    if baseline == 0.0 {
        return (candidate == 0.0).then_some(0.0);
    }
    Some((baseline - candidate) / baseline * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSavings {
    pub baseline: ArchitectureKind,
    pub candidate: ArchitectureKind,
    pub transponder_savings_pct: Option<f64>,
    pub transceiver_cost_savings_pct: Option<f64>,
    pub total_cost_savings_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub costs: BTreeMap<ArchitectureKind, ArchitectureCost>,
    /// Every ordered (baseline, candidate) pair of distinct architectures.
    pub savings: Vec<PairwiseSavings>,
}

impl CostReport {
    pub fn savings_between(&self, baseline: ArchitectureKind, candidate: ArchitectureKind) -> Option<&PairwiseSavings> {
        self.savings.iter().find(|s| s.baseline == baseline && s.candidate == candidate)
    }
}

pub fn compare(
    results: &BTreeMap<ArchitectureKind, DimensioningResult>,
    model: &CostModel,
    scenario: &NetworkScenario,
) -> Result<CostReport, CostError> {
    if results.len() < 2 {
        return Err(CostError::TooFewArchitectures(results.len()));
    }
    let costs = results
        .iter()
        .map(|(&k, r)| cost(r, model, scenario).map(|c| (k, c)))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    let mut savings = Vec::new();
    for (&a, ca) in &costs {
        for (&b, cb) in &costs {
            if a == b {
                continue;
            }
            savings.push(PairwiseSavings {
                baseline: a,
                candidate: b,
                transponder_savings_pct: savings_pct(ca.transceiver_count as f64, cb.transceiver_count as f64),
                transceiver_cost_savings_pct: savings_pct(ca.transceiver_cost_cu, cb.transceiver_cost_cu),
                total_cost_savings_pct: savings_pct(ca.total_cu, cb.total_cu),
            });
        }
    }
    Ok(CostReport { costs, savings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensioning::*;
    use crate::scenario::generate_topology;

    fn reference_results() -> BTreeMap<ArchitectureKind, DimensioningResult> {
        let s = NetworkScenario::reference_man();
        let t = generate_topology(&s).unwrap();
        ArchitectureKind::ALL
            .iter()
            .map(|&k| (k, dimension(&s, k, Mode::Exact, PtmpCountMode::WorkedExample, Some(&t)).unwrap()))
            .collect()
    }

    #[test]
    fn continuum_capex() {
        let s = NetworkScenario::reference_man();
        let c = cost(&dimension_continuum_exact(&s), &CostModel::default(), &s).unwrap();
        assert_eq!(c.total_cu, 4800.0);
        assert_eq!(c.router_cost_cu, 0.0);
    }

    #[test]
    fn grooming_capex_from_unit_prices() {
        let s = NetworkScenario::reference_man();
        let c = cost(&dimension_grooming_exact(&s), &CostModel::default(), &s).unwrap();
        assert_eq!(c.transceiver_cost_cu, 6720.0);
        assert_eq!(c.router_cost_cu, 2560.0);
        assert_eq!(c.total_cu, 9280.0);
    }

    #[test]
    fn zero_counts_cost_nothing() {
        let s = NetworkScenario::new(3, 1, 1, 0.0, 0.5);
        let c = cost(&dimension_continuum_exact(&s), &CostModel::default(), &s).unwrap();
        assert_eq!(c.total_cu, 0.0);
    }

    #[test]
    fn approximate_results_rejected() {
        let s = NetworkScenario::reference_man();
        assert!(matches!(
            cost(&dimension_grooming_approx(&s), &CostModel::default(), &s),
            Err(CostError::ApproximateResult)
        ));
    }

    #[test]
    fn reference_savings() {
        let s = NetworkScenario::reference_man();
        let report = compare(&reference_results(), &CostModel::default(), &s).unwrap();
        let g2c = report
            .savings_between(ArchitectureKind::GroomingHierarchical, ArchitectureKind::OpticalContinuum)
            .unwrap();
        assert!((g2c.transponder_savings_pct.unwrap() - 28.5714).abs() < 1e-3);
        let c2p = report
            .savings_between(ArchitectureKind::OpticalContinuum, ArchitectureKind::PtmpPluggable)
            .unwrap();
        assert!((c2p.transceiver_cost_savings_pct.unwrap() - 12.5).abs() < 1e-9);
        assert_eq!(report.savings.len(), 6);
    }

    #[test]
    fn identical_results_save_nothing() {
        let s = NetworkScenario::reference_man();
        let r = dimension_continuum_exact(&s);
        let mut twin = r.clone();
        twin.architecture = ArchitectureKind::PtmpPluggable;
        let results = BTreeMap::from([(ArchitectureKind::OpticalContinuum, r), (ArchitectureKind::PtmpPluggable, twin)]);
        let report = compare(&results, &CostModel::default(), &s).unwrap();
        assert!(report.savings.iter().all(|p| p.transponder_savings_pct == Some(0.0)));
    }

    #[test]
    fn single_architecture_rejected() {
        let s = NetworkScenario::reference_man();
        let results = BTreeMap::from([(ArchitectureKind::OpticalContinuum, dimension_continuum_exact(&s))]);
        assert!(matches!(
            compare(&results, &CostModel::default(), &s),
            Err(CostError::TooFewArchitectures(1))
        ));
    }

    #[test]
    fn cost_file_defaults_and_strictness() {
        assert_eq!(parse_cost_model("{}").unwrap(), CostModel::default());
        assert!(parse_cost_model(r#"{"transponder":3}"#).is_err());
        assert!(parse_cost_model(r#"{"router_large_cu":-1}"#).is_err());
    }
}
