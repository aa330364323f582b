//! End-to-end architecture comparison: dimensioning, costing and spectrum
//! feasibility for one scenario.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::costing::{compare, CostModel, CostReport};
use crate::dimensioning::{dimension, ArchitectureKind, DimensioningResult, Mode, PtmpCountMode};
use crate::error::Error;
use crate::scenario::{generate_topology, NetworkScenario};
use crate::spectrum::{feasibility_report, BandName, FeasibilityReport, SpectrumPlan};

/// Grooming CAPEX footnote key, see [`FOOTNOTES`].
pub const FOOTNOTE_GROOMING_CAPEX: &str = "grooming-capex";

/// Fixed notes on reference figures that do not follow from their own
/// inputs. Keyed so tests and tooling can look them up.
pub const FOOTNOTES: [(&str, &str); 5] = [
    (
        FOOTNOTE_GROOMING_CAPEX,
        "Grooming CAPEX is recomputed from unit prices (transceivers x 12 CU + one 64 CU router per HL3). \
         The published reference figure 580x12 + 20x60 = 7728 CU is not reproducible: 580 differs from the \
         560 transponders derived per level, 20 routers at 60 CU differ from 40 HL3 nodes at 64 CU, and \
         580x12 + 20x60 evaluates to 8160.",
    ),
    (
        "approximations",
        "Closed-form approximations (1+2eta)*A4/C*H4, 2*A4/C*H4 and A4/(C/m)*H4*(1+1/m) are reported as published. \
         They disagree with the exact per-level sums (grooming sums to (2+2eta)*A4/C*H4 before ceilings) and are never costed.",
    ),
    (
        "ptmp-count-mode",
        "PtMP worked-example counting gives each HL4 one full-rate sliceable module and pools traffic per HL1/2 hub \
         (350 on the 200/40/5 reference). The per-slice formula counts ceil(A4/(C/m)) modules per HL4 and gives 750.",
    ),
    (
        "combined-savings",
        "The quoted 35-40% combined transponder and router savings cannot be derived from consistent unit prices \
         and is treated as indicative only.",
    ),
    (
        "c-band-channels",
        "C-band capacity is quoted both as 40 channels at 400 Gb/s (100 GHz grid) and as 80 wavelengths; \
         the default plan declares 80 channels on a 50 GHz grid.",
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footnote {
    pub key: String,
    pub text: String,
}

pub fn footnotes() -> Vec<Footnote> {
    FOOTNOTES.iter().map(|(k, t)| Footnote { key: k.to_string(), text: t.to_string() }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledFeasibility {
    /// e.g. `C-only` or `full plan`.
    pub plan: String,
    pub report: FeasibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub scenario: NetworkScenario,
    pub baseline: ArchitectureKind,
    pub results: BTreeMap<ArchitectureKind, DimensioningResult>,
    pub costs: CostReport,
    pub spectrum: BTreeMap<ArchitectureKind, Vec<LabeledFeasibility>>,
    pub footnotes: Vec<Footnote>,
}

impl ComparisonReport {
    pub fn architectures(&self) -> impl Iterator<Item = ArchitectureKind> + '_ {
        self.results.keys().copied()
    }

    pub fn feasibility(&self, arch: ArchitectureKind, plan_label: &str) -> Option<&FeasibilityReport> {
        self.spectrum.get(&arch)?.iter().find(|f| f.plan == plan_label).map(|f| &f.report)
    }

    pub fn has_footnote(&self, key: &str) -> bool {
        self.footnotes.iter().any(|f| f.key == key)
    }
}

pub const PLAN_C_ONLY: &str = "C-only";
pub const PLAN_FULL: &str = "full plan";

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub architectures: Vec<ArchitectureKind>,
    pub ptmp_count_mode: PtmpCountMode,
    pub baseline: ArchitectureKind,
    pub footnotes: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            architectures: ArchitectureKind::ALL.to_vec(),
            ptmp_count_mode: PtmpCountMode::WorkedExample,
            baseline: ArchitectureKind::GroomingHierarchical,
            footnotes: true,
        }
    }
}

/// Runs every requested architecture in exact mode, costs them, and checks
/// spectrum feasibility of the bypass architectures against the C band
/// alone (when the plan has one) and against the full plan.
pub fn build_comparison(
    scenario: &NetworkScenario,
    plan: &SpectrumPlan,
    model: &CostModel,
    options: &CompareOptions,
) -> Result<ComparisonReport, Error> {
    scenario.validate()?;
    plan.validate()?;
    model.validate()?;
    let topology = generate_topology(scenario)?;
    let mut results = BTreeMap::new();
    for &arch in &options.architectures {
        let r = dimension(scenario, arch, Mode::Exact, options.ptmp_count_mode, Some(&topology))?;
        results.insert(arch, r);
    }
    let costs = compare(&results, model, scenario)?;

    let mut plans = Vec::new();
    if plan.band(BandName::C).is_some() && plan.bands.len() > 1 {
        plans.push((PLAN_C_ONLY, plan.restricted_to(&[BandName::C])?));
    }
    plans.push((PLAN_FULL, plan.clone()));

    let mut spectrum = BTreeMap::new();
    for &arch in results.keys().filter(|a| a.bypasses_hl3()) {
        let checks = plans
            .iter()
            .map(|(label, p)| {
                feasibility_report(p, &topology, arch, scenario)
                    .map(|report| LabeledFeasibility { plan: label.to_string(), report })
            })
            .collect::<Result<Vec<_>, _>>()?;
        spectrum.insert(arch, checks);
    }

    Ok(ComparisonReport {
        scenario: scenario.clone(),
        baseline: options.baseline,
        results,
        costs,
        spectrum,
        footnotes: if options.footnotes { footnotes() } else { Vec::new() },
    })
}
