//! Transceiver counts for the three transport architectures.
//!
//! * Hierarchical grooming: every HL4 terminates on an HL3 IP router which
//!   grooms the aggregate (scaled by `eta`) toward its HL1/2 node.
//! * Optical continuum: HL4 nodes reach HL1/2 over transparent lightpaths,
//!   bypassing HL3 electronics.
//! * PtMP pluggables: sliceable point-to-multipoint modules, one hub module at
//!   HL1/2 serving several HL4 spokes.
//!
//! Exact mode applies per-node ceilings and yields integer hardware counts.
//! Approximate mode evaluates the published closed forms, which drop terms
//! and are not consistent with the exact per-level sums (grooming comes out
//! at `(1 + 2 eta) A4/C H4` although summing the per-level terms gives
//! `(2 + 2 eta) A4/C H4` before ceilings). They are kept as sanity formulas
//! only and are never costed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DimensionError;
use crate::scenario::{Level, NetworkScenario, PhysicalTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchitectureKind {
    #[serde(rename = "grooming")]
    GroomingHierarchical,
    #[serde(rename = "continuum")]
    OpticalContinuum,
    #[serde(rename = "ptmp")]
    PtmpPluggable,
}

impl ArchitectureKind {
    pub const ALL: [ArchitectureKind; 3] = [
        ArchitectureKind::GroomingHierarchical,
        ArchitectureKind::OpticalContinuum,
        ArchitectureKind::PtmpPluggable,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            ArchitectureKind::GroomingHierarchical => "grooming",
            ArchitectureKind::OpticalContinuum => "continuum",
            ArchitectureKind::PtmpPluggable => "ptmp",
        }
    }

    /// True when HL3 electronics are bypassed.
    pub fn bypasses_hl3(self) -> bool {
        !matches!(self, ArchitectureKind::GroomingHierarchical)
    }
}

impl fmt::Display for ArchitectureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exact,
    Approximate,
}

/// How PtMP modules are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PtmpCountMode {
    /// Literal per-slice formula: each HL4 needs `ceil(A4 / (C/m))` modules
    /// and the HL1/2 side needs `1/m` of that, rounded up.
    PerSlice,
    /// One full-rate sliceable module per HL4 (for `A4 <= C`), and each
    /// HL1/2 hub pools the traffic of its attached HL4 nodes.
    #[default]
    WorkedExample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LevelCounts {
    pub hl4: u64,
    pub hl3: u64,
    pub hl12: u64,
}

impl LevelCounts {
    pub fn total(&self) -> u64 {
        self.hl4 + self.hl3 + self.hl12
    }

    pub fn get(&self, level: Level) -> u64 {
        match level {
            Level::Hl4 => self.hl4,
            Level::Hl3 => self.hl3,
            Level::Hl12 => self.hl12,
        }
    }

    pub fn as_map(&self) -> BTreeMap<Level, u64> {
        [Level::Hl4, Level::Hl3, Level::Hl12].into_iter().map(|l| (l, self.get(l))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Total {
    Exact(u64),
    Approximate(f64),
}

impl Total {
    pub fn value(&self) -> f64 {
        match *self {
            Total::Exact(n) => n as f64,
            Total::Approximate(x) => x,
        }
    }
}

impl fmt::Display for Total {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Total::Exact(n) => write!(f, "{n}"),
            Total::Approximate(x) => write!(f, "{x:.2}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensioningResult {
    pub architecture: ArchitectureKind,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ptmp_count_mode: Option<PtmpCountMode>,
    /// Absent in approximate mode.
    pub per_level: Option<LevelCounts>,
    pub total: Total,
    pub electronic_hops_per_demand: u32,
    pub oeo_terminations_per_demand: u32,
}

impl DimensioningResult {
    fn exact(architecture: ArchitectureKind, per_level: LevelCounts) -> Self {
        let (hops, oeo) = hop_metrics(architecture);
        DimensioningResult {
            architecture,
            mode: Mode::Exact,
            ptmp_count_mode: None,
            per_level: Some(per_level),
            total: Total::Exact(per_level.total()),
            electronic_hops_per_demand: hops,
            oeo_terminations_per_demand: oeo,
        }
    }

    fn approximate(architecture: ArchitectureKind, total: f64) -> Self {
        let (hops, oeo) = hop_metrics(architecture);
        DimensioningResult {
            architecture,
            mode: Mode::Approximate,
            ptmp_count_mode: None,
            per_level: None,
            total: Total::Approximate(total),
            electronic_hops_per_demand: hops,
            oeo_terminations_per_demand: oeo,
        }
    }

    pub fn exact_total(&self) -> Option<u64> {
        match self.total {
            Total::Exact(n) => Some(n),
            Total::Approximate(_) => None,
        }
    }
}

/// Intermediate electronic stages and O/E/O terminations per HL4 -> HL1/2
/// demand in the three-level model.
fn hop_metrics(kind: ArchitectureKind) -> (u32, u32) {
    match kind {
        ArchitectureKind::GroomingHierarchical => (1, 2),
        ArchitectureKind::OpticalContinuum | ArchitectureKind::PtmpPluggable => (0, 0),
    }
}

const CEIL_REL_TOL: f64 = 1e-9;

/// Smallest integer >= `x`, ignoring relative float noise below 1e-9 so
/// that e.g. `3.0000000000000004` counts as 3 units.
pub fn ceil_count(x: f64) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    (x * (1.0 - CEIL_REL_TOL)).ceil() as u64
}

/// Channels each HL4 node sources: `ceil(A4 / C)`.
pub fn channels_per_hl4(s: &NetworkScenario) -> u64 {
    ceil_count(s.a4_gbps / s.channel_rate_gbps)
}

/// Groomed uplink channels per HL3 node: `ceil((H4/H3) * eta * A4 / C)`.
pub fn uplink_channels_per_hl3(s: &NetworkScenario) -> u64 {
    ceil_count(f64::from(s.h4) / f64::from(s.h3) * s.eta * s.a4_gbps / s.channel_rate_gbps)
}

pub fn dimension_grooming_exact(s: &NetworkScenario) -> DimensioningResult {
    let access = channels_per_hl4(s) * u64::from(s.h4);
    let uplinks = uplink_channels_per_hl3(s) * u64::from(s.h3);
    DimensioningResult::exact(
        ArchitectureKind::GroomingHierarchical,
        LevelCounts { hl4: access, hl3: access + uplinks, hl12: uplinks },
    )
}

pub fn dimension_grooming_approx(s: &NetworkScenario) -> DimensioningResult {
    let total = (1.0 + 2.0 * s.eta) * s.a4_gbps / s.channel_rate_gbps * f64::from(s.h4);
    DimensioningResult::approximate(ArchitectureKind::GroomingHierarchical, total)
}

pub fn dimension_continuum_exact(s: &NetworkScenario) -> DimensioningResult {
    let n = channels_per_hl4(s) * u64::from(s.h4);
    DimensioningResult::exact(
        ArchitectureKind::OpticalContinuum,
        LevelCounts { hl4: n, hl3: 0, hl12: n },
    )
}

pub fn dimension_continuum_approx(s: &NetworkScenario) -> DimensioningResult {
    let total = 2.0 * s.a4_gbps / s.channel_rate_gbps * f64::from(s.h4);
    DimensioningResult::approximate(ArchitectureKind::OpticalContinuum, total)
}

/// Exact PtMP module counts. `topology` is required in
/// [`PtmpCountMode::WorkedExample`] to group HL4 nodes by their HL1/2 hub.
pub fn dimension_ptmp(
    s: &NetworkScenario,
    count_mode: PtmpCountMode,
    topology: Option<&PhysicalTopology>,
) -> Result<DimensioningResult, DimensionError> {
    let counts = match count_mode {
        PtmpCountMode::PerSlice => {
            let m = u64::from(s.fanout_m);
            let slice_rate = s.channel_rate_gbps / s.fanout_m as f64;
            let spokes = ceil_count(s.a4_gbps / slice_rate) * u64::from(s.h4);
            LevelCounts { hl4: spokes, hl3: 0, hl12: spokes.div_ceil(m) }
        }
        PtmpCountMode::WorkedExample => {
            let topology = topology.ok_or(DimensionError::MissingTopology)?;
            let mut per_hub: BTreeMap<usize, u64> = BTreeMap::new();
            for (_, hub) in topology.hub_assignment() {
                *per_hub.entry(hub).or_default() += 1;
            }
            let hub_modules = per_hub
                .values()
                .map(|&spokes| ceil_count(spokes as f64 * s.a4_gbps / s.channel_rate_gbps))
                .sum();
            LevelCounts { hl4: channels_per_hl4(s) * u64::from(s.h4), hl3: 0, hl12: hub_modules }
        }
    };
    let mut result = DimensioningResult::exact(ArchitectureKind::PtmpPluggable, counts);
    result.ptmp_count_mode = Some(count_mode);
    Ok(result)
}

/// Closed form `A4 / (C/m) * H4 * (1 + 1/m)`.
pub fn dimension_ptmp_approx(s: &NetworkScenario) -> DimensioningResult {
    let m = s.fanout_m as f64;
    let total = s.a4_gbps / (s.channel_rate_gbps / m) * f64::from(s.h4) * (1.0 + 1.0 / m);
    DimensioningResult::approximate(ArchitectureKind::PtmpPluggable, total)
}

pub fn dimension(
    s: &NetworkScenario,
    kind: ArchitectureKind,
    mode: Mode,
    ptmp_count_mode: PtmpCountMode,
    topology: Option<&PhysicalTopology>,
) -> Result<DimensioningResult, DimensionError> {
    Ok(match (kind, mode) {
        (ArchitectureKind::GroomingHierarchical, Mode::Exact) => dimension_grooming_exact(s),
        (ArchitectureKind::GroomingHierarchical, Mode::Approximate) => dimension_grooming_approx(s),
        (ArchitectureKind::OpticalContinuum, Mode::Exact) => dimension_continuum_exact(s),
        (ArchitectureKind::OpticalContinuum, Mode::Approximate) => dimension_continuum_approx(s),
        (ArchitectureKind::PtmpPluggable, Mode::Exact) => dimension_ptmp(s, ptmp_count_mode, topology)?,
        (ArchitectureKind::PtmpPluggable, Mode::Approximate) => {
            let mut r = dimension_ptmp_approx(s);
            r.ptmp_count_mode = Some(ptmp_count_mode);
            r
        }
    })
}

/// Any-to-any packet connectivity between `n` routers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityScheme {
    /// Dedicated interface and channel toward every other node.
    FullMesh,
    /// Single interface toward a grooming transit router.
    Hierarchical,
    /// Sliceable 1:m modules, each reaching m peers.
    Ptmp { fanout: u32 },
}

/// Interfaces one router needs under `scheme` in an `n`-node network.
pub fn interfaces_per_node(scheme: ConnectivityScheme, n: u64) -> u64 {
    let peers = n.saturating_sub(1);
    match scheme {
        ConnectivityScheme::FullMesh => peers,
        ConnectivityScheme::Hierarchical => peers.min(1),
        ConnectivityScheme::Ptmp { fanout } => peers.div_ceil(u64::from(fanout.max(1))),
    }
}

/// Optical channels the scheme lights up across the whole network
/// (bidirectional point-to-point channels; transit routers not counted).
pub fn channels_required(scheme: ConnectivityScheme, n: u64) -> u64 {
    match scheme {
        ConnectivityScheme::FullMesh => n * n.saturating_sub(1) / 2,
        ConnectivityScheme::Hierarchical => n,
        ConnectivityScheme::Ptmp { .. } => n * n.saturating_sub(1) / 2,
    }
}
