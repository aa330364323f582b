//! Planning toolkit for metro transport networks: transceiver dimensioning
//! of hierarchical IP grooming, the multi-band optical continuum (HL3
//! bypass) and point-to-multipoint pluggables, CAPEX comparison in cost
//! units, and O/E/S/C/L spectrum feasibility checks.

pub mod cli;
pub mod costing;
pub mod dimensioning;
pub mod error;
pub mod parallel;
pub mod report;
pub mod scenario;
pub mod spectrum;
pub mod sweep;

pub use costing::{compare, cost, ArchitectureCost, CostModel, CostReport};
pub use dimensioning::{
    dimension, ArchitectureKind, DimensioningResult, LevelCounts, Mode, PtmpCountMode, Total,
};
pub use error::Error;
pub use parallel::Execution;
pub use report::{build_comparison, CompareOptions, ComparisonReport};
pub use scenario::{generate_topology, NetworkScenario, PhysicalTopology, TopologyKind};
pub use spectrum::{assign_spectrum, feasibility_report, Band, BandName, SpectrumPlan};
