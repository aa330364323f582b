use thiserror::Error;

use crate::scenario::NodeId;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("scenario parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("node {node} cannot reach any HL1/2 node")]
    Disconnected { node: NodeId },
}

#[derive(Debug, Error)]
pub enum DimensionError {
    #[error("worked-example PtMP counting needs a topology to resolve HL4 to HL1/2 attachment")]
    MissingTopology,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("invalid spectrum plan: {0}")]
    InvalidPlan(String),
    #[error("declared channel count missing for band {0}")]
    MissingDeclaredCount(String),
    #[error("unknown band `{0}`")]
    UnknownBand(String),
    #[error("node {0} does not exist in the topology")]
    UnknownNode(NodeId),
    #[error("no route from node {source_node} to node {destination}")]
    Unreachable { source_node: NodeId, destination: NodeId },
    #[error("spectrum plan parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

#[derive(Debug, Error)]
pub enum CostError {
    #[error("approximate dimensioning results cannot be costed")]
    ApproximateResult,
    #[error("comparison needs at least two architectures, got {0}")]
    TooFewArchitectures(usize),
    #[error("invalid cost model field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("cost model parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("malformed sweep spec `{0}`: expected field=start:stop:step")]
    Malformed(String),
    #[error("unknown sweep field `{0}` (expected a4_gbps, eta, h4 or fanout_m)")]
    UnknownField(String),
    #[error("sweep spec `{spec}`: {reason}")]
    BadRange { spec: String, reason: String },
    #[error("sweep field {field} needs whole numbers, got {value}")]
    NotIntegral { field: &'static str, value: f64 },
}

/// Any failure of the planning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}
