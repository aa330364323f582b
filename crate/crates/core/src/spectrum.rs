//! Multi-band (O/E/S/C/L) channel plans and first-fit routing and spectrum
//! assignment under the wavelength-continuity constraint.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dimensioning::{channels_per_hl4, uplink_channels_per_hl3, ArchitectureKind};
use crate::error::SpectrumError;
use crate::scenario::{Level, LinkId, NetworkScenario, NodeId, PhysicalTopology};

/// Speed of light expressed in THz * nm.
pub const SPEED_OF_LIGHT_THZ_NM: f64 = 299_792.458;

pub fn wavelength_to_thz(lambda_nm: f64) -> f64 {
    SPEED_OF_LIGHT_THZ_NM / lambda_nm
}

pub fn thz_to_wavelength(freq_thz: f64) -> f64 {
    SPEED_OF_LIGHT_THZ_NM / freq_thz
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BandName {
    O,
    E,
    S,
    C,
    L,
}

impl BandName {
    pub const ALL: [BandName; 5] = [BandName::O, BandName::E, BandName::S, BandName::C, BandName::L];
}

impl fmt::Display for BandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BandName::O => "O",
            BandName::E => "E",
            BandName::S => "S",
            BandName::C => "C",
            BandName::L => "L",
        };
        f.write_str(s)
    }
}

impl FromStr for BandName {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "O" | "o" => Ok(BandName::O),
            "E" | "e" => Ok(BandName::E),
            "S" | "s" => Ok(BandName::S),
            "C" | "c" => Ok(BandName::C),
            "L" | "l" => Ok(BandName::L),
            other => Err(SpectrumError::UnknownBand(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub name: BandName,
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
    /// Maximum transparent reach; `None` means unlimited.
    pub reach_limit_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_count_declared: Option<u32>,
}

impl Band {
    pub fn new(name: BandName, lambda_min_nm: f64, lambda_max_nm: f64) -> Self {
        Band { name, lambda_min_nm, lambda_max_nm, reach_limit_km: None, channel_count_declared: None }
    }

    pub fn with_reach(mut self, km: f64) -> Self {
        self.reach_limit_km = Some(km);
        self
    }

    pub fn with_declared(mut self, channels: u32) -> Self {
        self.channel_count_declared = Some(channels);
        self
    }

    /// Standard wavelength edges for a band, unlimited reach.
    pub fn standard(name: BandName) -> Self {
        let (lo, hi) = match name {
            BandName::O => (1260.0, 1360.0),
            BandName::E => (1360.0, 1460.0),
            BandName::S => (1460.0, 1530.0),
            BandName::C => (1530.0, 1565.0),
            BandName::L => (1565.0, 1625.0),
        };
        Band::new(name, lo, hi)
    }

    pub fn width_thz(&self) -> f64 {
        band_width_thz(self)
    }

    pub fn allows_reach(&self, length_km: f64) -> bool {
        self.reach_limit_km.is_none_or(|r| r >= length_km)
    }
}

/// Optical frequency width of the band, `c (1/lambda_min - 1/lambda_max)`.
pub fn band_width_thz(band: &Band) -> f64 {
    span_width_thz(band.lambda_min_nm, band.lambda_max_nm)
}

pub fn span_width_thz(lambda_min_nm: f64, lambda_max_nm: f64) -> f64 {
    if lambda_max_nm <= lambda_min_nm {
        return 0.0;
    }
    SPEED_OF_LIGHT_THZ_NM * (1.0 / lambda_min_nm - 1.0 / lambda_max_nm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMode {
    /// Channels per band = floor(width / grid spacing).
    Computed,
    /// Channels per band taken from each band's declared override.
    #[default]
    Declared,
}

pub const DEFAULT_GRID_SPACING_GHZ: f64 = 50.0;

/// Declared channel counts of the default multi-band plan. C = 80 and the
/// 900 total are the reference figures; the split of the other 820 keeps
/// L at 120 and shares the rest among S/E/O in proportion to their widths
/// (largest remainder rounding).
pub const DEFAULT_DECLARED_CHANNELS: [(BandName, u32); 5] = [
    (BandName::C, 80),
    (BandName::L, 120),
    (BandName::S, 156),
    (BandName::E, 252),
    (BandName::O, 292),
];

fn default_reach_km(name: BandName) -> Option<f64> {
    match name {
        BandName::C | BandName::L => None,
        BandName::S => Some(500.0),
        BandName::E => Some(150.0),
        BandName::O => Some(100.0),
    }
}

fn default_grid_spacing() -> f64 {
    DEFAULT_GRID_SPACING_GHZ
}

/// Ordered band list; order is the assignment preference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumPlan {
    pub bands: Vec<Band>,
    #[serde(default = "default_grid_spacing")]
    pub grid_spacing_ghz: f64,
    #[serde(default)]
    pub mode: ChannelMode,
}

impl Default for SpectrumPlan {
    fn default() -> Self {
        SpectrumPlan::multiband_declared()
    }
}

impl SpectrumPlan {
    /// All five bands in C, L, S, E, O preference with default reach limits
    /// and the declared 900-channel table.
    pub fn multiband_declared() -> Self {
        let bands = DEFAULT_DECLARED_CHANNELS
            .iter()
            .map(|&(name, n)| {
                let mut b = Band::standard(name).with_declared(n);
                b.reach_limit_km = default_reach_km(name);
                b
            })
            .collect();
        SpectrumPlan { bands, grid_spacing_ghz: DEFAULT_GRID_SPACING_GHZ, mode: ChannelMode::Declared }
    }

    /// Same bands and reach limits with grid-derived channel counts.
    pub fn multiband_computed(grid_spacing_ghz: f64) -> Self {
        let mut plan = SpectrumPlan::multiband_declared();
        plan.grid_spacing_ghz = grid_spacing_ghz;
        plan.mode = ChannelMode::Computed;
        plan
    }

    /// C band only, 80 declared channels.
    pub fn c_band_only() -> Self {
        SpectrumPlan::multiband_declared()
            .restricted_to(&[BandName::C])
            .expect("default plan has a C band")
    }

    pub fn band(&self, name: BandName) -> Option<&Band> {
        self.bands.iter().find(|b| b.name == name)
    }

    /// Keeps only `names`, preserving plan order.
    pub fn restricted_to(&self, names: &[BandName]) -> Result<SpectrumPlan, SpectrumError> {
        if let Some(missing) = names.iter().find(|n| self.band(**n).is_none()) {
            return Err(SpectrumError::UnknownBand(missing.to_string()));
        }
        Ok(SpectrumPlan {
            bands: self.bands.iter().filter(|b| names.contains(&b.name)).cloned().collect(),
            grid_spacing_ghz: self.grid_spacing_ghz,
            mode: self.mode,
        })
    }

    pub fn validate(&self) -> Result<&Self, SpectrumError> {
        let invalid = |msg: String| Err(SpectrumError::InvalidPlan(msg));
        if !(self.grid_spacing_ghz.is_finite() && self.grid_spacing_ghz > 0.0) {
            return invalid(format!("grid_spacing_ghz must be positive, got {}", self.grid_spacing_ghz));
        }
        for (i, b) in self.bands.iter().enumerate() {
            if !(b.lambda_min_nm.is_finite() && b.lambda_max_nm.is_finite() && b.lambda_min_nm > 0.0) {
                return invalid(format!("band {} has non-positive or non-finite edges", b.name));
            }
            if b.lambda_min_nm > b.lambda_max_nm {
                return invalid(format!(
                    "band {}: lambda_min_nm {} exceeds lambda_max_nm {}",
                    b.name, b.lambda_min_nm, b.lambda_max_nm
                ));
            }
            if let Some(r) = b.reach_limit_km {
                if !(r.is_finite() && r > 0.0) {
                    return invalid(format!("band {}: reach_limit_km must be positive", b.name));
                }
            }
            if self.bands[..i].iter().any(|o| o.name == b.name) {
                return invalid(format!("band {} listed twice", b.name));
            }
        }
        let mut by_edge: Vec<&Band> = self.bands.iter().collect();
        by_edge.sort_by(|x, y| x.lambda_min_nm.total_cmp(&y.lambda_min_nm));
        for w in by_edge.windows(2) {
            if w[0].lambda_max_nm > w[1].lambda_min_nm {
                return invalid(format!("bands {} and {} overlap", w[0].name, w[1].name));
            }
        }
        if self.mode == ChannelMode::Declared {
            if let Some(b) = self.bands.iter().find(|b| b.channel_count_declared.is_none()) {
                return Err(SpectrumError::MissingDeclaredCount(b.name.to_string()));
            }
        }
        Ok(self)
    }

    pub fn channel_count(&self, name: BandName) -> Result<u32, SpectrumError> {
        let band = self.band(name).ok_or_else(|| SpectrumError::UnknownBand(name.to_string()))?;
        self.channels_in(band)
    }

    fn channels_in(&self, band: &Band) -> Result<u32, SpectrumError> {
        match self.mode {
            ChannelMode::Computed => {
                let slots = band_width_thz(band) * 1000.0 / self.grid_spacing_ghz;
                Ok((slots * (1.0 + 1e-9)).floor() as u32)
            }
            ChannelMode::Declared => band
                .channel_count_declared
                .ok_or_else(|| SpectrumError::MissingDeclaredCount(band.name.to_string())),
        }
    }

    pub fn total_channels(&self) -> Result<u32, SpectrumError> {
        self.bands.iter().map(|b| self.channels_in(b)).sum()
    }

    /// Lowest and highest wavelength covered by the plan.
    pub fn span_nm(&self) -> Option<(f64, f64)> {
        let lo = self.bands.iter().map(|b| b.lambda_min_nm).min_by(f64::total_cmp)?;
        let hi = self.bands.iter().map(|b| b.lambda_max_nm).max_by(f64::total_cmp)?;
        Some((lo, hi))
    }
}

fn plan_parse_error(e: serde_path_to_error::Error<serde_json::Error>) -> SpectrumError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    SpectrumError::Parse { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
}

pub fn parse_plan(text: &str) -> Result<SpectrumPlan, SpectrumError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let plan: SpectrumPlan = serde_path_to_error::deserialize(de).map_err(plan_parse_error)?;
    plan.validate()?;
    Ok(plan)
}

pub fn load_plan(path: impl AsRef<Path>) -> Result<SpectrumPlan, SpectrumError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| SpectrumError::Io { path: path.display().to_string(), source })?;
    parse_plan(&text)
}

pub fn plan_to_json(plan: &SpectrumPlan) -> String {
    serde_json::to_string_pretty(plan).expect("plan serializes")
}

/// Traffic between two nodes needing `channels` lightpaths on one route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub source: NodeId,
    pub destination: NodeId,
    pub channels: u32,
    /// Offered traffic carried by the demand.
    pub rate_gbps: f64,
}

/// Lightpath requests each architecture places on the physical layer.
pub fn demands_for(
    arch: ArchitectureKind,
    scenario: &NetworkScenario,
    topology: &PhysicalTopology,
) -> Vec<Demand> {
    let per_hl4 = channels_per_hl4(scenario) as u32;
    let mut demands = Vec::new();
    match arch {
        ArchitectureKind::GroomingHierarchical => {
            if per_hl4 > 0 {
                for hl4 in topology.nodes_at(Level::Hl4) {
                    if let Some(parent) = topology.parent_hl3(hl4) {
                        demands.push(Demand {
                            source: hl4,
                            destination: parent,
                            channels: per_hl4,
                            rate_gbps: scenario.a4_gbps,
                        });
                    }
                }
            }
            let uplink = uplink_channels_per_hl3(scenario) as u32;
            if uplink > 0 {
                let share = f64::from(scenario.h4) / f64::from(scenario.h3) * scenario.eta * scenario.a4_gbps;
                for hl3 in topology.nodes_at(Level::Hl3) {
                    if let Some(hub) = topology.hub_of(hl3) {
                        demands.push(Demand { source: hl3, destination: hub, channels: uplink, rate_gbps: share });
                    }
                }
            }
        }
        ArchitectureKind::OpticalContinuum | ArchitectureKind::PtmpPluggable => {
            if per_hl4 > 0 {
                for (hl4, hub) in topology.hub_assignment() {
                    demands.push(Demand {
                        source: hl4,
                        destination: hub,
                        channels: per_hl4,
                        rate_gbps: scenario.a4_gbps,
                    });
                }
            }
        }
    }
    demands
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMetric {
    #[default]
    Hops,
    Km,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
    pub length_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lightpath {
    pub demand_index: usize,
    pub source: NodeId,
    pub destination: NodeId,
    pub route: Route,
    pub band: BandName,
    pub channel: u32,
    pub rate_gbps: f64,
}

/// One channel of a demand that found no free (band, channel).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockedRequest {
    pub demand_index: usize,
    pub source: NodeId,
    pub destination: NodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub lightpaths: Vec<Lightpath>,
    pub blocked: Vec<BlockedRequest>,
    /// Occupied channels per link, indexed by link id.
    pub per_link_peak: Vec<u32>,
}

impl Assignment {
    pub fn peak_link_occupancy(&self) -> u32 {
        self.per_link_peak.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry(f64, NodeId);

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

struct Router<'a> {
    topology: &'a PhysicalTopology,
    adj: Vec<Vec<(NodeId, LinkId)>>,
    metric: RoutingMetric,
    dist_cache: HashMap<NodeId, Vec<Option<f64>>>,
}

impl<'a> Router<'a> {
    fn new(topology: &'a PhysicalTopology, metric: RoutingMetric) -> Self {
        Router { topology, adj: topology.adjacency(), metric, dist_cache: HashMap::new() }
    }

    fn weight(&self, link: LinkId) -> f64 {
        match self.metric {
            RoutingMetric::Hops => 1.0,
            RoutingMetric::Km => self.topology.links[link].length_km,
        }
    }

    fn distances_to(&self, dest: NodeId) -> Vec<Option<f64>> {
        let mut dist = vec![None; self.adj.len()];
        dist[dest] = Some(0.0);
        let mut heap = BinaryHeap::from([HeapEntry(0.0, dest)]);
        while let Some(HeapEntry(d, u)) = heap.pop() {
            if dist[u].is_some_and(|best| d > best) {
                continue;
            }
            for &(v, link) in &self.adj[u] {
                let nd = d + self.weight(link);
                if dist[v].is_none_or(|old| nd < old) {
                    dist[v] = Some(nd);
                    heap.push(HeapEntry(nd, v));
                }
            }
        }
        dist
    }

    /// Shortest route; among equal-cost routes, the lexicographically
    /// smallest node-id sequence.
    fn route(&mut self, source: NodeId, dest: NodeId) -> Result<Route, SpectrumError> {
        let n = self.adj.len();
        for node in [source, dest] {
            if node >= n {
                return Err(SpectrumError::UnknownNode(node));
            }
        }
        if !self.dist_cache.contains_key(&dest) {
            let d = self.distances_to(dest);
            self.dist_cache.insert(dest, d);
        }
        let dist = &self.dist_cache[&dest];
        if dist[source].is_none() {
            return Err(SpectrumError::Unreachable { source_node: source, destination: dest });
        }
        let tol = 1e-9;
        let mut nodes = vec![source];
        let mut links = Vec::new();
        let mut length_km = 0.0;
        let mut u = source;
        while u != dest {
            let du = dist[u].expect("on a shortest path");
            let &(v, link) = self.adj[u]
                .iter()
                .find(|&&(v, link)| dist[v].is_some_and(|dv| (dv + self.weight(link) - du).abs() <= tol * du.max(1.0)))
                .expect("a shortest-path successor exists");
            nodes.push(v);
            links.push(link);
            length_km += self.topology.links[link].length_km;
            u = v;
        }
        Ok(Route { nodes, links, length_km })
    }
}

/// Per-link (band, channel) occupancy.
struct Occupancy {
    offsets: Vec<usize>,
    counts: Vec<u32>,
    width: usize,
    slots: Vec<bool>,
}

impl Occupancy {
    fn new(counts: Vec<u32>, links: usize) -> Self {
        let mut offsets = Vec::with_capacity(counts.len());
        let mut width = 0;
        for &c in &counts {
            offsets.push(width);
            width += c as usize;
        }
        Occupancy { offsets, counts, width, slots: vec![false; width * links] }
    }

    fn free(&self, link: LinkId, band: usize, ch: u32) -> bool {
        !self.slots[link * self.width + self.offsets[band] + ch as usize]
    }

    fn take(&mut self, link: LinkId, band: usize, ch: u32) {
        self.slots[link * self.width + self.offsets[band] + ch as usize] = true;
    }

    fn first_fit(&self, band: usize, links: &[LinkId]) -> Option<u32> {
        (0..self.counts[band]).find(|&ch| links.iter().all(|&l| self.free(l, band, ch)))
    }
}

/// First-fit assignment with hop-count routing.
pub fn assign_spectrum(
    plan: &SpectrumPlan,
    topology: &PhysicalTopology,
    demands: &[Demand],
) -> Result<Assignment, SpectrumError> {
    assign_spectrum_with(plan, topology, demands, RoutingMetric::Hops)
}

/// Demands are served in input order. Each is routed once; every channel
/// then takes the first band (plan order) whose reach covers the route and
/// the lowest channel index free on every link of the route.
pub fn assign_spectrum_with(
    plan: &SpectrumPlan,
    topology: &PhysicalTopology,
    demands: &[Demand],
    metric: RoutingMetric,
) -> Result<Assignment, SpectrumError> {
    plan.validate()?;
    let counts = plan.bands.iter().map(|b| plan.channels_in(b)).collect::<Result<Vec<_>, _>>()?;
    let mut occupancy = Occupancy::new(counts, topology.links.len());
    let mut router = Router::new(topology, metric);
    let mut per_link_peak = vec![0u32; topology.links.len()];
    let mut lightpaths = Vec::new();
    let mut blocked = Vec::new();

    for (demand_index, demand) in demands.iter().enumerate() {
        let route = router.route(demand.source, demand.destination)?;
        for _ in 0..demand.channels {
            let slot = plan.bands.iter().enumerate().find_map(|(bi, band)| {
                if !band.allows_reach(route.length_km) {
                    return None;
                }
                occupancy.first_fit(bi, &route.links).map(|ch| (bi, ch))
            });
            match slot {
                Some((bi, ch)) => {
                    for &l in &route.links {
                        occupancy.take(l, bi, ch);
                        per_link_peak[l] += 1;
                    }
                    lightpaths.push(Lightpath {
                        demand_index,
                        source: demand.source,
                        destination: demand.destination,
                        route: route.clone(),
                        band: plan.bands[bi].name,
                        channel: ch,
                        rate_gbps: demand.rate_gbps / f64::from(demand.channels),
                    });
                }
                None => blocked.push(BlockedRequest {
                    demand_index,
                    source: demand.source,
                    destination: demand.destination,
                }),
            }
        }
    }
    Ok(Assignment { lightpaths, blocked, per_link_peak })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandUtilization {
    pub band: BandName,
    /// Occupied (link, channel) slots.
    pub assigned: u64,
    /// Links times channels in the band.
    pub available: u64,
    pub utilization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub architecture: ArchitectureKind,
    pub feasible: bool,
    pub peak_link_occupancy: u32,
    pub lightpath_count: usize,
    pub blocked_count: usize,
    pub band_utilization: Vec<BandUtilization>,
}

pub fn feasibility_from_assignment(
    plan: &SpectrumPlan,
    topology: &PhysicalTopology,
    architecture: ArchitectureKind,
    assignment: &Assignment,
) -> Result<FeasibilityReport, SpectrumError> {
    let links = topology.links.len() as u64;
    let band_utilization = plan
        .bands
        .iter()
        .map(|b| {
            let available = u64::from(plan.channels_in(b)?) * links;
            let assigned: u64 = assignment
                .lightpaths
                .iter()
                .filter(|lp| lp.band == b.name)
                .map(|lp| lp.route.links.len() as u64)
                .sum();
            let utilization = if available == 0 { 0.0 } else { assigned as f64 / available as f64 };
            Ok(BandUtilization { band: b.name, assigned, available, utilization })
        })
        .collect::<Result<Vec<_>, SpectrumError>>()?;
    Ok(FeasibilityReport {
        architecture,
        feasible: assignment.blocked.is_empty(),
        peak_link_occupancy: assignment.peak_link_occupancy(),
        lightpath_count: assignment.lightpaths.len(),
        blocked_count: assignment.blocked.len(),
        band_utilization,
    })
}

/// Builds the architecture's demand set and checks it fits the plan.
pub fn feasibility_report(
    plan: &SpectrumPlan,
    topology: &PhysicalTopology,
    arch: ArchitectureKind,
    scenario: &NetworkScenario,
) -> Result<FeasibilityReport, SpectrumError> {
    let demands = demands_for(arch, scenario, topology);
    let assignment = assign_spectrum(plan, topology, &demands)?;
    feasibility_from_assignment(plan, topology, arch, &assignment)
}
