//! Scenario input model and physical topology generation.
//!
//! A [`NetworkScenario`] describes a three-level metro hierarchy (HL4 access
//! aggregation, HL3 metro grooming, HL1/2 core interconnection). The
//! generator turns it into a [`PhysicalTopology`] with balanced attachment.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;

pub const DEFAULT_CHANNEL_RATE_GBPS: f64 = 400.0;
pub const DEFAULT_FANOUT: u32 = 4;
pub const DEFAULT_LINK_LENGTH_KM: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    #[default]
    Tree,
    /// HL3 and HL1/2 nodes on one cycle, HL4 as leaves.
    Ring,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyKind::Tree => f.write_str("tree"),
            TopologyKind::Ring => f.write_str("ring"),
        }
    }
}

/// The single planning input record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkScenario {
    pub h4: u32,
    pub h3: u32,
    pub h12: u32,
    /// Average source traffic per HL4 node, Gb/s.
    pub a4_gbps: f64,
    /// Oversubscription ratio applied at the HL3 grooming stage.
    pub eta: f64,
    #[serde(default = "default_channel_rate")]
    pub channel_rate_gbps: f64,
    #[serde(default = "default_fanout")]
    pub fanout_m: u32,
    #[serde(default)]
    pub topology_kind: TopologyKind,
    #[serde(default = "default_link_length")]
    pub link_length_km: f64,
}

fn default_channel_rate() -> f64 {
    DEFAULT_CHANNEL_RATE_GBPS
}

fn default_fanout() -> u32 {
    DEFAULT_FANOUT
}

fn default_link_length() -> f64 {
    DEFAULT_LINK_LENGTH_KM
}

impl NetworkScenario {
    /// Scenario with default rate, fanout, tree layout and link length.
    pub fn new(h4: u32, h3: u32, h12: u32, a4_gbps: f64, eta: f64) -> Self {
        NetworkScenario {
            h4,
            h3,
            h12,
            a4_gbps,
            eta,
            channel_rate_gbps: DEFAULT_CHANNEL_RATE_GBPS,
            fanout_m: DEFAULT_FANOUT,
            topology_kind: TopologyKind::Tree,
            link_length_km: DEFAULT_LINK_LENGTH_KM,
        }
    }

    /// The 200/40/5 metro area network with 300G per HL4 and eta = 0.5.
    pub fn reference_man() -> Self {
        NetworkScenario::new(200, 40, 5, 300.0, 0.5)
    }

    pub fn with_topology(mut self, kind: TopologyKind) -> Self {
        self.topology_kind = kind;
        self
    }

    pub fn with_fanout(mut self, m: u32) -> Self {
        self.fanout_m = m;
        self
    }

    pub fn with_channel_rate(mut self, gbps: f64) -> Self {
        self.channel_rate_gbps = gbps;
        self
    }

    /// Checks every field invariant, reporting the first violation.
    pub fn validate(&self) -> Result<&Self, ScenarioError> {
        let invalid = |field: &'static str, reason: String| Err(ScenarioError::Invalid { field, reason });
        if self.h4 == 0 {
            return invalid("h4", "must be at least 1".into());
        }
        if self.h3 == 0 {
            return invalid("h3", "must be at least 1".into());
        }
        if self.h12 == 0 {
            return invalid("h12", "must be at least 1".into());
        }
        if self.h3 > self.h4 {
            return invalid("h3", format!("h3 exceeds h4 ({} > {})", self.h3, self.h4));
        }
        if self.h12 > self.h3 {
            return invalid("h12", format!("h12 exceeds h3 ({} > {})", self.h12, self.h3));
        }
        if !self.a4_gbps.is_finite() || self.a4_gbps < 0.0 {
            return invalid("a4_gbps", format!("must be a non-negative number, got {}", self.a4_gbps));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return invalid("eta", format!("eta out of range [0, 1]: {}", self.eta));
        }
        if !self.channel_rate_gbps.is_finite() || self.channel_rate_gbps <= 0.0 {
            return invalid(
                "channel_rate_gbps",
                format!("must be positive, got {}", self.channel_rate_gbps),
            );
        }
        if self.fanout_m == 0 {
            return invalid("fanout_m", "must be at least 1".into());
        }
        if !self.link_length_km.is_finite() || self.link_length_km <= 0.0 {
            return invalid("link_length_km", format!("must be positive, got {}", self.link_length_km));
        }
        Ok(self)
    }
}

pub fn validate(scenario: &NetworkScenario) -> Result<&NetworkScenario, ScenarioError> {
    scenario.validate()
}

/// Parses a scenario document. Unknown fields are rejected.
pub fn parse_scenario(text: &str) -> Result<NetworkScenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: NetworkScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ScenarioError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    Ok(scenario)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<NetworkScenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn scenario_to_json(scenario: &NetworkScenario) -> String {
    serde_json::to_string_pretty(scenario).expect("scenario serializes")
}

pub fn save_scenario(scenario: &NetworkScenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    std::fs::write(path, scenario_to_json(scenario) + "\n").map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "HL12")]
    Hl12,
    #[serde(rename = "HL3")]
    Hl3,
    #[serde(rename = "HL4")]
    Hl4,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Hl12 => f.write_str("HL12"),
            Level::Hl3 => f.write_str("HL3"),
            Level::Hl4 => f.write_str("HL4"),
        }
    }
}

pub type NodeId = usize;
pub type LinkId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub level: Level,
}

/// Undirected fiber link; `a < b` always.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub length_km: f64,
}

impl Link {
    fn new(x: NodeId, y: NodeId, length_km: f64) -> Self {
        Link { a: x.min(y), b: x.max(y), length_km }
    }

    pub fn other(&self, n: NodeId) -> NodeId {
        if n == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Node ids are dense: HL1/2 first, then HL3, then HL4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalTopology {
    pub kind: TopologyKind,
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
}

impl PhysicalTopology {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes_at(&self, level: Level) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(move |n| n.level == level).map(|n| n.id)
    }

    pub fn level(&self, id: NodeId) -> Option<Level> {
        self.nodes.get(id).map(|n| n.level)
    }

    /// Per-node `(neighbor, link)` lists, sorted by neighbor id.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, LinkId)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, l) in self.links.iter().enumerate() {
            adj[l.a].push((l.b, i));
            adj[l.b].push((l.a, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Hop distance from `from` to every node (`None` when unreachable).
    pub fn hop_distances(&self, from: NodeId) -> Vec<Option<usize>> {
        bfs(&self.adjacency(), from)
    }

    /// Nearest HL1/2 node by hop count, lowest id on ties.
    pub fn hub_of(&self, node: NodeId) -> Option<NodeId> {
        let dist = self.hop_distances(node);
        self.nodes_at(Level::Hl12)
            .filter_map(|h| dist[h].map(|d| (d, h)))
            .min()
            .map(|(_, h)| h)
    }

    /// HL4 -> nearest HL1/2 for every HL4 node, in HL4 id order.
    pub fn hub_assignment(&self) -> Vec<(NodeId, NodeId)> {
        let adj = self.adjacency();
        // multi-source BFS from the hubs in id order yields nearest hub with lowest-id ties
        let mut owner: Vec<Option<(usize, NodeId)>> = vec![None; self.nodes.len()];
        let mut queue = VecDeque::new();
        for h in self.nodes_at(Level::Hl12) {
            owner[h] = Some((0, h));
            queue.push_back(h);
        }
        while let Some(u) = queue.pop_front() {
            let (d, hub) = owner[u].expect("queued nodes are owned");
            for &(v, _) in &adj[u] {
                match owner[v] {
                    None => {
                        owner[v] = Some((d + 1, hub));
                        queue.push_back(v);
                    }
                    Some((dv, hv)) if dv == d + 1 && hub < hv => owner[v] = Some((dv, hub)),
                    _ => {}
                }
            }
        }
        self.nodes_at(Level::Hl4)
            .filter_map(|n| owner[n].map(|(_, h)| (n, h)))
            .collect()
    }

    /// Adjacent HL3 node of an HL4 leaf.
    pub fn parent_hl3(&self, hl4: NodeId) -> Option<NodeId> {
        self.links
            .iter()
            .filter(|l| l.a == hl4 || l.b == hl4)
            .map(|l| l.other(hl4))
            .filter(|&n| self.level(n) == Some(Level::Hl3))
            .min()
    }

    /// Every node must reach some HL1/2 node. Tree layouts with several
    /// HL1/2 nodes are forests, one component per HL1/2 node.
    pub fn check_connectivity(&self) -> Result<(), ScenarioError> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut queue: VecDeque<NodeId> = self.nodes_at(Level::Hl12).collect();
        for &h in &queue {
            seen[h] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            None => Ok(()),
            Some(id) => Err(ScenarioError::Disconnected { node: id }),
        }
    }
}

pub(crate) fn bfs(adj: &[Vec<(NodeId, LinkId)>], from: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    if from >= adj.len() {
        return dist;
    }
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0);
        for &(v, _) in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Balanced round-robin parent index: child `i` of `children` goes to
/// parent `floor(i * parents / children)`.
fn balanced_parent(i: u32, children: u32, parents: u32) -> u32 {
    (u64::from(i) * u64::from(parents) / u64::from(children)) as u32
}

/// Builds the physical layout for a validated scenario. Deterministic.
pub fn generate_topology(scenario: &NetworkScenario) -> Result<PhysicalTopology, ScenarioError> {
    scenario.validate()?;
    let (h4, h3, h12) = (scenario.h4, scenario.h3, scenario.h12);
    let len = scenario.link_length_km;

    let hl12_id = |j: u32| j as NodeId;
    let hl3_id = |j: u32| (h12 + j) as NodeId;
    let hl4_id = |i: u32| (h12 + h3 + i) as NodeId;

    let mut nodes = Vec::with_capacity((h4 + h3 + h12) as usize);
    nodes.extend((0..h12).map(|j| Node { id: hl12_id(j), level: Level::Hl12 }));
    nodes.extend((0..h3).map(|j| Node { id: hl3_id(j), level: Level::Hl3 }));
    nodes.extend((0..h4).map(|i| Node { id: hl4_id(i), level: Level::Hl4 }));

    let mut links = Vec::new();
    match scenario.topology_kind {
        TopologyKind::Tree => {
            for j in 0..h3 {
                links.push(Link::new(hl3_id(j), hl12_id(balanced_parent(j, h3, h12)), len));
            }
        }
        TopologyKind::Ring => {
            let k = h3 + h12;
            let mut hub_slots = vec![false; k as usize];
            for i in 0..h12 {
                hub_slots[balanced_parent(i, h12, k) as usize] = true;
            }
            let mut next_hub = 0;
            let mut next_hl3 = 0;
            let cycle: Vec<NodeId> = hub_slots
                .iter()
                .map(|&is_hub| {
                    if is_hub {
                        next_hub += 1;
                        hl12_id(next_hub - 1)
                    } else {
                        next_hl3 += 1;
                        hl3_id(next_hl3 - 1)
                    }
                })
                .collect();
            if cycle.len() == 2 {
                // a two-node ring collapses to a single span
                links.push(Link::new(cycle[0], cycle[1], len));
            } else {
                for w in 0..cycle.len() {
                    links.push(Link::new(cycle[w], cycle[(w + 1) % cycle.len()], len));
                }
            }
        }
    }
    for i in 0..h4 {
        links.push(Link::new(hl4_id(i), hl3_id(balanced_parent(i, h4, h3)), len));
    }

    let topology = PhysicalTopology { kind: scenario.topology_kind, nodes, links };
    topology.check_connectivity()?;
    Ok(topology)
}
