//! Brute-force reference counts. Nodes are enumerated one by one, demand
//! is assigned per node, aggregated at the parent, and interfaces are added
//! one at a time until the provisioned capacity covers the load. Nothing
//! here calls into the dimensioning module.

use std::collections::{BTreeMap, VecDeque};

use mbplan::scenario::{Level, NetworkScenario, PhysicalTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub hl4: u64,
    pub hl3: u64,
    pub hl12: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.hl4 + self.hl3 + self.hl12
    }
}

/// Interfaces of `unit` capacity needed to carry `load`.
pub fn interfaces_for(load: f64, unit: f64) -> u64 {
    let mut k = 0u64;
    while (k as f64) * unit < load * (1.0 - 1e-9) {
        k += 1;
    }
    k
}

fn hl4_loads(s: &NetworkScenario) -> Vec<f64> {
    (0..s.h4).map(|_| s.a4_gbps).collect()
}

/// Grooming with each HL3 carrying an equal share of the HL4 traffic
/// (the uniform attachment the closed-form counts assume).
pub fn grooming_uniform_share(s: &NetworkScenario) -> Counts {
    let mut c = Counts::default();
    let loads = hl4_loads(s);
    for &load in &loads {
        let n = interfaces_for(load, s.channel_rate_gbps);
        c.hl4 += n; // HL4 side of the access link
        c.hl3 += n; // HL3 side of the same link
    }
    let offered: f64 = loads.iter().sum();
    for _ in 0..s.h3 {
        let groomed = s.eta * offered / f64::from(s.h3);
        let up = interfaces_for(groomed, s.channel_rate_gbps);
        c.hl3 += up;
        c.hl12 += up;
    }
    c
}

/// Grooming aggregated over the real HL4 -> HL3 attachment of `topo`.
pub fn grooming_by_topology(s: &NetworkScenario, topo: &PhysicalTopology) -> Counts {
    let mut c = Counts::default();
    let mut per_hl3: BTreeMap<usize, f64> = BTreeMap::new();
    for node in topo.nodes.iter().filter(|n| n.level == Level::Hl4) {
        let n = interfaces_for(s.a4_gbps, s.channel_rate_gbps);
        c.hl4 += n;
        c.hl3 += n;
        let parent = topo
            .links
            .iter()
            .find_map(|l| {
                let other = if l.a == node.id { l.b } else if l.b == node.id { l.a } else { return None };
                (topo.nodes[other].level == Level::Hl3).then_some(other)
            })
            .expect("HL4 attaches to an HL3");
        *per_hl3.entry(parent).or_default() += s.a4_gbps;
    }
    for node in topo.nodes.iter().filter(|n| n.level == Level::Hl3) {
        let load = per_hl3.get(&node.id).copied().unwrap_or(0.0);
        let up = interfaces_for(s.eta * load, s.channel_rate_gbps);
        c.hl3 += up;
        c.hl12 += up;
    }
    c
}

pub fn continuum(s: &NetworkScenario) -> Counts {
    let mut c = Counts::default();
    for load in hl4_loads(s) {
        let n = interfaces_for(load, s.channel_rate_gbps);
        c.hl4 += n;
        c.hl12 += n;
    }
    c
}

/// Nearest HL1/2 by hop count, lowest id on ties, via a fresh BFS per node.
pub fn nearest_hub(topo: &PhysicalTopology, from: usize) -> usize {
    let n = topo.nodes.len();
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        for l in &topo.links {
            let v = if l.a == u { l.b } else if l.b == u { l.a } else { continue };
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    topo.nodes
        .iter()
        .filter(|nd| nd.level == Level::Hl12 && dist[nd.id] != usize::MAX)
        .min_by_key(|nd| (dist[nd.id], nd.id))
        .map(|nd| nd.id)
        .expect("every HL4 reaches a hub")
}

/// Full-rate module per HL4, hub modules pooled per HL1/2.
pub fn ptmp_pooled(s: &NetworkScenario, topo: &PhysicalTopology) -> Counts {
    let mut c = Counts::default();
    let mut hub_load: BTreeMap<usize, f64> = BTreeMap::new();
    for node in topo.nodes.iter().filter(|n| n.level == Level::Hl4) {
        c.hl4 += interfaces_for(s.a4_gbps, s.channel_rate_gbps);
        *hub_load.entry(nearest_hub(topo, node.id)).or_default() += s.a4_gbps;
    }
    for load in hub_load.values() {
        c.hl12 += interfaces_for(*load, s.channel_rate_gbps);
    }
    c
}

/// Per-slice counting: every HL4 takes slices of C/m, hubs take 1/m of
/// the total slice count.
pub fn ptmp_per_slice(s: &NetworkScenario) -> Counts {
    let slice = s.channel_rate_gbps / s.fanout_m as f64;
    let mut c = Counts::default();
    for load in hl4_loads(s) {
        c.hl4 += interfaces_for(load, slice);
    }
    c.hl12 = interfaces_for(c.hl4 as f64, s.fanout_m as f64);
    c
}
