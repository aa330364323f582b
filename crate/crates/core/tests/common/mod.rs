#![allow(dead_code)]

pub mod oracle;

use std::collections::HashSet;

use mbplan::costing::{compare, CostModel};
use mbplan::dimensioning::*;
use mbplan::scenario::{generate_topology, Level, NetworkScenario, PhysicalTopology, TopologyKind};
use mbplan::spectrum::{assign_spectrum, Assignment, Band, BandName, ChannelMode, Demand, SpectrumPlan};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const PROPERTY_CASES: u32 = 256;

pub fn scenario_strategy(max_h4: u32) -> impl Strategy<Value = NetworkScenario> {
    (1..=max_h4)
        .prop_flat_map(|h4| (Just(h4), 1..=h4))
        .prop_flat_map(|(h4, h3)| (Just(h4), Just(h3), 1..=h3.min(8)))
        .prop_flat_map(|(h4, h3, h12)| {
            (
                Just((h4, h3, h12)),
                prop_oneof![(0u32..=16).prop_map(|k| f64::from(k) * 100.0), 0.0..2000.0f64],
                prop_oneof![(0u32..=4).prop_map(|k| f64::from(k) / 4.0), 0.0..=1.0f64],
                prop::sample::select(vec![100.0, 200.0, 400.0, 800.0]),
                1u32..=8,
                prop_oneof![Just(TopologyKind::Tree), Just(TopologyKind::Ring)],
            )
        })
        .prop_map(|((h4, h3, h12), a4, eta, rate, m, kind)| NetworkScenario {
            h4,
            h3,
            h12,
            a4_gbps: a4,
            eta,
            channel_rate_gbps: rate,
            fanout_m: m,
            topology_kind: kind,
            link_length_km: 50.0,
        })
}

pub fn exact_results(s: &NetworkScenario) -> Vec<DimensioningResult> {
    let t = generate_topology(s).expect("valid scenario");
    vec![
        dimension_grooming_exact(s),
        dimension_continuum_exact(s),
        dimension_ptmp(s, PtmpCountMode::WorkedExample, Some(&t)).unwrap(),
        dimension_ptmp(s, PtmpCountMode::PerSlice, None).unwrap(),
    ]
}

fn exact_total(r: &DimensioningResult) -> u64 {
    r.exact_total().expect("exact mode")
}

pub fn check_total_identity(s: &NetworkScenario) -> Result<(), TestCaseError> {
    for r in exact_results(s) {
        let c = r.per_level.expect("exact mode has levels");
        prop_assert_eq!(exact_total(&r), c.hl4 + c.hl3 + c.hl12);
        if r.architecture.bypasses_hl3() {
            prop_assert_eq!(c.hl3, 0);
        }
    }
    Ok(())
}

pub fn check_monotonicity(s: &NetworkScenario, extra_a4: f64, extra_h4: u32, extra_eta: f64) -> Result<(), TestCaseError> {
    let base = exact_results(s);
    let totals = |v: &[DimensioningResult]| v.iter().map(exact_total).collect::<Vec<_>>();
    let base_totals = totals(&base);

    let more_traffic = NetworkScenario { a4_gbps: s.a4_gbps + extra_a4, ..s.clone() };
    for (a, b) in base_totals.iter().zip(totals(&exact_results(&more_traffic))) {
        prop_assert!(*a <= b, "A4 {} -> {}: {} > {}", s.a4_gbps, more_traffic.a4_gbps, a, b);
    }
    let more_nodes = NetworkScenario { h4: s.h4 + extra_h4, ..s.clone() };
    for (a, b) in base_totals.iter().zip(totals(&exact_results(&more_nodes))) {
        prop_assert!(*a <= b, "H4 {} -> {}: {} > {}", s.h4, more_nodes.h4, a, b);
    }
    let more_eta = NetworkScenario { eta: (s.eta + extra_eta).min(1.0), ..s.clone() };
    prop_assert!(exact_total(&dimension_grooming_exact(s)) <= exact_total(&dimension_grooming_exact(&more_eta)));
    Ok(())
}

pub fn check_continuum_symmetry(s: &NetworkScenario) -> Result<(), TestCaseError> {
    let c = dimension_continuum_exact(s).per_level.unwrap();
    prop_assert_eq!(c.hl4, c.hl12);
    Ok(())
}

pub fn check_bypass_dominance(s: &NetworkScenario) -> Result<(), TestCaseError> {
    let g = exact_total(&dimension_grooming_exact(s));
    let c = exact_total(&dimension_continuum_exact(s));
    prop_assert!(c <= g);
    if s.eta * s.a4_gbps > 0.0 {
        prop_assert!(c < g);
    }
    Ok(())
}

pub fn check_hub_packing(s: &NetworkScenario) -> Result<(), TestCaseError> {
    if s.a4_gbps > s.channel_rate_gbps {
        return Ok(());
    }
    let t = generate_topology(s).unwrap();
    let p = exact_total(&dimension_ptmp(s, PtmpCountMode::WorkedExample, Some(&t)).unwrap());
    prop_assert!(p <= exact_total(&dimension_continuum_exact(s)));
    Ok(())
}

pub fn check_cost_invariants(s: &NetworkScenario, k: f64) -> Result<(), TestCaseError> {
    let t = generate_topology(s).unwrap();
    let results = ArchitectureKind::ALL
        .iter()
        .map(|&a| (a, dimension(s, a, Mode::Exact, PtmpCountMode::WorkedExample, Some(&t)).unwrap()))
        .collect();
    let base_model = CostModel::default();
    let base = compare(&results, &base_model, s).unwrap();
    let scaled = compare(&results, &base_model.scaled(k), s).unwrap();
    let other = compare(&results, &CostModel { transponder_cu: 3.0, router_large_cu: 500.0, ..base_model }, s).unwrap();
    for (arch, c) in &base.costs {
        prop_assert!(c.total_cu >= 0.0);
        prop_assert!((c.total_cu - c.transceiver_cost_cu - c.router_cost_cu).abs() < 1e-9);
        prop_assert!((scaled.costs[arch].total_cu - k * c.total_cu).abs() <= 1e-9 * (1.0 + k * c.total_cu));
    }
    for ((a, b), o) in base.savings.iter().zip(&scaled.savings).zip(&other.savings) {
        let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs() < 1e-9,
            (None, None) => true,
            _ => false,
        };
        prop_assert!(close(a.total_cost_savings_pct, b.total_cost_savings_pct));
        prop_assert!(close(a.transponder_savings_pct, b.transponder_savings_pct));
        prop_assert!(close(a.transponder_savings_pct, o.transponder_savings_pct));
        if let Some(p) = a.total_cost_savings_pct {
            prop_assert!(p <= 100.0 + 1e-9);
        }
    }
    Ok(())
}

/// Oracle equivalence on one scenario with h4 <= 12.
pub fn check_oracle(s: &NetworkScenario) -> Result<(), TestCaseError> {
    let t = generate_topology(s).unwrap();
    let lv = |r: &DimensioningResult| {
        let c = r.per_level.unwrap();
        (c.hl4, c.hl3, c.hl12)
    };
    let ov = |c: oracle::Counts| (c.hl4, c.hl3, c.hl12);
    prop_assert_eq!(lv(&dimension_grooming_exact(s)), ov(oracle::grooming_uniform_share(s)), "grooming {:?}", s);
    prop_assert_eq!(lv(&dimension_continuum_exact(s)), ov(oracle::continuum(s)), "continuum {:?}", s);
    prop_assert_eq!(
        lv(&dimension_ptmp(s, PtmpCountMode::WorkedExample, Some(&t)).unwrap()),
        ov(oracle::ptmp_pooled(s, &t)),
        "ptmp pooled {:?}",
        s
    );
    prop_assert_eq!(
        lv(&dimension_ptmp(s, PtmpCountMode::PerSlice, None).unwrap()),
        ov(oracle::ptmp_per_slice(s)),
        "ptmp per-slice {:?}",
        s
    );
    if s.h4.is_multiple_of(s.h3) {
        prop_assert_eq!(lv(&dimension_grooming_exact(s)), ov(oracle::grooming_by_topology(s, &t)));
    }
    Ok(())
}

/// Every scenario with h4 <= `max_h4` over a small traffic grid.
pub fn small_scenarios(max_h4: u32) -> Vec<NetworkScenario> {
    let mut out = Vec::new();
    for h4 in 1..=max_h4 {
        for h3 in 1..=h4 {
            for h12 in 1..=h3 {
                for (a4, eta, rate, m) in [
                    (0.0, 0.5, 400.0, 4),
                    (300.0, 0.5, 400.0, 4),
                    (500.0, 1.0 / 3.0, 400.0, 3),
                    (950.0, 1.0, 100.0, 2),
                    (130.0, 0.1, 200.0, 5),
                ] {
                    for kind in [TopologyKind::Tree, TopologyKind::Ring] {
                        out.push(NetworkScenario {
                            h4,
                            h3,
                            h12,
                            a4_gbps: a4,
                            eta,
                            channel_rate_gbps: rate,
                            fanout_m: m,
                            topology_kind: kind,
                            link_length_km: 40.0,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Small plan with few channels so blocking occurs, and reach limits so
/// some bands get skipped on longer routes.
pub fn tight_plan(c: u32, l: u32, s: u32) -> SpectrumPlan {
    SpectrumPlan {
        bands: vec![
            Band::standard(BandName::C).with_declared(c),
            Band::standard(BandName::L).with_declared(l).with_reach(120.0),
            Band::standard(BandName::S).with_declared(s).with_reach(60.0),
        ],
        grid_spacing_ghz: 50.0,
        mode: ChannelMode::Declared,
    }
}

pub fn random_demands(topo: &PhysicalTopology, picks: &[(usize, usize, u32)]) -> Vec<Demand> {
    let n = topo.nodes.len();
    picks
        .iter()
        .filter_map(|&(a, b, ch)| {
            let (a, b) = (a % n, b % n);
            (a != b).then_some(Demand { source: a, destination: b, channels: ch, rate_gbps: 100.0 })
        })
        .collect()
}

/// Tree topologies with several hubs are forests; keep demands inside one
/// component.
pub fn same_component(topo: &PhysicalTopology, d: &Demand) -> bool {
    topo.hop_distances(d.source)[d.destination].is_some()
}

pub fn check_rsa_invariants(
    plan: &SpectrumPlan,
    topo: &PhysicalTopology,
    demands: &[Demand],
    a: &Assignment,
) -> Result<(), TestCaseError> {
    // no collision
    let mut used = HashSet::new();
    for lp in &a.lightpaths {
        for &l in &lp.route.links {
            prop_assert!(used.insert((l, lp.band, lp.channel)), "link {} reused {:?}/{}", l, lp.band, lp.channel);
        }
    }
    for lp in &a.lightpaths {
        // continuity: one (band, channel) along a connected simple path
        let nodes = &lp.route.nodes;
        prop_assert_eq!(nodes.first().copied(), Some(lp.source));
        prop_assert_eq!(nodes.last().copied(), Some(lp.destination));
        prop_assert_eq!(nodes.iter().collect::<HashSet<_>>().len(), nodes.len());
        prop_assert_eq!(lp.route.links.len() + 1, nodes.len());
        for (i, &l) in lp.route.links.iter().enumerate() {
            let link = topo.links[l];
            let (x, y) = (nodes[i].min(nodes[i + 1]), nodes[i].max(nodes[i + 1]));
            prop_assert_eq!((link.a, link.b), (x, y));
        }
        prop_assert!(lp.channel < plan.channel_count(lp.band).unwrap());
        // reach
        let band = plan.band(lp.band).unwrap();
        prop_assert!(band.reach_limit_km.is_none_or(|r| r >= lp.route.length_km));
    }
    // conservation
    let requested: u64 = demands.iter().map(|d| u64::from(d.channels)).sum();
    prop_assert_eq!((a.lightpaths.len() + a.blocked.len()) as u64, requested);
    // peak bookkeeping
    for (l, &peak) in a.per_link_peak.iter().enumerate() {
        let on_link = a.lightpaths.iter().filter(|lp| lp.route.links.contains(&l)).count();
        prop_assert_eq!(peak as usize, on_link);
    }
    // determinism
    prop_assert_eq!(&assign_spectrum(plan, topo, demands).unwrap(), a);
    Ok(())
}

pub fn hl4_count(t: &PhysicalTopology) -> usize {
    t.nodes_at(Level::Hl4).count()
}
