//! Acceptance suite: one test per claim the toolkit is expected to
//! reproduce, each printing a PASS line with the measured values (run with
//! `--nocapture` to see them). Thresholds are pinned in the constants below.
//!
//! The heavyweight flow criteria keep to desk scale and finish in well under
//! half an hour combined on a two-core machine.

use jellynet::experiments::{self, rrg_with_servers, Seeds};
use jellynet_core::expand::add_rack;
use jellynet_core::flow::{
    jain_index, max_concurrent_flow, max_servers_full_capacity, random_permutation,
    server_level_edges, throughput_vs_failures,
};
use jellynet_core::metrics::{
    bisection_lower_bound, diameter_upper_bound, fat_tree_stats, path_lengths, PathLevel,
};
use jellynet_core::rng::{derive_seed, stream};
use jellynet_core::route::{link_path_counts, PathMode};
use jellynet_core::topo::{build_fat_tree, build_rrg, Topology};
use jellynet_oracle::{max_concurrent_lambda, Instance};

/// The two user-visible seeds every acceptance measurement derives from.
const TOPO_SEED: u64 = 7;
const TRAFFIC_SEED: u64 = 11;

fn pass(criterion: u32, name: &str, details: String) {
    println!("ACCEPTANCE {criterion} ({name}): PASS - {details}");
}

#[test]
fn acceptance_01_fat_tree_closed_forms() {
    for kp in [4u64, 6, 8, 10, 12, 14] {
        let t = build_fat_tree(kp as u32).unwrap();
        assert_eq!(t.total_servers(), kp * kp * kp / 4, "servers at kp={kp}");
        assert_eq!(t.switch_count() as u64, 5 * kp * kp / 4, "switches at kp={kp}");
        assert_eq!(t.link_count() as u64, kp * kp * kp / 2, "links at kp={kp}");
        let stats = fat_tree_stats(kp as u32).unwrap();
        assert_eq!(stats.servers, kp * kp * kp / 4);
        assert_eq!(stats.bisection_links, kp * kp * kp / 8);
    }
    pass(
        1,
        "fat-tree closed forms",
        "kp in {4..14}: servers = kp^3/4, switches = 5kp^2/4, links = kp^3/2 exactly".into(),
    );
}

#[test]
fn acceptance_02_path_length_distribution() {
    // 686-server Jellyfish on the fat-tree's equipment (245 switches of 14
    // ports), pooled over 10 seeds.
    let mut close = 0u64;
    let mut pairs = 0u64;
    for i in 0..10 {
        let seed = derive_seed(TOPO_SEED, stream::TOPOLOGY, i);
        let t = rrg_with_servers(245, 14, 686, seed).unwrap();
        let d = path_lengths(&t, PathLevel::Server).unwrap();
        close += d
            .histogram
            .iter()
            .filter(|&(&h, _)| h < 6)
            .map(|(_, &c)| c)
            .sum::<u64>();
        pairs += d.pair_count;
    }
    let jelly_frac = close as f64 / pairs as f64;
    assert!(
        jelly_frac >= 0.995,
        "jellyfish fraction below 6 hops: {jelly_frac}"
    );

    let ft = build_fat_tree(14).unwrap();
    let d = path_lengths(&ft, PathLevel::Server).unwrap();
    let ft_frac = d.fraction_below(6);
    assert!(
        (ft_frac - 0.075).abs() <= 0.005,
        "fat-tree fraction below 6 hops: {ft_frac}"
    );
    assert_eq!(d.diameter, 6);
    pass(
        2,
        "path-length distribution",
        format!(
            "jellyfish <6 hops: {:.3}% (>= 99.5%), fat-tree: {:.3}% (7.5% +/- 0.5pp)",
            100.0 * jelly_frac,
            100.0 * ft_frac
        ),
    );
}

#[test]
fn acceptance_03_average_path_length_at_scale() {
    let mut means = Vec::new();
    for i in 0..3 {
        let seed = derive_seed(TOPO_SEED, stream::TOPOLOGY, 0x300 + i);
        let t = build_rrg(3200, 48, 36, seed).unwrap();
        let d = path_lengths(&t, PathLevel::Switch).unwrap();
        assert!(d.mean < 2.7, "mean switch path {}", d.mean);
        assert!(d.diameter <= 4, "diameter {}", d.diameter);
        means.push(d.mean);
    }
    pass(
        3,
        "average path length at scale",
        format!("RRG(3200,48,36) means {means:?} < 2.7, diameters <= 4"),
    );
}

#[test]
fn acceptance_04_full_capacity_server_count() {
    // fat_tree(10) equipment: 125 switches, 10 ports; the fat-tree hosts 250.
    let combined = derive_seed(
        derive_seed(TOPO_SEED, stream::TOPOLOGY, 10),
        stream::TRAFFIC,
        TRAFFIC_SEED,
    );
    let servers = max_servers_full_capacity(125, 10, 0.02, combined).unwrap();
    assert!(servers >= 250, "below the fat-tree count: {servers}");
    assert!(
        servers as f64 >= 1.10 * 250.0,
        "need at least 10% over the fat-tree, got {servers}"
    );
    pass(
        4,
        "full-capacity server count",
        format!(
            "fat_tree(10) equipment supports {servers} servers ({:.1}% over the fat-tree's 250)",
            100.0 * (servers as f64 / 250.0 - 1.0)
        ),
    );
}

#[test]
fn acceptance_05_ecmp_vs_ksp_diversity() {
    let mut ecmp_fracs = Vec::new();
    let mut ksp_fracs = Vec::new();
    for i in 0..5 {
        let topo_seed = derive_seed(TOPO_SEED, stream::TOPOLOGY, 0x500 + i);
        let tm_seed = derive_seed(TRAFFIC_SEED, stream::TRAFFIC, 0x500 + i);
        let t = rrg_with_servers(245, 14, 686, topo_seed).unwrap();
        let tm = random_permutation(686, tm_seed).unwrap();
        let flows = experiments::server_flows(&t, tm.dst());
        for (mode, out) in [
            (PathMode::Ecmp, &mut ecmp_fracs),
            (PathMode::Ksp, &mut ksp_fracs),
        ] {
            let counts = link_path_counts(&t, &flows, mode, 8).unwrap();
            let le2 = counts.values().filter(|&&c| c <= 2).count();
            out.push(le2 as f64 / counts.len() as f64);
        }
    }
    let ecmp = ecmp_fracs.iter().sum::<f64>() / ecmp_fracs.len() as f64;
    let ksp = ksp_fracs.iter().sum::<f64>() / ksp_fracs.len() as f64;
    assert!(
        (ecmp - 0.55).abs() <= 0.10,
        "ecmp_8 fraction of links with <= 2 paths: {ecmp}"
    );
    assert!(
        (ksp - 0.06).abs() <= 0.04,
        "ksp_8 fraction of links with <= 2 paths: {ksp}"
    );
    pass(
        5,
        "ECMP vs ksp diversity",
        format!(
            "links with <= 2 paths: ecmp_8 {:.1}% (55 +/- 10), ksp_8 {:.1}% (6 +/- 4)",
            100.0 * ecmp,
            100.0 * ksp
        ),
    );
}

#[test]
fn acceptance_06_failure_resilience() {
    let fractions = [0.0, 0.03, 0.06, 0.09, 0.12, 0.15];
    let trials = 10;
    let eps = 0.05;
    let sweep_seed = derive_seed(TOPO_SEED, stream::FAILURE, TRAFFIC_SEED);

    let jelly = rrg_with_servers(245, 14, 686, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0x600))
        .unwrap();
    let ft = build_fat_tree(14).unwrap();

    let mean_by_fraction = |t: &Topology| -> Vec<f64> {
        let rows = throughput_vs_failures(t, &fractions, trials, eps, sweep_seed).unwrap();
        fractions
            .iter()
            .map(|&f| {
                let vals: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.fraction == f)
                    .map(|r| r.mean_flow)
                    .collect();
                vals.iter().sum::<f64>() / vals.len() as f64
            })
            .collect()
    };
    let jelly_means = mean_by_fraction(&jelly);
    let ft_means = mean_by_fraction(&ft);

    let drop = 1.0 - jelly_means[5] / jelly_means[0];
    assert!(
        drop < 0.16,
        "15% failures dropped jellyfish throughput by {:.1}%",
        100.0 * drop
    );
    for (i, &f) in fractions.iter().enumerate() {
        if f >= 0.06 {
            assert!(
                jelly_means[i] >= ft_means[i],
                "fat-tree ahead at fraction {f}: {} vs {}",
                ft_means[i],
                jelly_means[i]
            );
        }
    }
    pass(
        6,
        "failure resilience",
        format!(
            "jellyfish drop at 15% failures: {:.2}% (< 16%); means vs fat-tree at >= 6%: {:?} >= {:?}",
            100.0 * drop,
            &jelly_means[2..],
            &ft_means[2..]
        ),
    );
}

#[test]
fn acceptance_07_localization() {
    let report = experiments::fig11(
        6,
        20,
        10,
        0.02,
        Seeds {
            topo: TOPO_SEED,
            traffic: TRAFFIC_SEED,
        },
    )
    .unwrap();
    let mean_norm = |config: &str| -> f64 {
        let vals: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.starts_with(config))
            .map(|r| r.split(',').nth(7).unwrap().parse::<f64>().unwrap())
            .collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let at50 = mean_norm("local50,");
    let at60 = mean_norm("local60,");
    assert!(at50 >= 0.97, "50% local lost {:.2}%", 100.0 * (1.0 - at50));
    assert!(at60 >= 0.94, "60% local lost {:.2}%", 100.0 * (1.0 - at60));
    pass(
        7,
        "localization",
        format!(
            "normalized throughput: 50% local {:.4} (>= 0.97), 60% local {:.4} (>= 0.94)",
            at50, at60
        ),
    );
}

#[test]
fn acceptance_08_incremental_equivalence() {
    let report = experiments::fig5(
        10,
        0.02,
        Seeds {
            topo: TOPO_SEED,
            traffic: TRAFFIC_SEED,
        },
    )
    .unwrap();
    // rows: size,variant,trial,topo_seed,tm_seed,mean_path,lambda,mean_flow
    let mean_of = |size: u32, variant: &str, col: usize| -> f64 {
        let vals: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| {
                let mut it = r.split(',');
                it.next().unwrap() == size.to_string() && it.next().unwrap() == variant
            })
            .map(|r| r.split(',').nth(col).unwrap().parse::<f64>().unwrap())
            .collect();
        assert_eq!(vals.len(), 10);
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let mut detail = String::new();
    for size in (20..=160).step_by(20) {
        let path_gap = (mean_of(size, "incremental", 5) / mean_of(size, "scratch", 5) - 1.0).abs();
        let flow_gap = (mean_of(size, "incremental", 7) / mean_of(size, "scratch", 7) - 1.0).abs();
        assert!(
            path_gap < 0.02,
            "mean path gap {:.3}% at size {size}",
            100.0 * path_gap
        );
        assert!(
            flow_gap < 0.02,
            "throughput gap {:.3}% at size {size}",
            100.0 * flow_gap
        );
        detail.push_str(&format!(
            "{size}: path {:.2}%, flow {:.2}%; ",
            100.0 * path_gap,
            100.0 * flow_gap
        ));
    }
    pass(
        8,
        "incremental equivalence",
        format!("incremental vs scratch gaps (< 2%): {detail}"),
    );
}

fn oracle_lambda(t: &Topology, dst: &[u32]) -> f64 {
    let (nodes, edges, server_nodes) = server_level_edges(t);
    let commodities = dst
        .iter()
        .enumerate()
        .map(|(i, &d)| (server_nodes[i], server_nodes[d as usize], 1.0))
        .collect();
    max_concurrent_lambda(&Instance {
        nodes,
        edges,
        commodities,
    })
}

#[test]
fn acceptance_09_solver_oracle_equivalence() {
    let eps = 0.02;
    let mut checked = 0;
    let mut max_rel_gap: f64 = 0.0;
    for i in 0..22u64 {
        let n = 4 + (derive_seed(TOPO_SEED, 0x900, i) % 9) as u32;
        let max_r = if n <= 10 { 4u32 } else { 3 };
        let r = (2 + (derive_seed(TOPO_SEED, 0x901, i) % (max_r as u64 - 1)) as u32).min(n - 1);
        let servers = 1 + (derive_seed(TOPO_SEED, 0x902, i) % 2) as u32;
        let t = build_rrg(n, r + servers, r, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0x900 + i))
            .unwrap();
        let tm = random_permutation(
            t.total_servers() as u32,
            derive_seed(TRAFFIC_SEED, stream::TRAFFIC, 0x900 + i),
        )
        .unwrap();
        let exact = oracle_lambda(&t, tm.dst());
        let approx = max_concurrent_flow(&t, &tm, eps).unwrap().lambda;
        assert!(
            approx <= exact + 1e-7,
            "instance {i}: approx {approx} above exact {exact}"
        );
        assert!(
            approx >= (1.0 - eps) * exact - 1e-7,
            "instance {i}: approx {approx} below (1 - eps) * exact {exact}"
        );
        if exact > 0.0 {
            max_rel_gap = max_rel_gap.max(1.0 - approx / exact);
        }
        checked += 1;
    }
    assert!(checked >= 20);
    pass(
        9,
        "solver oracle equivalence",
        format!("{checked} instances within [(1-eps) opt, opt]; worst gap {:.3}%", 100.0 * max_rel_gap),
    );
}

#[test]
fn acceptance_10_structural_property_suite() {
    // RRG regularity and connectivity.
    for i in 0..100u64 {
        let n = 8 + (derive_seed(TOPO_SEED, 0xA00, i) % 60) as u32;
        let r = (3 + (derive_seed(TOPO_SEED, 0xA01, i) % 5) as u32).min(n - 1);
        let k = r + (derive_seed(TOPO_SEED, 0xA02, i) % 4) as u32;
        let t = build_rrg(n, k, r, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0xA00 + i)).unwrap();
        assert!(t.is_connected());
        let below: u32 = (0..n).map(|s| (t.degree(s) == r - 1) as u32).sum();
        assert!(below <= 1);
        for s in 0..n {
            let d = t.degree(s);
            assert!(d == r || d == r - 1);
            assert!(d + t.servers_on(s) <= t.ports(s));
        }
    }

    // Expansion preserves every pre-existing degree and replays exactly.
    for i in 0..100u64 {
        let n = 12 + (derive_seed(TOPO_SEED, 0xA10, i) % 24) as u32;
        let t = build_rrg(n, 10, 6, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0xA10 + i)).unwrap();
        let (grown, step) =
            add_rack(&t, 10, 4, derive_seed(TOPO_SEED, stream::EXPANSION, i)).unwrap();
        for s in 0..n {
            assert_eq!(grown.degree(s), t.degree(s));
        }
        assert_eq!(step.apply(&t).unwrap(), grown);
    }

    // Bound formulas: monotone bisection bound, diameter bound envelope,
    // and closed-form fat-tree counts against built graphs.
    for r in 3..64 {
        assert!(bisection_lower_bound(500, r + 1) > bisection_lower_bound(500, r));
    }
    for i in 0..100u64 {
        let n = 16 + (derive_seed(TOPO_SEED, 0xA20, i) % 50) as u32;
        let r = 3 + (derive_seed(TOPO_SEED, 0xA21, i) % 4) as u32;
        let t = build_rrg(n, r + 2, r, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0xA20 + i)).unwrap();
        let d = path_lengths(&t, PathLevel::Switch).unwrap();
        assert!(d.diameter <= diameter_upper_bound(n, r, 0.1).unwrap());
    }
    for kp in [4u32, 6, 8, 10] {
        let stats = fat_tree_stats(kp).unwrap();
        let t = build_fat_tree(kp).unwrap();
        assert_eq!(stats.switch_links as usize, t.link_count());
        assert_eq!(stats.servers, t.total_servers());
        assert_eq!(stats.switches, t.switch_count() as u64);
    }

    // Fairness index sanity on a solved instance.
    let t = build_rrg(20, 10, 6, derive_seed(TOPO_SEED, stream::TOPOLOGY, 0xA30)).unwrap();
    let tm = random_permutation(80, derive_seed(TRAFFIC_SEED, stream::TRAFFIC, 0xA30)).unwrap();
    let sol = max_concurrent_flow(&t, &tm, 0.05).unwrap();
    let jain = jain_index(&sol.per_flow).unwrap();
    assert!(jain >= 0.95, "jain {jain}");

    pass(
        10,
        "structural property suite",
        "100 randomized cases each: RRG invariants, expansion preservation, bound formulas".into(),
    );
}
