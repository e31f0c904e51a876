//! Named experiment drivers. Each one reproduces a figure-shaped CSV at
//! desk scale; all randomness derives from the two user-visible seeds via
//! `jellynet_core::rng::derive_seed`, and every row carries the derived
//! seeds that produced it.

use std::path::PathBuf;

use anyhow::{anyhow, bail};
use rayon::prelude::*;

use jellynet_core::expand::add_rack;
use jellynet_core::flow::{
    max_concurrent_flow, max_servers_full_capacity, random_permutation, throughput_vs_failures,
};
use jellynet_core::metrics::{fat_tree_stats, path_lengths, PathLevel};
use jellynet_core::rng::{derive_seed, stream};
use jellynet_core::route::{link_path_counts, PathMode};
use jellynet_core::topo::{
    build_fat_tree, build_layered_rrg, build_rrg, build_rrg_general, build_swdc, SwdcVariant,
    Topology, TopologyKind,
};

use crate::format;
use crate::report::{cell, Report};

#[derive(Debug, Clone, Copy)]
pub struct Seeds {
    pub topo: u64,
    pub traffic: u64,
}

/// Servers spread as evenly as possible over `switches` k-port switches,
/// wired as an RRG on the leftover ports.
pub fn rrg_with_servers(
    switches: u32,
    ports: u32,
    total_servers: u32,
    seed: u64,
) -> anyhow::Result<Topology> {
    let base = total_servers / switches;
    let extra = total_servers % switches;
    let servers: Vec<u32> = (0..switches)
        .map(|i| if i < extra { base + 1 } else { base })
        .collect();
    build_rrg_general(TopologyKind::Rrg, vec![ports; switches as usize], servers, seed)
        .map_err(|e| anyhow!("building RRG: {e}"))
}

/// Servers supported at full capacity: same-equipment comparison against
/// the fat-tree for each even port count up to `max_ports`.
pub fn fig3c(max_ports: u32, eps: f64, seeds: Seeds) -> anyhow::Result<Report> {
    if max_ports < 4 || max_ports % 2 != 0 {
        bail!("--max-ports must be even and at least 4");
    }
    let mut report = Report::new("fig3c", "ports,fat_tree_servers,jellyfish_servers,ratio");
    report
        .param("max_ports", max_ports)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let ports: Vec<u32> = (4..=max_ports).step_by(2).collect();
    let rows: Vec<anyhow::Result<String>> = ports
        .par_iter()
        .map(|&kp| {
            let stats = fat_tree_stats(kp).map_err(|e| anyhow!("{e}"))?;
            let combined = derive_seed(
                derive_seed(seeds.topo, stream::TOPOLOGY, kp as u64),
                stream::TRAFFIC,
                seeds.traffic,
            );
            let jelly =
                max_servers_full_capacity(stats.switches as u32, kp, eps, combined)
                    .map_err(|e| anyhow!("{e}"))?;
            Ok(format!(
                "{kp},{},{jelly},{}",
                stats.servers,
                cell(jelly as f64 / stats.servers as f64)
            ))
        })
        .collect();
    for row in rows {
        report.rows.push(row?);
    }
    Ok(report)
}

/// Incremental growth vs from-scratch construction: 20 to 160 switches in
/// steps of 20 (12-port switches, 4 servers each), comparing mean
/// server-level path length and throughput at every size.
pub fn fig5(trials: u32, eps: f64, seeds: Seeds) -> anyhow::Result<Report> {
    const PORTS: u32 = 12;
    const SERVERS: u32 = 4;
    const STEP: u32 = 20;
    const MAX: u32 = 160;

    let mut report = Report::new(
        "fig5",
        "size,variant,trial,topo_seed,tm_seed,mean_path,lambda,mean_flow",
    );
    report
        .param("ports", PORTS)
        .param("servers_per_switch", SERVERS)
        .param("sizes", format!("{STEP}..{MAX}"))
        .param("trials", trials)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let trial_rows: Vec<anyhow::Result<Vec<String>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rows = Vec::new();
            let base = derive_seed(seeds.topo, stream::TOPOLOGY, trial as u64);
            let mut incremental =
                build_rrg(STEP, PORTS, PORTS - SERVERS, base).map_err(|e| anyhow!("{e}"))?;
            let mut size = STEP;
            loop {
                for variant in ["incremental", "scratch"] {
                    let (t, topo_seed) = if variant == "incremental" {
                        (incremental.clone(), incremental.seed())
                    } else {
                        let seed =
                            derive_seed(seeds.topo, stream::TOPOLOGY, (trial as u64) << 16 | size as u64);
                        (
                            build_rrg(size, PORTS, PORTS - SERVERS, seed)
                                .map_err(|e| anyhow!("{e}"))?,
                            seed,
                        )
                    };
                    let tm_seed =
                        derive_seed(seeds.traffic, stream::TRAFFIC, (trial as u64) << 16 | size as u64);
                    let tm = random_permutation(t.total_servers() as u32, tm_seed)
                        .map_err(|e| anyhow!("{e}"))?;
                    let solution = max_concurrent_flow(&t, &tm, eps).map_err(|e| anyhow!("{e}"))?;
                    let paths = path_lengths(&t, PathLevel::Server).map_err(|e| anyhow!("{e}"))?;
                    rows.push(format!(
                        "{size},{variant},{trial},{topo_seed},{tm_seed},{},{},{}",
                        cell(paths.mean),
                        cell(solution.lambda),
                        cell(solution.mean_flow())
                    ));
                }
                if size == MAX {
                    break;
                }
                for i in 0..STEP {
                    let seed = derive_seed(
                        seeds.topo,
                        stream::EXPANSION,
                        (trial as u64) << 32 | (size as u64) << 16 | i as u64,
                    );
                    incremental = add_rack(&incremental, PORTS, SERVERS, seed)
                        .map_err(|e| anyhow!("{e}"))?
                        .0;
                }
                size += STEP;
            }
            Ok(rows)
        })
        .collect();

    let mut all = Vec::new();
    for rows in trial_rows {
        all.extend(rows?);
    }
    // (size, variant, trial) ordering.
    all.sort_by_key(|row| {
        let mut it = row.split(',');
        let size: u32 = it.next().unwrap().parse().unwrap();
        let variant = it.next().unwrap().to_string();
        let trial: u32 = it.next().unwrap().parse().unwrap();
        (size, variant, trial)
    });
    report.rows = all;
    Ok(report)
}

/// Per-link path diversity on the 686-server Jellyfish built from the
/// fat-tree's equipment (245 switches, 14 ports): directed links sorted by
/// the number of (flow, path) pairs crossing them, for ECMP-8 and
/// 8-shortest-paths.
pub fn fig7(trials: u32, seeds: Seeds) -> anyhow::Result<Report> {
    let mut report = Report::new("fig7", "mode,trial,rank,count");
    report
        .param("switches", 245)
        .param("ports", 14)
        .param("servers", 686)
        .param("trials", trials)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let trial_rows: Vec<anyhow::Result<Vec<String>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let topo_seed = derive_seed(seeds.topo, stream::TOPOLOGY, trial as u64);
            let tm_seed = derive_seed(seeds.traffic, stream::TRAFFIC, trial as u64);
            let t = rrg_with_servers(245, 14, 686, topo_seed).map_err(|e| anyhow!("{e}"))?;
            let tm = random_permutation(686, tm_seed).map_err(|e| anyhow!("{e}"))?;
            let flows = server_flows(&t, tm.dst());
            let mut rows = Vec::new();
            for (mode, name) in [(PathMode::Ecmp, "ecmp_8"), (PathMode::Ksp, "ksp_8")] {
                let counts = link_path_counts(&t, &flows, mode, 8).map_err(|e| anyhow!("{e}"))?;
                let mut values: Vec<u64> = counts.values().copied().collect();
                values.sort_unstable();
                for (rank, count) in values.iter().enumerate() {
                    rows.push(format!("{name},{trial},{rank},{count}"));
                }
            }
            Ok(rows)
        })
        .collect();
    for rows in trial_rows {
        report.rows.extend(rows?);
    }
    report.rows.sort_by(|a, b| {
        let ka = fig7_key(a);
        let kb = fig7_key(b);
        ka.cmp(&kb)
    });
    Ok(report)
}

fn fig7_key(row: &str) -> (String, u32, u32) {
    let mut it = row.split(',');
    let mode = it.next().unwrap().to_string();
    let trial = it.next().unwrap().parse().unwrap();
    let rank = it.next().unwrap().parse().unwrap();
    (mode, trial, rank)
}

/// Switch-level (src, dst) pairs of a server permutation.
pub fn server_flows(t: &Topology, dst: &[u32]) -> Vec<(u32, u32)> {
    let home = t.server_switches();
    dst.iter()
        .enumerate()
        .map(|(i, &d)| (home[i], home[d as usize]))
        .collect()
}

/// Throughput under random link failures: same-equipment Jellyfish
/// (245 switches, 14 ports, 686 servers) vs the fat-tree.
pub fn fig10(fractions: &[f64], trials: u32, eps: f64, seeds: Seeds) -> anyhow::Result<Report> {
    let mut report = Report::new(
        "fig10",
        "topology,fraction,trial,fail_seed,tm_seed,lambda,mean_flow,min_flow,jain",
    );
    report
        .param("fractions", join_floats(fractions))
        .param("trials", trials)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let jelly_seed = derive_seed(seeds.topo, stream::TOPOLOGY, 0);
    let jelly = rrg_with_servers(245, 14, 686, jelly_seed)?;
    let ft = build_fat_tree(14).map_err(|e| anyhow!("{e}"))?;
    let sweep_seed = derive_seed(seeds.topo, stream::FAILURE, seeds.traffic);

    let results: Vec<anyhow::Result<Vec<String>>> = [("jellyfish", &jelly), ("fat_tree", &ft)]
        .par_iter()
        .map(|(name, t)| {
            let rows = throughput_vs_failures(t, fractions, trials, eps, sweep_seed)
                .map_err(|e| anyhow!("{e}"))?;
            Ok(rows
                .iter()
                .map(|r| {
                    format!(
                        "{name},{},{},{},{},{},{},{},{}",
                        cell(r.fraction),
                        r.trial,
                        r.fail_seed,
                        r.traffic_seed,
                        cell(r.lambda),
                        cell(r.mean_flow),
                        cell(r.min_flow),
                        cell(r.jain)
                    )
                })
                .collect())
        })
        .collect();
    for rows in results {
        report.rows.extend(rows?);
    }
    Ok(report)
}

/// Localized 2-layer random graphs vs the unrestricted same-equipment RRG,
/// at nominal local-link fractions of 30%, 50% and 60%.
pub fn fig11(
    containers: u32,
    per_container: u32,
    trials: u32,
    eps: f64,
    seeds: Seeds,
) -> anyhow::Result<Report> {
    const PORTS: u32 = 16;
    const NET_DEGREE: u32 = 10;
    const SERVERS: u32 = 6;
    if containers < 2 {
        bail!("--containers must be at least 2");
    }
    let n = containers * per_container;

    let mut report = Report::new(
        "fig11",
        "config,local_nominal,trial,topo_seed,tm_seed,lambda,mean_flow,normalized",
    );
    report
        .param("containers", containers)
        .param("per_container", per_container)
        .param("ports", PORTS)
        .param("net_degree", NET_DEGREE)
        .param("servers_per_switch", SERVERS)
        .param("trials", trials)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let configs: [(&str, f64, u32); 4] = [
        ("unrestricted", 0.0, 0),
        ("local30", 0.3, 3),
        ("local50", 0.5, 5),
        ("local60", 0.6, 6),
    ];

    let trial_rows: Vec<anyhow::Result<Vec<String>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let tm_seed = derive_seed(seeds.traffic, stream::TRAFFIC, trial as u64);
            let tm = random_permutation(n * SERVERS, tm_seed).map_err(|e| anyhow!("{e}"))?;
            let mut rows = Vec::new();
            let mut baseline = 0.0;
            for (ci, &(name, nominal, r_local)) in configs.iter().enumerate() {
                let topo_seed = derive_seed(
                    seeds.topo,
                    stream::TOPOLOGY,
                    (trial as u64) << 8 | ci as u64,
                );
                let t = if r_local == 0 {
                    build_rrg(n, PORTS, NET_DEGREE, topo_seed).map_err(|e| anyhow!("{e}"))?
                } else {
                    build_layered_rrg(
                        containers,
                        per_container,
                        PORTS,
                        r_local,
                        NET_DEGREE - r_local,
                        SERVERS,
                        topo_seed,
                    )
                    .map_err(|e| anyhow!("{e}"))?
                };
                let solution = max_concurrent_flow(&t, &tm, eps).map_err(|e| anyhow!("{e}"))?;
                let mean = solution.mean_flow();
                if ci == 0 {
                    baseline = mean;
                }
                let normalized = if baseline > 0.0 { mean / baseline } else { 0.0 };
                rows.push(format!(
                    "{name},{},{trial},{topo_seed},{tm_seed},{},{},{}",
                    cell(nominal),
                    cell(solution.lambda),
                    cell(mean),
                    cell(normalized)
                ));
            }
            Ok(rows)
        })
        .collect();
    for rows in trial_rows {
        report.rows.extend(rows?);
    }
    report.rows.sort_by(|a, b| fig11_key(a).cmp(&fig11_key(b)));
    Ok(report)
}

fn fig11_key(row: &str) -> (String, u32) {
    let mut it = row.split(',');
    let config = it.next().unwrap().to_string();
    it.next();
    let trial: u32 = it.next().unwrap().parse().unwrap();
    (config, trial)
}

/// Imported benchmark graphs vs same-equipment Jellyfish. Each import is a
/// topology file or bare edge list; servers are attached uniformly.
pub fn ddg(
    imports: &[PathBuf],
    ports: Option<u32>,
    servers_per_switch: u32,
    trials: u32,
    eps: f64,
    seeds: Seeds,
) -> anyhow::Result<Report> {
    if imports.is_empty() {
        bail!("`ddg` needs at least one --import graph file");
    }
    if servers_per_switch == 0 {
        bail!("--servers-per-switch must be positive for ddg");
    }
    let mut report = Report::new(
        "ddg",
        "name,switches,ports,degree,trial,tm_seed,lambda_import,lambda_rrg,ratio",
    );
    report
        .param("servers_per_switch", servers_per_switch)
        .param("trials", trials)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    for (fi, path) in imports.iter().enumerate() {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let loaded = format::load_edge_list(path, ports.unwrap_or(u32::MAX), 0)?;
        let max_degree = (0..loaded.switch_count())
            .map(|s| loaded.degree(s))
            .max()
            .unwrap_or(0);
        let port_budget = ports.unwrap_or(max_degree + servers_per_switch);
        let n = loaded.switch_count();
        // Re-house the imported links with the requested equipment.
        let imported = Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![port_budget; n as usize],
            vec![servers_per_switch; n as usize],
            loaded.links(),
        )
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;

        for trial in 0..trials {
            let topo_seed = derive_seed(
                seeds.topo,
                stream::TOPOLOGY,
                (fi as u64) << 16 | trial as u64,
            );
            let jelly = build_rrg_general(
                TopologyKind::Rrg,
                vec![port_budget; n as usize],
                vec![servers_per_switch; n as usize],
                topo_seed,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let tm_seed = derive_seed(
                seeds.traffic,
                stream::TRAFFIC,
                (fi as u64) << 16 | trial as u64,
            );
            let tm = random_permutation(n * servers_per_switch, tm_seed)
                .map_err(|e| anyhow!("{e}"))?;
            let import_sol = max_concurrent_flow(&imported, &tm, eps).map_err(|e| anyhow!("{e}"))?;
            let jelly_sol = max_concurrent_flow(&jelly, &tm, eps).map_err(|e| anyhow!("{e}"))?;
            let ratio = if import_sol.lambda > 0.0 {
                jelly_sol.lambda / import_sol.lambda
            } else {
                0.0
            };
            report.rows.push(format!(
                "{name},{n},{port_budget},{max_degree},{trial},{tm_seed},{},{},{}",
                cell(import_sol.lambda),
                cell(jelly_sol.lambda),
                cell(ratio)
            ));
        }
    }
    Ok(report)
}

/// Small-world lattice variants vs same-equipment Jellyfish, all switches
/// oversubscribed with the same server count.
pub fn swdc(
    switches: u32,
    degree: u32,
    servers: u32,
    trials: u32,
    eps: f64,
    seeds: Seeds,
) -> anyhow::Result<Report> {
    let mut report = Report::new("swdc", "variant,trial,topo_seed,tm_seed,lambda,mean_flow");
    report
        .param("switches", switches)
        .param("degree", degree)
        .param("servers_per_switch", servers)
        .param("trials", trials)
        .param("eps", eps)
        .param("topo_seed", seeds.topo)
        .param("traffic_seed", seeds.traffic);

    let variants: [(&str, Option<SwdcVariant>); 4] = [
        ("jellyfish", None),
        ("swdc_ring", Some(SwdcVariant::Ring)),
        ("swdc_torus2d", Some(SwdcVariant::Torus2d)),
        ("swdc_hex3d", Some(SwdcVariant::Hex3d)),
    ];

    let rows: Vec<anyhow::Result<Vec<String>>> = variants
        .par_iter()
        .map(|&(name, variant)| {
            let mut rows = Vec::new();
            for trial in 0..trials {
                let topo_seed = derive_seed(
                    seeds.topo,
                    stream::TOPOLOGY,
                    (trial as u64) << 8 | name.len() as u64,
                );
                let t = match variant {
                    None => build_rrg(switches, degree + servers, degree, topo_seed)
                        .map_err(|e| anyhow!("{e}"))?,
                    Some(v) => build_swdc(v, switches, degree, servers, topo_seed)
                        .map_err(|e| anyhow!("{e}"))?,
                };
                let tm_seed = derive_seed(seeds.traffic, stream::TRAFFIC, trial as u64);
                let tm = random_permutation(switches * servers, tm_seed)
                    .map_err(|e| anyhow!("{e}"))?;
                let sol = max_concurrent_flow(&t, &tm, eps).map_err(|e| anyhow!("{e}"))?;
                rows.push(format!(
                    "{name},{trial},{topo_seed},{tm_seed},{},{}",
                    cell(sol.lambda),
                    cell(sol.mean_flow())
                ));
            }
            Ok(rows)
        })
        .collect();
    for r in rows {
        report.rows.extend(r?);
    }
    Ok(report)
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}
