//! Measured graph statistics (path-length distributions via all-pairs BFS)
//! and the analytic envelopes used to sanity-check them: the bisection
//! lower bound and diameter upper bound for random regular graphs, plus
//! closed-form fat-tree counts.

use alloc::collections::BTreeMap;
use alloc::collections::VecDeque;
use alloc::vec;

use crate::error::Error;
use crate::topo::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLevel {
    Switch,
    Server,
}

/// Hop-count histogram over ordered pairs at the requested level.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLengthDistribution {
    pub level: PathLevel,
    /// hop count -> number of ordered pairs at that distance.
    pub histogram: BTreeMap<u32, u64>,
    pub mean: f64,
    pub diameter: u32,
    pub pair_count: u64,
}

impl PathLengthDistribution {
    /// Fraction of ordered pairs strictly closer than `hops`.
    pub fn fraction_below(&self, hops: u32) -> f64 {
        if self.pair_count == 0 {
            return 0.0;
        }
        let below: u64 = self
            .histogram
            .iter()
            .filter(|&(&h, _)| h < hops)
            .map(|(_, &c)| c)
            .sum();
        below as f64 / self.pair_count as f64
    }
}

/// All-pairs shortest path lengths by BFS from every switch.
///
/// At the server level, servers on switches a != b sit at `dist(a, b) + 2`
/// hops from each other, servers sharing a switch at 2; a server is not
/// paired with itself.
pub fn path_lengths(t: &Topology, level: PathLevel) -> Result<PathLengthDistribution, Error> {
    if !t.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = t.switch_count();
    if level == PathLevel::Server && t.total_servers() < 2 {
        return Err(Error::InvalidArgument(
            "server-level path lengths need at least two servers",
        ));
    }
    let adj = t.adjacency();
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut dist = vec![u32::MAX; n as usize];
    let mut queue = VecDeque::new();

    for src in 0..n {
        dist.fill(u32::MAX);
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in adj.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        match level {
            PathLevel::Switch => {
                for dst in 0..n {
                    if dst != src {
                        *histogram.entry(dist[dst as usize]).or_insert(0) += 1;
                    }
                }
            }
            PathLevel::Server => {
                let s_src = t.servers_on(src) as u64;
                if s_src == 0 {
                    continue;
                }
                if s_src > 1 {
                    *histogram.entry(2).or_insert(0) += s_src * (s_src - 1);
                }
                for dst in 0..n {
                    if dst != src {
                        let s_dst = t.servers_on(dst) as u64;
                        if s_dst > 0 {
                            *histogram.entry(dist[dst as usize] + 2).or_insert(0) +=
                                s_src * s_dst;
                        }
                    }
                }
            }
        }
    }

    let pair_count: u64 = histogram.values().sum();
    let weighted: u128 = histogram
        .iter()
        .map(|(&h, &c)| h as u128 * c as u128)
        .sum();
    let mean = if pair_count == 0 {
        0.0
    } else {
        weighted as f64 / pair_count as f64
    };
    let diameter = histogram.keys().next_back().copied().unwrap_or(0);
    Ok(PathLengthDistribution {
        level,
        histogram,
        mean,
        diameter,
        pair_count,
    })
}

/// Bisection lower bound for random regular graphs: in almost every
/// r-regular graph on N nodes, every set of N/2 nodes is joined to the rest
/// by at least `N * (r/4 - sqrt(r ln 2)/2)` edges. May be negative for small
/// r; callers clamp for display.
pub fn bisection_lower_bound(n: u32, r: u32) -> f64 {
    let r = r as f64;
    n as f64 * (r / 4.0 - libm::sqrt(r * core::f64::consts::LN_2) / 2.0)
}

/// Diameter upper bound for random regular graphs:
/// `1 + ceil(log_{r-1}((2 + eps) * r * N * ln N))`. Holds for almost every
/// r-regular graph with r >= 3; the server-to-server bound is this plus 2.
pub fn diameter_upper_bound(n: u32, r: u32, eps: f64) -> Result<u32, Error> {
    if r < 3 {
        return Err(Error::InvalidArgument(
            "diameter bound needs network degree at least 3",
        ));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "diameter bound needs at least two switches",
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive"));
    }
    let n = n as f64;
    let r = r as f64;
    let inner = (2.0 + eps) * r * n * libm::log(n);
    let bound = 1.0 + libm::ceil(libm::log(inner) / libm::log(r - 1.0));
    Ok(bound as u32)
}

/// Closed-form fat-tree counts for kp-port switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatTreeStats {
    pub servers: u64,
    pub switches: u64,
    pub switch_links: u64,
    pub bisection_links: u64,
    /// Fraction of links that stay inside a pod under the pod-per-container
    /// layout: 0.5 * (1 + 1/kp).
    pub local_fraction: f64,
}

pub fn fat_tree_stats(kp: u32) -> Result<FatTreeStats, Error> {
    if kp < 2 || kp % 2 != 0 {
        return Err(Error::InvalidArgument(
            "fat-tree port count must be even and at least 2",
        ));
    }
    let k = kp as u64;
    Ok(FatTreeStats {
        servers: k * k * k / 4,
        switches: 5 * k * k / 4,
        switch_links: k * k * k / 2,
        bisection_links: k * k * k / 8,
        local_fraction: 0.5 * (1.0 + 1.0 / kp as f64),
    })
}

/// Fraction of switch-switch links with both endpoints in the same
/// container, given a per-switch container assignment.
pub fn local_fraction(t: &Topology, containers: &[u32]) -> Result<f64, Error> {
    if containers.len() != t.switch_count() as usize {
        return Err(Error::InvalidArgument(
            "container assignment must cover every switch",
        ));
    }
    if t.link_count() == 0 {
        return Err(Error::InvalidArgument("topology has no switch links"));
    }
    let local = t
        .links()
        .iter()
        .filter(|&&(a, b)| containers[a as usize] == containers[b as usize])
        .count();
    Ok(local as f64 / t.link_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topo::{build_fat_tree, build_layered_rrg, build_rrg, Topology, TopologyKind};
    use alloc::vec;

    #[test]
    fn k4_switch_level_distribution() {
        let t = Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![3; 4],
            vec![0; 4],
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let d = path_lengths(&t, PathLevel::Switch).unwrap();
        assert_eq!(d.pair_count, 12);
        assert_eq!(d.histogram.get(&1), Some(&12));
        assert_eq!(d.mean, 1.0);
        assert_eq!(d.diameter, 1);
    }

    #[test]
    fn fat_tree_14_server_diameter_and_close_pairs() {
        let t = build_fat_tree(14).unwrap();
        let d = path_lengths(&t, PathLevel::Server).unwrap();
        assert_eq!(d.diameter, 6);
        assert_eq!(d.pair_count, 686 * 685);
        // 48 of 685 peers are closer than 6 hops: 6 on the same switch, 42
        // in the same pod.
        let frac = d.fraction_below(6);
        assert!((frac - 48.0 / 685.0).abs() < 1e-12, "frac = {frac}");
    }

    #[test]
    fn distribution_is_symmetric_and_consistent() {
        let t = build_rrg(40, 8, 5, 123).unwrap();
        let d = path_lengths(&t, PathLevel::Switch).unwrap();
        assert_eq!(d.pair_count, 40 * 39);
        for (_, &c) in &d.histogram {
            assert_eq!(c % 2, 0, "ordered-pair counts come in mirror pairs");
        }
        let total: u64 = d.histogram.values().sum();
        assert_eq!(total, d.pair_count);
    }

    #[test]
    fn disconnected_topology_is_an_error() {
        let t = Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![2; 4],
            vec![0; 4],
            &[(0, 1), (2, 3)],
        )
        .unwrap();
        assert_eq!(
            path_lengths(&t, PathLevel::Switch),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn bisection_bound_reference_value() {
        // 100 * (1 - sqrt(4 ln 2) / 2), computed with 30-digit arithmetic.
        let v = bisection_lower_bound(100, 4);
        assert!((v - 16.744_538_884_230_224).abs() < 1e-9, "v = {v}");
    }

    #[test]
    fn bisection_bound_approaches_half_the_links() {
        // bound / (N r / 2) -> 1/2 as r grows.
        let n = 1000;
        let ratio = |r: u32| bisection_lower_bound(n, r) / (n as f64 * r as f64 / 2.0);
        assert!(ratio(10_000) > 0.49);
        assert!(ratio(1_000_000) > 0.499);
        for r in 3..64 {
            assert!(
                bisection_lower_bound(n, r + 1) > bisection_lower_bound(n, r),
                "bound must increase in r at r = {r}"
            );
        }
    }

    #[test]
    fn diameter_bound_reference_and_domain() {
        assert_eq!(diameter_upper_bound(3200, 36, 0.1), Ok(6));
        assert!(diameter_upper_bound(100, 2, 0.1).is_err());
        assert!(diameter_upper_bound(100, 3, 0.0).is_err());
    }

    #[test]
    fn measured_rrg_diameter_within_bound() {
        for seed in 0..5 {
            let t = build_rrg(60, 8, 5, seed).unwrap();
            let d = path_lengths(&t, PathLevel::Switch).unwrap();
            let bound = diameter_upper_bound(60, 5, 0.1).unwrap();
            assert!(
                d.diameter <= bound,
                "diameter {} > bound {}",
                d.diameter,
                bound
            );
        }
    }

    #[test]
    fn fat_tree_stats_reference_values() {
        let s = fat_tree_stats(14).unwrap();
        assert_eq!(s.servers, 686);
        assert_eq!(s.bisection_links, 343);
        assert_eq!(s.switch_links, 1372);
        let s = fat_tree_stats(4).unwrap();
        assert_eq!(s.switches, 20);
        let s = fat_tree_stats(48).unwrap();
        assert!((s.local_fraction - 0.5 * (1.0 + 1.0 / 48.0)).abs() < 1e-12);
        assert!(fat_tree_stats(7).is_err());
    }

    #[test]
    fn fat_tree_link_count_matches_constructed_graph() {
        for kp in [4u32, 6, 8] {
            let stats = fat_tree_stats(kp).unwrap();
            let t = build_fat_tree(kp).unwrap();
            assert_eq!(stats.switch_links as usize, t.link_count());
            let degree_sum: u64 = (0..t.switch_count()).map(|s| t.degree(s) as u64).sum();
            assert_eq!(stats.switch_links, degree_sum / 2);
        }
    }

    #[test]
    fn local_fraction_extremes_and_layered_half() {
        let t = build_rrg(10, 6, 4, 5).unwrap();
        let one = local_fraction(&t, &[0; 10]).unwrap();
        assert_eq!(one, 1.0);
        let split: Vec<u32> = (0..10).collect();
        let zero = local_fraction(&t, &split).unwrap();
        assert_eq!(zero, 0.0);
        assert!(local_fraction(&t, &[0; 3]).is_err());

        let t = build_layered_rrg(4, 12, 10, 4, 4, 2, 17).unwrap();
        let containers: Vec<u32> = (0..48).map(|i| i / 12).collect();
        let f = local_fraction(&t, &containers).unwrap();
        assert!((f - 0.5).abs() <= 1.0 / t.link_count() as f64);
    }
}
