//! Routing-layer path computation: equal-cost shortest path sets (ECMP),
//! Yen's k shortest loop-free paths, and per-link path-diversity counts.
//!
//! All tie-breaks are lexicographic on the switch-id sequence, so identical
//! inputs always produce identical path sets.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::topo::{Adjacency, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    Ecmp,
    Ksp,
}

/// Ordered loop-free switch paths for one source/destination pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub src: u32,
    pub dst: u32,
    pub mode: PathMode,
    pub limit: u32,
    /// Paths as full switch-id sequences from src to dst. ECMP paths all
    /// have minimal length; ksp paths are sorted by (length, sequence).
    pub paths: Vec<Vec<u32>>,
}

/// Up to `h` equal-cost shortest paths, enumerated in lexicographic order
/// over the shortest-path DAG.
pub fn ecmp_paths(t: &Topology, src: u32, dst: u32, h: u32) -> Result<PathSet, Error> {
    check_pair(t, src, dst, h)?;
    let adj = t.adjacency();
    let dist = bfs_distances(&adj, dst);
    if dist[src as usize] == u32::MAX {
        return Err(Error::Unreachable { src, dst });
    }

    let mut paths = Vec::new();
    let mut path = vec![src];
    enumerate_ecmp(&adj, &dist, dst, h as usize, &mut path, &mut paths);
    Ok(PathSet {
        src,
        dst,
        mode: PathMode::Ecmp,
        limit: h,
        paths,
    })
}

fn enumerate_ecmp(
    adj: &Adjacency,
    dist: &[u32],
    dst: u32,
    limit: usize,
    path: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if out.len() == limit {
        return;
    }
    let u = *path.last().unwrap();
    if u == dst {
        out.push(path.clone());
        return;
    }
    for &v in adj.neighbors(u) {
        if dist[v as usize] + 1 == dist[u as usize] {
            path.push(v);
            enumerate_ecmp(adj, dist, dst, limit, path, out);
            path.pop();
            if out.len() == limit {
                return;
            }
        }
    }
}

/// The k shortest loop-free paths under unit edge weights (Yen's ranking
/// over a BFS shortest-path subroutine). Fewer than k are returned when the
/// graph has fewer loop-free paths.
pub fn k_shortest_paths(t: &Topology, src: u32, dst: u32, k: u32) -> Result<PathSet, Error> {
    check_pair(t, src, dst, k)?;
    let adj = t.adjacency();
    let n = adj.node_count() as usize;

    let mut banned_nodes = vec![false; n];
    let banned_edges = BTreeSet::new();
    let first = lex_shortest_path(&adj, src, dst, &banned_nodes, &banned_edges)
        .ok_or(Error::Unreachable { src, dst })?;

    let mut accepted: Vec<Vec<u32>> = vec![first];
    let mut candidates: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();

    while accepted.len() < k as usize {
        let prev = accepted.last().unwrap().clone();
        for i in 0..prev.len() - 1 {
            let spur = prev[i];
            let root = &prev[..i + 1];

            let mut banned_edges = BTreeSet::new();
            for p in &accepted {
                if p.len() > i + 1 && p[..i + 1] == *root {
                    banned_edges.insert((p[i], p[i + 1]));
                }
            }
            for &node in &prev[..i] {
                banned_nodes[node as usize] = true;
            }

            if let Some(spur_path) =
                lex_shortest_path(&adj, spur, dst, &banned_nodes, &banned_edges)
            {
                let mut total = prev[..i].to_vec();
                total.extend_from_slice(&spur_path);
                candidates.insert((total.len(), total));
            }

            for &node in &prev[..i] {
                banned_nodes[node as usize] = false;
            }
        }
        match candidates.pop_first() {
            Some((_, path)) => accepted.push(path),
            None => break,
        }
    }

    Ok(PathSet {
        src,
        dst,
        mode: PathMode::Ksp,
        limit: k,
        paths: accepted,
    })
}

pub fn paths_for(
    t: &Topology,
    src: u32,
    dst: u32,
    mode: PathMode,
    limit: u32,
) -> Result<PathSet, Error> {
    match mode {
        PathMode::Ecmp => ecmp_paths(t, src, dst, limit),
        PathMode::Ksp => k_shortest_paths(t, src, dst, limit),
    }
}

/// Per-directed-link path counts for a set of switch-level flows (the
/// path-diversity histogram). Every directed inter-switch link appears in
/// the output, links on no path with count 0. Flows between the same switch
/// bypass the fabric and are skipped.
pub fn link_path_counts(
    t: &Topology,
    flows: &[(u32, u32)],
    mode: PathMode,
    limit: u32,
) -> Result<BTreeMap<(u32, u32), u64>, Error> {
    if flows.is_empty() {
        return Err(Error::InvalidArgument("flow list is empty"));
    }
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &(a, b) in t.links() {
        counts.insert((a, b), 0);
        counts.insert((b, a), 0);
    }
    let mut cache: BTreeMap<(u32, u32), PathSet> = BTreeMap::new();
    for &(src, dst) in flows {
        if src == dst {
            continue;
        }
        if !cache.contains_key(&(src, dst)) {
            cache.insert((src, dst), paths_for(t, src, dst, mode, limit)?);
        }
        let set = &cache[&(src, dst)];
        for path in &set.paths {
            for pair in path.windows(2) {
                *counts.get_mut(&(pair[0], pair[1])).unwrap() += 1;
            }
        }
    }
    Ok(counts)
}

fn check_pair(t: &Topology, src: u32, dst: u32, limit: u32) -> Result<(), Error> {
    if src == dst {
        return Err(Error::InvalidArgument("src and dst must differ"));
    }
    if src >= t.switch_count() || dst >= t.switch_count() {
        return Err(Error::InvalidArgument("switch id out of range"));
    }
    if limit == 0 {
        return Err(Error::InvalidArgument("path limit must be positive"));
    }
    Ok(())
}

fn bfs_distances(adj: &Adjacency, from: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.node_count() as usize];
    dist[from as usize] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Lexicographically smallest shortest path from src to dst that avoids
/// banned nodes and banned directed edges; None if dst is unreachable.
fn lex_shortest_path(
    adj: &Adjacency,
    src: u32,
    dst: u32,
    banned_nodes: &[bool],
    banned_edges: &BTreeSet<(u32, u32)>,
) -> Option<Vec<u32>> {
    // Reverse BFS from dst: dist[x] = hops from x to dst along allowed moves.
    let mut dist = vec![u32::MAX; adj.node_count() as usize];
    dist[dst as usize] = 0;
    let mut queue = VecDeque::from([dst]);
    while let Some(y) = queue.pop_front() {
        for &x in adj.neighbors(y) {
            if dist[x as usize] == u32::MAX
                && !banned_nodes[x as usize]
                && !banned_edges.contains(&(x, y))
            {
                dist[x as usize] = dist[y as usize] + 1;
                queue.push_back(x);
            }
        }
    }
    if banned_nodes[src as usize] || dist[src as usize] == u32::MAX {
        return None;
    }
    // Walk forward, always taking the smallest-id next hop on a shortest way.
    let mut path = vec![src];
    let mut u = src;
    while u != dst {
        let mut next = None;
        for &v in adj.neighbors(u) {
            if !banned_nodes[v as usize]
                && !banned_edges.contains(&(u, v))
                && dist[v as usize] != u32::MAX
                && dist[v as usize] + 1 == dist[u as usize]
            {
                next = Some(v);
                break;
            }
        }
        u = next.expect("shortest-path walk must reach dst");
        path.push(u);
    }
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topo::{build_rrg, Topology, TopologyKind};

    fn line3() -> Topology {
        Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![2; 3],
            vec![0; 3],
            &[(0, 1), (1, 2)],
        )
        .unwrap()
    }

    fn cycle4() -> Topology {
        Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![2; 4],
            vec![0; 4],
            &[(0, 1), (1, 2), (2, 3), (0, 3)],
        )
        .unwrap()
    }

    fn k4() -> Topology {
        Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![3; 4],
            vec![0; 4],
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn ecmp_on_a_path_graph_is_the_single_path() {
        let set = ecmp_paths(&line3(), 0, 2, 8).unwrap();
        assert_eq!(set.paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn ecmp_on_a_cycle_finds_both_sides() {
        let set = ecmp_paths(&cycle4(), 0, 2, 8).unwrap();
        assert_eq!(set.paths, vec![vec![0, 1, 2], vec![0, 3, 2]]);
    }

    #[test]
    fn ecmp_limit_is_monotone() {
        let t = build_rrg(30, 8, 6, 77).unwrap();
        for dst in 1..10 {
            let few = ecmp_paths(&t, 0, dst, 8).unwrap().paths.len();
            let many = ecmp_paths(&t, 0, dst, 64).unwrap().paths.len();
            assert!(many >= few);
            assert!(few <= 8);
        }
    }

    #[test]
    fn ksp_on_a_path_graph_is_the_single_path() {
        let set = k_shortest_paths(&line3(), 0, 2, 8).unwrap();
        assert_eq!(set.paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn ksp_on_a_cycle_finds_exactly_two_loop_free_paths() {
        let set = k_shortest_paths(&cycle4(), 0, 2, 8).unwrap();
        assert_eq!(set.paths, vec![vec![0, 1, 2], vec![0, 3, 2]]);
    }

    #[test]
    fn ksp_on_k4_finds_all_five_paths() {
        let set = k_shortest_paths(&k4(), 0, 1, 8).unwrap();
        let lengths: Vec<usize> = set.paths.iter().map(|p| p.len() - 1).collect();
        assert_eq!(lengths, vec![1, 2, 2, 3, 3]);
        assert_eq!(set.paths[0], vec![0, 1]);
        assert_eq!(set.paths[1], vec![0, 2, 1]);
        assert_eq!(set.paths[2], vec![0, 3, 1]);
    }

    #[test]
    fn ksp_k1_equals_first_ecmp_path() {
        let t = build_rrg(40, 8, 5, 3).unwrap();
        for dst in 1..15 {
            let ksp = k_shortest_paths(&t, 0, dst, 1).unwrap();
            let ecmp = ecmp_paths(&t, 0, dst, 8).unwrap();
            assert_eq!(ksp.paths[0], ecmp.paths[0]);
        }
    }

    #[test]
    fn ksp_lengths_are_non_decreasing_and_paths_valid() {
        let t = build_rrg(30, 10, 6, 5).unwrap();
        for dst in 1..12 {
            let set = k_shortest_paths(&t, 0, dst, 8).unwrap();
            let mut last = 0;
            for p in &set.paths {
                assert!(p.len() >= last);
                last = p.len();
                assert_eq!(p[0], 0);
                assert_eq!(*p.last().unwrap(), dst);
                let mut seen: Vec<u32> = p.clone();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), p.len(), "loop in path {p:?}");
                for pair in p.windows(2) {
                    assert!(t.has_link(pair[0], pair[1]), "missing edge {pair:?}");
                }
            }
        }
    }

    #[test]
    fn unreachable_and_degenerate_pairs_error() {
        let t = Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![2; 4],
            vec![0; 4],
            &[(0, 1), (2, 3)],
        )
        .unwrap();
        assert_eq!(
            ecmp_paths(&t, 0, 2, 8),
            Err(Error::Unreachable { src: 0, dst: 2 })
        );
        assert_eq!(
            k_shortest_paths(&t, 0, 2, 8),
            Err(Error::Unreachable { src: 0, dst: 2 })
        );
        assert!(ecmp_paths(&t, 0, 0, 8).is_err());
        assert!(ecmp_paths(&t, 0, 1, 0).is_err());
    }

    #[test]
    fn single_flow_link_counts_on_a_path_graph() {
        let counts = link_path_counts(&line3(), &[(0, 2)], PathMode::Ecmp, 8).unwrap();
        assert_eq!(counts[&(0, 1)], 1);
        assert_eq!(counts[&(1, 2)], 1);
        assert_eq!(counts[&(1, 0)], 0);
        assert_eq!(counts[&(2, 1)], 0);
        assert_eq!(counts.len(), 4);
    }

    #[test]
    fn repeated_flows_count_separately() {
        let counts = link_path_counts(&line3(), &[(0, 2), (0, 2)], PathMode::Ecmp, 8).unwrap();
        assert_eq!(counts[&(0, 1)], 2);
    }

    #[test]
    fn path_sets_are_deterministic() {
        let t = build_rrg(50, 10, 6, 9).unwrap();
        let a = k_shortest_paths(&t, 3, 40, 8).unwrap();
        let b = k_shortest_paths(&t, 3, 40, 8).unwrap();
        assert_eq!(a, b);
    }
}
