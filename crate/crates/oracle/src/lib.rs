//! Reference implementations used to cross-check the main crates.
//!
//! Everything here favors brute force over cleverness: paths are enumerated
//! exhaustively and the concurrent-flow value comes from a simplex LP over
//! that enumeration. Only suitable for small instances (roughly up to a dozen
//! nodes); the test suites keep their inputs in that range.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// A directed flow instance: `edges` are (from, to, capacity), commodities
/// are (src, dst, demand).
#[derive(Debug, Clone)]
pub struct Instance {
    pub nodes: u32,
    pub edges: Vec<(u32, u32, f64)>,
    pub commodities: Vec<(u32, u32, f64)>,
}

/// Exact maximum concurrent flow via full path enumeration and an LP.
///
/// Maximizes lambda subject to every commodity routing at least
/// `lambda * demand` over its simple paths within edge capacities.
/// Returns 0 when some commodity has no path at all.
pub fn max_concurrent_lambda(inst: &Instance) -> f64 {
    let adj = adjacency(inst.nodes, &inst.edges);
    let edge_index = |a: u32, b: u32| -> usize {
        inst.edges
            .iter()
            .position(|&(x, y, _)| x == a && y == b)
            .expect("path uses an edge that is not in the instance")
    };

    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let lambda = problem.add_var(1.0, (0.0, f64::INFINITY));

    // edge_terms[e] collects (path variable, 1.0) for every path crossing e.
    let mut edge_terms: Vec<Vec<(minilp::Variable, f64)>> = vec![Vec::new(); inst.edges.len()];

    for &(src, dst, demand) in &inst.commodities {
        let paths = simple_paths(&adj, src, dst);
        if paths.is_empty() {
            return 0.0;
        }
        let mut commodity_terms = vec![(lambda, -demand)];
        for path in &paths {
            let var = problem.add_var(0.0, (0.0, f64::INFINITY));
            commodity_terms.push((var, 1.0));
            for pair in path.windows(2) {
                edge_terms[edge_index(pair[0], pair[1])].push((var, 1.0));
            }
        }
        problem.add_constraint(&commodity_terms, ComparisonOp::Ge, 0.0);
    }

    for (e, terms) in edge_terms.into_iter().enumerate() {
        if !terms.is_empty() {
            problem.add_constraint(&terms, ComparisonOp::Le, inst.edges[e].2);
        }
    }

    match problem.solve() {
        Ok(solution) => solution[lambda],
        Err(_) => 0.0,
    }
}

/// All simple (loop-free) paths from `src` to `dst`, as node sequences,
/// sorted by (length, lexicographic node order).
pub fn all_simple_paths(nodes: u32, edges: &[(u32, u32)], src: u32, dst: u32) -> Vec<Vec<u32>> {
    let dir: Vec<(u32, u32, f64)> = edges
        .iter()
        .flat_map(|&(a, b)| [(a, b, 1.0), (b, a, 1.0)])
        .collect();
    let adj = adjacency(nodes, &dir);
    let mut paths = simple_paths(&adj, src, dst);
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths
}

/// Minimum s-t cut of an undirected unit-capacity graph (Edmonds-Karp).
pub fn min_cut_unit(nodes: u32, edges: &[(u32, u32)], s: u32, t: u32) -> u32 {
    // residual[a][b] over directed arcs; undirected unit edge = 1 each way.
    let n = nodes as usize;
    let mut cap = vec![vec![0i32; n]; n];
    for &(a, b) in edges {
        cap[a as usize][b as usize] = 1;
        cap[b as usize][a as usize] = 1;
    }
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s as usize] = s as usize;
        let mut queue = std::collections::VecDeque::from([s as usize]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t as usize] == usize::MAX {
            return flow;
        }
        let mut v = t as usize;
        while v != s as usize {
            let u = parent[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Diameter of an undirected graph by BFS from every node; None if disconnected.
pub fn diameter_undirected(nodes: u32, edges: &[(u32, u32)]) -> Option<u32> {
    let dir: Vec<(u32, u32, f64)> = edges
        .iter()
        .flat_map(|&(a, b)| [(a, b, 1.0), (b, a, 1.0)])
        .collect();
    let adj = adjacency(nodes, &dir);
    let mut diameter = 0;
    for s in 0..nodes {
        let mut dist = vec![u32::MAX; nodes as usize];
        dist[s as usize] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        for &d in &dist {
            if d == u32::MAX {
                return None;
            }
            diameter = diameter.max(d);
        }
    }
    Some(diameter)
}

fn adjacency(nodes: u32, edges: &[(u32, u32, f64)]) -> Vec<Vec<(u32, usize)>> {
    let mut adj = vec![Vec::new(); nodes as usize];
    for (idx, &(a, b, _)) in edges.iter().enumerate() {
        adj[a as usize].push((b, idx));
    }
    adj
}

fn simple_paths(adj: &[Vec<(u32, usize)>], src: u32, dst: u32) -> Vec<Vec<u32>> {
    let mut paths = Vec::new();
    let mut on_path = vec![false; adj.len()];
    let mut path = vec![src];
    on_path[src as usize] = true;
    dfs(adj, dst, &mut path, &mut on_path, &mut paths);
    paths
}

fn dfs(
    adj: &[Vec<(u32, usize)>],
    dst: u32,
    path: &mut Vec<u32>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<u32>>,
) {
    let u = *path.last().unwrap();
    if u == dst {
        out.push(path.clone());
        return;
    }
    for &(v, _) in &adj[u as usize] {
        if !on_path[v as usize] {
            on_path[v as usize] = true;
            path.push(v);
            dfs(adj, dst, path, on_path, out);
            path.pop();
            on_path[v as usize] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_bidirected(edges: &[(u32, u32)]) -> Vec<(u32, u32, f64)> {
        edges
            .iter()
            .flat_map(|&(a, b)| [(a, b, 1.0), (b, a, 1.0)])
            .collect()
    }

    #[test]
    fn two_nodes_one_link_both_directions() {
        let inst = Instance {
            nodes: 2,
            edges: unit_bidirected(&[(0, 1)]),
            commodities: vec![(0, 1, 1.0), (1, 0, 1.0)],
        };
        let lambda = max_concurrent_lambda(&inst);
        assert!((lambda - 1.0).abs() < 1e-9, "lambda = {lambda}");
    }

    #[test]
    fn star_of_three_through_hub() {
        // Switches 0..=2 are ToRs, 3 is the hub; ring permutation demands.
        let inst = Instance {
            nodes: 4,
            edges: unit_bidirected(&[(0, 3), (1, 3), (2, 3)]),
            commodities: vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)],
        };
        let lambda = max_concurrent_lambda(&inst);
        assert!((lambda - 1.0).abs() < 1e-9, "lambda = {lambda}");
    }

    #[test]
    fn shared_single_link_splits_capacity() {
        // Two commodities forced over the same directed edge.
        let inst = Instance {
            nodes: 4,
            edges: vec![
                (0, 1, 1.0),
                (2, 1, 1.0),
                (1, 3, 1.0), // shared bottleneck
                (3, 0, 1.0),
                (3, 2, 1.0),
            ],
            commodities: vec![(0, 3, 1.0), (2, 3, 1.0)],
        };
        let lambda = max_concurrent_lambda(&inst);
        assert!((lambda - 0.5).abs() < 1e-9, "lambda = {lambda}");
    }

    #[test]
    fn disconnected_commodity_gives_zero() {
        let inst = Instance {
            nodes: 3,
            edges: unit_bidirected(&[(0, 1)]),
            commodities: vec![(0, 2, 1.0)],
        };
        assert_eq!(max_concurrent_lambda(&inst), 0.0);
    }

    #[test]
    fn k4_simple_path_census() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let paths = all_simple_paths(4, &edges, 0, 1);
        assert_eq!(paths.len(), 5);
        let lengths: Vec<usize> = paths.iter().map(|p| p.len() - 1).collect();
        assert_eq!(lengths, vec![1, 2, 2, 3, 3]);
    }

    #[test]
    fn cycle_min_cut_is_two() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
        assert_eq!(min_cut_unit(4, &edges, 0, 2), 2);
    }

    #[test]
    fn petersen_diameter_is_two() {
        let edges = [
            (0, 1),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 6),
            (2, 3),
            (2, 7),
            (3, 4),
            (3, 8),
            (4, 9),
            (5, 7),
            (5, 8),
            (6, 8),
            (6, 9),
            (7, 9),
        ];
        assert_eq!(diameter_undirected(10, &edges), Some(2));
    }
}
