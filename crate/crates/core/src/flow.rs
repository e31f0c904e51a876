//! Flow-level throughput evaluation: random-permutation traffic, approximate
//! maximum concurrent multi-commodity flow (free or path-restricted), the
//! full-capacity binary search, failure sweeps, and Jain's fairness index.
//!
//! The solver is a Garg-Konemann / Fleischer style multiplicative-weights
//! scheme with a shortest-path oracle over length-weighted links. Rather than
//! relying on the worst-case phase count, it tracks an explicit certificate:
//! a feasible scaled primal gives a lower bound on the concurrent fraction
//! and the length function gives the dual upper bound `D(l) / alpha(l)`;
//! iteration stops once the two are within the requested epsilon. The
//! reported lambda is therefore always in `[(1 - eps) * opt, opt]`.
//!
//! Traffic is modeled at the server level. Server access links (capacity 1
//! each way) are private to their server, so for permutation traffic they
//! never bind below full rate: the fabric problem is solved over switches
//! with demands aggregated per (source switch, destination switch) pair and
//! the result clamped to 1. Flows between servers on the same switch bypass
//! the fabric entirely and always achieve full rate.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::Error;
use crate::rng::{self, derive_seed, rng_from_seed};
use crate::route::{self, PathMode};
use crate::topo::{build_rrg_general, Topology, TopologyKind};

/// Server-level demand permutation: server i sends one unit to `dst[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrafficMatrix {
    servers: u32,
    dst: Vec<u32>,
    seed: u64,
}

impl TrafficMatrix {
    pub fn servers(&self) -> u32 {
        self.servers
    }

    pub fn dst(&self) -> &[u32] {
        &self.dst
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Uniform random derangement (no server sends to itself), by rejection
/// sampling of uniform permutations.
pub fn random_permutation(servers: u32, seed: u64) -> Result<TrafficMatrix, Error> {
    if servers < 2 {
        return Err(Error::InvalidArgument(
            "a permutation needs at least two servers",
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut dst: Vec<u32> = (0..servers).collect();
    loop {
        dst.shuffle(&mut rng);
        if dst.iter().enumerate().all(|(i, &d)| i as u32 != d) {
            return Ok(TrafficMatrix { servers, dst, seed });
        }
    }
}

/// Result of one concurrent-flow solve.
///
/// `lambda` is the certified concurrent throughput fraction (0 when any
/// commodity is unreachable). `per_flow` is indexed by sending server;
/// same-switch flows achieve 1. `link_util` holds the utilization of each
/// directed switch-switch link in `directed_links` order, for the flow
/// scaled to `lambda`; `group_link_flow` breaks it down per source-switch
/// commodity group (rows follow `group_sources`).
#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub lambda: f64,
    pub per_flow: Vec<f64>,
    pub epsilon: f64,
    pub iterations: u64,
    pub directed_links: Vec<(u32, u32)>,
    pub link_util: Vec<f64>,
    pub group_sources: Vec<u32>,
    pub group_link_flow: Vec<Vec<f64>>,
}

impl FlowSolution {
    pub fn mean_flow(&self) -> f64 {
        if self.per_flow.is_empty() {
            return 0.0;
        }
        self.per_flow.iter().sum::<f64>() / self.per_flow.len() as f64
    }

    pub fn min_flow(&self) -> f64 {
        self.per_flow.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn link_util_map(&self) -> BTreeMap<(u32, u32), f64> {
        self.directed_links
            .iter()
            .copied()
            .zip(self.link_util.iter().copied())
            .collect()
    }
}

/// (1 - eps)-approximate maximum concurrent flow for the permutation,
/// splittable over all links. Unreachable pairs force lambda = 0; the
/// reachable remainder is still solved so failure sweeps can report mean
/// throughput.
pub fn max_concurrent_flow(
    t: &Topology,
    tm: &TrafficMatrix,
    eps: f64,
) -> Result<FlowSolution, Error> {
    check_eps(eps)?;
    let flows = switch_flows(t, tm)?;
    solve(t, &flows, eps, Restriction::None, None).map(|(solution, _)| solution)
}

/// Same objective, but each commodity may only split over its precomputed
/// path set (`ecmp_h` or `ksp_k` from the routing layer). Errors if any
/// commodity's destination is unreachable.
pub fn restricted_flow(
    t: &Topology,
    tm: &TrafficMatrix,
    mode: PathMode,
    limit: u32,
    eps: f64,
) -> Result<FlowSolution, Error> {
    check_eps(eps)?;
    let flows = switch_flows(t, tm)?;
    for &(a, b) in &flows.fabric_pairs {
        // Path computation reports unreachable destinations as errors.
        route::paths_for(t, a, b, mode, limit)?;
    }
    solve(t, &flows, eps, Restriction::Paths { mode, limit }, None).map(|(s, _)| s)
}

/// Whether the permutation achieves full capacity: lambda >= 1 - eps.
/// Decided with early exit as soon as either bound settles the answer.
pub fn supports_full_capacity(t: &Topology, tm: &TrafficMatrix, eps: f64) -> Result<bool, Error> {
    check_eps(eps)?;
    let flows = switch_flows(t, tm)?;
    let threshold = 1.0 - eps;
    let (solution, decided) = solve(t, &flows, eps, Restriction::None, Some(threshold))?;
    Ok(decided.unwrap_or(solution.lambda >= threshold))
}

/// Largest server count the equipment (S switches of k ports) supports at
/// full capacity, by binary search. Each probe spreads the servers as evenly
/// as possible over the switches, builds a fresh RRG with the leftover ports
/// and tests three random permutations; the converged count is confirmed
/// against ten more.
pub fn max_servers_full_capacity(
    switches: u32,
    ports: u32,
    eps: f64,
    seed: u64,
) -> Result<u32, Error> {
    check_eps(eps)?;
    if switches < 1 {
        return Err(Error::InvalidArgument("switch count must be positive"));
    }
    let pass = |m: u32, stream: u64, trials: u64| -> bool {
        if m < 2 {
            return true;
        }
        let Some(t) = probe_topology(switches, ports, m, seed) else {
            return false;
        };
        (0..trials).all(|trial| {
            let tm_seed = derive_seed(seed, stream, (m as u64) << 8 | trial);
            match random_permutation(m, tm_seed) {
                Ok(tm) => supports_full_capacity(&t, &tm, eps).unwrap_or(false),
                Err(_) => false,
            }
        })
    };

    let mut lo = 0u32;
    let mut hi = switches.saturating_mul(ports.saturating_sub(1)).saturating_add(1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pass(mid, rng::stream::TRAFFIC, 3) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Confirm against ten fresh permutations, stepping down on failure.
    while lo >= 2 && !pass(lo, rng::stream::CONFIRM, 10) {
        lo -= 1;
    }
    Ok(lo)
}

fn probe_topology(switches: u32, ports: u32, m: u32, seed: u64) -> Option<Topology> {
    let base = m / switches;
    let extra = m % switches;
    if base + 1 > ports {
        return None;
    }
    let servers: Vec<u32> = (0..switches)
        .map(|i| if i < extra { base + 1 } else { base })
        .collect();
    let topo_seed = derive_seed(seed, rng::stream::TOPOLOGY, m as u64);
    build_rrg_general(
        TopologyKind::Rrg,
        vec![ports; switches as usize],
        servers,
        topo_seed,
    )
    .ok()
}

/// Jain's fairness index `(sum x)^2 / (n * sum x^2)` over non-negative
/// values, 1 when all are equal.
pub fn jain_index(values: &[f64]) -> Result<f64, Error> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("fairness needs at least one value"));
    }
    if values.iter().any(|&v| v < 0.0 || v.is_nan()) {
        return Err(Error::InvalidArgument("fairness values must be non-negative"));
    }
    let sum: f64 = values.iter().sum();
    let sq: f64 = values.iter().map(|&v| v * v).sum();
    if sq == 0.0 {
        return Err(Error::InvalidArgument("fairness values must not all be zero"));
    }
    Ok(sum * sum / (values.len() as f64 * sq))
}

/// One failure-sweep measurement row.
#[derive(Debug, Clone)]
pub struct FailureTrial {
    pub fraction: f64,
    pub trial: u32,
    pub fail_seed: u64,
    pub traffic_seed: u64,
    pub lambda: f64,
    pub mean_flow: f64,
    pub min_flow: f64,
    pub jain: f64,
}

/// Normalized per-server throughput under random link failures: for each
/// fraction, `trials` independent (failure, fresh permutation) samples.
pub fn throughput_vs_failures(
    t: &Topology,
    fractions: &[f64],
    trials: u32,
    eps: f64,
    seed: u64,
) -> Result<Vec<FailureTrial>, Error> {
    check_eps(eps)?;
    let servers = t.total_servers() as u32;
    let mut rows = Vec::with_capacity(fractions.len() * trials as usize);
    for (fi, &fraction) in fractions.iter().enumerate() {
        for trial in 0..trials {
            let index = (fi as u64) << 16 | trial as u64;
            let fail_seed = derive_seed(seed, rng::stream::FAILURE, index);
            let traffic_seed = derive_seed(seed, rng::stream::TRAFFIC, index);
            let failed = crate::expand::fail_links(t, fraction, fail_seed)?;
            let tm = random_permutation(servers, traffic_seed)?;
            let solution = max_concurrent_flow(&failed, &tm, eps)?;
            rows.push(FailureTrial {
                fraction,
                trial,
                fail_seed,
                traffic_seed,
                lambda: solution.lambda,
                mean_flow: solution.mean_flow(),
                min_flow: solution.min_flow(),
                jain: jain_index(&solution.per_flow).unwrap_or(0.0),
            });
        }
    }
    Ok(rows)
}

fn check_eps(eps: f64) -> Result<(), Error> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidArgument("eps must be in (0, 0.5]"));
    }
    Ok(())
}

/// Server flows mapped to switch level.
struct SwitchFlows {
    /// Sending switch and receiving switch per server, in server order.
    endpoints: Vec<(u32, u32)>,
    /// Aggregated fabric demands over distinct (src, dst) switch pairs.
    demands: BTreeMap<(u32, u32), f64>,
    fabric_pairs: Vec<(u32, u32)>,
}

fn switch_flows(t: &Topology, tm: &TrafficMatrix) -> Result<SwitchFlows, Error> {
    if tm.servers as u64 != t.total_servers() {
        return Err(Error::InvalidArgument(
            "traffic matrix size does not match the topology's server count",
        ));
    }
    let home = t.server_switches();
    let mut endpoints = Vec::with_capacity(tm.dst.len());
    let mut demands: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (i, &d) in tm.dst.iter().enumerate() {
        let (a, b) = (home[i], home[d as usize]);
        endpoints.push((a, b));
        if a != b {
            *demands.entry((a, b)).or_insert(0.0) += 1.0;
        }
    }
    let fabric_pairs = demands.keys().copied().collect();
    Ok(SwitchFlows {
        endpoints,
        demands,
        fabric_pairs,
    })
}

enum Restriction {
    None,
    Paths { mode: PathMode, limit: u32 },
}

/// Shared solve-and-assemble path. Returns the solution and, when `decision`
/// is set, the early-exit answer for `lambda >= threshold` if one was
/// reached before the duality gap closed.
fn solve(
    t: &Topology,
    flows: &SwitchFlows,
    eps: f64,
    restriction: Restriction,
    decision: Option<f64>,
) -> Result<(FlowSolution, Option<bool>), Error> {
    let net = Network::from_topology(t);

    // Split demands into reachable and unreachable by component.
    let comp = components(t);
    let mut reachable: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut any_unreachable = false;
    for (&(a, b), &d) in &flows.demands {
        if comp[a as usize] == comp[b as usize] {
            reachable.insert((a, b), d);
        } else {
            any_unreachable = true;
        }
    }

    let outcome = if reachable.is_empty() {
        GkOutcome::trivial(&net)
    } else {
        match restriction {
            Restriction::None => {
                let groups = group_by_source(&reachable);
                gk_free(&net, &groups, eps, decision)
            }
            Restriction::Paths { mode, limit } => {
                let commodities = path_commodities(t, &net, &reachable, mode, limit)?;
                gk_paths(&net, &commodities, eps, decision)
            }
        }
    };

    let fabric_lambda = if reachable.is_empty() {
        1.0
    } else {
        outcome.lambda_low.min(1.0)
    };
    // Scale the accumulated flow so each commodity routes exactly
    // fabric_lambda * demand; utilization then respects capacities.
    let scale = if outcome.phases == 0 {
        0.0
    } else {
        fabric_lambda / outcome.phases as f64
    };

    let lambda = if any_unreachable { 0.0 } else { fabric_lambda };
    let per_flow = flows
        .endpoints
        .iter()
        .map(|&(a, b)| {
            if a == b {
                1.0
            } else if comp[a as usize] != comp[b as usize] {
                0.0
            } else {
                fabric_lambda
            }
        })
        .collect();

    let link_util: Vec<f64> = outcome.edge_flow.iter().map(|&f| f * scale).collect();
    let group_link_flow: Vec<Vec<f64>> = outcome
        .group_edge_flow
        .iter()
        .map(|row| row.iter().map(|&f| f * scale).collect())
        .collect();

    let solution = FlowSolution {
        lambda,
        per_flow,
        epsilon: eps,
        iterations: outcome.phases,
        directed_links: net.directed_links(),
        link_util,
        group_sources: outcome.group_sources,
        group_link_flow,
    };
    Ok((solution, outcome.decided))
}

/// Directed switch-level network in CSR form. Every undirected link becomes
/// two unit-capacity directed edges, ordered by the sorted link list.
struct Network {
    nodes: u32,
    from: Vec<u32>,
    to: Vec<u32>,
    cap: Vec<f64>,
    out_off: Vec<u32>,
    out_edge: Vec<u32>,
}

impl Network {
    fn from_topology(t: &Topology) -> Network {
        let links = t.sorted_links();
        let mut from = Vec::with_capacity(links.len() * 2);
        let mut to = Vec::with_capacity(links.len() * 2);
        for &(a, b) in &links {
            from.push(a);
            to.push(b);
            from.push(b);
            to.push(a);
        }
        let cap = vec![1.0; from.len()];
        Network::from_edges(t.switch_count(), from, to, cap)
    }

    fn from_edges(nodes: u32, from: Vec<u32>, to: Vec<u32>, cap: Vec<f64>) -> Network {
        let m = from.len();
        let mut counts = vec![0u32; nodes as usize + 1];
        for &f in &from {
            counts[f as usize + 1] += 1;
        }
        for i in 0..nodes as usize {
            counts[i + 1] += counts[i];
        }
        let out_off = counts.clone();
        let mut cursor = counts;
        let mut out_edge = vec![0u32; m];
        for e in 0..m {
            let f = from[e] as usize;
            out_edge[cursor[f] as usize] = e as u32;
            cursor[f] += 1;
        }
        Network {
            nodes,
            from,
            to,
            cap,
            out_off,
            out_edge,
        }
    }

    fn edge_count(&self) -> usize {
        self.from.len()
    }

    fn out_edges(&self, v: u32) -> &[u32] {
        let lo = self.out_off[v as usize] as usize;
        let hi = self.out_off[v as usize + 1] as usize;
        &self.out_edge[lo..hi]
    }

    fn directed_links(&self) -> Vec<(u32, u32)> {
        self.from
            .iter()
            .copied()
            .zip(self.to.iter().copied())
            .collect()
    }

    /// Directed edge id for (a, b); edges come in (a,b),(b,a) pairs over the
    /// sorted link list, so binary search on the pair works.
    fn edge_id(&self, a: u32, b: u32) -> u32 {
        for &e in self.out_edges(a) {
            if self.to[e as usize] == b {
                return e;
            }
        }
        unreachable!("edge lookup for a missing link")
    }
}

struct SourceGroup {
    src: u32,
    dsts: Vec<(u32, f64)>,
}

fn group_by_source(demands: &BTreeMap<(u32, u32), f64>) -> Vec<SourceGroup> {
    let mut groups: Vec<SourceGroup> = Vec::new();
    for (&(a, b), &d) in demands {
        match groups.last_mut() {
            Some(g) if g.src == a => g.dsts.push((b, d)),
            _ => groups.push(SourceGroup {
                src: a,
                dsts: vec![(b, d)],
            }),
        }
    }
    groups
}

struct PathCommodity {
    src: u32,
    demand: f64,
    /// Each path as a list of directed edge ids.
    paths: Vec<Vec<u32>>,
}

fn path_commodities(
    t: &Topology,
    net: &Network,
    demands: &BTreeMap<(u32, u32), f64>,
    mode: PathMode,
    limit: u32,
) -> Result<Vec<PathCommodity>, Error> {
    let mut out = Vec::with_capacity(demands.len());
    for (&(a, b), &d) in demands {
        let set = route::paths_for(t, a, b, mode, limit)?;
        let paths = set
            .paths
            .iter()
            .map(|p| {
                p.windows(2)
                    .map(|w| net.edge_id(w[0], w[1]))
                    .collect::<Vec<u32>>()
            })
            .collect();
        out.push(PathCommodity {
            src: a,
            demand: d,
            paths,
        });
    }
    Ok(out)
}

struct GkOutcome {
    lambda_low: f64,
    phases: u64,
    edge_flow: Vec<f64>,
    group_sources: Vec<u32>,
    group_edge_flow: Vec<Vec<f64>>,
    decided: Option<bool>,
}

impl GkOutcome {
    fn trivial(net: &Network) -> GkOutcome {
        GkOutcome {
            lambda_low: 1.0,
            phases: 0,
            edge_flow: vec![0.0; net.edge_count()],
            group_sources: Vec::new(),
            group_edge_flow: Vec::new(),
            decided: None,
        }
    }
}

const MAX_PHASES: u64 = 5_000_000;
const LENGTH_RESCALE: f64 = 1e100;

/// Multiplicative-weights concurrent flow over the free (all-links) model.
/// One phase routes every commodity's full demand along current shortest
/// paths, grouped by source so each group costs one Dijkstra.
fn gk_free(
    net: &Network,
    groups: &[SourceGroup],
    eps: f64,
    decision: Option<f64>,
) -> GkOutcome {
    let m = net.edge_count();
    let step = eps / 3.0;
    let mut lengths: Vec<f64> = net.cap.iter().map(|&c| 1.0 / c).collect();
    let mut edge_flow = vec![0.0f64; m];
    let mut group_edge_flow = vec![vec![0.0f64; m]; groups.len()];
    let mut lambda_up = f64::INFINITY;
    let mut phases = 0u64;
    let mut decided = None;

    let mut dist = vec![vec![f64::INFINITY; net.nodes as usize]; groups.len()];
    let mut parent = vec![vec![u32::MAX; net.nodes as usize]; groups.len()];
    let mut path = Vec::new();

    while phases < MAX_PHASES {
        // Bound pass under frozen lengths: D(l) / alpha(l) is only a valid
        // dual value when every distance is measured against the same l, so
        // all trees are computed before any routing mutates the lengths.
        let d_l: f64 = lengths
            .iter()
            .zip(net.cap.iter())
            .map(|(&l, &c)| l * c)
            .sum();
        let mut alpha = 0.0;
        for (gi, group) in groups.iter().enumerate() {
            dijkstra(net, group.src, &lengths, &mut dist[gi], &mut parent[gi]);
            for &(dst, demand) in &group.dsts {
                alpha += demand * dist[gi][dst as usize];
            }
        }

        // Routing pass along the phase-start trees.
        for (gi, group) in groups.iter().enumerate() {
            for &(dst, demand) in &group.dsts {
                path.clear();
                let mut v = dst;
                while v != group.src {
                    let e = parent[gi][v as usize];
                    path.push(e);
                    v = net.from[e as usize];
                }
                route_chunks(
                    net,
                    &path,
                    demand,
                    step,
                    &mut lengths,
                    &mut edge_flow,
                    &mut group_edge_flow[gi],
                );
            }
        }
        phases += 1;
        lambda_up = lambda_up.min(d_l / alpha);

        let congestion = edge_flow
            .iter()
            .zip(net.cap.iter())
            .map(|(&f, &c)| f / c)
            .fold(0.0f64, f64::max);
        let lambda_low = if congestion > 0.0 {
            phases as f64 / congestion
        } else {
            0.0
        };

        if let Some(threshold) = decision {
            if lambda_low >= threshold {
                decided = Some(true);
                break;
            }
            if lambda_up < threshold {
                decided = Some(false);
                break;
            }
        }
        if lambda_low >= (1.0 - eps) * lambda_up || lambda_low >= 1.0 {
            break;
        }
        rescale(&mut lengths);
    }

    let congestion = edge_flow
        .iter()
        .zip(net.cap.iter())
        .map(|(&f, &c)| f / c)
        .fold(0.0f64, f64::max);
    GkOutcome {
        lambda_low: if congestion > 0.0 {
            phases as f64 / congestion
        } else {
            0.0
        },
        phases,
        edge_flow,
        group_sources: groups.iter().map(|g| g.src).collect(),
        group_edge_flow,
        decided,
    }
}

/// Path-restricted variant: each commodity picks its currently-shortest path
/// from a fixed set.
fn gk_paths(
    net: &Network,
    commodities: &[PathCommodity],
    eps: f64,
    decision: Option<f64>,
) -> GkOutcome {
    let m = net.edge_count();
    let step = eps / 3.0;
    let mut lengths: Vec<f64> = net.cap.iter().map(|&c| 1.0 / c).collect();
    let mut edge_flow = vec![0.0f64; m];
    let mut group_edge_flow = vec![vec![0.0f64; m]; commodities.len()];
    let mut lambda_up = f64::INFINITY;
    let mut phases = 0u64;
    let mut decided = None;

    let mut chosen = vec![0usize; commodities.len()];

    while phases < MAX_PHASES {
        // Bound pass under frozen lengths (see gk_free), fixing each
        // commodity's path for this phase.
        let d_l: f64 = lengths
            .iter()
            .zip(net.cap.iter())
            .map(|(&l, &c)| l * c)
            .sum();
        let mut alpha = 0.0;
        for (ci, commodity) in commodities.iter().enumerate() {
            let (best, cost) = commodity
                .paths
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.iter().map(|&e| lengths[e as usize]).sum::<f64>()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("path sets are never empty");
            alpha += commodity.demand * cost;
            chosen[ci] = best;
        }

        for (ci, commodity) in commodities.iter().enumerate() {
            route_chunks(
                net,
                &commodity.paths[chosen[ci]],
                commodity.demand,
                step,
                &mut lengths,
                &mut edge_flow,
                &mut group_edge_flow[ci],
            );
        }
        phases += 1;
        lambda_up = lambda_up.min(d_l / alpha);

        let congestion = edge_flow
            .iter()
            .zip(net.cap.iter())
            .map(|(&f, &c)| f / c)
            .fold(0.0f64, f64::max);
        let lambda_low = if congestion > 0.0 {
            phases as f64 / congestion
        } else {
            0.0
        };

        if let Some(threshold) = decision {
            if lambda_low >= threshold {
                decided = Some(true);
                break;
            }
            if lambda_up < threshold {
                decided = Some(false);
                break;
            }
        }
        if lambda_low >= (1.0 - eps) * lambda_up || lambda_low >= 1.0 {
            break;
        }
        rescale(&mut lengths);
    }

    let congestion = edge_flow
        .iter()
        .zip(net.cap.iter())
        .map(|(&f, &c)| f / c)
        .fold(0.0f64, f64::max);
    GkOutcome {
        lambda_low: if congestion > 0.0 {
            phases as f64 / congestion
        } else {
            0.0
        },
        phases,
        edge_flow,
        group_sources: commodities.iter().map(|c| c.src).collect(),
        group_edge_flow,
        decided,
    }
}

/// Sends `demand` along `path` in bottleneck-capacity chunks, bumping each
/// edge length by (1 + step * chunk / cap) per chunk.
fn route_chunks(
    net: &Network,
    path: &[u32],
    demand: f64,
    step: f64,
    lengths: &mut [f64],
    edge_flow: &mut [f64],
    group_flow: &mut [f64],
) {
    let bottleneck = path
        .iter()
        .map(|&e| net.cap[e as usize])
        .fold(f64::INFINITY, f64::min);
    let mut remaining = demand;
    while remaining > 0.0 {
        let chunk = remaining.min(bottleneck);
        for &e in path {
            let e = e as usize;
            edge_flow[e] += chunk;
            group_flow[e] += chunk;
            lengths[e] *= 1.0 + step * chunk / net.cap[e];
        }
        remaining -= chunk;
    }
}

fn rescale(lengths: &mut [f64]) {
    let max = lengths.iter().copied().fold(0.0f64, f64::max);
    if max > LENGTH_RESCALE {
        for l in lengths.iter_mut() {
            *l /= LENGTH_RESCALE;
        }
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance,
        // with node id as the deterministic tie-break.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(net: &Network, src: u32, lengths: &[f64], dist: &mut [f64], parent: &mut [u32]) {
    dist.fill(f64::INFINITY);
    parent.fill(u32::MAX);
    dist[src as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        dist: 0.0,
        node: src,
    });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for &e in net.out_edges(u) {
            let v = net.to[e as usize];
            let nd = d + lengths[e as usize];
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                parent[v as usize] = e;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
}

fn components(t: &Topology) -> Vec<u32> {
    let n = t.switch_count() as usize;
    let adj = t.adjacency();
    let mut comp = vec![u32::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != u32::MAX {
            continue;
        }
        comp[start] = next;
        stack.push(start as u32);
        while let Some(u) = stack.pop() {
            for &v in adj.neighbors(u) {
                if comp[v as usize] == u32::MAX {
                    comp[v as usize] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Directed edges of a switch graph plus per-server access links, as an
/// explicit edge list. Used by tests to hand whole instances (including
/// server nodes) to an external reference solver.
pub fn server_level_edges(t: &Topology) -> (u32, Vec<(u32, u32, f64)>, Vec<u32>) {
    let switch_count = t.switch_count();
    let home = t.server_switches();
    let mut edges = Vec::new();
    for &(a, b) in &t.sorted_links() {
        edges.push((a, b, 1.0));
        edges.push((b, a, 1.0));
    }
    let mut server_nodes = Vec::with_capacity(home.len());
    for (i, &sw) in home.iter().enumerate() {
        let node = switch_count + i as u32;
        server_nodes.push(node);
        edges.push((node, sw, 1.0));
        edges.push((sw, node, 1.0));
    }
    (switch_count + home.len() as u32, edges, server_nodes)
}
