//! Topology construction: Jellyfish random regular graphs, 3-level fat-trees,
//! small-world lattice variants, 2-layer localized random graphs, and graphs
//! imported from edge lists.
//!
//! A topology is a simple graph over switches. Each switch has a port budget
//! `k_i`; ports not used for switch-switch links hold servers. Links are
//! unordered pairs, stored with the smaller id first; every switch-switch
//! cable is two directed unit-capacity links from the flow solver's point of
//! view, and every server hangs off its switch on a unit-capacity link.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rng::rng_from_seed;

/// How many consecutive rejected samples before falling back to an exact
/// scan of the remaining candidate pairs.
const SAMPLE_TRIES: u32 = 128;
/// Whole-construction retries (next derived seed) before giving up.
const MAX_RETRIES: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    Rrg,
    FatTree,
    SwdcRing,
    SwdcTorus2d,
    SwdcHex3d,
    LayeredRrg,
    Imported,
}

impl TopologyKind {
    pub fn tag(self) -> &'static str {
        match self {
            TopologyKind::Rrg => "rrg",
            TopologyKind::FatTree => "fat_tree",
            TopologyKind::SwdcRing => "swdc_ring",
            TopologyKind::SwdcTorus2d => "swdc_torus2d",
            TopologyKind::SwdcHex3d => "swdc_hex3d",
            TopologyKind::LayeredRrg => "layered_rrg",
            TopologyKind::Imported => "imported",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "rrg" => TopologyKind::Rrg,
            "fat_tree" => TopologyKind::FatTree,
            "swdc_ring" => TopologyKind::SwdcRing,
            "swdc_torus2d" => TopologyKind::SwdcTorus2d,
            "swdc_hex3d" => TopologyKind::SwdcHex3d,
            "layered_rrg" => TopologyKind::LayeredRrg,
            "imported" => TopologyKind::Imported,
            _ => return None,
        })
    }
}

/// Small-world lattice variants, named by the underlying lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwdcVariant {
    Ring,
    Torus2d,
    Hex3d,
}

#[derive(Debug, Clone)]
pub struct Topology {
    pub(crate) kind: TopologyKind,
    pub(crate) seed: u64,
    pub(crate) ports: Vec<u32>,
    pub(crate) servers: Vec<u32>,
    pub(crate) adj: Vec<BTreeSet<u32>>,
    pub(crate) links: Vec<(u32, u32)>,
    pub(crate) retries: u32,
}

impl Topology {
    /// Builds a topology from explicit parts, validating every invariant:
    /// ids in range, no self-loops or duplicate links, and
    /// `degree(i) + servers(i) <= ports(i)` for every switch.
    pub fn from_parts(
        kind: TopologyKind,
        seed: u64,
        ports: Vec<u32>,
        servers: Vec<u32>,
        links: &[(u32, u32)],
    ) -> Result<Self, Error> {
        let n = ports.len();
        if n == 0 {
            return Err(Error::InvalidArgument("topology needs at least one switch"));
        }
        if servers.len() != n {
            return Err(Error::InvalidArgument("ports/servers length mismatch"));
        }
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        let mut canon = Vec::with_capacity(links.len());
        for &(a, b) in links {
            if a == b {
                return Err(Error::InvalidArgument("self-loop link"));
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if b as usize >= n {
                return Err(Error::InvalidArgument("link endpoint out of range"));
            }
            if !adj[a as usize].insert(b) {
                return Err(Error::InvalidArgument("duplicate link"));
            }
            adj[b as usize].insert(a);
            canon.push((a, b));
        }
        for i in 0..n {
            if adj[i].len() as u32 + servers[i] > ports[i] {
                return Err(Error::InvalidArgument(
                    "switch degree plus servers exceeds port budget",
                ));
            }
        }
        Ok(Topology {
            kind,
            seed,
            ports,
            servers,
            adj,
            links: canon,
            retries: 0,
        })
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Construction retries consumed before a connected graph came out.
    pub fn retries(&self) -> u32 {
        self.retries
    }

    pub fn switch_count(&self) -> u32 {
        self.ports.len() as u32
    }

    pub fn ports(&self, switch: u32) -> u32 {
        self.ports[switch as usize]
    }

    pub fn servers_on(&self, switch: u32) -> u32 {
        self.servers[switch as usize]
    }

    pub fn total_servers(&self) -> u64 {
        self.servers.iter().map(|&s| s as u64).sum()
    }

    /// Network degree of a switch (switch-switch links only).
    pub fn degree(&self, switch: u32) -> u32 {
        self.adj[switch as usize].len() as u32
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Links in construction order, each as `(a, b)` with `a < b`.
    pub fn links(&self) -> &[(u32, u32)] {
        &self.links
    }

    /// Links sorted ascending; this is the canonical serialization order.
    pub fn sorted_links(&self) -> Vec<(u32, u32)> {
        let mut links = self.links.clone();
        links.sort_unstable();
        links
    }

    pub fn has_link(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].contains(&b)
    }

    pub fn neighbors(&self, switch: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[switch as usize].iter().copied()
    }

    /// Switch of each server; server ids run over switches in id order.
    pub fn server_switches(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.total_servers() as usize);
        for (i, &s) in self.servers.iter().enumerate() {
            for _ in 0..s {
                out.push(i as u32);
            }
        }
        out
    }

    /// Compressed adjacency for traversal-heavy algorithms; neighbor lists
    /// are sorted ascending.
    pub fn adjacency(&self) -> Adjacency {
        let n = self.ports.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * self.links.len());
        offsets.push(0u32);
        for set in &self.adj {
            targets.extend(set.iter().copied());
            offsets.push(targets.len() as u32);
        }
        Adjacency { offsets, targets }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.ports.len();
        if n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in adj.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub(crate) fn add_link(&mut self, a: u32, b: u32) {
        debug_assert!(a != b && !self.has_link(a, b));
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.adj[a as usize].insert(b);
        self.adj[b as usize].insert(a);
        self.links.push((a, b));
    }

    pub(crate) fn remove_link_at(&mut self, idx: usize) -> (u32, u32) {
        let (a, b) = self.links.swap_remove(idx);
        self.adj[a as usize].remove(&b);
        self.adj[b as usize].remove(&a);
        (a, b)
    }

    pub(crate) fn remove_link(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        match self.links.iter().position(|&l| l == (a, b)) {
            Some(idx) => {
                self.remove_link_at(idx);
                true
            }
            None => false,
        }
    }
}

impl PartialEq for Topology {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.seed == other.seed
            && self.ports == other.ports
            && self.servers == other.servers
            && self.sorted_links() == other.sorted_links()
    }
}

impl Eq for Topology {}

/// Compressed sparse adjacency with sorted neighbor lists.
pub struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        &self.targets[lo..hi]
    }

    pub fn node_count(&self) -> u32 {
        (self.offsets.len() - 1) as u32
    }
}

/// Jellyfish topology: RRG(N, k, r) with N switches of k ports each, r of
/// which connect to other switches and k - r hold servers.
///
/// Construction joins uniform random non-adjacent switches with free ports;
/// a stalled tail is fixed with the link-swap repair (remove a random link
/// (x, y), add (p1, x), (p2, y)). When N*r is odd a single port stays free.
/// Disconnected outcomes are retried with seed+1; `retries()` reports how
/// many were needed.
pub fn build_rrg(n: u32, ports: u32, net_degree: u32, seed: u64) -> Result<Topology, Error> {
    if n < 1 {
        return Err(Error::InvalidArgument("switch count must be positive"));
    }
    if net_degree > ports {
        return Err(Error::InvalidArgument(
            "network degree exceeds the port budget",
        ));
    }
    if net_degree >= n && !(net_degree == 0 && n == 1) {
        return Err(Error::InvalidArgument(
            "network degree must be below the switch count (no parallel links)",
        ));
    }
    let ports_vec = vec![ports; n as usize];
    let servers = vec![ports - net_degree; n as usize];
    build_rrg_general(TopologyKind::Rrg, ports_vec, servers, seed)
}

/// RRG with per-switch port budgets and server counts; switch `i` gets
/// network degree `ports[i] - servers[i]`. Used for evenly-spread server
/// totals and heterogeneous equipment.
pub fn build_rrg_general(
    kind: TopologyKind,
    ports: Vec<u32>,
    servers: Vec<u32>,
    seed: u64,
) -> Result<Topology, Error> {
    let n = ports.len() as u32;
    if n == 0 {
        return Err(Error::InvalidArgument("switch count must be positive"));
    }
    if servers.len() != ports.len() {
        return Err(Error::InvalidArgument("ports/servers length mismatch"));
    }
    let mut degree = Vec::with_capacity(ports.len());
    for i in 0..ports.len() {
        if servers[i] > ports[i] {
            return Err(Error::InvalidArgument("servers exceed the port budget"));
        }
        let r = ports[i] - servers[i];
        if r >= n && !(r == 0 && n == 1) {
            return Err(Error::InvalidArgument(
                "network degree must be below the switch count (no parallel links)",
            ));
        }
        degree.push(r);
    }

    for retry in 0..MAX_RETRIES {
        let effective = seed.wrapping_add(retry as u64);
        let mut rng = rng_from_seed(effective);
        let mut topo = Topology {
            kind,
            seed: effective,
            ports: ports.clone(),
            servers: servers.clone(),
            adj: vec![BTreeSet::new(); ports.len()],
            links: Vec::new(),
            retries: retry,
        };
        let mut pairing = Pairing::new(&mut topo, degree.clone());
        if pairing.run_uniform(&mut rng, |_, _| true).is_ok() && topo.is_connected() {
            return Ok(topo);
        }
    }
    Err(Error::Stalled)
}

/// Free-port pairing over a subset of switches, with the link-swap repair.
/// `stage` records only links created here, so repairs never touch links
/// from an earlier stage (the lattice of an SWDC graph, say).
struct Pairing<'a> {
    topo: &'a mut Topology,
    free: Vec<u32>,
    stage: Vec<(u32, u32)>,
    repair_budget: u64,
}

impl<'a> Pairing<'a> {
    fn new(topo: &'a mut Topology, free: Vec<u32>) -> Self {
        let budget = 100 * topo.switch_count() as u64;
        Pairing {
            topo,
            free,
            stage: Vec::new(),
            repair_budget: budget,
        }
    }

    fn join(&mut self, a: u32, b: u32) {
        self.topo.add_link(a, b);
        self.stage.push(if a < b { (a, b) } else { (b, a) });
        self.free[a as usize] -= 1;
        self.free[b as usize] -= 1;
    }

    fn eligible_pair(&self, a: u32, b: u32, constraint: &impl Fn(u32, u32) -> bool) -> bool {
        a != b
            && self.free[a as usize] > 0
            && self.free[b as usize] > 0
            && !self.topo.has_link(a, b)
            && constraint(a, b)
    }

    /// Joins uniform random eligible pairs until none remain, repairing
    /// stalls, until at most one free port is left (or repairs run dry).
    fn run_uniform(
        &mut self,
        rng: &mut ChaCha8Rng,
        constraint: impl Fn(u32, u32) -> bool,
    ) -> Result<(), Error> {
        let mut active: Vec<u32> = (0..self.topo.switch_count())
            .filter(|&i| self.free[i as usize] > 0)
            .collect();
        loop {
            // Lazily drop exhausted switches.
            active.retain(|&i| self.free[i as usize] > 0);
            let total_free: u32 = active.iter().map(|&i| self.free[i as usize]).sum();
            if total_free <= 1 {
                return Ok(());
            }
            if active.len() == 1 {
                // A lone switch holding >= 2 free ports: swap-repair it in.
                self.repair(rng, &constraint)?;
                continue;
            }
            let mut joined = false;
            for _ in 0..SAMPLE_TRIES {
                let a = active[rng.gen_range(0..active.len())];
                let b = active[rng.gen_range(0..active.len())];
                if self.eligible_pair(a, b, &constraint) {
                    self.join(a, b);
                    joined = true;
                    break;
                }
            }
            if joined {
                continue;
            }
            // Exact scan: uniform choice among all remaining eligible pairs.
            let mut candidates = Vec::new();
            for (i, &a) in active.iter().enumerate() {
                for &b in &active[i + 1..] {
                    if self.eligible_pair(a, b, &constraint) {
                        candidates.push((a, b));
                    }
                }
            }
            if let Some(&(a, b)) = pick(rng, &candidates) {
                self.join(a, b);
                continue;
            }
            // Stalled: every remaining pair is adjacent or identical.
            self.repair(rng, &constraint)?;
        }
    }

    /// Distance-weighted variant for small-world random links: partners are
    /// drawn with probability proportional to `weight(u, v)`.
    fn run_weighted(
        &mut self,
        rng: &mut ChaCha8Rng,
        constraint: impl Fn(u32, u32) -> bool,
        weight: impl Fn(u32, u32) -> f64,
    ) -> Result<(), Error> {
        loop {
            let stuck = self.stuck_switches();
            if stuck.iter().map(|&u| self.free[u as usize]).sum::<u32>() <= 1 {
                return Ok(());
            }
            let mut joined = false;
            for &u in &stuck {
                if self.free[u as usize] == 0 {
                    continue;
                }
                let candidates: Vec<u32> = stuck
                    .iter()
                    .copied()
                    .filter(|&v| self.eligible_pair(u, v, &constraint))
                    .collect();
                if candidates.is_empty() {
                    continue;
                }
                let total: f64 = candidates.iter().map(|&v| weight(u, v)).sum();
                let mut draw = rng.gen::<f64>() * total;
                let mut chosen = *candidates.last().unwrap();
                for &v in &candidates {
                    draw -= weight(u, v);
                    if draw <= 0.0 {
                        chosen = v;
                        break;
                    }
                }
                self.join(u, chosen);
                joined = true;
                break;
            }
            if !joined {
                self.repair(rng, &constraint)?;
            }
        }
    }

    fn stuck_switches(&self) -> Vec<u32> {
        (0..self.topo.switch_count())
            .filter(|&i| self.free[i as usize] > 0)
            .collect()
    }

    /// Link-swap repair. For a switch u holding >= 2 free ports, remove a
    /// random stage link (x, y) and add (u, x), (u, y). When only two
    /// switches with one free port each remain (necessarily adjacent or
    /// constraint-blocked), remove (x, y) and add (u, x), (v, y) instead.
    fn repair(
        &mut self,
        rng: &mut ChaCha8Rng,
        constraint: &impl Fn(u32, u32) -> bool,
    ) -> Result<(), Error> {
        let stuck = self.stuck_switches();
        let total_free: u32 = stuck.iter().map(|&u| self.free[u as usize]).sum();
        if total_free <= 1 {
            return Ok(());
        }
        let doubles: Vec<u32> = stuck
            .iter()
            .copied()
            .filter(|&u| self.free[u as usize] >= 2)
            .collect();

        while self.repair_budget > 0 {
            self.repair_budget -= 1;
            if self.stage.is_empty() {
                break;
            }
            let idx = rng.gen_range(0..self.stage.len());
            let (x, y) = self.stage[idx];
            if let Some(&u) = pick(rng, &doubles) {
                if u != x
                    && u != y
                    && !self.topo.has_link(u, x)
                    && !self.topo.has_link(u, y)
                    && constraint(u, x)
                    && constraint(u, y)
                {
                    self.unjoin_stage(idx);
                    self.join(u, x);
                    self.join(u, y);
                    return Ok(());
                }
            } else if stuck.len() >= 2 {
                let u = stuck[rng.gen_range(0..stuck.len())];
                let v = loop {
                    let v = stuck[rng.gen_range(0..stuck.len())];
                    if v != u {
                        break v;
                    }
                };
                for (p, q) in [(x, y), (y, x)] {
                    if u != p
                        && u != q
                        && v != p
                        && v != q
                        && !self.topo.has_link(u, p)
                        && !self.topo.has_link(v, q)
                        && constraint(u, p)
                        && constraint(v, q)
                    {
                        self.unjoin_stage(idx);
                        self.join(u, p);
                        self.join(v, q);
                        return Ok(());
                    }
                }
            }
        }
        Err(Error::Stalled)
    }

    fn unjoin_stage(&mut self, idx: usize) {
        let (a, b) = self.stage.swap_remove(idx);
        let removed = self.topo.remove_link(a, b);
        debug_assert!(removed);
        self.free[a as usize] += 1;
        self.free[b as usize] += 1;
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.gen_range(0..items.len())])
    }
}

/// Standard 3-level fat-tree from kp-port switches: kp pods of kp/2 edge and
/// kp/2 aggregation switches plus (kp/2)^2 core switches; kp^3/4 servers on
/// the edge layer and kp^3/2 switch-switch links.
pub fn build_fat_tree(kp: u32) -> Result<Topology, Error> {
    if kp < 2 || kp % 2 != 0 {
        return Err(Error::InvalidArgument(
            "fat-tree port count must be even and at least 2",
        ));
    }
    let half = kp / 2;
    let pods = kp;
    let edge_base = 0;
    let agg_base = pods * half;
    let core_base = 2 * pods * half;
    let n = (2 * pods * half + half * half) as usize;

    let ports = vec![kp; n];
    let mut servers = vec![0u32; n];
    for e in 0..pods * half {
        servers[(edge_base + e) as usize] = half;
    }

    let mut links = Vec::with_capacity((kp * kp * kp / 2) as usize);
    for p in 0..pods {
        for e in 0..half {
            for a in 0..half {
                links.push((edge_base + p * half + e, agg_base + p * half + a));
            }
        }
        for a in 0..half {
            for c in 0..half {
                links.push((agg_base + p * half + a, core_base + a * half + c));
            }
        }
    }
    Topology::from_parts(TopologyKind::FatTree, 0, ports, servers, &links)
}

/// Small-world topology: a deterministic lattice (ring, 2D torus, or 3D
/// torus with axial neighbors standing in for the hex variant) plus random
/// links drawn with probability proportional to 1/lattice-distance until
/// every switch reaches `degree` network ports.
pub fn build_swdc(
    variant: SwdcVariant,
    n: u32,
    degree: u32,
    servers_per_switch: u32,
    seed: u64,
) -> Result<Topology, Error> {
    let lattice = Lattice::new(variant, n)?;
    let lattice_degree = lattice.degree();
    if degree < lattice_degree {
        return Err(Error::InvalidArgument(
            "degree is below the lattice degree",
        ));
    }
    let extra = degree - lattice_degree;
    let kind = match variant {
        SwdcVariant::Ring => TopologyKind::SwdcRing,
        SwdcVariant::Torus2d => TopologyKind::SwdcTorus2d,
        SwdcVariant::Hex3d => TopologyKind::SwdcHex3d,
    };
    let ports = vec![degree + servers_per_switch; n as usize];
    let servers = vec![servers_per_switch; n as usize];

    for retry in 0..MAX_RETRIES {
        let effective = seed.wrapping_add(retry as u64);
        let mut rng = rng_from_seed(effective);
        let mut topo = Topology {
            kind,
            seed: effective,
            ports: ports.clone(),
            servers: servers.clone(),
            adj: vec![BTreeSet::new(); n as usize],
            links: Vec::new(),
            retries: retry,
        };
        for (a, b) in lattice.links() {
            topo.add_link(a, b);
        }
        if extra > 0 {
            let mut pairing = Pairing::new(&mut topo, vec![extra; n as usize]);
            let ok = pairing
                .run_weighted(
                    &mut rng,
                    |_, _| true,
                    |a, b| 1.0 / lattice.distance(a, b) as f64,
                )
                .is_ok();
            if !ok {
                continue;
            }
        }
        if topo.is_connected() {
            return Ok(topo);
        }
    }
    Err(Error::Stalled)
}

/// 2-layer localized random graph: an independent RRG inside each of `c`
/// containers of `m` switches (network degree `r_local`), and a free-port
/// matching of the `r_global` remaining network ports constrained to join
/// different containers. Containers are contiguous id blocks: switch i is in
/// container i / m.
pub fn build_layered_rrg(
    c: u32,
    m: u32,
    ports: u32,
    r_local: u32,
    r_global: u32,
    servers_per_switch: u32,
    seed: u64,
) -> Result<Topology, Error> {
    if c < 1 || m < 1 {
        return Err(Error::InvalidArgument(
            "containers and switches per container must be positive",
        ));
    }
    if r_local >= m && !(r_local == 0 && m == 1) {
        return Err(Error::InvalidArgument(
            "local degree must be below the container size",
        ));
    }
    if r_local + r_global + servers_per_switch > ports {
        return Err(Error::InvalidArgument(
            "local + global degree + servers exceed the port budget",
        ));
    }
    if c == 1 && r_global > 0 {
        return Err(Error::InvalidArgument(
            "global links need at least two containers",
        ));
    }
    let n = c * m;
    let ports_vec = vec![ports; n as usize];
    let servers = vec![servers_per_switch; n as usize];
    let container = |s: u32| s / m;

    for retry in 0..MAX_RETRIES {
        let effective = seed.wrapping_add(retry as u64);
        let mut rng = rng_from_seed(effective);
        let mut topo = Topology {
            kind: TopologyKind::LayeredRrg,
            seed: effective,
            ports: ports_vec.clone(),
            servers: servers.clone(),
            adj: vec![BTreeSet::new(); n as usize],
            links: Vec::new(),
            retries: retry,
        };
        let mut ok = true;
        for ci in 0..c {
            let mut free = vec![0u32; n as usize];
            for s in ci * m..(ci + 1) * m {
                free[s as usize] = r_local;
            }
            let mut pairing = Pairing::new(&mut topo, free);
            if pairing.run_uniform(&mut rng, |_, _| true).is_err() {
                ok = false;
                break;
            }
        }
        if ok && r_global > 0 {
            let mut pairing = Pairing::new(&mut topo, vec![r_global; n as usize]);
            ok = pairing
                .run_uniform(&mut rng, |a, b| container(a) != container(b))
                .is_ok();
        }
        if ok && topo.is_connected() {
            return Ok(topo);
        }
    }
    Err(Error::Stalled)
}

/// Deterministic lattices underlying the small-world variants.
struct Lattice {
    variant: SwdcVariant,
    dims: [u32; 3],
}

impl Lattice {
    fn new(variant: SwdcVariant, n: u32) -> Result<Self, Error> {
        let dims = match variant {
            SwdcVariant::Ring => {
                if n < 3 {
                    return Err(Error::InvalidArgument("ring lattice needs >= 3 switches"));
                }
                [n, 1, 1]
            }
            SwdcVariant::Torus2d => {
                let side = isqrt(n);
                if side * side != n || side < 3 {
                    return Err(Error::InvalidArgument(
                        "2D torus needs a perfect square of side >= 3",
                    ));
                }
                [side, side, 1]
            }
            SwdcVariant::Hex3d => balanced_triple(n)
                .ok_or(Error::InvalidArgument(
                    "3D torus needs a factorization into three sides >= 3",
                ))?,
        };
        Ok(Lattice { variant, dims })
    }

    fn degree(&self) -> u32 {
        match self.variant {
            SwdcVariant::Ring => 2,
            SwdcVariant::Torus2d => 4,
            SwdcVariant::Hex3d => 6,
        }
    }

    fn coords(&self, id: u32) -> [u32; 3] {
        let [a, b, _] = self.dims;
        [id % a, (id / a) % b, id / (a * b)]
    }

    fn id(&self, c: [u32; 3]) -> u32 {
        let [a, b, _] = self.dims;
        c[0] + a * (c[1] + b * c[2])
    }

    fn links(&self) -> Vec<(u32, u32)> {
        let n = self.dims[0] * self.dims[1] * self.dims[2];
        let axes: &[usize] = match self.variant {
            SwdcVariant::Ring => &[0],
            SwdcVariant::Torus2d => &[0, 1],
            SwdcVariant::Hex3d => &[0, 1, 2],
        };
        let mut links = Vec::new();
        for id in 0..n {
            let c = self.coords(id);
            for &ax in axes {
                let mut next = c;
                next[ax] = (c[ax] + 1) % self.dims[ax];
                let other = self.id(next);
                links.push(if id < other { (id, other) } else { (other, id) });
            }
        }
        links.sort_unstable();
        links.dedup();
        links
    }

    /// Wraparound L1 distance on the lattice axes.
    fn distance(&self, a: u32, b: u32) -> u32 {
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut d = 0;
        for ax in 0..3 {
            let span = self.dims[ax];
            if span > 1 {
                let diff = ca[ax].abs_diff(cb[ax]);
                d += diff.min(span - diff);
            }
        }
        d.max(1)
    }
}

fn isqrt(n: u32) -> u32 {
    let n = n as u64;
    let mut r = libm::sqrt(n as f64) as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r as u32
}

/// Most balanced factorization n = a*b*c with every side >= 3 (the 3D torus
/// convention for a given switch count), minimizing the max-min spread.
fn balanced_triple(n: u32) -> Option<[u32; 3]> {
    let mut best: Option<[u32; 3]> = None;
    let mut a = 3;
    while a * a * a <= n {
        if n % a == 0 {
            let rest = n / a;
            let mut b = a;
            while b * b <= rest {
                if rest % b == 0 {
                    let c = rest / b;
                    if b >= 3 && c >= 3 {
                        let cand = [a, b, c];
                        let better = match best {
                            None => true,
                            Some(cur) => c - a < cur[2] - cur[0],
                        };
                        if better {
                            best = Some(cand);
                        }
                    }
                }
                b += 1;
            }
        }
        a += 1;
    }
    best
}
