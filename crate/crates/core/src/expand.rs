//! Incremental growth and perturbation of existing topologies: adding racks
//! (switch + servers) or bare switches by splicing into random links, and
//! failing random links.
//!
//! Expansion never changes the network degree of a pre-existing switch: each
//! splice removes one link (v, w) and adds (u, v), (u, w), so v and w keep
//! their degrees while the new switch u consumes two ports.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::Error;
use crate::rng::rng_from_seed;
use crate::topo::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    AddRack,
    AddSwitch,
}

/// Auditable record of one expansion: replaying `links_removed` then
/// `links_added` onto the original topology reproduces the expanded one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionStep {
    pub kind: ExpansionKind,
    pub new_switch: u32,
    pub new_switch_ports: u32,
    pub new_switch_servers: u32,
    pub links_removed: Vec<(u32, u32)>,
    pub links_added: Vec<(u32, u32)>,
}

impl ExpansionStep {
    /// Replays the step onto a topology that matches the pre-expansion state.
    pub fn apply(&self, t: &Topology) -> Result<Topology, Error> {
        if self.new_switch != t.switch_count() {
            return Err(Error::InvalidArgument(
                "expansion step does not match the topology's switch count",
            ));
        }
        let mut out = t.clone();
        out.ports.push(self.new_switch_ports);
        out.servers.push(self.new_switch_servers);
        out.adj.push(Default::default());
        for &(v, w) in &self.links_removed {
            if !out.remove_link(v, w) {
                return Err(Error::InvalidArgument(
                    "expansion step removes a link that is not present",
                ));
            }
        }
        for &(a, b) in &self.links_added {
            if a.max(b) >= out.switch_count() || a == b || out.has_link(a, b) {
                return Err(Error::InvalidArgument(
                    "expansion step adds an invalid link",
                ));
            }
            out.add_link(a, b);
        }
        Ok(out)
    }
}

/// Adds one rack: a switch with `k_new` ports, `s_new` of them holding
/// servers, spliced into the network by repeatedly removing a random link
/// (v, w) with the new switch adjacent to neither endpoint and adding (u, v)
/// and (u, w). A final odd port is left free.
pub fn add_rack(
    t: &Topology,
    k_new: u32,
    s_new: u32,
    seed: u64,
) -> Result<(Topology, ExpansionStep), Error> {
    if s_new > k_new {
        return Err(Error::InvalidArgument("servers exceed the port budget"));
    }
    let net = k_new - s_new;
    if net < 2 {
        return Err(Error::InvalidArgument(
            "a new rack needs at least two network ports to splice in",
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = t.clone();
    let u = out.switch_count();
    out.ports.push(k_new);
    out.servers.push(s_new);
    out.adj.push(Default::default());

    let mut step = ExpansionStep {
        kind: if s_new == 0 {
            ExpansionKind::AddSwitch
        } else {
            ExpansionKind::AddRack
        },
        new_switch: u,
        new_switch_ports: k_new,
        new_switch_servers: s_new,
        links_removed: Vec::new(),
        links_added: Vec::new(),
    };

    let mut free = net;
    let budget = 100 * out.link_count().max(1) as u64;
    let mut attempts = 0u64;
    while free >= 2 {
        if out.link_count() == 0 {
            return Err(Error::InvalidArgument(
                "not enough links to splice the new switch into",
            ));
        }
        let idx = rng.gen_range(0..out.link_count());
        let (v, w) = out.links()[idx];
        if out.has_link(u, v) || out.has_link(u, w) {
            attempts += 1;
            if attempts > budget {
                return Err(Error::Stalled);
            }
            continue;
        }
        out.remove_link_at(idx);
        out.add_link(u, v);
        out.add_link(u, w);
        step.links_removed.push((v, w));
        step.links_added.push((u.min(v), u.max(v)));
        step.links_added.push((u.min(w), u.max(w)));
        free -= 2;
    }
    Ok((out, step))
}

/// Adds a bare switch (no servers), connecting all its ports to the network.
/// Port counts may differ from the rest of the network.
pub fn add_switch(t: &Topology, ports: u32, seed: u64) -> Result<(Topology, ExpansionStep), Error> {
    add_rack(t, ports, 0, seed)
}

/// Removes `floor(fraction * link_count)` switch-switch links chosen
/// uniformly without replacement. Server links never fail. The result may be
/// disconnected; flow evaluation treats unreachable flows as zero.
pub fn fail_links(t: &Topology, fraction: f64, seed: u64) -> Result<Topology, Error> {
    if !(0.0..=1.0).contains(&fraction) || fraction.is_nan() {
        return Err(Error::InvalidArgument("failure fraction must be in [0, 1]"));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = t.clone();
    let count = (fraction * out.link_count() as f64) as usize;
    for _ in 0..count {
        let idx = rng.gen_range(0..out.link_count());
        out.remove_link_at(idx);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topo::{build_rrg, TopologyKind};
    use alloc::vec;

    fn k4() -> Topology {
        Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![4; 4],
            vec![1; 4],
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn add_rack_on_k4_preserves_old_degrees() {
        let t = k4();
        let (out, step) = add_rack(&t, 4, 2, 7).unwrap();
        assert_eq!(step.links_removed.len(), 1);
        assert_eq!(step.links_added.len(), 2);
        for s in 0..4 {
            assert_eq!(out.degree(s), 3, "old switch degree changed");
            assert_eq!(out.servers_on(s), 1);
        }
        assert_eq!(out.degree(4), 2);
        assert_eq!(out.servers_on(4), 2);
        assert!(out.is_connected());
    }

    #[test]
    fn add_rack_without_network_ports_is_rejected() {
        let t = k4();
        assert!(add_rack(&t, 2, 2, 1).is_err());
        assert!(add_rack(&t, 3, 2, 1).is_err());
    }

    #[test]
    fn add_switch_degree_two_extends_a_cycle() {
        let cycle = Topology::from_parts(
            TopologyKind::Imported,
            0,
            vec![2; 5],
            vec![0; 5],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
        )
        .unwrap();
        let (out, _) = add_switch(&cycle, 2, 3).unwrap();
        assert_eq!(out.switch_count(), 6);
        assert_eq!(out.link_count(), 6);
        for s in 0..6 {
            assert_eq!(out.degree(s), 2);
        }
        assert!(out.is_connected());
    }

    #[test]
    fn add_switch_fills_ports_up_to_odd_leftover() {
        let t = build_rrg(20, 8, 6, 9).unwrap();
        let (out, step) = add_switch(&t, 7, 11).unwrap();
        assert_eq!(out.degree(20), 6); // odd port left free
        assert_eq!(step.links_removed.len(), 3);
        assert_eq!(step.links_added.len(), 6);
        for s in 0..20 {
            assert_eq!(out.degree(s), t.degree(s));
        }
    }

    #[test]
    fn replaying_a_step_reproduces_the_expansion() {
        let t = build_rrg(30, 10, 6, 5).unwrap();
        let (grown, step) = add_rack(&t, 10, 4, 77).unwrap();
        let replayed = step.apply(&t).unwrap();
        assert_eq!(grown, replayed);
    }

    #[test]
    fn fail_links_boundaries() {
        let t = build_rrg(20, 8, 5, 3).unwrap();
        let same = fail_links(&t, 0.0, 1).unwrap();
        assert_eq!(same.link_count(), t.link_count());
        let none = fail_links(&t, 1.0, 1).unwrap();
        assert_eq!(none.link_count(), 0);
        let some = fail_links(&t, 0.5, 1).unwrap();
        assert_eq!(some.link_count(), t.link_count() - t.link_count() / 2);
        assert!(fail_links(&t, 1.5, 1).is_err());
        assert!(fail_links(&t, -0.1, 1).is_err());
    }

    #[test]
    fn fail_links_is_deterministic() {
        let t = build_rrg(20, 8, 5, 3).unwrap();
        let a = fail_links(&t, 0.3, 42).unwrap();
        let b = fail_links(&t, 0.3, 42).unwrap();
        assert_eq!(a, b);
    }
}
