// Temporary semantics probe; removed before finalizing.
use jellynet_core::flow::random_permutation;
use jellynet_core::route::{link_path_counts, PathMode};
use jellynet_core::topo::{build_rrg_general, TopologyKind};

#[test]
#[ignore]
fn fig7_instance_semantics() {
    // 245 switches, 14 ports, 686 servers spread 2-3 per switch.
    for seed in 0..3u64 {
        let servers: Vec<u32> = (0..245)
            .map(|i| if i < 686 % 245 { 3 } else { 2 })
            .collect();
        let t =
            build_rrg_general(TopologyKind::Rrg, vec![14; 245], servers, seed).unwrap();
        let tm = random_permutation(686, seed ^ 0x5A).unwrap();
        let home = t.server_switches();
        let flows: Vec<(u32, u32)> = tm
            .dst()
            .iter()
            .enumerate()
            .map(|(i, &d)| (home[i], home[d as usize]))
            .collect();
        for (mode, name) in [(PathMode::Ecmp, "ecmp"), (PathMode::Ksp, "ksp")] {
            let counts = link_path_counts(&t, &flows, mode, 8).unwrap();
            let le2 = counts.values().filter(|&&c| c <= 2).count() as f64
                / counts.len() as f64;
            println!(
                "seed {seed} {name}_8: links={} frac<=2 = {:.3}",
                counts.len(),
                le2
            );
        }
    }
}
