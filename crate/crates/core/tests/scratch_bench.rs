// Temporary timing probe; removed before finalizing.
use std::time::Instant;

use jellynet_core::flow::{max_concurrent_flow, random_permutation, supports_full_capacity};
use jellynet_core::topo::{build_fat_tree, build_rrg, build_rrg_general, TopologyKind};

#[test]
#[ignore]
fn timing_probe() {
    // Case 1: the 686-server RRG, eps 0.05 and 0.02.
    let t = build_rrg(98, 14, 7, 1).unwrap();
    let tm = random_permutation(686, 2).unwrap();
    for eps in [0.05, 0.02] {
        let start = Instant::now();
        let sol = max_concurrent_flow(&t, &tm, eps).unwrap();
        println!(
            "RRG(98,14,7) eps={eps}: lambda={:.4} phases={} in {:?}",
            sol.lambda,
            sol.iterations,
            start.elapsed()
        );
    }

    // Case 2: oversubscribed RRG(160,12,8) with 640 servers.
    let t = build_rrg(160, 12, 8, 1).unwrap();
    let tm = random_permutation(640, 2).unwrap();
    let start = Instant::now();
    let sol = max_concurrent_flow(&t, &tm, 0.05).unwrap();
    println!(
        "RRG(160,12,8) eps=0.05: lambda={:.4} phases={} in {:?}",
        sol.lambda,
        sol.iterations,
        start.elapsed()
    );

    // Case 3: decision solves around the fat_tree(10) equipment point.
    for m in [250u32, 280, 300, 320] {
        let base = m / 125;
        let extra = m % 125;
        let servers: Vec<u32> = (0..125)
            .map(|i| if i < extra { base + 1 } else { base })
            .collect();
        let t = build_rrg_general(TopologyKind::Rrg, vec![10; 125], servers, 5).unwrap();
        let tm = random_permutation(m, 7).unwrap();
        let start = Instant::now();
        let ok = supports_full_capacity(&t, &tm, 0.02).unwrap();
        println!("decision m={m}: {ok} in {:?}", start.elapsed());
    }

    // Case 4: fat-tree full-capacity check (125 switches, 250 servers).
    let t = build_fat_tree(10).unwrap();
    let tm = random_permutation(250, 3).unwrap();
    let start = Instant::now();
    let ok = supports_full_capacity(&t, &tm, 0.02).unwrap();
    println!("fat_tree(10) decision: {ok} in {:?}", start.elapsed());
}

#[test]
#[ignore]
fn timing_probe_large() {
    use jellynet_core::expand::fail_links;
    use jellynet_core::metrics::{path_lengths, PathLevel};

    // Criterion 3 scale: RRG(3200, 48, 36).
    let start = Instant::now();
    let t = build_rrg(3200, 48, 36, 1).unwrap();
    println!("build RRG(3200,48,36): {:?}", start.elapsed());
    let start = Instant::now();
    let d = path_lengths(&t, PathLevel::Switch).unwrap();
    println!(
        "APSP: mean={:.3} diameter={} in {:?}",
        d.mean,
        d.diameter,
        start.elapsed()
    );

    // Criterion 6 scale: 245 switches, 686 servers, 15% failures.
    let servers: Vec<u32> = (0..245).map(|i| if i < 686 % 245 { 3 } else { 2 }).collect();
    let jelly = build_rrg_general(TopologyKind::Rrg, vec![14; 245], servers, 9).unwrap();
    let tm = random_permutation(686, 11).unwrap();
    let start = Instant::now();
    let sol = max_concurrent_flow(&jelly, &tm, 0.05).unwrap();
    println!(
        "jelly 245sw baseline: lambda={:.4} mean={:.4} phases={} in {:?}",
        sol.lambda,
        sol.mean_flow(),
        sol.iterations,
        start.elapsed()
    );
    let failed = fail_links(&jelly, 0.15, 13).unwrap();
    let start = Instant::now();
    let sol = max_concurrent_flow(&failed, &tm, 0.05).unwrap();
    println!(
        "jelly 15% failed: lambda={:.4} mean={:.4} phases={} in {:?}",
        sol.lambda,
        sol.mean_flow(),
        sol.iterations,
        start.elapsed()
    );

    let ft = build_fat_tree(14).unwrap();
    let failed = fail_links(&ft, 0.15, 13).unwrap();
    let start = Instant::now();
    let sol = max_concurrent_flow(&failed, &tm, 0.05).unwrap();
    println!(
        "fat_tree(14) 15% failed: lambda={:.4} mean={:.4} phases={} in {:?}",
        sol.lambda,
        sol.mean_flow(),
        sol.iterations,
        start.elapsed()
    );
}
