use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand};

use jellynet::experiments::{self, Seeds};
use jellynet::format;
use jellynet::report::{cell, Report};
use jellynet_core::expand;
use jellynet_core::flow::{self, random_permutation};
use jellynet_core::metrics::{self, PathLevel};
use jellynet_core::route::{self, PathMode};
use jellynet_core::topo::{self, SwdcVariant, Topology};

/// Random-graph data center topologies: generation, expansion, metrics,
/// routing and flow-level evaluation.
#[derive(Parser)]
#[command(name = "jellynet", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a topology blueprint file.
    Gen(GenArgs),
    /// Path-length distributions, analytic bounds and local-link fraction.
    Metrics(MetricsArgs),
    /// Solve max concurrent flow for a random permutation.
    Solve(SolveArgs),
    /// Path sets and the per-link path-diversity histogram.
    Routes(RoutesArgs),
    /// Add a rack or switch, logging the rewiring.
    Expand(ExpandArgs),
    /// Fail a random fraction of switch-switch links.
    Fail(FailArgs),
    /// Run a named experiment and emit its CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Jellyfish RRG as N,K,R (switches, ports, network degree).
    #[arg(long, value_name = "N,K,R", conflicts_with_all = ["fat_tree", "swdc", "layered", "import"])]
    rrg: Option<String>,
    /// 3-level fat-tree from KP-port switches.
    #[arg(long, value_name = "KP")]
    fat_tree: Option<u32>,
    /// Small-world topology as VARIANT,N,DEGREE,SERVERS (variant: ring, torus2d, hex3d).
    #[arg(long, value_name = "V,N,D,S", conflicts_with_all = ["fat_tree", "layered", "import"])]
    swdc: Option<String>,
    /// 2-layer RRG as C,M,K,RL,RG,SERVERS.
    #[arg(long, value_name = "C,M,K,RL,RG,S", conflicts_with_all = ["fat_tree", "import"])]
    layered: Option<String>,
    /// Import a topology file or bare edge list.
    #[arg(long, value_name = "PATH")]
    import: Option<PathBuf>,
    /// Port budget for bare edge-list imports.
    #[arg(long, default_value_t = 0)]
    ports: u32,
    /// Servers per switch for bare edge-list imports.
    #[arg(long, default_value_t = 0)]
    servers_per_switch: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Emit the hops,pairs distribution at this level (switch or server).
    #[arg(long, value_name = "LEVEL")]
    paths: Option<String>,
    /// Emit metric,value rows for the analytic bounds.
    #[arg(long)]
    bounds: bool,
    /// Emit closed-form fat-tree stats for this port count (no topology needed).
    #[arg(long, value_name = "KP")]
    fat_tree_stats: Option<u32>,
    /// Emit the local-link fraction for a contiguous split into C containers.
    #[arg(long, value_name = "C")]
    local_fraction: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Topology file.
    topology: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Traffic permutation seed.
    #[arg(long, default_value_t = 0)]
    perm_seed: u64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Restrict flows to a path set: ecmp or ksp.
    #[arg(long)]
    mode: Option<String>,
    /// Path limit for --mode.
    #[arg(long, default_value_t = 8)]
    limit: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    topology: PathBuf,
}

#[derive(Args)]
struct RoutesArgs {
    /// Emit the rank,count histogram over directed links for a random
    /// permutation (requires --perm-seed).
    #[arg(long)]
    hist: bool,
    #[arg(long, default_value = "ecmp")]
    mode: String,
    #[arg(long, default_value_t = 8)]
    limit: u32,
    #[arg(long, default_value_t = 0)]
    perm_seed: u64,
    /// Source switch for a single path-set listing.
    #[arg(long)]
    src: Option<u32>,
    /// Destination switch for a single path-set listing.
    #[arg(long)]
    dst: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    topology: PathBuf,
}

#[derive(Args)]
struct ExpandArgs {
    /// Add a rack as K,S (ports, servers).
    #[arg(long, value_name = "K,S")]
    add_rack: Option<String>,
    /// Add a bare switch with K ports.
    #[arg(long, value_name = "K", conflicts_with = "add_rack")]
    add_switch: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output topology file.
    #[arg(long)]
    out: PathBuf,
    /// Expansion log to append to (created with a header if missing).
    #[arg(long)]
    log: Option<PathBuf>,
    topology: PathBuf,
}

#[derive(Args)]
struct FailArgs {
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    topology: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: fig3c, fig5, fig7, fig10, fig11, ddg, swdc.
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    traffic_seed: u64,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    /// Largest port count for fig3c.
    #[arg(long, default_value_t = 10)]
    max_ports: u32,
    /// Comma-separated failure fractions for fig10.
    #[arg(long)]
    fractions: Option<String>,
    #[arg(long, default_value_t = 6)]
    containers: u32,
    #[arg(long, default_value_t = 20)]
    per_container: u32,
    /// Switch count for swdc.
    #[arg(long, default_value_t = 100)]
    switches: u32,
    /// Network degree for swdc.
    #[arg(long, default_value_t = 6)]
    degree: u32,
    /// Imported graph files for ddg.
    #[arg(long)]
    import: Vec<PathBuf>,
    /// Port budget for bare edge-list imports (ddg).
    #[arg(long)]
    ports: Option<u32>,
    #[arg(long, default_value_t = 1)]
    servers_per_switch: u32,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Routes(args) => cmd_routes(args),
        Command::Expand(args) => cmd_expand(args),
        Command::Fail(args) => cmd_fail(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let t = if let Some(spec) = &args.rrg {
        let [n, k, r] = parse_tuple::<3>(spec, "--rrg N,K,R")?;
        topo::build_rrg(n, k, r, args.seed)?
    } else if let Some(kp) = args.fat_tree {
        topo::build_fat_tree(kp)?
    } else if let Some(spec) = &args.swdc {
        let mut parts = spec.split(',');
        let variant = match parts.next().unwrap_or("") {
            "ring" => SwdcVariant::Ring,
            "torus2d" => SwdcVariant::Torus2d,
            "hex3d" => SwdcVariant::Hex3d,
            other => bail!("unknown swdc variant {other:?} (ring, torus2d, hex3d)"),
        };
        let rest: Vec<&str> = parts.collect();
        let [n, degree, servers] = parse_tuple::<3>(&rest.join(","), "--swdc V,N,D,S")?;
        topo::build_swdc(variant, n, degree, servers, args.seed)?
    } else if let Some(spec) = &args.layered {
        let [c, m, k, rl, rg, s] = parse_tuple::<6>(spec, "--layered C,M,K,RL,RG,S")?;
        topo::build_layered_rrg(c, m, k, rl, rg, s, args.seed)?
    } else if let Some(path) = &args.import {
        format::load_edge_list(path, args.ports, args.servers_per_switch)?
    } else {
        bail!("pick one of --rrg, --fat-tree, --swdc, --layered, --import");
    };

    match &args.out {
        Some(path) => format::write_topology(path, &t)?,
        None => print!("{}", format::serialize_topology(&t)),
    }
    println!("{}", summary_line(&t));
    Ok(())
}

fn summary_line(t: &Topology) -> String {
    let degrees: Vec<u32> = (0..t.switch_count()).map(|s| t.degree(s)).collect();
    let min = degrees.iter().min().copied().unwrap_or(0);
    let max = degrees.iter().max().copied().unwrap_or(0);
    let degree = if min == max {
        min.to_string()
    } else {
        format!("{min}..{max}")
    };
    format!(
        "switches={} servers={} links={} degree={}",
        t.switch_count(),
        t.total_servers(),
        t.link_count(),
        degree
    )
}

fn cmd_metrics(args: MetricsArgs) -> anyhow::Result<()> {
    if let Some(kp) = args.fat_tree_stats {
        let s = metrics::fat_tree_stats(kp)?;
        let mut report = Report::new("fat_tree_stats", "metric,value");
        report.param("kp", kp);
        report.rows.push(format!("servers,{}", s.servers));
        report.rows.push(format!("switches,{}", s.switches));
        report.rows.push(format!("switch_links,{}", s.switch_links));
        report
            .rows
            .push(format!("bisection_links,{}", s.bisection_links));
        report
            .rows
            .push(format!("local_fraction,{}", cell(s.local_fraction)));
        return report.emit(args.out.as_deref());
    }

    let path = args
        .topology
        .as_ref()
        .ok_or_else(|| anyhow!("metrics needs a topology file"))?;
    let t = format::read_topology(path)?;

    if let Some(level) = &args.paths {
        let level = match level.as_str() {
            "switch" => PathLevel::Switch,
            "server" => PathLevel::Server,
            other => bail!("unknown level {other:?} (switch or server)"),
        };
        let d = metrics::path_lengths(&t, level)?;
        let mut report = Report::new("path_lengths", "hops,pairs");
        report
            .param("level", format!("{level:?}").to_lowercase())
            .param("mean", cell(d.mean))
            .param("diameter", d.diameter)
            .param("pair_count", d.pair_count);
        for (hops, pairs) in &d.histogram {
            report.rows.push(format!("{hops},{pairs}"));
        }
        return report.emit(args.out.as_deref());
    }

    if let Some(containers) = args.local_fraction {
        if containers == 0 || t.switch_count() % containers != 0 {
            bail!("--local-fraction containers must evenly divide the switch count");
        }
        let per = t.switch_count() / containers;
        let assignment: Vec<u32> = (0..t.switch_count()).map(|i| i / per).collect();
        let f = metrics::local_fraction(&t, &assignment)?;
        let mut report = Report::new("local_fraction", "metric,value");
        report.param("containers", containers);
        report.rows.push(format!("local_fraction,{}", cell(f)));
        return report.emit(args.out.as_deref());
    }

    if args.bounds {
        let n = t.switch_count();
        let r_min = (0..n).map(|s| t.degree(s)).min().unwrap_or(0);
        let mut report = Report::new("bounds", "metric,value");
        report.param("switches", n).param("net_degree_min", r_min);
        let bound = metrics::bisection_lower_bound(n, r_min);
        report
            .rows
            .push(format!("bisection_lower_bound,{}", cell(bound)));
        report
            .rows
            .push(format!("bisection_lower_bound_clamped,{}", cell(bound.max(0.0))));
        let half_servers = t.total_servers() as f64 / 2.0;
        if half_servers > 0.0 {
            report.rows.push(format!(
                "bisection_normalized,{}",
                cell(bound.max(0.0) / half_servers)
            ));
        }
        if let Ok(d) = metrics::diameter_upper_bound(n, r_min, 0.1) {
            report.rows.push(format!("diameter_upper_bound,{d}"));
            report
                .rows
                .push(format!("server_diameter_upper_bound,{}", d + 2));
        }
        return report.emit(args.out.as_deref());
    }

    bail!("pick one of --paths, --bounds, --fat-tree-stats, --local-fraction")
}

fn parse_mode(mode: &str) -> anyhow::Result<PathMode> {
    match mode {
        "ecmp" => Ok(PathMode::Ecmp),
        "ksp" => Ok(PathMode::Ksp),
        other => bail!("unknown mode {other:?} (ecmp or ksp)"),
    }
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<()> {
    let t = format::read_topology(&args.topology)?;
    let tm = random_permutation(t.total_servers() as u32, args.perm_seed)?;
    let (param, solution) = match &args.mode {
        None => ("free".to_string(), flow::max_concurrent_flow(&t, &tm, args.eps)?),
        Some(mode) => {
            let m = parse_mode(mode)?;
            (
                format!("{mode}_{}", args.limit),
                flow::restricted_flow(&t, &tm, m, args.limit, args.eps)?,
            )
        }
    };
    let mut report = Report::new("solve", "param,trial,seed,lambda,mean_flow,min_flow,jain");
    report
        .param("eps", args.eps)
        .param("perm_seed", args.perm_seed);
    report.rows.push(format!(
        "{param},0,{},{},{},{},{}",
        args.perm_seed,
        cell(solution.lambda),
        cell(solution.mean_flow()),
        cell(solution.min_flow()),
        cell(flow::jain_index(&solution.per_flow)?)
    ));
    report.emit(args.out.as_deref())
}

fn cmd_routes(args: RoutesArgs) -> anyhow::Result<()> {
    let t = format::read_topology(&args.topology)?;
    let mode = parse_mode(&args.mode)?;

    if args.hist {
        let tm = random_permutation(t.total_servers() as u32, args.perm_seed)?;
        let flows = experiments::server_flows(&t, tm.dst());
        let counts = route::link_path_counts(&t, &flows, mode, args.limit)?;
        let mut values: Vec<u64> = counts.values().copied().collect();
        values.sort_unstable();
        let mut report = Report::new("link_path_hist", "rank,count");
        report
            .param("mode", &args.mode)
            .param("limit", args.limit)
            .param("perm_seed", args.perm_seed);
        for (rank, count) in values.iter().enumerate() {
            report.rows.push(format!("{rank},{count}"));
        }
        return report.emit(args.out.as_deref());
    }

    let (src, dst) = match (args.src, args.dst) {
        (Some(s), Some(d)) => (s, d),
        _ => bail!("routes needs either --hist or both --src and --dst"),
    };
    let set = route::paths_for(&t, src, dst, mode, args.limit)?;
    let mut report = Report::new("paths", "index,length,path");
    report
        .param("src", src)
        .param("dst", dst)
        .param("mode", &args.mode)
        .param("limit", args.limit);
    for (i, p) in set.paths.iter().enumerate() {
        let joined = p
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("-");
        report.rows.push(format!("{i},{},{joined}", p.len() - 1));
    }
    report.emit(args.out.as_deref())
}

fn cmd_expand(args: ExpandArgs) -> anyhow::Result<()> {
    let t = format::read_topology(&args.topology)?;
    let (grown, step) = if let Some(spec) = &args.add_rack {
        let [k, s] = parse_tuple::<2>(spec, "--add-rack K,S")?;
        expand::add_rack(&t, k, s, args.seed)?
    } else if let Some(k) = args.add_switch {
        expand::add_switch(&t, k, args.seed)?
    } else {
        bail!("pick one of --add-rack or --add-switch");
    };

    if let Some(log) = &args.log {
        let mut text = match std::fs::read_to_string(log) {
            Ok(existing) => existing,
            Err(_) => format!("{}\n", format::EXPANSION_HEADER),
        };
        let serialized = format::serialize_expansion(std::slice::from_ref(&step));
        text.push_str(serialized.strip_prefix(&format!("{}\n", format::EXPANSION_HEADER)).unwrap());
        std::fs::write(log, text)?;
    }
    format::write_topology(&args.out, &grown)?;
    println!("{}", summary_line(&grown));
    Ok(())
}

fn cmd_fail(args: FailArgs) -> anyhow::Result<()> {
    let t = format::read_topology(&args.topology)?;
    let failed = expand::fail_links(&t, args.fraction, args.seed)?;
    format::write_topology(&args.out, &failed)?;
    println!("{}", summary_line(&failed));
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> anyhow::Result<()> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let seeds = Seeds {
        topo: args.seed,
        traffic: args.traffic_seed,
    };
    let eps = args.eps.unwrap_or(0.05);
    let start = Instant::now();
    let report = match args.name.as_str() {
        "fig3c" => experiments::fig3c(args.max_ports, args.eps.unwrap_or(0.02), seeds)?,
        "fig5" => experiments::fig5(args.trials.unwrap_or(10), eps, seeds)?,
        "fig7" => experiments::fig7(args.trials.unwrap_or(5), seeds)?,
        "fig10" => {
            let fractions = match &args.fractions {
                Some(list) => parse_fractions(list)?,
                None => vec![0.0, 0.03, 0.06, 0.09, 0.12, 0.15],
            };
            experiments::fig10(&fractions, args.trials.unwrap_or(10), eps, seeds)?
        }
        "fig11" => experiments::fig11(
            args.containers,
            args.per_container,
            args.trials.unwrap_or(10),
            eps,
            seeds,
        )?,
        "ddg" => experiments::ddg(
            &args.import,
            args.ports,
            args.servers_per_switch,
            args.trials.unwrap_or(3),
            eps,
            seeds,
        )?,
        "swdc" => experiments::swdc(
            args.switches,
            args.degree,
            args.servers_per_switch.max(2),
            args.trials.unwrap_or(3),
            eps,
            seeds,
        )?,
        "legup" => bail!("experiment `legup` is reserved but not implemented"),
        other => bail!("unknown experiment {other:?}"),
    };
    report.emit(args.out.as_deref())?;
    eprintln!(
        "experiment {} finished in {:.1?} ({} rows)",
        args.name,
        start.elapsed(),
        report.rows.len()
    );
    Ok(())
}

fn parse_fractions(list: &str) -> anyhow::Result<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("invalid fraction {s:?}"))
        })
        .collect()
}

fn parse_tuple<const N: usize>(spec: &str, what: &str) -> anyhow::Result<[u32; N]> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != N {
        bail!("expected {what}");
    }
    let mut out = [0u32; N];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.parse().map_err(|_| anyhow!("invalid integer {p:?} in {what}"))?;
    }
    Ok(out)
}
