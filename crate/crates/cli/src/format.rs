//! Text formats: the version-1 topology blueprint and the expansion log.
//!
//! Topology format (line oriented, UTF-8, LF, `#` starts a comment):
//!
//! ```text
//! jellynet-topology 1
//! kind rrg seed 42 rng chacha8
//! switches 4
//! switch 0 ports 3 servers 0
//! ...
//! link 0 1
//! ```
//!
//! Switch lines run over ids 0..S-1 ascending; link lines carry `a b` with
//! a < b and are sorted ascending, so serializing a topology is
//! byte-deterministic and parsing a canonical file round-trips exactly.

use std::fmt;
use std::fs;
use std::path::Path;

use jellynet_core::expand::{ExpansionKind, ExpansionStep};
use jellynet_core::rng::RNG_ID;
use jellynet_core::topo::{Topology, TopologyKind};

pub const TOPOLOGY_HEADER: &str = "jellynet-topology 1";
pub const EXPANSION_HEADER: &str = "jellynet-expansion 1";

/// Parse failure with the 1-based line number it occurred on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

pub fn serialize_topology(t: &Topology) -> String {
    let mut out = String::new();
    out.push_str(TOPOLOGY_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "kind {} seed {} rng {}\n",
        t.kind().tag(),
        t.seed(),
        RNG_ID
    ));
    out.push_str(&format!("switches {}\n", t.switch_count()));
    for s in 0..t.switch_count() {
        out.push_str(&format!(
            "switch {} ports {} servers {}\n",
            s,
            t.ports(s),
            t.servers_on(s)
        ));
    }
    for (a, b) in t.sorted_links() {
        out.push_str(&format!("link {} {}\n", a, b));
    }
    out
}

pub fn parse_topology(text: &str) -> Result<Topology, FormatError> {
    let mut lines = content_lines(text);

    let (ln, header) = next_line(&mut lines, "version header")?;
    if header != TOPOLOGY_HEADER {
        return Err(FormatError::new(
            ln,
            format!("unsupported version header {header:?}, expected {TOPOLOGY_HEADER:?}"),
        ));
    }

    let (ln, kind_line) = next_line(&mut lines, "kind line")?;
    let fields = fields_of(&kind_line);
    let [kw, tag, seed_kw, seed, rng_kw, rng] = fields.as_slice() else {
        return Err(FormatError::new(ln, "expected `kind <tag> seed <u64> rng <id>`"));
    };
    if *kw != "kind" || *seed_kw != "seed" || *rng_kw != "rng" {
        return Err(FormatError::new(ln, "expected `kind <tag> seed <u64> rng <id>`"));
    }
    let kind = TopologyKind::from_tag(tag)
        .ok_or_else(|| FormatError::new(ln, format!("unknown topology kind {tag:?}")))?;
    let seed: u64 = parse_int(ln, seed)?;
    if *rng != RNG_ID {
        return Err(FormatError::new(ln, format!("unsupported rng {rng:?}")));
    }

    let (ln, switches_line) = next_line(&mut lines, "switches line")?;
    let fields = fields_of(&switches_line);
    let count: u32 = match fields.as_slice() {
        [kw, n] if *kw == "switches" => parse_int(ln, n)?,
        _ => return Err(FormatError::new(ln, "expected `switches <count>`")),
    };

    let mut ports = Vec::with_capacity(count as usize);
    let mut servers = Vec::with_capacity(count as usize);
    for expected in 0..count {
        let (ln, line) = next_line(&mut lines, "switch line")?;
        let fields = fields_of(&line);
        let [kw, id, ports_kw, p, servers_kw, s] = fields.as_slice() else {
            return Err(FormatError::new(
                ln,
                "expected `switch <id> ports <k> servers <s>`",
            ));
        };
        if *kw != "switch" || *ports_kw != "ports" || *servers_kw != "servers" {
            return Err(FormatError::new(
                ln,
                "expected `switch <id> ports <k> servers <s>`",
            ));
        }
        let id: u32 = parse_int(ln, id)?;
        if id != expected {
            return Err(FormatError::new(
                ln,
                format!("switch ids must ascend from 0; expected {expected}, got {id}"),
            ));
        }
        ports.push(parse_int(ln, p)?);
        servers.push(parse_int(ln, s)?);
    }

    let mut links: Vec<(u32, u32)> = Vec::new();
    let mut last_link_line = 0;
    for (ln, line) in lines {
        let fields = fields_of(&line);
        let [kw, a, b] = fields.as_slice() else {
            return Err(FormatError::new(ln, "expected `link <a> <b>`"));
        };
        if *kw != "link" {
            return Err(FormatError::new(ln, format!("unexpected directive {kw:?}")));
        }
        let a: u32 = parse_int(ln, a)?;
        let b: u32 = parse_int(ln, b)?;
        if a >= b {
            return Err(FormatError::new(ln, "link endpoints must satisfy a < b"));
        }
        if let Some(&last) = links.last() {
            if (a, b) <= last {
                return Err(FormatError::new(
                    ln,
                    "link lines must be strictly ascending (duplicate or misordered link)",
                ));
            }
        }
        links.push((a, b));
        last_link_line = ln;
    }

    Topology::from_parts(kind, seed, ports, servers, &links)
        .map_err(|e| FormatError::new(last_link_line.max(1), e.to_string()))
}

pub fn read_topology(path: impl AsRef<Path>) -> anyhow::Result<Topology> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
    parse_topology(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn write_topology(path: impl AsRef<Path>, t: &Topology) -> anyhow::Result<()> {
    let path = path.as_ref();
    fs::write(path, serialize_topology(t))
        .map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}

/// Imports a topology from either the full topology format or a bare
/// `a b` edge list (0-based ids, one edge per line). For bare lists the
/// switch count is the highest id + 1 and every switch gets `ports` ports
/// with `servers_per_switch` servers; the degree budget is validated.
pub fn load_edge_list(
    path: impl AsRef<Path>,
    ports: u32,
    servers_per_switch: u32,
) -> anyhow::Result<Topology> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
    let result = if content_lines(&text)
        .first()
        .is_some_and(|(_, l)| l == TOPOLOGY_HEADER)
    {
        parse_topology(&text)
    } else {
        parse_bare_edge_list(&text, ports, servers_per_switch)
    };
    result.map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn parse_bare_edge_list(
    text: &str,
    ports: u32,
    servers_per_switch: u32,
) -> Result<Topology, FormatError> {
    let mut links: Vec<(u32, u32)> = Vec::new();
    let mut max_id = 0u32;
    let mut last_ln = 1;
    for (ln, line) in content_lines(text) {
        let fields = fields_of(&line);
        let [a, b] = fields.as_slice() else {
            return Err(FormatError::new(ln, "expected `<a> <b>` edge line"));
        };
        let a: u32 = parse_int(ln, a)?;
        let b: u32 = parse_int(ln, b)?;
        if a == b {
            return Err(FormatError::new(ln, "self-loop edge"));
        }
        let edge = (a.min(b), a.max(b));
        if links.contains(&edge) {
            return Err(FormatError::new(ln, "duplicate edge"));
        }
        max_id = max_id.max(edge.1);
        links.push(edge);
        last_ln = ln;
    }
    let n = if links.is_empty() { 1 } else { max_id + 1 };
    Topology::from_parts(
        TopologyKind::Imported,
        0,
        vec![ports; n as usize],
        vec![servers_per_switch; n as usize],
        &links,
    )
    .map_err(|e| FormatError::new(last_ln, e.to_string()))
}

pub fn serialize_expansion(steps: &[ExpansionStep]) -> String {
    let mut out = String::new();
    out.push_str(EXPANSION_HEADER);
    out.push('\n');
    for step in steps {
        let kind = match step.kind {
            ExpansionKind::AddRack => "add_rack",
            ExpansionKind::AddSwitch => "add_switch",
        };
        out.push_str(&format!(
            "step {kind} switch {} ports {} servers {}\n",
            step.new_switch, step.new_switch_ports, step.new_switch_servers
        ));
        // One removal feeds two additions; keep the interleaved order so the
        // log reads as the sequence of rewirings actually performed.
        for (i, &(v, w)) in step.links_removed.iter().enumerate() {
            out.push_str(&format!("remove {v} {w}\n"));
            for &(a, b) in &step.links_added[2 * i..2 * i + 2] {
                out.push_str(&format!("add {a} {b}\n"));
            }
        }
    }
    out
}

pub fn parse_expansion(text: &str) -> Result<Vec<ExpansionStep>, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = next_line(&mut lines, "version header")?;
    if header != EXPANSION_HEADER {
        return Err(FormatError::new(
            ln,
            format!("unsupported version header {header:?}, expected {EXPANSION_HEADER:?}"),
        ));
    }
    let mut steps: Vec<ExpansionStep> = Vec::new();
    for (ln, line) in lines {
        let fields = fields_of(&line);
        match fields.as_slice() {
            [kw, kind, sw_kw, sw, p_kw, p, s_kw, s]
                if *kw == "step" && *sw_kw == "switch" && *p_kw == "ports" && *s_kw == "servers" =>
            {
                let kind = match *kind {
                    "add_rack" => ExpansionKind::AddRack,
                    "add_switch" => ExpansionKind::AddSwitch,
                    other => {
                        return Err(FormatError::new(ln, format!("unknown step kind {other:?}")))
                    }
                };
                steps.push(ExpansionStep {
                    kind,
                    new_switch: parse_int(ln, sw)?,
                    new_switch_ports: parse_int(ln, p)?,
                    new_switch_servers: parse_int(ln, s)?,
                    links_removed: Vec::new(),
                    links_added: Vec::new(),
                });
            }
            [kw, a, b] if *kw == "remove" => {
                let step = steps
                    .last_mut()
                    .ok_or_else(|| FormatError::new(ln, "remove before any step line"))?;
                step.links_removed.push((parse_int(ln, a)?, parse_int(ln, b)?));
            }
            [kw, a, b] if *kw == "add" => {
                let step = steps
                    .last_mut()
                    .ok_or_else(|| FormatError::new(ln, "add before any step line"))?;
                step.links_added.push((parse_int(ln, a)?, parse_int(ln, b)?));
            }
            _ => return Err(FormatError::new(ln, "expected step/remove/add line")),
        }
    }
    Ok(steps)
}

/// Non-empty lines with comments stripped, tagged with 1-based numbers.
fn content_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line.to_string()))
            }
        })
        .collect()
}

fn next_line(
    lines: &mut Vec<(usize, String)>,
    what: &str,
) -> Result<(usize, String), FormatError> {
    if lines.is_empty() {
        return Err(FormatError::new(0, format!("missing {what}")));
    }
    Ok(lines.remove(0))
}

fn fields_of(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_int<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, FormatError> {
    token
        .parse()
        .map_err(|_| FormatError::new(line, format!("invalid integer {token:?}")))
}
