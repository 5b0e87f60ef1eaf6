//! One function per subcommand, each producing text, a JSON record and an
//! exit code.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context};
use serde_json::{json, Value};
use stardecomp::colorize::EXACT_LIMIT;
use stardecomp::decompose::{DecomposeOptions, ExtensionMethod};
use stardecomp::density::DensityError;
use stardecomp::gen::{self, ENUMERATION_LIMIT, RNG_ALGORITHM};
use stardecomp::io::{parse_graph6_stream, sniff_format};
use stardecomp::*;

use crate::GraphInput;

/// Largest graph handed to the subset-enumeration Mad oracle.
const BRUTE_LIMIT: usize = 20;

pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub record: Value,
    /// Printed on standard error.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(text: String, record: Value) -> Self {
        Outcome {
            code: 0,
            text,
            record,
            message: None,
        }
    }

    fn negative(text: String, record: Value, message: impl Into<String>) -> Self {
        Outcome {
            code: 1,
            text,
            record,
            message: Some(message.into()),
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_graph(input: &GraphInput) -> anyhow::Result<Graph> {
    let text = read_text(&input.input)?;
    let format = input.format.unwrap_or_else(|| sniff_format(&text));
    parse_graph(&text, format).with_context(|| format!("parsing {}", input.input.display()))
}

fn vertex_list(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn mad(input: &GraphInput, brute: bool, witness: bool) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let result = if brute {
        mad_bruteforce(&g, BRUTE_LIMIT)
    } else {
        mad_exact(&g)
    };
    let result = match result {
        Ok(r) => r,
        // The graph without vertices has no subgraph of positive degree.
        Err(DensityError::EmptyGraph) => MadResult {
            value: Rational::from_integer(0),
            witness: Vec::new(),
        },
        Err(e) => bail!(e),
    };
    let value = format_ratio(&result.value);
    let mut text = format!("{value}\n");
    if witness {
        let _ = writeln!(text, "witness {}", vertex_list(&result.witness));
    }
    let mut record = json!({
        "mad": value,
        "method": if brute { "bruteforce" } else { "min_cut" },
    });
    if witness {
        record["witness"] = json!(result.witness);
    }
    Ok(Outcome::ok(text, record))
}

pub fn color(input: &GraphInput, route: RouteChoice, verify: bool) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let cert = match star_color_via(&g, route) {
        Ok(c) => c,
        Err(ColorizeError::NotCovered(why)) => {
            let record = json!({ "route": null, "error": why });
            return Ok(Outcome::negative(
                String::new(),
                record,
                format!("no route applies: {why}"),
            ));
        }
        Err(e) => {
            let record = json!({ "route": null, "error": e.to_string() });
            return Ok(Outcome::negative(String::new(), record, e.to_string()));
        }
    };
    let mut text = format!("# route {}, {} colors\n", cert.route, cert.coloring.colors_used());
    let mut record = serde_json::to_value(&cert)?;
    record["colors_used"] = json!(cert.coloring.colors_used());
    if verify {
        let verdict = verify_star(&g, &cert.coloring)?;
        let _ = writeln!(text, "# verified: {}", if verdict.ok { "ok" } else { "violation" });
        record["reverified"] = json!(verdict.ok);
        if !verdict.ok {
            return Ok(Outcome::negative(text, record, "coloring failed re-verification"));
        }
    }
    text.push_str(&cert.coloring.to_lines());
    Ok(Outcome::ok(text, record))
}

pub fn detect(input: &GraphInput, family: Family) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    match stardecomp::detect(&g, family) {
        Some(m) => {
            let mut text = format!("{m}\n");
            for (role, v) in &m.roles {
                let _ = writeln!(text, "role {role} {v}");
            }
            let _ = writeln!(text, "delete {}", vertex_list(&m.deletion_set));
            Ok(Outcome::ok(text, serde_json::to_value(&m)?))
        }
        None => Ok(Outcome::negative(
            "none\n".into(),
            json!({ "family": family, "match": null }),
            format!("no {family} configuration"),
        )),
    }
}

pub fn discharge(input: &GraphInput, family: Family, transfers: bool) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let ledger = apply_rules(&g, family);
    let report = discharge::audit_ledger(&g, &ledger, stardecomp::detect(&g, family));
    let mut text = String::new();
    let _ = writeln!(text, "family {family}, threshold {}", format_ratio(&report.threshold));
    let _ = writeln!(
        text,
        "charge {} -> {} + bank {}, conserved {}",
        format_ratio(&ledger.total_initial()),
        format_ratio(&ledger.total_final()),
        format_ratio(&ledger.bank),
        report.conserved
    );
    let _ = writeln!(text, "transfers {}", ledger.transfers.len());
    if let Some(min) = &report.min_charge {
        let _ = writeln!(text, "min charge {}", format_ratio(min));
    }
    match &report.matched {
        Some(m) => {
            let _ = writeln!(text, "configuration {m}: thresholds not owed");
        }
        None => {
            let _ = writeln!(text, "configuration none: {} violations", report.violations.len());
        }
    }
    for v in &report.violations {
        let _ = writeln!(
            text,
            "violation {} {} charge {}",
            v.vertex,
            v.profile,
            format_ratio(&v.charge)
        );
    }
    let _ = writeln!(text, "audit {}", if report.pass { "pass" } else { "fail" });
    let mut record = serde_json::to_value(&report)?;
    record["total_initial"] = json!(format_ratio(&ledger.total_initial()));
    record["total_final"] = json!(format_ratio(&ledger.total_final()));
    if transfers {
        record["transfers"] = serde_json::to_value(&ledger.transfers)?;
    }
    if report.pass {
        Ok(Outcome::ok(text, record))
    } else {
        Ok(Outcome::negative(text, record, "discharging audit failed"))
    }
}

pub fn verify(input: &GraphInput, coloring: &Path) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let c = Coloring::parse(&read_text(coloring)?).with_context(|| format!("parsing {}", coloring.display()))?;
    let verdict = match verify_star(&g, &c) {
        Ok(v) => v,
        Err(e) => {
            let record = json!({ "ok": false, "error": e.to_string() });
            return Ok(Outcome::negative(format!("invalid: {e}\n"), record, e.to_string()));
        }
    };
    let record = serde_json::to_value(&verdict)?;
    match &verdict.violation {
        None => Ok(Outcome::ok(format!("ok, {} colors\n", c.colors_used()), record)),
        Some(v) => {
            let text = match v {
                Violation::Improper { edge } => format!("improper edge {} {}\n", edge.0, edge.1),
                Violation::BicoloredPath { path } => format!("bicolored path {}\n", vertex_list(path)),
            };
            Ok(Outcome::negative(text, record, "not a star coloring"))
        }
    }
}

pub fn decompose(input: &GraphInput, scheme: Scheme, require_girth: bool, trace: bool) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let opts = DecomposeOptions {
        require_girth,
        ..DecomposeOptions::default()
    };
    let (p, tr) = match decompose_with(&g, scheme, &opts) {
        Ok(r) => r,
        Err(e) => {
            let record = json!({ "scheme": scheme, "error": e.to_string() });
            return Ok(Outcome::negative(String::new(), record, e.to_string()));
        }
    };
    let fast = tr.count(|m| matches!(m, ExtensionMethod::FastPath { .. }));
    let search = tr.count(|m| matches!(m, ExtensionMethod::Search));
    let repair = tr.count(|m| matches!(m, ExtensionMethod::Repair { .. }));
    let mut text = format!(
        "# {} reductions: {fast} fast path, {search} search, {repair} repair\n",
        tr.steps.len()
    );
    text.push_str(&p.to_lines());
    let mut record = json!({
        "scheme": scheme,
        "partition": p,
        "reductions": tr.steps.len(),
        "fast_path": fast,
        "search": search,
        "repair": repair,
    });
    if trace {
        record["trace"] = serde_json::to_value(&tr)?;
    }
    Ok(Outcome::ok(text, record))
}

pub fn search(
    target: usize,
    stream: Option<&Path>,
    max_n: usize,
    cap: usize,
    limit: Option<usize>,
) -> anyhow::Result<Outcome> {
    if target == 0 {
        bail!("--target must be at least 1");
    }
    let mut records = match stream {
        Some(path) => {
            let text = read_text(path)?;
            let graphs = parse_graph6_stream(&text)
                .filter(|r| r.as_ref().map_or(true, |g| g.num_vertices() <= max_n))
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("parsing {}", path.display()))?;
            if let Some(g) = graphs.iter().find(|g| g.num_vertices() > EXACT_LIMIT) {
                bail!(
                    "stream holds a graph with {} vertices; the exact solver stops at {EXACT_LIMIT}",
                    g.num_vertices()
                );
            }
            gen::extremal_search(graphs, target, cap)
        }
        None => {
            if max_n > ENUMERATION_LIMIT {
                bail!("--max-n above {ENUMERATION_LIMIT} needs --stream (e.g. the output of geng)");
            }
            gen::extremal_search_small(max_n, target, cap)
        }
    };
    let found = records.len();
    if let Some(l) = limit {
        records.truncate(l);
    }
    let mut text = String::new();
    for r in &records {
        text.push_str(&r.to_line(cap));
        text.push('\n');
    }
    let record = json!({
        "target": target,
        "cap": cap,
        "found": found,
        "min_mad": records.first().map(|r| format_ratio(&r.mad)),
        "records": records,
    });
    Ok(Outcome::ok(text, record))
}

pub fn gen_named(name: &str, format: Format) -> anyhow::Result<Outcome> {
    let g = named(name)?;
    let text = with_newline(serialize_graph(&g, format));
    let record = json!({ "name": name, "graph6": io::to_graph6(&g) });
    Ok(Outcome::ok(text, record))
}

pub fn gen_random(
    family: Option<Family>,
    mad: Option<&str>,
    girth: usize,
    n: usize,
    seed: u64,
    method: Method,
    format: Format,
) -> anyhow::Result<Outcome> {
    let spec = match (family, mad) {
        (Some(f), _) => GeneratorSpec::for_family(f, n, seed, method),
        (None, Some(m)) => {
            let bound = parse_ratio(m).with_context(|| format!("`{m}` is not a ratio p/q"))?;
            GeneratorSpec::new(n, bound, girth, seed, method)
        }
        (None, None) => bail!("give one of --named, --family or --mad"),
    };
    let generated = gen::generate(&spec)?;
    let text = with_newline(serialize_graph(&generated.graph, format));
    let mut record = serde_json::to_value(&generated)?;
    record["rng"] = json!(RNG_ALGORITHM);
    Ok(Outcome::ok(text, record))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}
