use std::fs;
use std::io::Read;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use partial_cubes::checks::{self, CheckResult, CorpusSpec};
use partial_cubes::closure;
use partial_cubes::counting::{self, TheoremReport};
use partial_cubes::crossing;
use partial_cubes::generators;
use partial_cubes::median;
use partial_cubes::theta::{self, PartialCube};
use partial_cubes::{DistanceMatrix, Error, Graph, Polynomial};

use crate::report::{Input, Report};

/// A finished command: its report and whether everything it checked held.
pub struct Outcome {
    pub report: Report,
    pub verified: bool,
    pub summary: String,
}

fn read_source(path: &str) -> anyhow::Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {path}"))
    }
}

/// Reads an edge-list or JSON graph; JSON is recognized by a leading `{`.
pub fn read_graph(path: &str) -> anyhow::Result<(Graph, Input)> {
    let bytes = read_source(path)?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    let g = if text.trim_start().starts_with('{') {
        Graph::from_json(&text)
    } else {
        Graph::from_edge_list(&text)
    }
    .map_err(anyhow::Error::from)
    .with_context(|| format!("parsing {path}"))?;
    Ok((g, Input::new(path, &bytes)))
}

fn edge_pairs(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().iter().map(|&(u, v)| [u, v]).collect()
}

#[derive(Serialize)]
struct Analysis {
    vertices: usize,
    edges: usize,
    connected: bool,
    bipartite: bool,
    odd_cycle: Option<Vec<usize>>,
    partial_cube: bool,
    theta_transitive: Option<bool>,
    theta_witness: Option<[[usize; 2]; 3]>,
    idim: Option<usize>,
    median: Option<bool>,
    theta_classes: Option<Vec<Vec<[usize; 2]>>>,
    labels: Option<Vec<String>>,
    crossing_graph: Option<Vec<[usize; 2]>>,
    cube_polynomial: Option<Polynomial>,
    crossing_clique_shifted: Option<Polynomial>,
    equality: Option<bool>,
}

pub fn analyze(path: &str, mut report: Report) -> anyhow::Result<Outcome> {
    let (g, input) = read_graph(path)?;
    report.input = Some(input);
    let d = report.timed("distances", || DistanceMatrix::new(&g));
    let cert = report.timed("recognition", || theta::is_partial_cube(&g, &d));
    let mut a = Analysis {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        connected: cert.connected,
        bipartite: cert.bipartite_witness.is_none(),
        odd_cycle: cert.bipartite_witness.clone(),
        partial_cube: cert.verdict,
        theta_transitive: cert.theta.as_ref().map(|t| t.is_equivalence),
        theta_witness: cert
            .theta
            .as_ref()
            .and_then(|t| t.witness)
            .map(|(e, f, h)| {
                let pair = |x| {
                    let (u, v) = g.edge(x);
                    [u, v]
                };
                [pair(e), pair(f), pair(h)]
            }),
        idim: cert.idim,
        median: None,
        theta_classes: cert.theta.as_ref().map(|t| {
            t.classes
                .iter()
                .map(|c| c.iter().map(|&e| g.edge(e)).map(|(u, v)| [u, v]).collect())
                .collect()
        }),
        labels: None,
        crossing_graph: None,
        cube_polynomial: None,
        crossing_clique_shifted: None,
        equality: None,
    };
    if cert.verdict {
        let pc = PartialCube::new(g.clone())?;
        a.median = Some(report.timed("median", || median::all_u_sides_convex(&pc)));
        a.labels = Some(
            pc.embedding
                .labels
                .iter()
                .map(|l| l.to_bit_string())
                .collect(),
        );
        a.cube_polynomial =
            Some(report.timed("cube_polynomial", || counting::cube_polynomial(&pc)));
        if g.vertex_count() > 1 {
            let sharp = report.timed("crossing_graph", || crossing::crossing_graph_of(&pc))?;
            let shifted = report.timed("clique_polynomial", || {
                counting::clique_polynomial_enumerate(&sharp.graph).shift(1u32)
            });
            a.crossing_graph = Some(edge_pairs(&sharp.graph));
            a.equality = a.cube_polynomial.as_ref().map(|c| *c == shifted);
            a.crossing_clique_shifted = Some(shifted);
        }
    }
    let summary = match (a.partial_cube, a.median) {
        (true, Some(m)) => format!(
            "partial cube, idim {}, {}",
            a.idim.unwrap_or(0),
            if m { "median" } else { "not median" }
        ),
        _ if !a.connected => "not connected".to_string(),
        _ if !a.bipartite => "not bipartite".to_string(),
        _ => "bipartite but not a partial cube".to_string(),
    };
    report.set_results(&a)?;
    Ok(Outcome {
        report,
        verified: true,
        summary,
    })
}

pub fn verify(path: &str, mut report: Report) -> anyhow::Result<Outcome> {
    let (g, input) = read_graph(path)?;
    report.input = Some(input);
    let r: TheoremReport = report.timed("verify", || counting::verify_theorem(&g))?;
    report.set_results(&r)?;
    if !r.is_partial_cube {
        let summary = "input is not a partial cube".to_string();
        return Err(anyhow::Error::new(InputRejected { report, summary }));
    }
    let summary = match (r.equality, r.leq_holds) {
        (Some(true), _) => "C(G, x) = Cl(G#, x + 1)".to_string(),
        (_, Some(true)) => "C(G, x) < Cl(G#, x + 1)".to_string(),
        _ => "C(G, x) <= Cl(G#, x + 1) FAILED".to_string(),
    };
    Ok(Outcome {
        verified: r.consistent(),
        report,
        summary,
    })
}

/// Input that fails a command's precondition but still has a report.
#[derive(Debug)]
pub struct InputRejected {
    pub report: Report,
    pub summary: String,
}

impl std::fmt::Display for InputRejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.summary)
    }
}

impl std::error::Error for InputRejected {}

#[derive(Serialize)]
struct RoundSummary {
    vertices: usize,
    edges: usize,
    isometric_cycles: usize,
    maximal_cycles: usize,
    distinct_hulls: usize,
    added: Vec<String>,
}

pub fn closure(path: &str, max_vertices: usize, mut report: Report) -> anyhow::Result<Outcome> {
    let (g, input) = read_graph(path)?;
    report.input = Some(input);
    let trace = report.timed("closure", || {
        closure::median_closure_with_limit(&g, max_vertices)
    })?;
    let preserved = report.timed("crossing_check", || {
        closure::crossing_graph_preserved(&g, &trace)
    })?;
    let plus = trace.final_graph();
    let is_median = median::is_median_by_convex_u(plus);
    let rounds: Vec<RoundSummary> = trace
        .rounds
        .iter()
        .map(|r| RoundSummary {
            vertices: r.graph.vertex_count(),
            edges: r.graph.edge_count(),
            isometric_cycles: r.isometric_cycle_count,
            maximal_cycles: r.maximal_cycles.len(),
            distinct_hulls: r.distinct_hulls,
            added: r.added.clone(),
        })
        .collect();
    report.set_results(&json!({
        "dimension": trace.dimension,
        "vertex_counts": trace.vertex_counts(),
        "stabilization_index": trace.stabilization_index(),
        "rounds": rounds,
        "closure_median": is_median,
        "crossing_graph_preserved": preserved,
        "closure_edges": edge_pairs(plus),
        "closure_labels": trace.labels.iter().map(|l| l.to_bit_string()).collect::<Vec<_>>(),
    }))?;
    let counts: Vec<String> = trace
        .vertex_counts()
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(Outcome {
        verified: is_median && preserved,
        report,
        summary: format!(
            "rounds {}, stabilizes at {}",
            counts.join(" -> "),
            trace.stabilization_index()
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdFamily {
    /// (x + 1)^n + m x, the clique polynomial of K_n plus m isolated vertices
    Clique,
    /// (x + 2)^n + m (x + 1), the cube polynomial of Q_n plus m pendants
    Cube,
}

pub const MAX_CLIQUE_FAMILY_N: u32 = 1000;
pub const MAX_CUBE_FAMILY_N: u32 = 100;
const CROSS_CHECK_MAX_VERTICES: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Shape {
    LogConcave,
    UnimodalNotLogConcave,
    NotUnimodal,
}

fn shape(p: &Polynomial) -> Shape {
    if p.is_log_concave() {
        Shape::LogConcave
    } else if p.is_unimodal() {
        Shape::UnimodalNotLogConcave
    } else {
        Shape::NotUnimodal
    }
}

fn int_value(x: i128) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// Boundaries predicted by the closed-form analysis of each family: the
/// last log-concave `m` and the first `m` that is not unimodal. Only
/// defined once the binomial part dips (`n >= 6` and `n >= 9`).
fn predicted(family: ThresholdFamily, n: u32) -> Option<(i128, i128)> {
    let n = i128::from(n);
    match family {
        ThresholdFamily::Clique if n >= 6 => {
            Some(((n * n + n) / (2 * n - 4), (n * n - 3 * n) / 2 + 1))
        }
        ThresholdFamily::Cube if n >= 9 => {
            let scale = 1i128 << (n - 2);
            Some((
                (n * n + n) * scale / (n - 2),
                (n * n - 5 * n) / 2 * scale + 1,
            ))
        }
        _ => None,
    }
}

pub fn thresholds(
    family: ThresholdFamily,
    n: u32,
    m_min: u64,
    m_max: u64,
    mut report: Report,
) -> anyhow::Result<Outcome> {
    let limit = match family {
        ThresholdFamily::Clique => MAX_CLIQUE_FAMILY_N,
        ThresholdFamily::Cube => MAX_CUBE_FAMILY_N,
    };
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "family dimension n",
            limit: limit as usize,
        }
        .into());
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()).into());
    }
    if m_min > m_max {
        bail!(Error::InvalidParameter(format!(
            "empty m range {m_min}..={m_max}"
        )));
    }
    let poly = |m: u64| match family {
        ThresholdFamily::Clique => counting::clique_family_closed_form(n, m),
        ThresholdFamily::Cube => counting::cube_family_closed_form(n, m),
    };
    let rows: Vec<(u64, Shape)> = report.timed("scan", || {
        (m_min..=m_max).map(|m| (m, shape(&poly(m)))).collect()
    });
    let last_lc = rows
        .iter()
        .rev()
        .find(|r| r.1 == Shape::LogConcave)
        .map(|r| r.0);
    let first_lc_lost = rows.iter().find(|r| r.1 != Shape::LogConcave).map(|r| r.0);
    let first_not_unimodal = rows.iter().find(|r| r.1 == Shape::NotUnimodal).map(|r| r.0);

    let mut cross_checks = Vec::new();
    let mut all_agree = true;
    for m in [m_min, m_max] {
        let (vertices, materialize): (usize, Box<dyn Fn() -> anyhow::Result<Polynomial>>) =
            match family {
                ThresholdFamily::Clique => (
                    n as usize + m as usize,
                    Box::new(move || {
                        let g = generators::example_41(n as usize, m as usize)?;
                        Ok(counting::clique_polynomial_recursive(&g))
                    }),
                ),
                ThresholdFamily::Cube => (
                    1usize
                        .checked_shl(n)
                        .unwrap_or(usize::MAX)
                        .saturating_add(m as usize),
                    Box::new(move || {
                        let g = generators::example_42(n as usize, m as usize)?;
                        Ok(counting::cube_polynomial(&PartialCube::new(g)?))
                    }),
                ),
            };
        if vertices > CROSS_CHECK_MAX_VERTICES || (family == ThresholdFamily::Clique && n > 16) {
            continue;
        }
        let agrees = report.timed(&format!("cross_check_m{m}"), materialize)? == poly(m);
        all_agree &= agrees;
        cross_checks
            .push(json!({"m": m, "vertices": vertices, "closed_form_matches_graph": agrees}));
    }

    let predicted_json = predicted(family, n).map(|(lc, uni)| {
        json!({"last_log_concave": int_value(lc), "first_not_unimodal": int_value(uni)})
    });
    report.set_results(&json!({
        "family": family,
        "n": n,
        "m_range": [m_min, m_max],
        "polynomial_at_m_min": poly(m_min),
        "rows": rows.iter().map(|(m, s)| json!({"m": m, "shape": s})).collect::<Vec<_>>(),
        "observed": {
            "last_log_concave": last_lc,
            "first_not_log_concave": first_lc_lost,
            "first_not_unimodal": first_not_unimodal,
        },
        "predicted": predicted_json,
        "cross_checks": cross_checks,
    }))?;
    let show = |x: Option<u64>| x.map_or("none in range".to_string(), |m| m.to_string());
    Ok(Outcome {
        verified: all_agree,
        report,
        summary: format!(
            "last log-concave m: {}; first non-unimodal m: {}",
            show(last_lc),
            show(first_not_unimodal)
        ),
    })
}

#[derive(Serialize)]
struct ItemResult {
    name: String,
    vertices: usize,
    edges: usize,
    failures: Vec<CheckResult>,
}

pub fn corpus(
    spec_path: Option<&str>,
    threads: Option<usize>,
    mut report: Report,
) -> anyhow::Result<Outcome> {
    let spec = match spec_path {
        Some(path) => {
            let bytes = read_source(path)?;
            report.input = Some(Input::new(path, &bytes));
            let text = String::from_utf8(bytes).context("corpus spec is not UTF-8")?;
            CorpusSpec::from_json(&text).with_context(|| format!("parsing {path}"))?
        }
        None => CorpusSpec::default_corpus(),
    };
    let items = report.timed("generate", || spec.items())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let per_item: Vec<(ItemResult, Vec<CheckResult>)> = report.timed("checks", || {
        pool.install(|| {
            items
                .par_iter()
                .map(|item| {
                    let results = checks::run_suite(item);
                    let failures = results.iter().filter(|r| !r.passed).cloned().collect();
                    let summary = ItemResult {
                        name: item.name.clone(),
                        vertices: item.graph.vertex_count(),
                        edges: item.graph.edge_count(),
                        failures,
                    };
                    (summary, results)
                })
                .collect()
        })
    });
    let tally = checks::tally(per_item.iter().flat_map(|(_, rs)| rs.iter()));
    let failed: usize = tally.values().map(|t| t.failed).sum();
    let passed: usize = tally.values().map(|t| t.passed).sum();
    let items_json: Vec<&ItemResult> = per_item.iter().map(|(i, _)| i).collect();
    report.set_results(&json!({
        "items": items_json.len(),
        "checks_passed": passed,
        "checks_failed": failed,
        "by_check": tally,
        "graphs": items_json,
    }))?;
    Ok(Outcome {
        verified: failed == 0,
        report,
        summary: format!(
            "{} graphs, {passed} checks passed, {failed} failed",
            per_item.len()
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Edges,
    Json,
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> anyhow::Result<T> {
    let raw = params
        .get(i)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter <{name}>")))?;
    raw.parse().map_err(|_| {
        Error::InvalidParameter(format!("<{name}> must be a number, got {raw:?}")).into()
    })
}

pub const FAMILIES: &[&str] = &[
    "hypercube N",
    "hypercube-minus-vertex N",
    "even-cycle K",
    "path N",
    "complete N",
    "trihex",
    "random-tree N",
    "random-graph N P",
    "random-connected N P",
    "random-median STEPS",
    "example41 N M",
    "example42 N M",
    "pendants N M  (hypercube Q_N with M pendants at a seeded start)",
];

pub fn generate(
    family: &str,
    params: &[String],
    seed: u64,
    max_vertices: usize,
) -> anyhow::Result<Graph> {
    let p = |i, name| param::<usize>(params, i, name);
    let g = match family {
        "hypercube" => generators::hypercube(p(0, "N")?)?,
        "hypercube-minus-vertex" => generators::hypercube_minus_vertex(p(0, "N")?)?,
        "even-cycle" => generators::even_cycle(p(0, "K")?)?,
        "path" => generators::path(p(0, "N")?)?,
        "complete" => generators::complete(p(0, "N")?)?,
        "trihex" => generators::trihex(),
        "random-tree" => generators::random_tree(p(0, "N")?, seed)?,
        "random-graph" => generators::random_graph(p(0, "N")?, param(params, 1, "P")?, seed)?,
        "random-connected" => {
            generators::random_connected_graph(p(0, "N")?, param(params, 1, "P")?, seed)?
        }
        "random-median" => generators::random_median_graph(p(0, "STEPS")?, seed)?,
        "example41" => generators::example_41(p(0, "N")?, p(1, "M")?)?,
        "example42" => generators::example_42_with_limit(p(0, "N")?, p(1, "M")?, max_vertices)?,
        "pendants" => {
            let (n, m) = (p(0, "N")?, p(1, "M")?);
            if n > generators::MAX_HYPERCUBE_DIM || (1usize << n) + m > max_vertices {
                return Err(Error::GuardExceeded {
                    what: "vertices",
                    limit: max_vertices,
                }
                .into());
            }
            generators::attach_pendants(&generators::hypercube(n)?, m, seed)?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family {other:?}; known families: {}",
                FAMILIES.join(", ")
            ))
            .into())
        }
    };
    if g.vertex_count() > max_vertices {
        return Err(Error::GuardExceeded {
            what: "vertices",
            limit: max_vertices,
        }
        .into());
    }
    Ok(g)
}

pub fn render_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Edges => g.to_edge_list(),
        GraphFormat::Json => g.to_json() + "\n",
    }
}

pub fn simplex(path: &str, max_cliques: usize, mut report: Report) -> anyhow::Result<Outcome> {
    let (g, input) = read_graph(path)?;
    report.input = Some(input);
    let s = report.timed("simplex_graph", || {
        crossing::simplex_graph_with_limit(&g, max_cliques)
    })?;
    let is_median = report.timed("median", || median::is_median_by_convex_u(&s.graph));
    let identity = report.timed("identity", || crossing::verify_simplex_identity(&g))?;
    report.set_results(&json!({
        "cliques": s.clique_of_vertex.len(),
        "simplex_vertices": s.graph.vertex_count(),
        "simplex_edges": edge_pairs(&s.graph),
        "clique_of_vertex": s.clique_of_vertex,
        "simplex_median": is_median,
        "crossing_graph_identity": identity,
    }))?;
    Ok(Outcome {
        verified: is_median && identity,
        summary: format!(
            "S(G) has {} vertices; median {is_median}; S(G)# = G {identity}",
            s.graph.vertex_count()
        ),
        report,
    })
}
