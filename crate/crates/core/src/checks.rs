//! The invariant suite run over a corpus of generated graphs.
//!
//! A corpus is described by a [`CorpusSpec`]: a list of families, each with
//! sizes and seeds. Every generated graph goes through [`run_suite`], which
//! applies each check that makes sense for it and records one
//! [`CheckResult`] per check.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::closure;
use crate::counting::{self, TheoremReport};
use crate::crossing::{self, CrossingGraph};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{Graph, VertexId};
use crate::median::{self, ExpansionSpec};
use crate::metric::DistanceMatrix;
use crate::polynomial::Polynomial;
use crate::theta::{self, PartialCube};

/// Partial cubes up to this size are compared against the cube oracle.
pub const ORACLE_CUBE_MAX_VERTICES: usize = 14;
/// Graphs up to this size are compared against the clique recursion.
pub const ORACLE_CLIQUE_MAX_VERTICES: usize = 12;
/// Non-median partial cubes up to this size get a closure monotonicity check.
pub const CLOSURE_MAX_VERTICES: usize = 40;
/// Number of seeded connected subgraphs tried per graph.
pub const SUBGRAPHS_PER_GRAPH: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hypercube,
    HypercubeMinusVertex,
    EvenCycle,
    Path,
    Complete,
    Trihex,
    RandomTree,
    RandomGraph,
    RandomConnected,
    RandomMedian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Edge probability for the random graph families.
    #[serde(default)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub families: Vec<FamilySpec>,
}

impl CorpusSpec {
    pub fn from_json(text: &str) -> Result<CorpusSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Fixtures, small hypercubes, cycles, trees and seeded random graphs
    /// from every family.
    pub fn default_corpus() -> CorpusSpec {
        let fam = |family, sizes: Vec<usize>, seeds: Vec<u64>, p| FamilySpec {
            family,
            sizes,
            seeds,
            p,
        };
        CorpusSpec {
            families: vec![
                fam(Family::Trihex, vec![], vec![], None),
                fam(Family::Hypercube, vec![1, 2, 3, 4], vec![], None),
                fam(Family::HypercubeMinusVertex, vec![2, 3, 4], vec![], None),
                fam(Family::EvenCycle, vec![2, 3, 4, 5, 6], vec![], None),
                fam(Family::Path, vec![2, 3, 5], vec![], None),
                fam(Family::Complete, vec![2, 3, 4], vec![], None),
                fam(Family::RandomTree, vec![6, 10], (0..4).collect(), None),
                fam(Family::RandomGraph, vec![6, 8], (0..6).collect(), Some(0.4)),
                fam(
                    Family::RandomConnected,
                    vec![7, 9],
                    (0..6).collect(),
                    Some(0.2),
                ),
                fam(
                    Family::RandomMedian,
                    vec![4, 8, 12, 16],
                    (0..8).collect(),
                    None,
                ),
            ],
        }
    }

    pub fn items(&self) -> Result<Vec<CorpusItem>> {
        let mut out = Vec::new();
        for f in &self.families {
            let seeds: &[u64] = if f.seeds.is_empty() { &[0] } else { &f.seeds };
            let p = f.p.unwrap_or(0.3);
            if f.family == Family::Trihex {
                out.push(CorpusItem::plain("trihex".into(), generators::trihex()));
                continue;
            }
            for &n in &f.sizes {
                match f.family {
                    Family::RandomTree
                    | Family::RandomGraph
                    | Family::RandomConnected
                    | Family::RandomMedian => {
                        for &s in seeds {
                            out.push(random_item(&f.family, n, p, s)?);
                        }
                    }
                    _ => out.push(fixed_item(&f.family, n)?),
                }
            }
        }
        Ok(out)
    }
}

fn fixed_item(family: &Family, n: usize) -> Result<CorpusItem> {
    let (name, g) = match family {
        Family::Hypercube => ("hypercube", generators::hypercube(n)?),
        Family::HypercubeMinusVertex => (
            "hypercube_minus_vertex",
            generators::hypercube_minus_vertex(n)?,
        ),
        Family::EvenCycle => ("even_cycle", generators::even_cycle(n)?),
        Family::Path => ("path", generators::path(n)?),
        Family::Complete => ("complete", generators::complete(n)?),
        _ => unreachable!("random families are handled by random_item"),
    };
    Ok(CorpusItem::plain(format!("{name}({n})"), g))
}

fn random_item(family: &Family, n: usize, p: f64, seed: u64) -> Result<CorpusItem> {
    Ok(match family {
        Family::RandomTree => CorpusItem::plain(
            format!("random_tree({n}, seed={seed})"),
            generators::random_tree(n, seed)?,
        ),
        Family::RandomGraph => CorpusItem::plain(
            format!("random_graph({n}, {p}, seed={seed})"),
            generators::random_graph(n, p, seed)?,
        ),
        Family::RandomConnected => CorpusItem::plain(
            format!("random_connected({n}, {p}, seed={seed})"),
            generators::random_connected_graph(n, p, seed)?,
        ),
        Family::RandomMedian => {
            let (g, sets) = generators::random_median_graph_traced(n, seed)?;
            CorpusItem {
                name: format!("random_median({n}, seed={seed})"),
                graph: g,
                seed,
                expansions: sets,
            }
        }
        _ => unreachable!("fixed families are handled by fixed_item"),
    })
}

/// One generated graph, with the convex sets of its peripheral expansions
/// when it was grown from `K_1`.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub name: String,
    pub graph: Graph,
    pub seed: u64,
    pub expansions: Vec<VertexSet>,
}

impl CorpusItem {
    pub fn plain(name: String, graph: Graph) -> CorpusItem {
        CorpusItem {
            name,
            graph,
            seed: 0,
            expansions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Every check [`run_suite`] can report.
pub const CHECK_NAMES: &[&str] = &[
    "theorem",
    "cube_oracle",
    "clique_oracle",
    "median_recognizers",
    "crossing_tests_agree",
    "w_sides_convex",
    "u_sides_isomorphic",
    "hull_occurrence",
    "boundary_convexity",
    "convex_crossing_subgraph",
    "expansion_recursions",
    "contraction_roundtrip",
    "b_equals_clique_counts",
    "log_concave_unimodal",
    "closure_monotone",
    "simplex_identity",
];

struct Recorder {
    results: Vec<CheckResult>,
}

impl Recorder {
    fn record(&mut self, check: &'static str, outcome: Result<std::result::Result<(), String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(())) => (true, None),
            Ok(Err(why)) => (false, Some(why)),
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        self.results.push(CheckResult {
            check,
            passed,
            detail,
        });
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Runs every applicable check on one corpus item.
pub fn run_suite(item: &CorpusItem) -> Vec<CheckResult> {
    let g = &item.graph;
    let mut rec = Recorder {
        results: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(item.seed ^ 0x5eed);
    let mut polys: Vec<Polynomial> = Vec::new();

    if g.vertex_count() <= ORACLE_CLIQUE_MAX_VERTICES {
        let fast = counting::clique_polynomial_enumerate(g);
        let rec_poly = counting::clique_polynomial_recursive(g);
        rec.record(
            "clique_oracle",
            Ok(ensure(fast == rec_poly, || {
                format!("enumerate {fast} vs recursion {rec_poly}")
            })),
        );
        polys.push(fast);
        if g.vertex_count() <= 8 {
            rec.record("simplex_identity", check_simplex(g));
        }
    }

    let d = DistanceMatrix::new(g);
    let connected_bipartite = g.vertex_count() > 0 && g.is_connected() && g.is_bipartite();
    if connected_bipartite {
        rec.record(
            "median_recognizers",
            median::is_median_by_triples(g, &d).map(|t| {
                let u = median::is_median_by_convex_u(g);
                ensure(t == u, || {
                    format!("triples say {t}, convex U sides say {u}")
                })
            }),
        );
        let subsets = connected_subsets(g, SUBGRAPHS_PER_GRAPH, &mut rng);
        rec.record("boundary_convexity", check_boundary(g, &d, &subsets));
    }

    let pc = match PartialCube::new(g.clone()) {
        Ok(pc) if g.vertex_count() > 1 => pc,
        _ => {
            rec.record("log_concave_unimodal", Ok(check_shapes(&polys)));
            return rec.results;
        }
    };

    let report = counting::verify_theorem_for(&pc);
    if let Ok(r) = &report {
        polys.extend(r.cube_poly.iter().cloned());
        polys.extend(r.crossing_clique_shifted.iter().cloned());
    }
    rec.record("theorem", report.map(check_theorem));
    if g.vertex_count() <= ORACLE_CUBE_MAX_VERTICES {
        rec.record(
            "cube_oracle",
            counting::cube_polynomial_oracle(g, g.vertex_count()).map(|oracle| {
                let fast = counting::cube_polynomial(&pc);
                ensure(fast == oracle, || {
                    format!("anchors {fast} vs oracle {oracle}")
                })
            }),
        );
    }
    rec.record("crossing_tests_agree", check_crossing_tests(&pc));
    rec.record("w_sides_convex", check_w_sides(&pc));
    rec.record("u_sides_isomorphic", check_u_sides(&pc));
    let subsets = connected_subsets(g, SUBGRAPHS_PER_GRAPH, &mut rng);
    rec.record("hull_occurrence", check_hull_occurrence(&pc, &subsets));

    let is_median = median::all_u_sides_convex(&pc);
    if is_median {
        rec.record(
            "convex_crossing_subgraph",
            check_convex_crossing(&pc, &subsets),
        );
        rec.record("b_equals_clique_counts", check_b_sequence(&pc));
        if !item.expansions.is_empty() {
            rec.record("expansion_recursions", check_expansions(&item.expansions));
            rec.record(
                "contraction_roundtrip",
                check_contractions(&item.expansions),
            );
        }
    } else if g.vertex_count() <= CLOSURE_MAX_VERTICES {
        rec.record("closure_monotone", check_closure(g));
    }
    rec.record("log_concave_unimodal", Ok(check_shapes(&polys)));
    rec.results
}

fn check_theorem(r: TheoremReport) -> std::result::Result<(), String> {
    ensure(r.consistent(), || {
        format!(
            "leq {:?}, equality {:?}, median {:?}",
            r.leq_holds, r.equality, r.is_median
        )
    })?;
    if r.is_median == Some(false) {
        let (c, s) = (r.cube_poly.unwrap(), r.crossing_clique_shifted.unwrap());
        ensure(c.lt(&s), || format!("{c} is not strictly below {s}"))?;
    }
    Ok(())
}

fn check_simplex(g: &Graph) -> Result<std::result::Result<(), String>> {
    let ok = crossing::verify_simplex_identity(g)?;
    let s = crossing::simplex_graph(g)?;
    let median = median::is_median_by_convex_u(&s.graph);
    Ok(ensure(ok && median, || {
        format!("identity {ok}, S(G) median {median}")
    }))
}

fn check_crossing_tests(pc: &PartialCube) -> Result<std::result::Result<(), String>> {
    let cycles = crossing::isometric_cycles(&pc.graph, &pc.dist)?;
    for c1 in 0..pc.idim() {
        for c2 in c1 + 1..pc.idim() {
            let q = crossing::crosses_quadrant(pc, c1, c2)?;
            let c = crossing::crosses_cycle(pc, &cycles, c1, c2)?;
            if q != c {
                return Ok(Err(format!("classes {c1}, {c2}: quadrant {q}, cycles {c}")));
            }
        }
    }
    Ok(Ok(()))
}

fn check_w_sides(pc: &PartialCube) -> Result<std::result::Result<(), String>> {
    for c in 0..pc.idim() {
        let s = pc.sides(c)?;
        for (name, w) in [("W_ab", &s.w_ab), ("W_ba", &s.w_ba)] {
            if !pc.dist.is_convex(&pc.graph, w) {
                return Ok(Err(format!("class {c}: {name} is not convex")));
            }
        }
    }
    Ok(Ok(()))
}

/// The class edges match `U_ab` with `U_ba`; this matching must be an
/// isomorphism `G[U_ab] -> G[U_ba]` whose corresponding edges are Θ-related.
fn check_u_sides(pc: &PartialCube) -> Result<std::result::Result<(), String>> {
    let g = &pc.graph;
    for c in 0..pc.idim() {
        let s = pc.sides(c)?;
        let mut partner: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &e in pc.class_edges(c) {
            let (x, y) = g.edge(e);
            let (near, far) = if s.w_ab.contains(x) { (x, y) } else { (y, x) };
            if partner.insert(near, far).is_some() {
                return Ok(Err(format!("class {c}: vertex {near} matched twice")));
            }
        }
        if partner.len() != s.u_ab.count() || partner.len() != s.u_ba.count() {
            return Ok(Err(format!("class {c}: U sides differ in size")));
        }
        for (&x1, &y1) in &partner {
            for (&x2, &y2) in partner.range(x1 + 1..) {
                match (g.edge_id(x1, x2), g.edge_id(y1, y2)) {
                    (None, None) => {}
                    (Some(e), Some(f)) if pc.class_of(e) == pc.class_of(f) => {}
                    _ => {
                        return Ok(Err(format!(
                            "class {c}: {x1}-{x2} and {y1}-{y2} do not correspond"
                        )))
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Seeded connected vertex sets grown by random frontier steps.
pub fn connected_subsets(g: &Graph, count: usize, rng: &mut impl Rng) -> Vec<VertexSet> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let target = rng.gen_range(1..=n);
            let mut set = VertexSet::new(n);
            let start = rng.gen_range(0..n);
            set.insert(start);
            let mut members = vec![start];
            while members.len() < target {
                let frontier: Vec<VertexId> = members
                    .iter()
                    .flat_map(|&v| g.neighbors(v).iter().copied())
                    .filter(|&w| !set.contains(w))
                    .collect();
                let Some(&w) = frontier.choose(rng) else {
                    break;
                };
                set.insert(w);
                members.push(w);
            }
            set
        })
        .collect()
}

fn check_boundary(
    g: &Graph,
    d: &DistanceMatrix,
    subsets: &[VertexSet],
) -> Result<std::result::Result<(), String>> {
    for s in subsets {
        let by_boundary = theta::convexity_by_boundary(g, d, s)?;
        let direct = d.is_convex(g, s);
        if by_boundary != direct {
            return Ok(Err(format!(
                "{s:?}: boundary test {by_boundary}, intervals {direct}"
            )));
        }
    }
    Ok(Ok(()))
}

fn check_hull_occurrence(
    pc: &PartialCube,
    subsets: &[VertexSet],
) -> Result<std::result::Result<(), String>> {
    for s in subsets {
        let hull = pc.dist.convex_hull_in(&pc.graph, s)?;
        let (fs, fh) = (pc.theta_occurrence(s), pc.theta_occurrence(&hull));
        if fs != fh {
            return Ok(Err(format!("{s:?}: classes {fs:?} but hull has {fh:?}")));
        }
    }
    Ok(Ok(()))
}

/// For a median graph and a convex `H`: `H#` is `G#` induced on the classes
/// occurring in `H`.
fn check_convex_crossing(
    pc: &PartialCube,
    subsets: &[VertexSet],
) -> Result<std::result::Result<(), String>> {
    let whole = crossing::crossing_graph_of(pc)?;
    for s in subsets {
        let hull = pc.dist.convex_hull_in(&pc.graph, s)?;
        if hull.count() < 2 {
            continue;
        }
        let (h, map) = pc.graph.induced_subgraph(&hull);
        let back: Vec<VertexId> = (0..pc.graph.vertex_count())
            .filter(|&v| map[v].is_some())
            .collect();
        let sub = PartialCube::new(h)?;
        let local = crossing::crossing_graph_of(&sub)?;
        // class of H -> class of G, through any representative edge
        let to_global: Vec<usize> = (0..sub.idim())
            .map(|c| {
                let (u, v) = sub.graph.edge(sub.class_edges(c)[0]);
                pc.class_of(pc.graph.edge_id(back[u], back[v]).expect("induced edge"))
            })
            .collect();
        let occurring = VertexSet::from_indices(pc.idim(), to_global.iter().copied());
        if !induced_matches(&whole, &occurring, &local, &to_global) {
            return Ok(Err(format!(
                "hull of {s:?}: H# is not the induced part of G#"
            )));
        }
    }
    Ok(Ok(()))
}

fn induced_matches(
    whole: &CrossingGraph,
    occurring: &VertexSet,
    local: &CrossingGraph,
    to_global: &[usize],
) -> bool {
    if occurring.count() != to_global.len() {
        return false;
    }
    let k = to_global.len();
    (0..k).all(|a| {
        (a + 1..k)
            .all(|b| local.graph.has_edge(a, b) == whole.graph.has_edge(to_global[a], to_global[b]))
    })
}

fn check_b_sequence(pc: &PartialCube) -> Result<std::result::Result<(), String>> {
    let b = counting::x_plus_one_expansion(&counting::cube_polynomial(pc));
    let sharp = crossing::crossing_graph_of(pc)?;
    let a = counting::clique_counts(&sharp.graph);
    Ok(ensure(
        b == a && b.first().is_some_and(|b0| *b0 == 1.into()),
        || format!("b = {b:?}, clique counts = {a:?}"),
    ))
}

fn check_expansions(sets: &[VertexSet]) -> Result<std::result::Result<(), String>> {
    let mut g = Graph::empty(1);
    for (i, s) in sets.iter().enumerate() {
        let spec = ExpansionSpec {
            v1: g.all_vertices(),
            v2: s.clone(),
        };
        if !counting::expansion_formula_check(&g, &spec)? {
            return Ok(Err(format!("step {i}: cube polynomial recursion fails")));
        }
        g = median::expansion(&g, &spec)?.graph;
    }
    Ok(Ok(()))
}

/// Contracting the class created by each expansion gives back the graph
/// before it, vertex for vertex.
fn check_contractions(sets: &[VertexSet]) -> Result<std::result::Result<(), String>> {
    let mut g = Graph::empty(1);
    for (i, s) in sets.iter().enumerate() {
        let spec = ExpansionSpec {
            v1: g.all_vertices(),
            v2: s.clone(),
        };
        let ex = median::expansion(&g, &spec)?;
        let v = s.first().ok_or(Error::EmptySet)?;
        let pc = PartialCube::new(ex.graph.clone())?;
        let e = ex
            .graph
            .edge_id(ex.first_copy[v].unwrap(), ex.second_copy[v].unwrap())
            .expect("matching edge");
        let (back, _) = median::contract_class(&pc, pc.class_of(e))?;
        if back != g {
            return Ok(Err(format!(
                "step {i}: contraction does not undo the expansion"
            )));
        }
        g = ex.graph;
    }
    Ok(Ok(()))
}

fn check_closure(g: &Graph) -> Result<std::result::Result<(), String>> {
    let trace = closure::median_closure(g)?;
    let polys: Vec<Polynomial> = trace
        .rounds
        .iter()
        .map(|r| PartialCube::new(r.graph.clone()).map(|pc| counting::cube_polynomial(&pc)))
        .collect::<Result<_>>()?;
    for (i, w) in polys.windows(2).enumerate() {
        let grew = trace.rounds[i + 1].graph.vertex_count() > trace.rounds[i].graph.vertex_count();
        let ok = if grew { w[0].lt(&w[1]) } else { w[0] == w[1] };
        if !ok {
            return Ok(Err(format!("round {i}: {} then {}", w[0], w[1])));
        }
    }
    let preserved = closure::crossing_graph_preserved(g, &trace)?;
    Ok(ensure(preserved, || {
        "closure changed the crossing graph".into()
    }))
}

fn check_shapes(polys: &[Polynomial]) -> std::result::Result<(), String> {
    for p in polys {
        if p.is_log_concave() && !p.has_internal_zeros() && !p.is_unimodal() {
            return Err(format!(
                "{p} is log-concave without internal zeros yet not unimodal"
            ));
        }
    }
    Ok(())
}

/// Pass and fail counts per check over a whole corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

pub fn tally<'a, I: IntoIterator<Item = &'a CheckResult>>(
    results: I,
) -> BTreeMap<&'static str, Tally> {
    let mut out: BTreeMap<&'static str, Tally> = BTreeMap::new();
    for r in results {
        let t = out.entry(r.check).or_default();
        if r.passed {
            t.passed += 1;
        } else {
            t.failed += 1;
        }
    }
    out
}
