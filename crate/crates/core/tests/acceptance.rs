//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use partial_cubes::checks::{self, CorpusSpec};
use partial_cubes::closure;
use partial_cubes::counting;
use partial_cubes::crossing;
use partial_cubes::generators;
use partial_cubes::median;
use partial_cubes::{Graph, Polynomial};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn err(e: partial_cubes::Error) -> String {
    e.to_string()
}

/// Median graphs grown by random peripheral expansions attain equality.
fn median_equality() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for seed in 0..200u64 {
        let steps = 1 + (seed % 25) as usize;
        let g = generators::random_median_graph(steps, seed).map_err(err)?;
        let r = counting::verify_theorem(&g).map_err(err)?;
        ensure(r.is_median == Some(true), || {
            format!("seed {seed}: not median")
        })?;
        ensure(r.equality == Some(true), || {
            format!(
                "seed {seed}: {:?} != {:?}",
                r.cube_poly.as_ref().map(ToString::to_string),
                r.crossing_clique_shifted.as_ref().map(ToString::to_string)
            )
        })?;
        count += 1;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{count} median graphs, exact equality, {took:.2?}"))
}

/// Non-median partial cubes fall strictly below the shifted clique polynomial.
fn strict_inequality() -> Outcome {
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for k in 3..=8 {
        graphs.push((
            format!("C{}", 2 * k),
            generators::even_cycle(k).map_err(err)?,
        ));
    }
    for n in 3..=6 {
        graphs.push((
            format!("Q{n} minus a vertex"),
            generators::hypercube_minus_vertex(n).map_err(err)?,
        ));
    }
    graphs.push(("trihex".into(), generators::trihex()));
    for (name, g) in &graphs {
        let r = counting::verify_theorem(g).map_err(err)?;
        let (c, s) = (r.cube_poly.unwrap(), r.crossing_clique_shifted.unwrap());
        ensure(c.lt(&s), || format!("{name}: {c} not strictly below {s}"))?;
        ensure(r.is_median == Some(false), || {
            format!("{name}: reported median")
        })?;
    }
    Ok(format!("{} graphs strictly below", graphs.len()))
}

/// The median closure of three glued hexagons.
fn trihex_closure() -> Outcome {
    let g = generators::trihex();
    let trace = closure::median_closure(&g).map_err(err)?;
    let counts = trace.vertex_counts();
    ensure(counts == [13, 19, 20], || format!("rounds {counts:?}"))?;
    ensure(trace.stabilization_index() == 2, || {
        format!("stabilizes at {}", trace.stabilization_index())
    })?;
    ensure(median::is_median_by_convex_u(trace.final_graph()), || {
        "closure is not median".into()
    })?;
    ensure(
        closure::crossing_graph_preserved(&g, &trace).map_err(err)?,
        || "crossing graph changed".into(),
    )?;
    Ok("rounds 13 -> 19 -> 20, stabilizes at 2, median, same crossing graph".into())
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Shape {
    LogConcave,
    UnimodalOnly,
    NotUnimodal,
}

fn shape(p: &Polynomial) -> Shape {
    if p.is_log_concave() {
        Shape::LogConcave
    } else if p.is_unimodal() {
        Shape::UnimodalOnly
    } else {
        Shape::NotUnimodal
    }
}

/// `(x + 1)^6 + m x` across the log-concavity and unimodality boundaries.
fn clique_family_thresholds() -> Outcome {
    let n = 6u32;
    let lc_bound = (n * n + n) / (2 * n - 4);
    let uni_bound = (n * n - 3 * n) / 2;
    ensure(lc_bound == 5 && uni_bound == 9, || {
        format!("bounds {lc_bound}, {uni_bound}")
    })?;
    let want = [
        (5, Shape::LogConcave),
        (6, Shape::UnimodalOnly),
        (9, Shape::UnimodalOnly),
        (10, Shape::NotUnimodal),
    ];
    for (m, expect) in want {
        let p = counting::clique_family_closed_form(n, m);
        ensure(shape(&p) == expect, || format!("m = {m}: {:?}", shape(&p)))?;
        let g = generators::example_41(n as usize, m as usize).map_err(err)?;
        ensure(counting::clique_polynomial_recursive(&g) == p, || {
            format!("m = {m}: closed form differs from the graph")
        })?;
    }
    for m in 0..=30u64 {
        let got = shape(&counting::clique_family_closed_form(n, m));
        let expect = if m <= u64::from(lc_bound) {
            Shape::LogConcave
        } else if m <= u64::from(uni_bound) {
            Shape::UnimodalOnly
        } else {
            Shape::NotUnimodal
        };
        ensure(got == expect, || {
            format!("m = {m}: {got:?}, expected {expect:?}")
        })?;
    }
    Ok("m=5 log-concave, m=6 and m=9 unimodal only, m=10 not unimodal".into())
}

/// `(x + 2)^9 + m (x + 1)` boundaries, and the closed form against real graphs.
fn cube_family_thresholds() -> Outcome {
    let n = 9u64;
    let uni_bound = (n * n - 5 * n) / 2 * (1 << (n - 2)) + 1;
    let lc_bound = (n * n + n) * (1 << (n - 2)) / (n - 2);
    ensure(uni_bound == 2305 && lc_bound == 1645, || {
        format!("bounds {uni_bound}, {lc_bound}")
    })?;
    let p = |m| counting::cube_family_closed_form(9, m);
    ensure(p(2304).is_unimodal(), || "m = 2304 not unimodal".into())?;
    ensure(!p(2305).is_unimodal(), || "m = 2305 unimodal".into())?;
    ensure(p(1645).is_log_concave(), || {
        "m = 1645 not log-concave".into()
    })?;
    ensure(!p(1646).is_log_concave(), || "m = 1646 log-concave".into())?;
    for m in 0..=50u64 {
        let g = generators::example_42(3, m as usize).map_err(err)?;
        let pc = partial_cubes::PartialCube::new(g).map_err(err)?;
        let got = counting::cube_polynomial(&pc);
        let want = counting::cube_family_closed_form(3, m);
        ensure(got == want, || format!("n = 3, m = {m}: {got} vs {want}"))?;
    }
    Ok("m=2304 unimodal, m=2305 not; m=1645 log-concave, m=1646 not; n=3 closed form matches m<=50".into())
}

fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
        .collect()
}

fn canonical_form(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut edges: Vec<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap_or_default()
}

/// Every graph is the crossing graph of its simplex graph.
fn simplex_identity() -> Outcome {
    let mut checked = 0;
    let mut types_on_four = BTreeSet::new();
    for n in 1..=4 {
        for g in all_labeled_graphs(n) {
            ensure(crossing::verify_simplex_identity(&g).map_err(err)?, || {
                format!("fails on {:?}", g.edges())
            })?;
            if n == 4 {
                types_on_four.insert(canonical_form(&g));
            }
            checked += 1;
        }
    }
    ensure(types_on_four.len() == 11, || {
        format!("{} isomorphism types on 4 vertices", types_on_four.len())
    })?;
    for seed in 0..50u64 {
        let n = 5 + (seed % 4) as usize;
        let g = generators::random_graph(n, 0.5, seed).map_err(err)?;
        ensure(crossing::verify_simplex_identity(&g).map_err(err)?, || {
            format!("fails on random graph seed {seed}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} graphs, all 11 types on 4 vertices covered"
    ))
}

fn corpus_tally() -> Result<std::collections::BTreeMap<&'static str, checks::Tally>, String> {
    let items = CorpusSpec::default_corpus().items().map_err(err)?;
    let results: Vec<_> = items
        .iter()
        .flat_map(|item| {
            checks::run_suite(item)
                .into_iter()
                .map(move |r| (item.name.clone(), r))
        })
        .collect();
    if let Some((name, r)) = results.iter().find(|(_, r)| !r.passed) {
        return Err(format!("{name}: {} failed: {:?}", r.check, r.detail));
    }
    Ok(checks::tally(results.iter().map(|(_, r)| r)))
}

fn require_checks(
    tally: &std::collections::BTreeMap<&'static str, checks::Tally>,
    names: &[&str],
) -> Outcome {
    let mut parts = Vec::new();
    for &name in names {
        let t = tally.get(name).cloned().unwrap_or_default();
        ensure(t.passed > 0 && t.failed == 0, || format!("{name}: {t:?}"))?;
        parts.push(format!("{name} {}", t.passed));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let corpus = corpus_tally();
    let from_corpus = |names: &'static [&'static str]| -> Outcome {
        let tally = corpus.as_ref().map_err(Clone::clone)?;
        require_checks(tally, names)
    };
    let hull_subgraphs = || -> Outcome {
        let tally = corpus.as_ref().map_err(Clone::clone)?;
        let graphs = tally.get("hull_occurrence").map_or(0, |t| t.passed);
        let subgraphs = graphs * checks::SUBGRAPHS_PER_GRAPH;
        ensure(subgraphs >= 100, || format!("only {subgraphs} subgraphs"))?;
        Ok(format!("{subgraphs} seeded connected subgraphs"))
    };

    let criteria: Vec<Criterion> = vec![
        ("1 median graphs attain equality", Box::new(median_equality)),
        (
            "2 non-median partial cubes are strict",
            Box::new(strict_inequality),
        ),
        ("3 trihex closure trace", Box::new(trihex_closure)),
        (
            "4 clique family thresholds",
            Box::new(clique_family_thresholds),
        ),
        ("5 cube family thresholds", Box::new(cube_family_thresholds)),
        ("6 simplex graph identity", Box::new(simplex_identity)),
        (
            "7 oracle equivalences",
            Box::new(move || {
                from_corpus(&[
                    "cube_oracle",
                    "clique_oracle",
                    "crossing_tests_agree",
                    "median_recognizers",
                ])
            }),
        ),
        (
            "8 structural identities",
            Box::new(move || {
                let named = from_corpus(&[
                    "w_sides_convex",
                    "u_sides_isomorphic",
                    "hull_occurrence",
                    "convex_crossing_subgraph",
                    "expansion_recursions",
                    "b_equals_clique_counts",
                ])?;
                Ok(format!("{named}; {}", hull_subgraphs()?))
            }),
        ),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
