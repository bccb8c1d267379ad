//! Deterministic fixtures and seeded random families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::median;
use crate::metric::DistanceMatrix;

pub const MAX_HYPERCUBE_DIM: usize = 20;
pub const DEFAULT_VERTEX_LIMIT: usize = 200_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Q_n`; vertex `v` has label `v`, coordinate `b` is bit `b`.
pub fn hypercube(n: usize) -> Result<Graph> {
    if n > MAX_HYPERCUBE_DIM {
        return Err(Error::InvalidParameter(format!(
            "hypercube dimension {n} exceeds {MAX_HYPERCUBE_DIM}"
        )));
    }
    let size = 1usize << n;
    let mut edges = Vec::with_capacity(n * size / 2);
    for v in 0..size {
        for b in 0..n {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Ok(Graph::from_valid_edges(size, edges))
}

/// `C_{2k}`.
pub fn even_cycle(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "even_cycle needs k >= 2, got {k}"
        )));
    }
    let n = 2 * k;
    Ok(Graph::from_valid_edges(
        n,
        (0..n).map(|i| (i, (i + 1) % n)).collect(),
    ))
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    Ok(Graph::from_valid_edges(
        n,
        (1..n).map(|i| (i - 1, i)).collect(),
    ))
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete needs n >= 1".into()));
    }
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_valid_edges(n, edges))
}

/// Uniform attachment: vertex `i` hangs off a uniformly chosen earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("random_tree needs n >= 1".into()));
    }
    let mut r = rng(seed);
    let edges = (1..n).map(|i| (r.gen_range(0..i), i)).collect();
    Ok(Graph::from_valid_edges(n, edges))
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_valid_edges(n, edges))
}

/// A seeded random spanning tree plus independent extra edges with
/// probability `p`, so the result is always connected.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let tree = random_tree(n, seed)?;
    let extra = random_graph(n, p, seed.wrapping_add(0x9e37_79b9_7f4a_7c15))?;
    let mut edges = tree.edges().to_vec();
    edges.extend_from_slice(extra.edges());
    Ok(Graph::from_valid_edges(n, edges))
}

/// Adds `m` pendant vertices, attached round-robin starting at a seeded
/// vertex.
pub fn attach_pendants(g: &Graph, m: usize, seed: u64) -> Result<Graph> {
    let n = g.vertex_count();
    if m == 0 {
        return Ok(g.clone());
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "cannot attach pendants to the empty graph".into(),
        ));
    }
    let start = rng(seed).gen_range(0..n);
    let mut edges = g.edges().to_vec();
    edges.extend((0..m).map(|i| ((start + i) % n, n + i)));
    Ok(Graph::from_valid_edges(n + m, edges))
}

/// `K_n` together with `m` isolated vertices.
pub fn example_41(n: usize, m: usize) -> Result<Graph> {
    Ok(complete(n)?.disjoint_union(&Graph::empty(m)))
}

/// `Q_n` with `m` pendant vertices.
pub fn example_42(n: usize, m: usize) -> Result<Graph> {
    example_42_with_limit(n, m, DEFAULT_VERTEX_LIMIT)
}

pub fn example_42_with_limit(n: usize, m: usize, limit: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("example_42 needs n >= 1".into()));
    }
    let too_big = n > MAX_HYPERCUBE_DIM
        || (1usize << n)
            .checked_add(m)
            .is_none_or(|total| total > limit);
    if too_big {
        return Err(Error::GuardExceeded {
            what: "vertices (use the closed-form cube polynomial instead)",
            limit,
        });
    }
    attach_pendants(&hypercube(n)?, m, 0)
}

/// Three hexagons sharing the vertex `u4`: `u1..u6`, `u3 u7 u8 u9 u10 u4`
/// and `u5 u4 u10 u11 u12 u13`, with `u_k` numbered `k - 1`.
pub fn trihex() -> Graph {
    let cycles: [[VertexId; 6]; 3] = [
        [0, 1, 2, 3, 4, 5],
        [2, 6, 7, 8, 9, 3],
        [4, 3, 9, 10, 11, 12],
    ];
    let edges = cycles
        .iter()
        .flat_map(|c| (0..6).map(move |i| (c[i], c[(i + 1) % 6])))
        .collect();
    Graph::from_valid_edges(13, edges)
}

/// `Q_n` without the all-ones vertex.
pub fn hypercube_minus_vertex(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "hypercube_minus_vertex needs n >= 2, got {n}"
        )));
    }
    let q = hypercube(n)?;
    Ok(q.remove_vertex(q.vertex_count() - 1))
}

/// Median graph grown from `K_1` by `steps` peripheral convex expansions,
/// each over the convex hull of one to three random vertices.
pub fn random_median_graph(steps: usize, seed: u64) -> Result<Graph> {
    random_median_graph_traced(steps, seed).map(|(g, _)| g)
}

/// As [`random_median_graph`], also returning the convex set expanded at
/// each step, in terms of the graph at that step.
pub fn random_median_graph_traced(steps: usize, seed: u64) -> Result<(Graph, Vec<VertexSet>)> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "random_median_graph needs steps >= 1".into(),
        ));
    }
    let mut r = rng(seed);
    let mut g = Graph::empty(1);
    let mut sets = Vec::with_capacity(steps);
    for _ in 0..steps {
        let n = g.vertex_count();
        let d = DistanceMatrix::new(&g);
        let k = r.gen_range(1..=3usize).min(n);
        let picks: Vec<VertexId> = (0..n)
            .collect::<Vec<_>>()
            .choose_multiple(&mut r, k)
            .copied()
            .collect();
        let hull = d.convex_hull_in(&g, &VertexSet::from_indices(n, picks))?;
        g = median::peripheral_convex_expansion(&g, &d, &hull)?.graph;
        sets.push(hull);
    }
    if !median::is_median_by_convex_u(&g) {
        return Err(Error::Internal(
            "random expansion produced a non-median graph".into(),
        ));
    }
    Ok((g, sets))
}
