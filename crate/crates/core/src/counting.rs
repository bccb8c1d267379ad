//! Cube and clique polynomials, with independent oracles, and the checks
//! relating the cube polynomial of a partial cube to the clique polynomial of
//! its crossing graph.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::bitset::{BitSet, Label, VertexSet};
use crate::crossing;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::median::{self, ExpansionSpec};
use crate::polynomial::Polynomial;
use crate::theta::PartialCube;

/// The oracle refuses to hold more induced cubes than this per level.
pub const DEFAULT_ORACLE_CUBE_LIMIT: usize = 2048;

/// `C(G, x)` of a partial cube, counting induced cubes through labels.
///
/// Every induced cube is keyed by its coordinatewise-minimal corner `u` and
/// its ascending set of free coordinates; the search extends the coordinate
/// set one coordinate at a time and keeps it only if every label of the
/// enlarged subcube is a vertex. Isometric subgraphs of a hypercube are
/// induced, so every such subcube is an induced cube of `G`.
pub fn cube_polynomial(pc: &PartialCube) -> Polynomial {
    let labels = &pc.embedding.labels;
    let present: HashSet<&Label> = labels.iter().collect();
    let mut counts: Vec<u64> = Vec::new();
    for u in 0..labels.len() {
        // coordinates along which u can rise
        let up: Vec<usize> = pc
            .graph
            .neighbors(u)
            .iter()
            .filter_map(|&w| {
                let c = labels[u].xor(&labels[w]).first().unwrap();
                (!labels[u].contains(c)).then_some(c)
            })
            .collect();
        let mut up = up;
        up.sort_unstable();
        grow_cubes(&present, &up, 0, vec![labels[u].clone()], &mut counts);
    }
    Polynomial::new(counts.into_iter().map(BigUint::from).collect())
}

fn grow_cubes(
    present: &HashSet<&Label>,
    up: &[usize],
    start: usize,
    cube: Vec<Label>,
    counts: &mut Vec<u64>,
) {
    let dim = cube.len().trailing_zeros() as usize;
    if counts.len() <= dim {
        counts.resize(dim + 1, 0);
    }
    counts[dim] += 1;
    for (i, &c) in up.iter().enumerate().skip(start) {
        let lifted: Vec<Label> = cube.iter().map(|l| l.with_toggled(c)).collect();
        if lifted.iter().all(|l| present.contains(l)) {
            let mut bigger = cube.clone();
            bigger.extend(lifted);
            grow_cubes(present, up, i + 1, bigger, counts);
        }
    }
}

/// Induced hypercubes of an arbitrary graph, found level by level: an induced
/// `Q_k` is two disjoint induced `Q_{k-1}` joined by a perfect matching that
/// is an isomorphism between them and is the only set of edges between them.
/// Returns `C(G, x)` up to dimension `max_dim`.
pub fn cube_polynomial_oracle(g: &Graph, max_dim: usize) -> Result<Polynomial> {
    cube_polynomial_oracle_with_limit(g, max_dim, DEFAULT_ORACLE_CUBE_LIMIT)
}

pub fn cube_polynomial_oracle_with_limit(
    g: &Graph,
    max_dim: usize,
    limit: usize,
) -> Result<Polynomial> {
    let n = g.vertex_count();
    let mut counts = vec![BigUint::from(n)];
    // each cube is its sorted vertex list
    let mut level: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut dim = 0;
    while dim < max_dim && !level.is_empty() {
        if level.len() > limit {
            return Err(Error::GuardExceeded {
                what: "induced cubes per level",
                limit,
            });
        }
        let mut containing: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, cube) in level.iter().enumerate() {
            for &v in cube {
                containing.entry(v).or_default().push(i);
            }
        }
        let mut next: BTreeSet<Vec<VertexId>> = BTreeSet::new();
        for a in &level {
            let a0 = a[0];
            for &b0 in g.neighbors(a0) {
                if a.contains(&b0) {
                    continue;
                }
                for &j in containing.get(&b0).map(Vec::as_slice).unwrap_or(&[]) {
                    let b = &level[j];
                    if let Some(joined) = join_cubes(g, a, b) {
                        next.insert(joined);
                    }
                }
            }
        }
        dim += 1;
        level = next.into_iter().collect();
        if !level.is_empty() {
            counts.push(BigUint::from(level.len()));
        }
    }
    Ok(Polynomial::new(counts))
}

fn join_cubes(g: &Graph, a: &[VertexId], b: &[VertexId]) -> Option<Vec<VertexId>> {
    if a.iter().any(|v| b.contains(v)) {
        return None;
    }
    let mut partner = Vec::with_capacity(a.len());
    for &x in a {
        let mut hits = g.neighbors(x).iter().filter(|w| b.contains(w));
        let y = *hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        partner.push(y);
    }
    let mut sorted = partner.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != b.len() {
        return None;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if g.has_edge(a[i], a[j]) != g.has_edge(partner[i], partner[j]) {
                return None;
            }
        }
    }
    let mut all: Vec<VertexId> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    Some(all)
}

/// `Cl(G, x)` by the vertex-deletion recursion
/// `Cl(G) = Cl(G - v) + x Cl(G[N(v)])` with `v` the least vertex and
/// `Cl(empty graph) = 1`. Subproblems are vertex subsets of `G`, memoized for
/// the duration of the call.
pub fn clique_polynomial_recursive(g: &Graph) -> Polynomial {
    let nbrs: Vec<VertexSet> = g
        .vertices()
        .map(|v| VertexSet::from_indices(g.vertex_count(), g.neighbors(v).iter().copied()))
        .collect();
    let mut memo = HashMap::new();
    clique_rec(&g.all_vertices(), &nbrs, &mut memo)
}

fn clique_rec(
    set: &BitSet,
    nbrs: &[VertexSet],
    memo: &mut HashMap<BitSet, Polynomial>,
) -> Polynomial {
    let Some(v) = set.first() else {
        return Polynomial::one();
    };
    if let Some(p) = memo.get(set) {
        return p.clone();
    }
    let mut rest = set.clone();
    rest.remove(v);
    let link = rest.and(&nbrs[v]);
    let without = clique_rec(&rest, nbrs, memo);
    let through = clique_rec(&link, nbrs, memo).shift_degree(1);
    let out = without.add(&through);
    memo.insert(set.clone(), out.clone());
    out
}

/// `Cl(G, x)` by direct enumeration of cliques; `a_0 = 1` counts the empty
/// clique.
pub fn clique_polynomial_enumerate(g: &Graph) -> Polynomial {
    let mut counts: Vec<u64> = Vec::new();
    g.for_each_clique(|c| {
        if counts.len() <= c.len() {
            counts.resize(c.len() + 1, 0);
        }
        counts[c.len()] += 1;
        true
    });
    Polynomial::new(counts.into_iter().map(BigUint::from).collect())
}

/// Both sides of `C(G, x) <= Cl(G#, x + 1)` for a partial cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub is_partial_cube: bool,
    pub idim: Option<usize>,
    pub cube_poly: Option<Polynomial>,
    pub crossing_clique_shifted: Option<Polynomial>,
    pub leq_holds: Option<bool>,
    pub equality: Option<bool>,
    pub is_median: Option<bool>,
}

impl TheoremReport {
    /// The theorem's prediction holds: `<=`, with equality exactly for
    /// median graphs. Vacuously true for graphs that are not partial cubes.
    pub fn consistent(&self) -> bool {
        if !self.is_partial_cube {
            return true;
        }
        self.leq_holds == Some(true) && self.equality.is_some() && self.equality == self.is_median
    }
}

pub fn verify_theorem(g: &Graph) -> Result<TheoremReport> {
    if g.vertex_count() == 1 {
        return Err(Error::TrivialGraph);
    }
    let pc = match PartialCube::new(g.clone()) {
        Ok(pc) => pc,
        Err(Error::NotPartialCube(_)) => {
            return Ok(TheoremReport {
                is_partial_cube: false,
                idim: None,
                cube_poly: None,
                crossing_clique_shifted: None,
                leq_holds: None,
                equality: None,
                is_median: None,
            })
        }
        Err(e) => return Err(e),
    };
    verify_theorem_for(&pc)
}

pub fn verify_theorem_for(pc: &PartialCube) -> Result<TheoremReport> {
    let cube = cube_polynomial(pc);
    let sharp = crossing::crossing_graph_of(pc)?;
    let shifted = clique_polynomial_enumerate(&sharp.graph).shift(1u32);
    let is_median = median::all_u_sides_convex(pc);
    Ok(TheoremReport {
        is_partial_cube: true,
        idim: Some(pc.idim()),
        leq_holds: Some(cube.leq(&shifted)),
        equality: Some(cube == shifted),
        cube_poly: Some(cube),
        crossing_clique_shifted: Some(shifted),
        is_median: Some(is_median),
    })
}

/// Checks the cube-polynomial recursions on one expansion of a partial cube:
/// `C(G*) = C(G1) + C(G2) + x C(G0)` and, for a peripheral expansion over
/// `G0 = G2`, `C(G*) = C(G1) + (x + 1) C(G0)`. The first identity needs
/// `{G1, G2}` to be a cubical cover, which every peripheral expansion is.
pub fn expansion_formula_check(g: &Graph, spec: &ExpansionSpec) -> Result<bool> {
    let expanded = median::expansion(g, spec)?;
    let cube_of = |graph: Graph| -> Result<Polynomial> {
        if graph.vertex_count() == 0 {
            return Ok(Polynomial::zero());
        }
        Ok(cube_polynomial(&PartialCube::new(graph)?))
    };
    let c_star = cube_of(expanded.graph)?;
    let c1 = cube_of(g.induced_subgraph(&spec.v1).0)?;
    let c2 = cube_of(g.induced_subgraph(&spec.v2).0)?;
    let c0 = cube_of(g.induced_subgraph(&spec.v0()).0)?;
    let general = c1.add(&c2).add(&c0.shift_degree(1));
    let mut ok = c_star == general;
    if spec.is_peripheral() {
        let g1 = if spec.v0() == spec.v2 { &c1 } else { &c2 };
        ok &= c_star == g1.add(&Polynomial::x_plus(1u32).mul(&c0));
    }
    Ok(ok)
}

/// Coefficients of `P` in the basis `(x + 1)^i`, by repeated synthetic
/// division by `x + 1`. Signed, so it also serves on arbitrary inputs.
pub fn x_plus_one_expansion(p: &Polynomial) -> Vec<BigInt> {
    let mut cur: Vec<BigInt> = p.coeffs().iter().map(|c| BigInt::from(c.clone())).collect();
    let mut out = Vec::with_capacity(cur.len());
    while !cur.is_empty() {
        // divide by (x + 1): quotient q, remainder r = P(-1)
        let deg = cur.len() - 1;
        let mut q = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for i in (0..=deg).rev() {
            let val = &cur[i] - &carry;
            if i == 0 {
                out.push(val);
            } else {
                q[i - 1] = val.clone();
                carry = val;
            }
        }
        cur = q;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Clique counts `a_i(H)` as signed integers, for comparison with
/// [`x_plus_one_expansion`].
pub fn clique_counts(h: &Graph) -> Vec<BigInt> {
    clique_polynomial_enumerate(h)
        .coeffs()
        .iter()
        .map(|c| BigInt::from(c.clone()))
        .collect()
}

/// `(x + 1)^n + m x`, the clique polynomial of `K_n` plus `m` isolated
/// vertices.
pub fn clique_family_closed_form(n: u32, m: u64) -> Polynomial {
    Polynomial::x_plus(1u32)
        .pow(n)
        .add(&Polynomial::x().scale(m))
}

/// `(x + 2)^n + m (x + 1)`, the cube polynomial of `Q_n` with `m` pendant
/// vertices.
pub fn cube_family_closed_form(n: u32, m: u64) -> Polynomial {
    Polynomial::x_plus(2u32)
        .pow(n)
        .add(&Polynomial::x_plus(1u32).scale(m))
}

/// Checks `Cl(H) = Cl(H - v) + x Cl(H[N(v)])` at every vertex of `h`, with
/// every side computed by enumeration.
pub fn clique_recursion_holds(h: &Graph) -> bool {
    let whole = clique_polynomial_enumerate(h);
    h.vertices().all(|v| {
        let minus = clique_polynomial_enumerate(&h.remove_vertex(v));
        let link_set = VertexSet::from_indices(h.vertex_count(), h.neighbors(v).iter().copied());
        let link = clique_polynomial_enumerate(&h.induced_subgraph(&link_set).0);
        whole == minus.add(&link.shift_degree(1))
    })
}
