//! Median-graph recognition and the expansion/contraction machinery.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metric::DistanceMatrix;
use crate::theta::{ClassId, PartialCube};

/// Median test straight from the definition: every triple of distinct
/// vertices has exactly one median.
pub fn is_median_by_triples(g: &Graph, d: &DistanceMatrix) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = g.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            let duv = d.get(u, v);
            let between: Vec<VertexId> = (0..n)
                .filter(|&x| d.get(u, x) + d.get(x, v) == duv)
                .collect();
            for w in v + 1..n {
                let (duw, dvw) = (d.get(u, w), d.get(v, w));
                let mut count = 0;
                for &x in &between {
                    let dxw = d.get(x, w);
                    if d.get(u, x) + dxw == duw && d.get(v, x) + dxw == dvw {
                        count += 1;
                        if count > 1 {
                            return Ok(false);
                        }
                    }
                }
                if count == 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Median test via partial cubes: every `U` side of every Θ-class induces a
/// convex subgraph.
pub fn is_median_by_convex_u(g: &Graph) -> bool {
    match PartialCube::new(g.clone()) {
        Ok(pc) => all_u_sides_convex(&pc),
        Err(_) => false,
    }
}

pub fn all_u_sides_convex(pc: &PartialCube) -> bool {
    (0..pc.idim()).all(|c| {
        let s = pc.sides(c).expect("valid class");
        pc.is_convex(&s.u_ab) && pc.is_convex(&s.u_ba)
    })
}

/// A cover `V1 ∪ V2 = V(G)` describing one expansion step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub v1: VertexSet,
    pub v2: VertexSet,
}

impl ExpansionSpec {
    pub fn v0(&self) -> VertexSet {
        self.v1.and(&self.v2)
    }

    /// Rejects any cover that is not a valid expansion of `g`.
    pub fn validate(&self, g: &Graph, d: &DistanceMatrix) -> Result<()> {
        let n = g.vertex_count();
        if self.v1.universe() != n || self.v2.universe() != n {
            return Err(Error::InvalidExpansion(
                "vertex sets sized for another graph".into(),
            ));
        }
        let mut cover = self.v1.clone();
        cover.union_with(&self.v2);
        if cover.count() != n {
            return Err(Error::InvalidExpansion(
                "V1 and V2 do not cover V(G)".into(),
            ));
        }
        if self.v0().is_empty() {
            return Err(Error::InvalidExpansion("V1 and V2 do not intersect".into()));
        }
        for &(u, v) in g.edges() {
            let only1 = |x| self.v1.contains(x) && !self.v2.contains(x);
            let only2 = |x| self.v2.contains(x) && !self.v1.contains(x);
            if (only1(u) && only2(v)) || (only2(u) && only1(v)) {
                return Err(Error::InvalidExpansion(format!(
                    "edge ({u}, {v}) joins V1 \\ V2 to V2 \\ V1"
                )));
            }
        }
        if !d.is_isometric(g, &self.v1) {
            return Err(Error::InvalidExpansion("G[V1] is not isometric".into()));
        }
        if !d.is_isometric(g, &self.v2) {
            return Err(Error::InvalidExpansion("G[V2] is not isometric".into()));
        }
        Ok(())
    }

    pub fn is_peripheral(&self) -> bool {
        let v0 = self.v0();
        v0 == self.v1 || v0 == self.v2
    }
}

/// Result of an expansion: the new graph plus where each old vertex went.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub graph: Graph,
    /// Old vertex -> its copy in the `V1` half, if it belongs to `V1`.
    pub first_copy: Vec<Option<VertexId>>,
    /// Old vertex -> its copy in the `V2` half, if it belongs to `V2`.
    pub second_copy: Vec<Option<VertexId>>,
}

/// Disjoint copies of `G[V1]` and `G[V2]` joined by a matching between the
/// two copies of `V0`. The `V1` copy takes ids `0..|V1|` in ascending order,
/// the `V2` copy follows.
pub fn expansion(g: &Graph, spec: &ExpansionSpec) -> Result<Expansion> {
    let d = DistanceMatrix::new(g);
    spec.validate(g, &d)?;
    let (g1, first_copy) = g.induced_subgraph(&spec.v1);
    let (g2, map2) = g.induced_subgraph(&spec.v2);
    let shift = g1.vertex_count();
    let second_copy: Vec<Option<VertexId>> = map2.iter().map(|m| m.map(|x| x + shift)).collect();
    let mut edges: Vec<(VertexId, VertexId)> = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
    for v in spec.v0().iter() {
        edges.push((first_copy[v].unwrap(), second_copy[v].unwrap()));
    }
    Ok(Expansion {
        graph: Graph::from_valid_edges(shift + g2.vertex_count(), edges),
        first_copy,
        second_copy,
    })
}

/// Expansion with `V1 = V(G)` and `V2 = S` for a convex `S`.
pub fn peripheral_convex_expansion(
    g: &Graph,
    d: &DistanceMatrix,
    set: &VertexSet,
) -> Result<Expansion> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if !d.is_convex(g, set) {
        return Err(Error::NotConvex);
    }
    expansion(
        g,
        &ExpansionSpec {
            v1: g.all_vertices(),
            v2: set.clone(),
        },
    )
}

/// Identifies the endpoints of every edge of class `c`. Vertices of the
/// result are numbered by the least original vertex they absorb.
pub fn contract_class(pc: &PartialCube, c: ClassId) -> Result<(Graph, Vec<VertexId>)> {
    pc.check_class(c)?;
    let g = &pc.graph;
    let n = g.vertex_count();
    let mut rep: Vec<VertexId> = (0..n).collect();
    for &e in pc.class_edges(c) {
        let (u, v) = g.edge(e);
        // a Θ-class is a matching, so each vertex merges at most once
        let r = rep[u].min(rep[v]);
        rep[u] = r;
        rep[v] = r;
    }
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if rep[v] == v {
            new_id[v] = next;
            next += 1;
        }
    }
    let map: Vec<VertexId> = (0..n).map(|v| new_id[rep[v]]).collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| pc.class_of(e) != c)
        .map(|(_, &(u, v))| (map[u], map[v]))
        .collect();
    Ok((Graph::from_valid_edges(next, edges), map))
}

/// Least class with `U_ab = W_ab` or `U_ba = W_ba`.
pub fn find_peripheral_class(pc: &PartialCube) -> Option<ClassId> {
    (0..pc.idim()).find(|&c| {
        let s = pc.sides(c).expect("valid class");
        s.u_ab == s.w_ab || s.u_ba == s.w_ba
    })
}

/// One contraction of a peripheral decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionStep {
    /// The class removed from the larger graph.
    pub class: ClassId,
    /// Vertex count of the larger graph.
    pub before: usize,
    /// The larger graph's vertices mapped into the contracted graph.
    pub contraction: Vec<VertexId>,
    /// The larger graph's vertices on the peripheral side.
    pub peripheral_side: VertexSet,
    /// Convex set of the contracted graph to expand over; the image of the
    /// peripheral side.
    pub convex_set: VertexSet,
}

/// Peripheral decomposition of a median graph down to `K1`, largest graph
/// first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeripheralDecomposition {
    pub steps: Vec<DecompositionStep>,
}

pub fn peripheral_decomposition(g: &Graph) -> Result<PeripheralDecomposition> {
    let mut current = g.clone();
    let mut steps = Vec::new();
    while current.vertex_count() > 1 {
        let pc = PartialCube::new(current)?;
        let c = find_peripheral_class(&pc).ok_or(Error::NoPeripheralClass {
            vertices: pc.graph.vertex_count(),
        })?;
        let s = pc.sides(c)?;
        let peripheral_side = if s.u_ab == s.w_ab { s.w_ab } else { s.w_ba };
        let (smaller, map) = contract_class(&pc, c)?;
        let convex_set = VertexSet::from_indices(
            smaller.vertex_count(),
            peripheral_side.iter().map(|v| map[v]),
        );
        let d = DistanceMatrix::new(&smaller);
        if !d.is_convex(&smaller, &convex_set) {
            return Err(Error::NotConvex);
        }
        steps.push(DecompositionStep {
            class: c,
            before: pc.graph.vertex_count(),
            contraction: map,
            peripheral_side,
            convex_set,
        });
        current = smaller;
    }
    if current.vertex_count() == 0 {
        return Err(Error::InvalidParameter(
            "empty graph has no decomposition".into(),
        ));
    }
    Ok(PeripheralDecomposition { steps })
}

impl PeripheralDecomposition {
    /// Replays the steps from `K1` with peripheral convex expansions. Returns
    /// the rebuilt graph and, for each of its vertices, the vertex of the
    /// decomposed graph it stands for.
    pub fn replay(&self) -> Result<(Graph, Vec<VertexId>)> {
        let mut g = Graph::empty(1);
        // rebuilt vertex -> vertex of the graph at the current level
        let mut to_level: Vec<VertexId> = vec![0];
        for step in self.steps.iter().rev() {
            let d = DistanceMatrix::new(&g);
            // the replay graph and the contracted graph are matched through to_level
            let mut set = VertexSet::new(g.vertex_count());
            for (rebuilt, &lvl) in to_level.iter().enumerate() {
                if step.convex_set.contains(lvl) {
                    set.insert(rebuilt);
                }
            }
            let ex = peripheral_convex_expansion(&g, &d, &set)?;
            // contracted vertex -> the larger graph's vertex on each side
            let mut keep_side = vec![usize::MAX; step.convex_set.universe()];
            let mut far_side = vec![usize::MAX; step.convex_set.universe()];
            for v in 0..step.before {
                let img = step.contraction[v];
                if step.peripheral_side.contains(v) {
                    far_side[img] = v;
                } else {
                    keep_side[img] = v;
                }
            }
            let mut next = vec![usize::MAX; ex.graph.vertex_count()];
            for (old, &lvl) in to_level.iter().enumerate() {
                next[ex.first_copy[old].unwrap()] = keep_side[lvl];
                if let Some(copy) = ex.second_copy[old] {
                    next[copy] = far_side[lvl];
                }
            }
            if next.contains(&usize::MAX) {
                return Err(Error::Internal("replay lost track of a vertex".into()));
            }
            g = ex.graph;
            to_level = next;
        }
        Ok((g, to_level))
    }

    /// Whether replaying reproduces `g` under the tracked vertex bijection.
    pub fn reproduces(&self, g: &Graph) -> Result<bool> {
        let (rebuilt, map) = self.replay()?;
        if rebuilt.vertex_count() != g.vertex_count() || rebuilt.edge_count() != g.edge_count() {
            return Ok(false);
        }
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if std::mem::replace(&mut seen[v], true) {
                return Ok(false);
            }
        }
        Ok(rebuilt
            .edges()
            .iter()
            .all(|&(u, v)| g.has_edge(map[u], map[v])))
    }
}
