//! Crossing of Θ-classes, crossing graphs, isometric cycles and simplex graphs.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metric::DistanceMatrix;
use crate::theta::{ClassId, PartialCube};

/// Isometric cycle search refuses graphs with more vertices than this.
pub const DEFAULT_CYCLE_VERTEX_LIMIT: usize = 4096;

/// Simplex graph construction refuses inputs with more cliques than this.
pub const DEFAULT_CLIQUE_LIMIT: usize = 1 << 20;

/// A cycle whose cyclic distances agree with graph distances, stored in
/// canonical form: starts at its least vertex, and the second vertex is
/// smaller than the last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IsometricCycle {
    vertices: Vec<VertexId>,
}

impl IsometricCycle {
    /// Canonicalizes an arbitrary rotation or reflection of a cycle.
    pub fn from_cyclic(seq: &[VertexId]) -> IsometricCycle {
        IsometricCycle {
            vertices: canonical_rotation(seq),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_indices(n, self.vertices.iter().copied())
    }

    /// Consecutive vertex pairs including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Checks every pair of positions: cyclic distance equals graph distance.
    pub fn is_isometric_in(&self, d: &DistanceMatrix) -> bool {
        let k = self.vertices.len();
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let cyc = (j - i).min(k - (j - i)) as u32;
                d.get(self.vertices[i], self.vertices[j]) == cyc
            })
        })
    }
}

fn canonical_rotation(seq: &[VertexId]) -> Vec<VertexId> {
    let k = seq.len();
    if k == 0 {
        return Vec::new();
    }
    let start = (0..k).min_by_key(|&i| seq[i]).unwrap();
    let fwd: Vec<_> = (0..k).map(|i| seq[(start + i) % k]).collect();
    let bwd: Vec<_> = (0..k).map(|i| seq[(start + k - i) % k]).collect();
    fwd.min(bwd)
}

/// All isometric cycles, each exactly once, sorted by canonical form.
pub fn isometric_cycles(g: &Graph, d: &DistanceMatrix) -> Result<Vec<IsometricCycle>> {
    isometric_cycles_with_limit(g, d, DEFAULT_CYCLE_VERTEX_LIMIT)
}

/// Depth-first growth of paths from each anchor (the least vertex of the
/// cycle), one target length at a time. A vertex at position `j` must sit at
/// graph distance `min(j - i, L - (j - i))` from every earlier position `i`,
/// which both prunes the search and certifies isometry when the path closes.
pub fn isometric_cycles_with_limit(
    g: &Graph,
    d: &DistanceMatrix,
    max_vertices: usize,
) -> Result<Vec<IsometricCycle>> {
    let n = g.vertex_count();
    if n > max_vertices {
        return Err(Error::GuardExceeded {
            what: "vertex count for isometric cycle enumeration",
            limit: max_vertices,
        });
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let bipartite = g.is_bipartite();
    let max_len = 2 * d.diameter() as usize + 1;
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    let mut on_path = vec![false; n];
    for anchor in 0..n {
        for len in 3..=max_len {
            if bipartite && len % 2 == 1 {
                continue;
            }
            path.clear();
            path.push(anchor);
            on_path[anchor] = true;
            grow_cycle(g, d, len, &mut path, &mut on_path, &mut out);
            on_path[anchor] = false;
        }
    }
    out.sort();
    Ok(out)
}

fn grow_cycle(
    g: &Graph,
    d: &DistanceMatrix,
    len: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    out: &mut Vec<IsometricCycle>,
) {
    let j = path.len();
    if j == len {
        // closing edge was already checked through d(p0, p_last) = 1
        if path[1] < path[len - 1] {
            out.push(IsometricCycle {
                vertices: path.clone(),
            });
        }
        return;
    }
    let anchor = path[0];
    let last = path[j - 1];
    for &w in g.neighbors(last) {
        if w <= anchor || on_path[w] {
            continue;
        }
        let fits = path.iter().enumerate().all(|(i, &p)| {
            let gap = j - i;
            d.get(p, w) == gap.min(len - gap) as u32
        });
        if fits {
            path.push(w);
            on_path[w] = true;
            grow_cycle(g, d, len, path, on_path, out);
            on_path[w] = false;
            path.pop();
        }
    }
}

fn distinct_classes(pc: &PartialCube, c1: ClassId, c2: ClassId) -> Result<()> {
    pc.check_class(c1)?;
    pc.check_class(c2)?;
    if c1 == c2 {
        return Err(Error::SameClass(c1));
    }
    Ok(())
}

/// Crossing by the four-quadrant test on the `W` sides of both classes.
pub fn crosses_quadrant(pc: &PartialCube, c1: ClassId, c2: ClassId) -> Result<bool> {
    distinct_classes(pc, c1, c2)?;
    let (b1, b2) = (pc.embedding.class_bit[c1], pc.embedding.class_bit[c2]);
    let mut seen = [false; 4];
    for label in &pc.embedding.labels {
        let q = usize::from(label.contains(b1)) * 2 + usize::from(label.contains(b2));
        seen[q] = true;
        if seen.iter().all(|&s| s) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Crossing by joint occurrence on one of the given isometric cycles.
pub fn crosses_cycle(
    pc: &PartialCube,
    cycles: &[IsometricCycle],
    c1: ClassId,
    c2: ClassId,
) -> Result<bool> {
    distinct_classes(pc, c1, c2)?;
    Ok(cycles.iter().any(|cyc| {
        let mut has = (false, false);
        for (u, v) in cyc.edges() {
            let c = pc.class_of(pc.graph.edge_id(u, v).expect("cycle edge"));
            has.0 |= c == c1;
            has.1 |= c == c2;
        }
        has.0 && has.1
    }))
}

/// The crossing graph `G#`: one vertex per Θ-class, in class order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingGraph {
    pub graph: Graph,
    pub class_of_vertex: Vec<ClassId>,
}

pub fn crossing_graph(g: &Graph) -> Result<CrossingGraph> {
    if g.vertex_count() == 1 {
        return Err(Error::TrivialGraph);
    }
    crossing_graph_of(&PartialCube::new(g.clone())?)
}

pub fn crossing_graph_of(pc: &PartialCube) -> Result<CrossingGraph> {
    if pc.graph.vertex_count() == 1 {
        return Err(Error::TrivialGraph);
    }
    let k = pc.idim();
    let mut edges = Vec::new();
    for c1 in 0..k {
        for c2 in c1 + 1..k {
            if crosses_quadrant(pc, c1, c2)? {
                edges.push((c1, c2));
            }
        }
    }
    Ok(CrossingGraph {
        graph: Graph::from_sorted_edges(k, edges),
        class_of_vertex: (0..k).collect(),
    })
}

/// A 4-cycle `u v w x` with `uv, xw` in `c1` and `ux, vw` in `c2`, in
/// canonical form; the least such cycle when several exist.
pub fn alternating_square(
    pc: &PartialCube,
    c1: ClassId,
    c2: ClassId,
) -> Result<Option<[VertexId; 4]>> {
    distinct_classes(pc, c1, c2)?;
    let g = &pc.graph;
    let mut best: Option<Vec<VertexId>> = None;
    for &e in pc.class_edges(c1) {
        let (a, b) = g.edge(e);
        for (u, v) in [(a, b), (b, a)] {
            for (x, ux) in g.incident(u) {
                if pc.class_of(ux) != c2 {
                    continue;
                }
                for (w, vw) in g.incident(v) {
                    if pc.class_of(vw) != c2 || w == u {
                        continue;
                    }
                    if let Some(xw) = g.edge_id(x, w) {
                        if pc.class_of(xw) == c1 {
                            let canon = canonical_rotation(&[u, v, w, x]);
                            if best.as_ref().is_none_or(|b| canon < *b) {
                                best = Some(canon);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(best.map(|b| [b[0], b[1], b[2], b[3]]))
}

/// Vertices are the cliques of a graph (the empty clique included); two
/// cliques are adjacent when one is the other plus a single vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexGraph {
    pub graph: Graph,
    pub clique_of_vertex: Vec<Vec<VertexId>>,
}

pub fn simplex_graph(h: &Graph) -> Result<SimplexGraph> {
    simplex_graph_with_limit(h, DEFAULT_CLIQUE_LIMIT)
}

pub fn simplex_graph_with_limit(h: &Graph, max_cliques: usize) -> Result<SimplexGraph> {
    let mut cliques: Vec<Vec<VertexId>> = Vec::new();
    let finished = h.for_each_clique(|c| {
        cliques.push(c.to_vec());
        cliques.len() <= max_cliques
    });
    if !finished {
        return Err(Error::GuardExceeded {
            what: "clique count",
            limit: max_cliques,
        });
    }
    let index: HashMap<&[VertexId], usize> = cliques
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let mut edges = Vec::new();
    for (i, c) in cliques.iter().enumerate() {
        // link each clique to the cliques obtained by dropping one vertex
        for skip in 0..c.len() {
            let smaller: Vec<_> = c
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            edges.push((index[smaller.as_slice()], i));
        }
    }
    Ok(SimplexGraph {
        graph: Graph::from_valid_edges(cliques.len(), edges),
        clique_of_vertex: cliques,
    })
}

/// Checks `S(H)# = H` under the correspondence sending the Θ-class of an
/// edge `(K, K ∪ {v})` to the vertex `v`.
pub fn verify_simplex_identity(h: &Graph) -> Result<bool> {
    let s = simplex_graph(h)?;
    if h.vertex_count() == 0 {
        // S(H) = K1 with no classes
        return Ok(s.graph.vertex_count() == 1);
    }
    let pc = PartialCube::new(s.graph.clone())?;
    let cg = crossing_graph_of(&pc)?;
    if cg.graph.vertex_count() != h.vertex_count() {
        return Ok(false);
    }
    let mut vertex_of_class = vec![None; pc.idim()];
    for (e, &(x, y)) in pc.graph.edges().iter().enumerate() {
        let (small, big) = (&s.clique_of_vertex[x], &s.clique_of_vertex[y]);
        let (small, big) = if small.len() < big.len() {
            (small, big)
        } else {
            (big, small)
        };
        let v = *big
            .iter()
            .find(|v| !small.contains(v))
            .expect("adjacent cliques differ in one vertex");
        let slot = &mut vertex_of_class[pc.class_of(e)];
        match *slot {
            None => *slot = Some(v),
            Some(prev) if prev != v => return Ok(false),
            _ => {}
        }
    }
    let map: Vec<VertexId> = match vertex_of_class.into_iter().collect::<Option<Vec<_>>>() {
        Some(m) => m,
        None => return Ok(false),
    };
    let mut hit = vec![false; h.vertex_count()];
    for &v in &map {
        if std::mem::replace(&mut hit[v], true) {
            return Ok(false);
        }
    }
    let k = map.len();
    Ok((0..k).all(|a| (a + 1..k).all(|b| cg.graph.has_edge(a, b) == h.has_edge(map[a], map[b]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn pc(g: Graph) -> PartialCube {
        PartialCube::new(g).unwrap()
    }

    /// Every simple cycle by brute force, filtered by the pairwise test.
    fn brute_isometric_cycles(g: &Graph) -> Vec<IsometricCycle> {
        fn walk(g: &Graph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let last = *path.last().unwrap();
            for &w in g.neighbors(last) {
                if w == path[0] && path.len() >= 3 && path[1] < last {
                    out.push(path.clone());
                }
                if w > path[0] && !path.contains(&w) {
                    path.push(w);
                    walk(g, path, out);
                    path.pop();
                }
            }
        }
        let d = DistanceMatrix::new(g);
        let mut all = Vec::new();
        for s in 0..g.vertex_count() {
            walk(g, &mut vec![s], &mut all);
        }
        let mut out: Vec<_> = all
            .into_iter()
            .map(|c| IsometricCycle::from_cyclic(&c))
            .filter(|c| c.is_isometric_in(&d))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn canonical_forms() {
        let c = IsometricCycle::from_cyclic(&[5, 3, 9, 1]);
        assert_eq!(c.vertices(), &[1, 5, 3, 9]);
        let c = IsometricCycle::from_cyclic(&[1, 9, 3, 5]);
        assert_eq!(c.vertices(), &[1, 5, 3, 9]);
    }

    #[test]
    fn cycles_of_small_graphs() {
        let tree = generators::random_tree(9, 4).unwrap();
        assert!(isometric_cycles(&tree, &DistanceMatrix::new(&tree))
            .unwrap()
            .is_empty());

        let c6 = generators::even_cycle(3).unwrap();
        let cyc = isometric_cycles(&c6, &DistanceMatrix::new(&c6)).unwrap();
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].vertices(), &[0, 1, 2, 3, 4, 5]);

        let q3 = generators::hypercube(3).unwrap();
        let cyc = isometric_cycles(&q3, &DistanceMatrix::new(&q3)).unwrap();
        assert_eq!(cyc.iter().filter(|c| c.len() == 4).count(), 6);
        assert_eq!(cyc.iter().filter(|c| c.len() == 6).count(), 4);
        assert_eq!(cyc.len(), 10);

        let k4 = generators::complete(4).unwrap();
        let cyc = isometric_cycles(&k4, &DistanceMatrix::new(&k4)).unwrap();
        assert_eq!(cyc.len(), 4);
    }

    #[test]
    fn cycles_match_brute_force() {
        let mut graphs = vec![
            generators::hypercube(3).unwrap(),
            generators::hypercube_minus_vertex(3).unwrap(),
            generators::trihex(),
            generators::even_cycle(5).unwrap(),
            generators::complete(5).unwrap(),
            Graph::new(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap(),
            Graph::new(
                7,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 6),
                    (6, 0),
                    (0, 3),
                ],
            )
            .unwrap(),
        ];
        for seed in 0..6 {
            graphs.push(generators::random_median_graph(6, seed).unwrap());
            graphs.push(generators::random_connected_graph(9, 0.35, seed).unwrap());
        }
        for g in graphs.into_iter().filter(|g| g.vertex_count() <= 12) {
            let d = DistanceMatrix::new(&g);
            assert_eq!(
                isometric_cycles(&g, &d).unwrap(),
                brute_isometric_cycles(&g),
                "{g:?}"
            );
        }
    }

    #[test]
    fn cycle_guard() {
        let q3 = generators::hypercube(3).unwrap();
        let d = DistanceMatrix::new(&q3);
        assert!(matches!(
            isometric_cycles_with_limit(&q3, &d, 7),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn quadrant_crossing() {
        let q2 = pc(generators::hypercube(2).unwrap());
        assert!(crosses_quadrant(&q2, 0, 1).unwrap());
        let p3 = pc(generators::path(3).unwrap());
        assert!(!crosses_quadrant(&p3, 0, 1).unwrap());
        let c6 = pc(generators::even_cycle(3).unwrap());
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!(crosses_quadrant(&c6, a, b).unwrap());
        }
        assert!(matches!(
            crosses_quadrant(&c6, 1, 1),
            Err(Error::SameClass(1))
        ));
    }

    #[test]
    fn cycle_crossing() {
        let c6 = pc(generators::even_cycle(3).unwrap());
        let cyc = isometric_cycles(&c6.graph, &c6.dist).unwrap();
        assert!(crosses_cycle(&c6, &cyc, 0, 2).unwrap());
        let p3 = pc(generators::path(3).unwrap());
        assert!(!crosses_cycle(&p3, &[], 0, 1).unwrap());
        let q3 = pc(generators::hypercube(3).unwrap());
        let cyc = isometric_cycles(&q3.graph, &q3.dist).unwrap();
        assert!(crosses_cycle(&q3, &cyc, 1, 2).unwrap());
        assert!(crosses_cycle(&q3, &cyc, 0, 0).is_err());
    }

    #[test]
    fn crossing_graphs() {
        for n in 1..=5 {
            let cg = crossing_graph(&generators::hypercube(n).unwrap()).unwrap();
            assert_eq!(cg.graph, generators::complete(n).unwrap());
        }
        let tree = generators::random_tree(10, 7).unwrap();
        assert_eq!(crossing_graph(&tree).unwrap().graph, Graph::empty(9));
        let cg = crossing_graph(&generators::even_cycle(3).unwrap()).unwrap();
        assert_eq!(cg.graph, generators::complete(3).unwrap());
        assert!(matches!(
            crossing_graph(&Graph::empty(1)),
            Err(Error::TrivialGraph)
        ));
        assert!(matches!(
            crossing_graph(&generators::complete(3).unwrap()),
            Err(Error::NotPartialCube(_))
        ));
    }

    #[test]
    fn alternating_squares() {
        let q2 = pc(generators::hypercube(2).unwrap());
        assert_eq!(alternating_square(&q2, 0, 1).unwrap(), Some([0, 1, 3, 2]));
        let c6 = pc(generators::even_cycle(3).unwrap());
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(alternating_square(&c6, a, b).unwrap(), None);
        }
        let q3 = pc(generators::hypercube(3).unwrap());
        let sq = alternating_square(&q3, 1, 2).unwrap().unwrap();
        assert_eq!(sq, [0, 2, 6, 4]);
        let g = &q3.graph;
        assert_eq!(q3.class_of(g.edge_id(sq[0], sq[1]).unwrap()), 1);
        assert_eq!(q3.class_of(g.edge_id(sq[1], sq[2]).unwrap()), 2);
    }

    #[test]
    fn simplex_graphs() {
        let s = simplex_graph(&Graph::empty(1)).unwrap();
        assert_eq!(s.graph, generators::complete(2).unwrap());

        let s = simplex_graph(&generators::complete(2).unwrap()).unwrap();
        assert_eq!(s.graph.vertex_count(), 4);
        assert_eq!(s.graph.edge_count(), 4);
        assert!((0..4).all(|v| s.graph.degree(v) == 2));

        let s = simplex_graph(&generators::path(3).unwrap()).unwrap();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (6, 7));
        let empty = 0;
        let middle = s.clique_of_vertex.iter().position(|c| c == &[1]).unwrap();
        assert_eq!(s.clique_of_vertex[empty], Vec::<usize>::new());
        let cyc = isometric_cycles(&s.graph, &DistanceMatrix::new(&s.graph)).unwrap();
        assert_eq!(cyc.len(), 2);
        for c in &cyc {
            assert_eq!(c.len(), 4);
            assert!(c.vertices().contains(&empty) && c.vertices().contains(&middle));
        }

        assert!(matches!(
            simplex_graph_with_limit(&generators::complete(5).unwrap(), 10),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn simplex_identity() {
        assert!(verify_simplex_identity(&generators::path(3).unwrap()).unwrap());
        assert!(verify_simplex_identity(&generators::complete(3).unwrap()).unwrap());
        assert!(verify_simplex_identity(&Graph::empty(4)).unwrap());
        let star = simplex_graph(&Graph::empty(4)).unwrap().graph;
        assert_eq!(star.degree(0), 4);
        assert!(verify_simplex_identity(&Graph::empty(0)).unwrap());
    }
}
