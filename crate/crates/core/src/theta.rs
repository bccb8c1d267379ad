//! Djoković–Winkler relation, Θ-classes, partial-cube recognition and the
//! isometric hypercube embedding.

use std::collections::VecDeque;

use serde::Serialize;

use crate::bitset::{Label, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, EdgeId, Graph, VertexId};
use crate::metric::DistanceMatrix;

pub type ClassId = usize;

/// `uv Θ xy` iff `d(u,x) + d(v,y) != d(u,y) + d(v,x)`.
pub fn theta_related(g: &Graph, d: &DistanceMatrix, e: EdgeId, f: EdgeId) -> bool {
    let (u, v) = g.edge(e);
    let (x, y) = g.edge(f);
    let (ux, vy, uy, vx) = (d.get(u, x), d.get(v, y), d.get(u, y), d.get(v, x));
    ux as u64 + vy as u64 != uy as u64 + vx as u64
}

/// Connected components of Θ on the edge set, with a pairwise check that each
/// component really is an equivalence class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaPartition {
    pub class_of: Vec<ClassId>,
    pub classes: Vec<Vec<EdgeId>>,
    pub is_equivalence: bool,
    /// Edges `(e, f, h)` with `e Θ f`, `f Θ h` but not `e Θ h`.
    pub witness: Option<(EdgeId, EdgeId, EdgeId)>,
}

impl ThetaPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

pub fn theta_classes(g: &Graph, d: &DistanceMatrix) -> Result<ThetaPartition> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let m = g.edge_count();
    let mut uf = UnionFind::new(m);
    for e in 0..m {
        for f in e + 1..m {
            if theta_related(g, d, e, f) {
                uf.union(e, f);
            }
        }
    }
    // class ids follow the least edge id of each component
    let mut class_of = vec![usize::MAX; m];
    let mut root_class = vec![usize::MAX; m];
    let mut classes: Vec<Vec<EdgeId>> = Vec::new();
    for (e, class) in class_of.iter_mut().enumerate() {
        let r = uf.find(e);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        *class = root_class[r];
        classes[root_class[r]].push(e);
    }

    let mut witness = None;
    'outer: for class in &classes {
        for (i, &e) in class.iter().enumerate() {
            for &h in &class[i + 1..] {
                if !theta_related(g, d, e, h) {
                    witness = Some(transitivity_witness(g, d, class, e, h));
                    break 'outer;
                }
            }
        }
    }
    Ok(ThetaPartition {
        class_of,
        classes,
        is_equivalence: witness.is_none(),
        witness,
    })
}

/// Walks a Θ-path from `e` to `h` and returns the first step where relation
/// with `e` breaks.
fn transitivity_witness(
    g: &Graph,
    d: &DistanceMatrix,
    class: &[EdgeId],
    e: EdgeId,
    h: EdgeId,
) -> (EdgeId, EdgeId, EdgeId) {
    let mut prev = std::collections::HashMap::new();
    prev.insert(e, e);
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        if x == h {
            break;
        }
        for &y in class {
            if !prev.contains_key(&y) && theta_related(g, d, x, y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![h];
    let mut cur = h;
    while cur != e {
        cur = prev[&cur];
        path.push(cur);
    }
    path.reverse();
    for w in path.windows(2) {
        if !theta_related(g, d, e, w[1]) {
            return (e, w[0], w[1]);
        }
    }
    unreachable!("e and h are unrelated, so some step along the path breaks")
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so roots stay deterministic
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Winkler's test: connected, bipartite, and Θ transitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialCubeCertificate {
    pub verdict: bool,
    pub connected: bool,
    pub bipartite_witness: Option<Vec<VertexId>>,
    /// Absent for disconnected graphs.
    pub theta: Option<ThetaPartition>,
    pub idim: Option<usize>,
}

pub fn is_partial_cube(g: &Graph, d: &DistanceMatrix) -> PartialCubeCertificate {
    let connected = g.is_connected() && g.vertex_count() > 0;
    let bipartite_witness = match g.bipartition() {
        Bipartition::Coloring(_) => None,
        Bipartition::OddCycle(c) => Some(c),
    };
    let theta = if connected {
        theta_classes(g, d).ok()
    } else {
        None
    };
    let verdict = connected
        && bipartite_witness.is_none()
        && theta.as_ref().is_some_and(|t| t.is_equivalence);
    let idim = verdict.then(|| theta.as_ref().unwrap().class_count());
    PartialCubeCertificate {
        verdict,
        connected,
        bipartite_witness,
        theta,
        idim,
    }
}

/// Per-vertex 0-1 labels realizing `G` as an isometric subgraph of `Q_idim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeEmbedding {
    pub labels: Vec<Label>,
    /// Coordinate carried by each Θ-class.
    pub class_bit: Vec<usize>,
    pub base: VertexId,
}

impl HypercubeEmbedding {
    pub fn dimension(&self) -> usize {
        self.class_bit.len()
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v]
    }
}

/// Labels relative to vertex 0: coordinate `c` of `u` is set iff `u` lies on
/// the side of class `c` away from vertex 0.
pub fn embed(
    g: &Graph,
    d: &DistanceMatrix,
    cert: &PartialCubeCertificate,
) -> Result<HypercubeEmbedding> {
    let theta = match (&cert.theta, cert.verdict) {
        (Some(t), true) => t,
        _ => return Err(Error::NotPartialCube(Box::new(cert.clone()))),
    };
    let base = 0;
    let dim = theta.class_count();
    let mut labels = vec![Label::new(dim); g.vertex_count()];
    for (c, class) in theta.classes.iter().enumerate() {
        let (a, b) = g.edge(class[0]);
        let base_near_a = d.get(a, base) < d.get(b, base);
        for (u, label) in labels.iter_mut().enumerate() {
            let near_a = d.get(a, u) < d.get(b, u);
            if near_a != base_near_a {
                label.insert(c);
            }
        }
    }
    let emb = HypercubeEmbedding {
        labels,
        class_bit: (0..dim).collect(),
        base,
    };
    check_embedding(g, d, theta, &emb)?;
    Ok(emb)
}

fn check_embedding(
    g: &Graph,
    d: &DistanceMatrix,
    theta: &ThetaPartition,
    emb: &HypercubeEmbedding,
) -> Result<()> {
    let n = g.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            if emb.labels[u].hamming(&emb.labels[v]) != d.get(u, v) as usize {
                return Err(Error::Internal(format!(
                    "embedding distorts distance between {u} and {v}"
                )));
            }
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let diff = emb.labels[u].xor(&emb.labels[v]);
        if diff.count() != 1 || !diff.contains(emb.class_bit[theta.class_of[e]]) {
            return Err(Error::Internal(format!(
                "edge {e} does not flip exactly its class coordinate"
            )));
        }
    }
    Ok(())
}

/// The two halves of `G` cut by one Θ-class, oriented by its least edge `ab`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sides {
    pub a: VertexId,
    pub b: VertexId,
    pub w_ab: VertexSet,
    pub w_ba: VertexSet,
    pub u_ab: VertexSet,
    pub u_ba: VertexSet,
}

pub fn sides(
    g: &Graph,
    d: &DistanceMatrix,
    cert: &PartialCubeCertificate,
    c: ClassId,
) -> Result<Sides> {
    let theta = match (&cert.theta, cert.verdict) {
        (Some(t), true) => t,
        _ => return Err(Error::NotPartialCube(Box::new(cert.clone()))),
    };
    let class = theta.classes.get(c).ok_or(Error::ClassOutOfRange {
        class: c,
        count: theta.class_count(),
    })?;
    let (a, b) = g.edge(class[0]);
    let n = g.vertex_count();
    let w_ab = VertexSet::from_indices(n, (0..n).filter(|&w| d.get(a, w) < d.get(b, w)));
    let w_ba = VertexSet::from_indices(n, (0..n).filter(|&w| d.get(b, w) < d.get(a, w)));
    let mut u_ab = VertexSet::new(n);
    let mut u_ba = VertexSet::new(n);
    for &e in class {
        let (x, y) = g.edge(e);
        for z in [x, y] {
            if w_ab.contains(z) {
                u_ab.insert(z);
            } else {
                u_ba.insert(z);
            }
        }
    }
    Ok(Sides {
        a,
        b,
        w_ab,
        w_ba,
        u_ab,
        u_ba,
    })
}

/// Convexity of an induced connected subgraph of a bipartite graph: no edge
/// leaving `S` is Θ-related to an edge inside `S`.
pub fn convexity_by_boundary(g: &Graph, d: &DistanceMatrix, set: &VertexSet) -> Result<bool> {
    if !g.is_connected_within(set) {
        return Err(Error::DisconnectedSubgraph);
    }
    let mut inner = Vec::new();
    let mut boundary = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match (set.contains(u), set.contains(v)) {
            (true, true) => inner.push(e),
            (true, false) | (false, true) => boundary.push(e),
            _ => {}
        }
    }
    Ok(!boundary
        .iter()
        .any(|&b| inner.iter().any(|&e| theta_related(g, d, b, e))))
}

/// Convex hull in a partial cube given by isometric labels: the vertices
/// agreeing with `S` on every coordinate where all of `S` agrees.
pub fn hull_by_labels(labels: &[Label], set: &VertexSet) -> VertexSet {
    let n = labels.len();
    let Some(first) = set.first() else {
        return VertexSet::new(n);
    };
    let base = &labels[first];
    // coordinates on which some member differs from `base`
    let mut free = Label::new(base.universe());
    for v in set.iter() {
        free.union_with(&labels[v].xor(base));
    }
    let fixed = free.complement();
    VertexSet::from_indices(
        n,
        (0..n).filter(|&v| !labels[v].xor(base).intersects(&fixed)),
    )
}

/// A graph bundled with everything the partial-cube machinery needs.
#[derive(Debug, Clone)]
pub struct PartialCube {
    pub graph: Graph,
    pub dist: DistanceMatrix,
    pub cert: PartialCubeCertificate,
    pub embedding: HypercubeEmbedding,
}

impl PartialCube {
    /// Fails with [`Error::NotPartialCube`] carrying the certificate.
    pub fn new(graph: Graph) -> Result<PartialCube> {
        let dist = DistanceMatrix::new(&graph);
        let cert = is_partial_cube(&graph, &dist);
        if !cert.verdict {
            return Err(Error::NotPartialCube(Box::new(cert)));
        }
        let embedding = embed(&graph, &dist, &cert)?;
        Ok(PartialCube {
            graph,
            dist,
            cert,
            embedding,
        })
    }

    pub fn theta(&self) -> &ThetaPartition {
        self.cert.theta.as_ref().expect("verdict implies theta")
    }

    pub fn idim(&self) -> usize {
        self.theta().class_count()
    }

    pub fn class_of(&self, e: EdgeId) -> ClassId {
        self.theta().class_of[e]
    }

    pub fn class_edges(&self, c: ClassId) -> &[EdgeId] {
        &self.theta().classes[c]
    }

    pub fn sides(&self, c: ClassId) -> Result<Sides> {
        sides(&self.graph, &self.dist, &self.cert, c)
    }

    pub(crate) fn check_class(&self, c: ClassId) -> Result<()> {
        if c >= self.idim() {
            return Err(Error::ClassOutOfRange {
                class: c,
                count: self.idim(),
            });
        }
        Ok(())
    }

    /// Convex hull of `S`, read off the labels.
    pub fn hull(&self, set: &VertexSet) -> VertexSet {
        hull_by_labels(&self.embedding.labels, set)
    }

    /// Convexity through the embedding; agrees with
    /// [`DistanceMatrix::is_convex`] on partial cubes.
    pub fn is_convex(&self, set: &VertexSet) -> bool {
        set.count() <= 1 || self.hull(set) == *set
    }

    /// Classes with at least one edge inside `G[S]`.
    pub fn theta_occurrence(&self, set: &VertexSet) -> std::collections::BTreeSet<ClassId> {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| set.contains(u) && set.contains(v))
            .map(|(e, _)| self.class_of(e))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn k23() -> Graph {
        Graph::new(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap()
    }

    fn brute_theta_table(g: &Graph) -> Vec<Vec<bool>> {
        let d = DistanceMatrix::new(g);
        let m = g.edge_count();
        (0..m)
            .map(|e| (0..m).map(|f| theta_related(g, &d, e, f)).collect())
            .collect()
    }

    #[test]
    fn relation_on_c6() {
        let c6 = generators::even_cycle(3).unwrap();
        let d = DistanceMatrix::new(&c6);
        let e01 = c6.edge_id(0, 1).unwrap();
        let e34 = c6.edge_id(3, 4).unwrap();
        let e12 = c6.edge_id(1, 2).unwrap();
        assert!(theta_related(&c6, &d, e01, e01));
        assert!(theta_related(&c6, &d, e01, e34));
        assert!(!theta_related(&c6, &d, e01, e12));
    }

    #[test]
    fn classes() {
        let k2 = generators::complete(2).unwrap();
        let t = theta_classes(&k2, &DistanceMatrix::new(&k2)).unwrap();
        assert_eq!(t.classes, vec![vec![0]]);
        assert!(t.is_equivalence);

        let c6 = generators::even_cycle(3).unwrap();
        let t = theta_classes(&c6, &DistanceMatrix::new(&c6)).unwrap();
        let e = |u, v| c6.edge_id(u, v).unwrap();
        assert_eq!(
            t.classes,
            vec![
                vec![e(0, 1), e(3, 4)],
                vec![e(0, 5), e(2, 3)],
                vec![e(1, 2), e(4, 5)]
            ]
        );
        assert!(t.is_equivalence);

        let g = k23();
        let table = brute_theta_table(&g);
        let t = theta_classes(&g, &DistanceMatrix::new(&g)).unwrap();
        assert!(!t.is_equivalence);
        let (a, b, c) = t.witness.unwrap();
        assert!(table[a][b] && table[b][c] && !table[a][c]);

        assert!(matches!(
            theta_classes(&Graph::empty(2), &DistanceMatrix::new(&Graph::empty(2))),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn recognition() {
        let c6 = generators::even_cycle(3).unwrap();
        let cert = is_partial_cube(&c6, &DistanceMatrix::new(&c6));
        assert!(cert.verdict);
        assert_eq!(cert.idim, Some(3));

        let g = k23();
        let cert = is_partial_cube(&g, &DistanceMatrix::new(&g));
        assert!(!cert.verdict);
        assert!(cert.bipartite_witness.is_none());
        assert!(cert.theta.unwrap().witness.is_some());

        let q3m = generators::hypercube_minus_vertex(3).unwrap();
        let cert = is_partial_cube(&q3m, &DistanceMatrix::new(&q3m));
        assert!(cert.verdict);
        assert_eq!(cert.idim, Some(3));

        let k3 = generators::complete(3).unwrap();
        let cert = is_partial_cube(&k3, &DistanceMatrix::new(&k3));
        assert!(!cert.verdict);
        assert!(cert.bipartite_witness.is_some());

        let k1 = Graph::empty(1);
        let cert = is_partial_cube(&k1, &DistanceMatrix::new(&k1));
        assert!(cert.verdict);
        assert_eq!(cert.idim, Some(0));
        assert!(!is_partial_cube(&Graph::empty(2), &DistanceMatrix::new(&Graph::empty(2))).verdict);
    }

    fn labels(g: Graph) -> Vec<String> {
        let pc = PartialCube::new(g).unwrap();
        pc.embedding.labels.iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn embeddings() {
        assert_eq!(labels(generators::complete(2).unwrap()), ["0", "1"]);
        assert_eq!(labels(generators::path(3).unwrap()), ["00", "10", "11"]);
        // classes of C6: {01,34}, {05,23}, {12,45}
        assert_eq!(
            labels(generators::even_cycle(3).unwrap()),
            ["000", "100", "101", "111", "011", "010"]
        );
    }

    #[test]
    fn label_hulls_match_geodesic_hulls() {
        let graphs = [
            generators::trihex(),
            generators::hypercube_minus_vertex(4).unwrap(),
            generators::random_median_graph(12, 2).unwrap(),
        ];
        for g in graphs {
            let pc = PartialCube::new(g).unwrap();
            let n = pc.graph.vertex_count();
            for a in 0..n {
                for b in [0, n / 2, n - 1] {
                    let s = VertexSet::from_indices(n, [a, b]);
                    let hull = pc.hull(&s);
                    assert_eq!(hull, pc.dist.convex_hull(&s).unwrap());
                    assert!(pc.is_convex(&hull));
                    assert_eq!(pc.is_convex(&s), pc.dist.is_convex(&pc.graph, &s));
                }
            }
        }
    }

    #[test]
    fn embedding_rejects_non_partial_cube() {
        let g = k23();
        let d = DistanceMatrix::new(&g);
        let cert = is_partial_cube(&g, &d);
        assert!(matches!(
            embed(&g, &d, &cert),
            Err(Error::NotPartialCube(_))
        ));
    }

    #[test]
    fn side_sets() {
        let k2 = PartialCube::new(generators::complete(2).unwrap()).unwrap();
        let s = k2.sides(0).unwrap();
        assert_eq!((s.a, s.b), (0, 1));
        assert_eq!(s.w_ab, VertexSet::from_indices(2, [0]));
        assert_eq!(s.u_ab, VertexSet::from_indices(2, [0]));

        let c6 = PartialCube::new(generators::even_cycle(3).unwrap()).unwrap();
        let s = c6.sides(0).unwrap();
        assert_eq!(s.w_ab, VertexSet::from_indices(6, [0, 4, 5]));
        assert_eq!(s.w_ba, VertexSet::from_indices(6, [1, 2, 3]));
        assert_eq!(s.u_ab, VertexSet::from_indices(6, [0, 4]));
        assert_eq!(s.u_ba, VertexSet::from_indices(6, [1, 3]));

        let q3 = PartialCube::new(generators::hypercube(3).unwrap()).unwrap();
        for c in 0..3 {
            let s = q3.sides(c).unwrap();
            assert_eq!(s.w_ab.count(), 4);
            assert_eq!(s.u_ab, s.w_ab);
            assert_eq!(s.u_ba, s.w_ba);
            assert!(q3.dist.is_convex(&q3.graph, &s.w_ab));
        }
        assert!(matches!(q3.sides(3), Err(Error::ClassOutOfRange { .. })));
    }

    #[test]
    fn boundary_convexity() {
        let q3 = generators::hypercube(3).unwrap();
        let d = DistanceMatrix::new(&q3);
        assert!(convexity_by_boundary(&q3, &d, &VertexSet::from_indices(8, [0, 1, 2, 3])).unwrap());
        let c6 = generators::even_cycle(3).unwrap();
        let d6 = DistanceMatrix::new(&c6);
        assert!(
            !convexity_by_boundary(&c6, &d6, &VertexSet::from_indices(6, [0, 1, 2, 3])).unwrap()
        );
        assert!(convexity_by_boundary(&c6, &d6, &VertexSet::from_indices(6, [5])).unwrap());
        assert!(matches!(
            convexity_by_boundary(&c6, &d6, &VertexSet::from_indices(6, [0, 2])),
            Err(Error::DisconnectedSubgraph)
        ));
    }

    #[test]
    fn occurrence() {
        let q3 = PartialCube::new(generators::hypercube(3).unwrap()).unwrap();
        let e = q3.graph.edge_id(0, 1).unwrap();
        let edge = VertexSet::from_indices(8, [0, 1]);
        assert_eq!(
            q3.theta_occurrence(&edge).into_iter().collect::<Vec<_>>(),
            vec![q3.class_of(e)]
        );
        let facet = VertexSet::from_indices(8, [0, 1, 2, 3]);
        assert_eq!(q3.theta_occurrence(&facet).len(), 2);
        // six-cycle avoiding 0 and 7
        let hex = VertexSet::from_indices(8, 1..7);
        assert_eq!(q3.theta_occurrence(&hex).len(), 3);
    }
}
