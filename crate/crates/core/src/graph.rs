//! Simple undirected graphs with canonical edge numbering.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Finite simple undirected graph on `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; an
/// edge's position in that list is its [`EdgeId`]. Neighbor lists are sorted
/// ascending and carry the id of the connecting edge alongside.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<VertexId>>,
    adj_edges: Vec<Vec<EdgeId>>,
    edges: Vec<(VertexId, VertexId)>,
}

/// Outcome of a bipartiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Proper 2-coloring, one entry per vertex.
    Coloring(Vec<u8>),
    /// Vertices of an odd cycle, in cyclic order.
    OddCycle(Vec<VertexId>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Coloring(_))
    }
}

impl Graph {
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Graph> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::Loop { u });
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge {
                u: w[0].0,
                v: w[0].1,
            });
        }
        Ok(Self::from_sorted_edges(n, canon))
    }

    /// `edges` must already be canonical, sorted and duplicate free.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Graph {
        let mut adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let mut nbrs = Vec::with_capacity(n);
        let mut nbr_edges = Vec::with_capacity(n);
        for mut list in adj {
            list.sort_unstable();
            nbrs.push(list.iter().map(|p| p.0).collect());
            nbr_edges.push(list.iter().map(|p| p.1).collect());
        }
        Graph {
            n,
            adj: nbrs,
            adj_edges: nbr_edges,
            edges,
        }
    }

    /// Builds from a possibly unsorted list of pairs that is known to be valid.
    pub(crate) fn from_valid_edges(n: usize, mut edges: Vec<(VertexId, VertexId)>) -> Graph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_edges(n, edges)
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.adj[v]
            .iter()
            .copied()
            .zip(self.adj_edges[v].iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search(&v)
            .ok()
            .map(|i| self.adj_edges[u][i])
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// `G[S]` together with the order-preserving map old id -> new id.
    pub fn induced_subgraph(&self, set: &VertexSet) -> (Graph, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in set.iter() {
            map[v] = Some(next);
            next += 1;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((map[u]?, map[v]?)))
            .collect();
        // order preserving map keeps the lexicographic order
        (Self::from_sorted_edges(next, edges), map)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::from_sorted_edges(self.n + other.n, edges)
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_sorted_edges(self.n, edges)
    }

    /// Removes one vertex and renumbers the rest in order.
    pub fn remove_vertex(&self, v: VertexId) -> Graph {
        let mut keep = self.all_vertices();
        keep.remove(v);
        self.induced_subgraph(&keep).0
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Whether `G[S]` is connected; the empty set counts as connected.
    pub fn is_connected_within(&self, set: &VertexSet) -> bool {
        let Some(start) = set.first() else {
            return true;
        };
        let mut seen = VertexSet::new(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == set.count()
    }

    pub fn bipartition(&self) -> Bipartition {
        let mut color: Vec<Option<u8>> = vec![None; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![0usize; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cu);
                            parent[w] = u;
                            depth[w] = depth[u] + 1;
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => {
                            return Bipartition::OddCycle(odd_cycle(&parent, &depth, u, w));
                        }
                        _ => {}
                    }
                }
            }
        }
        Bipartition::Coloring(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_bipartite()
    }

    /// Calls `f` once for every clique (including the empty one), each given
    /// as an ascending vertex list. Depth-first over ascending ids, so each
    /// clique is produced exactly once. Returning `false` from `f` stops the
    /// walk early; the method then returns `false`.
    pub fn for_each_clique<F: FnMut(&[VertexId]) -> bool>(&self, mut f: F) -> bool {
        let mut current = Vec::new();
        let all: Vec<VertexId> = (0..self.n).collect();
        self.extend_cliques(&mut current, &all, &mut f)
    }

    fn extend_cliques<F: FnMut(&[VertexId]) -> bool>(
        &self,
        current: &mut Vec<VertexId>,
        candidates: &[VertexId],
        f: &mut F,
    ) -> bool {
        if !f(current) {
            return false;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<VertexId> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.has_edge(v, w))
                .collect();
            current.push(v);
            let go_on = self.extend_cliques(current, &next, f);
            current.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Parses the edge-list format: a header `n m` followed by `m` lines `u v`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header line `n m`".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashMap::with_capacity(m);
        for (line, text) in lines {
            let (u, v) = parse_pair(line, text)?;
            check_edge(line, n, u, v, &mut seen)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        Ok(Self::from_valid_edges(n, edges))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses `{"n": int, "edges": [[u, v], ...]}`. Errors report the
    /// 1-based line of the JSON text where the problem was found; for
    /// semantic errors (loops, duplicates) that is the line holding the
    /// offending pair when it can be located.
    pub fn from_json(text: &str) -> Result<Graph> {
        let data: GraphData = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut seen = std::collections::HashMap::with_capacity(data.edges.len());
        for (i, &[u, v]) in data.edges.iter().enumerate() {
            let line = locate_pair_line(text, i).unwrap_or(1);
            check_edge(line, data.n, u, v, &mut seen)?;
        }
        Ok(Self::from_valid_edges(
            data.n,
            data.edges.iter().map(|&[u, v]| (u, v)).collect(),
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphData::from(self)).expect("graph serialization")
    }
}

fn odd_cycle(parent: &[usize], depth: &[usize], mut a: VertexId, mut b: VertexId) -> Vec<VertexId> {
    // a and b are adjacent with equal color; walk both up to their common ancestor
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[a] > depth[b] {
        left.push(a);
        a = parent[a];
    }
    while depth[b] > depth[a] {
        right.push(b);
        b = parent[b];
    }
    while a != b {
        left.push(a);
        right.push(b);
        a = parent[a];
        b = parent[b];
    }
    left.push(a);
    right.reverse();
    left.extend(right);
    left
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{tok}` is not a nonnegative integer"),
        })
    };
    let a = next("first value")?;
    let b = next("second value")?;
    if let Some(extra) = it.next() {
        return Err(Error::Parse {
            line,
            message: format!("unexpected token `{extra}`"),
        });
    }
    Ok((a, b))
}

fn check_edge(
    line: usize,
    n: usize,
    u: usize,
    v: usize,
    seen: &mut std::collections::HashMap<(usize, usize), usize>,
) -> Result<()> {
    if u >= n || v >= n {
        return Err(Error::Parse {
            line,
            message: format!("edge ({u}, {v}) references a vertex outside 0..{n}"),
        });
    }
    if u == v {
        return Err(Error::Parse {
            line,
            message: format!("loop edge ({u}, {v})"),
        });
    }
    if let Some(first) = seen.insert((u.min(v), u.max(v)), line) {
        return Err(Error::Parse {
            line,
            message: format!("duplicate edge ({u}, {v}), first given on line {first}"),
        });
    }
    Ok(())
}

/// Line number of the `index`-th `[u, v]` pair inside the `edges` array.
fn locate_pair_line(text: &str, index: usize) -> Option<usize> {
    let start = text.find("\"edges\"")?;
    let body = &text[start..];
    let open = body.find('[')?;
    let mut depth = 0;
    let mut count = 0;
    for (off, ch) in body[open..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if count == index {
                        let abs = start + open + off;
                        return Some(text[..abs].matches('\n').count() + 1);
                    }
                    count += 1;
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    None
}

/// Serialized form of a [`Graph`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphData {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphData {
    fn from(g: &Graph) -> Self {
        GraphData {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphData> for Graph {
    type Error = Error;

    fn try_from(d: GraphData) -> Result<Graph> {
        let edges: Vec<_> = d.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::new(d.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphData::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = GraphData::deserialize(d)?;
        Graph::try_from(data).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn cycle6() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap()
    }

    #[test]
    fn build_basic() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let c6 = cycle6();
        assert_eq!(c6.edge_count(), 6);
        assert!((0..6).all(|v| c6.degree(v) == 2));
        assert_eq!(c6.edges()[1], (0, 5));
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert!(matches!(
            Graph::new(3, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Graph::new(3, &[(2, 2)]),
            Err(Error::Loop { u: 2 })
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { u: 0, v: 3, n: 3 })
        ));
    }

    #[test]
    fn edge_order_irrelevant() {
        let a = Graph::new(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let b = Graph::new(4, &[(3, 2), (1, 0), (2, 1)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn induced_subgraphs() {
        let q3 = generators::hypercube(3).unwrap();
        // facet x0 = 0: labels 0,2,4,6
        let (facet, map) = q3.induced_subgraph(&VertexSet::from_indices(8, [0, 2, 4, 6]));
        assert_eq!(facet.vertex_count(), 4);
        assert_eq!(facet.edge_count(), 4);
        assert!((0..4).all(|v| facet.degree(v) == 2));
        assert_eq!(map[4], Some(2));
        assert_eq!(map[1], None);

        let (p3, _) = cycle6().induced_subgraph(&VertexSet::from_indices(6, [0, 1, 2]));
        assert_eq!(p3, generators::path(3).unwrap());

        let c6 = cycle6();
        let (copy, map) = c6.induced_subgraph(&c6.all_vertices());
        assert_eq!(copy, c6);
        assert!(map.iter().enumerate().all(|(i, m)| *m == Some(i)));

        let (empty, _) = c6.induced_subgraph(&VertexSet::new(6));
        assert_eq!(empty.vertex_count(), 0);
    }

    #[test]
    fn unions_and_complements() {
        let k6 = generators::complete(6).unwrap();
        let u = k6.disjoint_union(&Graph::empty(10));
        assert_eq!((u.vertex_count(), u.edge_count()), (16, 15));
        assert_eq!(k6.disjoint_union(&Graph::empty(0)), k6);
        let two = Graph::empty(1).disjoint_union(&Graph::empty(1));
        assert_eq!((two.vertex_count(), two.edge_count()), (2, 0));

        let k3 = generators::complete(3).unwrap();
        assert_eq!(k3.complement(), Graph::empty(3));
        assert_eq!(
            Graph::empty(5).complement(),
            generators::complete(5).unwrap()
        );
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cc = c5.complement();
        assert_eq!(cc.edge_count(), 5);
        assert!((0..5).all(|v| cc.degree(v) == 2));
        assert!(cc.is_connected());
    }

    #[test]
    fn bipartite_checks() {
        match cycle6().bipartition() {
            Bipartition::Coloring(c) => assert_eq!(c, vec![0, 1, 0, 1, 0, 1]),
            other => panic!("expected coloring, got {other:?}"),
        }
        match generators::complete(3).unwrap().bipartition() {
            Bipartition::OddCycle(c) => assert_eq!(c.len(), 3),
            other => panic!("expected odd cycle, got {other:?}"),
        }
        let q4 = generators::hypercube(4).unwrap();
        match q4.bipartition() {
            Bipartition::Coloring(c) => {
                for (v, &side) in c.iter().enumerate() {
                    assert_eq!(side as u32, v.count_ones() % 2);
                }
            }
            other => panic!("expected coloring, got {other:?}"),
        }
    }

    #[test]
    fn odd_cycle_witness_is_a_cycle() {
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)]).unwrap();
        let Bipartition::OddCycle(c) = g.bipartition() else {
            panic!("C7 is not bipartite")
        };
        assert_eq!(c.len() % 2, 1);
        for i in 0..c.len() {
            assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
        }
    }

    #[test]
    fn edge_list_io() {
        let g = Graph::from_edge_list("6 6\n0 1\n2 1\n2 3\n3 4\n4 5\n5 0\n").unwrap();
        assert_eq!(g, cycle6());
        assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);

        let err = Graph::from_edge_list("3 2\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::from_edge_list("3 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::from_edge_list("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(Graph::from_edge_list("2 1\n0 x\n").is_err());
    }

    #[test]
    fn json_io() {
        let g = Graph::from_json(r#"{"n": 3, "edges": [[0,1],[2,1]]}"#).unwrap();
        assert_eq!(g, generators::path(3).unwrap());
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        let text = "{\n  \"n\": 3,\n  \"edges\": [\n    [0, 1],\n    [1, 0]\n  ]\n}";
        let err = Graph::from_json(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
        let err = Graph::from_json("{\"n\": 2, \"edges\": [[1,1]]}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }
}
