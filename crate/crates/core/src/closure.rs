//! Hypercube hulls and the median closure `G⁺` of a partial cube.
//!
//! The closure works inside the fixed frame `Q_n`, `n = idim(G)`, given by
//! the embedding of `G`. Each round collects the isometric cycles of the
//! current graph that are maximal under hull containment, adds every vertex
//! of their hulls in `Q_n`, and takes the subgraph of `Q_n` induced by the
//! enlarged label set. Rounds repeat until nothing is added. Vertex ids are
//! stable: the vertices of round `i` keep their ids in round `i + 1` and new
//! vertices are appended in label order.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bitset::Label;
use crate::crossing::{self, IsometricCycle};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::median;
use crate::metric::DistanceMatrix;
use crate::theta::PartialCube;

/// Subcubes with more free coordinates than this are not enumerated.
pub const MAX_ENUMERATED_SUBCUBE_DIM: usize = 24;

/// A subcube of `Q_n`: the coordinates in `free` vary, the rest are pinned to
/// the values in `base` (whose free coordinates are zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcube {
    pub base: Label,
    pub free: Label,
}

impl Subcube {
    /// Minimal subcube containing every label: coordinates on which all
    /// labels agree stay fixed.
    pub fn hull<'a, I: IntoIterator<Item = &'a Label>>(labels: I) -> Option<Subcube> {
        let mut it = labels.into_iter();
        let first = it.next()?.clone();
        let mut free = Label::new(first.universe());
        for l in it {
            free.union_with(&l.xor(&first));
        }
        let base = first.and(&free.complement());
        Some(Subcube { base, free })
    }

    pub fn dimension(&self) -> usize {
        self.free.count()
    }

    pub fn contains(&self, label: &Label) -> bool {
        label.and(&self.free.complement()) == self.base
    }

    pub fn is_subcube_of(&self, other: &Subcube) -> bool {
        self.free.is_subset(&other.free) && self.base.and(&other.free.complement()) == other.base
    }

    /// All `2^dim` labels of the subcube.
    pub fn labels(&self) -> Result<Vec<Label>> {
        let free: Vec<usize> = self.free.iter().collect();
        if free.len() > MAX_ENUMERATED_SUBCUBE_DIM {
            return Err(Error::GuardExceeded {
                what: "subcube dimension",
                limit: MAX_ENUMERATED_SUBCUBE_DIM,
            });
        }
        let mut out = Vec::with_capacity(1 << free.len());
        for mask in 0u64..(1 << free.len()) {
            let mut l = self.base.clone();
            for (i, &c) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    l.insert(c);
                }
            }
            out.push(l);
        }
        out.sort();
        Ok(out)
    }
}

/// Convex hull of a set of labels inside the hypercube, as a sorted list.
pub fn hull_in_hypercube(labels: &[Label]) -> Result<Vec<Label>> {
    let cube = Subcube::hull(labels).ok_or(Error::EmptySet)?;
    cube.labels()
}

/// Cycles whose hypercube hull is not strictly inside another cycle's hull.
/// Cycles with equal hulls are all kept.
pub fn maximal_isometric_cycles(
    cycles: &[IsometricCycle],
    labels: &[Label],
) -> Vec<IsometricCycle> {
    let hulls: Vec<Subcube> = cycles
        .iter()
        .map(|c| Subcube::hull(c.vertices().iter().map(|&v| &labels[v])).expect("nonempty cycle"))
        .collect();
    cycles
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            !hulls
                .iter()
                .any(|h| h != &hulls[i] && hulls[i].is_subcube_of(h))
        })
        .map(|(_, c)| c.clone())
        .collect()
}

/// One round of the closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureRound {
    /// The graph `G⁽ⁱ⁾` of this round.
    pub graph: Graph,
    pub isometric_cycle_count: usize,
    pub maximal_cycles: Vec<IsometricCycle>,
    /// Number of distinct hulls among the maximal cycles.
    pub distinct_hulls: usize,
    /// Labels added to form the next round; empty in the last round.
    pub added: Vec<String>,
}

impl ClosureRound {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureTrace {
    /// Dimension `n` of the frame `Q_n`.
    pub dimension: usize,
    /// `G⁽⁰⁾, G⁽¹⁾, ..., G⁽ˡ⁾`.
    pub rounds: Vec<ClosureRound>,
    /// Labels of the final graph's vertices, indexed by vertex id.
    #[serde(serialize_with = "serialize_labels")]
    pub labels: Vec<Label>,
}

fn serialize_labels<S: serde::Serializer>(
    labels: &[Label],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(labels.iter().map(|l| l.to_bit_string()))
}

impl ClosureTrace {
    /// `G⁺`.
    pub fn final_graph(&self) -> &Graph {
        &self.rounds.last().expect("at least one round").graph
    }

    /// The least `l` with `G⁽ˡ⁾ = G⁺`.
    pub fn stabilization_index(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.vertex_count()).collect()
    }
}

fn graph_from_labels(labels: &[Label]) -> Graph {
    let index: HashMap<&Label, VertexId> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut edges = Vec::new();
    for (u, l) in labels.iter().enumerate() {
        for c in 0..l.universe() {
            if let Some(&v) = index.get(&l.with_toggled(c)) {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_valid_edges(labels.len(), edges)
}

pub fn median_closure(g: &Graph) -> Result<ClosureTrace> {
    median_closure_with_limit(g, crossing::DEFAULT_CYCLE_VERTEX_LIMIT)
}

pub fn median_closure_with_limit(g: &Graph, max_vertices: usize) -> Result<ClosureTrace> {
    if g.vertex_count() == 1 {
        return Err(Error::TrivialGraph);
    }
    let pc = PartialCube::new(g.clone())?;
    let dim = pc.idim();
    let mut labels = pc.embedding.labels.clone();
    let mut rounds = Vec::new();
    let mut graph = pc.graph.clone();
    let round_cap = if dim >= 63 { u64::MAX } else { 1u64 << dim };
    let mut round = 0u64;
    loop {
        let d = DistanceMatrix::new(&graph);
        for u in 0..labels.len() {
            for v in u + 1..labels.len() {
                if labels[u].hamming(&labels[v]) != d.get(u, v) as usize {
                    return Err(Error::Internal(format!(
                        "closure round {round} is not isometric in the hypercube"
                    )));
                }
            }
        }
        let cycles = crossing::isometric_cycles_with_limit(&graph, &d, max_vertices)?;
        let maximal = maximal_isometric_cycles(&cycles, &labels);
        let hulls: BTreeSet<Subcube> = maximal
            .iter()
            .map(|c| Subcube::hull(c.vertices().iter().map(|&v| &labels[v])).unwrap())
            .collect();
        let present: BTreeSet<&Label> = labels.iter().collect();
        let mut fresh = BTreeSet::new();
        for h in &hulls {
            for l in h.labels()? {
                if !present.contains(&l) {
                    fresh.insert(l);
                }
            }
        }
        rounds.push(ClosureRound {
            graph: graph.clone(),
            isometric_cycle_count: cycles.len(),
            maximal_cycles: maximal,
            distinct_hulls: hulls.len(),
            added: fresh.iter().map(|l| l.to_bit_string()).collect(),
        });
        if fresh.is_empty() {
            break;
        }
        round += 1;
        if round >= round_cap {
            return Err(Error::Internal("closure did not stabilize".into()));
        }
        labels.extend(fresh);
        graph = graph_from_labels(&labels);
    }
    let final_pc = PartialCube::new(graph)?;
    if final_pc.idim() != dim {
        return Err(Error::Internal(format!(
            "closure changed the isometric dimension from {dim} to {}",
            final_pc.idim()
        )));
    }
    if !median::all_u_sides_convex(&final_pc) {
        return Err(Error::Internal(
            "closure result is not a median graph".into(),
        ));
    }
    Ok(ClosureTrace {
        dimension: dim,
        rounds,
        labels,
    })
}

/// Compares `G#` with `(G⁺)#`, identifying each Θ-class with the hypercube
/// coordinate it flips.
pub fn crossing_graph_preserved(g: &Graph, trace: &ClosureTrace) -> Result<bool> {
    let pc = PartialCube::new(g.clone())?;
    let plus = PartialCube::new(trace.final_graph().clone())?;
    let coord_of = |p: &PartialCube, labels: &[Label], c: usize| -> usize {
        let (u, v) = p.graph.edge(p.class_edges(c)[0]);
        labels[u]
            .xor(&labels[v])
            .first()
            .expect("edge flips a coordinate")
    };
    if pc.idim() != plus.idim() {
        return Ok(false);
    }
    let k = pc.idim();
    let base: Vec<usize> = (0..k).map(|c| coord_of(&pc, &trace.labels, c)).collect();
    let closed: Vec<usize> = (0..k).map(|c| coord_of(&plus, &trace.labels, c)).collect();
    let mut plus_class_of_coord = vec![usize::MAX; trace.dimension];
    for (c, &coord) in closed.iter().enumerate() {
        plus_class_of_coord[coord] = c;
    }
    let g_sharp = crossing::crossing_graph_of(&pc)?;
    let plus_sharp = crossing::crossing_graph_of(&plus)?;
    for a in 0..k {
        for b in a + 1..k {
            let (pa, pb) = (plus_class_of_coord[base[a]], plus_class_of_coord[base[b]]);
            if pa == usize::MAX || pb == usize::MAX {
                return Ok(false);
            }
            if g_sharp.graph.has_edge(a, b) != plus_sharp.graph.has_edge(pa, pb) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::testutil::isomorphic;

    fn labels(bits: &[&str]) -> Vec<Label> {
        bits.iter()
            .map(|b| Label::from_bit_str(b).unwrap())
            .collect()
    }

    fn strings(ls: &[Label]) -> Vec<String> {
        let mut out: Vec<String> = ls.iter().map(|l| l.to_bit_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn hypercube_hulls() {
        assert_eq!(
            strings(&hull_in_hypercube(&labels(&["000"])).unwrap()),
            ["000"]
        );
        assert_eq!(
            strings(&hull_in_hypercube(&labels(&["000", "110"])).unwrap()),
            ["000", "010", "100", "110"]
        );
        assert_eq!(
            hull_in_hypercube(&labels(&["000", "111"])).unwrap().len(),
            8
        );
        assert!(hull_in_hypercube(&[]).is_err());
    }

    #[test]
    fn hypercube_hull_matches_graph_hull() {
        let q4 = generators::hypercube(4).unwrap();
        let d = DistanceMatrix::new(&q4);
        let as_label = |v: usize| Label::from_indices(4, (0..4).filter(|b| v >> b & 1 == 1));
        for picks in [[0usize, 3, 3], [1, 6, 8], [5, 5, 5], [2, 4, 9]] {
            let set = crate::bitset::VertexSet::from_indices(16, picks);
            let graph_hull: Vec<Label> =
                d.convex_hull(&set).unwrap().iter().map(as_label).collect();
            let mut graph_hull = graph_hull;
            graph_hull.sort();
            let ls: Vec<Label> = picks.iter().map(|&v| as_label(v)).collect();
            assert_eq!(hull_in_hypercube(&ls).unwrap(), graph_hull);
        }
    }

    #[test]
    fn subcube_containment() {
        let a = Subcube::hull(&labels(&["000", "010"])).unwrap();
        let b = Subcube::hull(&labels(&["000", "011"])).unwrap();
        let c = Subcube::hull(&labels(&["100", "110"])).unwrap();
        assert!(a.is_subcube_of(&b));
        assert!(!b.is_subcube_of(&a));
        assert!(!c.is_subcube_of(&b));
        assert!(b.contains(&Label::from_bit_str("001").unwrap()));
    }

    #[test]
    fn maximal_cycles() {
        let c6 = PartialCube::new(generators::even_cycle(3).unwrap()).unwrap();
        let cyc = crossing::isometric_cycles(&c6.graph, &c6.dist).unwrap();
        assert_eq!(maximal_isometric_cycles(&cyc, &c6.embedding.labels), cyc);

        let q3 = PartialCube::new(generators::hypercube(3).unwrap()).unwrap();
        let cyc = crossing::isometric_cycles(&q3.graph, &q3.dist).unwrap();
        let max = maximal_isometric_cycles(&cyc, &q3.embedding.labels);
        assert_eq!(max.len(), 4);
        assert!(max.iter().all(|c| c.len() == 6));
        // faces alone are pairwise incomparable
        let faces: Vec<_> = cyc.iter().filter(|c| c.len() == 4).cloned().collect();
        assert_eq!(
            maximal_isometric_cycles(&faces, &q3.embedding.labels).len(),
            6
        );

        let tri = PartialCube::new(generators::trihex()).unwrap();
        let cyc = crossing::isometric_cycles(&tri.graph, &tri.dist).unwrap();
        let max = maximal_isometric_cycles(&cyc, &tri.embedding.labels);
        let mut got: Vec<Vec<usize>> = max.iter().map(|c| c.vertices().to_vec()).collect();
        got.sort();
        // u1..u6, u3 u7 u8 u9 u10 u4, u5 u4 u10 u11 u12 u13 with u_k = k - 1
        let mut want: Vec<Vec<usize>> = [
            vec![0, 1, 2, 3, 4, 5],
            vec![2, 6, 7, 8, 9, 3],
            vec![4, 3, 9, 10, 11, 12],
        ]
        .iter()
        .map(|c| IsometricCycle::from_cyclic(c).vertices().to_vec())
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn closure_of_small_graphs() {
        let q3 = generators::hypercube(3).unwrap();
        let t = median_closure(&q3).unwrap();
        assert_eq!(t.vertex_counts(), vec![8]);
        assert_eq!(t.final_graph(), &q3);

        let c6 = generators::even_cycle(3).unwrap();
        let t = median_closure(&c6).unwrap();
        assert_eq!(t.vertex_counts(), vec![6, 8]);
        assert_eq!(t.rounds[0].added.len(), 2);
        assert!(isomorphic(
            t.final_graph(),
            &generators::hypercube(3).unwrap()
        ));
        assert!(crossing_graph_preserved(&c6, &t).unwrap());

        let q2 = generators::hypercube(2).unwrap();
        assert_eq!(median_closure(&q2).unwrap().vertex_counts(), vec![4]);

        assert!(matches!(
            median_closure(&Graph::empty(1)),
            Err(Error::TrivialGraph)
        ));
        assert!(matches!(
            median_closure(&generators::complete(3).unwrap()),
            Err(Error::NotPartialCube(_))
        ));
    }

    #[test]
    fn closure_of_trihex() {
        let g = generators::trihex();
        let t = median_closure(&g).unwrap();
        assert_eq!(t.vertex_counts(), vec![13, 19, 20]);
        assert_eq!(t.stabilization_index(), 2);
        assert_eq!(t.dimension, 6);
        assert_eq!(t.rounds[0].maximal_cycles.len(), 3);
        assert_eq!(t.rounds[1].added.len(), 1);
        assert!(crossing_graph_preserved(&g, &t).unwrap());
        let again = median_closure(t.final_graph()).unwrap();
        assert_eq!(again.vertex_counts(), vec![20]);
    }
}
