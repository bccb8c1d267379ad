//! Shortest-path metric: distances, intervals, geodesic convexity, medians.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Dense all-pairs hop distances.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub const INFINITE: u32 = u32::MAX;

    /// Breadth-first search from every vertex.
    pub fn new(g: &Graph) -> DistanceMatrix {
        let n = g.vertex_count();
        let mut dist = vec![Self::INFINITE; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in g.neighbors(u) {
                    if row[w] == Self::INFINITE {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: VertexId) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.get(u, v) != Self::INFINITE
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != Self::INFINITE)
            .max()
            .unwrap_or(0)
    }

    #[inline]
    fn on_geodesic(&self, u: VertexId, w: VertexId, v: VertexId) -> bool {
        let (a, b, c) = (self.get(u, w), self.get(w, v), self.get(u, v));
        a != Self::INFINITE && b != Self::INFINITE && a + b == c
    }

    /// `I(u, v)`: every vertex on some shortest `u`-`v` path.
    pub fn interval(&self, u: VertexId, v: VertexId) -> Result<VertexSet> {
        if !self.connected(u, v) {
            return Err(Error::Disconnected { u, v });
        }
        Ok(VertexSet::from_indices(
            self.n,
            (0..self.n).filter(|&w| self.on_geodesic(u, w, v)),
        ))
    }

    /// Union of `I(u, v)` over all pairs of `set`.
    pub fn ell_step(&self, set: &VertexSet) -> Result<VertexSet> {
        let members: Vec<_> = set.iter().collect();
        let mut out = set.clone();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !self.connected(u, v) {
                    return Err(Error::Disconnected { u, v });
                }
                for w in 0..self.n {
                    if !out.contains(w) && self.on_geodesic(u, w, v) {
                        out.insert(w);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Smallest convex set containing `set`. Grows the set by every neighbor
    /// `y` of a member `x` that is one step closer than `x` to another member;
    /// the fixpoint is the same as iterating [`Self::ell_step`].
    pub fn convex_hull_in(&self, g: &Graph, set: &VertexSet) -> Result<VertexSet> {
        if let Some(first) = set.first() {
            if let Some(v) = set.iter().find(|&v| !self.connected(first, v)) {
                return Err(Error::Disconnected { u: first, v });
            }
        }
        let mut cur = set.clone();
        loop {
            let members: Vec<_> = cur.iter().collect();
            let mut next = cur.clone();
            for &u in &members {
                let row = self.row(u);
                for &x in &members {
                    for &y in g.neighbors(x) {
                        if row[y] + 1 == row[x] {
                            next.insert(y);
                        }
                    }
                }
            }
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Smallest convex set containing `set`: `ell_step` iterated to its fixpoint.
    pub fn convex_hull(&self, set: &VertexSet) -> Result<VertexSet> {
        let mut cur = set.clone();
        // each non-final round adds a vertex, so n rounds suffice
        for _ in 0..=self.n {
            let next = self.ell_step(&cur)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::Internal("convex hull did not stabilize".into()))
    }

    /// Geodesic convexity. Disconnected sets (other than the empty set and
    /// singletons) are never convex. A connected `S` is convex iff no member
    /// `x` has a neighbor outside `S` that is closer than `x` to another
    /// member.
    pub fn is_convex(&self, g: &Graph, set: &VertexSet) -> bool {
        if set.count() <= 1 {
            return true;
        }
        if !g.is_connected_within(set) {
            return false;
        }
        let members: Vec<_> = set.iter().collect();
        members.iter().all(|&u| {
            let row = self.row(u);
            members.iter().all(|&x| {
                g.neighbors(x)
                    .iter()
                    .all(|&y| set.contains(y) || row[y] + 1 != row[x])
            })
        })
    }

    /// Convexity straight from the definition: no vertex outside `S` lies on
    /// a geodesic between two members.
    pub fn is_convex_by_intervals(&self, g: &Graph, set: &VertexSet) -> bool {
        if set.count() <= 1 {
            return true;
        }
        if !g.is_connected_within(set) {
            return false;
        }
        let members: Vec<_> = set.iter().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if (0..self.n).any(|w| !set.contains(w) && self.on_geodesic(u, w, v)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `G[S]` preserves all distances of `G` between members of `S`.
    pub fn is_isometric(&self, g: &Graph, set: &VertexSet) -> bool {
        let (sub, map) = g.induced_subgraph(set);
        let sub_d = DistanceMatrix::new(&sub);
        set.iter().all(|u| {
            set.iter()
                .all(|v| sub_d.get(map[u].unwrap(), map[v].unwrap()) == self.get(u, v))
        })
    }

    /// All vertices lying on a geodesic between each pair of `u`, `v`, `w`.
    pub fn medians(&self, u: VertexId, v: VertexId, w: VertexId) -> VertexSet {
        VertexSet::from_indices(
            self.n,
            (0..self.n).filter(|&x| {
                self.on_geodesic(u, x, v) && self.on_geodesic(u, x, w) && self.on_geodesic(v, x, w)
            }),
        )
    }
}

impl std::fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut l = f.debug_list();
        for u in 0..self.n {
            l.entry(&self.row(u));
        }
        l.finish()
    }
}
