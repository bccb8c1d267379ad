//! Brute-force helpers shared by unit tests.

use crate::graph::Graph;

/// Isomorphism by trying every permutation; fine up to about 9 vertices.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    search(a, b, 0, &mut perm, &mut used)
}

fn search(a: &Graph, b: &Graph, i: usize, perm: &mut [usize], used: &mut [bool]) -> bool {
    let n = a.vertex_count();
    if i == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] || a.degree(i) != b.degree(cand) {
            continue;
        }
        if (0..i).all(|j| a.has_edge(i, j) == b.has_edge(cand, perm[j])) {
            used[cand] = true;
            perm[i] = cand;
            if search(a, b, i + 1, perm, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    false
}
