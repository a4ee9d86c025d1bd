//! Brute-force oracles shared by the integration tests. They only use the raw
//! rotation system, never the library's face tracer or closure.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use framedprod::assemble::Certificate;
use framedprod::embedding::{trace_faces, EmbeddedMultigraph};
use framedprod::frontends::{Crossing, FaceLabel};

/// Faces of an orientable embedding as `(darts, vertex walk)`, found by
/// following `x -> succ(twin(x))`.
pub fn faces(g: &EmbeddedMultigraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let nd = 2 * g.num_edges();
    let mut seen = vec![false; nd];
    let mut out = Vec::new();
    for start in 0..nd {
        if seen[start] {
            continue;
        }
        let (mut ds, mut ws) = (Vec::new(), Vec::new());
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            ds.push(x);
            ws.push(g.tail(x));
            x = g.succ(x ^ 1);
        }
        out.push((ds, ws));
    }
    out
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Edge set of `G^(d)`: graph edges plus all pairs on faces that are cycles
/// of length at most `d`.
pub fn closure(g: &EmbeddedMultigraph, d: usize) -> HashSet<(usize, usize)> {
    let mut out: HashSet<_> =
        g.edge_list().into_iter().filter(|e| e.0 != e.1).map(|(u, v, _)| key(u, v)).collect();
    for (_, w) in faces(g) {
        let distinct: BTreeSet<usize> = w.iter().copied().collect();
        if w.len() <= d && distinct.len() == w.len() {
            for &a in &w {
                for &b in &w {
                    if a < b {
                        out.insert((a, b));
                    }
                }
            }
        }
    }
    out
}

/// Map graph edges as pairs of library face ids: nations sharing a vertex.
pub fn map_edges(g: &EmbeddedMultigraph, labels: &[FaceLabel]) -> BTreeSet<(usize, usize)> {
    let lib = trace_faces(g);
    let mine = faces(g);
    let mut face_of_dart = vec![0; 2 * g.num_edges()];
    for (i, (ds, _)) in mine.iter().enumerate() {
        for &x in ds {
            face_of_dart[x] = i;
        }
    }
    let nations: Vec<(usize, BTreeSet<usize>)> = (0..lib.len())
        .filter(|&f| labels[f] == FaceLabel::Nation)
        .map(|f| {
            let x = lib.faces[f].darts().next().unwrap();
            (f, mine[face_of_dart[x]].1.iter().copied().collect())
        })
        .collect();
    let mut out = BTreeSet::new();
    for (i, (a, va)) in nations.iter().enumerate() {
        for (b, vb) in &nations[i + 1..] {
            if !va.is_disjoint(vb) {
                out.insert(key(*a, *b));
            }
        }
    }
    out
}

/// Drawn graph of a planarization: uncrossed edges plus the two edges
/// through every crossing.
pub fn drawn_edges(p: &EmbeddedMultigraph, xs: &[Crossing]) -> BTreeSet<(usize, usize)> {
    let dummies: HashSet<usize> = xs.iter().map(|c| c.dummy).collect();
    let mut out: BTreeSet<_> = p
        .edge_list()
        .into_iter()
        .filter(|(u, v, _)| !dummies.contains(u) && !dummies.contains(v))
        .map(|(u, v, _)| key(u, v))
        .collect();
    for c in xs {
        let far: Vec<usize> = c
            .halves
            .iter()
            .map(|&e| {
                let (u, v) = p.endpoints(e);
                if u == c.dummy {
                    v
                } else {
                    u
                }
            })
            .collect();
        out.insert(key(far[0], far[2]));
        out.insert(key(far[1], far[3]));
    }
    out
}

/// Shortest-path depths from `s`.
pub fn depths(g: &EmbeddedMultigraph, s: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); g.num_vertices()];
    for (u, v, _) in g.edge_list() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[s] = 0;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Every closure edge lands on equal or H-adjacent nodes in equal or adjacent
/// layers, and the `(node, layer, copy)` triples are distinct. Returns the
/// first offending edge.
pub fn containment(
    g: &EmbeddedMultigraph,
    c: &Certificate,
) -> Result<(), String> {
    let mut seen = HashSet::new();
    for (v, t) in c.map.iter().enumerate() {
        if !seen.insert(*t) {
            return Err(format!("vertex {v} shares {t:?}"));
        }
    }
    for (u, v) in closure(g, c.d) {
        let (a, la, _) = c.map[u];
        let (b, lb, _) = c.map[v];
        if !(a == b || c.h.has_edge(a, b)) || la.abs_diff(lb) > 1 {
            return Err(format!("edge {u}-{v} maps to ({a},{la}) and ({b},{lb})"));
        }
    }
    Ok(())
}

/// Layers must be BFS depth blocks of size `floor(d/2)` from the root.
pub fn layering(g: &EmbeddedMultigraph, c: &Certificate) -> Result<(), String> {
    let dep = depths(g, c.root);
    let h = (c.d / 2).max(1);
    for (v, t) in c.map.iter().enumerate() {
        if t.1 != dep[v] / h {
            return Err(format!("vertex {v} in layer {} at depth {}", t.1, dep[v]));
        }
    }
    Ok(())
}

/// Largest `(node, layer)` cell.
pub fn largest_cell(c: &Certificate) -> usize {
    let mut cells = std::collections::HashMap::new();
    for t in &c.map {
        *cells.entry((t.0, t.1)).or_insert(0usize) += 1;
    }
    cells.into_values().max().unwrap_or(0)
}
