//! Certificate checking, kept independent of the decomposition code: faces,
//! genus, closure and depths are all recomputed here from the raw rotation
//! system.

use std::collections::{HashMap, HashSet};

use rustworkx_core::petgraph::graph::UnGraph;
use rustworkx_core::planar::is_planar;

use crate::assemble::{ell_bound, Certificate};
use crate::embedding::EmbeddedMultigraph;
use crate::graph::SimpleGraph;
use crate::tripods::{PartKind, TreeDecomposition};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    /// `(check, detail)` for every failed check.
    pub failures: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, check: &str, detail: impl Into<String>) {
        self.failures.push((check.to_string(), detail.into()));
    }

    /// One `FAIL <check> <detail>` line per failure.
    pub fn lines(&self) -> Vec<String> {
        self.failures.iter().map(|(c, d)| format!("FAIL {c} {d}")).collect()
    }
}

/// Vertex sequences of all faces. Each boundary is traced once per
/// direction; only walks started from a `+` state on their smallest dart are
/// kept, so every face appears once.
pub fn face_vertex_walks(g: &EmbeddedMultigraph) -> Vec<Vec<usize>> {
    let nd = g.num_darts();
    let step = |d: usize, o: i8| -> (usize, i8) {
        let o2 = o * g.sign(d / 2);
        let t = d ^ 1;
        if o2 > 0 {
            (g.succ(t), o2)
        } else {
            (g.pred(t), o2)
        }
    };
    let mut seen = vec![[false; 2]; nd];
    let mut walks = Vec::new();
    for d0 in 0..nd {
        for o0 in [1i8, -1] {
            let oi = usize::from(o0 < 0);
            if seen[d0][oi] {
                continue;
            }
            let mut states = Vec::new();
            let (mut d, mut o) = (d0, o0);
            loop {
                seen[d][usize::from(o < 0)] = true;
                states.push((d, o));
                (d, o) = step(d, o);
                if (d, o) == (d0, o0) {
                    break;
                }
            }
            // keep the orbit whose least state is positively oriented
            let least = *states.iter().min_by_key(|(d, o)| (*d, -*o)).unwrap();
            let rev_least = states.iter().map(|&(d, _)| d ^ 1).min().unwrap();
            let keep = match least.0.cmp(&rev_least) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => least.1 > 0,
            };
            if keep {
                walks.push(states.iter().map(|&(d, _)| g.tail(d)).collect());
            }
        }
    }
    walks
}

/// Euler genus from an independent face count.
pub fn recompute_genus(g: &EmbeddedMultigraph) -> Option<usize> {
    let f = face_vertex_walks(g).len().max(usize::from(g.num_edges() == 0)) as i64;
    let v = 2 - g.num_vertices() as i64 + g.num_edges() as i64 - f;
    usize::try_from(v).ok()
}

/// `G^(d)` from its raw face walks; `None` if some face is not a cycle.
pub fn recompute_closure(g: &EmbeddedMultigraph, d: usize) -> Option<SimpleGraph> {
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    for w in face_vertex_walks(g) {
        let distinct: HashSet<usize> = w.iter().copied().collect();
        if distinct.len() != w.len() {
            return None;
        }
        if w.len() <= d {
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    edges.push((w[i], w[j]));
                }
            }
        }
    }
    Some(SimpleGraph::from_edges(g.num_vertices(), edges))
}

pub fn check_planarity(h: &SimpleGraph) -> bool {
    let n = h.num_vertices();
    if n >= 3 && h.num_edges() > 3 * n - 6 {
        return false;
    }
    let mut pg = UnGraph::<(), ()>::with_capacity(n, h.num_edges());
    for _ in 0..n {
        pg.add_node(());
    }
    for (u, v) in h.edges() {
        pg.add_edge((u as u32).into(), (v as u32).into(), ());
    }
    is_planar(&pg)
}

/// Checks that `td` is a tree decomposition of `h`; returns the problems.
pub fn check_tree_decomposition(h: &SimpleGraph, td: &TreeDecomposition) -> Vec<String> {
    let mut out = Vec::new();
    let k = td.bags.len();
    if td.parent.len() != k {
        out.push("parent list length differs from bag count".into());
        return out;
    }
    let n = h.num_vertices();
    if n > 0 && k == 0 {
        out.push("no bags".into());
        return out;
    }
    // tree shape: one root, parent chains terminate
    let roots = td.parent.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        out.push(format!("{roots} root bags"));
    }
    for i in 0..k {
        let mut x = i;
        let mut steps = 0;
        while let Some(p) = td.parent[x] {
            if p >= k || steps > k {
                out.push(format!("bag {i} has a broken parent chain"));
                break;
            }
            x = p;
            steps += 1;
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                out.push(format!("bag {i} names unknown node {v}"));
                return out;
            }
            holders[v].push(i);
        }
    }
    let bagsets: Vec<HashSet<usize>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    for (v, hs) in holders.iter().enumerate() {
        if hs.is_empty() {
            out.push(format!("node {v} is in no bag"));
            continue;
        }
        // bags holding v are connected iff exactly one of them has its parent outside
        let tops = hs
            .iter()
            .filter(|&&b| td.parent[b].is_none_or(|p| !bagsets[p].contains(&v)))
            .count();
        if tops != 1 {
            out.push(format!("bags holding node {v} are not connected"));
        }
    }
    for (u, v) in h.edges() {
        if !holders[u].iter().any(|&b| bagsets[b].contains(&v)) {
            out.push(format!("edge {u}-{v} is in no bag"));
        }
    }
    out
}

/// Exact treewidth by dynamic programming over vertex subsets. Refuses graphs
/// with more than 12 nodes.
pub fn exact_treewidth(h: &SimpleGraph) -> Option<usize> {
    let n = h.num_vertices();
    if n > 12 {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let adj: Vec<u32> =
        (0..n).map(|v| h.neighbours(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    // q(s, v): neighbours of v outside s reachable through s
    let q = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut outside = 0u32;
        while let Some(x) = stack.pop() {
            let mut nb = adj[x] & !seen;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << w;
                if s & (1 << w) != 0 {
                    stack.push(w);
                } else {
                    outside |= 1 << w;
                }
            }
        }
        outside.count_ones() as usize
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![usize::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            best = best.min(tw[rest as usize].max(q(rest, v)));
        }
        tw[s as usize] = best;
    }
    Some(tw[full as usize])
}

/// Runs every check of `cert` against `frame` with parameter `d`.
pub fn verify(frame: &EmbeddedMultigraph, d: usize, cert: &Certificate) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let n = frame.num_vertices();
    if cert.n != n || cert.d != d {
        rep.fail("header", format!("certificate is for n={} d={}, input has n={n} d={d}", cert.n, cert.d));
        return rep;
    }
    if d < 3 {
        rep.fail("header", format!("d={d} is below 3"));
        return rep;
    }
    let genus = match recompute_genus(frame) {
        Some(g) => g,
        None => {
            rep.fail("genus", "negative Euler characteristic defect");
            return rep;
        }
    };
    if genus != cert.genus {
        rep.fail("genus", format!("certificate says {}, embedding has {genus}", cert.genus));
    }
    let Some(closure) = recompute_closure(frame, d) else {
        rep.fail("frame", "some face is not bounded by a cycle");
        return rep;
    };
    if cert.root >= n {
        rep.fail("header", format!("root {} out of range", cert.root));
        return rep;
    }
    let simple = SimpleGraph::from_edges(n, frame.edges().map(|(_, u, v)| (u, v)));
    let depth = simple.distances_from(cert.root);
    if depth.contains(&usize::MAX) {
        rep.fail("frame", "graph is disconnected");
        return rep;
    }
    let nodes = cert.h.num_vertices();
    if cert.parts.len() != nodes {
        rep.fail("parts", format!("{} parts for {nodes} H nodes", cert.parts.len()));
    }
    let half = d / 2;

    // MAP: range, layers, injectivity, canonical copies
    let mut cells: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut seen = HashSet::new();
    for (v, &(a, l, c)) in cert.map.iter().enumerate() {
        if a >= nodes {
            rep.fail("map", format!("vertex {v} maps to unknown node {a}"));
            continue;
        }
        if l != depth[v] / half {
            rep.fail("layering", format!("vertex {v} has layer {l}, expected {}", depth[v] / half));
        }
        if !seen.insert((a, l, c)) {
            rep.fail("injective", format!("vertex {v} shares image ({a},{l},{c})"));
        }
        cells.entry((a, l)).or_default().push((v, c));
    }
    let mut ell = 0;
    for ((a, l), members) in &cells {
        ell = ell.max(members.len());
        for (i, &(v, c)) in members.iter().enumerate() {
            if c != i {
                rep.fail("copies", format!("vertex {v} in cell ({a},{l}) has copy {c}, expected {i}"));
            }
        }
    }
    if ell != cert.ell {
        rep.fail("ell", format!("ELL is {}, largest cell has {ell}", cert.ell));
    }
    let bound = ell_bound(genus, d);
    if cert.ell > bound {
        rep.fail("ell", format!("ELL {} exceeds {bound}", cert.ell));
    }

    // containment in H ⊠ P ⊠ K_l
    for (u, v) in closure.edges() {
        let (a, la, _) = cert.map[u];
        let (b, lb, _) = cert.map[v];
        if a >= nodes || b >= nodes {
            continue;
        }
        if a != b && !cert.h.has_edge(a, b) {
            rep.fail("containment", format!("edge {u}-{v} maps to non-adjacent nodes {a},{b}"));
        }
        if la.abs_diff(lb) > 1 {
            rep.fail("containment", format!("edge {u}-{v} spans layers {la},{lb}"));
        }
    }

    // parts agree with MAP and have the promised shape
    let mut owner = vec![usize::MAX; n];
    let adjacent_down = |x: usize, y: usize| simple.has_edge(x, y) && depth[y] == depth[x] + 1;
    for (i, p) in cert.parts.iter().enumerate() {
        for v in p.vertices() {
            if v >= n {
                rep.fail("parts", format!("part {i} names unknown vertex {v}"));
                continue;
            }
            if owner[v] != usize::MAX {
                rep.fail("parts", format!("vertex {v} is in parts {} and {i}", owner[v]));
            }
            owner[v] = i;
            if cert.map[v].0 != i {
                rep.fail("parts", format!("vertex {v} is listed in part {i} but maps to {}", cert.map[v].0));
            }
        }
        for (j, y) in p.y.iter().enumerate() {
            let ok = !y.0.is_empty()
                && y.0.iter().all(|&v| v < n)
                && y.0.windows(2).all(|w| adjacent_down(w[0], w[1]));
            if !ok {
                rep.fail("parts", format!("path {j} of part {i} is not vertical"));
            }
        }
        match p.kind {
            PartKind::Special => {
                if i != 0 {
                    rep.fail("parts", format!("special part at index {i}"));
                }
                if !p.x.is_empty() || p.y.len() > 2 * genus {
                    rep.fail("parts", format!("part {i} is not a union of at most {} vertical paths", 2 * genus));
                }
            }
            PartKind::Tripod => {
                if p.y.len() > 3 || p.x.len() + 3 > d {
                    rep.fail("parts", format!("part {i} has {} legs and {} extra vertices", p.y.len(), p.x.len()));
                }
            }
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        rep.fail("parts", format!("vertex {v} is in no part"));
    }

    // H
    if !check_planarity(&cert.h) {
        rep.fail("planarity", "H is not planar");
    }
    for problem in check_tree_decomposition(&cert.h, &cert.td) {
        rep.fail("treedecomp", problem);
    }
    if cert.td.width() > 3 {
        rep.fail("treewidth", format!("decomposition has width {}", cert.td.width()));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_plane_triangulation, gen_toroidal_grid};

    fn complete(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn treewidth_small_graphs() {
        assert_eq!(exact_treewidth(&complete(5)), Some(4));
        assert_eq!(exact_treewidth(&complete(1)), Some(0));
        let cycle = SimpleGraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert_eq!(exact_treewidth(&cycle), Some(2));
        let path = SimpleGraph::from_edges(5, (0..4).map(|i| (i, i + 1)));
        assert_eq!(exact_treewidth(&path), Some(1));
        let grid = SimpleGraph::from_edges(
            9,
            (0..9).flat_map(|v| {
                let mut e = Vec::new();
                if v % 3 < 2 {
                    e.push((v, v + 1));
                }
                if v < 6 {
                    e.push((v, v + 3));
                }
                e
            }),
        );
        assert_eq!(exact_treewidth(&grid), Some(3));
        assert_eq!(exact_treewidth(&complete(13)), None);
    }

    #[test]
    fn planarity() {
        assert!(check_planarity(&complete(4)));
        assert!(!check_planarity(&complete(5)));
        let k33 = SimpleGraph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))));
        assert!(!check_planarity(&k33));
    }

    #[test]
    fn genus_recomputed() {
        assert_eq!(recompute_genus(&gen_toroidal_grid(3, 4).unwrap()), Some(2));
        assert_eq!(recompute_genus(&gen_plane_triangulation(20, 3).unwrap()), Some(0));
    }

    #[test]
    fn bad_decomposition_detected() {
        let h = complete(3);
        let td = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], parent: vec![None, Some(0)] };
        assert!(!check_tree_decomposition(&h, &td).is_empty());
        let td = TreeDecomposition { bags: vec![vec![0, 1, 2]], parent: vec![None] };
        assert!(check_tree_decomposition(&h, &td).is_empty());
    }
}
