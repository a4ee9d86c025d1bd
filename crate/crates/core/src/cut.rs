//! Cutting a surface embedding open along a subgraph `Z` built from a dual
//! spanning tree, then capping the new face with an apex vertex.

use std::collections::{HashMap, VecDeque};

use crate::embedding::{
    edge_of, nontree_dual, trace_faces, twin, BfsStructure, Dart, EdgeId, EmbeddedMultigraph,
    FaceSet, VertexId, VerticalPath,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSystem {
    /// Edges dual to the non-tree edges of the dual spanning tree.
    pub q: Vec<EdgeId>,
    /// Vertices of `Z`, ascending.
    pub vertices: Vec<VertexId>,
    /// Edges of `Z`, ascending.
    pub edges: Vec<EdgeId>,
    /// Disjoint vertical paths of the BFS tree covering `V(Z)`.
    pub paths: Vec<VerticalPath>,
    pub genus: usize,
    in_z: Vec<bool>,
    edge_in_z: Vec<bool>,
}

impl CutSystem {
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.in_z[v]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_in_z[e]
    }

    pub fn p(&self) -> usize {
        self.vertices.len()
    }

    pub fn q_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Builds `Q` and `Z`. The dual spanning tree is a BFS of the non-tree dual
/// from face 0 that scans dual edges in ascending primal edge id.
pub fn build_z(g: &EmbeddedMultigraph, faces: &FaceSet, tree: &BfsStructure) -> Result<CutSystem> {
    let dual = nontree_dual(g, faces, tree);
    let genus = dual.edges.len() + 1 - dual.num_nodes;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); dual.num_nodes];
    for (i, &(a, b)) in dual.edges.iter().enumerate() {
        adj[a].push(i);
        if b != a {
            adj[b].push(i);
        }
    }
    let mut in_tree = vec![false; dual.edges.len()];
    let mut seen = vec![false; dual.num_nodes];
    let mut queue = VecDeque::new();
    if dual.num_nodes > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(x) = queue.pop_front() {
        for &i in &adj[x] {
            let (a, b) = dual.edges[i];
            let y = if a == x { b } else { a };
            if !seen[y] {
                seen[y] = true;
                in_tree[i] = true;
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Internal("non-tree dual is disconnected".into()));
    }
    let q: Vec<EdgeId> = (0..dual.edges.len())
        .filter(|&i| !in_tree[i])
        .map(|i| dual.primal[i])
        .collect();
    debug_assert_eq!(q.len(), genus);

    let n = g.num_vertices();
    let mut in_z = vec![false; n];
    let mut edge_in_z = vec![false; g.num_edges()];
    let mut paths = Vec::new();
    for &e in &q {
        edge_in_z[e] = true;
        let (a, b) = g.endpoints(e);
        for x in [a, b] {
            // root path, root first; covered vertices form a prefix
            let mut rp = tree.root_path(x);
            rp.reverse();
            let mut kept = Vec::new();
            for (i, &v) in rp.iter().enumerate() {
                if i > 0 {
                    let (_, pe) = tree.parent[v].expect("non-root vertex has a parent");
                    edge_in_z[pe] = true;
                }
                if !in_z[v] {
                    in_z[v] = true;
                    kept.push(v);
                }
            }
            if !kept.is_empty() {
                paths.push(VerticalPath(kept));
            }
        }
    }
    let vertices = (0..n).filter(|&v| in_z[v]).collect();
    let edges = (0..g.num_edges()).filter(|&e| edge_in_z[e]).collect();
    Ok(CutSystem { q, vertices, edges, paths, genus, in_z, edge_in_z })
}

/// The plane graph obtained by cutting along `Z`.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub graph: EmbeddedMultigraph,
    pub faces: FaceSet,
    /// Index of the single new face.
    pub outer_face: usize,
    /// Vertex walk of the new face.
    pub cycle: Vec<VertexId>,
    /// Darts of the new face, aligned with `cycle`.
    pub cycle_darts: Vec<Dart>,
    /// New vertices created by splitting `Z`, ascending.
    pub z_prime: Vec<VertexId>,
    /// Original vertex of every vertex of the cut graph.
    pub provenance: Vec<VertexId>,
    /// Original edge of every edge of the cut graph.
    pub edge_provenance: Vec<EdgeId>,
    /// Cut-graph vertices for every original vertex.
    pub copies: Vec<Vec<VertexId>>,
    /// Cut-graph edges for every original edge.
    pub edge_copies: Vec<Vec<EdgeId>>,
}

#[derive(Clone, Copy)]
struct CopyInfo {
    first: Dart,
    last: Dart,
}

/// Cuts `g` open along `Z`. Every `Z`-edge is doubled, every `Z`-vertex of
/// `Z`-degree `k` becomes `k` copies, and signatures are normalised away so
/// the result is an orientable plane embedding with a single new face.
pub fn cut_along(g: &EmbeddedMultigraph, cs: &CutSystem) -> Result<CutResult> {
    if cs.genus == 0 || cs.is_empty() {
        return Err(Error::Domain("cutting requires Euler genus at least 1".into()));
    }
    let n = g.num_vertices();
    let m = g.num_edges();
    let is_z_dart = |d: Dart| cs.contains_edge(edge_of(d));

    // vertex ids and the slot -> copy assignment
    let mut copies: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut provenance = Vec::new();
    // copy index (within the vertex) of every dart and of both slots of Z-darts
    let mut dart_copy = vec![usize::MAX; 2 * m];
    let mut after_copy = vec![usize::MAX; 2 * m];
    let mut before_copy = vec![usize::MAX; 2 * m];
    for v in 0..n {
        let rot = g.rotation(v);
        let zpos: Vec<usize> = (0..rot.len()).filter(|&i| is_z_dart(rot[i])).collect();
        if !cs.contains_vertex(v) {
            let id = provenance.len();
            provenance.push(v);
            copies[v].push(id);
            for &d in rot {
                dart_copy[d] = id;
            }
            continue;
        }
        let k = zpos.len();
        if k == 0 {
            return Err(Error::Internal(format!("Z-vertex {v} has no Z-edges")));
        }
        for j in 0..k {
            let id = provenance.len();
            provenance.push(v);
            copies[v].push(id);
            let start = zpos[j];
            let end = zpos[(j + 1) % k];
            after_copy[rot[start]] = id;
            before_copy[rot[end]] = id;
            let mut i = (start + 1) % rot.len();
            while i != end {
                dart_copy[rot[i]] = id;
                i = (i + 1) % rot.len();
            }
        }
    }
    let n2 = provenance.len();

    // edges; for Z-edges remember which new dart fills each slot
    let mut edges = Vec::new();
    let mut edge_provenance = Vec::new();
    let mut edge_copies: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    let mut after_dart = vec![usize::MAX; 2 * m];
    let mut before_dart = vec![usize::MAX; 2 * m];
    let mut new_dart = vec![usize::MAX; 2 * m];
    for e in 0..m {
        let (a, b) = (2 * e, 2 * e + 1);
        let s = g.sign(e);
        if !cs.contains_edge(e) {
            let id = edges.len();
            edges.push((dart_copy[a], dart_copy[b], s));
            edge_provenance.push(e);
            edge_copies[e].push(id);
            new_dart[a] = 2 * id;
            new_dart[b] = 2 * id + 1;
            continue;
        }
        // side 1: before(a) meets after(b) (or before(b) across a twist)
        let id1 = edges.len();
        let v_end1 = if s == 1 { after_copy[b] } else { before_copy[b] };
        edges.push((before_copy[a], v_end1, s));
        before_dart[a] = 2 * id1;
        if s == 1 {
            after_dart[b] = 2 * id1 + 1;
        } else {
            before_dart[b] = 2 * id1 + 1;
        }
        let id2 = edges.len();
        let v_end2 = if s == 1 { before_copy[b] } else { after_copy[b] };
        edges.push((after_copy[a], v_end2, s));
        after_dart[a] = 2 * id2;
        if s == 1 {
            before_dart[b] = 2 * id2 + 1;
        } else {
            after_dart[b] = 2 * id2 + 1;
        }
        edge_provenance.extend([e, e]);
        edge_copies[e].extend([id1, id2]);
    }

    let mut rotation = vec![Vec::new(); n2];
    let mut info: HashMap<VertexId, CopyInfo> = HashMap::new();
    for v in 0..n {
        let rot = g.rotation(v);
        if !cs.contains_vertex(v) {
            rotation[copies[v][0]] = rot.iter().map(|&d| new_dart[d]).collect();
            continue;
        }
        let zpos: Vec<usize> = (0..rot.len()).filter(|&i| is_z_dart(rot[i])).collect();
        let k = zpos.len();
        for j in 0..k {
            let id = copies[v][j];
            let start = zpos[j];
            let end = zpos[(j + 1) % k];
            let first = after_dart[rot[start]];
            let last = before_dart[rot[end]];
            let r = &mut rotation[id];
            r.push(first);
            let mut i = (start + 1) % rot.len();
            while i != end {
                r.push(new_dart[rot[i]]);
                i = (i + 1) % rot.len();
            }
            r.push(last);
            info.insert(id, CopyInfo { first, last });
        }
    }

    // switch local orientations so every signature becomes +1
    let signed = EmbeddedMultigraph::new(n2, edges.clone(), rotation.clone())?;
    let mut orient = vec![0i8; n2];
    orient[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &d in signed.rotation(v) {
            let w = signed.head(d);
            let want = orient[v] * signed.sign(edge_of(d));
            if orient[w] == 0 {
                orient[w] = want;
                reached += 1;
                queue.push_back(w);
            } else if orient[w] != want {
                return Err(Error::Internal("cut graph is not orientable".into()));
            }
        }
    }
    if reached != n2 {
        return Err(Error::Internal("cut graph is disconnected".into()));
    }
    for v in 0..n2 {
        if orient[v] == -1 {
            rotation[v].reverse();
        }
    }
    let plain: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v, 1i8)).collect();
    let graph = EmbeddedMultigraph::new(n2, plain, rotation)?;
    let faces = trace_faces(&graph);

    // the new face is the one through the wrap-around corners of the copies
    let mut outer = None;
    for (fi, f) in faces.faces.iter().enumerate() {
        let k = f.walk.len();
        for i in 0..k {
            let t = twin(f.walk[i].0);
            let out = f.walk[(i + 1) % k].0;
            let w = graph.tail(out);
            if let Some(ci) = info.get(&w) {
                let wrap = if orient[w] == 1 {
                    t == ci.last && out == ci.first
                } else {
                    t == ci.first && out == ci.last
                };
                if wrap {
                    match outer {
                        None => outer = Some(fi),
                        Some(o) if o != fi => {
                            return Err(Error::Internal(
                                "cut produced more than one new face".into(),
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let outer_face = outer.ok_or_else(|| Error::Internal("cut produced no new face".into()))?;
    let f_orig = trace_faces(g).len();
    let s = faces.len() as i64 - f_orig as i64;
    if s != 1 {
        return Err(Error::Internal(format!("cut created {s} new faces, expected 1")));
    }
    let genus = crate::embedding::euler_genus_with_faces(&graph, faces.len())?;
    if genus != 0 {
        return Err(Error::Internal(format!("cut graph has Euler genus {genus}")));
    }
    let cycle = faces.vertex_walks[outer_face].clone();
    let cycle_darts: Vec<Dart> = faces.faces[outer_face].darts().collect();
    let mut z_prime: Vec<VertexId> = info.keys().copied().collect();
    z_prime.sort_unstable();
    let mut cyc_sorted = cycle.clone();
    cyc_sorted.sort_unstable();
    if cyc_sorted != z_prime {
        return Err(Error::Internal("new face boundary is not exactly the split vertices".into()));
    }
    let (p, q, g_) = (cs.p(), cs.q_count(), cs.genus);
    if q != p - 1 + g_ || n2 != n + p - 2 + 2 * g_ || graph.num_edges() != m + p - 1 + g_ {
        return Err(Error::Internal("cut counting identities fail".into()));
    }
    Ok(CutResult {
        graph,
        faces,
        outer_face,
        cycle,
        cycle_darts,
        z_prime,
        provenance,
        edge_provenance,
        copies,
        edge_copies,
    })
}

/// Plane graph with an apex vertex inside the new face of a cut.
#[derive(Debug, Clone)]
pub struct ApexGraph {
    pub graph: EmbeddedMultigraph,
    pub apex: VertexId,
    /// Faces of the cut graph other than the new face, as dart lists of `graph`.
    pub inner_faces: Vec<Vec<Dart>>,
}

/// Adds `r+` inside the new face, adjacent to every vertex of its boundary.
pub fn attach_apex(r: &CutResult) -> Result<ApexGraph> {
    let g = &r.graph;
    let n = g.num_vertices();
    let m = g.num_edges();
    let apex = n;
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    let k = r.cycle.len();
    if k < 3 {
        return Err(Error::Internal(format!("new face has length {k}")));
    }
    for &c in &r.cycle {
        edges.push((c, apex));
    }
    let spoke_in = |i: usize| 2 * (m + i % k); // c_i -> apex
    let spoke_out = |i: usize| 2 * (m + i % k) + 1; // apex -> c_i
    let mut faces: Vec<Vec<Dart>> = Vec::new();
    for (fi, f) in r.faces.faces.iter().enumerate() {
        if fi != r.outer_face {
            faces.push(f.darts().collect());
        }
    }
    let inner_faces = faces.clone();
    for i in 0..k {
        faces.push(vec![r.cycle_darts[i], spoke_in(i + 1), spoke_out(i)]);
    }
    let graph = EmbeddedMultigraph::from_face_darts(n + 1, &edges, &faces)?;
    Ok(ApexGraph { graph, apex, inner_faces })
}

/// Spanning tree `T+` of the apexed graph rooted at the apex.
#[derive(Debug, Clone)]
pub struct TPlus {
    pub root: VertexId,
    pub parent: Vec<Option<VertexId>>,
    /// Hamiltonian path of the new face, `v+` first.
    pub path: VerticalPath,
}

impl TPlus {
    pub fn num_edges(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }
}

/// `P+` is the new-face cycle minus its lexicographically smallest edge
/// (endpoints sorted); `v+` is that edge's smaller endpoint. The tree is
/// `P+`, the edge `r+ v+`, one edge from each outside-`Z` tree child to its
/// copy parent, and the forest `T - V(Z)`.
pub fn build_tplus(
    ap: &ApexGraph,
    tree: &BfsStructure,
    cut: &CutResult,
    cs: &CutSystem,
) -> Result<TPlus> {
    let k = cut.cycle.len();
    let c = &cut.cycle;
    let key = |i: usize| {
        let (a, b) = (c[i], c[(i + 1) % k]);
        (a.min(b), a.max(b))
    };
    let i0 = (0..k).min_by_key(|&i| key(i)).unwrap();
    let (a, b) = (c[i0], c[(i0 + 1) % k]);
    let path: Vec<VertexId> = if a < b {
        (0..k).map(|t| c[(i0 + k - t) % k]).collect()
    } else {
        (0..k).map(|t| c[(i0 + 1 + t) % k]).collect()
    };
    let nplus = ap.graph.num_vertices();
    let mut parent = vec![None; nplus];
    parent[path[0]] = Some(ap.apex);
    for w in path.windows(2) {
        parent[w[1]] = Some(w[0]);
    }
    for (v2, &orig) in cut.provenance.iter().enumerate() {
        if cs.contains_vertex(orig) {
            continue;
        }
        if let Some((p, pe)) = tree.parent[orig] {
            let par = if cs.contains_vertex(p) {
                let ne = cut.edge_copies[pe][0];
                let (x, y) = cut.graph.endpoints(ne);
                if x == v2 {
                    y
                } else {
                    x
                }
            } else {
                cut.copies[p][0]
            };
            parent[v2] = Some(par);
        }
    }
    let t = TPlus { root: ap.apex, parent, path: VerticalPath(path) };
    if t.num_edges() != nplus - 1 {
        return Err(Error::Internal("T+ has the wrong number of edges".into()));
    }
    // every vertex reaches the root
    let mut state = vec![0u8; nplus];
    state[ap.apex] = 2;
    for v in 0..nplus {
        let mut chain = Vec::new();
        let mut x = v;
        while state[x] == 0 {
            state[x] = 1;
            chain.push(x);
            x = t.parent[x].ok_or_else(|| Error::Internal("T+ is not connected".into()))?;
        }
        if state[x] == 1 {
            return Err(Error::Internal("T+ has a cycle".into()));
        }
        for y in chain {
            state[y] = 2;
        }
    }
    Ok(t)
}

/// Fan-triangulates every face longer than `d` from its smallest vertex.
/// Returns the new graph and a flag per edge marking the added chords.
pub fn triangulate_long_faces(
    g: &EmbeddedMultigraph,
    d: usize,
) -> Result<(EmbeddedMultigraph, Vec<bool>)> {
    let faces = trace_faces(g);
    if !g.is_orientable_signature() {
        return Err(Error::Domain("triangulation expects an orientable embedding".into()));
    }
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    let mut aux = vec![false; edges.len()];
    let mut out: Vec<Vec<Dart>> = Vec::new();
    for f in &faces.faces {
        let mut l: Vec<Dart> = f.darts().collect();
        if l.len() <= d {
            out.push(l);
            continue;
        }
        let s = (0..l.len()).min_by_key(|&i| g.tail(l[i])).unwrap();
        l.rotate_left(s);
        let c0 = g.tail(l[0]);
        while l.len() > 3 {
            let c2 = g.tail(l[2]);
            let e = edges.len();
            edges.push((c0, c2));
            aux.push(true);
            out.push(vec![l[0], l[1], 2 * e + 1]);
            let mut rest = vec![2 * e];
            rest.extend_from_slice(&l[2..]);
            l = rest;
        }
        out.push(l);
    }
    let h = EmbeddedMultigraph::from_face_darts(g.num_vertices(), &edges, &out)?;
    Ok((h.with_root(g.root()), aux))
}
