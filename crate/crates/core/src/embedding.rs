//! Dart-based embedded multigraphs.
//!
//! Edge `e` owns darts `2e` and `2e + 1`; dart `2e` leaves the first endpoint
//! and dart `2e + 1` leaves the second. The rotation at a vertex is the cyclic
//! order of the darts leaving it. Each edge carries a signature in `{+1, -1}`;
//! an all-positive signature describes an orientable embedding.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Dart = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn edge_of(d: Dart) -> EdgeId {
    d >> 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedMultigraph {
    ends: Vec<[VertexId; 2]>,
    signs: Vec<i8>,
    rotation: Vec<Vec<Dart>>,
    pos: Vec<usize>,
    root: Option<VertexId>,
}

impl EmbeddedMultigraph {
    /// Builds an embedding from edge endpoints (with signatures) and the
    /// rotation at every vertex. Rejects rotations that are not permutations
    /// of the incident darts.
    pub fn new(
        n: usize,
        edges: Vec<(VertexId, VertexId, i8)>,
        rotation: Vec<Vec<Dart>>,
    ) -> Result<Self> {
        if rotation.len() != n {
            return Err(Error::Structural(format!(
                "expected rotations for {n} vertices, got {}",
                rotation.len()
            )));
        }
        let mut ends = Vec::with_capacity(edges.len());
        let mut signs = Vec::with_capacity(edges.len());
        for (e, &(u, v, s)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Structural(format!("edge {e} has an unknown endpoint")));
            }
            if s != 1 && s != -1 {
                return Err(Error::Structural(format!("edge {e} has signature {s}")));
            }
            ends.push([u, v]);
            signs.push(s);
        }
        let nd = 2 * ends.len();
        let mut pos = vec![usize::MAX; nd];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= nd {
                    return Err(Error::Structural(format!("vertex {v}: unknown dart {d}")));
                }
                if ends[edge_of(d)][d & 1] != v {
                    return Err(Error::Structural(format!(
                        "vertex {v}: dart {}.{} does not leave this vertex",
                        edge_of(d),
                        d & 1
                    )));
                }
                if pos[d] != usize::MAX {
                    return Err(Error::Structural(format!(
                        "dart {}.{} listed twice",
                        edge_of(d),
                        d & 1
                    )));
                }
                pos[d] = i;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Structural(format!(
                "dart {}.{} missing from rotation of vertex {}",
                edge_of(d),
                d & 1,
                ends[edge_of(d)][d & 1]
            )));
        }
        Ok(EmbeddedMultigraph { ends, signs, rotation, pos, root: None })
    }

    /// Builds an orientable embedding from its facial walks. Each face is a
    /// cyclic list of darts; consecutive darts `x, y` satisfy
    /// `head(x) == tail(y)` and every dart occurs in exactly one face.
    pub fn from_face_darts(
        n: usize,
        edges: &[(VertexId, VertexId)],
        faces: &[Vec<Dart>],
    ) -> Result<Self> {
        let nd = 2 * edges.len();
        let mut face_next = vec![usize::MAX; nd];
        let tail = |d: Dart| if d & 1 == 0 { edges[d >> 1].0 } else { edges[d >> 1].1 };
        for (fi, f) in faces.iter().enumerate() {
            for (i, &x) in f.iter().enumerate() {
                let y = f[(i + 1) % f.len()];
                if x >= nd || y >= nd {
                    return Err(Error::Structural(format!("face {fi}: unknown dart")));
                }
                if tail(twin(x)) != tail(y) {
                    return Err(Error::Structural(format!("face {fi}: darts do not chain")));
                }
                if face_next[x] != usize::MAX {
                    return Err(Error::Structural(format!("face {fi}: dart {x} reused")));
                }
                face_next[x] = y;
            }
        }
        if face_next.contains(&usize::MAX) {
            return Err(Error::Structural("a dart belongs to no face".into()));
        }
        // succ(y) = face_next(twin(y))
        let mut rotation = vec![Vec::new(); n];
        let mut seen = vec![false; nd];
        let mut start_of = vec![usize::MAX; n];
        for d in 0..nd {
            let v = tail(d);
            if start_of[v] == usize::MAX {
                start_of[v] = d;
            }
        }
        for v in 0..n {
            let s = start_of[v];
            if s == usize::MAX {
                continue;
            }
            let mut d = s;
            loop {
                seen[d] = true;
                rotation[v].push(d);
                d = face_next[twin(d)];
                if d == s {
                    break;
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Structural(
                "face walks do not induce a single rotation cycle at every vertex".into(),
            ));
        }
        let e3 = edges.iter().map(|&(u, v)| (u, v, 1i8)).collect();
        Self::new(n, e3, rotation)
    }

    pub fn with_root(mut self, root: Option<VertexId>) -> Self {
        self.root = root;
        self
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn num_darts(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.ends[e][0], self.ends[e][1])
    }

    pub fn sign(&self, e: EdgeId) -> i8 {
        self.signs[e]
    }

    pub fn is_orientable_signature(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    #[inline]
    pub fn tail(&self, d: Dart) -> VertexId {
        self.ends[d >> 1][d & 1]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(twin(d))
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn position(&self, d: Dart) -> usize {
        self.pos[d]
    }

    #[inline]
    pub fn succ(&self, d: Dart) -> Dart {
        let r = &self.rotation[self.tail(d)];
        r[(self.pos[d] + 1) % r.len()]
    }

    #[inline]
    pub fn pred(&self, d: Dart) -> Dart {
        let r = &self.rotation[self.tail(d)];
        r[(self.pos[d] + r.len() - 1) % r.len()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.ends.iter().enumerate().map(|(e, ends)| (e, ends[0], ends[1]))
    }

    /// Neighbours of `v` in rotation order (with repetition for parallel edges).
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation[v].iter().map(move |&d| self.head(d))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Copy with every signature forced to `+1`; rotations are unchanged.
    pub fn with_signs_ignored(&self) -> Self {
        let mut g = self.clone();
        g.signs.iter_mut().for_each(|s| *s = 1);
        g
    }

    /// Edge list `(u, v, sign)` in edge-id order.
    pub fn edge_list(&self) -> Vec<(VertexId, VertexId, i8)> {
        self.edges().map(|(e, u, v)| (u, v, self.signs[e])).collect()
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }
}

/// One facial walk. Each step is a dart plus the local orientation in which
/// it is traversed (`true` = along the rotation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<(Dart, bool)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.walk.iter().map(|&(d, _)| d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    /// Vertex walk of every face (tail of each step).
    pub vertex_walks: Vec<Vec<VertexId>>,
    /// The two faces on the sides of every edge.
    pub edge_faces: Vec<[usize; 2]>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// A face bounded by a cycle: no repeated vertex and length at least 3.
    pub fn is_disk_cycle(&self, f: usize) -> bool {
        let w = &self.vertex_walks[f];
        if w.len() < 3 {
            return false;
        }
        let mut s = w.clone();
        s.sort_unstable();
        s.windows(2).all(|p| p[0] != p[1])
    }

    /// Face containing the (orientable) dart `d` traversed along the rotation.
    pub fn face_of_dart(&self) -> Vec<usize> {
        let nd = self.edge_faces.len() * 2;
        let mut out = vec![usize::MAX; nd];
        for (fi, f) in self.faces.iter().enumerate() {
            for &(d, _) in &f.walk {
                out[d] = fi;
            }
        }
        out
    }
}

/// Traces all faces. Crossing an edge of signature `-1` flips the local
/// orientation; in flipped orientation the walk continues with the
/// rotation predecessor instead of the successor. Faces are numbered in the
/// order their smallest starting dart is met, starting from orientation `+`.
pub fn trace_faces(g: &EmbeddedMultigraph) -> FaceSet {
    let nd = g.num_darts();
    // state index: 2*dart + (orientation == '-')
    let mut used = vec![false; 2 * nd];
    let mut faces = Vec::new();
    let mut vertex_walks = Vec::new();
    let mut edge_faces = vec![[usize::MAX; 2]; g.num_edges()];
    let st = |d: Dart, s: bool| 2 * d + usize::from(!s);
    for d0 in 0..nd {
        if used[st(d0, true)] {
            continue;
        }
        let fi = faces.len();
        let mut walk = Vec::new();
        let mut verts = Vec::new();
        let (mut d, mut s) = (d0, true);
        loop {
            used[st(d, s)] = true;
            // reverse traversal of the same side
            let s_after = s == (g.sign(edge_of(d)) == 1);
            used[st(twin(d), !s_after)] = true;
            walk.push((d, s));
            verts.push(g.tail(d));
            let e = edge_of(d);
            if edge_faces[e][0] == usize::MAX {
                edge_faces[e][0] = fi;
            } else {
                edge_faces[e][1] = fi;
            }
            let t = twin(d);
            let next = if s_after { g.succ(t) } else { g.pred(t) };
            d = next;
            s = s_after;
            if d == d0 && s {
                break;
            }
        }
        faces.push(Face { walk });
        vertex_walks.push(verts);
    }
    FaceSet { faces, vertex_walks, edge_faces }
}

/// Euler genus `2 - n + m - f` of a connected embedding.
pub fn euler_genus(g: &EmbeddedMultigraph) -> Result<usize> {
    let f = trace_faces(g).len();
    euler_genus_with_faces(g, f)
}

pub fn euler_genus_with_faces(g: &EmbeddedMultigraph, f: usize) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Domain("Euler genus requires a connected embedding".into()));
    }
    if g.num_edges() == 0 {
        // a lone vertex has no darts to trace but still one face
        return Ok(0);
    }
    let val = 2 + g.num_edges() as i64 - g.num_vertices() as i64 - f as i64;
    if val < 0 {
        return Err(Error::Structural(format!("negative Euler genus {val}")));
    }
    Ok(val as usize)
}

/// Rooted BFS spanning tree together with its layering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsStructure {
    pub root: VertexId,
    /// `(parent vertex, tree edge)` for every non-root vertex.
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
    pub depth: Vec<usize>,
    pub layers: Vec<Vec<VertexId>>,
}

impl BfsStructure {
    pub fn parent_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v].map(|(p, _)| p)
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.parent.iter().any(|p| matches!(p, Some((_, pe)) if *pe == e))
    }

    /// Tree edges flagged by edge id.
    pub fn tree_edge_mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for (_, e) in self.parent.iter().flatten() {
            mask[*e] = true;
        }
        mask
    }

    /// Path from `v` up to the root, `v` first.
    pub fn root_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut x = v;
        while let Some((p, _)) = self.parent[x] {
            out.push(p);
            x = p;
        }
        out
    }
}

/// Breadth-first search from `root`, exploring the darts of each vertex in
/// ascending dart-id order.
pub fn bfs_structure(g: &EmbeddedMultigraph, root: VertexId) -> Result<BfsStructure> {
    let n = g.num_vertices();
    if root >= n {
        return Err(Error::Domain(format!("root {root} is not a vertex")));
    }
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::new();
    depth[root] = 0;
    queue.push_back(root);
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let mut ds: Vec<Dart> = g.rotation(v).to_vec();
        ds.sort_unstable();
        for d in ds {
            let w = g.head(d);
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, edge_of(d)));
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Domain("BFS requires a connected graph".into()));
    }
    let maxd = depth.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        layers[depth[v]].push(v);
    }
    Ok(BfsStructure { root, parent, depth, layers })
}

/// Spanning subgraph of the dual made of the edges not in the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Primal edge crossed by each dual edge.
    pub primal: Vec<EdgeId>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        if self.num_nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.num_nodes];
        seen[0] = true;
        let mut stack = vec![0];
        let mut c = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    c += 1;
                    stack.push(y);
                }
            }
        }
        c == self.num_nodes
    }
}

pub fn nontree_dual(g: &EmbeddedMultigraph, faces: &FaceSet, tree: &BfsStructure) -> DualGraph {
    let mask = tree.tree_edge_mask(g.num_edges());
    let mut edges = Vec::new();
    let mut primal = Vec::new();
    for e in 0..g.num_edges() {
        if !mask[e] {
            let [a, b] = faces.edge_faces[e];
            edges.push((a, b));
            primal.push(e);
        }
    }
    DualGraph { num_nodes: faces.len(), edges, primal }
}

// ---------------------------------------------------------------------------
// Text format

fn sign_str(s: i8) -> &'static str {
    if s == 1 {
        "+1"
    } else {
        "-1"
    }
}

fn dart_str(d: Dart) -> String {
    format!("{}.{}", d >> 1, d & 1)
}

/// Serializes in the `emg` text format.
pub fn write_embedding(g: &EmbeddedMultigraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "emg {} {}", g.num_vertices(), g.num_edges());
    if let Some(r) = g.root {
        let _ = writeln!(s, "r {r}");
    }
    for (e, u, v) in g.edges() {
        let _ = writeln!(s, "e {e} {u} {v} {}", sign_str(g.sign(e)));
    }
    for v in 0..g.num_vertices() {
        let _ = write!(s, "v {v}:");
        for &d in g.rotation(v) {
            let _ = write!(s, " {}", dart_str(d));
        }
        s.push('\n');
    }
    s
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad {what} '{tok}'")))
}

fn parse_sign(tok: &str, line: usize) -> Result<i8> {
    match tok {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(Error::parse(line, format!("bad signature '{tok}'"))),
    }
}

fn parse_dart(tok: &str, m: usize, line: usize) -> Result<Dart> {
    let (e, side) = tok
        .split_once('.')
        .ok_or_else(|| Error::parse(line, format!("bad dart '{tok}'")))?;
    let e = parse_usize(e, line, "edge id")?;
    if e >= m {
        return Err(Error::parse(line, format!("unknown edge id {e}")));
    }
    match side {
        "0" => Ok(2 * e),
        "1" => Ok(2 * e + 1),
        _ => Err(Error::parse(line, format!("bad dart side in '{tok}'"))),
    }
}

/// Parses the `emg` format. Lines with keywords other than `emg`, `r`, `e`
/// and `v` are handed to `extra` (returning `Ok(false)` rejects them).
pub fn parse_embedding_with<F>(text: &str, mut extra: F) -> Result<EmbeddedMultigraph>
where
    F: FnMut(&str, &[&str], usize) -> Result<bool>,
{
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Option<(usize, usize, i8)>> = Vec::new();
    let mut rot: Vec<Option<Vec<Dart>>> = Vec::new();
    let mut root = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if toks.len() != 3 || toks[0] != "emg" {
                return Err(Error::parse(ln, "expected header 'emg <n> <m>'"));
            }
            let n = parse_usize(toks[1], ln, "vertex count")?;
            let m = parse_usize(toks[2], ln, "edge count")?;
            header = Some((n, m));
            edges = vec![None; m];
            rot = vec![None; n];
            continue;
        }
        let (n, m) = header.unwrap();
        match toks[0] {
            "e" => {
                if toks.len() != 5 {
                    return Err(Error::parse(ln, "expected 'e <id> <u> <v> <sign>'"));
                }
                let id = parse_usize(toks[1], ln, "edge id")?;
                let u = parse_usize(toks[2], ln, "vertex id")?;
                let v = parse_usize(toks[3], ln, "vertex id")?;
                if id >= m {
                    return Err(Error::parse(ln, format!("unknown edge id {id}")));
                }
                if u >= n || v >= n {
                    return Err(Error::parse(ln, "unknown vertex id"));
                }
                if edges[id].is_some() {
                    return Err(Error::parse(ln, format!("edge {id} defined twice")));
                }
                edges[id] = Some((u, v, parse_sign(toks[4], ln)?));
            }
            "v" => {
                let id_tok = toks
                    .get(1)
                    .map(|t| t.trim_end_matches(':'))
                    .ok_or_else(|| Error::parse(ln, "expected 'v <id>: <darts>'"))?;
                let id = parse_usize(id_tok, ln, "vertex id")?;
                if id >= n {
                    return Err(Error::parse(ln, format!("unknown vertex id {id}")));
                }
                let mut ds = Vec::new();
                for t in &toks[2..] {
                    let t = t.trim_start_matches(':');
                    if t.is_empty() {
                        continue;
                    }
                    ds.push(parse_dart(t, m, ln)?);
                }
                if rot[id].is_some() {
                    return Err(Error::parse(ln, format!("vertex {id} defined twice")));
                }
                rot[id] = Some(ds);
            }
            "r" => {
                let r = parse_usize(toks.get(1).copied().unwrap_or(""), ln, "root")?;
                if r >= n {
                    return Err(Error::parse(ln, format!("unknown root {r}")));
                }
                root = Some(r);
            }
            kw => {
                if !extra(kw, &toks[1..], ln)? {
                    return Err(Error::parse(ln, format!("unknown record '{kw}'")));
                }
            }
        }
    }
    let (n, _) = header.ok_or_else(|| Error::parse(0, "empty input"))?;
    let edges: Vec<_> = edges
        .into_iter()
        .enumerate()
        .map(|(e, x)| x.ok_or_else(|| Error::parse(0, format!("edge {e} missing"))))
        .collect::<Result<_>>()?;
    let rotation: Vec<_> = rot.into_iter().map(|r| r.unwrap_or_default()).collect();
    let g = EmbeddedMultigraph::new(n, edges, rotation).map_err(|e| match e {
        Error::Structural(msg) => Error::parse(0, msg),
        other => other,
    })?;
    Ok(g.with_root(root))
}

pub fn parse_embedding(text: &str) -> Result<EmbeddedMultigraph> {
    parse_embedding_with(text, |_, _, _| Ok(false))
}


/// Builds an orientable embedding of a simple graph from oriented facial
/// vertex cycles. Edge ids follow first appearance of each vertex pair.
pub fn from_vertex_faces(n: usize, faces: &[Vec<VertexId>]) -> Result<EmbeddedMultigraph> {
    use std::collections::HashMap;
    let mut ids: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut used = std::collections::HashSet::new();
    let mut dart_faces = Vec::with_capacity(faces.len());
    for f in faces {
        let mut ds = Vec::with_capacity(f.len());
        for i in 0..f.len() {
            let (u, v) = (f[i], f[(i + 1) % f.len()]);
            if u == v || u >= n || v >= n {
                return Err(Error::Structural(format!("bad facial pair ({u},{v})")));
            }
            if !used.insert((u, v)) {
                return Err(Error::Structural(format!("directed pair ({u},{v}) on two faces")));
            }
            let key = (u.min(v), u.max(v));
            let e = *ids.entry(key).or_insert_with(|| {
                edges.push((u, v));
                edges.len() - 1
            });
            ds.push(if edges[e].0 == u { 2 * e } else { 2 * e + 1 });
        }
        dart_faces.push(ds);
    }
    EmbeddedMultigraph::from_face_darts(n, &edges, &dart_faces)
}

/// A non-empty tree path whose vertex closest to the root comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalPath(pub Vec<VertexId>);

impl VerticalPath {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn top(&self) -> VertexId {
        self.0[0]
    }

    pub fn bottom(&self) -> VertexId {
        *self.0.last().unwrap()
    }

    /// True when consecutive vertices are parent and child under `parent`.
    pub fn is_vertical(&self, parent: impl Fn(VertexId) -> Option<VertexId>) -> bool {
        !self.0.is_empty() && self.0.windows(2).all(|w| parent(w[1]) == Some(w[0]))
    }
}
