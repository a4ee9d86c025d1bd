//! Reductions from map graphs and 1-planar drawings to frames.

use std::collections::HashSet;

use crate::embedding::{
    edge_of, parse_embedding_with, trace_faces, twin, Dart, EdgeId, EmbeddedMultigraph, VertexId,
};
use crate::error::{Error, Result};
use crate::frame::close_frame;
use crate::graph::SimpleGraph;

/// Mutable orientable rotation system used for local surgery. Faces follow
/// `next(x) = succ(twin(x))`, as in [`EmbeddedMultigraph`].
#[derive(Debug, Clone)]
struct Surgery {
    ends: Vec<[VertexId; 2]>,
    dead: Vec<bool>,
    rot: Vec<Vec<Dart>>,
}

impl Surgery {
    fn from(g: &EmbeddedMultigraph) -> Self {
        Surgery {
            ends: g.edges().map(|(_, u, v)| [u, v]).collect(),
            dead: vec![false; g.num_edges()],
            rot: g.rotations().to_vec(),
        }
    }

    fn tail(&self, d: Dart) -> VertexId {
        self.ends[edge_of(d)][d & 1]
    }

    fn pos(&self, d: Dart) -> usize {
        self.rot[self.tail(d)].iter().position(|&x| x == d).expect("dart in rotation")
    }

    fn succ(&self, d: Dart) -> Dart {
        let r = &self.rot[self.tail(d)];
        r[(self.pos(d) + 1) % r.len()]
    }

    fn pred(&self, d: Dart) -> Dart {
        let r = &self.rot[self.tail(d)];
        r[(self.pos(d) + r.len() - 1) % r.len()]
    }

    fn next(&self, x: Dart) -> Dart {
        self.succ(twin(x))
    }

    fn prev(&self, y: Dart) -> Dart {
        twin(self.pred(y))
    }

    fn face_of(&self, x: Dart) -> Vec<Dart> {
        let mut f = vec![x];
        let mut y = self.next(x);
        while y != x {
            f.push(y);
            y = self.next(y);
        }
        f
    }

    fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; 2 * self.ends.len()];
        let mut out = Vec::new();
        for d in 0..seen.len() {
            if seen[d] || self.dead[edge_of(d)] {
                continue;
            }
            let f = self.face_of(d);
            for &x in &f {
                seen[x] = true;
            }
            out.push(f);
        }
        out
    }

    fn add_vertex(&mut self) -> VertexId {
        self.rot.push(Vec::new());
        self.rot.len() - 1
    }

    fn insert_after(&mut self, anchor: Dart, d: Dart) {
        let v = self.tail(anchor);
        let p = self.pos(anchor);
        self.rot[v].insert(p + 1, d);
    }

    /// Adds an edge across the face containing `x` and `y`, from the corner
    /// after `x` to the corner after `y`. Afterwards `next(x)` is the new
    /// dart `2e` and `next(y)` is `2e + 1`.
    fn add_chord(&mut self, x: Dart, y: Dart) -> EdgeId {
        let u = self.tail(twin(x));
        let w = self.tail(twin(y));
        let e = self.ends.len();
        self.ends.push([u, w]);
        self.dead.push(false);
        self.insert_after(twin(x), 2 * e);
        self.insert_after(twin(y), 2 * e + 1);
        e
    }

    /// Cuts the ear `face[i-1], face[i]` off a face given as a dart list.
    /// Returns the new chord; the ear is `[face[i-1], face[i], 2e + 1]`.
    fn cut_ear(&mut self, face: &mut Vec<Dart>, i: usize) -> EdgeId {
        let k = face.len();
        let a = face[(i + k - 2) % k];
        let b = face[i];
        let e = self.add_chord(a, b);
        let i1 = (i + k - 1) % k;
        // replace face[i-1], face[i] by 2e
        let mut out = Vec::with_capacity(k - 1);
        for (j, &d) in face.iter().enumerate() {
            if j == i1 {
                out.push(2 * e);
            } else if j != i {
                out.push(d);
            }
        }
        *face = out;
        e
    }

    /// Adds a vertex joined to every corner of a face, which becomes a fan
    /// of triangles `[face[i], 2e_{i+1}, 2e_i + 1]`. Returns the spoke edges
    /// (`e_i` runs from the tail of `face[i]` to the new vertex).
    fn add_star(&mut self, face: &[Dart]) -> Vec<EdgeId> {
        let s = self.add_vertex();
        let k = face.len();
        let mut spokes = Vec::with_capacity(k);
        for i in 0..k {
            let e = self.ends.len();
            self.ends.push([self.tail(face[i]), s]);
            self.dead.push(false);
            spokes.push(e);
        }
        for i in 0..k {
            let before = twin(face[(i + k - 1) % k]);
            self.insert_after(before, 2 * spokes[i]);
        }
        self.rot[s] = spokes.iter().rev().map(|&e| 2 * e + 1).collect();
        spokes
    }

    fn delete_edge(&mut self, e: EdgeId) {
        for d in [2 * e, 2 * e + 1] {
            let v = self.tail(d);
            self.rot[v].retain(|&x| x != d);
        }
        self.dead[e] = true;
    }

    /// Replaces a degree-2 vertex and its two edges by a single edge.
    fn smooth(&mut self, v: VertexId) -> EdgeId {
        let (a, b) = (self.rot[v][0], self.rot[v][1]);
        let (x, y) = (self.tail(twin(a)), self.tail(twin(b)));
        let e = self.ends.len();
        self.ends.push([x, y]);
        self.dead.push(false);
        let px = self.pos(twin(a));
        self.rot[x][px] = 2 * e;
        let py = self.pos(twin(b));
        self.rot[y][py] = 2 * e + 1;
        self.dead[edge_of(a)] = true;
        self.dead[edge_of(b)] = true;
        self.rot[v].clear();
        e
    }

    /// Compacts away dead edges and isolated vertices. Returns the embedding,
    /// the new id of every old vertex and of every old dart.
    fn build(&self) -> Result<(EmbeddedMultigraph, Vec<Option<VertexId>>, Vec<Option<Dart>>)> {
        let mut vmap = vec![None; self.rot.len()];
        let mut nv = 0;
        for (v, r) in self.rot.iter().enumerate() {
            if !r.is_empty() {
                vmap[v] = Some(nv);
                nv += 1;
            }
        }
        let mut dmap = vec![None; 2 * self.ends.len()];
        let mut edges = Vec::new();
        for (e, &[u, v]) in self.ends.iter().enumerate() {
            if self.dead[e] {
                continue;
            }
            let ne = edges.len();
            edges.push((vmap[u].unwrap(), vmap[v].unwrap(), 1i8));
            dmap[2 * e] = Some(2 * ne);
            dmap[2 * e + 1] = Some(2 * ne + 1);
        }
        let rotation = self
            .rot
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| r.iter().map(|&d| dmap[d].unwrap()).collect())
            .collect();
        Ok((EmbeddedMultigraph::new(nv, edges, rotation)?, vmap, dmap))
    }
}

fn check_plain_input(g: &EmbeddedMultigraph, what: &str) -> Result<()> {
    if !g.is_orientable_signature() {
        return Err(Error::Input(format!("{what}: only orientable embeddings are supported")));
    }
    if g.num_vertices() == 0 || !g.is_connected() {
        return Err(Error::Input(format!("{what}: graph must be non-empty and connected")));
    }
    if let Some((e, _, _)) = g.edges().find(|&(_, u, v)| u == v) {
        return Err(Error::Input(format!("{what}: edge {e} is a loop")));
    }
    Ok(())
}

/// First position of a face whose vertex also occurs elsewhere on the face
/// and whose two walk-neighbours differ.
fn repeated_ear(s: &Surgery, face: &[Dart]) -> Option<usize> {
    let k = face.len();
    let vs: Vec<VertexId> = face.iter().map(|&d| s.tail(d)).collect();
    (0..k).find(|&i| {
        let v = vs[i];
        vs.iter().filter(|&&x| x == v).count() > 1 && vs[(i + k - 1) % k] != vs[(i + 1) % k]
    })
}

fn has_repeat(s: &Surgery, face: &[Dart]) -> bool {
    let mut seen = HashSet::new();
    !face.iter().all(|&d| seen.insert(s.tail(d)))
}

// ---------------------------------------------------------------- maps

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceLabel {
    Nation,
    Lake,
}

/// A frame for a map graph together with the nation vertices.
#[derive(Debug, Clone)]
pub struct MapFrame {
    pub frame: EmbeddedMultigraph,
    /// `(input face id, frame vertex)` for every nation.
    pub nations: Vec<(usize, VertexId)>,
    /// Edges of the map graph, as pairs of input face ids.
    pub map_edges: Vec<(usize, usize)>,
}

/// Map graph of a labelled embedding: nations sharing a boundary vertex.
pub fn map_graph_edges(g: &EmbeddedMultigraph, labels: &[FaceLabel]) -> Vec<(usize, usize)> {
    let faces = trace_faces(g);
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (f, w) in faces.vertex_walks.iter().enumerate() {
        if labels.get(f) == Some(&FaceLabel::Nation) {
            for &v in w {
                at[v].push(f);
            }
        }
    }
    let mut out = Vec::new();
    for fs in &mut at {
        fs.sort_unstable();
        fs.dedup();
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                out.push((fs[i], fs[j]));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Builds a frame `G` whose closure `G^(d)` contains the map graph: faces of
/// the map are normalised to cycles, the dual is taken, and consecutive
/// nations around every map vertex are joined.
pub fn map_to_frame(g0: &EmbeddedMultigraph, labels: &[FaceLabel], d: usize) -> Result<MapFrame> {
    if d < 3 {
        return Err(Error::Input(format!("d must be at least 3, got {d}")));
    }
    check_plain_input(g0, "map")?;
    let faces0 = trace_faces(g0);
    if labels.len() != faces0.len() {
        return Err(Error::Input(format!(
            "{} face labels for {} faces",
            labels.len(),
            faces0.len()
        )));
    }
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); g0.num_vertices()];
    for (f, w) in faces0.vertex_walks.iter().enumerate() {
        if labels[f] == FaceLabel::Nation {
            for &v in w {
                if !touching[v].contains(&f) {
                    touching[v].push(f);
                }
            }
        }
    }
    if let Some(v) = touching.iter().position(|ns| ns.len() > d) {
        return Err(Error::Input(format!(
            "vertex {v} touches {} nations, more than {d}",
            touching[v].len()
        )));
    }
    let map_edges = map_graph_edges(g0, labels);

    // normalise faces to cycles; every dart carries the tag of its face
    const LAKE: usize = usize::MAX;
    let mut s = Surgery::from(g0);
    let mut tag = vec![LAKE; 2 * s.ends.len()];
    for (f, face) in faces0.faces.iter().enumerate() {
        for x in face.darts() {
            tag[x] = if labels[f] == FaceLabel::Nation { f } else { LAKE };
        }
    }
    let mut work: Vec<Vec<Dart>> = faces0.faces.iter().map(|f| f.darts().collect()).collect();
    let mut done: Vec<Vec<Dart>> = Vec::new();
    let mut lakes: Vec<Vec<Dart>> = Vec::new();
    while let Some(mut face) = work.pop() {
        let t = tag[face[0]];
        if t == LAKE {
            lakes.push(face);
            continue;
        }
        if face.len() == 2 {
            let spokes = s.add_star(&face);
            tag.resize(2 * s.ends.len(), LAKE);
            let f1 = vec![face[0], 2 * spokes[1], 2 * spokes[0] + 1];
            let f2 = vec![face[1], 2 * spokes[0], 2 * spokes[1] + 1];
            for &x in &f1 {
                tag[x] = t;
            }
            for &x in &f2 {
                tag[x] = LAKE;
            }
            done.push(f1);
            lakes.push(f2);
            continue;
        }
        if has_repeat(&s, &face) {
            let i = repeated_ear(&s, &face)
                .ok_or_else(|| Error::Input("cannot normalise a face boundary".into()))?;
            let k = face.len();
            let ear = [face[(i + k - 1) % k], face[i]];
            let e = s.cut_ear(&mut face, i);
            tag.resize(2 * s.ends.len(), LAKE);
            tag[2 * e] = t;
            tag[ear[0]] = LAKE;
            tag[ear[1]] = LAKE;
            lakes.push(vec![ear[0], ear[1], 2 * e + 1]);
            work.push(face);
            continue;
        }
        done.push(face);
    }
    // a vertex inside every lake lifts lake-side degrees to at least 3
    for face in lakes {
        let spokes = s.add_star(&face);
        let k = face.len();
        for i in 0..k {
            done.push(vec![face[i], 2 * spokes[(i + 1) % k], 2 * spokes[i] + 1]);
        }
    }
    tag.resize(2 * s.ends.len(), LAKE);
    let faces = done;
    let nf = faces.len();
    let mut face_of = vec![usize::MAX; 2 * s.ends.len()];
    for (f, face) in faces.iter().enumerate() {
        for &x in face {
            face_of[x] = f;
        }
    }
    let nation: Vec<bool> = faces.iter().map(|f| tag[f[0]] != LAKE).collect();

    // dual: dart x of the map becomes a dual dart from face_of[x] to face_of[twin x]
    let mut dual = Surgery {
        ends: (0..s.ends.len()).map(|e| [face_of[2 * e], face_of[2 * e + 1]]).collect(),
        dead: s.dead.clone(),
        rot: Vec::new(),
    };
    let mut dual_faces: Vec<Vec<Dart>> = s.rot.iter().filter(|r| !r.is_empty()).cloned().collect();
    check_chains(&dual, &dual_faces)?;

    // remove digons by dropping one of their two parallel edges
    while let Some(fi) = dual_faces.iter().position(|f| f.len() == 2) {
        let (a, b) = (dual_faces[fi][0], dual_faces[fi][1]);
        let q = dual_faces
            .iter()
            .position(|f| f.contains(&twin(b)))
            .ok_or_else(|| Error::Internal("digon partner face missing".into()))?;
        if q == fi {
            return Err(Error::Input("map is too small to frame".into()));
        }
        for x in dual_faces[q].iter_mut() {
            if *x == twin(b) {
                *x = a;
            }
        }
        dual.dead[edge_of(b)] = true;
        dual_faces.remove(fi);
    }
    // nation cycles
    let mut final_faces = Vec::new();
    for face in &dual_faces {
        let k = face.len();
        let pos: Vec<usize> = (0..k).filter(|&i| nation[dual.tail(face[i])]).collect();
        let r = pos.len();
        if r < 2 {
            final_faces.push(face.clone());
            continue;
        }
        let gaps: Vec<(usize, usize)> = (0..r).map(|j| (pos[j], pos[(j + 1) % r])).collect();
        let glen = |(a, b): (usize, usize)| (b + k - a) % k;
        let chorded: Vec<bool> = if r == 2 {
            let both = glen(gaps[0]) > 1 && glen(gaps[1]) > 1;
            vec![both, false]
        } else {
            gaps.iter().map(|&g| glen(g) > 1).collect()
        };
        let mut rest = Vec::new();
        for (j, &(a, b)) in gaps.iter().enumerate() {
            let run: Vec<Dart> = (0..glen((a, b))).map(|t| face[(a + t) % k]).collect();
            if chorded[j] {
                let e = dual.ends.len();
                dual.ends.push([dual.tail(face[a]), dual.tail(face[b])]);
                dual.dead.push(false);
                rest.push(2 * e);
                let mut piece = run;
                piece.push(2 * e + 1);
                final_faces.push(piece);
            } else {
                rest.extend(run);
            }
        }
        final_faces.push(rest);
    }
    let n = nf;
    let mut edges = Vec::new();
    let mut dmap = vec![usize::MAX; 2 * dual.ends.len()];
    for (e, &[u, v]) in dual.ends.iter().enumerate() {
        if !dual.dead[e] {
            dmap[2 * e] = 2 * edges.len();
            dmap[2 * e + 1] = 2 * edges.len() + 1;
            edges.push((u, v));
        }
    }
    let ff: Vec<Vec<Dart>> =
        final_faces.iter().map(|f| f.iter().map(|&x| dmap[x]).collect()).collect();
    let frame = EmbeddedMultigraph::from_face_darts(n, &edges, &ff)?;
    let nations: Vec<(usize, VertexId)> =
        (0..nf).filter(|&f| nation[f]).map(|f| (tag[faces[f][0]], f)).collect();
    let mf = MapFrame { frame, nations, map_edges };
    let closure = close_frame(&mf.frame, d)?.closure;
    if let Some((a, b)) = first_missing_map_edge(&mf, &closure) {
        return Err(Error::Contract(format!("map edge between faces {a} and {b} not in closure")));
    }
    Ok(mf)
}

fn check_chains(dual: &Surgery, faces: &[Vec<Dart>]) -> Result<()> {
    for f in faces {
        for (i, &x) in f.iter().enumerate() {
            let y = f[(i + 1) % f.len()];
            if dual.tail(twin(x)) != dual.tail(y) {
                return Err(Error::Internal("dual face darts do not chain".into()));
            }
        }
    }
    Ok(())
}

/// A map edge (as input face ids) missing from `closure`, if any.
pub fn first_missing_map_edge(mf: &MapFrame, closure: &SimpleGraph) -> Option<(usize, usize)> {
    let mut at = std::collections::HashMap::new();
    for &(f, v) in &mf.nations {
        at.insert(f, v);
    }
    mf.map_edges.iter().copied().find(|&(a, b)| match (at.get(&a), at.get(&b)) {
        (Some(&u), Some(&v)) => !closure.has_edge(u, v),
        _ => true,
    })
}

/// Parses an embedding followed by `f <faceid> nation|lake` records. Faces
/// without a record are lakes.
pub fn parse_labelled_map(text: &str) -> Result<(EmbeddedMultigraph, Vec<FaceLabel>)> {
    let mut recs: Vec<(usize, FaceLabel, usize)> = Vec::new();
    let g = parse_embedding_with(text, |kw, toks, line| {
        if kw != "f" {
            return Ok(false);
        }
        if toks.len() != 2 {
            return Err(Error::parse(line, "expected 'f <faceid> nation|lake'"));
        }
        let id = toks[0]
            .parse::<usize>()
            .map_err(|_| Error::parse(line, format!("bad face id '{}'", toks[0])))?;
        let l = match toks[1] {
            "nation" => FaceLabel::Nation,
            "lake" => FaceLabel::Lake,
            t => return Err(Error::parse(line, format!("unknown face label '{t}'"))),
        };
        recs.push((id, l, line));
        Ok(true)
    })?;
    let nf = trace_faces(&g).len();
    let mut labels = vec![FaceLabel::Lake; nf];
    for (id, l, line) in recs {
        if id >= nf {
            return Err(Error::parse(line, format!("unknown face id {id}")));
        }
        labels[id] = l;
    }
    Ok((g, labels))
}

pub fn write_labelled_map(g: &EmbeddedMultigraph, labels: &[FaceLabel]) -> String {
    let mut s = crate::embedding::write_embedding(g);
    for (f, l) in labels.iter().enumerate() {
        let name = match l {
            FaceLabel::Nation => "nation",
            FaceLabel::Lake => "lake",
        };
        s.push_str(&format!("f {f} {name}\n"));
    }
    s
}

// ---------------------------------------------------------------- 1-planar

/// A crossing dummy of a planarization with its four half-edges listed in
/// rotation order; `halves[0], halves[2]` form one drawn edge and
/// `halves[1], halves[3]` the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub dummy: VertexId,
    pub halves: [EdgeId; 4],
}

#[derive(Debug, Clone)]
pub struct OnePlaneFrame {
    pub frame: EmbeddedMultigraph,
    /// Frame vertex of every vertex of the drawing (`None` for dummies).
    pub vertex_of: Vec<Option<VertexId>>,
    /// Edges of the drawn graph, as pairs of drawing vertices.
    pub graph_edges: Vec<(VertexId, VertexId)>,
}

/// Checks the crossing records against the planarization and returns the
/// darts leaving each dummy, aligned with `halves`.
fn crossing_darts(p: &EmbeddedMultigraph, crossings: &[Crossing]) -> Result<Vec<[Dart; 4]>> {
    let n = p.num_vertices();
    let mut is_dummy = vec![false; n];
    let mut out = Vec::new();
    for c in crossings {
        if c.dummy >= n || is_dummy[c.dummy] {
            return Err(Error::Input(format!("bad or repeated crossing vertex {}", c.dummy)));
        }
        is_dummy[c.dummy] = true;
        let rot = p.rotation(c.dummy);
        if rot.len() != 4 {
            return Err(Error::Input(format!("crossing vertex {} has degree {}", c.dummy, rot.len())));
        }
        let edges: Vec<EdgeId> = rot.iter().map(|&d| edge_of(d)).collect();
        let start = edges.iter().position(|&e| e == c.halves[0]);
        let ok = start.is_some_and(|s| {
            (0..4).all(|k| edges[(s + k) % 4] == c.halves[k])
                || (0..4).all(|k| edges[(s + 4 - k) % 4] == c.halves[k])
        });
        if !ok {
            return Err(Error::Input(format!(
                "half-edges of crossing {} do not match its rotation",
                c.dummy
            )));
        }
        let s = start.unwrap();
        out.push([rot[s], rot[(s + 1) % 4], rot[(s + 2) % 4], rot[(s + 3) % 4]]);
    }
    for (e, u, v) in p.edges() {
        if is_dummy[u] && is_dummy[v] {
            return Err(Error::Input(format!("edge {e} joins two crossings")));
        }
    }
    Ok(out)
}

/// Edges of the drawn graph: uncrossed planarization edges plus one edge per
/// crossing half-pair.
pub fn drawn_graph_edges(
    p: &EmbeddedMultigraph,
    crossings: &[Crossing],
) -> Result<Vec<(VertexId, VertexId)>> {
    let darts = crossing_darts(p, crossings)?;
    let mut is_dummy = vec![false; p.num_vertices()];
    for c in crossings {
        is_dummy[c.dummy] = true;
    }
    let mut out: Vec<(VertexId, VertexId)> =
        p.edges().filter(|&(_, u, v)| !is_dummy[u] && !is_dummy[v]).map(|(_, u, v)| (u, v)).collect();
    for o in &darts {
        let a: Vec<VertexId> = o.iter().map(|&d| p.head(d)).collect();
        out.push((a[0], a[2]));
        out.push((a[1], a[3]));
    }
    Ok(out)
}

/// Builds a frame `G0` with faces of length 3 and 4 whose closure `G0^(4)`
/// contains the drawn graph.
pub fn oneplanar_to_frame(p: &EmbeddedMultigraph, crossings: &[Crossing]) -> Result<OnePlaneFrame> {
    check_plain_input(p, "drawing")?;
    let darts = crossing_darts(p, crossings)?;
    let graph_edges = drawn_graph_edges(p, crossings)?;
    if let Some(&(u, _)) = graph_edges.iter().find(|&&(u, v)| u == v) {
        return Err(Error::Input(format!("drawn edge at vertex {u} is a loop")));
    }
    let real = p.num_vertices() - crossings.len();
    if real < 3 {
        return Err(Error::Input("drawing needs at least three vertices".into()));
    }
    let mut s = Surgery::from(p);

    // crossings of edges with a common end are removed by splitting the dummy
    let mut live = Vec::new();
    for (c, o) in crossings.iter().zip(&darts) {
        let a: Vec<VertexId> = o.iter().map(|&d| s.tail(twin(d))).collect();
        let Some(i) = (0..4).find(|&i| a[i] == a[(i + 1) % 4]) else {
            live.push((c.dummy, *o));
            continue;
        };
        let c2 = s.add_vertex();
        let keep = [o[(i + 1) % 4], o[(i + 2) % 4]];
        let moved = [o[(i + 3) % 4], o[i]];
        s.rot[c.dummy] = keep.to_vec();
        s.rot[c2] = moved.to_vec();
        for d in moved {
            s.ends[edge_of(d)][d & 1] = c2;
        }
        s.smooth(c.dummy);
        s.smooth(c2);
    }

    // kite edges around every remaining crossing, then drop the crossing pair
    let mut protected = Vec::new();
    for &(c, o) in &live {
        for i in 0..4 {
            let t = twin(o[i]);
            let o1 = o[(i + 1) % 4];
            let z = s.next(o1);
            let kite = if s.next(z) == t {
                z
            } else {
                let e = s.add_chord(s.prev(t), o1);
                2 * e + 1
            };
            protected.push(kite);
        }
        for &d in &o {
            s.delete_edge(edge_of(d));
        }
        debug_assert!(s.rot[c].is_empty());
    }
    let mut protected: HashSet<Dart> = protected.into_iter().collect();

    // a face bounded by two parallel edges loses one of them
    while let Some(f) = s.faces().into_iter().find(|f| f.len() == 2) {
        let (mut a, mut b) = (f[0], f[1]);
        if protected.contains(&twin(b)) {
            std::mem::swap(&mut a, &mut b);
        }
        if s.face_of(twin(b)).len() == 2 && s.face_of(twin(b)).contains(&a) {
            return Err(Error::Input("drawing collapses to a single edge".into()));
        }
        if protected.remove(&twin(b)) {
            protected.insert(a);
        }
        s.delete_edge(edge_of(b));
    }

    // every other face becomes triangles
    for mut face in s.faces() {
        if face.iter().any(|d| protected.contains(d)) {
            if face.len() != 4 || has_repeat(&s, &face) {
                return Err(Error::Internal("crossing face is not a 4-cycle".into()));
            }
            continue;
        }
        while face.len() > 3 || has_repeat(&s, &face) {
            let k = face.len();
            let ear = (0..k).find(|&i| s.tail(face[(i + k - 1) % k]) != s.tail(face[(i + 1) % k]));
            match ear {
                Some(i) if k > 3 => {
                    s.cut_ear(&mut face, i);
                }
                _ => {
                    s.add_star(&face);
                    break;
                }
            }
        }
    }
    let (frame, vmap, _) = s.build()?;
    let genus_in = crate::embedding::euler_genus(p)?;
    let genus_out = crate::embedding::euler_genus(&frame)?;
    if genus_in != genus_out {
        return Err(Error::Input(format!(
            "uncrossing changed the surface (Euler genus {genus_in} -> {genus_out})"
        )));
    }
    let mut is_dummy = vec![false; p.num_vertices()];
    for c in crossings {
        is_dummy[c.dummy] = true;
    }
    let vertex_of: Vec<Option<VertexId>> =
        (0..p.num_vertices()).map(|v| if is_dummy[v] { None } else { vmap[v] }).collect();
    let out = OnePlaneFrame { frame, vertex_of, graph_edges };
    let closure = close_frame(&out.frame, 4)?.closure;
    if let Some((u, v)) = first_missing_drawn_edge(&out, &closure) {
        return Err(Error::Contract(format!("drawn edge {u}-{v} not in the closure")));
    }
    Ok(out)
}

/// A drawn edge missing from `closure`, if any.
pub fn first_missing_drawn_edge(
    f: &OnePlaneFrame,
    closure: &SimpleGraph,
) -> Option<(VertexId, VertexId)> {
    f.graph_edges.iter().copied().find(|&(u, v)| match (f.vertex_of[u], f.vertex_of[v]) {
        (Some(a), Some(b)) => !closure.has_edge(a, b),
        _ => true,
    })
}

/// Parses a planarization followed by `x <dummy> <e1> <e2> <e3> <e4>`
/// crossing records.
pub fn parse_one_plane(text: &str) -> Result<(EmbeddedMultigraph, Vec<Crossing>)> {
    let mut crossings = Vec::new();
    let g = parse_embedding_with(text, |kw, toks, line| {
        if kw != "x" {
            return Ok(false);
        }
        if toks.len() != 5 {
            return Err(Error::parse(line, "expected 'x <dummy> <e1> <e2> <e3> <e4>'"));
        }
        let mut ids = [0usize; 5];
        for (slot, t) in ids.iter_mut().zip(toks) {
            *slot = t.parse().map_err(|_| Error::parse(line, format!("bad id '{t}'")))?;
        }
        crossings.push(Crossing { dummy: ids[0], halves: [ids[1], ids[2], ids[3], ids[4]] });
        Ok(true)
    })?;
    for c in &crossings {
        if c.dummy >= g.num_vertices() || c.halves.iter().any(|&e| e >= g.num_edges()) {
            return Err(Error::parse(0, format!("crossing at {} names unknown ids", c.dummy)));
        }
    }
    Ok((g, crossings))
}

pub fn write_one_plane(g: &EmbeddedMultigraph, crossings: &[Crossing]) -> String {
    let mut s = crate::embedding::write_embedding(g);
    for c in crossings {
        let [a, b, x, y] = c.halves;
        s.push_str(&format!("x {} {a} {b} {x} {y}\n", c.dummy));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{euler_genus, from_vertex_faces};
    use crate::generators::{gen_labelled_map, gen_one_plane, k5_one_plane, k6_one_plane};

    fn labelled(g: &EmbeddedMultigraph, nations: &[usize]) -> Vec<FaceLabel> {
        let nf = trace_faces(g).len();
        (0..nf)
            .map(|f| if nations.contains(&f) { FaceLabel::Nation } else { FaceLabel::Lake })
            .collect()
    }

    fn face_lengths_ok(g: &EmbeddedMultigraph) -> bool {
        let fs = trace_faces(g);
        (0..fs.len()).all(|f| fs.is_disk_cycle(f))
    }

    #[test]
    fn single_nation_triangle() {
        let g = from_vertex_faces(3, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let mf = map_to_frame(&g, &labelled(&g, &[0]), 3).unwrap();
        assert_eq!(mf.nations.len(), 1);
        assert!(mf.map_edges.is_empty());
        assert!(face_lengths_ok(&mf.frame));
        assert_eq!(euler_genus(&mf.frame).unwrap(), 0);
    }

    #[test]
    fn two_nations_sharing_an_edge() {
        let g = from_vertex_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 2, 1]]).unwrap();
        let mf = map_to_frame(&g, &labelled(&g, &[0, 1]), 3).unwrap();
        assert_eq!(mf.map_edges.len(), 1);
        let closure = close_frame(&mf.frame, 3).unwrap().closure;
        assert!(first_missing_map_edge(&mf, &closure).is_none());
    }

    #[test]
    fn two_face_nation_is_split() {
        // triangle with the edge 0-1 doubled; the digon between the copies is a nation
        let g = EmbeddedMultigraph::new(
            3,
            vec![(0, 1, 1), (0, 1, 1), (1, 2, 1), (2, 0, 1)],
            vec![vec![0, 2, 7], vec![1, 4, 3], vec![5, 6]],
        )
        .unwrap();
        assert_eq!(euler_genus(&g).unwrap(), 0);
        let fs = trace_faces(&g);
        let digon = (0..fs.len()).find(|&f| fs.faces[f].len() == 2).unwrap();
        let tri = (0..fs.len()).find(|&f| f != digon && fs.faces[f].len() == 3).unwrap();
        let mf = map_to_frame(&g, &labelled(&g, &[digon, tri]), 3).unwrap();
        assert!(face_lengths_ok(&mf.frame));
        assert_eq!(mf.map_edges, vec![(digon.min(tri), digon.max(tri))]);
    }

    #[test]
    fn too_many_nations_rejected() {
        let g = crate::generators::gen_plane_triangulation(12, 1).unwrap();
        let all: Vec<usize> = (0..trace_faces(&g).len()).collect();
        let err = map_to_frame(&g, &labelled(&g, &all), 3).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn seeded_maps() {
        for seed in 0..12 {
            for d in [3, 5, 8] {
                let (g, labels) = gen_labelled_map(40, d, seed).unwrap();
                let mf = map_to_frame(&g, &labels, d).unwrap();
                assert!(face_lengths_ok(&mf.frame));
                assert_eq!(euler_genus(&mf.frame).unwrap(), 0);
            }
        }
    }

    #[test]
    fn labelled_map_round_trip() {
        let (g, labels) = gen_labelled_map(15, 4, 3).unwrap();
        let (g2, l2) = parse_labelled_map(&write_labelled_map(&g, &labels)).unwrap();
        assert_eq!(g, g2);
        assert_eq!(labels, l2);
    }

    #[test]
    fn k5_and_k6() {
        for (p, xs, n) in [k5_one_plane().unwrap(), k6_one_plane().unwrap()]
            .into_iter()
            .zip([5usize, 6])
            .map(|((p, xs), n)| (p, xs, n))
        {
            let f = oneplanar_to_frame(&p, &xs).unwrap();
            assert_eq!(f.graph_edges.len(), n * (n - 1) / 2);
            let fs = trace_faces(&f.frame);
            assert!(fs.faces.iter().all(|x| x.len() == 3 || x.len() == 4));
            assert!(face_lengths_ok(&f.frame));
        }
    }

    #[test]
    fn adjacent_crossing_is_removed() {
        // v=0 w=1 y=2, dummy 3; v-w and v-y cross at 3
        let p = EmbeddedMultigraph::new(
            4,
            vec![(0, 3, 1), (3, 1, 1), (0, 3, 1), (3, 2, 1), (1, 2, 1), (0, 1, 1), (0, 2, 1)],
            vec![vec![0, 12, 10, 4], vec![8, 3, 11], vec![13, 7, 9], vec![6, 1, 5, 2]],
        );
        let p = p.unwrap();
        assert_eq!(euler_genus(&p).unwrap(), 0);
        let xs = [Crossing { dummy: 3, halves: [3, 0, 2, 1] }];
        let f = oneplanar_to_frame(&p, &xs).unwrap();
        assert_eq!(f.frame.num_vertices(), 3);
        assert!(face_lengths_ok(&f.frame));
    }

    #[test]
    fn seeded_one_plane() {
        for seed in 0..10 {
            let (p, xs) = gen_one_plane(30, seed).unwrap();
            let f = oneplanar_to_frame(&p, &xs).unwrap();
            assert!(face_lengths_ok(&f.frame));
            let (p2, xs2) = parse_one_plane(&write_one_plane(&p, &xs)).unwrap();
            assert_eq!((p2, xs2), (p, xs.clone()));
        }
    }
}
