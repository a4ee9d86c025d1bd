//! H-partitions into tripods.
//!
//! The plane graph is processed region by region. A region is a maximal set
//! of unassigned vertices connected through shared faces; its boundary parts
//! are the parts owning an assigned vertex on one of its faces. Every
//! unassigned vertex is coloured by the part that its tree-ancestor chain
//! reaches first. A face seeing every boundary colour is chosen; up to three
//! of its unassigned vertices become the lower ends of vertical legs that
//! climb until just below an assigned vertex, and the rest of the face is
//! absorbed into the new part. The new part plus the boundary parts form one
//! bag of the tree decomposition of the quotient.

use crate::cut::CutResult;
use crate::embedding::{VertexId, VerticalPath};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    /// The distinguished part (`P+` before projection, `Z` after).
    Special,
    Tripod,
}

/// Up to three disjoint vertical paths whose lower ends lie on one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tripod {
    pub legs: Vec<VerticalPath>,
    pub lower_ends: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub kind: PartKind,
    pub x: Vec<VertexId>,
    pub y: Vec<VerticalPath>,
}

impl Part {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.x.iter().copied().chain(self.y.iter().flat_map(|p| p.0.iter().copied()))
    }

    pub fn size(&self) -> usize {
        self.x.len() + self.y.iter().map(|p| p.0.len()).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }
}

#[derive(Debug, Clone)]
pub struct HPartitionResult {
    pub parts: Vec<Part>,
    pub part_of: Vec<usize>,
    /// Quotient graph over part ids.
    pub h: SimpleGraph,
    pub td: TreeDecomposition,
    /// Boundary parts each part was attached to when created.
    pub attached_to: Vec<Vec<usize>>,
    pub tripods: Vec<Option<Tripod>>,
}

pub struct PartitionInput<'a> {
    pub num_vertices: usize,
    /// Facial cycles, every one of length at most `d`.
    pub faces: &'a [Vec<VertexId>],
    /// Rooted spanning-tree parents (`None` at roots and outside the graph).
    pub parent: &'a [Option<VertexId>],
    /// Distinguished initial part, given as one vertical path.
    pub initial: Option<VerticalPath>,
    /// Vertex preferred for the first face when there is no initial part.
    pub root: VertexId,
    pub d: usize,
    /// Closure graph whose quotient defines `H`.
    pub closure: &'a SimpleGraph,
}

struct Region {
    vertices: Vec<VertexId>,
    boundary: Vec<usize>,
    td_parent: Option<usize>,
}

pub fn tripod_partition(inp: &PartitionInput<'_>) -> Result<HPartitionResult> {
    let n = inp.num_vertices;
    let d = inp.d;
    for (i, f) in inp.faces.iter().enumerate() {
        if f.is_empty() || f.len() > d {
            return Err(Error::Contract(format!("face {i} has length {} outside 1..={d}", f.len())));
        }
    }
    // vertex -> faces, CSR
    let mut start = vec![0usize; n + 1];
    for f in inp.faces {
        for &v in f {
            start[v + 1] += 1;
        }
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut vf = vec![0usize; start[n]];
    let mut fill = start.clone();
    for (fi, f) in inp.faces.iter().enumerate() {
        for &v in f {
            vf[fill[v]] = fi;
            fill[v] += 1;
        }
    }
    let faces_of = |v: VertexId| &vf[start[v]..start[v + 1]];

    let mut part_of = vec![NONE; n];
    let mut parts: Vec<Part> = Vec::new();
    let mut attached_to: Vec<Vec<usize>> = Vec::new();
    let mut tripods: Vec<Option<Tripod>> = Vec::new();
    let mut td = TreeDecomposition::default();
    let mut stack: Vec<Region> = Vec::new();

    let mut face_mark = vec![0u32; inp.faces.len()];
    let mut vmark = vec![0u32; n];
    let mut colour = vec![NONE; n];
    let mut epoch = 0u32;

    let root_node = if let Some(init) = &inp.initial {
        for &v in &init.0 {
            part_of[v] = 0;
        }
        parts.push(Part { kind: PartKind::Special, x: Vec::new(), y: vec![init.clone()] });
        attached_to.push(Vec::new());
        tripods.push(None);
        td.bags.push(vec![0]);
        td.parent.push(None);
        Some(0)
    } else {
        None
    };
    let all: Vec<VertexId> = (0..n).filter(|&v| part_of[v] == NONE && !faces_of(v).is_empty()).collect();
    epoch += 1;
    for comp in components(&all, &part_of, &faces_of, inp.faces, &mut vmark, epoch) {
        stack.push(Region { boundary: comp.1, vertices: comp.0, td_parent: root_node });
    }
    stack.reverse();

    while let Some(region) = stack.pop() {
        let pid = parts.len();
        let nb = &region.boundary;
        // colours, memoised along ancestor chains
        for &v in &region.vertices {
            colour[v] = NONE;
        }
        for &v in &region.vertices {
            if colour[v] != NONE {
                continue;
            }
            let mut chain = vec![v];
            let mut x = v;
            let c = loop {
                match inp.parent[x] {
                    None => break NONE - 1,
                    Some(p) if part_of[p] != NONE => break part_of[p],
                    Some(p) if colour[p] != NONE => break colour[p],
                    Some(p) => {
                        chain.push(p);
                        x = p;
                    }
                }
            };
            for y in chain {
                colour[y] = c;
            }
        }
        // candidate faces, by ascending id
        epoch += 1;
        let mut cand = Vec::new();
        for &v in &region.vertices {
            for &fi in faces_of(v) {
                if face_mark[fi] != epoch {
                    face_mark[fi] = epoch;
                    cand.push(fi);
                }
            }
        }
        cand.sort_unstable();
        let bit = |c: usize| nb.iter().position(|&b| b == c).map(|i| 1u8 << i).unwrap_or(0);
        let mut best: Option<(usize, u32)> = None;
        for &fi in &cand {
            let mut mask = 0u8;
            let mut has_root = false;
            for &v in &inp.faces[fi] {
                mask |= if part_of[v] != NONE { bit(part_of[v]) } else { bit(colour[v]) };
                has_root |= v == inp.root;
            }
            let score = 2 * mask.count_ones() + u32::from(nb.is_empty() && has_root);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((fi, score));
            }
        }
        let (fi, _) = best.ok_or_else(|| Error::Contract("region without faces".into()))?;
        let face = &inp.faces[fi];
        let mut covered = 0u8;
        for &v in face {
            if part_of[v] != NONE {
                covered |= bit(part_of[v]);
            }
        }
        let mut anchors: Vec<VertexId> = Vec::new();
        for (i, &b) in nb.iter().enumerate() {
            if covered & (1 << i) != 0 {
                continue;
            }
            if let Some(&v) = face.iter().find(|&&v| part_of[v] == NONE && colour[v] == b) {
                anchors.push(v);
            }
        }
        for &v in face {
            if anchors.len() >= 3 {
                break;
            }
            if part_of[v] == NONE && !anchors.contains(&v) {
                anchors.push(v);
            }
        }
        let mut legs = Vec::new();
        let mut lower_ends = Vec::new();
        for &a in &anchors {
            if part_of[a] != NONE {
                continue;
            }
            let mut leg = Vec::new();
            let mut x = Some(a);
            while let Some(y) = x {
                if part_of[y] != NONE {
                    break;
                }
                part_of[y] = pid;
                leg.push(y);
                x = inp.parent[y];
            }
            leg.reverse();
            legs.push(VerticalPath(leg));
            lower_ends.push(a);
        }
        let mut xs: Vec<VertexId> = face.iter().copied().filter(|&v| part_of[v] == NONE).collect();
        for &v in &xs {
            part_of[v] = pid;
        }
        xs.sort_unstable();
        if xs.len() > d - 3 {
            return Err(Error::Contract(format!("part {pid} absorbs {} face vertices", xs.len())));
        }
        parts.push(Part { kind: PartKind::Tripod, x: xs, y: legs.clone() });
        attached_to.push(nb.clone());
        tripods.push(Some(Tripod { legs, lower_ends }));
        let node = td.bags.len();
        let mut bag = vec![pid];
        bag.extend_from_slice(nb);
        td.bags.push(bag);
        td.parent.push(region.td_parent);

        let rest: Vec<VertexId> =
            region.vertices.iter().copied().filter(|&v| part_of[v] == NONE).collect();
        epoch += 1;
        let comps = components(&rest, &part_of, &faces_of, inp.faces, &mut vmark, epoch);
        for (verts, boundary) in comps.into_iter().rev() {
            if boundary.len() > 3 || boundary.iter().any(|b| *b != pid && !nb.contains(b)) {
                return Err(Error::Contract(format!(
                    "region after part {pid} sees boundary parts {boundary:?}"
                )));
            }
            stack.push(Region { vertices: verts, boundary, td_parent: Some(node) });
        }
    }
    // join a forest of roots into one tree
    let roots: Vec<usize> = (0..td.parent.len()).filter(|&i| td.parent[i].is_none()).collect();
    for &r in roots.iter().skip(1) {
        td.parent[r] = Some(roots[0]);
    }
    if let Some(v) = (0..n).find(|&v| part_of[v] == NONE && !faces_of(v).is_empty()) {
        return Err(Error::Contract(format!("vertex {v} left unassigned")));
    }
    let h = quotient(inp.closure, &part_of, parts.len());
    Ok(HPartitionResult { parts, part_of, h, td, attached_to, tripods })
}

type Comp = (Vec<VertexId>, Vec<usize>);

/// Face-connected components of the unassigned vertices in `verts`, each with
/// its sorted boundary parts.
fn components<'f>(
    verts: &[VertexId],
    part_of: &[usize],
    faces_of: &impl Fn(VertexId) -> &'f [usize],
    faces: &[Vec<VertexId>],
    vmark: &mut [u32],
    epoch: u32,
) -> Vec<Comp> {
    let mut out = Vec::new();
    for &s in verts {
        if vmark[s] == epoch {
            continue;
        }
        vmark[s] = epoch;
        let mut comp = vec![s];
        let mut boundary: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &fi in faces_of(v) {
                for &w in &faces[fi] {
                    if part_of[w] != NONE {
                        if !boundary.contains(&part_of[w]) {
                            boundary.push(part_of[w]);
                        }
                    } else if vmark[w] != epoch {
                        vmark[w] = epoch;
                        comp.push(w);
                    }
                }
            }
        }
        comp.sort_unstable();
        boundary.sort_unstable();
        out.push((comp, boundary));
    }
    out
}

/// Quotient of `g` under `part_of`; vertices with no part are ignored.
pub fn quotient(g: &SimpleGraph, part_of: &[usize], num_parts: usize) -> SimpleGraph {
    SimpleGraph::from_edges(
        num_parts,
        g.edges().filter_map(|(u, v)| {
            let (a, b) = (part_of[u], part_of[v]);
            (a != b && a != NONE && b != NONE).then_some((a, b))
        }),
    )
}

/// Maps a partition of the cut graph back to the original graph: every copy
/// of a `Z`-vertex must lie in the distinguished part, which becomes `Z`.
pub fn project_partition(
    r: &HPartitionResult,
    cut: &CutResult,
    z_paths: &[VerticalPath],
    original_closure: &SimpleGraph,
) -> Result<HPartitionResult> {
    let n = cut.copies.len();
    let mut part_of = vec![NONE; n];
    for (v, cps) in cut.copies.iter().enumerate() {
        let split = cps.len() > 1 || cut.z_prime.binary_search(&cps[0]).is_ok();
        for &c in cps {
            let p = r.part_of[c];
            if split && r.parts[p].kind != PartKind::Special {
                return Err(Error::Internal(format!(
                    "tripod part {p} contains a copy of split vertex {v}"
                )));
            }
            part_of[v] = p;
        }
    }
    let map_path = |p: &VerticalPath| VerticalPath(p.0.iter().map(|&c| cut.provenance[c]).collect());
    let parts: Vec<Part> = r
        .parts
        .iter()
        .map(|p| match p.kind {
            PartKind::Special => Part { kind: PartKind::Special, x: Vec::new(), y: z_paths.to_vec() },
            PartKind::Tripod => Part {
                kind: PartKind::Tripod,
                x: p.x.iter().map(|&c| cut.provenance[c]).collect(),
                y: p.y.iter().map(map_path).collect(),
            },
        })
        .collect();
    let tripods = r
        .tripods
        .iter()
        .map(|t| {
            t.as_ref().map(|t| Tripod {
                legs: t.legs.iter().map(map_path).collect(),
                lower_ends: t.lower_ends.iter().map(|&c| cut.provenance[c]).collect(),
            })
        })
        .collect();
    let h = quotient(original_closure, &part_of, parts.len());
    if h != r.h {
        return Err(Error::Internal("quotient changed under projection".into()));
    }
    Ok(HPartitionResult {
        parts,
        part_of,
        h,
        td: r.td.clone(),
        attached_to: r.attached_to.clone(),
        tripods,
    })
}
