//! Full decomposition pipeline and the certificate it produces.

use std::fmt::Write as _;

use crate::cut::{attach_apex, build_tplus, build_z, cut_along, triangulate_long_faces};
use crate::embedding::{
    bfs_structure, euler_genus_with_faces, trace_faces, EmbeddedMultigraph, FaceSet, VertexId,
    VerticalPath,
};
use crate::error::{Error, Result};
use crate::frame::{close_frame, FramedGraph};
use crate::graph::SimpleGraph;
use crate::tripods::{
    project_partition, tripod_partition, HPartitionResult, Part, PartKind, PartitionInput,
    TreeDecomposition,
};

/// `max{2g*floor(d/2), d + 3*floor(d/2) - 3}`.
pub fn ell_bound(g: usize, d: usize) -> usize {
    let h = d / 2;
    (2 * g * h).max(d + 3 * h - 3)
}

/// Layer index of every vertex: BFS depth divided by `floor(d/2)`.
pub fn block_layering(depth: &[usize], d: usize) -> Vec<usize> {
    let h = (d / 2).max(1);
    depth.iter().map(|&x| x / h).collect()
}

/// Assigns each vertex a copy index inside its `(part, layer)` cell, in
/// ascending vertex order. Returns the copies and the largest cell size.
pub fn product_mapping(part_of: &[usize], layer: &[usize]) -> (Vec<usize>, usize) {
    let mut cells: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let mut copy = vec![0; part_of.len()];
    let mut ell = 0;
    for v in 0..part_of.len() {
        let c = cells.entry((part_of[v], layer[v])).or_insert(0);
        copy[v] = *c;
        *c += 1;
        ell = ell.max(*c);
    }
    (copy, ell)
}

/// Everything needed to check `G^(d) ⊆ H ⊠ P ⊠ K_l` without redoing the
/// decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub genus: usize,
    pub d: usize,
    pub root: VertexId,
    pub h: SimpleGraph,
    pub td: TreeDecomposition,
    pub parts: Vec<Part>,
    /// `(node, layer, copy)` per vertex.
    pub map: Vec<(usize, usize, usize)>,
    pub ell: usize,
}

/// Intermediate quantities kept for inspection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecomposeStats {
    pub n: usize,
    pub m: usize,
    pub genus: usize,
    pub d: usize,
    pub z_vertices: usize,
    pub z_edges: usize,
    pub z_paths: usize,
    pub q_edges: usize,
    pub cut_vertices: usize,
    pub new_faces: usize,
    pub cut_genus: usize,
    pub h_nodes: usize,
    pub h_edges: usize,
    pub td_width: usize,
    pub ell: usize,
    pub ell_bound: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub certificate: Certificate,
    pub partition: HPartitionResult,
    pub stats: DecomposeStats,
}

fn vertex_cycles(faces: &FaceSet) -> Vec<Vec<VertexId>> {
    faces.vertex_walks.clone()
}

/// Runs the whole pipeline on a frame.
pub fn decompose(frame: &EmbeddedMultigraph, d: usize) -> Result<Decomposition> {
    if frame.num_vertices() == 0 {
        return Err(Error::Input("empty graph".into()));
    }
    if !frame.is_connected() {
        return Err(Error::Domain("frame is not connected".into()));
    }
    let fg: FramedGraph = close_frame(frame, d)?;
    let n = frame.num_vertices();
    let genus = euler_genus_with_faces(frame, fg.faces.len())?;
    let root = frame.root().unwrap_or(0);
    let tree = bfs_structure(frame, root)?;
    let mut stats = DecomposeStats {
        n,
        m: frame.num_edges(),
        genus,
        d,
        ..Default::default()
    };

    let partition = if genus == 0 {
        let (tri, _) = triangulate_long_faces(frame, d)?;
        let mut faces = vertex_cycles(&trace_faces(&tri));
        if faces.is_empty() {
            // lone vertex
            faces.push(vec![root]);
        }
        let parent: Vec<Option<VertexId>> = (0..n).map(|v| tree.parent_vertex(v)).collect();
        tripod_partition(&PartitionInput {
            num_vertices: n,
            faces: &faces,
            parent: &parent,
            initial: None,
            root,
            d,
            closure: &fg.closure,
        })?
    } else {
        let cs = build_z(frame, &fg.faces, &tree)?;
        let cut = cut_along(frame, &cs)?;
        let ap = attach_apex(&cut)?;
        let tp = build_tplus(&ap, &tree, &cut, &cs)?;
        let n2 = cut.graph.num_vertices();
        stats.z_vertices = cs.p();
        stats.z_edges = cs.q_count();
        stats.z_paths = cs.paths.len();
        stats.q_edges = cs.q.len();
        stats.cut_vertices = n2;
        stats.new_faces = cut.faces.len() - fg.faces.len();
        stats.cut_genus = euler_genus_with_faces(&cut.graph, cut.faces.len())?;
        let closure2 = close_frame(&cut.graph, d)?.closure;
        let (tri, _) = triangulate_long_faces(&cut.graph, d)?;
        let faces = vertex_cycles(&trace_faces(&tri));
        let mut parent: Vec<Option<VertexId>> = tp.parent[..n2].to_vec();
        parent[tp.path.top()] = None;
        let r = tripod_partition(&PartitionInput {
            num_vertices: n2,
            faces: &faces,
            parent: &parent,
            initial: Some(tp.path.clone()),
            root: tp.path.top(),
            d,
            closure: &closure2,
        })?;
        project_partition(&r, &cut, &cs.paths, &fg.closure)?
    };

    let layer = block_layering(&tree.depth, d);
    let (copy, ell) = product_mapping(&partition.part_of, &layer);
    let bound = ell_bound(genus, d);
    stats.h_nodes = partition.parts.len();
    stats.h_edges = partition.h.num_edges();
    stats.td_width = partition.td.width();
    stats.ell = ell;
    stats.ell_bound = bound;
    if ell > bound {
        return Err(Error::Contract(format!("clique size {ell} exceeds {bound}")));
    }
    let map = (0..n).map(|v| (partition.part_of[v], layer[v], copy[v])).collect();
    let certificate = Certificate {
        n,
        genus,
        d,
        root,
        h: partition.h.clone(),
        td: partition.td.clone(),
        parts: partition.parts.clone(),
        map,
        ell,
    };
    let report = crate::verify::verify(frame, d, &certificate);
    if !report.is_ok() {
        return Err(Error::Verify(report.lines().join("; ")));
    }
    Ok(Decomposition { certificate, partition, stats })
}

fn join(xs: impl IntoIterator<Item = usize>) -> String {
    let mut s = String::new();
    for (i, x) in xs.into_iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x}");
    }
    s
}

impl Certificate {
    /// Line-oriented text form; parsing it back yields an equal value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cert n {} g {} d {} root {}", self.n, self.genus, self.d, self.root);
        let _ = writeln!(s, "H {} {}", self.h.num_vertices(), self.h.num_edges());
        for (u, v) in self.h.edges() {
            let _ = writeln!(s, "h {u} {v}");
        }
        let _ = writeln!(s, "TD {}", self.td.bags.len());
        for (i, bag) in self.td.bags.iter().enumerate() {
            let p = self.td.parent[i].map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(s, "bag {i} {p} : {}", join(bag.iter().copied()));
        }
        let _ = writeln!(s, "PARTS {}", self.parts.len());
        for (i, p) in self.parts.iter().enumerate() {
            let kind = match p.kind {
                PartKind::Special => "Z",
                PartKind::Tripod => "TRIPOD",
            };
            let _ = write!(s, "part {i} {kind} x {}", join(p.x.iter().copied()));
            for y in &p.y {
                let _ = write!(s, " | {}", join(y.0.iter().copied()));
            }
            s.push('\n');
        }
        let _ = writeln!(s, "LAYERS {}", self.map.len());
        for chunk in self.map.chunks(32) {
            let _ = writeln!(s, "l {}", join(chunk.iter().map(|m| m.1)));
        }
        let _ = writeln!(s, "MAP {}", self.map.len());
        for (v, &(a, l, c)) in self.map.iter().enumerate() {
            let _ = writeln!(s, "m {v} {a} {l} {c}");
        }
        let _ = writeln!(s, "ELL {}", self.ell);
        s
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut header = None;
        let mut h_nodes = 0usize;
        let mut h_edges = Vec::new();
        let mut bags: Vec<Option<(Option<usize>, Vec<usize>)>> = Vec::new();
        let mut parts: Vec<Option<Part>> = Vec::new();
        let mut map: Vec<Option<(usize, usize, usize)>> = Vec::new();
        let mut ell = None;
        let mut layers: Option<(usize, Vec<usize>)> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |t: &str| -> Result<usize> {
                t.parse().map_err(|_| Error::parse(line, format!("expected a number, got {t:?}")))
            };
            let nums = |ts: &[&str]| -> Result<Vec<usize>> { ts.iter().map(|t| num(t)).collect() };
            let arity = |k: usize| -> Result<()> {
                if toks.len() == k {
                    Ok(())
                } else {
                    Err(Error::parse(line, format!("expected {k} fields, got {}", toks.len())))
                }
            };
            match toks[0] {
                "cert" => {
                    arity(9)?;
                    if toks[1] != "n" || toks[3] != "g" || toks[5] != "d" || toks[7] != "root" {
                        return Err(Error::parse(line, "malformed cert header"));
                    }
                    header = Some((num(toks[2])?, num(toks[4])?, num(toks[6])?, num(toks[8])?));
                }
                "H" => {
                    arity(3)?;
                    h_nodes = num(toks[1])?;
                }
                "h" => {
                    arity(3)?;
                    let (u, v) = (num(toks[1])?, num(toks[2])?);
                    if u >= h_nodes || v >= h_nodes || u == v {
                        return Err(Error::parse(line, format!("bad H edge {u} {v}")));
                    }
                    h_edges.push((u, v));
                }
                "TD" => {
                    arity(2)?;
                    bags = vec![None; num(toks[1])?];
                }
                "bag" => {
                    if toks.len() < 4 || toks[3] != ":" {
                        return Err(Error::parse(line, "expected `bag id parent : nodes`"));
                    }
                    let i = num(toks[1])?;
                    let p = if toks[2] == "-" { None } else { Some(num(toks[2])?) };
                    let slot = bags
                        .get_mut(i)
                        .ok_or_else(|| Error::parse(line, format!("bag {i} out of range")))?;
                    *slot = Some((p, nums(&toks[4..])?));
                }
                "PARTS" => {
                    arity(2)?;
                    parts = vec![None; num(toks[1])?];
                }
                "part" => {
                    if toks.len() < 4 || toks[3] != "x" {
                        return Err(Error::parse(line, "expected `part id kind x ...`"));
                    }
                    let i = num(toks[1])?;
                    let kind = match toks[2] {
                        "Z" => PartKind::Special,
                        "TRIPOD" => PartKind::Tripod,
                        k => return Err(Error::parse(line, format!("unknown part kind {k}"))),
                    };
                    let mut groups = toks[4..].split(|t| *t == "|");
                    let x = nums(groups.next().unwrap_or(&[]))?;
                    let y = groups.map(|g| nums(g).map(VerticalPath)).collect::<Result<Vec<_>>>()?;
                    let slot = parts
                        .get_mut(i)
                        .ok_or_else(|| Error::parse(line, format!("part {i} out of range")))?;
                    *slot = Some(Part { kind, x, y });
                }
                "LAYERS" => {
                    arity(2)?;
                    layers = Some((num(toks[1])?, Vec::new()));
                }
                "l" => {
                    let (_, ls) = layers
                        .as_mut()
                        .ok_or_else(|| Error::parse(line, "layer line before LAYERS"))?;
                    ls.extend(nums(&toks[1..])?);
                }
                "MAP" => {
                    arity(2)?;
                    map = vec![None; num(toks[1])?];
                }
                "m" => {
                    arity(5)?;
                    let v = num(toks[1])?;
                    let slot = map
                        .get_mut(v)
                        .ok_or_else(|| Error::parse(line, format!("vertex {v} out of range")))?;
                    if slot.is_some() {
                        return Err(Error::parse(line, format!("vertex {v} mapped twice")));
                    }
                    *slot = Some((num(toks[2])?, num(toks[3])?, num(toks[4])?));
                }
                "ELL" => {
                    arity(2)?;
                    ell = Some(num(toks[1])?);
                }
                k => return Err(Error::parse(line, format!("unknown record {k:?}"))),
            }
        }
        let (n, genus, d, root) = header.ok_or_else(|| Error::parse(0, "missing cert header"))?;
        let td_pairs = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let parts = parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::parse(0, format!("part {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        if map.len() != n {
            return Err(Error::parse(0, format!("MAP has {} entries for {n} vertices", map.len())));
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(v, x)| x.ok_or_else(|| Error::parse(0, format!("vertex {v} unmapped"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some((k, ls)) = layers {
            if k != n || ls.len() != n {
                return Err(Error::parse(0, format!("LAYERS lists {} of {n} vertices", ls.len())));
            }
            if let Some(v) = (0..n).find(|&v| ls[v] != map[v].1) {
                return Err(Error::parse(0, format!("LAYERS and MAP disagree at vertex {v}")));
            }
        }
        let td = TreeDecomposition {
            parent: td_pairs.iter().map(|b| b.0).collect(),
            bags: td_pairs.into_iter().map(|b| b.1).collect(),
        };
        Ok(Certificate {
            n,
            genus,
            d,
            root,
            h: SimpleGraph::from_edges(h_nodes, h_edges),
            td,
            parts,
            map,
            ell: ell.ok_or_else(|| Error::parse(0, "missing ELL"))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_framed, gen_plane_triangulation, gen_toroidal_grid};

    #[test]
    fn bound_values() {
        assert_eq!(ell_bound(0, 3), 3);
        assert_eq!(ell_bound(1, 3), 3);
        assert_eq!(ell_bound(1, 4), 7);
        assert_eq!(ell_bound(2, 4), 8);
        assert_eq!(ell_bound(2, 6), 12);
    }

    #[test]
    fn plane_triangulations() {
        for n in [3, 4, 10, 50, 300] {
            for seed in 0..5 {
                let g = gen_plane_triangulation(n, seed).unwrap();
                let dec = decompose(&g, 3).unwrap();
                assert!(dec.certificate.ell <= 3, "n={n} seed={seed}");
                assert!(dec.stats.td_width <= 3);
            }
        }
    }

    #[test]
    fn toroidal_grids() {
        for r in 3..7 {
            for c in 3..7 {
                let g = gen_toroidal_grid(r, c).unwrap();
                let dec = decompose(&g, 4).unwrap();
                let s = &dec.stats;
                assert_eq!(s.genus, 2);
                assert!(s.ell <= 8);
                assert_eq!(s.z_edges, s.z_vertices + 1);
                assert_eq!(s.cut_vertices, s.n + s.z_vertices + 2);
                assert_eq!(s.new_faces, 1);
                assert_eq!(s.cut_genus, 0);
                assert!(s.z_paths <= 4);
            }
        }
    }

    #[test]
    fn framed_instances() {
        for d in 3..=6 {
            for g in [0, 2] {
                for seed in 0..4 {
                    let f = gen_framed(60, d, g, seed).unwrap();
                    let dec = decompose(&f, d).unwrap();
                    assert!(dec.certificate.ell <= ell_bound(g, d));
                }
            }
        }
    }

    #[test]
    fn certificate_round_trip() {
        let g = gen_toroidal_grid(4, 5).unwrap();
        let c = decompose(&g, 4).unwrap().certificate;
        let t = c.to_text();
        assert_eq!(Certificate::parse(&t).unwrap(), c);
    }
}
