//! Deterministic instance generators.
//!
//! Randomness comes from SplitMix64 so corpora can be regenerated
//! bit-for-bit in any language. Reference outputs for seed 0 are
//! `0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f`; for seed 42
//! they start `0xbdd732262feb6e95, 0x28efe333b266f103`.

use std::collections::HashSet;

use crate::embedding::{from_vertex_faces, trace_faces, EmbeddedMultigraph, VertexId};
use crate::frontends::{Crossing, FaceLabel};
use crate::error::{Error, Result};

/// SplitMix64: a 64-bit counter-based generator; `split` derives an
/// independent stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish index in `0..n` (`next % n`).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }
}

/// Toroidal grid `C_rows x C_cols`; every rotation is north, east, south, west.
pub fn gen_toroidal_grid(rows: usize, cols: usize) -> Result<EmbeddedMultigraph> {
    if rows < 3 || cols < 3 {
        return Err(Error::Input("toroidal grid needs rows, cols >= 3".into()));
    }
    let id = |i: usize, j: usize| (i % rows) * cols + (j % cols);
    // edge 2k: east edge of vertex k, edge 2k+1: south edge of vertex k
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            edges.push((id(i, j), id(i, j + 1), 1));
            edges.push((id(i, j), id(i + 1, j), 1));
        }
    }
    let h = |i: usize, j: usize| 2 * id(i, j);
    let v = |i: usize, j: usize| 2 * id(i, j) + 1;
    let mut rotation = vec![Vec::new(); rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let north = 2 * v(i + rows - 1, j) + 1;
            let east = 2 * h(i, j);
            let south = 2 * v(i, j);
            let west = 2 * h(i, j + cols - 1) + 1;
            rotation[id(i, j)] = vec![north, east, south, west];
        }
    }
    EmbeddedMultigraph::new(rows * cols, edges, rotation)
}

fn grid_faces(rows: usize, cols: usize) -> Vec<Vec<VertexId>> {
    let id = |i: usize, j: usize| (i % rows) * cols + (j % cols);
    let mut faces = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            faces.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    faces
}

/// Stacked plane triangulation: start from a triangle and insert each new
/// vertex into a uniformly chosen face.
pub fn gen_plane_triangulation(n: usize, seed: u64) -> Result<EmbeddedMultigraph> {
    if n < 3 {
        return Err(Error::Input("plane triangulation needs n >= 3".into()));
    }
    let faces = stacked_faces(n, &mut SplitMix64::new(seed));
    from_vertex_faces(n, &faces)
}

fn stacked_faces(n: usize, rng: &mut SplitMix64) -> Vec<Vec<VertexId>> {
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for x in 3..n {
        let k = rng.below(faces.len());
        let [a, b, c] = faces[k];
        faces[k] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    faces.into_iter().map(|f| f.to_vec()).collect()
}

/// Frame with face lengths in `3..=d`, obtained by seeded edge deletions from
/// a stacked triangulation (`g = 0`) or a toroidal grid (`g = 2`). A deletion
/// is kept only if the merged face is still a cycle of length at most `d`.
pub fn gen_framed(n: usize, d: usize, g: usize, seed: u64) -> Result<EmbeddedMultigraph> {
    if d < 3 {
        return Err(Error::Input("d must be at least 3".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let (nv, mut faces) = match g {
        0 => {
            let n = n.max(3);
            (n, stacked_faces(n, &mut rng))
        }
        2 => {
            let rows = ((n as f64).sqrt().floor() as usize).max(3);
            let cols = n.div_ceil(rows).max(3);
            let quads = grid_faces(rows, cols);
            let mut faces = Vec::new();
            for q in quads {
                let split = match d {
                    3 => true,
                    4 => false,
                    _ => rng.below(2) == 0,
                };
                if split {
                    faces.push(vec![q[0], q[1], q[2]]);
                    faces.push(vec![q[0], q[2], q[3]]);
                } else {
                    faces.push(q);
                }
            }
            (rows * cols, faces)
        }
        _ => return Err(Error::Input("gen_framed supports g in {0, 2}".into())),
    };
    if d > 3 && !(g == 2 && d == 4) {
        delete_edges(&mut faces, d, &mut rng);
    }
    from_vertex_faces(nv, &faces)
}

fn delete_edges(faces: &mut Vec<Vec<VertexId>>, d: usize, rng: &mut SplitMix64) {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut seen = HashSet::new();
    for f in faces.iter() {
        for i in 0..f.len() {
            let (u, v) = (f[i], f[(i + 1) % f.len()]);
            if seen.insert((u.min(v), u.max(v))) {
                edges.push((u, v));
            }
        }
    }
    let attempts = edges.len();
    for _ in 0..attempts {
        let (u, v) = edges[rng.below(edges.len())];
        let f1 = faces.iter().position(|f| has_directed(f, u, v));
        let f2 = faces.iter().position(|f| has_directed(f, v, u));
        let (Some(f1), Some(f2)) = (f1, f2) else { continue };
        if f1 == f2 || faces[f1].len() + faces[f2].len() - 2 > d {
            continue;
        }
        let a = rotate_to(&faces[f1], v); // v, a1.., u
        let b = rotate_to(&faces[f2], u); // u, b1.., v
        let merged: Vec<VertexId> = a.iter().chain(&b[1..b.len() - 1]).copied().collect();
        let mut s = merged.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let (hi, lo) = (f1.max(f2), f1.min(f2));
        faces.swap_remove(hi);
        faces[lo] = merged;
    }
}

/// Seeded plane labelled map: a stacked triangulation with random edges
/// removed (keeping it connected, so faces may touch themselves) and faces
/// labelled so that no vertex meets more than `d` nations.
pub fn gen_labelled_map(n: usize, d: usize, seed: u64) -> Result<(EmbeddedMultigraph, Vec<FaceLabel>)> {
    if d < 3 {
        return Err(Error::Input(format!("d must be at least 3, got {d}")));
    }
    let mut rng = SplitMix64::new(seed);
    let base = from_vertex_faces(n, &stacked_faces(n, &mut rng))?;
    let m = base.num_edges();
    let mut alive = vec![true; m];
    for _ in 0..m / 3 {
        let e = rng.below(m);
        if !alive[e] {
            continue;
        }
        alive[e] = false;
        if !connected(n, base.edges().filter(|&(f, _, _)| alive[f]).map(|(_, u, v)| (u, v))) {
            alive[e] = true;
        }
    }
    let mut new_id = vec![usize::MAX; m];
    let mut edges = Vec::new();
    for (e, u, v) in base.edges() {
        if alive[e] {
            new_id[e] = edges.len();
            edges.push((u, v, 1i8));
        }
    }
    let rotation = (0..n)
        .map(|v| {
            base.rotation(v)
                .iter()
                .filter(|&&dt| alive[dt / 2])
                .map(|&dt| 2 * new_id[dt / 2] + (dt & 1))
                .collect()
        })
        .collect();
    let g = EmbeddedMultigraph::new(n, edges, rotation)?;
    let walks = trace_faces(&g).vertex_walks;
    let mut count = vec![0usize; n];
    let mut labels = vec![FaceLabel::Lake; walks.len()];
    let mut order: Vec<usize> = (0..walks.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.below(i + 1));
    }
    for f in order {
        let mut vs = walks[f].clone();
        vs.sort_unstable();
        vs.dedup();
        if rng.below(5) < 3 && vs.iter().all(|&v| count[v] < d) {
            labels[f] = FaceLabel::Nation;
            for v in vs {
                count[v] += 1;
            }
        }
    }
    Ok((g, labels))
}

fn connected(n: usize, edges: impl Iterator<Item = (VertexId, VertexId)>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps <= 1
}

/// 1-plane drawing obtained from a triangulation (given by its oriented
/// faces) by drawing, for each listed edge `uv`, the edge joining the two
/// opposite apices across `uv`. Returns the planarization and its crossings.
/// The two triangles at every listed edge must be distinct from those of the
/// other listed edges.
pub fn one_plane_from_triangulation(
    n: usize,
    faces: &[Vec<VertexId>],
    crossed: &[(VertexId, VertexId)],
) -> Result<(EmbeddedMultigraph, Vec<Crossing>)> {
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    let mut used = vec![false; faces.len()];
    let mut dummies = Vec::new();
    for (k, &(u, v)) in crossed.iter().enumerate() {
        let f1 = faces.iter().position(|f| f.len() == 3 && has_directed(f, u, v));
        let f2 = faces.iter().position(|f| f.len() == 3 && has_directed(f, v, u));
        let (Some(f1), Some(f2)) = (f1, f2) else {
            return Err(Error::Input(format!("edge {u}-{v} is not between two triangles")));
        };
        if used[f1] || used[f2] {
            return Err(Error::Input(format!("triangles at edge {u}-{v} are already used")));
        }
        used[f1] = true;
        used[f2] = true;
        let x = rotate_to(&faces[f1], u)[2];
        let y = rotate_to(&faces[f2], v)[2];
        let c = n + k;
        out.extend([vec![u, c, x], vec![c, v, x], vec![v, c, y], vec![c, u, y]]);
        dummies.push(c);
    }
    for (f, face) in faces.iter().enumerate() {
        if !used[f] {
            out.push(face.clone());
        }
    }
    let g = from_vertex_faces(n + crossed.len(), &out)?;
    let crossings = dummies
        .into_iter()
        .map(|c| {
            let r = g.rotation(c);
            Crossing { dummy: c, halves: [r[0] / 2, r[1] / 2, r[2] / 2, r[3] / 2] }
        })
        .collect();
    Ok((g, crossings))
}

/// Seeded 1-plane drawing: a stacked triangulation where each edge, in random
/// order, becomes a crossing with probability one half when its two triangles
/// are still unused.
pub fn gen_one_plane(n: usize, seed: u64) -> Result<(EmbeddedMultigraph, Vec<Crossing>)> {
    let mut rng = SplitMix64::new(seed);
    let faces = stacked_faces(n, &mut rng);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for f in &faces {
        for i in 0..3 {
            let (u, v) = (f[i], f[(i + 1) % 3]);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.below(i + 1));
    }
    let mut used = HashSet::new();
    let mut crossed = Vec::new();
    for (u, v) in edges {
        let f1 = faces.iter().position(|f| has_directed(f, u, v)).unwrap();
        let f2 = faces.iter().position(|f| has_directed(f, v, u)).unwrap();
        if rng.below(2) == 0 && !used.contains(&f1) && !used.contains(&f2) {
            used.insert(f1);
            used.insert(f2);
            crossed.push((u, v));
        }
    }
    one_plane_from_triangulation(n, &faces, &crossed)
}

/// `K5` drawn with one crossing.
pub fn k5_one_plane() -> Result<(EmbeddedMultigraph, Vec<Crossing>)> {
    let faces = vec![
        vec![0, 1, 3],
        vec![1, 2, 3],
        vec![2, 0, 3],
        vec![1, 0, 4],
        vec![2, 1, 4],
        vec![0, 2, 4],
    ];
    one_plane_from_triangulation(5, &faces, &[(0, 1)])
}

/// `K6` drawn with three crossings on an octahedron.
pub fn k6_one_plane() -> Result<(EmbeddedMultigraph, Vec<Crossing>)> {
    let faces = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 1],
        vec![5, 2, 1],
        vec![5, 3, 2],
        vec![5, 4, 3],
        vec![5, 1, 4],
    ];
    one_plane_from_triangulation(6, &faces, &[(1, 2), (5, 4), (0, 3)])
}

fn has_directed(f: &[VertexId], u: VertexId, v: VertexId) -> bool {
    (0..f.len()).any(|i| f[i] == u && f[(i + 1) % f.len()] == v)
}

fn rotate_to(f: &[VertexId], start: VertexId) -> Vec<VertexId> {
    let k = f.iter().position(|&x| x == start).unwrap();
    f[k..].iter().chain(&f[..k]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{euler_genus, trace_faces};

    #[test]
    fn splitmix_vectors() {
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(r.next_u64(), 0x6e789e6aa1b965f4);
        assert_eq!(r.next_u64(), 0x06c45d188009454f);
        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_u64(), 0xbdd732262feb6e95);
        assert_eq!(r.next_u64(), 0x28efe333b266f103);
    }

    #[test]
    fn toroidal_grid_counts() {
        for (r, c) in [(3, 3), (4, 4), (3, 4)] {
            let g = gen_toroidal_grid(r, c).unwrap();
            let f = trace_faces(&g);
            assert_eq!(f.len(), r * c);
            assert!(f.faces.iter().all(|x| x.len() == 4));
            assert!((0..f.len()).all(|i| f.is_disk_cycle(i)));
            assert_eq!(euler_genus(&g).unwrap(), 2);
        }
        assert!(gen_toroidal_grid(2, 5).is_err());
    }

    #[test]
    fn triangulation_counts() {
        let g = gen_plane_triangulation(3, 1).unwrap();
        assert_eq!(trace_faces(&g).len(), 2);
        let g = gen_plane_triangulation(4, 1).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (4, 6));
        let g = gen_plane_triangulation(100, 7).unwrap();
        assert_eq!(g.num_edges(), 3 * 100 - 6);
        assert_eq!(euler_genus(&g).unwrap(), 0);
    }

    #[test]
    fn framed_face_spectrum() {
        let g = gen_framed(60, 6, 0, 3).unwrap();
        let f = trace_faces(&g);
        assert!(f.faces.iter().all(|x| (3..=6).contains(&x.len())));
        assert!((0..f.len()).all(|i| f.is_disk_cycle(i)));
        assert!(f.faces.iter().any(|x| x.len() > 3));
        assert_eq!(euler_genus(&g).unwrap(), 0);

        let t = gen_framed(60, 3, 0, 3).unwrap();
        assert!(trace_faces(&t).faces.iter().all(|x| x.len() == 3));

        let grid = gen_framed(16, 4, 2, 9).unwrap();
        assert_eq!(grid, gen_toroidal_grid(4, 4).map(|_| grid.clone()).unwrap());
        assert!(trace_faces(&grid).faces.iter().all(|x| x.len() == 4));
        assert_eq!(euler_genus(&grid).unwrap(), 2);

        let t5 = gen_framed(40, 5, 2, 11).unwrap();
        let f5 = trace_faces(&t5);
        assert!(f5.faces.iter().all(|x| (3..=5).contains(&x.len())));
        assert!((0..f5.len()).all(|i| f5.is_disk_cycle(i)));
        assert_eq!(euler_genus(&t5).unwrap(), 2);
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_framed(50, 5, 0, 77).unwrap(), gen_framed(50, 5, 0, 77).unwrap());
        assert_eq!(gen_plane_triangulation(50, 1).unwrap(), gen_plane_triangulation(50, 1).unwrap());
    }
}
