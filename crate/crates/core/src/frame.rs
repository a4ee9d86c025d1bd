//! Framed closure `G^(d)`: every face of length at most `d` becomes a clique.

use crate::embedding::{trace_faces, EmbeddedMultigraph, FaceSet, VertexId};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFace {
    pub face: usize,
    pub cycle: Vec<VertexId>,
    /// Pairs of cycle vertices that are not consecutive on the cycle.
    pub chords: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone)]
pub struct FramedGraph {
    pub frame: EmbeddedMultigraph,
    pub d: usize,
    pub faces: FaceSet,
    pub closed: Vec<ClosedFace>,
    pub closure: SimpleGraph,
}

/// Checks that every face is bounded by a cycle; names the first bad face.
pub fn check_disk_faces(faces: &FaceSet) -> Result<()> {
    for f in 0..faces.len() {
        if !faces.is_disk_cycle(f) {
            return Err(Error::InvalidFrame(format!(
                "face {f} has vertex walk {:?}",
                faces.vertex_walks[f]
            )));
        }
    }
    Ok(())
}

pub fn close_frame(frame: &EmbeddedMultigraph, d: usize) -> Result<FramedGraph> {
    if d < 3 {
        return Err(Error::Input(format!("d must be at least 3, got {d}")));
    }
    let faces = trace_faces(frame);
    check_disk_faces(&faces)?;
    let mut closed = Vec::new();
    let mut chord_pairs = Vec::new();
    for (fi, walk) in faces.vertex_walks.iter().enumerate() {
        let k = walk.len();
        if k > d {
            continue;
        }
        let mut chords = Vec::new();
        for i in 0..k {
            for j in i + 2..k {
                if i == 0 && j == k - 1 {
                    continue;
                }
                let (a, b) = (walk[i], walk[j]);
                chords.push((a.min(b), a.max(b)));
            }
        }
        chord_pairs.extend_from_slice(&chords);
        closed.push(ClosedFace { face: fi, cycle: walk.clone(), chords });
    }
    let closure = SimpleGraph::from_edges(
        frame.num_vertices(),
        frame.edges().map(|(_, u, v)| (u, v)).chain(chord_pairs),
    );
    Ok(FramedGraph { frame: frame.clone(), d, faces, closed, closure })
}

/// Vertex set of every closed face (length in `3..=d`).
pub fn face_cliques(f: &FramedGraph) -> Vec<Vec<VertexId>> {
    f.closed
        .iter()
        .map(|c| {
            let mut s = c.cycle.clone();
            s.sort_unstable();
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::from_vertex_faces;
    use crate::generators::{gen_framed, gen_plane_triangulation, gen_toroidal_grid};

    #[test]
    fn d3_adds_nothing() {
        let g = gen_plane_triangulation(30, 2).unwrap();
        let f = close_frame(&g, 3).unwrap();
        assert!(f.closed.iter().all(|c| c.chords.is_empty()));
        assert_eq!(f.closure.num_edges(), g.num_edges());
        assert_eq!(face_cliques(&f).len(), 2 * 30 - 4);
    }

    #[test]
    fn quad_and_pentagon() {
        // a 4-cycle embedded in the sphere: two 4-faces
        let g = from_vertex_faces(4, &[vec![0, 1, 2, 3], vec![3, 2, 1, 0]]).unwrap();
        let f = close_frame(&g, 4).unwrap();
        assert!(f.closure.has_edge(0, 2) && f.closure.has_edge(1, 3));
        assert_eq!(f.closure.num_edges(), 6);
        assert_eq!(face_cliques(&f), vec![vec![0, 1, 2, 3]; 2]);
        let f3 = close_frame(&g, 3).unwrap();
        assert!(face_cliques(&f3).is_empty());

        let p = from_vertex_faces(5, &[vec![0, 1, 2, 3, 4], vec![4, 3, 2, 1, 0]]).unwrap();
        let f = close_frame(&p, 5).unwrap();
        assert_eq!(f.closed[0].chords.len(), 5);
        assert_eq!(f.closure.num_edges(), 10);
    }

    #[test]
    fn mixed_faces_filtered() {
        // outer 7-cycle 0..6 with a chord 0-3 splitting it into a 4-face and a 5-face... use 3,4,7
        let faces = vec![
            vec![0, 1, 2],
            vec![0, 2, 3, 4],
            vec![4, 3, 2, 1, 0, 6, 5],
            vec![0, 4, 5, 6],
        ];
        let g = from_vertex_faces(7, &faces).unwrap();
        let f = close_frame(&g, 4).unwrap();
        let lens: Vec<usize> = face_cliques(&f).iter().map(Vec::len).collect();
        assert!(lens.iter().all(|&l| l <= 4));
        assert_eq!(lens.len(), 3);
    }

    #[test]
    fn rejects_non_cycle_face() {
        let path = EmbeddedMultigraph::new(2, vec![(0, 1, 1)], vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(close_frame(&path, 3), Err(Error::InvalidFrame(_))));
    }

    fn brute_closure_edges(g: &EmbeddedMultigraph, d: usize) -> usize {
        let faces = trace_faces(g);
        let n = g.num_vertices();
        let mut m = vec![vec![false; n]; n];
        for (_, u, v) in g.edges() {
            m[u][v] = true;
            m[v][u] = true;
        }
        for w in &faces.vertex_walks {
            if w.len() <= d {
                for &a in w {
                    for &b in w {
                        if a != b {
                            m[a][b] = true;
                        }
                    }
                }
            }
        }
        (0..n).map(|i| (i + 1..n).filter(|&j| m[i][j]).count()).sum()
    }

    #[test]
    fn closure_matches_brute_force_and_distance_bound() {
        for (seed, d) in [(1u64, 4usize), (2, 5), (3, 6)] {
            let g = gen_framed(80, d, 0, seed).unwrap();
            let f = close_frame(&g, d).unwrap();
            assert_eq!(f.closure.num_edges(), brute_closure_edges(&g, d));
            let frame = SimpleGraph::from_edges(g.num_vertices(), g.edges().map(|(_, u, v)| (u, v)));
            for u in 0..g.num_vertices() {
                let dist = frame.distances_from(u);
                for &v in f.closure.neighbours(u) {
                    assert!(dist[v] <= d / 2);
                }
            }
        }
        let g = gen_toroidal_grid(4, 5).unwrap();
        let f = close_frame(&g, 4).unwrap();
        assert_eq!(f.closure.num_edges(), brute_closure_edges(&g, 4));
    }
}
