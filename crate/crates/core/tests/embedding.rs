use std::collections::VecDeque;

use framedprod::embedding::{
    bfs_structure, euler_genus, from_vertex_faces, nontree_dual, parse_embedding, trace_faces,
    write_embedding, EmbeddedMultigraph,
};
use framedprod::generators::gen_toroidal_grid;
use framedprod::Error;

fn cycle3() -> EmbeddedMultigraph {
    EmbeddedMultigraph::new(
        3,
        vec![(0, 1, 1), (1, 2, 1), (2, 0, 1)],
        vec![vec![0, 5], vec![1, 2], vec![3, 4]],
    )
    .unwrap()
}

fn k4() -> EmbeddedMultigraph {
    from_vertex_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]).unwrap()
}

// plain BFS over the edge list
fn oracle_depths(g: &EmbeddedMultigraph, s: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); g.num_vertices()];
    for (u, v, _) in g.edge_list() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
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

#[test]
fn cycle_on_the_sphere() {
    let g = cycle3();
    let f = trace_faces(&g);
    assert_eq!(f.len(), 2);
    assert!(f.vertex_walks.iter().all(|w| w.len() == 3));
    assert_eq!(euler_genus(&g).unwrap(), 0);
}

#[test]
fn k4_has_four_triangles() {
    let g = k4();
    let f = trace_faces(&g);
    assert_eq!(f.len(), 4);
    assert!(f.vertex_walks.iter().all(|w| w.len() == 3));
    assert_eq!(4 + f.len(), 6 + 2);
    assert_eq!(euler_genus(&g).unwrap(), 0);
}

#[test]
fn three_by_three_torus() {
    let g = gen_toroidal_grid(3, 3).unwrap();
    let f = trace_faces(&g);
    assert_eq!((g.num_vertices(), g.num_edges(), f.len()), (9, 18, 9));
    assert!(f.vertex_walks.iter().all(|w| w.len() == 4));
    assert_eq!(euler_genus(&g).unwrap(), 2);
    for r in 0..9 {
        let t = bfs_structure(&g, r).unwrap();
        assert_eq!(t.depth, oracle_depths(&g, r));
        let sizes: Vec<usize> = t.layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 4]);
    }
    let t = bfs_structure(&g, 0).unwrap();
    let dual = nontree_dual(&g, &f, &t);
    assert_eq!(dual.num_nodes, 9);
    assert_eq!(dual.edges.len(), 18 - 8);
    assert!(dual.is_connected());
}

#[test]
fn four_by_four_torus() {
    let g = gen_toroidal_grid(4, 4).unwrap();
    assert_eq!((g.num_vertices(), g.num_edges(), trace_faces(&g).len()), (16, 32, 16));
    assert_eq!(euler_genus(&g).unwrap(), 2);
}

#[test]
fn dual_of_k4() {
    let g = k4();
    let f = trace_faces(&g);
    let t = bfs_structure(&g, 2).unwrap();
    let dual = nontree_dual(&g, &f, &t);
    assert_eq!(dual.num_nodes, 4);
    assert_eq!(dual.edges.len(), 3);
    assert!(dual.is_connected());
}

#[test]
fn tree_has_one_face_and_edgeless_dual() {
    let g = EmbeddedMultigraph::new(
        4,
        vec![(0, 1, 1), (0, 2, 1), (0, 3, 1)],
        vec![vec![0, 2, 4], vec![1], vec![3], vec![5]],
    )
    .unwrap();
    let f = trace_faces(&g);
    assert_eq!(f.len(), 1);
    let dual = nontree_dual(&g, &f, &bfs_structure(&g, 0).unwrap());
    assert_eq!(dual.num_nodes, 1);
    assert!(dual.edges.is_empty());
}

#[test]
fn path_depths() {
    let g = EmbeddedMultigraph::new(3, vec![(0, 1, 1), (1, 2, 1)], vec![vec![0], vec![1, 2], vec![3]])
        .unwrap();
    assert_eq!(bfs_structure(&g, 0).unwrap().depth, vec![0, 1, 2]);
    assert!(matches!(bfs_structure(&g, 3), Err(Error::Domain(_))));
}

#[test]
fn malformed_rotations_are_structural_errors() {
    let missing = EmbeddedMultigraph::new(2, vec![(0, 1, 1)], vec![vec![0], vec![]]);
    assert!(matches!(missing, Err(Error::Structural(_))));
    let doubled = EmbeddedMultigraph::new(2, vec![(0, 1, 1)], vec![vec![0, 0], vec![1]]);
    assert!(matches!(doubled, Err(Error::Structural(_))));
}

#[test]
fn text_format_round_trips() {
    let g = gen_toroidal_grid(3, 5).unwrap();
    let t = write_embedding(&g);
    assert_eq!(write_embedding(&parse_embedding(&t).unwrap()), t);
    assert!(matches!(parse_embedding("emg 2 1\ne 0 0 7 +1\n"), Err(Error::Parse { .. })));
}
