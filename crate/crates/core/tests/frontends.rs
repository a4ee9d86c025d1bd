mod common;

use framedprod::assemble::decompose;
use framedprod::embedding::{from_vertex_faces, trace_faces, EmbeddedMultigraph};
use framedprod::frontends::{map_to_frame, oneplanar_to_frame, FaceLabel};
use framedprod::generators::{gen_plane_triangulation, k5_one_plane, k6_one_plane};
use framedprod::Error;

// triangular lattice on a k x k grid of points; every bounded face a triangle
fn triangular_patch(k: usize) -> EmbeddedMultigraph {
    let id = |i: usize, j: usize| i * (k + 1) + j;
    let mut faces = Vec::new();
    for i in 0..k {
        for j in 0..k {
            faces.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let mut outer = Vec::new();
    outer.extend((0..k).map(|j| id(0, j)));
    outer.extend((0..k).map(|i| id(i, k)));
    outer.extend((1..=k).rev().map(|j| id(k, j)));
    outer.extend((1..=k).rev().map(|i| id(i, 0)));
    faces.push(outer);
    from_vertex_faces((k + 1) * (k + 1), &faces).unwrap()
}

fn check_map(g0: &EmbeddedMultigraph, labels: &[FaceLabel], d: usize) {
    let mf = map_to_frame(g0, labels, d).unwrap();
    let want = common::map_edges(g0, labels);
    let cl = common::closure(&mf.frame, d);
    let at: std::collections::HashMap<usize, usize> = mf.nations.iter().copied().collect();
    for &(a, b) in &want {
        let (x, y) = (at[&a], at[&b]);
        assert!(cl.contains(&(x.min(y), x.max(y))), "map edge {a}-{b} missing");
    }
    let dec = decompose(&mf.frame, d).unwrap();
    common::containment(&mf.frame, &dec.certificate).unwrap();
}

#[test]
fn triangular_lattice_map_with_d6() {
    let g0 = triangular_patch(5);
    let faces = trace_faces(&g0);
    let labels: Vec<FaceLabel> = faces
        .vertex_walks
        .iter()
        .map(|w| if w.len() == 3 { FaceLabel::Nation } else { FaceLabel::Lake })
        .collect();
    assert_eq!(labels.iter().filter(|&&l| l == FaceLabel::Nation).count(), 50);
    check_map(&g0, &labels, 6);
}

#[test]
fn lattice_rejects_small_d() {
    let g0 = triangular_patch(3);
    let labels: Vec<FaceLabel> = trace_faces(&g0)
        .vertex_walks
        .iter()
        .map(|w| if w.len() == 3 { FaceLabel::Nation } else { FaceLabel::Lake })
        .collect();
    assert!(matches!(map_to_frame(&g0, &labels, 5), Err(Error::Input(_))));
}

#[test]
fn checkerboard_nations() {
    let g0 = gen_plane_triangulation(40, 9).unwrap();
    let labels: Vec<FaceLabel> = (0..trace_faces(&g0).len())
        .map(|f| if f % 2 == 0 { FaceLabel::Nation } else { FaceLabel::Lake })
        .collect();
    let worst = (0..g0.num_vertices()).map(|v| g0.degree(v)).max().unwrap();
    check_map(&g0, &labels, worst.max(3));
}

#[test]
fn plane_drawing_without_crossings() {
    let p = gen_plane_triangulation(30, 4).unwrap();
    let f = oneplanar_to_frame(&p, &[]).unwrap();
    let cl = common::closure(&f.frame, 4);
    for (u, v) in common::drawn_edges(&p, &[]) {
        let (x, y) = (f.vertex_of[u].unwrap(), f.vertex_of[v].unwrap());
        assert!(cl.contains(&(x.min(y), x.max(y))));
    }
}

#[test]
fn k5_crossing_pair_restored() {
    let (p, xs) = k5_one_plane().unwrap();
    let f = oneplanar_to_frame(&p, &xs).unwrap();
    let want = common::drawn_edges(&p, &xs);
    assert_eq!(want.len(), 10);
    let cl = common::closure(&f.frame, 4);
    for &(u, v) in &want {
        let (x, y) = (f.vertex_of[u].unwrap(), f.vertex_of[v].unwrap());
        assert!(cl.contains(&(x.min(y), x.max(y))), "{u}-{v}");
    }
    // the crossed pair is not a frame edge; it comes from a 4-face
    let frame_edges: std::collections::HashSet<(usize, usize)> =
        f.frame.edge_list().into_iter().map(|(u, v, _)| (u.min(v), u.max(v))).collect();
    assert!(want.iter().any(|&(u, v)| {
        let (x, y) = (f.vertex_of[u].unwrap(), f.vertex_of[v].unwrap());
        !frame_edges.contains(&(x.min(y), x.max(y)))
    }));
}

#[test]
fn k6_all_fifteen_edges() {
    let (p, xs) = k6_one_plane().unwrap();
    assert_eq!(xs.len(), 3);
    let f = oneplanar_to_frame(&p, &xs).unwrap();
    let want = common::drawn_edges(&p, &xs);
    assert_eq!(want.len(), 15);
    let cl = common::closure(&f.frame, 4);
    for &(u, v) in &want {
        let (x, y) = (f.vertex_of[u].unwrap(), f.vertex_of[v].unwrap());
        assert!(cl.contains(&(x.min(y), x.max(y))), "{u}-{v}");
    }
    let dec = decompose(&f.frame, 4).unwrap();
    assert!(dec.certificate.ell <= 7);
}
