use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    target_points, ConeFiber, CoveringMap, GraphMap, PieceAssignment, SegmentImage, SegmentStep, SourcePoint,
    TargetPoint,
};
use crate::coxeter::{davis_orbicomplex, paper_graph, wall_edge_id};
use crate::error::{Error, Result};
use crate::orbicore::{
    face_rotation, Attachment, BoundaryCircle, Dart, Mark, MarkedGraph, Orbicomplex, Piece, SegmentRef,
};

fn step(piece: usize, circle: usize, segment: usize, reversed: bool) -> SegmentStep {
    SegmentStep { segment: SegmentRef::new(piece, circle, segment), reversed }
}

/// Map between two single-piece complexes with nothing attached.
fn piece_map(
    source: Piece,
    target: Piece,
    degree: u32,
    segment_map: Vec<SegmentImage>,
    cone_fibers: Vec<ConeFiber>,
) -> CoveringMap {
    CoveringMap {
        source: Orbicomplex::from_piece(source),
        target: Orbicomplex::from_piece(target),
        degree,
        graph_map: GraphMap::default(),
        piece_assignment: vec![PieceAssignment { target: 0, local_degree: degree }],
        segment_map,
        cone_fibers,
    }
}

/// Position of the free arc of a reflection polygon: index of its first
/// segment and its length. The boundary must be one circle made of a single
/// run of mirrors followed by a single run of free segments.
fn polygon_arc(p: &Piece) -> Result<(usize, usize)> {
    let bad = |m: &str| Err(Error::NotAPolygon(format!("{}: {m}", p.id)));
    if p.genus != 0 || p.boundary.len() != 1 || !p.cones.is_empty() {
        return bad("not a disk with one boundary circle and no cones");
    }
    let c = &p.boundary[0];
    let n = c.len();
    let starts: Vec<usize> =
        (0..n).filter(|&s| !c.segments[s].is_mirror() && c.segments[(s + n - 1) % n].is_mirror()).collect();
    if c.mirror_count() == 0 || starts.len() != 1 {
        return bad("boundary is not one mirror run and one free run");
    }
    Ok((starts[0], c.free_count()))
}

/// The disk obtained by doubling a reflection polygon across its mirrors:
/// each corner becomes an order-2 cone and the free arc appears twice, once
/// reversed.
pub fn reflection_double(p: &Piece) -> Result<(Piece, CoveringMap)> {
    let (first, a) = polygon_arc(p)?;
    let n = p.boundary[0].len();
    let corners = target_points(p);
    let disk = Piece {
        id: format!("{}~", p.id),
        genus: 0,
        boundary: vec![BoundaryCircle::free(2 * a)],
        cones: vec![2; corners.len()],
    };
    let mut segment_map = Vec::new();
    for k in 0..a {
        segment_map
            .push(SegmentImage { source: SegmentRef::new(0, 0, k), path: vec![step(0, 0, (first + k) % n, false)] });
    }
    for k in 0..a {
        segment_map.push(SegmentImage {
            source: SegmentRef::new(0, 0, a + k),
            path: vec![step(0, 0, (first + a - 1 - k) % n, true)],
        });
    }
    let cone_fibers = corners
        .iter()
        .enumerate()
        .map(|(i, &point)| ConeFiber { target_piece: 0, point, preimages: vec![(0, SourcePoint::Cone { index: i })] })
        .collect();
    Ok((disk.clone(), piece_map(disk, p.clone(), 2, segment_map, cone_fibers)))
}

/// The rotation by a half turn of a disk with `2m` order-2 cones, as a
/// double cover of the disk with `m + 1` cones. The first target cone is the
/// image of the rotation centre and has a single smooth preimage; every other
/// target cone has two cone preimages.
pub fn rotation_double(target: &Piece) -> Result<(Piece, CoveringMap)> {
    let bad = |m: &str| Err(Error::NotADiskOrbifold(format!("{}: {m}", target.id)));
    if target.genus != 0 || target.boundary.len() != 1 || target.has_mirrors() {
        return bad("not a disk with one free boundary circle");
    }
    if target.cones.len() < 2 || target.cones.iter().any(|&m| m != 2) {
        return bad("need at least two cones, all of order 2");
    }
    let m = target.cones.len() - 1;
    let n = target.boundary[0].len();
    let disk = Piece {
        id: format!("{}~", target.id),
        genus: 0,
        boundary: vec![BoundaryCircle::new(
            [target.boundary[0].segments.clone(), target.boundary[0].segments.clone()].concat(),
        )],
        cones: vec![2; 2 * m],
    };
    let segment_map = (0..2 * n)
        .map(|k| SegmentImage { source: SegmentRef::new(0, 0, k), path: vec![step(0, 0, k % n, false)] })
        .collect();
    let mut cone_fibers = vec![ConeFiber {
        target_piece: 0,
        point: TargetPoint::Cone { index: 0 },
        preimages: vec![(0, SourcePoint::Smooth)],
    }];
    for i in 1..=m {
        cone_fibers.push(ConeFiber {
            target_piece: 0,
            point: TargetPoint::Cone { index: i },
            preimages: vec![(0, SourcePoint::Cone { index: 2 * (i - 1) }), (0, SourcePoint::Cone { index: 2 * i - 1 })],
        });
    }
    Ok((disk.clone(), piece_map(disk, target.clone(), 2, segment_map, cone_fibers)))
}

/// The double cover of the Davis complex of the built-in defining graph by
/// six disks on a theta graph: disks over the long branches carry six cones,
/// the others four.
pub fn build_x1() -> (Orbicomplex, CoveringMap) {
    let target = davis_orbicomplex(&paper_graph()).expect("built-in graph is valid");
    let ends = |p: &Piece| -> (String, String) {
        let labels: Vec<&str> =
            p.boundary[0].segments.iter().filter(|s| s.is_mirror()).filter_map(|s| s.label.as_deref()).collect();
        (labels[0].to_string(), labels[labels.len() - 1].to_string())
    };
    let over = |a: &str, b: &str| -> Vec<usize> {
        let mut v: Vec<usize> = (0..target.pieces.len())
            .filter(|&i| {
                let (s, e) = ends(&target.pieces[i]);
                (s == a && e == b) || (s == b && e == a)
            })
            .collect();
        v.sort_unstable();
        v
    };
    let (p12, p13, p23) = (over("v1", "v2"), over("v1", "v3"), over("v2", "v3"));
    // (target polygon, c_j, c_k): boundary of D_i reads c_j c_k^{-1}
    let disks: [(usize, usize, usize); 6] =
        [(p12[0], 1, 2), (p12[1], 1, 2), (p13[0], 1, 3), (p13[1], 1, 3), (p23[0], 3, 2), (p23[1], 3, 2)];

    let mut graph = MarkedGraph::new();
    graph.add_vertex("x", Mark::None).add_vertex("y", Mark::None);
    for j in 1..=3 {
        graph.add_edge(format!("c{j}"), "x", "y", 0);
    }
    let mut graph_map = GraphMap::default();
    graph_map.vertices.insert("x".into(), "o".into());
    graph_map.vertices.insert("y".into(), "o".into());
    for j in 1..=3 {
        let e = wall_edge_id(&format!("v{j}"));
        graph_map.edges.insert(format!("c{j}"), vec![Dart::new(e.clone(), true), Dart::new(e, false)]);
    }

    let mut pieces = Vec::new();
    let mut attachments = Vec::new();
    let mut segment_map = Vec::new();
    let mut fibers: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &(t, j, k)) in disks.iter().enumerate() {
        let polygon = &target.pieces[t];
        let n = polygon.mirror_count();
        let (start, _) = ends(polygon);
        // the edge of v_j leaves the centre and returns along the free
        // segment at that wall: segment n+1 at the start, n at the end
        let double_back = |j: usize| {
            if start == format!("v{j}") {
                vec![step(t, 0, n + 1, false), step(t, 0, n + 1, true)]
            } else {
                vec![step(t, 0, n, true), step(t, 0, n, false)]
            }
        };
        pieces.push(Piece::disk(format!("D{}", i + 1), polygon.corner_count(), 2));
        attachments.push(Attachment { segment: SegmentRef::new(i, 0, 0), dart: Dart::new(format!("c{j}"), false) });
        attachments.push(Attachment { segment: SegmentRef::new(i, 0, 1), dart: Dart::new(format!("c{k}"), true) });
        segment_map.push(SegmentImage { source: SegmentRef::new(i, 0, 0), path: double_back(j) });
        segment_map.push(SegmentImage { source: SegmentRef::new(i, 0, 1), path: double_back(k) });
        fibers.insert(t, i);
    }
    let mut cone_fibers = Vec::new();
    for (t, polygon) in target.pieces.iter().enumerate() {
        let i = fibers[&t];
        for (c, point) in target_points(polygon).into_iter().enumerate() {
            cone_fibers.push(ConeFiber {
                target_piece: t,
                point,
                preimages: vec![(i, SourcePoint::Cone { index: c })],
            });
        }
    }
    let mut piece_assignment = vec![PieceAssignment { target: 0, local_degree: 2 }; 6];
    for (i, &(t, _, _)) in disks.iter().enumerate() {
        piece_assignment[i].target = t;
    }
    let mut x1 = Orbicomplex::new("X1", pieces, graph, attachments);
    x1.recompute_multiplicities();
    x1.rotation = face_rotation(&x1);
    let map =
        CoveringMap { source: x1.clone(), target, degree: 2, graph_map, piece_assignment, segment_map, cone_fibers };
    (x1, map)
}

/// Two stacked rotation doubles `S_{g,4} -> A(2g+2) -> D^2(g+3)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTower {
    pub genus: u32,
    pub surface: Piece,
    pub annulus: Piece,
    pub disk: Piece,
    pub upper: CoveringMap,
    pub lower: CoveringMap,
}

impl SurfaceTower {
    pub fn composite(&self) -> Result<CoveringMap> {
        self.upper.compose(&self.lower)
    }
}

/// The degree-4 tower over a disk with `g + 3` order-2 cones. The lower
/// half turn fixes two smooth points of the annulus core, which descend to
/// two of the cones; the upper half turn unwraps the annulus cones.
pub fn surface_over_disk_tower(g: u32) -> Result<SurfaceTower> {
    if g < 1 {
        return Err(Error::BadGenus(g));
    }
    let k = g as usize;
    let disk = Piece::disk(format!("D2({})", k + 3), k + 3, 1);
    let annulus = Piece {
        id: format!("A({})", 2 * k + 2),
        genus: 0,
        boundary: vec![BoundaryCircle::free(1); 2],
        cones: vec![2; 2 * k + 2],
    };
    let surface = Piece::surface(format!("S{{{g},4}}"), g, 4);

    let lower_segments =
        (0..2).map(|c| SegmentImage { source: SegmentRef::new(0, c, 0), path: vec![step(0, 0, 0, false)] }).collect();
    let mut lower_fibers: Vec<ConeFiber> = (0..=k)
        .map(|i| ConeFiber {
            target_piece: 0,
            point: TargetPoint::Cone { index: i },
            preimages: vec![(0, SourcePoint::Cone { index: 2 * i }), (0, SourcePoint::Cone { index: 2 * i + 1 })],
        })
        .collect();
    for i in k + 1..k + 3 {
        lower_fibers.push(ConeFiber {
            target_piece: 0,
            point: TargetPoint::Cone { index: i },
            preimages: vec![(0, SourcePoint::Smooth)],
        });
    }
    let lower = piece_map(annulus.clone(), disk.clone(), 2, lower_segments, lower_fibers);

    let upper_segments = (0..4)
        .map(|c| SegmentImage { source: SegmentRef::new(0, c, 0), path: vec![step(0, c / 2, 0, false)] })
        .collect();
    let upper_fibers = (0..2 * k + 2)
        .map(|i| ConeFiber {
            target_piece: 0,
            point: TargetPoint::Cone { index: i },
            preimages: vec![(0, SourcePoint::Smooth)],
        })
        .collect();
    let upper = piece_map(surface.clone(), annulus.clone(), 2, upper_segments, upper_fibers);
    Ok(SurfaceTower { genus: g, surface, annulus, disk, upper, lower })
}

/// Degree-4 manifold cover of a complex of disks with order-2 cones: four
/// copies of the attaching graph, and over each disk with `k` cones the
/// surface of genus `k - 3` with four boundary circles, circle `r` glued to
/// copy `r` of the disk's attaching circuit.
pub fn torsion_free_cover(c: &Orbicomplex) -> Result<(Orbicomplex, CoveringMap)> {
    c.require_valid()?;
    let unsupported = |p: usize, m: &str| Err(Error::UnsupportedPiece(format!("piece {p}: {m}")));
    if c.graph.vertices.iter().any(|v| v.mark.is_marked()) {
        return Err(Error::UnsupportedPiece("attaching graph has marked vertices".into()));
    }
    let mut circuits = Vec::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        if piece.has_mirrors() {
            return unsupported(p, "mirror segments");
        }
        if piece.genus != 0 || piece.boundary.len() != 1 {
            return unsupported(p, "not a disk");
        }
        if piece.cones.len() < 4 || piece.cones.iter().any(|&m| m != 2) {
            return unsupported(p, "need at least four cones, all of order 2");
        }
        let Some(w) = c.circuit(p, 0) else {
            return unsupported(p, "boundary is not fully attached");
        };
        circuits.push(w);
    }
    let copy = |k: usize, id: &str| format!("{k}:{id}");
    let graph = c.graph.copies(4);
    let mut graph_map = GraphMap::default();
    for k in 0..4 {
        for v in &c.graph.vertices {
            graph_map.vertices.insert(copy(k, &v.id), v.id.clone());
        }
        for e in &c.graph.edges {
            graph_map.edges.insert(copy(k, &e.id), vec![Dart::new(e.id.clone(), false)]);
        }
    }
    let mut pieces = Vec::new();
    let mut attachments = Vec::new();
    let mut segment_map = Vec::new();
    let mut cone_fibers = Vec::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        let n = piece.boundary[0].len();
        let genus = (piece.cones.len() - 3) as u32;
        pieces.push(Piece {
            id: format!("{}^", piece.id),
            genus,
            boundary: vec![piece.boundary[0].clone(); 4],
            cones: Vec::new(),
        });
        for r in 0..4 {
            for (j, d) in circuits[p].iter().enumerate() {
                attachments.push(Attachment {
                    segment: SegmentRef::new(p, r, j),
                    dart: Dart::new(copy(r, &d.edge), d.reversed),
                });
            }
            for j in 0..n {
                segment_map.push(SegmentImage { source: SegmentRef::new(p, r, j), path: vec![step(p, 0, j, false)] });
            }
        }
        for i in 0..piece.cones.len() {
            cone_fibers.push(ConeFiber {
                target_piece: p,
                point: TargetPoint::Cone { index: i },
                preimages: vec![(p, SourcePoint::Smooth), (p, SourcePoint::Smooth)],
            });
        }
    }
    let mut cover = Orbicomplex::new(format!("{}^", c.name), pieces, graph, attachments);
    cover.recompute_multiplicities();
    cover.rotation = face_rotation(&cover);
    let map = CoveringMap {
        source: cover.clone(),
        target: c.clone(),
        degree: 4,
        graph_map,
        piece_assignment: (0..c.pieces.len()).map(|p| PieceAssignment { target: p, local_degree: 4 }).collect(),
        segment_map,
        cone_fibers,
    };
    Ok((cover, map))
}
