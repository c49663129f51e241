use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{
    target_points, ConeFiber, CoveringMap, GraphMap, PieceAssignment, SegmentImage, SegmentStep, SourcePoint,
    TargetPoint,
};
use crate::error::{Error, Result};
use crate::orbicore::{
    face_rotation, Attachment, BoundaryCircle, Dart, Mark, MarkedGraph, Orbicomplex, Piece, Segment, SegmentRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeValue {
    pub piece: usize,
    pub cone: usize,
    pub value: u8,
}

/// A homomorphism from the orbifold fundamental group onto `Z/2`, given on
/// generators. Edges of the spanning forest, handle generators and the
/// generators of unattached boundary circles carry 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTorsionLabeling {
    /// Edges outside the spanning forest; absent edges carry 0.
    #[serde(default)]
    pub edges: BTreeMap<String, u8>,
    /// Reflection generators keyed by wall and mirror label; absent labels
    /// carry 0.
    #[serde(default)]
    pub reflections: BTreeMap<String, u8>,
    #[serde(default)]
    pub cones: Vec<ConeValue>,
}

impl TwoTorsionLabeling {
    pub fn edge(&self, e: &str) -> u8 {
        self.edges.get(e).copied().unwrap_or(0)
    }

    pub fn reflection(&self, label: &str) -> u8 {
        self.reflections.get(label).copied().unwrap_or(0)
    }

    pub fn cone(&self, piece: usize, cone: usize) -> u8 {
        self.cones.iter().find(|c| c.piece == piece && c.cone == cone).map_or(0, |c| c.value)
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.values().chain(self.reflections.values()).all(|&v| v == 0) && self.cones.iter().all(|c| c.value == 0)
    }

    fn walk_parity(&self, w: &[Dart]) -> u8 {
        w.iter().fold(0, |acc, d| acc ^ self.edge(&d.edge))
    }

    fn segment_value(&self, s: &Segment) -> u8 {
        s.label.as_deref().map_or(0, |l| self.reflection(l))
    }
}

/// One member of the enumerated family of double covers.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub labeling: TwoTorsionLabeling,
    pub complex: Orbicomplex,
    pub map: CoveringMap,
}

fn reflection_labels(c: &Orbicomplex) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for v in &c.graph.vertices {
        if let Mark::Wall(l) = &v.mark {
            out.insert(l.clone());
        }
    }
    for p in &c.pieces {
        for circle in &p.boundary {
            out.extend(circle.segments.iter().filter_map(|s| if s.is_mirror() { s.label.clone() } else { None }));
        }
    }
    out
}

/// Check well-formedness and the relator conditions of `phi` on `c`.
fn check_labeling(c: &Orbicomplex, phi: &TwoTorsionLabeling) -> Result<()> {
    let not_hom = |m: String| Err(Error::NotAHomomorphism(m));
    let values = phi.edges.values().chain(phi.reflections.values()).copied().chain(phi.cones.iter().map(|x| x.value));
    for v in values {
        if v > 1 {
            return not_hom(format!("value {v} is not in Z/2"));
        }
    }
    let tree = c.graph.spanning_forest();
    for (e, &v) in &phi.edges {
        if c.graph.edge(e).is_none() {
            return not_hom(format!("unknown edge {e}"));
        }
        if v == 1 && tree.contains(e) {
            return not_hom(format!("edge {e} lies in the spanning forest"));
        }
    }
    let labels = reflection_labels(c);
    for l in phi.reflections.keys() {
        if !labels.contains(l) {
            return not_hom(format!("unknown reflection generator {l}"));
        }
    }
    for x in &phi.cones {
        let Some(&m) = c.pieces.get(x.piece).and_then(|p| p.cones.get(x.cone)) else {
            return not_hom(format!("unknown cone {} of piece {}", x.cone, x.piece));
        };
        if x.value == 1 && m % 2 == 1 {
            return not_hom(format!("cone {} of piece {} has odd order {m}", x.cone, x.piece));
        }
    }
    // reflections meeting at a wall agree with it
    for (r, v) in c.wall_incidences() {
        let circle = &c.pieces[r.piece].boundary[r.circle];
        let seg = if circle.segments[r.segment].is_mirror() { r.segment } else { circle.next(r.segment) };
        let wall = match c.graph.mark(&v) {
            Some(Mark::Wall(l)) => phi.reflection(l),
            _ => 0,
        };
        if phi.segment_value(&circle.segments[seg]) != wall {
            return not_hom(format!("mirror of piece {} disagrees with wall {v}", r.piece));
        }
    }
    // boundary words of manifold pieces multiply to the product of cones
    for (p, piece) in c.pieces.iter().enumerate() {
        if piece.has_mirrors() {
            continue;
        }
        let mut sum = (0..piece.cones.len()).fold(0, |acc, k| acc ^ phi.cone(p, k));
        for ci in 0..piece.boundary.len() {
            if let Some(w) = c.circuit(p, ci) {
                sum ^= phi.walk_parity(&w);
            }
        }
        if sum != 0 {
            return not_hom(format!("piece {p}: boundary and cone values do not cancel"));
        }
    }
    Ok(())
}

/// Lifting of graph cells to the two sheets.
struct Sheets<'a> {
    phi: &'a TwoTorsionLabeling,
    unfolded: BTreeSet<String>,
}

impl Sheets<'_> {
    fn vertex(&self, v: &str, s: u8) -> String {
        if self.unfolded.contains(v) {
            format!("{v}~")
        } else {
            format!("{v}.{s}")
        }
    }

    /// Lift of `d` starting on sheet `s`, with the sheet it ends on.
    fn dart(&self, d: &Dart, s: u8) -> (Dart, u8) {
        let t = s ^ self.phi.edge(&d.edge);
        if d.reversed {
            (Dart::new(format!("{}.{t}", d.edge), true), t)
        } else {
            (Dart::new(format!("{}.{s}", d.edge), false), t)
        }
    }

    fn walk(&self, w: &[Dart], mut s: u8) -> (Vec<Dart>, u8) {
        let mut out = Vec::with_capacity(w.len());
        for d in w {
            let (l, t) = self.dart(d, s);
            out.push(l);
            s = t;
        }
        (out, s)
    }
}

/// The single run of attached segments of a circle as (first segment,
/// darts), or `None` when nothing is attached.
fn attached_run(c: &Orbicomplex, p: usize, ci: usize) -> Result<Option<(usize, Vec<Dart>)>> {
    let att = c.attachment_map();
    let n = c.pieces[p].boundary[ci].len();
    let is_att: Vec<bool> = (0..n).map(|s| att.contains_key(&SegmentRef::new(p, ci, s))).collect();
    if is_att.iter().all(|&a| !a) {
        return Ok(None);
    }
    if is_att.iter().all(|&a| a) {
        return Ok(Some((0, c.circuit(p, ci).expect("fully attached"))));
    }
    let starts: Vec<usize> = (0..n).filter(|&s| is_att[s] && !is_att[(s + n - 1) % n]).collect();
    if starts.len() != 1 {
        return Err(Error::UnsupportedPiece(format!("piece {p} circle {ci} is attached along several arcs")));
    }
    let start = starts[0];
    let mut darts = Vec::new();
    let mut s = start;
    while is_att[s] {
        darts.push(att[&SegmentRef::new(p, ci, s)].clone());
        s = (s + 1) % n;
    }
    Ok(Some((start, darts)))
}

struct Builder<'a> {
    target: &'a Orbicomplex,
    sheets: Sheets<'a>,
    pieces: Vec<Piece>,
    attachments: Vec<Attachment>,
    assignment: Vec<PieceAssignment>,
    segment_map: Vec<SegmentImage>,
    fibers: BTreeMap<(usize, TargetPoint), Vec<(usize, SourcePoint)>>,
}

fn step(p: usize, ci: usize, s: usize, reversed: bool) -> SegmentStep {
    SegmentStep { segment: SegmentRef::new(p, ci, s), reversed }
}

impl Builder<'_> {
    fn attach(&mut self, piece: usize, circle: usize, first: usize, darts: Vec<Dart>, len: usize) {
        for (k, d) in darts.into_iter().enumerate() {
            self.attachments.push(Attachment { segment: SegmentRef::new(piece, circle, (first + k) % len), dart: d });
        }
    }

    /// Two disjoint copies of target piece `p`, copy `s` starting every
    /// attached run on sheet `s`.
    fn two_copies(&mut self, p: usize) -> Result<()> {
        let piece = &self.target.pieces[p];
        for s in 0..2u8 {
            let idx = self.pieces.len();
            let mut copy = piece.clone();
            copy.id = format!("{}.{s}", piece.id);
            for circle in &mut copy.boundary {
                for seg in &mut circle.segments {
                    if let Some(l) = seg.label.as_mut() {
                        *l = format!("{l}.{s}");
                    }
                }
            }
            for (ci, circle) in piece.boundary.iter().enumerate() {
                if let Some((first, darts)) = attached_run(self.target, p, ci)? {
                    let (lifted, _) = self.sheets.walk(&darts, s);
                    self.attach(idx, ci, first, lifted, circle.len());
                }
                for j in 0..circle.len() {
                    self.segment_map
                        .push(SegmentImage { source: SegmentRef::new(idx, ci, j), path: vec![step(p, ci, j, false)] });
                }
            }
            for point in target_points(piece) {
                self.fibers.entry((p, point)).or_default().push((idx, point.into()));
            }
            self.assignment.push(PieceAssignment { target: p, local_degree: 1 });
            self.pieces.push(copy);
        }
        Ok(())
    }

    /// Connected double of a manifold piece whose boundary or cone values
    /// are not all trivial.
    fn connected_double(&mut self, p: usize) -> Result<()> {
        let piece = &self.target.pieces[p];
        let idx = self.pieces.len();
        let mut boundary = Vec::new();
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let n = circle.len();
            let run = attached_run(self.target, p, ci)?;
            let parity = match &run {
                Some((_, w)) if w.len() == n => self.sheets.phi.walk_parity(w),
                Some(_) => return Err(Error::UnsupportedPiece(format!("piece {p} circle {ci} is partly attached"))),
                None => 0,
            };
            let laps: Vec<u8> = if parity == 0 { vec![0, 1] } else { vec![0] };
            for s in laps {
                let new_ci = boundary.len();
                let (segments, lifted) = match &run {
                    Some((_, w)) if parity == 1 => {
                        let (mut first, end) = self.sheets.walk(w, s);
                        let (second, _) = self.sheets.walk(w, end);
                        first.extend(second);
                        let mut segs = circle.segments.clone();
                        segs.extend(circle.segments.iter().cloned());
                        (segs, Some(first))
                    }
                    Some((_, w)) => (circle.segments.clone(), Some(self.sheets.walk(w, s).0)),
                    None => (circle.segments.clone(), None),
                };
                let len = segments.len();
                if let Some(l) = lifted {
                    self.attach(idx, new_ci, 0, l, len);
                }
                for j in 0..len {
                    self.segment_map.push(SegmentImage {
                        source: SegmentRef::new(idx, new_ci, j),
                        path: vec![step(p, ci, j % n, false)],
                    });
                }
                boundary.push(BoundaryCircle::new(segments));
            }
        }
        let mut cones = Vec::new();
        for (k, &m) in piece.cones.iter().enumerate() {
            let point = TargetPoint::Cone { index: k };
            let fiber = self.fibers.entry((p, point)).or_default();
            if self.sheets.phi.cone(p, k) == 0 {
                for _ in 0..2 {
                    fiber.push((idx, SourcePoint::Cone { index: cones.len() }));
                    cones.push(m);
                }
            } else if m == 2 {
                fiber.push((idx, SourcePoint::Smooth));
            } else {
                fiber.push((idx, SourcePoint::Cone { index: cones.len() }));
                cones.push(m / 2);
            }
        }
        let mut lifted = Piece { id: format!("{}~", piece.id), genus: 0, boundary, cones };
        let twice_genus = lifted.euler_characteristic() - Rational64::from_integer(2) * piece.euler_characteristic();
        if !twice_genus.is_integer() || twice_genus.to_integer() < 0 || twice_genus.to_integer() % 2 != 0 {
            return Err(Error::UnsupportedPiece(format!("piece {p} has no orientable double of the required type")));
        }
        lifted.genus = (twice_genus.to_integer() / 2) as u32;
        self.assignment.push(PieceAssignment { target: p, local_degree: 2 });
        self.pieces.push(lifted);
        Ok(())
    }

    /// Reflection double of a polygon whose mirrors all carry 1: the polygon
    /// and its mirror image glued along the mirrors into a disk, one cone per
    /// corner, bounded by the free arc followed by its reverse.
    fn unfold_polygon(&mut self, p: usize, first: usize, arc: &[Dart]) {
        let piece = &self.target.pieces[p];
        let circle = &piece.boundary[0];
        let n = circle.len();
        let a = arc.len();
        let idx = self.pieces.len();
        let (mut darts, end) = self.sheets.walk(arc, 0);
        let back: Vec<Dart> = crate::orbicore::reverse_walk(arc);
        darts.extend(self.sheets.walk(&back, end ^ 1).0);
        self.attach(idx, 0, 0, darts, 2 * a);
        for k in 0..a {
            let seg = (first + k) % n;
            self.segment_map
                .push(SegmentImage { source: SegmentRef::new(idx, 0, k), path: vec![step(p, 0, seg, false)] });
        }
        for k in 0..a {
            let seg = (first + a - 1 - k) % n;
            self.segment_map
                .push(SegmentImage { source: SegmentRef::new(idx, 0, a + k), path: vec![step(p, 0, seg, true)] });
        }
        let corners: Vec<TargetPoint> = target_points(piece);
        for (i, point) in corners.iter().enumerate() {
            self.fibers.entry((p, *point)).or_default().push((idx, SourcePoint::Cone { index: i }));
        }
        self.assignment.push(PieceAssignment { target: p, local_degree: 2 });
        self.pieces.push(Piece {
            id: format!("{}~", piece.id),
            genus: 0,
            boundary: vec![BoundaryCircle::free(2 * a)],
            cones: vec![2; corners.len()],
        });
    }

    fn polygon(&mut self, p: usize) -> Result<()> {
        let piece = &self.target.pieces[p];
        let unsupported = |m: &str| Err(Error::UnsupportedPiece(format!("piece {p}: {m}")));
        if !piece.cones.is_empty() {
            return unsupported("polygon with cone points");
        }
        let circle = &piece.boundary[0];
        let values: BTreeSet<u8> =
            circle.segments.iter().filter(|s| s.is_mirror()).map(|s| self.sheets.phi.segment_value(s)).collect();
        if values.len() != 1 {
            return unsupported("mirrors carry both values");
        }
        let Some((first, arc)) = attached_run(self.target, p, 0)? else {
            return unsupported("polygon with no attached arc");
        };
        if arc.len() != circle.free_count() {
            return unsupported("free boundary is not a single attached arc");
        }
        if values.contains(&0) {
            self.two_copies(p)
        } else {
            self.unfold_polygon(p, first, &arc);
            Ok(())
        }
    }
}

/// The connected double cover of `c` determined by `phi`, together with
/// its covering map. Wall vertices whose reflection carries 1 unfold into
/// ordinary vertices and are smoothed away where they become valence 2.
pub fn double_cover(c: &Orbicomplex, phi: &TwoTorsionLabeling) -> Result<(Orbicomplex, CoveringMap)> {
    c.require_valid()?;
    check_labeling(c, phi)?;
    let labels = reflection_labels(c);
    let nontrivial = phi.edges.values().any(|&v| v == 1)
        || phi.reflections.iter().any(|(l, &v)| v == 1 && labels.contains(l))
        || phi.cones.iter().any(|x| x.value == 1);
    if !nontrivial {
        return Err(Error::NotSurjective);
    }

    let unfolded: BTreeSet<String> = c
        .graph
        .vertices
        .iter()
        .filter(|v| matches!(&v.mark, Mark::Wall(l) if phi.reflection(l) == 1))
        .map(|v| v.id.clone())
        .collect();
    let sheets = Sheets { phi, unfolded };

    let mut graph = MarkedGraph::new();
    let mut graph_map = GraphMap::default();
    for v in &c.graph.vertices {
        if sheets.unfolded.contains(&v.id) {
            graph.add_vertex(sheets.vertex(&v.id, 0), Mark::None);
            graph_map.vertices.insert(sheets.vertex(&v.id, 0), v.id.clone());
            continue;
        }
        for s in 0..2u8 {
            let mark = match &v.mark {
                Mark::Wall(l) => Mark::Wall(format!("{l}.{s}")),
                m => m.clone(),
            };
            graph.add_vertex(sheets.vertex(&v.id, s), mark);
            graph_map.vertices.insert(sheets.vertex(&v.id, s), v.id.clone());
        }
    }
    for e in &c.graph.edges {
        for s in 0..2u8 {
            let id = format!("{}.{s}", e.id);
            graph.add_edge(id.clone(), sheets.vertex(&e.tail, s), sheets.vertex(&e.head, s ^ phi.edge(&e.id)), 0);
            graph_map.edges.insert(id, vec![Dart::new(e.id.clone(), false)]);
        }
    }

    let mut b = Builder {
        target: c,
        sheets,
        pieces: Vec::new(),
        attachments: Vec::new(),
        assignment: Vec::new(),
        segment_map: Vec::new(),
        fibers: BTreeMap::new(),
    };
    for (p, piece) in c.pieces.iter().enumerate() {
        if piece.has_mirrors() {
            b.polygon(p)?;
            continue;
        }
        let all_trivial = (0..piece.cones.len()).all(|k| phi.cone(p, k) == 0)
            && (0..piece.boundary.len()).all(|ci| c.circuit(p, ci).map_or(0, |w| phi.walk_parity(&w)) == 0);
        if all_trivial {
            b.two_copies(p)?;
        } else {
            b.connected_double(p)?;
        }
    }

    let mut cone_fibers = Vec::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        for point in target_points(piece) {
            let preimages = b.fibers.remove(&(p, point)).unwrap_or_default();
            cone_fibers.push(ConeFiber { target_piece: p, point, preimages });
        }
    }
    let mut source = Orbicomplex::new(format!("{}~", c.name), b.pieces, graph, b.attachments);
    source.attachments.sort_by_key(|a| a.segment);
    source.recompute_multiplicities();
    let mut map = CoveringMap {
        source,
        target: c.clone(),
        degree: 2,
        graph_map,
        piece_assignment: b.assignment,
        segment_map: b.segment_map,
        cone_fibers,
    };
    for v in &b.sheets.unfolded {
        if let Some(sm) = map.source.smooth_vertex(&format!("{v}~")) {
            map = map.absorb_source_smoothing(&sm);
        }
    }
    map.source.rotation = face_rotation(&map.source);
    Ok((map.source.clone(), map))
}

/// Labelings in the canonical family: every nonzero assignment on the edges
/// outside the spanning forest, completed on cones piece by piece (all 0 if
/// the boundary parity vanishes, otherwise 1 on the first cone). Pieces
/// without cones and odd parity admit no completion and drop the labeling.
pub fn canonical_labelings(c: &Orbicomplex) -> Result<Vec<TwoTorsionLabeling>> {
    if c.pieces.iter().any(Piece::has_mirrors) {
        return Err(Error::MirrorsPresent);
    }
    let tree = c.graph.spanning_forest();
    let free: Vec<&str> = c.graph.edges.iter().map(|e| e.id.as_str()).filter(|e| !tree.contains(*e)).collect();
    let mut out = Vec::new();
    'mask: for mask in 1u64..(1u64 << free.len()) {
        let mut phi = TwoTorsionLabeling::default();
        // lexicographic order on the value vector: first edge is the high bit
        for (i, e) in free.iter().enumerate() {
            phi.edges.insert(e.to_string(), ((mask >> (free.len() - 1 - i)) & 1) as u8);
        }
        for (p, piece) in c.pieces.iter().enumerate() {
            let parity =
                (0..piece.boundary.len()).fold(0, |acc, ci| acc ^ c.circuit(p, ci).map_or(0, |w| phi.walk_parity(&w)));
            if parity == 1 {
                if piece.cones.is_empty() {
                    continue 'mask;
                }
                phi.cones.push(ConeValue { piece: p, cone: 0, value: 1 });
            }
        }
        out.push(phi);
    }
    Ok(out)
}

/// Every connected double cover in the canonical family, sorted by the
/// labeling's edge values.
pub fn enumerate_double_covers(c: &Orbicomplex) -> Result<Vec<DoubleCover>> {
    let mut out = Vec::new();
    for labeling in canonical_labelings(c)? {
        let (complex, map) = match double_cover(c, &labeling) {
            Ok(x) => x,
            Err(Error::NotAHomomorphism(_)) => continue,
            Err(e) => return Err(e),
        };
        if complex.connected_components().len() == c.connected_components().len() {
            out.push(DoubleCover { labeling, complex, map });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::verify_covering;
    use crate::coxeter::{davis_orbicomplex, paper_graph};
    use crate::orbicore::euler_characteristic;

    fn loop_disk(cones: usize) -> Orbicomplex {
        let mut g = MarkedGraph::new();
        g.add_vertex("v", Mark::None).add_edge("l", "v", "v", 1);
        let piece = Piece::disk("D", cones, 1);
        Orbicomplex::new(
            "loop",
            vec![piece],
            g,
            vec![Attachment { segment: SegmentRef::new(0, 0, 0), dart: Dart::new("l", false) }],
        )
    }

    #[test]
    fn single_loop_has_one_labeling() {
        let c = loop_disk(1);
        let covers = enumerate_double_covers(&c).unwrap();
        assert_eq!(covers.len(), 1);
        let f = &covers[0].map;
        assert!(verify_covering(f).unwrap().passed());
        assert_eq!(f.source.pieces.len(), 1);
        assert!(f.source.pieces[0].cones.is_empty());
        assert_eq!(f.source.pieces[0].boundary[0].len(), 2);
    }

    #[test]
    fn trivial_labeling_is_rejected() {
        let c = loop_disk(2);
        assert_eq!(double_cover(&c, &TwoTorsionLabeling::default()).unwrap_err(), Error::NotSurjective);
    }

    #[test]
    fn odd_labeling_is_rejected() {
        let c = loop_disk(2);
        let mut phi = TwoTorsionLabeling::default();
        phi.edges.insert("l".into(), 1);
        assert!(matches!(double_cover(&c, &phi), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn all_reflections_on_davis() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let phi = TwoTorsionLabeling {
            reflections: reflection_labels(&d).into_iter().map(|l| (l, 1)).collect(),
            ..Default::default()
        };
        let (x, f) = double_cover(&d, &phi).unwrap();
        let r = verify_covering(&f).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(euler_characteristic(&x).unwrap(), Rational64::from_integer(-9));
        assert_eq!(x.graph.vertices.len(), 2);
        assert_eq!(x.graph.edges.len(), 3);
    }

    #[test]
    fn mixed_mirrors_are_unsupported() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let mut phi = TwoTorsionLabeling::default();
        let interior = d.pieces[0].boundary[0].segments[1].label.clone().unwrap();
        phi.reflections.insert(interior, 1);
        assert!(matches!(double_cover(&d, &phi), Err(Error::UnsupportedPiece(_))));
    }

    #[test]
    fn all_reflections_match_x1() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let phi = TwoTorsionLabeling {
            reflections: reflection_labels(&d).into_iter().map(|l| (l, 1)).collect(),
            ..Default::default()
        };
        let (x, _) = double_cover(&d, &phi).unwrap();
        let (x1, _) = crate::covers::build_x1();
        assert!(crate::orbicore::complex_isomorphism(&x, &x1));
    }

    #[test]
    fn x1_and_x2_families() {
        let (x1, _) = crate::covers::build_x1();
        let covers = enumerate_double_covers(&x1).unwrap();
        assert_eq!(covers.len(), 3);
        let eight: Vec<_> = covers
            .iter()
            .filter(|c| c.complex.pieces.len() == 8 && c.complex.pieces.iter().all(|p| p.cones.len() == 6))
            .collect();
        assert_eq!(eight.len(), 1);
        let x2 = &eight[0].complex;
        assert!(verify_covering(&eight[0].map).unwrap().passed());
        assert_eq!(euler_characteristic(x2).unwrap(), Rational64::from_integer(-18));
        let next = enumerate_double_covers(x2).unwrap();
        assert_eq!(next.len(), 7);
        for c in &next {
            assert!(verify_covering(&c.map).unwrap().passed());
        }
    }
}
