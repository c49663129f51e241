use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::graph::{Dart, Mark, MarkedGraph};
use super::piece::{Junction, Piece, SegmentKind};
use super::ribbon::Rotation;
use crate::error::{Error, Result};

/// Address of a boundary segment: piece index, circle index, segment index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegmentRef {
    pub piece: usize,
    pub circle: usize,
    pub segment: usize,
}

impl SegmentRef {
    pub fn new(piece: usize, circle: usize, segment: usize) -> Self {
        SegmentRef { piece, circle, segment }
    }
}

impl fmt::Display for SegmentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {} circle {} segment {}", self.piece, self.circle, self.segment)
    }
}

/// A free segment glued along a directed edge of the attaching graph. The
/// segment, traversed in its circle's direction, runs along `dart`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attachment {
    #[serde(flatten)]
    pub segment: SegmentRef,
    #[serde(flatten)]
    pub dart: Dart,
}

/// Pieces glued to an attaching graph along free boundary segments.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Orbicomplex {
    #[serde(default)]
    pub name: String,
    pub pieces: Vec<Piece>,
    pub graph: MarkedGraph,
    #[serde(default)]
    pub attachments: Vec<Attachment>,
    /// Cyclic edge order at each graph vertex, when the complex carries a
    /// planar thickening of its attaching graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Rotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "violation")]
pub enum Violation {
    DuplicateVertex { vertex: String },
    DuplicateEdge { edge: String },
    DanglingEdgeEndpoint { edge: String, vertex: String },
    EmptyCircle { piece: usize, circle: usize },
    BadCone { piece: usize, order: u32 },
    MirrorShape { piece: usize },
    BadSegmentRef { segment: SegmentRef },
    DanglingAttachment { segment: SegmentRef, edge: String },
    MirrorAttached { segment: SegmentRef },
    DuplicateAttachment { segment: SegmentRef },
    EndpointMismatch { piece: usize, circle: usize, junction: usize },
    WallMismatch { piece: usize, circle: usize, junction: usize, vertex: String },
    MultiplicityMismatch { edge: String, declared: u32, attached: u32 },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::DuplicateVertex { .. } => "DuplicateVertex",
            Violation::DuplicateEdge { .. } => "DuplicateEdge",
            Violation::DanglingEdgeEndpoint { .. } => "DanglingEdgeEndpoint",
            Violation::EmptyCircle { .. } => "EmptyCircle",
            Violation::BadCone { .. } => "BadCone",
            Violation::MirrorShape { .. } => "MirrorShape",
            Violation::BadSegmentRef { .. } => "BadSegmentRef",
            Violation::DanglingAttachment { .. } => "DanglingAttachment",
            Violation::MirrorAttached { .. } => "MirrorAttached",
            Violation::DuplicateAttachment { .. } => "DuplicateAttachment",
            Violation::EndpointMismatch { .. } => "EndpointMismatch",
            Violation::WallMismatch { .. } => "WallMismatch",
            Violation::MultiplicityMismatch { .. } => "MultiplicityMismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).unwrap_or_else(|_| self.name().to_string()))
    }
}

/// Result of suppressing a valence-2 vertex of the attaching graph.
#[derive(Debug, Clone)]
pub struct Smoothing {
    pub complex: Orbicomplex,
    /// Each edge of the new graph as a walk in the old graph.
    pub edge_origin: BTreeMap<String, Vec<Dart>>,
    /// Each segment of the new complex as a run of old segments, in order.
    pub segment_origin: BTreeMap<SegmentRef, Vec<SegmentRef>>,
}

impl Orbicomplex {
    pub fn new(name: impl Into<String>, pieces: Vec<Piece>, graph: MarkedGraph, attachments: Vec<Attachment>) -> Self {
        Orbicomplex { name: name.into(), pieces, graph, attachments, rotation: None }
    }

    /// A single piece with nothing attached.
    pub fn from_piece(piece: Piece) -> Self {
        Orbicomplex::new(piece.id.clone(), vec![piece], MarkedGraph::new(), vec![])
    }

    pub fn attachment_map(&self) -> BTreeMap<SegmentRef, &Dart> {
        self.attachments.iter().map(|a| (a.segment, &a.dart)).collect()
    }

    pub fn segment_kind(&self, r: SegmentRef) -> Option<SegmentKind> {
        self.pieces.get(r.piece)?.boundary.get(r.circle)?.segments.get(r.segment).map(|s| s.kind)
    }

    pub fn segment_refs(&self) -> impl Iterator<Item = SegmentRef> + '_ {
        self.pieces.iter().enumerate().flat_map(|(p, piece)| {
            piece
                .boundary
                .iter()
                .enumerate()
                .flat_map(move |(c, circle)| (0..circle.len()).map(move |s| SegmentRef::new(p, c, s)))
        })
    }

    /// Number of attached segments per edge id.
    pub fn attached_counts(&self) -> BTreeMap<&str, u32> {
        let mut counts: BTreeMap<&str, u32> = self.graph.edges.iter().map(|e| (e.id.as_str(), 0)).collect();
        for a in &self.attachments {
            if let Some(c) = counts.get_mut(a.dart.edge.as_str()) {
                *c += 1;
            }
        }
        counts
    }

    /// Set every edge multiplicity to its attachment count.
    pub fn recompute_multiplicities(&mut self) {
        let counts: BTreeMap<String, u32> =
            self.attached_counts().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for e in &mut self.graph.edges {
            e.multiplicity = counts.get(&e.id).copied().unwrap_or(0);
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_complex(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
        }
    }

    /// Graph vertex at junction `j` of a circle, read off whichever adjacent
    /// segment is attached.
    pub fn junction_vertex(&self, piece: usize, circle: usize, j: usize) -> Option<String> {
        let att = self.attachment_map();
        let c = &self.pieces[piece].boundary[circle];
        if let Some(d) = att.get(&SegmentRef::new(piece, circle, j)) {
            return self.graph.dart_ends(d).map(|(_, end)| end.to_string());
        }
        if let Some(d) = att.get(&SegmentRef::new(piece, circle, c.next(j))) {
            return self.graph.dart_ends(d).map(|(start, _)| start.to_string());
        }
        None
    }

    /// Reflection junctions of polygons together with the wall vertex they
    /// sit on.
    pub fn wall_incidences(&self) -> Vec<(SegmentRef, String)> {
        let mut out = Vec::new();
        for (p, piece) in self.pieces.iter().enumerate() {
            for (c, circle) in piece.boundary.iter().enumerate() {
                for j in 0..circle.len() {
                    if circle.junction(j) == Junction::Reflection {
                        if let Some(v) = self.junction_vertex(p, c, j) {
                            out.push((SegmentRef::new(p, c, j), v));
                        }
                    }
                }
            }
        }
        out
    }

    /// The attaching walk of a boundary circle, if every segment is attached.
    pub fn circuit(&self, piece: usize, circle: usize) -> Option<Vec<Dart>> {
        let att = self.attachment_map();
        let c = &self.pieces[piece].boundary[circle];
        (0..c.len()).map(|s| att.get(&SegmentRef::new(piece, circle, s)).map(|d| (*d).clone())).collect()
    }

    pub fn is_circle_attached(&self, piece: usize, circle: usize) -> bool {
        self.circuit(piece, circle).is_some()
    }

    pub fn is_circle_unattached(&self, piece: usize, circle: usize) -> bool {
        let att = self.attachment_map();
        (0..self.pieces[piece].boundary[circle].len()).all(|s| !att.contains_key(&SegmentRef::new(piece, circle, s)))
    }

    /// Connected components of the underlying space, each reported as
    /// (graph vertex ids, piece indices).
    pub fn connected_components(&self) -> Vec<(BTreeSet<String>, BTreeSet<usize>)> {
        let nv = self.graph.vertices.len();
        let vidx = self.graph.vertex_index();
        let mut parent: Vec<usize> = (0..nv + self.pieces.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for e in &self.graph.edges {
            if let (Some(&a), Some(&b)) = (vidx.get(e.tail.as_str()), vidx.get(e.head.as_str())) {
                union(&mut parent, a, b);
            }
        }
        for a in &self.attachments {
            if let Some(e) = self.graph.edge(&a.dart.edge) {
                if let Some(&v) = vidx.get(e.tail.as_str()) {
                    union(&mut parent, nv + a.segment.piece, v);
                }
            }
        }
        let mut groups: BTreeMap<usize, (BTreeSet<String>, BTreeSet<usize>)> = BTreeMap::new();
        for (i, v) in self.graph.vertices.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().0.insert(v.id.clone());
        }
        for p in 0..self.pieces.len() {
            let r = find(&mut parent, nv + p);
            groups.entry(r).or_default().1.insert(p);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Multiset of piece types, sorted.
    pub fn census(&self) -> Vec<super::piece::PieceType> {
        let mut t: Vec<_> = self.pieces.iter().map(Piece::piece_type).collect();
        t.sort();
        t
    }

    /// Suppress the valence-2 unmarked vertex `v`, merging its two edges and
    /// every pair of attached segments that meet there. Returns `None` when
    /// `v` is not smoothable: marked, not of valence 2 through two distinct
    /// non-loop edges of equal multiplicity, or some segment on those edges
    /// does not continue through `v` onto the other edge.
    pub fn smooth_vertex(&self, v: &str) -> Option<Smoothing> {
        let vertex = self.graph.vertex(v)?;
        if vertex.mark.is_marked() {
            return None;
        }
        let incident: Vec<usize> =
            self.graph.edges.iter().enumerate().filter(|(_, e)| e.tail == v || e.head == v).map(|(i, _)| i).collect();
        if incident.len() != 2 {
            return None;
        }
        let (ei, fi) = (incident[0], incident[1]);
        let (e, f) = (&self.graph.edges[ei], &self.graph.edges[fi]);
        if e.tail == e.head || f.tail == f.head || e.multiplicity != f.multiplicity {
            return None;
        }
        // new edge: along e into v, then along f out of v
        let into_v = Dart::new(e.id.clone(), e.tail == v);
        let out_of_v = Dart::new(f.id.clone(), f.head == v);
        let new_tail = if e.tail == v { e.head.clone() } else { e.tail.clone() };
        let new_head = if f.tail == v { f.head.clone() } else { f.tail.clone() };
        let new_id = format!("{}|{}", e.id, f.id);

        let att = self.attachment_map();
        let mut new_pieces = self.pieces.clone();
        let mut new_attachments: Vec<Attachment> = Vec::new();
        let mut segment_origin = BTreeMap::new();
        let mut consumed = 0usize;
        for (p, piece) in self.pieces.iter().enumerate() {
            for (c, circle) in piece.boundary.iter().enumerate() {
                let n = circle.len();
                let dart_at = |s: usize| att.get(&SegmentRef::new(p, c, s)).map(|d| (*d).clone());
                // segments s whose end junction is a merge point
                let mut merge_after = vec![false; n];
                for s in 0..n {
                    let (Some(a), Some(b)) = (dart_at(s), dart_at((s + 1) % n)) else { continue };
                    let forward = a == into_v && b == out_of_v;
                    let backward = a == out_of_v.inverse() && b == into_v.inverse();
                    if forward || backward {
                        if n == 1 {
                            return None;
                        }
                        merge_after[s] = true;
                    }
                }
                let touched = (0..n).filter(|&s| dart_at(s).is_some_and(|d| d.edge == e.id || d.edge == f.id)).count();
                let merges = merge_after.iter().filter(|&&m| m).count();
                if touched != 2 * merges {
                    return None;
                }
                consumed += touched;
                if merges == 0 {
                    for s in 0..n {
                        segment_origin.insert(SegmentRef::new(p, c, s), vec![SegmentRef::new(p, c, s)]);
                        if let Some(d) = dart_at(s) {
                            new_attachments.push(Attachment { segment: SegmentRef::new(p, c, s), dart: d });
                        }
                    }
                    continue;
                }
                // start at a segment that does not continue a merge
                let start = (0..n).find(|&s| !merge_after[(s + n - 1) % n]).unwrap_or(0);
                let mut runs: Vec<Vec<usize>> = Vec::new();
                let mut s = start;
                let mut visited = 0;
                while visited < n {
                    let mut run = vec![s];
                    visited += 1;
                    while merge_after[s] && visited < n {
                        s = (s + 1) % n;
                        run.push(s);
                        visited += 1;
                    }
                    runs.push(run);
                    s = (s + 1) % n;
                }
                let segments = runs.iter().map(|r| circle.segments[r[0]].clone()).collect();
                new_pieces[p].boundary[c] = super::piece::BoundaryCircle::new(segments);
                for (k, run) in runs.iter().enumerate() {
                    let r = SegmentRef::new(p, c, k);
                    segment_origin.insert(r, run.iter().map(|&s| SegmentRef::new(p, c, s)).collect());
                    let dart = if run.len() == 2 {
                        let first = dart_at(run[0]).expect("merged segment is attached");
                        Some(Dart::new(new_id.clone(), first != into_v))
                    } else {
                        dart_at(run[0])
                    };
                    if let Some(d) = dart {
                        new_attachments.push(Attachment { segment: r, dart: d });
                    }
                }
            }
        }
        if consumed as u32 != e.multiplicity + f.multiplicity {
            return None;
        }
        let mut graph = MarkedGraph::new();
        graph.vertices = self.graph.vertices.iter().filter(|x| x.id != v).cloned().collect();
        let mut edge_origin = BTreeMap::new();
        for (i, edge) in self.graph.edges.iter().enumerate() {
            if i == ei {
                graph.add_edge(new_id.clone(), new_tail.clone(), new_head.clone(), e.multiplicity);
                edge_origin.insert(new_id.clone(), vec![into_v.clone(), out_of_v.clone()]);
            } else if i != fi {
                graph.edges.push(edge.clone());
                edge_origin.insert(edge.id.clone(), vec![Dart::new(edge.id.clone(), false)]);
            }
        }
        let mut complex = Orbicomplex::new(self.name.clone(), new_pieces, graph, new_attachments);
        complex.attachments.sort_by_key(|a| a.segment);
        Some(Smoothing { complex, edge_origin, segment_origin })
    }
}

pub fn validate_complex(c: &Orbicomplex) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for v in &c.graph.vertices {
        if !seen.insert(v.id.as_str()) {
            out.push(Violation::DuplicateVertex { vertex: v.id.clone() });
        }
    }
    let mut seen_e = BTreeSet::new();
    for e in &c.graph.edges {
        if !seen_e.insert(e.id.as_str()) {
            out.push(Violation::DuplicateEdge { edge: e.id.clone() });
        }
        for end in [&e.tail, &e.head] {
            if !seen.contains(end.as_str()) {
                out.push(Violation::DanglingEdgeEndpoint { edge: e.id.clone(), vertex: end.clone() });
            }
        }
    }
    for (p, piece) in c.pieces.iter().enumerate() {
        for (ci, circle) in piece.boundary.iter().enumerate() {
            if circle.is_empty() {
                out.push(Violation::EmptyCircle { piece: p, circle: ci });
            }
        }
        for &m in &piece.cones {
            if m < 2 {
                out.push(Violation::BadCone { piece: p, order: m });
            }
        }
        if piece.has_mirrors() && (piece.genus != 0 || piece.boundary.len() != 1) {
            out.push(Violation::MirrorShape { piece: p });
        }
    }

    let mut attached: BTreeMap<SegmentRef, &Dart> = BTreeMap::new();
    for a in &c.attachments {
        let r = a.segment;
        match c.segment_kind(r) {
            None => {
                out.push(Violation::BadSegmentRef { segment: r });
                continue;
            }
            Some(SegmentKind::Mirror) => out.push(Violation::MirrorAttached { segment: r }),
            Some(SegmentKind::Free) => {}
        }
        if c.graph.edge(&a.dart.edge).is_none() {
            out.push(Violation::DanglingAttachment { segment: r, edge: a.dart.edge.clone() });
            continue;
        }
        if attached.insert(r, &a.dart).is_some() {
            out.push(Violation::DuplicateAttachment { segment: r });
        }
    }

    for (p, piece) in c.pieces.iter().enumerate() {
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let n = circle.len();
            for j in 0..n {
                let here = attached.get(&SegmentRef::new(p, ci, j)).and_then(|d| c.graph.dart_ends(d));
                let there = attached.get(&SegmentRef::new(p, ci, (j + 1) % n)).and_then(|d| c.graph.dart_ends(d));
                let vertex = match (here, there) {
                    (Some((_, end)), Some((start, _))) => {
                        if end != start {
                            out.push(Violation::EndpointMismatch { piece: p, circle: ci, junction: j });
                            continue;
                        }
                        end
                    }
                    (Some((_, end)), None) => end,
                    (None, Some((start, _))) => start,
                    (None, None) => continue,
                };
                let marked = c.graph.mark(vertex).is_some_and(Mark::is_marked);
                let ok = match circle.junction(j) {
                    Junction::Reflection => marked,
                    Junction::Plain => !marked,
                    Junction::Corner => true,
                };
                if !ok {
                    out.push(Violation::WallMismatch { piece: p, circle: ci, junction: j, vertex: vertex.to_string() });
                }
            }
        }
    }

    let counts = c.attached_counts();
    for e in &c.graph.edges {
        let n = counts.get(e.id.as_str()).copied().unwrap_or(0);
        if n != e.multiplicity {
            out.push(Violation::MultiplicityMismatch { edge: e.id.clone(), declared: e.multiplicity, attached: n });
        }
    }
    out
}

/// Orbifold Euler characteristic by inclusion-exclusion: the attaching
/// graph (marked vertices weighted 1/2) plus each piece, minus the part of
/// each piece's boundary that is identified with the graph.
pub fn euler_characteristic(c: &Orbicomplex) -> Result<Rational64> {
    c.require_valid()?;
    let att = c.attachment_map();
    let mut chi = c.graph.orbifold_euler_characteristic();
    for (p, piece) in c.pieces.iter().enumerate() {
        chi += piece.euler_characteristic();
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let n = circle.len();
            let is_att = |s: usize| att.contains_key(&SegmentRef::new(p, ci, s));
            for s in 0..n {
                if is_att(s) {
                    chi += Rational64::from_integer(1);
                }
                if is_att(s) || is_att((s + 1) % n) {
                    chi -= Rational64::new(1, circle.junction(s).stabilizer());
                }
            }
        }
    }
    Ok(chi)
}

/// The attaching graph with multiplicities, walls reported as order-2
/// ramification points.
pub fn singular_subspace(c: &Orbicomplex) -> Result<MarkedGraph> {
    c.require_valid()?;
    let mut g = c.graph.clone();
    for v in &mut g.vertices {
        if v.mark.is_marked() {
            v.mark = Mark::Ramification;
        }
    }
    Ok(g)
}
