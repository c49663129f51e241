//! Finite orbifold covering maps between orbicomplexes: data model,
//! composition, verification and the explicit constructions.

mod build;
mod lift;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbicore::{Dart, Orbicomplex, SegmentRef};

pub use build::{
    build_x1, reflection_double, rotation_double, surface_over_disk_tower, torsion_free_cover, SurfaceTower,
};
pub use lift::{
    canonical_labelings, double_cover, enumerate_double_covers, ConeValue, DoubleCover, TwoTorsionLabeling,
};
pub use verify::{check_graph_covering, verify_covering, Condition, ConditionReport, Status, VerifyReport};

/// A point of a target piece with non-trivial local group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TargetPoint {
    Cone { index: usize },
    Corner { circle: usize, junction: usize },
}

/// A preimage of a [`TargetPoint`] inside a source piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourcePoint {
    Cone { index: usize },
    Corner { circle: usize, junction: usize },
    Smooth,
}

impl From<TargetPoint> for SourcePoint {
    fn from(t: TargetPoint) -> Self {
        match t {
            TargetPoint::Cone { index } => SourcePoint::Cone { index },
            TargetPoint::Corner { circle, junction } => SourcePoint::Corner { circle, junction },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFiber {
    pub target_piece: usize,
    pub point: TargetPoint,
    /// `(source piece, point)`; a smooth preimage is listed once per sheet.
    pub preimages: Vec<(usize, SourcePoint)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceAssignment {
    pub target: usize,
    pub local_degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegmentStep {
    pub segment: SegmentRef,
    #[serde(default)]
    pub reversed: bool,
}

/// Image of one source segment: a walk along target boundary segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentImage {
    pub source: SegmentRef,
    pub path: Vec<SegmentStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphMap {
    pub vertices: BTreeMap<String, String>,
    /// Each source edge, traversed forward, as a walk of target darts.
    pub edges: BTreeMap<String, Vec<Dart>>,
}

impl GraphMap {
    /// Image walk of a dart.
    pub fn image(&self, d: &Dart) -> Option<Vec<Dart>> {
        let w = self.edges.get(&d.edge)?;
        Some(if d.reversed { crate::orbicore::reverse_walk(w) } else { w.clone() })
    }
}

/// A combinatorial orbifold covering map. Source and target are carried by
/// value so that a serialized map is self-contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringMap {
    pub source: Orbicomplex,
    pub target: Orbicomplex,
    pub degree: u32,
    pub graph_map: GraphMap,
    pub piece_assignment: Vec<PieceAssignment>,
    pub segment_map: Vec<SegmentImage>,
    pub cone_fibers: Vec<ConeFiber>,
}

fn reverse_steps(steps: &[SegmentStep]) -> Vec<SegmentStep> {
    steps.iter().rev().map(|s| SegmentStep { segment: s.segment, reversed: !s.reversed }).collect()
}

impl CoveringMap {
    pub fn segment_image(&self, r: SegmentRef) -> Option<&[SegmentStep]> {
        self.segment_map.iter().find(|s| s.source == r).map(|s| s.path.as_slice())
    }

    pub fn identity(c: &Orbicomplex) -> CoveringMap {
        let graph_map = GraphMap {
            vertices: c.graph.vertices.iter().map(|v| (v.id.clone(), v.id.clone())).collect(),
            edges: c.graph.edges.iter().map(|e| (e.id.clone(), vec![Dart::new(e.id.clone(), false)])).collect(),
        };
        let segment_map = c
            .segment_refs()
            .map(|r| SegmentImage { source: r, path: vec![SegmentStep { segment: r, reversed: false }] })
            .collect();
        let mut cone_fibers = Vec::new();
        for (p, piece) in c.pieces.iter().enumerate() {
            for point in target_points(piece) {
                cone_fibers.push(ConeFiber { target_piece: p, point, preimages: vec![(p, point.into())] });
            }
        }
        CoveringMap {
            source: c.clone(),
            target: c.clone(),
            degree: 1,
            graph_map,
            piece_assignment: (0..c.pieces.len()).map(|p| PieceAssignment { target: p, local_degree: 1 }).collect(),
            segment_map,
            cone_fibers,
        }
    }

    /// `self: X → Y` followed by `next: Y → Z`.
    pub fn compose(&self, next: &CoveringMap) -> Result<CoveringMap> {
        if self.target != next.source {
            return Err(Error::MismatchedComplexes(
                "composition: target of the first map is not the source of the second".into(),
            ));
        }
        let missing = |what: &str| Error::MismatchedComplexes(format!("composition: missing {what}"));
        let mut vertices = BTreeMap::new();
        for (v, w) in &self.graph_map.vertices {
            vertices.insert(v.clone(), next.graph_map.vertices.get(w).ok_or_else(|| missing("vertex image"))?.clone());
        }
        let mut edges = BTreeMap::new();
        for (e, walk) in &self.graph_map.edges {
            let mut out = Vec::new();
            for d in walk {
                out.extend(next.graph_map.image(d).ok_or_else(|| missing("edge image"))?);
            }
            edges.insert(e.clone(), out);
        }
        let mut piece_assignment = Vec::new();
        for a in &self.piece_assignment {
            let b = next.piece_assignment.get(a.target).ok_or_else(|| missing("piece assignment"))?;
            piece_assignment.push(PieceAssignment { target: b.target, local_degree: a.local_degree * b.local_degree });
        }
        let mut segment_map = Vec::new();
        for img in &self.segment_map {
            let mut path = Vec::new();
            for step in &img.path {
                let inner = next.segment_image(step.segment).ok_or_else(|| missing("segment image"))?;
                path.extend(if step.reversed { reverse_steps(inner) } else { inner.to_vec() });
            }
            segment_map.push(SegmentImage { source: img.source, path });
        }
        let mut cone_fibers = Vec::new();
        for fib in &next.cone_fibers {
            let mut preimages = Vec::new();
            for &(ypiece, ypoint) in &fib.preimages {
                match ypoint {
                    SourcePoint::Smooth => {
                        for (xpiece, a) in self.piece_assignment.iter().enumerate() {
                            if a.target == ypiece {
                                preimages.extend(std::iter::repeat_n(
                                    (xpiece, SourcePoint::Smooth),
                                    a.local_degree as usize,
                                ));
                            }
                        }
                    }
                    SourcePoint::Cone { index } => {
                        let inner =
                            self.fiber(ypiece, TargetPoint::Cone { index }).ok_or_else(|| missing("cone fiber"))?;
                        preimages.extend(inner.preimages.iter().copied());
                    }
                    SourcePoint::Corner { circle, junction } => {
                        let inner = self
                            .fiber(ypiece, TargetPoint::Corner { circle, junction })
                            .ok_or_else(|| missing("corner fiber"))?;
                        preimages.extend(inner.preimages.iter().copied());
                    }
                }
            }
            cone_fibers.push(ConeFiber { target_piece: fib.target_piece, point: fib.point, preimages });
        }
        Ok(CoveringMap {
            source: self.source.clone(),
            target: next.target.clone(),
            degree: self.degree * next.degree,
            graph_map: GraphMap { vertices, edges },
            piece_assignment,
            segment_map,
            cone_fibers,
        })
    }

    pub fn fiber(&self, piece: usize, point: TargetPoint) -> Option<&ConeFiber> {
        self.cone_fibers.iter().find(|f| f.target_piece == piece && f.point == point)
    }

    /// Rewrite the source side through a vertex smoothing of the source.
    pub(crate) fn absorb_source_smoothing(&self, s: &crate::orbicore::Smoothing) -> CoveringMap {
        let mut vertices = self.graph_map.vertices.clone();
        vertices.retain(|v, _| s.complex.graph.vertex(v).is_some());
        let edges = s
            .edge_origin
            .iter()
            .map(|(e, walk)| {
                let img: Vec<Dart> =
                    walk.iter().flat_map(|d| self.graph_map.image(d).expect("old edge mapped")).collect();
                (e.clone(), img)
            })
            .collect();
        let segment_map = s
            .segment_origin
            .iter()
            .map(|(r, olds)| SegmentImage {
                source: *r,
                path: olds.iter().flat_map(|o| self.segment_image(*o).expect("old segment mapped").to_vec()).collect(),
            })
            .collect();
        CoveringMap { source: s.complex.clone(), graph_map: GraphMap { vertices, edges }, segment_map, ..self.clone() }
    }
}

/// Cones and corner reflectors of a piece, the points a cone fiber must
/// cover.
pub fn target_points(piece: &crate::orbicore::Piece) -> Vec<TargetPoint> {
    let mut out: Vec<TargetPoint> = (0..piece.cones.len()).map(|index| TargetPoint::Cone { index }).collect();
    for (ci, circle) in piece.boundary.iter().enumerate() {
        for j in 0..circle.len() {
            if circle.junction(j) == crate::orbicore::Junction::Corner {
                out.push(TargetPoint::Corner { circle: ci, junction: j });
            }
        }
    }
    out
}
