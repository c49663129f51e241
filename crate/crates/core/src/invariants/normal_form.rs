use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::orbicore::{
    attachment_circuits, canonical_circuit, ribbon_neighborhood, search_isomorphisms, ColoredGraph, Orbicomplex,
    PieceType, Rotation,
};

/// A component of the thickened attaching graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodSurface {
    pub genus: u32,
    pub boundary_circles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachedPiece {
    pub piece_type: PieceType,
    /// Neighbourhood boundary circle receiving each attached circle of the
    /// piece.
    pub circles: Vec<usize>,
}

/// The complex up to homeomorphism of its thickening: surfaces around the
/// attaching graph, their boundary circles, and the pieces glued on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub components: Vec<NeighborhoodSurface>,
    /// Component owning each neighbourhood boundary circle.
    pub circles: Vec<usize>,
    pub pieces: Vec<AttachedPiece>,
}

impl NormalForm {
    /// Sorted piece types glued to each neighbourhood circle, sorted.
    pub fn circle_loads(&self) -> Vec<Vec<PieceType>> {
        let mut loads: Vec<Vec<PieceType>> = vec![Vec::new(); self.circles.len()];
        for p in &self.pieces {
            for &c in &p.circles {
                loads[c].push(p.piece_type.clone());
            }
        }
        for l in &mut loads {
            l.sort();
        }
        loads.sort();
        loads
    }

    /// Tripartite coloured graph: components, circles and pieces.
    pub fn incidence_graph(&self) -> ColoredGraph {
        let nc = self.components.len();
        let ns = self.circles.len();
        let mut colors: Vec<String> =
            self.components.iter().map(|s| format!("surface g{} b{}", s.genus, s.boundary_circles)).collect();
        colors.extend(std::iter::repeat_n("circle".to_string(), ns));
        colors.extend(self.pieces.iter().map(|p| format!("piece {:?}", p.piece_type)));
        let mut g = ColoredGraph::new(colors);
        for (i, &comp) in self.circles.iter().enumerate() {
            g.add_edge(comp, nc + i, 0);
        }
        for (k, p) in self.pieces.iter().enumerate() {
            for &c in &p.circles {
                g.add_edge(nc + c, nc + ns + k, 1);
            }
        }
        g
    }
}

/// Normal form of `c` for the thickening given by `rotation`, or `None` if
/// some piece circle is only partly attached, some piece has mirrors, or an
/// attaching circuit does not bound a face of the thickening.
pub fn planar_normal_form(c: &Orbicomplex, rotation: &Rotation) -> Result<Option<NormalForm>> {
    let rn = ribbon_neighborhood(&c.graph, rotation)?;
    if attachment_circuits(c).is_none() {
        return Ok(None);
    }
    let mut components = Vec::new();
    let mut circles = Vec::new();
    let mut face_index: BTreeMap<Vec<crate::orbicore::Dart>, usize> = BTreeMap::new();
    for (k, comp) in rn.components.iter().enumerate() {
        components.push(NeighborhoodSurface { genus: comp.genus, boundary_circles: comp.faces.len() });
        for f in &comp.faces {
            if !f.is_empty() {
                face_index.insert(canonical_circuit(f), circles.len());
            }
            circles.push(k);
        }
    }
    let mut pieces = Vec::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        let mut attached = Vec::new();
        for ci in 0..piece.boundary.len() {
            if let Some(w) = c.circuit(p, ci) {
                match face_index.get(&canonical_circuit(&w)) {
                    Some(&f) => attached.push(f),
                    None => return Ok(None),
                }
            }
        }
        pieces.push(AttachedPiece { piece_type: piece.piece_type(), circles: attached });
    }
    Ok(Some(NormalForm { components, circles, pieces }))
}

/// Matching of two normal forms: images of components, circles and pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyCertificate {
    pub components: Vec<usize>,
    pub circles: Vec<usize>,
    pub pieces: Vec<usize>,
}

pub fn normal_form_isomorphism(a: &NormalForm, b: &NormalForm) -> Option<HomotopyCertificate> {
    if a.components.len() != b.components.len()
        || a.circles.len() != b.circles.len()
        || a.pieces.len() != b.pieces.len()
    {
        return None;
    }
    let mut found = None;
    search_isomorphisms(&a.incidence_graph(), &b.incidence_graph(), |m| {
        found = Some(m.to_vec());
        true
    });
    let m = found?;
    let (nc, ns) = (a.components.len(), a.circles.len());
    Some(HomotopyCertificate {
        components: m[..nc].to_vec(),
        circles: m[nc..nc + ns].iter().map(|x| x - nc).collect(),
        pieces: m[nc + ns..].iter().map(|x| x - nc - ns).collect(),
    })
}

/// Certificate that `a` and `b` are homotopy equivalent: their thickenings
/// are homeomorphic compatibly with the glued pieces. Only unmarked
/// attaching graphs are thickened.
pub fn homotopy_equivalence_certificate(
    a: &Orbicomplex,
    ra: &Rotation,
    b: &Orbicomplex,
    rb: &Rotation,
) -> Result<Option<HomotopyCertificate>> {
    if [a, b].iter().any(|c| c.graph.vertices.iter().any(|v| v.mark.is_marked())) {
        return Ok(None);
    }
    let (Some(na), Some(nb)) = (planar_normal_form(a, ra)?, planar_normal_form(b, rb)?) else {
        return Ok(None);
    };
    Ok(normal_form_isomorphism(&na, &nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbicore::{face_rotation, Attachment, Dart, Mark, MarkedGraph, Piece, SegmentRef};

    fn two_disks_on_loop() -> Orbicomplex {
        let mut g = MarkedGraph::new();
        g.add_vertex("v", Mark::None).add_edge("e", "v", "v", 2);
        let att = |p| Attachment { segment: SegmentRef::new(p, 0, 0), dart: Dart::new("e", false) };
        Orbicomplex::new("c", vec![Piece::disk("A", 4, 1), Piece::disk("B", 6, 1)], g, vec![att(0), att(1)])
    }

    #[test]
    fn loop_with_two_disks() {
        let c = two_disks_on_loop();
        // a single loop thickened as an annulus: both sides are the face e
        let rot: Rotation = [("v".to_string(), vec![Dart::new("e", false), Dart::new("e", true)])].into();
        let nf = planar_normal_form(&c, &rot).unwrap().unwrap();
        assert_eq!(nf.components, vec![NeighborhoodSurface { genus: 0, boundary_circles: 2 }]);
        assert_eq!(nf.pieces[0].circles, nf.pieces[1].circles);
        assert!(face_rotation(&c).is_none());
        assert!(homotopy_equivalence_certificate(&c, &rot, &c, &rot).unwrap().is_some());
    }

    #[test]
    fn non_face_circuit_has_no_normal_form() {
        let mut g = MarkedGraph::new();
        g.add_vertex("v", Mark::None).add_edge("e", "v", "v", 1).add_edge("f", "v", "v", 1);
        let c = Orbicomplex::new(
            "c",
            vec![Piece::disk("A", 4, 2)],
            g,
            vec![
                Attachment { segment: SegmentRef::new(0, 0, 0), dart: Dart::new("e", false) },
                Attachment { segment: SegmentRef::new(0, 0, 1), dart: Dart::new("f", false) },
            ],
        );
        let rot: Rotation = [(
            "v".to_string(),
            vec![Dart::new("e", false), Dart::new("f", false), Dart::new("e", true), Dart::new("f", true)],
        )]
        .into();
        assert_eq!(planar_normal_form(&c, &rot).unwrap(), None);
    }
}
