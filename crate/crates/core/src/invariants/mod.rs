//! Invariants that tell complexes apart or certify that they agree:
//! fundamental group presentations, abelianization by Smith normal form,
//! torsion-freeness, and the normal form of the thickened attaching graph.

mod compare;
mod normal_form;
mod presentation;
mod snf;

pub use compare::{compare_report, CertificateStatus, CompareReport, SingularIso};
pub use normal_form::{
    homotopy_equivalence_certificate, normal_form_isomorphism, planar_normal_form, AttachedPiece, HomotopyCertificate,
    NeighborhoodSurface, NormalForm,
};
pub use presentation::{free_reduce, fundamental_group_presentation, simplify_presentation};
pub use snf::{abelianization, presentation_betti, relation_matrix, smith_normal_form, AbelianInvariants};

use crate::orbicore::Orbicomplex;

/// Every local group is trivial: no cones, no mirrors, no marked vertices.
pub fn torsion_freeness(c: &Orbicomplex) -> bool {
    c.pieces.iter().all(|p| p.cones.is_empty() && !p.has_mirrors())
        && c.graph.vertices.iter().all(|v| !v.mark.is_marked())
}
