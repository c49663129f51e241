use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{abelianization, fundamental_group_presentation, homotopy_equivalence_certificate, AbelianInvariants};
use crate::error::Result;
use crate::orbicore::{
    euler_characteristic, marked_graph_isomorphism, singular_subspace, topological_form, Orbicomplex,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularIso {
    No,
    /// Vertex bijection between the topological forms.
    Bijection(BTreeMap<String, String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Present,
    /// An invariant differs, so no homotopy equivalence exists.
    Absent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub euler: [String; 2],
    pub singular_iso: SingularIso,
    /// `None` for a disconnected complex.
    pub abelianization: [Option<AbelianInvariants>; 2],
    pub homotopy_certificate: CertificateStatus,
    pub verdicts: Vec<String>,
}

impl CompareReport {
    pub fn homeomorphism_excluded(&self) -> bool {
        self.singular_iso == SingularIso::No || self.homotopy_certificate == CertificateStatus::Absent
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let homeo = if self.homeomorphism_excluded() { "not homeomorphic" } else { "homeomorphism not excluded" };
        let cert = match self.homotopy_certificate {
            CertificateStatus::Present => "homotopy certificate present",
            CertificateStatus::Absent => "not homotopy equivalent",
            CertificateStatus::Inconclusive => "homotopy type inconclusive",
        };
        format!("{homeo}; {cert}")
    }
}

fn ab(c: &Orbicomplex) -> Option<AbelianInvariants> {
    fundamental_group_presentation(c).ok().map(|p| abelianization(&p))
}

/// Compare two complexes by Euler characteristic, singular subspace,
/// abelianized fundamental group and planar normal form. The thickenings
/// are read from the complexes' own rotation systems.
pub fn compare_report(a: &Orbicomplex, b: &Orbicomplex) -> Result<CompareReport> {
    let (ea, eb) = (euler_characteristic(a)?, euler_characteristic(b)?);
    let (sa, sb) = (topological_form(&singular_subspace(a)?), topological_form(&singular_subspace(b)?));
    let singular_iso = match marked_graph_isomorphism(&sa, &sb) {
        Some(m) => SingularIso::Bijection(m),
        None => SingularIso::No,
    };
    let abel = [ab(a), ab(b)];
    let mut verdicts = Vec::new();
    if singular_iso == SingularIso::No {
        verdicts.push("not homeomorphic: singular subspaces are not isomorphic".to_string());
    }
    let obstructed = if ea != eb {
        verdicts.push("not homotopy equivalent: euler characteristics differ".to_string());
        true
    } else if abel[0] != abel[1] {
        verdicts.push("not homotopy equivalent: abelianizations differ".to_string());
        true
    } else {
        false
    };
    let homotopy_certificate = if obstructed {
        CertificateStatus::Absent
    } else {
        let cert = match (&a.rotation, &b.rotation) {
            (Some(ra), Some(rb)) => homotopy_equivalence_certificate(a, ra, b, rb)?,
            _ => None,
        };
        if cert.is_some() {
            verdicts.push("homotopy equivalent: planar normal forms agree".to_string());
            CertificateStatus::Present
        } else {
            verdicts.push("homotopy type inconclusive".to_string());
            CertificateStatus::Inconclusive
        }
    };
    Ok(CompareReport {
        euler: [ea.to_string(), eb.to_string()],
        singular_iso,
        abelianization: abel,
        homotopy_certificate,
        verdicts,
    })
}
