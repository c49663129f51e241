use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::complex::Orbicomplex;
use super::graph::{reverse_walk, Dart, MarkedGraph};
use crate::error::{Error, Result};

/// Cyclic order of the darts leaving each vertex.
pub type Rotation = BTreeMap<String, Vec<Dart>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodComponent {
    pub vertices: BTreeSet<String>,
    pub genus: u32,
    /// Boundary circles of the thickened component as closed dart walks. An
    /// isolated vertex thickens to a disk whose boundary walk is empty.
    pub faces: Vec<Vec<Dart>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonNeighborhood {
    pub components: Vec<NeighborhoodComponent>,
}

impl RibbonNeighborhood {
    pub fn genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }

    pub fn faces(&self) -> Vec<&Vec<Dart>> {
        self.components.iter().flat_map(|c| c.faces.iter()).collect()
    }

    pub fn face_count(&self) -> usize {
        self.components.iter().map(|c| c.faces.len()).sum()
    }
}

fn darts_at(g: &MarkedGraph, v: &str) -> Vec<Dart> {
    let mut out = Vec::new();
    for e in &g.edges {
        if e.tail == v {
            out.push(Dart::new(e.id.clone(), false));
        }
        if e.head == v {
            out.push(Dart::new(e.id.clone(), true));
        }
    }
    out
}

pub fn check_rotation(g: &MarkedGraph, rotation: &Rotation) -> Result<()> {
    for v in rotation.keys() {
        if g.vertex(v).is_none() {
            return Err(Error::MalformedRotation(format!("unknown vertex {v}")));
        }
    }
    for v in &g.vertices {
        let mut expected = darts_at(g, &v.id);
        expected.sort();
        let mut given = rotation.get(&v.id).cloned().unwrap_or_default();
        given.sort();
        if expected != given {
            return Err(Error::MalformedRotation(format!(
                "vertex {} must list each leaving edge-end exactly once",
                v.id
            )));
        }
    }
    Ok(())
}

/// Thicken `g` according to `rotation` and trace the boundary of the
/// resulting surface. Face successor of a dart `d` ending at `v` is the
/// dart after `d⁻¹` in the rotation at `v`.
pub fn ribbon_neighborhood(g: &MarkedGraph, rotation: &Rotation) -> Result<RibbonNeighborhood> {
    check_rotation(g, rotation)?;
    let mut succ_at: BTreeMap<Dart, Dart> = BTreeMap::new();
    for darts in rotation.values() {
        for (i, d) in darts.iter().enumerate() {
            succ_at.insert(d.clone(), darts[(i + 1) % darts.len()].clone());
        }
    }
    let mut all: Vec<Dart> = succ_at.keys().cloned().collect();
    all.sort();
    let mut used = BTreeSet::new();
    let mut faces: Vec<Vec<Dart>> = Vec::new();
    for start in &all {
        if used.contains(start) {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start.clone();
        loop {
            used.insert(d.clone());
            face.push(d.clone());
            d = succ_at[&d.inverse()].clone();
            if &d == start {
                break;
            }
        }
        faces.push(face);
    }

    let mut components = Vec::new();
    for comp in g.components() {
        let edges: BTreeSet<&str> = g.edges.iter().filter(|e| comp.contains(&e.tail)).map(|e| e.id.as_str()).collect();
        let mut comp_faces: Vec<Vec<Dart>> =
            faces.iter().filter(|f| f.first().is_some_and(|d| edges.contains(d.edge.as_str()))).cloned().collect();
        if edges.is_empty() {
            comp_faces.push(Vec::new());
        }
        let chi = comp.len() as i64 - edges.len() as i64;
        let twice_genus = 2 - comp_faces.len() as i64 - chi;
        debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0);
        components.push(NeighborhoodComponent { vertices: comp, genus: (twice_genus / 2) as u32, faces: comp_faces });
    }
    Ok(RibbonNeighborhood { components })
}

/// Canonical representative of a closed walk up to cyclic shift and
/// reversal.
pub fn canonical_circuit(walk: &[Dart]) -> Vec<Dart> {
    if walk.is_empty() {
        return Vec::new();
    }
    let mut best: Option<Vec<Dart>> = None;
    for w in [walk.to_vec(), reverse_walk(walk)] {
        for k in 0..w.len() {
            let mut r = w.clone();
            r.rotate_left(k);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

/// Distinct attaching circuits of the complex (up to shift and reversal),
/// or `None` if some circle is only partly attached or a piece has mirrors.
pub fn attachment_circuits(c: &Orbicomplex) -> Option<Vec<Vec<Dart>>> {
    let mut circuits = BTreeSet::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        if piece.has_mirrors() {
            return None;
        }
        for ci in 0..piece.boundary.len() {
            if let Some(w) = c.circuit(p, ci) {
                circuits.insert(canonical_circuit(&w));
            } else if !c.is_circle_unattached(p, ci) {
                return None;
            }
        }
    }
    Some(circuits.into_iter().collect())
}

/// Rotation system whose faces are exactly the attaching circuits of `c`,
/// if one exists: every edge must lie on exactly two circuit sides, the
/// circuits must admit coherent orientations and the corners at each vertex
/// must close up into a single cycle.
pub fn face_rotation(c: &Orbicomplex) -> Option<Rotation> {
    let circuits = attachment_circuits(c)?;
    // occurrences of each edge: (circuit, reversed)
    let mut occ: BTreeMap<&str, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, w) in circuits.iter().enumerate() {
        for d in w {
            occ.entry(d.edge.as_str()).or_default().push((i, d.reversed));
        }
    }
    for e in &c.graph.edges {
        if occ.get(e.id.as_str()).map_or(0, Vec::len) != 2 {
            return None;
        }
    }
    // flip[i]: reverse circuit i; the two sides of each edge must disagree
    let mut flip: Vec<Option<bool>> = vec![None; circuits.len()];
    let mut constraints: Vec<Vec<(usize, bool)>> = vec![Vec::new(); circuits.len()];
    for sides in occ.values() {
        let (a, ra) = sides[0];
        let (b, rb) = sides[1];
        // ra ^ fa != rb ^ fb  <=>  fa ^ fb == !(ra ^ rb)
        let rel = !(ra ^ rb);
        if a == b {
            if rel {
                return None;
            }
            continue;
        }
        constraints[a].push((b, rel));
        constraints[b].push((a, rel));
    }
    for root in 0..circuits.len() {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(false);
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let fi = flip[i].expect("assigned");
            for &(j, rel) in &constraints[i] {
                let want = fi ^ rel;
                match flip[j] {
                    None => {
                        flip[j] = Some(want);
                        stack.push(j);
                    }
                    Some(f) if f != want => return None,
                    _ => {}
                }
            }
        }
    }
    let faces: Vec<Vec<Dart>> =
        circuits.iter().zip(&flip).map(|(w, f)| if f.unwrap_or(false) { reverse_walk(w) } else { w.clone() }).collect();

    // corner permutation: sigma(d_k^{-1}) = d_{k+1}
    let mut sigma: BTreeMap<Dart, Dart> = BTreeMap::new();
    for w in &faces {
        for k in 0..w.len() {
            let next = w[(k + 1) % w.len()].clone();
            if sigma.insert(w[k].inverse(), next).is_some() {
                return None;
            }
        }
    }
    let mut rotation = Rotation::new();
    for v in &c.graph.vertices {
        let mut darts = darts_at(&c.graph, &v.id);
        darts.sort();
        if darts.is_empty() {
            rotation.insert(v.id.clone(), Vec::new());
            continue;
        }
        let mut cycle = vec![darts[0].clone()];
        loop {
            let next = sigma.get(cycle.last().expect("non-empty"))?.clone();
            if next == cycle[0] {
                break;
            }
            if cycle.len() > darts.len() {
                return None;
            }
            cycle.push(next);
        }
        if cycle.len() != darts.len() {
            return None;
        }
        rotation.insert(v.id.clone(), cycle);
    }
    Some(rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbicore::graph::Mark;

    pub(crate) fn theta() -> MarkedGraph {
        let mut g = MarkedGraph::new();
        g.add_vertex("x", Mark::None).add_vertex("y", Mark::None);
        for c in ["c1", "c2", "c3"] {
            g.add_edge(c, "x", "y", 0);
        }
        g
    }

    fn planar_theta_rotation() -> Rotation {
        let mut r = Rotation::new();
        r.insert("x".into(), vec![Dart::new("c1", false), Dart::new("c2", false), Dart::new("c3", false)]);
        r.insert("y".into(), vec![Dart::new("c3", true), Dart::new("c2", true), Dart::new("c1", true)]);
        r
    }

    #[test]
    fn single_cycle_is_an_annulus() {
        let mut g = MarkedGraph::new();
        g.add_vertex("a", Mark::None).add_vertex("b", Mark::None).add_vertex("c", Mark::None);
        g.add_edge("ab", "a", "b", 0).add_edge("bc", "b", "c", 0).add_edge("ca", "c", "a", 0);
        let mut r = Rotation::new();
        r.insert("a".into(), vec![Dart::new("ab", false), Dart::new("ca", true)]);
        r.insert("b".into(), vec![Dart::new("bc", false), Dart::new("ab", true)]);
        r.insert("c".into(), vec![Dart::new("ca", false), Dart::new("bc", true)]);
        let n = ribbon_neighborhood(&g, &r).unwrap();
        assert_eq!((n.genus(), n.face_count()), (0, 2));
    }

    #[test]
    fn theta_planar_and_toroidal() {
        let g = theta();
        let n = ribbon_neighborhood(&g, &planar_theta_rotation()).unwrap();
        assert_eq!((n.genus(), n.face_count()), (0, 3));
        for f in n.faces() {
            assert_eq!(f.len(), 2);
        }
        // same cyclic order at both ends gives a one-holed torus
        let mut r = planar_theta_rotation();
        r.insert("y".into(), vec![Dart::new("c1", true), Dart::new("c2", true), Dart::new("c3", true)]);
        let n = ribbon_neighborhood(&g, &r).unwrap();
        assert_eq!((n.genus(), n.face_count()), (1, 1));
    }

    #[test]
    fn malformed_rotations_are_rejected() {
        let g = theta();
        let mut r = planar_theta_rotation();
        r.get_mut("x").unwrap().pop();
        assert!(matches!(ribbon_neighborhood(&g, &r), Err(Error::MalformedRotation(_))));
        let mut r = planar_theta_rotation();
        r.get_mut("x").unwrap().push(Dart::new("c1", false));
        assert!(ribbon_neighborhood(&g, &r).is_err());
        let mut r = planar_theta_rotation();
        r.insert("z".into(), vec![]);
        assert!(ribbon_neighborhood(&g, &r).is_err());
    }

    #[test]
    fn isolated_vertex_is_a_disk() {
        let mut g = MarkedGraph::new();
        g.add_vertex("p", Mark::None);
        let mut r = Rotation::new();
        r.insert("p".into(), vec![]);
        let n = ribbon_neighborhood(&g, &r).unwrap();
        assert_eq!((n.genus(), n.face_count()), (0, 1));
    }

    #[test]
    fn canonical_circuit_identifies_shifts_and_reversal() {
        let w = vec![Dart::new("a", false), Dart::new("b", true), Dart::new("c", false)];
        let mut shifted = w.clone();
        shifted.rotate_left(1);
        assert_eq!(canonical_circuit(&w), canonical_circuit(&shifted));
        assert_eq!(canonical_circuit(&w), canonical_circuit(&reverse_walk(&w)));
    }
}
