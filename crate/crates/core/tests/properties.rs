mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbicover::covers::{enumerate_double_covers, verify_covering};
use orbicover::coxeter::{branch_decomposition, davis_orbicomplex, racg_presentation, DefiningGraph};
use orbicover::invariants::{abelianization, fundamental_group_presentation};
use orbicover::orbicore::{
    marked_graph_isomorphism, ribbon_neighborhood, singular_subspace, topological_form, validate_complex, Dart, Mark,
    MarkedGraph, Rotation,
};

fn random_rotation(rng: &mut ChaCha8Rng, g: &MarkedGraph) -> Rotation {
    let mut rot: Rotation = g.vertices.iter().map(|v| (v.id.clone(), Vec::new())).collect();
    for e in &g.edges {
        rot.get_mut(&e.tail).unwrap().push(Dart::new(e.id.clone(), false));
        rot.get_mut(&e.head).unwrap().push(Dart::new(e.id.clone(), true));
    }
    for darts in rot.values_mut() {
        darts.shuffle(rng);
    }
    rot
}

/// Hubs joined by subdivided paths; every hub ends up with valence >= 3.
fn random_defining_graph(rng: &mut ChaCha8Rng) -> DefiningGraph {
    let hubs = rng.gen_range(2..=4);
    let mut vertices: Vec<String> = (0..hubs).map(|h| format!("h{h}")).collect();
    let mut edges: Vec<[String; 2]> = Vec::new();
    let mut valence = vec![0; hubs];
    let mut paths = 0;
    let mut add_path =
        |a: usize, b: usize, vertices: &mut Vec<String>, edges: &mut Vec<[String; 2]>, rng: &mut ChaCha8Rng| {
            let interior = rng.gen_range(2..=4);
            let mut prev = format!("h{a}");
            for i in 0..interior {
                let v = format!("p{paths}.{i}");
                vertices.push(v.clone());
                edges.push([prev, v.clone()]);
                prev = v;
            }
            edges.push([prev, format!("h{b}")]);
            paths += 1;
        };
    // a cycle through all hubs keeps the graph connected
    for h in 0..hubs {
        let next = (h + 1) % hubs;
        add_path(h, next, &mut vertices, &mut edges, rng);
        valence[h] += 1;
        valence[next] += 1;
    }
    while valence.iter().any(|&v| v < 3) {
        let a = valence.iter().position(|&v| v < 3).unwrap();
        let b = (a + rng.gen_range(1..hubs)) % hubs;
        add_path(a, b, &mut vertices, &mut edges, rng);
        valence[a] += 1;
        valence[b] += 1;
    }
    DefiningGraph { vertices, edges }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ribbon_euler_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_marked_graph(&mut rng, 8);
        let rot = random_rotation(&mut rng, &g);
        let rn = ribbon_neighborhood(&g, &rot).unwrap();
        for comp in &rn.components {
            let v = comp.vertices.len() as i64;
            let e = g.edges.iter().filter(|e| comp.vertices.contains(&e.tail)).count() as i64;
            prop_assert_eq!(comp.faces.len() as i64 + v - e, 2 - 2 * comp.genus as i64);
        }
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_marked_graph(&mut rng, 12);
        let b = if rng.gen_bool(0.5) { common::relabeled(&mut rng, &a) } else { common::random_marked_graph(&mut rng, 12) };
        prop_assert!(marked_graph_isomorphism(&a, &a).is_some());
        prop_assert_eq!(marked_graph_isomorphism(&a, &b).is_some(), marked_graph_isomorphism(&b, &a).is_some());
    }

    #[test]
    fn topological_form_is_idempotent_and_respects_isomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_marked_graph(&mut rng, 10);
        let ta = topological_form(&a);
        prop_assert_eq!(topological_form(&ta), ta.clone());
        let b = common::relabeled(&mut rng, &a);
        prop_assert!(marked_graph_isomorphism(&ta, &topological_form(&b)).is_some());
    }

    #[test]
    fn davis_construction_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_defining_graph(&mut rng);
        let branches = branch_decomposition(&g).unwrap();
        let mut seen = BTreeSet::new();
        for b in &branches {
            for (x, y) in b.edges() {
                prop_assert!(seen.insert(BTreeSet::from([x.to_string(), y.to_string()])));
            }
        }
        let all: BTreeSet<BTreeSet<String>> = g.edges.iter().map(|[x, y]| BTreeSet::from([x.clone(), y.clone()])).collect();
        prop_assert_eq!(seen, all);

        let d = davis_orbicomplex(&g).unwrap();
        prop_assert!(validate_complex(&d).is_empty());
        let s = singular_subspace(&d).unwrap();
        let essential = g.essential_vertices().len();
        let centres: Vec<_> = s.vertices.iter().filter(|v| v.mark == Mark::None).collect();
        prop_assert_eq!(centres.len(), 1);
        prop_assert_eq!(s.vertices.len(), essential + 1);
        prop_assert_eq!(s.edges.len(), essential);
        prop_assert!(s.edges.iter().all(|e| e.head == centres[0].id || e.tail == centres[0].id));

        let expect = abelianization(&racg_presentation(&g));
        prop_assert_eq!(expect.torsion.len(), g.vertices.len());
        prop_assert_eq!(abelianization(&fundamental_group_presentation(&d).unwrap()), expect);
    }
}

/// Pieces whose boundary labels sum to zero and whose cones all carry zero
/// lift to two pieces; every other piece lifts to one.
#[test]
fn double_cover_piece_counts() {
    let art = common::demo();
    for base in [&art.x1.source, &art.x2.source] {
        for d in enumerate_double_covers(base).unwrap() {
            assert!(verify_covering(&d.map).unwrap().passed());
            for (p, piece) in base.pieces.iter().enumerate() {
                let parity: u32 = (0..piece.boundary.len())
                    .filter_map(|ci| base.circuit(p, ci))
                    .flatten()
                    .map(|dart| d.labeling.edge(&dart.edge) as u32)
                    .sum();
                let cones = (0..piece.cones.len()).any(|k| d.labeling.cone(p, k) == 1);
                let lifts = d.map.piece_assignment.iter().filter(|a| a.target == p).count();
                assert_eq!(lifts, if parity.is_multiple_of(2) && !cones { 2 } else { 1 }, "{} piece {p}", base.name);
            }
        }
    }
}
