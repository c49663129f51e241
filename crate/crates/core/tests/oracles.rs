mod common;

use num_bigint::BigInt;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbicover::covers::{check_graph_covering, verify_covering};
use orbicover::coxeter::{davis_orbicomplex, racg_presentation};
use orbicover::invariants::{
    abelianization, fundamental_group_presentation, presentation_betti, smith_normal_form, torsion_freeness,
};
use orbicover::orbicore::{euler_characteristic, marked_graph_isomorphism, singular_subspace, topological_form};

#[test]
fn euler_agrees_with_weighted_cells() {
    for c in common::complex_corpus() {
        assert_eq!(euler_characteristic(&c).unwrap(), common::weighted_cell_euler(&c), "{}", c.name);
    }
}

#[test]
fn derived_euler_values() {
    let art = common::demo();
    let expect = [
        (&art.davis, Rational64::new(-9, 2)),
        (&art.x1.source, Rational64::from_integer(-9)),
        (&art.x2.source, Rational64::from_integer(-18)),
        (&art.y.source, Rational64::from_integer(-36)),
        (&art.z.source, Rational64::from_integer(-36)),
        (&art.y_hat.source, Rational64::from_integer(-144)),
        (&art.z_hat.source, Rational64::from_integer(-144)),
    ];
    for (c, chi) in expect {
        assert_eq!(common::weighted_cell_euler(c), chi, "{}", c.name);
        assert_eq!(euler_characteristic(c).unwrap(), chi, "{}", c.name);
    }
}

#[test]
fn smith_normal_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let m = common::random_matrix(&mut rng);
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let expect: Vec<BigInt> = common::invariant_factors_oracle(&m).into_iter().map(BigInt::from).collect();
        assert_eq!(smith_normal_form(&big), expect, "{m:?}");
    }
}

#[test]
fn isomorphism_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut positives = 0;
    for _ in 0..100 {
        let a = common::random_marked_graph(&mut rng, 7);
        let b =
            if rng.gen_bool(0.5) { common::relabeled(&mut rng, &a) } else { common::random_marked_graph(&mut rng, 7) };
        let fast = marked_graph_isomorphism(&a, &b).is_some();
        assert_eq!(fast, common::brute_force_isomorphic(&a, &b), "{a:?}\n{b:?}");
        positives += fast as usize;
    }
    assert!(positives >= 30);
}

#[test]
fn every_cover_verifies_and_multiplies_euler() {
    for (name, f) in common::cover_corpus() {
        let r = verify_covering(&f).unwrap();
        assert!(r.passed(), "{name}: {r}");
        let (src, tgt) = (euler_characteristic(&f.source).unwrap(), euler_characteristic(&f.target).unwrap());
        assert_eq!(src, tgt * Rational64::from_integer(f.degree as i64), "{name}");
    }
}

#[test]
fn singular_maps_are_graph_covers() {
    for (name, f) in common::cover_corpus() {
        let (s, t) = (singular_subspace(&f.source).unwrap(), singular_subspace(&f.target).unwrap());
        assert!(check_graph_covering(&s, &t, &f.graph_map, f.degree).is_empty(), "{name}");
    }
}

#[test]
fn racg_abelianizes_to_elementary_two_group() {
    for (name, g) in common::defining_graphs() {
        let ab = abelianization(&racg_presentation(&g));
        assert_eq!((ab.free_rank, ab.torsion.clone()), (0, vec![2; g.vertices.len()]), "{name}");
        let davis = abelianization(&fundamental_group_presentation(&davis_orbicomplex(&g).unwrap()).unwrap());
        assert_eq!(davis, ab, "{name}");
    }
}

#[test]
fn torsion_free_betti_difference() {
    let art = common::demo();
    for f in [&art.y_hat, &art.z_hat] {
        assert!(torsion_freeness(&f.source));
        let (b1, b2) = presentation_betti(&fundamental_group_presentation(&f.source).unwrap());
        assert_eq!(b1 as i64 - b2 as i64, 145);
    }
}

#[test]
fn demo_singular_subspaces() {
    let art = common::demo();
    let form = |c| topological_form(&singular_subspace(c).unwrap());
    assert!(marked_graph_isomorphism(&form(&art.y.source), &form(&art.z.source)).is_none());
    assert!(marked_graph_isomorphism(&form(&art.y_hat.source), &form(&art.z_hat.source)).is_none());
}
