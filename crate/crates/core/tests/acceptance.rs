//! Acceptance gate: one PASS or FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbicover::covers::{
    build_x1, enumerate_double_covers, reflection_double, rotation_double, surface_over_disk_tower, torsion_free_cover,
    verify_covering, CoveringMap, SourcePoint,
};
use orbicover::coxeter::{davis_orbicomplex, paper_graph};
use orbicover::demo::disk_census;
use orbicover::invariants::{
    abelianization, fundamental_group_presentation, homotopy_equivalence_certificate, planar_normal_form,
    smith_normal_form, torsion_freeness, AbelianInvariants, NeighborhoodSurface,
};
use orbicover::orbicore::{
    euler_characteristic, marked_graph_isomorphism, singular_subspace, topological_form, Mark, MarkedGraph,
    Orbicomplex, Piece,
};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl Into<String>) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn chi(c: &Orbicomplex) -> Rational64 {
    euler_characteristic(c).expect("valid complex")
}

fn verifies(f: &CoveringMap, degree: u32) -> bool {
    f.degree == degree && verify_covering(f).map(|r| r.passed()).unwrap_or(false)
}

fn multiplies(f: &CoveringMap) -> bool {
    chi(&f.source) == chi(&f.target) * Rational64::from_integer(f.degree as i64)
}

fn form(c: &Orbicomplex) -> MarkedGraph {
    topological_form(&singular_subspace(c).expect("valid complex"))
}

fn davis_construction() -> Check {
    let d = davis_orbicomplex(&paper_graph()).map_err(|e| e.to_string())?;
    let mut mirrors: Vec<usize> = d.pieces.iter().map(Piece::mirror_count).collect();
    mirrors.sort();
    ensure(mirrors == [5, 5, 5, 5, 7, 7], format!("mirror counts {mirrors:?}"))?;
    ensure(chi(&d) == Rational64::new(-9, 2), format!("euler {}", chi(&d)))?;
    ensure(common::weighted_cell_euler(&d) == chi(&d), "euler disagrees with weighted cells")?;
    let s = form(&d);
    let leaves = s.vertices.iter().filter(|v| v.mark == Mark::Ramification).count();
    let centre = s.vertices.iter().filter(|v| v.mark == Mark::None).count();
    ensure(
        s.vertices.len() == 4 && s.edges.len() == 3 && leaves == 3 && centre == 1,
        "singular subspace is not a tripod",
    )?;
    let ab = abelianization(&fundamental_group_presentation(&d).map_err(|e| e.to_string())?);
    ensure(ab == AbelianInvariants { free_rank: 0, torsion: vec![2; 25] }, format!("abelianization {ab}"))
}

fn x1_cover() -> Check {
    let d = davis_orbicomplex(&paper_graph()).map_err(|e| e.to_string())?;
    let (x1, f) = build_x1();
    ensure(f.target == d, "X1 map does not target the Davis complex")?;
    ensure(verifies(&f, 2), "X1 -> D fails verification")?;
    ensure(chi(&x1) == Rational64::from_integer(-9) && multiplies(&f), format!("euler {}", chi(&x1)))?;
    let mut theta = MarkedGraph::new();
    theta.add_vertex("p", Mark::None).add_vertex("q", Mark::None);
    let s = form(&x1);
    for (k, e) in s.edges.iter().enumerate() {
        theta.add_edge(format!("t{k}"), "p", "q", e.multiplicity);
    }
    ensure(
        s.edges.len() == 3 && marked_graph_isomorphism(&s, &theta).is_some(),
        "singular subspace is not a theta graph",
    )
}

fn local_doubles() -> Check {
    for n in 2..=12 {
        let (_, f) = reflection_double(&common::polygon(n)).map_err(|e| e.to_string())?;
        ensure(verifies(&f, 2) && multiplies(&f), format!("reflection double n = {n}"))?;
    }
    for m in 1..=8 {
        let (_, f) = rotation_double(&Piece::disk("D", m + 1, 1)).map_err(|e| e.to_string())?;
        ensure(verifies(&f, 2) && multiplies(&f), format!("rotation double m = {m}"))?;
        let smooth =
            f.cone_fibers.iter().filter(|c| c.preimages.iter().any(|(_, p)| *p == SourcePoint::Smooth)).count();
        ensure(smooth == 1, format!("rotation double m = {m}: {smooth} smoothed fibers"))?;
    }
    Ok(())
}

fn counterexample_pair() -> Check {
    let art = common::demo();
    let x2 = &art.x2.source;
    ensure(disk_census(x2) == Some([(6, 8)].into()), "X2 census")?;
    let family = enumerate_double_covers(x2).map_err(|e| e.to_string())?;
    ensure(family.len() <= 7, format!("{} covers of X2", family.len()))?;
    let (y, z) = (&art.y.source, &art.z.source);
    for c in [y, z] {
        ensure(chi(c) == Rational64::from_integer(-36), format!("{} euler {}", c.name, chi(c)))?;
        ensure(disk_census(c) == Some([(6, 8), (10, 4)].into()), format!("{} census", c.name))?;
        let rot = c.rotation.as_ref().ok_or("missing rotation")?;
        let nf = planar_normal_form(c, rot).map_err(|e| e.to_string())?.ok_or("no normal form")?;
        ensure(
            nf.components == [NeighborhoodSurface { genus: 0, boundary_circles: 6 }],
            "neighbourhood is not a six-holed sphere",
        )?;
    }
    ensure(verifies(&art.y, 2) && verifies(&art.z, 2), "Y or Z fails verification")?;
    ensure(marked_graph_isomorphism(&form(y), &form(z)).is_none(), "singular subspaces are isomorphic")?;
    let (ry, rz) = (y.rotation.as_ref().unwrap(), z.rotation.as_ref().unwrap());
    ensure(
        homotopy_equivalence_certificate(y, ry, z, rz).map_err(|e| e.to_string())?.is_some(),
        "normal forms differ",
    )?;
    let ab = |c| abelianization(&fundamental_group_presentation(c).unwrap());
    ensure(ab(y) == ab(z), "abelianizations differ")
}

fn torsion_free_refinement() -> Check {
    let art = common::demo();
    let mut hats = Vec::new();
    for base in [&art.y.source, &art.z.source] {
        let (hat, f) = torsion_free_cover(base).map_err(|e| e.to_string())?;
        ensure(verifies(&f, 4), format!("{} fails verification", hat.name))?;
        ensure(chi(&hat) == Rational64::from_integer(-144), format!("{} euler {}", hat.name, chi(&hat)))?;
        ensure(torsion_freeness(&hat), format!("{} has torsion", hat.name))?;
        let four = topological_form(&form(base).copies(4));
        ensure(marked_graph_isomorphism(&form(&hat), &four).is_some(), format!("{} singular subspace", hat.name))?;
        hats.push(hat);
    }
    ensure(
        marked_graph_isomorphism(&form(&hats[0]), &form(&hats[1])).is_none(),
        "torsion-free covers have isomorphic singular subspaces",
    )?;
    let (ra, rb) =
        (hats[0].rotation.as_ref().ok_or("missing rotation")?, hats[1].rotation.as_ref().ok_or("missing rotation")?);
    ensure(
        homotopy_equivalence_certificate(&hats[0], ra, &hats[1], rb).map_err(|e| e.to_string())?.is_some(),
        "no certificate",
    )?;
    let genera: std::collections::BTreeSet<u32> = hats[0].pieces.iter().map(|p| p.genus).collect();
    ensure(genera == [3, 7].into(), format!("genera {genera:?}"))?;
    for (cones, g) in [(6, 3), (10, 7)] {
        let t = surface_over_disk_tower(g).map_err(|e| e.to_string())?;
        ensure(t.disk.cones.len() == cones, format!("tower g = {g} sits over {} cones", t.disk.cones.len()))?;
        ensure(verifies(&t.composite().map_err(|e| e.to_string())?, 4), format!("tower g = {g}"))?;
    }
    Ok(())
}

fn oracle_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let m = common::random_matrix(&mut rng);
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let expect: Vec<BigInt> = common::invariant_factors_oracle(&m).into_iter().map(BigInt::from).collect();
        ensure(smith_normal_form(&big) == expect, format!("smith normal form of {m:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let a = common::random_marked_graph(&mut rng, 7);
        let b =
            if rng.gen_bool(0.5) { common::relabeled(&mut rng, &a) } else { common::random_marked_graph(&mut rng, 7) };
        ensure(
            marked_graph_isomorphism(&a, &b).is_some() == common::brute_force_isomorphic(&a, &b),
            "isomorphism oracle",
        )?;
    }
    for (name, f) in common::cover_corpus() {
        ensure(verify_covering(&f).map(|r| r.passed()).unwrap_or(false), format!("{name} fails verification"))?;
        ensure(multiplies(&f), format!("{name} breaks euler multiplicativity"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, &str, fn() -> Check); 6] = [
        ("A1", "Davis construction", davis_construction),
        ("A2", "X1 double cover", x1_cover),
        ("A3", "local reflection and rotation doubles", local_doubles),
        ("A4", "counterexample pair", counterexample_pair),
        ("A5", "torsion-free refinement", torsion_free_refinement),
        ("A6", "oracle suites", oracle_suites),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("PASS {id} {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
