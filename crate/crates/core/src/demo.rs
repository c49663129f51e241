//! The end-to-end pipeline: from the built-in defining graph to two
//! torsion-free complexes that are homotopy equivalent but not
//! homeomorphic.
//!
//! Stages:
//! 1. the Davis complex `D` and its singular subspace, a tripod;
//! 2. the explicit double cover `X1 -> D`;
//! 3. the double cover `X2 -> X1` whose pieces are eight six-cone disks;
//! 4. a pair `(Y, Z)` of double covers of `X2` with equal piece census,
//!    non-isomorphic singular subspaces and matching planar normal forms;
//! 5. the degree-4 torsion-free covers of `Y` and `Z`;
//! 6. the report.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::covers::{build_x1, enumerate_double_covers, torsion_free_cover, verify_covering, CoveringMap, DoubleCover};
use crate::coxeter::{davis_orbicomplex, paper_graph};
use crate::invariants::{
    abelianization, fundamental_group_presentation, homotopy_equivalence_certificate, planar_normal_form,
    torsion_freeness, NormalForm,
};
use crate::orbicore::{
    euler_characteristic, marked_graph_isomorphism, singular_subspace, topological_form, Mark, MarkedGraph, Orbicomplex,
};

/// Piece census of a disk complex: number of pieces per cone count.
pub type Census = BTreeMap<usize, usize>;

pub fn disk_census(c: &Orbicomplex) -> Option<Census> {
    let mut out = Census::new();
    for p in &c.pieces {
        if p.genus != 0 || p.boundary.len() != 1 || p.has_mirrors() {
            return None;
        }
        *out.entry(p.cones.len()).or_default() += 1;
    }
    Some(out)
}

/// Conditions a pair of double covers of `X2` must meet in stage 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPredicate {
    pub census: Census,
    pub singular_isomorphic: bool,
    pub normal_forms_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoConfig {
    /// Census selecting `X2` among the double covers of `X1`.
    pub x2_census: Census,
    pub pair: PairPredicate,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            x2_census: Census::from([(6, 8)]),
            pair: PairPredicate {
                census: Census::from([(6, 8), (10, 4)]),
                singular_isomorphic: false,
                normal_forms_equal: true,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: u8,
    pub name: String,
    pub inputs: Vec<String>,
    pub invariants: BTreeMap<String, String>,
    pub verdicts: Vec<String>,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub stages: Vec<StageReport>,
    pub passed: bool,
    /// First failed assertion, as `stage N: message`.
    pub failure: Option<String>,
}

impl DemoReport {
    /// The report with all timings zeroed, for byte-level comparison.
    pub fn without_timings(&self) -> DemoReport {
        let mut r = self.clone();
        for s in &mut r.stages {
            s.millis = 0.0;
        }
        r
    }
}

/// The complexes produced along the way.
#[derive(Debug, Clone)]
pub struct DemoArtifacts {
    pub davis: Orbicomplex,
    pub x1: CoveringMap,
    pub x2: CoveringMap,
    pub y: CoveringMap,
    pub z: CoveringMap,
    pub y_hat: CoveringMap,
    pub z_hat: CoveringMap,
}

struct Failure {
    stage: u8,
    message: String,
}

struct Stage {
    stage: u8,
    name: &'static str,
    start: Instant,
    report: StageReport,
}

impl Stage {
    fn new(stage: u8, name: &'static str) -> Stage {
        Stage {
            stage,
            name,
            start: Instant::now(),
            report: StageReport {
                stage,
                name: name.into(),
                inputs: Vec::new(),
                invariants: BTreeMap::new(),
                verdicts: Vec::new(),
                millis: 0.0,
            },
        }
    }

    fn input(&mut self, s: impl Into<String>) {
        self.report.inputs.push(s.into());
    }

    fn record(&mut self, key: &str, value: impl ToString) {
        self.report.invariants.insert(key.into(), value.to_string());
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) -> Result<(), Failure> {
        let what = what.into();
        if ok {
            self.report.verdicts.push(format!("ok: {what}"));
            Ok(())
        } else {
            Err(Failure { stage: self.stage, message: format!("{}: {what}", self.name) })
        }
    }

    fn verify(&mut self, f: &CoveringMap, degree: u32, what: &str) -> Result<(), Failure> {
        let passed = verify_covering(f).map(|r| r.passed()).unwrap_or(false);
        self.check(passed && f.degree == degree, format!("{what} verifies as a degree-{degree} cover"))
    }

    fn finish(mut self) -> StageReport {
        self.report.millis = self.start.elapsed().as_secs_f64() * 1000.0;
        self.report
    }
}

fn chi(c: &Orbicomplex) -> Rational64 {
    euler_characteristic(c).unwrap_or_else(|_| Rational64::from_integer(i64::MAX))
}

fn census_string(c: &Census) -> String {
    c.iter().map(|(k, n)| format!("{n} x D2({k})")).collect::<Vec<_>>().join(", ")
}

fn singular_form(c: &Orbicomplex) -> MarkedGraph {
    topological_form(&singular_subspace(c).expect("valid complex"))
}

fn normal_form(c: &Orbicomplex) -> Option<NormalForm> {
    planar_normal_form(c, c.rotation.as_ref()?).ok().flatten()
}

fn normal_form_string(nf: &NormalForm) -> String {
    let comps: Vec<String> =
        nf.components.iter().map(|s| format!("genus {} with {} circles", s.genus, s.boundary_circles)).collect();
    let loads: Vec<String> = nf
        .circle_loads()
        .iter()
        .map(|l| format!("{{{}}}", l.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("{}; circles {}", comps.join(", "), loads.join(" "))
}

fn certified(a: &Orbicomplex, b: &Orbicomplex) -> bool {
    match (&a.rotation, &b.rotation) {
        (Some(ra), Some(rb)) => homotopy_equivalence_certificate(a, ra, b, rb).ok().flatten().is_some(),
        _ => false,
    }
}

fn tripod() -> MarkedGraph {
    let mut g = MarkedGraph::new();
    g.add_vertex("o", Mark::None);
    for k in 0..3 {
        g.add_vertex(format!("l{k}"), Mark::Ramification);
        g.add_edge(format!("e{k}"), format!("l{k}"), "o", 4);
    }
    g
}

/// Run the pipeline with the default configuration.
pub fn run_paper_demo() -> (DemoReport, Option<DemoArtifacts>) {
    run_demo(&DemoConfig::default())
}

pub fn run_demo(config: &DemoConfig) -> (DemoReport, Option<DemoArtifacts>) {
    let mut stages = Vec::new();
    match pipeline(config, &mut stages) {
        Ok(art) => (DemoReport { stages, passed: true, failure: None }, Some(art)),
        Err(f) => {
            (DemoReport { stages, passed: false, failure: Some(format!("stage {}: {}", f.stage, f.message)) }, None)
        }
    }
}

fn pipeline(config: &DemoConfig, stages: &mut Vec<StageReport>) -> Result<DemoArtifacts, Failure> {
    // 1
    let mut st = Stage::new(1, "davis complex");
    let gamma = paper_graph();
    st.input(format!("defining graph with {} vertices and {} edges", gamma.vertices.len(), gamma.edges.len()));
    let davis = davis_orbicomplex(&gamma).map_err(|e| Failure { stage: 1, message: e.to_string() })?;
    let chi_d = chi(&davis);
    st.record("pieces", davis.pieces.len());
    st.record("euler", chi_d);
    st.check(chi_d == Rational64::new(-9, 2), "euler characteristic is -9/2")?;
    st.check(
        marked_graph_isomorphism(&singular_form(&davis), &tripod()).is_some(),
        "singular subspace is a marked tripod",
    )?;
    stages.push(st.finish());

    // 2
    let mut st = Stage::new(2, "X1");
    st.input("davis complex");
    let (x1, f1) = build_x1();
    st.verify(&f1, 2, "X1 -> D")?;
    st.record("euler", chi(&x1));
    st.record("census", census_string(&disk_census(&x1).unwrap_or_default()));
    st.check(chi(&x1) == Rational64::from_integer(-9), "euler characteristic is -9")?;
    stages.push(st.finish());

    // 3
    let mut st = Stage::new(3, "X2 selection");
    st.input(format!("selection census {}", census_string(&config.x2_census)));
    let family = enumerate_double_covers(&x1).map_err(|e| Failure { stage: 3, message: e.to_string() })?;
    st.record("double covers of X1", family.len());
    let chosen: Vec<&DoubleCover> =
        family.iter().filter(|d| disk_census(&d.complex).as_ref() == Some(&config.x2_census)).collect();
    st.record("matching labelings", chosen.len());
    st.check(chosen.len() == 1, "exactly one double cover of X1 has the selection census")?;
    let x2 = chosen[0].clone();
    st.verify(&x2.map, 2, "X2 -> X1")?;
    st.record("euler", chi(&x2.complex));
    st.check(chi(&x2.complex) == Rational64::from_integer(-18), "euler characteristic is -18")?;
    stages.push(st.finish());

    // 4
    let mut st = Stage::new(4, "pair search");
    st.input(format!(
        "pair census {}; singular isomorphic: {}; normal forms equal: {}",
        census_string(&config.pair.census),
        config.pair.singular_isomorphic,
        config.pair.normal_forms_equal
    ));
    let family = enumerate_double_covers(&x2.complex).map_err(|e| Failure { stage: 4, message: e.to_string() })?;
    st.record("double covers of X2", family.len());
    let candidates: Vec<&DoubleCover> =
        family.iter().filter(|d| disk_census(&d.complex).as_ref() == Some(&config.pair.census)).collect();
    st.record("candidates with pair census", candidates.len());
    let forms: Vec<MarkedGraph> = candidates.iter().map(|d| singular_form(&d.complex)).collect();
    let mut pairs = Vec::new();
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let iso = marked_graph_isomorphism(&forms[i], &forms[j]).is_some();
            let nf = certified(&candidates[i].complex, &candidates[j].complex);
            if iso == config.pair.singular_isomorphic && nf == config.pair.normal_forms_equal {
                pairs.push((i, j));
            }
        }
    }
    st.record("qualifying pairs", pairs.len());
    st.check(!pairs.is_empty(), "some pair meets the predicate")?;
    let (i, j) = pairs[0];
    let (y, z) = (candidates[i].clone(), candidates[j].clone());
    for (name, d) in [("Y", &y), ("Z", &z)] {
        st.verify(&d.map, 2, &format!("{name} -> X2"))?;
        st.record(&format!("euler {name}"), chi(&d.complex));
        st.check(chi(&d.complex) == Rational64::from_integer(-36), format!("euler characteristic of {name} is -36"))?;
        st.record(&format!("labeling {name}"), serde_json::to_string(&d.labeling).unwrap_or_default());
        if let Some(nf) = normal_form(&d.complex) {
            st.record(&format!("normal form {name}"), normal_form_string(&nf));
        }
    }
    let ab_y = fundamental_group_presentation(&y.complex).map(|p| abelianization(&p));
    let ab_z = fundamental_group_presentation(&z.complex).map(|p| abelianization(&p));
    if let (Ok(a), Ok(b)) = (&ab_y, &ab_z) {
        st.record("abelianization Y", a);
        st.record("abelianization Z", b);
    }
    st.check(ab_y.is_ok() && ab_y == ab_z, "abelianizations agree")?;
    stages.push(st.finish());

    // 5
    let mut st = Stage::new(5, "torsion-free covers");
    st.input("Y and Z");
    let mut hats = Vec::new();
    for (name, d) in [("Y", &y), ("Z", &z)] {
        let (hat, f) = torsion_free_cover(&d.complex).map_err(|e| Failure { stage: 5, message: e.to_string() })?;
        st.verify(&f, 4, &format!("{name}^ -> {name}"))?;
        st.record(&format!("euler {name}^"), chi(&hat));
        st.check(chi(&hat) == Rational64::from_integer(-144), format!("euler characteristic of {name}^ is -144"))?;
        st.check(torsion_freeness(&hat), format!("{name}^ is torsion-free"))?;
        let genera: Vec<String> = hat.census().iter().map(|t| t.to_string()).collect();
        st.record(&format!("pieces {name}^"), genera.join(", "));
        let four = singular_form(&d.complex).copies(4);
        st.check(
            marked_graph_isomorphism(&singular_form(&hat), &topological_form(&four)).is_some(),
            format!("singular subspace of {name}^ is four copies of that of {name}"),
        )?;
        hats.push((hat, f));
    }
    let genera: std::collections::BTreeSet<u32> = hats[0].0.pieces.iter().map(|p| p.genus).collect();
    st.check(genera == [3, 7].into(), "surfaces have genus 3 and 7")?;
    st.check(
        marked_graph_isomorphism(&singular_form(&hats[0].0), &singular_form(&hats[1].0)).is_none(),
        "singular subspaces of Y^ and Z^ are not isomorphic",
    )?;
    st.check(certified(&hats[0].0, &hats[1].0), "homotopy certificate for Y^ and Z^")?;
    stages.push(st.finish());

    // 6
    let mut st = Stage::new(6, "report");
    st.record("chain", "Y^, Z^ -4-> Y, Z -2-> X2 -2-> X1 -2-> D");
    st.check(true, "all assertions passed")?;
    stages.push(st.finish());

    let [(_, y_hat), (_, z_hat)]: [(Orbicomplex, CoveringMap); 2] = hats.try_into().unwrap_or_else(|_| unreachable!());
    Ok(DemoArtifacts { davis, x1: f1, x2: x2.map, y: y.map, z: z.map, y_hat, z_hat })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_demo_passes() {
        let (r, art) = run_paper_demo();
        assert!(r.passed, "{:?}", r.failure);
        assert_eq!(r.stages.len(), 6);
        assert!(art.is_some());
    }

    #[test]
    fn impossible_census_fails_at_stage_three() {
        let config = DemoConfig { x2_census: Census::from([(7, 8)]), ..DemoConfig::default() };
        let (r, _) = run_demo(&config);
        assert!(r.failure.unwrap().starts_with("stage 3"));
    }

    #[test]
    fn contradictory_pair_predicate_fails_at_stage_four() {
        let mut config = DemoConfig::default();
        config.pair.singular_isomorphic = true;
        config.pair.normal_forms_equal = false;
        let (r, _) = run_demo(&config);
        assert!(r.failure.unwrap().starts_with("stage 4"));
    }
}
