use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{target_points, CoveringMap, GraphMap, SourcePoint, TargetPoint};
use crate::error::{Error, Result};
use crate::orbicore::{euler_characteristic, Dart, Junction, MarkedGraph, Orbicomplex, Piece, SegmentKind, SegmentRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    FiberSums,
    PieceEuler,
    Boundary,
    ConeFibers,
    GraphCovering,
    GlobalEuler,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::FiberSums,
        Condition::PieceEuler,
        Condition::Boundary,
        Condition::ConeFibers,
        Condition::GraphCovering,
        Condition::GlobalEuler,
    ];
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::FiberSums => "fiber sums",
            Condition::PieceEuler => "piece euler characteristic",
            Condition::Boundary => "boundary compatibility",
            Condition::ConeFibers => "cone fibers",
            Condition::GraphCovering => "graph covering",
            Condition::GlobalEuler => "global euler characteristic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub status: Status,
    /// Offending cells, empty on success.
    pub witness: Vec<String>,
}

/// Outcome of [`verify_covering`], one entry per condition in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerifyReport(pub Vec<ConditionReport>);

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.0.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failed_conditions(&self) -> Vec<Condition> {
        self.0.iter().filter(|c| c.status == Status::Fail).map(|c| c.condition).collect()
    }

    pub fn get(&self, c: Condition) -> Option<&ConditionReport> {
        self.0.iter().find(|r| r.condition == c)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.0 {
            let status = if r.status == Status::Pass { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {}", r.condition)?;
            for w in &r.witness {
                writeln!(f, "    {w}")?;
            }
        }
        Ok(())
    }
}

fn point_order(piece: &Piece, p: SourcePoint) -> Option<i64> {
    match p {
        SourcePoint::Smooth => Some(1),
        SourcePoint::Cone { index } => piece.cones.get(index).map(|&m| m as i64),
        SourcePoint::Corner { circle, junction } => {
            let c = piece.boundary.get(circle)?;
            (junction < c.len() && c.junction(junction) == Junction::Corner).then_some(4)
        }
    }
}

fn target_order(piece: &Piece, p: TargetPoint) -> Option<i64> {
    point_order(piece, p.into())
}

fn describe(p: SourcePoint) -> String {
    match p {
        SourcePoint::Smooth => "smooth point".into(),
        SourcePoint::Cone { index } => format!("cone {index}"),
        SourcePoint::Corner { circle, junction } => format!("corner {circle}:{junction}"),
    }
}

fn segment_exists(c: &Orbicomplex, r: SegmentRef) -> bool {
    c.segment_kind(r).is_some()
}

/// Reject maps whose bookkeeping refers to cells that do not exist.
fn check_references(f: &CoveringMap) -> Result<()> {
    let bad = |what: String| Err(Error::MismatchedComplexes(what));
    if f.degree == 0 {
        return bad("degree must be positive".into());
    }
    if f.piece_assignment.len() != f.source.pieces.len() {
        return bad(format!(
            "{} piece assignments for {} source pieces",
            f.piece_assignment.len(),
            f.source.pieces.len()
        ));
    }
    for (s, a) in f.piece_assignment.iter().enumerate() {
        if a.target >= f.target.pieces.len() {
            return bad(format!("source piece {s} assigned to missing target piece {}", a.target));
        }
    }
    for img in &f.segment_map {
        if !segment_exists(&f.source, img.source) {
            return bad(format!("source {} does not exist", img.source));
        }
        for step in &img.path {
            if !segment_exists(&f.target, step.segment) {
                return bad(format!("target {} does not exist", step.segment));
            }
        }
    }
    for fib in &f.cone_fibers {
        let Some(tp) = f.target.pieces.get(fib.target_piece) else {
            return bad(format!("cone fiber over missing target piece {}", fib.target_piece));
        };
        if target_order(tp, fib.point).is_none() {
            return bad(format!("target piece {} has no point {:?}", fib.target_piece, fib.point));
        }
        for &(s, p) in &fib.preimages {
            let Some(sp) = f.source.pieces.get(s) else {
                return bad(format!("preimage in missing source piece {s}"));
            };
            if point_order(sp, p).is_none() {
                return bad(format!("source piece {s} has no {}", describe(p)));
            }
        }
    }
    for (v, w) in &f.graph_map.vertices {
        if f.source.graph.vertex(v).is_none() || f.target.graph.vertex(w).is_none() {
            return bad(format!("vertex map {v} -> {w} refers to a missing vertex"));
        }
    }
    for (e, walk) in &f.graph_map.edges {
        if f.source.graph.edge(e).is_none() {
            return bad(format!("edge map for missing source edge {e}"));
        }
        for d in walk {
            if f.target.graph.edge(&d.edge).is_none() {
                return bad(format!("edge {e} maps over missing target edge {}", d.edge));
            }
        }
    }
    Ok(())
}

fn report(condition: Condition, witness: Vec<String>) -> ConditionReport {
    let status = if witness.is_empty() { Status::Pass } else { Status::Fail };
    ConditionReport { condition, status, witness }
}

/// Check that `f` is a combinatorial orbifold covering map.
pub fn verify_covering(f: &CoveringMap) -> Result<VerifyReport> {
    f.source.require_valid()?;
    f.target.require_valid()?;
    check_references(f)?;
    Ok(VerifyReport(vec![
        report(Condition::FiberSums, fiber_sums(f)),
        report(Condition::PieceEuler, piece_euler(f)),
        report(Condition::Boundary, boundary(f)),
        report(Condition::ConeFibers, cone_fibers(f)),
        report(
            Condition::GraphCovering,
            check_graph_covering(&f.source.graph, &f.target.graph, &f.graph_map, f.degree),
        ),
        report(Condition::GlobalEuler, global_euler(f)?),
    ]))
}

fn fiber_sums(f: &CoveringMap) -> Vec<String> {
    let mut out = Vec::new();
    let d = f.degree as i64;
    let mut per_target = vec![0i64; f.target.pieces.len()];
    for (s, a) in f.piece_assignment.iter().enumerate() {
        if a.local_degree == 0 {
            out.push(format!("source piece {s} has local degree 0"));
        }
        per_target[a.target] += a.local_degree as i64;
    }
    for (t, &sum) in per_target.iter().enumerate() {
        if sum != d {
            out.push(format!("target piece {t}: local degrees sum to {sum}, expected {d}"));
        }
    }
    for (t, tp) in f.target.pieces.iter().enumerate() {
        for point in target_points(tp) {
            let fibers: Vec<_> = f.cone_fibers.iter().filter(|x| x.target_piece == t && x.point == point).collect();
            if fibers.len() != 1 {
                out.push(format!("target piece {t} {}: {} fibers listed", describe(point.into()), fibers.len()));
                continue;
            }
            let k = target_order(tp, point).unwrap_or(1);
            let mut sum = Rational64::from_integer(0);
            for &(s, p) in &fibers[0].preimages {
                let kp = point_order(&f.source.pieces[s], p).unwrap_or(1);
                if k % kp != 0 {
                    out.push(format!(
                        "target piece {t} {}: preimage {} of piece {s} has order {kp} not dividing {k}",
                        describe(point.into()),
                        describe(p)
                    ));
                }
                sum += Rational64::new(k, kp);
            }
            if sum != Rational64::from_integer(d) {
                out.push(format!("target piece {t} {}: fiber sum {sum}, expected {d}", describe(point.into())));
            }
        }
    }
    let mut coverage: BTreeMap<SegmentRef, i64> = BTreeMap::new();
    for img in &f.segment_map {
        for step in &img.path {
            *coverage.entry(step.segment).or_default() += 1;
        }
    }
    for r in f.target.segment_refs() {
        if f.target.segment_kind(r) == Some(SegmentKind::Free) {
            let c = coverage.get(&r).copied().unwrap_or(0);
            if c != d {
                out.push(format!("target {r}: covered {c} times, expected {d}"));
            }
        }
    }
    out
}

fn piece_euler(f: &CoveringMap) -> Vec<String> {
    let mut out = Vec::new();
    for (s, a) in f.piece_assignment.iter().enumerate() {
        let chi_s = f.source.pieces[s].euler_characteristic();
        let chi_t = f.target.pieces[a.target].euler_characteristic();
        if chi_s != chi_t * Rational64::from_integer(a.local_degree as i64) {
            out.push(format!(
                "source piece {s}: chi {chi_s} != {} x {chi_t} of target piece {}",
                a.local_degree, a.target
            ));
        }
    }
    out
}

/// Target junctions at the two ends of a step, in walking order.
fn step_ends(c: &Orbicomplex, step: &super::SegmentStep) -> (usize, usize) {
    let circle = &c.pieces[step.segment.piece].boundary[step.segment.circle];
    let (a, b) = (circle.prev(step.segment.segment), step.segment.segment);
    if step.reversed {
        (b, a)
    } else {
        (a, b)
    }
}

fn boundary(f: &CoveringMap) -> Vec<String> {
    let mut out = Vec::new();
    let mut images: BTreeMap<SegmentRef, &[super::SegmentStep]> = BTreeMap::new();
    for img in &f.segment_map {
        if images.insert(img.source, &img.path).is_some() {
            out.push(format!("source {} has two images", img.source));
        }
    }
    let src_att = f.source.attachment_map();
    let tgt_att = f.target.attachment_map();
    for (p, piece) in f.source.pieces.iter().enumerate() {
        let target = f.piece_assignment[p].target;
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let mut walk: Vec<super::SegmentStep> = Vec::new();
            let mut complete = true;
            for s in 0..circle.len() {
                let r = SegmentRef::new(p, ci, s);
                let Some(path) = images.get(&r) else {
                    out.push(format!("source {r} has no image"));
                    complete = false;
                    continue;
                };
                if path.is_empty() {
                    out.push(format!("source {r} has an empty image"));
                    complete = false;
                    continue;
                }
                let kind = circle.segments[s].kind;
                for step in path.iter() {
                    if step.segment.piece != target {
                        out.push(format!(
                            "source {r} steps onto target piece {}, assigned {target}",
                            step.segment.piece
                        ));
                        complete = false;
                    } else if f.target.segment_kind(step.segment) != Some(kind) {
                        out.push(format!(
                            "source {r} of kind {kind:?} steps onto target {} of another kind",
                            step.segment
                        ));
                    }
                }
                // attachments commute with the segment map
                let image_darts: Option<Vec<Dart>> = path
                    .iter()
                    .map(|st| tgt_att.get(&st.segment).map(|d| if st.reversed { d.inverse() } else { (*d).clone() }))
                    .collect();
                match src_att.get(&r) {
                    Some(d) => {
                        let expected = f.graph_map.image(d);
                        if image_darts.is_none() || expected != image_darts {
                            out.push(format!("source {r}: attachment does not commute with the graph map"));
                        }
                    }
                    None => {
                        if path.iter().any(|st| tgt_att.contains_key(&st.segment)) {
                            out.push(format!("unattached source {r} maps onto an attached target segment"));
                        }
                    }
                }
                walk.extend(path.iter().copied());
            }
            if !complete || walk.is_empty() || walk.iter().any(|st| st.segment.piece != target) {
                continue;
            }
            // the image walk is continuous, closes up and folds only at reflections
            for i in 0..walk.len() {
                let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
                if a.segment.circle != b.segment.circle || step_ends(&f.target, &a).1 != step_ends(&f.target, &b).0 {
                    out.push(format!("source piece {p} circle {ci}: image walk breaks after {}", a.segment));
                    continue;
                }
                if a.segment == b.segment && a.reversed != b.reversed {
                    let j = step_ends(&f.target, &a).1;
                    let tc = &f.target.pieces[target].boundary[a.segment.circle];
                    if tc.junction(j) != Junction::Reflection {
                        out.push(format!("source piece {p} circle {ci}: image folds at a non-reflection junction"));
                    }
                }
            }
        }
    }
    for r in images.keys() {
        if !segment_exists(&f.source, *r) {
            out.push(format!("image listed for missing source {r}"));
        }
    }
    // mirror coverage: every source piece with mirrors covers each target
    // mirror of its target piece exactly local-degree times
    let mut mirror_cov: BTreeMap<(usize, SegmentRef), i64> = BTreeMap::new();
    for img in &f.segment_map {
        for st in &img.path {
            if f.target.segment_kind(st.segment) == Some(SegmentKind::Mirror) {
                *mirror_cov.entry((img.source.piece, st.segment)).or_default() += 1;
            }
        }
    }
    for (p, piece) in f.source.pieces.iter().enumerate() {
        let a = f.piece_assignment[p];
        let expected = if piece.has_mirrors() { a.local_degree as i64 } else { 0 };
        for r in f.target.segment_refs().filter(|r| r.piece == a.target) {
            if f.target.segment_kind(r) == Some(SegmentKind::Mirror) {
                let c = mirror_cov.get(&(p, r)).copied().unwrap_or(0);
                if c != expected {
                    out.push(format!("source piece {p} covers target mirror {r} {c} times, expected {expected}"));
                }
            }
        }
    }
    out
}

fn cone_fibers(f: &CoveringMap) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<(usize, SourcePoint), usize> = BTreeMap::new();
    for fib in &f.cone_fibers {
        let tp = &f.target.pieces[fib.target_piece];
        let k = target_order(tp, fib.point).unwrap_or(1);
        let mut per_source: BTreeMap<usize, Rational64> = BTreeMap::new();
        for &(s, p) in &fib.preimages {
            if f.piece_assignment[s].target != fib.target_piece {
                out.push(format!(
                    "{} of source piece {s} lies over target piece {}, not {}",
                    describe(p),
                    f.piece_assignment[s].target,
                    fib.target_piece
                ));
            }
            let kp = point_order(&f.source.pieces[s], p).unwrap_or(1);
            *per_source.entry(s).or_insert_with(|| Rational64::from_integer(0)) += Rational64::new(k, kp);
            if p != SourcePoint::Smooth {
                *seen.entry((s, p)).or_default() += 1;
            }
        }
        for (s, a) in f.piece_assignment.iter().enumerate() {
            if a.target != fib.target_piece {
                continue;
            }
            let sum = per_source.get(&s).copied().unwrap_or_else(|| Rational64::from_integer(0));
            if sum != Rational64::from_integer(a.local_degree as i64) {
                out.push(format!(
                    "target piece {} {}: source piece {s} contributes {sum}, local degree {}",
                    fib.target_piece,
                    describe(fib.point.into()),
                    a.local_degree
                ));
            }
        }
    }
    for (s, piece) in f.source.pieces.iter().enumerate() {
        for point in target_points(piece) {
            let n = seen.get(&(s, point.into())).copied().unwrap_or(0);
            if n != 1 {
                out.push(format!("source piece {s} {} appears in {n} fibers", describe(point.into())));
            }
        }
    }
    out
}

fn global_euler(f: &CoveringMap) -> Result<Vec<String>> {
    let chi_s = euler_characteristic(&f.source)?;
    let chi_t = euler_characteristic(&f.target)?;
    let d = Rational64::from_integer(f.degree as i64);
    Ok(if chi_s == d * chi_t { Vec::new() } else { vec![format!("chi(source) = {chi_s} != {} x {chi_t}", f.degree)] })
}

/// Check that `map` is an orbifold covering of marked graphs of the given
/// degree: edge walks connect the images of their endpoints, every target
/// edge is covered `degree` times with equal multiplicity, and around every
/// target vertex of local group order `k` each preimage of order `k'`
/// (a source vertex or a point where an edge walk passes through) wraps the
/// link `k / k'` times. Returns the violations found.
pub fn check_graph_covering(source: &MarkedGraph, target: &MarkedGraph, map: &GraphMap, degree: u32) -> Vec<String> {
    let mut out = Vec::new();
    let d = degree as i64;
    for v in &source.vertices {
        if !map.vertices.get(&v.id).is_some_and(|w| target.vertex(w).is_some()) {
            out.push(format!("vertex {} has no image", v.id));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut edge_hits: BTreeMap<&str, i64> = target.edges.iter().map(|e| (e.id.as_str(), 0)).collect();
    // preimage points of each target vertex: (order, link darts)
    let mut points: BTreeMap<String, Vec<(i64, Vec<Dart>)>> = BTreeMap::new();
    let mut links: BTreeMap<&str, Vec<Dart>> = source.vertices.iter().map(|v| (v.id.as_str(), Vec::new())).collect();
    for e in &source.edges {
        let Some(walk) = map.edges.get(&e.id) else {
            out.push(format!("edge {} has no image", e.id));
            continue;
        };
        if walk.is_empty() {
            out.push(format!("edge {} maps to an empty walk", e.id));
            continue;
        }
        let Some(ends) = walk.iter().map(|x| target.dart_ends(x)).collect::<Option<Vec<_>>>() else {
            out.push(format!("edge {} maps over a missing edge", e.id));
            continue;
        };
        if ends[0].0 != map.vertices[&e.tail] || ends[ends.len() - 1].1 != map.vertices[&e.head] {
            out.push(format!("edge {} does not run between the images of its ends", e.id));
        }
        for i in 1..walk.len() {
            if ends[i - 1].1 != ends[i].0 {
                out.push(format!("edge {} maps to a broken walk", e.id));
            }
            points.entry(ends[i].0.to_string()).or_default().push((1, vec![walk[i - 1].inverse(), walk[i].clone()]));
        }
        for x in walk {
            *edge_hits.entry(x.edge.as_str()).or_default() += 1;
            if let Some(te) = target.edge(&x.edge) {
                if te.multiplicity != e.multiplicity {
                    out.push(format!(
                        "edge {} of multiplicity {} covers {} of multiplicity {}",
                        e.id, e.multiplicity, te.id, te.multiplicity
                    ));
                }
            }
        }
        if let Some(l) = links.get_mut(e.tail.as_str()) {
            l.push(walk[0].clone());
        }
        if let Some(l) = links.get_mut(e.head.as_str()) {
            l.push(walk[walk.len() - 1].inverse());
        }
    }
    for (e, hits) in &edge_hits {
        if *hits != d {
            out.push(format!("target edge {e} covered {hits} times, expected {d}"));
        }
    }
    for v in &source.vertices {
        let w = &map.vertices[&v.id];
        points.entry(w.clone()).or_default().push((v.mark.stabilizer(), links[v.id.as_str()].clone()));
    }
    for w in &target.vertices {
        let k = w.mark.stabilizer();
        let mut expected_link: Vec<Dart> = Vec::new();
        for e in &target.edges {
            if e.tail == w.id {
                expected_link.push(Dart::new(e.id.clone(), false));
            }
            if e.head == w.id {
                expected_link.push(Dart::new(e.id.clone(), true));
            }
        }
        let pre = points.get(&w.id).cloned().unwrap_or_default();
        let mut sum = 0;
        for (kp, link) in &pre {
            if k % kp != 0 {
                out.push(format!("a preimage of {} has local group order {kp} not dividing {k}", w.id));
                continue;
            }
            let wraps = (k / kp) as usize;
            sum += k / kp;
            let mut counts: BTreeMap<&Dart, usize> = BTreeMap::new();
            for x in link {
                *counts.entry(x).or_default() += 1;
            }
            let distinct: BTreeSet<&Dart> = expected_link.iter().collect();
            let ok = counts.keys().all(|x| distinct.contains(x))
                && distinct.iter().all(|x| {
                    counts.get(x).copied().unwrap_or(0) == wraps * expected_link.iter().filter(|y| y == x).count()
                });
            if !ok {
                out.push(format!("a preimage of {} does not wrap its link {wraps} times", w.id));
            }
        }
        if sum != d {
            out.push(format!("vertex {} has fiber sum {sum}, expected {d}", w.id));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{davis_orbicomplex, paper_graph};

    #[test]
    fn identity_on_davis_passes() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let r = verify_covering(&CoveringMap::identity(&d)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn wrong_degree_fails_sums() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let mut f = CoveringMap::identity(&d);
        f.degree = 2;
        let r = verify_covering(&f).unwrap();
        assert!(r.failed_conditions().contains(&Condition::FiberSums));
        assert!(r.failed_conditions().contains(&Condition::GlobalEuler));
    }

    #[test]
    fn dangling_piece_is_an_error() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let mut f = CoveringMap::identity(&d);
        f.piece_assignment[0].target = 99;
        assert!(matches!(verify_covering(&f), Err(Error::MismatchedComplexes(_))));
    }

    #[test]
    fn report_serializes_as_list() {
        let d = davis_orbicomplex(&paper_graph()).unwrap();
        let r = verify_covering(&CoveringMap::identity(&d)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert_eq!(v[0]["status"], "PASS");
        assert_eq!(v[0]["condition"], "fiber_sums");
    }
}
