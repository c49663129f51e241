#![allow(dead_code)]

use std::sync::OnceLock;

use num_rational::Rational64;
use orbicover::covers::{
    build_x1, enumerate_double_covers, reflection_double, rotation_double, surface_over_disk_tower, CoveringMap,
};
use orbicover::coxeter::{branch_polygon, davis_orbicomplex, paper_graph, theta_graph, Branch, DefiningGraph};
use orbicover::demo::{run_paper_demo, DemoArtifacts};
use orbicover::orbicore::{Junction, Mark, Orbicomplex, Piece, SegmentRef};

pub fn demo() -> &'static DemoArtifacts {
    static ART: OnceLock<DemoArtifacts> = OnceLock::new();
    ART.get_or_init(|| run_paper_demo().1.expect("demo passes"))
}

/// Reflection polygon with `n` mirror segments.
pub fn polygon(n: usize) -> Piece {
    branch_polygon(&Branch { path: (0..n).map(|i| format!("s{i}")).collect() }).unwrap()
}

pub fn defining_graphs() -> Vec<(String, DefiningGraph)> {
    let mut out = vec![("paper".to_string(), paper_graph())];
    for k in 2..=5 {
        out.push((format!("theta{k}"), theta_graph(k)));
    }
    out
}

/// Every covering map the library constructs, with a name.
pub fn cover_corpus() -> Vec<(String, CoveringMap)> {
    let mut out = Vec::new();
    let davis = davis_orbicomplex(&paper_graph()).unwrap();
    out.push(("identity on D".to_string(), CoveringMap::identity(&davis)));
    let (x1, f1) = build_x1();
    out.push(("X1 -> D".into(), f1.clone()));
    for (i, d) in enumerate_double_covers(&x1).unwrap().into_iter().enumerate() {
        out.push((format!("cover {i} of X1"), d.map));
    }
    let art = demo();
    for (i, d) in enumerate_double_covers(&art.x2.source).unwrap().into_iter().enumerate() {
        out.push((format!("cover {i} of X2"), d.map));
    }
    out.push(("X2 -> D".into(), art.x2.compose(&f1).unwrap()));
    out.push(("Y^ -> Y".into(), art.y_hat.clone()));
    out.push(("Z^ -> Z".into(), art.z_hat.clone()));
    out.push(("Y^ -> X2".into(), art.y_hat.compose(&art.y).unwrap()));
    for n in 2..=12 {
        let (_, f) = reflection_double(&polygon(n)).unwrap();
        if n >= 3 {
            let (_, g) = rotation_double(&f.source.pieces[0]).unwrap();
            out.push((format!("rotation after reflection, n = {n}"), g.compose(&f).unwrap()));
        }
        out.push((format!("reflection double, n = {n}"), f));
    }
    for m in 1..=8 {
        out.push((format!("rotation double, m = {m}"), rotation_double(&Piece::disk("D", m + 1, 1)).unwrap().1));
    }
    for g in 1..=7 {
        let t = surface_over_disk_tower(g).unwrap();
        out.push((format!("tower g = {g}"), t.composite().unwrap()));
        out.push((format!("tower upper g = {g}"), t.upper));
        out.push((format!("tower lower g = {g}"), t.lower));
    }
    out
}

/// Every complex in the corpus, deduplicated by name.
pub fn complex_corpus() -> Vec<Orbicomplex> {
    let mut out: Vec<Orbicomplex> = Vec::new();
    for (_, g) in defining_graphs() {
        out.push(davis_orbicomplex(&g).unwrap());
    }
    for (_, f) in cover_corpus() {
        out.push(f.source);
    }
    out
}

/// Euler characteristic by summing `(-1)^dim / |stabilizer|` over an
/// explicit cell structure. Each piece interior contributes the compactly
/// supported characteristic of a genus-`g` surface with `b` holes and one
/// puncture per cone; each cone point, boundary cell and graph cell
/// contributes its own weight. Boundary cells on the attaching graph are
/// counted through the graph.
pub fn weighted_cell_euler(c: &Orbicomplex) -> Rational64 {
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let attached: std::collections::BTreeSet<SegmentRef> = c.attachments.iter().map(|a| a.segment).collect();
    let mut chi = Rational64::from_integer(0);
    for v in &c.graph.vertices {
        chi += match v.mark {
            Mark::None => r(1, 1),
            Mark::Ramification | Mark::Wall(_) => r(1, 2),
        };
    }
    chi -= Rational64::from_integer(c.graph.edges.len() as i64);
    for (p, piece) in c.pieces.iter().enumerate() {
        let b = piece.boundary.len() as i64;
        let k = piece.cones.len() as i64;
        // open interior: closed surface minus b disks minus k points
        chi += Rational64::from_integer(2 - 2 * piece.genus as i64 - b - k);
        for &m in &piece.cones {
            chi += r(1, m as i64);
        }
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let n = circle.segments.len();
            let on_graph = |s: usize| attached.contains(&SegmentRef::new(p, ci, s));
            for s in 0..n {
                if !on_graph(s) {
                    chi -= if circle.segments[s].is_mirror() { r(1, 2) } else { r(1, 1) };
                }
                let t = (s + 1) % n;
                if on_graph(s) || on_graph(t) {
                    continue;
                }
                let mirrors = [s, t].iter().filter(|&&x| circle.segments[x].is_mirror()).count();
                debug_assert!(mirrors < 2 || circle.junction(s) == Junction::Corner);
                chi += match mirrors {
                    2 => r(1, 4),
                    1 => r(1, 2),
                    _ => r(1, 1),
                };
            }
        }
    }
    chi
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and the `k`-th factor is `d_k / d_(k-1)`.
pub fn invariant_factors_oracle(m: &[Vec<i64>]) -> Vec<i64> {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut d = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

pub fn random_matrix(rng: &mut impl rand::Rng) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect()
}

pub fn random_marked_graph(rng: &mut impl rand::Rng, max_vertices: usize) -> orbicover::orbicore::MarkedGraph {
    let mut g = orbicover::orbicore::MarkedGraph::new();
    let n = rng.gen_range(1..=max_vertices);
    for i in 0..n {
        let mark = match rng.gen_range(0..4) {
            0 => Mark::Ramification,
            1 => Mark::Wall(format!("w{i}")),
            _ => Mark::None,
        };
        g.add_vertex(format!("v{i}"), mark);
    }
    for k in 0..rng.gen_range(0..=n + 3) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        g.add_edge(format!("e{k}"), format!("v{a}"), format!("v{b}"), rng.gen_range(1..=2));
    }
    g
}

/// The same graph with vertices renamed by a random permutation and the
/// edge list shuffled.
pub fn relabeled(rng: &mut impl rand::Rng, g: &orbicover::orbicore::MarkedGraph) -> orbicover::orbicore::MarkedGraph {
    use rand::seq::SliceRandom;
    let n = g.vertices.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let idx = g.vertex_index();
    let name = |id: &str| format!("u{}", perm[idx[id]]);
    let mut h = orbicover::orbicore::MarkedGraph::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in order {
        let v = &g.vertices[i];
        h.add_vertex(name(&v.id), v.mark.clone());
    }
    let mut edges = g.edges.clone();
    edges.shuffle(rng);
    for (k, e) in edges.iter().enumerate() {
        let (t, s) = if rng.gen_bool(0.5) { (&e.tail, &e.head) } else { (&e.head, &e.tail) };
        h.add_edge(format!("f{k}"), name(t), name(s), e.multiplicity);
    }
    h
}

fn mark_class(m: &Mark) -> u8 {
    match m {
        Mark::None => 0,
        Mark::Ramification => 1,
        Mark::Wall(_) => 2,
    }
}

/// Isomorphism by trying every vertex permutation.
pub fn brute_force_isomorphic(a: &orbicover::orbicore::MarkedGraph, b: &orbicover::orbicore::MarkedGraph) -> bool {
    let n = a.vertices.len();
    if n != b.vertices.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let (ia, ib) = (a.vertex_index(), b.vertex_index());
    let edge_set =
        |g: &orbicover::orbicore::MarkedGraph, idx: &std::collections::BTreeMap<&str, usize>, p: &[usize]| {
            let mut v: Vec<(usize, usize, u32)> = g
                .edges
                .iter()
                .map(|e| {
                    let (x, y) = (p[idx[e.tail.as_str()]], p[idx[e.head.as_str()]]);
                    (x.min(y), x.max(y), e.multiplicity)
                })
                .collect();
            v.sort();
            v
        };
    let id: Vec<usize> = (0..n).collect();
    let target = edge_set(b, &ib, &id);
    let mut perm = id.clone();
    loop {
        let marks_ok = (0..n).all(|i| mark_class(&a.vertices[i].mark) == mark_class(&b.vertices[perm[i]].mark));
        if marks_ok && edge_set(a, &ia, &perm) == target {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
