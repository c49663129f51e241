//! Right-angled Coxeter groups: defining graphs, presentations, branches and
//! the Davis orbicomplex assembled from one reflection polygon per branch.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbicore::{Attachment, BoundaryCircle, Dart, Mark, MarkedGraph, Orbicomplex, Piece, Segment, SegmentRef};

/// Finite simplicial graph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DefiningGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// A letter of a word: generator and exponent `±1`.
pub type Letter = (String, i32);
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    /// Relator letters that are not declared generators.
    pub fn undeclared_letters(&self) -> Vec<String> {
        let gens: BTreeSet<&str> = self.generators.iter().map(String::as_str).collect();
        let mut bad: BTreeSet<String> = BTreeSet::new();
        for r in &self.relators {
            for (g, _) in r {
                if !gens.contains(g.as_str()) {
                    bad.insert(g.clone());
                }
            }
        }
        bad.into_iter().collect()
    }
}

impl std::fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let word = |w: &Word| {
            if w.is_empty() {
                return "1".to_string();
            }
            w.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") }).collect::<Vec<_>>().join(" ")
        };
        write!(
            f,
            "< {} | {} >",
            self.generators.join(", "),
            self.relators.iter().map(word).collect::<Vec<_>>().join(", ")
        )
    }
}

impl DefiningGraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        DefiningGraph {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            edges: edges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        }
    }

    pub fn check_simplicial(&self) -> Result<()> {
        let verts: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        if verts.len() != self.vertices.len() {
            return Err(Error::NotSimplicial("repeated vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for [a, b] in &self.edges {
            if a == b {
                return Err(Error::NotSimplicial(format!("loop at {a}")));
            }
            for v in [a, b] {
                if !verts.contains(v.as_str()) {
                    return Err(Error::NotSimplicial(format!("edge endpoint {v} is not a vertex")));
                }
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                return Err(Error::NotSimplicial(format!("repeated edge {a}-{b}")));
            }
        }
        Ok(())
    }

    pub fn neighbors(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> =
            self.vertices.iter().map(|v| (v.as_str(), BTreeSet::new())).collect();
        for [a, b] in &self.edges {
            adj.entry(a.as_str()).or_default().insert(b.as_str());
            adj.entry(b.as_str()).or_default().insert(a.as_str());
        }
        adj
    }

    pub fn essential_vertices(&self) -> Vec<&str> {
        self.neighbors().into_iter().filter(|(_, n)| n.len() >= 3).map(|(v, _)| v).collect()
    }

    /// Whether the graph with `removed` deleted is connected (and non-empty).
    fn connected_without(&self, removed: &BTreeSet<&str>) -> bool {
        let adj = self.neighbors();
        let Some(&start) = adj.keys().find(|v| !removed.contains(*v)) else { return false };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !removed.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() + removed.len() == self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(&BTreeSet::new())
    }

    /// All non-empty cliques, each as a sorted vertex list.
    pub fn cliques(&self) -> Vec<Vec<&str>> {
        let adj = self.neighbors();
        let mut out = Vec::new();
        fn extend<'a>(
            current: &mut Vec<&'a str>,
            candidates: &[&'a str],
            adj: &BTreeMap<&'a str, BTreeSet<&'a str>>,
            out: &mut Vec<Vec<&'a str>>,
        ) {
            for (i, &v) in candidates.iter().enumerate() {
                current.push(v);
                out.push(current.clone());
                let next: Vec<&str> = candidates[i + 1..].iter().copied().filter(|w| adj[v].contains(w)).collect();
                extend(current, &next, adj, out);
                current.pop();
            }
        }
        let all: Vec<&str> = adj.keys().copied().collect();
        extend(&mut Vec::new(), &all, &adj, &mut out);
        out
    }
}

/// Standard presentation of the right-angled Coxeter group: one involution
/// per vertex, adjacent involutions commute.
pub fn racg_presentation(g: &DefiningGraph) -> GroupPresentation {
    let index: BTreeMap<&str, usize> = g.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut relators: Vec<Word> = g.vertices.iter().map(|s| vec![(s.clone(), 1), (s.clone(), 1)]).collect();
    let mut pairs: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|[a, b]| {
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            (i.min(j), i.max(j))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (i, j) in pairs {
        let (s, t) = (&g.vertices[i], &g.vertices[j]);
        relators.push(vec![(s.clone(), 1), (t.clone(), 1), (s.clone(), 1), (t.clone(), 1)]);
    }
    GroupPresentation { generators: g.vertices.clone(), relators }
}

/// Maximal path through valence-2 vertices between two essential vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Branch {
    pub path: Vec<String>,
}

impl Branch {
    /// Number of vertices including both endpoints.
    pub fn n(&self) -> usize {
        self.path.len()
    }

    pub fn start(&self) -> &str {
        &self.path[0]
    }

    pub fn end(&self) -> &str {
        &self.path[self.path.len() - 1]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.path.windows(2).map(|w| (w[0].as_str(), w[1].as_str()))
    }
}

pub fn branch_decomposition(g: &DefiningGraph) -> Result<Vec<Branch>> {
    g.check_simplicial()?;
    let adj = g.neighbors();
    let essential: BTreeSet<&str> = g.essential_vertices().into_iter().collect();
    if essential.is_empty() {
        return Err(Error::NoEssentialVertices);
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let mut used: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut branches = Vec::new();
    for &v in &essential {
        for &first in &adj[v] {
            if used.contains(&(v, first)) {
                continue;
            }
            let mut path = vec![v, first];
            used.insert((v, first));
            used.insert((first, v));
            while !essential.contains(path.last().expect("non-empty")) {
                let cur = *path.last().expect("non-empty");
                let prev = path[path.len() - 2];
                let next = adj[cur].iter().copied().find(|&w| w != prev && !used.contains(&(cur, w)));
                match next {
                    Some(w) if adj[cur].len() == 2 => {
                        used.insert((cur, w));
                        used.insert((w, cur));
                        path.push(w);
                    }
                    _ => return Err(Error::DanglingBranch(path.join("-"))),
                }
            }
            let fwd: Vec<String> = path.iter().map(|s| s.to_string()).collect();
            let rev: Vec<String> = fwd.iter().rev().cloned().collect();
            branches.push(Branch { path: fwd.min(rev) });
        }
    }
    branches.sort_by(|a, b| (a.start(), a.end(), &a.path).cmp(&(b.start(), b.end(), &b.path)));
    Ok(branches)
}

/// Reflection polygon of a branch: `n` mirrors named by the branch vertices
/// followed by the non-reflection edge split at its midpoint into two free
/// segments.
pub fn branch_polygon(b: &Branch) -> Result<Piece> {
    if b.n() < 2 {
        return Err(Error::BranchTooShort(b.n()));
    }
    let mut segments: Vec<Segment> = b.path.iter().map(|v| Segment::mirror(v.clone())).collect();
    segments.push(Segment::free());
    segments.push(Segment::free());
    Ok(Piece {
        id: format!("P[{}]", b.path.join("-")),
        genus: 0,
        boundary: vec![BoundaryCircle::new(segments)],
        cones: vec![],
    })
}

pub fn wall_vertex_id(v: &str) -> String {
    format!("w:{v}")
}

pub fn wall_edge_id(v: &str) -> String {
    format!("e:{v}")
}

pub const DAVIS_CENTER: &str = "o";

/// The Davis orbicomplex: the branch polygons glued along their
/// non-reflection edges to a star whose centre is the common midpoint and
/// whose leaves are the walls of the essential vertices.
pub fn davis_orbicomplex(g: &DefiningGraph) -> Result<Orbicomplex> {
    let branches = branch_decomposition(g)?;
    let mut graph = MarkedGraph::new();
    graph.add_vertex(DAVIS_CENTER, Mark::None);
    for v in g.essential_vertices() {
        graph.add_vertex(wall_vertex_id(v), Mark::Wall(v.to_string()));
        graph.add_edge(wall_edge_id(v), wall_vertex_id(v), DAVIS_CENTER, 0);
    }
    let mut pieces = Vec::new();
    let mut attachments = Vec::new();
    for (p, b) in branches.iter().enumerate() {
        let piece = branch_polygon(b)?;
        let n = b.n();
        // after the last mirror: wall of the end vertex -> centre
        attachments
            .push(Attachment { segment: SegmentRef::new(p, 0, n), dart: Dart::new(wall_edge_id(b.end()), false) });
        // centre -> wall of the start vertex, then back onto the first mirror
        attachments
            .push(Attachment { segment: SegmentRef::new(p, 0, n + 1), dart: Dart::new(wall_edge_id(b.start()), true) });
        pieces.push(piece);
    }
    let mut c = Orbicomplex::new("davis", pieces, graph, attachments);
    c.recompute_multiplicities();
    Ok(c)
}

/// One-endedness of the Coxeter group: connected, not complete, and no
/// complete subgraph separates.
pub fn one_endedness_check(g: &DefiningGraph) -> bool {
    if g.vertices.is_empty() || !g.is_connected() {
        return false;
    }
    let cliques = g.cliques();
    if cliques.iter().any(|c| c.len() == g.vertices.len()) {
        return false;
    }
    cliques.iter().all(|c| {
        let removed: BTreeSet<&str> = c.iter().copied().collect();
        g.connected_without(&removed)
    })
}

/// The defining graph used throughout: three vertices `v1, v2, v3` of
/// valence four joined pairwise by two branches, with `n = 7` between `v1`
/// and `v2` and `n = 5` otherwise.
pub fn paper_graph() -> DefiningGraph {
    let mut vertices: Vec<String> = vec!["v1".into(), "v2".into(), "v3".into()];
    let mut edges = Vec::new();
    let arms: [(&str, &str, &str, usize); 6] = [
        ("v1", "v2", "a", 5),
        ("v1", "v2", "b", 5),
        ("v1", "v3", "c", 3),
        ("v1", "v3", "d", 3),
        ("v2", "v3", "f", 3),
        ("v2", "v3", "g", 3),
    ];
    for (from, to, name, interior) in arms {
        let mut prev = from.to_string();
        for k in 1..=interior {
            let v = format!("{name}{k}");
            vertices.push(v.clone());
            edges.push([prev, v.clone()]);
            prev = v;
        }
        edges.push([prev, to.to_string()]);
    }
    DefiningGraph { vertices, edges }
}

/// Two essential vertices joined by three arcs of `interior` vertices each.
pub fn theta_graph(interior: usize) -> DefiningGraph {
    let mut vertices = vec!["u".to_string(), "v".to_string()];
    let mut edges = Vec::new();
    for arc in ["p", "q", "r"] {
        let mut prev = "u".to_string();
        for k in 1..=interior {
            let w = format!("{arc}{k}");
            vertices.push(w.clone());
            edges.push([prev, w.clone()]);
            prev = w;
        }
        edges.push([prev, "v".to_string()]);
    }
    DefiningGraph { vertices, edges }
}
