use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase", tag = "kind", content = "label")]
pub enum Mark {
    #[default]
    None,
    /// Ramification point of order two.
    Ramification,
    /// Wall of a reflection, shared by every polygon reflecting in it.
    Wall(String),
}

impl Mark {
    pub fn is_marked(&self) -> bool {
        !matches!(self, Mark::None)
    }

    /// Order of the local group at a vertex with this mark.
    pub fn stabilizer(&self) -> i64 {
        if self.is_marked() {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub mark: Mark,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(default)]
    pub multiplicity: u32,
}

/// Traversal of an edge in one direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub edge: String,
    #[serde(default)]
    pub reversed: bool,
}

impl Dart {
    pub fn new(edge: impl Into<String>, reversed: bool) -> Self {
        Dart { edge: edge.into(), reversed }
    }

    pub fn inverse(&self) -> Dart {
        Dart { edge: self.edge.clone(), reversed: !self.reversed }
    }
}

/// Reverse a walk given as a dart sequence.
pub fn reverse_walk(walk: &[Dart]) -> Vec<Dart> {
    walk.iter().rev().map(Dart::inverse).collect()
}

/// Finite multigraph with vertex marks and edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MarkedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl MarkedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, mark: Mark) -> &mut Self {
        self.vertices.push(Vertex { id: id.into(), mark });
        self
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        tail: impl Into<String>,
        head: impl Into<String>,
        multiplicity: u32,
    ) -> &mut Self {
        self.edges.push(Edge { id: id.into(), tail: tail.into(), head: head.into(), multiplicity });
        self
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex_index(&self) -> BTreeMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect()
    }

    pub fn edge_index(&self) -> BTreeMap<&str, usize> {
        self.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect()
    }

    pub fn mark(&self, id: &str) -> Option<&Mark> {
        self.vertex(id).map(|v| &v.mark)
    }

    /// Start and end vertex of a dart.
    pub fn dart_ends(&self, dart: &Dart) -> Option<(&str, &str)> {
        let e = self.edge(&dart.edge)?;
        Some(if dart.reversed { (e.head.as_str(), e.tail.as_str()) } else { (e.tail.as_str(), e.head.as_str()) })
    }

    /// Number of edge-ends at each vertex (loops count twice).
    pub fn valences(&self) -> BTreeMap<&str, usize> {
        let mut val: BTreeMap<&str, usize> = self.vertices.iter().map(|v| (v.id.as_str(), 0)).collect();
        for e in &self.edges {
            *val.entry(e.tail.as_str()).or_default() += 1;
            *val.entry(e.head.as_str()).or_default() += 1;
        }
        val
    }

    /// Euler characteristic of the underlying graph, marked vertices counting
    /// `1/2` (their local group has order two).
    pub fn orbifold_euler_characteristic(&self) -> num_rational::Rational64 {
        let mut chi = num_rational::Rational64::from_integer(-(self.edges.len() as i64));
        for v in &self.vertices {
            chi += num_rational::Rational64::new(1, v.mark.stabilizer());
        }
        chi
    }

    /// Connected components as sorted vertex id sets, ordered by least id.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = self.vertices.iter().map(|v| (v.id.as_str(), vec![])).collect();
        for e in &self.edges {
            adj.entry(e.tail.as_str()).or_default().push(e.head.as_str());
            adj.entry(e.head.as_str()).or_default().push(e.tail.as_str());
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in adj.keys().copied().collect::<Vec<_>>() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v.to_string());
                for &w in &adj[v] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Spanning forest by breadth-first search, each component rooted at its
    /// lexicographically least vertex, neighbours visited in edge-list order.
    /// Returns the ids of tree edges.
    pub fn spanning_forest(&self) -> BTreeSet<String> {
        let mut incident: BTreeMap<&str, Vec<(usize, &str)>> =
            self.vertices.iter().map(|v| (v.id.as_str(), vec![])).collect();
        for (i, e) in self.edges.iter().enumerate() {
            incident.entry(e.tail.as_str()).or_default().push((i, e.head.as_str()));
            incident.entry(e.head.as_str()).or_default().push((i, e.tail.as_str()));
        }
        for list in incident.values_mut() {
            list.sort_by_key(|&(i, _)| i);
        }
        let mut seen = BTreeSet::new();
        let mut tree = BTreeSet::new();
        let roots: Vec<&str> = incident.keys().copied().collect();
        for root in roots {
            if !seen.insert(root) {
                continue;
            }
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(i, w) in &incident[v] {
                    if seen.insert(w) {
                        tree.insert(self.edges[i].id.clone());
                        queue.push_back(w);
                    }
                }
            }
        }
        tree
    }

    /// First Betti number: `E - V + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// Disjoint union; ids of `other` are prefixed to stay distinct.
    pub fn disjoint_union(&self, other: &MarkedGraph, prefix_self: &str, prefix_other: &str) -> MarkedGraph {
        let mut g = MarkedGraph::new();
        for (src, p) in [(self, prefix_self), (other, prefix_other)] {
            for v in &src.vertices {
                g.add_vertex(format!("{p}{}", v.id), v.mark.clone());
            }
            for e in &src.edges {
                g.add_edge(format!("{p}{}", e.id), format!("{p}{}", e.tail), format!("{p}{}", e.head), e.multiplicity);
            }
        }
        g
    }

    /// `copies` disjoint copies, copy `k` prefixed with `"{k}:"`.
    pub fn copies(&self, copies: usize) -> MarkedGraph {
        let mut g = MarkedGraph::new();
        for k in 0..copies {
            let p = format!("{k}:");
            for v in &self.vertices {
                g.add_vertex(format!("{p}{}", v.id), v.mark.clone());
            }
            for e in &self.edges {
                g.add_edge(format!("{p}{}", e.id), format!("{p}{}", e.tail), format!("{p}{}", e.head), e.multiplicity);
            }
        }
        g
    }

    /// Graphviz rendering; vertex labels carry marks, edge labels carry
    /// multiplicities.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", escape(name));
        for v in &self.vertices {
            let label = match &v.mark {
                Mark::None => v.id.clone(),
                Mark::Ramification => format!("{} [2]", v.id),
                Mark::Wall(w) => format!("{} [wall {}]", v.id, w),
            };
            let shape = if v.mark.is_marked() { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  \"{}\" [label=\"{}\", shape={}];", escape(&v.id), escape(&label), shape);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{} x{}\"];",
                escape(&e.tail),
                escape(&e.head),
                escape(&e.id),
                e.multiplicity
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> MarkedGraph {
        let mut g = MarkedGraph::new();
        g.add_vertex("x", Mark::None).add_vertex("y", Mark::None);
        for c in ["c1", "c2", "c3"] {
            g.add_edge(c, "x", "y", 4);
        }
        g
    }

    #[test]
    fn spanning_forest_and_rank() {
        let g = theta();
        let tree = g.spanning_forest();
        assert_eq!(tree, BTreeSet::from(["c1".to_string()]));
        assert_eq!(g.cycle_rank(), 2);
        assert_eq!(g.copies(4).components().len(), 4);
        assert_eq!(g.copies(4).cycle_rank(), 8);
    }

    #[test]
    fn orbifold_euler_of_tripod() {
        let mut g = MarkedGraph::new();
        g.add_vertex("o", Mark::None);
        for v in ["1", "2", "3"] {
            g.add_vertex(format!("w{v}"), Mark::Wall(v.into()));
            g.add_edge(format!("e{v}"), format!("w{v}"), "o", 4);
        }
        assert_eq!(g.orbifold_euler_characteristic(), num_rational::Rational64::new(-1, 2));
    }

    #[test]
    fn dot_output_mentions_marks_and_multiplicities() {
        let mut g = theta();
        g.vertices[0].mark = Mark::Ramification;
        let dot = g.to_dot("theta");
        assert!(dot.contains("x [2]"));
        assert!(dot.contains("c2 x4"));
        assert!(dot.starts_with("graph \"theta\""));
    }
}
