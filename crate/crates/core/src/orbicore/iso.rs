use std::collections::{BTreeMap, BTreeSet};

use super::complex::{Orbicomplex, SegmentRef};
use super::graph::{Dart, Mark, MarkedGraph};
use super::piece::PieceType;

/// Undirected multigraph with coloured vertices and labelled edges, the
/// common currency of every isomorphism test in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub colors: Vec<String>,
    /// `adj[i][j]`: sorted labels of the edges joining `i` and `j`.
    adj: Vec<Vec<Vec<u32>>>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<String>) -> Self {
        let n = colors.len();
        ColoredGraph { colors, adj: vec![vec![Vec::new(); n]; n] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize, label: u32) {
        self.adj[a][b].push(label);
        self.adj[a][b].sort_unstable();
        if a != b {
            self.adj[b][a].push(label);
            self.adj[b][a].sort_unstable();
        }
    }

    pub fn labels(&self, a: usize, b: usize) -> &[u32] {
        &self.adj[a][b]
    }

    /// Isomorphism-invariant signature of vertex `v`.
    fn signature(&self, v: usize) -> (String, Vec<u32>, Vec<Vec<u32>>) {
        let mut nbrs: Vec<Vec<u32>> =
            (0..self.len()).filter(|&w| w != v && !self.adj[v][w].is_empty()).map(|w| self.adj[v][w].clone()).collect();
        nbrs.sort();
        (self.colors[v].clone(), self.adj[v][v].clone(), nbrs)
    }
}

/// Backtracking search for colour- and label-preserving bijections `a → b`.
/// Vertices of `a` are matched in a fixed order: each step picks the vertex
/// with the most already-matched neighbours, ties broken by fewest
/// candidates and then index. `visit` receives each complete bijection and
/// returns `true` to stop the search.
pub fn search_isomorphisms(a: &ColoredGraph, b: &ColoredGraph, mut visit: impl FnMut(&[usize]) -> bool) {
    let n = a.len();
    if n != b.len() {
        return;
    }
    let sig_a: Vec<_> = (0..n).map(|v| a.signature(v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| b.signature(v)).collect();
    let mut ms_a = sig_a.clone();
    let mut ms_b = sig_b.clone();
    ms_a.sort();
    ms_b.sort();
    if ms_a != ms_b {
        return;
    }
    let candidates: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| sig_a[v] == sig_b[w]).collect()).collect();

    // static matching order
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let linked = order.iter().filter(|&&u: &&usize| !a.adj[u][v].is_empty()).count();
                (std::cmp::Reverse(linked), candidates[v].len(), v)
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        depth: usize,
        order: &[usize],
        a: &ColoredGraph,
        b: &ColoredGraph,
        candidates: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(map);
        }
        let v = order[depth];
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| a.adj[u][v] == b.adj[map[u]][w]);
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(depth + 1, order, a, b, candidates, map, used, visit) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    go(0, &order, a, b, &candidates, &mut map, &mut used, &mut visit);
}

pub fn find_isomorphism(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<usize>> {
    let mut found = None;
    search_isomorphisms(a, b, |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

fn mark_color(m: &Mark) -> String {
    match m {
        Mark::None => String::new(),
        Mark::Ramification => "ramification".into(),
        Mark::Wall(_) => "wall".into(),
    }
}

impl MarkedGraph {
    /// Vertex-level coloured graph: edges labelled by multiplicity.
    pub fn colored(&self) -> ColoredGraph {
        let idx = self.vertex_index();
        let mut g = ColoredGraph::new(self.vertices.iter().map(|v| mark_color(&v.mark)).collect());
        for e in &self.edges {
            g.add_edge(idx[e.tail.as_str()], idx[e.head.as_str()], e.multiplicity);
        }
        g
    }

    /// Subdivided coloured graph: one extra node per edge so that bijections
    /// also match parallel edges. Edge nodes come after vertex nodes.
    pub fn colored_subdivision(&self) -> ColoredGraph {
        let idx = self.vertex_index();
        let nv = self.vertices.len();
        let mut colors: Vec<String> = self.vertices.iter().map(|v| format!("v{}", mark_color(&v.mark))).collect();
        colors.extend(self.edges.iter().map(|e| format!("e{}", e.multiplicity)));
        let mut g = ColoredGraph::new(colors);
        for (i, e) in self.edges.iter().enumerate() {
            g.add_edge(nv + i, idx[e.tail.as_str()], 1);
            g.add_edge(nv + i, idx[e.head.as_str()], 1);
        }
        g
    }
}

/// A mark- and multiplicity-preserving vertex bijection `g1 → g2`, if any.
pub fn marked_graph_isomorphism(g1: &MarkedGraph, g2: &MarkedGraph) -> Option<BTreeMap<String, String>> {
    if g1.edges.len() != g2.edges.len() {
        return None;
    }
    let m = find_isomorphism(&g1.colored(), &g2.colored())?;
    Some(g1.vertices.iter().enumerate().map(|(i, v)| (v.id.clone(), g2.vertices[m[i]].id.clone())).collect())
}

/// Suppress every unmarked valence-2 vertex whose two edge-ends lie on
/// distinct edges of equal multiplicity. Vertices are visited in id order
/// until nothing changes; a vertex carrying a loop is kept.
pub fn topological_form(g: &MarkedGraph) -> MarkedGraph {
    let mut g = g.clone();
    loop {
        let val = g.valences();
        let target = g
            .vertices
            .iter()
            .filter(|v| !v.mark.is_marked() && val.get(v.id.as_str()) == Some(&2))
            .map(|v| v.id.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .find(|v| {
                let inc: Vec<_> = g.edges.iter().filter(|e| &e.tail == v || &e.head == v).collect();
                inc.len() == 2 && inc[0].multiplicity == inc[1].multiplicity
            });
        let Some(v) = target else { return g };
        let inc: Vec<usize> =
            g.edges.iter().enumerate().filter(|(_, e)| e.tail == v || e.head == v).map(|(i, _)| i).collect();
        let (e, f) = (g.edges[inc[0]].clone(), g.edges[inc[1]].clone());
        let a = if e.tail == v { e.head.clone() } else { e.tail.clone() };
        let b = if f.tail == v { f.head.clone() } else { f.tail.clone() };
        g.edges.remove(inc[1]);
        g.edges[inc[0]] =
            super::graph::Edge { id: format!("{}|{}", e.id, f.id), tail: a, head: b, multiplicity: e.multiplicity };
        g.vertices.retain(|x| x.id != v);
    }
}

/// Cyclic boundary tokens of a circle under an edge bijection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Token {
    Mirror,
    Loose,
    Glued(Dart),
}

fn canonical_tokens(tokens: &[Token]) -> Vec<Token> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let reversed: Vec<Token> = tokens
        .iter()
        .rev()
        .map(|t| match t {
            Token::Glued(d) => Token::Glued(d.inverse()),
            other => other.clone(),
        })
        .collect();
    let mut best: Option<Vec<Token>> = None;
    for w in [tokens.to_vec(), reversed] {
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

fn piece_keys(c: &Orbicomplex, edge_image: &dyn Fn(&Dart) -> Dart) -> Vec<(PieceType, Vec<Vec<Token>>)> {
    let att = c.attachment_map();
    let mut keys: Vec<_> = c
        .pieces
        .iter()
        .enumerate()
        .map(|(p, piece)| {
            let mut circles: Vec<Vec<Token>> = piece
                .boundary
                .iter()
                .enumerate()
                .map(|(ci, circle)| {
                    let toks: Vec<Token> = (0..circle.len())
                        .map(|s| {
                            if circle.segments[s].is_mirror() {
                                Token::Mirror
                            } else {
                                match att.get(&SegmentRef::new(p, ci, s)) {
                                    Some(d) => Token::Glued(edge_image(d)),
                                    None => Token::Loose,
                                }
                            }
                        })
                        .collect();
                    canonical_tokens(&toks)
                })
                .collect();
            circles.sort();
            (piece.piece_type(), circles)
        })
        .collect();
    keys.sort();
    keys
}

/// Whether two complexes are isomorphic: a graph isomorphism (with edge
/// correspondence) carrying the pieces of `a`, with their attaching walks,
/// onto those of `b`.
pub fn complex_isomorphism(a: &Orbicomplex, b: &Orbicomplex) -> bool {
    if a.census() != b.census() || a.graph.edges.len() != b.graph.edges.len() {
        return false;
    }
    let target = piece_keys(b, &|d| d.clone());
    let sa = a.graph.colored_subdivision();
    let sb = b.graph.colored_subdivision();
    let nv = a.graph.vertices.len();
    let mut ok = false;
    search_isomorphisms(&sa, &sb, |m| {
        let vmap: Vec<&str> = (0..nv).map(|i| b.graph.vertices[m[i]].id.as_str()).collect();
        let vidx = a.graph.vertex_index();
        let image = |d: &Dart| -> Dart {
            let i = a.graph.edges.iter().position(|e| e.id == d.edge).expect("edge exists");
            let e = &a.graph.edges[i];
            let f = &b.graph.edges[m[nv + i] - nv];
            let forward = f.tail == vmap[vidx[e.tail.as_str()]];
            Dart::new(f.id.clone(), d.reversed ^ !forward)
        };
        if piece_keys(a, &image) == target {
            ok = true;
        }
        ok
    });
    ok
}
