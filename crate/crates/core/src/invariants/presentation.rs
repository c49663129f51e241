use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::coxeter::{GroupPresentation, Letter, Word};
use crate::error::{Error, Result};
use crate::orbicore::{Dart, Junction, Mark, Orbicomplex, SegmentRef};

/// A place where a piece meets the attaching graph: a whole boundary circle
/// or a maximal run of attached segments.
struct Contact {
    piece: usize,
    circle: usize,
    first: usize,
    darts: Vec<Dart>,
    closed: bool,
}

fn contacts(c: &Orbicomplex) -> Vec<Contact> {
    let att = c.attachment_map();
    let mut out = Vec::new();
    for (p, piece) in c.pieces.iter().enumerate() {
        for (ci, circle) in piece.boundary.iter().enumerate() {
            let n = circle.len();
            let is_att: Vec<bool> = (0..n).map(|s| att.contains_key(&SegmentRef::new(p, ci, s))).collect();
            if is_att.iter().all(|&a| a) {
                let darts = (0..n).map(|s| att[&SegmentRef::new(p, ci, s)].clone()).collect();
                out.push(Contact { piece: p, circle: ci, first: 0, darts, closed: true });
                continue;
            }
            for s in 0..n {
                if is_att[s] && !is_att[(s + n - 1) % n] {
                    let mut darts = Vec::new();
                    let mut k = s;
                    while is_att[k] {
                        darts.push(att[&SegmentRef::new(p, ci, k)].clone());
                        k = (k + 1) % n;
                    }
                    out.push(Contact { piece: p, circle: ci, first: s, darts, closed: false });
                }
            }
        }
    }
    out
}

fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|(g, e)| (g.clone(), -e)).collect()
}

/// Cancel adjacent inverse letters.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::new();
    for (g, e) in w {
        if out.last().is_some_and(|(h, f)| h == g && *f == -e) {
            out.pop();
        } else {
            out.push((g.clone(), *e));
        }
    }
    out
}

fn conjugate(by: &[Letter], x: &[Letter]) -> Word {
    free_reduce(&[by, x, &inverse(by)].concat())
}

fn commutator(a: &str, b: &str) -> Word {
    vec![(a.into(), 1), (b.into(), 1), (a.into(), -1), (b.into(), -1)]
}

/// Presentation of the orbifold fundamental group by van Kampen over a
/// breadth-first spanning tree of the incidence graph whose nodes are graph
/// vertices and pieces, and whose edges are graph edges and contacts.
/// Generators: edges and contacts off the tree, one reflection per wall
/// label, and per piece its mirrors, cones, handles and the boundary
/// circles not closed up by a contact.
pub fn fundamental_group_presentation(c: &Orbicomplex) -> Result<GroupPresentation> {
    c.require_valid()?;
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let contacts = contacts(c);
    let nv = c.graph.vertices.len();
    let vidx = c.graph.vertex_index();
    // incidence graph: graph edges first, then contacts (piece -> start vertex)
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for e in &c.graph.edges {
        ends.push((vidx[e.tail.as_str()], vidx[e.head.as_str()]));
    }
    for k in &contacts {
        let (start, _) = c.graph.dart_ends(&k.darts[0]).expect("valid attachment");
        ends.push((nv + k.piece, vidx[start]));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv + c.pieces.len()];
    for (i, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(i);
        if b != a {
            incident[b].push(i);
        }
    }
    let root = (0..nv).min_by_key(|&i| &c.graph.vertices[i].id).unwrap_or(nv);
    let mut seen = vec![false; nv + c.pieces.len()];
    let mut tree = BTreeSet::new();
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &i in &incident[x] {
            let (a, b) = ends[i];
            let y = if a == x { b } else { a };
            if !seen[y] {
                seen[y] = true;
                tree.insert(i);
                queue.push_back(y);
            }
        }
    }

    let mut gens: Vec<String> = Vec::new();
    let mut rels: Vec<Word> = Vec::new();
    let edge_gen: BTreeMap<&str, bool> =
        c.graph.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), !tree.contains(&i))).collect();
    for e in &c.graph.edges {
        if edge_gen[e.id.as_str()] {
            gens.push(e.id.clone());
        }
    }
    let contact_gen = |k: usize| format!("t{}.{}.{}", contacts[k].piece, contacts[k].circle, contacts[k].first);
    for k in 0..contacts.len() {
        if !tree.contains(&(c.graph.edges.len() + k)) {
            gens.push(contact_gen(k));
        }
    }
    let walk_word = |w: &[Dart]| -> Word {
        w.iter()
            .filter(|d| edge_gen[d.edge.as_str()])
            .map(|d| (d.edge.clone(), if d.reversed { -1 } else { 1 }))
            .collect()
    };
    let contact_word = |k: usize| -> Word {
        if tree.contains(&(c.graph.edges.len() + k)) {
            Vec::new()
        } else {
            vec![(contact_gen(k), 1)]
        }
    };

    let mut walls: BTreeSet<String> = BTreeSet::new();
    for v in &c.graph.vertices {
        match &v.mark {
            Mark::Wall(l) => {
                walls.insert(l.clone());
            }
            Mark::Ramification => {
                gens.push(format!("r:{}", v.id));
                rels.push(vec![(format!("r:{}", v.id), 2)]);
            }
            Mark::None => {}
        }
    }
    let wall_gen = |l: &str| format!("w:{l}");
    for l in &walls {
        gens.push(wall_gen(l));
        rels.push(vec![(wall_gen(l), 2)]);
    }

    for (p, piece) in c.pieces.iter().enumerate() {
        let mirror_gen = |ci: usize, s: usize| format!("s{p}.{ci}.{s}");
        for (ci, circle) in piece.boundary.iter().enumerate() {
            for s in 0..circle.len() {
                if circle.segments[s].is_mirror() {
                    gens.push(mirror_gen(ci, s));
                    rels.push(vec![(mirror_gen(ci, s), 2)]);
                }
            }
            for j in 0..circle.len() {
                if circle.junction(j) == Junction::Corner {
                    let (a, b) = (mirror_gen(ci, j), mirror_gen(ci, circle.next(j)));
                    rels.push(vec![(a.clone(), 1), (b.clone(), 1), (a, 1), (b, 1)]);
                }
            }
        }
        let cone_gens: Vec<String> = (0..piece.cones.len()).map(|k| format!("x{p}.{k}")).collect();
        for (x, &m) in cone_gens.iter().zip(&piece.cones) {
            gens.push(x.clone());
            rels.push(vec![(x.clone(), m as i32)]);
        }
        if piece.has_mirrors() {
            // reflection junctions at the ends of each contact
            for (k, ct) in contacts.iter().enumerate().filter(|(_, ct)| ct.piece == p) {
                let circle = &piece.boundary[ct.circle];
                let n = circle.len();
                let before = (ct.first + n - 1) % n;
                let last = (ct.first + ct.darts.len() - 1) % n;
                let mut link = contact_word(k);
                let at_start = link.clone();
                link.extend(walk_word(&ct.darts));
                for (junction, mirror, path) in [(before, before, at_start), (last, circle.next(last), link)] {
                    if circle.junction(junction) != Junction::Reflection || !circle.segments[mirror].is_mirror() {
                        continue;
                    }
                    let Some(v) = c.junction_vertex(p, ct.circle, junction) else { continue };
                    let Some(Mark::Wall(l)) = c.graph.mark(&v) else { continue };
                    let mut r = vec![(mirror_gen(ct.circle, mirror), 1)];
                    r.extend(inverse(&conjugate(&path, &[(wall_gen(l), 1)])));
                    rels.push(free_reduce(&r));
                }
            }
            continue;
        }
        // surface relation: product of commutators, cones and boundary
        // circles is trivial
        let mut rel: Word = Vec::new();
        for h in 0..piece.genus {
            let (a, b) = (format!("a{p}.{h}"), format!("b{p}.{h}"));
            gens.push(a.clone());
            gens.push(b.clone());
            rel.extend(commutator(&a, &b));
        }
        rel.extend(cone_gens.iter().map(|x| (x.clone(), 1)));
        for ci in 0..piece.boundary.len() {
            let closed = contacts.iter().position(|ct| ct.piece == p && ct.circle == ci && ct.closed);
            match closed {
                Some(k) => rel.extend(conjugate(&contact_word(k), &walk_word(&contacts[k].darts))),
                None => {
                    let g = format!("c{p}.{ci}");
                    gens.push(g.clone());
                    rel.push((g, 1));
                }
            }
        }
        rels.push(free_reduce(&rel));
    }
    Ok(GroupPresentation { generators: gens, relators: rels })
}

/// Remove generators that some relator sets equal to the identity on its
/// own, together with those relators.
pub fn simplify_presentation(p: &GroupPresentation) -> GroupPresentation {
    let mut p = p.clone();
    loop {
        let trivial = p.relators.iter().find_map(|r| match r.as_slice() {
            [(g, e)] if e.abs() == 1 => Some(g.clone()),
            _ => None,
        });
        let Some(g) = trivial else { return p };
        p.generators.retain(|x| *x != g);
        p.relators = p
            .relators
            .iter()
            .map(|r| free_reduce(&r.iter().filter(|(x, _)| *x != g).cloned().collect::<Vec<_>>()))
            .filter(|r| !r.is_empty())
            .collect();
    }
}
