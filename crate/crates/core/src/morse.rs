//! Discrete Morse data on 2-complexes with horizontal cells: ascending and
//! descending links read off face corners, up-links of horizontal edges,
//! simplex recognition and an elementary-collapse search.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::complex::{Cell, Complex, Selection, SignedEdge, UnionFind};
use crate::curvature::{EdgeEnd, LinkGraph};

#[derive(Debug, Error, PartialEq)]
pub enum MorseError {
    #[error("edge {0} has slope outside -1..=1")]
    BadSlope(usize),
    #[error("face {0} is not closed under the height cocycle")]
    NotCocycle(usize),
    #[error("face {0} spans more than one slab")]
    TooTall(usize),
    #[error("center edge {0} is not horizontal")]
    NotLevel(usize),
    #[error("cell does not exist")]
    NoSuchCell,
}

/// Circle-valued height: an integer increment per edge (src to dst).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFunction {
    pub offsets: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    Horizontal,
    Spanning,
}

impl HeightFunction {
    /// Line-valued heights given per vertex.
    pub fn from_vertex_heights(c: &Complex, h: &[i64]) -> Self {
        HeightFunction {
            offsets: c.edges().iter().map(|e| h[e.dst] - h[e.src]).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        HeightFunction {
            offsets: self.offsets.iter().map(|x| -x).collect(),
        }
    }

    pub fn step(&self, s: SignedEdge) -> i64 {
        let o = self.offsets[s.edge];
        if s.forward {
            o
        } else {
            -o
        }
    }

    /// Relative levels of the corners of face `f`, starting at 0 at corner `start`.
    pub fn face_levels(&self, c: &Complex, f: usize, start: usize) -> Vec<i64> {
        let b = &c.face(f).boundary;
        let n = b.len();
        let mut lv = Vec::with_capacity(n);
        let mut h = 0;
        for k in 0..n {
            lv.push(h);
            h += self.step(b[(start + k) % n]);
        }
        lv
    }

    /// Checks slopes, the cocycle condition and the one-slab condition;
    /// returns the classification of every face.
    pub fn validate(&self, c: &Complex) -> Result<Vec<FaceKind>, MorseError> {
        for (e, &o) in self.offsets.iter().enumerate() {
            if !(-1..=1).contains(&o) {
                return Err(MorseError::BadSlope(e));
            }
        }
        let mut kinds = Vec::with_capacity(c.num_faces());
        for f in 0..c.num_faces() {
            let total: i64 = c.face(f).boundary.iter().map(|&s| self.step(s)).sum();
            if total != 0 {
                return Err(MorseError::NotCocycle(f));
            }
            let lv = self.face_levels(c, f, 0);
            let (lo, hi) = (lv.iter().min().unwrap(), lv.iter().max().unwrap());
            kinds.push(match hi - lo {
                0 => FaceKind::Horizontal,
                1 => FaceKind::Spanning,
                _ => return Err(MorseError::TooTall(f)),
            });
        }
        Ok(kinds)
    }
}

impl HeightFunction {
    /// Well-formedness for an affine height on a cube complex: no edge is
    /// level, and each square rises along one pair of opposite edges and
    /// falls back along the other. Returns the number of squares checked.
    pub fn validate_cubical(&self, c: &Complex) -> Result<usize, MorseError> {
        if let Some(e) = self.offsets.iter().position(|&o| o == 0) {
            return Err(MorseError::BadSlope(e));
        }
        self.validate_affine_cubical(c)
    }

    /// As [`Self::validate_cubical`] but level edges are allowed.
    pub fn validate_affine_cubical(&self, c: &Complex) -> Result<usize, MorseError> {
        for (e, &o) in self.offsets.iter().enumerate() {
            if !(-1..=1).contains(&o) {
                return Err(MorseError::BadSlope(e));
            }
        }
        for f in 0..c.num_faces() {
            let b = &c.face(f).boundary;
            if b.len() != 4 {
                return Err(MorseError::NotCocycle(f));
            }
            let st: Vec<i64> = b.iter().map(|&s| self.step(s)).collect();
            if st[0] != -st[2] || st[1] != -st[3] {
                return Err(MorseError::NotCocycle(f));
            }
        }
        Ok(c.num_faces())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    Vertex(usize),
    Edge(usize),
}

/// Component structure of a link graph.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LinkCensus {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub singletons: usize,
    /// Sizes of non-singleton components, with whether each is a tree.
    pub big_components: Vec<(usize, bool)>,
}

pub fn census(l: &LinkGraph) -> LinkCensus {
    let n = l.num_vertices();
    let mut uf = UnionFind::new(n);
    for &(u, v, _) in &l.edges {
        uf.union(u, v);
    }
    let (lab, comps) = uf.labels();
    let mut size = vec![0usize; comps];
    let mut edges = vec![0usize; comps];
    for &x in &lab {
        size[x] += 1;
    }
    for &(u, _, _) in &l.edges {
        edges[lab[u]] += 1;
    }
    let mut big: Vec<(usize, bool)> = (0..comps)
        .filter(|&k| size[k] > 1)
        .map(|k| (size[k], edges[k] + 1 == size[k]))
        .collect();
    big.sort_unstable();
    LinkCensus {
        vertices: n,
        edges: l.edges.len(),
        components: comps,
        singletons: (0..comps).filter(|&k| size[k] == 1 && edges[k] == 0).count(),
        big_components: big,
    }
}

/// Component label per link vertex.
pub fn component_labels(l: &LinkGraph) -> Vec<usize> {
    let mut uf = UnionFind::new(l.num_vertices());
    for &(u, v, _) in &l.edges {
        uf.union(u, v);
    }
    uf.labels().0
}

/// The part of the link of a vertex lying one level up: edge ends rising
/// from `v`, joined across every corner whose two sides both rise.
pub fn ascending_vertex_link(
    c: &Complex,
    h: &HeightFunction,
    v: usize,
) -> Result<(LinkGraph, Vec<EdgeEnd>), MorseError> {
    if v >= c.num_vertices() {
        return Err(MorseError::NoSuchCell);
    }
    let rising = |end: EdgeEnd| -> bool {
        let o = h.offsets[end.edge];
        (end.start && o == 1) || (!end.start && o == -1)
    };
    let mut g = LinkGraph::default();
    let mut ends = Vec::new();
    let mut index = BTreeMap::new();
    for (e, ed) in c.edges().iter().enumerate() {
        for (start, endpoint) in [(true, ed.src), (false, ed.dst)] {
            let end = EdgeEnd { edge: e, start };
            if endpoint == v && rising(end) {
                index.insert(end, g.add_vertex(end.label(c)));
                ends.push(end);
            }
        }
    }
    for face in c.faces() {
        let n = face.boundary.len();
        for k in 0..n {
            let s = face.boundary[k];
            if c.tail(s) != v {
                continue;
            }
            let x = EdgeEnd::arrival(face.boundary[(k + n - 1) % n]);
            let y = EdgeEnd::departure(s);
            if let (Some(&a), Some(&b)) = (index.get(&x), index.get(&y)) {
                g.add_edge(a, b, 1.0);
            }
        }
    }
    Ok((g, ends))
}

pub fn descending_vertex_link(
    c: &Complex,
    h: &HeightFunction,
    v: usize,
) -> Result<(LinkGraph, Vec<EdgeEnd>), MorseError> {
    ascending_vertex_link(c, &h.negated(), v)
}

/// Faces rising from a horizontal edge, one entry per occurrence of the edge
/// in a face boundary: `(face, position)`.
pub fn edge_up_link(
    c: &Complex,
    h: &HeightFunction,
    e: usize,
) -> Result<Vec<(usize, usize)>, MorseError> {
    if e >= c.num_edges() {
        return Err(MorseError::NoSuchCell);
    }
    if h.offsets[e] != 0 {
        return Err(MorseError::NotLevel(e));
    }
    let mut out = Vec::new();
    for (f, face) in c.faces().iter().enumerate() {
        for (k, s) in face.boundary.iter().enumerate() {
            if s.edge != e {
                continue;
            }
            let lv = h.face_levels(c, f, k);
            if lv.iter().all(|&x| x == 0 || x == 1) && lv.contains(&1) {
                out.push((f, k));
            }
        }
    }
    Ok(out)
}

pub fn ascending_link(
    c: &Complex,
    h: &HeightFunction,
    center: Center,
) -> Result<LinkGraph, MorseError> {
    match center {
        Center::Vertex(v) => Ok(ascending_vertex_link(c, h, v)?.0),
        Center::Edge(e) => {
            let mut g = LinkGraph::default();
            for (f, k) in edge_up_link(c, h, e)? {
                g.add_vertex(format!("{}@{k}", c.face(f).label));
            }
            Ok(g)
        }
    }
}

/// Whether a complex given by simplices (vertex lists, assumed closed
/// downward) is a full simplex, with its dimension. The empty complex is the
/// (−1)-simplex.
pub fn is_simplex(simplices: &[Vec<usize>]) -> (bool, i64) {
    let verts: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
    let dim = verts.len() as i64 - 1;
    if verts.is_empty() {
        return (true, -1);
    }
    let full = simplices
        .iter()
        .any(|s| s.iter().copied().collect::<BTreeSet<_>>() == verts);
    (full, dim)
}

/// AHU canonical forms of the components of a forest, sorted; `None` if some
/// component has a cycle or a repeated edge.
pub fn forest_canonical_form(l: &LinkGraph) -> Option<Vec<String>> {
    let n = l.num_vertices();
    let mut adj = vec![Vec::new(); n];
    let mut uf = UnionFind::new(n);
    for &(u, v, _) in &l.edges {
        if !uf.union(u, v) {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let (lab, comps) = uf.labels();
    let mut members = vec![Vec::new(); comps];
    for (v, &k) in lab.iter().enumerate() {
        members[k].push(v);
    }
    let mut forms: Vec<String> = members.iter().map(|m| tree_form(&adj, m)).collect();
    forms.sort();
    Some(forms)
}

fn rooted_form(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_form(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_form(adj: &[Vec<usize>], members: &[usize]) -> String {
    if members.len() == 1 {
        return "()".into();
    }
    // centers by repeated leaf stripping
    let mut deg: BTreeMap<usize, usize> = members.iter().map(|&v| (v, adj[v].len())).collect();
    let mut leaves: Vec<usize> = members.iter().copied().filter(|&v| deg[&v] <= 1).collect();
    let mut remaining = members.len();
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            deg.insert(leaf, 0);
            for &w in &adj[leaf] {
                let d = deg.get_mut(&w).unwrap();
                if *d == 0 {
                    continue;
                }
                *d -= 1;
                if *d == 1 {
                    next.push(w);
                }
            }
        }
        leaves = next;
    }
    leaves
        .iter()
        .map(|&c| rooted_form(adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Elementary collapses, in order: `(free face, coface)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CollapseSequence {
    pub steps: Vec<(Cell, Cell)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum CollapseError {
    #[error("target is not a subcomplex")]
    BadTarget,
    #[error("no collapse onto the target exists (search exhausted after {0} states)")]
    NoCollapse(usize),
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),
}

pub const COLLAPSE_BUDGET: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    vertices: Vec<bool>,
    edges: Vec<bool>,
    faces: Vec<bool>,
}

fn free_pairs(c: &Complex, s: &State, target: &Selection) -> Vec<(Cell, Cell)> {
    let mut out = Vec::new();
    // edge occurrences in remaining faces
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); c.num_edges()];
    for (f, face) in c.faces().iter().enumerate() {
        if s.faces[f] {
            for st in &face.boundary {
                occ[st.edge].push(f);
            }
        }
    }
    for e in 0..c.num_edges() {
        if s.edges[e] && !target.edges.contains(&e) && occ[e].len() == 1 {
            let f = occ[e][0];
            if !target.faces.contains(&f) {
                out.push((Cell::Edge(e), Cell::Face(f)));
            }
        }
    }
    let mut vocc: Vec<Vec<usize>> = vec![Vec::new(); c.num_vertices()];
    for (e, ed) in c.edges().iter().enumerate() {
        if s.edges[e] {
            vocc[ed.src].push(e);
            vocc[ed.dst].push(e);
        }
    }
    for v in 0..c.num_vertices() {
        if s.vertices[v] && !target.vertices.contains(&v) && vocc[v].len() == 1 {
            let e = vocc[v][0];
            if !target.edges.contains(&e) && occ[e].is_empty() {
                out.push((Cell::Vertex(v), Cell::Edge(e)));
            }
        }
    }
    out
}

fn remove(s: &mut State, cell: Cell) {
    match cell {
        Cell::Vertex(v) => s.vertices[v] = false,
        Cell::Edge(e) => s.edges[e] = false,
        Cell::Face(f) => s.faces[f] = false,
        Cell::Cube(_) => {}
    }
}

/// Searches for elementary collapses from `c` down to exactly `target`,
/// trying free faces in ascending id order (edge/face pairs before
/// vertex/edge pairs) and backtracking within `budget` states.
pub fn collapses_to(
    c: &Complex,
    target: &Selection,
    budget: usize,
) -> Result<CollapseSequence, CollapseError> {
    if c.num_cubes() > 0 || target.check_subcomplex(c).is_err() {
        return Err(CollapseError::BadTarget);
    }
    let start = State {
        vertices: vec![true; c.num_vertices()],
        edges: vec![true; c.num_edges()],
        faces: vec![true; c.num_faces()],
    };
    let done = |s: &State| {
        (0..c.num_vertices()).all(|v| s.vertices[v] == target.vertices.contains(&v))
            && (0..c.num_edges()).all(|e| s.edges[e] == target.edges.contains(&e))
            && (0..c.num_faces()).all(|f| s.faces[f] == target.faces.contains(&f))
    };
    let mut seen: HashSet<State> = HashSet::new();
    let mut path: Vec<(Cell, Cell)> = Vec::new();
    // explicit DFS stack of (state, remaining choices)
    let mut stack: Vec<(State, Vec<(Cell, Cell)>)> = Vec::new();
    let mut choices = free_pairs(c, &start, target);
    choices.reverse();
    seen.insert(start.clone());
    if done(&start) {
        return Ok(CollapseSequence::default());
    }
    stack.push((start, choices));
    while let Some((state, choices)) = stack.last_mut() {
        let Some(pair) = choices.pop() else {
            stack.pop();
            path.pop();
            continue;
        };
        let mut next = state.clone();
        remove(&mut next, pair.0);
        remove(&mut next, pair.1);
        if !seen.insert(next.clone()) {
            continue;
        }
        if seen.len() > budget {
            return Err(CollapseError::BudgetExceeded(budget));
        }
        path.push(pair);
        if done(&next) {
            return Ok(CollapseSequence { steps: path });
        }
        let mut ch = free_pairs(c, &next, target);
        ch.reverse();
        stack.push((next, ch));
    }
    Err(CollapseError::NoCollapse(seen.len()))
}

impl CollapseSequence {
    /// Replays the steps, checking each face is free when used; returns the
    /// surviving cells.
    pub fn replay(&self, c: &Complex) -> Result<Selection, String> {
        let mut s = State {
            vertices: vec![true; c.num_vertices()],
            edges: vec![true; c.num_edges()],
            faces: vec![true; c.num_faces()],
        };
        let everything = Selection::default();
        for (i, &(a, b)) in self.steps.iter().enumerate() {
            if !free_pairs(c, &s, &everything).contains(&(a, b)) {
                return Err(format!("step {i}: {a:?} is not a free face of {b:?}"));
            }
            remove(&mut s, a);
            remove(&mut s, b);
        }
        let pick = |v: &[bool]| -> BTreeSet<usize> {
            v.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect()
        };
        Ok(Selection {
            vertices: pick(&s.vertices),
            edges: pick(&s.edges),
            faces: pick(&s.faces),
            cubes: BTreeSet::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Complex {
        let mut c = Complex::new();
        for l in ["p", "q", "r"] {
            c.add_vertex(l);
        }
        c.add_edge(0, 1, "x").unwrap();
        c.add_edge(1, 2, "y").unwrap();
        c.add_edge(2, 0, "z").unwrap();
        c.add_face(
            vec![SignedEdge::fwd(0), SignedEdge::fwd(1), SignedEdge::fwd(2)],
            "T",
        )
        .unwrap();
        c
    }

    #[test]
    fn triangle_collapses_onto_two_sides() {
        let c = triangle();
        let target = Selection {
            vertices: [0, 1, 2].into(),
            edges: [0, 1].into(),
            ..Default::default()
        };
        let seq = collapses_to(&c, &target, COLLAPSE_BUDGET).unwrap();
        assert_eq!(seq.steps, vec![(Cell::Edge(2), Cell::Face(0))]);
        assert_eq!(seq.replay(&c).unwrap(), target);
        // down to a vertex takes the two further vertex/edge collapses
        let pt = Selection {
            vertices: [1].into(),
            ..Default::default()
        };
        let seq = collapses_to(&c, &pt, COLLAPSE_BUDGET).unwrap();
        assert_eq!(seq.steps.len(), 3);
    }

    #[test]
    fn nothing_collapses_to_empty() {
        let c = triangle();
        let err = collapses_to(&c, &Selection::default(), COLLAPSE_BUDGET).unwrap_err();
        assert!(matches!(err, CollapseError::NoCollapse(_)));
        assert!(matches!(
            collapses_to(&c, &Selection::default(), 2),
            Err(CollapseError::BudgetExceeded(2))
        ));
    }

    #[test]
    fn bad_target_rejected() {
        let c = triangle();
        let t = Selection {
            edges: [0].into(),
            ..Default::default()
        };
        assert_eq!(collapses_to(&c, &t, 10), Err(CollapseError::BadTarget));
    }

    #[test]
    fn simplex_recognition() {
        assert_eq!(is_simplex(&[]), (true, -1));
        assert_eq!(is_simplex(&[vec![4]]), (true, 0));
        assert!(!is_simplex(&[vec![0], vec![1]]).0);
        assert_eq!(is_simplex(&[vec![0, 1, 2], vec![0, 1]]), (true, 2));
    }

    #[test]
    fn vertical_edge_bottom_sees_one_point() {
        let mut c = Complex::new();
        c.add_vertex("lo");
        c.add_vertex("hi");
        c.add_edge(0, 1, "t").unwrap();
        let h = HeightFunction::from_vertex_heights(&c, &[0, 1]);
        let (l, _) = ascending_vertex_link(&c, &h, 0).unwrap();
        assert_eq!(l.num_vertices(), 1);
        assert_eq!(l.labels[0], "t⁻");
        assert_eq!(descending_vertex_link(&c, &h, 0).unwrap().0.num_vertices(), 0);
    }

    #[test]
    fn triangle_heights_and_up_link() {
        let c = triangle();
        // p, q at level 0, r at level 1: x horizontal at the bottom
        let h = HeightFunction::from_vertex_heights(&c, &[0, 0, 1]);
        assert_eq!(h.validate(&c).unwrap(), vec![FaceKind::Spanning]);
        assert_eq!(edge_up_link(&c, &h, 0).unwrap(), vec![(0, 0)]);
        assert!(edge_up_link(&c, &h.negated(), 0).unwrap().is_empty());
        assert_eq!(edge_up_link(&c, &h, 1), Err(MorseError::NotLevel(1)));
        let tall = HeightFunction::from_vertex_heights(&c, &[0, 1, 2]);
        assert_eq!(tall.validate(&c), Err(MorseError::BadSlope(2)));
        // a square rising twice then falling twice spans two slabs
        let mut sq = Complex::new();
        for l in ["a", "b", "c", "d"] {
            sq.add_vertex(l);
        }
        for (s, d) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            sq.add_edge(s, d, "").unwrap();
        }
        sq.add_face((0..4).map(SignedEdge::fwd).collect(), "Q").unwrap();
        let h2 = HeightFunction::from_vertex_heights(&sq, &[0, 1, 2, 1]);
        assert_eq!(h2.validate(&sq), Err(MorseError::TooTall(0)));
    }

    #[test]
    fn canonical_forms_detect_isomorphism() {
        let path = |n: usize| {
            let mut l = LinkGraph::default();
            for i in 0..n {
                l.add_vertex(i.to_string());
            }
            for i in 1..n {
                l.add_edge(i - 1, i, 1.0);
            }
            l
        };
        let mut star = LinkGraph::default();
        for i in 0..4 {
            star.add_vertex(i.to_string());
        }
        for i in 1..4 {
            star.add_edge(0, i, 1.0);
        }
        assert_ne!(forest_canonical_form(&path(4)), forest_canonical_form(&star));
        let mut rev = path(4);
        rev.edges.reverse();
        assert_eq!(forest_canonical_form(&path(4)), forest_canonical_form(&rev));
        let mut cyc = path(3);
        cyc.add_edge(2, 0, 1.0);
        assert_eq!(forest_canonical_form(&cyc), None);
        let c = census(&path(4));
        assert_eq!((c.components, c.singletons, c.big_components), (1, 0, vec![(4, true)]));
    }
}
