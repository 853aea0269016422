//! Permutation voltages on edges, the covers they define, branched
//! completion over a full subcomplex, and lifting of automorphisms.
//!
//! A voltage `g` on an edge sends the sheet `s` over its source to the sheet
//! `g(s)` over its target; along a path the voltages act left to right.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    Cell, CellMap, Complex, ComplexError, EdgeImage, EdgePath, Induced, Selection, SignedEdge,
    UnionFind,
};
use crate::perm::{Perm, PermError, PermGroup};
use crate::pi1::{pi1_generators_with, SpanningTreeGens};

#[derive(Debug, Error, PartialEq)]
pub enum VoltageError {
    #[error("voltage on edge {edge} has degree {found}, expected {expected}")]
    Degree {
        edge: usize,
        found: usize,
        expected: usize,
    },
    #[error("edge {0} is outside the voltage domain")]
    OutsideDomain(usize),
    #[error("path is not a valid edge path")]
    BadPath,
    #[error("propagation stalled with {0} edges undetermined")]
    Stalled(usize),
    #[error("boundary holonomy of face {0} is not the identity")]
    NotFlat(usize),
    #[error("lift obstruction at cover vertex {0}")]
    LiftObstruction(usize),
    #[error("automorphism does not fix the base vertex")]
    BaseNotFixed,
    #[error("branch cell {0:?}: {1}")]
    Meridian(Cell, String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// One permutation per edge, plus the tree on which the gauge is trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    pub degree: usize,
    pub voltages: Vec<Perm>,
    pub tree: BTreeSet<usize>,
    inverses: Vec<Perm>,
}

impl VoltageAssignment {
    pub fn new(degree: usize, voltages: Vec<Perm>, tree: BTreeSet<usize>) -> Result<Self, VoltageError> {
        for (e, p) in voltages.iter().enumerate() {
            if p.degree() != degree {
                return Err(VoltageError::Degree {
                    edge: e,
                    found: p.degree(),
                    expected: degree,
                });
            }
        }
        let inverses = voltages.iter().map(Perm::inverse).collect();
        Ok(VoltageAssignment {
            degree,
            voltages,
            tree,
            inverses,
        })
    }

    pub fn trivial(c: &Complex, degree: usize) -> Self {
        Self::new(degree, vec![Perm::identity(degree); c.num_edges()], BTreeSet::new()).unwrap()
    }

    pub fn step(&self, s: SignedEdge) -> &Perm {
        if s.forward {
            &self.voltages[s.edge]
        } else {
            &self.inverses[s.edge]
        }
    }

    /// Sheet (one-based) after crossing `s`.
    #[inline]
    pub fn transport(&self, s: SignedEdge, sheet: usize) -> usize {
        self.step(s).apply0(sheet - 1) + 1
    }

    pub fn holonomy_steps(&self, steps: &[SignedEdge]) -> Result<Perm, VoltageError> {
        let mut acc = Perm::identity(self.degree);
        for s in steps {
            if s.edge >= self.voltages.len() {
                return Err(VoltageError::OutsideDomain(s.edge));
            }
            acc = acc.then(self.step(*s));
        }
        Ok(acc)
    }

    /// Left-to-right product of the voltages along a valid path.
    pub fn holonomy(&self, c: &Complex, p: &EdgePath) -> Result<Perm, VoltageError> {
        if let Some(s) = p.steps.iter().find(|s| s.edge >= self.voltages.len()) {
            return Err(VoltageError::OutsideDomain(s.edge));
        }
        p.validate(c).map_err(|_| VoltageError::BadPath)?;
        self.holonomy_steps(&p.steps)
    }

    pub fn non_flat_faces(&self, c: &Complex) -> Vec<usize> {
        (0..c.num_faces())
            .filter(|&f| {
                !self
                    .holonomy_steps(&c.face(f).boundary)
                    .map(|p| p.is_identity())
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Voltages pulled back along a cellular map (collapsed edges get the
    /// identity).
    pub fn pullback(&self, m: &CellMap) -> VoltageAssignment {
        let v = m
            .edge_map
            .iter()
            .map(|img| match img {
                EdgeImage::Collapsed(_) => Perm::identity(self.degree),
                EdgeImage::Edge(s) => self.step(*s).clone(),
            })
            .collect();
        VoltageAssignment::new(self.degree, v, BTreeSet::new()).unwrap()
    }

    pub fn as_map(&self) -> BTreeMap<usize, Perm> {
        self.voltages.iter().cloned().enumerate().collect()
    }
}

/// Componentwise product action of several assignments on the product of
/// their sheet sets (first factor most significant).
pub fn product_voltages(factors: &[&VoltageAssignment]) -> VoltageAssignment {
    let ne = factors[0].voltages.len();
    let degree = factors.iter().map(|f| f.degree).product();
    let v = (0..ne)
        .map(|e| {
            let ps: Vec<&Perm> = factors.iter().map(|f| &f.voltages[e]).collect();
            crate::perm::product_action(&ps)
        })
        .collect();
    VoltageAssignment::new(degree, v, BTreeSet::new()).unwrap()
}

/// Face-propagation order for [`voltage_complete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Extends seed voltages to all of `c`: a maximal forest of seeded edges
/// with identity voltage is forced into a spanning tree whose other edges get the identity, then
/// each face with a single undetermined edge fixes that edge. Every face is
/// checked flat at the end.
pub fn voltage_complete(
    c: &Complex,
    seed: &BTreeMap<usize, Perm>,
    degree: usize,
    base: usize,
    order: Order,
) -> Result<VoltageAssignment, VoltageError> {
    for (&e, p) in seed {
        if e >= c.num_edges() {
            return Err(VoltageError::OutsideDomain(e));
        }
        if p.degree() != degree {
            return Err(VoltageError::Degree {
                edge: e,
                found: p.degree(),
                expected: degree,
            });
        }
    }
    let mut uf = UnionFind::new(c.num_vertices());
    let forced: Vec<usize> = seed
        .iter()
        .filter(|(&e, p)| p.is_identity() && uf.union(c.edge(e).src, c.edge(e).dst))
        .map(|(&e, _)| e)
        .collect();
    let gens = pi1_generators_with(c, base, &forced)?;
    let mut known: Vec<Option<Perm>> = vec![None; c.num_edges()];
    for (&e, p) in seed {
        known[e] = Some(p.clone());
    }
    for &e in &gens.tree_edges {
        known[e].get_or_insert_with(|| Perm::identity(degree));
    }
    let faces: Vec<usize> = match order {
        Order::Ascending => (0..c.num_faces()).collect(),
        Order::Descending => (0..c.num_faces()).rev().collect(),
    };
    loop {
        let mut progress = false;
        for &f in &faces {
            let b = &c.face(f).boundary;
            let unknown: Vec<usize> = (0..b.len()).filter(|&k| known[b[k].edge].is_none()).collect();
            if unknown.len() != 1 {
                continue;
            }
            let k = unknown[0];
            let step = |s: &SignedEdge| {
                let p = known[s.edge].as_ref().unwrap();
                if s.forward {
                    p.clone()
                } else {
                    p.inverse()
                }
            };
            let before = b[..k].iter().fold(Perm::identity(degree), |a, s| a.then(&step(s)));
            let after = b[k + 1..].iter().fold(Perm::identity(degree), |a, s| a.then(&step(s)));
            // before · x · after = 1
            let x = before.inverse().then(&after.inverse());
            known[b[k].edge] = Some(if b[k].forward { x } else { x.inverse() });
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let missing = known.iter().filter(|k| k.is_none()).count();
    if missing > 0 {
        return Err(VoltageError::Stalled(missing));
    }
    let v = VoltageAssignment::new(
        degree,
        known.into_iter().map(Option::unwrap).collect(),
        gens.tree_edges.clone(),
    )?;
    if let Some(&f) = v.non_flat_faces(c).first() {
        return Err(VoltageError::NotFlat(f));
    }
    Ok(v)
}

/// Holonomies of the generator loops of a spanning tree.
pub fn generator_holonomies(
    c: &Complex,
    v: &VoltageAssignment,
    gens: &SpanningTreeGens,
) -> Result<Vec<Perm>, VoltageError> {
    gens.loops.iter().map(|l| v.holonomy(c, l)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub orbit_size: usize,
}

/// Orbit of the base sheet under the monodromy group.
pub fn cover_connected(
    c: &Complex,
    v: &VoltageAssignment,
    gens: &SpanningTreeGens,
    sheet: usize,
) -> Result<Connectivity, VoltageError> {
    let g = PermGroup::new(v.degree, generator_holonomies(c, v, gens)?)?;
    let orbit = g.orbit(sheet)?.len();
    Ok(Connectivity {
        connected: orbit == v.degree,
        orbit_size: orbit,
    })
}

/// The unbranched cover: the lift of a cell at sheet `s` has id
/// `cell·N + s − 1`, where `s` is the sheet over the cell's reference vertex
/// (edge source, tail of the first boundary step, or that of the first face
/// of a cube).
#[derive(Debug, Clone)]
pub struct CoverComplex {
    pub degree: usize,
    pub complex: Complex,
}

impl CoverComplex {
    pub fn base_of(&self, id: usize) -> usize {
        id / self.degree
    }

    pub fn sheet_of(&self, id: usize) -> usize {
        id % self.degree + 1
    }

    pub fn lift_id(&self, base: usize, sheet: usize) -> usize {
        base * self.degree + sheet - 1
    }
}

fn lift_steps(v: &VoltageAssignment, steps: &[SignedEdge], sheet: usize) -> Vec<SignedEdge> {
    let n = v.degree;
    let mut cur = sheet;
    steps
        .iter()
        .map(|s| {
            let at_src = if s.forward { cur } else { v.transport(*s, cur) };
            let next = v.transport(*s, cur);
            cur = next;
            SignedEdge {
                edge: s.edge * n + at_src - 1,
                forward: s.forward,
            }
        })
        .collect()
}

/// Sheet transport from `from` to every vertex reachable inside `edges`.
fn transports(
    c: &Complex,
    v: &VoltageAssignment,
    from: usize,
    edges: &BTreeSet<usize>,
) -> BTreeMap<usize, Perm> {
    let mut out = BTreeMap::new();
    out.insert(from, Perm::identity(v.degree));
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &e in edges {
            let ed = c.edge(e);
            for s in [SignedEdge::fwd(e), SignedEdge::bwd(e)] {
                let (a, b) = if s.forward { (ed.src, ed.dst) } else { (ed.dst, ed.src) };
                if a == x && !out.contains_key(&b) {
                    let p = out[&x].then(v.step(s));
                    out.insert(b, p);
                    queue.push_back(b);
                }
            }
        }
    }
    out
}

pub fn build_cover(c: &Complex, v: &VoltageAssignment) -> Result<CoverComplex, VoltageError> {
    let n = v.degree;
    if v.voltages.len() != c.num_edges() {
        return Err(VoltageError::OutsideDomain(v.voltages.len().min(c.num_edges())));
    }
    let mut out = Complex::new();
    for x in 0..c.num_vertices() {
        for s in 1..=n {
            out.add_vertex(format!("{}#{s}", c.vertex_label(x)));
        }
    }
    for (e, ed) in c.edges().iter().enumerate() {
        for s in 1..=n {
            let t = v.transport(SignedEdge::fwd(e), s);
            out.add_edge(ed.src * n + s - 1, ed.dst * n + t - 1, format!("{}#{s}", ed.label))?;
        }
    }
    for (f, face) in c.faces().iter().enumerate() {
        if !v.holonomy_steps(&face.boundary)?.is_identity() {
            return Err(VoltageError::NotFlat(f));
        }
        for s in 1..=n {
            out.add_face(lift_steps(v, &face.boundary, s), format!("{}#{s}", face.label))?;
        }
    }
    for k in 0..c.num_cubes() {
        let cube = c.cube(k);
        let r = c.tail(c.face(cube.faces[0]).boundary[0]);
        let tr = transports(c, v, r, &c.cube_edges(k));
        for s in 1..=n {
            let mut fs = [0usize; 6];
            for (i, &f) in cube.faces.iter().enumerate() {
                let start = c.tail(c.face(f).boundary[0]);
                fs[i] = f * n + tr[&start].apply(s) - 1;
            }
            out.add_cube(fs, format!("{}#{s}", cube.label))?;
        }
    }
    Ok(CoverComplex {
        degree: n,
        complex: out,
    })
}

/// Lift of an automorphism of the base fixing `base`, chosen to fix the
/// sheet `sheet` over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<SignedEdge>,
    /// Permutation of the fiber over the base vertex.
    pub fiber: Perm,
}

impl LiftedMap {
    pub fn then(&self, next: &LiftedMap) -> LiftedMap {
        LiftedMap {
            vertex_map: self.vertex_map.iter().map(|&x| next.vertex_map[x]).collect(),
            edge_map: self
                .edge_map
                .iter()
                .map(|s| {
                    let t = next.edge_map[s.edge];
                    if s.forward {
                        t
                    } else {
                        t.reversed()
                    }
                })
                .collect(),
            fiber: self.fiber.then(&next.fiber),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &x)| i == x)
            && self
                .edge_map
                .iter()
                .enumerate()
                .all(|(i, s)| *s == SignedEdge::fwd(i))
    }
}

/// Path lifting from the fixed sheet: each cover edge out of an already
/// mapped vertex is sent to the lift of its image starting at the image of
/// its source. Fails if two routes disagree or the map collapses an edge.
pub fn lift_automorphism(
    c: &Complex,
    v: &VoltageAssignment,
    cover: &CoverComplex,
    auto: &CellMap,
    base: usize,
    sheet: usize,
) -> Result<LiftedMap, VoltageError> {
    let n = v.degree;
    auto.check_cellular(c, c)?;
    if auto.vertex_map[base] != base {
        return Err(VoltageError::BaseNotFixed);
    }
    let cc = &cover.complex;
    let mut vmap: Vec<Option<usize>> = vec![None; cc.num_vertices()];
    let mut emap: Vec<Option<SignedEdge>> = vec![None; cc.num_edges()];
    let start = base * n + sheet - 1;
    vmap[start] = Some(start);
    let incident = cc.vertex_edges();
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let y = vmap[x].unwrap();
        for &s in &incident[x] {
            let be = s.edge / n;
            let img = match auto.edge_map[be] {
                EdgeImage::Edge(t) => {
                    if s.forward {
                        t
                    } else {
                        t.reversed()
                    }
                }
                EdgeImage::Collapsed(_) => return Err(VoltageError::LiftObstruction(x)),
            };
            // lift of `img` leaving the cover vertex `y`
            let ys = y % n + 1;
            let at_src = if img.forward { ys } else { v.transport(img, ys) };
            let lifted = SignedEdge {
                edge: img.edge * n + at_src - 1,
                forward: img.forward,
            };
            let z = cc.head(lifted);
            let x2 = cc.head(s);
            let as_edge = if s.forward { lifted } else { lifted.reversed() };
            match emap[s.edge] {
                Some(old) if old != as_edge => return Err(VoltageError::LiftObstruction(x)),
                _ => emap[s.edge] = Some(as_edge),
            }
            match vmap[x2] {
                Some(old) if old != z => return Err(VoltageError::LiftObstruction(x2)),
                Some(_) => {}
                None => {
                    vmap[x2] = Some(z);
                    queue.push_back(x2);
                }
            }
        }
    }
    if let Some(x) = vmap.iter().position(Option::is_none) {
        return Err(VoltageError::LiftObstruction(x));
    }
    let vertex_map: Vec<usize> = vmap.into_iter().map(Option::unwrap).collect();
    let fiber: Vec<usize> = (0..n).map(|s| vertex_map[base * n + s] % n + 1).collect();
    Ok(LiftedMap {
        edge_map: emap.into_iter().map(|e| e.unwrap()).collect(),
        fiber: Perm::from_images(&fiber)?,
        vertex_map,
    })
}

/// Per-cell data of a branched completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCell {
    pub dim: usize,
    pub cell: usize,
    /// Loops generating the local monodromy.
    pub local_generators: usize,
    /// Orbits of the local monodromy group on the fiber.
    pub orbits: usize,
    /// Components of the lifted cofaces.
    pub lifts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCompletionCensus {
    pub degree: usize,
    pub cells: Vec<BranchCell>,
    pub chi_base: i64,
    /// `N·χ(base)` minus `(−1)^dim (N − orbits)` over the branch cells.
    pub chi_census: i64,
    /// From the cell counts of the assembled complex.
    pub chi_direct: i64,
}

impl BranchCompletionCensus {
    pub fn agrees(&self) -> bool {
        self.cells.iter().all(|b| b.orbits == b.lifts) && self.chi_census == self.chi_direct
    }
}

/// A branched cover over a full subcomplex `locus` of `c`, with voltages on
/// the complement `k` of its open star.
#[derive(Debug, Clone)]
pub struct BranchedCover {
    pub complex: Complex,
    pub census: BranchCompletionCensus,
    /// Base vertex of each vertex of the branched cover.
    pub vertex_base: Vec<usize>,
}

struct Branching<'a> {
    c: &'a Complex,
    locus: &'a Selection,
    k: &'a Induced,
    v: &'a VoltageAssignment,
}

impl Branching<'_> {
    fn in_locus(&self, cell: Cell) -> bool {
        self.locus.contains(cell)
    }

    fn reference(&self, cell: Cell) -> Option<usize> {
        self.c
            .cell_vertices(cell)
            .into_iter()
            .find(|x| !self.locus.vertices.contains(x))
    }

    fn closure_edges(&self, cell: Cell) -> BTreeSet<usize> {
        match cell {
            Cell::Vertex(_) => BTreeSet::new(),
            Cell::Edge(e) => BTreeSet::from([e]),
            Cell::Face(f) => self.c.face(f).boundary.iter().map(|s| s.edge).collect(),
            Cell::Cube(q) => self.c.cube_edges(q),
        }
    }

    /// Transport inside the closure of `cell`, avoiding the locus, from its
    /// reference vertex; keyed by parent vertex id.
    fn cell_transport(&self, cell: Cell) -> BTreeMap<usize, Perm> {
        let r = self.reference(cell).expect("cell outside a full locus");
        let edges: BTreeSet<usize> = self
            .closure_edges(cell)
            .into_iter()
            .filter_map(|e| self.k.edge_from_parent.get(&e).copied())
            .collect();
        transports(&self.k.complex, self.v, self.k.vertex_from_parent[&r], &edges)
            .into_iter()
            .map(|(x, p)| (self.k.vertex_to_parent[x], p))
            .collect()
    }

    fn facets(&self, cell: Cell) -> Vec<Cell> {
        match cell {
            Cell::Vertex(_) => vec![],
            Cell::Edge(e) => vec![Cell::Vertex(self.c.edge(e).src), Cell::Vertex(self.c.edge(e).dst)],
            Cell::Face(f) => {
                let mut v: Vec<Cell> = self.c.face(f).boundary.iter().map(|s| Cell::Edge(s.edge)).collect();
                v.dedup();
                v
            }
            Cell::Cube(q) => self.c.cube(q).faces.iter().map(|&f| Cell::Face(f)).collect(),
        }
    }

    fn all_cells(&self) -> Vec<Cell> {
        let c = self.c;
        (0..c.num_vertices())
            .map(Cell::Vertex)
            .chain((0..c.num_edges()).map(Cell::Edge))
            .chain((0..c.num_faces()).map(Cell::Face))
            .chain((0..c.num_cubes()).map(Cell::Cube))
            .collect()
    }
}

/// Lifts of a branch cell as components of its lifted cofaces; returns the
/// component of each `(coface, sheet)` and the count.
fn coface_components(
    b: &Branching,
    sigma: Cell,
    cofaces: &[Cell],
    transport: &BTreeMap<Cell, BTreeMap<usize, Perm>>,
) -> (BTreeMap<(Cell, usize), usize>, usize) {
    let n = b.v.degree;
    let idx: BTreeMap<Cell, usize> = cofaces.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut uf = UnionFind::new(cofaces.len() * n);
    for (i2, &t2) in cofaces.iter().enumerate() {
        for t1 in b.facets(t2) {
            let Some(&i1) = idx.get(&t1) else { continue };
            let r1 = b.reference(t1).unwrap();
            let p = &transport[&t2][&r1];
            for s in 0..n {
                uf.union(i2 * n + s, i1 * n + p.apply0(s));
            }
        }
    }
    let _ = sigma;
    let (labels, count) = uf.labels();
    let mut out = BTreeMap::new();
    for (i, &t) in cofaces.iter().enumerate() {
        for s in 1..=n {
            out.insert((t, s), labels[i * n + s - 1]);
        }
    }
    (out, count)
}

/// Local monodromy of a branch cell: holonomies of a cycle basis of the
/// graph of complement edges in its closed star.
fn local_monodromy(b: &Branching, sigma: Cell, cofaces: &[Cell]) -> Result<Vec<Perm>, VoltageError> {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &t in cofaces {
        for x in b.c.cell_vertices(t) {
            if let Some(&kx) = b.k.vertex_from_parent.get(&x) {
                verts.insert(kx);
            }
        }
        for e in b.closure_edges(t) {
            if let Some(&ke) = b.k.edge_from_parent.get(&e) {
                edges.insert(ke);
            }
        }
    }
    let Some(&root) = verts.iter().next() else {
        return Err(VoltageError::Meridian(sigma, "empty punctured star".into()));
    };
    let kc = &b.k.complex;
    let tr = transports(kc, b.v, root, &edges);
    if tr.len() != verts.len() {
        return Err(VoltageError::Meridian(sigma, "punctured star is disconnected".into()));
    }
    Ok(edges
        .iter()
        .map(|&e| {
            let ed = kc.edge(e);
            tr[&ed.src].then(&b.v.voltages[e]).then(&tr[&ed.dst].inverse())
        })
        .filter(|p| !p.is_identity())
        .collect())
}

/// Completes the cover of `c − locus` defined by `v` (on the complement
/// complex `k`) over the locus, computing the lifts of each branch cell both
/// as monodromy orbits and as components of lifted cofaces, and assembling
/// the completed complex.
pub fn branched_completion(
    c: &Complex,
    locus: &Selection,
    k: &Induced,
    v: &VoltageAssignment,
) -> Result<BranchedCover, VoltageError> {
    if !locus.is_full(c) {
        return Err(ComplexError::NotSubcomplex("locus is not full".into()).into());
    }
    let n = v.degree;
    let b = Branching { c, locus, k, v };
    let cells = b.all_cells();
    let mut transport: BTreeMap<Cell, BTreeMap<usize, Perm>> = BTreeMap::new();
    for &t in &cells {
        if !b.in_locus(t) {
            transport.insert(t, b.cell_transport(t));
        }
    }
    // cofaces of every branch cell
    let mut cofaces: BTreeMap<Cell, Vec<Cell>> = BTreeMap::new();
    for &t in &cells {
        if b.in_locus(t) {
            continue;
        }
        let verts = c.cell_vertices(t);
        for &sigma in &cells {
            if !b.in_locus(sigma) || sigma.dim() >= t.dim() {
                continue;
            }
            if is_face_of(c, sigma, t, &verts) {
                cofaces.entry(sigma).or_default().push(t);
            }
        }
    }
    let mut census_cells = Vec::new();
    let mut components: BTreeMap<Cell, BTreeMap<(Cell, usize), usize>> = BTreeMap::new();
    for (&sigma, cf) in &cofaces {
        let gens = local_monodromy(&b, sigma, cf)?;
        let orbits = PermGroup::new(n, gens.clone())?.orbits().len();
        let (comp, count) = coface_components(&b, sigma, cf, &transport);
        let id = match sigma {
            Cell::Vertex(x) | Cell::Edge(x) | Cell::Face(x) | Cell::Cube(x) => x,
        };
        census_cells.push(BranchCell {
            dim: sigma.dim(),
            cell: id,
            local_generators: gens.len(),
            orbits,
            lifts: count,
        });
        components.insert(sigma, comp);
    }

    // assemble
    let mut y = Complex::new();
    let mut vertex_base = Vec::new();
    let mut lift_of: BTreeMap<(Cell, usize), usize> = BTreeMap::new();
    let sign = |d: usize| if d % 2 == 0 { 1i64 } else { -1 };
    let chi_base = c.euler_characteristic();
    let mut chi_census = n as i64 * chi_base;
    for bc in &census_cells {
        chi_census -= sign(bc.dim) * (n - bc.orbits) as i64;
    }
    // branch lifts are numbered per cell by component label
    let branch_lift = |sigma: Cell, witness: (Cell, usize)| -> usize { components[&sigma][&witness] };
    let mut branch_vertices: BTreeMap<(Cell, usize), usize> = BTreeMap::new();
    let mut branch_edges: BTreeMap<(Cell, usize), usize> = BTreeMap::new();
    for x in 0..c.num_vertices() {
        let cell = Cell::Vertex(x);
        if b.in_locus(cell) {
            let count = census_cells
                .iter()
                .find(|bc| bc.dim == 0 && bc.cell == x)
                .map_or(0, |bc| bc.lifts);
            for j in 0..count {
                branch_vertices.insert((cell, j), y.add_vertex(format!("{}^{j}", c.vertex_label(x))));
                vertex_base.push(x);
            }
        } else {
            for s in 1..=n {
                lift_of.insert((cell, s), y.add_vertex(format!("{}#{s}", c.vertex_label(x))));
                vertex_base.push(x);
            }
        }
    }
    // endpoint of the lift (t, s) at the vertex w of t
    let vertex_lift = |t: Cell, s: usize, w: usize, lift_of: &BTreeMap<(Cell, usize), usize>| -> usize {
        if locus.vertices.contains(&w) {
            branch_vertices[&(Cell::Vertex(w), branch_lift(Cell::Vertex(w), (t, s)))]
        } else {
            lift_of[&(Cell::Vertex(w), transport[&t][&w].apply(s))]
        }
    };
    for (e, ed) in c.edges().iter().enumerate() {
        let cell = Cell::Edge(e);
        if b.in_locus(cell) {
            let count = census_cells
                .iter()
                .find(|bc| bc.dim == 1 && bc.cell == e)
                .map_or(0, |bc| bc.lifts);
            // a witness coface lift per component gives the endpoints
            let mut witness: BTreeMap<usize, (Cell, usize)> = BTreeMap::new();
            for (&key, &comp) in &components[&cell] {
                witness.entry(comp).or_insert(key);
            }
            for j in 0..count {
                let w = witness[&j];
                let src = branch_vertices[&(Cell::Vertex(ed.src), branch_lift(Cell::Vertex(ed.src), w))];
                let dst = branch_vertices[&(Cell::Vertex(ed.dst), branch_lift(Cell::Vertex(ed.dst), w))];
                let id = y.add_edge(src, dst, format!("{}^{j}", ed.label))?;
                branch_edges.insert((cell, j), id);
            }
        } else {
            for s in 1..=n {
                let src = vertex_lift(cell, s, ed.src, &lift_of);
                let dst = vertex_lift(cell, s, ed.dst, &lift_of);
                lift_of.insert((cell, s), y.add_edge(src, dst, format!("{}#{s}", ed.label))?);
            }
        }
    }
    for (f, face) in c.faces().iter().enumerate() {
        let cell = Cell::Face(f);
        if b.in_locus(cell) {
            return Err(VoltageError::Meridian(cell, "branch locus of dimension 2".into()));
        }
        for s in 1..=n {
            let bnd = face
                .boundary
                .iter()
                .map(|st| {
                    let ec = Cell::Edge(st.edge);
                    let edge = if b.in_locus(ec) {
                        branch_edges[&(ec, branch_lift(ec, (cell, s)))]
                    } else {
                        let r = b.reference(ec).unwrap();
                        lift_of[&(ec, transport[&cell][&r].apply(s))]
                    };
                    SignedEdge {
                        edge,
                        forward: st.forward,
                    }
                })
                .collect();
            lift_of.insert((cell, s), y.add_face(bnd, format!("{}#{s}", face.label))?);
        }
    }
    for q in 0..c.num_cubes() {
        let cell = Cell::Cube(q);
        for s in 1..=n {
            let mut fs = [0usize; 6];
            for (i, &f) in c.cube(q).faces.iter().enumerate() {
                let fc = Cell::Face(f);
                let r = b.reference(fc).unwrap();
                fs[i] = lift_of[&(fc, transport[&cell][&r].apply(s))];
            }
            y.add_cube(fs, format!("{}#{s}", c.cube(q).label))?;
        }
    }
    let chi_direct = y.euler_characteristic();
    Ok(BranchedCover {
        complex: y,
        census: BranchCompletionCensus {
            degree: n,
            cells: census_cells,
            chi_base,
            chi_census,
            chi_direct,
        },
        vertex_base,
    })
}

fn is_face_of(c: &Complex, sigma: Cell, t: Cell, t_verts: &BTreeSet<usize>) -> bool {
    match (sigma, t) {
        (Cell::Vertex(x), _) => t_verts.contains(&x),
        (Cell::Edge(e), Cell::Face(f)) => c.face(f).boundary.iter().any(|s| s.edge == e),
        (Cell::Edge(e), Cell::Cube(q)) => c.cube_edges(q).contains(&e),
        (Cell::Face(f), Cell::Cube(q)) => c.cube(q).faces.contains(&f),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complement_of_star;
    use crate::pi1::pi1_generators;
    use crate::product::graph_power;
    use proptest::prelude::*;

    fn circle() -> Complex {
        let mut g = Complex::new();
        let v = g.add_vertex("*");
        g.add_edge(v, v, "x").unwrap();
        g
    }

    fn torus() -> Complex {
        graph_power(&circle(), 2).unwrap().complex
    }

    fn p(n: usize, cycles: &[Vec<usize>]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn circle_cover_with_a_long_cycle() {
        let c = circle();
        let v = VoltageAssignment::new(4, vec![p(4, &[vec![1, 2, 3, 4]])], BTreeSet::new()).unwrap();
        let cov = build_cover(&c, &v).unwrap();
        assert_eq!((cov.complex.num_vertices(), cov.complex.num_edges()), (4, 4));
        assert!(cov.complex.is_connected());
        let gens = pi1_generators(&c, 0).unwrap();
        assert_eq!(
            cover_connected(&c, &v, &gens, 1).unwrap(),
            Connectivity {
                connected: true,
                orbit_size: 4
            }
        );
    }

    #[test]
    fn trivial_voltages_give_disjoint_copies() {
        let c = torus();
        let v = VoltageAssignment::trivial(&c, 5);
        let gens = pi1_generators(&c, 0).unwrap();
        assert_eq!(cover_connected(&c, &v, &gens, 1).unwrap().orbit_size, 1);
        let cov = build_cover(&c, &v).unwrap();
        assert_eq!(cov.complex.components().1, 5);
        assert_eq!(cov.complex.euler_characteristic(), 5 * c.euler_characteristic());
    }

    #[test]
    fn torus_completion() {
        let c = torus();
        let (x, y) = (c.find_edge("(x,*)").unwrap(), c.find_edge("(*,x)").unwrap());
        let a = p(3, &[vec![1, 2, 3]]);
        let seed = BTreeMap::from([(x, a.clone()), (y, a.pow(2))]);
        let v = voltage_complete(&c, &seed, 3, 0, Order::Ascending).unwrap();
        assert!(v.non_flat_faces(&c).is_empty());
        let bad = BTreeMap::from([(x, p(3, &[vec![1, 2]])), (y, p(3, &[vec![2, 3]]))]);
        assert_eq!(
            voltage_complete(&c, &bad, 3, 0, Order::Ascending),
            Err(VoltageError::NotFlat(0))
        );
    }

    #[test]
    fn holonomy_checks_domain() {
        let c = circle();
        let v = VoltageAssignment::new(3, vec![p(3, &[vec![1, 2]])], BTreeSet::new()).unwrap();
        let bad = EdgePath {
            start: 0,
            steps: vec![SignedEdge::fwd(4)],
        };
        assert_eq!(v.holonomy(&c, &bad), Err(VoltageError::OutsideDomain(4)));
        assert!(v.holonomy(&c, &EdgePath::constant(0)).unwrap().is_identity());
    }

    /// The square branched over its center vertex: the four corner squares
    /// of a subdivided square with a 2-cycle around the center.
    #[test]
    fn branched_over_a_point() {
        let mut g = Complex::new();
        let a = g.add_vertex("a");
        let b = g.add_vertex("b");
        let m = g.add_vertex("m");
        g.add_edge(a, m, "p").unwrap();
        g.add_edge(m, b, "q").unwrap();
        let pc = graph_power(&g, 2).unwrap();
        let c = &pc.complex;
        let center = pc.vertex_of(&[2, 2]);
        let locus = Selection {
            vertices: BTreeSet::from([center]),
            ..Default::default()
        };
        let k = complement_of_star(c, &locus).unwrap();
        // the complement is a circle of 8 edges; one crossing carries the swap
        let mut volts = vec![Perm::identity(2); k.complex.num_edges()];
        volts[0] = p(2, &[vec![1, 2]]);
        let v = VoltageAssignment::new(2, volts, BTreeSet::new()).unwrap();
        let bc = branched_completion(c, &locus, &k, &v).unwrap();
        assert!(bc.census.agrees(), "{:?}", bc.census);
        assert_eq!(bc.census.cells[0].orbits, 1);
        // a disk double covering a disk branched at one point is a disk
        assert_eq!(bc.census.chi_direct, 1);
    }

    proptest! {
        #[test]
        fn holonomy_is_multiplicative(
            imgs in proptest::collection::vec(Just((1..=4usize).collect::<Vec<_>>()).prop_shuffle(), 2),
            path in proptest::collection::vec(any::<bool>(), 0..10),
            split in 0usize..10,
        ) {
            let mut g = Complex::new();
            let v0 = g.add_vertex("*");
            g.add_edge(v0, v0, "x").unwrap();
            g.add_edge(v0, v0, "y").unwrap();
            let v = VoltageAssignment::new(4, imgs.iter().map(|i| Perm::from_images(i).unwrap()).collect(), BTreeSet::new()).unwrap();
            let steps: Vec<SignedEdge> = path.iter().enumerate()
                .map(|(i, &f)| if f { SignedEdge::fwd(i % 2) } else { SignedEdge::bwd(i % 2) })
                .collect();
            let k = split.min(steps.len());
            let whole = v.holonomy_steps(&steps).unwrap();
            let parts = v.holonomy_steps(&steps[..k]).unwrap().then(&v.holonomy_steps(&steps[k..]).unwrap());
            prop_assert_eq!(&whole, &parts);
            let rev: Vec<SignedEdge> = steps.iter().rev().map(|s| s.reversed()).collect();
            prop_assert_eq!(v.holonomy_steps(&rev).unwrap(), whole.inverse());
        }

        #[test]
        fn cover_euler_and_connectivity_oracle(
            xi in Just((1..=4usize).collect::<Vec<_>>()).prop_shuffle(),
            k in 0i64..4,
        ) {
            // commuting voltages on the torus: x and a power of x
            let c = torus();
            let (ex, ey) = (c.find_edge("(x,*)").unwrap(), c.find_edge("(*,x)").unwrap());
            let x = Perm::from_images(&xi).unwrap();
            let seed = BTreeMap::from([(ex, x.clone()), (ey, x.pow(k))]);
            let v = voltage_complete(&c, &seed, 4, 0, Order::Ascending).unwrap();
            let w = voltage_complete(&c, &seed, 4, 0, Order::Descending).unwrap();
            prop_assert_eq!(&v, &w);
            let cov = build_cover(&c, &v).unwrap();
            prop_assert_eq!(cov.complex.euler_characteristic(), 4 * c.euler_characteristic());
            let gens = pi1_generators(&c, 0).unwrap();
            let conn = cover_connected(&c, &v, &gens, 1).unwrap();
            let (labels, _) = cov.complex.components();
            let same = (0..4).filter(|&s| labels[s] == labels[0]).count();
            prop_assert_eq!(conn.orbit_size, same);
        }
    }
}
