//! Combinatorial CW complexes of dimension at most three.
//!
//! Edges are oriented; 2-cells carry their boundary as a closed signed edge
//! path; 3-cells are combinatorial cubes listed by their six square faces.
//! Everything is indexed by dense integer ids so all algorithms can iterate in
//! id order and stay deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("face {0} does not exist")]
    NoSuchFace(usize),
    #[error("face boundary is not a closed edge path: {0}")]
    OpenBoundary(String),
    #[error("cube {0} is not combinatorially closed")]
    BadCube(String),
    #[error("edge path broken at step {0}")]
    BrokenPath(usize),
    #[error("selection is not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("cell map is not cellular: {0}")]
    NotCellular(String),
    #[error("path does not lie in the source complex")]
    PathNotInSource,
    #[error("{0}")]
    Unsupported(String),
}

/// An edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl SignedEdge {
    pub fn fwd(edge: usize) -> Self {
        SignedEdge {
            edge,
            forward: true,
        }
    }
    pub fn bwd(edge: usize) -> Self {
        SignedEdge {
            edge,
            forward: false,
        }
    }
    pub fn reversed(self) -> Self {
        SignedEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }
    /// Integer form used by the text format: `id + 1`, negated when backwards.
    pub fn to_signed_int(self) -> i64 {
        let v = self.edge as i64 + 1;
        if self.forward {
            v
        } else {
            -v
        }
    }
    pub fn from_signed_int(v: i64) -> Option<Self> {
        if v == 0 {
            return None;
        }
        let edge = (v.unsigned_abs() - 1) as usize;
        Some(SignedEdge {
            edge,
            forward: v > 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<SignedEdge>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub faces: [usize; 6],
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Complex {
    vertex_labels: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    cubes: Vec<Cube>,
}

/// Cell counts by dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub cubes: usize,
}

impl CellCounts {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 - self.cubes as i64
    }
}

impl Complex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertex_labels.push(label.into());
        self.vertex_labels.len() - 1
    }

    pub fn add_edge(
        &mut self,
        src: usize,
        dst: usize,
        label: impl Into<String>,
    ) -> Result<usize, ComplexError> {
        for v in [src, dst] {
            if v >= self.vertex_labels.len() {
                return Err(ComplexError::NoSuchVertex(v));
            }
        }
        self.edges.push(Edge {
            src,
            dst,
            label: label.into(),
        });
        Ok(self.edges.len() - 1)
    }

    pub fn add_face(
        &mut self,
        boundary: Vec<SignedEdge>,
        label: impl Into<String>,
    ) -> Result<usize, ComplexError> {
        let label = label.into();
        if boundary.is_empty() {
            return Err(ComplexError::OpenBoundary(format!("{label}: empty boundary")));
        }
        for s in &boundary {
            if s.edge >= self.edges.len() {
                return Err(ComplexError::NoSuchEdge(s.edge));
            }
        }
        for k in 0..boundary.len() {
            let a = boundary[k];
            let b = boundary[(k + 1) % boundary.len()];
            if self.head(a) != self.tail(b) {
                return Err(ComplexError::OpenBoundary(format!("{label}: step {k}")));
            }
        }
        self.faces.push(Face { boundary, label });
        Ok(self.faces.len() - 1)
    }

    /// Adds a cube given its six square faces. Each edge of the cube must be
    /// used by exactly two of the squares (counted with multiplicity).
    pub fn add_cube(
        &mut self,
        faces: [usize; 6],
        label: impl Into<String>,
    ) -> Result<usize, ComplexError> {
        let label = label.into();
        let mut uses: BTreeMap<usize, usize> = BTreeMap::new();
        for &f in &faces {
            let face = self.faces.get(f).ok_or(ComplexError::NoSuchFace(f))?;
            if face.boundary.len() != 4 {
                return Err(ComplexError::BadCube(format!("{label}: face {f} is not a square")));
            }
            for s in &face.boundary {
                *uses.entry(s.edge).or_default() += 1;
            }
        }
        let total: usize = uses.values().sum();
        if total != 24 || uses.values().any(|&u| u % 2 != 0) {
            return Err(ComplexError::BadCube(format!("{label}: squares do not pair along edges")));
        }
        if uses.len() == 12 && uses.values().any(|&u| u != 2) {
            return Err(ComplexError::BadCube(label));
        }
        self.cubes.push(Cube { faces, label });
        Ok(self.cubes.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn num_cubes(&self) -> usize {
        self.cubes.len()
    }

    pub fn counts(&self) -> CellCounts {
        CellCounts {
            vertices: self.num_vertices(),
            edges: self.num_edges(),
            faces: self.num_faces(),
            cubes: self.num_cubes(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().euler()
    }

    pub fn dimension(&self) -> i32 {
        if !self.cubes.is_empty() {
            3
        } else if !self.faces.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else if !self.vertex_labels.is_empty() {
            0
        } else {
            -1
        }
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }
    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn cube(&self, c: usize) -> &Cube {
        &self.cubes[c]
    }
    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn find_vertex(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }
    pub fn find_edge(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }
    pub fn find_face(&self, label: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.label == label)
    }

    /// Start vertex of a signed edge.
    pub fn tail(&self, s: SignedEdge) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.src
        } else {
            e.dst
        }
    }

    /// End vertex of a signed edge.
    pub fn head(&self, s: SignedEdge) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.dst
        } else {
            e.src
        }
    }

    /// Corner vertices of a face in boundary order (corner `k` is the tail of
    /// boundary step `k`).
    pub fn face_corners(&self, f: usize) -> Vec<usize> {
        self.faces[f].boundary.iter().map(|&s| self.tail(s)).collect()
    }

    pub fn face_vertices(&self, f: usize) -> BTreeSet<usize> {
        self.face_corners(f).into_iter().collect()
    }

    pub fn cube_edges(&self, c: usize) -> BTreeSet<usize> {
        self.cubes[c]
            .faces
            .iter()
            .flat_map(|&f| self.faces[f].boundary.iter().map(|s| s.edge))
            .collect()
    }

    pub fn cube_vertices(&self, c: usize) -> BTreeSet<usize> {
        self.cubes[c]
            .faces
            .iter()
            .flat_map(|&f| self.face_corners(f))
            .collect()
    }

    pub fn cell_vertices(&self, cell: Cell) -> BTreeSet<usize> {
        match cell {
            Cell::Vertex(v) => BTreeSet::from([v]),
            Cell::Edge(e) => BTreeSet::from([self.edges[e].src, self.edges[e].dst]),
            Cell::Face(f) => self.face_vertices(f),
            Cell::Cube(c) => self.cube_vertices(c),
        }
    }

    /// Edges incident to each vertex, in edge-id order (a loop appears twice).
    pub fn vertex_edges(&self) -> Vec<Vec<SignedEdge>> {
        let mut out = vec![Vec::new(); self.num_vertices()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(SignedEdge::fwd(i));
            out[e.dst].push(SignedEdge::bwd(i));
        }
        out
    }

    /// Number of 2-cell boundary uses of each edge (with multiplicity).
    pub fn edge_face_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_edges()];
        for f in &self.faces {
            for s in &f.boundary {
                deg[s.edge] += 1;
            }
        }
        deg
    }

    /// Connected components of the 1-skeleton; returns a component index per
    /// vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in &self.edges {
            uf.union(e.src, e.dst);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Disjoint union; cells of `other` are appended after ours.
    pub fn disjoint_union(&self, other: &Complex) -> Complex {
        let mut out = self.clone();
        let (nv, ne, nf) = (self.num_vertices(), self.num_edges(), self.num_faces());
        out.vertex_labels.extend(other.vertex_labels.iter().cloned());
        for e in &other.edges {
            out.edges.push(Edge {
                src: e.src + nv,
                dst: e.dst + nv,
                label: e.label.clone(),
            });
        }
        for f in &other.faces {
            out.faces.push(Face {
                boundary: f
                    .boundary
                    .iter()
                    .map(|s| SignedEdge {
                        edge: s.edge + ne,
                        forward: s.forward,
                    })
                    .collect(),
                label: f.label.clone(),
            });
        }
        for c in &other.cubes {
            let mut faces = c.faces;
            for f in faces.iter_mut() {
                *f += nf;
            }
            out.cubes.push(Cube {
                faces,
                label: c.label.clone(),
            });
        }
        out
    }

    /// Every cell of the complex, as a selection.
    pub fn everything(&self) -> Selection {
        Selection {
            vertices: (0..self.num_vertices()).collect(),
            edges: (0..self.num_edges()).collect(),
            faces: (0..self.num_faces()).collect(),
            cubes: (0..self.num_cubes()).collect(),
        }
    }

    /// The subcomplex of cells none of whose vertices satisfy `banned`.
    pub fn avoiding_vertices(&self, banned: &BTreeSet<usize>) -> Selection {
        let ok = |vs: BTreeSet<usize>| vs.is_disjoint(banned);
        Selection {
            vertices: (0..self.num_vertices()).filter(|v| !banned.contains(v)).collect(),
            edges: (0..self.num_edges())
                .filter(|&e| ok(self.cell_vertices(Cell::Edge(e))))
                .collect(),
            faces: (0..self.num_faces())
                .filter(|&f| ok(self.cell_vertices(Cell::Face(f))))
                .collect(),
            cubes: (0..self.num_cubes())
                .filter(|&c| ok(self.cell_vertices(Cell::Cube(c))))
                .collect(),
        }
    }
}

/// A cell of any dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Face(usize),
    Cube(usize),
}

impl Cell {
    pub fn dim(self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) => 1,
            Cell::Face(_) => 2,
            Cell::Cube(_) => 3,
        }
    }
}

/// A set of cells, by dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub faces: BTreeSet<usize>,
    pub cubes: BTreeSet<usize>,
}

impl Selection {
    pub fn contains(&self, cell: Cell) -> bool {
        match cell {
            Cell::Vertex(v) => self.vertices.contains(&v),
            Cell::Edge(e) => self.edges.contains(&e),
            Cell::Face(f) => self.faces.contains(&f),
            Cell::Cube(c) => self.cubes.contains(&c),
        }
    }

    /// The full subcomplex spanned by a vertex set.
    pub fn full_on(c: &Complex, vertices: &BTreeSet<usize>) -> Selection {
        let inside = |vs: BTreeSet<usize>| vs.is_subset(vertices);
        Selection {
            vertices: vertices.clone(),
            edges: (0..c.num_edges())
                .filter(|&e| inside(c.cell_vertices(Cell::Edge(e))))
                .collect(),
            faces: (0..c.num_faces())
                .filter(|&f| inside(c.cell_vertices(Cell::Face(f))))
                .collect(),
            cubes: (0..c.num_cubes())
                .filter(|&k| inside(c.cell_vertices(Cell::Cube(k))))
                .collect(),
        }
    }

    /// Checks closure under taking faces.
    pub fn check_subcomplex(&self, c: &Complex) -> Result<(), ComplexError> {
        for &e in &self.edges {
            let ed = c.edges.get(e).ok_or(ComplexError::NoSuchEdge(e))?;
            if !self.vertices.contains(&ed.src) || !self.vertices.contains(&ed.dst) {
                return Err(ComplexError::NotSubcomplex(format!("edge {e} missing an endpoint")));
            }
        }
        for &f in &self.faces {
            let fc = c.faces.get(f).ok_or(ComplexError::NoSuchFace(f))?;
            if fc.boundary.iter().any(|s| !self.edges.contains(&s.edge)) {
                return Err(ComplexError::NotSubcomplex(format!("face {f} missing an edge")));
            }
        }
        for &k in &self.cubes {
            let cb = c
                .cubes
                .get(k)
                .ok_or_else(|| ComplexError::NotSubcomplex(format!("no cube {k}")))?;
            if cb.faces.iter().any(|f| !self.faces.contains(f)) {
                return Err(ComplexError::NotSubcomplex(format!("cube {k} missing a face")));
            }
        }
        for &v in &self.vertices {
            if v >= c.num_vertices() {
                return Err(ComplexError::NoSuchVertex(v));
            }
        }
        Ok(())
    }

    /// A selection is full when every cell whose vertices all lie in it is in it.
    pub fn is_full(&self, c: &Complex) -> bool {
        *self == Selection::full_on(c, &self.vertices)
    }
}

/// A subcomplex materialized as its own complex, with id maps both ways.
#[derive(Debug, Clone)]
pub struct Induced {
    pub complex: Complex,
    pub vertex_to_parent: Vec<usize>,
    pub edge_to_parent: Vec<usize>,
    pub face_to_parent: Vec<usize>,
    pub cube_to_parent: Vec<usize>,
    pub vertex_from_parent: BTreeMap<usize, usize>,
    pub edge_from_parent: BTreeMap<usize, usize>,
    pub face_from_parent: BTreeMap<usize, usize>,
    pub cube_from_parent: BTreeMap<usize, usize>,
}

impl Induced {
    pub fn build(parent: &Complex, sel: &Selection) -> Result<Induced, ComplexError> {
        sel.check_subcomplex(parent)?;
        let mut complex = Complex::new();
        let mut vfp = BTreeMap::new();
        let mut efp = BTreeMap::new();
        let mut ffp = BTreeMap::new();
        let mut cfp = BTreeMap::new();
        for &v in &sel.vertices {
            vfp.insert(v, complex.add_vertex(parent.vertex_labels[v].clone()));
        }
        for &e in &sel.edges {
            let ed = &parent.edges[e];
            let id = complex.add_edge(vfp[&ed.src], vfp[&ed.dst], ed.label.clone())?;
            efp.insert(e, id);
        }
        for &f in &sel.faces {
            let fc = &parent.faces[f];
            let b = fc
                .boundary
                .iter()
                .map(|s| SignedEdge {
                    edge: efp[&s.edge],
                    forward: s.forward,
                })
                .collect();
            ffp.insert(f, complex.add_face(b, fc.label.clone())?);
        }
        for &k in &sel.cubes {
            let cb = &parent.cubes[k];
            let mut fs = cb.faces;
            for f in fs.iter_mut() {
                *f = ffp[f];
            }
            cfp.insert(k, complex.add_cube(fs, cb.label.clone())?);
        }
        Ok(Induced {
            complex,
            vertex_to_parent: sel.vertices.iter().copied().collect(),
            edge_to_parent: sel.edges.iter().copied().collect(),
            face_to_parent: sel.faces.iter().copied().collect(),
            cube_to_parent: sel.cubes.iter().copied().collect(),
            vertex_from_parent: vfp,
            edge_from_parent: efp,
            face_from_parent: ffp,
            cube_from_parent: cfp,
        })
    }
}

/// Removes the open star of a full subcomplex: keeps exactly the cells whose
/// closure misses the locus.
pub fn complement_of_star(c: &Complex, locus: &Selection) -> Result<Induced, ComplexError> {
    locus.check_subcomplex(c)?;
    if !locus.is_full(c) {
        return Err(ComplexError::NotSubcomplex(
            "locus is not a full subcomplex; subdivide first".into(),
        ));
    }
    Induced::build(c, &c.avoiding_vertices(&locus.vertices))
}

/// A based edge path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    pub start: usize,
    pub steps: Vec<SignedEdge>,
}

impl EdgePath {
    pub fn constant(v: usize) -> Self {
        EdgePath {
            start: v,
            steps: Vec::new(),
        }
    }

    pub fn new(c: &Complex, start: usize, steps: Vec<SignedEdge>) -> Result<Self, ComplexError> {
        let p = EdgePath { start, steps };
        p.validate(c)?;
        Ok(p)
    }

    pub fn validate(&self, c: &Complex) -> Result<(), ComplexError> {
        if self.start >= c.num_vertices() {
            return Err(ComplexError::NoSuchVertex(self.start));
        }
        let mut at = self.start;
        for (i, s) in self.steps.iter().enumerate() {
            if s.edge >= c.num_edges() {
                return Err(ComplexError::NoSuchEdge(s.edge));
            }
            if c.tail(*s) != at {
                return Err(ComplexError::BrokenPath(i));
            }
            at = c.head(*s);
        }
        Ok(())
    }

    pub fn end(&self, c: &Complex) -> usize {
        self.steps.last().map(|&s| c.head(s)).unwrap_or(self.start)
    }

    pub fn is_closed(&self, c: &Complex) -> bool {
        self.end(c) == self.start
    }

    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        EdgePath {
            start: self.start,
            steps,
        }
    }

    pub fn inverse(&self, c: &Complex) -> EdgePath {
        EdgePath {
            start: self.end(c),
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Cancels adjacent `e ē` pairs.
    pub fn reduced(&self) -> EdgePath {
        let mut out: Vec<SignedEdge> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            if out.last() == Some(&s.reversed()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        EdgePath {
            start: self.start,
            steps: out,
        }
    }

    /// Builds a path from edge labels; a trailing `'` or a leading `~`
    /// traverses the edge backwards.
    pub fn from_labels(c: &Complex, start: usize, labels: &[&str]) -> Result<Self, ComplexError> {
        let mut steps = Vec::new();
        for l in labels {
            let (name, forward) = if let Some(n) = l.strip_prefix('~') {
                (n, false)
            } else {
                (*l, true)
            };
            let e = c
                .find_edge(name)
                .ok_or_else(|| ComplexError::Unsupported(format!("no edge labelled {name}")))?;
            steps.push(SignedEdge { edge: e, forward });
        }
        EdgePath::new(c, start, steps)
    }
}

/// Image of an edge under a cellular map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeImage {
    Collapsed(usize),
    Edge(SignedEdge),
}

/// Image of a 2-cell: either collapsed to lower dimension or a 2-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceImage {
    Degenerate,
    Face(usize),
}

/// A cellular map between complexes, recorded dimension by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<EdgeImage>,
    pub face_map: Vec<FaceImage>,
}

impl CellMap {
    /// Checks that edge images connect the images of their endpoints, and
    /// that a non-degenerate face image has the image boundary (after
    /// deleting collapsed edges) equal to a rotation or reversal of the
    /// target face's boundary.
    pub fn check_cellular(&self, src: &Complex, dst: &Complex) -> Result<(), ComplexError> {
        if self.vertex_map.len() != src.num_vertices() || self.edge_map.len() != src.num_edges() {
            return Err(ComplexError::NotCellular("size mismatch".into()));
        }
        for (e, img) in self.edge_map.iter().enumerate() {
            let ed = src.edge(e);
            let (a, b) = (self.vertex_map[ed.src], self.vertex_map[ed.dst]);
            match *img {
                EdgeImage::Collapsed(v) => {
                    if a != v || b != v {
                        return Err(ComplexError::NotCellular(format!("edge {e}")));
                    }
                }
                EdgeImage::Edge(s) => {
                    if dst.tail(s) != a || dst.head(s) != b {
                        return Err(ComplexError::NotCellular(format!("edge {e}")));
                    }
                }
            }
        }
        for (f, img) in self.face_map.iter().enumerate() {
            if let FaceImage::Face(g) = *img {
                let path = self.apply_unchecked(&EdgePath {
                    start: src.tail(src.face(f).boundary[0]),
                    steps: src.face(f).boundary.clone(),
                });
                if !same_cycle(&path.steps, &dst.face(g).boundary) {
                    return Err(ComplexError::NotCellular(format!("face {f}")));
                }
            }
        }
        Ok(())
    }

    fn apply_unchecked(&self, p: &EdgePath) -> EdgePath {
        let mut steps = Vec::new();
        for s in &p.steps {
            if let EdgeImage::Edge(img) = self.edge_map[s.edge] {
                steps.push(if s.forward { img } else { img.reversed() });
            }
        }
        EdgePath {
            start: self.vertex_map[p.start],
            steps,
        }
    }

    pub fn compose(&self, then: &CellMap) -> CellMap {
        let vertex_map = self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect();
        let edge_map = self
            .edge_map
            .iter()
            .map(|img| match *img {
                EdgeImage::Collapsed(v) => EdgeImage::Collapsed(then.vertex_map[v]),
                EdgeImage::Edge(s) => match then.edge_map[s.edge] {
                    EdgeImage::Collapsed(v) => EdgeImage::Collapsed(v),
                    EdgeImage::Edge(t) => EdgeImage::Edge(if s.forward { t } else { t.reversed() }),
                },
            })
            .collect();
        let face_map = self
            .face_map
            .iter()
            .map(|img| match *img {
                FaceImage::Degenerate => FaceImage::Degenerate,
                FaceImage::Face(g) => then.face_map[g],
            })
            .collect();
        CellMap {
            vertex_map,
            edge_map,
            face_map,
        }
    }

    /// The map between subcomplexes `src → dst` induced by a map of their
    /// parents; errors if some image leaves `dst`.
    pub fn restrict(&self, src: &Induced, dst: &Induced) -> Result<CellMap, ComplexError> {
        let vx = |v: usize| {
            dst.vertex_from_parent
                .get(&v)
                .copied()
                .ok_or_else(|| ComplexError::NotCellular(format!("vertex image {v} leaves the target")))
        };
        let vertex_map = src
            .vertex_to_parent
            .iter()
            .map(|&v| vx(self.vertex_map[v]))
            .collect::<Result<_, _>>()?;
        let edge_map = src
            .edge_to_parent
            .iter()
            .map(|&e| match self.edge_map[e] {
                EdgeImage::Collapsed(v) => Ok(EdgeImage::Collapsed(vx(v)?)),
                EdgeImage::Edge(s) => dst
                    .edge_from_parent
                    .get(&s.edge)
                    .map(|&d| EdgeImage::Edge(SignedEdge { edge: d, forward: s.forward }))
                    .ok_or_else(|| ComplexError::NotCellular(format!("edge image {} leaves the target", s.edge))),
            })
            .collect::<Result<_, _>>()?;
        let face_map = src
            .face_to_parent
            .iter()
            .map(|&f| match self.face_map[f] {
                FaceImage::Degenerate => Ok(FaceImage::Degenerate),
                FaceImage::Face(g) => dst
                    .face_from_parent
                    .get(&g)
                    .map(|&d| FaceImage::Face(d))
                    .ok_or_else(|| ComplexError::NotCellular(format!("face image {g} leaves the target"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(CellMap {
            vertex_map,
            edge_map,
            face_map,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self
                .edge_map
                .iter()
                .enumerate()
                .all(|(i, img)| *img == EdgeImage::Edge(SignedEdge::fwd(i)))
            && self
                .face_map
                .iter()
                .enumerate()
                .all(|(i, img)| *img == FaceImage::Face(i))
    }
}

/// Image of a path, with collapsed edges deleted.
pub fn apply_map(
    m: &CellMap,
    src: &Complex,
    p: &EdgePath,
) -> Result<EdgePath, ComplexError> {
    p.validate(src).map_err(|_| ComplexError::PathNotInSource)?;
    Ok(m.apply_unchecked(p))
}

/// Two closed edge paths agree up to rotation or reversal.
pub fn same_cycle(a: &[SignedEdge], b: &[SignedEdge]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let rev: Vec<SignedEdge> = b.iter().rev().map(|s| s.reversed()).collect();
    let n = a.len();
    [b.to_vec(), rev]
        .iter()
        .any(|cand| (0..n).any(|r| (0..n).all(|k| a[k] == cand[(k + r) % n])))
}

/// Path-compressing union-find.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }
    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
    /// Dense component labels in order of first appearance.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut map = BTreeMap::new();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = map.len();
            out.push(*map.entry(r).or_insert(next));
        }
        (out, map.len())
    }
}

/// Breadth-first distances over the 1-skeleton from `start`.
pub fn bfs_distances(c: &Complex, start: usize) -> Vec<Option<usize>> {
    let adj = c.vertex_edges();
    let mut dist = vec![None; c.num_vertices()];
    dist[start] = Some(0);
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        let d = dist[v].unwrap();
        for &s in &adj[v] {
            let w = c.head(s);
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn unit_square() -> Complex {
        let mut c = Complex::new();
        let v: Vec<usize> = (0..4).map(|i| c.add_vertex(format!("v{i}"))).collect();
        let e0 = c.add_edge(v[0], v[1], "x0").unwrap();
        let e1 = c.add_edge(v[1], v[2], "y1").unwrap();
        let e2 = c.add_edge(v[3], v[2], "x1").unwrap();
        let e3 = c.add_edge(v[0], v[3], "y0").unwrap();
        c.add_face(
            vec![
                SignedEdge::fwd(e0),
                SignedEdge::fwd(e1),
                SignedEdge::bwd(e2),
                SignedEdge::bwd(e3),
            ],
            "Q",
        )
        .unwrap();
        c
    }

    #[test]
    fn face_boundary_must_close() {
        let mut c = Complex::new();
        let a = c.add_vertex("a");
        let b = c.add_vertex("b");
        let e = c.add_edge(a, b, "e").unwrap();
        assert!(c.add_face(vec![SignedEdge::fwd(e)], "bad").is_err());
        assert!(c
            .add_face(vec![SignedEdge::fwd(e), SignedEdge::bwd(e)], "ok")
            .is_ok());
    }

    #[test]
    fn euler_is_additive_over_disjoint_union() {
        let sq = unit_square();
        let u = sq.disjoint_union(&sq);
        assert_eq!(u.euler_characteristic(), 2 * sq.euler_characteristic());
        assert_eq!(u.components().1, 2);
    }

    #[test]
    fn paths_concatenate_and_invert() {
        let c = unit_square();
        let p = EdgePath::from_labels(&c, 0, &["x0", "y1"]).unwrap();
        let q = EdgePath::from_labels(&c, 2, &["~x1", "~y0"]).unwrap();
        let loop_ = p.concat(&q);
        assert!(loop_.is_closed(&c));
        let back = loop_.concat(&loop_.inverse(&c)).reduced();
        assert!(back.steps.is_empty());
        assert!(EdgePath::from_labels(&c, 0, &["y1"]).is_err());
    }

    #[test]
    fn complement_of_star_on_subdivided_circle_is_an_arc() {
        let mut c = Complex::new();
        let vs: Vec<usize> = (0..4).map(|i| c.add_vertex(format!("{i}"))).collect();
        for i in 0..4 {
            c.add_edge(vs[i], vs[(i + 1) % 4], format!("e{i}")).unwrap();
        }
        let locus = Selection::full_on(&c, &BTreeSet::from([0]));
        let k = complement_of_star(&c, &locus).unwrap();
        assert_eq!(k.complex.num_vertices(), 3);
        assert_eq!(k.complex.num_edges(), 2);
        assert_eq!(k.complex.euler_characteristic(), 1);
        assert!(k.complex.is_connected());
    }

    #[test]
    fn complement_rejects_non_subcomplex() {
        let c = unit_square();
        let bad = Selection {
            edges: BTreeSet::from([0]),
            ..Default::default()
        };
        assert!(complement_of_star(&c, &bad).is_err());
    }

    #[test]
    fn same_cycle_handles_rotation_and_reversal() {
        let a = vec![SignedEdge::fwd(0), SignedEdge::fwd(1), SignedEdge::bwd(2)];
        let rot = vec![SignedEdge::fwd(1), SignedEdge::bwd(2), SignedEdge::fwd(0)];
        let rev = vec![SignedEdge::fwd(2), SignedEdge::bwd(1), SignedEdge::bwd(0)];
        assert!(same_cycle(&a, &rot));
        assert!(same_cycle(&a, &rev));
        assert!(!same_cycle(&a, &a[..2]));
    }
}
