//! Products of graphs as cube complexes, plus the coordinatewise and
//! projection maps between them.

use std::collections::HashMap;

use crate::complex::{
    CellMap, Complex, ComplexError, EdgeImage, FaceImage, SignedEdge,
};

/// A cell of the factor graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorCell {
    V(usize),
    E(usize),
}

impl FactorCell {
    pub fn is_edge(self) -> bool {
        matches!(self, FactorCell::E(_))
    }
}

/// `g^n` with each product cell remembering its factor tuple.
#[derive(Debug, Clone)]
pub struct ProductComplex {
    pub complex: Complex,
    pub factor: Complex,
    pub n: usize,
    pub vertex_tuples: Vec<Vec<FactorCell>>,
    pub edge_tuples: Vec<Vec<FactorCell>>,
    pub face_tuples: Vec<Vec<FactorCell>>,
    pub cube_tuples: Vec<Vec<FactorCell>>,
    index: HashMap<Vec<FactorCell>, usize>,
}

impl ProductComplex {
    /// Id of the cell with this tuple (within its dimension).
    pub fn id_of(&self, tuple: &[FactorCell]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn vertex_of(&self, coords: &[usize]) -> usize {
        let t: Vec<FactorCell> = coords.iter().map(|&v| FactorCell::V(v)).collect();
        self.index[&t]
    }

    pub fn tuple_label(&self, tuple: &[FactorCell]) -> String {
        let parts: Vec<String> = tuple
            .iter()
            .map(|c| match *c {
                FactorCell::V(v) => self.factor.vertex_label(v).to_string(),
                FactorCell::E(e) => self.factor.edge(e).label.clone(),
            })
            .collect();
        format!("({})", parts.join(","))
    }

    /// Tuple of the vertex `v`, as factor vertex ids.
    pub fn coords(&self, v: usize) -> Vec<usize> {
        self.vertex_tuples[v]
            .iter()
            .map(|c| match *c {
                FactorCell::V(x) => x,
                FactorCell::E(_) => unreachable!("vertex tuple"),
            })
            .collect()
    }
}

/// The graph Θ: two vertices `0`, `1` and four edges; `a`, `b` run 0→1 and
/// `c`, `d` run 1→0.
pub fn theta_graph() -> Complex {
    let mut g = Complex::new();
    let v0 = g.add_vertex("0");
    let v1 = g.add_vertex("1");
    g.add_edge(v0, v1, "a").unwrap();
    g.add_edge(v0, v1, "b").unwrap();
    g.add_edge(v1, v0, "c").unwrap();
    g.add_edge(v1, v0, "d").unwrap();
    g
}

/// Cartesian power of a graph. Cells of dimension above three are not built;
/// for `n > 3` the result is the 3-skeleton.
pub fn graph_power(g: &Complex, n: usize) -> Result<ProductComplex, ComplexError> {
    if n < 1 {
        return Err(ComplexError::Unsupported("power must be at least 1".into()));
    }
    if g.dimension() > 1 {
        return Err(ComplexError::Unsupported("factor must be a graph".into()));
    }
    let factor_cells: Vec<FactorCell> = (0..g.num_vertices())
        .map(FactorCell::V)
        .chain((0..g.num_edges()).map(FactorCell::E))
        .collect();

    let mut by_dim: [Vec<Vec<FactorCell>>; 4] = Default::default();
    let mut tuple = vec![FactorCell::V(0); n];
    enumerate(&factor_cells, 0, 0, &mut tuple, &mut by_dim);

    let mut out = Complex::new();
    let mut index = HashMap::new();
    let label = |t: &[FactorCell]| -> String {
        let parts: Vec<String> = t
            .iter()
            .map(|c| match *c {
                FactorCell::V(v) => g.vertex_label(v).to_string(),
                FactorCell::E(e) => g.edge(e).label.clone(),
            })
            .collect();
        format!("({})", parts.join(","))
    };

    for t in &by_dim[0] {
        let id = out.add_vertex(label(t));
        index.insert(t.clone(), id);
    }
    let endpoint = |t: &[FactorCell], pos: usize, at_src: bool| -> Vec<FactorCell> {
        let mut u = t.to_vec();
        if let FactorCell::E(e) = t[pos] {
            let ed = g.edge(e);
            u[pos] = FactorCell::V(if at_src { ed.src } else { ed.dst });
        }
        u
    };
    for t in &by_dim[1] {
        let pos = t.iter().position(|c| c.is_edge()).unwrap();
        let s = index[&endpoint(t, pos, true)];
        let d = index[&endpoint(t, pos, false)];
        let id = out.add_edge(s, d, label(t))?;
        index.insert(t.clone(), id);
    }
    for t in &by_dim[2] {
        let ps: Vec<usize> = (0..n).filter(|&k| t[k].is_edge()).collect();
        let (i, j) = (ps[0], ps[1]);
        // edge along i at the src of j, then along j at the dst of i, ...
        let e_i_lo = index[&endpoint(t, j, true)];
        let e_j_hi = index[&endpoint(t, i, false)];
        let e_i_hi = index[&endpoint(t, j, false)];
        let e_j_lo = index[&endpoint(t, i, true)];
        let b = vec![
            SignedEdge::fwd(e_i_lo),
            SignedEdge::fwd(e_j_hi),
            SignedEdge::bwd(e_i_hi),
            SignedEdge::bwd(e_j_lo),
        ];
        let id = out.add_face(b, label(t))?;
        index.insert(t.clone(), id);
    }
    for t in &by_dim[3] {
        let ps: Vec<usize> = (0..n).filter(|&k| t[k].is_edge()).collect();
        let mut faces = [0usize; 6];
        for (slot, &p) in ps.iter().enumerate() {
            faces[2 * slot] = index[&endpoint(t, p, true)];
            faces[2 * slot + 1] = index[&endpoint(t, p, false)];
        }
        let id = out.add_cube(faces, label(t))?;
        index.insert(t.clone(), id);
    }
    let [v, e, f, c] = by_dim;
    Ok(ProductComplex {
        complex: out,
        factor: g.clone(),
        n,
        vertex_tuples: v,
        edge_tuples: e,
        face_tuples: f,
        cube_tuples: c,
        index,
    })
}

fn enumerate(
    cells: &[FactorCell],
    pos: usize,
    dim: usize,
    tuple: &mut Vec<FactorCell>,
    out: &mut [Vec<Vec<FactorCell>>; 4],
) {
    if pos == tuple.len() {
        out[dim].push(tuple.clone());
        return;
    }
    for &c in cells {
        let d = dim + usize::from(c.is_edge());
        if d > 3 {
            continue;
        }
        tuple[pos] = c;
        enumerate(cells, pos + 1, d, tuple, out);
    }
}

/// An automorphism of a graph: vertex permutation plus signed edge images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    pub vertex: Vec<usize>,
    pub edge: Vec<SignedEdge>,
}

impl GraphMap {
    pub fn apply(&self, c: FactorCell) -> (FactorCell, bool) {
        match c {
            FactorCell::V(v) => (FactorCell::V(self.vertex[v]), true),
            FactorCell::E(e) => {
                let s = self.edge[e];
                (FactorCell::E(s.edge), s.forward)
            }
        }
    }

    pub fn compose(&self, then: &GraphMap) -> GraphMap {
        GraphMap {
            vertex: self.vertex.iter().map(|&v| then.vertex[v]).collect(),
            edge: self
                .edge
                .iter()
                .map(|s| {
                    let t = then.edge[s.edge];
                    if s.forward {
                        t
                    } else {
                        t.reversed()
                    }
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex.iter().enumerate().all(|(i, &v)| i == v)
            && self
                .edge
                .iter()
                .enumerate()
                .all(|(i, s)| *s == SignedEdge::fwd(i))
    }

    /// Induced map on the edge-subdivision of the graph (old vertices first,
    /// then one midpoint per edge, halves `2e`, `2e+1`), matching
    /// [`crate::subdivide::subdivide_edges`] on a graph.
    pub fn on_subdivision(&self, g: &Complex) -> GraphMap {
        let nv = g.num_vertices();
        let mut vertex: Vec<usize> = self.vertex.clone();
        for e in 0..g.num_edges() {
            vertex.push(nv + self.edge[e].edge);
        }
        let mut edge = Vec::with_capacity(2 * g.num_edges());
        for e in 0..g.num_edges() {
            let s = self.edge[e];
            let (h0, h1) = (2 * s.edge, 2 * s.edge + 1);
            if s.forward {
                edge.push(SignedEdge::fwd(h0));
                edge.push(SignedEdge::fwd(h1));
            } else {
                edge.push(SignedEdge::bwd(h1));
                edge.push(SignedEdge::bwd(h0));
            }
        }
        GraphMap { vertex, edge }
    }
}

/// A map between product complexes defined on factor tuples. `f` returns the
/// target tuple together with, per target coordinate, whether an edge factor
/// keeps its orientation.
pub fn product_cell_map<F>(src: &ProductComplex, dst: &ProductComplex, f: F) -> CellMap
where
    F: Fn(&[FactorCell]) -> Vec<(FactorCell, bool)>,
{
    let strip = |img: &[(FactorCell, bool)]| -> Vec<FactorCell> { img.iter().map(|p| p.0).collect() };
    let vertex_map = src
        .vertex_tuples
        .iter()
        .map(|t| dst.index[&strip(&f(t))])
        .collect();
    let edge_map = src
        .edge_tuples
        .iter()
        .map(|t| {
            let img = f(t);
            let tt = strip(&img);
            match img.iter().find(|p| p.0.is_edge()) {
                Some(&(_, fwd)) => EdgeImage::Edge(SignedEdge {
                    edge: dst.index[&tt],
                    forward: fwd,
                }),
                None => EdgeImage::Collapsed(dst.index[&tt]),
            }
        })
        .collect();
    let face_map = src
        .face_tuples
        .iter()
        .map(|t| {
            let tt = strip(&f(t));
            if tt.iter().filter(|c| c.is_edge()).count() == 2 {
                FaceImage::Face(dst.index[&tt])
            } else {
                FaceImage::Degenerate
            }
        })
        .collect();
    CellMap {
        vertex_map,
        edge_map,
        face_map,
    }
}

/// Coordinatewise extension of a graph automorphism to `g^n`.
pub fn diagonal_map(p: &ProductComplex, m: &GraphMap) -> CellMap {
    product_cell_map(p, p, |t| t.iter().map(|&c| m.apply(c)).collect())
}

/// Projection onto the listed coordinates (zero-based), in that order.
pub fn coordinate_projection(
    src: &ProductComplex,
    dst: &ProductComplex,
    keep: &[usize],
) -> CellMap {
    product_cell_map(src, dst, |t| keep.iter().map(|&k| (t[k], true)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_loop() -> Complex {
        let mut g = Complex::new();
        let v = g.add_vertex("*");
        g.add_edge(v, v, "x").unwrap();
        g
    }

    #[test]
    fn theta_squared_counts() {
        let p = graph_power(&theta_graph(), 2).unwrap();
        // V = 2^2, E = 2 * (4 * 2), F = 4^2
        assert_eq!(p.complex.num_vertices(), 4);
        assert_eq!(p.complex.num_edges(), 16);
        assert_eq!(p.complex.num_faces(), 16);
    }

    #[test]
    fn loop_squared_is_one_square_torus() {
        let p = graph_power(&single_loop(), 2).unwrap();
        assert_eq!(p.complex.counts().vertices, 1);
        assert_eq!(p.complex.num_edges(), 2);
        assert_eq!(p.complex.num_faces(), 1);
        assert_eq!(p.complex.euler_characteristic(), 0);
    }

    #[test]
    fn first_power_is_the_graph() {
        let g = theta_graph();
        let p = graph_power(&g, 1).unwrap();
        assert_eq!(p.complex.counts(), g.counts());
        assert!(graph_power(&g, 0).is_err());
    }

    #[test]
    fn euler_characteristic_multiplies() {
        let g = theta_graph();
        let chi = g.euler_characteristic();
        for n in 1..=3 {
            let p = graph_power(&g, n).unwrap();
            assert_eq!(p.complex.euler_characteristic(), chi.pow(n as u32));
        }
    }

    #[test]
    fn cubes_pair_their_squares() {
        let p = graph_power(&theta_graph(), 3).unwrap();
        assert_eq!(p.complex.num_cubes(), 64);
        for k in 0..p.complex.num_cubes() {
            assert_eq!(p.complex.cube_edges(k).len(), 12);
            assert_eq!(p.complex.cube_vertices(k).len(), 8);
        }
    }

    #[test]
    fn diagonal_swap_is_cellular_involution() {
        let g = theta_graph();
        let sigma = GraphMap {
            vertex: vec![0, 1],
            edge: vec![
                SignedEdge::fwd(1),
                SignedEdge::fwd(0),
                SignedEdge::fwd(3),
                SignedEdge::fwd(2),
            ],
        };
        let p = graph_power(&g, 2).unwrap();
        let m = diagonal_map(&p, &sigma);
        m.check_cellular(&p.complex, &p.complex).unwrap();
        assert!(m.compose(&m).is_identity());
    }

    #[test]
    fn projection_is_cellular() {
        let g = theta_graph();
        let p3 = graph_power(&g, 3).unwrap();
        let p2 = graph_power(&g, 2).unwrap();
        let pr = coordinate_projection(&p3, &p2, &[1, 2]);
        pr.check_cellular(&p3.complex, &p2.complex).unwrap();
    }
}
