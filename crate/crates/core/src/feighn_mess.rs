//! The wedge `Y = a ∨ b` with the involution fixing `a` and flipping `b`
//! about its midpoint `p`, its powers `Yⁿ`, the fixed set of the diagonal
//! involution, the height `h` (slope one along `a`, level along `b`) and
//! the ascending links of horizontal cells.
//!
//! `Y` is subdivided at `p`, so `b` becomes `b₁: 0→p` followed by
//! `b₂: p→0` and the involution is cellular.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellMap, Complex, ComplexError, EdgeImage, FaceImage, SignedEdge, UnionFind};
use crate::morse::{ascending_vertex_link, edge_up_link, is_simplex, HeightFunction, MorseError};
use crate::product::{diagonal_map, graph_power, FactorCell, GraphMap, ProductComplex};

#[derive(Debug, Error)]
pub enum FeighnMessError {
    #[error("n = {0} is outside 1..={1}")]
    NOutOfRange(usize, usize),
    #[error("radius {0} exceeds the cap {1}")]
    RadiusTooLarge(usize, usize),
    #[error("involution is not of order two")]
    NotInvolution,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

pub const ZERO: usize = 0;
pub const P: usize = 1;
pub const EDGE_A: usize = 0;
pub const EDGE_B1: usize = 1;
pub const EDGE_B2: usize = 2;

pub const MAX_CENSUS_N: usize = 6;
pub const MAX_LINK_N: usize = 3;
pub const MAX_BALL_N: usize = 2;
pub const MAX_RADIUS: usize = 4;

#[derive(Debug, Clone)]
pub struct WedgeData {
    pub y: Complex,
    pub sigma: GraphMap,
}

impl WedgeData {
    pub fn new() -> WedgeData {
        let mut y = Complex::new();
        let z = y.add_vertex("0");
        let p = y.add_vertex("p");
        y.add_edge(z, z, "a").unwrap();
        y.add_edge(z, p, "b1").unwrap();
        y.add_edge(p, z, "b2").unwrap();
        let sigma = GraphMap {
            vertex: vec![ZERO, P],
            edge: vec![
                SignedEdge::fwd(EDGE_A),
                SignedEdge::bwd(EDGE_B2),
                SignedEdge::bwd(EDGE_B1),
            ],
        };
        WedgeData { y, sigma }
    }

    /// Slope of each edge of `Y`.
    pub fn factor_offsets(&self) -> [i64; 3] {
        [1, 0, 0]
    }
}

impl Default for WedgeData {
    fn default() -> Self {
        WedgeData::new()
    }
}

/// `Yⁿ` (3-skeleton), `σₙ` and the height `h = Σ hᵢ`.
#[derive(Debug, Clone)]
pub struct PowerData {
    pub wedge: WedgeData,
    pub power: ProductComplex,
    pub sigma: CellMap,
    pub height: HeightFunction,
}

pub fn power_data(n: usize) -> Result<PowerData, FeighnMessError> {
    if !(1..=MAX_CENSUS_N).contains(&n) {
        return Err(FeighnMessError::NOutOfRange(n, MAX_CENSUS_N));
    }
    let wedge = WedgeData::new();
    let power = graph_power(&wedge.y, n)?;
    let sigma = diagonal_map(&power, &wedge.sigma);
    sigma.check_cellular(&power.complex, &power.complex)?;
    if !sigma.compose(&sigma).is_identity() {
        return Err(FeighnMessError::NotInvolution);
    }
    let fo = wedge.factor_offsets();
    let offsets = power
        .edge_tuples
        .iter()
        .map(|t| {
            t.iter()
                .find_map(|c| match *c {
                    FactorCell::E(e) => Some(fo[e]),
                    FactorCell::V(_) => None,
                })
                .unwrap()
        })
        .collect();
    Ok(PowerData {
        wedge,
        power,
        sigma,
        height: HeightFunction { offsets },
    })
}

/// Heights are preserved by `σₙ`: each edge keeps its slope under the map
/// (a reversed image negates the slope).
pub fn height_is_equivariant(d: &PowerData) -> bool {
    d.sigma.edge_map.iter().enumerate().all(|(e, img)| match img {
        EdgeImage::Edge(s) => {
            let o = d.height.offsets[s.edge];
            (if s.forward { o } else { -o }) == d.height.offsets[e]
        }
        EdgeImage::Collapsed(_) => false,
    })
}

/// Per coordinate, the component of `Fix(σ)` in `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FixFactor {
    ACircle,
    Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub signature: Vec<FixFactor>,
    /// Dimension of the torus `a^i`.
    pub torus_dim: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSetCensus {
    pub n: usize,
    pub components: Vec<FixedComponent>,
    pub types: usize,
    /// The fixed cells of `σₙ` fall into exactly the signature components,
    /// each with the cell count of the 3-skeleton of `a^i`.
    pub verified: bool,
}

impl FixedSetCensus {
    pub fn passes(&self) -> bool {
        self.verified && self.components.len() == 1 << self.n && self.types == self.n + 1
    }
}

fn fix_factor(c: FactorCell) -> Option<FixFactor> {
    match c {
        FactorCell::V(ZERO) | FactorCell::E(EDGE_A) => Some(FixFactor::ACircle),
        FactorCell::V(P) => Some(FixFactor::Point),
        _ => None,
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn fixed_census(n: usize) -> Result<FixedSetCensus, FeighnMessError> {
    let d = power_data(n)?;
    let c = &d.power.complex;
    let m = &d.sigma;
    // a cell is fixed when the map sends it to itself with its orientation
    let fixed_v: Vec<usize> = (0..c.num_vertices()).filter(|&v| m.vertex_map[v] == v).collect();
    let fixed_e: Vec<usize> = (0..c.num_edges())
        .filter(|&e| m.edge_map[e] == EdgeImage::Edge(SignedEdge::fwd(e)))
        .collect();
    let fixed_f: Vec<usize> = (0..c.num_faces())
        .filter(|&f| m.face_map[f] == FaceImage::Face(f))
        .collect();
    let mut uf = UnionFind::new(c.num_vertices());
    for &e in &fixed_e {
        uf.union(c.edge(e).src, c.edge(e).dst);
    }
    let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in &fixed_v {
        *by_root.entry(uf.find(v)).or_default() += 1;
    }
    for &e in &fixed_e {
        *by_root.entry(uf.find(c.edge(e).src)).or_default() += 1;
    }
    let mut verified = true;
    for &f in &fixed_f {
        let v = c.tail(c.face(f).boundary[0]);
        *by_root.entry(uf.find(v)).or_default() += 1;
        let t = &d.power.face_tuples[f];
        verified &= t.iter().all(|&x| fix_factor(x).is_some());
    }
    // cubes are fixed exactly when all three of their edge factors are `a`
    for (k, t) in d.power.cube_tuples.iter().enumerate() {
        if t.iter().all(|&x| fix_factor(x).is_some()) {
            let v = c.cube_vertices(k).into_iter().next().unwrap();
            *by_root.entry(uf.find(v)).or_default() += 1;
        }
    }
    let mut comps = Vec::new();
    for (&root, &cells) in &by_root {
        let sig: Vec<FixFactor> = d.power.vertex_tuples[root]
            .iter()
            .map(|&x| fix_factor(x).unwrap())
            .collect();
        let i = sig.iter().filter(|&&s| s == FixFactor::ACircle).count();
        // cells of a^i with at most three edge factors
        let expect: usize = (0..=i.min(3)).map(|k| binomial(i, k)).sum();
        verified &= cells == expect;
        comps.push(FixedComponent {
            signature: sig,
            torus_dim: i,
            cells,
        });
    }
    comps.sort_by(|a, b| a.signature.cmp(&b.signature));
    let sigs: BTreeSet<&Vec<FixFactor>> = comps.iter().map(|c| &c.signature).collect();
    verified &= sigs.len() == comps.len();
    let types = comps.iter().map(|c| c.torus_dim).collect::<BTreeSet<_>>().len();
    Ok(FixedSetCensus {
        n,
        components: comps,
        types,
        verified,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizontalLink {
    pub cell: String,
    pub dim: usize,
    pub zero_factors: usize,
    pub p_factors: usize,
    /// Join model: a simplex on one vertex per `0` factor.
    pub join_vertices: usize,
    /// Slab-star enumeration.
    pub oracle_vertices: usize,
    pub oracle_dim: i64,
    pub oracle_is_simplex: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkClassification {
    pub n: usize,
    pub cells: Vec<HorizontalLink>,
    pub all_agree: bool,
    /// Vertex and edge cells also checked against the Morse engine's link
    /// routines.
    pub engine_checks: usize,
    pub engine_agrees: bool,
    /// The top horizontal cell `b×…×b` has empty ascending link.
    pub top_cells_empty: bool,
    /// For the all-`0` vertex the computed link is a simplex on `n`
    /// vertices, dimension `n − 1`; a count of `n` would be one higher.
    pub vertex_link_dim: i64,
    pub dimension_note: String,
}

impl LinkClassification {
    pub fn passes(&self) -> bool {
        self.all_agree && self.engine_agrees && self.top_cells_empty
    }
}

/// Ascending link of a horizontal cell by brute force over all cells
/// containing it: an occurrence of `t` in a cell `C` is ascending when every
/// direction of `C` leaving `t` rises. Returns the simplices as sets of
/// direction indices.
pub fn slab_star_link(d: &PowerData, t: &[FactorCell]) -> Vec<Vec<usize>> {
    let y = &d.wedge.y;
    let p = &d.power;
    let n = t.len();
    let cells = p
        .vertex_tuples
        .iter()
        .chain(&p.edge_tuples)
        .chain(&p.face_tuples)
        .chain(&p.cube_tuples);
    let mut directions: HashMap<(usize, usize, bool), usize> = HashMap::new();
    let mut simplices = BTreeSet::new();
    for cc in cells {
        let mut free = Vec::new();
        let mut contains = true;
        for k in 0..n {
            if cc[k] == t[k] {
                continue;
            }
            match (t[k], cc[k]) {
                (FactorCell::V(v), FactorCell::E(e)) if y.edge(e).src == v || y.edge(e).dst == v => {
                    free.push((k, e, v));
                }
                _ => {
                    contains = false;
                    break;
                }
            }
        }
        if !contains || free.is_empty() {
            continue;
        }
        // every way of reading t as a face of C
        let choices: Vec<Vec<(usize, usize, bool)>> = free
            .iter()
            .map(|&(k, e, v)| {
                let ed = y.edge(e);
                let mut out = Vec::new();
                if ed.src == v {
                    out.push((k, e, true));
                }
                if ed.dst == v {
                    out.push((k, e, false));
                }
                out
            })
            .collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let occ: Vec<(usize, usize, bool)> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
            let rising = occ.iter().all(|&(k, e, start)| {
                // read the slope off an actual edge at a corner of t
                let mut dt: Vec<FactorCell> = t
                    .iter()
                    .map(|&x| match x {
                        FactorCell::E(f) => FactorCell::V(y.edge(f).src),
                        v => v,
                    })
                    .collect();
                dt[k] = FactorCell::E(e);
                let id = p.id_of(&dt).unwrap();
                let o = d.height.offsets[id];
                (if start { o } else { -o }) == 1
            });
            if rising {
                let mut s: Vec<usize> = occ
                    .iter()
                    .map(|dir| {
                        let next = directions.len();
                        *directions.entry(*dir).or_insert(next)
                    })
                    .collect();
                s.sort_unstable();
                simplices.insert(s);
            }
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    simplices.into_iter().collect()
}

fn is_horizontal(t: &[FactorCell]) -> bool {
    t.iter().all(|&c| c != FactorCell::E(EDGE_A))
}

pub fn classify_horizontal_links(n: usize) -> Result<LinkClassification, FeighnMessError> {
    if !(1..=MAX_LINK_N).contains(&n) {
        return Err(FeighnMessError::NOutOfRange(n, MAX_LINK_N));
    }
    let d = power_data(n)?;
    let p = &d.power;
    let c = &p.complex;
    let mut cells = Vec::new();
    let mut engine_checks = 0;
    let mut engine_agrees = true;
    let mut top_empty = true;
    let all = [&p.vertex_tuples, &p.edge_tuples, &p.face_tuples, &p.cube_tuples];
    for (dim, tuples) in all.iter().enumerate() {
        for (id, t) in tuples.iter().enumerate() {
            if !is_horizontal(t) {
                continue;
            }
            let zeros = t.iter().filter(|&&x| x == FactorCell::V(ZERO)).count();
            let ps = t.iter().filter(|&&x| x == FactorCell::V(P)).count();
            let simplices = slab_star_link(&d, t);
            let (full, sdim) = is_simplex(&simplices);
            let nverts = simplices.iter().filter(|s| s.len() == 1).count();
            let agrees = full && nverts == zeros && sdim == zeros as i64 - 1;
            if dim == n.min(3) && zeros + ps == 0 {
                top_empty &= simplices.is_empty();
            }
            if dim == 0 {
                let (g, _) = ascending_vertex_link(c, &d.height, id)?;
                let pairs = simplices.iter().filter(|s| s.len() == 2).count();
                engine_checks += 1;
                engine_agrees &= g.num_vertices() == nverts && g.edges.len() == pairs;
            } else if dim == 1 {
                engine_checks += 1;
                engine_agrees &= edge_up_link(c, &d.height, id)?.len() == nverts;
            }
            cells.push(HorizontalLink {
                cell: p.tuple_label(t),
                dim,
                zero_factors: zeros,
                p_factors: ps,
                join_vertices: zeros,
                oracle_vertices: nverts,
                oracle_dim: sdim,
                oracle_is_simplex: full,
                agrees,
            });
        }
    }
    let origin = p.tuple_label(&vec![FactorCell::V(ZERO); n]);
    let vdim = cells.iter().find(|h| h.cell == origin).map_or(-1, |h| h.oracle_dim);
    Ok(LinkClassification {
        n,
        all_agree: cells.iter().all(|h| h.agrees),
        cells,
        engine_checks,
        engine_agrees,
        top_cells_empty: top_empty,
        vertex_link_dim: vdim,
        dimension_note: format!(
            "link of an i-face with all vertex factors 0 is a simplex on n-i vertices (dimension n-i-1); \
             the (n-i)-simplex count differs by one (computed {vdim} for i = 0, n = {n})"
        ),
    })
}

/// Step in the universal cover tree of `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeStep {
    pub edge: usize,
    pub forward: bool,
}

impl TreeStep {
    fn reversed(self) -> TreeStep {
        TreeStep {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// Ball of the given radius about a lift of `p` in the universal cover of
/// `Y`, a tree with four ends at each lift of `0` and two at each lift of
/// `p`.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub kind: Vec<usize>,
    pub parent: Vec<Option<(usize, TreeStep)>>,
    pub height: Vec<i64>,
    pub depth: Vec<usize>,
    children: HashMap<(usize, TreeStep), usize>,
}

impl TreeBall {
    pub fn build(y: &Complex, radius: usize) -> TreeBall {
        let mut b = TreeBall {
            kind: vec![P],
            parent: vec![None],
            height: vec![0],
            depth: vec![0],
            children: HashMap::new(),
        };
        let mut frontier = vec![0];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &node in &frontier {
                let back = b.parent[node].map(|(_, s)| s.reversed());
                for (e, ed) in y.edges().iter().enumerate() {
                    for forward in [true, false] {
                        let s = TreeStep { edge: e, forward };
                        let (from, to) = if forward { (ed.src, ed.dst) } else { (ed.dst, ed.src) };
                        if from != b.kind[node] || Some(s) == back {
                            continue;
                        }
                        let id = b.kind.len();
                        let slope = if e == EDGE_A { 1 } else { 0 };
                        b.kind.push(to);
                        b.parent.push(Some((node, s)));
                        b.height.push(b.height[node] + if forward { slope } else { -slope });
                        b.depth.push(b.depth[node] + 1);
                        b.children.insert((node, s), id);
                        next.push(id);
                    }
                }
            }
            frontier = next;
        }
        b
    }

    pub fn len(&self) -> usize {
        self.kind.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kind.is_empty()
    }

    pub fn child(&self, node: usize, s: TreeStep) -> Option<usize> {
        self.children.get(&(node, s)).copied()
    }

    /// Lift of a graph automorphism fixing the root, node by node in BFS
    /// order. `None` if some image leaves the ball.
    pub fn lift(&self, m: &GraphMap) -> Option<Vec<usize>> {
        let mut img = vec![usize::MAX; self.len()];
        img[0] = 0;
        for node in 1..self.len() {
            let (par, s) = self.parent[node]?;
            let t = m.edge[s.edge];
            let s2 = TreeStep {
                edge: t.edge,
                forward: t.forward == s.forward,
            };
            img[node] = self.child(img[par], s2)?;
        }
        Some(img)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallReport {
    pub n: usize,
    pub radius: usize,
    pub ball_vertices: usize,
    pub fixed_vertices: usize,
    pub fixed_heights: Vec<i64>,
    pub is_involution: bool,
    pub preserves_adjacency: bool,
    pub preserves_height: bool,
}

impl BallReport {
    pub fn unique_fixed_point(&self) -> bool {
        self.fixed_vertices == 1 && self.fixed_heights == [0] && self.is_involution && self.preserves_adjacency
    }
}

/// Fixed vertices of the lift of `σₙ` (or of `map` on each factor) in the
/// product of radius-`radius` tree balls about the base lift of `(p,…,p)`.
pub fn ball_fixed_points_with(n: usize, radius: usize, map: &GraphMap) -> Result<BallReport, FeighnMessError> {
    if !(1..=MAX_BALL_N).contains(&n) {
        return Err(FeighnMessError::NOutOfRange(n, MAX_BALL_N));
    }
    if radius > MAX_RADIUS {
        return Err(FeighnMessError::RadiusTooLarge(radius, MAX_RADIUS));
    }
    let w = WedgeData::new();
    let tb = TreeBall::build(&w.y, radius);
    let img = tb.lift(map).ok_or(FeighnMessError::NotInvolution)?;
    let involution = (0..tb.len()).all(|x| img[img[x]] == x);
    let adjacency = (1..tb.len()).all(|x| {
        let (par, _) = tb.parent[x].unwrap();
        let (ip, _) = tb.parent[img[x]].unwrap();
        ip == img[par]
    });
    let heights = (0..tb.len()).all(|x| tb.height[img[x]] == tb.height[x]);
    // product ball: tuples of factor nodes
    let size = tb.len();
    let total = size.pow(n as u32);
    let mut fixed_heights = Vec::new();
    for code in 0..total {
        let mut x = code;
        let mut h = 0;
        let mut fixed = true;
        for _ in 0..n {
            let node = x % size;
            x /= size;
            fixed &= img[node] == node;
            h += tb.height[node];
        }
        if fixed {
            fixed_heights.push(h);
        }
    }
    fixed_heights.sort_unstable();
    let fixed = fixed_heights.len();
    fixed_heights.dedup();
    Ok(BallReport {
        n,
        radius,
        ball_vertices: total,
        fixed_vertices: fixed,
        fixed_heights,
        is_involution: involution,
        preserves_adjacency: adjacency,
        preserves_height: heights,
    })
}

pub fn ball_fixed_points(n: usize, radius: usize) -> Result<BallReport, FeighnMessError> {
    ball_fixed_points_with(n, radius, &WedgeData::new().sigma)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeighnMessReport {
    pub censuses: Vec<FixedSetCensus>,
    pub links: Vec<LinkClassification>,
    pub balls: Vec<BallReport>,
    pub involutions_ok: bool,
    pub height_equivariant: bool,
}

impl FeighnMessReport {
    pub fn passes(&self) -> bool {
        self.involutions_ok
            && self.height_equivariant
            && self.censuses.iter().all(|c| c.passes())
            && self.links.iter().all(|l| l.passes())
            && self.balls.iter().all(|b| b.unique_fixed_point())
    }
}

/// Census for `1..=max_n`, link classification up to `min(max_n, 3)`, and
/// the ball checks at `(1,3)` and `(2,2)`.
pub fn run_feighn_mess(max_n: usize) -> Result<FeighnMessReport, FeighnMessError> {
    let mut censuses = Vec::new();
    let mut links = Vec::new();
    let mut inv = true;
    let mut eq = true;
    for n in 1..=max_n {
        let d = power_data(n)?;
        inv &= d.sigma.compose(&d.sigma).is_identity();
        eq &= height_is_equivariant(&d) && d.height.validate_affine_cubical(&d.power.complex).is_ok();
        censuses.push(fixed_census(n)?);
        if n <= MAX_LINK_N {
            links.push(classify_horizontal_links(n)?);
        }
    }
    let balls = vec![ball_fixed_points(1, 3)?, ball_fixed_points(2, 2)?];
    Ok(FeighnMessReport {
        censuses,
        links,
        balls,
        involutions_ok: inv,
        height_equivariant: eq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn n1_census() {
        let c = fixed_census(1).unwrap();
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.types, 2);
        assert_eq!(c.components[0].signature, vec![FixFactor::ACircle]);
        assert_eq!(c.components[0].cells, 2);
        assert_eq!(c.components[1].cells, 1);
        assert!(c.passes());
    }

    #[test]
    fn census_closed_form() {
        for n in 1..=MAX_CENSUS_N {
            let c = fixed_census(n).unwrap();
            assert_eq!(c.components.len(), 1 << n, "n = {n}");
            assert_eq!(c.types, n + 1);
            assert!(c.verified);
        }
        assert!(matches!(fixed_census(7), Err(FeighnMessError::NOutOfRange(7, 6))));
        assert!(fixed_census(0).is_err());
    }

    #[test]
    fn sigma_is_an_involution_preserving_height() {
        for n in 1..=3 {
            let d = power_data(n).unwrap();
            assert!(d.sigma.compose(&d.sigma).is_identity());
            assert!(height_is_equivariant(&d));
            d.height.validate_affine_cubical(&d.power.complex).unwrap();
        }
    }

    #[test]
    fn link_examples() {
        let l = classify_horizontal_links(2).unwrap();
        assert!(l.passes());
        let get = |name: &str| l.cells.iter().find(|h| h.cell == name).unwrap().clone();
        assert_eq!(get("(b1,b2)").oracle_vertices, 0);
        assert_eq!(get("(b1,b2)").oracle_dim, -1);
        assert_eq!(get("(b1,0)").oracle_vertices, 1);
        let v = get("(0,0)");
        assert_eq!((v.oracle_vertices, v.oracle_dim, v.oracle_is_simplex), (2, 1, true));
        assert_eq!(get("(p,0)").oracle_vertices, 1);
        assert_eq!(get("(p,p)").oracle_vertices, 0);
        assert_eq!(l.vertex_link_dim, 1);
    }

    #[test]
    fn links_agree_up_to_three() {
        for n in 1..=3 {
            let l = classify_horizontal_links(n).unwrap();
            assert!(l.all_agree && l.engine_agrees && l.top_cells_empty, "n = {n}");
            assert_eq!(l.vertex_link_dim, n as i64 - 1);
        }
        assert!(classify_horizontal_links(4).is_err());
    }

    #[test]
    fn ball_fixed_points_examples() {
        let b = ball_fixed_points(1, 3).unwrap();
        assert!(b.unique_fixed_point());
        assert_eq!(b.fixed_heights, vec![0]);
        assert!(ball_fixed_points(2, 2).unwrap().unique_fixed_point());
        let id = GraphMap {
            vertex: vec![0, 1],
            edge: (0..3).map(SignedEdge::fwd).collect(),
        };
        let r = ball_fixed_points_with(1, 3, &id).unwrap();
        assert_eq!(r.fixed_vertices, r.ball_vertices);
        assert!(ball_fixed_points(3, 1).is_err());
        assert!(ball_fixed_points(1, 5).is_err());
    }

    #[test]
    fn tree_ball_sizes() {
        let y = WedgeData::new().y;
        let sizes: Vec<usize> = (0..4).map(|r| TreeBall::build(&y, r).len()).collect();
        // p has two neighbours, each 0 has three further ends
        assert_eq!(sizes, vec![1, 3, 9, 23]);
    }

    proptest! {
        #[test]
        fn lift_fixes_only_the_root(n in 1usize..=2, r in 0usize..=3) {
            let b = ball_fixed_points(n, r).unwrap();
            prop_assert!(b.unique_fixed_point());
            prop_assert!(b.preserves_height);
        }
    }
}
