//! Vertex links with corner angles, weighted girth, the structural large-link
//! test, hyperbolic polygon angles, and the flag condition.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Complex, SignedEdge};

/// Absolute tolerance for angle comparisons.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("angle table does not match face {0}")]
    AngleShape(usize),
    #[error("no hyperbolic {k}-gon with side {side}")]
    NoHyperbolicSolution { k: usize, side: f64 },
    #[error("link is not simplicial: {0}")]
    NonSimplicial(String),
}

/// Corner angles, `angles[f][k]` at the tail of boundary step `k` of face `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleStructure {
    pub angles: Vec<Vec<f64>>,
}

impl AngleStructure {
    pub fn uniform(c: &Complex, angle: f64) -> Self {
        AngleStructure {
            angles: c
                .faces()
                .iter()
                .map(|f| vec![angle; f.boundary.len()])
                .collect(),
        }
    }
}

/// An end of an edge: `start` is the initial end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEnd {
    pub edge: usize,
    pub start: bool,
}

impl EdgeEnd {
    /// The end through which a step arrives at its head.
    pub fn arrival(s: SignedEdge) -> Self {
        EdgeEnd {
            edge: s.edge,
            start: !s.forward,
        }
    }

    /// The end through which a step leaves its tail.
    pub fn departure(s: SignedEdge) -> Self {
        EdgeEnd {
            edge: s.edge,
            start: s.forward,
        }
    }

    /// `label⁻` for the initial end, `label⁺` for the terminal end.
    pub fn label(&self, c: &Complex) -> String {
        let l = &c.edge(self.edge).label;
        format!("{l}{}", if self.start { "⁻" } else { "⁺" })
    }
}

/// Angle-weighted graph; parallel edges and loops allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinkGraph {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize, f64)>,
}

impl LinkGraph {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) {
        self.edges.push((u, v, w));
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices()];
        for &(u, v, _) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            if u != v {
                adj[v].push((u, i));
            }
        }
        adj
    }

    /// `u v weight` per line, labels on the left.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v, w) in &self.edges {
            let _ = writeln!(s, "{} {} {:.12}", self.labels[u], self.labels[v], w);
        }
        s
    }

    /// Replaces chains through degree-two vertices not satisfying `keep` by
    /// single edges carrying the summed weight.
    pub fn smooth(&self, keep: impl Fn(usize) -> bool) -> LinkGraph {
        let deg = self.degrees();
        let removable = |v: usize| !keep(v) && deg[v] == 2;
        let adj = self.adjacency();
        let mut out = LinkGraph::default();
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        for v in 0..self.num_vertices() {
            if !removable(v) {
                new_id[v] = out.add_vertex(self.labels[v].clone());
            }
        }
        let mut used = vec![false; self.edges.len()];
        for u in 0..self.num_vertices() {
            if removable(u) {
                continue;
            }
            for &(first, e) in &adj[u] {
                if used[e] {
                    continue;
                }
                used[e] = true;
                let mut w = self.edges[e].2;
                let (mut cur, mut via) = (first, e);
                while removable(cur) {
                    let Some(&(nxt, e2)) = adj[cur].iter().find(|&&(_, id)| id != via) else {
                        break;
                    };
                    used[e2] = true;
                    w += self.edges[e2].2;
                    cur = nxt;
                    via = e2;
                }
                out.add_edge(new_id[u], new_id[cur], w);
            }
        }
        out
    }

    pub fn induced(&self, keep: &BTreeSet<usize>) -> LinkGraph {
        let mut out = LinkGraph::default();
        let mut id = BTreeMap::new();
        for &v in keep {
            id.insert(v, out.add_vertex(self.labels[v].clone()));
        }
        for &(u, v, w) in &self.edges {
            if let (Some(&a), Some(&b)) = (id.get(&u), id.get(&v)) {
                out.add_edge(a, b, w);
            }
        }
        out
    }
}

/// One link vertex per edge end at `v`, one weighted link edge per corner.
/// Ends are labelled `label⁻` (initial) and `label⁺` (terminal).
pub fn vertex_link(
    c: &Complex,
    angles: &AngleStructure,
    v: usize,
) -> Result<(LinkGraph, Vec<EdgeEnd>), CurvatureError> {
    if v >= c.num_vertices() {
        return Err(CurvatureError::NoSuchVertex(v));
    }
    let mut g = LinkGraph::default();
    let mut ends = Vec::new();
    let mut index = BTreeMap::new();
    for (e, ed) in c.edges().iter().enumerate() {
        for (start, endpoint) in [(true, ed.src), (false, ed.dst)] {
            if endpoint == v {
                let end = EdgeEnd { edge: e, start };
                index.insert(end, g.add_vertex(end.label(c)));
                ends.push(end);
            }
        }
    }
    for (f, face) in c.faces().iter().enumerate() {
        let a = angles
            .angles
            .get(f)
            .filter(|a| a.len() == face.boundary.len())
            .ok_or(CurvatureError::AngleShape(f))?;
        let n = face.boundary.len();
        for k in 0..n {
            let s = face.boundary[k];
            if c.tail(s) != v {
                continue;
            }
            let prev = face.boundary[(k + n - 1) % n];
            let x = index[&EdgeEnd::arrival(prev)];
            let y = index[&EdgeEnd::departure(s)];
            g.add_edge(x, y, a[k]);
        }
    }
    Ok((g, ends))
}

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64, usize);
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Dist {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

fn shortest_avoiding(
    adj: &[Vec<(usize, usize)>],
    edges: &[(usize, usize, f64)],
    from: usize,
    to: usize,
    banned: usize,
) -> f64 {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[from] = 0.0;
    heap.push(Dist(0.0, from));
    while let Some(Dist(d, u)) = heap.pop() {
        if u == to {
            return d;
        }
        if d > dist[u] {
            continue;
        }
        for &(v, e) in &adj[u] {
            if e == banned {
                continue;
            }
            let nd = d + edges[e].2;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Dist(nd, v));
            }
        }
    }
    f64::INFINITY
}

/// Length of the shortest cycle: for each edge, its weight plus the shortest
/// path between its ends avoiding it. Infinity for forests.
pub fn weighted_girth(l: &LinkGraph) -> f64 {
    let adj = l.adjacency();
    let mut best = f64::INFINITY;
    for (i, &(u, v, w)) in l.edges.iter().enumerate() {
        if w >= best {
            continue;
        }
        let rest = if u == v {
            0.0
        } else {
            shortest_avoiding(&adj, &l.edges, u, v, i)
        };
        best = best.min(w + rest);
    }
    best
}

/// Outcome of [`structural_large_check`], one flag per condition.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralReport {
    pub bipartite: bool,
    pub no_bigons: bool,
    pub min_weight: f64,
    pub edges_checked: usize,
}

impl StructuralReport {
    pub fn passes(&self) -> bool {
        self.bipartite && self.no_bigons && self.min_weight >= PI / 2.0 - ANGLE_TOL
    }
}

/// Checks the subgraph on vertices with a side assigned: every edge crosses
/// the bipartition, no two edges join the same pair, all weights ≥ π/2.
pub fn structural_large_check(l: &LinkGraph, side: &[Option<bool>]) -> StructuralReport {
    let mut bipartite = true;
    let mut pairs = BTreeSet::new();
    let mut no_bigons = true;
    let mut min_weight = f64::INFINITY;
    let mut edges_checked = 0;
    for &(u, v, w) in &l.edges {
        let (Some(Some(su)), Some(Some(sv))) = (side.get(u), side.get(v)) else {
            continue;
        };
        edges_checked += 1;
        if su == sv {
            bipartite = false;
        }
        if !pairs.insert((u.min(v), u.max(v))) {
            no_bigons = false;
        }
        min_weight = min_weight.min(w);
    }
    StructuralReport {
        bipartite,
        no_bigons,
        min_weight,
        edges_checked,
    }
}

/// Interior angle of the regular hyperbolic `k`-gon with the given side:
/// `cos(π/k) = cosh(side/2)·sin(θ/2)`.
pub fn regular_polygon_angle(k: usize, side: f64) -> Result<f64, CurvatureError> {
    let err = CurvatureError::NoHyperbolicSolution { k, side };
    if k < 3 || side.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(err);
    }
    let x = (PI / k as f64).cos() / (side / 2.0).cosh();
    if !(x > 0.0 && x < 1.0) {
        return Err(err);
    }
    Ok(2.0 * x.asin())
}

/// Side of the regular right-angled hyperbolic pentagon.
pub fn pentagon_side() -> f64 {
    2.0 * (std::f64::consts::SQRT_2 * (PI / 5.0).cos()).acosh()
}

/// Abstract simplicial complex of dimension ≤ 2 presented by its edges and
/// triangles (vertices are `0..num_vertices`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimplicialLink {
    pub num_vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl SimplicialLink {
    /// Errors on repeated vertices in a simplex or a simplex listed twice.
    pub fn check_simplicial(&self) -> Result<(), CurvatureError> {
        let mut seen2 = BTreeSet::new();
        for e in &self.edges {
            if e[0] == e[1] {
                return Err(CurvatureError::NonSimplicial(format!("degenerate edge {e:?}")));
            }
            if !seen2.insert((e[0].min(e[1]), e[0].max(e[1]))) {
                return Err(CurvatureError::NonSimplicial(format!("edge {e:?} repeated")));
            }
        }
        let mut seen3 = BTreeSet::new();
        for t in &self.triangles {
            let mut s = *t;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(CurvatureError::NonSimplicial(format!("degenerate triangle {t:?}")));
            }
            if !seen3.insert(s) {
                return Err(CurvatureError::NonSimplicial(format!("triangle {t:?} repeated")));
            }
        }
        Ok(())
    }
}

/// Gromov's condition: every clique in the 1-skeleton spans a simplex. Only
/// simplices of dimension ≤ 2 exist, so this means every 3-clique is a
/// triangle and there is no 4-clique.
pub fn flag_check(l: &SimplicialLink) -> Result<bool, CurvatureError> {
    l.check_simplicial()?;
    let mut adj = vec![BTreeSet::new(); l.num_vertices];
    let mut add = |a: usize, b: usize| {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for e in &l.edges {
        add(e[0], e[1]);
    }
    let mut tris = BTreeSet::new();
    for t in &l.triangles {
        let mut s = *t;
        s.sort_unstable();
        add(s[0], s[1]);
        add(s[1], s[2]);
        add(s[0], s[2]);
        tris.insert(s);
    }
    for a in 0..l.num_vertices {
        for &b in adj[a].range(a + 1..) {
            for &c in adj[b].range(b + 1..) {
                if !adj[a].contains(&c) {
                    continue;
                }
                if !tris.contains(&[a, b, c]) {
                    return Ok(false);
                }
                if adj[c].range(c + 1..).any(|d| adj[a].contains(d) && adj[b].contains(d)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Links of all vertices of a cube complex whose cubes have eight distinct
/// corners. Link vertices are edge ends, listed per vertex in `ends`.
pub fn cube_complex_links(
    c: &Complex,
) -> Result<Vec<(SimplicialLink, Vec<EdgeEnd>)>, CurvatureError> {
    let nv = c.num_vertices();
    let mut ends: Vec<Vec<EdgeEnd>> = vec![Vec::new(); nv];
    let mut index: BTreeMap<EdgeEnd, usize> = BTreeMap::new();
    for (e, ed) in c.edges().iter().enumerate() {
        for (start, endpoint) in [(true, ed.src), (false, ed.dst)] {
            let end = EdgeEnd { edge: e, start };
            index.insert(end, ends[endpoint].len());
            ends[endpoint].push(end);
        }
    }
    let mut links: Vec<SimplicialLink> = ends
        .iter()
        .map(|e| SimplicialLink {
            num_vertices: e.len(),
            ..Default::default()
        })
        .collect();
    for face in c.faces() {
        let n = face.boundary.len();
        for k in 0..n {
            let s = face.boundary[k];
            let prev = face.boundary[(k + n - 1) % n];
            links[c.tail(s)].edges.push([
                index[&EdgeEnd::arrival(prev)],
                index[&EdgeEnd::departure(s)],
            ]);
        }
    }
    for k in 0..c.num_cubes() {
        let corners = c.cube_vertices(k);
        if corners.len() != 8 {
            return Err(CurvatureError::NonSimplicial(format!(
                "cube {k} has repeated corners"
            )));
        }
        let edges = c.cube_edges(k);
        for &x in &corners {
            let at: Vec<usize> = edges
                .iter()
                .filter_map(|&e| {
                    let ed = c.edge(e);
                    if ed.src == x {
                        Some(index[&EdgeEnd { edge: e, start: true }])
                    } else if ed.dst == x {
                        Some(index[&EdgeEnd { edge: e, start: false }])
                    } else {
                        None
                    }
                })
                .collect();
            let tri: [usize; 3] = at.try_into().map_err(|_| {
                CurvatureError::NonSimplicial(format!("cube {k} corner {x}"))
            })?;
            links[x].triangles.push(tri);
        }
    }
    Ok(links.into_iter().zip(ends).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::graph_power;
    use proptest::prelude::*;

    fn torus() -> Complex {
        let mut g = Complex::new();
        let v = g.add_vertex("*");
        g.add_edge(v, v, "x").unwrap();
        graph_power(&g, 2).unwrap().complex
    }

    fn cycle(n: usize, w: f64) -> LinkGraph {
        let mut l = LinkGraph::default();
        for i in 0..n {
            l.add_vertex(format!("v{i}"));
        }
        for i in 0..n {
            l.add_edge(i, (i + 1) % n, w);
        }
        l
    }

    /// Oracle: bisection on `cosh(side/2)·sin(θ/2) = cos(π/k)`.
    fn angle_by_bisection(k: usize, side: f64) -> f64 {
        let target = (PI / k as f64).cos();
        let (mut lo, mut hi) = (0.0f64, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (side / 2.0).cosh() * (mid / 2.0).sin() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn flat_torus_link_is_a_2pi_square() {
        let t = torus();
        let (l, ends) = vertex_link(&t, &AngleStructure::uniform(&t, PI / 2.0), 0).unwrap();
        assert_eq!(ends.len(), 4);
        assert_eq!(l.edges.len(), 4);
        assert!(l.degrees().iter().all(|&d| d == 2));
        assert!((weighted_girth(&l) - 2.0 * PI).abs() < ANGLE_TOL);
    }

    #[test]
    fn single_square_corner() {
        let sq = crate::complex::tests::unit_square();
        let (l, _) = vertex_link(&sq, &AngleStructure::uniform(&sq, PI / 2.0), 0).unwrap();
        assert_eq!(l.edges.len(), 1);
        assert_eq!(l.edges[0].2, PI / 2.0);
        assert!(vertex_link(&sq, &AngleStructure::uniform(&sq, 1.0), 99).is_err());
    }

    #[test]
    fn girth_examples() {
        assert!((weighted_girth(&cycle(4, PI / 2.0)) - 2.0 * PI).abs() < 1e-12);
        let mut tree = LinkGraph::default();
        for i in 0..4 {
            tree.add_vertex(i.to_string());
        }
        tree.add_edge(0, 1, 1.0);
        tree.add_edge(1, 2, 1.0);
        tree.add_edge(1, 3, 1.0);
        assert_eq!(weighted_girth(&tree), f64::INFINITY);
        tree.add_edge(2, 1, 0.25);
        assert_eq!(weighted_girth(&tree), 1.25);
    }

    #[test]
    fn smoothing_keeps_girth() {
        let l = cycle(8, PI / 4.0);
        let s = l.smooth(|v| v % 2 == 0);
        assert_eq!(s.num_vertices(), 4);
        assert!(s.edges.iter().all(|e| (e.2 - PI / 2.0).abs() < 1e-12));
        assert!((weighted_girth(&s) - weighted_girth(&l)).abs() < 1e-12);
    }

    #[test]
    fn structural_check_cases() {
        let l = cycle(4, PI / 2.0);
        let good = [Some(true), Some(false), Some(true), Some(false)];
        assert!(structural_large_check(&l, &good).passes());
        let mixed = [Some(true), Some(true), Some(false), Some(false)];
        assert!(!structural_large_check(&l, &mixed).bipartite);
        let mut bigon = cycle(2, PI / 2.0);
        bigon.add_edge(0, 1, PI);
        assert!(!structural_large_check(&bigon, &[Some(true), Some(false)]).no_bigons);
    }

    #[test]
    fn pentagon_side_identities() {
        let s = pentagon_side();
        assert!((s - 1.061275).abs() < 1e-6);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        // cosh(s) = 2cosh²(s/2) − 1 = 4cos²(π/5) − 1
        assert!((s.cosh() - golden).abs() < 1e-12);
        assert!((regular_polygon_angle(5, s).unwrap() - PI / 2.0).abs() < ANGLE_TOL);
    }

    #[test]
    fn hexagon_angle_matches_bisection() {
        let s = pentagon_side();
        let a = regular_polygon_angle(6, s).unwrap();
        assert!((a - angle_by_bisection(6, s)).abs() < 1e-9);
        assert!((a - 1.717_217).abs() < 1e-6);
        for k in 5..=50 {
            assert!(regular_polygon_angle(k, s).unwrap() >= PI / 2.0 - ANGLE_TOL);
        }
    }

    #[test]
    fn impossible_polygons_error() {
        assert!(regular_polygon_angle(2, 1.0).is_err());
        assert!(regular_polygon_angle(5, 0.0).is_err());
        // tiny sides make a near-Euclidean pentagon with angle 3π/5; fine
        assert!(regular_polygon_angle(5, 1e-6).is_ok());
    }

    fn octahedron() -> SimplicialLink {
        // vertices ±x, ±y, ±z as 0..6 with pairs (0,1), (2,3), (4,5)
        let mut l = SimplicialLink {
            num_vertices: 6,
            ..Default::default()
        };
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    l.triangles.push([a, b, c]);
                }
            }
        }
        for (p, q) in [(0, 2), (0, 3), (1, 2), (1, 3), (0, 4), (0, 5), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5)] {
            l.edges.push([p, q]);
        }
        l
    }

    #[test]
    fn flag_examples() {
        assert!(flag_check(&octahedron()).unwrap());
        let empty = SimplicialLink {
            num_vertices: 3,
            edges: vec![[0, 1], [1, 2], [0, 2]],
            triangles: vec![],
        };
        assert!(!flag_check(&empty).unwrap());
        let dup = SimplicialLink {
            num_vertices: 2,
            edges: vec![[0, 1], [1, 0]],
            triangles: vec![],
        };
        assert!(matches!(flag_check(&dup), Err(CurvatureError::NonSimplicial(_))));
        let mut tet = SimplicialLink {
            num_vertices: 4,
            ..Default::default()
        };
        tet.triangles = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        assert!(!flag_check(&tet).unwrap());
    }

    #[test]
    fn theta_cubed_links_are_flag() {
        let t = crate::product::theta_graph();
        let sd = crate::subdivide::subdivide_edges(&t).unwrap().complex;
        let p = graph_power(&sd, 3).unwrap().complex;
        let links = cube_complex_links(&p).unwrap();
        assert_eq!(links.len(), 216);
        for (l, _) in &links {
            assert!(flag_check(l).unwrap());
        }
    }

    proptest! {
        #[test]
        fn angle_monotone(k in 5usize..60, s in 0.05f64..3.0) {
            let a = regular_polygon_angle(k, s).unwrap();
            prop_assert!(regular_polygon_angle(k + 1, s).unwrap() > a);
            prop_assert!(regular_polygon_angle(k, s * 1.01).unwrap() < a);
        }

        #[test]
        fn girth_never_increases_when_adding_edges(
            n in 3usize..9,
            extra in proptest::collection::vec((0usize..9, 0usize..9, 0.1f64..3.0), 0..6)
        ) {
            let mut l = cycle(n, 1.0);
            let mut g = weighted_girth(&l);
            for (u, v, w) in extra {
                l.add_edge(u % n, v % n, w);
                let h = weighted_girth(&l);
                prop_assert!(h <= g + 1e-12);
                g = h;
            }
        }
    }
}
