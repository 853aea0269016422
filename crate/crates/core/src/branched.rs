//! The branched cover `Y → Θ³` over `L = Θ×0×1 ∪ 1×Θ×0 ∪ 0×1×Θ` and the
//! lift of the coordinatewise involution `σ₃` to an order-two isometry.
//!
//! Everything lives on the edge subdivision `Θ'` of `Θ`, so that `L` is a
//! full subcomplex of `Θ'³` and the point `(0,1)` has a full star in `Θ'²`.
//! `K₂ = Θ'² − st(0,1)` and `K₃ = Θ'³ − st(L)`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    complement_of_star, CellMap, Complex, ComplexError, EdgeImage, EdgePath, Induced, Selection,
    SignedEdge,
};
use crate::curvature::{cube_complex_links, flag_check, CurvatureError};
use crate::morse::{HeightFunction, MorseError};
use crate::perm::{commutator, Perm, PermError, PermGroup};
use crate::pi1::{first_betti, pi1_generators, SpanningTreeGens};
use crate::product::{
    coordinate_projection, diagonal_map, graph_power, theta_graph, FactorCell, GraphMap,
    ProductComplex,
};
use crate::subdivide::subdivide_edges;
use crate::voltage::{
    branched_completion, build_cover, cover_connected, lift_automorphism, product_voltages,
    voltage_complete, BranchCompletionCensus, Order, VoltageAssignment, VoltageError,
};

#[derive(Debug, Error)]
pub enum BranchedError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Voltage(#[from] VoltageError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// Edge ids of `Θ`.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;

/// Images of the six basis loops at `(1,0)`: `ā₀b₀ ↦ α²`, `ā₀c̄₀ ↦ α³`,
/// `ā₀d̄₀ ↦ α`, `a₁b̄₁ ↦ β²`, `a₁c₁ ↦ β³`, `a₁d₁ ↦ β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoSpec {
    pub alpha: Perm,
    pub beta: Perm,
}

impl Default for RhoSpec {
    fn default() -> Self {
        RhoSpec {
            alpha: Perm::from_cycles(5, &[vec![2, 5, 3, 4]]).unwrap(),
            beta: Perm::from_cycles(5, &[vec![1, 2, 3, 4]]).unwrap(),
        }
    }
}

impl RhoSpec {
    /// Voltages on the edges `b,c,d` of `Θ×0` and of `1×Θ`; `a₀`, `a₁` carry
    /// the identity and sit in the tree.
    pub fn delta_voltages(&self) -> [[Perm; 4]; 2] {
        let (a, b) = (&self.alpha, &self.beta);
        let id = Perm::identity(a.degree());
        [
            [id.clone(), a.pow(2), a.clone(), a.pow(3)],
            [id, b.pow(2), b.pow(3), b.clone()],
        ]
    }

    /// The six basis images, in the order listed above.
    pub fn basis_images(&self) -> Vec<Perm> {
        let (a, b) = (&self.alpha, &self.beta);
        vec![a.pow(2), a.pow(3), a.clone(), b.pow(2), b.pow(3), b.clone()]
    }

    pub fn conj(&self, x: &Perm) -> Perm {
        let a2 = self.alpha.pow(2);
        a2.then(x).then(&a2.inverse())
    }
}

/// A step along a whole edge of `Θ` in one coordinate of `Θ'²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub edge: usize,
    /// 0 for `Θ×0`, 1 for `1×Θ`.
    pub level: usize,
    pub forward: bool,
}

pub fn letter(name: &str) -> Option<Letter> {
    let mut ch = name.chars();
    let e = match ch.next()? {
        'a' => A,
        'b' => B,
        'c' => C,
        'd' => D,
        _ => return None,
    };
    let level = match ch.next()? {
        '0' => 0,
        '1' => 1,
        _ => return None,
    };
    let forward = match ch.as_str() {
        "" => true,
        "'" => false,
        _ => return None,
    };
    Some(Letter {
        edge: e,
        level,
        forward,
    })
}

/// Parses a word such as `a0' b0` (a prime marks a reversed edge).
pub fn word(text: &str) -> Vec<Letter> {
    text.split_whitespace().filter_map(letter).collect()
}

/// All complexes and maps of the construction.
#[derive(Debug, Clone)]
pub struct Setting {
    pub theta: Complex,
    pub theta_sub: Complex,
    pub sigma: GraphMap,
    pub p2: ProductComplex,
    pub p3: ProductComplex,
    pub locus: Selection,
    pub k2: Induced,
    pub k3: Induced,
    /// `σ₂` on `K₂` and `σ₃` on `K₃`.
    pub sigma2: CellMap,
    pub sigma3: CellMap,
    pub sigma3_full: CellMap,
    pub sigma2_full: CellMap,
    /// `pr_i` on `Θ'³ → Θ'²` and on `K₃ → K₂`, for `i = 1,2,3`.
    pub pr_full: Vec<CellMap>,
    pub pr: Vec<CellMap>,
}

/// Coordinates kept by `pr_i(x₁,x₂,x₃) = (x_{i+1}, x_{i+2})`, zero-based.
pub fn projection_coords(i: usize) -> [usize; 2] {
    [i % 3, (i + 1) % 3]
}

impl Setting {
    pub fn build() -> Result<Setting, BranchedError> {
        let theta = theta_graph();
        let theta_sub = subdivide_edges(&theta)?.complex;
        let sigma = GraphMap {
            vertex: vec![0, 1],
            edge: vec![
                SignedEdge::fwd(B),
                SignedEdge::fwd(A),
                SignedEdge::fwd(D),
                SignedEdge::fwd(C),
            ],
        }
        .on_subdivision(&theta);
        let p2 = graph_power(&theta_sub, 2)?;
        let p3 = graph_power(&theta_sub, 3)?;
        let star2 = Selection {
            vertices: BTreeSet::from([p2.vertex_of(&[0, 1])]),
            ..Default::default()
        };
        let k2 = complement_of_star(&p2.complex, &star2)?;
        let locus = branch_locus(&p3);
        let k3 = complement_of_star(&p3.complex, &locus)?;
        let sigma2_full = diagonal_map(&p2, &sigma);
        let sigma3_full = diagonal_map(&p3, &sigma);
        let sigma2 = sigma2_full.restrict(&k2, &k2)?;
        let sigma3 = sigma3_full.restrict(&k3, &k3)?;
        let pr_full: Vec<CellMap> = (1..=3)
            .map(|i| coordinate_projection(&p3, &p2, &projection_coords(i)))
            .collect();
        let pr = pr_full
            .iter()
            .map(|m| m.restrict(&k3, &k2))
            .collect::<Result<_, _>>()?;
        Ok(Setting {
            theta,
            theta_sub,
            sigma,
            p2,
            p3,
            locus,
            k2,
            k3,
            sigma2,
            sigma3,
            sigma3_full,
            sigma2_full,
            pr_full,
            pr,
        })
    }

    /// `K₂` edge ids of the two halves of a `Δ` edge, in path order.
    pub fn letter_steps(&self, l: Letter) -> Vec<SignedEdge> {
        let half = |h: usize| {
            let t = if l.level == 0 {
                [FactorCell::E(h), FactorCell::V(0)]
            } else {
                [FactorCell::V(1), FactorCell::E(h)]
            };
            self.k2.edge_from_parent[&self.p2.id_of(&t).unwrap()]
        };
        let (h0, h1) = (half(2 * l.edge), half(2 * l.edge + 1));
        if l.forward {
            vec![SignedEdge::fwd(h0), SignedEdge::fwd(h1)]
        } else {
            vec![SignedEdge::bwd(h1), SignedEdge::bwd(h0)]
        }
    }

    pub fn k2_vertex(&self, x: usize, y: usize) -> usize {
        self.k2.vertex_from_parent[&self.p2.vertex_of(&[x, y])]
    }

    pub fn k3_vertex(&self, x: usize, y: usize, z: usize) -> usize {
        self.k3.vertex_from_parent[&self.p3.vertex_of(&[x, y, z])]
    }

    pub fn path(&self, start: (usize, usize), w: &[Letter]) -> Result<EdgePath, ComplexError> {
        let steps = w.iter().flat_map(|&l| self.letter_steps(l)).collect();
        EdgePath::new(&self.k2.complex, self.k2_vertex(start.0, start.1), steps)
    }

    /// Seed voltages on the subdivided `Δ`: the first half of each edge
    /// carries the voltage, the second half the identity.
    pub fn seed(&self, rho: &RhoSpec) -> BTreeMap<usize, Perm> {
        let vs = rho.delta_voltages();
        let mut out = BTreeMap::new();
        for level in 0..2 {
            for e in [A, B, C, D] {
                let s = self.letter_steps(Letter {
                    edge: e,
                    level,
                    forward: true,
                });
                out.insert(s[0].edge, vs[level][e].clone());
                out.insert(s[1].edge, Perm::identity(rho.alpha.degree()));
            }
        }
        out
    }
}

/// `Θ'×{0}×{1} ∪ {1}×Θ'×{0} ∪ {0}×{1}×Θ'` as a selection of `Θ'³`.
pub fn branch_locus(p3: &ProductComplex) -> Selection {
    let mut sel = Selection::default();
    let on = |t: &[FactorCell]| -> bool {
        let v = |k: usize, x: usize| t[k] == FactorCell::V(x);
        (v(1, 0) && v(2, 1)) || (v(0, 1) && v(2, 0)) || (v(0, 0) && v(1, 1))
    };
    for (i, t) in p3.vertex_tuples.iter().enumerate() {
        if on(t) {
            sel.vertices.insert(i);
        }
    }
    for (i, t) in p3.edge_tuples.iter().enumerate() {
        if on(t) {
            sel.edges.insert(i);
        }
    }
    sel
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusReport {
    pub components: usize,
    pub vertices: usize,
    pub edges: usize,
    pub pairwise_disjoint: bool,
    pub full: bool,
    pub sigma_invariant: bool,
}

pub fn check_locus(s: &Setting) -> LocusReport {
    let c = &s.p3.complex;
    let sub = Induced::build(c, &s.locus).unwrap();
    let (labels, comps) = sub.complex.components();
    // component sizes must match Θ'
    let mut sizes = vec![0usize; comps];
    for &l in &labels {
        sizes[l] += 1;
    }
    let theta_v = s.theta_sub.num_vertices();
    let inv = s.locus.vertices.iter().all(|&v| s.locus.vertices.contains(&s.sigma3_full.vertex_map[v]))
        && s.locus.edges.iter().all(|&e| match s.sigma3_full.edge_map[e] {
            EdgeImage::Edge(t) => s.locus.edges.contains(&t.edge),
            EdgeImage::Collapsed(_) => false,
        });
    LocusReport {
        components: comps,
        vertices: s.locus.vertices.len(),
        edges: s.locus.edges.len(),
        pairwise_disjoint: comps == 3 && sizes.iter().all(|&n| n == theta_v),
        full: s.locus.is_full(c),
        sigma_invariant: inv,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorReport {
    pub power_pairs: usize,
    pub power_pairs_five_cycles: usize,
    pub loop_pairs: usize,
    pub loop_pairs_five_cycles: usize,
}

impl CommutatorReport {
    pub fn passes(&self) -> bool {
        self.power_pairs == self.power_pairs_five_cycles && self.loop_pairs == self.loop_pairs_five_cycles
    }
}

/// `[αⁱ, βʲ]` for `1 ≤ i,j ≤ 3`, and the commutators of the 6 × 6 two-edge
/// loops at `(1,0)` (one through `(0,0)`, one through `(1,1)`).
pub fn check_commutators(rho: &RhoSpec) -> Result<CommutatorReport, BranchedError> {
    let mut pp = 0;
    for i in 1..=3 {
        for j in 1..=3 {
            if commutator(&rho.alpha.pow(i), &rho.beta.pow(j))?.cycle_type().is_single_cycle(5) {
                pp += 1;
            }
        }
    }
    let vs = rho.delta_voltages();
    // loop x̄ y at (1,0) for distinct edges x, y between (0,0) and (1,0);
    // x runs 0→1 for a, b and 1→0 for c, d
    let toward = |level: usize, e: usize| -> Perm {
        // voltage picked up moving from the far vertex to (1,0)
        let p = &vs[level][e];
        let into_10 = (level == 0) == (e == A || e == B);
        if into_10 {
            p.clone()
        } else {
            p.inverse()
        }
    };
    let loops = |level: usize| -> Vec<Perm> {
        let mut out = Vec::new();
        for x in 0..4 {
            for y in x + 1..4 {
                out.push(toward(level, x).inverse().then(&toward(level, y)));
            }
        }
        out
    };
    let (l0, l1) = (loops(0), loops(1));
    let mut lp = 0;
    for g in &l0 {
        for h in &l1 {
            if commutator(g, h)?.cycle_type().is_single_cycle(5) {
                lp += 1;
            }
        }
    }
    Ok(CommutatorReport {
        power_pairs: 9,
        power_pairs_five_cycles: pp,
        loop_pairs: l0.len() * l1.len(),
        loop_pairs_five_cycles: lp,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K2Report {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub rank: usize,
    pub betti: usize,
    pub all_faces_flat: bool,
    pub order_independent: bool,
    /// Holonomies of the six basis loops at `(1,0)` match the table.
    pub basis_matches: bool,
    /// Orbit of the point 1 under the holonomy group.
    pub orbit_of_one: usize,
}

pub fn basis_words() -> [&'static str; 6] {
    ["a0' b0", "a0' c0'", "a0' d0'", "a1 b1'", "a1 c1", "a1 d1"]
}

/// Voltage completion on `K₂` seeded by `ρ` on `Δ`.
pub fn complete_k2(s: &Setting, rho: &RhoSpec) -> Result<(VoltageAssignment, K2Report), BranchedError> {
    let k2 = &s.k2.complex;
    let seed = s.seed(rho);
    let base = s.k2_vertex(0, 0);
    let v = voltage_complete(k2, &seed, 5, base, Order::Ascending)?;
    let w = voltage_complete(k2, &seed, 5, base, Order::Descending)?;
    let images = rho.basis_images();
    let mut basis_ok = true;
    for (wd, img) in basis_words().iter().zip(&images) {
        let p = s.path((1, 0), &word(wd))?;
        basis_ok &= v.holonomy(k2, &p)? == *img;
    }
    let gens = pi1_generators(k2, base)?;
    let reduced = gens.presentation(k2).tietze_reduce();
    let hol = crate::voltage::generator_holonomies(k2, &v, &gens)?;
    let orbit = PermGroup::new(5, hol)?.orbit(1)?.len();
    let counts = k2.counts();
    let report = K2Report {
        vertices: counts.vertices,
        edges: counts.edges,
        faces: counts.faces,
        rank: if reduced.is_visibly_free() { reduced.num_generators } else { usize::MAX },
        betti: first_betti(k2),
        all_faces_flat: v.non_flat_faces(k2).is_empty(),
        order_independent: v == w,
        basis_matches: basis_ok,
        orbit_of_one: orbit,
    };
    Ok((v, report))
}

fn map_path(m: &CellMap, p: &EdgePath) -> EdgePath {
    let mut steps = Vec::new();
    for st in &p.steps {
        if let EdgeImage::Edge(t) = m.edge_map[st.edge] {
            steps.push(if st.forward { t } else { t.reversed() });
        }
    }
    EdgePath {
        start: m.vertex_map[p.start],
        steps,
    }
}

/// Random closed walks at `base`, closed up along the tree.
pub fn random_loops(c: &Complex, gens: &SpanningTreeGens, n: usize, max_len: usize, seed: u64) -> Vec<EdgePath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inc = c.vertex_edges();
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            let mut cur = gens.base;
            let mut steps = Vec::new();
            for _ in 0..len {
                if inc[cur].is_empty() {
                    break;
                }
                let s = inc[cur][rng.gen_range(0..inc[cur].len())];
                steps.push(s);
                cur = c.head(s);
            }
            let back = gens.tree_path(c, cur).inverse(c);
            steps.extend(back.steps);
            EdgePath {
                start: gens.base,
                steps,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn sigma2_basis_words() -> [&'static str; 6] {
    ["b0 a0'", "c0' a0'", "d0' a0'", "a0 a1 b1' a0'", "a0 a1 c1 a0'", "a0 a1 d1 a0'"]
}

/// `hol(σ₂γ) = α²·hol(γ)·α⁻²` for loops at `(0,0)`: the six basis loops,
/// the trivial loop and `random` random loops.
pub fn check_sigma2_identity(
    s: &Setting,
    v: &VoltageAssignment,
    rho: &RhoSpec,
    random: usize,
    seed: u64,
) -> Result<IdentityReport, BranchedError> {
    let k2 = &s.k2.complex;
    let mut loops: Vec<(String, EdgePath)> = Vec::new();
    for w in sigma2_basis_words() {
        loops.push((w.to_string(), s.path((0, 0), &word(w))?));
    }
    loops.push(("trivial".into(), EdgePath::constant(s.k2_vertex(0, 0))));
    let gens = pi1_generators(k2, s.k2_vertex(0, 0))?;
    for (i, p) in random_loops(k2, &gens, random, 24, seed).into_iter().enumerate() {
        loops.push((format!("random #{i}"), p));
    }
    let mut mismatches = Vec::new();
    for (name, p) in &loops {
        let lhs = v.holonomy(k2, &map_path(&s.sigma2, p))?;
        let rhs = rho.conj(&v.holonomy(k2, p)?);
        if lhs != rhs {
            mismatches.push(format!("{name}: {lhs} vs {rhs}"));
        }
    }
    Ok(IdentityReport {
        checked: loops.len(),
        mismatches,
    })
}

/// `pr_i ∘ σ₃ = σ₂ ∘ pr_i` cell by cell on `Θ'³` and on random paths in
/// `K₃`.
pub fn check_projection_identity(s: &Setting, random: usize, seed: u64) -> Result<IdentityReport, BranchedError> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for i in 0..3 {
        let left = s.sigma3_full.compose(&s.pr_full[i]);
        let right = s.pr_full[i].compose(&s.sigma2_full);
        checked += 1;
        if left != right {
            mismatches.push(format!("pr_{} cell maps differ", i + 1));
        }
    }
    let k3 = &s.k3.complex;
    let gens = pi1_generators(k3, s.k3_vertex(0, 0, 0))?;
    let mut paths = random_loops(k3, &gens, random, 24, seed);
    paths.push(EdgePath::constant(s.k3_vertex(0, 0, 0)));
    for (n, p) in paths.iter().enumerate() {
        for i in 0..3 {
            checked += 1;
            let a = map_path(&s.pr[i], &map_path(&s.sigma3, p));
            let b = map_path(&s.sigma2, &map_path(&s.pr[i], p));
            if a != b {
                mismatches.push(format!("path #{n} under pr_{}", i + 1));
            }
        }
    }
    Ok(IdentityReport { checked, mismatches })
}

/// `ρ_i` on `K₃` for `i = 1,2,3` and `τ = (ρ₁,ρ₂,ρ₃)`.
pub fn tau(s: &Setting, v: &VoltageAssignment) -> (Vec<VoltageAssignment>, VoltageAssignment) {
    let rhos: Vec<VoltageAssignment> = s.pr.iter().map(|m| v.pullback(m)).collect();
    let t = product_voltages(&[&rhos[0], &rhos[1], &rhos[2]]);
    (rhos, t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiReport {
    pub generators: usize,
    pub identity_failures: usize,
    /// Generators with `ρ_i(g)` fixing 1, summed over `i`.
    pub stabilizer_generators: usize,
    pub stabilizer_failures: usize,
}

impl HiReport {
    pub fn passes(&self) -> bool {
        self.identity_failures == 0 && self.stabilizer_failures == 0
    }
}

/// `ρ_i(σ₃ g) = α² ρ_i(g) α⁻²` on every generator of `π₁(K₃)`.
pub fn check_hi_invariance(
    s: &Setting,
    rhos: &[VoltageAssignment],
    rho: &RhoSpec,
) -> Result<HiReport, BranchedError> {
    let k3 = &s.k3.complex;
    let gens = pi1_generators(k3, s.k3_vertex(0, 0, 0))?;
    let (mut fail, mut stab, mut stab_fail) = (0, 0, 0);
    for l in &gens.loops {
        let image = map_path(&s.sigma3, l);
        for r in rhos {
            let g = r.holonomy(k3, l)?;
            let h = r.holonomy(k3, &image)?;
            if h != rho.conj(&g) {
                fail += 1;
            }
            if g.fixes(1) {
                stab += 1;
                if !h.fixes(1) {
                    stab_fail += 1;
                }
            }
        }
    }
    Ok(HiReport {
        generators: gens.rank(),
        identity_failures: fail,
        stabilizer_generators: stab,
        stabilizer_failures: stab_fail,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub cover_vertices: usize,
    pub orbit_size: usize,
    pub union_find_components: usize,
    pub basepoint_fixed: bool,
    pub square_is_identity: bool,
    pub square_fiber_fixed_points: usize,
    pub link_ends: usize,
    pub free_on_link: bool,
}

/// Cover of `K₃` by `τ`, its connectivity two ways, and the lift of `σ₃`
/// fixing the sheet `(1,1,1)` over `(0,0,0)`.
pub fn check_lift(s: &Setting, t: &VoltageAssignment) -> Result<LiftReport, BranchedError> {
    let k3 = &s.k3.complex;
    let base = s.k3_vertex(0, 0, 0);
    let sheet = crate::perm::encode_tuple(5, &[1, 1, 1]);
    let gens = pi1_generators(k3, base)?;
    let conn = cover_connected(k3, t, &gens, sheet)?;
    let cover = build_cover(k3, t)?;
    let comps = cover.complex.components().1;
    let lift = lift_automorphism(k3, t, &cover, &s.sigma3, base, sheet)?;
    let sq = lift.then(&lift);
    let fixed = cover.lift_id(base, sheet);
    // link of the fixed vertex: edge ends, square corners, cube corners
    let cc = &cover.complex;
    let ends = &cc.vertex_edges()[fixed];
    let end_image = |s: SignedEdge| -> SignedEdge {
        let t = lift.edge_map[s.edge];
        if s.forward {
            t
        } else {
            t.reversed()
        }
    };
    let mut free = ends.iter().all(|&e| end_image(e) != e);
    for face in cc.faces() {
        let b = &face.boundary;
        for k in 0..b.len() {
            if cc.tail(b[k]) != fixed {
                continue;
            }
            let corner: BTreeSet<SignedEdge> = [b[(k + b.len() - 1) % b.len()].reversed(), b[k]].into();
            let image: BTreeSet<SignedEdge> = corner.iter().map(|&e| end_image(e)).collect();
            free &= corner != image;
        }
    }
    Ok(LiftReport {
        cover_vertices: cc.num_vertices(),
        orbit_size: conn.orbit_size,
        union_find_components: comps,
        basepoint_fixed: lift.vertex_map[fixed] == fixed,
        square_is_identity: sq.is_identity(),
        square_fiber_fixed_points: (1..=t.degree).filter(|&x| sq.fiber.fixes(x)).count(),
        link_ends: ends.len(),
        free_on_link: free,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YReport {
    pub census: BranchCompletionCensus,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub cubes: usize,
    pub height_squares_checked: usize,
    pub flag_links_checked: Option<usize>,
    pub flag_links_ok: Option<bool>,
}

/// Branched completion `Y`, its height function and optionally the flag
/// condition at every vertex.
pub fn build_y(s: &Setting, t: &VoltageAssignment, flag_links: bool) -> Result<YReport, BranchedError> {
    let bc = branched_completion(&s.p3.complex, &s.locus, &s.k3, t)?;
    let y = &bc.complex;
    // every edge of Θ' runs along its arrow, so each lift rises by one
    let h = HeightFunction {
        offsets: vec![1; y.num_edges()],
    };
    let squares = h.validate_cubical(y)?;
    let (mut checked, mut ok) = (None, None);
    if flag_links {
        let links = cube_complex_links(y)?;
        let mut all = true;
        for (l, _) in &links {
            all &= flag_check(l)?;
        }
        checked = Some(links.len());
        ok = Some(all);
    }
    let counts = y.counts();
    Ok(YReport {
        census: bc.census,
        vertices: counts.vertices,
        edges: counts.edges,
        faces: counts.faces,
        cubes: counts.cubes,
        height_squares_checked: squares,
        flag_links_checked: checked,
        flag_links_ok: ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BranchedReport {
    pub stages: Vec<Stage>,
    pub locus: Option<LocusReport>,
    pub commutators: Option<CommutatorReport>,
    pub k2: Option<K2Report>,
    pub sigma2: Option<IdentityReport>,
    pub projection: Option<IdentityReport>,
    pub tau_flat: Option<bool>,
    pub hi: Option<HiReport>,
    pub lift: Option<LiftReport>,
    pub y: Option<YReport>,
}

impl BranchedReport {
    pub fn passes(&self) -> bool {
        !self.stages.is_empty() && self.stages.iter().all(|s| s.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.stages.push(Stage {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }
}

#[derive(Debug, Clone)]
pub struct BranchedOptions {
    pub rho: RhoSpec,
    pub random_loops: usize,
    pub seed: u64,
    pub flag_links: bool,
    /// Stop before building `Y`.
    pub skip_y: bool,
}

impl Default for BranchedOptions {
    fn default() -> Self {
        BranchedOptions {
            rho: RhoSpec::default(),
            random_loops: 100,
            seed: 0x5eed,
            flag_links: false,
            skip_y: false,
        }
    }
}

/// Runs every stage in order; a stage whose inputs failed is skipped.
pub fn run_branched_pipeline(opts: &BranchedOptions) -> Result<BranchedReport, BranchedError> {
    let s = Setting::build()?;
    let mut r = BranchedReport::default();
    let rho = &opts.rho;

    let lr = check_locus(&s);
    r.push(
        "locus",
        lr.pairwise_disjoint && lr.full && lr.sigma_invariant,
        format!("{} components, {} vertices, {} edges", lr.components, lr.vertices, lr.edges),
    );
    r.locus = Some(lr);

    let cr = check_commutators(rho)?;
    r.push(
        "commutators",
        cr.passes(),
        format!(
            "{}/{} power pairs, {}/{} loop pairs are 5-cycles",
            cr.power_pairs_five_cycles, cr.power_pairs, cr.loop_pairs_five_cycles, cr.loop_pairs
        ),
    );
    r.commutators = Some(cr);

    let (v, k2r) = match complete_k2(&s, rho) {
        Ok(x) => x,
        Err(e) => {
            r.push("k2-completion", false, e.to_string());
            return Ok(r);
        }
    };
    let ok = k2r.all_faces_flat && k2r.order_independent && k2r.basis_matches && k2r.rank == 6;
    r.push(
        "k2-completion",
        ok,
        format!("rank {}, orbit of 1 has size {}", k2r.rank, k2r.orbit_of_one),
    );
    r.k2 = Some(k2r);

    let sr = check_sigma2_identity(&s, &v, rho, opts.random_loops, opts.seed)?;
    r.push("sigma2-identity", sr.passes(), format!("{} loops, {} mismatches", sr.checked, sr.mismatches.len()));
    r.sigma2 = Some(sr);

    let pr = check_projection_identity(&s, opts.random_loops, opts.seed)?;
    r.push("projection-identity", pr.passes(), format!("{} checks", pr.checked));
    r.projection = Some(pr);

    let (rhos, t) = tau(&s, &v);
    let flat = t.non_flat_faces(&s.k3.complex).is_empty();
    r.push("tau-flat", flat, format!("{} faces of K3", s.k3.complex.num_faces()));
    r.tau_flat = Some(flat);

    let hr = check_hi_invariance(&s, &rhos, rho)?;
    r.push(
        "hi-invariance",
        hr.passes(),
        format!("{} generators, {} failures", hr.generators, hr.identity_failures),
    );
    r.hi = Some(hr);

    let connected = match check_lift(&s, &t) {
        Ok(lr) => {
            let conn = lr.orbit_size == 125 && lr.union_find_components == 1;
            r.push("cover-connected", conn, format!("orbit {}, {} components", lr.orbit_size, lr.union_find_components));
            r.push(
                "lift",
                lr.basepoint_fixed && lr.square_is_identity && lr.square_fiber_fixed_points == 125,
                format!("square fixes {} sheets", lr.square_fiber_fixed_points),
            );
            r.push("free-on-link", lr.free_on_link, format!("{} link vertices", lr.link_ends));
            r.lift = Some(lr);
            conn
        }
        Err(e) => {
            r.push("lift", false, e.to_string());
            false
        }
    };

    if opts.skip_y || !connected {
        return Ok(r);
    }
    let yr = build_y(&s, &t, opts.flag_links)?;
    r.push(
        "branched-census",
        yr.census.agrees(),
        format!("chi(Y) = {} by orbits, {} by cells", yr.census.chi_census, yr.census.chi_direct),
    );
    if let Some(ok) = yr.flag_links_ok {
        r.push("flag-links", ok, format!("{} vertex links", yr.flag_links_checked.unwrap_or(0)));
    }
    r.y = Some(yr);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_counts() {
        let s = Setting::build().unwrap();
        assert_eq!(s.theta_sub.counts().vertices, 6);
        assert_eq!(s.p3.complex.num_cubes(), 512);
        assert_eq!(s.k2.complex.counts().vertices, 35);
        assert_eq!(s.k3.complex.num_vertices(), 198);
        let lr = check_locus(&s);
        assert_eq!((lr.vertices, lr.edges, lr.components), (18, 24, 3));
        assert!(lr.full && lr.pairwise_disjoint && lr.sigma_invariant);
    }

    #[test]
    fn commutators_and_control() {
        let r = check_commutators(&RhoSpec::default()).unwrap();
        assert_eq!((r.power_pairs_five_cycles, r.loop_pairs_five_cycles), (9, 36));
        let bad = RhoSpec {
            beta: Perm::from_cycles(5, &[vec![1, 2], vec![3, 4]]).unwrap(),
            ..RhoSpec::default()
        };
        assert!(!check_commutators(&bad).unwrap().passes());
    }

    #[test]
    fn k2_completion_and_table() {
        let s = Setting::build().unwrap();
        let rho = RhoSpec::default();
        let (v, r) = complete_k2(&s, &rho).unwrap();
        assert!(r.all_faces_flat && r.order_independent && r.basis_matches);
        assert_eq!((r.rank, r.betti, r.orbit_of_one), (6, 6, 5));
        let k2 = &s.k2.complex;
        let h = |w: &str, at| v.holonomy(k2, &s.path(at, &word(w)).unwrap()).unwrap();
        assert_eq!(h("a0' b0", (1, 0)), rho.alpha.pow(2));
        assert_eq!(h("a1 d1", (1, 0)), rho.beta);
        assert!(h("a0 a0'", (0, 0)).is_identity());
    }

    #[test]
    fn sigma2_examples() {
        let s = Setting::build().unwrap();
        let rho = RhoSpec::default();
        let (v, _) = complete_k2(&s, &rho).unwrap();
        let k2 = &s.k2.complex;
        let a2 = rho.alpha.pow(2);
        let g = s.path((0, 0), &word("b0 a0'")).unwrap();
        assert_eq!(v.holonomy(k2, &map_path(&s.sigma2, &g)).unwrap(), a2);
        assert_eq!(rho.conj(&v.holonomy(k2, &g).unwrap()), a2);
        let g = s.path((0, 0), &word("a0 a1 d1 a0'")).unwrap();
        let expect = a2.then(&rho.beta).then(&a2.inverse());
        assert_eq!(v.holonomy(k2, &map_path(&s.sigma2, &g)).unwrap(), expect);
        assert_eq!(rho.conj(&v.holonomy(k2, &g).unwrap()), expect);
        let r = check_sigma2_identity(&s, &v, &rho, 100, 7).unwrap();
        assert!(r.passes(), "{:?}", r.mismatches);
        assert_eq!(r.checked, 107);
    }

    #[test]
    fn projections_commute_with_sigma() {
        let s = Setting::build().unwrap();
        let r = check_projection_identity(&s, 100, 3).unwrap();
        assert!(r.passes(), "{:?}", r.mismatches);
        for m in &s.pr {
            m.check_cellular(&s.k3.complex, &s.k2.complex).unwrap();
        }
    }

    #[test]
    fn tau_and_invariance() {
        let s = Setting::build().unwrap();
        let rho = RhoSpec::default();
        let (v, _) = complete_k2(&s, &rho).unwrap();
        let (rhos, t) = tau(&s, &v);
        assert_eq!(t.degree, 125);
        assert!(t.non_flat_faces(&s.k3.complex).is_empty());
        let hr = check_hi_invariance(&s, &rhos, &rho).unwrap();
        assert!(hr.passes(), "{hr:?}");
        assert!(hr.stabilizer_generators > 0);
    }
}

#[cfg(test)]
mod pipeline_tests {
    use super::*;

    #[test]
    fn full_pipeline() {
        let r = run_branched_pipeline(&BranchedOptions::default()).unwrap();
        for s in &r.stages {
            eprintln!("{:<20} {} {}", s.name, s.passed, s.detail);
        }
        assert!(r.passes());
        let l = r.lift.unwrap();
        assert_eq!(l.orbit_size, 125);
        assert!(l.free_on_link);
        let y = r.y.unwrap();
        assert!(y.census.agrees());
    }

    #[test]
    fn y_links_are_flag() {
        let opts = BranchedOptions {
            random_loops: 0,
            flag_links: true,
            ..BranchedOptions::default()
        };
        let r = run_branched_pipeline(&opts).unwrap();
        let y = r.y.unwrap();
        assert_eq!(y.flag_links_ok, Some(true));
        assert_eq!(y.flag_links_checked, Some(y.vertices));
    }

    #[test]
    fn perturbed_rho_breaks_sigma_identity() {
        let rho = RhoSpec::default();
        let opts = BranchedOptions {
            rho: RhoSpec {
                beta: rho.beta.pow(2),
                ..rho
            },
            skip_y: true,
            random_loops: 10,
            ..BranchedOptions::default()
        };
        let r = run_branched_pipeline(&opts).unwrap();
        assert!(!r.passes());
    }
}
