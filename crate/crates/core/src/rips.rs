//! A Rips-type construction: the Wise word, its partition into the words
//! `W_j`, `V_j`, the presentations of `G₀` and `G = G₀/⟨⟨a₁ᵏ⟩⟩`, a pentagon
//! subdivision for curvature, and a triangle subdivision for Morse theory.
//!
//! Letters are numbered `1..=m` for `a_1..a_m`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Cell, Complex, ComplexError, EdgePath, Selection, SignedEdge};
use crate::curvature::{
    pentagon_side, regular_polygon_angle, structural_large_check, vertex_link, weighted_girth,
    AngleStructure, CurvatureError, ANGLE_TOL,
};
use crate::morse::{
    census, collapses_to, component_labels, descending_vertex_link, edge_up_link,
    forest_canonical_form, ascending_vertex_link, CollapseError, HeightFunction, LinkCensus,
    MorseError, COLLAPSE_BUDGET,
};
use crate::text::NamedPresentation;

/// Letters per `W_j` / `V_j`.
pub const BLOCK: usize = 14;
pub const MIN_M: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum RipsError {
    #[error("m = {m} is below the minimum {min}")]
    MTooSmall { m: usize, min: usize },
    #[error("k = {0} must be at least 2")]
    KTooSmall(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

/// `(a₂a₂a₃a₂a₄⋯a₂a_m)(a₃a₃a₄⋯a₃a_m)⋯(a_{m−1}a_{m−1}a_m)a_m`.
pub fn wise_word(m: usize) -> Result<Vec<u32>, RipsError> {
    if m < 3 {
        return Err(RipsError::MTooSmall { m, min: 3 });
    }
    let mut w = Vec::with_capacity((m - 1) * (m - 1));
    for i in 2..m {
        w.push(i as u32);
        for j in i + 1..=m {
            w.push(i as u32);
            w.push(j as u32);
        }
    }
    w.push(m as u32);
    Ok(w)
}

/// First repeated two-letter subword, if any.
pub fn first_repeated_pair(words: &[&[u32]]) -> Option<(u32, u32)> {
    let mut seen = BTreeSet::new();
    for w in words {
        for p in w.windows(2) {
            if !seen.insert((p[0], p[1])) {
                return Some((p[0], p[1]));
            }
        }
    }
    None
}

pub fn check_no_repetition(word: &[u32]) -> (bool, Option<(u32, u32)>) {
    let bad = first_repeated_pair(&[word]);
    (bad.is_none(), bad)
}

pub fn word_string(w: &[u32]) -> String {
    w.iter().map(|x| format!("a{x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WiseWordData {
    pub m: usize,
    pub sigma_word: Vec<u32>,
    /// `w[i-1]` is `W_i`.
    pub w: Vec<Vec<u32>>,
    pub v: Vec<Vec<u32>>,
    /// Lengths of the blocks taken from the word, in order.
    pub blocks: Vec<usize>,
    pub unused: Vec<u32>,
}

impl WiseWordData {
    /// `σ_i(j)` with both indices from 1.
    pub fn sigma(&self, i: usize, j: usize) -> u32 {
        self.w[i - 1][j - 1]
    }

    pub fn tau(&self, i: usize, j: usize) -> u32 {
        self.v[i - 1][j - 1]
    }

    pub fn all_words(&self) -> Vec<&[u32]> {
        self.w.iter().chain(&self.v).map(|x| x.as_slice()).collect()
    }
}

/// Two leading blocks of 13 letters then `2(m−1)` blocks of 14, left to
/// right: `W₁ = a₁·B₁`, `V₁ = B₂·a₁`, then `W₂..W_m`, then `V₂..V_m`.
pub fn partition_wise(m: usize) -> Result<WiseWordData, RipsError> {
    if m < MIN_M {
        return Err(RipsError::MTooSmall { m, min: MIN_M });
    }
    let sigma_word = wise_word(m)?;
    let mut pos = 0;
    let mut take = |n: usize| {
        let b = sigma_word[pos..pos + n].to_vec();
        pos += n;
        b
    };
    let b1 = take(BLOCK - 1);
    let b2 = take(BLOCK - 1);
    let mut w = vec![[vec![1], b1].concat()];
    let mut v = vec![[b2, vec![1]].concat()];
    for _ in 2..=m {
        w.push(take(BLOCK));
    }
    for _ in 2..=m {
        v.push(take(BLOCK));
    }
    let mut blocks = vec![BLOCK - 1, BLOCK - 1];
    blocks.extend(std::iter::repeat(BLOCK).take(2 * (m - 1)));
    let unused = sigma_word[pos..].to_vec();
    Ok(WiseWordData {
        m,
        sigma_word,
        w,
        v,
        blocks,
        unused,
    })
}

/// Generators `a1..am, t`; relators `t a_i t⁻¹ W_i⁻¹` then `t⁻¹ a_i t V_i⁻¹`,
/// and `a1^k` when `k` is given.
pub fn presentation(data: &WiseWordData, k: Option<usize>) -> Result<NamedPresentation, RipsError> {
    let m = data.m;
    if let Some(k) = k {
        if k < 2 {
            return Err(RipsError::KTooSmall(k));
        }
    }
    let t = m as i32 + 1;
    let mut generators: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    generators.push("t".into());
    let inv = |w: &[u32]| -> Vec<i32> { w.iter().rev().map(|&x| -(x as i32)).collect() };
    let mut relators = Vec::new();
    for i in 1..=m {
        relators.push([vec![t, i as i32, -t], inv(&data.w[i - 1])].concat());
    }
    for i in 1..=m {
        relators.push([vec![-t, i as i32, t], inv(&data.v[i - 1])].concat());
    }
    if let Some(k) = k {
        relators.push(vec![1; k]);
    }
    Ok(NamedPresentation {
        generators,
        relators,
    })
}

pub fn presentation_g0(m: usize) -> Result<NamedPresentation, RipsError> {
    presentation(&partition_wise(m)?, None)
}

pub fn presentation_g(m: usize, k: usize) -> Result<NamedPresentation, RipsError> {
    presentation(&partition_wise(m)?, Some(k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    /// `t ↦ 1`, `a_j ↦ 0` kills every relator.
    pub z_map_ok: bool,
    /// `a₁ ↦ 1`, other generators `↦ 0` (mod k, or in ℤ without k).
    pub a1_map_ok: bool,
    pub first_offending_relator: Option<usize>,
    /// Order of `a₁` when both hold and `a₁ᵏ` is a relator.
    pub a1_order: Option<usize>,
}

/// Exponent-sum checks for the two quotient maps; the `a₁` map goes to
/// `ℤ_k` when `k` is given, else to `ℤ`.
pub fn quotient_checks(p: &NamedPresentation, k: Option<usize>) -> QuotientReport {
    let t = p.generators.iter().position(|g| g == "t").map(|x| x as i32 + 1);
    let a1 = p.generators.iter().position(|g| g == "a1").map(|x| x as i32 + 1);
    let exp = |w: &[i32], g: Option<i32>| -> i64 {
        g.map_or(0, |g| w.iter().filter(|x| x.abs() == g).map(|x| x.signum() as i64).sum())
    };
    let mut z_ok = t.is_some();
    let mut a_ok = a1.is_some();
    let mut first = None;
    for (i, r) in p.relators.iter().enumerate() {
        let zt = exp(r, t) == 0;
        let e = exp(r, a1);
        let za = match k {
            Some(k) => e.rem_euclid(k as i64) == 0,
            None => e == 0,
        };
        if !(zt && za) && first.is_none() {
            first = Some(i);
        }
        z_ok &= zt;
        a_ok &= za;
    }
    let has_power = k.is_some_and(|k| p.relators.iter().any(|r| *r == vec![a1.unwrap_or(0); k]));
    QuotientReport {
        z_map_ok: z_ok,
        a1_map_ok: a_ok,
        first_offending_relator: first,
        a1_order: (z_ok && a_ok && has_power).then(|| k.unwrap()),
    }
}

fn relator_steps(t: usize, a: &[usize], r: &[i32], m: usize) -> Vec<SignedEdge> {
    r.iter()
        .map(|&x| {
            let e = if x.unsigned_abs() as usize == m + 1 {
                t
            } else {
                a[x.unsigned_abs() as usize - 1]
            };
            if x > 0 {
                SignedEdge::fwd(e)
            } else {
                SignedEdge::bwd(e)
            }
        })
        .collect()
}

/// Presentation complex of `G₀` with each 17-gon relator cut into five
/// right-angled pentagons by four chords. With boundary vertices `q0..q16`
/// the pentagons are `(q13..q16,q0)`, `(q0,q1,q11,q12,q13)`,
/// `(q1,q2,q9,q10,q11)`, `(q2,q3,q7,q8,q9)` and `(q3..q7)`; there are no
/// interior vertices.
#[derive(Debug, Clone)]
pub struct PentagonComplex {
    pub complex: Complex,
    pub t: usize,
    pub a: Vec<usize>,
    pub chords: Vec<usize>,
}

pub fn pentagon_complex(data: &WiseWordData) -> Result<PentagonComplex, RipsError> {
    let m = data.m;
    let p = presentation(data, None)?;
    let mut c = Complex::new();
    let v = c.add_vertex("v");
    let t = c.add_edge(v, v, "t")?;
    let a: Vec<usize> = (1..=m)
        .map(|i| c.add_edge(v, v, format!("a{i}")))
        .collect::<Result<_, _>>()?;
    let mut chords = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        let e = relator_steps(t, &a, r, m);
        if e.len() != 17 {
            return Err(ComplexError::Unsupported(format!("relator {ri} has length {}", e.len())).into());
        }
        let k: Vec<usize> = [(13, 0), (1, 11), (2, 9), (3, 7)]
            .iter()
            .map(|(x, y)| c.add_edge(v, v, format!("ch{ri}:{x}-{y}")))
            .collect::<Result<_, _>>()?;
        chords.extend(&k);
        let (f, b) = (SignedEdge::fwd, SignedEdge::bwd);
        let pentagons = [
            vec![e[13], e[14], e[15], e[16], b(k[0])],
            vec![e[0], f(k[1]), e[11], e[12], f(k[0])],
            vec![e[1], f(k[2]), e[9], e[10], b(k[1])],
            vec![e[2], f(k[3]), e[7], e[8], b(k[2])],
            vec![e[3], e[4], e[5], e[6], b(k[3])],
        ];
        for (n, pb) in pentagons.into_iter().enumerate() {
            c.add_face(pb, format!("P{ri}.{}", n + 1))?;
        }
    }
    Ok(PentagonComplex {
        complex: c,
        t,
        a,
        chords,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub m: usize,
    pub k: usize,
    pub vertices_checked: usize,
    pub interior_vertices: usize,
    pub link_vertices: usize,
    pub link_edges: usize,
    pub girth: f64,
    pub smoothed_girth: f64,
    pub bipartite: bool,
    pub no_bigons: bool,
    pub min_a_edge: f64,
    pub pentagon_side: f64,
    pub kgon_angle: f64,
    pub girth_ok: bool,
    pub structural_ok: bool,
}

impl CurvatureReport {
    pub fn passes(&self) -> bool {
        self.girth_ok && self.structural_ok
    }
}

/// Large-link certification at every vertex of the pentagon complex, with
/// the `k`-gon corner added as a single `a₁⁺–a₁⁻` edge (the `k`-gon's lift
/// has `k` distinct vertices, one corner at each).
pub fn certify_curvature(m: usize, k: usize) -> Result<CurvatureReport, RipsError> {
    if k < 2 {
        return Err(RipsError::KTooSmall(k));
    }
    let data = partition_wise(m)?;
    let pc = pentagon_complex(&data)?;
    let c = &pc.complex;
    let angles = AngleStructure::uniform(c, PI / 2.0);
    let side = pentagon_side();
    let theta = regular_polygon_angle(k, side)?;
    let mut girth = f64::INFINITY;
    let mut smoothed_girth = f64::INFINITY;
    let mut bipartite = true;
    let mut no_bigons = true;
    let mut min_a_edge = f64::INFINITY;
    let (mut lv, mut le) = (0, 0);
    for vert in 0..c.num_vertices() {
        let (mut l, ends) = vertex_link(c, &angles, vert)?;
        let find = |e: usize, start: bool| ends.iter().position(|x| x.edge == e && x.start == start);
        if let (Some(p), Some(q)) = (find(pc.a[0], false), find(pc.a[0], true)) {
            l.add_edge(p, q, theta);
        }
        lv += l.num_vertices();
        le += l.edges.len();
        girth = girth.min(weighted_girth(&l));
        let generator_end = |x: usize| ends[x].edge == pc.t || pc.a.contains(&ends[x].edge);
        let sm = l.smooth(generator_end);
        smoothed_girth = smoothed_girth.min(weighted_girth(&sm));
        // sides: a⁺ on one side, a⁻ on the other; t ends are outside the test
        let side_of: Vec<Option<bool>> = sm
            .labels
            .iter()
            .map(|lab| {
                if lab.starts_with('a') {
                    Some(lab.ends_with('⁺'))
                } else {
                    None
                }
            })
            .collect();
        let rep = structural_large_check(&sm, &side_of);
        bipartite &= rep.bipartite;
        no_bigons &= rep.no_bigons;
        min_a_edge = min_a_edge.min(rep.min_weight);
    }
    Ok(CurvatureReport {
        m,
        k,
        vertices_checked: c.num_vertices(),
        interior_vertices: c.num_vertices() - 1,
        link_vertices: lv,
        link_edges: le,
        girth,
        smoothed_girth,
        bipartite,
        no_bigons,
        min_a_edge,
        pentagon_side: side,
        kgon_angle: theta,
        girth_ok: girth >= 2.0 * PI - ANGLE_TOL,
        structural_ok: bipartite && no_bigons && min_a_edge >= PI / 2.0 - ANGLE_TOL,
    })
}

/// One-vertex complex of the triangle subdivision. Vector indices are
/// zero-based: `s[i][j]` is `s_{i+1,j+1}`, `lambda[i][j]` is `Λ_{i+1,j}`.
#[derive(Debug, Clone)]
pub struct TriangleComplex {
    pub data: WiseWordData,
    pub complex: Complex,
    pub heights: HeightFunction,
    pub t: usize,
    pub a: Vec<usize>,
    pub s: Vec<Vec<usize>>,
    pub r: Vec<Vec<usize>>,
    pub top: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<usize>>,
    pub gamma: Vec<usize>,
    pub kgon: Option<usize>,
}

/// Triangles of the `W_i` disk: `T_i = t a_i s_{i,1}⁻¹` and
/// `Δ_{i,j} = a_{σ_i(j)} s_{i,j+1} s_{i,j}⁻¹`, with `s_{i,15} = t`. In the
/// `V_i` disk: `Λ_{i,0} = t a_{τ_i(1)} r_{i,1}⁻¹`,
/// `Λ_{i,j} = r_{i,j} a_{τ_i(j+1)} r_{i,j+1}⁻¹` and `Γ_i = a_i t r_{i,14}⁻¹`.
pub fn triangle_complex(data: &WiseWordData, k: Option<usize>) -> Result<TriangleComplex, RipsError> {
    let m = data.m;
    let mut c = Complex::new();
    let v = c.add_vertex("v");
    let t = c.add_edge(v, v, "t")?;
    let a: Vec<usize> = (1..=m)
        .map(|i| c.add_edge(v, v, format!("a{i}")))
        .collect::<Result<_, _>>()?;
    let mut s = Vec::with_capacity(m);
    let mut r = Vec::with_capacity(m);
    for i in 1..=m {
        s.push(
            (1..=BLOCK)
                .map(|j| c.add_edge(v, v, format!("s{i},{j}")))
                .collect::<Result<Vec<_>, _>>()?,
        );
        r.push(
            (1..=BLOCK)
                .map(|j| c.add_edge(v, v, format!("r{i},{j}")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let (f, b) = (SignedEdge::fwd, SignedEdge::bwd);
    let letter = |x: u32| a[x as usize - 1];
    let (mut top, mut delta, mut lambda, mut gamma) = (vec![], vec![], vec![], vec![]);
    for i in 1..=m {
        let si = &s[i - 1];
        top.push(c.add_face(vec![f(t), f(a[i - 1]), b(si[0])], format!("T{i}"))?);
        let mut d = Vec::with_capacity(BLOCK);
        for j in 1..=BLOCK {
            let next = if j == BLOCK { t } else { si[j] };
            d.push(c.add_face(
                vec![f(letter(data.sigma(i, j))), f(next), b(si[j - 1])],
                format!("Δ{i},{j}"),
            )?);
        }
        delta.push(d);
        let ri = &r[i - 1];
        let mut l = Vec::with_capacity(BLOCK);
        l.push(c.add_face(vec![f(t), f(letter(data.tau(i, 1))), b(ri[0])], format!("Λ{i},0"))?);
        for j in 1..BLOCK {
            l.push(c.add_face(
                vec![f(ri[j - 1]), f(letter(data.tau(i, j + 1))), b(ri[j])],
                format!("Λ{i},{j}"),
            )?);
        }
        lambda.push(l);
        gamma.push(c.add_face(vec![f(a[i - 1]), f(t), b(ri[BLOCK - 1])], format!("Γ{i}"))?);
    }
    let kgon = match k {
        Some(k) if k >= 2 => Some(c.add_face(vec![f(a[0]); k], format!("a1^{k}"))?),
        Some(k) => return Err(RipsError::KTooSmall(k)),
        None => None,
    };
    let mut offsets = vec![0i64; c.num_edges()];
    offsets[t] = 1;
    for e in s.iter().chain(&r).flatten() {
        offsets[*e] = 1;
    }
    Ok(TriangleComplex {
        data: data.clone(),
        complex: c,
        heights: HeightFunction { offsets },
        t,
        a,
        s,
        r,
        top,
        delta,
        lambda,
        gamma,
        kgon,
    })
}

impl TriangleComplex {
    /// The `W_i` disk faces (`T_i` and `Δ_{i,·}`).
    pub fn w_faces(&self, i: usize) -> Vec<usize> {
        let mut v = vec![self.top[i - 1]];
        v.extend(&self.delta[i - 1]);
        v
    }

    pub fn v_faces(&self, i: usize) -> Vec<usize> {
        let mut v = self.lambda[i - 1].clone();
        v.push(self.gamma[i - 1]);
        v
    }

    /// Spanning faces whose lowest level is a single corner; these lie in
    /// the cones on ascending links of vertices.
    pub fn single_bottom_faces(&self) -> BTreeSet<usize> {
        (0..self.complex.num_faces())
            .filter(|&f| {
                let lv = self.heights.face_levels(&self.complex, f, 0);
                let lo = *lv.iter().min().unwrap();
                let hi = *lv.iter().max().unwrap();
                hi > lo && lv.iter().filter(|&&x| x == lo).count() == 1
            })
            .collect()
    }

    /// Canceling set: `Γ_ℓ` for every `ℓ` and every `Δ_{i,j}` with `j ≠ 1`.
    pub fn canceling_set(&self) -> BTreeSet<usize> {
        let mut u: BTreeSet<usize> = self.gamma.iter().copied().collect();
        for d in &self.delta {
            u.extend(&d[1..]);
        }
        u
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseCensus {
    pub m: usize,
    pub ascending: LinkCensus,
    pub descending: LinkCensus,
    /// Singletons of the ascending link are exactly `s_{i,j}⁻`, `j ≥ 2`.
    pub singletons_are_s: bool,
    /// The big component holds `t⁻`, every `s_{i,1}⁻` and every arm end
    /// `r_{i,14}⁻` (the point also named `a_i⁻`).
    pub tree_has_cone_points: bool,
    /// Edges on each arm from `t⁻` to `a_i⁻`.
    pub arm_segments: Vec<usize>,
    pub isomorphic_under_swap: bool,
}

/// Ascending and descending links of the vertex of the triangle complex.
pub fn morse_census(tc: &TriangleComplex) -> Result<MorseCensus, RipsError> {
    let c = &tc.complex;
    tc.heights.validate(c)?;
    let (up, up_ends) = ascending_vertex_link(c, &tc.heights, 0)?;
    let (down, _) = descending_vertex_link(c, &tc.heights, 0)?;
    let up_c = census(&up);
    let labels = component_labels(&up);
    let idx = |e: usize| up_ends.iter().position(|x| x.edge == e && x.start).unwrap();
    let mut comp_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in &labels {
        *comp_size.entry(l).or_default() += 1;
    }
    let is_single = |x: usize| comp_size[&labels[x]] == 1;
    let s_set: BTreeSet<usize> = tc
        .s
        .iter()
        .flat_map(|row| row[1..].iter().map(|&e| idx(e)))
        .collect();
    let singles: BTreeSet<usize> = (0..up.num_vertices()).filter(|&x| is_single(x)).collect();
    let root = labels[idx(tc.t)];
    let tree_has = tc.s.iter().all(|row| labels[idx(row[0])] == root)
        && tc.r.iter().all(|row| labels[idx(row[BLOCK - 1])] == root);
    // arm length: path t⁻, r_{i,1}⁻, …, r_{i,14}⁻ along link edges
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v, _) in &up.edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let arm_segments = tc
        .r
        .iter()
        .map(|row| {
            let mut prev = idx(tc.t);
            let mut n = 0;
            for &e in row {
                let x = idx(e);
                if adj.get(&prev).is_some_and(|nb| nb.contains(&x)) {
                    n += 1;
                }
                prev = x;
            }
            n
        })
        .collect();
    let fa = forest_canonical_form(&up);
    let fd = forest_canonical_form(&down);
    Ok(MorseCensus {
        m: tc.data.m,
        ascending: up_c,
        descending: census(&down),
        singletons_are_s: singles == s_set,
        tree_has_cone_points: tree_has,
        arm_segments,
        isomorphic_under_swap: fa.is_some() && fa == fd,
    })
}

/// Number of faces rising from the horizontal edge `a_ℓ`.
pub fn edge_up_link_size(tc: &TriangleComplex, l: usize) -> Result<usize, RipsError> {
    let e = *tc
        .a
        .get(l.wrapping_sub(1))
        .ok_or(RipsError::Complex(ComplexError::NoSuchEdge(l)))?;
    Ok(edge_up_link(&tc.complex, &tc.heights, e)?.len())
}

/// Planar `W_i` disk: bottom `w0..w14` along `W_i`, top `v1 → v2` along `a_i`.
/// Returns the disk, its boundary edges and the id of `Δ_{i,1}`.
pub fn w_disk(data: &WiseWordData, i: usize, with_delta1: bool) -> Result<(Complex, Selection, usize), RipsError> {
    let mut c = Complex::new();
    let w: Vec<usize> = (0..=BLOCK).map(|j| c.add_vertex(format!("w{j}"))).collect();
    let v1 = c.add_vertex("v1");
    let v2 = c.add_vertex("v2");
    let mut boundary = BTreeSet::new();
    let word: Vec<usize> = (1..=BLOCK)
        .map(|j| c.add_edge(w[j - 1], w[j], format!("a{}", data.sigma(i, j))))
        .collect::<Result<_, _>>()?;
    boundary.extend(&word);
    let tl = c.add_edge(w[0], v1, "t")?;
    let ai = c.add_edge(v1, v2, format!("a{i}"))?;
    let tr = c.add_edge(w[BLOCK], v2, "t")?;
    boundary.extend([tl, ai, tr]);
    let s: Vec<usize> = (1..=BLOCK)
        .map(|j| c.add_edge(w[j - 1], v2, format!("s{i},{j}")))
        .collect::<Result<_, _>>()?;
    let (f, b) = (SignedEdge::fwd, SignedEdge::bwd);
    c.add_face(vec![f(tl), f(ai), b(s[0])], format!("T{i}"))?;
    let mut d1 = usize::MAX;
    for j in 1..=BLOCK {
        if j == 1 && !with_delta1 {
            continue;
        }
        let next = if j == BLOCK { tr } else { s[j] };
        let id = c.add_face(vec![f(word[j - 1]), f(next), b(s[j - 1])], format!("Δ{i},{j}"))?;
        if j == 1 {
            d1 = id;
        }
    }
    let sel = Selection {
        vertices: (0..c.num_vertices()).collect(),
        edges: boundary,
        ..Default::default()
    };
    Ok((c, sel, d1))
}

/// Planar `V_i` disk: bottom `b0 → b1` along `a_i`, top `u0..u14` along `V_i`.
/// Returns the disk and the top path `V_i` as a selection.
pub fn v_disk(data: &WiseWordData, i: usize) -> Result<(Complex, Selection), RipsError> {
    let mut c = Complex::new();
    let b0 = c.add_vertex("b0");
    let b1 = c.add_vertex("b1");
    let u: Vec<usize> = (0..=BLOCK).map(|j| c.add_vertex(format!("u{j}"))).collect();
    let ai = c.add_edge(b0, b1, format!("a{i}"))?;
    let tl = c.add_edge(b0, u[0], "t")?;
    let tr = c.add_edge(b1, u[BLOCK], "t")?;
    let word: Vec<usize> = (1..=BLOCK)
        .map(|j| c.add_edge(u[j - 1], u[j], format!("a{}", data.tau(i, j))))
        .collect::<Result<_, _>>()?;
    let r: Vec<usize> = (1..=BLOCK)
        .map(|j| c.add_edge(b0, u[j], format!("r{i},{j}")))
        .collect::<Result<_, _>>()?;
    let (f, b) = (SignedEdge::fwd, SignedEdge::bwd);
    c.add_face(vec![f(tl), f(word[0]), b(r[0])], format!("Λ{i},0"))?;
    for j in 1..BLOCK {
        c.add_face(vec![f(r[j - 1]), f(word[j]), b(r[j])], format!("Λ{i},{j}"))?;
    }
    c.add_face(vec![f(ai), f(tr), b(r[BLOCK - 1])], format!("Γ{i}"))?;
    let sel = Selection {
        vertices: u.iter().copied().collect(),
        edges: word.iter().copied().collect(),
        ..Default::default()
    };
    Ok((c, sel))
}

/// Reads the label word around a disk's boundary starting at vertex 0 with
/// the given first edge, as generator letters (`t` = m+1).
fn boundary_word(c: &Complex, start_edges: &[SignedEdge], m: usize) -> Vec<i32> {
    start_edges
        .iter()
        .map(|s| {
            let l = &c.edge(s.edge).label;
            let g = if l == "t" {
                m as i32 + 1
            } else {
                l[1..].parse::<i32>().unwrap_or(0)
            };
            if s.forward {
                g
            } else {
                -g
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskReport {
    pub disks: usize,
    pub all_euler_one: bool,
    pub all_boundaries_match: bool,
    pub interior_edges_shared_twice: bool,
}

/// Each triangulated relator is a disk whose boundary reads the relator.
pub fn check_disks(data: &WiseWordData) -> Result<DiskReport, RipsError> {
    let m = data.m;
    let p = presentation(data, None)?;
    let (mut euler, mut bnd, mut inner) = (true, true, true);
    for i in 1..=m {
        let (c, sel, _) = w_disk(data, i, true)?;
        euler &= c.euler_characteristic() == 1;
        let deg = c.edge_face_degrees();
        inner &= (0..c.num_edges()).all(|e| deg[e] == if sel.edges.contains(&e) { 1 } else { 2 });
        // t a_i t⁻¹ then W_i backwards
        let find = |l: &str, s: usize| {
            (0..c.num_edges())
                .find(|&e| c.edge(e).label == l && c.edge(e).src == s)
                .unwrap()
        };
        let mut steps = vec![
            SignedEdge::fwd(find("t", 0)),
            SignedEdge::fwd(find(&format!("a{i}"), BLOCK + 1)),
            SignedEdge::bwd(find("t", BLOCK)),
        ];
        for j in (1..=BLOCK).rev() {
            steps.push(SignedEdge::bwd(find(&format!("a{}", data.sigma(i, j)), j - 1)));
        }
        let path = EdgePath::new(&c, 0, steps.clone())?;
        bnd &= path.is_closed(&c) && boundary_word(&c, &steps, m) == p.relators[i - 1];

        let (c, _) = v_disk(data, i)?;
        euler &= c.euler_characteristic() == 1;
        let deg = c.edge_face_degrees();
        let boundary_count = deg.iter().filter(|&&d| d == 1).count();
        inner &= boundary_count == 17 && deg.iter().all(|&d| d == 1 || d == 2);
        // t⁻¹ a_i t V_i⁻¹ starting at u0
        let u0 = 2;
        let mut steps = vec![SignedEdge::bwd(1), SignedEdge::fwd(0), SignedEdge::fwd(2)];
        for j in (1..=BLOCK).rev() {
            steps.push(SignedEdge::bwd(2 + j));
        }
        let path = EdgePath::new(&c, u0, steps.clone())?;
        bnd &= path.is_closed(&c) && boundary_word(&c, &steps, m) == p.relators[m + i - 1];
    }
    Ok(DiskReport {
        disks: 2 * m,
        all_euler_one: euler,
        all_boundaries_match: bnd,
        interior_edges_shared_twice: inner,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandleReport {
    pub m: usize,
    pub negative_control: bool,
    /// Disks `W_i` whose region collapses onto the relator boundary.
    pub a_passed: usize,
    pub a_failures: Vec<usize>,
    /// Labels `a_j` whose only remaining rising face is `Γ_j`.
    pub b_passed: usize,
    pub b_failures: Vec<usize>,
    /// Disks `V_i` collapsing onto `t⁻¹V_i t` and then onto `V_i`, the last
    /// two collapses freeing the bottoms of the `t` edges.
    pub c_passed: usize,
    pub c_failures: Vec<usize>,
    /// `X₁ ∪ U` meets every `W` disk in all triangles but `Δ_{i,1}`.
    pub shaded_region_ok: bool,
    /// Boundaries of every `Δ_{i,1}` and horizontal face lie in `X₁ ∪ U`.
    pub boundaries_in_x1_u: bool,
    pub collapse_steps: usize,
}

impl HandleReport {
    pub fn passes(&self) -> bool {
        self.a_failures.is_empty()
            && self.b_failures.is_empty()
            && self.c_failures.is_empty()
            && self.shaded_region_ok
            && self.boundaries_in_x1_u
    }
}

/// Local facts behind the handle cancellation, per disk and per label. With
/// `negative_control` each `Δ_{i,1}` is wrongly placed in the canceling set.
pub fn verify_handle_cancellation(m: usize, negative_control: bool) -> Result<HandleReport, RipsError> {
    let data = partition_wise(m)?;
    let tc = triangle_complex(&data, Some(5))?;
    let mut u = tc.canceling_set();
    if negative_control {
        u.extend(tc.delta.iter().map(|d| d[0]));
    }
    let x1 = tc.single_bottom_faces();
    let region: BTreeSet<usize> = u.union(&x1).copied().collect();

    let mut steps = 0;
    let mut a_fail = Vec::new();
    let mut retracted: BTreeSet<usize> = BTreeSet::new();
    let mut shaded = true;
    for i in 1..=m {
        let in_region = region.contains(&tc.delta[i - 1][0]);
        let wf: BTreeSet<usize> = tc.w_faces(i).into_iter().collect();
        let missing: Vec<usize> = wf.difference(&region).copied().collect();
        shaded &= negative_control || missing == vec![tc.delta[i - 1][0]];
        let (disk, target, _) = w_disk(&data, i, in_region)?;
        match collapses_to(&disk, &target, COLLAPSE_BUDGET) {
            Ok(seq) => {
                steps += seq.steps.len();
                retracted.extend(&wf);
            }
            Err(CollapseError::NoCollapse(_)) | Err(CollapseError::BudgetExceeded(_)) => a_fail.push(i),
            Err(CollapseError::BadTarget) => a_fail.push(i),
        }
    }

    let mut b_fail = Vec::new();
    for l in 1..=m {
        let rising = edge_up_link(&tc.complex, &tc.heights, tc.a[l - 1])?;
        let left: Vec<usize> = rising
            .iter()
            .map(|&(f, _)| f)
            .filter(|f| !retracted.contains(f))
            .collect();
        if left != vec![tc.gamma[l - 1]] {
            b_fail.push(l);
        }
    }

    let mut c_fail = Vec::new();
    for i in 1..=m {
        let (disk, top) = v_disk(&data, i)?;
        let mut stage1 = top.clone();
        stage1.vertices.extend([0, 1]);
        stage1.edges.extend([1, 2]);
        let ok = match collapses_to(&disk, &stage1, COLLAPSE_BUDGET) {
            Ok(mut seq) => {
                seq.steps.push((Cell::Vertex(0), Cell::Edge(1)));
                seq.steps.push((Cell::Vertex(1), Cell::Edge(2)));
                steps += seq.steps.len();
                seq.replay(&disk).is_ok_and(|left| left == top)
            }
            Err(_) => false,
        };
        if !ok {
            c_fail.push(i);
        }
    }

    let closure_edges: BTreeSet<usize> = region
        .iter()
        .flat_map(|&f| tc.complex.face(f).boundary.iter().map(|s| s.edge))
        .collect();
    let mut to_check: Vec<usize> = tc.delta.iter().map(|d| d[0]).collect();
    to_check.extend(tc.kgon);
    let boundaries_ok = to_check.iter().all(|&f| {
        tc.complex
            .face(f)
            .boundary
            .iter()
            .all(|s| closure_edges.contains(&s.edge))
    });

    Ok(HandleReport {
        m,
        negative_control,
        a_passed: m - a_fail.len(),
        a_failures: a_fail,
        b_passed: m - b_fail.len(),
        b_failures: b_fail,
        c_passed: m - c_fail.len(),
        c_failures: c_fail,
        shaded_region_ok: shaded,
        boundaries_in_x1_u: boundaries_ok,
        collapse_steps: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Expands the displayed product formula from its bracketed form.
    fn hand_expanded(m: usize) -> String {
        let mut s = String::new();
        for i in 2..m {
            s += &format!("a{i}");
            for j in i + 1..=m {
                s += &format!("a{i}a{j}");
            }
        }
        s + &format!("a{m}")
    }

    #[test]
    fn small_wise_words() {
        assert_eq!(word_string(&wise_word(3).unwrap()), "a2a2a3a3");
        assert_eq!(word_string(&wise_word(4).unwrap()), "a2a2a3a2a4a3a3a4a4");
        assert_eq!(word_string(&wise_word(7).unwrap()), hand_expanded(7));
        assert!(wise_word(2).is_err());
    }

    #[test]
    fn wise_word_lengths_and_pairs() {
        for m in 3..=60 {
            let w = wise_word(m).unwrap();
            assert_eq!(w.len(), (m - 1) * (m - 1));
            assert_eq!(check_no_repetition(&w), (true, None));
        }
        assert_eq!(check_no_repetition(&[2, 3, 2, 3]), (false, Some((2, 3))));
        assert_eq!(check_no_repetition(&[5]), (true, None));
    }

    #[test]
    fn partition_for_thirty() {
        let d = partition_wise(30).unwrap();
        assert_eq!(d.w.len() + d.v.len(), 60);
        assert!(d.all_words().iter().all(|w| w.len() == BLOCK));
        assert_eq!(d.unused.len(), 3);
        let count = |ws: &[Vec<u32>]| ws.iter().flatten().filter(|&&x| x == 1).count();
        assert_eq!((count(&d.w), count(&d.v)), (1, 1));
        assert_eq!(d.w[0][0], 1);
        assert_eq!(*d.v[0].last().unwrap(), 1);
        assert_eq!(first_repeated_pair(&d.all_words()), None);
        assert!(partition_wise(29).is_err());
    }

    #[test]
    fn blocks_tile_a_prefix() {
        for m in [30, 33, 41] {
            let d = partition_wise(m).unwrap();
            let mut re = d.w[0][1..].to_vec();
            re.extend(&d.v[0][..BLOCK - 1]);
            for w in d.w[1..].iter().chain(&d.v[1..]) {
                re.extend(w);
            }
            re.extend(&d.unused);
            assert_eq!(re, d.sigma_word);
            assert_eq!(d.unused.len(), m * m - 30 * m + 3);
        }
    }

    #[test]
    fn presentation_counts_and_quotients() {
        let g0 = presentation_g0(30).unwrap();
        assert_eq!((g0.generators.len(), g0.relators.len()), (31, 60));
        let g = presentation_g(30, 5).unwrap();
        assert_eq!(g.relators.len(), 61);
        let q = quotient_checks(&g, Some(5));
        assert!(q.z_map_ok && q.a1_map_ok);
        assert_eq!(q.a1_order, Some(5));
        let q0 = quotient_checks(&g0, None);
        assert!(q0.z_map_ok && q0.a1_map_ok && q0.a1_order.is_none());
        let mut bad = g.clone();
        bad.relators[7].push(1);
        let qb = quotient_checks(&bad, Some(5));
        assert!(!qb.a1_map_ok);
        assert_eq!(qb.first_offending_relator, Some(7));
    }

    #[test]
    fn pentagon_complex_shape() {
        let d = partition_wise(30).unwrap();
        let pc = pentagon_complex(&d).unwrap();
        assert_eq!(pc.complex.num_faces(), 300);
        assert_eq!(pc.chords.len(), 240);
        let deg = pc.complex.edge_face_degrees();
        assert!(pc.chords.iter().all(|&e| deg[e] == 2));
    }

    #[test]
    fn curvature_thirty_five_and_seven() {
        for k in [5, 7] {
            let r = certify_curvature(30, k).unwrap();
            assert!(r.passes(), "{r:?}");
            assert!(r.kgon_angle >= PI / 2.0 - ANGLE_TOL);
            assert!((r.girth - r.smoothed_girth).abs() < 1e-9);
        }
        let r4 = certify_curvature(30, 4).unwrap();
        assert!(!r4.structural_ok);
    }

    #[test]
    fn triangle_complex_heights_are_one_slab() {
        let d = partition_wise(30).unwrap();
        let tc = triangle_complex(&d, Some(5)).unwrap();
        assert_eq!(tc.complex.num_faces(), 30 * 30 + 1);
        let kinds = tc.heights.validate(&tc.complex).unwrap();
        let horizontal = kinds.iter().filter(|k| **k == crate::morse::FaceKind::Horizontal).count();
        assert_eq!(horizontal, 1);
    }

    #[test]
    fn census_for_thirty() {
        let d = partition_wise(30).unwrap();
        let tc = triangle_complex(&d, None).unwrap();
        let c = morse_census(&tc).unwrap();
        assert_eq!(c.ascending.components, 391);
        assert_eq!(c.ascending.singletons, 390);
        assert_eq!(c.ascending.big_components, vec![(1 + 15 * 30, true)]);
        assert!(c.singletons_are_s && c.tree_has_cone_points && c.isomorphic_under_swap);
        assert!(c.arm_segments.iter().all(|&n| n == 14));
        assert_eq!(c.descending.components, 391);
    }

    #[test]
    fn up_link_sizes_match_letter_counts() {
        let d = partition_wise(30).unwrap();
        let tc = triangle_complex(&d, Some(5)).unwrap();
        for l in 1..=30u32 {
            let occ = d.w.iter().flatten().filter(|&&x| x == l).count();
            assert_eq!(edge_up_link_size(&tc, l as usize).unwrap(), 1 + occ);
        }
        assert_eq!(edge_up_link_size(&tc, 1).unwrap(), 2);
        assert!(edge_up_link_size(&tc, 0).is_err());
    }

    #[test]
    fn disks_are_disks() {
        let d = partition_wise(30).unwrap();
        let r = check_disks(&d).unwrap();
        assert!(r.all_euler_one && r.all_boundaries_match && r.interior_edges_shared_twice);
    }

    #[test]
    fn handle_cancellation_and_control() {
        let r = verify_handle_cancellation(30, false).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!((r.a_passed, r.b_passed, r.c_passed), (30, 30, 30));
        let n = verify_handle_cancellation(30, true).unwrap();
        assert!(!n.b_failures.is_empty());
        assert_eq!(n.a_passed, 0);
    }
}
