//! Conjugacy classes of an element `σ ∈ G` meeting `P = φ⁻¹(⟨φ(σ)⟩)` for an
//! epimorphism `φ: G → Q` of finite permutation groups, against the index
//! `[Cent_Q(φσ) : φ(Cent_G σ)]`.
//!
//! Group products use the `then` convention throughout: `gh` is `g.then(h)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex::UnionFind;
use crate::perm::{Perm, PermError, PermGroup};

pub const ORDER_CAP: usize = 1_000_000;
/// Largest permutation degree accepted from an instance file.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum ConjError {
    #[error("group order exceeds the cap of {0}")]
    Cap(usize),
    #[error("generator images do not define a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("sigma is not an element of G")]
    SigmaOutside,
    #[error("{0} generators but {1} images")]
    ImageCount(usize, usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// `G`, the images of its generators in `Q` (which they generate), and `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjInstance {
    pub name: String,
    pub g_degree: usize,
    pub g_gens: Vec<Perm>,
    pub gen_names: Vec<String>,
    pub q_degree: usize,
    pub phi: Vec<Perm>,
    pub sigma: Perm,
}

/// A fully enumerated instance with `φ` tabulated.
#[derive(Debug, Clone)]
pub struct Enumerated {
    pub g: Vec<Perm>,
    pub index: HashMap<Perm, usize>,
    pub q: Vec<Perm>,
    pub q_index: HashMap<Perm, usize>,
    /// `φ` as indices into `q`.
    pub phi: Vec<usize>,
    pub sigma: usize,
}

impl Enumerated {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.g[a].then(&self.g[b])]
    }

    fn inv(&self, a: usize) -> usize {
        self.index[&self.g[a].inverse()]
    }

    /// `g σ g⁻¹`.
    fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }
}

impl ConjInstance {
    /// Enumerates `G` and `Q` and extends `φ` along the Cayley graph of `G`,
    /// checking that every edge of it is respected.
    pub fn enumerate(&self) -> Result<Enumerated, ConjError> {
        if self.g_gens.len() != self.phi.len() {
            return Err(ConjError::ImageCount(self.g_gens.len(), self.phi.len()));
        }
        let qg = PermGroup::new(self.q_degree, self.phi.clone())?.with_cap(ORDER_CAP);
        let q = qg.elements().map_err(|_| ConjError::Cap(ORDER_CAP))?;
        let q_index: HashMap<Perm, usize> = q.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        for g in &self.g_gens {
            if g.degree() != self.g_degree {
                return Err(PermError::DegreeMismatch(self.g_degree, g.degree()).into());
            }
        }
        let id = Perm::identity(self.g_degree);
        let mut g = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut phi = vec![0usize];
        let mut head = 0;
        while head < g.len() {
            let x = g[head].clone();
            let fx = &q[phi[head]];
            head += 1;
            for (k, s) in self.g_gens.iter().enumerate() {
                let y = x.then(s);
                let fy = q_index[&fx.then(&self.phi[k])];
                match index.get(&y) {
                    Some(&j) if phi[j] != fy => {
                        return Err(ConjError::NotHomomorphism(format!(
                            "{y} reached with images {} and {}",
                            q[phi[j]], q[fy]
                        )));
                    }
                    Some(_) => {}
                    None => {
                        if g.len() >= ORDER_CAP {
                            return Err(ConjError::Cap(ORDER_CAP));
                        }
                        index.insert(y.clone(), g.len());
                        g.push(y);
                        phi.push(fy);
                    }
                }
            }
        }
        let sigma = *index.get(&self.sigma).ok_or(ConjError::SigmaOutside)?;
        Ok(Enumerated {
            g,
            index,
            q,
            q_index,
            phi,
            sigma,
        })
    }

    pub fn with_sigma(&self, sigma: Perm) -> ConjInstance {
        ConjInstance {
            sigma,
            ..self.clone()
        }
    }

    /// Instance file text; see [`parse_instance`].
    pub fn to_text(&self) -> String {
        let mut s = format!("name {}\ndegree {}\nqdegree {}\n", self.name, self.g_degree, self.q_degree);
        for (k, n) in self.gen_names.iter().enumerate() {
            let _ = writeln!(s, "gen {n} {}", self.g_gens[k]);
        }
        for (k, n) in self.gen_names.iter().enumerate() {
            let _ = writeln!(s, "phi {n} {}", self.phi[k]);
        }
        let _ = writeln!(s, "sigma {}", self.sigma);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjCount {
    pub order_g: usize,
    pub order_q: usize,
    pub order_p: usize,
    pub class_size: usize,
    pub classes_meeting: usize,
    pub cent_g: usize,
    pub cent_q: usize,
    pub phi_cent_g: usize,
    pub index_bound: usize,
    pub pass: bool,
}

fn cyclic_closure(x: &Perm) -> BTreeSet<Perm> {
    let mut out = BTreeSet::new();
    let mut y = x.clone();
    while out.insert(y.clone()) {
        y = y.then(x);
    }
    out
}

/// Brute-force counts for one instance.
pub fn conjugacy_count(inst: &ConjInstance) -> Result<ConjCount, ConjError> {
    let e = inst.enumerate()?;
    Ok(count_enumerated(&e))
}

pub fn count_enumerated(e: &Enumerated) -> ConjCount {
    let n = e.g.len();
    let s = e.sigma;
    let fs = &e.q[e.phi[s]];
    let sub = cyclic_closure(fs);
    let in_p: Vec<bool> = (0..n).map(|g| sub.contains(&e.q[e.phi[g]])).collect();
    let p: Vec<usize> = (0..n).filter(|&g| in_p[g]).collect();
    let class: BTreeSet<usize> = (0..n).map(|g| e.conj(g, s)).collect();
    // P-orbits on the part of the class lying in P
    let members: Vec<usize> = class.iter().copied().filter(|&x| in_p[x]).collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut uf = UnionFind::new(members.len());
    for (i, &x) in members.iter().enumerate() {
        for &h in &p {
            uf.union(i, pos[&e.conj(h, x)]);
        }
    }
    let classes = uf.labels().1;
    let cent_g: Vec<usize> = (0..n).filter(|&g| e.mul(g, s) == e.mul(s, g)).collect();
    let cent_q = e.q.iter().filter(|q| q.then(fs) == fs.then(q)).count();
    let phi_cent: BTreeSet<usize> = cent_g.iter().map(|&g| e.phi[g]).collect();
    let index = cent_q / phi_cent.len();
    ConjCount {
        order_g: n,
        order_q: e.q.len(),
        order_p: p.len(),
        class_size: class.len(),
        classes_meeting: classes,
        cent_g: cent_g.len(),
        cent_q,
        phi_cent_g: phi_cent.len(),
        index_bound: index,
        pass: classes >= index,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetCheck {
    pub pairs: usize,
    pub failures: usize,
}

impl CosetCheck {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

/// For `q₁, q₂ ∈ Cent_Q(φσ)` with fixed preimages `g₁, g₂`:
/// `g₁σg₁⁻¹ ~_P g₂σg₂⁻¹` iff `q₂⁻¹q₁ ∈ φ(Cent_G σ)`.
pub fn coset_parametrization_check(inst: &ConjInstance) -> Result<CosetCheck, ConjError> {
    let e = inst.enumerate()?;
    Ok(coset_check_enumerated(&e))
}

pub fn coset_check_enumerated(e: &Enumerated) -> CosetCheck {
    let n = e.g.len();
    let s = e.sigma;
    let fs = &e.q[e.phi[s]];
    let sub = cyclic_closure(fs);
    let p: Vec<usize> = (0..n).filter(|&g| sub.contains(&e.q[e.phi[g]])).collect();
    let phi_cent: BTreeSet<usize> = (0..n)
        .filter(|&g| e.mul(g, s) == e.mul(s, g))
        .map(|g| e.phi[g])
        .collect();
    let cent_q: Vec<usize> = (0..e.q.len())
        .filter(|&i| e.q[i].then(fs) == fs.then(&e.q[i]))
        .collect();
    // first preimage in enumeration order
    let mut pre = vec![usize::MAX; e.q.len()];
    for g in (0..n).rev() {
        pre[e.phi[g]] = g;
    }
    let mut failures = 0;
    for &q1 in &cent_q {
        let c1 = e.conj(pre[q1], s);
        for &q2 in &cent_q {
            let c2 = e.conj(pre[q2], s);
            let lhs = p.iter().any(|&h| e.conj(h, c1) == c2);
            let d = e.q[q2].inverse().then(&e.q[q1]);
            let rhs = phi_cent.contains(&e.q_index[&d]);
            if lhs != rhs {
                failures += 1;
            }
        }
    }
    CosetCheck {
        pairs: cent_q.len() * cent_q.len(),
        failures,
    }
}

fn cyc(n: usize, cycles: &[Vec<usize>]) -> Perm {
    Perm::from_cycles(n, cycles).expect("valid cycles")
}

fn rotation(n: usize) -> Perm {
    if n < 2 {
        return Perm::identity(n.max(1));
    }
    cyc(n, &[(1..=n).collect()])
}

/// `x ↦ ax + b` over `ℤ_p` with `a` in the order-`n` subgroup of units,
/// mapped onto `ℤ_n` by killing the translations; `σ` is the translation.
pub fn affine_instance(p: usize, n: usize) -> Option<ConjInstance> {
    if p < 2 || n == 0 || (p - 1) % n != 0 {
        return None;
    }
    let root = (2..p).find(|&r| {
        let mut x = 1;
        let mut order = 0;
        loop {
            x = x * r % p;
            order += 1;
            if x == 1 {
                break;
            }
        }
        order == p - 1
    })?;
    // a generator of the order-n subgroup, inverted so that t x t⁻¹ = x^r
    let mut a = 1;
    for _ in 0..(p - 1) / n * (n - 1) {
        a = a * root % p;
    }
    // points 1..=p stand for 0..p-1
    let x = Perm::from_images(&(0..p).map(|i| (i + 1) % p + 1).collect::<Vec<_>>()).ok()?;
    let t = Perm::from_images(&(0..p).map(|i| i * a % p + 1).collect::<Vec<_>>()).ok()?;
    Some(ConjInstance {
        name: format!("affine-{p}-{n}"),
        g_degree: p,
        g_gens: vec![x.clone(), t],
        gen_names: vec!["x".into(), "t".into()],
        q_degree: n,
        phi: vec![Perm::identity(n), rotation(n)],
        sigma: x,
    })
}

/// Frobenius group of order 20 onto `ℤ₄`, `σ = x`.
pub fn frobenius20() -> ConjInstance {
    let mut inst = affine_instance(5, 4).expect("4 divides 4");
    inst.name = "frobenius20".into();
    inst
}

/// `S₃` onto `ℤ₂` by sign, `σ` a transposition.
pub fn s3_sign() -> ConjInstance {
    let s = cyc(3, &[vec![1, 2]]);
    ConjInstance {
        name: "s3-sign".into(),
        g_degree: 3,
        g_gens: vec![s.clone(), cyc(3, &[vec![1, 2, 3]])],
        gen_names: vec!["s".into(), "r".into()],
        q_degree: 2,
        phi: vec![cyc(2, &[vec![1, 2]]), Perm::identity(2)],
        sigma: s,
    }
}

/// `ℤ_n` onto itself by the identity.
pub fn cyclic_identity(n: usize, sigma_power: i64) -> ConjInstance {
    let r = rotation(n);
    ConjInstance {
        name: format!("cyclic-{n}"),
        g_degree: n,
        g_gens: vec![r.clone()],
        gen_names: vec!["r".into()],
        q_degree: n,
        phi: vec![r.clone()],
        sigma: r.pow(sigma_power),
    }
}

/// Smallest prime `p` with `n | p − 1`.
pub fn family_prime(n: usize) -> usize {
    (2..)
        .find(|&p: &usize| (p - 1) % n == 0 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .unwrap()
}

/// Small transitive groups with a natural quotient map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Cyclic(usize),
    Dihedral(usize),
}

impl Piece {
    fn degree(self) -> usize {
        match self {
            Piece::Cyclic(n) | Piece::Dihedral(n) => n,
        }
    }

    fn gens(self) -> Vec<Perm> {
        match self {
            Piece::Cyclic(n) => vec![rotation(n)],
            Piece::Dihedral(n) => {
                let refl = Perm::from_images(&(1..=n).map(|i| n + 1 - i).collect::<Vec<_>>()).unwrap();
                vec![rotation(n), refl]
            }
        }
    }

    fn order(self) -> usize {
        match self {
            Piece::Cyclic(n) => n,
            Piece::Dihedral(n) => 2 * n,
        }
    }
}

fn sign_image(p: &Perm) -> Perm {
    let odd = p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 1;
    if odd {
        cyc(2, &[vec![1, 2]])
    } else {
        Perm::identity(2)
    }
}

/// `H ≀ C_k` on `d·k` points, onto `C_k` by the block action.
fn wreath(h: Piece, k: usize) -> (Vec<Perm>, Vec<Perm>, usize) {
    let d = h.degree();
    let n = d * k;
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for g in h.gens() {
        let imgs: Vec<usize> = (0..n).map(|x| if x < d { g.apply(x + 1) } else { x + 1 }).collect();
        gens.push(Perm::from_images(&imgs).unwrap());
        images.push(Perm::identity(k));
    }
    let shift: Vec<usize> = (0..n).map(|x| (x + d) % n + 1).collect();
    gens.push(Perm::from_images(&shift).unwrap());
    images.push(rotation(k));
    (gens, images, n)
}

/// `A × B` on `deg A · deg B` points, onto `B`.
fn product(a: Piece, b: Piece) -> (Vec<Perm>, Vec<Perm>, usize) {
    let (da, db) = (a.degree(), b.degree());
    let n = da * db;
    let lift = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
        let imgs: Vec<usize> = (0..n)
            .map(|x| {
                let (i, j) = f(x / db, x % db);
                i * db + j + 1
            })
            .collect();
        Perm::from_images(&imgs).unwrap()
    };
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for g in a.gens() {
        gens.push(lift(&|i, j| (g.apply(i + 1) - 1, j)));
        images.push(Perm::identity(db));
    }
    for g in b.gens() {
        gens.push(lift(&|i, j| (i, g.apply(j + 1) - 1)));
        images.push(g.clone());
    }
    (gens, images, n)
}

/// A random transitive instance of order at most `max_order`.
pub fn random_instance(rng: &mut ChaCha8Rng, max_order: usize) -> ConjInstance {
    loop {
        let piece = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(2..=6);
            if rng.gen_bool(0.5) {
                Piece::Cyclic(n)
            } else {
                Piece::Dihedral(n.max(3))
            }
        };
        let (a, b) = (piece(rng), piece(rng));
        let kind = rng.gen_range(0..4);
        let est = match kind {
            0 => a.order().pow(2) * 2,
            1 => a.order().pow(3) * 3,
            _ => a.order() * b.order(),
        };
        if est > max_order {
            continue;
        }
        let (gens, phi, degree, q_degree, name) = match kind {
            0 => {
                let (g, p, n) = wreath(a, 2);
                (g, p, n, 2, format!("{a:?} wr C2"))
            }
            1 => {
                let (g, p, n) = wreath(a, 3);
                (g, p, n, 3, format!("{a:?} wr C3"))
            }
            2 => {
                let (g, p, n) = product(a, b);
                (g, p, n, b.degree(), format!("{a:?} x {b:?}"))
            }
            _ => {
                let (g, _, n) = product(a, b);
                let p = g.iter().map(sign_image).collect();
                (g, p, n, 2, format!("{a:?} x {b:?} by sign"))
            }
        };
        let names = (0..gens.len()).map(|i| format!("g{}", i + 1)).collect();
        let mut inst = ConjInstance {
            name,
            g_degree: degree,
            g_gens: gens,
            gen_names: names,
            q_degree,
            phi,
            sigma: Perm::identity(degree),
        };
        // σ: a random short word in the generators
        let len = rng.gen_range(0..6);
        for _ in 0..len {
            let g = inst.g_gens.choose(rng).unwrap().clone();
            inst.sigma = inst.sigma.then(&g);
        }
        return inst;
    }
}

pub fn random_instances(count: usize, max_order: usize, seed: u64) -> Vec<ConjInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng, max_order)).collect()
}

/// Parses an instance file:
///
/// ```text
/// name frobenius20
/// degree 5
/// qdegree 4
/// gen x (1 2 3 4 5)
/// gen t (2 3 5 4)
/// phi x ()
/// phi t (1 2 3 4)
/// sigma (1 2 3 4 5)
/// ```
///
/// `sigma` may also be a word in generator names, e.g. `sigma x x t`.
pub fn parse_instance(text: &str) -> Result<ConjInstance, ConjError> {
    let syntax = |line: usize, msg: &str| ConjError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let mut name = String::from("instance");
    let (mut degree, mut qdegree) = (None, None);
    let mut gens: Vec<(String, Perm)> = Vec::new();
    let mut phi: HashMap<String, Perm> = HashMap::new();
    let mut sigma_text: Option<(usize, String)> = None;
    let read_degree = |line: usize, v: &str| -> Result<usize, ConjError> {
        let d: usize = v.trim().parse().map_err(|_| syntax(line, "bad degree"))?;
        if d == 0 || d > MAX_DEGREE {
            return Err(syntax(line, "degree out of range"));
        }
        Ok(d)
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match key {
            "name" => name = rest.to_string(),
            "degree" => degree = Some(read_degree(line, rest)?),
            "qdegree" => qdegree = Some(read_degree(line, rest)?),
            "gen" | "phi" => {
                let (g, cycles) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(line, "missing permutation"))?;
                let d = if key == "gen" { degree } else { qdegree };
                let d = d.ok_or_else(|| syntax(line, "degree must come first"))?;
                let p = Perm::parse(d, cycles).map_err(|e| syntax(line, &e.to_string()))?;
                if key == "gen" {
                    if gens.iter().any(|(n, _)| n == g) {
                        return Err(syntax(line, "repeated generator"));
                    }
                    gens.push((g.to_string(), p));
                } else if phi.insert(g.to_string(), p).is_some() {
                    return Err(syntax(line, "repeated image"));
                }
            }
            "sigma" => sigma_text = Some((line, rest.to_string())),
            _ => return Err(syntax(line, "unknown key")),
        }
    }
    let degree = degree.ok_or_else(|| syntax(0, "missing degree"))?;
    let qdegree = qdegree.ok_or_else(|| syntax(0, "missing qdegree"))?;
    let (sl, st) = sigma_text.ok_or_else(|| syntax(0, "missing sigma"))?;
    let sigma = if st.starts_with('(') || st == "id" {
        Perm::parse(degree, &st).map_err(|e| syntax(sl, &e.to_string()))?
    } else {
        let mut s = Perm::identity(degree);
        for tok in st.split_whitespace() {
            let (n, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let g = gens
                .iter()
                .find(|(m, _)| m == n)
                .ok_or_else(|| syntax(sl, "unknown generator in sigma"))?;
            s = s.then(&if inv { g.1.inverse() } else { g.1.clone() });
        }
        s
    };
    let mut images = Vec::new();
    for (n, _) in &gens {
        images.push(phi.remove(n).ok_or_else(|| syntax(0, &format!("no image for {n}")))?);
    }
    if let Some(extra) = phi.keys().next() {
        return Err(syntax(0, &format!("image for unknown generator {extra}")));
    }
    Ok(ConjInstance {
        name,
        g_degree: degree,
        gen_names: gens.iter().map(|(n, _)| n.clone()).collect(),
        g_gens: gens.into_iter().map(|(_, p)| p).collect(),
        q_degree: qdegree,
        phi: images,
        sigma,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub n: usize,
    pub p: usize,
    pub index_bound: usize,
    pub classes_meeting: usize,
    pub phi_cent_trivial: bool,
}

/// The affine family over `ℤ_n` for `n` in the range.
pub fn cyclic_family(ns: std::ops::RangeInclusive<usize>) -> Result<Vec<FamilyRow>, ConjError> {
    ns.map(|n| {
        let p = family_prime(n);
        let c = conjugacy_count(&affine_instance(p, n).expect("n divides p - 1"))?;
        Ok(FamilyRow {
            n,
            p,
            index_bound: c.index_bound,
            classes_meeting: c.classes_meeting,
            phi_cent_trivial: c.phi_cent_g == 1,
        })
    })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjReport {
    pub frobenius: ConjCount,
    pub frobenius_cosets: CosetCheck,
    pub random_instances: usize,
    pub random_failures: Vec<String>,
    pub family: Vec<FamilyRow>,
}

impl ConjReport {
    pub fn passes(&self) -> bool {
        self.frobenius.pass
            && self.frobenius_cosets.holds()
            && self.random_failures.is_empty()
            && self.family.iter().all(|r| r.index_bound == r.n && r.phi_cent_trivial && r.classes_meeting >= r.index_bound)
    }
}

pub fn run_conj(random: usize, seed: u64) -> Result<ConjReport, ConjError> {
    let f = frobenius20();
    let fe = f.enumerate()?;
    let mut failures = Vec::new();
    for (i, inst) in random_instances(random, 200, seed).iter().enumerate() {
        let e = inst.enumerate()?;
        let c = count_enumerated(&e);
        let k = coset_check_enumerated(&e);
        if !c.pass || !k.holds() {
            failures.push(format!("#{i} {}: {c:?} {k:?}", inst.name));
        }
    }
    Ok(ConjReport {
        frobenius: count_enumerated(&fe),
        frobenius_cosets: coset_check_enumerated(&fe),
        random_instances: random,
        random_failures: failures,
        family: cyclic_family(2..=12)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frobenius_counts() {
        let f = frobenius20();
        let t = &f.g_gens[1];
        let x = &f.g_gens[0];
        assert_eq!(t.then(x).then(&t.inverse()), x.pow(2));
        let c = conjugacy_count(&f).unwrap();
        assert_eq!((c.order_g, c.order_q, c.order_p), (20, 4, 5));
        assert_eq!((c.index_bound, c.classes_meeting), (4, 4));
        assert_eq!((c.cent_g, c.phi_cent_g, c.class_size), (5, 1, 4));
        let k = coset_parametrization_check(&f).unwrap();
        assert_eq!((k.pairs, k.failures), (16, 0));
    }

    #[test]
    fn identity_and_sign_examples() {
        let f = frobenius20();
        let c = conjugacy_count(&f.with_sigma(Perm::identity(5))).unwrap();
        assert_eq!((c.classes_meeting, c.index_bound), (1, 1));
        let c = conjugacy_count(&s3_sign()).unwrap();
        assert_eq!((c.index_bound, c.classes_meeting), (1, 1));
        for k in 0..5 {
            let inst = cyclic_identity(5, k);
            assert!(coset_parametrization_check(&inst).unwrap().holds());
            assert!(conjugacy_count(&inst).unwrap().pass);
        }
    }

    #[test]
    fn family_primes_and_indices() {
        let ps: Vec<usize> = (2..=12).map(family_prime).collect();
        assert_eq!(ps, vec![3, 7, 5, 11, 7, 29, 17, 19, 11, 23, 13]);
        for r in cyclic_family(2..=12).unwrap() {
            assert_eq!(r.index_bound, r.n);
            assert_eq!(r.classes_meeting, r.n);
            assert!(r.phi_cent_trivial);
        }
    }

    #[test]
    fn bad_images_are_rejected() {
        let mut f = frobenius20();
        // x has order 5, so it cannot go to a 4-cycle
        f.phi[0] = rotation(4);
        assert!(matches!(f.enumerate(), Err(ConjError::NotHomomorphism(_))));
        let mut f = frobenius20();
        f.sigma = cyc(5, &[vec![1, 2]]);
        assert_eq!(f.enumerate().unwrap_err(), ConjError::SigmaOutside);
    }

    #[test]
    fn instance_file_round_trip() {
        for inst in [frobenius20(), s3_sign(), cyclic_identity(6, 2)] {
            let back = parse_instance(&inst.to_text()).unwrap();
            assert_eq!(back, inst);
        }
        let text = "degree 3\nqdegree 2\ngen s (1 2)\ngen r (1 2 3)\nphi s (1 2)\nphi r ()\nsigma s r\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.sigma, cyc(3, &[vec![1, 2]]).then(&cyc(3, &[vec![1, 2, 3]])));
        assert!(matches!(parse_instance("degree 99\n"), Err(ConjError::Syntax { line: 1, .. })));
        assert!(matches!(parse_instance("gen x (1 2)\n"), Err(ConjError::Syntax { line: 1, .. })));
        assert!(parse_instance("degree 3\nqdegree 2\ngen s (1 2)\nsigma s\n").is_err());
    }

    #[test]
    fn hundred_random_instances() {
        let r = run_conj(100, 0).unwrap();
        assert!(r.passes(), "{:?}", r.random_failures);
        for inst in random_instances(100, 200, 0) {
            let e = inst.enumerate().unwrap();
            assert!(e.g.len() <= 200);
            let gens = PermGroup::new(inst.g_degree, inst.g_gens.clone()).unwrap();
            assert!(gens.is_transitive(), "{}", inst.name);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn count_is_conjugation_invariant(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, 200);
            let e = inst.enumerate().unwrap();
            let base = count_enumerated(&e);
            prop_assert!(base.pass);
            let g = &e.g[pick.index(e.g.len())];
            let other = g.then(&inst.sigma).then(&g.inverse());
            let c = conjugacy_count(&inst.with_sigma(other)).unwrap();
            prop_assert_eq!(c.classes_meeting, base.classes_meeting);
            prop_assert_eq!(c.index_bound, base.index_bound);
        }

        #[test]
        fn parser_never_panics(text in "\\PC{0,200}") {
            let _ = parse_instance(&text);
        }
    }
}
