//! Permutations of `{1..n}` at small degree, cycle notation, and the
//! breadth-first orbit/closure routines used by the cover and conjugacy code.
//!
//! Products follow the word-action convention: `p.then(q)` applies `p` first,
//! then `q`. Holonomy of an edge path is therefore the left-to-right product
//! of its edge voltages.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("images do not form a bijection")]
    NotBijective,
    #[error("cycle notation parse error: {0}")]
    Parse(String),
    #[error("group closure exceeded cap of {0} elements")]
    ClosureCap(usize),
}

/// A permutation of `{1..degree}`, stored zero-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds from one-based images: `images[i-1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n {
                return Err(PermError::PointOutOfRange {
                    point: img,
                    degree: n,
                });
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(PermError::NotBijective);
            }
            out.push((img - 1) as u32);
        }
        Ok(Perm { images: out })
    }

    /// Builds from one-based cycles. Cycles need not be disjoint; they are
    /// applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut p = Perm::identity(degree);
        for cycle in cycles {
            let mut c = Perm::identity(degree);
            let mut seen = BTreeSet::new();
            for &x in cycle {
                if x == 0 || x > degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if !seen.insert(x) {
                    return Err(PermError::Parse(format!("point {x} repeated in a cycle")));
                }
            }
            for w in 0..cycle.len() {
                let from = cycle[w] - 1;
                let to = cycle[(w + 1) % cycle.len()] - 1;
                c.images[from] = to as u32;
            }
            p = p.then(&c);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the one-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    /// Zero-based image lookup, for hot loops.
    #[inline]
    pub fn apply0(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `p.then(q)`: apply `p`, then `q`. Panics on degree mismatch; use
    /// [`compose`] for the checked form.
    pub fn then(&self, q: &Perm) -> Perm {
        assert_eq!(self.degree(), q.degree(), "degree mismatch");
        Perm {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    /// `g p g⁻¹` as a word (g applied first).
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.then(self).then(&g.inverse())
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, sorted by that point. One-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.images[x] as usize;
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths }
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type()
            .lengths
            .iter()
            .fold(1, |acc, &l| acc / gcd(acc, l) * l)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    /// Cycle notation with fixed points omitted; identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }

    /// Parses juxtaposed cycles such as `(1)(2 5 3 4)`. Fixed points may be
    /// written or omitted; `()` and `id` denote the identity.
    pub fn parse(degree: usize, text: &str) -> Result<Self, PermError> {
        let t = text.trim();
        if t == "id" {
            return Ok(Perm::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(PermError::Parse(format!("expected '(' at {rest:?}")));
            };
            let Some(close) = stripped.find(')') else {
                return Err(PermError::Parse("unclosed cycle".into()));
            };
            let body = &stripped[..close];
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let x: usize = tok
                    .parse()
                    .map_err(|_| PermError::Parse(format!("bad point {tok:?}")))?;
                cyc.push(x);
            }
            cycles.push(cyc);
            rest = stripped[close + 1..].trim_start();
        }
        Perm::from_cycles(degree, &cycles)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// Checked product: `(p·q)(x) = q(p(x))`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q))
}

/// `p q p⁻¹ q⁻¹` under the word convention.
pub fn commutator(p: &Perm, q: &Perm) -> Result<Perm, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q).then(&p.inverse()).then(&q.inverse()))
}

/// Multiset of cycle lengths (fixed points included), descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    pub lengths: Vec<usize>,
}

impl CycleType {
    /// True when there is exactly one nontrivial cycle and it has length `k`.
    pub fn is_single_cycle(&self, k: usize) -> bool {
        let nontrivial: Vec<_> = self.lengths.iter().filter(|&&l| l > 1).collect();
        nontrivial.len() == 1 && *nontrivial[0] == k
    }
}

/// A permutation group given by generators.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: usize,
}

pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            cap: DEFAULT_CLOSURE_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Smallest generator-closed set containing `point` (one-based).
    pub fn orbit(&self, point: usize) -> Result<BTreeSet<usize>, PermError> {
        if point == 0 || point > self.degree {
            return Err(PermError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut seen = vec![false; self.degree];
        seen[point - 1] = true;
        let mut queue = VecDeque::from([point - 1]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply0(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i + 1)
            .collect())
    }

    /// Partition of `{1..degree}` into orbits, ordered by least element.
    pub fn orbits(&self) -> Vec<BTreeSet<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 1..=self.degree {
            if assigned[x - 1] {
                continue;
            }
            let orb = self.orbit(x).expect("point in range");
            for &y in &orb {
                assigned[y - 1] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(1).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Breadth-first enumeration of all elements, identity first, in a
    /// deterministic order. Fails once the cap is exceeded.
    pub fn elements(&self) -> Result<Vec<Perm>, PermError> {
        let id = Perm::identity(self.degree);
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(id.clone(), 0);
        let mut elems = vec![id];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for g in &self.generators {
                let y = x.then(g);
                if !index.contains_key(&y) {
                    if elems.len() >= self.cap {
                        return Err(PermError::ClosureCap(self.cap));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        Ok(elems)
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.elements()?.len())
    }
}

/// True iff `p` fixes `point`; the membership test for a point stabilizer.
pub fn stabilizer_contains(point: usize, p: &Perm) -> bool {
    point >= 1 && point <= p.degree() && p.fixes(point)
}

/// Encodes a tuple of one-based points in `{1..base}^k` as a single
/// one-based point of `{1..base^k}` (first coordinate most significant).
pub fn encode_tuple(base: usize, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + (c - 1)) + 1
}

pub fn decode_tuple(base: usize, k: usize, point: usize) -> Vec<usize> {
    let mut x = point - 1;
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = x % base + 1;
        x /= base;
    }
    out
}

/// Componentwise action of several permutations on the product set.
pub fn product_action(factors: &[&Perm]) -> Perm {
    let base = factors[0].degree();
    let k = factors.len();
    let total = base.pow(k as u32);
    let images: Vec<usize> = (1..=total)
        .map(|pt| {
            let coords = decode_tuple(base, k, pt);
            let mapped: Vec<usize> = coords
                .iter()
                .zip(factors)
                .map(|(&c, f)| f.apply(c))
                .collect();
            encode_tuple(base, &mapped)
        })
        .collect();
    Perm::from_images(&images).expect("product of bijections is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Perm {
        Perm::parse(5, "(1)(2 5 3 4)").unwrap()
    }
    fn beta() -> Perm {
        Perm::parse(5, "(1 2 3 4)(5)").unwrap()
    }

    // pointwise oracle: apply the raw image table twice
    fn apply_twice_pointwise(images: &[usize], x: usize) -> usize {
        images[images[x - 1] - 1]
    }

    #[test]
    fn alpha_squared_matches_pointwise() {
        let a = alpha();
        let table: Vec<usize> = (1..=5).map(|x| a.apply(x)).collect();
        let sq = compose(&a, &a).unwrap();
        for x in 1..=5 {
            assert_eq!(sq.apply(x), apply_twice_pointwise(&table, x));
        }
        assert_eq!(sq, Perm::parse(5, "(2 3)(4 5)").unwrap());
        assert!(sq.fixes(1));
    }

    #[test]
    fn alpha_has_order_four() {
        let a = alpha();
        let a4 = a.then(&a).then(&a).then(&a);
        assert!(a4.is_identity());
        assert!(!a.then(&a).is_identity());
        let p = beta();
        assert_eq!(compose(&p, &Perm::identity(5)).unwrap(), p);
    }

    #[test]
    fn composition_applies_left_factor_first() {
        let p = Perm::parse(3, "(1 2)").unwrap();
        let q = Perm::parse(3, "(2 3)").unwrap();
        // 1 -p-> 2 -q-> 3
        assert_eq!(p.then(&q).apply(1), 3);
    }

    #[test]
    fn commutators_of_alpha_beta_powers_are_five_cycles() {
        let (a, b) = (alpha(), beta());
        for i in 1..=3 {
            for j in 1..=3 {
                let c = commutator(&a.pow(i), &b.pow(j)).unwrap();
                assert!(c.cycle_type().is_single_cycle(5), "[a^{i}, b^{j}] = {c}");
            }
        }
        assert!(commutator(&a, &Perm::identity(5)).unwrap().is_identity());
        assert!(commutator(&a, &a.pow(2)).unwrap().is_identity());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let p = Perm::identity(3);
        let q = Perm::identity(4);
        assert_eq!(compose(&p, &q), Err(PermError::DegreeMismatch(3, 4)));
        assert!(commutator(&p, &q).is_err());
    }

    #[test]
    fn orbit_examples() {
        let g = PermGroup::new(5, vec![alpha(), beta()]).unwrap();
        assert_eq!(g.orbit(1).unwrap(), (1..=5).collect());
        let triv = PermGroup::new(5, vec![Perm::identity(5)]).unwrap();
        assert_eq!(triv.orbit(3).unwrap(), BTreeSet::from([3]));
        assert!(g.orbit(0).is_err());
        assert!(g.orbit(6).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        assert!(stabilizer_contains(1, &alpha()));
        assert!(stabilizer_contains(5, &beta()));
        assert!(!stabilizer_contains(1, &beta()));
    }

    #[test]
    fn parse_accepts_fixed_points_and_identity() {
        assert_eq!(Perm::parse(4, "()").unwrap(), Perm::identity(4));
        assert_eq!(Perm::parse(4, "id").unwrap(), Perm::identity(4));
        assert_eq!(
            Perm::parse(5, "(1)(2 5 3 4)").unwrap(),
            Perm::parse(5, "(2 5 3 4)").unwrap()
        );
        assert!(Perm::parse(3, "(1 4)").is_err());
        assert!(Perm::parse(3, "(1 2").is_err());
        assert!(Perm::parse(3, "(1 1)").is_err());
        assert!(Perm::parse(3, "1 2").is_err());
    }

    #[test]
    fn alpha_beta_generate_transitive_order_20() {
        let g = PermGroup::new(5, vec![alpha(), beta()]).unwrap();
        assert_eq!(g.order().unwrap(), 20);
        assert!(g.is_transitive());
        let capped = g.clone().with_cap(10);
        assert_eq!(capped.elements(), Err(PermError::ClosureCap(10)));
    }

    #[test]
    fn tuple_encoding_round_trips() {
        for pt in 1..=125 {
            assert_eq!(encode_tuple(5, &decode_tuple(5, 3, pt)), pt);
        }
        assert_eq!(encode_tuple(5, &[1, 1, 1]), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(&v).unwrap())
        }

        proptest! {
            #[test]
            fn associativity_and_inverse(p in perm_strategy(7), q in perm_strategy(7), r in perm_strategy(7)) {
                prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
                prop_assert!(p.then(&p.inverse()).is_identity());
            }

            #[test]
            fn cycle_type_is_conjugation_invariant(p in perm_strategy(9), g in perm_strategy(9)) {
                prop_assert_eq!(p.conjugate_by(&g).cycle_type(), p.cycle_type());
            }

            #[test]
            fn print_parse_round_trip(p in perm_strategy(12)) {
                prop_assert_eq!(Perm::parse(12, &p.to_cycle_string()).unwrap(), p);
            }

            #[test]
            fn orbits_partition_points(p in perm_strategy(8), q in perm_strategy(8)) {
                let g = PermGroup::new(8, vec![p, q]).unwrap();
                let orbits = g.orbits();
                let total: usize = orbits.iter().map(|o| o.len()).sum();
                prop_assert_eq!(total, 8);
                for x in 1..=8 {
                    let o = g.orbit(x).unwrap();
                    prop_assert!(orbits.contains(&o));
                }
            }

            #[test]
            fn closure_order_divides_factorial(p in perm_strategy(5), q in perm_strategy(5)) {
                let g = PermGroup::new(5, vec![p, q]).unwrap();
                let els = g.elements().unwrap();
                prop_assert_eq!(120 % els.len(), 0);
                prop_assert!(els[0].is_identity());
                for a in &els {
                    prop_assert!(els.contains(&a.inverse()));
                }
            }
        }
    }
}
