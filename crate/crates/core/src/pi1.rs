//! Spanning trees, fundamental-group generators, presentations from 2-cells
//! and a small Tietze reducer.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::complex::{Complex, ComplexError, EdgePath, SignedEdge, UnionFind};

/// Letters are nonzero integers; `-k` is the inverse of generator `k`
/// (generators are numbered from 1).
pub type Word = Vec<i32>;

#[derive(Debug, Clone)]
pub struct SpanningTreeGens {
    pub base: usize,
    pub tree_edges: BTreeSet<usize>,
    /// Non-tree edges in id order; generator `k` (1-based) is `non_tree[k-1]`.
    pub non_tree: Vec<usize>,
    /// Tree edge used to reach each vertex from the base.
    pub parent: Vec<Option<SignedEdge>>,
    pub loops: Vec<EdgePath>,
    generator_of: BTreeMap<usize, i32>,
}

impl SpanningTreeGens {
    pub fn rank(&self) -> usize {
        self.non_tree.len()
    }

    /// Tree path from the base to `v`.
    pub fn tree_path(&self, c: &Complex, v: usize) -> EdgePath {
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some(s) = self.parent[cur] {
            steps.push(s);
            cur = c.tail(s);
        }
        steps.reverse();
        EdgePath {
            start: self.base,
            steps,
        }
    }

    pub fn generator_of_edge(&self, e: usize) -> Option<i32> {
        self.generator_of.get(&e).copied()
    }

    /// Word in the generators read off a path (tree edges are dropped).
    pub fn rewrite(&self, steps: &[SignedEdge]) -> Word {
        steps
            .iter()
            .filter_map(|s| {
                self.generator_of
                    .get(&s.edge)
                    .map(|&g| if s.forward { g } else { -g })
            })
            .collect()
    }

    /// Presentation whose relators are the rewritten 2-cell boundaries.
    pub fn presentation(&self, c: &Complex) -> Presentation {
        let relators = c
            .faces()
            .iter()
            .map(|f| self.rewrite(&f.boundary))
            .collect();
        Presentation {
            num_generators: self.rank(),
            relators,
        }
    }
}

/// Spanning tree by breadth-first search from `base`, scanning incident edges
/// in id order.
pub fn pi1_generators(c: &Complex, base: usize) -> Result<SpanningTreeGens, ComplexError> {
    pi1_generators_with(c, base, &[])
}

/// As [`pi1_generators`], but the tree is forced to contain `forced`
/// (which must be a forest).
pub fn pi1_generators_with(
    c: &Complex,
    base: usize,
    forced: &[usize],
) -> Result<SpanningTreeGens, ComplexError> {
    let nv = c.num_vertices();
    if base >= nv {
        return Err(ComplexError::NoSuchVertex(base));
    }
    let mut uf = UnionFind::new(nv);
    let mut forced_adj: Vec<Vec<SignedEdge>> = vec![Vec::new(); nv];
    for &e in forced {
        if e >= c.num_edges() {
            return Err(ComplexError::NoSuchEdge(e));
        }
        let ed = c.edge(e);
        if !uf.union(ed.src, ed.dst) {
            return Err(ComplexError::Unsupported(format!(
                "forced tree edges contain a cycle at edge {e}"
            )));
        }
        forced_adj[ed.src].push(SignedEdge::fwd(e));
        forced_adj[ed.dst].push(SignedEdge::bwd(e));
    }
    let adj = c.vertex_edges();
    let mut parent: Vec<Option<SignedEdge>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut tree_edges = BTreeSet::new();
    let mut queue = VecDeque::new();

    // marks v and its whole forced component, recording parents along forced edges
    let absorb = |v: usize,
                  seen: &mut Vec<bool>,
                  parent: &mut Vec<Option<SignedEdge>>,
                  tree_edges: &mut BTreeSet<usize>,
                  queue: &mut VecDeque<usize>| {
        let mut stack = vec![v];
        seen[v] = true;
        queue.push_back(v);
        while let Some(x) = stack.pop() {
            for &s in &forced_adj[x] {
                let y = c.head(s);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(s);
                    tree_edges.insert(s.edge);
                    stack.push(y);
                    queue.push_back(y);
                }
            }
        }
    };
    absorb(base, &mut seen, &mut parent, &mut tree_edges, &mut queue);
    while let Some(x) = queue.pop_front() {
        for &s in &adj[x] {
            let y = c.head(s);
            if !seen[y] {
                parent[y] = Some(s);
                tree_edges.insert(s.edge);
                absorb(y, &mut seen, &mut parent, &mut tree_edges, &mut queue);
            }
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err(ComplexError::Disconnected);
    }
    let mut gens = SpanningTreeGens {
        base,
        tree_edges,
        non_tree: Vec::new(),
        parent,
        loops: Vec::new(),
        generator_of: BTreeMap::new(),
    };
    for e in 0..c.num_edges() {
        if gens.tree_edges.contains(&e) {
            continue;
        }
        let ed = c.edge(e);
        let to_src = gens.tree_path(c, ed.src);
        let from_dst = gens.tree_path(c, ed.dst).inverse(c);
        let lp = to_src
            .concat(&EdgePath {
                start: ed.src,
                steps: vec![SignedEdge::fwd(e)],
            })
            .concat(&from_dst);
        gens.non_tree.push(e);
        gens.loops.push(lp);
        gens.generator_of.insert(e, gens.non_tree.len() as i32);
    }
    Ok(gens)
}

/// A finite presentation with generators `1..=num_generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.pop();
        v.remove(0);
    }
    v
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

impl Presentation {
    /// Repeatedly eliminates a generator occurring exactly once in some
    /// relator. Returns the reduced presentation with generators renumbered.
    pub fn tietze_reduce(&self) -> Presentation {
        let mut rels: Vec<Word> = self
            .relators
            .iter()
            .map(|r| cyclic_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        let mut alive: BTreeSet<i32> = (1..=self.num_generators as i32).collect();
        loop {
            let mut pick = None;
            'outer: for (ri, r) in rels.iter().enumerate() {
                for &g in &alive {
                    let hits: Vec<usize> =
                        (0..r.len()).filter(|&k| r[k].abs() == g).collect();
                    if hits.len() == 1 {
                        pick = Some((ri, g, hits[0]));
                        break 'outer;
                    }
                }
            }
            let Some((ri, g, pos)) = pick else { break };
            let r = rels.remove(ri);
            // rotate so the letter comes first: r = x^e W, so x = W^{-e}
            let mut rot = r[pos..].to_vec();
            rot.extend_from_slice(&r[..pos]);
            let e = rot[0].signum();
            let rest = rot[1..].to_vec();
            let image = if e > 0 { invert(&rest) } else { rest };
            let image_inv = invert(&image);
            for w in rels.iter_mut() {
                let mut nw = Vec::with_capacity(w.len());
                for &x in w.iter() {
                    if x == g {
                        nw.extend_from_slice(&image);
                    } else if x == -g {
                        nw.extend_from_slice(&image_inv);
                    } else {
                        nw.push(x);
                    }
                }
                *w = cyclic_reduce(&nw);
            }
            rels.retain(|w| !w.is_empty());
            alive.remove(&g);
        }
        let renum: BTreeMap<i32, i32> = alive
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, i as i32 + 1))
            .collect();
        Presentation {
            num_generators: alive.len(),
            relators: rels
                .iter()
                .map(|w| w.iter().map(|&x| renum[&x.abs()] * x.signum()).collect())
                .collect(),
        }
    }

    /// True when every relator is trivial, so the group is free on the
    /// generators.
    pub fn is_visibly_free(&self) -> bool {
        self.relators.iter().all(|r| free_reduce(r).is_empty())
    }
}

const PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

/// Rank of an integer matrix over a large prime field.
pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(PRIME as i64) as u64).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][col], PRIME - 2);
        for x in m[rank].iter_mut() {
            *x = *x * inv % PRIME;
        }
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = (*x + PRIME - f * pv % PRIME) % PRIME;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// First Betti number from the cellular chain complex through dimension 2.
pub fn first_betti(c: &Complex) -> usize {
    let (_, comps) = c.components();
    let rows: Vec<Vec<i64>> = c
        .faces()
        .iter()
        .map(|f| {
            let mut row = vec![0i64; c.num_edges()];
            for s in &f.boundary {
                row[s.edge] += if s.forward { 1 } else { -1 };
            }
            row
        })
        .collect();
    let r = if rows.is_empty() { 0 } else { rank_mod_p(&rows) };
    c.num_edges() + comps - c.num_vertices() - r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::theta_graph;
    use proptest::prelude::*;

    fn wedge(k: usize) -> Complex {
        let mut g = Complex::new();
        let v = g.add_vertex("*");
        for i in 0..k {
            g.add_edge(v, v, format!("x{i}")).unwrap();
        }
        g
    }

    #[test]
    fn wedge_of_two_circles_has_two_generators() {
        let g = pi1_generators(&wedge(2), 0).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(g.loops.iter().all(|l| l.is_closed(&wedge(2))));
    }

    #[test]
    fn theta_rank_three_and_loops_close() {
        let t = theta_graph();
        let g = pi1_generators(&t, 0).unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.tree_edges, BTreeSet::from([0]));
        for l in &g.loops {
            l.validate(&t).unwrap();
            assert!(l.is_closed(&t) && l.start == 0);
        }
    }

    #[test]
    fn forced_edge_enters_tree() {
        let t = theta_graph();
        let g = pi1_generators_with(&t, 0, &[3]).unwrap();
        assert_eq!(g.tree_edges, BTreeSet::from([3]));
        assert!(pi1_generators_with(&t, 0, &[0, 1]).is_err());
    }

    #[test]
    fn disconnected_is_rejected() {
        let mut c = Complex::new();
        c.add_vertex("p");
        c.add_vertex("q");
        assert!(matches!(pi1_generators(&c, 0), Err(ComplexError::Disconnected)));
    }

    #[test]
    fn torus_presentation_is_commutator() {
        let t = crate::product::graph_power(&wedge(1), 2).unwrap().complex;
        let g = pi1_generators(&t, 0).unwrap();
        let p = g.presentation(&t);
        assert_eq!(p.num_generators, 2);
        let r = &p.relators[0];
        assert_eq!(r.len(), 4);
        assert_eq!(free_reduce(r), *r);
        // the one relator uses every generator twice, so nothing reduces
        assert_eq!(p.tietze_reduce().num_generators, 2);
        assert_eq!(first_betti(&t), 2);
    }

    #[test]
    fn tietze_kills_a_disk() {
        let sq = crate::complex::tests::unit_square();
        let g = pi1_generators(&sq, 0).unwrap();
        let p = g.presentation(&sq).tietze_reduce();
        assert_eq!(p.num_generators, 0);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_mod_p(&[vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]]), 2);
    }

    proptest! {
        #[test]
        fn reductions_are_idempotent(w in proptest::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..20)) {
            let r = free_reduce(&w);
            prop_assert_eq!(free_reduce(&r), r.clone());
            let c = cyclic_reduce(&w);
            prop_assert_eq!(cyclic_reduce(&c), c.clone());
            prop_assert!(free_reduce(&[w.clone(), invert(&w)].concat()).is_empty());
        }
    }
}
