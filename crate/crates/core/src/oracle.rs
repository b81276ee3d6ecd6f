//! Explicit Cayley graphs, blow-ups and brute-force clique counts.
//!
//! Adjacency is stored as one bitset row per vertex. Clique counting walks
//! forward neighbourhoods (`N(u) ∩ {v > u}`) so each clique is seen exactly
//! once, and the outermost loop is split across threads.

use std::collections::VecDeque;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::ff::FieldTable;
use crate::rings::{ideal_cosets, kth_power_set, ConnectionSet, LocalRing};

/// Largest clique size [`count_cliques`] accepts.
pub const MAX_CLIQUE_SIZE: usize = 6;

/// Vertex limits for the oracle's workloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Graphs on which cliques may be counted.
    pub clique_vertices: usize,
    /// Graphs that may be built at all (BFS and structure checks only).
    pub graph_vertices: usize,
    /// Exact clique-number search.
    pub clique_number_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { clique_vertices: 5_000, graph_vertices: 20_000, clique_number_vertices: 200 }
    }
}

fn size_cap(what: &'static str, size: usize, cap: usize) -> Error {
    Error::SizeCap { what, size: size as u128, cap: cap as u128 }
}

/// A simple graph (or digraph) on `0..n` with bitset adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    directed: bool,
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Self {
        let words = n.div_ceil(64);
        Graph { n, words, rows: vec![0; n * words], directed }
    }

    /// Builds a graph from a predicate; `adjacent(u, u)` is never asked.
    pub fn from_fn(n: usize, directed: bool, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n, directed);
        for u in 0..n {
            for v in 0..n {
                if u != v && adjacent(u, v) {
                    g.set(u, v);
                }
            }
        }
        g
    }

    /// Undirected graph from an edge list. Loops are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n, false);
        for &(u, v) in edges {
            if u != v {
                g.set(u, v);
                g.set(v, u);
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_fn(n, false, |_, _| true)
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_fn(n, false, |u, v| (u + 1) % n == v || (v + 1) % n == u)
    }

    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u), 0)
    }

    /// Edges for undirected graphs, arcs for directed ones.
    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    /// Whether the adjacency matrix is symmetric.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.neighbors(u).all(|v| self.has_edge(v, u)))
    }
}

fn bits(words: &[u64], start_word: usize) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().skip(start_word).flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

/// `Cay(R, S)` together with its regularity.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub graph: Graph,
    pub degree: usize,
    pub source: String,
}

/// Builds `Cay(R, S)`: `v → v + s` for every `s ∈ S`.
pub fn cayley_graph(ring: &LocalRing, set: &ConnectionSet, caps: &Caps) -> Result<CayleyGraph> {
    let n = ring.size() as usize;
    if n > caps.graph_vertices {
        return Err(size_cap("Cayley graph", n, caps.graph_vertices));
    }
    if set.contains(0) {
        return Err(Error::Invariant("connection set contains 0".into()));
    }
    let mut graph = Graph::empty(n, !set.symmetric);
    for v in 0..n as u32 {
        for &s in &set.elements {
            graph.set(v as usize, ring.add(v, s) as usize);
        }
    }
    let degree = set.len();
    if (0..n).any(|v| graph.out_degree(v) != degree) {
        return Err(Error::Invariant("Cayley graph is not regular".into()));
    }
    if graph.is_symmetric() != set.symmetric {
        return Err(Error::Invariant("adjacency symmetry disagrees with the connection set".into()));
    }
    Ok(CayleyGraph { graph, degree, source: format!("{} k={}", ring.descriptor(), set.k) })
}

/// `G_R(k)` in one step.
pub fn power_graph(ring: &LocalRing, k: u64, caps: &Caps) -> Result<CayleyGraph> {
    cayley_graph(ring, &kth_power_set(ring, k)?, caps)
}

/// `Γ(k, q)` built directly from the field, vertices in the field's encoding.
pub fn generalized_paley(field: &FieldTable, k: u64) -> Graph {
    let q = field.q() as usize;
    let mut member = vec![false; q];
    for x in 1..q as u32 {
        member[field.pow(x, k) as usize] = true;
    }
    let directed = !member[field.minus_one() as usize];
    Graph::from_fn(q, directed, |u, v| member[field.sub(v as u32, u as u32) as usize])
}

/// Exact number of `ℓ`-cliques, `2 ≤ ℓ ≤ 6`.
pub fn count_cliques(g: &Graph, ell: usize, caps: &Caps) -> Result<BigUint> {
    if g.directed {
        return Err(Error::DirectedGraph);
    }
    if !(2..=MAX_CLIQUE_SIZE).contains(&ell) {
        return Err(Error::HypothesisViolated(format!("clique size {ell} outside 2..={MAX_CLIQUE_SIZE}")));
    }
    if g.n > caps.clique_vertices {
        return Err(size_cap("graph for clique counting", g.n, caps.clique_vertices));
    }
    let words = g.words;
    let mut forward = g.rows.clone();
    for u in 0..g.n {
        let row = &mut forward[u * words..(u + 1) * words];
        let w = u / 64;
        row[..w].fill(0);
        row[w] &= !(u64::MAX >> (63 - u % 64));
    }
    let total: u128 = (0..g.n)
        .into_par_iter()
        .map_init(
            || vec![vec![0u64; words]; ell],
            |bufs, u| extend(&forward, words, &forward[u * words..(u + 1) * words], u / 64, ell - 1, bufs),
        )
        .sum();
    Ok(BigUint::from(total))
}

/// Cliques of `depth` more vertices drawn from `cand`, each later than the last.
fn extend(forward: &[u64], words: usize, cand: &[u64], start: usize, depth: usize, bufs: &mut [Vec<u64>]) -> u128 {
    if depth == 1 {
        return cand[start..].iter().map(|w| w.count_ones() as u128).sum();
    }
    let (buf, rest) = bufs.split_first_mut().expect("one buffer per level");
    let mut total = 0;
    for w in bits(cand, start) {
        let ws = w / 64;
        let row = &forward[w * words..(w + 1) * words];
        let mut any = false;
        for i in ws..words {
            buf[i] = cand[i] & row[i];
            any |= buf[i] != 0;
        }
        if any {
            total += extend(forward, words, buf, ws, depth - 1, rest);
        }
    }
    total
}

/// `ω(G)` by branch and bound with a greedy colouring bound.
pub fn clique_number(g: &Graph, caps: &Caps) -> Result<usize> {
    if g.directed {
        return Err(Error::DirectedGraph);
    }
    if g.n > caps.clique_number_vertices {
        return Err(size_cap("graph for clique number", g.n, caps.clique_number_vertices));
    }
    let mut cand = vec![0u64; g.words];
    for v in 0..g.n {
        cand[v / 64] |= 1 << (v % 64);
    }
    let mut best = 0;
    expand(g, cand, 0, &mut best);
    Ok(best)
}

fn expand(g: &Graph, mut cand: Vec<u64>, size: usize, best: &mut usize) {
    let colored = greedy_coloring(g, &cand);
    for &(v, color) in colored.iter().rev() {
        if size + color <= *best {
            return;
        }
        let next: Vec<u64> = cand.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        if next.iter().all(|&w| w == 0) {
            *best = (*best).max(size + 1);
        } else {
            expand(g, next, size + 1, best);
        }
        cand[v / 64] &= !(1 << (v % 64));
    }
}

/// Vertices of `cand` with colour classes `1, 2, ...`, in non-decreasing colour.
fn greedy_coloring(g: &Graph, cand: &[u64]) -> Vec<(usize, usize)> {
    let mut uncolored = cand.to_vec();
    let mut out = Vec::new();
    let mut color = 0;
    while uncolored.iter().any(|&w| w != 0) {
        color += 1;
        let mut avail = uncolored.clone();
        loop {
            let next = bits(&avail, 0).next();
            let Some(v) = next else { break };
            uncolored[v / 64] &= !(1 << (v % 64));
            avail[v / 64] &= !(1 << (v % 64));
            for (a, r) in avail.iter_mut().zip(g.row(v)) {
                *a &= !r;
            }
            out.push((v, color));
        }
    }
    out
}

/// `G^{(m)}`: vertex `x` becomes the block `x*m .. x*m + m` of independent vertices.
pub fn blow_up(g: &Graph, m: usize, caps: &Caps) -> Result<Graph> {
    if m == 0 {
        return Err(Error::HypothesisViolated("blow-up factor must be at least 1".into()));
    }
    let n = g.n.saturating_mul(m);
    if n > caps.graph_vertices {
        return Err(size_cap("blow-up", n, caps.graph_vertices));
    }
    Ok(Graph::from_fn(n, g.directed, |a, b| g.has_edge(a / m, b / m)))
}

/// Outcome of the three structural checks on `G_R(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupReport {
    pub q: u64,
    pub m: u64,
    pub directed: bool,
    /// Every coset of the maximal ideal is an independent set.
    pub independent_cosets: bool,
    /// The graph on cosets is `Γ(k, q)` under the residue map.
    pub quotient_matches: bool,
    /// Adjacent cosets are joined completely.
    pub complete_between_cosets: bool,
}

impl BlowupReport {
    pub fn passed(&self) -> bool {
        self.independent_cosets && self.quotient_matches && self.complete_between_cosets
    }
}

/// Checks that `G_R(k)` is the balanced blow-up of `Γ(k, q)` of order `m`.
pub fn verify_blowup_structure(ring: &LocalRing, k: u64, caps: &Caps) -> Result<BlowupReport> {
    let cay = power_graph(ring, k, caps)?;
    let g = &cay.graph;
    let quotient = generalized_paley(ring.residue_field(), k);
    let cosets = ideal_cosets(ring);
    let q = cosets.len();
    let masks: Vec<Vec<u64>> = cosets
        .iter()
        .map(|class| {
            let mut mask = vec![0u64; g.words];
            for &a in class {
                mask[a as usize / 64] |= 1 << (a % 64);
            }
            mask
        })
        .collect();
    let hits = |a: usize, y: usize| -> usize {
        g.row(a).iter().zip(&masks[y]).map(|(r, s)| (r & s).count_ones() as usize).sum()
    };
    let m = ring.ideal_size() as usize;

    let mut independent = true;
    let mut quotient_ok = true;
    let mut complete = true;
    let mut seen = vec![false; q * q];
    for (x, class) in cosets.iter().enumerate() {
        for &a in class {
            let a = a as usize;
            if hits(a, x) != 0 {
                independent = false;
            }
            for y in (0..q).filter(|&y| y != x) {
                let h = hits(a, y);
                if h > 0 {
                    seen[x * q + y] = true;
                }
                if quotient.has_edge(x, y) && h != m {
                    complete = false;
                }
            }
        }
    }
    for x in 0..q {
        for y in (0..q).filter(|&y| y != x) {
            if seen[x * q + y] != quotient.has_edge(x, y) {
                quotient_ok = false;
            }
        }
    }
    Ok(BlowupReport {
        q: ring.q(),
        m: ring.ideal_size(),
        directed: g.directed,
        independent_cosets: independent,
        quotient_matches: quotient_ok,
        complete_between_cosets: complete,
    })
}

/// Single (weakly) connected component, by breadth-first search.
pub fn connectivity(g: &Graph) -> bool {
    if g.n == 0 {
        return true;
    }
    let mut adj: Vec<Vec<usize>> = (0..g.n).map(|u| g.neighbors(u).collect()).collect();
    if g.directed {
        for u in 0..g.n {
            for v in g.neighbors(u) {
                adj[v].push(u);
            }
        }
    }
    let mut seen = vec![false; g.n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == g.n
}

/// `Γ(k, p^r)` is connected iff `n = (q-1)/gcd(k, q-1)` divides no `p^a - 1`
/// with `1 ≤ a < r`.
pub fn connected_criterion(p: u64, r: u32, k: u64) -> bool {
    let q = p.pow(r);
    let n = (q - 1) / gcd(k, q - 1);
    (1..r).all(|a| (p.pow(a) - 1) % n != 0)
}
