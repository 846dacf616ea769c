//! Paths, multi digraphs, even digraphs, and their counting oracles.
//!
//! A *path* of length m is any vertex sequence (i₁,…,i_{m+1}); it generates a
//! multi digraph whose edge multiplicities are the adjacent-pair counts. A
//! closed path all of whose pair counts are even is an *even path*, and the
//! digraphs generated this way — equivalently, strongly connected with equal,
//! even in/out degrees at every vertex — decompose into doubled simple cycles.
//! This module implements those three characterizations independently so they
//! can be checked against each other, plus exhaustive enumeration, exact
//! generating-path counts, and brute-force canonical forms for isomorphism
//! classes.
//!
//! Vertices are 1-based labels, matching the enumeration domain `[N]`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type Edge = (Vertex, Vertex);

/// Vertex count cap for isomorphism-class inputs; canonicalization is brute
/// force over vertex bijections.
pub const CANONICAL_VERTEX_CAP: usize = 12;

/// Default step budget for generating-path enumeration.
pub const DEFAULT_PATH_BUDGET: u64 = 50_000_000;

/// Enumerations refuse to scan more than this many candidate sequences.
pub const ENUMERATION_GUARD: f64 = 1e8;

/// A vertex sequence; `len` is the number of adjacent pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Path {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path { vertices }
    }

    pub fn from_slice(vertices: &[Vertex]) -> Path {
        Path::new(vertices.to_vec())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges (adjacent pairs).
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    /// Adjacent pairs in order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Vertex set plus directed-edge multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiDigraph {
    verts: BTreeSet<Vertex>,
    edges: BTreeMap<Edge, u32>,
}

impl MultiDigraph {
    pub fn new() -> MultiDigraph {
        MultiDigraph::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (Vertex, Vertex, u32)>>(iter: I) -> MultiDigraph {
        let mut g = MultiDigraph::new();
        for (u, v, m) in iter {
            g.add_edge(u, v, m);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.verts.insert(v);
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, mult: u32) {
        if mult == 0 {
            return;
        }
        self.verts.insert(u);
        self.verts.insert(v);
        *self.edges.entry((u, v)).or_insert(0) += mult;
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.verts.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    /// Support edges with multiplicities, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    pub fn multiplicity(&self, e: Edge) -> u32 {
        self.edges.get(&e).copied().unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.edges.len()
    }

    /// Total edge count, multiplicities included.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    /// Out-degree counting multiplicities; a loop adds one.
    pub fn deg_out(&self, v: Vertex) -> u32 {
        self.edges
            .range((v, Vertex::MIN)..=(v, Vertex::MAX))
            .map(|(_, &m)| m)
            .sum()
    }

    /// In-degree counting multiplicities; a loop adds one.
    pub fn deg_in(&self, v: Vertex) -> u32 {
        self.edges
            .iter()
            .filter(|&(&(_, t), _)| t == v)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Strong connectivity over the edge support; a single vertex is strongly
    /// connected, with or without a loop.
    pub fn is_strongly_connected(&self) -> bool {
        let verts: Vec<Vertex> = self.verts.iter().copied().collect();
        if verts.is_empty() {
            return false;
        }
        if verts.len() == 1 {
            return true;
        }
        let index: HashMap<Vertex, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut fwd = vec![Vec::new(); verts.len()];
        let mut rev = vec![Vec::new(); verts.len()];
        for (&(u, v), _) in &self.edges {
            fwd[index[&u]].push(index[&v]);
            rev[index[&v]].push(index[&u]);
        }
        let reach = |adj: &[Vec<usize>]| {
            let mut seen = vec![false; verts.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(&fwd) && reach(&rev)
    }

    /// Union with multiplicities adding.
    pub fn union(&self, other: &MultiDigraph) -> MultiDigraph {
        let mut g = self.clone();
        for v in other.verts.iter() {
            g.verts.insert(*v);
        }
        for (&e, &m) in &other.edges {
            *g.edges.entry(e).or_insert(0) += m;
        }
        g
    }
}

/// Multi digraph with a distinguished directed edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedMultiDigraph {
    pub base: MultiDigraph,
    pub root: Edge,
}

impl RootedMultiDigraph {
    pub fn new(base: MultiDigraph, root: Edge) -> Result<RootedMultiDigraph> {
        if base.multiplicity(root) == 0 {
            return Err(Error::Config(format!(
                "root edge {root:?} is not present in the digraph"
            )));
        }
        Ok(RootedMultiDigraph { base, root })
    }
}

/// A simple directed cycle, stored as its vertex sequence without the closing
/// repeat and rotated so the smallest vertex comes first. A loop is `[v]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    fn from_walk(mut walk: Vec<Vertex>) -> Cycle {
        debug_assert!(!walk.is_empty());
        let min_pos = walk
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        walk.rotate_left(min_pos);
        Cycle { vertices: walk }
    }

    /// Builds from a vertex sequence without the closing repeat; distinctness
    /// is the caller's responsibility in test fixtures.
    pub fn from_vertices(vertices: Vec<Vertex>) -> Cycle {
        assert!(!vertices.is_empty());
        Cycle::from_walk(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges (= number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// A cycle always has at least one edge.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The directed edges around the cycle, including the wrap-around.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|d| d == e)
    }

    /// The doubled cycle as a multi digraph.
    pub fn doubled(&self) -> MultiDigraph {
        let mut g = MultiDigraph::new();
        for (u, v) in self.edges() {
            g.add_edge(u, v, 2);
        }
        g
    }
}

/// Multi digraph generated by a path: multiplicity of (i, j) is the number of
/// adjacent occurrences of that pair.
pub fn digraph_of_path(p: &Path) -> MultiDigraph {
    let mut g = MultiDigraph::new();
    for &v in p.vertices() {
        g.add_vertex(v);
    }
    for (u, v) in p.edges() {
        g.add_edge(u, v, 1);
    }
    g
}

/// A closed path in which every adjacent pair occurs an even number of times.
/// The trivial single-vertex path has no pairs and does not qualify.
pub fn is_even_path(p: &Path) -> bool {
    if !p.is_closed() || p.is_empty() {
        return false;
    }
    let mut counts: HashMap<Edge, u32> = HashMap::new();
    for e in p.edges() {
        *counts.entry(e).or_insert(0) += 1;
    }
    counts.values().all(|&m| m % 2 == 0)
}

/// Degree characterization: strongly connected, every directed edge has even
/// multiplicity, and `deg₊(v) = deg₋(v)` at every vertex (the degrees are
/// then automatically even, being sums of even multiplicities).
///
/// Even multiplicities must be required directly: equal even degrees alone
/// admit graphs like {(1,1), (1,2), (2,1), (2,2)} each once — every degree is
/// 2, yet no even path generates it and no double-cycle partition exists.
pub fn is_even_digraph(g: &MultiDigraph) -> bool {
    if g.edges.is_empty() {
        return false;
    }
    if g.edges.values().any(|&m| m % 2 != 0) {
        return false;
    }
    for v in g.vertices() {
        let out = g.deg_out(v);
        if out != g.deg_in(v) {
            return false;
        }
        debug_assert_eq!(out % 2, 0);
    }
    g.is_strongly_connected()
}

/// Partitions the edge multiset into doubled simple cycles, walking the halved
/// multiplicities from the root (or lowest vertex) and always taking the
/// smallest-numbered available out-neighbor. Output order: the first cycle
/// contains the root when given, and every later cycle shares a vertex with
/// the union of its predecessors.
///
/// Returns `None` exactly when the input is not an even digraph: an odd
/// multiplicity, a dead-ended walk, no edges, or broken connectivity.
pub fn double_cycle_decomposition(g: &MultiDigraph) -> Option<Vec<Cycle>> {
    decompose(g, None)
}

/// Rooted variant: the first returned cycle contains the root edge.
pub fn double_cycle_decomposition_rooted(g: &RootedMultiDigraph) -> Option<Vec<Cycle>> {
    decompose(&g.base, Some(g.root))
}

fn decompose(g: &MultiDigraph, root: Option<Edge>) -> Option<Vec<Cycle>> {
    if g.edges.is_empty() || !g.is_strongly_connected() {
        return None;
    }
    // halved multiplicities
    let mut h: BTreeMap<Edge, u32> = BTreeMap::new();
    for (&e, &m) in &g.edges {
        if m % 2 != 0 {
            return None;
        }
        h.insert(e, m / 2);
    }
    let mut remaining: u64 = h.values().map(|&m| m as u64).sum();
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut first_walk = true;

    while remaining > 0 {
        let (start, mut forced) = match (first_walk, root) {
            (true, Some((a, b))) => (a, Some(b)),
            _ => {
                let s = *h
                    .iter()
                    .find(|&(_, &m)| m > 0)
                    .map(|((u, _), _)| u)
                    .expect("remaining > 0");
                (s, None)
            }
        };
        first_walk = false;
        let mut walk: Vec<Vertex> = vec![start];
        let mut pos: HashMap<Vertex, usize> = HashMap::from([(start, 0)]);
        loop {
            let cur = *walk.last().unwrap();
            let next = match forced.take() {
                Some(f) => {
                    let m = h.get_mut(&(cur, f))?;
                    if *m == 0 {
                        return None;
                    }
                    *m -= 1;
                    f
                }
                None => {
                    // smallest available out-neighbor
                    let found = h
                        .range_mut((cur, Vertex::MIN)..=(cur, Vertex::MAX))
                        .find(|(_, m)| **m > 0);
                    match found {
                        Some(((_, v), m)) => {
                            let v = *v;
                            *m -= 1;
                            v
                        }
                        None => {
                            if walk.len() == 1 {
                                break; // walk finished cleanly
                            }
                            return None; // dead end: degrees unbalanced
                        }
                    }
                }
            };
            remaining -= 1;
            if let Some(&p) = pos.get(&next) {
                // the walk re-entered itself: peel walk[p..] as a simple cycle
                let cyc = walk[p..].to_vec();
                for v in &walk[p + 1..] {
                    pos.remove(v);
                }
                walk.truncate(p + 1);
                cycles.push(Cycle::from_walk(cyc));
            } else {
                pos.insert(next, walk.len());
                walk.push(next);
            }
        }
    }

    // order: root cycle first, then keep the chain vertex-connected
    let first = match root {
        Some(r) => cycles.iter().position(|c| c.contains_edge(r))?,
        None => 0,
    };
    let mut rest = cycles;
    let mut ordered = vec![rest.remove(first)];
    let mut seen: BTreeSet<Vertex> = ordered[0].vertices().iter().copied().collect();
    while !rest.is_empty() {
        let i = rest
            .iter()
            .position(|c| c.vertices().iter().any(|v| seen.contains(v)))
            .expect("even digraphs are strongly connected");
        let c = rest.remove(i);
        seen.extend(c.vertices().iter().copied());
        ordered.push(c);
    }
    Some(ordered)
}

/// Exact number of paths generating `g`, by depth-first enumeration of edge
/// orderings, with the default step budget.
pub fn count_generating_paths(g: &MultiDigraph) -> Result<u64> {
    count_generating_paths_with_budget(g, DEFAULT_PATH_BUDGET)
}

pub fn count_generating_paths_with_budget(g: &MultiDigraph, budget: u64) -> Result<u64> {
    generating_path_dfs(g, budget, false)
}

/// True when some path generates `g`; exits on the first witness.
pub fn exists_generating_path(g: &MultiDigraph) -> Result<bool> {
    Ok(generating_path_dfs(g, DEFAULT_PATH_BUDGET, true)? > 0)
}

fn generating_path_dfs(g: &MultiDigraph, budget: u64, stop_at_one: bool) -> Result<u64> {
    let verts: Vec<Vertex> = g.verts.iter().copied().collect();
    if g.edges.is_empty() {
        // only the trivial path (v) generates a single bare vertex
        return Ok(if verts.len() == 1 { 1 } else { 0 });
    }
    // a vertex touched by no edge can never appear in a generating path
    for &v in &verts {
        if g.deg_out(v) == 0 && g.deg_in(v) == 0 {
            return Ok(0);
        }
    }
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); verts.len()];
    for (&(u, v), &m) in &g.edges {
        adj[index[&u]].push((index[&v], m));
    }
    let total = g.edge_count();

    struct Dfs<'a> {
        adj: &'a mut Vec<Vec<(usize, u32)>>,
        steps: u64,
        budget: u64,
        count: u64,
        stop_at_one: bool,
    }
    impl Dfs<'_> {
        fn run(&mut self, cur: usize, remaining: u64) -> Result<()> {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::Budget {
                    steps: self.steps,
                    budget: self.budget,
                });
            }
            if remaining == 0 {
                self.count += 1;
                return Ok(());
            }
            for i in 0..self.adj[cur].len() {
                if self.stop_at_one && self.count > 0 {
                    return Ok(());
                }
                let (dest, mult) = self.adj[cur][i];
                if mult == 0 {
                    continue;
                }
                self.adj[cur][i].1 -= 1;
                let r = self.run(dest, remaining - 1);
                self.adj[cur][i].1 += 1;
                r?;
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        adj: &mut adj,
        steps: 0,
        budget,
        count: 0,
        stop_at_one,
    };
    for start in 0..verts.len() {
        if dfs.stop_at_one && dfs.count > 0 {
            break;
        }
        dfs.run(start, total)?;
    }
    Ok(dfs.count)
}

/// Streams every even closed path of length `2k` on `[n]`, each exactly once,
/// and returns the tally of path counts keyed by number of distinct vertices.
///
/// The scan covers `n^{2k}` candidate sequences and is refused beyond
/// [`ENUMERATION_GUARD`].
pub fn enumerate_even_closed_paths(
    n: u32,
    k: u32,
    mut f: impl FnMut(&Path),
) -> Result<BTreeMap<u32, u64>> {
    assert!(n >= 1 && k >= 1);
    let candidates = (n as f64).powi(2 * k as i32);
    if candidates > ENUMERATION_GUARD {
        return Err(Error::Capacity(format!(
            "n^2k = {candidates:e} candidate paths exceeds the {ENUMERATION_GUARD:e} guard"
        )));
    }
    let len = 2 * k as usize;
    let mut digits = vec![1u32; len];
    let mut tally: BTreeMap<u32, u64> = BTreeMap::new();
    let mut counts: HashMap<Edge, u32> = HashMap::new();
    loop {
        // evenness of the closed sequence: windows plus the wraparound pair
        counts.clear();
        for w in digits.windows(2) {
            *counts.entry((w[0], w[1])).or_insert(0) += 1;
        }
        *counts.entry((digits[len - 1], digits[0])).or_insert(0) += 1;
        if counts.values().all(|&m| m % 2 == 0) {
            let mut vs = digits.clone();
            vs.push(digits[0]);
            let p = Path::new(vs);
            let distinct = digits.iter().collect::<BTreeSet<_>>().len() as u32;
            *tally.entry(distinct).or_insert(0) += 1;
            f(&p);
        }
        // odometer
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(tally);
            }
            i -= 1;
            if digits[i] < n {
                digits[i] += 1;
                for d in &mut digits[i + 1..] {
                    *d = 1;
                }
                break;
            }
        }
    }
}

/// Census of the labeled rooted even digraphs on `[n]` with `2k` edges and
/// exactly `l` vertices.
#[derive(Debug, Clone, Serialize)]
pub struct EvenDigraphCensus {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    /// Distinct labeled (digraph, root-edge) pairs.
    pub labeled_rooted_count: u64,
    /// Distinct labeled digraphs ignoring the root.
    pub labeled_unrooted_count: u64,
    /// Rooted isomorphism classes.
    pub class_count: u64,
    /// `n^l * k^{2(k-l)+1}`
    pub bound: f64,
    pub bound_ok: bool,
    #[serde(skip)]
    pub labeled: Vec<MultiDigraph>,
}

/// Enumerates the labeled rooted even digraphs exactly, by generating every
/// even closed path of length `2k` and collecting the digraphs with `l`
/// distinct vertices.
pub fn enumerate_even_digraphs(n: u32, k: u32, l: u32) -> Result<EvenDigraphCensus> {
    assert!(l >= 1);
    let bound = digraph_count_bound(n, k, l);
    // an even digraph with 2k edges has at most k vertices
    if l > k.min(n) {
        return Ok(EvenDigraphCensus {
            n,
            k,
            l,
            labeled_rooted_count: 0,
            labeled_unrooted_count: 0,
            class_count: 0,
            bound,
            bound_ok: true,
            labeled: Vec::new(),
        });
    }
    let mut set: HashSet<MultiDigraph> = HashSet::new();
    enumerate_even_closed_paths(n, k, |p| {
        let g = digraph_of_path(p);
        if g.vertex_count() == l as usize {
            set.insert(g);
        }
    })?;
    let mut labeled: Vec<MultiDigraph> = set.into_iter().collect();
    labeled.sort();
    let mut rooted_count = 0u64;
    let mut classes: HashSet<CanonicalKey> = HashSet::new();
    for g in &labeled {
        for (e, _) in g.edges() {
            rooted_count += 1;
            let rg = RootedMultiDigraph::new(g.clone(), e).expect("support edge");
            classes.insert(canonical_key_rooted(&rg)?);
        }
    }
    Ok(EvenDigraphCensus {
        n,
        k,
        l,
        labeled_rooted_count: rooted_count,
        labeled_unrooted_count: labeled.len() as u64,
        class_count: classes.len() as u64,
        bound,
        bound_ok: (rooted_count as f64) <= bound,
        labeled,
    })
}

/// Opaque identifier of an isomorphism class: minimal serialized adjacency
/// over all vertex relabelings. Keys are equal iff the graphs are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

pub fn canonical_key(g: &MultiDigraph) -> Result<CanonicalKey> {
    canonical(g, None)
}

pub fn canonical_key_rooted(g: &RootedMultiDigraph) -> Result<CanonicalKey> {
    canonical(&g.base, Some(g.root))
}

fn canonical(g: &MultiDigraph, root: Option<Edge>) -> Result<CanonicalKey> {
    let verts: Vec<Vertex> = g.verts.iter().copied().collect();
    let l = verts.len();
    if l > CANONICAL_VERTEX_CAP {
        return Err(Error::Unsupported(format!(
            "canonicalization is brute force and capped at {CANONICAL_VERTEX_CAP} vertices, got {l}"
        )));
    }
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // labels[i] is the canonical label assigned to verts[i]
    let mut labels: Vec<u8> = (0..l as u8).collect();
    let mut best: Option<Vec<u8>> = None;

    let mut emit = |labels: &[u8], best: &mut Option<Vec<u8>>| {
        let mut edges: Vec<(u8, u8, u32)> = g
            .edges
            .iter()
            .map(|(&(u, v), &m)| (labels[index[&u]], labels[index[&v]], m))
            .collect();
        edges.sort_unstable();
        let mut buf = Vec::with_capacity(2 + edges.len() * 6 + 3);
        buf.push(l as u8);
        buf.push(edges.len() as u8);
        for (u, v, m) in edges {
            buf.push(u);
            buf.push(v);
            buf.extend_from_slice(&m.to_le_bytes());
        }
        match root {
            Some((u, v)) => {
                buf.push(0xff);
                buf.push(labels[index[&u]]);
                buf.push(labels[index[&v]]);
            }
            None => buf.push(0xfe),
        }
        if best.as_ref().is_none_or(|b| buf < *b) {
            *best = Some(buf);
        }
    };

    fn heaps(
        labels: &mut Vec<u8>,
        k: usize,
        emit: &mut impl FnMut(&[u8], &mut Option<Vec<u8>>),
        best: &mut Option<Vec<u8>>,
    ) {
        if k <= 1 {
            emit(labels, best);
            return;
        }
        for i in 0..k {
            heaps(labels, k - 1, emit, best);
            if k % 2 == 0 {
                labels.swap(i, k - 1);
            } else {
                labels.swap(0, k - 1);
            }
        }
    }
    heaps(&mut labels, l, &mut emit, &mut best);
    Ok(CanonicalKey(best.expect("at least one labeling")))
}

/// Brute-force isomorphism test over all vertex bijections. Deliberately
/// independent of [`canonical_key`], which it cross-checks in tests.
pub fn are_isomorphic(a: &MultiDigraph, b: &MultiDigraph) -> bool {
    isomorphic(a, None, b, None)
}

pub fn are_isomorphic_rooted(a: &RootedMultiDigraph, b: &RootedMultiDigraph) -> bool {
    isomorphic(&a.base, Some(a.root), &b.base, Some(b.root))
}

fn isomorphic(a: &MultiDigraph, ra: Option<Edge>, b: &MultiDigraph, rb: Option<Edge>) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.support_len() != b.support_len()
        || a.edge_count() != b.edge_count()
    {
        return false;
    }
    let va: Vec<Vertex> = a.verts.iter().copied().collect();
    let vb: Vec<Vertex> = b.verts.iter().copied().collect();
    let l = va.len();
    let mut perm: Vec<usize> = (0..l).collect();
    // try every bijection va[i] -> vb[perm[i]]
    loop {
        let map: HashMap<Vertex, Vertex> = va
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, vb[perm[i]]))
            .collect();
        let edges_match = a
            .edges
            .iter()
            .all(|(&(u, v), &m)| b.multiplicity((map[&u], map[&v])) == m);
        let root_match = match (ra, rb) {
            (Some((u, v)), Some(r)) => (map[&u], map[&v]) == r,
            (None, None) => true,
            _ => false,
        };
        if edges_match && root_match {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Visits every strongly connected multi digraph with vertex set `{1..v}` for
/// `v <= max_verts` and `1..=max_edges` total edges (multiplicities included).
/// Every strongly connected multi digraph on at most `max_verts` labeled
/// vertices is isomorphic to one of those visited.
pub fn for_each_strongly_connected_multidigraph(
    max_verts: u32,
    max_edges: u32,
    mut f: impl FnMut(&MultiDigraph),
) {
    for v in 1..=max_verts {
        let slots: Vec<Edge> = (1..=v)
            .flat_map(|a| (1..=v).map(move |b| (a, b)))
            .collect();
        let mut mults = vec![0u32; slots.len()];
        distribute(&slots, &mut mults, 0, max_edges, v, &mut f);
    }
}

fn distribute(
    slots: &[Edge],
    mults: &mut Vec<u32>,
    idx: usize,
    budget_left: u32,
    v: u32,
    f: &mut impl FnMut(&MultiDigraph),
) {
    if idx == slots.len() {
        let total: u32 = mults.iter().sum();
        if total == 0 {
            return;
        }
        let mut g = MultiDigraph::new();
        for w in 1..=v {
            g.add_vertex(w);
        }
        for (i, &m) in mults.iter().enumerate() {
            g.add_edge(slots[i].0, slots[i].1, m);
        }
        if g.is_strongly_connected() {
            f(&g);
        }
        return;
    }
    for m in 0..=budget_left {
        mults[idx] = m;
        distribute(slots, mults, idx + 1, budget_left - m, v, f);
    }
    mults[idx] = 0;
}

/// Exact factorial as f64 (inputs stay below 20 at desk scale).
pub fn factorial(n: u32) -> f64 {
    (1..=n as u64).map(|i| i as f64).product()
}

/// Generating-path count bound for an even digraph with `2k` edges and `l`
/// vertices: `l * (4k - 4l)!`. Requires `k >= l`.
pub fn path_count_bound(k: u32, l: u32) -> f64 {
    assert!(k >= l, "an even digraph with 2k edges has at most k vertices");
    l as f64 * factorial(4 * k - 4 * l)
}

/// Labeled rooted even digraph count bound: `n^l * k^{2(k-l)+1}`.
pub fn digraph_count_bound(n: u32, k: u32, l: u32) -> f64 {
    (n as f64).powi(l as i32) * (k as f64).powi(2 * (k as i32 - l as i32) + 1)
}

/// Even closed path tally bound: `k^2 (4k)^{6(k-l)} n^l`.
pub fn path_tally_bound(n: u32, k: u32, l: u32) -> f64 {
    (k as f64).powi(2)
        * (4.0 * k as f64).powi(6 * (k as i32 - l as i32))
        * (n as f64).powi(l as i32)
}
