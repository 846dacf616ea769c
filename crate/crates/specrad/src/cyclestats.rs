//! Cycle-weight statistics: digraph weights, dyadic tail statistics over
//! isomorphism classes, the cycle-statistics regularity event, and the
//! deterministic bound checks built on top of it.
//!
//! For a matrix realization, each even digraph gets the weight
//! `p(G) = Π |X_{ij}|^{n_ij}` over its support; the rooted variant discounts
//! two copies of the root edge. The dyadic statistics of an unlabeled class U
//! are `S_h(U) = 2^h |{G ~ U : p(G) >= 2^h}| / |{G ~ U}|` and
//! `S(U) = max(1, max_h S_h(U))`, truncated at `H = floor(4k log2 N)` (on the
//! bounded-entry event every weight stays below `2^H`).

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::digraph::{
    canonical_key_rooted, double_cycle_decomposition_rooted, is_even_digraph, CanonicalKey, Cycle,
    MultiDigraph, Path, RootedMultiDigraph, Vertex,
};
use crate::ensemble::CMatrix;
use crate::error::{Error, Result};
use crate::seeds;

/// Exact class statistics enumerate at most this many labeled cycles.
pub const EXACT_CLASS_CAP: u64 = 10_000_000;

/// Exact statistics for general rooted classes enumerate at most this many
/// vertex injections.
pub const INJECTION_CAP: u64 = 20_000_000;

/// Matrix plus the moment-hypothesis parameters under test.
#[derive(Debug, Clone, Copy)]
pub struct WeightContext<'a> {
    pub matrix: &'a CMatrix,
    /// Moment exponent margin: the hypothesis is `E|x|^{2+eps} <= B`.
    pub eps: f64,
    /// Moment cap B (an input hypothesis, not estimated from data).
    pub b: f64,
    /// Moment order driving the truncation depth and the per-m sweep.
    pub k: u32,
}

impl<'a> WeightContext<'a> {
    pub fn new(matrix: &'a CMatrix, eps: f64, b: f64, k: u32) -> Result<WeightContext<'a>> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Config(format!("eps must be > 0, got {eps}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Config(format!("B must be > 0, got {b}")));
        }
        if k < 1 {
            return Err(Error::Config("k must be >= 1".into()));
        }
        Ok(WeightContext { matrix, eps, b, k })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Truncation depth `H = floor(4k log2 N)`.
    pub fn h_cutoff(&self) -> u32 {
        (4.0 * self.k as f64 * (self.n() as f64).log2())
            .floor()
            .max(0.0) as u32
    }

    /// All entry moduli at most n².
    pub fn event_b_holds(&self) -> bool {
        let n = self.n() as f64;
        self.matrix.max_abs() <= n * n
    }
}

fn entry(x: &CMatrix, u: Vertex, v: Vertex) -> Result<Complex64> {
    let n = x.n() as u32;
    if u < 1 || u > n || v < 1 || v > n {
        return Err(Error::Config(format!(
            "vertex pair ({u}, {v}) outside [1, {n}]"
        )));
    }
    Ok(x.get(u as usize - 1, v as usize - 1))
}

/// `w(P) = Π X_{i_l, i_{l+1}}` along the path.
pub fn path_weight(x: &CMatrix, p: &Path) -> Result<Complex64> {
    let mut w = Complex64::new(1.0, 0.0);
    for (u, v) in p.edges() {
        w *= entry(x, u, v)?;
    }
    Ok(w)
}

/// `p(G) = Π |X_{ij}|^{n_ij}` over the support edges.
pub fn digraph_weight(x: &CMatrix, g: &MultiDigraph) -> Result<f64> {
    let mut p = 1.0;
    for ((u, v), m) in g.edges() {
        p *= entry(x, u, v)?.norm().powi(m as i32);
    }
    Ok(p)
}

/// Rooted weight: the root edge's exponent is reduced by two. Requires root
/// multiplicity >= 2, so the exponent never goes negative and the value stays
/// finite even when the root entry is zero.
pub fn rooted_weight(x: &CMatrix, g: &RootedMultiDigraph) -> Result<f64> {
    if g.base.multiplicity(g.root) < 2 {
        return Err(Error::Config(
            "rooted weight needs root multiplicity >= 2".into(),
        ));
    }
    let mut p = 1.0;
    for ((u, v), m) in g.base.edges() {
        let exponent = if (u, v) == g.root { m - 2 } else { m };
        if exponent > 0 {
            p *= entry(x, u, v)?.norm().powi(exponent as i32);
        }
    }
    Ok(p)
}

/// How class statistics are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsMode {
    /// Full enumeration of the labeled class (guarded by [`EXACT_CLASS_CAP`]).
    Exact,
    /// Uniform labeled-cycle sampling.
    MonteCarlo { trials: u64, seed: u64 },
    /// Exact when the class fits under `exact_cap`, Monte Carlo otherwise.
    Auto {
        exact_cap: u64,
        trials: u64,
        seed: u64,
    },
}

impl StatsMode {
    /// Default for experiment sweeps.
    pub fn auto(seed: u64) -> StatsMode {
        StatsMode::Auto {
            exact_cap: 100_000,
            trials: 2000,
            seed,
        }
    }
}

/// Dyadic statistics of one unlabeled (rooted) class.
#[derive(Debug, Clone, Serialize)]
pub struct StatisticsRecord {
    pub class_key: CanonicalKey,
    /// `S_h` for h = 0..=h_cutoff.
    pub s_h: Vec<f64>,
    /// `S = max(1, max_h S_h)`.
    pub s: f64,
    pub h_cutoff: u32,
    /// Full class enumeration (true) vs Monte Carlo over labelings (false).
    pub exact: bool,
    /// Per-h estimator standard errors in Monte Carlo mode.
    pub mc_stderr: Option<Vec<f64>>,
}

impl StatisticsRecord {
    pub fn sum(&self) -> f64 {
        self.s_h.iter().sum()
    }

    /// `Σ_h 2^{h eps/2} S_h`.
    pub fn tail_weighted_sum(&self, eps: f64) -> f64 {
        self.s_h
            .iter()
            .enumerate()
            .map(|(h, &s)| (h as f64 * eps / 2.0).exp2() * s)
            .sum()
    }
}

/// `|C_m| = binom(n, m) (m-1)!` — the labeled double cycles with 2m edges.
pub fn cycle_class_size(n: u32, m: u32) -> f64 {
    assert!(m >= 1);
    if m > n {
        return 0.0;
    }
    let mut binom = 1.0;
    for i in 0..m {
        binom *= (n - i) as f64 / (i + 1) as f64;
    }
    binom * crate::digraph::factorial(m - 1)
}

/// Visits every labeled double cycle with m edges on [n], as the vertex
/// sequence of the underlying simple cycle (minimum vertex first).
fn for_each_labeled_cycle(n: u32, m: u32, mut f: impl FnMut(&[Vertex])) {
    let m = m as usize;
    if m > n as usize {
        return;
    }
    // lexicographic m-subsets of [n]; the head stays the subset minimum and
    // the tail runs over its permutations
    let mut subset: Vec<Vertex> = (1..=m as u32).collect();
    loop {
        let mut order = subset.clone();
        loop {
            f(&order);
            if !next_perm_tail(&mut order) {
                break;
            }
        }
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] < n - (m - 1 - i) as u32 {
                subset[i] += 1;
                for j in i + 1..m {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Next permutation of `order[1..]`, keeping the head fixed.
fn next_perm_tail(order: &mut [Vertex]) -> bool {
    let tail = &mut order[1..];
    if tail.len() < 2 {
        return false;
    }
    let mut i = tail.len() - 1;
    while i > 0 && tail[i - 1] >= tail[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = tail.len() - 1;
    while tail[j] <= tail[i - 1] {
        j -= 1;
    }
    tail.swap(i - 1, j);
    tail[i..].reverse();
    true
}

/// Weight of the doubled cycle: product of squared entry moduli along it.
fn doubled_cycle_weight(x: &CMatrix, cycle: &[Vertex]) -> f64 {
    let m = cycle.len();
    let mut p = 1.0;
    for i in 0..m {
        let u = cycle[i] as usize - 1;
        let v = cycle[(i + 1) % m] as usize - 1;
        p *= x.get(u, v).norm_sqr();
    }
    p
}

/// Rooted doubled-cycle weight: the root edge contributes exponent 0.
fn rooted_cycle_weight(x: &CMatrix, cycle: &[Vertex], root_idx: usize) -> f64 {
    let m = cycle.len();
    let mut p = 1.0;
    for i in 0..m {
        if i == root_idx {
            continue;
        }
        let u = cycle[i] as usize - 1;
        let v = cycle[(i + 1) % m] as usize - 1;
        p *= x.get(u, v).norm_sqr();
    }
    p
}

/// Tally of `floor(log2 p)` clamped to [0, H]; weights below 1 fall outside.
struct DyadicTally {
    tally: Vec<u64>,
    total: u64,
}

impl DyadicTally {
    fn new(h_cutoff: u32) -> DyadicTally {
        DyadicTally {
            tally: vec![0; h_cutoff as usize + 1],
            total: 0,
        }
    }

    fn add(&mut self, p: f64) {
        self.total += 1;
        if p >= 1.0 {
            let t = (p.log2().floor() as usize).min(self.tally.len() - 1);
            self.tally[t] += 1;
        }
    }

    /// `S_h = 2^h P(p >= 2^h)` for h = 0..=H, plus standard errors.
    fn statistics(&self) -> (Vec<f64>, Vec<f64>) {
        let size = self.total as f64;
        let mut s_h = vec![0.0; self.tally.len()];
        let mut stderr = vec![0.0; self.tally.len()];
        let mut geq: u64 = 0;
        for h in (0..self.tally.len()).rev() {
            geq += self.tally[h];
            let phat = geq as f64 / size;
            let scale = (h as f64).exp2();
            s_h[h] = scale * phat;
            stderr[h] = scale * (phat * (1.0 - phat) / size).sqrt();
        }
        (s_h, stderr)
    }
}

/// Canonical key of the (rooted) double-cycle class with 2m edges.
fn cycle_class_key(m: u32, rooted: bool) -> CanonicalKey {
    let rep: Vec<Vertex> = (1..=m).collect();
    let g = Cycle::from_vertices(rep).doubled();
    if rooted {
        let root = if m == 1 { (1, 1) } else { (1, 2) };
        canonical_key_rooted(&RootedMultiDigraph::new(g, root).expect("root in support"))
            .expect("small class representative")
    } else {
        crate::digraph::canonical_key(&g).expect("small class representative")
    }
}

/// Dyadic statistics of the double-cycle class with 2m edges (rooted or not),
/// exactly over the labeled class or by uniform Monte Carlo.
pub fn cycle_class_statistics(
    ctx: &WeightContext,
    m: u32,
    rooted: bool,
    mode: StatsMode,
) -> Result<StatisticsRecord> {
    let n = ctx.n() as u32;
    if m < 1 || m > n {
        return Err(Error::Config(format!(
            "cycle length m = {m} outside [1, {n}]"
        )));
    }
    let class_size = cycle_class_size(n, m);
    let (exact, trials_seed) = match mode {
        StatsMode::Exact => {
            if class_size > EXACT_CLASS_CAP as f64 {
                return Err(Error::Capacity(format!(
                    "labeled class size {class_size:e} exceeds {EXACT_CLASS_CAP:e}; use Monte Carlo statistics"
                )));
            }
            (true, None)
        }
        StatsMode::MonteCarlo { trials, seed } => (false, Some((trials, seed))),
        StatsMode::Auto {
            exact_cap,
            trials,
            seed,
        } => {
            if class_size <= exact_cap as f64 {
                (true, None)
            } else {
                (false, Some((trials, seed)))
            }
        }
    };
    let h = ctx.h_cutoff();
    let mut tally = DyadicTally::new(h);
    if exact {
        for_each_labeled_cycle(n, m, |cycle| {
            if rooted {
                for r in 0..m as usize {
                    tally.add(rooted_cycle_weight(ctx.matrix, cycle, r));
                }
            } else {
                tally.add(doubled_cycle_weight(ctx.matrix, cycle));
            }
        });
    } else {
        let (trials, seed) = trials_seed.unwrap();
        let mut rng = seeds::stream_rng(seed, (m as u64) << 1 | rooted as u64);
        let mut cycle = vec![0u32; m as usize];
        for _ in 0..trials {
            sample_uniform_cycle(&mut rng, n, &mut cycle);
            if rooted {
                let r = rng.gen_range(0..m as usize);
                tally.add(rooted_cycle_weight(ctx.matrix, &cycle, r));
            } else {
                tally.add(doubled_cycle_weight(ctx.matrix, &cycle));
            }
        }
    }
    let (s_h, stderr) = tally.statistics();
    let s = s_h.iter().copied().fold(1.0, f64::max);
    Ok(StatisticsRecord {
        class_key: cycle_class_key(m, rooted),
        s_h,
        s,
        h_cutoff: h,
        exact,
        mc_stderr: if exact { None } else { Some(stderr) },
    })
}

/// Uniform labeled cycle: m distinct vertices by rejection, then a uniform
/// cyclic order (minimum-first representative).
fn sample_uniform_cycle(rng: &mut impl Rng, n: u32, out: &mut [Vertex]) {
    let m = out.len();
    'reject: loop {
        for slot in out.iter_mut() {
            *slot = rng.gen_range(1..=n);
        }
        for i in 0..m {
            for j in i + 1..m {
                if out[i] == out[j] {
                    continue 'reject;
                }
            }
        }
        break;
    }
    // Fisher-Yates, then rotate the minimum to the front: uniform over the
    // (m-1)! cyclic orders
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        out.swap(i, j);
    }
    let min_pos = out
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap();
    out.rotate_left(min_pos);
}

/// One row of the regularity report: the three h-sums for cycle length m.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityRow {
    pub m: u32,
    /// `Σ_h S_h(C_m)`
    pub sum_plain: f64,
    /// `Σ_h S_h(C_m*)` (rooted)
    pub sum_rooted: f64,
    /// `Σ_h 2^{h eps/2} S_h(C_m)`
    pub sum_tail_weighted: f64,
    pub plain_ok: bool,
    pub rooted_ok: bool,
    pub weighted_ok: bool,
}

/// The cycle-statistics regularity event: for every m <= k the plain and
/// rooted h-sums stay below k² and the tail-weighted sum below k² B^m.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub k: u32,
    pub eps: f64,
    pub b: f64,
    pub per_m: Vec<RegularityRow>,
    pub plain_all_ok: bool,
    pub rooted_all_ok: bool,
    pub weighted_all_ok: bool,
    /// Conjunction of the three.
    pub holds: bool,
    /// All entry moduli at most n²; h-sum truncation is only justified on
    /// this event, so runs failing it are flagged and excluded from bound
    /// checks.
    pub event_b: bool,
}

/// Evaluates the regularity event deterministically for this matrix.
pub fn check_regularity_event(ctx: &WeightContext, mode: StatsMode) -> Result<RegularityReport> {
    let k2 = (ctx.k as f64) * (ctx.k as f64);
    let mut per_m = Vec::with_capacity(ctx.k as usize);
    for m in 1..=ctx.k {
        let plain = cycle_class_statistics(ctx, m, false, mode)?;
        let rooted = cycle_class_statistics(ctx, m, true, mode)?;
        let sum_plain = plain.sum();
        let sum_rooted = rooted.sum();
        let sum_tail_weighted = plain.tail_weighted_sum(ctx.eps);
        per_m.push(RegularityRow {
            m,
            sum_plain,
            sum_rooted,
            sum_tail_weighted,
            plain_ok: sum_plain <= k2,
            rooted_ok: sum_rooted <= k2,
            weighted_ok: sum_tail_weighted <= k2 * ctx.b.powi(m as i32),
        });
    }
    let plain_all_ok = per_m.iter().all(|r| r.plain_ok);
    let rooted_all_ok = per_m.iter().all(|r| r.rooted_ok);
    let weighted_all_ok = per_m.iter().all(|r| r.weighted_ok);
    Ok(RegularityReport {
        k: ctx.k,
        eps: ctx.eps,
        b: ctx.b,
        per_m,
        plain_all_ok,
        rooted_all_ok,
        weighted_all_ok,
        holds: plain_all_ok && rooted_all_ok && weighted_all_ok,
        event_b: ctx.event_b_holds(),
    })
}

/// Empirical class moment `ν_m[|w(C)|^{2t}]`: the mean of `p(C)^t` over the
/// labeled double-cycle class.
pub fn cycle_empirical_moment(ctx: &WeightContext, m: u32, t: f64, mode: StatsMode) -> Result<f64> {
    let n = ctx.n() as u32;
    if m < 1 || m > n {
        return Err(Error::Config(format!(
            "cycle length m = {m} outside [1, {n}]"
        )));
    }
    assert!(t >= 0.0);
    let class_size = cycle_class_size(n, m);
    let exact = match mode {
        StatsMode::Exact => {
            if class_size > EXACT_CLASS_CAP as f64 {
                return Err(Error::Capacity(format!(
                    "labeled class size {class_size:e} exceeds {EXACT_CLASS_CAP:e}; use Monte Carlo"
                )));
            }
            true
        }
        StatsMode::MonteCarlo { .. } => false,
        StatsMode::Auto { exact_cap, .. } => class_size <= exact_cap as f64,
    };
    let mut sum = 0.0;
    let mut count = 0u64;
    if exact {
        for_each_labeled_cycle(n, m, |cycle| {
            sum += doubled_cycle_weight(ctx.matrix, cycle).powf(t);
            count += 1;
        });
    } else {
        let (trials, seed) = match mode {
            StatsMode::MonteCarlo { trials, seed } | StatsMode::Auto { trials, seed, .. } => {
                (trials, seed)
            }
            StatsMode::Exact => unreachable!(),
        };
        let mut rng = seeds::stream_rng(seed, 0x0e0 + m as u64);
        let mut cycle = vec![0u32; m as usize];
        for _ in 0..trials {
            sample_uniform_cycle(&mut rng, n, &mut cycle);
            sum += doubled_cycle_weight(ctx.matrix, &cycle).powf(t);
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

/// Moment-event row: empirical second and `2+eps` cycle moments for one m.
#[derive(Debug, Clone, Serialize)]
pub struct MomentEventRow {
    pub m: u32,
    /// `ν_m[|w(C)|^2]`
    pub mean_sq: f64,
    /// `ν_m[|w(C)|^{2+eps}]`
    pub mean_sq_eps: f64,
    pub sq_ok: bool,
    pub sq_eps_ok: bool,
}

/// The empirical-moment event: `ν_m[|w|^2] <= k²` and
/// `ν_m[|w|^{2+eps}] <= k² B^m` for all m <= k. Related to, but not identical
/// with, the regularity event; both are reported side by side.
#[derive(Debug, Clone, Serialize)]
pub struct MomentEventReport {
    pub k: u32,
    pub per_m: Vec<MomentEventRow>,
    pub holds: bool,
}

pub fn check_moment_event(ctx: &WeightContext, mode: StatsMode) -> Result<MomentEventReport> {
    let k2 = (ctx.k as f64) * (ctx.k as f64);
    let mut per_m = Vec::new();
    for m in 1..=ctx.k {
        let mean_sq = cycle_empirical_moment(ctx, m, 1.0, mode)?;
        let mean_sq_eps = cycle_empirical_moment(ctx, m, 1.0 + ctx.eps / 2.0, mode)?;
        per_m.push(MomentEventRow {
            m,
            mean_sq,
            mean_sq_eps,
            sq_ok: mean_sq <= k2,
            sq_eps_ok: mean_sq_eps <= k2 * ctx.b.powi(m as i32),
        });
    }
    let holds = per_m.iter().all(|r| r.sq_ok && r.sq_eps_ok);
    Ok(MomentEventReport {
        k: ctx.k,
        per_m,
        holds,
    })
}

/// Iterated-moment check `ν_m[|w|^{2t}] <= n^{m t (1 - eps/8)}`, meaningful on
/// matrices passing both the regularity and bounded-entry events.
#[derive(Debug, Clone, Serialize)]
pub struct IteratedMomentCheck {
    pub m: u32,
    pub t: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn iterated_moment_check(
    ctx: &WeightContext,
    m: u32,
    t: u32,
    mode: StatsMode,
) -> Result<IteratedMomentCheck> {
    let lhs = cycle_empirical_moment(ctx, m, t as f64, mode)?;
    let rhs = (ctx.n() as f64).powf(m as f64 * t as f64 * (1.0 - ctx.eps / 8.0));
    Ok(IteratedMomentCheck {
        m,
        t,
        lhs,
        rhs,
        ok: lhs <= rhs,
    })
}

/// `w_max(m)² <= (Σ_C |w(C)|^{2+eps})^{1/(1+eps/2)}` — an l^∞ vs l^{2+eps}
/// norm comparison, verified exactly over the class.
#[derive(Debug, Clone, Serialize)]
pub struct WMaxReport {
    pub m: u32,
    pub w_max: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn w_max_bound_check(ctx: &WeightContext, m: u32) -> Result<WMaxReport> {
    let n = ctx.n() as u32;
    if m < 1 || m > n {
        return Err(Error::Config(format!(
            "cycle length m = {m} outside [1, {n}]"
        )));
    }
    let class_size = cycle_class_size(n, m);
    if class_size > EXACT_CLASS_CAP as f64 {
        return Err(Error::Capacity(format!(
            "labeled class size {class_size:e} exceeds {EXACT_CLASS_CAP:e}"
        )));
    }
    let mut w_max_sq: f64 = 0.0;
    let mut sum = 0.0;
    let exponent = 1.0 + ctx.eps / 2.0;
    for_each_labeled_cycle(n, m, |cycle| {
        let p = doubled_cycle_weight(ctx.matrix, cycle);
        w_max_sq = w_max_sq.max(p);
        sum += p.powf(exponent);
    });
    let rhs = sum.powf(1.0 / exponent);
    Ok(WMaxReport {
        m,
        w_max: w_max_sq.sqrt(),
        rhs,
        ok: w_max_sq <= rhs * (1.0 + 1e-12),
    })
}

/// Exact dyadic statistics of the labeled class of an arbitrary rooted even
/// digraph inside `[n]`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassStatistics {
    pub s_h: Vec<f64>,
    pub s: f64,
    pub h_cutoff: u32,
    pub class_size: u64,
}

/// Enumerates all injections of the digraph's vertices into `[n]`, deduplicates
/// to distinct labeled copies, and tallies their rooted weights.
pub fn exact_rooted_class_statistics(
    ctx: &WeightContext,
    g: &RootedMultiDigraph,
) -> Result<ClassStatistics> {
    let n = ctx.n() as u32;
    let verts: Vec<Vertex> = g.base.vertices().collect();
    let x = verts.len() as u32;
    if x > n {
        return Err(Error::Config(format!(
            "class is empty: {x} vertices into [{n}]"
        )));
    }
    let mut arrangements = 1.0f64;
    for i in 0..x {
        arrangements *= (n - i) as f64;
    }
    if arrangements > INJECTION_CAP as f64 {
        return Err(Error::Capacity(format!(
            "{arrangements:e} vertex injections exceeds {INJECTION_CAP:e}"
        )));
    }

    fn rec(
        verts: &[Vertex],
        g: &RootedMultiDigraph,
        n: u32,
        idx: usize,
        assignment: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        copies: &mut std::collections::HashSet<RootedMultiDigraph>,
    ) {
        if idx == verts.len() {
            let map: std::collections::HashMap<Vertex, Vertex> = verts
                .iter()
                .zip(assignment.iter())
                .map(|(&a, &b)| (a, b))
                .collect();
            let base =
                MultiDigraph::from_edges(g.base.edges().map(|((u, v), m)| (map[&u], map[&v], m)));
            let root = (map[&g.root.0], map[&g.root.1]);
            copies.insert(RootedMultiDigraph { base, root });
            return;
        }
        for cand in 1..=n {
            if !used[cand as usize] {
                used[cand as usize] = true;
                assignment[idx] = cand;
                rec(verts, g, n, idx + 1, assignment, used, copies);
                used[cand as usize] = false;
            }
        }
    }
    let mut copies: std::collections::HashSet<RootedMultiDigraph> =
        std::collections::HashSet::new();
    let mut assignment: Vec<Vertex> = vec![0; verts.len()];
    let mut used = vec![false; n as usize + 1];
    rec(&verts, g, n, 0, &mut assignment, &mut used, &mut copies);

    let h = ctx.h_cutoff();
    let mut tally = DyadicTally::new(h);
    for copy in &copies {
        tally.add(rooted_weight(ctx.matrix, copy)?);
    }
    let (s_h, _) = tally.statistics();
    let s = s_h.iter().copied().fold(1.0, f64::max);
    Ok(ClassStatistics {
        s_h,
        s,
        h_cutoff: h,
        class_size: copies.len() as u64,
    })
}

/// `S_h` of a rooted class computed by exhaustive permutation averaging:
/// `2^h P_π(p_r(π[G]) >= 2^h)` over all permutations of `[n]`. Exists purely to
/// cross-check [`exact_rooted_class_statistics`]; n is capped at 8.
pub fn permutation_statistic(ctx: &WeightContext, g: &RootedMultiDigraph, h: u32) -> Result<f64> {
    let n = ctx.n() as u32;
    if n > 8 {
        return Err(Error::Capacity(
            "permutation averaging is exhaustive over n! and capped at n = 8".into(),
        ));
    }
    let mut perm: Vec<Vertex> = (1..=n).collect();
    let threshold = (h as f64).exp2();
    let mut hits = 0u64;
    let mut total = 0u64;
    loop {
        // relabel through the permutation (vertex v -> perm[v-1])
        let base = MultiDigraph::from_edges(
            g.base
                .edges()
                .map(|((u, v), m)| (perm[u as usize - 1], perm[v as usize - 1], m)),
        );
        let root = (perm[g.root.0 as usize - 1], perm[g.root.1 as usize - 1]);
        let p = rooted_weight(ctx.matrix, &RootedMultiDigraph { base, root })?;
        total += 1;
        if p >= threshold {
            hits += 1;
        }
        if !next_perm_full(&mut perm) {
            break;
        }
    }
    Ok(threshold * hits as f64 / total as f64)
}

fn next_perm_full(p: &mut [Vertex]) -> bool {
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

/// The statistics bound for one rooted even digraph class:
/// `S(U) <= n^{k-x} n^{-eps y/16} k² (3ek²)^{4k ln B / (eps ln n)}` with
/// `y = max(0, k - x - 4k ln B / (eps ln n))`, evaluated with its hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct StatBoundReport {
    pub k: u32,
    pub x: u32,
    pub s: f64,
    pub bound: f64,
    pub class_size: u64,
    /// `n^{eps/16} >= 5 e k²`
    pub hypothesis_met: bool,
    pub regularity_holds: bool,
    /// Comparison outcome when both hypotheses hold; informational otherwise.
    pub ok: Option<bool>,
}

pub fn statistics_bound_check(
    ctx: &WeightContext,
    g: &RootedMultiDigraph,
    mode: StatsMode,
) -> Result<StatBoundReport> {
    if !is_even_digraph(&g.base) {
        return Err(Error::Config(
            "statistics bound applies to rooted even digraphs".into(),
        ));
    }
    if ctx.n() < 2 {
        return Err(Error::Config("need n >= 2 for the bound".into()));
    }
    let n = ctx.n() as f64;
    // k for the bound comes from the digraph itself
    let k = (g.base.edge_count() / 2) as u32;
    let x = g.base.vertex_count() as u32;
    let kf = k as f64;
    let ctx_k = WeightContext { k, ..*ctx };
    let class = exact_rooted_class_statistics(&ctx_k, g)?;
    let exponent_b = 4.0 * kf * ctx.b.ln() / (ctx.eps * n.ln());
    let y = (kf - x as f64 - exponent_b).max(0.0);
    let bound = n.powf(kf - x as f64)
        * n.powf(-ctx.eps * y / 16.0)
        * kf
        * kf
        * (3.0 * std::f64::consts::E * kf * kf).powf(exponent_b);
    let hypothesis_met = n.powf(ctx.eps / 16.0) >= 5.0 * std::f64::consts::E * kf * kf;
    let regularity = check_regularity_event(&ctx_k, mode)?;
    let ok = if hypothesis_met && regularity.holds {
        Some(class.s <= bound * (1.0 + 1e-12))
    } else {
        None
    };
    Ok(StatBoundReport {
        k,
        x,
        s: class.s,
        bound,
        class_size: class.class_size,
        hypothesis_met,
        regularity_holds: regularity.holds,
        ok,
    })
}

/// One step of the induction along the double-cycle chain `U_i = U_{i-1} ∪ C_i`.
#[derive(Debug, Clone, Serialize)]
pub struct InductionStep {
    pub i: usize,
    /// Cycle length of `C_i`.
    pub m: u32,
    /// Common vertices of `C_i` with the union so far.
    pub r: u32,
    pub s_prev: f64,
    pub s_cur: f64,
    /// `3 e k² n^r s_prev` (for the first cycle: `k²`).
    pub bound: f64,
    pub ok: bool,
    /// Whether `m ln B <= (eps/4) r ln n`, activating the sharper bound.
    pub sharp_applies: bool,
    /// `5 e k² n^{r(1-eps/8)} s_prev`
    pub sharp_bound: f64,
    pub sharp_ok: Option<bool>,
}

/// Verifies the induction inequalities along the decomposition chain of a
/// rooted even digraph: the first (rooted) cycle's statistics stay below k²,
/// and every union step multiplies the statistics by at most `3ek²n^r` (or
/// the sharper factor when the cycle is light). Exact class statistics
/// throughout; meaningful on matrices where the regularity event holds.
pub fn induction_chain_check(
    ctx: &WeightContext,
    g: &RootedMultiDigraph,
) -> Result<Vec<InductionStep>> {
    let cycles = double_cycle_decomposition_rooted(g)
        .ok_or_else(|| Error::Config("induction chain requires a rooted even digraph".into()))?;
    let n = ctx.n() as f64;
    let k = (g.base.edge_count() / 2) as u32;
    let kf = k as f64;
    let ctx_k = WeightContext { k, ..*ctx };

    let mut union = cycles[0].doubled();
    let mut prev =
        exact_rooted_class_statistics(&ctx_k, &RootedMultiDigraph::new(union.clone(), g.root)?)?;
    let mut steps = Vec::new();
    steps.push(InductionStep {
        i: 0,
        m: cycles[0].len() as u32,
        r: 0,
        s_prev: 1.0,
        s_cur: prev.s,
        bound: kf * kf,
        ok: prev.s <= kf * kf * (1.0 + 1e-12),
        sharp_applies: false,
        sharp_bound: f64::NAN,
        sharp_ok: None,
    });
    for (i, c) in cycles.iter().enumerate().skip(1) {
        let r = c
            .vertices()
            .iter()
            .filter(|v| union.vertices().any(|u| u == **v))
            .count() as u32;
        union = union.union(&c.doubled());
        let cur = exact_rooted_class_statistics(
            &ctx_k,
            &RootedMultiDigraph::new(union.clone(), g.root)?,
        )?;
        let m = c.len() as u32;
        let bound = 3.0 * std::f64::consts::E * kf * kf * n.powi(r as i32) * prev.s;
        let sharp_applies = (m as f64) * ctx.b.ln() <= ctx.eps / 4.0 * r as f64 * n.ln();
        let sharp_bound = 5.0
            * std::f64::consts::E
            * kf
            * kf
            * n.powf(r as f64 * (1.0 - ctx.eps / 8.0))
            * prev.s;
        steps.push(InductionStep {
            i,
            m,
            r,
            s_prev: prev.s,
            s_cur: cur.s,
            bound,
            ok: cur.s <= bound * (1.0 + 1e-12),
            sharp_applies,
            sharp_bound,
            sharp_ok: if sharp_applies {
                Some(cur.s <= sharp_bound * (1.0 + 1e-12))
            } else {
                None
            },
        });
        prev = cur;
    }
    Ok(steps)
}

/// The dyadic sandwich around a >= 0:
/// `(1/2) Σ_h 2^h 1_{a >= 2^h} <= a <= 1 + 2 Σ_h 2^h 1_{a >= 2^h}`,
/// truncated at `h_cutoff`; the enclosure is checked whenever `a <= 2^H`.
pub fn dyadic_sandwich(a: f64, h_cutoff: u32) -> (f64, f64) {
    assert!(a >= 0.0);
    let mut sum = 0.0;
    for h in 0..=h_cutoff {
        let pow = (h as f64).exp2();
        if a >= pow {
            sum += pow;
        }
    }
    let lower = 0.5 * sum;
    let upper = 1.0 + 2.0 * sum;
    if a <= (h_cutoff as f64).exp2() {
        assert!(lower <= a && a <= upper, "sandwich violated at a = {a}");
    }
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::EntryDistribution;
    use crate::ensemble::{sample_matrix, Storage};

    fn ones(n: usize) -> CMatrix {
        let mut x = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                x.set(i, j, Complex64::new(1.0, 0.0));
            }
        }
        x
    }

    fn rademacher(n: usize, seed: u64) -> CMatrix {
        sample_matrix(&EntryDistribution::Rademacher, n, seed, Storage::Dense)
            .unwrap()
            .to_dense()
    }

    #[test]
    fn path_weight_basics() {
        let x = ones(4);
        let p = Path::from_slice(&[1, 2, 3, 2, 4]);
        assert_eq!(path_weight(&x, &p).unwrap(), Complex64::new(1.0, 0.0));

        let x = CMatrix::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]]);
        let p = Path::from_slice(&[1, 2, 1]);
        assert_eq!(path_weight(&x, &p).unwrap(), Complex64::new(6.0, 0.0));

        let x = rademacher(5, 3);
        for path in [&[1u32, 2, 3, 4, 5, 1][..], &[2, 2, 4, 1][..]] {
            let w = path_weight(&x, &Path::from_slice(path)).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }

        // out-of-range vertices are a configuration error
        assert!(path_weight(&x, &Path::from_slice(&[1, 6])).is_err());
    }

    #[test]
    fn digraph_weight_basics() {
        let mut x = CMatrix::zeros(2);
        x.set(0, 0, Complex64::new(3.0, 0.0));
        let loop_g = MultiDigraph::from_edges([(1, 1, 2)]);
        assert_eq!(digraph_weight(&x, &loop_g).unwrap(), 9.0);

        let fig = crate::digraph::fixtures::example_even_digraph();
        assert_eq!(digraph_weight(&ones(4), &fig).unwrap(), 1.0);

        let mut x = CMatrix::zeros(2);
        x.set(0, 1, Complex64::new(0.0, 2.0)); // |X_12| = 2
        x.set(1, 0, Complex64::new(0.5, 0.0));
        let g = MultiDigraph::from_edges([(1, 2, 2), (2, 1, 2)]);
        assert!((digraph_weight(&x, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rooted_weight_at_zero_root() {
        let mut x = CMatrix::zeros(2);
        x.set(0, 0, Complex64::new(3.0, 0.0));
        let g = RootedMultiDigraph::new(MultiDigraph::from_edges([(1, 1, 2)]), (1, 1)).unwrap();
        assert_eq!(rooted_weight(&x, &g).unwrap(), 1.0); // exponent 0

        x.set(0, 0, Complex64::new(0.0, 0.0));
        assert_eq!(rooted_weight(&x, &g).unwrap(), 1.0); // still finite

        let mut x = CMatrix::zeros(2);
        x.set(0, 0, Complex64::new(2.0, 0.0));
        let quad = RootedMultiDigraph::new(MultiDigraph::from_edges([(1, 1, 4)]), (1, 1)).unwrap();
        assert_eq!(rooted_weight(&x, &quad).unwrap(), 4.0); // 2^{4-2}
    }

    #[test]
    fn class_sizes() {
        assert_eq!(cycle_class_size(4, 2), 6.0); // binom(4,2) * 1!
        assert_eq!(cycle_class_size(30, 1), 30.0);
        assert_eq!(cycle_class_size(5, 3), 20.0); // binom(5,3) * 2!
        assert_eq!(cycle_class_size(3, 4), 0.0);
    }

    #[test]
    fn labeled_cycle_enumeration_matches_class_size() {
        for (n, m) in [(4u32, 2u32), (5, 3), (6, 4), (6, 1)] {
            let mut count = 0u64;
            let mut seen = std::collections::HashSet::new();
            for_each_labeled_cycle(n, m, |c| {
                count += 1;
                assert!(seen.insert(c.to_vec()), "duplicate cycle {c:?}");
                assert_eq!(c.len(), m as usize);
                let min = *c.iter().min().unwrap();
                assert_eq!(c[0], min);
            });
            assert_eq!(count as f64, cycle_class_size(n, m));
        }
    }

    #[test]
    fn rademacher_statistics_are_unit() {
        let x = rademacher(6, 9);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        for m in 1..=3 {
            for rooted in [false, true] {
                let rec = cycle_class_statistics(&ctx, m, rooted, StatsMode::Exact).unwrap();
                assert_eq!(rec.s_h[0], 1.0, "S_0 should be 1");
                for &s in &rec.s_h[1..] {
                    assert_eq!(s, 0.0);
                }
                assert_eq!(rec.s, 1.0);
                assert!(rec.exact);
            }
        }
    }

    #[test]
    fn zero_matrix_statistics() {
        let x = CMatrix::zeros(5);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let rec = cycle_class_statistics(&ctx, 2, false, StatsMode::Exact).unwrap();
        assert!(rec.s_h.iter().all(|&s| s == 0.0));
        assert_eq!(rec.s, 1.0); // S = max(1, .)
    }

    #[test]
    fn exact_mode_capacity_error() {
        let x = rademacher(40, 1);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 8).unwrap();
        // binom(40, 8) * 7! ~ 3.9e11
        match cycle_class_statistics(&ctx, 8, false, StatsMode::Exact) {
            Err(Error::Capacity(msg)) => assert!(msg.contains("Monte Carlo")),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_agrees_with_exact_on_small_class() {
        let x = sample_matrix(
            &EntryDistribution::SparseToy { q: 0.5, eps: 0.5 },
            8,
            77,
            Storage::Dense,
        )
        .unwrap()
        .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let exact = cycle_class_statistics(&ctx, 2, false, StatsMode::Exact).unwrap();
        let mc = cycle_class_statistics(
            &ctx,
            2,
            false,
            StatsMode::MonteCarlo {
                trials: 60_000,
                seed: 4,
            },
        )
        .unwrap();
        let errs = mc.mc_stderr.as_ref().unwrap();
        for h in 0..exact.s_h.len() {
            let tol = 4.0 * errs[h].max(1e-9);
            assert!(
                (exact.s_h[h] - mc.s_h[h]).abs() <= tol,
                "h = {h}: exact {} mc {} stderr {}",
                exact.s_h[h],
                mc.s_h[h],
                errs[h]
            );
        }
    }

    #[test]
    fn regularity_event_trivial_cases() {
        let x = rademacher(10, 2);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        let rep = check_regularity_event(&ctx, StatsMode::Exact).unwrap();
        assert!(rep.holds);
        for row in &rep.per_m {
            assert!((row.sum_plain - 1.0).abs() < 1e-12);
            assert!((row.sum_rooted - 1.0).abs() < 1e-12);
            assert!((row.sum_tail_weighted - 1.0).abs() < 1e-12);
        }
        assert!(rep.event_b);

        let zeros = CMatrix::zeros(10);
        let ctx = WeightContext::new(&zeros, 0.5, 1.0, 3).unwrap();
        let rep = check_regularity_event(&ctx, StatsMode::Exact).unwrap();
        assert!(rep.holds); // all sums zero
    }

    #[test]
    fn empirical_moments() {
        let x = rademacher(8, 5);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        for m in 1..=3 {
            for t in 1..=3 {
                let v = cycle_empirical_moment(&ctx, m, t as f64, StatsMode::Exact).unwrap();
                assert!((v - 1.0).abs() < 1e-12);
            }
        }

        // off-diagonal constant magnitude c: nu_m[p^t] = c^{2tm}
        let c = 1.5f64;
        let mut x = CMatrix::zeros(6);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    x.set(i, j, Complex64::new(c, 0.0));
                }
            }
        }
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        for (m, t) in [(2u32, 1u32), (2, 2), (3, 1)] {
            let v = cycle_empirical_moment(&ctx, m, t as f64, StatsMode::Exact).unwrap();
            let expect = c.powi((2 * t * m) as i32);
            assert!(
                (v - expect).abs() < 1e-10 * expect,
                "m={m} t={t}: {v} vs {expect}"
            );
        }
        // m = 1 classes are loops, zero on this matrix
        assert_eq!(
            cycle_empirical_moment(&ctx, 1, 1.0, StatsMode::Exact).unwrap(),
            0.0
        );
    }

    #[test]
    fn empirical_moment_matches_direct_enumeration() {
        // n = 4, m = 2, t = 1 on a seeded Gaussian sample: six labeled
        // 2-cycles, averaged by hand
        let x = sample_matrix(&EntryDistribution::GaussianComplex, 4, 11, Storage::Dense)
            .unwrap()
            .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let got = cycle_empirical_moment(&ctx, 2, 1.0, StatsMode::Exact).unwrap();
        let mut sum = 0.0;
        for a in 0..4 {
            for b in (a + 1)..4 {
                sum += x.get(a, b).norm_sqr() * x.get(b, a).norm_sqr();
            }
        }
        let expect = sum / 6.0;
        assert!((got - expect).abs() < 1e-12 * expect.max(1.0));
    }

    #[test]
    fn w_max_bound() {
        let x = rademacher(6, 8);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let rep = w_max_bound_check(&ctx, 2).unwrap();
        assert_eq!(rep.w_max, 1.0);
        assert!(rep.ok);
        assert!(rep.rhs >= 1.0);

        // single dominant entry
        let mut x = CMatrix::zeros(5);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    x.set(i, j, Complex64::new(1e-3, 0.0));
                }
            }
        }
        x.set(0, 1, Complex64::new(10.0, 0.0));
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        assert!(w_max_bound_check(&ctx, 2).unwrap().ok);

        let zeros = CMatrix::zeros(4);
        let ctx = WeightContext::new(&zeros, 0.5, 1.0, 2).unwrap();
        let rep = w_max_bound_check(&ctx, 2).unwrap();
        assert_eq!(rep.w_max, 0.0);
        assert!(rep.ok);
    }

    #[test]
    fn rooted_class_statistics_match_cycle_route() {
        // the rooted doubled 2-cycle class computed two ways: the dedicated
        // cycle enumeration and the generic injection enumeration
        let x = sample_matrix(
            &EntryDistribution::SparseToy { q: 0.6, eps: 0.5 },
            7,
            21,
            Storage::Dense,
        )
        .unwrap()
        .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let via_cycles = cycle_class_statistics(&ctx, 2, true, StatsMode::Exact).unwrap();
        let rep =
            RootedMultiDigraph::new(MultiDigraph::from_edges([(1, 2, 2), (2, 1, 2)]), (1, 2))
                .unwrap();
        let via_injections = exact_rooted_class_statistics(&ctx, &rep).unwrap();
        assert_eq!(
            via_injections.class_size as f64,
            cycle_class_size(7, 2) * 2.0
        );
        for (a, b) in via_cycles.s_h.iter().zip(via_injections.s_h.iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn permutation_identity() {
        // exact class statistics equal the exhaustive permutation average
        let x = sample_matrix(&EntryDistribution::GaussianReal, 6, 13, Storage::Dense)
            .unwrap()
            .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        for g in [
            RootedMultiDigraph::new(MultiDigraph::from_edges([(1, 2, 2), (2, 1, 2)]), (1, 2))
                .unwrap(),
            RootedMultiDigraph::new(
                MultiDigraph::from_edges([(1, 2, 2), (2, 3, 2), (3, 1, 2)]),
                (2, 3),
            )
            .unwrap(),
        ] {
            let class = exact_rooted_class_statistics(&ctx, &g).unwrap();
            for h in [0u32, 1, 3] {
                let via_perm = permutation_statistic(&ctx, &g, h).unwrap();
                let idx = h as usize;
                let exact = if idx < class.s_h.len() {
                    class.s_h[idx]
                } else {
                    0.0
                };
                assert!(
                    (via_perm - exact).abs() < 1e-12,
                    "h = {h}: {via_perm} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn moment_floor_per_instance() {
        // the truncated dyadic lower bound never exceeds the weight itself
        let x = sample_matrix(
            &EntryDistribution::ParetoSymmetric { alpha: 2.5 },
            6,
            3,
            Storage::Dense,
        )
        .unwrap()
        .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 2.0, 2).unwrap();
        let h = ctx.h_cutoff();
        for_each_labeled_cycle(6, 2, |c| {
            let p = doubled_cycle_weight(&x, c).min((h as f64).exp2());
            let (lower, _) = dyadic_sandwich(p, h);
            assert!(lower <= p + 1e-12);
        });
    }

    #[test]
    fn dyadic_sandwich_values() {
        let h = 20;
        assert_eq!(dyadic_sandwich(0.0, h), (0.0, 1.0));
        let (lo, up) = dyadic_sandwich(1.0, h);
        assert_eq!(lo, 0.5);
        assert_eq!(up, 3.0);
        let (lo, up) = dyadic_sandwich(2.5, h);
        assert_eq!(lo, 1.5);
        assert_eq!(up, 7.0);
    }

    #[test]
    fn statistics_bound_trivials() {
        let x = rademacher(8, 14);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 1).unwrap();
        // rooted doubled loop: k = 1, x = 1, B = 1 gives bound = k² = 1 >= S
        let g = RootedMultiDigraph::new(MultiDigraph::from_edges([(1, 1, 2)]), (1, 1)).unwrap();
        let rep = statistics_bound_check(&ctx, &g, StatsMode::Exact).unwrap();
        assert_eq!(rep.k, 1);
        assert_eq!(rep.x, 1);
        assert!(rep.s <= 1.0 + 1e-12);
        assert!((rep.bound - 1.0).abs() < 1e-12);
        if rep.hypothesis_met && rep.regularity_holds {
            assert_eq!(rep.ok, Some(true));
        }

        // the worked four-vertex example, rooted at (1,2), on a Rademacher
        // matrix: S = 1 and the bound is far above it
        let fig = crate::digraph::fixtures::example_even_digraph();
        let g = RootedMultiDigraph::new(fig, (1, 2)).unwrap();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 6).unwrap();
        let rep = statistics_bound_check(&ctx, &g, StatsMode::Exact).unwrap();
        assert_eq!(rep.k, 6);
        assert_eq!(rep.x, 4);
        assert_eq!(rep.s, 1.0);
        assert!(rep.bound >= 1.0);
        assert!(rep.regularity_holds);
    }

    #[test]
    fn induction_chain_on_the_example() {
        let x = sample_matrix(
            &EntryDistribution::SparseToy { q: 0.5, eps: 0.5 },
            6,
            31,
            Storage::Dense,
        )
        .unwrap()
        .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 6).unwrap();
        let fig = crate::digraph::fixtures::example_even_digraph();
        let g = RootedMultiDigraph::new(fig, (1, 2)).unwrap();
        let steps = induction_chain_check(&ctx, &g).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps[0].ok, "first cycle statistics exceed k²: {steps:?}");
        for s in &steps[1..] {
            assert!(s.r >= 1);
            assert!(s.ok, "induction step violated: {s:?}");
            // B = 1 makes the sharper case applicable at every step
            assert!(s.sharp_applies);
            assert_eq!(s.sharp_ok, Some(true), "sharp step violated: {s:?}");
        }
    }

    #[test]
    fn truncation_depth() {
        let x = CMatrix::zeros(16);
        let ctx = WeightContext::new(&x, 0.5, 1.0, 3).unwrap();
        assert_eq!(ctx.h_cutoff(), 48); // 4 * 3 * log2(16)
    }
}

#[cfg(test)]
mod serialization_tests {
    use super::*;
    use crate::dist::EntryDistribution;
    use crate::ensemble::{sample_matrix, Storage};

    #[test]
    fn records_and_reports_serialize_to_json() {
        let x = sample_matrix(&EntryDistribution::Rademacher, 6, 1, Storage::Dense)
            .unwrap()
            .to_dense();
        let ctx = WeightContext::new(&x, 0.5, 1.0, 2).unwrap();
        let rec = cycle_class_statistics(&ctx, 2, true, StatsMode::Exact).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"class_key\""));
        assert!(json.contains("\"s_h\""));

        let rep = check_regularity_event(&ctx, StatsMode::Exact).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"sum_tail_weighted\""));
        assert!(json.contains("\"holds\""));
    }
}
