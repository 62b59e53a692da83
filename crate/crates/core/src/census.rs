//! Exhaustive labelled counting: H-free graphs, r-partite graphs, and the
//! derived ratios. Enumeration walks the unordered vertex pairs in
//! lexicographic order with base-3 (oriented) or base-4 (digraph) digits,
//! maintaining H-freeness incrementally and aborting a subtree on the first
//! completed copy. The space is statically partitioned by the leading pair
//! digits across workers; per-worker results merge associatively.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{Budget, Ticker};
use crate::containment::{naive_contains, MaskAdj, Matcher};
use crate::digraph::{turan_number, Digraph, GraphKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Cap on base^C(n,2), the number of graphs enumerated.
    pub max_states: u128,
    pub budget: Budget,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            max_states: 20_000_000,
            budget: Budget::unlimited(),
        }
    }
}

pub(crate) fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut ps = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            ps.push((u, v));
        }
    }
    ps
}

/// Largest n whose full enumeration fits the state cap for this kind.
pub fn max_feasible_n(kind: GraphKind, max_states: u128) -> usize {
    let base = kind.pair_states() as u128;
    (0usize..=16)
        .take_while(|&n| {
            let pairs = (n * n.saturating_sub(1) / 2) as u32;
            base.checked_pow(pairs).is_some_and(|s| s <= max_states)
        })
        .last()
        .unwrap_or(0)
}

/// Incremental enumeration state: the graph plus its transposed row masks.
pub(crate) struct EnumCtx<'a> {
    n: usize,
    base: usize,
    pairs: &'a [(usize, usize)],
    matcher: &'a Matcher,
    g: Digraph,
    inn: Vec<u64>,
}

impl<'a> EnumCtx<'a> {
    pub(crate) fn new(n: usize, kind: GraphKind, pairs: &'a [(usize, usize)], matcher: &'a Matcher) -> Self {
        EnumCtx {
            n,
            base: kind.pair_states(),
            pairs,
            matcher,
            g: Digraph::empty(n),
            inn: vec![0; n],
        }
    }

    pub(crate) fn graph(&self) -> &Digraph {
        &self.g
    }

    #[inline]
    fn add(&mut self, u: usize, v: usize) {
        self.g.add_arc(u, v);
        self.inn[v] |= 1 << u;
    }

    #[inline]
    fn remove(&mut self, u: usize, v: usize) {
        self.g.remove_arc(u, v);
        self.inn[v] &= !(1u64 << u);
    }

    #[inline]
    fn creates_copy(&self, u: usize, v: usize) -> bool {
        let adj = MaskAdj {
            n: self.n,
            out: self.g.rows_words1(),
            inn: &self.inn,
        };
        self.matcher.embeds_through_arc_masks(adj, u, v)
    }

    /// Apply pair state; false (with clean rollback) if a copy of H forms.
    pub(crate) fn apply(&mut self, idx: usize, state: usize) -> bool {
        let (u, v) = self.pairs[idx];
        match state {
            0 => true,
            1 => {
                self.add(u, v);
                if self.creates_copy(u, v) {
                    self.remove(u, v);
                    false
                } else {
                    true
                }
            }
            2 => {
                self.add(v, u);
                if self.creates_copy(v, u) {
                    self.remove(v, u);
                    false
                } else {
                    true
                }
            }
            _ => {
                self.add(u, v);
                self.add(v, u);
                if self.creates_copy(u, v) || self.creates_copy(v, u) {
                    self.remove(u, v);
                    self.remove(v, u);
                    false
                } else {
                    true
                }
            }
        }
    }

    pub(crate) fn unapply(&mut self, idx: usize, state: usize) {
        let (u, v) = self.pairs[idx];
        match state {
            0 => {}
            1 => self.remove(u, v),
            2 => self.remove(v, u),
            _ => {
                self.remove(u, v);
                self.remove(v, u);
            }
        }
    }
}

/// Fold a visitor over every H-free graph of the kind on n labelled
/// vertices. Workers own disjoint digit prefixes; `merge` combines their
/// results in prefix order, so any associative, order-insensitive visitor
/// yields deterministic output.
pub(crate) fn h_free_fold<R, I, V, M>(
    n: usize,
    h: &Digraph,
    kind: GraphKind,
    budget: &Budget,
    init: I,
    visit: V,
    merge: M,
) -> Result<R>
where
    R: Send,
    I: Fn() -> R + Sync,
    V: Fn(&mut R, &Digraph) -> Result<()> + Sync,
    M: Fn(R, R) -> R,
{
    assert!(n <= 64);
    if h.arc_count() == 0 && h.n() <= n {
        // every graph embeds an arcless pattern that fits: nothing is H-free
        return Ok(init());
    }
    let pairs = pair_list(n);
    let matcher = Matcher::new(h);

    // sequential core over states of pairs[depth..]
    fn dfs<R>(
        ctx: &mut EnumCtx,
        depth: usize,
        acc: &mut R,
        visit: &dyn Fn(&mut R, &Digraph) -> Result<()>,
        ticker: &mut Ticker,
    ) -> Result<()> {
        if depth == ctx.pairs.len() {
            ticker.tick()?;
            return visit(acc, &ctx.g);
        }
        for state in 0..ctx.base {
            if ctx.apply(depth, state) {
                let res = dfs(ctx, depth + 1, acc, visit, ticker);
                ctx.unapply(depth, state);
                res?;
            }
        }
        Ok(())
    }

    let base = kind.pair_states();
    // split the space by leading digits once there is enough of it
    let mut split_depth = 0;
    let mut prefix_count = 1u64;
    while split_depth < pairs.len() && prefix_count < 256 {
        prefix_count *= base as u64;
        split_depth += 1;
    }
    if pairs.len() <= 6 || split_depth == 0 {
        let mut acc = init();
        let mut ctx = EnumCtx::new(n, kind, &pairs, &matcher);
        let mut ticker = Ticker::new(budget, "labelled enumeration");
        dfs(&mut ctx, 0, &mut acc, &visit, &mut ticker)?;
        return Ok(acc);
    }

    let partials: Vec<Result<Option<R>>> = (0..prefix_count)
        .into_par_iter()
        .map(|prefix| {
            let mut ctx = EnumCtx::new(n, kind, &pairs, &matcher);
            let mut digits = vec![0usize; split_depth];
            let mut p = prefix;
            for d in digits.iter_mut() {
                *d = (p % base as u64) as usize;
                p /= base as u64;
            }
            for (i, &d) in digits.iter().enumerate() {
                if !ctx.apply(i, d) {
                    // prefix already contains H: skip the whole subtree
                    return Ok(None);
                }
            }
            let mut acc = init();
            let mut ticker = Ticker::new(budget, "labelled enumeration");
            dfs(&mut ctx, split_depth, &mut acc, &visit, &mut ticker)?;
            Ok(Some(acc))
        })
        .collect();

    let mut out = init();
    for part in partials {
        if let Some(acc) = part? {
            out = merge(out, acc);
        }
    }
    Ok(out)
}

/// Exact labelled counts for one n.
#[derive(Clone, Debug, Serialize)]
pub struct CensusRecord {
    pub n: usize,
    pub kind: GraphKind,
    pub pattern: String,
    pub r: usize,
    /// Labelled H-free graphs of the kind.
    pub f_count: BigUint,
    /// Labelled graphs of the kind whose underlying graph is r-colorable.
    pub t_count: BigUint,
    /// Per requested alpha: H-free graphs whose exact optimal partition has
    /// at most alpha*n^2 non-crossing arcs.
    pub near_partite: Vec<(f64, BigUint)>,
    pub ratio: f64,
    /// Whether every r-partite graph is H-free here (underlying chromatic
    /// number of H exceeds r), which forces t <= f.
    pub rpartite_all_h_free: bool,
}

impl CensusRecord {
    pub fn csv_header(&self) -> String {
        let alphas: String = self
            .near_partite
            .iter()
            .map(|(a, _)| format!(",near_partite@{a}"))
            .collect();
        format!("n,kind,pattern,f,t,ratio{alphas}")
    }

    pub fn csv_row(&self) -> String {
        let near: String = self
            .near_partite
            .iter()
            .map(|(_, c)| format!(",{c}"))
            .collect();
        format!(
            "{},{},{},{},{},{}{near}",
            self.n,
            self.kind,
            self.pattern,
            self.f_count,
            self.t_count,
            crate::weight::format_sig10(self.ratio)
        )
    }
}

fn budget_guard(n: usize, kind: GraphKind, opts: &CensusOptions) -> Result<()> {
    if n > 8 {
        return Err(Error::BudgetExceeded(format!(
            "census for n={n} is out of reach; the largest feasible n for {kind} mode \
             under the current cap is {}",
            max_feasible_n(kind, opts.max_states)
        )));
    }
    let pairs = (n * (n - 1) / 2) as u32;
    let states = (kind.pair_states() as u128).checked_pow(pairs);
    if states.is_none() || states.unwrap() > opts.max_states {
        return Err(Error::BudgetExceeded(format!(
            "census for n={n} in {kind} mode needs {} states; the cap admits n <= {}",
            states.map_or("too many".to_string(), |s| s.to_string()),
            max_feasible_n(kind, opts.max_states)
        )));
    }
    Ok(())
}

/// Minimum non-crossing arcs over all <= r classes, on an n^2-bit arc mask.
/// Restricted-growth enumeration with branch-and-bound.
fn min_noncrossing_bits(arcs: u64, n: usize, r: usize) -> u32 {
    debug_assert!(n * n <= 64);
    fn rec(
        arcs: u64,
        n: usize,
        r: usize,
        depth: usize,
        used: usize,
        cost: u32,
        class_masks: &mut [u64; 8],
        assign: &mut [usize; 8],
        best: &mut u32,
    ) {
        if cost >= *best {
            return;
        }
        if depth == n {
            *best = cost;
            return;
        }
        let limit = r.min(used + 1);
        for c in 0..limit {
            // arcs between `depth` and class c members, both directions
            let mut between = 0u64;
            let mut m = class_masks[c];
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                m &= m - 1;
                between |= 1 << (depth * n + j);
                between |= 1 << (j * n + depth);
            }
            let delta = (arcs & between).count_ones();
            class_masks[c] |= 1 << depth;
            assign[depth] = c;
            rec(
                arcs,
                n,
                r,
                depth + 1,
                used.max(c + 1),
                cost + delta,
                class_masks,
                assign,
                best,
            );
            class_masks[c] &= !(1u64 << depth);
        }
    }
    if n == 0 {
        return 0;
    }
    let mut best = u32::MAX;
    let mut class_masks = [0u64; 8];
    let mut assign = [0usize; 8];
    rec(
        arcs, n, r, 0, 0, 0, &mut class_masks, &mut assign, &mut best,
    );
    best
}

fn arcs_as_bits(g: &Digraph) -> u64 {
    let n = g.n();
    let mut bits = 0u64;
    for (u, v) in g.arcs() {
        bits |= 1 << (u * n + v);
    }
    bits
}

/// Is the undirected graph given by `pair adjacency` r-colorable?
fn r_colorable(n: usize, adj: &[u64], r: usize) -> bool {
    // adj[v] = bitmask of neighbours of v
    fn rec(n: usize, adj: &[u64], r: usize, v: usize, used: usize, colors: &mut [usize]) -> bool {
        if v == n {
            return true;
        }
        let limit = r.min(used + 1);
        for c in 0..limit {
            let clash = (0..v).any(|j| colors[j] == c && adj[v] >> j & 1 == 1);
            if !clash {
                colors[v] = c;
                if rec(n, adj, r, v + 1, used.max(c + 1), colors) {
                    return true;
                }
            }
        }
        false
    }
    let mut colors = vec![0usize; n];
    rec(n, adj, r, 0, 0, &mut colors)
}

/// Exact census by full enumeration: f (H-free count), t (r-colorable
/// underlying count), and near-partite counts at the given alphas.
pub fn labelled_census(
    n: usize,
    h: &Digraph,
    h_name: &str,
    r: usize,
    kind: GraphKind,
    alphas: &[f64],
    opts: &CensusOptions,
) -> Result<CensusRecord> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    budget_guard(n, kind, opts)?;

    type Acc = (u64, Vec<u64>);
    let thresholds: Vec<f64> = alphas.iter().map(|a| a * (n * n) as f64 + 1e-9).collect();
    let (f_count, near): Acc = h_free_fold(
        n,
        h,
        kind,
        &opts.budget,
        || (0u64, vec![0u64; alphas.len()]),
        |acc: &mut Acc, g: &Digraph| {
            acc.0 += 1;
            if !thresholds.is_empty() {
                let min_nc = min_noncrossing_bits(arcs_as_bits(g), n, r);
                for (k, thr) in thresholds.iter().enumerate() {
                    if (min_nc as f64) <= *thr {
                        acc.1[k] += 1;
                    }
                }
            }
            Ok(())
        },
        |mut a: Acc, b: Acc| {
            a.0 += b.0;
            for (x, y) in a.1.iter_mut().zip(b.1) {
                *x += y;
            }
            a
        },
    )?;

    let t_count = count_r_colorable(n, r, kind, &opts.budget)?;

    // does forbidding H leave all r-partite graphs admissible?
    let h_underlying: Vec<u64> = {
        let mut adj = vec![0u64; h.n()];
        for (u, v) in h.underlying_edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    };
    let rpartite_all_h_free = !r_colorable(h.n(), &h_underlying, r);

    let ratio = f_count as f64 / t_count as f64;
    Ok(CensusRecord {
        n,
        kind,
        pattern: h_name.to_string(),
        r,
        f_count: BigUint::from(f_count),
        t_count: BigUint::from(t_count),
        near_partite: alphas
            .iter()
            .zip(near)
            .map(|(&a, c)| (a, BigUint::from(c)))
            .collect(),
        ratio,
        rpartite_all_h_free,
    })
}

/// Count graphs of the kind whose underlying graph is r-colorable, by
/// summing (states per adjacent pair)^edges over r-colorable edge subsets.
fn count_r_colorable(n: usize, r: usize, kind: GraphKind, budget: &Budget) -> Result<u64> {
    let pairs = pair_list(n);
    let per_edge = (kind.pair_states() - 1) as u64; // fwd/bwd (+both)
    let mut powers = vec![1u64; pairs.len() + 1];
    for i in 1..=pairs.len() {
        powers[i] = powers[i - 1] * per_edge;
    }
    let mut total = 0u64;
    let mut adj = vec![0u64; n];
    let mut ticker = Ticker::new(budget, "r-partite count");
    // recursively decide each pair: absent, or present (edge)
    fn rec(
        pairs: &[(usize, usize)],
        idx: usize,
        edges: usize,
        n: usize,
        r: usize,
        adj: &mut [u64],
        powers: &[u64],
        total: &mut u64,
        ticker: &mut Ticker,
    ) -> Result<()> {
        ticker.tick()?;
        if idx == pairs.len() {
            *total += powers[edges];
            return Ok(());
        }
        // absent
        rec(pairs, idx + 1, edges, n, r, adj, powers, total, ticker)?;
        // present, if still colorable
        let (u, v) = pairs[idx];
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        if r_colorable(n, adj, r) {
            rec(pairs, idx + 1, edges + 1, n, r, adj, powers, total, ticker)?;
        }
        adj[u] &= !(1u64 << v);
        adj[v] &= !(1u64 << u);
        Ok(())
    }
    rec(
        &pairs, 0, 0, n, r, &mut adj, &powers, &mut total, &mut ticker,
    )?;
    Ok(total)
}

/// Fully naive reference census: enumerate every digit vector, materialise
/// the graph, and use the permutation-based containment check and brute
/// r^n colorings. Shares nothing with the optimized path.
pub fn naive_census(
    n: usize,
    h: &Digraph,
    h_name: &str,
    r: usize,
    kind: GraphKind,
    alphas: &[f64],
) -> Result<CensusRecord> {
    if n > 4 {
        return Err(Error::BudgetExceeded(
            "the naive census is for n <= 4 cross-checks".into(),
        ));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let pairs = pair_list(n);
    let base = kind.pair_states();
    let mut f = 0u64;
    let mut t = 0u64;
    let mut near = vec![0u64; alphas.len()];
    let states = (base as u64).pow(pairs.len() as u32);
    for code in 0..states {
        let mut g = Digraph::empty(n);
        let mut c = code;
        for &(u, v) in &pairs {
            let s = (c % base as u64) as usize;
            c /= base as u64;
            if s == 1 || s == 3 {
                g.add_arc(u, v);
            }
            if s == 2 || s == 3 {
                g.add_arc(v, u);
            }
        }
        let free = !naive_contains(&g, h);
        if free {
            f += 1;
        }
        // brute force over all r^n assignments
        let mut min_internal = usize::MAX;
        let assigns = (r as u64).pow(n as u32);
        for acode in 0..assigns {
            let mut assign = vec![0usize; n];
            let mut a = acode;
            for slot in assign.iter_mut() {
                *slot = (a % r as u64) as usize;
                a /= r as u64;
            }
            let internal = g.arcs().filter(|&(u, v)| assign[u] == assign[v]).count();
            min_internal = min_internal.min(internal);
        }
        if min_internal == 0 {
            t += 1;
        }
        if free {
            for (k, alpha) in alphas.iter().enumerate() {
                if min_internal as f64 <= alpha * (n * n) as f64 + 1e-9 {
                    near[k] += 1;
                }
            }
        }
    }
    Ok(CensusRecord {
        n,
        kind,
        pattern: h_name.to_string(),
        r,
        f_count: BigUint::from(f),
        t_count: BigUint::from(t),
        near_partite: alphas
            .iter()
            .zip(near)
            .map(|(&a, c)| (a, BigUint::from(c)))
            .collect(),
        ratio: f as f64 / t as f64,
        rpartite_all_h_free: false,
    })
}

/// Every H-free graph of the kind on n labelled vertices, in a fixed
/// deterministic order.
pub fn labelled_free_graphs(
    n: usize,
    h: &Digraph,
    kind: GraphKind,
    opts: &CensusOptions,
) -> Result<Vec<Digraph>> {
    budget_guard(n, kind, opts)?;
    let mut graphs = h_free_fold(
        n,
        h,
        kind,
        &opts.budget,
        Vec::new,
        |acc: &mut Vec<Digraph>, g: &Digraph| {
            acc.push(g.clone());
            Ok(())
        },
        |mut a: Vec<Digraph>, mut b: Vec<Digraph>| {
            a.append(&mut b);
            a
        },
    )?;
    graphs.sort_by_key(|g| g.to_line());
    Ok(graphs)
}

/// Lower bound r^n * w^{t_r(n)} / (2 * r! * n^{r-1}) on the number of
/// r-partite graphs, rounded up; w = 3 for oriented graphs, 4 for digraphs.
pub fn rpartite_lower_bound(n: usize, r: usize, kind: GraphKind) -> Result<BigUint> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and r >= 1".into()));
    }
    let w: u32 = match kind {
        GraphKind::Oriented => 3,
        GraphKind::Digraph => 4,
    };
    let num = BigUint::from(r).pow(n as u32) * BigUint::from(w).pow(turan_number(n, r)? as u32);
    let mut factorial = BigUint::one();
    for k in 2..=r {
        factorial *= BigUint::from(k);
    }
    let den = BigUint::from(2u32) * factorial * BigUint::from(n).pow(r as u32 - 1);
    // ceil division
    Ok((num + &den - BigUint::one()) / den)
}

/// Base-2 binary entropy with H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "entropy argument {p} outside [0, 1]"
        )));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

#[derive(Clone, Debug, Serialize)]
pub struct TrendRow {
    pub n: usize,
    pub f: BigUint,
    pub t: BigUint,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrendReport {
    pub rows: Vec<TrendRow>,
    /// Observational: the finite-n trend carries no asymptotic claim.
    pub ratio_nonincreasing: bool,
}

/// f, t, and f/t across a range of n. The monotonicity flag is reported,
/// never asserted.
pub fn ratio_trend(
    ns: impl IntoIterator<Item = usize>,
    h: &Digraph,
    h_name: &str,
    r: usize,
    kind: GraphKind,
    opts: &CensusOptions,
) -> Result<TrendReport> {
    let mut rows = Vec::new();
    for n in ns {
        let rec = labelled_census(n, h, h_name, r, kind, &[], opts)?;
        rows.push(TrendRow {
            n,
            f: rec.f_count,
            t: rec.t_count,
            ratio: rec.ratio,
        });
    }
    let ratio_nonincreasing = rows.windows(2).all(|w| w[1].ratio <= w[0].ratio + 1e-12);
    Ok(TrendReport {
        rows,
        ratio_nonincreasing,
    })
}

/// Quick check that f/t are finite and sane for a record.
pub fn ratios_finite(rec: &CensusRecord) -> bool {
    !rec.t_count.is_zero() && rec.ratio.is_finite() && rec.ratio > 0.0
}

#[allow(unused_imports)]
pub(crate) use self::fold_reexport::*;
mod fold_reexport {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{blow_up, complete_digraph, transitive_tournament};

    fn t3() -> Digraph {
        transitive_tournament(3).unwrap()
    }

    #[test]
    fn oriented_t3_census_small() {
        let opts = CensusOptions::default();
        let rec = labelled_census(3, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(21u32));
        assert_eq!(rec.t_count, BigUint::from(19u32));
        assert!((rec.ratio - 21.0 / 19.0).abs() < 1e-12);
        assert!(rec.rpartite_all_h_free);

        let rec = labelled_census(2, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(3u32));
        assert_eq!(rec.t_count, BigUint::from(3u32));
        assert_eq!(rec.ratio, 1.0);
    }

    #[test]
    fn digraph_t3_census_small() {
        let opts = CensusOptions::default();
        let rec = labelled_census(3, &t3(), "T_3", 2, GraphKind::Digraph, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(39u32));
        assert_eq!(rec.t_count, BigUint::from(37u32));
        let rec = labelled_census(4, &t3(), "T_3", 2, GraphKind::Digraph, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(921u32));
        assert_eq!(rec.t_count, BigUint::from(829u32));
    }

    #[test]
    fn oriented_larger_goldens() {
        let opts = CensusOptions::default();
        let rec = labelled_census(4, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(317u32));
        assert_eq!(rec.t_count, BigUint::from(249u32));
        let rec = labelled_census(5, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(9735u32));
        assert_eq!(rec.t_count, BigUint::from(5881u32));
    }

    #[test]
    fn dual_enumerator_agreement_small() {
        let opts = CensusOptions::default();
        let alphas = [0.0, 0.1, 1.0];
        for kind in [GraphKind::Oriented, GraphKind::Digraph] {
            for n in 2..=4 {
                let fast =
                    labelled_census(n, &t3(), "T_3", 2, kind, &alphas, &opts).unwrap();
                let naive = naive_census(n, &t3(), "T_3", 2, kind, &alphas).unwrap();
                assert_eq!(fast.f_count, naive.f_count, "f n={n} {kind}");
                assert_eq!(fast.t_count, naive.t_count, "t n={n} {kind}");
                assert_eq!(fast.near_partite, naive.near_partite, "near n={n} {kind}");
            }
        }
    }

    #[test]
    fn near_partite_monotone_and_saturating() {
        let opts = CensusOptions::default();
        let alphas = [0.0, 0.05, 0.2, 1.0];
        let rec =
            labelled_census(4, &t3(), "T_3", 2, GraphKind::Digraph, &alphas, &opts).unwrap();
        for w in rec.near_partite.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }
        assert_eq!(rec.near_partite.last().unwrap().1, rec.f_count);
        // alpha = 0 counts the H-free r-partite graphs
        assert!(rec.near_partite[0].1 <= rec.t_count);
    }

    #[test]
    fn pattern_too_large_for_host_makes_everything_free() {
        let opts = CensusOptions::default();
        let t32 = blow_up(&t3(), 2).unwrap(); // 6 vertices
        let rec =
            labelled_census(4, &t32, "T_3^2", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::from(3u32).pow(6)); // all 3^6 graphs
    }

    #[test]
    fn arcless_pattern_leaves_no_free_graphs() {
        let opts = CensusOptions::default();
        let arcless = Digraph::empty(2);
        let rec =
            labelled_census(3, &arcless, "E_2", 2, GraphKind::Oriented, &[], &opts).unwrap();
        assert_eq!(rec.f_count, BigUint::zero());
    }

    #[test]
    fn budget_rejection_suggests_feasible_n() {
        let opts = CensusOptions::default();
        let err = labelled_census(7, &t3(), "T_3", 2, GraphKind::Digraph, &[], &opts)
            .err()
            .unwrap();
        let msg = err.to_string();
        assert!(msg.contains("n <= 5"), "got: {msg}");
        assert_eq!(max_feasible_n(GraphKind::Digraph, opts.max_states), 5);
        assert_eq!(max_feasible_n(GraphKind::Oriented, opts.max_states), 6);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(
            rpartite_lower_bound(3, 2, GraphKind::Oriented).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            rpartite_lower_bound(2, 2, GraphKind::Oriented).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            rpartite_lower_bound(5, 1, GraphKind::Oriented).unwrap(),
            BigUint::one()
        );
        assert!(rpartite_lower_bound(0, 2, GraphKind::Oriented).is_err());
    }

    #[test]
    fn lower_bound_below_census_t() {
        let opts = CensusOptions::default();
        for n in 2..=5 {
            let rec =
                labelled_census(n, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts).unwrap();
            let lb = rpartite_lower_bound(n, 2, GraphKind::Oriented).unwrap();
            assert!(lb <= rec.t_count, "n={n}: {lb} > {}", rec.t_count);
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.11).unwrap() - 0.499915958164528).abs() < 1e-12);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn trend_rows() {
        let opts = CensusOptions::default();
        let report =
            ratio_trend(2..=4, &t3(), "T_3", 2, GraphKind::Oriented, &opts).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows[1].f, BigUint::from(21u32));
        assert!((report.rows[1].ratio - 21.0 / 19.0).abs() < 1e-12);
        for row in &report.rows {
            assert!(row.ratio.is_finite() && row.ratio >= 1.0);
        }
        // v(H) > n keeps every graph free: f = 3^10 at n=5
        let t32 = blow_up(&t3(), 2).unwrap();
        let report =
            ratio_trend([5], &t32, "T_3^2", 2, GraphKind::Oriented, &opts).unwrap();
        assert_eq!(report.rows[0].f, BigUint::from(59049u32));
        assert!(report.rows[0].t < report.rows[0].f);
        assert!(report.rows[0].ratio > 1.0);
    }

    #[test]
    fn oriented_counts_below_digraph_counts() {
        let opts = CensusOptions::default();
        for n in 2..=4 {
            let o = labelled_census(n, &t3(), "T_3", 2, GraphKind::Oriented, &[], &opts)
                .unwrap();
            let d = labelled_census(n, &t3(), "T_3", 2, GraphKind::Digraph, &[], &opts)
                .unwrap();
            assert!(o.f_count <= d.f_count);
        }
    }

    #[test]
    fn free_graph_listing() {
        let opts = CensusOptions::default();
        let graphs =
            labelled_free_graphs(3, &t3(), GraphKind::Digraph, &opts).unwrap();
        assert_eq!(graphs.len(), 39);
        // all distinct, all free, sorted
        for w in graphs.windows(2) {
            assert!(w[0].to_line() < w[1].to_line());
        }
        for g in &graphs {
            assert!(!naive_contains(g, &t3()));
        }
        // and the complete digraph on 3 vertices is not among them
        assert!(!graphs.contains(&complete_digraph(3)));
    }
}
