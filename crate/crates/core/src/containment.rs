//! Subdigraph containment (non-induced), copy counting, pattern statistics,
//! and a greedy cleaner that deletes arcs until a forbidden pattern is gone.
//!
//! The matcher precomputes a vertex order and per-level constraint masks for
//! the pattern H, then backtracks over G with bitmask candidate pruning. For
//! n <= 64 all candidate sets are single machine words; a plain backtracking
//! path covers larger hosts.

use num_rational::Rational64;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::weight::WeightParam;

const MAX_PATTERN_VERTICES: usize = 16;

/// One matching schedule: H-vertices in match order plus, per level, the
/// earlier levels it must send arcs to / receive arcs from.
struct Plan {
    order: Vec<usize>,
    out_to_prev: Vec<u64>,
    in_from_prev: Vec<u64>,
    outdeg: Vec<u32>,
    indeg: Vec<u32>,
}

impl Plan {
    fn new(h: &Digraph, first: &[usize]) -> Plan {
        let hn = h.n();
        let mut order: Vec<usize> = first.to_vec();
        let mut rest: Vec<usize> = (0..hn).filter(|v| !first.contains(v)).collect();
        // descending total degree, ties by label
        rest.sort_by_key(|&v| (std::cmp::Reverse(h.out_degree(v) + h.in_degree(v)), v));
        order.extend(rest);
        let mut pos = vec![0usize; hn];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut out_to_prev = vec![0u64; hn];
        let mut in_from_prev = vec![0u64; hn];
        for (u, v) in h.arcs() {
            let (pu, pv) = (pos[u], pos[v]);
            if pv < pu {
                out_to_prev[pu] |= 1 << pv;
            } else {
                in_from_prev[pv] |= 1 << pu;
            }
        }
        Plan {
            outdeg: order.iter().map(|&v| h.out_degree(v) as u32).collect(),
            indeg: order.iter().map(|&v| h.in_degree(v) as u32).collect(),
            order,
            out_to_prev,
            in_from_prev,
        }
    }
}

/// Word-mask adjacency view of a host graph with n <= 64 vertices.
/// Enumeration kernels maintain these arrays incrementally.
#[derive(Clone, Copy)]
pub(crate) struct MaskAdj<'a> {
    pub n: usize,
    pub out: &'a [u64],
    pub inn: &'a [u64],
}

impl<'a> MaskAdj<'a> {
    fn full(&self) -> u64 {
        if self.n >= 64 {
            !0
        } else {
            (1u64 << self.n) - 1
        }
    }
}

pub(crate) fn transpose_masks(g: &Digraph) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(g.n() <= 64);
    let n = g.n();
    let mut out = vec![0u64; n];
    let mut inn = vec![0u64; n];
    for u in 0..n {
        out[u] = g.row(u)[0];
        for v in 0..n {
            if g.has_arc(u, v) {
                inn[v] |= 1 << u;
            }
        }
    }
    (out, inn)
}

/// Reusable matcher for one pattern H.
pub struct Matcher {
    h: Digraph,
    base: Plan,
    anchored: Vec<((usize, usize), Plan)>,
}

impl Matcher {
    pub fn new(h: &Digraph) -> Matcher {
        assert!(h.n() <= 64, "pattern too large");
        let anchored = h
            .arcs()
            .map(|(x, y)| ((x, y), Plan::new(h, &[x, y])))
            .collect();
        Matcher {
            h: h.clone(),
            base: Plan::new(h, &[]),
            anchored,
        }
    }

    pub fn pattern(&self) -> &Digraph {
        &self.h
    }

    /// Backtracking core. `forced[k]` pins level k to one host vertex.
    /// `visit` gets phi in H-vertex order and returns true to stop.
    fn run_masks(
        &self,
        plan: &Plan,
        g: MaskAdj,
        forced: &[usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let hn = self.h.n();
        if hn > g.n {
            return false;
        }
        let mut phi = [0usize; 64];
        let mut phi_h = vec![0usize; hn];
        rec_masks(plan, g, forced, 0, hn, &mut phi, 0, &mut |phi| {
            for (k, &hv) in plan.order.iter().enumerate() {
                phi_h[hv] = phi[k];
            }
            visit(&phi_h)
        })
    }

    fn run_general(
        &self,
        plan: &Plan,
        g: &Digraph,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let hn = self.h.n();
        if hn > g.n() {
            return false;
        }
        let mut phi = vec![0usize; hn];
        let mut used = vec![false; g.n()];
        let mut phi_h = vec![0usize; hn];
        rec_general(plan, g, 0, hn, &mut phi, &mut used, &mut |phi| {
            for (k, &hv) in plan.order.iter().enumerate() {
                phi_h[hv] = phi[k];
            }
            visit(&phi_h)
        })
    }

    /// First embedding found, as a map from H-vertex to G-vertex.
    pub fn find_embedding(&self, g: &Digraph) -> Option<Vec<usize>> {
        let mut found = None;
        let stop = &mut |phi: &[usize]| {
            found = Some(phi.to_vec());
            true
        };
        if g.n() <= 64 {
            let (out, inn) = transpose_masks(g);
            let view = MaskAdj {
                n: g.n(),
                out: &out,
                inn: &inn,
            };
            self.run_masks(&self.base, view, &[], stop);
        } else {
            self.run_general(&self.base, g, stop);
        }
        found
    }

    pub fn embeds(&self, g: &Digraph) -> bool {
        self.find_embedding(g).is_some()
    }

    /// Does G contain a copy of H that uses the arc (u, v)?
    /// Callers use this after adding (u, v) to an H-free graph.
    pub fn embeds_through_arc(&self, g: &Digraph, u: usize, v: usize) -> bool {
        if g.n() <= 64 {
            let (out, inn) = transpose_masks(g);
            self.embeds_through_arc_masks(
                MaskAdj {
                    n: g.n(),
                    out: &out,
                    inn: &inn,
                },
                u,
                v,
            )
        } else {
            // general path: try every H-arc as the anchor
            self.anchored.iter().any(|(_, plan)| {
                let mut hit = false;
                let mut phi0 = vec![0usize; self.h.n()];
                let mut used = vec![false; g.n()];
                // pin levels 0 and 1 by restricting candidate loops
                rec_general_forced(plan, g, &[u, v], 0, self.h.n(), &mut phi0, &mut used, &mut |_| {
                    hit = true;
                    true
                });
                hit
            })
        }
    }

    pub(crate) fn embeds_through_arc_masks(&self, g: MaskAdj, u: usize, v: usize) -> bool {
        self.anchored.iter().any(|(_, plan)| {
            self.run_masks(plan, g, &[u, v], &mut |_| true)
        })
    }

    /// Number of arc-preserving injections of H into G.
    pub fn count_maps(&self, g: &Digraph) -> u64 {
        let mut count = 0u64;
        let visit = &mut |_: &[usize]| {
            count += 1;
            false
        };
        if g.n() <= 64 {
            let (out, inn) = transpose_masks(g);
            self.run_masks(
                &self.base,
                MaskAdj {
                    n: g.n(),
                    out: &out,
                    inn: &inn,
                },
                &[],
                visit,
            );
        } else {
            self.run_general(&self.base, g, visit);
        }
        count
    }

    /// Visit every embedding (phi indexed by H-vertex).
    pub fn for_each_embedding(&self, g: &Digraph, mut f: impl FnMut(&[usize])) {
        let visit = &mut |phi: &[usize]| {
            f(phi);
            false
        };
        if g.n() <= 64 {
            let (out, inn) = transpose_masks(g);
            self.run_masks(
                &self.base,
                MaskAdj {
                    n: g.n(),
                    out: &out,
                    inn: &inn,
                },
                &[],
                visit,
            );
        } else {
            self.run_general(&self.base, g, visit);
        }
    }
}

fn rec_masks(
    plan: &Plan,
    g: MaskAdj,
    forced: &[usize],
    k: usize,
    hn: usize,
    phi: &mut [usize; 64],
    used: u64,
    visit: &mut dyn FnMut(&[usize; 64]) -> bool,
) -> bool {
    if k == hn {
        return visit(phi);
    }
    let mut cand = !used & g.full();
    let mut bits = plan.out_to_prev[k];
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        cand &= g.inn[phi[j]];
    }
    let mut bits = plan.in_from_prev[k];
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        cand &= g.out[phi[j]];
    }
    if k < forced.len() {
        cand &= 1u64 << forced[k];
    }
    while cand != 0 {
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if g.out[w].count_ones() < plan.outdeg[k] || g.inn[w].count_ones() < plan.indeg[k] {
            continue;
        }
        phi[k] = w;
        if rec_masks(plan, g, forced, k + 1, hn, phi, used | (1 << w), visit) {
            return true;
        }
    }
    false
}

fn rec_general(
    plan: &Plan,
    g: &Digraph,
    k: usize,
    hn: usize,
    phi: &mut [usize],
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    rec_general_forced(plan, g, &[], k, hn, phi, used, visit)
}

#[allow(clippy::too_many_arguments)]
fn rec_general_forced(
    plan: &Plan,
    g: &Digraph,
    forced: &[usize],
    k: usize,
    hn: usize,
    phi: &mut [usize],
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k == hn {
        return visit(phi);
    }
    let candidates: Vec<usize> = if k < forced.len() {
        vec![forced[k]]
    } else {
        (0..g.n()).collect()
    };
    'cand: for w in candidates {
        if used[w] {
            continue;
        }
        let mut bits = plan.out_to_prev[k];
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !g.has_arc(w, phi[j]) {
                continue 'cand;
            }
        }
        let mut bits = plan.in_from_prev[k];
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !g.has_arc(phi[j], w) {
                continue 'cand;
            }
        }
        if g.out_degree(w) < plan.outdeg[k] as usize || g.in_degree(w) < plan.indeg[k] as usize {
            continue;
        }
        phi[k] = w;
        used[w] = true;
        if rec_general_forced(plan, g, forced, k + 1, hn, phi, used, visit) {
            return true;
        }
        used[w] = false;
    }
    false
}

/// Convenience wrappers over a one-shot matcher.
pub fn find_embedding(g: &Digraph, h: &Digraph) -> Option<Vec<usize>> {
    Matcher::new(h).find_embedding(g)
}

pub fn count_copies(g: &Digraph, h: &Digraph) -> u64 {
    Matcher::new(h).count_maps(g)
}

/// Reference containment check by plain injection enumeration, sharing no
/// machinery with `Matcher`. The census dual-enumerator and the oracle tests
/// rely on this staying independent.
pub fn naive_contains(g: &Digraph, h: &Digraph) -> bool {
    naive_count_maps(g, h) > 0
}

pub fn naive_count_maps(g: &Digraph, h: &Digraph) -> u64 {
    let harcs: Vec<(usize, usize)> = h.arcs().collect();
    let mut phi = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    fn rec(
        g: &Digraph,
        harcs: &[(usize, usize)],
        hn: usize,
        k: usize,
        phi: &mut [usize],
        used: &mut [bool],
    ) -> u64 {
        if k == hn {
            let ok = harcs.iter().all(|&(u, v)| g.has_arc(phi[u], phi[v]));
            return ok as u64;
        }
        let mut total = 0;
        for w in 0..g.n() {
            if !used[w] {
                phi[k] = w;
                used[w] = true;
                total += rec(g, harcs, hn, k + 1, phi, used);
                used[w] = false;
            }
        }
        total
    }
    if h.n() > g.n() {
        return 0;
    }
    rec(g, &harcs, h.n(), 0, &mut phi, &mut used)
}

/// Repeatedly delete the arc lying in the most remaining H-copies (ties to
/// the lexicographically smallest arc) until no copy is left.
pub fn greedy_make_h_free(g: &Digraph, h: &Digraph) -> (Digraph, Vec<(usize, usize)>) {
    let matcher = Matcher::new(h);
    let mut work = g.clone();
    let mut deleted = Vec::new();
    loop {
        let n = work.n();
        let mut load = vec![0u64; n * n];
        let mut any = false;
        matcher.for_each_embedding(&work, |phi| {
            any = true;
            for (x, y) in matcher.pattern().arcs() {
                load[phi[x] * n + phi[y]] += 1;
            }
        });
        if !any {
            return (work, deleted);
        }
        let (mut best_arc, mut best_load) = ((0, 0), 0u64);
        for u in 0..n {
            for v in 0..n {
                if u != v && load[u * n + v] > best_load {
                    best_load = load[u * n + v];
                    best_arc = (u, v);
                }
            }
        }
        work.remove_arc(best_arc.0, best_arc.1);
        deleted.push(best_arc);
    }
}

/// A forbidden pattern with its cached derived quantities.
#[derive(Clone, Debug)]
pub struct Pattern {
    h: Digraph,
    name: String,
    delta: usize,
    m_value: Option<Rational64>,
    cond_a_threshold: Option<Rational64>,
    has_bidirected_pair: bool,
}

impl Pattern {
    pub fn h(&self) -> &Digraph {
        &self.h
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    /// Max of d+(v) + d-(v) over the pattern's vertices.
    pub fn delta(&self) -> usize {
        self.delta
    }
    /// m(H) = max (e(H')-1)/(v(H')-2) over subgraphs with e > 1 on at least
    /// 3 non-isolated vertices; absent when no such subgraph exists.
    pub fn m_value(&self) -> Option<Rational64> {
        self.m_value
    }
    /// max e(H')/v(H') over subgraphs with e > 1.
    pub fn cond_a_threshold(&self) -> Option<Rational64> {
        self.cond_a_threshold
    }
    /// Set when some 2-vertex subgraph has two arcs (a 2-cycle); such
    /// subgraphs are excluded from the m(H) maximum and flagged in reports.
    pub fn has_bidirected_pair(&self) -> bool {
        self.has_bidirected_pair
    }
    /// Condition A: e(H')/v(H') <= a/2 for every subgraph with e(H') > 1.
    /// None when the pattern has no subgraph with more than one arc.
    pub fn condition_a_holds(&self, a: &WeightParam) -> Option<bool> {
        let thr = self.cond_a_threshold?;
        Some(match a.rational() {
            Some(r) => thr <= r / Rational64::from_integer(2),
            None => {
                let t = *thr.numer() as f64 / *thr.denom() as f64;
                t <= a.as_f64() / 2.0 + crate::weight::FLOAT_TOL
            }
        })
    }
}

/// Compute delta, m(H), and the Condition-A threshold by enumeration over
/// induced subgraphs on every vertex subset, dropping isolated vertices.
pub fn pattern_stats(h: &Digraph) -> Result<Pattern> {
    pattern_stats_named(h, format!("H(v={},e={})", h.n(), h.arc_count()))
}

pub fn pattern_stats_named(h: &Digraph, name: String) -> Result<Pattern> {
    let hn = h.n();
    if hn > MAX_PATTERN_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "pattern has {hn} vertices; statistics support at most {MAX_PATTERN_VERTICES}"
        )));
    }
    let delta = (0..hn)
        .map(|v| h.out_degree(v) + h.in_degree(v))
        .max()
        .unwrap_or(0);
    let mut m_value: Option<Rational64> = None;
    let mut thr: Option<Rational64> = None;
    for subset in 1u32..(1u32 << hn) {
        let verts: Vec<usize> = (0..hn).filter(|&v| subset >> v & 1 == 1).collect();
        let sub = h.induced(&verts);
        let e = sub.arc_count();
        if e < 2 {
            continue;
        }
        let non_isolated = (0..sub.n())
            .filter(|&v| sub.out_degree(v) + sub.in_degree(v) > 0)
            .count();
        if non_isolated >= 2 {
            let r = Rational64::new(e as i64, non_isolated as i64);
            thr = Some(thr.map_or(r, |t| t.max(r)));
        }
        if non_isolated >= 3 {
            let r = Rational64::new(e as i64 - 1, non_isolated as i64 - 2);
            m_value = Some(m_value.map_or(r, |m| m.max(r)));
        }
    }
    Ok(Pattern {
        h: h.clone(),
        name,
        delta,
        m_value,
        cond_a_threshold: thr,
        has_bidirected_pair: h.f2() > 0,
    })
}

/// T_{r+1}^t as a named pattern.
pub fn transitive_blowup_pattern(r: usize, t: usize) -> Result<Pattern> {
    if r == 0 || t == 0 {
        return Err(Error::InvalidArgument(
            "pattern parameters require r >= 1 and t >= 1".into(),
        ));
    }
    let v = (r + 1) * t;
    if v > MAX_PATTERN_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "T_{}^{} has {v} vertices; patterns support at most {MAX_PATTERN_VERTICES}",
            r + 1,
            t
        )));
    }
    let base = crate::digraph::transitive_tournament(r + 1)?;
    let h = crate::digraph::blow_up(&base, t)?;
    let name = if t == 1 {
        format!("T_{}", r + 1)
    } else {
        format!("T_{}^{}", r + 1, t)
    };
    pattern_stats_named(&h, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;
    use crate::weight::WeightParam;

    fn t(k: usize) -> Digraph {
        transitive_tournament(k).unwrap()
    }

    #[test]
    fn embedding_examples() {
        let dt24 = turan_graph_digraph(4, 2).unwrap();
        assert!(find_embedding(&dt24, &t(3)).is_none());
        let dk3 = complete_digraph(3);
        assert!(find_embedding(&dk3, &t(3)).is_some());
        // DT_3(6) does contain T_3^2: map each blow-up class into one part
        let dt36 = turan_graph_digraph(6, 3).unwrap();
        let t32 = blow_up(&t(3), 2).unwrap();
        let phi = find_embedding(&dt36, &t32).expect("T_3^2 embeds in DT_3(6)");
        for (x, y) in t32.arcs() {
            assert!(dt36.has_arc(phi[x], phi[y]));
        }
        let dt39 = turan_graph_digraph(9, 3).unwrap();
        assert!(find_embedding(&dt39, &t(3)).is_some());
        // too few vertices
        assert!(find_embedding(&t(2), &t(3)).is_none());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_copies(&t(3), &t(3)), 1);
        assert_eq!(count_copies(&complete_digraph(3), &t(3)), 6);
        assert_eq!(count_copies(&Digraph::empty(5), &t(3)), 0);
        assert_eq!(count_copies(&t(4), &t(3)), 4);
    }

    #[test]
    fn optimized_matches_naive() {
        // deterministic pseudo-random hosts
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let patterns = [t(3), t(4), blow_up(&t(3), 2).unwrap(), directed_cycle(3).unwrap()];
        for n in 3..=6 {
            for _ in 0..40 {
                let mut g = Digraph::empty(n);
                for u in 0..n {
                    for v in 0..n {
                        if u != v && next() % 3 == 0 {
                            g.add_arc(u, v);
                        }
                    }
                }
                for h in &patterns {
                    assert_eq!(
                        count_copies(&g, h),
                        naive_count_maps(&g, h),
                        "g={g} h={h}"
                    );
                    assert_eq!(find_embedding(&g, h).is_some(), naive_contains(&g, h));
                }
            }
        }
    }

    #[test]
    fn embedding_is_arc_preserving() {
        let g = turan_graph_digraph(9, 3).unwrap();
        let h = blow_up(&t(3), 2).unwrap();
        if let Some(phi) = find_embedding(&g, &h) {
            let mut sorted = phi.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), h.n(), "injective");
            for (x, y) in h.arcs() {
                assert!(g.has_arc(phi[x], phi[y]));
            }
        } else {
            panic!("expected embedding");
        }
    }

    #[test]
    fn anchored_check_matches_full() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let h = t(3);
        let m = Matcher::new(&h);
        for _ in 0..200 {
            let n = 5;
            let mut g = Digraph::empty(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && next() % 3 == 0 {
                        g.add_arc(u, v);
                    }
                }
            }
            // pick an arc of g, ask whether some copy goes through it
            let first_arc = g.arcs().next();
            if let Some((u, v)) = first_arc {
                let through = m.embeds_through_arc(&g, u, v);
                // reference: count copies using that arc
                let mut uses = false;
                m.for_each_embedding(&g, |phi| {
                    for (x, y) in h.arcs() {
                        if (phi[x], phi[y]) == (u, v) {
                            uses = true;
                        }
                    }
                });
                assert_eq!(through, uses);
            }
        }
    }

    #[test]
    fn greedy_cleaner_examples() {
        let h = t(3);
        // already free
        let free = directed_cycle(5).unwrap();
        let (g2, del) = greedy_make_h_free(&free, &h);
        assert!(del.is_empty());
        assert_eq!(g2, free);
        // bidirected K_3 needs exactly 2 deletions (brute-force minimum)
        let (g2, del) = greedy_make_h_free(&complete_digraph(3), &h);
        assert!(find_embedding(&g2, &h).is_none());
        assert_eq!(del.len(), 2);
        assert_eq!(del[0], (0, 1)); // lexicographic tie-break
        // T_4 also needs exactly 2
        let (g2, del) = greedy_make_h_free(&t(4), &h);
        assert!(find_embedding(&g2, &h).is_none());
        assert_eq!(del.len(), 2);
    }

    #[test]
    fn greedy_matches_brute_minimum_on_named_instances() {
        // brute-force minimum deletions over all arc subsets
        fn brute_min(g: &Digraph, h: &Digraph) -> usize {
            let arcs: Vec<(usize, usize)> = g.arcs().collect();
            for k in 0..=arcs.len() {
                let mut stack = vec![(0usize, g.clone(), 0usize)];
                // simple combinations via recursion
                fn rec(
                    g: &Digraph,
                    h: &Digraph,
                    arcs: &[(usize, usize)],
                    start: usize,
                    left: usize,
                ) -> bool {
                    if left == 0 {
                        return naive_contains(g, h) == false;
                    }
                    for i in start..arcs.len() {
                        let mut g2 = g.clone();
                        g2.remove_arc(arcs[i].0, arcs[i].1);
                        if rec(&g2, h, arcs, i + 1, left - 1) {
                            return true;
                        }
                    }
                    false
                }
                stack.clear();
                if rec(g, h, &arcs, 0, k) {
                    return k;
                }
            }
            unreachable!()
        }
        let h = t(3);
        assert_eq!(brute_min(&complete_digraph(3), &h), 2);
        assert_eq!(brute_min(&t(4), &h), 2);
    }

    #[test]
    fn pattern_quantities() {
        let p = transitive_blowup_pattern(2, 1).unwrap();
        assert_eq!(p.name(), "T_3");
        assert_eq!(p.delta(), 2);
        assert_eq!(p.m_value(), Some(Rational64::from_integer(2)));
        assert_eq!(p.cond_a_threshold(), Some(Rational64::from_integer(1)));
        assert!(!p.has_bidirected_pair());
        let a2 = WeightParam::digraph_counting();
        let a4 = WeightParam::from_integer(4).unwrap();
        assert_eq!(p.condition_a_holds(&a2), Some(true));
        assert_eq!(p.condition_a_holds(&a4), Some(true));

        let dk3 = pattern_stats(&complete_digraph(3)).unwrap();
        assert_eq!(dk3.delta(), 4);
        assert_eq!(dk3.cond_a_threshold(), Some(Rational64::from_integer(2)));
        assert_eq!(dk3.m_value(), Some(Rational64::from_integer(5)));
        assert!(dk3.has_bidirected_pair());
        assert_eq!(dk3.condition_a_holds(&a2), Some(false));
        assert_eq!(dk3.condition_a_holds(&a4), Some(true));

        let t32 = transitive_blowup_pattern(2, 2).unwrap();
        assert_eq!(t32.name(), "T_3^2");
        assert_eq!(t32.delta(), 4);
        assert_eq!(t32.m_value(), Some(Rational64::new(11, 4)));
        assert_eq!(t32.cond_a_threshold(), Some(Rational64::from_integer(2)));

        let t4 = transitive_blowup_pattern(3, 1).unwrap();
        assert_eq!(t4.delta(), 3);
        assert_eq!(t4.m_value(), Some(Rational64::new(5, 2)));
        assert_eq!(t4.cond_a_threshold(), Some(Rational64::new(3, 2)));
    }

    #[test]
    fn pattern_with_too_few_arcs_has_no_m() {
        let single = Digraph::from_arcs(2, &[(0, 1)]);
        let p = pattern_stats(&single).unwrap();
        assert_eq!(p.m_value(), None);
        assert_eq!(p.cond_a_threshold(), None);
        assert_eq!(
            p.condition_a_holds(&WeightParam::digraph_counting()),
            None
        );
        // a lone 2-cycle: threshold exists (e/v = 1) but m stays absent
        let two = Digraph::from_arcs(2, &[(0, 1), (1, 0)]);
        let p = pattern_stats(&two).unwrap();
        assert_eq!(p.m_value(), None);
        assert_eq!(p.cond_a_threshold(), Some(Rational64::from_integer(1)));
        assert!(p.has_bidirected_pair());
    }
}
