//! r-partitions and their arc accounting: crossing/non-crossing counts,
//! optimal partitions (exact and local search), pair densities and the
//! derived weights, the (F1)-(F3) predicates, and the stability sweep that
//! maps near-extremal weighted size to edit distance from DT_r(n).

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::budget::{Budget, Ticker};
use crate::census;
use crate::containment::transitive_blowup_pattern;
use crate::digraph::{turan_number, turan_part_sizes, Digraph, GraphKind};
use crate::error::{Error, Result};
use crate::weight::WeightParam;

/// Ordered partition of the vertices 0..n into r classes; empty classes are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl RPartition {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for class in &classes {
            for &v in class {
                if v >= n {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} out of range for n={n}"
                    )));
                }
                if seen[v] {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} appears in two classes"
                    )));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} is not covered by the partition"
            )));
        }
        Ok(RPartition { n, classes })
    }

    /// Build from a class-assignment vector (`assign[v]` in `0..r`).
    pub fn from_assignment(assign: &[usize], r: usize) -> Result<Self> {
        let mut classes = vec![Vec::new(); r];
        for (v, &c) in assign.iter().enumerate() {
            if c >= r {
                return Err(Error::InvalidArgument(format!(
                    "class {c} out of range for r={r}"
                )));
            }
            classes[c].push(v);
        }
        RPartition::new(assign.len(), classes)
    }

    /// Consecutive blocks with balanced sizes, part 0 largest; the vertex
    /// layout of `turan_graph_digraph`.
    pub fn balanced(n: usize, r: usize) -> Self {
        let mut classes = Vec::with_capacity(r);
        let mut start = 0;
        for s in turan_part_sizes(n, r) {
            classes.push((start..start + s).collect());
            start += s;
        }
        RPartition { n, classes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (c, class) in self.classes.iter().enumerate() {
            for &v in class {
                out[v] = c;
            }
        }
        out
    }
}

fn check_compat(g: &Digraph, q: &RPartition) -> Result<()> {
    if g.n() != q.n() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} vertices but the graph has {}",
            q.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Arcs with both endpoints in one class of Q.
pub fn non_crossing_count(g: &Digraph, q: &RPartition) -> Result<usize> {
    check_compat(g, q)?;
    let assign = q.assignment();
    Ok(g.arcs().filter(|&(u, v)| assign[u] == assign[v]).count())
}

/// Arcs that must be added so every cross pair of Q is bidirected,
/// counting each missing direction separately.
pub fn f2_deficit(g: &Digraph, q: &RPartition) -> Result<usize> {
    check_compat(g, q)?;
    let assign = q.assignment();
    let mut missing = 0;
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if assign[u] != assign[v] {
                missing += 2 - g.has_arc(u, v) as usize - g.has_arc(v, u) as usize;
            }
        }
    }
    Ok(missing)
}

/// The complete r-partite digraph on Q's classes: every cross pair
/// bidirected, nothing inside classes.
pub fn dtr_on_partition(q: &RPartition) -> Digraph {
    let assign = q.assignment();
    let mut g = Digraph::empty(q.n());
    for u in 0..q.n() {
        for v in 0..q.n() {
            if u != v && assign[u] != assign[v] {
                g.add_arc(u, v);
            }
        }
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub partition: RPartition,
    pub non_crossing_arcs: usize,
    pub is_optimal: bool,
    pub f2_deficit: usize,
    pub edit_distance_to_dtr: usize,
}

/// Report for a caller-supplied partition (`is_optimal` left false).
pub fn partition_report(g: &Digraph, q: &RPartition) -> Result<PartitionReport> {
    let nc = non_crossing_count(g, q)?;
    let fd = f2_deficit(g, q)?;
    Ok(PartitionReport {
        partition: q.clone(),
        non_crossing_arcs: nc,
        is_optimal: false,
        f2_deficit: fd,
        edit_distance_to_dtr: nc + fd,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    Exact,
    LocalSearch,
}

#[derive(Clone, Debug)]
pub struct PartitionOptions {
    /// Cap on the r^n assignment space the exact mode will enter.
    pub max_states: u128,
    pub restarts: u32,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions {
            max_states: 200_000_000,
            restarts: 32,
            seed: 0,
            budget: Budget::unlimited(),
        }
    }
}

/// An r-partition minimising the number of non-crossing arcs.
///
/// Exact mode enumerates class-assignment vectors in restricted-growth form
/// (first vertex pinned to class 0, classes ordered by smallest element),
/// pruning on the running count; ties resolve to the lexicographically
/// smallest assignment vector. Local search runs steepest single-vertex
/// moves from seeded random starts and reports an upper bound.
pub fn optimal_partition(
    g: &Digraph,
    r: usize,
    mode: PartitionMode,
    opts: &PartitionOptions,
) -> Result<PartitionReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let n = g.n();
    if n == 0 {
        let q = RPartition::new(0, vec![Vec::new(); r])?;
        let mut rep = partition_report(g, &q)?;
        rep.is_optimal = true;
        return Ok(rep);
    }
    match mode {
        PartitionMode::Exact => {
            let states = (r as u128).checked_pow(n as u32);
            if states.is_none() || states.unwrap() > opts.max_states {
                return Err(Error::BudgetExceeded(format!(
                    "exact partition search over r^n = {r}^{n} assignments exceeds \
                     the configured cap {}",
                    opts.max_states
                )));
            }
            let (nc, assign) = exact_min_noncrossing(g, r, &opts.budget)?;
            let q = RPartition::from_assignment(&assign, r)?;
            let fd = f2_deficit(g, &q)?;
            Ok(PartitionReport {
                partition: q,
                non_crossing_arcs: nc,
                is_optimal: true,
                f2_deficit: fd,
                edit_distance_to_dtr: nc + fd,
            })
        }
        PartitionMode::LocalSearch => {
            let (nc, assign) = local_search_min_noncrossing(g, r, opts);
            let q = RPartition::from_assignment(&assign, r)?;
            let fd = f2_deficit(g, &q)?;
            Ok(PartitionReport {
                partition: q,
                non_crossing_arcs: nc,
                // a local minimum certifies optimality only at the 0 bound
                is_optimal: nc == 0,
                f2_deficit: fd,
                edit_distance_to_dtr: nc + fd,
            })
        }
    }
}

/// Arcs between u and v in either direction, as a count in {0, 1, 2}.
#[inline]
fn arcs_between(g: &Digraph, u: usize, v: usize) -> usize {
    g.has_arc(u, v) as usize + g.has_arc(v, u) as usize
}

#[allow(clippy::too_many_arguments)]
fn rgs_rec(
    g: &Digraph,
    r: usize,
    depth: usize,
    used: usize,
    cost: usize,
    assign: &mut [usize],
    best: &mut usize,
    best_assign: &mut [usize],
    ticker: &mut Ticker,
) -> Result<()> {
    ticker.tick()?;
    if cost >= *best && *best != usize::MAX {
        return Ok(());
    }
    if depth == g.n() {
        if cost < *best {
            *best = cost;
            best_assign.copy_from_slice(assign);
        }
        return Ok(());
    }
    let limit = r.min(used + 1);
    for c in 0..limit {
        let mut delta = 0;
        for (j, &cj) in assign.iter().enumerate().take(depth) {
            if cj == c {
                delta += arcs_between(g, depth, j);
            }
        }
        assign[depth] = c;
        rgs_rec(
            g,
            r,
            depth + 1,
            used.max(c + 1),
            cost + delta,
            assign,
            best,
            best_assign,
            ticker,
        )?;
    }
    Ok(())
}

fn exact_min_noncrossing(g: &Digraph, r: usize, budget: &Budget) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    let mut assign = vec![0usize; n];
    let mut best_assign = vec![0usize; n];
    let mut best = usize::MAX;
    let mut ticker = Ticker::new(budget, "exact partition search");
    rgs_rec(
        g,
        r,
        0,
        0,
        0,
        &mut assign,
        &mut best,
        &mut best_assign,
        &mut ticker,
    )?;
    Ok((best, best_assign))
}

fn noncrossing_of_assignment(g: &Digraph, assign: &[usize]) -> usize {
    g.arcs().filter(|&(u, v)| assign[u] == assign[v]).count()
}

fn local_search_min_noncrossing(
    g: &Digraph,
    r: usize,
    opts: &PartitionOptions,
) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
    let mut best = usize::MAX;
    let mut best_assign = vec![0usize; n];
    for restart in 0..opts.restarts.max(1) {
        let mut assign: Vec<usize> = if restart == 0 {
            vec![0; n] // deterministic start
        } else {
            (0..n).map(|_| rng.random_range(0..r)).collect()
        };
        let mut cost = noncrossing_of_assignment(g, &assign);
        loop {
            // steepest single-vertex move, ties to the lowest vertex/class
            let mut move_gain = 0isize;
            let mut mv = None;
            for v in 0..n {
                let cur: usize = (0..n)
                    .filter(|&j| j != v && assign[j] == assign[v])
                    .map(|j| arcs_between(g, v, j))
                    .sum();
                for c in 0..r {
                    if c == assign[v] {
                        continue;
                    }
                    let alt: usize = (0..n)
                        .filter(|&j| j != v && assign[j] == c)
                        .map(|j| arcs_between(g, v, j))
                        .sum();
                    let gain = cur as isize - alt as isize;
                    if gain > move_gain {
                        move_gain = gain;
                        mv = Some((v, c));
                    }
                }
            }
            match mv {
                Some((v, c)) if move_gain > 0 => {
                    assign[v] = c;
                    cost = (cost as isize - move_gain) as usize;
                }
                _ => break,
            }
        }
        if cost < best || (cost == best && assign < best_assign) {
            best = cost;
            best_assign = assign;
        }
        if best == 0 {
            break;
        }
    }
    (best, best_assign)
}

/// Densities of bidirected / single-direction pairs across two disjoint
/// vertex sets, and the weights w = a*d2 + d1.
#[derive(Clone, Debug)]
pub struct PairDensities {
    pub d2: Rational64,
    pub d1_ab: Rational64,
    pub d1_ba: Rational64,
    pub w_ab: f64,
    pub w_ba: f64,
    pub w_ab_exact: Option<Rational64>,
    pub w_ba_exact: Option<Rational64>,
}

pub fn pair_densities(
    g: &Digraph,
    a_set: &[usize],
    b_set: &[usize],
    a: &WeightParam,
) -> Result<PairDensities> {
    if a_set.is_empty() || b_set.is_empty() {
        return Err(Error::InvalidArgument("vertex sets must be nonempty".into()));
    }
    for &v in a_set.iter().chain(b_set) {
        if v >= g.n() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
    }
    let mut seen = vec![0u8; g.n()];
    for &v in a_set.iter().chain(b_set) {
        seen[v] += 1;
        if seen[v] > 1 {
            return Err(Error::InvalidArgument(
                "vertex sets must be disjoint without repeats".into(),
            ));
        }
    }
    let (mut both, mut fwd, mut bwd) = (0i64, 0i64, 0i64);
    for &u in a_set {
        for &v in b_set {
            match (g.has_arc(u, v), g.has_arc(v, u)) {
                (true, true) => both += 1,
                (true, false) => fwd += 1,
                (false, true) => bwd += 1,
                (false, false) => {}
            }
        }
    }
    let total = (a_set.len() * b_set.len()) as i64;
    let d2 = Rational64::new(both, total);
    let d1_ab = Rational64::new(fwd, total);
    let d1_ba = Rational64::new(bwd, total);
    let (w_ab_exact, w_ba_exact) = match a.rational() {
        Some(ar) => (Some(ar * d2 + d1_ab), Some(ar * d2 + d1_ba)),
        None => (None, None),
    };
    Ok(PairDensities {
        d2,
        d1_ab,
        d1_ba,
        w_ab: a.as_f64() * d2.to_f64().unwrap() + d1_ab.to_f64().unwrap(),
        w_ba: a.as_f64() * d2.to_f64().unwrap() + d1_ba.to_f64().unwrap(),
        w_ab_exact,
        w_ba_exact,
    })
}

/// Witness for a failed (F2) density condition.
#[derive(Clone, Debug, Serialize)]
pub struct F2Witness {
    pub class_i: usize,
    pub class_j: usize,
    pub u_i: Vec<usize>,
    pub u_j: Vec<usize>,
    /// Arcs observed from u_i to u_j.
    pub arcs: usize,
    /// Required minimum |U_i||U_j|/6, as a float for display.
    pub required: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FConditionsReport {
    pub f1: bool,
    pub f2: bool,
    pub f3: bool,
    pub non_crossing: usize,
    /// Exhaustive subset check (n <= 14) vs randomized sampling; a sampled
    /// pass is probabilistic, a sampled failure is definitive.
    pub f2_exhaustive: bool,
    pub f2_samples: u64,
    pub f2_witness: Option<F2Witness>,
    /// Index of a class violating the size balance, if any.
    pub f3_witness: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct FConditionsOptions {
    pub samples_per_pair: u64,
    pub seed: u64,
    /// Force the sampling path regardless of n (used by tests).
    pub force_sampling: bool,
}

impl Default for FConditionsOptions {
    fn default() -> Self {
        FConditionsOptions {
            samples_per_pair: 100_000,
            seed: 0,
            force_sampling: false,
        }
    }
}

/// Check (F1) non-crossing arcs <= eta*n^2, (F2) directed density >= 1/6
/// between all subsets of size >= mu*n from distinct classes, (F3) class
/// sizes within mu*n of n/r. The 1/6 constant applies to both graph kinds.
pub fn f_conditions_check(
    g: &Digraph,
    q: &RPartition,
    eta: f64,
    mu: f64,
    opts: &FConditionsOptions,
) -> Result<FConditionsReport> {
    check_compat(g, q)?;
    if !(eta > 0.0 && eta < 1.0 && mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidArgument(
            "eta and mu must lie strictly between 0 and 1".into(),
        ));
    }
    let n = g.n();
    let r = q.class_count();
    let nc = non_crossing_count(g, q)?;
    let f1 = (nc as f64) <= eta * (n * n) as f64;

    let mut f3 = true;
    let mut f3_witness = None;
    for (i, class) in q.classes().iter().enumerate() {
        if (class.len() as f64 - n as f64 / r as f64).abs() > mu * n as f64 + 1e-12 {
            f3 = false;
            f3_witness = Some(i);
            break;
        }
    }

    let min_size = ((mu * n as f64).ceil() as usize).max(1);
    let exhaustive = n <= 14 && !opts.force_sampling;
    let mut f2 = true;
    let mut f2_witness = None;
    let mut samples_used = 0u64;

    // e(U_i -> U_j) >= |U_i||U_j|/6, exactly: 6*arcs >= |U_i|*|U_j|
    let directed_arcs = |ui: &[usize], uj: &[usize]| -> usize {
        ui.iter()
            .map(|&u| uj.iter().filter(|&&v| g.has_arc(u, v)).count())
            .sum()
    };
    let violation = |ui: &[usize], uj: &[usize], ci: usize, cj: usize| -> Option<F2Witness> {
        for (a, b, i, j) in [(ui, uj, ci, cj), (uj, ui, cj, ci)] {
            let arcs = directed_arcs(a, b);
            if 6 * arcs < a.len() * b.len() {
                return Some(F2Witness {
                    class_i: i,
                    class_j: j,
                    u_i: a.to_vec(),
                    u_j: b.to_vec(),
                    arcs,
                    required: (a.len() * b.len()) as f64 / 6.0,
                });
            }
        }
        None
    };

    'pairs: for i in 0..r {
        for j in (i + 1)..r {
            let vi = &q.classes()[i];
            let vj = &q.classes()[j];
            if vi.len() < min_size || vj.len() < min_size {
                continue; // no qualifying subsets
            }
            if exhaustive {
                let subsets = |class: &[usize]| -> Vec<Vec<usize>> {
                    (1u32..(1 << class.len()))
                        .filter(|m| (m.count_ones() as usize) >= min_size)
                        .map(|m| {
                            class
                                .iter()
                                .enumerate()
                                .filter(|(k, _)| m >> k & 1 == 1)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect()
                };
                for ui in subsets(vi) {
                    for uj in subsets(vj) {
                        if let Some(w) = violation(&ui, &uj, i, j) {
                            f2 = false;
                            f2_witness = Some(w);
                            break 'pairs;
                        }
                    }
                }
            } else {
                let mut rng = ChaCha12Rng::seed_from_u64(opts.seed ^ ((i * r + j) as u64));
                let mut done = 0u64;
                let mut attempts = 0u64;
                while done < opts.samples_per_pair && attempts < opts.samples_per_pair * 10 {
                    attempts += 1;
                    let ui: Vec<usize> =
                        vi.iter().copied().filter(|_| rng.random::<bool>()).collect();
                    let uj: Vec<usize> =
                        vj.iter().copied().filter(|_| rng.random::<bool>()).collect();
                    if ui.len() < min_size || uj.len() < min_size {
                        continue;
                    }
                    done += 1;
                    if let Some(w) = violation(&ui, &uj, i, j) {
                        f2 = false;
                        f2_witness = Some(w);
                        samples_used += done;
                        break 'pairs;
                    }
                }
                samples_used += done;
            }
        }
    }

    Ok(FConditionsReport {
        f1,
        f2,
        f3,
        non_crossing: nc,
        f2_exhaustive: exhaustive,
        f2_samples: samples_used,
        f2_witness,
        f3_witness,
    })
}

/// For each vertex, its in-plus-out degree inside its own class
/// (a 2-cycle contributes 2).
pub fn internal_degree_profile(g: &Digraph, q: &RPartition) -> Result<Vec<usize>> {
    check_compat(g, q)?;
    let assign = q.assignment();
    Ok((0..g.n())
        .map(|v| {
            (0..g.n())
                .filter(|&u| u != v && assign[u] == assign[v])
                .map(|u| arcs_between(g, v, u))
                .sum()
        })
        .collect())
}

/// One deficit class of the sweep: how many H-free graphs sit at this exact
/// weighted-size deficit, the worst (max) distance to DT_r(n) among them,
/// and a deterministic witness (smallest hex among the argmax graphs).
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub deficit_num: i64,
    pub deficit_den: i64,
    pub count: u64,
    pub max_distance: usize,
    pub argmax_graph_hex: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub kind: GraphKind,
    pub gamma: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("deficit,count,max_distance,argmax_graph_hex\n");
        for row in &self.rows {
            let deficit = if row.deficit_den == 1 {
                row.deficit_num.to_string()
            } else {
                format!("{}/{}", row.deficit_num, row.deficit_den)
            };
            s.push_str(&format!(
                "{deficit},{},{},{}\n",
                row.count, row.max_distance, row.argmax_graph_hex
            ));
        }
        s
    }

    /// Running maximum of distance over all graphs with deficit <= d.
    /// This is the frontier the stability theorem bounds: it can only
    /// shrink as the allowed deficit shrinks.
    pub fn cumulative_frontier(&self) -> Vec<(Rational64, usize)> {
        let mut out = Vec::with_capacity(self.rows.len());
        let mut running = 0usize;
        for row in &self.rows {
            running = running.max(row.max_distance);
            out.push((Rational64::new(row.deficit_num, row.deficit_den), running));
        }
        out
    }
}

/// Exhaustively enumerate the T_{r+1}^t-free graphs of the kind on n
/// labelled vertices with e_a >= a*t_r(n) - gamma*n^2 and record, per exact
/// deficit, the maximum over graphs of the minimum over balanced
/// r-partitions of the edit distance to DT_r(n). Requires a rational weight
/// so deficits group exactly.
pub fn stability_sweep(
    n: usize,
    r: usize,
    t: usize,
    a: &WeightParam,
    gamma: f64,
    kind: GraphKind,
    budget: &Budget,
) -> Result<SweepResult> {
    if n > 8 {
        return Err(Error::BudgetExceeded(format!(
            "stability sweep enumerates all graphs on n labelled vertices; \
             n={n} exceeds the supported 8"
        )));
    }
    let (num, den) = a.num_den().ok_or_else(|| {
        Error::InvalidArgument("stability sweep needs a rational weight for exact deficits".into())
    })?;
    if gamma < 0.0 {
        return Err(Error::InvalidArgument("gamma must be nonnegative".into()));
    }
    let pattern = transitive_blowup_pattern(r, t)?;
    let target_scaled = num * turan_number(n, r)? as i64; // den * (a * t_r(n))
    let gamma_cap = gamma * (n * n) as f64 + 1e-9;

    // balanced partitions as internal-arc masks over the n^2 arc bits
    let sizes = turan_part_sizes(n, r);
    let mut partitions: Vec<u64> = Vec::new();
    let mut assign = vec![usize::MAX; n];
    gen_balanced(&sizes, 0, &mut assign, &mut partitions, n);
    let cross_pairs = turan_number(n, r)? as i64;

    use std::collections::BTreeMap;
    type Acc = BTreeMap<Rational64, (u64, usize, String)>;

    let fold = census::h_free_fold(
        n,
        pattern.h(),
        kind,
        budget,
        Acc::new,
        |acc: &mut Acc, g: &Digraph| {
            let (f1, f2) = g.pair_counts();
            let e_scaled = num * f2 as i64 + den * f1 as i64;
            let deficit = Rational64::new(target_scaled - e_scaled, den);
            if deficit.to_f64().unwrap() > gamma_cap {
                return Ok(());
            }
            let arcs64 = arcs_as_u64(g);
            let e = g.arc_count() as i64;
            let dist = partitions
                .iter()
                .map(|&mask| {
                    let nc = (arcs64 & mask).count_ones() as i64;
                    // delete non-crossing, add every missing cross direction
                    (nc + 2 * cross_pairs - (e - nc)) as usize
                })
                .min()
                .unwrap();
            match acc.get_mut(&deficit) {
                None => {
                    acc.insert(deficit, (1, dist, hex_of(g)));
                }
                Some(row) => {
                    row.0 += 1;
                    if dist > row.1 {
                        row.1 = dist;
                        row.2 = hex_of(g);
                    } else if dist == row.1 {
                        let hex = hex_of(g);
                        if hex < row.2 {
                            row.2 = hex;
                        }
                    }
                }
            }
            Ok(())
        },
        |mut a: Acc, b: Acc| {
            for (d, (cnt, dist, hex)) in b {
                match a.get_mut(&d) {
                    None => {
                        a.insert(d, (cnt, dist, hex));
                    }
                    Some(row) => {
                        row.0 += cnt;
                        if dist > row.1 || (dist == row.1 && hex < row.2) {
                            if dist > row.1 {
                                row.1 = dist;
                            }
                            row.2 = hex;
                        }
                    }
                }
            }
            a
        },
    )?;

    let rows = fold
        .into_iter()
        .map(|(d, (count, max_distance, argmax_graph_hex))| SweepRow {
            deficit_num: *d.numer(),
            deficit_den: *d.denom(),
            count,
            max_distance,
            argmax_graph_hex,
        })
        .collect();
    Ok(SweepResult {
        n,
        r,
        t,
        kind,
        gamma,
        rows,
    })
}

/// All ways to split [n] into ordered classes of the given sizes, emitted as
/// internal-pair arc masks. Equal-size classes repeat; the min over masks is
/// unaffected.
fn gen_balanced(
    sizes: &[usize],
    class: usize,
    assign: &mut [usize],
    out: &mut Vec<u64>,
    n: usize,
) {
    if class == sizes.len() {
        let mut mask = 0u64;
        for u in 0..n {
            for v in 0..n {
                if u != v && assign[u] == assign[v] {
                    mask |= 1 << (u * n + v);
                }
            }
        }
        out.push(mask);
        return;
    }
    fn choose(
        sizes: &[usize],
        class: usize,
        need: usize,
        from: usize,
        assign: &mut [usize],
        out: &mut Vec<u64>,
        n: usize,
    ) {
        if need == 0 {
            gen_balanced(sizes, class + 1, assign, out, n);
            return;
        }
        for v in from..n {
            if assign[v] == usize::MAX {
                assign[v] = class;
                choose(sizes, class, need - 1, v + 1, assign, out, n);
                assign[v] = usize::MAX;
            }
        }
    }
    choose(sizes, class, sizes[class], 0, assign, out, n);
}

fn arcs_as_u64(g: &Digraph) -> u64 {
    let n = g.n();
    debug_assert!(n * n <= 64);
    let mut bits = 0u64;
    for (u, v) in g.arcs() {
        bits |= 1 << (u * n + v);
    }
    bits
}

fn hex_of(g: &Digraph) -> String {
    let line = g.to_line();
    line.rsplit(' ').next().unwrap_or("").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    fn t(k: usize) -> Digraph {
        transitive_tournament(k).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(RPartition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(RPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(RPartition::new(3, vec![vec![0], vec![2]]).is_err());
        assert!(RPartition::new(3, vec![vec![0, 1, 5], vec![2]]).is_err());
        // empty classes are fine
        assert!(RPartition::new(2, vec![vec![0, 1], vec![]]).is_ok());
    }

    #[test]
    fn non_crossing_examples() {
        let dt24 = turan_graph_digraph(4, 2).unwrap();
        let q = RPartition::balanced(4, 2);
        assert_eq!(non_crossing_count(&dt24, &q).unwrap(), 0);
        let c3 = directed_cycle(3).unwrap();
        let q = RPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(non_crossing_count(&c3, &q).unwrap(), 1);
        // mismatched sizes rejected
        assert!(non_crossing_count(&c3, &RPartition::balanced(4, 2)).is_err());
    }

    #[test]
    fn crossing_plus_noncrossing_is_e() {
        let g = Digraph::from_arcs(5, &[(0, 1), (1, 0), (2, 3), (4, 0), (3, 2), (1, 4)]);
        for r in 1..4 {
            let q = RPartition::balanced(5, r);
            let assign = q.assignment();
            let nc = non_crossing_count(&g, &q).unwrap();
            let crossing = g.arcs().filter(|&(u, v)| assign[u] != assign[v]).count();
            assert_eq!(nc + crossing, g.arc_count());
        }
    }

    #[test]
    fn optimal_partition_examples() {
        let opts = PartitionOptions::default();
        // bidirected K_3, r=2: minimum 2
        let rep = optimal_partition(&complete_digraph(3), 2, PartitionMode::Exact, &opts).unwrap();
        assert_eq!(rep.non_crossing_arcs, 2);
        assert!(rep.is_optimal);
        // directed 5-cycle, r=2: minimum 1
        let c5 = directed_cycle(5).unwrap();
        let rep = optimal_partition(&c5, 2, PartitionMode::Exact, &opts).unwrap();
        assert_eq!(rep.non_crossing_arcs, 1);
        // T_4 over 3 classes: minimum 1
        let rep = optimal_partition(&t(4), 3, PartitionMode::Exact, &opts).unwrap();
        assert_eq!(rep.non_crossing_arcs, 1);
        // r-partite graph with known partition: 0
        let dt = turan_graph_digraph(6, 3).unwrap();
        let rep = optimal_partition(&dt, 3, PartitionMode::Exact, &opts).unwrap();
        assert_eq!(rep.non_crossing_arcs, 0);
        assert_eq!(rep.edit_distance_to_dtr, 0);
    }

    #[test]
    fn exact_partition_budget_guard() {
        let opts = PartitionOptions {
            max_states: 100,
            ..Default::default()
        };
        let g = Digraph::empty(20);
        assert!(matches!(
            optimal_partition(&g, 3, PartitionMode::Exact, &opts),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn local_search_upper_bounds_exact() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let opts = PartitionOptions::default();
        for n in 4..=8 {
            for _ in 0..10 {
                let mut g = Digraph::empty(n);
                for u in 0..n {
                    for v in 0..n {
                        if u != v && next() % 3 == 0 {
                            g.add_arc(u, v);
                        }
                    }
                }
                for r in 2..=3 {
                    let exact = optimal_partition(&g, r, PartitionMode::Exact, &opts).unwrap();
                    let local =
                        optimal_partition(&g, r, PartitionMode::LocalSearch, &opts).unwrap();
                    assert!(local.non_crossing_arcs >= exact.non_crossing_arcs);
                    // minimality against an explicit partition
                    let q = RPartition::balanced(n, r);
                    assert!(exact.non_crossing_arcs <= non_crossing_count(&g, &q).unwrap());
                }
            }
        }
    }

    #[test]
    fn edit_distance_edits_produce_dtr() {
        let g = Digraph::from_arcs(5, &[(0, 1), (2, 1), (3, 4), (4, 3), (0, 4)]);
        let q = RPartition::new(5, vec![vec![0, 3], vec![1, 2, 4]]).unwrap();
        let rep = partition_report(&g, &q).unwrap();
        let target = dtr_on_partition(&q);
        let assign = q.assignment();
        let mut edited = g.clone();
        let mut changes = 0;
        for u in 0..5 {
            for v in 0..5 {
                if u == v {
                    continue;
                }
                let want = assign[u] != assign[v];
                if edited.has_arc(u, v) != want {
                    edited.set_arc(u, v, want);
                    changes += 1;
                }
            }
        }
        assert_eq!(changes, rep.edit_distance_to_dtr);
        assert_eq!(edited, target);
        assert_eq!(non_crossing_count(&edited, &q).unwrap(), 0);
        assert_eq!(f2_deficit(&edited, &q).unwrap(), 0);
    }

    #[test]
    fn pair_density_examples() {
        let a2 = WeightParam::digraph_counting();
        let dt24 = turan_graph_digraph(4, 2).unwrap();
        let d = pair_densities(&dt24, &[0, 1], &[2, 3], &a2).unwrap();
        assert_eq!(d.d2, Rational64::from_integer(1));
        assert_eq!(d.d1_ab, Rational64::from_integer(0));
        assert_eq!(d.w_ab_exact, Some(Rational64::from_integer(2)));

        let mut g = Digraph::empty(4);
        for u in [0usize, 1] {
            for v in [2usize, 3] {
                g.add_arc(u, v);
            }
        }
        let d = pair_densities(&g, &[0, 1], &[2, 3], &a2).unwrap();
        assert_eq!(d.d2, Rational64::from_integer(0));
        assert_eq!(d.d1_ab, Rational64::from_integer(1));
        assert_eq!(d.w_ab_exact, Some(Rational64::from_integer(1)));
        assert_eq!(d.w_ba_exact, Some(Rational64::from_integer(0)));

        let e = pair_densities(&Digraph::empty(4), &[0, 1], &[2, 3], &a2).unwrap();
        assert_eq!(e.d2, Rational64::from_integer(0));

        assert!(pair_densities(&g, &[0, 1], &[1, 2], &a2).is_err());
        assert!(pair_densities(&g, &[], &[1], &a2).is_err());
    }

    #[test]
    fn weight_sum_identity() {
        // w_ab + w_ba = 2a*d2 + d1_ab + d1_ba
        let a = WeightParam::from_rational(7, 4).unwrap();
        let g = Digraph::from_arcs(6, &[(0, 3), (3, 0), (1, 4), (5, 2), (0, 4), (4, 1)]);
        let d = pair_densities(&g, &[0, 1, 2], &[3, 4, 5], &a).unwrap();
        let ar = a.rational().unwrap();
        let lhs = d.w_ab_exact.unwrap() + d.w_ba_exact.unwrap();
        let rhs = Rational64::from_integer(2) * ar * d.d2 + d.d1_ab + d.d1_ba;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn f_conditions_examples() {
        let opts = FConditionsOptions::default();
        // DT_2(4): everything holds
        let dt = turan_graph_digraph(4, 2).unwrap();
        let q = RPartition::balanced(4, 2);
        let rep = f_conditions_check(&dt, &q, 0.01, 0.5, &opts).unwrap();
        assert!(rep.f1 && rep.f2 && rep.f3);
        assert!(rep.f2_exhaustive);

        // empty graph: F2 fails with a full-class witness
        let rep = f_conditions_check(&Digraph::empty(4), &q, 0.5, 0.5, &opts).unwrap();
        assert!(!rep.f2);
        assert_eq!(rep.f2_witness.unwrap().arcs, 0);

        // DT_2(5) with a lopsided partition: F3 fails at mu = 0.05
        let dt5 = turan_graph_digraph(5, 2).unwrap();
        let q = RPartition::new(5, vec![vec![0, 1, 2], vec![3, 4]]).unwrap();
        let rep = f_conditions_check(&dt5, &q, 0.5, 0.05, &opts).unwrap();
        assert!(!rep.f3);
        assert_eq!(rep.f3_witness, Some(0));
        // and with a permissive mu it holds
        let rep = f_conditions_check(&dt5, &q, 0.5, 0.2, &opts).unwrap();
        assert!(rep.f3);

        assert!(f_conditions_check(&dt, &RPartition::balanced(4, 2), 0.0, 0.5, &opts).is_err());
    }

    #[test]
    fn f2_sampling_refutation_is_definitive() {
        let q = RPartition::balanced(4, 2);
        let opts = FConditionsOptions {
            force_sampling: true,
            samples_per_pair: 500,
            ..Default::default()
        };
        let rep = f_conditions_check(&Digraph::empty(4), &q, 0.5, 0.5, &opts).unwrap();
        assert!(!rep.f2);
        assert!(!rep.f2_exhaustive);
        assert!(rep.f2_witness.is_some());
    }

    #[test]
    fn internal_degrees() {
        let dt = turan_graph_digraph(4, 2).unwrap();
        let q = RPartition::balanced(4, 2);
        assert_eq!(internal_degree_profile(&dt, &q).unwrap(), vec![0, 0, 0, 0]);
        let dk3 = complete_digraph(3);
        let q = RPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(internal_degree_profile(&dk3, &q).unwrap(), vec![2, 2, 0]);
        let q = RPartition::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(internal_degree_profile(&t(3), &q).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn sweep_small_shapes() {
        let a2 = WeightParam::digraph_counting();
        let budget = Budget::unlimited();
        // n=4, gamma=0: only the extremal graphs, max distance 0
        let res = stability_sweep(4, 2, 1, &a2, 0.0, GraphKind::Digraph, &budget).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].deficit_num, 0);
        assert_eq!(res.rows[0].count, 3);
        assert_eq!(res.rows[0].max_distance, 0);
        // gamma large enough to admit the empty graph: its distance is 8,
        // all 8 arcs of DT_2(4) must be added
        let res = stability_sweep(4, 2, 1, &a2, 1.0, GraphKind::Digraph, &budget).unwrap();
        let last = res.rows.last().unwrap();
        assert_eq!((last.deficit_num, last.deficit_den), (8, 1));
        assert_eq!(last.max_distance, 8);
        assert_eq!(last.argmax_graph_hex, "0000");
        // counts over all deficits = number of T_3-free digraphs on 4 vertices
        let total: u64 = res.rows.iter().map(|r| r.count).sum();
        assert_eq!(total, 921);
        // float weight is rejected
        let w = WeightParam::oriented_counting();
        assert!(stability_sweep(4, 2, 1, &w, 1.0, GraphKind::Oriented, &budget).is_err());
    }
}
