//! Exact weighted Turán numbers ex_a(n, H) with witness certificates.
//!
//! The solver branches over unordered vertex pairs in lexicographic order,
//! assigning {none, u->v, v->u, both} (three states in oriented mode). A
//! branch dies when its weighted size plus the best possible completion
//! cannot beat the incumbent, or when a copy of H is already assembled.
//! Every graph attaining the maximum is kept, deduplicated by canonical
//! form, so uniqueness claims are isomorphism-level facts.
//!
//! With a rational weight a = p/q all bookkeeping runs on the scaled
//! integer q*e_a = p*f2 + q*f1 (exactly representable in f64 at these
//! sizes); float weights use an absolute tolerance of 1e-9.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::budget::Ticker;
use crate::canon::canonical_form;
use crate::census::{pair_list, EnumCtx};
use crate::containment::{naive_contains, Matcher};
use crate::digraph::{turan_graph_digraph, turan_part_sizes, Digraph, GraphKind};
use crate::error::{Error, Result};
use crate::weight::{weighted_size, weighted_size_exact, WeightParam, FLOAT_TOL};

/// An extremal value: exact rational when the weight is rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CertValue {
    Exact(Rational64),
    Float(f64),
}

impl CertValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            CertValue::Exact(r) => r.to_f64().unwrap(),
            CertValue::Float(f) => *f,
        }
    }
}

impl std::fmt::Display for CertValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertValue::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            CertValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            CertValue::Float(x) => write!(f, "{x:.10}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalCertificate {
    pub n: usize,
    pub pattern: String,
    pub kind: GraphKind,
    pub a: WeightParam,
    pub value: CertValue,
    /// All maximizers up to isomorphism, as canonical forms sorted by their
    /// serialized line.
    pub witnesses: Vec<Digraph>,
    pub unique_up_to_iso: bool,
    /// Number of labelled maximizers seen by the complete search.
    pub labelled_maximizer_count: u64,
    /// False when the weight is irrational: value comparisons used the
    /// 1e-9 tolerance instead of exact arithmetic.
    pub exact: bool,
}

impl ExtremalCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = json!({
            "n": self.n,
            "h_name": self.pattern,
            "kind": self.kind.to_string(),
            "a": self.a.to_string(),
            "witness_count": self.witnesses.len(),
            "witnesses": self.witnesses.iter().map(|w| w.to_line()).collect::<Vec<_>>(),
            "unique_up_to_iso": self.unique_up_to_iso,
            "labelled_maximizer_count": self.labelled_maximizer_count,
            "exact": self.exact,
        });
        match &self.value {
            CertValue::Exact(r) => {
                obj["value_num"] = json!(*r.numer());
                obj["value_den"] = json!(*r.denom());
            }
            CertValue::Float(f) => {
                obj["value_float"] = json!(f);
            }
        }
        obj
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalOptions {
    pub max_n_digraph: usize,
    pub max_n_oriented: usize,
    pub budget: crate::budget::Budget,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        ExtremalOptions {
            max_n_digraph: 7,
            max_n_oriented: 8,
            budget: crate::budget::Budget::unlimited(),
        }
    }
}

/// The exact maximum of e_a over H-free graphs of the kind on n labelled
/// vertices, with every maximizer up to isomorphism.
pub fn exact_extremal(
    n: usize,
    h: &Digraph,
    h_name: &str,
    a: &WeightParam,
    kind: GraphKind,
    opts: &ExtremalOptions,
) -> Result<ExtremalCertificate> {
    let cap = match kind {
        GraphKind::Digraph => opts.max_n_digraph,
        GraphKind::Oriented => opts.max_n_oriented,
    };
    if n > cap.min(64) {
        return Err(Error::BudgetExceeded(format!(
            "exact extremal search for n={n} exceeds the configured {kind} cap {cap}"
        )));
    }
    if h.arc_count() == 0 && h.n() <= n {
        return Err(Error::InvalidArgument(
            "no H-free graphs exist: the pattern has no arcs and fits in the host".into(),
        ));
    }

    // per-pair-state scaled contributions; exact mode works on q*e_a
    let (state_vals, tol, exact) = match a.num_den() {
        Some((num, den)) => ([0.0, den as f64, den as f64, num as f64], 0.0, true),
        None => ([0.0, 1.0, 1.0, a.as_f64()], FLOAT_TOL, false),
    };
    let base = kind.pair_states();
    let max_pair = state_vals[..base].iter().fold(0.0f64, |m, &v| m.max(v));

    let pairs = pair_list(n);
    let matcher = Matcher::new(h);
    let mut ctx = EnumCtx::new(n, kind, &pairs, &matcher);

    // seed the incumbent with the best H-free named construction
    let mut best = f64::NEG_INFINITY;
    for seed in seed_candidates(n, kind) {
        if matcher.embeds(&seed) {
            continue;
        }
        let (f1, f2) = seed.pair_counts();
        let v = state_vals[3] * f2 as f64 + state_vals[1] * f1 as f64;
        best = best.max(v);
    }

    let mut witnesses: BTreeMap<String, Digraph> = BTreeMap::new();
    let mut labelled = 0u64;
    let mut ticker = Ticker::new(&opts.budget, "extremal search");

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        ctx: &mut EnumCtx,
        depth: usize,
        pairs_len: usize,
        base: usize,
        state_vals: &[f64; 4],
        max_pair: f64,
        partial: f64,
        tol: f64,
        best: &mut f64,
        witnesses: &mut BTreeMap<String, Digraph>,
        labelled: &mut u64,
        ticker: &mut Ticker,
    ) -> Result<()> {
        ticker.tick()?;
        if depth == pairs_len {
            if partial > *best + tol {
                *best = partial;
                witnesses.clear();
                *labelled = 0;
            }
            if partial >= *best - tol {
                *labelled += 1;
                let canon = canonical_form(ctx.graph());
                witnesses.entry(canon.to_line()).or_insert(canon);
            }
            return Ok(());
        }
        let remaining = (pairs_len - depth) as f64;
        if partial + max_pair * remaining < *best - tol {
            return Ok(());
        }
        for state in 0..base {
            if ctx.apply(depth, state) {
                let res = dfs(
                    ctx,
                    depth + 1,
                    pairs_len,
                    base,
                    state_vals,
                    max_pair,
                    partial + state_vals[state],
                    tol,
                    best,
                    witnesses,
                    labelled,
                    ticker,
                );
                ctx.unapply(depth, state);
                res?;
            }
        }
        Ok(())
    }

    dfs(
        &mut ctx,
        0,
        pairs.len(),
        base,
        &state_vals,
        max_pair,
        0.0,
        tol,
        &mut best,
        &mut witnesses,
        &mut labelled,
        &mut ticker,
    )?;

    if witnesses.is_empty() {
        return Err(Error::InvalidArgument(
            "search finished without a maximizer; no H-free graph of this kind exists".into(),
        ));
    }

    let value = match a.num_den() {
        Some((_, den)) => CertValue::Exact(Rational64::new(best.round() as i64, den)),
        None => CertValue::Float(best),
    };
    let witnesses: Vec<Digraph> = witnesses.into_values().collect();
    Ok(ExtremalCertificate {
        n,
        pattern: h_name.to_string(),
        kind,
        a: a.clone(),
        unique_up_to_iso: witnesses.len() == 1,
        witnesses,
        labelled_maximizer_count: labelled,
        value,
        exact,
    })
}

/// H-free candidates that seed the branch-and-bound incumbent: DT_r(n) in
/// digraph mode, transitively oriented Turán graphs in both modes.
fn seed_candidates(n: usize, kind: GraphKind) -> Vec<Digraph> {
    let mut seeds = Vec::new();
    for r in 1..=n.max(1) {
        if kind == GraphKind::Digraph {
            if let Ok(dt) = turan_graph_digraph(n, r) {
                seeds.push(dt);
            }
        }
        // orient every cross edge from the smaller-labelled part
        let mut bounds = Vec::new();
        let mut start = 0;
        for s in turan_part_sizes(n, r) {
            bounds.push((start, start + s));
            start += s;
        }
        let mut g = Digraph::empty(n);
        for (i, &(a0, a1)) in bounds.iter().enumerate() {
            for &(b0, b1) in &bounds[i + 1..] {
                for u in a0..a1 {
                    for v in b0..b1 {
                        g.add_arc(u, v);
                    }
                }
            }
        }
        seeds.push(g);
    }
    seeds
}

/// DT_r(n) and its weighted size a*t_r(n): the standard lower-bound pair.
pub fn lower_bound_construction(
    n: usize,
    r: usize,
    a: &WeightParam,
) -> Result<(Digraph, CertValue)> {
    let g = turan_graph_digraph(n, r)?;
    let value = match weighted_size_exact(&g, a) {
        Some(v) => CertValue::Exact(v),
        None => CertValue::Float(weighted_size(&g, a)),
    };
    Ok((g, value))
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub ex: CertValue,
    pub lower: CertValue,
    pub gap: CertValue,
    /// Whether DT_r(n) is H-free, which is what makes `lower` a bound.
    pub lower_is_valid: bool,
}

/// ex_a(n, H) against the a*t_r(n) lower bound across a range of n.
pub fn extremal_gap_scan(
    ns: impl IntoIterator<Item = usize>,
    h: &Digraph,
    h_name: &str,
    r: usize,
    a: &WeightParam,
    kind: GraphKind,
    opts: &ExtremalOptions,
) -> Result<Vec<GapRow>> {
    let matcher = Matcher::new(h);
    let mut rows = Vec::new();
    for n in ns {
        let cert = exact_extremal(n, h, h_name, a, kind, opts)?;
        let (dt, lower) = lower_bound_construction(n, r, a)?;
        let lower_is_valid = !matcher.embeds(&dt);
        let gap = match (&cert.value, &lower) {
            (CertValue::Exact(x), CertValue::Exact(l)) => CertValue::Exact(x - l),
            (x, l) => CertValue::Float(x.as_f64() - l.as_f64()),
        };
        rows.push(GapRow {
            n,
            ex: cert.value,
            lower,
            gap,
            lower_is_valid,
        });
    }
    Ok(rows)
}

/// Reference solver: enumerate every labelled graph with no pruning and no
/// symmetry, using the permutation-based containment check. n <= 4.
pub fn naive_extremal(
    n: usize,
    h: &Digraph,
    a: &WeightParam,
    kind: GraphKind,
) -> Result<(CertValue, u64)> {
    if n > 4 {
        return Err(Error::BudgetExceeded(
            "the naive extremal solver is for n <= 4 cross-checks".into(),
        ));
    }
    let pairs = pair_list(n);
    let base = kind.pair_states() as u64;
    let states = base.pow(pairs.len() as u32);
    let mut best = f64::NEG_INFINITY;
    let mut count = 0u64;
    let tol = if a.is_exact() { 0.0 } else { FLOAT_TOL };
    for code in 0..states {
        let mut g = Digraph::empty(n);
        let mut c = code;
        for &(u, v) in &pairs {
            let s = (c % base) as usize;
            c /= base;
            if s == 1 || s == 3 {
                g.add_arc(u, v);
            }
            if s == 2 || s == 3 {
                g.add_arc(v, u);
            }
        }
        if naive_contains(&g, h) {
            continue;
        }
        let v = match a.num_den() {
            Some((num, den)) => {
                let (f1, f2) = g.pair_counts();
                (num * f2 as i64 + den * f1 as i64) as f64
            }
            None => weighted_size(&g, a),
        };
        if v > best + tol {
            best = v;
            count = 1;
        } else if v >= best - tol {
            count += 1;
        }
    }
    let value = match a.num_den() {
        Some((_, den)) => CertValue::Exact(Rational64::new(best.round() as i64, den)),
        None => CertValue::Float(best),
    };
    Ok((value, count))
}
