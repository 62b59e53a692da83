//! Dense bit-matrix digraphs, the named constructions, and the `D <n> <hex>`
//! text format.
//!
//! Vertices are `0..n`. Each row of the adjacency matrix is stored as a run
//! of 64-bit words, so for `n <= 64` every row is a single machine word and
//! the containment/enumeration kernels operate on word masks directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Hard cap on graph order; the tool targets desk-scale instances.
pub const MAX_VERTICES: usize = 512;

/// Oriented graphs forbid 2-cycles; general digraphs allow them.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GraphKind {
    Oriented,
    Digraph,
}

impl GraphKind {
    /// States per unordered vertex pair: {none, u->v, v->u} plus {both} for
    /// general digraphs.
    pub fn pair_states(self) -> usize {
        match self {
            GraphKind::Oriented => 3,
            GraphKind::Digraph => 4,
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Oriented => write!(f, "oriented"),
            GraphKind::Digraph => write!(f, "digraph"),
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oriented" => Ok(GraphKind::Oriented),
            "digraph" => Ok(GraphKind::Digraph),
            other => Err(Error::Parse(format!(
                "unknown graph kind '{other}' (expected 'oriented' or 'digraph')"
            ))),
        }
    }
}

/// A loop-free directed graph on labelled vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph order {n} exceeds {MAX_VERTICES}");
        let words = n.div_ceil(64);
        Digraph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(u, v) in arcs {
            g.add_arc(u, v);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row (1 for all n <= 64).
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    /// All rows, one word per row; callers must ensure n <= 64.
    #[inline]
    pub(crate) fn rows_words1(&self) -> &[u64] {
        debug_assert!(self.words <= 1);
        &self.bits
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 != 0
    }

    #[inline]
    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not representable");
        assert!(u < self.n && v < self.n);
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    pub fn set_arc(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.add_arc(u, v);
        } else {
            self.remove_arc(u, v);
        }
    }

    /// Total number of arcs e(G).
    pub fn arc_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of unordered pairs joined by exactly one arc.
    pub fn f1(&self) -> usize {
        let (f1, _) = self.pair_counts();
        f1
    }

    /// Number of unordered pairs joined by arcs in both directions (2-cycles).
    pub fn f2(&self) -> usize {
        let (_, f2) = self.pair_counts();
        f2
    }

    /// (f1, f2) in one pass.
    pub fn pair_counts(&self) -> (usize, usize) {
        let mut f1 = 0;
        let mut f2 = 0;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                match (self.has_arc(u, v), self.has_arc(v, u)) {
                    (true, true) => f2 += 1,
                    (false, false) => {}
                    _ => f1 += 1,
                }
            }
        }
        (f1, f2)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(u, v)).count()
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).map(move |v| (u, v)))
    }

    /// True iff the graph has no 2-cycles.
    pub fn is_oriented(&self) -> bool {
        self.f2() == 0
    }

    /// A value is legal under `Oriented` iff it has no 2-cycles; every
    /// loop-free graph is a legal `Digraph`.
    pub fn is_legal(&self, kind: GraphKind) -> bool {
        match kind {
            GraphKind::Oriented => self.is_oriented(),
            GraphKind::Digraph => true,
        }
    }

    /// Subgraph induced on `verts`; vertex i of the result is `verts[i]`.
    pub fn induced(&self, verts: &[usize]) -> Digraph {
        let mut g = Digraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if i != j && self.has_arc(u, v) {
                    g.add_arc(i, j);
                }
            }
        }
        g
    }

    /// Unordered adjacent pairs of the underlying undirected graph.
    pub fn underlying_edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_arc(u, v) || self.has_arc(v, u) {
                    es.push((u, v));
                }
            }
        }
        es
    }

    /// `D <n> <hex>` line; see the module docs for the bit layout.
    pub fn to_line(&self) -> String {
        let nbits = self.n * self.n;
        let mut s = format!("D {}", self.n);
        if nbits > 0 {
            s.push(' ');
            let mut nibble = 0u8;
            let mut filled = 0;
            for u in 0..self.n {
                for v in 0..self.n {
                    nibble <<= 1;
                    if u != v && self.has_arc(u, v) {
                        nibble |= 1;
                    }
                    filled += 1;
                    if filled == 4 {
                        s.push(char::from_digit(nibble as u32, 16).unwrap());
                        nibble = 0;
                        filled = 0;
                    }
                }
            }
            if filled > 0 {
                nibble <<= 4 - filled;
                s.push(char::from_digit(nibble as u32, 16).unwrap());
            }
        }
        s
    }

    /// Parse a `D <n> <hex>` line. Rejects nonzero diagonal bits, nonzero
    /// padding bits, and hex of the wrong length.
    pub fn parse_line(line: &str) -> Result<Digraph> {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("D") => {}
            _ => return Err(Error::Parse("graph line must start with 'D'".into())),
        }
        let n: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|_| Error::Parse("vertex count is not an integer".into()))?;
        if n > MAX_VERTICES {
            return Err(Error::Parse(format!(
                "vertex count {n} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        let nbits = n * n;
        let expect_digits = nbits.div_ceil(4);
        let hex = toks.next().unwrap_or("");
        if toks.next().is_some() {
            return Err(Error::Parse("trailing tokens after hex field".into()));
        }
        if hex.len() != expect_digits {
            return Err(Error::Parse(format!(
                "expected {expect_digits} hex digits for n={n}, got {}",
                hex.len()
            )));
        }
        let mut g = Digraph::empty(n);
        for (d, c) in hex.chars().enumerate() {
            let val = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit '{c}'")))?;
            for k in 0..4 {
                if val >> (3 - k) & 1 == 0 {
                    continue;
                }
                let pos = d * 4 + k;
                if pos >= nbits {
                    return Err(Error::Parse("nonzero padding bits".into()));
                }
                let (u, v) = (pos / n, pos % n);
                if u == v {
                    return Err(Error::Parse(format!("nonzero diagonal bit at vertex {u}")));
                }
                g.add_arc(u, v);
            }
        }
        Ok(g)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph({})", self.to_line())
    }
}

impl FromStr for Digraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_line(s)
    }
}

/// Transitive tournament T_k: arc i->j iff i < j.
pub fn transitive_tournament(k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "transitive tournament needs at least one vertex".into(),
        ));
    }
    let mut g = Digraph::empty(k);
    for i in 0..k {
        for j in (i + 1)..k {
            g.add_arc(i, j);
        }
    }
    Ok(g)
}

/// Replace every vertex of `h` with an independent set of size `t`, lifting
/// each arc to all t*t part-to-part arcs. Vertex (i, s) gets label i*t + s.
pub fn blow_up(h: &Digraph, t: usize) -> Result<Digraph> {
    if t == 0 {
        return Err(Error::InvalidArgument("blow-up factor must be >= 1".into()));
    }
    let m = h.n() * t;
    let mut g = Digraph::empty(m);
    for (i, j) in h.arcs() {
        for s in 0..t {
            for s2 in 0..t {
                g.add_arc(i * t + s, j * t + s2);
            }
        }
    }
    Ok(g)
}

/// Sizes of the parts of Tu_r(n): larger parts get the smaller labels.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    (0..r)
        .map(|i| n / r + if i < n % r { 1 } else { 0 })
        .collect()
}

/// DT_r(n): the balanced complete r-partite graph with every edge replaced
/// by a pair of opposite arcs. Part 0 = {0, .., ceil(n/r)-1}, and so on.
pub fn turan_graph_digraph(n: usize, r: usize) -> Result<Digraph> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let sizes = turan_part_sizes(n, r);
    let mut g = Digraph::empty(n);
    let mut start = 0;
    let mut bounds = Vec::with_capacity(r);
    for s in &sizes {
        bounds.push((start, start + s));
        start += s;
    }
    for (i, &(a0, a1)) in bounds.iter().enumerate() {
        for &(b0, b1) in &bounds[i + 1..] {
            for u in a0..a1 {
                for v in b0..b1 {
                    g.add_arc(u, v);
                    g.add_arc(v, u);
                }
            }
        }
    }
    Ok(g)
}

/// t_r(n) = e(Tu_r(n)) = C(n,2) - sum_i C(n_i,2) with balanced part sizes.
pub fn turan_number(n: usize, r: usize) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let choose2 = |m: usize| (m * m.saturating_sub(1) / 2) as u64;
    Ok(choose2(n)
        - turan_part_sizes(n, r)
            .iter()
            .map(|&s| choose2(s))
            .sum::<u64>())
}

/// Directed k-cycle 0 -> 1 -> .. -> k-1 -> 0.
pub fn directed_cycle(k: usize) -> Result<Digraph> {
    if k < 2 {
        return Err(Error::InvalidArgument("cycle needs at least 2 vertices".into()));
    }
    let mut g = Digraph::empty(k);
    for i in 0..k {
        g.add_arc(i, (i + 1) % k);
    }
    Ok(g)
}

/// Complete digraph DK_n: both arcs between every vertex pair.
pub fn complete_digraph(n: usize) -> Digraph {
    let mut g = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                g.add_arc(u, v);
            }
        }
    }
    g
}
