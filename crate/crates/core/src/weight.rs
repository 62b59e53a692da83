//! The weight parameter `a` and the weighted size e_a(G) = a*f2 + f1.

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Absolute tolerance for comparisons of float-weighted sizes.
pub const FLOAT_TOL: f64 = 1e-9;

/// Weight a >= 1 applied to 2-cycles. Carries an exact rational when one
/// exists; a = log2(3) (the oriented counting weight) is float-only.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParam {
    rational: Option<Rational64>,
    float: f64,
}

impl WeightParam {
    pub fn from_rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("weight denominator is zero".into()));
        }
        let r = Rational64::new(num, den);
        if r < Rational64::from_integer(1) {
            return Err(Error::InvalidArgument(format!(
                "weight a = {num}/{den} is below 1"
            )));
        }
        Ok(WeightParam {
            rational: Some(r),
            float: r.to_f64().unwrap(),
        })
    }

    pub fn from_integer(a: i64) -> Result<Self> {
        Self::from_rational(a, 1)
    }

    /// a = 2: e_a counts arcs, the digraph-counting weight.
    pub fn digraph_counting() -> Self {
        Self::from_integer(2).unwrap()
    }

    /// a = log2(3) ~ 1.5849625007: the oriented-counting weight. Irrational,
    /// so certificates computed with it are marked non-exact.
    pub fn oriented_counting() -> Self {
        WeightParam {
            rational: None,
            float: 3f64.log2(),
        }
    }

    pub fn from_float(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 1.0 {
            return Err(Error::InvalidArgument(format!("weight a = {a} is below 1")));
        }
        Ok(WeightParam {
            rational: None,
            float: a,
        })
    }

    pub fn as_f64(&self) -> f64 {
        self.float
    }

    pub fn rational(&self) -> Option<Rational64> {
        self.rational
    }

    pub fn is_exact(&self) -> bool {
        self.rational.is_some()
    }

    /// (numerator, denominator) when exact; scaled integer arithmetic in the
    /// search kernels uses den*e_a = num*f2 + den*f1.
    pub fn num_den(&self) -> Option<(i64, i64)> {
        self.rational.map(|r| (*r.numer(), *r.denom()))
    }
}

impl std::fmt::Display for WeightParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.rational {
            Some(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{:.10}", self.float),
        }
    }
}

/// Format with 10 significant digits, plain decimal notation.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// e_a(G) = a*f2(G) + f1(G).
pub fn weighted_size(g: &Digraph, w: &WeightParam) -> f64 {
    let (f1, f2) = g.pair_counts();
    w.as_f64() * f2 as f64 + f1 as f64
}

/// Exact e_a(G) when the weight is rational.
pub fn weighted_size_exact(g: &Digraph, w: &WeightParam) -> Option<Rational64> {
    let (f1, f2) = g.pair_counts();
    w.rational()
        .map(|a| a * Rational64::from_integer(f2 as i64) + Rational64::from_integer(f1 as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{directed_cycle, turan_graph_digraph, Digraph};

    #[test]
    fn weighted_size_examples() {
        let a2 = WeightParam::digraph_counting();
        assert_eq!(weighted_size(&Digraph::empty(5), &a2), 0.0);
        let dt24 = turan_graph_digraph(4, 2).unwrap();
        assert_eq!(weighted_size(&dt24, &a2), 8.0);
        assert_eq!(
            weighted_size_exact(&dt24, &a2),
            Some(Rational64::from_integer(8))
        );
        let c3 = directed_cycle(3).unwrap();
        assert_eq!(weighted_size(&c3, &a2), 3.0);
    }

    #[test]
    fn weight_validation() {
        assert!(WeightParam::from_rational(1, 2).is_err());
        assert!(WeightParam::from_rational(1, 0).is_err());
        assert!(WeightParam::from_float(0.5).is_err());
        assert!(WeightParam::from_float(f64::NAN).is_err());
        let w = WeightParam::from_rational(7, 4).unwrap();
        assert_eq!(w.num_den(), Some((7, 4)));
        assert_eq!(w.to_string(), "7/4");
        assert_eq!(WeightParam::digraph_counting().to_string(), "2");
        let o = WeightParam::oriented_counting();
        assert!(!o.is_exact());
        assert!((o.as_f64() - 1.5849625007).abs() < 1e-9);
    }

    #[test]
    fn a1_counts_adjacent_pairs() {
        let g = Digraph::from_arcs(4, &[(0, 1), (1, 0), (2, 3), (0, 2)]);
        let a1 = WeightParam::from_integer(1).unwrap();
        let (f1, f2) = g.pair_counts();
        assert_eq!(weighted_size(&g, &a1), (f1 + f2) as f64);
        assert_eq!(weighted_size(&g, &a1), 3.0);
    }
}
