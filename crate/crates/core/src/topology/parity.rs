use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::Chain;
use crate::error::{Error, Result};
use crate::paths::{TraceComplex, TraceDecoratedEdge};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityVariant {
    /// Mean sign over consecutive pairs of the trace.
    #[default]
    AdjacentPairs,
    /// Mean sign over all ordered pairs `a < b` of trace positions.
    AllPairs,
}

impl ParityVariant {
    pub const ALL: [ParityVariant; 2] = [ParityVariant::AdjacentPairs, ParityVariant::AllPairs];

    pub fn name(self) -> &'static str {
        match self {
            ParityVariant::AdjacentPairs => "adjacent-pairs",
            ParityVariant::AllPairs => "all-pairs",
        }
    }
}

impl fmt::Display for ParityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParityVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacent-pairs" | "adjacent" => Ok(ParityVariant::AdjacentPairs),
            "all-pairs" => Ok(ParityVariant::AllPairs),
            _ => Err(Error::invalid(format!("unknown parity variant `{s}`"))),
        }
    }
}

/// An exact rational, always in lowest terms with a positive denominator.
/// Serialized as `"p/q"`, or `"p"` when integral.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityValue(pub BigRational);

impl ParityValue {
    pub fn zero() -> Self {
        ParityValue(BigRational::zero())
    }

    pub fn integer(n: i64) -> Self {
        ParityValue(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ParityValue(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for ParityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational's Display already omits a unit denominator
        write!(f, "{}", self.0)
    }
}

impl FromStr for ParityValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad rational `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, BigInt::from(1)),
        };
        if BigInt::is_zero(&d) {
            return Err(bad());
        }
        Ok(ParityValue(BigRational::new(n, d)))
    }
}

impl Serialize for ParityValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ParityValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn sign(a: usize, b: usize) -> i64 {
    match b.cmp(&a) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Monotonicity score of a clause trace: `+1` for strictly increasing,
/// `-1` for strictly decreasing. A single clause has no pairs and scores 0.
pub fn trace_parity(trace: &[usize], variant: ParityVariant) -> Result<ParityValue> {
    let k = trace.len();
    if k == 0 {
        return Err(Error::invalid("parity of an empty trace"));
    }
    if k == 1 {
        return Ok(ParityValue::zero());
    }
    let (sum, pairs) = match variant {
        ParityVariant::AdjacentPairs => (trace.windows(2).map(|w| sign(w[0], w[1])).sum::<i64>(), k - 1),
        ParityVariant::AllPairs => {
            let mut s = 0;
            for a in 0..k {
                for b in a + 1..k {
                    s += sign(trace[a], trace[b]);
                }
            }
            (s, k * (k - 1) / 2)
        }
    };
    Ok(ParityValue::ratio(sum, pairs as i64))
}

pub fn parity(edge: &TraceDecoratedEdge, variant: ParityVariant) -> Result<ParityValue> {
    trace_parity(&edge.trace, variant)
}

/// Linear extension of [`parity`] to 1-chains of a trace complex.
pub fn parity_chain(tc: &TraceComplex, chain: &Chain, variant: ParityVariant) -> Result<ParityValue> {
    if chain.degree() != 1 {
        return Err(Error::invalid(format!(
            "parity is defined on 1-chains, got degree {}",
            chain.degree()
        )));
    }
    let mut acc = BigRational::zero();
    for (i, coeff) in chain.terms() {
        let edge = tc.edges.get(i).ok_or_else(|| {
            Error::invalid(format!("chain index {i} outside the {} edges", tc.edges.len()))
        })?;
        acc += parity(edge, variant)?.0 * BigRational::from_integer(coeff.clone());
    }
    Ok(ParityValue(acc))
}

/// A degree-2 generator whose boundary has nonzero parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityViolation {
    pub triangle: usize,
    pub label: String,
    pub value: ParityValue,
}

/// `ρ(d₂σ)` for every degree-2 generator `σ`, keeping the nonzero ones.
pub fn parity_boundary_audit(tc: &TraceComplex, variant: ParityVariant) -> Result<Vec<ParityViolation>> {
    let d2 = tc.complex.boundary(2);
    let mut out = Vec::new();
    for (t, tri) in tc.triangles.iter().enumerate() {
        let col = d2.column(t);
        let chain = Chain::from_dense(1, &col);
        let value = parity_chain(tc, &chain, variant)?;
        if !value.is_zero() {
            out.push(ParityViolation {
                triangle: t,
                label: tri.label(),
                value,
            });
        }
    }
    Ok(out)
}

/// Audit results under both variants, side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityAudit {
    pub variant: ParityVariant,
    pub triangles: usize,
    pub violations: Vec<ParityViolation>,
}

pub fn audit_all_variants(tc: &TraceComplex) -> Result<Vec<ParityAudit>> {
    ParityVariant::ALL
        .iter()
        .map(|&variant| {
            Ok(ParityAudit {
                variant,
                triangles: tc.triangles.len(),
                violations: parity_boundary_audit(tc, variant)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{build_trace_complex, TraceShape};
    use crate::verifier::{all_orders, natural_order, Assignment, CnfFormula};

    fn p(trace: &[usize], v: ParityVariant) -> ParityValue {
        trace_parity(trace, v).unwrap()
    }

    #[test]
    fn monotone_traces() {
        for v in ParityVariant::ALL {
            assert_eq!(p(&[0, 1, 2], v), ParityValue::integer(1));
            assert_eq!(p(&[2, 1, 0], v), ParityValue::integer(-1));
        }
        assert_eq!(p(&[0, 2, 1], ParityVariant::AdjacentPairs), ParityValue::zero());
        // pairs (0,2)+ (0,1)+ (2,1)- → 1/3
        assert_eq!(p(&[0, 2, 1], ParityVariant::AllPairs), ParityValue::ratio(1, 3));
        assert_eq!(p(&[4], ParityVariant::AllPairs), ParityValue::zero());
        assert!(trace_parity(&[], ParityVariant::AdjacentPairs).is_err());
    }

    #[test]
    fn value_text_round_trip() {
        for v in [ParityValue::ratio(-2, 6), ParityValue::integer(2), ParityValue::zero()] {
            let s = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<ParityValue>(&s).unwrap(), v);
        }
        assert_eq!(ParityValue::ratio(-2, 6).to_string(), "-1/3");
        assert_eq!(ParityValue::integer(2).to_string(), "2");
        assert!("1/0".parse::<ParityValue>().is_err());
    }

    #[test]
    fn chain_parity_is_linear_and_checks_degree() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap();
        let a: Assignment = "TT".parse().unwrap();
        let tc = build_trace_complex(&f, &a, &[natural_order(3)], TraceShape::Plain).unwrap();
        let three = Chain::from_terms(1, [(0, BigInt::from(3))]);
        assert_eq!(parity_chain(&tc, &three, ParityVariant::AdjacentPairs).unwrap(), ParityValue::integer(3));
        assert!(parity_chain(&tc, &Chain::zero(1), ParityVariant::AllPairs).unwrap().is_zero());
        assert!(parity_chain(&tc, &Chain::zero(0), ParityVariant::AllPairs).is_err());
    }

    #[test]
    fn audit_of_natural_order_is_clean_and_all_orders_is_not() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap();
        let a: Assignment = "TT".parse().unwrap();
        let tc = build_trace_complex(&f, &a, &[natural_order(3)], TraceShape::Subdivided).unwrap();
        for v in ParityVariant::ALL {
            assert!(parity_boundary_audit(&tc, v).unwrap().is_empty());
        }
        let tc = build_trace_complex(&f, &a, &all_orders(3, 10).unwrap(), TraceShape::Subdivided).unwrap();
        // (0,2,1) split after 0: ρ(2,1) − ρ(0,2,1) + ρ(0) = −1 − 0 + 0
        let adj = parity_boundary_audit(&tc, ParityVariant::AdjacentPairs).unwrap();
        assert!(!adj.is_empty());
        assert!(adj.iter().any(|v| v.value == ParityValue::integer(-1)));
        let plain = build_trace_complex(&f, &a, &[natural_order(3)], TraceShape::Plain).unwrap();
        assert!(parity_boundary_audit(&plain, ParityVariant::AllPairs).unwrap().is_empty());
    }
}
