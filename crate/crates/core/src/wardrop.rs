//! Latencies turning an embedding into a concrete paradox, with exact
//! equilibrium latencies before and after removing the middle branch.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::detector::{validate_embedding, WEmbedding};
use crate::error::{InvariantError, WardropError};
use crate::net::{EdgeId, Net, Path};
use crate::oracle::enumerate_simple_st_paths;

pub type Rational = Ratio<i64>;

pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Latency of one edge as a function of its flow `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Latency {
    Constant(#[serde(serialize_with = "serialize_rational")] Rational),
    /// `l(x) = x`.
    Linear,
    /// Stands in for an infinite latency; evaluates to the assignment's `M`.
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatencyAssignment {
    pub latencies: BTreeMap<EdgeId, Latency>,
    #[serde(serialize_with = "serialize_rational")]
    pub big_m: Rational,
}

impl LatencyAssignment {
    pub fn eval(&self, edge: EdgeId, flow: Rational) -> Rational {
        match self.latencies[&edge] {
            Latency::Constant(q) => q,
            Latency::Linear => flow,
            Latency::Blocked => self.big_m,
        }
    }

    fn is_blocked(&self, edge: EdgeId) -> bool {
        self.latencies[&edge] == Latency::Blocked
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    #[serde(serialize_with = "serialize_rational")]
    pub demand: Rational,
    #[serde(rename = "L_full", serialize_with = "serialize_rational")]
    pub l_full: Rational,
    #[serde(rename = "L_sub", serialize_with = "serialize_rational")]
    pub l_sub: Rational,
    pub paradox: bool,
}

/// Zero on the middle branch and the tails, `x` on the first edge of `a~>b`
/// and `c~>d`, `1` on the first edge of `a~>c` and `b~>d`, zero on the rest
/// of those branches, and blocked everywhere else.
pub fn build_latencies(net: &Net, w: &WEmbedding) -> Result<LatencyAssignment, WardropError> {
    if !validate_embedding(net, w) {
        return Err(WardropError::InvalidEmbedding);
    }
    let big_m = Rational::from_integer(1 + net.edge_count() as i64);
    let mut latencies: BTreeMap<EdgeId, Latency> =
        net.edges().map(|e| (e.id, Latency::Blocked)).collect();
    let zero = Latency::Constant(Rational::zero());
    for p in [&w.bc, &w.source_tail, &w.target_tail] {
        for &e in p.edges() {
            latencies.insert(e, zero);
        }
    }
    let mut first_edge = |p: &Path, first: Latency| {
        for (i, &e) in p.edges().iter().enumerate() {
            latencies.insert(e, if i == 0 { first } else { zero });
        }
    };
    first_edge(&w.ab, Latency::Linear);
    first_edge(&w.cd, Latency::Linear);
    first_edge(&w.ac, Latency::Constant(Rational::one()));
    first_edge(&w.bd, Latency::Constant(Rational::one()));
    Ok(LatencyAssignment { latencies, big_m })
}

fn route(parts: &[&Path]) -> Path {
    parts[1..]
        .iter()
        .fold(parts[0].clone(), |acc, p| acc.concat(p))
}

/// Checks that `flows` (path, amount) is a Wardrop equilibrium on `net` and
/// returns its common latency.
fn wardrop_latency(
    net: &Net,
    lat: &LatencyAssignment,
    flows: &[(Path, Rational)],
) -> Result<Rational, InvariantError> {
    let mut edge_flow: BTreeMap<EdgeId, Rational> = BTreeMap::new();
    for (p, f) in flows {
        for &e in p.edges() {
            *edge_flow.entry(e).or_insert_with(Rational::zero) += *f;
        }
    }
    let latency = |p: &Path| -> Rational {
        p.edges()
            .iter()
            .map(|&e| lat.eval(e, edge_flow.get(&e).copied().unwrap_or_else(Rational::zero)))
            .sum()
    };
    let common = latency(&flows[0].0);
    for (p, _) in flows {
        if p.edges().iter().any(|&e| lat.is_blocked(e)) {
            return Err(InvariantError(
                "equilibrium route uses a blocked edge".into(),
            ));
        }
        if latency(p) != common {
            return Err(InvariantError(
                "used routes have different latencies".into(),
            ));
        }
    }
    let open = net.retain_edges(|e| !lat.is_blocked(e.id));
    let paths = enumerate_simple_st_paths(&open).map_err(|e| InvariantError(e.to_string()))?;
    if paths.iter().any(|p| latency(p) < common) {
        return Err(InvariantError(
            "an unused route is faster than the used ones".into(),
        ));
    }
    if common >= lat.big_m {
        return Err(InvariantError(
            "blocking constant does not exceed the equilibrium latency".into(),
        ));
    }
    Ok(common)
}

/// Equilibrium latencies at demand `r` in `(0, 1]`, for the whole net and
/// for the net without the middle branch `b~>c`.
pub fn equilibrium(
    net: &Net,
    w: &WEmbedding,
    lat: &LatencyAssignment,
    r: Rational,
) -> Result<EquilibriumReport, WardropError> {
    if r <= Rational::zero() || r > Rational::one() {
        return Err(WardropError::DemandOutOfRange(r.to_string()));
    }
    if !validate_embedding(net, w) {
        return Err(WardropError::InvalidEmbedding);
    }
    let (s, t) = (&w.source_tail, &w.target_tail);
    let zigzag = route(&[s, &w.ab, &w.bc, &w.cd, t]);
    let upper = route(&[s, &w.ab, &w.bd, t]);
    let lower = route(&[s, &w.ac, &w.cd, t]);

    let l_full = wardrop_latency(net, lat, &[(zigzag, r)])?;
    let sub = net.without_edges(w.bc.edges().iter().copied());
    let half = r / 2;
    let l_sub = wardrop_latency(&sub, lat, &[(upper, half), (lower, half)])?;

    if l_full != r * 2 || l_sub != Rational::one() + half {
        return Err(
            InvariantError("equilibrium latencies differ from the closed forms".into()).into(),
        );
    }
    Ok(EquilibriumReport {
        demand: r,
        l_full,
        l_sub,
        paradox: l_full > l_sub,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::wheatstone;
    use crate::oracle::has_w_embedding;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn setup() -> (Net, WEmbedding, LatencyAssignment) {
        let net = wheatstone();
        let w = has_w_embedding(&net).unwrap().unwrap();
        let lat = build_latencies(&net, &w).unwrap();
        (net, w, lat)
    }

    #[test]
    fn wheatstone_labels() {
        let (_, _, lat) = setup();
        let one = Latency::Constant(q(1, 1));
        let expected = [
            Latency::Linear,
            one,
            Latency::Constant(q(0, 1)),
            one,
            Latency::Linear,
        ];
        assert_eq!(
            lat.latencies.values().copied().collect::<Vec<_>>(),
            expected
        );
    }

    #[test]
    fn subdivided_and_extra_edges() {
        // b -> d through 4, plus an unused edge s -> t.
        let net = Net::from_edges(
            5,
            [(0, 1), (0, 2), (1, 2), (1, 4), (4, 3), (2, 3), (0, 3)],
            0,
            3,
        )
        .unwrap();
        let w = has_w_embedding(&net).unwrap().unwrap();
        let lat = build_latencies(&net, &w).unwrap();
        assert_eq!(lat.latencies[&3], Latency::Constant(q(1, 1)));
        assert_eq!(lat.latencies[&4], Latency::Constant(q(0, 1)));
        assert_eq!(lat.latencies[&6], Latency::Blocked);
        assert_eq!(lat.big_m, q(8, 1));
        assert!(equilibrium(&net, &w, &lat, q(1, 1)).unwrap().paradox);
    }

    #[test]
    fn demand_examples() {
        let (net, w, lat) = setup();
        let r1 = equilibrium(&net, &w, &lat, q(1, 1)).unwrap();
        assert_eq!((r1.l_full, r1.l_sub, r1.paradox), (q(2, 1), q(3, 2), true));
        let r23 = equilibrium(&net, &w, &lat, q(2, 3)).unwrap();
        assert_eq!(
            (r23.l_full, r23.l_sub, r23.paradox),
            (q(4, 3), q(4, 3), false)
        );
        let rh = equilibrium(&net, &w, &lat, q(1, 2)).unwrap();
        assert_eq!((rh.l_full, rh.l_sub, rh.paradox), (q(1, 1), q(5, 4), false));
    }

    #[test]
    fn demand_range() {
        let (net, w, lat) = setup();
        assert!(matches!(
            equilibrium(&net, &w, &lat, q(0, 1)),
            Err(WardropError::DemandOutOfRange(_))
        ));
        assert!(equilibrium(&net, &w, &lat, q(3, 2)).is_err());
    }

    #[test]
    fn serialized_as_strings() {
        let (net, w, lat) = setup();
        let r = equilibrium(&net, &w, &lat, q(1, 1)).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["L_full"], "2");
        assert_eq!(json["L_sub"], "3/2");
    }
}
