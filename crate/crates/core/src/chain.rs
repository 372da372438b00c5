//! Spanning-tree recurrences for polygon chains and the expression of every
//! edge as a multiple of one generating edge.
//!
//! For a chain `G_n(k_1,...,k_n)` with shared edges `e_0,...,e_n`, all four
//! families of spanning-tree counts below satisfy first-order recurrences in
//! the side counts, so the whole table costs `O(n)` big-integer operations
//! instead of one determinant per contraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{ChainSpec, EdgeLabel};
use crate::group::AbelianGroup;

/// Spanning-tree counts of every prefix of a chain and of its key
/// contractions, indexed by prefix length `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainInvariants {
    /// `taus[i]` counts the spanning trees of the prefix `G_i`.
    taus: Vec<BigInt>,
    /// Prefix with its designated far edge contracted: `G_i` with `e_i`
    /// collapsed.
    contract_far: Vec<BigInt>,
    /// Prefix with the base edge contracted: `G_i` with `e_0` collapsed.
    contract_base: Vec<BigInt>,
    /// Prefix with both ends contracted. Index 0 is the degenerate value 0:
    /// the trivial chain has only one edge to contract.
    contract_both: Vec<BigInt>,
}

impl ChainInvariants {
    pub fn polygons(&self) -> usize {
        self.taus.len() - 1
    }

    /// Spanning trees of the full chain.
    pub fn tau(&self) -> &BigInt {
        self.taus.last().unwrap()
    }

    pub fn taus(&self) -> &[BigInt] {
        &self.taus
    }

    pub fn contract_far(&self) -> &[BigInt] {
        &self.contract_far
    }

    pub fn contract_base(&self) -> &[BigInt] {
        &self.contract_base
    }

    pub fn contract_both(&self) -> &[BigInt] {
        &self.contract_both
    }

    /// The sandpile group of the chain: cyclic of order `tau`.
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::cyclic(self.tau().clone()).expect("tau is positive")
    }
}

/// Fills the four recurrence tables for a chain.
///
/// Bases: `tau(G_0) = 1`, contracting the single edge of `G_0` leaves one
/// vertex (count 1), and the double contraction is the degenerate 0. Steps,
/// with `k` the new polygon's side count:
///
/// * `tau(G_i)           = (k-1) tau(G_{i-1}) + tau(G_{i-1} . e_{i-1})`
/// * `tau(G_i . e_i)     = (k-2) tau(G_{i-1}) + tau(G_{i-1} . e_{i-1})`
/// * `tau(G_i . e_0)     = (k-1) tau(G_{i-1} . e_0) + tau(G_{i-1} . e_0 . e_{i-1})`
/// * `tau(G_i . e_0 . e_i) = (k-2) tau(G_{i-1} . e_0) + tau(G_{i-1} . e_0 . e_{i-1})`
pub fn chain_invariants(spec: &ChainSpec) -> ChainInvariants {
    let n = spec.polygons();
    let mut taus = Vec::with_capacity(n + 1);
    let mut contract_far = Vec::with_capacity(n + 1);
    let mut contract_base = Vec::with_capacity(n + 1);
    let mut contract_both = Vec::with_capacity(n + 1);
    taus.push(BigInt::one());
    contract_far.push(BigInt::one());
    contract_base.push(BigInt::one());
    contract_both.push(BigInt::zero());
    for (i, &k) in spec.sides().iter().enumerate() {
        let k1 = BigInt::from(k - 1);
        let k2 = BigInt::from(k - 2);
        taus.push(&k1 * &taus[i] + &contract_far[i]);
        contract_far.push(&k2 * &taus[i] + &contract_far[i]);
        contract_base.push(&k1 * &contract_base[i] + &contract_both[i]);
        contract_both.push(&k2 * &contract_base[i] + &contract_both[i]);
    }
    ChainInvariants {
        taus,
        contract_far,
        contract_base,
        contract_both,
    }
}

/// Which end of the chain carries the generating edge that all coefficients
/// refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorEnd {
    /// Coefficients relative to the base edge `e_0`.
    Tail,
    /// Coefficients relative to the designated free edge `e_n` of the last
    /// polygon, obtained by running the same expression on the reversed
    /// side sequence.
    Head,
}

/// Expresses every edge of the chain as a multiple of the generating edge:
/// `e_i` maps to `tau(G_i . e_i)` and each interior edge of polygon `i` maps
/// to `tau(G_{i-1})` (both read from the chosen end). Entries are returned
/// in edge order `e_0`, then per polygon its interiors followed by `e_i`.
pub fn edge_coefficients(spec: &ChainSpec, end: GeneratorEnd) -> Vec<(EdgeLabel, BigInt)> {
    let n = spec.polygons();
    let inv = match end {
        GeneratorEnd::Tail => chain_invariants(spec),
        GeneratorEnd::Head => chain_invariants(&spec.reversed()),
    };
    let boundary = |i: usize| match end {
        GeneratorEnd::Tail => inv.contract_far[i].clone(),
        GeneratorEnd::Head => inv.contract_far[n - i].clone(),
    };
    let interior = |polygon: usize| match end {
        GeneratorEnd::Tail => inv.taus[polygon - 1].clone(),
        GeneratorEnd::Head => inv.taus[n - polygon].clone(),
    };
    let mut out = Vec::new();
    out.push((
        EdgeLabel::Boundary {
            petal: None,
            index: 0,
        },
        boundary(0),
    ));
    for (i, &k) in spec.sides().iter().enumerate() {
        let polygon = i + 1;
        for position in 1..=(k as usize).saturating_sub(2) {
            out.push((
                EdgeLabel::Interior {
                    petal: None,
                    polygon,
                    position,
                },
                interior(polygon),
            ));
        }
        out.push((
            EdgeLabel::Boundary {
                petal: None,
                index: polygon,
            },
            boundary(polygon),
        ));
    }
    out
}

/// Coefficient of one edge relative to the chosen generating end.
pub fn edge_coefficient(spec: &ChainSpec, e: EdgeLabel, end: GeneratorEnd) -> Result<BigInt> {
    edge_coefficients(spec, end)
        .into_iter()
        .find(|(label, _)| *label == e)
        .map(|(_, c)| c)
        .ok_or_else(|| Error::UnknownEdge(e.to_string()))
}

/// Order of an edge in the (cyclic) sandpile group of the chain:
/// `tau / gcd(coefficient, tau)`.
pub fn edge_order(spec: &ChainSpec, e: EdgeLabel) -> Result<BigInt> {
    let tau = chain_invariants(spec).tau().clone();
    let c = edge_coefficient(spec, e, GeneratorEnd::Tail)?;
    Ok(&tau / c.gcd(&tau))
}

/// Whether the edge generates the sandpile group of the chain, i.e. whether
/// its coefficient is coprime to `tau`.
pub fn is_generating_edge_chain(spec: &ChainSpec, e: EdgeLabel) -> Result<bool> {
    let tau = chain_invariants(spec).tau().clone();
    let c = edge_coefficient(spec, e, GeneratorEnd::Tail)?;
    Ok(c.gcd(&tau).is_one())
}

/// The determinant-like identity tying the four contraction counts of a
/// non-trivial chain together; it always evaluates to exactly 1, which is
/// what makes the two-end change of generator unimodular.
pub fn contraction_identity(spec: &ChainSpec) -> Result<BigInt> {
    if spec.is_trivial() {
        return Err(Error::TrivialChain);
    }
    let inv = chain_invariants(spec);
    let n = spec.polygons();
    Ok(&inv.contract_base[n] * &inv.contract_far[n] - &inv.taus[n] * &inv.contract_both[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(ks: &[u32]) -> ChainSpec {
        ChainSpec::new(ks.to_vec()).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn bigs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn single_triangle_table() {
        let inv = chain_invariants(&chain(&[3]));
        assert_eq!(inv.taus(), bigs(&[1, 3]).as_slice());
        assert_eq!(inv.contract_far(), bigs(&[1, 2]).as_slice());
        assert_eq!(inv.contract_base(), bigs(&[1, 2]).as_slice());
        assert_eq!(inv.contract_both(), bigs(&[0, 1]).as_slice());
    }

    #[test]
    fn tau_of_four_squares_is_209() {
        let inv = chain_invariants(&chain(&[4, 4, 4, 4]));
        assert_eq!(inv.taus(), bigs(&[1, 4, 15, 56, 209]).as_slice());
        assert_eq!(inv.tau(), &big(209));
        assert_eq!(inv.group().to_string(), "Z_209");
    }

    #[test]
    fn three_term_recurrence_agrees() {
        // tau(G_i) = k_i tau(G_{i-1}) - tau(G_{i-2}) for i >= 2.
        for ks in [
            vec![3, 3],
            vec![4, 4, 4, 4],
            vec![6, 3, 5, 2, 6],
            vec![2, 2, 2],
        ] {
            let spec = ChainSpec::new(ks.clone()).unwrap();
            let inv = chain_invariants(&spec);
            for i in 2..=ks.len() {
                let expect = BigInt::from(ks[i - 1]) * &inv.taus()[i - 1] - &inv.taus()[i - 2];
                assert_eq!(inv.taus()[i], expect, "{spec} at {i}");
            }
        }
    }

    #[test]
    fn digon_chain_tau_counts_polygons_plus_one() {
        // A stack of n digons is a bundle of n+1 parallel edges.
        let inv = chain_invariants(&chain(&[2, 2, 2]));
        assert_eq!(inv.taus(), bigs(&[1, 2, 3, 4]).as_slice());
        assert_eq!(inv.contract_far(), bigs(&[1, 1, 1, 1]).as_slice());
    }

    #[test]
    fn consecutive_taus_are_coprime() {
        for ks in [
            vec![3, 3],
            vec![4, 4, 4, 4],
            vec![5, 2, 6],
            vec![2, 2, 2, 2],
        ] {
            let inv = chain_invariants(&ChainSpec::new(ks).unwrap());
            for w in inv.taus().windows(2) {
                assert!(w[0].gcd(&w[1]).is_one());
            }
        }
    }

    #[test]
    fn far_edge_contraction_is_coprime_to_tau() {
        for ks in [vec![3], vec![4, 4, 4, 4], vec![6, 3, 5, 2, 6], vec![2, 2]] {
            let inv = chain_invariants(&ChainSpec::new(ks).unwrap());
            let n = inv.polygons();
            assert!(inv.contract_far()[n].gcd(&inv.taus()[n]).is_one());
        }
    }

    #[test]
    fn coefficients_for_small_chains() {
        let got = edge_coefficients(&chain(&[3]), GeneratorEnd::Tail);
        let expect = vec![("e0", 1), ("f1.1", 1), ("e1", 2)];
        assert_eq!(got.len(), expect.len());
        for ((label, c), (name, v)) in got.iter().zip(expect) {
            assert_eq!(label.to_string(), name);
            assert_eq!(c, &big(v));
        }

        let got = edge_coefficients(&chain(&[3, 3]), GeneratorEnd::Tail);
        let expect = vec![("e0", 1), ("f1.1", 1), ("e1", 2), ("f2.1", 3), ("e2", 5)];
        assert_eq!(got.len(), expect.len());
        for ((label, c), (name, v)) in got.iter().zip(expect) {
            assert_eq!(label.to_string(), name);
            assert_eq!(c, &big(v));
        }
    }

    #[test]
    fn coefficients_from_the_far_end() {
        // Reading (5,2,6) from the head is the same as reading (6,2,5) from
        // the tail with the boundary indices flipped.
        let spec = chain(&[5, 2, 6]);
        let head = edge_coefficients(&spec, GeneratorEnd::Head);
        let rev = chain_invariants(&spec.reversed());
        let n = spec.polygons();
        for (label, c) in head {
            match label {
                EdgeLabel::Boundary { index, .. } => {
                    assert_eq!(c, rev.contract_far()[n - index], "{label}");
                }
                EdgeLabel::Interior { polygon, .. } => {
                    assert_eq!(c, rev.taus()[n - polygon], "{label}");
                }
                EdgeLabel::Center(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn coefficient_fixture_209() {
        let spec = chain(&[4, 4, 4, 4]);
        let e2 = EdgeLabel::Boundary {
            petal: None,
            index: 2,
        };
        assert_eq!(
            edge_coefficient(&spec, e2, GeneratorEnd::Tail).unwrap(),
            big(11)
        );
        assert_eq!(edge_order(&spec, e2).unwrap(), big(19));
        assert!(!is_generating_edge_chain(&spec, e2).unwrap());
    }

    #[test]
    fn orders_divide_tau_and_free_edge_generates() {
        for ks in [vec![3, 3], vec![4, 4, 4, 4], vec![5, 2, 6]] {
            let spec = ChainSpec::new(ks).unwrap();
            let tau = chain_invariants(&spec).tau().clone();
            let n = spec.polygons();
            for (label, _) in edge_coefficients(&spec, GeneratorEnd::Tail) {
                let ord = edge_order(&spec, label).unwrap();
                assert!(tau.mod_floor(&ord).is_zero(), "{label}");
            }
            let free = EdgeLabel::Boundary {
                petal: None,
                index: n,
            };
            assert_eq!(edge_order(&spec, free).unwrap(), tau);
            assert!(is_generating_edge_chain(&spec, free).unwrap());
        }
    }

    #[test]
    fn chain_orders_fixtures() {
        let spec = chain(&[3, 3]);
        let e0 = EdgeLabel::Boundary {
            petal: None,
            index: 0,
        };
        let e1 = EdgeLabel::Boundary {
            petal: None,
            index: 1,
        };
        assert_eq!(edge_order(&spec, e0).unwrap(), big(8));
        assert_eq!(edge_order(&spec, e1).unwrap(), big(4));
        assert!(!is_generating_edge_chain(&spec, e1).unwrap());
    }

    #[test]
    fn identity_is_exactly_one() {
        for ks in [vec![3], vec![3, 3], vec![5, 2, 6], vec![2], vec![2, 2, 4]] {
            let spec = ChainSpec::new(ks).unwrap();
            assert_eq!(contraction_identity(&spec).unwrap(), big(1), "{spec}");
        }
        assert_eq!(
            contraction_identity(&ChainSpec::trivial()),
            Err(Error::TrivialChain)
        );
    }

    #[test]
    fn trivial_chain_coefficients() {
        let got = edge_coefficients(&ChainSpec::trivial(), GeneratorEnd::Tail);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].1, big(1));
        let e0 = EdgeLabel::Boundary {
            petal: None,
            index: 0,
        };
        assert_eq!(edge_order(&ChainSpec::trivial(), e0).unwrap(), big(1));
    }

    #[test]
    fn long_chains_stay_exact() {
        // 400 polygons of side 9: tau has hundreds of digits, and the
        // arithmetic identities still hold digit-exactly.
        let spec = chain(&vec![9; 400]);
        let inv = chain_invariants(&spec);
        assert!(inv.tau().to_string().len() > 300);
        assert_eq!(contraction_identity(&spec).unwrap(), big(1));
        assert!(inv.taus()[399].gcd(&inv.taus()[400]).is_one());
        assert!(inv.contract_far()[400].gcd(&inv.taus()[400]).is_one());
        let free = EdgeLabel::Boundary {
            petal: None,
            index: 400,
        };
        assert_eq!(&edge_order(&spec, free).unwrap(), inv.tau());
    }
}
