//! The closed-form sandpile group of a polygon flower.
//!
//! Everything about `S(F)` is driven by two numbers per petal: the
//! spanning-tree count `p_i` of the petal chain and the count `q_i` after
//! contracting its attachment edge. One generator per petal (the far free
//! edge `f_i`) yields a t x t relation matrix with rows
//! `(p_i, -p_{i+1})` and a final row `q`, and the invariant factors fall out
//! of gcds of products of the `p_i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chain::{chain_invariants, edge_coefficients, GeneratorEnd};
use crate::error::{Error, Result};
use crate::graph::{build_flower, ChainSpec, EdgeLabel, FlowerSpec};
use crate::group::AbelianGroup;
use crate::matrix::IntMatrix;
use crate::oracle::ElementOrders;

/// Exhaustive searches over subsets and partitions of the petal counts are
/// kept to desk scale.
const MAX_PARTITION_PETALS: usize = 10;

/// The per-petal spanning-tree data of a flower and the relation matrix
/// built from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerInvariants {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    tau: BigInt,
    relation_matrix: IntMatrix,
}

impl FlowerInvariants {
    /// Spanning-tree counts of the petals (1 for a trivial petal).
    pub fn p(&self) -> &[BigInt] {
        &self.p
    }

    /// Spanning-tree counts of the petals with their attachment edge
    /// contracted (1 for a trivial petal).
    pub fn q(&self) -> &[BigInt] {
        &self.q
    }

    /// Spanning trees of the whole flower.
    pub fn tau(&self) -> &BigInt {
        &self.tau
    }

    /// The t x t relation matrix over the petal generators.
    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }
}

/// Computes `p`, `q`, `tau(F)` and the relation matrix for a flower.
/// `tau(F)` is evaluated denominator-free as `sum_i q_i prod_{j != i} p_j`.
pub fn flower_invariants(spec: &FlowerSpec) -> FlowerInvariants {
    let t = spec.center_len();
    let mut p = Vec::with_capacity(t);
    let mut q = Vec::with_capacity(t);
    for petal in spec.petals() {
        if petal.is_trivial() {
            p.push(BigInt::one());
            q.push(BigInt::one());
        } else {
            let inv = chain_invariants(petal);
            let n = petal.polygons();
            p.push(inv.taus()[n].clone());
            q.push(inv.contract_base()[n].clone());
        }
    }
    let tau = cleared_sum(&p, &q);
    let mut r = IntMatrix::zeros(t, t);
    for i in 0..t - 1 {
        *r.entry_mut(i, i) = p[i].clone();
        *r.entry_mut(i, i + 1) = -p[i + 1].clone();
    }
    for (j, qj) in q.iter().enumerate() {
        *r.entry_mut(t - 1, j) = qj.clone();
    }
    FlowerInvariants {
        p,
        q,
        tau,
        relation_matrix: r,
    }
}

/// `sum_i q_i prod_{j != i} p_j` in exact integer arithmetic.
fn cleared_sum(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let mut total = BigInt::zero();
    for (i, qi) in q.iter().enumerate() {
        let mut term = qi.clone();
        for (j, pj) in p.iter().enumerate() {
            if j != i {
                term *= pj;
            }
        }
        total += term;
    }
    total
}

/// gcd of the products of all `k`-element subsets of `values`; 1 for `k = 0`.
fn subset_product_gcd(values: &[BigInt], k: usize) -> BigInt {
    fn go(values: &[BigInt], start: usize, left: usize, acc: &BigInt, g: &mut BigInt) {
        if g.is_one() {
            return;
        }
        if left == 0 {
            *g = g.gcd(acc);
            return;
        }
        // Not enough entries remain.
        if values.len() - start < left {
            return;
        }
        for i in start..=values.len() - left {
            go(values, i + 1, left - 1, &(acc * &values[i]), g);
        }
    }
    if k == 0 {
        return BigInt::one();
    }
    let mut g = BigInt::zero();
    go(values, 0, k, &BigInt::one(), &mut g);
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

/// Assembles the invariant factors from the gcd chain
/// `d_k = gcd of k-fold products` of `values`:
/// `(d_1/d_0, ..., d_{t-2}/d_{t-3}, tau/d_{t-2})`, unit factors stripped.
fn assemble_dchain_group(values: &[BigInt], tau: &BigInt) -> Result<AbelianGroup> {
    let t = values.len();
    let mut ds = vec![BigInt::one()];
    for k in 1..=t.saturating_sub(2) {
        ds.push(subset_product_gcd(values, k));
    }
    let mut factors = Vec::with_capacity(ds.len());
    for k in 1..ds.len() {
        if !ds[k].mod_floor(&ds[k - 1]).is_zero() {
            return Err(Error::BadParameters(format!(
                "gcd chain is not a divisibility chain: {} does not divide {}",
                ds[k - 1],
                ds[k]
            )));
        }
        factors.push(&ds[k] / &ds[k - 1]);
    }
    let last = ds.last().unwrap();
    if !tau.mod_floor(last).is_zero() {
        return Err(Error::BadParameters(format!(
            "{last} does not divide the group order {tau}"
        )));
    }
    factors.push(tau / last);
    AbelianGroup::from_factors(factors)
}

/// The sandpile group of a flower in invariant-factor form.
pub fn group_structure(spec: &FlowerSpec) -> Result<AbelianGroup> {
    let inv = flower_invariants(spec);
    assemble_dchain_group(&inv.p, &inv.tau)
}

/// The largest number of entries sharing a common prime factor; 1 when the
/// entries are pairwise coprime (in particular when all entries are 1,
/// where no prime divides anything).
pub fn m_value(values: &[BigInt]) -> usize {
    // Equal entries always share their prime factors, so search over
    // distinct values weighted by multiplicity.
    let mut counts: HashMap<BigInt, usize> = HashMap::new();
    for v in values {
        if *v > BigInt::one() {
            *counts.entry(v.clone()).or_insert(0) += 1;
        }
    }
    let distinct: Vec<(BigInt, usize)> = counts.into_iter().collect();

    fn extend(
        distinct: &[(BigInt, usize)],
        start: usize,
        g: &BigInt,
        size: usize,
        best: &mut usize,
    ) {
        *best = (*best).max(size);
        for i in start..distinct.len() {
            let g2 = g.gcd(&distinct[i].0);
            if g2 > BigInt::one() {
                extend(distinct, i + 1, &g2, size + distinct[i].1, best);
            }
        }
    }

    let mut best = 1;
    for i in 0..distinct.len() {
        extend(&distinct, i + 1, &distinct[i].0, distinct[i].1, &mut best);
    }
    best
}

/// Minimum number of generators of the sandpile group:
/// 1 when `m(p) = 1`, otherwise `m(p) - 1`.
pub fn min_generators(spec: &FlowerSpec) -> usize {
    let m = m_value(flower_invariants(spec).p());
    if m <= 1 {
        1
    } else {
        m - 1
    }
}

/// The sandpile group is cyclic exactly when `m(p) <= 2`.
pub fn is_cyclic(spec: &FlowerSpec) -> bool {
    m_value(flower_invariants(spec).p()) <= 2
}

/// Closed form for flowers whose non-trivial petals all have the same
/// spanning-tree count `a`: `Z_a^{s-2} + Z_{ra}` with
/// `r = (t-s) a + sum_i q_i`. Flowers with fewer than two petals are cyclic.
pub fn equal_petal_group(spec: &FlowerSpec) -> Result<AbelianGroup> {
    let inv = flower_invariants(spec);
    let petals: Vec<(usize, &BigInt)> = spec
        .petals()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_trivial())
        .map(|(i, _)| (i, &inv.p[i]))
        .collect();
    let s = petals.len();
    if s < 2 {
        return AbelianGroup::cyclic(inv.tau.clone());
    }
    let a = petals[0].1.clone();
    if petals.iter().any(|(_, pi)| **pi != a) {
        return Err(Error::UnequalPetals);
    }
    let t = spec.center_len();
    let q_sum: BigInt = petals.iter().map(|&(i, _)| inv.q[i].clone()).sum();
    let r = BigInt::from(t - s) * &a + q_sum;
    let mut factors = vec![a.clone(); s - 2];
    factors.push(r * &a);
    AbelianGroup::from_factors(factors)
}

/// Label of the generator edge `f_i` of petal `i` (1-based): the center edge
/// itself for a trivial petal, otherwise the designated free edge of the
/// petal's far end-polygon.
pub fn generator_edge_label(spec: &FlowerSpec, i: usize) -> Result<EdgeLabel> {
    let petal = spec.petal(i)?;
    Ok(if petal.is_trivial() {
        EdgeLabel::Center(i)
    } else {
        EdgeLabel::Boundary {
            petal: Some(i),
            index: petal.polygons(),
        }
    })
}

/// Whether the petal generator `f_i` (1-based) generates the whole group:
/// true exactly when the other petals' counts are pairwise coprime.
pub fn petal_generator_test(spec: &FlowerSpec, i: usize) -> Result<bool> {
    let t = spec.center_len();
    if i == 0 || i > t {
        return Err(Error::BadIndex { index: i, max: t });
    }
    let inv = flower_invariants(spec);
    let others: Vec<BigInt> = inv
        .p
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i - 1)
        .map(|(_, v)| v.clone())
        .collect();
    Ok(m_value(&others) == 1)
}

/// Whether any edge of the flower generates the sandpile group.
pub fn exists_generating_edge(spec: &FlowerSpec) -> Result<bool> {
    for i in 1..=spec.center_len() {
        if petal_generator_test(spec, i)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Classification of one edge as an element of the sandpile group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    /// 1-based petal the edge belongs to (center edges belong to their
    /// petal's position).
    pub petal: usize,
    /// Coefficient `a` with `e = a f_petal` in the group.
    pub coefficient: BigInt,
    /// Order of the edge class.
    pub order: BigInt,
    /// Whether the edge generates the whole group.
    pub generator: bool,
}

/// Classifies every edge of the flower in graph edge order.
///
/// Coefficients come from the chain expression read from the far end of each
/// petal. The generator test is arithmetic (coprimality conditions); the
/// order is `tau / gcd(a g_i, tau)` where the subgroup index
/// `g_i = tau / ord(f_i)` is taken from the cycle/cut presentation, since
/// no closed form for `ord(f_i)` is available.
pub fn classify_all_edges(spec: &FlowerSpec) -> Result<Vec<(EdgeLabel, EdgeClass)>> {
    let t = spec.center_len();
    let inv = flower_invariants(spec);
    let tau = &inv.tau;
    let graph = build_flower(spec);
    let orders = ElementOrders::new(&graph)?;

    let mut petal_coeffs: Vec<HashMap<EdgeLabel, BigInt>> = Vec::with_capacity(t);
    let mut generator_ok = Vec::with_capacity(t);
    let mut subgroup_index = Vec::with_capacity(t);
    for i in 1..=t {
        let petal = spec.petal(i)?;
        let coeffs = if petal.is_trivial() {
            HashMap::new()
        } else {
            edge_coefficients(petal, GeneratorEnd::Head)
                .into_iter()
                .collect()
        };
        petal_coeffs.push(coeffs);
        generator_ok.push(petal_generator_test(spec, i)?);
        let f = graph.edge_index(generator_edge_label(spec, i)?)?;
        let ord = orders.order_of_edge(f);
        subgroup_index.push(tau / &ord);
    }

    let mut out = Vec::with_capacity(graph.edge_count());
    for label in graph.labels() {
        let (petal, coefficient) = match label {
            EdgeLabel::Center(i) => (i, inv.q[i - 1].clone()),
            EdgeLabel::Boundary {
                petal: Some(i),
                index,
            } => {
                let local = EdgeLabel::Boundary { petal: None, index };
                (i, petal_coeffs[i - 1][&local].clone())
            }
            EdgeLabel::Interior {
                petal: Some(i),
                polygon,
                position,
            } => {
                let local = EdgeLabel::Interior {
                    petal: None,
                    polygon,
                    position,
                };
                (i, petal_coeffs[i - 1][&local].clone())
            }
            other => {
                return Err(Error::UnknownEdge(other.to_string()));
            }
        };
        let generator = generator_ok[petal - 1] && coefficient.gcd(tau).is_one();
        let scaled = &coefficient * &subgroup_index[petal - 1];
        let order = tau / scaled.gcd(tau);
        out.push((
            label,
            EdgeClass {
                petal,
                coefficient,
                order,
                generator,
            },
        ));
    }
    Ok(out)
}

/// Classification of a single edge; see [`classify_all_edges`].
pub fn classify_edge(spec: &FlowerSpec, e: EdgeLabel) -> Result<EdgeClass> {
    let graph = build_flower(spec);
    let idx = graph.edge_index(e)?;
    Ok(classify_all_edges(spec)?.swap_remove(idx).1)
}

/// A partition of the petal indices `1..=t` whose parts are internally
/// pairwise coprime (in petal spanning-tree counts) and whose part products
/// pairwise share a common factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePartition {
    parts: Vec<Vec<usize>>,
    alphas: Vec<BigInt>,
}

impl PrimePartition {
    /// Parts as sorted 1-based index sets.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Products of the petal counts within each part.
    pub fn alphas(&self) -> &[BigInt] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Validates the two prime-partition properties for `parts` over `values`
/// (1-based indices).
pub fn is_prime_partition(values: &[BigInt], parts: &[Vec<usize>]) -> Result<PrimePartition> {
    let t = values.len();
    let mut seen = vec![false; t];
    for part in parts {
        if part.is_empty() {
            return Err(Error::InvalidPartition("empty part".into()));
        }
        for &i in part {
            if i == 0 || i > t {
                return Err(Error::InvalidPartition(format!(
                    "index {i} is out of range 1..={t}"
                )));
            }
            if seen[i - 1] {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
            seen[i - 1] = true;
        }
        for (a, &i) in part.iter().enumerate() {
            for &j in &part[a + 1..] {
                if !values[i - 1].gcd(&values[j - 1]).is_one() {
                    return Err(Error::InvalidPartition(format!(
                        "entries {i} and {j} in one part are not coprime"
                    )));
                }
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidPartition(
            "parts do not cover every index".into(),
        ));
    }
    let alphas: Vec<BigInt> = parts
        .iter()
        .map(|part| part.iter().map(|&i| values[i - 1].clone()).product())
        .collect();
    for a in 0..alphas.len() {
        for b in a + 1..alphas.len() {
            if alphas[a].gcd(&alphas[b]).is_one() {
                return Err(Error::InvalidPartition(format!(
                    "part products {} and {} are coprime",
                    alphas[a], alphas[b]
                )));
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    parts.sort();
    let alphas = parts
        .iter()
        .map(|part| part.iter().map(|&i| values[i - 1].clone()).product())
        .collect();
    Ok(PrimePartition { parts, alphas })
}

/// All prime partitions of `values` with the minimum number of parts, found
/// by exhaustive set-partition search with coprimality pruning.
pub fn prime_partitions(values: &[BigInt]) -> Result<Vec<PrimePartition>> {
    let t = values.len();
    if t == 0 {
        return Err(Error::BadParameters("empty sequence".into()));
    }
    if t > MAX_PARTITION_PETALS {
        return Err(Error::BadParameters(format!(
            "partition search is exhaustive and gated to {MAX_PARTITION_PETALS} entries, got {t}"
        )));
    }

    fn search(
        values: &[BigInt],
        next: usize,
        parts: &mut Vec<Vec<usize>>,
        found: &mut Vec<Vec<Vec<usize>>>,
        best: &mut usize,
    ) {
        if parts.len() > *best {
            return;
        }
        if next == values.len() {
            // Property (2): part products pairwise share a factor.
            let alphas: Vec<BigInt> = parts
                .iter()
                .map(|p| p.iter().map(|&i| values[i - 1].clone()).product())
                .collect();
            for a in 0..alphas.len() {
                for b in a + 1..alphas.len() {
                    if alphas[a].gcd(&alphas[b]).is_one() {
                        return;
                    }
                }
            }
            if parts.len() < *best {
                *best = parts.len();
                found.clear();
            }
            found.push(parts.clone());
            return;
        }
        let idx = next + 1; // 1-based
        for pos in 0..parts.len() {
            // Property (1): stay pairwise coprime inside the part.
            if parts[pos]
                .iter()
                .all(|&j| values[j - 1].gcd(&values[idx - 1]).is_one())
            {
                parts[pos].push(idx);
                search(values, next + 1, parts, found, best);
                parts[pos].pop();
            }
        }
        parts.push(vec![idx]);
        search(values, next + 1, parts, found, best);
        parts.pop();
    }

    let mut found = Vec::new();
    let mut best = usize::MAX;
    search(values, 0, &mut Vec::new(), &mut found, &mut best);
    found
        .into_iter()
        .map(|parts| is_prime_partition(values, &parts))
        .collect()
}

/// The data obtained by collapsing the relation matrix along a prime
/// partition: a k x k matrix of the same shape over the part products.
#[derive(Debug, Clone)]
pub struct PartitionReduction {
    pub partition: PrimePartition,
    /// `beta_i = sum_{l in A_i} q_l prod_{j in A_i, j != l} p_j`.
    pub betas: Vec<BigInt>,
    pub matrix: IntMatrix,
    /// Group by the same gcd-chain formula applied to the alphas.
    pub group: AbelianGroup,
    /// Minimum generator count read off the reduced chain.
    pub min_generators: usize,
}

/// Collapses the relation matrix of `spec` along a prime partition of its
/// petal counts.
pub fn reduce_by_partition(spec: &FlowerSpec, parts: &[Vec<usize>]) -> Result<PartitionReduction> {
    let inv = flower_invariants(spec);
    let partition = is_prime_partition(&inv.p, parts)?;
    let k = partition.len();
    let betas: Vec<BigInt> = partition
        .parts()
        .iter()
        .map(|part| {
            let p: Vec<BigInt> = part.iter().map(|&i| inv.p[i - 1].clone()).collect();
            let q: Vec<BigInt> = part.iter().map(|&i| inv.q[i - 1].clone()).collect();
            cleared_sum(&p, &q)
        })
        .collect();
    let mut matrix = IntMatrix::zeros(k, k);
    for i in 0..k.saturating_sub(1) {
        *matrix.entry_mut(i, i) = partition.alphas()[i].clone();
        *matrix.entry_mut(i, i + 1) = -partition.alphas()[i + 1].clone();
    }
    for (j, beta) in betas.iter().enumerate() {
        *matrix.entry_mut(k - 1, j) = beta.clone();
    }
    let group = assemble_dchain_group(partition.alphas(), &inv.tau)?;
    let min_generators = if k == 1 {
        1
    } else {
        let mut k0 = 0;
        for j in 1..=k - 2 {
            if subset_product_gcd(partition.alphas(), j).is_one() {
                k0 = j;
            } else {
                break;
            }
        }
        k - 1 - k0
    };
    Ok(PartitionReduction {
        partition,
        betas,
        matrix,
        group,
        min_generators,
    })
}

/// The reduced relation matrix for a prime partition.
pub fn reduced_relation_matrix(spec: &FlowerSpec, parts: &[Vec<usize>]) -> Result<IntMatrix> {
    Ok(reduce_by_partition(spec, parts)?.matrix)
}

/// The group computed from the part products of a prime partition; always
/// equal to [`group_structure`].
pub fn group_via_partition(spec: &FlowerSpec, parts: &[Vec<usize>]) -> Result<AbelianGroup> {
    Ok(reduce_by_partition(spec, parts)?.group)
}

/// The flower whose center edge `i` has multiplicity `ns[i]`: petal `i` is a
/// stack of `ns[i] - 1` digons. (An entry of 1 is a trivial petal.)
pub fn thick_cycle_spec(ns: &[u64]) -> Result<FlowerSpec> {
    if ns.len() < 2 {
        return Err(Error::InvalidCenter(ns.len()));
    }
    let petals = ns
        .iter()
        .map(|&n| {
            if n == 0 {
                Err(Error::BadParameters("multiplicity 0 is empty".into()))
            } else {
                ChainSpec::new(vec![2; (n - 1) as usize])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FlowerSpec::new(ns.len(), petals)
}

/// Closed form for the thick cycle: the petal counts are the multiplicities
/// themselves and every contraction count is 1, so
/// `tau = sum_i prod_{j != i} n_j` with the usual gcd chain over the `n_i`.
pub fn thick_cycle_group(ns: &[u64]) -> Result<AbelianGroup> {
    if ns.len() < 2 {
        return Err(Error::InvalidCenter(ns.len()));
    }
    if ns.contains(&0) {
        return Err(Error::BadParameters("multiplicity 0 is empty".into()));
    }
    let p: Vec<BigInt> = ns.iter().map(|&n| BigInt::from(n)).collect();
    let q = vec![BigInt::one(); ns.len()];
    let tau = cleared_sum(&p, &q);
    assemble_dchain_group(&p, &tau)
}

/// The regular flower `F(t, s; r, n)`: `s` petals, each a stack of `n`
/// r-gons, on a center of length `t`.
pub fn sunflower_spec(t: usize, s: usize, r: u32, n: usize) -> Result<FlowerSpec> {
    validate_sunflower(t, s, r, n)?;
    let mut petals = vec![ChainSpec::new(vec![r; n])?; s];
    petals.extend(vec![ChainSpec::trivial(); t - s]);
    FlowerSpec::new(t, petals)
}

/// Closed form for the regular flower:
/// `Z_a^{s-2} + Z_{(s c + (t-s) a) a}` with `a = tau(P)` and `c = tau(P . e)`
/// for the common petal `P`; cyclic when `s < 2`.
pub fn sunflower_group(t: usize, s: usize, r: u32, n: usize) -> Result<AbelianGroup> {
    validate_sunflower(t, s, r, n)?;
    let inv = chain_invariants(&ChainSpec::new(vec![r; n])?);
    let a = inv.taus()[n].clone();
    let c = inv.contract_far()[n].clone();
    match s {
        0 => AbelianGroup::cyclic(BigInt::from(t)),
        1 => AbelianGroup::cyclic(c + BigInt::from(t - 1) * a),
        _ => {
            let r_big = BigInt::from(s) * c + BigInt::from(t - s) * &a;
            let mut factors = vec![a.clone(); s - 2];
            factors.push(r_big * a);
            AbelianGroup::from_factors(factors)
        }
    }
}

fn validate_sunflower(t: usize, s: usize, r: u32, n: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::BadParameters(format!("center length {t} < 2")));
    }
    if s > t {
        return Err(Error::BadParameters(format!(
            "{s} petals exceed center {t}"
        )));
    }
    if r < 2 {
        return Err(Error::BadParameters(format!("polygon side count {r} < 2")));
    }
    if n < 1 {
        return Err(Error::BadParameters(
            "petals need at least one polygon".into(),
        ));
    }
    Ok(())
}
