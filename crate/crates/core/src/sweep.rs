//! Exhaustive formula-vs-oracle verification over all small flowers.
//!
//! For every enumerated spec the sweep checks each closed form against the
//! matrix-tree count and against the Smith normal forms of both group
//! presentations, plus every per-edge prediction against the
//! deletion/contraction oracle. One failure anywhere names the offending
//! spec, which makes this the regression harness for the whole crate.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::flower::{
    classify_all_edges, equal_petal_group, exists_generating_edge, flower_invariants,
    generator_edge_label, group_structure, min_generators, petal_generator_test, prime_partitions,
    reduce_by_partition,
};
use crate::graph::{build_flower, ChainSpec, FlowerSpec};
use crate::matrix::group_from_matrix;
use crate::oracle::{
    edge_generator_oracle, sandpile_group_cycle_cut, sandpile_group_laplacian, tau_matrix_tree,
    ElementOrders,
};

/// Bounds of a sweep: flowers with center length up to `max_center`, every
/// petal having at most `max_polygons` polygons with at most `max_sides`
/// sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepLimits {
    pub max_center: usize,
    pub max_polygons: usize,
    pub max_sides: u32,
}

#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub spec: FlowerSpec,
    pub what: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub instances: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All petal chains within the limits (including the trivial chain).
fn petal_choices(limits: &SweepLimits) -> Vec<ChainSpec> {
    let mut out = vec![ChainSpec::trivial()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..limits.max_polygons {
        let mut next = Vec::new();
        for stem in &frontier {
            for k in 2..=limits.max_sides {
                let mut ks = stem.clone();
                ks.push(k);
                out.push(ChainSpec::new(ks.clone()).expect("sides >= 2"));
                next.push(ks);
            }
        }
        frontier = next;
    }
    out
}

/// Enumerates all flowers within the limits, deduplicated up to rotation and
/// reflection of the petal sequence (those produce literally isomorphic
/// graphs, so skipping them loses nothing).
pub fn enumerate_flowers(limits: &SweepLimits) -> Vec<FlowerSpec> {
    let petals = petal_choices(limits);
    let mut out = Vec::new();
    for t in 2..=limits.max_center {
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(tuple) = stack.pop() {
            if tuple.len() == t {
                if is_dihedral_canonical(&tuple) {
                    let chosen = tuple.iter().map(|&i| petals[i].clone()).collect();
                    out.push(FlowerSpec::new(t, chosen).expect("sizes match"));
                }
                continue;
            }
            for i in (0..petals.len()).rev() {
                let mut next = tuple.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    out
}

fn is_dihedral_canonical(tuple: &[usize]) -> bool {
    let t = tuple.len();
    let mut rotated = Vec::with_capacity(t);
    let mut reversed: Vec<usize> = tuple.to_vec();
    reversed.reverse();
    for shift in 0..t {
        for base in [tuple, reversed.as_slice()] {
            rotated.clear();
            rotated.extend(base[shift..].iter().chain(base[..shift].iter()));
            if rotated.as_slice() < tuple {
                return false;
            }
        }
    }
    true
}

/// Runs the full consistency battery on one flower. Returns a description
/// of the first failed check.
pub fn check_flower(spec: &FlowerSpec) -> std::result::Result<(), String> {
    let fail = |what: &str| Err(format!("{spec}: {what}"));

    let inv = flower_invariants(spec);
    let graph = build_flower(spec);

    // Order: closed form, relation-matrix determinant, matrix-tree count.
    let tau_graph = tau_matrix_tree(&graph).map_err(|e| e.to_string())?;
    if inv.tau() != &tau_graph {
        return fail(&format!(
            "tau formula {} != matrix-tree {tau_graph}",
            inv.tau()
        ));
    }
    let det = inv
        .relation_matrix()
        .determinant()
        .map_err(|e| e.to_string())?;
    if det.abs() != tau_graph {
        return fail(&format!("|det R| = {} != tau {tau_graph}", det.abs()));
    }

    // Group: gcd-chain formula vs both presentations.
    let formula = group_structure(spec).map_err(|e| e.to_string())?;
    let lap = sandpile_group_laplacian(&graph).map_err(|e| e.to_string())?;
    if formula != lap {
        return fail(&format!("group formula {formula} != Laplacian SNF {lap}"));
    }
    let cc = sandpile_group_cycle_cut(&graph).map_err(|e| e.to_string())?;
    if formula != cc {
        return fail(&format!("group formula {formula} != cycle/cut SNF {cc}"));
    }

    // Minimum generator count vs the oracle's invariant-factor count.
    let mu = min_generators(spec);
    if mu != lap.min_generators() {
        return fail(&format!(
            "mu formula {mu} != {} oracle factors",
            lap.min_generators()
        ));
    }

    // Flowers with equal petal counts also satisfy the short closed form.
    let nontrivial: Vec<&num_bigint::BigInt> = spec
        .petals()
        .iter()
        .zip(inv.p())
        .filter(|(c, _)| !c.is_trivial())
        .map(|(_, p)| p)
        .collect();
    if nontrivial.windows(2).all(|w| w[0] == w[1]) {
        let short = equal_petal_group(spec).map_err(|e| e.to_string())?;
        if short != formula {
            return fail(&format!("equal-petal form {short} != {formula}"));
        }
    }

    // Every minimum prime partition reproduces the group.
    let partitions = prime_partitions(inv.p()).map_err(|e| e.to_string())?;
    if partitions.is_empty() {
        return fail("no prime partition found");
    }
    for partition in &partitions {
        let red = reduce_by_partition(spec, partition.parts()).map_err(|e| e.to_string())?;
        if red.group != formula {
            return fail(&format!(
                "partition {:?} gives {} != {formula}",
                partition.parts(),
                red.group
            ));
        }
        let snf_group = group_from_matrix(&red.matrix).map_err(|e| e.to_string())?;
        if snf_group != formula {
            return fail(&format!(
                "reduced matrix of {:?} presents {snf_group} != {formula}",
                partition.parts()
            ));
        }
        if red.min_generators != mu {
            return fail(&format!("partition mu {} != {mu}", red.min_generators));
        }
        for (alpha, beta) in red.partition.alphas().iter().zip(&red.betas) {
            if !alpha.gcd(beta).is_one() {
                return fail(&format!("gcd(alpha, beta) != 1 for {alpha}, {beta}"));
            }
        }
    }

    // Petal-generator predictions vs the contraction oracle.
    for i in 1..=spec.center_len() {
        let predicted = petal_generator_test(spec, i).map_err(|e| e.to_string())?;
        let label = generator_edge_label(spec, i).map_err(|e| e.to_string())?;
        let observed = edge_generator_oracle(&graph, label).map_err(|e| e.to_string())?;
        if predicted != observed {
            return fail(&format!(
                "petal {i} generator prediction {predicted} != oracle {observed}"
            ));
        }
    }

    // Per-edge classification vs the contraction oracle and element orders.
    let orders = ElementOrders::new(&graph).map_err(|e| e.to_string())?;
    let classes = classify_all_edges(spec).map_err(|e| e.to_string())?;
    let mut any_generator = false;
    for (idx, (label, class)) in classes.iter().enumerate() {
        let observed = edge_generator_oracle(&graph, *label).map_err(|e| e.to_string())?;
        if class.generator != observed {
            return fail(&format!(
                "edge {label} generator prediction {} != oracle {observed}",
                class.generator
            ));
        }
        let observed_order = orders.order_of_edge(idx);
        if class.order != observed_order {
            return fail(&format!(
                "edge {label} order {} != oracle {observed_order}",
                class.order
            ));
        }
        any_generator |= class.generator;
    }
    let predicted_exists = exists_generating_edge(spec).map_err(|e| e.to_string())?;
    if predicted_exists != any_generator {
        return fail(&format!(
            "generating-edge existence {predicted_exists} != exhaustive oracle {any_generator}"
        ));
    }

    Ok(())
}

/// Checks every flower in the limits, optionally across worker threads.
/// Failures are reported in enumeration order regardless of scheduling.
pub fn run_sweep(limits: &SweepLimits, jobs: usize) -> SweepOutcome {
    let specs = enumerate_flowers(limits);
    let jobs = jobs.max(1).min(specs.len().max(1));
    let mut results: Vec<Option<Result<(), String>>> = vec![None; specs.len()];
    if jobs <= 1 {
        for (slot, spec) in results.iter_mut().zip(&specs) {
            *slot = Some(check_flower(spec));
        }
    } else {
        let chunk = specs.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            for (specs_chunk, results_chunk) in specs.chunks(chunk).zip(results.chunks_mut(chunk)) {
                scope.spawn(move || {
                    for (slot, spec) in results_chunk.iter_mut().zip(specs_chunk) {
                        *slot = Some(check_flower(spec));
                    }
                });
            }
        });
    }
    let instances = specs.len();
    let failures = specs
        .into_iter()
        .zip(results)
        .filter_map(|(spec, res)| match res.expect("every slot filled") {
            Ok(()) => None,
            Err(what) => Some(SweepFailure { spec, what }),
        })
        .collect();
    SweepOutcome {
        instances,
        failures,
    }
}

/// Human-readable summary used by the CLI and the acceptance suite.
pub fn summarize(outcome: &SweepOutcome) -> String {
    let mut s = String::new();
    if outcome.ok() {
        let _ = write!(s, "all {} instances OK", outcome.instances);
    } else {
        let _ = write!(
            s,
            "{} of {} instances FAILED; first: {}",
            outcome.failures.len(),
            outcome.instances,
            outcome.failures[0].what
        );
    }
    s
}
