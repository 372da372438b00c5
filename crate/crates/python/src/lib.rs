//! Python bindings: the chain/flower types and the operations on them,
//! plus the Smith-normal-form engine, as the `sandflower_py` module.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sandflower::chain::{
    chain_invariants, contraction_identity, edge_coefficients, edge_order,
    is_generating_edge_chain, GeneratorEnd,
};
use sandflower::flower::{
    self, classify_all_edges, exists_generating_edge, flower_invariants, group_structure,
    min_generators, petal_generator_test, prime_partitions, reduce_by_partition,
};
use sandflower::graph::{build_chain, build_flower};
use sandflower::oracle::{sandpile_group_cycle_cut, sandpile_group_laplacian, tau_matrix_tree};
use sandflower::{AbelianGroup, ChainSpec, FlowerSpec, IntMatrix};

fn err(e: sandflower::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite abelian group in invariant-factor form.
#[pyclass(frozen, eq, skip_from_py_object)]
#[derive(PartialEq, Clone)]
struct Group {
    inner: AbelianGroup,
}

#[pymethods]
impl Group {
    /// Invariant factors d_1 | d_2 | ... (empty for the trivial group).
    fn factors(&self) -> Vec<BigInt> {
        self.inner.factors().to_vec()
    }

    fn order(&self) -> BigInt {
        self.inner.order()
    }

    fn is_cyclic(&self) -> bool {
        self.inner.is_cyclic()
    }

    fn min_generators(&self) -> usize {
        self.inner.min_generators()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.inner)
    }
}

impl From<AbelianGroup> for Group {
    fn from(inner: AbelianGroup) -> Group {
        Group { inner }
    }
}

/// A polygon chain given by its side counts; an empty list is the trivial
/// chain (a single edge).
#[pyclass(frozen)]
struct Chain {
    spec: ChainSpec,
}

#[pymethods]
impl Chain {
    #[new]
    fn new(ks: Vec<u32>) -> PyResult<Self> {
        Ok(Chain {
            spec: ChainSpec::new(ks).map_err(err)?,
        })
    }

    /// Number of spanning trees.
    fn tau(&self) -> BigInt {
        chain_invariants(&self.spec).tau().clone()
    }

    /// Spanning-tree counts of every prefix.
    fn taus(&self) -> Vec<BigInt> {
        chain_invariants(&self.spec).taus().to_vec()
    }

    fn group(&self) -> Group {
        chain_invariants(&self.spec).group().into()
    }

    /// (edge, coefficient) relative to the base edge.
    fn edge_coefficients(&self) -> Vec<(String, BigInt)> {
        edge_coefficients(&self.spec, GeneratorEnd::Tail)
            .into_iter()
            .map(|(label, c)| (label.to_string(), c))
            .collect()
    }

    /// (edge, order, generator) for every edge.
    fn edge_orders(&self) -> PyResult<Vec<(String, BigInt, bool)>> {
        let mut out = Vec::new();
        for (label, _) in edge_coefficients(&self.spec, GeneratorEnd::Tail) {
            let ord = edge_order(&self.spec, label).map_err(err)?;
            let gen = is_generating_edge_chain(&self.spec, label).map_err(err)?;
            out.push((label.to_string(), ord, gen));
        }
        Ok(out)
    }

    /// The four-count identity of non-trivial chains; always 1.
    fn contraction_identity(&self) -> PyResult<BigInt> {
        contraction_identity(&self.spec).map_err(err)
    }

    /// Cross-checks tau and the group against the matrix-tree count and the
    /// Smith normal forms of both presentations.
    fn verify(&self) -> PyResult<bool> {
        let inv = chain_invariants(&self.spec);
        let g = build_chain(&self.spec);
        let tau_ok = tau_matrix_tree(&g).map_err(err)? == *inv.tau();
        let lap = sandpile_group_laplacian(&g).map_err(err)?;
        let cc = sandpile_group_cycle_cut(&g).map_err(err)?;
        Ok(tau_ok && lap == inv.group() && cc == inv.group())
    }

    fn __repr__(&self) -> String {
        format!("Chain{}", self.spec)
    }
}

/// A polygon flower: a center cycle plus one chain per center edge, given
/// as a list of side-count lists (an empty list is a trivial petal).
#[pyclass(frozen)]
struct Flower {
    spec: FlowerSpec,
}

#[pymethods]
impl Flower {
    #[new]
    fn new(center: usize, petals: Vec<Vec<u32>>) -> PyResult<Self> {
        let petals = petals
            .into_iter()
            .map(ChainSpec::new)
            .collect::<sandflower::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(Flower {
            spec: FlowerSpec::new(center, petals).map_err(err)?,
        })
    }

    fn tau(&self) -> BigInt {
        flower_invariants(&self.spec).tau().clone()
    }

    /// Spanning-tree counts of the petals.
    fn petal_taus(&self) -> Vec<BigInt> {
        flower_invariants(&self.spec).p().to_vec()
    }

    /// Petal counts after contracting the attachment edges.
    fn petal_contraction_taus(&self) -> Vec<BigInt> {
        flower_invariants(&self.spec).q().to_vec()
    }

    /// The t x t relation matrix as nested lists.
    fn relation_matrix(&self) -> Vec<Vec<BigInt>> {
        flower_invariants(&self.spec).relation_matrix().to_rows()
    }

    fn group(&self) -> PyResult<Group> {
        Ok(group_structure(&self.spec).map_err(err)?.into())
    }

    fn mu(&self) -> usize {
        min_generators(&self.spec)
    }

    fn is_cyclic(&self) -> bool {
        flower::is_cyclic(&self.spec)
    }

    /// Whether the far free edge of petal i (1-based) generates the group.
    fn petal_generator(&self, i: usize) -> PyResult<bool> {
        petal_generator_test(&self.spec, i).map_err(err)
    }

    fn has_generating_edge(&self) -> PyResult<bool> {
        exists_generating_edge(&self.spec).map_err(err)
    }

    /// (edge, coefficient, order, generator) for every edge.
    fn classify_edges(&self) -> PyResult<Vec<(String, BigInt, BigInt, bool)>> {
        Ok(classify_all_edges(&self.spec)
            .map_err(err)?
            .into_iter()
            .map(|(label, c)| (label.to_string(), c.coefficient, c.order, c.generator))
            .collect())
    }

    /// All minimum prime partitions of the petal counts (1-based parts).
    fn prime_partitions(&self) -> PyResult<Vec<Vec<Vec<usize>>>> {
        let inv = flower_invariants(&self.spec);
        Ok(prime_partitions(inv.p())
            .map_err(err)?
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect())
    }

    /// The reduced relation matrix of a prime partition.
    fn reduced_matrix(&self, parts: Vec<Vec<usize>>) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(reduce_by_partition(&self.spec, &parts)
            .map_err(err)?
            .matrix
            .to_rows())
    }

    /// The group read from the reduced Laplacian, as an independent check.
    fn group_oracle(&self) -> PyResult<Group> {
        Ok(sandpile_group_laplacian(&build_flower(&self.spec))
            .map_err(err)?
            .into())
    }

    fn verify(&self) -> PyResult<bool> {
        let inv = flower_invariants(&self.spec);
        let formula = group_structure(&self.spec).map_err(err)?;
        let g = build_flower(&self.spec);
        let tau_ok = tau_matrix_tree(&g).map_err(err)? == *inv.tau();
        let lap = sandpile_group_laplacian(&g).map_err(err)?;
        let cc = sandpile_group_cycle_cut(&g).map_err(err)?;
        Ok(tau_ok && lap == formula && cc == formula)
    }

    fn __repr__(&self) -> String {
        format!("Flower({})", self.spec)
    }
}

fn to_matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    let mut m = IntMatrix::zeros(r, c);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            *m.entry_mut(i, j) = v;
        }
    }
    Ok(m)
}

/// Full Smith-normal-form diagonal of an integer matrix.
#[pyfunction]
fn smith_normal_form(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    Ok(to_matrix(rows)?.smith_normal_form().0)
}

/// Exact determinant of a square integer matrix.
#[pyfunction]
fn determinant(rows: Vec<Vec<BigInt>>) -> PyResult<BigInt> {
    to_matrix(rows)?.determinant().map_err(err)
}

/// Largest number of entries sharing a common prime factor.
#[pyfunction]
fn m_value(values: Vec<BigInt>) -> usize {
    flower::m_value(&values)
}

/// Group of the cycle whose i-th edge has multiplicity ns[i].
#[pyfunction]
fn thick_cycle_group(ns: Vec<u64>) -> PyResult<Group> {
    Ok(flower::thick_cycle_group(&ns).map_err(err)?.into())
}

/// Group of the regular flower with s identical petals of n r-gons on a
/// center of length t.
#[pyfunction]
fn sunflower_group(t: usize, s: usize, r: u32, n: usize) -> PyResult<Group> {
    Ok(flower::sunflower_group(t, s, r, n).map_err(err)?.into())
}

#[pymodule]
fn sandflower_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Chain>()?;
    m.add_class::<Flower>()?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(m_value, m)?)?;
    m.add_function(wrap_pyfunction!(thick_cycle_group, m)?)?;
    m.add_function(wrap_pyfunction!(sunflower_group, m)?)?;
    Ok(())
}
