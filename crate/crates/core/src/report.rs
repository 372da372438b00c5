//! JSON spec files and the report schema shared by the CLI commands.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chain::{chain_invariants, edge_coefficients, edge_order, GeneratorEnd};
use crate::error::{Error, Result};
use crate::flower::{
    classify_all_edges, exists_generating_edge, flower_invariants, group_structure, is_cyclic,
    m_value, min_generators, petal_generator_test, prime_partitions, reduce_by_partition,
};
use crate::graph::{build_chain, build_flower, ChainSpec, FlowerSpec};
use crate::group::AbelianGroup;
use crate::matrix::IntMatrix;
use crate::oracle::{sandpile_group_cycle_cut, sandpile_group_laplacian, tau_matrix_tree};

/// On-disk spec: either `{"ks": [...]}` for a chain or
/// `{"center": t, "petals": [{"ks": [...]}, ...]}` for a flower. A petal
/// with empty `ks` is a trivial petal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecFile {
    Chain(ChainFile),
    Flower(FlowerFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub ks: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowerFile {
    pub center: usize,
    pub petals: Vec<ChainFile>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::BadParameters(format!("cannot parse spec: {e}")))
    }

    pub fn to_chain(&self) -> Result<ChainSpec> {
        match self {
            SpecFile::Chain(c) => ChainSpec::new(c.ks.clone()),
            SpecFile::Flower(_) => Err(Error::BadParameters(
                "expected a chain spec, found a flower spec".into(),
            )),
        }
    }

    pub fn to_flower(&self) -> Result<FlowerSpec> {
        match self {
            SpecFile::Flower(f) => {
                let petals = f
                    .petals
                    .iter()
                    .map(|p| ChainSpec::new(p.ks.clone()))
                    .collect::<Result<Vec<_>>>()?;
                FlowerSpec::new(f.center, petals)
            }
            SpecFile::Chain(_) => Err(Error::BadParameters(
                "expected a flower spec, found a chain spec".into(),
            )),
        }
    }
}

pub fn chain_file(spec: &ChainSpec) -> ChainFile {
    ChainFile {
        ks: spec.sides().to_vec(),
    }
}

pub fn flower_file(spec: &FlowerSpec) -> FlowerFile {
    FlowerFile {
        center: spec.center_len(),
        petals: spec.petals().iter().map(chain_file).collect(),
    }
}

/// Group as a factor list plus its display string. The display string
/// parses back to exactly the same factor list.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupReport {
    pub factors: Vec<String>,
    pub display: String,
}

impl GroupReport {
    pub fn new(g: &AbelianGroup) -> GroupReport {
        GroupReport {
            factors: g.factors().iter().map(BigInt::to_string).collect(),
            display: g.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: String,
    pub coefficient: String,
    pub order: String,
    pub generator: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionReport {
    pub parts: Vec<Vec<usize>>,
    pub alphas: Vec<String>,
    pub betas: Vec<String>,
    pub reduced_matrix: Vec<Vec<String>>,
    pub group: GroupReport,
    pub mu: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub tau_match: bool,
    pub laplacian_group_match: bool,
    pub cycle_cut_group_match: bool,
    pub ok: bool,
}

/// The full result of a `chain` or `flower` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub spec: SpecFile,
    pub tau: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<String>>,
    pub group: GroupReport,
    pub mu: usize,
    pub cyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub petal_taus: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub petal_generators: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generating_edge_exists: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<PartitionReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

/// Options for [`chain_report`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ChainOptions {
    pub edges: bool,
    pub verify: bool,
}

pub fn chain_report(spec: &ChainSpec, opts: ChainOptions) -> Result<Report> {
    let inv = chain_invariants(spec);
    let group = inv.group();
    let edges = if opts.edges {
        let mut rows = Vec::new();
        for (label, c) in edge_coefficients(spec, GeneratorEnd::Tail) {
            let order = edge_order(spec, label)?;
            let generator = order == *inv.tau();
            rows.push(EdgeReport {
                edge: label.to_string(),
                coefficient: c.to_string(),
                order: order.to_string(),
                generator,
            });
        }
        Some(rows)
    } else {
        None
    };
    let oracle = if opts.verify {
        let g = build_chain(spec);
        let tau_match = tau_matrix_tree(&g)? == *inv.tau();
        let laplacian_group_match = sandpile_group_laplacian(&g)? == group;
        let cycle_cut_group_match = sandpile_group_cycle_cut(&g)? == group;
        Some(OracleReport {
            tau_match,
            laplacian_group_match,
            cycle_cut_group_match,
            ok: tau_match && laplacian_group_match && cycle_cut_group_match,
        })
    } else {
        None
    };
    Ok(Report {
        kind: "chain".into(),
        spec: SpecFile::Chain(chain_file(spec)),
        tau: inv.tau().to_string(),
        taus: Some(inv.taus().iter().map(BigInt::to_string).collect()),
        group: GroupReport::new(&group),
        mu: group.min_generators(),
        cyclic: true,
        m_value: None,
        petal_taus: None,
        edges,
        petal_generators: None,
        generating_edge_exists: None,
        partitions: None,
        oracle,
    })
}

/// Options for [`flower_report`].
#[derive(Debug, Clone, Default)]
pub struct FlowerOptions {
    pub mu_detail: bool,
    pub generators: bool,
    pub partitions: bool,
    /// Report this specific partition instead of searching for minimum ones.
    pub explicit_partition: Option<Vec<Vec<usize>>>,
    pub verify: bool,
}

pub fn flower_report(spec: &FlowerSpec, opts: FlowerOptions) -> Result<Report> {
    let inv = flower_invariants(spec);
    let group = group_structure(spec)?;
    let mu = min_generators(spec);

    let (edges, petal_generators, generating_edge_exists) = if opts.generators {
        let classes = classify_all_edges(spec)?;
        let rows = classes
            .iter()
            .map(|(label, class)| EdgeReport {
                edge: label.to_string(),
                coefficient: class.coefficient.to_string(),
                order: class.order.to_string(),
                generator: class.generator,
            })
            .collect();
        let petal_flags = (1..=spec.center_len())
            .map(|i| petal_generator_test(spec, i))
            .collect::<Result<Vec<_>>>()?;
        (
            Some(rows),
            Some(petal_flags),
            Some(exists_generating_edge(spec)?),
        )
    } else {
        (None, None, None)
    };

    let partitions = if let Some(parts) = &opts.explicit_partition {
        Some(vec![partition_report(spec, parts)?])
    } else if opts.partitions {
        let mut reports = Vec::new();
        for partition in prime_partitions(inv.p())? {
            reports.push(partition_report(spec, partition.parts())?);
        }
        Some(reports)
    } else {
        None
    };

    let oracle = if opts.verify {
        let g = build_flower(spec);
        let tau_match = tau_matrix_tree(&g)? == *inv.tau();
        let laplacian_group_match = sandpile_group_laplacian(&g)? == group;
        let cycle_cut_group_match = sandpile_group_cycle_cut(&g)? == group;
        Some(OracleReport {
            tau_match,
            laplacian_group_match,
            cycle_cut_group_match,
            ok: tau_match && laplacian_group_match && cycle_cut_group_match,
        })
    } else {
        None
    };

    Ok(Report {
        kind: "flower".into(),
        spec: SpecFile::Flower(flower_file(spec)),
        tau: inv.tau().to_string(),
        taus: None,
        group: GroupReport::new(&group),
        mu,
        cyclic: is_cyclic(spec),
        m_value: opts.mu_detail.then(|| m_value(inv.p())),
        petal_taus: opts
            .mu_detail
            .then(|| inv.p().iter().map(BigInt::to_string).collect()),
        edges,
        petal_generators,
        generating_edge_exists,
        partitions,
        oracle,
    })
}

fn partition_report(spec: &FlowerSpec, parts: &[Vec<usize>]) -> Result<PartitionReport> {
    let red = reduce_by_partition(spec, parts)?;
    Ok(PartitionReport {
        parts: red.partition.parts().to_vec(),
        alphas: red
            .partition
            .alphas()
            .iter()
            .map(BigInt::to_string)
            .collect(),
        betas: red.betas.iter().map(BigInt::to_string).collect(),
        reduced_matrix: matrix_strings(&red.matrix),
        group: GroupReport::new(&red.group),
        mu: red.min_generators,
    })
}

pub fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(BigInt::to_string).collect())
        .collect()
}
