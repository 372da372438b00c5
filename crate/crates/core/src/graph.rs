//! Labeled multigraphs for polygon chains and polygon flowers.
//!
//! A polygon chain stacks polygons edge-to-edge: the trivial chain is a
//! single edge, and polygon `i` is glued onto the designated shared edge of
//! polygon `i-1`. A polygon flower glues a chain onto every edge of a central
//! cycle. Both constructions record their bounded faces so that the
//! cycle-space/cut-space presentation of the sandpile group can be assembled
//! without any planarity machinery.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Ordered polygon side counts `(k_1, ..., k_n)` of a polygon chain.
///
/// Every entry is at least 2 (a 2-gon is a pair of parallel edges). The
/// empty sequence is the trivial chain: a single edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainSpec {
    ks: Vec<u32>,
}

impl ChainSpec {
    pub fn new(ks: Vec<u32>) -> Result<Self> {
        if let Some(&k) = ks.iter().find(|&&k| k < 2) {
            return Err(Error::InvalidSideCount(k));
        }
        Ok(ChainSpec { ks })
    }

    /// The trivial chain: a single edge, zero polygons.
    pub fn trivial() -> Self {
        ChainSpec { ks: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.ks.is_empty()
    }

    /// Number of polygons in the chain.
    pub fn polygons(&self) -> usize {
        self.ks.len()
    }

    pub fn sides(&self) -> &[u32] {
        &self.ks
    }

    /// The same side counts read from the far end. The number of spanning
    /// trees is invariant under this reversal, which lets one expression
    /// algorithm serve both ends of the chain.
    pub fn reversed(&self) -> ChainSpec {
        let mut ks = self.ks.clone();
        ks.reverse();
        ChainSpec { ks }
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.ks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A polygon flower: a center cycle of length `t` together with one polygon
/// chain per center edge. A chain may be trivial, in which case that petal
/// contributes nothing beyond the center edge itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowerSpec {
    petals: Vec<ChainSpec>,
}

impl FlowerSpec {
    pub fn new(center: usize, petals: Vec<ChainSpec>) -> Result<Self> {
        if center < 2 {
            return Err(Error::InvalidCenter(center));
        }
        if petals.len() != center {
            return Err(Error::PetalCountMismatch {
                declared: center,
                got: petals.len(),
            });
        }
        Ok(FlowerSpec { petals })
    }

    /// Length of the center cycle.
    pub fn center_len(&self) -> usize {
        self.petals.len()
    }

    pub fn petals(&self) -> &[ChainSpec] {
        &self.petals
    }

    /// Petal by 1-based index.
    pub fn petal(&self, i: usize) -> Result<&ChainSpec> {
        if i == 0 || i > self.petals.len() {
            return Err(Error::BadIndex {
                index: i,
                max: self.petals.len(),
            });
        }
        Ok(&self.petals[i - 1])
    }

    /// Number of non-trivial petals.
    pub fn petal_count(&self) -> usize {
        self.petals.iter().filter(|p| !p.is_trivial()).count()
    }
}

impl fmt::Display for FlowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(C{}; ", self.center_len())?;
        for (i, p) in self.petals.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Structural label of an edge in a generated chain or flower.
///
/// Petal and polygon indices are 1-based; boundary indices run from 0 (the
/// base edge of a chain, identified with a center edge in a flower) to the
/// number of polygons (the designated free edge of the last polygon). For a
/// pure chain the petal component is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Center edge `e_i` of a flower, `i = 1..=t`.
    Center(usize),
    /// Shared edge `e_index` of a chain or petal (`index = 0..=n`).
    Boundary { petal: Option<usize>, index: usize },
    /// Interior edge of a polygon: neither shared with the previous polygon
    /// nor designated as the next shared edge. `position` runs `1..=k-2`.
    Interior {
        petal: Option<usize>,
        polygon: usize,
        position: usize,
    },
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeLabel::Center(i) => write!(f, "e{i}"),
            EdgeLabel::Boundary { petal: None, index } => write!(f, "e{index}"),
            EdgeLabel::Boundary {
                petal: Some(p),
                index,
            } => write!(f, "p{p}.e{index}"),
            EdgeLabel::Interior {
                petal: None,
                polygon,
                position,
            } => write!(f, "f{polygon}.{position}"),
            EdgeLabel::Interior {
                petal: Some(p),
                polygon,
                position,
            } => write!(f, "p{p}.f{polygon}.{position}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Edge {
    u: usize,
    v: usize,
    label: EdgeLabel,
}

/// A bounded face, stored as a closed edge walk starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    start: usize,
    edges: Vec<usize>,
}

impl Face {
    /// Walks the face and yields `(edge index, sign)` pairs, where the sign
    /// is +1 when the walk traverses the edge from its lower-indexed to its
    /// higher-indexed endpoint (the orientation used throughout the oracles).
    pub fn signed_edges(&self, g: &Multigraph) -> Vec<(usize, i8)> {
        let mut at = self.start;
        let mut out = Vec::with_capacity(self.edges.len());
        for &e in &self.edges {
            let (u, v) = g.endpoints(e);
            let next = if at == u { v } else { u };
            debug_assert!(at == u || at == v, "face walk broke at edge {e}");
            out.push((e, if at < next { 1 } else { -1 }));
            at = next;
        }
        debug_assert_eq!(at, self.start, "face walk did not close");
        out
    }
}

/// An undirected multigraph with labeled edges. Parallel edges are allowed;
/// loops are never stored (contraction drops them, and they contribute
/// nothing to spanning trees or to the Laplacian).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    faces: Option<Vec<Face>>,
}

impl Multigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.edges[edge].u, self.edges[edge].v)
    }

    pub fn label(&self, edge: usize) -> EdgeLabel {
        self.edges[edge].label
    }

    pub fn labels(&self) -> impl Iterator<Item = EdgeLabel> + '_ {
        self.edges.iter().map(|e| e.label)
    }

    /// Bounded faces, present only on freshly built chains and flowers.
    /// Deletion and contraction invalidate the face list.
    pub fn faces(&self) -> Option<&[Face]> {
        self.faces.as_deref()
    }

    /// Resolves a label to an edge index. In a flower, the base edge of
    /// petal `i` is the center edge `e_i`, so `Boundary { petal: i, index: 0 }`
    /// resolves to the same edge as `Center(i)`.
    pub fn edge_index(&self, label: EdgeLabel) -> Result<usize> {
        let target = self.normalize(label);
        self.edges
            .iter()
            .position(|e| e.label == target)
            .ok_or_else(|| Error::UnknownEdge(label.to_string()))
    }

    fn normalize(&self, label: EdgeLabel) -> EdgeLabel {
        match label {
            EdgeLabel::Boundary {
                petal: Some(p),
                index: 0,
            } => EdgeLabel::Center(p),
            other => other,
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    fn add_edge(&mut self, u: usize, v: usize, label: EdgeLabel) -> usize {
        self.edges.push(Edge { u, v, label });
        self.edges.len() - 1
    }

    /// Removes an edge; the vertex set is unchanged. The result may be
    /// disconnected.
    pub fn delete_edge(&self, label: EdgeLabel) -> Result<Multigraph> {
        let idx = self.edge_index(label)?;
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Ok(Multigraph {
            vertex_count: self.vertex_count,
            edges,
            faces: None,
        })
    }

    /// Contracts an edge: its endpoints are merged, resulting loops are
    /// dropped, parallel edges are kept.
    pub fn contract_edge(&self, label: EdgeLabel) -> Result<Multigraph> {
        let idx = self.edge_index(label)?;
        let (a, b) = self.endpoints(idx);
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let remap = |w: usize| {
            let w = if w == gone { keep } else { w };
            if w > gone {
                w - 1
            } else {
                w
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, e)| Edge {
                u: remap(e.u),
                v: remap(e.v),
                label: e.label,
            })
            .filter(|e| e.u != e.v)
            .collect();
        Ok(Multigraph {
            vertex_count: self.vertex_count - 1,
            edges,
            faces: None,
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let w = if e.u == v {
                    e.v
                } else if e.v == v {
                    e.u
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The Laplacian `D - A` with edge multiplicities.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertex_count;
        let mut m = IntMatrix::zeros(n, n);
        let one = BigInt::from(1);
        for e in &self.edges {
            if e.u == e.v {
                continue;
            }
            *m.entry_mut(e.u, e.u) += &one;
            *m.entry_mut(e.v, e.v) += &one;
            *m.entry_mut(e.u, e.v) -= &one;
            *m.entry_mut(e.v, e.u) -= &one;
        }
        m
    }

    /// The Laplacian with the sink's row and column removed.
    pub fn reduced_laplacian(&self, sink: usize) -> Result<IntMatrix> {
        if sink >= self.vertex_count {
            return Err(Error::BadIndex {
                index: sink,
                max: self.vertex_count.saturating_sub(1),
            });
        }
        let full = self.laplacian();
        let n = self.vertex_count;
        let mut m = IntMatrix::zeros(n - 1, n - 1);
        for i in 0..n - 1 {
            let si = if i >= sink { i + 1 } else { i };
            for j in 0..n - 1 {
                let sj = if j >= sink { j + 1 } else { j };
                *m.entry_mut(i, j) = full.entry(si, sj).clone();
            }
        }
        Ok(m)
    }
}

/// Attaches one polygon with `k` sides onto the edge `(tail, head)` (the
/// shared edge, already present with index `shared`). Returns the index of
/// the new designated shared edge, whose construction-time orientation is
/// `(new tail, head)`: the designated edge is the one adjacent to the head
/// of the previous shared edge.
fn attach_polygon(
    g: &mut Multigraph,
    tail: usize,
    head: usize,
    shared: usize,
    k: u32,
    polygon: usize,
    petal: Option<usize>,
) -> usize {
    let mut interior = Vec::new();
    let mut at = tail;
    for j in 1..=k.saturating_sub(2) {
        let w = g.add_vertex();
        interior.push(g.add_edge(
            at,
            w,
            EdgeLabel::Interior {
                petal,
                polygon,
                position: j as usize,
            },
        ));
        at = w;
    }
    let designated = g.add_edge(
        at,
        head,
        EdgeLabel::Boundary {
            petal,
            index: polygon,
        },
    );
    // Closed walk tail -(shared)-> head -(designated)-> ... -> tail.
    let mut walk = vec![shared, designated];
    walk.extend(interior.iter().rev());
    let face = Face {
        start: tail,
        edges: walk,
    };
    g.faces.as_mut().expect("builder keeps faces").push(face);
    designated
}

/// Builds the canonical graph of a polygon chain.
///
/// Every polygon is glued onto the previous polygon's designated shared
/// edge, so each side-count sequence yields one fixed representative of its
/// restacking class. All quantities computed downstream are invariant under
/// restacking.
pub fn build_chain(spec: &ChainSpec) -> Multigraph {
    let mut g = Multigraph {
        vertex_count: 2,
        edges: Vec::new(),
        faces: Some(Vec::new()),
    };
    let base = g.add_edge(
        0,
        1,
        EdgeLabel::Boundary {
            petal: None,
            index: 0,
        },
    );
    let (mut tail, head) = (0usize, 1usize);
    let mut shared = base;
    for (i, &k) in spec.sides().iter().enumerate() {
        let designated = attach_polygon(&mut g, tail, head, shared, k, i + 1, None);
        tail = g.edges[designated].u;
        shared = designated;
    }
    g
}

/// Builds the graph of a polygon flower: a center cycle `v_1 e_1 ... v_t e_t`
/// with petal `i` glued onto `e_i` through its base edge.
pub fn build_flower(spec: &FlowerSpec) -> Multigraph {
    let t = spec.center_len();
    let mut g = Multigraph {
        vertex_count: t,
        edges: Vec::new(),
        faces: Some(Vec::new()),
    };
    let mut center = Vec::with_capacity(t);
    for i in 1..=t {
        center.push(g.add_edge(i - 1, i % t, EdgeLabel::Center(i)));
    }
    g.faces.as_mut().unwrap().push(Face {
        start: 0,
        edges: center.clone(),
    });
    for (i, petal) in spec.petals().iter().enumerate() {
        let (mut tail, head) = (i, (i + 1) % t);
        let mut shared = center[i];
        for (p, &k) in petal.sides().iter().enumerate() {
            let designated = attach_polygon(&mut g, tail, head, shared, k, p + 1, Some(i + 1));
            tail = g.edges[designated].u;
            shared = designated;
        }
    }
    g
}
