//! Candidate principal graphs: assembly from a Gram factor, exact weights,
//! canonical forms and export.
//!
//! The adjacency matrix has one row per simple object of the ring (even
//! vertices, row 0 is `*`) and one column per odd vertex. Column 0 is the
//! generating odd vertex, whose edges are the coefficients of `gamma`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algsearch::fusion_matrix;
use crate::fusionring::{dim_of, FusionRing, ObjectVec};
use crate::gramsearch::IntMatrix;
use crate::qfield::{QuadExt, RadicalWeight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("gamma must contain the unit exactly once")]
    UnitCoefficient,
    #[error("reduced factor has {got} rows, expected {want}")]
    Shape { got: usize, want: usize },
    #[error("adjacency does not reproduce the fusion matrix at ({0}, {1})")]
    FusionIdentity(usize, usize),
    #[error("graph is disconnected: {0}")]
    Disconnected(String),
    #[error("dimension vector is not an eigenvector at row {0}")]
    EigenRelation(usize),
    #[error("odd vertex {0} has zero weight")]
    ZeroWeight(usize),
    #[error("report does not describe a graph: {0}")]
    BadRecord(String),
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalGraph {
    ring: String,
    gamma: ObjectVec,
    adjacency: IntMatrix,
    index: QuadExt,
    odd_weights: Vec<RadicalWeight>,
}

impl PrincipalGraph {
    pub fn ring_name(&self) -> &str {
        &self.ring
    }

    pub fn gamma(&self) -> &ObjectVec {
        &self.gamma
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adjacency
    }

    pub fn index(&self) -> &QuadExt {
        &self.index
    }

    pub fn odd_weights(&self) -> &[RadicalWeight] {
        &self.odd_weights
    }

    pub fn even_count(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn odd_count(&self) -> usize {
        self.adjacency.cols()
    }

    pub fn edge_count(&self) -> i64 {
        (0..self.adjacency.rows())
            .map(|i| self.adjacency.row(i).iter().sum::<i64>())
            .sum()
    }

    /// The reduced factor: adjacency without row 0 and column 0.
    pub fn reduced_factor(&self) -> IntMatrix {
        let r = self.adjacency.rows();
        let m = self.adjacency.cols();
        let cols: Vec<Vec<i64>> = (1..m)
            .map(|j| (1..r).map(|i| self.adjacency.get(i, j)).collect())
            .collect();
        IntMatrix::from_columns(r - 1, &cols)
    }
}

/// Glues the `gamma` column and a unit row onto a reduced factor and checks
/// every graph invariant.
pub fn assemble_graph(
    ring: &FusionRing,
    gamma: &ObjectVec,
    reduced: &IntMatrix,
) -> Result<PrincipalGraph, GraphError> {
    let r = ring.rank();
    if gamma.coeffs()[0] != 1 {
        return Err(GraphError::UnitCoefficient);
    }
    if reduced.rows() != r - 1 {
        return Err(GraphError::Shape {
            got: reduced.rows(),
            want: r - 1,
        });
    }
    let m = reduced.cols();
    let mut adj = IntMatrix::zeros(r, m + 1);
    for i in 0..r {
        adj.set(i, 0, i64::from(gamma.coeffs()[i]));
    }
    for i in 1..r {
        for j in 0..m {
            adj.set(i, j + 1, reduced.get(i - 1, j));
        }
    }

    let f = fusion_matrix(ring, gamma);
    let g = adj.gram();
    for i in 0..r {
        for j in 0..r {
            if g.get(i, j) != f.get(i, j) {
                return Err(GraphError::FusionIdentity(i, j));
            }
        }
    }

    check_connected(ring, &adj)?;

    let index = dim_of(ring, gamma);
    let dims = ring.dims();
    for i in 0..r {
        let mut lhs = QuadExt::zero(ring.radicand());
        for j in 0..r {
            let v = f.get(i, j);
            if v != 0 {
                lhs = &lhs + &dims[j].scale(v);
            }
        }
        if lhs != &index * &dims[i] {
            return Err(GraphError::EigenRelation(i));
        }
    }

    let odd_weights = (0..=m)
        .map(|j| {
            let mut s = QuadExt::zero(ring.radicand());
            for i in 0..r {
                let v = adj.get(i, j);
                if v != 0 {
                    s = &s + &dims[i].scale(v);
                }
            }
            let sq = (&s * &s)
                .checked_div(&index)
                .expect("index is positive");
            RadicalWeight::new(sq).map_err(|_| GraphError::ZeroWeight(j))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(PrincipalGraph {
        ring: ring.name().to_string(),
        gamma: gamma.clone(),
        adjacency: adj,
        index,
        odd_weights,
    })
}

/// Connected components of the bipartite graph; component 0 holds `*`.
pub fn component_count(adj: &IntMatrix) -> usize {
    let (r, m) = (adj.rows(), adj.cols());
    let mut even_seen = vec![false; r];
    let mut odd_seen = vec![false; m];
    let mut count = 0;
    for start in 0..r {
        if even_seen[start] {
            continue;
        }
        count += 1;
        even_seen[start] = true;
        let mut queue = VecDeque::from([(true, start)]);
        while let Some((is_even, v)) = queue.pop_front() {
            if is_even {
                for j in 0..m {
                    if adj.get(v, j) > 0 && !odd_seen[j] {
                        odd_seen[j] = true;
                        queue.push_back((false, j));
                    }
                }
            } else {
                for i in 0..r {
                    if adj.get(i, v) > 0 && !even_seen[i] {
                        even_seen[i] = true;
                        queue.push_back((true, i));
                    }
                }
            }
        }
    }
    count + odd_seen.iter().filter(|s| !**s).count()
}

// Components away from `*` are legitimate (e.g. 1+a+a^2 in h6 splits off the
// x block); only odd vertices without edges are rejected.
fn check_connected(_ring: &FusionRing, adj: &IntMatrix) -> Result<(), GraphError> {
    let isolated: Vec<String> = (0..adj.cols())
        .filter(|&j| (0..adj.rows()).all(|i| adj.get(i, j) == 0))
        .map(|j| format!("odd#{j}"))
        .collect();
    if isolated.is_empty() {
        Ok(())
    } else {
        Err(GraphError::Disconnected(format!(
            "isolated odd vertices: {}",
            isolated.join(", ")
        )))
    }
}

/// Squared weights `w_j^2 = (sum_i A_ij dim_i)^2 / index`; `w_0^2` is the index.
pub fn odd_weights(g: &PrincipalGraph) -> &[RadicalWeight] {
    g.odd_weights()
}

/// Canonical encoding: the index together with the lexicographically least
/// adjacency over the allowed even relabelings, with odd columns `1..` sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalGraph {
    pub index: String,
    pub adjacency: Vec<Vec<i64>>,
}

/// `relabelings` are basis permutations (`new = perm[old]`) fixing the unit;
/// the identity is always included.
pub fn graph_canonical(g: &PrincipalGraph, relabelings: &[Vec<usize>]) -> CanonicalGraph {
    let r = g.adjacency.rows();
    let identity: Vec<usize> = (0..r).collect();
    let best = std::iter::once(&identity)
        .chain(relabelings.iter())
        .map(|perm| {
            let mut rows = vec![Vec::new(); r];
            for (old, &new) in perm.iter().enumerate() {
                rows[new] = g.adjacency.row(old).to_vec();
            }
            let permuted = IntMatrix::from_rows(&rows);
            let mut cols = permuted.columns();
            cols[1..].sort_by(|a, b| b.cmp(a));
            IntMatrix::from_columns(r, &cols).to_rows()
        })
        .min()
        .expect("at least the identity");
    CanonicalGraph {
        index: g.index.to_string(),
        adjacency: best,
    }
}

pub fn graphs_equivalent(
    g1: &PrincipalGraph,
    g2: &PrincipalGraph,
    relabelings: &[Vec<usize>],
) -> bool {
    g1.index == g2.index
        && g1.adjacency.rows() == g2.adjacency.rows()
        && graph_canonical(g1, relabelings) == graph_canonical(g2, relabelings)
}

/// Invertible even vertices at `*` or 1-valent at depth 2, closed under the
/// ring product.
pub fn galois_group(ring: &FusionRing, g: &PrincipalGraph) -> Vec<usize> {
    let adj = &g.adjacency;
    let mut gens: BTreeSet<usize> = BTreeSet::from([0]);
    for v in 1..adj.rows() {
        let degree: i64 = adj.row(v).iter().sum();
        if ring.is_invertible(v) && adj.get(v, 0) > 0 && degree == 1 {
            gens.insert(v);
        }
    }
    let mut group = gens.clone();
    loop {
        let mut added = false;
        let current: Vec<usize> = group.iter().copied().collect();
        for &a in &current {
            for &b in &current {
                for k in 0..ring.rank() {
                    if ring.mult(a, b, k) > 0 && group.insert(k) {
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    group.into_iter().collect()
}

/// Structured record of a graph; exact values in the crate's text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub ring: String,
    pub gamma: String,
    pub gamma_coefficients: Vec<u32>,
    pub index: String,
    pub even_labels: Vec<String>,
    pub adjacency: Vec<Vec<i64>>,
    pub odd_weight_squares: Vec<String>,
}

pub fn export_report(ring: &FusionRing, g: &PrincipalGraph) -> GraphRecord {
    GraphRecord {
        ring: g.ring.clone(),
        gamma: ring.format_object(&g.gamma),
        gamma_coefficients: g.gamma.coeffs().to_vec(),
        index: g.index.to_string(),
        even_labels: ring.labels().to_vec(),
        adjacency: g.adjacency.to_rows(),
        odd_weight_squares: g.odd_weights.iter().map(|w| w.square().to_string()).collect(),
    }
}

/// Rebuilds and re-verifies a graph from its record.
pub fn import_report(ring: &FusionRing, rec: &GraphRecord) -> Result<PrincipalGraph, GraphError> {
    let r = ring.rank();
    if rec.adjacency.len() != r || rec.gamma_coefficients.len() != r {
        return Err(GraphError::BadRecord("rank mismatch".into()));
    }
    let adj = IntMatrix::from_rows(&rec.adjacency);
    let gamma = ObjectVec(rec.gamma_coefficients.clone());
    if adj.column(0) != gamma.coeffs().iter().map(|&c| i64::from(c)).collect::<Vec<_>>() {
        return Err(GraphError::BadRecord("column 0 differs from gamma".into()));
    }
    let g = assemble_graph(ring, &gamma, &reduced_of(&adj))?;
    if g.index.to_string() != rec.index {
        return Err(GraphError::BadRecord(format!(
            "index {} recorded as {}",
            g.index, rec.index
        )));
    }
    Ok(g)
}

fn reduced_of(adj: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<i64>> = (1..adj.cols())
        .map(|j| (1..adj.rows()).map(|i| adj.get(i, j)).collect())
        .collect();
    IntMatrix::from_columns(adj.rows() - 1, &cols)
}

/// DOT text: `*` is double-circled, odd vertices carry their squared weight.
pub fn export_dot_string(ring: &FusionRing, g: &PrincipalGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{} {}\" {{", ring.name(), ring.format_object(&g.gamma));
    let _ = writeln!(out, "  label=\"index {}\";", g.index);
    for i in 0..g.adjacency.rows() {
        let shape = if i == 0 { "doublecircle" } else { "circle" };
        let label = if i == 0 { "*".to_string() } else { ring.label(i).to_string() };
        let _ = writeln!(out, "  e{i} [label=\"{label}\", shape={shape}];");
    }
    for (j, w) in g.odd_weights.iter().enumerate() {
        let _ = writeln!(out, "  o{j} [label=\"w^2={}\", shape=box];", w.square());
    }
    for i in 0..g.adjacency.rows() {
        for j in 0..g.adjacency.cols() {
            for _ in 0..g.adjacency.get(i, j) {
                let _ = writeln!(out, "  e{i} -- o{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(ring: &FusionRing, g: &PrincipalGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    fs::write(path.as_ref(), export_dot_string(ring, g)).map_err(|e| GraphError::Io(e.to_string()))
}
