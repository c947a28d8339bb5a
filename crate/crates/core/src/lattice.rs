//! Bookkeeping for intermediate subfactors: which factorizations of an index
//! are compatible with the admissible index sets, and orbit counts.
//!
//! Everything here is a necessary condition or a count; nothing certifies
//! that an intermediate subfactor exists.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::algsearch::SearchReport;
use crate::qfield::QuadExt;

pub const NECESSARY_BANNER: &str =
    "necessary conditions only: listed pairs are not shown to occur as intermediate subfactors";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("index must exceed 1, got {0}")]
    IndexTooSmall(String),
    #[error("orbit inputs must be positive")]
    NonPositive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleIndexSet {
    name: String,
    indices: Vec<QuadExt>,
}

impl AdmissibleIndexSet {
    /// Always contains 1; duplicates are dropped and values sorted.
    pub fn new(name: impl Into<String>, values: impl IntoIterator<Item = QuadExt>) -> Self {
        let mut indices: Vec<QuadExt> = Vec::new();
        let mut one_d = None;
        for v in values {
            one_d.get_or_insert(v.radicand());
            if !indices.contains(&v) {
                indices.push(v);
            }
        }
        let one = QuadExt::one(one_d.unwrap_or(2));
        if !indices.contains(&one) {
            indices.push(one);
        }
        indices.sort_by(|a, b| a.partial_cmp(b).expect("same field"));
        AdmissibleIndexSet {
            name: name.into(),
            indices,
        }
    }

    /// Indices of the surviving graphs of a scan.
    pub fn from_report(report: &SearchReport) -> Self {
        let values = report
            .entries
            .iter()
            .filter(|e| !e.surviving.is_empty())
            .map(|e| e.index.parse::<QuadExt>().expect("report index parses"));
        AdmissibleIndexSet::new(report.ring.clone(), values)
    }

    pub fn union(&self, other: &AdmissibleIndexSet) -> AdmissibleIndexSet {
        AdmissibleIndexSet::new(
            format!("{}+{}", self.name, other.name),
            self.indices.iter().chain(&other.indices).cloned(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn indices(&self) -> &[QuadExt] {
        &self.indices
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        self.indices.contains(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexPair {
    pub upper: String,
    pub lower: String,
    pub trivial: bool,
    #[serde(skip)]
    pub values: (QuadExt, QuadExt),
}

/// All `(d1, d2)` with `d1 d2 = delta`, `d1` in `upper` or `{1, delta}` and
/// `d2` in `lower` or `{1, delta}`, ordered by `d1`.
pub fn intermediate_candidates(
    delta: &QuadExt,
    upper: &AdmissibleIndexSet,
    lower: &AdmissibleIndexSet,
) -> Result<Vec<IndexPair>, LatticeError> {
    let one = QuadExt::one(delta.radicand());
    if *delta <= one {
        return Err(LatticeError::IndexTooSmall(delta.to_string()));
    }
    let allowed = |set: &AdmissibleIndexSet, x: &QuadExt| *x == one || x == delta || set.contains(x);
    let mut firsts: Vec<QuadExt> = upper.indices().to_vec();
    firsts.push(one.clone());
    firsts.push(delta.clone());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    firsts.sort_by(|a, b| a.partial_cmp(b).expect("same field"));
    for d1 in firsts {
        if d1.radicand() != delta.radicand() && !d1.is_rational() {
            continue;
        }
        let d1 = d1.with_radicand(delta.radicand());
        if !seen.insert(d1.to_string()) {
            continue;
        }
        let Ok(d2) = delta.checked_div(&d1) else { continue };
        if !allowed(lower, &d2) {
            continue;
        }
        debug_assert!(&d1 * &d2 == *delta);
        out.push(IndexPair {
            upper: d1.to_string(),
            lower: d2.to_string(),
            trivial: d1 == one || d2 == one,
            values: (d1, d2),
        });
    }
    Ok(out)
}

pub fn format_pairs(delta: &QuadExt, pairs: &[IndexPair]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "index {}", delta.pretty());
    for p in pairs {
        let _ = writeln!(
            out,
            "  ({}, {}){}",
            p.values.0.pretty(),
            p.values.1.pretty(),
            if p.trivial { " trivial" } else { "" }
        );
    }
    let _ = writeln!(out, "{NECESSARY_BANNER}");
    out
}

/// DOT drawing of the candidate divisor lattice: `1 -> d1 -> delta` per pair.
pub fn divisor_lattice_dot(delta: &QuadExt, pairs: &[IndexPair]) -> String {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let top = delta.pretty();
    nodes.insert(top.clone());
    nodes.insert("1".to_string());
    for p in pairs.iter().filter(|p| !p.trivial) {
        let mid = p.values.0.pretty();
        nodes.insert(mid.clone());
        edges.insert(("1".to_string(), mid.clone(), p.values.0.pretty()));
        edges.insert((mid, top.clone(), p.values.1.pretty()));
    }
    let mut out = String::from("graph lattice {\n");
    for n in &nodes {
        let _ = writeln!(out, "  \"{n}\";");
    }
    for (a, b, label) in &edges {
        let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"{label}\"];");
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub gal_order: u64,
    pub dual_gal_order: u64,
    pub bimodule_classes: u64,
    pub count: u64,
}

impl fmt::Display for OrbitCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} bimodule classes x Galois order {} = {} intermediates (dual Galois order {})",
            self.bimodule_classes, self.gal_order, self.count, self.dual_gal_order
        )?;
        write!(f, "bookkeeping only: assumes the Galois action on each class is free")
    }
}

/// `bimodule_classes * gal_order`, assuming a free action.
pub fn galois_orbit_report(
    gal_order: u64,
    dual_gal_order: u64,
    bimodule_classes: u64,
) -> Result<OrbitCount, LatticeError> {
    if gal_order == 0 || dual_gal_order == 0 || bimodule_classes == 0 {
        return Err(LatticeError::NonPositive);
    }
    Ok(OrbitCount {
        gal_order,
        dual_gal_order,
        bimodule_classes,
        count: bimodule_classes * gal_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algsearch::reference_catalog;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    fn sets() -> (AdmissibleIndexSet, AdmissibleIndexSet) {
        let h4 = AdmissibleIndexSet::new("h4", reference_catalog("h4").unwrap());
        let h6 = AdmissibleIndexSet::new("h6", reference_catalog("h6").unwrap());
        let both = h4.union(&h6);
        (both.clone(), both)
    }

    #[test]
    fn saturated_index_pairs() {
        let (up, low) = sets();
        let delta = q("33/2+9/2*sqrt(13)");
        let pairs = intermediate_candidates(&delta, &up, &low).unwrap();
        let nontrivial: Vec<(String, String)> = pairs
            .iter()
            .filter(|p| !p.trivial)
            .map(|p| (p.values.0.pretty(), p.values.1.pretty()))
            .collect();
        assert_eq!(
            nontrivial,
            vec![
                ("3".to_string(), "(11+3√13)/2".to_string()),
                ("(5+√13)/2".to_string(), "4+√13".to_string()),
                ("4+√13".to_string(), "(5+√13)/2".to_string()),
                ("(11+3√13)/2".to_string(), "3".to_string()),
            ]
        );
        assert_eq!(pairs.iter().filter(|p| p.trivial).count(), 2);
        for p in &pairs {
            assert_eq!(&p.values.0 * &p.values.1, delta);
        }
    }

    #[test]
    fn smallest_index_has_no_proper_pairs() {
        let (up, low) = sets();
        let pairs = intermediate_candidates(&q("5/2+1/2*sqrt(13)"), &up, &low).unwrap();
        assert!(pairs.iter().all(|p| p.trivial));
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn index_one_rejected() {
        let (up, low) = sets();
        assert!(intermediate_candidates(&QuadExt::one(13), &up, &low).is_err());
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(galois_orbit_report(3, 3, 3).unwrap().count, 9);
        assert_eq!(galois_orbit_report(3, 1, 1).unwrap().count, 3);
        assert_eq!(galois_orbit_report(1, 1, 1).unwrap().count, 1);
        assert!(galois_orbit_report(0, 1, 1).is_err());
    }

    #[test]
    fn lattice_dot() {
        let (up, low) = sets();
        let delta = q("33/2+9/2*sqrt(13)");
        let pairs = intermediate_candidates(&delta, &up, &low).unwrap();
        let dot = divisor_lattice_dot(&delta, &pairs);
        assert!(dot.starts_with("graph lattice {"));
        assert_eq!(dot.matches(" -- ").count(), 8);
    }
}
