//! Classification of candidate algebra objects in a fusion ring.
//!
//! For each candidate `gamma = 1 + sum a_i xi_i` (coefficients bounded by the
//! floor of the dimension), the reduced fusion matrix is factored as
//! `A^r (A^r)^T`; each factor gives a candidate principal graph, which then
//! has to survive the odd-vertex tests:
//!
//! 1. every squared odd weight is an allowed subfactor index;
//! 2. every squared odd weight minus one is a sum of nontrivial dimensions;
//! 3. every squared odd weight `>= 4` is itself the index of some candidate
//!    that survives at one recursion level less.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Mutex;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusionring::{apply_permutation, conjugation_group, dim_of, dual_object, FusionRing, ObjectVec};
use crate::gramsearch::{gram_factorizations, is_psd_exact, IntMatrix};
use crate::pgraph::{
    assemble_graph, component_count, galois_group, graph_canonical, CanonicalGraph, GraphError,
    PrincipalGraph,
};
use crate::qfield::{jones_admissible, QuadExt};

/// Largest candidate space `scan_ring` walks without an index cap.
pub const MAX_CANDIDATE_SPACE: u128 = 2_000_000;

/// Deepest allowed recursion for the odd-vertex index test.
pub const MAX_RECURSION_DEPTH: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("recursion depth {0} exceeds the limit {MAX_RECURSION_DEPTH}")]
    RecursionTooDeep(u32),
    #[error(
        "candidate space for {ring} has {size} elements (limit {MAX_CANDIDATE_SPACE}); \
         pass a max index or an explicit candidate list"
    )]
    CandidateSpaceTooLarge { ring: String, size: u128 },
    #[error("candidate {0} does not match the ring rank or lacks the unit")]
    BadCandidate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub self_dual_filter: bool,
    pub inner_orbit_dedup: bool,
    pub recursion_depth: u32,
    pub max_index: Option<QuadExt>,
    pub jones_filter: bool,
    pub expressibility_filter: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            self_dual_filter: true,
            inner_orbit_dedup: true,
            recursion_depth: 1,
            max_index: None,
            jones_filter: true,
            expressibility_filter: true,
        }
    }
}

impl SearchOptions {
    pub fn check(&self) -> Result<(), ScanError> {
        if self.recursion_depth > MAX_RECURSION_DEPTH {
            return Err(ScanError::RecursionTooDeep(self.recursion_depth));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    NegativeEntry,
    NotPsd,
    NoIntegerFactorization,
    Disconnected,
    Jones,
    Expressibility,
    Recursive,
    IndexCap,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::NegativeEntry => "negative-entry",
            Reason::NotPsd => "not-PSD",
            Reason::NoIntegerFactorization => "no-integer-factorization",
            Reason::Disconnected => "disconnected",
            Reason::Jones => "jones",
            Reason::Expressibility => "expressibility",
            Reason::Recursive => "recursive",
            Reason::IndexCap => "index-cap",
        }
    }
}

/// Why a graph or candidate was discarded, with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub reason: Reason,
    pub detail: String,
}

/// `F_ij` = multiplicity of `xi_j` in `gamma xi_i`.
pub fn fusion_matrix(ring: &FusionRing, gamma: &ObjectVec) -> IntMatrix {
    let r = ring.rank();
    let mut f = IntMatrix::zeros(r, r);
    for (k, &a) in gamma.coeffs().iter().enumerate() {
        if a == 0 {
            continue;
        }
        for i in 0..r {
            for j in 0..r {
                let m = ring.mult(k, i, j);
                if m > 0 {
                    f.set(i, j, f.get(i, j) + i64::from(a) * i64::from(m));
                }
            }
        }
    }
    f
}

/// `F_ij - a_i a_j` over the nontrivial simples. A negative entry means no
/// factor exists; the error carries its position in ring indices.
pub fn reduced_fusion_matrix(ring: &FusionRing, gamma: &ObjectVec) -> Result<IntMatrix, (usize, usize)> {
    let f = fusion_matrix(ring, gamma);
    let r = ring.rank();
    let a = gamma.coeffs();
    let mut out = IntMatrix::zeros(r - 1, r - 1);
    for i in 1..r {
        for j in 1..r {
            let v = f.get(i, j) - i64::from(a[i]) * i64::from(a[j]);
            if v < 0 {
                return Err((i, j));
            }
            out.set(i - 1, j - 1, v);
        }
    }
    Ok(out)
}

fn coefficient_bounds(ring: &FusionRing) -> Vec<u32> {
    ring.dims()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if i == 0 {
                1
            } else {
                d.floor().to_u32().expect("dimension floor fits in u32")
            }
        })
        .collect()
}

/// Positions enumerated freely; with the self-dual filter, partners copy them.
fn free_positions(ring: &FusionRing, self_dual: bool) -> Vec<usize> {
    (1..ring.rank())
        .filter(|&i| !self_dual || i <= ring.dual(i))
        .collect()
}

/// Size of the candidate space before orbit reduction and index capping.
pub fn candidate_space_size(ring: &FusionRing, opts: &SearchOptions) -> u128 {
    let bounds = coefficient_bounds(ring);
    free_positions(ring, opts.self_dual_filter)
        .iter()
        .map(|&i| u128::from(bounds[i]) + 1)
        .product()
}

/// Walks coefficient vectors in lexicographic order, pruning on the index cap
/// and, when `exact` is set, requiring the dimension to equal the target.
fn walk_candidates(
    ring: &FusionRing,
    self_dual: bool,
    cap: Option<&QuadExt>,
    exact: bool,
    visit: &mut dyn FnMut(&ObjectVec),
) {
    let bounds = coefficient_bounds(ring);
    let free = free_positions(ring, self_dual);
    let per_unit: Vec<QuadExt> = free
        .iter()
        .map(|&i| {
            if self_dual && ring.dual(i) != i {
                ring.dim(i).scale(2)
            } else {
                ring.dim(i).clone()
            }
        })
        .collect();
    // rest_max[p]: largest dimension the positions p.. can still add
    let mut rest_max = vec![QuadExt::zero(ring.radicand()); free.len() + 1];
    for p in (0..free.len()).rev() {
        rest_max[p] = &rest_max[p + 1] + &per_unit[p].scale(i64::from(bounds[free[p]]));
    }
    let mut coeffs = vec![0u32; ring.rank()];
    coeffs[0] = 1;
    let mut walk = Walk {
        ring,
        self_dual,
        free: &free,
        bounds: &bounds,
        per_unit: &per_unit,
        rest_max: &rest_max,
        cap,
        exact,
        coeffs,
        visit,
    };
    walk.go(0, &QuadExt::one(ring.radicand()));
}

struct Walk<'a, 'v> {
    ring: &'a FusionRing,
    self_dual: bool,
    free: &'a [usize],
    bounds: &'a [u32],
    per_unit: &'a [QuadExt],
    rest_max: &'a [QuadExt],
    cap: Option<&'a QuadExt>,
    exact: bool,
    coeffs: Vec<u32>,
    visit: &'v mut dyn FnMut(&ObjectVec),
}

impl Walk<'_, '_> {
    fn go(&mut self, pos: usize, partial: &QuadExt) {
        if pos == self.free.len() {
            if !self.exact || self.cap.is_some_and(|c| partial == c) {
                (self.visit)(&ObjectVec(self.coeffs.clone()));
            }
            return;
        }
        let i = self.free[pos];
        let partner = self.ring.dual(i);
        let mut sum = partial.clone();
        for c in 0..=self.bounds[i] {
            if c > 0 {
                sum = &sum + &self.per_unit[pos];
            }
            if let Some(cap) = self.cap {
                if sum > *cap {
                    break;
                }
                if self.exact && &sum + &self.rest_max[pos + 1] < *cap {
                    continue;
                }
            }
            self.coeffs[i] = c;
            if self.self_dual {
                self.coeffs[partner] = c;
            }
            self.go(pos + 1, &sum);
        }
        self.coeffs[i] = 0;
        if self.self_dual {
            self.coeffs[partner] = 0;
        }
    }
}

fn is_orbit_minimal(perms: &[Vec<usize>], v: &ObjectVec) -> bool {
    perms.iter().all(|p| apply_permutation(p, v) >= *v)
}

fn orbit_size(perms: &[Vec<usize>], v: &ObjectVec) -> usize {
    perms
        .iter()
        .map(|p| apply_permutation(p, v))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Every `gamma` with unit coefficient 1 and `0 <= a_i <= floor(dim xi_i)`,
/// filtered per `opts`, in lexicographic order of coefficients.
pub fn enumerate_candidates(ring: &FusionRing, opts: &SearchOptions) -> Vec<ObjectVec> {
    let perms = conjugation_group(ring);
    let mut out = Vec::new();
    walk_candidates(ring, opts.self_dual_filter, opts.max_index.as_ref(), false, &mut |v| {
        if !opts.inner_orbit_dedup || is_orbit_minimal(&perms, v) {
            out.push(v.clone());
        }
    });
    out.sort();
    debug_assert!(out
        .iter()
        .all(|v| !opts.self_dual_filter || dual_object(ring, v) == *v));
    out
}

/// Candidates whose dimension is exactly `target`.
pub fn candidates_with_dim(ring: &FusionRing, target: &QuadExt, opts: &SearchOptions) -> Vec<ObjectVec> {
    let perms = conjugation_group(ring);
    let mut out = Vec::new();
    walk_candidates(ring, opts.self_dual_filter, Some(target), true, &mut |v| {
        if !opts.inner_orbit_dedup || is_orbit_minimal(&perms, v) {
            out.push(v.clone());
        }
    });
    out.sort();
    out
}

/// Nonnegative integers `c_i` (unit excluded) with `sum c_i dim(xi_i) = target`,
/// as a witness vector, or `None`.
pub fn express_as_dimensions(ring: &FusionRing, target: &QuadExt) -> Option<ObjectVec> {
    if target.sign() < 0 {
        return None;
    }
    // simples of equal dimension are interchangeable; search over classes
    let mut classes: Vec<(QuadExt, Vec<usize>)> = Vec::new();
    for i in 1..ring.rank() {
        match classes.iter_mut().find(|(d, _)| d == ring.dim(i)) {
            Some((_, members)) => members.push(i),
            None => classes.push((ring.dim(i).clone(), vec![i])),
        }
    }
    // larger dimensions first keeps the search shallow
    classes.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("same field"));

    fn go(classes: &[(QuadExt, Vec<usize>)], k: usize, rest: &QuadExt, counts: &mut Vec<u64>) -> bool {
        if rest.is_zero() {
            counts.truncate(k);
            counts.resize(classes.len(), 0);
            return true;
        }
        if k == classes.len() {
            return false;
        }
        let d = &classes[k].0;
        let max = rest
            .checked_div(d)
            .expect("positive dimension")
            .floor()
            .to_u64()
            .unwrap_or(0);
        for c in (0..=max).rev() {
            let next = rest - &d.scale(c as i64);
            if next.sign() < 0 {
                continue;
            }
            counts.truncate(k);
            counts.push(c);
            if go(classes, k + 1, &next, counts) {
                return true;
            }
        }
        false
    }

    let mut counts = Vec::new();
    if !go(&classes, 0, target, &mut counts) {
        return None;
    }
    let mut out = vec![0u32; ring.rank()];
    for ((_, members), &total) in classes.iter().zip(&counts) {
        // spread evenly; any split is valid since members share a dimension
        let n = members.len() as u64;
        for (j, &i) in members.iter().enumerate() {
            let share = total / n + u64::from((j as u64) < total % n);
            out[i] = share as u32;
        }
    }
    Some(ObjectVec(out))
}

pub fn expressibility_check(ring: &FusionRing, target: &QuadExt) -> bool {
    express_as_dimensions(ring, target).is_some()
}

/// A graph kept in a report: canonical form plus the data the filters used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEntry {
    pub canonical: CanonicalGraph,
    pub odd_weight_squares: Vec<String>,
    pub components: usize,
    pub galois_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminatedGraph {
    pub graph: GraphEntry,
    pub elimination: Elimination,
    /// All filters that reject the graph; the first is `elimination.reason`.
    pub failed_filters: Vec<Reason>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub gamma: String,
    /// Comma-separated coefficients, unit first.
    pub coefficients: String,
    pub index: String,
    pub orbit_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rejected: Option<Elimination>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub surviving: Vec<GraphEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub eliminated: Vec<EliminatedGraph>,
}

impl CandidateEntry {
    pub fn object(&self) -> ObjectVec {
        ObjectVec::parse_compact(&self.coefficients).expect("compact coefficients")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionsRecord {
    pub self_dual_filter: bool,
    pub inner_orbit_dedup: bool,
    pub recursion_depth: u32,
    pub max_index: Option<String>,
    pub jones_filter: bool,
    pub expressibility_filter: bool,
}

impl From<&SearchOptions> for OptionsRecord {
    fn from(o: &SearchOptions) -> Self {
        OptionsRecord {
            self_dual_filter: o.self_dual_filter,
            inner_orbit_dedup: o.inner_orbit_dedup,
            recursion_depth: o.recursion_depth,
            max_index: o.max_index.as_ref().map(|x| x.to_string()),
            jones_filter: o.jones_filter,
            expressibility_filter: o.expressibility_filter,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub ring: String,
    pub options: OptionsRecord,
    pub candidates: usize,
    /// Candidate rejections by tag, plus graph eliminations by tag.
    pub rejected_candidates: BTreeMap<String, usize>,
    pub eliminated_graphs: BTreeMap<String, usize>,
    /// Eliminated graphs rejected by each filter, counting every failing filter.
    pub filter_failures: BTreeMap<String, usize>,
    pub surviving_graphs: usize,
    /// Indices of surviving graphs other than the trivial one, sorted.
    pub surviving_indices: Vec<String>,
    /// Survivors not accounted for by the ring's reference catalog.
    pub unresolved: Vec<String>,
    /// Catalog entries with no survivor.
    pub missing: Vec<String>,
    pub notes: Vec<String>,
    pub entries: Vec<CandidateEntry>,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Surviving (gamma, graph) pairs, trivial algebra excluded.
    pub fn nontrivial_survivors(&self) -> impl Iterator<Item = (&CandidateEntry, &GraphEntry)> {
        self.entries
            .iter()
            .filter(|e| e.index != "1")
            .flat_map(|e| e.surviving.iter().map(move |g| (e, g)))
    }

    /// Fixed-width table: one line per candidate that produced a graph.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ring {}: {} candidates", self.ring, self.candidates);
        let _ = writeln!(out, "{:<40} {:<22} {:>8} {}", "candidate", "index", "graphs", "eliminations");
        for e in &self.entries {
            if e.rejected.is_some() {
                continue;
            }
            let mut tags: BTreeMap<&str, usize> = BTreeMap::new();
            for g in &e.eliminated {
                *tags.entry(g.elimination.reason.tag()).or_default() += 1;
            }
            let tags: Vec<String> = tags.iter().map(|(t, n)| format!("{t}x{n}")).collect();
            let index = e.index.parse::<QuadExt>().map(|q| q.pretty()).unwrap_or_else(|_| e.index.clone());
            let _ = writeln!(
                out,
                "{:<40} {:<22} {:>8} {}",
                e.gamma,
                index,
                e.surviving.len(),
                if tags.is_empty() { "-".to_string() } else { tags.join(" ") }
            );
        }
        let _ = writeln!(out, "candidate rejections: {}", format_tally(&self.rejected_candidates));
        let _ = writeln!(out, "graph eliminations:   {}", format_tally(&self.eliminated_graphs));
        let _ = writeln!(out, "filter failures:      {}", format_tally(&self.filter_failures));
        let pretty: Vec<String> = self
            .surviving_indices
            .iter()
            .map(|s| s.parse::<QuadExt>().map(|q| q.pretty()).unwrap_or_else(|_| s.clone()))
            .collect();
        let _ = writeln!(
            out,
            "surviving nontrivial graphs: {} [{}]",
            self.surviving_indices.len(),
            pretty.join(", ")
        );
        for u in &self.unresolved {
            let _ = writeln!(out, "UNRESOLVED: {u}");
        }
        for m in &self.missing {
            let _ = writeln!(out, "MISSING: {m}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn format_tally(t: &BTreeMap<String, usize>) -> String {
    if t.is_empty() {
        return "none".into();
    }
    t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Reference index lists for the builtin rings.
pub fn reference_catalog(ring_name: &str) -> Option<Vec<QuadExt>> {
    let list: &[&str] = match ring_name {
        "h4" => &[
            "5/2+1/2*sqrt(13)",
            "12+3*sqrt(13)",
            "4+sqrt(13)",
            "11/2+3/2*sqrt(13)",
            "15/2+3/2*sqrt(13)",
            "19/2+5/2*sqrt(13)",
            "7/2+1/2*sqrt(13)",
        ],
        "h6" | "i2:3" => &[
            "5/2+1/2*sqrt(13)",
            "12+3*sqrt(13)",
            "4+sqrt(13)",
            "11/2+3/2*sqrt(13)",
            "15/2+3/2*sqrt(13)",
            "33/2+9/2*sqrt(13)",
            "3",
        ],
        "i2:5" => &[
            "7/2+1/2*sqrt(29)",
            "55+10*sqrt(29)",
            "11+2*sqrt(29)",
            "27/2+5/2*sqrt(29)",
            "35/2+5/2*sqrt(29)",
            "135/2+25/2*sqrt(29)",
            "5",
        ],
        _ => return None,
    };
    Some(list.iter().map(|s| s.parse().expect("catalog value")).collect())
}

/// Outcome of running the graph pipeline on one candidate.
#[derive(Clone, Debug)]
pub struct CandidateOutcome {
    pub gamma: ObjectVec,
    pub index: QuadExt,
    pub rejected: Option<Elimination>,
    pub surviving: Vec<(PrincipalGraph, CanonicalGraph)>,
    pub eliminated: Vec<(PrincipalGraph, CanonicalGraph, Elimination, Vec<Reason>)>,
}

/// Shared state for one ring and option set; memoizes the recursive test.
pub struct Scanner<'a> {
    ring: &'a FusionRing,
    opts: SearchOptions,
    perms: Vec<Vec<usize>>,
    memo: Mutex<HashMap<(QuadExt, u32), bool>>,
}

impl<'a> Scanner<'a> {
    pub fn new(ring: &'a FusionRing, opts: SearchOptions) -> Result<Self, ScanError> {
        opts.check()?;
        Ok(Scanner {
            ring,
            opts,
            perms: conjugation_group(ring),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    /// Whether some candidate of dimension `target` keeps a graph at `depth`.
    pub fn admits(&self, target: &QuadExt, depth: u32) -> bool {
        let key = (target.clone(), depth);
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return v;
        }
        let mut sub = self.opts.clone();
        sub.max_index = None;
        sub.inner_orbit_dedup = true;
        let found = candidates_with_dim(self.ring, target, &sub)
            .iter()
            .any(|g| !self.evaluate(g, depth).surviving.is_empty());
        self.memo.lock().expect("memo lock").insert(key, found);
        found
    }

    /// Runs the reduced-matrix gate, factorization and odd-vertex tests.
    pub fn evaluate(&self, gamma: &ObjectVec, depth: u32) -> CandidateOutcome {
        let ring = self.ring;
        let index = dim_of(ring, gamma);
        let mut outcome = CandidateOutcome {
            gamma: gamma.clone(),
            index,
            rejected: None,
            surviving: Vec::new(),
            eliminated: Vec::new(),
        };
        let reduced = match reduced_fusion_matrix(ring, gamma) {
            Ok(m) => m,
            Err((i, j)) => {
                outcome.rejected = Some(Elimination {
                    reason: Reason::NegativeEntry,
                    detail: format!(
                        "a_{0} a_{1} exceeds F[{0}][{1}]",
                        ring.label(i),
                        ring.label(j)
                    ),
                });
                return outcome;
            }
        };
        if !is_psd_exact(&reduced).expect("reduced matrix is symmetric") {
            outcome.rejected = Some(Elimination {
                reason: Reason::NotPsd,
                detail: format!("reduced matrix {reduced} is not positive semidefinite"),
            });
            return outcome;
        }
        let factors = gram_factorizations(&reduced, None);
        if factors.is_empty() {
            outcome.rejected = Some(Elimination {
                reason: Reason::NoIntegerFactorization,
                detail: format!("reduced matrix {reduced} has no nonnegative integer factor"),
            });
            return outcome;
        }

        let stabilizer: Vec<Vec<usize>> = self
            .perms
            .iter()
            .filter(|p| apply_permutation(p, gamma) == *gamma)
            .cloned()
            .collect();
        let mut seen = BTreeSet::new();
        for a in &factors {
            let graph = match assemble_graph(ring, gamma, a) {
                Ok(g) => g,
                Err(GraphError::Disconnected(msg)) => {
                    // keep a placeholder record: the factor never becomes a graph
                    outcome.rejected.get_or_insert(Elimination {
                        reason: Reason::Disconnected,
                        detail: msg,
                    });
                    continue;
                }
                Err(e) => panic!("factor of the reduced matrix failed to assemble: {e}"),
            };
            let canon = graph_canonical(&graph, &stabilizer);
            if !seen.insert(canon.clone()) {
                continue;
            }
            match self.odd_vertex_tests(&graph, depth) {
                Ok(()) => outcome.surviving.push((graph, canon)),
                Err(e) => {
                    let failed = self.failed_filters(&graph, depth);
                    outcome.eliminated.push((graph, canon, e, failed));
                }
            }
        }
        if !outcome.surviving.is_empty() || !outcome.eliminated.is_empty() {
            outcome.rejected = None;
        }
        outcome
    }

    /// Filters in order: Jones on every odd vertex, then expressibility, then
    /// the recursive index test. Disabled filters are skipped.
    pub fn odd_vertex_tests(&self, g: &PrincipalGraph, depth: u32) -> Result<(), Elimination> {
        if self.opts.jones_filter {
            if let Some(e) = self.jones_test(g) {
                return Err(e);
            }
        }
        if self.opts.expressibility_filter {
            if let Some(e) = self.expressibility_test(g) {
                return Err(e);
            }
        }
        if let Some(e) = self.recursive_test(g, depth) {
            return Err(e);
        }
        Ok(())
    }

    /// Every enabled filter that rejects `g`, not just the first.
    pub fn failed_filters(&self, g: &PrincipalGraph, depth: u32) -> Vec<Reason> {
        let mut out = Vec::new();
        if self.opts.jones_filter && self.jones_test(g).is_some() {
            out.push(Reason::Jones);
        }
        if self.opts.expressibility_filter && self.expressibility_test(g).is_some() {
            out.push(Reason::Expressibility);
        }
        if self.recursive_test(g, depth).is_some() {
            out.push(Reason::Recursive);
        }
        out
    }

    fn jones_test(&self, g: &PrincipalGraph) -> Option<Elimination> {
        let (j, w) = g.odd_weights()[1..]
            .iter()
            .enumerate()
            .find(|(_, w)| !jones_admissible(w.square()).unwrap_or(false))?;
        Some(Elimination {
            reason: Reason::Jones,
            detail: format!("odd vertex {}: w^2 = {} is not an allowed index", j + 1, w.square()),
        })
    }

    fn expressibility_test(&self, g: &PrincipalGraph) -> Option<Elimination> {
        let one = QuadExt::one(self.ring.radicand());
        g.odd_weights()[1..].iter().enumerate().find_map(|(j, w)| {
            let target = w.square() - &one;
            (!expressibility_check(self.ring, &target)).then(|| Elimination {
                reason: Reason::Expressibility,
                detail: format!(
                    "odd vertex {}: w^2 - 1 = {} is not a sum of nontrivial dimensions",
                    j + 1,
                    target
                ),
            })
        })
    }

    fn recursive_test(&self, g: &PrincipalGraph, depth: u32) -> Option<Elimination> {
        if depth == 0 {
            return None;
        }
        let four = QuadExt::integer(4, self.ring.radicand());
        g.odd_weights()[1..].iter().enumerate().find_map(|(j, w)| {
            (*w.square() >= four && !self.admits(w.square(), depth - 1)).then(|| Elimination {
                reason: Reason::Recursive,
                detail: format!(
                    "odd vertex {}: no candidate of index {} admits a graph",
                    j + 1,
                    w.square()
                ),
            })
        })
    }

    fn entry(&self, outcome: &CandidateOutcome) -> CandidateEntry {
        let ring = self.ring;
        let to_entry = |g: &PrincipalGraph, c: &CanonicalGraph| GraphEntry {
            canonical: c.clone(),
            odd_weight_squares: g.odd_weights().iter().map(|w| w.square().to_string()).collect(),
            components: component_count(g.adjacency()),
            galois_order: galois_group(ring, g).len(),
        };
        CandidateEntry {
            gamma: ring.format_object(&outcome.gamma),
            coefficients: outcome.gamma.to_compact(),
            index: outcome.index.to_string(),
            orbit_size: orbit_size(&self.perms, &outcome.gamma),
            rejected: outcome.rejected.clone(),
            surviving: outcome.surviving.iter().map(|(g, c)| to_entry(g, c)).collect(),
            eliminated: outcome
                .eliminated
                .iter()
                .map(|(g, c, e, f)| EliminatedGraph {
                    graph: to_entry(g, c),
                    elimination: e.clone(),
                    failed_filters: f.clone(),
                })
                .collect(),
        }
    }

    /// Evaluates the given candidates in parallel and assembles the report.
    pub fn scan_candidates(&self, candidates: &[ObjectVec]) -> Result<SearchReport, ScanError> {
        let ring = self.ring;
        for c in candidates {
            if c.rank() != ring.rank() || c.coeffs()[0] != 1 {
                return Err(ScanError::BadCandidate(c.to_compact()));
            }
        }
        let depth = self.opts.recursion_depth;
        let entries: Vec<CandidateEntry> = candidates
            .par_iter()
            .map(|g| {
                let index = dim_of(ring, g);
                match &self.opts.max_index {
                    Some(cap) if index > *cap => CandidateEntry {
                        gamma: ring.format_object(g),
                        coefficients: g.to_compact(),
                        index: index.to_string(),
                        orbit_size: orbit_size(&self.perms, g),
                        rejected: Some(Elimination {
                            reason: Reason::IndexCap,
                            detail: format!("index exceeds {cap}"),
                        }),
                        surviving: Vec::new(),
                        eliminated: Vec::new(),
                    },
                    _ => self.entry(&self.evaluate(g, depth)),
                }
            })
            .collect();
        Ok(self.report(candidates.len(), entries))
    }

    fn report(&self, candidates: usize, entries: Vec<CandidateEntry>) -> SearchReport {
        let mut rejected_candidates = BTreeMap::new();
        let mut eliminated_graphs = BTreeMap::new();
        let mut filter_failures = BTreeMap::new();
        let mut surviving_graphs = 0;
        let mut survivor_indices: Vec<QuadExt> = Vec::new();
        for e in &entries {
            if let Some(r) = &e.rejected {
                *rejected_candidates.entry(r.reason.tag().to_string()).or_insert(0) += 1;
            }
            for g in &e.eliminated {
                *eliminated_graphs
                    .entry(g.elimination.reason.tag().to_string())
                    .or_insert(0) += 1;
                for f in &g.failed_filters {
                    *filter_failures.entry(f.tag().to_string()).or_insert(0) += 1;
                }
            }
            surviving_graphs += e.surviving.len();
            if e.index != "1" {
                let idx: QuadExt = e.index.parse().expect("index round-trips");
                survivor_indices.extend(std::iter::repeat_n(idx, e.surviving.len()));
            }
        }
        survivor_indices.sort_by(|a, b| a.partial_cmp(b).expect("same field"));

        let mut unresolved = Vec::new();
        let mut missing = Vec::new();
        if let Some(catalog) = reference_catalog(self.ring.name()) {
            let mut remaining = catalog.clone();
            for idx in &survivor_indices {
                match remaining.iter().position(|c| c == idx) {
                    Some(p) => {
                        remaining.remove(p);
                    }
                    None => unresolved.push(idx.to_string()),
                }
            }
            let capped = |c: &QuadExt| self.opts.max_index.as_ref().is_some_and(|m| c > m);
            missing = remaining
                .iter()
                .filter(|c| !capped(c))
                .map(|c| c.to_string())
                .collect();
        }

        let mut notes = vec![
            "graph admissibility is a necessary condition only; it does not prove that an algebra structure exists"
                .to_string(),
        ];
        if self.opts.inner_orbit_dedup {
            notes.push("candidates are listed up to conjugation by invertible objects".into());
        }

        SearchReport {
            ring: self.ring.name().to_string(),
            options: OptionsRecord::from(&self.opts),
            candidates,
            rejected_candidates,
            eliminated_graphs,
            filter_failures,
            surviving_graphs,
            surviving_indices: survivor_indices.iter().map(|x| x.to_string()).collect(),
            unresolved,
            missing,
            notes,
            entries,
        }
    }
}

/// Environment variable holding the worker count for scans.
pub const THREADS_ENV: &str = "QSUB_THREADS";

/// Sizes the global worker pool from `QSUB_THREADS` if set. Returns the
/// requested count, or `None` when the variable is absent.
pub fn configure_threads_from_env() -> Result<Option<usize>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    Ok(Some(n))
}

/// Full pipeline over every candidate of the ring.
pub fn scan_ring(ring: &FusionRing, opts: &SearchOptions) -> Result<SearchReport, ScanError> {
    opts.check()?;
    if opts.max_index.is_none() {
        let size = candidate_space_size(ring, opts);
        if size > MAX_CANDIDATE_SPACE {
            return Err(ScanError::CandidateSpaceTooLarge {
                ring: ring.name().to_string(),
                size,
            });
        }
    }
    let scanner = Scanner::new(ring, opts.clone())?;
    let candidates = enumerate_candidates(ring, opts);
    scanner.scan_candidates(&candidates)
}

/// True when no candidate of dimension `delta` keeps an admissible graph.
pub fn index_obstruction(ring: &FusionRing, delta: &QuadExt, opts: &SearchOptions) -> Result<bool, ScanError> {
    let scanner = Scanner::new(ring, opts.clone())?;
    Ok(!scanner.admits(delta, opts.recursion_depth))
}
