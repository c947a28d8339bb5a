//! Izumi-family specializations: saturated algebra objects, the graph they
//! force, index identities and the feasibility check for the conjectured
//! algebra object in I1-like rings.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algsearch::{
    express_as_dimensions, reduced_fusion_matrix, Elimination, Scanner, SearchOptions,
};
use crate::fusionring::{dim_of, invertibles, FusionRing, ObjectVec};
use crate::gramsearch::{gram_factorizations, IntMatrix};
use crate::pgraph::{assemble_graph, PrincipalGraph};
use crate::qfield::{squarefree_split, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IzumiError {
    #[error("n must be odd and at least 3, got {0}")]
    BadOrder(u32),
    #[error("ring {ring} is not of Izumi type: {detail}")]
    Pattern { ring: String, detail: String },
    #[error("ring {ring} does not have the expected shape: {detail}")]
    Shape { ring: String, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IzumiParams {
    n: u32,
    d: QuadExt,
}

impl IzumiParams {
    pub fn new(n: u32) -> Result<Self, IzumiError> {
        if n < 3 || n % 2 == 0 {
            return Err(IzumiError::BadOrder(n));
        }
        let m = u64::from(n) * u64::from(n) + 4;
        let (k, r) = squarefree_split(m);
        let sqrt = QuadExt::from_ints(0, k as i64, 1, r);
        let d = (QuadExt::integer(i64::from(n), r) + sqrt)
            .checked_div(&QuadExt::integer(2, r))
            .expect("nonzero");
        Ok(IzumiParams { n, d })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> &QuadExt {
        &self.d
    }

    pub fn radicand(&self) -> u64 {
        self.d.radicand()
    }

    fn int(&self, k: i64) -> QuadExt {
        QuadExt::integer(k, self.radicand())
    }

    /// `n + n^2 d`, the dimension of the saturated algebra object.
    pub fn saturated_dim(&self) -> QuadExt {
        let n = i64::from(self.n);
        self.int(n) + self.d.scale(n * n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IzumiKind {
    I1Like,
    I2Like,
}

impl std::str::FromStr for IzumiKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i1" | "I1" | "i1-like" => Ok(IzumiKind::I1Like),
            "i2" | "I2" | "i2-like" => Ok(IzumiKind::I2Like),
            _ => Err(format!("unknown ring kind {s:?} (expected i1 or i2)")),
        }
    }
}

/// Rings with nontrivial invertible objects are I2-like.
pub fn guess_kind(ring: &FusionRing) -> IzumiKind {
    if invertibles(ring).len() > 1 {
        IzumiKind::I2Like
    } else {
        IzumiKind::I1Like
    }
}

/// `1 + sum floor(dim xi) xi`.
pub fn saturated_object(ring: &FusionRing) -> ObjectVec {
    ObjectVec(
        ring.dims()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if i == ring.unit() {
                    1
                } else {
                    u32::try_from(d.floor()).expect("dimension floor fits in u32")
                }
            })
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// `w^2 - 1` is a sum of nontrivial dimensions, with the witness multiplicities.
    Admissible { witness: Vec<u32> },
    Eliminated(Elimination),
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturatedAnalysis {
    pub ring: String,
    pub kind: IzumiKind,
    pub n: u32,
    pub gamma: String,
    pub reduced_matrix: IntMatrix,
    pub factorizations: usize,
    pub adjacency: IntMatrix,
    pub extra_weight_square: String,
    pub dim: String,
    pub expected_dim: String,
    pub weight_matches_n: bool,
    pub dim_matches: bool,
    pub expressibility_target: String,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(skip)]
    graph: PrincipalGraph,
}

impl SaturatedAnalysis {
    pub fn graph(&self) -> &PrincipalGraph {
        &self.graph
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

impl fmt::Display for SaturatedAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pretty = |s: &str| s.parse::<QuadExt>().map(|q| q.pretty()).unwrap_or_else(|_| s.into());
        writeln!(f, "ring {} ({:?}, n = {})", self.ring, self.kind, self.n)?;
        writeln!(f, "saturated object: {}", self.gamma)?;
        writeln!(f, "reduced matrix: {}", self.reduced_matrix)?;
        writeln!(f, "factorizations: {}", self.factorizations)?;
        writeln!(
            f,
            "extra vertex: w^2 = {} ({})",
            pretty(&self.extra_weight_square),
            if self.weight_matches_n { "= n" } else { "!= n" }
        )?;
        writeln!(
            f,
            "dimension: {} ({} n+n^2d = {})",
            pretty(&self.dim),
            if self.dim_matches { "=" } else { "!=" },
            pretty(&self.expected_dim)
        )?;
        match &self.verdict {
            Verdict::Admissible { witness } => writeln!(
                f,
                "verdict: admissible (n-1 = {} expressed by {:?})",
                self.expressibility_target, witness
            )?,
            Verdict::Eliminated(e) => writeln!(
                f,
                "verdict: eliminated [{}] witness target {}: {}",
                e.reason.tag(),
                self.expressibility_target,
                e.detail
            )?,
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Ones on pairs of non-invertible simples, zeros elsewhere. An invertible
/// `g` has `F[g][g] = a_g^2 = 1`, so its row reduces to zero.
pub fn saturated_pattern(ring: &FusionRing) -> IntMatrix {
    let r = ring.rank();
    let mut m = IntMatrix::zeros(r - 1, r - 1);
    for i in 1..r {
        for j in 1..r {
            let one = !ring.is_invertible(i) && !ring.is_invertible(j);
            m.set(i - 1, j - 1, i64::from(one));
        }
    }
    m
}

/// Reduced matrix, forced graph, extra weight and verdict for the saturated
/// object of an Izumi-type ring.
pub fn saturated_analysis(ring: &FusionRing, kind: IzumiKind) -> Result<SaturatedAnalysis, IzumiError> {
    let pattern_err = |detail: String| IzumiError::Pattern {
        ring: ring.name().to_string(),
        detail,
    };
    let n = match kind {
        IzumiKind::I2Like => invertibles(ring).len(),
        IzumiKind::I1Like => ring.rank() - 1,
    } as u32;
    let params = IzumiParams::new(n).map_err(|e| pattern_err(e.to_string()))?;
    if params.radicand() != ring.radicand() {
        return Err(pattern_err(format!(
            "field sqrt({}) does not match sqrt({})",
            ring.radicand(),
            params.radicand()
        )));
    }

    let gamma = saturated_object(ring);
    let reduced = reduced_fusion_matrix(ring, &gamma)
        .map_err(|(i, j)| pattern_err(format!("negative reduced entry at ({i},{j})")))?;
    let expected = saturated_pattern(ring);
    if reduced != expected {
        return Err(pattern_err(format!("reduced matrix {reduced}, expected {expected}")));
    }
    let factors = gram_factorizations(&reduced, None);
    if factors.len() != 1 {
        return Err(pattern_err(format!("{} factorizations instead of one", factors.len())));
    }
    let graph = assemble_graph(ring, &gamma, &factors[0]).map_err(|e| pattern_err(e.to_string()))?;
    if graph.odd_count() != 2 {
        return Err(pattern_err("forced graph lacks a single extra odd vertex".into()));
    }
    let w2 = graph.odd_weights()[1].square().clone();
    let nq = QuadExt::integer(i64::from(n), ring.radicand());
    let dim = dim_of(ring, &gamma);
    let expected_dim = params.saturated_dim();
    let target = &w2 - &QuadExt::one(ring.radicand());
    let verdict = match express_as_dimensions(ring, &target) {
        Some(w) => Verdict::Admissible { witness: w.0 },
        None => Verdict::Eliminated(Elimination {
            reason: crate::algsearch::Reason::Expressibility,
            detail: format!("{target} is not a sum of nontrivial dimensions"),
        }),
    };
    let mut notes = Vec::new();
    if kind == IzumiKind::I1Like {
        notes.push(
            "the n-1 expressibility elimination is applied to the ring without nontrivial invertibles; \
             with n invertibles the target is always expressible"
                .to_string(),
        );
    }
    notes.push("admissibility of the forced graph is necessary, not sufficient".into());

    Ok(SaturatedAnalysis {
        ring: ring.name().to_string(),
        kind,
        n,
        gamma: ring.format_object(&gamma),
        reduced_matrix: reduced,
        factorizations: factors.len(),
        adjacency: graph.adjacency().clone(),
        extra_weight_square: w2.to_string(),
        weight_matches_n: w2 == nq,
        dim_matches: dim == expected_dim,
        dim: dim.to_string(),
        expected_dim: expected_dim.to_string(),
        expressibility_target: target.to_string(),
        verdict,
        notes,
        graph,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRecord {
    pub n: u32,
    pub d: String,
    pub index: String,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityRecord {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

impl fmt::Display for IdentityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, d = {}", self.n, self.d)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {} = {}",
                if c.holds { "PASS" } else { "FAIL" },
                c.name,
                c.lhs,
                c.rhs
            )?;
        }
        writeln!(f, "index (nd)^2/(d+1) = {}", self.index)
    }
}

/// Exact checks of `d^2 = 1 + nd` and `(nd)^2/(d+1) = n(1 + (n-1)d)`.
pub fn izumi_identities(n: u32) -> Result<IdentityRecord, IzumiError> {
    let p = IzumiParams::new(n)?;
    let d = p.d();
    let ni = i64::from(n);
    let one = p.int(1);

    let d2 = d * d;
    let rhs1 = &one + &d.scale(ni);

    let nd = d.scale(ni);
    let index = (&nd * &nd).checked_div(&(d + &one)).expect("d + 1 > 0");
    let rhs2 = (&one + &d.scale(ni - 1)).scale(ni);

    Ok(IdentityRecord {
        n,
        d: d.to_string(),
        index: index.to_string(),
        checks: vec![
            IdentityCheck {
                name: "d^2 = 1+nd".into(),
                holds: d2 == rhs1,
                lhs: d2.to_string(),
                rhs: rhs1.to_string(),
            },
            IdentityCheck {
                name: "(nd)^2/(d+1) = n(1+(n-1)d)".into(),
                holds: index == rhs2,
                lhs: index.to_string(),
                rhs: rhs2.to_string(),
            },
        ],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRecord {
    pub ring: String,
    pub n: u32,
    pub gamma: String,
    pub coefficients: Vec<u32>,
    pub dim: String,
    pub expected_dim: String,
    pub dim_matches: bool,
    pub surviving_graphs: Vec<IntMatrix>,
    pub eliminations: Vec<Elimination>,
    pub rejected: Option<Elimination>,
    pub status: String,
}

impl ConjectureRecord {
    pub fn feasible(&self) -> bool {
        self.dim_matches && !self.surviving_graphs.is_empty()
    }
}

impl fmt::Display for ConjectureRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pretty = |s: &str| s.parse::<QuadExt>().map(|q| q.pretty()).unwrap_or_else(|_| s.into());
        writeln!(f, "ring {} (n = {})", self.ring, self.n)?;
        writeln!(f, "gamma = {}", self.gamma)?;
        writeln!(
            f,
            "dim = {} ({} 1+(n-1)d = {})",
            pretty(&self.dim),
            if self.dim_matches { "=" } else { "!=" },
            pretty(&self.expected_dim)
        )?;
        if let Some(r) = &self.rejected {
            writeln!(f, "rejected [{}]: {}", r.reason.tag(), r.detail)?;
        }
        for g in &self.surviving_graphs {
            writeln!(f, "surviving graph: {g}")?;
        }
        for e in &self.eliminations {
            writeln!(f, "eliminated graph [{}]: {}", e.reason.tag(), e.detail)?;
        }
        writeln!(f, "status: {}", self.status)
    }
}

/// Builds `1 + sum (nu_j + mu_j)` from an I1-shaped ring (dims `1, d`, then
/// `(n-1)/2` objects each of dims `d+1` and `d-1`) and runs it through the
/// admissibility pipeline.
pub fn conjecture_check(ring: &FusionRing, opts: &SearchOptions) -> Result<ConjectureRecord, IzumiError> {
    let shape_err = |detail: String| IzumiError::Shape {
        ring: ring.name().to_string(),
        detail,
    };
    let r = ring.rank();
    if r < 4 || r % 2 != 0 {
        return Err(shape_err(format!("rank {r} is not n+1 for odd n >= 3")));
    }
    let n = (r - 1) as u32;
    let params = IzumiParams::new(n).map_err(|e| shape_err(e.to_string()))?;
    if params.radicand() != ring.radicand() {
        return Err(shape_err(format!("field sqrt({}) is not sqrt({})", ring.radicand(), params.radicand())));
    }
    let d = params.d();
    let one = params.int(1);
    let plus = d + &one;
    let minus = d - &one;
    let mut coeffs = vec![0u32; r];
    coeffs[0] = 1;
    let (mut n_d, mut n_plus, mut n_minus) = (0, 0, 0);
    for i in 1..r {
        let x = ring.dim(i);
        if *x == *d {
            n_d += 1;
        } else if *x == plus {
            n_plus += 1;
            coeffs[i] = 1;
        } else if *x == minus {
            n_minus += 1;
            coeffs[i] = 1;
        } else {
            return Err(shape_err(format!("simple {} has dimension {}", ring.label(i), x)));
        }
    }
    let half = (n as usize - 1) / 2;
    if n_d != 1 || n_plus != half || n_minus != half {
        return Err(shape_err(format!(
            "dimension counts d:{n_d} d+1:{n_plus} d-1:{n_minus}, expected 1, {half}, {half}"
        )));
    }
    let gamma = ObjectVec(coeffs);
    let dim = dim_of(ring, &gamma);
    let expected_dim = &one + &d.scale(i64::from(n) - 1);

    let scanner = Scanner::new(ring, opts.clone()).map_err(|e| shape_err(e.to_string()))?;
    let outcome = scanner.evaluate(&gamma, opts.recursion_depth);
    let surviving: Vec<IntMatrix> = outcome.surviving.iter().map(|(g, _)| g.adjacency().clone()).collect();
    let status = if surviving.is_empty() {
        "infeasible: no admissible graph".to_string()
    } else {
        "feasible: admissible graph found (necessary condition only, not a proof)".to_string()
    };
    Ok(ConjectureRecord {
        ring: ring.name().to_string(),
        n,
        gamma: ring.format_object(&gamma),
        coefficients: gamma.0.clone(),
        dim_matches: dim == expected_dim,
        dim: dim.to_string(),
        expected_dim: expected_dim.to_string(),
        surviving_graphs: surviving,
        eliminations: outcome.eliminated.iter().map(|(_, _, e, _)| e.clone()).collect(),
        rejected: outcome.rejected,
        status,
    })
}
