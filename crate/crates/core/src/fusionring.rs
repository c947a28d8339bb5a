//! Fusion rings: validated structure constants with exact dimensions.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qfield::{squarefree_split, FieldError, QuadExt};

#[derive(Debug, Error)]
pub enum RingError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed ring file: {0}")]
    Parse(String),
    #[error("bad exact value: {0}")]
    Field(#[from] FieldError),
    #[error("ring `{ring}` violates {axiom}: {witness}")]
    Axiom {
        ring: String,
        axiom: &'static str,
        witness: String,
    },
    #[error("unknown ring `{0}` (expected h4, h6, i2:<odd n>=3> or a file path)")]
    UnknownRing(String),
    #[error("izumi ring needs odd n >= 3, got {0}")]
    BadIzumiOrder(u32),
    #[error("simple object {0} is not invertible")]
    NotInvertible(String),
}

/// Coefficient vector of an object `sum a_i xi_i` over a ring basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectVec(pub Vec<u32>);

impl ObjectVec {
    pub fn zero(rank: usize) -> Self {
        ObjectVec(vec![0; rank])
    }

    pub fn unit(rank: usize) -> Self {
        Self::basis(rank, 0)
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        ObjectVec(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &ObjectVec) -> ObjectVec {
        ObjectVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Comma separated coefficients, e.g. `1,0,2,1`.
    pub fn to_compact(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_compact(s: &str) -> Option<ObjectVec> {
        s.split(',')
            .map(|t| t.trim().parse().ok())
            .collect::<Option<Vec<u32>>>()
            .map(ObjectVec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    name: String,
    labels: Vec<String>,
    dual: Vec<usize>,
    /// `n[(i * rank + j) * rank + k]` is the multiplicity of `xi_k` in `xi_i xi_j`.
    n: Vec<u32>,
    radicand: u64,
    dims: Vec<QuadExt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ring: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation of {}", self.ring)?;
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "  {:<24} PASS", c.axiom)?,
                Some(w) => writeln!(f, "  {:<24} FAIL  {}", c.axiom, w)?,
            }
        }
        Ok(())
    }
}

/// On-disk ring format.
#[derive(Debug, Serialize, Deserialize)]
struct RingFile {
    name: String,
    #[serde(rename = "D")]
    radicand: u64,
    rank: usize,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    dims: Vec<String>,
    #[serde(rename = "N")]
    n: Vec<Vec<Vec<u32>>>,
}

impl FusionRing {
    /// Builds a ring without validating it; see [`FusionRing::new`].
    pub fn from_parts_unchecked(
        name: impl Into<String>,
        labels: Vec<String>,
        dual: Vec<usize>,
        n: Vec<u32>,
        radicand: u64,
        dims: Vec<QuadExt>,
    ) -> Self {
        let dims = dims.into_iter().map(|x| x.with_radicand(radicand)).collect();
        FusionRing {
            name: name.into(),
            labels,
            dual,
            n,
            radicand,
            dims,
        }
    }

    /// Builds and validates; fails with the first violated axiom.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        dual: Vec<usize>,
        n: Vec<u32>,
        radicand: u64,
        dims: Vec<QuadExt>,
    ) -> Result<Self, RingError> {
        let ring = Self::from_parts_unchecked(name, labels, dual, n, radicand, dims);
        ring.ensure_valid()?;
        Ok(ring)
    }

    fn ensure_valid(&self) -> Result<(), RingError> {
        let report = validate(self);
        match report.first_failure() {
            None => Ok(()),
            Some(c) => Err(RingError::Axiom {
                ring: self.name.clone(),
                axiom: c.axiom,
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> usize {
        0
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn dims(&self) -> &[QuadExt] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> &QuadExt {
        &self.dims[i]
    }

    /// Multiplicity of `xi_k` in `xi_i xi_j`.
    #[inline]
    pub fn mult(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.rank();
        self.n[(i * r + j) * r + k]
    }

    pub fn structure_constants(&self) -> &[u32] {
        &self.n
    }

    /// Expands `v * w` through the structure constants.
    pub fn multiply(&self, v: &ObjectVec, w: &ObjectVec) -> ObjectVec {
        let r = self.rank();
        let mut out = vec![0u32; r];
        for (i, &a) in v.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in w.0.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += a * b * self.mult(i, j, k);
                }
            }
        }
        ObjectVec(out)
    }

    /// Relabels the basis: new simple `i` is old simple `perm[i]`. `perm[0]` must be 0.
    pub fn permuted(&self, perm: &[usize]) -> FusionRing {
        let r = self.rank();
        assert_eq!(perm.len(), r);
        assert_eq!(perm[0], 0, "the unit stays first");
        let mut inv = vec![0; r];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut n = vec![0; r * r * r];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    n[(i * r + j) * r + k] = self.mult(perm[i], perm[j], perm[k]);
                }
            }
        }
        FusionRing {
            name: self.name.clone(),
            labels: perm.iter().map(|&o| self.labels[o].clone()).collect(),
            dual: perm.iter().map(|&o| inv[self.dual[o]]).collect(),
            n,
            radicand: self.radicand,
            dims: perm.iter().map(|&o| self.dims[o].clone()).collect(),
        }
    }

    pub fn builtin(selector: &str) -> Result<FusionRing, RingError> {
        match selector {
            "h4" => Ok(ring_h4()),
            "h6" => Ok(ring_h6()),
            s => {
                let n = s
                    .strip_prefix("i2:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| RingError::UnknownRing(s.to_string()))?;
                ring_izumi_i2(n)
            }
        }
    }

    /// A builtin name, or otherwise a path to a ring file.
    pub fn resolve(selector: &str) -> Result<FusionRing, RingError> {
        match FusionRing::builtin(selector) {
            Err(RingError::UnknownRing(_)) if Path::new(selector).exists() => ring_load(selector),
            other => other,
        }
    }

    pub fn to_json(&self) -> String {
        let r = self.rank();
        let file = RingFile {
            name: self.name.clone(),
            radicand: self.radicand,
            rank: r,
            labels: self.labels.clone(),
            unit: 0,
            dual: self.dual.clone(),
            dims: self.dims.iter().map(|d| d.to_string()).collect(),
            n: (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| (0..r).map(|k| self.mult(i, j, k)).collect())
                        .collect()
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("ring serializes");
        out.push('\n');
        out
    }

    /// Parses and validates a ring from its file text.
    pub fn from_json(text: &str) -> Result<FusionRing, RingError> {
        let file: RingFile =
            serde_json::from_str(text).map_err(|e| RingError::Parse(e.to_string()))?;
        let r = file.rank;
        let shape_err = |what: &str| RingError::Parse(format!("{what} does not match rank {r}"));
        if r == 0 {
            return Err(RingError::Parse("rank must be positive".into()));
        }
        if file.labels.len() != r {
            return Err(shape_err("labels"));
        }
        if file.dual.len() != r || file.dual.iter().any(|&x| x >= r) {
            return Err(shape_err("dual"));
        }
        if file.dims.len() != r {
            return Err(shape_err("dims"));
        }
        if file.unit != 0 {
            return Err(RingError::Parse("unit must be index 0".into()));
        }
        if file.n.len() != r
            || file
                .n
                .iter()
                .any(|row| row.len() != r || row.iter().any(|v| v.len() != r))
        {
            return Err(shape_err("N"));
        }
        let (k, sqf) = squarefree_split(file.radicand);
        if k != 1 || sqf < 2 {
            return Err(FieldError::BadRadicand(file.radicand).into());
        }
        let dims = file
            .dims
            .iter()
            .map(|s| s.parse::<QuadExt>())
            .collect::<Result<Vec<_>, _>>()?;
        for d in &dims {
            if !d.is_rational() && d.radicand() != file.radicand {
                return Err(FieldError::MixedRadicand(file.radicand, d.radicand()).into());
            }
        }
        let n = file.n.into_iter().flatten().flatten().collect();
        FusionRing::new(file.name, file.labels, file.dual, n, file.radicand, dims)
    }

    /// Renders a product table, one row per left factor.
    pub fn table(&self) -> String {
        let r = self.rank();
        let cells: Vec<Vec<String>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = ObjectVec((0..r).map(|k| self.mult(i, j, k)).collect());
                        self.format_object(&v)
                    })
                    .collect()
            })
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(|c| c.chars().count())
            .chain(self.labels.iter().map(|l| l.chars().count()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        out.push_str(&format!("{:>w$} |", "", w = width));
        for l in &self.labels {
            out.push_str(&format!(" {:<w$}", l, w = width));
        }
        out.push('\n');
        out.push_str(&"-".repeat((width + 1) * (r + 1) + 1));
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            out.push_str(&format!("{:>w$} |", self.labels[i], w = width));
            for c in row {
                out.push_str(&format!(" {:<w$}", c, w = width));
            }
            out.push('\n');
        }
        out
    }

    /// `1+2nu+eta` style rendering of an object.
    pub fn format_object(&self, v: &ObjectVec) -> String {
        let parts: Vec<String> = v
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| {
                if c == 1 {
                    self.labels[i].clone()
                } else {
                    format!("{}{}", c, self.labels[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.dims[i] == QuadExt::one(self.radicand)
    }
}

/// Exhaustive check of every ring axiom.
pub fn validate(ring: &FusionRing) -> ValidationReport {
    let r = ring.rank();
    let mut checks = Vec::new();
    let mut push = |axiom: &'static str, witness: Option<String>| {
        checks.push(AxiomCheck {
            axiom,
            passed: witness.is_none(),
            witness,
        })
    };

    let shape_ok = r > 0
        && ring.dual.len() == r
        && ring.dims.len() == r
        && ring.n.len() == r * r * r
        && ring.dual.iter().all(|&x| x < r);
    push(
        "shape",
        (!shape_ok).then(|| "labels, dual, dims and N disagree on the rank".to_string()),
    );
    if !shape_ok {
        return ValidationReport {
            ring: ring.name.clone(),
            checks,
        };
    }
    let l = |i: usize| ring.labels[i].as_str();

    let unit = (|| {
        for j in 0..r {
            for k in 0..r {
                let want = u32::from(j == k);
                if ring.mult(0, j, k) != want {
                    return Some(format!("N[1][{}][{}] = {}", l(j), l(k), ring.mult(0, j, k)));
                }
                if ring.mult(j, 0, k) != want {
                    return Some(format!("N[{}][1][{}] = {}", l(j), l(k), ring.mult(j, 0, k)));
                }
            }
        }
        None
    })();
    push("unit", unit);

    let duality = (|| {
        for i in 0..r {
            if ring.dual[ring.dual[i]] != i {
                return Some(format!("dual is not an involution at {}", l(i)));
            }
            for j in 0..r {
                let want = u32::from(j == ring.dual[i]);
                if ring.mult(i, j, 0) != want {
                    return Some(format!(
                        "N[{}][{}][1] = {} but dual({}) = {}",
                        l(i),
                        l(j),
                        ring.mult(i, j, 0),
                        l(i),
                        l(ring.dual[i])
                    ));
                }
            }
        }
        None
    })();
    push("duality", duality);

    let assoc = (|| {
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for t in 0..r {
                        let lhs: u64 = (0..r)
                            .map(|m| u64::from(ring.mult(i, j, m)) * u64::from(ring.mult(m, k, t)))
                            .sum();
                        let rhs: u64 = (0..r)
                            .map(|m| u64::from(ring.mult(j, k, m)) * u64::from(ring.mult(i, m, t)))
                            .sum();
                        if lhs != rhs {
                            return Some(format!(
                                "(({} {}) {}) has {} copies of {}, ({} ({} {})) has {}",
                                l(i),
                                l(j),
                                l(k),
                                lhs,
                                l(t),
                                l(i),
                                l(j),
                                l(k),
                                rhs
                            ));
                        }
                    }
                }
            }
        }
        None
    })();
    push("associativity", assoc);

    let frob = (|| {
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = ring.mult(i, j, k);
                    let a = ring.mult(ring.dual[i], k, j);
                    let b = ring.mult(k, ring.dual[j], i);
                    if v != a || v != b {
                        return Some(format!(
                            "N[{}][{}][{}] = {} but N[{}*][{}][{}] = {}, N[{}][{}*][{}] = {}",
                            l(i),
                            l(j),
                            l(k),
                            v,
                            l(i),
                            l(k),
                            l(j),
                            a,
                            l(k),
                            l(j),
                            l(i),
                            b
                        ));
                    }
                }
            }
        }
        None
    })();
    push("frobenius-reciprocity", frob);

    let d = ring.radicand;
    let dimhom = (|| {
        if ring.dims[0] != QuadExt::one(d) {
            return Some(format!("dim(1) = {}", ring.dims[0]));
        }
        for i in 0..r {
            for j in 0..r {
                let lhs = ring.dims[i].checked_mul(&ring.dims[j]);
                let mut rhs = QuadExt::zero(d);
                for k in 0..r {
                    let m = ring.mult(i, j, k);
                    if m > 0 {
                        rhs = match rhs.checked_add(&ring.dims[k].scale(i64::from(m))) {
                            Ok(x) => x,
                            Err(e) => return Some(e.to_string()),
                        };
                    }
                }
                match lhs {
                    Ok(lhs) if lhs == rhs => {}
                    Ok(lhs) => {
                        return Some(format!(
                            "dim({})dim({}) = {} but the product expands to {}",
                            l(i),
                            l(j),
                            lhs,
                            rhs
                        ))
                    }
                    Err(e) => return Some(e.to_string()),
                }
            }
        }
        None
    })();
    push("dimension-homomorphism", dimhom);

    let positivity = (|| {
        let one = QuadExt::one(d);
        for i in 0..r {
            let cmp = ring.dims[i].partial_cmp(&one);
            let permutation_row = (0..r).all(|j| (0..r).map(|k| ring.mult(i, j, k)).sum::<u32>() == 1);
            match cmp {
                None | Some(std::cmp::Ordering::Less) => {
                    return Some(format!("dim({}) = {} < 1", l(i), ring.dims[i]))
                }
                Some(std::cmp::Ordering::Equal) if !permutation_row => {
                    return Some(format!("dim({}) = 1 but it is not invertible", l(i)))
                }
                Some(std::cmp::Ordering::Greater) if permutation_row => {
                    return Some(format!("{} is invertible but dim = {}", l(i), ring.dims[i]))
                }
                _ => {}
            }
        }
        None
    })();
    push("dimension-positivity", positivity);

    ValidationReport {
        ring: ring.name.clone(),
        checks,
    }
}

pub fn ring_load(path: impl AsRef<Path>) -> Result<FusionRing, RingError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| RingError::Io {
        path: path.display().to_string(),
        source,
    })?;
    FusionRing::from_json(&text)
}

pub fn ring_save(ring: &FusionRing, path: impl AsRef<Path>) -> Result<(), RingError> {
    let path = path.as_ref();
    fs::write(path, ring.to_json()).map_err(|source| RingError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Builds a ring from a literal product table: `table[i][j]` is a `+`-separated
/// list of labels with optional integer multiplicities, e.g. `"1+2nu+eta"`.
fn ring_from_table(
    name: &str,
    labels: &[&str],
    table: &[&[&str]],
    radicand: u64,
    dims: Vec<QuadExt>,
) -> FusionRing {
    let r = labels.len();
    let mut n = vec![0u32; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for term in table[i][j].split('+') {
                let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
                let rest = &term[digits.len()..];
                let (m, lab) = if rest.is_empty() {
                    // a bare "1" is the unit
                    (1, "1")
                } else if digits.is_empty() {
                    (1, rest)
                } else {
                    (digits.parse::<u32>().expect("multiplicity"), rest)
                };
                let k = labels
                    .iter()
                    .position(|&x| x == lab)
                    .unwrap_or_else(|| panic!("unknown label {lab} in {name} table"));
                n[(i * r + j) * r + k] += m;
            }
        }
    }
    let dual = (0..r)
        .map(|i| (0..r).find(|&j| n[(i * r + j) * r] == 1).expect("dual"))
        .collect();
    let ring = FusionRing::from_parts_unchecked(
        name,
        labels.iter().map(|s| s.to_string()).collect(),
        dual,
        n,
        radicand,
        dims,
    );
    debug_assert!(validate(&ring).passed());
    ring
}

/// The commutative rank-4 ring: simples `1, nu, eta, mu`, all self-dual.
pub fn ring_h4() -> FusionRing {
    let labels = ["1", "nu", "eta", "mu"];
    let table: [&[&str]; 4] = [
        &["1", "nu", "eta", "mu"],
        &["nu", "1+2nu+2eta+mu", "2nu+eta+mu", "nu+eta+mu"],
        &["eta", "2nu+eta+mu", "1+nu+eta+mu", "nu+eta"],
        &["mu", "nu+eta+mu", "nu+eta", "1+nu"],
    ];
    let dims = vec![
        QuadExt::one(13),
        QuadExt::from_ints(5, 1, 2, 13),
        QuadExt::from_ints(3, 1, 2, 13),
        QuadExt::from_ints(1, 1, 2, 13),
    ];
    ring_from_table("h4", &labels, &table, 13, dims)
}

/// The rank-6 ring with invertibles `1, a, a^2` and `x, ax, a^2x`; `Z = x+ax+a^2x`.
pub fn ring_h6() -> FusionRing {
    let labels = ["1", "a", "a^2", "x", "ax", "a^2x"];
    const Z: &str = "x+ax+a^2x";
    let one_z = format!("1+{Z}");
    let a_z = format!("a+{Z}");
    let a2_z = format!("a^2+{Z}");
    let table: [&[&str]; 6] = [
        &["1", "a", "a^2", "x", "ax", "a^2x"],
        &["a", "a^2", "1", "ax", "a^2x", "x"],
        &["a^2", "1", "a", "a^2x", "x", "ax"],
        &["x", "a^2x", "ax", &one_z, &a2_z, &a_z],
        &["ax", "x", "a^2x", &a_z, &one_z, &a2_z],
        &["a^2x", "ax", "x", &a2_z, &a_z, &one_z],
    ];
    let d = QuadExt::from_ints(3, 1, 2, 13);
    let dims = vec![
        QuadExt::one(13),
        QuadExt::one(13),
        QuadExt::one(13),
        d.clone(),
        d.clone(),
        d,
    ];
    ring_from_table("h6", &labels, &table, 13, dims)
}

fn group_label(g: u32) -> String {
    match g {
        0 => String::new(),
        1 => "a".into(),
        g => format!("a^{g}"),
    }
}

/// Izumi's noncommutative ring on `Z/n`: simples `a^g` and `a^g x`, with
/// `a^g x = x a^-g` and `x^2 = 1 + sum_g a^g x`.
pub fn ring_izumi_i2(n: u32) -> Result<FusionRing, RingError> {
    if n < 3 || n % 2 == 0 {
        return Err(RingError::BadIzumiOrder(n));
    }
    let nn = n as usize;
    let r = 2 * nn;
    let m = |g: i64| g.rem_euclid(n as i64) as usize;
    let mut table = vec![0u32; r * r * r];
    let mut set = |i: usize, j: usize, k: usize| table[(i * r + j) * r + k] += 1;
    for g in 0..nn {
        for h in 0..nn {
            let (gi, hi) = (g as i64, h as i64);
            set(g, h, m(gi + hi));
            set(g, nn + h, nn + m(gi + hi));
            set(nn + h, g, nn + m(hi - gi));
            set(nn + g, nn + h, m(gi - hi));
            for k in 0..nn {
                set(nn + g, nn + h, nn + k);
            }
        }
    }
    let mut labels: Vec<String> = (0..n)
        .map(|g| if g == 0 { "1".into() } else { group_label(g) })
        .collect();
    labels.extend((0..n).map(|g| format!("{}x", group_label(g))));
    let dual = (0..nn)
        .map(|g| m(-(g as i64)))
        .chain((0..nn).map(|g| nn + g))
        .collect();
    let (k, radicand) = squarefree_split(u64::from(n) * u64::from(n) + 4);
    let d = QuadExt::from_ints(i64::from(n), k as i64, 2, radicand);
    let dims = (0..r)
        .map(|i| if i < nn { QuadExt::one(radicand) } else { d.clone() })
        .collect();
    FusionRing::new(format!("i2:{n}"), labels, dual, table, radicand, dims)
}

/// Indices of the simples with dimension exactly 1.
pub fn invertibles(ring: &FusionRing) -> Vec<usize> {
    (0..ring.rank()).filter(|&i| ring.is_invertible(i)).collect()
}

pub fn dual_object(ring: &FusionRing, v: &ObjectVec) -> ObjectVec {
    let mut out = vec![0; ring.rank()];
    for (i, &c) in v.0.iter().enumerate() {
        out[ring.dual(i)] += c;
    }
    ObjectVec(out)
}

pub fn dim_of(ring: &FusionRing, v: &ObjectVec) -> QuadExt {
    let mut acc = QuadExt::zero(ring.radicand());
    for (i, &c) in v.0.iter().enumerate() {
        if c > 0 {
            acc = &acc + &ring.dim(i).scale(i64::from(c));
        }
    }
    acc
}

/// Basis permutation `i -> k` with `g xi_i g* = xi_k`.
pub fn conjugation_permutation(ring: &FusionRing, g: usize) -> Result<Vec<usize>, RingError> {
    if !ring.is_invertible(g) {
        return Err(RingError::NotInvertible(ring.label(g).to_string()));
    }
    let r = ring.rank();
    let gd = ring.dual(g);
    let single = |a: usize, b: usize| (0..r).find(|&k| ring.mult(a, b, k) > 0).expect("nonzero product");
    Ok((0..r).map(|i| single(single(g, i), gd)).collect())
}

pub fn conjugate_by_invertible(
    ring: &FusionRing,
    g: usize,
    v: &ObjectVec,
) -> Result<ObjectVec, RingError> {
    let perm = conjugation_permutation(ring, g)?;
    Ok(apply_permutation(&perm, v))
}

/// `out[perm[i]] = v[i]`.
pub fn apply_permutation(perm: &[usize], v: &ObjectVec) -> ObjectVec {
    let mut out = vec![0; v.rank()];
    for (i, &c) in v.0.iter().enumerate() {
        out[perm[i]] = c;
    }
    ObjectVec(out)
}

/// Distinct conjugation permutations, identity first, sorted.
pub fn conjugation_group(ring: &FusionRing) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = invertibles(ring)
        .into_iter()
        .map(|g| conjugation_permutation(ring, g).expect("invertible"))
        .collect();
    perms.sort();
    perms.dedup();
    perms
}
