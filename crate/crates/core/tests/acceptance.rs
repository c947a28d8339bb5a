//! One line per acceptance criterion: `PASS`/`FAIL`, a label and timing.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qsub::algsearch::{
    index_obstruction, reference_catalog, reduced_fusion_matrix, scan_ring, Reason, Scanner, SearchOptions,
    SearchReport,
};
use qsub::fusionring::{ring_h4, ring_izumi_i2, validate, FusionRing, ObjectVec};
use qsub::gramsearch::{gram_factorizations, is_psd_exact, IntMatrix};
use qsub::izumi::{izumi_identities, saturated_analysis, saturated_pattern, IzumiKind, IzumiParams};
use qsub::lattice::{galois_orbit_report, intermediate_candidates, AdmissibleIndexSet};
use qsub::qfield::QuadExt;

type Check = Result<String, String>;

fn q(s: &str) -> QuadExt {
    s.parse().unwrap()
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sorted(mut v: Vec<QuadExt>) -> Vec<QuadExt> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn survivor_multiset(report: &SearchReport) -> Vec<QuadExt> {
    sorted(report.nontrivial_survivors().map(|(e, _)| q(&e.index)).collect())
}

fn catalog_check(ring: &str, expected: &[&str], limit: Duration) -> Result<(SearchReport, Duration), String> {
    let ring = FusionRing::builtin(ring).unwrap();
    let t = Instant::now();
    let report = scan_ring(&ring, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let got = survivor_multiset(&report);
    let want = sorted(expected.iter().map(|s| q(s)).collect());
    ensure(
        got == want,
        format!(
            "survivor indices {:?}",
            got.iter().map(|x| x.pretty()).collect::<Vec<_>>()
        ),
    )?;
    ensure(report.unresolved.is_empty() && report.missing.is_empty(), "catalog mismatch flagged")?;
    ensure(elapsed < limit, format!("took {elapsed:?}"))?;
    Ok((report, elapsed))
}

fn c1_h4() -> Check {
    let expected = [
        "5/2+1/2*sqrt(13)",
        "12+3*sqrt(13)",
        "4+sqrt(13)",
        "11/2+3/2*sqrt(13)",
        "15/2+3/2*sqrt(13)",
        "19/2+5/2*sqrt(13)",
        "7/2+1/2*sqrt(13)",
    ];
    let (r, t) = catalog_check("h4", &expected, Duration::from_secs(5))?;
    ensure(r.nontrivial_survivors().count() == 7, "graph count")?;
    Ok(format!("7 graphs in {t:.2?}"))
}

fn c2_h6() -> Check {
    let expected = [
        "5/2+1/2*sqrt(13)",
        "12+3*sqrt(13)",
        "4+sqrt(13)",
        "11/2+3/2*sqrt(13)",
        "15/2+3/2*sqrt(13)",
        "33/2+9/2*sqrt(13)",
        "3",
    ];
    let (r, t) = catalog_check("h6", &expected, Duration::from_secs(60))?;
    // 1 + x + ax lies in the orbit of the listed representative 1 + ax + a^2x
    let companion = r
        .entries
        .iter()
        .find(|e| e.gamma == "1+ax+a^2x")
        .ok_or("companion orbit missing")?;
    ensure(companion.surviving.len() == 1, "companion object has no graph")?;
    ensure(q(&companion.index) == q("4+sqrt(13)"), "companion index")?;
    ensure(
        r.notes.iter().any(|n| n.contains("necessary condition")),
        "necessary-not-sufficient note missing",
    )?;
    Ok(format!("7 orbit classes in {t:.2?}, 1+x+ax survives at 4+√13"))
}

fn c3_worked_example() -> Check {
    let h4 = ring_h4();
    let a = reduced_fusion_matrix(&h4, &ObjectVec(vec![1, 1, 0, 0])).map_err(|e| format!("{e:?}"))?;
    ensure(a == m(&[&[2, 2, 1], &[2, 2, 1], &[1, 1, 2]]), format!("(a) reduced {a}"))?;
    let fa = gram_factorizations(&a, None);
    ensure(fa == vec![m(&[&[1, 1, 0], &[1, 1, 0], &[1, 0, 1]])], format!("(a) factors {fa:?}"))?;

    let b = reduced_fusion_matrix(&h4, &ObjectVec(vec![1, 2, 0, 0])).map_err(|e| format!("{e:?}"))?;
    ensure(b == m(&[&[1, 4, 2], &[4, 3, 2], &[2, 2, 3]]), format!("(b) reduced {b}"))?;
    ensure(!is_psd_exact(&b).unwrap(), "(b) is PSD")?;

    let gamma_c = ObjectVec(vec![1, 4, 3, 2]);
    let c = reduced_fusion_matrix(&h4, &gamma_c).map_err(|e| format!("{e:?}"))?;
    ensure(c == m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]), format!("(c) reduced {c}"))?;
    ensure(gram_factorizations(&c, None) == vec![m(&[&[1], &[1], &[1]])], "(c) factor")?;
    let scanner = Scanner::new(&h4, SearchOptions::default()).unwrap();
    let out = scanner.evaluate(&gamma_c, 1);
    ensure(out.surviving.is_empty() && out.eliminated.len() == 1, "(c) outcome")?;
    let (g, _, e, _) = &out.eliminated[0];
    ensure(*g.odd_weights()[1].square() == QuadExt::integer(3, 13), "(c) extra weight")?;
    ensure(e.reason == Reason::Expressibility, "(c) reason")?;
    ensure(e.detail.contains("w^2 - 1 = 2 "), format!("(c) witness {}", e.detail))?;
    Ok("(a)-(c) reproduced; (c) w^2 = 3, target 2".into())
}

fn c4_izumi5() -> Check {
    let expected = [
        "7/2+1/2*sqrt(29)",
        "55+10*sqrt(29)",
        "11+2*sqrt(29)",
        "27/2+5/2*sqrt(29)",
        "35/2+5/2*sqrt(29)",
        "135/2+25/2*sqrt(29)",
        "5",
    ];
    let (r, t) = catalog_check("i2:5", &expected, Duration::from_secs(30 * 60))?;
    let recursive = r.filter_failures.get("recursive").copied().unwrap_or(0);
    ensure(recursive >= 6, format!("recursive filter rejects only {recursive}"))?;
    Ok(format!(
        "7 orbit classes in {t:.2?}; recursive filter rejects {recursive} graphs (first failing: {:?})",
        r.eliminated_graphs
    ))
}

fn c5_saturated() -> Check {
    let t = Instant::now();
    for n in [3u32, 5, 7, 9, 11, 13] {
        let ring = ring_izumi_i2(n).unwrap();
        let a = saturated_analysis(&ring, IzumiKind::I2Like).map_err(|e| e.to_string())?;
        let size = 2 * n as usize - 1;
        ensure(a.reduced_matrix.rows() == size, format!("n={n}: size"))?;
        ensure(a.reduced_matrix == saturated_pattern(&ring), format!("n={n}: pattern"))?;
        // the block on the n non-invertible simples is all ones
        let block: BTreeSet<i64> = (n as usize - 1..size)
            .flat_map(|i| (n as usize - 1..size).map(move |j| (i, j)))
            .map(|(i, j)| a.reduced_matrix.get(i, j))
            .collect();
        ensure(block == BTreeSet::from([1]), format!("n={n}: block"))?;
        ensure(a.weight_matches_n && q(&a.extra_weight_square) == QuadExt::integer(i64::from(n), 2), format!("n={n}: weight"))?;
        let p = IzumiParams::new(n).unwrap();
        ensure(q(&a.dim) == p.saturated_dim() && a.dim_matches, format!("n={n}: dim"))?;
    }
    let t = t.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!(
        "n in 3..13: size 2n-1, ones on the n x n non-invertible block, w^2 = n, dim = n+n^2d ({t:.2?})"
    ))
}

fn c6_identities() -> Check {
    for n in (3..=99).step_by(2) {
        let rec = izumi_identities(n).map_err(|e| e.to_string())?;
        ensure(rec.all_hold(), format!("n={n}"))?;
        let p = IzumiParams::new(n).unwrap();
        let d = p.d();
        let one = QuadExt::one(p.radicand());
        let ni = i64::from(n);
        ensure(d * d == &one + &d.scale(ni), format!("n={n}: d^2"))?;
        let lhs = (&one + &d.scale(ni)).scale(ni * ni);
        let rhs = (&one + &d.scale(ni - 1)).scale(ni) * (d + &one);
        ensure(lhs == rhs, format!("n={n}: cross-multiplied identity"))?;
    }
    Ok("all odd n <= 99".into())
}

fn c7_obstruction() -> Check {
    let h4 = ring_h4();
    let opts = SearchOptions::default();
    ensure(index_obstruction(&h4, &q("33/2+9/2*sqrt(13)"), &opts).unwrap(), "saturated index not obstructed")?;
    for x in reference_catalog("h4").unwrap() {
        ensure(!index_obstruction(&h4, &x, &opts).unwrap(), format!("{} obstructed", x.pretty()))?;
    }
    Ok("(33+9√13)/2 obstructed; the seven H4 indices are not".into())
}

fn c8_lattice() -> Check {
    let sets: Vec<AdmissibleIndexSet> = ["h4", "h6"]
        .iter()
        .map(|r| AdmissibleIndexSet::from_report(&scan_ring(&FusionRing::builtin(r).unwrap(), &SearchOptions::default()).unwrap()))
        .collect();
    let both = sets[0].union(&sets[1]);
    let pairs = intermediate_candidates(&q("33/2+9/2*sqrt(13)"), &both, &both).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String)> = pairs
        .iter()
        .filter(|p| !p.trivial)
        .map(|p| (p.upper.clone(), p.lower.clone()))
        .collect();
    let want: BTreeSet<(String, String)> = [
        ("3", "11/2+3/2*sqrt(13)"),
        ("5/2+1/2*sqrt(13)", "4+sqrt(13)"),
        ("11/2+3/2*sqrt(13)", "3"),
        ("4+sqrt(13)", "5/2+1/2*sqrt(13)"),
    ]
    .iter()
    .map(|(a, b)| (q(a).to_string(), q(b).to_string()))
    .collect();
    ensure(got == want, format!("pairs {got:?}"))?;
    let count = galois_orbit_report(3, 3, 3).unwrap().count;
    ensure(count == 9, format!("orbit count {count}"))?;
    Ok("4 nontrivial pairs; orbit count 9".into())
}

fn c9_properties() -> Check {
    // ring axioms
    let mut rings = vec![FusionRing::builtin("h4").unwrap(), FusionRing::builtin("h6").unwrap()];
    rings.extend((3..=13).step_by(2).map(|n| ring_izumi_i2(n).unwrap()));
    for r in &rings {
        let v = validate(r);
        ensure(v.passed(), format!("{} fails {:?}", r.name(), v.first_failure()))?;
    }
    // Gram solver against the column-multiset oracle
    let checked = gram_oracle_sweep()?;
    // thread-count determinism
    for name in ["h4", "h6", "i2:5"] {
        let ring = FusionRing::builtin(name).unwrap();
        let run = |k: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .unwrap()
                .install(|| scan_ring(&ring, &SearchOptions::default()).unwrap().to_json())
        };
        ensure(run(1) == run(8), format!("{name}: reports differ between 1 and 8 threads"))?;
    }
    Ok(format!(
        "{} rings validate; Gram solver agrees on {checked} matrices; 1 vs 8 threads byte-identical",
        rings.len()
    ))
}

/// All symmetric matrices of size <= 4 with entries in 0..=3; every column of a
/// factor is 0/1 since diagonal entries are at most 3.
fn gram_oracle_sweep() -> Result<usize, String> {
    let mut checked = 0;
    for n in 1..=4usize {
        let oracle = column_multiset_oracle(n);
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let total = 4usize.pow(slots.len() as u32);
        for code in 0..total {
            let mut mat = IntMatrix::zeros(n, n);
            let mut c = code;
            for &(i, j) in &slots {
                let v = (c % 4) as i64;
                c /= 4;
                mat.set(i, j, v);
                mat.set(j, i, v);
            }
            let got: BTreeSet<Vec<Vec<i64>>> = gram_factorizations(&mat, None)
                .iter()
                .map(|a| {
                    let mut cols = a.columns();
                    cols.sort();
                    cols
                })
                .collect();
            let want = oracle.get(&mat.to_rows()).cloned().unwrap_or_default();
            if got != want {
                return Err(format!("Gram solver disagrees on {mat}: {got:?} vs {want:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn column_multiset_oracle(n: usize) -> BTreeMap<Vec<Vec<i64>>, BTreeSet<Vec<Vec<i64>>>> {
    let vectors: Vec<Vec<i64>> = (1u32..(1 << n))
        .map(|mask| (0..n).map(|i| i64::from((mask >> i) & 1)).collect())
        .collect();
    let mut out: BTreeMap<Vec<Vec<i64>>, BTreeSet<Vec<Vec<i64>>>> = BTreeMap::new();
    fn go(
        vectors: &[Vec<i64>],
        k: usize,
        usage: &mut Vec<i64>,
        chosen: &mut Vec<Vec<i64>>,
        out: &mut BTreeMap<Vec<Vec<i64>>, BTreeSet<Vec<Vec<i64>>>>,
    ) {
        if k == vectors.len() {
            let n = usage.len();
            let mut g = vec![vec![0i64; n]; n];
            for c in chosen.iter() {
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] += c[i] * c[j];
                    }
                }
            }
            if g.iter().flatten().all(|&x| x <= 3) {
                let mut cols = chosen.clone();
                cols.sort();
                out.entry(g).or_default().insert(cols);
            }
            return;
        }
        let v = &vectors[k];
        let mut copies = 0;
        loop {
            go(vectors, k + 1, usage, chosen, out);
            if usage.iter().zip(v).any(|(u, x)| u + x > 3) {
                break;
            }
            for (u, x) in usage.iter_mut().zip(v) {
                *u += x;
            }
            chosen.push(v.clone());
            copies += 1;
        }
        for _ in 0..copies {
            chosen.pop();
        }
        for (u, x) in usage.iter_mut().zip(v) {
            *u -= x * copies;
        }
    }
    go(&vectors, 0, &mut vec![0; n], &mut Vec::new(), &mut out);
    out
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("1 H4 classification", c1_h4),
        ("2 H6 classification", c2_h6),
        ("3 worked example (a)-(c)", c3_worked_example),
        ("4 Izumi Z/5 classification", c4_izumi5),
        ("5 saturated-algebra suite", c5_saturated),
        ("6 identity suite", c6_identities),
        ("7 index obstruction", c7_obstruction),
        ("8 lattice arithmetic", c8_lattice),
        ("9 property suites", c9_properties),
    ];
    let mut failures = Vec::new();
    for (label, check) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(msg) => println!("PASS [{label}] {msg} ({:.2?})", t.elapsed()),
            Err(msg) => {
                println!("FAIL [{label}] {msg} ({:.2?})", t.elapsed());
                failures.push(label);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
