//! Prints one pass/fail line per acceptance criterion and exits non-zero if any fails.
//! Every criterion re-checks the report data against literal expectations written here.

use std::time::{Duration, Instant};

use serde_json::Value;
use zigzag::twists::Mode;
use zigzag::Field;
use zz::checks::{self, Ctx, Selection};
use zz::report::Record;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(records: &[Record]) -> Result<(), String> {
    match records.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(format!("{} is {}", r.name, r.status)),
    }
}

fn find<'a>(records: &'a [Record], name: &str) -> Result<&'a Record, String> {
    records.iter().find(|r| r.name == name).ok_or_else(|| format!("missing record {name}"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn choose(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn ctx() -> Ctx {
    Ctx { field: Field::Rationals, seed: 1, timings: false }
}

fn presentation() -> Verdict {
    let pairs = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3)];
    let recs = checks::presentation(&ctx(), &pairs).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    for r in &recs {
        ensure(r.data["outcome"] == "found", format!("{}: not found", r.name))?;
        ensure(r.data["construction_dim"] == r.data["presentation_dim"], format!("{}: dimensions differ", r.name))?;
    }
    Ok(format!("{} presentations isomorphic", recs.len()))
}

fn dimension_table() -> Verdict {
    let expected: [[u64; 5]; 4] = [[2, 6, 10, 14, 18], [2, 12, 30, 56, 90], [2, 20, 70, 168, 330], [2, 30, 140, 420, 990]];
    let (recs, _) = checks::dims(&ctx(), 4, 5).map_err(|e| e.to_string())?;
    for (d, row) in expected.iter().enumerate() {
        let got: Vec<u64> = recs[d].data["dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        ensure(got == row, format!("d={}: {got:?}", d + 1))?;
    }
    all_pass(&recs)?;
    Ok("20 entries match".into())
}

fn projective_formulas() -> Verdict {
    let recs = checks::projective_formulas(&ctx(), 3, 5).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    let per_case = recs.iter().filter(|r| r.data.get("left_mismatches").is_some()).count();
    ensure(per_case == 15, format!("{per_case} cases"))?;
    let worked = find(&recs, "c03.projectives.worked-values")?;
    let values: Vec<u64> = worked.data.as_array().unwrap().iter().map(|r| r["formula"].as_u64().unwrap_or(0)).collect();
    ensure(values == [16, 24], format!("worked values {values:?}"))?;
    let cand = find(&recs, "c03.projectives.pi-dual-candidates")?;
    let all = &cand.data["all_runs"]["mismatches"];
    let interior = &cand.data["interior_runs"]["mismatches"];
    ensure(interior == 0, "interior-runs candidate disagrees")?;
    Ok(format!(
        "left formula exact on 15 cases; 16 and 24 reproduce; pi-dual candidates: interior-runs mismatches {}, all-runs mismatches {} of {} vertices",
        interior, all, cand.data["vertices_checked"]
    ))
}

fn pbw() -> Verdict {
    let recs = checks::pbw_suite(&ctx(), 3, 4).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    let alpha = find(&recs, "c04.pbw.two-ordering.alphabetical")?;
    ensure(alpha.data["verdict"] == "not-pbw", "alphabetical verdict")?;
    ensure(strings(&alpha.data["b2"]) == ["alpha*beta", "beta*gamma"], "alphabetical B2")?;
    ensure(strings(&alpha.data["b3"]) == ["alpha*beta*gamma"], "alphabetical B3")?;
    ensure(alpha.data["associated_graded_quadratic"] == false, "alphabetical associated graded is quadratic")?;
    let second = find(&recs, "c04.pbw.two-ordering.alpha,delta,epsilon,beta,gamma")?;
    ensure(second.data["verdict"] == "pbw-basis", "second order verdict")?;
    ensure(strings(&second.data["b2"]) == ["alpha*beta", "delta*epsilon"], "second order B2")?;
    ensure(strings(&second.data["b3"]).is_empty(), "second order B3")?;
    let lambdas: Vec<&Record> = recs.iter().filter(|r| r.name.starts_with("c04.pbw.lambda")).collect();
    ensure(lambdas.len() == 12, "twelve lambda cases")?;
    for r in &lambdas {
        ensure(r.data["verdict"] == "pbw-basis" && r.data["linear_resolution_probe"] == "linear-to-4", r.name.clone())?;
    }
    Ok("two orders reproduce; 12 lambda cases pbw and linear to depth 4".into())
}

fn frobenius() -> Verdict {
    let pairs = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3)];
    let recs = checks::frobenius(&ctx(), &pairs).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    for r in recs.iter().filter(|r| r.data.get("d").is_some()) {
        let d = r.data["d"].as_u64().unwrap();
        ensure(r.data["gorenstein"].as_u64() == Some(d + 1), format!("{}: Gorenstein parameter", r.name))?;
        ensure(r.data["symmetric"] == true && r.data["nondegenerate"] == true, format!("{}: form", r.name))?;
    }
    let sign = find(&recs, "c05.frobenius.three-cycle-sign")?;
    ensure(sign.data["rationals"] == "refuted" && sign.data["prime_2"] == "found", "three-cycle comparison")?;
    Ok("7 zigzag algebras symmetric with parameter d+1; three-cycle refuted over Q, found over F_2".into())
}

fn nakayama() -> Verdict {
    let recs = checks::nakayama(&ctx(), 4).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    ensure(recs.len() == 12, "three assignments for each n")?;
    for r in &recs {
        let n = r.data["n"].as_u64().unwrap() as usize;
        let rot = strings(&r.data["rotations"]);
        ensure(rot.len() == n && rot.iter().all(|v| v == "isomorphic"), format!("{}: rotations", r.name))?;
        ensure(r.data["staircase_matches"] == true, format!("{}: staircase", r.name))?;
    }
    Ok("n = 1..4, 3 degree assignments each".into())
}

fn group_relations() -> Verdict {
    let start = Instant::now();
    let c = ctx();
    let mut recs = Vec::new();
    for (d, s) in [(1, 3), (1, 4), (2, 2), (2, 3), (3, 2)] {
        recs.push(checks::group_relations(&c, d, s, Mode::Lifted, Selection::All).map_err(|e| e.to_string())?);
    }
    for (d, s) in [(1, 3), (2, 2)] {
        recs.push(checks::group_relations(&c, d, s, Mode::Direct, Selection::All).map_err(|e| e.to_string())?);
    }
    let sampled = checks::group_relations(&c, 2, 3, Mode::Direct, Selection::Sample(12)).map_err(|e| e.to_string())?;
    ensure(sampled.data["relations_checked"].as_u64().unwrap_or(0) >= 10, "fewer than 10 sampled relations")?;
    recs.push(sampled);
    all_pass(&recs)?;
    for r in &recs[..7] {
        ensure(r.data["relations_checked"] == r.data["relations_total"], format!("{}: not exhaustive", r.name))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), "over ten minutes")?;
    let total: u64 = recs.iter().map(|r| r.data["relations_checked"].as_u64().unwrap()).sum();
    Ok(format!("{total} relation checks across both modes"))
}

fn longest() -> Verdict {
    let pairs = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)];
    let recs = checks::longest(&ctx(), &pairs).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    for (r, (d, s)) in recs.iter().zip(pairs) {
        ensure(r.data["word_length"].as_u64() == Some(choose((d + s) as u64, (d + 1) as u64)), format!("{}: length", r.name))?;
        ensure(r.data["homological_degree"].as_i64() == Some(s as i64), format!("{}: degree", r.name))?;
        ensure(r.data["internal_shift"].as_i64() == Some(-((d + s) as i64)), format!("{}: shift", r.name))?;
        ensure(r.data["concentrated"] == true, format!("{}: homology spread", r.name))?;
    }
    Ok("5 longest words shift and twist".into())
}

fn koszul_cones() -> Verdict {
    let recs = checks::koszul_cones(&ctx(), &[(1, 2), (1, 3), (2, 2)]).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    ensure(recs.len() == 6, "three acyclic and three periodic records")?;
    ensure(recs.iter().filter(|r| r.name.contains("acyclic")).all(|r| r.data["verdict"] == "isomorphic"), "acyclic verdicts")?;
    Ok("acyclic and periodic cones hold for 3 cases".into())
}

fn exterior() -> Verdict {
    let recs = checks::exterior(&ctx(), 3).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    let dims: Vec<u64> = recs.iter().map(|r| r.data["dim"].as_u64().unwrap()).collect();
    ensure(dims == [4, 8, 16], format!("dims {dims:?}"))?;
    Ok("dimensions 4, 8, 16 with isomorphisms".into())
}

fn mckay() -> Verdict {
    let start = Instant::now();
    let recs = checks::mckay_suite(&ctx()).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    let skew: Vec<&Record> = recs.iter().filter(|r| r.name.starts_with("c11.zigskew")).collect();
    ensure(skew.len() >= 3, "fewer than three zigskew pairs")?;
    ensure(skew.iter().any(|r| r.data["exterior_generators"].as_u64().unwrap_or(0) >= 1), "no exterior case")?;
    for name in ["c11.truncation.d1.3.s2", "c11.truncation.d2.3x3.s2", "c11.truncation.d1.4.s3", "c11.equivariant.d2.3x3.s2"] {
        find(&recs, name)?;
    }
    ensure(start.elapsed() < Duration::from_secs(600), "over ten minutes")?;
    Ok(format!("{} zigskew pairs, 3 truncations, equivariant suite", skew.len()))
}

fn path_lemmas() -> Verdict {
    let recs = checks::path_lemma_suite(&ctx(), 3, 4).map_err(|e| e.to_string())?;
    all_pass(&recs)?;
    ensure(recs.len() == 24, "24 family cases")?;
    let total = |key: &str| -> u64 { recs.iter().map(|r| r.data.get(key).map_or(0, |t| t["checked"].as_u64().unwrap())).sum() };
    for key in ["permute", "repeated_direction_zero_lambda", "repeated_direction_zero_pi", "basic_commutation", "commuting_chains"] {
        ensure(total(key) > 0, format!("{key} never exercised"))?;
    }
    Ok(format!(
        "permute {}, zero-lambda {}, zero-pi {}, basic {}, chains {} instances",
        total("permute"),
        total("repeated_direction_zero_lambda"),
        total("repeated_direction_zero_pi"),
        total("basic_commutation"),
        total("commuting_chains")
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("presentation", presentation),
        ("dimension table", dimension_table),
        ("projective formulas", projective_formulas),
        ("pbw and koszulity", pbw),
        ("frobenius structure", frobenius),
        ("nakayama rotations", nakayama),
        ("group relations", group_relations),
        ("longest element", longest),
        ("koszul cones", koszul_cones),
        ("exterior zigzag", exterior),
        ("mckay and skew", mckay),
        ("path lemmas", path_lemmas),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
