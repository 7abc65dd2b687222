//! One PASS/FAIL line per acceptance criterion. Everything is compared with
//! exact equality over ℚ or GF(5).

use std::process::Command;
use std::time::Instant;

use leavitt::action::{check_idempotency, verify_axioms};
use leavitt::beta::{verify_orthogonality, verify_semi_saturated, BetaAction};
use leavitt::boundary::{cylinder_partition, in_cylinder, random_in, representative, theta_apply};
use leavitt::graded::{decide_strongly_graded, verify_decision, Certificate};
use leavitt::random::{trial_rng, Sampler};
use leavitt::word::valid_words_up_to;
use leavitt::{
    corpus, Alpha, BoundaryPath, Cylinder, DFunction, Field, FunctionAlgebra, Graph, Lpa, PartialAction, ReducedWord,
    Result as LResult, Scalar, SkewRing,
};
use leavitt_cli::report::Report;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_file(name: &str) -> String {
    format!("{}/../core/corpus/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary; returns the exit code and the parsed JSON report.
fn leavitt(args: &[&str]) -> Result<(i32, Option<Report>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_leavitt")).args(args).arg("--json").output().map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by a signal")?;
    let report = serde_json::from_slice(&out.stdout).ok();
    Ok((code, report))
}

fn fields() -> [Field; 2] {
    [Field::Rational, Field::Prime(5)]
}

fn ring(g: Graph, field: Field) -> SkewRing<Alpha> {
    SkewRing::new(Alpha::new(FunctionAlgebra::new(g, field)))
}

fn ck_relations() -> Check {
    let mut graphs = corpus::all();
    graphs.extend(corpus::random_corpus(2024, 20, false));
    for (name, g) in &graphs {
        ensure(g.vertices().all(|v| !g.is_isolated(v)) && g.edge_count() >= 1, || format!("{name} is out of range"))?;
    }
    let mut n = 0;
    for field in fields() {
        for (name, g) in &graphs {
            for c in Lpa::new(ring(g.clone(), field)).verify_ck() {
                ensure(c.passed, || format!("{name} over {field}: {} ({})", c.name, c.detail))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} relation instances on {} graphs over q and gf:5", graphs.len()))
}

struct Doubled(Alpha);

impl PartialAction for Doubled {
    fn algebra(&self) -> &FunctionAlgebra {
        self.0.algebra()
    }

    fn domain_unit(&self, g: &ReducedWord) -> LResult<DFunction> {
        self.0.domain_unit(g)
    }

    fn apply(&self, g: &ReducedWord, x: &DFunction) -> LResult<DFunction> {
        let y = self.0.apply(g, x)?;
        Ok(if g.is_identity() { y } else { self.algebra().scale(&self.algebra().scalar(2), &y) })
    }
}

fn partial_action_axioms() -> Check {
    let mut checked = 0;
    for (name, g) in corpus::all() {
        let alpha = Alpha::new(FunctionAlgebra::new(g, Field::Rational));
        let rep = verify_axioms(&alpha, 3, 3);
        ensure(rep.violations.is_empty(), || format!("{name}: {:?}", rep.violations[0]))?;
        checked += rep.checked.iter().sum::<usize>();
        let mutated = verify_axioms(&Doubled(alpha), 3, 3);
        ensure(!mutated.violations.is_empty(), || format!("{name}: mutation fixture not detected"))?;
    }
    Ok(format!("{checked} axiom instances, 0 violations; mutation fixture detected on every graph"))
}

fn theta_compatibility() -> Check {
    let mut n = 0;
    for (name, g) in corpus::all() {
        let alg = FunctionAlgebra::new(g.clone(), Field::Rational);
        let alpha = Alpha::new(alg.clone());
        let s = Sampler::new(&alg, 4, 3);
        let words = valid_words_up_to(&g, 3);
        for t in 0..200u64 {
            let mut rng = trial_rng(3, t);
            let w = s.word(&mut rng);
            ensure(w.len() <= 3 && words.contains(&w), || "word out of range".into())?;
            let winv = w.invert();
            let x = alg.mul(&alg.word_indicator(&winv).map_err(|e| e.to_string())?, &s.dfunction(&mut rng, 4));
            let dom: Vec<Cylinder> = alg.word_indicator(&w).map_err(|e| e.to_string())?.terms().map(|(c, _)| c.clone()).collect();
            let start = if t % 10 < 7 && !dom.is_empty() { dom[t as usize % dom.len()].clone() } else { s.cylinder(&mut rng) };
            let xi = random_in(&g, &start, 4, &mut rng);
            let lhs = alg.evaluate(&alpha.apply(&w, &x).map_err(|e| e.to_string())?, &xi);
            let rhs = match theta_apply(&g, &winv, &xi).map_err(|e| e.to_string())? {
                Some(eta) => alg.evaluate(&x, &eta),
                None => Field::Rational.zero(),
            };
            ensure(lhs == rhs, || format!("{name} trial {t}: g = {}, xi = {}", w.display(&g), xi.display(&g)))?;
            n += 1;
        }
    }
    Ok(format!("{n} (g, x, xi) triples"))
}

fn idempotency() -> Check {
    let mut n = 0;
    for (name, g) in corpus::all() {
        let rep = check_idempotency(&FunctionAlgebra::new(g, Field::Rational), 3).map_err(|e| e.to_string())?;
        ensure(rep.violations.is_empty(), || format!("{name}: {}", rep.violations[0]))?;
        n += rep.checked;
    }
    Ok(format!("{n} idempotency checks including x * (sum of 1_v) = x"))
}

fn strong_grading() -> Check {
    for (name, expected) in [("loop", true), ("rose2", false), ("a2", false), ("toeplitz", false)] {
        let (code, report) = leavitt(&["check", "strong", &corpus_file(name)])?;
        let report = report.ok_or("no report")?;
        let rec = &report.records[0];
        ensure(code == 0 && rec.passed && rec.verdict == Some(expected), || format!("{name}: exit {code}, {rec:?}"))?;
        let r = ring(corpus::by_name(name).unwrap(), Field::Rational);
        let d = decide_strongly_graded(&r, 4).map_err(|e| e.to_string())?;
        verify_decision(&r, &d)?;
        let shape_ok = match (expected, &d.certificates[..]) {
            (true, [Certificate::LoopStructure { .. }, Certificate::InverseTable(t)]) => {
                t.len() == 8 && t.iter().all(|(x, _)| x.homogeneous_degree().is_some_and(|g| g.len() <= 4))
            }
            (false, [Certificate::SeparatingCell { .. }]) => true,
            _ => false,
        };
        ensure(shape_ok, || format!("{name}: unexpected certificates"))?;
    }
    Ok("loop true (inverse table |g| <= 4); rose2, a2, toeplitz false (separating cells)".into())
}

fn theorem_equivalence() -> Check {
    let (code, report) = leavitt(&["crosscheck", "--random", "20", "--seed", "6"])?;
    let report = report.ok_or("no report")?;
    ensure(code == 0 && report.records.len() == 24, || format!("exit {code}, {} rows", report.records.len()))?;
    for r in &report.records {
        ensure(r.passed, || format!("{}: {}", r.name, r.detail))?;
    }
    let loops = report.records.iter().filter(|r| r.verdict == Some(true)).count();
    let (code, _) = leavitt(&["crosscheck", "--random", "2", "--tamper-certificates"])?;
    ensure(code == 2, || format!("tampered run exited {code}"))?;
    Ok(format!("24 row-constant rows ({loops} loops), all certificates verified; tampering exits 2"))
}

fn laurent() -> Check {
    let (code, report) = leavitt(&["laurent", &corpus_file("loop"), "--N", "5"])?;
    let report = report.ok_or("no report")?;
    let rec = &report.records[0];
    ensure(code == 0 && report.records.len() == 1 && rec.passed, || format!("exit {code}: {rec:?}"))?;
    ensure(rec.detail.starts_with("121/121 "), || rec.detail.clone())?;
    Ok("121/121 products".into())
}

fn associativity() -> Check {
    for (name, _) in corpus::all() {
        let (code, report) = leavitt(&["assoc", &corpus_file(name.as_str()), "--trials", "200", "--depth", "3"])?;
        let report = report.ok_or("no report")?;
        ensure(code == 0 && report.passed(), || format!("{name}: {}", report.records[0].detail))?;
    }
    Ok("200 trials on each corpus graph".into())
}

fn beta_construction() -> Check {
    let mut n = 0;
    for (name, g) in corpus::all() {
        let (code, report) = leavitt(&["iso", "beta", &corpus_file(name.as_str())])?;
        let report = report.ok_or("no report")?;
        ensure(code == 0 && report.passed(), || format!("{name}: exit {code}"))?;
        n += report.records.len();
        let b = BetaAction::new(FunctionAlgebra::new(g, Field::Rational)).map_err(|e| e.to_string())?;
        let semi = verify_semi_saturated(&b, 3).map_err(|e| e.to_string())?;
        ensure(semi.violations.is_empty(), || format!("{name}: semi-saturation {:?}", semi.violations[0]))?;
        let orth = verify_orthogonality(&b).map_err(|e| e.to_string())?;
        ensure(orth.violations.is_empty(), || format!("{name}: orthogonality {}", orth.violations[0]))?;
    }
    let path = std::env::temp_dir().join(format!("leavitt-acceptance-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"vertices":["v","u"],"edges":[{"id":"f","src":"v","dst":"v"}]}"#).map_err(|e| e.to_string())?;
    let (code, _) = leavitt(&["iso", "beta", &path.to_string_lossy()])?;
    ensure(code == 1, || format!("isolated vertex accepted (exit {code})"))?;
    Ok(format!("{n} records on the corpus; isolated vertex rejected"))
}

type Raw = Vec<(Cylinder, Scalar)>;

fn eval_raw(g: &Graph, raw: &Raw, xi: &BoundaryPath) -> Scalar {
    raw.iter().filter(|(c, _)| in_cylinder(g, xi, c)).fold(Field::Rational.zero(), |acc, (_, s)| &acc + s)
}

fn normal_form() -> Check {
    let mut equal = 0;
    for (name, g) in corpus::all() {
        let alg = FunctionAlgebra::new(g.clone(), Field::Rational);
        let s = Sampler::new(&alg, 4, 1);
        let cells = cylinder_partition(&g, 4);
        let points: Vec<BoundaryPath> = cells.iter().map(|c| representative(&g, c)).collect();
        for t in 0..500u64 {
            let mut rng = trial_rng(10, t);
            let x: Raw = (0..t % 6).map(|_| (s.cylinder(&mut rng), s.scalar(&mut rng))).collect();
            let y: Raw = if t % 3 == 0 {
                (0..(t / 3) % 6).map(|_| (s.cylinder(&mut rng), s.scalar(&mut rng))).collect()
            } else {
                let mut y = Vec::new();
                for (i, (c, v)) in x.iter().enumerate() {
                    let children = c.children(&g);
                    if (i as u64 + t).is_multiple_of(2) && !children.is_empty() && c.depth() < 4 {
                        y.extend(children.into_iter().map(|ch| (ch, v.clone())));
                    } else {
                        y.push((c.clone(), v.clone()));
                    }
                }
                if t % 2 == 0 {
                    let (c, v) = (s.cylinder(&mut rng), s.scalar(&mut rng));
                    y.push((c.clone(), v.clone()));
                    y.push((c, &Field::Rational.zero() - &v));
                }
                y.reverse();
                y
            };
            let expected = points.iter().all(|xi| eval_raw(&g, &x, xi) == eval_raw(&g, &y, xi));
            let got = alg.equals(&alg.normalize(x), &alg.normalize(y));
            ensure(got == expected, || format!("{name} trial {t}: equals = {got}, oracle = {expected}"))?;
            equal += usize::from(expected);
        }
    }
    Ok(format!("2000 pairs, {equal} equal by the oracle"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("CK relations", ck_relations),
        ("partial action axioms", partial_action_axioms),
        ("theta-compatibility", theta_compatibility),
        ("D_g idempotency", idempotency),
        ("strong grading", strong_grading),
        ("theorem equivalence", theorem_equivalence),
        ("Laurent corollary", laurent),
        ("associativity", associativity),
        ("beta construction", beta_construction),
        ("normal-form soundness", normal_form),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (mark, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!("{mark} {:>2}. {name}: {detail} [{:.2}s]", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/10 passed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
