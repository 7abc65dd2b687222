use leavitt::action::{check_idempotency, verify_axioms, Axiom};
use leavitt::skew::check_associativity;
use leavitt::{corpus, Alpha, DFunction, Field, FunctionAlgebra, Lpa, PartialAction, ReducedWord, Result, SkewRing};

fn lpa(g: leavitt::Graph, field: Field) -> Lpa {
    Lpa::new(SkewRing::new(Alpha::new(FunctionAlgebra::new(g, field))))
}

#[test]
fn ck_relations_hold_on_corpus_and_random_graphs() {
    let mut graphs = corpus::all();
    graphs.extend(corpus::random_corpus(2024, 20, false));
    for field in [Field::Rational, Field::Prime(5)] {
        for (name, g) in &graphs {
            let checks = lpa(g.clone(), field).verify_ck();
            assert!(!checks.is_empty());
            for c in checks {
                assert!(c.passed, "{name} over {field}: {} ({})", c.name, c.detail);
            }
        }
    }
}

#[test]
fn ck_instance_counts() {
    // (1) and (2): 2 per edge each; (3): all ordered pairs; (4): regular vertices
    let counts: Vec<usize> = corpus::all().into_iter().map(|(_, g)| lpa(g, Field::Rational).verify_ck().len()).collect();
    assert_eq!(counts, [2 + 2 + 1 + 1, 2 + 2 + 1 + 1, 4 + 4 + 4 + 1, 4 + 4 + 4 + 1]);
}

#[test]
fn axioms_hold_on_corpus() {
    for (name, g) in corpus::all() {
        let rep = verify_axioms(&Alpha::new(FunctionAlgebra::new(g, Field::Rational)), 3, 3);
        assert!(rep.passed(), "{name}: {:?}", rep.violations.first());
        assert!(rep.checked.iter().all(|&n| n > 0));
    }
}

/// α with every nontrivial map doubled: still lands in the right ideals but
/// breaks α_g α_h = α_{gh}.
struct Doubled(Alpha);

impl PartialAction for Doubled {
    fn algebra(&self) -> &FunctionAlgebra {
        self.0.algebra()
    }

    fn domain_unit(&self, g: &ReducedWord) -> Result<DFunction> {
        self.0.domain_unit(g)
    }

    fn apply(&self, g: &ReducedWord, x: &DFunction) -> Result<DFunction> {
        let y = self.0.apply(g, x)?;
        Ok(if g.is_identity() { y } else { self.algebra().scale(&self.algebra().scalar(2), &y) })
    }
}

#[test]
fn mutated_action_is_caught() {
    for (name, g) in corpus::all() {
        let rep = verify_axioms(&Doubled(Alpha::new(FunctionAlgebra::new(g, Field::Rational))), 3, 3);
        assert!(rep.violations_of(Axiom::P3) >= 1, "{name}");
    }
}

#[test]
fn domain_ideals_are_idempotent() {
    for (name, g) in corpus::all() {
        let rep = check_idempotency(&FunctionAlgebra::new(g, Field::Rational), 3).unwrap();
        assert!(rep.violations.is_empty(), "{name}: {:?}", rep.violations);
        assert!(rep.checked > 1);
    }
}

#[test]
fn multiplication_is_associative() {
    for field in [Field::Rational, Field::Prime(5)] {
        for (name, g) in corpus::all() {
            let ring = SkewRing::new(Alpha::new(FunctionAlgebra::new(g, field)));
            let rep = check_associativity(&ring, 200, 3, 77);
            assert!(rep.passed(), "{name}: {:?}", rep.violations.first());
        }
    }
}

#[test]
fn phi_examples() {
    let r = lpa(corpus::rose2(), Field::Rational);
    let eval = |t: &str| r.ring().display(&r.phi(&r.parse(t).unwrap()).unwrap());
    assert_eq!(eval("a* b"), "0");
    assert_eq!(eval("a* a"), "(1[v]) d[e]");
    assert_eq!(eval("a a* + b b*"), "(1[v]) d[e]");
    let t = lpa(corpus::toeplitz(), Field::Rational);
    assert!(t.equals(&t.parse("f* f").unwrap(), &t.parse("v").unwrap()).unwrap());
    assert!(!t.equals(&t.parse("f f*").unwrap(), &t.parse("v").unwrap()).unwrap());
}
