//! Normal forms and the action α checked against pointwise evaluation on
//! boundary paths.

use leavitt::boundary::{cylinder_partition, in_cylinder, random_in, representative, theta_apply};
use leavitt::random::{trial_rng, Sampler};
use leavitt::word::valid_words_up_to;
use leavitt::{corpus, Alpha, BoundaryPath, Cylinder, Field, FunctionAlgebra, Graph, PartialAction, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

const DEPTH: usize = 4;

type Raw = Vec<(Cylinder, Scalar)>;

/// Σ s·[ξ ∈ c], read straight off the unnormalized terms.
fn eval_raw(g: &Graph, field: Field, raw: &Raw, xi: &BoundaryPath) -> Scalar {
    raw.iter().filter(|(c, _)| in_cylinder(g, xi, c)).fold(field.zero(), |acc, (_, s)| &acc + s)
}

fn random_raw(s: &Sampler, rng: &mut impl Rng) -> Raw {
    let n = rng.gen_range(0..=5);
    (0..n).map(|_| (s.cylinder(rng), s.scalar(rng))).collect()
}

/// The same function written differently: terms split into children,
/// reordered, and padded with cancelling pairs.
fn rewrite(g: &Graph, field: Field, raw: &Raw, s: &Sampler, rng: &mut impl Rng) -> Raw {
    let mut out = Vec::new();
    for (c, v) in raw {
        let children = c.children(g);
        if !children.is_empty() && c.depth() < DEPTH && rng.gen_bool(0.5) {
            out.extend(children.into_iter().map(|ch| (ch, v.clone())));
        } else {
            out.push((c.clone(), v.clone()));
        }
    }
    if rng.gen_bool(0.5) {
        let c = s.cylinder(rng);
        let v = s.scalar(rng);
        out.push((c.clone(), v.clone()));
        out.push((c, &field.zero() - &v));
    }
    out.shuffle(rng);
    out
}

fn oracle_equal(g: &Graph, field: Field, x: &Raw, y: &Raw, rng: &mut impl Rng) -> bool {
    cylinder_partition(g, DEPTH).iter().all(|cell| {
        let mut points = vec![representative(g, cell)];
        points.extend((0..2).map(|_| random_in(g, cell, 3, rng)));
        points.iter().all(|xi| eval_raw(g, field, x, xi) == eval_raw(g, field, y, xi))
    })
}

#[test]
fn equals_agrees_with_partition_oracle() {
    for field in [Field::Rational, Field::Prime(5)] {
        for (name, g) in corpus::all() {
            let alg = FunctionAlgebra::new(g.clone(), field);
            let s = Sampler::new(&alg, DEPTH, 1);
            let mut equal_pairs = 0;
            for t in 0..500 {
                let mut rng = trial_rng(10, t);
                let x = random_raw(&s, &mut rng);
                let y = match t % 3 {
                    0 => random_raw(&s, &mut rng),
                    _ => rewrite(&g, field, &x, &s, &mut rng),
                };
                let fx = alg.normalize(x.clone());
                let fy = alg.normalize(y.clone());
                let expected = oracle_equal(&g, field, &x, &y, &mut rng);
                equal_pairs += usize::from(expected);
                assert_eq!(alg.equals(&fx, &fy), expected, "{name} trial {t}: {} vs {}", alg.display(&fx), alg.display(&fy));
                assert_eq!(fx == fy, expected);
            }
            assert!(equal_pairs >= 300, "{name}: only {equal_pairs} equal pairs");
        }
    }
}

#[test]
fn normalization_preserves_values() {
    for (_, g) in corpus::all() {
        let alg = FunctionAlgebra::new(g.clone(), Field::Rational);
        let s = Sampler::new(&alg, DEPTH, 1);
        for t in 0..100 {
            let mut rng = trial_rng(11, t);
            let raw = random_raw(&s, &mut rng);
            let f = alg.normalize(raw.clone());
            for cell in cylinder_partition(&g, DEPTH) {
                let xi = random_in(&g, &cell, 2, &mut rng);
                assert_eq!(alg.evaluate(&f, &xi), eval_raw(&g, Field::Rational, &raw, &xi));
            }
        }
    }
}

/// α_g(x)(ξ) = x(θ_{g^{-1}}(ξ)) for ξ ∈ X_g and 0 elsewhere.
#[test]
fn alpha_matches_theta() {
    for field in [Field::Rational, Field::Prime(5)] {
        for (name, g) in corpus::all() {
            let alg = FunctionAlgebra::new(g.clone(), field);
            let alpha = Alpha::new(alg.clone());
            let s = Sampler::new(&alg, DEPTH, 3);
            let words = valid_words_up_to(&g, 3);
            for t in 0..200 {
                let mut rng = trial_rng(12, t);
                let w = words.choose(&mut rng).unwrap();
                let winv = w.invert();
                let x = alg.mul(&alg.word_indicator(&winv).unwrap(), &s.dfunction(&mut rng, 4));
                let dom: Vec<Cylinder> = alg.word_indicator(w).unwrap().terms().map(|(c, _)| c.clone()).collect();
                let start = if rng.gen_bool(0.7) && !dom.is_empty() { dom.choose(&mut rng).unwrap().clone() } else { s.cylinder(&mut rng) };
                let xi = random_in(&g, &start, 3, &mut rng);
                let lhs = alg.evaluate(&alpha.apply(w, &x).unwrap(), &xi);
                let rhs = match theta_apply(&g, &winv, &xi).unwrap() {
                    Some(eta) => alg.evaluate(&x, &eta),
                    None => field.zero(),
                };
                assert_eq!(lhs, rhs, "{name} trial {t}: g = {}, x = {}, xi = {}", w.display(&g), alg.display(&x), xi.display(&g));
            }
        }
    }
}

#[test]
fn theta_is_a_partial_bijection() {
    for (_, g) in corpus::all() {
        for w in valid_words_up_to(&g, 3) {
            for xi in leavitt::boundary::boundary_paths_up_to(&g, 4) {
                if let Some(eta) = theta_apply(&g, &w, &xi).unwrap() {
                    assert_eq!(theta_apply(&g, &w.invert(), &eta).unwrap(), Some(xi.clone()));
                }
            }
        }
    }
}
