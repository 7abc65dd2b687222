//! Seeded samplers for randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{cylinder_partition, Cylinder};
use crate::function::{DFunction, FunctionAlgebra};
use crate::scalar::Scalar;
use crate::word::{valid_words_up_to, ReducedWord};

/// An independent generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws scalars, cylinders, functions and words for one algebra.
#[derive(Debug, Clone)]
pub struct Sampler {
    alg: FunctionAlgebra,
    cylinders: Vec<Cylinder>,
    words: Vec<ReducedWord>,
}

impl Sampler {
    /// Cylinders of depth at most `depth`, words with nonempty domain of
    /// length at most `word_len`.
    pub fn new(alg: &FunctionAlgebra, depth: usize, word_len: usize) -> Sampler {
        let g = alg.graph();
        let mut cylinders: Vec<Cylinder> = g.paths_up_to(depth).iter().map(Cylinder::from_path).collect();
        cylinders.sort();
        Sampler { alg: alg.clone(), cylinders, words: valid_words_up_to(g, word_len) }
    }

    pub fn algebra(&self) -> &FunctionAlgebra {
        &self.alg
    }

    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    /// A nonzero scalar from a small fixed pool.
    pub fn scalar(&self, rng: &mut impl Rng) -> Scalar {
        let pool = self.alg.field().sample_nonzero();
        let extra = [2, 3, -2, -3].map(|n| self.alg.scalar(n));
        let all: Vec<&Scalar> = pool.iter().chain(extra.iter()).filter(|s| !s.is_zero()).collect();
        all[rng.gen_range(0..all.len())].clone()
    }

    pub fn cylinder(&self, rng: &mut impl Rng) -> Cylinder {
        self.cylinders.choose(rng).expect("graphs have vertices").clone()
    }

    /// A combination of up to `max_terms` random indicators (possibly zero).
    pub fn dfunction(&self, rng: &mut impl Rng, max_terms: usize) -> DFunction {
        let n = rng.gen_range(0..=max_terms);
        let terms: Vec<(Cylinder, Scalar)> = (0..n).map(|_| (self.cylinder(rng), self.scalar(rng))).collect();
        self.alg.normalize(terms)
    }

    /// Like [`Sampler::dfunction`] but built on the cells of a partition at
    /// depth `depth`, so values on neighbouring cells often coincide.
    pub fn dfunction_on_cells(&self, rng: &mut impl Rng, depth: usize) -> DFunction {
        let cells = cylinder_partition(self.alg.graph(), depth);
        let values: Vec<Scalar> = (0..3).map(|_| self.scalar(rng)).collect();
        let terms = cells.into_iter().filter_map(|c| {
            let k = rng.gen_range(0..=values.len());
            values.get(k).map(|v| (c, v.clone()))
        });
        self.alg.normalize(terms.collect())
    }

    pub fn word(&self, rng: &mut impl Rng) -> ReducedWord {
        self.words.choose(rng).expect("identity is always present").clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::Field;

    #[test]
    fn samplers_are_deterministic() {
        let alg = FunctionAlgebra::new(corpus::rose2(), Field::Rational);
        let s = Sampler::new(&alg, 3, 3);
        let a: Vec<DFunction> = (0..5).map(|t| s.dfunction(&mut trial_rng(9, t), 4)).collect();
        let b: Vec<DFunction> = (0..5).map(|t| s.dfunction(&mut trial_rng(9, t), 4)).collect();
        assert_eq!(a, b);
        let c: Vec<DFunction> = (0..5).map(|t| s.dfunction(&mut trial_rng(10, t), 4)).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_objects_are_valid() {
        let alg = FunctionAlgebra::new(corpus::toeplitz(), Field::Prime(5));
        let s = Sampler::new(&alg, 4, 3);
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            assert!(alg.check(&s.dfunction(&mut rng, 5)).is_ok());
            assert!(alg.check(&s.dfunction_on_cells(&mut rng, 3)).is_ok());
            assert!(!s.word(&mut rng).classify(alg.graph()).unwrap().is_empty_domain());
            assert!(!s.scalar(&mut rng).is_zero());
        }
    }
}
