use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffalg::{DiffPoly, Functional, Generator, Monomial, Rational, Var};

/// Seeded generator of random differential polynomials and functionals.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    degree: u32,
    max_order: u32,
    terms: usize,
}

impl Sampler {
    /// Defaults: degree ≤ 3, derivatives ≤ 2, up to 3 terms.
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            degree: 3,
            max_order: 2,
            terms: 3,
        }
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree.max(1);
        self
    }

    pub fn with_max_order(mut self, max_order: u32) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms.max(1);
        self
    }

    pub fn rational(&mut self) -> Rational {
        let num = loop {
            let n: i64 = self.rng.gen_range(-4..=4);
            if n != 0 {
                break n;
            }
        };
        let den: i64 = self.rng.gen_range(1..=3);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn polynomial(&mut self, fields: &[Generator]) -> DiffPoly {
        if fields.is_empty() {
            return DiffPoly::zero();
        }
        let terms = self.rng.gen_range(1..=self.terms);
        let mut out = DiffPoly::zero();
        for _ in 0..terms {
            let degree = self.rng.gen_range(1..=self.degree);
            let mut m = Monomial::one();
            for _ in 0..degree {
                let g = fields[self.rng.gen_range(0..fields.len())];
                let k = self.rng.gen_range(0..=self.max_order);
                m = m.times_var(Var::new(g, k));
            }
            let c = self.rational();
            out.add_term(m, c);
        }
        out
    }

    pub fn functional(&mut self, fields: &[Generator]) -> Functional {
        Functional::new(self.polynomial(fields))
    }
}

/// How many functional pairs to draw, from which seed, and how large.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub degree: u32,
    pub max_order: u32,
}

impl Sampling {
    /// Degree ≤ 3 and derivatives ≤ 2 by default.
    pub fn new(samples: usize, seed: u64) -> Self {
        Sampling {
            samples,
            seed,
            degree: 3,
            max_order: 2,
        }
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_max_order(mut self, max_order: u32) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.seed)
            .with_degree(self.degree)
            .with_max_order(self.max_order)
    }
}
