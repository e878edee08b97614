//! Deterministic sampler of small well-posed problem instances:
//! unimodular saturated embeddings with smooth parameters, rejection
//! sampled from a seeded stream for property-test sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arrangement::{Arrangement, Parameter};
use crate::intmat::IntMat;
use crate::lattice::{self, validate_embedding};
use crate::spec::{Options, ProblemSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("bounds out of range: need 1 <= n <= 6, k <= 3, 2 <= p <= 11, entries <= 3")]
    InvalidBounds,
    #[error("rejection sampling exhausted after {attempts} attempts with {found} instances found")]
    ExhaustedRejectionBudget { attempts: usize, found: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub n_max: usize,
    pub k_max: usize,
    pub p_max: i64,
    pub entry_max: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n_max: 4, k_max: 2, p_max: 7, entry_max: 2 }
    }
}

pub fn corpus_generate(
    seed: u64,
    count: usize,
    bounds: &Bounds,
) -> Result<Vec<ProblemSpec>, CorpusError> {
    if bounds.n_max == 0
        || bounds.n_max > 6
        || bounds.k_max > 3
        || bounds.p_max < 2
        || bounds.p_max > 11
        || bounds.entry_max < 1
        || bounds.entry_max > 3
    {
        return Err(CorpusError::InvalidBounds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let budget = 400 * count.max(1);
    for attempt in 0..budget {
        if out.len() == count {
            break;
        }
        let n = rng.gen_range(1..=bounds.n_max);
        let k = rng.gen_range(0..=bounds.k_max.min(n));
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..k)
                    .map(|_| rng.gen_range(-bounds.entry_max..=bounds.entry_max))
                    .collect()
            })
            .collect();
        let emb = match validate_embedding(IntMat::from_i64(&rows)) {
            Ok(e) => e,
            Err(_) => continue,
        };
        if !lattice::is_unimodular(&emb) {
            continue;
        }
        let p = rng.gen_range(2..=bounds.p_max);
        let lambda: Vec<i64> = (0..k).map(|_| rng.gen_range(-2 * p..=2 * p)).collect();
        let param = match Parameter::new(lambda.clone(), p) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let arr = match Arrangement::new(emb, param) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let smooth = match arr.is_smooth(seed ^ attempt as u64) {
            Ok(r) => r.smooth,
            Err(_) => continue,
        };
        if !smooth {
            continue;
        }
        let mut spec = ProblemSpec::new(&rows, lambda, p);
        spec.options = Options {
            truncation: Some(4),
            seed: Some(seed),
            window: None,
        };
        out.push(spec);
    }
    if out.len() < count {
        return Err(CorpusError::ExhaustedRejectionBudget { attempts: budget, found: out.len() });
    }
    Ok(out)
}
