//! Seeded Gaussian inputs, converted exactly to dyadic rationals, and a
//! Monte Carlo agreement harness.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::protocol::{default_threshold, ProbabilisticProtocol, ProtocolError, ProtocolTree};
use crate::scalar::{format_rational, rational_from_f64, serde_rational, Rational};
use crate::zoo::{SetDescriptor, ZooError};

/// Standard normal draws from `ChaCha8`; substream `index` of `seed` gives
/// independent, reproducible sequences per trial.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    rng: ChaCha8Rng,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        GaussianSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        GaussianSampler { rng }
    }

    pub fn next_f64(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// `dim` draws, each converted exactly to a rational.
    pub fn sample(&mut self, dim: usize) -> Vec<Rational> {
        (0..dim).map(|_| rational_from_f64(self.next_f64()).expect("normal draws are finite")).collect()
    }
}

pub fn gaussian_rational_sampler(seed: u64, dim: usize) -> Vec<Rational> {
    GaussianSampler::new(seed).sample(dim)
}

pub fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    (d & (d - num_bigint::BigInt::one())).is_zero()
}

/// What to compare against the oracle.
#[derive(Debug, Clone, Copy)]
pub enum McSubject<'a> {
    Tree(&'a ProtocolTree),
    Family(&'a ProbabilisticProtocol),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub set: String,
    pub seed: u64,
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Trials whose route met an exact zero sign; logged, not counted as
    /// disagreements.
    pub zero_sign_trials: usize,
    #[serde(with = "serde_rational")]
    pub agreement_rate: Rational,
    pub first_disagreement: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error("protocol lives in dimension {protocol}, set in {set}")]
    Dimension { protocol: usize, set: usize },
}

enum Outcome {
    Agree,
    Disagree(Vec<Rational>),
    ZeroSign,
}

fn judge(subject: McSubject<'_>, set: &SetDescriptor, x: Vec<Rational>) -> Result<Outcome, McError> {
    let member = set.membership(&x)?;
    let (ok, zero) = match subject {
        McSubject::Tree(t) => {
            let tr = t.run_light(&x)?;
            (tr.verdict.accepted() == member, tr.has_zero_sign())
        }
        McSubject::Family(pp) => {
            let mut p = Rational::zero();
            let mut zero = false;
            for m in pp.members() {
                let tr = m.tree.run_light(&x)?;
                zero |= tr.has_zero_sign();
                if tr.verdict.accepted() {
                    p += &m.weight;
                }
            }
            let threshold = default_threshold();
            let correct = if member { p > threshold } else { Rational::one() - p > threshold };
            (correct, zero)
        }
    };
    Ok(match (ok, zero) {
        (true, _) => Outcome::Agree,
        (false, true) => Outcome::ZeroSign,
        (false, false) => Outcome::Disagree(x),
    })
}

/// Agreement of `subject` with `set` on `trials` Gaussian inputs; trial
/// `i` draws from substream `i` of `seed`.
pub fn monte_carlo(subject: McSubject<'_>, set: &SetDescriptor, trials: usize, seed: u64) -> Result<McReport, McError> {
    let dim = set.space().dim();
    let pdim = match subject {
        McSubject::Tree(t) => t.space().dim(),
        McSubject::Family(pp) => pp.space().dim(),
    };
    if pdim != dim {
        return Err(McError::Dimension { protocol: pdim, set: dim });
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| judge(subject, set, GaussianSampler::substream(seed, i).sample(dim)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = McReport {
        set: set.name().to_string(),
        seed,
        trials,
        agreements: 0,
        disagreements: 0,
        zero_sign_trials: 0,
        agreement_rate: Rational::zero(),
        first_disagreement: None,
    };
    for o in outcomes {
        match o {
            Outcome::Agree => report.agreements += 1,
            Outcome::ZeroSign => report.zero_sign_trials += 1,
            Outcome::Disagree(x) => {
                report.disagreements += 1;
                if report.first_disagreement.is_none() {
                    report.first_disagreement = Some(x.iter().map(format_rational).collect());
                }
            }
        }
    }
    let judged = report.agreements + report.disagreements;
    report.agreement_rate = if judged == 0 {
        Rational::one()
    } else {
        Rational::new((report.agreements as i64).into(), (judged as i64).into())
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::build_polyhedron_det;

    #[test]
    fn deterministic_and_dyadic() {
        let a = gaussian_rational_sampler(42, 8);
        assert_eq!(a, gaussian_rational_sampler(42, 8));
        assert_ne!(a, gaussian_rational_sampler(43, 8));
        assert!(a.iter().all(is_dyadic));
        assert_ne!(GaussianSampler::substream(1, 0).sample(3), GaussianSampler::substream(1, 1).sample(3));
    }

    #[test]
    fn sample_mean() {
        let mut s = GaussianSampler::new(7);
        let n = 100_000;
        let mean = (0..n).map(|_| s.next_f64()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn harness_agrees_on_zoo_protocol() {
        let t = build_polyhedron_det(2).unwrap();
        let set = SetDescriptor::PolyhedronS { n: 2 };
        let r = monte_carlo(McSubject::Tree(&t), &set, 200, 5).unwrap();
        assert_eq!(r.agreements, 200);
        assert_eq!(r.agreement_rate, Rational::one());
        assert_eq!(r, monte_carlo(McSubject::Tree(&t), &set, 200, 5).unwrap());
    }
}
