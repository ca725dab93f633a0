//! Lower-bound certificates: Hessian and Jacobian matrices, generic rank
//! with recheckable witnesses, the divisor, exponent and minor lemmas, the
//! orthant adversary and the hyperplane audit.

mod adversary;
mod audit;
mod lemmas;

pub use adversary::{orthant_adversary, AdversaryOutcome, FoolingReport};
pub use audit::{hyperplane_audit, AuditReport, MemberRow, SelectedMember};
pub use lemmas::{
    check_divisor_lemma, exponent_rank, inner_product, m_matrix, m_matrix_det, minor_lemma_check,
    DivisorCheck, ExponentRank, MinorCheck,
};

use std::ops::Range;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infinitesimal::{InfinitesimalError, TermOrder};
use crate::linalg::{determinant, determinant_by_expansion, rank_profile};
use crate::poly::{Frame, PolyError, Polynomial, VarSpace};
use crate::protocol::ProtocolError;
use crate::scalar::{serde_rational, serde_rational_vec, Rational};
use crate::zoo::ZooError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("expected a polynomial in the {expected} frame, got {got}")]
    Frame { expected: Frame, got: Frame },
    #[error("matrix is not rectangular")]
    Ragged,
    #[error("matrix entries live in different spaces")]
    MixedSpaces,
    #[error("matrix shapes {0:?} and {1:?} do not multiply")]
    Shape((usize, usize), (usize, usize)),
    #[error("h is a multiple of f")]
    MultipleOfF,
    #[error("composition {0} is identically zero, its least term is undefined")]
    ZeroComposition(usize),
    #[error("{0}")]
    Precondition(String),
    #[error("adversary verification failed: {0}")]
    Verification(String),
    #[error("empty protocol family")]
    EmptyFamily,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Infinitesimal(#[from] InfinitesimalError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

/// Rectangular matrix of polynomials over one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    space: VarSpace,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(space: VarSpace, entries: Vec<Vec<Polynomial>>) -> Result<Self, CertifyError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(CertifyError::Ragged);
        }
        if entries.iter().flatten().any(|p| p.space() != space) {
            return Err(CertifyError::MixedSpaces);
        }
        Ok(PolyMatrix { space, rows, cols, entries })
    }

    pub fn zero(space: VarSpace, rows: usize, cols: usize) -> Self {
        PolyMatrix { space, rows, cols, entries: vec![vec![Polynomial::zero(space); cols]; rows] }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols).map(|j| (0..self.rows).map(|i| self.entries[i][j].clone()).collect()).collect();
        PolyMatrix { space: self.space, rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<Self, CertifyError> {
        if self.cols != other.rows {
            return Err(CertifyError::Shape((self.rows, self.cols), (other.rows, other.cols)));
        }
        if self.space != other.space {
            return Err(CertifyError::MixedSpaces);
        }
        let entries = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        (0..self.cols).fold(Polynomial::zero(self.space), |acc, k| {
                            &acc + &(&self.entries[i][k] * &other.entries[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(PolyMatrix { space: self.space, rows: self.rows, cols: other.cols, entries })
    }

    /// Entrywise composition with `args` (one per variable of the space).
    pub fn compose_into(&self, space: VarSpace, args: &[Polynomial]) -> Result<Self, CertifyError> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.compose_into(space, args)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix { space, rows: self.rows, cols: self.cols, entries })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>, CertifyError> {
        Ok(self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?)
    }
}

/// `(d^2 g / dV_i dV_j)` for `i` in `first`, `j` in `second`.
pub fn mixed_hessian(g: &Polynomial, first: Range<usize>, second: Range<usize>) -> Result<PolyMatrix, CertifyError> {
    let second: Vec<usize> = second.collect();
    let entries = first
        .map(|i| {
            let gi = g.derivative(i)?;
            second.iter().map(|&j| gi.derivative(j)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    let rows = entries.len();
    Ok(PolyMatrix { space: g.space(), rows, cols: second.len(), entries })
}

/// The `n_x x n_y` matrix of mixed partials `d^2 g / dX_i dY_j`.
pub fn hessian(g: &Polynomial) -> Result<PolyMatrix, CertifyError> {
    let s = g.space();
    if s.frame() != Frame::XY {
        return Err(CertifyError::Frame { expected: Frame::XY, got: s.frame() });
    }
    mixed_hessian(g, 0..s.n_x(), s.n_x()..s.dim())
}

/// `(d poly_j / d var_i)`: one row per variable, one column per polynomial.
pub fn jacobian(space: VarSpace, polys: &[Polynomial], vars: &[usize]) -> Result<PolyMatrix, CertifyError> {
    if polys.iter().any(|p| p.space() != space) {
        return Err(CertifyError::MixedSpaces);
    }
    let entries = vars
        .iter()
        .map(|&v| polys.iter().map(|p| p.derivative(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix { space, rows: vars.len(), cols: polys.len(), entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOptions {
    pub trials: usize,
    pub seed: u64,
    /// Coordinates are drawn from `[-bound, bound] ∩ (1/denominator) Z`.
    pub bound: i64,
    pub denominator: i64,
    /// Also compute the rank over the function field by fraction-free
    /// elimination, when `min(rows, cols) <= EXACT_RANK_CAP`.
    pub exact: bool,
}

pub const EXACT_RANK_CAP: usize = 6;

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { trials: 4, seed: 0, bound: 100, denominator: 1, exact: false }
    }
}

impl RankOptions {
    pub fn with_seed(seed: u64) -> Self {
        RankOptions { seed, ..Default::default() }
    }
}

/// A nonzero minor of a polynomial matrix at a rational point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub claimed_rank: usize,
    #[serde(with = "serde_rational_vec")]
    pub witness_point: Vec<Rational>,
    pub row_set: Vec<usize>,
    pub col_set: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub minor_value: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_rank: Option<usize>,
}

impl RankCertificate {
    /// Re-evaluates the minor at the witness point by cofactor expansion.
    pub fn recheck(&self, m: &PolyMatrix) -> bool {
        let k = self.claimed_rank;
        let strictly_increasing = |v: &[usize], bound: usize| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < bound);
        if self.row_set.len() != k || self.col_set.len() != k || self.minor_value.is_zero() {
            return false;
        }
        if !strictly_increasing(&self.row_set, m.rows) || !strictly_increasing(&self.col_set, m.cols) {
            return false;
        }
        if self.witness_point.len() != m.space.dim() {
            return false;
        }
        let minor: Option<Vec<Vec<Rational>>> = self
            .row_set
            .iter()
            .map(|&i| self.col_set.iter().map(|&j| m.entries[i][j].evaluate(&self.witness_point).ok()).collect())
            .collect();
        match minor {
            Some(minor) => determinant_by_expansion(&minor) == self.minor_value,
            None => false,
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, opts: &RankOptions) -> Vec<Rational> {
    let den = opts.denominator.max(1);
    let bound = opts.bound.max(1) * den;
    (0..dim)
        .map(|_| Rational::new(rng.random_range(-bound..=bound).into(), den.into()))
        .collect()
}

/// Lower bound for the rank of `m` over the function field: the largest
/// rank seen at seeded random points, with a witness minor.
pub fn generic_rank(m: &PolyMatrix, opts: &RankOptions) -> RankCertificate {
    let full = m.rows.min(m.cols);
    let dim = m.space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = RankCertificate {
        claimed_rank: 0,
        witness_point: vec![Rational::zero(); dim],
        row_set: vec![],
        col_set: vec![],
        minor_value: Rational::one(),
        exact_rank: None,
    };
    if full > 0 && !m.is_zero() {
        for _ in 0..opts.trials.max(1) {
            let point = random_point(&mut rng, dim, opts);
            let values = m.evaluate(&point).expect("point has the matrix dimension");
            let profile = rank_profile(&values);
            if profile.rank > best.claimed_rank {
                let minor = crate::linalg::submatrix(&values, &profile.rows, &profile.cols);
                best = RankCertificate {
                    claimed_rank: profile.rank,
                    witness_point: point,
                    row_set: profile.rows,
                    col_set: profile.cols,
                    minor_value: determinant(&minor),
                    exact_rank: None,
                };
            }
            if best.claimed_rank == full {
                break;
            }
        }
    }
    if opts.exact && full <= EXACT_RANK_CAP {
        best.exact_rank = Some(symbolic_rank(m));
    }
    best
}

/// Rank over the rational function field by fraction-free elimination.
pub fn symbolic_rank(m: &PolyMatrix) -> usize {
    let order = TermOrder::default_for(m.space.dim());
    let mut a = m.entries.clone();
    let mut prev = Polynomial::one(m.space);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m.rows {
            for j in c + 1..m.cols {
                let num = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                let (q, rem) = num.divide_exact(&prev, &order).expect("nonzero pivot");
                debug_assert!(rem.is_zero(), "fraction-free step must divide exactly");
                a[i][j] = q;
            }
            a[i][c] = Polynomial::zero(m.space);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// `rk H(g)` at random points: a lower bound for the communication
/// complexity of `g`.
pub fn cc_lower_bound(g: &Polynomial, opts: &RankOptions) -> Result<RankCertificate, CertifyError> {
    Ok(generic_rank(&hessian(g)?, opts))
}
