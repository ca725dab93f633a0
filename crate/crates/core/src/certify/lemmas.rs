use num_traits::One;
use serde::Serialize;

use super::{cc_lower_bound, CertifyError, RankCertificate, RankOptions};
use crate::infinitesimal::{change_frame, least_term, TermOrder};
use crate::linalg::rank;
use crate::poly::{Frame, Polynomial, VarSpace};
use crate::scalar::{integer, Rational};

/// `f = X_1 Y_1 + ... + X_n Y_n`.
pub fn inner_product(n: usize) -> Polynomial {
    let s = VarSpace::xy(n, n);
    (0..n).fold(Polynomial::zero(s), |acc, i| &acc + &(&Polynomial::var(s, i) * &Polynomial::var(s, n + i)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorCheck {
    pub n: usize,
    pub m: u32,
    /// `n - 3`, floored at zero.
    pub bound: usize,
    pub holds: bool,
    pub certificate: RankCertificate,
}

/// Certifies `rk H(f^m h) >= n - 3` for `h` not a multiple of `f`.
pub fn check_divisor_lemma(n: usize, m: u32, h: &Polynomial, opts: &RankOptions) -> Result<DivisorCheck, CertifyError> {
    let f = inner_product(n);
    if h.space() != f.space() {
        return Err(CertifyError::Precondition(format!("h must live in {}, got {}", f.space(), h.space())));
    }
    let order = TermOrder::default_for(2 * n);
    if f.divides(h, &order)? {
        return Err(CertifyError::MultipleOfF);
    }
    let g = &f.pow(m) * h;
    let certificate = cc_lower_bound(&g, opts)?;
    let bound = n.saturating_sub(3);
    Ok(DivisorCheck { n, m, bound, holds: certificate.claimed_rank >= bound, certificate })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentRank {
    pub s: usize,
    pub rank: usize,
    pub vectors: Vec<Vec<u32>>,
    pub within_bound: bool,
}

/// Rank of the exponent vectors of `lt(G_j(g_1, ..., g_s))`.
pub fn exponent_rank(inner: &[Polynomial], outer: &[Polynomial], order: &TermOrder) -> Result<ExponentRank, CertifyError> {
    let s = inner.len();
    let space = inner
        .first()
        .map(Polynomial::space)
        .ok_or_else(|| CertifyError::Precondition("no inner polynomials".to_string()))?;
    let mut vectors = Vec::with_capacity(outer.len());
    for (j, g) in outer.iter().enumerate() {
        let composed = g.compose_into(space, inner)?;
        if composed.is_zero() {
            return Err(CertifyError::ZeroComposition(j));
        }
        vectors.push(least_term(&composed, order)?.exponent.exponents().to_vec());
    }
    let matrix: Vec<Vec<Rational>> =
        vectors.iter().map(|v| v.iter().map(|&e| integer(i64::from(e))).collect()).collect();
    let rank = rank(&matrix);
    Ok(ExponentRank { s, rank, vectors, within_bound: rank <= s })
}

/// `M_ii = l_i (l_i - 1)`, `M_ij = l_i l_j`.
pub fn m_matrix(l: &[u64]) -> Vec<Vec<Rational>> {
    let l: Vec<Rational> = l.iter().map(|&v| integer(v as i64)).collect();
    (0..l.len())
        .map(|i| {
            (0..l.len())
                .map(|j| if i == j { &l[i] * (&l[i] - Rational::one()) } else { &l[i] * &l[j] })
                .collect()
        })
        .collect()
}

/// `det M = (-1)^{k+1} l_1 ... l_k (l_1 + ... + l_k - 1)`.
pub fn m_matrix_det(l: &[u64]) -> Rational {
    let k = l.len();
    let product: Rational = l.iter().map(|&v| integer(v as i64)).product();
    let sum: Rational = l.iter().map(|&v| integer(v as i64)).sum();
    let value = product * (sum - Rational::one());
    if k % 2 == 0 {
        -value
    } else {
        value
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorCheck {
    pub k: usize,
    pub least_exponent: Vec<u32>,
    pub holds: bool,
    pub certificate: RankCertificate,
}

/// For `P` in the `XZ` frame with `Z_1 ... Z_k | lt(P)`, certifies that the
/// mixed Hessian of `P` in `XY` coordinates has rank at least `k`.
pub fn minor_lemma_check(p: &Polynomial, k: usize, opts: &RankOptions) -> Result<MinorCheck, CertifyError> {
    let space = p.space();
    if space.frame() != Frame::XZ {
        return Err(CertifyError::Frame { expected: Frame::XZ, got: space.frame() });
    }
    let n = space.n_x();
    if k <= 1 {
        return Err(CertifyError::Precondition(format!("the lemma needs k > 1, got {k}")));
    }
    if k > n {
        return Err(CertifyError::Precondition(format!("k = {k} exceeds n = {n}")));
    }
    let lt = least_term(p, &TermOrder::default_for(2 * n))?;
    let e = lt.exponent.exponents().to_vec();
    if let Some(i) = (0..k).find(|&i| e[n + i] == 0) {
        return Err(CertifyError::Precondition(format!("Z{} does not divide lt(P)", i + 1)));
    }
    let certificate = cc_lower_bound(&change_frame(p, Frame::XY)?, opts)?;
    Ok(MinorCheck { k, least_exponent: e, holds: certificate.claimed_rank >= k, certificate })
}
