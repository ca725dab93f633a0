use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{cc_lower_bound, CertifyError, RankCertificate, RankOptions};
use crate::infinitesimal::{change_frame, least_term, SignPoint, TermOrder};
use crate::poly::Frame;
use crate::protocol::{default_threshold, ProbabilisticProtocol};
use crate::scalar::{serde_rational, serde_rational_vec, Rational};
use crate::zoo::{fooling_points, SetDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberRow {
    pub member: usize,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    pub correct_u: bool,
    /// Correctness on each test point, in order.
    pub correct: Vec<bool>,
    pub correct_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectedMember {
    pub member: usize,
    pub depth: usize,
    pub path_product: String,
    /// Exponent vector of `lt` of the path product in the `XZ` frame;
    /// absent when the path product vanishes.
    pub least_exponent: Option<Vec<u32>>,
    /// 1-based indices `i` with `Z_i | lt(path product)`.
    pub divisible_z: Vec<usize>,
    pub certificate: RankCertificate,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub target: String,
    pub n: usize,
    pub u: SignPoint,
    pub points: Vec<SignPoint>,
    pub table: Vec<MemberRow>,
    /// Weighted correctness at `u`, then at each test point.
    #[serde(with = "serde_rational_vec")]
    pub weighted_correctness: Vec<Rational>,
    /// Positions (0 = `u`) where weighted correctness is at most 2/3.
    pub premise_violations: Vec<usize>,
    pub selected: Option<SelectedMember>,
    pub conclusion: String,
}

/// Runs every member of `pp` at `u` and the `u_i` (target S) or `u_i^(0)`
/// (arrangement target), in `XZ` coordinates, and extracts the rank
/// evidence from a member that is right on `u` and on at least half of the
/// test points.
pub fn hyperplane_audit(
    pp: &ProbabilisticProtocol,
    target: &SetDescriptor,
    order: &TermOrder,
    opts: &RankOptions,
) -> Result<AuditReport, CertifyError> {
    let n = match target {
        SetDescriptor::PolyhedronS { n } | SetDescriptor::Arrangement { n, .. } => *n,
        other => {
            return Err(CertifyError::Precondition(format!("audit targets S or an arrangement, not {}", other.name())));
        }
    };
    let space = pp.space();
    if space.n_x() != n || space.n_y() != n {
        return Err(CertifyError::Precondition(format!("family lives in {space}, target needs n_x = n_y = {n}")));
    }
    let fp = fooling_points(n);
    let points = if matches!(target, SetDescriptor::PolyhedronS { .. }) { fp.flipped } else { fp.zeroed };
    let u = fp.u;
    let all: Vec<&SignPoint> = std::iter::once(&u).chain(&points).collect();
    let expected = all
        .iter()
        .map(|p| target.membership_at_signpoint(p, order))
        .collect::<Result<Vec<bool>, _>>()?;

    let table = pp
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let correct = all
                .iter()
                .zip(&expected)
                .map(|(p, &e)| Ok(m.tree.run_infinitesimal(p, order)?.verdict.accepted() == e))
                .collect::<Result<Vec<bool>, CertifyError>>()?;
            Ok(MemberRow {
                member: i,
                weight: m.weight.clone(),
                correct_u: correct[0],
                correct_count: correct[1..].iter().filter(|&&c| c).count(),
                correct: correct[1..].to_vec(),
            })
        })
        .collect::<Result<Vec<_>, CertifyError>>()?;

    let weighted_correctness: Vec<Rational> = (0..all.len())
        .map(|k| {
            table
                .iter()
                .filter(|r| if k == 0 { r.correct_u } else { r.correct[k - 1] })
                .fold(Rational::zero(), |acc, r| acc + &r.weight)
        })
        .collect();
    let threshold = default_threshold();
    let premise_violations: Vec<usize> =
        weighted_correctness.iter().enumerate().filter(|(_, w)| **w <= threshold).map(|(k, _)| k).collect();

    let needed = n.div_ceil(2);
    let selected = match table.iter().find(|r| r.correct_u && r.correct_count >= needed) {
        Some(row) => Some(select(pp, row.member, &u, order, opts)?),
        None => None,
    };

    let mut conclusion = match &selected {
        Some(s) => format!(
            "member {} (depth {}) is correct on u and on {} of {} test points; the mixed Hessian of its path product has rank >= {}, so its depth is at least {}: {}",
            s.member,
            s.depth,
            table[s.member].correct_count,
            points.len(),
            s.certificate.claimed_rank,
            s.certificate.claimed_rank,
            if s.consistent { "consistent" } else { "inconsistent" }
        ),
        None => format!("no member is correct on u and on at least {needed} of {} test points", points.len()),
    };
    if !premise_violations.is_empty() {
        let names: Vec<String> =
            premise_violations.iter().map(|&k| if k == 0 { "u".to_string() } else { format!("u{k}") }).collect();
        conclusion.push_str(&format!(
            "; premise violated: weighted correctness <= {threshold} at {}, the family does not recognize the target",
            names.join(", ")
        ));
    }
    Ok(AuditReport {
        target: target.name().to_string(),
        n,
        u,
        points,
        table,
        weighted_correctness,
        premise_violations,
        selected,
        conclusion,
    })
}

fn select(
    pp: &ProbabilisticProtocol,
    member: usize,
    u: &SignPoint,
    order: &TermOrder,
    opts: &RankOptions,
) -> Result<SelectedMember, CertifyError> {
    let tree = &pp.members()[member].tree;
    let n = tree.space().n_x();
    let depth = tree.depth()?;
    let product = tree.run_infinitesimal(u, order)?.path_product()?;
    let (least_exponent, divisible_z) = if product.is_zero() {
        (None, vec![])
    } else {
        let lt = least_term(&change_frame(&product, Frame::XZ)?, order)?;
        let e = lt.exponent.exponents().to_vec();
        let z = (0..n).filter(|&i| e[n + i] > 0).map(|i| i + 1).collect();
        (Some(e), z)
    };
    let certificate = cc_lower_bound(&product, opts)?;
    Ok(SelectedMember {
        member,
        depth,
        path_product: product.to_string(),
        least_exponent,
        divisible_z,
        consistent: certificate.claimed_rank <= depth,
        certificate,
    })
}
