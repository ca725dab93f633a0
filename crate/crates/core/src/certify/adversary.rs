use serde::Serialize;

use super::CertifyError;
use crate::gf2::{nullspace, smallest_nonzero, BitRow};
use crate::infinitesimal::{least_term, SignPoint, TermOrder};
use crate::poly::Frame;
use crate::protocol::{ProtocolError, ProtocolTree, Sign, Transcript, Verdict};
use crate::zoo::SetDescriptor;

/// Two sign points the protocol cannot tell apart although exactly one of
/// them lies in the orthant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoolingReport {
    pub flip_vector: Vec<u8>,
    pub point_a: SignPoint,
    pub point_b: SignPoint,
    pub exponent_vectors: Vec<Vec<u32>>,
    pub transcripts_identical: bool,
    pub memberships: (bool, bool),
    pub verdict: Verdict,
    pub signs: Vec<Vec<Sign>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum AdversaryOutcome {
    /// The protocol already errs at the all-positive point.
    DirectMisclassification { point: SignPoint, verdict: Verdict, member: bool },
    Fooling(FoolingReport),
    /// The exponent vectors span `GF(2)^n`; no fooling pair of this kind.
    None,
}

/// Exponent vectors of the least terms of the nonzero composed tests on
/// the route of `t`. The least term of a product is the product of the
/// factors' least terms, so the factors' vectors are summed.
fn route_exponents(t: &Transcript, order: &TermOrder) -> Result<Vec<Vec<u32>>, CertifyError> {
    let mut out = Vec::new();
    for node in t.composed_factors()? {
        'test: for factors in node {
            let mut k = vec![0u32; t.space.dim()];
            for f in &factors {
                if f.is_zero() {
                    continue 'test;
                }
                for (acc, e) in k.iter_mut().zip(least_term(f, order)?.exponent.exponents()) {
                    *acc += e;
                }
            }
            out.push(k);
        }
    }
    Ok(out)
}

fn orthant_of(tree: &ProtocolTree) -> SetDescriptor {
    let s = tree.space();
    SetDescriptor::Orthant { n_x: s.n_x(), n_y: s.n_y() }
}

fn flip(u: &SignPoint, m: &[u8]) -> SignPoint {
    m.iter().enumerate().fold(u.clone(), |p, (i, &b)| if b == 1 { p.with_sign(i, -1) } else { p })
}

fn orthogonal(m: &[u8], vectors: &[Vec<u32>]) -> bool {
    vectors.iter().all(|k| k.iter().zip(m).map(|(&e, &b)| e * u32::from(b)).sum::<u32>() % 2 == 0)
}

/// Looks for a fooling pair against a protocol claiming to recognize the
/// orthant `{x > 0, y > 0}`.
pub fn orthant_adversary(tree: &ProtocolTree, order: &TermOrder) -> Result<AdversaryOutcome, CertifyError> {
    let violations = tree.validate();
    if !violations.is_empty() {
        return Err(ProtocolError::Invalid(violations).into());
    }
    let dim = tree.space().dim();
    let u = SignPoint::all_positive(dim, Frame::XY);
    let ta = tree.run_infinitesimal(&u, order)?;
    if ta.verdict != Verdict::Accept {
        return Ok(AdversaryOutcome::DirectMisclassification { point: u, verdict: ta.verdict, member: true });
    }
    let vectors = route_exponents(&ta, order)?;
    let rows: Vec<BitRow> = vectors.iter().map(|k| BitRow::from_parities(k)).collect();
    let Some(m) = smallest_nonzero(&nullspace(&rows, dim)) else {
        return Ok(AdversaryOutcome::None);
    };
    let m: Vec<u8> = m.to_bits().into_iter().map(u8::from).collect();
    let point_b = flip(&u, &m);
    let tb = tree.run_infinitesimal(&point_b, order)?;
    let set = orthant_of(tree);
    let memberships = (set.membership_at_signpoint(&u, order)?, set.membership_at_signpoint(&point_b, order)?);
    let identical = ta.same_route(&tb);
    if !identical {
        return Err(CertifyError::Verification(format!("transcripts at {u} and {point_b} differ")));
    }
    if memberships.0 == memberships.1 {
        return Err(CertifyError::Verification(format!("{u} and {point_b} have the same membership")));
    }
    if !orthogonal(&m, &vectors) {
        return Err(CertifyError::Verification("flip vector is not orthogonal to the exponent vectors".to_string()));
    }
    Ok(AdversaryOutcome::Fooling(FoolingReport {
        flip_vector: m,
        point_a: u,
        point_b,
        exponent_vectors: vectors,
        transcripts_identical: identical,
        memberships,
        verdict: ta.verdict,
        signs: ta.signs,
    }))
}

impl FoolingReport {
    /// Rechecks the report against `tree` from scratch: the exponent
    /// vectors are recomputed, both points rerun and memberships taken from
    /// the orthant oracle.
    pub fn recheck(&self, tree: &ProtocolTree, order: &TermOrder) -> Result<(), String> {
        let err = |e: &dyn std::fmt::Display| e.to_string();
        if self.flip_vector.iter().all(|&b| b == 0) {
            return Err("flip vector is zero".to_string());
        }
        let dim = tree.space().dim();
        if self.point_a != SignPoint::all_positive(dim, Frame::XY) || self.point_b != flip(&self.point_a, &self.flip_vector) {
            return Err("points do not match the flip vector".to_string());
        }
        let ta = tree.run_infinitesimal(&self.point_a, order).map_err(|e| err(&e))?;
        let tb = tree.run_infinitesimal(&self.point_b, order).map_err(|e| err(&e))?;
        if !ta.same_route(&tb) {
            return Err("transcripts differ".to_string());
        }
        let vectors = route_exponents(&ta, order).map_err(|e| err(&e))?;
        if vectors != self.exponent_vectors || !orthogonal(&self.flip_vector, &vectors) {
            return Err("flip vector is not orthogonal to the exponent vectors".to_string());
        }
        let set = orthant_of(tree);
        let a = set.membership_at_signpoint(&self.point_a, order).map_err(|e| err(&e))?;
        let b = set.membership_at_signpoint(&self.point_b, order).map_err(|e| err(&e))?;
        if a == b || (a, b) != self.memberships {
            return Err("memberships do not differ".to_string());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, VarSpace};
    use crate::protocol::{Child, Party, ProtocolNode};
    use crate::zoo::build_orthant_det;

    fn depth_one(test: Polynomial) -> ProtocolTree {
        let s = VarSpace::xy(1, 1);
        let reject = Child::Leaf(Verdict::Reject);
        let n = ProtocolNode::new(0, Party::X, Polynomial::var(s, 0))
            .with_test(test)
            .with_branch(vec![Sign::Gt], Child::Leaf(Verdict::Accept))
            .with_branch(vec![Sign::Eq], reject)
            .with_branch(vec![Sign::Lt], reject);
        ProtocolTree::validated(s, 0, [n]).unwrap()
    }

    fn fooling(tree: &ProtocolTree) -> FoolingReport {
        let order = TermOrder::default_for(tree.space().dim());
        match orthant_adversary(tree, &order).unwrap() {
            AdversaryOutcome::Fooling(r) => {
                r.recheck(tree, &order).unwrap();
                r
            }
            other => panic!("expected a fooling pair, got {other:?}"),
        }
    }

    #[test]
    fn linear_test() {
        let q = VarSpace::formal(1);
        let r = fooling(&depth_one(Polynomial::var(q, 0)));
        assert_eq!(r.exponent_vectors, vec![vec![1, 0]]);
        assert_eq!(r.flip_vector, vec![0, 1]);
        assert_eq!(r.point_b.signs(), &[1, -1]);
        assert_eq!(r.memberships, (true, false));
    }

    #[test]
    fn square_test() {
        let q = VarSpace::formal(1);
        let r = fooling(&depth_one(Polynomial::var(q, 0).pow(2)));
        assert_eq!(r.exponent_vectors, vec![vec![2, 0]]);
        assert_eq!(r.flip_vector, vec![1, 0]);
        assert_eq!(r.point_b.signs(), &[-1, 1]);
    }

    #[test]
    fn full_depth_orthant_protocol() {
        for (nx, ny) in [(1, 1), (2, 1), (2, 3)] {
            let t = build_orthant_det(nx, ny).unwrap();
            let order = TermOrder::default_for(nx + ny);
            assert_eq!(orthant_adversary(&t, &order).unwrap(), AdversaryOutcome::None);
        }
    }

    #[test]
    fn direct_misclassification() {
        let q = VarSpace::formal(1);
        let t = depth_one(-&Polynomial::var(q, 0));
        let order = TermOrder::default_for(2);
        assert!(matches!(
            orthant_adversary(&t, &order).unwrap(),
            AdversaryOutcome::DirectMisclassification { member: true, verdict: Verdict::Reject, .. }
        ));
    }

    #[test]
    fn forged_report_fails_recheck() {
        let q = VarSpace::formal(1);
        let t = depth_one(Polynomial::var(q, 0));
        let mut r = fooling(&t);
        r.flip_vector = vec![1, 0];
        r.point_b = r.point_a.with_sign(0, -1);
        assert!(r.recheck(&t, &TermOrder::default_for(2)).is_err());
    }
}
