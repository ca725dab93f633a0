use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{ProtocolError, ProtocolTree};
use crate::infinitesimal::{SignPoint, TermOrder};
use crate::poly::VarSpace;
use crate::scalar::{rational, Rational, Scalar};

/// Required per-input probability of a correct answer.
pub const DEFAULT_THRESHOLD: (i64, i64) = (2, 3);

pub fn default_threshold() -> Rational {
    rational(DEFAULT_THRESHOLD.0, DEFAULT_THRESHOLD.1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member<C: Scalar = Rational> {
    pub weight: Rational,
    pub tree: ProtocolTree<C>,
}

/// A finite family of deterministic protocols with exact weights summing
/// to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilisticProtocol<C: Scalar = Rational> {
    members: Vec<Member<C>>,
}

impl<C: Scalar> ProbabilisticProtocol<C> {
    pub fn new(members: Vec<Member<C>>) -> Result<Self, ProtocolError> {
        let first = members.first().ok_or(ProtocolError::EmptyFamily)?;
        let space = first.tree.space();
        let mut total = Rational::zero();
        for (i, m) in members.iter().enumerate() {
            if !m.weight.is_positive() {
                return Err(ProtocolError::Weights(format!("member {i} has weight {}", m.weight)));
            }
            if m.tree.space() != space {
                return Err(ProtocolError::MemberSpace);
            }
            total += &m.weight;
        }
        if !total.is_one() {
            return Err(ProtocolError::Weights(format!("weights sum to {total}, not 1")));
        }
        Ok(ProbabilisticProtocol { members })
    }

    /// Equal weights `1/k`.
    pub fn uniform(trees: Vec<ProtocolTree<C>>) -> Result<Self, ProtocolError> {
        let k = trees.len() as i64;
        if k == 0 {
            return Err(ProtocolError::EmptyFamily);
        }
        Self::new(trees.into_iter().map(|tree| Member { weight: rational(1, k), tree }).collect())
    }

    pub fn members(&self) -> &[Member<C>] {
        &self.members
    }

    pub fn space(&self) -> VarSpace {
        self.members[0].tree.space()
    }

    /// Largest member depth.
    pub fn depth(&self) -> Result<usize, ProtocolError> {
        self.members.iter().map(|m| m.tree.depth()).try_fold(0, |acc, d| Ok(acc.max(d?)))
    }

    pub fn validate(&self) -> Vec<(usize, super::Violation)> {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.tree.validate().into_iter().map(move |v| (i, v)))
            .collect()
    }

    fn weighted(&self, verdicts: Vec<bool>) -> Rational {
        // exact sum, member order
        self.members
            .iter()
            .zip(verdicts)
            .filter(|(_, accepted)| *accepted)
            .fold(Rational::zero(), |acc, (m, _)| acc + &m.weight)
    }

    /// Exact `sum_i w_i [member i accepts input]`.
    pub fn acceptance_probability(&self, input: &[C]) -> Result<Rational, ProtocolError> {
        let verdicts = self
            .members
            .par_iter()
            .map(|m| m.tree.accepts(input))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.weighted(verdicts))
    }
}

impl ProbabilisticProtocol<Rational> {
    pub fn acceptance_probability_at(
        &self,
        point: &SignPoint,
        order: &TermOrder,
    ) -> Result<Rational, ProtocolError> {
        let verdicts = self
            .members
            .par_iter()
            .map(|m| Ok(m.tree.run_infinitesimal(point, order)?.verdict.accepted()))
            .collect::<Result<Vec<_>, ProtocolError>>()?;
        Ok(self.weighted(verdicts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::protocol::{Child, Party, ProtocolNode, Verdict};

    fn constant_tree(accept: bool) -> ProtocolTree {
        let s = VarSpace::xy(1, 1);
        let n = ProtocolNode::new(0, Party::X, Polynomial::one(s))
            .with_branch(vec![], Child::Leaf(Verdict::from_bool(accept)));
        ProtocolTree::validated(s, 0, [n]).unwrap()
    }

    #[test]
    fn weights_must_sum_to_one() {
        let m = |w| Member { weight: w, tree: constant_tree(true) };
        assert!(matches!(
            ProbabilisticProtocol::new(vec![m(rational(1, 3)), m(rational(1, 3))]),
            Err(ProtocolError::Weights(_))
        ));
        assert!(matches!(
            ProbabilisticProtocol::new(vec![m(rational(3, 2)), m(rational(-1, 2))]),
            Err(ProtocolError::Weights(_))
        ));
        assert!(matches!(ProbabilisticProtocol::<Rational>::new(vec![]), Err(ProtocolError::EmptyFamily)));
    }

    #[test]
    fn mixture_probability() {
        let pp = ProbabilisticProtocol::new(vec![
            Member { weight: rational(1, 3), tree: constant_tree(true) },
            Member { weight: rational(2, 3), tree: constant_tree(false) },
        ])
        .unwrap();
        let x = [Rational::zero(), Rational::zero()];
        assert_eq!(pp.acceptance_probability(&x).unwrap(), rational(1, 3));
        assert_eq!(pp.depth().unwrap(), 1);
    }
}
