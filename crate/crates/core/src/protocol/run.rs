use serde::{Serialize, Serializer};

use super::{Child, NodeId, ProtocolError, ProtocolTree, Sign, TestPolynomial, Verdict};
use crate::infinitesimal::{change_frame, sign_at, SignPoint, TermOrder};
use crate::poly::{PolyError, Polynomial, VarSpace};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageValue<C: Scalar> {
    Exact(C),
    /// The value at an infinitesimal point; only its polynomial is known.
    Symbolic,
}

impl<C: Scalar> Serialize for MessageValue<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MessageValue::Exact(c) => s.serialize_str(&c.to_string()),
            MessageValue::Symbolic => s.serialize_str("symbolic"),
        }
    }
}

/// Record of one traversal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Transcript<C: Scalar = Rational> {
    pub space: VarSpace,
    pub path: Vec<NodeId>,
    pub values: Vec<MessageValue<C>>,
    pub signs: Vec<Vec<Sign>>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub messages: Vec<Polynomial<C>>,
    #[serde(skip)]
    pub tests: Vec<Vec<TestPolynomial<C>>>,
}

impl<C: Scalar> Transcript<C> {
    /// Testing polynomials along the path with `Q_k` replaced by the k-th
    /// message, one factor list per test, grouped by node.
    pub fn composed_factors(&self) -> Result<Vec<Vec<Vec<Polynomial<C>>>>, PolyError> {
        self.tests
            .iter()
            .enumerate()
            .map(|(i, tests)| {
                let messages = &self.messages[..=i];
                tests.iter().map(|t| t.compose_factors(self.space, messages)).collect()
            })
            .collect()
    }

    /// Composed testing polynomials, fully expanded, in path order.
    pub fn composed_tests(&self) -> Result<Vec<Polynomial<C>>, PolyError> {
        let mut out = Vec::new();
        for node in self.composed_factors()? {
            for factors in node {
                out.push(Polynomial::product(self.space, &factors)?);
            }
        }
        Ok(out)
    }

    /// Product of all composed testing polynomials along the path; `1` if
    /// the path has no tests.
    pub fn path_product(&self) -> Result<Polynomial<C>, PolyError> {
        let factors: Vec<Polynomial<C>> =
            self.composed_factors()?.into_iter().flatten().flatten().collect();
        Polynomial::product(self.space, &factors)
    }

    /// Same path and signs (message values are not compared).
    pub fn same_route(&self, other: &Transcript<C>) -> bool {
        self.path == other.path && self.signs == other.signs && self.verdict == other.verdict
    }

    pub fn has_zero_sign(&self) -> bool {
        self.signs.iter().flatten().any(|&s| s == Sign::Eq)
    }
}

impl<C: Scalar> ProtocolTree<C> {
    /// Walks from the root. With `record` unset, messages and tests are not
    /// kept and `node_signs` sees no messages.
    fn traverse<F>(&self, record: bool, mut node_signs: F) -> Result<Transcript<C>, ProtocolError>
    where
        F: FnMut(&super::ProtocolNode<C>, &[Polynomial<C>]) -> Result<(MessageValue<C>, Vec<Sign>), ProtocolError>,
    {
        let mut t = Transcript {
            space: self.space,
            path: Vec::new(),
            values: Vec::new(),
            signs: Vec::new(),
            verdict: Verdict::Reject,
            messages: Vec::new(),
            tests: Vec::new(),
        };
        let mut current = self.root;
        loop {
            if t.path.len() > self.nodes.len() {
                return Err(ProtocolError::Cycle);
            }
            let node = self.nodes.get(&current).ok_or(ProtocolError::UnknownNode(current))?;
            t.path.push(current);
            if record {
                t.messages.push(node.message.clone());
            }
            let (value, signs) = node_signs(node, &t.messages)?;
            let child = node
                .branches
                .get(&signs)
                .copied()
                .ok_or_else(|| ProtocolError::MissingBranch { node: current, signs: signs.clone() })?;
            t.values.push(value);
            t.signs.push(signs);
            if record {
                t.tests.push(node.tests.clone());
            }
            match child {
                Child::Leaf(v) => {
                    t.verdict = v;
                    return Ok(t);
                }
                Child::Node(next) => current = next,
            }
        }
    }

    /// Deterministic run on an exact input.
    pub fn run_rational(&self, input: &[C]) -> Result<Transcript<C>, ProtocolError> {
        self.run_exact(input, true)
    }

    /// Like `run_rational` but leaves `messages` and `tests` empty.
    pub fn run_light(&self, input: &[C]) -> Result<Transcript<C>, ProtocolError> {
        self.run_exact(input, false)
    }

    fn run_exact(&self, input: &[C], record: bool) -> Result<Transcript<C>, ProtocolError> {
        if input.len() != self.space.dim() {
            return Err(ProtocolError::InputLength { expected: self.space.dim(), got: input.len() });
        }
        let mut values: Vec<C> = Vec::new();
        self.traverse(record, |node, _| {
            let v = node.message.evaluate(input)?;
            values.push(v.clone());
            let signs = node
                .tests
                .iter()
                .map(|test| Ok(test.evaluate(&values)?.branch_sign()))
                .collect::<Result<Vec<_>, PolyError>>()?;
            Ok((MessageValue::Exact(v), signs))
        })
    }

    /// Verdict only.
    pub fn accepts(&self, input: &[C]) -> Result<bool, ProtocolError> {
        Ok(self.run_exact(input, false)?.verdict.accepted())
    }
}

impl ProtocolTree<Rational> {
    /// Run at a signed infinitesimal point. The point may be in the `XZ`
    /// frame, in which case composed tests are converted before taking
    /// signs.
    pub fn run_infinitesimal(
        &self,
        point: &SignPoint,
        order: &TermOrder,
    ) -> Result<Transcript<Rational>, ProtocolError> {
        if point.dim() != self.space.dim() {
            return Err(ProtocolError::InputLength { expected: self.space.dim(), got: point.dim() });
        }
        let space = self.space;
        self.traverse(true, |node, messages| {
            let mut signs = Vec::with_capacity(node.tests.len());
            for test in &node.tests {
                let mut sign = Sign::Gt;
                for factor in test.compose_factors(space, messages)? {
                    let factor = if point.frame() == space.frame() {
                        factor
                    } else {
                        change_frame(&factor, point.frame())?
                    };
                    sign = sign.mul(sign_at(&factor, point, order)?);
                    if sign == Sign::Eq {
                        break;
                    }
                }
                signs.push(sign);
            }
            Ok((MessageValue::Symbolic, signs))
        })
    }
}
