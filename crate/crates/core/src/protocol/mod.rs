//! Two-party protocol trees.
//!
//! Every internal node is owned by one party and carries a message
//! polynomial in that party's variables, plus testing polynomials in the
//! formal variables `Q_1..Q_r` standing for the messages sent along the path
//! so far (`r` is the node's depth, counting itself). The tuple of signs of
//! the tests selects the branch; leaves accept or reject.

mod probabilistic;
mod realify;
mod run;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infinitesimal::InfinitesimalError;
use crate::poly::{Frame, PolyError, Polynomial, VarSpace};
use crate::scalar::{FieldKind, Rational, Scalar};

pub use probabilistic::{Member, ProbabilisticProtocol, default_threshold, DEFAULT_THRESHOLD};
pub use realify::realify_input;
pub use run::{MessageValue, Transcript};

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "!=")]
    Ne,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Lt => "<",
            Sign::Eq => "=",
            Sign::Gt => ">",
            Sign::Ne => "!=",
        }
    }

    pub fn parse(text: &str) -> Option<Sign> {
        match text.trim() {
            "<" => Some(Sign::Lt),
            "=" => Some(Sign::Eq),
            ">" => Some(Sign::Gt),
            "!=" => Some(Sign::Ne),
            _ => None,
        }
    }

    /// Sign of a product of two real values.
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Eq, _) | (_, Sign::Eq) => Sign::Eq,
            (Sign::Ne, _) | (_, Sign::Ne) => Sign::Ne,
            (a, b) if a == b => Sign::Gt,
            _ => Sign::Lt,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn from_bool(accept: bool) -> Self {
        if accept { Verdict::Accept } else { Verdict::Reject }
    }

    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Child {
    Node(NodeId),
    Leaf(Verdict),
}

/// A testing polynomial, kept as a product of factors so that tests like
/// `prod (Q_i - Q_{n+j})` need not be expanded. A plain test has one factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestPolynomial<C: Scalar = Rational> {
    factors: Vec<Polynomial<C>>,
}

impl<C: Scalar> TestPolynomial<C> {
    /// Panics on an empty factor list.
    pub fn product(factors: Vec<Polynomial<C>>) -> Self {
        assert!(!factors.is_empty(), "a test needs at least one factor");
        TestPolynomial { factors }
    }

    pub fn factors(&self) -> &[Polynomial<C>] {
        &self.factors
    }

    pub fn is_factored(&self) -> bool {
        self.factors.len() > 1
    }

    /// Formal variables referenced by any factor.
    pub fn support(&self) -> BTreeSet<usize> {
        self.factors.iter().flat_map(|f| f.support()).collect()
    }

    pub fn arity(&self) -> usize {
        self.factors.iter().map(Polynomial::nvars).max().unwrap_or(0)
    }

    pub fn expand(&self) -> Result<Polynomial<C>, PolyError> {
        let k = self.arity();
        let space = VarSpace::formal(k);
        self.factors.iter().try_fold(Polynomial::one(space), |acc, f| acc.try_mul(&f.to_formal(k)?))
    }

    /// Value at the exchanged messages `values` (`values.len()` is the
    /// node depth).
    pub fn evaluate(&self, values: &[C]) -> Result<C, PolyError> {
        let mut acc = C::one();
        for f in &self.factors {
            let v = if f.nvars() <= values.len() {
                f.evaluate(&values[..f.nvars()])?
            } else {
                f.to_formal(values.len())?.evaluate(values)?
            };
            if v.is_zero() {
                return Ok(v);
            }
            acc = acc * v;
        }
        Ok(acc)
    }

    /// Each factor with `Q_k` replaced by `messages[k]`.
    pub fn compose_factors(
        &self,
        space: VarSpace,
        messages: &[Polynomial<C>],
    ) -> Result<Vec<Polynomial<C>>, PolyError> {
        self.factors
            .iter()
            .map(|f| {
                let f = if f.nvars() == messages.len() { f.clone() } else { f.to_formal(messages.len())? };
                f.compose_into(space, messages)
            })
            .collect()
    }
}

impl<C: Scalar> From<Polynomial<C>> for TestPolynomial<C> {
    fn from(p: Polynomial<C>) -> Self {
        TestPolynomial { factors: vec![p] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolNode<C: Scalar = Rational> {
    pub id: NodeId,
    pub party: Party,
    pub message: Polynomial<C>,
    pub tests: Vec<TestPolynomial<C>>,
    pub branches: BTreeMap<Vec<Sign>, Child>,
}

impl<C: Scalar> ProtocolNode<C> {
    pub fn new(id: NodeId, party: Party, message: Polynomial<C>) -> Self {
        ProtocolNode { id, party, message, tests: Vec::new(), branches: BTreeMap::new() }
    }

    pub fn with_test(mut self, test: impl Into<TestPolynomial<C>>) -> Self {
        self.tests.push(test.into());
        self
    }

    pub fn with_branch(mut self, signs: Vec<Sign>, child: Child) -> Self {
        self.branches.insert(signs, child);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ViolationKind {
    MissingRoot,
    FrameNotXY { frame: Frame },
    MessageSpace { space: VarSpace },
    PartyViolation { variable: String },
    ArityViolation { test: usize, variable: usize, depth: usize },
    BranchKeyLength { expected: usize, got: usize },
    SignAlphabet { sign: Sign },
    EmptyBranches,
    UnknownChild { child: NodeId },
    MultipleParents { parents: usize },
    RootHasParent,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub node: Option<NodeId>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = self.node {
            write!(f, "node {id}: ")?;
        }
        match &self.kind {
            ViolationKind::MissingRoot => write!(f, "root node does not exist"),
            ViolationKind::FrameNotXY { frame } => write!(f, "protocol frame must be XY, got {frame}"),
            ViolationKind::MessageSpace { space } => write!(f, "message lives in {space}"),
            ViolationKind::PartyViolation { variable } => {
                write!(f, "party-violation: message uses {variable}")
            }
            ViolationKind::ArityViolation { test, variable, depth } => write!(
                f,
                "arity-violation: test {test} references Q{} at depth {depth}",
                variable + 1
            ),
            ViolationKind::BranchKeyLength { expected, got } => {
                write!(f, "branch key has {got} signs, node has {expected} tests")
            }
            ViolationKind::SignAlphabet { sign } => write!(f, "sign {sign} not allowed for this field"),
            ViolationKind::EmptyBranches => write!(f, "node has no branches"),
            ViolationKind::UnknownChild { child } => write!(f, "branch to unknown node {child}"),
            ViolationKind::MultipleParents { parents } => write!(f, "node has {parents} parents"),
            ViolationKind::RootHasParent => write!(f, "root appears as a child"),
            ViolationKind::Unreachable => write!(f, "node is unreachable from the root"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("invalid protocol: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node}: no branch for sign tuple ({})", fmt_signs(.signs))]
    MissingBranch { node: NodeId, signs: Vec<Sign> },
    #[error("input has {got} coordinates, protocol expects {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("traversal did not terminate (cycle)")]
    Cycle,
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("probabilistic protocol has no members")]
    EmptyFamily,
    #[error("members do not share a variable space")]
    MemberSpace,
    #[error(transparent)]
    Infinitesimal(#[from] InfinitesimalError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn fmt_signs(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolTree<C: Scalar = Rational> {
    space: VarSpace,
    root: NodeId,
    nodes: BTreeMap<NodeId, ProtocolNode<C>>,
}

impl<C: Scalar> ProtocolTree<C> {
    /// Assembles a tree; structural checks are left to [`Self::validate`].
    pub fn new(
        space: VarSpace,
        root: NodeId,
        nodes: impl IntoIterator<Item = ProtocolNode<C>>,
    ) -> Result<Self, ProtocolError> {
        let mut map = BTreeMap::new();
        for node in nodes {
            let id = node.id;
            if map.insert(id, node).is_some() {
                return Err(ProtocolError::DuplicateNode(id));
            }
        }
        Ok(ProtocolTree { space, root, nodes: map })
    }

    /// Like [`Self::new`], but fails unless the tree is valid.
    pub fn validated(
        space: VarSpace,
        root: NodeId,
        nodes: impl IntoIterator<Item = ProtocolNode<C>>,
    ) -> Result<Self, ProtocolError> {
        let tree = Self::new(space, root, nodes)?;
        let violations = tree.validate();
        if violations.is_empty() { Ok(tree) } else { Err(ProtocolError::Invalid(violations)) }
    }

    pub fn field(&self) -> FieldKind {
        C::FIELD
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ProtocolNode<C>> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> Option<&ProtocolNode<C>> {
        self.nodes.get(&id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Depth (1-based) of every node reachable from the root, in BFS order.
    pub fn node_levels(&self) -> Vec<(NodeId, usize)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        if self.nodes.contains_key(&self.root) {
            queue.push_back((self.root, 1));
            seen.insert(self.root);
        }
        while let Some((id, level)) = queue.pop_front() {
            out.push((id, level));
            for child in self.nodes[&id].branches.values() {
                if let Child::Node(c) = *child {
                    if self.nodes.contains_key(&c) && seen.insert(c) {
                        queue.push_back((c, level + 1));
                    }
                }
            }
        }
        out
    }

    /// Every violated model invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let push = |out: &mut Vec<Violation>, node: Option<NodeId>, kind| out.push(Violation { node, kind });
        if self.space.frame() != Frame::XY {
            push(&mut out, None, ViolationKind::FrameNotXY { frame: self.space.frame() });
        }
        if !self.nodes.contains_key(&self.root) {
            push(&mut out, None, ViolationKind::MissingRoot);
        }
        let alphabet = C::sign_alphabet();
        let mut parents: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for node in self.nodes.values() {
            let id = Some(node.id);
            if node.message.space() != self.space {
                push(&mut out, id, ViolationKind::MessageSpace { space: node.message.space() });
            } else {
                let n_x = self.space.n_x();
                for v in node.message.support() {
                    let owned = match node.party {
                        Party::X => v < n_x,
                        Party::Y => v >= n_x,
                    };
                    if !owned {
                        push(&mut out, id, ViolationKind::PartyViolation { variable: self.space.var_name(v) });
                    }
                }
            }
            if node.branches.is_empty() {
                push(&mut out, id, ViolationKind::EmptyBranches);
            }
            for (key, child) in &node.branches {
                if key.len() != node.tests.len() {
                    push(
                        &mut out,
                        id,
                        ViolationKind::BranchKeyLength { expected: node.tests.len(), got: key.len() },
                    );
                }
                for s in key {
                    if !alphabet.contains(s) {
                        push(&mut out, id, ViolationKind::SignAlphabet { sign: *s });
                    }
                }
                if let Child::Node(c) = *child {
                    if !self.nodes.contains_key(&c) {
                        push(&mut out, id, ViolationKind::UnknownChild { child: c });
                    } else {
                        parents.entry(c).or_default().insert(node.id);
                    }
                }
            }
        }
        for (&child, from) in &parents {
            let count = from.len();
            if child == self.root {
                push(&mut out, Some(child), ViolationKind::RootHasParent);
            } else if count > 1 {
                push(&mut out, Some(child), ViolationKind::MultipleParents { parents: count });
            }
        }
        let levels = self.node_levels();
        let reachable: BTreeSet<NodeId> = levels.iter().map(|&(id, _)| id).collect();
        for &id in self.nodes.keys() {
            if !reachable.contains(&id) {
                push(&mut out, Some(id), ViolationKind::Unreachable);
            }
        }
        for &(id, depth) in &levels {
            for (t, test) in self.nodes[&id].tests.iter().enumerate() {
                for v in test.support() {
                    if v >= depth {
                        push(&mut out, Some(id), ViolationKind::ArityViolation { test: t, variable: v, depth });
                    }
                }
            }
        }
        out
    }

    /// Maximum number of message nodes on a root-to-leaf path.
    pub fn depth(&self) -> Result<usize, ProtocolError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(ProtocolError::Invalid(violations));
        }
        Ok(self.node_levels().iter().map(|&(_, level)| level).max().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::integer;

    fn branch_gt_else_reject(node: ProtocolNode, next: Child) -> ProtocolNode {
        node.with_branch(vec![Sign::Gt], next)
            .with_branch(vec![Sign::Eq], Child::Leaf(Verdict::Reject))
            .with_branch(vec![Sign::Lt], Child::Leaf(Verdict::Reject))
    }

    fn toy(space: VarSpace, party: Party, message: Polynomial, test: Polynomial) -> ProtocolTree {
        let node = branch_gt_else_reject(
            ProtocolNode::new(0, party, message).with_test(test),
            Child::Leaf(Verdict::Accept),
        );
        ProtocolTree::new(space, 0, [node]).unwrap()
    }

    #[test]
    fn single_node_depth() {
        let s = VarSpace::xy(1, 1);
        let q1 = Polynomial::var(VarSpace::formal(1), 0);
        let t = toy(s, Party::X, Polynomial::var(s, 0), q1);
        assert!(t.validate().is_empty());
        assert_eq!(t.depth().unwrap(), 1);
    }

    #[test]
    fn party_violation_is_reported() {
        let s = VarSpace::xy(1, 1);
        let q1 = Polynomial::var(VarSpace::formal(1), 0);
        let t = toy(s, Party::X, Polynomial::var(s, 1), q1);
        let v = t.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].node, Some(0));
        assert!(matches!(v[0].kind, ViolationKind::PartyViolation { .. }));
        assert!(matches!(t.depth(), Err(ProtocolError::Invalid(_))));
    }

    #[test]
    fn arity_violation_is_reported() {
        let s = VarSpace::xy(1, 1);
        let q = VarSpace::formal(3);
        let first = ProtocolNode::new(0, Party::X, Polynomial::var(s, 0))
            .with_branch(vec![], Child::Node(1));
        let second = branch_gt_else_reject(
            ProtocolNode::new(1, Party::Y, Polynomial::var(s, 1)).with_test(Polynomial::var(q, 2)),
            Child::Leaf(Verdict::Accept),
        );
        let t = ProtocolTree::new(s, 0, [first, second]).unwrap();
        let v = t.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].node, Some(1));
        assert!(matches!(v[0].kind, ViolationKind::ArityViolation { variable: 2, depth: 2, .. }));
    }

    #[test]
    fn structural_violations() {
        let s = VarSpace::xy(1, 1);
        let a = ProtocolNode::new(0, Party::X, Polynomial::var(s, 0))
            .with_branch(vec![Sign::Ne], Child::Node(7))
            .with_branch(vec![], Child::Node(0));
        let orphan = ProtocolNode::new(3, Party::Y, Polynomial::<Rational>::one(s))
            .with_branch(vec![], Child::Leaf(Verdict::Accept));
        let t = ProtocolTree::new(s, 0, [a, orphan]).unwrap();
        let kinds: Vec<_> = t.validate().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::SignAlphabet { sign: Sign::Ne }));
        assert!(kinds.contains(&ViolationKind::UnknownChild { child: 7 }));
        assert!(kinds.contains(&ViolationKind::RootHasParent));
        assert!(kinds.contains(&ViolationKind::Unreachable));
        assert!(kinds.contains(&ViolationKind::BranchKeyLength { expected: 0, got: 1 }));

        let missing = ProtocolTree::<Rational>::new(s, 9, []).unwrap();
        assert!(missing.validate().iter().any(|v| v.kind == ViolationKind::MissingRoot));
        let dup = ProtocolTree::new(
            s,
            0,
            [ProtocolNode::new(0, Party::X, Polynomial::<Rational>::one(s)), ProtocolNode::new(0, Party::X, Polynomial::one(s))],
        );
        assert!(matches!(dup, Err(ProtocolError::DuplicateNode(0))));
    }

    #[test]
    fn sign_products() {
        assert_eq!(Sign::Lt.mul(Sign::Lt), Sign::Gt);
        assert_eq!(Sign::Lt.mul(Sign::Gt), Sign::Lt);
        assert_eq!(Sign::Eq.mul(Sign::Gt), Sign::Eq);
        assert_eq!(Sign::parse("!="), Some(Sign::Ne));
        assert_eq!(Sign::parse("?"), None);
    }

    #[test]
    fn factored_tests_evaluate_as_products() {
        let q = VarSpace::formal(2);
        let a = &Polynomial::<Rational>::var(q, 0) - &Polynomial::var(q, 1);
        let b = &Polynomial::<Rational>::var(q, 0) + &Polynomial::one(q);
        let t = TestPolynomial::product(vec![a.clone(), b.clone()]);
        let vals = [integer(3), integer(1)];
        assert_eq!(t.evaluate(&vals).unwrap(), integer(8));
        assert_eq!(t.expand().unwrap(), &a * &b);
        assert_eq!(t.expand().unwrap().evaluate(&vals).unwrap(), integer(8));
    }
}
