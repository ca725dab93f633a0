//! Built-in target sets with exact membership oracles, and concrete
//! protocols recognizing them.
//!
//! All sets live in `R^{n_x + n_y}` (or `C^{2n}` for the arrangements),
//! with coordinates `(x_1..x_{n_x}, y_1..y_{n_y})`.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::infinitesimal::{change_frame, sign_at, InfinitesimalError, SignPoint, TermOrder};
use crate::poly::{Frame, Polynomial, VarSpace};
use crate::protocol::{
    Child, Party, ProbabilisticProtocol, ProtocolError, ProtocolNode, ProtocolTree, Sign,
    TestPolynomial, Verdict,
};
use crate::scalar::{Rational, Scalar};

pub const DEFAULT_KNAPSACK_MEMBERSHIP_CAP: usize = 12;
pub const DEFAULT_KNAPSACK_PROTOCOL_CAP: usize = 8;
/// Exact enumeration of the probabilistic orthant family needs
/// `n_x + n_y` at most this.
pub const ORTHANT_EXACT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error("input has {got} coordinates, set lives in dimension {expected}")]
    Length { expected: usize, got: usize },
    #[error("knapsack with n = {n} exceeds the cap {cap}")]
    KnapsackCap { n: usize, cap: usize },
    #[error("exact orthant family needs n_x + n_y <= {cap}, got {dim}")]
    ExactCap { dim: usize, cap: usize },
    #[error("set needs at least one variable")]
    Empty,
    #[error("invalid arrangement: {0}")]
    InvalidForm(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Infinitesimal(#[from] InfinitesimalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDescriptor {
    /// `x_i > 0, y_j > 0`.
    Orthant { n_x: usize, n_y: usize },
    /// `x_i >= 0, y_j >= 0`.
    OrthantClosure { n_x: usize, n_y: usize },
    /// `x_i + y_i > 0` for all `i`.
    PolyhedronS { n: usize },
    /// Union of the hyperplanes `{L = 0}` for the given linear forms.
    Arrangement { n: usize, forms: Vec<Polynomial> },
    /// `x_1 y_1 + ... + x_n y_n = 0`.
    InnerProductHypersurface { n: usize },
    /// `{x_1..x_n}` and `{y_1..y_n}` are disjoint.
    EmptinessSet { n: usize },
    /// Some `(I_1, I_2) != (∅, ∅)` has `sum_{I_1} x + sum_{I_2} y = 0`.
    KnapsackSet { n: usize },
}

impl SetDescriptor {
    pub fn arrangement(n: usize, forms: Vec<Polynomial>) -> Result<Self, ZooError> {
        let space = VarSpace::xy(n, n);
        for (i, f) in forms.iter().enumerate() {
            if f.space() != space {
                return Err(ZooError::InvalidForm(format!("form {i} lives in {}", f.space())));
            }
            if f.is_zero() || f.terms().any(|(m, _)| m.degree() > 1) || f.is_constant() {
                return Err(ZooError::InvalidForm(format!("form {i} is not a nonzero linear form")));
            }
        }
        Ok(SetDescriptor::Arrangement { n, forms })
    }

    /// `∪_{i,j} {X_i + Y_j = 0}`.
    pub fn full_arrangement(n: usize) -> Self {
        let s = VarSpace::xy(n, n);
        let forms = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| &Polynomial::var(s, i) + &Polynomial::var(s, n + j))
            .collect();
        SetDescriptor::Arrangement { n, forms }
    }

    /// `∪_i {X_i + Y_i = 0}`.
    pub fn diagonal_arrangement(n: usize) -> Self {
        let s = VarSpace::xy(n, n);
        let forms = (0..n).map(|i| &Polynomial::var(s, i) + &Polynomial::var(s, n + i)).collect();
        SetDescriptor::Arrangement { n, forms }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SetDescriptor::Orthant { .. } => "orthant",
            SetDescriptor::OrthantClosure { .. } => "orthant-closure",
            SetDescriptor::PolyhedronS { .. } => "polyhedron-s",
            SetDescriptor::Arrangement { .. } => "arrangement",
            SetDescriptor::InnerProductHypersurface { .. } => "inner-product",
            SetDescriptor::EmptinessSet { .. } => "emptiness",
            SetDescriptor::KnapsackSet { .. } => "knapsack",
        }
    }

    pub fn space(&self) -> VarSpace {
        match *self {
            SetDescriptor::Orthant { n_x, n_y } | SetDescriptor::OrthantClosure { n_x, n_y } => {
                VarSpace::xy(n_x, n_y)
            }
            SetDescriptor::PolyhedronS { n }
            | SetDescriptor::Arrangement { n, .. }
            | SetDescriptor::InnerProductHypersurface { n }
            | SetDescriptor::EmptinessSet { n }
            | SetDescriptor::KnapsackSet { n } => VarSpace::xy(n, n),
        }
    }

    pub fn membership(&self, input: &[Rational]) -> Result<bool, ZooError> {
        self.membership_with_cap(input, DEFAULT_KNAPSACK_MEMBERSHIP_CAP)
    }

    pub fn membership_with_cap(&self, input: &[Rational], knapsack_cap: usize) -> Result<bool, ZooError> {
        let dim = self.space().dim();
        if input.len() != dim {
            return Err(ZooError::Length { expected: dim, got: input.len() });
        }
        Ok(match self {
            SetDescriptor::Orthant { .. } => input.iter().all(Signed::is_positive),
            SetDescriptor::OrthantClosure { .. } => input.iter().all(|v| !v.is_negative()),
            SetDescriptor::PolyhedronS { n } => {
                (0..*n).all(|i| (&input[i] + &input[n + i]).is_positive())
            }
            SetDescriptor::Arrangement { forms, .. } => forms
                .iter()
                .map(|f| f.evaluate(input).map(|v| v.is_zero()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ZooError::InvalidForm(e.to_string()))?
                .into_iter()
                .any(|z| z),
            SetDescriptor::InnerProductHypersurface { n } => {
                (0..*n).map(|i| &input[i] * &input[n + i]).sum::<Rational>().is_zero()
            }
            SetDescriptor::EmptinessSet { n } => {
                let xs: HashSet<&Rational> = input[..*n].iter().collect();
                input[*n..].iter().all(|y| !xs.contains(y))
            }
            SetDescriptor::KnapsackSet { n } => {
                if *n > knapsack_cap {
                    return Err(ZooError::KnapsackCap { n: *n, cap: knapsack_cap });
                }
                knapsack_member(&input[..*n], &input[*n..])
            }
        })
    }

    /// Defining polynomials over `XY`.
    fn defining_polynomials(&self) -> Vec<Polynomial> {
        let s = self.space();
        let v = |i: usize| Polynomial::<Rational>::var(s, i);
        match self {
            SetDescriptor::Orthant { .. } | SetDescriptor::OrthantClosure { .. } => {
                (0..s.dim()).map(v).collect()
            }
            SetDescriptor::PolyhedronS { n } => (0..*n).map(|i| &v(i) + &v(n + i)).collect(),
            SetDescriptor::Arrangement { forms, .. } => forms.clone(),
            SetDescriptor::InnerProductHypersurface { n } => {
                vec![(0..*n).fold(Polynomial::zero(s), |acc, i| &acc + &(&v(i) * &v(n + i)))]
            }
            SetDescriptor::EmptinessSet { n } => (0..*n)
                .flat_map(|i| (0..*n).map(move |j| (i, j)))
                .map(|(i, j)| &v(i) - &v(n + j))
                .collect(),
            SetDescriptor::KnapsackSet { n } => knapsack_forms(*n, s),
        }
    }

    /// Membership at a signed infinitesimal point, in the point's frame.
    pub fn membership_at_signpoint(&self, point: &SignPoint, order: &TermOrder) -> Result<bool, ZooError> {
        self.membership_at_signpoint_with_cap(point, order, DEFAULT_KNAPSACK_MEMBERSHIP_CAP)
    }

    pub fn membership_at_signpoint_with_cap(
        &self,
        point: &SignPoint,
        order: &TermOrder,
        knapsack_cap: usize,
    ) -> Result<bool, ZooError> {
        let dim = self.space().dim();
        if point.dim() != dim {
            return Err(ZooError::Length { expected: dim, got: point.dim() });
        }
        if let SetDescriptor::KnapsackSet { n } = self {
            if *n > knapsack_cap {
                return Err(ZooError::KnapsackCap { n: *n, cap: knapsack_cap });
            }
        }
        let signs = self
            .defining_polynomials()
            .iter()
            .map(|g| {
                let g = if point.frame() == Frame::XY { g.clone() } else { change_frame(g, point.frame())? };
                sign_at(&g, point, order)
            })
            .collect::<Result<Vec<Sign>, InfinitesimalError>>()?;
        Ok(match self {
            SetDescriptor::Orthant { .. } | SetDescriptor::PolyhedronS { .. } => {
                signs.iter().all(|&s| s == Sign::Gt)
            }
            SetDescriptor::OrthantClosure { .. } => signs.iter().all(|&s| s != Sign::Lt),
            SetDescriptor::Arrangement { .. }
            | SetDescriptor::InnerProductHypersurface { .. }
            | SetDescriptor::KnapsackSet { .. } => signs.contains(&Sign::Eq),
            SetDescriptor::EmptinessSet { .. } => !signs.contains(&Sign::Eq),
        })
    }
}

fn subset_sums(values: &[Rational]) -> Vec<Rational> {
    let mut sums = vec![Rational::zero()];
    for v in values {
        let extended: Vec<Rational> = sums.iter().map(|s| s + v).collect();
        sums.extend(extended);
    }
    sums
}

/// Meet in the middle over the `4^n - 1` nontrivial subset pairs.
fn knapsack_member(xs: &[Rational], ys: &[Rational]) -> bool {
    let x_sums = subset_sums(xs);
    let y_sums = subset_sums(ys);
    // index 0 of a subset-sum table is the empty subset
    if y_sums[1..].iter().any(Zero::is_zero) || x_sums[1..].iter().any(Zero::is_zero) {
        return true;
    }
    let ys: HashSet<Rational> = y_sums[1..].iter().cloned().collect();
    x_sums[1..].iter().any(|s| ys.contains(&-s))
}

fn knapsack_forms<C: Scalar>(n: usize, s: VarSpace) -> Vec<Polynomial<C>> {
    let mut out = Vec::with_capacity((1usize << (2 * n)) - 1);
    for mask in 1u64..(1u64 << (2 * n)) {
        let terms = (0..2 * n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (monomial_var(s.dim(), b), C::one()));
        out.push(Polynomial::from_terms(s, terms).expect("knapsack form"));
    }
    out
}

fn monomial_var(nvars: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; nvars];
    e[i] = 1;
    e
}

/// Deterministic protocol of depth `n_x + n_y`: the parties reveal their
/// coordinates in order and the last node decides.
fn reveal_all<C: Scalar>(
    space: VarSpace,
    tests: Vec<TestPolynomial<C>>,
    branches: impl IntoIterator<Item = (Vec<Sign>, Verdict)>,
) -> Result<ProtocolTree<C>, ProtocolError> {
    let d = space.dim();
    let mut nodes = Vec::with_capacity(d);
    for k in 0..d {
        let party = if k < space.n_x() { Party::X } else { Party::Y };
        let node = ProtocolNode::new(k as u32, party, Polynomial::var(space, k));
        nodes.push(if k + 1 < d { node.with_branch(vec![], Child::Node(k as u32 + 1)) } else { node });
    }
    let last = nodes.last_mut().expect("at least one variable");
    last.tests = tests;
    for (key, verdict) in branches {
        last.branches.insert(key, Child::Leaf(verdict));
    }
    ProtocolTree::validated(space, 0, nodes)
}

fn all_keys(alphabet: &[Sign], len: usize) -> Vec<Vec<Sign>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.iter()
            .flat_map(|k| {
                alphabet.iter().map(move |&s| {
                    let mut k = k.clone();
                    k.push(s);
                    k
                })
            })
            .collect()
    })
}

/// Chain of sign tests `m_r(Q_r)`; each node continues on a sign in
/// `pass` and rejects otherwise; the last accepts on `pass`.
fn sign_chain(space: VarSpace, messages: Vec<(Party, Polynomial)>, pass: &[Sign]) -> Result<ProtocolTree, ProtocolError> {
    let d = messages.len();
    let nodes = messages.into_iter().enumerate().map(|(k, (party, message))| {
        let next = if k + 1 < d { Child::Node(k as u32 + 1) } else { Child::Leaf(Verdict::Accept) };
        let mut node = ProtocolNode::new(k as u32, party, message).with_test(Polynomial::var(VarSpace::formal(k + 1), k));
        for s in [Sign::Lt, Sign::Eq, Sign::Gt] {
            let child = if pass.contains(&s) { next } else { Child::Leaf(Verdict::Reject) };
            node.branches.insert(vec![s], child);
        }
        node
    });
    ProtocolTree::validated(space, 0, nodes)
}

fn coordinate_messages(space: VarSpace) -> Vec<(Party, Polynomial)> {
    (0..space.dim())
        .map(|k| (if k < space.n_x() { Party::X } else { Party::Y }, Polynomial::var(space, k)))
        .collect()
}

/// Orthant: reveal every coordinate, test each `Q_r > 0`.
pub fn build_orthant_det(n_x: usize, n_y: usize) -> Result<ProtocolTree, ZooError> {
    let space = VarSpace::xy(n_x, n_y);
    if space.dim() == 0 {
        return Err(ZooError::Empty);
    }
    Ok(sign_chain(space, coordinate_messages(space), &[Sign::Gt])?)
}

/// Orthant closure: as [`build_orthant_det`] with `Q_r >= 0`.
pub fn build_orthant_closure_det(n_x: usize, n_y: usize) -> Result<ProtocolTree, ZooError> {
    let space = VarSpace::xy(n_x, n_y);
    if space.dim() == 0 {
        return Err(ZooError::Empty);
    }
    Ok(sign_chain(space, coordinate_messages(space), &[Sign::Gt, Sign::Eq])?)
}

/// Subset choice of one member of the probabilistic orthant family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantChoice {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
}

impl OrthantChoice {
    /// Decodes `index` bitwise: `I1`, `I2` over X, then `J1`, `J2` over Y.
    pub fn from_index(n_x: usize, n_y: usize, index: u64) -> Self {
        let take = |offset: usize, len: usize| -> Vec<usize> {
            (0..len).filter(|i| index >> (offset + i) & 1 == 1).collect()
        };
        OrthantChoice { x1: take(0, n_x), x2: take(n_x, n_x), y1: take(2 * n_x, n_y), y2: take(2 * n_x + n_y, n_y) }
    }
}

/// Depth-4 member: products over the chosen subsets (empty product 1),
/// accept iff all four are positive.
pub fn orthant_member(n_x: usize, n_y: usize, choice: &OrthantChoice) -> Result<ProtocolTree, ZooError> {
    let space = VarSpace::xy(n_x, n_y);
    let product = |vars: Vec<usize>| {
        vars.into_iter().fold(Polynomial::one(space), |acc, v| &acc * &Polynomial::var(space, v))
    };
    let ys = |v: &[usize]| v.iter().map(|&j| n_x + j).collect::<Vec<_>>();
    let messages = vec![
        (Party::X, product(choice.x1.clone())),
        (Party::X, product(choice.x2.clone())),
        (Party::Y, product(ys(&choice.y1))),
        (Party::Y, product(ys(&choice.y2))),
    ];
    Ok(sign_chain(space, messages, &[Sign::Gt])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// All `2^{2 n_x + 2 n_y}` subset choices, uniform weights.
    Exact,
    /// `members` choices drawn uniformly with a seeded generator.
    Sampled { members: usize, seed: u64 },
}

pub fn build_orthant_prob(n_x: usize, n_y: usize, mode: FamilyMode) -> Result<ProbabilisticProtocol, ZooError> {
    let dim = n_x + n_y;
    if dim == 0 {
        return Err(ZooError::Empty);
    }
    let trees = match mode {
        FamilyMode::Exact => {
            if dim > ORTHANT_EXACT_CAP {
                return Err(ZooError::ExactCap { dim, cap: ORTHANT_EXACT_CAP });
            }
            (0..1u64 << (2 * dim))
                .map(|i| orthant_member(n_x, n_y, &OrthantChoice::from_index(n_x, n_y, i)))
                .collect::<Result<Vec<_>, _>>()?
        }
        FamilyMode::Sampled { members, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..members.max(1))
                .map(|_| {
                    let bits = 2 * dim;
                    let index = if bits == 64 { rng.random::<u64>() } else { rng.random_range(0..1u64 << bits) };
                    orthant_member(n_x, n_y, &OrthantChoice::from_index(n_x, n_y, index))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(ProbabilisticProtocol::uniform(trees)?)
}

/// Polyhedron S: reveal all, test `Q_i + Q_{n+i}` for every `i`, accept
/// iff all are positive.
pub fn build_polyhedron_det(n: usize) -> Result<ProtocolTree, ZooError> {
    if n == 0 {
        return Err(ZooError::Empty);
    }
    let space = VarSpace::xy(n, n);
    let q = VarSpace::formal(2 * n);
    let tests = (0..n)
        .map(|i| TestPolynomial::from(&Polynomial::var(q, i) + &Polynomial::var(q, n + i)))
        .collect();
    let branches = all_keys(Rational::sign_alphabet(), n).into_iter().map(|key| {
        let accept = key.iter().all(|&s| s == Sign::Gt);
        (key, Verdict::from_bool(accept))
    });
    Ok(reveal_all(space, tests, branches)?)
}

fn eq_branches<C: Scalar>(on_zero: Verdict) -> Vec<(Vec<Sign>, Verdict)> {
    let other = if on_zero == Verdict::Accept { Verdict::Reject } else { Verdict::Accept };
    C::sign_alphabet()
        .iter()
        .map(|&s| (vec![s], if s == Sign::Eq { on_zero } else { other }))
        .collect()
}

/// Arrangement: reveal all, one factored test `prod L(Q)`, accept on `=`.
pub fn build_arrangement_det<C: Scalar>(n: usize, forms: &[Polynomial]) -> Result<ProtocolTree<C>, ZooError> {
    if n == 0 || forms.is_empty() {
        return Err(ZooError::Empty);
    }
    let space = VarSpace::xy(n, n);
    let q = VarSpace::formal(2 * n);
    let factors = forms
        .iter()
        .map(|f| {
            f.relabel(q)
                .map(|p| p.map_coefficients(|c| C::from_rational(c.clone())))
                .map_err(|e| ZooError::InvalidForm(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reveal_all(space, vec![TestPolynomial::product(factors)], eq_branches::<C>(Verdict::Accept))?)
}

/// Emptiness: reveal all, test `prod_{i,j} (Q_i - Q_{n+j})`; `=` means the
/// sets intersect (reject).
pub fn build_emptiness_det<C: Scalar>(n: usize) -> Result<ProtocolTree<C>, ZooError> {
    if n == 0 {
        return Err(ZooError::Empty);
    }
    let space = VarSpace::xy(n, n);
    let q = VarSpace::formal(2 * n);
    let factors = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| &Polynomial::<C>::var(q, i) - &Polynomial::var(q, n + j))
        .collect();
    Ok(reveal_all(space, vec![TestPolynomial::product(factors)], eq_branches::<C>(Verdict::Reject))?)
}

/// Knapsack: reveal all, test the product of the `4^n - 1` subset-sum forms,
/// accept on `=`.
pub fn build_knapsack_det<C: Scalar>(n: usize, cap: usize) -> Result<ProtocolTree<C>, ZooError> {
    if n == 0 {
        return Err(ZooError::Empty);
    }
    if n > cap {
        return Err(ZooError::KnapsackCap { n, cap });
    }
    let space = VarSpace::xy(n, n);
    let factors = knapsack_forms::<C>(n, VarSpace::formal(2 * n));
    Ok(reveal_all(space, vec![TestPolynomial::product(factors)], eq_branches::<C>(Verdict::Accept))?)
}

/// Hypersurface `f = 0`: reveal all, test `sum Q_i Q_{n+i}`.
pub fn build_inner_product_det(n: usize) -> Result<ProtocolTree, ZooError> {
    if n == 0 {
        return Err(ZooError::Empty);
    }
    let space = VarSpace::xy(n, n);
    let q = VarSpace::formal(2 * n);
    let f = (0..n).fold(Polynomial::zero(q), |acc, i| &acc + &(&Polynomial::var(q, i) * &Polynomial::var(q, n + i)));
    Ok(reveal_all(space, vec![f.into()], eq_branches::<Rational>(Verdict::Accept))?)
}

/// The deterministic protocol shipped for a set.
pub fn protocol_for(set: &SetDescriptor) -> Result<ProtocolTree, ZooError> {
    match set {
        SetDescriptor::Orthant { n_x, n_y } => build_orthant_det(*n_x, *n_y),
        SetDescriptor::OrthantClosure { n_x, n_y } => build_orthant_closure_det(*n_x, *n_y),
        SetDescriptor::PolyhedronS { n } => build_polyhedron_det(*n),
        SetDescriptor::Arrangement { n, forms } => build_arrangement_det(*n, forms),
        SetDescriptor::InnerProductHypersurface { n } => build_inner_product_det(*n),
        SetDescriptor::EmptinessSet { n } => build_emptiness_det(*n),
        SetDescriptor::KnapsackSet { n } => build_knapsack_det(*n, DEFAULT_KNAPSACK_PROTOCOL_CAP),
    }
}

/// The points `u`, `u_i` and `u_i^{(0)}` in the `XZ` frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoolingPoints {
    pub u: SignPoint,
    pub flipped: Vec<SignPoint>,
    pub zeroed: Vec<SignPoint>,
}

pub fn fooling_points(n: usize) -> FoolingPoints {
    let u = SignPoint::all_positive(2 * n, Frame::XZ);
    let flipped = (0..n).map(|i| u.with_sign(n + i, -1)).collect();
    let zeroed = (0..n).map(|i| u.with_sign(n + i, 0)).collect();
    FoolingPoints { u, flipped, zeroed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    #[test]
    fn membership_examples() {
        assert!(SetDescriptor::Orthant { n_x: 2, n_y: 2 }.membership(&ints(&[1, 1, 1, 1])).unwrap());
        assert!(!SetDescriptor::PolyhedronS { n: 2 }.membership(&ints(&[1, 1, -1, 2])).unwrap());
        assert!(SetDescriptor::KnapsackSet { n: 2 }.membership(&ints(&[1, 3, -4, 7])).unwrap());
        assert!(!SetDescriptor::KnapsackSet { n: 1 }.membership(&ints(&[1, 1])).unwrap());
        assert!(SetDescriptor::KnapsackSet { n: 1 }.membership(&ints(&[0, 1])).unwrap());
        assert!(SetDescriptor::EmptinessSet { n: 2 }.membership(&ints(&[1, 2, 3, 4])).unwrap());
        assert!(!SetDescriptor::EmptinessSet { n: 2 }.membership(&ints(&[1, 2, 2, 5])).unwrap());
        assert!(SetDescriptor::InnerProductHypersurface { n: 2 }.membership(&ints(&[1, 1, 1, -1])).unwrap());
        assert!(SetDescriptor::OrthantClosure { n_x: 1, n_y: 1 }.membership(&ints(&[0, 3])).unwrap());
        assert!(SetDescriptor::full_arrangement(2).membership(&ints(&[1, 5, 3, -1])).unwrap());
        assert!(!SetDescriptor::full_arrangement(2).membership(&ints(&[1, 5, 3, 2])).unwrap());
    }

    #[test]
    fn membership_errors() {
        let s = SetDescriptor::KnapsackSet { n: 13 };
        assert!(matches!(s.membership(&vec![integer(1); 26]), Err(ZooError::KnapsackCap { .. })));
        assert!(matches!(
            SetDescriptor::PolyhedronS { n: 2 }.membership(&ints(&[1])),
            Err(ZooError::Length { .. })
        ));
        let s = VarSpace::xy(1, 1);
        assert!(SetDescriptor::arrangement(1, vec![Polynomial::var(s, 0).pow(2)]).is_err());
        assert!(SetDescriptor::arrangement(1, vec![Polynomial::one(s)]).is_err());
    }

    #[test]
    fn fooling_point_layout() {
        let pts = fooling_points(2);
        assert_eq!(pts.u.signs(), &[1, 1, 1, 1]);
        assert_eq!(pts.flipped[0].signs(), &[1, 1, -1, 1]);
        assert_eq!(pts.zeroed[0].signs(), &[1, 1, 0, 1]);
        let order = TermOrder::default_for(4);
        let s = SetDescriptor::PolyhedronS { n: 2 };
        assert!(s.membership_at_signpoint(&pts.u, &order).unwrap());
        assert!(!s.membership_at_signpoint(&pts.flipped[0], &order).unwrap());
        assert!(!s.membership_at_signpoint(&pts.flipped[1], &order).unwrap());
        let r = SetDescriptor::diagonal_arrangement(2);
        assert!(!r.membership_at_signpoint(&pts.u, &order).unwrap());
        assert!(r.membership_at_signpoint(&pts.zeroed[0], &order).unwrap());
        let full = SetDescriptor::full_arrangement(2);
        assert!(!full.membership_at_signpoint(&pts.u, &order).unwrap());
        assert!(full.membership_at_signpoint(&pts.zeroed[1], &order).unwrap());
    }

    #[test]
    fn deterministic_protocols() {
        let t = build_orthant_det(2, 2).unwrap();
        assert_eq!(t.depth().unwrap(), 4);
        assert!(t.accepts(&ints(&[1, 2, 3, 4])).unwrap());
        let tr = t.run_rational(&ints(&[1, 0, 3, 4])).unwrap();
        assert_eq!(tr.verdict, Verdict::Reject);
        assert_eq!(tr.path.len(), 2);

        let k = build_knapsack_det::<Rational>(3, DEFAULT_KNAPSACK_PROTOCOL_CAP).unwrap();
        assert_eq!(k.depth().unwrap(), 6);
        assert!(build_knapsack_det::<Rational>(1, 8).unwrap().accepts(&ints(&[2, -2])).unwrap());
        assert!(build_knapsack_det::<Rational>(1, 8).unwrap().accepts(&ints(&[1, -1])).unwrap());
        assert!(matches!(build_knapsack_det::<Rational>(9, 8), Err(ZooError::KnapsackCap { .. })));

        let e = build_emptiness_det::<Rational>(2).unwrap();
        assert!(e.accepts(&ints(&[1, 2, 3, 4])).unwrap());
        assert!(!e.accepts(&ints(&[1, 2, 2, 5])).unwrap());

        let s = build_polyhedron_det(2).unwrap();
        assert!(s.accepts(&[rational(1, 2), integer(1), integer(0), integer(-1) + rational(3, 2)]).unwrap());
        assert!(!s.accepts(&ints(&[1, 1, -1, 2])).unwrap());
    }

    #[test]
    fn orthant_family_small_case() {
        let pp = build_orthant_prob(1, 1, FamilyMode::Exact).unwrap();
        assert_eq!(pp.members().len(), 16);
        assert_eq!(pp.depth().unwrap(), 4);
        assert_eq!(pp.acceptance_probability(&ints(&[1, 1])).unwrap(), integer(1));
        assert_eq!(pp.acceptance_probability(&ints(&[-1, 1])).unwrap(), rational(1, 4));
        assert_eq!(pp.acceptance_probability(&ints(&[0, 1])).unwrap(), rational(1, 4));
        assert!(matches!(build_orthant_prob(5, 4, FamilyMode::Exact), Err(ZooError::ExactCap { .. })));
        let sampled = build_orthant_prob(5, 5, FamilyMode::Sampled { members: 32, seed: 7 }).unwrap();
        assert_eq!(sampled.members().len(), 32);
        assert_eq!(sampled, build_orthant_prob(5, 5, FamilyMode::Sampled { members: 32, seed: 7 }).unwrap());
    }
}
