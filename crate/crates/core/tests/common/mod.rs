#![allow(dead_code)]

use algcomm::scalar::integer;
use algcomm::{Polynomial, Rational, Sign, TermOrder, VarSpace};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

/// Random polynomial with integer coefficients in `[-c, c]`, total degree
/// at most `max_deg`.
pub fn random_poly(rng: &mut impl Rng, space: VarSpace, max_terms: usize, max_deg: u32, c: i64) -> Polynomial {
    let n = space.dim();
    let terms = (0..rng.random_range(1..=max_terms)).map(|_| {
        let mut budget = max_deg;
        let mut e = vec![0u32; n];
        for _ in 0..rng.random_range(0..=max_deg) {
            if budget == 0 || n == 0 {
                break;
            }
            e[rng.random_range(0..n)] += 1;
            budget -= 1;
        }
        (e, integer(rng.random_range(-c..=c)))
    });
    Polynomial::from_terms(space, terms).unwrap()
}

pub fn random_nonzero_poly(rng: &mut impl Rng, space: VarSpace, max_terms: usize, max_deg: u32, c: i64) -> Polynomial {
    loop {
        let p = random_poly(rng, space, max_terms, max_deg, c);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Sign of `g` at `e_i = s_i * delta^{D^{r_i}}`, where `r_i` is the rank of
/// variable `i` in the order (the first-priority variable is the
/// smallest), `D` exceeds every exponent and `delta = 2^{-t}` with `t`
/// large enough for the least term to dominate. Evaluated exactly.
pub fn numeric_sign(g: &Polynomial, signs: &[i8], order: &TermOrder) -> Sign {
    if g.is_zero() {
        return Sign::Eq;
    }
    let n = g.nvars();
    let d = g.terms().flat_map(|(m, _)| m.exponents().to_vec()).max().unwrap_or(0) as u64 + 1;
    let mut weight = vec![0u64; n];
    for (rank, &v) in order.priority().iter().enumerate() {
        weight[v] = d.pow((n - 1 - rank) as u32);
    }
    let total: Rational = g.terms().map(|(_, c)| c.abs()).sum();
    let smallest = g.terms().map(|(_, c)| c.abs()).min().unwrap();
    let mut t = 1u32;
    while Rational::from_integer(BigInt::one() << t) * &smallest <= total {
        t += 1;
    }
    let delta = Rational::new(BigInt::one(), BigInt::one() << (t + 1));
    let point: Vec<Rational> = (0..n)
        .map(|i| {
            let magnitude = num_traits::pow(delta.clone(), weight[i] as usize);
            if signs[i] < 0 { -magnitude } else { magnitude }
        })
        .collect();
    let v = g.evaluate(&point).unwrap();
    if v.is_zero() {
        Sign::Eq
    } else if v.is_positive() {
        Sign::Gt
    } else {
        Sign::Lt
    }
}

/// All `{-1, +1}^n` patterns.
pub fn zero_free_patterns(n: usize) -> Vec<Vec<i8>> {
    (0..1u32 << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
}

/// All `{-1, 0, +1}^n` patterns.
pub fn sign_grid(n: usize) -> Vec<Vec<i8>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                [-1i8, 0, 1].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect()
    })
}

pub fn arb_poly(space: VarSpace, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = space.dim();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -6i64..=6), 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(space, terms.into_iter().map(|(e, c)| (e, integer(c)))).unwrap()
    })
}

pub fn arb_nonzero_poly(space: VarSpace, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    arb_poly(space, max_exp, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-20i64..=20, 1i64..=4), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect())
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Random polynomial in the variables owned by one party.
pub fn random_party_poly(rng: &mut impl Rng, space: VarSpace, party: algcomm::Party, max_terms: usize, max_deg: u32) -> Polynomial {
    let (offset, n) = match party {
        algcomm::Party::X => (0, space.n_x()),
        algcomm::Party::Y => (space.n_x(), space.n_y()),
    };
    let local = random_poly(rng, VarSpace::formal(n), max_terms, max_deg, 4);
    let args: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(space, offset + i)).collect();
    local.compose_into(space, &args).unwrap()
}

/// Random valid real protocol over `XY(n_x, n_y)` of depth at most
/// `max_depth`, with one or two tests per node.
pub fn random_protocol(rng: &mut impl Rng, n_x: usize, n_y: usize, max_depth: usize) -> algcomm::ProtocolTree {
    use algcomm::{Child, Party, ProtocolNode, ProtocolTree, Verdict};
    let space = VarSpace::xy(n_x, n_y);
    let mut nodes = Vec::new();
    let mut pending = vec![(0u32, 0usize)];
    let mut next_id = 1u32;
    while let Some((id, level)) = pending.pop() {
        let party = match (n_x, n_y) {
            (0, _) => Party::Y,
            (_, 0) => Party::X,
            _ => if rng.random_bool(0.5) { Party::X } else { Party::Y },
        };
        let message = random_party_poly(rng, space, party, 3, 2);
        let mut node = ProtocolNode::new(id, party, message);
        let tests = rng.random_range(1..=2);
        for _ in 0..tests {
            node = node.with_test(random_poly(rng, VarSpace::formal(level + 1), 3, 2, 3));
        }
        let keys = sign_keys(tests);
        for key in keys {
            let child = if level + 1 < max_depth && rng.random_bool(0.3) && next_id < 40 {
                pending.push((next_id, level + 1));
                next_id += 1;
                Child::Node(next_id - 1)
            } else {
                Child::Leaf(Verdict::from_bool(rng.random_bool(0.6)))
            };
            node.branches.insert(key, child);
        }
        nodes.push(node);
    }
    ProtocolTree::validated(space, 0, nodes).unwrap()
}

pub fn sign_keys(len: usize) -> Vec<Vec<Sign>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|k| {
                [Sign::Lt, Sign::Eq, Sign::Gt].into_iter().map(move |s| {
                    let mut k = k.clone();
                    k.push(s);
                    k
                })
            })
            .collect()
    })
}
