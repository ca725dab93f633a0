//! Least terms and exact signs at signed infinitesimal points.
//!
//! A point `(e_1 ε_1, ..., e_k ε_k)` with `ε_1 > ε_2 > ... > 0`, each
//! `ε_{i+1}` infinitesimal relative to `ε_i`, is represented by its sign
//! vector alone. The sign of a real polynomial there is the sign of its
//! least term under the matching [`TermOrder`]: minimal degree in the last
//! variable, then the one before it, and so on.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Frame, Monomial, PolyError, Polynomial, VarSpace};
use crate::protocol::Sign;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfinitesimalError {
    #[error("least term of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("frame mismatch: polynomial in {poly}, point in {point}")]
    FrameMismatch { poly: Frame, point: Frame },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    Length { expected: usize, got: usize },
    #[error("invalid term order: {0}")]
    InvalidOrder(String),
    #[error("invalid sign point: {0}")]
    InvalidPoint(String),
    #[error("frame change needs n_x = n_y, got {n_x} and {n_y}")]
    Unbalanced { n_x: usize, n_y: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Lexicographic order on exponent vectors by a priority list of
/// variables: compare the exponent of `priority[0]`, break ties with
/// `priority[1]`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermOrder {
    priority: Vec<usize>,
}

impl TermOrder {
    pub fn new(priority: Vec<usize>) -> Result<Self, InfinitesimalError> {
        let mut seen = vec![false; priority.len()];
        for &v in &priority {
            if v >= priority.len() || std::mem::replace(&mut seen[v], true) {
                return Err(InfinitesimalError::InvalidOrder(format!(
                    "{priority:?} is not a permutation of 0..{}",
                    priority.len()
                )));
            }
        }
        Ok(TermOrder { priority })
    }

    /// `Y_{n_y}, ..., Y_1, X_{n_x}, ..., X_1`: the last variable first.
    pub fn default_for(nvars: usize) -> Self {
        TermOrder { priority: (0..nvars).rev().collect() }
    }

    /// `"default"` or a comma-separated permutation of 0-based indices.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, InfinitesimalError> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("default") {
            return Ok(Self::default_for(nvars));
        }
        let priority = text
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| InfinitesimalError::InvalidOrder(e.to_string()))?;
        if priority.len() != nvars {
            return Err(InfinitesimalError::InvalidOrder(format!(
                "order lists {} variables, expected {nvars}",
                priority.len()
            )));
        }
        Self::new(priority)
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn len(&self) -> usize {
        self.priority.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priority.is_empty()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.priority {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

impl Serialize for TermOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.priority.serialize(s)
    }
}

/// Sign vector of a signed infinitesimal point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPoint {
    signs: Vec<i8>,
    frame: Frame,
}

impl SignPoint {
    pub fn new(signs: Vec<i8>, frame: Frame) -> Result<Self, InfinitesimalError> {
        if let Some(bad) = signs.iter().find(|s| !(-1..=1).contains(*s)) {
            return Err(InfinitesimalError::InvalidPoint(format!("sign entry {bad}")));
        }
        Ok(SignPoint { signs, frame })
    }

    pub fn all_positive(dim: usize, frame: Frame) -> Self {
        SignPoint { signs: vec![1; dim], frame }
    }

    /// Parses `"+,-,0,+"` (also accepts `1`, `-1`).
    pub fn parse(text: &str, frame: Frame) -> Result<Self, InfinitesimalError> {
        let signs = text
            .split(',')
            .map(|s| match s.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                "0" => Ok(0),
                other => Err(InfinitesimalError::InvalidPoint(format!("bad sign {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(signs, frame)
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn with_sign(&self, index: usize, sign: i8) -> Self {
        let mut signs = self.signs.clone();
        signs[index] = sign;
        SignPoint { signs, frame: self.frame }
    }

    pub fn zero_indices(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] == 0).collect()
    }
}

impl fmt::Display for SignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .signs
            .iter()
            .map(|s| match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for SignPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastTerm<C: Scalar = Rational> {
    pub coefficient: C,
    pub exponent: Monomial,
}

impl<C: Scalar> LeastTerm<C> {
    pub fn mul(&self, other: &LeastTerm<C>) -> LeastTerm<C> {
        LeastTerm {
            coefficient: self.coefficient.clone() * other.coefficient.clone(),
            exponent: self.exponent.mul(&other.exponent),
        }
    }
}

pub fn least_term<C: Scalar>(
    g: &Polynomial<C>,
    order: &TermOrder,
) -> Result<LeastTerm<C>, InfinitesimalError> {
    check_order(g.nvars(), order)?;
    let (m, c) = g.trailing_term(order).ok_or(InfinitesimalError::ZeroPolynomial)?;
    Ok(LeastTerm { coefficient: c.clone(), exponent: m.clone() })
}

pub fn exponent_vector<C: Scalar>(
    g: &Polynomial<C>,
    order: &TermOrder,
) -> Result<Vec<u32>, InfinitesimalError> {
    Ok(least_term(g, order)?.exponent.exponents().to_vec())
}

fn check_order(nvars: usize, order: &TermOrder) -> Result<(), InfinitesimalError> {
    if order.len() != nvars {
        return Err(InfinitesimalError::InvalidOrder(format!(
            "order over {} variables applied to {nvars}",
            order.len()
        )));
    }
    Ok(())
}

/// Exact sign of a real polynomial at a signed infinitesimal point.
///
/// Variables with sign entry 0 are substituted by 0 first; the sign of what
/// remains is `sgn(c) * prod e_i^{k_i}` for its least term `c X^K`.
pub fn sign_at(
    g: &Polynomial<Rational>,
    point: &SignPoint,
    order: &TermOrder,
) -> Result<Sign, InfinitesimalError> {
    if g.space().frame() != point.frame() {
        return Err(InfinitesimalError::FrameMismatch {
            poly: g.space().frame(),
            point: point.frame(),
        });
    }
    if g.nvars() != point.dim() {
        return Err(InfinitesimalError::Length { expected: g.nvars(), got: point.dim() });
    }
    check_order(g.nvars(), order)?;
    let zeros = point.zero_indices();
    let reduced;
    let g = if zeros.is_empty() {
        g
    } else {
        reduced = g.substitute_zero(&zeros);
        &reduced
    };
    let Some((m, c)) = g.trailing_term(order) else {
        return Ok(Sign::Eq);
    };
    let negatives = m
        .exponents()
        .iter()
        .zip(point.signs())
        .filter(|(&e, &s)| s < 0 && e % 2 == 1)
        .count();
    let positive = c.is_positive() == (negatives % 2 == 0);
    debug_assert!(!c.is_zero());
    Ok(if positive { Sign::Gt } else { Sign::Lt })
}

/// Converts between `(X, Y)` and `(X, Z)` coordinates, `Z_i = X_i + Y_i`.
pub fn change_frame<C: Scalar>(
    g: &Polynomial<C>,
    to: Frame,
) -> Result<Polynomial<C>, InfinitesimalError> {
    let space = g.space();
    let (n_x, n_y) = (space.n_x(), space.n_y());
    if n_x != n_y {
        return Err(InfinitesimalError::Unbalanced { n_x, n_y });
    }
    let from = space.frame();
    if from == to {
        return Ok(g.clone());
    }
    let n = n_x;
    let target = match (from, to) {
        (Frame::XY, Frame::XZ) => VarSpace::xz(n),
        (Frame::XZ, Frame::XY) => VarSpace::xy(n, n),
        _ => {
            return Err(InfinitesimalError::FrameMismatch { poly: from, point: to });
        }
    };
    let xs = (0..n).map(|i| Polynomial::var(target, i));
    let second = (0..n).map(|i| {
        let xi = Polynomial::<C>::var(target, i);
        let wi = Polynomial::<C>::var(target, n + i);
        match to {
            // Y_i = Z_i - X_i
            Frame::XZ => &wi - &xi,
            // Z_i = X_i + Y_i
            _ => &wi + &xi,
        }
    });
    let args: Vec<Polynomial<C>> = xs.chain(second).collect();
    Ok(g.compose_into(target, &args)?)
}
