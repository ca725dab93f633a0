//! Sparse multivariate polynomials with exact coefficients.
//!
//! A [`Polynomial`] lives in a [`VarSpace`]: `n_x` variables owned by the
//! X-party followed by `n_y` variables owned by the Y-party. In the `XZ`
//! frame the second block holds `Z_i = X_i + Y_i` instead of `Y_i`, and the
//! `Formal` frame is used for the exchanged-value variables `Q_1..Q_r` of a
//! testing polynomial.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so a polynomial
//! is always canonical: no zero coefficients, terms in ascending
//! lexicographic order of exponents. Equality is structural.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infinitesimal::TermOrder;
use crate::scalar::{ComplexRational, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Frame {
    XY,
    XZ,
    Formal,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::XY => "XY",
            Frame::XZ => "XZ",
            Frame::Formal => "Formal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpace {
    n_x: usize,
    n_y: usize,
    frame: Frame,
}

impl VarSpace {
    pub fn new(n_x: usize, n_y: usize, frame: Frame) -> Result<Self, PolyError> {
        match frame {
            Frame::XZ if n_x != n_y => Err(PolyError::InvalidSpace(format!(
                "XZ frame needs n_x = n_y, got {n_x} and {n_y}"
            ))),
            Frame::Formal if n_y != 0 => Err(PolyError::InvalidSpace(
                "formal spaces have no Y block".to_string(),
            )),
            _ => Ok(VarSpace { n_x, n_y, frame }),
        }
    }

    pub fn xy(n_x: usize, n_y: usize) -> Self {
        VarSpace { n_x, n_y, frame: Frame::XY }
    }

    pub fn xz(n: usize) -> Self {
        VarSpace { n_x: n, n_y: n, frame: Frame::XZ }
    }

    /// Anonymous variables `Q_1..Q_k`.
    pub fn formal(k: usize) -> Self {
        VarSpace { n_x: k, n_y: 0, frame: Frame::Formal }
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.n_x + self.n_y
    }

    pub fn with_frame(&self, frame: Frame) -> Result<Self, PolyError> {
        VarSpace::new(self.n_x, self.n_y, frame)
    }

    pub fn var_name(&self, index: usize) -> String {
        match self.frame {
            Frame::Formal => format!("Q{}", index + 1),
            _ if index < self.n_x => format!("X{}", index + 1),
            Frame::XY => format!("Y{}", index - self.n_x + 1),
            Frame::XZ => format!("Z{}", index - self.n_x + 1),
        }
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.frame {
            Frame::Formal => write!(f, "Formal({})", self.n_x),
            frame => write!(f, "{frame}({},{})", self.n_x, self.n_y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable space mismatch: {left} vs {right}")]
    SpaceMismatch { left: VarSpace, right: VarSpace },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("arity mismatch: polynomial has {expected} variables but {got} arguments were given")]
    ArityMismatch { expected: usize, got: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("incomplete complex/real pairing: {0}")]
    PairingIncomplete(String),
    #[error("invalid variable space: {0}")]
    InvalidSpace(String),
}

/// Exponent vector of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `true` when `self` divides `other` as a monomial.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        divisor.divides(self).then(|| {
            Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
        })
    }
}

impl std::ops::Index<usize> for Monomial {
    type Output = u32;

    fn index(&self, index: usize) -> &u32 {
        &self.0[index]
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C: Scalar = Rational> {
    space: VarSpace,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(space: VarSpace) -> Self {
        Polynomial { space, terms: BTreeMap::new() }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, C::one())
    }

    pub fn constant(space: VarSpace, c: C) -> Self {
        let mut p = Self::zero(space);
        p.add_term(Monomial::one(space.dim()), c);
        p
    }

    /// The variable with the given index. Panics when out of range.
    pub fn var(space: VarSpace, index: usize) -> Self {
        assert!(index < space.dim(), "variable {index} out of range for {space}");
        let mut p = Self::zero(space);
        p.add_term(Monomial::var(space.dim(), index), C::one());
        p
    }

    pub fn term(space: VarSpace, exponents: Vec<u32>, c: C) -> Result<Self, PolyError> {
        Self::from_terms(space, [(exponents, c)])
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging
    /// repeated exponent vectors and dropping zeros.
    pub fn from_terms<I>(space: VarSpace, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(space);
        for (e, c) in terms {
            if e.len() != space.dim() {
                return Err(PolyError::ExponentLength { expected: space.dim(), got: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn nvars(&self) -> usize {
        self.space.dim()
    }

    /// Terms in canonical (ascending exponent) order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&v| self.terms.keys().any(|m| m[v] > 0))
            .collect()
    }

    fn check_space(&self, other: &Self) -> Result<(), PolyError> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(PolyError::SpaceMismatch { left: self.space, right: other.space })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_space(other)?;
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Polynomial {
            space: self.space,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.space);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product of a list of polynomials in `space`; `1` for an empty list.
    pub fn product<'a, I>(space: VarSpace, factors: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        factors.into_iter().try_fold(Self::one(space), |acc, f| acc.try_mul(f))
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars() {
            return Err(PolyError::VarOutOfRange { index: var, nvars: self.nvars() });
        }
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.clone() * C::from_integer(i64::from(e)));
        }
        Ok(out)
    }

    /// Substitutes `args[k]` for variable `k` and expands.
    pub fn compose(&self, args: &[Polynomial<C>]) -> Result<Polynomial<C>, PolyError> {
        if args.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: args.len() });
        }
        let Some(first) = args.first() else {
            return Err(PolyError::InvalidSpace(
                "no arguments to infer the target space from; use compose_into".to_string(),
            ));
        };
        let space = first.space;
        for a in args {
            if a.space != space {
                return Err(PolyError::SpaceMismatch { left: space, right: a.space });
            }
        }
        let mut powers: Vec<Vec<Polynomial<C>>> = vec![vec![Polynomial::one(space)]; args.len()];
        let mut out = Polynomial::zero(space);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(space, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &args[k];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Composition into an explicit target space; needed when there are no
    /// arguments to infer the space from.
    pub fn compose_into(
        &self,
        space: VarSpace,
        args: &[Polynomial<C>],
    ) -> Result<Polynomial<C>, PolyError> {
        if args.is_empty() {
            if self.nvars() != 0 {
                return Err(PolyError::ArityMismatch { expected: self.nvars(), got: 0 });
            }
            return Ok(Polynomial::constant(space, self.constant_term()));
        }
        if let Some(a) = args.iter().find(|a| a.space != space) {
            return Err(PolyError::SpaceMismatch { left: space, right: a.space });
        }
        self.compose(args)
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::PointLength { expected: self.nvars(), got: point.len() });
        }
        let mut powers: Vec<Vec<C>> = vec![vec![C::one()]; point.len()];
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = cache[cache.len() - 1].clone() * point[k].clone();
                    cache.push(next);
                }
                t = t * cache[e as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Sets every variable in `vars` to zero.
    pub fn substitute_zero(&self, vars: &[usize]) -> Self {
        Polynomial {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Greatest term under `order`, `None` for zero.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0))
    }

    /// Least term under `order`, `None` for zero.
    pub fn trailing_term(&self, order: &TermOrder) -> Option<(&Monomial, &C)> {
        self.terms.iter().min_by(|a, b| order.compare(a.0, b.0))
    }

    /// Single-divisor multivariate division: returns `(q, r)` with
    /// `self = q * divisor + r` and no term of `r` divisible by the leading
    /// (greatest) term of `divisor` under `order`. For one divisor,
    /// `r == 0` exactly when `divisor` divides `self`.
    pub fn divide_exact(
        &self,
        divisor: &Polynomial<C>,
        order: &TermOrder,
    ) -> Result<(Polynomial<C>, Polynomial<C>), PolyError> {
        self.check_space(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term(order).ok_or(PolyError::ZeroDivisor)?;
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let mut rest = self.clone();
        let mut quotient = Polynomial::zero(self.space);
        let mut remainder = Polynomial::zero(self.space);
        while let Some((m, c)) = rest.leading_term(order) {
            let (m, c) = (m.clone(), c.clone());
            match m.checked_div(&lead_m) {
                Some(qm) => {
                    let qc = c / lead_c.clone();
                    rest = &rest - &divisor.mul_term(&qm, &qc);
                    quotient.add_term(qm, qc);
                }
                None => {
                    rest.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    pub fn divides(&self, g: &Polynomial<C>, order: &TermOrder) -> Result<bool, PolyError> {
        Ok(g.divide_exact(self, order)?.1.is_zero())
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Same terms, reinterpreted in another space of equal dimension.
    pub fn relabel(&self, space: VarSpace) -> Result<Self, PolyError> {
        if space.dim() != self.nvars() {
            return Err(PolyError::ExponentLength { expected: space.dim(), got: self.nvars() });
        }
        Ok(Polynomial { space, terms: self.terms.clone() })
    }

    /// Reinterprets the polynomial over `k` formal variables, truncating or
    /// padding unused trailing variables.
    pub fn to_formal(&self, k: usize) -> Result<Self, PolyError> {
        if let Some(&v) = self.support().iter().find(|&&v| v >= k) {
            return Err(PolyError::VarOutOfRange { index: v, nvars: k });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(k, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Ok(Polynomial { space: VarSpace::formal(k), terms })
    }
}

impl Polynomial<ComplexRational> {
    /// Splits `g(W)` into real and imaginary parts over real variables,
    /// with `W_j = U_j + i V_j` given by `pairing`.
    pub fn re_im_split(
        &self,
        pairing: &Pairing,
    ) -> Result<(Polynomial<Rational>, Polynomial<Rational>), PolyError> {
        if pairing.pairs.len() != self.nvars() {
            return Err(PolyError::PairingIncomplete(format!(
                "{} complex variables but {} pairs",
                self.nvars(),
                pairing.pairs.len()
            )));
        }
        let target = pairing.target;
        let i = ComplexRational::new(Rational::zero(), Rational::one());
        let args: Vec<Polynomial<ComplexRational>> = pairing
            .pairs
            .iter()
            .map(|&(re, im)| {
                let u = Polynomial::var(target, re);
                let v = Polynomial::var(target, im).scale(&i);
                &u + &v
            })
            .collect();
        let w = self.compose_into(target, &args)?;
        Ok((w.map_coefficients(|c| c.re.clone()), w.map_coefficients(|c| c.im.clone())))
    }
}

impl Polynomial<Rational> {
    pub fn to_complex(&self) -> Polynomial<ComplexRational> {
        self.map_coefficients(|c| ComplexRational::from_rational(c.clone()))
    }
}

/// Assignment of each complex variable `W_j` to a pair of real variables
/// `(U_j, V_j)` in a target space, `W_j = U_j + i V_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    target: VarSpace,
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(target: VarSpace, pairs: Vec<(usize, usize)>) -> Result<Self, PolyError> {
        let mut seen = vec![false; target.dim()];
        for &(re, im) in &pairs {
            for v in [re, im] {
                if v >= target.dim() {
                    return Err(PolyError::PairingIncomplete(format!(
                        "real variable {v} outside {target}"
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(PolyError::PairingIncomplete(format!(
                        "real variable {v} used twice"
                    )));
                }
            }
        }
        Ok(Pairing { target, pairs })
    }

    /// Doubles each party block: complex `X_j` becomes real `X_j` (real part)
    /// and `X_{n_x+j}` (imaginary part), likewise for the second block.
    pub fn blockwise(space: VarSpace) -> Self {
        let (nx, ny) = (space.n_x(), space.n_y());
        let target = VarSpace { n_x: 2 * nx, n_y: 2 * ny, frame: space.frame() };
        let pairs = (0..nx)
            .map(|j| (j, nx + j))
            .chain((0..ny).map(|j| (2 * nx + j, 2 * nx + ny + j)))
            .collect();
        Pairing { target, pairs }
    }

    /// Formal `Q_k` becomes `(Q'_{2k-1}, Q'_{2k})`.
    pub fn interleaved_formal(k: usize) -> Self {
        Pairing { target: VarSpace::formal(2 * k), pairs: (0..k).map(|j| (2 * j, 2 * j + 1)).collect() }
    }

    pub fn target(&self) -> VarSpace {
        self.target
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: Self) -> Polynomial<C> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = self.space.var_name(v);
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.space, self)
    }
}
