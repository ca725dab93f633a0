//! JSON documents: term lists, protocol and probabilistic files, set
//! descriptors, polynomial documents and a small polynomial expression
//! parser.
//!
//! Integers are written as JSON numbers when they fit in `i64` and as
//! decimal strings otherwise; both forms are accepted on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::{Frame, Polynomial, VarSpace};
use crate::protocol::{
    Child, Member, Party, ProbabilisticProtocol, ProtocolError, ProtocolNode, ProtocolTree, Sign,
    TestPolynomial, Verdict,
};
use crate::scalar::{parse_rational, ComplexRational, FieldKind, Rational, Scalar};
use crate::zoo::SetDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("expected a {expected} protocol, file declares {found}")]
    FieldKind { expected: FieldKind, found: FieldKind },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn field_err(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field { path: path.to_string(), message: message.into() }
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn parse_int(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(field_err(path, format!("{n} is not an integer")))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| field_err(path, format!("{s:?} is not an integer"))),
        other => Err(field_err(path, format!("expected an integer, got {other}"))),
    }
}

/// `[[num, den, [e1..ek]], ...]` (real) or
/// `[[re_num, re_den, im_num, im_den, [e1..ek]], ...]` (complex).
pub fn terms_to_value<C: Scalar>(p: &Polynomial<C>) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let mut row: Vec<Value> = c.to_parts().iter().map(int_value).collect();
                row.push(Value::from(m.exponents().to_vec()));
                Value::Array(row)
            })
            .collect(),
    )
}

/// Parses a term list. `space` fixes the variables; with `None` the list
/// is read over `Q_1..Q_k`, `k` being the exponent length.
pub fn terms_from_value<C: Scalar>(v: &Value, space: Option<VarSpace>, path: &str) -> Result<Polynomial<C>, FormatError> {
    let rows = v.as_array().ok_or_else(|| field_err(path, "term list must be an array"))?;
    let mut terms = Vec::with_capacity(rows.len());
    let mut width: Option<usize> = space.map(|s| s.dim());
    for (i, row) in rows.iter().enumerate() {
        let here = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| field_err(&here, "term must be an array"))?;
        if row.len() != C::PARTS + 1 {
            return Err(field_err(&here, format!("term must have {} entries, got {}", C::PARTS + 1, row.len())));
        }
        let parts = row[..C::PARTS]
            .iter()
            .enumerate()
            .map(|(k, v)| parse_int(v, &format!("{here}[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let c = C::from_parts(&parts).ok_or_else(|| field_err(&here, "zero denominator"))?;
        let exps = row[C::PARTS]
            .as_array()
            .ok_or_else(|| field_err(&here, "exponents must be an array"))?
            .iter()
            .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| field_err(&here, "exponents must be small non-negative integers"))?;
        match width {
            Some(w) if w != exps.len() => {
                return Err(field_err(&here, format!("exponent vector has length {}, expected {w}", exps.len())));
            }
            None => width = Some(exps.len()),
            _ => {}
        }
        terms.push((exps, c));
    }
    let space = space.unwrap_or_else(|| VarSpace::formal(width.unwrap_or(0)));
    let mut seen = std::collections::HashSet::new();
    for (e, _) in &terms {
        if !seen.insert(e.clone()) {
            return Err(field_err(path, format!("duplicate exponent vector {e:?}")));
        }
    }
    Polynomial::from_terms(space, terms).map_err(|e| field_err(path, e.to_string()))
}

fn test_to_value<C: Scalar>(t: &TestPolynomial<C>) -> Value {
    if t.is_factored() {
        json!({ "factors": t.factors().iter().map(terms_to_value).collect::<Vec<_>>() })
    } else {
        terms_to_value(&t.factors()[0])
    }
}

fn test_from_value<C: Scalar>(v: &Value, path: &str) -> Result<TestPolynomial<C>, FormatError> {
    match v.get("factors") {
        Some(factors) => {
            let list = factors.as_array().ok_or_else(|| field_err(path, "factors must be an array"))?;
            if list.is_empty() {
                return Err(field_err(path, "factor list is empty"));
            }
            let fs = list
                .iter()
                .enumerate()
                .map(|(i, f)| terms_from_value(f, None, &format!("{path}.factors[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TestPolynomial::product(fs))
        }
        None => Ok(terms_from_value(v, None, path)?.into()),
    }
}

#[derive(Serialize, Deserialize)]
struct RawBranch {
    signs: Vec<Sign>,
    child: Value,
}

#[derive(Serialize, Deserialize)]
struct RawNode {
    id: u32,
    party: Party,
    message: Value,
    #[serde(default)]
    tests: Vec<Value>,
    branches: Vec<RawBranch>,
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    field: FieldKind,
    n_x: usize,
    n_y: usize,
    #[serde(default = "default_frame")]
    frame: Frame,
    root: u32,
    nodes: Vec<RawNode>,
}

fn default_frame() -> Frame {
    Frame::XY
}

#[derive(Serialize, Deserialize)]
struct RawMember {
    weight: [Value; 2],
    tree: RawTree,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    field: FieldKind,
    n_x: usize,
    n_y: usize,
    #[serde(default = "default_frame")]
    frame: Frame,
    members: Vec<RawMember>,
}

fn child_to_value(c: &Child) -> Value {
    match c {
        Child::Node(id) => Value::from(*id),
        Child::Leaf(Verdict::Accept) => Value::from("accept"),
        Child::Leaf(Verdict::Reject) => Value::from("reject"),
    }
}

fn child_from_value(v: &Value, path: &str) -> Result<Child, FormatError> {
    match v {
        Value::String(s) if s == "accept" => Ok(Child::Leaf(Verdict::Accept)),
        Value::String(s) if s == "reject" => Ok(Child::Leaf(Verdict::Reject)),
        Value::Number(n) => n
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .map(Child::Node)
            .ok_or_else(|| field_err(path, format!("{n} is not a node id"))),
        other => Err(field_err(path, format!("child must be a node id, \"accept\" or \"reject\", got {other}"))),
    }
}

fn raw_tree<C: Scalar>(t: &ProtocolTree<C>) -> RawTree {
    let s = t.space();
    RawTree {
        field: C::FIELD,
        n_x: s.n_x(),
        n_y: s.n_y(),
        frame: s.frame(),
        root: t.root(),
        nodes: t
            .nodes()
            .map(|n| RawNode {
                id: n.id,
                party: n.party,
                message: terms_to_value(&n.message),
                tests: n.tests.iter().map(test_to_value).collect(),
                branches: n
                    .branches
                    .iter()
                    .map(|(k, c)| RawBranch { signs: k.clone(), child: child_to_value(c) })
                    .collect(),
            })
            .collect(),
    }
}

fn tree_from_raw<C: Scalar>(raw: &RawTree, path: &str) -> Result<ProtocolTree<C>, FormatError> {
    if raw.field != C::FIELD {
        return Err(FormatError::FieldKind { expected: C::FIELD, found: raw.field });
    }
    let space = VarSpace::new(raw.n_x, raw.n_y, raw.frame).map_err(|e| field_err(path, e.to_string()))?;
    let mut nodes = Vec::with_capacity(raw.nodes.len());
    for (i, n) in raw.nodes.iter().enumerate() {
        let here = format!("{path}nodes[{i}]");
        let message = terms_from_value(&n.message, Some(space), &format!("{here}.message"))?;
        let mut node = ProtocolNode::new(n.id, n.party, message);
        for (j, t) in n.tests.iter().enumerate() {
            node.tests.push(test_from_value(t, &format!("{here}.tests[{j}]"))?);
        }
        let mut branches = BTreeMap::new();
        for (j, b) in n.branches.iter().enumerate() {
            let bp = format!("{here}.branches[{j}]");
            if b.signs.len() != node.tests.len() {
                return Err(field_err(
                    &bp,
                    format!("branch key has {} signs, node has {} tests", b.signs.len(), node.tests.len()),
                ));
            }
            if branches.insert(b.signs.clone(), child_from_value(&b.child, &format!("{bp}.child"))?).is_some() {
                return Err(field_err(&bp, "duplicate branch key"));
            }
        }
        node.branches = branches;
        nodes.push(node);
    }
    Ok(ProtocolTree::validated(space, raw.root, nodes)?)
}

pub fn tree_to_value<C: Scalar>(t: &ProtocolTree<C>) -> Value {
    serde_json::to_value(raw_tree(t)).expect("protocol trees serialize")
}

pub fn tree_to_string<C: Scalar>(t: &ProtocolTree<C>) -> String {
    serde_json::to_string_pretty(&raw_tree(t)).expect("protocol trees serialize")
}

pub fn tree_from_str<C: Scalar>(text: &str) -> Result<ProtocolTree<C>, FormatError> {
    let raw: RawTree = serde_json::from_str(text)?;
    tree_from_raw(&raw, "")
}

fn raw_family<C: Scalar>(pp: &ProbabilisticProtocol<C>) -> RawFamily {
    let s = pp.space();
    RawFamily {
        field: C::FIELD,
        n_x: s.n_x(),
        n_y: s.n_y(),
        frame: s.frame(),
        members: pp
            .members()
            .iter()
            .map(|m| RawMember { weight: [int_value(m.weight.numer()), int_value(m.weight.denom())], tree: raw_tree(&m.tree) })
            .collect(),
    }
}

pub fn family_to_string<C: Scalar>(pp: &ProbabilisticProtocol<C>) -> String {
    serde_json::to_string_pretty(&raw_family(pp)).expect("protocol families serialize")
}

pub fn family_from_str<C: Scalar>(text: &str) -> Result<ProbabilisticProtocol<C>, FormatError> {
    let raw: RawFamily = serde_json::from_str(text)?;
    if raw.field != C::FIELD {
        return Err(FormatError::FieldKind { expected: C::FIELD, found: raw.field });
    }
    let mut members = Vec::with_capacity(raw.members.len());
    for (i, m) in raw.members.iter().enumerate() {
        let here = format!("members[{i}]");
        let num = parse_int(&m.weight[0], &format!("{here}.weight[0]"))?;
        let den = parse_int(&m.weight[1], &format!("{here}.weight[1]"))?;
        if den.is_zero() {
            return Err(field_err(&format!("{here}.weight"), "zero denominator"));
        }
        let tree = tree_from_raw::<C>(&m.tree, &format!("{here}.tree."))?;
        if (tree.space().n_x(), tree.space().n_y(), tree.space().frame()) != (raw.n_x, raw.n_y, raw.frame) {
            return Err(field_err(&here, "member space differs from the family space"));
        }
        members.push(Member { weight: Rational::new(num, den), tree });
    }
    Ok(ProbabilisticProtocol::new(members)?)
}

/// Any protocol document, dispatched on `field` and the presence of
/// `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolDocument {
    Real(ProtocolTree<Rational>),
    Complex(ProtocolTree<ComplexRational>),
    RealFamily(ProbabilisticProtocol<Rational>),
    ComplexFamily(ProbabilisticProtocol<ComplexRational>),
}

impl ProtocolDocument {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let v: Value = serde_json::from_str(text)?;
        let field = match v.get("field").and_then(Value::as_str) {
            Some("real") => FieldKind::Real,
            Some("complex") => FieldKind::Complex,
            Some(other) => return Err(field_err("field", format!("unknown field {other:?}"))),
            None => return Err(field_err("field", "missing")),
        };
        let family = v.get("members").is_some();
        Ok(match (field, family) {
            (FieldKind::Real, false) => ProtocolDocument::Real(tree_from_str(text)?),
            (FieldKind::Complex, false) => ProtocolDocument::Complex(tree_from_str(text)?),
            (FieldKind::Real, true) => ProtocolDocument::RealFamily(family_from_str(text)?),
            (FieldKind::Complex, true) => ProtocolDocument::ComplexFamily(family_from_str(text)?),
        })
    }

    pub fn space(&self) -> VarSpace {
        match self {
            ProtocolDocument::Real(t) => t.space(),
            ProtocolDocument::Complex(t) => t.space(),
            ProtocolDocument::RealFamily(p) => p.space(),
            ProtocolDocument::ComplexFamily(p) => p.space(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            ProtocolDocument::Real(t) => tree_to_string(t),
            ProtocolDocument::Complex(t) => tree_to_string(t),
            ProtocolDocument::RealFamily(p) => family_to_string(p),
            ProtocolDocument::ComplexFamily(p) => family_to_string(p),
        }
    }
}

pub fn set_to_value(s: &SetDescriptor) -> Value {
    match s {
        SetDescriptor::Orthant { n_x, n_y } | SetDescriptor::OrthantClosure { n_x, n_y } if n_x != n_y => {
            json!({ "variant": s.name(), "n_x": n_x, "n_y": n_y })
        }
        SetDescriptor::Arrangement { n, forms } => {
            json!({ "variant": s.name(), "n": n, "forms": forms.iter().map(terms_to_value).collect::<Vec<_>>() })
        }
        _ => json!({ "variant": s.name(), "n": s.space().n_x() }),
    }
}

pub fn set_from_value(v: &Value) -> Result<SetDescriptor, FormatError> {
    let variant = v.get("variant").and_then(Value::as_str).ok_or_else(|| field_err("variant", "missing"))?;
    let get = |key: &str| v.get(key).and_then(Value::as_u64).map(|n| n as usize);
    let n = get("n");
    let need_n = || n.ok_or_else(|| field_err("n", "missing"));
    let pair = || -> Result<(usize, usize), FormatError> {
        match (get("n_x"), get("n_y"), n) {
            (Some(a), Some(b), _) => Ok((a, b)),
            (None, None, Some(n)) => Ok((n, n)),
            _ => Err(field_err("n", "give n, or n_x and n_y")),
        }
    };
    Ok(match variant {
        "orthant" => {
            let (n_x, n_y) = pair()?;
            SetDescriptor::Orthant { n_x, n_y }
        }
        "orthant-closure" => {
            let (n_x, n_y) = pair()?;
            SetDescriptor::OrthantClosure { n_x, n_y }
        }
        "polyhedron-s" => SetDescriptor::PolyhedronS { n: need_n()? },
        "inner-product" => SetDescriptor::InnerProductHypersurface { n: need_n()? },
        "emptiness" => SetDescriptor::EmptinessSet { n: need_n()? },
        "knapsack" => SetDescriptor::KnapsackSet { n: need_n()? },
        "arrangement" => {
            let n = need_n()?;
            let forms = v.get("forms").and_then(Value::as_array).ok_or_else(|| field_err("forms", "missing"))?;
            let forms = forms
                .iter()
                .enumerate()
                .map(|(i, f)| terms_from_value(f, Some(VarSpace::xy(n, n)), &format!("forms[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            SetDescriptor::arrangement(n, forms).map_err(|e| field_err("forms", e.to_string()))?
        }
        other => return Err(field_err("variant", format!("unknown set {other:?}"))),
    })
}

/// `{n_x, n_y, frame, terms}`.
pub fn polynomial_to_value(p: &Polynomial) -> Value {
    let s = p.space();
    json!({ "n_x": s.n_x(), "n_y": s.n_y(), "frame": s.frame(), "terms": terms_to_value(p) })
}

pub fn polynomial_from_str(text: &str) -> Result<Polynomial, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let size = |k: &str| v.get(k).and_then(Value::as_u64).map(|n| n as usize).ok_or_else(|| field_err(k, "missing"));
    let frame: Frame = match v.get("frame") {
        Some(f) => serde_json::from_value(f.clone()).map_err(|e| field_err("frame", e.to_string()))?,
        None => Frame::XY,
    };
    let space = VarSpace::new(size("n_x")?, size("n_y")?, frame).map_err(|e| field_err("n_x", e.to_string()))?;
    terms_from_value(v.get("terms").ok_or_else(|| field_err("terms", "missing"))?, Some(space), "terms")
}

/// Parses expressions like `X1*Y1 + 2*X2^2*(Y2 - 1/3)` over `space`.
/// Variables are `X<i>`, `Y<i>` (or `Z<i>` in the `XZ` frame) and `Q<i>`
/// in a formal space, 1-based.
pub fn parse_polynomial(text: &str, space: VarSpace) -> Result<Polynomial, FormatError> {
    let mut p = ExprParser { chars: text.char_indices().peekable(), text, space };
    let out = p.sum()?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(p.err(i, format!("unexpected {c:?}")));
    }
    Ok(out)
}

struct ExprParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    space: VarSpace,
}

impl ExprParser<'_> {
    fn err(&self, at: usize, message: String) -> FormatError {
        field_err(&format!("column {}", at + 1), format!("{message} in {:?}", self.text))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn sum(&mut self) -> Result<Polynomial, FormatError> {
        self.skip_ws();
        let negate = self.eat('-');
        let mut acc = self.product()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, FormatError> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                self.skip_ws();
                let at = self.pos();
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(self.err(at, "can only divide by a nonzero constant".to_string()));
                }
                acc = acc.scale(&(Rational::one() / d.constant_term()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, FormatError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let e: u32 = digits.parse().map_err(|_| self.err(at, "expected an exponent".to_string()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, FormatError> {
        self.skip_ws();
        let at = self.pos();
        match self.chars.peek().map(|&(_, c)| c) {
            Some('(') => {
                self.chars.next();
                let inner = self.sum()?;
                self.skip_ws();
                if !self.eat(')') {
                    let at = self.pos();
                    return Err(self.err(at, "expected ')'".to_string()));
                }
                Ok(inner)
            }
            Some('-') => {
                self.chars.next();
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let digits = self.take_while(|c| c.is_ascii_digit() || c == '.');
                let r = parse_rational(&digits).ok_or_else(|| self.err(at, format!("bad number {digits:?}")))?;
                Ok(Polynomial::constant(self.space, r))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.chars.next();
                let digits = self.take_while(|c| c.is_ascii_digit());
                let i: usize = digits.parse().map_err(|_| self.err(at, format!("variable {c} needs an index")))?;
                let index = self.var_index(c.to_ascii_uppercase(), i).ok_or_else(|| self.err(at, format!("unknown variable {c}{i} in {}", self.space)))?;
                Ok(Polynomial::var(self.space, index))
            }
            Some(c) => Err(self.err(at, format!("unexpected {c:?}"))),
            None => Err(self.err(at, "unexpected end of input".to_string())),
        }
    }

    fn var_index(&self, letter: char, i: usize) -> Option<usize> {
        let s = self.space;
        let i = i.checked_sub(1)?;
        match (letter, s.frame()) {
            ('X', Frame::XY | Frame::XZ) if i < s.n_x() => Some(i),
            ('Y', Frame::XY) | ('Z', Frame::XZ) if i < s.n_y() => Some(s.n_x() + i),
            ('Q', Frame::Formal) if i < s.dim() => Some(i),
            _ => None,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.chars.peek().is_some_and(|&(_, d)| d == c) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map_or(self.text.len(), |&(i, _)| i)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !f(c) {
                break;
            }
            out.push(c);
            self.chars.next();
        }
        out
    }
}
