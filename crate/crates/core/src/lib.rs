//! Algebraic communication protocols over the reals and complexes.
//!
//! Two parties hold `x` and `y` and exchange values of polynomials in their
//! own variables; branching is on signs of testing polynomials in the
//! exchanged values. This crate evaluates such protocols exactly, on
//! rational inputs and at signed infinitesimal points, and produces
//! recheckable lower-bound certificates (Hessian rank, exponent-vector rank,
//! fooling pairs, hyperplane audits).

pub mod certify;
pub mod format;
pub mod gf2;
pub mod infinitesimal;
pub mod linalg;
pub mod poly;
pub mod protocol;
pub mod sampling;
pub mod scalar;
pub mod zoo;

pub use infinitesimal::{change_frame, least_term, sign_at, LeastTerm, SignPoint, TermOrder};
pub use poly::{Frame, Monomial, Pairing, PolyError, Polynomial, VarSpace};
pub use protocol::{
    Child, Party, ProbabilisticProtocol, ProtocolError, ProtocolNode, ProtocolTree, Sign,
    TestPolynomial, Transcript, Verdict,
};
pub use scalar::{ComplexRational, FieldKind, Rational, Scalar};
pub use certify::{PolyMatrix, RankCertificate, RankOptions};
pub use zoo::SetDescriptor;
