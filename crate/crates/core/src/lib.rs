//! Exact polynomial arithmetic in `q`, combinatorial triangles from
//! three-term recurrences, log-concavity preserving transforms, and
//! bounded-range verifiers for strong q-log-concavity criteria.

pub mod coeffexpr;
pub mod criteria;
pub mod qpoly;
pub mod seqprops;
pub mod transforms;
pub mod triangles;

#[cfg(feature = "cli")]
pub mod cli;

pub use coeffexpr::{CoeffExpr, ParseError};
pub use criteria::{
    check_constant_criterion, check_criterion, confirm_conclusion, CriteriaError, CriterionReport,
};
pub use qpoly::{q_geq, q_geq_witness, QPoly};
pub use seqprops::{PolySeq, Report, SeqError, Witness};
pub use transforms::{BinomialParams, TransformError, Window};
pub use triangles::{build, builtin, Triangle, TriangleError, TriangleSpec};
