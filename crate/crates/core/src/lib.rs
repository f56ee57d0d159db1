//! Exact arithmetic for deciding which modular curves X_0(N) carry
//! infinitely many cubic points, with replayable certificates.

pub mod bounds;
pub mod curvedata;
pub mod ecdb;
pub mod error;
pub mod hecke;
pub mod numth;
pub mod replay;
pub mod sieve;

pub use bounds::{BoundEvidence, BoundKind, CountMode};
pub use curvedata::{ClassificationFlags, CurveInvariants};
pub use ecdb::{EcDb, EllipticCurveRecord, IsogenyClassSummary};
pub use error::{Error, Result};
pub use hecke::{LocalZeta, TraceValue};
pub use numth::{Factorization, Rational};
pub use sieve::{Certificate, RuleId, RuleInstance, SieveConfig, TheoremReport, Verdict};
