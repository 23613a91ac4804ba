//! Certified bounds for slice genus, τ, s, Arf, Thurston–Bennequin lower
//! bounds and r-shake genus over a small language of knot expressions.
//!
//! Every bound carries a derivation trace back to the rules that produced
//! it. The main entry points are [`parse_expr`], [`normalize`] and
//! [`engine::propagate`].

pub mod alexander;
pub mod engine;
pub mod exec;
pub mod expr;
pub mod family;
pub mod front;
pub mod gluing;
pub mod interval;
pub mod legendrian;
pub mod normalize;
pub mod parse;
pub mod pattern;
pub mod report;
pub mod shake;
pub mod suitability;
pub mod trace;
pub mod verdict;

pub use engine::{propagate, ExternalFact, FactStore, Inv, Order, Query};
pub use expr::{KnotExpr, PatternRef};
pub use normalize::normalize;
pub use parse::parse_expr;
pub use pattern::{PatternDatum, Registry};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("torus parameters ({p}, {q}) at byte {pos} are not coprime")]
    NonCoprime { pos: usize, p: i64, q: i64 },
    #[error("torus parameters ({p}, {q}) at byte {pos} must both be at least 2")]
    TorusRange { pos: usize, p: i64, q: i64 },
    #[error("registry: {0}")]
    Registry(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("front: {0}")]
    Front(String),
    #[error("{0}")]
    Contradiction(Box<engine::Contradiction>),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
