//! Quantum decision trees: text format, random generation, OR-node strategy
//! semantics, and the decision procedure.

mod expr;
mod parse;
mod random;
mod strategy;

pub use expr::{Op, QdtExpr};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use random::random_tree;
pub use strategy::{
    decide, enumerate_strategies, evaluate_strategy, sample_strategy, strategy_count,
    value_operator_of, Action, Decision, EnumerationOverflow, Policy, Strategy,
    DEFAULT_STRATEGY_CAP,
};

/// Canonical text of the optimized tree reported for the cat experiment,
/// with its first OR branch grouped as `(I//H)+I`.
pub const REFERENCE_TREE: &str = "(((I//H)+I)//((Z+(D*(S//T)))*X))";

/// `e.to_text()`.
pub fn to_text(e: &QdtExpr) -> String {
    e.to_text()
}
