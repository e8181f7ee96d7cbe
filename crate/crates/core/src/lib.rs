//! Quantum decision trees evolved by genetic programming.
//!
//! A decision tree is an expression over the eight single-qubit gates
//! combined by matrix sum, matrix product and a probabilistic OR. Each
//! OR-free expansion of a tree evaluates to a 2×2 matrix whose eigenvalue
//! magnitudes, normalized, give an observer's beliefs that a cat is alive
//! or dead. Trees are scored against a simulated measurement history and
//! improved by selection, crossover and mutation.

pub mod cat_environment;
pub mod decision_tree;
pub mod experiments;
pub mod gate_algebra;
pub mod genetic_program;

pub use cat_environment::{CatHistory, CatState, EnvConfig};
pub use decision_tree::{parse, Action, Decision, QdtExpr, Strategy};
pub use gate_algebra::{Complex, EigenPair, Gate, Mat2, ValueOperator};
pub use genetic_program::{evolve, FitnessMode, GpConfig, Individual};
