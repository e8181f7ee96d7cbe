//! OR-node semantics: a tree is a mixed strategy over its OR-free
//! expansions. Each OR node met on a realized path is a fair coin.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use super::expr::{Op, QdtExpr};
use crate::gate_algebra::{eigen2, normalize_to_beliefs, Mat2, ValueOperator};

/// Default number of strategies an enumeration may produce.
pub const DEFAULT_STRATEGY_CAP: usize = 64;

/// One OR-free expansion of a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub expr: QdtExpr,
    /// Probability of realizing this expansion, a product of 1/2 per OR node
    /// resolved on its path.
    pub weight: f64,
    /// Position in enumeration order (left branches before right).
    pub id: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("tree has {count} strategies, more than the cap of {cap}")]
pub struct EnumerationOverflow {
    /// Saturates at `u64::MAX`.
    pub count: u64,
    pub cap: usize,
}

/// Number of distinct strategies, saturating at `u64::MAX`.
pub fn strategy_count(e: &QdtExpr) -> u64 {
    match e {
        QdtExpr::Leaf(_) => 1,
        QdtExpr::Node(Op::Or, l, r) => strategy_count(l).saturating_add(strategy_count(r)),
        QdtExpr::Node(_, l, r) => strategy_count(l).saturating_mul(strategy_count(r)),
    }
}

/// All OR-free expansions with their weights, in enumeration order, or an
/// overflow if there are more than `cap`.
pub fn enumerate_strategies(e: &QdtExpr, cap: usize) -> Result<Vec<Strategy>, EnumerationOverflow> {
    let count = strategy_count(e);
    if count > cap as u64 {
        return Err(EnumerationOverflow { count, cap });
    }
    Ok(expand(e)
        .into_iter()
        .enumerate()
        .map(|(id, (expr, weight))| Strategy {
            expr,
            weight,
            id: id as u64,
        })
        .collect())
}

fn expand(e: &QdtExpr) -> Vec<(QdtExpr, f64)> {
    match e {
        QdtExpr::Leaf(_) => vec![(e.clone(), 1.0)],
        QdtExpr::Node(Op::Or, l, r) => expand(l)
            .into_iter()
            .chain(expand(r))
            .map(|(x, w)| (x, 0.5 * w))
            .collect(),
        QdtExpr::Node(op, l, r) => {
            let rs = expand(r);
            let mut out = Vec::new();
            for (lx, lw) in expand(l) {
                for (rx, rw) in &rs {
                    out.push((QdtExpr::node(*op, lx.clone(), rx.clone()), lw * rw));
                }
            }
            out
        }
    }
}

/// Draws one strategy by flipping a fair coin at every OR node on the
/// realized path (`true` keeps the left branch).
pub fn sample_strategy<R: Rng + ?Sized>(e: &QdtExpr, rng: &mut R) -> Strategy {
    let (expr, weight, id) = sample_path(e, rng);
    Strategy { expr, weight, id }
}

fn sample_path<R: Rng + ?Sized>(e: &QdtExpr, rng: &mut R) -> (QdtExpr, f64, u64) {
    match e {
        QdtExpr::Leaf(_) => (e.clone(), 1.0, 0),
        QdtExpr::Node(Op::Or, l, r) => {
            if rng.gen_bool(0.5) {
                let (x, w, id) = sample_path(l, rng);
                (x, 0.5 * w, id)
            } else {
                let (x, w, id) = sample_path(r, rng);
                (x, 0.5 * w, strategy_count(l).saturating_add(id))
            }
        }
        QdtExpr::Node(op, l, r) => {
            let (lx, lw, lid) = sample_path(l, rng);
            let (rx, rw, rid) = sample_path(r, rng);
            let id = lid.saturating_mul(strategy_count(r)).saturating_add(rid);
            (QdtExpr::node(*op, lx, rx), lw * rw, id)
        }
    }
}

/// Matrix of an OR-free strategy.
pub fn evaluate_strategy(s: &Strategy) -> Mat2 {
    debug_assert!(!s.expr.has_or());
    s.expr.evaluate()
}

pub fn value_operator_of(s: &Strategy) -> ValueOperator {
    normalize_to_beliefs(&eigen2(&evaluate_strategy(s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    A1BelieveAlive,
    A2BelieveDead,
}

impl Action {
    pub fn believes_alive(self) -> bool {
        self == Action::A1BelieveAlive
    }

    pub fn label(self) -> &'static str {
        match self {
            Action::A1BelieveAlive => "alive",
            Action::A2BelieveDead => "dead",
        }
    }
}

/// The outcome of one measurement of the observer's mental state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub action: Action,
    /// Probability the chosen action had.
    pub belief: f64,
    pub strategy_id: u64,
    pub value_operator: ValueOperator,
}

impl Decision {
    /// Belief with sign: positive for alive, negative for dead.
    pub fn signed_belief(&self) -> f64 {
        match self.action {
            Action::A1BelieveAlive => self.belief,
            Action::A2BelieveDead => -self.belief,
        }
    }
}

fn measure<R: Rng + ?Sized>(vo: ValueOperator, strategy_id: u64, rng: &mut R) -> Decision {
    let alive = rng.gen::<f64>() < vo.p1;
    let (action, belief) = if alive {
        (Action::A1BelieveAlive, vo.p1)
    } else {
        (Action::A2BelieveDead, vo.p2)
    };
    Decision {
        action,
        belief,
        strategy_id,
        value_operator: vo,
    }
}

/// Samples a strategy, then an action with the strategy's belief pair.
pub fn decide<R: Rng + ?Sized>(e: &QdtExpr, rng: &mut R) -> Decision {
    let s = sample_strategy(e, rng);
    let vo = value_operator_of(&s);
    measure(vo, s.id, rng)
}

/// A tree prepared for repeated decisions. Value operators are memoized per
/// strategy id; draws are identical to [`decide`] for the same stream.
pub struct Policy<'a> {
    tree: &'a QdtExpr,
    cache: HashMap<u64, ValueOperator>,
    cacheable: bool,
}

impl<'a> Policy<'a> {
    pub fn new(tree: &'a QdtExpr) -> Self {
        Policy {
            tree,
            cache: HashMap::new(),
            cacheable: strategy_count(tree) < u64::MAX,
        }
    }

    pub fn tree(&self) -> &QdtExpr {
        self.tree
    }

    pub fn decide<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Decision {
        let s = sample_strategy(self.tree, rng);
        let vo = if self.cacheable {
            *self
                .cache
                .entry(s.id)
                .or_insert_with(|| value_operator_of(&s))
        } else {
            value_operator_of(&s)
        };
        measure(vo, s.id, rng)
    }
}
