use rand::Rng;

use super::expr::{Op, QdtExpr};
use crate::gate_algebra::Gate;

/// Grows a random tree whose depth lies in `[min_depth, max_depth]`.
///
/// Levels shallower than `min_depth` are always interior, level `max_depth`
/// is always a leaf, and in between a node is a leaf with probability
/// 8/11 (one draw over the 3 operators and 8 gates). Operators and gates are
/// each drawn uniformly.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, min_depth: usize, max_depth: usize) -> QdtExpr {
    assert!(
        1 <= min_depth && min_depth <= max_depth,
        "random_tree needs 1 <= min_depth <= max_depth, got {min_depth}..{max_depth}"
    );
    grow(rng, 1, min_depth, max_depth)
}

fn grow<R: Rng + ?Sized>(rng: &mut R, level: usize, min_depth: usize, max_depth: usize) -> QdtExpr {
    let primitives = Op::ALL.len() + Gate::ALL.len();
    let leaf = if level >= max_depth {
        true
    } else if level < min_depth {
        false
    } else {
        rng.gen_range(0..primitives) >= Op::ALL.len()
    };
    if leaf {
        QdtExpr::Leaf(Gate::ALL[rng.gen_range(0..Gate::ALL.len())])
    } else {
        let op = Op::ALL[rng.gen_range(0..Op::ALL.len())];
        let l = grow(rng, level + 1, min_depth, max_depth);
        let r = grow(rng, level + 1, min_depth, max_depth);
        QdtExpr::node(op, l, r)
    }
}
