use std::fmt;

use crate::gate_algebra::{add, gate_matrix, mul, Gate, Mat2};

/// Interior node operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// Matrix sum.
    Add,
    /// Matrix product.
    Mul,
    /// Probabilistic choice between the two branches.
    Or,
}

impl Op {
    pub const ALL: [Op; 3] = [Op::Add, Op::Mul, Op::Or];

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Mul => "*",
            Op::Or => "//",
        }
    }
}

/// A quantum decision tree: gates at the leaves, binary operators inside.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QdtExpr {
    Leaf(Gate),
    Node(Op, Box<QdtExpr>, Box<QdtExpr>),
}

impl QdtExpr {
    pub fn leaf(g: Gate) -> Self {
        QdtExpr::Leaf(g)
    }

    pub fn node(op: Op, left: QdtExpr, right: QdtExpr) -> Self {
        QdtExpr::Node(op, Box::new(left), Box::new(right))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(left: QdtExpr, right: QdtExpr) -> Self {
        QdtExpr::node(Op::Add, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(left: QdtExpr, right: QdtExpr) -> Self {
        QdtExpr::node(Op::Mul, left, right)
    }

    pub fn or(left: QdtExpr, right: QdtExpr) -> Self {
        QdtExpr::node(Op::Or, left, right)
    }

    /// A lone leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            QdtExpr::Leaf(_) => 1,
            QdtExpr::Node(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            QdtExpr::Leaf(_) => 1,
            QdtExpr::Node(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    pub fn or_count(&self) -> usize {
        match self {
            QdtExpr::Leaf(_) => 0,
            QdtExpr::Node(op, l, r) => (*op == Op::Or) as usize + l.or_count() + r.or_count(),
        }
    }

    pub fn has_or(&self) -> bool {
        match self {
            QdtExpr::Leaf(_) => false,
            QdtExpr::Node(Op::Or, _, _) => true,
            QdtExpr::Node(_, l, r) => l.has_or() || r.has_or(),
        }
    }

    /// Subtree at pre-order position `index` (root is 0), with its level
    /// (root is level 1).
    pub fn subtree(&self, index: usize) -> Option<(&QdtExpr, usize)> {
        fn walk(e: &QdtExpr, index: usize, level: usize) -> Option<(&QdtExpr, usize)> {
            if index == 0 {
                return Some((e, level));
            }
            match e {
                QdtExpr::Leaf(_) => None,
                QdtExpr::Node(_, l, r) => {
                    let nl = l.node_count();
                    if index <= nl {
                        walk(l, index - 1, level + 1)
                    } else {
                        walk(r, index - 1 - nl, level + 1)
                    }
                }
            }
        }
        walk(self, index, 1)
    }

    /// Copy of `self` with the subtree at pre-order `index` replaced.
    /// Returns `None` if `index` is out of range.
    pub fn replace_subtree(&self, index: usize, replacement: &QdtExpr) -> Option<QdtExpr> {
        if index == 0 {
            return Some(replacement.clone());
        }
        match self {
            QdtExpr::Leaf(_) => None,
            QdtExpr::Node(op, l, r) => {
                let nl = l.node_count();
                if index <= nl {
                    let l = l.replace_subtree(index - 1, replacement)?;
                    Some(QdtExpr::node(*op, l, (**r).clone()))
                } else {
                    let r = r.replace_subtree(index - 1 - nl, replacement)?;
                    Some(QdtExpr::node(*op, (**l).clone(), r))
                }
            }
        }
    }

    /// Folds an OR-free tree into its matrix. OR nodes are not meaningful
    /// here and panic in debug builds; use strategy enumeration first.
    pub fn evaluate(&self) -> Mat2 {
        match self {
            QdtExpr::Leaf(g) => gate_matrix(*g),
            QdtExpr::Node(op, l, r) => {
                let (a, b) = (l.evaluate(), r.evaluate());
                match op {
                    Op::Add => add(&a, &b),
                    Op::Mul => mul(&a, &b),
                    Op::Or => {
                        debug_assert!(false, "evaluate called on a tree with OR nodes");
                        add(&a, &b)
                    }
                }
            }
        }
    }

    /// Canonical fully parenthesized text, e.g. `((I//H)+I)`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QdtExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QdtExpr::Leaf(g) => write!(f, "{g}"),
            QdtExpr::Node(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
        }
    }
}

impl From<Gate> for QdtExpr {
    fn from(g: Gate) -> Self {
        QdtExpr::Leaf(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Gate::*;

    fn sample() -> QdtExpr {
        // ((I//H)+I)
        QdtExpr::add(QdtExpr::or(I.into(), H.into()), I.into())
    }

    #[test]
    fn depth_and_counts() {
        assert_eq!(QdtExpr::leaf(H).depth(), 1);
        let e = sample();
        assert_eq!(e.depth(), 3);
        assert_eq!(e.node_count(), 5);
        assert_eq!(e.or_count(), 1);
        assert!(e.has_or());
    }

    #[test]
    fn text_form() {
        assert_eq!(QdtExpr::leaf(H).to_text(), "H");
        assert_eq!(QdtExpr::add(H.into(), I.into()).to_text(), "(H+I)");
        assert_eq!(sample().to_text(), "((I//H)+I)");
    }

    #[test]
    fn preorder_indexing() {
        let e = sample();
        let (root, lvl) = e.subtree(0).unwrap();
        assert_eq!((root, lvl), (&e, 1));
        assert_eq!(e.subtree(1).unwrap().0.to_text(), "(I//H)");
        assert_eq!(e.subtree(2).unwrap(), (&QdtExpr::Leaf(I), 3));
        assert_eq!(e.subtree(3).unwrap(), (&QdtExpr::Leaf(H), 3));
        assert_eq!(e.subtree(4).unwrap(), (&QdtExpr::Leaf(I), 2));
        assert!(e.subtree(5).is_none());
    }

    #[test]
    fn replace() {
        let e = sample();
        let r = e.replace_subtree(3, &QdtExpr::Leaf(X)).unwrap();
        assert_eq!(r.to_text(), "((I//X)+I)");
        assert_eq!(
            e.replace_subtree(0, &QdtExpr::Leaf(Z)).unwrap(),
            QdtExpr::Leaf(Z)
        );
        assert!(e.replace_subtree(9, &QdtExpr::Leaf(Z)).is_none());
    }
}
