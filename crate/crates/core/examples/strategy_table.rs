//! Prints the strategy table of the reference tree.

use qdt::decision_tree::{enumerate_strategies, parse, value_operator_of, REFERENCE_TREE};

fn main() {
    let tree = parse(REFERENCE_TREE).expect("reference tree parses");
    for s in enumerate_strategies(&tree, 64).expect("four strategies") {
        let vo = value_operator_of(&s);
        println!(
            "S{} {:<16} w={} p1={:.4} p2={:.4}",
            s.id + 1,
            s.expr,
            s.weight,
            vo.p1,
            vo.p2
        );
    }
}
