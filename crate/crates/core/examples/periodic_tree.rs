// Period-k weights from a tree top: the weighted Fock tree, period
// detection, and containment of period-n1 weights in period n2.
//
// Run with `cargo run --example periodic_tree`.

use std::fmt::Write as _;

use fockshift::periodicity::{
    default_containment_depth, detect_period, distinct_path_tuples, export_tree, periodic_weight,
    two_letter_period_two, verify_containment,
};
use fockshift::scalar::{integer, rational};
use fockshift::shift::ExplicitWeights;

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    let top = two_letter_period_two(
        integer(1),
        integer(1),
        rational(1, 2),
        rational(1, 4),
        rational(1, 8),
        rational(1, 16),
    );
    let weights = periodic_weight(&top);

    let tree = export_tree(&weights, 3)?;
    writeln!(
        out,
        "tree to depth 3: {} vertices, {} edges",
        tree.vertices.len(),
        tree.edges.len()
    )
    .unwrap();
    out.push_str(&tree.to_dot());

    let samples = ExplicitWeights::sample(&weights, 8)?;
    writeln!(out, "detected period: {:?}", detect_period(&samples, 4)?).unwrap();
    writeln!(out, "distinct path tuples: {}", distinct_path_tuples(&top)).unwrap();

    for n2 in [2, 4, 6] {
        let report = verify_containment(&top, n2, default_containment_depth(n2))?;
        writeln!(
            out,
            "period 2 weights also have period {n2} to depth {}: {}",
            report.depth, report.holds
        )
        .unwrap();
    }
    match verify_containment(&top, 3, 5) {
        Ok(_) => writeln!(out, "unexpected containment").unwrap(),
        Err(e) => writeln!(out, "period 3: {e}").unwrap(),
    }
    Ok(out)
}

fn main() {
    match run() {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
