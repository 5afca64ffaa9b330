// Conjugating a period-k shift into a d(N,k) × d(N,k) grid of weighted
// creation operators on the Fock space over N^k letters.
//
// Run with `cargo run --example block_decomposition`.

use std::fmt::Write as _;

use fockshift::decomposition::{
    build_unitaries, conjugate_shift, predicted_blocks, verify_theorem,
};
use fockshift::periodicity::{periodic_weight, two_letter_period_two};
use fockshift::scalar::{integer, rational};
use fockshift::shift::build_shift;

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

    let unitaries = build_unitaries(2, 2, 1)?;
    writeln!(
        out,
        "N = 2, k = 2, m = 1: L = {}, grid {} x {}, blocks of dimension {}",
        unitaries.fock_space().max_length(),
        unitaries.grid(),
        unitaries.grid(),
        unitaries.block_space().dimension()
    )
    .unwrap();

    let shifts = build_shift(&periodic_weight(&top), unitaries.fock_space())?;
    for (idx, t) in shifts.iter().enumerate() {
        let letter = idx + 1;
        let blocks = conjugate_shift(t, &unitaries)?;
        let predicted = predicted_blocks(&top, letter, 1)?;
        writeln!(out, "T_{letter}:").unwrap();
        for (row, col) in blocks.nonzero_blocks() {
            let op = predicted.block(&row, &col)?.expect("predicted block");
            let scale = op
                .matrix()
                .entries()
                .next()
                .map(|(_, _, v)| v.to_string())
                .unwrap_or_default();
            let diagonal = op.matrix().entries().all(|(r, c, _)| r == c);
            let kind = if diagonal {
                "I".to_string()
            } else {
                let (r, c, _) = op.matrix().entries().next().expect("nonzero");
                let space = op.space();
                let letter = space.word(r).letters()[0];
                debug_assert_eq!(space.word(c).len() + 1, space.word(r).len());
                format!("L_{letter}")
            };
            writeln!(out, "  block ({row}, {col}) = {scale}·{kind}").unwrap();
        }
    }

    for m in [1, 2] {
        let report = verify_theorem(&top, m)?;
        writeln!(
            out,
            "m = {m}: theorem verified = {} at L = {}",
            report.passed, report.max_length
        )
        .unwrap();
    }

    // printed convention: letters 2 and 3 swapped
    let t1 = conjugate_shift(&shifts[0], &unitaries)?.relabel_letters(&[1, 3, 2, 4])?;
    let (row, col) = (
        fockshift::words::Word::empty(2),
        fockshift::words::Word::parse(2, "2")?,
    );
    let block = t1.block(&row, &col)?.expect("nonzero");
    let (r, _, v) = block.matrix().entries().next().expect("nonzero");
    writeln!(
        out,
        "after swapping letters 2 and 3, block (e, 2) of T_1 is {v}·L_{}",
        block.space().word(r).letters()[0]
    )
    .unwrap();
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
