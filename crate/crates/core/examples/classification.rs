// Supernatural numbers of divisor sequences and the K0 criterion.
//
// Run with `cargo run --example classification`.

use std::fmt::Write as _;

use fockshift::classify::{
    classify, d_divides_iff, expansion_witness, k0_order, supernatural_from_sequence,
    DivisorSequence, SupernaturalNumber,
};

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    let a: DivisorSequence = "2,4,8".parse()?;
    let b: DivisorSequence = "4,8".parse()?;
    let c: DivisorSequence = "3,6".parse()?;
    for s in [&a, &b, &c] {
        writeln!(out, "({s}) -> {}", supernatural_from_sequence(s)).unwrap();
    }
    let declared: SupernaturalNumber = "2^3 · 3^inf".parse()?;
    writeln!(out, "declared: {declared}").unwrap();

    for (x, y) in [(&a, &b), (&a, &c)] {
        let report = classify(2, x, y)?;
        writeln!(out, "({x}) vs ({y}): {}", report.verdict()).unwrap();
    }

    for (n, m) in [(2, 4), (2, 3), (3, 9)] {
        let (d, plain) = d_divides_iff(2, n, m)?;
        writeln!(out, "d(2,{n}) | d(2,{m}): {d}, {n} | {m}: {plain}").unwrap();
    }
    let witness = expansion_witness(3, 2, 6)?;
    writeln!(
        out,
        "d(3,6)/d(3,2) = {} = digits {:?} in base {}",
        witness.quotient, witness.digits, witness.base
    )
    .unwrap();
    writeln!(out, "K0 order for N = 2, k = 3: {}", k0_order(2, 3)?.order).unwrap();
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
