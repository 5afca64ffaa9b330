// Creation operators on truncated Fock space and the Cuntz-Toeplitz relations.
//
// Run with `cargo run --example creation_operators`.

use std::fmt::Write as _;

use fockshift::fock::{
    check_ct_relations, creation_operator, creation_operators, TruncatedFockSpace,
};
use fockshift::scalar::Rational;
use fockshift::words::Word;

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    let space = TruncatedFockSpace::new(2, 3)?;
    writeln!(out, "N = 2, L = 3, dimension {}", space.dimension()).unwrap();

    let l2 = creation_operator::<Rational>(2, space)?;
    let xi = space.basis_vector::<Rational>(&Word::parse(2, "11")?)?;
    let image = l2.apply_to_vector(&xi)?;
    let (&idx, _) = image.iter().next().expect("nonzero image");
    writeln!(out, "L_2 sends 11 to {}", space.word(idx)).unwrap();
    let top = space.basis_vector::<Rational>(&Word::parse(2, "121")?)?;
    writeln!(
        out,
        "L_2 sends the top level to zero: {}",
        l2.apply_to_vector(&top)?.is_empty()
    )
    .unwrap();

    for n in 2..=4 {
        for l in 2..=5 {
            let space = TruncatedFockSpace::new(n, l)?;
            let report = check_ct_relations(&creation_operators::<Rational>(space))?;
            writeln!(
                out,
                "N = {n}, L = {l}: relations {} on words up to length {}",
                if report.passed { "hold" } else { "fail" },
                report.checked_up_to_length
            )
            .unwrap();
        }
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
