// Weighted shifts: factorization through creation operators, norms, and
// recovery of the creation operators from a shift bounded below.
//
// Run with `cargo run --example weighted_shift`.

use std::fmt::Write as _;

use fockshift::fock::{creation_operator, TruncatedFockSpace};
use fockshift::periodicity::{periodic_weight, two_letter_period_two};
use fockshift::scalar::{integer, rational};
use fockshift::shift::{
    build_shift, check_factorization, estimate_norm, is_bounded_below, recover_creation, row_norm,
    shift_norm, weight_operator,
};

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    let top = two_letter_period_two(
        integer(2),
        integer(1),
        rational(1, 2),
        rational(3, 4),
        integer(1),
        rational(5, 3),
    );
    let weights = periodic_weight(&top);
    let space = TruncatedFockSpace::new(2, 4)?;
    let shifts = build_shift(&weights, space)?;

    let report = check_factorization(&shifts)?;
    writeln!(
        out,
        "T_i = L_i W_i on words up to length {}: {}",
        report.checked_up_to_length, report.passed
    )
    .unwrap();

    for (idx, t) in shifts.iter().enumerate() {
        let letter = idx + 1;
        let w = weight_operator(t, letter)?;
        let norm = shift_norm(&weights, letter)?;
        writeln!(
            out,
            "||T_{letter}|| = {} (power iteration on the truncation: {:.6}), W_{letter} has {} nonzero entries",
            norm.value,
            estimate_norm(t),
            w.matrix().nnz()
        )
        .unwrap();
    }
    writeln!(out, "||T|| = {}", row_norm(&weights)?.value).unwrap();

    let below = is_bounded_below(&weights)?;
    writeln!(
        out,
        "bounded below: {} (infimum {})",
        below.holds, below.infimum
    )
    .unwrap();
    let l1 = recover_creation(&shifts[0], 1)?;
    let exact = l1.equality_on_subspace(&creation_operator(1, space)?, space.max_length() - 1)?;
    writeln!(out, "recovered L_1 matches the creation operator: {exact}").unwrap();

    let degenerate = top.with_value(2, &fockshift::words::Word::parse(2, "1")?, integer(0))?;
    let shifts = build_shift(&periodic_weight(&degenerate), space)?;
    match recover_creation(&shifts[1], 2) {
        Ok(_) => writeln!(out, "unexpected recovery").unwrap(),
        Err(e) => writeln!(out, "with a zero weight: {e}").unwrap(),
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
