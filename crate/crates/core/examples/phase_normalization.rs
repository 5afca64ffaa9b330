// Conjugating a shift with complex weights to one with nonnegative weights.
//
// Run with `cargo run --example phase_normalization`.

use std::fmt::Write as _;

use fockshift::scalar::{gaussian, integer, rational, GaussianRational};
use fockshift::shift::{normalize_weights, ExplicitWeights, Normalization};

fn describe(
    out: &mut String,
    label: &str,
    raw: &ExplicitWeights<GaussianRational>,
) -> fockshift::Result<()> {
    let normalization = normalize_weights(raw, raw.depth())?;
    let check = normalization.check_conjugation(raw)?;
    writeln!(
        out,
        "{label}: exact = {}, conjugation holds = {}, weights nonnegative = {}, max deviation = {:e}",
        check.exact, check.holds, check.all_nonnegative, check.max_deviation
    )
    .unwrap();
    if let Normalization::Exact { unitary, .. } = &normalization {
        for (w, mu) in unitary.phases().take(5) {
            writeln!(
                out,
                "  mu({w}) = {}",
                fockshift::scalar::Scalar::to_export_string(mu)
            )
            .unwrap();
        }
    }
    Ok(())
}

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    // moduli 1, 5, 13, 25: every phase has rational coordinates
    let pythagorean = [
        gaussian(integer(0), integer(1)),
        gaussian(integer(3), integer(-4)),
        gaussian(integer(-5), integer(12)),
        gaussian(integer(-7), integer(-24)),
    ];
    let raw = ExplicitWeights::from_fn(2, 3, |i, w| pythagorean[(i + w.len()) % 4].clone())?;
    describe(&mut out, "Pythagorean weights", &raw)?;

    let raw = ExplicitWeights::from_fn(2, 3, |i, w| {
        gaussian(integer(i as i64), rational(1, w.len() as i64 + 1))
    })?;
    describe(&mut out, "generic weights", &raw)?;
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
