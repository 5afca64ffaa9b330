// Canonical word order, indices, and the block bijection φ.
//
// Run with `cargo run --example word_indexing`.

use std::fmt::Write as _;

use fockshift::words::{
    enumerate_words, periodic_decompose, phi, phi_extended, phi_inverse, word_at, word_index, Word,
    WordIndex,
};

pub fn run() -> fockshift::Result<String> {
    let mut out = String::new();
    let words: Vec<String> = (0..7)
        .map(|i| word_at(2, WordIndex(i)).to_string())
        .collect();
    writeln!(out, "first words over two letters: {}", words.join(" ")).unwrap();

    let w = Word::parse(3, "213")?;
    writeln!(out, "index of {w} over three letters: {}", word_index(&w).0).unwrap();

    let level_two: Vec<String> = enumerate_words(3, 2)?
        .iter()
        .map(ToString::to_string)
        .collect();
    writeln!(
        out,
        "length two over three letters: {}",
        level_two.join(" ")
    )
    .unwrap();

    let w = Word::parse(2, "12212")?;
    let (u, v) = periodic_decompose(&w, 2)?;
    writeln!(out, "{w} = {u} · {v} with |v| a multiple of 2").unwrap();

    for s in ["11", "12", "21", "22"] {
        let w = Word::parse(2, s)?;
        writeln!(out, "phi({w}) = {}", phi(&w, 2)?).unwrap();
    }
    let w = Word::parse(2, "1221")?;
    let big = phi_extended(&w, 2)?;
    writeln!(out, "phi({w}) = {big} over four letters").unwrap();
    writeln!(out, "phi^-1({big}) = {}", phi_inverse(&big, 2, 2)?).unwrap();
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
