//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fockshift::classify::{
    d_divides_iff, expansion_witness, k0_isomorphic, supernatural_eq, DivisorSequence,
};
use fockshift::config::random_top;
use fockshift::decomposition::{build_unitaries, conjugate_shift, indicator_top, verify_theorem};
use fockshift::fock::{
    check_ct_relations, creation_operator, creation_operators, TruncatedFockSpace,
    TruncatedOperator,
};
use fockshift::periodicity::{
    default_containment_depth, periodic_weight, two_letter_period_two, verify_containment,
    WeightTop,
};
use fockshift::scalar::{
    gaussian, integer, norm_sqr, rational, rational_sqrt, GaussianRational, Rational,
};
use fockshift::shift::{
    build_shift, check_factorization, normalize_weights, recover_creation, row_norm, shift_norm,
    weight_operator, ExplicitWeights,
};
use fockshift::words::{phi, words_up_to, Word};
use fockshift::Error;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_secs), || {
        format!("took {:.2} s, limit {limit_secs} s", elapsed.as_secs_f64())
    })
}

fn example_top() -> WeightTop {
    two_letter_period_two(
        integer(1),
        integer(1),
        rational(1, 2),
        rational(1, 4),
        rational(1, 8),
        rational(1, 16),
    )
}

fn random_positive_top(rng: &mut ChaCha8Rng, n: usize, k: usize) -> WeightTop {
    WeightTop::from_fn(n, k, |_, _| {
        rational(rng.gen_range(1..=9), rng.gen_range(1..=9))
    })
    .unwrap()
}

fn cuntz_toeplitz() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 2..=4 {
        for l in 2..=5 {
            let space = TruncatedFockSpace::new(n, l).map_err(|e| e.to_string())?;
            let report = check_ct_relations(&creation_operators::<Rational>(space))
                .map_err(|e| e.to_string())?;
            ensure(report.passed, || {
                format!("N={n} L={l}: {:?}", report.violation)
            })?;
            cases += 1;
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!("{cases} (N, L) pairs exact"))
}

fn phase_normalization() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let units = [
        gaussian(integer(1), integer(0)),
        gaussian(integer(0), integer(1)),
        gaussian(rational(3, 5), rational(4, 5)),
        gaussian(rational(5, 13), rational(-12, 13)),
        gaussian(rational(-8, 17), rational(15, 17)),
        gaussian(rational(-7, 25), rational(-24, 25)),
    ];
    let (mut exact, mut inexact) = (0, 0);
    for set in 0..50 {
        let raw: ExplicitWeights<GaussianRational> = if set % 2 == 0 {
            ExplicitWeights::from_fn(2, 3, |_, _| {
                let r = rational(rng.gen_range(0..=6), rng.gen_range(1..=6));
                let u = units.choose(&mut rng).unwrap().clone();
                GaussianRational::new(u.re * &r, u.im * r)
            })
        } else {
            ExplicitWeights::from_fn(2, 3, |_, _| {
                gaussian(
                    rational(rng.gen_range(-6..=6), rng.gen_range(1..=6)),
                    rational(rng.gen_range(-6..=6), rng.gen_range(1..=6)),
                )
            })
        }
        .map_err(|e| e.to_string())?;
        let rational_moduli = raw
            .iter()
            .all(|(_, _, v)| rational_sqrt(&norm_sqr(v)).is_some());
        let normalization = normalize_weights(&raw, 3).map_err(|e| e.to_string())?;
        let check = normalization
            .check_conjugation(&raw)
            .map_err(|e| e.to_string())?;
        ensure(check.exact == rational_moduli, || {
            format!(
                "set {set}: exactness flag {} but rational moduli {rational_moduli}",
                check.exact
            )
        })?;
        ensure(check.holds, || {
            format!(
                "set {set}: conjugation fails, deviation {:e}",
                check.max_deviation
            )
        })?;
        ensure(check.all_nonnegative, || {
            format!("set {set}: negative canonical weight")
        })?;
        if check.exact {
            exact += 1;
        } else {
            inexact += 1;
        }
    }
    ensure(exact > 0 && inexact > 0, || {
        format!("only {exact} exact and {inexact} flagged sets")
    })?;
    within(start.elapsed(), 10)?;
    Ok(format!(
        "{exact} exact, {inexact} flagged float within 1e-12"
    ))
}

fn factorization_and_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..50 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=3);
        let top = WeightTop::from_fn(n, k, |_, _| {
            rational(rng.gen_range(0..=9), rng.gen_range(1..=9))
        })
        .unwrap();
        let weights = periodic_weight(&top);
        let space = TruncatedFockSpace::new(n, 4).unwrap();
        let shifts = build_shift(&weights, space).map_err(|e| e.to_string())?;
        let report = check_factorization(&shifts).map_err(|e| e.to_string())?;
        ensure(report.passed, || {
            format!("trial {trial}: {:?}", report.failures)
        })?;
        let mut norms = Vec::new();
        for (idx, t) in shifts.iter().enumerate() {
            let letter = idx + 1;
            let w = weight_operator(t, letter).map_err(|e| e.to_string())?;
            let diagonal_max = w
                .matrix()
                .entries()
                .map(|(_, _, v)| v.clone())
                .max()
                .unwrap_or_else(Rational::zero);
            let norm = shift_norm(&weights, letter)
                .map_err(|e| e.to_string())?
                .value;
            ensure(norm == diagonal_max, || {
                format!("trial {trial}: ||T_{letter}|| = {norm}, diagonal max {diagonal_max}")
            })?;
            norms.push(norm);
        }
        let total = row_norm(&weights).map_err(|e| e.to_string())?.value;
        let max = norms.into_iter().max().unwrap();
        ensure(total == max, || {
            format!("trial {trial}: ||T|| = {total}, max ||T_i|| = {max}")
        })?;
    }
    Ok("50 tops, L = 4, exact".into())
}

fn recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut named = 0;
    for trial in 0..20 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=2);
        let top = random_positive_top(&mut rng, n, k);
        let space = TruncatedFockSpace::new(n, 4).unwrap();
        let shifts = build_shift(&periodic_weight(&top), space).map_err(|e| e.to_string())?;
        for (idx, t) in shifts.iter().enumerate() {
            let recovered =
                recover_creation(t, idx + 1).map_err(|e| format!("trial {trial}: {e}"))?;
            let expected = creation_operator(idx + 1, space).unwrap();
            ensure(
                recovered.equality_on_subspace(&expected, 3).unwrap(),
                || format!("trial {trial}: L_{} differs", idx + 1),
            )?;
        }

        let words: Vec<Word> = words_up_to(n, k - 1).collect();
        let u = words.choose(&mut rng).unwrap().clone();
        let letter = rng.gen_range(1..=n);
        let degenerate = top.with_value(letter, &u, Rational::zero()).unwrap();
        let shifts = build_shift(&periodic_weight(&degenerate), space).unwrap();
        let err = recover_creation(&shifts[letter - 1], letter);
        let expected = Error::NotBoundedBelow {
            letter,
            word: u.to_string(),
        };
        ensure(err.as_ref().err() == Some(&expected), || {
            format!("trial {trial}: expected {expected:?}, got {err:?}")
        })?;
        named += 1;
    }
    Ok(format!(
        "20 bounded-below tops recovered, {named} zero weights named"
    ))
}

fn dense_conjugation_check() -> Result<(), String> {
    let top = random_top(2, 2, 55).unwrap();
    let unitaries = build_unitaries(2, 2, 2).unwrap();
    let space = unitaries.fock_space();
    let dim = space.dimension();
    ensure(dim == 63, || format!("dimension {dim}"))?;
    let uv = unitaries.combined();
    let dense = |m: &fockshift::sparse::SparseMatrix<Rational>| -> Vec<Vec<Rational>> {
        (0..dim)
            .map(|r| (0..dim).map(|c| m.value(r, c)).collect())
            .collect()
    };
    let uv_d = dense(&uv);
    for t in build_shift(&periodic_weight(&top), space).unwrap() {
        let t_d = dense(t.matrix());
        let blocks = conjugate_shift(&t, &unitaries).unwrap().assemble();
        for r in 0..dim {
            for c in 0..dim {
                let mut sum = Rational::zero();
                for a in 0..dim {
                    if uv_d[a][r].is_zero() {
                        continue;
                    }
                    for b in 0..dim {
                        if !uv_d[b][c].is_zero() {
                            sum += &uv_d[a][r] * &t_d[a][b] * &uv_d[b][c];
                        }
                    }
                }
                ensure(blocks.value(r, c) == sum, || {
                    format!("dense product differs at ({r}, {c})")
                })?;
            }
        }
    }
    Ok(())
}

fn block_decomposition() -> Outcome {
    let start = Instant::now();
    let top = example_top();
    for m in 1..=2 {
        let report = verify_theorem(&top, m).map_err(|e| e.to_string())?;
        ensure(report.passed, || {
            format!("example at m={m}: {:?}", report.first_discrepancy)
        })?;
    }

    let mut seed = 1000;
    for (n, k, m) in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        for _ in 0..25 {
            seed += 1;
            let top = random_top(n, k, seed).unwrap();
            let report = verify_theorem(&top, m).map_err(|e| e.to_string())?;
            ensure(report.passed, || {
                format!(
                    "N={n} k={k} m={m} seed={seed}: {:?}",
                    report.first_discrepancy
                )
            })?;
        }
    }

    // printed matrices, after swapping letters 2 and 3
    let unitaries = build_unitaries(2, 2, 1).unwrap();
    let space = unitaries.block_space();
    let shifts = build_shift(&periodic_weight(&top), unitaries.fock_space()).unwrap();
    let e = Word::empty(2);
    let one = Word::parse(2, "1").unwrap();
    let two = Word::parse(2, "2").unwrap();
    let l = |letter: usize, value: Rational| {
        creation_operator(letter, space)
            .unwrap()
            .scalar_multiply(&value)
    };
    let identity = TruncatedOperator::<Rational>::identity(space);
    let printed = [
        vec![
            ((e.clone(), one.clone()), l(1, rational(1, 2))),
            ((e.clone(), two.clone()), l(3, rational(1, 8))),
            ((one.clone(), e.clone()), identity.clone()),
        ],
        vec![
            ((e.clone(), one.clone()), l(2, rational(1, 4))),
            ((e.clone(), two.clone()), l(4, rational(1, 16))),
            ((two.clone(), e.clone()), identity),
        ],
    ];
    for (idx, expected) in printed.iter().enumerate() {
        let blocks = conjugate_shift(&shifts[idx], &unitaries)
            .unwrap()
            .relabel_letters(&[1, 3, 2, 4])
            .unwrap();
        let mut labels: Vec<(Word, Word)> = expected.iter().map(|(pos, _)| pos.clone()).collect();
        labels.sort();
        let mut actual_labels = blocks.nonzero_blocks();
        actual_labels.sort();
        ensure(actual_labels == labels, || {
            format!("T_{}: nonzero blocks {actual_labels:?}", idx + 1)
        })?;
        for ((row, col), op) in expected {
            ensure(blocks.block(row, col).unwrap() == Some(op), || {
                format!(
                    "T_{} block ({row}, {col}) differs from the printed matrix",
                    idx + 1
                )
            })?;
        }
    }

    dense_conjugation_check()?;
    within(start.elapsed(), 60)?;
    Ok("example at m = 1, 2; 100 random tops; printed blocks up to 2↔3; dense check at dimension 63".into())
}

fn matrix_units() -> Outcome {
    let (n, k, m) = (2, 2, 2);
    let unitaries = build_unitaries(n, k, m).unwrap();
    let space = unitaries.block_space();
    let (mut identities, mut creations) = (0, 0);
    for letter in 1..=n {
        for w in words_up_to(n, k - 1) {
            let top = indicator_top(n, k, letter, &w).unwrap();
            let shifts = build_shift(&periodic_weight(&top), unitaries.fock_space()).unwrap();
            for (idx, t) in shifts.iter().enumerate() {
                let blocks = conjugate_shift(t, &unitaries).unwrap();
                if idx + 1 != letter {
                    ensure(blocks.nonzero_blocks().is_empty(), || {
                        format!("indicator ({letter}, {w}) leaks into T_{}", idx + 1)
                    })?;
                    continue;
                }
                let iw = w.prepend(letter).unwrap();
                let (position, expected) = if w.len() + 1 < k {
                    identities += 1;
                    ((iw, w.clone()), TruncatedOperator::identity(space))
                } else {
                    creations += 1;
                    (
                        (Word::empty(n), w.clone()),
                        creation_operator(phi(&iw, k).unwrap(), space).unwrap(),
                    )
                };
                ensure(blocks.nonzero_blocks() == vec![position.clone()], || {
                    format!(
                        "indicator ({letter}, {w}): blocks {:?}",
                        blocks.nonzero_blocks()
                    )
                })?;
                ensure(
                    blocks.block(&position.0, &position.1).unwrap() == Some(&expected),
                    || format!("indicator ({letter}, {w}): wrong block"),
                )?;
            }
        }
    }
    ensure(identities == n, || format!("{identities} identity blocks"))?;
    Ok(format!(
        "{identities} identity blocks at (iw, w), {creations} creation blocks at (e, w)"
    ))
}

fn containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    for n2 in 1..=8 {
        for n1 in (1..=n2).filter(|n1| n2 % n1 == 0) {
            let alphabets: &[usize] = if n2 <= 4 { &[2, 3] } else { &[2] };
            for &n in alphabets {
                let top = WeightTop::from_fn(n, n1, |_, _| {
                    rational(rng.gen_range(0..=9), rng.gen_range(1..=9))
                })
                .unwrap();
                let report = verify_containment(&top, n2, default_containment_depth(n2))
                    .map_err(|e| e.to_string())?;
                ensure(report.holds, || {
                    format!("N={n} n1={n1} n2={n2}: {:?}", report.counterexample)
                })?;
                pairs += 1;
            }
        }
    }
    let top = random_top(2, 2, 8).unwrap();
    ensure(verify_containment(&top, 3, 5).is_err(), || {
        "2 ∤ 3 accepted".into()
    })?;
    Ok(format!("{pairs} (N, n1, n2) cases to depth n2 + 2"))
}

fn divisibility() -> Outcome {
    for n_alpha in [2u64, 3, 5] {
        for n in 1..=10 {
            for m in 1..=10 {
                let (d, plain) = d_divides_iff(n_alpha, n, m).map_err(|e| e.to_string())?;
                ensure(d == plain, || {
                    format!("N={n_alpha} n={n} m={m}: d-divisibility {d}, n | m {plain}")
                })?;
            }
        }
        for n in 1..=12 {
            for m in (n..=12).filter(|m| m % n == 0) {
                let w = expansion_witness(n_alpha, n, m).map_err(|e| e.to_string())?;
                let ok = w.verified
                    && w.digits.len() as u64 == m / n
                    && w.digits.iter().all(|d| d == "1");
                ensure(ok, || {
                    format!("N={n_alpha} n={n} m={m}: digits {:?}", w.digits)
                })?;
            }
        }
    }
    Ok("N ∈ {2, 3, 5}, 1 ≤ n, m ≤ 10; witnesses for n | m ≤ 12".into())
}

fn random_sequence(rng: &mut ChaCha8Rng) -> DivisorSequence {
    let mut terms = vec![rng.gen_range(1..=8u64)];
    for _ in 0..rng.gen_range(0..4) {
        let next = terms.last().unwrap() * rng.gen_range(2..=4u64);
        if next > 64 {
            break;
        }
        terms.push(next);
    }
    DivisorSequence::new(terms).unwrap()
}

fn classification() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut equal = 0;
    for pair in 0..200 {
        let a = random_sequence(&mut rng);
        let b = if pair % 4 == 0 {
            // same last term, different path
            let last = a.last();
            let divisors: Vec<u64> = (1..last).filter(|d| last.is_multiple_of(*d)).collect();
            let mut terms: Vec<u64> = divisors.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            terms.push(last);
            DivisorSequence::new(terms).unwrap_or_else(|_| a.clone())
        } else {
            random_sequence(&mut rng)
        };
        let n = rng.gen_range(2..=3);
        let s = supernatural_eq(&a, &b);
        let k0 = k0_isomorphic(n, &a, &b).map_err(|e| e.to_string())?;
        ensure(s == k0, || {
            format!("({a}) vs ({b}), N={n}: supernatural {s}, K0 {k0}")
        })?;
        equal += s as usize;
    }
    within(start.elapsed(), 5)?;
    Ok(format!("200 pairs agree ({equal} equal)"))
}

fn determinism() -> Outcome {
    let binary = env!("CARGO_BIN_EXE_fockshift");
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let weights = configs.join("period_two.toml");
    let sequences = configs.join("sequences.toml");
    let weights = weights.to_str().unwrap();
    let sequences = sequences.to_str().unwrap();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let runs: Vec<Vec<String>> = vec![
        vec![
            "build".into(),
            "--config".into(),
            weights.into(),
            "--depth".into(),
            "3".into(),
        ],
        vec![
            "build".into(),
            "--config".into(),
            weights.into(),
            "--format".into(),
            "csv".into(),
        ],
        vec!["verify".into(), "--config".into(), weights.into()],
        vec![
            "verify".into(),
            "--config".into(),
            weights.into(),
            "--check".into(),
            "relations".into(),
        ],
        vec![
            "verify".into(),
            "--config".into(),
            weights.into(),
            "--check".into(),
            "containment".into(),
            "--n1".into(),
            "2".into(),
            "--n2".into(),
            "6".into(),
        ],
        vec!["classify".into(), "--config".into(), sequences.into()],
        vec![
            "tree".into(),
            "--config".into(),
            weights.into(),
            "--depth".into(),
            "3".into(),
        ],
    ];
    for args in &runs {
        let outputs: Vec<_> = (0..2)
            .map(|_| {
                Command::new(binary)
                    .args(args)
                    .env_remove("FOCKSHIFT_SEED")
                    .output()
                    .unwrap()
            })
            .collect();
        ensure(outputs[0].status.code() != Some(2), || {
            format!("{args:?} reported a configuration error")
        })?;
        ensure(outputs[0].status == outputs[1].status, || {
            format!("{args:?} exit status differs")
        })?;
        ensure(
            outputs[0].stdout == outputs[1].stdout && outputs[0].stderr == outputs[1].stderr,
            || format!("{args:?} output differs"),
        )?;
    }
    let files: Vec<Vec<(String, Vec<u8>)>> = dirs
        .iter()
        .map(|dir| {
            let out = Command::new(binary)
                .args([
                    "build",
                    "--config",
                    weights,
                    "--depth",
                    "3",
                    "--out",
                    dir.path().to_str().unwrap(),
                ])
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0));
            let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            entries.sort();
            entries
        })
        .collect();
    ensure(files[0] == files[1] && files[0].len() == 2, || {
        "build --out files differ".into()
    })?;
    Ok(format!(
        "{} commands and build --out byte-identical across runs",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "Cuntz-Toeplitz relations for creation operators",
            cuntz_toeplitz,
        ),
        (
            "phase normalization of complex weights",
            phase_normalization,
        ),
        (
            "factorization T_i = L_i W_i and norm formulas",
            factorization_and_norms,
        ),
        ("recovery of creation operators", recovery),
        (
            "block decomposition of periodic shifts",
            block_decomposition,
        ),
        ("matrix-unit reachability", matrix_units),
        ("weight-level containment of periods", containment),
        ("divisibility lemma and expansion witnesses", divisibility),
        (
            "supernatural equality agrees with K0 orders",
            classification,
        ),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (number, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let seconds = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2}  {name}: {detail} ({seconds:.2} s)", number + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2}  {name}: {reason} ({seconds:.2} s)", number + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
