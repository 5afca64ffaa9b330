use fockshift::classify::{supernatural_eq, supernatural_from_sequence, DivisorSequence};
use fockshift::fock::{dimension_d, TruncatedFockSpace};
use fockshift::periodicity::{periodic_weight, WeightTop};
use fockshift::scalar::{rational, Rational};
use fockshift::shift::{
    build_shift, check_factorization, shift_norm, weight_operator, WeightFunction,
};
use fockshift::words::{
    periodic_decompose, phi, phi_extended, phi_inverse, word_at, word_index, Word, WordIndex,
};
use proptest::prelude::*;

fn word_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(1..=n, 0..=max_len)
            .prop_map(move |letters| Word::new(n, letters).unwrap())
    })
}

fn even_word(n: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=n, 1..=n), 0..=3).prop_map(move |pairs| {
        Word::new(n, pairs.into_iter().flat_map(|(a, b)| [a, b]).collect()).unwrap()
    })
}

fn top_strategy() -> impl Strategy<Value = WeightTop> {
    (2usize..=3, 1usize..=3).prop_flat_map(|(n, k)| {
        let count = n * dimension_d(n, k);
        prop::collection::vec((0i64..=9, 1i64..=9), count).prop_map(move |values| {
            let mut it = values.into_iter();
            WeightTop::from_fn(n, k, |_, _| {
                let (p, q) = it.next().unwrap();
                rational(p, q)
            })
            .unwrap()
        })
    })
}

fn divisor_sequence() -> impl Strategy<Value = DivisorSequence> {
    (1u64..=8, prop::collection::vec(2u64..=4, 0..4)).prop_map(|(start, factors)| {
        let mut terms = vec![start];
        for f in factors {
            let next = terms.last().unwrap() * f;
            if next > 64 {
                break;
            }
            terms.push(next);
        }
        DivisorSequence::new(terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn index_round_trip(w in word_strategy(4, 6)) {
        prop_assert_eq!(word_at(w.alphabet_size(), word_index(&w)), w);
    }

    #[test]
    fn unrank_round_trip(n in 1usize..=4, idx in 0usize..2000) {
        prop_assert_eq!(word_index(&word_at(n, WordIndex(idx))).0, idx);
    }

    #[test]
    fn index_respects_order(a in word_strategy(3, 5), b in word_strategy(3, 5)) {
        prop_assume!(a.alphabet_size() == b.alphabet_size());
        prop_assert_eq!(a.cmp(&b), word_index(&a).cmp(&word_index(&b)));
    }

    #[test]
    fn dimension_recurrence(n in 1usize..=6, k in 0usize..=8) {
        prop_assert_eq!(dimension_d(n, k + 1), 1 + n * dimension_d(n, k));
    }

    #[test]
    fn decompose_round_trip(w in word_strategy(3, 9), k in 1usize..=4) {
        let (u, v) = periodic_decompose(&w, k).unwrap();
        prop_assert!(u.len() < k);
        prop_assert_eq!(v.len() % k, 0);
        prop_assert_eq!(u.concat(&v).unwrap(), w);
    }

    #[test]
    fn phi_round_trip(w in word_strategy(3, 8), k in 1usize..=3) {
        prop_assume!(w.len() % k == 0);
        let big = phi_extended(&w, k).unwrap();
        prop_assert_eq!(big.len(), w.len() / k);
        prop_assert_eq!(phi_inverse(&big, w.alphabet_size(), k).unwrap(), w.clone());
        if w.len() == k {
            prop_assert_eq!(big.letters()[0], phi(&w, k).unwrap());
        }
    }

    #[test]
    fn phi_preserves_order(a in even_word(3), b in even_word(3)) {
        let (pa, pb) = (phi_extended(&a, 2).unwrap(), phi_extended(&b, 2).unwrap());
        prop_assert_eq!(a.cmp(&b), pa.cmp(&pb));
    }

    #[test]
    fn periodic_weights_depend_on_the_short_prefix(top in top_strategy(), w in word_strategy(3, 7)) {
        prop_assume!(w.alphabet_size() == top.alphabet_size());
        let (u, _) = periodic_decompose(&w, top.period()).unwrap();
        let weights = periodic_weight(&top);
        for i in 1..=top.alphabet_size() {
            let value = weights.weight(i, &w);
            prop_assert_eq!(value.as_ref(), top.value(i, &u));
        }
    }

    #[test]
    fn factorization_and_norm(top in top_strategy()) {
        let weights = periodic_weight(&top);
        let space = TruncatedFockSpace::new(top.alphabet_size(), 4).unwrap();
        let shifts = build_shift(&weights, space).unwrap();
        prop_assert!(check_factorization(&shifts).unwrap().passed);
        for (idx, t) in shifts.iter().enumerate() {
            let w = weight_operator(t, idx + 1).unwrap();
            let max = w.matrix().entries().map(|(_, _, v)| v.clone()).max().unwrap_or_else(|| Rational::from_integer(0.into()));
            prop_assert_eq!(shift_norm(&weights, idx + 1).unwrap().value, max);
        }
    }

    #[test]
    fn supernatural_equality_matches_exponents(a in divisor_sequence(), b in divisor_sequence()) {
        let same = supernatural_from_sequence(&a).same_value(&supernatural_from_sequence(&b));
        prop_assert_eq!(supernatural_eq(&a, &b), same);
    }
}
