//! Period-`k` weights generated by a finite tree top, period detection, the
//! divisor containment check, and export of the weighted Fock tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::dimension_d;
use crate::scalar::Rational;
use crate::shift::{Coverage, ExplicitWeights, WeightFunction};
use crate::words::{enumerate_words, periodic_decompose, words_up_to, Word};

/// The values `{λ_{i,u} : |u| < k}` that determine a period-`k` shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTop {
    alphabet_size: usize,
    period: usize,
    table: BTreeMap<(usize, Word), Rational>,
}

impl WeightTop {
    /// Builds a top from entries covering every `(i, u)` with `|u| < k`
    /// exactly once, all nonnegative.
    pub fn new(
        alphabet_size: usize,
        period: usize,
        entries: impl IntoIterator<Item = (usize, Word, Rational)>,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::ZeroPeriod);
        }
        let explicit = ExplicitWeights::from_entries(alphabet_size, period - 1, entries)?;
        let mut table = BTreeMap::new();
        for (i, u, v) in explicit.iter() {
            if v.is_negative() {
                return Err(Error::NegativeWeight {
                    letter: i,
                    word: u.to_string(),
                });
            }
            table.insert((i, u.clone()), v.clone());
        }
        Ok(WeightTop {
            alphabet_size,
            period,
            table,
        })
    }

    pub fn from_fn(
        alphabet_size: usize,
        period: usize,
        mut rule: impl FnMut(usize, &Word) -> Rational,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::ZeroPeriod);
        }
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut entries = Vec::new();
        for u in words_up_to(alphabet_size, period - 1) {
            for i in 1..=alphabet_size {
                let value = rule(i, &u);
                entries.push((i, u.clone(), value));
            }
        }
        Self::new(alphabet_size, period, entries)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// `λ_{i,u}` for `|u| < k`.
    pub fn value(&self, letter: usize, u: &Word) -> Option<&Rational> {
        self.table.get(&(letter, u.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Word, &Rational)> {
        self.table.iter().map(|((i, u), v)| (*i, u, v))
    }

    /// A copy with one entry replaced.
    pub fn with_value(&self, letter: usize, u: &Word, value: Rational) -> Result<Self> {
        let mut entries: Vec<_> = self
            .entries()
            .map(|(i, w, v)| (i, w.clone(), v.clone()))
            .collect();
        let slot = entries
            .iter_mut()
            .find(|(i, w, _)| *i == letter && w == u)
            .ok_or_else(|| Error::WeightOutsideTop {
                letter,
                word: u.to_string(),
            })?;
        slot.2 = value;
        Self::new(self.alphabet_size, self.period, entries)
    }
}

/// The infinite weight function `λ_{i,w} = λ_{i,u}` where `w = uv`, `|u| < k`,
/// `k | |v|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWeights {
    top: WeightTop,
}

impl PeriodicWeights {
    pub fn top(&self) -> &WeightTop {
        &self.top
    }
}

pub fn periodic_weight(top: &WeightTop) -> PeriodicWeights {
    PeriodicWeights { top: top.clone() }
}

impl WeightFunction<Rational> for PeriodicWeights {
    fn alphabet_size(&self) -> usize {
        self.top.alphabet_size
    }

    fn coverage(&self) -> Coverage {
        Coverage::Complete {
            attained_within: self.top.period - 1,
        }
    }

    fn weight(&self, letter: usize, word: &Word) -> Option<Rational> {
        if word.alphabet_size() != self.top.alphabet_size {
            return None;
        }
        let (u, _) = periodic_decompose(word, self.top.period).ok()?;
        self.top.value(letter, &u).cloned()
    }
}

/// First `(i, w)` at which `weights` breaks the period-`k` predicate, scanning
/// words up to `depth`.
fn period_violation<W>(weights: &W, k: usize, depth: usize) -> Option<(usize, Word)>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let n = weights.alphabet_size();
    for w in words_up_to(n, depth) {
        let (u, _) = periodic_decompose(&w, k).expect("k >= 1");
        for i in 1..=n {
            if weights.weight(i, &w) != weights.weight(i, &u) {
                return Some((i, w));
            }
        }
    }
    None
}

/// Smallest `k <= k_max` for which the sampled weights are `k`-periodic.
///
/// Truncated samples must reach depth `2·k_max`; complete weight functions are
/// scanned to that depth.
pub fn detect_period<W>(samples: &W, k_max: usize) -> Result<Option<usize>>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let required = 2 * k_max;
    let depth = match samples.coverage() {
        Coverage::Truncated { depth } if depth < required => {
            return Err(Error::InsufficientDepth {
                required,
                available: depth,
            })
        }
        Coverage::Truncated { depth } => depth,
        Coverage::Complete { .. } => required,
    };
    Ok((1..=k_max).find(|&k| period_violation(samples, k, depth).is_none()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub holds: bool,
    pub n1: usize,
    pub n2: usize,
    pub depth: usize,
    /// `(letter, word)` where the period-`n2` predicate fails.
    pub counterexample: Option<(usize, String)>,
}

/// Default scan depth for [`verify_containment`].
pub fn default_containment_depth(n2: usize) -> usize {
    n2 + 2
}

/// Checks, word by word up to `depth`, that the period-`n1` weights of `top`
/// also satisfy the period-`n2` predicate `λ_{i,w} = λ_{i,u_2}`.
pub fn verify_containment(top: &WeightTop, n2: usize, depth: usize) -> Result<ContainmentReport> {
    let n1 = top.period();
    if n2 == 0 {
        return Err(Error::ZeroPeriod);
    }
    if !n2.is_multiple_of(n1) {
        return Err(Error::NotDivisible {
            divisor: n1,
            multiple: n2,
        });
    }
    let weights = periodic_weight(top);
    let counterexample = period_violation(&weights, n2, depth).map(|(i, w)| (i, w.to_string()));
    Ok(ContainmentReport {
        holds: counterexample.is_none(),
        n1,
        n2,
        depth,
        counterexample,
    })
}

/// The weights along the root-to-`w` path for every `|w| = k`. The path to
/// `i_1 ⋯ i_k` passes through `i_k`, `i_{k-1} i_k`, ….
pub fn path_tuples(top: &WeightTop) -> Vec<(Word, Vec<Rational>)> {
    let k = top.period();
    enumerate_words(top.alphabet_size(), k)
        .expect("alphabet validated")
        .into_iter()
        .map(|w| {
            let tuple = (0..k)
                .rev()
                .map(|start| {
                    let letter = w.letters()[start];
                    let below = w.suffix_from(start + 1);
                    top.value(letter, &below).expect("top is complete").clone()
                })
                .collect();
            (w, tuple)
        })
        .collect()
}

/// True when the `N^k` path tuples are pairwise distinct.
pub fn distinct_path_tuples(top: &WeightTop) -> bool {
    let tuples = path_tuples(top);
    let distinct: BTreeSet<&Vec<Rational>> = tuples.iter().map(|(_, t)| t).collect();
    distinct.len() == tuples.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub from: Word,
    pub to: Word,
    pub letter: usize,
    pub weight: Rational,
}

/// The weighted Fock tree down to a fixed depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockTree {
    pub alphabet_size: usize,
    pub depth: usize,
    pub vertices: Vec<Word>,
    /// Grouped by source vertex in canonical order, left to right by letter.
    pub edges: Vec<TreeEdge>,
}

impl FockTree {
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph fock_tree {\n");
        out.push_str("  ordering=out;\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                e.from, e.to, e.weight
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn export_tree<W>(weights: &W, depth: usize) -> Result<FockTree>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let n = weights.alphabet_size();
    if depth > 0 {
        if let Some(available) = weights.coverage().defined_depth() {
            if available < depth - 1 {
                return Err(Error::InsufficientDepth {
                    required: depth - 1,
                    available,
                });
            }
        }
    }
    let vertices: Vec<Word> = words_up_to(n, depth).collect();
    let mut edges = Vec::with_capacity(n * dimension_d(n, depth));
    for w in vertices.iter().filter(|w| w.len() < depth) {
        for i in 1..=n {
            edges.push(TreeEdge {
                from: w.clone(),
                to: w.prepend(i)?,
                letter: i,
                weight: weights.weight(i, w).expect("depth checked"),
            });
        }
    }
    Ok(FockTree {
        alphabet_size: n,
        depth,
        vertices,
        edges,
    })
}

/// The two-letter period-2 top with `T_1 ξ_e = a ξ_1`, `T_1 ξ_1 = c ξ_{11}`,
/// `T_1 ξ_2 = e ξ_{12}`, `T_2 ξ_e = b ξ_2`, `T_2 ξ_1 = d ξ_{21}`,
/// `T_2 ξ_2 = f ξ_{22}`.
pub fn two_letter_period_two(
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
    e: Rational,
    f: Rational,
) -> WeightTop {
    let word = |s: &str| Word::parse(2, s).expect("valid word");
    WeightTop::new(
        2,
        2,
        [
            (1, word("e"), a),
            (1, word("1"), c),
            (1, word("2"), e),
            (2, word("e"), b),
            (2, word("1"), d),
            (2, word("2"), f),
        ],
    )
    .expect("complete top")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};

    fn w(s: &str) -> Word {
        Word::parse(2, s).unwrap()
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

    #[test]
    fn periodic_weight_examples() {
        let weights = periodic_weight(&example_top());
        assert_eq!(weights.weight(1, &w("21")), Some(integer(1)));
        assert_eq!(weights.weight(1, &w("212")), Some(rational(1, 8)));
        assert_eq!(weights.weight(2, &w("e")), Some(integer(1)));
        assert_eq!(weights.weight(2, &w("1212")), Some(integer(1)));
        assert_eq!(weights.weight(2, &w("11")), Some(integer(1)));
        assert_eq!(weights.weight(2, &w("111")), Some(rational(1, 4)));
    }

    #[test]
    fn top_validation() {
        let missing = WeightTop::new(2, 1, [(1, w("e"), integer(1))]);
        assert_eq!(
            missing.unwrap_err(),
            Error::MissingWeight {
                letter: 2,
                word: "e".into()
            }
        );
        let negative = WeightTop::from_fn(2, 1, |i, _| integer(i as i64 - 2));
        assert!(matches!(
            negative,
            Err(Error::NegativeWeight { letter: 1, .. })
        ));
        let outside = WeightTop::new(
            2,
            1,
            [
                (1, w("e"), integer(1)),
                (2, w("e"), integer(1)),
                (1, w("1"), integer(1)),
            ],
        );
        assert!(matches!(outside, Err(Error::WeightOutsideTop { .. })));
        assert_eq!(
            WeightTop::from_fn(2, 0, |_, _| integer(1)).unwrap_err(),
            Error::ZeroPeriod
        );
    }

    #[test]
    fn constant_weights_have_period_one() {
        let samples = ExplicitWeights::from_fn(2, 4, |_, _| rational(3, 7)).unwrap();
        assert_eq!(detect_period(&samples, 2).unwrap(), Some(1));
    }

    #[test]
    fn example_weights_have_period_two() {
        let samples = ExplicitWeights::sample(&periodic_weight(&example_top()), 4).unwrap();
        assert_eq!(detect_period(&samples, 2).unwrap(), Some(2));
        // the k = 1 predicate fails first at (1, "1"), since c != a
        assert_eq!(period_violation(&samples, 1, 4), Some((1, w("1"))));
    }

    #[test]
    fn length_dependent_weights_are_not_periodic() {
        let samples =
            ExplicitWeights::from_fn(2, 6, |_, u| rational(1, u.len() as i64 + 1)).unwrap();
        assert_eq!(detect_period(&samples, 3).unwrap(), None);
        // exhaustive oracle: every k <= 3 has a violating word
        for k in 1..=3 {
            let violated = words_up_to(2, 6).any(|word| {
                let (u, _) = periodic_decompose(&word, k).unwrap();
                (1..=2).any(|i| samples.weight(i, &word) != samples.weight(i, &u))
            });
            assert!(violated);
        }
    }

    #[test]
    fn detect_period_needs_depth() {
        let samples = ExplicitWeights::from_fn(2, 3, |_, _| integer(1)).unwrap();
        assert_eq!(
            detect_period(&samples, 2).unwrap_err(),
            Error::InsufficientDepth {
                required: 4,
                available: 3
            }
        );
    }

    #[test]
    fn containment_examples() {
        let constant = WeightTop::from_fn(2, 1, |i, _| integer(i as i64)).unwrap();
        for n2 in 1..=5 {
            assert!(verify_containment(&constant, n2, n2 + 2).unwrap().holds);
        }
        assert!(verify_containment(&example_top(), 4, 6).unwrap().holds);
        assert_eq!(
            verify_containment(&example_top(), 3, 5).unwrap_err(),
            Error::NotDivisible {
                divisor: 2,
                multiple: 3
            }
        );
    }

    #[test]
    fn path_tuples_of_example() {
        let top = example_top();
        assert!(distinct_path_tuples(&top));
        let tuples: BTreeMap<String, Vec<Rational>> = path_tuples(&top)
            .into_iter()
            .map(|(w, t)| (w.to_string(), t))
            .collect();
        assert_eq!(tuples["11"], vec![integer(1), rational(1, 2)]);
        assert_eq!(tuples["21"], vec![integer(1), rational(1, 4)]);
        assert_eq!(tuples["12"], vec![integer(1), rational(1, 8)]);
        assert_eq!(tuples["22"], vec![integer(1), rational(1, 16)]);
    }

    #[test]
    fn path_tuple_distinctness() {
        assert!(!distinct_path_tuples(
            &WeightTop::from_fn(2, 2, |_, _| integer(1)).unwrap()
        ));
        let equal =
            WeightTop::new(2, 1, [(1, w("e"), integer(1)), (2, w("e"), integer(1))]).unwrap();
        assert!(!distinct_path_tuples(&equal));
        let differ =
            WeightTop::new(2, 1, [(1, w("e"), integer(1)), (2, w("e"), integer(2))]).unwrap();
        assert!(distinct_path_tuples(&differ));
    }

    #[test]
    fn tree_shapes() {
        let weights = periodic_weight(&example_top());
        let root_only = export_tree(&weights, 0).unwrap();
        assert_eq!(root_only.vertices, vec![Word::empty(2)]);
        assert!(root_only.edges.is_empty());
        assert_eq!(
            root_only.to_dot(),
            "digraph fock_tree {\n  ordering=out;\n  \"e\";\n}\n"
        );

        let top = export_tree(&weights, 1).unwrap();
        assert_eq!(top.vertices.len(), 3);
        let labels: Vec<(usize, Rational)> = top
            .edges
            .iter()
            .map(|e| (e.letter, e.weight.clone()))
            .collect();
        assert_eq!(labels, vec![(1, integer(1)), (2, integer(1))]);

        assert_eq!(export_tree(&weights, 2).unwrap().edges.len(), 6);
        let deep = export_tree(&weights, 3).unwrap();
        assert_eq!(deep.vertices.len(), 15);
        assert_eq!(deep.edges.len(), 14);
    }

    #[test]
    fn dot_output_is_ordered() {
        let dot = export_tree(&periodic_weight(&example_top()), 2)
            .unwrap()
            .to_dot();
        let expected = "\
digraph fock_tree {
  ordering=out;
  \"e\";
  \"1\";
  \"2\";
  \"11\";
  \"12\";
  \"21\";
  \"22\";
  \"e\" -> \"1\" [label=\"1\"];
  \"e\" -> \"2\" [label=\"1\"];
  \"1\" -> \"11\" [label=\"1/2\"];
  \"1\" -> \"21\" [label=\"1/4\"];
  \"2\" -> \"12\" [label=\"1/8\"];
  \"2\" -> \"22\" [label=\"1/16\"];
}
";
        assert_eq!(dot, expected);
    }
}
