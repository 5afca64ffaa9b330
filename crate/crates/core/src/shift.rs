//! Weighted shifts `T_i ξ_w = λ_{i,w} ξ_{iw}` and their structure theory:
//! phase normalization, the factorization `T_i = L_i W_i`, norms, the
//! bounded-below test, and recovery of the creation operators.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{creation_operator, TruncatedFockSpace, TruncatedOperator};
use crate::scalar::{norm_sqr, rational_sqrt, to_f64, GaussianRational, Rational, Scalar};
use crate::sparse::SparseMatrix;
use crate::words::{word_index, words_up_to, Word};

/// How much of the (infinite) weight tree a weight function determines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coverage {
    /// Defined on every word; every value already occurs on words of length
    /// at most `attained_within`.
    Complete { attained_within: usize },
    /// Defined only on words of length at most `depth`.
    Truncated { depth: usize },
}

impl Coverage {
    /// Largest `|w|` at which values are available.
    pub fn defined_depth(&self) -> Option<usize> {
        match *self {
            Coverage::Complete { .. } => None,
            Coverage::Truncated { depth } => Some(depth),
        }
    }

    /// Depth that has to be scanned to see every value.
    pub fn scan_depth(&self) -> usize {
        match *self {
            Coverage::Complete { attained_within } => attained_within,
            Coverage::Truncated { depth } => depth,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Coverage::Complete { .. })
    }
}

/// An evaluation rule `(i, w) ↦ λ_{i,w}`.
pub trait WeightFunction<S = Rational> {
    fn alphabet_size(&self) -> usize;

    fn coverage(&self) -> Coverage;

    /// `None` for words beyond the defined depth.
    fn weight(&self, letter: usize, word: &Word) -> Option<S>;

    fn supports_depth(&self, depth: usize) -> bool {
        self.coverage().defined_depth().is_none_or(|d| depth <= d)
    }
}

/// Weights stored explicitly for every word up to a fixed depth.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitWeights<S = Rational> {
    alphabet_size: usize,
    depth: usize,
    values: BTreeMap<(usize, Word), S>,
}

impl<S: Scalar> ExplicitWeights<S> {
    pub fn from_fn(
        alphabet_size: usize,
        depth: usize,
        mut rule: impl FnMut(usize, &Word) -> S,
    ) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut values = BTreeMap::new();
        for w in words_up_to(alphabet_size, depth) {
            for i in 1..=alphabet_size {
                let value = rule(i, &w);
                values.insert((i, w.clone()), value);
            }
        }
        Ok(ExplicitWeights {
            alphabet_size,
            depth,
            values,
        })
    }

    /// Builds from a list of entries, which must cover every `(i, w)` with
    /// `|w| <= depth` exactly once.
    pub fn from_entries(
        alphabet_size: usize,
        depth: usize,
        entries: impl IntoIterator<Item = (usize, Word, S)>,
    ) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut values = BTreeMap::new();
        for (i, w, value) in entries {
            if i == 0 || i > alphabet_size {
                return Err(Error::LetterOutOfRange {
                    letter: i,
                    alphabet_size,
                });
            }
            if w.alphabet_size() != alphabet_size || w.len() > depth {
                return Err(Error::WeightOutsideTop {
                    letter: i,
                    word: w.to_string(),
                });
            }
            let label = w.to_string();
            if values.insert((i, w), value).is_some() {
                return Err(Error::DuplicateWeight {
                    letter: i,
                    word: label,
                });
            }
        }
        for w in words_up_to(alphabet_size, depth) {
            for i in 1..=alphabet_size {
                if !values.contains_key(&(i, w.clone())) {
                    return Err(Error::MissingWeight {
                        letter: i,
                        word: w.to_string(),
                    });
                }
            }
        }
        Ok(ExplicitWeights {
            alphabet_size,
            depth,
            values,
        })
    }

    /// Samples any weight function down to `depth`.
    pub fn sample<W: WeightFunction<S> + ?Sized>(weights: &W, depth: usize) -> Result<Self> {
        if let Some(available) = weights.coverage().defined_depth() {
            if depth > available {
                return Err(Error::InsufficientDepth {
                    required: depth,
                    available,
                });
            }
        }
        Self::from_fn(weights.alphabet_size(), depth, |i, w| {
            weights.weight(i, w).expect("depth checked")
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Word, &S)> {
        self.values.iter().map(|((i, w), v)| (*i, w, v))
    }
}

impl<S: Scalar> WeightFunction<S> for ExplicitWeights<S> {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn coverage(&self) -> Coverage {
        Coverage::Truncated { depth: self.depth }
    }

    fn weight(&self, letter: usize, word: &Word) -> Option<S> {
        self.values.get(&(letter, word.clone())).cloned()
    }
}

/// `T_1, …, T_N` on the given space: entry `λ_{i,w}` at `(iw, w)` for `|w| < L`.
pub fn build_shift<S, W>(
    weights: &W,
    space: TruncatedFockSpace,
) -> Result<Vec<TruncatedOperator<S>>>
where
    S: Scalar,
    W: WeightFunction<S> + ?Sized,
{
    let n = weights.alphabet_size();
    if n != space.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: n,
            right: space.alphabet_size(),
        });
    }
    if space.max_length() == 0 {
        return Ok((0..n).map(|_| TruncatedOperator::zero(space)).collect());
    }
    let needed = space.max_length() - 1;
    if let Some(available) = weights.coverage().defined_depth() {
        if available < needed {
            return Err(Error::InsufficientDepth {
                required: needed,
                available,
            });
        }
    }
    let dim = space.dimension();
    (1..=n)
        .map(|i| {
            let entries = words_up_to(n, needed).map(|w| {
                let value = weights.weight(i, &w).expect("depth checked");
                let row = word_index(&w.prepend(i).expect("letter in range")).0;
                (row, word_index(&w).0, value)
            });
            TruncatedOperator::from_matrix(space, SparseMatrix::from_entries(dim, dim, entries))
        })
        .collect()
}

fn check_letter(letter: usize, space: TruncatedFockSpace) -> Result<()> {
    if letter == 0 || letter > space.alphabet_size() {
        return Err(Error::LetterOutOfRange {
            letter,
            alphabet_size: space.alphabet_size(),
        });
    }
    Ok(())
}

/// The diagonal `W_i ξ_w = λ_{i,w} ξ_w`, read off the entries of `T_i`.
///
/// Diagonal entries for top-level words are zero: the truncated `T_i` carries
/// no information about them.
pub fn weight_operator<S: Scalar>(
    shift: &TruncatedOperator<S>,
    letter: usize,
) -> Result<TruncatedOperator<S>> {
    let space = shift.space();
    check_letter(letter, space)?;
    let dim = space.dimension();
    let mut diagonal = SparseMatrix::zeros(dim, dim);
    for (row, col, value) in shift.matrix().entries() {
        let w = space.word(col);
        let expected_row = w.prepend(letter).ok().and_then(|iw| space.index_of(&iw));
        if expected_row != Some(row) {
            return Err(Error::NotShiftForm { letter, row, col });
        }
        diagonal.set(col, col, value.clone());
    }
    TruncatedOperator::from_matrix(space, diagonal)
}

/// `L_i = T_i W_i^{-1}` on words of length at most `L - 1`.
pub fn recover_creation(
    shift: &TruncatedOperator<Rational>,
    letter: usize,
) -> Result<TruncatedOperator<Rational>> {
    let space = shift.space();
    let weights = weight_operator(shift, letter)?;
    let below_top = space.dimension_up_to(space.max_length().saturating_sub(1));
    let dim = space.dimension();
    let mut inverse = SparseMatrix::zeros(dim, dim);
    if space.max_length() > 0 {
        for col in 0..below_top {
            match weights.matrix().get(col, col) {
                Some(value) => inverse.set(col, col, value.recip()),
                None => {
                    return Err(Error::NotBoundedBelow {
                        letter,
                        word: space.word(col).to_string(),
                    })
                }
            }
        }
    }
    shift.multiply(&TruncatedOperator::from_matrix(space, inverse)?)
}

/// A supremum over the weight tree, exact when the weights are fully known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Supremum {
    #[serde(with = "rational_string")]
    pub value: Rational,
    /// `Complete` when the value is the true supremum, `Truncated` when it
    /// is only a lower bound from the sampled depth.
    pub coverage: Coverage,
}

impl Supremum {
    pub fn is_exact(&self) -> bool {
        self.coverage.is_complete()
    }
}

fn scan_weights<W>(
    weights: &W,
    letters: impl Iterator<Item = usize> + Clone,
) -> Result<Vec<(usize, Word, Rational)>>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let n = weights.alphabet_size();
    let mut out = Vec::new();
    for w in words_up_to(n, weights.coverage().scan_depth()) {
        for i in letters.clone() {
            let value = weights
                .weight(i, &w)
                .expect("scan depth is within coverage");
            if value.is_negative() {
                return Err(Error::NegativeWeight {
                    letter: i,
                    word: w.to_string(),
                });
            }
            out.push((i, w.clone(), value));
        }
    }
    Ok(out)
}

/// `‖T_i‖ = sup_w λ_{i,w}`.
pub fn shift_norm<W>(weights: &W, letter: usize) -> Result<Supremum>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let n = weights.alphabet_size();
    if letter == 0 || letter > n {
        return Err(Error::LetterOutOfRange {
            letter,
            alphabet_size: n,
        });
    }
    let value = scan_weights(weights, letter..=letter)?
        .into_iter()
        .map(|(_, _, v)| v)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(Supremum {
        value,
        coverage: weights.coverage(),
    })
}

/// `‖T‖ = sup_{i,w} λ_{i,w}` for the row operator `T = (T_1, …, T_N)`.
pub fn row_norm<W>(weights: &W) -> Result<Supremum>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let value = scan_weights(weights, 1..=weights.alphabet_size())?
        .into_iter()
        .map(|(_, _, v)| v)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(Supremum {
        value,
        coverage: weights.coverage(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedBelow {
    pub holds: bool,
    #[serde(with = "rational_string")]
    pub infimum: Rational,
    /// Where the infimum is attained.
    pub letter: usize,
    pub word: String,
    pub coverage: Coverage,
}

/// `inf_{i,w} λ_{i,w} > 0`. For truncated weights the verdict only speaks for
/// the sampled depth, which `coverage` records.
pub fn is_bounded_below<W>(weights: &W) -> Result<BoundedBelow>
where
    W: WeightFunction<Rational> + ?Sized,
{
    let (letter, word, infimum) = scan_weights(weights, 1..=weights.alphabet_size())?
        .into_iter()
        .min_by(|a, b| a.2.cmp(&b.2))
        .expect("at least one weight");
    Ok(BoundedBelow {
        holds: infimum.is_positive(),
        infimum,
        letter,
        word: word.to_string(),
        coverage: weights.coverage(),
    })
}

/// Largest singular value of `op`, by power iteration on `op* op` in floating
/// point.
pub fn estimate_norm(op: &TruncatedOperator<Rational>) -> f64 {
    let m = op.matrix().map(to_f64);
    let gram = m.adjoint().mul(&m).expect("square");
    let dim = gram.rows();
    if dim == 0 || gram.is_zero() {
        return 0.0;
    }
    let mut x: BTreeMap<usize, f64> = (0..dim).map(|i| (i, 1.0)).collect();
    let mut eigen = 0.0;
    for _ in 0..100_000 {
        let y = gram.apply(&x);
        let xx: f64 = x.values().map(|v| v * v).sum();
        let xy: f64 = y
            .iter()
            .map(|(k, v)| v * x.get(k).copied().unwrap_or(0.0))
            .sum();
        let next = xy / xx;
        let norm: f64 = y.values().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x = y.into_iter().map(|(k, v)| (k, v / norm)).collect();
        if (next - eigen).abs() <= 1e-15 * next.abs() {
            eigen = next;
            break;
        }
        eigen = next;
    }
    eigen.sqrt()
}

/// Outcome of the factorization checks on a truncated shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub passed: bool,
    pub checked_up_to_length: usize,
    pub failures: Vec<String>,
}

/// Verifies `T_i = L_i W_i`, `W_i² = T_i* T_i`, and `T_i* T_j = 0` for `i ≠ j`
/// on words of length at most `L - 1`.
pub fn check_factorization(shifts: &[TruncatedOperator<Rational>]) -> Result<FactorizationReport> {
    let Some(first) = shifts.first() else {
        return Err(Error::Config("no operators supplied".into()));
    };
    let space = first.space();
    let cutoff = space.max_length().saturating_sub(1);
    let mut failures = Vec::new();
    for (idx, t) in shifts.iter().enumerate() {
        let letter = idx + 1;
        let w = weight_operator(t, letter)?;
        let l = creation_operator::<Rational>(letter, space)?;
        if let Some((r, c, _, _)) = l.multiply(&w)?.first_difference(t, cutoff)? {
            failures.push(format!(
                "L_{letter} W_{letter} != T_{letter} at ({}, {})",
                space.word(r),
                space.word(c)
            ));
        }
        let gram = t.adjoint().multiply(t)?;
        if let Some((r, c, _, _)) = w.multiply(&w)?.first_difference(&gram, cutoff)? {
            failures.push(format!(
                "W_{letter}^2 != T_{letter}* T_{letter} at ({}, {})",
                space.word(r),
                space.word(c)
            ));
        }
        for (jdx, other) in shifts.iter().enumerate() {
            if jdx == idx {
                continue;
            }
            let cross = t.adjoint().multiply(other)?;
            if let Some((r, c, _, _)) =
                cross.first_difference(&TruncatedOperator::zero(space), cutoff)?
            {
                failures.push(format!(
                    "T_{letter}* T_{} != 0 at ({}, {})",
                    jdx + 1,
                    space.word(r),
                    space.word(c)
                ));
            }
        }
    }
    Ok(FactorizationReport {
        passed: failures.is_empty(),
        checked_up_to_length: cutoff,
        failures,
    })
}

/// Diagonal unitary `U ξ_w = μ_w ξ_w` with exact Gaussian-rational phases.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalUnitary {
    phases: BTreeMap<Word, GaussianRational>,
}

impl DiagonalUnitary {
    pub fn phase(&self, w: &Word) -> Option<&GaussianRational> {
        self.phases.get(w)
    }

    pub fn phases(&self) -> impl Iterator<Item = (&Word, &GaussianRational)> {
        self.phases.iter()
    }

    pub fn is_unimodular(&self) -> bool {
        self.phases.values().all(|mu| norm_sqr(mu).is_one())
    }

    pub fn is_identity(&self) -> bool {
        self.phases.values().all(|mu| mu.is_one())
    }

    pub fn as_operator(
        &self,
        space: TruncatedFockSpace,
    ) -> Result<TruncatedOperator<GaussianRational>> {
        let dim = space.dimension();
        let mut m = SparseMatrix::zeros(dim, dim);
        for w in space.words() {
            let mu = self.phases.get(&w).ok_or(Error::InsufficientDepth {
                required: space.max_length(),
                available: self.phases.keys().map(Word::len).max().unwrap_or(0),
            })?;
            let idx = word_index(&w).0;
            m.set(idx, idx, mu.clone());
        }
        TruncatedOperator::from_matrix(space, m)
    }
}

/// Floating-point phases, used when some `|λ_{i,w}|` is irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximateNormalization {
    pub phases: BTreeMap<Word, Complex64>,
    pub canonical: BTreeMap<(usize, Word), f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Normalization {
    Exact {
        unitary: DiagonalUnitary,
        canonical: ExplicitWeights<Rational>,
    },
    /// Exact unimodular phases do not exist in Gaussian-rational arithmetic.
    Inexact(ApproximateNormalization),
}

/// Per-entry tolerance for the floating-point fallback.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationCheck {
    pub exact: bool,
    pub holds: bool,
    pub all_nonnegative: bool,
    /// Largest entry deviation; zero for exact runs.
    pub max_deviation: f64,
}

impl Normalization {
    pub fn is_exact(&self) -> bool {
        matches!(self, Normalization::Exact { .. })
    }

    /// Checks `U T_i U* = T_i^canonical` entrywise on the shift built from
    /// `raw` over words of length at most `depth + 1`.
    pub fn check_conjugation(
        &self,
        raw: &ExplicitWeights<GaussianRational>,
    ) -> Result<ConjugationCheck> {
        let n = raw.alphabet_size();
        let space = TruncatedFockSpace::new(n, raw.depth() + 1)?;
        let raw_shift = build_shift(raw, space)?;
        match self {
            Normalization::Exact { unitary, canonical } => {
                let u = unitary.as_operator(space)?;
                let canonical_shift: Vec<TruncatedOperator<GaussianRational>> =
                    build_shift::<Rational, _>(canonical, space)?
                        .into_iter()
                        .map(|t| {
                            TruncatedOperator::from_matrix(
                                space,
                                t.matrix()
                                    .map(|v| GaussianRational::from_rational(v.clone())),
                            )
                            .expect("same space")
                        })
                        .collect();
                let mut holds = true;
                for (t, expected) in raw_shift.iter().zip(&canonical_shift) {
                    let conjugated = u.multiply(t)?.multiply(&u.adjoint())?;
                    holds &= conjugated == *expected;
                }
                let all_nonnegative = canonical.iter().all(|(_, _, v)| !v.is_negative());
                Ok(ConjugationCheck {
                    exact: true,
                    holds,
                    all_nonnegative,
                    max_deviation: 0.0,
                })
            }
            Normalization::Inexact(approx) => {
                let dim = space.dimension();
                let mut u = SparseMatrix::<Complex64>::zeros(dim, dim);
                for w in space.words() {
                    let idx = word_index(&w).0;
                    u.set(idx, idx, approx.phases[&w]);
                }
                let u_star = u.adjoint();
                let mut max_deviation: f64 = 0.0;
                for (idx, t) in raw_shift.iter().enumerate() {
                    let letter = idx + 1;
                    let tf = t
                        .matrix()
                        .map(|z| Complex64::new(to_f64(&z.re), to_f64(&z.im)));
                    let conjugated = u.mul(&tf)?.mul(&u_star)?;
                    for w in words_up_to(n, raw.depth()) {
                        let col = word_index(&w).0;
                        let row = word_index(&w.prepend(letter)?).0;
                        let expected = approx.canonical[&(letter, w.clone())];
                        for r in 0..dim {
                            let got = conjugated.value(r, col);
                            let want = if r == row {
                                Complex64::new(expected, 0.0)
                            } else {
                                Complex64::new(0.0, 0.0)
                            };
                            max_deviation = max_deviation.max((got - want).norm());
                        }
                    }
                }
                let all_nonnegative = approx.canonical.values().all(|&v| v >= 0.0);
                Ok(ConjugationCheck {
                    exact: false,
                    holds: max_deviation <= NORMALIZATION_TOLERANCE,
                    all_nonnegative,
                    max_deviation,
                })
            }
        }
    }
}

/// Finds a diagonal unitary carrying the raw shift to the shift with weights
/// `|λ_{i,w}|`, for words of length at most `depth`.
///
/// Phases are chosen level by level: `μ_e = 1`, and `μ_{iw}` makes
/// `conj(μ_w) λ_{i,w} μ_{iw}` nonnegative, with `μ_{iw} = 1` when that
/// product vanishes.
pub fn normalize_weights(
    raw: &ExplicitWeights<GaussianRational>,
    depth: usize,
) -> Result<Normalization> {
    if depth > raw.depth() {
        return Err(Error::InsufficientDepth {
            required: depth,
            available: raw.depth(),
        });
    }
    let n = raw.alphabet_size();
    let raw = ExplicitWeights::sample(raw, depth)?;
    let moduli: Option<Vec<Rational>> = raw
        .iter()
        .map(|(_, _, v)| rational_sqrt(&norm_sqr(v)))
        .collect();
    match moduli {
        Some(_) => {
            let mut phases = BTreeMap::new();
            phases.insert(Word::empty(n), GaussianRational::one());
            let mut canonical = Vec::new();
            for w in words_up_to(n, depth) {
                let mu_w = phases[&w].clone();
                for i in 1..=n {
                    let lambda = raw.weight(i, &w).expect("sampled");
                    let x = Scalar::conj(&mu_w) * lambda;
                    let modulus = rational_sqrt(&norm_sqr(&x)).expect("moduli checked");
                    let mu_iw = if modulus.is_zero() {
                        GaussianRational::one()
                    } else {
                        let c = Scalar::conj(&x);
                        GaussianRational::new(c.re / &modulus, c.im / &modulus)
                    };
                    phases.insert(w.prepend(i)?, mu_iw);
                    canonical.push((i, w.clone(), modulus));
                }
            }
            Ok(Normalization::Exact {
                unitary: DiagonalUnitary { phases },
                canonical: ExplicitWeights::from_entries(n, depth, canonical)?,
            })
        }
        None => {
            let mut phases = BTreeMap::new();
            phases.insert(Word::empty(n), Complex64::new(1.0, 0.0));
            let mut canonical = BTreeMap::new();
            for w in words_up_to(n, depth) {
                let mu_w = phases[&w];
                for i in 1..=n {
                    let lambda = raw.weight(i, &w).expect("sampled");
                    let lambda = Complex64::new(to_f64(&lambda.re), to_f64(&lambda.im));
                    let x = mu_w.conj() * lambda;
                    let modulus = x.norm();
                    let mu_iw = if modulus == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        x.conj() / modulus
                    };
                    phases.insert(w.prepend(i)?, mu_iw);
                    canonical.insert((i, w.clone()), modulus);
                }
            }
            Ok(Normalization::Inexact(ApproximateNormalization {
                phases,
                canonical,
            }))
        }
    }
}

pub(crate) mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
