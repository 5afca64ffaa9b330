//! Truncated Fock space over the free semigroup on `N` letters.
//!
//! The space keeps every word of length at most `L`. Operators that raise word
//! length send the top level to zero, so identities are stated on the subspace
//! spanned by words of length at most `L - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVector};
use crate::words::{word_at, word_index, Word, WordIndex};

/// `d(N,k) = 1 + N + … + N^{k-1}`, the number of words of length `< k`.
pub fn dimension_d(alphabet_size: usize, k: usize) -> usize {
    let mut total: usize = 0;
    let mut power: usize = 1;
    for _ in 0..k {
        total = total.checked_add(power).expect("d(N,k) overflows usize");
        power = power.saturating_mul(alphabet_size);
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedFockSpace {
    alphabet_size: usize,
    max_length: usize,
}

impl TruncatedFockSpace {
    pub fn new(alphabet_size: usize, max_length: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(TruncatedFockSpace {
            alphabet_size,
            max_length,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn dimension(&self) -> usize {
        dimension_d(self.alphabet_size, self.max_length + 1)
    }

    /// Number of basis vectors for words of length at most `length`.
    pub fn dimension_up_to(&self, length: usize) -> usize {
        dimension_d(self.alphabet_size, length.min(self.max_length) + 1)
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        (w.alphabet_size() == self.alphabet_size && w.len() <= self.max_length)
            .then(|| word_index(w).0)
    }

    pub fn word(&self, index: usize) -> Word {
        assert!(index < self.dimension(), "index {index} outside the space");
        word_at(self.alphabet_size, WordIndex(index))
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.dimension()).map(move |idx| self.word(idx))
    }

    /// Basis vector `ξ_w`.
    pub fn basis_vector<S: Scalar>(&self, w: &Word) -> Result<SparseVector<S>> {
        let idx = self.index_of(w).ok_or_else(|| Error::DimensionMismatch {
            left: format!("word {w}"),
            right: self.describe(),
        })?;
        Ok(SparseVector::from([(idx, S::one())]))
    }

    fn describe(&self) -> String {
        format!("F(N={}, L={})", self.alphabet_size, self.max_length)
    }
}

/// An exact operator on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator<S> {
    space: TruncatedFockSpace,
    matrix: SparseMatrix<S>,
}

impl<S: Scalar> TruncatedOperator<S> {
    pub fn zero(space: TruncatedFockSpace) -> Self {
        let dim = space.dimension();
        TruncatedOperator {
            space,
            matrix: SparseMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(space: TruncatedFockSpace) -> Self {
        TruncatedOperator {
            space,
            matrix: SparseMatrix::identity(space.dimension()),
        }
    }

    pub fn from_matrix(space: TruncatedFockSpace, matrix: SparseMatrix<S>) -> Result<Self> {
        let dim = space.dimension();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", matrix.rows(), matrix.cols()),
                right: space.describe(),
            });
        }
        Ok(TruncatedOperator { space, matrix })
    }

    pub fn space(&self) -> TruncatedFockSpace {
        self.space
    }

    pub fn matrix(&self) -> &SparseMatrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseMatrix<S> {
        self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                left: self.space.describe(),
                right: other.space.describe(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(TruncatedOperator {
            space: self.space,
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(TruncatedOperator {
            space: self.space,
            matrix: self.matrix.sub(&other.matrix)?,
        })
    }

    /// `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(TruncatedOperator {
            space: self.space,
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scalar_multiply(&self, factor: &S) -> Self {
        TruncatedOperator {
            space: self.space,
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn apply_to_vector(&self, vector: &SparseVector<S>) -> Result<SparseVector<S>> {
        if let Some((&last, _)) = vector.last_key_value() {
            if last >= self.space.dimension() {
                return Err(Error::DimensionMismatch {
                    left: format!("vector index {last}"),
                    right: self.space.describe(),
                });
            }
        }
        Ok(self.matrix.apply(vector))
    }

    /// Compares the columns indexed by words of length `<= max_word_length`.
    pub fn equality_on_subspace(&self, other: &Self, max_word_length: usize) -> Result<bool> {
        Ok(self.first_difference(other, max_word_length)?.is_none())
    }

    /// First entry `(row, col, self, other)` where the two operators differ,
    /// scanning columns indexed by words of length `<= max_word_length`.
    pub fn first_difference(
        &self,
        other: &Self,
        max_word_length: usize,
    ) -> Result<Option<(usize, usize, S, S)>> {
        self.same_space(other)?;
        let cutoff = self.space.dimension_up_to(max_word_length);
        for col in 0..cutoff {
            let empty = Default::default();
            let a = self.matrix.column(col).unwrap_or(&empty);
            let b = other.matrix.column(col).unwrap_or(&empty);
            if a == b {
                continue;
            }
            let row = a
                .keys()
                .chain(b.keys())
                .copied()
                .filter(|r| a.get(r) != b.get(r))
                .min()
                .expect("columns differ");
            return Ok(Some((
                row,
                col,
                self.matrix.value(row, col),
                other.matrix.value(row, col),
            )));
        }
        Ok(None)
    }

    pub fn export(&self) -> MatrixExport {
        MatrixExport {
            n: self.space.alphabet_size,
            l: self.space.max_length,
            entries: self
                .matrix
                .entries_row_major()
                .into_iter()
                .map(|(r, c, v)| (r, c, v.to_export_string()))
                .collect(),
        }
    }
}

/// `L_i ξ_w = ξ_{iw}`; top-level basis vectors map to zero.
pub fn creation_operator<S: Scalar>(
    letter: usize,
    space: TruncatedFockSpace,
) -> Result<TruncatedOperator<S>> {
    let n = space.alphabet_size();
    if letter == 0 || letter > n {
        return Err(Error::LetterOutOfRange {
            letter,
            alphabet_size: n,
        });
    }
    let below_top = space.dimension_up_to(space.max_length().saturating_sub(1));
    let entries = if space.max_length() == 0 {
        Vec::new()
    } else {
        (0..below_top)
            .map(|col| {
                let w = space.word(col);
                let row = word_index(&w.prepend(letter).expect("letter checked")).0;
                (row, col, S::one())
            })
            .collect()
    };
    let dim = space.dimension();
    TruncatedOperator::from_matrix(space, SparseMatrix::from_entries(dim, dim, entries))
}

/// All `N` creation operators.
pub fn creation_operators<S: Scalar>(space: TruncatedFockSpace) -> Vec<TruncatedOperator<S>> {
    (1..=space.alphabet_size())
        .map(|i| creation_operator(i, space).expect("letter in range"))
        .collect()
}

/// `P_e = ξ_e ξ_e*`.
pub fn vacuum_projection<S: Scalar>(space: TruncatedFockSpace) -> TruncatedOperator<S> {
    let dim = space.dimension();
    TruncatedOperator {
        space,
        matrix: SparseMatrix::from_entries(dim, dim, [(0, 0, S::one())]),
    }
}

/// The unitary `ξ_w ↦ ξ_{σ(w)}` induced by a permutation `σ` of the letters,
/// given as `perm[j-1] = σ(j)`. Conjugating `L_j` by it gives `L_{σ(j)}`.
pub fn letter_permutation<S: Scalar>(
    space: TruncatedFockSpace,
    perm: &[usize],
) -> Result<TruncatedOperator<S>> {
    let n = space.alphabet_size();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(Error::InvalidPermutation(perm.to_vec(), n));
    }
    let dim = space.dimension();
    let entries = space.words().map(|w| {
        let image: Vec<usize> = w.letters().iter().map(|&l| perm[l - 1]).collect();
        let image = Word::new(n, image).expect("permutation stays in the alphabet");
        (word_index(&image).0, word_index(&w).0, S::one())
    });
    TruncatedOperator::from_matrix(space, SparseMatrix::from_entries(dim, dim, entries))
}

/// Which Cuntz-Toeplitz relation a violation belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    /// `T_i* T_j = δ_{ij} I`
    Isometry { i: usize, j: usize },
    /// `Σ T_i T_i* = I − P_e`
    RangeSum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationViolation {
    #[serde(flatten)]
    pub relation: Relation,
    pub row: String,
    pub col: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub passed: bool,
    /// Identities were compared on columns of words up to this length.
    pub checked_up_to_length: usize,
    pub violation: Option<RelationViolation>,
}

/// Checks `T_i* T_j = δ_{ij} I` and `Σ T_i T_i* = I − P_e` on words of length
/// at most `L − 1`.
pub fn check_ct_relations<S: Scalar>(ops: &[TruncatedOperator<S>]) -> Result<RelationReport> {
    let Some(first) = ops.first() else {
        return Err(Error::Config("no operators supplied".into()));
    };
    let space = first.space();
    for op in ops {
        first.same_space(op)?;
    }
    let cutoff = space.max_length().saturating_sub(1);
    let identity = TruncatedOperator::<S>::identity(space);
    let zero = TruncatedOperator::<S>::zero(space);
    let violation = |relation: Relation, diff: (usize, usize, S, S)| {
        let (row, col, actual, expected) = diff;
        RelationReport {
            passed: false,
            checked_up_to_length: cutoff,
            violation: Some(RelationViolation {
                relation,
                row: space.word(row).to_string(),
                col: space.word(col).to_string(),
                expected: expected.to_export_string(),
                actual: actual.to_export_string(),
            }),
        }
    };

    for (i, ti) in ops.iter().enumerate() {
        let ti_star = ti.adjoint();
        for (j, tj) in ops.iter().enumerate() {
            let product = ti_star.multiply(tj)?;
            let expected = if i == j { &identity } else { &zero };
            if let Some(diff) = product.first_difference(expected, cutoff)? {
                return Ok(violation(Relation::Isometry { i: i + 1, j: j + 1 }, diff));
            }
        }
    }

    let mut range_sum = zero.clone();
    for t in ops {
        range_sum = range_sum.add(&t.multiply(&t.adjoint())?)?;
    }
    let expected = identity.sub(&vacuum_projection(space))?;
    if let Some(diff) = range_sum.first_difference(&expected, cutoff)? {
        return Ok(violation(Relation::RangeSum, diff));
    }
    Ok(RelationReport {
        passed: true,
        checked_up_to_length: cutoff,
        violation: None,
    })
}

/// `{N, L, entries: [[row, col, "p/q"], …]}` with canonical word indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub entries: Vec<(usize, usize, String)>,
}
