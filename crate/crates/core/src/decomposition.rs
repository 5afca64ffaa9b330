//! Block decomposition of period-`k` shifts.
//!
//! Fock space over `N` letters splits as `⊕_{|w|<k} K_w` with
//! `K_w = span{ξ_{wv} : k | |v|}`. Each `K_w` is a copy of the Fock space over
//! `N^k` letters via `φ`, so a period-`k` shift becomes a `d(N,k) × d(N,k)`
//! matrix of operators on that larger Fock space. At truncation
//! `L = k(m+1) − 1` every `K_w` holds exactly `m + 1` levels and the
//! identification is an exact permutation of basis vectors.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    creation_operator, dimension_d, MatrixExport, TruncatedFockSpace, TruncatedOperator,
};
use crate::periodicity::{periodic_weight, WeightTop};
use crate::scalar::{Rational, Scalar};
use crate::shift::build_shift;
use crate::sparse::SparseMatrix;
use crate::words::{
    big_alphabet, enumerate_words, phi, phi_extended, word_index, words_up_to, Word,
};

/// `L = k(m+1) − 1`.
pub fn aligned_max_length(period: usize, level: usize) -> usize {
    period * (level + 1) - 1
}

fn check_period(alphabet_size: usize, period: usize) -> Result<()> {
    if alphabet_size == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if period == 0 {
        return Err(Error::ZeroPeriod);
    }
    Ok(())
}

/// The subspaces `K_w`, `|w| < k`, as ordered lists of basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspacePartition {
    pub alphabet_size: usize,
    pub period: usize,
    pub max_length: usize,
    /// `(w, [index(w v_0), index(w v_1), …])` in canonical order of `w`; the
    /// `v_j` run over words of length divisible by `k`, level by level.
    pub blocks: Vec<(Word, Vec<usize>)>,
}

impl SubspacePartition {
    pub fn level(&self) -> usize {
        (self.max_length + 1) / self.period - 1
    }

    pub fn block(&self, w: &Word) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|(u, _)| u == w)
            .map(|(_, idx)| idx.as_slice())
    }
}

pub fn subspace_partition(
    alphabet_size: usize,
    period: usize,
    max_length: usize,
) -> Result<SubspacePartition> {
    check_period(alphabet_size, period)?;
    if !(max_length + 1).is_multiple_of(period) {
        let valid: Vec<String> = (0..4)
            .map(|m| aligned_max_length(period, m).to_string())
            .collect();
        return Err(Error::MisalignedTruncation {
            max_length,
            period,
            valid: format!("{}, ...", valid.join(", ")),
        });
    }
    let level = (max_length + 1) / period - 1;
    let tails: Vec<Word> = (0..=level)
        .flat_map(|j| enumerate_words(alphabet_size, period * j).expect("alphabet checked"))
        .collect();
    let blocks = words_up_to(alphabet_size, period - 1)
        .map(|w| {
            let indices = tails
                .iter()
                .map(|v| word_index(&w.concat(v).expect("same alphabet")).0)
                .collect();
            (w, indices)
        })
        .collect();
    Ok(SubspacePartition {
        alphabet_size,
        period,
        max_length,
        blocks,
    })
}

/// The permutations `U` and `V` identifying `d(N,k)` copies of the truncated
/// Fock space over `N^k` letters with the truncated Fock space over `N`.
///
/// Copy `p` (the `p`-th short word `w` in canonical order) occupies indices
/// `p·D .. (p+1)·D` where `D` is the dimension of one copy.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionUnitaries {
    pub alphabet_size: usize,
    pub period: usize,
    pub level: usize,
    /// `U ξ^w_u = ξ_{wu}`, from copies of `K_e` onto the original space.
    pub u: SparseMatrix<Rational>,
    /// `V ξ^w_{φ(u)} = ξ^w_u`, from copies of the big Fock space onto copies of `K_e`.
    pub v: SparseMatrix<Rational>,
}

impl DecompositionUnitaries {
    pub fn grid(&self) -> usize {
        dimension_d(self.alphabet_size, self.period)
    }

    pub fn block_space(&self) -> TruncatedFockSpace {
        TruncatedFockSpace::new(big_alphabet(self.alphabet_size, self.period), self.level)
            .expect("nonempty alphabet")
    }

    pub fn fock_space(&self) -> TruncatedFockSpace {
        TruncatedFockSpace::new(
            self.alphabet_size,
            aligned_max_length(self.period, self.level),
        )
        .expect("nonempty alphabet")
    }

    /// `UV`.
    pub fn combined(&self) -> SparseMatrix<Rational> {
        self.u.mul(&self.v).expect("square of equal size")
    }
}

pub fn build_unitaries(
    alphabet_size: usize,
    period: usize,
    level: usize,
) -> Result<DecompositionUnitaries> {
    check_period(alphabet_size, period)?;
    let max_length = aligned_max_length(period, level);
    let block_space = TruncatedFockSpace::new(big_alphabet(alphabet_size, period), level)?;
    let copy_dim = block_space.dimension();
    let total = dimension_d(alphabet_size, period) * copy_dim;
    debug_assert_eq!(total, dimension_d(alphabet_size, max_length + 1));

    // basis of K_e: words whose length is a multiple of k, level by level
    let tails: Vec<Word> = (0..=level)
        .flat_map(|j| enumerate_words(alphabet_size, period * j).expect("alphabet checked"))
        .collect();

    let mut u_entries = Vec::with_capacity(total);
    let mut v_entries = Vec::with_capacity(total);
    for (pos, w) in words_up_to(alphabet_size, period - 1).enumerate() {
        let offset = pos * copy_dim;
        for (local, tail) in tails.iter().enumerate() {
            let target = word_index(&w.concat(tail)?).0;
            u_entries.push((target, offset + local, Rational::from_integer(1.into())));
            let image = word_index(&phi_extended(tail, period)?).0;
            v_entries.push((
                offset + local,
                offset + image,
                Rational::from_integer(1.into()),
            ));
        }
    }
    Ok(DecompositionUnitaries {
        alphabet_size,
        period,
        level,
        u: SparseMatrix::from_entries(total, total, u_entries),
        v: SparseMatrix::from_entries(total, total, v_entries),
    })
}

/// A `d × d` grid of operators on one truncated Fock space. Absent blocks are
/// zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix<S = Rational> {
    alphabet_size: usize,
    period: usize,
    block_space: TruncatedFockSpace,
    blocks: BTreeMap<(usize, usize), TruncatedOperator<S>>,
}

impl<S: Scalar> BlockMatrix<S> {
    pub fn zero(alphabet_size: usize, period: usize, level: usize) -> Result<Self> {
        check_period(alphabet_size, period)?;
        Ok(BlockMatrix {
            alphabet_size,
            period,
            block_space: TruncatedFockSpace::new(big_alphabet(alphabet_size, period), level)?,
            blocks: BTreeMap::new(),
        })
    }

    pub fn grid(&self) -> usize {
        dimension_d(self.alphabet_size, self.period)
    }

    pub fn level(&self) -> usize {
        self.block_space.max_length()
    }

    pub fn block_space(&self) -> TruncatedFockSpace {
        self.block_space
    }

    /// The short word labelling grid position `pos`.
    pub fn label(&self, pos: usize) -> Word {
        crate::words::word_at(self.alphabet_size, crate::words::WordIndex(pos))
    }

    fn position(&self, w: &Word) -> Result<usize> {
        if w.alphabet_size() != self.alphabet_size || w.len() >= self.period {
            return Err(Error::NotAGridLabel {
                word: w.to_string(),
                period: self.period,
            });
        }
        Ok(word_index(w).0)
    }

    /// Block at row label `row`, column label `col`.
    pub fn block(&self, row: &Word, col: &Word) -> Result<Option<&TruncatedOperator<S>>> {
        Ok(self.blocks.get(&(self.position(row)?, self.position(col)?)))
    }

    pub fn block_at(&self, row: usize, col: usize) -> Option<&TruncatedOperator<S>> {
        self.blocks.get(&(row, col))
    }

    pub fn set_block(&mut self, row: &Word, col: &Word, op: TruncatedOperator<S>) -> Result<()> {
        if op.space() != self.block_space {
            return Err(Error::DimensionMismatch {
                left: format!(
                    "block on N={}, L={}",
                    op.space().alphabet_size(),
                    op.space().max_length()
                ),
                right: format!(
                    "grid over N={}, L={}",
                    self.block_space.alphabet_size(),
                    self.block_space.max_length()
                ),
            });
        }
        let key = (self.position(row)?, self.position(col)?);
        if op.is_zero() {
            self.blocks.remove(&key);
        } else {
            self.blocks.insert(key, op);
        }
        Ok(())
    }

    /// Labels `(row, col)` of the nonzero blocks, in grid order.
    pub fn nonzero_blocks(&self) -> Vec<(Word, Word)> {
        self.blocks
            .keys()
            .map(|&(r, c)| (self.label(r), self.label(c)))
            .collect()
    }

    /// Conjugates every block by the Fock-space unitary that relabels letters
    /// of the block alphabet by `perm` (`perm[j-1]` is the image of letter `j`).
    pub fn relabel_letters(&self, perm: &[usize]) -> Result<Self> {
        let p = crate::fock::letter_permutation(self.block_space, perm)?;
        let p_star = p.adjoint();
        let mut blocks = BTreeMap::new();
        for (&key, op) in &self.blocks {
            blocks.insert(key, p.multiply(op)?.multiply(&p_star)?);
        }
        Ok(BlockMatrix {
            blocks,
            ..self.clone()
        })
    }

    /// Reassembles the grid into one matrix on the direct sum of copies.
    pub fn assemble(&self) -> SparseMatrix<S> {
        let dim = self.block_space.dimension();
        let total = self.grid() * dim;
        let entries = self.blocks.iter().flat_map(|(&(r, c), op)| {
            op.matrix()
                .entries()
                .map(move |(i, j, v)| (r * dim + i, c * dim + j, v.clone()))
        });
        SparseMatrix::from_entries(total, total, entries)
    }

    pub fn export(&self) -> BlockMatrixExport {
        BlockMatrixExport {
            n: self.alphabet_size,
            k: self.period,
            m: self.level(),
            blocks: self
                .blocks
                .iter()
                .map(|(&(r, c), op)| BlockExport {
                    row: self.label(r).to_string(),
                    col: self.label(c).to_string(),
                    op: op.export(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockExport {
    pub row: String,
    pub col: String,
    pub op: MatrixExport,
}

/// `{N, k, m, blocks: [{row, col, op}, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMatrixExport {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub blocks: Vec<BlockExport>,
}

/// `V* U* T U V`, re-sliced into the `d × d` grid.
pub fn conjugate_shift(
    shift: &TruncatedOperator<Rational>,
    unitaries: &DecompositionUnitaries,
) -> Result<BlockMatrix> {
    let expected = unitaries.fock_space();
    if shift.space() != expected {
        return Err(Error::DimensionMismatch {
            left: format!(
                "shift on N={}, L={}",
                shift.space().alphabet_size(),
                shift.space().max_length()
            ),
            right: format!(
                "unitaries for N={}, L={}",
                expected.alphabet_size(),
                expected.max_length()
            ),
        });
    }
    let uv = unitaries.combined();
    let conjugated = uv.adjoint().mul(shift.matrix())?.mul(&uv)?;
    let mut out = BlockMatrix::zero(unitaries.alphabet_size, unitaries.period, unitaries.level)?;
    let dim = out.block_space.dimension();
    for r in 0..out.grid() {
        for c in 0..out.grid() {
            let block = conjugated.submatrix(r * dim..(r + 1) * dim, c * dim..(c + 1) * dim);
            if !block.is_zero() {
                out.blocks.insert(
                    (r, c),
                    TruncatedOperator::from_matrix(out.block_space, block)?,
                );
            }
        }
    }
    Ok(out)
}

/// The block form of `T_i` for `|w| < k − 1`: `λ_{i,w} I` at `(iw, w)`; for
/// `|w| = k − 1`: `λ_{i,w} L_{φ(iw)}` at `(e, w)`; zero elsewhere.
pub fn predicted_blocks(top: &WeightTop, letter: usize, level: usize) -> Result<BlockMatrix> {
    let n = top.alphabet_size();
    let k = top.period();
    if letter == 0 || letter > n {
        return Err(Error::LetterOutOfRange {
            letter,
            alphabet_size: n,
        });
    }
    let mut out = BlockMatrix::zero(n, k, level)?;
    let space = out.block_space;
    for w in words_up_to(n, k - 1) {
        let lambda = top.value(letter, &w).expect("top is complete").clone();
        if lambda.is_zero() {
            continue;
        }
        let iw = w.prepend(letter)?;
        if w.len() + 1 < k {
            let block = TruncatedOperator::identity(space).scalar_multiply(&lambda);
            out.set_block(&iw, &w, block)?;
        } else {
            let big_letter = phi(&iw, k)?;
            let block = creation_operator::<Rational>(big_letter, space)?.scalar_multiply(&lambda);
            out.set_block(&Word::empty(n), &w, block)?;
        }
    }
    Ok(out)
}

/// Entry where the conjugated and predicted block matrices disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDiscrepancy {
    pub letter: usize,
    pub row_block: String,
    pub col_block: String,
    pub row: String,
    pub col: String,
    pub expected: String,
    pub actual: String,
}

/// Which columns of the grid are compared. Columns under a label `w` with
/// `|w| = k − 1` raise the block level by one, so their top level is dropped.
pub fn compared_columns(block: &BlockMatrix, col_pos: usize) -> usize {
    let raises_level = block.label(col_pos).len() + 1 == block.period;
    match (raises_level, block.level()) {
        (true, 0) => 0,
        (true, level) => block.block_space.dimension_up_to(level - 1),
        (false, level) => block.block_space.dimension_up_to(level),
    }
}

/// Compares two grids column by column over the compared column set.
pub fn compare_blocks(
    actual: &BlockMatrix,
    predicted: &BlockMatrix,
    letter: usize,
) -> Result<Option<BlockDiscrepancy>> {
    if actual.block_space != predicted.block_space || actual.period != predicted.period {
        return Err(Error::DimensionMismatch {
            left: format!(
                "grid N={}, k={}, m={}",
                actual.alphabet_size,
                actual.period,
                actual.level()
            ),
            right: format!(
                "grid N={}, k={}, m={}",
                predicted.alphabet_size,
                predicted.period,
                predicted.level()
            ),
        });
    }
    let zero = TruncatedOperator::<Rational>::zero(actual.block_space);
    for c in 0..actual.grid() {
        let columns = compared_columns(actual, c);
        if columns == 0 {
            continue;
        }
        for col in 0..columns {
            for r in 0..actual.grid() {
                let a = actual.block_at(r, c).unwrap_or(&zero);
                let p = predicted.block_at(r, c).unwrap_or(&zero);
                let (ca, cp) = (a.matrix().column(col), p.matrix().column(col));
                if ca == cp {
                    continue;
                }
                let empty = BTreeMap::new();
                let (ca, cp) = (ca.unwrap_or(&empty), cp.unwrap_or(&empty));
                let row = ca
                    .keys()
                    .chain(cp.keys())
                    .copied()
                    .filter(|i| ca.get(i) != cp.get(i))
                    .min()
                    .expect("columns differ");
                let space = actual.block_space;
                return Ok(Some(BlockDiscrepancy {
                    letter,
                    row_block: actual.label(r).to_string(),
                    col_block: actual.label(c).to_string(),
                    row: space.word(row).to_string(),
                    col: space.word(col).to_string(),
                    expected: p.matrix().value(row, col).to_string(),
                    actual: a.matrix().value(row, col).to_string(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub passed: bool,
    #[serde(rename = "N")]
    pub alphabet_size: usize,
    pub k: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub max_length: usize,
    /// Number of grid columns compared, per letter.
    pub compared_columns: usize,
    pub column_rule: String,
    pub first_discrepancy: Option<BlockDiscrepancy>,
}

/// Builds the period-`k` shift of `top` at `L = k(m+1) − 1`, conjugates it by
/// `UV`, and compares every `T_i` against [`predicted_blocks`], exactly.
pub fn verify_theorem(top: &WeightTop, level: usize) -> Result<TheoremReport> {
    if level == 0 {
        return Err(Error::BlockLevel {
            minimum: 1,
            actual: 0,
        });
    }
    let n = top.alphabet_size();
    let k = top.period();
    let unitaries = build_unitaries(n, k, level)?;
    let space = unitaries.fock_space();
    let shifts = build_shift(&periodic_weight(top), space)?;
    let mut first_discrepancy = None;
    let mut compared = 0;
    for (idx, shift) in shifts.iter().enumerate() {
        let letter = idx + 1;
        let actual = conjugate_shift(shift, &unitaries)?;
        let predicted = predicted_blocks(top, letter, level)?;
        compared = (0..actual.grid())
            .map(|c| compared_columns(&actual, c))
            .sum();
        if let Some(d) = compare_blocks(&actual, &predicted, letter)? {
            first_discrepancy = Some(d);
            break;
        }
    }
    Ok(TheoremReport {
        passed: first_discrepancy.is_none(),
        alphabet_size: n,
        k,
        m: level,
        max_length: space.max_length(),
        compared_columns: compared,
        column_rule: format!(
            "columns of level <= {} under labels of length < {}, level <= {} under labels of length {}",
            level,
            k - 1,
            level - 1,
            k - 1
        ),
        first_discrepancy,
    })
}

/// Top with a single weight 1 at `(letter, w)` and zeros elsewhere.
pub fn indicator_top(
    alphabet_size: usize,
    period: usize,
    letter: usize,
    w: &Word,
) -> Result<WeightTop> {
    WeightTop::from_fn(alphabet_size, period, |i, u| {
        Rational::from_integer(((i == letter && u == w) as i64).into())
    })
}
