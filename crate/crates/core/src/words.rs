//! Words of the free semigroup on `N` letters.
//!
//! Letters are 1-based (`1..=N`) and the unit `e` is the empty word. Words are
//! ranked in level-then-lexicographic order, so that all words of length `l`
//! occupy the contiguous index range `[d(N,l), d(N,l+1))`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::dimension_d;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet_size: usize,
    letters: Vec<usize>,
}

/// Canonical rank of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordIndex(pub usize);

impl Word {
    pub fn new(alphabet_size: usize, letters: Vec<usize>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > alphabet_size) {
            return Err(Error::LetterOutOfRange {
                letter,
                alphabet_size,
            });
        }
        Ok(Word {
            alphabet_size,
            letters,
        })
    }

    /// The unit `e`.
    pub fn empty(alphabet_size: usize) -> Self {
        assert!(alphabet_size >= 1, "alphabet size must be at least 1");
        Word {
            alphabet_size,
            letters: Vec::new(),
        }
    }

    pub fn letter(alphabet_size: usize, letter: usize) -> Result<Self> {
        Word::new(alphabet_size, vec![letter])
    }

    /// Parses a dotted ("2.1.1") or compact ("211") word; "e" is the unit.
    pub fn parse(alphabet_size: usize, input: &str) -> Result<Self> {
        let s = input.trim();
        let syntax = |reason: &str| Error::WordSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s == "e" || s.is_empty() {
            return Word::new(alphabet_size, Vec::new());
        }
        let letters = if s.contains('.') {
            s.split('.')
                .map(|part| part.parse::<usize>().map_err(|_| syntax("bad letter")))
                .collect::<Result<Vec<_>>>()?
        } else {
            if alphabet_size > 9 {
                return Err(syntax("compact form needs N <= 9; use dotted letters"));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| syntax("expected a digit"))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(alphabet_size, letters)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word `iw`.
    pub fn prepend(&self, letter: usize) -> Result<Word> {
        if letter == 0 || letter > self.alphabet_size {
            return Err(Error::LetterOutOfRange {
                letter,
                alphabet_size: self.alphabet_size,
            });
        }
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Ok(Word {
            alphabet_size: self.alphabet_size,
            letters,
        })
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet_size,
                right: other.alphabet_size,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            alphabet_size: self.alphabet_size,
            letters,
        })
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            alphabet_size: self.alphabet_size,
            letters: self.letters[..len].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word {
            alphabet_size: self.alphabet_size,
            letters: self.letters[start..].to_vec(),
        }
    }

    /// Lexicographic rank among words of the same length.
    fn level_rank(&self) -> usize {
        self.letters
            .iter()
            .fold(0usize, |acc, &l| acc * self.alphabet_size + (l - 1))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.alphabet_size.cmp(&other.alphabet_size))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        if self.alphabet_size <= 9 {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
        } else {
            for (pos, l) in self.letters.iter().enumerate() {
                if pos > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}; N={})", self.alphabet_size)
    }
}

/// `d(N,|w|) + Σ_j (i_j − 1)·N^{|w|−j}`.
pub fn word_index(w: &Word) -> WordIndex {
    WordIndex(dimension_d(w.alphabet_size, w.len()) + w.level_rank())
}

/// Inverse of [`word_index`].
pub fn word_at(alphabet_size: usize, index: WordIndex) -> Word {
    assert!(alphabet_size >= 1, "alphabet size must be at least 1");
    let mut length = 0;
    while dimension_d(alphabet_size, length + 1) <= index.0 {
        length += 1;
    }
    let mut rank = index.0 - dimension_d(alphabet_size, length);
    let mut letters = vec![1; length];
    for slot in letters.iter_mut().rev() {
        *slot = rank % alphabet_size + 1;
        rank /= alphabet_size;
    }
    Word {
        alphabet_size,
        letters,
    }
}

/// All `N^length` words of the given length, in lexicographic order.
pub fn enumerate_words(alphabet_size: usize, length: usize) -> Result<Vec<Word>> {
    if alphabet_size == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let start = dimension_d(alphabet_size, length);
    let end = dimension_d(alphabet_size, length + 1);
    Ok((start..end)
        .map(|idx| word_at(alphabet_size, WordIndex(idx)))
        .collect())
}

/// All words of length at most `max_length`, in canonical order.
pub fn words_up_to(alphabet_size: usize, max_length: usize) -> impl Iterator<Item = Word> {
    (0..dimension_d(alphabet_size, max_length + 1))
        .map(move |idx| word_at(alphabet_size, WordIndex(idx)))
}

/// Splits `w = uv` with `|u| < k` and `k | |v|`.
pub fn periodic_decompose(w: &Word, k: usize) -> Result<(Word, Word)> {
    if k == 0 {
        return Err(Error::ZeroPeriod);
    }
    let split = w.len() % k;
    Ok((w.prefix(split), w.suffix_from(split)))
}

/// Maps a length-`k` word over `N` letters to a letter of the `N^k` alphabet.
pub fn phi(w: &Word, k: usize) -> Result<usize> {
    if w.len() != k {
        return Err(Error::WordLength {
            expected: k,
            actual: w.len(),
        });
    }
    Ok(w.level_rank() + 1)
}

/// Blockwise [`phi`] on a word of length `k·m`, giving a length-`m` word over `N^k`.
pub fn phi_extended(w: &Word, k: usize) -> Result<Word> {
    if k == 0 {
        return Err(Error::ZeroPeriod);
    }
    if !w.len().is_multiple_of(k) {
        return Err(Error::LengthNotMultiple {
            length: w.len(),
            block: k,
        });
    }
    let big = big_alphabet(w.alphabet_size, k);
    let letters = w
        .letters
        .chunks(k)
        .map(|block| {
            block
                .iter()
                .fold(0usize, |acc, &l| acc * w.alphabet_size + (l - 1))
                + 1
        })
        .collect();
    Word::new(big, letters)
}

/// Inverse of [`phi_extended`]; `letter_word` is over the `N^k` alphabet.
pub fn phi_inverse(letter_word: &Word, alphabet_size: usize, k: usize) -> Result<Word> {
    if k == 0 {
        return Err(Error::ZeroPeriod);
    }
    let big = big_alphabet(alphabet_size, k);
    if letter_word.alphabet_size != big {
        return Err(Error::AlphabetMismatch {
            left: letter_word.alphabet_size,
            right: big,
        });
    }
    let mut letters = Vec::with_capacity(letter_word.len() * k);
    for &big_letter in &letter_word.letters {
        let mut rank = big_letter - 1;
        let mut block = vec![0; k];
        for slot in block.iter_mut().rev() {
            *slot = rank % alphabet_size + 1;
            rank /= alphabet_size;
        }
        letters.extend(block);
    }
    Word::new(alphabet_size, letters)
}

pub(crate) fn big_alphabet(alphabet_size: usize, k: usize) -> usize {
    alphabet_size
        .checked_pow(k as u32)
        .expect("alphabet size N^k overflows usize")
}
