//! Divisor sequences, supernatural numbers, and the divisibility criteria that
//! classify the inductive limits of periodic shift algebras.
//!
//! Every verdict here is about the finite prefixes supplied. A prefix only
//! bounds the exponents of its supernatural number from below, so reports
//! carry a prefix-semantics flag.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite prefix `n_1 < n_2 < …` with `n_j | n_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorSequence {
    terms: Vec<u64>,
}

impl DivisorSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() || terms.contains(&0) {
            return Err(Error::EmptySequence);
        }
        for (pos, pair) in terms.windows(2).enumerate() {
            let (prev, next) = (pair[0], pair[1]);
            let reason = if next <= prev {
                Some("are not increasing")
            } else if next % prev != 0 {
                Some("do not divide")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::NotDivisorSequence {
                    position: pos + 1,
                    prev,
                    next_position: pos + 2,
                    next,
                    reason,
                });
            }
        }
        Ok(DivisorSequence { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn last(&self) -> u64 {
        *self.terms.last().expect("non-empty")
    }
}

impl FromStr for DivisorSequence {
    type Err = Error;

    /// Comma-separated integers, e.g. `"2,4,8"`.
    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| {
                    Error::Config(format!("bad sequence term {:?} in {s:?}", t.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DivisorSequence::new(terms)
    }
}

impl fmt::Display for DivisorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// A formal product `Π p^{α_p}` with `α_p ∈ ℕ ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
    from_prefix: bool,
}

impl SupernaturalNumber {
    /// Exponent of `p`; absent primes have exponent zero.
    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents
            .get(&p)
            .copied()
            .unwrap_or(Exponent::Finite(0))
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Exponent> {
        &self.exponents
    }

    /// True when computed from a finite prefix, in which case each exponent is
    /// only a lower bound for the infinite sequence.
    pub fn is_prefix_approximation(&self) -> bool {
        self.from_prefix
    }

    /// Same exponent map, ignoring provenance.
    pub fn same_value(&self, other: &Self) -> bool {
        self.exponents == other.exponents
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                Exponent::Finite(a) => format!("{p}^{a}"),
                Exponent::Infinite => format!("{p}^∞"),
            })
            .collect();
        f.write_str(&parts.join(" · "))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl FromStr for SupernaturalNumber {
    type Err = Error;

    /// User-declared factored form such as `"2^3 · 3^∞"`, `"2^3*3^inf"`, or `"1"`.
    fn from_str(input: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SupernaturalSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut exponents = BTreeMap::new();
        let trimmed = input.trim();
        if trimmed == "1" {
            return Ok(SupernaturalNumber {
                exponents,
                from_prefix: false,
            });
        }
        for factor in trimmed.split(['·', '*']) {
            let factor = factor.trim();
            let (base, exp) = factor.split_once('^').unwrap_or((factor, "1"));
            let p: u64 = base.trim().parse().map_err(|_| bad("bad prime"))?;
            if !is_prime(p) {
                return Err(bad(&format!("{p} is not prime")));
            }
            let exp = match exp.trim() {
                "∞" | "inf" | "infinity" => Exponent::Infinite,
                other => Exponent::Finite(other.parse().map_err(|_| bad("bad exponent"))?),
            };
            if exponents.insert(p, exp).is_some() {
                return Err(bad(&format!("prime {p} appears twice")));
            }
        }
        exponents.retain(|_, e| *e != Exponent::Finite(0));
        Ok(SupernaturalNumber {
            exponents,
            from_prefix: false,
        })
    }
}

fn factor(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Exponent of each prime, maximised over the prefix.
pub fn supernatural_from_sequence(seq: &DivisorSequence) -> SupernaturalNumber {
    let mut exponents: BTreeMap<u64, Exponent> = BTreeMap::new();
    for &term in seq.terms() {
        for (p, a) in factor(term) {
            let slot = exponents.entry(p).or_insert(Exponent::Finite(0));
            *slot = (*slot).max(Exponent::Finite(a));
        }
    }
    SupernaturalNumber {
        exponents,
        from_prefix: true,
    }
}

fn mutually_divisible<T, F>(a: &[T], b: &[T], divides: F) -> bool
where
    F: Fn(&T, &T) -> bool,
{
    a.iter().all(|x| b.iter().any(|y| divides(x, y)))
        && b.iter().all(|y| a.iter().any(|x| divides(y, x)))
}

/// Every term of each prefix divides some term of the other.
pub fn supernatural_eq(a: &DivisorSequence, b: &DivisorSequence) -> bool {
    mutually_divisible(a.terms(), b.terms(), |x, y| y % x == 0)
}

fn check_alphabet(alphabet_size: u64) -> Result<()> {
    if alphabet_size < 2 {
        return Err(Error::AlphabetTooSmall(alphabet_size as usize));
    }
    Ok(())
}

/// `N^k − 1`.
fn order(alphabet_size: u64, k: u64) -> BigUint {
    num_traits::pow(BigUint::from(alphabet_size), k as usize) - BigUint::one()
}

/// `d(N,k) = (N^k − 1)/(N − 1)` in arbitrary precision.
pub fn big_dimension_d(alphabet_size: u64, k: u64) -> Result<BigUint> {
    check_alphabet(alphabet_size)?;
    Ok(order(alphabet_size, k) / BigUint::from(alphabet_size - 1))
}

/// `([d(N,n) | d(N,m)], [n | m])`; the two always agree for `N ≥ 2`.
pub fn d_divides_iff(alphabet_size: u64, n: u64, m: u64) -> Result<(bool, bool)> {
    check_alphabet(alphabet_size)?;
    if n == 0 || m == 0 {
        return Err(Error::EmptySequence);
    }
    let dn = big_dimension_d(alphabet_size, n)?;
    let dm = big_dimension_d(alphabet_size, m)?;
    Ok(((&dm % &dn).is_zero(), m.is_multiple_of(n)))
}

/// The base-`N^n` digits of `c = d(N,m)/d(N,n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionWitness {
    pub quotient: String,
    pub base: String,
    /// Least significant digit first.
    pub digits: Vec<String>,
    /// Every digit is 1 and there are `m/n` of them.
    pub verified: bool,
}

pub fn expansion_witness(alphabet_size: u64, n: u64, m: u64) -> Result<ExpansionWitness> {
    check_alphabet(alphabet_size)?;
    if n == 0 || m == 0 {
        return Err(Error::EmptySequence);
    }
    if !m.is_multiple_of(n) {
        return Err(Error::NotDivisible {
            divisor: n as usize,
            multiple: m as usize,
        });
    }
    let dn = big_dimension_d(alphabet_size, n)?;
    let dm = big_dimension_d(alphabet_size, m)?;
    let (quotient, remainder) = dm.div_rem(&dn);
    debug_assert!(remainder.is_zero());
    let base = num_traits::pow(BigUint::from(alphabet_size), n as usize);
    let mut digits = Vec::new();
    let mut rest = quotient.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        digits.push(r);
        rest = q;
    }
    let verified = digits.len() as u64 == m / n && digits.iter().all(One::is_one);
    Ok(ExpansionWitness {
        quotient: quotient.to_string(),
        base: base.to_string(),
        digits: digits.iter().map(ToString::to_string).collect(),
        verified,
    })
}

/// The order `N^k − 1` of `ℤ/(N^k − 1)ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Order {
    pub alphabet_size: u64,
    pub k: u64,
    pub order: BigUint,
}

pub fn k0_order(alphabet_size: u64, k: u64) -> Result<K0Order> {
    check_alphabet(alphabet_size)?;
    Ok(K0Order {
        alphabet_size,
        k,
        order: order(alphabet_size, k),
    })
}

/// Mutual divisibility of the order sets `{N^{n_k} − 1}` and `{N^{m_j} − 1}`.
pub fn k0_isomorphic(alphabet_size: u64, a: &DivisorSequence, b: &DivisorSequence) -> Result<bool> {
    check_alphabet(alphabet_size)?;
    let orders = |s: &DivisorSequence| -> Vec<BigUint> {
        s.terms().iter().map(|&t| order(alphabet_size, t)).collect()
    };
    Ok(mutually_divisible(&orders(a), &orders(b), |x, y| {
        (y % x).is_zero()
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(rename = "N")]
    pub alphabet_size: u64,
    pub a: String,
    pub b: String,
    pub supernatural_a: String,
    pub supernatural_b: String,
    pub supernatural_equal: bool,
    pub k0_isomorphic: bool,
    pub agree: bool,
    pub semantics: String,
}

impl ClassificationReport {
    pub fn verdict(&self) -> String {
        let equality = if self.supernatural_equal {
            "equal (prefix semantics)"
        } else {
            "not equal"
        };
        let k0 = if self.agree {
            "K0 agrees"
        } else {
            "K0 disagrees"
        };
        format!("{equality}; {k0}")
    }
}

pub fn classify(
    alphabet_size: u64,
    a: &DivisorSequence,
    b: &DivisorSequence,
) -> Result<ClassificationReport> {
    let supernatural_equal = supernatural_eq(a, b);
    let k0 = k0_isomorphic(alphabet_size, a, b)?;
    Ok(ClassificationReport {
        alphabet_size,
        a: a.to_string(),
        b: b.to_string(),
        supernatural_a: supernatural_from_sequence(a).to_string(),
        supernatural_b: supernatural_from_sequence(b).to_string(),
        supernatural_equal,
        k0_isomorphic: k0,
        agree: supernatural_equal == k0,
        semantics: "prefix".to_string(),
    })
}
