//! Finite base-3 and base-2 digit strings and the ternary ultrametric `δ₃`.
//!
//! A finite string stands for the infinite sequence obtained by appending
//! zeros, so `(1, 2)` and `(1, 2, 0)` denote the same sequence. Comparisons
//! that care about the sequence (`delta3`, [`DigitString::same_sequence`])
//! zero-pad; the derived `Eq` compares the stored digits verbatim.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{in_unit_interval, inv_pow3};
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DigitString<const BASE: u8> {
    digits: Vec<u8>,
}

pub type TernaryString = DigitString<3>;
pub type BinaryString = DigitString<2>;

impl<const BASE: u8> DigitString<BASE> {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = digits.iter().position(|&d| d >= BASE) {
            return Err(Error::Domain(format!(
                "digit {} at position {pos} is not a base-{BASE} digit",
                digits[pos]
            )));
        }
        Ok(Self { digits })
    }

    pub fn zeros(depth: usize) -> Self {
        Self { digits: vec![0; depth] }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit `k` of the zero-padded sequence.
    pub fn digit(&self, k: usize) -> u8 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    /// First index where the zero-padded sequences disagree.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let depth = self.depth().max(other.depth());
        (0..depth).find(|&k| self.digit(k) != other.digit(k))
    }

    pub fn same_sequence(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Zero-padded or truncated copy with exactly `depth` digits.
    pub fn resized(&self, depth: usize) -> Self {
        Self {
            digits: (0..depth).map(|k| self.digit(k)).collect(),
        }
    }

    /// Length once trailing zeros are dropped.
    pub fn significant_depth(&self) -> usize {
        self.digits.iter().rposition(|&d| d != 0).map_or(0, |p| p + 1)
    }

    /// `Σ d_k · BASE^{-(k+1)}`, exact.
    pub fn value(&self) -> Rational {
        let base = BigInt::from(BASE);
        let mut numer = BigInt::zero();
        for &d in &self.digits {
            numer = numer * &base + BigInt::from(d);
        }
        Rational::new(numer, num_traits::pow(base, self.digits.len()))
    }
}

impl<const BASE: u8> fmt::Display for DigitString<BASE> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl<const BASE: u8> fmt::Debug for DigitString<BASE> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{BASE}\"{self}\"")
    }
}

impl<const BASE: u8> FromStr for DigitString<BASE> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("not a digit string: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits)
    }
}

impl<const BASE: u8> Serialize for DigitString<BASE> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, const BASE: u8> Deserialize<'de> for DigitString<BASE> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Greedy base-3 expansion of `q` truncated to `depth` digits.
///
/// Digit `k` is `⌊q·3^{k+1}⌋ mod 3`, which picks the terminating expansion
/// whenever `q` has two. `q = 1` has no expansion starting with a digit
/// below 3 other than `0.222…`, so it yields the all-2s string.
pub fn to_ternary(q: &Rational, depth: usize) -> Result<TernaryString> {
    if depth == 0 {
        return Err(Error::Domain("ternary depth must be at least 1".into()));
    }
    if !in_unit_interval(q) {
        return Err(Error::Domain(format!("{q} is outside [0, 1]")));
    }
    if q.is_one() {
        return Ok(TernaryString { digits: vec![2; depth] });
    }
    let (mut rem, den) = (q.numer().clone(), q.denom().clone());
    let three = BigInt::from(3u8);
    let mut digits = Vec::with_capacity(depth);
    for _ in 0..depth {
        rem *= &three;
        let (d, r) = rem.div_rem(&den);
        digits.push(digit_u8(&d));
        rem = r;
    }
    Ok(TernaryString { digits })
}

fn digit_u8(d: &BigInt) -> u8 {
    u8::try_from(d).expect("long-division digit is below the base")
}

pub fn ternary_value(s: &TernaryString) -> Rational {
    s.value()
}

/// `3^{-k}` for the first disagreement index `k`, or `0` for equal sequences.
pub fn delta3(s: &TernaryString, t: &TernaryString) -> Rational {
    match s.first_difference(t) {
        Some(k) => inv_pow3(k),
        None => Rational::zero(),
    }
}

/// Whether `q ∈ [0,1]` equals the value of its own depth-`depth` expansion.
pub fn terminates_within(q: &Rational, depth: usize) -> bool {
    match to_ternary(q, depth) {
        Ok(t) => t.value() == *q,
        Err(_) => false,
    }
}

/// Exact, eventually periodic base-3 expansion of a rational in `[0,1]`:
/// the digit sequence is `prefix` followed by `cycle` repeated forever.
///
/// Terminating values get the cycle `(0)`; `1` is `0.(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryExpansion {
    pub prefix: Vec<u8>,
    pub cycle: Vec<u8>,
}

impl TernaryExpansion {
    pub fn of(q: &Rational) -> Result<Self> {
        if !in_unit_interval(q) {
            return Err(Error::Domain(format!("{q} is outside [0, 1]")));
        }
        if q.is_one() {
            return Ok(Self { prefix: vec![], cycle: vec![2] });
        }
        let den = q.denom().clone();
        let three = BigInt::from(3u8);
        let mut seen = std::collections::HashMap::new();
        let mut digits = Vec::new();
        let mut rem = q.numer().clone();
        loop {
            if let Some(&start) = seen.get(&rem) {
                let cycle = digits.split_off(start);
                return Ok(Self { prefix: digits, cycle });
            }
            seen.insert(rem.clone(), digits.len());
            rem *= &three;
            let (d, r) = rem.div_rem(&den);
            digits.push(digit_u8(&d));
            rem = r;
        }
    }

    pub fn digit(&self, k: usize) -> u8 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn is_terminating(&self) -> bool {
        self.cycle.iter().all(|&d| d == 0)
    }

    /// First `depth` digits as a finite string.
    pub fn truncate(&self, depth: usize) -> TernaryString {
        TernaryString {
            digits: (0..depth).map(|k| self.digit(k)).collect(),
        }
    }

    /// `value(prefix) + 3^{-|prefix|} · value(cycle) · 3^L / (3^L − 1)`.
    pub fn value(&self) -> Rational {
        let head = TernaryString { digits: self.prefix.clone() }.value();
        let period = self.cycle.len();
        let cycle_value = TernaryString { digits: self.cycle.clone() }.value();
        let scale = num_traits::pow(BigInt::from(3u8), period);
        let repeat = Rational::new(scale.clone(), scale - BigInt::one());
        head + inv_pow3(self.prefix.len()) * cycle_value * repeat
    }
}

pub fn bits(s: &str) -> Result<BinaryString> {
    s.parse()
}

pub fn trits(s: &str) -> Result<TernaryString> {
    s.parse()
}
