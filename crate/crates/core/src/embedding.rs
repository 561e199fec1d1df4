//! The digit-interleaving embedding `e: I_many → [0,1]³`.
//!
//! A point of `I_many = [0,1] × D` is a ternary string `t` (the expansion of
//! `x`) together with a binary string `b` (the sheet label). Coordinate `i`
//! of `e(t, b)` is the ternary number whose `k`-th block of three digits is
//!
//! ```text
//! (t[6k + 2i], t[6k + 2i + 1], b[k])
//! ```
//!
//! so every `t` digit lands in exactly one coordinate and every `b` digit is
//! copied into all three. The third digit of each block is a 0 or a 1, never
//! a 2, which is what keeps the image a Cantor-like set on which `|u − v|`
//! and `δ₃` are comparable.
//!
//! The pseudometric on `I_many` is `|x − x'|` and ignores `b` entirely: two
//! sheets at the same `x` are at pseudodistance 0 while their images differ.
//!
//! All inequalities below are evaluated in squared form so that no square
//! root is ever taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::digits::{delta3, BinaryString, TernaryExpansion, TernaryString};
use crate::rational::{abs_diff, in_unit_interval, inv_pow3};
use crate::{Error, Rational, Result};

/// Number of three-digit blocks per coordinate used when nothing else is said.
pub const DEFAULT_BLOCKS: usize = 8;

/// `(t, b)` together with `x = value(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IManyPoint {
    x: Rational,
    t: TernaryString,
    y: BinaryString,
}

impl IManyPoint {
    pub fn new(t: TernaryString, y: BinaryString) -> Self {
        Self { x: t.value(), t, y }
    }

    /// Builds the point from `x`, which must terminate within `depth` digits
    /// (except `x = 1`, which uses its all-2s expansion truncated to `depth`).
    pub fn from_rational(x: &Rational, y: BinaryString, depth: usize) -> Result<Self> {
        let t = crate::digits::to_ternary(x, depth)?;
        if t.value() != *x && *x != Rational::from_integer(1.into()) {
            return Err(Error::Domain(format!(
                "{x} has no terminating expansion within {depth} ternary digits"
            )));
        }
        Ok(Self::new(t, y))
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn t(&self) -> &TernaryString {
        &self.t
    }

    pub fn y(&self) -> &BinaryString {
        &self.y
    }

    /// `|x − x'|`.
    pub fn pseudo_distance(&self, other: &Self) -> Rational {
        abs_diff(&self.x, &other.x)
    }

    fn same_digits(&self, other: &Self) -> bool {
        self.t.same_sequence(&other.t) && self.y.same_sequence(&other.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point3(pub [Rational; 3]);

impl Point3 {
    pub fn coords(&self) -> &[Rational; 3] {
        &self.0
    }

    pub fn sq_dist(&self, other: &Self) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    /// `‖self − other‖_∞`.
    pub fn max_dist(&self, other: &Self) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| abs_diff(a, b))
            .max()
            .expect("three coordinates")
    }
}

pub fn interleave(
    i: usize,
    t: &TernaryString,
    b: &BinaryString,
    blocks: usize,
) -> Result<TernaryString> {
    if i > 2 {
        return Err(Error::Index(i));
    }
    if blocks == 0 {
        return Err(Error::Domain("at least one block is required".into()));
    }
    let mut digits = Vec::with_capacity(3 * blocks);
    for k in 0..blocks {
        digits.push(t.digit(6 * k + 2 * i));
        digits.push(t.digit(6 * k + 2 * i + 1));
        digits.push(b.digit(k));
    }
    TernaryString::new(digits)
}

/// The three coordinate digit strings of `e(p)`.
pub fn embed_digits(p: &IManyPoint, blocks: usize) -> Result<[TernaryString; 3]> {
    Ok([
        interleave(0, &p.t, &p.y, blocks)?,
        interleave(1, &p.t, &p.y, blocks)?,
        interleave(2, &p.t, &p.y, blocks)?,
    ])
}

pub fn embed(p: &IManyPoint, blocks: usize) -> Result<Point3> {
    let [a, b, c] = embed_digits(p, blocks)?;
    Ok(Point3([a.value(), b.value(), c.value()]))
}

/// Exact `e(x, y)` for any rational `x ∈ [0,1]`, using the full eventually
/// periodic expansion of `x` instead of a truncation.
///
/// With `x`'s expansion periodic from digit `P` with period `L`, and `y`
/// finite of length `m`, the blocks of every coordinate repeat from block
/// `K = max(⌈P/6⌉, m)` onwards with period `L / gcd(L, 6)`.
pub fn embed_rational(x: &Rational, y: &BinaryString) -> Result<Point3> {
    let expansion = TernaryExpansion::of(x)?;
    Ok(Point3(
        embedding_expansions(&expansion, y).map(|coordinate| coordinate.value()),
    ))
}

fn embedding_expansions(t: &TernaryExpansion, y: &BinaryString) -> [TernaryExpansion; 3] {
    let lead_blocks = t.prefix.len().div_ceil(6).max(y.significant_depth());
    let period = t.cycle.len();
    let block_period = period / period.gcd(&6);
    let block = |i: usize, k: usize| [t.digit(6 * k + 2 * i), t.digit(6 * k + 2 * i + 1), y.digit(k)];
    std::array::from_fn(|i| TernaryExpansion {
        prefix: (0..lead_blocks).flat_map(|k| block(i, k)).collect(),
        cycle: (lead_blocks..lead_blocks + block_period)
            .flat_map(|k| block(i, k))
            .collect(),
    })
}

/// Inverts [`interleave`]: recovers the first `6·blocks` digits of `t` and
/// the first `blocks` digits of `b`.
pub fn decode(q: &[TernaryString; 3], blocks: usize) -> Result<(TernaryString, BinaryString)> {
    let width = 3 * blocks;
    for (i, s) in q.iter().enumerate() {
        if s.depth() != width {
            return Err(Error::MalformedImage(format!(
                "coordinate {i} has {} digits, expected {width}",
                s.depth()
            )));
        }
        if let Some(k) = (0..blocks).find(|k| s.digit(3 * k + 2) == 2) {
            return Err(Error::MalformedImage(format!(
                "coordinate {i} holds a 2 at reserved position {}",
                3 * k + 2
            )));
        }
    }
    let mut t = vec![0u8; 6 * blocks];
    let mut b = Vec::with_capacity(blocks);
    for k in 0..blocks {
        let bit = q[0].digit(3 * k + 2);
        if q[1].digit(3 * k + 2) != bit || q[2].digit(3 * k + 2) != bit {
            return Err(Error::MalformedImage(format!(
                "coordinates disagree on the sheet digit at block {k}"
            )));
        }
        b.push(bit);
        for (i, s) in q.iter().enumerate() {
            t[6 * k + 2 * i] = s.digit(3 * k);
            t[6 * k + 2 * i + 1] = s.digit(3 * k + 1);
        }
    }
    Ok((TernaryString::new(t)?, BinaryString::new(b)?))
}

/// Exact evaluation of the four inequalities that make `e` close-expanding
/// with constant `1/243`, plus the combined bound, for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct FactReport {
    /// `|x_p − x_q|`.
    #[serde(with = "crate::rational::text")]
    pub distance: Rational,
    /// `δ₃(t_p, t_q)`.
    #[serde(with = "crate::rational::text")]
    pub delta_t: Rational,
    /// `max_i δ₃(e_i(p), e_i(q))`.
    #[serde(with = "crate::rational::text")]
    pub max_coord_delta: Rational,
    #[serde(with = "crate::rational::text")]
    pub max_dist: Rational,
    #[serde(with = "crate::rational::text")]
    pub sq_dist: Rational,
    /// First differing index of the two `t` strings.
    pub t_first_difference: Option<usize>,
    /// First differing index of each coordinate string.
    pub coord_first_difference: [Option<usize>; 3],
    /// Some coordinate differs no later than position `⌊n/2⌋ + 1`, where `n`
    /// is `t_first_difference`.
    pub position_bound: bool,
    pub fact1: bool,
    pub fact2: bool,
    pub fact3: bool,
    pub fact4: bool,
    pub combined: bool,
}

impl FactReport {
    pub fn all_hold(&self) -> bool {
        self.fact1 && self.fact2 && self.fact3 && self.fact4 && self.combined && self.position_bound
    }
}

/// `(1/243)² = 3^{-10}`.
pub fn close_expanding_constant_sq() -> Rational {
    inv_pow3(10)
}

pub fn check_facts(p: &IManyPoint, q: &IManyPoint, blocks: usize) -> Result<FactReport> {
    if p.same_digits(q) {
        return Err(Error::DegeneratePair);
    }
    for point in [p, q] {
        if point.t.significant_depth() > 6 * blocks || point.y.significant_depth() > blocks {
            return Err(Error::Domain(format!(
                "digit data ({}, {}) does not fit in {blocks} blocks",
                point.t, point.y
            )));
        }
    }
    let ep = embed_digits(p, blocks)?;
    let eq = embed_digits(q, blocks)?;
    let coord_first_difference: [Option<usize>; 3] =
        std::array::from_fn(|i| ep[i].first_difference(&eq[i]));
    let max_coord_delta = (0..3)
        .map(|i| delta3(&ep[i], &eq[i]))
        .max()
        .expect("three coordinates");
    let (vp, vq) = (
        Point3(ep.each_ref().map(TernaryString::value)),
        Point3(eq.each_ref().map(TernaryString::value)),
    );
    let max_dist = vp.max_dist(&vq);
    let sq_dist = vp.sq_dist(&vq);
    let distance = p.pseudo_distance(q);
    let delta_t = delta3(&p.t, &q.t);
    let t_first_difference = p.t.first_difference(&q.t);

    let position_bound = match t_first_difference {
        None => true,
        Some(n) => coord_first_difference
            .iter()
            .flatten()
            .min()
            .is_some_and(|&m| m <= n / 2 + 1),
    };
    let nine = Rational::from_integer(BigInt::from(9));
    Ok(FactReport {
        fact1: distance <= delta_t,
        fact2: delta_t <= &nine * &max_coord_delta * &max_coord_delta,
        fact3: max_dist >= &max_coord_delta * inv_pow3(4),
        fact4: &max_dist * &max_dist <= sq_dist,
        combined: sq_dist >= &distance * close_expanding_constant_sq(),
        distance,
        delta_t,
        max_coord_delta,
        max_dist,
        sq_dist,
        t_first_difference,
        coord_first_difference,
        position_bound,
    })
}

/// One sampled pair for [`check_close_expanding`]: source points, their
/// source distance `δ_A` and the squared target distance `δ_B²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosePair<A, B> {
    pub source: (A, A),
    pub target: (B, B),
    pub dist_a: Rational,
    pub dist_b_sq: Rational,
}

/// Returns the first pair violating `δ_B ≥ C·√δ_A`, checked as
/// `δ_B² ≥ C²·δ_A`; `None` means the sample is `C`-close-expanding.
pub fn check_close_expanding<'a, A, B>(
    pairs: &'a [ClosePair<A, B>],
    c: &Rational,
) -> Option<&'a ClosePair<A, B>> {
    let c_sq = c * c;
    pairs.iter().find(|pair| pair.dist_b_sq < &c_sq * &pair.dist_a)
}

/// Tightest constants `(c1, c2)` with `c1·d1 ≥ d2 ≥ c2·d1` on the sample.
///
/// Pairs with `d1 = d2 = 0` say nothing and are skipped; `d1 = 0 < d2`
/// witnesses that the two pseudometrics are not equivalent.
pub fn estimate_equivalence(samples: &[(Rational, Rational)]) -> Result<(Rational, Rational)> {
    let mut bounds: Option<(Rational, Rational)> = None;
    for (d1, d2) in samples {
        if d1.is_negative() || d2.is_negative() {
            return Err(Error::Domain("distances must be non-negative".into()));
        }
        if d1.is_zero() {
            if d2.is_zero() {
                continue;
            }
            return Err(Error::Division(format!(
                "d1 = 0 while d2 = {d2}: the pseudometrics are not equivalent"
            )));
        }
        let ratio = d2 / d1;
        bounds = Some(match bounds {
            None => (ratio.clone(), ratio),
            Some((hi, lo)) => (hi.max(ratio.clone()), lo.min(ratio)),
        });
    }
    bounds.ok_or_else(|| Error::Domain("no sample with positive d1".into()))
}

/// `true` when `x` can be placed on a sheet through the finite digit path,
/// i.e. its expansion ends within `6·blocks` digits and `y` fits.
pub fn fits_blocks(x: &Rational, y: &BinaryString, blocks: usize) -> bool {
    in_unit_interval(x)
        && blocks > 0
        && y.significant_depth() <= blocks
        && crate::digits::terminates_within(x, 6 * blocks)
}
