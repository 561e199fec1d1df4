//! Exact construction of a compact set `K ⊂ R⁴` whose Vietoris-Rips complex
//! keeps a large first homology group over a whole interval of scales.
//!
//! The pieces, bottom up:
//!
//! * [`digits`]: base-3 / base-2 digit strings and the ternary ultrametric.
//! * [`embedding`]: the digit-interleaving map `e: [0,1] × D → [0,1]³`, its
//!   decoder, and checkers for the close-expanding inequalities.
//! * [`space`]: finite samples of `K` (sheets of the embedding plus the two
//!   boundary cubes), the scale window and the parabola predicate.
//! * [`rips`]: the Rips 2-skeleton with an inclusive, exact threshold.
//! * [`homology`]: sparse F₂ boundary matrices, `β₀`/`β₁`, a brute-force
//!   oracle and the rigid-edge rank bound.
//! * [`harness`]: rigid-edge census, cycle completion, the sheet-count
//!   experiment and the randomized lemma suite.
//!
//! Every coordinate and distance is an exact [`Rational`]; no square root or
//! floating point value is ever formed.

pub mod digits;
pub mod embedding;
pub mod error;
pub mod harness;
pub mod homology;
pub mod rational;
pub mod rips;
pub mod space;

pub use error::{Error, Result};

/// Arbitrary precision rational used for every coordinate and distance.
pub type Rational = num_rational::BigRational;

pub use digits::{delta3, ternary_value, to_ternary, BinaryString, TernaryExpansion, TernaryString};
pub use embedding::{decode, embed, embed_rational, interleave, IManyPoint, Point3};
pub use homology::{betti01, betti_bruteforce, rank_f2, SparseF2Matrix};
pub use rips::{build_complex, build_edges, sq_dist, sweep, RipsComplex2};
pub use space::{build_cloud, scale_window, sheet_point, Cloud, CloudConfig, Label, LabeledPoint4};
