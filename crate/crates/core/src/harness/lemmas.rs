//! Randomized exact checks of the embedding lemma and the parabola lemma.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digits::{delta3, BinaryString, TernaryString};
use crate::embedding::{
    check_close_expanding, check_facts, decode, embed_digits, estimate_equivalence, ClosePair,
    FactReport, IManyPoint,
};
use crate::rational::{abs_diff, format_rational, int, inv_pow3, ratio};
use crate::space::circle_above_parabola;
use crate::{Error, Rational, Result};

/// Failures beyond this many are counted but not stored.
const MAX_RECORDED: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaSuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub blocks: usize,
    /// Extra `(δ_A, δ_B²)` pairs fed to the close-expanding check, for
    /// negative controls.
    pub injected: Vec<(Rational, Rational)>,
}

impl LemmaSuiteConfig {
    pub fn new(seed: u64, samples: usize, blocks: usize) -> Self {
        Self {
            seed,
            samples,
            blocks,
            injected: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactFailure {
    pub t_p: TernaryString,
    pub y_p: BinaryString,
    pub t_q: TernaryString,
    pub y_q: BinaryString,
    pub report: FactReport,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckCount {
    pub checked: usize,
    pub failed: usize,
    pub counterexamples: Vec<String>,
}

impl CheckCount {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexamples.len() < MAX_RECORDED {
                self.counterexamples.push(describe());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceBounds {
    pub coordinate: usize,
    #[serde(with = "crate::rational::text")]
    pub c1: Rational,
    #[serde(with = "crate::rational::text")]
    pub c2: Rational,
    /// `c1 ≤ 1` and `c2 ≥ 3^{-4}`.
    pub within_bounds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CloseExpandingViolation {
    #[serde(with = "crate::rational::text")]
    pub dist_a: Rational,
    #[serde(with = "crate::rational::text")]
    pub dist_b_sq: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub samples: usize,
    pub blocks: usize,
    pub fact_pairs: usize,
    pub fact_failures: usize,
    pub fact_counterexamples: Vec<FactFailure>,
    pub close_expanding_pairs: usize,
    pub close_expanding_violation: Option<CloseExpandingViolation>,
    pub round_trips: CheckCount,
    pub reserved_digits: CheckCount,
    pub ultrametric: CheckCount,
    pub parabola: CheckCount,
    pub equivalence: Vec<EquivalenceBounds>,
    pub passed: bool,
}

fn random_ternary(rng: &mut ChaCha8Rng, depth: usize) -> TernaryString {
    TernaryString::new((0..depth).map(|_| rng.gen_range(0..3u8)).collect()).expect("trits")
}

fn random_binary(rng: &mut ChaCha8Rng, depth: usize) -> BinaryString {
    BinaryString::new((0..depth).map(|_| rng.gen_range(0..2u8)).collect()).expect("bits")
}

/// Copies a random-length prefix of `base` and fills the rest at random, so
/// that pairs probe every first-difference depth.
fn near(rng: &mut ChaCha8Rng, base: &TernaryString) -> TernaryString {
    let shared = rng.gen_range(0..=base.depth());
    let mut digits = base.digits()[..shared].to_vec();
    digits.extend((shared..base.depth()).map(|_| rng.gen_range(0..3u8)));
    TernaryString::new(digits).expect("trits")
}

fn random_pair(rng: &mut ChaCha8Rng, blocks: usize) -> (IManyPoint, IManyPoint) {
    let t = random_ternary(rng, 6 * blocks);
    let y = random_binary(rng, blocks);
    loop {
        let t2 = near(rng, &t);
        let y2 = if rng.gen_bool(0.5) {
            y.clone()
        } else {
            random_binary(rng, blocks)
        };
        if !(t2 == t && y2 == y) {
            return (IManyPoint::new(t.clone(), y.clone()), IManyPoint::new(t2, y2));
        }
    }
}

/// `x = −r + 2r·j/31`, `j = 0..32`, for each radius.
pub fn parabola_grid() -> Vec<(Rational, Rational)> {
    let radii = [ratio(1, 4), ratio(1, 2), int(1), int(2)];
    radii
        .iter()
        .flat_map(|r| (0..32).map(move |j| (r.clone(), -r + int(2) * r * ratio(j, 31))))
        .collect()
}

pub fn run_lemma_suite(cfg: &LemmaSuiteConfig) -> Result<LemmaReport> {
    if cfg.samples == 0 {
        return Err(Error::Config("the lemma suite needs at least one sample".into()));
    }
    if cfg.blocks == 0 {
        return Err(Error::Config("blocks must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let blocks = cfg.blocks;

    let mut fact_failures = 0;
    let mut fact_counterexamples = Vec::new();
    let mut pairs: Vec<ClosePair<(), ()>> = Vec::with_capacity(cfg.samples + cfg.injected.len());
    let mut coordinate_samples: [Vec<(Rational, Rational)>; 3] = Default::default();
    for _ in 0..cfg.samples {
        let (p, q) = random_pair(&mut rng, blocks);
        let report = check_facts(&p, &q, blocks)?;
        if !report.all_hold() {
            fact_failures += 1;
            if fact_counterexamples.len() < MAX_RECORDED {
                fact_counterexamples.push(FactFailure {
                    t_p: p.t().clone(),
                    y_p: p.y().clone(),
                    t_q: q.t().clone(),
                    y_q: q.y().clone(),
                    report: report.clone(),
                });
            }
        }
        pairs.push(ClosePair {
            source: ((), ()),
            target: ((), ()),
            dist_a: report.distance.clone(),
            dist_b_sq: report.sq_dist.clone(),
        });
        let (ep, eq) = (embed_digits(&p, blocks)?, embed_digits(&q, blocks)?);
        for i in 0..3 {
            coordinate_samples[i].push((delta3(&ep[i], &eq[i]), abs_diff(&ep[i].value(), &eq[i].value())));
        }
    }
    for (dist_a, dist_b_sq) in &cfg.injected {
        pairs.push(ClosePair {
            source: ((), ()),
            target: ((), ()),
            dist_a: dist_a.clone(),
            dist_b_sq: dist_b_sq.clone(),
        });
    }
    let close_expanding_violation =
        check_close_expanding(&pairs, &ratio(1, 243)).map(|p| CloseExpandingViolation {
            dist_a: p.dist_a.clone(),
            dist_b_sq: p.dist_b_sq.clone(),
        });

    let mut round_trips = CheckCount::default();
    let mut reserved_digits = CheckCount::default();
    for _ in 0..cfg.samples {
        let p = IManyPoint::new(random_ternary(&mut rng, 6 * blocks), random_binary(&mut rng, blocks));
        let images = embed_digits(&p, blocks)?;
        for (i, s) in images.iter().enumerate() {
            let clean = (0..blocks).all(|k| s.digit(3 * k + 2) != 2);
            reserved_digits.record(clean, || format!("coordinate {i} of e({}, {}) = {s}", p.t(), p.y()));
        }
        let ok = matches!(decode(&images, blocks), Ok((t, y)) if &t == p.t() && &y == p.y());
        round_trips.record(ok, || format!("decode(e({}, {})) is not the identity", p.t(), p.y()));
    }

    let mut ultrametric = CheckCount::default();
    for _ in 0..cfg.samples {
        let s = random_ternary(&mut rng, 6 * blocks);
        let (t, u) = (near(&mut rng, &s), near(&mut rng, &s));
        let (st, tu, su) = (delta3(&s, &t), delta3(&t, &u), delta3(&s, &u));
        ultrametric.record(su <= st.clone().max(tu), || format!("({s}, {t}, {u})"));
    }

    let mut parabola = CheckCount::default();
    for (r, x) in parabola_grid() {
        let ok = circle_above_parabola(&r, &x)?;
        parabola.record(ok, || {
            format!("r = {}, x = {}", format_rational(&r), format_rational(&x))
        });
    }

    let equivalence = coordinate_samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().any(|(d1, _)| !d1.is_zero()))
        .map(|(coordinate, samples)| {
            let (c1, c2) = estimate_equivalence(samples)?;
            Ok(EquivalenceBounds {
                coordinate,
                within_bounds: c1 <= Rational::one() && c2 >= inv_pow3(4),
                c1,
                c2,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let passed = fact_failures == 0
        && close_expanding_violation.is_none()
        && round_trips.failed == 0
        && reserved_digits.failed == 0
        && ultrametric.failed == 0
        && parabola.failed == 0
        && equivalence.iter().all(|e| e.within_bounds);
    Ok(LemmaReport {
        seed: cfg.seed,
        samples: cfg.samples,
        blocks,
        fact_pairs: cfg.samples,
        fact_failures,
        fact_counterexamples,
        close_expanding_pairs: pairs.len(),
        close_expanding_violation,
        round_trips,
        reserved_digits,
        ultrametric,
        parabola,
        equivalence,
        passed,
    })
}
