//! Finite exact samples of `K = T̄ ∪ {0}×[0,1]³ ∪ {1}×[0,1]³ ⊂ R⁴`, where
//! `T = {(x / (2·243²), e(x, y))}` stacks one copy of the embedded interval
//! per sheet label `y`.
//!
//! Sheet points are built from exact rationals. A value of `x` whose base-3
//! expansion terminates within the configured depth goes through the finite
//! digit path; any other rational `x` (for instance `1/2`, or `1` with its
//! all-2s expansion) uses its exact periodic expansion, so every sample
//! point is a genuine point of `T` rather than a truncation.

pub mod io;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::digits::BinaryString;
use crate::embedding::{embed, embed_rational, fits_blocks, IManyPoint, Point3, DEFAULT_BLOCKS};
use crate::rational::{format_rational, in_unit_interval, int, ratio};
use crate::{Error, Rational, Result};

/// `2·243² = 118098`: sheet points sit at first coordinate `x / 118098`.
pub const SHEET_SCALE: i64 = 2 * 243 * 243;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Sheet { x: Rational, y: BinaryString },
    Cube0,
    Cube1,
}

impl Label {
    pub fn is_sheet(&self) -> bool {
        matches!(self, Label::Sheet { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPoint4 {
    pub coords: [Rational; 4],
    pub label: Label,
}

impl LabeledPoint4 {
    /// The last three coordinates.
    pub fn projection(&self) -> Point3 {
        Point3([
            self.coords[1].clone(),
            self.coords[2].clone(),
            self.coords[3].clone(),
        ])
    }

    fn from_parts(first: Rational, rest: Point3, label: Label) -> Self {
        let [a, b, c] = rest.0;
        Self {
            coords: [first, a, b, c],
            label,
        }
    }
}

/// `[1 − 1/118098, 1]`.
pub fn scale_window() -> (Rational, Rational) {
    (ratio(SHEET_SCALE - 1, SHEET_SCALE), int(1))
}

pub fn in_scale_window(a: &Rational) -> bool {
    let (lo, hi) = scale_window();
    lo <= *a && *a <= hi
}

/// The parameter `x_a = (1 − a)·118098` whose sheet points lie at first
/// coordinate `1 − a`.
pub fn fiber_value(a: &Rational) -> Rational {
    (int(1) - a) * int(SHEET_SCALE)
}

pub fn sheet_point(x: &Rational, y: &BinaryString, blocks: usize) -> Result<LabeledPoint4> {
    if !in_unit_interval(x) {
        return Err(Error::Domain(format!("sheet parameter {x} is outside [0, 1]")));
    }
    if blocks == 0 {
        return Err(Error::Domain("at least one block is required".into()));
    }
    let image = if fits_blocks(x, y, blocks) {
        embed(&IManyPoint::from_rational(x, y.clone(), 6 * blocks)?, blocks)?
    } else {
        embed_rational(x, y)?
    };
    Ok(LabeledPoint4::from_parts(
        x / int(SHEET_SCALE),
        image,
        Label::Sheet {
            x: x.clone(),
            y: y.clone(),
        },
    ))
}

/// `n` distinct sheet labels: the binary digits (most significant first) of
/// `0..n`, all of the same width.
pub fn sheet_labels(n: usize) -> Vec<BinaryString> {
    let width = (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize;
    (0..n)
        .map(|i| {
            let digits = (0..width).map(|k| ((i >> (width - 1 - k)) & 1) as u8).collect();
            BinaryString::new(digits).expect("bits")
        })
        .collect()
}

fn default_blocks() -> usize {
    DEFAULT_BLOCKS
}

fn default_grid() -> usize {
    2
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudConfig {
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    pub sheets: Vec<BinaryString>,
    #[serde(default, with = "crate::rational::text_vec")]
    pub x_values: Vec<Rational>,
    #[serde(with = "crate::rational::text")]
    pub scale: Rational,
    #[serde(default = "default_grid")]
    pub cube_grid: usize,
    #[serde(default)]
    pub include_cube0: bool,
    #[serde(default = "default_true")]
    pub include_partners: bool,
}

impl CloudConfig {
    /// `n` fibre sheets at scale `a` with their partners and nothing else.
    pub fn minimal(n: usize, scale: Rational) -> Self {
        Self {
            blocks: DEFAULT_BLOCKS,
            sheets: sheet_labels(n),
            x_values: Vec::new(),
            scale,
            cube_grid: 0,
            include_cube0: false,
            include_partners: true,
        }
    }

    /// Minimal cloud plus `g = 2` grids on both cubes.
    pub fn full(n: usize, scale: Rational) -> Self {
        Self {
            cube_grid: 2,
            include_cube0: true,
            ..Self::minimal(n, scale)
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.cube_grid == 0 && !self.include_cube0 && self.x_values.is_empty() && self.include_partners
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 {
            return Err(Error::Config("blocks must be at least 1".into()));
        }
        if self.sheets.is_empty() {
            return Err(Error::Config("at least one sheet is required".into()));
        }
        for (i, a) in self.sheets.iter().enumerate() {
            if let Some(b) = self.sheets[..i].iter().find(|b| b.same_sequence(a)) {
                return Err(Error::Config(format!("sheets {b} and {a} coincide")));
            }
        }
        for (i, x) in self.x_values.iter().enumerate() {
            if !in_unit_interval(x) {
                return Err(Error::Config(format!("x value {x} is outside [0, 1]")));
            }
            if self.x_values[..i].contains(x) {
                return Err(Error::Config(format!("x value {x} is repeated")));
            }
        }
        if !in_scale_window(&self.scale) {
            let (lo, hi) = scale_window();
            return Err(Error::Config(format!(
                "scale {} is outside [{}, {}]",
                format_rational(&self.scale),
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cloud {
    points: Vec<LabeledPoint4>,
    config: Option<CloudConfig>,
}

impl Cloud {
    /// A cloud from explicit points. Coordinates must be pairwise distinct
    /// and cube points must sit on their slab; sheet labels are not checked
    /// against the embedding, so hand-built clouds may leave `K`.
    pub fn from_points(points: Vec<LabeledPoint4>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            let slab = match p.label {
                Label::Cube0 => Some(Rational::zero()),
                Label::Cube1 => Some(Rational::one()),
                Label::Sheet { .. } => None,
            };
            if slab.is_some_and(|s| p.coords[0] != s) {
                return Err(Error::Config(format!("point {i} is off its cube slab")));
            }
            if !seen.insert(&p.coords) {
                return Err(Error::Config(format!("point {i} repeats earlier coordinates")));
            }
        }
        Ok(Self { points, config: None })
    }

    pub fn points(&self) -> &[LabeledPoint4] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &LabeledPoint4 {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn config(&self) -> Option<&CloudConfig> {
        self.config.as_ref()
    }
}

/// Appends points, dropping any whose coordinates were already emitted.
struct CloudBuilder {
    points: Vec<LabeledPoint4>,
    seen: HashSet<[Rational; 4]>,
}

impl CloudBuilder {
    fn push(&mut self, p: LabeledPoint4) {
        if self.seen.insert(p.coords.clone()) {
            self.points.push(p);
        }
    }
}

fn grid_points(g: usize, slab: Rational, label: Label) -> impl Iterator<Item = LabeledPoint4> {
    let step = move |k: usize| Rational::new(BigInt::from(k), BigInt::from(g));
    (0..=g).flat_map(move |i| {
        let (slab, label) = (slab.clone(), label.clone());
        (0..=g).flat_map(move |j| {
            let (slab, label) = (slab.clone(), label.clone());
            (0..=g).map(move |k| LabeledPoint4 {
                coords: [slab.clone(), step(i), step(j), step(k)],
                label: label.clone(),
            })
        })
    })
}

/// Emits, in order: sheet points for every `(y, x)` in `sheets × x_values`;
/// then per sheet the fibre point at `x_a` and its partner on `{1}×[0,1]³`;
/// then the `{1}` grid and, if requested, the `{0}` grid. Later points with
/// the coordinates of an earlier one are merged into it.
pub fn build_cloud(cfg: &CloudConfig) -> Result<Cloud> {
    cfg.validate()?;
    let mut builder = CloudBuilder {
        points: Vec::new(),
        seen: HashSet::new(),
    };
    for y in &cfg.sheets {
        for x in &cfg.x_values {
            builder.push(sheet_point(x, y, cfg.blocks)?);
        }
    }
    if cfg.include_partners {
        let x_a = fiber_value(&cfg.scale);
        for y in &cfg.sheets {
            let fibre = sheet_point(&x_a, y, cfg.blocks)?;
            let partner = LabeledPoint4::from_parts(int(1), fibre.projection(), Label::Cube1);
            builder.push(fibre);
            builder.push(partner);
        }
    }
    if cfg.cube_grid > 0 {
        for p in grid_points(cfg.cube_grid, int(1), Label::Cube1) {
            builder.push(p);
        }
        if cfg.include_cube0 {
            for p in grid_points(cfg.cube_grid, int(0), Label::Cube0) {
                builder.push(p);
            }
        }
    }
    Ok(Cloud {
        points: builder.points,
        config: Some(cfg.clone()),
    })
}

/// Checks `r − √(r² − x²) ≥ x²/(2r)` through the equivalent cleared form
/// `(r − x²/(2r))² ≥ r² − x²`, valid because `r − x²/(2r) ≥ r/2 > 0` on the
/// domain. The difference of the two sides is `x⁴/(4r²)`.
pub fn circle_above_parabola(r: &Rational, x: &Rational) -> Result<bool> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    if x.abs() > *r {
        return Err(Error::Domain(format!("|{x}| exceeds the radius {r}")));
    }
    let x_sq = x * x;
    let base = r - &x_sq / (int(2) * r);
    let lhs = &base * &base;
    let rhs = r * r - &x_sq;
    Ok(!base.is_negative() && lhs >= rhs)
}

/// A sheet point other than the rigid partner that lies within `a` of a
/// `{1}`-slab point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborViolation {
    pub index: usize,
    /// First-coordinate gap to the rigid partner `(1 − a, ·)`.
    #[serde(with = "crate::rational::text")]
    pub eps: Rational,
    /// Squared gap of the last three coordinates.
    #[serde(with = "crate::rational::text")]
    pub l_sq: Rational,
    #[serde(with = "crate::rational::text")]
    pub sq_dist: Rational,
}

/// Every sheet point `Y' ≠ Y` of `cloud` within distance `a` of `partner`,
/// where `Y = (1 − a, partner's last three coordinates)`.
pub fn second_neighbor_witness(
    partner: &LabeledPoint4,
    cloud: &Cloud,
    a: &Rational,
) -> Result<Vec<NeighborViolation>> {
    if partner.label != Label::Cube1 {
        return Err(Error::Precondition("witness partner must lie on {1}×[0,1]³".into()));
    }
    let rigid_first = int(1) - a;
    let projection = partner.projection();
    let a_sq = a * a;
    let mut out = Vec::new();
    for (index, p) in cloud.points().iter().enumerate() {
        if !p.label.is_sheet() {
            continue;
        }
        let l_sq = p.projection().sq_dist(&projection);
        if p.coords[0] == rigid_first && l_sq.is_zero() {
            continue;
        }
        let gap = &partner.coords[0] - &p.coords[0];
        let sq_dist = &gap * &gap + &l_sq;
        if sq_dist <= a_sq {
            out.push(NeighborViolation {
                index,
                eps: (&p.coords[0] - &rigid_first).abs(),
                l_sq,
                sq_dist,
            });
        }
    }
    Ok(out)
}
