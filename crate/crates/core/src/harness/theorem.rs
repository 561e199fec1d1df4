//! Rigid edges and the `β₁` growth experiment.
//!
//! A rigid edge joins a sheet point `Y` at first coordinate `1 − a` to its
//! perpendicular partner `X = (1, Y₁, Y₂, Y₃)`; it has length exactly `a`.
//! Any other sheet point within `a` of `X` would contradict the
//! close-expanding bound through the parabola lemma, so a rigid edge is the
//! side of no triangle. Two rigid edges close up into a cycle through short
//! edges near each slab, and since no boundary touches a rigid coordinate
//! these cycles are independent in `H₁`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::digits::BinaryString;
use crate::homology::{betti_report, rigid_rank_lower_bound, Cycle};
use crate::rational::format_rational;
use crate::rips::{build_complex, sq_dist, RipsComplex2};
use crate::space::{
    build_cloud, second_neighbor_witness, sheet_labels, CloudConfig, Label, NeighborViolation,
};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidEdge {
    pub edge: usize,
    pub sheet: BinaryString,
    /// `x` of the sheet endpoint, i.e. the fibre value `x_a`.
    #[serde(with = "crate::rational::text")]
    pub fiber: Rational,
    pub sheet_vertex: usize,
    pub cube_vertex: usize,
}

/// Sheet/`{1}`-slab edges of squared length exactly `a²`, split into the
/// perpendicular ones (rigid) and the rest (diagonal).
fn threshold_edges(c: &RipsComplex2<'_>) -> (Vec<RigidEdge>, Vec<usize>) {
    let cloud = c.cloud();
    let a_sq = c.scale() * c.scale();
    let (mut rigid, mut diagonal) = (Vec::new(), Vec::new());
    for (edge, &(i, j)) in c.edges().iter().enumerate() {
        let (pi, pj) = (cloud.point(i), cloud.point(j));
        let (sheet_vertex, cube_vertex) = match (&pi.label, &pj.label) {
            (Label::Sheet { .. }, Label::Cube1) => (i, j),
            (Label::Cube1, Label::Sheet { .. }) => (j, i),
            _ => continue,
        };
        if sq_dist(pi, pj) != a_sq {
            continue;
        }
        let (y, x) = (cloud.point(sheet_vertex), cloud.point(cube_vertex));
        if y.projection() != x.projection() {
            diagonal.push(edge);
            continue;
        }
        let Label::Sheet { x: fiber, y: sheet } = &y.label else {
            unreachable!("matched as a sheet point above");
        };
        rigid.push(RigidEdge {
            edge,
            sheet: sheet.clone(),
            fiber: fiber.clone(),
            sheet_vertex,
            cube_vertex,
        });
    }
    (rigid, diagonal)
}

pub fn find_rigid_edges(c: &RipsComplex2<'_>) -> Vec<RigidEdge> {
    threshold_edges(c).0
}

/// Length-`a` sheet/slab edges whose endpoints are not perpendicular
/// partners. They are reported but never treated as rigid.
pub fn diagonal_threshold_edges(c: &RipsComplex2<'_>) -> Vec<usize> {
    threshold_edges(c).1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub edge: usize,
    pub third_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartnerViolation {
    pub cube_vertex: usize,
    pub neighbor: NeighborViolation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RigidFreeReport {
    pub rigid_checked: usize,
    pub triangle_violations: Vec<TriangleViolation>,
    pub neighbor_violations: Vec<PartnerViolation>,
}

impl RigidFreeReport {
    pub fn is_free(&self) -> bool {
        self.triangle_violations.is_empty() && self.neighbor_violations.is_empty()
    }
}

/// Confirms that no rigid edge is the side of a triangle, and cross-checks
/// each partner with [`second_neighbor_witness`].
pub fn assert_rigid_free(c: &RipsComplex2<'_>, rigid: &[RigidEdge]) -> Result<RigidFreeReport> {
    let by_edge: HashMap<usize, &RigidEdge> = rigid.iter().map(|r| (r.edge, r)).collect();
    let mut report = RigidFreeReport {
        rigid_checked: rigid.len(),
        ..Default::default()
    };
    for &[i, j, k] in c.triangles() {
        for (u, v, w) in [(i, j, k), (i, k, j), (j, k, i)] {
            let e = c
                .edge_index(u, v)
                .ok_or_else(|| Error::Consistency(format!("triangle side ({u}, {v}) missing")))?;
            if by_edge.contains_key(&e) {
                report.triangle_violations.push(TriangleViolation {
                    edge: e,
                    third_vertex: w,
                });
            }
        }
    }
    for r in rigid {
        let partner = c.cloud().point(r.cube_vertex);
        for neighbor in second_neighbor_witness(partner, c.cloud(), c.scale())? {
            report.neighbor_violations.push(PartnerViolation {
                cube_vertex: r.cube_vertex,
                neighbor,
            });
        }
    }
    Ok(report)
}

/// Breadth-first shortest path avoiding `banned` edges; neighbours are
/// visited in ascending order, so ties go to the smaller vertex index.
fn shortest_path(
    c: &RipsComplex2<'_>,
    from: usize,
    to: usize,
    banned: &HashSet<usize>,
) -> Result<Vec<usize>> {
    let mut parent = vec![usize::MAX; c.vertex_count()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &w in c.neighbors(v) {
            let e = c.edge_index(v, w).expect("adjacency mirrors edges");
            if parent[w] == usize::MAX && !banned.contains(&e) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if parent[to] == usize::MAX {
        return Err(Error::Disconnected { from, to });
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        path.push(c.edge_index(parent[v], v).expect("tree edge"));
        v = parent[v];
    }
    path.reverse();
    Ok(path)
}

/// The cycle `Y₁X₁ + (X₁ ⇝ X₂) + X₂Y₂ + (Y₂ ⇝ Y₁)`, the two paths being
/// shortest paths over non-rigid edges.
pub fn complete_to_cycle(
    e1: &RigidEdge,
    e2: &RigidEdge,
    c: &RipsComplex2<'_>,
    rigid: &[RigidEdge],
) -> Result<Cycle> {
    if e1.edge == e2.edge {
        return Err(Error::Precondition("cycle completion needs two distinct rigid edges".into()));
    }
    for e in [e1, e2] {
        if c.edges().get(e.edge) != Some(&(e.sheet_vertex.min(e.cube_vertex), e.sheet_vertex.max(e.cube_vertex))) {
            return Err(Error::Precondition(format!("rigid edge {} is not in the complex", e.edge)));
        }
    }
    let banned: HashSet<usize> = rigid.iter().map(|r| r.edge).chain([e1.edge, e2.edge]).collect();
    let mut chain = vec![e1.edge, e2.edge];
    chain.extend(shortest_path(c, e1.cube_vertex, e2.cube_vertex, &banned)?);
    chain.extend(shortest_path(c, e2.sheet_vertex, e1.sheet_vertex, &banned)?);
    Cycle::new(c, &chain)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    #[serde(with = "crate::rational::text")]
    pub scale: Rational,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub betti0: usize,
    pub betti1: usize,
    pub rigid_count: usize,
    pub rigid_free: bool,
    pub lower_bound: usize,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub config: CloudConfig,
    pub rows: Vec<ExperimentRow>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,scale,vertices,edges,triangles,betti0,betti1,rigid_count,rigid_free,lower_bound,verdict\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                format_rational(&r.scale),
                r.vertices,
                r.edges,
                r.triangles,
                r.betti0,
                r.betti1,
                r.rigid_count,
                r.rigid_free,
                r.lower_bound,
                if r.verdict { "pass" } else { "fail" }
            );
        }
        out
    }
}

/// One experiment row: cloud with `n` sheets at scale `a`, its Betti
/// numbers, the rigid census and the rank bound from the `n − 1` cycles
/// pairing the first rigid edge with each of the others.
pub fn experiment_row(template: &CloudConfig, n: usize, a: &Rational) -> Result<ExperimentRow> {
    let cfg = CloudConfig {
        sheets: sheet_labels(n),
        scale: a.clone(),
        ..template.clone()
    };
    let cloud = build_cloud(&cfg)?;
    let c = build_complex(&cloud, a);
    let betti = betti_report(&c)?;
    let rigid = find_rigid_edges(&c);
    let free = assert_rigid_free(&c, &rigid)?.is_free();
    let lower_bound = match rigid.split_first() {
        Some((first, rest)) if free => {
            let cycles = rest
                .iter()
                .map(|other| complete_to_cycle(first, other, &c, &rigid))
                .collect::<Result<Vec<_>>>()?;
            let coords: Vec<usize> = rigid.iter().map(|r| r.edge).collect();
            rigid_rank_lower_bound(&c, &coords, &cycles)?
        }
        _ => 0,
    };
    let expected = n.saturating_sub(1);
    let mut verdict = rigid.len() == n && free && lower_bound == expected && lower_bound <= betti.betti1;
    if cfg.is_minimal() {
        verdict &= betti.betti0 == 1 && betti.betti1 == expected;
    }
    Ok(ExperimentRow {
        n,
        scale: a.clone(),
        vertices: betti.vertices,
        edges: betti.edges,
        triangles: betti.triangles,
        betti0: betti.betti0,
        betti1: betti.betti1,
        rigid_count: rigid.len(),
        rigid_free: free,
        lower_bound,
        verdict,
    })
}

/// Runs [`experiment_row`] for every scale (outer loop) and sheet count
/// (inner loop). `β₁ = n − 1` and `β₀ = 1` are required only when the
/// template is minimal; otherwise the rank bound carries the verdict.
pub fn theorem_experiment(
    template: &CloudConfig,
    sheet_counts: &[usize],
    scales: &[Rational],
) -> Result<ExperimentReport> {
    if sheet_counts.is_empty() || scales.is_empty() {
        return Err(Error::Config("experiment needs sheet counts and scales".into()));
    }
    if sheet_counts.windows(2).any(|w| w[0] >= w[1]) || sheet_counts[0] == 0 {
        return Err(Error::Config("sheet counts must be positive and strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(sheet_counts.len() * scales.len());
    for a in scales {
        for &n in sheet_counts {
            rows.push(experiment_row(template, n, a)?);
        }
    }
    let passed = rows.iter().all(|r| r.verdict);
    Ok(ExperimentReport {
        config: template.clone(),
        rows,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::bits;
    use crate::rational::{int, ratio};
    use crate::space::{Cloud, LabeledPoint4};

    fn minimal(n: usize, a: Rational) -> Cloud {
        build_cloud(&CloudConfig::minimal(n, a)).unwrap()
    }

    #[test]
    fn rigid_census_examples() {
        let cloud = minimal(4, int(1));
        let c = build_complex(&cloud, &int(1));
        let rigid = find_rigid_edges(&c);
        assert_eq!(rigid.len(), 4);
        assert!(rigid.iter().all(|r| r.fiber == int(0)));
        assert!(diagonal_threshold_edges(&c).is_empty());

        let a = ratio(118097, 118098);
        let cloud = minimal(2, a.clone());
        let c = build_complex(&cloud, &a);
        let rigid = find_rigid_edges(&c);
        assert_eq!(rigid.len(), 2);
        assert!(rigid.iter().all(|r| r.fiber == int(1)));
    }

    #[test]
    fn no_partners_no_rigid_edges() {
        let cfg = CloudConfig {
            include_partners: false,
            x_values: vec![int(0), ratio(1, 3)],
            ..CloudConfig::minimal(3, int(1))
        };
        let cloud = build_cloud(&cfg).unwrap();
        assert!(find_rigid_edges(&build_complex(&cloud, &int(1))).is_empty());
    }

    #[test]
    fn minimal_clouds_are_rigid_free() {
        for a in [int(1), ratio(236195, 236196), ratio(118097, 118098)] {
            for n in [1, 2, 5] {
                let cloud = minimal(n, a.clone());
                let c = build_complex(&cloud, &a);
                let rigid = find_rigid_edges(&c);
                let report = assert_rigid_free(&c, &rigid).unwrap();
                assert!(report.is_free(), "{report:?}");
                assert_eq!(report.rigid_checked, n);
            }
        }
    }

    #[test]
    fn intruder_is_reported() {
        let a = int(1);
        let base = minimal(2, a.clone());
        let partner = base.point(1).clone();
        let mut points = base.points().to_vec();
        let mut intruder: LabeledPoint4 = partner.clone();
        intruder.coords[0] = ratio(1, 2);
        intruder.label = Label::Sheet {
            x: ratio(1, 2),
            y: bits("0").unwrap(),
        };
        points.push(intruder);
        let cloud = Cloud::from_points(points).unwrap();
        let c = build_complex(&cloud, &a);
        let rigid = find_rigid_edges(&c);
        let report = assert_rigid_free(&c, &rigid).unwrap();
        assert!(!report.is_free());
        assert!(report.triangle_violations.iter().any(|v| v.third_vertex == 4));
        assert_eq!(report.neighbor_violations.len(), 2);
    }

    #[test]
    fn two_sheets_close_into_a_four_cycle() {
        let cloud = minimal(2, int(1));
        let c = build_complex(&cloud, &int(1));
        let rigid = find_rigid_edges(&c);
        let cycle = complete_to_cycle(&rigid[0], &rigid[1], &c, &rigid).unwrap();
        // points: Y0 = 0, X0 = 1, Y1 = 2, X1 = 3
        let mut expected = vec![
            c.edge_index(0, 1).unwrap(),
            c.edge_index(1, 3).unwrap(),
            c.edge_index(3, 2).unwrap(),
            c.edge_index(2, 0).unwrap(),
        ];
        expected.sort_unstable();
        assert_eq!(cycle.edges(), expected.as_slice());
        assert!(matches!(
            complete_to_cycle(&rigid[0], &rigid[0], &c, &rigid),
            Err(Error::Precondition(_))
        ));
        assert_eq!(rigid_rank_lower_bound(&c, &[rigid[0].edge, rigid[1].edge], &[cycle]).unwrap(), 1);
    }

    #[test]
    fn experiment_rows() {
        let template = CloudConfig::minimal(1, int(1));
        let report = theorem_experiment(&template, &[1, 2, 3, 5, 8], &[int(1)]).unwrap();
        assert!(report.passed);
        let b1: Vec<usize> = report.rows.iter().map(|r| r.betti1).collect();
        assert_eq!(b1, vec![0, 1, 2, 4, 7]);
        assert!(report.to_csv().lines().nth(1).unwrap().ends_with(",pass"));
        assert!(theorem_experiment(&template, &[3, 2], &[int(1)]).is_err());
        assert!(theorem_experiment(&template, &[2], &[ratio(1, 2)]).is_err());
    }

    #[test]
    fn full_configuration_keeps_the_rank_bound() {
        let a = ratio(236195, 236196);
        let template = CloudConfig::full(1, a.clone());
        let row = experiment_row(&template, 4, &a).unwrap();
        assert_eq!(row.rigid_count, 4);
        assert!(row.rigid_free);
        assert_eq!(row.lower_bound, 3);
        assert!(row.betti1 >= 3);
        assert!(row.verdict);
    }
}
