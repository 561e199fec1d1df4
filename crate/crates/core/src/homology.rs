//! Betti numbers `β₀`, `β₁` over F₂ from sparse boundary matrices.

use std::collections::HashMap;

use serde::Serialize;

use crate::rips::RipsComplex2;
use crate::space::Cloud;
use crate::{Error, Rational, Result};

/// Column-major sparse matrix over F₂. Each column lists the rows holding a
/// 1, strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseF2Matrix {
    nrows: usize,
    columns: Vec<Vec<usize>>,
}

impl SparseF2Matrix {
    pub fn new(nrows: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        for (c, col) in columns.iter().enumerate() {
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::MalformedColumn {
                    column: c,
                    reason: "rows not strictly ascending".into(),
                });
            }
            if col.last().is_some_and(|&r| r >= nrows) {
                return Err(Error::MalformedColumn {
                    column: c,
                    reason: format!("row index beyond {nrows} rows"),
                });
            }
        }
        Ok(Self { nrows, columns })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }
}

/// `a ⊕ b` on sorted index lists.
fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn boundary1(c: &RipsComplex2<'_>) -> SparseF2Matrix {
    SparseF2Matrix {
        nrows: c.vertex_count(),
        columns: c.edges().iter().map(|&(i, j)| vec![i, j]).collect(),
    }
}

pub fn boundary2(c: &RipsComplex2<'_>) -> Result<SparseF2Matrix> {
    let side = |u: usize, v: usize, t: &[usize; 3]| {
        c.edge_index(u, v).ok_or_else(|| {
            Error::Consistency(format!("triangle {t:?} lacks its side ({u}, {v})"))
        })
    };
    let columns = c
        .triangles()
        .iter()
        .map(|t| {
            let [i, j, k] = *t;
            let mut rows = vec![side(i, j, t)?, side(i, k, t)?, side(j, k, t)?];
            rows.sort_unstable();
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseF2Matrix {
        nrows: c.edges().len(),
        columns,
    })
}

/// Left-to-right column reduction keyed on the lowest (largest) row.
pub fn rank_f2(m: &SparseF2Matrix) -> usize {
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    for col in &m.columns {
        let mut col = col.clone();
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(reducer) => col = symmetric_difference(&col, reducer),
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank of a dense F₂ matrix given as rows, by Gaussian elimination.
pub fn dense_rank_f2(mut rows: Vec<Vec<bool>>) -> usize {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col).copied().unwrap_or(false)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col).copied().unwrap_or(false) {
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `(β₀, β₁) = (V − rk ∂₁, E − rk ∂₁ − rk ∂₂)`.
pub fn betti01(c: &RipsComplex2<'_>) -> Result<(usize, usize)> {
    let r = betti_report(c)?;
    Ok((r.betti0, r.betti1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    #[serde(with = "crate::rational::text")]
    pub scale: Rational,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub rank_d1: usize,
    pub rank_d2: usize,
    pub betti0: usize,
    pub betti1: usize,
}

pub fn betti_report(c: &RipsComplex2<'_>) -> Result<BettiReport> {
    let rank_d1 = rank_f2(&boundary1(c));
    let rank_d2 = rank_f2(&boundary2(c)?);
    let (v, e) = (c.vertex_count(), c.edges().len());
    Ok(BettiReport {
        scale: c.scale().clone(),
        vertices: v,
        edges: e,
        triangles: c.triangles().len(),
        rank_d1,
        rank_d2,
        betti0: v - rank_d1,
        betti1: e - rank_d1 - rank_d2,
    })
}

pub const BRUTEFORCE_MAX_POINTS: usize = 12;

/// Independent `(β₀, β₁)`: every pair and triple is tested from the raw
/// coordinates and ranks come from dense elimination.
pub fn betti_bruteforce(cloud: &Cloud, a: &Rational) -> Result<(usize, usize)> {
    let n = cloud.len();
    if n > BRUTEFORCE_MAX_POINTS {
        return Err(Error::Size(n));
    }
    let a_sq = a * a;
    let close = |i: usize, j: usize| {
        let (p, q) = (&cloud.point(i).coords, &cloud.point(j).coords);
        let mut s = Rational::default();
        for k in 0..4 {
            let d = &p[k] - &q[k];
            s += &d * &d;
        }
        s <= a_sq
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j && close(i, j) {
                edges.push((i, j));
            }
        }
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if close(i, j) && close(i, k) && close(j, k) {
                    triangles.push((i, j, k));
                }
            }
        }
    }
    // rows of ∂₁ᵀ and ∂₂ᵀ: rank is transpose invariant
    let d1: Vec<Vec<bool>> = edges
        .iter()
        .map(|&(i, j)| (0..n).map(|v| v == i || v == j).collect())
        .collect();
    let d2: Vec<Vec<bool>> = triangles
        .iter()
        .map(|&(i, j, k)| {
            edges
                .iter()
                .map(|&e| e == (i, j) || e == (i, k) || e == (j, k))
                .collect()
        })
        .collect();
    let (r1, r2) = (dense_rank_f2(d1), dense_rank_f2(d2));
    Ok((n - r1, edges.len() - r1 - r2))
}

/// A closed F₂ 1-chain, stored as sorted edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    edges: Vec<usize>,
}

impl Cycle {
    /// Sums `edges` over F₂ (repeated edges cancel) and checks `∂₁ = 0`.
    pub fn new(c: &RipsComplex2<'_>, edges: &[usize]) -> Result<Self> {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(sorted.len());
        for e in sorted {
            if reduced.last() == Some(&e) {
                reduced.pop();
            } else {
                reduced.push(e);
            }
        }
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &e in &reduced {
            let &(i, j) = c
                .edges()
                .get(e)
                .ok_or_else(|| Error::Precondition(format!("edge index {e} out of range")))?;
            *degree.entry(i).or_default() += 1;
            *degree.entry(j).or_default() += 1;
        }
        if let Some((v, _)) = degree.iter().find(|(_, &d)| d % 2 == 1) {
            return Err(Error::Precondition(format!("chain is not closed at vertex {v}")));
        }
        Ok(Self { edges: reduced })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }
}

/// Rank of the cycles restricted to the `rigid` edge coordinates.
///
/// A rigid edge lies in no triangle, so its row of `∂₂` is zero and the
/// coefficient of that edge in a cycle is unchanged by adding boundaries.
/// The restrictions are therefore well defined on homology and their rank
/// bounds `β₁` from below.
pub fn rigid_rank_lower_bound(
    c: &RipsComplex2<'_>,
    rigid: &[usize],
    cycles: &[Cycle],
) -> Result<usize> {
    let d2 = boundary2(c)?;
    for (t, col) in d2.columns().iter().enumerate() {
        if let Some(e) = rigid.iter().find(|e| col.binary_search(e).is_ok()) {
            return Err(Error::Precondition(format!(
                "rigid edge {e} is a side of triangle {:?}",
                c.triangles()[t]
            )));
        }
    }
    let mut seen = std::collections::HashSet::new();
    let coords: Vec<usize> = rigid.iter().copied().filter(|e| seen.insert(*e)).collect();
    let mut columns = Vec::with_capacity(cycles.len());
    for cycle in cycles {
        Cycle::new(c, cycle.edges())?;
        let mut col: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(_, &e)| cycle.contains(e))
            .map(|(row, _)| row)
            .collect();
        col.sort_unstable();
        columns.push(col);
    }
    Ok(rank_f2(&SparseF2Matrix::new(coords.len(), columns)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::rips::build_complex;
    use crate::rips::tests::{raw, unit_square};
    use petgraph::unionfind::UnionFind;
    use proptest::prelude::*;

    #[test]
    fn boundary_examples() {
        let sq = unit_square();
        let c = build_complex(&sq, &int(1));
        let d1 = boundary1(&c);
        assert_eq!((d1.nrows(), d1.ncols()), (4, 4));
        assert!(d1.columns().iter().all(|col| col.len() == 2));
        assert_eq!(boundary2(&c).unwrap().ncols(), 0);

        let c = build_complex(&sq, &ratio(1, 2));
        assert_eq!(boundary1(&c).ncols(), 0);

        let c = build_complex(&sq, &ratio(3, 2));
        let d2 = boundary2(&c).unwrap();
        assert_eq!(d2.ncols(), 4);
        assert!(d2.columns().iter().all(|col| col.len() == 3));
        // edge (0,1) is a side of triangles (0,1,2) and (0,1,3)
        let e01 = c.edge_index(0, 1).unwrap();
        assert_eq!(d2.columns().iter().filter(|col| col.contains(&e01)).count(), 2);
    }

    #[test]
    fn rank_examples() {
        let ones = SparseF2Matrix::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(rank_f2(&ones), 1);
        let id = SparseF2Matrix::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(rank_f2(&id), 3);
        assert!(matches!(
            SparseF2Matrix::new(3, vec![vec![1, 0]]),
            Err(Error::MalformedColumn { column: 0, .. })
        ));
        assert!(SparseF2Matrix::new(3, vec![vec![1, 1]]).is_err());
        assert!(SparseF2Matrix::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn betti_examples() {
        let sq = unit_square();
        assert_eq!(betti01(&build_complex(&sq, &int(1))).unwrap(), (1, 1));
        assert_eq!(betti01(&build_complex(&sq, &ratio(3, 2))).unwrap(), (1, 0));
        assert_eq!(betti_bruteforce(&sq, &int(1)).unwrap(), (1, 1));
        let two = Cloud::from_points(vec![
            raw([int(0), int(0), int(0), int(0)]),
            raw([int(1), int(0), int(0), int(0)]),
        ])
        .unwrap();
        assert_eq!(betti01(&build_complex(&two, &ratio(1, 2))).unwrap(), (2, 0));
        let one = Cloud::from_points(vec![raw([int(0), int(0), int(0), int(0)])]).unwrap();
        assert_eq!(betti_bruteforce(&one, &int(1)).unwrap(), (1, 0));
    }

    #[test]
    fn bruteforce_rejects_large_clouds() {
        let pts = (0..13).map(|i| raw([int(i), int(0), int(0), int(0)])).collect();
        let cloud = Cloud::from_points(pts).unwrap();
        assert_eq!(betti_bruteforce(&cloud, &int(1)), Err(Error::Size(13)));
    }

    /// `2n` points: two tight clusters one unit apart, matched in pairs.
    fn ladder(n: usize) -> Cloud {
        let mut pts = Vec::new();
        for i in 0..n as i64 {
            let offset = ratio(i, 100);
            pts.push(raw([int(0), offset.clone(), int(0), int(0)]));
            pts.push(raw([int(1), offset, int(0), int(0)]));
        }
        Cloud::from_points(pts).unwrap()
    }

    #[test]
    fn rigid_bound_on_a_ladder() {
        for n in 1..6 {
            let cloud = ladder(n);
            let c = build_complex(&cloud, &int(1));
            let rungs: Vec<usize> = (0..n).map(|i| c.edge_index(2 * i, 2 * i + 1).unwrap()).collect();
            let cycles: Vec<Cycle> = (1..n)
                .map(|i| {
                    let edges = [
                        rungs[0],
                        rungs[i],
                        c.edge_index(0, 2 * i).unwrap(),
                        c.edge_index(1, 2 * i + 1).unwrap(),
                    ];
                    Cycle::new(&c, &edges).unwrap()
                })
                .collect();
            let bound = rigid_rank_lower_bound(&c, &rungs, &cycles).unwrap();
            assert_eq!(bound, n - 1);
            assert_eq!(betti01(&c).unwrap(), (1, n - 1));

            let mut doubled = cycles.clone();
            doubled.extend(cycles.iter().cloned());
            assert_eq!(rigid_rank_lower_bound(&c, &rungs, &doubled).unwrap(), n - 1);
            assert_eq!(rigid_rank_lower_bound(&c, &rungs, &[]).unwrap(), 0);
        }
    }

    #[test]
    fn rigid_bound_preconditions() {
        let sq = unit_square();
        let c = build_complex(&sq, &ratio(3, 2));
        assert!(matches!(rigid_rank_lower_bound(&c, &[0], &[]), Err(Error::Precondition(_))));
        let c = build_complex(&sq, &int(1));
        assert!(Cycle::new(&c, &[0]).is_err());
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(Cycle::new(&c, &all).unwrap().edges(), &[0, 1, 2, 3]);
        assert!(Cycle::new(&c, &[0, 0]).unwrap().edges().is_empty());
    }

    /// Reference rank from a row-major dense copy.
    fn dense_of(m: &SparseF2Matrix) -> Vec<Vec<bool>> {
        (0..m.nrows())
            .map(|r| m.columns().iter().map(|col| col.contains(&r)).collect())
            .collect()
    }

    fn sparse_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SparseF2Matrix> {
        prop::collection::vec(prop::collection::vec(any::<bool>(), rows), cols).prop_map(move |cs| {
            let columns = cs
                .into_iter()
                .map(|c| c.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
                .collect();
            SparseF2Matrix::new(rows, columns).unwrap()
        })
    }

    fn rational_cloud() -> impl Strategy<Value = (Cloud, Rational)> {
        (
            prop::collection::vec(prop::array::uniform4(0i64..5), 1..=10),
            1i64..12,
        )
            .prop_map(|(mut rows, s)| {
                rows.sort();
                rows.dedup();
                let pts = rows.into_iter().map(|r| raw(r.map(|v| ratio(v, 3)))).collect();
                (Cloud::from_points(pts).unwrap(), ratio(s, 6))
            })
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(m in sparse_matrix(12, 15)) {
            prop_assert_eq!(rank_f2(&m), dense_rank_f2(dense_of(&m)));
        }

        #[test]
        fn rank_is_column_permutation_invariant(m in sparse_matrix(10, 10), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut cols = m.columns().to_vec();
            cols.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled = SparseF2Matrix::new(m.nrows(), cols).unwrap();
            prop_assert_eq!(rank_f2(&shuffled), rank_f2(&m));
        }

        #[test]
        fn betti_matches_oracles((cloud, a) in rational_cloud()) {
            let c = build_complex(&cloud, &a);
            let (b0, b1) = betti01(&c).unwrap();
            prop_assert_eq!((b0, b1), betti_bruteforce(&cloud, &a).unwrap());
            let mut uf = UnionFind::<usize>::new(cloud.len());
            for &(i, j) in c.edges() { uf.union(i, j); }
            let mut roots = uf.into_labeling();
            roots.sort_unstable();
            roots.dedup();
            prop_assert_eq!(b0, roots.len());
        }

        #[test]
        fn boundary_of_boundary_vanishes((cloud, a) in rational_cloud()) {
            let c = build_complex(&cloud, &a);
            let (d1, d2) = (boundary1(&c), boundary2(&c).unwrap());
            for col in d2.columns() {
                let mut acc: Vec<usize> = Vec::new();
                for &e in col { acc = symmetric_difference(&acc, &d1.columns()[e]); }
                prop_assert!(acc.is_empty());
            }
        }
    }
}
