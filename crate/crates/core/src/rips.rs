//! Vietoris-Rips 2-skeleton with an inclusive exact threshold: `{i, j}` is
//! an edge iff `‖p_i − p_j‖² ≤ a²`, and `{i, j, k}` a triangle iff all three
//! sides are edges. `H₁` only sees the 2-skeleton, so nothing higher is built.

use serde::Serialize;

use crate::space::{Cloud, LabeledPoint4};
use crate::{Error, Rational, Result};

pub fn sq_dist(p: &LabeledPoint4, q: &LabeledPoint4) -> Rational {
    p.coords
        .iter()
        .zip(&q.coords)
        .map(|(a, b)| {
            let d = a - b;
            &d * &d
        })
        .sum()
}

/// Upper-triangular table of squared distances, shared across scales.
struct DistanceTable {
    n: usize,
    entries: Vec<Rational>,
}

impl DistanceTable {
    fn new(cloud: &Cloud) -> Self {
        let points = cloud.points();
        let n = points.len();
        let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                entries.push(sq_dist(&points[i], &points[j]));
            }
        }
        Self { n, entries }
    }

    /// Edges `(i, j)`, `i < j`, in lexicographic order.
    fn edges_within(&self, a_sq: &Rational) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.entries[k] <= *a_sq {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        edges
    }
}

#[derive(Clone, Debug)]
pub struct RipsComplex2<'a> {
    cloud: &'a Cloud,
    scale: Rational,
    edges: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
    adjacency: Vec<Vec<usize>>,
}

impl<'a> RipsComplex2<'a> {
    fn from_edges(cloud: &'a Cloud, scale: Rational, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); cloud.len()];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut triangles = Vec::new();
        for &(i, j) in &edges {
            let (ni, nj) = (&adjacency[i], &adjacency[j]);
            let (mut x, mut y) = (ni.partition_point(|&k| k <= j), nj.partition_point(|&k| k <= j));
            while x < ni.len() && y < nj.len() {
                match ni[x].cmp(&nj[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        triangles.push([i, j, ni[x]]);
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
        Self {
            cloud,
            scale,
            edges,
            triangles,
            adjacency,
        }
    }

    pub fn cloud(&self) -> &'a Cloud {
        self.cloud
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn vertex_count(&self) -> usize {
        self.cloud.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Position of edge `{i, j}` in [`Self::edges`].
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    pub fn export(&self) -> ComplexExport {
        ComplexExport {
            scale: self.scale.clone(),
            vertices: self.vertex_count(),
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            triangles: self.triangles.clone(),
        }
    }
}

/// JSON form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexExport {
    #[serde(with = "crate::rational::text")]
    pub scale: Rational,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn build_edges(cloud: &Cloud, a: &Rational) -> Vec<(usize, usize)> {
    DistanceTable::new(cloud).edges_within(&(a * a))
}

pub fn build_complex<'a>(cloud: &'a Cloud, a: &Rational) -> RipsComplex2<'a> {
    RipsComplex2::from_edges(cloud, a.clone(), build_edges(cloud, a))
}

fn is_subset<T: Ord>(small: &[T], large: &[T]) -> bool {
    small.iter().all(|x| large.binary_search(x).is_ok())
}

/// One complex per scale; `scales` must be strictly ascending and the
/// results are checked to be nested.
pub fn sweep<'a>(cloud: &'a Cloud, scales: &[Rational]) -> Result<Vec<RipsComplex2<'a>>> {
    if scales.is_empty() {
        return Err(Error::Domain("sweep needs at least one scale".into()));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("sweep scales must be strictly ascending".into()));
    }
    let table = DistanceTable::new(cloud);
    let complexes: Vec<_> = scales
        .iter()
        .map(|a| RipsComplex2::from_edges(cloud, a.clone(), table.edges_within(&(a * a))))
        .collect();
    for pair in complexes.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        if !is_subset(&lower.edges, &upper.edges) || !is_subset(&lower.triangles, &upper.triangles) {
            return Err(Error::Monotonicity {
                lower: crate::rational::format_rational(&lower.scale),
                upper: crate::rational::format_rational(&upper.scale),
            });
        }
    }
    Ok(complexes)
}
