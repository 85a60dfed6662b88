//! Quality indicators for final archives: exact hypervolume (up to three
//! objectives), IGD, and grid coverage entropy.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pareto::ObjectiveVector;
use crate::problems::ProblemSpec;
use crate::scalar::{cmp_finite, cmp_lex, euclidean, Scalar};

/// Default grid resolution per objective for [`coverage_entropy`].
pub const DEFAULT_ENTROPY_GRID: usize = 32;

/// Reference-front size used for IGD.
pub const IGD_REFERENCE_POINTS: usize = 1000;

/// `(1 + 1/h, ..., 1 + 1/h)` with `m` components.
pub fn hv_reference_for<T: Scalar>(m: usize, h: usize) -> Result<Vec<T>> {
    if h == 0 {
        return Err(Error::InvalidParameter("divisions must be >= 1".into()));
    }
    Ok(vec![T::one() + T::one() / T::from_count(h); m])
}

/// Exact measure of the region dominated by `points` and bounded by `reference`.
/// Points not strictly better than the reference in every objective add nothing.
pub fn hypervolume<T, P>(points: &[P], reference: &[T]) -> Result<T>
where
    T: Scalar,
    P: AsRef<[T]>,
{
    let m = reference.len();
    if m == 0 || m > 3 {
        return Err(Error::UnsupportedObjectives(m));
    }
    let mut inside: Vec<&[T]> = Vec::with_capacity(points.len());
    for p in points {
        let p = p.as_ref();
        if p.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: p.len() });
        }
        if p.iter().zip(reference).all(|(v, r)| v < r) {
            inside.push(p);
        }
    }
    if inside.is_empty() {
        return Ok(T::zero());
    }
    Ok(match m {
        1 => reference[0] - inside.iter().map(|p| p[0]).fold(T::infinity(), T::min),
        2 => {
            inside.sort_by(|a, b| cmp_lex(a, b));
            hv2d_sorted(inside.iter().map(|p| (p[0], p[1])), reference[0], reference[1])
        }
        _ => hv3d(inside, reference),
    })
}

/// Area dominated by points given in lexicographic `(x, y)` order.
fn hv2d_sorted<T: Scalar>(sorted: impl Iterator<Item = (T, T)>, rx: T, ry: T) -> T {
    let mut stairs: Vec<(T, T)> = Vec::new();
    for (x, y) in sorted {
        if stairs.last().is_none_or(|&(_, last_y)| y < last_y) {
            stairs.push((x, y));
        }
    }
    let mut area = T::zero();
    for (i, &(x, y)) in stairs.iter().enumerate() {
        let next_x = stairs.get(i + 1).map_or(rx, |s| s.0);
        area += (next_x - x) * (ry - y);
    }
    area
}

/// Sweep upward in the third objective, maintaining the dominated area of the
/// 2-D projection of every point seen so far.
fn hv3d<T: Scalar>(mut points: Vec<&[T]>, reference: &[T]) -> T {
    points.sort_by(|a, b| cmp_finite(&a[2], &b[2]).then_with(|| cmp_lex(a, b)));
    let (rx, ry, rz) = (reference[0], reference[1], reference[2]);
    let mut stairs: Vec<(T, T)> = Vec::new();
    let mut area = T::zero();
    let mut volume = T::zero();
    for (i, p) in points.iter().enumerate() {
        area += staircase_insert(&mut stairs, p[0], p[1], rx, ry);
        let next_z = points.get(i + 1).map_or(rz, |q| q[2]);
        volume += area * (next_z - p[2]);
    }
    volume
}

/// Inserts `(x, y)` into a staircase sorted by ascending `x` / descending `y`,
/// returning the dominated area it adds.
fn staircase_insert<T: Scalar>(stairs: &mut Vec<(T, T)>, x: T, y: T, rx: T, ry: T) -> T {
    let left = stairs.partition_point(|s| s.0 <= x);
    if left > 0 && stairs[left - 1].1 <= y {
        return T::zero();
    }
    let start = stairs.partition_point(|s| s.0 < x);
    let mut end = start;
    while end < stairs.len() && stairs[end].1 >= y {
        end += 1;
    }
    let mut cur_x = x;
    let mut cur_h = if start > 0 { stairs[start - 1].1 } else { ry };
    let mut added = T::zero();
    for &(dx, dy) in &stairs[start..end] {
        added += (dx - cur_x) * (cur_h - y);
        cur_x = dx;
        cur_h = dy;
    }
    let right_x = stairs.get(end).map_or(rx, |s| s.0);
    added += (right_x - cur_x) * (cur_h - y);
    stairs.splice(start..end, std::iter::once((x, y)));
    added
}

/// Mean over `reference` of the distance to the nearest point of `front`.
pub fn igd<T, P, Q>(front: &[P], reference: &[Q]) -> Result<T>
where
    T: Scalar,
    P: AsRef<[T]>,
    Q: AsRef<[T]>,
{
    if front.is_empty() {
        return Err(Error::EmptyInput("front"));
    }
    if reference.is_empty() {
        return Err(Error::EmptyInput("reference front"));
    }
    let m = reference[0].as_ref().len();
    if let Some(bad) = front
        .iter()
        .map(|p| p.as_ref().len())
        .chain(reference.iter().map(|r| r.as_ref().len()))
        .find(|&len| len != m)
    {
        return Err(Error::DimensionMismatch { expected: m, found: bad });
    }
    let total = reference
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|p| euclidean(r.as_ref(), p.as_ref()))
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), |a, b| a + b);
    Ok(total / T::from_count(reference.len()))
}

/// Shannon entropy (bits) of the occupancy of a `grid^m` partition of `bounds`.
/// Points outside the box land in the nearest edge cell.
pub fn coverage_entropy<T, P>(front: &[P], grid: usize, bounds: &[(T, T)]) -> Result<T>
where
    T: Scalar,
    P: AsRef<[T]>,
{
    if front.is_empty() {
        return Err(Error::EmptyInput("front"));
    }
    if grid == 0 {
        return Err(Error::InvalidParameter("entropy grid must be >= 1".into()));
    }
    let m = bounds.len();
    let cells_per_axis = T::from_count(grid);
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in front {
        let p = p.as_ref();
        if p.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: p.len() });
        }
        let cell: Vec<usize> = p
            .iter()
            .zip(bounds)
            .map(|(&v, &(lo, hi))| {
                let span = hi - lo;
                if !(span > T::zero()) {
                    return 0;
                }
                let t = ((v - lo) / span * cells_per_axis).floor();
                t.max(T::zero()).to_usize().unwrap_or(0).min(grid - 1)
            })
            .collect();
        *counts.entry(cell).or_insert(0) += 1;
    }
    let total = T::from_count(front.len());
    let entropy = counts
        .values()
        .map(|&c| {
            let q = T::from_count(c) / total;
            -q * q.log2()
        })
        .fold(T::zero(), |a, b| a + b);
    Ok(entropy.max(T::zero()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scores<T> {
    pub hypervolume: T,
    pub igd: T,
    pub entropy: T,
}

/// Everything needed to score a final archive on one problem.
#[derive(Debug, Clone)]
pub struct MetricConfig<T> {
    pub hv_reference: Vec<T>,
    pub igd_reference_front: Vec<ObjectiveVector<T>>,
    pub entropy_grid: usize,
    pub entropy_bounds: Vec<(T, T)>,
}

impl<T: Scalar> MetricConfig<T> {
    /// Reference point `1 + 1/h`, 1000-point analytic IGD front, and the
    /// front's bounding box for entropy.
    pub fn for_problem(spec: &ProblemSpec<T>, h: usize, entropy_grid: usize) -> Result<Self> {
        use crate::problems::Problem;
        let front = spec.true_front_sample(IGD_REFERENCE_POINTS)?;
        let m = spec.num_objectives();
        let entropy_bounds = (0..m)
            .map(|k| {
                front.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| {
                    (lo.min(p[k]), hi.max(p[k]))
                })
            })
            .collect();
        Ok(Self {
            hv_reference: hv_reference_for(m, h)?,
            igd_reference_front: front,
            entropy_grid,
            entropy_bounds,
        })
    }

    pub fn score<P: AsRef<[T]>>(&self, front: &[P]) -> Result<Scores<T>> {
        Ok(Scores {
            hypervolume: hypervolume(front, &self.hv_reference)?,
            igd: igd(front, &self.igd_reference_front)?,
            entropy: coverage_entropy(front, self.entropy_grid, &self.entropy_bounds)?,
        })
    }
}
