//! Weight vectors, Tchebycheff scalarization, neighborhoods and the ideal point.

use std::ops::Deref;

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::{cmp_finite, Scalar};

/// Smallest effective weight inside [`tchebycheff`]; keeps edge sub-problems from
/// ignoring every objective but one.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Standard neighborhood size before clipping to the population size.
pub const DEFAULT_NEIGHBORHOOD: usize = 20;

/// A point on the unit simplex defining one scalar sub-problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T>(Vec<T>);

impl<T: Scalar> WeightVector<T> {
    pub fn new(lambda: Vec<T>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::EmptyInput("weight vector"));
        }
        if lambda.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidParameter(
                "weights must be finite and non-negative".into(),
            ));
        }
        let sum: T = lambda.iter().copied().sum();
        if (sum - T::one()).abs() > Self::tolerance() {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(lambda))
    }

    /// Normalizes strictly positive raw values onto the simplex.
    pub fn normalized(raw: Vec<T>) -> Result<Self> {
        let sum: T = raw.iter().copied().sum();
        if !(sum > T::zero()) || !sum.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize weights".into()));
        }
        Self::new(raw.into_iter().map(|v| v / sum).collect())
    }

    fn tolerance() -> T {
        T::lit(1e-9).max(T::epsilon() * T::lit(64.0))
    }

    /// Exactly one nonzero component: the sub-problem of a single objective axis.
    pub fn is_edge(&self) -> bool {
        self.0.iter().filter(|v| **v != T::zero()).count() == 1
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for WeightVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> AsRef<[T]> for WeightVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of simplex-lattice points for `m` objectives and `h` divisions.
pub fn sld_count(m: usize, h: usize) -> usize {
    if m == 0 {
        return 0;
    }
    binomial(h + m - 1, m - 1)
}

/// Division count `h` whose lattice has exactly `count` points, if any.
pub fn divisions_for_count(m: usize, count: usize) -> Option<usize> {
    if m < 2 || count < m {
        return None;
    }
    (1..=count).find(|&h| sld_count(m, h) == count)
}

/// Simplex-lattice design points `(i_1/h, ..., i_m/h)` with `Σ i_k = h`.
///
/// Generic over any numeric type, so exact rationals reproduce the lattice with
/// no rounding. The first component varies slowest, ascending.
pub fn sld_points<N>(m: usize, h: usize) -> Result<Vec<Vec<N>>>
where
    N: Num + FromPrimitive + Clone,
{
    if h == 0 {
        return Err(Error::InvalidParameter("SLD needs at least one division".into()));
    }
    if m == 0 {
        return Err(Error::UnsupportedObjectives(0));
    }
    let denom = N::from_usize(h).ok_or_else(|| Error::InvalidParameter("h too large".into()))?;
    let mut out = Vec::with_capacity(sld_count(m, h));
    let mut current = vec![0usize; m];
    compositions(h, 0, &mut current, &mut |c| {
        out.push(
            c.iter()
                .map(|&i| N::from_usize(i).expect("lattice index fits") / denom.clone())
                .collect(),
        )
    });
    Ok(out)
}

fn compositions(remaining: usize, pos: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        emit(current);
        return;
    }
    for i in 0..=remaining {
        current[pos] = i;
        compositions(remaining - i, pos + 1, current, emit);
    }
}

/// Uniform initial weight set with `h` divisions per objective.
pub fn sld_weights<T: Scalar>(m: usize, h: usize) -> Result<Vec<WeightVector<T>>> {
    sld_points::<T>(m, h)?
        .into_iter()
        .map(WeightVector::new)
        .collect()
}

/// Weighted Tchebycheff distance `max_i max(λ_i, 1e-6)·|f_i − z_i|`.
pub fn tchebycheff<T: Scalar>(f: &[T], weight: &[T], ideal: &[T]) -> T {
    debug_assert_eq!(f.len(), weight.len());
    debug_assert_eq!(f.len(), ideal.len());
    let floor = T::lit(WEIGHT_FLOOR);
    f.iter()
        .zip(weight)
        .zip(ideal)
        .map(|((&fi, &wi), &zi)| wi.max(floor) * (fi - zi).abs())
        .fold(T::zero(), T::max)
}

/// Componentwise minimum of every objective vector observed so far.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPoint<T>(Vec<T>);

impl<T: Scalar> IdealPoint<T> {
    /// Starts from a single observation.
    pub fn from_point(f: &[T]) -> Self {
        Self(f.to_vec())
    }

    /// Folds `f` in; returns whether any component improved.
    pub fn update(&mut self, f: &[T]) -> bool {
        debug_assert_eq!(f.len(), self.0.len());
        let mut changed = false;
        for (z, &v) in self.0.iter_mut().zip(f) {
            if v < *z {
                *z = v;
                changed = true;
            }
        }
        changed
    }

    pub fn updated(mut self, f: &[T]) -> Self {
        self.update(f);
        self
    }
}

impl<T> Deref for IdealPoint<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// For each sub-problem, the indices of its nearest sub-problems in weight space.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodMatrix {
    rows: Vec<Vec<usize>>,
}

impl NeighborhoodMatrix {
    /// Builds `min(size, N)`-nearest lists. Each list starts with its own index,
    /// followed by the rest by ascending distance, ties to the lower index.
    pub fn build<T, W>(weights: &[W], size: usize) -> Self
    where
        T: Scalar,
        W: AsRef<[T]>,
    {
        let n = weights.len();
        let t = size.max(1).min(n);
        let rows = (0..n)
            .map(|i| {
                let wi = weights[i].as_ref();
                let mut others: Vec<(T, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d = wi
                            .iter()
                            .zip(weights[j].as_ref())
                            .map(|(&a, &b)| (a - b) * (a - b))
                            .fold(T::zero(), |acc, v| acc + v);
                        (d, j)
                    })
                    .collect();
                others.sort_by(|a, b| cmp_finite(&a.0, &b.0).then(a.1.cmp(&b.1)));
                std::iter::once(i)
                    .chain(others.into_iter().map(|(_, j)| j))
                    .take(t)
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.rows[index]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
}
