//! Objective/decision value types and Pareto dominance for minimization.

use std::ops::Deref;

use crate::decomposition::WeightVector;
use crate::error::{Error, Result};
use crate::scalar::{cmp_lex, Scalar};

/// Image of a decision vector under the objective functions. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector<T>(Vec<T>);

impl<T: Scalar> ObjectiveVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("objective vector"));
        }
        Ok(Self(values))
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for ObjectiveVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> AsRef<[T]> for ObjectiveVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

/// A point in decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector<T>(Vec<T>);

impl<T: Scalar> DecisionVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for DecisionVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> AsRef<[T]> for DecisionVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

/// Per-coordinate box `[low_i, high_i]` of a decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    low: Vec<T>,
    high: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(low: Vec<T>, high: Vec<T>) -> Result<Self> {
        if low.len() != high.len() {
            return Err(Error::DimensionMismatch {
                expected: low.len(),
                found: high.len(),
            });
        }
        if low.iter().zip(&high).any(|(l, h)| !(l <= h)) {
            return Err(Error::InvalidParameter("bounds require low <= high".into()));
        }
        Ok(Self { low, high })
    }

    /// Same `[low, high]` interval for all `n` coordinates.
    pub fn uniform(n: usize, low: T, high: T) -> Result<Self> {
        Self::new(vec![low; n], vec![high; n])
    }

    pub fn dimension(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[T] {
        &self.low
    }

    pub fn high(&self) -> &[T] {
        &self.high
    }

    /// Validates length and box membership of `x`.
    pub fn check(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        for (index, ((&v, &l), &h)) in x.iter().zip(&self.low).zip(&self.high).enumerate() {
            if !(l <= v && v <= h) {
                return Err(Error::OutOfBounds {
                    index,
                    value: v.to_f64_lossy(),
                    low: l.to_f64_lossy(),
                    high: h.to_f64_lossy(),
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.check(x).is_ok()
    }
}

/// A sub-problem's current solution together with the weight vector defining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual<T> {
    pub x: DecisionVector<T>,
    pub f: ObjectiveVector<T>,
    pub weight: WeightVector<T>,
}

/// `true` iff `a` Pareto-dominates `b` under minimization.
pub fn dominates<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strictly = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Maximal mutually non-dominated subset of `points`, one copy per distinct vector,
/// in lexicographic order.
pub fn nondominated_filter<T, P>(points: &[P]) -> Result<Vec<P>>
where
    T: Scalar,
    P: AsRef<[T]> + Clone,
{
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let m = first.as_ref().len();
    if let Some(bad) = points.iter().find(|p| p.as_ref().len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.as_ref().len(),
        });
    }

    // After a lexicographic sort no point can be dominated by a later one, so each
    // point only needs checking against the survivors so far.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| cmp_lex(points[i].as_ref(), points[j].as_ref()));

    let mut kept: Vec<usize> = Vec::new();
    if m == 2 {
        let mut best_f2 = T::infinity();
        for &i in &order {
            let p = points[i].as_ref();
            if p[1] < best_f2 {
                kept.push(i);
                best_f2 = p[1];
            }
        }
    } else {
        for &i in &order {
            let p = points[i].as_ref();
            let covered = kept.iter().any(|&k| {
                let q = points[k].as_ref();
                q == p || dominates_unchecked(q, p)
            });
            if !covered {
                kept.push(i);
            }
        }
    }
    Ok(kept.into_iter().map(|i| points[i].clone()).collect())
}
