//! Where weight vectors are added or removed: sparsity levels, sparse vectors,
//! archive-driven and uniform additions, edge-preserving deletion, and the
//! periodic MOEA/D-AWA adjustment.

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::archive::UnboundedArchive;
use crate::decomposition::{tchebycheff, WeightVector};
use crate::error::{Error, Result};
use crate::pareto::Individual;
use crate::scalar::{cmp_finite, euclidean, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationParams<T> {
    /// Fraction of the current vector count changed per adaptation event.
    pub ratio: T,
    /// Offset keeping the sparse-vector reciprocals finite.
    pub epsilon: T,
    /// Fraction of sub-problems the AWA comparator relocates per adjustment.
    pub awa_rate_update: T,
    /// Fraction of the budget spent before the AWA comparator starts adjusting.
    pub awa_rate_evol: T,
    /// Generations between AWA adjustments.
    pub awa_period: usize,
}

impl<T: Scalar> Default for AdaptationParams<T> {
    fn default() -> Self {
        Self {
            ratio: T::lit(0.05),
            epsilon: T::lit(1e-6),
            awa_rate_update: T::lit(0.05),
            awa_rate_evol: T::lit(0.8),
            awa_period: 20,
        }
    }
}

impl<T: Scalar> AdaptationParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > T::zero() && self.ratio <= T::one()) {
            return Err(Error::InvalidParameter("ratio must be in (0, 1]".into()));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::InvalidParameter("epsilon must be > 0".into()));
        }
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(self.awa_rate_update) || !unit(self.awa_rate_evol) {
            return Err(Error::InvalidParameter("AWA rates must be in [0, 1]".into()));
        }
        if self.awa_period == 0 {
            return Err(Error::InvalidParameter("awa_period must be >= 1".into()));
        }
        Ok(())
    }

    /// `max(1, round(ratio·count))`.
    pub fn vectors_to_change(&self, count: usize) -> usize {
        let raw = (self.ratio * T::from_count(count)).round();
        raw.to_usize().unwrap_or(0).max(1)
    }
}

/// Sparsity level of every point: the product of the distances to its `m`
/// nearest other points (all of them when fewer than `m` exist).
pub fn sparsity_levels<T, P>(points: &[P], m: usize) -> Result<Vec<T>>
where
    T: Scalar,
    P: AsRef<[T]>,
{
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sparsity levels need at least 2 points, got {n}"
        )));
    }
    if m == 0 {
        return Err(Error::UnsupportedObjectives(0));
    }
    let dim = points[0].as_ref().len();
    if let Some(bad) = points.iter().find(|p| p.as_ref().len() != dim || dim == 0) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.as_ref().len(),
        });
    }
    let k = m.min(n - 1);

    // Sweep along the first coordinate: once the gap on that axis alone exceeds
    // the current k-th best distance, nothing further out can be nearer.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_finite(&points[a].as_ref()[0], &points[b].as_ref()[0]).then(a.cmp(&b)));

    let mut levels = vec![T::zero(); n];
    let mut best: Vec<T> = Vec::with_capacity(k + 1);
    for (pos, &i) in order.iter().enumerate() {
        let p = points[i].as_ref();
        best.clear();
        let consider = |j: usize, best: &mut Vec<T>| -> bool {
            let q = points[j].as_ref();
            let gap = (q[0] - p[0]).abs();
            if best.len() == k && gap > best[k - 1] {
                return false;
            }
            let d = euclidean(p, q);
            if best.len() < k || d < best[k - 1] {
                let at = best.partition_point(|v| *v <= d);
                best.insert(at, d);
                best.truncate(k);
            }
            true
        };
        for &j in &order[pos + 1..] {
            if !consider(j, &mut best) {
                break;
            }
        }
        for &j in order[..pos].iter().rev() {
            if !consider(j, &mut best) {
                break;
            }
        }
        levels[i] = best.iter().fold(T::one(), |acc, &d| acc * d);
    }
    Ok(levels)
}

/// Weight vector aimed at `f`: normalized reciprocals of `f_k − z_k + ε`.
pub fn sparse_vector<T: Scalar>(f: &[T], ideal: &[T], epsilon: T) -> Result<WeightVector<T>> {
    if f.len() != ideal.len() {
        return Err(Error::DimensionMismatch {
            expected: ideal.len(),
            found: f.len(),
        });
    }
    let reciprocals: Vec<T> = f
        .iter()
        .zip(ideal)
        .map(|(&fk, &zk)| T::one() / (fk - zk + epsilon))
        .collect();
    WeightVector::normalized(reciprocals)
}

/// Appends up to `nav` archive individuals, sparsest first, each paired with
/// its sparse vector. Sparsity is computed once; an entry is used at most once
/// per call. Returns the number added.
pub fn add_vectors_awa<T: Scalar>(
    archive: &UnboundedArchive<T>,
    pop: &mut Vec<Individual<T>>,
    nav: usize,
    ideal: &[T],
    params: &AdaptationParams<T>,
) -> Result<usize> {
    if nav == 0 {
        return Ok(0);
    }
    let entries = archive.entries();
    let objectives: Vec<&[T]> = entries.iter().map(|e| &e.f[..]).collect();
    let levels = sparsity_levels(&objectives, ideal.len())?;
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| cmp_finite(&levels[b], &levels[a]).then(a.cmp(&b)));
    let take = nav.min(entries.len());
    for &idx in &order[..take] {
        let e = &entries[idx];
        let weight = sparse_vector(&e.f, ideal, params.epsilon)?;
        pop.push(Individual {
            x: e.x.clone(),
            f: e.f.clone(),
            weight,
        });
    }
    Ok(take)
}

/// Random weight from `m` independent `(0, 1)` uniforms normalized by their sum.
/// Strictly positive, but not uniformly distributed on the simplex.
pub fn random_weight<T: Scalar, R: Rng + ?Sized>(m: usize, rng: &mut R) -> WeightVector<T> {
    let raw: Vec<T> = (0..m).map(|_| T::lit(rng.sample::<f64, _>(Open01))).collect();
    WeightVector::normalized(raw).expect("positive draws normalize")
}

/// Appends `nav` random weights, each paired with the archive individual that
/// minimizes its Tchebycheff value. Returns the number added.
pub fn add_vectors_uniform<T: Scalar, R: Rng + ?Sized>(
    archive: &UnboundedArchive<T>,
    pop: &mut Vec<Individual<T>>,
    nav: usize,
    ideal: &[T],
    rng: &mut R,
) -> Result<usize> {
    if nav == 0 {
        return Ok(0);
    }
    if archive.is_empty() {
        return Err(Error::EmptyInput("archive"));
    }
    for _ in 0..nav {
        let weight = random_weight(ideal.len(), rng);
        let best = best_for_weight(archive, &weight, ideal);
        pop.push(Individual {
            x: best.x.clone(),
            f: best.f.clone(),
            weight,
        });
    }
    Ok(nav)
}

fn best_for_weight<'a, T: Scalar>(
    archive: &'a UnboundedArchive<T>,
    weight: &[T],
    ideal: &[T],
) -> &'a crate::archive::ArchiveEntry<T> {
    let mut entries = archive.entries().iter();
    let first = entries.next().expect("non-empty archive");
    let mut best = (tchebycheff(&first.f, weight, ideal), first);
    for e in entries {
        let v = tchebycheff(&e.f, weight, ideal);
        if v < best.0 {
            best = (v, e);
        }
    }
    best.1
}

/// Removes up to `nav` uniformly chosen non-edge individuals; edge vectors are
/// never removed. Returns the number removed.
pub fn delete_vectors<T: Scalar, R: Rng + ?Sized>(
    pop: &mut Vec<Individual<T>>,
    nav: usize,
    rng: &mut R,
) -> usize {
    let mut removed = 0;
    while removed < nav {
        let candidates: Vec<usize> = pop
            .iter()
            .enumerate()
            .filter(|(_, ind)| !ind.weight.is_edge())
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let pick = candidates[rng.gen_range(0..candidates.len())];
        pop.remove(pick);
        removed += 1;
    }
    removed
}

/// One MOEA/D-AWA adjustment: drop the `⌈awa_rate_update·N⌉` most crowded
/// non-edge individuals (lowest sparsity within the population), then refill
/// the same number from the archive with [`add_vectors_awa`].
///
/// Returns the number relocated; the population size is unchanged.
pub fn awa_adjust<T: Scalar>(
    pop: &mut Vec<Individual<T>>,
    archive: &UnboundedArchive<T>,
    ideal: &[T],
    params: &AdaptationParams<T>,
) -> Result<usize> {
    let n = pop.len();
    let wanted = (params.awa_rate_update * T::from_count(n))
        .ceil()
        .to_usize()
        .unwrap_or(0);
    if wanted == 0 || n < 2 || archive.len() < 2 {
        return Ok(0);
    }
    let objectives: Vec<&[T]> = pop.iter().map(|ind| &ind.f[..]).collect();
    let levels = sparsity_levels(&objectives, ideal.len())?;
    let mut candidates: Vec<usize> = (0..n).filter(|&i| !pop[i].weight.is_edge()).collect();
    candidates.sort_by(|&a, &b| cmp_finite(&levels[a], &levels[b]).then(a.cmp(&b)));
    let count = wanted.min(candidates.len()).min(archive.len());
    let mut doomed = candidates[..count].to_vec();
    doomed.sort_unstable_by(|a, b| b.cmp(a));
    for i in doomed {
        pop.remove(i);
    }
    add_vectors_awa(archive, pop, count, ideal, params)
}
