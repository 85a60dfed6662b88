//! MOEA/D-DE reproduction: mating scope, DE/rand/1 with polynomial mutation,
//! bound repair, and bounded neighborhood replacement.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{tchebycheff, NeighborhoodMatrix};
use crate::error::{Error, Result};
use crate::pareto::{Bounds, DecisionVector, Individual, ObjectiveVector};
use crate::scalar::Scalar;

/// Operator settings. `mutation_probability = None` means `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationParams<T> {
    /// DE scale factor `F`.
    pub scale_factor: T,
    /// DE crossover rate.
    pub crossover_rate: T,
    /// Polynomial mutation distribution index.
    pub distribution_index: T,
    pub mutation_probability: Option<T>,
    /// Probability of mating inside the neighborhood rather than the whole population.
    pub neighborhood_probability: T,
    /// Maximum number of solutions one offspring may replace.
    pub max_replacements: usize,
}

impl<T: Scalar> Default for VariationParams<T> {
    fn default() -> Self {
        Self {
            scale_factor: T::lit(0.5),
            crossover_rate: T::one(),
            distribution_index: T::lit(20.0),
            mutation_probability: None,
            neighborhood_probability: T::lit(0.9),
            max_replacements: 2,
        }
    }
}

impl<T: Scalar> VariationParams<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !(self.scale_factor > T::zero()) {
            return Err(Error::InvalidParameter("scale_factor must be > 0".into()));
        }
        if !unit(self.crossover_rate) {
            return Err(Error::InvalidParameter("crossover_rate must be in [0, 1]".into()));
        }
        if !unit(self.neighborhood_probability) {
            return Err(Error::InvalidParameter(
                "neighborhood_probability must be in [0, 1]".into(),
            ));
        }
        if let Some(p) = self.mutation_probability {
            if !unit(p) {
                return Err(Error::InvalidParameter(
                    "mutation_probability must be in [0, 1]".into(),
                ));
            }
        }
        if !(self.distribution_index >= T::zero()) {
            return Err(Error::InvalidParameter("distribution_index must be >= 0".into()));
        }
        if self.max_replacements == 0 {
            return Err(Error::InvalidParameter("max_replacements must be >= 1".into()));
        }
        Ok(())
    }

    pub fn mutation_probability_for(&self, n: usize) -> T {
        self.mutation_probability
            .unwrap_or_else(|| T::one() / T::from_count(n.max(1)))
    }
}

/// Parent index pool for sub-problem `index`: its neighborhood with probability
/// `delta`, otherwise the whole population `0..n`.
pub fn select_mating_pool<T: Scalar, R: Rng + ?Sized>(
    index: usize,
    neighbors: &NeighborhoodMatrix,
    n: usize,
    delta: T,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "DE mating needs at least 3 individuals, population has {n}"
        )));
    }
    if T::lit(rng.gen::<f64>()) < delta {
        Ok(neighbors.neighbors(index).to_vec())
    } else {
        Ok((0..n).collect())
    }
}

/// Clips every coordinate into its box.
pub fn repair_bounds<T: Scalar>(x: &DecisionVector<T>, bounds: &Bounds<T>) -> DecisionVector<T> {
    let mut out = x.clone();
    clip_in_place(out.values_mut(), bounds);
    out
}

fn clip_in_place<T: Scalar>(x: &mut [T], bounds: &Bounds<T>) {
    for ((v, &lo), &hi) in x.iter_mut().zip(bounds.low()).zip(bounds.high()) {
        *v = v.max(lo).min(hi);
    }
}

/// Deb's bounded polynomial mutation, applied to each gene with probability `p_m`.
pub fn polynomial_mutation<T: Scalar, R: Rng + ?Sized>(
    x: &mut [T],
    bounds: &Bounds<T>,
    distribution_index: T,
    p_m: T,
    rng: &mut R,
) {
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let exponent = one / (distribution_index + one);
    for (j, v) in x.iter_mut().enumerate() {
        if !(T::lit(rng.gen::<f64>()) < p_m) {
            continue;
        }
        let (lo, hi) = (bounds.low()[j], bounds.high()[j]);
        let range = hi - lo;
        if !(range > T::zero()) {
            continue;
        }
        let y = *v;
        let delta1 = (y - lo) / range;
        let delta2 = (hi - y) / range;
        let r = T::lit(rng.gen::<f64>());
        let deltaq = if r <= half {
            let xy = one - delta1;
            let val = two * r + (one - two * r) * xy.powf(distribution_index + one);
            val.powf(exponent) - one
        } else {
            let xy = one - delta2;
            let val = two * (one - r) + two * (r - half) * xy.powf(distribution_index + one);
            one - val.powf(exponent)
        };
        *v = (y + deltaq * range).max(lo).min(hi);
    }
}

/// DE/rand/1/bin offspring followed by polynomial mutation and bound repair.
///
/// Gene `j` becomes `r1_j + F·(r2_j − r3_j)` with probability `crossover_rate`
/// (always for one randomly chosen gene), otherwise it copies `target_j`. The DE
/// result is clipped before mutation so the mutation sees an in-box value.
pub fn de_offspring<T: Scalar, R: Rng + ?Sized>(
    target: &[T],
    r1: &[T],
    r2: &[T],
    r3: &[T],
    params: &VariationParams<T>,
    bounds: &Bounds<T>,
    rng: &mut R,
) -> DecisionVector<T> {
    let n = target.len();
    let forced = rng.gen_range(0..n.max(1));
    let mut child: Vec<T> = (0..n)
        .map(|j| {
            if j == forced || T::lit(rng.gen::<f64>()) < params.crossover_rate {
                r1[j] + params.scale_factor * (r2[j] - r3[j])
            } else {
                target[j]
            }
        })
        .collect();
    clip_in_place(&mut child, bounds);
    let p_m = params.mutation_probability_for(n);
    if p_m > T::zero() {
        polynomial_mutation(&mut child, bounds, params.distribution_index, p_m, rng);
    }
    clip_in_place(&mut child, bounds);
    DecisionVector::new(child)
}

/// Offers `(x, f)` to the sub-problems in `pool`, visited in random order; each
/// one whose scalarized value strictly improves is overwritten, up to
/// `max_replacements` times. Returns how many were replaced.
pub fn neighborhood_replacement<T: Scalar, R: Rng + ?Sized>(
    x: &DecisionVector<T>,
    f: &ObjectiveVector<T>,
    pool: &[usize],
    pop: &mut [Individual<T>],
    ideal: &[T],
    max_replacements: usize,
    rng: &mut R,
) -> usize {
    let mut order = pool.to_vec();
    order.shuffle(rng);
    let mut replaced = 0;
    for k in order {
        if replaced >= max_replacements {
            break;
        }
        let ind = &mut pop[k];
        let new_value = tchebycheff(f, &ind.weight, ideal);
        let old_value = tchebycheff(&ind.f, &ind.weight, ideal);
        if new_value < old_value {
            ind.x = x.clone();
            ind.f = f.clone();
            replaced += 1;
        }
    }
    replaced
}
