//! Consolidation Ratio and the utility thresholds that decide when the number
//! of weight vectors changes.
//!
//! With `A_i` the non-dominated archive at generation `i` and gap `Δ`:
//!
//! ```text
//! CR_i     = |{a ∈ A_{i-Δ} : no b ∈ A_i dominates a}| / |A_i|
//! U_i      = (CR_i − CR_{i−Δ}) / Δ
//! U*_i     = (U_i + U_{i−Δ}) / 2
//! U_init   = CR_G / G        (G: first generation with CR > 0.5)
//! U_thresh = U_init / F
//! ```

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::archive::ArchiveSnapshot;
use crate::error::{Error, Result};
use crate::pareto::dominates_unchecked;
use crate::scalar::Scalar;

/// CR level above which the search counts as consolidating.
pub const CONSOLIDATION_LEVEL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagnationParams<T> {
    /// Generation gap `Δ`.
    pub generation_gap: usize,
    /// User-controlled fraction `F` dividing `U_init`.
    pub fraction: T,
}

impl<T: Scalar> Default for StagnationParams<T> {
    fn default() -> Self {
        Self {
            generation_gap: 10,
            fraction: T::lit(2.0),
        }
    }
}

impl<T: Scalar> StagnationParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.generation_gap == 0 {
            return Err(Error::InvalidParameter("generation_gap must be >= 1".into()));
        }
        if !(self.fraction > T::zero()) {
            return Err(Error::InvalidParameter("fraction must be > 0".into()));
        }
        Ok(())
    }
}

/// Fraction of `past` left undominated by `now`, relative to `|now|`.
pub fn consolidation_ratio<T, P, Q>(now: &[P], past: &[Q]) -> Result<T>
where
    T: Scalar,
    P: AsRef<[T]>,
    Q: AsRef<[T]>,
{
    if now.is_empty() {
        return Err(Error::EmptyInput("current archive"));
    }
    let m = now[0].as_ref().len();
    if let Some(bad) = now
        .iter()
        .map(|p| p.as_ref().len())
        .chain(past.iter().map(|q| q.as_ref().len()))
        .find(|&len| len != m)
    {
        return Err(Error::DimensionMismatch { expected: m, found: bad });
    }
    let survivors = past
        .iter()
        .filter(|a| !now.iter().any(|b| dominates_unchecked(b.as_ref(), a.as_ref())))
        .count();
    Ok(T::from_count(survivors) / T::from_count(now.len()))
}

/// `U_i` and, once `U_{i−Δ}` exists, `U*_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Utility<T> {
    pub u: T,
    pub u_star: Option<T>,
}

/// Per-run CR history and utility thresholds.
#[derive(Debug, Clone)]
pub struct CrTracker<T> {
    params: StagnationParams<T>,
    snapshots: VecDeque<(usize, ArchiveSnapshot<T>)>,
    cr: Vec<Option<T>>,
    u: Vec<Option<T>>,
    u_star: Vec<Option<T>>,
    u_init: Option<T>,
    u_thresh: Option<T>,
    trigger_generation: Option<usize>,
}

fn put<T: Copy>(history: &mut Vec<Option<T>>, gen: usize, value: T) {
    if history.len() <= gen {
        history.resize(gen + 1, None);
    }
    history[gen] = Some(value);
}

fn get<T: Copy>(history: &[Option<T>], gen: usize) -> Option<T> {
    history.get(gen).copied().flatten()
}

impl<T: Scalar> CrTracker<T> {
    pub fn new(params: StagnationParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            snapshots: VecDeque::new(),
            cr: Vec::new(),
            u: Vec::new(),
            u_star: Vec::new(),
            u_init: None,
            u_thresh: None,
            trigger_generation: None,
        })
    }

    pub fn params(&self) -> &StagnationParams<T> {
        &self.params
    }

    pub fn generation_gap(&self) -> usize {
        self.params.generation_gap
    }

    /// Stores the archive snapshot of generation `gen` and, when the snapshot of
    /// `gen − Δ` is still held, records and returns `CR_gen`.
    ///
    /// Snapshots must come from one [`UnboundedArchive`](crate::UnboundedArchive).
    /// Its entries leave only when a dominating point arrives, so a past entry is
    /// undominated by the current archive exactly when it is still present and
    /// CR reduces to counting surviving entry ids.
    pub fn observe(&mut self, gen: usize, snapshot: ArchiveSnapshot<T>) -> Option<T> {
        let delta = self.params.generation_gap;
        let cr = gen.checked_sub(delta).and_then(|past_gen| {
            let (_, past) = self.snapshots.iter().find(|(g, _)| *g == past_gen)?;
            if snapshot.is_empty() {
                return None;
            }
            let survivors = past.survivors_in(&snapshot);
            Some(T::from_count(survivors) / T::from_count(snapshot.len()))
        });
        self.snapshots.push_back((gen, snapshot));
        while self.snapshots.len() > delta + 1 {
            self.snapshots.pop_front();
        }
        if let Some(v) = cr {
            self.record_cr(gen, v);
        }
        cr
    }

    /// Snapshot held for generation `gen`, if still within the last `Δ + 1`.
    pub fn snapshot(&self, gen: usize) -> Option<&ArchiveSnapshot<T>> {
        self.snapshots.iter().find(|(g, _)| *g == gen).map(|(_, s)| s)
    }

    pub fn record_cr(&mut self, gen: usize, value: T) {
        put(&mut self.cr, gen, value);
    }

    pub fn record_utility(&mut self, gen: usize, value: T) {
        put(&mut self.u, gen, value);
    }

    pub fn cr(&self, gen: usize) -> Option<T> {
        get(&self.cr, gen)
    }

    pub fn utility(&self, gen: usize) -> Option<T> {
        get(&self.u, gen)
    }

    pub fn average_utility(&self, gen: usize) -> Option<T> {
        get(&self.u_star, gen)
    }

    /// Computes and records `U_gen` and, when `U_{gen−Δ}` is known, `U*_gen`.
    pub fn utility_step(&mut self, gen: usize) -> Result<Utility<T>> {
        let delta = self.params.generation_gap;
        let past = gen
            .checked_sub(delta)
            .ok_or(Error::NotReady("generation earlier than the gap"))?;
        let (now_cr, past_cr) = match (self.cr(gen), self.cr(past)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotReady("CR history does not span the gap")),
        };
        let u = (now_cr - past_cr) / T::from_count(delta);
        self.record_utility(gen, u);
        let u_star = self.utility(past).map(|prev| (u + prev) / T::lit(2.0));
        if let Some(v) = u_star {
            put(&mut self.u_star, gen, v);
        }
        Ok(Utility { u, u_star })
    }

    /// Freezes `U_init = cr / G` and `U_thresh = U_init / F`. Only once per run.
    pub fn init_thresholds(&mut self, gen: usize, cr: T) -> Result<(T, T)> {
        if self.u_init.is_some() {
            return Err(Error::ThresholdsAlreadySet);
        }
        if gen == 0 {
            return Err(Error::InvalidParameter("threshold generation must be >= 1".into()));
        }
        if !(cr > T::lit(CONSOLIDATION_LEVEL)) {
            return Err(Error::InvalidParameter(format!(
                "thresholds need CR > {CONSOLIDATION_LEVEL}, got {cr}"
            )));
        }
        let u_init = cr / T::from_count(gen);
        let u_thresh = u_init / self.params.fraction;
        self.u_init = Some(u_init);
        self.u_thresh = Some(u_thresh);
        self.trigger_generation = Some(gen);
        Ok((u_init, u_thresh))
    }

    pub fn u_init(&self) -> Option<T> {
        self.u_init
    }

    pub fn u_thresh(&self) -> Option<T> {
        self.u_thresh
    }

    pub fn trigger_generation(&self) -> Option<usize> {
        self.trigger_generation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archive::UnboundedArchive;
    use crate::pareto::{DecisionVector, ObjectiveVector};

    fn tracker(delta: usize, fraction: f64) -> CrTracker<f64> {
        CrTracker::new(StagnationParams {
            generation_gap: delta,
            fraction,
        })
        .unwrap()
    }

    #[test]
    fn cr_examples() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(consolidation_ratio::<f64, _, _>(&a, &a).unwrap(), 1.0);

        let past = vec![vec![1.0, 1.0]];
        let now = vec![vec![0.5, 0.5], vec![0.2, 0.9]];
        assert_eq!(consolidation_ratio::<f64, _, _>(&now, &past).unwrap(), 0.0);

        let past = vec![vec![1.0, 1.0], vec![0.0, 2.0]];
        let now = vec![vec![0.5, 0.5], vec![0.0, 2.0], vec![2.0, 0.0]];
        assert_eq!(consolidation_ratio::<f64, _, _>(&now, &past).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn cr_empty_current_is_error() {
        let empty: Vec<Vec<f64>> = vec![];
        assert!(consolidation_ratio::<f64, _, _>(&empty, &[vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn utility_examples() {
        let mut t = tracker(10, 2.0);
        t.record_cr(10, 0.6);
        t.record_cr(20, 0.8);
        let u = t.utility_step(20).unwrap();
        assert!((u.u - 0.02).abs() < 1e-15);
        assert_eq!(u.u_star, None);

        let mut t = tracker(10, 2.0);
        t.record_cr(10, 0.6);
        t.record_cr(20, 0.8);
        t.record_utility(10, 0.01);
        let u = t.utility_step(20).unwrap();
        assert!((u.u_star.unwrap() - 0.015).abs() < 1e-15);
        assert_eq!(t.average_utility(20), u.u_star);
    }

    #[test]
    fn constant_cr_gives_zero_utility() {
        let mut t = tracker(5, 2.0);
        for g in (0..=20).step_by(5) {
            t.record_cr(g, 0.7);
        }
        for g in [5, 10, 15, 20] {
            t.utility_step(g).unwrap();
        }
        let u = t.utility_step(20).unwrap();
        assert_eq!(u.u, 0.0);
        assert_eq!(u.u_star, Some(0.0));
    }

    #[test]
    fn utility_not_ready() {
        let mut t = tracker(10, 2.0);
        assert!(matches!(t.utility_step(5), Err(Error::NotReady(_))));
        t.record_cr(20, 0.5);
        assert!(matches!(t.utility_step(20), Err(Error::NotReady(_))));
    }

    #[test]
    fn threshold_examples() {
        let mut t = tracker(10, 2.0);
        let (ui, ut) = t.init_thresholds(25, 0.55).unwrap();
        assert!((ui - 0.022).abs() < 1e-15);
        assert!((ut - 0.011).abs() < 1e-15);
        assert_eq!(t.init_thresholds(30, 0.9), Err(Error::ThresholdsAlreadySet));
        assert_eq!(t.u_thresh(), Some(ut));
        assert_eq!(t.trigger_generation(), Some(25));

        let mut t = tracker(10, 2.0);
        assert_eq!(t.init_thresholds(1, 1.0).unwrap(), (1.0, 0.5));

        let mut t = tracker(10, 1.0);
        let (ui, ut) = t.init_thresholds(40, 0.8).unwrap();
        assert_eq!(ui, ut);
    }

    #[test]
    fn threshold_requires_consolidation() {
        let mut t = tracker(10, 2.0);
        assert!(t.init_thresholds(10, 0.5).is_err());
        assert!(t.init_thresholds(0, 0.9).is_err());
        assert_eq!(t.u_init(), None);
    }

    #[test]
    fn observe_matches_dominance_count() {
        let mut archive = UnboundedArchive::new();
        let mut t = tracker(2, 2.0);
        let steps: [&[[f64; 2]]; 5] = [
            &[[1.0, 1.0], [0.0, 2.0]],
            &[[2.0, 0.0]],
            &[[0.5, 0.5]],
            &[[0.4, 0.4], [0.0, 1.5]],
            &[[3.0, -1.0]],
        ];
        let mut history = Vec::new();
        for (gen, pts) in steps.iter().enumerate() {
            for p in *pts {
                archive.insert(DecisionVector::new(vec![]), ObjectiveVector::new(p.to_vec()).unwrap());
            }
            let snap = archive.snapshot();
            history.push(snap.to_vectors());
            let cr = t.observe(gen, snap);
            if gen >= 2 {
                let expected: f64 = consolidation_ratio(&history[gen], &history[gen - 2]).unwrap();
                assert_eq!(cr, Some(expected), "generation {gen}");
            } else {
                assert_eq!(cr, None);
            }
        }
        assert!(t.snapshot(1).is_none());
        assert!(t.snapshot(2).is_some());
    }
}
