//! ZDT and DTLZ benchmark families with analytic Pareto-front samplers.
//!
//! ZDT problems have two objectives and 30 variables; DTLZ problems have three
//! objectives and 10 variables, so `k = n - m + 1 = 8` distance variables. Both use
//! the originally published definitions, with `x` indexed from 0:
//!
//! | problem | `f1` | `g` | `f2 = g·h` with `h` |
//! |---------|------|-----|---------------------|
//! | ZDT1 | `x0` | `1 + 9·Σx_i/(n-1)` | `1 - √(f1/g)` |
//! | ZDT2 | `x0` | as ZDT1 | `1 - (f1/g)²` |
//! | ZDT3 | `x0` | as ZDT1 | `1 - √(f1/g) - (f1/g)·sin(10π·f1)` |
//! | ZDT4 | `x0` | `1 + 10(n-1) + Σ(x_i² - 10cos(4πx_i))`, `x_i ∈ [-5,5]` | as ZDT1 |
//! | ZDT6 | `1 - exp(-4x0)·sin⁶(6πx0)` | `1 + 9·(Σx_i/(n-1))^0.25` | as ZDT2 |
//!
//! DTLZ1 and DTLZ3 use the multimodal `g = 100(k + Σ((x_i-0.5)² - cos(20π(x_i-0.5))))`,
//! DTLZ2/4/5 use `g = Σ(x_i-0.5)²`, DTLZ6 uses `g = Σx_i^0.1`. DTLZ1 maps onto the
//! linear front `Σf = 0.5`; DTLZ2–DTLZ4 onto the unit sphere with angles `x_j·π/2`
//! (DTLZ4 with `x_j^100`); DTLZ5/6 collapse the inner angles to
//! `π/(4(1+g))·(1 + 2g·x_j)`. DTLZ7 sets `f_i = x_i`, `g = 1 + 9/k·Σx_i` and
//! `f_m = (1+g)·(m - Σ f_i/(1+g)·(1 + sin(3πf_i)))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomposition::sld_points;
use crate::error::{Error, Result};
use crate::pareto::{nondominated_filter, Bounds, ObjectiveVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Dtlz5,
    Dtlz6,
    Dtlz7,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Zdt1,
        Family::Zdt2,
        Family::Zdt3,
        Family::Zdt4,
        Family::Zdt6,
        Family::Dtlz1,
        Family::Dtlz2,
        Family::Dtlz3,
        Family::Dtlz4,
        Family::Dtlz5,
        Family::Dtlz6,
        Family::Dtlz7,
    ];

    pub const ZDT: [Family; 5] = [
        Family::Zdt1,
        Family::Zdt2,
        Family::Zdt3,
        Family::Zdt4,
        Family::Zdt6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Zdt1 => "zdt1",
            Family::Zdt2 => "zdt2",
            Family::Zdt3 => "zdt3",
            Family::Zdt4 => "zdt4",
            Family::Zdt6 => "zdt6",
            Family::Dtlz1 => "dtlz1",
            Family::Dtlz2 => "dtlz2",
            Family::Dtlz3 => "dtlz3",
            Family::Dtlz4 => "dtlz4",
            Family::Dtlz5 => "dtlz5",
            Family::Dtlz6 => "dtlz6",
            Family::Dtlz7 => "dtlz7",
        }
    }

    pub fn is_zdt(self) -> bool {
        Self::ZDT.contains(&self)
    }

    pub fn num_objectives(self) -> usize {
        if self.is_zdt() {
            2
        } else {
            3
        }
    }

    pub fn default_dimension(self) -> usize {
        if self.is_zdt() {
            30
        } else {
            10
        }
    }

    /// Position of this family in [`Family::ALL`].
    pub fn ordinal(self) -> usize {
        Self::ALL.iter().position(|f| *f == self).unwrap_or(0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown problem `{s}`")))
    }
}

/// A multi-objective minimization problem over a box-bounded decision space.
pub trait Problem<T: Scalar>: Send + Sync {
    fn name(&self) -> String;

    fn num_objectives(&self) -> usize;

    fn bounds(&self) -> &Bounds<T>;

    fn dimension(&self) -> usize {
        self.bounds().dimension()
    }

    /// Objective vector of `x`; fails on wrong length or out-of-box coordinates.
    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>>;
}

/// One benchmark instance: family, dimension, objective count and box.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<T> {
    family: Family,
    n: usize,
    m: usize,
    bounds: Bounds<T>,
}

impl<T: Scalar> ProblemSpec<T> {
    /// The instance used in the experiments: ZDT n=30, m=2; DTLZ n=10, m=3.
    pub fn new(family: Family) -> Self {
        Self::with_dimension(family, family.default_dimension())
            .expect("default dimension is valid")
    }

    pub fn with_dimension(family: Family, n: usize) -> Result<Self> {
        let m = family.num_objectives();
        if n < m {
            return Err(Error::InvalidParameter(format!(
                "{family} needs at least {m} variables, got {n}"
            )));
        }
        let bounds = match family {
            Family::Zdt4 => {
                let mut low = vec![T::lit(-5.0); n];
                let mut high = vec![T::lit(5.0); n];
                low[0] = T::zero();
                high[0] = T::one();
                Bounds::new(low, high)?
            }
            _ => Bounds::uniform(n, T::zero(), T::one())?,
        };
        Ok(Self {
            family,
            n,
            m,
            bounds,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Per-objective `(min, max)` of the analytic front, from a 1000-point sample.
    pub fn front_bounds(&self) -> Vec<(T, T)> {
        let sample = self.true_front_sample(1000).expect("front sample");
        (0..self.m)
            .map(|k| {
                sample.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| {
                    (lo.min(p[k]), hi.max(p[k]))
                })
            })
            .collect()
    }

    /// `count` points of the Pareto front, evenly spread along its natural
    /// parameterization. Discontinuous fronts are sampled densely, filtered to
    /// their non-dominated part and thinned.
    pub fn true_front_sample(&self, count: usize) -> Result<Vec<ObjectiveVector<T>>> {
        if count < self.m {
            return Err(Error::InvalidParameter(format!(
                "front sample needs at least {} points",
                self.m
            )));
        }
        let raw: Vec<Vec<T>> = match self.family {
            Family::Zdt1 | Family::Zdt4 => linspace(T::zero(), T::one(), count)
                .map(|f1| vec![f1, T::one() - f1.sqrt()])
                .collect(),
            Family::Zdt2 => linspace(T::zero(), T::one(), count)
                .map(|f1| vec![f1, T::one() - f1 * f1])
                .collect(),
            Family::Zdt6 => linspace(zdt6_min_f1::<T>(), T::one(), count)
                .map(|f1| vec![f1, T::one() - f1 * f1])
                .collect(),
            Family::Zdt3 => {
                let dense: Vec<Vec<T>> = linspace(T::zero(), T::one(), (20 * count).max(10_000))
                    .map(|f1| {
                        let ten_pi = T::lit(10.0) * T::PI();
                        vec![f1, T::one() - f1.sqrt() - f1 * (ten_pi * f1).sin()]
                    })
                    .collect();
                thin(nondominated_filter(&dense)?, count)
            }
            Family::Dtlz1 => simplex_cover::<T>(count)
                .into_iter()
                .map(|p| p.into_iter().map(|v| v * T::lit(0.5)).collect())
                .collect(),
            Family::Dtlz2 | Family::Dtlz3 | Family::Dtlz4 => simplex_cover::<T>(count)
                .into_iter()
                .map(|p| {
                    let norm = p.iter().map(|v| *v * *v).sum::<T>().sqrt();
                    p.into_iter().map(|v| v / norm).collect()
                })
                .collect(),
            Family::Dtlz5 | Family::Dtlz6 => {
                let quarter = T::FRAC_PI_4();
                linspace(T::zero(), T::FRAC_PI_2(), count)
                    .map(|theta| {
                        vec![
                            theta.cos() * quarter.cos(),
                            theta.cos() * quarter.sin(),
                            theta.sin(),
                        ]
                    })
                    .collect()
            }
            Family::Dtlz7 => {
                let side = ((20 * count) as f64).sqrt().ceil().max(100.0) as usize;
                let axis: Vec<T> = linspace(T::zero(), T::one(), side).collect();
                let mut dense = Vec::with_capacity(side * side);
                for &a in &axis {
                    for &b in &axis {
                        dense.push(vec![a, b, dtlz7_last(&[a, b], T::one(), 3)]);
                    }
                }
                thin(nondominated_filter(&dense)?, count)
            }
        };
        raw.into_iter().map(ObjectiveVector::new).collect()
    }

    fn evaluate_unchecked(&self, x: &[T]) -> Vec<T> {
        let n = self.n;
        let m = self.m;
        let one = T::one();
        let pi = T::PI();
        match self.family {
            Family::Zdt1 | Family::Zdt2 | Family::Zdt3 | Family::Zdt4 | Family::Zdt6 => {
                let rest = &x[1..];
                let n1 = T::from_count(n - 1);
                let f1 = match self.family {
                    Family::Zdt6 => one - (T::lit(-4.0) * x[0]).exp() * (T::lit(6.0) * pi * x[0]).sin().powi(6),
                    _ => x[0],
                };
                let g = match self.family {
                    Family::Zdt4 => {
                        one + T::lit(10.0) * n1
                            + rest
                                .iter()
                                .map(|&v| v * v - T::lit(10.0) * (T::lit(4.0) * pi * v).cos())
                                .sum::<T>()
                    }
                    Family::Zdt6 => one + T::lit(9.0) * (rest.iter().copied().sum::<T>() / n1).powf(T::lit(0.25)),
                    _ => one + T::lit(9.0) * rest.iter().copied().sum::<T>() / n1,
                };
                let ratio = f1 / g;
                let h = match self.family {
                    Family::Zdt1 | Family::Zdt4 => one - ratio.sqrt(),
                    Family::Zdt2 | Family::Zdt6 => one - ratio * ratio,
                    _ => one - ratio.sqrt() - ratio * (T::lit(10.0) * pi * f1).sin(),
                };
                vec![f1, g * h]
            }
            Family::Dtlz1 | Family::Dtlz3 => {
                let (pos, dist) = x.split_at(m - 1);
                let g = multimodal_g(dist);
                if self.family == Family::Dtlz1 {
                    linear_front(pos, T::lit(0.5) * (one + g))
                } else {
                    let angles: Vec<T> = pos.iter().map(|&v| v * T::FRAC_PI_2()).collect();
                    spherical_front(&angles, one + g)
                }
            }
            Family::Dtlz2 | Family::Dtlz4 => {
                let (pos, dist) = x.split_at(m - 1);
                let g = sphere_g(dist);
                let alpha = if self.family == Family::Dtlz4 { 100 } else { 1 };
                let angles: Vec<T> = pos
                    .iter()
                    .map(|&v| v.powi(alpha) * T::FRAC_PI_2())
                    .collect();
                spherical_front(&angles, one + g)
            }
            Family::Dtlz5 | Family::Dtlz6 => {
                let (pos, dist) = x.split_at(m - 1);
                let g = if self.family == Family::Dtlz5 {
                    sphere_g(dist)
                } else {
                    dist.iter().map(|&v| v.powf(T::lit(0.1))).sum()
                };
                let inner = pi / (T::lit(4.0) * (one + g));
                let angles: Vec<T> = pos
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        if j == 0 {
                            v * T::FRAC_PI_2()
                        } else {
                            inner * (one + T::lit(2.0) * g * v)
                        }
                    })
                    .collect();
                spherical_front(&angles, one + g)
            }
            Family::Dtlz7 => {
                let (pos, dist) = x.split_at(m - 1);
                let k = T::from_count(dist.len());
                let g = one + T::lit(9.0) / k * dist.iter().copied().sum::<T>();
                let mut f = pos.to_vec();
                f.push(dtlz7_last(pos, g, m));
                f
            }
        }
    }
}

impl<T: Scalar> Problem<T> for ProblemSpec<T> {
    fn name(&self) -> String {
        self.family.name().to_string()
    }

    fn num_objectives(&self) -> usize {
        self.m
    }

    fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>> {
        self.bounds.check(x)?;
        ObjectiveVector::new(self.evaluate_unchecked(x))
    }
}

fn multimodal_g<T: Scalar>(dist: &[T]) -> T {
    let half = T::lit(0.5);
    let k = T::from_count(dist.len());
    T::lit(100.0)
        * (k + dist
            .iter()
            .map(|&v| (v - half) * (v - half) - (T::lit(20.0) * T::PI() * (v - half)).cos())
            .sum::<T>())
}

fn sphere_g<T: Scalar>(dist: &[T]) -> T {
    let half = T::lit(0.5);
    dist.iter().map(|&v| (v - half) * (v - half)).sum()
}

/// `f_i = scale·Π_{j<m-1-i} x_j·(1 - x_{m-1-i})`, last factor omitted for `i = 0`.
fn linear_front<T: Scalar>(pos: &[T], scale: T) -> Vec<T> {
    let m = pos.len() + 1;
    (0..m)
        .map(|i| {
            let upto = m - 1 - i;
            let mut v = scale;
            for &p in &pos[..upto] {
                v *= p;
            }
            if i > 0 {
                v *= T::one() - pos[upto];
            }
            v
        })
        .collect()
}

/// `f_i = radius·Π_{j<m-1-i} cos θ_j·sin θ_{m-1-i}`, last factor omitted for `i = 0`.
fn spherical_front<T: Scalar>(angles: &[T], radius: T) -> Vec<T> {
    let m = angles.len() + 1;
    (0..m)
        .map(|i| {
            let upto = m - 1 - i;
            let mut v = radius;
            for &a in &angles[..upto] {
                v *= a.cos();
            }
            if i > 0 {
                v *= angles[upto].sin();
            }
            v
        })
        .collect()
}

/// Last DTLZ7 objective for leading objectives `f` and distance term `g`.
fn dtlz7_last<T: Scalar>(f: &[T], g: T, m: usize) -> T {
    let one = T::one();
    let h = T::from_count(m)
        - f.iter()
            .map(|&fi| fi / (one + g) * (one + (T::lit(3.0) * T::PI() * fi).sin()))
            .sum::<T>();
    (one + g) * h
}

fn linspace<T: Scalar>(start: T, end: T, count: usize) -> impl Iterator<Item = T> {
    let steps = T::from_count(count.saturating_sub(1).max(1));
    (0..count).map(move |i| {
        if i + 1 == count && count > 1 {
            end
        } else {
            start + (end - start) * T::from_count(i) / steps
        }
    })
}

/// Smallest simplex lattice with at least `count` points, thinned to `count`.
fn simplex_cover<T: Scalar>(count: usize) -> Vec<Vec<T>> {
    let h = (1..)
        .find(|&h| crate::decomposition::sld_count(3, h) >= count)
        .expect("lattice large enough");
    thin(sld_points::<T>(3, h).expect("valid lattice"), count)
}

/// Keeps `count` evenly spaced items, always including both ends.
fn thin<P>(items: Vec<P>, count: usize) -> Vec<P> {
    let len = items.len();
    if len <= count {
        return items;
    }
    if count == 1 {
        return items.into_iter().take(1).collect();
    }
    let mut keep = vec![false; len];
    for i in 0..count {
        let idx = ((i as f64) * (len - 1) as f64 / (count - 1) as f64).round() as usize;
        keep[idx] = true;
    }
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Minimum of ZDT6's `f1` over `x0 ∈ [0, 1]`: the left end of its front.
fn zdt6_min_f1<T: Scalar>() -> T {
    let f = |x: T| T::one() - (T::lit(-4.0) * x).exp() * (T::lit(6.0) * T::PI() * x).sin().powi(6);
    // unimodal on the first hump of sin(6πx)
    let (mut lo, mut hi) = (T::zero(), T::lit(1.0 / 6.0));
    for _ in 0..200 {
        let a = lo + (hi - lo) / T::lit(3.0);
        let b = hi - (hi - lo) / T::lit(3.0);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f((lo + hi) / T::lit(2.0))
}
