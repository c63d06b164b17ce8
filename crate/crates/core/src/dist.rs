//! Distribution-valued data.
//!
//! A distribution enters the pattern languages through its alpha-cut
//! interval `]q(alpha), q(1-alpha)]` between two quantiles. Checking an
//! intersection or inclusion atom on that interval is the same as
//! comparing the cdf at the threshold against `alpha` or `1 - alpha`
//! (exactly for continuous cdfs, on the support grid for discrete ones),
//! so thresholds on probability mass and thresholds on values coincide.

use crate::bitset::BitSet;
use crate::encoding::ItemVocabulary;
use crate::error::{Error, Result};
use crate::interval::{Interval, ThresholdGrid};
use crate::pattern::{describe, Atom, Family, IntervalPattern, Language};

/// Standard normal cdf.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Standard normal quantile by bisection; `v` strictly inside ]0, 1[.
pub fn std_normal_quantile(v: f64) -> Result<f64> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::Invalid(format!("quantile level {v} outside ]0, 1[")));
    }
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if std_normal_cdf(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A cumulative distribution function `F(x) = P(X <= x)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cdf {
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Uniform mass over a finite multiset of points (kept sorted).
    Discrete {
        points: Vec<f64>,
    },
}

impl Cdf {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::Invalid(format!(
                "normal cdf needs finite mu and positive sigma, got N({mu},{sigma})"
            )));
        }
        Ok(Cdf::Normal { mu, sigma })
    }

    pub fn discrete(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Invalid(
                "discrete cdf needs a non-empty list of finite points".into(),
            ));
        }
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Cdf::Discrete { points })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Cdf::Normal { mu, sigma } => std_normal_cdf((x - mu) / sigma),
            Cdf::Discrete { points } => {
                let below = points.partition_point(|&p| p <= x);
                below as f64 / points.len() as f64
            }
        }
    }

    /// Quantile `q(v)`. For discrete cdfs the two halves resolve
    /// differently so that the alpha-cut stays an over-approximation:
    /// `v <= 0.5` takes the largest support point with `F <= v` (one step
    /// below the support if none qualifies), `v > 0.5` the smallest with
    /// `F >= v`.
    pub fn quantile(&self, v: f64) -> Result<f64> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::Invalid(format!("quantile level {v} outside ]0, 1[")));
        }
        match self {
            Cdf::Normal { mu, sigma } => Ok(mu + sigma * std_normal_quantile(v)?),
            Cdf::Discrete { points } => {
                let mut distinct: Vec<f64> = points.clone();
                distinct.dedup();
                if v <= 0.5 {
                    for &c in distinct.iter().rev() {
                        if self.eval(c) <= v {
                            return Ok(c);
                        }
                    }
                    let step = distinct
                        .windows(2)
                        .map(|w| w[1] - w[0])
                        .fold(f64::INFINITY, f64::min);
                    let step = if step.is_finite() { step } else { 1.0 };
                    Ok(distinct[0] - step)
                } else {
                    for &c in &distinct {
                        if self.eval(c) >= v {
                            return Ok(c);
                        }
                    }
                    Ok(*distinct.last().unwrap())
                }
            }
        }
    }

    /// The alpha-cut `]q(alpha), q(1-alpha)]`; `alpha` inside ]0, 0.5[.
    pub fn delta(&self, alpha: f64) -> Result<Interval> {
        check_alpha(alpha)?;
        let lo = self.quantile(alpha)?;
        let hi = self.quantile(1.0 - alpha)?;
        Interval::new(lo, hi)
    }

    /// The single value carrying all the mass, if there is one.
    pub fn point_mass(&self) -> Option<f64> {
        match self {
            Cdf::Normal { .. } => None,
            Cdf::Discrete { points } => points.iter().all(|&p| p == points[0]).then_some(points[0]),
        }
    }
}

impl std::fmt::Display for Cdf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cdf::Normal { mu, sigma } => write!(f, "N({mu:?},{sigma:?})"),
            Cdf::Discrete { points } => {
                let cells: Vec<String> = points.iter().map(|p| format!("{p:?}")).collect();
                write!(f, "U{{{}}}", cells.join(","))
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0 < alpha && alpha < 0.5) {
        return Err(Error::Invalid(format!(
            "alpha level {alpha} outside ]0, 0.5["
        )));
    }
    Ok(())
}

/// Truth of one atom on a distribution at level `alpha`, phrased directly
/// on the cdf: intersection atoms ask for enough mass beyond the
/// threshold, inclusion atoms for almost all mass on one side.
pub fn atom_holds_at_level(f: &Cdf, atom: Atom, grid: &ThresholdGrid, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    atom.check(grid.k())?;
    if atom.is_virtual(grid.k()) {
        return Ok(true);
    }
    let fs = f.eval(grid.bound(atom.index));
    Ok(match atom.family {
        Family::CapGt => fs < 1.0 - alpha,
        Family::CapLe => fs > alpha,
        Family::SubGt => fs <= alpha,
        Family::SubLe => fs >= 1.0 - alpha,
        Family::NumGt | Family::NumLe => {
            return Err(Error::Invalid(
                "scalar atoms are not defined on distributions".into(),
            ))
        }
    })
}

/// Most specific pattern of the distribution's alpha-cut. A point mass is
/// an exact value, so it takes the value's own unit-cell description at
/// the grid resolution, independent of the level.
pub fn describe_at_level(
    f: &Cdf,
    grid: &ThresholdGrid,
    lang: Language,
    alpha: f64,
) -> Result<IntervalPattern> {
    if !matches!(lang, Language::I | Language::Ic) {
        return Err(Error::Invalid(format!(
            "distributions are described in languages i and ic, not {lang}"
        )));
    }
    check_alpha(alpha)?;
    let cut = match f.point_mass() {
        Some(z) => Interval::point(z, grid.epsilon())?,
        None => f.delta(alpha)?,
    };
    describe(&cut, grid, lang)
}

/// Items of one distribution across every alpha level of its variable.
pub fn encode_distribution(f: &Cdf, vocab: &ItemVocabulary, var: usize) -> Result<BitSet> {
    let mut items = BitSet::new(vocab.len());
    encode_distribution_into(f, vocab, var, &mut items)?;
    Ok(items)
}

fn encode_distribution_into(
    f: &Cdf,
    vocab: &ItemVocabulary,
    var: usize,
    items: &mut BitSet,
) -> Result<()> {
    let spec = vocab
        .vars()
        .get(var)
        .ok_or_else(|| Error::Invalid(format!("variable index {var} out of range")))?;
    if spec.alphas.is_empty() {
        return Err(Error::Invalid(format!(
            "variable `{}` carries no alpha tags; encode intervals instead",
            spec.name
        )));
    }
    for &alpha in &spec.alphas {
        let q = describe_at_level(f, &spec.grid, vocab.language(), alpha)?;
        vocab.encode_pattern_into(&q, var, Some(alpha), items)?;
    }
    Ok(())
}

/// Itemset of one object whose variables are all distribution-valued.
pub fn encode_cdf_row(vocab: &ItemVocabulary, row: &[Cdf]) -> Result<BitSet> {
    if row.len() != vocab.vars().len() {
        return Err(Error::Invalid(format!(
            "row has {} distributions but the vocabulary has {} variables",
            row.len(),
            vocab.vars().len()
        )));
    }
    let mut items = BitSet::new(vocab.len());
    for (vi, f) in row.iter().enumerate() {
        encode_distribution_into(f, vocab, vi, &mut items)?;
    }
    Ok(items)
}

/// Draw from `N(mu, sigma)` by inverse-cdf sampling.
pub fn sample_normal(rng: &mut impl rand::Rng, mu: f64, sigma: f64) -> f64 {
    let u = rng.random_range(f64::MIN_POSITIVE..1.0);
    mu + sigma * std_normal_quantile(u).expect("u stays inside ]0, 1[")
}

/// Whether `z` sits in the symmetric `1 - 2 alpha` band of `f`:
/// `alpha < F(z) < 1 - alpha`. For continuous `f` this is exactly
/// `z` falling in the alpha-cut interval.
pub fn covered_symmetrically(f: &Cdf, z: f64, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    let p = f.eval(z);
    Ok(alpha < p && p < 1.0 - alpha)
}

/// The two sides of the coverage symmetry for equal-scale normals: the
/// band of `N(z, sigma)` holding `v` and the band of `N(v, sigma)`
/// holding `z`. The booleans always agree.
pub fn symmetric_coverage_check(z: f64, v: f64, sigma: f64, alpha: f64) -> Result<(bool, bool)> {
    let fz = Cdf::normal(z, sigma)?;
    let fv = Cdf::normal(v, sigma)?;
    Ok((
        covered_symmetrically(&fz, v, alpha)?,
        covered_symmetrically(&fv, z, alpha)?,
    ))
}
