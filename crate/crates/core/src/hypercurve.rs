//! Hyperelliptic curves `y^2 = f(x)` given by their finite branch points.
//!
//! The internal model is always even degree: `f(x) = prod (x - b_i)` over
//! `2g + 2` distinct finite points, so that the point at infinity is not a
//! branch point. Odd-degree input (with `infinity` as the implicit last branch
//! point) is moved to this model by [`mobius_normalize`].

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::{cx, Cx, Real};

/// Relative separation tolerance: points closer than this times the diameter
/// of the set are considered equal.
pub const DEFAULT_SEPARATION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypercurveError {
    #[error("branch points {first} and {second} coincide (distance {distance:e} below tolerance {tolerance:e})")]
    DuplicatePoint {
        first: usize,
        second: usize,
        distance: f64,
        tolerance: f64,
    },
    #[error("need at least 4 branch points, got {0}")]
    TooFewPoints(usize),
    #[error("odd number of branch points ({0}); apply mobius_normalize first")]
    OddCount(usize),
    #[error("mobius_normalize expects an odd count of at least 3 points, got {0}")]
    NotOddModel(usize),
    #[error("branch point {0} is not finite")]
    NonFinite(usize),
}

impl HypercurveError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::DuplicatePoint { .. } => "hypercurve.DuplicatePoint",
            Self::TooFewPoints(_) => "hypercurve.TooFewPoints",
            Self::OddCount(_) => "hypercurve.OddCount",
            Self::NotOddModel(_) => "hypercurve.NotOddModel",
            Self::NonFinite(_) => "hypercurve.NonFinite",
        }
    }
}

/// Pairwise-distinct finite points, in caller order.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPointSet<T: Real> {
    points: Vec<Cx<T>>,
}

impl<T: Real> BranchPointSet<T> {
    /// Validates finiteness and pairwise separation (relative to the diameter).
    pub fn new(points: Vec<Cx<T>>, separation: T) -> Result<Self, HypercurveError> {
        for (i, p) in points.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(HypercurveError::NonFinite(i));
            }
        }
        let tol = separation * diameter(&points);
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = (points[i] - points[j]).norm();
                if d <= tol {
                    return Err(HypercurveError::DuplicatePoint {
                        first: i,
                        second: j,
                        distance: d.to_f64_lossy(),
                        tolerance: tol.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Cx<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_separation(&self) -> T {
        let mut best = T::infinity();
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.min((self.points[i] - self.points[j]).norm());
            }
        }
        best
    }

    pub fn diameter(&self) -> T {
        diameter(&self.points)
    }

    pub fn centroid(&self) -> Cx<T> {
        centroid(&self.points)
    }
}

pub(crate) fn diameter<T: Real>(points: &[Cx<T>]) -> T {
    let mut d = T::zero();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            d = d.max((points[i] - points[j]).norm());
        }
    }
    d
}

pub(crate) fn centroid<T: Real>(points: &[Cx<T>]) -> Cx<T> {
    let n = T::from_usize_lossy(points.len().max(1));
    points.iter().fold(cx(T::zero(), T::zero()), |a, &p| a + p) / n
}

/// Holomorphic differential `x^exponent dx / y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Differential {
    pub exponent: usize,
}

/// The curve `y^2 = f(x) = prod (x - b_i)` with `2g + 2` finite branch points.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperellipticCurve<T: Real> {
    branch: BranchPointSet<T>,
    genus: usize,
    /// Monic coefficients of `f`, constant term first.
    fcoeffs: Vec<Cx<T>>,
}

impl<T: Real> HyperellipticCurve<T> {
    pub fn new(branch: BranchPointSet<T>) -> Result<Self, HypercurveError> {
        let n = branch.len();
        if n < 4 {
            return Err(HypercurveError::TooFewPoints(n));
        }
        if n % 2 == 1 {
            return Err(HypercurveError::OddCount(n));
        }
        let fcoeffs = expand_monic(branch.points());
        Ok(Self {
            genus: n / 2 - 1,
            branch,
            fcoeffs,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn branch(&self) -> &BranchPointSet<T> {
        &self.branch
    }

    pub fn branch_points(&self) -> &[Cx<T>] {
        self.branch.points()
    }

    pub fn fcoeffs(&self) -> &[Cx<T>] {
        &self.fcoeffs
    }

    /// `f(x)` in product form.
    pub fn evaluate_f(&self, x: Cx<T>) -> Cx<T> {
        self.branch
            .points()
            .iter()
            .fold(cx(T::one(), T::zero()), |acc, &b| acc * (x - b))
    }

    /// `x^0 dx/y, ..., x^(g-1) dx/y`.
    pub fn differential_basis(&self) -> Vec<Differential> {
        (0..self.genus).map(|exponent| Differential { exponent }).collect()
    }

    /// Same curve under `x -> a x + c`.
    pub fn affine_image(&self, a: Cx<T>, c: Cx<T>) -> Result<Self, HypercurveError> {
        let pts = self.branch.points().iter().map(|&b| a * b + c).collect();
        curve_from_branch_points(pts)
    }
}

/// Expands `prod (x - b)` over the points sorted lexicographically, so that the
/// coefficients do not depend on input order.
fn expand_monic<T: Real>(points: &[Cx<T>]) -> Vec<Cx<T>> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
    let mut coeffs = vec![cx(T::one(), T::zero())];
    for b in sorted {
        let mut next = vec![cx(T::zero(), T::zero()); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1] + c;
            next[k] = next[k] - c * b;
        }
        coeffs = next;
    }
    coeffs
}

pub fn curve_from_branch_points<T: Real>(
    points: Vec<Cx<T>>,
) -> Result<HyperellipticCurve<T>, HypercurveError> {
    curve_from_branch_points_with(points, T::lit(DEFAULT_SEPARATION))
}

pub fn curve_from_branch_points_with<T: Real>(
    points: Vec<Cx<T>>,
    separation: T,
) -> Result<HyperellipticCurve<T>, HypercurveError> {
    let n = points.len();
    if n < 4 {
        return Err(HypercurveError::TooFewPoints(n));
    }
    if n % 2 == 1 {
        return Err(HypercurveError::OddCount(n));
    }
    HyperellipticCurve::new(BranchPointSet::new(points, separation)?)
}

/// Records the map `x -> 1 / (x - shift)` applied by [`mobius_normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransformRecord<T: Real> {
    pub shift: Cx<T>,
    pub original: Vec<Cx<T>>,
}

impl<T: Real> TransformRecord<T> {
    pub fn apply(&self, x: Cx<T>) -> Cx<T> {
        (x - self.shift).inv()
    }
}

/// Moves the implicit branch point at infinity of an odd model to a finite
/// location. The images of the inputs come first, then `0` (the image of
/// infinity).
///
/// The shift is `centroid + (1 + diameter)`, which lies at distance greater
/// than one from every input point.
pub fn mobius_normalize<T: Real>(
    points: &[Cx<T>],
    separation: T,
) -> Result<(BranchPointSet<T>, TransformRecord<T>), HypercurveError> {
    let n = points.len();
    if n < 3 || n % 2 == 0 {
        return Err(HypercurveError::NotOddModel(n));
    }
    // Validates distinctness of the inputs before mapping.
    BranchPointSet::new(points.to_vec(), separation)?;
    let shift = centroid(points) + cx(T::one() + diameter(points), T::zero());
    let record = TransformRecord {
        shift,
        original: points.to_vec(),
    };
    let mut mapped: Vec<Cx<T>> = points.iter().map(|&p| record.apply(p)).collect();
    mapped.push(cx(T::zero(), T::zero()));
    let set = BranchPointSet::new(mapped, separation)?;
    Ok((set, record))
}

/// Builds a curve from raw input, Möbius-normalizing odd-length lists.
pub fn curve_from_input<T: Real>(
    points: Vec<Cx<T>>,
    separation: T,
) -> Result<(HyperellipticCurve<T>, Option<TransformRecord<T>>), HypercurveError> {
    if points.len() % 2 == 1 && points.len() >= 3 {
        let (set, record) = mobius_normalize(&points, separation)?;
        Ok((HyperellipticCurve::new(set)?, Some(record)))
    } else {
        Ok((curve_from_branch_points_with(points, separation)?, None))
    }
}
