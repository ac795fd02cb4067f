//! Abelian integrals along straight chords between branch points.
//!
//! A chord `b_a -> b_b` is parametrized as `x(t) = m + r t`, `t in [-1, 1]`,
//! with `m` the midpoint and `r` the half-chord. Writing
//! `f(x) = (x - b_a)(x - b_b) h(x)` gives `(x - b_a)(x - b_b) = r^2 (t^2 - 1)`,
//! and on the chord we use the branch
//!
//! ```text
//! y(x(t)) = i r sqrt(1 - t^2) sqrt(h(x(t)))
//! ```
//!
//! where `sqrt(h)` is the principal root at the midpoint, continued along the
//! chord. The inverse square roots at both ends are exactly the Chebyshev
//! weight, so Gauss–Chebyshev quadrature converges spectrally.
//!
//! The branch is attached to the chord with its endpoints in ascending index
//! order; integrating the other way negates the value.

use rayon::prelude::*;
use thiserror::Error;

use crate::hypercurve::{diameter, Differential, HyperellipticCurve};
use crate::scalar::{cpowi, cx, czero, Cx, Real};

/// Bisections allowed per continuation step.
pub const MAX_BISECTIONS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("continuation path node {node} lies on a branch point")]
    PathThroughBranchPoint { node: usize },
    #[error("continuation step near node {node} still too long after {MAX_BISECTIONS} bisections")]
    StepRefinementExceeded { node: usize },
    #[error("branch point {point} lies on the chord {a} -> {b}")]
    BranchPointOnSegment { a: usize, b: usize, point: usize },
    #[error("endpoints {a}, {b} do not name two distinct branch points")]
    NonAdjacentEndpoints { a: usize, b: usize },
    #[error("quadrature order must be at least 1")]
    ZeroOrder,
}

impl QuadratureError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::PathThroughBranchPoint { .. } => "quadrature.PathThroughBranchPoint",
            Self::StepRefinementExceeded { .. } => "quadrature.StepRefinementExceeded",
            Self::BranchPointOnSegment { .. } => "quadrature.BranchPointOnSegment",
            Self::NonAdjacentEndpoints { .. } => "quadrature.NonAdjacentEndpoints",
            Self::ZeroOrder => "quadrature.ZeroOrder",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T: Real> {
    /// Gauss–Chebyshev node count; the error estimate also uses twice this.
    pub order: usize,
    /// A continuation step `x0 -> x1` is accepted when
    /// `|x1 - x0| * sum_i 1/|x0 - b_i| <= step_tolerance`, which bounds the
    /// phase change of the root along the step.
    pub step_tolerance: T,
    /// Relative (to the branch-set diameter) distance below which a point is
    /// considered to sit on a branch point.
    pub separation: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            order: 64,
            step_tolerance: T::lit(0.5),
            separation: T::lit(crate::hypercurve::DEFAULT_SEPARATION),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentIntegralResult<T: Real> {
    pub value: Cx<T>,
    pub order: usize,
    /// `|value(order) - value(2 * order)|`
    pub error_estimate: T,
}

/// A continuous branch of `sqrt(f)` along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetTrace<T: Real> {
    /// Input nodes plus any nodes inserted by step refinement.
    pub path_nodes: Vec<Cx<T>>,
    pub y_values: Vec<Cx<T>>,
    pub start_sign: i8,
    /// Position of each input node within `path_nodes`.
    pub anchors: Vec<usize>,
}

impl<T: Real> SheetTrace<T> {
    /// Values at the caller's nodes only.
    pub fn anchored_values(&self) -> Vec<Cx<T>> {
        self.anchors.iter().map(|&k| self.y_values[k]).collect()
    }

    pub fn first(&self) -> Cx<T> {
        self.y_values[0]
    }

    pub fn last(&self) -> Cx<T> {
        *self.y_values.last().expect("non-empty trace")
    }
}

/// Square root of `prod (x - root)`, continued along a polyline.
pub(crate) struct RootProduct<'a, T: Real> {
    pub roots: &'a [Cx<T>],
    pub step_tolerance: T,
    /// Absolute distance to a root that counts as hitting it.
    pub min_distance: T,
}

impl<T: Real> RootProduct<'_, T> {
    pub fn eval(&self, x: Cx<T>) -> Cx<T> {
        self.roots
            .iter()
            .fold(cx(T::one(), T::zero()), |acc, &b| acc * (x - b))
    }

    fn nearest(&self, x: Cx<T>) -> T {
        self.roots
            .iter()
            .map(|&b| (x - b).norm())
            .fold(T::infinity(), T::min)
    }

    fn step_ok(&self, x0: Cx<T>, x1: Cx<T>) -> bool {
        let len = (x1 - x0).norm();
        let load = self
            .roots
            .iter()
            .fold(T::zero(), |acc, &b| acc + (x0 - b).norm().recip());
        len * load <= self.step_tolerance
    }

    /// Continues `start` (a square root of the product at `path[0]`) along
    /// `path`, refining steps as needed.
    pub fn continue_along(
        &self,
        path: &[Cx<T>],
        start: Cx<T>,
    ) -> Result<(Vec<Cx<T>>, Vec<Cx<T>>, Vec<usize>), QuadratureError> {
        let mut nodes = Vec::with_capacity(path.len());
        let mut values = Vec::with_capacity(path.len());
        let mut anchors = Vec::with_capacity(path.len());
        let Some(&x0) = path.first() else {
            return Ok((nodes, values, anchors));
        };
        if self.nearest(x0) <= self.min_distance {
            return Err(QuadratureError::PathThroughBranchPoint { node: 0 });
        }
        nodes.push(x0);
        values.push(start);
        anchors.push(0);
        for (k, &x1) in path.iter().enumerate().skip(1) {
            let from = *nodes.last().unwrap();
            let y0 = *values.last().unwrap();
            self.advance(from, y0, x1, 0, k, &mut nodes, &mut values)?;
            anchors.push(nodes.len() - 1);
        }
        Ok((nodes, values, anchors))
    }

    #[allow(clippy::too_many_arguments)]
    fn advance(
        &self,
        x0: Cx<T>,
        y0: Cx<T>,
        x1: Cx<T>,
        depth: u32,
        node: usize,
        nodes: &mut Vec<Cx<T>>,
        values: &mut Vec<Cx<T>>,
    ) -> Result<(), QuadratureError> {
        if self.nearest(x1) <= self.min_distance {
            return Err(QuadratureError::PathThroughBranchPoint { node });
        }
        if self.step_ok(x0, x1) {
            let w = self.eval(x1).sqrt();
            let y1 = if (w - y0).norm() <= (w + y0).norm() { w } else { -w };
            nodes.push(x1);
            values.push(y1);
            return Ok(());
        }
        if depth >= MAX_BISECTIONS {
            return Err(QuadratureError::StepRefinementExceeded { node });
        }
        let mid = (x0 + x1).scale(T::lit(0.5));
        self.advance(x0, y0, mid, depth + 1, node, nodes, values)?;
        let ym = *values.last().unwrap();
        self.advance(mid, ym, x1, depth + 1, node, nodes, values)
    }
}

fn absolute_separation<T: Real>(curve: &HyperellipticCurve<T>, cfg: &QuadratureConfig<T>) -> T {
    cfg.separation * diameter(curve.branch_points())
}

/// Tracks a continuous branch of `sqrt(f)` along `path`. At the first node the
/// branch is `start_sign` times the principal root.
pub fn analytic_sqrt_continuation<T: Real>(
    curve: &HyperellipticCurve<T>,
    path: &[Cx<T>],
    start_sign: i8,
    cfg: &QuadratureConfig<T>,
) -> Result<SheetTrace<T>, QuadratureError> {
    let tracker = RootProduct {
        roots: curve.branch_points(),
        step_tolerance: cfg.step_tolerance,
        min_distance: absolute_separation(curve, cfg),
    };
    let start = match path.first() {
        Some(&x0) => {
            let w = tracker.eval(x0).sqrt();
            if start_sign < 0 {
                -w
            } else {
                w
            }
        }
        None => czero(),
    };
    let (path_nodes, y_values, anchors) = tracker.continue_along(path, start)?;
    Ok(SheetTrace {
        path_nodes,
        y_values,
        start_sign: if start_sign < 0 { -1 } else { 1 },
        anchors,
    })
}

fn point_segment_distance<T: Real>(p: Cx<T>, a: Cx<T>, b: Cx<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let s = ((p - a) * d.conj()).re / len2;
    let s = s.max(T::zero()).min(T::one());
    (p - (a + d.scale(s))).norm()
}

/// The local branch of `y` attached to a chord, analytic in a neighbourhood of
/// the open chord.
#[derive(Debug, Clone)]
pub struct SegmentBranch<T: Real> {
    /// Endpoint indices in ascending order.
    pub lo: usize,
    pub hi: usize,
    pub mid: Cx<T>,
    pub half: Cx<T>,
    foreign: Vec<Cx<T>>,
    sqrt_h_mid: Cx<T>,
    step_tolerance: T,
    min_distance: T,
}

impl<T: Real> SegmentBranch<T> {
    pub fn new(
        curve: &HyperellipticCurve<T>,
        a: usize,
        b: usize,
        cfg: &QuadratureConfig<T>,
    ) -> Result<Self, QuadratureError> {
        let pts = curve.branch_points();
        if a == b || a >= pts.len() || b >= pts.len() {
            return Err(QuadratureError::NonAdjacentEndpoints { a, b });
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let min_distance = absolute_separation(curve, cfg);
        for (k, &p) in pts.iter().enumerate() {
            if k != lo && k != hi && point_segment_distance(p, pts[lo], pts[hi]) <= min_distance {
                return Err(QuadratureError::BranchPointOnSegment { a, b, point: k });
            }
        }
        let foreign: Vec<Cx<T>> = pts
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != lo && k != hi)
            .map(|(_, &p)| p)
            .collect();
        let half = (pts[hi] - pts[lo]).scale(T::lit(0.5));
        let mid = pts[lo] + half;
        let sqrt_h_mid = foreign
            .iter()
            .fold(cx(T::one(), T::zero()), |acc, &q| acc * (mid - q))
            .sqrt();
        Ok(Self {
            lo,
            hi,
            mid,
            half,
            foreign,
            sqrt_h_mid,
            step_tolerance: cfg.step_tolerance,
            min_distance,
        })
    }

    fn tracker(&self) -> RootProduct<'_, T> {
        RootProduct {
            roots: &self.foreign,
            step_tolerance: self.step_tolerance,
            min_distance: self.min_distance,
        }
    }

    pub fn point(&self, t: T) -> Cx<T> {
        self.mid + self.half.scale(t)
    }

    /// `sqrt(h)` at the given chord parameters, continued from the midpoint.
    fn sqrt_h_along(&self, ts: &[T]) -> Result<Vec<Cx<T>>, QuadratureError> {
        let mut out = vec![czero(); ts.len()];
        let mut pos: Vec<usize> = (0..ts.len()).filter(|&k| ts[k] >= T::zero()).collect();
        let mut neg: Vec<usize> = (0..ts.len()).filter(|&k| ts[k] < T::zero()).collect();
        pos.sort_by(|&a, &b| ts[a].partial_cmp(&ts[b]).unwrap());
        neg.sort_by(|&a, &b| ts[b].partial_cmp(&ts[a]).unwrap());
        let tracker = self.tracker();
        for side in [pos, neg] {
            let mut path = vec![self.mid];
            path.extend(side.iter().map(|&k| self.point(ts[k])));
            let (_, values, anchors) = tracker.continue_along(&path, self.sqrt_h_mid)?;
            for (slot, &k) in side.iter().enumerate() {
                out[k] = values[anchors[slot + 1]];
            }
        }
        Ok(out)
    }

    /// Value of the local branch at a point near the open chord, reached from
    /// the midpoint by a straight line.
    pub fn eval_near(&self, x: Cx<T>) -> Result<Cx<T>, QuadratureError> {
        let t = (x - self.mid) / self.half;
        let one = cx(T::one(), T::zero());
        let s = (one - t * t).sqrt();
        let (_, values, _) = self.tracker().continue_along(&[self.mid, x], self.sqrt_h_mid)?;
        let i = cx(T::zero(), T::one());
        Ok(i * self.half * s * values[1])
    }

    /// Gauss–Chebyshev sums of `x^j dx / y` for each requested exponent, in the
    /// ascending-index direction.
    fn chebyshev_sums(&self, exponents: &[usize], order: usize) -> Result<Vec<Cx<T>>, QuadratureError> {
        let n = T::from_usize_lossy(order);
        let ts: Vec<T> = (1..=order)
            .map(|k| {
                let k = T::from_usize_lossy(2 * k - 1);
                (k * T::PI() / (n + n)).cos()
            })
            .collect();
        let roots_h = self.sqrt_h_along(&ts)?;
        let i = cx(T::zero(), T::one());
        let weight = T::PI() / n;
        Ok(exponents
            .iter()
            .map(|&j| {
                let mut acc = czero();
                for (&t, &sh) in ts.iter().zip(&roots_h) {
                    acc = acc + cpowi(self.point(t), j) / (i * sh);
                }
                acc.scale(weight)
            })
            .collect())
    }
}

/// Integrals of `x^j dx / y` along the chord `a -> b` for every differential
/// in `diffs`, sharing the continuation work.
pub fn segment_integrals<T: Real>(
    curve: &HyperellipticCurve<T>,
    a: usize,
    b: usize,
    diffs: &[Differential],
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<SegmentIntegralResult<T>>, QuadratureError> {
    if cfg.order == 0 {
        return Err(QuadratureError::ZeroOrder);
    }
    let branch = SegmentBranch::new(curve, a, b, cfg)?;
    let exps: Vec<usize> = diffs.iter().map(|d| d.exponent).collect();
    let coarse = branch.chebyshev_sums(&exps, cfg.order)?;
    let fine = branch.chebyshev_sums(&exps, 2 * cfg.order)?;
    let sign = if a < b { T::one() } else { -T::one() };
    Ok(coarse
        .into_iter()
        .zip(fine)
        .map(|(c, f)| SegmentIntegralResult {
            value: c.scale(sign),
            order: cfg.order,
            error_estimate: (c - f).norm(),
        })
        .collect())
}

pub fn segment_integral<T: Real>(
    curve: &HyperellipticCurve<T>,
    a: usize,
    b: usize,
    diff: Differential,
    cfg: &QuadratureConfig<T>,
) -> Result<SegmentIntegralResult<T>, QuadratureError> {
    Ok(segment_integrals(curve, a, b, &[diff], cfg)?[0])
}

/// Integrals over many chords in parallel; output order matches `chords`.
pub fn chord_table<T: Real>(
    curve: &HyperellipticCurve<T>,
    chords: &[(usize, usize)],
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<Vec<SegmentIntegralResult<T>>>, QuadratureError> {
    let diffs = curve.differential_basis();
    chords
        .par_iter()
        .map(|&(a, b)| segment_integrals(curve, a, b, &diffs, cfg))
        .collect()
}
