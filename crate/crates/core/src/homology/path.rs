use crate::hypercurve::BranchPointSet;
use crate::scalar::{Cx, Real};

use super::HomologyError;

/// Default required clearance, as a fraction of chord length.
pub const DEFAULT_CLEARANCE: f64 = 0.3;

/// Ordering of the branch points; consecutive points are joined by chords.
/// Chords `0, 2, 4, ...` are the cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningPath {
    pub order: Vec<usize>,
    pub segments: Vec<(usize, usize)>,
}

impl SpanningPath {
    pub fn from_order(order: Vec<usize>) -> Self {
        let segments = order.windows(2).map(|w| (w[0], w[1])).collect();
        Self { order, segments }
    }

    pub fn genus(&self) -> usize {
        self.order.len() / 2 - 1
    }

    pub fn cuts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.segments.iter().copied().step_by(2)
    }

    /// Smallest ratio, over chords, of foreign-point distance to chord length.
    pub fn clearance_ratio<T: Real>(&self, points: &[Cx<T>]) -> T {
        worst_chord(&self.order, points).0
    }

    /// True when no two non-adjacent chords meet.
    pub fn is_simple<T: Real>(&self, points: &[Cx<T>]) -> bool {
        is_simple(&self.order, points)
    }
}

pub(crate) fn point_segment_distance<T: Real>(p: Cx<T>, a: Cx<T>, b: Cx<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).max(T::zero()).min(T::one());
    (p - (a + d.scale(s))).norm()
}

fn cross<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    a.re * b.im - a.im * b.re
}

pub(crate) fn segments_meet<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> bool {
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    let z = T::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    // touching or collinear overlap
    point_segment_distance(c, a, b) == z
        || point_segment_distance(d, a, b) == z
        || point_segment_distance(a, c, d) == z
        || point_segment_distance(b, c, d) == z
}

/// (worst ratio, chord start, chord end, offending point)
fn worst_chord<T: Real>(order: &[usize], points: &[Cx<T>]) -> (T, usize, usize, usize) {
    let mut worst = (T::infinity(), 0, 0, 0);
    for w in order.windows(2) {
        let (a, b) = (points[w[0]], points[w[1]]);
        let len = (b - a).norm();
        for (k, &p) in points.iter().enumerate() {
            if k == w[0] || k == w[1] {
                continue;
            }
            let ratio = point_segment_distance(p, a, b) / len;
            if ratio < worst.0 {
                worst = (ratio, w[0], w[1], k);
            }
        }
    }
    worst
}

fn is_simple<T: Real>(order: &[usize], points: &[Cx<T>]) -> bool {
    let n = order.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i + 2)..n.saturating_sub(1) {
            let (a, b) = (points[order[i]], points[order[i + 1]]);
            let (c, d) = (points[order[j]], points[order[j + 1]]);
            if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn score<T: Real>(order: &[usize], points: &[Cx<T>], clearance: T) -> Option<T> {
    if !is_simple(order, points) {
        return None;
    }
    let r = worst_chord(order, points).0;
    (r >= clearance).then_some(r)
}

fn angular_order<T: Real>(points: &[Cx<T>], center: Cx<T>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let key = |k: usize| {
        let d = points[k] - center;
        (d.im.atan2(d.re), d.norm())
    };
    idx.sort_by(|&a, &b| {
        let (ta, ra) = key(a);
        let (tb, rb) = key(b);
        ta.partial_cmp(&tb)
            .unwrap()
            .then(ra.partial_cmp(&rb).unwrap())
            .then(a.cmp(&b))
    });
    idx
}

fn farthest<T: Real>(points: &[Cx<T>], center: Cx<T>) -> usize {
    let dist: Vec<T> = points.iter().map(|&p| (p - center).norm()).collect();
    let max = dist.iter().copied().fold(T::zero(), T::max);
    let tol = max * T::lit(1e-12);
    dist.iter().position(|&d| d >= max - tol).unwrap_or(0)
}

fn projection_order<T: Real>(points: &[Cx<T>], center: Cx<T>) -> Vec<usize> {
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for &p in points {
        let d = p - center;
        sxx += d.re * d.re;
        syy += d.im * d.im;
        sxy += d.re * d.im;
    }
    let theta = T::lit(0.5) * (sxy + sxy).atan2(sxx - syy);
    let mut dir = Cx::new(theta.cos(), theta.sin());
    // orient towards the farthest point(s); symmetric sets fall back to a
    // fixed half-plane
    let radius = points.iter().map(|&p| (p - center).norm()).fold(T::zero(), T::max);
    let tol = radius * T::lit(1e-9);
    let lead = points
        .iter()
        .filter(|&&p| (p - center).norm() >= radius - tol)
        .fold(T::zero(), |acc, &p| acc + ((p - center) * dir.conj()).re);
    if lead < -tol || (lead.abs() <= tol && (dir.re < T::zero() || (dir.re == T::zero() && dir.im < T::zero()))) {
        dir = -dir;
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let proj = |k: usize| ((points[k] - center) * dir.conj()).re;
    idx.sort_by(|&a, &b| proj(a).partial_cmp(&proj(b)).unwrap().then(a.cmp(&b)));
    idx
}

fn nearest_neighbour_order<T: Real>(points: &[Cx<T>], start: usize) -> Vec<usize> {
    let n = points.len();
    let mut used = vec![false; n];
    let mut order = vec![start];
    used[start] = true;
    while order.len() < n {
        let last = points[*order.last().unwrap()];
        let mut best = None;
        for k in 0..n {
            if used[k] {
                continue;
            }
            let d = (points[k] - last).norm();
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, k));
            }
        }
        let (_, k) = best.unwrap();
        used[k] = true;
        order.push(k);
    }
    order
}

/// Candidate orderings in priority order: rotations of the counter-clockwise
/// angular order about the centroid (starting from the farthest point), the
/// principal-axis projection order, then greedy nearest-neighbour walks.
fn candidates<T: Real>(points: &[Cx<T>]) -> Vec<Vec<usize>> {
    let center = crate::hypercurve::centroid(points);
    let mut out = Vec::new();
    let ang = angular_order(points, center);
    let start = ang.iter().position(|&k| k == farthest(points, center)).unwrap_or(0);
    for r in 0..ang.len() {
        let mut rot = ang.clone();
        rot.rotate_left((start + r) % ang.len());
        out.push(rot);
    }
    out.push(projection_order(points, center));
    for s in 0..points.len() {
        out.push(nearest_neighbour_order(points, s));
    }
    out
}

const REPAIR_STARTS: usize = 6;

fn crossings<T: Real>(order: &[usize], points: &[Cx<T>]) -> usize {
    let n = order.len();
    let mut count = 0;
    for i in 0..n.saturating_sub(1) {
        for j in (i + 2)..n.saturating_sub(1) {
            let (a, b) = (points[order[i]], points[order[i + 1]]);
            let (c, d) = (points[order[j]], points[order[j + 1]]);
            if segments_meet(a, b, c, d) {
                count += 1;
            }
        }
    }
    count
}

/// Larger is better: simple paths rank by worst clearance, others by fewer
/// crossings.
fn repair_key<T: Real>(order: &[usize], points: &[Cx<T>]) -> T {
    match crossings(order, points) {
        0 => worst_chord(order, points).0,
        c => -T::from_usize_lossy(c),
    }
}

fn hill_climb<T: Real>(mut order: Vec<usize>, points: &[Cx<T>], clearance: T) -> Vec<usize> {
    let n = order.len();
    let mut current = repair_key(&order, points);
    for _ in 0..(4 * n * n) {
        if score(&order, points, clearance).is_some() {
            break;
        }
        let mut improved = None;
        'search: for i in 0..n {
            for j in (i + 1)..n {
                let mut trial = order.clone();
                trial[i..=j].reverse();
                let key = repair_key(&trial, points);
                if key > current {
                    improved = Some((trial, key));
                    break 'search;
                }
            }
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mut trial = order.clone();
                let k = trial.remove(i);
                trial.insert(j, k);
                let key = repair_key(&trial, points);
                if key > current {
                    improved = Some((trial, key));
                    break 'search;
                }
            }
        }
        match improved {
            Some((t, key)) => {
                order = t;
                current = key;
            }
            None => break,
        }
    }
    order
}

/// Chooses an ordering of the branch points whose chords form a simple
/// polyline with every foreign point at least `clearance * chord length` away
/// from every chord. Among valid candidates the one with the largest minimum
/// clearance wins; ties keep the earlier candidate.
pub fn spanning_path<T: Real>(
    branch: &BranchPointSet<T>,
    clearance: T,
) -> Result<SpanningPath, HomologyError> {
    let points = branch.points();
    let tie = T::lit(1e-9);
    let mut best: Option<(T, Vec<usize>)> = None;
    let cands = candidates(points);
    for cand in &cands {
        if let Some(s) = score(cand, points, clearance) {
            if best.as_ref().map_or(true, |(bs, _)| s > *bs * (T::one() + tie)) {
                best = Some((s, cand.clone()));
            }
        }
    }
    if let Some((_, order)) = best {
        return Ok(SpanningPath::from_order(order));
    }
    // Local repair: hill-climb over segment reversals and single-point
    // relocations from the most promising candidates.
    let mut ranked: Vec<&Vec<usize>> = cands.iter().collect();
    ranked.sort_by(|a, b| repair_key(b, points).partial_cmp(&repair_key(a, points)).unwrap());
    let mut order = ranked[0].clone();
    let mut order_key = repair_key(&order, points);
    for start in ranked.into_iter().take(REPAIR_STARTS) {
        let found = hill_climb(start.clone(), points, clearance);
        let key = repair_key(&found, points);
        if score(&found, points, clearance).is_some() {
            return Ok(SpanningPath::from_order(found));
        }
        if key > order_key {
            order = found;
            order_key = key;
        }
    }
    let (_, a, b, k) = worst_chord(&order, points);
    Err(HomologyError::NoClearPath { triple: [a, k, b] })
}
