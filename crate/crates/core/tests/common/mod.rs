//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use hyperperiod::homology::CycleSet;
use hyperperiod::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        a = an;
        b = bn;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, modulus `k`.
pub fn ellip_k(k: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - k * k).sqrt()))
}

/// `K'(k) = K(sqrt(1 - k^2))`
pub fn ellip_kp(k: f64) -> f64 {
    PI / (2.0 * agm(1.0, k))
}

fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int_0^1 t^j / sqrt(1 - t^6) dt` by adaptive Simpson after `t = sin(theta)`.
pub fn sextic_moment(j: usize) -> f64 {
    let f = |th: f64| {
        let s = th.sin();
        let s2 = s * s;
        s.powi(j as i32) / (1.0 + s2 + s2 * s2).sqrt()
    };
    adaptive_simpson(&f, 0.0, PI / 2.0, 1e-14)
}

/// Same moment from the Beta function: `B((j+1)/6, 1/2) / 6`.
pub fn sextic_moment_beta(j: usize) -> f64 {
    statrs::function::beta::beta((j as f64 + 1.0) / 6.0, 0.5) / 6.0
}

/// Moves `tau` into the standard fundamental domain of `SL2(Z)`.
pub fn sl2_reduce(mut tau: Complex) -> Complex {
    for _ in 0..1000 {
        tau.re -= tau.re.round();
        if tau.norm_sqr() < 1.0 - 1e-13 {
            tau = -tau.inv();
        } else {
            break;
        }
    }
    tau
}

pub fn disk_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen::<f64>().sqrt();
            let t: f64 = rng.gen::<f64>() * 2.0 * PI;
            Complex::from_polar(r, t)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn seg_dist(p: Complex, a: Complex, b: Complex) -> f64 {
    let d = b - a;
    let s = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + d * s)).norm()
}

fn cross(a: Complex, b: Complex) -> f64 {
    a.re * b.im - a.im * b.re
}

fn proper_crossing(a: Complex, b: Complex, c: Complex, d: Complex) -> Option<f64> {
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        // parameter along a -> b
        Some(o3 / (o3 - o4))
    } else {
        None
    }
}

/// Best minimum clearance ratio over all simple orderings, or `None` if no
/// ordering is simple.
pub fn brute_force_best_clearance(points: &[Complex]) -> Option<f64> {
    let n = points.len();
    let mut best: Option<f64> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |o: &[usize]| {
        if o[0] > o[n - 1] {
            return;
        }
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                let (a, b, cc, d) = (points[o[i]], points[o[i + 1]], points[o[j]], points[o[j + 1]]);
                if proper_crossing(a, b, cc, d).is_some() {
                    return;
                }
            }
        }
        let mut worst = f64::INFINITY;
        for w in o.windows(2) {
            let (a, b) = (points[w[0]], points[w[1]]);
            for (k, &p) in points.iter().enumerate() {
                if k != w[0] && k != w[1] {
                    worst = worst.min(seg_dist(p, a, b) / (b - a).norm());
                }
            }
        }
        if best.map_or(true, |b| worst > b) {
            best = Some(worst);
        }
    });
    best
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Counter-clockwise polygon at distance `r` around the chord `a -> b`,
/// starting at the midpoint of its right side when `start_right`, else of its
/// left side.
fn stadium(a: Complex, b: Complex, r: f64, start_right: bool) -> Vec<Complex> {
    let u = (b - a) / (b - a).norm();
    let n = c(-u.im, u.re);
    // odd, so that no vertex lies on the chord's own line
    let cap = 47;
    let mid = (a + b) * 0.5;
    let mut pts = Vec::new();
    // right side a -> b, cap around b, left side b -> a, cap around a
    pts.push(mid - n * r);
    pts.push(b - n * r);
    for s in 1..cap {
        let ang = -PI / 2.0 + PI * s as f64 / cap as f64;
        pts.push(b + u * Complex::from_polar(r, ang));
    }
    pts.push(b + n * r);
    pts.push(mid + n * r);
    pts.push(a + n * r);
    for s in 1..cap {
        let ang = PI / 2.0 + PI * s as f64 / cap as f64;
        pts.push(a + u * Complex::from_polar(r, ang));
    }
    pts.push(a - n * r);
    if !start_right {
        pts.rotate_left(cap + 2);
    }
    pts
}

/// Sheet label (+1 or -1) along each edge of a closed polygon that starts on
/// sheet `start`, flipping on every crossing of a cut.
fn edge_sheets(poly: &[Complex], start: i64, cuts: &[(Complex, Complex)]) -> Vec<Vec<(f64, i64)>> {
    let n = poly.len();
    let mut sheet = start;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let mut hits: Vec<f64> = cuts.iter().filter_map(|&(a, b)| proper_crossing(p, q, a, b)).collect();
        hits.sort_by(|x, y| x.partial_cmp(y).unwrap());
        // (parameter from which the label holds, label)
        let mut pieces = vec![(0.0, sheet)];
        for h in hits {
            sheet = -sheet;
            pieces.push((h, sheet));
        }
        out.push(pieces);
    }
    assert_eq!(sheet, start, "polygon does not close on the surface");
    out
}

fn sheet_at(pieces: &[(f64, i64)], t: f64) -> i64 {
    pieces.iter().rev().find(|(s, _)| *s <= t).unwrap().1
}

/// Intersection numbers of the collapsed cycles, realized as explicit thin
/// loops on the two sheets: each transverse crossing where both loops are on
/// the same sheet contributes the sign of the tangent cross product.
pub fn geometric_intersection(points: &[Complex], cycles: &CycleSet, segments: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut r = f64::INFINITY;
    for (m, &(a, b)) in segments.iter().enumerate() {
        let (pa, pb) = (points[a], points[b]);
        r = r.min((pb - pa).norm());
        for (k, &p) in points.iter().enumerate() {
            if k != a && k != b {
                r = r.min(seg_dist(p, pa, pb));
            }
        }
        for &(c2, d2) in segments.iter().skip(m + 2) {
            let (pc, pd) = (points[c2], points[d2]);
            r = r
                .min(seg_dist(pa, pc, pd))
                .min(seg_dist(pb, pc, pd))
                .min(seg_dist(pc, pa, pb))
                .min(seg_dist(pd, pa, pb));
        }
    }
    let r = 0.1 * r;
    let cuts: Vec<(Complex, Complex)> = segments
        .iter()
        .step_by(2)
        .map(|&(a, b)| (points[a], points[b]))
        .collect();
    let loops: Vec<(Vec<Complex>, Vec<Vec<(f64, i64)>>)> = cycles
        .cycles
        .iter()
        .enumerate()
        .map(|(idx, cyc)| {
            let (a, b) = segments[cyc.support()];
            let first = cyc.traversals[0];
            // radii differ per loop so that crossings are transverse
            let radius = r * (1.0 - 0.5 * idx as f64 / cycles.cycles.len() as f64);
            let mut poly = stadium(points[a], points[b], radius, first.direction > 0);
            if cyc.orientation < 0 {
                poly.reverse();
            }
            // traversal sheets are relative to the branch on the chord's left
            // side; right of a cut the global sheet is the opposite one
            let on_right_of_cut = cyc.support() % 2 == 0 && first.direction > 0;
            let start = if on_right_of_cut { -first.sheet } else { first.sheet };
            let sheets = edge_sheets(&poly, i64::from(start), &cuts);
            (poly, sheets)
        })
        .collect();
    let n = loops.len();
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (pi, si) = &loops[i];
            let (pj, sj) = &loops[j];
            let mut total = 0;
            for ei in 0..pi.len() {
                let (a, b) = (pi[ei], pi[(ei + 1) % pi.len()]);
                for ej in 0..pj.len() {
                    let (cc, d) = (pj[ej], pj[(ej + 1) % pj.len()]);
                    if let (Some(t), Some(u)) = (proper_crossing(a, b, cc, d), proper_crossing(cc, d, a, b)) {
                        if sheet_at(&si[ei], t) == sheet_at(&sj[ej], u) {
                            total += cross(b - a, d - cc).signum() as i64;
                        }
                    }
                }
            }
            m[i][j] = total;
        }
    }
    m
}
