//! Ladder cycles on a spanning path.
//!
//! With chords `s_0, ..., s_{2g}` the cuts are the even chords. Every cycle is
//! kept in collapsed form: a thin loop around a single chord, described by the
//! two traversals of that chord (forward along its right side, back along its
//! left side, so the loop runs counter-clockwise).
//!
//! * pair-cycle `C_k` encloses cut `s_{2k}` on the reference sheet, `k = 0..=g`;
//! * cross-cycle `D_k` encloses the gap chord `s_{2k-1}`, `k = 1..=g`; it
//!   crosses cuts `k - 1` and `k` and so runs forward on one sheet and back on
//!   the other.
//!
//! A traversal's sheet is relative to the reference branch on the left side of
//! its chord; across a cut the right side carries the opposite sign.

use super::path::SpanningPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub segment: usize,
    pub direction: i8,
    pub sheet: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    Pair(usize),
    Cross(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub kind: CycleKind,
    pub label: String,
    pub traversals: Vec<Traversal>,
    /// +1 counter-clockwise in the plane.
    pub orientation: i8,
}

impl Cycle {
    fn collapsed(kind: CycleKind, segment: usize, forward_sheet: i8) -> Self {
        let label = match kind {
            CycleKind::Pair(k) => format!("pair-{k}"),
            CycleKind::Cross(k) => format!("cross-{k}"),
        };
        Self {
            kind,
            label,
            traversals: vec![
                Traversal {
                    segment,
                    direction: 1,
                    sheet: forward_sheet,
                },
                Traversal {
                    segment,
                    direction: -1,
                    sheet: -forward_sheet,
                },
            ],
            orientation: 1,
        }
    }

    /// The chord this collapsed loop surrounds.
    pub fn support(&self) -> usize {
        self.traversals[0].segment
    }

    /// Consecutive traversals that turn around a chord endpoint wind once
    /// around a branch point, so the sheet must flip there; every other
    /// junction keeps the sheet.
    pub fn is_closed(&self) -> bool {
        let n = self.traversals.len();
        if n == 0 {
            return false;
        }
        (0..n).all(|i| {
            let a = self.traversals[i];
            let b = self.traversals[(i + 1) % n];
            let turns = a.segment == b.segment && a.direction == -b.direction;
            if turns {
                a.sheet == -b.sheet
            } else {
                a.sheet == b.sheet
            }
        })
    }

    /// Sum of `direction * sheet` weights per chord: the coefficient with
    /// which each chord's reference-branch integral enters the period.
    pub fn chord_weights(&self, segments: usize) -> Vec<i64> {
        let mut w = vec![0i64; segments];
        for t in &self.traversals {
            w[t.segment] += i64::from(t.direction) * i64::from(t.sheet);
        }
        w
    }
}

/// `g + 1` pair-cycles followed by `g` cross-cycles, with their pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSet {
    pub cycles: Vec<Cycle>,
    pub intersection: Vec<Vec<i64>>,
    pub segments: usize,
}

impl CycleSet {
    pub fn genus(&self) -> usize {
        (self.cycles.len() - 1) / 2
    }

    /// Indices of `C_1..C_g, D_1..D_g`, the generators used for the basis.
    pub fn generator_indices(&self) -> Vec<usize> {
        let g = self.genus();
        (1..=g).chain(g + 1..=2 * g).collect()
    }

    /// Intersection matrix restricted to the given cycles.
    pub fn restricted(&self, idx: &[usize]) -> Vec<Vec<i64>> {
        idx.iter()
            .map(|&i| idx.iter().map(|&j| self.intersection[i][j]).collect())
            .collect()
    }
}

pub fn build_cycles(path: &SpanningPath) -> CycleSet {
    let g = path.genus();
    let mut cycles = Vec::with_capacity(2 * g + 1);
    for k in 0..=g {
        // right side of a cut is the opposite sheet of its left side
        cycles.push(Cycle::collapsed(CycleKind::Pair(k), 2 * k, -1));
    }
    for k in 1..=g {
        // gap chords are continuous across, so the forward pass is on the
        // reference sheet and the return pass on the other one
        cycles.push(Cycle::collapsed(CycleKind::Cross(k), 2 * k - 1, 1));
    }
    let intersection = intersection_matrix(&cycles);
    CycleSet {
        cycles,
        intersection,
        segments: path.segments.len(),
    }
}

/// Intersection numbers of collapsed loops.
///
/// Loops around chords that share no endpoint are disjoint. A loop around a
/// gap chord meets a loop around an adjacent cut once, on the reference sheet,
/// near their shared endpoint: `cut . gap = +1` when the gap chord ends where
/// the cut starts and `-1` when it starts where the cut ends, for
/// counter-clockwise loops. Reversing either loop flips the sign.
pub fn intersection_matrix(cycles: &[Cycle]) -> Vec<Vec<i64>> {
    let n = cycles.len();
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (cycles[i].support(), cycles[j].support());
            let orient = i64::from(cycles[i].orientation) * i64::from(cycles[j].orientation);
            let value = match (p % 2 == 0, q % 2 == 0) {
                (true, false) if q + 1 == p => 1,
                (true, false) if q == p + 1 => -1,
                (false, true) if p + 1 == q => -1,
                (false, true) if p == q + 1 => 1,
                _ => 0,
            };
            m[i][j] = value * orient;
        }
    }
    m
}
