//! Period tables and the normalized period matrix.
//!
//! Periods of the ladder cycles are signed sums of chord integrals. The chord
//! integrals are computed on per-chord local branches of `y`; those branches
//! are tied to one global branch (single-valued off the cuts) by continuing
//! `y` along a curve that runs just to the left of the whole spanning path and
//! never crosses it. The sign found on chord `m` is `sigma_m`.

use thiserror::Error;

use crate::homology::{canonical_basis, point_segment_distance, CanonicalBasis, HomologyError, SpanningPath};
use crate::hypercurve::HyperellipticCurve;
use crate::linalg::{self, CMatrix, Lu};
use crate::quadrature::{chord_table, QuadratureConfig, QuadratureError, RootProduct, SegmentBranch};
use crate::scalar::{cx, czero, Cx, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodsError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("alpha-period matrix is singular or ill-conditioned (condition {condition:e})")]
    SingularAMatrix { condition: f64 },
    #[error("Riemann conditions violated: symmetry residual {symmetry_residual:e}, min imaginary eigenvalue {min_imag_eigenvalue:e}")]
    RiemannViolation {
        symmetry_residual: f64,
        min_imag_eigenvalue: f64,
    },
    #[error("could not tie chord {chord} to the global sheet (ratio {ratio})")]
    SheetAlignment { chord: usize, ratio: String },
}

impl PeriodsError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Quadrature(e) => e.code(),
            Self::Homology(e) => e.code(),
            Self::SingularAMatrix { .. } => "periods.SingularAMatrix",
            Self::RiemannViolation { .. } => "periods.RiemannViolation",
            Self::SheetAlignment { .. } => "periods.SheetAlignment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodConfig<T: Real> {
    pub quadrature: QuadratureConfig<T>,
    /// Spanning-path clearance as a fraction of chord length.
    pub clearance: T,
    pub symmetry_tolerance: T,
    /// Largest accepted 1-norm condition number of the alpha-period matrix.
    pub max_condition: T,
}

impl<T: Real> Default for PeriodConfig<T> {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            clearance: T::lit(crate::homology::DEFAULT_CLEARANCE),
            symmetry_tolerance: T::lit(1e-6),
            max_condition: T::lit(1e12),
        }
    }
}

impl<T: Real> PeriodConfig<T> {
    pub fn with_order(order: usize) -> Self {
        Self {
            quadrature: QuadratureConfig::with_order(order),
            ..Self::default()
        }
    }
}

/// Raw periods before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodTable<T: Real> {
    /// `a[i][j]` is the period of differential `i` over alpha cycle `j`.
    pub a: CMatrix<T>,
    /// `b[i][j]` is the period of differential `i` over beta cycle `j`.
    pub b: CMatrix<T>,
    /// `pair_periods[k][i]` is the period of differential `i` over `C_k`.
    pub pair_periods: CMatrix<T>,
    /// Largest propagated quadrature error over all entries.
    pub error_bound: T,
    /// Per-entry error bounds for `a` and `b`, same layout.
    pub a_error: Vec<Vec<T>>,
    pub b_error: Vec<Vec<T>>,
    pub basis: CanonicalBasis,
    /// Sign tying each chord's local branch to the global sheet.
    pub chord_signs: Vec<i8>,
    /// Chord integrals in path direction, `[chord][differential]`.
    pub chord_integrals: CMatrix<T>,
}

impl<T: Real> PeriodTable<T> {
    pub fn genus(&self) -> usize {
        self.a.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrix<T: Real> {
    pub omega: CMatrix<T>,
    pub symmetry_residual: T,
    pub min_imag_eigenvalue: T,
    /// 1-norm condition number of the alpha-period matrix.
    pub condition: T,
    /// First-order bound on the entrywise error of `omega`, from the table's
    /// error bounds plus solve roundoff.
    pub error_bound: T,
}

/// Left unit normal of the chord `a -> b`.
fn left_normal<T: Real>(a: Cx<T>, b: Cx<T>) -> Cx<T> {
    let d = b - a;
    cx(-d.im, d.re) / d.norm()
}

fn segment_distance<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> T {
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut y = x % two_pi;
    if y < T::zero() {
        y += two_pi;
    }
    y
}

/// Polyline running at distance about `offset` to the left of the spanning
/// path, from beside the first chord's midpoint to beside the last one's.
/// Returns the nodes and, per chord, the index of the node beside its midpoint.
fn left_offset_route<T: Real>(points: &[Cx<T>], order: &[usize]) -> (Vec<Cx<T>>, Vec<usize>, T) {
    let p: Vec<Cx<T>> = order.iter().map(|&k| points[k]).collect();
    let chords = p.len() - 1;
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);

    let mut offset = T::infinity();
    for m in 0..chords {
        let len = (p[m + 1] - p[m]).norm();
        offset = offset.min(quarter * len);
        for (k, &q) in p.iter().enumerate() {
            if k != m && k != m + 1 {
                offset = offset.min(point_segment_distance(q, p[m], p[m + 1]));
            }
        }
        for n in m + 2..chords {
            offset = offset.min(segment_distance(p[m], p[m + 1], p[n], p[n + 1]));
        }
    }
    for m in 1..chords {
        let a_in = (p[m - 1] - p[m]).arg();
        let a_out = (p[m + 1] - p[m]).arg();
        let sector = wrap_angle(a_in - a_out);
        if sector < T::PI() {
            let len = (p[m] - p[m - 1]).norm().min((p[m + 1] - p[m]).norm());
            offset = offset.min(half * len * (half * sector).tan());
        }
    }
    let offset = quarter * offset;

    let mut nodes = Vec::new();
    let mut beside = Vec::with_capacity(chords);
    for m in 0..chords {
        if m > 0 {
            let v = p[m];
            let a_in = (p[m - 1] - v).arg();
            let a_out = (p[m + 1] - v).arg();
            let sector = wrap_angle(a_in - a_out);
            if sector <= T::PI() {
                let bis = a_out + half * sector;
                let rho = offset / (half * sector).sin();
                nodes.push(v + Cx::from_polar(rho, bis));
            } else {
                let start = a_in - T::FRAC_PI_2();
                let sweep = sector - T::PI();
                let steps = (sweep / T::FRAC_PI_8()).ceil().to_usize().unwrap_or(1).max(1);
                for s in 0..=steps {
                    let ang = start - sweep * T::from_usize_lossy(s) / T::from_usize_lossy(steps);
                    nodes.push(v + Cx::from_polar(offset, ang));
                }
            }
        }
        let mid = (p[m] + p[m + 1]).scale(half);
        beside.push(nodes.len());
        nodes.push(mid + left_normal(p[m], p[m + 1]).scale(offset));
    }
    (nodes, beside, offset)
}

/// Sign of the global branch relative to each chord's local branch, measured
/// just left of each chord's midpoint.
pub fn chord_sheet_signs<T: Real>(
    curve: &HyperellipticCurve<T>,
    path: &SpanningPath,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<i8>, PeriodsError> {
    let points = curve.branch_points();
    let (route, beside, _) = left_offset_route(points, &path.order);
    let branches: Vec<SegmentBranch<T>> = path
        .segments
        .iter()
        .map(|&(a, b)| SegmentBranch::new(curve, a, b, cfg))
        .collect::<Result<_, _>>()?;
    let start = branches[0].eval_near(route[0])?;
    let tracker = RootProduct {
        roots: points,
        step_tolerance: cfg.step_tolerance,
        min_distance: cfg.separation * crate::hypercurve::diameter(points),
    };
    let (_, values, anchors) = tracker.continue_along(&route, start)?;
    let tol = T::lit(0.1);
    beside
        .iter()
        .enumerate()
        .map(|(m, &node)| {
            let global = values[anchors[node]];
            let local = branches[m].eval_near(route[node])?;
            let ratio = global / local;
            if (ratio - T::one()).norm() < tol {
                Ok(1)
            } else if (ratio + T::one()).norm() < tol {
                Ok(-1)
            } else {
                Err(PeriodsError::SheetAlignment {
                    chord: m,
                    ratio: format!("{ratio}"),
                })
            }
        })
        .collect()
}

/// Periods of every ladder cycle and of the symplectic basis.
pub fn raw_periods<T: Real>(
    curve: &HyperellipticCurve<T>,
    cfg: &PeriodConfig<T>,
) -> Result<PeriodTable<T>, PeriodsError> {
    let basis = canonical_basis(curve, cfg.clearance)?;
    raw_periods_with_basis(curve, basis, cfg)
}

pub fn raw_periods_with_basis<T: Real>(
    curve: &HyperellipticCurve<T>,
    basis: CanonicalBasis,
    cfg: &PeriodConfig<T>,
) -> Result<PeriodTable<T>, PeriodsError> {
    let g = curve.genus();
    let qcfg = &cfg.quadrature;
    let signs = chord_sheet_signs(curve, &basis.path, qcfg)?;
    let table = chord_table(curve, &basis.path.segments, qcfg)?;
    let nseg = basis.path.segments.len();

    let chord_integrals: CMatrix<T> = table
        .iter()
        .map(|row| row.iter().map(|r| r.value).collect())
        .collect();
    let eps = T::epsilon();
    let order = T::from_usize_lossy(qcfg.order);
    let chord_error: Vec<T> = table
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| r.error_estimate + order * eps * r.value.norm())
                .fold(T::zero(), T::max)
        })
        .collect();

    // periods and error bounds of all 2g + 1 ladder cycles
    let mut cycle_periods: CMatrix<T> = linalg::zeros(basis.cycles.cycles.len(), g);
    let mut cycle_error = vec![T::zero(); basis.cycles.cycles.len()];
    for (c, cycle) in basis.cycles.cycles.iter().enumerate() {
        let w = cycle.chord_weights(nseg);
        for m in 0..nseg {
            if w[m] == 0 {
                continue;
            }
            let coeff = T::from_i64(w[m] * i64::from(signs[m])).unwrap();
            for j in 0..g {
                cycle_periods[c][j] = cycle_periods[c][j] + chord_integrals[m][j].scale(coeff);
            }
            cycle_error[c] += coeff.abs() * chord_error[m];
        }
    }
    let pair_periods: CMatrix<T> = cycle_periods[..=g].to_vec();

    let mut a = linalg::zeros(g, g);
    let mut b = linalg::zeros(g, g);
    let mut a_error = vec![vec![T::zero(); g]; g];
    let mut b_error = vec![vec![T::zero(); g]; g];
    for (row, coeffs) in basis.transform.t.iter().enumerate() {
        let mut period = vec![czero(); g];
        let mut err = T::zero();
        for (l, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let src = basis.generators[l];
            let cf = T::from_i64(c).unwrap();
            for j in 0..g {
                period[j] = period[j] + cycle_periods[src][j].scale(cf);
            }
            err += cf.abs() * cycle_error[src];
        }
        for i in 0..g {
            if row < g {
                a[i][row] = period[i];
                a_error[i][row] = err;
            } else {
                b[i][row - g] = period[i];
                b_error[i][row - g] = err;
            }
        }
    }
    let error_bound = cycle_error
        .iter()
        .chain(a_error.iter().flatten())
        .chain(b_error.iter().flatten())
        .copied()
        .fold(T::zero(), T::max);

    Ok(PeriodTable {
        a,
        b,
        pair_periods,
        error_bound,
        a_error,
        b_error,
        basis,
        chord_signs: signs,
        chord_integrals,
    })
}

/// `(max |O_ij - O_ji| / max |O_ij|, smallest eigenvalue of sym(Im O))`
pub fn riemann_residuals<T: Real>(omega: &[Vec<Cx<T>>]) -> (T, T) {
    let n = omega.len();
    let scale = linalg::max_abs(omega);
    let mut asym = T::zero();
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((omega[i][j] - omega[j][i]).norm());
        }
    }
    let symmetry = if scale > T::zero() { asym / scale } else { asym };
    let half = T::lit(0.5);
    let im: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| half * (omega[i][j].im + omega[j][i].im)).collect())
        .collect();
    let min_eig = linalg::symmetric_eigenvalues(&im)
        .first()
        .copied()
        .unwrap_or(T::zero());
    (symmetry, min_eig)
}

/// `Omega = A^-1 B`, accepted only if it lies in the Siegel upper half-space
/// to within the configured symmetry tolerance.
pub fn normalized_period_matrix<T: Real>(
    table: &PeriodTable<T>,
    cfg: &PeriodConfig<T>,
) -> Result<PeriodMatrix<T>, PeriodsError> {
    let pm = normalize_unchecked(table, cfg)?;
    if !(pm.symmetry_residual <= cfg.symmetry_tolerance) || !(pm.min_imag_eigenvalue > T::zero()) {
        return Err(PeriodsError::RiemannViolation {
            symmetry_residual: pm.symmetry_residual.to_f64_lossy(),
            min_imag_eigenvalue: pm.min_imag_eigenvalue.to_f64_lossy(),
        });
    }
    Ok(pm)
}

/// Normalization without the Riemann acceptance test.
pub fn normalize_unchecked<T: Real>(
    table: &PeriodTable<T>,
    cfg: &PeriodConfig<T>,
) -> Result<PeriodMatrix<T>, PeriodsError> {
    let singular = |condition: T| PeriodsError::SingularAMatrix {
        condition: condition.to_f64_lossy(),
    };
    let lu = Lu::factor(&table.a).ok_or_else(|| singular(T::infinity()))?;
    let inv = lu.inverse();
    let condition = linalg::norm_one(&table.a) * linalg::norm_one(&inv);
    if !(condition <= cfg.max_condition) {
        return Err(singular(condition));
    }
    let omega = lu.solve(&table.b);
    let (symmetry_residual, min_imag_eigenvalue) = riemann_residuals(&omega);

    let row_err = |e: &[Vec<T>]| e.iter().map(|r| r.iter().fold(T::zero(), |s, &x| s + x)).fold(T::zero(), T::max);
    let omega_norm = linalg::norm_inf(&omega);
    let error_bound = linalg::norm_inf(&inv) * (row_err(&table.b_error) + row_err(&table.a_error) * omega_norm)
        + condition * T::epsilon() * omega_norm;
    Ok(PeriodMatrix {
        omega,
        symmetry_residual,
        min_imag_eigenvalue,
        condition,
        error_bound,
    })
}

/// Branch points to accepted period matrix.
pub fn period_matrix<T: Real>(
    curve: &HyperellipticCurve<T>,
    cfg: &PeriodConfig<T>,
) -> Result<(PeriodTable<T>, PeriodMatrix<T>), PeriodsError> {
    let table = raw_periods(curve, cfg)?;
    let pm = normalized_period_matrix(&table, cfg)?;
    Ok((table, pm))
}
