//! Relations among pair-cycle periods and the exclusion test for flat period
//! configurations.
//!
//! The loops around all cuts together bound the point at infinity, which is
//! not a branch point in the even model, so `sum_k C_k ~ 0` and every column of
//! the pair-period table sums to zero. If all rows were (nearly) equal, that
//! sum would be `(g + 1) r`, forcing `r` to (nearly) vanish.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, CMatrix};
use crate::periods::riemann_residuals;
use crate::scalar::{cx, czero, Cx, Real};

pub const DEFAULT_FLATNESS_EPSILON: f64 = 1e-6;
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;

/// Rounds of phase contraction per attempt.
const CONTRACTION_ROUNDS: usize = 64;
const CONTRACTION_FACTOR: f64 = 0.5;
const MAX_ATTEMPTS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchottkyError {
    #[error("coefficient vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("largest row norm {norm:e} is below the zero threshold {threshold:e}")]
    ZeroMatrix { norm: f64, threshold: f64 },
    #[error("empty or ragged pair-period matrix")]
    EmptyMatrix,
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("no equal-modulus matrix with positive definite imaginary part after {attempts} attempts")]
    ConstructionFailed { attempts: u64 },
}

impl SchottkyError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::LengthMismatch { .. } => "schottky.LengthMismatch",
            Self::ZeroMatrix { .. } => "schottky.ZeroMatrix",
            Self::EmptyMatrix => "schottky.EmptyMatrix",
            Self::ZeroGenus => "schottky.ZeroGenus",
            Self::ConstructionFailed { .. } => "schottky.ConstructionFailed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResidual<T: Real> {
    pub coefficients: Vec<i64>,
    /// `sum_k c_k P[k][j]` per differential `j`.
    pub residuals: Vec<Cx<T>>,
    /// Largest `|residual_j| / max_k |P[k][j]|`.
    pub max_relative: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionVerdict<T: Real> {
    pub excluded: bool,
    pub flatness: T,
    pub witness: String,
    /// Largest entry of the column sums, relative to the largest row norm.
    pub null_residual: T,
    /// `C` in the row-norm bound `|r| <= C eps N`.
    pub bound_constant: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionConfig<T: Real> {
    pub epsilon: T,
    pub zero_threshold: T,
    /// Magnitude the zero threshold is relative to.
    pub scale: T,
}

impl<T: Real> Default for ExclusionConfig<T> {
    fn default() -> Self {
        Self {
            epsilon: T::lit(DEFAULT_FLATNESS_EPSILON),
            zero_threshold: T::lit(DEFAULT_ZERO_THRESHOLD),
            scale: T::one(),
        }
    }
}

fn check_shape<T: Real>(p: &[Vec<Cx<T>>]) -> Result<usize, SchottkyError> {
    let cols = p.first().map_or(0, Vec::len);
    if cols == 0 || p.iter().any(|r| r.len() != cols) {
        return Err(SchottkyError::EmptyMatrix);
    }
    Ok(cols)
}

pub fn null_relation_residual<T: Real>(pair_periods: &[Vec<Cx<T>>]) -> Result<RelationResidual<T>, SchottkyError> {
    custom_relation_residual(pair_periods, &vec![1; pair_periods.len()])
}

pub fn custom_relation_residual<T: Real>(
    pair_periods: &[Vec<Cx<T>>],
    coefficients: &[i64],
) -> Result<RelationResidual<T>, SchottkyError> {
    let cols = check_shape(pair_periods)?;
    if coefficients.len() != pair_periods.len() {
        return Err(SchottkyError::LengthMismatch {
            expected: pair_periods.len(),
            got: coefficients.len(),
        });
    }
    let mut residuals = vec![czero(); cols];
    let mut max_relative = T::zero();
    for (j, res) in residuals.iter_mut().enumerate() {
        let mut scale = T::zero();
        for (row, &c) in pair_periods.iter().zip(coefficients) {
            *res = *res + row[j].scale(T::from_i64(c).unwrap());
            scale = scale.max(row[j].norm());
        }
        let rel = if scale > T::zero() { res.norm() / scale } else { res.norm() };
        max_relative = max_relative.max(rel);
    }
    Ok(RelationResidual {
        coefficients: coefficients.to_vec(),
        residuals,
        max_relative,
    })
}

fn row_norm<T: Real>(r: &[Cx<T>]) -> T {
    r.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

fn row_distance<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((x - y).norm()))
}

/// Largest pairwise row distance over the largest row norm, both in the
/// max-modulus norm.
pub fn flatness_measure<T: Real>(pair_periods: &[Vec<Cx<T>>]) -> Result<T, SchottkyError> {
    flatness_measure_with(pair_periods, &ExclusionConfig::default())
}

pub fn flatness_measure_with<T: Real>(
    pair_periods: &[Vec<Cx<T>>],
    cfg: &ExclusionConfig<T>,
) -> Result<T, SchottkyError> {
    check_shape(pair_periods)?;
    let norm = pair_periods.iter().map(|r| row_norm(r)).fold(T::zero(), T::max);
    let threshold = cfg.zero_threshold * cfg.scale;
    if !(norm > threshold) {
        return Err(SchottkyError::ZeroMatrix {
            norm: norm.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    let mut dist = T::zero();
    for (a, ra) in pair_periods.iter().enumerate() {
        for rb in &pair_periods[a + 1..] {
            dist = dist.max(row_distance(ra, rb));
        }
    }
    Ok(dist / norm)
}

pub fn hyperelliptic_exclusion<T: Real>(
    pair_periods: &[Vec<Cx<T>>],
    cfg: &ExclusionConfig<T>,
) -> Result<ExclusionVerdict<T>, SchottkyError> {
    let flatness = flatness_measure_with(pair_periods, cfg)?;
    let rows = pair_periods.len();
    let g = rows.saturating_sub(1);
    let norm = pair_periods.iter().map(|r| row_norm(r)).fold(T::zero(), T::max);
    let sums = null_relation_residual(pair_periods)?.residuals;
    let null_residual = row_norm(&sums) / norm;
    let gp1 = T::from_usize_lossy(g + 1);
    let bound_constant = T::from_usize_lossy(2 * g + 1) / gp1 + T::one();
    let excluded = flatness <= cfg.epsilon;
    let witness = if excluded {
        format!(
            "all {rows} rows agree within {flatness:e} of the largest row norm {norm:e}; \
             their sum is (g+1)*r with |(g+1)*r| = {:e} (relative {null_residual:e}); \
             the relation sum_k C_k = 0 would force every row norm <= C*eps*N = {:e} \
             with C = (2g+1)/(g+1)+1 = {bound_constant}, contradicting the row norm {norm:e}",
            null_residual * norm,
            bound_constant * cfg.epsilon * norm,
        )
    } else {
        format!(
            "rows differ by {flatness:e} relative to the largest row norm, above eps = {:e}; \
             the equal-row contradiction does not apply (relative null residual {null_residual:e})",
            cfg.epsilon
        )
    };
    Ok(ExclusionVerdict {
        excluded,
        flatness,
        witness,
        null_residual,
        bound_constant,
    })
}

/// `(g + 1) x g` matrix whose rows all equal one fixed nonzero row.
pub fn synthetic_flat<T: Real>(g: usize) -> CMatrix<T> {
    let row: Vec<Cx<T>> = (0..g)
        .map(|j| Cx::from_polar(T::one(), T::lit(0.7) * T::from_usize_lossy(j + 1)))
        .collect();
    vec![row; g + 1]
}

fn is_positive_definite<T: Real>(m: &[Vec<Cx<T>>]) -> bool {
    riemann_residuals(m).1 > T::zero()
}

/// Symmetric `g x g` matrix, every entry of modulus one, with positive definite
/// imaginary part. The diagonal is `i`; off-diagonal phases start uniform and
/// their sines are contracted towards zero until the imaginary part is
/// positive definite.
pub fn equal_modulus_abelian_variety<T: Real>(g: usize, seed: u64) -> Result<CMatrix<T>, SchottkyError> {
    if g == 0 {
        return Err(SchottkyError::ZeroGenus);
    }
    let lambda = T::lit(CONTRACTION_FACTOR);
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut m = linalg::zeros(g, g);
        for i in 0..g {
            m[i][i] = cx(T::zero(), T::one());
            for j in i + 1..g {
                let phi = T::lit(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
                m[i][j] = Cx::from_polar(T::one(), phi);
                m[j][i] = m[i][j];
            }
        }
        for _ in 0..=CONTRACTION_ROUNDS {
            if is_positive_definite(&m) {
                return Ok(m);
            }
            for i in 0..g {
                for j in i + 1..g {
                    let s = m[i][j].im * lambda;
                    let c = (T::one() - s * s).sqrt();
                    let c = if m[i][j].re < T::zero() { -c } else { c };
                    m[i][j] = cx(c, s);
                    m[j][i] = m[i][j];
                }
            }
        }
    }
    Err(SchottkyError::ConstructionFailed { attempts: MAX_ATTEMPTS })
}
