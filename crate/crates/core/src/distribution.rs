//! Real lists derived from periods: sorting, discrete concavity, and the
//! axial spread of arguments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Cx, Real};

/// Relative tolerance for the "straight" concavity verdict.
pub const DEFAULT_FLATNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("argument of a zero period at position {index}")]
    ArgumentOfZero { index: usize },
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("empty period list")]
    Empty,
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("matrix is not square ({rows} rows, {cols} columns)")]
    NonSquare { rows: usize, cols: usize },
}

impl DistributionError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::ArgumentOfZero { .. } => "distribution.ArgumentOfZero",
            Self::TooShort { .. } => "distribution.TooShort",
            Self::Empty => "distribution.Empty",
            Self::ParseError { .. } => "distribution.ParseError",
            Self::NonSquare { .. } => "distribution.NonSquare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Modulus,
    ModulusSquared,
    Argument,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Modulus => "modulus",
            Mode::ModulusSquared => "modulus2",
            Mode::Argument => "argument",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "modulus" => Ok(Mode::Modulus),
            "modulus2" | "modulus_squared" => Ok(Mode::ModulusSquared),
            "argument" => Ok(Mode::Argument),
            _ => Err(format!("unknown mode {s:?} (expected modulus, modulus2 or argument)")),
        }
    }
}

/// Which matrix entries count as periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entries {
    /// Upper triangle including the diagonal, row by row.
    UpperTriangle,
    All,
}

impl FromStr for Entries {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "upper" | "upper_triangle" => Ok(Entries::UpperTriangle),
            "all" => Ok(Entries::All),
            _ => Err(format!("unknown entry selection {s:?} (expected upper or all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ComputedCurve,
    IngestedMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodDistribution<T> {
    pub mode: Mode,
    /// Weakly decreasing.
    pub values: Vec<T>,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConcaveUp,
    Straight,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityProfile<T> {
    pub second_differences: Vec<T>,
    pub fraction_nonnegative: T,
    pub verdict: Verdict,
}

pub fn select_entries<T: Real>(matrix: &[Vec<Cx<T>>], entries: Entries) -> Vec<Cx<T>> {
    match entries {
        Entries::All => matrix.iter().flatten().copied().collect(),
        Entries::UpperTriangle => matrix
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().skip(i).copied())
            .collect(),
    }
}

pub fn to_real_list<T: Real>(periods: &[Cx<T>], mode: Mode) -> Result<Vec<T>, DistributionError> {
    if periods.is_empty() {
        return Err(DistributionError::Empty);
    }
    periods
        .iter()
        .enumerate()
        .map(|(index, z)| match mode {
            Mode::Modulus => Ok(z.norm()),
            Mode::ModulusSquared => Ok(z.norm_sqr()),
            Mode::Argument => {
                if z.re == T::zero() && z.im == T::zero() {
                    Err(DistributionError::ArgumentOfZero { index })
                } else if z.im == T::zero() && z.re < T::zero() {
                    // keep the principal value at +pi for negative zero too
                    Ok(T::PI())
                } else {
                    Ok(z.arg())
                }
            }
        })
        .collect()
}

/// Descending, stable with respect to ties.
pub fn sorted_distribution<T: Real>(values: &[T], mode: Mode, source: Source) -> PeriodDistribution<T> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    PeriodDistribution {
        mode,
        values: v,
        source,
    }
}

pub fn concavity_profile<T: Real>(dist: &PeriodDistribution<T>) -> Result<ConcavityProfile<T>, DistributionError> {
    concavity_profile_with(dist, T::lit(DEFAULT_FLATNESS_TOLERANCE))
}

pub fn concavity_profile_with<T: Real>(
    dist: &PeriodDistribution<T>,
    tolerance: T,
) -> Result<ConcavityProfile<T>, DistributionError> {
    let p = &dist.values;
    if p.len() < 3 {
        return Err(DistributionError::TooShort { needed: 3, got: p.len() });
    }
    let d2: Vec<T> = p.windows(3).map(|w| w[2] - (w[1] + w[1]) + w[0]).collect();
    let scale = p.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let tol = tolerance * scale;
    let max_d2 = d2.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let nonneg = d2.iter().filter(|&&x| x >= T::zero()).count();
    let verdict = if max_d2 <= tol {
        Verdict::Straight
    } else if d2.iter().all(|&x| x >= -tol) {
        Verdict::ConcaveUp
    } else {
        Verdict::Mixed
    };
    Ok(ConcavityProfile {
        fraction_nonnegative: T::from_usize_lossy(nonneg) / T::from_usize_lossy(d2.len()),
        second_differences: d2,
        verdict,
    })
}

/// Circular variance of the doubled arguments: 0 when all periods lie on one
/// line through the origin, 1 when they are maximally spread.
pub fn argument_spread<T: Real>(periods: &[Cx<T>]) -> Result<T, DistributionError> {
    if periods.is_empty() {
        return Err(DistributionError::Empty);
    }
    let mut sum = Cx::new(T::zero(), T::zero());
    for (index, z) in periods.iter().enumerate() {
        let r = z.norm();
        if r == T::zero() {
            return Err(DistributionError::ArgumentOfZero { index });
        }
        let u = z / r;
        sum = sum + u * u;
    }
    let mean = sum.norm() / T::from_usize_lossy(periods.len());
    Ok((T::one() - mean).max(T::zero()).min(T::one()))
}
