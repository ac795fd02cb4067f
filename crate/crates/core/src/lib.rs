//! Period matrices of hyperelliptic curves `y^2 = prod (x - b_i)` from their
//! branch points, with distribution statistics of the periods and the
//! equal-period exclusion test.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod distribution;
pub mod homology;
pub mod hypercurve;
pub mod io;
pub mod linalg;
pub mod periods;
pub mod quadrature;
pub mod scalar;
pub mod schottky;

use thiserror::Error;

pub type Complex = num_complex::Complex64;
pub type Curve = hypercurve::HyperellipticCurve<f64>;
pub type BranchPoints = hypercurve::BranchPointSet<f64>;
pub type PeriodTable = periods::PeriodTable<f64>;
pub type PeriodMatrix = periods::PeriodMatrix<f64>;
pub type PeriodConfig = periods::PeriodConfig<f64>;
pub type Distribution = distribution::PeriodDistribution<f64>;
pub type Concavity = distribution::ConcavityProfile<f64>;
pub type Verdict = schottky::ExclusionVerdict<f64>;

/// Any failure in the pipeline, with a module-qualified code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Hypercurve(#[from] hypercurve::HypercurveError),
    #[error(transparent)]
    Quadrature(#[from] quadrature::QuadratureError),
    #[error(transparent)]
    Homology(#[from] homology::HomologyError),
    #[error(transparent)]
    Periods(#[from] periods::PeriodsError),
    #[error(transparent)]
    Distribution(#[from] distribution::DistributionError),
    #[error(transparent)]
    Schottky(#[from] schottky::SchottkyError),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Hypercurve(e) => e.code(),
            Error::Quadrature(e) => e.code(),
            Error::Homology(e) => e.code(),
            Error::Periods(e) => e.code(),
            Error::Distribution(e) => e.code(),
            Error::Schottky(e) => e.code(),
        }
    }
}
