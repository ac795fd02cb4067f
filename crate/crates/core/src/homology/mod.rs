//! Canonical homology basis of a hyperelliptic curve.
//!
//! Everything here is combinatorial or exact-integer; the only floating-point
//! input is the branch-point geometry used to pick the spanning path.

mod cycles;
mod path;
mod symplectic;

use thiserror::Error;

use crate::hypercurve::HyperellipticCurve;
use crate::scalar::Real;

pub use cycles::{build_cycles, intersection_matrix, Cycle, CycleKind, CycleSet, Traversal};
pub use path::{spanning_path, SpanningPath, DEFAULT_CLEARANCE};
pub use symplectic::{
    congruence, determinant, identity, mat_mul, standard_form, symplectic_reduce, transpose,
    IntMatrix, SymplecticTransform,
};

pub(crate) use path::point_segment_distance;
#[cfg(test)]
pub(crate) use path::segments_meet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("no spanning path with the required clearance; branch point {} is too close to chord {} -> {}", .triple[1], .triple[0], .triple[2])]
    NoClearPath { triple: [usize; 3] },
    #[error("intersection form is not unimodular")]
    NotUnimodular,
    #[error("intersection form is not antisymmetric")]
    NotAntisymmetric,
    #[error("intersection form must be square of even size")]
    NotSquare,
}

impl HomologyError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::NoClearPath { .. } => "homology.NoClearPath",
            Self::NotUnimodular => "homology.NotUnimodular",
            Self::NotAntisymmetric => "homology.NotAntisymmetric",
            Self::NotSquare => "homology.NotSquare",
        }
    }
}

/// Spanning path, ladder cycles, and the integer change of basis from
/// `(C_1..C_g, D_1..D_g)` to a symplectic basis. `C_0` stays in `cycles` as
/// the dependent pair-cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalBasis {
    pub path: SpanningPath,
    pub cycles: CycleSet,
    pub generators: Vec<usize>,
    pub transform: SymplecticTransform<i64>,
}

impl CanonicalBasis {
    pub fn genus(&self) -> usize {
        self.transform.genus()
    }

    /// Intersection matrix of the generators before reduction.
    pub fn generator_form(&self) -> IntMatrix<i64> {
        self.cycles.restricted(&self.generators)
    }

    /// Intersection matrix of the returned basis; equals `J`.
    pub fn basis_form(&self) -> IntMatrix<i64> {
        self.transform.apply(&self.generator_form())
    }
}

pub fn canonical_basis<T: Real>(
    curve: &HyperellipticCurve<T>,
    clearance: T,
) -> Result<CanonicalBasis, HomologyError> {
    let path = spanning_path(curve.branch(), clearance)?;
    let cycles = build_cycles(&path);
    let generators = cycles.generator_indices();
    let transform = symplectic_reduce(&cycles.restricted(&generators))?;
    Ok(CanonicalBasis {
        path,
        cycles,
        generators,
        transform,
    })
}
