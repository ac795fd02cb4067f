//! Serializable output records. Field order is declaration order, so output
//! is byte-stable for a given input and configuration.

use hyperperiod::distribution::{ConcavityProfile, Entries, Mode, Source, Verdict};
use hyperperiod::homology::{CanonicalBasis, CycleKind};
use hyperperiod::hypercurve::TransformRecord;
use hyperperiod::schottky::RelationResidual;
use hyperperiod::Complex;
use serde::Serialize;

pub type Pair = [f64; 2];

pub fn pair(z: Complex) -> Pair {
    [z.re, z.im]
}

pub fn pairs(m: &[Vec<Complex>]) -> Vec<Vec<Pair>> {
    m.iter().map(|r| r.iter().copied().map(pair).collect()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub quadrature_order: usize,
    pub symmetry_tolerance: f64,
    pub flatness_epsilon: f64,
    pub distribution_mode: &'static str,
    pub entry_selection: &'static str,
    pub step_tolerance: f64,
    pub separation: f64,
    pub clearance: f64,
}

pub fn entries_name(e: Entries) -> &'static str {
    match e {
        Entries::UpperTriangle => "upper_triangle",
        Entries::All => "all",
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    m.name()
}

pub fn source_name(s: &Source) -> &'static str {
    match s {
        Source::ComputedCurve => "computed_curve",
        Source::IngestedMatrix => "ingested_matrix",
    }
}

#[derive(Debug, Serialize)]
pub struct Transform {
    /// The map is `x -> 1 / (x - shift)`; the image of infinity, `0`, is
    /// appended as the last branch point.
    pub map: &'static str,
    pub shift: Pair,
    pub original: Vec<Pair>,
    pub branch_points: Vec<Pair>,
}

impl Transform {
    pub fn new(record: &TransformRecord<f64>, branch_points: &[Complex]) -> Self {
        Self {
            map: "x -> 1/(x - shift)",
            shift: pair(record.shift),
            original: record.original.iter().copied().map(pair).collect(),
            branch_points: branch_points.iter().copied().map(pair).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TraversalDump {
    pub segment: usize,
    pub direction: i8,
    pub sheet: i8,
}

#[derive(Debug, Serialize)]
pub struct CycleDump {
    pub label: String,
    pub kind: &'static str,
    pub index: usize,
    pub orientation: i8,
    pub traversals: Vec<TraversalDump>,
}

#[derive(Debug, Serialize)]
pub struct HomologyDump {
    pub path_order: Vec<usize>,
    pub segments: Vec<[usize; 2]>,
    pub cycles: Vec<CycleDump>,
    pub intersection: Vec<Vec<i64>>,
    /// Indices into `cycles` of the generators fed to the reduction.
    pub generators: Vec<usize>,
    /// Rows are the alpha then beta cycles in terms of the generators.
    pub symplectic_transform: Vec<Vec<i64>>,
    pub chord_signs: Vec<i8>,
}

impl HomologyDump {
    pub fn new(basis: &CanonicalBasis, chord_signs: &[i8]) -> Self {
        let cycles = basis
            .cycles
            .cycles
            .iter()
            .map(|c| {
                let (kind, index) = match c.kind {
                    CycleKind::Pair(k) => ("pair", k),
                    CycleKind::Cross(k) => ("cross", k),
                };
                CycleDump {
                    label: c.label.clone(),
                    kind,
                    index,
                    orientation: c.orientation,
                    traversals: c
                        .traversals
                        .iter()
                        .map(|t| TraversalDump {
                            segment: t.segment,
                            direction: t.direction,
                            sheet: t.sheet,
                        })
                        .collect(),
                }
            })
            .collect();
        Self {
            path_order: basis.path.order.clone(),
            segments: basis.path.segments.iter().map(|&(a, b)| [a, b]).collect(),
            cycles,
            intersection: basis.cycles.intersection.clone(),
            generators: basis.generators.clone(),
            symplectic_transform: basis.transform.t.clone(),
            chord_signs: chord_signs.to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PeriodsReport {
    pub config: RunConfig,
    pub genus: usize,
    pub omega: Vec<Vec<Pair>>,
    pub symmetry_residual: f64,
    pub min_imag_eigenvalue: f64,
    pub error_bound: f64,
    pub condition: f64,
    pub transform: Option<Transform>,
    pub pair_periods: Vec<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyDump>,
}

#[derive(Debug, Serialize)]
pub struct ConcavityReport {
    pub second_differences: Vec<f64>,
    pub fraction_nonnegative: f64,
    pub verdict: Verdict,
}

impl From<ConcavityProfile<f64>> for ConcavityReport {
    fn from(p: ConcavityProfile<f64>) -> Self {
        Self {
            second_differences: p.second_differences,
            fraction_nonnegative: p.fraction_nonnegative,
            verdict: p.verdict,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub config: RunConfig,
    pub source: &'static str,
    pub genus: usize,
    pub count: usize,
    pub symmetry_residual: f64,
    pub min_imag_eigenvalue: f64,
    /// Absent when fewer than three values are available.
    pub concavity: Option<ConcavityReport>,
    /// Absent when a selected entry is zero.
    pub argument_spread: Option<f64>,
    pub max: Option<f64>,
    pub min: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RelationReport {
    pub coefficients: Vec<i64>,
    pub residuals: Vec<Pair>,
    pub max_relative: f64,
}

impl From<RelationResidual<f64>> for RelationReport {
    fn from(r: RelationResidual<f64>) -> Self {
        Self {
            coefficients: r.coefficients,
            residuals: r.residuals.into_iter().map(pair).collect(),
            max_relative: r.max_relative,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub config: RunConfig,
    pub source: &'static str,
    pub genus: usize,
    pub excluded: bool,
    pub flatness: f64,
    pub witness: String,
    pub null_relation_residual: RelationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom_relation_residual: Option<RelationReport>,
    pub bound_constant: f64,
    /// Quadrature error bound of the pair periods; absent for synthetic input.
    pub error_bound: Option<f64>,
    pub transform: Option<Transform>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}
