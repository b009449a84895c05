//! JSON shapes of every subcommand's output. Each one deserializes back
//! into itself, which the integration tests rely on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use ramify::abelian::AbelianGroupStructure;
use ramify::bounds::{BoundReport, GeneratorRankComparison, TowerRow};
use ramify::classfield::{BinaryQuadraticForm, CriterionRow, IndexedPrime, RayClassResult};
use ramify::herbrand::{Filtration, HerbrandMap};
use ramify::localfields::LocalFieldSpec;
use ramify::ramgroups::{CatalogEntry, DepthIndex, NaiveLiftReport};
use ramify::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub x: Rational,
    pub phi: Rational,
    pub psi: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HerbrandOutput {
    pub filtration: Filtration,
    pub phi: HerbrandMap,
    pub psi: HerbrandMap,
    pub lower_jumps: Vec<u64>,
    pub upper_jumps: Vec<Rational>,
    pub different_valuation: u64,
    pub rows: Vec<Evaluation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthVerdict {
    pub depth: DepthIndex,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationOutput {
    pub name: String,
    pub orders: Filtration,
    pub inertia: u64,
    pub different_valuation: u64,
    pub lower_jumps: Vec<u64>,
    pub upper_jumps: Vec<Rational>,
    pub rows: Vec<DepthVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogListing {
    pub rows: Vec<CatalogEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NaiveLiftOutput {
    #[serde(flatten)]
    pub report: NaiveLiftReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalRankRow {
    pub nu: DepthIndex,
    pub prank: usize,
    pub delta_p_nu: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalRankOutput {
    pub field: LocalFieldSpec,
    pub p: u64,
    pub degree: u32,
    pub delta_p: u32,
    pub rows: Vec<LocalRankRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGroupOutput {
    pub discriminant: i64,
    pub h: usize,
    pub class_group: AbelianGroupStructure,
    /// Forms whose classes generate the cyclic factors, in order.
    pub generators: Vec<BinaryQuadraticForm>,
    pub forms: Vec<BinaryQuadraticForm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayClassOutput {
    pub discriminant: i64,
    pub h: u64,
    pub class_group: AbelianGroupStructure,
    pub ray_class: RayClassResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRankOutput {
    pub base: String,
    pub set: Vec<IndexedPrime>,
    pub p: u64,
    #[serde(flatten)]
    pub comparison: GeneratorRankComparison,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdBoundOutput {
    pub base: String,
    pub set: Vec<IndexedPrime>,
    pub p: u64,
    pub root_discriminant: BoundReport,
    /// Bound from the depth indices; absent when undefined.
    pub depth_bound: Option<BoundReport>,
    /// Bound from the conductor exponents ⌈ν⌉; absent when undefined.
    pub conductor_bound: Option<BoundReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerOutput {
    pub p: u64,
    pub levels: u32,
    pub rows: Vec<TowerRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub min: u64,
    pub max: u64,
    pub count: usize,
    pub all_agree: bool,
    pub rows: Vec<CriterionRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub kind: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorOutput {
    pub error: ErrorBody,
}
