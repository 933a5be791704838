//! Combinatorial spherical curves.
//!
//! Curves are handled as Gauss words (chord diagrams) plus per-crossing
//! chiralities. On top of that the crate provides the inverse half-twisted
//! splice, the reductivity invariant with witnesses, exhaustive enumeration
//! of curves by crossing number, and a discharging audit with exact rational
//! charges.

pub mod analytics;
pub mod discharge;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod gauss;
pub mod reductivity;
pub mod splice;

pub use analytics::{
    find_bigons, find_trigons, match_tangles, BigonReport, TanglePredicate, TangleSet, TrigonLetter, TrigonReport,
    TrigonSignature,
};
pub use embedding::{
    coherence, is_realizable, realize_all, realize_all_with, Chirality, Convention, Dart, EmbeddingKey, Face,
    FaceMap, PlaneCurve,
};
pub use discharge::{
    apply_rule, initial_charges, unavoidable_scan, ChargeState, DischargeRule, Receiver, ScanReport, Verdict,
};
pub use enumerate::{enumerate_maps, enumerate_words, CurveCensus};
pub use error::{Error, ParseError, Result};
pub use gauss::{read_words, CanonicalKey, GaussWord, InterlacementGraph, Label};
pub use reductivity::{reductivity, survey, ReductivityResult, Survey, SurveyRow};
pub use splice::{
    connected_sum, half_twisted_splice, inverse_splice, inverse_splice_curve, SpliceKind, SpliceSite, SpliceStep,
    SplicedCurve,
};
