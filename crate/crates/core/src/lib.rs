//! Weighted box spaces and the finite machinery that lives on them.
//!
//! A box space is a disjoint union of finite components; a controlled set
//! (here [`Relation`]) is a set of point pairs that never crosses
//! components. On top of that algebra this crate builds:
//!
//! * partial-bijection decompositions of controlled sets ([`label`]),
//! * finite-propagation operators and their spectral norms ([`operator`]),
//! * operator-norm-localization ratios and witness weights ([`localization`]),
//! * weighted boundary-growth ratios for expander detection ([`expander`]),
//! * pair-space measures, translations and Folner certificates ([`folner`]),
//! * unit-vector families certifying property A ([`property_a`]).
//!
//! Everything is deterministic: no randomness, no hashing, canonical
//! orderings throughout. The crate is `no_std`-compatible (with `alloc`);
//! disable default features and enable `libm` for no_std builds.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod expander;
pub mod folner;
pub mod label;
pub mod localization;
pub mod operator;
pub mod property_a;
pub mod relation;
pub mod space;

mod numeric;
mod ratio;

pub use error::Error;
pub use expander::{
    min_boundary_ratio, ww_scan, BoundaryRatio, ExpansionReport, ScanMode, EXACT_CAP,
};
pub use folner::{
    extract_folner, folner_search, heat_kernel, invariance_defect, measure_cs, measure_ct,
    modified_translate, tent_kernel, translate, FolnerCertificate, FolnerOutcome, KernelKind,
    PairFunction, SearchOutcome,
};
pub use label::{build_label, signed_classes, verify_label, Label};
pub use localization::{
    extract_weights, localization_ratio, verify_witness_inequality, LocalizationReport,
    WitnessCheck, WitnessWeights,
};
pub use operator::PropagationOperator;
pub use property_a::{ball_average_family, certificate_quality, heat_family, VectorFamily};
pub use relation::Relation;
pub use space::{BoxSpace, Point, PointSet, SpaceWeights, WeightedComponent};

/// Convenience result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
