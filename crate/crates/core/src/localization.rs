//! Operator norm localization: how much of an operator's norm survives
//! compression to bounded balls, and the constructive extraction of
//! witness weights when localization fails.
//!
//! The extraction mirrors the operator-side argument: restrict `a` away
//! from already-used columns, form `b = P a* a P` on the remaining points,
//! take the top eigenpair `(lambda, xi)`, and turn `|xi|^2` into a
//! probability measure. When every bounded compression of `a` loses a
//! factor `c < 1/3` of the norm, those weights satisfy
//! `w(S[Y]) >= 3 w(Y)` for `S = a.propagation^-1 o a.propagation` and every
//! bounded `Y` - the boundary-growth signature of an expander.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::numeric;
use crate::operator::PropagationOperator;
use crate::ratio::{min_bounded_ratio, ScanMode};
use crate::relation::Relation;
use crate::space::{Point, PointSet};
use crate::Result;

/// Weights below this threshold are dropped from extracted witnesses.
pub const WEIGHT_DROP_TOL: f64 = 1e-14;

/// Report of a localization-ratio scan.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    /// Spectral norm of the whole operator (max over components).
    pub operator_norm: f64,
    /// Largest `||a P_{F[x]}|| / ||a||` over all ball centers `x`.
    pub best_ratio: f64,
    pub best_ball_center: Point,
    pub per_center_ratios: Vec<(Point, f64)>,
}

impl LocalizationReport {
    /// Localization holds at constant `c` iff some bounded ball keeps a
    /// `c`-fraction of the norm.
    pub fn holds_at(&self, c: f64) -> bool {
        self.best_ratio >= c
    }
}

/// For every point `x`, computes `||a P_{F[x]}|| / ||a||`. Monotonicity of
/// the compressed norm in the column set reduces the supremum over all
/// F-bounded sets to the maximal balls `F[x]`.
pub fn localization_ratio(
    a: &PropagationOperator,
    f: &Relation,
    tol: f64,
) -> Result<LocalizationReport> {
    if a.space() != f.space() {
        return Err(Error::SpaceMismatch);
    }
    let norm = a.norm(tol)?;
    if norm <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let mut per_center_ratios = Vec::new();
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_ball_center = Point::new(0, 0);
    for point in a.space().points() {
        let ball = f.ball_of(point);
        let ratio = a.compressed_norm(&ball, tol)? / norm;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_ball_center = point;
        }
        per_center_ratios.push((point, ratio));
    }
    Ok(LocalizationReport {
        operator_norm: norm,
        best_ratio,
        best_ball_center,
        per_center_ratios,
    })
}

/// Witness weights extracted from one component: `|xi|^2` for a top
/// eigenvector `xi` of the restricted Gram operator, together with its
/// eigenvalue and support.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessWeights {
    pub component: u32,
    /// Full-length weight vector: strictly positive on `support`, zero off
    /// it, summing to one.
    pub weights: Vec<f64>,
    /// `lambda = ||b||` for `b = P a* a P`.
    pub source_eigenvalue: f64,
    pub support: PointSet,
}

/// Restricts `a` to the columns of `component` outside `forbidden`, forms
/// `b = P a* a P` on the remaining points, and returns the top eigenpair
/// as a probability weight vector. Entries of `|xi|^2` below 1e-14 are
/// dropped and the rest renormalized.
///
/// Degenerate top eigenspaces resolve deterministically: power iteration
/// always starts from the same fixed seed.
pub fn extract_weights(
    a: &PropagationOperator,
    component: u32,
    forbidden: &PointSet,
    tol: f64,
) -> Result<WitnessWeights> {
    let size = a.space().size(component)? as usize;
    if forbidden.component() != component {
        return Err(Error::SpaceMismatch);
    }
    let keep: Vec<u32> = (0..size as u32)
        .filter(|i| !forbidden.contains(*i))
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyRestriction);
    }
    let restricted = a.zero_columns(forbidden);
    if restricted
        .gram_diagonal(component)
        .iter()
        .all(|&d| d == 0.0)
    {
        return Err(Error::ZeroOperator);
    }

    let mut tmp = vec![0.0f64; size];
    // The restricted operator has zero columns on `forbidden`, so
    // a* a v vanishes there on its own; only the seed needs a projection,
    // which the first iteration performs implicitly.
    let (lambda, mut xi) = numeric::top_eigenpair(
        |v, out| {
            restricted.apply_component(component, v, &mut tmp);
            restricted.apply_component_transpose(component, &tmp, out);
        },
        size,
        tol,
        1e-9,
    )?;
    if lambda <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    for i in forbidden.iter() {
        xi[i as usize] = 0.0;
    }
    let norm_sq: f64 = xi.iter().map(|x| x * x).sum();
    let mut weights: Vec<f64> = xi.iter().map(|x| x * x / norm_sq).collect();
    let mut support = Vec::new();
    for (i, w) in weights.iter_mut().enumerate() {
        if *w < WEIGHT_DROP_TOL {
            *w = 0.0;
        } else {
            support.push(i as u32);
        }
    }
    if support.is_empty() {
        return Err(Error::ZeroOperator);
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    Ok(WitnessWeights {
        component,
        weights,
        source_eigenvalue: lambda,
        support: PointSet::new(component, support),
    })
}

/// Result of checking the witness boundary inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCheck {
    pub component: u32,
    /// `min over F-bounded Y of w(S[Y]) / w(Y)` for `S = T^-1 o T`.
    pub min_ratio: f64,
    pub argmin: PointSet,
    /// The bound the ratio is compared against (`1 / c`).
    pub threshold: f64,
    pub passed: bool,
    pub mode: ScanMode,
}

/// Verifies the boundary inequality satisfied by extracted witness
/// weights: with `T` the propagation of `a` and `S = T^-1 o T`, every
/// F-bounded `Y` inside the support must satisfy
/// `w(S[Y]) >= w(Y) / c` (default `c = 1/3`, threshold 3).
///
/// Exact mode enumerates bounded subsets per ball up to `cap` points;
/// heuristic mode reports a greedy upper bound on the minimum.
pub fn verify_witness_inequality(
    witness: &WitnessWeights,
    a: &PropagationOperator,
    f: &Relation,
    c: f64,
    mode: ScanMode,
    cap: usize,
) -> Result<WitnessCheck> {
    if a.space() != f.space() {
        return Err(Error::SpaceMismatch);
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Invalid(alloc::string::String::from(
            "localization constant must lie in (0, 1)",
        )));
    }
    let component = witness.component;
    let t = a.propagation();
    let s = t.inverse().compose(t)?;
    let expand = s.by_source(component);
    let scan = min_bounded_ratio(component, &witness.weights, &expand, f, mode, cap)?;
    let threshold = 1.0 / c;
    // Tiny slack so that mathematically-exact boundary cases do not flip
    // on the last floating-point bit.
    let passed = scan.min_ratio >= threshold * (1.0 - 1e-12);
    Ok(WitnessCheck {
        component,
        min_ratio: scan.min_ratio,
        argmin: PointSet::new(component, scan.argmin),
        threshold,
        passed,
        mode: scan.mode,
    })
}
