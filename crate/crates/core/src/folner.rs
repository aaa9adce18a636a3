//! Pair-space measures, translations along label classes, and Folner
//! certificates extracted from level sets.
//!
//! A pair function is a nonnegative function on the pair space of a box
//! space. Weighting each pair by its source point gives the measure
//! `w o c_s`; weighting by its target point gives `w o c^t`. A label class
//! `phi` translates pair functions by moving the target coordinate along
//! the partial bijection, and the summed positive parts of
//! `translate(eta) - eta` measure how far `eta` is from invariance. When
//! that defect is small relative to the mass of `eta`, some level set of
//! `eta` is a Folner certificate: a relation `F` with
//! `w o c^t(T o F) < (1 + eps) w o c^t(F)`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::label::{signed_classes, Label};
use crate::operator::PropagationOperator;
use crate::relation::Relation;
use crate::space::{BoxSpace, SpaceWeights, WeightedComponent};
use crate::Result;

/// A nonnegative function on the pair space, sparse per component.
/// Zero values are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFunction {
    space: Arc<BoxSpace>,
    entries: Vec<BTreeMap<(u32, u32), f64>>,
}

impl PairFunction {
    pub fn zero(space: Arc<BoxSpace>) -> Self {
        let entries = alloc::vec![BTreeMap::new(); space.component_count()];
        PairFunction { space, entries }
    }

    /// The indicator function of a relation.
    pub fn indicator(relation: &Relation) -> Self {
        let mut f = PairFunction::zero(relation.space().clone());
        for (c, (x, y)) in relation.iter() {
            f.entries[c as usize].insert((x, y), 1.0);
        }
        f
    }

    /// Builds a pair function from `(component, (x, y), value)` entries.
    /// Values must be finite and nonnegative; zeros are dropped and
    /// duplicate coordinates accumulate.
    pub fn from_entries<I>(space: Arc<BoxSpace>, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, (u32, u32), f64)>,
    {
        let mut f = PairFunction::zero(space.clone());
        for (c, (x, y), v) in iter {
            let size = space.size(c)?;
            if x >= size {
                return Err(Error::PointOutOfRange {
                    component: c,
                    index: x,
                });
            }
            if y >= size {
                return Err(Error::PointOutOfRange {
                    component: c,
                    index: y,
                });
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue { value: v });
            }
            if v > 0.0 {
                *f.entries[c as usize].entry((x, y)).or_insert(0.0) += v;
            }
        }
        Ok(f)
    }

    pub fn space(&self) -> &Arc<BoxSpace> {
        &self.space
    }

    pub fn value(&self, component: u32, x: u32, y: u32) -> f64 {
        self.entries[component as usize]
            .get(&(x, y))
            .copied()
            .unwrap_or(0.0)
    }

    /// Iterates `(component, (x, y), value)` over stored entries in
    /// canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, (u32, u32), f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(c, m)| m.iter().map(move |(&(x, y), &v)| (c as u32, (x, y), v)))
    }

    pub fn component_entries(&self, component: u32) -> &BTreeMap<(u32, u32), f64> {
        &self.entries[component as usize]
    }

    pub fn is_zero_on(&self, component: u32) -> bool {
        self.entries[component as usize].is_empty()
    }

    /// The set of pairs where the function is positive.
    pub fn support_relation(&self) -> Relation {
        Relation::from_pairs(
            self.space.clone(),
            self.iter().map(|(c, p, _)| (c, p)).collect::<Vec<_>>(),
        )
        .expect("entries are validated")
    }

    /// Scales by a nonnegative factor.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::InvalidValue { value: factor });
        }
        let mut out = self.clone();
        for m in &mut out.entries {
            if factor == 0.0 {
                m.clear();
            } else {
                for v in m.values_mut() {
                    *v *= factor;
                }
            }
        }
        Ok(out)
    }

    /// Level set `{(x, y) : eta(x, y) >= r}` for `r > 0`.
    pub fn level_set(&self, r: f64) -> Relation {
        Relation::from_pairs(
            self.space.clone(),
            self.iter()
                .filter(|&(_, _, v)| v >= r)
                .map(|(c, p, _)| (c, p))
                .collect::<Vec<_>>(),
        )
        .expect("entries are validated")
    }

    /// Sorted distinct positive values taken by the function.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.iter().map(|(_, _, v)| v).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// Rescales each component separately so its `w o c^t` mass is one.
    /// Components where the function vanishes are left untouched.
    pub fn normalize_ct(&self, weights: &SpaceWeights) -> Result<Self> {
        if weights.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut out = self.clone();
        for c in 0..self.space.component_count() {
            let w = weights.component(c as u32);
            let mass: f64 = out.entries[c]
                .iter()
                .map(|(&(x, _), &v)| v * w.weight(x))
                .sum();
            if mass > 0.0 {
                for v in out.entries[c].values_mut() {
                    *v /= mass;
                }
            }
        }
        Ok(out)
    }
}

/// Anything with a source-weighted and target-weighted mass: relations
/// (counting pairs) and pair functions (integrating values).
pub trait PairMass {
    /// Mass per the source measure: each pair `(x, y)` weighs `w(y)`.
    fn mass_cs(&self, weights: &WeightedComponent) -> f64;
    /// Mass per the target measure: each pair `(x, y)` weighs `w(x)`.
    fn mass_ct(&self, weights: &WeightedComponent) -> f64;
}

impl PairMass for Relation {
    fn mass_cs(&self, weights: &WeightedComponent) -> f64 {
        self.component_pairs(weights.component())
            .iter()
            .map(|&(_, y)| weights.weight(y))
            .sum()
    }

    fn mass_ct(&self, weights: &WeightedComponent) -> f64 {
        self.component_pairs(weights.component())
            .iter()
            .map(|&(x, _)| weights.weight(x))
            .sum()
    }
}

impl PairMass for PairFunction {
    fn mass_cs(&self, weights: &WeightedComponent) -> f64 {
        self.component_entries(weights.component())
            .iter()
            .map(|(&(_, y), &v)| v * weights.weight(y))
            .sum()
    }

    fn mass_ct(&self, weights: &WeightedComponent) -> f64 {
        self.component_entries(weights.component())
            .iter()
            .map(|(&(x, _), &v)| v * weights.weight(x))
            .sum()
    }
}

/// `w o c_s` of a relation or pair function within one component:
/// pairs weighted by their source (second) point.
pub fn measure_cs<Z: PairMass>(z: &Z, weights: &WeightedComponent) -> f64 {
    z.mass_cs(weights)
}

/// `w o c^t` of a relation or pair function within one component:
/// pairs weighted by their target (first) point.
pub fn measure_ct<Z: PairMass>(z: &Z, weights: &WeightedComponent) -> f64 {
    z.mass_ct(weights)
}

/// Translation along a partial bijection: the value of the result at
/// `(phi(z), y)` is `eta(z, y)`; rows outside the image of `phi` are zero.
pub fn translate(eta: &PairFunction, phi: &Relation) -> Result<PairFunction> {
    if eta.space() != phi.space() {
        return Err(Error::SpaceMismatch);
    }
    if !phi.is_partial_bijection() {
        return Err(Error::NotPartialBijection);
    }
    let mut out = PairFunction::zero(eta.space().clone());
    for c in 0..eta.space().component_count() {
        let n = eta.space().sizes()[c] as usize;
        // image[z] = x for the unique pair (x, z) in phi.
        let mut image: Vec<Option<u32>> = alloc::vec![None; n];
        for &(x, z) in phi.component_pairs(c as u32) {
            image[z as usize] = Some(x);
        }
        for (&(z, y), &v) in eta.component_entries(c as u32) {
            if let Some(x) = image[z as usize] {
                out.entries[c].insert((x, y), v);
            }
        }
    }
    Ok(out)
}

/// Translation with the weight-ratio factor: the value at `(phi(z), y)` is
/// `(w(phi(z)) / w(z)) * eta(z, y)`. With uniform weights this is exactly
/// [`translate`].
pub fn modified_translate(
    eta: &PairFunction,
    phi: &Relation,
    weights: &SpaceWeights,
) -> Result<PairFunction> {
    if eta.space() != phi.space() || weights.space() != eta.space() {
        return Err(Error::SpaceMismatch);
    }
    if !phi.is_partial_bijection() {
        return Err(Error::NotPartialBijection);
    }
    let mut out = PairFunction::zero(eta.space().clone());
    for c in 0..eta.space().component_count() {
        let w = weights.component(c as u32);
        let n = eta.space().sizes()[c] as usize;
        let mut image: Vec<Option<u32>> = alloc::vec![None; n];
        for &(x, z) in phi.component_pairs(c as u32) {
            image[z as usize] = Some(x);
        }
        for (&(z, y), &v) in eta.component_entries(c as u32) {
            if let Some(x) = image[z as usize] {
                let scaled = v * w.weight(x) / w.weight(z);
                if scaled > 0.0 {
                    out.entries[c].insert((x, y), scaled);
                }
            }
        }
    }
    Ok(out)
}

/// Pointwise positive part of `a - b`.
fn positive_difference(a: &PairFunction, b: &PairFunction) -> PairFunction {
    let mut out = PairFunction::zero(a.space().clone());
    for (c, (x, y), v) in a.iter() {
        let diff = v - b.value(c, x, y);
        if diff > 0.0 {
            out.entries[c as usize].insert((x, y), diff);
        }
    }
    out
}

/// L1 invariance defect of `eta` under a label: the sum over non-diagonal
/// classes `phi(j)` of the `w o c^t`-mass of `(translate(eta, phi(j)) - eta)_+`,
/// totalled over all components.
pub fn invariance_defect(eta: &PairFunction, label: &Label, weights: &SpaceWeights) -> Result<f64> {
    if eta.space() != label.base().space() || weights.space() != eta.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut defect = 0.0;
    for class in &label.classes()[1..] {
        let translated = translate(eta, class)?;
        let plus = positive_difference(&translated, eta);
        for c in 0..eta.space().component_count() {
            defect += plus.mass_ct(weights.component(c as u32));
        }
    }
    Ok(defect)
}

/// Per-component masses backing a certificate or failure diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMass {
    pub component: u32,
    /// Whether the component carried any of `eta` and was scanned.
    pub scanned: bool,
    pub mass_f: f64,
    pub mass_tf: f64,
}

/// A Folner certificate: a level-set relation whose step enlargement
/// gains less than a factor `1 + epsilon` of target mass on every scanned
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerCertificate {
    pub relation: Relation,
    pub epsilon: f64,
    pub threshold: f64,
    pub per_component: Vec<ComponentMass>,
}

/// Diagnosis when no level set works: the threshold whose worst
/// per-component ratio came closest.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerFailure {
    pub epsilon: f64,
    pub best_threshold: f64,
    /// Smallest over thresholds of the worst per-component ratio
    /// `mass_tf / mass_f`.
    pub best_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FolnerOutcome {
    Certificate(FolnerCertificate),
    Failure(FolnerFailure),
}

impl FolnerOutcome {
    pub fn certificate(&self) -> Option<&FolnerCertificate> {
        match self {
            FolnerOutcome::Certificate(c) => Some(c),
            FolnerOutcome::Failure(_) => None,
        }
    }
}

/// Scans the distinct positive values of `eta` as thresholds, in
/// increasing order, and returns the first level set (hence the one of
/// largest mass) satisfying
/// `w o c^t(T o F(r)) < (1 + eps) * w o c^t(F(r))`
/// on every component where `eta` lives. Components without support are
/// masked out and reported as unscanned. Failure is a value, not an error.
pub fn extract_folner(
    eta: &PairFunction,
    t: &Relation,
    eps: f64,
    weights: &SpaceWeights,
) -> Result<FolnerOutcome> {
    if eta.space() != t.space() || weights.space() != eta.space() {
        return Err(Error::SpaceMismatch);
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Invalid(alloc::string::String::from(
            "eps must be positive",
        )));
    }
    let comp_count = eta.space().component_count();
    let scanned: Vec<bool> = (0..comp_count).map(|c| !eta.is_zero_on(c as u32)).collect();
    if scanned.iter().all(|s| !s) {
        return Err(Error::ZeroFunction);
    }

    let thresholds = eta.distinct_values();
    let mut best: Option<(f64, f64)> = None; // (worst ratio, threshold)
    for &r in &thresholds {
        let level = eta.level_set(r);
        let enlarged = t.compose(&level)?;
        let mut per_component = Vec::with_capacity(comp_count);
        let mut ok = true;
        let mut worst_ratio: f64 = 0.0;
        for (c, &is_scanned) in scanned.iter().enumerate() {
            let wc = weights.component(c as u32);
            if !is_scanned {
                per_component.push(ComponentMass {
                    component: c as u32,
                    scanned: false,
                    mass_f: 0.0,
                    mass_tf: 0.0,
                });
                continue;
            }
            let mass_f = level.mass_ct(wc);
            let mass_tf = enlarged.mass_ct(wc);
            let pass = mass_tf < (1.0 + eps) * mass_f;
            if mass_f > 0.0 {
                worst_ratio = worst_ratio.max(mass_tf / mass_f);
            } else {
                worst_ratio = f64::INFINITY;
            }
            ok &= pass;
            per_component.push(ComponentMass {
                component: c as u32,
                scanned: true,
                mass_f,
                mass_tf,
            });
        }
        if ok {
            return Ok(FolnerOutcome::Certificate(FolnerCertificate {
                relation: level,
                epsilon: eps,
                threshold: r,
                per_component,
            }));
        }
        match best {
            Some((ratio, _)) if ratio <= worst_ratio => {}
            _ => best = Some((worst_ratio, r)),
        }
    }
    let (best_ratio, best_threshold) = best.expect("at least one threshold");
    Ok(FolnerOutcome::Failure(FolnerFailure {
        epsilon: eps,
        best_threshold,
        best_ratio,
    }))
}

/// Candidate kernels for [`folner_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Distance decay from the diagonal: a pair at step distance `k` gets
    /// the value `max(0, radius - k)`, so the support is the band
    /// `widen(t, radius - 1)` and the level sets are step-distance bands.
    Tent,
    /// `radius`-fold averaging of the diagonal indicator under the
    /// normalized sum of signed label classes.
    Heat,
}

/// Tent kernel: `eta(x, y) = max(0, radius - k(x, y))` where `k` is the
/// step distance of `(x, y)` from the diagonal. Level sets are the bands
/// `widen(t, s)` for `s < radius`. The radius must be at least 1.
pub fn tent_kernel(t: &Relation, radius: u32) -> Result<PairFunction> {
    if radius == 0 {
        return Err(Error::ZeroPower);
    }
    let space = t.space().clone();
    let sym = t
        .union(&t.inverse())?
        .union(&Relation::diagonal(space.clone()))?;
    let reach = radius - 1;
    let mut entries = Vec::new();
    for c in 0..space.component_count() {
        let n = space.sizes()[c] as usize;
        let adj = sym.by_source(c as u32);
        for start in 0..n as u32 {
            // BFS from `start`; dist is the step distance k(x, start).
            let mut dist: Vec<Option<u32>> = alloc::vec![None; n];
            let mut queue: Vec<u32> = alloc::vec![start];
            dist[start as usize] = Some(0);
            let mut head = 0;
            while head < queue.len() {
                let z = queue[head];
                head += 1;
                let d = dist[z as usize].unwrap();
                if d == reach {
                    continue;
                }
                for &x in &adj[z as usize] {
                    if dist[x as usize].is_none() {
                        dist[x as usize] = Some(d + 1);
                        queue.push(x);
                    }
                }
            }
            for (x, d) in dist.iter().enumerate() {
                if let Some(k) = d {
                    entries.push((c as u32, (x as u32, start), (radius - k) as f64));
                }
            }
        }
    }
    PairFunction::from_entries(space, entries)
}

/// Heat kernel: `steps`-fold application of the doubly substochastic
/// average of the signed label classes to the diagonal indicator.
pub fn heat_kernel(label: &Label, steps: u32) -> Result<PairFunction> {
    let space = label.base().space().clone();
    let signed = signed_classes(label);
    let factor = 1.0 / signed.len() as f64;
    let mut avg: Option<PropagationOperator> = None;
    for class in &signed {
        let op = PropagationOperator::indicator(class);
        avg = Some(match avg {
            None => op,
            Some(acc) => acc.add(&op)?,
        });
    }
    let step_op = avg.expect("at least the diagonal class").scale(factor);
    let mut walked = PropagationOperator::identity(space.clone());
    for _ in 0..steps {
        walked = step_op.multiply(&walked)?;
    }
    let entries: Vec<(u32, (u32, u32), f64)> = (0..space.component_count() as u32)
        .flat_map(|c| {
            walked
                .component_triplets(c)
                .into_iter()
                .map(move |(x, y, v)| (c, (x, y), v))
        })
        .collect();
    PairFunction::from_entries(space, entries)
}

/// Outcome of a radius sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// First radius (in ascending order) that produced a certificate.
    Certificate {
        radius: u32,
        certificate: FolnerCertificate,
    },
    /// No radius worked; the closest failure across the sweep.
    Failure {
        best_radius: u32,
        failure: FolnerFailure,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&FolnerCertificate> {
        match self {
            SearchOutcome::Certificate { certificate, .. } => Some(certificate),
            SearchOutcome::Failure { .. } => None,
        }
    }
}

/// Sweeps kernel radii in ascending order, extracting a certificate from
/// each candidate, and stops at the first success. `label` is only needed
/// for the heat kernel.
pub fn folner_search(
    t: &Relation,
    label: Option<&Label>,
    eps: f64,
    weights: &SpaceWeights,
    kernel: KernelKind,
    radii: core::ops::RangeInclusive<u32>,
) -> Result<SearchOutcome> {
    let mut best: Option<(u32, FolnerFailure)> = None;
    let owned_label;
    let label = match (kernel, label) {
        (KernelKind::Heat, Some(l)) => Some(l),
        (KernelKind::Heat, None) => {
            owned_label = crate::label::build_label(&t.with_diagonal())?;
            Some(&owned_label)
        }
        (KernelKind::Tent, _) => None,
    };
    for radius in radii {
        let eta = match kernel {
            KernelKind::Tent => tent_kernel(t, radius)?,
            KernelKind::Heat => heat_kernel(label.expect("heat label"), radius)?,
        };
        match extract_folner(&eta, t, eps, weights)? {
            FolnerOutcome::Certificate(certificate) => {
                return Ok(SearchOutcome::Certificate {
                    radius,
                    certificate,
                });
            }
            FolnerOutcome::Failure(failure) => {
                let better = match &best {
                    None => true,
                    Some((_, b)) => failure.best_ratio < b.best_ratio,
                };
                if better {
                    best = Some((radius, failure));
                }
            }
        }
    }
    let (best_radius, failure) = best.ok_or(Error::Invalid(alloc::string::String::from(
        "empty radius range",
    )))?;
    Ok(SearchOutcome::Failure {
        best_radius,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::build_label;
    use crate::space::BoxSpace;

    fn cycle_space(n: u32) -> Arc<BoxSpace> {
        BoxSpace::new(alloc::vec![n]).unwrap()
    }

    fn band(space: &Arc<BoxSpace>, n: u32, radius: u32) -> Relation {
        let mut pairs = Vec::new();
        for x in 0..n {
            for d in 0..=radius {
                pairs.push((0, (x, (x + d) % n)));
                pairs.push((0, ((x + d) % n, x)));
            }
        }
        Relation::from_pairs(space.clone(), pairs).unwrap()
    }

    #[test]
    fn translate_rejects_non_bijections() {
        let space = cycle_space(4);
        let eta = PairFunction::indicator(&Relation::diagonal(space.clone()));
        let bad = Relation::from_pairs(space, [(0, (0, 1)), (0, (0, 2))]).unwrap();
        assert!(matches!(
            translate(&eta, &bad),
            Err(Error::NotPartialBijection)
        ));
    }

    #[test]
    fn measures_on_diagonal_and_bands() {
        let space = cycle_space(10);
        let w = WeightedComponent::uniform(0, 10).unwrap();
        let diag = Relation::diagonal(space.clone());
        assert!((measure_cs(&diag, &w) - 1.0).abs() < 1e-12);
        assert!((measure_ct(&diag, &w) - 1.0).abs() < 1e-12);
        let b1 = band(&space, 10, 1);
        assert!((measure_cs(&b1, &w) - 3.0).abs() < 1e-12);
        let b2 = band(&space, 10, 2);
        assert!((measure_ct(&b2, &w) - 5.0).abs() < 1e-12);
        // Scaled diagonal indicator integrates to the scale.
        let eta = PairFunction::indicator(&diag).scale(2.0).unwrap();
        assert!((measure_cs(&eta, &w) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ct_equals_cs_of_inverse() {
        let space = cycle_space(7);
        let w = WeightedComponent::normalized(0, alloc::vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
            .unwrap();
        let r = Relation::from_pairs(space, [(0, (0, 3)), (0, (2, 5)), (0, (6, 6)), (0, (1, 0))])
            .unwrap();
        let lhs = measure_ct(&r, &w);
        let rhs = measure_cs(&r.inverse(), &w);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn translate_moves_the_diagonal() {
        // On C_4, translating the diagonal indicator along the forward
        // shift puts mass on {(x+1, x)}.
        let space = cycle_space(4);
        let shift =
            Relation::from_pairs(space.clone(), (0..4).map(|x| (0, ((x + 1) % 4, x)))).unwrap();
        let eta = PairFunction::indicator(&Relation::diagonal(space.clone()));
        let moved = translate(&eta, &shift).unwrap();
        for x in 0..4u32 {
            assert_eq!(moved.value(0, (x + 1) % 4, x), 1.0);
            assert_eq!(moved.value(0, x, x), 0.0);
        }
        // A full bijection with uniform weights preserves the target mass.
        let w = SpaceWeights::uniform(space.clone());
        assert_eq!(moved.mass_ct(w.component(0)), eta.mass_ct(w.component(0)));
        // Translating along the diagonal is the identity.
        let diag = Relation::diagonal(space);
        assert_eq!(translate(&eta, &diag).unwrap(), eta);
    }

    #[test]
    fn modified_translate_applies_weight_ratio() {
        // Weights (1/2, 1/4, 1/4) on a 3-cycle, forward shift, diagonal
        // indicator: the value at (1, 0) is w(1)/w(0) = 1/2.
        let space = cycle_space(3);
        let weights = SpaceWeights::new(
            space.clone(),
            alloc::vec![WeightedComponent::new(0, alloc::vec![0.5, 0.25, 0.25]).unwrap()],
        )
        .unwrap();
        let shift =
            Relation::from_pairs(space.clone(), (0..3).map(|x| (0, ((x + 1) % 3, x)))).unwrap();
        let eta = PairFunction::indicator(&Relation::diagonal(space.clone()));
        let moved = modified_translate(&eta, &shift, &weights).unwrap();
        assert!((moved.value(0, 1, 0) - 0.5).abs() < 1e-12);
        assert!((moved.value(0, 2, 1) - 1.0).abs() < 1e-12);
        assert!((moved.value(0, 0, 2) - 2.0).abs() < 1e-12);
        // Uniform weights reduce to the plain translation.
        let uni = SpaceWeights::uniform(space);
        let plain = translate(&eta, &shift).unwrap();
        assert_eq!(modified_translate(&eta, &shift, &uni).unwrap(), plain);
    }

    #[test]
    fn invariance_defect_of_band_on_cycle() {
        // C_8 uniform, eta = band {d <= 2} indicator normalized to unit
        // target mass, label = {diag, +shift, -shift}: defect = 2/5.
        let space = cycle_space(8);
        let weights = SpaceWeights::uniform(space.clone());
        let t = band(&space, 8, 1);
        let label = build_label(&t).unwrap();
        let eta = PairFunction::indicator(&band(&space, 8, 2))
            .normalize_ct(&weights)
            .unwrap();
        let defect = invariance_defect(&eta, &label, &weights).unwrap();
        assert!((defect - 0.4).abs() < 1e-12, "defect {defect}");
    }

    #[test]
    fn exactly_invariant_eta_has_zero_defect_and_certifies() {
        // The full relation is invariant under everything.
        let space = cycle_space(6);
        let weights = SpaceWeights::uniform(space.clone());
        let t = band(&space, 6, 1);
        let label = build_label(&t).unwrap();
        let eta = PairFunction::indicator(&Relation::full(space));
        let defect = invariance_defect(&eta, &label, &weights).unwrap();
        assert_eq!(defect, 0.0);
        let out = extract_folner(&eta, &t, 1e-9, &weights).unwrap();
        let cert = out
            .certificate()
            .expect("invariant eta certifies at any eps");
        assert_eq!(cert.relation, Relation::full(cycle_space(6)));
    }

    #[test]
    fn tent_kernel_on_c20_certifies_at_point3_not_point25() {
        // Level sets of the radius-3 tent on C_20 are the bands {d <= s},
        // s = 0..3; the best ratio 9/7 at s = 3 sits between the two eps.
        let space = cycle_space(20);
        let weights = SpaceWeights::uniform(space.clone());
        let t = band(&space, 20, 1);
        let eta = tent_kernel(&t, 4).unwrap();
        for x in 0..20u32 {
            assert_eq!(eta.value(0, x, x), 4.0);
            assert_eq!(eta.value(0, (x + 3) % 20, x), 1.0);
        }
        let ok = extract_folner(&eta, &t, 0.3, &weights).unwrap();
        let cert = ok.certificate().expect("eps = 0.3 certifies");
        assert_eq!(cert.relation, band(&space, 20, 3));
        assert_eq!(cert.threshold, 1.0);
        let fail = extract_folner(&eta, &t, 0.25, &weights).unwrap();
        match fail {
            FolnerOutcome::Failure(f) => {
                assert!((f.best_ratio - 9.0 / 7.0).abs() < 1e-12);
            }
            FolnerOutcome::Certificate(_) => panic!("eps = 0.25 must fail"),
        }
    }

    #[test]
    fn search_finds_band_ten_on_c100() {
        let space = cycle_space(100);
        let weights = SpaceWeights::uniform(space.clone());
        let t = band(&space, 100, 1);
        let out = folner_search(&t, None, 0.1, &weights, KernelKind::Tent, 1..=12).unwrap();
        match out {
            SearchOutcome::Certificate {
                radius,
                certificate,
            } => {
                assert_eq!(radius, 11);
                assert_eq!(certificate.relation, band(&space, 100, 10));
                let m = &certificate.per_component[0];
                assert!((m.mass_tf / m.mass_f - 23.0 / 21.0).abs() < 1e-12);
            }
            SearchOutcome::Failure { .. } => panic!("C_100 certifies with the band s = 10"),
        }
    }

    #[test]
    fn two_point_component_with_full_step_certifies() {
        let space = BoxSpace::new(alloc::vec![2]).unwrap();
        let weights = SpaceWeights::uniform(space.clone());
        let t = Relation::full(space.clone());
        let out = folner_search(&t, None, 1e-6, &weights, KernelKind::Tent, 1..=2).unwrap();
        let cert = out.certificate().expect("full T certifies");
        assert_eq!(cert.relation, Relation::full(space));
    }

    #[test]
    fn heat_kernel_zero_steps_is_diagonal() {
        let space = cycle_space(5);
        let t = band(&space, 5, 1);
        let label = build_label(&t).unwrap();
        let eta = heat_kernel(&label, 0).unwrap();
        assert_eq!(eta, PairFunction::indicator(&Relation::diagonal(space)));
    }

    #[test]
    fn heat_kernel_support_stays_in_widened_band() {
        let space = cycle_space(9);
        let t = band(&space, 9, 1);
        let label = build_label(&t).unwrap();
        let eta = heat_kernel(&label, 3).unwrap();
        assert!(eta.support_relation().is_subset_of(&t.widen(3).unwrap()));
        // Mass never leaves a row entirely: the diagonal contribution
        // keeps eta(x, x) positive.
        for x in 0..9u32 {
            assert!(eta.value(0, x, x) > 0.0);
        }
    }
}
