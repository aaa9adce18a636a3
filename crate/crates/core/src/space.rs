//! Box spaces, points, point sets, and strictly positive component weights.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// A point of a box space: component index plus index within the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub component: u32,
    pub index: u32,
}

impl Point {
    pub fn new(component: u32, index: u32) -> Self {
        Point { component, index }
    }
}

/// A disjoint union of finite, nonempty components. Points in different
/// components are never related by any controlled set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpace {
    sizes: Vec<u32>,
    point_labels: Option<Vec<Vec<String>>>,
}

impl BoxSpace {
    /// Space with the given component sizes; every size must be >= 1.
    pub fn new(sizes: Vec<u32>) -> Result<Arc<Self>> {
        for (c, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::EmptyComponent {
                    component: c as u32,
                });
            }
        }
        Ok(Arc::new(BoxSpace {
            sizes,
            point_labels: None,
        }))
    }

    /// Space with human-readable point names (one list per component).
    pub fn with_labels(sizes: Vec<u32>, labels: Vec<Vec<String>>) -> Result<Arc<Self>> {
        if labels.len() != sizes.len() {
            return Err(Error::Invalid(String::from(
                "label lists must match the number of components",
            )));
        }
        for (c, (&s, l)) in sizes.iter().zip(&labels).enumerate() {
            if s == 0 {
                return Err(Error::EmptyComponent {
                    component: c as u32,
                });
            }
            if l.len() != s as usize {
                return Err(Error::WeightLength {
                    component: c as u32,
                    expected: s as usize,
                    got: l.len(),
                });
            }
        }
        Ok(Arc::new(BoxSpace {
            sizes,
            point_labels: Some(labels),
        }))
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    /// Size of one component; errors if the index is out of range.
    pub fn size(&self, component: u32) -> Result<u32> {
        self.sizes
            .get(component as usize)
            .copied()
            .ok_or(Error::ComponentOutOfRange { component })
    }

    pub fn total_points(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        (p.component as usize) < self.sizes.len() && p.index < self.sizes[p.component as usize]
    }

    pub fn point_label(&self, p: Point) -> Option<&str> {
        self.point_labels
            .as_ref()
            .and_then(|ls| ls.get(p.component as usize))
            .and_then(|l| l.get(p.index as usize))
            .map(String::as_str)
    }

    pub fn point_labels(&self) -> Option<&[Vec<String>]> {
        self.point_labels.as_deref()
    }

    /// All points in canonical order (component, then index).
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| (0..s).map(move |i| Point::new(c as u32, i)))
    }
}

/// A sorted, deduplicated set of point indices within a single component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    component: u32,
    indices: Vec<u32>,
}

impl PointSet {
    pub fn new(component: u32, mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        PointSet { component, indices }
    }

    pub fn empty(component: u32) -> Self {
        PointSet {
            component,
            indices: Vec::new(),
        }
    }

    pub fn singleton(point: Point) -> Self {
        PointSet {
            component: point.component,
            indices: alloc::vec![point.index],
        }
    }

    /// Every point of one component.
    pub fn full(space: &BoxSpace, component: u32) -> Result<Self> {
        let size = space.size(component)?;
        Ok(PointSet {
            component,
            indices: (0..size).collect(),
        })
    }

    pub fn component(&self) -> u32 {
        self.component
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: u32) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.component == other.component && self.indices.iter().all(|i| other.contains(*i))
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.component != other.component {
            return Err(Error::SpaceMismatch);
        }
        let mut v = self.indices.clone();
        v.extend_from_slice(&other.indices);
        Ok(PointSet::new(self.component, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.indices.iter().copied()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let c = self.component;
        self.indices.iter().map(move |&i| Point::new(c, i))
    }
}

/// Strictly positive probability weights on one component.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComponent {
    component: u32,
    weights: Vec<f64>,
}

/// Tolerance for the probability normalization check.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

impl WeightedComponent {
    /// Weights must be strictly positive and sum to 1 within 1e-12.
    pub fn new(component: u32, weights: Vec<f64>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::WeightNotPositive {
                    component,
                    index: i as u32,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if crate::numeric::abs(sum - 1.0) > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum { sum });
        }
        Ok(WeightedComponent { component, weights })
    }

    /// Rescales a strictly positive vector to total mass one.
    pub fn normalized(component: u32, weights: Vec<f64>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::WeightNotPositive {
                    component,
                    index: i as u32,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        let scaled: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        WeightedComponent::new(component, scaled)
    }

    /// The uniform probability measure on a component of the given size.
    pub fn uniform(component: u32, size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyComponent { component });
        }
        let w = 1.0 / size as f64;
        WeightedComponent::new(component, alloc::vec![w; size as usize])
    }

    pub fn component(&self) -> u32 {
        self.component
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, index: u32) -> f64 {
        self.weights[index as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total weight of a point set in this component.
    pub fn mass(&self, set: &PointSet) -> f64 {
        debug_assert_eq!(set.component(), self.component);
        set.iter().map(|i| self.weights[i as usize]).sum()
    }
}

/// One [`WeightedComponent`] for every component of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceWeights {
    space: Arc<BoxSpace>,
    components: Vec<WeightedComponent>,
}

impl SpaceWeights {
    pub fn new(space: Arc<BoxSpace>, components: Vec<WeightedComponent>) -> Result<Self> {
        if components.len() != space.component_count() {
            return Err(Error::Invalid(String::from(
                "need exactly one weighted component per space component",
            )));
        }
        for (c, wc) in components.iter().enumerate() {
            if wc.component() != c as u32 {
                return Err(Error::ComponentOutOfRange {
                    component: wc.component(),
                });
            }
            if wc.len() != space.sizes()[c] as usize {
                return Err(Error::WeightLength {
                    component: c as u32,
                    expected: space.sizes()[c] as usize,
                    got: wc.len(),
                });
            }
        }
        Ok(SpaceWeights { space, components })
    }

    pub fn uniform(space: Arc<BoxSpace>) -> Self {
        let components = space
            .sizes()
            .iter()
            .enumerate()
            .map(|(c, &s)| WeightedComponent::uniform(c as u32, s).expect("size >= 1"))
            .collect();
        SpaceWeights { space, components }
    }

    pub fn space(&self) -> &Arc<BoxSpace> {
        &self.space
    }

    pub fn component(&self, component: u32) -> &WeightedComponent {
        &self.components[component as usize]
    }

    pub fn components(&self) -> &[WeightedComponent] {
        &self.components
    }
}
