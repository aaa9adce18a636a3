//! Property-A certificates: families of unit vectors with controlled
//! supports and small variation along a step relation.
//!
//! A family assigns a unit vector to every point of a component. Its
//! quality against a relation `T` is the worst variation
//! `||eta_x - eta_y||` over pairs `(x, y)` in `T`; its support relation
//! `{(x, y) : y in supp(eta_x)}` must stay inside a controlled set. Small
//! variation with controlled support is exactly what property A asks for.

use alloc::vec::Vec;

use crate::error::Error;
use crate::folner;
use crate::label::Label;
use crate::numeric;
use crate::relation::Relation;
use crate::space::BoxSpace;
use crate::Result;

use alloc::sync::Arc;

/// A sparse unit vector per point of one component, plus the relation
/// recording the support pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    space: Arc<BoxSpace>,
    component: u32,
    /// `vectors[x]` lists `(coordinate, value)` sorted by coordinate.
    vectors: Vec<Vec<(u32, f64)>>,
    support_relation: Relation,
}

impl VectorFamily {
    /// Builds a family from raw sparse vectors, normalizing each to unit
    /// length. Every vector must be nonzero.
    pub fn from_vectors(
        space: Arc<BoxSpace>,
        component: u32,
        raw: Vec<Vec<(u32, f64)>>,
    ) -> Result<Self> {
        let size = space.size(component)? as usize;
        if raw.len() != size {
            return Err(Error::WeightLength {
                component,
                expected: size,
                got: raw.len(),
            });
        }
        let mut vectors = Vec::with_capacity(size);
        let mut support_pairs = Vec::new();
        for (x, mut vec) in raw.into_iter().enumerate() {
            vec.sort_unstable_by_key(|&(i, _)| i);
            vec.retain(|&(_, v)| v != 0.0);
            let norm_sq: f64 = vec.iter().map(|&(_, v)| v * v).sum();
            if norm_sq <= 0.0 {
                return Err(Error::ZeroOperator);
            }
            let norm = numeric::sqrt(norm_sq);
            for (i, v) in vec.iter_mut() {
                if *i >= size as u32 {
                    return Err(Error::PointOutOfRange {
                        component,
                        index: *i,
                    });
                }
                *v /= norm;
            }
            for &(i, _) in &vec {
                support_pairs.push((component, (x as u32, i)));
            }
            vectors.push(vec);
        }
        let support_relation = Relation::from_pairs(space.clone(), support_pairs)?;
        Ok(VectorFamily {
            space,
            component,
            vectors,
            support_relation,
        })
    }

    pub fn space(&self) -> &Arc<BoxSpace> {
        &self.space
    }

    pub fn component(&self) -> u32 {
        self.component
    }

    pub fn vector(&self, x: u32) -> &[(u32, f64)] {
        &self.vectors[x as usize]
    }

    pub fn support_relation(&self) -> &Relation {
        &self.support_relation
    }

    /// `||eta_x - eta_y||_2` by sparse merge.
    pub fn distance(&self, x: u32, y: u32) -> f64 {
        let a = &self.vectors[x as usize];
        let b = &self.vectors[y as usize];
        let (mut p, mut q) = (0usize, 0usize);
        let mut acc = 0.0;
        while p < a.len() || q < b.len() {
            match (a.get(p), b.get(q)) {
                (Some(&(i, u)), Some(&(j, v))) => {
                    if i == j {
                        let d = u - v;
                        acc += d * d;
                        p += 1;
                        q += 1;
                    } else if i < j {
                        acc += u * u;
                        p += 1;
                    } else {
                        acc += v * v;
                        q += 1;
                    }
                }
                (Some(&(_, u)), None) => {
                    acc += u * u;
                    p += 1;
                }
                (None, Some(&(_, v))) => {
                    acc += v * v;
                    q += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        numeric::sqrt(acc)
    }
}

/// The canonical candidate family: `eta_x` is the normalized indicator of
/// the widened ball `widen(base, radius)[x]`. The base relation must
/// contain the diagonal.
pub fn ball_average_family(component: u32, base: &Relation, radius: u32) -> Result<VectorFamily> {
    if !base.contains_diagonal() {
        return Err(Error::MissingDiagonal);
    }
    if radius == 0 {
        return Err(Error::ZeroPower);
    }
    let space = base.space().clone();
    let size = space.size(component)? as usize;
    let widened = base.widen(radius)?;
    let balls = widened.by_source(component);
    let raw: Vec<Vec<(u32, f64)>> = (0..size)
        .map(|x| balls[x].iter().map(|&i| (i, 1.0)).collect())
        .collect();
    VectorFamily::from_vectors(space, component, raw)
}

/// Worst-case variation of a family along `t`, together with the support
/// relation the caller compares against a reference controlled set.
pub fn certificate_quality(family: &VectorFamily, t: &Relation) -> (f64, Relation) {
    let mut eps: f64 = 0.0;
    for &(x, y) in t.component_pairs(family.component()) {
        eps = eps.max(family.distance(x, y));
    }
    (eps, family.support_relation().clone())
}

/// Markov-averaging candidate: `eta_x` is the `steps`-fold application of
/// the normalized signed-label-class average to the point mass at `x`,
/// normalized in l2. With zero steps this is the delta family.
pub fn heat_family(component: u32, label: &Label, steps: u32) -> Result<VectorFamily> {
    let eta = folner::heat_kernel(label, steps)?;
    let space = label.base().space().clone();
    let size = space.size(component)? as usize;
    // Column y of the walk matrix is the vector for point y.
    let mut raw: Vec<Vec<(u32, f64)>> = alloc::vec![Vec::new(); size];
    for (&(x, y), &v) in eta.component_entries(component) {
        raw[y as usize].push((x, v));
    }
    VectorFamily::from_vectors(space, component, raw)
}
