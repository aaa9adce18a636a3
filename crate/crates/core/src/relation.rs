//! Controlled sets: per-component sets of ordered point pairs.
//!
//! Pairs never cross components. Every relation keeps its pairs sorted and
//! deduplicated, so relations with equal pair sets compare equal bit for
//! bit and every operation is deterministic.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::space::{BoxSpace, Point, PointSet};
use crate::Result;

/// A controlled set over a box space. The pair `(x, y)` is read as
/// "x is reachable from y": `ball` maps a set `Y` to `{x : (x, y) in R, y in Y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    space: Arc<BoxSpace>,
    pairs: Vec<Vec<(u32, u32)>>,
}

impl Relation {
    /// The empty relation.
    pub fn empty(space: Arc<BoxSpace>) -> Self {
        let pairs = vec![Vec::new(); space.component_count()];
        Relation { space, pairs }
    }

    /// The diagonal `{(x, x)}` of the whole space.
    pub fn diagonal(space: Arc<BoxSpace>) -> Self {
        let pairs = space
            .sizes()
            .iter()
            .map(|&s| (0..s).map(|i| (i, i)).collect())
            .collect();
        Relation { space, pairs }
    }

    /// The full relation `X_m x X_m` on every component.
    pub fn full(space: Arc<BoxSpace>) -> Self {
        let pairs = space
            .sizes()
            .iter()
            .map(|&s| {
                let mut v = Vec::with_capacity((s as usize) * (s as usize));
                for x in 0..s {
                    for y in 0..s {
                        v.push((x, y));
                    }
                }
                v
            })
            .collect();
        Relation { space, pairs }
    }

    /// Builds a relation from `(component, (x, y))` triples, validating that
    /// every pair lies inside its component. Input order is irrelevant.
    pub fn from_pairs<I>(space: Arc<BoxSpace>, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, (u32, u32))>,
    {
        let mut pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); space.component_count()];
        for (c, (x, y)) in iter {
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
            pairs[c as usize].push((x, y));
        }
        for comp in &mut pairs {
            comp.sort_unstable();
            comp.dedup();
        }
        Ok(Relation { space, pairs })
    }

    /// Builds a relation from one pair list per component.
    pub fn from_component_pairs(
        space: Arc<BoxSpace>,
        per_component: Vec<Vec<(u32, u32)>>,
    ) -> Result<Self> {
        if per_component.len() != space.component_count() {
            return Err(Error::Invalid(alloc::string::String::from(
                "need one pair list per component",
            )));
        }
        let triples = per_component
            .into_iter()
            .enumerate()
            .flat_map(|(c, v)| v.into_iter().map(move |p| (c as u32, p)));
        // Collect eagerly: from_pairs validates ranges.
        Relation::from_pairs(space, triples.collect::<Vec<_>>())
    }

    pub fn space(&self) -> &Arc<BoxSpace> {
        &self.space
    }

    pub fn component_pairs(&self, component: u32) -> &[(u32, u32)] {
        &self.pairs[component as usize]
    }

    /// Total number of pairs over all components.
    pub fn pair_count(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.iter().all(Vec::is_empty)
    }

    /// Iterates `(component, (x, y))` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, (u32, u32))> + '_ {
        self.pairs
            .iter()
            .enumerate()
            .flat_map(|(c, v)| v.iter().map(move |&p| (c as u32, p)))
    }

    pub fn contains_pair(&self, component: u32, x: u32, y: u32) -> bool {
        self.pairs
            .get(component as usize)
            .map(|v| v.binary_search(&(x, y)).is_ok())
            .unwrap_or(false)
    }

    pub fn contains_diagonal(&self) -> bool {
        self.space
            .sizes()
            .iter()
            .enumerate()
            .all(|(c, &s)| (0..s).all(|i| self.contains_pair(c as u32, i, i)))
    }

    fn check_same_space(&self, other: &Relation) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// The inverse relation: contains `(x, y)` iff `self` contains `(y, x)`.
    pub fn inverse(&self) -> Relation {
        let pairs = self
            .pairs
            .iter()
            .map(|v| {
                let mut inv: Vec<(u32, u32)> = v.iter().map(|&(x, y)| (y, x)).collect();
                inv.sort_unstable();
                inv
            })
            .collect();
        Relation {
            space: self.space.clone(),
            pairs,
        }
    }

    /// Composition: `(x, y)` iff there is `z` with `(x, z) in self` and
    /// `(z, y) in other`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.check_same_space(other)?;
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (left, right) in self.pairs.iter().zip(&other.pairs) {
            // Group the right factor by its first coordinate for O(1) runs.
            let mut out: Vec<(u32, u32)> = Vec::new();
            for &(x, z) in left {
                let start = right.partition_point(|&(a, _)| a < z);
                for &(a, y) in &right[start..] {
                    if a != z {
                        break;
                    }
                    out.push((x, y));
                }
            }
            out.sort_unstable();
            out.dedup();
            pairs.push(out);
        }
        Ok(Relation {
            space: self.space.clone(),
            pairs,
        })
    }

    /// n-fold composition; `n` must be at least 1.
    pub fn power(&self, n: u32) -> Result<Relation> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        // Square-and-multiply; composition is associative.
        let mut base = self.clone();
        let mut acc: Option<Relation> = None;
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.compose(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.compose(&base)?;
        }
        Ok(acc.expect("n >= 1"))
    }

    /// Union of two relations on the same space.
    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_same_space(other)?;
        let pairs = self
            .pairs
            .iter()
            .zip(&other.pairs)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.extend_from_slice(b);
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        Ok(Relation {
            space: self.space.clone(),
            pairs,
        })
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &Relation) -> Result<Relation> {
        self.check_same_space(other)?;
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(c, v)| {
                v.iter()
                    .copied()
                    .filter(|&(x, y)| !other.contains_pair(c as u32, x, y))
                    .collect()
            })
            .collect();
        Ok(Relation {
            space: self.space.clone(),
            pairs,
        })
    }

    /// `self` united with the diagonal.
    pub fn with_diagonal(&self) -> Relation {
        self.union(&Relation::diagonal(self.space.clone()))
            .expect("same space")
    }

    /// Widened generator: `(diag v self v self^-1)^(o n)`. Symmetric,
    /// contains the diagonal, and monotone in `n`; `n` must be at least 1.
    pub fn widen(&self, n: u32) -> Result<Relation> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        let sym = self
            .union(&self.inverse())?
            .union(&Relation::diagonal(self.space.clone()))?;
        sym.power(n)
    }

    /// `{x : exists y in set with (x, y) in self}`. Empty input gives the
    /// empty set.
    pub fn ball(&self, set: &PointSet) -> PointSet {
        let c = set.component();
        let mut out = Vec::new();
        if let Some(v) = self.pairs.get(c as usize) {
            for &(x, y) in v {
                if set.contains(y) {
                    out.push(x);
                }
            }
        }
        PointSet::new(c, out)
    }

    /// Ball of a single point: `{x : (x, p) in self}`.
    pub fn ball_of(&self, p: Point) -> PointSet {
        self.ball(&PointSet::singleton(p))
    }

    /// Whether `set` is bounded for this relation: some point `x` of the
    /// same component satisfies `set` contained in `{z : (z, x) in self}`.
    /// The empty set is bounded.
    pub fn is_bounded(&self, set: &PointSet) -> bool {
        if set.is_empty() {
            return true;
        }
        let c = set.component();
        let size = match self.space.size(c) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let by_source = self.by_source(c);
        (0..size).any(|x| {
            let reach = &by_source[x as usize];
            set.iter().all(|z| reach.binary_search(&z).is_ok())
        })
    }

    /// `max over x of max(#self[x], #self^-1[x])`; 0 for the empty relation.
    pub fn max_degree(&self) -> u32 {
        let mut best = 0u32;
        for (c, v) in self.pairs.iter().enumerate() {
            let n = self.space.sizes()[c] as usize;
            let mut out_deg = vec![0u32; n];
            let mut in_deg = vec![0u32; n];
            for &(x, y) in v {
                out_deg[x as usize] += 1; // #self^-1[x]
                in_deg[y as usize] += 1; // #self[y]
            }
            for i in 0..n {
                best = best.max(out_deg[i]).max(in_deg[i]);
            }
        }
        best
    }

    /// Whether every pair of `self` also lies in `other`.
    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.space == other.space && self.iter().all(|(c, (x, y))| other.contains_pair(c, x, y))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(c, (x, y))| self.contains_pair(c, y, x))
    }

    /// A partial bijection relates each point to at most one image and one
    /// preimage.
    pub fn is_partial_bijection(&self) -> bool {
        for (c, v) in self.pairs.iter().enumerate() {
            let n = self.space.sizes()[c] as usize;
            let mut seen_first = vec![false; n];
            let mut seen_second = vec![false; n];
            for &(x, y) in v {
                if seen_first[x as usize] || seen_second[y as usize] {
                    return false;
                }
                seen_first[x as usize] = true;
                seen_second[y as usize] = true;
            }
        }
        true
    }

    /// Per-source adjacency for one component: entry `y` lists all `x` with
    /// `(x, y) in self`, sorted. This is `self[y]` for each point `y`.
    pub fn by_source(&self, component: u32) -> Vec<Vec<u32>> {
        let n = self.space.sizes()[component as usize] as usize;
        let mut index: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(x, y) in &self.pairs[component as usize] {
            index[y as usize].push(x);
        }
        // Pairs are sorted by (x, y), so each list arrives sorted by x.
        index
    }
}
