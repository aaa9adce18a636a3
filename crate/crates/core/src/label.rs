//! Labels: decompositions of a controlled set into partial bijections
//! `phi(0), ..., phi(k)` with `phi(0)` the diagonal.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::relation::Relation;
use crate::Result;

/// A label on a controlled set containing the diagonal: an ordered family
/// of partial bijections whose union is the labelled set. Class 0 is the
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    base: Relation,
    classes: Vec<Relation>,
}

impl Label {
    pub fn base(&self) -> &Relation {
        &self.base
    }

    pub fn classes(&self) -> &[Relation] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Number of classes besides the diagonal.
    pub fn non_diagonal_count(&self) -> usize {
        self.classes.len() - 1
    }

    /// Assembles a label from explicit parts without running the greedy
    /// builder. Use [`verify_label`] to check the result.
    pub fn from_parts(base: Relation, classes: Vec<Relation>) -> Self {
        Label { base, classes }
    }
}

/// Greedily decomposes a relation into partial bijections: the diagonal
/// becomes class 0, then every non-diagonal pair is scanned in canonical
/// order and placed into the first class where both of its coordinates are
/// still unused. Uses at most `2 * max_degree - 1` non-diagonal classes and
/// is deterministic.
pub fn build_label(relation: &Relation) -> Result<Label> {
    if !relation.contains_diagonal() {
        return Err(Error::MissingDiagonal);
    }
    let space = relation.space().clone();
    let comp_count = space.component_count();

    // Per class, per component: which points are used as first/second
    // coordinate. Class index 0 here is the first non-diagonal class.
    let mut used_first: Vec<Vec<Vec<bool>>> = Vec::new();
    let mut used_second: Vec<Vec<Vec<bool>>> = Vec::new();
    let mut class_pairs: Vec<Vec<Vec<(u32, u32)>>> = Vec::new();

    for c in 0..comp_count {
        for &(x, y) in relation.component_pairs(c as u32) {
            if x == y {
                continue;
            }
            let mut placed = false;
            for k in 0..class_pairs.len() {
                if !used_first[k][c][x as usize] && !used_second[k][c][y as usize] {
                    used_first[k][c][x as usize] = true;
                    used_second[k][c][y as usize] = true;
                    class_pairs[k][c].push((x, y));
                    placed = true;
                    break;
                }
            }
            if !placed {
                let sizes: Vec<usize> = space.sizes().iter().map(|&s| s as usize).collect();
                used_first.push(sizes.iter().map(|&m| vec![false; m]).collect());
                used_second.push(sizes.iter().map(|&m| vec![false; m]).collect());
                class_pairs.push(vec![Vec::new(); comp_count]);
                let k = class_pairs.len() - 1;
                used_first[k][c][x as usize] = true;
                used_second[k][c][y as usize] = true;
                class_pairs[k][c].push((x, y));
            }
        }
    }

    let mut classes = Vec::with_capacity(class_pairs.len() + 1);
    classes.push(Relation::diagonal(space.clone()));
    for pairs in class_pairs {
        classes.push(Relation::from_component_pairs(space.clone(), pairs)?);
    }
    Ok(Label {
        base: relation.clone(),
        classes,
    })
}

/// Checks every label invariant by exhaustive scan: the classes cover the
/// base exactly, each class is a partial bijection contained in the base,
/// and class 0 is the diagonal whenever the base contains it.
pub fn verify_label(label: &Label) -> bool {
    let base = label.base();
    if label.classes().is_empty() {
        return false;
    }
    let mut union = Relation::empty(base.space().clone());
    for class in label.classes() {
        if class.space() != base.space() {
            return false;
        }
        if !class.is_partial_bijection() {
            return false;
        }
        if !class.is_subset_of(base) {
            return false;
        }
        union = match union.union(class) {
            Ok(u) => u,
            Err(_) => return false,
        };
    }
    if &union != base {
        return false;
    }
    if base.contains_diagonal() {
        let diag = Relation::diagonal(base.space().clone());
        if label.classes()[0] != diag {
            return false;
        }
    }
    true
}

/// The signed classes `phi(-k), ..., phi(-1), phi(0), phi(1), ..., phi(k)`
/// with `phi(-j)` the inverse of `phi(j)`.
pub fn signed_classes(label: &Label) -> Vec<Relation> {
    let k = label.non_diagonal_count();
    let mut out = Vec::with_capacity(2 * k + 1);
    for j in (1..=k).rev() {
        out.push(label.classes()[j].inverse());
    }
    out.extend(label.classes().iter().cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::BoxSpace;

    fn cycle_step_relation(n: u32) -> Relation {
        // diag v forward shift v backward shift on C_n.
        let space = BoxSpace::new(vec![n]).unwrap();
        let mut pairs = Vec::new();
        for x in 0..n {
            pairs.push((0, (x, x)));
            pairs.push((0, ((x + 1) % n, x)));
            pairs.push((0, (x, (x + 1) % n)));
        }
        Relation::from_pairs(space, pairs).unwrap()
    }

    #[test]
    fn diagonal_labels_as_single_class() {
        let space = BoxSpace::new(vec![5, 2]).unwrap();
        let diag = Relation::diagonal(space);
        let label = build_label(&diag).unwrap();
        assert_eq!(label.class_count(), 1);
        assert!(verify_label(&label));
        assert_eq!(signed_classes(&label).len(), 1);
    }

    #[test]
    fn cycle_shift_label_has_three_classes() {
        let label = build_label(&cycle_step_relation(6)).unwrap();
        assert_eq!(label.class_count(), 3);
        assert!(verify_label(&label));
        // Signed classes: -2, -1, 0, 1, 2.
        let signed = signed_classes(&label);
        assert_eq!(signed.len(), 5);
        assert_eq!(signed[1], label.classes()[1].inverse());
        // Their union is widen(base, 1) = base v base^-1 v diag.
        let mut u = Relation::empty(label.base().space().clone());
        for s in &signed {
            u = u.union(s).unwrap();
        }
        assert_eq!(u, label.base().widen(1).unwrap());
    }

    #[test]
    fn missing_diagonal_is_rejected() {
        let space = BoxSpace::new(vec![4]).unwrap();
        let shift = Relation::from_pairs(space, (0..4).map(|x| (0, ((x + 1) % 4, x)))).unwrap();
        assert!(matches!(build_label(&shift), Err(Error::MissingDiagonal)));
    }

    #[test]
    fn verify_rejects_broken_labels() {
        let base = cycle_step_relation(4);
        let space = base.space().clone();
        let diag = Relation::diagonal(space.clone());
        // Not injective on the first coordinate.
        let bad = Relation::from_pairs(space.clone(), [(0, (0, 1)), (0, (0, 2))]).unwrap();
        let label = Label::from_parts(diag.union(&bad).unwrap(), vec![diag.clone(), bad]);
        assert!(!verify_label(&label));
        // Classes that do not cover the base.
        let partial = Label::from_parts(base.clone(), vec![diag]);
        assert!(!verify_label(&partial));
    }

    #[test]
    fn greedy_respects_class_bound() {
        // Deterministic pseudo-random relation on 10 points with degree <= 4.
        let space = BoxSpace::new(vec![10]).unwrap();
        let mut pairs: Vec<(u32, (u32, u32))> = (0..10).map(|i| (0, (i, i))).collect();
        let mut state = 9u64;
        for _ in 0..60 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let x = ((state >> 33) % 10) as u32;
            let y = ((state >> 13) % 10) as u32;
            pairs.push((0, (x, y)));
        }
        let r = Relation::from_pairs(space, pairs).unwrap();
        let d = r.max_degree();
        let label = build_label(&r).unwrap();
        assert!(verify_label(&label));
        assert!(label.non_diagonal_count() <= (2 * d - 1) as usize);
    }
}
