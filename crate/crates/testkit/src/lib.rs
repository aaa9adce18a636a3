//! Test-only oracles for the boxspace crates.
//!
//! Everything here recomputes quantities by a route independent of the
//! implementation under test: dense eigensolves instead of sparse power
//! iteration, double loops and explicit set algebra instead of indexed
//! sparse kernels, exhaustive subset enumeration instead of per-ball
//! reductions. Keep it slow and obvious.

use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use boxspace::{BoxSpace, PointSet, PropagationOperator, Relation};

/// Deterministic RNG for fuzzed instances.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random relation on a fresh single-component space of `n` points with
/// expected density `density`.
pub fn random_relation(rng: &mut ChaCha8Rng, n: u32, density: f64) -> Relation {
    let space = BoxSpace::new(vec![n]).unwrap();
    random_relation_on(rng, &space, density)
}

/// Random relation on an existing space.
pub fn random_relation_on(rng: &mut ChaCha8Rng, space: &Arc<BoxSpace>, density: f64) -> Relation {
    let mut pairs = Vec::new();
    for (c, &s) in space.sizes().iter().enumerate() {
        for x in 0..s {
            for y in 0..s {
                if rng.gen::<f64>() < density {
                    pairs.push((c as u32, (x, y)));
                }
            }
        }
    }
    Relation::from_pairs(space.clone(), pairs).unwrap()
}

/// Random relation forced to contain the diagonal.
pub fn random_reflexive_relation(rng: &mut ChaCha8Rng, n: u32, density: f64) -> Relation {
    random_relation(rng, n, density).with_diagonal()
}

/// Random sparse operator on a fresh single-component space; entries are
/// uniform in [-1, 1] at the given density.
pub fn random_operator(rng: &mut ChaCha8Rng, n: u32, density: f64) -> PropagationOperator {
    let space = BoxSpace::new(vec![n]).unwrap();
    let mut entries = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rng.gen::<f64>() < density {
                entries.push((0u32, (x, y, rng.gen::<f64>() * 2.0 - 1.0)));
            }
        }
    }
    // Guarantee at least one entry so norms are positive.
    if entries.is_empty() {
        entries.push((0, (0, 0, 1.0)));
    }
    PropagationOperator::from_entries(space, entries, None).unwrap()
}

/// Brute-force relation composition by double loop over pair lists.
pub fn compose_oracle(a: &Relation, b: &Relation) -> Relation {
    let space = a.space().clone();
    let mut pairs = Vec::new();
    for c in 0..space.component_count() as u32 {
        for &(x, z1) in a.component_pairs(c) {
            for &(z2, y) in b.component_pairs(c) {
                if z1 == z2 {
                    pairs.push((c, (x, y)));
                }
            }
        }
    }
    Relation::from_pairs(space, pairs).unwrap()
}

/// n-step reachability closure of `diag v r v r^-1` by iterated expansion:
/// the independent oracle for `widen`.
pub fn widen_oracle(r: &Relation, n: u32) -> Relation {
    let space = r.space().clone();
    let mut sym: BTreeSet<(u32, (u32, u32))> = BTreeSet::new();
    for (c, &s) in space.sizes().iter().enumerate() {
        for i in 0..s {
            sym.insert((c as u32, (i, i)));
        }
    }
    for (c, (x, y)) in r.iter() {
        sym.insert((c, (x, y)));
        sym.insert((c, (y, x)));
    }
    let mut reach = sym.clone();
    for _ in 1..n {
        let mut next = reach.clone();
        for &(c, (x, z)) in &reach {
            for &(c2, (z2, y)) in &sym {
                if c == c2 && z == z2 {
                    next.insert((c, (x, y)));
                }
            }
        }
        reach = next;
    }
    Relation::from_pairs(space, reach).unwrap()
}

/// Dense matrix of one operator component.
pub fn dense_component(a: &PropagationOperator, component: u32) -> DMatrix<f64> {
    let n = a.component_dim(component);
    let mut m = DMatrix::zeros(n, n);
    for (x, y, v) in a.component_triplets(component) {
        m[(x as usize, y as usize)] = v;
    }
    m
}

/// Spectral norm of a dense matrix via nalgebra's symmetric eigensolver
/// applied to the Gram matrix.
pub fn dense_spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l))
        .max(0.0)
        .sqrt()
}

/// Dense oracle for the whole-operator norm (max over components).
pub fn operator_norm_oracle(a: &PropagationOperator) -> f64 {
    (0..a.space().component_count() as u32)
        .map(|c| dense_spectral_norm(&dense_component(a, c)))
        .fold(0.0, f64::max)
}

/// Dense oracle for `||a P_Y||`: zero all columns outside `Y`.
pub fn compressed_norm_oracle(a: &PropagationOperator, set: &PointSet) -> f64 {
    let c = set.component();
    let mut m = dense_component(a, c);
    for y in 0..m.ncols() {
        if !set.contains(y as u32) {
            for x in 0..m.nrows() {
                m[(x, y)] = 0.0;
            }
        }
    }
    dense_spectral_norm(&m)
}

/// All nonempty F-bounded subsets of one component, by exhaustive scan of
/// the full power set. Only feasible for small components.
pub fn bounded_subsets_oracle(f: &Relation, component: u32) -> Vec<Vec<u32>> {
    let n = f.space().sizes()[component as usize];
    assert!(n <= 20, "oracle enumeration only supports small components");
    let mut balls: Vec<BTreeSet<u32>> = Vec::new();
    for x in 0..n {
        let ball: BTreeSet<u32> = f
            .component_pairs(component)
            .iter()
            .filter(|&&(_, y)| y == x)
            .map(|&(z, _)| z)
            .collect();
        balls.push(ball);
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<u32> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let bounded = balls
            .iter()
            .any(|ball| subset.iter().all(|p| ball.contains(p)));
        if bounded {
            out.push(subset);
        }
    }
    out
}

/// `{x : exists y in set, (x, y) in r}` by scanning the pair list.
pub fn ball_oracle(r: &Relation, component: u32, set: &[u32]) -> Vec<u32> {
    let mut out: BTreeSet<u32> = BTreeSet::new();
    for &(x, y) in r.component_pairs(component) {
        if set.contains(&y) {
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

/// Exhaustive minimum of `w(r[Y]) / w(Y)` over all nonempty F-bounded
/// subsets of a small component.
pub fn min_ratio_oracle(weights: &[f64], r: &Relation, f: &Relation, component: u32) -> f64 {
    let mut best = f64::INFINITY;
    for subset in bounded_subsets_oracle(f, component) {
        let wy: f64 = subset.iter().map(|&i| weights[i as usize]).sum();
        if wy <= 0.0 {
            continue;
        }
        let image = ball_oracle(r, component, &subset);
        let wr: f64 = image.iter().map(|&i| weights[i as usize]).sum();
        best = best.min(wr / wy);
    }
    best
}

/// Exhaustive supremum of `||a P_Y|| / ||a||` over all nonempty F-bounded
/// subsets of a small component, by dense eigensolves.
pub fn localization_sup_oracle(a: &PropagationOperator, f: &Relation, component: u32) -> f64 {
    let norm = operator_norm_oracle(a);
    assert!(norm > 0.0);
    let mut best: f64 = 0.0;
    for subset in bounded_subsets_oracle(f, component) {
        let set = PointSet::new(component, subset);
        best = best.max(compressed_norm_oracle(a, &set) / norm);
    }
    best
}
