//! Deterministic instance generators. Every generator emits the edge
//! relation united with the diagonal, and all randomness flows through an
//! explicit seed.

use anyhow::{bail, Result};
use boxspace::{BoxSpace, Relation};
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spacefile::SpaceFile;

fn relation_file(sizes: Vec<u32>, pairs: Vec<(u32, (u32, u32))>) -> Result<SpaceFile> {
    let space = BoxSpace::new(sizes)?;
    let relation = Relation::from_pairs(space.clone(), pairs)?;
    Ok(SpaceFile::new(space, relation))
}

/// One cycle component per entry of `sizes`.
pub fn gen_cycles(sizes: &[u32]) -> Result<SpaceFile> {
    if sizes.is_empty() {
        bail!("need at least one cycle size");
    }
    let mut pairs = Vec::new();
    for (c, &n) in sizes.iter().enumerate() {
        if n < 3 {
            bail!("cycle size {n} is below 3");
        }
        for x in 0..n {
            pairs.push((c as u32, (x, x)));
            pairs.push((c as u32, (x, (x + 1) % n)));
            pairs.push((c as u32, ((x + 1) % n, x)));
        }
    }
    relation_file(sizes.to_vec(), pairs)
}

/// One `side x side` torus component per entry of `sides`
/// (4-regular grid with wraparound).
pub fn gen_torus(sides: &[u32]) -> Result<SpaceFile> {
    if sides.is_empty() {
        bail!("need at least one torus side");
    }
    let mut sizes = Vec::new();
    let mut pairs = Vec::new();
    for (comp, &side) in sides.iter().enumerate() {
        if side < 2 {
            bail!("torus side {side} is below 2");
        }
        sizes.push(side * side);
        let c = comp as u32;
        for r in 0..side {
            for col in 0..side {
                let at = r * side + col;
                pairs.push((c, (at, at)));
                for (nr, nc) in [
                    ((r + 1) % side, col),
                    ((r + side - 1) % side, col),
                    (r, (col + 1) % side),
                    (r, (col + side - 1) % side),
                ] {
                    let nb = nr * side + nc;
                    pairs.push((c, (nb, at)));
                }
            }
        }
    }
    relation_file(sizes, pairs)
}

/// One Margulis expander component per entry of `sides`: the vertex set is
/// `Z_s x Z_s` and each vertex `(x, y)` connects to its images under the
/// eight affine maps `(x +- 2y, y)`, `(x +- (2y+1), y)`, `(x, y +- 2x)`,
/// `(x, y +- (2x+1))`.
pub fn gen_margulis(sides: &[u32]) -> Result<SpaceFile> {
    if sides.is_empty() {
        bail!("need at least one margulis side");
    }
    let mut sizes = Vec::new();
    let mut pairs = Vec::new();
    for (comp, &side) in sides.iter().enumerate() {
        if side < 2 {
            bail!("margulis side {side} is below 2");
        }
        sizes.push(side * side);
        let c = comp as u32;
        let s = side;
        for x in 0..s {
            for y in 0..s {
                let at = x * s + y;
                pairs.push((c, (at, at)));
                let images = [
                    ((x + 2 * y) % s, y),
                    ((x + s - (2 * y) % s) % s, y),
                    ((x + (2 * y + 1) % s) % s, y),
                    ((x + s - (2 * y + 1) % s) % s, y),
                    (x, (y + 2 * x) % s),
                    (x, (y + s - (2 * x) % s) % s),
                    (x, (y + (2 * x + 1) % s) % s),
                    (x, (y + s - (2 * x + 1) % s) % s),
                ];
                for (nx, ny) in images {
                    let nb = nx * s + ny;
                    pairs.push((c, (nb, at)));
                    pairs.push((c, (at, nb)));
                }
            }
        }
    }
    relation_file(sizes, pairs)
}

/// One random `degree`-regular component per entry of `sizes`, by the
/// pairing model with rejection of loops and parallel edges. Deterministic
/// for a fixed seed.
pub fn gen_random_regular(degree: u32, sizes: &[u32], seed: u64) -> Result<SpaceFile> {
    if sizes.is_empty() {
        bail!("need at least one component size");
    }
    if degree == 0 {
        bail!("degree must be positive");
    }
    let mut pairs = Vec::new();
    for (comp, &n) in sizes.iter().enumerate() {
        if n < 3 {
            bail!("component size {n} is below 3");
        }
        if degree >= n {
            bail!("degree {degree} is infeasible on {n} points");
        }
        if (degree * n) % 2 != 0 {
            bail!("degree {degree} times size {n} must be even");
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (comp as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let edges = loop {
            match try_pairing(&mut rng, n, degree) {
                Some(edges) => break edges,
                None => continue,
            }
        };
        let c = comp as u32;
        for x in 0..n {
            pairs.push((c, (x, x)));
        }
        for (u, v) in edges {
            pairs.push((c, (u, v)));
            pairs.push((c, (v, u)));
        }
    }
    relation_file(sizes.to_vec(), pairs)
}

fn try_pairing(rng: &mut ChaCha8Rng, n: u32, degree: u32) -> Option<Vec<(u32, u32)>> {
    let mut stubs: Vec<u32> = (0..n)
        .flat_map(|v| std::iter::repeat(v).take(degree as usize))
        .collect();
    stubs.shuffle(rng);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    let mut seen = std::collections::BTreeSet::new();
    for pair in stubs.chunks(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            return None;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return None;
        }
        edges.push(key);
    }
    Some(edges)
}
