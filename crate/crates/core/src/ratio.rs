//! Shared kernel: minimize `w(R[Y]) / w(Y)` over nonempty F-bounded sets Y
//! drawn from the support of a nonnegative weight vector.
//!
//! Exact mode enumerates every nonempty subset of every maximal ball `F[x]`
//! (all F-bounded sets arise this way); heuristic mode grows sets greedily
//! from each singleton by steepest ratio descent and yields an upper bound
//! on the minimum.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::relation::Relation;
use crate::Result;

/// How a ratio scan explored the subset family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Exhaustive per-ball enumeration; the reported minimum is exact.
    Exact,
    /// Greedy descent; the reported value is an upper bound on the minimum.
    Heuristic,
}

/// Default cap on ball size for exhaustive enumeration.
pub const EXACT_CAP: usize = 22;

pub(crate) struct RatioScan {
    pub min_ratio: f64,
    pub argmin: Vec<u32>,
    pub mode: ScanMode,
}

struct Best {
    ratio: f64,
    set: Vec<u32>,
}

impl Best {
    fn new() -> Self {
        Best {
            ratio: f64::INFINITY,
            set: Vec::new(),
        }
    }

    /// Ties break toward smaller sets, then lexicographically smaller ones.
    fn offer(&mut self, ratio: f64, set: &[u32]) {
        let better = ratio < self.ratio
            || (ratio == self.ratio
                && (set.len() < self.set.len()
                    || (set.len() == self.set.len() && set < self.set.as_slice())));
        if better {
            self.ratio = ratio;
            self.set = set.to_vec();
        }
    }
}

/// State for incremental ratio evaluation: tracks `w(Y)` and `w(R[Y])`
/// under point insertions and removals via cover counts on `R[y]`.
struct Cover<'a> {
    weights: &'a [f64],
    expand: &'a [Vec<u32>],
    count: Vec<u32>,
    set: Vec<u32>,
    w_set: f64,
    w_image: f64,
}

impl<'a> Cover<'a> {
    fn new(weights: &'a [f64], expand: &'a [Vec<u32>]) -> Self {
        Cover {
            weights,
            expand,
            count: vec![0; weights.len()],
            set: Vec::new(),
            w_set: 0.0,
            w_image: 0.0,
        }
    }

    fn push(&mut self, p: u32) {
        self.set.push(p);
        self.w_set += self.weights[p as usize];
        for &u in &self.expand[p as usize] {
            if self.count[u as usize] == 0 {
                self.w_image += self.weights[u as usize];
            }
            self.count[u as usize] += 1;
        }
    }

    fn pop(&mut self) {
        let p = self.set.pop().expect("pop on empty cover");
        self.w_set -= self.weights[p as usize];
        for &u in &self.expand[p as usize] {
            self.count[u as usize] -= 1;
            if self.count[u as usize] == 0 {
                self.w_image -= self.weights[u as usize];
            }
        }
    }

    fn ratio(&self) -> f64 {
        self.w_image / self.w_set
    }
}

/// Minimizes `w(R[Y]) / w(Y)` over nonempty F-bounded `Y` inside the
/// support of `weights` in one component.
///
/// `expand` must be the per-source index of R for that component
/// (`expand[y] = R[y]`), and `f` the bounding relation.
pub(crate) fn min_bounded_ratio(
    component: u32,
    weights: &[f64],
    expand: &[Vec<u32>],
    f: &Relation,
    mode: ScanMode,
    cap: usize,
) -> Result<RatioScan> {
    let support: Vec<u32> = (0..weights.len() as u32)
        .filter(|&i| weights[i as usize] > 0.0)
        .collect();
    if support.is_empty() {
        return Err(Error::ZeroFunction);
    }

    // Maximal balls F[x] restricted to the support, deduplicated but
    // remembering one center per distinct ball.
    let f_index = f.by_source(component);
    let mut balls: Vec<(Vec<u32>, u32)> = (0..weights.len())
        .map(|x| {
            let ball: Vec<u32> = f_index[x]
                .iter()
                .copied()
                .filter(|&z| weights[z as usize] > 0.0)
                .collect();
            (ball, x as u32)
        })
        .filter(|(b, _)| !b.is_empty())
        .collect();
    balls.sort();
    balls.dedup_by(|a, b| a.0 == b.0);
    // Balls strictly contained in another ball contribute no new subsets.
    let keep: Vec<bool> = balls
        .iter()
        .map(|(b, _)| {
            !balls.iter().any(|(other, _)| {
                other.len() > b.len() && b.iter().all(|p| other.binary_search(p).is_ok())
            })
        })
        .collect();
    let balls: Vec<(Vec<u32>, u32)> = balls
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(b, _)| b)
        .collect();

    if balls.is_empty() {
        // No F-bounded set meets the support: the minimum over an empty
        // family is vacuous.
        return Ok(RatioScan {
            min_ratio: f64::INFINITY,
            argmin: Vec::new(),
            mode,
        });
    }

    let mut best = Best::new();
    let mut cover = Cover::new(weights, expand);

    match mode {
        ScanMode::Exact => {
            for (ball, center) in &balls {
                if ball.len() > cap {
                    return Err(Error::BallTooLarge {
                        component,
                        center: *center,
                        size: ball.len(),
                        cap,
                    });
                }
                enumerate(ball, 0, &mut cover, &mut best);
            }
        }
        ScanMode::Heuristic => {
            // Reverse index: for a covered point u, which sources q have
            // u in R[q]. Used to patch cached gains after each insertion.
            let n = weights.len();
            let mut co_sources: Vec<Vec<u32>> = vec![Vec::new(); n];
            for (q, image) in expand.iter().enumerate() {
                for &u in image {
                    co_sources[u as usize].push(q as u32);
                }
            }
            let mut gain = vec![0.0f64; n];
            let mut in_ball = vec![false; n];
            let mut in_set = vec![false; n];
            for (ball, _) in &balls {
                for &p in ball {
                    in_ball[p as usize] = true;
                }
                // The maximal ball itself is a candidate; greedy descent
                // can stall before absorbing it.
                for &p in ball {
                    cover.push(p);
                }
                best.offer(cover.ratio(), ball);
                while !cover.set.is_empty() {
                    cover.pop();
                }
                for &start in ball {
                    for &p in ball {
                        gain[p as usize] = expand[p as usize]
                            .iter()
                            .map(|&u| weights[u as usize])
                            .sum();
                        in_set[p as usize] = false;
                    }
                    grow(
                        start,
                        ball,
                        &mut cover,
                        &mut best,
                        &mut gain,
                        &mut in_set,
                        &in_ball,
                        &co_sources,
                    );
                    while let Some(&p) = cover.set.last() {
                        in_set[p as usize] = false;
                        cover.pop();
                    }
                }
                for &p in ball {
                    in_ball[p as usize] = false;
                }
            }
        }
    }

    Ok(RatioScan {
        min_ratio: best.ratio,
        argmin: sorted(&best.set),
        mode,
    })
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// One greedy descent from `start`: repeatedly add the candidate that
/// minimizes the next ratio, as long as that strictly improves it. Cached
/// gains are patched when an insertion newly covers points.
#[allow(clippy::too_many_arguments)]
fn grow(
    start: u32,
    ball: &[u32],
    cover: &mut Cover<'_>,
    best: &mut Best,
    gain: &mut [f64],
    in_set: &mut [bool],
    in_ball: &[bool],
    co_sources: &[Vec<u32>],
) {
    let insert = |p: u32, cover: &mut Cover<'_>, gain: &mut [f64], in_set: &mut [bool]| {
        for &u in &cover.expand[p as usize] {
            if cover.count[u as usize] == 0 {
                // u becomes covered: sources that would have covered it
                // lose that gain.
                for &q in &co_sources[u as usize] {
                    if in_ball[q as usize] && !in_set[q as usize] {
                        gain[q as usize] -= cover.weights[u as usize];
                    }
                }
            }
        }
        cover.push(p);
        in_set[p as usize] = true;
    };
    insert(start, cover, gain, in_set);
    best.offer(cover.ratio(), &cover.set);
    loop {
        let mut candidate: Option<(f64, u32)> = None;
        for &z in ball {
            if in_set[z as usize] {
                continue;
            }
            let r = (cover.w_image + gain[z as usize]) / (cover.w_set + cover.weights[z as usize]);
            let take = match candidate {
                None => true,
                Some((cr, cz)) => r < cr || (r == cr && z < cz),
            };
            if take {
                candidate = Some((r, z));
            }
        }
        match candidate {
            Some((r, z)) if r < cover.ratio() => {
                insert(z, cover, gain, in_set);
                let ratio = cover.ratio();
                if ratio <= best.ratio {
                    best.offer(ratio, &sorted(&cover.set));
                }
            }
            _ => break,
        }
    }
}

fn enumerate(ball: &[u32], from: usize, cover: &mut Cover<'_>, best: &mut Best) {
    for i in from..ball.len() {
        cover.push(ball[i]);
        best.offer(cover.ratio(), &cover.set);
        enumerate(ball, i + 1, cover, best);
        cover.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::BoxSpace;

    fn cycle(n: u32, radius: u32) -> Relation {
        let space = BoxSpace::new(vec![n]).unwrap();
        let mut pairs = Vec::new();
        for x in 0..n {
            for d in 0..=radius {
                pairs.push((0, (x, (x + d) % n)));
                pairs.push((0, ((x + d) % n, x)));
            }
        }
        Relation::from_pairs(space, pairs).unwrap()
    }

    #[test]
    fn cycle_interval_is_the_minimizer() {
        // Uniform weights on C_8, R = {d <= 1} = F: the 3-point interval
        // wins with ratio 5/3.
        let t = cycle(8, 1);
        let w = vec![1.0 / 8.0; 8];
        let expand = t.by_source(0);
        let scan = min_bounded_ratio(0, &w, &expand, &t, ScanMode::Exact, EXACT_CAP).unwrap();
        assert!((scan.min_ratio - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(scan.argmin.len(), 3);
        let a = scan.argmin.clone();
        assert_eq!((a[1] + 8 - a[0]) % 8, 1);
        assert_eq!((a[2] + 8 - a[1]) % 8, 1);
    }

    #[test]
    fn heuristic_upper_bounds_exact() {
        let t = cycle(10, 1);
        let f = cycle(10, 2);
        let w = vec![0.1; 10];
        let expand = t.by_source(0);
        let exact = min_bounded_ratio(0, &w, &expand, &f, ScanMode::Exact, EXACT_CAP).unwrap();
        let heur = min_bounded_ratio(0, &w, &expand, &f, ScanMode::Heuristic, EXACT_CAP).unwrap();
        assert!(heur.min_ratio >= exact.min_ratio - 1e-12);
    }

    #[test]
    fn cap_violation_is_reported() {
        let t = cycle(30, 1);
        let f = cycle(30, 12); // 25-point balls
        let w = vec![1.0 / 30.0; 30];
        let expand = t.by_source(0);
        let err = min_bounded_ratio(0, &w, &expand, &f, ScanMode::Exact, EXACT_CAP);
        assert!(matches!(err, Err(Error::BallTooLarge { size: 25, .. })));
    }
}
