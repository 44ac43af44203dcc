#![allow(dead_code)]

use std::collections::BTreeSet;

use lateral::CellGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair_index(l: usize) -> Vec<(usize, usize)> {
    (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).collect()
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; l], &mut out);
    out
}

fn mask_connected(l: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    let mut seen = vec![false; l];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for (e, &(a, b)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let other = if a == c {
                    b
                } else if b == c {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative per isomorphism class of connected graphs on `l`
/// cells, `1 <= l <= 6`. Deterministic order.
pub fn nonisomorphic_connected(l: usize) -> Vec<CellGraph> {
    assert!((1..=6).contains(&l));
    let pairs = pair_index(l);
    let mut slot = vec![vec![0usize; l]; l];
    for (e, &(a, b)) in pairs.iter().enumerate() {
        slot[a][b] = e;
        slot[b][a] = e;
    }
    let perms = permutations(l);
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        if !mask_connected(l, &pairs, mask) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(e, _)| mask >> e & 1 == 1)
                    .fold(0u32, |m, (_, &(a, b))| m | 1 << slot[p[a]][p[b]])
            })
            .min()
            .expect("at least one permutation");
        classes.insert(canon);
    }
    classes
        .into_iter()
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|&(e, _)| mask >> e & 1 == 1).map(|(_, &p)| p);
            CellGraph::connected(l, edges).expect("connected by construction")
        })
        .collect()
}

/// Every connected graph up to isomorphism with at most `max` cells.
pub fn all_connected_up_to(max: usize) -> Vec<CellGraph> {
    (1..=max).flat_map(nonisomorphic_connected).collect()
}

/// A random connected graph: a random spanning tree plus each remaining
/// pair with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, l: usize, p: f64) -> CellGraph {
    let mut order: Vec<usize> = (0..l).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..l {
        let parent = order[rng.gen_range(0..i)];
        let (a, b) = (order[i], parent);
        edges.insert((a.min(b), a.max(b)));
    }
    for (a, b) in pair_index(l) {
        if rng.gen_bool(p) {
            edges.insert((a, b));
        }
    }
    CellGraph::connected(l, edges).expect("spanning tree keeps it connected")
}

/// `count` seeded random connected graphs with sizes drawn from `sizes`.
pub fn random_graphs(seed: u64, count: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<CellGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let l = rng.gen_range(sizes.clone());
            let p = rng.gen_range(0.0..0.6);
            random_connected(&mut rng, l, p)
        })
        .collect()
}
