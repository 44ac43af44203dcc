//! Exhaustive ground truth over the explicit asynchronous state transition
//! graph. Every closed-form routine in the crate is cross-checked against
//! these functions on small instances.
//!
//! States are packed into `u64` indices with bit `p` holding position `p`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{Network, PathWitness, State, Subspace};

/// Default cap on the state-space dimension (about one million states).
pub const DEFAULT_LIMIT: usize = 20;

/// Hard cap regardless of the requested limit; the image table alone needs
/// `8 * 2^n` bytes.
pub const MAX_LIMIT: usize = 26;

fn check_limit(dimension: usize, limit: usize) -> Result<()> {
    if dimension > limit.min(MAX_LIMIT) {
        Err(Error::LimitExceeded { dimension, limit: limit.min(MAX_LIMIT) })
    } else {
        Ok(())
    }
}

/// The explicit asynchronous state transition graph: one table entry `f(x)`
/// per state.
#[derive(Clone, Debug)]
pub struct Stg {
    dimension: usize,
    image: Vec<u64>,
}

impl Stg {
    pub fn build(net: &Network, limit: usize) -> Result<Self> {
        let dimension = net.dimension();
        check_limit(dimension, limit)?;
        let image = (0..1u64 << dimension).map(|x| net.eval_index(x)).collect();
        Ok(Self { dimension, image })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn state_count(&self) -> u64 {
        1 << self.dimension
    }

    /// `f(x)` as a packed state.
    pub fn image(&self, x: u64) -> u64 {
        self.image[x as usize]
    }

    /// Positions where `x` disagrees with `f(x)`.
    pub fn enabled(&self, x: u64) -> u64 {
        self.image[x as usize] ^ x
    }

    /// Asynchronous successors of `x`, by increasing flipped position.
    pub fn successors(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        let mask = self.enabled(x);
        (0..self.dimension).filter(move |p| mask >> p & 1 == 1).map(move |p| x ^ (1 << p))
    }

    /// Asynchronous predecessors of `x`.
    pub fn predecessors(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.dimension).filter_map(move |p| {
            let y = x ^ (1 << p);
            (self.enabled(y) >> p & 1 == 1).then_some(y)
        })
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.state_count()).map(|x| u64::from(self.enabled(x).count_ones())).sum()
    }

    pub fn fixed_points(&self) -> Vec<u64> {
        (0..self.state_count()).filter(|&x| self.enabled(x) == 0).collect()
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.image.len()];
        for x in 0..self.state_count() {
            for y in self.successors(x) {
                deg[y as usize] += 1;
            }
        }
        deg
    }

    /// Strongly connected components (iterative Tarjan). Each component is
    /// sorted; components come out in reverse topological order.
    pub fn sccs(&self) -> Vec<Vec<u64>> {
        const UNSEEN: u32 = u32::MAX;
        let n = self.image.len();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u64> = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0u32;
        // Frames: (state, next position to try).
        let mut frames: Vec<(u64, usize)> = Vec::new();
        for root in 0..n as u64 {
            if index[root as usize] != UNSEEN {
                continue;
            }
            frames.push((root, 0));
            index[root as usize] = counter;
            low[root as usize] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root as usize] = true;
            while let Some(&mut (v, ref mut next)) = frames.last_mut() {
                let mask = self.enabled(v);
                let mut descended = false;
                while *next < self.dimension {
                    let p = *next;
                    *next += 1;
                    if mask >> p & 1 == 0 {
                        continue;
                    }
                    let w = v ^ (1 << p);
                    if index[w as usize] == UNSEEN {
                        index[w as usize] = counter;
                        low[w as usize] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        frames.push((w, 0));
                        descended = true;
                        break;
                    } else if on_stack[w as usize] {
                        low[v as usize] = low[v as usize].min(index[w as usize]);
                    }
                }
                if descended {
                    continue;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
        out
    }

    /// Terminal strongly connected components, sorted by smallest member.
    pub fn attractors(&self) -> Vec<Vec<u64>> {
        let sccs = self.sccs();
        let mut comp_of = vec![0usize; self.image.len()];
        for (c, comp) in sccs.iter().enumerate() {
            for &x in comp {
                comp_of[x as usize] = c;
            }
        }
        let mut out: Vec<Vec<u64>> = sccs
            .iter()
            .enumerate()
            .filter(|(c, comp)| comp.iter().all(|&x| self.successors(x).all(|y| comp_of[y as usize] == *c)))
            .map(|(_, comp)| comp.clone())
            .collect();
        out.sort();
        out
    }

    /// Whether the graph contains a directed cycle.
    pub fn has_cycle(&self) -> bool {
        self.has_cycle_within(|_| true)
    }

    /// Whether the subgraph induced by `member` contains a directed cycle.
    pub fn has_cycle_within(&self, member: impl Fn(u64) -> bool) -> bool {
        self.find_cycle_within(member).is_some()
    }

    /// Some directed cycle inside `member`, as its list of states.
    pub fn find_cycle_within(&self, member: impl Fn(u64) -> bool) -> Option<Vec<u64>> {
        // 0 = unvisited, 1 = on the current DFS path, 2 = finished.
        let mut colour = vec![0u8; self.image.len()];
        let mut frames: Vec<(u64, usize)> = Vec::new();
        for root in 0..self.state_count() {
            if colour[root as usize] != 0 || !member(root) {
                continue;
            }
            colour[root as usize] = 1;
            frames.push((root, 0));
            while let Some(&mut (v, ref mut next)) = frames.last_mut() {
                let mask = self.enabled(v);
                let mut step = None;
                while *next < self.dimension {
                    let p = *next;
                    *next += 1;
                    if mask >> p & 1 == 1 {
                        let w = v ^ (1 << p);
                        if member(w) && colour[w as usize] != 2 {
                            step = Some(w);
                            break;
                        }
                    }
                }
                match step {
                    Some(w) if colour[w as usize] == 1 => {
                        let start = frames.iter().position(|&(s, _)| s == w).expect("on path");
                        return Some(frames[start..].iter().map(|&(s, _)| s).collect());
                    }
                    Some(w) => {
                        colour[w as usize] = 1;
                        frames.push((w, 0));
                    }
                    None => {
                        colour[v as usize] = 2;
                        frames.pop();
                    }
                }
            }
        }
        None
    }

    /// Forward-reachable set from `x` (including `x`).
    pub fn reachable_from(&self, x: u64) -> Vec<bool> {
        let mut seen = vec![false; self.image.len()];
        let mut queue = VecDeque::from([x]);
        seen[x as usize] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.successors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// States from which `target` is reachable (including `target`).
    pub fn backward_reachable(&self, target: u64) -> Vec<bool> {
        let mut seen = vec![false; self.image.len()];
        let mut queue = VecDeque::from([target]);
        seen[target as usize] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.predecessors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// A shortest path from `from` to `to`, if any.
    pub fn shortest_path(&self, from: u64, to: u64) -> Option<PathWitness> {
        let mut parent = vec![u8::MAX; self.image.len()];
        let mut seen = vec![false; self.image.len()];
        seen[from as usize] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut flips = Vec::new();
                let mut cur = to;
                while cur != from {
                    let p = parent[cur as usize] as usize;
                    flips.push(p);
                    cur ^= 1 << p;
                }
                flips.reverse();
                return Some(PathWitness { start: State::from_index(from, self.dimension), flips });
            }
            let mask = self.enabled(v);
            for p in 0..self.dimension {
                if mask >> p & 1 == 1 {
                    let w = v ^ (1 << p);
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        parent[w as usize] = p as u8;
                        queue.push_back(w);
                    }
                }
            }
        }
        None
    }

    /// Weak basin of each fixed point, keyed like [`Stg::fixed_points`].
    pub fn weak_basins(&self) -> Vec<(u64, Vec<bool>)> {
        self.fixed_points().into_iter().map(|fp| (fp, self.backward_reachable(fp))).collect()
    }

    /// Strong basin of `fp`: states from which `fp` is the only reachable
    /// attractor. Assumes every attractor is a fixed point.
    pub fn strong_basin(&self, fp: u64) -> Vec<bool> {
        let basins = self.weak_basins();
        let own = &basins.iter().find(|(x, _)| *x == fp).expect("fixed point").1;
        (0..self.image.len()).map(|x| own[x] && basins.iter().all(|(y, b)| *y == fp || !b[x])).collect()
    }

    /// Graphviz rendering, one node per state.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stg {\n");
        for x in 0..self.state_count() {
            let s = State::from_index(x, self.dimension);
            let shape = if self.enabled(x) == 0 { "doublecircle" } else { "ellipse" };
            let _ = writeln!(out, "  \"{s}\" [shape={shape}];");
        }
        for x in 0..self.state_count() {
            let s = State::from_index(x, self.dimension);
            for y in self.successors(x) {
                let _ = writeln!(out, "  \"{s}\" -> \"{}\";", State::from_index(y, self.dimension));
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON edge list: `{"dimension": n, "states": [...], "edges": [[from, to], ...],
    /// "fixed_points": [...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            dimension: usize,
            states: Vec<String>,
            edges: Vec<(String, String)>,
            fixed_points: Vec<String>,
        }
        let name = |x: u64| State::from_index(x, self.dimension).to_string();
        let doc = Doc {
            dimension: self.dimension,
            states: (0..self.state_count()).map(name).collect(),
            edges: (0..self.state_count()).flat_map(|x| self.successors(x).map(move |y| (name(x), name(y)))).collect(),
            fixed_points: self.fixed_points().into_iter().map(name).collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }
}

/// All fixed points by scanning the whole state space.
pub fn fixed_points_bruteforce(net: &Network, limit: usize) -> Result<Vec<State>> {
    let n = net.dimension();
    check_limit(n, limit)?;
    Ok((0..1u64 << n).filter(|&x| net.eval_index(x) == x).map(|x| State::from_index(x, n)).collect())
}

fn subspace_masks(s: &Subspace) -> (u64, u64) {
    let free = s.free_positions().fold(0u64, |m, p| m | 1 << p);
    (s.base().index(), free)
}

/// Iterates every submask of `mask`.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Whether every transition out of every state of `s` stays in `s`.
pub fn is_trap_space_bruteforce(net: &Network, s: &Subspace, limit: usize) -> Result<bool> {
    let n = net.dimension();
    check_limit(n, limit)?;
    if s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.len() });
    }
    let (base, free) = subspace_masks(s);
    let fixed = !free & ((1u64 << n) - 1);
    Ok(submasks(free).all(|m| (net.eval_index(base | m) ^ (base | m)) & fixed == 0))
}

/// Minimal trap space containing `x`, by the enumerating closure: free every
/// position that some state of the current subspace flips.
pub fn kappa_bruteforce(net: &Network, x: &State, limit: usize) -> Result<Subspace> {
    let n = net.dimension();
    check_limit(n, limit)?;
    net.check_dimension(x)?;
    let base = x.index();
    let mut free = 0u64;
    loop {
        let escaping = submasks(free).fold(0u64, |acc, m| {
            let z = (base & !free) | m;
            acc | ((net.eval_index(z) ^ z) & !free)
        });
        if escaping == 0 {
            break;
        }
        free |= escaping;
    }
    Ok(Subspace::with_free_positions(x, (0..n).filter(|p| free >> p & 1 == 1)))
}

/// Every trap space, found by testing all `3^n` subspaces. Sorted.
pub fn trap_spaces_bruteforce(net: &Network, limit: usize) -> Result<Vec<Subspace>> {
    let n = net.dimension();
    check_limit(n, limit.min(16))?;
    let stg = Stg::build(net, limit)?;
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    for free in 0..=full {
        let fixed = full & !free;
        for base in submasks(fixed) {
            if submasks(free).all(|m| stg.enabled(base | m) & fixed == 0) {
                let state = State::from_index(base, n);
                out.push(Subspace::with_free_positions(&state, (0..n).filter(|p| free >> p & 1 == 1)));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellgraph::{CellGraph, GraphKind};
    use crate::netcore::ModelKind;
    use crate::testutil::connected_graph;
    use proptest::prelude::*;

    fn path(l: usize) -> CellGraph {
        CellGraph::generate(GraphKind::Path { cells: l }).unwrap()
    }

    fn idx(s: &str) -> u64 {
        State::parse(s).unwrap().index()
    }

    fn names(stg: &Stg, xs: &[u64]) -> Vec<String> {
        xs.iter().map(|&x| State::from_index(x, stg.dimension()).to_string()).collect()
    }

    #[test]
    fn two_cells_full_graph() {
        let net = Network::build(&path(2), ModelKind::Full, 1).unwrap();
        let stg = Stg::build(&net, DEFAULT_LIMIT).unwrap();
        assert_eq!(stg.state_count(), 16);
        let attractors = stg.attractors();
        let mut fps: Vec<String> = attractors.iter().map(|a| names(&stg, a).join(",")).collect();
        fps.sort();
        assert_eq!(fps, vec!["0110", "1001"]);
        let indeg = stg.in_degrees();
        let mut sources: Vec<String> =
            (0..16).filter(|&x| indeg[x as usize] == 0).map(|x| names(&stg, &[x])[0].clone()).collect();
        sources.sort();
        assert_eq!(sources, vec!["0101", "1010"]);
        let big: Vec<_> = stg.sccs().into_iter().filter(|c| c.len() > 1).collect();
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].len(), 12);
        assert!(stg.has_cycle());
    }

    #[test]
    fn single_cell_graphs() {
        let full = Stg::build(&Network::build(&path(1), ModelKind::Full, 1).unwrap(), 20).unwrap();
        assert_eq!(full.state_count(), 4);
        assert_eq!(names(&full, &full.fixed_points()), vec!["01"]);
        let reduced = Stg::build(&Network::build(&path(1), ModelKind::Reduced, 1).unwrap(), 20).unwrap();
        assert_eq!(reduced.state_count(), 2);
        assert_eq!(names(&reduced, &reduced.fixed_points()), vec!["0"]);
    }

    #[test]
    fn path3_reduced_attractors() {
        let stg = Stg::build(&Network::build(&path(3), ModelKind::Reduced, 1).unwrap(), 20).unwrap();
        let att: Vec<Vec<String>> = stg.attractors().iter().map(|a| names(&stg, a)).collect();
        assert_eq!(att, vec![vec!["010".to_string()], vec!["101".to_string()]]);
        assert!(!stg.has_cycle());
    }

    #[test]
    fn limit_is_enforced() {
        let net = Network::build(&path(11), ModelKind::Full, 1).unwrap();
        assert!(matches!(Stg::build(&net, 20), Err(Error::LimitExceeded { dimension: 22, limit: 20 })));
        let huge = Network::build(&path(14), ModelKind::Full, 1).unwrap();
        assert!(matches!(Stg::build(&huge, 40), Err(Error::LimitExceeded { limit: MAX_LIMIT, .. })));
    }

    #[test]
    fn trap_space_examples() {
        let one = Network::build(&path(1), ModelKind::Full, 1).unwrap();
        assert!(is_trap_space_bruteforce(&one, &Subspace::parse("0*").unwrap(), 20).unwrap());
        let mut all: Vec<String> = trap_spaces_bruteforce(&one, 20).unwrap().iter().map(|s| s.to_string()).collect();
        all.sort();
        assert_eq!(all, vec!["**", "0*", "01"]);
        let two = Network::build(&path(2), ModelKind::Full, 1).unwrap();
        assert!(!is_trap_space_bruteforce(&two, &Subspace::parse("01**").unwrap(), 20).unwrap());
        assert!(is_trap_space_bruteforce(&two, &Subspace::full(4), 20).unwrap());
        let mut all: Vec<String> = trap_spaces_bruteforce(&two, 20).unwrap().iter().map(|s| s.to_string()).collect();
        all.sort();
        assert_eq!(all, vec!["****", "0110", "1001"]);
    }

    #[test]
    fn kappa_examples() {
        let two = Network::build(&path(2), ModelKind::Full, 1).unwrap();
        let k = |net: &Network, s: &str| kappa_bruteforce(net, &State::parse(s).unwrap(), 20).unwrap().to_string();
        assert_eq!(k(&two, "0110"), "0110");
        assert_eq!(k(&two, "0101"), "****");
        let one = Network::build(&path(1), ModelKind::Full, 1).unwrap();
        assert_eq!(k(&one, "00"), "0*");
    }

    #[test]
    fn path3_no_path_to_other_pattern() {
        let stg = Stg::build(&Network::build(&path(3), ModelKind::Full, 1).unwrap(), 20).unwrap();
        assert!(stg.shortest_path(idx("011100"), idx("101010")).is_none());
        let w = stg.shortest_path(idx("011100"), idx("010101")).unwrap();
        assert_eq!(w.end().to_string(), "010101");
        let same = stg.shortest_path(idx("011100"), idx("011100")).unwrap();
        assert!(same.is_empty());
    }

    #[test]
    fn exports() {
        let stg = Stg::build(&Network::build(&path(1), ModelKind::Full, 1).unwrap(), 20).unwrap();
        let dot = stg.to_dot();
        assert!(dot.starts_with("digraph stg {"));
        assert!(dot.contains("\"01\" [shape=doublecircle];"));
        assert!(dot.contains("\"00\" -> \"01\";"));
        let json = stg.to_json();
        assert_eq!(json["fixed_points"], serde_json::json!(["01"]));
        assert_eq!(json["edges"].as_array().unwrap().len() as u64, stg.edge_count());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn attractors_are_fixed_points(g in connected_graph(1..=5), k in 1usize..=3, full in any::<bool>()) {
            let kind = if full { ModelKind::Full } else { ModelKind::Reduced };
            let net = Network::build(&g, kind, k).unwrap();
            let stg = Stg::build(&net, 20).unwrap();
            for a in stg.attractors() {
                prop_assert_eq!(a.len(), 1);
            }
        }

        #[test]
        fn kappa_is_the_least_trap_space(g in connected_graph(1..=5), seed in any::<u64>(), k in 1usize..=2, full in any::<bool>()) {
            let kind = if full { ModelKind::Full } else { ModelKind::Reduced };
            let net = Network::build(&g, kind, k).unwrap();
            prop_assume!(net.dimension() <= 10);
            let x = State::from_index(seed & ((1 << net.dimension()) - 1), net.dimension());
            let kappa = kappa_bruteforce(&net, &x, 20).unwrap();
            prop_assert!(kappa.contains(&x));
            prop_assert!(is_trap_space_bruteforce(&net, &kappa, 20).unwrap());
            for t in trap_spaces_bruteforce(&net, 20).unwrap() {
                if t.contains(&x) {
                    prop_assert!(kappa.is_subset_of(&t));
                }
            }
        }

        #[test]
        fn reduction_preserves_fixed_points(g in connected_graph(1..=6), k in 1usize..=3) {
            let full = Network::build(&g, ModelKind::Full, k).unwrap();
            let reduced = full.reduce_eliminate().unwrap();
            let lifted: Vec<State> = fixed_points_bruteforce(&reduced, 20).unwrap().iter().map(State::lift).collect();
            let mut direct = fixed_points_bruteforce(&full, 20).unwrap();
            let mut lifted_sorted = lifted.clone();
            direct.sort();
            lifted_sorted.sort();
            prop_assert_eq!(direct, lifted_sorted);
        }

        #[test]
        fn reduced_edges_lift_to_full_paths(g in connected_graph(1..=4)) {
            let full = Network::build(&g, ModelKind::Full, 1).unwrap();
            let reduced = full.reduce_eliminate().unwrap();
            let fstg = Stg::build(&full, 20).unwrap();
            let rstg = Stg::build(&reduced, 20).unwrap();
            let l = g.len();
            for n in 0..rstg.state_count() {
                let from = State::from_index(n, l).lift().index();
                let reach = fstg.reachable_from(from);
                for m in rstg.successors(n) {
                    prop_assert!(reach[State::from_index(m, l).lift().index() as usize]);
                }
            }
        }

        #[test]
        fn tarjan_partitions_states(g in connected_graph(1..=4)) {
            let stg = Stg::build(&Network::build(&g, ModelKind::Full, 1).unwrap(), 20).unwrap();
            let mut all: Vec<u64> = stg.sccs().into_iter().flatten().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..stg.state_count()).collect::<Vec<_>>());
        }

        #[test]
        fn shortest_paths_replay(g in connected_graph(1..=4), a in any::<u64>(), b in any::<u64>()) {
            let net = Network::build(&g, ModelKind::Full, 1).unwrap();
            let stg = Stg::build(&net, 20).unwrap();
            let mask = stg.state_count() - 1;
            let (a, b) = (a & mask, b & mask);
            let reach = stg.reachable_from(a);
            match stg.shortest_path(a, b) {
                Some(w) => {
                    prop_assert!(reach[b as usize]);
                    prop_assert_eq!(w.replay(&net).unwrap().index(), b);
                }
                None => prop_assert!(!reach[b as usize]),
            }
        }
    }
}
