//! Perturbations of patterns: which patterns the perturbed state can still
//! reach, whether cyclic behaviour becomes reachable, and how far the
//! disturbance can spread.
//!
//! For `k = 1` everything is read off the minimal trap space of the
//! perturbed state, or the closed form `x[H ∪ K ∪ J]` when all perturbed
//! cells are hit on both variables. For `k >= 2` the trap space comes from
//! the closure and reachability from the oracle, and a flip can spread
//! arbitrarily far (see [`ladder_counterexample`]).

use std::fmt;
use std::str::FromStr;

use crate::cellgraph::{CellGraph, CellSet};
use crate::error::{Error, Result};
use crate::netcore::oracle::{self, Stg};
use crate::netcore::{ModelKind, Network, NotchRule, State, Subspace};
use crate::patterns;
use crate::reach;
use crate::trapspaces;

/// Which variables of a cell are flipped. The reduced model only has Notch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vars {
    Notch,
    Delta,
    Both,
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Vars::Notch => "notch",
            Vars::Delta => "delta",
            Vars::Both => "both",
        })
    }
}

impl FromStr for Vars {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "notch" => Ok(Vars::Notch),
            "delta" => Ok(Vars::Delta),
            "both" => Ok(Vars::Both),
            other => Err(Error::InvalidState(format!("unknown variable choice {other:?}"))),
        }
    }
}

/// One perturbed cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perturbation {
    pub cell: usize,
    pub vars: Vars,
}

impl Perturbation {
    pub fn uniform(cells: &CellSet, vars: Vars) -> Vec<Perturbation> {
        cells.iter().map(|cell| Perturbation { cell, vars }).collect()
    }
}

/// Applies `perturbations` to `x`. Cells must be distinct and in range.
pub fn perturb(net: &Network, x: &State, perturbations: &[Perturbation]) -> Result<State> {
    net.check_dimension(x)?;
    let l = net.cells();
    let mut seen = CellSet::new();
    let mut y = x.clone();
    for p in perturbations {
        net.graph().check_cell(p.cell)?;
        if !seen.insert(p.cell) {
            return Err(Error::Precondition(format!("cell {} is perturbed twice", p.cell + 1)));
        }
        match (net.kind(), p.vars) {
            (ModelKind::Reduced, Vars::Delta) => {
                return Err(Error::Precondition("the reduced model has no Delta variables".into()))
            }
            (ModelKind::Reduced, _) | (ModelKind::Full, Vars::Notch) => y.flip(p.cell),
            (ModelKind::Full, Vars::Delta) => y.flip(p.cell + l),
            (ModelKind::Full, Vars::Both) => {
                y.flip(p.cell);
                y.flip(p.cell + l);
            }
        }
    }
    Ok(y)
}

/// How a reported quantity was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivation {
    /// The closed form `x[H ∪ K ∪ J]`.
    ClosedForm,
    /// Characterization of reachability through minimal trap spaces.
    Characterization,
    /// Closure of the perturbed state under the update rules.
    Closure,
    /// Exhaustive search of the transition graph.
    Oracle,
    /// Too large for the oracle and not covered by a characterization.
    Unavailable,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Derivation::ClosedForm => "closed-form",
            Derivation::Characterization => "characterization",
            Derivation::Closure => "closure-derived",
            Derivation::Oracle => "oracle",
            Derivation::Unavailable => "unavailable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationReport {
    pub pattern: State,
    pub perturbed: State,
    pub cells: CellSet,
    /// The closed form when it applies, otherwise `κ(perturbed)`.
    pub trap_space: Subspace,
    pub trap_space_derivation: Derivation,
    /// `κ(perturbed)`.
    pub kappa: Subspace,
    /// Patterns reachable from the perturbed state, sorted.
    pub reachable: Option<Vec<State>>,
    pub reachable_derivation: Derivation,
    /// The only reachable pattern is the original one.
    pub returns_to_original: Option<bool>,
    /// A cycle of the transition graph is reachable from the perturbed state.
    pub cycle_exposed: Option<bool>,
    pub cycle_derivation: Derivation,
    /// Largest graph distance from a perturbed cell to a free cell of
    /// `trap_space`.
    pub radius: usize,
}

fn free_cells(kind: ModelKind, cells: usize, s: &Subspace) -> Vec<bool> {
    (0..cells).map(|i| s.is_free(i) || (kind == ModelKind::Full && s.is_free(i + cells))).collect()
}

/// Maximum distance from `h` to a free cell of `s`; unreachable cells are
/// ignored.
pub fn spread_radius(g: &CellGraph, kind: ModelKind, h: &CellSet, s: &Subspace) -> usize {
    let dist = g.distances_from(h);
    free_cells(kind, g.len(), s)
        .iter()
        .enumerate()
        .filter(|&(_, &free)| free)
        .filter_map(|(i, _)| dist[i])
        .max()
        .unwrap_or(0)
}

/// Analyses the perturbation of the fixed point `x`. The oracle is used for
/// `k >= 2` when the dimension is at most `limit`.
pub fn analyze_perturbation(
    net: &Network,
    x: &State,
    perturbations: &[Perturbation],
    limit: usize,
) -> Result<PerturbationReport> {
    net.require_fixed_point(x)?;
    let y = perturb(net, x, perturbations)?;
    let g = net.graph();
    let kind = net.kind();
    let cells: CellSet = perturbations.iter().map(|p| p.cell).collect();
    let kappa = trapspaces::kappa(net, &y)?;
    let k1 = net.rule() == NotchRule::AtLeast(1);
    let closed = k1 && (kind == ModelKind::Reduced || perturbations.iter().all(|p| p.vars == Vars::Both));
    let (trap_space, trap_space_derivation) = if closed {
        (trapspaces::minimal_trap_space_around(net, x, &cells)?, Derivation::ClosedForm)
    } else {
        (kappa.clone(), Derivation::Closure)
    };
    let radius = spread_radius(g, kind, &cells, &trap_space);

    let fits = net.dimension() <= limit.min(oracle::MAX_LIMIT);
    let (reachable, reachable_derivation, cycle_exposed, cycle_derivation) = if k1 {
        let reachable = reach::reachable_fixed_points(g, kind, &y)?;
        let cycle = match kind {
            ModelKind::Reduced => false,
            ModelKind::Full => {
                let d = kappa.free_delta_cells(g.len());
                g.edges().iter().any(|&(a, b)| d[a] && d[b])
            }
        };
        (Some(reachable), Derivation::Characterization, Some(cycle), Derivation::Characterization)
    } else if fits {
        let stg = Stg::build(net, limit)?;
        let seen = stg.reachable_from(y.index());
        let reachable = stg
            .fixed_points()
            .into_iter()
            .filter(|&f| seen[f as usize])
            .map(|f| State::from_index(f, net.dimension()))
            .collect();
        let cycle = stg.has_cycle_within(|s| seen[s as usize]);
        (Some(reachable), Derivation::Oracle, Some(cycle), Derivation::Oracle)
    } else if kind == ModelKind::Reduced {
        (None, Derivation::Unavailable, Some(false), Derivation::Characterization)
    } else {
        (None, Derivation::Unavailable, None, Derivation::Unavailable)
    };
    let reachable = reachable.map(|mut v: Vec<State>| {
        v.sort();
        v
    });
    let returns_to_original = reachable.as_ref().map(|v| v.len() == 1 && v[0] == *x);
    Ok(PerturbationReport {
        pattern: x.clone(),
        perturbed: y,
        cells,
        trap_space,
        trap_space_derivation,
        kappa,
        reachable,
        reachable_derivation,
        returns_to_original,
        cycle_exposed,
        cycle_derivation,
        radius,
    })
}

/// A single-variable flip whose spread exceeded its bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusCase {
    pub pattern: State,
    pub cell: usize,
    pub vars: Vars,
    pub radius: usize,
    pub bound: usize,
    pub witness: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusBoundReport {
    pub kind: ModelKind,
    pub checked: usize,
    pub max_radius: usize,
    pub violations: Vec<RadiusCase>,
}

impl RadiusBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bound on the spread of a single flip at a cell low (`1`) or high (`2`)
/// in the pattern, `k = 1`.
pub fn single_flip_bound(cell_low: bool) -> usize {
    if cell_low {
        1
    } else {
        2
    }
}

/// Flips each variable of each cell of each pattern and checks the spread
/// of `κ(perturbed)` against [`single_flip_bound`] (`k = 1`).
pub fn propagation_radius_bound_check(net: &Network) -> Result<RadiusBoundReport> {
    if net.rule() != NotchRule::AtLeast(1) {
        return Err(Error::Unsupported("k = 1; the spread is unbounded otherwise".into()));
    }
    let g = net.graph();
    let kind = net.kind();
    let vars: &[Vars] = match kind {
        ModelKind::Reduced => &[Vars::Notch],
        ModelKind::Full => &[Vars::Notch, Vars::Delta],
    };
    let mut report = RadiusBoundReport { kind, checked: 0, max_radius: 0, violations: Vec::new() };
    for x in patterns::fixed_points(g, kind, 1)?.states() {
        for cell in 0..g.len() {
            for &v in vars {
                let y = perturb(net, &x, &[Perturbation { cell, vars: v }])?;
                let witness = trapspaces::kappa(net, &y)?;
                let radius = spread_radius(g, kind, &CellSet::from_iter([cell]), &witness);
                let bound = single_flip_bound(!x.get(cell));
                report.checked += 1;
                report.max_radius = report.max_radius.max(radius);
                if radius > bound {
                    report.violations.push(RadiusCase { pattern: x.clone(), cell, vars: v, radius, bound, witness });
                }
            }
        }
    }
    Ok(report)
}

/// A graph on which one Notch flip of a pattern of `N^2` travels distance
/// `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub m: usize,
    pub graph: CellGraph,
    pub pattern: State,
    pub perturbed_cell: usize,
    /// The pattern the cascade settles in.
    pub shifted: State,
}

/// Builds the ladder for `m >= 1`: a chain `c1 .. c(2m+1)` with one pendant
/// on every odd chain cell, `3m + 2` cells in all. For `m = 2`:
///
/// ```text
/// p1      p2      p3
/// |       |       |
/// c1--c2--c3--c4--c5
/// ```
///
/// Chain cells come first, then pendants. The pattern is low on odd chain
/// cells and pendants and high on even chain cells. Raising `c1` lets every
/// chain cell flip in turn, ending in the pattern that is high on odd chain
/// cells, at distance `2m` from `c1`.
pub fn ladder_counterexample(m: usize) -> Result<Ladder> {
    if m == 0 {
        return Err(Error::InvalidGenerator("the ladder needs m >= 1".into()));
    }
    let chain = 2 * m + 1;
    let edges = (0..chain - 1).map(|i| (i, i + 1)).chain((0..=m).map(|t| (2 * t, chain + t)));
    let graph = CellGraph::new(chain + m + 1, edges)?;
    let bits = |even_high: bool| -> State {
        State::from_bits((0..graph.len()).map(|i| i < chain && (i % 2 == 0) == even_high).collect())
    };
    Ok(Ladder { m, pattern: bits(false), shifted: bits(true), perturbed_cell: 0, graph })
}
