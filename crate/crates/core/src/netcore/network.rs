use crate::cellgraph::CellGraph;
use crate::error::{Error, Result};

use super::{PathWitness, State, Subspace, Transition};

/// Two-variable (Notch and Delta per cell) or one-variable (Notch only) model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Full,
    Reduced,
}

/// How a cell's Notch responds to its neighbours.
///
/// The inputs of cell `i` are the neighbour Delta levels in the full model
/// and the negated neighbour Notch levels in the reduced model; an input is
/// *active* when it is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotchRule {
    /// Notch is on iff at least `k` inputs are active (`k = 1` is the
    /// disjunction).
    AtLeast(usize),
    /// Notch is on iff every input is active (the conjunctive variant).
    All,
}

impl NotchRule {
    fn fires(self, active: usize, degree: usize) -> bool {
        match self {
            NotchRule::AtLeast(k) => active >= k,
            NotchRule::All => active == degree,
        }
    }
}

/// A Delta-Notch network over a cell graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    graph: CellGraph,
    kind: ModelKind,
    rule: NotchRule,
}

impl Network {
    /// `F^k` (full) or `N^k` (reduced). `k = 1` is the base system.
    pub fn build(graph: &CellGraph, kind: ModelKind, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidThreshold(k));
        }
        Ok(Self { graph: graph.clone(), kind, rule: NotchRule::AtLeast(k) })
    }

    /// The conjunctive full system `F^∧`, conjugate to `F` under negation.
    pub fn conjugate_and(graph: &CellGraph) -> Self {
        Self { graph: graph.clone(), kind: ModelKind::Full, rule: NotchRule::All }
    }

    pub fn graph(&self) -> &CellGraph {
        &self.graph
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn rule(&self) -> NotchRule {
        self.rule
    }

    /// `k` for threshold rules, `None` for the conjunctive variant.
    pub fn threshold(&self) -> Option<usize> {
        match self.rule {
            NotchRule::AtLeast(k) => Some(k),
            NotchRule::All => None,
        }
    }

    pub fn cells(&self) -> usize {
        self.graph.len()
    }

    /// Number of variables: `2L` for the full model, `L` for the reduced one.
    pub fn dimension(&self) -> usize {
        match self.kind {
            ModelKind::Full => 2 * self.cells(),
            ModelKind::Reduced => self.cells(),
        }
    }

    pub fn check_dimension(&self, x: &State) -> Result<()> {
        if x.len() == self.dimension() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dimension(), found: x.len() })
        }
    }

    /// Update function of position `pos`, reading the state through `get`.
    pub fn component_with(&self, pos: usize, get: impl Fn(usize) -> bool) -> bool {
        let l = self.cells();
        match self.kind {
            ModelKind::Full if pos >= l => !get(pos - l),
            ModelKind::Full => {
                let adj = self.graph.adj(pos);
                let active = adj.iter().filter(|&&j| get(j + l)).count();
                self.rule.fires(active, adj.len())
            }
            ModelKind::Reduced => {
                let adj = self.graph.adj(pos);
                let active = adj.iter().filter(|&&j| !get(j)).count();
                self.rule.fires(active, adj.len())
            }
        }
    }

    /// `f_pos(x)`; `x` must have the network's dimension.
    pub fn component(&self, pos: usize, x: &State) -> bool {
        self.component_with(pos, |p| x.get(p))
    }

    /// The synchronous image `f(x)`.
    pub fn evaluate(&self, x: &State) -> Result<State> {
        self.check_dimension(x)?;
        Ok(State::from_bits((0..self.dimension()).map(|p| self.component(p, x)).collect()))
    }

    /// `f` on packed states (see [`State::index`]).
    pub fn eval_index(&self, x: u64) -> u64 {
        (0..self.dimension()).fold(0, |acc, p| acc | (u64::from(self.component_with(p, |q| x >> q & 1 == 1)) << p))
    }

    /// One transition per position where `f(x)` disagrees with `x`.
    pub fn async_successors(&self, x: &State) -> Result<Vec<Transition>> {
        self.check_dimension(x)?;
        Ok((0..self.dimension())
            .filter(|&p| self.component(p, x) != x.get(p))
            .map(|p| Transition { source: x.clone(), flipped: p })
            .collect())
    }

    pub fn is_fixed_point(&self, x: &State) -> Result<bool> {
        self.check_dimension(x)?;
        Ok((0..self.dimension()).all(|p| self.component(p, x) == x.get(p)))
    }

    pub(crate) fn require_fixed_point(&self, x: &State) -> Result<()> {
        if self.is_fixed_point(x)? {
            Ok(())
        } else {
            Err(Error::NotFixedPoint(x.to_string()))
        }
    }

    /// Eliminates every Delta variable by substituting `d = !n` into the Notch
    /// updates, which yields the reduced network over the same graph.
    ///
    /// Delta has no self-regulation in this family, so the elimination is
    /// always admissible.
    pub fn reduce_eliminate(&self) -> Result<Network> {
        match self.kind {
            ModelKind::Full => Ok(Network { kind: ModelKind::Reduced, ..self.clone() }),
            ModelKind::Reduced => Err(Error::Unsupported("a full-model network".into())),
        }
    }

    /// Whether some state of `space` has `f_pos = value`.
    ///
    /// Every update is monotone in its inputs, so it suffices to look at the
    /// completion of the free inputs that is most favourable to `value`.
    pub fn attains(&self, pos: usize, space: &Subspace, value: bool) -> bool {
        let l = self.cells();
        let lit = |p: usize, active_when: bool| -> Option<bool> {
            (!space.is_free(p)).then(|| space.base().get(p) == active_when)
        };
        match self.kind {
            ModelKind::Full if pos >= l => match lit(pos - l, false) {
                None => true,
                Some(active) => active == value,
            },
            _ => {
                let adj = self.graph.adj(pos);
                let (mut active, mut free) = (0, 0);
                for &j in adj {
                    let input = match self.kind {
                        ModelKind::Full => lit(j + l, true),
                        ModelKind::Reduced => lit(j, false),
                    };
                    match input {
                        None => free += 1,
                        Some(true) => active += 1,
                        Some(false) => {}
                    }
                }
                let extreme = if value { active + free } else { active };
                self.rule.fires(extreme, adj.len()) == value
            }
        }
    }

    /// Minimal trap space containing `space`: repeatedly frees every fixed
    /// position that some member state can flip.
    pub fn trap_closure(&self, space: &Subspace) -> Subspace {
        let mut current = space.clone();
        loop {
            let escaping: Vec<usize> = (0..self.dimension())
                .filter(|&p| !current.is_free(p))
                .filter(|&p| self.attains(p, &current, !current.base().get(p)))
                .collect();
            if escaping.is_empty() {
                return current;
            }
            let mut free = current.free_mask().to_vec();
            for p in escaping {
                free[p] = true;
            }
            current = Subspace::new(current.base(), free);
        }
    }

    /// A deterministic asynchronous path from `start` to a fixed point.
    ///
    /// Reduced model: flip the lowest disagreeing position until none is left;
    /// every flip lowers the threshold-network energy, so this terminates.
    /// Full model: first bring every Delta to `!n`, then mirror the reduced
    /// descent, following each Notch flip by the Delta flip of the same cell.
    pub fn descend(&self, start: &State) -> Result<PathWitness> {
        self.check_dimension(start)?;
        let mut witness = PathWitness::empty(start);
        let mut x = start.clone();
        let flip = |x: &mut State, p: usize, w: &mut PathWitness| {
            x.flip(p);
            w.flips.push(p);
        };
        match self.kind {
            ModelKind::Reduced => {
                while let Some(p) = (0..self.cells()).find(|&p| self.component(p, &x) != x.get(p)) {
                    flip(&mut x, p, &mut witness);
                }
            }
            ModelKind::Full => {
                let l = self.cells();
                for i in 0..l {
                    if self.component(i + l, &x) != x.get(i + l) {
                        flip(&mut x, i + l, &mut witness);
                    }
                }
                while let Some(i) = (0..l).find(|&i| self.component(i, &x) != x.get(i)) {
                    flip(&mut x, i, &mut witness);
                    flip(&mut x, i + l, &mut witness);
                }
            }
        }
        Ok(witness)
    }
}
