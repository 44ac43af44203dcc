use std::collections::BTreeSet;

use clap::{ArgGroup, Args};
use lateral::netcore::oracle::{self, Stg};
use lateral::reach::{self, BasinMode, Homogeneous};
use lateral::robustness::{self, Perturbation, Vars};
use lateral::{patterns, threshold, trapspaces};
use lateral::{CellGraph, CellSet, GraphKind, ModelKind, Network, PathWitness, State, Subspace};
use serde_json::{json, Value};

use crate::{BasinModeArg, CliError, CliResult, Common, Model, Out, Output, Shape, VarsArg};

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("action").required(true).args(["check", "enumerate", "maximal", "minimal_containing"])))]
pub struct TrapSpacesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Check one subspace string, e.g. `*10*01`.
    #[arg(long)]
    pub check: Option<String>,
    /// List every trap space.
    #[arg(long)]
    pub enumerate: bool,
    /// List the maximal proper trap spaces (k = 1).
    #[arg(long)]
    pub maximal: bool,
    /// Minimal trap space around this pattern perturbed on `--cells`.
    #[arg(long, requires = "cells")]
    pub minimal_containing: Option<String>,
    /// 1-based cells, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cells: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Out::Json)]
    pub out: Out,
}

#[derive(Args, Debug)]
pub struct ReachArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub from: String,
    /// Target state; without it, list the reachable patterns.
    #[arg(long)]
    pub to: Option<String>,
    /// Attach replayable flip sequences.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Args, Debug)]
pub struct BasinsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub fixed_point: String,
    #[arg(long, value_enum)]
    pub mode: BasinModeArg,
    /// List the member states.
    #[arg(long)]
    pub enumerate: bool,
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub pattern: String,
    /// 1-based cells, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cells: Vec<usize>,
    #[arg(long, value_enum, default_value_t = VarsArg::Both)]
    pub vars: VarsArg,
    #[arg(long, value_enum, default_value_t = Out::Json)]
    pub out: Out,
}

struct Context {
    graph: CellGraph,
    net: Network,
    limit: usize,
}

impl Context {
    fn load(common: &Common) -> CliResult<Self> {
        let text = std::fs::read_to_string(&common.graph)
            .map_err(|source| CliError::Io { path: common.graph.clone(), source })?;
        let graph = CellGraph::from_json_with(&text, common.allow_disconnected)?;
        let kind = match common.model {
            Model::Full => ModelKind::Full,
            Model::Reduced => ModelKind::Reduced,
        };
        let net = Network::build(&graph, kind, common.k)?;
        Ok(Self { graph, net, limit: common.limit.unwrap_or(oracle::DEFAULT_LIMIT) })
    }

    fn kind(&self) -> ModelKind {
        self.net.kind()
    }

    fn k1(&self) -> bool {
        self.net.threshold() == Some(1)
    }

    fn state(&self, text: &str) -> CliResult<State> {
        let s = State::parse(text)?;
        self.net.check_dimension(&s)?;
        Ok(s)
    }

    fn cells(&self, one_based: &[usize]) -> CliResult<CellSet> {
        Ok(CellSet::from_one_based(one_based, self.graph.len())?)
    }

    fn variable(&self, pos: usize) -> String {
        let l = self.graph.len();
        if pos < l {
            format!("N{}", pos + 1)
        } else {
            format!("D{}", pos - l + 1)
        }
    }

    /// Replays `w` and renders it; fails rather than emit a broken witness.
    fn witness(&self, w: &PathWitness, kind: &str) -> CliResult<Value> {
        let end = w.replay(&self.net)?;
        let states = w.states();
        let steps: Vec<Value> = w
            .flips
            .iter()
            .enumerate()
            .map(|(i, &p)| json!({ "step": i + 1, "variable": self.variable(p), "state": states[i + 1].to_string() }))
            .collect();
        Ok(json!({
            "construction": kind,
            "start": w.start.to_string(),
            "end": end.to_string(),
            "length": w.len(),
            "flips": w.flips.iter().map(|p| p + 1).collect::<Vec<_>>(),
            "steps": steps,
        }))
    }
}

fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Full => "full",
        ModelKind::Reduced => "reduced",
    }
}

fn names<'a>(states: impl IntoIterator<Item = &'a State>) -> Vec<String> {
    states.into_iter().map(|s| s.to_string()).collect()
}

pub fn generate(shape: Shape) -> CliResult<Output> {
    let kind = match shape {
        Shape::Path { cells } => GraphKind::Path { cells },
        Shape::Cycle { cells } => GraphKind::Cycle { cells },
        Shape::Grid { rows, cols } => GraphKind::Grid { rows, cols },
        Shape::Hexgrid { rows, cols } => GraphKind::HexGrid { rows, cols },
    };
    Ok(Output::Text(CellGraph::generate(kind)?.to_json()))
}

pub fn fixed_points(common: &Common) -> CliResult<Output> {
    let ctx = Context::load(common)?;
    let set = patterns::fixed_points(&ctx.graph, ctx.kind(), common.k)?;
    let rows: Vec<Value> = set
        .patterns
        .iter()
        .map(|p| json!({ "cover": p.cover.one_based(), "reduced": p.reduced.to_string(), "full": p.full.to_string() }))
        .collect();
    Ok(Output::Json(Value::Array(rows)))
}

fn spaces_output(spaces: &[Subspace], out: Out, key: &str) -> Output {
    match out {
        Out::Dot => Output::Text(trapspaces::hasse_dot(spaces)),
        Out::Json => {
            let edges: Vec<Value> = trapspaces::hasse_edges(spaces)
                .into_iter()
                .map(|(a, b)| json!([spaces[a].to_string(), spaces[b].to_string()]))
                .collect();
            Output::Json(json!({
                "count": spaces.len(),
                key: spaces.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "hasse_edges": edges,
            }))
        }
    }
}

pub fn trap_spaces(args: &TrapSpacesArgs) -> CliResult<Output> {
    let ctx = Context::load(&args.common)?;
    let per_cell = match ctx.kind() {
        ModelKind::Full => 2,
        ModelKind::Reduced => 1,
    };
    if let Some(text) = &args.check {
        let s = Subspace::parse(text)?;
        let cert = trapspaces::certify(&ctx.net, &s)?;
        let violation = cert.violation.map(|v| json!({ "clause": v.clause.as_str(), "cell": v.cell.map(|c| c + 1) }));
        let doc = json!({
            "subspace": cert.subspace.to_string(),
            "trap_space": cert.holds(),
            "representative": cert.representative.map(|r| r.to_string()),
            "checked": cert.checked.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
            "violation": violation,
        });
        return Ok(match args.out {
            Out::Json => Output::Json(doc),
            Out::Dot => Output::Text(trapspaces::hasse_dot(std::slice::from_ref(&cert.subspace))),
        });
    }
    if args.enumerate {
        let cell_limit = args.common.limit.map_or(trapspaces::DEFAULT_ENUMERATION_LIMIT, |d| d / per_cell);
        let spaces = trapspaces::enumerate_trap_spaces(&ctx.net, cell_limit)?;
        return Ok(spaces_output(&spaces, args.out, "trap_spaces"));
    }
    if args.maximal {
        if !ctx.k1() {
            return Err(lateral::Error::Unsupported("k = 1 for the maximal trap spaces".into()).into());
        }
        let spaces = trapspaces::maximal_trap_spaces(&ctx.graph, ctx.kind())?;
        return Ok(spaces_output(&spaces, args.out, "maximal"));
    }
    let fp = ctx.state(args.minimal_containing.as_deref().expect("clap enforces one action"))?;
    let h = ctx.cells(&args.cells)?;
    let (space, derivation) = if ctx.k1() {
        (trapspaces::minimal_trap_space_around(&ctx.net, &fp, &h)?, "closed-form")
    } else {
        if !ctx.net.is_fixed_point(&fp)? {
            return Err(lateral::Error::NotFixedPoint(fp.to_string()).into());
        }
        let l = ctx.graph.len();
        let free: Vec<usize> = match ctx.kind() {
            ModelKind::Reduced => h.iter().collect(),
            ModelKind::Full => h.iter().chain(h.iter().map(|c| c + l)).collect(),
        };
        let seed = Subspace::with_free_positions(&fp, free);
        (trapspaces::minimal_trap_space_containing(&ctx.net, &seed)?, "closure-derived")
    };
    Ok(match args.out {
        Out::Dot => Output::Text(trapspaces::hasse_dot(std::slice::from_ref(&space))),
        Out::Json => Output::Json(json!({
            "fixed_point": fp.to_string(),
            "cells": h.one_based(),
            "trap_space": space.to_string(),
            "derivation": derivation,
        })),
    })
}

fn is_corner(ctx: &Context, x: &State) -> Option<Homogeneous> {
    let l = ctx.graph.len();
    let n = x.get(0);
    match ctx.kind() {
        ModelKind::Reduced => (0..l).all(|i| x.get(i) == n).then_some(Homogeneous { notch: n, delta: !n }),
        ModelKind::Full => {
            let d = x.get(l);
            (0..l).all(|i| x.get(i) == n && x.get(i + l) == d).then_some(Homogeneous { notch: n, delta: d })
        }
    }
}

/// A path from `from` to `to`: constructive when a construction applies,
/// otherwise the oracle's shortest path.
fn find_witness(ctx: &Context, from: &State, to: &State) -> CliResult<(PathWitness, &'static str)> {
    if from == to {
        return Ok((PathWitness::empty(from), "empty"));
    }
    if ctx.k1() && ctx.net.is_fixed_point(to)? {
        if let Some(origin) = is_corner(ctx, from) {
            let w = reach::witness_homogeneous_to_pattern(&ctx.graph, ctx.kind(), to, origin)?;
            return Ok((w, "homogeneous-to-pattern"));
        }
        if ctx.kind() == ModelKind::Full && ctx.graph.len() >= 2 && trapspaces::kappa(&ctx.net, from)?.is_full() {
            let mut w = reach::witness_to_homogeneous_full(&ctx.graph, from)?;
            let tail = reach::witness_homogeneous_to_pattern(&ctx.graph, ModelKind::Full, to, Homogeneous::ONES)?;
            w.extend(tail.flips);
            return Ok((w, "via-homogeneous"));
        }
    }
    let path = reach::path_exists_oracle(&ctx.net, from, to, ctx.limit)?;
    match path.witness {
        Some(w) => Ok((w, "oracle-shortest-path")),
        None => Err(lateral::Error::Precondition(format!("{to} is not reachable from {from}")).into()),
    }
}

pub fn reach(args: &ReachArgs) -> CliResult<Output> {
    let ctx = Context::load(&args.common)?;
    let from = ctx.state(&args.from)?;
    if let Some(text) = &args.to {
        let to = ctx.state(text)?;
        let (reachable, derivation) = if ctx.k1() && ctx.net.is_fixed_point(&to)? {
            let r = match ctx.kind() {
                ModelKind::Reduced => reach::reaches_reduced(&ctx.graph, &from, &to),
                ModelKind::Full => trapspaces::kappa(&ctx.net, &from)?.contains(&to),
            };
            (r, "characterization")
        } else {
            (reach::path_exists_oracle(&ctx.net, &from, &to, ctx.limit)?.reachable, "oracle")
        };
        let mut doc =
            json!({ "from": from.to_string(), "to": to.to_string(), "reachable": reachable, "derivation": derivation });
        if args.witness && reachable {
            let (w, kind) = find_witness(&ctx, &from, &to)?;
            doc["witness"] = ctx.witness(&w, kind)?;
        }
        return Ok(Output::Json(doc));
    }
    let (found, derivation) = if ctx.k1() {
        (reach::reachable_fixed_points(&ctx.graph, ctx.kind(), &from)?, "characterization")
    } else {
        (reach::reachable_fixed_points_oracle(&ctx.net, &from, ctx.limit)?, "oracle")
    };
    let mut doc = json!({
        "from": from.to_string(),
        "model": model_name(ctx.kind()),
        "reachable_fixed_points": names(&found),
        "derivation": derivation,
    });
    if args.witness {
        let mut witnesses = serde_json::Map::new();
        for fp in &found {
            let (w, kind) = find_witness(&ctx, &from, fp)?;
            witnesses.insert(fp.to_string(), ctx.witness(&w, kind)?);
        }
        doc["witnesses"] = Value::Object(witnesses);
    }
    Ok(Output::Json(doc))
}

pub fn basins(args: &BasinsArgs) -> CliResult<Output> {
    let ctx = Context::load(&args.common)?;
    let fp = ctx.state(&args.fixed_point)?;
    let mode = match args.mode {
        BasinModeArg::Weak => BasinMode::Weak,
        BasinModeArg::Strong => BasinMode::Strong,
    };
    let (predicate, derivation, states): (Option<String>, &str, Option<Vec<State>>) = if ctx.k1() {
        let r = reach::basin(&ctx.graph, ctx.kind(), &fp, mode, args.enumerate, ctx.limit)?;
        (Some(r.predicate), "characterization", r.states)
    } else {
        if !ctx.net.is_fixed_point(&fp)? {
            return Err(lateral::Error::NotFixedPoint(fp.to_string()).into());
        }
        let stg = Stg::build(&ctx.net, ctx.limit)?;
        let mask = match mode {
            BasinMode::Weak => stg.backward_reachable(fp.index()),
            BasinMode::Strong => stg.strong_basin(fp.index()),
        };
        let n = ctx.net.dimension();
        let members = (0..stg.state_count()).filter(|&i| mask[i as usize]).map(|i| State::from_index(i, n)).collect();
        (None, "oracle", Some(members))
    };
    let mut doc = json!({
        "fixed_point": fp.to_string(),
        "mode": mode.to_string(),
        "model": model_name(ctx.kind()),
        "k": args.common.k,
        "predicate": predicate,
        "derivation": derivation,
    });
    if let Some(states) = &states {
        doc["count"] = json!(states.len());
        if args.enumerate {
            doc["states"] = json!(names(states));
        }
    }
    Ok(Output::Json(doc))
}

pub fn perturb(args: &PerturbArgs) -> CliResult<Output> {
    let ctx = Context::load(&args.common)?;
    let x = ctx.state(&args.pattern)?;
    let cells = ctx.cells(&args.cells)?;
    let vars = match args.vars {
        VarsArg::Notch => Vars::Notch,
        VarsArg::Delta => Vars::Delta,
        VarsArg::Both => Vars::Both,
    };
    let r = robustness::analyze_perturbation(&ctx.net, &x, &Perturbation::uniform(&cells, vars), ctx.limit)?;
    if args.out == Out::Dot {
        let mut nodes: BTreeSet<Subspace> = [r.trap_space.clone(), r.kappa.clone()].into_iter().collect();
        nodes.extend(r.reachable.iter().flatten().map(Subspace::point));
        return Ok(Output::Text(trapspaces::hasse_dot(&nodes.into_iter().collect::<Vec<_>>())));
    }
    Ok(Output::Json(json!({
        "pattern": r.pattern.to_string(),
        "perturbed": r.perturbed.to_string(),
        "cells": r.cells.one_based(),
        "vars": vars.to_string(),
        "trap_space": r.trap_space.to_string(),
        "trap_space_derivation": r.trap_space_derivation.to_string(),
        "kappa": r.kappa.to_string(),
        "reachable_fixed_points": r.reachable.as_ref().map(names),
        "reachable_derivation": r.reachable_derivation.to_string(),
        "returns_to_original": r.returns_to_original,
        "cycle_exposed": r.cycle_exposed,
        "cycle_derivation": r.cycle_derivation.to_string(),
        "radius": r.radius,
    })))
}

pub fn stg(common: &Common, out: Out) -> CliResult<Output> {
    let ctx = Context::load(common)?;
    let stg = Stg::build(&ctx.net, ctx.limit)?;
    Ok(match out {
        Out::Dot => Output::Text(stg.to_dot()),
        Out::Json => Output::Json(stg.to_json()),
    })
}

pub fn energy_check(common: &Common) -> CliResult<Output> {
    let ctx = Context::load(common)?;
    let r = threshold::verify_energy_decrease(&ctx.graph, common.k, ctx.limit)?;
    Ok(Output::Json(json!({
        "model": "reduced",
        "cells": r.cells,
        "k": r.k,
        "states": r.states,
        "transitions": r.transitions,
        "violations": r.violations,
        "rule_mismatches": r.rule_mismatches,
        "min_gap": r.min_gap.map(|g| g.to_string()),
        "has_cycle": r.has_cycle,
    })))
}
