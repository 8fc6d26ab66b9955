//! Cycle breaking: a fixed descending-weight greedy pass, and a
//! cycle-weight-ratio strategy that recomputes after every removal.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::analysis::cycles::cycles_by_edge;
use crate::analysis::metrics::{cycle_weight_ratio, round_decimals};
use crate::analysis::{tarjan_scc, CouplingVariant, Cycle, EdgeMetrics, EdgeWeight, Rational, SccInfo};
use crate::model::{Cdg, DepKind, EdgeId, NodeIx};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BreakError {
    #[error("cycle {index} ({cycle}) has no removable edge")]
    InfeasibleCycle { index: usize, cycle: String },
    #[error("residual graph still has a cycle through {classes}")]
    ResidualCyclic { classes: String },
    #[error("{what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Greedy,
    Cwr,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::Cwr => "cwr",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Strategy::Greedy),
            "cwr" => Ok(Strategy::Cwr),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

/// One removed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub edge: EdgeId,
    pub client: NodeIx,
    pub server: NodeIx,
    pub kind: DepKind,
    /// Stub cost charged for the removal.
    pub weight: Rational,
    /// Selection key at removal time: the weight for greedy, the CWR otherwise.
    pub score: Rational,
    /// 0-based indices of the cycles this removal broke first.
    pub cycles_broken: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BreakPlan {
    pub removals: Vec<Removal>,
    /// Edges passed over because all their cycles were already broken.
    pub skipped: Vec<EdgeId>,
    pub residual: Cdg,
    pub total_cost: Rational,
    pub strategy: Strategy,
    pub variant: CouplingVariant,
}

impl BreakPlan {
    pub fn removed_edges(&self) -> Vec<EdgeId> {
        self.removals.iter().map(|r| r.edge).collect()
    }

    /// True when every cycle contains a removed edge.
    pub fn covers(&self, cycles: &[Cycle]) -> bool {
        let removed = self.removed_edges();
        cycles.iter().all(|c| c.edges.iter().any(|e| removed.contains(e)))
    }
}

/// Shared inputs of both strategies.
#[derive(Clone, Copy, Debug)]
pub struct BreakInput<'a> {
    pub cdg: &'a Cdg,
    pub scc: &'a SccInfo,
    pub cycles: &'a [Cycle],
    pub variant: CouplingVariant,
}

impl BreakInput<'_> {
    fn check_len(&self, what: &'static str, got: usize) -> Result<(), BreakError> {
        let expected = self.cdg.edge_count();
        if got != expected {
            return Err(BreakError::LengthMismatch { what, got, expected });
        }
        Ok(())
    }

    fn check_feasible(&self, removable: &[bool]) -> Result<(), BreakError> {
        for (index, c) in self.cycles.iter().enumerate() {
            if !c.edges.iter().any(|&e| removable[e]) {
                return Err(BreakError::InfeasibleCycle {
                    index: index + 1,
                    cycle: c.label(self.cdg),
                });
            }
        }
        Ok(())
    }

    fn finish(&self, removals: Vec<Removal>, skipped: Vec<EdgeId>, strategy: Strategy) -> Result<BreakPlan, BreakError> {
        let mut gone = vec![false; self.cdg.edge_count()];
        for r in &removals {
            gone[r.edge] = true;
        }
        let residual = self.cdg.retain_edges(|e| !gone[e]);
        if let Some(comp) = tarjan_scc(&residual).nontrivial().next() {
            let classes: Vec<&str> = comp.iter().map(|&v| residual.id(v)).collect();
            return Err(BreakError::ResidualCyclic {
                classes: classes.join(","),
            });
        }
        let total_cost = removals.iter().map(|r| r.weight).sum();
        Ok(BreakPlan {
            removals,
            skipped,
            residual,
            total_cost,
            strategy,
            variant: self.variant,
        })
    }
}

/// Use and optional dependencies win weight ties over associations.
fn kind_rank(kind: DepKind) -> u8 {
    match kind {
        DepKind::UseDependency | DepKind::OptionalDependency => 0,
        _ => 1,
    }
}

/// Visits the edges of each SCC once, by decreasing weight, and removes an
/// edge whenever it still lies on an unbroken cycle.
///
/// Ties: use/optional dependency before association, then smaller DFS rank.
/// Inheritance, composition and unbreakable edges are never removed.
pub fn greedy_break(input: &BreakInput, weights: &[EdgeWeight]) -> Result<BreakPlan, BreakError> {
    let cdg = input.cdg;
    input.check_len("weights", weights.len())?;
    let removable: Vec<bool> = (0..cdg.edge_count())
        .map(|e| !cdg.edge(e).kind.is_strong() && weights[e].finite().is_some())
        .collect();
    input.check_feasible(&removable)?;

    let by_edge = cycles_by_edge(input.cycles, cdg.edge_count());
    let rank = &input.scc.dfs_edge_rank;
    let mut alive = vec![true; input.cycles.len()];
    let mut removals = Vec::new();
    let mut skipped = Vec::new();

    for comp in 0..input.scc.components.len() {
        let mut candidates: Vec<(Rational, EdgeId)> = (0..cdg.edge_count())
            .filter(|&e| removable[e] && !by_edge[e].is_empty())
            .filter(|&e| input.scc.component_of[cdg.edge(e).client] == comp)
            .filter_map(|e| weights[e].finite().map(|w| (w, e)))
            .collect();
        candidates.sort_by_key(|&(w, e)| (Reverse(w), kind_rank(cdg.edge(e).kind), rank[e]));

        let mut open: usize = candidates
            .iter()
            .flat_map(|&(_, e)| by_edge[e].iter().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter(|&c| alive[c])
            .count();
        for (w, e) in candidates {
            if open == 0 {
                break;
            }
            let broken: Vec<usize> = by_edge[e].iter().copied().filter(|&c| alive[c]).collect();
            if broken.is_empty() {
                skipped.push(e);
                continue;
            }
            for &c in &broken {
                alive[c] = false;
            }
            open -= broken.len();
            let edge = cdg.edge(e);
            removals.push(Removal {
                edge: e,
                client: edge.client,
                server: edge.server,
                kind: edge.kind,
                weight: w,
                score: w,
                cycles_broken: broken,
            });
        }
    }
    input.finish(removals, skipped, Strategy::Greedy)
}

/// Repeatedly removes the edge with the highest ratio of unbroken cycles
/// through it to its coupling weight. Ties go to the smaller DFS rank.
///
/// `coupling[e]` is `None` for edges that cannot be broken. `cost[e]` is the
/// stub cost charged when `e` is removed.
pub fn cwr_break(
    input: &BreakInput,
    coupling: &[Option<Rational>],
    cost: &[EdgeWeight],
) -> Result<BreakPlan, BreakError> {
    let cdg = input.cdg;
    input.check_len("coupling weights", coupling.len())?;
    input.check_len("costs", cost.len())?;
    let removable: Vec<bool> = (0..cdg.edge_count())
        .map(|e| {
            !cdg.edge(e).kind.is_strong()
                && coupling[e].is_some_and(|c| c > Rational::zero())
                && cost[e].finite().is_some()
        })
        .collect();
    input.check_feasible(&removable)?;

    let by_edge = cycles_by_edge(input.cycles, cdg.edge_count());
    let rank = &input.scc.dfs_edge_rank;
    let mut alive = vec![true; input.cycles.len()];
    let mut open = input.cycles.len();
    let mut taken = vec![false; cdg.edge_count()];
    let mut removals = Vec::new();

    while open > 0 {
        let mut best: Option<(Rational, EdgeId, Vec<usize>)> = None;
        for e in (0..cdg.edge_count()).filter(|&e| removable[e] && !taken[e]) {
            let through: Vec<usize> = by_edge[e].iter().copied().filter(|&c| alive[c]).collect();
            if through.is_empty() {
                continue;
            }
            let ratio = cycle_weight_ratio(through.len(), coupling[e].expect("removable edge"));
            let better = match &best {
                None => true,
                Some((r, b, _)) => ratio > *r || (ratio == *r && rank[e] < rank[*b]),
            };
            if better {
                best = Some((ratio, e, through));
            }
        }
        let (ratio, e, broken) = best.expect("feasibility checked");
        for &c in &broken {
            alive[c] = false;
        }
        open -= broken.len();
        taken[e] = true;
        let edge = cdg.edge(e);
        removals.push(Removal {
            edge: e,
            client: edge.client,
            server: edge.server,
            kind: edge.kind,
            weight: cost[e].finite().expect("removable edge"),
            score: ratio,
            cycles_broken: broken,
        });
    }
    input.finish(removals, Vec::new(), Strategy::Cwr)
}

/// Coupling weights for [`cwr_break`], optionally rounded to `places` decimals.
pub fn cwr_coupling(metrics: &[EdgeMetrics], places: Option<u32>) -> Vec<Option<Rational>> {
    metrics
        .iter()
        .map(|m| {
            let c = m.cs.value()?;
            let c = places.map_or(c, |p| round_decimals(c, p));
            (c > Rational::zero()).then_some(c)
        })
        .collect()
}

pub fn verify_acyclic(cdg: &Cdg) -> bool {
    tarjan_scc(cdg).nontrivial_count() == 0
}
