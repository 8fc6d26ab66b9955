//! Integration test orders and stub accounting.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::Rational;
use crate::breaking::BreakPlan;
use crate::model::{Cdg, EdgeId, NodeIx};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("graph is cyclic; {remaining} classes could not be ordered")]
    Cyclic { remaining: usize },
}

/// Which end of a surviving edge is integrated first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Direction {
    /// A class is ready once every class it depends on is integrated.
    #[default]
    ServersFirst,
    /// A class is ready once every class depending on it is integrated.
    ClientsFirst,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ServersFirst => "servers-first",
            Direction::ClientsFirst => "clients-first",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "servers-first" => Ok(Direction::ServersFirst),
            "clients-first" => Ok(Direction::ClientsFirst),
            _ => Err(format!("unknown direction `{s}`")),
        }
    }
}

/// A permutation of classes plus, per class, the servers stubbed for it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TestOrder {
    pub sequence: Vec<NodeIx>,
    pub stub_map: BTreeMap<NodeIx, BTreeSet<NodeIx>>,
}

impl TestOrder {
    /// Order for an arbitrary permutation: every edge whose server comes
    /// after its client is stubbed.
    pub fn from_sequence(cdg: &Cdg, sequence: Vec<NodeIx>) -> TestOrder {
        let mut pos = vec![0; cdg.node_count()];
        for (i, &v) in sequence.iter().enumerate() {
            pos[v] = i;
        }
        let mut stub_map: BTreeMap<NodeIx, BTreeSet<NodeIx>> = BTreeMap::new();
        for e in cdg.edges() {
            if pos[e.client] < pos[e.server] {
                stub_map.entry(e.client).or_default().insert(e.server);
            }
        }
        TestOrder { sequence, stub_map }
    }

    pub fn ids<'a>(&self, cdg: &'a Cdg) -> Vec<&'a str> {
        self.sequence.iter().map(|&v| cdg.id(v)).collect()
    }

    /// True when the sequence is a permutation that respects every edge of
    /// `cdg` under `direction`.
    pub fn is_linearization(&self, cdg: &Cdg, direction: Direction) -> bool {
        is_linearization(cdg, &self.sequence, direction)
    }
}

pub fn is_linearization(cdg: &Cdg, sequence: &[NodeIx], direction: Direction) -> bool {
    let n = cdg.node_count();
    if sequence.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in sequence.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    cdg.edges().iter().all(|e| match direction {
        Direction::ServersFirst => pos[e.server] < pos[e.client],
        Direction::ClientsFirst => pos[e.client] < pos[e.server],
    })
}

/// Kahn's algorithm; among ready classes the smallest id goes first.
pub fn topo_order(residual: &Cdg, direction: Direction) -> Result<Vec<NodeIx>, OrderError> {
    let n = residual.node_count();
    // waiting[v]: edges that must be settled before v is ready
    let mut waiting: Vec<usize> = (0..n)
        .map(|v| match direction {
            Direction::ServersFirst => residual.out_edges(v).len(),
            Direction::ClientsFirst => residual.in_edges(v).len(),
        })
        .collect();
    let mut ready: BinaryHeap<Reverse<NodeIx>> = (0..n).filter(|&v| waiting[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        let released: Vec<NodeIx> = match direction {
            Direction::ServersFirst => residual.in_edges(v).iter().map(|&e| residual.edge(e).client).collect(),
            Direction::ClientsFirst => residual.out_edges(v).iter().map(|&e| residual.edge(e).server).collect(),
        };
        for u in released {
            waiting[u] -= 1;
            if waiting[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if order.len() < n {
        return Err(OrderError::Cyclic {
            remaining: n - order.len(),
        });
    }
    Ok(order)
}

/// Topological order of the plan's residual, with the plan's removed edges
/// as the stub map.
pub fn plan_order(plan: &BreakPlan, direction: Direction) -> Result<TestOrder, OrderError> {
    let sequence = topo_order(&plan.residual, direction)?;
    let mut stub_map: BTreeMap<NodeIx, BTreeSet<NodeIx>> = BTreeMap::new();
    for r in &plan.removals {
        stub_map.entry(r.client).or_default().insert(r.server);
    }
    Ok(TestOrder { sequence, stub_map })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StubReport {
    /// One specific stub per removed edge.
    pub specific_stubs: Vec<EdgeId>,
    /// Classes stubbed at least once.
    pub realistic_stubs: BTreeSet<NodeIx>,
    pub integration_steps: usize,
    pub integration_cost: Rational,
}

/// Stub counts depend only on the plan; the order is accepted so callers
/// report both together.
pub fn stub_report(plan: &BreakPlan, _order: &TestOrder) -> StubReport {
    StubReport {
        specific_stubs: plan.removed_edges(),
        realistic_stubs: plan.removals.iter().map(|r| r.server).collect(),
        integration_steps: plan.residual.node_count() + plan.removals.len(),
        integration_cost: plan.total_cost,
    }
}

/// `G<A,J>, O, K<N>` style summary: each class with its stubbed servers.
pub fn bracket_text(cdg: &Cdg, order: &TestOrder) -> String {
    order
        .sequence
        .iter()
        .map(|&v| match order.stub_map.get(&v) {
            Some(stubs) if !stubs.is_empty() => {
                let inner: Vec<&str> = stubs.iter().map(|&s| cdg.id(s)).collect();
                format!("{}<{}>", cdg.id(v), inner.join(","))
            }
            _ => cdg.id(v).to_string(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{all_cycles, tarjan_scc, CouplingVariant, EdgeWeight, DEFAULT_CYCLE_CAP};
    use crate::breaking::{greedy_break, BreakInput};
    use crate::model::{ClassNode, DepKind, EdgeSpec};
    use proptest::prelude::*;

    fn chain() -> Cdg {
        let nodes = ["a", "b", "c"].iter().map(|s| ClassNode::bare(s)).collect();
        let edges = vec![
            EdgeSpec::new("a", "b", DepKind::Association, 1),
            EdgeSpec::new("b", "c", DepKind::Association, 1),
        ];
        Cdg::new(nodes, edges).unwrap()
    }

    #[test]
    fn chain_orders() {
        let cdg = chain();
        assert_eq!(topo_order(&cdg, Direction::ServersFirst).unwrap(), vec![2, 1, 0]);
        assert_eq!(topo_order(&cdg, Direction::ClientsFirst).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn smallest_ready_class_first() {
        let nodes = ["d", "c", "b", "a"].iter().map(|s| ClassNode::bare(s)).collect();
        let cdg = Cdg::new(nodes, vec![EdgeSpec::new("a", "d", DepKind::Association, 1)]).unwrap();
        let ids: Vec<&str> = topo_order(&cdg, Direction::ServersFirst)
            .unwrap()
            .into_iter()
            .map(|v| cdg.id(v))
            .collect();
        assert_eq!(ids, ["b", "c", "d", "a"]);
    }

    #[test]
    fn single_node_and_cyclic_input() {
        let one = Cdg::new(vec![ClassNode::bare("x")], vec![]).unwrap();
        assert_eq!(topo_order(&one, Direction::ServersFirst).unwrap(), vec![0]);
        let nodes = ["a", "b"].iter().map(|s| ClassNode::bare(s)).collect();
        let cyc = Cdg::new(
            nodes,
            vec![
                EdgeSpec::new("a", "b", DepKind::Association, 1),
                EdgeSpec::new("b", "a", DepKind::Association, 1),
            ],
        )
        .unwrap();
        assert_eq!(
            topo_order(&cyc, Direction::ServersFirst),
            Err(OrderError::Cyclic { remaining: 2 })
        );
    }

    #[test]
    fn empty_plan_report() {
        let cdg = chain();
        let scc = tarjan_scc(&cdg);
        let input = BreakInput {
            cdg: &cdg,
            scc: &scc,
            cycles: &[],
            variant: CouplingVariant::CsEq1,
        };
        let plan = greedy_break(&input, &[EdgeWeight::Unbreakable, EdgeWeight::Unbreakable]).unwrap();
        let order = plan_order(&plan, Direction::ServersFirst).unwrap();
        let report = stub_report(&plan, &order);
        assert!(report.specific_stubs.is_empty());
        assert!(report.realistic_stubs.is_empty());
        assert_eq!(report.integration_steps, 3);
        assert_eq!(report.integration_cost, Rational::from_integer(0));
        assert_eq!(bracket_text(&cdg, &order), "c, b, a");
    }

    #[test]
    fn from_sequence_stubs_late_servers() {
        let cdg = chain();
        let order = TestOrder::from_sequence(&cdg, vec![0, 2, 1]);
        assert_eq!(bracket_text(&cdg, &order), "a<b>, c, b");
        assert!(!order.is_linearization(&cdg, Direction::ServersFirst));
        assert!(TestOrder::from_sequence(&cdg, vec![2, 1, 0]).is_linearization(&cdg, Direction::ServersFirst));
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..=6).prop_flat_map(|n| {
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                .collect();
            let len = all.len();
            (Just(n), proptest::sample::subsequence(all, 0..=len))
        })
    }

    proptest! {
        #[test]
        fn plan_orders_are_valid((n, pairs) in arb_graph()) {
            let nodes = (0..n).map(|i| ClassNode::new(&format!("c{i}"), "", 1, 1)).collect();
            let specs = pairs.iter().map(|&(a, b)| EdgeSpec::new(&format!("c{a}"), &format!("c{b}"), DepKind::Association, 1)).collect();
            let cdg = Cdg::new(nodes, specs).unwrap();
            let scc = tarjan_scc(&cdg);
            let cycles = all_cycles(&cdg, &scc, DEFAULT_CYCLE_CAP).unwrap();
            let weights: Vec<EdgeWeight> = (0..cdg.edge_count()).map(|e| EdgeWeight::Finite(Rational::from_integer(e as i128 % 3 + 1))).collect();
            let input = BreakInput { cdg: &cdg, scc: &scc, cycles: &cycles, variant: CouplingVariant::CsEq1 };
            let plan = greedy_break(&input, &weights).unwrap();
            for dir in [Direction::ServersFirst, Direction::ClientsFirst] {
                let order = plan_order(&plan, dir).unwrap();
                prop_assert!(order.is_linearization(&plan.residual, dir));
                prop_assert_eq!(plan_order(&plan, dir).unwrap(), order.clone());
                let report = stub_report(&plan, &order);
                prop_assert_eq!(report.specific_stubs.len(), plan.removals.len());
                prop_assert!(report.realistic_stubs.len() <= report.specific_stubs.len());
                prop_assert!(report.realistic_stubs.iter().all(|&v| v < n));
                prop_assert_eq!(report.integration_steps, n + plan.removals.len());
            }
        }
    }
}
