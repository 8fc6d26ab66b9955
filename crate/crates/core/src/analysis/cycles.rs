//! Elementary cycle enumeration (Johnson's blocking search).

use thiserror::Error;

use crate::model::{Cdg, EdgeId, NodeIx};

use super::scc::SccInfo;

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("more than {cap} elementary cycles; raise --max-cycles to continue")]
    LimitExceeded { cap: usize },
    #[error("cycle {cycle} repeats class `{class}`")]
    RepeatedNode { cycle: String, class: String },
    #[error("cycle {cycle} has fewer than two classes")]
    TooShort { cycle: String },
    #[error("hop {client}->{server} matches several parallel edges")]
    AmbiguousHop { client: String, server: String },
}

/// An elementary cycle. `nodes[i] -> nodes[i + 1]` (wrapping) are its hops.
///
/// Enumerated cycles start at their smallest node and every hop has an
/// edge. Cycles taken from a catalogue may name hops with no edge in the
/// graph; those are kept in `phantom_hops` and carry no edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<NodeIx>,
    pub edges: Vec<EdgeId>,
    pub phantom_hops: Vec<(NodeIx, NodeIx)>,
}

impl Cycle {
    /// Builds a cycle from a node walk (closing hop implied), resolving
    /// each hop to its unique edge.
    pub fn from_walk(cdg: &Cdg, nodes: Vec<NodeIx>) -> Result<Cycle, CycleError> {
        let label = || walk_label(cdg, &nodes);
        if nodes.len() < 2 {
            return Err(CycleError::TooShort { cycle: label() });
        }
        let mut seen = vec![false; cdg.node_count()];
        for &v in &nodes {
            if std::mem::replace(&mut seen[v], true) {
                return Err(CycleError::RepeatedNode {
                    cycle: label(),
                    class: cdg.id(v).to_string(),
                });
            }
        }
        let mut edges = Vec::new();
        let mut phantom_hops = Vec::new();
        for i in 0..nodes.len() {
            let (a, b) = (nodes[i], nodes[(i + 1) % nodes.len()]);
            let mut found = cdg.edges_between(a, b);
            match (found.next(), found.next()) {
                (Some(e), None) => edges.push(e),
                (None, _) => phantom_hops.push((a, b)),
                (Some(_), Some(_)) => {
                    return Err(CycleError::AmbiguousHop {
                        client: cdg.id(a).to_string(),
                        server: cdg.id(b).to_string(),
                    })
                }
            }
        }
        Ok(Cycle {
            nodes,
            edges,
            phantom_hops,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_edge(&self, edge: EdgeId) -> bool {
        self.edges.contains(&edge)
    }

    /// `"A->G->A"`.
    pub fn label(&self, cdg: &Cdg) -> String {
        walk_label(cdg, &self.nodes)
    }
}

fn walk_label(cdg: &Cdg, nodes: &[NodeIx]) -> String {
    let mut parts: Vec<&str> = nodes.iter().map(|&v| cdg.id(v)).collect();
    if let Some(&first) = nodes.first() {
        parts.push(cdg.id(first));
    }
    parts.join("->")
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    path: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut closed = false;
        self.path.push(v);
        self.blocked[v] = true;
        for &w in &self.adj[v] {
            if w < self.start {
                continue;
            }
            if w == self.start {
                self.found.push(self.path.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if w >= self.start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.path.pop();
        closed
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        while let Some(w) = self.blocked_by[u].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// All elementary cycles of the subgraph induced by `scc`.
///
/// Parallel edges between the same pair of classes give distinct cycles.
/// Output is sorted by length, then node sequence, then edge sequence.
pub fn enumerate_cycles(cdg: &Cdg, scc: &[NodeIx], cap: usize) -> Result<Vec<Cycle>, CycleError> {
    let mut members: Vec<NodeIx> = scc.to_vec();
    members.sort_unstable();
    members.dedup();
    let local = |v: NodeIx| members.binary_search(&v).ok();

    let adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| {
            let mut next: Vec<usize> = cdg
                .out_edges(v)
                .iter()
                .filter_map(|&e| local(cdg.edge(e).server))
                .collect();
            next.sort_unstable();
            next.dedup();
            next
        })
        .collect();

    let m = members.len();
    let mut cycles = Vec::new();
    for start in 0..m {
        let mut search = Search {
            adj: &adj,
            start,
            blocked: vec![false; m],
            blocked_by: vec![Vec::new(); m],
            path: Vec::new(),
            found: Vec::new(),
        };
        search.circuit(start);
        for walk in search.found {
            let nodes: Vec<NodeIx> = walk.iter().map(|&i| members[i]).collect();
            expand_parallel(cdg, nodes, &mut cycles);
            if cycles.len() > cap {
                return Err(CycleError::LimitExceeded { cap });
            }
        }
    }
    sort_cycles(&mut cycles);
    Ok(cycles)
}

fn expand_parallel(cdg: &Cdg, nodes: Vec<NodeIx>, out: &mut Vec<Cycle>) {
    let hops: Vec<Vec<EdgeId>> = (0..nodes.len())
        .map(|i| {
            let mut es: Vec<EdgeId> = cdg
                .edges_between(nodes[i], nodes[(i + 1) % nodes.len()])
                .collect();
            es.sort_unstable();
            es
        })
        .collect();
    let mut choice = vec![0usize; hops.len()];
    loop {
        out.push(Cycle {
            nodes: nodes.clone(),
            edges: choice.iter().zip(&hops).map(|(&c, h)| h[c]).collect(),
            phantom_hops: Vec::new(),
        });
        // odometer over the parallel-edge choices
        let mut i = hops.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < hops[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub fn sort_cycles(cycles: &mut [Cycle]) {
    cycles.sort_by(|a, b| {
        (a.len(), &a.nodes, &a.edges).cmp(&(b.len(), &b.nodes, &b.edges))
    });
}

/// Cycles of every nontrivial component, sorted as one list. The cap
/// bounds the total.
pub fn all_cycles(cdg: &Cdg, info: &SccInfo, cap: usize) -> Result<Vec<Cycle>, CycleError> {
    let mut all = Vec::new();
    for comp in info.nontrivial() {
        let left = cap - all.len();
        all.extend(enumerate_cycles(cdg, comp, left)?);
    }
    sort_cycles(&mut all);
    Ok(all)
}

/// For each edge, the indices of the cycles that contain it.
pub fn cycles_by_edge(cycles: &[Cycle], edge_count: usize) -> Vec<Vec<usize>> {
    let mut by_edge = vec![Vec::new(); edge_count];
    for (ci, c) in cycles.iter().enumerate() {
        for &e in &c.edges {
            by_edge[e].push(ci);
        }
    }
    by_edge
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::scc::tarjan_scc;
    use crate::model::{ClassNode, DepKind, EdgeSpec};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn graph(n: usize, pairs: &[(usize, usize)]) -> Cdg {
        let nodes = (0..n).map(|i| ClassNode::bare(&format!("n{i}"))).collect();
        let edges = pairs
            .iter()
            .map(|&(a, b)| EdgeSpec::new(&format!("n{a}"), &format!("n{b}"), DepKind::Association, 1))
            .collect();
        Cdg::new(nodes, edges).unwrap()
    }

    /// Brute force: every node sequence starting at its minimum that closes.
    fn brute_force(n: usize, pairs: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
        let has = |a: usize, b: usize| pairs.contains(&(a, b));
        let mut out = BTreeSet::new();
        fn extend(
            path: &mut Vec<usize>,
            n: usize,
            has: &dyn Fn(usize, usize) -> bool,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            let last = *path.last().unwrap();
            if path.len() > 1 && has(last, path[0]) {
                out.insert(path.clone());
            }
            for w in path[0] + 1..n {
                if !path.contains(&w) && has(last, w) {
                    path.push(w);
                    extend(path, n, has, out);
                    path.pop();
                }
            }
        }
        for s in 0..n {
            extend(&mut vec![s], n, &has, &mut out);
        }
        out
    }

    #[test]
    fn two_node_cycle() {
        let cdg = graph(2, &[(0, 1), (1, 0)]);
        let info = tarjan_scc(&cdg);
        let cycles = all_cycles(&cdg, &info, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].nodes, vec![0, 1]);
        assert_eq!(cycles[0].edges, vec![0, 1]);
        assert_eq!(cycles[0].label(&cdg), "n0->n1->n0");
    }

    #[test]
    fn parallel_edges_expand() {
        let nodes = vec![ClassNode::bare("a"), ClassNode::bare("b")];
        let edges = vec![
            EdgeSpec::new("a", "b", DepKind::Association, 1),
            EdgeSpec::new("a", "b", DepKind::UseDependency, 1),
            EdgeSpec::new("b", "a", DepKind::Association, 1),
        ];
        let cdg = Cdg::new(nodes, edges).unwrap();
        let cycles = enumerate_cycles(&cdg, &[0, 1], 10).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].edges, vec![0, 2]);
        assert_eq!(cycles[1].edges, vec![1, 2]);
        assert_eq!(
            Cycle::from_walk(&cdg, vec![0, 1]),
            Err(CycleError::AmbiguousHop {
                client: "a".into(),
                server: "b".into()
            })
        );
    }

    #[test]
    fn cap_is_enforced() {
        let pairs: Vec<_> = (0..4)
            .flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let cdg = graph(4, &pairs);
        // complete digraph on 4 nodes: 6 + 8 + 6 = 20 cycles
        assert_eq!(enumerate_cycles(&cdg, &[0, 1, 2, 3], 20).unwrap().len(), 20);
        assert_eq!(
            enumerate_cycles(&cdg, &[0, 1, 2, 3], 19),
            Err(CycleError::LimitExceeded { cap: 19 })
        );
    }

    #[test]
    fn walk_with_phantom_hop() {
        let cdg = graph(3, &[(0, 1), (1, 2)]);
        let c = Cycle::from_walk(&cdg, vec![0, 1, 2]).unwrap();
        assert_eq!(c.edges, vec![0, 1]);
        assert_eq!(c.phantom_hops, vec![(2, 0)]);
        assert!(matches!(
            Cycle::from_walk(&cdg, vec![0, 1, 0]),
            Err(CycleError::RepeatedNode { .. })
        ));
        assert!(matches!(Cycle::from_walk(&cdg, vec![0]), Err(CycleError::TooShort { .. })));
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
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_brute_force((n, pairs) in arb_graph()) {
            let cdg = graph(n, &pairs);
            let info = tarjan_scc(&cdg);
            let cycles = all_cycles(&cdg, &info, DEFAULT_CYCLE_CAP).unwrap();
            let got: BTreeSet<Vec<usize>> = cycles.iter().map(|c| c.nodes.clone()).collect();
            prop_assert_eq!(got.len(), cycles.len(), "duplicate cycle");
            prop_assert_eq!(got, brute_force(n, &pairs));
            for c in &cycles {
                prop_assert_eq!(c.edges.len(), c.len());
                for (i, &e) in c.edges.iter().enumerate() {
                    let edge = cdg.edge(e);
                    prop_assert_eq!(edge.client, c.nodes[i]);
                    prop_assert_eq!(edge.server, c.nodes[(i + 1) % c.len()]);
                }
                prop_assert_eq!(c.nodes[0], *c.nodes.iter().min().unwrap());
            }
            for w in cycles.windows(2) {
                prop_assert!((w[0].len(), &w[0].nodes) <= (w[1].len(), &w[1].nodes));
            }
            // sum over edges of cycles-through = sum of cycle lengths
            let through: usize = cycles_by_edge(&cycles, cdg.edge_count()).iter().map(Vec::len).sum();
            prop_assert_eq!(through, cycles.iter().map(Cycle::len).sum::<usize>());
        }
    }
}
