//! Tarjan's strongly connected components with a deterministic DFS.

use crate::model::{Cdg, EdgeId, NodeIx};

/// SCC partition plus the order in which the DFS first examined each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccInfo {
    /// Component index of every node.
    pub component_of: Vec<usize>,
    /// Components ordered by their smallest node; members sorted.
    pub components: Vec<Vec<NodeIx>>,
    /// Rank of each edge in DFS examination order (0 = first).
    pub dfs_edge_rank: Vec<usize>,
}

impl SccInfo {
    /// Components with more than one node. Self-loops are impossible in a
    /// [`Cdg`], so these are exactly the components that carry cycles.
    pub fn nontrivial(&self) -> impl Iterator<Item = &[NodeIx]> {
        self.components
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.as_slice())
    }

    pub fn nontrivial_count(&self) -> usize {
        self.nontrivial().count()
    }

    /// Component holding `edge`, if both endpoints share one.
    pub fn edge_component(&self, cdg: &Cdg, edge: EdgeId) -> Option<usize> {
        let e = cdg.edge(edge);
        let c = self.component_of[e.client];
        (c == self.component_of[e.server]).then_some(c)
    }
}

/// Roots are tried in canonical id order; the out-edges of a node are
/// followed in declaration order.
pub fn tarjan_scc(cdg: &Cdg) -> SccInfo {
    const UNSEEN: usize = usize::MAX;
    let n = cdg.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeIx> = Vec::new();
    let mut rank = vec![UNSEEN; cdg.edge_count()];
    let mut next_rank = 0;
    let mut next_index = 0;
    let mut raw: Vec<Vec<NodeIx>> = Vec::new();

    // Explicit call stack of (node, position in its out-edge list).
    let mut frames: Vec<(NodeIx, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let out = cdg.out_edges(v);
            if *pos < out.len() {
                let e = out[*pos];
                *pos += 1;
                if rank[e] == UNSEEN {
                    rank[e] = next_rank;
                    next_rank += 1;
                }
                let w = cdg.edge(e).server;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                raw.push(comp);
            }
        }
    }

    raw.sort_by_key(|c| c[0]);
    let mut component_of = vec![0; n];
    for (ci, comp) in raw.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }
    SccInfo {
        component_of,
        components: raw,
        dfs_edge_rank: rank,
    }
}
