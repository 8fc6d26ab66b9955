//! Classes, UML relations and the class dependency graph (CDG).
//!
//! Nodes of a [`Cdg`] are kept sorted by their canonical id order (plain
//! byte-wise string comparison), so a [`NodeIx`] comparison is the same as an
//! id comparison. Every tie-break further down the pipeline relies on this.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Position of a node in [`Cdg::nodes`].
pub type NodeIx = usize;
/// Position of an edge in [`Cdg::edges`].
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("class `{0}` is declared more than once")]
    DuplicateClass(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("relation from `{0}` to itself")]
    SelfRelation(String),
    #[error("{kind} between `{source_id}` and `{target}` needs a whole endpoint")]
    MissingWhole {
        kind: RelationKind,
        source_id: String,
        target: String,
    },
    #[error("whole `{whole}` is neither `{source_id}` nor `{target}`")]
    WholeNotEndpoint {
        whole: String,
        source_id: String,
        target: String,
    },
    #[error("duplicate {kind} edge {client}->{server}")]
    DuplicateEdge {
        client: String,
        server: String,
        kind: DepKind,
    },
    #[error("edge {client}->{server} is coupled but both classes declare zero members")]
    ZeroMembers { client: String, server: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(String);

impl ClassId {
    pub fn new(id: impl Into<String>) -> Self {
        ClassId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNode {
    pub id: ClassId,
    pub name: String,
    pub attribute_count: u32,
    pub method_count: u32,
}

impl ClassNode {
    pub fn new(id: &str, name: &str, attribute_count: u32, method_count: u32) -> Self {
        ClassNode {
            id: ClassId::new(id),
            name: name.to_string(),
            attribute_count,
            method_count,
        }
    }

    /// A node with no member information, as produced by matrix input.
    pub fn bare(id: &str) -> Self {
        ClassNode::new(id, id, 0, 0)
    }

    pub fn members(&self) -> u32 {
        self.attribute_count + self.method_count
    }
}

/// Relationship kinds accepted in a class diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    AssociationUni,
    AssociationBi,
    Aggregation,
    Composition,
    Inheritance,
    UseDependency,
}

impl RelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::AssociationUni => "association_uni",
            RelationKind::AssociationBi => "association_bi",
            RelationKind::Aggregation => "aggregation",
            RelationKind::Composition => "composition",
            RelationKind::Inheritance => "inheritance",
            RelationKind::UseDependency => "use_dependency",
        }
    }

    pub fn needs_whole(self) -> bool {
        matches!(self, RelationKind::Aggregation | RelationKind::Composition)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "association_uni" => RelationKind::AssociationUni,
            "association_bi" => RelationKind::AssociationBi,
            "aggregation" => RelationKind::Aggregation,
            "composition" => RelationKind::Composition,
            "inheritance" => RelationKind::Inheritance,
            "use_dependency" => RelationKind::UseDependency,
            other => return Err(format!("unknown relation kind `{other}`")),
        })
    }
}

/// One relation of a class diagram.
///
/// `used_src_tgt` counts the members of `target` used by `source`, and
/// `used_tgt_src` the reverse. For inheritance `source` is the child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmlRelation {
    pub kind: RelationKind,
    pub source: ClassId,
    pub target: ClassId,
    pub whole: Option<ClassId>,
    pub used_src_tgt: u32,
    pub used_tgt_src: u32,
}

impl UmlRelation {
    pub fn new(kind: RelationKind, source: &str, target: &str) -> Self {
        UmlRelation {
            kind,
            source: ClassId::new(source),
            target: ClassId::new(target),
            whole: None,
            used_src_tgt: 0,
            used_tgt_src: 0,
        }
    }

    pub fn with_whole(mut self, whole: &str) -> Self {
        self.whole = Some(ClassId::new(whole));
        self
    }

    pub fn with_usage(mut self, src_tgt: u32, tgt_src: u32) -> Self {
        self.used_src_tgt = src_tgt;
        self.used_tgt_src = tgt_src;
        self
    }
}

/// Kind of a directed CDG edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepKind {
    Association,
    UseDependency,
    OptionalDependency,
    Inheritance,
    Composition,
}

impl DepKind {
    pub const ALL: [DepKind; 5] = [
        DepKind::Association,
        DepKind::UseDependency,
        DepKind::OptionalDependency,
        DepKind::Inheritance,
        DepKind::Composition,
    ];

    /// Inheritance and composition edges are never broken (k = 0).
    pub fn is_strong(self) -> bool {
        matches!(self, DepKind::Inheritance | DepKind::Composition)
    }

    pub fn k(self) -> u8 {
        if self.is_strong() {
            0
        } else {
            1
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DepKind::Association => "association",
            DepKind::UseDependency => "use_dependency",
            DepKind::OptionalDependency => "optional_dependency",
            DepKind::Inheritance => "inheritance",
            DepKind::Composition => "composition",
        }
    }
}

impl fmt::Display for DepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DepKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown dependency kind `{s}`"))
    }
}

/// Edge description by class id, used to build a [`Cdg`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub client: ClassId,
    pub server: ClassId,
    pub kind: DepKind,
    pub used_members: u32,
}

impl EdgeSpec {
    pub fn new(client: &str, server: &str, kind: DepKind, used_members: u32) -> Self {
        EdgeSpec {
            client: ClassId::new(client),
            server: ClassId::new(server),
            kind,
            used_members,
        }
    }
}

/// A directed dependency: `client` depends on `server`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CdgEdge {
    pub client: NodeIx,
    pub server: NodeIx,
    pub kind: DepKind,
    pub used_members: u32,
}

/// Class dependency graph. Immutable once built.
#[derive(Clone, Debug)]
pub struct Cdg {
    nodes: Vec<ClassNode>,
    index: HashMap<ClassId, NodeIx>,
    edges: Vec<CdgEdge>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
}

impl PartialEq for Cdg {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Cdg {
    /// Builds a graph, keeping edges in the given order.
    pub fn new(mut nodes: Vec<ClassNode>, edges: Vec<EdgeSpec>) -> Result<Cdg, ModelError> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(ModelError::DuplicateClass(pair[0].id.to_string()));
            }
        }
        let index: HashMap<ClassId, NodeIx> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        let lookup = |id: &ClassId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| ModelError::UnknownClass(id.to_string()))
        };

        let mut seen = HashSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for spec in &edges {
            let client = lookup(&spec.client)?;
            let server = lookup(&spec.server)?;
            if client == server {
                return Err(ModelError::SelfRelation(spec.client.to_string()));
            }
            if !seen.insert((client, server, spec.kind)) {
                return Err(ModelError::DuplicateEdge {
                    client: spec.client.to_string(),
                    server: spec.server.to_string(),
                    kind: spec.kind,
                });
            }
            built.push(CdgEdge {
                client,
                server,
                kind: spec.kind,
                used_members: spec.used_members,
            });
        }
        Ok(Cdg::assemble(nodes, index, built))
    }

    fn assemble(nodes: Vec<ClassNode>, index: HashMap<ClassId, NodeIx>, edges: Vec<CdgEdge>) -> Cdg {
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inc = vec![Vec::new(); nodes.len()];
        for (id, e) in edges.iter().enumerate() {
            out[e.client].push(id);
            inc[e.server].push(id);
        }
        Cdg {
            nodes,
            index,
            edges,
            out,
            inc,
        }
    }

    pub fn nodes(&self) -> &[ClassNode] {
        &self.nodes
    }

    pub fn node(&self, ix: NodeIx) -> &ClassNode {
        &self.nodes[ix]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ix(&self, id: &str) -> Option<NodeIx> {
        self.index.get(&ClassId::new(id)).copied()
    }

    pub fn id(&self, ix: NodeIx) -> &str {
        self.nodes[ix].id.as_str()
    }

    pub fn edges(&self) -> &[CdgEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &CdgEdge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Outgoing edges of `ix`, in declaration order.
    pub fn out_edges(&self, ix: NodeIx) -> &[EdgeId] {
        &self.out[ix]
    }

    pub fn in_edges(&self, ix: NodeIx) -> &[EdgeId] {
        &self.inc[ix]
    }

    /// All edges from `client` to `server`, whatever their kind.
    pub fn edges_between(&self, client: NodeIx, server: NodeIx) -> impl Iterator<Item = EdgeId> + '_ {
        self.out[client]
            .iter()
            .copied()
            .filter(move |&e| self.edges[e].server == server)
    }

    /// First edge `client -> server` looked up by ids.
    pub fn find_edge(&self, client: &str, server: &str) -> Option<EdgeId> {
        let c = self.node_ix(client)?;
        let s = self.node_ix(server)?;
        self.edges_between(c, s).next()
    }

    /// `"A->G"` style label.
    pub fn edge_label(&self, id: EdgeId) -> String {
        let e = &self.edges[id];
        format!("{}->{}", self.id(e.client), self.id(e.server))
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec {
                client: self.nodes[e.client].id.clone(),
                server: self.nodes[e.server].id.clone(),
                kind: e.kind,
                used_members: e.used_members,
            })
            .collect()
    }

    /// Same node set, keeping only the edges for which `keep` holds.
    pub fn retain_edges(&self, mut keep: impl FnMut(EdgeId) -> bool) -> Cdg {
        let edges = (0..self.edges.len())
            .filter(|&e| keep(e))
            .map(|e| self.edges[e])
            .collect();
        Cdg::assemble(self.nodes.clone(), self.index.clone(), edges)
    }
}

/// Maps class-diagram relations onto directed CDG edges.
///
/// * composition (part P, whole W): `P -> W` use dependency, `W -> P` association
/// * aggregation (part P, whole W): `P -> W` association, `W -> P` optional dependency
/// * bidirectional association: one association edge each way
/// * unidirectional association, inheritance, use dependency: one edge, as declared
///
/// The part-to-whole edge is emitted first. Edge order follows relation order,
/// which later fixes the DFS traversal order.
pub fn map_uml_to_cdg(nodes: Vec<ClassNode>, relations: &[UmlRelation]) -> Result<Cdg, ModelError> {
    let declared: HashSet<&ClassId> = nodes.iter().map(|n| &n.id).collect();
    let mut specs = Vec::with_capacity(relations.len() * 2);

    for rel in relations {
        for id in [&rel.source, &rel.target] {
            if !declared.contains(id) {
                return Err(ModelError::UnknownClass(id.to_string()));
            }
        }
        if rel.source == rel.target {
            return Err(ModelError::SelfRelation(rel.source.to_string()));
        }
        let edge = |client: &ClassId, server: &ClassId, kind, used| EdgeSpec {
            client: client.clone(),
            server: server.clone(),
            kind,
            used_members: used,
        };

        match rel.kind {
            RelationKind::Composition | RelationKind::Aggregation => {
                let whole = rel.whole.as_ref().ok_or_else(|| ModelError::MissingWhole {
                    kind: rel.kind,
                    source_id: rel.source.to_string(),
                    target: rel.target.to_string(),
                })?;
                // (part, whole, members of whole used by part, members of part used by whole)
                let (part, used_p_w, used_w_p) = if *whole == rel.target {
                    (&rel.source, rel.used_src_tgt, rel.used_tgt_src)
                } else if *whole == rel.source {
                    (&rel.target, rel.used_tgt_src, rel.used_src_tgt)
                } else {
                    return Err(ModelError::WholeNotEndpoint {
                        whole: whole.to_string(),
                        source_id: rel.source.to_string(),
                        target: rel.target.to_string(),
                    });
                };
                if rel.kind == RelationKind::Composition {
                    specs.push(edge(part, whole, DepKind::UseDependency, used_p_w));
                    specs.push(edge(whole, part, DepKind::Association, used_w_p));
                } else {
                    specs.push(edge(part, whole, DepKind::Association, used_p_w));
                    specs.push(edge(whole, part, DepKind::OptionalDependency, used_w_p));
                }
            }
            RelationKind::AssociationBi => {
                specs.push(edge(&rel.source, &rel.target, DepKind::Association, rel.used_src_tgt));
                specs.push(edge(&rel.target, &rel.source, DepKind::Association, rel.used_tgt_src));
            }
            RelationKind::AssociationUni => {
                specs.push(edge(&rel.source, &rel.target, DepKind::Association, rel.used_src_tgt));
            }
            RelationKind::Inheritance => {
                specs.push(edge(&rel.source, &rel.target, DepKind::Inheritance, rel.used_src_tgt));
            }
            RelationKind::UseDependency => {
                specs.push(edge(&rel.source, &rel.target, DepKind::UseDependency, rel.used_src_tgt));
            }
        }
    }
    Cdg::new(nodes, specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(ids: &[&str]) -> Vec<ClassNode> {
        ids.iter().map(|id| ClassNode::new(id, id, 1, 1)).collect()
    }

    fn edge_set(cdg: &Cdg) -> Vec<(String, String, DepKind)> {
        let mut v: Vec<_> = cdg
            .edges()
            .iter()
            .map(|e| (cdg.id(e.client).to_string(), cdg.id(e.server).to_string(), e.kind))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn composition_maps_to_use_and_association() {
        let rel = UmlRelation::new(RelationKind::Composition, "A", "G")
            .with_whole("G")
            .with_usage(1, 2);
        let cdg = map_uml_to_cdg(nodes(&["A", "G"]), &[rel]).unwrap();
        assert_eq!(
            edge_set(&cdg),
            vec![
                ("A".into(), "G".into(), DepKind::UseDependency),
                ("G".into(), "A".into(), DepKind::Association),
            ]
        );
        let ag = cdg.find_edge("A", "G").unwrap();
        let ga = cdg.find_edge("G", "A").unwrap();
        assert_eq!(cdg.edge(ag).used_members, 1);
        assert_eq!(cdg.edge(ga).used_members, 2);
    }

    #[test]
    fn aggregation_maps_to_association_and_optional() {
        // whole given as source works the same as whole given as target
        for rel in [
            UmlRelation::new(RelationKind::Aggregation, "N", "G").with_whole("G").with_usage(3, 2),
            UmlRelation::new(RelationKind::Aggregation, "G", "N").with_whole("G").with_usage(2, 3),
        ] {
            let cdg = map_uml_to_cdg(nodes(&["G", "N"]), &[rel]).unwrap();
            assert_eq!(
                edge_set(&cdg),
                vec![
                    ("G".into(), "N".into(), DepKind::OptionalDependency),
                    ("N".into(), "G".into(), DepKind::Association),
                ]
            );
            assert_eq!(cdg.edge(cdg.find_edge("N", "G").unwrap()).used_members, 3);
        }
    }

    #[test]
    fn inheritance_is_left_untouched() {
        let rel = UmlRelation::new(RelationKind::Inheritance, "X", "Y");
        let cdg = map_uml_to_cdg(nodes(&["X", "Y"]), &[rel]).unwrap();
        assert_eq!(edge_set(&cdg), vec![("X".into(), "Y".into(), DepKind::Inheritance)]);
    }

    #[test]
    fn edge_counts_per_kind() {
        let cases = [
            (RelationKind::AssociationBi, 2),
            (RelationKind::AssociationUni, 1),
            (RelationKind::Inheritance, 1),
            (RelationKind::UseDependency, 1),
            (RelationKind::Composition, 2),
            (RelationKind::Aggregation, 2),
        ];
        for (kind, expected) in cases {
            let mut rel = UmlRelation::new(kind, "P", "Q");
            if kind.needs_whole() {
                rel = rel.with_whole("Q");
            }
            let cdg = map_uml_to_cdg(nodes(&["P", "Q"]), &[rel]).unwrap();
            assert_eq!(cdg.edge_count(), expected, "{kind}");
        }
    }

    #[test]
    fn empty_relations_give_no_edges() {
        let cdg = map_uml_to_cdg(nodes(&["B", "A"]), &[]).unwrap();
        assert_eq!(cdg.node_count(), 2);
        assert_eq!(cdg.edge_count(), 0);
        assert_eq!(cdg.id(0), "A");
    }

    #[test]
    fn rejects_bad_relations() {
        let unknown = UmlRelation::new(RelationKind::AssociationUni, "A", "Z");
        assert_eq!(
            map_uml_to_cdg(nodes(&["A"]), &[unknown]),
            Err(ModelError::UnknownClass("Z".into()))
        );

        let no_whole = UmlRelation::new(RelationKind::Composition, "A", "B");
        assert!(matches!(
            map_uml_to_cdg(nodes(&["A", "B"]), &[no_whole]),
            Err(ModelError::MissingWhole { .. })
        ));

        let stray_whole = UmlRelation::new(RelationKind::Aggregation, "A", "B").with_whole("C");
        assert!(matches!(
            map_uml_to_cdg(nodes(&["A", "B", "C"]), &[stray_whole]),
            Err(ModelError::WholeNotEndpoint { .. })
        ));

        let dup = [
            UmlRelation::new(RelationKind::AssociationBi, "A", "B"),
            UmlRelation::new(RelationKind::AssociationUni, "B", "A"),
        ];
        assert!(matches!(
            map_uml_to_cdg(nodes(&["A", "B"]), &dup),
            Err(ModelError::DuplicateEdge { .. })
        ));

        let selfrel = UmlRelation::new(RelationKind::AssociationUni, "A", "A");
        assert_eq!(
            map_uml_to_cdg(nodes(&["A"]), &[selfrel]),
            Err(ModelError::SelfRelation("A".into()))
        );
    }

    #[test]
    fn duplicate_class_rejected() {
        let err = Cdg::new(nodes(&["A", "A"]), vec![]).unwrap_err();
        assert_eq!(err, ModelError::DuplicateClass("A".into()));
    }

    #[test]
    fn canonical_order_is_bytewise() {
        let cdg = Cdg::new(nodes(&["b", "B", "10", "8"]), vec![]).unwrap();
        let ids: Vec<_> = (0..4).map(|i| cdg.id(i)).collect();
        assert_eq!(ids, ["10", "8", "B", "b"]);
    }

    #[test]
    fn retain_edges_keeps_nodes() {
        let rel = UmlRelation::new(RelationKind::AssociationBi, "A", "B");
        let cdg = map_uml_to_cdg(nodes(&["A", "B"]), &[rel]).unwrap();
        let half = cdg.retain_edges(|e| e == 0);
        assert_eq!(half.node_count(), 2);
        assert_eq!(half.edge_count(), 1);
        assert_eq!(half.out_edges(0), &[0]);
    }
}
