//! Coupling strength, cycle weight, information flow and the combined
//! edge weight `k * CW * IF / CS`, all in exact rational arithmetic.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::model::{Cdg, CdgEdge, ClassNode, EdgeId, ModelError, NodeIx};

use super::coupling::{denominator, CouplingTable, CouplingVariant};
use super::cycles::{cycles_by_edge, Cycle};
use super::scc::SccInfo;
use super::AnalysisError;

pub type Rational = Ratio<i128>;

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `places` decimals.
pub fn round_decimals(r: Rational, places: u32) -> Rational {
    let scale = Rational::from_integer(10i128.pow(places));
    (r * scale).round() / scale
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IfMode {
    /// fan-in + fan-out
    #[default]
    Additive,
    /// fan-in * fan-out
    Multiplicative,
}

impl std::str::FromStr for IfMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "additive" => Ok(IfMode::Additive),
            "multiplicative" => Ok(IfMode::Multiplicative),
            _ => Err(format!("unknown IF mode `{s}`")),
        }
    }
}

pub fn fan_in(cdg: &Cdg, node: NodeIx) -> usize {
    cdg.in_edges(node).len()
}

pub fn fan_out(cdg: &Cdg, node: NodeIx) -> usize {
    cdg.out_edges(node).len()
}

pub fn if_complexity(cdg: &Cdg, node: NodeIx, mode: IfMode) -> u64 {
    let (i, o) = (fan_in(cdg, node) as u64, fan_out(cdg, node) as u64);
    match mode {
        IfMode::Additive => i + o,
        IfMode::Multiplicative => i * o,
    }
}

/// IF of an edge: IF(client) + IF(server).
pub fn edge_if(cdg: &Cdg, edge: EdgeId, mode: IfMode) -> u64 {
    let e = cdg.edge(edge);
    if_complexity(cdg, e.client, mode) + if_complexity(cdg, e.server, mode)
}

/// A coupling measure: a positive value, or no usable coupling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coupling {
    Strength(Rational),
    NoCoupling,
}

impl Coupling {
    /// 0 means no coupling.
    pub fn from_count(n: u32) -> Coupling {
        Coupling::from_value(Rational::from_integer(n as i128))
    }

    pub fn from_value(r: Rational) -> Coupling {
        if r > Rational::zero() {
            Coupling::Strength(r)
        } else {
            Coupling::NoCoupling
        }
    }

    pub fn value(self) -> Option<Rational> {
        match self {
            Coupling::Strength(r) => Some(r),
            Coupling::NoCoupling => None,
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Strength(r) => write!(f, "{:.6}", to_f64(*r)),
            Coupling::NoCoupling => f.write_str("no_coupling"),
        }
    }
}

/// Members of the server used by the client over the members of both.
pub fn coupling_strength(edge: &CdgEdge, client: &ClassNode, server: &ClassNode) -> Result<Coupling, ModelError> {
    if edge.used_members == 0 {
        return Ok(Coupling::NoCoupling);
    }
    let total = client.members() + server.members();
    if total == 0 {
        return Err(ModelError::ZeroMembers {
            client: client.id.to_string(),
            server: server.id.to_string(),
        });
    }
    Ok(Coupling::Strength(Rational::new(
        edge.used_members as i128,
        total as i128,
    )))
}

/// Fraction of `cycles` that contain `edge`.
pub fn cycle_weight(edge: EdgeId, cycles: &[Cycle]) -> Rational {
    if cycles.is_empty() {
        return Rational::zero();
    }
    let through = cycles.iter().filter(|c| c.contains_edge(edge)).count();
    Rational::new(through as i128, cycles.len() as i128)
}

/// Stub cost of breaking an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeWeight {
    Finite(Rational),
    /// No usable coupling measure; the edge is never broken.
    Unbreakable,
}

impl EdgeWeight {
    pub fn finite(self) -> Option<Rational> {
        match self {
            EdgeWeight::Finite(w) => Some(w),
            EdgeWeight::Unbreakable => None,
        }
    }
}

impl fmt::Display for EdgeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeWeight::Finite(w) => write!(f, "{:.6}", to_f64(*w)),
            EdgeWeight::Unbreakable => f.write_str("unbreakable"),
        }
    }
}

/// `k * cw * if / denominator`, where k is 0 for inheritance and composition.
pub fn edge_weight(strong: bool, cw: Rational, if_value: u64, denom: Coupling) -> EdgeWeight {
    if strong {
        return EdgeWeight::Finite(Rational::zero());
    }
    match denom {
        Coupling::Strength(d) => EdgeWeight::Finite(cw * Rational::from_integer(if_value as i128) / d),
        Coupling::NoCoupling => EdgeWeight::Unbreakable,
    }
}

/// Cycles through an edge divided by its coupling weight.
pub fn cycle_weight_ratio(cycles_through: usize, coupling: Rational) -> Rational {
    if cycles_through == 0 {
        return Rational::zero();
    }
    Rational::from_integer(cycles_through as i128) / coupling
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MetricsConfig {
    pub if_mode: IfMode,
    pub variant: CouplingVariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMetrics {
    pub edge: EdgeId,
    /// Denominator under the configured variant (CS for the default).
    pub cs: Coupling,
    pub cycles_through: usize,
    pub cw: Rational,
    pub if_complexity: u64,
    pub k: u8,
    pub weight: EdgeWeight,
    pub cwr: Option<Rational>,
}

/// Metrics for every edge. CW is relative to the cycles of the edge's own
/// component; an edge joining two components gets CW 0 and weight 0.
///
/// Table-driven variants need a row only for edges that lie on a cycle.
pub fn compute_metrics(
    cdg: &Cdg,
    info: &SccInfo,
    cycles: &[Cycle],
    table: Option<&CouplingTable>,
    config: MetricsConfig,
) -> Result<Vec<EdgeMetrics>, AnalysisError> {
    let mut per_component = vec![0usize; info.components.len()];
    for c in cycles {
        per_component[info.component_of[c.nodes[0]]] += 1;
    }
    let by_edge = cycles_by_edge(cycles, cdg.edge_count());

    let mut out = Vec::with_capacity(cdg.edge_count());
    for edge in 0..cdg.edge_count() {
        let kind = cdg.edge(edge).kind;
        let through = by_edge[edge].len();
        let total = info
            .edge_component(cdg, edge)
            .map_or(0, |c| per_component[c]);
        let cw = if through == 0 || total == 0 {
            Rational::zero()
        } else {
            Rational::new(through as i128, total as i128)
        };
        let if_value = edge_if(cdg, edge, config.if_mode);
        let (cs, weight) = match denominator(config.variant, cdg, edge, table)? {
            Some(d) => (d, edge_weight(kind.is_strong(), cw, if_value, d)),
            // off-cycle edge without a table row: CW is 0, so is the weight
            None if through == 0 => (Coupling::NoCoupling, EdgeWeight::Finite(Rational::zero())),
            None => {
                return Err(AnalysisError::MissingCoupling {
                    edge: cdg.edge_label(edge),
                    variant: config.variant,
                })
            }
        };
        out.push(EdgeMetrics {
            edge,
            cs,
            cycles_through: through,
            cw,
            if_complexity: if_value,
            k: kind.k(),
            weight,
            cwr: cs.value().map(|d| cycle_weight_ratio(through, d)),
        });
    }
    Ok(out)
}
