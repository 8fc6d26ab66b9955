//! Alternative denominators for the edge weight, one per cost function.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::model::{Cdg, EdgeId, NodeIx};

use super::metrics::{coupling_strength, Coupling};
use super::AnalysisError;

/// Which quantity divides `CW * IF` in the edge weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CouplingVariant {
    /// Members used over members declared, from the model.
    #[default]
    CsEq1,
    /// Number of broken dependencies (D).
    BrokenDependencies,
    AttributeCoupling,
    MethodCoupling,
    AttrAndMethod4,
    AttrAndMethod5,
    /// `C + Vd + Md + Rd + Pd`.
    FiveParamCs,
}

impl CouplingVariant {
    pub const ALL: [CouplingVariant; 7] = [
        CouplingVariant::CsEq1,
        CouplingVariant::BrokenDependencies,
        CouplingVariant::AttributeCoupling,
        CouplingVariant::MethodCoupling,
        CouplingVariant::AttrAndMethod4,
        CouplingVariant::AttrAndMethod5,
        CouplingVariant::FiveParamCs,
    ];

    /// The six table-driven cost functions, numbered 1 to 6.
    pub const TABLE: [CouplingVariant; 6] = [
        CouplingVariant::BrokenDependencies,
        CouplingVariant::AttributeCoupling,
        CouplingVariant::MethodCoupling,
        CouplingVariant::AttrAndMethod4,
        CouplingVariant::AttrAndMethod5,
        CouplingVariant::FiveParamCs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CouplingVariant::CsEq1 => "cs_eq1",
            CouplingVariant::BrokenDependencies => "broken_dependencies",
            CouplingVariant::AttributeCoupling => "attribute_coupling",
            CouplingVariant::MethodCoupling => "method_coupling",
            CouplingVariant::AttrAndMethod4 => "attr_and_method_4",
            CouplingVariant::AttrAndMethod5 => "attr_and_method_5",
            CouplingVariant::FiveParamCs => "five_param_cs",
        }
    }

    /// 1-based cost-function number, `None` for the model-derived default.
    pub fn number(self) -> Option<usize> {
        CouplingVariant::TABLE.iter().position(|&v| v == self).map(|i| i + 1)
    }

    pub fn needs_table(self) -> bool {
        self != CouplingVariant::CsEq1
    }
}

impl fmt::Display for CouplingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CouplingVariant {
    type Err = String;

    /// Accepts the snake_case name, its kebab-case spelling, or a number 1-6.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        if let Ok(n) = norm.parse::<usize>() {
            return CouplingVariant::TABLE
                .get(n.wrapping_sub(1))
                .copied()
                .ok_or_else(|| format!("cost function number {n} is not in 1..=6"));
        }
        CouplingVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == norm)
            .ok_or_else(|| format!("unknown coupling variant `{s}`"))
    }
}

/// Coupling measures for one directed class pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CouplingRecord {
    pub c: u32,
    pub vd: u32,
    pub md: u32,
    pub rd: u32,
    pub pd: u32,
    pub broken: Coupling,
    pub attribute: Coupling,
    pub method: Coupling,
    pub attr_method_4: Coupling,
    pub attr_method_5: Coupling,
}

impl CouplingRecord {
    pub fn five_param(&self) -> Coupling {
        Coupling::from_count(self.c + self.vd + self.md + self.rd + self.pd)
    }

    pub fn measure(&self, variant: CouplingVariant) -> Option<Coupling> {
        Some(match variant {
            CouplingVariant::CsEq1 => return None,
            CouplingVariant::BrokenDependencies => self.broken,
            CouplingVariant::AttributeCoupling => self.attribute,
            CouplingVariant::MethodCoupling => self.method,
            CouplingVariant::AttrAndMethod4 => self.attr_method_4,
            CouplingVariant::AttrAndMethod5 => self.attr_method_5,
            CouplingVariant::FiveParamCs => self.five_param(),
        })
    }
}

/// Coupling records keyed by (client, server).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CouplingTable {
    records: HashMap<(NodeIx, NodeIx), CouplingRecord>,
}

impl CouplingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the previous record for the pair, if any.
    pub fn insert(&mut self, client: NodeIx, server: NodeIx, record: CouplingRecord) -> Option<CouplingRecord> {
        self.records.insert((client, server), record)
    }

    pub fn get(&self, client: NodeIx, server: NodeIx) -> Option<&CouplingRecord> {
        self.records.get(&(client, server))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Denominator of `edge` under `variant`; `Ok(None)` when the table has no
/// row for the edge.
pub fn denominator(
    variant: CouplingVariant,
    cdg: &Cdg,
    edge: EdgeId,
    table: Option<&CouplingTable>,
) -> Result<Option<Coupling>, AnalysisError> {
    let e = cdg.edge(edge);
    if variant == CouplingVariant::CsEq1 {
        let cs = coupling_strength(e, cdg.node(e.client), cdg.node(e.server))?;
        return Ok(Some(cs));
    }
    let table = table.ok_or(AnalysisError::NeedsCouplingTable { variant })?;
    Ok(table.get(e.client, e.server).and_then(|r| r.measure(variant)))
}
