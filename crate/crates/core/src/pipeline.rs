//! Input loading and the analyze / break / order chain shared by the CLI,
//! the case-study checklists and the tests.

use std::str::FromStr;

use crate::analysis::{
    all_cycles, compute_metrics, tarjan_scc, CouplingTable, CouplingVariant, Cycle, EdgeMetrics, EdgeWeight, IfMode,
    MetricsConfig, SccInfo, DEFAULT_CYCLE_CAP,
};
use crate::breaking::{cwr_break, cwr_coupling, greedy_break, BreakInput, BreakPlan, Strategy};
use crate::io::{parse_edge_list, parse_matrix, parse_model, ParseError};
use crate::model::{map_uml_to_cdg, Cdg};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Model,
    Matrix,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "model" => Ok(InputFormat::Model),
            "matrix" => Ok(InputFormat::Matrix),
            _ => Err(format!("unknown input format `{s}`")),
        }
    }
}

/// A file with a `[classes]` section is a model file; anything else is
/// read as a matrix.
pub fn detect_format(text: &str) -> InputFormat {
    if text.lines().any(|l| l.trim() == "[classes]") {
        InputFormat::Model
    } else {
        InputFormat::Matrix
    }
}

/// Splits a model at its `[edges]` line: classes before, an already mapped
/// edge list after.
fn split_edge_section(text: &str) -> Option<(&str, &str)> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim() == "[edges]" {
            return Some((&text[..offset], &text[offset + line.len()..]));
        }
        offset += line.len();
    }
    None
}

pub fn load_cdg(text: &str, format: Option<InputFormat>) -> Result<Cdg, Error> {
    match format.unwrap_or_else(|| detect_format(text)) {
        InputFormat::Model => match split_edge_section(text) {
            Some((head, edges)) => {
                let (nodes, relations) = parse_model(head)?;
                if !relations.is_empty() {
                    return Err(ParseError::Format("a model cannot have both [relations] and [edges]".into()).into());
                }
                Ok(parse_edge_list(edges, nodes)?)
            }
            None => {
                let (nodes, relations) = parse_model(text)?;
                Ok(map_uml_to_cdg(nodes, &relations)?)
            }
        },
        InputFormat::Matrix => Ok(parse_matrix(text)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub if_mode: IfMode,
    pub variant: CouplingVariant,
    pub max_cycles: usize,
    pub strategy: Strategy,
    /// Decimal places for the CWR coupling weight; `None` keeps it exact.
    pub cwr_precision: Option<u32>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            if_mode: IfMode::Additive,
            variant: CouplingVariant::CsEq1,
            max_cycles: DEFAULT_CYCLE_CAP,
            strategy: Strategy::Greedy,
            cwr_precision: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub scc: SccInfo,
    pub cycles: Vec<Cycle>,
    pub metrics: Vec<EdgeMetrics>,
}

impl Analysis {
    pub fn weights(&self) -> Vec<EdgeWeight> {
        self.metrics.iter().map(|m| m.weight).collect()
    }
}

/// SCCs, cycles (enumerated unless a catalogue is given) and edge metrics.
pub fn analyze(
    cdg: &Cdg,
    table: Option<&CouplingTable>,
    catalogue: Option<Vec<Cycle>>,
    opts: &Options,
) -> Result<Analysis, Error> {
    let scc = tarjan_scc(cdg);
    let cycles = match catalogue {
        Some(c) => c,
        None => all_cycles(cdg, &scc, opts.max_cycles).map_err(crate::analysis::AnalysisError::from)?,
    };
    let config = MetricsConfig {
        if_mode: opts.if_mode,
        variant: opts.variant,
    };
    let metrics = compute_metrics(cdg, &scc, &cycles, table, config)?;
    Ok(Analysis { scc, cycles, metrics })
}

/// Runs the configured strategy. `weights` replaces the computed edge
/// weights (and, for CWR, the removal costs).
pub fn break_plan(
    cdg: &Cdg,
    analysis: &Analysis,
    weights: Option<&[EdgeWeight]>,
    opts: &Options,
) -> Result<BreakPlan, Error> {
    let input = BreakInput {
        cdg,
        scc: &analysis.scc,
        cycles: &analysis.cycles,
        variant: opts.variant,
    };
    let computed = analysis.weights();
    let weights = weights.unwrap_or(&computed);
    let plan = match opts.strategy {
        Strategy::Greedy => greedy_break(&input, weights)?,
        Strategy::Cwr => {
            let coupling = cwr_coupling(&analysis.metrics, opts.cwr_precision);
            cwr_break(&input, &coupling, weights)?
        }
    };
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_detection() {
        assert_eq!(detect_format("# x\n[classes]\nA,a,0,0\n"), InputFormat::Model);
        assert_eq!(detect_format(",1\n1,\n"), InputFormat::Matrix);
    }

    #[test]
    fn empty_model_has_nothing_to_do() {
        let cdg = load_cdg("[classes]\n[relations]\n", None).unwrap();
        let analysis = analyze(&cdg, None, None, &Options::default()).unwrap();
        assert_eq!(analysis.scc.nontrivial_count(), 0);
        assert!(analysis.cycles.is_empty());
        let plan = break_plan(&cdg, &analysis, None, &Options::default()).unwrap();
        assert!(plan.removals.is_empty());
    }

    #[test]
    fn edge_section_skips_mapping() {
        let text = "[classes]\nA,a,1,1\nB,b,1,1\n[edges]\nclient,server,kind,used_members\nA,B,inheritance,0\n";
        let cdg = load_cdg(text, None).unwrap();
        assert_eq!(cdg.edge_count(), 1);
        assert_eq!(cdg.edges()[0].kind, crate::model::DepKind::Inheritance);

        let both = "[classes]\nA,a,1,1\nB,b,1,1\n[relations]\ninheritance,A,B\n[edges]\nclient,server,kind,used_members\n";
        assert!(load_cdg(both, None).is_err());
    }
}
