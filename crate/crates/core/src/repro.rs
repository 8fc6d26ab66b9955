//! End-to-end runs of the two embedded case studies, checked against their
//! reference figures.

use std::collections::BTreeSet;
use std::fmt;

use crate::analysis::{CouplingTable, CouplingVariant, Cycle, EdgeWeight, Rational};
use crate::breaking::{BreakPlan, Strategy};
use crate::io::{datasets, parse_coupling, parse_cycles, parse_weights};
use crate::model::Cdg;
use crate::ordering::{plan_order, stub_report, Direction};
use crate::pipeline::{analyze, break_plan, load_cdg, InputFormat, Options};
use crate::Error;

pub mod atm {
    pub const SCC_SIZE: usize = 21;
    pub const CYCLES: usize = 28;
    pub const REMOVALS: usize = 24;
    /// Total cost of the reference greedy plan, in hundredths.
    pub const COST_HUNDREDTHS: i128 = 16723;
    pub const FIRST_REMOVAL: (&str, &str) = ("L", "G");
    pub const FIRST_REMOVAL_WEIGHT_HUNDREDTHS: i128 = 1350;
    pub const FIRST_REMOVAL_CYCLES: [usize; 3] = [5, 24, 27];
    pub const REALISTIC_STUBS: [&str; 16] = [
        "C", "D", "E", "F", "G", "H", "I", "K", "M", "N", "O", "P", "Q", "S", "T", "U",
    ];
    pub const STEPS: usize = 45;
    pub const ORDER: [&str; 21] = [
        "G", "O", "K", "A", "Q", "R", "N", "S", "C", "D", "J", "L", "F", "H", "T", "P", "U", "I", "E", "B", "M",
    ];
    pub const CWR_FIRST: [(&str, &str); 2] = [("H", "E"), ("H", "I")];
    pub const CWR_FIRST_RATIO: i128 = 25;
    /// CWR coupling weights are rounded to this many decimals.
    pub const CWR_PRECISION: u32 = 2;
    /// Computed-weight greedy totals, from an independent evaluator.
    pub const COMPUTED_COST_REFERENCE_CYCLES: (i128, i128) = (27457, 168);
    pub const COMPUTED_COST_ENUMERATED_CYCLES: (i128, i128) = (37753, 138);
}

pub mod briand {
    pub const SCC: [&str; 8] = ["8", "9", "10", "11", "12", "13", "14", "15"];
    pub const CYCLES: usize = 30;
    pub const REMOVED: [(&str, &str); 7] = [
        ("8", "10"),
        ("9", "8"),
        ("10", "12"),
        ("10", "13"),
        ("10", "14"),
        ("10", "15"),
        ("11", "10"),
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checklist {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Checklist {
    fn new(title: &str) -> Self {
        Checklist {
            title: title.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Checklist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{mark}] {}: {}", c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

/// The ATM model with its reference cycle list and weights.
pub struct AtmCase {
    pub cdg: Cdg,
    pub reference_cycles: Vec<Cycle>,
    pub reference_weights: Vec<EdgeWeight>,
}

pub fn atm_case() -> Result<AtmCase, Error> {
    let cdg = load_cdg(datasets::ATM_MODEL, Some(InputFormat::Model))?;
    let reference_cycles = parse_cycles(datasets::ATM_CYCLES, &cdg)?;
    let reference_weights = parse_weights(datasets::ATM_WEIGHTS, &cdg, None)?;
    Ok(AtmCase {
        cdg,
        reference_cycles,
        reference_weights,
    })
}

/// The 21-class matrix with its coupling table and reference weights.
pub struct BriandCase {
    pub cdg: Cdg,
    pub coupling: CouplingTable,
    pub reference_weights: Vec<Vec<EdgeWeight>>,
}

pub fn briand_case() -> Result<BriandCase, Error> {
    let cdg = load_cdg(datasets::BRIAND_MATRIX, Some(InputFormat::Matrix))?;
    let coupling = parse_coupling(datasets::BRIAND_COUPLING, &cdg)?;
    let reference_weights = (1..=6)
        .map(|i| parse_weights(datasets::BRIAND_WEIGHTS, &cdg, Some(&format!("w{i}"))))
        .collect::<Result<_, _>>()?;
    Ok(BriandCase {
        cdg,
        coupling,
        reference_weights,
    })
}

fn labels(cdg: &Cdg, plan: &BreakPlan) -> Vec<String> {
    plan.removals.iter().map(|r| cdg.edge_label(r.edge)).collect()
}

fn hundredths(r: Rational) -> String {
    crate::io::report::fixed_ratio(r)
}

pub fn repro_atm() -> Result<Checklist, Error> {
    let case = atm_case()?;
    let cdg = &case.cdg;
    let opts = Options::default();
    let mut list = Checklist::new("ATM case study");

    let enumerated = analyze(cdg, None, None, &opts)?;
    let sccs: Vec<usize> = enumerated.scc.nontrivial().map(|c| c.len()).collect();
    list.check(
        "strongly connected components",
        sccs == [atm::SCC_SIZE],
        format!("nontrivial component sizes {sccs:?}, expected [{}]", atm::SCC_SIZE),
    );
    list.check(
        "elementary cycles",
        enumerated.cycles.len() == atm::CYCLES,
        format!("enumerated {}, expected {}", enumerated.cycles.len(), atm::CYCLES),
    );
    let phantom: Vec<String> = case
        .reference_cycles
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.phantom_hops.is_empty())
        .map(|(i, c)| format!("{} ({})", i + 1, c.label(cdg)))
        .collect();
    list.check(
        "reference cycle list",
        case.reference_cycles.len() == atm::CYCLES,
        format!(
            "{} listed; cycles with hops missing from the graph: {}",
            case.reference_cycles.len(),
            if phantom.is_empty() { "none".to_string() } else { phantom.join(", ") }
        ),
    );

    // Reference track: listed cycles, listed weights.
    let listed = analyze(cdg, None, Some(case.reference_cycles.clone()), &opts)?;
    let plan = break_plan(cdg, &listed, Some(&case.reference_weights), &opts)?;
    list.check(
        "greedy removals",
        plan.removals.len() == atm::REMOVALS,
        format!("{} removed: {}", plan.removals.len(), labels(cdg, &plan).join(" ")),
    );
    let first = plan.removals.first();
    let first_ok = first.is_some_and(|r| {
        (cdg.id(r.client), cdg.id(r.server)) == atm::FIRST_REMOVAL
            && r.weight == Rational::new(atm::FIRST_REMOVAL_WEIGHT_HUNDREDTHS, 100)
            && r.cycles_broken.iter().map(|c| c + 1).eq(atm::FIRST_REMOVAL_CYCLES)
    });
    list.check(
        "first greedy removal",
        first_ok,
        first.map_or("none".into(), |r| {
            let ids: Vec<String> = r.cycles_broken.iter().map(|c| (c + 1).to_string()).collect();
            format!("{} at {} breaking {{{}}}", cdg.edge_label(r.edge), hundredths(r.weight), ids.join(", "))
        }),
    );
    list.check(
        "integration cost",
        plan.total_cost == Rational::new(atm::COST_HUNDREDTHS, 100),
        hundredths(plan.total_cost),
    );
    let order = plan_order(&plan, Direction::ServersFirst)?;
    let report = stub_report(&plan, &order);
    let realistic: BTreeSet<&str> = report.realistic_stubs.iter().map(|&v| cdg.id(v)).collect();
    list.check(
        "realistic stubs",
        realistic == atm::REALISTIC_STUBS.into_iter().collect(),
        format!("{} classes: {}", realistic.len(), realistic.into_iter().collect::<Vec<_>>().join(",")),
    );
    list.check(
        "specific stubs",
        report.specific_stubs.len() == atm::REMOVALS,
        report.specific_stubs.len().to_string(),
    );
    list.check(
        "integration steps",
        report.integration_steps == atm::STEPS,
        report.integration_steps.to_string(),
    );
    let got_order = order.ids(cdg);
    list.check(
        "topological order",
        got_order == atm::ORDER,
        format!("{}, expected {}", got_order.join(","), atm::ORDER.join(",")),
    );

    // Metric spot checks.
    let ag = cdg.find_edge("A", "G").expect("A->G");
    let ga = cdg.find_edge("G", "A").expect("G->A");
    let m = &listed.metrics[ag];
    list.check(
        "CS(A->G)",
        m.cs.value() == Some(Rational::new(1, 11)),
        m.cs.value().map_or("none".into(), |v| v.to_string()),
    );
    list.check("CW(A->G)", m.cw == Rational::new(1, 28), m.cw.to_string());
    list.check(
        "IF(G->A)",
        listed.metrics[ga].if_complexity == 26,
        listed.metrics[ga].if_complexity.to_string(),
    );

    // Computed track: weights from the model itself.
    for (name, analysis, (n, d)) in [
        ("computed weights, listed cycles", &listed, atm::COMPUTED_COST_REFERENCE_CYCLES),
        ("computed weights, enumerated cycles", &enumerated, atm::COMPUTED_COST_ENUMERATED_CYCLES),
    ] {
        let plan = break_plan(cdg, analysis, None, &opts)?;
        list.check(
            name,
            plan.total_cost == Rational::new(n, d),
            format!("{} removals, cost {}", plan.removals.len(), hundredths(plan.total_cost)),
        );
    }

    // Cycle-weight-ratio strategy over the listed cycles.
    let cwr_opts = Options {
        strategy: Strategy::Cwr,
        cwr_precision: Some(atm::CWR_PRECISION),
        ..opts
    };
    let cwr = break_plan(cdg, &listed, None, &cwr_opts)?;
    let head: Vec<String> = cwr
        .removals
        .iter()
        .take(2)
        .map(|r| format!("{} at {}", cdg.edge_label(r.edge), hundredths(r.score)))
        .collect();
    let head_ok = cwr.removals.len() >= 2
        && cwr.removals.iter().zip(atm::CWR_FIRST).all(|(r, (c, s))| {
            (cdg.id(r.client), cdg.id(r.server)) == (c, s) && r.score == Rational::from_integer(atm::CWR_FIRST_RATIO)
        });
    list.check("CWR first removals", head_ok, head.join(", "));
    list.check(
        "CWR removals",
        cwr.removals.len() == atm::REMOVALS,
        cwr.removals.len().to_string(),
    );
    Ok(list)
}

pub fn repro_briand() -> Result<Checklist, Error> {
    let case = briand_case()?;
    let cdg = &case.cdg;
    let mut list = Checklist::new("Briand dependency-matrix case study");

    let base = analyze(cdg, None, None, &Options::default());
    // The default variant has no member data on matrix input; analysis
    // itself still succeeds and yields the structure.
    let base = base?;
    let sccs: Vec<Vec<&str>> = base
        .scc
        .nontrivial()
        .map(|c| c.iter().map(|&v| cdg.id(v)).collect())
        .collect();
    let want: BTreeSet<&str> = briand::SCC.into_iter().collect();
    list.check(
        "strongly connected components",
        sccs.len() == 1 && sccs[0].iter().copied().collect::<BTreeSet<_>>() == want,
        format!("{sccs:?}"),
    );
    list.check(
        "elementary cycles",
        base.cycles.len() == briand::CYCLES,
        format!("enumerated {}, expected {}", base.cycles.len(), briand::CYCLES),
    );

    let target: BTreeSet<(String, String)> = briand::REMOVED
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let removed_set = |plan: &BreakPlan| -> BTreeSet<(String, String)> {
        plan.removals
            .iter()
            .map(|r| (cdg.id(r.client).to_string(), cdg.id(r.server).to_string()))
            .collect()
    };

    for (i, variant) in CouplingVariant::TABLE.into_iter().enumerate() {
        let opts = Options {
            variant,
            ..Options::default()
        };
        let analysis = analyze(cdg, Some(&case.coupling), None, &opts)?;
        for (track, weights) in [("computed", None), ("reference", Some(&case.reference_weights[i][..]))] {
            let plan = break_plan(cdg, &analysis, weights, &opts)?;
            let got = removed_set(&plan);
            list.check(
                format!("cost function {} ({variant}), {track} weights", i + 1),
                got == target,
                format!(
                    "{} removed: {}; cost {}",
                    plan.removals.len(),
                    labels(cdg, &plan).join(" "),
                    hundredths(plan.total_cost)
                ),
            );
        }
    }
    Ok(list)
}
