//! CSV and text reports. Numbers use fixed 6-decimal formatting and every
//! report opens with `# key: value` metadata lines.

use sha2::{Digest, Sha256};

use crate::analysis::metrics::to_f64;
use crate::analysis::{EdgeMetrics, Rational, SccInfo};
use crate::breaking::BreakPlan;
use crate::model::Cdg;
use crate::ordering::{StubReport, TestOrder};
use crate::search::ComparisonRow;

use super::model_file::EDGE_LIST_HEADER;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

pub fn fixed_ratio(r: Rational) -> String {
    fixed(to_f64(r))
}

/// Ordered `key: value` pairs written as comment lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    /// Starts with the input digest and the tool version.
    pub fn for_input(input: &[u8]) -> Self {
        Metadata::default()
            .with("input_sha256", sha256_hex(input))
            .with("tool_version", TOOL_VERSION)
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

/// `client,server,kind,used_members`; the `map` output.
pub fn edges_csv(cdg: &Cdg) -> String {
    csv_string(
        &EDGE_LIST_HEADER,
        cdg.edges().iter().map(|e| {
            vec![
                cdg.id(e.client).to_string(),
                cdg.id(e.server).to_string(),
                e.kind.to_string(),
                e.used_members.to_string(),
            ]
        }),
    )
}

/// Component listing: `component,size,classes`, nontrivial ones only.
pub fn scc_csv(cdg: &Cdg, info: &SccInfo) -> String {
    csv_string(
        &["component", "size", "classes"],
        info.nontrivial().enumerate().map(|(i, comp)| {
            let ids: Vec<&str> = comp.iter().map(|&v| cdg.id(v)).collect();
            vec![(i + 1).to_string(), comp.len().to_string(), ids.join(" ")]
        }),
    )
}

pub fn metrics_csv(cdg: &Cdg, metrics: &[EdgeMetrics]) -> String {
    csv_string(
        &["edge", "kind", "cs", "cycles", "cw", "if", "k", "weight", "cwr"],
        metrics.iter().map(|m| {
            vec![
                cdg.edge_label(m.edge),
                cdg.edge(m.edge).kind.to_string(),
                m.cs.to_string(),
                m.cycles_through.to_string(),
                fixed_ratio(m.cw),
                m.if_complexity.to_string(),
                m.k.to_string(),
                m.weight.to_string(),
                m.cwr.map_or_else(|| "n/a".to_string(), fixed_ratio),
            ]
        }),
    )
}

/// `edge,kind,weight,cycles_broken,cumulative_cost`; cycle ids are 1-based.
pub fn plan_csv(cdg: &Cdg, plan: &BreakPlan) -> String {
    let mut running = Rational::from_integer(0);
    csv_string(
        &["edge", "kind", "weight", "cycles_broken", "cumulative_cost"],
        plan.removals.iter().map(|r| {
            running += r.weight;
            let ids: Vec<String> = r.cycles_broken.iter().map(|c| (c + 1).to_string()).collect();
            vec![
                cdg.edge_label(r.edge),
                r.kind.to_string(),
                fixed_ratio(r.weight),
                ids.join(" "),
                fixed_ratio(running),
            ]
        }),
    )
}

/// `position,class,stubs_used`.
pub fn order_csv(cdg: &Cdg, order: &TestOrder) -> String {
    csv_string(
        &["position", "class", "stubs_used"],
        order.sequence.iter().enumerate().map(|(i, &v)| {
            let stubs: Vec<&str> = order
                .stub_map
                .get(&v)
                .map(|s| s.iter().map(|&x| cdg.id(x)).collect())
                .unwrap_or_default();
            vec![(i + 1).to_string(), cdg.id(v).to_string(), stubs.join(" ")]
        }),
    )
}

pub fn stub_summary(cdg: &Cdg, report: &StubReport) -> String {
    let realistic: Vec<&str> = report.realistic_stubs.iter().map(|&v| cdg.id(v)).collect();
    format!(
        "specific stubs: {}\nrealistic stubs: {} ({})\nintegration steps: {}\nintegration cost: {}\n",
        report.specific_stubs.len(),
        report.realistic_stubs.len(),
        realistic.join(", "),
        report.integration_steps,
        fixed_ratio(report.integration_cost),
    )
}

/// `algorithm,seed,generation,avg_fitness,min_fitness,best_order`.
pub fn stats_csv(rows: &[ComparisonRow]) -> String {
    csv_string(
        &["algorithm", "seed", "generation", "avg_fitness", "min_fitness", "best_order"],
        rows.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                r.seed.to_string(),
                r.generation.to_string(),
                fixed(r.avg_fitness),
                fixed(r.min_fitness),
                r.best_order.clone(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_lines() {
        let m = Metadata::for_input(b"abc").with("seed", 7);
        let text = m.render();
        assert!(text.starts_with(
            "# input_sha256: ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad\n"
        ));
        assert!(text.ends_with("# seed: 7\n"));
    }

    #[test]
    fn stats_rows_are_fixed_width_numbers() {
        let rows = vec![ComparisonRow {
            algorithm: "ga".into(),
            seed: 1,
            generation: 1,
            avg_fitness: 2.5,
            min_fitness: 1.0 / 3.0,
            best_order: "A B".into(),
        }];
        assert_eq!(
            stats_csv(&rows),
            "algorithm,seed,generation,avg_fitness,min_fitness,best_order\nga,1,1,2.500000,0.333333,A B\n"
        );
    }
}
