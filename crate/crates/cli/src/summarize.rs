//! Best/worst combination frequency analysis.
//!
//! For every (benchmark, density) group, the metric of each compiler
//! combination `routing|level|layout` is aggregated as the median over its
//! records; the best and worst combinations of the group earn one count
//! each, split fractionally on ties.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::sweep::ResultRecord;

#[derive(Debug, Error)]
pub enum SummarizeError {
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("no usable records (all failed or metric missing)")]
    NoRecords,
    #[error("group {0} has fewer than 2 combinations")]
    TooFewCombinations(String),
}

pub const METRICS: [&str; 13] = [
    "swaps_added",
    "gates_after",
    "depth_after",
    "base_fidelity",
    "fid_shared_qubit",
    "fid_simultaneous",
    "fid_proximity",
    "fid_thermal",
    "fid_depolarizing",
    "gate_overhead",
    "depth_overhead",
    "fidelity_decrease",
    "cost_improvement",
];

/// Frequency table over combination labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BestWorst {
    pub metric: String,
    pub groups: usize,
    /// combination label -> (best count, worst count)
    pub counts: BTreeMap<String, (f64, f64)>,
}

pub fn combo_label(record: &ResultRecord) -> String {
    format!("{}|{}|{}", record.routing, record.opt_level, record.layout)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Computes best/worst frequencies of `metric` across all
/// (benchmark, density) groups.
pub fn summarize_best_worst(records: &[ResultRecord], metric: &str) -> Result<BestWorst, SummarizeError> {
    if !METRICS.contains(&metric) {
        return Err(SummarizeError::UnknownMetric(metric.to_string()));
    }
    // group -> combo -> metric samples
    let mut groups: BTreeMap<(String, String), BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for record in records {
        if !record.error.is_empty() {
            continue;
        }
        let Some(value) = record.metric(metric) else { continue };
        if !value.is_finite() {
            continue;
        }
        groups
            .entry((record.benchmark.clone(), record.density_target.clone()))
            .or_default()
            .entry(combo_label(record))
            .or_default()
            .push(value);
    }
    if groups.is_empty() {
        return Err(SummarizeError::NoRecords);
    }

    let mut counts: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for ((benchmark, density), combos) in &groups {
        if combos.len() < 2 {
            return Err(SummarizeError::TooFewCombinations(format!("{benchmark}@{density}")));
        }
        let medians: Vec<(&String, f64)> =
            combos.iter().map(|(label, values)| (label, median(&mut values.clone()))).collect();
        let best = medians.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
        let worst = medians.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        let best_labels: Vec<&String> =
            medians.iter().filter(|(_, v)| *v == best).map(|(l, _)| *l).collect();
        let worst_labels: Vec<&String> =
            medians.iter().filter(|(_, v)| *v == worst).map(|(l, _)| *l).collect();
        for label in &best_labels {
            counts.entry((*label).clone()).or_insert((0.0, 0.0)).0 += 1.0 / best_labels.len() as f64;
        }
        for label in &worst_labels {
            counts.entry((*label).clone()).or_insert((0.0, 0.0)).1 += 1.0 / worst_labels.len() as f64;
        }
    }
    Ok(BestWorst { metric: metric.to_string(), groups: groups.len(), counts })
}

impl BestWorst {
    /// Plain-text table, best-count descending then label.
    pub fn render(&self) -> String {
        let mut rows: Vec<(&String, &(f64, f64))> = self.counts.iter().collect();
        rows.sort_by(|a, b| {
            b.1 .0.partial_cmp(&a.1 .0).expect("finite counts").then_with(|| a.0.cmp(b.0))
        });
        let mut out = format!(
            "metric: {} ({} benchmark x density groups)\n{:<28} {:>8} {:>8}\n",
            self.metric, self.groups, "combination", "best", "worst"
        );
        for (label, (best, worst)) in rows {
            out.push_str(&format!("{label:<28} {best:>8.2} {worst:>8.2}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(benchmark: &str, density: &str, routing: &str, level: u8, layout: &str, cost: f64) -> ResultRecord {
        ResultRecord {
            benchmark: benchmark.to_string(),
            topology: "t".to_string(),
            density_target: density.to_string(),
            density: 0.1,
            qubits: 4,
            edges: 4,
            layout: layout.to_string(),
            routing: routing.to_string(),
            opt_level: level,
            setup: 0,
            scheduling: "alap".to_string(),
            seed: 1,
            error: String::new(),
            swaps_added: Some(0),
            gates_before: Some(1),
            gates_after: Some(1),
            depth_before: Some(1),
            depth_after: Some(1),
            n1q_before: Some(1),
            n2q_before: Some(0),
            n1q_after: Some(1),
            n2q_after: Some(0),
            base_fidelity: None,
            fid_shared_qubit: None,
            fid_simultaneous: None,
            fid_proximity: None,
            fid_thermal: None,
            fid_depolarizing: None,
            gate_overhead: Some(0.0),
            depth_overhead: Some(0.0),
            fidelity_decrease: None,
            cost_improvement: Some(cost),
        }
    }

    #[test]
    fn single_group_best_and_worst() {
        let records = vec![
            record("ghz:3", "base", "sabre", 2, "sabre", 2.0),
            record("ghz:3", "base", "stochastic", 0, "sabre", 1.0),
        ];
        let table = summarize_best_worst(&records, "cost_improvement").unwrap();
        assert_eq!(table.counts["sabre|2|sabre"], (1.0, 0.0));
        assert_eq!(table.counts["stochastic|0|sabre"], (0.0, 1.0));
    }

    #[test]
    fn ties_are_credited_fractionally() {
        let records = vec![
            record("ghz:3", "base", "sabre", 1, "dense", 1.5),
            record("ghz:3", "base", "sabre", 1, "trivial", 1.5),
            record("ghz:3", "base", "stochastic", 0, "dense", 0.5),
        ];
        let table = summarize_best_worst(&records, "cost_improvement").unwrap();
        assert_eq!(table.counts["sabre|1|dense"].0, 0.5);
        assert_eq!(table.counts["sabre|1|trivial"].0, 0.5);
        assert_eq!(table.counts["stochastic|0|dense"].1, 1.0);
    }

    #[test]
    fn label_format_matches_routing_level_layout() {
        let r = record("qft:4", "0.3", "sabre", 2, "sabre", 1.0);
        assert_eq!(combo_label(&r), "sabre|2|sabre");
    }

    #[test]
    fn unknown_metric_rejected() {
        assert!(matches!(
            summarize_best_worst(&[], "magic"),
            Err(SummarizeError::UnknownMetric(_))
        ));
    }

    #[test]
    fn failed_records_are_excluded() {
        let mut records = vec![
            record("ghz:3", "base", "sabre", 1, "dense", 2.0),
            record("ghz:3", "base", "stochastic", 0, "dense", 1.0),
        ];
        let mut broken = record("ghz:3", "base", "trivial_combo", 9, "trivial", 99.0);
        broken.error = "circuit has 16 qubits but device only 4".to_string();
        records.push(broken);
        let table = summarize_best_worst(&records, "cost_improvement").unwrap();
        assert!(!table.counts.contains_key("trivial_combo|9|trivial"));
        assert_eq!(table.counts["sabre|1|dense"].0, 1.0);
    }

    #[test]
    fn seeds_aggregate_by_median() {
        let mut records = Vec::new();
        for (seed, cost) in [(1u64, 1.0), (2, 10.0), (3, 1.2)] {
            let mut r = record("ghz:3", "base", "sabre", 1, "dense", cost);
            r.seed = seed;
            records.push(r);
        }
        records.push(record("ghz:3", "base", "stochastic", 1, "dense", 2.0));
        // Median of (1.0, 10.0, 1.2) is 1.2 < 2.0, so stochastic wins.
        let table = summarize_best_worst(&records, "cost_improvement").unwrap();
        assert_eq!(table.counts["stochastic|1|dense"].0, 1.0);
        assert_eq!(table.counts["sabre|1|dense"].1, 1.0);
    }
}
