//! Evaluated partitions and the per-evaluation log shared by the initial
//! partitioners.

use std::cmp::Ordering;
use std::io::Write;

use crate::error::Result;
use crate::hypergraph::metrics::{cut_of, imbalance_of};
use crate::hypergraph::partition::Partition;
use crate::hypergraph::{Hypergraph, Weight};

/// A partition with its cached cut, imbalance and balance status.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub partition: Partition,
    pub cut: Weight,
    pub imbalance: f64,
    pub feasible: bool,
}

impl Solution {
    pub fn evaluate(hg: &Hypergraph, partition: Partition, epsilon: f64) -> Self {
        let cut = cut_of(hg, partition.blocks());
        let imbalance = imbalance_of(hg, &partition);
        let feasible = partition.is_feasible(hg, epsilon);
        Self {
            partition,
            cut,
            imbalance,
            feasible,
        }
    }

    /// Feasible before infeasible, then lexicographic (cut, imbalance);
    /// smaller is better.
    pub fn cmp_quality(&self, other: &Self) -> Ordering {
        compare(
            (self.feasible, self.cut, self.imbalance),
            (other.feasible, other.cut, other.imbalance),
        )
    }
}

/// `(feasible, cut, imbalance)` keys.
pub(crate) type Key = (bool, Weight, f64);

pub(crate) fn compare(a: Key, b: Key) -> Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2))
}

/// One row of an evaluation log.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub index: usize,
    /// Pool member name, or `ea` for offspring.
    pub source: &'static str,
    pub cut: Weight,
    pub imbalance: f64,
    /// Mutation rate of the producing individual (offspring only).
    pub mutation_rate: Option<f64>,
    pub feasible: bool,
    pub best_so_far: Weight,
}

/// Tracks the running best while appending log rows.
#[derive(Debug, Default)]
pub(crate) struct LogBuilder {
    pub records: Vec<EvalRecord>,
    best: Option<Key>,
}

impl LogBuilder {
    pub fn from_records(records: Vec<EvalRecord>) -> Self {
        let best = records
            .iter()
            .map(|r| (r.feasible, r.cut, r.imbalance))
            .min_by(|a, b| compare(*a, *b));
        Self { records, best }
    }

    pub fn push(&mut self, source: &'static str, sol: &Solution, mutation_rate: Option<f64>) {
        let key = (sol.feasible, sol.cut, sol.imbalance);
        if self.best.map_or(true, |b| compare(key, b) == Ordering::Less) {
            self.best = Some(key);
        }
        let (cut, imbalance) = (sol.cut, sol.imbalance);
        self.records.push(EvalRecord {
            index: self.records.len(),
            source,
            cut,
            imbalance,
            mutation_rate,
            feasible: sol.feasible,
            best_so_far: self.best.map_or(cut, |b| b.1),
        });
    }
}

/// Comma-separated log with a header row.
pub fn write_eval_log<W: Write>(log: &[EvalRecord], mut out: W) -> Result<()> {
    writeln!(out, "evaluation,source,cut,imbalance,mutation_rate,best_so_far")?;
    for r in log {
        let rate = r.mutation_rate.map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.index, r.source, r.cut, r.imbalance, rate, r.best_so_far
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::h4;

    fn sol(cut: Weight, imbalance: f64, feasible: bool) -> Solution {
        let hg = h4();
        Solution {
            partition: Partition::uniform(&hg, 2, 0),
            cut,
            imbalance,
            feasible,
        }
    }

    #[test]
    fn running_best_is_lexicographic() {
        let mut log = LogBuilder::default();
        log.push("a", &sol(5, 0.0, true), None);
        log.push("b", &sol(3, 0.1, true), None);
        log.push("c", &sol(4, 0.0, true), Some(0.5));
        log.push("d", &sol(3, 0.0, true), None);
        log.push("e", &sol(1, 0.5, false), None);
        let best: Vec<_> = log.records.iter().map(|r| r.best_so_far).collect();
        assert_eq!(best, vec![5, 3, 3, 3, 3]);
        let mut buf = Vec::new();
        write_eval_log(&log.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert_eq!(text.lines().nth(3).unwrap(), "2,c,4,0,0.5,3");
    }

    #[test]
    fn infeasible_ranks_last() {
        assert!(sol(9, 0.0, true).cmp_quality(&sol(1, 0.0, false)).is_lt());
        assert!(sol(2, 0.1, true).cmp_quality(&sol(2, 0.0, true)).is_gt());
    }
}
