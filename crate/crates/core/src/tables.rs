//! Per-component cost tables and their merge across components.

use std::collections::BTreeMap;

use crate::error::SolveError;

/// Best cost found for one component, keyed by (clusters, outliers) used.
#[derive(Debug, Clone, Default)]
pub struct CostTable {
    entries: BTreeMap<(usize, usize), f64>,
}

impl CostTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a cost, keeping the smaller one on collision.
    pub fn insert(&mut self, clusters: usize, outliers: usize, cost: f64) {
        let slot = self.entries.entry((clusters, outliers)).or_insert(f64::INFINITY);
        if cost < *slot {
            *slot = cost;
        }
    }

    pub fn get(&self, clusters: usize, outliers: usize) -> Option<f64> {
        self.entries.get(&(clusters, outliers)).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Cheapest entry usable with at most `clusters` clusters and `outliers`
    /// outliers. Non-increasing in both arguments.
    pub fn best_within(&self, clusters: usize, outliers: usize) -> Option<f64> {
        self.entries()
            .filter(|&((q, g), _)| q <= clusters && g <= outliers)
            .map(|(_, c)| c)
            .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.min(c))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergePlan {
    pub cost: f64,
    /// Chosen (clusters, outliers) entry per component.
    pub picks: Vec<(usize, usize)>,
}

/// Splits `k` clusters and `g` outliers among the components to minimize the
/// summed cost. Ties keep the first split in ascending key order.
pub fn merge_components(tables: &[CostTable], k: usize, g: usize) -> Result<MergePlan, SolveError> {
    let mut acc: BTreeMap<(usize, usize), (f64, Vec<(usize, usize)>)> = BTreeMap::new();
    acc.insert((0, 0), (0.0, Vec::new()));
    for (i, table) in tables.iter().enumerate() {
        let mut next: BTreeMap<(usize, usize), (f64, Vec<(usize, usize)>)> = BTreeMap::new();
        for (&(q1, g1), (c1, picks)) in &acc {
            for ((q2, g2), c2) in table.entries() {
                let key = (q1 + q2, g1 + g2);
                if key.0 > k || key.1 > g {
                    continue;
                }
                let cost = c1 + c2;
                if next.get(&key).is_none_or(|(c, _)| cost < *c) {
                    let mut p = picks.clone();
                    p.push((q2, g2));
                    next.insert(key, (cost, p));
                }
            }
        }
        if next.is_empty() {
            return Err(SolveError::Infeasible(format!("component {i} has no solution within the budgets")));
        }
        acc = next;
    }
    let mut best: Option<MergePlan> = None;
    for (cost, picks) in acc.into_values() {
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(MergePlan { cost, picks });
        }
    }
    Ok(best.expect("accumulator starts non-empty"))
}
