//! Min-sum-diameters: exact solvers, the net search and the full pipeline.

mod exact;
mod refine;
mod search;
mod structure;

pub use exact::exact_msd;
pub use refine::{refine, refine_applicable, TaggedClustering};
pub use structure::{bound_neighborhoods, enforce_min_cluster_distance, first_unpacked, make_packed, neighborhood};

use crate::decompose::{decompose, threshold_components, Objective};
use crate::error::{check_eps, check_k, SolveError};
use crate::local::Local;
use crate::metric::{pow2_ceil, Cluster, MetricSpace, PartitionSolution, PointId};
use crate::net::{build_hierarchy, NetError, NetView};
use crate::pipeline::{
    budget_ladder, plan_tasks, radius_ladder, run_ladders, tabulate, zero_partition, ComponentSummary, CALIBRATION,
};
use crate::tables::merge_components;
use crate::variants::ClusterConstraint;
use refine::Entry;
use search::{witness_cap, MsdSearch};

fn strip_tags(mut sol: PartitionSolution) -> PartitionSolution {
    for c in &mut sol.clusters {
        c.tag = None;
    }
    sol
}

/// Cheapest partition of the net reachable from `uncovered` and the tagged
/// clusters already built, within the budget, cluster count and outlier
/// allowance (counted in original points).
#[allow(clippy::too_many_arguments)]
pub fn msd_subroutine(
    space: &MetricSpace,
    view: &NetView,
    uncovered: &[PointId],
    built: &TaggedClustering,
    radii: &[f64],
    budget: f64,
    clusters: usize,
    outliers: usize,
) -> Result<Option<PartitionSolution>, NetError> {
    let local = Local::new(space, view.net().to_vec(), view.tau_sizes());
    let index = |p: PointId| view.net().binary_search(&p).map_err(|_| NetError::NotNetPoint(p));
    let set_of = |m: &[PointId]| -> Result<_, NetError> {
        let mut s = local.empty_set();
        for &p in m {
            s.insert(index(p)?);
        }
        Ok(s)
    };
    let y = set_of(uncovered)?;
    let mut entries = Vec::new();
    for (m, tag) in &built.entries {
        entries.push(Entry::new(&local, set_of(m)?, *tag, false));
    }
    for &o in &built.outliers {
        entries.push(Entry::new(&local, set_of(&[o])?, 0.0, true));
    }
    let mut search = MsdSearch::new(local, radii, 4);
    Ok(search.run(y, entries, budget, clusters, outliers, &mut |_| Some(())).map(|f| f.net))
}

/// Optimal partition into at most `k` clusters with up to `g` outliers.
pub fn exact_msd_outliers(space: &MetricSpace, k: usize, g: usize) -> Result<PartitionSolution, SolveError> {
    check_k(k)?;
    let n = space.len();
    let ids: Vec<PointId> = (0..n).collect();
    if n <= k + g {
        return Ok(zero_partition(&ids, k));
    }
    let mut best: Option<(f64, PartitionSolution)> = None;
    for q in 1..=k.min(n) {
        let local = Local::unit(space, ids.clone());
        let radii = local.distinct_distances();
        let full = local.full_set();
        let mut search = MsdSearch::new(local, &radii, witness_cap(q));
        search.below(best.as_ref().map_or(f64::INFINITY, |b| b.0));
        if let Some(found) = search.run(full, vec![], f64::INFINITY, q, g, &mut |_| Some(())) {
            if best.as_ref().is_none_or(|b| found.cost < b.0) {
                best = Some((found.cost, found.net));
            }
        }
    }
    let (_, sol) = best.expect("every point may form its own cluster or be dropped");
    Ok(strip_tags(sol))
}

#[derive(Debug, Clone)]
pub struct MsdReport {
    pub solution: PartitionSolution,
    pub cost: f64,
    pub components: Vec<ComponentSummary>,
}

/// (1+ε)-approximate min-sum-diameters with up to `g` outliers.
pub fn approximate_msd(
    space: &MetricSpace,
    k: usize,
    eps: f64,
    g: usize,
    constraint: Option<&dyn ClusterConstraint>,
) -> Result<PartitionSolution, SolveError> {
    msd_report(space, k, eps, g, constraint).map(|r| r.solution)
}

fn accepted(constraint: Option<&dyn ClusterConstraint>, sol: &PartitionSolution) -> bool {
    constraint.is_none_or(|c| sol.clusters.iter().all(|cl| c.accepts(&cl.members)))
}

pub fn msd_report(
    space: &MetricSpace,
    k: usize,
    eps: f64,
    g: usize,
    constraint: Option<&dyn ClusterConstraint>,
) -> Result<MsdReport, SolveError> {
    check_k(k)?;
    check_eps(eps)?;
    let n = space.len();
    let all: Vec<PointId> = (0..n).collect();
    let dec = decompose(space, k, g, Objective::Diameters);
    if dec.degenerate {
        let solution = zero_partition(&all, k);
        if accepted(constraint, &solution) {
            let summary = ComponentSummary {
                points: all,
                clusters: solution.clusters.len(),
                outliers: solution.outliers.len(),
                cost: 0.0,
            };
            return Ok(MsdReport { solution, cost: 0.0, components: vec![summary] });
        }
    }

    let mut comps = dec.components.clone();
    let mut lower = dec.lower;
    let mut upper = dec.upper();
    if let Some(c) = constraint {
        // A constrained optimum may join plain components; link at least as
        // far as a known feasible cost so that cannot happen.
        let feasible = if dec.components.len() <= k && dec.components.iter().all(|m| c.accepts(m)) {
            dec.components.iter().map(|m| space.diam_unchecked(m)).sum()
        } else if c.accepts(&all) {
            space.diameter()
        } else if g == 0 {
            return Err(SolveError::Infeasible("the cluster constraint rejects the whole space".into()));
        } else {
            space.diameter()
        };
        comps = threshold_components(space, dec.threshold.max(feasible));
        if dec.degenerate {
            lower = space.min_distance();
        }
        upper = upper.max(feasible);
    }
    let max_diameter = comps.iter().map(|m| space.diam_unchecked(m)).fold(0.0, f64::max);
    let top = if g == 0 && constraint.is_none() {
        2.0 * pow2_ceil(upper.min(k as f64 * max_diameter))
    } else {
        2.0 * pow2_ceil(upper)
    };
    let budgets = budget_ladder(lower, top);
    let eps_int = eps / CALIBRATION;
    let hierarchies: Vec<_> = comps.iter().map(|c| build_hierarchy(space, c)).collect();
    let tasks = plan_tasks(&comps, k, g, &budgets);
    let results = run_ladders(&tasks, |t, incumbent| {
        let view = hierarchies[t.comp].net_for_budget(space, t.budget, k, eps_int);
        let radii = radius_ladder(view.spacing, pow2_ceil(max_diameter.min(t.budget)));
        let local = Local::new(space, view.net().to_vec(), view.tau_sizes());
        let y = local.full_set();
        let mut search = MsdSearch::new(local, &radii, witness_cap(t.clusters));
        // Without merging, the extended cost is never below the net cost, so
        // net leaves at or above the incumbent cannot improve this entry.
        if constraint.is_none() {
            search.below(incumbent);
        }
        let mut failure = None;
        let found = search.run(y, vec![], 3.0 * t.budget, t.clusters, t.outliers, &mut |net| {
            let ext = match view.extend_partition(net) {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(e);
                    return None;
                }
            };
            if accepted(constraint, &ext) {
                return Some(ext);
            }
            let merged = enforce_min_cluster_distance(space, &ext.member_lists(), view.pad);
            let merged = PartitionSolution {
                clusters: merged.into_iter().map(Cluster::new).collect(),
                outliers: ext.outliers.clone(),
            };
            accepted(constraint, &merged).then_some(merged)
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        Ok(found.map(|f| (f.payload.cost(space, 1.0), strip_tags(f.payload))))
    })?;
    let tabled = tabulate(&comps, &tasks, results, g, |pts| PartitionSolution { clusters: vec![], outliers: pts.to_vec() });
    let plan = merge_components(&tabled.tables, k, g)?;
    let parts = tabled.picked(&plan);
    let mut solution = PartitionSolution { clusters: vec![], outliers: vec![] };
    let mut components = Vec::new();
    for (points, part) in comps.iter().zip(parts) {
        components.push(ComponentSummary {
            points: points.clone(),
            clusters: part.clusters.len(),
            outliers: part.outliers.len(),
            cost: part.cost(space, 1.0),
        });
        solution.clusters.extend(part.clusters);
        solution.outliers.extend(part.outliers);
    }
    solution.outliers.sort_unstable();
    let cost = solution.cost(space, 1.0);
    Ok(MsdReport { solution, cost, components })
}
