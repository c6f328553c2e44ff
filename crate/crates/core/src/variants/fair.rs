//! Min-sum-radii with a cap on the number of centers of each color.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{hopcroft_karp, FairSpec};
use crate::decompose::{decompose, threshold_components, Objective};
use crate::error::{check_eps, SolveError};
use crate::metric::{pow2_ceil, Ball, BallSolution, MetricSpace, PointId};
use crate::msr::MsrSearch;
use crate::net::{build_hierarchy, NetError, NetView};
use crate::pipeline::{budget_ladder, radius_ladder, ComponentSummary, CALIBRATION};

/// Recenters every ball of a net solution on a point of its preimage set so
/// that color `j` hosts at most `budgets[j]` centers. The new center is the
/// lowest id of the matched color, and the radius grows by the view's pad.
/// `Ok(None)` when no such assignment exists.
pub fn bipartite_center_matching(
    net_sol: &BallSolution,
    view: &NetView,
    fair: &FairSpec,
    budgets: &[usize],
) -> Result<Option<BallSolution>, NetError> {
    let mut slot_color = Vec::new();
    for (color, &b) in budgets.iter().enumerate() {
        slot_color.extend(std::iter::repeat_n(color, b));
    }
    let mut adj = Vec::with_capacity(net_sol.balls.len());
    let mut hosts: Vec<BTreeMap<usize, PointId>> = Vec::with_capacity(net_sol.balls.len());
    for ball in &net_sol.balls {
        let tau = view.tau(ball.center).ok_or(NetError::NotNetPoint(ball.center))?;
        let mut lowest = BTreeMap::new();
        for &p in tau {
            lowest.entry(fair.colors[p]).or_insert(p);
        }
        adj.push((0..slot_color.len()).filter(|&s| lowest.contains_key(&slot_color[s])).collect::<Vec<_>>());
        hosts.push(lowest);
    }
    let matched = hopcroft_karp(&adj, slot_color.len());
    let mut balls = Vec::with_capacity(net_sol.balls.len());
    for ((ball, slot), host) in net_sol.balls.iter().zip(matched).zip(&hosts) {
        let Some(slot) = slot else { return Ok(None) };
        balls.push(Ball { center: host[&slot_color[slot]], radius: ball.radius + view.pad });
    }
    Ok(Some(BallSolution { balls, outliers: net_sol.outliers.clone() }))
}

/// Grows recentered balls so each covers the preimages its original covered.
fn extend_recentered(space: &MetricSpace, view: &NetView, original: &BallSolution, moved: &BallSolution) -> BallSolution {
    let balls = original
        .balls
        .iter()
        .zip(&moved.balls)
        .map(|(o, m)| {
            let mut radius = m.radius + view.pad;
            for &u in view.net() {
                if space.distance(o.center, u) <= o.radius {
                    for &p in view.tau(u).expect("net point") {
                        radius = radius.max(space.distance(m.center, p));
                    }
                }
            }
            Ball { center: m.center, radius }
        })
        .collect();
    BallSolution { balls, outliers: vec![] }
}

fn usage(fair: &FairSpec, sol: &BallSolution) -> Vec<usize> {
    let mut used = vec![0; fair.caps.len()];
    for b in &sol.balls {
        used[fair.colors[b.center]] += 1;
    }
    used
}

/// Every per-color budget vector with `1 ≤ Σ ≤ limit` and entries bounded by
/// `bounds`, in lexicographic order.
fn budget_vectors(bounds: &[usize], limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; bounds.len()];
    fn go(i: usize, left: usize, bounds: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == bounds.len() {
            if cur.iter().sum::<usize>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=bounds[i].min(left) {
            cur[i] = v;
            go(i + 1, left - v, bounds, cur, out);
        }
        cur[i] = 0;
    }
    go(0, limit, bounds, &mut cur, &mut out);
    out
}

/// Cheap fair solution over the given components: one ball per component,
/// centered on a color matched to it, falling back to a single ball.
fn fair_upper_bound(space: &MetricSpace, fair: &FairSpec, comps: &[Vec<PointId>]) -> f64 {
    let ecc = |c: PointId, pts: &[PointId]| pts.iter().map(|&p| space.distance(c, p)).fold(0.0, f64::max);
    let mut slot_color = Vec::new();
    for (color, &cap) in fair.caps.iter().enumerate() {
        slot_color.extend(std::iter::repeat_n(color, cap));
    }
    let adj: Vec<Vec<usize>> = comps
        .iter()
        .map(|c| (0..slot_color.len()).filter(|&s| c.iter().any(|&p| fair.colors[p] == slot_color[s])).collect())
        .collect();
    let matched = hopcroft_karp(&adj, slot_color.len());
    let mut total = 0.0;
    let mut ok = true;
    for (c, m) in comps.iter().zip(&matched) {
        match m {
            Some(s) => {
                let color = slot_color[*s];
                total += c
                    .iter()
                    .filter(|&&p| fair.colors[p] == color)
                    .map(|&x| ecc(x, c))
                    .fold(f64::INFINITY, f64::min);
            }
            None => ok = false,
        }
    }
    let all: Vec<PointId> = (0..space.len()).collect();
    let single = all
        .iter()
        .filter(|&&p| fair.caps[fair.colors[p]] > 0)
        .map(|&x| ecc(x, &all))
        .fold(f64::INFINITY, f64::min);
    if ok {
        total.min(single)
    } else {
        single
    }
}

#[derive(Debug, Clone)]
pub struct FairReport {
    pub solution: BallSolution,
    pub cost: f64,
    pub components: Vec<ComponentSummary>,
}

/// (1+ε)-approximate fair min-sum-radii.
pub fn fair_msr_approx(space: &MetricSpace, fair: &FairSpec, eps: f64) -> Result<BallSolution, SolveError> {
    fair_msr_report(space, fair, eps).map(|r| r.solution)
}

pub fn fair_msr_report(space: &MetricSpace, fair: &FairSpec, eps: f64) -> Result<FairReport, SolveError> {
    check_eps(eps)?;
    fair.validate(space.len())?;
    let n = space.len();
    let k = fair.k();
    if fair.colors.iter().all(|&c| fair.caps[c] == 0) {
        return Err(SolveError::Infeasible("no point has a color with a positive cap".into()));
    }
    let zero_ok = usage(
        fair,
        &BallSolution { balls: (0..n).map(|center| Ball { center, radius: 0.0 }).collect(), outliers: vec![] },
    )
    .iter()
    .zip(&fair.caps)
    .all(|(u, c)| u <= c);
    if zero_ok {
        let solution = BallSolution { balls: (0..n).map(|center| Ball { center, radius: 0.0 }).collect(), outliers: vec![] };
        let summary = ComponentSummary { points: (0..n).collect(), clusters: n, outliers: 0, cost: 0.0 };
        return Ok(FairReport { solution, cost: 0.0, components: vec![summary] });
    }

    // Caps can force a ball across the plain components, so link at least as
    // far as the cost of some fair solution.
    let dec = decompose(space, k, 0, Objective::Radii);
    let upper_fair = fair_upper_bound(space, fair, &dec.components);
    let comps = threshold_components(space, dec.threshold.max(upper_fair));
    let lower = if dec.degenerate { space.min_distance() } else { dec.lower };
    let upper = dec.upper().max(upper_fair);
    let max_diameter = comps.iter().map(|c| space.diam_unchecked(c)).fold(0.0, f64::max);
    let budgets = budget_ladder(lower, upper);
    let eps_int = eps / CALIBRATION;

    struct FairTask {
        comp: usize,
        budgets: Vec<usize>,
        t: f64,
    }
    let mut tasks = Vec::new();
    for (ci, pts) in comps.iter().enumerate() {
        let bounds: Vec<usize> = (0..fair.caps.len())
            .map(|c| fair.caps[c].min(pts.iter().filter(|&&p| fair.colors[p] == c).count()))
            .collect();
        for b in budget_vectors(&bounds, k.min(pts.len())) {
            for &t in &budgets {
                tasks.push(FairTask { comp: ci, budgets: b.clone(), t });
            }
        }
    }
    let hierarchies: Vec<_> = comps.iter().map(|c| build_hierarchy(space, c)).collect();
    let results: Vec<Result<Option<(f64, BallSolution)>, SolveError>> = tasks
        .par_iter()
        .map(|task| {
            let view = hierarchies[task.comp].net_for_budget(space, task.t, k, eps_int);
            let radii = radius_ladder(view.spacing, pow2_ceil(max_diameter.min(task.t)));
            let mut sets: Vec<Vec<usize>> = Vec::new();
            let class = view
                .net()
                .iter()
                .map(|&x| {
                    let mut cs: Vec<usize> = view.tau(x).unwrap_or(&[]).iter().map(|&p| fair.colors[p]).collect();
                    cs.sort_unstable();
                    cs.dedup();
                    sets.iter().position(|s| *s == cs).unwrap_or_else(|| {
                        sets.push(cs);
                        sets.len() - 1
                    })
                })
                .collect();
            let mut search = MsrSearch::new(space, &view, &radii, 1.0).with_classes(class);
            let y = search.local.full_set();
            let q = task.budgets.iter().sum();
            let mut failure = None;
            let found = search.run(y, 4.0 * task.t, q, 0, &mut |net| {
                let plain = net.to_balls();
                match bipartite_center_matching(&plain, &view, fair, &task.budgets) {
                    Ok(Some(moved)) => Some(extend_recentered(space, &view, &plain, &moved)),
                    Ok(None) => None,
                    Err(e) => {
                        failure = Some(e);
                        None
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e.into());
            }
            Ok(found.map(|f| (f.payload.cost(1.0), f.payload)))
        })
        .collect();

    let mut tables: Vec<BTreeMap<Vec<usize>, (f64, BallSolution)>> = vec![BTreeMap::new(); comps.len()];
    for (task, res) in tasks.iter().zip(results) {
        let Some((cost, sol)) = res? else { continue };
        let key = usage(fair, &sol);
        let slot = &mut tables[task.comp];
        if slot.get(&key).is_none_or(|(c, _)| cost < *c) {
            slot.insert(key, (cost, sol));
        }
    }

    let mut acc: BTreeMap<Vec<usize>, (f64, Vec<Vec<usize>>)> = BTreeMap::new();
    acc.insert(vec![0; fair.caps.len()], (0.0, vec![]));
    for (ci, table) in tables.iter().enumerate() {
        let mut next: BTreeMap<Vec<usize>, (f64, Vec<Vec<usize>>)> = BTreeMap::new();
        for (used, (cost, picks)) in &acc {
            for (add, (c2, _)) in table {
                let sum: Vec<usize> = used.iter().zip(add).map(|(a, b)| a + b).collect();
                if sum.iter().zip(&fair.caps).any(|(s, c)| s > c) {
                    continue;
                }
                let total = cost + c2;
                if next.get(&sum).is_none_or(|(c, _)| total < *c) {
                    let mut p = picks.clone();
                    p.push(add.clone());
                    next.insert(sum, (total, p));
                }
            }
        }
        if next.is_empty() {
            return Err(SolveError::Infeasible(format!("component {ci} cannot be covered within the color caps")));
        }
        acc = next;
    }
    let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
    for (cost, picks) in acc.into_values() {
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, picks));
        }
    }
    let (_, picks) = best.expect("accumulator starts non-empty");
    let mut solution = BallSolution { balls: vec![], outliers: vec![] };
    let mut components = Vec::new();
    for ((pts, table), key) in comps.iter().zip(&tables).zip(&picks) {
        let part = &table[key].1;
        components.push(ComponentSummary {
            points: pts.clone(),
            clusters: part.balls.len(),
            outliers: 0,
            cost: part.cost(1.0),
        });
        solution.balls.extend(part.balls.iter().cloned());
    }
    let cost = solution.cost(1.0);
    Ok(FairReport { solution, cost, components })
}
