//! Min-sum-radii: exhaustive solver, the net search and the full pipeline.

use std::collections::HashMap;
use std::rc::Rc;

use crate::bits::Bits;

use crate::decompose::{decompose, Objective};
use crate::error::{check_alpha, check_eps, check_k, SolveError};
use crate::local::Local;
use crate::metric::{pow2_ceil, powered, Ball, BallSolution, MetricSpace, PointId};
use crate::net::{build_hierarchy, NetError, NetView};
use crate::pipeline::{
    budget_ladder, plan_tasks, radius_ladder, run_tasks, tabulate, zero_balls, ComponentSummary, CALIBRATION,
};
use crate::tables::merge_components;

/// A ball chosen by the net search, with the budget it consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct NetBall {
    pub center: PointId,
    pub radius: f64,
    pub spent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsrNetSolution {
    pub balls: Vec<NetBall>,
    /// Net points declared outliers.
    pub outliers: Vec<PointId>,
    /// Σ radius^α over the balls.
    pub cost: f64,
}

impl MsrNetSolution {
    pub fn to_balls(&self) -> BallSolution {
        BallSolution {
            balls: self.balls.iter().map(|b| Ball { center: b.center, radius: b.radius }).collect(),
            outliers: self.outliers.clone(),
        }
    }

    pub fn spent(&self) -> f64 {
        self.balls.iter().map(|b| b.spent).sum()
    }
}

/// Starting point of a net search.
#[derive(Debug, Clone)]
pub struct MsrSearchState {
    /// Net points still to cover.
    pub uncovered: Vec<PointId>,
    /// Allowed budget steps, ascending.
    pub radii: Vec<f64>,
    pub budget: f64,
    pub clusters: usize,
    /// Outlier allowance, counted in original points.
    pub outliers: usize,
}

impl MsrSearchState {
    pub fn initial(view: &NetView, radii: Vec<f64>, budget: f64, clusters: usize, outliers: usize) -> Self {
        MsrSearchState { uncovered: view.net().to_vec(), radii, budget, clusters, outliers }
    }
}

/// Cheapest cover of the uncovered net points, or `None` if the budget,
/// cluster count and outlier allowance admit none.
pub fn msr_subroutine(
    space: &MetricSpace,
    view: &NetView,
    state: &MsrSearchState,
    alpha: f64,
) -> Result<Option<MsrNetSolution>, NetError> {
    let mut search = MsrSearch::new(space, view, &state.radii, alpha);
    let mut y = search.local.empty_set();
    for &p in &state.uncovered {
        let i = view.net().binary_search(&p).map_err(|_| NetError::NotNetPoint(p))?;
        y.insert(i);
    }
    Ok(search
        .run(y, state.budget, state.clusters, state.outliers, &mut |_| Some(()))
        .map(|found| found.net))
}

struct Cand {
    center: usize,
    radius: f64,
    spent: f64,
    price: f64,
    cover: Bits,
}

pub(crate) struct Found<P> {
    pub net: MsrNetSolution,
    pub payload: P,
}

pub(crate) struct MsrSearch<'a> {
    pub(crate) local: Local,
    radii: &'a [f64],
    alpha: f64,
    cands: Vec<Option<Rc<Vec<Cand>>>>,
    /// Centers in different classes are never interchangeable for the judge.
    class: Vec<usize>,
}

struct Walk<'j, P> {
    /// (probe, candidate index) per chosen ball.
    path: Vec<(usize, usize)>,
    dropped: Vec<usize>,
    best: Option<Found<P>>,
    judge: &'j mut dyn FnMut(&MsrNetSolution) -> Option<P>,
}

impl<'a> MsrSearch<'a> {
    pub(crate) fn new(space: &MetricSpace, view: &NetView, radii: &'a [f64], alpha: f64) -> Self {
        let local = Local::new(space, view.net().to_vec(), view.tau_sizes());
        let n = local.len();
        MsrSearch { local, radii, alpha, cands: (0..n).map(|_| None).collect(), class: vec![0; n] }
    }

    /// Sets a class per net point, in net order.
    pub(crate) fn with_classes(mut self, class: Vec<usize>) -> Self {
        assert_eq!(class.len(), self.local.len());
        self.class = class;
        self
    }

    /// Balls that may cover `z`: centered at a point near `z` with a radius
    /// equal to some distance from that center. Each (center, radius) is kept
    /// once, at the smallest budget step that produces it.
    fn candidates(&mut self, z: usize) -> Rc<Vec<Cand>> {
        if let Some(c) = &self.cands[z] {
            return c.clone();
        }
        let l = &self.local;
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &step in self.radii {
            let reach = 2.0 * step;
            for x in 0..l.len() {
                if l.d(z, x) > reach {
                    continue;
                }
                for y in 0..l.len() {
                    if l.d(z, y) > reach {
                        continue;
                    }
                    let radius = l.d(x, y);
                    if l.d(x, z) <= radius && seen.insert((x, radius.to_bits())) {
                        out.push(Cand {
                            center: x,
                            radius,
                            spent: step,
                            price: powered(radius, self.alpha),
                            cover: l.ball(x, radius),
                        });
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.cands[z] = Some(rc.clone());
        rc
    }

    pub(crate) fn run<P>(
        &mut self,
        y: Bits,
        budget: f64,
        clusters: usize,
        outliers: usize,
        judge: &mut dyn FnMut(&MsrNetSolution) -> Option<P>,
    ) -> Option<Found<P>> {
        let mut walk = Walk { path: Vec::new(), dropped: Vec::new(), best: None, judge };
        self.go(&mut walk, y, budget, clusters, outliers, 0.0);
        walk.best
    }

    fn go<P>(&mut self, w: &mut Walk<'_, P>, y: Bits, budget: f64, q: usize, outl: usize, cost: f64) {
        let Some(z) = y.ones().next() else {
            self.leaf(w, cost);
            return;
        };
        if q > 0 {
            let cands = self.candidates(z);
            // Children reached with the same remaining set and center class:
            // only a cheaper ball can lead anywhere new, since later ones
            // spend at least as much.
            let mut tried: HashMap<(Bits, usize), f64> = HashMap::new();
            for (ci, c) in cands.iter().enumerate() {
                if c.spent > budget {
                    continue;
                }
                let next_cost = cost + c.price;
                if w.best.as_ref().is_some_and(|b| next_cost >= b.net.cost) {
                    continue;
                }
                let mut rest = y.clone();
                rest.difference_with(&c.cover);
                let key = (rest, self.class[c.center]);
                match tried.get(&key) {
                    Some(&p) if p <= c.price => continue,
                    _ => {
                        tried.insert(key.clone(), c.price);
                    }
                }
                let rest = key.0;
                w.path.push((z, ci));
                self.go(w, rest, budget - c.spent, q - 1, outl, next_cost);
                w.path.pop();
            }
        }
        let weight = self.local.weight[z];
        if weight <= outl {
            let mut rest = y;
            rest.set(z, false);
            w.dropped.push(z);
            self.go(w, rest, budget, q, outl - weight, cost);
            w.dropped.pop();
        }
    }

    fn leaf<P>(&mut self, w: &mut Walk<'_, P>, cost: f64) {
        if w.best.as_ref().is_some_and(|b| cost >= b.net.cost) {
            return;
        }
        let mut balls = Vec::new();
        for &(z, ci) in &w.path {
            let c = &self.cands[z].as_ref().expect("candidates cached for probe")[ci];
            balls.push(NetBall { center: self.local.ids[c.center], radius: c.radius, spent: c.spent });
        }
        let mut outliers: Vec<PointId> = w.dropped.iter().map(|&i| self.local.ids[i]).collect();
        outliers.sort_unstable();
        let net = MsrNetSolution { balls, outliers, cost };
        if let Some(payload) = (w.judge)(&net) {
            w.best = Some(Found { net, payload });
        }
    }
}

/// Merged approximate solution with its per-component breakdown.
#[derive(Debug, Clone)]
pub struct MsrReport {
    pub solution: BallSolution,
    pub cost: f64,
    pub components: Vec<ComponentSummary>,
}

/// (1+ε)-approximate min-sum-radii with up to `g` outliers.
pub fn approximate_msr(space: &MetricSpace, k: usize, eps: f64, g: usize) -> Result<BallSolution, SolveError> {
    msr_report(space, k, eps, g, 1.0).map(|r| r.solution)
}

/// Full pipeline for Σ radius^α with up to `g` outliers.
pub fn msr_report(space: &MetricSpace, k: usize, eps: f64, g: usize, alpha: f64) -> Result<MsrReport, SolveError> {
    check_k(k)?;
    check_eps(eps)?;
    check_alpha(alpha)?;
    let n = space.len();
    let all: Vec<PointId> = (0..n).collect();
    let dec = decompose(space, k, g, Objective::Radii);
    if dec.degenerate {
        let solution = zero_balls(&all, k);
        let summary = ComponentSummary {
            points: all,
            clusters: solution.balls.len(),
            outliers: solution.outliers.len(),
            cost: 0.0,
        };
        return Ok(MsrReport { solution, cost: 0.0, components: vec![summary] });
    }
    let eps_int = eps / alpha / CALIBRATION;
    let top = if alpha > 1.0 { k as f64 * dec.upper() } else { dec.upper() };
    let budgets = budget_ladder(dec.lower, top);
    let hierarchies: Vec<_> = dec.components.iter().map(|c| build_hierarchy(space, c)).collect();
    let tasks = plan_tasks(&dec.components, k, g, &budgets);
    let results = run_tasks(&tasks, |t| {
        let view = hierarchies[t.comp].net_for_budget(space, t.budget, k, eps_int);
        let radii = radius_ladder(view.spacing, pow2_ceil(dec.max_diameter.min(t.budget)));
        let mut search = MsrSearch::new(space, &view, &radii, alpha);
        let y = search.local.full_set();
        let Some(found) = search.run(y, 4.0 * t.budget, t.clusters, t.outliers, &mut |_| Some(())) else {
            return Ok(None);
        };
        let ext = view.extend_balls(space, &found.net.to_balls())?;
        if ext.outliers.len() > t.outliers {
            return Ok(None);
        }
        Ok(Some((ext.cost(alpha), ext)))
    })?;
    let tabled = tabulate(&dec.components, &tasks, results, g, |pts| BallSolution {
        balls: vec![],
        outliers: pts.to_vec(),
    });
    let plan = merge_components(&tabled.tables, k, g)?;
    let parts = tabled.picked(&plan);
    let mut solution = BallSolution { balls: vec![], outliers: vec![] };
    let mut components = Vec::new();
    for ((points, part), &(q, _)) in dec.components.iter().zip(parts).zip(&plan.picks) {
        let cost = part.cost(alpha);
        components.push(ComponentSummary { points: points.clone(), clusters: q, outliers: part.outliers.len(), cost });
        solution.balls.extend(part.balls);
        solution.outliers.extend(part.outliers);
    }
    solution.outliers.sort_unstable();
    let cost = solution.cost(alpha);
    Ok(MsrReport { solution, cost, components })
}

/// Optimal Σ radius^α with up to `g` outliers by exhaustive search over center
/// sets and radii. Ties go to the smallest (cost, centers, radii).
pub fn exact_msr(space: &MetricSpace, k: usize, g: usize, alpha: f64) -> Result<BallSolution, SolveError> {
    check_k(k)?;
    check_alpha(alpha)?;
    let n = space.len();
    let all: Vec<PointId> = (0..n).collect();
    if n <= k + g {
        return Ok(zero_balls(&all, k));
    }
    let options: Vec<Vec<f64>> = (0..n)
        .map(|c| {
            let mut v: Vec<f64> = (0..n).map(|y| space.distance(c, y)).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let mut ex = ExactMsr {
        space,
        g,
        alpha,
        options,
        covered: vec![0; n],
        centers: Vec::new(),
        radii: Vec::new(),
        best: None,
    };
    for size in 1..=k.min(n) {
        ex.subsets(0, size, 0.0);
    }
    let (_, centers, radii) = ex.best.expect("a single ball always covers the space");
    let balls: Vec<Ball> = centers.iter().zip(&radii).map(|(&center, &radius)| Ball { center, radius }).collect();
    let mut sol = BallSolution { balls, outliers: vec![] };
    sol.outliers = sol.uncovered(space);
    Ok(sol)
}

struct ExactMsr<'a> {
    space: &'a MetricSpace,
    g: usize,
    alpha: f64,
    options: Vec<Vec<f64>>,
    covered: Vec<u16>,
    centers: Vec<PointId>,
    radii: Vec<f64>,
    best: Option<(f64, Vec<PointId>, Vec<f64>)>,
}

impl ExactMsr<'_> {
    fn improves(&self, cost: f64, centers: &[PointId], radii: &[f64]) -> bool {
        let Some((bc, bcs, brs)) = &self.best else { return true };
        match cost.total_cmp(bc) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => match centers.cmp(bcs.as_slice()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    radii.iter().zip(brs).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne())
                        == Some(std::cmp::Ordering::Less)
                }
            },
        }
    }

    fn pruned(&self, cost: f64) -> bool {
        self.best.as_ref().is_some_and(|b| cost > b.0)
    }

    /// Chooses `left` more centers above `from`; radii are fixed as we go.
    fn subsets(&mut self, from: PointId, left: usize, cost: f64) {
        let n = self.space.len();
        if self.pruned(cost) {
            return;
        }
        if left == 1 {
            for c in from..n {
                self.last_ball(c, cost);
            }
            return;
        }
        for c in from..n {
            if n - c < left {
                break;
            }
            for ri in 0..self.options[c].len() {
                let r = self.options[c][ri];
                let next = cost + powered(r, self.alpha);
                if self.pruned(next) {
                    break;
                }
                self.mark(c, r, true);
                self.centers.push(c);
                self.radii.push(r);
                self.subsets(c + 1, left - 1, next);
                self.centers.pop();
                self.radii.pop();
                self.mark(c, r, false);
            }
        }
    }

    fn mark(&mut self, c: PointId, r: f64, on: bool) {
        for p in 0..self.space.len() {
            if self.space.distance(c, p) <= r {
                if on {
                    self.covered[p] += 1;
                } else {
                    self.covered[p] -= 1;
                }
            }
        }
    }

    /// The last center takes the smallest radius leaving at most g points out.
    fn last_ball(&mut self, c: PointId, cost: f64) {
        let mut dists: Vec<f64> = (0..self.space.len())
            .filter(|&p| self.covered[p] == 0)
            .map(|p| self.space.distance(c, p))
            .collect();
        dists.sort_by(f64::total_cmp);
        let need = dists.len().saturating_sub(self.g);
        let r = if need == 0 { 0.0 } else { dists[need - 1] };
        let total = cost + powered(r, self.alpha);
        self.centers.push(c);
        self.radii.push(r);
        if self.improves(total, &self.centers, &self.radii) {
            self.best = Some((total, self.centers.clone(), self.radii.clone()));
        }
        self.centers.pop();
        self.radii.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::line;
    use crate::oracles::oracle_msr;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exact_examples() {
        let s = line(&[0.0, 1.0, 5.0]);
        assert_eq!(exact_msr(&s, 2, 0, 1.0).unwrap().cost(1.0), 1.0);
        assert_eq!(exact_msr(&s, 3, 0, 1.0).unwrap().cost(1.0), 0.0);
        let out = exact_msr(&s, 1, 1, 1.0).unwrap();
        assert_eq!(out.cost(1.0), 1.0);
        assert_eq!(out.outliers, vec![2]);
        assert_eq!(exact_msr(&s, 2, 0, 2.0).unwrap().cost(2.0), 1.0);
    }

    #[test]
    fn exact_matches_oracle_on_random_lines() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(2..8);
            let pts: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0).collect();
            let s = line(&pts);
            for k in 1..=3 {
                for g in 0..=2 {
                    let a = exact_msr(&s, k, g, 1.0).unwrap();
                    let o = oracle_msr(&s, k, g, 1.0, None).unwrap().unwrap();
                    assert!((a.cost(1.0) - o.cost).abs() <= 1e-9 * o.cost.max(1.0));
                    assert!(a.outliers.len() <= g && a.balls.len() <= k);
                }
            }
        }
    }

    #[test]
    fn subroutine_examples() {
        let s = line(&[0.0, 1.0, 10.0, 11.0]);
        let h = build_hierarchy(&s, &[0, 1, 2, 3]);
        let view = h.view_at(&s, 8.0, 0.25);
        assert!(view.is_identity());
        let one = MsrSearchState { uncovered: vec![2], radii: vec![1.0], budget: 4.0, clusters: 1, outliers: 0 };
        let sol = msr_subroutine(&s, &view, &one, 1.0).unwrap().unwrap();
        assert_eq!(sol.balls, vec![NetBall { center: 2, radius: 0.0, spent: 1.0 }]);
        let none = MsrSearchState { clusters: 0, ..one.clone() };
        assert!(msr_subroutine(&s, &view, &none, 1.0).unwrap().is_none());
        let broke = MsrSearchState { budget: 0.5, ..one };
        assert!(msr_subroutine(&s, &view, &broke, 1.0).unwrap().is_none());
        let full = MsrSearchState::initial(&view, vec![1.0, 2.0], 32.0, 2, 0);
        let sol = msr_subroutine(&s, &view, &full, 1.0).unwrap().unwrap();
        assert_eq!(sol.cost, 2.0);
        assert!(sol.spent() <= 32.0);
        let bad = MsrSearchState { uncovered: vec![9], ..full };
        assert!(msr_subroutine(&s, &view, &bad, 1.0).is_err());
    }

    #[test]
    fn approximate_examples() {
        let s = line(&[0.0, 1.0, 10.0, 11.0]);
        let c = approximate_msr(&s, 2, 0.5, 0).unwrap().cost(1.0);
        assert!((2.0..=3.0).contains(&c), "{c}");
        assert_eq!(approximate_msr(&s, 4, 0.5, 0).unwrap().cost(1.0), 0.0);
        assert_eq!(approximate_msr(&line(&[3.0]), 1, 0.5, 0).unwrap().cost(1.0), 0.0);
        assert!(approximate_msr(&s, 0, 0.5, 0).is_err());
        assert!(approximate_msr(&s, 1, 1.5, 0).is_err());
    }

    #[test]
    fn approximate_with_outliers_on_random_lines() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..15 {
            let n = rng.gen_range(4..9);
            let pts: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0).collect();
            let s = line(&pts);
            for (k, g) in [(1, 0), (2, 0), (2, 1), (1, 2)] {
                let opt = exact_msr(&s, k, g, 1.0).unwrap().cost(1.0);
                let sol = approximate_msr(&s, k, 0.5, g).unwrap();
                assert!(sol.balls.len() <= k && sol.outliers.len() <= g);
                assert!(sol.uncovered(&s).iter().all(|p| sol.outliers.contains(p)));
                assert!(sol.cost(1.0) <= 1.5 * opt + 1e-9, "{} vs {opt}", sol.cost(1.0));
            }
        }
    }
}
