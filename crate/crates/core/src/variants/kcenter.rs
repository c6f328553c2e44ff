//! k-center: smallest common radius for k balls covering every point.

use crate::bits::Bits;

use crate::decompose::gonzalez_kcenter;
use crate::error::{check_eps, check_k, SolveError};
use crate::local::Local;
use crate::metric::{Ball, BallSolution, MetricSpace, PointId};
use crate::net::build_hierarchy;
use crate::pipeline::zero_balls;

/// Assigns every point to its nearest center (lowest index on ties) and sets
/// each radius to the farthest assigned point.
fn tighten(space: &MetricSpace, centers: &[PointId]) -> BallSolution {
    let mut radius = vec![0.0f64; centers.len()];
    for p in 0..space.len() {
        let mut best = 0;
        for j in 1..centers.len() {
            if space.distance(centers[j], p) < space.distance(centers[best], p) {
                best = j;
            }
        }
        radius[best] = radius[best].max(space.distance(centers[best], p));
    }
    BallSolution {
        balls: centers.iter().zip(radius).map(|(&center, radius)| Ball { center, radius }).collect(),
        outliers: vec![],
    }
}

/// Depth-first search for at most `left` balls of radius `reach` centered on
/// `hosts` that cover `uncovered`. The lowest uncovered point is served first.
fn cover(all: &Local, hosts: &[usize], reach: f64, uncovered: &Bits, left: usize, picked: &mut Vec<usize>) -> bool {
    let Some(p) = uncovered.ones().next() else { return true };
    if left == 0 {
        return false;
    }
    for &h in hosts {
        if all.d(p, h) > reach {
            continue;
        }
        let mut rest = uncovered.clone();
        rest.difference_with(&all.ball(h, reach));
        picked.push(h);
        if cover(all, hosts, reach, &rest, left - 1, picked) {
            return true;
        }
        picked.pop();
    }
    false
}

/// (1+ε)-approximate k-center; never worse than farthest-first traversal.
pub fn k_center_approx(space: &MetricSpace, k: usize, eps: f64) -> Result<BallSolution, SolveError> {
    check_k(k)?;
    check_eps(eps)?;
    let n = space.len();
    let all_ids: Vec<PointId> = (0..n).collect();
    if n <= k {
        return Ok(zero_balls(&all_ids, k));
    }
    let (gcenters, rstar) = gonzalez_kcenter(space, k);
    let greedy = tighten(space, &gcenters);
    let step = eps / 3.0;
    let steps = (4f64.ln() / (1.0 + step).ln()).ceil() as i32;
    let all = Local::unit(space, all_ids.clone());
    let h = build_hierarchy(space, &all_ids);
    let full = all.full_set();
    let mut best: Option<BallSolution> = None;
    for s in 0..=steps {
        let r = rstar * (1.0 + step).powi(-s);
        // Net fine enough that snapping a center to it costs at most step·r.
        let fine = 2f64.powi((step * r / 2.0).log2().floor() as i32);
        let view = h.view_at(space, r, fine);
        let hosts: Vec<usize> = view.net().to_vec();
        let mut picked = Vec::new();
        if cover(&all, &hosts, r + view.pad, &full, k, &mut picked) {
            best = Some(tighten(space, &picked));
        } else {
            break;
        }
    }
    Ok(match best {
        Some(b) if b.max_radius() <= greedy.max_radius() => b,
        _ => greedy,
    })
}

/// Optimal k-center by trying every pairwise distance as the radius.
pub fn exact_kcenter(space: &MetricSpace, k: usize) -> Result<BallSolution, SolveError> {
    check_k(k)?;
    let n = space.len();
    let ids: Vec<PointId> = (0..n).collect();
    if n <= k {
        return Ok(zero_balls(&ids, k));
    }
    let all = Local::unit(space, ids.clone());
    let full = all.full_set();
    for r in all.distinct_distances() {
        let mut picked = Vec::new();
        if cover(&all, &ids, r, &full, k, &mut picked) {
            return Ok(tighten(space, &picked));
        }
    }
    unreachable!("the diameter always admits one ball")
}
