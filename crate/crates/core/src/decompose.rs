//! Splitting a space into independent components with a cost bracket.

use crate::metric::{MetricSpace, PointId};

/// Which objective the bracket is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Radii,
    Diameters,
}

/// Power-of-two factor applied to β on top of 64m².
pub const BRACKET_WIDENING: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Components in order of their smallest point; members ascending.
    pub components: Vec<Vec<PointId>>,
    /// Lower bound on the optimum.
    pub lower: f64,
    /// `lower * beta` bounds the optimum from above.
    pub beta: f64,
    /// Largest component diameter.
    pub max_diameter: f64,
    /// Component-diameter factor.
    pub psi: f64,
    /// Single-linkage threshold used for the components.
    pub threshold: f64,
    /// Set when n ≤ k + g, where the optimum is 0.
    pub degenerate: bool,
}

impl Decomposition {
    pub fn upper(&self) -> f64 {
        self.lower * self.beta
    }
}

/// Farthest-first traversal from point 0; ties go to the lowest id.
/// Returns the centers and the covering radius.
pub fn gonzalez_kcenter(space: &MetricSpace, m: usize) -> (Vec<PointId>, f64) {
    let n = space.len();
    let m = m.clamp(1, n);
    let mut centers = vec![0];
    let mut near: Vec<f64> = (0..n).map(|p| space.distance(0, p)).collect();
    while centers.len() < m {
        let mut far = 0;
        for p in 1..n {
            if near[p] > near[far] {
                far = p;
            }
        }
        if near[far] == 0.0 {
            break;
        }
        centers.push(far);
        for p in 0..n {
            near[p] = near[p].min(space.distance(far, p));
        }
    }
    let radius = near.iter().copied().fold(0.0, f64::max);
    (centers, radius)
}

/// Connected components of the graph joining points at distance ≤ threshold.
pub fn threshold_components(space: &MetricSpace, threshold: f64) -> Vec<Vec<PointId>> {
    let n = space.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if space.distance(a, b) <= threshold {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut comps: Vec<Vec<PointId>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for p in 0..n {
        let r = find(&mut parent, p);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(p);
    }
    comps
}

/// Components that must be clustered when the smallest components are
/// dropped as outliers, within a budget of `g` points.
fn clustered_after_drop(comps: &[Vec<PointId>], g: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| (comps[i].len(), i));
    let mut used = 0;
    let mut dropped = vec![false; comps.len()];
    for &i in &order {
        if used + comps[i].len() <= g {
            used += comps[i].len();
            dropped[i] = true;
        } else {
            break;
        }
    }
    (0..comps.len()).filter(|&i| !dropped[i]).collect()
}

fn cover_cost(space: &MetricSpace, comp: &[PointId], objective: Objective) -> f64 {
    match objective {
        Objective::Diameters => space.diam_unchecked(comp),
        Objective::Radii => comp
            .iter()
            .map(|&c| comp.iter().map(|&p| space.distance(c, p)).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Decomposes the space for `k` clusters and `g` outliers.
pub fn decompose(space: &MetricSpace, k: usize, g: usize, objective: Objective) -> Decomposition {
    let n = space.len();
    let m = k + g;
    let psi = 64.0 * (m * m) as f64;
    if n <= m {
        return Decomposition {
            components: (0..n).map(|p| vec![p]).collect(),
            lower: 0.0,
            beta: psi * BRACKET_WIDENING,
            max_diameter: 0.0,
            psi,
            threshold: 0.0,
            degenerate: true,
        };
    }
    let (_, r_g) = gonzalez_kcenter(space, m);
    let factor = match objective {
        Objective::Radii => 1.0,
        Objective::Diameters => 2.0,
    };
    let mut threshold = factor * m as f64 * r_g;

    // With outliers the Gonzalez radius says nothing about how far apart the
    // clustered points are, so find the smallest linkage threshold at which
    // the components fit in k clusters plus g dropped points, and raise the
    // threshold to the cost of the resulting solution.
    let mut certified = None;
    if g > 0 {
        let mut cuts = vec![0.0];
        for a in 0..n {
            for b in a + 1..n {
                cuts.push(space.distance(a, b));
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let fits = |t: f64| clustered_after_drop(&threshold_components(space, t), g).len() <= k;
        let (mut lo, mut hi) = (0, cuts.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if fits(cuts[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let link = cuts[lo];
        let comps = threshold_components(space, link);
        let feasible: f64 = clustered_after_drop(&comps, g).iter().map(|&i| cover_cost(space, &comps[i], objective)).sum();
        let gonzalez_lower = match objective {
            Objective::Radii => r_g / 2.0,
            Objective::Diameters => r_g,
        };
        threshold = threshold.max(feasible);
        certified = Some((link.max(gonzalez_lower), feasible));
    }

    let components = threshold_components(space, threshold);
    let diams: Vec<f64> = components.iter().map(|c| space.diam_unchecked(c)).collect();
    let max_diameter = diams.iter().copied().fold(0.0, f64::max);
    let mut lower = diams.iter().sum::<f64>() / psi;
    let mut upper = lower * psi * BRACKET_WIDENING;
    if let Some((lb, ub)) = certified {
        lower = lower.min(lb);
        upper = upper.max(ub);
    }
    Decomposition {
        components,
        lower,
        beta: upper / lower,
        max_diameter,
        psi,
        threshold,
        degenerate: false,
    }
}
