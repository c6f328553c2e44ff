//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minsum::decompose::{decompose, Objective};
use minsum::generate::{
    gen_grid_tiling, gen_random_euclidean, gen_three_coloring_msd, named_graph, three_colorable, GridTilingSpec,
    GRAPH_NAMES,
};
use minsum::instance::{Instance, InstanceFile, Mode, Variant};
use minsum::msd::{
    bound_neighborhoods, exact_msd, exact_msd_outliers, make_packed, neighborhood, refine, refine_applicable,
    TaggedClustering,
};
use minsum::msr::exact_msr;
use minsum::net::build_hierarchy;
use minsum::oracles::{oracle_msd, oracle_msr, MSD_MAX_POINTS};
use minsum::solve::{solve, SolveRequest};
use minsum::variants::FairSpec;
use minsum::verify::check;
use minsum::{MetricSpace, PointId, SolveError};

type Outcome = Result<String, String>;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn within(cost: f64, reference: f64, eps: f64) -> bool {
    cost <= (1.0 + eps) * reference * (1.0 + 1e-9) + 1e-12
}

fn euclid(n: usize, dim: usize, seed: u64) -> MetricSpace {
    gen_random_euclidean(n, dim, seed).unwrap().load().unwrap().space
}

/// The seeded family shared by the exact-solver criteria.
fn small_family() -> Vec<(MetricSpace, usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..200)
        .map(|i| {
            let n = rng.gen_range(4..=8);
            let dim = rng.gen_range(1..=2);
            let k = rng.gen_range(1..=3);
            (euclid(n, dim, 1000 + i), k, 1000 + i)
        })
        .collect()
}

fn exact_msd_matches() -> Outcome {
    for (s, k, seed) in small_family() {
        let got = exact_msd(&s, k, None).map_err(|e| e.to_string())?.cost(&s, 1.0);
        let want = oracle_msd(&s, k, 0, 1.0, None).unwrap().unwrap().cost;
        if !close(got, want) {
            return Err(format!("seed {seed}, k = {k}: exact {got} vs oracle {want}"));
        }
    }
    Ok("200 instances".into())
}

fn exact_msd_outliers_matches() -> Outcome {
    for (s, k, seed) in small_family() {
        for g in 0..=2 {
            let got = exact_msd_outliers(&s, k, g).map_err(|e| e.to_string())?;
            if got.outliers.len() > g {
                return Err(format!("seed {seed}: {} outliers > {g}", got.outliers.len()));
            }
            let got = got.cost(&s, 1.0);
            let want = oracle_msd(&s, k, g, 1.0, None).unwrap().unwrap().cost;
            if !close(got, want) {
                return Err(format!("seed {seed}, k = {k}, g = {g}: exact {got} vs oracle {want}"));
            }
        }
    }
    Ok("600 runs".into())
}

fn exact_msr_matches() -> Outcome {
    for (s, k, seed) in small_family() {
        for alpha in [1.0, 2.0] {
            for g in 0..=2 {
                let sol = exact_msr(&s, k, g, alpha).map_err(|e| e.to_string())?;
                if sol.uncovered(&s).len() > g {
                    return Err(format!("seed {seed}: too many uncovered points"));
                }
                let want = oracle_msr(&s, k, g, alpha, None).unwrap().unwrap().cost;
                if !close(sol.cost(alpha), want) {
                    return Err(format!(
                        "seed {seed}, k = {k}, g = {g}, alpha = {alpha}: exact {} vs oracle {want}",
                        sol.cost(alpha)
                    ));
                }
            }
        }
    }
    Ok("1200 runs".into())
}

fn instance(file: InstanceFile) -> Instance {
    file.load().unwrap()
}

fn request(variant: Variant, mode: Mode, k: usize, g: usize, alpha: f64, eps: f64) -> SolveRequest {
    SolveRequest { variant, mode, k, g, alpha, epsilon: Some(eps), fair: false, balance: false }
}

/// Solves, validates the document and returns its cost.
fn solved_cost(inst: &Instance, req: &SolveRequest) -> Result<f64, String> {
    let doc = solve(inst, req).map_err(|e| format!("{:?} {:?}: {e}", req.variant, req.mode))?;
    let problems = check(inst, &doc);
    if !problems.is_empty() {
        return Err(format!("{:?} {:?} produced an invalid solution: {problems:?}", req.variant, req.mode));
    }
    Ok(doc.cost)
}

/// Optimal min-sum-diameters cost, by the oracle where it applies and by the
/// exact solvers beyond its size limit.
fn msd_reference(s: &MetricSpace, k: usize, g: usize) -> f64 {
    if s.len() <= MSD_MAX_POINTS {
        oracle_msd(s, k, g, 1.0, None).unwrap().unwrap().cost
    } else if g == 0 {
        exact_msd(s, k, None).unwrap().cost(s, 1.0)
    } else {
        exact_msd_outliers(s, k, g).unwrap().cost(s, 1.0)
    }
}

fn approx_family(seed: u64) -> Vec<(InstanceFile, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|i| {
            let n = rng.gen_range(6..=12);
            let dim = rng.gen_range(1..=2);
            let k = rng.gen_range(2..=3);
            (gen_random_euclidean(n, dim, seed * 10_000 + i).unwrap(), k)
        })
        .collect()
}

fn fair_file(mut file: InstanceFile, k: usize, rng: &mut ChaCha8Rng) -> InstanceFile {
    let n = file.points.as_ref().unwrap().len();
    file.colors = Some((0..n).map(|_| rng.gen_range(0..2)).collect());
    file.caps = Some(vec![k - k / 2, k / 2]);
    file
}

fn approximations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut runs = 0;
    for (file, k) in approx_family(4) {
        let inst = instance(file.clone());
        let s = &inst.space;
        let msr_opt = oracle_msr(s, k, 0, 1.0, None).unwrap().unwrap().cost;
        let alpha_opt = oracle_msr(s, k, 0, 2.0, None).unwrap().unwrap().cost;
        let msd_opt = msd_reference(s, k, 0);
        let kc_opt = minsum::oracles::oracle_kcenter(s, k).unwrap().cost;
        let fair_inst = instance(fair_file(file, k, &mut rng));
        let fair = fair_inst.fair.clone().unwrap();
        let fair_opt = oracle_msr(s, k, 0, 1.0, Some(&fair)).unwrap().map(|o| o.cost);
        for eps in [0.5, 0.25] {
            let cases = [
                (Variant::Msr, 1.0, msr_opt),
                (Variant::AlphaMsr, 2.0, alpha_opt),
                (Variant::Msd, 1.0, msd_opt),
                (Variant::KCenter, 1.0, kc_opt),
            ];
            for (variant, alpha, opt) in cases {
                let cost = solved_cost(&inst, &request(variant, Mode::Approx, k, 0, alpha, eps))?;
                runs += 1;
                if !within(cost, opt, eps) {
                    return Err(format!("{variant:?}, n = {}, k = {k}, eps = {eps}: {cost} vs optimum {opt}", s.len()));
                }
            }
            let mut req = request(Variant::Msr, Mode::Approx, k, 0, 1.0, eps);
            req.fair = true;
            runs += 1;
            match (fair_opt, solve(&fair_inst, &req)) {
                (Some(opt), Ok(doc)) => {
                    let problems = check(&fair_inst, &doc);
                    if !problems.is_empty() {
                        return Err(format!("fair produced an invalid solution: {problems:?}"));
                    }
                    let cost = doc.cost;
                    if !within(cost, opt, eps) {
                        return Err(format!("fair, n = {}, k = {k}, eps = {eps}: {cost} vs optimum {opt}", s.len()));
                    }
                }
                (None, Err(SolveError::Infeasible(_))) => {}
                (opt, got) => return Err(format!("fair: oracle {opt:?} but solver {:?}", got.map(|d| d.cost))),
            }
        }
    }
    Ok(format!("{runs} runs"))
}

fn outlier_approximations() -> Outcome {
    let mut runs = 0;
    for (file, k) in approx_family(5) {
        let inst = instance(file);
        let s = &inst.space;
        for g in 1..=2 {
            let msr_opt = oracle_msr(s, k, g, 1.0, None).unwrap().unwrap().cost;
            let msd_opt = msd_reference(s, k, g);
            for eps in [0.5, 0.25] {
                for (variant, opt) in [(Variant::Msr, msr_opt), (Variant::Msd, msd_opt)] {
                    let cost = solved_cost(&inst, &request(variant, Mode::Approx, k, g, 1.0, eps))?;
                    runs += 1;
                    if !within(cost, opt, eps) {
                        return Err(format!(
                            "{variant:?}, n = {}, k = {k}, g = {g}, eps = {eps}: {cost} vs optimum {opt}",
                            s.len()
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{runs} runs"))
}

fn net_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut views = 0;
    for i in 0..50 {
        let n = rng.gen_range(2..=40);
        let s = euclid(n, rng.gen_range(1..=3), 6000 + i);
        let mut subset: Vec<PointId> = (0..n).collect();
        subset.shuffle(&mut rng);
        subset.truncate(rng.gen_range(1..=n));
        let h = build_hierarchy(&s, &subset);
        let levels = h.levels();
        let mut all = subset.clone();
        all.sort_unstable();
        if levels[0].members != all {
            return Err(format!("instance {i}: bottom level is not the whole subset"));
        }
        for (l, level) in levels.iter().enumerate() {
            for (a, &u) in level.members.iter().enumerate() {
                for &v in &level.members[a + 1..] {
                    if l > 0 && s.distance(u, v) < level.scale {
                        return Err(format!("instance {i}, level {l}: {u}, {v} closer than {}", level.scale));
                    }
                }
            }
            if l == 0 {
                continue;
            }
            for &p in &levels[l - 1].members {
                let Some(&q) = level.parent.get(&p) else {
                    return Err(format!("instance {i}, level {l}: {p} has no parent"));
                };
                if !level.members.contains(&q) || s.distance(p, q) > level.scale {
                    return Err(format!("instance {i}, level {l}: parent of {p} is {q}, too far"));
                }
            }
            if !level.members.iter().all(|m| levels[l - 1].members.contains(m)) {
                return Err(format!("instance {i}, level {l}: not nested"));
            }
        }
        let spacings: Vec<f64> = (-3..=levels.len() as i32 + 1).map(|e| h.base_scale() * 2f64.powi(e)).collect();
        for &spacing in &spacings {
            let view = h.view_at(&s, 1.0, spacing);
            views += 1;
            let mut seen: Vec<PointId> = Vec::new();
            for &x in view.net() {
                let tau = view.tau(x).unwrap();
                if tau.is_empty() || !tau.contains(&x) {
                    return Err(format!("instance {i}: preimage of {x} misses it"));
                }
                seen.extend_from_slice(tau);
            }
            seen.sort_unstable();
            if seen != all {
                return Err(format!("instance {i}, spacing {spacing}: preimages do not partition the component"));
            }
        }
    }
    Ok(format!("50 hierarchies, {views} views"))
}

fn decomposition_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut skipped) = (0, 0);
    for i in 0..100 {
        let n = rng.gen_range(4..=10);
        let s = euclid(n, rng.gen_range(1..=2), 7000 + i);
        let k = rng.gen_range(1..=3);
        let g = rng.gen_range(0..=2);
        for objective in [Objective::Radii, Objective::Diameters] {
            let d = decompose(&s, k, g, objective);
            let (opt, clusters): (f64, Vec<Vec<PointId>>) = match objective {
                Objective::Radii => {
                    let o = oracle_msr(&s, k, g, 1.0, None).unwrap().unwrap();
                    let clusters = o
                        .solution
                        .balls
                        .iter()
                        .map(|b| {
                            (0..n)
                                .filter(|&p| !o.solution.outliers.contains(&p) && s.distance(b.center, p) <= b.radius)
                                .collect()
                        })
                        .collect();
                    (o.cost, clusters)
                }
                Objective::Diameters => {
                    let o = oracle_msd(&s, k, g, 1.0, None).unwrap().unwrap();
                    (o.cost, o.solution.member_lists())
                }
            };
            let mut all: Vec<PointId> = d.components.iter().flatten().copied().collect();
            all.sort_unstable();
            if all != (0..n).collect::<Vec<_>>() {
                return Err(format!("instance {i}: components do not partition the points"));
            }
            if opt == 0.0 {
                if !d.degenerate {
                    return Err(format!("instance {i}: zero optimum not short-circuited"));
                }
                skipped += 1;
                continue;
            }
            checked += 1;
            let comp_of = |p: PointId| d.components.iter().position(|c| c.contains(&p)).unwrap();
            for c in &clusters {
                if let Some(&first) = c.first() {
                    if c.iter().any(|&p| comp_of(p) != comp_of(first)) {
                        return Err(format!("instance {i}, {objective:?}: an optimal cluster spans components"));
                    }
                }
            }
            for c in &d.components {
                if diam(&s, c) > d.psi * opt * (1.0 + 1e-12) {
                    return Err(format!("instance {i}, {objective:?}: component diameter above ψ·opt"));
                }
            }
            if !(d.lower <= opt * (1.0 + 1e-12) && opt <= d.upper() * (1.0 + 1e-12)) {
                return Err(format!("instance {i}, {objective:?}: opt {opt} outside [{}, {}]", d.lower, d.upper()));
            }
        }
    }
    Ok(format!("{checked} checked, {skipped} zero-cost short-circuited"))
}

fn random_partition(n: usize, parts: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<PointId>> {
    let mut out = vec![Vec::new(); parts];
    for p in 0..n {
        out[rng.gen_range(0..parts)].push(p);
    }
    out.retain(|c| !c.is_empty());
    out
}

fn diam(s: &MetricSpace, set: &[PointId]) -> f64 {
    s.subset_diameter(set).unwrap()
}

fn sum_diam(s: &MetricSpace, sol: &[Vec<PointId>]) -> f64 {
    sol.iter().map(|c| diam(s, c)).sum()
}

fn refine_and_packing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let n = rng.gen_range(3..=12);
        let s = euclid(n, rng.gen_range(1..=2), 8000 + i);
        let entries = (0..rng.gen_range(1..=5))
            .map(|_| {
                let mut set: Vec<PointId> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                if set.is_empty() {
                    set.push(rng.gen_range(0..n));
                }
                let d = diam(&s, &set);
                let tag = if rng.gen_bool(0.3) { d * 0.5 } else { minsum::metric::round_up_pow2(d.max(1e-3)).unwrap() };
                (set, tag)
            })
            .collect();
        let outliers = (0..n).filter(|_| rng.gen_bool(0.1)).collect();
        let tc = TaggedClustering { entries, outliers };
        let out = refine(&s, &tc);
        if refine_applicable(&s, &out) {
            return Err(format!("refine case {i}: exit guard still holds"));
        }
    }
    for i in 0..300 {
        let n = rng.gen_range(2..=14);
        let s = euclid(n, rng.gen_range(1..=2), 8500 + i);
        let parts = rng.gen_range(1..=8);
        let sol = random_partition(n, parts, &mut rng);
        let packed = make_packed(&s, &sol);
        let mut all: Vec<PointId> = packed.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(format!("packing case {i}: points lost"));
        }
        let m = packed.len();
        for mask in 1u32..(1 << m) {
            let size = mask.count_ones();
            if !(2..=5).contains(&size) {
                continue;
            }
            let group: Vec<Vec<PointId>> = (0..m).filter(|j| mask & (1 << j) != 0).map(|j| packed[j].clone()).collect();
            let union: Vec<PointId> = group.iter().flatten().copied().collect();
            if diam(&s, &union) <= sum_diam(&s, &group) {
                return Err(format!("packing case {i}: group {mask:#b} is not packed"));
            }
        }
        let bounded = bound_neighborhoods(&s, &sol);
        if (0..bounded.len()).any(|c| neighborhood(&s, &bounded, c).len() > 4) {
            return Err(format!("neighbourhood case {i}: a neighbourhood above 4 remains"));
        }
        if sum_diam(&s, &bounded) > sum_diam(&s, &sol) * (1.0 + 1e-12) {
            return Err(format!("neighbourhood case {i}: cost increased"));
        }
    }
    Ok("1000 refinements, 300 packings".into())
}

fn grid_tiling_case(spec: &GridTilingSpec) -> Result<(), String> {
    let (file, feasible) = gen_grid_tiling(spec).map_err(|e| e.to_string())?;
    let s = file.load().map_err(|e| e.to_string())?.space;
    let cost = exact_msr(&s, spec.k, 0, 1.0).map_err(|e| e.to_string())?.cost(1.0);
    let top = 2f64.powi(spec.k as i32) - 1.0;
    if feasible != (cost <= top) || (feasible && cost != top) {
        return Err(format!("{:?}: tiling feasible = {feasible}, cost {cost}", spec.sets));
    }
    Ok(())
}

fn grid_tiling() -> Outcome {
    let pairs: Vec<(usize, usize)> = vec![(1, 1), (1, 2), (2, 1), (2, 2)];
    let subsets: Vec<Vec<(usize, usize)>> = (1u32..16)
        .map(|m| (0..4).filter(|b| m & (1 << b) != 0).map(|b| pairs[b]).collect())
        .collect();
    let (mut yes, mut no) = (0, 0);
    let mut tally = |spec: &GridTilingSpec| -> Result<(), String> {
        grid_tiling_case(spec)?;
        if spec.feasible() {
            yes += 1;
        } else {
            no += 1;
        }
        Ok(())
    };
    tally(&GridTilingSpec::new(2, 1, vec![vec![vec![(1, 1)]; 2]; 2]))?;
    for a in &subsets {
        for b in &subsets {
            for c in &subsets {
                for d in &subsets {
                    let spec = GridTilingSpec::new(2, 2, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
                    tally(&spec)?;
                }
            }
        }
    }
    for seed in 0..20 {
        tally(&GridTilingSpec::random(2, 3, 0.5, 9000 + seed))?;
    }
    Ok(format!("{} specs ({yes} solvable, {no} not)", yes + no))
}

fn three_coloring() -> Outcome {
    let mut lines = Vec::new();
    for name in GRAPH_NAMES {
        let (n, edges) = named_graph(name).unwrap();
        // One extra point wherever the oracle has room for it.
        let k = if n < MSD_MAX_POINTS { 4 } else { 3 };
        let s = gen_three_coloring_msd(&edges, n, k).unwrap().load().unwrap().space;
        let cost = oracle_msd(&s, k, 0, 2.0, None).map_err(|e| e.to_string())?.unwrap().cost;
        let colorable = three_colorable(&edges, n);
        if colorable != (cost <= 3.0) {
            return Err(format!("{name}: colorable = {colorable}, cost {cost}"));
        }
        lines.push(format!("{name}:{}", if colorable { "yes" } else { "no" }));
    }
    Ok(lines.join(" "))
}

fn determinism() -> Outcome {
    let pool = |t: usize| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
    let (one, four) = (pool(1), pool(4));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut docs = 0;
    for i in 0..6 {
        let n = rng.gen_range(6..=10);
        let mut file = gen_random_euclidean(n, 2, 11_000 + i).unwrap();
        file.colors = Some((0..n).map(|p| p % 2).collect());
        file.caps = Some(vec![1, 1]);
        file.balance = Some(minsum::variants::BalanceSpec { coloring: (0..n).map(|p| (p / 2) % 2).collect(), b: 0.5 });
        let inst = instance(file);
        let mut reqs = Vec::new();
        for mode in [Mode::Exact, Mode::Approx, Mode::Oracle] {
            for variant in [Variant::Msr, Variant::Msd, Variant::AlphaMsr, Variant::KCenter] {
                let alpha = if variant == Variant::AlphaMsr { 2.0 } else { 1.0 };
                reqs.push(request(variant, mode, 2, 0, alpha, 0.5));
                if variant != Variant::KCenter {
                    reqs.push(request(variant, mode, 2, 1, alpha, 0.5));
                }
            }
            let mut fair = request(Variant::Msr, mode, 2, 0, 1.0, 0.5);
            fair.fair = true;
            if mode != Mode::Exact {
                reqs.push(fair);
            }
            let mut bal = request(Variant::Msd, mode, 2, 0, 1.0, 0.5);
            bal.balance = true;
            reqs.push(bal);
        }
        for req in &reqs {
            let run = |p: &rayon::ThreadPool| p.install(|| solve(&inst, req).map(|d| d.to_json()).map_err(|e| e.to_string()));
            let (a, b, c) = (run(&one), run(&four), run(&four));
            if a != b || b != c {
                return Err(format!("instance {i}, {req:?}: output depends on the run"));
            }
            docs += 1;
        }
    }
    Ok(format!("{docs} requests, widths 1 and 4"))
}

fn fair_feasibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..60 {
        let n = rng.gen_range(4..=10);
        let k = rng.gen_range(1..=3);
        let mut file = gen_random_euclidean(n, 2, 12_000 + i).unwrap();
        let colors = rng.gen_range(2..=3);
        file.colors = Some((0..n).map(|_| rng.gen_range(0..colors)).collect());
        let mut caps = vec![0; colors];
        for _ in 0..k {
            caps[rng.gen_range(0..colors)] += 1;
        }
        if i % 5 == 0 {
            // Only colors nobody has may host centers.
            file.colors = Some(vec![0; n]);
            caps = vec![0; colors];
            caps[colors - 1] = k;
        }
        file.caps = Some(caps);
        let inst = instance(file);
        let fair: FairSpec = inst.fair.clone().unwrap();
        let opt = oracle_msr(&inst.space, k, 0, 1.0, Some(&fair)).unwrap();
        let mut req = request(Variant::Msr, Mode::Approx, k, 0, 1.0, 0.5);
        req.fair = true;
        match (opt, solve(&inst, &req)) {
            (Some(_), Ok(doc)) => {
                let problems = check(&inst, &doc);
                if !problems.is_empty() {
                    return Err(format!("instance {i}: {problems:?}"));
                }
                feasible += 1;
            }
            (None, Err(SolveError::Infeasible(_))) => infeasible += 1,
            (o, got) => {
                return Err(format!(
                    "instance {i}: oracle {:?}, solver {:?}\n{}",
                    o.map(|o| o.cost),
                    got.map(|d| d.cost),
                    serde_json::to_string(&inst.file).unwrap()
                ))
            }
        }
    }
    Ok(format!("{feasible} within caps, {infeasible} reported infeasible"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1 exact MSD equals oracle", exact_msd_matches),
        ("2 exact MSD with outliers equals oracle", exact_msd_outliers_matches),
        ("3 exact MSR / alpha-MSR / outliers equal oracle", exact_msr_matches),
        ("4 approximation guarantees", approximations),
        ("5 outlier approximations", outlier_approximations),
        ("6 net invariants", net_invariants),
        ("7 decomposition properties", decomposition_properties),
        ("8 refine, packing and neighbourhood bounds", refine_and_packing),
        ("9 grid tiling equivalence", grid_tiling),
        ("10 three-coloring gadget", three_coloring),
        ("11 determinism", determinism),
        ("12 fair feasibility", fair_feasibility),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(&format!("{o} "))) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
