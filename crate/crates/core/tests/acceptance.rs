//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each criterion also has a wall-clock budget; exceeding it fails
//! the criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use gmt::bench::{scaling, suboptimality};
use gmt::graph::{connection_radius, Edge, NeighborGraph, RadiusParams};
use gmt::planner::{corridor_bound_check, dijkstra_oracle, fmt_plan, gmt_plan, with_workers, GmtParams, PlanInput};
use gmt::problem::{scene, ProblemFile, SCENES, SCHEMA};
use gmt::sampling::{sample_free, SampleSource};
use gmt::simulator::bundled_campaign;
use gmt::steering::SteeringModel;
use gmt::{Aabb, GoalRegion, ObstacleSet, State};

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "1 suboptimality on rectangles-2d", budget: secs(300), run: suboptimality_table },
        Criterion { name: "2 corridor bound", budget: secs(120), run: corridor_bound },
        Criterion { name: "3 singleton groups equal FMT*", budget: secs(60), run: singleton_equals_fmt },
        Criterion { name: "4 parallel determinism", budget: secs(120), run: parallel_determinism },
        Criterion { name: "5 oracle dominance", budget: secs(120), run: oracle_dominance },
        Criterion { name: "6 convergence on a single wall", budget: secs(180), run: convergence },
        Criterion { name: "7 connection radius", budget: secs(1), run: radius_table },
        Criterion { name: "8 simulator trends", budget: secs(600), run: simulator_trends },
        Criterion { name: "9 grid graph equals brute force", budget: secs(120), run: graph_oracle },
        Criterion { name: "scaling trend on maze-3d", budget: secs(600), run: scaling_trend },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t = Instant::now();
        let out = (c.run)();
        let dt = t.elapsed();
        let timing = format!("{:.1}s of {}s", dt.as_secs_f64(), c.budget.as_secs());
        match out {
            Ok(detail) if dt <= c.budget => println!("PASS  {}: {detail} [{timing}]", c.name),
            Ok(detail) => {
                failed += 1;
                println!("FAIL  {}: over budget; {detail} [{timing}]", c.name);
            }
            Err(why) => {
                failed += 1;
                println!("FAIL  {}: {why} [{timing}]", c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: gmt::Error) -> String {
    e.to_string()
}

fn aabb(lo: &[f64], hi: &[f64]) -> Aabb {
    Aabb::new(lo.to_vec(), hi.to_vec()).expect("valid box")
}

/// Random Euclidean problem in `dim` dimensions: up to eight boxes that keep
/// both terminals free.
fn random_problem(seed: u64, dim: usize, n: usize) -> ProblemFile {
    let mut rng = Pcg32::seed_from_u64(seed);
    let init = vec![0.05; dim];
    let goal = aabb(&vec![0.85; dim], &vec![0.95; dim]);
    let mut obstacles = Vec::new();
    for _ in 0..rng.random_range(0..=8) {
        let lo: Vec<f64> = (0..dim).map(|_| rng.random_range(0.1..0.8)).collect();
        let hi: Vec<f64> = lo.iter().map(|&l| l + rng.random_range(0.02..0.25)).collect();
        let b = aabb(&lo, &hi);
        if !b.contains(&init) && !b.contains(&goal.center()) {
            obstacles.push(b);
        }
    }
    ProblemFile {
        schema: SCHEMA.into(),
        description: None,
        dimension: dim,
        steering: SteeringModel::Euclidean,
        obstacles,
        init: State::new(init),
        goal,
        n,
        lambda: 0.5,
        eta: 0.0,
        radius_override: None,
        sampling: SampleSource::Uniform { seed },
    }
}

fn dubins_problem(seed: u64, n: usize) -> ProblemFile {
    let mut p = scene("forest-dubins").expect("bundled");
    p.n = n;
    p.sampling = SampleSource::Uniform { seed };
    p
}

// 1

fn suboptimality_table() -> Outcome {
    let p = scene("rectangles-2d").map_err(e2s)?;
    let lambdas = [0.2, 0.5, 1.0];
    let seeds: Vec<u64> = (1..=50).collect();
    let rows = suboptimality("rectangles-2d", &p, &lambdas, 5000, &seeds).map_err(e2s)?;
    let errs: Vec<f64> = rows.iter().map(|r| r.mean_error).collect();
    let detail = format!(
        "mean excess {} over {} runs",
        errs.iter().map(|e| format!("{:.3}%", 100.0 * e)).collect::<Vec<_>>().join(" / "),
        rows[0].runs
    );
    ensure(rows.iter().all(|r| !r.unreliable()), || format!("too many failed runs; {detail}"))?;
    ensure(errs.iter().all(|&e| e >= 0.0), || format!("negative excess; {detail}"))?;
    ensure(errs.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone in lambda; {detail}"))?;
    ensure(errs[2] <= 0.08, || format!("lambda=1 excess above 8%; {detail}"))?;
    Ok(detail)
}

// 2

/// A random polyline corridor of waypoints spaced at most `r` apart, with
/// clearance at least `r`, random obstacles kept clear of it, and uniform
/// background samples.
fn corridor_instance(seed: u64) -> (Vec<State>, f64, ObstacleSet, GoalRegion, gmt::sampling::SampleSet) {
    let mut rng = Pcg32::seed_from_u64(seed);
    let dim = if seed.is_multiple_of(2) { 2 } else { 3 };
    let r = rng.random_range(0.06..0.12);
    let mut point = || -> Vec<f64> { (0..dim).map(|_| rng.random_range(r..1.0 - r)).collect() };
    let vias: Vec<Vec<f64>> = (0..4).map(|_| point()).collect();
    let mut waypoints = vec![State::new(vias[0].clone())];
    for leg in vias.windows(2) {
        let len = State::new(leg[0].clone()).distance(&State::new(leg[1].clone()));
        let steps = (len / (0.9 * r)).ceil().max(1.0) as usize;
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            waypoints.push(State::new(leg[0].iter().zip(&leg[1]).map(|(a, b)| a + t * (b - a)).collect()));
        }
    }
    let end = &waypoints.last().expect("nonempty").coords;
    let goal = GoalRegion::new(aabb(
        &end.iter().map(|c| c - 0.02).collect::<Vec<_>>(),
        &end.iter().map(|c| c + 0.02).collect::<Vec<_>>(),
    ));
    let mut boxes = Vec::new();
    for _ in 0..40 {
        let lo: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..0.9)).collect();
        let hi: Vec<f64> = lo.iter().map(|&l| (l + rng.random_range(0.02..0.2)).min(1.0)).collect();
        let b = aabb(&lo, &hi);
        if waypoints.iter().all(|w| b.distance_to_point(&w.coords) >= r) {
            boxes.push(b);
        }
    }
    let obstacles = ObstacleSet::new(dim, boxes).expect("valid boxes");
    let mut samples = sample_free(400, &obstacles, &goal, SampleSource::Uniform { seed }, false)
        .expect("free space is large")
        .with_init(waypoints[0].clone(), &goal);
    samples.plant(waypoints[1..].iter().cloned(), &goal);
    (waypoints, r, obstacles, goal, samples)
}

fn corridor_bound() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for seed in 0..100 {
        let (waypoints, r, obstacles, goal, samples) = corridor_instance(seed);
        let graph = NeighborGraph::build(&samples, &SteeringModel::Euclidean, r).map_err(e2s)?;
        let input = PlanInput { samples: &samples, graph: &graph, obstacles: &obstacles, goal: &goal, init: 0 };
        let span: f64 = waypoints.windows(2).map(|w| w[0].distance(&w[1])).sum();
        for lambda in [0.2, 0.5, 1.0] {
            let res = gmt_plan(&input, &GmtParams::new(lambda, r).map_err(e2s)?).map_err(e2s)?;
            ensure(res.is_success(), || format!("seed {seed}, lambda {lambda}: {}", res.status))?;
            let ok = corridor_bound_check(&waypoints, r, lambda, &res, &samples.states[0], &obstacles, &goal)
                .map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(ok, || format!("seed {seed}, lambda {lambda}: cost {} above bound {}", res.cost, (1.0 + 2.0 * lambda) * span))?;
            worst = worst.max(res.cost / ((1.0 + 2.0 * lambda) * span));
            checks += 1;
        }
    }
    Ok(format!("{checks} checks held, largest cost/bound {worst:.3}"))
}

// 3

fn singleton_equals_fmt() -> Outcome {
    for seed in 0..25 {
        let p = random_problem(1000 + seed, 2 + (seed as usize % 2), 500);
        let inst = p.instantiate().map_err(e2s)?;
        let r = inst.params.radius();
        let f = fmt_plan(&inst.input()).map_err(e2s)?;
        let mut costs: Vec<f64> = f.tree.cost_to_arrive.iter().copied().filter(|c| c.is_finite()).collect();
        costs.sort_by(f64::total_cmp);
        let gap = costs.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
        let lambda = (gap / (2.0 * r)).min(1.0);
        let g = gmt_plan(&inst.input(), &GmtParams::new(lambda, r).map_err(e2s)?).map_err(e2s)?;
        ensure(g.stats.group_sizes.iter().all(|&s| s == 1), || format!("seed {seed}: a group had more than one node"))?;
        let same = g.status == f.status
            && g.cost.to_bits() == f.cost.to_bits()
            && g.path_indices == f.path_indices
            && g.tree.parent == f.tree.parent
            && g.tree.label == f.tree.label
            && g.tree.cost_to_arrive.iter().zip(&f.tree.cost_to_arrive).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure(same, || format!("seed {seed}: GMT tree differs from FMT*"))?;
    }
    Ok("25 problems, trees bit-identical".into())
}

// 4

fn parallel_determinism() -> Outcome {
    let mut dubins = 0;
    for seed in 0..50u64 {
        let p = if seed % 5 == 4 {
            dubins += 1;
            dubins_problem(seed, 250)
        } else {
            random_problem(2000 + seed, 2 + (seed as usize % 3), 500)
        };
        let inst = p.instantiate().map_err(e2s)?;
        let one = with_workers(1, || gmt_plan(&inst.input(), &inst.params)).map_err(e2s)?.map_err(e2s)?;
        for w in [2, 8] {
            let many = with_workers(w, || gmt_plan(&inst.input(), &inst.params)).map_err(e2s)?.map_err(e2s)?;
            let same = one == many && one.cost.to_bits() == many.cost.to_bits();
            ensure(same, || format!("seed {seed}: {w} workers differ from 1"))?;
        }
    }
    Ok(format!("50 problems ({dubins} Dubins), workers 1/2/8 identical"))
}

// 5

fn oracle_dominance() -> Outcome {
    let mut corpus: Vec<(String, ProblemFile)> = Vec::new();
    for name in SCENES {
        let mut p = scene(name).map_err(e2s)?;
        p.n = p.n.min(2000);
        corpus.push((name.to_string(), p));
    }
    for seed in 0..30 {
        corpus.push((format!("random {seed}"), random_problem(3000 + seed, 2 + (seed as usize % 3), 600)));
    }
    let mut compared = 0;
    for (name, p) in &corpus {
        let inst = p.instantiate().map_err(e2s)?;
        let d = dijkstra_oracle(&inst.input()).map_err(e2s)?;
        let f = fmt_plan(&inst.input()).map_err(e2s)?;
        let g = gmt_plan(&inst.input(), &inst.params).map_err(e2s)?;
        if d.is_success() && f.is_success() && g.is_success() {
            compared += 1;
            ensure(d.cost <= f.cost && d.cost <= g.cost, || {
                format!("{name}: oracle {} vs fmt {} gmt {}", d.cost, f.cost, g.cost)
            })?;
        }
    }
    let mut free = 0;
    for seed in 0..10 {
        let mut p = random_problem(4000 + seed, 2 + (seed as usize % 3), 600);
        p.obstacles.clear();
        let inst = p.instantiate().map_err(e2s)?;
        let d = dijkstra_oracle(&inst.input()).map_err(e2s)?;
        let f = fmt_plan(&inst.input()).map_err(e2s)?;
        ensure(d.is_success() && f.cost.to_bits() == d.cost.to_bits(), || {
            format!("obstacle-free seed {seed}: fmt {} vs oracle {}", f.cost, d.cost)
        })?;
        free += 1;
    }
    Ok(format!("{compared} problems dominated, {free} obstacle-free problems exact"))
}

// 6

const WALL_LO: [f64; 2] = [0.45, 0.0];
const WALL_HI: [f64; 2] = [0.55, 0.7];
const INIT: [f64; 2] = [0.2, 0.2];
const GOAL_LO: [f64; 2] = [0.78, 0.18];
const GOAL_HI: [f64; 2] = [0.82, 0.22];

/// Whether segment `a-b` enters the open interior of the wall. The wall
/// stands on the cube floor, so it is extended below it to close the
/// zero-width gap along `y = 0`.
fn crosses_wall(a: [f64; 2], b: [f64; 2]) -> bool {
    let lo = [WALL_LO[0], WALL_LO[1] - 1.0];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..2 {
        let d = b[k] - a[k];
        if d == 0.0 {
            if a[k] <= lo[k] || a[k] >= WALL_HI[k] {
                return false;
            }
        } else {
            let (u, v) = ((lo[k] - a[k]) / d, (WALL_HI[k] - a[k]) / d);
            t0 = t0.max(u.min(v));
            t1 = t1.min(u.max(v));
        }
    }
    t1 - t0 > 1e-12
}

/// Shortest free path from the start to the goal box: Dijkstra over the
/// start and the two upper wall corners, finishing at the nearest goal point visible
/// from a vertex.
fn visibility_optimum() -> f64 {
    let verts = [INIT, [WALL_LO[0], WALL_HI[1]], [WALL_HI[0], WALL_HI[1]]];
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let mut best = [f64::INFINITY; 3];
    let mut done = [false; 3];
    best[0] = 0.0;
    for _ in 0..verts.len() {
        let u = (0..verts.len()).filter(|&i| !done[i]).min_by(|&i, &j| best[i].total_cmp(&best[j])).expect("vertex left");
        done[u] = true;
        for v in 0..verts.len() {
            if !done[v] && !crosses_wall(verts[u], verts[v]) {
                best[v] = best[v].min(best[u] + dist(verts[u], verts[v]));
            }
        }
    }
    (0..verts.len())
        .filter_map(|i| {
            let p = verts[i];
            let q = [p[0].clamp(GOAL_LO[0], GOAL_HI[0]), p[1].clamp(GOAL_LO[1], GOAL_HI[1])];
            (!crosses_wall(p, q)).then(|| best[i] + dist(p, q))
        })
        .fold(f64::INFINITY, f64::min)
}

fn convergence() -> Outcome {
    let optimum = visibility_optimum();
    let base = ProblemFile {
        schema: SCHEMA.into(),
        description: None,
        dimension: 2,
        steering: SteeringModel::Euclidean,
        obstacles: vec![aabb(&WALL_LO, &WALL_HI)],
        init: State::new(INIT.to_vec()),
        goal: aabb(&GOAL_LO, &GOAL_HI),
        n: 0,
        lambda: 0.5,
        eta: 0.0,
        radius_override: None,
        sampling: SampleSource::Manual,
    };
    let mut means = Vec::new();
    for n in [500, 1000, 2000, 4000] {
        let mut total = 0.0;
        for seed in 1..=20 {
            let p = ProblemFile { n, sampling: SampleSource::Uniform { seed }, ..base.clone() };
            let inst = p.instantiate().map_err(e2s)?;
            let g = gmt_plan(&inst.input(), &inst.params).map_err(e2s)?;
            ensure(g.is_success(), || format!("n={n} seed {seed}: {}", g.status))?;
            ensure(g.cost >= optimum - 1e-9, || format!("n={n} seed {seed}: cost {} below optimum {optimum}", g.cost))?;
            total += g.cost;
        }
        means.push(total / 20.0);
    }
    let detail = format!(
        "optimum {optimum:.5}, mean cost {}",
        means.iter().map(|m| format!("{m:.5}")).collect::<Vec<_>>().join(" / ")
    );
    ensure(means.windows(2).all(|w| w[1] <= w[0] * 1.01), || format!("not non-increasing in n; {detail}"))?;
    ensure(means[3] <= optimum * 1.05, || format!("n=4000 more than 5% above optimum; {detail}"))?;
    Ok(detail)
}

// 7

/// `4 ((1+eta)/d * 1/zeta_d * ln n / n)^(1/d)` with `mu_free = 1`, evaluated
/// at 40 significant digits.
#[allow(clippy::excessive_precision)]
const RADIUS_TABLE: [(usize, usize, f64, f64); 54] = [
    (2, 100, 0.0, 0.34244663207674920648),
    (2, 100, 0.5, 0.41940975636132102001),
    (2, 1000, 0.0, 0.13262901029980682843),
    (2, 1000, 0.5, 0.16243670016243065343),
    (2, 10000, 0.0, 0.048429267147192809558),
    (2, 10000, 0.5, 0.059313496563777566225),
    (3, 100, 0.0, 0.6166971358800507223),
    (3, 100, 0.5, 0.70594199478374144357),
    (3, 1000, 0.0, 0.32766924801665448881),
    (3, 1000, 0.5, 0.37508765505140448356),
    (3, 10000, 0.0, 0.16739735697364325224),
    (3, 10000, 0.5, 0.19162213869351374166),
    (4, 100, 0.0, 0.87910141107545232847),
    (4, 100, 0.5, 0.97288563722024313676),
    (4, 1000, 0.0, 0.54709379849308872872),
    (4, 1000, 0.5, 0.6054588151724723427),
    (4, 10000, 0.0, 0.33059514856269591905),
    (4, 10000, 0.5, 0.36586367365497733239),
    (5, 100, 0.0, 1.1237130711904313054),
    (5, 100, 0.5, 1.2186351046318926325),
    (5, 1000, 0.0, 0.76890676950888142385),
    (5, 1000, 0.5, 0.83385768621519724039),
    (5, 10000, 0.0, 0.51387966437215555556),
    (5, 10000, 0.5, 0.5572879898041504357),
    (6, 100, 0.0, 1.3511160998234051828),
    (6, 100, 0.5, 1.44557694173725322),
    (6, 1000, 0.0, 0.98486010561865319846),
    (6, 1000, 0.5, 1.0537148211802978764),
    (6, 10000, 0.0, 0.70393247561805024996),
    (6, 10000, 0.5, 0.75314664330213846378),
    (7, 100, 0.0, 1.5632439428012896684),
    (7, 100, 0.5, 1.6564664675204278599),
    (7, 1000, 0.0, 1.192135184481280048),
    (7, 1000, 0.5, 1.2632270010948226062),
    (7, 10000, 0.0, 0.89395725635381331178),
    (7, 10000, 0.5, 0.94726752364258899552),
    (8, 100, 0.0, 1.7621015060034305431),
    (8, 100, 0.5, 1.8537122919565860079),
    (8, 1000, 0.0, 1.3900881135066385803),
    (8, 1000, 0.5, 1.4623581071412926896),
    (8, 10000, 0.0, 1.0805868342117156282),
    (8, 10000, 0.5, 1.1367660093815339361),
    (9, 100, 0.0, 1.949458244083809822),
    (9, 100, 0.5, 2.039293020286023947),
    (9, 1000, 0.0, 1.5789505239525752531),
    (9, 1000, 0.5, 1.6517115935390189004),
    (9, 10000, 0.0, 1.2622328901235121218),
    (9, 10000, 0.5, 1.3203990034749734479),
    (10, 100, 0.0, 2.1268053691302324597),
    (10, 100, 0.5, 2.2148120308265257769),
    (10, 1000, 0.0, 1.7592877306925351652),
    (10, 1000, 0.5, 1.8320866065975812516),
    (10, 10000, 0.0, 1.4382379616848637673),
    (10, 10000, 0.5, 1.4977518803395498565),
];

fn radius_table() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(d, n, eta, want) in &RADIUS_TABLE {
        let got = connection_radius(RadiusParams { eta, d, n, mu_free: 1.0 }).map_err(e2s)?;
        let rel = (got - want).abs() / want;
        ensure(rel <= 1e-10, || format!("d={d} n={n} eta={eta}: {got} vs {want}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("{} grid points, worst relative error {worst:.1e}", RADIUS_TABLE.len()))
}

// 8

fn simulator_trends() -> Outcome {
    let c = bundled_campaign();
    let rows = c.run().map_err(e2s)?;
    let rate = |lat: f64, k: f64, s: f64| {
        rows.iter()
            .find(|r| r.latency_s == lat && r.collapse_rate == k && r.sigma == s)
            .map(|r| r.success_rate)
            .expect("grid cell present")
    };
    let (fast, slow) = (c.latencies[0], c.latencies[c.latencies.len() - 1]);
    let top = c.rates[c.rates.len() - 1];
    ensure(c.scenario.trials >= 50, || format!("only {} trials", c.scenario.trials))?;
    for &lat in &c.latencies {
        ensure(rate(lat, 0.0, 0.0) == 1.0, || format!("latency {lat}: rate 0 success {}", rate(lat, 0.0, 0.0)))?;
        for &s in &c.sigmas {
            let col: Vec<f64> = c.rates.iter().map(|&k| rate(lat, k, s)).collect();
            ensure(col.windows(2).all(|w| w[1] <= w[0]), || format!("latency {lat}, sigma {s}: {col:?} increases"))?;
        }
    }
    for &s in &c.sigmas {
        ensure(rate(fast, top, s) >= rate(slow, top, s), || {
            format!("sigma {s}: fast {} below slow {}", rate(fast, top, s), rate(slow, top, s))
        })?;
    }
    Ok(format!(
        "{} cells x {} trials; at rate {top}, sigma 0: {:.2} ({fast}s) vs {:.2} ({slow}s)",
        rows.len(),
        c.scenario.trials,
        rate(fast, top, 0.0),
        rate(slow, top, 0.0)
    ))
}

// 9

fn brute_force(samples: &gmt::sampling::SampleSet, model: &SteeringModel, r: f64) -> Vec<Vec<Edge>> {
    let s = &samples.states;
    (0..s.len())
        .map(|i| {
            (0..s.len())
                .filter(|&j| j != i)
                .filter_map(|j| {
                    let c = model.connect(&s[i], &s[j]).expect("valid states").cost;
                    (c <= r).then_some(Edge { node: j as u32, cost: c })
                })
                .collect()
        })
        .collect()
}

fn graph_oracle() -> Outcome {
    let mut edges = 0;
    for seed in 0..50u64 {
        let p = if seed % 2 == 0 {
            random_problem(5000 + seed, 2 + (seed as usize % 3), 400)
        } else {
            dubins_problem(seed, 300)
        };
        let inst = p.instantiate().map_err(e2s)?;
        let want = brute_force(&inst.samples, &p.steering, inst.graph.radius());
        for (i, row) in want.iter().enumerate() {
            let got = inst.graph.out_neighbors(i);
            let same = got.len() == row.len()
                && got.iter().zip(row).all(|(a, b)| a.node == b.node && a.cost.to_bits() == b.cost.to_bits());
            ensure(same, || format!("seed {seed}: node {i} has {} edges, brute force {}", got.len(), row.len()))?;
            if p.steering.is_dubins() {
                for e in row {
                    let cached = inst.graph.edge_path(i, e.node as usize).ok_or(format!("seed {seed}: missing path"))?;
                    let path = p.steering.connect(&inst.samples.states[i], &inst.samples.states[e.node as usize]).map_err(e2s)?.path;
                    ensure(cached == path.as_slice(), || format!("seed {seed}: cached path differs on {i}->{}", e.node))?;
                }
            }
            edges += row.len();
        }
    }
    Ok(format!("50 problems (25 Dubins), {edges} edges identical"))
}

// scaling

fn scaling_trend() -> Outcome {
    let p = scene("maze-3d").map_err(e2s)?;
    let ns = [1000, 2000, 5000, 10000];
    let counts = [12, 120, 1200];
    let seeds: Vec<u64> = (1..=10).collect();
    let rows = scaling(&p, &ns, &counts, &seeds, 3).map_err(e2s)?;
    let cell = |n: usize, m: usize| rows.iter().find(|r| r.n == n && r.obstacles == m).expect("cell present");
    let mut worst_ratio: f64 = 0.0;
    for &n in &ns {
        for w in counts.windows(2) {
            let ratio = cell(n, w[1]).time_s / cell(n, w[0]).time_s;
            worst_ratio = worst_ratio.max(ratio);
            ensure(ratio <= 4.0, || format!("n={n}: time x{ratio:.2} from {} to {} obstacles", w[0], w[1]))?;
        }
    }
    let costs: Vec<f64> = ns.iter().map(|&n| cell(n, counts[0]).cost).collect();
    let detail = format!(
        "worst time growth x{worst_ratio:.2} per x10 obstacles, mean cost {}",
        costs.iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>().join(" / ")
    );
    ensure(costs.windows(2).all(|w| w[1] <= w[0] * 1.02), || format!("cost grows with n; {detail}"))?;
    Ok(detail)
}
