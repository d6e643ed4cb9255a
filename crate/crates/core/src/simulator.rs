//! Planning in the loop: a point robot tracks plans through a world that
//! gains box obstacles over time, under Gaussian position noise, replanning
//! continuously with a simulated planner latency.
//!
//! Each step of length `control_dt`:
//!
//! 1. obstacles arriving during the step are added;
//! 2. a replan whose latency has elapsed is delivered and the next one is
//!    started from the current state and world;
//! 3. the robot advances `robot_speed * control_dt` along its plan, holding
//!    position where the next piece is blocked;
//! 4. noise is added and the state clamped to the unit cube;
//! 5. collision, goal arrival and timeout are checked.
//!
//! Obstacle arrivals are a Poisson process built from unit-rate
//! inter-arrival times scaled by `1 / collapse_rate`, and every random
//! stream of a trial is keyed by the trial seed alone. Cells of a campaign
//! that share a trial index therefore see the same arrival sequence, only
//! sped up at higher rates.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_distr::{Exp1, StandardNormal};
use rand_pcg::Pcg32;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{field, Error, Result};
use crate::graph::NeighborGraph;
use crate::planner::{fmt_plan, gmt_plan, GmtParams, PlanInput};
use crate::problem::{scene, ProblemFile};
use crate::sampling::{sample_free, SampleSource};
use crate::space::{Aabb, GoalRegion, ObstacleSet, State};

pub const CAMPAIGN_SCHEMA: &str = "gmt-campaign/1";

/// Noise draws are clamped to this many standard deviations.
pub const NOISE_CAP_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replanner {
    #[default]
    Gmt,
    Fmt,
}

/// A bundled scene name or an inline problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemRef {
    Scene(String),
    Inline(Box<ProblemFile>),
}

impl ProblemRef {
    pub fn resolve(&self) -> Result<ProblemFile> {
        match self {
            ProblemRef::Scene(name) => scene(name),
            ProblemRef::Inline(p) => {
                p.validate()?;
                Ok((**p).clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub base_problem: ProblemRef,
    /// Obstacles added per second.
    pub collapse_rate: f64,
    /// Extents of every spawned box.
    pub spawn_box_size: Vec<f64>,
    /// Per-axis standard deviation of the position noise added each step.
    pub disturbance_sigma: f64,
    /// Simulated seconds from the start of a replan to its delivery.
    pub replan_latency: f64,
    pub control_dt: f64,
    pub robot_speed: f64,
    pub time_limit: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub planner: Replanner,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<ProblemFile> {
        let p = self.base_problem.resolve().map_err(|e| match e {
            Error::Field { path, message } => field(format!("base_problem.{path}"), message),
            other => field("base_problem", other),
        })?;
        if p.steering.is_dubins() {
            return Err(field("base_problem.steering", "the simulator moves a point robot along straight segments"));
        }
        let nonneg = |v: f64, name: &str| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(field(name, "must be finite and >= 0"))
            }
        };
        nonneg(self.collapse_rate, "collapse_rate")?;
        nonneg(self.disturbance_sigma, "disturbance_sigma")?;
        nonneg(self.replan_latency, "replan_latency")?;
        nonneg(self.robot_speed, "robot_speed")?;
        nonneg(self.time_limit, "time_limit")?;
        if !(self.control_dt > 0.0 && self.control_dt.is_finite()) {
            return Err(field("control_dt", "must be positive"));
        }
        if self.trials == 0 {
            return Err(field("trials", "must be at least 1"));
        }
        if self.spawn_box_size.len() != p.dimension {
            return Err(field("spawn_box_size", format!("expected {} extents", p.dimension)));
        }
        for (k, &e) in self.spawn_box_size.iter().enumerate() {
            nonneg(e, &format!("spawn_box_size[{k}]"))?;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialResult {
    ReachedGoal,
    Collided,
    TimedOut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub result: TrialResult,
    pub time_elapsed: f64,
    /// Replans delivered (the initial plan is not counted).
    pub replans: usize,
    /// Robot state after every step, starting with the initial state.
    pub path_travelled: Vec<State>,
    /// Obstacles added to the world.
    pub spawned: usize,
    /// Final obstacle set.
    pub obstacles: ObstacleSet,
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
pub fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const STREAM_SPAWN: u64 = 1;
const STREAM_NOISE: u64 = 2;
const STREAM_PLAN: u64 = 3;

/// Plan from `start` in `world` with fresh uniform samples; `None` when
/// sampling or planning fails. Returns the vertex list after `start` and the
/// remaining cost from each vertex.
fn plan_from(
    problem: &ProblemFile,
    planner: Replanner,
    world: &ObstacleSet,
    start: &[f64],
    sample_seed: u64,
) -> Option<Vec<(Vec<f64>, f64)>> {
    let goal = GoalRegion::new(problem.goal.clone());
    let init = State::new(start.to_vec());
    if !world.coords_free(start) {
        return None;
    }
    let samples = sample_free(problem.n, world, &goal, SampleSource::Uniform { seed: sample_seed }, false)
        .ok()?
        .with_init(init, &goal);
    let r = problem.radius().ok()?;
    let graph = NeighborGraph::build(&samples, &problem.steering, r).ok()?;
    let input = PlanInput { samples: &samples, graph: &graph, obstacles: world, goal: &goal, init: 0 };
    let res = match planner {
        Replanner::Gmt => gmt_plan(&input, &GmtParams::new(problem.lambda, r).ok()?),
        Replanner::Fmt => fmt_plan(&input),
    }
    .ok()?;
    if !res.is_success() {
        return None;
    }
    let costs = &res.tree.cost_to_arrive;
    Some(res.path_indices[1..].iter().map(|&i| (samples.states[i].coords.clone(), res.cost - costs[i])).collect())
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Picks where to join: the vertex of either plan minimizing the distance to
/// it plus the remaining cost after it, among those reachable by a free
/// straight segment. Returns the plan suffix starting at that vertex.
fn join(
    pos: &[f64],
    world: &ObstacleSet,
    current: &[(Vec<f64>, f64)],
    fresh: &[(Vec<f64>, f64)],
) -> Option<Vec<(Vec<f64>, f64)>> {
    let mut best: Option<(f64, bool, usize)> = None;
    for (is_fresh, plan) in [(false, current), (true, fresh)] {
        for (k, (v, rem)) in plan.iter().enumerate() {
            let total = dist(pos, v) + rem;
            if best.is_some_and(|b| total >= b.0) || !world.coords_segment_free(pos, v) {
                continue;
            }
            best = Some((total, is_fresh, k));
        }
    }
    best.map(|(_, is_fresh, k)| if is_fresh { fresh[k..].to_vec() } else { current[k..].to_vec() })
}

struct Arrivals {
    rng: Pcg32,
    rate: f64,
    d: usize,
    unit_time: f64,
    next: Option<(f64, Vec<f64>)>,
}

impl Arrivals {
    fn new(seed: u64, rate: f64, d: usize) -> Self {
        let mut a = Self { rng: Pcg32::seed_from_u64(seed), rate, d, unit_time: 0.0, next: None };
        a.advance();
        a
    }

    fn advance(&mut self) {
        if self.rate <= 0.0 {
            return;
        }
        let e: f64 = self.rng.sample(Exp1);
        self.unit_time += e;
        let center: Vec<f64> = (0..self.d).map(|_| self.rng.random::<f64>()).collect();
        self.next = Some((self.unit_time / self.rate, center));
    }

    /// Centers of all arrivals strictly before `t`.
    fn until(&mut self, t: f64) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        while let Some((at, _)) = &self.next {
            if *at >= t {
                break;
            }
            let (_, c) = self.next.take().expect("checked above");
            out.push(c);
            self.advance();
        }
        out
    }
}

/// Runs one trial. All randomness derives from `trial_seed`.
pub fn run_trial(cfg: &ScenarioConfig, trial_seed: u64) -> Result<TrialOutcome> {
    let problem = cfg.validate()?;
    let d = problem.dimension;
    let goal = GoalRegion::new(problem.goal.clone());
    let mut world = problem.obstacle_set()?;
    let mut pos = problem.init.coords.clone();
    let mut travelled = vec![State::new(pos.clone())];
    let mut arrivals = Arrivals::new(mix(trial_seed, STREAM_SPAWN), cfg.collapse_rate, d);
    let mut noise = Pcg32::seed_from_u64(mix(trial_seed, STREAM_NOISE));
    let plan_seed = |k: u64| mix(mix(trial_seed, STREAM_PLAN), k);
    let mut spawned = 0usize;

    let outcome = |result, t: f64, replans, travelled, spawned, world| {
        Ok(TrialOutcome { result, time_elapsed: t, replans, path_travelled: travelled, spawned, obstacles: world })
    };

    let Some(mut plan) = plan_from(&problem, cfg.planner, &world, &pos, plan_seed(0)) else {
        return outcome(TrialResult::TimedOut, 0.0, 0, travelled, 0, world);
    };
    if goal.contains(&State::new(pos.clone())) {
        return outcome(TrialResult::ReachedGoal, 0.0, 0, travelled, 0, world);
    }

    let dt = cfg.control_dt;
    let steps = (cfg.time_limit / dt).ceil() as u64;
    let mut replans = 0usize;
    let mut started = 1u64;
    // replan in flight: (start state, world snapshot, delivery time)
    let mut pending = (pos.clone(), world.clone(), cfg.replan_latency);

    for step in 1..=steps {
        let t = step as f64 * dt;

        for c in arrivals.until(t) {
            let lo: Vec<f64> = c.iter().zip(&cfg.spawn_box_size).map(|(c, e)| c - e / 2.0).collect();
            let hi: Vec<f64> = c.iter().zip(&cfg.spawn_box_size).map(|(c, e)| c + e / 2.0).collect();
            let b = Aabb { lo, hi };
            if !b.contains(&pos) {
                world.push(b)?;
                spawned += 1;
            }
        }

        while pending.2 <= t + 1e-12 {
            let (from, snapshot, due) = pending;
            if let Some(fresh) = plan_from(&problem, cfg.planner, &snapshot, &from, plan_seed(started)) {
                if let Some(joined) = join(&pos, &world, &plan, &fresh) {
                    plan = joined;
                }
            }
            replans += 1;
            started += 1;
            pending = (pos.clone(), world.clone(), due + cfg.replan_latency.max(dt));
        }

        let mut budget = cfg.robot_speed * dt;
        while let Some((target, _)) = plan.first() {
            let gap = dist(&pos, target);
            let reached = gap <= budget;
            let next: Vec<f64> = if reached {
                target.clone()
            } else {
                pos.iter().zip(target).map(|(p, q)| p + (q - p) * budget / gap).collect()
            };
            if !world.coords_segment_free(&pos, &next) {
                break;
            }
            pos = next;
            if !reached {
                break;
            }
            budget -= gap;
            plan.remove(0);
        }

        if cfg.disturbance_sigma > 0.0 {
            let mut n: Vec<f64> =
                (0..d).map(|_| cfg.disturbance_sigma * noise.sample::<f64, _>(StandardNormal)).collect();
            let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cap = NOISE_CAP_SIGMAS * cfg.disturbance_sigma;
            if norm > cap {
                n.iter_mut().for_each(|x| *x *= cap / norm);
            }
            for (p, e) in pos.iter_mut().zip(n) {
                *p = (*p + e).clamp(0.0, 1.0);
            }
        }
        travelled.push(State::new(pos.clone()));

        if !world.coords_free(&pos) {
            return outcome(TrialResult::Collided, t, replans, travelled, spawned, world);
        }
        if goal.contains(&State::new(pos.clone())) {
            return outcome(TrialResult::ReachedGoal, t, replans, travelled, spawned, world);
        }
    }
    outcome(TrialResult::TimedOut, steps as f64 * dt, replans, travelled, spawned, world)
}

/// Seed of trial `index` in a campaign; shared by every cell.
pub fn trial_seed(cfg: &ScenarioConfig, index: usize) -> u64 {
    mix(cfg.seed, index as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub latency_s: f64,
    pub collapse_rate: f64,
    pub sigma: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
}

/// Success rates over the grid `latencies x rates x sigmas`, `cfg.trials`
/// trials per cell. Trials run on the current rayon pool; the result does
/// not depend on scheduling.
pub fn run_campaign(cfg: &ScenarioConfig, latencies: &[f64], rates: &[f64], sigmas: &[f64]) -> Result<Vec<CampaignRow>> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &latency in latencies {
        for &rate in rates {
            for &sigma in sigmas {
                let c = ScenarioConfig {
                    replan_latency: latency,
                    collapse_rate: rate,
                    disturbance_sigma: sigma,
                    ..cfg.clone()
                };
                c.validate()?;
                cells.push(c);
            }
        }
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect();
    let reached: Vec<bool> = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(&cells[c], trial_seed(cfg, t)).map(|o| o.result == TrialResult::ReachedGoal))
        .collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let successes = reached[c * cfg.trials..(c + 1) * cfg.trials].iter().filter(|&&r| r).count();
            CampaignRow {
                latency_s: cell.replan_latency,
                collapse_rate: cell.collapse_rate,
                sigma: cell.disturbance_sigma,
                trials: cfg.trials,
                successes,
                success_rate: successes as f64 / cfg.trials as f64,
            }
        })
        .collect())
}

/// A campaign file: scenario plus the sweep axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub scenario: ScenarioConfig,
    pub latencies: Vec<f64>,
    pub rates: Vec<f64>,
    pub sigmas: Vec<f64>,
}

impl CampaignFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let c: Self = serde_path_to_error::deserialize(de).map_err(|e| field(e.path().to_string(), e.inner()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("campaign files always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != CAMPAIGN_SCHEMA {
            return Err(field("schema", format!("expected \"{CAMPAIGN_SCHEMA}\", got \"{}\"", self.schema)));
        }
        self.scenario.validate().map_err(|e| match e {
            Error::Field { path, message } => field(format!("scenario.{path}"), message),
            other => field("scenario", other),
        })?;
        for (name, axis) in [("latencies", &self.latencies), ("rates", &self.rates), ("sigmas", &self.sigmas)] {
            if axis.is_empty() {
                return Err(field(name, "must not be empty"));
            }
            if let Some(k) = axis.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(field(format!("{name}[{k}]"), "must be finite and >= 0"));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Vec<CampaignRow>> {
        run_campaign(&self.scenario, &self.latencies, &self.rates, &self.sigmas)
    }
}

/// Bundled cave campaign: two latencies, three collapse rates, two noise levels.
pub fn bundled_campaign() -> CampaignFile {
    CampaignFile::from_json(include_str!("../scenes/campaign-cave.json")).expect("bundled campaign is valid")
}

/// Writes rows as CSV with the header
/// `latency_s,collapse_rate,sigma,trials,successes,success_rate`.
pub fn write_csv<W: std::io::Write>(rows: &[CampaignRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
