//! Benchmark sweeps: GMT suboptimality against FMT* over λ, and planning
//! time and cost as the sample and obstacle counts grow.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::planner::{fmt_plan, gmt_plan, GmtParams};
use crate::problem::{refine_obstacles, ProblemFile};
use crate::sampling::SampleSource;
use crate::space::ObstacleSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuboptimalityRow {
    pub scene: String,
    pub lambda: f64,
    pub n: usize,
    /// Mean of `c_GMT / c_FMT - 1` over the runs where both succeeded.
    pub mean_error: f64,
    pub runs: usize,
    pub failures: usize,
}

impl SuboptimalityRow {
    /// More than 10% of the runs failed.
    pub fn unreliable(&self) -> bool {
        self.failures * 10 > self.runs + self.failures
    }
}

/// For every seed, draws one uniform sample set and neighbor graph, runs
/// FMT* once and GMT once per λ on it, and averages the relative cost excess
/// per λ. Seeds run in parallel on the current rayon pool.
pub fn suboptimality(
    scene: &str,
    problem: &ProblemFile,
    lambdas: &[f64],
    n: usize,
    seeds: &[u64],
) -> Result<Vec<SuboptimalityRow>> {
    for &l in lambdas {
        GmtParams::new(l, 1.0)?;
    }
    // per seed: Some(excess per lambda) or None on any failure
    let per_seed: Vec<Option<Vec<f64>>> = seeds
        .par_iter()
        .map(|&seed| -> Result<Option<Vec<f64>>> {
            let p = ProblemFile { n, sampling: SampleSource::Uniform { seed }, ..problem.clone() };
            let inst = p.instantiate()?;
            let f = fmt_plan(&inst.input())?;
            if !f.is_success() || f.cost <= 0.0 {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(lambdas.len());
            for &l in lambdas {
                let g = gmt_plan(&inst.input(), &GmtParams::new(l, inst.params.radius())?)?;
                if !g.is_success() {
                    return Ok(None);
                }
                out.push(g.cost / f.cost - 1.0);
            }
            Ok(Some(out))
        })
        .collect::<Result<_>>()?;
    let ok: Vec<&Vec<f64>> = per_seed.iter().flatten().collect();
    let failures = seeds.len() - ok.len();
    Ok(lambdas
        .iter()
        .enumerate()
        .map(|(k, &lambda)| SuboptimalityRow {
            scene: scene.to_string(),
            lambda,
            n,
            mean_error: if ok.is_empty() { f64::NAN } else { ok.iter().map(|v| v[k]).sum::<f64>() / ok.len() as f64 },
            runs: ok.len(),
            failures,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub obstacles: usize,
    /// Mean cost over the successful seeds.
    pub cost: f64,
    pub successes: usize,
    pub seeds: usize,
    /// Median over seeds of the per-seed median planning time, in seconds.
    pub time_s: f64,
    pub radius: f64,
}

/// Median of `reps` timed runs of `f`; returns the median and the last result.
pub fn median_time<T>(reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut times = Vec::with_capacity(reps.max(1));
    let mut last = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        last = Some(f());
        times.push(t.elapsed().as_secs_f64());
    }
    (median(&mut times), last.expect("at least one run"))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// GMT time and cost for every `(n, obstacle count)` cell, over uniform
/// sample sets drawn with each of `seeds`. Obstacles are refined by box
/// subdivision, so every cell plans in the same blocked region. Graphs are
/// built outside the timed region, and runs are sequential so timings do
/// not contend.
pub fn scaling(
    problem: &ProblemFile,
    ns: &[usize],
    obstacle_counts: &[usize],
    seeds: &[u64],
    reps: usize,
) -> Result<Vec<ScalingRow>> {
    let refined: Vec<ObstacleSet> = obstacle_counts
        .iter()
        .map(|&m| ObstacleSet::new(problem.dimension, refine_obstacles(&problem.obstacles, m)?))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &n in ns {
        // [obstacle count][seed] -> (time, cost if solved)
        let mut cells: Vec<Vec<(f64, Option<f64>)>> = vec![Vec::new(); obstacle_counts.len()];
        let mut radius = f64::NAN;
        for &seed in seeds {
            let p = ProblemFile { n, sampling: SampleSource::Uniform { seed }, ..problem.clone() };
            let mut inst = p.instantiate()?;
            radius = inst.params.radius();
            for (k, obs) in refined.iter().enumerate() {
                inst.obstacles = obs.clone();
                let (t, res) = median_time(reps, || gmt_plan(&inst.input(), &inst.params));
                let res = res?;
                cells[k].push((t, res.is_success().then_some(res.cost)));
            }
        }
        for (k, &m) in obstacle_counts.iter().enumerate() {
            let solved: Vec<f64> = cells[k].iter().filter_map(|c| c.1).collect();
            let mut times: Vec<f64> = cells[k].iter().map(|c| c.0).collect();
            rows.push(ScalingRow {
                n,
                obstacles: m,
                cost: if solved.is_empty() { f64::NAN } else { solved.iter().sum::<f64>() / solved.len() as f64 },
                successes: solved.len(),
                seeds: seeds.len(),
                time_s: median(&mut times),
                radius,
            });
        }
    }
    Ok(rows)
}
