//! Sample-set generation: Halton low-dispersion points or seeded PCG32 uniform
//! draws, rejection-filtered against the obstacle set, with at least one
//! sample guaranteed to land in the goal region.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::space::{GoalRegion, ObstacleSet, State};

/// Where the candidates of a sample set come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSource {
    /// Halton indices ascending from `start` (1-based).
    Halton { start: u64 },
    /// PCG32 stream seeded with `seed`.
    Uniform { seed: u64 },
    /// Hand-built sample set.
    Manual,
}

impl Default for SampleSource {
    fn default() -> Self {
        SampleSource::Halton { start: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub states: Vec<State>,
    pub goal_indices: Vec<usize>,
    pub source: SampleSource,
}

impl SampleSet {
    /// Wraps hand-built states, recomputing goal membership.
    pub fn from_states(states: Vec<State>, goal: &GoalRegion) -> Self {
        let goal_indices = goal_members(&states, goal);
        Self { states, goal_indices, source: SampleSource::Manual }
    }

    /// Prepends `init` at index 0 and shifts the goal indices accordingly.
    pub fn with_init(mut self, init: State, goal: &GoalRegion) -> Self {
        let init_in_goal = goal.contains(&init);
        self.states.insert(0, init);
        let mut gi: Vec<usize> = self.goal_indices.iter().map(|i| i + 1).collect();
        if init_in_goal {
            gi.insert(0, 0);
        }
        self.goal_indices = gi;
        self
    }

    /// Appends extra states (for instance a planted waypoint corridor) and
    /// returns the index of the first appended state.
    pub fn plant(&mut self, extra: impl IntoIterator<Item = State>, goal: &GoalRegion) -> usize {
        let first = self.states.len();
        for s in extra {
            if goal.contains(&s) {
                self.goal_indices.push(self.states.len());
            }
            self.states.push(s);
        }
        first
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_goal(&self, i: usize) -> bool {
        self.goal_indices.binary_search(&i).is_ok()
    }
}

fn goal_members(states: &[State], goal: &GoalRegion) -> Vec<usize> {
    states
        .iter()
        .enumerate()
        .filter(|(_, s)| goal.contains(s))
        .map(|(i, _)| i)
        .collect()
}

/// Radical inverse of `index` in `base`. Index 0 is rejected so that every
/// value lies strictly inside (0, 1).
pub fn halton(index: u64, base: u64) -> Result<f64> {
    if index == 0 {
        return Err(Error::InvalidInput("halton index must be >= 1".into()));
    }
    if base < 2 {
        return Err(Error::InvalidInput("halton base must be >= 2".into()));
    }
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    Ok(r)
}

/// First `count` primes.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Halton point with coordinate k drawn in base `primes[k]`. When
/// `with_heading` is set, the heading uses the next prime scaled to [0, 2π).
pub fn halton_point(index: u64, d: usize, with_heading: bool) -> Result<State> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let ps = primes(d + 1);
    let coords = ps[..d].iter().map(|&p| halton(index, p)).collect::<Result<Vec<_>>>()?;
    let heading = if with_heading { Some(TAU * halton(index, ps[d])?) } else { None };
    Ok(State { coords, heading })
}

enum Candidates {
    Halton { next: u64, d: usize, with_heading: bool },
    Uniform { rng: Pcg32, d: usize, with_heading: bool },
}

impl Candidates {
    fn new(source: SampleSource, d: usize, with_heading: bool) -> Result<Self> {
        match source {
            SampleSource::Halton { start } => {
                if start == 0 {
                    return Err(Error::InvalidInput("halton start index must be >= 1".into()));
                }
                Ok(Candidates::Halton { next: start, d, with_heading })
            }
            SampleSource::Uniform { seed } => {
                Ok(Candidates::Uniform { rng: Pcg32::seed_from_u64(seed), d, with_heading })
            }
            SampleSource::Manual => Err(Error::InvalidInput("manual source cannot generate samples".into())),
        }
    }

    fn next_state(&mut self) -> Result<State> {
        match self {
            Candidates::Halton { next, d, with_heading } => {
                let s = halton_point(*next, *d, *with_heading)?;
                *next += 1;
                Ok(s)
            }
            Candidates::Uniform { rng, d, with_heading } => {
                let coords = (0..*d).map(|_| rng.random::<f64>()).collect();
                let heading = with_heading.then(|| TAU * rng.random::<f64>());
                Ok(State { coords, heading })
            }
        }
    }
}

/// Draws `n` free samples, at least one of them in the goal region.
pub fn sample_free(
    n: usize,
    obs: &ObstacleSet,
    goal: &GoalRegion,
    source: SampleSource,
    with_heading: bool,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    let d = obs.dim();
    check_dim(d, goal.bounds.dim())?;
    let budget = n.saturating_mul(1000);
    let mut cands = Candidates::new(source, d, with_heading)?;
    let mut states = Vec::with_capacity(n);
    let mut drawn = 0usize;
    while states.len() < n {
        if drawn == budget {
            return Err(Error::InfeasibleSampling { budget, collected: states.len() });
        }
        drawn += 1;
        let s = cands.next_state()?;
        if obs.coords_free(&s.coords) {
            states.push(s);
        }
    }

    let mut goal_indices = goal_members(&states, goal);
    if goal_indices.is_empty() {
        let g = goal_sample(obs, goal, with_heading, budget)?;
        states[n - 1] = g;
        goal_indices.push(n - 1);
    }
    Ok(SampleSet { states, goal_indices, source })
}

/// Deterministic goal sample: the goal-box center if free, otherwise the
/// first free Halton point rescaled into the goal box.
fn goal_sample(obs: &ObstacleSet, goal: &GoalRegion, with_heading: bool, budget: usize) -> Result<State> {
    let heading = with_heading.then_some(0.0);
    let center = goal.bounds.center();
    if obs.coords_free(&center) {
        return Ok(State { coords: center, heading });
    }
    let d = obs.dim();
    for j in 1..=budget as u64 {
        let h = halton_point(j, d, false)?;
        let coords: Vec<f64> = h
            .coords
            .iter()
            .zip(goal.bounds.lo.iter().zip(&goal.bounds.hi))
            .map(|(u, (l, hi))| l + u * (hi - l))
            .collect();
        if obs.coords_free(&coords) {
            return Ok(State { coords, heading });
        }
    }
    Err(Error::GoalBlocked { budget })
}
