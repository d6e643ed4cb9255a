//! Tree planners over a precomputed [`NeighborGraph`].
//!
//! * [`gmt_plan`]: Group Marching Tree, expanding every open node below a
//!   rising cost threshold per iteration, with the per-node connection step
//!   run as a data-parallel map.
//! * [`fmt_plan`]: FMT*, expanding only the cheapest open node per step.
//! * [`dijkstra_oracle`]: exact shortest path on the fully collision-checked
//!   disk graph, used as ground truth.
//! * [`corridor_bound_check`]: the `(1 + 2 lambda)` suboptimality bound of
//!   GMT against a clear waypoint corridor.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::NeighborGraph;
use crate::sampling::SampleSet;
use crate::space::{GoalRegion, ObstacleSet, State};

mod corridor;
mod dijkstra;
mod fmt;
mod gmt;

pub use corridor::corridor_bound_check;
pub use dijkstra::dijkstra_oracle;
pub use fmt::fmt_plan;
pub use gmt::{gmt_plan, gmt_plan_observed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Unexplored,
    Open,
    Closed,
}

/// Partition of the samples plus the tree grown so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefront {
    pub label: Vec<Label>,
    pub cost_to_arrive: Vec<f64>,
    pub parent: Vec<Option<u32>>,
    pub iteration_added: Vec<Option<u64>>,
}

impl Wavefront {
    fn rooted(n: usize, root: usize) -> Self {
        let mut w = Self {
            label: vec![Label::Unexplored; n],
            cost_to_arrive: vec![f64::INFINITY; n],
            parent: vec![None; n],
            iteration_added: vec![None; n],
        };
        w.label[root] = Label::Open;
        w.cost_to_arrive[root] = 0.0;
        w.iteration_added[root] = Some(0);
        w
    }

    fn add(&mut self, x: usize, parent: usize, cost: f64, iteration: u64) {
        self.label[x] = Label::Open;
        self.cost_to_arrive[x] = cost;
        self.parent[x] = Some(parent as u32);
        self.iteration_added[x] = Some(iteration);
    }

    /// Root-to-`x` index chain.
    pub fn path_to(&self, x: usize) -> Vec<usize> {
        let mut chain = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            cur = p as usize;
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// Checks tree-membership consistency and strictly decreasing costs up
    /// every parent chain. Returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for i in 0..self.label.len() {
            let in_tree = self.label[i] != Label::Unexplored;
            if in_tree != self.cost_to_arrive[i].is_finite() {
                return Err(format!("node {i}: label {:?} with cost {}", self.label[i], self.cost_to_arrive[i]));
            }
            if let Some(p) = self.parent[i] {
                let p = p as usize;
                if self.label[p] == Label::Unexplored {
                    return Err(format!("node {i}: parent {p} not in tree"));
                }
                if self.cost_to_arrive[p].partial_cmp(&self.cost_to_arrive[i]) != Some(Ordering::Less) {
                    return Err(format!("node {i}: parent {p} is not cheaper"));
                }
            } else if in_tree && self.cost_to_arrive[i] != 0.0 {
                return Err(format!("node {i}: parentless tree node with nonzero cost"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmtParams {
    lambda: f64,
    r: f64,
}

impl GmtParams {
    pub fn new(lambda: f64, r: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidInput(format!("lambda must lie in (0, 1], got {lambda}")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        Ok(Self { lambda, r })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Group cost threshold increment `lambda * r`.
    pub fn delta(&self) -> f64 {
        self.lambda * self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanStatus {
    Success,
    FailureOpenEmpty,
    InfeasibleInput,
}

impl PlanStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanStatus::Success => "success",
            PlanStatus::FailureOpenEmpty => "failure-open-empty",
            PlanStatus::InfeasibleInput => "infeasible-input",
        }
    }
}

impl std::fmt::Display for PlanStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlanStats {
    /// Size of each expanded group (always 1 for FMT*).
    pub group_sizes: Vec<usize>,
    /// Nodes added to the tree per iteration.
    pub nodes_added: Vec<usize>,
    /// Motion collision checks performed.
    pub collision_checks: usize,
    /// (node, iteration) pairs in which an unexplored node was considered for connection.
    pub candidate_considerations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub path: Vec<State>,
    pub path_indices: Vec<usize>,
    pub cost: f64,
    pub iterations: usize,
    pub stats: PlanStats,
    pub tree: Wavefront,
}

impl PlanResult {
    fn infeasible(n: usize) -> Self {
        Self {
            status: PlanStatus::InfeasibleInput,
            path: Vec::new(),
            path_indices: Vec::new(),
            cost: f64::INFINITY,
            iterations: 0,
            stats: PlanStats::default(),
            tree: Wavefront {
                label: vec![Label::Unexplored; n],
                cost_to_arrive: vec![f64::INFINITY; n],
                parent: vec![None; n],
                iteration_added: vec![None; n],
            },
        }
    }

    fn finish(tree: Wavefront, goal: Option<usize>, samples: &SampleSet, iterations: usize, stats: PlanStats) -> Self {
        match goal {
            Some(g) => {
                let path_indices = tree.path_to(g);
                Self {
                    status: PlanStatus::Success,
                    path: path_indices.iter().map(|&i| samples.states[i].clone()).collect(),
                    cost: tree.cost_to_arrive[g],
                    path_indices,
                    iterations,
                    stats,
                    tree,
                }
            }
            None => Self {
                status: PlanStatus::FailureOpenEmpty,
                path: Vec::new(),
                path_indices: Vec::new(),
                cost: f64::INFINITY,
                iterations,
                stats,
                tree,
            },
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == PlanStatus::Success
    }
}

/// Everything a planner reads: samples, their graph, the world, and the root.
#[derive(Debug, Clone, Copy)]
pub struct PlanInput<'a> {
    pub samples: &'a SampleSet,
    pub graph: &'a NeighborGraph,
    pub obstacles: &'a ObstacleSet,
    pub goal: &'a GoalRegion,
    pub init: usize,
}

impl PlanInput<'_> {
    /// Shape errors are `Err`; a colliding root or missing goal samples are
    /// reported as an infeasible-input result by the planners.
    fn validate(&self) -> Result<bool> {
        let n = self.samples.len();
        if self.graph.len() != n {
            return Err(Error::InvalidInput(format!("graph has {} nodes, samples {}", self.graph.len(), n)));
        }
        if self.init >= n {
            return Err(Error::InvalidInput(format!("init index {} out of range", self.init)));
        }
        let init_free = self.obstacles.point_free(&self.samples.states[self.init])?;
        Ok(init_free && !self.samples.goal_indices.is_empty())
    }

    /// States actually traversed along a chain of sample indices: the
    /// vertices themselves for straight edges, the discretized curves
    /// otherwise.
    pub fn trajectory(&self, chain: &[usize]) -> Vec<State> {
        let mut out: Vec<State> = chain.first().map(|&i| self.samples.states[i].clone()).into_iter().collect();
        for w in chain.windows(2) {
            match self.graph.edge_path(w[0], w[1]) {
                Some(path) => out.extend(path.iter().skip(1).cloned()),
                None => out.push(self.samples.states[w[1]].clone()),
            }
        }
        out
    }

    /// Collision check of the stored edge `from -> to`.
    fn edge_free(&self, from: usize, to: usize) -> bool {
        match self.graph.edge_path(from, to) {
            Some([p]) => self.obstacles.coords_free(&p.coords),
            Some(path) => path.windows(2).all(|w| self.obstacles.coords_segment_free(&w[0].coords, &w[1].coords)),
            None => self
                .obstacles
                .coords_segment_free(&self.samples.states[from].coords, &self.samples.states[to].coords),
        }
    }
}

/// Runs `f` on a dedicated pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Orders by cost, then by index.
#[inline]
fn cheaper(a: (f64, usize), b: (f64, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Less => true,
        Ordering::Equal => a.1 < b.1,
        Ordering::Greater => false,
    }
}

/// Best open parent for `x`: minimizes `cost(y) + c(y, x)` over open
/// in-neighbors, smallest index on ties.
fn best_open_parent(graph: &NeighborGraph, tree: &Wavefront, x: usize) -> Option<(usize, f64)> {
    let mut best: Option<(f64, usize)> = None;
    for e in graph.in_neighbors(x) {
        let y = e.node as usize;
        if tree.label[y] != Label::Open {
            continue;
        }
        let c = tree.cost_to_arrive[y] + e.cost;
        if best.is_none_or(|b| cheaper((c, y), b)) {
            best = Some((c, y));
        }
    }
    best.map(|(c, y)| (y, c))
}
