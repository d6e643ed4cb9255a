//! Connection radius and the precomputed disk graph over a sample set.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampling::SampleSet;
use crate::space::State;
use crate::steering::SteeringModel;

pub mod cache;

/// Inputs of the connection-radius formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusParams {
    /// Tuning parameter, `>= 0`.
    pub eta: f64,
    pub d: usize,
    pub n: usize,
    /// Upper bound on the free-space measure, in `(0, 1]`.
    pub mu_free: f64,
}

/// Volume of the unit ball in `d` dimensions, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // zeta_d = zeta_{d-2} * 2 pi / d
    let (mut v, mut k) = if d.is_multiple_of(2) { (1.0, 0) } else { (2.0, 1) };
    while k < d {
        k += 2;
        v *= 2.0 * PI / k as f64;
    }
    v
}

/// `r = 4 (1+eta)^(1/d) (1/d)^(1/d) (mu/zeta_d)^(1/d) (log n / n)^(1/d)`.
pub fn connection_radius(p: RadiusParams) -> Result<f64> {
    if p.n < 2 {
        return Err(Error::InvalidInput("connection radius needs n >= 2".into()));
    }
    if p.d < 2 {
        return Err(Error::InvalidInput("connection radius needs d >= 2".into()));
    }
    if !p.eta.is_finite() || p.eta < 0.0 {
        return Err(Error::InvalidInput("eta must be >= 0".into()));
    }
    if !(p.mu_free > 0.0 && p.mu_free <= 1.0) {
        return Err(Error::InvalidInput("mu_free must lie in (0, 1]".into()));
    }
    let d = p.d as f64;
    let n = p.n as f64;
    let inner = (1.0 + p.eta) / d * p.mu_free / unit_ball_volume(p.d) * n.ln() / n;
    Ok(4.0 * inner.powf(1.0 / d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Target for out-lists, source for in-lists.
    pub node: u32,
    pub cost: f64,
}

type CurvedEdge = (u32, Vec<State>);

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    radius: f64,
    out: Vec<Vec<Edge>>,
    inn: Vec<Vec<Edge>>,
    edge_paths: HashMap<(u32, u32), Vec<State>>,
}

impl NeighborGraph {
    /// Builds the directed disk graph `{(i, j) : cost(s_i, s_j) <= r}`.
    ///
    /// Candidates come from a uniform grid of cell size `r` over the first
    /// (up to three) coordinates; the cheap cost lower bound makes this a
    /// superset filter, so the result matches an all-pairs scan exactly.
    /// Runs on the current rayon pool.
    pub fn build(samples: &SampleSet, model: &SteeringModel, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        model.validate()?;
        let states = &samples.states;
        for s in states {
            model.check_state(s)?;
        }
        if let Some(first) = states.first() {
            if let Some(bad) = states.iter().find(|s| s.dim() != first.dim()) {
                return Err(Error::DimensionMismatch { expected: first.dim(), got: bad.dim() });
            }
        }
        // the grid must not prune on axes the cost bound ignores
        let bounded_axes = match model {
            SteeringModel::DubinsAirplane { helical: false, .. } => 2,
            _ => 3,
        };
        let axes = states.first().map_or(0, |s| s.dim().min(bounded_axes));
        let cell = |s: &State| -> [i64; 3] {
            let mut k = [0i64; 3];
            for (a, slot) in k.iter_mut().enumerate().take(axes) {
                *slot = (s.coords[a] / r).floor() as i64;
            }
            k
        };
        let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            grid.entry(cell(s)).or_default().push(i as u32);
        }
        let offsets: Vec<[i64; 3]> = {
            let span = |a: usize| if a < axes { -1..=1 } else { 0..=0 };
            let mut v = Vec::new();
            for x in span(0) {
                for y in span(1) {
                    for z in span(2) {
                        v.push([x, y, z]);
                    }
                }
            }
            v
        };

        // per source: out-edges and the curves of those edges
        let rows: Vec<(Vec<Edge>, Vec<CurvedEdge>)> = states
            .par_iter()
            .enumerate()
            .map(|(i, si)| {
                let c = cell(si);
                let mut cands: Vec<u32> = Vec::new();
                for o in &offsets {
                    let key = [c[0] + o[0], c[1] + o[1], c[2] + o[2]];
                    if let Some(bucket) = grid.get(&key) {
                        cands.extend(bucket.iter().copied().filter(|&j| j as usize != i));
                    }
                }
                cands.sort_unstable();
                let mut edges = Vec::new();
                let mut paths = Vec::new();
                for j in cands {
                    let sj = &states[j as usize];
                    if model.cost_lower_bound(si, sj) > r {
                        continue;
                    }
                    if model.is_exact() {
                        let cost = model.cost(si, sj).expect("states validated");
                        if cost <= r {
                            edges.push(Edge { node: j, cost });
                        }
                    } else {
                        let conn = model.connect(si, sj).expect("states validated");
                        if conn.cost <= r {
                            edges.push(Edge { node: j, cost: conn.cost });
                            paths.push((j, conn.path));
                        }
                    }
                }
                (edges, paths)
            })
            .collect();

        let mut out = Vec::with_capacity(rows.len());
        let mut edge_paths = HashMap::new();
        for (i, (edges, paths)) in rows.into_iter().enumerate() {
            for (j, p) in paths {
                edge_paths.insert((i as u32, j), p);
            }
            out.push(edges);
        }
        let inn = invert(&out);
        Ok(Self { radius: r, out, inn, edge_paths })
    }

    /// Rebuilds a graph from stored out-lists, recomputing in-lists and, for
    /// curved models, the discretized edge paths.
    pub fn from_out_lists(
        out: Vec<Vec<Edge>>,
        radius: f64,
        samples: &SampleSet,
        model: &SteeringModel,
    ) -> Result<Self> {
        if out.len() != samples.len() {
            return Err(Error::InvalidInput(format!(
                "graph has {} nodes but sample set has {}",
                out.len(),
                samples.len()
            )));
        }
        let mut edge_paths = HashMap::new();
        for (i, row) in out.iter().enumerate() {
            for e in row {
                if e.node as usize >= out.len() || e.node as usize == i {
                    return Err(Error::InvalidInput(format!("bad edge {i} -> {}", e.node)));
                }
                if !model.is_exact() {
                    let c = model.connect(&samples.states[i], &samples.states[e.node as usize])?;
                    edge_paths.insert((i as u32, e.node), c.path);
                }
            }
        }
        let inn = invert(&out);
        Ok(Self { radius, out, inn, edge_paths })
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Targets reachable from `i`, sorted by index.
    pub fn out_neighbors(&self, i: usize) -> &[Edge] {
        &self.out[i]
    }

    /// Sources that reach `i`, sorted by index.
    pub fn in_neighbors(&self, i: usize) -> &[Edge] {
        &self.inn[i]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Cached discretized path of a curved edge.
    pub fn edge_path(&self, from: usize, to: usize) -> Option<&[State]> {
        self.edge_paths.get(&(from as u32, to as u32)).map(Vec::as_slice)
    }

    pub fn mean_out_degree(&self) -> f64 {
        if self.out.is_empty() {
            0.0
        } else {
            self.edge_count() as f64 / self.out.len() as f64
        }
    }
}

fn invert(out: &[Vec<Edge>]) -> Vec<Vec<Edge>> {
    let mut inn = vec![Vec::new(); out.len()];
    // sources visited in ascending order, so in-lists come out sorted
    for (i, row) in out.iter().enumerate() {
        for e in row {
            inn[e.node as usize].push(Edge { node: i as u32, cost: e.cost });
        }
    }
    inn
}
