//! Problem files: the JSON document describing a planning problem, its
//! validation with field paths, and the bundled scenes.
//!
//! ```json
//! {
//!   "schema": "gmt-problem/1",
//!   "dimension": 2,
//!   "steering": { "kind": "euclidean" },
//!   "obstacles": [ { "lo": [0.4, 0.4], "hi": [0.6, 0.6] } ],
//!   "init": { "coords": [0.1, 0.1] },
//!   "goal": { "lo": [0.85, 0.85], "hi": [0.95, 0.95] },
//!   "n": 2000,
//!   "lambda": 0.5,
//!   "eta": 0.0,
//!   "sampling": { "kind": "halton", "start": 1 }
//! }
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{field, Error, Result};
use crate::graph::cache::{CacheKey, GraphCache};
use crate::graph::{connection_radius, NeighborGraph, RadiusParams};
use crate::planner::{GmtParams, PlanInput};
use crate::sampling::{sample_free, SampleSet, SampleSource};
use crate::space::{Aabb, GoalRegion, ObstacleSet, State};
use crate::steering::SteeringModel;

pub const SCHEMA: &str = "gmt-problem/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    pub steering: SteeringModel,
    pub obstacles: Vec<Aabb>,
    pub init: State,
    pub goal: Aabb,
    pub n: usize,
    pub lambda: f64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_override: Option<f64>,
    #[serde(default)]
    pub sampling: SampleSource,
}

impl ProblemFile {
    /// Parses and validates. Errors are [`Error::Field`] carrying the path of
    /// the offending field, e.g. `obstacles[3]` or `steering.rho`.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let p: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            field(if path == "." { "<root>".to_string() } else { path }, e.inner())
        })?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(field("schema", format!("expected \"{SCHEMA}\", got \"{}\"", self.schema)));
        }
        let d = self.dimension;
        if d < 2 {
            return Err(field("dimension", "must be at least 2"));
        }
        self.steering.validate().map_err(|e| field("steering", e))?;
        if self.steering.is_dubins() && d > 3 {
            return Err(field("dimension", "dubins_airplane needs 2 or 3 coordinates"));
        }
        for (k, b) in self.obstacles.iter().enumerate() {
            check_box(b, d).map_err(|m| field(format!("obstacles[{k}]"), m))?;
        }
        if self.init.dim() != d {
            return Err(field("init.coords", format!("expected {d} coordinates, got {}", self.init.dim())));
        }
        if self.init.coords.iter().any(|c| !c.is_finite()) || !self.init.in_unit_cube() {
            return Err(field("init.coords", "must lie in the unit cube"));
        }
        match (self.steering.is_dubins(), self.init.heading) {
            (true, None) => return Err(field("init.heading", "required for dubins_airplane")),
            (false, Some(_)) => return Err(field("init.heading", "only allowed for dubins_airplane")),
            (true, Some(h)) if !h.is_finite() => return Err(field("init.heading", "must be finite")),
            _ => {}
        }
        if !self.obstacle_set()?.coords_free(&self.init.coords) {
            return Err(field("init", "in collision"));
        }
        check_box(&self.goal, d).map_err(|m| field("goal", m))?;
        if self.n < 2 {
            return Err(field("n", "must be at least 2"));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(field("lambda", "must lie in (0, 1]"));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(field("eta", "must be finite and >= 0"));
        }
        if let Some(r) = self.radius_override {
            if !(r > 0.0 && r.is_finite()) {
                return Err(field("radius_override", "must be positive"));
            }
        }
        if self.sampling == SampleSource::Manual {
            return Err(field("sampling", "must be halton or uniform"));
        }
        if let SampleSource::Halton { start: 0 } = self.sampling {
            return Err(field("sampling.start", "Halton indices start at 1"));
        }
        Ok(())
    }

    pub fn obstacle_set(&self) -> Result<ObstacleSet> {
        ObstacleSet::new(self.dimension, self.obstacles.clone())
    }

    pub fn goal_region(&self) -> GoalRegion {
        GoalRegion::new(self.goal.clone())
    }

    /// The override if given, otherwise the asymptotic-optimality radius with
    /// `d` the number of coordinates.
    pub fn radius(&self) -> Result<f64> {
        match self.radius_override {
            Some(r) => Ok(r),
            None => connection_radius(RadiusParams {
                eta: self.eta,
                d: self.dimension,
                n: self.n,
                mu_free: self.obstacle_set()?.free_measure_upper_bound(),
            }),
        }
    }

    pub fn gmt_params(&self) -> Result<GmtParams> {
        GmtParams::new(self.lambda, self.radius()?)
    }

    /// Hash of the canonical serialization of everything the samples and the
    /// graph depend on, used to key graph caches. Ignores `description` and
    /// `lambda`.
    pub fn hash(&self) -> u64 {
        let canonical = Self { description: None, lambda: 1.0, ..self.clone() };
        let bytes = serde_json::to_vec(&canonical).expect("problem files always serialize");
        let digest = Sha256::digest(&bytes);
        u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
    }

    /// Draws the samples (init at index 0) and builds the neighbor graph.
    pub fn instantiate(&self) -> Result<Instance> {
        self.instantiate_cached(None)
    }

    /// As [`instantiate`](Self::instantiate), reading the graph from `cache`
    /// when it holds a matching entry and writing it there otherwise.
    pub fn instantiate_cached(&self, cache: Option<&std::path::Path>) -> Result<Instance> {
        self.validate()?;
        let obstacles = self.obstacle_set()?;
        let goal = self.goal_region();
        let samples = sample_free(self.n, &obstacles, &goal, self.sampling, self.steering.is_dubins())?
            .with_init(self.init.clone(), &goal);
        let r = self.radius()?;
        let key = CacheKey { problem_hash: self.hash(), n: samples.len() as u32, radius: r, model: self.steering };
        let cached = cache
            .filter(|p| p.exists())
            .and_then(|p| GraphCache::read(p).ok())
            .and_then(|c| c.into_graph(&key, &samples).ok());
        let graph = match cached {
            Some(g) => g,
            None => {
                let g = NeighborGraph::build(&samples, &self.steering, r)?;
                if let Some(p) = cache {
                    GraphCache::from_graph(&g, key.problem_hash, self.steering).write_atomic(p)?;
                }
                g
            }
        };
        Ok(Instance { samples, graph, obstacles, goal, params: GmtParams::new(self.lambda, r)? })
    }
}

fn check_box(b: &Aabb, d: usize) -> std::result::Result<(), String> {
    if b.dim() != d || b.hi.len() != d {
        return Err(format!("expected {d} coordinates in lo and hi"));
    }
    b.validate().map_err(|e| match e {
        Error::InvalidInput(m) => m,
        other => other.to_string(),
    })
}

/// A sampled, graph-built problem ready for planning.
#[derive(Debug, Clone)]
pub struct Instance {
    pub samples: SampleSet,
    pub graph: NeighborGraph,
    pub obstacles: ObstacleSet,
    pub goal: GoalRegion,
    pub params: GmtParams,
}

impl Instance {
    pub fn input(&self) -> PlanInput<'_> {
        PlanInput { samples: &self.samples, graph: &self.graph, obstacles: &self.obstacles, goal: &self.goal, init: 0 }
    }
}

pub const SCENES: [&str; 6] = ["rectangles-2d", "rectangles-3d", "rectangles-6d", "maze-3d", "forest-dubins", "cave-sim"];

/// Bundled scene by name.
pub fn scene(name: &str) -> Result<ProblemFile> {
    let text = match name {
        "rectangles-2d" => include_str!("../scenes/rectangles-2d.json"),
        "rectangles-3d" => include_str!("../scenes/rectangles-3d.json"),
        "rectangles-6d" => include_str!("../scenes/rectangles-6d.json"),
        "maze-3d" => include_str!("../scenes/maze-3d.json"),
        "forest-dubins" => include_str!("../scenes/forest-dubins.json"),
        "cave-sim" => include_str!("../scenes/cave-sim.json"),
        _ => return Err(Error::InvalidInput(format!("unknown scene \"{name}\"; known: {}", SCENES.join(", ")))),
    };
    ProblemFile::from_json(text)
}

/// Splits boxes into equal slabs along their longest axis until there are
/// `target` boxes. The union, and so the blocked region, is unchanged.
pub fn refine_obstacles(obstacles: &[Aabb], target: usize) -> Result<Vec<Aabb>> {
    let m = obstacles.len();
    if target < m {
        return Err(Error::InvalidInput(format!("cannot refine {m} boxes into {target}")));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(target);
    for (i, b) in obstacles.iter().enumerate() {
        let pieces = target / m + usize::from(i < target % m);
        let axis = (0..b.dim())
            .max_by(|&a, &c| (b.hi[a] - b.lo[a]).total_cmp(&(b.hi[c] - b.lo[c])).then(c.cmp(&a)))
            .unwrap_or(0);
        let (lo, hi) = (b.lo[axis], b.hi[axis]);
        for k in 0..pieces {
            let mut piece = b.clone();
            // endpoints computed by the same expression so slabs share faces exactly
            let cut = |j: usize| if j == pieces { hi } else { lo + (hi - lo) * j as f64 / pieces as f64 };
            piece.lo[axis] = cut(k);
            piece.hi[axis] = cut(k + 1);
            out.push(piece);
        }
    }
    Ok(out)
}
