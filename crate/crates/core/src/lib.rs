//! Group Marching Tree (GMT) motion planning.
//!
//! GMT grows a tree of lazily collision-checked connections over a fixed
//! sample set, expanding every open node whose cost-to-arrive falls below a
//! rising threshold in one data-parallel step. FMT* and an exact Dijkstra
//! search over the same neighbor graph are provided as baselines.

pub mod bench;
pub mod error;
pub mod graph;
pub mod planner;
pub mod problem;
pub mod sampling;
pub mod simulator;
pub mod space;
pub mod steering;

pub use error::{Error, Result};
pub use space::{Aabb, GoalRegion, ObstacleSet, State};
