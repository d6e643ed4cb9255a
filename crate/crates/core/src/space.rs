//! State-space geometry: states in the unit cube, box obstacles, goal regions
//! and the collision predicates used by every planner.
//!
//! Obstacles are closed sets (a point on a box face is in collision), while
//! the faces of the unit cube itself count as free space.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// A point in the planning space. `heading` is only present for Dubins
/// problems and applies to the first two coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    pub coords: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
}

impl State {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords, heading: None }
    }

    pub fn with_heading(coords: Vec<f64>, heading: f64) -> Self {
        Self { coords, heading: Some(heading) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean distance between the coordinate parts (heading ignored).
    pub fn distance(&self, other: &State) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn in_unit_cube(&self) -> bool {
        self.coords.iter().all(|&c| (0.0..=1.0).contains(&c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let b = Self { lo, hi };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.lo.len(), self.hi.len())?;
        for (k, (l, h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite bound on axis {k}")));
            }
            if l > h {
                return Err(Error::InvalidInput(format!("lo > hi on axis {k}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Closed containment test.
    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&x, (&l, &h))| l <= x && x <= h)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    /// Euclidean distance from `p` to the closest point of the box (zero inside).
    pub fn distance_to_point(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&x, (&l, &h))| {
                let d = if x < l {
                    l - x
                } else if x > h {
                    x - h
                } else {
                    0.0
                };
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Slab test of the closed segment `a + t (b - a)`, `t in [0, 1]`,
    /// against the closed box.
    pub fn intersects_segment(&self, a: &[f64], b: &[f64]) -> bool {
        let mut t_enter = 0.0_f64;
        let mut t_exit = 1.0_f64;
        for k in 0..a.len() {
            let (lo, hi) = (self.lo[k], self.hi[k]);
            let dir = b[k] - a[k];
            if dir == 0.0 {
                if a[k] < lo || a[k] > hi {
                    return false;
                }
                continue;
            }
            let (mut t0, mut t1) = ((lo - a[k]) / dir, (hi - a[k]) / dir);
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_enter = t_enter.max(t0);
            t_exit = t_exit.min(t1);
            if t_enter > t_exit {
                return false;
            }
        }
        true
    }

    /// Quick reject: does the bounding box of segment `[a, b]` touch this box?
    fn overlaps_segment_bounds(&self, a: &[f64], b: &[f64]) -> bool {
        (0..a.len()).all(|k| {
            let (smin, smax) = if a[k] <= b[k] { (a[k], b[k]) } else { (b[k], a[k]) };
            smax >= self.lo[k] && smin <= self.hi[k]
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObstacleSet {
    dim: usize,
    boxes: Vec<Aabb>,
}

impl ObstacleSet {
    pub fn new(dim: usize, boxes: Vec<Aabb>) -> Result<Self> {
        for b in &boxes {
            check_dim(dim, b.dim())?;
            b.validate()?;
        }
        Ok(Self { dim, boxes })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, boxes: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[Aabb] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn push(&mut self, b: Aabb) -> Result<()> {
        check_dim(self.dim, b.dim())?;
        b.validate()?;
        self.boxes.push(b);
        Ok(())
    }

    /// Membership in the free space. Heading is ignored.
    pub fn point_free(&self, s: &State) -> Result<bool> {
        check_dim(self.dim, s.dim())?;
        Ok(self.coords_free(&s.coords))
    }

    pub(crate) fn coords_free(&self, p: &[f64]) -> bool {
        p.iter().all(|&c| (0.0..=1.0).contains(&c)) && !self.boxes.iter().any(|b| b.contains(p))
    }

    /// Exact test of the straight segment between two states.
    pub fn segment_free(&self, a: &State, b: &State) -> Result<bool> {
        check_dim(self.dim, a.dim())?;
        check_dim(self.dim, b.dim())?;
        Ok(self.coords_segment_free(&a.coords, &b.coords))
    }

    pub(crate) fn coords_segment_free(&self, a: &[f64], b: &[f64]) -> bool {
        // Canonical endpoint order keeps the predicate exactly symmetric.
        let (a, b) = if a.partial_cmp(b) == Some(std::cmp::Ordering::Greater) { (b, a) } else { (a, b) };
        if a == b {
            return self.coords_free(a);
        }
        // The cube is convex, so both endpoints inside means the whole segment is.
        let in_cube = |p: &[f64]| p.iter().all(|&c| (0.0..=1.0).contains(&c));
        if !in_cube(a) || !in_cube(b) {
            return false;
        }
        !self
            .boxes
            .iter()
            .any(|bx| bx.overlaps_segment_bounds(a, b) && bx.intersects_segment(a, b))
    }

    pub fn polyline_free(&self, path: &[State]) -> Result<bool> {
        match path {
            [] => Err(Error::InvalidInput("empty path".into())),
            [p] => self.point_free(p),
            _ => {
                for s in path {
                    check_dim(self.dim, s.dim())?;
                }
                Ok(path.windows(2).all(|w| self.coords_segment_free(&w[0].coords, &w[1].coords)))
            }
        }
    }

    /// Upper bound on the Lebesgue measure of the free space.
    pub fn free_measure_upper_bound(&self) -> f64 {
        1.0
    }

    /// Distance from `p` to the nearest obstacle or to the cube boundary,
    /// whichever is smaller.
    pub fn clearance(&self, p: &[f64]) -> f64 {
        let cube = p.iter().map(|&c| c.min(1.0 - c)).fold(f64::INFINITY, f64::min);
        self.boxes.iter().map(|b| b.distance_to_point(p)).fold(cube, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GoalRegion {
    pub bounds: Aabb,
}

impl GoalRegion {
    pub fn new(bounds: Aabb) -> Self {
        Self { bounds }
    }

    pub fn contains(&self, s: &State) -> bool {
        self.bounds.contains(&s.coords)
    }
}
