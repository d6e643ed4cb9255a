//! Local connection models. Each model yields the cost of connecting two
//! states and a path of states between them.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::State;

mod dubins;

pub use dubins::{DubinsPath, DubinsWord};

const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SteeringModel {
    /// Straight lines with arc-length cost.
    Euclidean,
    /// Planar Dubins car over the first two coordinates, with an optional
    /// third coordinate acting as a free single-integrator altitude.
    DubinsAirplane {
        rho: f64,
        /// Max arc length between consecutive path states; `rho / 10` if unset.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        discretization_step: Option<f64>,
        /// Cost is the helical arc length `sqrt(L^2 + dz^2)`; when false only
        /// the planar length counts.
        #[serde(default = "default_true")]
        helical: bool,
    },
}

fn default_true() -> bool {
    true
}

impl SteeringModel {
    pub fn dubins(rho: f64) -> Self {
        SteeringModel::DubinsAirplane { rho, discretization_step: None, helical: true }
    }

    pub fn is_dubins(&self) -> bool {
        matches!(self, SteeringModel::DubinsAirplane { .. })
    }

    /// Exact models are checked segment-wise; others through their cached
    /// discretized path.
    pub fn is_exact(&self) -> bool {
        !self.is_dubins()
    }

    pub fn validate(&self) -> Result<()> {
        if let SteeringModel::DubinsAirplane { rho, discretization_step, .. } = *self {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(Error::InvalidInput("rho must be positive".into()));
            }
            if let Some(step) = discretization_step {
                if !(step > 0.0 && step.is_finite()) {
                    return Err(Error::InvalidInput("discretization_step must be positive".into()));
                }
            }
        }
        Ok(())
    }

    pub fn discretization_step(&self) -> Option<f64> {
        match *self {
            SteeringModel::Euclidean => None,
            SteeringModel::DubinsAirplane { rho, discretization_step, .. } => {
                Some(discretization_step.unwrap_or(rho / 10.0))
            }
        }
    }

    /// Checks that a state has the shape this model expects.
    pub fn check_state(&self, s: &State) -> Result<()> {
        match self {
            SteeringModel::Euclidean => {
                if s.heading.is_some() {
                    return Err(Error::InvalidInput("euclidean states carry no heading".into()));
                }
            }
            SteeringModel::DubinsAirplane { .. } => {
                if s.heading.is_none() {
                    return Err(Error::InvalidInput("dubins states need a heading".into()));
                }
                if !(2..=3).contains(&s.dim()) {
                    return Err(Error::InvalidInput("dubins states have 2 or 3 coordinates".into()));
                }
            }
        }
        Ok(())
    }

    fn check_pair(&self, a: &State, b: &State) -> Result<()> {
        self.check_state(a)?;
        self.check_state(b)?;
        crate::error::check_dim(a.dim(), b.dim())
    }

    /// A lower bound on the connection cost that needs no steering solve.
    pub fn cost_lower_bound(&self, a: &State, b: &State) -> f64 {
        match self {
            SteeringModel::DubinsAirplane { helical: false, .. } => {
                (a.coords[0] - b.coords[0]).hypot(a.coords[1] - b.coords[1])
            }
            _ => a.distance(b),
        }
    }

    /// Connection cost only.
    pub fn cost(&self, a: &State, b: &State) -> Result<f64> {
        self.check_pair(a, b)?;
        Ok(match *self {
            SteeringModel::Euclidean => a.distance(b),
            SteeringModel::DubinsAirplane { rho, helical, .. } => match DubinsLift::solve(a, b, rho) {
                None => 0.0,
                Some(lift) => lift.cost(helical),
            },
        })
    }

    pub fn connect(&self, a: &State, b: &State) -> Result<Connection> {
        self.check_pair(a, b)?;
        match *self {
            SteeringModel::Euclidean => {
                Ok(Connection { cost: a.distance(b), path: vec![a.clone(), b.clone()], exact: true })
            }
            SteeringModel::DubinsAirplane { rho, helical, .. } => {
                let step = self.discretization_step().expect("dubins step");
                let Some(lift) = DubinsLift::solve(a, b, rho) else {
                    return Ok(Connection { cost: 0.0, path: vec![a.clone()], exact: false });
                };
                let cost = lift.cost(helical);
                let path = lift.discretize(a, b, step);
                Ok(Connection { cost, path, exact: false })
            }
        }
    }

    /// `cost(a, b) <= r`, skipping the steering solve when the cheap lower
    /// bound already exceeds `r`.
    pub fn within_radius(&self, a: &State, b: &State, r: f64) -> Result<bool> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        self.check_pair(a, b)?;
        if self.cost_lower_bound(a, b) > r {
            return Ok(false);
        }
        Ok(self.cost(a, b)? <= r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub cost: f64,
    /// From source to target, both included.
    pub path: Vec<State>,
    /// Straight segment that can be collision-checked exactly.
    pub exact: bool,
}

/// Planar Dubins path plus the altitude change it is lifted through.
struct DubinsLift {
    planar: DubinsPath,
    dz: f64,
}

impl DubinsLift {
    /// `None` for numerically coincident poses.
    fn solve(a: &State, b: &State, rho: f64) -> Option<Self> {
        let dz = if a.dim() == 3 { b.coords[2] - a.coords[2] } else { 0.0 };
        let (ha, hb) = (a.heading.unwrap_or(0.0), b.heading.unwrap_or(0.0));
        let dh = (hb - ha).rem_euclid(TAU);
        let dh = dh.min(TAU - dh);
        let planar_gap = (b.coords[0] - a.coords[0]).hypot(b.coords[1] - a.coords[1]);
        if planar_gap < DEGENERATE_TOL && dh < DEGENERATE_TOL && dz.abs() < DEGENERATE_TOL {
            return None;
        }
        let planar = DubinsPath::shortest(
            [a.coords[0], a.coords[1], ha],
            [b.coords[0], b.coords[1], hb],
            rho,
        );
        Some(Self { planar, dz })
    }

    fn cost(&self, helical: bool) -> f64 {
        let l = self.planar.length();
        if helical {
            l.hypot(self.dz)
        } else {
            l
        }
    }

    fn discretize(&self, a: &State, b: &State, step: f64) -> Vec<State> {
        let lp = self.planar.length();
        if lp == 0.0 {
            return vec![a.clone(), b.clone()];
        }
        let arc = lp.hypot(self.dz);
        let pieces = ((arc / step).ceil() as usize).max(1);
        let mut path = Vec::with_capacity(pieces + 1);
        for k in 0..pieces {
            let s = lp * k as f64 / pieces as f64;
            let [x, y, h] = self.planar.sample(s);
            let mut coords = vec![x, y];
            if a.dim() == 3 {
                coords.push(a.coords[2] + self.dz * s / lp);
            }
            path.push(State::with_heading(coords, h.rem_euclid(TAU)));
        }
        path.push(b.clone());
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pose(x: f64, y: f64, h: f64) -> State {
        State::with_heading(vec![x, y], h)
    }

    #[test]
    fn euclidean_connection() {
        let c = SteeringModel::Euclidean
            .connect(&State::new(vec![0.0, 0.0]), &State::new(vec![0.6, 0.8]))
            .unwrap();
        assert!((c.cost - 1.0).abs() < 1e-15);
        assert_eq!(c.path.len(), 2);
        assert!(c.exact);
    }

    #[test]
    fn dubins_straight_and_climb() {
        let m = SteeringModel::dubins(0.1);
        let c = m.connect(&pose(0.0, 0.0, 0.0), &pose(0.5, 0.0, 0.0)).unwrap();
        assert!((c.cost - 0.5).abs() < 1e-12, "{}", c.cost);
        assert!(!c.exact);
        let a = State::with_heading(vec![0.0, 0.0, 0.0], 0.0);
        let b = State::with_heading(vec![0.0, 0.0, 0.3], 0.0);
        let c = m.connect(&a, &b).unwrap();
        assert!((c.cost - 0.3).abs() < 1e-12);
        assert_eq!(c.path.first(), Some(&a));
        assert_eq!(c.path.last(), Some(&b));
    }

    #[test]
    fn dubins_degenerate_pair() {
        let m = SteeringModel::dubins(0.1);
        let a = pose(0.3, 0.3, 1.0);
        let c = m.connect(&a, &a).unwrap();
        assert_eq!(c.cost, 0.0);
        assert_eq!(c.path, vec![a]);
    }

    #[test]
    fn planar_only_cost_ignores_altitude() {
        let m = SteeringModel::DubinsAirplane { rho: 0.1, discretization_step: None, helical: false };
        let a = State::with_heading(vec![0.0, 0.0, 0.0], 0.0);
        let b = State::with_heading(vec![0.5, 0.0, 0.3], 0.0);
        assert!((m.cost(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert!(m.within_radius(&a, &b, 0.55).unwrap());
    }

    #[test]
    fn incompatible_states_rejected() {
        let m = SteeringModel::dubins(0.1);
        assert!(m.connect(&State::new(vec![0.0, 0.0]), &pose(0.1, 0.0, 0.0)).is_err());
        assert!(SteeringModel::Euclidean.connect(&pose(0.0, 0.0, 0.0), &State::new(vec![0.1, 0.0])).is_err());
        assert!(m.validate().is_ok());
        assert!(SteeringModel::dubins(0.0).validate().is_err());
    }

    #[test]
    fn radius_predicate() {
        let e = SteeringModel::Euclidean;
        let o = State::new(vec![0.0, 0.0]);
        assert!(e.within_radius(&o, &State::new(vec![0.1, 0.0]), 0.1).unwrap());
        assert!(!e.within_radius(&o, &State::new(vec![0.2, 0.0]), 0.1).unwrap());
        assert!(e.within_radius(&o, &o, 0.0).is_err());
        // lower bound already exceeds r
        let m = SteeringModel::dubins(0.1);
        assert!(!m.within_radius(&pose(0.0, 0.0, 0.0), &pose(0.5, 0.0, 0.0), 0.3).unwrap());
    }

    #[test]
    fn discretization_spacing_respects_step() {
        let m = SteeringModel::DubinsAirplane { rho: 0.1, discretization_step: Some(0.01), helical: true };
        let a = State::with_heading(vec![0.2, 0.2, 0.1], 0.3);
        let b = State::with_heading(vec![0.4, 0.1, 0.4], 2.5);
        let c = m.connect(&a, &b).unwrap();
        for w in c.path.windows(2) {
            // chords are never longer than the arc they subtend
            assert!(w[0].distance(&w[1]) <= 0.01 + 1e-12);
        }
    }

    fn arb_pose() -> impl Strategy<Value = State> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..TAU).prop_map(|(x, y, z, h)| State::with_heading(vec![x, y, z], h))
    }

    proptest! {
        #[test]
        fn euclidean_is_symmetric(a in prop::collection::vec(0.0..1.0f64, 3), b in prop::collection::vec(0.0..1.0f64, 3)) {
            let (a, b) = (State::new(a), State::new(b));
            prop_assert_eq!(SteeringModel::Euclidean.cost(&a, &b).unwrap(), SteeringModel::Euclidean.cost(&b, &a).unwrap());
        }

        #[test]
        fn dubins_dominates_straight_line(a in arb_pose(), b in arb_pose(), rho in 0.01..0.3f64) {
            let m = SteeringModel::dubins(rho);
            prop_assert!(m.cost(&a, &b).unwrap() >= a.distance(&b) - 1e-12);
        }

        #[test]
        fn dubins_path_ends_at_target(a in arb_pose(), b in arb_pose(), rho in 0.02..0.3f64) {
            let m = SteeringModel::dubins(rho);
            let c = m.connect(&a, &b).unwrap();
            prop_assert_eq!(&c.path[0], &a);
            prop_assert_eq!(c.path.last().unwrap(), &b);
            // the sampled pose just before the end is within one step of the target
            let n = c.path.len();
            if n > 2 {
                let step = m.discretization_step().unwrap();
                prop_assert!(c.path[n - 2].distance(&b) <= step + 1e-9);
            }
            let planar = DubinsPath::shortest([a.coords[0], a.coords[1], a.heading.unwrap()], [b.coords[0], b.coords[1], b.heading.unwrap()], rho);
            let end = planar.sample(planar.length());
            prop_assert!((end[0] - b.coords[0]).abs() < 1e-9 && (end[1] - b.coords[1]).abs() < 1e-9);
            let dh = (end[2] - b.heading.unwrap()).rem_euclid(TAU);
            prop_assert!(dh.min(TAU - dh) < 1e-9);
        }

        #[test]
        fn dubins_is_rigid_motion_invariant(a in arb_pose(), b in arb_pose(), rot in 0.0..TAU, tx in -1.0..1.0f64, ty in -1.0..1.0f64) {
            let m = SteeringModel::dubins(0.1);
            let tf = |s: &State| {
                let (c, sn) = (rot.cos(), rot.sin());
                let (x, y) = (s.coords[0], s.coords[1]);
                State::with_heading(vec![c * x - sn * y + tx, sn * x + c * y + ty, s.coords[2]], (s.heading.unwrap() + rot).rem_euclid(TAU))
            };
            let c0 = m.cost(&a, &b).unwrap();
            let c1 = m.cost(&tf(&a), &tf(&b)).unwrap();
            prop_assert!((c0 - c1).abs() < 1e-9, "{} vs {}", c0, c1);
        }

        #[test]
        fn halving_step_halves_spacing(a in arb_pose(), b in arb_pose()) {
            let coarse = SteeringModel::DubinsAirplane { rho: 0.1, discretization_step: Some(0.02), helical: true };
            let fine = SteeringModel::DubinsAirplane { rho: 0.1, discretization_step: Some(0.01), helical: true };
            let spacing = |m: &SteeringModel| {
                m.connect(&a, &b).unwrap().path.windows(2).map(|w| w[0].distance(&w[1])).fold(0.0, f64::max)
            };
            prop_assert!(spacing(&fine) <= spacing(&coarse) + 1e-12);
        }
    }
}
