use super::PlanResult;
use crate::error::{Error, Result};
use crate::space::{GoalRegion, ObstacleSet, State};

/// Checks a planner result against the suboptimality bound
/// `cost <= (1 + 2 lambda) * sum ||y_k - y_{k-1}||` for a waypoint corridor
/// `y_0..y_M`.
///
/// The hypotheses are verified first and a violation is an
/// [`Error::InvalidInput`] naming the failed clause: `y_0` equals `init`,
/// `y_M` lies in the goal, consecutive gaps are at most `r`, and every
/// waypoint keeps clearance at least `r` from every obstacle and from the
/// cube boundary. The bound only applies when the waypoints are present in
/// the sample set the result was planned over.
pub fn corridor_bound_check(
    waypoints: &[State],
    r: f64,
    lambda: f64,
    result: &PlanResult,
    init: &State,
    obstacles: &ObstacleSet,
    goal: &GoalRegion,
) -> Result<bool> {
    let invalid = |msg: String| Err(Error::InvalidInput(msg));
    let (Some(first), Some(last)) = (waypoints.first(), waypoints.last()) else {
        return invalid("corridor: no waypoints".into());
    };
    if !(r > 0.0 && r.is_finite()) || !(lambda > 0.0 && lambda <= 1.0) {
        return invalid(format!("corridor: need r > 0 and lambda in (0, 1], got r={r}, lambda={lambda}"));
    }
    if first.coords != init.coords {
        return invalid("corridor: first waypoint is not the initial state".into());
    }
    if !goal.contains(last) {
        return invalid("corridor: last waypoint is not in the goal region".into());
    }
    let mut total = 0.0;
    for (k, w) in waypoints.windows(2).enumerate() {
        let gap = w[0].distance(&w[1]);
        if gap > r {
            return invalid(format!("corridor: gap {gap} between waypoints {k} and {} exceeds r = {r}", k + 1));
        }
        total += gap;
    }
    for (m, y) in waypoints.iter().enumerate() {
        if y.dim() != obstacles.dim() {
            return Err(Error::DimensionMismatch { expected: obstacles.dim(), got: y.dim() });
        }
        let c = obstacles.clearance(&y.coords);
        if c < r {
            return invalid(format!("corridor: waypoint {m} has clearance {c} < r = {r}"));
        }
    }
    Ok(result.cost <= (1.0 + 2.0 * lambda) * total + 1e-9)
}
