use rayon::prelude::*;

use super::{best_open_parent, cheaper, GmtParams, Label, PlanInput, PlanResult, PlanStats, Wavefront};
use crate::error::Result;

/// Group Marching Tree.
///
/// Each iteration `i` takes the group `G` of open nodes with cost-to-arrive
/// `<= i * delta`, stops if any of them is a goal sample (returning the
/// cheapest), and otherwise tries to connect every unexplored out-neighbor
/// `x` of `G` through its single locally optimal open parent, checking only
/// that one motion for collision. `G` is then closed.
///
/// The connection step reads only iteration-start state and writes only the
/// slot of its own `x`, so it runs as a parallel map on the current rayon
/// pool and the result does not depend on the number of workers.
pub fn gmt_plan(input: &PlanInput<'_>, params: &GmtParams) -> Result<PlanResult> {
    gmt_plan_observed(input, params, |_, _| {})
}

/// [`gmt_plan`] with a hook called after every completed iteration with the
/// threshold index and the wavefront.
pub fn gmt_plan_observed(
    input: &PlanInput<'_>,
    params: &GmtParams,
    mut observe: impl FnMut(u64, &Wavefront),
) -> Result<PlanResult> {
    let n = input.samples.len();
    if !input.validate()? {
        return Ok(PlanResult::infeasible(n));
    }
    let delta = params.delta();
    let mut tree = Wavefront::rooted(n, input.init);
    let mut open: Vec<usize> = vec![input.init];
    let mut stats = PlanStats::default();
    let mut iterations = 0usize;
    let mut i: u64 = 0;

    loop {
        if open.is_empty() {
            return Ok(PlanResult::finish(tree, None, input.samples, iterations, stats));
        }
        let threshold = i as f64 * delta;
        let (group, rest): (Vec<usize>, Vec<usize>) =
            open.iter().partition(|&&x| tree.cost_to_arrive[x] <= threshold);
        if group.is_empty() {
            // Skip thresholds no open node can fall under.
            let min = rest.iter().map(|&x| tree.cost_to_arrive[x]).fold(f64::INFINITY, f64::min);
            let mut next = (min / delta).ceil() as u64;
            while (next as f64) * delta < min {
                next += 1;
            }
            i = next.max(i + 1);
            continue;
        }
        iterations += 1;
        stats.group_sizes.push(group.len());

        let mut goal_hit: Option<(f64, usize)> = None;
        for &g in &group {
            if input.samples.is_goal(g) {
                let key = (tree.cost_to_arrive[g], g);
                if goal_hit.is_none_or(|b| cheaper(key, b)) {
                    goal_hit = Some(key);
                }
            }
        }
        if let Some((_, g)) = goal_hit {
            return Ok(PlanResult::finish(tree, Some(g), input.samples, iterations, stats));
        }

        let mut frontier: Vec<usize> = group
            .iter()
            .flat_map(|&z| input.graph.out_neighbors(z).iter().map(|e| e.node as usize))
            .filter(|&x| tree.label[x] == Label::Unexplored)
            .collect();
        frontier.sort_unstable();
        frontier.dedup();

        let snapshot = &tree;
        // None: no open parent; Some((y, cost, free)): one checked motion
        let decisions: Vec<Option<(usize, f64, bool)>> = frontier
            .par_iter()
            .with_min_len(32)
            .map(|&x| {
                let (y, cost) = best_open_parent(input.graph, snapshot, x)?;
                Some((y, cost, input.edge_free(y, x)))
            })
            .collect();

        stats.candidate_considerations += frontier.len();
        let mut added = Vec::new();
        for (&x, d) in frontier.iter().zip(decisions) {
            let Some((y, cost, free)) = d else { continue };
            stats.collision_checks += 1;
            if free {
                tree.add(x, y, cost, i);
                added.push(x);
            }
        }
        stats.nodes_added.push(added.len());
        for &g in &group {
            tree.label[g] = Label::Closed;
        }
        open = rest;
        open.extend(added);
        observe(i, &tree);
        i += 1;
    }
}
