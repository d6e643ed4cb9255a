use std::collections::BTreeSet;

use super::{best_open_parent, Label, PlanInput, PlanResult, PlanStats, Wavefront};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cost(f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// FMT*: repeatedly expands the cheapest open node `z` (smallest index on
/// ties), lazily connecting each unexplored out-neighbor of `z` to its
/// locally optimal open parent. Nodes added while expanding `z` become open
/// only after `z` is closed.
pub fn fmt_plan(input: &PlanInput<'_>) -> Result<PlanResult> {
    let n = input.samples.len();
    if !input.validate()? {
        return Ok(PlanResult::infeasible(n));
    }
    let mut tree = Wavefront::rooted(n, input.init);
    let mut open: BTreeSet<(Cost, usize)> = BTreeSet::new();
    open.insert((Cost(0.0), input.init));
    let mut stats = PlanStats::default();
    let mut iterations = 0usize;

    while let Some((_, z)) = open.pop_first() {
        iterations += 1;
        stats.group_sizes.push(1);
        if input.samples.is_goal(z) {
            return Ok(PlanResult::finish(tree, Some(z), input.samples, iterations, stats));
        }
        let mut added = Vec::new();
        for e in input.graph.out_neighbors(z) {
            let x = e.node as usize;
            if tree.label[x] != Label::Unexplored {
                continue;
            }
            stats.candidate_considerations += 1;
            // z itself is still open here, so a candidate always exists
            let Some((y, cost)) = best_open_parent(input.graph, &tree, x) else { continue };
            stats.collision_checks += 1;
            if input.edge_free(y, x) {
                added.push((x, y, cost));
            }
        }
        tree.label[z] = Label::Closed;
        stats.nodes_added.push(added.len());
        let iteration = iterations as u64;
        for (x, y, cost) in added {
            tree.add(x, y, cost, iteration);
            open.insert((Cost(cost), x));
        }
    }
    Ok(PlanResult::finish(tree, None, input.samples, iterations, stats))
}

