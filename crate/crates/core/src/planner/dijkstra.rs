use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{cheaper, Label, PlanInput, PlanResult, PlanStats, Wavefront};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Exact shortest path on the disk graph after eagerly collision-checking
/// every edge. Returns the cheapest goal sample (smallest index on ties).
pub fn dijkstra_oracle(input: &PlanInput<'_>) -> Result<PlanResult> {
    let n = input.samples.len();
    if !input.validate()? {
        return Ok(PlanResult::infeasible(n));
    }
    let mut stats = PlanStats::default();
    let free: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            input
                .graph
                .out_neighbors(i)
                .iter()
                .filter(|e| input.edge_free(i, e.node as usize))
                .map(|e| (e.node as usize, e.cost))
                .collect()
        })
        .collect();
    stats.collision_checks = input.graph.edge_count();

    let mut tree = Wavefront::rooted(n, input.init);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Entry(0.0, input.init)));
    let mut settled = 0usize;
    while let Some(Reverse(Entry(d, u))) = heap.pop() {
        if tree.label[u] == Label::Closed || d > tree.cost_to_arrive[u] {
            continue;
        }
        tree.label[u] = Label::Closed;
        settled += 1;
        for &(v, c) in &free[u] {
            if tree.label[v] == Label::Closed {
                continue;
            }
            let nd = d + c;
            if nd < tree.cost_to_arrive[v] {
                tree.cost_to_arrive[v] = nd;
                tree.parent[v] = Some(u as u32);
                tree.label[v] = Label::Open;
                tree.iteration_added[v] = Some(settled as u64);
                heap.push(Reverse(Entry(nd, v)));
            }
        }
    }

    let mut best: Option<(f64, usize)> = None;
    for &g in &input.samples.goal_indices {
        let c = tree.cost_to_arrive[g];
        if c.is_finite() && best.is_none_or(|b| cheaper((c, g), b)) {
            best = Some((c, g));
        }
    }
    Ok(PlanResult::finish(tree, best.map(|b| b.1), input.samples, settled, stats))
}
