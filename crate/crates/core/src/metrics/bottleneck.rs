//! Exact bottleneck assignment on dense square cost matrices.
//!
//! Starting from a simple lower bound as threshold, Hopcroft–Karp finds a maximum
//! matching among edges no more costly than the threshold. Each remaining free row
//! is then matched along an augmenting path of least bottleneck. The running
//! maximum never overshoots the optimum: while the matching only uses edges within
//! the optimal value, an optimal perfect matching yields an augmenting path within
//! that value too.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Minimum over bijections of the maximum matched cost, never below `floor`.
///
/// Once it is certain the result is at least `cap`, some value `>= cap` is returned
/// early; callers minimizing over several matrices pass their best value so far.
pub(crate) fn bottleneck_value(costs: &[f64], k: usize, floor: f64, cap: f64) -> f64 {
    debug_assert_eq!(costs.len(), k * k);
    if k == 0 {
        return floor;
    }
    let mut lb = floor;
    let mut col_min = vec![f64::INFINITY; k];
    for row in costs.chunks(k) {
        let mut row_min = f64::INFINITY;
        for (c, &v) in col_min.iter_mut().zip(row) {
            row_min = row_min.min(v);
            *c = c.min(v);
        }
        lb = lb.max(row_min);
    }
    lb = col_min.iter().fold(lb, |a, &b| a.max(b));
    if lb >= cap {
        return lb;
    }

    let mut match_row = vec![NONE; k];
    let mut match_col = vec![NONE; k];
    hopcroft_karp(costs, k, lb, &mut match_row, &mut match_col);
    let mut search = Search::new(k);
    let mut best = lb;
    while match_row.contains(&NONE) {
        let (v, j) = search.cheapest_augmentation(costs, &match_row, &match_col);
        if j == NONE || v >= cap {
            return v.max(best);
        }
        best = best.max(v);
        search.augment(j, &mut match_row, &mut match_col);
    }
    best
}

/// Scratch space for minimax label searches.
struct Search {
    k: usize,
    label: Vec<f64>,
    done: Vec<bool>,
    parent: Vec<usize>,
}

impl Search {
    fn new(k: usize) -> Self {
        Self {
            k,
            label: vec![f64::INFINITY; k],
            done: vec![false; k],
            parent: vec![NONE; k],
        }
    }

    /// Smallest value `b` such that some augmenting path for the current matching
    /// uses only unmatched edges costing at most `b`, with the free column ending
    /// such a path. Returns `(inf, NONE)` when no augmenting path exists.
    fn cheapest_augmentation(
        &mut self,
        costs: &[f64],
        match_row: &[usize],
        match_col: &[usize],
    ) -> (f64, usize) {
        let k = self.k;
        self.label.fill(f64::INFINITY);
        self.done.fill(false);
        for (i, _) in match_row.iter().enumerate().filter(|(_, &m)| m == NONE) {
            for (w, &c) in costs[i * k..(i + 1) * k].iter().enumerate() {
                if c < self.label[w] {
                    self.label[w] = c;
                    self.parent[w] = i;
                }
            }
        }
        loop {
            let mut j = NONE;
            let mut v = f64::INFINITY;
            for w in 0..k {
                if !self.done[w] && self.label[w] < v {
                    v = self.label[w];
                    j = w;
                }
            }
            if j == NONE {
                return (f64::INFINITY, NONE);
            }
            self.done[j] = true;
            let i = match_col[j];
            if i == NONE {
                return (v, j);
            }
            for (w, &c) in costs[i * k..(i + 1) * k].iter().enumerate() {
                let through = v.max(c);
                if !self.done[w] && through < self.label[w] {
                    self.label[w] = through;
                    self.parent[w] = i;
                }
            }
        }
    }

    /// Flips the path found by the last search, ending at free column `j`.
    fn augment(&self, mut j: usize, match_row: &mut [usize], match_col: &mut [usize]) {
        loop {
            let i = self.parent[j];
            let prev = match_row[i];
            match_row[i] = j;
            match_col[j] = i;
            if prev == NONE {
                return;
            }
            j = prev;
        }
    }
}

/// Maximum matching among edges with cost `<= threshold`, after a greedy start.
fn hopcroft_karp(
    costs: &[f64],
    k: usize,
    threshold: f64,
    match_row: &mut [usize],
    match_col: &mut [usize],
) {
    let adj: Vec<Vec<usize>> = costs
        .chunks(k)
        .map(|row| (0..k).filter(|&j| row[j] <= threshold).collect())
        .collect();
    for i in 0..k {
        if match_row[i] != NONE {
            continue;
        }
        if let Some(&j) = adj[i].iter().find(|&&j| match_col[j] == NONE) {
            match_row[i] = j;
            match_col[j] = i;
        }
    }
    let mut dist = vec![usize::MAX; k];
    let mut queue = VecDeque::new();
    let mut cursor = vec![0usize; k];
    loop {
        queue.clear();
        for i in 0..k {
            if match_row[i] == NONE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let next = match_col[j];
                if next == NONE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[i] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            return;
        }
        cursor.fill(0);
        for i in 0..k {
            if match_row[i] == NONE {
                augment(i, &adj, &mut dist, &mut cursor, match_row, match_col);
            }
        }
    }
}

fn augment(
    start: usize,
    adj: &[Vec<usize>],
    dist: &mut [usize],
    cursor: &mut [usize],
    match_row: &mut [usize],
    match_col: &mut [usize],
) -> bool {
    // Iterative depth-first search along the BFS layers.
    let mut stack = vec![start];
    while let Some(&i) = stack.last() {
        if cursor[i] >= adj[i].len() {
            dist[i] = usize::MAX;
            stack.pop();
            continue;
        }
        let j = adj[i][cursor[i]];
        cursor[i] += 1;
        let next = match_col[j];
        if next == NONE {
            // Flip the path recorded on the stack, deepest row first.
            let mut col = j;
            while let Some(row) = stack.pop() {
                let prev = match_row[row];
                match_row[row] = col;
                match_col[col] = row;
                col = prev;
            }
            return true;
        }
        if dist[next] == dist[i] + 1 {
            stack.push(next);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(costs: &[f64], k: usize) -> f64 {
        (0..k)
            .permutations(k)
            .map(|p| p.iter().enumerate().map(|(i, &j)| costs[i * k + j]).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn small_cases() {
        assert_eq!(bottleneck_value(&[4.0], 1, 0.0, f64::INFINITY), 4.0);
        assert_eq!(bottleneck_value(&[2.0, 1.0, 1.0, 2.0], 2, 0.0, f64::INFINITY), 1.0);
        assert_eq!(bottleneck_value(&[2.0, 1.0, 1.0, 2.0], 2, 1.5, f64::INFINITY), 1.5);
        assert!(bottleneck_value(&[2.0, 1.0, 1.0, 2.0], 2, 0.0, 0.5) >= 0.5);
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let k = 1 + trial % 7;
            let costs: Vec<f64> = (0..k * k)
                .map(|_| {
                    if trial % 3 == 0 {
                        rng.random_range(0..4) as f64
                    } else {
                        rng.random::<f64>()
                    }
                })
                .collect();
            assert_eq!(bottleneck_value(&costs, k, 0.0, f64::INFINITY), brute(&costs, k));
        }
    }

    #[test]
    fn needs_expensive_augmentation() {
        // The cheap edges all share a column, so most rows must use dearer ones.
        let k = 4;
        let mut costs = vec![10.0f64; k * k];
        for i in 0..k {
            costs[i * k] = 0.0;
            costs[i * k + i] = costs[i * k + i].min(i as f64);
        }
        assert_eq!(bottleneck_value(&costs, k, 0.0, f64::INFINITY), brute(&costs, k));
    }
}
