//! Minimum-sum assignment by the Hungarian method with potentials, `O(k^3)`.

/// Returns the optimal total cost and, for every row, its assigned column.
pub(crate) fn hungarian(costs: &[f64], k: usize) -> (f64, Vec<usize>) {
    debug_assert_eq!(costs.len(), k * k);
    if k == 0 {
        return (0.0, Vec::new());
    }
    let c = |i: usize, j: usize| costs[(i - 1) * k + (j - 1)];
    let mut u = vec![0.0; k + 1];
    let mut v = vec![0.0; k + 1];
    // p[j]: row matched to column j (1-based, 0 = none); column 0 is a sentinel.
    let mut p = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    let mut minv = vec![0.0; k + 1];
    let mut used = vec![false; k + 1];
    for i in 1..=k {
        p[0] = i;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=k {
                if !used[j] {
                    let cur = c(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; k];
    for j in 1..=k {
        assignment[p[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| costs[i * k + j])
        .sum();
    (total, assignment)
}
