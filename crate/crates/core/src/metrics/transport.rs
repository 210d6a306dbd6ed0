//! Balanced transportation problem by successive shortest paths.
//!
//! Rows supply, columns demand; every augmentation follows a cheapest residual
//! path found with Dijkstra on reduced costs over the dense bipartite graph.

const NONE: usize = usize::MAX;

pub(crate) struct Plan {
    /// Sum of `flow * cost` over all cells.
    pub cost: f64,
    /// Cells carrying positive flow as `(row, column, amount)`.
    pub flows: Vec<(usize, usize, f64)>,
}

/// Solves `min sum f_ij c_ij` subject to row sums `supply` and column sums `demand`.
/// Both sides must carry the same total; amounts at or below `eps` count as zero.
pub(crate) fn transport(supply: &[f64], demand: &[f64], costs: &[f64], eps: f64) -> Plan {
    let mut solver = Solver::new(supply, demand, eps);
    solver.solve(costs);
    solver.plan(costs)
}

/// Successive-shortest-path state that survives cost increases: after raising the
/// cost of some cells, [`Solver::release`] them and call [`Solver::solve`] again.
///
/// Every residual arc keeps a non-negative reduced cost, so the flow is optimal
/// whenever all supply has been shipped. Removing flow from a cell deletes its
/// reverse arc, and a raised cost only increases the forward reduced cost, so the
/// potentials stay valid and only the released amount needs to be rerouted.
pub(crate) struct Solver {
    k: usize,
    l: usize,
    eps: f64,
    supply: Vec<f64>,
    demand: Vec<f64>,
    flow: Vec<f64>,
    pot_row: Vec<f64>,
    pot_col: Vec<f64>,
    dist_row: Vec<f64>,
    dist_col: Vec<f64>,
    done_row: Vec<bool>,
    done_col: Vec<bool>,
    parent_row: Vec<usize>,
    parent_col: Vec<usize>,
}

impl Solver {
    pub(crate) fn new(supply: &[f64], demand: &[f64], eps: f64) -> Self {
        let (k, l) = (supply.len(), demand.len());
        Self {
            k,
            l,
            eps,
            supply: supply.to_vec(),
            demand: demand.to_vec(),
            flow: vec![0.0; k * l],
            pot_row: vec![0.0; k],
            pot_col: vec![0.0; l],
            dist_row: vec![0.0; k],
            dist_col: vec![0.0; l],
            done_row: vec![false; k],
            done_col: vec![false; l],
            parent_row: vec![NONE; k],
            parent_col: vec![NONE; l],
        }
    }

    /// Returns the flow of cell `(i, j)` to its row and column.
    pub(crate) fn release(&mut self, i: usize, j: usize) {
        let f = std::mem::take(&mut self.flow[i * self.l + j]);
        self.supply[i] += f;
        self.demand[j] += f;
    }

    /// Cells carrying positive flow.
    pub(crate) fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let l = self.l;
        self.flow
            .iter()
            .enumerate()
            .filter(|(_, &f)| f > self.eps)
            .map(move |(c, _)| (c / l, c % l))
    }

    pub(crate) fn plan(&self, costs: &[f64]) -> Plan {
        let mut cost = 0.0;
        let mut flows = Vec::new();
        for (i, j) in self.support() {
            let f = self.flow[i * self.l + j];
            cost += f * costs[i * self.l + j];
            flows.push((i, j, f));
        }
        Plan { cost, flows }
    }

    pub(crate) fn solve(&mut self, costs: &[f64]) {
        let (k, l, eps) = (self.k, self.l, self.eps);
        debug_assert_eq!(costs.len(), k * l);
        while self.supply.iter().any(|&s| s > eps) {
            for i in 0..k {
                self.dist_row[i] = if self.supply[i] > eps { 0.0 } else { f64::INFINITY };
            }
            self.dist_col.fill(f64::INFINITY);
            self.done_row.fill(false);
            self.done_col.fill(false);
            self.parent_row.fill(NONE);
            self.parent_col.fill(NONE);

            let mut target = NONE;
            loop {
                let mut best = f64::INFINITY;
                let mut pick = NONE;
                let mut pick_row = true;
                for i in 0..k {
                    if !self.done_row[i] && self.dist_row[i] < best {
                        best = self.dist_row[i];
                        pick = i;
                    }
                }
                for j in 0..l {
                    if !self.done_col[j] && self.dist_col[j] < best {
                        best = self.dist_col[j];
                        pick = j;
                        pick_row = false;
                    }
                }
                if pick == NONE {
                    break;
                }
                if pick_row {
                    let i = pick;
                    self.done_row[i] = true;
                    let row = &costs[i * l..(i + 1) * l];
                    for j in 0..l {
                        if !self.done_col[j] {
                            let reduced = (row[j] + self.pot_row[i] - self.pot_col[j]).max(0.0);
                            if best + reduced < self.dist_col[j] {
                                self.dist_col[j] = best + reduced;
                                self.parent_col[j] = i;
                            }
                        }
                    }
                } else {
                    let j = pick;
                    self.done_col[j] = true;
                    if self.demand[j] > eps {
                        target = j;
                        break;
                    }
                    for i in 0..k {
                        if !self.done_row[i] && self.flow[i * l + j] > eps {
                            let reduced =
                                (self.pot_col[j] - self.pot_row[i] - costs[i * l + j]).max(0.0);
                            if best + reduced < self.dist_row[i] {
                                self.dist_row[i] = best + reduced;
                                self.parent_row[i] = j;
                            }
                        }
                    }
                }
            }
            if target == NONE {
                break;
            }
            let reach = self.dist_col[target];
            for i in 0..k {
                self.pot_row[i] += self.dist_row[i].min(reach);
            }
            for j in 0..l {
                self.pot_col[j] += self.dist_col[j].min(reach);
            }

            let mut amount = self.demand[target];
            let mut j = target;
            let source = loop {
                let i = self.parent_col[j];
                let back = self.parent_row[i];
                if back == NONE {
                    break i;
                }
                amount = amount.min(self.flow[i * l + back]);
                j = back;
            };
            amount = amount.min(self.supply[source]);
            self.supply[source] -= amount;
            self.demand[target] -= amount;
            let mut j = target;
            loop {
                let i = self.parent_col[j];
                self.flow[i * l + j] += amount;
                let back = self.parent_row[i];
                if back == NONE {
                    break;
                }
                self.flow[i * l + back] -= amount;
                j = back;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_flow() {
        let plan = transport(&[1.0], &[1.0], &[3.5], 0.0);
        assert_eq!(plan.cost, 3.5);
        assert_eq!(plan.flows, vec![(0, 0, 1.0)]);
    }

    #[test]
    fn prefers_diagonal() {
        let plan = transport(&[1.0, 1.0], &[1.0, 1.0], &[0.0, 5.0, 5.0, 0.0], 0.0);
        assert_eq!(plan.cost, 0.0);
    }

    #[test]
    fn needs_rerouting() {
        // Greedy would send row 0 to column 0; the optimum reroutes it.
        let costs = [1.0, 2.0, 1.0, 100.0];
        let plan = transport(&[1.0, 1.0], &[1.0, 1.0], &costs, 0.0);
        assert_eq!(plan.cost, 3.0);
    }

    #[test]
    fn unequal_sizes() {
        let plan = transport(&[2.0, 1.0], &[1.0, 1.0, 1.0], &[0.0, 1.0, 4.0, 4.0, 4.0, 0.0], 0.0);
        assert_eq!(plan.cost, 1.0);
        let shipped: f64 = plan.flows.iter().map(|f| f.2).sum();
        assert_eq!(shipped, 3.0);
    }

    #[test]
    fn warm_start_after_raising_costs() {
        let supply = [2.0, 1.0, 3.0];
        let demand = [1.0, 4.0, 1.0];
        let mut costs = vec![1.0, 0.0, 2.0, 3.0, 1.0, 0.0, 0.0, 2.0, 1.0];
        let mut solver = Solver::new(&supply, &demand, 0.5);
        solver.solve(&costs);
        let support: Vec<(usize, usize)> = solver.support().collect();
        for &(i, j) in &support {
            costs[i * 3 + j] += 1.5;
            solver.release(i, j);
        }
        solver.solve(&costs);
        let cold = transport(&supply, &demand, &costs, 0.5);
        assert_eq!(solver.plan(&costs).cost, cold.cost);
    }
}
