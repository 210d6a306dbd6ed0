//! Exhaustive ground truth for small inputs: isometry detection by trying every
//! point correspondence, and brute-force assignment and transport optima.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{Cloud, Isometry};
use crate::metrics::{CostMatrix, WeightedDistribution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Rigid,
    Reflected,
    None,
}

#[derive(Clone, Debug)]
pub struct IsometryVerdict {
    pub isometric: bool,
    pub orientation: Orientation,
    /// Maps the first cloud onto the second when `isometric`.
    pub witness: Option<Isometry>,
    /// Largest distance between a mapped point and its partner; infinite when no
    /// correspondence preserved all distances.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Tolerance relative to the larger cloud diameter.
    pub tol: f64,
    /// Largest number of points accepted.
    pub guard: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            guard: 9,
        }
    }
}

struct Search<'a> {
    a: &'a Cloud,
    b: &'a Cloud,
    tol: f64,
    assigned: Vec<usize>,
    used: Vec<bool>,
    reflected: Option<(Isometry, f64)>,
    best_residual: f64,
}

impl Search<'_> {
    /// Returns a rigid witness as soon as one is found; remembers reflected ones.
    fn extend(&mut self) -> Option<(Isometry, f64)> {
        let i = self.assigned.len();
        if i == self.a.len() {
            return self.align();
        }
        for j in 0..self.b.len() {
            if self.used[j] {
                continue;
            }
            let consistent = self.assigned.iter().enumerate().all(|(p, &q)| {
                (self.a.distance(p, i) - self.b.distance(q, j)).abs() <= self.tol
            });
            if !consistent {
                continue;
            }
            self.used[j] = true;
            self.assigned.push(j);
            let found = self.extend();
            self.assigned.pop();
            self.used[j] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn align(&mut self) -> Option<(Isometry, f64)> {
        let n = self.a.dim();
        let m = self.a.len();
        let ca = DVector::from_vec(self.a.centroid());
        let cb = DVector::from_vec(self.b.centroid());
        let mut h = DMatrix::<f64>::zeros(n, n);
        for (i, &j) in self.assigned.iter().enumerate() {
            let p = DVector::from_row_slice(self.a.point(i)) - &ca;
            let q = DVector::from_row_slice(self.b.point(j)) - &cb;
            h += &p * q.transpose();
        }
        let svd = h.svd(true, true);
        let u = svd.u.expect("left singular vectors");
        let v_t = svd.v_t.expect("right singular vectors");
        let weakest = svd.singular_values.imin();
        let base = v_t.transpose() * u.transpose();
        let mut flipped_v = v_t.transpose();
        flipped_v.column_mut(weakest).neg_mut();
        let flipped = flipped_v * u.transpose();
        for rotation in [base, flipped] {
            let proper = rotation.determinant() > 0.0;
            let translation = &cb - &rotation * &ca;
            let residual = (0..m)
                .map(|i| {
                    let p = DVector::from_row_slice(self.a.point(i));
                    let q = DVector::from_row_slice(self.b.point(self.assigned[i]));
                    (&rotation * p + &translation - q).norm()
                })
                .fold(0.0, f64::max);
            self.best_residual = self.best_residual.min(residual);
            if residual > self.tol {
                continue;
            }
            let g = Isometry::new(rotation, translation).ok()?;
            if proper {
                return Some((g, residual));
            }
            if self.reflected.is_none() {
                self.reflected = Some((g, residual));
            }
        }
        None
    }
}

/// Decides whether two clouds are isometric by trying all point correspondences
/// that preserve pairwise distances, aligning each by least squares.
/// Rigid witnesses are preferred over reflected ones.
pub fn is_isometric_bruteforce(a: &Cloud, b: &Cloud, options: OracleOptions) -> Result<IsometryVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let m = a.len();
    if m > options.guard {
        return Err(Error::GuardExceeded {
            what: "cloud",
            size: m,
            guard: options.guard,
        });
    }
    let none = IsometryVerdict {
        isometric: false,
        orientation: Orientation::None,
        witness: None,
        residual: f64::INFINITY,
    };
    if b.len() != m {
        return Ok(none);
    }
    let scale = a.diameter().max(b.diameter());
    let tol = if scale > 0.0 { options.tol * scale } else { options.tol };
    let mut search = Search {
        a,
        b,
        tol,
        assigned: Vec::with_capacity(m),
        used: vec![false; m],
        reflected: None,
        best_residual: f64::INFINITY,
    };
    if let Some((g, residual)) = search.extend() {
        return Ok(IsometryVerdict {
            isometric: true,
            orientation: Orientation::Rigid,
            witness: Some(g),
            residual,
        });
    }
    Ok(match search.reflected {
        Some((g, residual)) => IsometryVerdict {
            isometric: true,
            orientation: Orientation::Reflected,
            witness: Some(g),
            residual,
        },
        None => IsometryVerdict {
            residual: search.best_residual,
            ..none
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Largest assigned cost.
    Bottleneck,
    /// Sum of assigned costs divided by the size.
    Sum,
}

const ASSIGNMENT_GUARD: usize = 8;

/// Optimum over all bijections of a square cost matrix, by enumeration.
pub fn assignment_bruteforce(costs: &CostMatrix, objective: Objective) -> Result<f64> {
    let k = costs.rows();
    if costs.cols() != k || k == 0 {
        return Err(Error::ShapeMismatch(format!(
            "expected a non-empty square matrix, got {}x{}",
            k,
            costs.cols()
        )));
    }
    if k > ASSIGNMENT_GUARD {
        return Err(Error::GuardExceeded {
            what: "assignment",
            size: k,
            guard: ASSIGNMENT_GUARD,
        });
    }
    Ok((0..k)
        .permutations(k)
        .map(|p| {
            let picked = p.iter().enumerate().map(|(i, &j)| costs.get(i, j));
            match objective {
                Objective::Bottleneck => picked.fold(0.0, f64::max),
                Objective::Sum => picked.sum::<f64>() / k as f64,
            }
        })
        .fold(f64::INFINITY, f64::min))
}

const TRANSPORT_CELL_GUARD: usize = 20;

/// Transportation optimum by enumerating every basic solution: each choice of
/// `k + l - 1` cells forming a spanning tree determines a unique flow.
pub fn transport_bruteforce(
    a: &WeightedDistribution,
    b: &WeightedDistribution,
    costs: &CostMatrix,
) -> Result<f64> {
    let (k, l) = (a.len(), b.len());
    if costs.rows() != k || costs.cols() != l {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} costs for distributions of sizes {k} and {l}",
            costs.rows(),
            costs.cols()
        )));
    }
    if k * l > TRANSPORT_CELL_GUARD {
        return Err(Error::GuardExceeded {
            what: "transport cells",
            size: k * l,
            guard: TRANSPORT_CELL_GUARD,
        });
    }
    let mut best = f64::INFINITY;
    for cells in (0..k * l).combinations(k + l - 1) {
        if let Some(flows) = tree_flows(&cells, a.weights(), b.weights(), l) {
            let cost = cells
                .iter()
                .zip(&flows)
                .map(|(&c, f)| f * costs.get(c / l, c % l))
                .sum::<f64>();
            best = best.min(cost);
        }
    }
    Ok(best)
}

/// Flow on a spanning tree of cells by repeatedly settling leaves; `None` for
/// cycles or negative flows.
fn tree_flows(cells: &[usize], supply: &[f64], demand: &[f64], l: usize) -> Option<Vec<f64>> {
    let mut rest: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let ends: Vec<(usize, usize)> = cells.iter().map(|&c| (c / l, supply.len() + c % l)).collect();
    let mut flows = vec![0.0; cells.len()];
    let mut open = vec![true; cells.len()];
    for _ in 0..cells.len() {
        let mut degree = vec![0usize; rest.len()];
        for (e, &(r, c)) in ends.iter().enumerate() {
            if open[e] {
                degree[r] += 1;
                degree[c] += 1;
            }
        }
        let (e, leaf) = ends.iter().enumerate().filter(|(e, _)| open[*e]).find_map(|(e, &(r, c))| {
            if degree[r] == 1 {
                Some((e, r))
            } else if degree[c] == 1 {
                Some((e, c))
            } else {
                None
            }
        })?;
        let other = if ends[e].0 == leaf { ends[e].1 } else { ends[e].0 };
        let f = rest[leaf];
        if f < -1e-12 {
            return None;
        }
        flows[e] = f;
        rest[leaf] = 0.0;
        rest[other] -= f;
        open[e] = false;
    }
    rest.iter().all(|r| r.abs() <= 1e-9).then_some(flows)
}
