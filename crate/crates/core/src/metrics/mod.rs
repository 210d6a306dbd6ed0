//! Distances between invariants: Minkowski `L∞`, bottleneck, the max-metric on
//! RDDs and OCDs, Linear Assignment Cost and Earth Mover's Distance.

mod assignment;
mod bottleneck;
mod relative;
mod transport;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{self, MomentVector, Rdd, Sdd};
use crate::oriented::{self, Ocd, Scd, StrengthConfig};

use relative::Prepared;

/// A `rows x cols` matrix of finite non-negative costs.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} cost matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCost {
                row: idx / cols,
                col: idx % cols,
            });
        }
        if let Some(v) = data.iter().find(|v| **v < 0.0) {
            return Err(Error::InvalidArgument(format!("costs must be non-negative, got {v}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("cost rows differ in length".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Fills the matrix row by row in parallel; `f` must be pure.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Result<f64> + Sync,
    ) -> Result<Self> {
        let data = (0..rows)
            .into_par_iter()
            .map(|i| (0..cols).map(|j| f(i, j)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?
            .concat();
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    fn require_square(&self) -> Result<usize> {
        if self.rows != self.cols || self.rows == 0 {
            return Err(Error::ShapeMismatch(format!(
                "expected a non-empty square cost matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.rows)
    }
}

/// Weights of a finite distribution, either as integer counts or as reals summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDistribution {
    weights: Vec<f64>,
    counts: Option<Vec<u64>>,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl WeightedDistribution {
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if counts.is_empty() || counts.contains(&0) {
            return Err(Error::InfeasibleWeights(
                "counts must be positive and non-empty".into(),
            ));
        }
        Ok(Self {
            weights: counts.iter().map(|&c| c as f64 / total as f64).collect(),
            counts: Some(counts.to_vec()),
        })
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0 && *w <= 1.0)) {
            return Err(Error::InfeasibleWeights(
                "weights must lie in (0, 1] and be non-empty".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InfeasibleWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self {
            weights,
            counts: None,
        })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::from_counts(&vec![1; k])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceMode {
    /// Linear Assignment Cost between equal-weight distributions.
    Lac,
    /// Earth Mover's Distance.
    #[default]
    Emd,
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lac" => Ok(Self::Lac),
            "emd" => Ok(Self::Emd),
            other => Err(Error::InvalidArgument(format!("unknown distance mode '{other}'"))),
        }
    }
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lac => "lac",
            Self::Emd => "emd",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Equivalence {
    /// Orientation-preserving: rotations and translations.
    #[default]
    Rigid,
    /// Any isometry, reflections included.
    Isometry,
}

impl FromStr for Equivalence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rigid" => Ok(Self::Rigid),
            "isometry" => Ok(Self::Isometry),
            other => Err(Error::InvalidArgument(format!("unknown equivalence '{other}'"))),
        }
    }
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rigid => "rigid",
            Self::Isometry => "isometry",
        })
    }
}

/// Largest absolute entrywise difference.
pub fn linf(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs())))
}

/// Bottleneck distance between equal-size point sets under the `L∞` norm:
/// the minimum over bijections of the largest displacement.
pub fn bottleneck(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "bottleneck needs two non-empty sets of equal size, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let costs = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| linf(p, q)))
        .collect::<Result<Vec<_>>>()?;
    Ok(bottleneck_assignment(&CostMatrix::new(a.len(), b.len(), costs)?)?)
}

/// Minimum over bijections of the largest assigned cost of a square matrix.
pub fn bottleneck_assignment(costs: &CostMatrix) -> Result<f64> {
    let k = costs.require_square()?;
    Ok(bottleneck::bottleneck_value(&costs.data, k, 0.0, f64::INFINITY))
}

/// Linear Assignment Cost: optimal assignment total divided by the size.
pub fn lac(costs: &CostMatrix) -> Result<f64> {
    let k = costs.require_square()?;
    Ok(assignment::hungarian(&costs.data, k).0 / k as f64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Supplies and demands on a common scale, with that scale and a zero threshold.
fn transport_amounts(
    a: &WeightedDistribution,
    b: &WeightedDistribution,
) -> (Vec<f64>, Vec<f64>, f64, f64) {
    if let (Some(ca), Some(cb)) = (&a.counts, &b.counts) {
        let ta: u64 = ca.iter().sum();
        let tb: u64 = cb.iter().sum();
        let l = (ta / gcd(ta, tb)) as u128 * tb as u128;
        if l < (1u128 << 52) {
            let l = l as u64;
            let scale = |c: &[u64], t: u64| c.iter().map(|&x| (x * (l / t)) as f64).collect();
            return (scale(ca, ta), scale(cb, tb), l as f64, 0.5);
        }
    }
    (a.weights.clone(), b.weights.clone(), 1.0, 1e-15)
}

/// Earth Mover's Distance: the cheapest transport of one distribution onto the other.
pub fn emd(a: &WeightedDistribution, b: &WeightedDistribution, costs: &CostMatrix) -> Result<f64> {
    if costs.rows != a.len() || costs.cols != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} costs for distributions of sizes {} and {}",
            costs.rows,
            costs.cols,
            a.len(),
            b.len()
        )));
    }
    let (supply, demand, scale, eps) = transport_amounts(a, b);
    Ok(transport::transport(&supply, &demand, &costs.data, eps).cost / scale)
}

/// Solves EMD or LAC on lower-bound costs, replacing by exact costs every cell the
/// current optimum uses, until the optimum only uses exact cells. The result then
/// equals the optimum for the exact matrix, since lower bounds can only help.
fn lazy_optimum(
    rows: usize,
    cols: usize,
    lower: impl Fn(usize, usize) -> f64 + Sync,
    exact: impl Fn(usize, usize) -> f64 + Sync,
    mode: DistanceMode,
    weights: (&WeightedDistribution, &WeightedDistribution),
) -> Result<f64> {
    let mut costs = CostMatrix::from_fn(rows, cols, |i, j| Ok(lower(i, j)))?.data;
    let mut known = vec![false; rows * cols];
    let (supply, demand, scale, eps) = transport_amounts(weights.0, weights.1);
    let mut solver = transport::Solver::new(&supply, &demand, eps);
    loop {
        let (value, support): (f64, Vec<usize>) = match mode {
            DistanceMode::Emd => {
                solver.solve(&costs);
                let plan = solver.plan(&costs);
                (
                    plan.cost / scale,
                    plan.flows.iter().map(|&(i, j, _)| i * cols + j).collect(),
                )
            }
            DistanceMode::Lac => {
                let (total, assigned) = assignment::hungarian(&costs, rows);
                (
                    total / rows as f64,
                    assigned.iter().enumerate().map(|(i, &j)| i * cols + j).collect(),
                )
            }
        };
        let pending: Vec<usize> = support.into_iter().filter(|&c| !known[c]).collect();
        if pending.is_empty() {
            return Ok(value);
        }

        let fresh: Vec<f64> = pending
            .par_iter()
            .map(|&c| exact(c / cols, c % cols))
            .collect();
        for (c, v) in pending.into_iter().zip(fresh) {
            if !v.is_finite() {
                return Err(Error::NonFiniteCost {
                    row: c / cols,
                    col: c % cols,
                });
            }
            costs[c] = v;
            known[c] = true;
            solver.release(c / cols, c % cols);
        }
    }
}

fn check_rdd_shapes(x: &Rdd, y: &Rdd) -> Result<()> {
    if x.h() != y.h() || x.column_count() != y.column_count() {
        return Err(Error::ShapeMismatch(format!(
            "RDDs with (h, columns) = ({}, {}) and ({}, {})",
            x.h(),
            x.column_count(),
            y.h(),
            y.column_count()
        )));
    }
    Ok(())
}

fn check_ocd_shapes(x: &Ocd, y: &Ocd) -> Result<()> {
    if x.n() != y.n() || x.column_count() != y.column_count() {
        return Err(Error::ShapeMismatch(format!(
            "OCDs with (n, columns) = ({}, {}) and ({}, {})",
            x.n(),
            x.column_count(),
            y.n(),
            y.column_count()
        )));
    }
    Ok(())
}

/// Max-metric between RDDs: the minimum over anchor relabelings of the larger of
/// the anchor-distance `L∞` difference and the bottleneck distance between columns.
pub fn rdd_dist(x: &Rdd, y: &Rdd) -> Result<f64> {
    check_rdd_shapes(x, y)?;
    Ok(Prepared::from_rdd(x).distance(&Prepared::from_rdd(y)))
}

/// Max-metric between OCDs, columns embedded with their signed orientation feature.
pub fn ocd_dist(x: &Ocd, y: &Ocd, cfg: &StrengthConfig) -> Result<f64> {
    check_ocd_shapes(x, y)?;
    Ok(Prepared::from_ocd(x, cfg)?.distance(&Prepared::from_ocd(y, cfg)?))
}

/// All pairwise `rdd_dist` values between the entries of two distributions.
pub fn sdd_cost_matrix(a: &Sdd, b: &Sdd) -> Result<CostMatrix> {
    invariants::check_same_shape(a, b)?;
    let pa: Vec<Prepared> = a.entries().iter().map(|e| Prepared::from_rdd(&e.rdd)).collect();
    let pb: Vec<Prepared> = b.entries().iter().map(|e| Prepared::from_rdd(&e.rdd)).collect();
    CostMatrix::from_fn(pa.len(), pb.len(), |i, j| Ok(pa[i].distance(&pb[j])))
}

/// All pairwise `ocd_dist` values between the entries of two distributions.
pub fn scd_cost_matrix(a: &Scd, b: &Scd, cfg: &StrengthConfig) -> Result<CostMatrix> {
    oriented::check_same_shape(a, b)?;
    let pa = prepare_scd(a, cfg)?;
    let pb = prepare_scd(b, cfg)?;
    CostMatrix::from_fn(pa.len(), pb.len(), |i, j| Ok(pa[i].distance(&pb[j])))
}

fn prepare_scd(s: &Scd, cfg: &StrengthConfig) -> Result<Vec<Prepared>> {
    s.entries().iter().map(|e| Prepared::from_ocd(&e.ocd, cfg)).collect()
}

fn prepared_distance(
    pa: &[Prepared],
    wa: &WeightedDistribution,
    pb: &[Prepared],
    wb: &WeightedDistribution,
    mode: DistanceMode,
) -> Result<f64> {
    lazy_optimum(
        pa.len(),
        pb.len(),
        |i, j| pa[i].lower_bound(&pb[j]),
        |i, j| pa[i].distance(&pb[j]),
        mode,
        (wa, wb),
    )
}

/// Distance between Simplexwise Distance Distributions over the `rdd_dist` costs.
///
/// LAC needs uncollapsed distributions; EMD accepts any.
pub fn sdd_dist(a: &Sdd, b: &Sdd, mode: DistanceMode) -> Result<f64> {
    invariants::check_same_shape(a, b)?;
    if mode == DistanceMode::Lac && !(a.is_uncollapsed() && b.is_uncollapsed()) {
        return Err(Error::CollapsedInput);
    }
    let (a, b) = if invariants::total_cmp_sdd(a, b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    let pa: Vec<Prepared> = a.entries().iter().map(|e| Prepared::from_rdd(&e.rdd)).collect();
    let pb: Vec<Prepared> = b.entries().iter().map(|e| Prepared::from_rdd(&e.rdd)).collect();
    let wa = WeightedDistribution::from_counts(&a.entries().iter().map(|e| e.multiplicity).collect::<Vec<_>>())?;
    let wb = WeightedDistribution::from_counts(&b.entries().iter().map(|e| e.multiplicity).collect::<Vec<_>>())?;
    prepared_distance(&pa, &wa, &pb, &wb, mode)
}

fn scd_rigid(a: &Scd, b: &Scd, mode: DistanceMode, cfg: &StrengthConfig) -> Result<f64> {
    let pa = prepare_scd(a, cfg)?;
    let pb = prepare_scd(b, cfg)?;
    let counts = |s: &Scd| s.entries().iter().map(|e| e.multiplicity).collect::<Vec<_>>();
    let wa = WeightedDistribution::from_counts(&counts(a))?;
    let wb = WeightedDistribution::from_counts(&counts(b))?;
    prepared_distance(&pa, &wa, &pb, &wb, mode)
}

fn ordered<'a>(a: &'a Scd, b: &'a Scd) -> (&'a Scd, &'a Scd) {
    if oriented::total_cmp_scd(a, b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

/// Distance between Simplexwise Centered Distributions over the `ocd_dist` costs.
///
/// In isometry mode the second argument may also be replaced by its mirror image.
pub fn scd_dist(
    a: &Scd,
    b: &Scd,
    mode: DistanceMode,
    equivalence: Equivalence,
    cfg: &StrengthConfig,
) -> Result<f64> {
    oriented::check_same_shape(a, b)?;
    if mode == DistanceMode::Lac && !(a.is_uncollapsed() && b.is_uncollapsed()) {
        return Err(Error::CollapsedInput);
    }
    let (x, y) = ordered(a, b);
    let rigid = scd_rigid(x, y, mode, cfg)?;
    if equivalence == Equivalence::Rigid {
        return Ok(rigid);
    }
    let (am, bm) = (a.mirror(), b.mirror());
    let p = ordered(a, &bm);
    let q = ordered(&am, b);
    let pick = match oriented::total_cmp_scd(p.0, q.0).then_with(|| oriented::total_cmp_scd(p.1, q.1)) {
        Ordering::Greater => q,
        _ => p,
    };
    Ok(rigid.min(scd_rigid(pick.0, pick.1, mode, cfg)?))
}

/// `L∞` difference of two moment vectors, a lower bound for the EMD between the
/// distributions they were computed from.
pub fn moment_lower_bound(a: &MomentVector, b: &MomentVector) -> Result<f64> {
    linf(a.values(), b.values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cloud;
    use crate::invariants::{rdd, sdd};
    use crate::oriented::{ocd, scd};
    use approx::assert_abs_diff_eq;

    fn cloud(points: &[[f64; 2]]) -> Cloud {
        Cloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn linf_examples() {
        assert_eq!(linf(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(linf(&[0.0, 0.0], &[3.0, -4.0]).unwrap(), 4.0);
        assert!(linf(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn bottleneck_examples() {
        assert_eq!(bottleneck(&[vec![0.0, 0.0]], &[vec![3.0, -4.0]]).unwrap(), 4.0);
        let a = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert_eq!(bottleneck(&a, &a).unwrap(), 0.0);
        assert!(bottleneck(&a, &a[..1]).is_err());
    }

    #[test]
    fn lac_examples() {
        let m = |v: Vec<f64>| CostMatrix::new(2, 2, v).unwrap();
        assert_eq!(lac(&m(vec![0.0; 4])).unwrap(), 0.0);
        assert_eq!(lac(&m(vec![2.0, 1.0, 1.0, 2.0])).unwrap(), 1.0);
        assert_eq!(lac(&m(vec![1.0, 0.0, 0.0, 1.0])).unwrap(), 0.0);
        assert!(lac(&CostMatrix::new(1, 2, vec![0.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn cost_matrix_validation() {
        assert!(matches!(
            CostMatrix::new(2, 2, vec![0.0, 1.0, f64::NAN, 0.0]),
            Err(Error::NonFiniteCost { row: 1, col: 0 })
        ));
        assert!(CostMatrix::new(1, 1, vec![-1.0]).is_err());
    }

    #[test]
    fn emd_examples() {
        let single = WeightedDistribution::uniform(1).unwrap();
        let c = CostMatrix::new(1, 1, vec![2.5]).unwrap();
        assert_eq!(emd(&single, &single, &c).unwrap(), 2.5);
        let u = WeightedDistribution::uniform(3).unwrap();
        let diag = CostMatrix::from_fn(3, 3, |i, j| Ok(if i == j { 0.0 } else { 1.0 })).unwrap();
        assert_eq!(emd(&u, &u, &diag).unwrap(), 0.0);
        assert!(WeightedDistribution::from_weights(vec![0.5, 0.6]).is_err());
        let w = WeightedDistribution::from_weights(vec![0.25, 0.75]).unwrap();
        let costs = CostMatrix::new(2, 1, vec![1.0, 3.0]).unwrap();
        assert_abs_diff_eq!(emd(&w, &single, &costs).unwrap(), 2.5, epsilon = 1e-15);
    }

    #[test]
    fn rdd_metric_examples() {
        let c = cloud(&[[0.0, 0.0], [5.0, 0.0], [3.2, 2.4]]);
        let x = rdd(&c, &[0, 1]).unwrap();
        let y = rdd(&c, &[1, 0]).unwrap();
        assert_eq!(rdd_dist(&x, &x).unwrap(), 0.0);
        assert_eq!(rdd_dist(&x, &y).unwrap(), 0.0);
        let (r2, r10) = (2f64.sqrt(), 10f64.sqrt());
        let t = Rdd::new(2, vec![4.0], vec![r2, r10, r10, r2]).unwrap();
        let k = Rdd::new(2, vec![4.0], vec![r2, r2, r10, r10]).unwrap();
        assert_abs_diff_eq!(rdd_dist(&t, &k).unwrap(), r10 - r2, epsilon = 1e-15);
        assert!(rdd_dist(&x, &rdd(&c, &[0]).unwrap()).is_err());
    }

    #[test]
    fn ocd_metric_examples() {
        let r = cloud(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]);
        let cfg = StrengthConfig::default();
        let p2 = ocd(&r, &[1]).unwrap();
        let p3 = ocd(&r, &[2]).unwrap();
        assert_eq!(ocd_dist(&p2, &p2, &cfg).unwrap(), 0.0);
        assert_abs_diff_eq!(ocd_dist(&p2, &p3, &cfg).unwrap(), 1.0, epsilon = 1e-15);
        let mirror_term = 2.0 * (1.0 / 6.0) / (2.0 * 3f64.sqrt());
        assert_abs_diff_eq!(ocd_dist(&p2, &p2.mirror(), &cfg).unwrap(), mirror_term, epsilon = 1e-12);
    }

    #[test]
    fn sdd_metric_modes() {
        let t = cloud(&[[1.0, 1.0], [-1.0, 1.0], [-2.0, 0.0], [2.0, 0.0]]);
        let k = cloud(&[[0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [3.0, 0.0]]);
        let (st, sk) = (sdd(&t, 2, Some(0.0)).unwrap(), sdd(&k, 2, Some(0.0)).unwrap());
        let d = sdd_dist(&st, &sk, DistanceMode::Emd).unwrap();
        assert!(d > 0.1);
        assert_eq!(d, sdd_dist(&sk, &st, DistanceMode::Emd).unwrap());
        assert!(matches!(sdd_dist(&st, &sk, DistanceMode::Lac), Err(Error::CollapsedInput)));
        let full = sdd_cost_matrix(&st, &sk).unwrap();
        let w = |s: &Sdd| {
            WeightedDistribution::from_counts(&s.entries().iter().map(|e| e.multiplicity).collect::<Vec<_>>()).unwrap()
        };
        assert_abs_diff_eq!(emd(&w(&st), &w(&sk), &full).unwrap(), d, epsilon = 1e-12);
        let (ut, uk) = (sdd(&t, 2, None).unwrap(), sdd(&k, 2, None).unwrap());
        let l = sdd_dist(&ut, &uk, DistanceMode::Lac).unwrap();
        assert!(l + 1e-12 >= sdd_dist(&ut, &uk, DistanceMode::Emd).unwrap());
    }

    #[test]
    fn scd_mirror_pair() {
        let r = cloud(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]);
        let rb = cloud(&[[0.0, 0.0], [4.0, 0.0], [0.0, -3.0]]);
        let cfg = StrengthConfig::default();
        let (a, b) = (scd(&r, cfg, false).unwrap(), scd(&rb, cfg, false).unwrap());
        let rigid = scd_dist(&a, &b, DistanceMode::Emd, Equivalence::Rigid, &cfg).unwrap();
        assert!(rigid > 0.0);
        let iso = scd_dist(&a, &b, DistanceMode::Emd, Equivalence::Isometry, &cfg).unwrap();
        assert!(iso <= 1e-12);
        assert_eq!(iso, scd_dist(&b, &a, DistanceMode::Emd, Equivalence::Isometry, &cfg).unwrap());
    }
}
