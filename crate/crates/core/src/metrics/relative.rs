//! Max-metric between relative distance distributions, with all anchor
//! relabelings of the first argument precomputed.

use crate::error::Result;
use crate::invariants::Rdd;
use crate::oriented::{Ocd, StrengthConfig};
use crate::perm::{permute_columns, permute_condensed, signed_permutations};

use super::bottleneck::bottleneck_value;

struct Variant {
    d_part: Vec<f64>,
    columns: Vec<f64>,
    /// Per direction of [`directions`], the projected columns in increasing order.
    projections: Vec<Vec<f64>>,
}

/// An RDD or OCD with its columns embedded as points of `R^stride`, under every
/// relabeling of its anchors. Variant 0 is the identity relabeling.
pub(crate) struct Prepared {
    stride: usize,
    variants: Vec<Variant>,
}

/// Coordinate axes plus the half sums and half differences of coordinate pairs.
/// Each has unit l1 norm, so projecting onto it is 1-Lipschitz for the max-metric.
fn directions(stride: usize) -> Vec<Vec<f64>> {
    let axis = |r: usize| (0..stride).map(|i| if i == r { 1.0 } else { 0.0 }).collect();
    let mut out: Vec<Vec<f64>> = (0..stride).map(axis).collect();
    for r in 0..stride {
        for t in r + 1..stride {
            for sign in [1.0, -1.0] {
                let mut w = vec![0.0; stride];
                w[r] = 0.5;
                w[t] = 0.5 * sign;
                out.push(w);
            }
        }
    }
    out
}

fn linf_slices(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).abs();
        if d > acc {
            acc = d;
        }
    }
    acc
}

impl Prepared {
    fn build(
        d_part: &[f64],
        points: usize,
        columns: &[f64],
        stride: usize,
        relabeled: usize,
        sign_row: Option<usize>,
    ) -> Self {
        let directions = directions(stride);
        let variants = signed_permutations(relabeled)
            .into_iter()
            .map(|(order, sign)| {
                let d_part = permute_condensed(d_part, points, &order);
                let columns = permute_columns(columns, stride, &order, sign_row, sign);
                let projections = directions
                    .iter()
                    .map(|w| {
                        let mut p: Vec<f64> = columns
                            .chunks(stride)
                            .map(|c| c.iter().zip(w).map(|(x, y)| x * y).sum())
                            .collect();
                        p.sort_by(f64::total_cmp);
                        p
                    })
                    .collect();
                Variant {
                    d_part,
                    columns,
                    projections,
                }
            })
            .collect();
        Self { stride, variants }
    }

    pub(crate) fn from_rdd(x: &Rdd) -> Self {
        let h = x.h();
        Self::build(x.d_part(), h, x.flat_columns(), h, h, None)
    }

    /// Columns become `(distances to anchors, |q|, signed feature)`.
    pub(crate) fn from_ocd(x: &Ocd, cfg: &StrengthConfig) -> Result<Self> {
        let n = x.n();
        let features = x.features(cfg)?;
        let mut embedded = x.flat_columns().to_vec();
        for (col, f) in embedded.chunks_mut(n + 1).zip(features) {
            col[n] = f;
        }
        Ok(Self::build(x.d_part(), n, &embedded, n + 1, n - 1, Some(n)))
    }

    fn column_count(&self) -> usize {
        self.variants[0].columns.len() / self.stride
    }

    /// Per relabeling, the anchor term and a lower bound on the full term obtained
    /// from one-dimensional matchings of each projection.
    fn bounds(&self, other: &Self) -> Vec<(f64, f64)> {
        let target = &other.variants[0];
        self.variants
            .iter()
            .map(|v| {
                let d = linf_slices(&v.d_part, &target.d_part);
                let lb = v
                    .projections
                    .iter()
                    .zip(&target.projections)
                    .fold(d, |acc, (p, q)| acc.max(linf_slices(p, q)));
                (d, lb)
            })
            .collect()
    }

    /// Cheap lower bound on [`Prepared::distance`].
    pub(crate) fn lower_bound(&self, other: &Self) -> f64 {
        self.bounds(other)
            .into_iter()
            .fold(f64::INFINITY, |acc, (_, lb)| acc.min(lb))
    }

    /// Minimum over relabelings of the larger of the anchor-distance difference and
    /// the bottleneck distance between the column sets.
    pub(crate) fn distance(&self, other: &Self) -> f64 {
        let k = self.column_count();
        let stride = self.stride;
        // Coordinate-major copy of the target so each cost row fills column-wise.
        let target = &other.variants[0].columns;
        let by_coordinate: Vec<Vec<f64>> = (0..stride)
            .map(|r| target.chunks(stride).map(|c| c[r]).collect())
            .collect();
        let bounds = self.bounds(other);
        let mut order: Vec<usize> = (0..bounds.len()).collect();
        order.sort_by(|&a, &b| bounds[a].1.total_cmp(&bounds[b].1));
        let mut best = f64::INFINITY;
        let mut costs = vec![0.0f64; k * k];
        for idx in order {
            // The projection bound never exceeds the bottleneck term, so it is a
            // valid floor and lets the matcher start from a higher threshold.
            let (_, lb) = bounds[idx];
            if lb >= best {
                break;
            }
            let cols = &self.variants[idx].columns;
            for (a, row) in cols.chunks(stride).zip(costs.chunks_mut(k)) {
                row.fill(0.0);
                for (&x, coordinate) in a.iter().zip(&by_coordinate) {
                    for (c, &y) in row.iter_mut().zip(coordinate) {
                        *c = c.max((x - y).abs());
                    }
                }
            }
            best = best.min(bottleneck_value(&costs, k, lb, best));
        }
        best
    }
}
