//! Distance-based invariants: sorted distances, pointwise distributions, relative
//! distance distributions and their simplexwise collections and moments.

use std::cmp::Ordering;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{condensed_distances, Cloud};
use crate::metrics;
use crate::perm::{binomial, canonical_form, collapse, lex_cmp, sort_columns};

/// All pairwise distances of the cloud in increasing order.
pub fn sdv(cloud: &Cloud) -> Result<Vec<f64>> {
    let m = cloud.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "sorted distance vector needs at least 2 points, got {m}"
        )));
    }
    let all: Vec<usize> = (0..m).collect();
    Ok(condensed_distances(cloud, &all)?.sorted())
}

/// Pointwise Distance Distribution: one sorted row of neighbor distances per point,
/// identical rows merged.
#[derive(Clone, Debug, PartialEq)]
pub struct Pdd {
    m: usize,
    rows: Vec<(Vec<f64>, u64)>,
}

impl Pdd {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Distinct rows in lexicographic order with their multiplicities.
    pub fn rows(&self) -> &[(Vec<f64>, u64)] {
        &self.rows
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.rows[i].1 as f64 / self.m as f64
    }
}

fn neighbor_rows(cloud: &Cloud) -> Vec<Vec<f64>> {
    let m = cloud.len();
    (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| cloud.distance(i, j)).collect();
            row.sort_by(f64::total_cmp);
            row
        })
        .collect()
}

pub fn pdd(cloud: &Cloud) -> Result<Pdd> {
    let m = cloud.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "pointwise distance distribution needs at least 2 points, got {m}"
        )));
    }
    let mut rows = neighbor_rows(cloud);
    rows.sort_by(|a, b| lex_cmp(a, b));
    Ok(Pdd {
        m,
        rows: collapse(rows, |a, b| lex_cmp(a, b) == Ordering::Equal, None),
    })
}

/// Average Minimum Distances `(AMD_1, ..., AMD_k)`.
pub fn amd(cloud: &Cloud, k: usize) -> Result<Vec<f64>> {
    let m = cloud.len();
    if m < 2 || k == 0 || k > m - 1 {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 1..={} for a cloud of {m} points, got {k}",
            m.saturating_sub(1)
        )));
    }
    let rows = neighbor_rows(cloud);
    Ok((0..k)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / m as f64)
        .collect())
}

/// Relative Distance Distribution of a cloud with respect to `h` ordered anchors.
///
/// `d_part` holds the condensed distances between anchors; `columns` holds, for
/// every other point, its distances to the anchors (stride `h`), the columns in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Rdd {
    h: usize,
    d_part: Vec<f64>,
    columns: Vec<f64>,
}

impl Rdd {
    pub fn new(h: usize, d_part: Vec<f64>, mut columns: Vec<f64>) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidArgument("an RDD needs at least one anchor".into()));
        }
        if d_part.len() != h * (h - 1) / 2 || columns.len() % h != 0 || columns.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "{h} anchors need {} anchor distances and a positive multiple of {h} column entries, got {} and {}",
                h * (h - 1) / 2,
                d_part.len(),
                columns.len()
            )));
        }
        if d_part.iter().chain(&columns).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "distances must be finite and non-negative".into(),
            ));
        }
        sort_columns(&mut columns, h);
        Ok(Self {
            h,
            d_part,
            columns,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn d_part(&self) -> &[f64] {
        &self.d_part
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.columns.chunks(self.h)
    }

    pub(crate) fn flat_columns(&self) -> &[f64] {
        &self.columns
    }

    pub fn column_count(&self) -> usize {
        self.columns.len() / self.h
    }

    /// The representative minimizing `(d_part, columns)` over anchor relabelings.
    pub fn canonical(&self) -> Self {
        let (d_part, columns) =
            canonical_form(&self.d_part, self.h, &self.columns, self.h, self.h, None);
        Self {
            h: self.h,
            d_part,
            columns,
        }
    }

    pub(crate) fn key_cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.d_part, &other.d_part).then_with(|| lex_cmp(&self.columns, &other.columns))
    }

    /// Sorted anchor distances followed by the sorted column averages.
    pub fn average_vector(&self) -> Vec<f64> {
        let mut sdv = self.d_part.clone();
        sdv.sort_by(f64::total_cmp);
        let mut averages: Vec<f64> = self
            .columns()
            .map(|c| c.iter().sum::<f64>() / self.h as f64)
            .collect();
        averages.sort_by(f64::total_cmp);
        sdv.extend(averages);
        sdv
    }
}

pub fn rdd(cloud: &Cloud, anchors: &[usize]) -> Result<Rdd> {
    let m = cloud.len();
    let h = anchors.len();
    if h == 0 || h >= m {
        return Err(Error::InvalidArgument(format!(
            "anchor count must lie in 1..{m}, got {h}"
        )));
    }
    let d = condensed_distances(cloud, anchors)?;
    let mut is_anchor = vec![false; m];
    anchors.iter().for_each(|&a| is_anchor[a] = true);
    let mut columns = Vec::with_capacity(h * (m - h));
    for q in (0..m).filter(|&q| !is_anchor[q]) {
        columns.extend(anchors.iter().map(|&a| cloud.distance(a, q)));
    }
    sort_columns(&mut columns, h);
    Ok(Rdd {
        h,
        d_part: d.values().to_vec(),
        columns,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SddEntry {
    pub rdd: Rdd,
    pub multiplicity: u64,
}

/// Simplexwise Distance Distribution: RDDs over all unordered `h`-subsets.
///
/// The weight of an entry is `multiplicity / total` with `total = C(m, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sdd {
    h: usize,
    m: usize,
    n: usize,
    total: u64,
    entries: Vec<SddEntry>,
}

impl Sdd {
    pub fn new(h: usize, m: usize, n: usize, entries: Vec<SddEntry>) -> Result<Self> {
        if h == 0 || h >= m {
            return Err(Error::InvalidArgument(format!(
                "subset size must lie in 1..{m}, got {h}"
            )));
        }
        let total = binomial(m, h);
        let sum: u64 = entries.iter().map(|e| e.multiplicity).sum();
        if sum != total || entries.iter().any(|e| e.multiplicity == 0) {
            return Err(Error::InfeasibleWeights(format!(
                "multiplicities sum to {sum}, expected C({m},{h}) = {total}"
            )));
        }
        if let Some(e) = entries
            .iter()
            .find(|e| e.rdd.h != h || e.rdd.column_count() != m - h)
        {
            return Err(Error::ShapeMismatch(format!(
                "entry with {} anchors and {} columns in a distribution with h = {h}, m = {m}",
                e.rdd.h,
                e.rdd.column_count()
            )));
        }
        Ok(Self {
            h,
            m,
            n,
            total,
            entries,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of the source cloud.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn entries(&self) -> &[SddEntry] {
        &self.entries
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.entries[i].multiplicity as f64 / self.total as f64
    }

    /// True when every subset keeps its own entry of weight `1 / C(m, h)`.
    pub fn is_uncollapsed(&self) -> bool {
        self.entries.iter().all(|e| e.multiplicity == 1)
    }

    /// The distribution with every entry repeated by its multiplicity.
    pub fn expanded(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|e| {
                std::iter::repeat_n(
                    SddEntry {
                        rdd: e.rdd.clone(),
                        multiplicity: 1,
                    },
                    e.multiplicity as usize,
                )
            })
            .collect();
        Self { entries, ..*self }
    }
}

/// Builds the Simplexwise Distance Distribution over all `h`-point subsets.
///
/// `collapse_tol = None` keeps one entry per subset in lexicographic subset order.
/// `Some(0.0)` merges RDDs equal up to anchor relabeling; `Some(tau)` additionally
/// merges greedily (in canonical order) any RDD within `tau` of an earlier
/// representative, which is approximate because closeness is not transitive.
pub fn sdd(cloud: &Cloud, h: usize, collapse_tol: Option<f64>) -> Result<Sdd> {
    let m = cloud.len();
    if h == 0 || h >= m {
        return Err(Error::InvalidArgument(format!(
            "subset size must lie in 1..{m}, got {h}"
        )));
    }
    if let Some(tol) = collapse_tol {
        if !(tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "collapse tolerance must be non-negative, got {tol}"
            )));
        }
    }
    let rdds = (0..m)
        .combinations(h)
        .map(|a| rdd(cloud, &a))
        .collect::<Result<Vec<_>>>()?;
    let entries = match collapse_tol {
        None => rdds
            .into_iter()
            .map(|rdd| SddEntry {
                rdd,
                multiplicity: 1,
            })
            .collect(),
        Some(tol) => {
            let mut canon: Vec<Rdd> = rdds.iter().map(Rdd::canonical).collect();
            canon.sort_by(Rdd::key_cmp);
            let near = |a: &Rdd, b: &Rdd| metrics::rdd_dist(a, b).unwrap_or(f64::INFINITY);
            let tol = (tol > 0.0).then_some((tol, &near as &dyn Fn(&Rdd, &Rdd) -> f64));
            collapse(canon, |a, b| a.key_cmp(b) == Ordering::Equal, tol)
                .into_iter()
                .map(|(rdd, multiplicity)| SddEntry { rdd, multiplicity })
                .collect()
        }
    };
    Ok(Sdd {
        h,
        m,
        n: cloud.dim(),
        total: binomial(m, h),
        entries,
    })
}

/// Per-coordinate moments of a weighted family of equal-length vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    subset_size: usize,
    order: u32,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(subset_size: usize, order: u32, values: Vec<f64>) -> Self {
        Self {
            subset_size,
            order,
            values,
        }
    }

    /// Number of points in each subset the moments were taken over.
    pub fn subset_size(&self) -> usize {
        self.subset_size
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Population moments per coordinate: mean for `l = 1`, standard deviation for
/// `l = 2` and the standardized `l`-th central moment for `l >= 3`.
pub(crate) fn weighted_moments(rows: &[(Vec<f64>, u64)], l: u32) -> Result<Vec<f64>> {
    if l == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let Some((first, _)) = rows.first() else {
        return Err(Error::Empty("no vectors to take moments of".into()));
    };
    let len = first.len();
    let total: f64 = rows.iter().map(|(_, w)| *w as f64).sum();
    (0..len)
        .map(|c| {
            let mean = rows.iter().map(|(r, w)| r[c] * *w as f64).sum::<f64>() / total;
            if l == 1 {
                return Ok(mean);
            }
            let central = |p: i32| {
                rows.iter()
                    .map(|(r, w)| (r[c] - mean).powi(p) * *w as f64)
                    .sum::<f64>()
                    / total
            };
            let std = central(2).sqrt();
            if l == 2 {
                return Ok(std);
            }
            if std <= 1e-12 * mean.abs().max(1.0) {
                return Err(Error::DegenerateMoment { coordinate: c });
            }
            Ok(central(l as i32) / std.powi(l as i32))
        })
        .collect()
}

/// Simplexwise Distance Moment: per-coordinate moments of the average vectors
/// of all `C(m, h)` subsets.
pub fn sdm(cloud: &Cloud, h: usize, l: u32) -> Result<MomentVector> {
    sdm_of(&sdd(cloud, h, None)?, l)
}

/// Moments of an already computed distribution, weighting entries by multiplicity.
pub fn sdm_of(sdd: &Sdd, l: u32) -> Result<MomentVector> {
    let rows: Vec<(Vec<f64>, u64)> = sdd
        .entries
        .iter()
        .map(|e| (e.rdd.average_vector(), e.multiplicity))
        .collect();
    Ok(MomentVector::new(sdd.h, l, weighted_moments(&rows, l)?))
}

pub(crate) fn check_same_shape(a: &Sdd, b: &Sdd) -> Result<()> {
    if a.h != b.h || a.m != b.m {
        return Err(Error::ShapeMismatch(format!(
            "distributions over (h = {}, m = {}) and (h = {}, m = {})",
            a.h, a.m, b.h, b.m
        )));
    }
    Ok(())
}

pub(crate) fn total_cmp_sdd(a: &Sdd, b: &Sdd) -> Ordering {
    a.entries
        .len()
        .cmp(&b.entries.len())
        .then_with(|| {
            a.entries
                .iter()
                .zip(&b.entries)
                .map(|(x, y)| x.rdd.key_cmp(&y.rdd).then(x.multiplicity.cmp(&y.multiplicity)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}
