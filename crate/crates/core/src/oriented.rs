//! Orientation-aware invariants of Euclidean clouds: simplex strength, Oriented
//! Centered Distributions and the Simplexwise Centered Distribution.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{center, euclidean, norm, pair_index, validate_subset, Cloud, CondensedDistances};
use crate::invariants::{weighted_moments, MomentVector};
use crate::perm::{binomial, canonical_form, collapse, lex_cmp, sort_columns};

/// Which real value replaces an orientation sign when comparing oriented columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignFeature {
    /// `sign * strength / c_n`, Lipschitz continuous.
    #[default]
    Strength,
    /// `sign * volume`, unnormalized.
    Area,
}

impl FromStr for SignFeature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strength" => Ok(Self::Strength),
            "area" => Ok(Self::Area),
            other => Err(Error::InvalidArgument(format!("unknown sign feature '{other}'"))),
        }
    }
}

impl fmt::Display for SignFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strength => "strength",
            Self::Area => "area",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StrengthConfig {
    c_n: Option<f64>,
    pub sign_feature: SignFeature,
}

impl StrengthConfig {
    pub fn new(sign_feature: SignFeature) -> Self {
        Self {
            c_n: None,
            sign_feature,
        }
    }

    /// Replaces the per-dimension constant with a fixed positive value.
    pub fn with_c_n(mut self, c_n: f64) -> Result<Self> {
        if !(c_n > 0.0) || !c_n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "c_n must be a finite positive number, got {c_n}"
            )));
        }
        self.c_n = Some(c_n);
        Ok(self)
    }

    pub fn c_n_override(&self) -> Option<f64> {
        self.c_n
    }

    /// Lipschitz constant of strength in dimension `n`.
    pub fn c(&self, n: usize) -> f64 {
        self.c_n.unwrap_or(match n {
            2 => 2.0 * 3f64.sqrt(),
            3 => 0.43,
            4 => 0.01,
            _ => 1.0,
        })
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Squared volume of the simplex on `n + 1` points from its pairwise distances.
pub fn squared_volume(dists: &CondensedDistances) -> Result<f64> {
    let k = dists.points();
    if k < 2 {
        return Err(Error::InvalidArgument(
            "a simplex needs at least two vertices".into(),
        ));
    }
    let n = k - 1;
    let mut cm = DMatrix::<f64>::from_element(k + 1, k + 1, 1.0);
    cm[(0, 0)] = 0.0;
    for i in 0..k {
        for j in 0..k {
            let d = dists.get(i, j);
            cm[(i + 1, j + 1)] = d * d;
        }
    }
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let v2 = sign * cm.determinant() / (2f64.powi(n as i32) * factorial(n).powi(2));
    let max_d = dists.values().iter().fold(0.0f64, |a, &b| a.max(b));
    let tolerance = 1e-12 * max_d.powi(2 * n as i32);
    if v2 < -tolerance {
        return Err(Error::InvalidMetric {
            squared_volume: v2,
            tolerance,
        });
    }
    Ok(v2.max(0.0))
}

/// Strength `V^2 / p^(2n-1)` of the simplex on `n + 1` points, `p` being half the
/// sum of all pairwise distances.
pub fn strength(dists: &CondensedDistances) -> Result<f64> {
    let n = dists.points().saturating_sub(1) as i32;
    let v2 = squared_volume(dists)?;
    let p = dists.values().iter().sum::<f64>() / 2.0;
    if v2 == 0.0 || p == 0.0 {
        return Ok(0.0);
    }
    Ok(v2 / p.powi(2 * n - 1))
}

/// Oriented Centered Distribution of a cloud relative to `n - 1` ordered anchors
/// and the origin.
///
/// `d_part` holds the condensed distances over the anchors followed by the origin.
/// Each column, for a non-anchor point `q`, holds its distances to the anchors, its
/// norm `|q|` and the orientation sign in `{-1, 0, 1}`; columns are kept in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ocd {
    n: usize,
    d_part: Vec<f64>,
    columns: Vec<f64>,
}

impl Ocd {
    pub fn new(n: usize, d_part: Vec<f64>, mut columns: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "oriented distributions need dimension at least 2, got {n}"
            )));
        }
        let stride = n + 1;
        if d_part.len() != n * (n - 1) / 2 || columns.is_empty() || columns.len() % stride != 0 {
            return Err(Error::ShapeMismatch(format!(
                "dimension {n} needs {} anchor distances and a positive multiple of {stride} column entries, got {} and {}",
                n * (n - 1) / 2,
                d_part.len(),
                columns.len()
            )));
        }
        let bad_distance = d_part
            .iter()
            .chain(columns.chunks(stride).flat_map(|c| &c[..n]))
            .any(|v| !(*v >= 0.0) || !v.is_finite());
        if bad_distance {
            return Err(Error::InvalidArgument(
                "distances must be finite and non-negative".into(),
            ));
        }
        for col in columns.chunks_mut(stride) {
            let s = col[n];
            if s != -1.0 && s != 0.0 && s != 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "orientation signs must be -1, 0 or 1, got {s}"
                )));
            }
            col[n] = s + 0.0;
        }
        sort_columns(&mut columns, stride);
        Ok(Self { n, d_part, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_part(&self) -> &[f64] {
        &self.d_part
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.columns.chunks(self.n + 1)
    }

    pub(crate) fn flat_columns(&self) -> &[f64] {
        &self.columns
    }

    pub fn column_count(&self) -> usize {
        self.columns.len() / (self.n + 1)
    }

    /// Distances over the simplex formed by the anchors, the origin and the point
    /// of column `col`.
    fn simplex(&self, col: &[f64]) -> CondensedDistances {
        let n = self.n;
        CondensedDistances::from_fn(n + 1, |i, j| {
            if j == n {
                col[i]
            } else {
                self.d_part[pair_index(n, i, j)]
            }
        })
    }

    /// The real-valued orientation feature of every column, in column order.
    pub fn features(&self, cfg: &StrengthConfig) -> Result<Vec<f64>> {
        let c = cfg.c(self.n);
        self.columns()
            .map(|col| {
                let s = col[self.n];
                if s == 0.0 {
                    return Ok(0.0);
                }
                let simplex = self.simplex(col);
                Ok(match cfg.sign_feature {
                    SignFeature::Strength => s * strength(&simplex)? / c,
                    SignFeature::Area => s * squared_volume(&simplex)?.sqrt(),
                })
            })
            .collect()
    }

    /// The representative minimizing `(d_part, columns)` over anchor relabelings.
    pub fn canonical(&self) -> Self {
        let n = self.n;
        let (d_part, columns) =
            canonical_form(&self.d_part, n, &self.columns, n + 1, n - 1, Some(n));
        Self { n, d_part, columns }
    }

    /// The same distribution with every orientation sign reversed.
    pub fn mirror(&self) -> Self {
        let n = self.n;
        let mut columns = self.columns.clone();
        for col in columns.chunks_mut(n + 1) {
            col[n] = -col[n] + 0.0;
        }
        sort_columns(&mut columns, n + 1);
        Self {
            n,
            d_part: self.d_part.clone(),
            columns,
        }
    }

    pub(crate) fn key_cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.d_part, &other.d_part).then_with(|| lex_cmp(&self.columns, &other.columns))
    }
}

const SIGN_TOL: f64 = 1e-9;

/// The OCD of `cloud` relative to the given anchors, with the origin as the
/// additional reference point. The cloud is used as positioned.
pub fn ocd(cloud: &Cloud, anchors: &[usize]) -> Result<Ocd> {
    let n = cloud.dim();
    let m = cloud.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "oriented distributions need dimension at least 2, got {n}"
        )));
    }
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "a cloud in dimension {n} needs at least {n} points, got {m}"
        )));
    }
    if anchors.len() != n - 1 {
        return Err(Error::InvalidArgument(format!(
            "dimension {n} needs {} anchors, got {}",
            n - 1,
            anchors.len()
        )));
    }
    validate_subset(anchors, m)?;
    let d_part = CondensedDistances::from_fn(n, |i, j| {
        if j == n - 1 {
            norm(cloud.point(anchors[i]))
        } else {
            cloud.distance(anchors[i], anchors[j])
        }
    });
    let mut is_anchor = vec![false; m];
    anchors.iter().for_each(|&a| is_anchor[a] = true);
    let mut columns = Vec::with_capacity((n + 1) * (m - n + 1));
    let mut basis = DMatrix::<f64>::zeros(n, n);
    for q in (0..m).filter(|&q| !is_anchor[q]) {
        let qp = cloud.point(q);
        columns.extend(anchors.iter().map(|&a| euclidean(qp, cloud.point(a))));
        columns.push(norm(qp));
        for (c, &a) in anchors.iter().enumerate() {
            for r in 0..n {
                basis[(r, c)] = qp[r] - cloud.point(a)[r];
            }
        }
        for r in 0..n {
            basis[(r, n - 1)] = qp[r];
        }
        let det = basis.determinant();
        let scale: f64 = basis.column_iter().map(|c| c.norm()).product();
        columns.push(if det.abs() <= SIGN_TOL * scale {
            0.0
        } else {
            det.signum()
        });
    }
    sort_columns(&mut columns, n + 1);
    Ok(Ocd {
        n,
        d_part: d_part.values().to_vec(),
        columns,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScdEntry {
    pub ocd: Ocd,
    pub multiplicity: u64,
}

/// Simplexwise Centered Distribution: OCDs over all unordered `(n - 1)`-subsets,
/// identical ones merged. The weight of an entry is `multiplicity / C(m, n - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scd {
    n: usize,
    m: usize,
    total: u64,
    config: StrengthConfig,
    precentered: bool,
    entries: Vec<ScdEntry>,
}

impl Scd {
    pub fn new(
        n: usize,
        m: usize,
        config: StrengthConfig,
        precentered: bool,
        entries: Vec<ScdEntry>,
    ) -> Result<Self> {
        if n < 2 || m < n {
            return Err(Error::InvalidArgument(format!(
                "need dimension at least 2 and at least n points, got n = {n}, m = {m}"
            )));
        }
        let total = binomial(m, n - 1);
        let sum: u64 = entries.iter().map(|e| e.multiplicity).sum();
        if sum != total || entries.iter().any(|e| e.multiplicity == 0) {
            return Err(Error::InfeasibleWeights(format!(
                "multiplicities sum to {sum}, expected C({m},{}) = {total}",
                n - 1
            )));
        }
        if let Some(e) = entries
            .iter()
            .find(|e| e.ocd.n != n || e.ocd.column_count() != m - n + 1)
        {
            return Err(Error::ShapeMismatch(format!(
                "entry of dimension {} with {} columns in a distribution with n = {n}, m = {m}",
                e.ocd.n,
                e.ocd.column_count()
            )));
        }
        Ok(Self {
            n,
            m,
            total,
            config,
            precentered,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn config(&self) -> &StrengthConfig {
        &self.config
    }

    pub fn precentered(&self) -> bool {
        self.precentered
    }

    pub fn entries(&self) -> &[ScdEntry] {
        &self.entries
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.entries[i].multiplicity as f64 / self.total as f64
    }

    pub fn is_uncollapsed(&self) -> bool {
        self.entries.iter().all(|e| e.multiplicity == 1)
    }

    pub fn expanded(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|e| {
                std::iter::repeat_n(
                    ScdEntry {
                        ocd: e.ocd.clone(),
                        multiplicity: 1,
                    },
                    e.multiplicity as usize,
                )
            })
            .collect();
        Self { entries, ..*self }
    }

    /// Every orientation sign reversed; entries keep their order and weights.
    pub fn mirror(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| ScdEntry {
                ocd: e.ocd.mirror(),
                multiplicity: e.multiplicity,
            })
            .collect();
        Self { entries, ..*self }
    }
}

pub fn mirror_scd(s: &Scd) -> Scd {
    s.mirror()
}

fn prepare(cloud: &Cloud, precenter: bool) -> Result<Cloud> {
    let n = cloud.dim();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "oriented distributions need dimension at least 2, got {n}"
        )));
    }
    if cloud.len() < n {
        return Err(Error::InvalidArgument(format!(
            "a cloud in dimension {n} needs at least {n} points, got {}",
            cloud.len()
        )));
    }
    Ok(if precenter {
        center(cloud)
    } else {
        cloud.clone()
    })
}

fn all_ocds(cloud: &Cloud) -> Result<Vec<Ocd>> {
    (0..cloud.len())
        .combinations(cloud.dim() - 1)
        .map(|a| ocd(cloud, &a))
        .collect()
}

/// Builds the SCD. With `precenter` the center of mass is moved to the origin
/// first; otherwise the origin of the given coordinates is the reference point.
pub fn scd(cloud: &Cloud, cfg: StrengthConfig, precenter: bool) -> Result<Scd> {
    let c = prepare(cloud, precenter)?;
    let mut canon: Vec<Ocd> = all_ocds(&c)?.iter().map(Ocd::canonical).collect();
    canon.sort_by(Ocd::key_cmp);
    let entries = collapse(canon, |a, b| a.key_cmp(b) == Ordering::Equal, None)
        .into_iter()
        .map(|(ocd, multiplicity)| ScdEntry { ocd, multiplicity })
        .collect();
    Ok(Scd {
        n: c.dim(),
        m: c.len(),
        total: binomial(c.len(), c.dim() - 1),
        config: cfg,
        precentered: precenter,
        entries,
    })
}

/// The average centered vector of one OCD: sorted anchor distances, sorted anchor
/// norms, sorted column averages over the anchor rows, sorted `|q|`, then the
/// orientation features (sorted in strength mode, in column order in area mode).
fn average_vector(ocd: &Ocd, cfg: &StrengthConfig) -> Result<Vec<f64>> {
    let n = ocd.n;
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    let mut within = Vec::new();
    let mut to_origin = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = ocd.d_part[pair_index(n, i, j)];
            if j == n - 1 {
                to_origin.push(d);
            } else {
                within.push(d);
            }
        }
    }
    let mut out = sorted(within);
    out.extend(sorted(to_origin));
    out.extend(sorted(
        ocd.columns()
            .map(|c| c[..n - 1].iter().sum::<f64>() / (n - 1) as f64)
            .collect(),
    ));
    out.extend(sorted(ocd.columns().map(|c| c[n - 1]).collect()));
    let features = ocd.features(cfg)?;
    out.extend(match cfg.sign_feature {
        SignFeature::Strength => sorted(features),
        SignFeature::Area => features,
    });
    Ok(out)
}

/// Centered Distance Moment: per-coordinate `l`-th moments of the average
/// centered vectors over all `C(m, n - 1)` anchor subsets.
pub fn cdm(cloud: &Cloud, l: u32, cfg: StrengthConfig, precenter: bool) -> Result<MomentVector> {
    let c = prepare(cloud, precenter)?;
    let rows = all_ocds(&c)?
        .iter()
        .map(|o| Ok((average_vector(o, &cfg)?, 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentVector::new(c.dim() - 1, l, weighted_moments(&rows, l)?))
}

/// Moments of an already computed distribution, weighting entries by multiplicity.
pub fn cdm_of(scd: &Scd, l: u32, cfg: &StrengthConfig) -> Result<MomentVector> {
    let rows = scd
        .entries
        .iter()
        .map(|e| Ok((average_vector(&e.ocd, cfg)?, e.multiplicity)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentVector::new(scd.n - 1, l, weighted_moments(&rows, l)?))
}

pub(crate) fn check_same_shape(a: &Scd, b: &Scd) -> Result<()> {
    if a.n != b.n || a.m != b.m {
        return Err(Error::ShapeMismatch(format!(
            "distributions over (n = {}, m = {}) and (n = {}, m = {})",
            a.n, a.m, b.n, b.m
        )));
    }
    Ok(())
}

pub(crate) fn total_cmp_scd(a: &Scd, b: &Scd) -> Ordering {
    a.entries.len().cmp(&b.entries.len()).then_with(|| {
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.ocd.key_cmp(&y.ocd).then(x.multiplicity.cmp(&y.multiplicity)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}
