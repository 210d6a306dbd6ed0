//! Point clouds, isometries and pairwise distances.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A finite cloud of `m` unlabeled points in `R^n`.
///
/// Points are kept in file order for reproducibility, but nothing computed from a
/// cloud depends on that order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cloud {
    dim: usize,
    coords: Vec<f64>,
}

impl Cloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Empty("a cloud needs at least one point".into()))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a cloud from row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Empty("a cloud needs at least one point".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }

    pub fn centroid(&self) -> Vec<f64> {
        let m = self.len() as f64;
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for (acc, x) in c.iter_mut().zip(p) {
                *acc += x;
            }
        }
        c.iter_mut().for_each(|x| *x /= m);
        c
    }

    /// Largest pairwise distance, zero for a single point.
    pub fn diameter(&self) -> f64 {
        let m = self.len();
        let mut best = 0.0f64;
        for i in 0..m {
            for j in i + 1..m {
                best = best.max(self.distance(i, j));
            }
        }
        best
    }

    /// Returns the cloud with its points stored in the given order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        check_subset(order, self.len())?;
        if order.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "a reordering needs {} indices, got {}",
                self.len(),
                order.len()
            )));
        }
        let coords = order
            .iter()
            .flat_map(|&i| self.point(i).iter().copied())
            .collect();
        Ok(Self {
            dim: self.dim,
            coords,
        })
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Input file layout accepted by [`load_cloud`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudFormat {
    /// One point per line, comma separated coordinates.
    Csv,
    /// `label x y z` per line, optionally preceded by a count and a comment line.
    Xyz,
}

impl CloudFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("xyz") => Self::Xyz,
            _ => Self::Csv,
        }
    }
}

impl FromStr for CloudFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "xyz" => Ok(Self::Xyz),
            other => Err(Error::InvalidArgument(format!("unknown cloud format '{other}'"))),
        }
    }
}

impl fmt::Display for CloudFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Xyz => "xyz",
        })
    }
}

pub fn load_cloud(path: impl AsRef<Path>, format: CloudFormat) -> Result<Cloud> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_cloud(&text, format, &path.display().to_string())
}

/// Parses cloud text; `source_name` only labels error messages.
pub fn parse_cloud(text: &str, format: CloudFormat, source_name: &str) -> Result<Cloud> {
    match format {
        CloudFormat::Csv => parse_csv(text, source_name),
        CloudFormat::Xyz => parse_xyz(text, source_name),
    }
}

fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_coord(token: &str, source_name: &str, line: usize) -> Result<f64> {
    let value: f64 = token
        .trim()
        .parse()
        .map_err(|_| parse_error(source_name, line, format!("'{}' is not a number", token.trim())))?;
    if !value.is_finite() {
        return Err(parse_error(source_name, line, "coordinates must be finite"));
    }
    Ok(value)
}

fn push_row(
    coords: &mut Vec<f64>,
    dim: &mut Option<usize>,
    row: Vec<f64>,
    source_name: &str,
    line: usize,
) -> Result<()> {
    match *dim {
        None => *dim = Some(row.len()),
        Some(d) if d != row.len() => {
            return Err(parse_error(
                source_name,
                line,
                Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                }
                .to_string(),
            ))
        }
        Some(_) => {}
    }
    coords.extend(row);
    Ok(())
}

fn parse_csv(text: &str, source_name: &str) -> Result<Cloud> {
    let mut coords = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| parse_coord(t, source_name, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        push_row(&mut coords, &mut dim, row, source_name, idx + 1)?;
    }
    let dim = dim.ok_or_else(|| Error::Empty(format!("{source_name} contains no points")))?;
    Cloud::from_flat(dim, coords)
}

fn parse_xyz(text: &str, source_name: &str) -> Result<Cloud> {
    let mut coords = Vec::new();
    let mut dim = None;
    let mut skip_comment = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if skip_comment {
            skip_comment = false;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if dim.is_none() {
            // Standard header: an atom count followed by a free-form comment line.
            if tokens.len() == 1 && tokens[0].parse::<usize>().is_ok() {
                skip_comment = true;
                continue;
            }
            if tokens.len() < 2 || tokens[1..].iter().any(|t| t.parse::<f64>().is_err()) {
                continue;
            }
        }
        if tokens.len() < 2 {
            return Err(parse_error(source_name, idx + 1, "expected 'label x y ...'"));
        }
        let row = tokens[1..]
            .iter()
            .map(|t| parse_coord(t, source_name, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        push_row(&mut coords, &mut dim, row, source_name, idx + 1)?;
    }
    let dim = dim.ok_or_else(|| Error::Empty(format!("{source_name} contains no points")))?;
    Cloud::from_flat(dim, coords)
}

/// Translates the center of mass to the origin.
pub fn center(cloud: &Cloud) -> Cloud {
    let c = cloud.centroid();
    let coords = cloud
        .points()
        .flat_map(|p| p.iter().zip(&c).map(|(x, m)| x - m))
        .collect();
    Cloud {
        dim: cloud.dim,
        coords,
    }
}

/// An orthogonal map followed by a translation, `p -> R p + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    rotation: DMatrix<f64>,
    translation: DVector<f64>,
}

const ORTHOGONALITY_TOL: f64 = 1e-12;

impl Isometry {
    pub fn new(rotation: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let n = rotation.nrows();
        if rotation.ncols() != n || translation.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "isometry needs an n x n rotation and an n-vector, got {}x{} and {}",
                rotation.nrows(),
                rotation.ncols(),
                translation.len()
            )));
        }
        let gram = rotation.transpose() * &rotation;
        let err = (gram - DMatrix::<f64>::identity(n, n)).amax();
        if err > ORTHOGONALITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "rotation is not orthogonal (deviation {err:e})"
            )));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rotation: DMatrix::identity(n, n),
            translation: DVector::zeros(n),
        }
    }

    /// Rotation of the plane by `angle` radians about the origin.
    pub fn rotation_2d(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            rotation: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            translation: DVector::zeros(2),
        }
    }

    /// Mirror reflection negating coordinate `axis`.
    pub fn reflection(n: usize, axis: usize) -> Self {
        let mut rotation = DMatrix::identity(n, n);
        rotation[(axis, axis)] = -1.0;
        Self {
            rotation,
            translation: DVector::zeros(n),
        }
    }

    /// A random orthogonal map (Haar-distributed) with the requested orientation,
    /// followed by a translation with coordinates uniform in `[-shift, shift]`.
    pub fn random<R: Rng + ?Sized>(n: usize, proper: bool, shift: f64, rng: &mut R) -> Self {
        let gaussian = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let qr = gaussian.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        let det = q.determinant();
        if (det > 0.0) != proper {
            q.column_mut(0).neg_mut();
        }
        let translation = DVector::from_fn(n, |_, _| rng.random_range(-shift..=shift));
        Self {
            rotation: q,
            translation,
        }
    }

    pub fn with_translation(mut self, translation: Vec<f64>) -> Result<Self> {
        if translation.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: translation.len(),
            });
        }
        self.translation = DVector::from_vec(translation);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    /// True when the map preserves orientation (determinant +1).
    pub fn is_proper(&self) -> bool {
        self.rotation.determinant() > 0.0
    }

    pub fn apply_point(&self, p: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n).map(|j| self.rotation[(i, j)] * p[j]).sum::<f64>() + self.translation[i]
            })
            .collect()
    }
}

pub fn apply_isometry(cloud: &Cloud, g: &Isometry) -> Result<Cloud> {
    if g.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: cloud.dim(),
            found: g.dim(),
        });
    }
    let coords = cloud.points().flat_map(|p| g.apply_point(p)).collect();
    Ok(Cloud {
        dim: cloud.dim,
        coords,
    })
}

/// Moves every point uniformly at random inside the closed ball of radius `eps`.
pub fn perturb(cloud: &Cloud, eps: f64, seed: u64) -> Result<Cloud> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "perturbation radius must be a finite non-negative number, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(cloud.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cloud.dim();
    let mut coords = Vec::with_capacity(cloud.coords.len());
    let mut dir = vec![0.0; n];
    for p in cloud.points() {
        let len = loop {
            dir.iter_mut().for_each(|d| *d = rng.sample(StandardNormal));
            let len = norm(&dir);
            if len > 0.0 {
                break len;
            }
        };
        let u: f64 = rng.random();
        let radius = eps * u.powf(1.0 / n as f64);
        coords.extend(p.iter().zip(&dir).map(|(x, d)| x + radius * d / len));
    }
    Ok(Cloud {
        dim: cloud.dim,
        coords,
    })
}

/// Pairwise distances of an `h`-point set, one entry per unordered pair `i < j`
/// in row-major order: `(0,1), (0,2), ..., (0,h-1), (1,2), ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct CondensedDistances {
    points: usize,
    values: Vec<f64>,
}

impl CondensedDistances {
    pub fn new(points: usize, values: Vec<f64>) -> Result<Self> {
        let expected = points * points.saturating_sub(1) / 2;
        if values.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{points} points need {expected} pairwise distances, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "distances must be finite and non-negative".into(),
            ));
        }
        Ok(Self { points, values })
    }

    /// Builds from a function of the index pair, called for `i < j`.
    pub(crate) fn from_fn(points: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(points * points.saturating_sub(1) / 2);
        for i in 0..points {
            for j in i + 1..points {
                values.push(f(i, j));
            }
        }
        Self { points, values }
    }

    pub fn points(&self) -> usize {
        self.points
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

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.values[pair_index(self.points, a, b)]
    }

    /// The same distances with point `a` of the result taken from point `order[a]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_fn(self.points, |i, j| self.get(order[i], order[j]))
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub(crate) fn pair_index(points: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < points);
    i * (2 * points - i - 1) / 2 + (j - i - 1)
}

fn check_subset(subset: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in subset {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

pub(crate) fn validate_subset(subset: &[usize], len: usize) -> Result<()> {
    check_subset(subset, len)
}

pub fn condensed_distances(cloud: &Cloud, subset: &[usize]) -> Result<CondensedDistances> {
    check_subset(subset, cloud.len())?;
    Ok(CondensedDistances::from_fn(subset.len(), |i, j| {
        cloud.distance(subset[i], subset[j])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn triangle() -> Cloud {
        Cloud::new(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 3.0]]).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn parses_csv_in_file_order() {
        let c = parse_cloud("0,0\n4,0\n0,3", CloudFormat::Csv, "t").unwrap();
        assert_eq!(c, triangle());
        assert_eq!((c.len(), c.dim()), (3, 2));
    }

    #[test]
    fn csv_comments_are_skipped() {
        let c = parse_cloud("# x,y\n1,0\n-1,0\n0,1\n0,-1\n", CloudFormat::Csv, "s").unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn csv_mixed_arity_is_rejected() {
        let err = parse_cloud("0,0\n1,2,3\n", CloudFormat::Csv, "bad").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("dimension mismatch"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_empty_and_garbage() {
        assert!(matches!(
            parse_cloud("# nothing\n\n", CloudFormat::Csv, "e"),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            parse_cloud("1,x\n", CloudFormat::Csv, "g"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_cloud("1,inf\n", CloudFormat::Csv, "g").is_err());
    }

    #[test]
    fn xyz_with_header() {
        let text = "3\nwater molecule\nO 0.0 0.0 0.0\nH 0.96 0.0 0.0\nH -0.24 0.93 0.0\n";
        let c = parse_cloud(text, CloudFormat::Xyz, "w").unwrap();
        assert_eq!((c.len(), c.dim()), (3, 3));
        assert_eq!(c.point(1), &[0.96, 0.0, 0.0]);
    }

    #[test]
    fn xyz_without_header() {
        let c = parse_cloud("C 1 2 3\nC 4 5 6\n", CloudFormat::Xyz, "x").unwrap();
        assert_eq!(c.point(1), &[4.0, 5.0, 6.0]);
        assert!(parse_cloud("C 1 2 3\nC 4 5\n", CloudFormat::Xyz, "x").is_err());
    }

    #[test]
    fn centering_triangle() {
        let c = center(&triangle());
        let expected = [-4.0 / 3.0, -1.0, 8.0 / 3.0, -1.0, -4.0 / 3.0, 2.0];
        for (a, b) in c.coords().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let again = center(&c);
        for (a, b) in again.coords().iter().zip(c.coords()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_is_already_centered() {
        let s = Cloud::new(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        assert_eq!(center(&s), s);
    }

    #[test]
    fn isometries() {
        let p = Cloud::new(vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(apply_isometry(&p, &Isometry::identity(2)).unwrap(), p);
        let q = apply_isometry(&p, &Isometry::rotation_2d(std::f64::consts::FRAC_PI_2)).unwrap();
        assert_abs_diff_eq!(q.point(0)[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.point(0)[1], 1.0, epsilon = 1e-15);

        let mirrored = apply_isometry(&triangle(), &Isometry::reflection(2, 0)).unwrap();
        let d = condensed_distances(&mirrored, &[0, 1, 2]).unwrap();
        assert_eq!(sorted(d.values().to_vec()), vec![3.0, 4.0, 5.0]);
        assert!(apply_isometry(&triangle(), &Isometry::identity(3)).is_err());
    }

    #[test]
    fn random_isometry_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..5 {
            let g = Isometry::random(n, true, 1.0, &mut rng);
            assert!(g.is_proper());
            let g = Isometry::random(n, false, 1.0, &mut rng);
            assert!(!g.is_proper());
            assert!(Isometry::new(g.rotation().clone(), g.translation().clone()).is_ok());
        }
        assert!(Isometry::new(DMatrix::from_element(2, 2, 1.0), DVector::zeros(2)).is_err());
    }

    #[test]
    fn perturbation_is_bounded_and_deterministic() {
        let c = triangle();
        assert_eq!(perturb(&c, 0.0, 3).unwrap(), c);
        let a = perturb(&c, 0.1, 3).unwrap();
        let b = perturb(&c, 0.1, 3).unwrap();
        assert_eq!(a, b);
        for (p, q) in c.points().zip(a.points()) {
            assert!(euclidean(p, q) <= 0.1);
        }
        assert!(perturb(&c, -1.0, 0).is_err());
    }

    #[test]
    fn condensed_distances_of_triangle() {
        let d = condensed_distances(&triangle(), &[0, 1, 2]).unwrap();
        assert_eq!(d.values(), &[4.0, 3.0, 5.0]);
        assert_eq!(d.get(2, 1), 5.0);
        assert!(condensed_distances(&triangle(), &[1]).unwrap().is_empty());
        assert!(matches!(
            condensed_distances(&triangle(), &[0, 0]),
            Err(Error::DuplicateIndex(0))
        ));
        assert!(matches!(
            condensed_distances(&triangle(), &[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn pair_indexing() {
        let d = CondensedDistances::from_fn(5, |i, j| (10 * i + j) as f64);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(d.get(i, j), (10 * i.min(j) + i.max(j)) as f64);
                }
            }
        }
        let p = d.permuted(&[4, 3, 2, 1, 0]);
        assert_eq!(p.get(0, 1), d.get(4, 3));
    }
}
