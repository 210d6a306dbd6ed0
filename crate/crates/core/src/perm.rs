//! Small helpers shared by the anchor-permutation code paths.

use std::cmp::Ordering;

use itertools::Itertools;

/// All permutations of `0..k` in lexicographic order, paired with their sign.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    (0..k)
        .permutations(k)
        .map(|p| {
            let sign = parity_sign(&p);
            (p, sign)
        })
        .collect()
}

fn parity_sign(p: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Lexicographic comparison of float slices under the IEEE total order.
pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Sorts fixed-stride columns stored contiguously in lexicographic order.
pub(crate) fn sort_columns(data: &mut Vec<f64>, stride: usize) {
    if stride == 0 || data.is_empty() {
        return;
    }
    let mut cols: Vec<&[f64]> = data.chunks(stride).collect();
    cols.sort_by(|a, b| lex_cmp(a, b));
    *data = cols.concat();
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Relabels a condensed distance list so that point `a` of the result is point
/// `order[a]` of the input. Points beyond `order.len()` keep their position.
pub(crate) fn permute_condensed(d: &[f64], points: usize, order: &[usize]) -> Vec<f64> {
    let full: Vec<usize> = order.iter().copied().chain(order.len()..points).collect();
    let mut out = Vec::with_capacity(d.len());
    for i in 0..points {
        for j in i + 1..points {
            let (a, b) = (full[i].min(full[j]), full[i].max(full[j]));
            out.push(d[crate::geometry::pair_index(points, a, b)]);
        }
    }
    out
}

/// Reorders the first `order.len()` rows of every column and scales the entry
/// at `sign_row`, if any, by `sign`.
pub(crate) fn permute_columns(
    columns: &[f64],
    stride: usize,
    order: &[usize],
    sign_row: Option<usize>,
    sign: f64,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(columns.len());
    for col in columns.chunks(stride) {
        out.extend(order.iter().map(|&r| col[r]));
        out.extend_from_slice(&col[order.len()..]);
        if let Some(s) = sign_row {
            let last = out.len() - stride + s;
            out[last] = out[last] * sign + 0.0;
        }
    }
    out
}

/// Lexicographically smallest `(d_part, sorted columns)` over all relabelings of
/// the first `k` points, where relabeling with an odd permutation flips `sign_row`.
pub(crate) fn canonical_form(
    d_part: &[f64],
    points: usize,
    columns: &[f64],
    stride: usize,
    k: usize,
    sign_row: Option<usize>,
) -> (Vec<f64>, Vec<f64>) {
    let mut best: Option<(Vec<f64>, Vec<f64>)> = None;
    for (order, sign) in signed_permutations(k) {
        let d = permute_condensed(d_part, points, &order);
        if let Some((bd, _)) = &best {
            if lex_cmp(&d, bd) == Ordering::Greater {
                continue;
            }
        }
        let mut cols = permute_columns(columns, stride, &order, sign_row, sign);
        sort_columns(&mut cols, stride);
        let better = match &best {
            None => true,
            Some((bd, bc)) => lex_cmp(&d, bd).then_with(|| lex_cmp(&cols, bc)) == Ordering::Less,
        };
        if better {
            best = Some((d, cols));
        }
    }
    best.expect("at least one permutation")
}

/// Merges a list of items sorted by canonical key. Exactly equal keys always merge;
/// with `tol`, an item also joins the first earlier representative within `tol`.
pub(crate) fn collapse<T>(
    items: Vec<T>,
    same: impl Fn(&T, &T) -> bool,
    tol: Option<(f64, &dyn Fn(&T, &T) -> f64)>,
) -> Vec<(T, u64)> {
    let mut out: Vec<(T, u64)> = Vec::new();
    for item in items {
        if let Some((last, count)) = out.last_mut() {
            if same(last, &item) {
                *count += 1;
                continue;
            }
        }
        if let Some((tol, dist)) = tol {
            if let Some((_, count)) = out.iter_mut().find(|(rep, _)| dist(rep, &item) <= tol) {
                *count += 1;
                continue;
            }
        }
        out.push((item, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], (vec![0, 1, 2], 1.0));
        assert_eq!(perms[1], (vec![0, 2, 1], -1.0));
        assert_eq!(perms[3].1, 1.0); // [1, 2, 0]
        assert_eq!(perms.iter().filter(|(_, s)| *s < 0.0).count(), 3);
    }

    #[test]
    fn condensed_relabeling() {
        // points 0,1,2 with d01=1, d02=2, d12=3
        let d = [1.0, 2.0, 3.0];
        assert_eq!(permute_condensed(&d, 3, &[1, 0]), vec![1.0, 3.0, 2.0]);
        assert_eq!(permute_condensed(&d, 3, &[2, 1, 0]), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let d = [5.0];
        let cols = [1.0, 2.0, 1.0, 3.0, 0.0, -1.0];
        let swapped = permute_columns(&cols, 3, &[1, 0], Some(2), -1.0);
        assert_eq!(swapped, vec![2.0, 1.0, -1.0, 0.0, 3.0, 1.0]);
        assert_eq!(
            canonical_form(&d, 2, &cols, 3, 2, Some(2)),
            canonical_form(&d, 2, &swapped, 3, 2, Some(2))
        );
    }

    #[test]
    fn collapse_merges_runs() {
        let merged = collapse(vec![1, 1, 2, 3, 3, 3], |a, b| a == b, None);
        assert_eq!(merged, vec![(1, 2), (2, 1), (3, 3)]);
        let close = |a: &i32, b: &i32| (a - b).abs() as f64;
        let merged = collapse(vec![1, 2, 5], |a, b| a == b, Some((1.0, &close)));
        assert_eq!(merged, vec![(1, 2), (5, 1)]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(100, 1), 100);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn columns_sort_lexicographically() {
        let mut data = vec![3.0, 1.0, 2.0, 5.0, 2.0, 4.0];
        sort_columns(&mut data, 2);
        assert_eq!(data, vec![2.0, 4.0, 2.0, 5.0, 3.0, 1.0]);
    }
}
