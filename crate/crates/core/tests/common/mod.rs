#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplexwise::geometry::apply_isometry;
use simplexwise::{Cloud, Isometry};

pub fn cloud(points: &[&[f64]]) -> Cloud {
    Cloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}

pub fn t() -> Cloud {
    cloud(&[&[1.0, 1.0], &[-1.0, 1.0], &[-2.0, 0.0], &[2.0, 0.0]])
}

pub fn k() -> Cloud {
    cloud(&[&[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0], &[3.0, 0.0]])
}

/// Clouds of `m` points in `R^n` with coordinates in `[-3, 3]`.
pub fn clouds(m: std::ops::RangeInclusive<usize>, n: usize) -> impl Strategy<Value = Cloud> {
    m.prop_flat_map(move |m| prop::collection::vec(-3.0..3.0f64, m * n))
        .prop_map(move |coords| Cloud::from_flat(n, coords).unwrap())
}

pub fn moved(c: &Cloud, proper: bool, seed: u64) -> Cloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Isometry::random(c.dim(), proper, 5.0, &mut rng);
    let shuffled: Vec<usize> = (0..c.len()).rev().collect();
    apply_isometry(&c.permuted(&shuffled).unwrap(), &g).unwrap()
}

pub fn random_cloud(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Cloud {
    use rand::Rng;
    Cloud::from_flat(n, (0..m * n).map(|_| rng.random_range(-3.0..3.0)).collect()).unwrap()
}
