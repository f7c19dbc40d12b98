//! Seeded sampling helpers. All randomness in the crate flows through
//! [`rng`], so a seed fully determines every sampled point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::rational::{self, Rational};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational `k/den` with `lo <= k <= hi`.
pub fn rational_between(rng: &mut SeededRng, lo: i64, hi: i64, den: i64) -> Rational {
    rational::frac(rng.random_range(lo..=hi), den)
}

pub fn integer_between(rng: &mut SeededRng, lo: i64, hi: i64) -> i64 {
    rng.random_range(lo..=hi)
}

/// Point of `[-half_width, half_width]^n` on the grid with spacing `1/den`.
pub fn box_point(rng: &mut SeededRng, n: usize, half_width: i64, den: i64) -> Vec<Rational> {
    (0..n)
        .map(|_| rational_between(rng, -half_width * den, half_width * den, den))
        .collect()
}

/// Uniformly distributed direction on the unit sphere.
pub fn unit_vector(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    loop {
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = crate::linalg::norm(&z);
        if norm > 1e-12 {
            return z.into_iter().map(|v| v / norm).collect();
        }
    }
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Integer points of `[-radius, radius]^n`, at most `cap` of them.
///
/// Strictly positive points come first, ordered by coordinate sum and then
/// in descending lexicographic order; the remaining points follow in the
/// same order on `(|x|₁, x)`. When the full box is too large to enumerate,
/// only the positive part `[1, radius]^n` is used.
pub fn lattice_points(n: usize, radius: i64, cap: usize) -> Vec<Vec<i64>> {
    const LIMIT: usize = 1 << 20;
    if n == 0 || cap == 0 {
        return vec![];
    }
    let mut points = enumerate_box(n, -radius, radius, LIMIT)
        .or_else(|| enumerate_box(n, 1, radius, LIMIT))
        .unwrap_or_else(|| vec![vec![1; n]]);
    points.sort_by_key(|p| {
        let positive = p.iter().all(|&v| v > 0);
        let l1: i64 = p.iter().map(|v| v.abs()).sum();
        (!positive, l1, std::cmp::Reverse(p.clone()))
    });
    points.truncate(cap);
    points
}

fn enumerate_box(n: usize, lo: i64, hi: i64, limit: usize) -> Option<Vec<Vec<i64>>> {
    let side = usize::try_from(hi - lo + 1).ok()?;
    let total = side.checked_pow(u32::try_from(n).ok()?)?;
    if total > limit {
        return None;
    }
    let mut points = Vec::with_capacity(total);
    let mut current = vec![lo; n];
    'outer: loop {
        points.push(current.clone());
        for k in (0..n).rev() {
            if current[k] < hi {
                current[k] += 1;
                continue 'outer;
            }
            current[k] = lo;
        }
        return Some(points);
    }
}
