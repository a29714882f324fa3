#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer weights from `[ceil(0.9n), floor(1.2n)]`, widened to at least two
/// values for tiny `n`.
pub fn scaled_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let lo = (9 * n).div_ceil(10).max(1);
    let hi = (12 * n / 10).max(lo + 1);
    (0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect()
}

pub fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, v: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(v.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, v, out);
            if k.is_multiple_of(2) {
                v.swap(i, k - 1);
            } else {
                v.swap(0, k - 1);
            }
        }
        heap(k - 1, v, out);
    }
    let mut v: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut v, &mut out);
    out
}

/// `c'y + sqrt(offset + sum a_i y_i^2)`.
pub fn relaxation_objective(c: &[f64], a: &[f64], offset: f64, y: &[f64]) -> f64 {
    let q: f64 = offset + a.iter().zip(y).map(|(a, y)| a * y * y).sum::<f64>();
    c.iter().zip(y).map(|(c, y)| c * y).sum::<f64>() + q.max(0.0).sqrt()
}

/// Accelerated projected gradient on the unit box with backtracking. The
/// objective is smoothed as `sqrt(q + eps^2)` near the origin and the result
/// evaluated unsmoothed.
pub fn projected_gradient(c: &[f64], a: &[f64], offset: f64, iters: usize) -> f64 {
    let n = a.len();
    let eps2 = 1e-24;
    let f = |y: &[f64]| {
        let q: f64 = offset + a.iter().zip(y).map(|(a, y)| a * y * y).sum::<f64>();
        c.iter().zip(y).map(|(c, y)| c * y).sum::<f64>() + (q + eps2).sqrt()
    };
    let grad = |y: &[f64]| {
        let q: f64 = offset + a.iter().zip(y).map(|(a, y)| a * y * y).sum::<f64>();
        let r = (q + eps2).sqrt();
        (0..n).map(|i| c[i] + a[i] * y[i] / r).collect::<Vec<f64>>()
    };
    let project = |v: Vec<f64>| v.into_iter().map(|t| t.clamp(0.0, 1.0)).collect::<Vec<f64>>();
    let mut best_val = f(&vec![1.0; n]);
    for start in [vec![1.0; n], vec![0.5; n], vec![0.0; n]] {
        let mut x = start.clone();
        let mut yk = start;
        let mut t = 1.0_f64;
        let mut step = 1.0;
        for _ in 0..iters {
            let g = grad(&yk);
            let fy = f(&yk);
            let mut next;
            loop {
                next = project(yk.iter().zip(&g).map(|(y, g)| y - step * g).collect());
                let diff: Vec<f64> = next.iter().zip(&yk).map(|(a, b)| a - b).collect();
                let model = fy
                    + g.iter().zip(&diff).map(|(g, d)| g * d).sum::<f64>()
                    + diff.iter().map(|d| d * d).sum::<f64>() / (2.0 * step);
                if f(&next) <= model + 1e-15 || step < 1e-14 {
                    break;
                }
                step *= 0.5;
            }
            let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
            let mom = (t - 1.0) / t_next;
            yk = next.iter().zip(&x).map(|(n, o)| n + mom * (n - o)).collect();
            yk = project(yk);
            x = next;
            t = t_next;
            if f(&x) > f(&yk) + 1.0 {
                t = 1.0;
            }
        }
        let v = relaxation_objective(c, a, offset, &x);
        best_val = best_val.min(v);
    }
    best_val
}

/// Rough relative comparison.
pub fn rel_close(u: f64, v: f64, tol: f64) -> bool {
    (u - v).abs() <= tol * u.abs().max(v.abs()).max(1.0)
}
