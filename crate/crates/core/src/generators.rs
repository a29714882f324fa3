//! Random instance families and the normal quantile used for `omega`.
//!
//! All generators draw from a ChaCha8 stream seeded with `seed`, so an
//! instance is a pure function of its parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Standard normal quantile `Phi^{-1}(p)`.
///
/// Acklam's rational approximation followed by one Halley step on
/// `Phi(x) = erfc(-x / sqrt 2) / 2`.
pub fn inv_norm_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("probability {p} outside (0, 1)")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] =
        [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };
    let e = 0.5 * erfc(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    Ok(x - u / (1.0 + x * u / 2.0))
}

fn omega_for(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 0.5)")));
    }
    inv_norm_cdf(1.0 - epsilon)
}

struct Draws {
    a: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

/// `a ~ U{ceil(0.9n)..floor(1.2n)}`, `c ~ U{5..20}`, `h ~ U{1..4}`,
/// `d = -c - h`, drawn index by index.
fn draw_costs(rng: &mut ChaCha8Rng, n: usize) -> Draws {
    let lo = (9 * n).div_ceil(10) as i64;
    let hi = (12 * n / 10) as i64;
    let mut out = Draws { a: Vec::with_capacity(n), c: Vec::with_capacity(n), d: Vec::with_capacity(n) };
    for _ in 0..n {
        let a = rng.gen_range(lo..=hi.max(lo));
        let c = rng.gen_range(5..=20i64);
        let h = rng.gen_range(1..=4i64);
        out.a.push(a as f64);
        out.c.push(c as f64);
        out.d.push(-(c + h) as f64);
    }
    out
}

pub fn gen_fixed_charge(n: usize, epsilon: f64, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let omega = omega_for(epsilon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Draws { a, c, d } = draw_costs(&mut rng, n);
    Ok(Instance { n, a, c, d, sigma0: 0.0, omega, cardinality: None, covariance: None })
}

/// Like [`gen_fixed_charge`], with the `c` draw discarded from the objective
/// and the cardinality row `sum x <= floor(kappa n)`.
pub fn gen_cardinality(n: usize, kappa: f64, epsilon: f64, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidArgument(format!("kappa {kappa} outside (0, 1]")));
    }
    let omega = omega_for(epsilon)?;
    let k = ((kappa * n as f64) + 1e-9).floor() as usize;
    if k == 0 {
        return Err(Error::InvalidArgument(format!("floor(kappa n) = 0 for kappa {kappa}, n {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Draws { a, d, .. } = draw_costs(&mut rng, n);
    Ok(Instance { n, a, c: vec![0.0; n], d, sigma0: 0.0, omega, cardinality: Some(k), covariance: None })
}

/// Cardinality instance plus the factor covariance `V = rho E F E'` with
/// `F = G G'`, `G ~ U[-1, 1]^{m x m}`, `m = n / 10`, and `E_ij ~ U[0, 0.1]`
/// with probability 0.2, zero otherwise.
pub fn gen_correlated(n: usize, kappa: f64, rho: f64, epsilon: f64, seed: u64) -> Result<Instance> {
    if n == 0 || !n.is_multiple_of(10) {
        return Err(Error::InvalidArgument(format!("n = {n} must be a positive multiple of 10")));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho {rho} must be positive")));
    }
    let mut inst = gen_cardinality(n, kappa, epsilon, seed)?;
    // separate stream so the diagonal part matches the cardinality family
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let m = n / 10;
    let g: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    let e: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let keep = rng.gen_bool(0.2);
                    let v = rng.gen_range(0.0..=0.1);
                    if keep {
                        v
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    // V = rho (E G)(E G)'
    let eg: Vec<Vec<f64>> =
        e.iter().map(|row| (0..m).map(|j| (0..m).map(|k| row[k] * g[k][j]).sum()).collect()).collect();
    let mut v = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let val = rho * eg[i].iter().zip(&eg[j]).map(|(p, q)| p * q).sum::<f64>();
            v[i][j] = val;
            v[j][i] = val;
        }
    }
    inst.covariance = Some(v);
    Ok(inst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    FixedCharge { epsilon: f64 },
    Cardinality { kappa: f64, epsilon: f64 },
    Correlated { kappa: f64, rho: f64, epsilon: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::FixedCharge { .. } => "fixed-charge",
            Family::Cardinality { .. } => "cardinality",
            Family::Correlated { .. } => "correlated",
        }
    }

    /// Family-specific parameter used in file names.
    pub fn param(&self) -> String {
        match *self {
            Family::FixedCharge { epsilon } => format!("{epsilon}"),
            Family::Cardinality { kappa, .. } => format!("{kappa}"),
            Family::Correlated { rho, .. } => format!("{rho}"),
        }
    }

    pub fn generate(&self, n: usize, seed: u64) -> Result<Instance> {
        match *self {
            Family::FixedCharge { epsilon } => gen_fixed_charge(n, epsilon, seed),
            Family::Cardinality { kappa, epsilon } => gen_cardinality(n, kappa, epsilon, seed),
            Family::Correlated { kappa, rho, epsilon } => gen_correlated(n, kappa, rho, epsilon, seed),
        }
    }

    /// `{family}_{n}_{param}_{seed}.json`
    pub fn file_name(&self, n: usize, seed: u64) -> String {
        format!("{}_{}_{}_{}.json", self.name(), n, self.param(), seed)
    }
}
