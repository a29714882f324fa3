//! Problem instances and relaxation points.
//!
//! An [`Instance`] describes
//!
//! ```text
//! min  c'x + d'y + omega * z
//! s.t. sigma0 + sum_i a_i y_i^2 (+ s^2) <= z^2
//!      y' V y <= s^2                      (only when `covariance` is present)
//!      sum_i x_i <= cardinality           (only when `cardinality` is present)
//!      0 <= y <= x,  x binary
//! ```
//!
//! with all upper bounds on `y` normalized to one.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const PSD_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n: usize,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub sigma0: f64,
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<Vec<Vec<f64>>>,
}

/// On-disk document. Identical to [`Instance`] plus the optional `bounds`
/// column that is folded away on read.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    a: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
    sigma0: f64,
    omega: f64,
    #[serde(default)]
    cardinality: Option<usize>,
    #[serde(default)]
    covariance: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    bounds: Option<Vec<f64>>,
}

/// A (possibly fractional, possibly infeasible) point `(x, y, z[, s])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: f64,
    pub s: Option<f64>,
}

impl Point {
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: f64) -> Self {
        Point { x, y, z, s: None }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Checks `0 <= y <= x <= 1` and integrality of `x` within `tol`.
    pub fn is_integral_feasible(&self, tol: f64) -> bool {
        self.x.len() == self.y.len()
            && self.x.iter().zip(&self.y).all(|(&x, &y)| {
                (x.abs() <= tol || (x - 1.0).abs() <= tol) && y >= -tol && y <= x + tol
            })
    }
}

impl Instance {
    /// Diagonal instance with no cardinality row and `sigma0 = 0`, `omega = 1`.
    pub fn diagonal(a: Vec<f64>, c: Vec<f64>, d: Vec<f64>) -> Self {
        Instance {
            n: a.len(),
            a,
            c,
            d,
            sigma0: 0.0,
            omega: 1.0,
            cardinality: None,
            covariance: None,
        }
    }

    pub fn is_correlated(&self) -> bool {
        self.covariance.is_some()
    }

    /// Objective value `c'x + d'y + omega z`.
    pub fn objective(&self, x: &[f64], y: &[f64], z: f64) -> f64 {
        dot(&self.c, x) + dot(&self.d, y) + self.omega * z
    }

    /// `sqrt(y'Vy)`, or zero when the instance is diagonal.
    pub fn factor_norm(&self, y: &[f64]) -> f64 {
        match &self.covariance {
            Some(v) => quad_form(v, y).max(0.0).sqrt(),
            None => 0.0,
        }
    }

    /// Smallest feasible `z` for a given `y`.
    pub fn cone_value(&self, y: &[f64]) -> f64 {
        let s = self.factor_norm(y);
        let diag: f64 = self.a.iter().zip(y).map(|(a, y)| a * y * y).sum();
        (self.sigma0 + s * s + diag).sqrt()
    }

    /// Returns one diagnostic per violated standing assumption.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push("n must be positive".to_string());
        }
        for (name, len) in [("a", self.a.len()), ("c", self.c.len()), ("d", self.d.len())] {
            if len != n {
                out.push(format!("{name} has length {len}, expected {n}"));
            }
        }
        for (k, &ak) in self.a.iter().enumerate() {
            if !(ak > 0.0) || !ak.is_finite() {
                out.push(format!("a[{k}] must be positive"));
            }
        }
        for (name, v) in [("c", &self.c), ("d", &self.d)] {
            if let Some(k) = v.iter().position(|x| !x.is_finite()) {
                out.push(format!("{name}[{k}] must be finite"));
            }
        }
        if !(self.sigma0 >= 0.0) || !self.sigma0.is_finite() {
            out.push("sigma0 must be nonnegative".to_string());
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            out.push("omega must be positive".to_string());
        }
        if let Some(k) = self.cardinality {
            if k < 1 || k > n {
                out.push("cardinality out of range".to_string());
            }
        }
        if let Some(v) = &self.covariance {
            out.extend(check_covariance(v, n));
        }
        out
    }

    /// Scales `y_i` by `1/u_i` so that all upper bounds become one.
    pub fn normalize_bounds(&mut self, bounds: &[f64]) -> Result<()> {
        if bounds.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: bounds.len() });
        }
        if let Some(k) = bounds.iter().position(|&u| !(u > 0.0) || !u.is_finite()) {
            return Err(Error::InvalidInstance(vec![format!("bounds[{k}] must be positive")]));
        }
        for (i, &u) in bounds.iter().enumerate() {
            self.a[i] *= u * u;
            self.d[i] *= u;
        }
        if let Some(v) = &mut self.covariance {
            for (i, row) in v.iter_mut().enumerate() {
                for (j, vij) in row.iter_mut().enumerate() {
                    *vij *= bounds[i] * bounds[j];
                }
            }
        }
        Ok(())
    }

    pub fn read(bytes: &[u8]) -> Result<Instance> {
        let doc: InstanceDoc = serde_json::from_slice(bytes).map_err(|e| {
            Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        let mut inst = Instance {
            n: doc.n,
            a: doc.a,
            c: doc.c,
            d: doc.d,
            sigma0: doc.sigma0,
            omega: doc.omega,
            cardinality: doc.cardinality,
            covariance: doc.covariance,
        };
        if let Some(bounds) = doc.bounds {
            let shape = inst.validate();
            if !shape.is_empty() {
                return Err(Error::InvalidInstance(shape));
            }
            inst.normalize_bounds(&bounds)?;
        }
        let problems = inst.validate();
        if !problems.is_empty() {
            return Err(Error::InvalidInstance(problems));
        }
        Ok(inst)
    }

    /// Serializes to the JSON document format. Floats use the shortest
    /// representation that parses back to the identical `f64`.
    pub fn write(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("instance serializes");
        out.push(b'\n');
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
        let path = path.as_ref();
        let bytes = std::fs::read(path)?;
        Instance::read(&bytes).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.write())?;
        Ok(())
    }
}

/// Free-function alias of [`Instance::validate`].
pub fn validate(inst: &Instance) -> Vec<String> {
    inst.validate()
}

pub fn read_instance(bytes: &[u8]) -> Result<Instance> {
    Instance::read(bytes)
}

pub fn write_instance(inst: &Instance) -> Vec<u8> {
    inst.write()
}

fn check_covariance(v: &[Vec<f64>], n: usize) -> Vec<String> {
    let mut out = Vec::new();
    if v.len() != n || v.iter().any(|row| row.len() != n) {
        out.push(format!("covariance must be {n}x{n}"));
        return out;
    }
    if v.iter().flatten().any(|x| !x.is_finite()) {
        out.push("covariance entries must be finite".to_string());
        return out;
    }
    let mut symmetric = true;
    for i in 0..n {
        for j in (i + 1)..n {
            if (v[i][j] - v[j][i]).abs() > SYMMETRY_TOL {
                symmetric = false;
            }
        }
    }
    if !symmetric {
        out.push("covariance must be symmetric".to_string());
        return out;
    }
    let max_diag = (0..n).map(|i| v[i][i]).fold(0.0_f64, f64::max);
    let jitter = PSD_REL_TOL * max_diag.max(f64::MIN_POSITIVE);
    let m = DMatrix::from_fn(n, n, |i, j| v[i][j] + if i == j { jitter } else { 0.0 });
    if m.cholesky().is_none() {
        out.push("covariance must be positive semidefinite".to_string());
    }
    out
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn quad_form(v: &[Vec<f64>], y: &[f64]) -> f64 {
    v.iter().zip(y).map(|(row, yi)| yi * dot(row, y)).sum()
}
