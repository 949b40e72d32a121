//! Symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues are located by bisection on Sturm counts, one index at a time,
//! so any subset of the spectrum can be computed independently of the rest.
//! Eigenvectors come from inverse iteration on a pivoted LU factorisation of
//! the shifted matrix.
//!
//! The counting step is abstracted behind [`SturmCount`] so that operators with
//! a known structure (the Dirichlet Laplacian plus a potential, see
//! [`crate::confined`]) can supply a cancellation-free pivot recurrence while
//! sharing the bisection driver.

use crate::error::{Error, Result};
use rayon::prelude::*;

const MAX_BISECTION_STEPS: usize = 4096;
const MAX_INVERSE_ITERATIONS: usize = 12;
const RESIDUAL_TOL: f64 = 1e-10;

pub trait SturmCount {
    fn dim(&self) -> usize;

    /// Number of eigenvalues strictly below `shift`.
    fn count_below(&self, shift: f64) -> usize;

    /// An interval `(lo, hi)` containing the whole spectrum.
    fn spectral_bounds(&self) -> (f64, f64);
}

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Precondition("tridiagonal matrix must be non-empty".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::Precondition(format!(
                "off-diagonal length {} does not match dimension {}",
                off.len(),
                diag.len()
            )));
        }
        crate::error::ensure_finite(diag.iter().copied(), "diag")?;
        crate::error::ensure_finite(off.iter().copied(), "off")?;
        Ok(Self { diag, off })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                left + self.diag[i].abs() + right
            })
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    fn pivot_floor(&self) -> f64 {
        f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.norm_inf().max(1.0))
    }
}

impl SturmCount for SymTridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn count_below(&self, shift: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut pivot = self.diag[0] - shift;
        for i in 0.. {
            if pivot.abs() < floor {
                pivot = -floor;
            }
            if pivot < 0.0 {
                count += 1;
            }
            if i + 1 == self.diag.len() {
                break;
            }
            let b = self.off[i];
            pivot = self.diag[i + 1] - shift - b * b / pivot;
        }
        count
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        gershgorin(&self.diag, &self.off)
    }
}

pub(crate) fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = f64::EPSILON * 4.0 * lo.abs().max(hi.abs()).max(1.0);
    (lo - pad, hi + pad)
}

/// The `k`-th smallest eigenvalue (0-based) located by Sturm bisection to
/// (nearly) adjacent floating-point numbers.
pub fn kth_eigenvalue<S: SturmCount + ?Sized>(op: &S, k: usize) -> Result<f64> {
    let n = op.dim();
    if k >= n {
        return Err(Error::Capacity {
            what: "eigenvalue index",
            value: k,
            limit: n.saturating_sub(1),
        });
    }
    let (mut lo, mut hi) = op.spectral_bounds();
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let abs_floor = f64::EPSILON * 1e-4 * scale;
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let width = hi - lo;
        if width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || width <= abs_floor {
            return Ok(mid);
        }
        if op.count_below(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Numeric(format!(
        "bisection for eigenvalue {k} did not converge in {MAX_BISECTION_STEPS} steps \
         (bracket [{lo:e}, {hi:e}])"
    )))
}

/// The `count` smallest eigenvalues in ascending order. Indices are bisected
/// independently (and in parallel); each value depends only on its index.
pub fn smallest_eigenvalues<S: SturmCount + Sync + ?Sized>(op: &S, count: usize) -> Result<Vec<f64>> {
    if count > op.dim() {
        return Err(Error::Capacity {
            what: "eigenvalue count",
            value: count,
            limit: op.dim(),
        });
    }
    (0..count).into_par_iter().map(|k| kth_eigenvalue(op, k)).collect()
}

/// Pivoted LU of a shifted tridiagonal matrix, laid out as in LAPACK `gttrf`.
struct ShiftedLu {
    l: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.diag.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du = t.off.clone();
        let dl = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut l = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                l[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                l[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // Exact singularity is the expected case at a converged shift.
        let floor = f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
        for v in d.iter_mut() {
            if v.abs() < floor {
                *v = if *v < 0.0 { -floor } else { floor };
            }
        }
        Self {
            l,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                acc -= self.du2[i] * b[i + 2];
            }
            b[i] = acc / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Unit eigenvector for the (already accurate) eigenvalue `lambda`, kept
/// orthogonal to `previous`. Sign is fixed so that the first entry that is
/// not negligible is positive.
pub fn eigenvector(t: &SymTridiagonal, lambda: f64, previous: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = t.diag.len();
    let lu = ShiftedLu::factor(t, lambda);
    let norm_t = t.norm_inf().max(f64::MIN_POSITIVE);
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * (((i * 7919 + 13) % 101) as f64 / 101.0))
        .collect();
    normalize(&mut x);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        lu.solve(&mut x);
        for p in previous {
            let dot: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= dot * pi);
        }
        if normalize(&mut x) == 0.0 || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "inverse iteration collapsed for eigenvalue {lambda:e}"
            )));
        }
        let tx = t.mul_vec(&x);
        residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= RESIDUAL_TOL * norm_t {
            fix_sign(&mut x);
            return Ok(x);
        }
    }
    Err(Error::Numeric(format!(
        "inverse iteration for eigenvalue {lambda:e} stalled after {MAX_INVERSE_ITERATIONS} \
         iterations: residual {residual:e}, matrix norm {norm_t:e}"
    )))
}

fn fix_sign(x: &mut [f64]) {
    let tiny = 1e-12 * x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > tiny) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// The `count` smallest eigenpairs. Eigenvalues are bisected with `counter`
/// (which must describe the same matrix as `t`); eigenvectors are computed
/// from `t`.
pub fn smallest_eigenpairs<S: SturmCount + Sync + ?Sized>(
    t: &SymTridiagonal,
    counter: &S,
    count: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let values = smallest_eigenvalues(counter, count)?;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    for &lambda in &values {
        let v = eigenvector(t, lambda, &vectors)?;
        vectors.push(v);
    }
    Ok((values, vectors))
}
