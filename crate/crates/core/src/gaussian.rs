//! Gaussian vectors: covariance determinants, Hadamard's inequality and
//! fractional Gaussian noise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Symmetric matrix with a strictly positive diagonal. Positive
/// semidefiniteness is checked by [`det_psd`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    n: usize,
    a: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-14;
/// Pivots below `PIVOT_FLOOR · max a_ii` count as zero.
pub const PIVOT_FLOOR: f64 = 1e-12;

impl CovMatrix {
    /// Row-major entries.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {n}×{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry {v}")));
        }
        let scale = entries.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            let d = entries[i * n + i];
            if d <= 0.0 {
                return Err(Error::InvalidMatrix(format!("a[{i}][{i}] = {d} is not > 0")));
            }
            for j in 0..i {
                if (entries[i * n + j] - entries[j * n + i]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, a: entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("matrix must be square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut a = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            a[i * n + i] = *v;
        }
        Self::new(n, a)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn diag(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.get(i, i))
    }

    pub fn diag_product(&self) -> f64 {
        self.diag().product()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Determinant {
    /// 0 when `singular`.
    pub det: f64,
    /// `-∞` when `singular`.
    pub log_det: f64,
    pub singular: bool,
    /// Number of pivots above the floor.
    pub rank: usize,
}

/// Determinant of a PSD matrix by Cholesky factorization with symmetric
/// diagonal pivoting.
///
/// Once the largest remaining pivot falls below `1e-12·max a_ii` the matrix
/// is reported singular with `det = 0`. A pivot below `-1e-12·max a_ii`, or
/// a residual block that cannot be PSD, is a [`Error::NotPsd`].
pub fn det_psd(m: &CovMatrix) -> Result<Determinant> {
    let n = m.n;
    let scale = m.diag().fold(0.0f64, f64::max);
    let floor = PIVOT_FLOOR * scale;
    let mut s = m.a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut log_det = 0.0;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, s[perm[i] * n + perm[i]]))
            .fold((k, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        if let Some(i) = (k..n).find(|&i| s[perm[i] * n + perm[i]] < -floor) {
            return Err(Error::NotPsd {
                pivot: s[perm[i] * n + perm[i]],
                step: k,
            });
        }
        if pivot <= floor {
            // residual block of a PSD matrix satisfies |s_ij| ≤ √(s_ii s_jj) ≤ floor
            let off_tol = PIVOT_FLOOR.sqrt() * scale;
            for i in k..n {
                for j in k..n {
                    if i != j && s[perm[i] * n + perm[j]].abs() > off_tol {
                        return Err(Error::NotPsd { pivot, step: k });
                    }
                }
            }
            return Ok(Determinant {
                det: 0.0,
                log_det: f64::NEG_INFINITY,
                singular: true,
                rank: k,
            });
        }
        perm.swap(k, p);
        let pk = perm[k];
        log_det += pivot.ln();
        // Schur complement update on the remaining rows
        for i in k + 1..n {
            let pi = perm[i];
            let lik = s[pi * n + pk] / pivot;
            if lik == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let pj = perm[j];
                s[pi * n + pj] -= lik * s[pk * n + pj];
            }
        }
    }
    Ok(Determinant {
        det: log_det.exp(),
        log_det,
        singular: false,
        rank: n,
    })
}

/// `n/2 (1 + log 2π) + ½ log det A`.
pub fn gaussian_entropy(m: &CovMatrix) -> Result<f64> {
    let d = det_psd(m)?;
    if d.singular {
        return Err(Error::SingularCovariance);
    }
    Ok(entropy_from_log_det(m.n, d.log_det))
}

fn entropy_from_log_det(n: usize, log_det: f64) -> f64 {
    0.5 * n as f64 * (1.0 + (2.0 * PI).ln()) + 0.5 * log_det
}

/// `∏ a_ii - det A`; nonnegative for PSD matrices.
pub fn hadamard_gap(m: &CovMatrix) -> Result<f64> {
    Ok(m.diag_product() - det_psd(m)?.det)
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HurstIndex(f64);

impl HurstIndex {
    pub fn new(h: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&h) {
            Ok(Self(h))
        } else {
            Err(Error::InvalidParameter {
                name: "hurst",
                value: h,
                requirement: "in [0, 1]",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Covariance of `lag` steps of unit-variance fGn.
fn fgn_autocov(lag: usize, h: f64) -> f64 {
    if lag == 0 {
        return 1.0;
    }
    let two_h = 2.0 * h;
    let k = lag as f64;
    // 0^{2H} is taken as its limit 0, including H = 0
    let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(two_h) };
    0.5 * (pow(k + 1.0) - 2.0 * pow(k) + pow(k - 1.0))
}

/// Toeplitz covariance of `n` successive fGn increments.
pub fn fgn_covariance(n: usize, hurst: HurstIndex) -> Result<CovMatrix> {
    let h = hurst.get();
    let acov: Vec<f64> = (0..n).map(|k| fgn_autocov(k, h)).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = acov[i.abs_diff(j)];
        }
    }
    CovMatrix::new(n, a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgnRow {
    pub hurst: f64,
    pub det: f64,
    pub log_det: f64,
    pub singular: bool,
    /// `None` when singular.
    pub entropy: Option<f64>,
}

pub fn fgn_det_sweep(n: usize, grid: &[f64], exec: Exec) -> Result<Vec<FgnRow>> {
    let hs = grid
        .iter()
        .map(|&h| HurstIndex::new(h))
        .collect::<Result<Vec<_>>>()?;
    exec.try_map(&hs, |&h| {
        let d = det_psd(&fgn_covariance(n, h)?)?;
        Ok(FgnRow {
            hurst: h.get(),
            det: d.det,
            log_det: d.log_det,
            singular: d.singular,
            entropy: (!d.singular).then(|| entropy_from_log_det(n, d.log_det)),
        })
    })
}

/// Covariance `{s_i s_j √(a_ii a_jj)}` of the vector
/// `(s_1 √a_11 ξ, ..., s_n √a_nn ξ)` with a single standard normal `ξ`.
pub fn rank1_extremal_vector(diag: &[f64], signs: &[i8]) -> Result<CovMatrix> {
    if diag.len() != signs.len() {
        return Err(Error::InvalidMatrix(format!(
            "{} diagonal entries but {} signs",
            diag.len(),
            signs.len()
        )));
    }
    if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
        return Err(Error::InvalidMatrix(format!("sign {s} is not ±1")));
    }
    let n = diag.len();
    let roots: Vec<f64> = diag.iter().map(|a| a.sqrt()).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = if i == j {
                diag[i]
            } else {
                f64::from(signs[i] * signs[j]) * roots[i] * roots[j]
            };
        }
    }
    CovMatrix::new(n, a)
}
