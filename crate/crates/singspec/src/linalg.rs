//! Symmetric tridiagonal matrices and the few dense-free solvers the
//! Galerkin module needs: Cholesky, LU with partial pivoting, inertia
//! counts for spectrum slicing, and a B-weighted power iteration.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn zeros(n: usize) -> Self {
        SymTridiag {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SymTridiag, s: f64) -> SymTridiag {
        assert_eq!(self.n(), other.n());
        SymTridiag {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a + s * b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    /// Cholesky factor of a positive definite matrix; `None` when a pivot
    /// is not positive.
    pub fn cholesky(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.n();
        let mut l_diag = vec![0.0; n];
        let mut l_off = vec![0.0; n.saturating_sub(1)];
        for i in 0..n {
            let mut v = self.diag[i];
            if i > 0 {
                v -= l_off[i - 1] * l_off[i - 1];
            }
            if v <= 0.0 {
                return None;
            }
            l_diag[i] = v.sqrt();
            if i + 1 < n {
                l_off[i] = self.off[i] / l_diag[i];
            }
        }
        Some((l_diag, l_off))
    }

    /// Solve `A x = b` for a positive definite matrix via Cholesky.
    pub fn solve_spd(&self, b: &[f64]) -> Result<Vec<f64>> {
        let (ld, lo) = self
            .cholesky()
            .ok_or_else(|| Error::Consistency("matrix is not positive definite".into()))?;
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = b[i];
            if i > 0 {
                v -= lo[i - 1] * y[i - 1];
            }
            y[i] = v / ld[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            if i + 1 < n {
                v -= lo[i] * x[i + 1];
            }
            x[i] = v / ld[i];
        }
        Ok(x)
    }
}

/// Number of eigenvalues of `A - mu B` below zero (Sturm count via the
/// LDL^T pivot recurrence). `B` must be such that `A - mu B` stays
/// symmetric tridiagonal.
pub fn negative_inertia(a: &SymTridiag, b: &SymTridiag, mu: f64) -> usize {
    let n = a.n();
    let mut count = 0;
    let mut d_prev = 0.0;
    let scale: f64 = a
        .diag
        .iter()
        .zip(&b.diag)
        .fold(1.0f64, |m, (x, y)| m.max((x - mu * y).abs()));
    let tiny = 1e-300_f64.max(1e-16 * scale);
    for i in 0..n {
        let mut d = a.diag[i] - mu * b.diag[i];
        if i > 0 {
            let e = a.off[i - 1] - mu * b.off[i - 1];
            d -= e * e / d_prev;
        }
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
        d_prev = d;
    }
    count
}

/// LU factorization with partial pivoting of a general tridiagonal matrix
/// (two superdiagonals of fill-in).
pub struct TridiagLu {
    n: usize,
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    pivot: Vec<bool>,
}

impl TridiagLu {
    /// Factor the tridiagonal matrix with subdiagonal `dl`, diagonal `d`,
    /// superdiagonal `du` (lengths n-1, n, n-1).
    pub fn factor(dl_in: &[f64], d_in: &[f64], du_in: &[f64]) -> Result<TridiagLu> {
        let n = d_in.len();
        let mut dl = dl_in.to_vec();
        let mut d = d_in.to_vec();
        let mut du = du_in.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut pivot = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return Err(Error::Consistency("singular tridiagonal matrix".into()));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
                if i + 2 < n {
                    du2[i] = 0.0;
                }
            } else {
                // swap rows i and i+1
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                pivot[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            return Err(Error::Consistency("singular tridiagonal matrix".into()));
        }
        Ok(TridiagLu {
            n,
            dl,
            d,
            du,
            du2,
            pivot,
        })
    }

    pub fn from_sym(m: &SymTridiag) -> Result<TridiagLu> {
        TridiagLu::factor(&m.off, &m.diag, &m.off)
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.pivot[i] {
                x.swap(i, i + 1);
            }
            let xi = x[i];
            x[i + 1] -= self.dl[i] * xi;
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= self.du2[i] * x[i + 2];
            }
            x[i] = v / self.d[i];
        }
        x
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// B-weighted operator norm of a B-self-adjoint operator given by `apply`,
/// by power iteration from a fixed deterministic start vector.
pub fn power_iteration_b_norm(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    b: &SymTridiag,
    start: Vec<f64>,
    max_iter: usize,
    rel_tol: f64,
) -> f64 {
    let mut v = start;
    let bnorm = |x: &[f64]| dot(x, &b.matvec(x)).max(0.0).sqrt();
    let nv = bnorm(&v);
    if nv == 0.0 {
        return 0.0;
    }
    for x in v.iter_mut() {
        *x /= nv;
    }
    let mut prev = 0.0;
    for _ in 0..max_iter {
        let w = apply(&v);
        let norm_w = bnorm(&w);
        if norm_w == 0.0 {
            return 0.0;
        }
        if (norm_w - prev).abs() <= rel_tol * norm_w.max(1e-300) {
            return norm_w;
        }
        prev = norm_w;
        v = w;
        for x in v.iter_mut() {
            *x /= norm_w;
        }
    }
    prev
}
