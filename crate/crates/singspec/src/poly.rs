//! Dense univariate polynomials with real coefficients.
//!
//! Coefficients are stored in ascending degree. The zero polynomial is the
//! empty coefficient vector. Products are capped at [`MAX_POLY_DEGREE`] so
//! that every product stays exactly representable; all other operations
//! (sums, derivatives, antiderivatives, linear substitution) are exact in
//! double precision up to rounding.

use crate::error::{Error, Result};

/// Maximum degree a product may reach.
pub const MAX_POLY_DEGREE: usize = 16;

/// Tolerance used for canonical-form and continuity checks.
pub const COEFF_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c0 + c1 t + c2 t^2 + ...`; trailing exact zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact product; errors once the degree cap is exceeded.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let deg = self.coeffs.len() + other.coeffs.len() - 2;
        if deg > MAX_POLY_DEGREE {
            return Err(Error::DegreeCapExceeded {
                degree: deg,
                cap: MAX_POLY_DEGREE,
            });
        }
        let mut out = vec![0.0; deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] = c / (i + 1) as f64;
        }
        Poly::from_coeffs(out)
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// Substitution `t -> a t + b`, i.e. returns `q` with `q(t) = p(a t + b)`.
    pub fn compose_linear(&self, a: f64, b: f64) -> Poly {
        let mut acc = Poly::zero();
        let lin = Poly::from_coeffs(vec![b, a]);
        for &c in self.coeffs.iter().rev() {
            // degree never grows past self's, so the cap cannot trigger
            acc = acc.mul(&lin).expect("linear substitution within cap");
            acc = acc.add(&Poly::constant(c));
        }
        acc
    }

    /// `p(t + c)`.
    pub fn shift(&self, c: f64) -> Poly {
        self.compose_linear(1.0, c)
    }

    /// All real roots in `[a, b]`, ascending, deduplicated.
    ///
    /// Roots are isolated recursively: the derivative's roots split `[a, b]`
    /// into monotone pieces, and a sign change on a piece is refined by
    /// bisection. Critical points where the value itself (nearly) vanishes
    /// are kept too, so touching roots are not lost.
    pub fn real_roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        let scale = self.max_abs_coeff().max(1.0);
        let p = self.trim_relative(1e-14 * scale);
        let mut roots = match p.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => {
                let r = -p.coeffs[0] / p.coeffs[1];
                if r >= a && r <= b {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            Some(_) => {
                let mut pts = vec![a];
                pts.extend(p.derivative().real_roots_in(a, b));
                pts.push(b);
                pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let mut out = Vec::new();
                let val_eps = 1e-12 * scale * (1.0 + a.abs().max(b.abs()));
                for w in pts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    if hi - lo <= 0.0 {
                        continue;
                    }
                    let (flo, fhi) = (p.eval(lo), p.eval(hi));
                    if flo.abs() <= val_eps {
                        out.push(lo);
                    }
                    if fhi.abs() <= val_eps {
                        out.push(hi);
                    }
                    if flo * fhi < 0.0 {
                        out.push(bisect_root(|t| p.eval(t), lo, hi));
                    }
                }
                out
            }
        };
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
        roots.dedup_by(|x, y| (*x - *y).abs() <= tol);
        roots
    }

    fn trim_relative(&self, eps: f64) -> Poly {
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|v| v.abs() <= eps) {
            c.pop();
        }
        Poly { coeffs: c }
    }
}

/// Bisection for a continuous function with a sign change on `[lo, hi]`.
pub fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    0.5 * (lo + hi)
}
