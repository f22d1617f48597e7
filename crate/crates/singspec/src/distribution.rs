//! Distributions of first order and the duality pairing.
//!
//! A [`DistributionW1`] represents `f = g' + h + sum_k c_k delta_{x_k}` with
//! piecewise-polynomial `g` and `h`. Its pairing with a continuous,
//! compactly supported test function is
//!
//! ```text
//! <f, psi> = -integral g psi' + integral h psi + sum_k c_k psi(x_k),
//! ```
//!
//! computed exactly on the refined common breakpoint grid. Periodic
//! distributions pair against compact test functions by unrolling the
//! period cell across the support.

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunction;
use crate::poly::Poly;

/// Continuous, compactly supported piecewise polynomial in `W^1_2`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    underlying: PiecewiseFunction,
}

impl TestFunction {
    pub fn new(underlying: PiecewiseFunction) -> Result<Self> {
        if underlying.period().is_some() {
            return Err(Error::Invalid("test functions must be aperiodic".into()));
        }
        if !underlying.has_zero_tails() {
            return Err(Error::Invalid("test functions must have compact support".into()));
        }
        let breaks = underlying.breakpoints();
        let mut scale = 1.0f64;
        for &b in breaks {
            scale = scale.max(underlying.evaluate(b).abs());
        }
        for &b in breaks {
            let right = underlying.evaluate(b);
            let left = underlying.left_limit(b);
            if (right - left).abs() > 1e-9 * (1.0 + scale) {
                return Err(Error::Invalid(format!(
                    "test function discontinuous at {b}: {left} vs {right}"
                )));
            }
        }
        Ok(TestFunction { underlying })
    }

    pub fn zero() -> Self {
        TestFunction {
            underlying: PiecewiseFunction::zero(),
        }
    }

    /// Piecewise-linear interpolant of `(breakpoints[i], values[i])`;
    /// the first and last value must vanish.
    pub fn from_samples(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.len() < 2 {
            return Err(Error::Invalid("need matching breakpoints and values".into()));
        }
        if values[0] != 0.0 || *values.last().unwrap() != 0.0 {
            return Err(Error::Invalid("test function must vanish at its support ends".into()));
        }
        let mut pieces = Vec::with_capacity(values.len() - 1);
        for i in 0..values.len() - 1 {
            let (x0, x1) = (breakpoints[i], breakpoints[i + 1]);
            let slope = (values[i + 1] - values[i]) / (x1 - x0);
            pieces.push(Poly::from_coeffs(vec![values[i] - slope * x0, slope]));
        }
        TestFunction::new(PiecewiseFunction::compact(breakpoints, pieces)?)
    }

    /// Hat of height one centered at `center` with the given half width.
    pub fn hat(center: f64, half_width: f64) -> Self {
        TestFunction::from_samples(
            vec![center - half_width, center, center + half_width],
            vec![0.0, 1.0, 0.0],
        )
        .expect("hat is a valid test function")
    }

    /// Trapezoid: zero outside `[l0, r0]`, one on `[l1, r1]`, linear ramps.
    pub fn plateau(l0: f64, l1: f64, r1: f64, r0: f64) -> Result<Self> {
        TestFunction::from_samples(vec![l0, l1, r1, r0], vec![0.0, 1.0, 1.0, 0.0])
    }

    pub fn underlying(&self) -> &PiecewiseFunction {
        &self.underlying
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.underlying.evaluate(t)
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.underlying.compact_support()
    }

    /// Squared Sobolev norm `integral |psi|^2 + |psi'|^2`.
    pub fn h1_norm_sq(&self) -> f64 {
        let Some((a, b)) = self.support() else { return 0.0 };
        let u = &self.underlying;
        let du = u.derivative();
        let sq = u.mul(u).expect("test function products stay in the cap");
        let dsq = du.mul(&du).expect("derivative products stay in the cap");
        sq.integral(a, b) + dsq.integral(a, b)
    }

    pub fn h1_norm(&self) -> f64 {
        self.h1_norm_sq().max(0.0).sqrt()
    }

    pub fn derivative(&self) -> PiecewiseFunction {
        self.underlying.derivative()
    }

    /// Pointwise linear combination `a*self + b*other`.
    pub fn combine(&self, a: f64, other: &TestFunction, b: f64) -> Result<TestFunction> {
        let u = self.underlying.scale(a).add(&other.underlying.scale(b))?;
        TestFunction::new(u)
    }
}

/// `f = g' + h + sum c_k delta_{x_k}`, optionally periodic as a whole.
#[derive(Debug, Clone)]
pub struct DistributionW1 {
    g: PiecewiseFunction,
    h: PiecewiseFunction,
    atoms: Vec<(f64, f64)>,
    period: Option<f64>,
}

impl DistributionW1 {
    pub fn new(
        g: PiecewiseFunction,
        h: PiecewiseFunction,
        mut atoms: Vec<(f64, f64)>,
        period: Option<f64>,
    ) -> Result<Self> {
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in atoms.windows(2) {
            if (w[1].0 - w[0].0).abs() <= 1e-12 * (1.0 + w[0].0.abs()) {
                return Err(Error::Invalid(format!("duplicate atom position {}", w[0].0)));
            }
        }
        match period {
            Some(t) => {
                if !(t > 0.0) {
                    return Err(Error::Invalid("period must be positive".into()));
                }
                for part in [&g, &h] {
                    if !part.is_identically_zero() {
                        match part.period() {
                            Some(tp) if (tp - t).abs() <= 1e-12 * (1.0 + t) => {}
                            _ => {
                                return Err(Error::Invalid(
                                    "periodic distribution needs periodic parts with the same period"
                                        .into(),
                                ))
                            }
                        }
                    }
                }
                if let (Some(first), Some(last)) = (atoms.first(), atoms.last()) {
                    if last.0 - first.0 >= t - 1e-12 * (1.0 + t) {
                        return Err(Error::Invalid(
                            "atoms of a periodic distribution must lie in one period cell".into(),
                        ));
                    }
                }
            }
            None => {
                if g.period().is_some() || h.period().is_some() {
                    return Err(Error::Invalid(
                        "aperiodic distribution cannot hold periodic parts".into(),
                    ));
                }
            }
        }
        Ok(DistributionW1 { g, h, atoms, period })
    }

    pub fn zero() -> Self {
        DistributionW1 {
            g: PiecewiseFunction::zero(),
            h: PiecewiseFunction::zero(),
            atoms: Vec::new(),
            period: None,
        }
    }

    pub fn delta(x: f64, weight: f64) -> Self {
        DistributionW1 {
            g: PiecewiseFunction::zero(),
            h: PiecewiseFunction::zero(),
            atoms: vec![(x, weight)],
            period: None,
        }
    }

    /// Periodic lattice of delta interactions with weight `alpha` and
    /// spacing `a`, one atom at the origin of each cell.
    pub fn delta_comb(alpha: f64, a: f64) -> Result<Self> {
        DistributionW1::new(
            PiecewiseFunction::zero(),
            PiecewiseFunction::zero(),
            vec![(0.0, alpha)],
            Some(a),
        )
    }

    pub fn from_g(g: PiecewiseFunction) -> Self {
        let period = g.period();
        DistributionW1 {
            g,
            h: PiecewiseFunction::zero(),
            atoms: Vec::new(),
            period,
        }
    }

    pub fn from_h(h: PiecewiseFunction) -> Self {
        let period = h.period();
        DistributionW1 {
            g: PiecewiseFunction::zero(),
            h,
            atoms: Vec::new(),
            period,
        }
    }

    /// `sigma' + tau` as a distribution (used for decomposition round trips).
    pub fn from_sigma_tau(sigma: PiecewiseFunction, tau: PiecewiseFunction) -> Self {
        let period = sigma.period().or(tau.period());
        DistributionW1 {
            g: sigma,
            h: tau,
            atoms: Vec::new(),
            period,
        }
    }

    pub fn g(&self) -> &PiecewiseFunction {
        &self.g
    }

    pub fn h(&self) -> &PiecewiseFunction {
        &self.h
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_identically_zero() && self.h.is_identically_zero() && self.atoms.is_empty()
    }

    /// Hull of the support for an aperiodic distribution; `None` when zero.
    /// Errors when `g` or `h` has a nonzero tail (the support is unbounded).
    pub fn support_hull(&self) -> Result<Option<(f64, f64)>> {
        if self.period.is_some() {
            return Err(Error::Invalid("periodic distributions have unbounded support".into()));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for part in [&self.g, &self.h] {
            if part.is_identically_zero() {
                continue;
            }
            if !part.has_zero_tails() {
                return Err(Error::Invalid(
                    "distribution parts with nonzero tails are not compactly supported".into(),
                ));
            }
            if let Some((a, b)) = part.compact_support() {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        for &(x, _) in &self.atoms {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if lo > hi {
            Ok(None)
        } else {
            Ok(Some((lo, hi)))
        }
    }

    /// Difference `self - other`; coincident atoms are merged.
    pub fn sub(&self, other: &DistributionW1) -> Result<DistributionW1> {
        let g = self.g.sub(&other.g)?;
        let h = self.h.sub(&other.h)?;
        let mut atoms = self.atoms.clone();
        for &(x, c) in &other.atoms {
            if let Some(slot) = atoms
                .iter_mut()
                .find(|(y, _)| (x - *y).abs() <= 1e-12 * (1.0 + x.abs()))
            {
                slot.1 -= c;
            } else {
                atoms.push((x, -c));
            }
        }
        atoms.retain(|&(_, c)| c != 0.0);
        let period = match (self.period, other.period) {
            (None, None) => None,
            (Some(a), Some(b)) if (a - b).abs() <= 1e-12 * (1.0 + a) => Some(a),
            _ => {
                return Err(Error::Invalid(
                    "can only subtract distributions with matching periodicity".into(),
                ))
            }
        };
        DistributionW1::new(g, h, atoms, period)
    }

    pub fn scale(&self, s: f64) -> DistributionW1 {
        DistributionW1 {
            g: self.g.scale(s),
            h: self.h.scale(s),
            atoms: self.atoms.iter().map(|&(x, c)| (x, s * c)).collect(),
            period: self.period,
        }
    }

    /// The unit-period rescaling `f_hat(t) = f(T t)`: maps a `T`-periodic
    /// distribution to a 1-periodic one (`g -> g(T.)/T`, `h -> h(T.)`,
    /// atoms `(x, c) -> (x/T, c/T)`).
    pub fn to_unit_period(&self) -> Result<DistributionW1> {
        let t = self
            .period
            .ok_or_else(|| Error::Invalid("to_unit_period needs a periodic distribution".into()))?;
        let g = self.g.scale_x(1.0 / t).scale(1.0 / t);
        let h = self.h.scale_x(1.0 / t);
        let atoms = self.atoms.iter().map(|&(x, c)| (x / t, c / t)).collect();
        DistributionW1::new(g, h, atoms, Some(1.0))
    }
}

/// Duality pairing `<f, psi>`, exact in the piecewise class.
pub fn pair(f: &DistributionW1, psi: &TestFunction) -> f64 {
    let Some((s0, s1)) = psi.support() else { return 0.0 };
    let (a, b) = (s0 - 0.5, s1 + 0.5);

    let mut acc = 0.0;
    if !f.g.is_identically_zero() {
        let g = f.g.materialize(a, b);
        let dpsi = psi.derivative();
        acc -= g.mul(&dpsi).expect("pairing product within cap").integral(a, b);
    }
    if !f.h.is_identically_zero() {
        let h = f.h.materialize(a, b);
        acc += h
            .mul(psi.underlying())
            .expect("pairing product within cap")
            .integral(a, b);
    }
    match f.period {
        None => {
            for &(x, c) in &f.atoms {
                if x >= s0 && x <= s1 {
                    acc += c * psi.evaluate(x);
                }
            }
        }
        Some(t) => {
            for &(x, c) in &f.atoms {
                let n_lo = ((s0 - x) / t).ceil() as i64;
                let n_hi = ((s1 - x) / t).floor() as i64;
                for n in n_lo..=n_hi {
                    acc += c * psi.evaluate(x + n as f64 * t);
                }
            }
        }
    }
    acc
}
