//! Piecewise-polynomial functions on the line.
//!
//! A [`PiecewiseFunction`] is a list of strictly increasing breakpoints with
//! one polynomial per interval, plus polynomial tails on the two unbounded
//! ends, or — when a period is present — a single period cell that extends
//! periodically. Values at breakpoints follow the right-limit convention.
//!
//! Everything here is exact in the piecewise class: products refine the
//! common breakpoint grid, antiderivatives are computed piece by piece, and
//! the uniform window norms maximise the window integral by isolating the
//! roots of its derivative instead of sampling.

use crate::error::{Error, Result};
use crate::poly::{Poly, COEFF_EPS};

/// A segment `[lo, hi)` on which the function equals `poly` (in global
/// coordinates).
#[derive(Debug, Clone)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunction {
    breakpoints: Vec<f64>,
    pieces: Vec<Poly>,
    left_tail: Poly,
    right_tail: Poly,
    period: Option<f64>,
}

fn check_increasing(breakpoints: &[f64]) -> Result<()> {
    for w in breakpoints.windows(2) {
        if w[1] - w[0] <= 1e-12 * (1.0 + w[0].abs().max(w[1].abs())) {
            return Err(Error::Invalid(format!(
                "breakpoints not increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

impl PiecewiseFunction {
    pub fn zero() -> Self {
        PiecewiseFunction {
            breakpoints: Vec::new(),
            pieces: Vec::new(),
            left_tail: Poly::zero(),
            right_tail: Poly::zero(),
            period: None,
        }
    }

    /// A single polynomial on the whole line.
    pub fn global(poly: Poly) -> Self {
        PiecewiseFunction {
            breakpoints: Vec::new(),
            pieces: Vec::new(),
            left_tail: poly.clone(),
            right_tail: poly,
            period: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::global(Poly::constant(c))
    }

    /// General aperiodic function with explicit tails.
    pub fn aperiodic(
        breakpoints: Vec<f64>,
        pieces: Vec<Poly>,
        left_tail: Poly,
        right_tail: Poly,
    ) -> Result<Self> {
        check_increasing(&breakpoints)?;
        let expected = breakpoints.len().saturating_sub(1);
        if pieces.len() != expected {
            return Err(Error::Invalid(format!(
                "expected {} pieces for {} breakpoints, got {}",
                expected,
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.is_empty() {
            let diff = left_tail.sub(&right_tail);
            if diff.max_abs_coeff() > COEFF_EPS {
                return Err(Error::Invalid(
                    "a function with no breakpoints must have equal tails".into(),
                ));
            }
        }
        Ok(PiecewiseFunction {
            breakpoints,
            pieces,
            left_tail,
            right_tail,
            period: None,
        })
    }

    /// Compactly supported: zero tails.
    pub fn compact(breakpoints: Vec<f64>, pieces: Vec<Poly>) -> Result<Self> {
        Self::aperiodic(breakpoints, pieces, Poly::zero(), Poly::zero())
    }

    /// Periodic extension of one cell `[b_0, b_0 + period)`. There is one
    /// piece per breakpoint; the last piece runs to the end of the cell.
    pub fn periodic(breakpoints: Vec<f64>, pieces: Vec<Poly>, period: f64) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::Invalid(format!("period must be positive, got {period}")));
        }
        if breakpoints.is_empty() || pieces.len() != breakpoints.len() {
            return Err(Error::Invalid(format!(
                "periodic cell needs one piece per breakpoint ({} breakpoints, {} pieces)",
                breakpoints.len(),
                pieces.len()
            )));
        }
        check_increasing(&breakpoints)?;
        let b0 = breakpoints[0];
        let blast = *breakpoints.last().unwrap();
        if blast >= b0 + period - 1e-12 * (1.0 + period) {
            return Err(Error::Invalid(
                "cell breakpoints must lie strictly inside one period".into(),
            ));
        }
        Ok(PiecewiseFunction {
            breakpoints,
            pieces,
            left_tail: Poly::zero(),
            right_tail: Poly::zero(),
            period: Some(period),
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn left_tail(&self) -> &Poly {
        &self.left_tail
    }

    pub fn right_tail(&self) -> &Poly {
        &self.right_tail
    }

    pub fn is_identically_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
            && self.left_tail.is_zero()
            && self.right_tail.is_zero()
    }

    pub fn has_zero_tails(&self) -> bool {
        self.left_tail.is_zero() && self.right_tail.is_zero()
    }

    /// Support hull `[first, last]` for a compactly supported function.
    pub fn compact_support(&self) -> Option<(f64, f64)> {
        if self.period.is_some() || !self.has_zero_tails() || self.breakpoints.is_empty() {
            return None;
        }
        Some((self.breakpoints[0], *self.breakpoints.last().unwrap()))
    }

    /// Right-limit value at `t`; periodic functions reduce `t` into the cell.
    pub fn evaluate(&self, t: f64) -> f64 {
        match self.period {
            Some(period) => {
                let b0 = self.breakpoints[0];
                let s = b0 + (t - b0).rem_euclid(period);
                let idx = self.cell_index(s);
                self.pieces[idx].eval(s)
            }
            None => self.local_poly(t).eval(t),
        }
    }

    /// Left-limit value at `t`.
    pub fn left_limit(&self, t: f64) -> f64 {
        // shift by a relative epsilon into the previous piece, then evaluate
        // that piece's polynomial exactly at t
        match self.period {
            Some(period) => {
                let b0 = self.breakpoints[0];
                let mut s = b0 + (t - b0).rem_euclid(period);
                if (s - b0).abs() <= 1e-12 * (1.0 + b0.abs()) {
                    s = b0 + period;
                }
                let idx = self
                    .breakpoints
                    .iter()
                    .rposition(|&b| b < s - 1e-12 * (1.0 + s.abs()))
                    .unwrap_or(self.breakpoints.len() - 1);
                self.pieces[idx].eval(s)
            }
            None => {
                let idx = self
                    .breakpoints
                    .iter()
                    .rposition(|&b| b < t - 1e-12 * (1.0 + t.abs()));
                match idx {
                    None => self.left_tail.eval(t),
                    Some(i) if i + 1 < self.breakpoints.len() => self.pieces[i].eval(t),
                    Some(_) => self.right_tail.eval(t),
                }
            }
        }
    }

    fn cell_index(&self, s: f64) -> usize {
        debug_assert!(self.period.is_some());
        match self.breakpoints.iter().rposition(|&b| b <= s) {
            Some(i) => i,
            None => 0,
        }
    }

    /// Polynomial of the aperiodic piece containing `t` (right-continuous).
    fn local_poly(&self, t: f64) -> &Poly {
        debug_assert!(self.period.is_none());
        match self.breakpoints.iter().rposition(|&b| b <= t) {
            None => &self.left_tail,
            Some(i) if i + 1 < self.breakpoints.len() => &self.pieces[i],
            Some(_) => &self.right_tail,
        }
    }

    /// Decompose `[a, b)` into segments with global-coordinate polynomials.
    pub fn segments_on(&self, a: f64, b: f64) -> Vec<Segment> {
        assert!(b > a, "segments_on needs a nonempty interval");
        let mut cuts: Vec<f64> = vec![a, b];
        match self.period {
            None => {
                cuts.extend(self.breakpoints.iter().copied().filter(|&x| x > a && x < b));
            }
            Some(period) => {
                let b0 = self.breakpoints[0];
                let k_lo = ((a - b0) / period).floor() as i64 - 1;
                let k_hi = ((b - b0) / period).ceil() as i64 + 1;
                for k in k_lo..=k_hi {
                    let off = k as f64 * period;
                    for &x in &self.breakpoints {
                        let y = x + off;
                        if y > a && y < b {
                            cuts.push(y);
                        }
                    }
                }
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
        let mut out = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo <= 0.0 {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let poly = match self.period {
                None => self.local_poly(mid).clone(),
                Some(period) => {
                    let b0 = self.breakpoints[0];
                    let k = ((mid - b0) / period).floor();
                    let s = mid - k * period;
                    let idx = self.cell_index(s);
                    // express the cell polynomial in global coordinates
                    self.pieces[idx].shift(-k * period)
                }
            };
            out.push(Segment { lo, hi, poly });
        }
        out
    }

    /// Aperiodic, compactly supported copy equal to `self` on `[a, b)` and
    /// zero outside.
    pub fn materialize(&self, a: f64, b: f64) -> PiecewiseFunction {
        let segs = self.segments_on(a, b);
        let mut breakpoints = Vec::with_capacity(segs.len() + 1);
        let mut pieces = Vec::with_capacity(segs.len());
        for s in &segs {
            breakpoints.push(s.lo);
            pieces.push(s.poly.clone());
        }
        breakpoints.push(b);
        PiecewiseFunction::compact(breakpoints, pieces)
            .expect("materialized segments are increasing")
    }

    /// `f(t - c)`.
    pub fn translate(&self, c: f64) -> PiecewiseFunction {
        PiecewiseFunction {
            breakpoints: self.breakpoints.iter().map(|b| b + c).collect(),
            pieces: self.pieces.iter().map(|p| p.shift(-c)).collect(),
            left_tail: self.left_tail.shift(-c),
            right_tail: self.right_tail.shift(-c),
            period: self.period,
        }
    }

    /// `f(t / s)` for `s > 0` (stretches the axis by `s`).
    pub fn scale_x(&self, s: f64) -> PiecewiseFunction {
        assert!(s > 0.0);
        PiecewiseFunction {
            breakpoints: self.breakpoints.iter().map(|b| b * s).collect(),
            pieces: self.pieces.iter().map(|p| p.compose_linear(1.0 / s, 0.0)).collect(),
            left_tail: self.left_tail.compose_linear(1.0 / s, 0.0),
            right_tail: self.right_tail.compose_linear(1.0 / s, 0.0),
            period: self.period.map(|t| t * s),
        }
    }

    pub fn scale(&self, s: f64) -> PiecewiseFunction {
        PiecewiseFunction {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
            left_tail: self.left_tail.scale(s),
            right_tail: self.right_tail.scale(s),
            period: self.period,
        }
    }

    /// Classical piecewise derivative (jump discontinuities are dropped; the
    /// distributional part of a derivative lives in `DistributionW1`).
    pub fn derivative(&self) -> PiecewiseFunction {
        PiecewiseFunction {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Poly::derivative).collect(),
            left_tail: self.left_tail.derivative(),
            right_tail: self.right_tail.derivative(),
            period: self.period,
        }
    }

    /// Rebase a periodic function onto the cell starting at `c0`.
    pub fn rebase_cell(&self, c0: f64) -> Result<PiecewiseFunction> {
        let period = self
            .period
            .ok_or_else(|| Error::Invalid("rebase_cell needs a periodic function".into()))?;
        let segs = self.segments_on(c0, c0 + period);
        let mut breakpoints = Vec::with_capacity(segs.len());
        let mut pieces = Vec::with_capacity(segs.len());
        for s in &segs {
            breakpoints.push(s.lo);
            pieces.push(s.poly.clone());
        }
        PiecewiseFunction::periodic(breakpoints, pieces, period)
    }

    fn binary_op(&self, other: &PiecewiseFunction, sub: bool) -> Result<PiecewiseFunction> {
        let rhs = if sub { other.scale(-1.0) } else { other.clone() };
        match (self.period, rhs.period) {
            (None, None) => {
                let mut cuts: Vec<f64> = self
                    .breakpoints
                    .iter()
                    .chain(rhs.breakpoints.iter())
                    .copied()
                    .collect();
                cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
                let mut pieces = Vec::new();
                for w in cuts.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    pieces.push(self.local_poly(mid).add(rhs.local_poly(mid)));
                }
                PiecewiseFunction::aperiodic(
                    cuts,
                    pieces,
                    self.left_tail.add(&rhs.left_tail),
                    self.right_tail.add(&rhs.right_tail),
                )
            }
            (Some(t1), Some(t2)) => {
                if (t1 - t2).abs() > 1e-12 * (1.0 + t1) {
                    return Err(Error::Invalid(format!(
                        "cannot combine periods {t1} and {t2}"
                    )));
                }
                let b0 = self.breakpoints[0];
                let a = self.rebase_cell(b0)?;
                let b = rhs.rebase_cell(b0)?;
                let mut cuts: Vec<f64> = a
                    .breakpoints
                    .iter()
                    .chain(b.breakpoints.iter())
                    .copied()
                    .collect();
                cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
                let mut pieces = Vec::new();
                for (i, &lo) in cuts.iter().enumerate() {
                    let hi = if i + 1 < cuts.len() { cuts[i + 1] } else { b0 + t1 };
                    let mid = 0.5 * (lo + hi);
                    let pa = &a.pieces[a.cell_index(mid)];
                    let pb = &b.pieces[b.cell_index(mid)];
                    pieces.push(pa.add(pb));
                }
                PiecewiseFunction::periodic(cuts, pieces, t1)
            }
            (Some(period), None) | (None, Some(period)) => {
                let (per, ap) = if self.period.is_some() {
                    (self, &rhs)
                } else {
                    (&rhs, self)
                };
                if !ap.breakpoints.is_empty() || ap.left_tail.degree().map_or(false, |d| d > 0) {
                    return Err(Error::Invalid(
                        "can only combine a periodic function with a constant".into(),
                    ));
                }
                let c = &ap.left_tail;
                let mut out = per.clone();
                for p in &mut out.pieces {
                    *p = p.add(c);
                }
                debug_assert_eq!(out.period, Some(period));
                Ok(out)
            }
        }
    }

    pub fn add(&self, other: &PiecewiseFunction) -> Result<PiecewiseFunction> {
        self.binary_op(other, false)
    }

    pub fn sub(&self, other: &PiecewiseFunction) -> Result<PiecewiseFunction> {
        self.binary_op(other, true)
    }

    pub fn mul(&self, other: &PiecewiseFunction) -> Result<PiecewiseFunction> {
        match (self.period, other.period) {
            (None, None) => {
                let mut cuts: Vec<f64> = self
                    .breakpoints
                    .iter()
                    .chain(other.breakpoints.iter())
                    .copied()
                    .collect();
                cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
                let mut pieces = Vec::new();
                for w in cuts.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    pieces.push(self.local_poly(mid).mul(other.local_poly(mid))?);
                }
                PiecewiseFunction::aperiodic(
                    cuts,
                    pieces,
                    self.left_tail.mul(&other.left_tail)?,
                    self.right_tail.mul(&other.right_tail)?,
                )
            }
            _ => Err(Error::Invalid(
                "products of periodic functions are taken after materializing".into(),
            )),
        }
    }

    /// Continuous antiderivative `F` with `F' = f` piecewise and `F(base) = 0`.
    /// `base = None` means the left end; this requires a zero left tail.
    /// Periodic input is allowed only with zero mean (the antiderivative is
    /// then periodic itself).
    pub fn antiderivative(&self, base: Option<f64>) -> Result<PiecewiseFunction> {
        if let Some(period) = self.period {
            let b0 = self.breakpoints[0];
            let mean = self.integral(b0, b0 + period) / period;
            if mean.abs() > 1e-10 * (1.0 + self.max_abs_coeff()) {
                return Err(Error::PeriodicAntiderivative { mean });
            }
            // cumulative integrals across the cell pieces
            let mut breakpoints = self.breakpoints.clone();
            breakpoints.push(b0 + period);
            let mut pieces = Vec::with_capacity(self.pieces.len());
            let mut acc = 0.0;
            for (i, p) in self.pieces.iter().enumerate() {
                let prim = p.antiderivative();
                let lo = breakpoints[i];
                pieces.push(prim.add(&Poly::constant(acc - prim.eval(lo))));
                acc += prim.eval(breakpoints[i + 1]) - prim.eval(lo);
            }
            breakpoints.pop();
            let mut out = PiecewiseFunction::periodic(breakpoints, pieces, period)?;
            if let Some(t0) = base {
                let v = out.evaluate(t0);
                out = out.sub(&PiecewiseFunction::constant(v))?;
            }
            return Ok(out);
        }

        if base.is_none() && !self.left_tail.is_zero() {
            return Err(Error::Invalid(
                "antiderivative from -infinity needs a zero left tail".into(),
            ));
        }
        if self.breakpoints.is_empty() {
            let prim = self.left_tail.antiderivative();
            let t0 = base.unwrap_or(0.0);
            let prim = prim.add(&Poly::constant(-prim.eval(t0)));
            return Ok(PiecewiseFunction::global(prim));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut acc = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let prim = p.antiderivative();
            let lo = self.breakpoints[i];
            pieces.push(prim.add(&Poly::constant(acc - prim.eval(lo))));
            acc += prim.eval(self.breakpoints[i + 1]) - prim.eval(lo);
        }
        let left = {
            // vanishes at the first breakpoint together with its tail history
            let prim = self.left_tail.antiderivative();
            prim.add(&Poly::constant(-prim.eval(self.breakpoints[0])))
        };
        let right = {
            let prim = self.right_tail.antiderivative();
            prim.add(&Poly::constant(acc - prim.eval(*self.breakpoints.last().unwrap())))
        };
        let mut out = PiecewiseFunction::aperiodic(self.breakpoints.clone(), pieces, left, right)?;
        if let Some(t0) = base {
            let v = out.evaluate(t0);
            out = out.sub(&PiecewiseFunction::constant(v))?;
        }
        Ok(out)
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut acc = 0.0;
        for s in self.segments_on(lo, hi) {
            acc += s.poly.integral(s.lo, s.hi);
        }
        sign * acc
    }

    fn max_abs_coeff(&self) -> f64 {
        let mut m: f64 = self.left_tail.max_abs_coeff().max(self.right_tail.max_abs_coeff());
        for p in &self.pieces {
            m = m.max(p.max_abs_coeff());
        }
        m
    }

    /// `sup_t (integral_t^{t+1} |f|^2)^{1/2}`.
    pub fn norm_l2_unif(&self) -> Result<f64> {
        Ok(self.window_sup(2)?.max(0.0).sqrt())
    }

    /// `sup_t integral_t^{t+1} |f|`.
    pub fn norm_l1_unif(&self) -> Result<f64> {
        Ok(self.window_sup(1)?.max(0.0))
    }

    /// Supremum over window starts of `integral_t^{t+1} |f|^p`, `p` in {1, 2}.
    fn window_sup(&self, power: u32) -> Result<f64> {
        if self.is_identically_zero() {
            return Ok(0.0);
        }
        let (mat, t_lo, t_hi, tail_candidates) = match self.period {
            Some(period) => {
                let b0 = self.breakpoints[0];
                (self.materialize(b0, b0 + period + 1.0), b0, b0 + period, Vec::new())
            }
            None => {
                let const_val = |p: &Poly| -> Result<f64> {
                    match p.degree() {
                        None => Ok(0.0),
                        Some(0) => Ok(p.eval(0.0)),
                        Some(_) => Err(Error::Invalid(
                            "uniform norms need zero or constant tails (or a periodic function)"
                                .into(),
                        )),
                    }
                };
                let cl = const_val(&self.left_tail)?;
                let cr = const_val(&self.right_tail)?;
                if self.breakpoints.is_empty() {
                    let c = cl.abs();
                    return Ok(if power == 2 { c * c } else { c });
                }
                let b0 = self.breakpoints[0];
                let blast = *self.breakpoints.last().unwrap();
                let tails = vec![
                    if power == 2 { cl * cl } else { cl.abs() },
                    if power == 2 { cr * cr } else { cr.abs() },
                ];
                (self.materialize(b0 - 1.0, blast + 1.0), b0 - 1.0, blast, tails)
            }
        };

        let integrand = mat.abs_power(power)?;
        let prim = integrand.antiderivative(None)?;
        let mut best: f64 = tail_candidates.into_iter().fold(0.0, f64::max);

        // W(t) = prim(t+1) - prim(t) is piecewise polynomial in t; its
        // breakpoints are the primitive's breakpoints and their backshifts.
        let mut cuts: Vec<f64> = vec![t_lo, t_hi];
        for &b in prim.breakpoints() {
            if b > t_lo && b < t_hi {
                cuts.push(b);
            }
            let s = b - 1.0;
            if s > t_lo && s < t_hi {
                cuts.push(s);
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let p_right = prim.local_poly(mid + 1.0).shift(1.0);
            let p_left = prim.local_poly(mid);
            let wpoly = p_right.sub(p_left);
            let mut candidates = vec![lo, hi];
            candidates.extend(wpoly.derivative().real_roots_in(lo, hi));
            for t in candidates {
                best = best.max(wpoly.eval(t));
            }
        }
        Ok(best)
    }

    /// `|f|^p` as a piecewise polynomial (aperiodic input). For `p = 1` each
    /// piece is split at its sign changes.
    fn abs_power(&self, power: u32) -> Result<PiecewiseFunction> {
        debug_assert!(self.period.is_none() && self.has_zero_tails());
        match power {
            2 => {
                let pieces = self
                    .pieces
                    .iter()
                    .map(|p| p.mul(p))
                    .collect::<Result<Vec<_>>>()?;
                PiecewiseFunction::compact(self.breakpoints.clone(), pieces)
            }
            1 => {
                let mut breakpoints = Vec::new();
                let mut pieces = Vec::new();
                for (i, p) in self.pieces.iter().enumerate() {
                    let (lo, hi) = (self.breakpoints[i], self.breakpoints[i + 1]);
                    let mut cuts = vec![lo];
                    cuts.extend(
                        p.real_roots_in(lo, hi)
                            .into_iter()
                            .filter(|&r| r > lo + 1e-13 && r < hi - 1e-13),
                    );
                    cuts.push(hi);
                    for w in cuts.windows(2) {
                        let mid = 0.5 * (w[0] + w[1]);
                        breakpoints.push(w[0]);
                        pieces.push(if p.eval(mid) < 0.0 { p.scale(-1.0) } else { p.clone() });
                    }
                }
                breakpoints.push(*self.breakpoints.last().unwrap());
                PiecewiseFunction::compact(breakpoints, pieces)
            }
            _ => unreachable!("only powers 1 and 2 are used"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sawtooth() -> PiecewiseFunction {
        // 1-periodic, equal to 1/2 - t on [0, 1)
        PiecewiseFunction::periodic(vec![0.0], vec![Poly::from_coeffs(vec![0.5, -1.0])], 1.0)
            .unwrap()
    }

    #[test]
    fn evaluate_zero_function() {
        assert_eq!(PiecewiseFunction::zero().evaluate(3.7), 0.0);
    }

    #[test]
    fn evaluate_periodic_reduces_mod_period() {
        assert!((sawtooth().evaluate(1.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evaluate_heaviside_right_continuous() {
        let h = PiecewiseFunction::aperiodic(vec![0.0], vec![], Poly::zero(), Poly::constant(1.0))
            .unwrap();
        assert_eq!(h.evaluate(0.0), 1.0);
        assert_eq!(h.evaluate(-1e-9), 0.0);
    }

    #[test]
    fn antiderivative_of_indicator_is_ramp() {
        let f = PiecewiseFunction::compact(vec![0.0, 1.0], vec![Poly::constant(1.0)]).unwrap();
        let ramp = f.antiderivative(None).unwrap();
        assert_eq!(ramp.evaluate(-0.5), 0.0);
        assert!((ramp.evaluate(0.5) - 0.5).abs() < 1e-15);
        assert!((ramp.evaluate(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn antiderivative_zero() {
        let z = PiecewiseFunction::zero().antiderivative(None).unwrap();
        assert!(z.is_identically_zero());
    }

    #[test]
    fn antiderivative_of_2t() {
        let f =
            PiecewiseFunction::compact(vec![0.0, 1.0], vec![Poly::from_coeffs(vec![0.0, 2.0])])
                .unwrap();
        let prim = f.antiderivative(None).unwrap();
        assert!((prim.evaluate(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn antiderivative_periodic_nonzero_mean_rejected() {
        let f = PiecewiseFunction::periodic(vec![0.0], vec![Poly::constant(1.0)], 1.0).unwrap();
        assert!(matches!(
            f.antiderivative(None),
            Err(Error::PeriodicAntiderivative { .. })
        ));
    }

    #[test]
    fn antiderivative_periodic_zero_mean() {
        let prim = sawtooth().antiderivative(None).unwrap();
        assert_eq!(prim.period(), Some(1.0));
        // F(t) = t/2 - t^2/2 on [0,1), periodic
        assert!((prim.evaluate(0.5) - 0.125).abs() < 1e-15);
        assert!((prim.evaluate(1.5) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn norm_l2_unif_examples() {
        assert_eq!(PiecewiseFunction::zero().norm_l2_unif().unwrap(), 0.0);
        let n = sawtooth().norm_l2_unif().unwrap();
        assert!((n - (1.0f64 / 12.0).sqrt()).abs() < 1e-12, "got {n}");
        let ind = PiecewiseFunction::compact(vec![0.0, 1.0], vec![Poly::constant(1.0)]).unwrap();
        assert!((ind.norm_l2_unif().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_l1_unif_examples() {
        assert_eq!(PiecewiseFunction::zero().norm_l1_unif().unwrap(), 0.0);
        let c = PiecewiseFunction::constant(-2.5);
        assert!((c.norm_l1_unif().unwrap() - 2.5).abs() < 1e-12);
        // t on [-1, 1], zero outside: best unit window is [-1, 0] or [0, 1]
        let f = PiecewiseFunction::compact(vec![-1.0, 1.0], vec![Poly::from_coeffs(vec![0.0, 1.0])])
            .unwrap();
        assert!((f.norm_l1_unif().unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn materialize_matches_periodic_values() {
        let f = sawtooth();
        let m = f.materialize(-0.75, 2.25);
        for &t in &[-0.7, -0.2, 0.3, 0.9, 1.4, 2.2] {
            assert!((m.evaluate(t) - f.evaluate(t)).abs() < 1e-14);
        }
        assert_eq!(m.evaluate(2.3), 0.0);
    }

    #[test]
    fn product_refines_grid() {
        let a = PiecewiseFunction::compact(vec![0.0, 2.0], vec![Poly::from_coeffs(vec![0.0, 1.0])])
            .unwrap();
        let b = PiecewiseFunction::compact(vec![1.0, 3.0], vec![Poly::constant(2.0)]).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.evaluate(1.5), 3.0);
        assert_eq!(p.evaluate(0.5), 0.0);
        assert_eq!(p.evaluate(2.5), 0.0);
    }

    #[test]
    fn tails_constant_norm() {
        // Heaviside has unit uniform norms
        let h = PiecewiseFunction::aperiodic(vec![0.0], vec![], Poly::zero(), Poly::constant(1.0))
            .unwrap();
        assert!((h.norm_l1_unif().unwrap() - 1.0).abs() < 1e-12);
        assert!((h.norm_l2_unif().unwrap() - 1.0).abs() < 1e-12);
    }
}
