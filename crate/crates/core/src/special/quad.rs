//! Double-exponential quadrature (tanh-sinh on finite intervals, exp-sinh on
//! half-lines), trapezoidal rule on circles, and Gauss–Legendre nodes.

use crate::error::{Error, Result};
use crate::sum::ComplexSum;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Tolerances and refinement budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of step halvings.
    pub max_refinements: usize,
    /// Exponential decay rate of semi-infinite integrands; sets the split point `1/decay_hint`.
    pub decay_hint: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_refinements: 9,
            decay_hint: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Params("quadrature tolerances must be positive".into()));
        }
        if self.max_refinements < 1 {
            return Err(Error::Params("max_refinements must be at least 1".into()));
        }
        if !(self.decay_hint > 0.0) {
            return Err(Error::Params("decay_hint must be positive".into()));
        }
        Ok(())
    }

    fn met(&self, err: f64, value: C64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Integral value with an error estimate (difference between the last two levels).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub evaluations: usize,
}

const T_MAX: f64 = 4.0;

/// Nodes of one tanh-sinh level on (−1, 1): `(t, offset from nearest endpoint, weight)`.
#[inline]
fn tanh_sinh_node(t: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let ch = u.cosh();
    // 1 − tanh|u| = e^{−|u|}/cosh u, computed without cancellation.
    let offset = (-u.abs()).exp() / ch;
    let weight = FRAC_PI_2 * t.cosh() / (ch * ch);
    (offset, weight)
}

/// ∫_a^b f(x) dx by adaptive tanh-sinh. Endpoint singularities that are
/// integrable are tolerated; `f` is never evaluated exactly at `a` or `b`.
pub fn quad_finite<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> C64 {
        let (off, w) = tanh_sinh_node(t);
        let x = if t >= 0.0 { b - half * off } else { a + half * off };
        if t == 0.0 {
            return f(0.5 * (a + b)) * w;
        }
        f(x) * w
    };
    let mut h = 0.5;
    let mut acc = ComplexSum::new();
    let mut n_eval = 0usize;
    let kmax = (T_MAX / h) as i64;
    for k in -kmax..=kmax {
        acc.add(eval(k as f64 * h));
        n_eval += 1;
    }
    let mut prev = acc.value() * h * half;
    for _level in 0..spec.max_refinements {
        h *= 0.5;
        let kmax = (T_MAX / h) as i64;
        let mut k = -kmax;
        if k % 2 == 0 {
            k += 1;
        }
        while k <= kmax {
            acc.add(eval(k as f64 * h));
            n_eval += 1;
            k += 2;
        }
        let cur = acc.value() * h * half;
        let err = (cur - prev).norm();
        if !cur.re.is_finite() || !cur.im.is_finite() {
            return Err(Error::Accuracy(format!("non-finite integrand on [{a}, {b}]")));
        }
        if spec.met(err, cur) {
            return Ok(QuadResult {
                value: cur,
                error: err,
                evaluations: n_eval,
            });
        }
        prev = cur;
    }
    Err(Error::Accuracy(format!(
        "tanh-sinh on [{a}, {b}] did not converge; best estimate {prev}"
    )))
}

/// ∫_c^∞ f(x) dx by adaptive exp-sinh with `x = c + e^{(π/2) sinh t}/λ`.
fn quad_half_line<F: Fn(f64) -> C64>(f: &F, c: f64, lambda: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let term = |t: f64| -> Option<C64> {
        let e = (FRAC_PI_2 * t.sinh()).exp() / lambda;
        if !e.is_finite() || e > 1e250 {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * e;
        let v = f(c + e) * w;
        if v.re.is_finite() && v.im.is_finite() {
            Some(v)
        } else {
            None
        }
    };
    let mut h = 0.5;
    let mut acc = ComplexSum::new();
    let mut n_eval = 0usize;
    // Walk outwards from t = 0 in both directions until terms are negligible.
    let sweep = |acc: &mut ComplexSum, h: f64, step: i64, n_eval: &mut usize| {
        let start = if step == 1 { 0 } else { 1 };
        for dir in [1.0f64, -1.0] {
            let mut k = if dir > 0.0 { start } else { 1 };
            let mut small = 0;
            loop {
                let t = dir * k as f64 * h;
                if t.abs() > 6.0 {
                    break;
                }
                match term(t) {
                    Some(v) => {
                        *n_eval += 1;
                        acc.add(v);
                        if v.norm() < 1e-300 || v.norm() < 1e-20 * acc.value().norm() {
                            small += 1;
                            if small >= 3 {
                                break;
                            }
                        } else {
                            small = 0;
                        }
                    }
                    None => break,
                }
                k += step;
            }
        }
    };
    sweep(&mut acc, h, 1, &mut n_eval);
    let mut prev = acc.value() * h;
    for _ in 0..spec.max_refinements {
        h *= 0.5;
        // New nodes are the odd multiples of the halved step.
        let mut odd = ComplexSum::new();
        for dir in [1.0f64, -1.0] {
            let mut k = 1i64;
            let mut small = 0;
            loop {
                let t = dir * k as f64 * h;
                if t.abs() > 6.0 {
                    break;
                }
                match term(t) {
                    Some(v) => {
                        n_eval += 1;
                        odd.add(v);
                        if v.norm() < 1e-300 || v.norm() < 1e-20 * (acc.value().norm() + odd.value().norm()) {
                            small += 1;
                            if small >= 3 {
                                break;
                            }
                        } else {
                            small = 0;
                        }
                    }
                    None => break,
                }
                k += 2;
            }
        }
        acc.merge(&odd);
        let cur = acc.value() * h;
        let err = (cur - prev).norm();
        if spec.met(err, cur) {
            return Ok(QuadResult {
                value: cur,
                error: err,
                evaluations: n_eval,
            });
        }
        prev = cur;
    }
    Err(Error::Accuracy(format!(
        "exp-sinh from {c} did not converge; best estimate {prev}"
    )))
}

/// ∫_0^∞ f(u) du. The range is split at `1/decay_hint`: tanh-sinh below,
/// exp-sinh above.
pub fn quad_semi_infinite<F: Fn(f64) -> C64>(f: F, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let cut = 1.0 / spec.decay_hint;
    let head = quad_finite(&f, 0.0, cut, spec)?;
    let tail = quad_half_line(&f, cut, spec.decay_hint, spec)?;
    Ok(QuadResult {
        value: head.value + tail.value,
        error: head.error + tail.error,
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// A smooth parametric curve `z(τ)`, `τ ∈ [0, 1]`.
pub trait ParametricPath {
    fn point(&self, tau: f64) -> C64;
    fn derivative(&self, tau: f64) -> C64;
}

/// ∫_path f(z) dz.
pub fn quad_path<F: Fn(C64) -> C64, P: ParametricPath + ?Sized>(
    f: F,
    path: &P,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    quad_finite(|tau| f(path.point(tau)) * path.derivative(tau), 0.0, 1.0, spec)
}

/// ∮ f(z) dz counter-clockwise on the circle `|z − center| = radius`, by the
/// (spectrally accurate) trapezoidal rule with doubling.
pub fn quad_circle<F: Fn(C64) -> C64>(f: F, center: C64, radius: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let sample = |theta: f64| {
        let e = C64::from_polar(1.0, theta);
        f(center + radius * e) * (C64::i() * radius * e)
    };
    let mut n = 16usize;
    let mut acc = ComplexSum::new();
    for k in 0..n {
        acc.add(sample(2.0 * PI * k as f64 / n as f64));
    }
    let mut prev = acc.value() * (2.0 * PI / n as f64);
    let mut n_eval = n;
    for _ in 0..spec.max_refinements.max(4) {
        for k in 0..n {
            acc.add(sample(2.0 * PI * (k as f64 + 0.5) / n as f64));
        }
        n_eval += n;
        n *= 2;
        let cur = acc.value() * (2.0 * PI / n as f64);
        let err = (cur - prev).norm();
        if spec.met(err, cur) {
            return Ok(QuadResult {
                value: cur,
                error: err,
                evaluations: n_eval,
            });
        }
        prev = cur;
    }
    Err(Error::Accuracy(format!(
        "circle quadrature did not converge; best estimate {prev}"
    )))
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
