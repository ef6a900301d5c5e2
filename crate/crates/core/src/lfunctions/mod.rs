//! Evaluation and continuation of `L(s, χ)`, the completed function `L̂`, the
//! functional equation, branch-tracked `log L` along paths, and zeros.

mod zeros;

pub use zeros::{
    counting_remainder, find_zeros, find_zeros_with_step, ingest_external, load_zeros, mu_data, save_zeros,
    verify_zero_count, zero_density, zero_tail_correction, ZeroList, ZERO_TOL,
};

use crate::characters::{conjugate, gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::primesums::{dirichlet_log_sum, log_sum_tail};
use crate::special::{gamma, hurwitz_zeta, log_gamma, ParametricPath};
use crate::sum::ComplexSum;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `L(s, χ) = N^{−s} Σ_{a=1}^{N} χ(a) ζ(s, a/N)`, valid on all of `C` (except
/// `s = 1` for the principal character).
pub fn l_value(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    let n = chi.modulus as f64;
    if (s - 1.0).norm() < 1e-15 {
        if chi.is_principal() {
            return Err(Error::Pole("L(s, χ_0) at s = 1".into()));
        }
        // ζ(s, a/N) has a pole at 1 that cancels in the character sum; step off it symmetrically.
        let h = 1e-5;
        let a = l_value(chi, s + h)?;
        let b = l_value(chi, s - h)?;
        return Ok(0.5 * (a + b));
    }
    let mut acc = ComplexSum::new();
    for a in 1..=chi.modulus {
        let c = chi.value(a);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        acc.add(c * hurwitz_zeta(s, C64::new(a as f64 / n, 0.0))?);
    }
    Ok((-s * n.ln()).exp() * acc.value())
}

/// `(L, L', L'')(s, χ)` by the trapezoidal Cauchy integral on a circle of
/// radius 1/4 around `s` (spectrally accurate: `L` is entire for
/// nonprincipal `χ`; the principal character is rejected within 1/2 of `s = 1`).
pub fn l_derivatives(chi: &DirichletCharacter, s: C64) -> Result<[C64; 3]> {
    if chi.is_principal() && (s - 1.0).norm() < 0.5 {
        return Err(Error::Pole("L(s, χ_0) has a pole within the derivative circle".into()));
    }
    const N: usize = 64;
    let r = 0.25;
    let mut acc = [ComplexSum::new(), ComplexSum::new(), ComplexSum::new()];
    for k in 0..N {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / N as f64);
        let v = l_value(chi, s + r * e)?;
        // f^{(j)}(s) = j!/(N r^j) Σ f(s + r e_k) e_k^{−j}.
        let mut ej = C64::new(1.0, 0.0);
        for a in acc.iter_mut() {
            a.add(v * ej);
            ej /= e;
        }
    }
    let n = N as f64;
    Ok([
        acc[0].value() / n,
        acc[1].value() / (n * r),
        2.0 * acc[2].value() / (n * r * r),
    ])
}

/// `−(L'/L)(s, χ) = Σ χ(n) Λ(n) n^{−s}` (on `Re s > 1`), by [`l_derivatives`].
pub fn neg_log_derivative(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    let [l, d1, _] = l_derivatives(chi, s)?;
    if l.norm() == 0.0 {
        return Err(Error::Pole(format!("L(s, {}) vanishes at {s}", chi.label())));
    }
    Ok(-d1 / l)
}

/// `(log L)''(s, χ) = L''/L − (L'/L)²`.
pub fn log_l_second_derivative(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    let [l, d1, d2] = l_derivatives(chi, s)?;
    if l.norm() == 0.0 {
        return Err(Error::Pole(format!("L(s, {}) vanishes at {s}", chi.label())));
    }
    let q = d1 / l;
    Ok(d2 / l - q * q)
}

/// Truncated Euler product `exp Σ_{p^m ≤ limit} χ(p^m) p^{−ms}/m` with a bound
/// on the relative truncation error (Re s > 1 only).
pub fn l_value_euler(chi: &DirichletCharacter, s: C64, limit: u64) -> Result<(C64, f64)> {
    let log = dirichlet_log_sum(chi, s, limit)?;
    let tail = log_sum_tail(s, limit);
    let v = log.exp();
    Ok((v, v.norm() * (tail.exp() - 1.0)))
}

/// `L̂(s, χ) = (π/N)^{−(s/2 + a/2)} Γ(s/2 + a/2) L(s, χ)` with `a = (1 − χ(−1))/2`.
pub fn completed_l(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    let a = chi.parity_index() as f64;
    let z = 0.5 * (s + a);
    let n = chi.modulus as f64;
    let pre = (z * (n / PI).ln() + log_gamma(z)?).exp();
    Ok(pre * l_value(chi, s)?)
}

/// `ξ(s, χ) = L̂(s + 1/2, χ)`.
pub fn xi(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    completed_l(chi, s + 0.5)
}

/// Root number `ε(χ) = G(χ)/(i^a √N)`, with `L̂(s, χ) = ε L̂(1 − s, χ̄)`.
pub fn root_number(chi: &DirichletCharacter) -> C64 {
    let ia = if chi.parity == 1 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 1.0)
    };
    gauss_sum(chi) / (ia * (chi.modulus as f64).sqrt())
}

/// `L̂` evaluated stably anywhere off the Gamma poles of either side: directly
/// for `Re s ≥ 1/2`, through the functional equation otherwise.
pub fn completed_l_reflected(chi: &DirichletCharacter, s: C64) -> Result<C64> {
    if s.re >= 0.5 {
        completed_l(chi, s)
    } else {
        Ok(root_number(chi) * completed_l(&conjugate(chi), 1.0 - s)?)
    }
}

/// Relative residual of the asymmetric functional equation
/// `L(s,χ) = N^{−s}(2π)^{s−1} G(χ) Γ(1−s) (e^{−πi(1−s)/2} + χ(−1) e^{πi(1−s)/2}) L(1−s, χ̄)`.
pub fn functional_equation_residual(chi: &DirichletCharacter, s: C64) -> Result<f64> {
    let n = chi.modulus as f64;
    let lhs = l_value(chi, s)?;
    let i = C64::i();
    let phase = (-i * PI * (1.0 - s) / 2.0).exp() + chi.parity_f64() * (i * PI * (1.0 - s) / 2.0).exp();
    let rhs = (-s * n.ln()).exp()
        * ((s - 1.0) * (2.0 * PI).ln()).exp()
        * gauss_sum(chi)
        * gamma(1.0 - s)?
        * phase
        * l_value(&conjugate(chi), 1.0 - s)?;
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm()))
}

/// Samples of a continuous branch of `log L(u, χ)` along a path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchedLogSamples {
    pub description: String,
    /// `(u, log L(u, χ))` in path order.
    pub samples: Vec<(C64, C64)>,
    /// Net number of 2π corrections applied relative to the principal branch
    /// at the last sample.
    pub windings: i64,
}

/// Principal `log L(u)`; equal to the Euler-product branch whenever Re u ≥ 2
/// (there `|log L| ≤ log ζ(2) < π`).
fn principal_log_l(chi: &DirichletCharacter, u: C64) -> Result<C64> {
    let v = l_value(chi, u)?;
    if v.norm() == 0.0 {
        return Err(Error::Branch(format!("L vanishes at {u}")));
    }
    Ok(v.ln())
}

/// Continue a branch of log L from `(z0, log0)` to `z1` along the straight
/// segment, bisecting until every step changes the argument by less than π/4.
fn continue_log(chi: &DirichletCharacter, z0: C64, log0: C64, z1: C64, depth: u32) -> Result<C64> {
    let p1 = principal_log_l(chi, z1)?;
    let mut d = p1.im - log0.im;
    let k = (d / (2.0 * PI)).round();
    d -= 2.0 * PI * k;
    if d.abs() < PI / 4.0 {
        return Ok(C64::new(p1.re, log0.im + d));
    }
    if depth > 40 {
        return Err(Error::Branch(format!(
            "argument jump ≥ π/4 at minimal step between {z0} and {z1}"
        )));
    }
    let mid = 0.5 * (z0 + z1);
    let lm = continue_log(chi, z0, log0, mid, depth + 1)?;
    continue_log(chi, mid, lm, z1, depth + 1)
}

/// The anchored value of `log L(z)`: principal at `Re z ≥ 2`, otherwise
/// continued horizontally from `2 + i Im z`.
pub fn log_l_anchored(chi: &DirichletCharacter, z: C64) -> Result<C64> {
    let anchor = C64::new(z.re.max(2.0), z.im);
    let la = principal_log_l(chi, anchor)?;
    if anchor == z {
        return Ok(la);
    }
    // Steps of at most 0.05 along the horizontal segment.
    let steps = ((anchor.re - z.re) / 0.05).ceil().max(1.0) as usize;
    let mut cur = anchor;
    let mut lv = la;
    for k in 1..=steps {
        let next = anchor + (z - anchor) * (k as f64 / steps as f64);
        lv = continue_log(chi, cur, lv, next, 0)?;
        cur = next;
    }
    Ok(lv)
}

/// Branch-tracked `log L(u, χ)` at the path parameters `taus` (ascending from
/// 0). The branch is anchored at `path.point(0)` via [`log_l_anchored`];
/// `path.point(0)` must satisfy `Re ≥ 1`.
pub fn log_l_along_path<P: ParametricPath + ?Sized>(
    chi: &DirichletCharacter,
    path: &P,
    taus: &[f64],
    description: &str,
) -> Result<BranchedLogSamples> {
    let z0 = path.point(0.0);
    if z0.re < 1.0 {
        return Err(Error::Domain(format!("path must start at Re(u) ≥ 1, starts at {z0}")));
    }
    let mut cur_tau = 0.0;
    let mut cur = z0;
    let mut lv = log_l_anchored(chi, z0)?;
    let mut samples = Vec::with_capacity(taus.len());
    for &tau in taus {
        if tau < cur_tau {
            return Err(Error::Domain("path parameters must be ascending".into()));
        }
        // Walk through intermediate parameter points so that each straight
        // chord stays close to the curve.
        let n_sub = (((tau - cur_tau) / 0.01).ceil() as usize).max(1);
        for k in 1..=n_sub {
            let t = cur_tau + (tau - cur_tau) * (k as f64 / n_sub as f64);
            let z = path.point(t);
            lv = continue_log(chi, cur, lv, z, 0)
                .map_err(|e| Error::Branch(format!("{description}: segment ending at τ = {t:.6} ({z}): {e}")))?;
            cur = z;
        }
        cur_tau = tau;
        samples.push((cur, lv));
    }
    let windings = samples
        .last()
        .map(|(z, l)| {
            let p = principal_log_l(chi, *z).map(|p| p.im).unwrap_or(l.im);
            ((l.im - p) / (2.0 * PI)).round() as i64
        })
        .unwrap_or(0);
    Ok(BranchedLogSamples {
        description: description.to_string(),
        samples,
        windings,
    })
}

/// A straight segment as a [`ParametricPath`].
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub from: C64,
    pub to: C64,
}

impl ParametricPath for Segment {
    fn point(&self, tau: f64) -> C64 {
        self.from + (self.to - self.from) * tau
    }
    fn derivative(&self, _tau: f64) -> C64 {
        self.to - self.from
    }
}
