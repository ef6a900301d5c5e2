//! The zero series `l_χ(t) = Σ_{γ>0} e^{−γt}` over the nontrivial zeros
//! `1/2 + iγ` of `L(s, χ)`, its explicit (prime-side) representations, and the
//! auxiliary kernels `H`, `I`, `J` with their continuations.
//!
//! Two representations are provided:
//!
//! * **right half-plane** (`Re t > 0`): `l_χ(t) = F(χ, t)` where `F` collects
//!   the Laplace transforms of `log L` along the two vertical lines
//!   `Re s = −α` and `Re s = 1` and the contour `S` joining `−α` to `1` below
//!   the first zero;
//! * **everywhere off `iR_{≤0}`**:
//!   `l_χ(t) = −F(χ̄, −t) − i e^{−χ(−1)it/2}/(2 sin t) − μ-terms`, which follows
//!   from the reflection `l_χ(t) + l_χ̄(−t) = −i e^{−χ(−1)it/2}/(2 sin t) − μ-terms`.
//!
//! The prime-power sums inside `F` are evaluated exactly: an explicit head over
//! `p^m ≤ P₀` plus the remainder as a Laplace integral of the tail of `log L`,
//! so no truncation in the prime limit enters `l_explicit`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::characters::{conjugate, gauss_sum, DirichletCharacter};
use crate::lfunctions::{l_value, log_l_along_path, mu_data, zero_density, ZeroList};
use crate::primesums::{prefix, prime_powers, prime_powers_cached};
use crate::special::{
    euler_gamma, gauss_legendre, log_gamma, quad_circle, quad_semi_infinite, ParametricPath, QuadratureSpec,
};
use crate::sum::ComplexSum;
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// How the prime-power sums inside the explicit formula are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeSumMode {
    /// Explicit head plus an exact integral representation of the remainder.
    Exact,
    /// Plain truncation at `prime_limit`.
    Truncated,
}

/// Parameters of the explicit formula: the contour shape (`alpha`, `epsilon`),
/// the sector angle `theta`, the zero height and prime limit, and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CramerEvalParams {
    /// Abscissa `−α` of the left vertical line, `0 < α < 1`.
    pub alpha: f64,
    /// Height of the contour `S` (below the first zero ordinate).
    pub epsilon: f64,
    /// Sector angle, `0 < θ < π/4`, `tan θ < ε`.
    pub theta: f64,
    /// Zero height `T` used by zero-side sums.
    pub zero_height: f64,
    /// Prime limit `P` used by truncated prime sums.
    pub prime_limit: u64,
    pub prime_sums: PrimeSumMode,
    pub quad: QuadratureSpec,
}

impl Default for CramerEvalParams {
    fn default() -> Self {
        let epsilon = 1.0;
        CramerEvalParams {
            alpha: 0.5,
            epsilon,
            theta: 0.5 * epsilon.atan(),
            zero_height: 150.0,
            prime_limit: 1_000_000,
            prime_sums: PrimeSumMode::Exact,
            quad: QuadratureSpec::with_tol(1e-12),
        }
    }
}

impl CramerEvalParams {
    /// Defaults adapted to a first zero ordinate `tau1`:
    /// `ε = min(1, τ₁/2)`, `θ = atan(ε)/2`, `α = 1/2`.
    pub fn defaults_for(tau1: f64) -> Self {
        let epsilon = (0.5 * tau1).min(1.0);
        CramerEvalParams {
            epsilon,
            theta: 0.5 * epsilon.atan(),
            ..Default::default()
        }
    }

    /// Check `0 < α < 1`, `0 < θ < π/4`, `tan θ < ε < tau1`.
    pub fn validate(&self, tau1: f64) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Params(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.theta > 0.0 && self.theta < PI / 4.0) {
            return Err(Error::Params(format!("theta must lie in (0, π/4), got {}", self.theta)));
        }
        if !(self.theta.tan() < self.epsilon) {
            return Err(Error::Params(format!(
                "need tan(theta) = {} < epsilon = {}",
                self.theta.tan(),
                self.epsilon
            )));
        }
        if !(self.epsilon < tau1) {
            return Err(Error::Params(format!(
                "epsilon = {} must lie below the first zero ordinate {tau1}",
                self.epsilon
            )));
        }
        if !(self.zero_height > 0.0) || self.prime_limit < 2 {
            return Err(Error::Params("zero height must be positive and prime limit ≥ 2".into()));
        }
        self.quad.validate()
    }
}

/// The contour `S: φ ↦ (1+α)/2 cos φ + iε sin φ + (1−α)/2`, traversed with
/// `τ = φ/π ∈ [0, 1]`, i.e. from `1` to `−α`.
#[derive(Debug, Clone, Copy)]
pub struct HalfEllipse {
    pub center: f64,
    pub semi_real: f64,
    pub semi_imag: f64,
}

impl HalfEllipse {
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        HalfEllipse {
            center: 0.5 * (1.0 - alpha),
            semi_real: 0.5 * (1.0 + alpha),
            semi_imag: epsilon,
        }
    }
}

impl ParametricPath for HalfEllipse {
    fn point(&self, tau: f64) -> C64 {
        let phi = PI * tau;
        C64::new(self.center + self.semi_real * phi.cos(), self.semi_imag * phi.sin())
    }
    fn derivative(&self, tau: f64) -> C64 {
        let phi = PI * tau;
        PI * C64::new(-self.semi_real * phi.sin(), self.semi_imag * phi.cos())
    }
}

/// Branch-tracked `log L(s, χ)` on composite Gauss–Legendre nodes of `S`,
/// with weights for `∫_{S(π→0)} g(s) ds` (orientation from `−α` to `1`).
#[derive(Debug, Clone)]
pub struct ContourLog {
    pub nodes: Vec<C64>,
    /// `ds` weights for the orientation `−α → 1`.
    pub weights: Vec<C64>,
    pub log_l: Vec<C64>,
    /// Tracked `log L(−α, χ)`.
    pub log_l_left: C64,
}

/// Panels × nodes of the composite Gauss–Legendre rule along `S`.
const S_PANELS: usize = 12;
const S_NODES: usize = 16;

impl ContourLog {
    pub fn new(chi: &DirichletCharacter, alpha: f64, epsilon: f64) -> Result<Self> {
        Self::with_resolution(chi, alpha, epsilon, S_PANELS, S_NODES)
    }

    pub fn with_resolution(
        chi: &DirichletCharacter,
        alpha: f64,
        epsilon: f64,
        panels: usize,
        per_panel: usize,
    ) -> Result<Self> {
        let path = HalfEllipse::new(alpha, epsilon);
        let (x, w) = gauss_legendre(per_panel);
        let mut taus = Vec::with_capacity(panels * per_panel + 1);
        let mut wts = Vec::with_capacity(panels * per_panel);
        let h = 1.0 / panels as f64;
        for k in 0..panels {
            let a = k as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                taus.push(a + 0.5 * h * (xi + 1.0));
                wts.push(0.5 * h * wi);
            }
        }
        taus.push(1.0);
        let logs = log_l_along_path(chi, &path, &taus, "log L along S")?;
        let n = wts.len();
        let nodes: Vec<C64> = logs.samples[..n].iter().map(|(z, _)| *z).collect();
        let log_l: Vec<C64> = logs.samples[..n].iter().map(|(_, l)| *l).collect();
        // Parameter runs 1 → −α; the integral is taken −α → 1, hence the sign.
        let weights = taus[..n]
            .iter()
            .zip(&wts)
            .map(|(&tau, &wt)| -wt * path.derivative(tau))
            .collect();
        Ok(ContourLog {
            nodes,
            weights,
            log_l,
            log_l_left: logs.samples[n].1,
        })
    }

    /// `∫_{S(π→0)} e^{i·sign·s·t} log L(s) ds`.
    pub fn laplace(&self, t: C64, sign: f64) -> C64 {
        let mut acc = ComplexSum::new();
        for ((s, w), l) in self.nodes.iter().zip(&self.weights).zip(&self.log_l) {
            acc.add((I * sign * s * t).exp() * l * w);
        }
        acc.value()
    }
}

/// Which representation `l_explicit` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    /// Right half-plane formula for `Re t > 0`, reflected formula elsewhere.
    Auto,
    /// Right half-plane formula (requires `Re t > 0`).
    RightHalfPlane,
    /// Reflected formula, valid on `C ∖ iR_{≤0}`.
    Reflected,
}

/// Per-character data of the half-plane functional `F(ψ, t)`.
#[derive(Debug, Clone)]
pub(crate) struct HalfPlaneData {
    pub(crate) chi: DirichletCharacter,
    pub(crate) contour: ContourLog,
    /// `log(ψ(−1)Γ(1+α)N^α G(ψ)/(2π)^{1+α})` on the branch matching the
    /// tracked `log L(−α, ψ)`.
    pub(crate) constant: C64,
    /// `ψ(−1) e^{−iαπ}`, the ratio of the `m`-ladder.
    pub(crate) ladder_ratio: C64,
    pub(crate) log_conductor_ratio: f64,
}

impl HalfPlaneData {
    pub(crate) fn new(chi: &DirichletCharacter, alpha: f64, epsilon: f64) -> Result<Self> {
        let contour = ContourLog::new(chi, alpha, epsilon)?;
        let n = chi.modulus as f64;
        let parity = chi.parity_f64();
        let g = gauss_sum(chi);
        let base = (C64::new(parity, 0.0) * log_gamma(C64::new(1.0 + alpha, 0.0))?.exp() * n.powf(alpha) * g
            / (2.0 * PI).powf(1.0 + alpha))
        .ln();
        // log L(−α) = C + (πi/2)(1+α) + log(1 + ψ(−1)e^{−πi(1+α)}) + log L(1+α, ψ̄).
        let chibar = conjugate(chi);
        let rest = I * (0.5 * PI * (1.0 + alpha))
            + (1.0 + parity * (-I * PI * (1.0 + alpha)).exp()).ln()
            + l_value(&chibar, C64::new(1.0 + alpha, 0.0))?.ln();
        let diff = contour.log_l_left - rest - base;
        let k = (diff.im / (2.0 * PI)).round();
        let resid = diff - I * (2.0 * PI * k);
        if resid.norm() > 1e-7 {
            return Err(Error::Branch(format!(
                "functional-equation decomposition of log L(−α, {}) does not match the tracked branch (residual {resid})",
                chi.label()
            )));
        }
        Ok(HalfPlaneData {
            chi: chi.clone(),
            contour,
            constant: base + I * (2.0 * PI * k),
            ladder_ratio: parity * (-I * PI * alpha).exp(),
            log_conductor_ratio: (2.0 * PI / n).ln(),
        })
    }
}

/// Prepared evaluator of `l_χ(t)` by the explicit formulas.
#[derive(Debug, Clone)]
pub struct CramerSeries {
    pub params: CramerEvalParams,
    direct: HalfPlaneData,
    conj: HalfPlaneData,
    mu0: i32,
    mu_tau0: i32,
    tau0: f64,
}

impl CramerSeries {
    /// Prepare for `χ`; the contour height `params.epsilon` must stay below the
    /// first zero of `χ` and `χ̄` (not re-checked here; see [`CramerEvalParams::validate`]).
    pub fn new(chi: &DirichletCharacter, params: &CramerEvalParams) -> Result<Self> {
        if !chi.primitive || chi.is_principal() {
            return Err(Error::Domain(format!(
                "{} is not a nonprincipal primitive character",
                chi.label()
            )));
        }
        if !(params.alpha > 0.0 && params.alpha < 1.0) || !(params.epsilon > 0.0) {
            return Err(Error::Params(format!(
                "invalid alpha/epsilon {}/{}",
                params.alpha, params.epsilon
            )));
        }
        let direct = HalfPlaneData::new(chi, params.alpha, params.epsilon)?;
        let conj = HalfPlaneData::new(&conjugate(chi), params.alpha, params.epsilon)?;
        let (mu0, mu_tau0, tau0) = mu_data(chi, 1e-10)?;
        Ok(CramerSeries {
            params: *params,
            direct,
            conj,
            mu0,
            mu_tau0,
            tau0,
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.direct.chi
    }

    /// `l_χ(t)` by the chosen representation.
    pub fn eval(&self, t: C64, rep: Representation) -> Result<C64> {
        check_off_ray(t)?;
        let rep = match rep {
            Representation::Auto if t.re > 0.0 => Representation::RightHalfPlane,
            Representation::Auto => Representation::Reflected,
            r => r,
        };
        match rep {
            Representation::RightHalfPlane => {
                if t.re <= 0.0 {
                    return Err(Error::Domain(format!(
                        "right half-plane formula needs Re t > 0, got {t}"
                    )));
                }
                self.half_plane(&self.direct, t)
            }
            _ => {
                self.check_poles(t)?;
                Ok(-self.half_plane(&self.conj, -t)? + self.reflection_terms(t))
            }
        }
    }

    /// `−i e^{−χ(−1)it/2}/(2 sin t) − μ(τ⁰)(e^{iτ⁰t} + e^{−iτ⁰t}) − μ(0)`.
    pub fn reflection_terms(&self, t: C64) -> C64 {
        let parity = self.direct.chi.parity_f64();
        let mut v = -I * (-I * parity * 0.5 * t).exp() / (2.0 * t.sin());
        if self.mu_tau0 != 0 {
            v -= self.mu_tau0 as f64 * ((I * self.tau0 * t).exp() + (-I * self.tau0 * t).exp());
        }
        v - self.mu0 as f64
    }

    fn check_poles(&self, t: C64) -> Result<()> {
        // Poles at t = −mπ and t = i m log p.
        if t.re < 0.0 && t.im.abs() < 1e-6 {
            let m = (-t.re / PI).round();
            if m >= 1.0 && (t.re + m * PI).abs() < 1e-6 {
                return Err(Error::Pole(format!("t = {t} is within 1e-6 of the pole −{m}π")));
            }
        }
        if t.re.abs() < 1e-6 && t.im > 0.0 {
            for term in prime_powers(((t.im + 1e-6).exp().ceil() as u64).max(2)).iter() {
                if (term.mlogp - t.im).abs() < 1e-6 {
                    return Err(Error::Pole(format!(
                        "t = {t} is within 1e-6 of the pole i·{}·log {}",
                        term.m, term.p
                    )));
                }
            }
        }
        Ok(())
    }

    /// The half-plane functional
    /// `F(ψ, t) = −(it/2π)e^{it/2} A₁ + (e^{−i(α+1/2)t}/2π)[it A₂ − it M + iC − (1+α)π/2
    ///            − (γ + log(2π/N) − πi/2)/t + K(t)/t] − (t/2π)e^{−it/2} ∫_S e^{ist} log L ds`.
    fn half_plane(&self, data: &HalfPlaneData, t: C64) -> Result<C64> {
        let p = &self.params;
        let alpha = p.alpha;
        let a1 = first_prime_sum(&data.chi, t, p)?;
        let a2 = second_prime_sum(&data.chi, t, alpha, p)?;
        let ladder = ladder_sum(data.ladder_ratio, t, &p.quad)?;
        let k = k_kernel(t, alpha, &p.quad)?;
        let gamma_block = C64::new(euler_gamma() + data.log_conductor_ratio, 0.0) - I * (0.5 * PI);
        let bracket =
            I * t * a2 - I * t * ladder + I * data.constant - 0.5 * (1.0 + alpha) * PI - gamma_block / t + k / t;
        let contour = data.contour.laplace(t, 1.0);
        Ok(
            -(I * t / (2.0 * PI)) * (0.5 * I * t).exp() * a1 + (-I * (alpha + 0.5) * t).exp() / (2.0 * PI) * bracket
                - t / (2.0 * PI) * (-0.5 * I * t).exp() * contour,
        )
    }
}

fn check_off_ray(t: C64) -> Result<()> {
    if t.re == 0.0 && t.im <= 0.0 {
        return Err(Error::Domain(format!("t = {t} lies on the excluded ray iR≤0")));
    }
    Ok(())
}

/// `Σ_{p^m ≤ limit} ψ(p^m) p^{−m·s}/m · 1/(m·d(p,m))` style heads are built by
/// this helper: sums `f(term)` over prime powers up to `limit` where `ψ ≠ 0`.
fn head_sum<F: Fn(&crate::primesums::PrimePowerTerm, C64) -> C64>(chi: &DirichletCharacter, limit: u64, f: F) -> C64 {
    let list = prime_powers_cached(limit.max(2));
    let mut acc = ComplexSum::new();
    for term in prefix(&list, limit) {
        let c = chi.value(term.value);
        if c.norm_sqr() != 0.0 {
            acc.add(f(term, c));
        }
    }
    acc.value()
}

/// Head cut-off `P₀` making `log P₀ ± shift ≥ 2` (the decay rate of the
/// remainder integral).
fn head_limit(shift: f64) -> Result<u64> {
    let need = (2.0 + shift).max(0.0).exp().ceil().max(32.0);
    if need > 1e7 {
        return Err(Error::Domain(format!(
            "prime-sum remainder integral needs a head beyond 1e7 (shift {shift})"
        )));
    }
    Ok(need as u64)
}

/// `A₁(ψ, t) = Σ ψ(p^m) p^{−m} / (m (t + i m log p))`.
///
/// Exact mode: head over `p^m ≤ P₀` plus `−i ∫_0^∞ e^{ity} R(y) dy`, where
/// `R(y) = log L(1+y, ψ) − Σ_{p^m ≤ P₀} ψ(p^m) p^{−m(1+y)}/m`.
pub fn first_prime_sum(chi: &DirichletCharacter, t: C64, params: &CramerEvalParams) -> Result<C64> {
    let term =
        |tm: &crate::primesums::PrimePowerTerm, c: C64| c / (tm.value as f64) / (tm.m as f64 * (t + I * tm.mlogp));
    if params.prime_sums == PrimeSumMode::Truncated {
        return Ok(head_sum(chi, params.prime_limit, term));
    }
    let p0 = head_limit(-t.im)?;
    let head = head_sum(chi, p0, term);
    let rate = (p0 as f64).ln() + t.im;
    let rem = remainder_integral(chi, 1.0, p0, rate, |y| (I * t * y).exp(), &params.quad)?;
    Ok(head - I * rem)
}

/// `A₂(ψ, t) = Σ ψ̄(p^m) p^{−m(1+α)} / (m (t − i m log p))`.
///
/// Exact mode: head plus `i ∫_0^∞ e^{−ity} R̄(y) dy` with `R̄` the tail of
/// `log L(1+α+y, ψ̄)`.
pub fn second_prime_sum(chi: &DirichletCharacter, t: C64, alpha: f64, params: &CramerEvalParams) -> Result<C64> {
    let chibar = conjugate(chi);
    let term = |tm: &crate::primesums::PrimePowerTerm, c: C64| {
        c * (-(1.0 + alpha) * (tm.value as f64).ln()).exp() / (tm.m as f64 * (t - I * tm.mlogp))
    };
    if params.prime_sums == PrimeSumMode::Truncated {
        return Ok(head_sum(&chibar, params.prime_limit, term));
    }
    let p0 = head_limit(t.im)?;
    let head = head_sum(&chibar, p0, term);
    let rate = (p0 as f64).ln() - t.im;
    let rem = remainder_integral(&chibar, 1.0 + alpha, p0, rate, |y| (-I * t * y).exp(), &params.quad)?;
    Ok(head + I * rem)
}

/// Prime-power range for the direct remainder sum at `σ ≥ 6`
/// (dropped part `≲ FAR_LIMIT^{1−σ}/(σ−1)` relative to the leading remainder term).
const FAR_LIMIT: u64 = 20_000;

/// `∫_0^∞ kernel(y) [log L(σ₀+y, ψ) − Σ_{p^m ≤ P₀} ψ(p^m) p^{−m(σ₀+y)}/m] dy`.
fn remainder_integral<K: Fn(f64) -> C64>(
    chi: &DirichletCharacter,
    sigma0: f64,
    p0: u64,
    rate: f64,
    kernel: K,
    quad: &QuadratureSpec,
) -> Result<C64> {
    let list = prime_powers_cached(p0);
    let head = prefix(&list, p0);
    let log_p0 = (p0 as f64).ln();
    let far = prime_powers_cached(FAR_LIMIT.max(p0));
    let f = |y: f64| {
        // Beyond this point the remainder is below 1e-40 in size.
        if y * log_p0 > 92.0 + rate.abs() * y {
            return C64::new(0.0, 0.0);
        }
        let sig = sigma0 + y;
        if sig >= 6.0 {
            // Sum the remainder directly: the terms beyond P₀ decay like n^{−σ},
            // and ln L would lose the tiny remainder to rounding of L ≈ 1.
            let mut acc = ComplexSum::new();
            for tm in prefix(&far, FAR_LIMIT).iter().filter(|tm| tm.value > p0) {
                let c = chi.value(tm.value);
                if c.norm_sqr() != 0.0 {
                    acc.add(c * (-sig * (tm.value as f64).ln()).exp() / tm.m as f64);
                }
            }
            return kernel(y) * acc.value();
        }
        let s = C64::new(sig, 0.0);
        let lv = match l_value(chi, s) {
            Ok(v) => v.ln(),
            Err(_) => return C64::new(f64::NAN, 0.0),
        };
        let mut acc = ComplexSum::new();
        acc.add(lv);
        for tm in head {
            let c = chi.value(tm.value);
            if c.norm_sqr() != 0.0 {
                acc.add(-c * (-(sigma0 + y) * (tm.value as f64).ln()).exp() / tm.m as f64);
            }
        }
        kernel(y) * acc.value()
    };
    let spec = QuadratureSpec {
        decay_hint: rate.max(0.5),
        ..*quad
    };
    let r = quad_semi_infinite(f, &spec)?;
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::Accuracy(
            "prime-sum remainder integral produced a non-finite value".into(),
        ));
    }
    Ok(r.value)
}

/// The ladder `M(t) = Σ_{m≥1} z^m / (m (t + mπ))` for `|z| = 1`, `z ≠ 1`:
/// `M = (1/t)[−log(1−z) − Σ_{m≥1} z^m/(m + t/π)]`, the inner Lerch-type sum being
/// summed directly up to `m₀` and by `∫_0^∞ e^{−ax} z^{m₀+1}e^{−(m₀+1)x}/(1 − z e^{−x}) dx`
/// beyond. Near `t = 0` the defining series is summed directly instead.
pub fn ladder_sum(z: C64, t: C64, quad: &QuadratureSpec) -> Result<C64> {
    let a = t / PI;
    let m0 = ((-a.re).ceil().max(0.0) as u64) + 1;
    let mut head = ComplexSum::new();
    let mut zp = C64::new(1.0, 0.0);
    for m in 1..=m0 {
        zp *= z;
        let denom = m as f64 + a;
        if denom.norm() < 1e-12 {
            return Err(Error::Pole(format!("t = {t} is a pole −{m}π of the ladder")));
        }
        head.add(zp / denom);
    }
    let zq = zp * z;
    let shift = m0 as f64 + 1.0;
    let tail = quad_semi_infinite(
        |x| (-(a + shift) * x).exp() * zq / (1.0 - z * (-x).exp()),
        &QuadratureSpec {
            decay_hint: (a.re + shift).max(0.5),
            ..*quad
        },
    )?;
    let lerch = head.value() + tail.value;
    if t.norm() > 1e-3 {
        return Ok((-(1.0 - z).ln() - lerch) / t);
    }
    // Small t: 1/(m(t+mπ)) = Σ_k (−t)^k/(m^{k+2} π^{k+1}) with polylog coefficients.
    let mut acc = C64::new(0.0, 0.0);
    let mut tk = C64::new(1.0, 0.0);
    for k in 0..12 {
        acc += tk * polylog_unit(z, k + 2) / PI.powi(k as i32 + 1);
        tk *= -t;
    }
    Ok(acc)
}

/// `Li_n(z) = Σ z^m/m^n` for `|z| = 1`, `n ≥ 2`, by direct summation with an
/// Euler–Maclaurin-free tail bound (`n ≥ 2` converges absolutely).
fn polylog_unit(z: C64, n: u32) -> C64 {
    // Σ_{m>M} 1/m^n ≤ M^{1−n}/(n−1); M = 10^6 gives < 1e-12 for n = 2 after
    // averaging the oscillating tail; use the alternating-free partial sums
    // with a smoothed tail (Cesàro average over the last block).
    let big = 200_000usize;
    let mut acc = ComplexSum::new();
    let mut zp = C64::new(1.0, 0.0);
    for m in 1..=big {
        zp *= z;
        acc.add(zp / (m as f64).powi(n as i32));
    }
    // Tail Σ_{m>M} z^m/m^n ≈ z^{M+1}/((1−z) (M+1)^n) (summation by parts).
    acc.value() + zp * z / ((1.0 - z) * ((big + 1) as f64).powi(n as i32))
}

/// `K(t) = ∫_0^∞ (u + it(1 − e^{−αu})) / ((e^u − 1)(u + it)) du`, singular only
/// for `t ∈ iR_{>0}`.
pub fn k_kernel(t: C64, alpha: f64, quad: &QuadratureSpec) -> Result<C64> {
    if t.re == 0.0 && t.im >= 0.0 {
        return Err(Error::Domain(format!("K(t) is singular on iR≥0, got t = {t}")));
    }
    let f = |u: f64| {
        if u <= 0.0 {
            return (1.0 + I * alpha * t) / (I * t);
        }
        let num = u + I * t * (-(-alpha * u).exp_m1());
        num / (u.exp_m1() * (u + I * t))
    };
    Ok(quad_semi_infinite(
        f,
        &QuadratureSpec {
            decay_hint: 1.0,
            ..*quad
        },
    )?
    .value)
}

/// `H(t) = (1/t) ∫_0^∞ (u − it(1 − e^{−αu})) / ((e^u − 1)(u − it)) du` on
/// `C ∖ iR_{≤0}` (the integral is analytic there; no continuation term is needed).
pub fn h_function(t: C64, alpha: f64) -> Result<C64> {
    check_off_ray(t)?;
    if t.norm() == 0.0 {
        return Err(Error::Domain("H is singular at t = 0".into()));
    }
    Ok(k_kernel(-t, alpha, &QuadratureSpec::with_tol(1e-13))? / t)
}

/// `H(t)` with the `u`-integral taken along the ray `arg u = phi`
/// (`|phi| < π/2`), plus `±2πi` times the residue at `u = it` when the ray and
/// the real axis enclose it. An independent continuation route for [`h_function`].
pub fn h_function_ray(t: C64, alpha: f64, phi: f64) -> Result<C64> {
    check_off_ray(t)?;
    if phi.abs() >= PI / 2.0 {
        return Err(Error::Domain("ray angle must satisfy |phi| < π/2".into()));
    }
    let dir = C64::from_polar(1.0, phi);
    let g = |u: C64| (u - I * t * (1.0 - (-alpha * u).exp())) / (((u).exp() - 1.0) * (u - I * t)) / t;
    let f = |r: f64| {
        if r <= 0.0 {
            return dir * (1.0 + I * alpha * t) / (-I * t) / t;
        }
        g(r * dir) * dir
    };
    let spec = QuadratureSpec {
        decay_hint: phi.cos(),
        ..QuadratureSpec::with_tol(1e-13)
    };
    let ray = quad_semi_infinite(f, &spec)?.value;
    let pole = I * t;
    let beta = pole.arg();
    let residue = I * (-I * alpha * t).exp() / ((I * t).exp() - 1.0);
    let correction = if beta > 0.0 && beta < phi {
        2.0 * PI * I * residue
    } else if beta < 0.0 && beta > phi {
        -2.0 * PI * I * residue
    } else {
        C64::new(0.0, 0.0)
    };
    Ok(ray + correction)
}

/// Argument-convention logarithm: `arg ∈ (−π/2, 3π/2)`.
pub fn log_sector(t: C64) -> C64 {
    let mut a = t.arg();
    if a <= -PI / 2.0 {
        a += 2.0 * PI;
    }
    C64::new(t.norm().ln(), a)
}

fn i_integrand(u: f64, t: C64, parity: f64) -> C64 {
    let c = 0.25 * (1.0 + parity);
    // u e^{cu}/(e^u − 1) = u e^{(c−1)u}/(1 − e^{−u}).
    let w = if u <= 0.0 {
        1.0
    } else {
        u * ((c - 1.0) * u).exp() / (-(-u).exp_m1())
    };
    w * (0.5 * u * (0.5 * t).cos() - t * (0.5 * t).sin()) / (u * u + 4.0 * t * t) / t
}

/// `I(t) = (1/t) ∫_0^∞ u e^{(1+χ(−1))u/4}(u/2·cos(t/2) − t sin(t/2)) / ((e^u−1)(u²+4t²)) du`
/// for `Re t > 0`, continued to `C ∖ iR_{≤0}` through the upper half-plane:
/// for `Re t < 0`, `I(t) = (direct integral) − πi e^{−χ(−1)it/2}/(2 sin t)`.
pub fn i_function(parity: i32, t: C64) -> Result<C64> {
    check_off_ray(t)?;
    let par = parity_value(parity)?;
    if t.norm() < 1e-12 {
        return Err(Error::Domain("I is singular at t = 0".into()));
    }
    if t.re == 0.0 {
        // On iR>0 the direct integral has its pole on the path; use the ray route.
        return i_function_ray(parity, t, 0.45 * PI);
    }
    let spec = QuadratureSpec {
        decay_hint: 0.5,
        ..QuadratureSpec::with_tol(1e-13)
    };
    let direct = quad_semi_infinite(|u| i_integrand(u, t, par), &spec)?.value;
    if t.re > 0.0 {
        Ok(direct)
    } else {
        Ok(direct - PI * I * (-I * par * 0.5 * t).exp() / (2.0 * t.sin()))
    }
}

/// `I(t)` with the integral along the ray `arg u = phi ∈ [0, π/2)`, valid (as
/// the continuation of [`i_function`]) when the pole `u = −2it` lies below the
/// ray and `u = 2it` does not lie between the ray and the positive axis.
pub fn i_function_ray(parity: i32, t: C64, phi: f64) -> Result<C64> {
    let par = parity_value(parity)?;
    if !(0.0..PI / 2.0).contains(&phi) {
        return Err(Error::Domain("ray angle must lie in [0, π/2)".into()));
    }
    let dir = C64::from_polar(1.0, phi);
    let c = 0.25 * (1.0 + par);
    let g = |u: C64| {
        u * (c * u).exp() / (u.exp() - 1.0) * (0.5 * u * (0.5 * t).cos() - t * (0.5 * t).sin())
            / (u * u + 4.0 * t * t)
            / t
    };
    let f = |r: f64| {
        if r <= 0.0 {
            return dir * (-(0.5 * t).sin()) / (4.0 * t);
        }
        g(r * dir) * dir
    };
    let spec = QuadratureSpec {
        decay_hint: ((1.0 - c) * phi.cos()).max(0.05),
        ..QuadratureSpec::with_tol(1e-13)
    };
    Ok(quad_semi_infinite(f, &spec)?.value)
}

/// `J(t) = I(t) + log t/(4 sin(t/2))` with `arg t ∈ (−π/2, 3π/2)`.
pub fn j_function(parity: i32, t: C64) -> Result<C64> {
    Ok(i_function(parity, t)? + log_sector(t) / (4.0 * (0.5 * t).sin()))
}

/// The closed form of `J(t) + J(−t)`:
/// `−πi e^{−χ(−1)it/2}/(2 sin t) + iπ/(4 sin(t/2))` for `Re t < 0`, and the
/// image under `t ↦ −t` for `Re t > 0`.
pub fn j_reflection(parity: i32, t: C64) -> Result<C64> {
    let par = parity_value(parity)?;
    let u = if t.re < 0.0 { t } else { -t };
    Ok(-PI * I * (-I * par * 0.5 * u).exp() / (2.0 * u.sin()) + I * PI / (4.0 * (0.5 * u).sin()))
}

fn parity_value(parity: i32) -> Result<f64> {
    match parity {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::Input(format!("parity must be ±1, got {parity}"))),
    }
}

/// Partial zero sum `Σ_{0<γ≤T} e^{−γt}` with a tail bound for `γ > T`.
///
/// The bound integrates `e^{−σγ}` against the counting function:
/// `e^{−σT}(N'(T)/σ + 1/(2πσ²T) + 2)`, `σ = Re t`.
pub fn l_zero_sum(chi: &DirichletCharacter, t: C64, zeros: &ZeroList, height: f64) -> Result<(C64, f64)> {
    if t.re <= 0.0 {
        return Err(Error::Domain(format!(
            "zero sum needs Re t > 0 (got {t}); use l_explicit"
        )));
    }
    let h = height.min(zeros.complete_to);
    let mut acc = ComplexSum::new();
    for &g in zeros.ordinates.iter().take_while(|&&g| g <= h) {
        acc.add((-g * t).exp());
    }
    let sigma = t.re;
    let tail = (-sigma * h).exp() * (zero_density(chi, h) / sigma + 1.0 / (2.0 * PI * sigma * sigma * h) + 2.0);
    Ok((acc.value(), tail))
}

/// `l_χ(t)` by the explicit formulas (right half-plane form for `Re t > 0`,
/// reflected form elsewhere).
pub fn l_explicit(chi: &DirichletCharacter, t: C64, params: &CramerEvalParams) -> Result<C64> {
    CramerSeries::new(chi, params)?.eval(t, Representation::Auto)
}

/// `(1/2πi)∮ l_χ(t) dt` on the circle of the given radius around `i·m·log p`,
/// with `l_χ` from the reflected representation.
pub fn pole_residue_probe(
    chi: &DirichletCharacter,
    p: u64,
    m: u32,
    radius: f64,
    params: &CramerEvalParams,
) -> Result<C64> {
    let series = CramerSeries::new(chi, params)?;
    series_residue_probe(&series, p, m, radius)
}

/// [`pole_residue_probe`] on a prepared series.
pub fn series_residue_probe(series: &CramerSeries, p: u64, m: u32, radius: f64) -> Result<C64> {
    let centre = C64::new(0.0, m as f64 * (p as f64).ln());
    if radius <= 0.0 || radius >= 0.5 * centre.im.min(1.0) {
        return Err(Error::Domain(format!(
            "radius {radius} does not isolate the pole at {centre}"
        )));
    }
    let spec = QuadratureSpec {
        max_refinements: 10,
        ..QuadratureSpec::with_tol(1e-11)
    };
    let r = quad_circle(
        |t| {
            series
                .eval(t, Representation::Reflected)
                .unwrap_or(C64::new(f64::NAN, f64::NAN))
        },
        centre,
        radius,
        &spec,
    )?;
    if !r.value.re.is_finite() {
        return Err(Error::Accuracy("residue probe hit an evaluation failure".into()));
    }
    Ok(r.value / (2.0 * PI * I))
}

/// The residue of `l_χ` at `t = i m log p` read off the reflected formula:
/// `−(log p/2π) χ̄(p^m) p^{−m/2}`.
pub fn pole_residue_formula(chi: &DirichletCharacter, p: u64, m: u32) -> C64 {
    let pm = (p as f64).powi(m as i32);
    -((p as f64).ln() / (2.0 * PI)) * chi.value(pm as u64).conj() / pm.sqrt()
}
