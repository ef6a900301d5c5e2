//! The ten Euler-product series `E_1 … E_10` of the absolute tensor square of
//! two Dirichlet L-functions, at general `w` and at `w = 0`, and the
//! tensor-square evaluator `exp Σ_k E_k(0, s)`.
//!
//! # Construction
//!
//! `Σ_k E_k(w, s, {χ_j})` is the sum over prime powers of the residues
//!
//! ```text
//! Σ_k E_k(w, s, {χ_j}) = 2πi e^{−πiw/2} Σ_{p,m} Res_{t = i m log p} e^{i(s−1)t} l_{χ̄1}(t) l_{χ̄2}(t) t^{w−1}.
//! ```
//!
//! Near `t₀ = i x`, `x = m log p`, each factor is `l_{χ̄b}(t) = A_b/(t − t₀) + B_b(t)`
//! with `A_b = −(log p/2π) χ_b(p^m) p^{−m/2}`, so the residue is
//! `A₁A₂ g'(t₀) + g(t₀)(A₁B₂(t₀) + A₂B₁(t₀))` for `g = e^{i(s−1)t} t^{w−1}`.
//! The regular part `B_b(t₀)` is read off the reflected explicit formula for
//! `l` (see [`crate::cramer`]) block by block; each block, weighted by
//! `W_a = −χ_a(p^m) log p · p^{−m(s−1/2)} x^{w−1}` and summed over `(a, b)`,
//! gives one series:
//!
//! | term | block of `B_b(i x)` |
//! |------|---------------------|
//! | `E_1` | `A₁A₂ g'/g` and the regular part of the pole's own prime term |
//! | `E_2` | the first prime sum without the pole term, `Φ_b(x) = Σ_{q^n ≠ p^m} χ_b(q^n) q^{−n}/(n(x − n log q))` |
//! | `E_3` | the second prime sum `Ψ_b(x) = Σ χ̄_b(q^n) q^{−n(1+α)}/(n(x + n log q))` |
//! | `E_4` | the `n`-ladder `Σ_n (χ_b(−1)e^{−iαπ})^n/(n(nπ − ix))` |
//! | `E_5` | `−e^{χ_b(−1)x/2}/(2 sinh x)` |
//! | `E_6` | the contour integral `∫_S e^{ux} log L(u, χ_b) du` |
//! | `E_7` | the branch constant, `γ + log(2π/N_b) − πi/2` and the kernel `K` |
//! | `E_8`, `E_9`, `E_10` | the exceptional-zero terms `μ(τ⁰)e^{±τ⁰x}`, `μ(0)` |
//!
//! Individual terms depend on `α` and `ε`; their sum does not, slice by slice.
//!
//! # Accuracy
//!
//! Outer sums run over `p^m ≤ P` with a tail estimate. The inner sums of `E_3`
//! and the contour of `E_6` are exact (fixed quadrature rules on precomputed
//! `log L` samples). The inner sum of `E_2` is truncated at a level `Q` chosen
//! from the weight of the outer term, with an exact Laplace-integral
//! remainder when `3x ≤ log Q`. At `w = 0` the prime sum inside `E_6` is
//! replaced by `−L'/L`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::characters::{conjugate, DirichletCharacter};
use crate::cramer::{k_kernel, ladder_sum, CramerEvalParams, CramerSeries, HalfEllipse, HalfPlaneData, Representation};
use crate::lfunctions::{l_value, mu_data, neg_log_derivative};
use crate::primesums::{prefix, prime_powers_cached, tail_estimate, PrimePowerTerm};
use crate::special::{euler_gamma, gamma, gauss_legendre, quad_circle, ParametricPath, QuadratureSpec};
use crate::sum::ComplexSum;
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Number of series in the expansion.
pub const TERM_COUNT: usize = 10;

/// The half-ellipse `S: φ ↦ (1+α)/2 cos φ + iε sin φ + (1−α)/2`, `φ` from `π`
/// to `0`, with composite Gauss–Legendre nodes in `φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: f64,
    pub semi_real: f64,
    pub semi_imag: f64,
    /// Nodes `φ_k ∈ (0, π)`.
    pub phi: Vec<f64>,
    /// Weights for `∫_0^π … dφ`.
    pub weights: Vec<f64>,
}

impl ContourSpec {
    /// Contour for `α ∈ (0, 1)` and height `ε > 0` with `panels × per_panel` nodes.
    pub fn new(alpha: f64, epsilon: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(epsilon > 0.0) || panels == 0 || per_panel == 0 {
            return Err(Error::Params(format!(
                "invalid contour alpha = {alpha}, epsilon = {epsilon}"
            )));
        }
        let e = HalfEllipse::new(alpha, epsilon);
        let (x, w) = gauss_legendre(per_panel);
        let h = PI / panels as f64;
        let mut phi = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for k in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                phi.push(h * (k as f64 + 0.5 * (xi + 1.0)));
                weights.push(0.5 * h * wi);
            }
        }
        Ok(ContourSpec {
            center: e.center,
            semi_real: e.semi_real,
            semi_imag: e.semi_imag,
            phi,
            weights,
        })
    }

    /// The point at angle `φ`.
    pub fn point(&self, phi: f64) -> C64 {
        C64::new(self.center + self.semi_real * phi.cos(), self.semi_imag * phi.sin())
    }

    /// `(point(π), point(0)) = (−α, 1)`.
    pub fn endpoints(&self) -> (C64, C64) {
        (self.point(PI), self.point(0.0))
    }

    /// `∫_{S(π→0)} f(u) du` by the stored rule.
    pub fn integrate<F: Fn(C64) -> C64>(&self, f: F) -> C64 {
        let path = HalfEllipse {
            center: self.center,
            semi_real: self.semi_real,
            semi_imag: self.semi_imag,
        };
        let mut acc = ComplexSum::new();
        for (&phi, &w) in self.phi.iter().zip(&self.weights) {
            // τ = φ/π runs 1 → 0 for φ: π → 0; du = −path'(τ) dτ = −path'(τ) dφ/π.
            let tau = phi / PI;
            acc.add(-f(path.point(tau)) * path.derivative(tau) * (w / PI));
        }
        acc.value()
    }
}

/// Parameters for the two-character expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorEvalParams {
    pub chi1: CramerEvalParams,
    pub chi2: CramerEvalParams,
    /// Shared `α`.
    pub alpha: f64,
    /// `ε^(2) = min(ε₁, ε₂)`: height of the contour.
    pub epsilon: f64,
    /// `θ^(2) = min(θ₁, θ₂)`.
    pub theta: f64,
    /// `τ₂^(0)`: the larger exceptional abscissa of the two characters.
    pub tau0: f64,
    /// Outer prime limit `P`.
    pub prime_limit: u64,
    /// Largest inner truncation level `Q` of the `E_2` inner sum.
    pub inner_limit: u64,
    pub zero_height: f64,
    pub quad: QuadratureSpec,
}

impl TensorEvalParams {
    /// Combine per-character parameters: `α` from the first, minima of `ε`, `θ`,
    /// maximum of the exceptional abscissae.
    pub fn combine(p1: &CramerEvalParams, p2: &CramerEvalParams, tau0_1: f64, tau0_2: f64) -> Self {
        TensorEvalParams {
            chi1: *p1,
            chi2: *p2,
            alpha: p1.alpha,
            epsilon: p1.epsilon.min(p2.epsilon),
            theta: p1.theta.min(p2.theta),
            tau0: tau0_1.max(tau0_2),
            prime_limit: p1.prime_limit.min(p2.prime_limit),
            inner_limit: 1_000_000,
            zero_height: p1.zero_height.min(p2.zero_height),
            quad: p1.quad,
        }
    }

    /// Defaults for a pair of characters: `α = 1/2`, `ε = 1`, `θ = atan(ε)/2`,
    /// `P = 10⁵`, `τ^(0)` from [`mu_data`].
    pub fn for_characters(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<Self> {
        let base = CramerEvalParams {
            prime_limit: 100_000,
            ..CramerEvalParams::default()
        };
        let t1 = mu_data(chi1, 1e-10)?.2;
        let t2 = mu_data(chi2, 1e-10)?.2;
        Ok(Self::combine(&base, &base, t1, t2))
    }

    /// Replace `α` everywhere.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.chi1.alpha = alpha;
        self.chi2.alpha = alpha;
        self
    }

    /// Replace the contour height `ε^(2)` (and the per-character heights).
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self.chi1.epsilon = epsilon;
        self.chi2.epsilon = epsilon;
        self
    }

    pub fn with_prime_limit(mut self, limit: u64) -> Self {
        self.prime_limit = limit;
        self.chi1.prime_limit = limit;
        self.chi2.prime_limit = limit;
        self
    }

    /// Check `0 < α < 1`, `0 < θ < π/4`, `tan θ < ε < min τ^(1)`, limits ≥ 2.
    pub fn validate(&self, tau1_min: f64) -> Result<()> {
        let joint = CramerEvalParams {
            alpha: self.alpha,
            epsilon: self.epsilon,
            theta: self.theta,
            zero_height: self.zero_height,
            prime_limit: self.prime_limit,
            ..self.chi1
        };
        joint.validate(tau1_min)?;
        if self.inner_limit < 1000 {
            return Err(Error::Params("inner limit must be at least 1000".into()));
        }
        Ok(())
    }
}

/// All ten terms with per-term truncation estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorTerms {
    pub w: C64,
    pub s: C64,
    pub terms: [C64; TERM_COUNT],
    pub errors: [f64; TERM_COUNT],
}

impl TensorTerms {
    /// Compensated `Σ_k E_k`.
    pub fn sum(&self) -> C64 {
        let mut acc = ComplexSum::new();
        for t in &self.terms {
            acc.add(*t);
        }
        acc.value()
    }

    pub fn error(&self) -> f64 {
        self.errors.iter().sum()
    }
}

/// Value of `exp Σ_k E_k(0, s)` with its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorSquare {
    pub s: C64,
    pub value: C64,
    /// `Σ_k E_k(0, s)`.
    pub log_value: C64,
    pub per_term: [C64; TERM_COUNT],
    /// Estimated absolute error of `value`.
    pub error_estimate: f64,
    pub params: TensorEvalParams,
}

/// How the prime sum inside `E_6` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum E6Route {
    /// `Σ_{p^m ≤ P} χ_a(p^m) p^{−m(s−u)} (m log p)^w log p` at every contour node.
    PrimeSum,
    /// `−(L'/L)(s − u, χ_a)` (only for `w = 0`).
    LogDerivative,
}

/// Fixed-node rule for `∫_0^∞ e^{−xy} f(y) dy`, `x ≥ log 2`.
fn laplace_rule() -> Vec<(f64, f64)> {
    const BREAKS: [f64; 13] = [0.0, 0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4, 12.8, 25.6, 44.0];
    let (x, w) = gauss_legendre(20);
    let mut out = Vec::new();
    for k in 0..BREAKS.len() - 1 {
        let (a, b) = (BREAKS[k], BREAKS[k + 1]);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((a + 0.5 * (b - a) * (xi + 1.0), 0.5 * (b - a) * wi));
        }
    }
    out
}

/// Inner-sum data of one prime power of the `E_2` inner sum.
#[derive(Debug, Clone, Copy)]
struct InnerTerm {
    value: u64,
    mlogq: f64,
    coeff: C64,
}

/// Remainder table `R_Q(y) = log L(1+y, χ) − Σ_{q^n ≤ Q} χ(q^n) q^{−n(1+y)}/n`
/// on a fixed rule over `[0, 4.5]`, for the exact `E_2` inner remainder
/// `−∫_0^∞ e^{xy} R_Q(y) dy` (used when `3x ≤ log Q`).
#[derive(Debug, Clone)]
struct InnerRemainder {
    nodes: Vec<(f64, f64, C64)>,
}

/// Per-character data (the character in the role of `χ_b`).
#[derive(Debug, Clone)]
struct CharBlock {
    chi: DirichletCharacter,
    parity: f64,
    half: HalfPlaneData,
    /// `(y, weight, log L(1+α+y, χ̄))` for the second prime sum.
    psi_rule: Vec<(f64, f64, C64)>,
    /// Prime powers up to the inner limit with `χ ≠ 0`.
    inner: Vec<InnerTerm>,
    /// Truncation levels `Q` and the size `|R_Q(0)|` of the remainder there.
    levels: Vec<(u64, f64)>,
    remainder: OnceLock<Result<InnerRemainder>>,
    mu0: f64,
    mu_tau0: f64,
    tau0: f64,
}

impl CharBlock {
    fn new(chi: &DirichletCharacter, params: &TensorEvalParams) -> Result<Self> {
        let alpha = params.alpha;
        let half = HalfPlaneData::new(chi, alpha, params.epsilon)?;
        let chibar = conjugate(chi);
        let psi_rule = laplace_rule()
            .into_iter()
            .map(|(y, w)| Ok((y, w, l_value(&chibar, C64::new(1.0 + alpha + y, 0.0))?.ln())))
            .collect::<Result<Vec<_>>>()?;
        let list = prime_powers_cached(params.inner_limit);
        let inner: Vec<InnerTerm> = prefix(&list, params.inner_limit)
            .iter()
            .filter_map(|t| {
                let c = chi.value(t.value);
                (c.norm_sqr() != 0.0).then(|| InnerTerm {
                    value: t.value,
                    mlogq: t.mlogp,
                    coeff: c / (t.value as f64 * t.m as f64),
                })
            })
            .collect();
        let log_l1 = l_value(chi, C64::new(1.0, 0.0))?.ln();
        let mut levels = Vec::new();
        for q in [params.inner_limit / 100, params.inner_limit / 10, params.inner_limit] {
            let mut acc = ComplexSum::new();
            acc.add(log_l1);
            for t in inner.iter().take_while(|t| t.value <= q) {
                acc.add(-t.coeff);
            }
            levels.push((q, acc.value().norm()));
        }
        // The reflected formula for l_{χ̄} carries the exceptional data of χ̄.
        let (mu0, mu_tau0, tau0) = mu_data(&chibar, 1e-10)?;
        Ok(CharBlock {
            chi: chi.clone(),
            parity: chi.parity_f64(),
            half,
            psi_rule,
            inner,
            levels,
            remainder: OnceLock::new(),
            mu0: mu0 as f64,
            mu_tau0: mu_tau0 as f64,
            tau0,
        })
    }

    fn remainder_table(&self, q: u64) -> Result<&InnerRemainder> {
        self.remainder
            .get_or_init(|| {
                let (x, w) = gauss_legendre(16);
                let (panels, top) = (24usize, 4.5);
                let h = top / panels as f64;
                let mut nodes = Vec::with_capacity(panels * 16);
                let head: Vec<&InnerTerm> = self.inner.iter().take_while(|t| t.value <= q).collect();
                for k in 0..panels {
                    for (xi, wi) in x.iter().zip(&w) {
                        let y = h * (k as f64 + 0.5 * (xi + 1.0));
                        let mut acc = ComplexSum::new();
                        acc.add(l_value(&self.chi, C64::new(1.0 + y, 0.0))?.ln());
                        for t in &head {
                            acc.add(-t.coeff * (-y * t.mlogq).exp());
                        }
                        nodes.push((y, 0.5 * h * wi, acc.value()));
                    }
                }
                Ok(InnerRemainder { nodes })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// `Φ(x) = Σ_{q^n ≠ p^m} χ(q^n) q^{−n}/(n(x − n log q))` with its error estimate.
    /// `weight` is the size of the factor multiplying `Φ` (selects the level).
    fn phi_inner(&self, x: f64, exclude: u64, weight: f64) -> Result<(C64, f64)> {
        let top = *self.levels.last().expect("levels");
        let mut chosen = top;
        for &(q, r0) in &self.levels {
            let rate = (q as f64).ln() - x;
            if rate > 1.0 && weight * 2.0 * r0 / rate < 1e-14 {
                chosen = (q, r0);
                break;
            }
        }
        let (q, r0) = chosen;
        let mut acc = ComplexSum::new();
        for t in self.inner.iter().take_while(|t| t.value <= q) {
            if t.value != exclude {
                acc.add(t.coeff / (x - t.mlogq));
            }
        }
        let log_q = (q as f64).ln();
        if q == top.0 && 3.0 * x <= log_q {
            let table = self.remainder_table(q)?;
            let mut corr = ComplexSum::new();
            for &(y, w, r) in &table.nodes {
                corr.add(-(x * y).exp() * r * w);
            }
            // Neglected beyond y = 4.5 and rounding amplified by e^{xy}.
            let err = (-(log_q - x) * 4.5).exp() + 1e-16 * (4.5 * x).exp();
            return Ok((acc.value() + corr.value(), err));
        }
        Ok((acc.value(), 2.0 * r0 / (log_q - x).max(0.5)))
    }

    /// `Ψ(x) = Σ χ̄(q^n) q^{−n(1+α)}/(n(x + n log q)) = ∫_0^∞ e^{−xy} log L(1+α+y, χ̄) dy`.
    fn psi_inner(&self, x: f64) -> C64 {
        let mut acc = ComplexSum::new();
        for &(y, w, l) in &self.psi_rule {
            acc.add((-x * y).exp() * w * l);
        }
        acc.value()
    }
}

/// The blocks of `B_b(ix)` (regular part of `l_{χ̄b}` at `ix`, without the
/// pole's own prime term), indexed like the terms (slot 0 unused).
fn regular_blocks(
    block: &CharBlock,
    x: f64,
    exclude: u64,
    phi_weight: f64,
    params: &TensorEvalParams,
    with_contour: bool,
) -> Result<([C64; TERM_COUNT], f64)> {
    let alpha = params.alpha;
    let mut out = [C64::new(0.0, 0.0); TERM_COUNT];
    let t = C64::new(0.0, -x); // −t₀: the argument of F(χ_b, ·)
    let damp = (-(alpha + 0.5) * x).exp() / (2.0 * PI);
    let (phi, phi_err) = block.phi_inner(x, exclude, phi_weight)?;
    out[1] = I * x / (2.0 * PI) * (0.5 * x).exp() * phi;
    out[2] = -damp * (I * x * block.psi_inner(x));
    out[3] = damp * x * ladder_sum(block.half.ladder_ratio, t, &params.quad)?;
    out[4] = C64::new(-(0.5 * block.parity * x).exp() / (2.0 * x.sinh()), 0.0);
    if with_contour {
        out[5] = -I * x / (2.0 * PI) * (-0.5 * x).exp() * block.half.contour.laplace(t, 1.0);
    }
    let gamma_block = C64::new(euler_gamma() + block.half.log_conductor_ratio, 0.0) - I * (0.5 * PI);
    let k = k_kernel(t, alpha, &params.quad)?;
    out[6] = -damp * (I * block.half.constant - 0.5 * (1.0 + alpha) * PI - (I / x) * gamma_block + (I / x) * k);
    out[7] = C64::new(-block.mu_tau0 * (block.tau0 * x).exp(), 0.0);
    out[8] = C64::new(-block.mu_tau0 * (-block.tau0 * x).exp(), 0.0);
    out[9] = C64::new(-block.mu0, 0.0);
    let phi_err = (x / (2.0 * PI) * (0.5 * x).exp()) * phi_err;
    Ok((out, phi_err))
}

/// Prepared evaluator of the ten series for an ordered pair of characters.
#[derive(Debug, Clone)]
pub struct TensorEvaluator {
    pub params: TensorEvalParams,
    blocks: [CharBlock; 2],
}

impl TensorEvaluator {
    pub fn new(chi1: &DirichletCharacter, chi2: &DirichletCharacter, params: &TensorEvalParams) -> Result<Self> {
        for chi in [chi1, chi2] {
            if !chi.primitive || chi.is_principal() {
                return Err(Error::Domain(format!(
                    "{} is not a nonprincipal primitive character",
                    chi.label()
                )));
            }
        }
        if !(params.alpha > 0.0 && params.alpha < 1.0) || !(params.epsilon > 0.0) || params.prime_limit < 2 {
            return Err(Error::Params(format!(
                "invalid alpha/epsilon/prime limit {}/{}/{}",
                params.alpha, params.epsilon, params.prime_limit
            )));
        }
        Ok(TensorEvaluator {
            params: *params,
            blocks: [CharBlock::new(chi1, params)?, CharBlock::new(chi2, params)?],
        })
    }

    pub fn characters(&self) -> (&DirichletCharacter, &DirichletCharacter) {
        (&self.blocks[0].chi, &self.blocks[1].chi)
    }

    /// The `(p, m)` slice of every term, with the error estimate of the slice.
    pub fn slice(&self, term: &PrimePowerTerm, w: C64, s: C64) -> Result<([C64; TERM_COUNT], f64)> {
        self.slice_with(term, w, s, true)
    }

    fn slice_with(
        &self,
        term: &PrimePowerTerm,
        w: C64,
        s: C64,
        with_contour: bool,
    ) -> Result<([C64; TERM_COUNT], f64)> {
        let x = term.mlogp;
        let log_p = term.log_p;
        let value = term.value;
        let c = [self.blocks[0].chi.value(value), self.blocks[1].chi.value(value)];
        let mut out = [C64::new(0.0, 0.0); TERM_COUNT];
        if c[0].norm_sqr() == 0.0 && c[1].norm_sqr() == 0.0 {
            return Ok((out, 0.0));
        }
        // x^{w−1} p^{−m(s−1/2)}
        let base = ((w - 1.0) * x.ln() - (s - 0.5) * x).exp();
        let pm_half = (-0.5 * x).exp();
        // E_1: pole × pole and the pole term's own regular part.
        let a = [
            -(log_p / (2.0 * PI)) * c[0] * pm_half,
            -(log_p / (2.0 * PI)) * c[1] * pm_half,
        ];
        let own = [
            I / (2.0 * PI) * c[0] * pm_half * (1.0 + 0.5 * x) / term.m as f64,
            I / (2.0 * PI) * c[1] * pm_half * (1.0 + 0.5 * x) / term.m as f64,
        ];
        let pref = 2.0 * PI * ((w - 1.0) * x.ln() - (s - 1.0) * x).exp();
        out[0] = pref * (a[0] * a[1] * I * ((s - 1.0) - (w - 1.0) / x) + a[0] * own[1] + a[1] * own[0]);
        let mut err = 0.0;
        for (ia, ib) in [(0usize, 1usize), (1, 0)] {
            if c[ia].norm_sqr() == 0.0 {
                continue;
            }
            let wa = -c[ia] * log_p * base;
            let phi_weight = wa.norm() * x * (0.5 * x).exp() / (2.0 * PI);
            let (blocks, phi_err) = regular_blocks(&self.blocks[ib], x, value, phi_weight, &self.params, with_contour)?;
            for k in 1..TERM_COUNT {
                out[k] += wa * blocks[k];
            }
            err += wa.norm() * phi_err;
        }
        Ok((out, err))
    }

    /// All ten terms `E_k(w, s)` summed over `p^m ≤ P`.
    pub fn terms(&self, w: C64, s: C64) -> Result<TensorTerms> {
        let route = if w.norm() == 0.0 {
            E6Route::LogDerivative
        } else {
            E6Route::PrimeSum
        };
        self.terms_with(w, s, route)
    }

    /// As [`terms`](Self::terms) with an explicit `E_6` route.
    pub fn terms_with(&self, w: C64, s: C64, route: E6Route) -> Result<TensorTerms> {
        if s.re <= 2.0 {
            return Err(Error::Domain(format!(
                "the Euler-product expansion needs Re(s) > 2, got s = {s}"
            )));
        }
        if route == E6Route::LogDerivative && w.norm() != 0.0 {
            return Err(Error::Domain("the −L'/L route of E_6 applies at w = 0 only".into()));
        }
        let limit = self.params.prime_limit;
        let list = prime_powers_cached(limit);
        let mut acc = [ComplexSum::new(); TERM_COUNT];
        let mut inner_err = 0.0;
        for term in prefix(&list, limit) {
            let (sl, e) = self.slice_with(term, w, s, false)?;
            for (a, v) in acc.iter_mut().zip(sl) {
                a.add(v);
            }
            inner_err += e;
        }
        let mut terms = [C64::new(0.0, 0.0); TERM_COUNT];
        for (t, a) in terms.iter_mut().zip(&acc) {
            *t = a.value();
        }
        let (e6, e6_err) = self.e6(w, s, route)?;
        terms[5] = e6;
        let errors = self.tail_errors(w, s, inner_err, e6_err);
        Ok(TensorTerms { w, s, terms, errors })
    }

    /// `E_6(w, s) = (i/2π) Σ_{(a,b)} ∫_{S(π→0)} D_a(s − u) log L(u, χ_b) du` with
    /// `D_a(z) = Σ χ_a(p^m) p^{−mz} (m log p)^w log p`.
    pub fn e6(&self, w: C64, s: C64, route: E6Route) -> Result<(C64, f64)> {
        let limit = self.params.prime_limit;
        let list = prime_powers_cached(limit);
        let terms = prefix(&list, limit);
        let mut total = ComplexSum::new();
        let mut err = 0.0;
        for (ia, ib) in [(0usize, 1usize), (1, 0)] {
            let chi_a = &self.blocks[ia].chi;
            let contour = &self.blocks[ib].half.contour;
            for ((u, du), l) in contour.nodes.iter().zip(&contour.weights).zip(&contour.log_l) {
                let z = s - u;
                let d = match route {
                    E6Route::LogDerivative => neg_log_derivative(chi_a, z)?,
                    E6Route::PrimeSum => {
                        let mut a = ComplexSum::new();
                        for t in terms {
                            let c = chi_a.value(t.value);
                            if c.norm_sqr() != 0.0 {
                                a.add(c * (w * t.mlogp.ln() - z * t.mlogp).exp() * t.log_p);
                            }
                        }
                        err += (l * du).norm() * tail_estimate(z, w + 1.0, limit) / (2.0 * PI);
                        a.value()
                    }
                };
                total.add(I / (2.0 * PI) * d * l * du);
            }
        }
        Ok((total.value(), err + 1e-14 * total.value().norm()))
    }

    fn tail_errors(&self, w: C64, s: C64, inner_err: f64, e6_err: f64) -> [f64; TERM_COUNT] {
        let p = self.params.prime_limit;
        let alpha = self.params.alpha;
        let lp = (p as f64).ln();
        let tail = |shift: f64, wshift: f64| tail_estimate(s + shift, w + wshift, p);
        let w1 = C64::new(1.0, 0.0);
        let mut e = [0.0; TERM_COUNT];
        // Outer tails: each term's summand relative to p^{−ms}(m log p)^{w−1} log p.
        e[0] = tail(0.0, 1.0) * ((s - 2.0).norm() + (w + w1).norm() + 1.0) / (2.0 * PI);
        // |Φ| ≲ log of the distance to the nearest prime power; use log P as a bound.
        e[1] = tail(-1.0, 1.0) * 2.0 * lp / (2.0 * PI) + inner_err;
        e[2] = tail(alpha, 1.0) * 2.0 / (2.0 * PI);
        e[3] = tail(alpha, 1.0) * 2.0 / (2.0 * PI);
        e[4] = 2.0 * tail(0.5 - 1.0, 0.0);
        e[5] = e6_err;
        e[6] =
            tail(alpha, 0.0) * 2.0 * (self.blocks[0].half.constant.norm() + self.blocks[1].half.constant.norm() + 5.0);
        let tau0 = self.params.tau0;
        let mu_a = self.blocks[0].mu_tau0.abs() + self.blocks[1].mu_tau0.abs();
        let mu_b = self.blocks[0].mu0.abs() + self.blocks[1].mu0.abs();
        if mu_a > 0.0 {
            e[7] = mu_a * tail(-0.5 - tau0, 0.0);
            e[8] = mu_a * tail(-0.5 + tau0, 0.0);
        }
        if mu_b > 0.0 {
            e[9] = mu_b * tail(-0.5, 0.0);
        }
        for v in e.iter_mut() {
            if !v.is_finite() {
                *v = f64::INFINITY;
            }
        }
        e
    }

    /// `exp Σ_k E_k(0, s)`.
    pub fn tensor_square(&self, s: C64) -> Result<TensorSquare> {
        let t = self.terms(C64::new(0.0, 0.0), s)?;
        let log_value = t.sum();
        let value = log_value.exp();
        let err = t.error();
        Ok(TensorSquare {
            s,
            value,
            log_value,
            per_term: t.terms,
            error_estimate: value.norm() * (err.exp() - 1.0).abs(),
            params: self.params,
        })
    }
}

/// `E_k(w, s, {χ₁, χ₂})`, `k = 1 … 10`.
pub fn e_term(
    k: usize,
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
) -> Result<C64> {
    if !(1..=TERM_COUNT).contains(&k) {
        return Err(Error::Input(format!("term index must be 1..=10, got {k}")));
    }
    Ok(TensorEvaluator::new(chi1, chi2, params)?.terms(w, s)?.terms[k - 1])
}

/// `(L_{χ1} ⊗ L_{χ2})(s) = exp Σ_k E_k(0, s)` for `Re(s) > 2`.
pub fn tensor_square(
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
) -> Result<TensorSquare> {
    TensorEvaluator::new(chi1, chi2, params)?.tensor_square(s)
}

/// The `(p, m)` residue slice in the normalization of the probe:
///
/// * `formula = (e^{πiw/2}/Γ(w)) · [(p, m) slice of Σ_k E_k(w, s, {χ̄₁, χ̄₂})]`;
/// * `probe = (2πi/Γ(w)) (1/2πi) ∮ e^{i(s−1)t} l_{χ1}(t) l_{χ2}(t) t^{w−1} dt`
///   on a circle of radius `radius` around `i m log p`, with `l` from the
///   reflected explicit formula.
pub fn residue_contribution(
    p: u64,
    m: u32,
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
) -> Result<(C64, C64)> {
    let x = m as f64 * (p as f64).ln();
    residue_contribution_radius(p, m, w, s, chi1, chi2, params, 0.25 * pole_gap(x).min(1.0))
}

/// Distance from `x = m log p` to `0` and to the nearest other `n log q`.
pub fn pole_gap(x: f64) -> f64 {
    let hi = (2.0 * x).exp().ceil().min(1e9) as u64;
    let list = prime_powers_cached(hi.max(4));
    let mut gap = x;
    for t in list.iter() {
        let d = (t.mlogp - x).abs();
        if d > 1e-12 {
            gap = gap.min(d);
        }
    }
    gap
}

/// [`residue_contribution`] with an explicit probe radius.
#[allow(clippy::too_many_arguments)]
pub fn residue_contribution_radius(
    p: u64,
    m: u32,
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
    radius: f64,
) -> Result<(C64, C64)> {
    if !crate::characters::is_prime(p) || m == 0 {
        return Err(Error::Input(format!("({p}, {m}) is not a prime power index")));
    }
    let value = p
        .checked_pow(m)
        .ok_or_else(|| Error::Input("prime power overflows u64".into()))?;
    let log_p = (p as f64).ln();
    let x = m as f64 * log_p;
    if radius <= 0.0 || radius >= 0.5 * pole_gap(x).min(1.0) {
        return Err(Error::Domain(format!(
            "radius {radius} does not isolate the pole at i·{x}"
        )));
    }
    let gw = gamma(w)?;
    let (c1, c2) = (conjugate(chi1), conjugate(chi2));
    let term = PrimePowerTerm {
        p,
        m,
        value,
        log_p,
        mlogp: x,
    };
    let (slice, _) = TensorEvaluator::new(&c1, &c2, params)?.slice(&term, w, s)?;
    let mut acc = ComplexSum::new();
    for v in slice {
        acc.add(v);
    }
    let formula = (I * PI * 0.5 * w).exp() / gw * acc.value();

    let series1 = CramerSeries::new(chi1, &params.chi1.clone_with(params))?;
    let series2 = CramerSeries::new(chi2, &params.chi2.clone_with(params))?;
    let centre = C64::new(0.0, x);
    let spec = QuadratureSpec {
        max_refinements: 10,
        ..QuadratureSpec::with_tol(1e-11)
    };
    let r = quad_circle(
        |t| {
            let l1 = series1.eval(t, Representation::Reflected);
            let l2 = series2.eval(t, Representation::Reflected);
            match (l1, l2) {
                (Ok(a), Ok(b)) => (I * (s - 1.0) * t).exp() * a * b * ((w - 1.0) * t.ln()).exp(),
                _ => C64::new(f64::NAN, f64::NAN),
            }
        },
        centre,
        radius,
        &spec,
    )?;
    if !r.value.re.is_finite() {
        return Err(Error::Accuracy("residue probe hit an evaluation failure".into()));
    }
    let probe = r.value / gw;
    Ok((formula, probe))
}

trait WithShared {
    fn clone_with(&self, shared: &TensorEvalParams) -> CramerEvalParams;
}

impl WithShared for CramerEvalParams {
    /// The per-character parameters with the shared `α` and contour height.
    fn clone_with(&self, shared: &TensorEvalParams) -> CramerEvalParams {
        CramerEvalParams {
            alpha: shared.alpha,
            epsilon: shared.epsilon,
            ..*self
        }
    }
}

/// Alternate closed forms of `E_3` that differ from the regenerated term in the
/// inner character and log weight; kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum E3Variant {
    /// `(1/2π) Σ χ_a(p^m) χ̄_b(q^n) p^{−m(s+α)} q^{−n(1+α)} (m log p)^w log p / (n(m log p + n log q))`.
    ConjugateInnerLogP,
    /// `(1/2π) Σ χ_a(p^m) χ_b(q^n) p^{−m(s+α)} q^{−n(1+α)} log q / (n(m log p + n log q))` (at `w = 0`).
    PlainInnerLogQ,
}

/// An alternate form of `E_3`, outer sum over `p^m ≤ P`, inner sum exact for
/// [`E3Variant::ConjugateInnerLogP`] and truncated at `P` for [`E3Variant::PlainInnerLogQ`].
pub fn e3_alternate(
    variant: E3Variant,
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
) -> Result<C64> {
    let ev = TensorEvaluator::new(chi1, chi2, params)?;
    let limit = params.prime_limit;
    let list = prime_powers_cached(limit);
    let terms = prefix(&list, limit);
    let alpha = params.alpha;
    let mut acc = ComplexSum::new();
    for (ia, ib) in [(0usize, 1usize), (1, 0)] {
        let chi_a = &ev.blocks[ia].chi;
        let chi_b = &ev.blocks[ib].chi;
        for t in terms {
            let c = chi_a.value(t.value);
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let outer = c * (-(s + alpha) * t.mlogp).exp();
            match variant {
                E3Variant::ConjugateInnerLogP => {
                    let inner = ev.blocks[ib].psi_inner(t.mlogp);
                    acc.add(outer * (w * t.mlogp.ln()).exp() * t.log_p * inner / (2.0 * PI));
                }
                E3Variant::PlainInnerLogQ => {
                    let mut inner = ComplexSum::new();
                    for q in terms {
                        let cb = chi_b.value(q.value);
                        if cb.norm_sqr() != 0.0 {
                            inner.add(
                                cb * (-(1.0 + alpha) * q.mlogp).exp() * q.log_p / (q.m as f64 * (t.mlogp + q.mlogp)),
                            );
                        }
                    }
                    acc.add(outer * inner.value() / (2.0 * PI));
                }
            }
        }
    }
    Ok(acc.value())
}
