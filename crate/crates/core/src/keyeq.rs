//! Zero side ↔ prime side identities for one L-function (`r = 1`) and for the
//! tensor square of two (`r = 2`), with region checks and tail accounting.
//!
//! * `r = 1`: `Σ_ρ (s − ρ)^{−w}` over all zeros (nontrivial, trivial ladder,
//!   exceptional) equals `−(1/Γ(w)) Σ χ(p^m) p^{−ms} (m log p)^{w−1} log p`.
//! * `r = 2`: the signed sum over `ρ₁ + ρ₂` (the doubly-lower block enters with a
//!   minus sign), the zero × trivial ladders, the double trivial ladder and the
//!   exceptional terms equals `−(1/Γ(w)) Σ_k E_k(w, s)` (see [`crate::tensor`]).
//!
//! Zeros with `Im ρ < 0` are the conjugates of the zeros of `L(s, χ̄)`.
//! Zero sums are truncated at the list height `T` and continued beyond it by
//! [`zero_tail_correction`] (nested once for the double sums).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::characters::{conjugate, DirichletCharacter};
use crate::cramer::CramerEvalParams;
use crate::lfunctions::{
    counting_remainder, find_zeros, log_l_second_derivative, mu_data, zero_density, zero_tail_correction, ZeroList,
};
use crate::primesums::{tail_estimate, von_mangoldt_sum};
use crate::special::{gamma, gauss_legendre, hurwitz_zeta};
use crate::sum::ComplexSum;
use crate::tensor::{TensorEvalParams, TensorEvaluator};
use crate::{Error, Result, C64};

/// The inequalities defining the admissible `(w, s)` region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    pub theta: f64,
    pub epsilon: f64,
    /// `τ_r^(0)`.
    pub tau0: f64,
}

impl RegionParams {
    pub fn from_cramer(p: &CramerEvalParams, tau0: f64) -> Self {
        RegionParams {
            theta: p.theta,
            epsilon: p.epsilon,
            tau0,
        }
    }

    pub fn from_tensor(p: &TensorEvalParams) -> Self {
        RegionParams {
            theta: p.theta,
            epsilon: p.epsilon,
            tau0: p.tau0,
        }
    }
}

/// `(r/2 + r τ⁰) tan θ < Re(s) tan θ − Im(s) < r tan θ`, `Re(s) > r(1 + ε)`, `Re(w) > r`.
pub fn region_check(w: C64, s: C64, r: u32, params: &RegionParams) -> bool {
    let r = r as f64;
    let t = params.theta.tan();
    let slant = s.re * t - s.im;
    (0.5 * r + r * params.tau0) * t < slant && slant < r * t && s.re > r * (1.0 + params.epsilon) && w.re > r
}

/// An angle `θ` and height `ε` placing `(w, s)` inside the region, if any:
/// `tan θ` is the geometric mean of the admissible window
/// `Im s/(Re s − r/2 − rτ⁰) < tan θ < Im s/(Re s − r)`, and
/// `ε = min(ε_max, (Re s/r − 1)/2)` must exceed `tan θ`.
pub fn admissible_angles(s: C64, r: u32, tau0: f64, epsilon_max: f64) -> Option<(f64, f64)> {
    let r = r as f64;
    let lo_den = s.re - 0.5 * r - r * tau0;
    let hi_den = s.re - r;
    if s.im <= 0.0 || lo_den <= 0.0 || hi_den <= 0.0 {
        return None;
    }
    let (lo, hi) = (s.im / lo_den, s.im / hi_den);
    let tan = (lo * hi).sqrt();
    let theta = tan.atan();
    let epsilon = epsilon_max.min(0.5 * (s.re / r - 1.0));
    (theta < PI / 4.0 && epsilon > tan).then_some((theta, epsilon))
}

/// Settings of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Relative tolerance on the residual.
    pub tol: f64,
    /// Allow `(w, s)` outside the stated region (both sides are analytic in `s`;
    /// results are labeled as continued).
    pub continued: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-3,
            continued: false,
        }
    }
}

/// Echo of the inputs of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub r: u32,
    pub labels: Vec<String>,
    pub w: C64,
    pub s: C64,
    pub alpha: f64,
    pub epsilon: f64,
    pub theta: f64,
    pub tau0: f64,
    pub zero_height: f64,
    pub prime_limit: u64,
    pub tol: f64,
    pub continued: bool,
    /// Whether `(w, s)` satisfies the region inequalities.
    pub in_region: bool,
}

/// Comparison of the two sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_residual: f64,
    /// `abs_residual / (|lhs| + |rhs|)`.
    pub rel_residual: f64,
    /// Estimated size of the zero-side truncation after tail correction.
    pub zero_tail: f64,
    /// Bound on the dropped prime-side tail.
    pub prime_tail: f64,
    pub quad_error: f64,
    pub params: ReportParams,
    /// `rel_residual < tol + (zero_tail + prime_tail + quad_error)/(|lhs| + |rhs|)`.
    pub pass: bool,
}

impl ResidualReport {
    fn new(lhs: C64, rhs: C64, zero_tail: f64, prime_tail: f64, quad_error: f64, params: ReportParams) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let scale = lhs.norm() + rhs.norm();
        let rel_residual = if scale > 0.0 { abs_residual / scale } else { 0.0 };
        let allowance = if scale > 0.0 {
            (zero_tail + prime_tail + quad_error) / scale
        } else {
            0.0
        };
        let pass = rel_residual.is_finite() && rel_residual < params.tol + allowance;
        ResidualReport {
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            zero_tail,
            prime_tail,
            quad_error,
            params,
            pass,
        }
    }

    /// One-line summary: `PASS`/`FAIL` with residual and tails.
    pub fn summary(&self) -> String {
        format!(
            "{} r={} rel_residual={:.3e} abs_residual={:.3e} zero_tail={:.3e} prime_tail={:.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.params.r,
            self.rel_residual,
            self.abs_residual,
            self.zero_tail,
            self.prime_tail,
            if self.params.in_region { "" } else { " (continued)" }
        )
    }
}

/// A truncated zero-side value with its tail uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroSideValue {
    pub value: C64,
    pub tail: f64,
}

/// `z^{−w}` with `arg z ∈ (−π/2, π/2)`.
fn power(z: C64, w: C64) -> Result<C64> {
    if z.re <= 0.0 {
        return Err(Error::Branch(format!("base {z} leaves the half-plane Re > 0")));
    }
    Ok((-w * z.ln()).exp())
}

/// `Σ_{n≥1} (z + 2n)^{−w} = 2^{−w} ζ(w, z/2 + 1)`.
fn ladder(w: C64, z: C64) -> Result<C64> {
    Ok((-w * 2f64.ln()).exp() * hurwitz_zeta(w, 0.5 * z + 1.0)?)
}

/// `Σ_{n₁,n₂≥1} (z + 2n₁ + 2n₂)^{−w} = 2^{−w}[ζ(w−1, 2+c) − (1+c) ζ(w, 2+c)]`, `c = z/2`.
pub fn double_ladder(w: C64, z: C64) -> Result<C64> {
    let c = 0.5 * z;
    Ok((-w * 2f64.ln()).exp() * (hurwitz_zeta(w - 1.0, c + 2.0)? - (c + 1.0) * hurwitz_zeta(w, c + 2.0)?))
}

/// Sum of `f` over the list's ordinates plus the tail correction.
fn zero_sum<F: Fn(f64) -> Result<C64>>(chi: &DirichletCharacter, zeros: &ZeroList, f: F) -> Result<ZeroSideValue> {
    let mut acc = ComplexSum::new();
    for &g in zeros.ordinates.iter().take_while(|&&g| g <= zeros.complete_to) {
        acc.add(f(g)?);
    }
    let (corr, tail) = zero_tail_side(chi, zeros, &f)?;
    acc.add(corr);
    Ok(ZeroSideValue {
        value: acc.value(),
        tail,
    })
}

fn check_list(chi: &DirichletCharacter, zeros: &ZeroList) -> Result<()> {
    if zeros.label != chi.label() {
        return Err(Error::Input(format!(
            "zero list {} does not belong to {}",
            zeros.label,
            chi.label()
        )));
    }
    Ok(())
}

/// Zero side for one character:
/// `Σ_{γ ∈ Z(χ)} (s − 1/2 − iγ)^{−w} + Σ_{γ ∈ Z(χ̄)} (s − 1/2 + iγ)^{−w}
///  + Σ_{n≥1} (s + 2n − (3+χ(−1))/2)^{−w} + exceptional terms`.
pub fn zero_side_r1(
    w: C64,
    s: C64,
    chi: &DirichletCharacter,
    zeros: &ZeroList,
    zeros_conj: &ZeroList,
) -> Result<ZeroSideValue> {
    check_list(chi, zeros)?;
    check_list(&conjugate(chi), zeros_conj)?;
    let chibar = conjugate(chi);
    let upper = zero_sum(chi, zeros, |g| power(s - C64::new(0.5, g), w))?;
    let lower = zero_sum(&chibar, zeros_conj, |g| power(s - C64::new(0.5, -g), w))?;
    let c = 0.5 * (3.0 + chi.parity_f64());
    let mut acc = ComplexSum::new();
    acc.add(upper.value);
    acc.add(lower.value);
    acc.add(ladder(w, s - c)?);
    if zeros.mu0 != 0 {
        acc.add(zeros.mu0 as f64 * power(s - 0.5, w)?);
    }
    if zeros.mu_tau0 != 0 {
        acc.add(zeros.mu_tau0 as f64 * (power(s - 0.5 - zeros.tau0, w)? + power(s - 0.5 + zeros.tau0, w)?));
    }
    Ok(ZeroSideValue {
        value: acc.value(),
        tail: upper.tail + lower.tail,
    })
}

/// Nodes and weights for `∫_T^∞ g(γ) N'(γ) dγ` after `γ = T/v`: Gauss–Legendre
/// panels on `v ∈ (0, 1]` graded geometrically towards `v = 0`, with the
/// density and Jacobian folded into the weights.
fn tail_rule(chi: &DirichletCharacter, t0: f64) -> Vec<(f64, f64)> {
    const PER_PANEL: usize = 20;
    let (x, wts) = gauss_legendre(PER_PANEL);
    let mut edges = vec![0.0];
    edges.extend((0..=8).rev().map(|k| 0.5f64.powi(2 * k)));
    let mut rule = Vec::with_capacity(PER_PANEL * (edges.len() - 1));
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&wts) {
            let v = mid + half * xi;
            let g = t0 / v;
            rule.push((g, wi * half * zero_density(chi, g) * t0 / (v * v)));
        }
    }
    rule
}

/// `Σ_{γ₁ > T₁, γ₂ > T₂} f(γ₁ + γ₂)` from the smooth counting functions:
/// `∫∫ f dN₁ dN₂` with `N_j = N̄_j + S_j`, keeping the boundary terms of `S_j`
/// (`−S₂∫ f(γ₁+T₂)dN̄₁ − S₁∫ f(T₁+γ₂)dN̄₂ + S₁S₂ f(T₁+T₂)`). The rule is the
/// same in both variables, so the value is symmetric in the two lists.
/// Requires `f` to decay faster than `γ^{−2}`.
fn double_tail<F: Fn(f64) -> Result<C64>>(
    chi1: &DirichletCharacter,
    z1: &ZeroList,
    chi2: &DirichletCharacter,
    z2: &ZeroList,
    f: F,
) -> Result<(C64, f64)> {
    let (t1, t2) = (z1.complete_to, z2.complete_to);
    let (r1, r2) = (tail_rule(chi1, t1), tail_rule(chi2, t2));
    let (s1, s2) = (counting_remainder(chi1, z1)?, counting_remainder(chi2, z2)?);
    let mut inner = ComplexSum::new();
    for &(g1, w1) in &r1 {
        let mut row = ComplexSum::new();
        for &(g2, w2) in &r2 {
            row.add(w2 * f(g1 + g2)?);
        }
        inner.add(w1 * row.value());
    }
    let mut edge1 = ComplexSum::new();
    let mut bound = 0.0;
    for &(g1, w1) in &r1 {
        let v = w1 * f(g1 + t2)?;
        edge1.add(v);
        bound += v.norm();
    }
    let mut edge2 = ComplexSum::new();
    for &(g2, w2) in &r2 {
        let v = w2 * f(t1 + g2)?;
        edge2.add(v);
        bound += v.norm();
    }
    let corner = f(t1 + t2)?;
    let value = inner.value() - s2 * edge1.value() - s1 * edge2.value() + s1 * s2 * corner;
    // The neglected `∫ S f'` pieces are bounded by the edge integrals (|S| ≲ 1).
    Ok((value, bound + corner.norm()))
}

/// `Σ_{γ₁ ∈ Z₁, γ₂ ∈ Z₂} f(γ₁ + γ₂)` over all ordinates (both lists continued beyond `T`):
/// the finite square, each finite list against the other's tail, and the double tail.
fn pair_sum<F: Fn(f64) -> Result<C64> + Copy>(
    chi1: &DirichletCharacter,
    z1: &ZeroList,
    chi2: &DirichletCharacter,
    z2: &ZeroList,
    f: F,
) -> Result<ZeroSideValue> {
    let mut acc = ComplexSum::new();
    let mut tail = 0.0;
    let mut finite_by_tail =
        |chi_b: &DirichletCharacter, za: &ZeroList, zb: &ZeroList, with_square: bool| -> Result<()> {
            for &g in za.ordinates.iter().take_while(|&&g| g <= za.complete_to) {
                let inner = if with_square {
                    zero_sum(chi_b, zb, |h| f(g + h))?
                } else {
                    let (v, e) = zero_tail_side(chi_b, zb, |h| f(g + h))?;
                    ZeroSideValue { value: v, tail: e }
                };
                acc.add(inner.value);
                tail += inner.tail;
            }
            Ok(())
        };
    finite_by_tail(chi2, z1, z2, true)?;
    finite_by_tail(chi1, z2, z1, false)?;
    let (dt, de) = double_tail(chi1, z1, chi2, z2, f)?;
    acc.add(dt);
    Ok(ZeroSideValue {
        value: acc.value(),
        tail: tail + de,
    })
}

/// [`zero_tail_correction`] for a fallible `f`.
fn zero_tail_side<F: Fn(f64) -> Result<C64>>(chi: &DirichletCharacter, zeros: &ZeroList, f: F) -> Result<(C64, f64)> {
    let bad = std::cell::Cell::new(None);
    let out = zero_tail_correction(chi, zeros, |g| match f(g) {
        Ok(v) => v,
        Err(e) => {
            bad.set(Some(e));
            C64::new(f64::NAN, f64::NAN)
        }
    })?;
    match bad.take() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Zero side for the pair `(χ₁, χ₂)`:
/// `−Σ_{Im ρ₁, Im ρ₂ < 0} (s − ρ₁ − ρ₂)^{−w} + Σ_{Im ρ₁, Im ρ₂ > 0} (s − ρ₁ − ρ₂)^{−w}`
/// plus, for `(a, b) ∈ {(1,2), (2,1)}`, the ladders
/// `Σ_{Im ρ_a > 0} Σ_{n≥1} (s − ρ_a + 2n − (3+χ_b(−1))/2)^{−w}` and the exceptional
/// families, the double ladder `Σ_{n₁,n₂} (s + 2n₁ + 2n₂ − 3 − (χ₁(−1)+χ₂(−1))/2)^{−w}`,
/// and the exceptional constants.
#[allow(clippy::too_many_arguments)]
pub fn zero_side_r2(
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    zeros1: &ZeroList,
    zeros2: &ZeroList,
    zeros1_conj: &ZeroList,
    zeros2_conj: &ZeroList,
) -> Result<ZeroSideValue> {
    if w.re <= 2.0 {
        return Err(Error::Domain(format!(
            "the double zero sum needs Re w > 2, got w = {w}"
        )));
    }
    check_list(chi1, zeros1)?;
    check_list(chi2, zeros2)?;
    let (cb1, cb2) = (conjugate(chi1), conjugate(chi2));
    check_list(&cb1, zeros1_conj)?;
    check_list(&cb2, zeros2_conj)?;
    let mut acc = ComplexSum::new();
    let mut tail = 0.0;
    let lower = pair_sum(&cb1, zeros1_conj, &cb2, zeros2_conj, |g| {
        power(s - C64::new(1.0, -g), w)
    })?;
    let upper = pair_sum(chi1, zeros1, chi2, zeros2, |g| power(s - C64::new(1.0, g), w))?;
    acc.add(-lower.value);
    acc.add(upper.value);
    tail += lower.tail + upper.tail;
    let chis = [chi1, chi2];
    let lists = [zeros1, zeros2];
    for (a, b) in [(0usize, 1usize), (1, 0)] {
        let (chi_a, chi_b) = (chis[a], chis[b]);
        let (za, zb) = (lists[a], lists[b]);
        let cb = 0.5 * (3.0 + chi_b.parity_f64());
        let ladders = zero_sum(chi_a, za, |g| ladder(w, s - C64::new(0.5, g) - cb))?;
        acc.add(ladders.value);
        tail += ladders.tail;
        let (mu_t, tau_a, mu_0) = (za.mu_tau0 as f64, za.tau0, za.mu0 as f64);
        if mu_t != 0.0 || mu_0 != 0.0 {
            let ex = zero_sum(chi_b, zb, |g| {
                let rho = C64::new(0.5, g);
                let mut v = C64::new(0.0, 0.0);
                if mu_t != 0.0 {
                    v += mu_t * (power(s - rho - 0.5 - tau_a, w)? + power(s - rho - 0.5 + tau_a, w)?);
                }
                if mu_0 != 0.0 {
                    v += mu_0 * power(s - rho - 0.5, w)?;
                }
                Ok(v)
            })?;
            acc.add(ex.value);
            tail += ex.tail;
            let base = s - 2.0 - 0.5 * chi_b.parity_f64();
            if mu_t != 0.0 {
                acc.add(mu_t * (ladder(w, base - tau_a)? + ladder(w, base + tau_a)?));
            }
            if mu_0 != 0.0 {
                acc.add(mu_0 * ladder(w, base)?);
            }
        }
    }
    acc.add(double_ladder(
        w,
        s - 3.0 - 0.5 * (chi1.parity_f64() + chi2.parity_f64()),
    )?);
    let (m1, m2) = (zeros1.mu_tau0 as f64, zeros2.mu_tau0 as f64);
    let (t1, t2) = (zeros1.tau0, zeros2.tau0);
    if m1 * m2 != 0.0 {
        for (x, y) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
            acc.add(m1 * m2 * power(s - 1.0 + x * t1 + y * t2, w)?);
        }
    }
    for (a, b) in [(0usize, 1usize), (1, 0)] {
        let (mt, ta, m0) = (lists[a].mu_tau0 as f64, lists[a].tau0, lists[b].mu0 as f64);
        if mt * m0 != 0.0 {
            acc.add(mt * m0 * (power(s - 1.0 - ta, w)? + power(s - 1.0 + ta, w)?));
        }
    }
    if zeros1.mu0 * zeros2.mu0 != 0 {
        acc.add((zeros1.mu0 * zeros2.mu0) as f64 * power(s - 1.0, w)?);
    }
    Ok(ZeroSideValue {
        value: acc.value(),
        tail,
    })
}

/// Zeros of `χ` and `χ̄` up to `height` (the same list when `χ` is real).
pub fn zero_lists(chi: &DirichletCharacter, height: f64) -> Result<(ZeroList, ZeroList)> {
    let z = find_zeros(chi, height)?;
    let zc = if chi.is_real() {
        z.clone()
    } else {
        find_zeros(&conjugate(chi), height)?
    };
    Ok((z, zc))
}

fn require_region(in_region: bool, opts: &VerifyOptions, w: C64, s: C64, r: u32) -> Result<()> {
    if !in_region && !opts.continued {
        return Err(Error::Domain(format!(
            "(w, s) = ({w}, {s}) is outside the admissible region for r = {r}; pass the continuation flag to evaluate anyway"
        )));
    }
    Ok(())
}

/// `r = 1` check with zeros computed to `params.zero_height`.
pub fn verify_r1(
    w: C64,
    s: C64,
    chi: &DirichletCharacter,
    params: &CramerEvalParams,
    opts: &VerifyOptions,
) -> Result<ResidualReport> {
    let (z, zc) = zero_lists(chi, params.zero_height)?;
    verify_r1_with(w, s, chi, &z, &zc, params, opts)
}

/// `r = 1` check with supplied zero lists (truncated to `params.zero_height`).
#[allow(clippy::too_many_arguments)]
pub fn verify_r1_with(
    w: C64,
    s: C64,
    chi: &DirichletCharacter,
    zeros: &ZeroList,
    zeros_conj: &ZeroList,
    params: &CramerEvalParams,
    opts: &VerifyOptions,
) -> Result<ResidualReport> {
    let tau0 = zeros.tau0;
    let in_region = region_check(w, s, 1, &RegionParams::from_cramer(params, tau0));
    require_region(in_region, opts, w, s, 1)?;
    let h = params.zero_height;
    let lhs = zero_side_r1(w, s, chi, &zeros.truncated(h), &zeros_conj.truncated(h))?;
    let gw = gamma(w)?;
    let rhs = -von_mangoldt_sum(chi, s, w, params.prime_limit)? / gw;
    let prime_tail = tail_estimate(s, w, params.prime_limit) / gw.norm();
    let echo = ReportParams {
        r: 1,
        labels: vec![chi.label()],
        w,
        s,
        alpha: params.alpha,
        epsilon: params.epsilon,
        theta: params.theta,
        tau0,
        zero_height: h,
        prime_limit: params.prime_limit,
        tol: opts.tol,
        continued: opts.continued,
        in_region,
    };
    Ok(ResidualReport::new(lhs.value, rhs, lhs.tail, prime_tail, 0.0, echo))
}

/// `r = 2` check with zeros computed to `params.zero_height`.
pub fn verify_r2(
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    params: &TensorEvalParams,
    opts: &VerifyOptions,
) -> Result<ResidualReport> {
    let (z1, z1c) = zero_lists(chi1, params.zero_height)?;
    let (z2, z2c) = zero_lists(chi2, params.zero_height)?;
    verify_r2_with(w, s, chi1, chi2, [&z1, &z2, &z1c, &z2c], params, opts)
}

/// `r = 2` check with supplied zero lists `[Z(χ₁), Z(χ₂), Z(χ̄₁), Z(χ̄₂)]`.
pub fn verify_r2_with(
    w: C64,
    s: C64,
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    lists: [&ZeroList; 4],
    params: &TensorEvalParams,
    opts: &VerifyOptions,
) -> Result<ResidualReport> {
    let in_region = region_check(w, s, 2, &RegionParams::from_tensor(params));
    require_region(in_region, opts, w, s, 2)?;
    let h = params.zero_height;
    let [a, b, c, d] = lists.map(|z| z.truncated(h));
    let lhs = zero_side_r2(w, s, chi1, chi2, &a, &b, &c, &d)?;
    let gw = gamma(w)?;
    let terms = TensorEvaluator::new(chi1, chi2, params)?.terms(w, s)?;
    let rhs = -terms.sum() / gw;
    let prime_tail = terms.error() / gw.norm();
    let echo = ReportParams {
        r: 2,
        labels: vec![chi1.label(), chi2.label()],
        w,
        s,
        alpha: params.alpha,
        epsilon: params.epsilon,
        theta: params.theta,
        tau0: params.tau0,
        zero_height: h,
        prime_limit: params.prime_limit,
        tol: opts.tol,
        continued: opts.continued,
        in_region,
    };
    Ok(ResidualReport::new(lhs.value, rhs, lhs.tail, prime_tail, 0.0, echo))
}

/// The `w = 2` identity `Σ_ρ (s − ρ)^{−2} = −(log L)''(s, χ)` (all zeros,
/// trivial ones included), an independent check of the global sign.
pub fn hadamard_check(
    s: C64,
    chi: &DirichletCharacter,
    zeros: &ZeroList,
    zeros_conj: &ZeroList,
    tol: f64,
) -> Result<ResidualReport> {
    let w = C64::new(2.0, 0.0);
    let lhs = zero_side_r1(w, s, chi, zeros, zeros_conj)?;
    let rhs = -log_l_second_derivative(chi, s)?;
    let (_, _, tau0) = mu_data(chi, 1e-10)?;
    let echo = ReportParams {
        r: 1,
        labels: vec![chi.label()],
        w,
        s,
        alpha: 0.0,
        epsilon: 0.0,
        theta: 0.0,
        tau0,
        zero_height: zeros.complete_to,
        prime_limit: 0,
        tol,
        continued: true,
        in_region: false,
    };
    Ok(ResidualReport::new(lhs.value, rhs, lhs.tail, 0.0, 1e-12, echo))
}
