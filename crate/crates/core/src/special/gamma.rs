//! Γ, principal-branch log Γ, digamma and trigamma via Stirling series with
//! upward recurrence.

use super::BERNOULLI_EVEN;
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Stirling series is used once |z| exceeds this radius with Re z > 0.
const STIRLING_RADIUS: f64 = 16.0;

/// Euler's constant γ.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

fn check_pole(z: C64, what: &str) -> Result<()> {
    if z.re <= 0.5 && z.im.abs() < 1e-14 && (z.re - z.re.round()).abs() < 1e-14 {
        return Err(Error::Pole(format!("{what} at nonpositive integer {}", z.re.round())));
    }
    Ok(())
}

/// Number of unit shifts so that `z + n` is in the Stirling region.
fn shift_count(z: C64) -> usize {
    let mut n = 0usize;
    let mut w = z;
    while w.re < 1.0 || w.norm() < STIRLING_RADIUS {
        w.re += 1.0;
        n += 1;
    }
    n
}

/// Principal branch of log Γ(z): continuous on `C ∖ (−∞, 0]`, real for real z > 0.
pub fn log_gamma(z: C64) -> Result<C64> {
    check_pole(z, "log_gamma")?;
    let n = shift_count(z);
    let mut shift = C64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    let w = z + n as f64;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut pw = inv;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = (j + 1) as f64;
        series += pw * (b / (2.0 * k * (2.0 * k - 1.0)));
        pw *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - shift)
}

/// Γ(z) = exp(log Γ(z)).
pub fn gamma(z: C64) -> Result<C64> {
    Ok(log_gamma(z)?.exp())
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: C64) -> Result<C64> {
    check_pole(z, "digamma")?;
    if z.re < -10.0 {
        // Reflection keeps the recurrence short: ψ(z) = ψ(1−z) − π cot(πz).
        let cot = (PI * z).cos() / (PI * z).sin();
        return Ok(digamma(1.0 - z)? - PI * cot);
    }
    let n = shift_count(z);
    let mut shift = C64::new(0.0, 0.0);
    for k in 0..n {
        shift += 1.0 / (z + k as f64);
    }
    let w = z + n as f64;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut pw = inv2;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = (j + 1) as f64;
        series += pw * (b / (2.0 * k));
        pw *= inv2;
    }
    Ok(w.ln() - 0.5 * inv - series - shift)
}

/// ψ'(z).
pub fn trigamma(z: C64) -> Result<C64> {
    check_pole(z, "trigamma")?;
    let n = shift_count(z);
    let mut shift = C64::new(0.0, 0.0);
    for k in 0..n {
        let d = z + k as f64;
        shift += 1.0 / (d * d);
    }
    let w = z + n as f64;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    // ψ'(w) ~ 1/w + 1/(2w²) + Σ B_{2k}/w^{2k+1}
    let mut series = C64::new(0.0, 0.0);
    let mut pw = inv2 * inv;
    for b in BERNOULLI_EVEN.iter() {
        series += pw * *b;
        pw *= inv2;
    }
    Ok(inv + 0.5 * inv2 + series + shift)
}
