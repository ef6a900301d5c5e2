//! Prime powers and the weighted prime-power sums that make up every prime
//! side: `Σ χ(p^m) p^{−ms} (m log p)^{w−1} log p` and `Σ χ(p^m) p^{−ms}/m`.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::special::{quad_semi_infinite, QuadratureSpec};
use crate::sum::ComplexSum;
use crate::C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex, OnceLock};

/// One prime power `p^m` with its logarithmic weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimePowerTerm {
    pub p: u64,
    pub m: u32,
    /// `p^m`.
    pub value: u64,
    /// `log p`.
    pub log_p: f64,
    /// `m log p`.
    pub mlogp: f64,
}

/// Terms per block in parallel reductions; fixed so results do not depend on
/// the thread count.
pub(crate) const BLOCK: usize = 4096;

/// Upper bound on ψ(x)/x valid for all x > 0.
const CHEBYSHEV_PSI_RATIO: f64 = 1.04;

fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All `(p, m)` with `p^m ≤ limit`, sorted by `p^m`.
pub fn prime_powers(limit: u64) -> Vec<PrimePowerTerm> {
    let mut out = Vec::new();
    for p in sieve(limit) {
        let log_p = (p as f64).ln();
        let mut v = p;
        let mut m = 1u32;
        loop {
            out.push(PrimePowerTerm {
                p,
                m,
                value: v,
                log_p,
                mlogp: m as f64 * log_p,
            });
            match v.checked_mul(p) {
                Some(nv) if nv <= limit => {
                    v = nv;
                    m += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable_by_key(|t| t.value);
    out
}

type Cache = Mutex<(u64, Arc<Vec<PrimePowerTerm>>)>;
static CACHE: OnceLock<Cache> = OnceLock::new();

/// Shared sorted prime-power list covering at least `limit`; callers use the
/// prefix with `value ≤ limit` (see [`prefix`]).
pub fn prime_powers_cached(limit: u64) -> Arc<Vec<PrimePowerTerm>> {
    let cell = CACHE.get_or_init(|| Mutex::new((0, Arc::new(Vec::new()))));
    let mut guard = cell.lock().expect("prime cache poisoned");
    if guard.0 < limit {
        *guard = (limit, Arc::new(prime_powers(limit)));
    }
    guard.1.clone()
}

/// The prefix of a sorted list with `value ≤ limit`.
pub fn prefix(list: &[PrimePowerTerm], limit: u64) -> &[PrimePowerTerm] {
    &list[..list.partition_point(|t| t.value <= limit)]
}

/// Deterministic blocked parallel compensated sum of `f` over `terms`.
pub fn par_sum<F>(terms: &[PrimePowerTerm], f: F) -> C64
where
    F: Fn(&PrimePowerTerm) -> C64 + Sync,
{
    let blocks: Vec<ComplexSum> = terms
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut acc = ComplexSum::new();
            for t in chunk {
                acc.add(f(t));
            }
            acc
        })
        .collect();
    let mut total = ComplexSum::new();
    for b in &blocks {
        total.merge(b);
    }
    total.value()
}

fn require_convergent(s: C64, what: &str) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("{what} needs Re(s) > 1, got s = {s}")));
    }
    Ok(())
}

/// `Σ_{p^m ≤ limit} χ(p^m) p^{−ms} (m log p)^{w−1} log p`.
pub fn von_mangoldt_sum(chi: &DirichletCharacter, s: C64, w: C64, limit: u64) -> Result<C64> {
    require_convergent(s, "von_mangoldt_sum")?;
    Ok(von_mangoldt_sum_unchecked(chi, s, w, limit))
}

/// As [`von_mangoldt_sum`] without the `Re(s) > 1` guard (the caller takes
/// responsibility for the meaning of the partial sum).
pub fn von_mangoldt_sum_unchecked(chi: &DirichletCharacter, s: C64, w: C64, limit: u64) -> C64 {
    let list = prime_powers_cached(limit);
    par_sum(prefix(&list, limit), |t| {
        let c = chi.value(t.value);
        if c.norm_sqr() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let lv = t.value as f64;
        c * (-s * lv.ln()).exp() * ((w - 1.0) * t.mlogp.ln()).exp() * t.log_p
    })
}

/// `Σ_{p^m ≤ limit} χ(p^m) p^{−ms} / m` (the principal log of the Euler product).
pub fn dirichlet_log_sum(chi: &DirichletCharacter, s: C64, limit: u64) -> Result<C64> {
    require_convergent(s, "dirichlet_log_sum")?;
    let list = prime_powers_cached(limit);
    Ok(par_sum(prefix(&list, limit), |t| {
        let c = chi.value(t.value);
        if c.norm_sqr() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        c * (-s * (t.value as f64).ln()).exp() / t.m as f64
    }))
}

/// Upper bound for `|Σ_{p^m > limit} χ(p^m) p^{−ms} (m log p)^{w−1} log p|`.
///
/// With `g(x) = (log x)^{Re w − 1} x^{−Re s}` decreasing beyond `limit` and
/// `ψ(x) ≤ 1.04 x`, partial summation gives `≤ 1.04 (limit·g(limit) + ∫_limit^∞ g)`.
/// If `g` is not yet decreasing at `limit` the bound is taken from the point where it is.
pub fn tail_estimate(s: C64, w: C64, limit: u64) -> f64 {
    let sigma = s.re;
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let a = w.re - 1.0;
    let l0 = (limit.max(2) as f64).ln();
    // g decreasing for log x > a/σ.
    let y0 = l0.max(a / sigma + 1e-9);
    let g = |y: f64| (a * y.ln() - sigma * y).exp();
    let spec = QuadratureSpec {
        decay_hint: sigma - 1.0,
        ..QuadratureSpec::with_tol(1e-10)
    };
    // ∫_{e^{y0}}^∞ g(x) dx = ∫_{y0}^∞ y^a e^{−(σ−1)y} dy
    let integral = quad_semi_infinite(
        |u| C64::new(((a * (y0 + u).ln()) - (sigma - 1.0) * (y0 + u)).exp(), 0.0),
        &spec,
    )
    .map(|r| r.value.re + r.error)
    .unwrap_or(f64::INFINITY);
    let head = if y0 > l0 {
        // Finite stretch between limit and the monotonicity point, bounded crudely.
        (y0.exp() - l0.exp()).max(0.0) * g(a / sigma).max(g(l0)) * l0.max(1.0)
    } else {
        0.0
    };
    CHEBYSHEV_PSI_RATIO * (y0.exp() * g(y0) + integral) + head
}

/// Upper bound for the dropped tail of [`dirichlet_log_sum`].
pub fn log_sum_tail(s: C64, limit: u64) -> f64 {
    tail_estimate(s, C64::new(1.0, 0.0), limit) / (limit.max(2) as f64).ln()
}
