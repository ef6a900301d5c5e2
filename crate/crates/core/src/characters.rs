//! Dirichlet characters as explicit value tables, with conductor, parity,
//! Gauss sums and conjugation.
//!
//! Characters mod `N` are enumerated through the CRT decomposition of
//! `(Z/N)^*`: each odd prime power (and `2`, `4`) contributes a cyclic factor
//! generated by its smallest primitive root, `2^e` with `e ≥ 3` contributes the
//! two factors generated by `−1` and `5`. A character is an exponent vector
//! `(k_1, …, k_r)` with `χ(g_j) = e^{2πi k_j / n_j}`; the label index is the
//! position of that vector in lexicographic order, so `N.0` is principal.

use crate::error::{Error, Result};
use crate::sum::ComplexSum;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A Dirichlet character mod `modulus`, stored as a value table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    /// Position in the deterministic enumeration of characters mod `modulus`.
    pub index: usize,
    /// `values[n] = χ(n)` for `0 ≤ n < modulus`.
    pub values: Vec<C64>,
    pub conductor: u64,
    /// `χ(−1)`, either `+1` or `−1`.
    pub parity: i32,
    pub primitive: bool,
}

impl DirichletCharacter {
    /// `χ(n)` for any non-negative integer `n`.
    #[inline]
    pub fn value(&self, n: u64) -> C64 {
        self.values[(n % self.modulus) as usize]
    }

    /// The label `N.k`.
    pub fn label(&self) -> String {
        format!("{}.{}", self.modulus, self.index)
    }

    /// `χ(−1)` as a float.
    #[inline]
    pub fn parity_f64(&self) -> f64 {
        self.parity as f64
    }

    /// `a = (1 − χ(−1))/2 ∈ {0, 1}`, the parity index of the Gamma factor.
    #[inline]
    pub fn parity_index(&self) -> u32 {
        if self.parity == 1 {
            0
        } else {
            1
        }
    }

    /// True when all values are real (within 1e−14).
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() < 1e-14)
    }

    /// True for the principal character.
    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    /// Smallest prime `q` with `χ(q) ≠ 0`.
    pub fn smallest_supported_prime(&self) -> u64 {
        let mut q = 2;
        loop {
            if is_prime(q) && !self.modulus.is_multiple_of(q) {
                return q;
            }
            q += 1;
        }
    }

    /// Look up a character by its label `N.k`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (n, k) = label
            .split_once('.')
            .ok_or_else(|| Error::Input(format!("character label `{label}` is not of the form N.k")))?;
        let n: u64 = n
            .parse()
            .map_err(|_| Error::Input(format!("bad modulus in label `{label}`")))?;
        let k: usize = k
            .parse()
            .map_err(|_| Error::Input(format!("bad index in label `{label}`")))?;
        if n == 0 || n > 100_000 {
            return Err(Error::Input(format!("modulus {n} out of range 1..=100000")));
        }
        enumerate_characters(n)
            .into_iter()
            .nth(k)
            .ok_or_else(|| Error::Input(format!("no character with label `{label}`")))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `g` mod `m` (assumes gcd(g, m) = 1).
fn mult_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * g % m;
        k += 1;
    }
    k
}

/// One cyclic factor of `(Z/N)^*` of order `order`, living mod `q = p^e`.
struct CyclicFactor {
    q: u64,
    order: u64,
    /// Discrete log table on residues mod q (u64::MAX for non-units and for
    /// residues outside the factor's subgroup image).
    dlog: Vec<u64>,
}

fn cyclic_factors(n: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, e) in factorize(n) {
        let q = p.pow(e);
        let phi = q / p * (p - 1);
        if p == 2 && e >= 3 {
            // (Z/2^e)^* = <−1> × <5>: n ≡ (−1)^a 5^b.
            let mut dl_a = vec![u64::MAX; q as usize];
            let mut dl_b = vec![u64::MAX; q as usize];
            let ob = q / 4;
            let mut x = 1u64;
            for b in 0..ob {
                dl_a[x as usize] = 0;
                dl_b[x as usize] = b;
                let y = (q - x) % q;
                dl_a[y as usize] = 1;
                dl_b[y as usize] = b;
                x = x * 5 % q;
            }
            out.push(CyclicFactor {
                q,
                order: 2,
                dlog: dl_a,
            });
            out.push(CyclicFactor {
                q,
                order: ob,
                dlog: dl_b,
            });
        } else {
            let g = (1..q.max(2))
                .find(|&g| gcd(g, q) == 1 && mult_order(g, q) == phi)
                .unwrap_or(1);
            let mut dlog = vec![u64::MAX; q as usize];
            let mut x = 1 % q;
            for k in 0..phi {
                dlog[x as usize] = k;
                x = x * g % q;
            }
            out.push(CyclicFactor { q, order: phi, dlog });
        }
    }
    out
}

/// `e^{2πi r/d}` with exact values at multiples of a quarter turn.
fn root_of_unity(r: u64, d: u64) -> C64 {
    let r = r % d;
    if (4 * r).is_multiple_of(d) {
        return match 4 * r / d {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    // Reduce to the symmetric range to keep the argument small.
    let x = r as f64 / d as f64;
    let x = if x > 0.5 { x - 1.0 } else { x };
    let (s, c) = (2.0 * PI * x).sin_cos();
    C64::new(c, s)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Every Dirichlet character mod `n`, in deterministic label order.
pub fn enumerate_characters(n: u64) -> Vec<DirichletCharacter> {
    assert!(n >= 1, "modulus must be positive");
    let factors = cyclic_factors(n);
    let big_l = factors.iter().fold(1u64, |acc, f| lcm(acc, f.order));
    let total: u64 = factors.iter().map(|f| f.order).product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; factors.len()];
    for index in 0..total as usize {
        // Decode index → exponent vector (last component varies fastest).
        let mut rem = index as u64;
        for j in (0..factors.len()).rev() {
            exps[j] = rem % factors[j].order;
            rem /= factors[j].order;
        }
        let mut values = vec![C64::new(0.0, 0.0); n as usize];
        for m in 0..n {
            if gcd(m, n) != 1 {
                continue;
            }
            let mut r = 0u64;
            for (f, &k) in factors.iter().zip(&exps) {
                let l = f.dlog[(m % f.q) as usize];
                r = (r + k * l % f.order * (big_l / f.order)) % big_l;
            }
            values[m as usize] = root_of_unity(r, big_l);
        }
        if n == 1 {
            values[0] = C64::new(1.0, 0.0);
        }
        let parity = if n <= 2 || values[(n - 1) as usize].re > 0.0 {
            1
        } else {
            -1
        };
        let conductor = conductor_of(&values, n);
        out.push(DirichletCharacter {
            modulus: n,
            index,
            values,
            conductor,
            parity,
            primitive: conductor == n,
        });
    }
    out
}

/// Least `d | N` such that χ is trivial on units `≡ 1 (mod d)`.
fn conductor_of(values: &[C64], n: u64) -> u64 {
    let mut divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for d in divisors {
        let ok = (1..n)
            .filter(|&m| gcd(m, n) == 1 && m % d == 1 % d)
            .all(|m| (values[m as usize] - C64::new(1.0, 0.0)).norm() < 1e-9);
        if ok {
            return d;
        }
    }
    n
}

/// `(conductor, primitive, parity)`.
pub fn character_invariants(chi: &DirichletCharacter) -> (u64, bool, i32) {
    (chi.conductor, chi.primitive, chi.parity)
}

/// `G(χ) = Σ_{n=1}^{N} χ(n) e^{2πin/N}`, compensated.
pub fn gauss_sum(chi: &DirichletCharacter) -> C64 {
    let n = chi.modulus;
    let mut acc = ComplexSum::new();
    for m in 1..=n {
        let v = chi.value(m);
        if v.norm_sqr() == 0.0 {
            continue;
        }
        acc.add(v * root_of_unity(m, n));
    }
    acc.value()
}

/// The complex-conjugate character. Its index is looked up in the enumeration
/// so labels stay consistent.
pub fn conjugate(chi: &DirichletCharacter) -> DirichletCharacter {
    let values: Vec<C64> = chi.values.iter().map(|v| v.conj()).collect();
    let index = if chi.is_real() {
        chi.index
    } else {
        enumerate_characters(chi.modulus)
            .into_iter()
            .find(|c| c.values.iter().zip(&values).all(|(a, b)| (a - b).norm() < 1e-12))
            .map(|c| c.index)
            .unwrap_or(chi.index)
    };
    DirichletCharacter {
        values,
        index,
        ..chi.clone()
    }
}

/// Unique primitive character of the given modulus with the given parity and
/// real values, if it exists (convenience for the small real characters).
pub fn primitive_real(modulus: u64) -> Option<DirichletCharacter> {
    enumerate_characters(modulus)
        .into_iter()
        .find(|c| c.primitive && c.is_real())
}

/// Orthogonality residual `max |Σ_n χ(n) conj χ'(n) − φ(N)[χ = χ']|` over all pairs.
pub fn orthogonality_residual(n: u64) -> f64 {
    let chars = enumerate_characters(n);
    let phi = (1..=n).filter(|&m| gcd(m, n) == 1).count() as f64;
    let mut worst: f64 = 0.0;
    for a in &chars {
        for b in &chars {
            let mut acc = ComplexSum::new();
            for (x, y) in a.values.iter().zip(&b.values) {
                acc.add(x * y.conj());
            }
            let target = if a.index == b.index { phi } else { 0.0 };
            worst = worst.max((acc.value() - C64::new(target, 0.0)).norm());
        }
    }
    worst
}
