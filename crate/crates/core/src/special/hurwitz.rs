//! Hurwitz zeta ζ(w, a) for complex w and complex a with Re a > 0, by
//! Euler–Maclaurin summation.

use super::BERNOULLI_OVER_FACTORIAL;
use crate::error::{Error, Result};
use crate::sum::ComplexSum;
use crate::C64;

/// ζ(w, a) = Σ_{k≥0} (a + k)^{−w}, principal powers (Re(a + k) > 0).
///
/// The direct part runs until `|a + M|` is large compared with `|w|`, after which
/// the Euler–Maclaurin tail with up to 30 Bernoulli corrections is added.
pub fn hurwitz_zeta(w: C64, a: C64) -> Result<C64> {
    if a.re <= 0.0 {
        return Err(Error::Domain(format!("hurwitz_zeta needs Re(a) > 0, got a = {a}")));
    }
    if (w - 1.0).norm() < 1e-15 {
        return Err(Error::Pole("hurwitz_zeta at w = 1".into()));
    }
    // Remainder after J corrections behaves like |(w)_{2J+1}| / (2π|a+M|)^{2J+1}.
    let target = 20.0 + 0.35 * w.norm();
    let mut m = 0usize;
    while (a + m as f64).norm() < target || (a.re + m as f64) < 1.0 {
        m += 1;
    }
    let mut acc = ComplexSum::new();
    for k in 0..m {
        acc.add((-w * (a + k as f64).ln()).exp());
    }
    let x = a + m as f64;
    let lx = x.ln();
    let xw = (-w * lx).exp(); // x^{−w}
    acc.add(x * xw / (w - 1.0));
    acc.add(0.5 * xw);
    let inv_x = 1.0 / x;
    let inv_x2 = inv_x * inv_x;
    // term_j = B_{2j}/(2j)! · w(w+1)…(w+2j−2) · x^{−w−2j+1}
    let mut poch = w; // (w)_{2j−1}
    let mut pw = xw * inv_x; // x^{−w−1}
    let mut prev = f64::INFINITY;
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = poch * pw * *b;
        let tn = term.norm();
        acc.add(term);
        if tn < 1e-17 * acc.value().norm() || tn > prev {
            break;
        }
        prev = tn;
        let jj = (j + 1) as f64;
        poch *= (w + 2.0 * jj - 1.0) * (w + 2.0 * jj);
        pw *= inv_x2;
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let z = hurwitz_zeta(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((z - PI * PI / 6.0).norm() < 1e-14);
        let z = hurwitz_zeta(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((z - PI * PI / 2.0).norm() < 1e-13);
        // ζ(−1, 1) = −1/12 and ζ(0, a) = 1/2 − a.
        let z = hurwitz_zeta(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((z + 1.0 / 12.0).norm() < 1e-13);
        let z = hurwitz_zeta(c(0.0, 0.0), c(0.3, 0.0)).unwrap();
        assert!((z - 0.2).norm() < 1e-13);
    }

    #[test]
    fn mpmath_reference_values() {
        // mpmath.zeta(w, a)
        let z = hurwitz_zeta(c(0.5, 14.134725), c(0.25, 0.0)).unwrap();
        assert!((z - c(0.56182492594814983, 2.1565310822756543)).norm() < 1e-12, "{z}");
        let z = hurwitz_zeta(c(3.0, 0.0), c(1.75, -20.0)).unwrap();
        assert!(
            (z - c(-1.2361986075300340e-3, 1.5522836497473346e-4)).norm() < 1e-15,
            "{z}"
        );
        let z = hurwitz_zeta(c(0.5, 150.0), c(0.75, 0.0)).unwrap();
        assert!((z - c(-1.0015248576999874, -0.45612649739386870)).norm() < 1e-10, "{z}");
    }

    #[test]
    fn shift_identity() {
        for (w, a) in [
            (c(3.0, 0.0), c(0.2, 0.0)),
            (c(0.5, 30.0), c(0.75, 0.0)),
            (c(2.5, -1.0), c(1.0, 7.0)),
        ] {
            let lhs = hurwitz_zeta(w, a).unwrap() - (-w * a.ln()).exp();
            let rhs = hurwitz_zeta(w, a + 1.0).unwrap();
            assert!((lhs - rhs).norm() < 1e-11 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn ladder_closed_form() {
        // Σ_{n=1}^{1e5} (s+2n−1)^{−w} vs 2^{−w} ζ(w, (s+1)/2) at s = 4, w = 3.
        let (s, w) = (4.0f64, 3.0f64);
        let mut acc = crate::sum::KahanSum::new();
        for n in 1..=100_000u64 {
            acc.add((s + 2.0 * n as f64 - 1.0).powf(-w));
        }
        let closed = 2f64.powf(-w) * hurwitz_zeta(c(w, 0.0), c((s + 1.0) / 2.0, 0.0)).unwrap().re;
        // The 1e5-term truncation leaves ~1.25e−11.
        assert!((acc.value() - closed).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), c(0.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(c(1.0, 0.0), c(1.0, 0.0)), Err(Error::Pole(_))));
    }
}
