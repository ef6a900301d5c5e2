//! The Cramér-type series `l_χ(t)`: both representations, the functional
//! identities of the auxiliary functions, small-t behaviour, and residues.

use std::f64::consts::PI;

use ltensor_core::characters::{conjugate, DirichletCharacter};
use ltensor_core::cramer::*;
use ltensor_core::lfunctions::find_zeros;
use ltensor_core::special::euler_gamma;
use ltensor_core::tensor::pole_gap;
use ltensor_core::{Error, QuadratureSpec, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn chi(label: &str) -> DirichletCharacter {
    DirichletCharacter::from_label(label).unwrap()
}

fn params_for(chi: &DirichletCharacter) -> CramerEvalParams {
    let z = find_zeros(chi, 10.0).unwrap();
    CramerEvalParams::defaults_for(z.first_ordinate())
}

#[test]
fn zero_sum_examples() {
    let c = chi("4.1");
    let z = find_zeros(&c, 200.0).unwrap();
    let (v, tail) = l_zero_sum(&c, C64::new(1.0, 0.0), &z, 200.0).unwrap();
    assert!(v.re.is_finite() && tail < 1e-3, "value {v}, tail {tail}");
    let (v50, _) = l_zero_sum(&c, C64::new(50.0, 0.0), &z, 200.0).unwrap();
    assert!(v50.norm() < 1e-100);
    let (_, tail100) = l_zero_sum(&c, C64::new(1.0, 0.0), &z, 100.0).unwrap();
    assert!(tail < tail100);
    assert!(matches!(
        l_zero_sum(&c, C64::new(0.0, 1.0), &z, 200.0),
        Err(Error::Domain(_))
    ));
}

/// l_explicit and the truncated zero sum agree within the zero sum's tail.
#[test]
fn representations_agree_in_right_half_plane() {
    for label in ["4.1", "3.1", "5.1"] {
        let c = chi(label);
        let z = find_zeros(&c, 200.0).unwrap();
        let series = CramerSeries::new(&c, &params_for(&c)).unwrap();
        for t in [
            C64::new(0.5, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.7, 0.5),
            C64::new(2.0, -0.3),
            C64::new(3.0, 1.0),
        ] {
            let (zs, tail) = l_zero_sum(&c, t, &z, 200.0).unwrap();
            let ex = series.eval(t, Representation::Auto).unwrap();
            assert!(
                (zs - ex).norm() < tail + 1e-4,
                "{label} t={t}: {zs} vs {ex} (tail {tail})"
            );
        }
    }
}

/// Both representations agree where both are valid (Re t > 0, away from poles).
#[test]
fn reflected_and_right_half_plane_formulas_agree() {
    let c = chi("4.1");
    let series = CramerSeries::new(&c, &params_for(&c)).unwrap();
    for t in [C64::new(0.5, 0.3), C64::new(1.5, -0.8), C64::new(0.2, 2.0)] {
        let a = series.eval(t, Representation::RightHalfPlane).unwrap();
        let b = series.eval(t, Representation::Reflected).unwrap();
        assert!((a - b).norm() < 1e-9, "t={t}: {a} vs {b}");
    }
}

/// `l_χ(t) + l_χ̄(−t) = −i e^{−χ(−1)it/2}/(2 sin t) − μ-terms` for Re t < 0,
/// and the `t ↦ −t`, `χ ↦ χ̄` image of it for Re t > 0.
#[test]
fn reflection_identity_in_both_half_planes() {
    for label in ["4.1", "3.1", "5.1"] {
        let c = chi(label);
        let cb = conjugate(&c);
        let p = params_for(&c);
        let s = CramerSeries::new(&c, &p).unwrap();
        let sb = CramerSeries::new(&cb, &p).unwrap();
        for t in [C64::new(-0.8, 0.4), C64::new(-1.5, -0.7), C64::new(-0.3, 2.5)] {
            let lhs = s.eval(t, Representation::Auto).unwrap() + sb.eval(-t, Representation::Auto).unwrap();
            let rhs = s.reflection_terms(t);
            assert!((lhs - rhs).norm() < 1e-4, "{label} t={t}: {lhs} vs {rhs}");
        }
        for t in [C64::new(0.8, -0.4), C64::new(1.5, 0.7), C64::new(0.3, -2.5)] {
            let lhs = s.eval(t, Representation::Auto).unwrap() + sb.eval(-t, Representation::Auto).unwrap();
            let rhs = sb.reflection_terms(-t);
            assert!((lhs - rhs).norm() < 1e-4, "{label} t={t}: {lhs} vs {rhs}");
        }
    }
}

/// `J(t) + J(−t)` closed form, for both parities and both half-planes.
#[test]
fn j_reflection_identity() {
    for parity in [-1, 1] {
        for t in [C64::new(-1.0, 0.5), C64::new(1.0, -0.5), C64::new(-0.4, -1.2)] {
            let lhs = j_function(parity, t).unwrap() + j_function(parity, -t).unwrap();
            let rhs = j_reflection(parity, t).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "parity {parity}, t={t}: {lhs} vs {rhs}");
        }
    }
    // The form with −iπ/(4 sin(t/2)) in place of the half-angle term misses by an O(1) amount.
    let t = C64::new(-1.0, 0.5);
    let lhs = j_function(-1, t).unwrap() + j_function(-1, -t).unwrap();
    let half_angle_form = -PI * I * (I * 0.5 * t).exp() / (2.0 * t.sin()) - I * PI / (4.0 * (0.5 * t).sin());
    assert!((lhs - half_angle_form).norm() > 1.0);
}

#[test]
fn i_function_is_real_on_positive_axis_and_continuous_across_the_axis() {
    for parity in [-1, 1] {
        let v = i_function(parity, C64::new(1.0, 0.0)).unwrap();
        assert!(v.im.abs() < 1e-14, "{v}");
        // The continuation through iR>0 (residue at u = −2it added for Re t < 0)
        // agrees with the rotated-ray integral, whose ray passes above that pole.
        let t = C64::new(-0.5, 1.0);
        let ray = i_function_ray(parity, t, 1.0).unwrap();
        assert!((ray - i_function(parity, t).unwrap()).norm() < 1e-10, "{ray}");
        // Ray-rotated quadrature is an independent route.
        let t = C64::new(0.6, 0.4);
        let r = i_function_ray(parity, t, 0.3).unwrap();
        assert!((r - i_function(parity, t).unwrap()).norm() < 1e-10);
    }
}

/// H by direct quadrature vs rotated-ray quadrature (with the residue at u = it).
#[test]
fn h_function_two_routes() {
    let t = C64::new(-1.0, -0.5);
    let direct = h_function(t, 0.5).unwrap();
    for phi in [-1.3, 0.3] {
        let ray = h_function_ray(t, 0.5, phi).unwrap();
        assert!((direct - ray).norm() < 1e-9, "phi {phi}: {direct} vs {ray}");
    }
    assert!(matches!(h_function(C64::new(0.0, -1.0), 0.5), Err(Error::Domain(_))));
}

/// The small circle around t = 2π encloses no pole of H on the principal sheet.
#[test]
fn h_has_no_residue_at_two_pi() {
    for radius in [0.5, 0.25] {
        let r = ltensor_core::special::quad_circle(
            |t| h_function(t, 0.5).unwrap(),
            C64::new(2.0 * PI, 0.0),
            radius,
            &QuadratureSpec::with_tol(1e-12),
        )
        .unwrap();
        assert!(r.value.norm() < 1e-12, "radius {radius}: {}", r.value);
    }
}

/// `H(t) + e^{−i(α+1/2)t} log t/(2 sin(t/2)) − iπ/(2t)` stays bounded as t → 0.
#[test]
fn h_small_t_behaviour() {
    let alpha = 0.5;
    let dir = C64::from_polar(1.0, 0.75 * PI);
    let values: Vec<C64> = (1..=4)
        .map(|k| {
            let t = 10f64.powi(-k) * dir;
            h_function(t, alpha).unwrap() + (-I * (alpha + 0.5) * t).exp() * log_sector(t) / (2.0 * (0.5 * t).sin())
                - I * PI / (2.0 * t)
        })
        .collect();
    for v in &values {
        assert!(v.norm() < 5.0, "{values:?}");
    }
    assert!((values[3] - values[2]).norm() < 0.05);
}

/// `l(t) + log t/(2πt) + (log(2π/N) + γ)/(2πt)` stays bounded as t → 0.
#[test]
fn l_small_t_behaviour() {
    let c = chi("4.1");
    let series = CramerSeries::new(&c, &params_for(&c)).unwrap();
    let dir = C64::from_polar(1.0, 0.25 * PI);
    let k = (2.0 * PI / 4.0).ln() + euler_gamma();
    let values: Vec<C64> = (2..=4)
        .map(|e| {
            let t = 10f64.powi(-e) * dir;
            series.eval(t, Representation::Auto).unwrap() + t.ln() / (2.0 * PI * t) + k / (2.0 * PI * t)
        })
        .collect();
    for v in &values {
        assert!(v.norm() < 1.0, "{values:?}");
    }
    assert!((values[2] - values[1]).norm() < 1e-2, "{values:?}");
}

#[test]
fn alpha_epsilon_theta_independence() {
    let c = chi("4.1");
    let base = params_for(&c);
    let t = C64::new(1.0, 0.0);
    let t2 = C64::new(-0.6, 0.9);
    let eval = |p: CramerEvalParams, t: C64| l_explicit(&c, t, &p).unwrap();
    for t in [t, t2] {
        let a = eval(CramerEvalParams { alpha: 0.3, ..base }, t);
        let b = eval(CramerEvalParams { alpha: 0.6, ..base }, t);
        assert!((a - b).norm() < 1e-6, "α: {a} vs {b}");
        let e = eval(
            CramerEvalParams {
                epsilon: 0.4,
                theta: 0.1,
                ..base
            },
            t,
        );
        assert!((a - e).norm() < 1e-6, "ε: {a} vs {e}");
    }
}

/// Residue at `t = i m log p` from the contour oracle vs the explicit value
/// `−(log p/2π) χ̄(p^m) p^{−m/2}`.
#[test]
fn pole_residues() {
    let c = chi("4.1");
    let p = params_for(&c);
    let series = CramerSeries::new(&c, &p).unwrap();
    for (prime, m) in [(3u64, 1u32), (5, 1), (2, 1), (3, 2)] {
        let radius = 0.25 * pole_gap(m as f64 * (prime as f64).ln()).min(1.0);
        let probe = series_residue_probe(&series, prime, m, radius).unwrap();
        let formula = pole_residue_formula(&c, prime, m);
        assert!(
            (probe - formula).norm() <= 1e-5 * formula.norm().max(1e-12),
            "({prime},{m}): {probe} vs {formula}"
        );
        let half = series_residue_probe(&series, prime, m, 0.5 * radius).unwrap();
        assert!((probe - half).norm() < 1e-8);
    }
    let probe = series_residue_probe(&series, 3, 1, 0.2).unwrap();
    let modulus = 3f64.ln() / (2.0 * PI) / 3f64.sqrt();
    assert!((probe.norm() - modulus).abs() < 1e-6);
}

/// Boundary limit of the zero sum: `δ·l(δ + i log 3) → Res` as δ → 0
/// (Richardson-extrapolated from δ = 0.1, 0.05).
#[test]
fn residue_from_zero_sum_boundary_limit() {
    let c = chi("4.1");
    let z = find_zeros(&c, 300.0).unwrap();
    let probe = pole_residue_probe(&c, 3, 1, 0.2, &params_for(&c)).unwrap();
    let at = |d: f64| {
        let (v, tail) = l_zero_sum(&c, C64::new(d, 3f64.ln()), &z, 300.0).unwrap();
        (d * v, d * tail)
    };
    let (a, ta) = at(0.1);
    let (b, tb) = at(0.05);
    let extrapolated = 2.0 * b - a;
    assert!(
        (extrapolated - probe).norm() < 2e-3 + 2.0 * (ta + tb),
        "{extrapolated} vs {probe}"
    );
}

#[test]
fn ladder_sum_matches_direct_summation() {
    let quad = QuadratureSpec::with_tol(1e-12);
    let z = C64::from_polar(1.0, -0.3 * PI);
    for t in [
        C64::new(0.0, -2.0),
        C64::new(1.5, 0.5),
        C64::new(-0.5, 0.2),
        C64::new(1e-4, 1e-4),
    ] {
        let mut direct = C64::new(0.0, 0.0);
        let mut zm = C64::new(1.0, 0.0);
        let n = 2_000_000;
        for m in 1..=n {
            zm *= z;
            direct += zm / (m as f64 * (t + m as f64 * PI));
        }
        let v = ladder_sum(z, t, &quad).unwrap();
        // The direct sum's dropped tail is O(1/(π n²)).
        assert!((v - direct).norm() < 1e-11, "t={t}: {v} vs {direct}");
    }
}

#[test]
fn evaluation_errors() {
    let c = chi("4.1");
    let series = CramerSeries::new(&c, &params_for(&c)).unwrap();
    assert!(series.eval(C64::new(0.0, -1.0), Representation::Auto).is_err());
    assert!(series.eval(C64::new(-PI, 0.0), Representation::Auto).is_err());
    assert!(series
        .eval(C64::new(0.0, 3f64.ln()), Representation::Reflected)
        .is_err());
    assert!(series
        .eval(C64::new(-1.0, 0.5), Representation::RightHalfPlane)
        .is_err());
    let bad = CramerEvalParams {
        alpha: 1.2,
        ..params_for(&c)
    };
    assert!(CramerSeries::new(&c, &bad).is_err());
    assert!(CramerEvalParams::defaults_for(6.02).validate(6.02).is_ok());
    let wide = CramerEvalParams {
        epsilon: 7.0,
        ..CramerEvalParams::defaults_for(6.02)
    };
    assert!(wide.validate(6.02).is_err());
}
