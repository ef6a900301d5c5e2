//! Nontrivial zeros on the critical line: sign-change scan of the rotated
//! completed function, argument-principle counting, exceptional-zero data,
//! the smooth zero-counting function, and the zero-cache file format.

use super::{completed_l_reflected, l_value, log_l_anchored, root_number};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::special::{digamma, log_gamma, quad_finite, QuadratureSpec};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

/// Membership tolerance: a stored ordinate γ must satisfy `|L(1/2 + iγ)| < ZERO_TOL`.
pub const ZERO_TOL: f64 = 1e-8;
/// Default scan step.
pub const SCAN_STEP: f64 = 0.05;
/// Refinement tolerance on ordinates.
const REFINE_TOL: f64 = 1e-12;

/// Positive ordinates of nontrivial zeros up to `complete_to`, with the
/// exceptional-zero bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub label: String,
    /// Strictly increasing ordinates γ of zeros `1/2 + iγ`, all `≤ complete_to`.
    pub ordinates: Vec<f64>,
    pub complete_to: f64,
    /// Order of a zero at `s = 1/2`.
    pub mu0: i32,
    /// Order of real zeros at `1/2 ± τ^(0)`.
    pub mu_tau0: i32,
    /// The exceptional abscissa τ^(0) (1/4 when `mu_tau0 = 0`).
    pub tau0: f64,
}

impl ZeroList {
    /// Smallest ordinate τ^(1) (infinite if the list is empty).
    pub fn first_ordinate(&self) -> f64 {
        self.ordinates.first().copied().unwrap_or(f64::INFINITY)
    }

    /// Number of ordinates `≤ t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Restrict to ordinates `≤ t`.
    pub fn truncated(&self, t: f64) -> ZeroList {
        let mut z = self.clone();
        z.ordinates.truncate(self.count_up_to(t));
        z.complete_to = t.min(self.complete_to);
        z
    }
}

/// Hardy-type phase `θ(t) = (t/2) log(N/π) + Im log Γ((1/2 + a + it)/2)`.
pub fn theta_phase(chi: &DirichletCharacter, t: f64) -> f64 {
    let a = chi.parity_index() as f64;
    let lg = log_gamma(C64::new(0.25 + 0.5 * a, 0.5 * t)).expect("Γ argument has positive real part");
    0.5 * t * (chi.modulus as f64 / PI).ln() + lg.im
}

/// The rotated real form `Z(t) = Re(e^{iθ(t)} ε^{−1/2} L(1/2 + it))`, which
/// equals `L̂(1/2 + it)/√ε` up to a positive factor and is real for every
/// primitive χ.
pub fn rotated_real(chi: &DirichletCharacter, rot: C64, t: f64) -> Result<f64> {
    let l = l_value(chi, C64::new(0.5, t))?;
    Ok((C64::from_polar(1.0, theta_phase(chi, t)) * rot * l).re)
}

fn rotation(chi: &DirichletCharacter) -> C64 {
    1.0 / root_number(chi).sqrt()
}

/// Illinois-modified regula falsi on a bracket with a sign change.
fn refine<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64> {
    let mut side = 0i32;
    for _ in 0..200 {
        if (b - a).abs() < REFINE_TOL {
            return Ok(0.5 * (a + b));
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::Zeros(format!("refinement did not converge in [{a}, {b}]")))
}

/// Scan `(0, T]` with step `h` for sign changes of the rotated real form and refine.
fn scan(chi: &DirichletCharacter, t_max: f64, h: f64) -> Result<Vec<f64>> {
    let rot = rotation(chi);
    let f = |t: f64| rotated_real(chi, rot, t);
    let n = (t_max / h).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| (k as f64 * h).min(t_max)).collect();
    let vals: Vec<f64> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?
    };
    let mut out = Vec::new();
    for k in 0..n {
        let (a, b, fa, fb) = (grid[k], grid[k + 1], vals[k], vals[k + 1]);
        if a == b {
            continue;
        }
        if fa == 0.0 && a > 0.0 {
            out.push(a);
            continue;
        }
        if fa * fb < 0.0 {
            let g = refine(f, a, b, fa, fb)?;
            if g > 0.0 && g <= t_max {
                out.push(g);
            }
        }
    }
    if vals[n] == 0.0 {
        out.push(grid[n]);
    }
    Ok(out)
}

/// [`find_zeros`] with an explicit scan step.
pub fn find_zeros_with_step(chi: &DirichletCharacter, t_max: f64, h: f64) -> Result<ZeroList> {
    if !(t_max > 0.0) {
        return Err(Error::Domain("zero height must be positive".into()));
    }
    if !chi.primitive || chi.is_principal() {
        return Err(Error::Domain(format!(
            "character {} must be primitive and nonprincipal",
            chi.label()
        )));
    }
    let (mu0, mu_tau0, tau0) = mu_data(chi, 1e-10)?;
    let expected = verify_zero_count(chi, t_max)?;
    let mut step = h;
    let mut ordinates = scan(chi, t_max, step)?;
    // A pair of zeros closer than the step hides a sign change; refine the scan
    // before declaring a discrepancy.
    for _ in 0..3 {
        if ordinates.len() == expected {
            break;
        }
        step *= 0.25;
        ordinates = scan(chi, t_max, step)?;
    }
    if ordinates.len() != expected {
        return Err(Error::Zeros(format!(
            "{}: sign-change scan found {} zeros up to {t_max} but the argument principle counts {expected} \
             (possible multiple or off-line zeros)",
            chi.label(),
            ordinates.len()
        )));
    }
    for (k, &g) in ordinates.iter().enumerate() {
        let v = l_value(chi, C64::new(0.5, g))?.norm();
        if v >= ZERO_TOL {
            return Err(Error::Zeros(format!(
                "ordinate #{k} = {g} fails |L| < {ZERO_TOL} (|L| = {v:e})"
            )));
        }
    }
    Ok(ZeroList {
        label: chi.label(),
        ordinates,
        complete_to: t_max,
        mu0,
        mu_tau0,
        tau0,
    })
}

/// Zeros of `L(·, χ)` on the critical line with `0 < γ ≤ T`.
pub fn find_zeros(chi: &DirichletCharacter, t_max: f64) -> Result<ZeroList> {
    find_zeros_with_step(chi, t_max, SCAN_STEP)
}

/// Winding number of `L̂` around the rectangle `[−1/2, 3/2] × [0, T]`,
/// i.e. the number of zeros with `0 < γ ≤ T` in the strip.
pub fn verify_zero_count(chi: &DirichletCharacter, t_max: f64) -> Result<usize> {
    if l_value(chi, C64::new(0.5, t_max))?.norm() < 1e-6 {
        return Err(Error::Zeros(format!(
            "T = {t_max} is within reach of a zero; reposition T"
        )));
    }
    let f = |s: C64| completed_l_reflected(chi, s);
    let corners = [
        C64::new(-0.5, 0.0),
        C64::new(1.5, 0.0),
        C64::new(1.5, t_max),
        C64::new(-0.5, t_max),
        C64::new(-0.5, 0.0),
    ];
    let mut total = 0.0;
    for e in 0..4 {
        let (z0, z1) = (corners[e], corners[e + 1]);
        let n = ((z1 - z0).norm() / 0.1).ceil() as usize;
        let mut prev_z = z0;
        let mut prev_v = f(z0)?;
        for k in 1..=n {
            let z = z0 + (z1 - z0) * (k as f64 / n as f64);
            total += arg_increment(&f, prev_z, prev_v, z, 0)?;
            prev_z = z;
            prev_v = f(z)?;
        }
    }
    let winding = total / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.1 || rounded < 0.0 {
        return Err(Error::Zeros(format!(
            "non-integral winding {winding} up to T = {t_max}"
        )));
    }
    Ok(rounded as usize)
}

fn arg_increment<F: Fn(C64) -> Result<C64>>(f: &F, z0: C64, v0: C64, z1: C64, depth: u32) -> Result<f64> {
    let v1 = f(z1)?;
    let d = (v1 / v0).arg();
    if d.abs() < PI / 4.0 {
        return Ok(d);
    }
    if depth > 40 {
        return Err(Error::Zeros(format!(
            "argument tracking failed between {z0} and {z1} (zero on contour?)"
        )));
    }
    let mid = 0.5 * (z0 + z1);
    let vm = f(mid)?;
    Ok(arg_increment(f, z0, v0, mid, depth + 1)? + arg_increment(f, mid, vm, z1, depth + 1)?)
}

/// `(mu0, mu_tau0, tau0)`: order at `s = 1/2` (only 0 can be certified) and the
/// real exceptional zeros in `(0, 1)` located by a sign scan of `L(σ, χ)` (real χ).
pub fn mu_data(chi: &DirichletCharacter, tol: f64) -> Result<(i32, i32, f64)> {
    let centre = l_value(chi, C64::new(0.5, 0.0))?.norm();
    if centre <= tol {
        return Err(Error::Indeterminate(format!(
            "|L(1/2, {})| = {centre:e} ≤ {tol:e}: order of vanishing cannot be decided numerically",
            chi.label()
        )));
    }
    if !chi.is_real() {
        return Ok((0, 0, 0.25));
    }
    let n = 200;
    let mut prev = l_value(chi, C64::new(0.5, 0.0))?.re;
    for k in 1..n {
        let sigma = 0.5 * (1.0 - k as f64 / n as f64);
        let v = l_value(chi, C64::new(sigma, 0.0))?.re;
        if v * prev <= 0.0 {
            let f = |x: f64| l_value(chi, C64::new(x, 0.0)).map(|v| v.re);
            let hi = 0.5 * (1.0 - (k - 1) as f64 / n as f64);
            let root = refine(f, sigma, hi, v, prev)?;
            return Ok((0, 1, 0.5 - root));
        }
        prev = v;
    }
    Ok((0, 0, 0.25))
}

/// Smooth zero density `N'(t) = (1/2π)[log(N/π) + Re ψ((1/2 + a + it)/2)]`.
pub fn zero_density(chi: &DirichletCharacter, t: f64) -> f64 {
    let a = chi.parity_index() as f64;
    let psi = digamma(C64::new(0.25 + 0.5 * a, 0.5 * t)).expect("digamma off its poles");
    ((chi.modulus as f64 / PI).ln() + psi.re) / (2.0 * PI)
}

/// Remainder `S(T) = N(T) − (θ(T) − arg L(1/2))/π` of the exact counting
/// formula, evaluated with the list's count at its completion height.
pub fn counting_remainder(chi: &DirichletCharacter, zeros: &ZeroList) -> Result<f64> {
    let a0 = log_l_anchored(chi, C64::new(0.5, 0.0))?.im;
    let smooth = (theta_phase(chi, zeros.complete_to) - a0) / PI;
    Ok(zeros.ordinates.len() as f64 - smooth)
}

/// Estimate `Σ_{γ > T} f(γ)` for the zeros beyond the list's height:
/// `∫_T^∞ f N' dγ − f(T) S(T)`, with an uncertainty `|f(T)|` covering the
/// neglected `∫ S f'` (|S| ≲ 1 at these heights).
pub fn zero_tail_correction<F: Fn(f64) -> C64>(chi: &DirichletCharacter, zeros: &ZeroList, f: F) -> Result<(C64, f64)> {
    let t0 = zeros.complete_to;
    let remainder = counting_remainder(chi, zeros)?;
    let spec = QuadratureSpec::with_tol(1e-12);
    // γ = T/v maps [T, ∞) onto (0, 1].
    let integral = quad_finite(
        |v| {
            let g = t0 / v;
            f(g) * zero_density(chi, g) * (t0 / (v * v))
        },
        0.0,
        1.0,
        &spec,
    )
    .or_else(|_| {
        quad_finite(
            |v| {
                let g = t0 / v;
                f(g) * zero_density(chi, g) * (t0 / (v * v))
            },
            0.0,
            1.0,
            &QuadratureSpec::with_tol(1e-9),
        )
    })?;
    let ft = f(t0);
    Ok((integral.value - ft * remainder, ft.norm() + integral.error))
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a zero list in the cache format: a header line
/// `label=<N.k> T=<float> mu0=<int> mu_tau0=<int> tau0=<float>`, then one ordinate per line.
pub fn save_zeros(list: &ZeroList, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(
        out,
        "label={} T={} mu0={} mu_tau0={} tau0={}",
        list.label,
        fmt_f64(list.complete_to),
        list.mu0,
        list.mu_tau0,
        fmt_f64(list.tau0)
    )
    .expect("string write");
    for g in &list.ordinates {
        writeln!(out, "{}", fmt_f64(*g)).expect("string write");
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    // Write then rename so readers never observe a partial file.
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, out)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Read a zero list written by [`save_zeros`] (or an external file in the same format).
pub fn load_zeros(path: &Path) -> Result<ZeroList> {
    let text = std::fs::read_to_string(path)?;
    parse_zeros(&text, &path.display().to_string())
}

fn parse_zeros(text: &str, origin: &str) -> Result<ZeroList> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input(format!("{origin}: empty zero file")))?;
    let mut label = None;
    let (mut t, mut mu0, mut mu_tau0, mut tau0) = (None, None, None, None);
    for field in header.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("{origin}:1: malformed header field `{field}`")))?;
        let bad = || Error::Input(format!("{origin}:1: bad value for `{k}`"));
        match k {
            "label" => label = Some(v.to_string()),
            "T" => t = Some(v.parse::<f64>().map_err(|_| bad())?),
            "mu0" => mu0 = Some(v.parse::<i32>().map_err(|_| bad())?),
            "mu_tau0" => mu_tau0 = Some(v.parse::<i32>().map_err(|_| bad())?),
            "tau0" => tau0 = Some(v.parse::<f64>().map_err(|_| bad())?),
            _ => return Err(Error::Input(format!("{origin}:1: unknown header key `{k}`"))),
        }
    }
    let missing = |k: &str| Error::Input(format!("{origin}:1: header lacks `{k}`"));
    let list = ZeroList {
        label: label.ok_or_else(|| missing("label"))?,
        complete_to: t.ok_or_else(|| missing("T"))?,
        mu0: mu0.ok_or_else(|| missing("mu0"))?,
        mu_tau0: mu_tau0.ok_or_else(|| missing("mu_tau0"))?,
        tau0: tau0.ok_or_else(|| missing("tau0"))?,
        ordinates: Vec::new(),
    };
    let mut list = list;
    for (k, line) in lines.enumerate() {
        let line_no = k + 2;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        let g: f64 = s
            .parse()
            .map_err(|_| Error::Input(format!("{origin}:{line_no}: not a number: `{s}`")))?;
        if let Some(&last) = list.ordinates.last() {
            if g <= last {
                return Err(Error::Input(format!(
                    "{origin}:{line_no}: ordinates must be strictly increasing"
                )));
            }
        }
        if g <= 0.0 || g > list.complete_to {
            return Err(Error::Input(format!("{origin}:{line_no}: ordinate {g} outside (0, T]")));
        }
        list.ordinates.push(g);
    }
    if list.mu_tau0 == 0 && list.tau0 != 0.25 {
        return Err(Error::Input(format!("{origin}:1: mu_tau0 = 0 requires tau0 = 1/4")));
    }
    Ok(list)
}

/// Load an external zero file for `chi`, re-validating each ordinate
/// (`|L(1/2 + iγ)| < ZERO_TOL`) and the count against the argument principle.
pub fn ingest_external(path: &Path, chi: &DirichletCharacter) -> Result<ZeroList> {
    let list = load_zeros(path)?;
    if list.label != chi.label() {
        return Err(Error::Input(format!(
            "{}: label {} does not match character {}",
            path.display(),
            list.label,
            chi.label()
        )));
    }
    for (k, &g) in list.ordinates.iter().enumerate() {
        let v = l_value(chi, C64::new(0.5, g))?.norm();
        if v >= ZERO_TOL {
            return Err(Error::Input(format!(
                "{}:{}: ordinate {g} is not a zero (|L| = {v:e})",
                path.display(),
                k + 2
            )));
        }
    }
    let count = verify_zero_count(chi, list.complete_to)?;
    if count != list.ordinates.len() {
        return Err(Error::Input(format!(
            "{}: list has {} ordinates but {count} zeros lie below T = {}",
            path.display(),
            list.ordinates.len(),
            list.complete_to
        )));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(label: &str) -> DirichletCharacter {
        DirichletCharacter::from_label(label).unwrap()
    }

    #[test]
    fn first_zeros_mod_4_and_3() {
        // Oracle: independent mpmath scan of the rotated completed function.
        let z = find_zeros(&chi("4.1"), 30.0).unwrap();
        assert_eq!(z.ordinates.len(), 10);
        assert!((z.ordinates[0] - 6.020_948_904_697_597).abs() < 1e-9);
        assert!((z.ordinates[9] - 29.656_384_014_593_154).abs() < 1e-9);
        let z = find_zeros(&chi("3.1"), 20.0).unwrap();
        assert!(z.ordinates[0] > 8.0 && z.ordinates[0] < 8.1);
        assert!((z.ordinates[0] - 8.039_737_155_681_467).abs() < 1e-9);
        assert_eq!((z.mu0, z.mu_tau0, z.tau0), (0, 0, 0.25));
    }

    #[test]
    fn counting() {
        let c4 = chi("4.1");
        assert_eq!(verify_zero_count(&c4, 5.0).unwrap(), 0);
        assert_eq!(verify_zero_count(&c4, 30.0).unwrap(), 10);
        assert_eq!(verify_zero_count(&c4, 60.0).unwrap(), 25);
        let mut last = 0;
        for t in [7.0, 11.0, 14.0, 17.0] {
            let n = verify_zero_count(&c4, t).unwrap();
            assert!(n >= last);
            last = n;
        }
        assert!(verify_zero_count(&c4, 6.020_948_904_697_597).is_err());
    }

    #[test]
    fn complex_character_zeros() {
        let c5 = chi("5.1");
        let z = find_zeros(&c5, 25.0).unwrap();
        assert!(!z.ordinates.is_empty());
        assert_eq!(mu_data(&c5, 1e-10).unwrap(), (0, 0, 0.25));
    }

    #[test]
    fn mu_data_small_real() {
        assert_eq!(mu_data(&chi("4.1"), 1e-10).unwrap(), (0, 0, 0.25));
        assert_eq!(mu_data(&chi("3.1"), 1e-10).unwrap(), (0, 0, 0.25));
    }

    #[test]
    fn density_integrates_to_count() {
        // ∫_0^T N' = (θ(T) − θ(0))/π and the remainder stays small.
        let c4 = chi("4.1");
        let z = find_zeros(&c4, 60.0).unwrap();
        let s = counting_remainder(&c4, &z).unwrap();
        assert!(s.abs() < 1.5, "S(60) = {s}");
        let spec = QuadratureSpec::with_tol(1e-12);
        let integ = quad_finite(|t| C64::new(zero_density(&c4, t), 0.0), 0.0, 60.0, &spec).unwrap();
        let d = (theta_phase(&c4, 60.0) - theta_phase(&c4, 0.0)) / PI;
        assert!((integ.value.re - d).abs() < 1e-9);
    }

    #[test]
    fn file_round_trip_and_ingest() {
        let c4 = chi("4.1");
        let z = find_zeros(&c4, 20.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("4.1.zeros");
        save_zeros(&z, &p).unwrap();
        assert_eq!(load_zeros(&p).unwrap(), z);
        assert_eq!(ingest_external(&p, &c4).unwrap(), z);
        // Corrupt the third ordinate.
        let text = std::fs::read_to_string(&p).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[3] = "13.5".into();
        std::fs::write(&p, lines.join("\n")).unwrap();
        match ingest_external(&p, &c4) {
            Err(Error::Input(m)) => assert!(m.contains(":4:"), "{m}"),
            other => panic!("expected rejection, got {other:?}"),
        }
        std::fs::write(&p, "label=4.1 T=10\n").unwrap();
        assert!(load_zeros(&p).is_err());
    }
}
