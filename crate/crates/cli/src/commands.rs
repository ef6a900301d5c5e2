//! Subcommand implementations. Each returns the process exit code.

use std::fmt::Write as _;
use std::path::PathBuf;

use ltensor_core::characters::{conjugate, enumerate_characters, gauss_sum};
use ltensor_core::cramer::l_zero_sum;
use ltensor_core::keyeq::{admissible_angles, region_check, verify_r1_with, verify_r2_with, RegionParams};
use ltensor_core::lfunctions::{
    completed_l, find_zeros, functional_equation_residual, l_value, load_zeros, save_zeros,
};
use ltensor_core::tensor::tensor_square;
use ltensor_core::{
    CramerEvalParams, CramerSeries, DirichletCharacter, Representation, ResidualReport, TensorEvalParams, TensorSquare,
    VerifyOptions, ZeroList, C64,
};
use serde_json::json;

use crate::config::{Format, Settings};
use crate::CliError;

pub type Outcome = Result<u8, CliError>;

/// Write a line to stdout; a closed pipe (e.g. `| head`) is not an error.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// Zero lists are read from and written to the cache directory, if one is set.
pub struct ZeroCache {
    dir: Option<PathBuf>,
}

impl ZeroCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        ZeroCache { dir }
    }

    fn path(&self, chi: &DirichletCharacter) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("zeros_{}.txt", chi.label())))
    }

    /// Zeros of `chi` up to `height`: from the cache when it reaches far enough,
    /// otherwise computed and written back.
    pub fn zeros(&self, chi: &DirichletCharacter, height: f64) -> Result<ZeroList, CliError> {
        let path = self.path(chi);
        if let Some(p) = path.as_ref().filter(|p| p.exists()) {
            let cached = load_zeros(p)?;
            if cached.label != chi.label() {
                return Err(CliError::input(format!(
                    "cache file {} holds zeros of {}",
                    p.display(),
                    cached.label
                )));
            }
            if cached.complete_to >= height {
                return Ok(cached.truncated(height));
            }
        }
        let list = find_zeros(chi, height)?;
        if let Some(p) = path {
            save_zeros(&list, &p)?;
        }
        Ok(list)
    }

    /// Zeros of `chi` and of its conjugate.
    pub fn pair(&self, chi: &DirichletCharacter, height: f64) -> Result<(ZeroList, ZeroList), CliError> {
        let z = self.zeros(chi, height)?;
        let zc = if chi.is_real() {
            z.clone()
        } else {
            self.zeros(&conjugate(chi), height)?
        };
        Ok((z, zc))
    }

    /// The first zero ordinate of `chi` and `χ̄`, searching upward in height.
    pub fn first_ordinate(&self, chi: &DirichletCharacter) -> Result<f64, CliError> {
        for height in [30.0, 100.0, 300.0] {
            let (z, zc) = self.pair(chi, height)?;
            let tau1 = z.first_ordinate().min(zc.first_ordinate());
            if tau1.is_finite() {
                return Ok(tau1);
            }
        }
        Err(CliError::compute(format!(
            "no zero of {} found below height 300",
            chi.label()
        )))
    }
}

pub fn character(label: &str) -> Result<DirichletCharacter, CliError> {
    Ok(DirichletCharacter::from_label(label)?)
}

pub fn complex(text: &str) -> Result<C64, CliError> {
    Ok(ltensor_core::parse_complex(text)?)
}

/// Parse `a:b:step` into `a, a + step, …, ≤ b`.
pub fn real_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::input(format!("malformed grid `{spec}` (expected start:stop:step)"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(CliError::input(format!("grid `{spec}` has too many points")));
    }
    Ok((0..=n).map(|k| a + step * k as f64).collect())
}

/// Sample points from either a single value or a real grid shifted by `im`.
pub fn points(single: Option<&str>, grid: Option<&str>, im: f64, what: &str) -> Result<Vec<C64>, CliError> {
    match (single, grid) {
        (Some(z), None) => Ok(vec![complex(z)?]),
        (None, Some(g)) => Ok(real_grid(g)?.into_iter().map(|re| C64::new(re, im)).collect()),
        (None, None) => Err(CliError::input(format!("give --{what} or --{what}-grid"))),
        (Some(_), Some(_)) => Err(CliError::input(format!("--{what} and --{what}-grid are exclusive"))),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:e}")
}

fn json_out<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::compute(e.to_string()))
}

pub fn chars(modulus: u64, format: Format) -> Outcome {
    if modulus == 0 || modulus > 100_000 {
        return Err(CliError::input(format!("modulus {modulus} out of range 1..=100000")));
    }
    let rows: Vec<_> = enumerate_characters(modulus)
        .into_iter()
        .map(|c| {
            (
                c.label(),
                c.conductor,
                c.primitive,
                c.parity,
                c.is_real(),
                gauss_sum(&c),
            )
        })
        .collect();
    match format {
        Format::Csv => {
            let mut out = String::from("label,conductor,primitive,parity,real,gauss_re,gauss_im\n");
            for (label, cond, prim, par, real, g) in rows {
                writeln!(out, "{label},{cond},{prim},{par},{real},{},{}", fmt(g.re), fmt(g.im)).unwrap();
            }
            outln!("{}", out.trim_end());
        }
        Format::Json => {
            let list: Vec<_> = rows
                .into_iter()
                .map(|(label, cond, prim, par, real, g)| {
                    json!({"label": label, "conductor": cond, "primitive": prim, "parity": par, "real": real, "gauss_sum": g})
                })
                .collect();
            outln!("{}", json_out(&list)?);
        }
    }
    Ok(0)
}

pub fn zeros(label: &str, show: usize, settings: &Settings, cache: &ZeroCache, format: Format) -> Outcome {
    let chi = character(label)?;
    let height = settings.zero_height.unwrap_or(150.0);
    let list = cache.zeros(&chi, height)?;
    let first: Vec<f64> = list.ordinates.iter().take(show).copied().collect();
    match format {
        Format::Csv => {
            let mut out = String::from("label,count,complete_to,n,gamma\n");
            for (n, g) in first.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    list.label,
                    list.ordinates.len(),
                    fmt(list.complete_to),
                    n + 1,
                    fmt(*g)
                )
                .unwrap();
            }
            outln!("{}", out.trim_end());
        }
        Format::Json => {
            let v = json!({
                "label": list.label, "count": list.ordinates.len(), "complete_to": list.complete_to,
                "mu0": list.mu0, "mu_tau0": list.mu_tau0, "tau0": list.tau0, "first": first,
            });
            outln!("{}", json_out(&v)?);
        }
    }
    Ok(0)
}

pub fn lvalue(label: &str, s: &str, format: Format) -> Outcome {
    let chi = character(label)?;
    let s = complex(s)?;
    let l = l_value(&chi, s)?;
    let completed = completed_l(&chi, s)?;
    let fe = functional_equation_residual(&chi, s)?;
    match format {
        Format::Csv => {
            outln!("label,s_re,s_im,l_re,l_im,completed_re,completed_im,fe_residual");
            outln!(
                "{label},{},{},{},{},{},{},{}",
                fmt(s.re),
                fmt(s.im),
                fmt(l.re),
                fmt(l.im),
                fmt(completed.re),
                fmt(completed.im),
                fmt(fe)
            );
        }
        Format::Json => {
            let v = json!({"label": chi.label(), "s": s, "l": l, "completed_l": completed, "functional_equation_residual": fe});
            outln!("{}", json_out(&v)?);
        }
    }
    Ok(0)
}

/// Explicit-formula parameters for one character from the settings.
fn cramer_params(settings: &Settings, tau1: f64) -> CramerEvalParams {
    let mut p = CramerEvalParams::defaults_for(tau1);
    if let Some(a) = settings.alpha {
        p.alpha = a;
    }
    if let Some(e) = settings.epsilon {
        p.epsilon = e;
        p.theta = 0.5 * e.atan();
    }
    if let Some(t) = settings.theta {
        p.theta = t;
    }
    if let Some(n) = settings.prime_limit {
        p.prime_limit = n;
    }
    if let Some(t) = settings.zero_height {
        p.zero_height = t;
    }
    p
}

pub fn theta(label: &str, ts: &[C64], settings: &Settings, cache: &ZeroCache, format: Format) -> Outcome {
    let chi = character(label)?;
    let tau1 = cache.first_ordinate(&chi)?;
    let params = cramer_params(settings, tau1);
    params.validate(tau1)?;
    let series = CramerSeries::new(&chi, &params)?;
    let zeros = cache.zeros(&chi, params.zero_height)?;
    let mut rows = Vec::new();
    for &t in ts {
        rows.push((t, "explicit", series.eval(t, Representation::Auto)?, 0.0));
        if t.re > 0.0 {
            rows.push((t, "reflected", series.eval(t, Representation::Reflected)?, 0.0));
            let (v, tail) = l_zero_sum(&chi, t, &zeros, params.zero_height)?;
            rows.push((t, "zero_sum", v, tail));
        }
    }
    match format {
        Format::Csv => {
            let mut out = String::from("t_re,t_im,method,value_re,value_im,tail\n");
            for (t, m, v, tail) in rows {
                writeln!(
                    out,
                    "{},{},{m},{},{},{}",
                    fmt(t.re),
                    fmt(t.im),
                    fmt(v.re),
                    fmt(v.im),
                    fmt(tail)
                )
                .unwrap();
            }
            outln!("{}", out.trim_end());
        }
        Format::Json => {
            let list: Vec<_> = rows
                .into_iter()
                .map(|(t, m, v, tail)| json!({"t": t, "method": m, "value": v, "tail": tail}))
                .collect();
            outln!(
                "{}",
                json_out(&json!({"label": chi.label(), "params": params, "rows": list}))?
            );
        }
    }
    Ok(0)
}

/// Pair parameters from the settings, validated against the first zeros.
fn tensor_params(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    settings: &Settings,
    cache: &ZeroCache,
) -> Result<(TensorEvalParams, f64), CliError> {
    let mut p = TensorEvalParams::for_characters(chi1, chi2)?;
    if let Some(a) = settings.alpha {
        p = p.with_alpha(a);
    }
    if let Some(e) = settings.epsilon {
        p = p.with_epsilon(e);
        p.theta = 0.5 * e.atan();
    }
    if let Some(t) = settings.theta {
        p.theta = t;
    }
    if let Some(n) = settings.prime_limit {
        p = p.with_prime_limit(n);
    }
    if let Some(n) = settings.inner_limit {
        p.inner_limit = n;
    }
    if let Some(t) = settings.zero_height {
        p.zero_height = t;
    }
    p.chi1.theta = p.theta;
    p.chi2.theta = p.theta;
    let tau1 = cache.first_ordinate(chi1)?.min(cache.first_ordinate(chi2)?);
    p.validate(tau1)?;
    Ok((p, tau1))
}

fn tensor_values(
    labels: [&str; 2],
    ss: &[C64],
    settings: &Settings,
    cache: &ZeroCache,
) -> Result<Vec<TensorSquare>, CliError> {
    let (chi1, chi2) = (character(labels[0])?, character(labels[1])?);
    let (params, _) = tensor_params(&chi1, &chi2, settings, cache)?;
    ss.iter()
        .map(|&s| Ok(tensor_square(s, &chi1, &chi2, &params)?))
        .collect()
}

fn tensor_csv_header() -> String {
    let mut h = String::from("s_re,s_im,alpha,epsilon,value_re,value_im,log_re,log_im");
    for k in 1..=10 {
        write!(h, ",E{k}_re,E{k}_im").unwrap();
    }
    h.push_str(",error_estimate");
    h
}

fn tensor_csv_row(v: &TensorSquare) -> String {
    let mut row = format!(
        "{},{},{},{},{},{},{},{}",
        fmt(v.s.re),
        fmt(v.s.im),
        fmt(v.params.alpha),
        fmt(v.params.epsilon),
        fmt(v.value.re),
        fmt(v.value.im),
        fmt(v.log_value.re),
        fmt(v.log_value.im)
    );
    for e in &v.per_term {
        write!(row, ",{},{}", fmt(e.re), fmt(e.im)).unwrap();
    }
    write!(row, ",{}", fmt(v.error_estimate)).unwrap();
    row
}

/// The tensor-square JSON object: `{s, value, per_term, error_estimate, params}`.
fn tensor_json(v: &TensorSquare) -> serde_json::Value {
    json!({"s": v.s, "value": v.value, "per_term": v.per_term, "error_estimate": v.error_estimate, "params": v.params})
}

pub fn tensor_eval(labels: [&str; 2], ss: &[C64], settings: &Settings, cache: &ZeroCache, format: Format) -> Outcome {
    let values = tensor_values(labels, ss, settings, cache)?;
    match format {
        Format::Csv => {
            outln!("{}", tensor_csv_header());
            for v in &values {
                outln!("{}", tensor_csv_row(v));
            }
        }
        Format::Json => {
            let out = if values.len() == 1 {
                tensor_json(&values[0])
            } else {
                serde_json::Value::Array(values.iter().map(tensor_json).collect())
            };
            outln!("{}", json_out(&out)?);
        }
    }
    Ok(0)
}

/// Evaluate the tensor square for every `(α, ε)` pair and report the largest
/// relative spread per sample point; exit 1 when it exceeds the tolerance.
pub fn sweep(
    labels: [&str; 2],
    ss: &[C64],
    alphas: &[f64],
    epsilons: &[f64],
    settings: &Settings,
    cache: &ZeroCache,
    format: Format,
) -> Outcome {
    let tol = settings.tol.unwrap_or(1e-6);
    let mut runs = Vec::new();
    for &a in alphas {
        for &e in epsilons {
            let local = Settings {
                alpha: Some(a),
                epsilon: Some(e),
                ..settings.clone()
            };
            local.check()?;
            runs.push(tensor_values(labels, ss, &local, cache)?);
        }
    }
    let spread: Vec<f64> = (0..ss.len())
        .map(|i| {
            let vals: Vec<C64> = runs.iter().map(|r| r[i].value).collect();
            let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            vals.iter()
                .flat_map(|a| vals.iter().map(move |b| (a - b).norm()))
                .fold(0.0, f64::max)
                / scale
        })
        .collect();
    let worst = spread.iter().copied().fold(0.0, f64::max);
    match format {
        Format::Csv => {
            outln!("{}", tensor_csv_header());
            for run in &runs {
                for v in run {
                    outln!("{}", tensor_csv_row(v));
                }
            }
        }
        Format::Json => {
            let list: Vec<_> = runs.iter().flatten().map(tensor_json).collect();
            outln!("{}", json_out(&json!({"values": list, "relative_spread": spread}))?);
        }
    }
    let pass = worst < tol;
    eprintln!(
        "{} sweep max relative spread={worst:.3e} tol={tol:.1e}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 1 })
}

fn emit_report(report: &ResidualReport, format: Format) -> Outcome {
    match format {
        Format::Json => outln!("{}", json_out(report)?),
        Format::Csv => {
            outln!("r,labels,w_re,w_im,s_re,s_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,zero_tail,prime_tail,in_region,pass");
            let (p, w, s) = (&report.params, report.params.w, report.params.s);
            outln!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p.r,
                p.labels.join(" "),
                fmt(w.re),
                fmt(w.im),
                fmt(s.re),
                fmt(s.im),
                fmt(report.lhs.re),
                fmt(report.lhs.im),
                fmt(report.rhs.re),
                fmt(report.rhs.im),
                fmt(report.abs_residual),
                fmt(report.rel_residual),
                fmt(report.zero_tail),
                fmt(report.prime_tail),
                p.in_region,
                report.pass
            );
        }
    }
    eprintln!("{}", report.summary());
    Ok(if report.pass { 0 } else { 1 })
}

/// Without an explicit `--theta`, move `θ` (and `ε`, unless given) into the
/// window that puts `(w, s)` in the region when the defaults miss it.
fn auto_angles(w: C64, s: C64, r: u32, region: RegionParams, settings: &Settings, tau1: f64) -> Option<(f64, f64)> {
    if settings.theta.is_some() || region_check(w, s, r, &region) {
        return None;
    }
    let eps_max = settings.epsilon.unwrap_or((0.5 * tau1).min(1.0));
    admissible_angles(s, r, region.tau0, eps_max).map(|(theta, eps)| (theta, settings.epsilon.unwrap_or(eps)))
}

fn verify_options(settings: &Settings) -> VerifyOptions {
    VerifyOptions {
        tol: settings.tol.unwrap_or(1e-3),
        continued: settings.continued,
    }
}

pub fn verify_r1(label: &str, w: &str, s: &str, settings: &Settings, cache: &ZeroCache, format: Format) -> Outcome {
    let chi = character(label)?;
    let (w, s) = (complex(w)?, complex(s)?);
    let tau1 = cache.first_ordinate(&chi)?;
    let mut params = cramer_params(settings, tau1);
    let (z, zc) = cache.pair(&chi, params.zero_height)?;
    if let Some((theta, eps)) = auto_angles(w, s, 1, RegionParams::from_cramer(&params, z.tau0), settings, tau1) {
        params.theta = theta;
        params.epsilon = eps;
    }
    params.validate(tau1)?;
    let report = verify_r1_with(w, s, &chi, &z, &zc, &params, &verify_options(settings))?;
    emit_report(&report, format)
}

pub fn verify_r2(
    labels: [&str; 2],
    w: &str,
    s: &str,
    settings: &Settings,
    cache: &ZeroCache,
    format: Format,
) -> Outcome {
    let (chi1, chi2) = (character(labels[0])?, character(labels[1])?);
    let (w, s) = (complex(w)?, complex(s)?);
    let (mut params, tau1) = tensor_params(&chi1, &chi2, settings, cache)?;
    if let Some((theta, eps)) = auto_angles(w, s, 2, RegionParams::from_tensor(&params), settings, tau1) {
        params = params.with_epsilon(eps);
        params.theta = theta;
        params.chi1.theta = theta;
        params.chi2.theta = theta;
    }
    params.validate(tau1)?;
    let (z1, z1c) = cache.pair(&chi1, params.zero_height)?;
    let (z2, z2c) = cache.pair(&chi2, params.zero_height)?;
    let report = verify_r2_with(
        w,
        s,
        &chi1,
        &chi2,
        [&z1, &z2, &z1c, &z2c],
        &params,
        &verify_options(settings),
    )?;
    emit_report(&report, format)
}
