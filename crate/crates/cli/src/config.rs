//! Run settings: defaults, a line-based `key = value` file, and flag overrides.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::CliError;

/// Output format of a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by all subcommands. `None` means "use the subcommand default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub prime_limit: Option<u64>,
    pub inner_limit: Option<u64>,
    pub zero_height: Option<f64>,
    pub tol: Option<f64>,
    pub continued: bool,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Settings {
    /// Parse a config file: one `key = value` per line, `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("{origin}:{}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || CliError::input(format!("{origin}:{}: bad value `{value}` for `{key}`", n + 1));
            match key {
                "alpha" => s.alpha = Some(value.parse().map_err(|_| bad())?),
                "epsilon" => s.epsilon = Some(value.parse().map_err(|_| bad())?),
                "theta" => s.theta = Some(value.parse().map_err(|_| bad())?),
                "prime_limit" => s.prime_limit = Some(value.parse().map_err(|_| bad())?),
                "inner_limit" => s.inner_limit = Some(value.parse().map_err(|_| bad())?),
                "zero_height" => s.zero_height = Some(value.parse().map_err(|_| bad())?),
                "tol" => s.tol = Some(value.parse().map_err(|_| bad())?),
                "continued" => s.continued = value.parse().map_err(|_| bad())?,
                "format" => s.format = Some(Format::from_str(value, true).map_err(|_| bad())?),
                "cache_dir" => s.cache_dir = Some(PathBuf::from(value)),
                "threads" => s.threads = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(CliError::input(format!("{origin}:{}: unknown key `{key}`", n + 1))),
            }
        }
        s.check()?;
        Ok(s)
    }

    /// Fill every field set in `over` into `self`.
    pub fn overridden_by(mut self, over: &Settings) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f.clone(); } )* };
        }
        take!(
            alpha,
            epsilon,
            theta,
            prime_limit,
            inner_limit,
            zero_height,
            tol,
            format,
            cache_dir,
            threads
        );
        self.continued |= over.continued;
        self
    }

    /// Range checks that do not depend on the characters; the full parameter
    /// constraints are validated again once the characters are known.
    pub fn check(&self) -> Result<(), CliError> {
        let open_unit = |x: Option<f64>| x.is_none_or(|v| v > 0.0 && v < 1.0);
        if !open_unit(self.alpha) {
            return Err(CliError::input("alpha must lie in (0, 1)"));
        }
        if self.epsilon.is_some_and(|v| !(v > 0.0)) {
            return Err(CliError::input("epsilon must be positive"));
        }
        if self
            .theta
            .is_some_and(|v| !(v > 0.0 && v < std::f64::consts::FRAC_PI_4))
        {
            return Err(CliError::input("theta must lie in (0, π/4)"));
        }
        if self.prime_limit.is_some_and(|p| p < 2) {
            return Err(CliError::input("prime limit must be at least 2"));
        }
        if self.zero_height.is_some_and(|t| !(t > 0.0)) {
            return Err(CliError::input("zero height must be positive"));
        }
        if self.tol.is_some_and(|t| !(t > 0.0)) {
            return Err(CliError::input("tolerance must be positive"));
        }
        if self.threads == Some(0) {
            return Err(CliError::input("thread count must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let s = Settings::parse(
            "# comment\nalpha = 0.3\nprime_limit=1000 # inline\nformat = JSON\ncontinued = true\n",
            "t",
        )
        .unwrap();
        assert_eq!(s.alpha, Some(0.3));
        assert_eq!(s.prime_limit, Some(1000));
        assert_eq!(s.format, Some(Format::Json));
        assert!(s.continued);
        let flags = Settings {
            alpha: Some(0.6),
            ..Settings::default()
        };
        let m = s.overridden_by(&flags);
        assert_eq!((m.alpha, m.prime_limit), (Some(0.6), Some(1000)));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Settings::parse("alpha 0.3", "t").is_err());
        assert!(Settings::parse("gamma = 1", "t").is_err());
        assert!(Settings::parse("alpha = 1.5", "t").is_err());
        assert!(Settings::parse("prime_limit = -3", "t").is_err());
    }
}
