//! Dirichlet L-functions, the Cramér-type zero series `l_χ(t)`, and the
//! Euler-product expression of the absolute tensor square of two
//! L-functions, together with the zero-side ↔ prime-side key equations.
//!
//! Modules are layered bottom-up:
//! [`characters`] → [`primesums`] / [`special`] → [`lfunctions`] →
//! [`cramer`] → [`tensor`] → [`keyeq`].

// Coefficient tables and reference values keep every digit; `!(x > 0.0)`
// comparisons deliberately reject NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod characters;
pub mod cramer;
pub mod error;
pub mod keyeq;
pub mod lfunctions;
pub mod primesums;
pub mod special;
pub mod sum;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use characters::DirichletCharacter;
pub use cramer::{CramerEvalParams, CramerSeries, Representation};
pub use keyeq::{ResidualReport, VerifyOptions};
pub use lfunctions::{BranchedLogSamples, ZeroList};
pub use special::QuadratureSpec;
pub use tensor::{ContourSpec, TensorEvalParams, TensorSquare};

/// Parse a complex literal of the form `a+bi`, `a-bi`, `a`, `bi`, `i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let t = text.trim();
    let bad = || Error::Input(format!("malformed complex number `{text}` (expected a+bi)"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent or the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let im_of = |s: &str| -> Result<f64> {
            match s {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => s.parse::<f64>().map_err(|_| bad()),
            }
        };
        match split {
            Some(k) => {
                let re = body[..k].parse::<f64>().map_err(|_| bad())?;
                Ok(C64::new(re, im_of(&body[k..])?))
            }
            None => Ok(C64::new(0.0, im_of(body)?)),
        }
    } else {
        t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad())
    }
}

/// Format a complex number as `a+bi` (round-trips through [`parse_complex`]).
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{:e}-{:e}i", z.re, -z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("4+0.155i").unwrap(), C64::new(4.0, 0.155));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("-1-0.5i").unwrap(), C64::new(-1.0, -0.5));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C64::new(1e-3, 20.0));
        assert!(parse_complex("4 + 1i").is_err());
        assert!(parse_complex("abc").is_err());
        let z = C64::new(-0.25, -7.5e-3);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}
