//! Parsers for command-line values: grids, complex amplitudes such as
//! `0.3-0.2i`, and comma-separated triples.

use num_complex::Complex64;
use squeeze3::grid::Grid;

fn finite(x: f64, text: &str) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{text:?} is not a finite number"))
    }
}

fn real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let x: f64 = t.parse().map_err(|_| format!("cannot parse {t:?} as a number"))?;
    finite(x, t)
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`, `i` or `-i` (`j` is accepted
/// for `i`).
pub fn complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(t)?, 0.0));
    };
    // The split is the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => real(s)?,
    };
    Ok(Complex64::new(re, im))
}

fn three<T>(text: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<[T; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {}", parts.len()));
    }
    Ok([item(parts[0])?, item(parts[1])?, item(parts[2])?])
}

pub fn complex_triple(text: &str) -> Result<[Complex64; 3], String> {
    three(text, complex)
}

pub fn real_triple(text: &str) -> Result<[f64; 3], String> {
    three(text, real)
}

pub fn grid(text: &str) -> Result<Grid, String> {
    text.parse::<Grid>().map_err(|e| e.to_string())
}

pub fn cutoff_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("cannot parse {:?} as a cutoff", t.trim()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(complex("1+0i").unwrap(), c(1.0, 0.0));
        assert_eq!(complex("0.3-0.2i").unwrap(), c(0.3, -0.2));
        assert_eq!(complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("2-i").unwrap(), c(2.0, -1.0));
        assert_eq!(complex(" 1e-3+2.5E-2j ").unwrap(), c(1e-3, 2.5e-2));
        assert_eq!(complex("-1e+2-3e-1i").unwrap(), c(-100.0, -0.3));
    }

    #[test]
    fn complex_rejects() {
        for bad in ["", "abc", "1+2", "1+ii", "nan", "inf+1i", "1+infi", "1e400", "+-i"] {
            assert!(complex(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn triples() {
        assert_eq!(complex_triple("1+0i,0.3-0.2i,0").unwrap(), [c(1.0, 0.0), c(0.3, -0.2), c(0.0, 0.0)]);
        assert_eq!(real_triple("1, 2,3").unwrap(), [1.0, 2.0, 3.0]);
        assert!(real_triple("1,2").is_err());
        assert!(complex_triple("1,2,3,4").is_err());
    }

    #[test]
    fn grids_and_cutoffs() {
        assert_eq!(grid("0:0.02:1").unwrap().len(), 51);
        assert!(grid("1:0:2").is_err());
        assert_eq!(cutoff_list("8,10, 12").unwrap(), vec![8, 10, 12]);
        assert!(cutoff_list("8,x").is_err());
    }
}
