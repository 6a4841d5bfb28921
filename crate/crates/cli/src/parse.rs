//! Text formats accepted on the command line.

use std::path::Path;

use szego::ensemble::SingleSiteMeasure;
use szego::{Complex64, Word64};

use crate::CliError;

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`).
pub fn complex(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x)?,
    };
    let z = Complex64::new(re, im);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

pub fn complex_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',').map(complex).collect()
}

pub fn word(s: &str) -> Result<Word64, CliError> {
    Ok(Word64::from_complex(complex_list(s)?)?)
}

pub fn reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse number '{x}'")))
        })
        .collect()
}

/// `constant:A`, `uniform:A,B` or `atoms:Z1,Z2,...` where an atom may carry
/// a weight as `Z@W` (all or none weighted; default equal weights).
pub fn measure(s: &str) -> Result<SingleSiteMeasure<f64>, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("measure '{s}' must look like kind:values")))?;
    match kind {
        "constant" => Ok(SingleSiteMeasure::constant(complex(rest)?.re)?),
        "uniform" => match reals(rest)?.as_slice() {
            [a, b] => Ok(SingleSiteMeasure::uniform(*a, *b)?),
            _ => Err(CliError::Usage("uniform measure needs two endpoints".into())),
        },
        "atoms" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.iter().all(|p| p.contains('@')) {
                let atoms = parts
                    .iter()
                    .map(|p| {
                        let (z, w) = p.split_once('@').expect("checked");
                        let w = w
                            .trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::Usage(format!("cannot parse weight '{w}'")))?;
                        Ok((complex(z)?, w))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(SingleSiteMeasure::atoms(atoms)?)
            } else if parts.iter().any(|p| p.contains('@')) {
                Err(CliError::Usage("either all atoms carry weights or none".into()))
            } else {
                Ok(SingleSiteMeasure::uniform_atoms(&complex_list(rest)?)?)
            }
        }
        _ => Err(CliError::Usage(format!("unknown measure kind '{kind}'"))),
    }
}

/// One positive decimal coupling per line; blank lines and `#` comments
/// are skipped.
pub fn couplings(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read coupling file {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let j: f64 = l
            .parse()
            .map_err(|_| CliError::Usage(format!("line {}: cannot parse coupling '{l}'", n + 1)))?;
        out.push(j);
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("{} holds no couplings", path.display())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |s| complex(s).unwrap();
        assert_eq!(c("0.5"), Complex64::new(0.5, 0.0));
        assert_eq!(c("0.9i"), Complex64::new(0.0, 0.9));
        assert_eq!(c("-0.3-0.2i"), Complex64::new(-0.3, -0.2));
        assert_eq!(c("0.1+0.2i"), Complex64::new(0.1, 0.2));
        assert_eq!(c("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(c("1e-3+2e-1i"), Complex64::new(1e-3, 0.2));
        assert!(complex("abc").is_err());
        assert!(complex("").is_err());
    }

    #[test]
    fn measures() {
        assert!(measure("uniform:0.3,0.6").is_ok());
        assert!(measure("atoms:0.6,0.9i").is_ok());
        assert!(measure("atoms:0.6@0.25,0.9i@0.75").is_ok());
        assert!(measure("atoms:0.6@0.25,0.9i").is_err());
        assert!(measure("uniform:0.6,0.3").is_err());
        assert!(measure("gauss:1").is_err());
    }
}
