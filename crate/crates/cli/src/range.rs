//! `a..b[..step]` sweep ranges, endpoints inclusive. A bare value is a
//! one-point sweep.

use anyhow::{bail, ensure, Context, Result};

pub fn parse_u64_range(spec: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = spec.split("..").collect();
    let num = |s: &str| -> Result<u64> {
        s.trim().parse::<u64>().with_context(|| format!("cannot parse '{s}' as an integer"))
    };
    match parts.as_slice() {
        [one] => Ok(vec![num(one)?]),
        [a, b] => range_u64(num(a)?, num(b)?, 1),
        [a, b, s] => range_u64(num(a)?, num(b)?, num(s)?),
        _ => bail!("range '{spec}' is not of the form a..b[..step]"),
    }
}

fn range_u64(a: u64, b: u64, step: u64) -> Result<Vec<u64>> {
    ensure!(step > 0, "range step must be positive");
    ensure!(a <= b, "range start {a} exceeds end {b}");
    Ok((a..=b).step_by(step as usize).collect())
}

pub fn parse_u32_range(spec: &str) -> Result<Vec<u32>> {
    parse_u64_range(spec)?
        .into_iter()
        .map(|v| u32::try_from(v).with_context(|| format!("{v} does not fit in 32 bits")))
        .collect()
}

pub fn parse_f64_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split("..").collect();
    let num = |s: &str| -> Result<f64> {
        let v: f64 =
            s.trim().parse().with_context(|| format!("cannot parse '{s}' as a number"))?;
        ensure!(v.is_finite(), "range value '{s}' is not finite");
        Ok(v)
    };
    match parts.as_slice() {
        [one] => Ok(vec![num(one)?]),
        [a, b] => range_f64(num(a)?, num(b)?, 1.0),
        [a, b, s] => range_f64(num(a)?, num(b)?, num(s)?),
        _ => bail!("range '{spec}' is not of the form a..b[..step]"),
    }
}

fn range_f64(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    ensure!(step > 0.0, "range step must be positive");
    ensure!(a <= b, "range start {a} exceeds end {b}");
    // count once, then a + i*step: no drift, and the endpoint is included
    // whenever it sits within half a step of the grid
    let count = ((b - a) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_u64_range("7").unwrap(), vec![7]);
        assert_eq!(parse_u64_range("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_u64_range("0..10..5").unwrap(), vec![0, 5, 10]);
        assert_eq!(parse_u64_range("0..9..5").unwrap(), vec![0, 5]);
        assert!(parse_u64_range("5..1").is_err());
        assert!(parse_u64_range("0..4..0").is_err());
        assert!(parse_u64_range("a..b").is_err());
    }

    #[test]
    fn float_ranges() {
        assert_eq!(parse_f64_range("0.5").unwrap(), vec![0.5]);
        let v = parse_f64_range("0..1..0.25").unwrap();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let v = parse_f64_range("0..0.3..0.1").unwrap();
        assert_eq!(v.len(), 4);
        assert!((v[3] - 0.3).abs() < 1e-12);
        assert!(parse_f64_range("0..1..-1").is_err());
    }
}
