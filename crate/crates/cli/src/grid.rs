//! Parsing of numeric lists on the command line.

/// One value: a decimal number or `2^k` / `2^-k`.
pub fn parse_value(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Some(exp) = t.strip_prefix("2^") {
        let k: i32 = exp.parse().map_err(|_| format!("bad exponent in `{t}`"))?;
        return Ok(2f64.powi(k));
    }
    t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"))
}

/// Comma-separated values and dyadic ranges `2^a..2^b`, stepping the
/// exponent by one towards `b`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let exp = |s: &str| -> Result<i32, String> {
                    s.trim()
                        .strip_prefix("2^")
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| format!("range ends must look like 2^k, got `{s}`"))
                };
                let (ea, eb) = (exp(a)?, exp(b)?);
                if ea >= eb {
                    out.extend((eb..=ea).rev().map(|k| 2f64.powi(k)));
                } else {
                    out.extend((ea..=eb).map(|k| 2f64.powi(k)));
                }
            }
            None => out.push(parse_value(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// Comma-separated positive integers.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("`{p}` is not a positive integer")))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("empty list".into()) } else { Ok(v) })
}

/// Comma-separated horizons, accepting `1e5` style values.
pub fn parse_horizon(text: &str) -> Result<u64, String> {
    let v = parse_value(text)?;
    if v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("`{text}` is not a positive integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_ranges() {
        assert_eq!(parse_grid("2^-1..2^-3").unwrap(), vec![0.5, 0.25, 0.125]);
        assert_eq!(parse_grid("1,2^-2").unwrap(), vec![1.0, 0.25]);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert!(parse_grid("2^-1..0.1").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn sizes_and_horizons() {
        assert_eq!(parse_sizes("64, 128").unwrap(), vec![64, 128]);
        assert!(parse_sizes("x").is_err());
        assert_eq!(parse_horizon("1e5").unwrap(), 100_000);
        assert_eq!(parse_horizon("4096").unwrap(), 4096);
        assert!(parse_horizon("0.5").is_err());
    }
}
