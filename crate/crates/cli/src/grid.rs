//! Alpha-grid parsing: `start:end:step` (inclusive) or comma-separated
//! values. Triple grids are stepped in scaled decimal integers so points
//! like 0.06 come out as exact decimal literals instead of accumulated
//! floating-point sums.

use hetnet::Error;

/// One nonnegative decimal as (numerator, power-of-ten denominator).
fn parse_decimal(text: &str) -> Result<(u64, u64), Error> {
    let bad = || Error::InvalidGrid {
        reason: format!("'{text}' is not a nonnegative decimal"),
    };
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 12
    {
        return Err(bad());
    }
    let mut numerator: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let mut denominator: u64 = 1;
    for c in frac_part.chars() {
        numerator = numerator
            .checked_mul(10)
            .and_then(|v| v.checked_add(c.to_digit(10).unwrap() as u64))
            .ok_or_else(bad)?;
        denominator *= 10;
    }
    Ok((numerator, denominator))
}

fn common_scale(parts: &[(u64, u64)]) -> (Vec<u64>, u64) {
    let denom = parts.iter().map(|&(_, d)| d).max().unwrap_or(1);
    let scaled = parts.iter().map(|&(n, d)| n * (denom / d)).collect();
    (scaled, denom)
}

pub fn parse(spec: &str) -> Result<Vec<f64>, Error> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid {
                reason: format!("'{spec}' is not of the form start:end:step"),
            });
        }
        let decimals: Vec<(u64, u64)> = parts
            .iter()
            .map(|p| parse_decimal(p))
            .collect::<Result<_, _>>()?;
        let (scaled, denom) = common_scale(&decimals);
        let (start, end, step) = (scaled[0], scaled[1], scaled[2]);
        if step == 0 {
            return Err(Error::InvalidGrid {
                reason: "step must be positive".to_string(),
            });
        }
        if end < start {
            return Err(Error::InvalidGrid {
                reason: format!("grid end {} is below start {}", parts[1], parts[0]),
            });
        }
        let mut grid = Vec::new();
        let mut value = start;
        while value <= end {
            grid.push(value as f64 / denom as f64);
            value += step;
        }
        Ok(grid)
    } else {
        let values: Vec<f64> = spec
            .split(',')
            .map(|p| parse_decimal(p.trim()).map(|(n, d)| n as f64 / d as f64))
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(Error::InvalidGrid {
                reason: "grid is empty".to_string(),
            });
        }
        for pair in values.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidGrid {
                    reason: format!(
                        "grid must increase strictly, got {} after {}",
                        pair[1], pair[0]
                    ),
                });
            }
        }
        Ok(values)
    }
}
