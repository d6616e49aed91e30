//! Small fitting helpers for scan summaries.

/// Least-squares slope of `ys` against `xs`; `None` with fewer than two
/// points or no spread in x.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Mean of the last quarter of `values` divided by the mean of the first
/// quarter (each quarter at least one element). `None` for fewer than four
/// values or a vanishing first-quarter mean.
pub fn quartile_ratio(values: &[f64]) -> Option<f64> {
    if values.len() < 4 {
        return None;
    }
    let q = values.len() / 4;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let first = mean(&values[..q]);
    let last = mean(&values[values.len() - q..]);
    (first > 0.0).then(|| last / first)
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Relative change `|b − a| / |a|`.
pub fn relative_change(a: f64, b: f64) -> f64 {
    (b - a).abs() / a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 * x - 2.0).collect();
        assert!((least_squares_slope(&xs, &ys).unwrap() - 1.5).abs() < 1e-14);
        assert_eq!(least_squares_slope(&[1.0], &[2.0]), None);
        assert_eq!(least_squares_slope(&[1.0, 1.0], &[2.0, 3.0]), None);
    }

    #[test]
    fn quartiles() {
        let v = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0];
        assert_eq!(quartile_ratio(&v), Some(4.0));
        assert_eq!(quartile_ratio(&v[..3]), None);
    }
}
