//! Small least-squares helpers shared by the envelope and sweep fits.

/// Ordinary least squares `y = slope * x + intercept`.
/// Returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, intercept, r2))
}

/// Fit `log y = log c - rate * x`, returning `(c, rate)`.
/// Points with `y <= 0` are skipped.
pub fn exp_decay_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let mut fx = Vec::with_capacity(xs.len());
    let mut fy = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if y > 0.0 && y.is_finite() {
            fx.push(x);
            fy.push(y.ln());
        }
    }
    let (slope, intercept, _) = linear_fit(&fx, &fy)?;
    Some((intercept.exp(), -slope))
}

/// Fit `log y = log c + p * log x`, returning `(c, p)`.
pub fn power_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let mut fx = Vec::with_capacity(xs.len());
    let mut fy = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if x > 0.0 && y > 0.0 && y.is_finite() {
            fx.push(x.ln());
            fy.push(y.ln());
        }
    }
    let (slope, intercept, _) = linear_fit(&fx, &fy)?;
    Some((intercept.exp(), slope))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_lines_and_powers() {
        let xs: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (s, b, r2) = linear_fit(&xs, &ys).unwrap();
        assert!((s - 3.0).abs() < 1e-12 && (b + 1.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);

        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * (-0.5 * x).exp()).collect();
        let (c, rate) = exp_decay_fit(&xs, &ys).unwrap();
        assert!((c - 2.0).abs() < 1e-10 && (rate - 0.5).abs() < 1e-12);

        let ys: Vec<f64> = xs.iter().map(|x| 5.0 * x.powf(-2.0)).collect();
        let (c, p) = power_fit(&xs, &ys).unwrap();
        assert!((c - 5.0).abs() < 1e-10 && (p + 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_yield_none() {
        assert!(linear_fit(&[1.0], &[2.0]).is_none());
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }
}
