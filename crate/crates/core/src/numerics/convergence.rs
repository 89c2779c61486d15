//! Least-squares convergence-order estimation from (h, norm) pairs.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error("need at least 3 (h, norm) pairs, got {0}")]
    InsufficientData(usize),
    #[error("norms and spacings must be positive and finite")]
    BadData,
}

/// Slope of log(norm) against log(h).
pub fn convergence_order(pairs: &[(f64, f64)]) -> Result<f64, ConvergenceError> {
    if pairs.len() < 3 {
        return Err(ConvergenceError::InsufficientData(pairs.len()));
    }
    if pairs.iter().any(|&(h, r)| !(h > 0.0 && r > 0.0 && h.is_finite() && r.is_finite())) {
        return Err(ConvergenceError::BadData);
    }
    let n = pairs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, r) in pairs {
        let (x, y) = (h.ln(), r.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_quartic_slopes() {
        let h2: Vec<(f64, f64)> = (0..4).map(|k| {
            let h = 0.1 / 2f64.powi(k);
            (h, 3.0 * h * h)
        }).collect();
        assert!((convergence_order(&h2).unwrap() - 2.0).abs() < 0.05);
        let h4: Vec<(f64, f64)> = (0..4).map(|k| {
            let h = 0.1 / 2f64.powi(k);
            (h, 0.7 * h.powi(4))
        }).collect();
        assert!((convergence_order(&h4).unwrap() - 4.0).abs() < 0.05);
    }

    #[test]
    fn insufficient_data_is_an_error() {
        assert!(convergence_order(&[(0.1, 1.0), (0.05, 0.25)]).is_err());
    }
}
