use crate::error::{Error, Result};

/// Least-squares power law `value ≈ C ε^slope`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `ln value`.
    pub residual: f64,
    /// Number of points used.
    pub points: usize,
    /// Inputs dropped because the value was not positive.
    pub excluded: Vec<(f64, f64)>,
}

/// Fits `ln value = intercept + slope · ln ε`. Nonpositive values are dropped
/// and listed in [`RateFit::excluded`]; fewer than three usable points is an error.
pub fn fit_rate(pairs: &[(f64, f64)]) -> Result<RateFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for &(e, v) in pairs {
        if v > 0.0 && e > 0.0 && v.is_finite() {
            xs.push(e.ln());
            ys.push(v.ln());
        } else {
            excluded.push((e, v));
        }
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "rate fit needs at least 3 positive points, got {n}"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("rate fit needs distinct ε values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(RateFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
        points: n,
        excluded,
    })
}
