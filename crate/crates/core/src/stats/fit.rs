use crate::error::{ModelError, Result};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub rmse: f64,
    pub points: usize,
}

pub fn power_fit(xs: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if xs.len() != ys.len() {
        return Err(ModelError::Domain("xs and ys differ in length".into()));
    }
    if xs.len() < 3 {
        return Err(ModelError::Domain(
            "slope fit needs at least 3 points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(ModelError::Domain("slope fit needs positive inputs".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ModelError::Domain(
            "slope fit needs distinct x values".into(),
        ));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(PowerFit {
        slope,
        intercept,
        rmse: (sse / n).sqrt(),
        points: xs.len(),
    })
}

/// Slope of `ln y` against `ln x`.
pub fn slope_fit(xs: &[f64], ys: &[f64]) -> Result<f64> {
    power_fit(xs, ys).map(|f| f.slope)
}
