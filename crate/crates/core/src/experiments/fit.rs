use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// Points used in the fit.
    pub used: usize,
    /// Points dropped as censored or nonpositive.
    pub censored: usize,
}

/// Least-squares fit of `log y = a + b log m`. Points flagged censored or with
/// `y ≤ 0` are excluded and counted.
pub fn fit_loglog_slope(points: &[(f64, f64, bool)]) -> Result<SlopeFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(m, y, c)| !c && m > 0.0 && y > 0.0 && y.is_finite())
        .map(|&(m, y, _)| (m.ln(), y.ln()))
        .collect();
    let n = usable.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("all abscissae coincide"));
    }
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = usable.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (rss / (nf - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, stderr, intercept, used: n, censored: points.len() - n })
}
