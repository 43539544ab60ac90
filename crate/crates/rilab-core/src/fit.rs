//! Least-squares fits of measured ratios against `sigma^e1 (log sigma)^e2`.
//!
//! The model is linear after taking logarithms:
//! `log R = c0 + e1 * log(sigma) + e2 * log(log(sigma))`.
//! With sigma >= 3 both regressors are finite and the two are slowly but
//! genuinely decorrelated once the grid spans a few octaves.

use crate::error::{Error, Result};

/// A fitted power/log rate over a degree grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RateFit {
    pub n_grid: Vec<u32>,
    pub sigma: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Intercept of the log-log model.
    pub c0: f64,
    /// Power exponent of sigma.
    pub e1: f64,
    /// Exponent of log(sigma).
    pub e2: f64,
    /// Root-mean-square residual of log R on the fitting grid.
    pub residual_rms: f64,
}

/// Solve a 3x3 linear system by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Result<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-12 * scale {
            return Err(Error::InvalidParameter(
                "rate-fit normal equations are singular (degenerate sigma grid)".into(),
            ));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Ordinary least squares for the three-parameter log model.
///
/// Demands at least six points, positive ratios and sigma >= 3 everywhere so
/// that `log log sigma` stays well defined.
pub fn fit_rates(n_grid: &[u32], sigma: &[f64], ratios: &[f64]) -> Result<RateFit> {
    if n_grid.len() != sigma.len() || sigma.len() != ratios.len() {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs matching lengths, got {} degrees, {} sigmas, {} ratios",
            n_grid.len(),
            sigma.len(),
            ratios.len()
        )));
    }
    if n_grid.len() < 6 {
        return Err(Error::EmptyGrid(format!(
            "rate fit needs at least 6 grid points, got {}",
            n_grid.len()
        )));
    }
    for (&s, &r) in sigma.iter().zip(ratios) {
        if !(s >= 3.0 && s.is_finite()) {
            return Err(Error::OutOfRange(format!("sigma = {s} below the rate-fit floor 3")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-positive ratio {r} in rate fit")));
        }
    }
    let rows: Vec<([f64; 3], f64)> = sigma
        .iter()
        .zip(ratios)
        .map(|(&s, &r)| {
            let ls = s.ln();
            ([1.0, ls, ls.ln()], r.ln())
        })
        .collect();
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (x, y) in &rows {
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += x[i] * x[j];
            }
            atb[i] += x[i] * y;
        }
    }
    let coef = solve3(ata, atb)?;
    let mut ss = 0.0;
    for (x, y) in &rows {
        let pred = coef[0] + coef[1] * x[1] + coef[2] * x[2];
        ss += (y - pred) * (y - pred);
    }
    Ok(RateFit {
        n_grid: n_grid.to_vec(),
        sigma: sigma.to_vec(),
        ratios: ratios.to_vec(),
        c0: coef[0],
        e1: coef[1],
        e2: coef[2],
        residual_rms: (ss / rows.len() as f64).sqrt(),
    })
}

impl RateFit {
    /// Refit on a subset of the grid; used to check that the exponents are
    /// stable under point deletion.
    pub fn refit(&self, indices: &[usize]) -> Result<RateFit> {
        let pick = |src: &[f64]| indices.iter().map(|&i| src[i]).collect::<Vec<_>>();
        let n: Vec<u32> = indices.iter().map(|&i| self.n_grid[i]).collect();
        fit_rates(&n, &pick(&self.sigma), &pick(&self.ratios))
    }

    /// Even-indexed half of the grid, for holdout stability checks.
    pub fn even_half(&self) -> Result<RateFit> {
        let idx: Vec<usize> = (0..self.n_grid.len()).step_by(2).collect();
        self.refit(&idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_planted_exponents() {
        // R = 3.7 sigma^{-0.25} (log sigma)^{0.5}, noiseless.
        let n: Vec<u32> = (4..14).map(|k| 1u32 << k).collect();
        let sigma: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        let ratios: Vec<f64> =
            sigma.iter().map(|&s| 3.7 * s.powf(-0.25) * s.ln().powf(0.5)).collect();
        let fit = fit_rates(&n, &sigma, &ratios).unwrap();
        assert!((fit.e1 + 0.25).abs() < 1e-10, "e1 = {}", fit.e1);
        assert!((fit.e2 - 0.5).abs() < 1e-9, "e2 = {}", fit.e2);
        assert!((fit.c0 - 3.7f64.ln()).abs() < 1e-9);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn pure_power_law_yields_zero_log_exponent() {
        let n: Vec<u32> = (4..12).map(|k| 1u32 << k).collect();
        let sigma: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        let ratios: Vec<f64> = sigma.iter().map(|&s| 0.9 * s.powf(0.5)).collect();
        let fit = fit_rates(&n, &sigma, &ratios).unwrap();
        assert!((fit.e1 - 0.5).abs() < 1e-10);
        assert!(fit.e2.abs() < 1e-9);
    }

    #[test]
    fn holdout_refit_is_stable_on_clean_data() {
        let n: Vec<u32> = (4..16).map(|k| 1u32 << k).collect();
        let sigma: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        let ratios: Vec<f64> =
            sigma.iter().map(|&s| 2.0 * s.powf(0.125) * s.ln().powf(-1.0)).collect();
        let fit = fit_rates(&n, &sigma, &ratios).unwrap();
        let half = fit.even_half().unwrap();
        assert!((fit.e1 - half.e1).abs() < 1e-9);
        assert!((fit.e2 - half.e2).abs() < 1e-9);
    }

    #[test]
    fn rejects_short_and_degenerate_input() {
        let err = fit_rates(&[16, 32, 64], &[16.0, 32.0, 64.0], &[1.0, 1.0, 1.0]);
        assert!(err.is_err());
        let n = [16u32; 6];
        let s = [16.0f64; 6];
        let r = [1.0f64; 6];
        // Identical sigmas make the design matrix rank deficient.
        assert!(fit_rates(&n, &s, &r).is_err());
    }

    #[test]
    fn mild_noise_keeps_exponents_near_truth() {
        // Deterministic pseudo-noise of amplitude 1e-3 in log space.
        let n: Vec<u32> = (4..15).map(|k| 1u32 << k).collect();
        let sigma: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        let ratios: Vec<f64> = sigma
            .iter()
            .enumerate()
            .map(|(i, &s)| s.powf(0.25) * (1.0 + 1e-3 * ((i * 2654435761) % 7) as f64 / 7.0))
            .collect();
        let fit = fit_rates(&n, &sigma, &ratios).unwrap();
        assert!((fit.e1 - 0.25).abs() < 5e-3, "e1 = {}", fit.e1);
        assert!(fit.e2.abs() < 5e-2, "e2 = {}", fit.e2);
        assert!(fit.residual_rms < 2e-3);
    }
}
