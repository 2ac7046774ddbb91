//! Least-squares fits used on scenario data: a vertex-form parabola for the
//! axial Rabi profile, `A |sin((x - x0)/2)|` for polarization sweeps, and a
//! log-log power law for infidelity scaling.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitParameter {
    pub name: String,
    pub value: f64,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub parameters: Vec<FitParameter>,
    /// `sqrt(sum of squared residuals)`.
    pub residual_norm: f64,
    /// Variance estimates, in parameter order.
    pub covariance_diagonal: Vec<f64>,
}

impl FitResult {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

fn param(name: &str, value: f64, unit: &str) -> FitParameter {
    FitParameter {
        name: name.to_owned(),
        value,
        unit: unit.to_owned(),
    }
}

struct LinearSolution {
    coeffs: DVector<f64>,
    /// `(A^T A)^-1`
    normal_inverse: DMatrix<f64>,
}

fn linear_least_squares(design: DMatrix<f64>, y: &DVector<f64>) -> Result<LinearSolution> {
    let cols = design.ncols();
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    if smax.is_nan() || smax <= 0.0 || svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::DegenerateFit("design matrix is rank deficient".into()));
    }
    let coeffs = svd.solve(y, 0.0).map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut normal_inverse = DMatrix::zeros(cols, cols);
    for k in 0..cols {
        let s2 = svd.singular_values[k].powi(2);
        let row = v_t.row(k);
        normal_inverse += row.transpose() * row / s2;
    }
    Ok(LinearSolution { coeffs, normal_inverse })
}

fn check_finite(samples: &[(f64, f64)]) -> Result<()> {
    if samples.iter().all(|(x, y)| x.is_finite() && y.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("fit sample"))
    }
}

fn residual_variance(rss: f64, samples: usize, params: usize) -> f64 {
    rss / (samples.saturating_sub(params).max(1)) as f64
}

/// Fits `y = y_max (1 - c (z - z0)^2)` and reports `(z0_um, omega_max, curvature_per_um2)`.
pub fn fit_quadratic(samples: &[(f64, f64)]) -> Result<FitResult> {
    check_finite(samples)?;
    let mut zs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    zs.sort_by(f64::total_cmp);
    zs.dedup();
    if zs.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "quadratic fit needs at least 3 distinct positions, got {}",
            zs.len()
        )));
    }

    // centre and scale the abscissa for conditioning
    let mean = samples.iter().map(|s| s.0).sum::<f64>() / samples.len() as f64;
    let width = samples.iter().map(|s| (s.0 - mean).abs()).fold(0.0, f64::max);
    let design = DMatrix::from_fn(samples.len(), 3, |r, c| ((samples[r].0 - mean) / width).powi(c as i32));
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let sol = linear_least_squares(design, &y)?;
    let (p0, p1, p2) = (sol.coeffs[0], sol.coeffs[1], sol.coeffs[2]);

    let scale = y.amax().max(p0.abs()).max(p1.abs());
    if p2.abs() <= 1e-12 * scale {
        return Err(Error::DegenerateFit(
            "curvature vanishes; the vertex is undefined".into(),
        ));
    }
    let z0 = mean - width * p1 / (2.0 * p2);
    let peak = p0 - p1 * p1 / (4.0 * p2);
    if peak == 0.0 {
        return Err(Error::DegenerateFit(
            "vertex value is zero; curvature is undefined".into(),
        ));
    }
    let curvature = -p2 / (width * width * peak);

    let rss: f64 = samples
        .iter()
        .map(|&(z, v)| (v - peak * (1.0 - curvature * (z - z0).powi(2))).powi(2))
        .sum();

    // delta method from the polynomial coefficients
    let d_z0 = [0.0, -width / (2.0 * p2), width * p1 / (2.0 * p2 * p2)];
    let d_peak = [1.0, -p1 / (2.0 * p2), p1 * p1 / (4.0 * p2 * p2)];
    let w2 = width * width;
    let d_curv: Vec<f64> = (0..3)
        .map(|k| {
            let direct = if k == 2 { -1.0 / (w2 * peak) } else { 0.0 };
            direct + p2 / (w2 * peak * peak) * d_peak[k]
        })
        .collect();
    let cov = sol.normal_inverse * residual_variance(rss, samples.len(), 3);
    let var = |g: &[f64]| {
        let g = DVector::from_column_slice(g);
        (g.transpose() * &cov * &g)[(0, 0)]
    };

    Ok(FitResult {
        model: "quadratic".into(),
        parameters: vec![
            param("z0_um", z0, "um"),
            param("omega_max", peak, "input"),
            param("curvature_per_um2", curvature, "1/um^2"),
        ],
        residual_norm: rss.sqrt(),
        covariance_diagonal: vec![var(&d_z0), var(&d_peak), var(&d_curv)],
    })
}

fn abs_sin_model(x: f64, amplitude: f64, offset: f64) -> f64 {
    amplitude * (0.5 * (x - offset)).sin().abs()
}

/// Fits `y = A |sin((phi - phi0) / 2)|` and reports `(amplitude, phase_offset_rad)`.
///
/// Squaring gives `y^2 = A^2/2 - (A^2/2)(cos phi0 cos phi + sin phi0 sin phi)`,
/// which is linear in three coefficients; that solution seeds a damped
/// Gauss-Newton refinement on the unsquared residuals.
pub fn fit_abs_sinusoid(samples: &[(f64, f64)]) -> Result<FitResult> {
    check_finite(samples)?;
    if samples.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "sinusoid fit needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= PI {
        return Err(Error::DegenerateFit(format!(
            "phase samples span {:.4} rad; more than pi is required",
            hi - lo
        )));
    }

    let design = DMatrix::from_fn(samples.len(), 3, |r, c| match c {
        0 => 1.0,
        1 => samples[r].0.cos(),
        _ => samples[r].0.sin(),
    });
    let y2 = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1 * s.1));
    let lin = linear_least_squares(design, &y2)?.coeffs;
    let (a, b, c) = (lin[0], lin[1], lin[2]);
    let ymax = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let mut amp = (a + b.hypot(c)).max(0.0).sqrt();
    if amp.is_nan() || amp <= 1e-12 * ymax || ymax == 0.0 {
        return Err(Error::DegenerateFit("amplitude is zero".into()));
    }
    let mut offset = (-c).atan2(-b);

    let rss_at = |amp: f64, offset: f64| -> f64 {
        samples
            .iter()
            .map(|&(x, y)| (y - abs_sin_model(x, amp, offset)).powi(2))
            .sum()
    };
    let jacobian = |amp: f64, offset: f64| {
        DMatrix::from_fn(samples.len(), 2, |r, col| {
            let u = 0.5 * (samples[r].0 - offset);
            match col {
                0 => u.sin().abs(),
                _ => -0.5 * amp * u.sin().signum() * u.cos(),
            }
        })
    };

    let mut rss = rss_at(amp, offset);
    let mut lambda = 1e-3;
    for _ in 0..100 {
        let j = jacobian(amp, offset);
        let r = DVector::from_iterator(
            samples.len(),
            samples.iter().map(|&(x, y)| y - abs_sin_model(x, amp, offset)),
        );
        let jtj = j.transpose() * &j;
        let jtr = j.transpose() * r;
        let mut damped = jtj.clone();
        for k in 0..2 {
            damped[(k, k)] *= 1.0 + lambda;
        }
        let Some(step) = damped.lu().solve(&jtr) else { break };
        let (na, no) = (amp + step[0], offset + step[1]);
        let trial = rss_at(na, no);
        if trial < rss {
            let done = rss - trial <= 1e-15 * rss.max(f64::MIN_POSITIVE);
            amp = na;
            offset = no;
            rss = trial;
            lambda *= 0.3;
            if done {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    if amp < 0.0 {
        // A|sin(u)| with A < 0 is not a valid fit; flip onto the positive branch
        amp = -amp;
    }
    let offset = offset.rem_euclid(TAU);

    let j = jacobian(amp, offset);
    let jtj = j.transpose() * &j;
    let cov_diag = match jtj.try_inverse() {
        Some(inv) => {
            let s2 = residual_variance(rss, samples.len(), 2);
            vec![inv[(0, 0)] * s2, inv[(1, 1)] * s2]
        }
        None => return Err(Error::DegenerateFit("singular Jacobian at the solution".into())),
    };

    Ok(FitResult {
        model: "abs-sinusoid".into(),
        parameters: vec![
            param("amplitude", amp, "input"),
            param("phase_offset_rad", offset, "rad"),
        ],
        residual_norm: rss.sqrt(),
        covariance_diagonal: cov_diag,
    })
}

/// Fits `y = A x^p` by linear regression of `ln y` on `ln x`; returns `(p, A)`.
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    if samples.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::DegenerateFit("power-law samples must be positive".into()));
    }
    if samples.len() < 2 {
        return Err(Error::DegenerateFit("power-law fit needs at least 2 samples".into()));
    }
    let n = samples.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, (my - slope * mx).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn parabola(z0: f64, peak: f64, c: f64, zs: impl Iterator<Item = f64>) -> Vec<(f64, f64)> {
        zs.map(|z| (z, peak * (1.0 - c * (z - z0).powi(2)))).collect()
    }

    #[test]
    fn quadratic_round_trip() {
        let c = 0.06 / 657f64.powi(2);
        let data = parabola(957.0, 0.52, c, (0..9).map(|k| 157.0 + 200.0 * k as f64));
        let fit = fit_quadratic(&data).unwrap();
        assert_relative_eq!(fit.get("z0_um").unwrap(), 957.0, max_relative = 1e-10);
        assert_relative_eq!(fit.get("omega_max").unwrap(), 0.52, max_relative = 1e-10);
        assert_relative_eq!(fit.get("curvature_per_um2").unwrap(), c, max_relative = 1e-10);
        assert!(fit.residual_norm < 1e-10);
        assert_eq!(fit.covariance_diagonal.len(), 3);
    }

    #[test]
    fn quadratic_degenerate_inputs() {
        let flat: Vec<_> = (0..9).map(|k| (k as f64 * 10.0, 0.5)).collect();
        assert!(matches!(fit_quadratic(&flat), Err(Error::DegenerateFit(_))));
        let line: Vec<_> = (0..9).map(|k| (k as f64, 2.0 * k as f64 + 1.0)).collect();
        assert!(matches!(fit_quadratic(&line), Err(Error::DegenerateFit(_))));
        let two = [(1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (2.0, 3.0)];
        assert!(matches!(fit_quadratic(&two), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn sinusoid_round_trip() {
        for offset in [0.0, 1.0, PI, 5.5] {
            let data: Vec<_> = (0..37)
                .map(|k| {
                    let x = TAU * k as f64 / 36.0;
                    (x, abs_sin_model(x, 0.52, offset))
                })
                .collect();
            let fit = fit_abs_sinusoid(&data).unwrap();
            assert_relative_eq!(fit.get("amplitude").unwrap(), 0.52, max_relative = 1e-10);
            let got = fit.get("phase_offset_rad").unwrap();
            let d = (got - offset).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-9, "{got} vs {offset}");
            assert!(fit.residual_norm < 1e-10);
        }
    }

    #[test]
    fn sinusoid_rejections() {
        let zero: Vec<_> = (0..10).map(|k| (k as f64, 0.0)).collect();
        assert!(matches!(fit_abs_sinusoid(&zero), Err(Error::DegenerateFit(_))));
        let narrow: Vec<_> = (0..10).map(|k| (0.3 * k as f64, 1.0)).collect();
        assert!(matches!(fit_abs_sinusoid(&narrow), Err(Error::DegenerateFit(_))));
        assert!(fit_abs_sinusoid(&[(0.0, 1.0), (4.0, 1.0), (5.0, 1.0)]).is_err());
    }

    #[test]
    fn power_law() {
        let data: Vec<_> = [1e-3_f64, 1e-2, 3e-2].iter().map(|&x| (x, 7.0 * x.powi(4))).collect();
        let (p, a) = fit_power_law(&data).unwrap();
        assert_relative_eq!(p, 4.0, max_relative = 1e-12);
        assert_relative_eq!(a, 7.0, max_relative = 1e-9);
        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }
}
