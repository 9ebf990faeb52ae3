use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// How the limit was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FitMethod {
    /// Least squares for μ + c R^{−p} (+ c₂ R^{−2p}) with p free.
    PowerLaw,
    /// Two-point elimination at the nominal order.
    Richardson,
    /// The values agree to rounding.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub limit: f64,
    pub order: f64,
    pub amplitude: f64,
    /// RMS of the fit residuals.
    pub residual: f64,
    /// Aitken Δ² limit of the last three values, when defined.
    pub aitken: Option<f64>,
    pub method: FitMethod,
}

/// Least squares for v ≈ μ + Σ_k c_k R^{−kp}, k = 1..=terms, at fixed p.
/// Returns (μ, c_1, c_2, rss), with c_2 = 0 for a single term.
fn solve_fixed(radii: &[f64], values: &[f64], p: f64, terms: usize) -> Option<(f64, f64, f64, f64)> {
    let n = radii.len();
    let cols = terms + 1;
    // columns scaled by their value at the first radius for conditioning
    let a = DMatrix::from_fn(n, cols, |i, k| libm::pow(radii[i] / radii[0], -(k as f64) * p));
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(svd.singular_values.min() > 1e-13 * smax) {
        return None;
    }
    let x = svd.solve(&b, 1e-14 * smax).ok()?;
    let rss = (&a * &x - &b).norm_squared();
    let c2 = if terms > 1 { x[2] * libm::pow(radii[0], 2.0 * p) } else { 0.0 };
    Some((x[0], x[1] * libm::pow(radii[0], p), c2, rss))
}

fn aitken(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    let den = (c - b) - (b - a);
    if den == 0.0 || !den.is_finite() {
        return None;
    }
    Some(c - (c - b) * (c - b) / den)
}

/// Limit of `values` sampled at increasing `radii`, assuming
/// v(R) = μ + c R^{−p} + c₂ R^{−2p} + … with p in `[p_min, p_max]`.
/// The second correction is fitted when at least five radii are given.
///
/// `nominal` is the order used by the Richardson fallback. Differences
/// below `noise_floor` (or 1e−11 of the largest value) count as rounding. A tail whose
/// increments change sign beyond rounding, or whose fit residual exceeds
/// `tolerance`, is reported as non-convergence with the input table.
pub fn extrapolate(
    radii: &[f64],
    values: &[f64],
    nominal: f64,
    p_min: f64,
    p_max: f64,
    tolerance: f64,
    noise_floor: f64,
) -> Result<Extrapolation> {
    let table = || radii.iter().copied().zip(values.iter().copied()).collect::<Vec<_>>();
    if radii.len() != values.len() || radii.len() < 3 {
        return Err(Error::NonConvergence {
            reason: "need at least three radii".into(),
            table: table(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence {
            reason: "non-finite per-radius value".into(),
            table: table(),
        });
    }
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let noise = (1e-11 * scale).max(noise_floor);
    let aitken = aitken(values);

    let spread = values.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v))
        - values.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if spread <= noise {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        return Ok(Extrapolation {
            limit: mean,
            order: nominal,
            amplitude: 0.0,
            residual: spread,
            aitken,
            method: FitMethod::Constant,
        });
    }

    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &steps[steps.len().saturating_sub(3)..];
    let oscillates = tail
        .windows(2)
        .any(|w| w[0].abs() > noise && w[1].abs() > noise && w[0].signum() != w[1].signum());
    if oscillates {
        return Err(Error::NonConvergence {
            reason: "per-radius values oscillate in the tail".into(),
            table: table(),
        });
    }

    // fine scan, then golden-section refinement around each local minimum;
    // the RSS valley at the true order is narrow
    let terms = if radii.len() >= 5 { 2 } else { 1 };
    let rss = |p: f64| solve_fixed(radii, values, p, terms).map_or(f64::INFINITY, |s| s.3);
    let samples = 512;
    let grid: Vec<f64> = (0..=samples)
        .map(|i| p_min + (p_max - p_min) * i as f64 / samples as f64)
        .collect();
    let scan: Vec<f64> = grid.iter().map(|&p| rss(p)).collect();
    let phi = 0.5 * (libm::sqrt(5.0) - 1.0);
    let golden = |mut lo: f64, mut hi: f64| {
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let (mut f1, mut f2) = (rss(x1), rss(x2));
        for _ in 0..60 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = rss(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = rss(x2);
            }
        }
        let p = 0.5 * (lo + hi);
        (p, rss(p))
    };
    let mut best = (grid[0], scan[0]);
    for i in 0..=samples {
        let left = if i == 0 { f64::INFINITY } else { scan[i - 1] };
        let right = if i == samples { f64::INFINITY } else { scan[i + 1] };
        if scan[i] <= left && scan[i] <= right {
            let cand = golden(grid[i.saturating_sub(1)], grid[(i + 1).min(samples)]);
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    let mut p = best.0;
    let mut fit = solve_fixed(radii, values, p, terms);
    // μ + c₂R^{−2p} alone: the leading correction is really of order 2p
    if let Some((_, c1, c2, _)) = fit {
        let r0 = radii[0];
        if 2.0 * p <= p_max && (c1 * libm::pow(r0, -p)).abs() <= 1e-6 * (c2 * libm::pow(r0, -2.0 * p)).abs() {
            let doubled = solve_fixed(radii, values, 2.0 * p, terms);
            if doubled.is_some_and(|d| d.3 <= best.1.max(noise * noise)) {
                p *= 2.0;
                fit = doubled;
            }
        }
    }

    let richardson = || {
        let n = radii.len();
        let (r1, r2) = (radii[n - 2], radii[n - 1]);
        let (v1, v2) = (values[n - 2], values[n - 1]);
        let a1 = libm::pow(r1, nominal);
        let a2 = libm::pow(r2, nominal);
        let limit = (a2 * v2 - a1 * v1) / (a2 - a1);
        let amplitude = (v2 - limit) * a2;
        let residual = solve_fixed(radii, values, nominal, 1).map_or(f64::INFINITY, |s| libm::sqrt(s.3 / n as f64));
        Extrapolation {
            limit,
            order: nominal,
            amplitude,
            residual,
            aitken,
            method: FitMethod::Richardson,
        }
    };

    let result = match fit {
        Some((mu, c, _, rss)) if mu.is_finite() && c.is_finite() => {
            // an amplitude comparable to its own rounding makes p meaningless
            if c.abs() * libm::pow(radii[0], -p) <= noise {
                richardson()
            } else {
                Extrapolation {
                    limit: mu,
                    order: p,
                    amplitude: c,
                    residual: libm::sqrt(rss / radii.len() as f64),
                    aitken,
                    method: FitMethod::PowerLaw,
                }
            }
        }
        _ => richardson(),
    };
    if !(result.residual <= tolerance) {
        return Err(Error::NonConvergence {
            reason: format!(
                "fit residual {:e} exceeds tolerance {:e} (order {})",
                result.residual, tolerance, result.order
            ),
            table: table(),
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn radii() -> Vec<f64> {
        (0..6).map(|i| 16.0 * libm::pow(2.0, i as f64)).collect()
    }

    #[test]
    fn recovers_pure_power_law() {
        let r = radii();
        let v: Vec<f64> = r.iter().map(|x| 1.5 - 3.0 * libm::pow(*x, -1.3)).collect();
        let e = extrapolate(&r, &v, 1.0, 0.5, 2.0, 1e-6, 0.0).unwrap();
        assert!((e.limit - 1.5).abs() < 1e-10);
        assert!((e.order - 1.3).abs() < 1e-5);
        assert_eq!(e.method, FitMethod::PowerLaw);
    }

    #[test]
    fn constant_sequence() {
        let r = radii();
        let v = vec![2.0; 6];
        let e = extrapolate(&r, &v, 1.0, 0.5, 2.0, 1e-6, 0.0).unwrap();
        assert_eq!(e.limit, 2.0);
        assert_eq!(e.method, FitMethod::Constant);
    }

    #[test]
    fn oscillation_is_reported_with_table() {
        let r = radii();
        let v: Vec<f64> = (0..6).map(|i| 1.0 + if i % 2 == 0 { 0.1 } else { -0.1 }).collect();
        match extrapolate(&r, &v, 1.0, 0.5, 2.0, 1e-6, 0.0) {
            Err(Error::NonConvergence { table, .. }) => assert_eq!(table.len(), 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn aitken_agrees_on_geometric_tail() {
        let r = radii();
        let v: Vec<f64> = r.iter().map(|x| 3.0 + 2.0 / x).collect();
        let e = extrapolate(&r, &v, 1.0, 0.5, 2.0, 1e-6, 0.0).unwrap();
        assert!((e.aitken.unwrap() - 3.0).abs() < 1e-12);
        assert!((e.limit - 3.0).abs() < 1e-10);
    }
}
