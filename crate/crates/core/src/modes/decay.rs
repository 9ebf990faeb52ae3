use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::harmonics::{fiber_mean, zonal, zonal_norm_squared};
use super::indicial::{check_dim, is_critical, IndicialData, CRITICAL_TOLERANCE};
use crate::error::{invalid, Error, Result};
use crate::geometry::{model_laplacian, FramePoint, ModelMetric};
use crate::mass::SphereRule;
use crate::numeric::linear_fit;

/// Which indicial root a term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    /// r^{ν⁺} = r^j
    #[cfg_attr(feature = "serde", serde(rename = "+"))]
    Plus,
    /// r^{ν⁻} = r^{2−m−j}
    #[cfg_attr(feature = "serde", serde(rename = "-"))]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayTerm {
    #[cfg_attr(feature = "serde", serde(rename = "mode"))]
    pub j: usize,
    pub sign: Branch,
    pub coefficient: f64,
}

/// u ≈ Σ c · r^{ν_j^±} zonal_j + remainder, over the admissible slots.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayExpansion {
    pub coefficients: Vec<DecayTerm>,
    /// Log-log slope of the remainder's sup norm over the fitting radii.
    pub remainder_rate: f64,
    /// (radius, sup |remainder| on the sphere × fiber at that radius).
    pub remainder: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayOptions {
    /// Smallest fitting radius R; the fit uses R, 2R, 4R, 8R.
    pub radius: f64,
    pub fiber_samples: usize,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    /// Largest accepted |Δu| relative to the size of its terms.
    pub harmonic_tolerance: f64,
    /// Largest accepted condition number of a per-mode fit.
    pub max_condition: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            radius: 10.0,
            fiber_samples: 16,
            polar_nodes: 12,
            azimuth_nodes: 8,
            harmonic_tolerance: 1e-6,
            max_condition: 1e8,
        }
    }
}

/// Slots (j, ±) whose profile lies in L²_δ but not in L²_{δ'}:
/// δ' ≤ m/2 + ν < δ.
fn admissible(data: &IndicialData, m: usize, delta: f64, delta_prime: f64) -> Vec<(Branch, f64)> {
    let half = m as f64 / 2.0;
    [(Branch::Plus, data.nu_plus), (Branch::Minus, data.nu_minus)]
        .into_iter()
        .filter(|(_, nu)| delta_prime <= half + nu && half + nu < delta)
        .collect()
}

fn check_harmonic<U>(model: &ModelMetric, u: &U, points: &[FramePoint], tol: f64) -> Result<()>
where
    U: Fn(&[f64], f64) -> f64,
{
    let mut worst = 0.0f64;
    for p in points {
        let h = 1e-3 * p.radius();
        let lap = model_laplacian(model, u, p, h)?;
        // size of the individual second derivatives
        let x = p.base();
        let u0 = u(x, p.t());
        let mut terms = 0.0;
        for k in 0..=x.len() {
            let shifted = |d: f64| {
                let mut y = x.to_vec();
                if k < x.len() {
                    y[k] += d;
                    u(&y, p.t())
                } else {
                    u(&y, p.t() + d)
                }
            };
            terms += ((shifted(h) - 2.0 * u0 + shifted(-h)) / (h * h)).abs();
        }
        terms = terms.max(u0.abs() / (p.radius() * p.radius()));
        if terms > 0.0 {
            worst = worst.max(lap.abs() / terms);
        }
    }
    if worst > tol {
        return Err(Error::NotHarmonic { residual: worst });
    }
    Ok(())
}

/// Splits an exterior harmonic field into its explicit profiles between
/// the decay rates δ' < δ and a faster-decaying remainder.
///
/// `u` is evaluated at (x, t) in the coordinates of `model`. Fiber means
/// are projected on zonal harmonics about the last axis at R, 2R, 4R, 8R,
/// and the admissible amplitudes are fitted by least squares in the
/// (r^{ν⁺}, r^{ν⁻}) basis. Terms below 1e−9 of the field's size at R
/// are dropped.
pub fn decay_jump_expand<U>(
    u: U,
    model: &ModelMetric,
    delta: f64,
    delta_prime: f64,
    j_max: usize,
    options: &DecayOptions,
) -> Result<DecayExpansion>
where
    U: Fn(&[f64], f64) -> f64,
{
    let m = model.base_dim();
    check_dim(m)?;
    if !(delta > delta_prime) {
        return Err(invalid("delta", "need δ > δ'"));
    }
    for d in [delta, delta_prime] {
        if is_critical(d, m, CRITICAL_TOLERANCE)? {
            return Err(Error::Critical { delta: d, base_dim: m });
        }
    }
    if !(options.radius > 1.0) {
        return Err(invalid("radius", "fitting radius must exceed 1"));
    }
    let rule = SphereRule::new(m, options.polar_nodes.max(j_max + 2), options.azimuth_nodes)?;
    let nf = options.fiber_samples;
    let l = model.fiber_length();
    let radii: Vec<f64> = (0..4).map(|i| options.radius * libm::pow(2.0, i as f64)).collect();

    // samples[i][q][n] = u(R_i ω_q, t_n)
    let mut samples = Vec::with_capacity(radii.len());
    for &r in &radii {
        let mut at_r = Vec::with_capacity(rule.len());
        for w in &rule.points {
            let x: Vec<f64> = w.iter().map(|c| r * c).collect();
            let fiber: Vec<f64> = (0..nf).map(|n| u(&x, l * n as f64 / nf as f64)).collect();
            if let Some(v) = fiber.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    what: "field sample",
                    at: vec![r, *v],
                });
            }
            at_r.push(fiber);
        }
        samples.push(at_r);
    }
    let scale = samples[0].iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));

    let probes: Vec<FramePoint> = radii
        .iter()
        .flat_map(|&r| {
            rule.points.iter().step_by((rule.len() / 3).max(1)).map(move |w| (r, w.clone()))
        })
        .map(|(r, w)| FramePoint::unchecked(w.iter().map(|c| r * c).collect(), 0.37 * l))
        .collect();
    check_harmonic(model, &u, &probes, options.harmonic_tolerance)?;

    let mut coefficients = Vec::new();
    for j in 0..=j_max {
        let data = IndicialData::new(j, m)?;
        let slots = admissible(&data, m, delta, delta_prime);
        if slots.is_empty() {
            continue;
        }
        let norm = zonal_norm_squared(j, m)?;
        let mut amp = Vec::with_capacity(radii.len());
        for at_r in &samples {
            let mut acc = 0.0;
            for ((w, pt), fiber) in rule.weights.iter().zip(&rule.points).zip(at_r) {
                acc += w * fiber_mean(fiber)? * zonal(j, m, pt[m - 1]);
            }
            amp.push(acc / norm);
        }
        let r0 = radii[0];
        let a = DMatrix::from_fn(radii.len(), slots.len(), |i, c| libm::pow(radii[i] / r0, slots[c].1));
        let svd = a.clone().svd(true, true);
        let condition = svd.singular_values.max() / svd.singular_values.min();
        if !(condition <= options.max_condition) {
            return Err(Error::IllPosedWindow { condition });
        }
        let x = svd
            .solve(&DVector::from_column_slice(&amp), 0.0)
            .map_err(|e| Error::LinearSolve(e.into()))?;
        for (c, (sign, nu)) in slots.iter().enumerate() {
            // x[c] is the amplitude at R
            if x[c].abs() > 1e-9 * scale {
                coefficients.push(DecayTerm {
                    j,
                    sign: *sign,
                    coefficient: x[c] / libm::pow(r0, *nu),
                });
            }
        }
    }

    let expansion = |x: &[f64]| -> f64 {
        coefficients
            .iter()
            .map(|t| {
                let d = IndicialData::new(t.j, m).expect("checked dimension");
                let nu = if t.sign == Branch::Plus { d.nu_plus } else { d.nu_minus };
                t.coefficient * super::harmonics::solid_zonal(t.j, nu, x)
            })
            .sum()
    };
    let mut remainder = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let mut sup = 0.0f64;
        for (q, w) in rule.points.iter().enumerate() {
            let x: Vec<f64> = w.iter().map(|c| r * c).collect();
            let e = expansion(&x);
            for v in &samples[i][q] {
                sup = sup.max((v - e).abs());
            }
        }
        remainder.push((r, sup));
    }
    let remainder_rate = if remainder.iter().all(|p| p.1 > 0.0) {
        let lx: Vec<f64> = remainder.iter().map(|p| libm::log(p.0)).collect();
        let ly: Vec<f64> = remainder.iter().map(|p| libm::log(p.1)).collect();
        linear_fit(&lx, &ly).0
    } else {
        f64::NEG_INFINITY
    };
    Ok(DecayExpansion {
        coefficients,
        remainder_rate,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::radius;
    use crate::modes::harmonics::solid_zonal;
    use core::f64::consts::PI;

    fn find(e: &DecayExpansion, j: usize, sign: Branch) -> Option<f64> {
        e.coefficients.iter().find(|t| t.j == j && t.sign == sign).map(|t| t.coefficient)
    }

    #[test]
    fn recovers_the_decaying_monopole_term() {
        let model = ModelMetric::trivial(3, 1.0).unwrap();
        let u = |x: &[f64], _t: f64| 5.0 / radius(x);
        let e = decay_jump_expand(u, &model, 1.6, 0.4, 3, &DecayOptions::default()).unwrap();
        assert_eq!(e.coefficients.len(), 1, "{e:?}");
        assert!((find(&e, 0, Branch::Minus).unwrap() - 5.0).abs() < 1e-6 * 5.0);
        assert!(e.remainder.iter().all(|p| p.1 < 1e-12));
    }

    #[test]
    fn recovers_a_growing_dipole() {
        // window containing δ_1 = m/2 + 1
        for m in [3, 4, 5] {
            let model = ModelMetric::trivial(m, 2.0).unwrap();
            let u = |x: &[f64], _t: f64| 0.7 * solid_zonal(1, 1.0, x) - 2.0 * solid_zonal(0, 2.0 - m as f64, x);
            let half = m as f64 / 2.0;
            let e = decay_jump_expand(u, &model, half + 1.3, 2.0 - half - 0.2, 3, &DecayOptions::default()).unwrap();
            assert_eq!(e.coefficients.len(), 2, "m={m}: {e:?}");
            assert!((find(&e, 1, Branch::Plus).unwrap() - 0.7).abs() < 1e-5 * 0.7);
            assert!((find(&e, 0, Branch::Minus).unwrap() + 2.0).abs() < 1e-5 * 2.0);
        }
    }

    #[test]
    fn fiber_modes_leave_an_exponentially_small_remainder() {
        // e^{−κr}/r · cos(κt) is harmonic on R³ × S¹
        let l = 4.0 * PI;
        let kappa = 2.0 * PI / l;
        let model = ModelMetric::trivial(3, l).unwrap();
        let u = move |x: &[f64], t: f64| {
            let r = radius(x);
            libm::exp(-kappa * r) / r * libm::cos(kappa * t)
        };
        let opts = DecayOptions {
            radius: 4.0,
            ..DecayOptions::default()
        };
        let e = decay_jump_expand(u, &model, 1.6, 0.4, 3, &opts).unwrap();
        assert!(e.coefficients.is_empty(), "{e:?}");
        let x: Vec<f64> = e.remainder.iter().map(|p| p.0).collect();
        let y: Vec<f64> = e.remainder.iter().map(|p| libm::log(p.1)).collect();
        let (slope, _) = linear_fit(&x, &y);
        assert!(slope <= -kappa * 0.95, "{slope}");
    }

    #[test]
    fn rejects_bad_input() {
        let model = ModelMetric::trivial(3, 1.0).unwrap();
        let harmonic = |x: &[f64], _t: f64| 1.0 / radius(x);
        let opts = DecayOptions::default();
        assert!(matches!(
            decay_jump_expand(harmonic, &model, 1.5, 0.4, 2, &opts),
            Err(Error::Critical { .. })
        ));
        assert!(decay_jump_expand(harmonic, &model, 0.4, 1.6, 2, &opts).is_err());
        let not_harmonic = |x: &[f64], _t: f64| 1.0 / (radius(x) * radius(x));
        assert!(matches!(
            decay_jump_expand(not_harmonic, &model, 1.6, 0.4, 2, &opts),
            Err(Error::NotHarmonic { .. })
        ));
    }
}
