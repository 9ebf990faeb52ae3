use alloc::vec;

use super::connection::frame_connection_coeffs;
use super::family::MetricFamily;
use super::frame::{CovDerivTensor, FrameDerivative, FramePoint, FrameTensor2};
use super::model::ModelMetric;
use crate::error::{Error, Result};

/// Default finite-difference step at radius r.
pub fn default_step(r: f64) -> f64 {
    1e-4 * r.max(1.0)
}

/// Relative tolerance for the exact/finite-difference cross-check.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-5;

/// How frame derivatives of g are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DerivativeSource {
    /// Exact derivatives when the family provides them, otherwise central
    /// differences at the default step.
    #[default]
    Auto,
    /// Central differences; `None` selects the default step.
    FiniteDifference(Option<f64>),
}

pub(crate) fn check_step(step: f64, scale: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() || step <= scale.max(1.0) * 1e-12 {
        return Err(Error::StepUnderflow { step, scale });
    }
    Ok(())
}

/// Central-difference directional derivatives e_c(g_ab).
///
/// Along X_k = ∂_k − A_k ∂_t the stencil moves on the straight coordinate
/// line with velocity (e_k, −A_k(p)), using the potential of the patch
/// containing `p`.
pub fn frame_derivative_fd<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    step: f64,
) -> Result<FrameDerivative> {
    let model = family.model();
    check_step(step, p.radius())?;
    let m = model.base_dim();
    let n = m + 1;
    let patch = model.patch_for(p.base());
    let a = model.potential(p.base(), patch);
    let mut d = FrameDerivative::zeros(n);
    let mut dx = vec![0.0; m];
    for c in 0..n {
        let dt;
        if c < m {
            dx.iter_mut().for_each(|v| *v = 0.0);
            dx[c] = step;
            dt = -step * a[c];
        } else {
            dx.iter_mut().for_each(|v| *v = 0.0);
            dt = step;
        }
        let minus: alloc::vec::Vec<f64> = dx.iter().map(|v| -v).collect();
        let gp = family.frame_components(&p.shifted(&dx, dt))?;
        let gm = family.frame_components(&p.shifted(&minus, -dt))?;
        for i in 0..n {
            for j in 0..n {
                let v = (gp.get(i, j) - gm.get(i, j)) / (2.0 * step);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "metric derivative",
                        at: p.base().to_vec(),
                    });
                }
                d.set(i, j, c, v);
            }
        }
    }
    Ok(d)
}

/// (∇_c g)(a, b) = e_c(g_ab) − g(∇_c e_a, e_b) − g(e_a, ∇_c e_b).
pub fn covariant_from_plain(
    model: &ModelMetric,
    p: &FramePoint,
    g: &FrameTensor2,
    d: &FrameDerivative,
) -> Result<CovDerivTensor> {
    let n = model.dim();
    let gamma = frame_connection_coeffs(model, p)?;
    let mut out = d.clone();
    if model.is_trivial() {
        return Ok(out);
    }
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut corr = 0.0;
                for e in 0..n {
                    corr += gamma.get(c, a, e) * g.get(e, b) + gamma.get(c, b, e) * g.get(a, e);
                }
                out.set(a, b, c, d.get(a, b, c) - corr);
            }
        }
    }
    Ok(out)
}

/// Frame derivatives of g from the requested source.
pub fn frame_derivative<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    source: DerivativeSource,
) -> Result<FrameDerivative> {
    match source {
        DerivativeSource::Auto => match family.exact_frame_derivative(p) {
            Some(d) => d,
            None => frame_derivative_fd(family, p, default_step(p.radius())),
        },
        DerivativeSource::FiniteDifference(step) => {
            frame_derivative_fd(family, p, step.unwrap_or_else(|| default_step(p.radius())))
        }
    }
}

/// ∇^h g at `p` by central differences plus connection corrections.
///
/// When the family supplies exact derivatives, both routes are evaluated,
/// the exact one is returned, and a discrepancy above
/// [`CROSS_CHECK_TOLERANCE`] (relative to the derivative scale) is an error.
pub fn covariant_derivative_metric<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    step: f64,
) -> Result<CovDerivTensor> {
    let model = family.model();
    let g = family.frame_components(p)?;
    let fd = frame_derivative_fd(family, p, step)?;
    let plain = match family.exact_frame_derivative(p) {
        Some(exact) => {
            let exact = exact?;
            let scale = exact.max_abs().max(fd.max_abs()).max(f64::MIN_POSITIVE);
            let gap = exact.max_abs_difference(&fd);
            if gap > CROSS_CHECK_TOLERANCE * scale + 1e-13 {
                return Err(Error::Resolution(alloc::format!(
                    "exact and finite-difference metric derivatives disagree by {gap:e} (scale {scale:e})"
                )));
            }
            exact
        }
        None => fd,
    };
    covariant_from_plain(model, p, &g, &plain)
}
