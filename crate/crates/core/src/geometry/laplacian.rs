use alloc::vec::Vec;

use super::derivative::check_step;
use super::frame::FramePoint;
use super::model::ModelMetric;
use crate::error::{Error, Result};

// fourth-order central stencils
fn d1(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h)
}

/// Δ_h u at `p`, with the nonnegative sign convention.
///
/// `u` is sampled in local coordinates (x, t) of the patch containing `p`.
/// With η = dt + A_k dx_k the operator reads
///
/// Δ_h u = −Σ_k (∂_kk u − 2A_k ∂_kt u + A_k² ∂_tt u − (∂_k A_k) ∂_t u) − ∂_tt u,
///
/// and the monopole potentials are divergence free, so the last term of
/// the sum drops.
pub fn model_laplacian<U>(model: &ModelMetric, u: U, p: &FramePoint, step: f64) -> Result<f64>
where
    U: Fn(&[f64], f64) -> f64,
{
    check_step(step, p.radius())?;
    let m = model.base_dim();
    if p.base().len() != m {
        return Err(crate::error::invalid("point", "dimension does not match the model"));
    }
    let x0: Vec<f64> = p.base().to_vec();
    let t0 = p.t();
    let a = model.potential(&x0, model.patch_for(&x0));
    let at = |k: usize, dx: f64, dt: f64| {
        let mut x = x0.clone();
        if k < m {
            x[k] += dx;
        }
        u(&x, t0 + dt)
    };

    let utt = d2(|s| at(m, 0.0, s), step);
    let mut lap = -utt;
    for k in 0..m {
        let ukk = d2(|s| at(k, s, 0.0), step);
        lap -= ukk;
        if a[k] != 0.0 {
            let ukt = d1(|s| d1(|q| at(k, s, q), step), step);
            lap -= -2.0 * a[k] * ukt + a[k] * a[k] * utt;
        }
    }
    if !lap.is_finite() {
        return Err(Error::NonFinite {
            what: "laplacian",
            at: x0,
        });
    }
    Ok(lap)
}
