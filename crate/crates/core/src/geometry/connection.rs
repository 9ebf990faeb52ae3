use super::frame::{ConnectionCoeffs, FramePoint};
use super::model::ModelMetric;
use crate::error::{Error, Result};

/// Connection coefficients Γ(a, b, c) = h(∇^h_{e_a} e_b, e_c) of the model
/// in its adapted frame. The only non-zero entries are
///
/// Γ(X_i, T, X_j) = Γ(T, X_i, X_j) = −Γ(X_i, X_j, T) = dη(X_i, X_j) / 2.
///
/// The curvature is gauge invariant, so points on the patch seam need no
/// special handling.
pub fn frame_connection_coeffs(model: &ModelMetric, p: &FramePoint) -> Result<ConnectionCoeffs> {
    let r = p.radius();
    if r <= 1.0 {
        return Err(Error::Domain {
            radius: r,
            minimum: 1.0,
        });
    }
    let m = model.base_dim();
    let mut gamma = ConnectionCoeffs::zeros(m + 1);
    if model.is_trivial() {
        return Ok(gamma);
    }
    let omega = model.curvature(p.base());
    for i in 0..m {
        for j in 0..m {
            let half = 0.5 * omega[i * m + j];
            if half == 0.0 {
                continue;
            }
            gamma.set(i, m, j, half);
            gamma.set(m, i, j, half);
            gamma.set(i, j, m, -half);
        }
    }
    Ok(gamma)
}
