use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Flag tolerance for [`is_critical`].
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Spectral data of the j-th spherical mode on S^{m−1}.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndicialData {
    pub j: usize,
    pub lambda_j: f64,
    pub delta_j: f64,
    pub nu_plus: f64,
    pub nu_minus: f64,
}

impl IndicialData {
    pub fn new(j: usize, m: usize) -> Result<Self> {
        check_dim(m)?;
        let (nu_plus, nu_minus) = roots(j, m);
        Ok(Self {
            j,
            lambda_j: eigenvalue(j, m),
            delta_j: m as f64 / 2.0 + j as f64,
            nu_plus,
            nu_minus,
        })
    }

    pub fn table(m: usize, j_max: usize) -> Result<Vec<Self>> {
        (0..=j_max).map(|j| Self::new(j, m)).collect()
    }
}

pub(crate) fn check_dim(m: usize) -> Result<()> {
    if m < 3 {
        return Err(invalid("m", "base dimension must be at least 3"));
    }
    Ok(())
}

fn eigenvalue(j: usize, m: usize) -> f64 {
    let j = j as f64;
    j * (m as f64 - 2.0 + j)
}

fn roots(j: usize, m: usize) -> (f64, f64) {
    (j as f64, 2.0 - m as f64 - j as f64)
}

/// λ_j = j(m − 2 + j), the j-th eigenvalue of the sphere Laplacian.
pub fn sphere_eigenvalue(j: usize, m: usize) -> Result<f64> {
    check_dim(m)?;
    Ok(eigenvalue(j, m))
}

/// (ν⁺, ν⁻) = (j, 2 − m − j): r^ν φ_j is harmonic for φ_j ∈ E_j.
pub fn indicial_roots(j: usize, m: usize) -> Result<(f64, f64)> {
    check_dim(m)?;
    Ok(roots(j, m))
}

/// {δ_j} ∪ {2 − δ_j} for j ≤ j_max, ascending.
pub fn critical_set(m: usize, j_max: usize) -> Result<Vec<f64>> {
    check_dim(m)?;
    let mut out: Vec<f64> = (0..=j_max)
        .flat_map(|j| {
            let d = m as f64 / 2.0 + j as f64;
            [d, 2.0 - d]
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Whether δ lies within `tol` of some δ_j or 2 − δ_j.
pub fn is_critical(delta: f64, m: usize, tol: f64) -> Result<bool> {
    check_dim(m)?;
    let half = m as f64 / 2.0;
    // nearest j on each branch
    let near = |x: f64| {
        let j = libm::round(x - half).max(0.0);
        (x - half - j).abs() < tol
    };
    Ok(near(delta) || near(2.0 - delta))
}
