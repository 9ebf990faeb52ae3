use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::indicial::check_dim;
use crate::error::{Error, Result};

/// Zonal harmonic of degree j on S^{m−1} about the last axis: the
/// Gegenbauer polynomial C_j^{(m−2)/2}(x), with x = cos θ.
pub fn zonal(j: usize, m: usize, x: f64) -> f64 {
    let alpha = (m as f64 - 2.0) / 2.0;
    let mut c0 = 1.0;
    if j == 0 {
        return c0;
    }
    let mut c1 = 2.0 * alpha * x;
    for n in 2..=j {
        let nf = n as f64;
        let c2 = (2.0 * x * (nf + alpha - 1.0) * c1 - (nf + 2.0 * alpha - 2.0) * c0) / nf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// r^ν · zonal_j(x_m / r) at a base point x.
pub fn solid_zonal(j: usize, nu: f64, x: &[f64]) -> f64 {
    let m = x.len();
    let r = crate::geometry::radius(x);
    libm::pow(r, nu) * zonal(j, m, x[m - 1] / r)
}

/// ∫_{S^{m−1}} zonal_j² dω.
pub fn zonal_norm_squared(j: usize, m: usize) -> Result<f64> {
    check_dim(m)?;
    // ∫ C_j^α(x)² (1 − x²)^{α − 1/2} dx = π 2^{1−2α} Γ(j + 2α) / (j! (j + α) Γ(α)²)
    let alpha = (m as f64 - 2.0) / 2.0;
    let jf = j as f64;
    let lg = |x: f64| libm::lgamma(x);
    let line = PI * libm::pow(2.0, 1.0 - 2.0 * alpha) * libm::exp(lg(jf + 2.0 * alpha) - lg(jf + 1.0) - 2.0 * lg(alpha))
        / (jf + alpha);
    // times the area of the S^{m−2} slices
    Ok(line * crate::numeric::unit_sphere_area(m - 1))
}

/// Fourier coefficient of one fiber mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberMode {
    pub cos: f64,
    pub sin: f64,
}

fn check_samples(n: usize, k: usize) -> Result<()> {
    let needed = 4 * k + 4;
    if n < needed {
        return Err(Error::Aliasing { samples: n, k, needed });
    }
    Ok(())
}

/// Discrete Fourier coefficient of wavenumber k from equispaced samples
/// u(nL/N), n = 0..N. For k = 0 `cos` is the fiber mean.
pub fn fiber_project(samples: &[f64], k: usize) -> Result<FiberMode> {
    let n = samples.len();
    check_samples(n, k)?;
    let nf = n as f64;
    if k == 0 {
        return Ok(FiberMode {
            cos: crate::numeric::compensated_sum(samples.iter().copied()) / nf,
            sin: 0.0,
        });
    }
    let mut c = crate::numeric::CompensatedSum::new();
    let mut s = crate::numeric::CompensatedSum::new();
    for (i, u) in samples.iter().enumerate() {
        // reduce the phase modulo N to keep it exact
        let phase = 2.0 * PI * ((k * i) % n) as f64 / nf;
        c.add(u * libm::cos(phase));
        s.add(u * libm::sin(phase));
    }
    Ok(FiberMode {
        cos: 2.0 * c.value() / nf,
        sin: 2.0 * s.value() / nf,
    })
}

/// Π₀u, the fiber mean.
pub fn fiber_mean(samples: &[f64]) -> Result<f64> {
    Ok(fiber_project(samples, 0)?.cos)
}

/// Samples of the k-th fiber component Π_k u.
pub fn fiber_component(samples: &[f64], k: usize) -> Result<Vec<f64>> {
    let c = fiber_project(samples, k)?;
    let n = samples.len();
    if k == 0 {
        return Ok(vec![c.cos; n]);
    }
    Ok((0..n)
        .map(|i| {
            let phase = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
            c.cos * libm::cos(phase) + c.sin * libm::sin(phase)
        })
        .collect())
}

/// Π⊥u = u − Π₀u.
pub fn fiber_perp(samples: &[f64]) -> Result<Vec<f64>> {
    let mean = fiber_mean(samples)?;
    Ok(samples.iter().map(|u| u - mean).collect())
}
