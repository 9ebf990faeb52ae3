use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::grid::{d2_s, d2_s_low, d_s, d_s_low, Mode, RadialProfile};
use super::indicial::IndicialData;
use crate::error::{invalid, Error, Result};
use crate::numeric::{cumulative_integral, reverse_cumulative_integral, solve_tridiagonal};

/// Largest allowed gap between the sixth- and second-order stencils,
/// relative to the size of the operator's terms.
const RESOLUTION_LIMIT: f64 = 0.05;

pub(crate) fn wavenumber(k: usize, fiber_length: f64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    if !(fiber_length > 0.0 && fiber_length.is_finite()) {
        return Err(invalid("fiber-length", "must be positive"));
    }
    Ok(2.0 * PI * k as f64 / fiber_length)
}

/// Applies −∂_rr − ((m−1)/r)∂_r + λ_j/r² + κ², κ = 2πk/L, which in s = log r
/// reads e^{−2s}(−∂_ss − (m−2)∂_s + λ_j) + κ². Sixth-order stencils, one
/// sided at the ends.
pub fn radial_apply(profile: &RadialProfile, m: usize, j: usize, k: usize, fiber_length: f64) -> Result<RadialProfile> {
    let data = IndicialData::new(j, m)?;
    let kappa = wavenumber(k, fiber_length)?;
    let grid = profile.grid;
    let h = grid.spacing();
    let u = &profile.values;
    let mf = m as f64 - 2.0;
    let (us, uss) = (d_s(u, h), d2_s(u, h));
    let (ls, lss) = (d_s_low(u, h), d2_s_low(u, h));
    let mut out = Vec::with_capacity(u.len());
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    let mut noise = 0.0f64;
    for i in 0..u.len() {
        let w = libm::exp(-2.0 * grid.s(i));
        let radial = w * (-uss[i] - mf * us[i] + data.lambda_j * u[i]);
        let low = w * (-lss[i] - mf * ls[i] + data.lambda_j * u[i]);
        gap = gap.max((radial - low).abs());
        scale = scale.max(w * (uss[i].abs() + mf * us[i].abs() + data.lambda_j * u[i].abs()));
        noise = noise.max(w * u[i].abs());
        out.push(radial + kappa * kappa * u[i]);
    }
    // rounding in the stencils is about ε|u|/h²
    if gap > RESOLUTION_LIMIT * scale + 1e-12 * noise / (h * h) {
        return Err(Error::Resolution(format!(
            "second- and sixth-order stencils differ by {gap:e} against term size {scale:e}"
        )));
    }
    RadialProfile::new(grid, out, Mode { j, k })
}

fn static_source(f: &RadialProfile) -> Result<()> {
    if f.mode.k != 0 {
        return Err(invalid("f", "green operators act on the k = 0 mode"));
    }
    Ok(())
}

fn denominator(data: &IndicialData) -> Result<f64> {
    let d = 2.0 * (1.0 - data.delta_j);
    if d.abs() < 1e-12 {
        return Err(Error::Degenerate("δ_j = 1 makes the Green kernel singular".into()));
    }
    Ok(d)
}

/// e^{(2 − ν)s} f(e^s): the integrand of the variation-of-parameters
/// formula after t = e^s.
fn weighted(f: &RadialProfile, nu: f64) -> Vec<f64> {
    f.values
        .iter()
        .enumerate()
        .map(|(i, v)| libm::exp((2.0 - nu) * f.grid.s(i)) * v)
        .collect()
}

/// Dirichlet solution of the j-th radial equation on [R0, ∞):
///
/// u(r) = [r^{ν⁺} ∫_{R0}^r t^{1−ν⁺} f dt − r^{ν⁻} ∫_{R0}^r t^{1−ν⁻} f dt] / (2(1 − δ_j)).
///
/// `r0` must be a grid node; the output vanishes below it.
pub fn green_mid(m: usize, j: usize, r0: f64, f: &RadialProfile) -> Result<RadialProfile> {
    static_source(f)?;
    let data = IndicialData::new(j, m)?;
    let den = denominator(&data)?;
    let grid = f.grid;
    let i0 = grid.node_at(r0).ok_or_else(|| invalid("r0", "must be a node of the radial grid"))?;
    if grid.n_points - i0 < 6 {
        return Err(invalid("r0", "too close to the outer end of the grid"));
    }
    let h = grid.spacing();
    let plus = cumulative_integral(&weighted(f, data.nu_plus)[i0..], h);
    let minus = cumulative_integral(&weighted(f, data.nu_minus)[i0..], h);
    let mut values = vec![0.0; grid.n_points];
    for (k, (a, b)) in plus.iter().zip(&minus).enumerate() {
        let s = grid.s(i0 + k);
        values[i0 + k] = (libm::exp(data.nu_plus * s) * a - libm::exp(data.nu_minus * s) * b) / den;
    }
    RadialProfile::new(grid, values, Mode { j, k: 0 })
}

/// ∫_{r_max}^∞ of e^{(2−ν)s} f, from a power-law fit of the last nodes.
fn tail_integral(g: &[f64], h: f64) -> Result<f64> {
    let n = g.len();
    let last = &g[n - 8..];
    if last.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    if last.iter().any(|v| *v == 0.0 || v.signum() != last[7].signum()) {
        return Err(Error::Decay("source changes sign at the outer end of the grid".into()));
    }
    let slope = |a: usize, b: usize| (libm::log(last[b].abs()) - libm::log(last[a].abs())) / ((b - a) as f64 * h);
    let (early, late) = (slope(0, 4), slope(4, 7));
    if (early - late).abs() > 0.05 * (1.0 + late.abs()) {
        return Err(Error::Decay(format!(
            "source tail is not a power law (log slopes {early:.4} and {late:.4})"
        )));
    }
    if late > -1e-3 {
        return Err(Error::Decay(format!(
            "tail integrand grows like r^{late:.4}; the integral to infinity diverges"
        )));
    }
    Ok(last[7] / -late)
}

/// Solution of the j-th radial equation without the growing r^{ν⁺} branch:
///
/// u(r) = −[r^{ν⁺} ∫_r^∞ t^{1−ν⁺} f dt + r^{ν⁻} ∫_{r_min}^r t^{1−ν⁻} f dt] / (2(1 − δ_j)).
///
/// The integral beyond the grid is closed with the power law fitted to the
/// last nodes of the integrand.
pub fn green_outer(m: usize, j: usize, f: &RadialProfile) -> Result<RadialProfile> {
    static_source(f)?;
    let data = IndicialData::new(j, m)?;
    let den = denominator(&data)?;
    let grid = f.grid;
    let h = grid.spacing();
    let gp = weighted(f, data.nu_plus);
    let tail = tail_integral(&gp, h)?;
    let plus = reverse_cumulative_integral(&gp, h);
    let minus = cumulative_integral(&weighted(f, data.nu_minus), h);
    let values = (0..grid.n_points)
        .map(|i| {
            let s = grid.s(i);
            -(libm::exp(data.nu_plus * s) * (plus[i] + tail) + libm::exp(data.nu_minus * s) * minus[i]) / den
        })
        .collect();
    RadialProfile::new(grid, values, Mode { j, k: 0 })
}

/// Two-point BVP for a fiber mode k ≥ 1 on the grid of `f`, Dirichlet at
/// both ends. Second-order differences of the equation multiplied by e^{2s}:
///
/// −u_ss − (m−2)u_s + (λ_j + κ²e^{2s})u = e^{2s} f.
pub fn solve_k_mode(m: usize, j: usize, k: usize, fiber_length: f64, f: &RadialProfile) -> Result<RadialProfile> {
    if k == 0 {
        return Err(invalid("k", "solve_k_mode needs a fiber mode k ≥ 1"));
    }
    let data = IndicialData::new(j, m)?;
    let kappa = wavenumber(k, fiber_length)?;
    let grid = f.grid;
    let n = grid.n_points;
    let h = grid.spacing();
    let mf = m as f64 - 2.0;
    let off = (-1.0 / (h * h) + 0.5 * mf / h, -1.0 / (h * h) - 0.5 * mf / h);
    let mut lower = vec![off.0; n];
    let mut upper = vec![off.1; n];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let e2 = libm::exp(2.0 * grid.s(i));
        diag[i] = 2.0 / (h * h) + data.lambda_j + kappa * kappa * e2;
        rhs[i] = e2 * f.values[i];
    }
    for i in [0, n - 1] {
        lower[i] = 0.0;
        upper[i] = 0.0;
        diag[i] = 1.0;
    }
    let u = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;

    // residual of the discrete operator in the unscaled form
    let mut res = 0.0;
    let mut norm = 0.0;
    for i in 1..n - 1 {
        let e2 = libm::exp(2.0 * grid.s(i));
        let au = (lower[i] * u[i - 1] + diag[i] * u[i] + upper[i] * u[i + 1]) / e2;
        res += (au - f.values[i]) * (au - f.values[i]);
        norm += f.values[i] * f.values[i];
    }
    if norm > 0.0 && !(libm::sqrt(res / norm) < 1e-8) {
        return Err(Error::LinearSolve(format!(
            "relative residual {:e} after the tridiagonal solve",
            libm::sqrt(res / norm)
        )));
    }
    RadialProfile::new(grid, u, Mode { j, k })
}
