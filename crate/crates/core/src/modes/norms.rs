use alloc::format;
use alloc::vec::Vec;

use super::grid::{d_s, RadialProfile};
use super::harmonics::zonal_norm_squared;
use super::indicial::check_dim;
use crate::error::{invalid, Error, Result};
use crate::numeric::{gauss_legendre, linear_fit, simpson, CompensatedSum};

/// ∫_{S^{m−1}} × ∫_0^L of the squared mode shape zonal_j(θ)·cos(κt).
fn mode_weight(profile: &RadialProfile, m: usize, fiber_length: f64) -> Result<f64> {
    if !(fiber_length > 0.0 && fiber_length.is_finite()) {
        return Err(invalid("fiber-length", "must be positive"));
    }
    let fiber = if profile.mode.k == 0 { fiber_length } else { fiber_length / 2.0 };
    Ok(zonal_norm_squared(profile.mode.j, m)? * fiber)
}

/// ∫_{ln R1}^{ln R2} u² e^{(m−2δ)s} ds, by Gauss–Legendre panels of about
/// one grid spacing on the interpolated profile.
fn radial_integral(profile: &RadialProfile, delta: f64, m: usize, r1: f64, r2: f64) -> Result<f64> {
    let g = profile.grid;
    let (s1, s2) = (libm::log(r1), libm::log(r2));
    let slack = 1e-9 * (g.s_max - g.s_min);
    if !(s1 < s2) || s1 < g.s_min - slack || s2 > g.s_max + slack {
        return Err(invalid("region", format!("[{r1}, {r2}] is not inside the grid")));
    }
    let panels = libm::ceil((s2 - s1) / g.spacing()).max(1.0) as usize;
    let width = (s2 - s1) / panels as f64;
    let (x, w) = gauss_legendre(4);
    let mut acc = CompensatedSum::new();
    for p in 0..panels {
        let mid = s1 + (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            let s = mid + 0.5 * width * xi;
            let u = profile.interpolate(s);
            acc.add(0.5 * width * wi * u * u * libm::exp((m as f64 - 2.0 * delta) * s));
        }
    }
    Ok(acc.value())
}

/// L²_δ norm over the shell R1 < r < R2, (∫ u² r^{−2δ} dvol_h)^{1/2},
/// for a field u = profile(r)·zonal_j·cos(κt).
pub fn weighted_norm(profile: &RadialProfile, delta: f64, m: usize, region: (f64, f64), fiber_length: f64) -> Result<f64> {
    check_dim(m)?;
    let radial = radial_integral(profile, delta, m, region.0, region.1)?;
    Ok(libm::sqrt(radial * mode_weight(profile, m, fiber_length)?))
}

/// Norm of a sum of distinct modes; the cross terms vanish by orthogonality.
pub fn weighted_norm_multi(
    profiles: &[RadialProfile],
    delta: f64,
    m: usize,
    region: (f64, f64),
    fiber_length: f64,
) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for (i, p) in profiles.iter().enumerate() {
        if profiles[..i].iter().any(|q| q.mode == p.mode) {
            return Err(invalid("profiles", "each mode may appear once"));
        }
        let n = weighted_norm(p, delta, m, region, fiber_length)?;
        acc.add(n * n);
    }
    Ok(libm::sqrt(acc.value()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Membership {
    /// Annulus contributions decay geometrically.
    Finite,
    /// Contributions level off: partial sums grow like log R.
    LogDivergent,
    /// Contributions grow geometrically.
    PowerDivergent,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MembershipReport {
    /// (inner radius 2^i, squared norm over A_{2^i} = {2^i < r < 2^{i+1}}).
    pub annuli: Vec<(f64, f64)>,
    pub partial_sums: Vec<f64>,
    /// Fitted log₂ growth of the annulus contributions per annulus.
    pub slope: f64,
    pub class: Membership,
}

/// Slopes within this band count as level.
pub const MEMBERSHIP_SLOPE_TOLERANCE: f64 = 0.05;

/// Decides whether the field lies in L²_δ from its dyadic annulus
/// contributions inside the grid.
pub fn classify_membership(profile: &RadialProfile, delta: f64, m: usize, fiber_length: f64) -> Result<MembershipReport> {
    check_dim(m)?;
    let g = profile.grid;
    let weight = mode_weight(profile, m, fiber_length)?;
    let first = libm::ceil(g.s_min / core::f64::consts::LN_2 - 1e-9) as i32;
    let last = libm::floor(g.s_max / core::f64::consts::LN_2 + 1e-9) as i32;
    if last - first < 4 {
        return Err(invalid("grid", "need at least four dyadic annuli"));
    }
    let mut annuli = Vec::new();
    for i in first..last {
        let r = libm::pow(2.0, i as f64);
        let r2 = (2.0 * r).min(libm::exp(g.s_max));
        annuli.push((r, weight * radial_integral(profile, delta, m, r.max(libm::exp(g.s_min)), r2)?));
    }
    let mut acc = 0.0;
    let partial_sums = annuli
        .iter()
        .map(|a| {
            acc += a.1;
            acc
        })
        .collect();
    if annuli.iter().all(|a| a.1 == 0.0) {
        return Ok(MembershipReport {
            annuli,
            partial_sums,
            slope: f64::NEG_INFINITY,
            class: Membership::Finite,
        });
    }
    if annuli.iter().any(|a| !(a.1 > 0.0)) {
        return Err(Error::Degenerate("field vanishes on part of the annuli".into()));
    }
    let x: Vec<f64> = (0..annuli.len()).map(|i| i as f64).collect();
    let y: Vec<f64> = annuli.iter().map(|a| libm::log2(a.1)).collect();
    let (slope, _) = linear_fit(&x, &y);
    let class = if slope > MEMBERSHIP_SLOPE_TOLERANCE {
        Membership::PowerDivergent
    } else if slope >= -MEMBERSHIP_SLOPE_TOLERANCE {
        Membership::LogDivergent
    } else {
        Membership::Finite
    };
    Ok(MembershipReport {
        annuli,
        partial_sums,
        slope,
        class,
    })
}

/// Smooth cutoff in s: 0 below `s0`, 1 above `s1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub s0: f64,
    pub s1: f64,
}

impl Cutoff {
    pub fn new(s0: f64, s1: f64) -> Result<Self> {
        if !(s0 < s1) {
            return Err(invalid("cutoff", "need s0 < s1"));
        }
        Ok(Self { s0, s1 })
    }

    fn bump(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            libm::exp(-1.0 / x)
        }
    }

    fn bump_prime(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            libm::exp(-1.0 / x) / (x * x)
        }
    }

    /// χ and dχ/ds.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let w = self.s1 - self.s0;
        let x = (s - self.s0) / w;
        if x <= 0.0 {
            return (0.0, 0.0);
        }
        if x >= 1.0 {
            return (1.0, 0.0);
        }
        let (a, b) = (Self::bump(x), Self::bump(1.0 - x));
        let (da, db) = (Self::bump_prime(x), -Self::bump_prime(1.0 - x));
        let den = a + b;
        (a / den, (da * b - a * db) / (den * den) / w)
    }
}

/// Hardy quotient ((m−2δ)²/4)∫(χv)² dμ_δ / ∫((χv)')² dμ_δ with
/// dμ_δ = e^{(m−2δ)s} ds and ' = d/ds. The inequality bounds it by 1.
///
/// When m − 2δ > 0 the truncated integrals only satisfy the inequality if
/// χv vanishes at the outer end of the grid; that is checked.
pub fn hardy_ratio(v: &RadialProfile, delta: f64, m: usize, cutoff: Cutoff) -> Result<f64> {
    check_dim(m)?;
    let g = v.grid;
    if cutoff.s0 < g.s_min || cutoff.s1 > g.s_max {
        return Err(invalid("cutoff", "transition must lie inside the grid"));
    }
    let beta = m as f64 - 2.0 * delta;
    let h = g.spacing();
    let dv = d_s(&v.values, h);
    let n = g.n_points;
    let mut w2 = Vec::with_capacity(n);
    let mut dw2 = Vec::with_capacity(n);
    for i in 0..n {
        let s = g.s(i);
        let (chi, dchi) = cutoff.eval(s);
        let mu = libm::exp(beta * s);
        let w = chi * v.values[i];
        let dw = dchi * v.values[i] + chi * dv[i];
        w2.push(w * w * mu);
        dw2.push(dw * dw * mu);
    }
    let num = 0.25 * beta * beta * simpson(&w2, h);
    let den = simpson(&dw2, h);
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::Degenerate("∫((χv)')² dμ_δ vanishes".into()));
    }
    if beta > 0.0 && w2[n - 1] / beta > 1e-9 * simpson(&w2, h) {
        return Err(Error::Degenerate(
            "χv must vanish at the outer end of the grid when m − 2δ > 0".into(),
        ));
    }
    Ok(num / den)
}
