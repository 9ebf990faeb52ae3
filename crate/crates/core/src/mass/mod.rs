//! Boundary-integral masses and their extrapolation to infinite radius.

mod extrapolate;
mod integrand;
mod quadrature;

use alloc::vec::Vec;

pub use extrapolate::{extrapolate, Extrapolation, FitMethod};
pub use integrand::{
    dirac_integrand_radial, dirac_integrand_with, gb_integrand_radial, gb_integrand_simplified, gb_integrand_with,
    quadratic_form_integrand,
};
pub use quadrature::{boundary_integral, boundary_integral_vec, QuadratureSpec, SphereRule};

use crate::error::{invalid, Error, Result};
use crate::geometry::{DerivativeSource, FibrationKind, FramePoint, MetricFamily};
use crate::numeric::unit_sphere_area;

/// Geometric sequence of radii r0, r0·growth, ….
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusSchedule {
    pub r0: f64,
    pub growth: f64,
    pub count: usize,
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        Self {
            r0: 16.0,
            growth: 2.0,
            count: 6,
        }
    }
}

impl RadiusSchedule {
    pub fn new(r0: f64, growth: f64, count: usize) -> Result<Self> {
        let s = Self { r0, growth, count };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 1.0 && self.r0.is_finite()) {
            return Err(invalid("r0", "need r0 > 1"));
        }
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(invalid("growth", "need growth > 1"));
        }
        if self.count < 3 {
            return Err(invalid("count", "need at least 3 radii"));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.r0 * libm::pow(self.growth, i as f64)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MassKind {
    GaussBonnet,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelMetadata {
    pub base_dim: usize,
    pub fiber_length: f64,
    pub kind: FibrationKind,
    /// ω_m, the area of the unit S^{m−1}.
    pub sphere_area: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassReport {
    pub kind: MassKind,
    pub per_radius: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub fit_order: f64,
    pub residual: f64,
    pub aitken: Option<f64>,
    pub method: FitMethod,
    pub model: ModelMetadata,
}

/// Knobs shared by the mass routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassOptions {
    pub derivative: DerivativeSource,
    /// Largest acceptable RMS fit residual, relative to the largest
    /// per-radius value.
    pub relative_tolerance: f64,
}

impl Default for MassOptions {
    fn default() -> Self {
        Self {
            derivative: DerivativeSource::Auto,
            relative_tolerance: 1e-3,
        }
    }
}

fn metadata<F: MetricFamily + ?Sized>(family: &F) -> ModelMetadata {
    let model = family.model();
    ModelMetadata {
        base_dim: model.base_dim(),
        fiber_length: model.fiber_length(),
        kind: model.kind(),
        sphere_area: unit_sphere_area(model.base_dim()),
    }
}

fn check_schedule<F: MetricFamily + ?Sized>(family: &F, schedule: &RadiusSchedule) -> Result<()> {
    schedule.validate()?;
    let min = family.min_radius();
    if schedule.r0 <= min {
        return Err(Error::Domain {
            radius: schedule.r0,
            minimum: min,
        });
    }
    Ok(())
}

fn limit_of(radii: &[f64], values: &[f64], m: usize, options: &MassOptions) -> Result<Extrapolation> {
    let nominal = (m - 2) as f64;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    extrapolate(radii, values, nominal, 0.5, 2.0 * nominal, options.relative_tolerance * scale.max(1e-300), 0.0)
}

fn run<F, I>(family: &F, schedule: &RadiusSchedule, quad: &QuadratureSpec, options: &MassOptions, kind: MassKind, integrand: I) -> Result<MassReport>
where
    F: MetricFamily + ?Sized,
    I: Fn(&FramePoint) -> Result<f64>,
{
    check_schedule(family, schedule)?;
    let meta = metadata(family);
    let norm = meta.sphere_area * meta.fiber_length;
    let radii = schedule.radii();
    let mut values = Vec::with_capacity(radii.len());
    for &r in &radii {
        values.push(boundary_integral(&integrand, family.model(), r, quad)? / norm);
    }
    let fit = limit_of(&radii, &values, meta.base_dim, options)?;
    Ok(MassReport {
        kind,
        per_radius: radii.into_iter().zip(values).collect(),
        extrapolated: fit.limit,
        fit_order: fit.order,
        residual: fit.residual,
        aitken: fit.aitken,
        method: fit.method,
        model: meta,
    })
}

/// Gauss–Bonnet mass (1/(ω_m L)) lim ∫_{∂B_R} −(Div_h g + dTr_h g − ½ dg(T,T)).
pub fn mass_gb<F: MetricFamily + ?Sized>(family: &F, schedule: &RadiusSchedule, quad: &QuadratureSpec) -> Result<MassReport> {
    mass_gb_with(family, schedule, quad, &MassOptions::default())
}

pub fn mass_gb_with<F: MetricFamily + ?Sized>(
    family: &F,
    schedule: &RadiusSchedule,
    quad: &QuadratureSpec,
    options: &MassOptions,
) -> Result<MassReport> {
    run(family, schedule, quad, options, MassKind::GaussBonnet, |p| {
        gb_integrand_with(family, p, options.derivative)
    })
}

/// Dirac mass (1/(ω_m L)) lim ∫_{∂B_R} −(Div_{h₀} g + dTr_{h₀} g).
pub fn mass_dirac<F: MetricFamily + ?Sized>(family: &F, schedule: &RadiusSchedule, quad: &QuadratureSpec) -> Result<MassReport> {
    mass_dirac_with(family, schedule, quad, &MassOptions::default())
}

pub fn mass_dirac_with<F: MetricFamily + ?Sized>(
    family: &F,
    schedule: &RadiusSchedule,
    quad: &QuadratureSpec,
    options: &MassOptions,
) -> Result<MassReport> {
    if !family.model().is_trivial() {
        return Err(Error::UnsupportedModel(
            "the Dirac mass is defined only for trivial fibrations".into(),
        ));
    }
    run(family, schedule, quad, options, MassKind::Dirac, |p| {
        dirac_integrand_with(family, p, options.derivative)
    })
}

/// The mass quadratic form on the horizontal directions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassQuadraticForm {
    /// Rows of the extrapolated symmetric matrix.
    pub matrix: Vec<Vec<f64>>,
    /// Largest fit residual over the entries.
    pub residual: f64,
    pub per_radius: Vec<(f64, Vec<Vec<f64>>)>,
    pub model: ModelMetadata,
}

impl MassQuadraticForm {
    pub fn trace(&self) -> f64 {
        (0..self.matrix.len()).map(|i| self.matrix[i][i]).sum()
    }

    /// Largest |Q_ij − Q_ji|.
    pub fn asymmetry(&self) -> f64 {
        let n = self.matrix.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i]).abs());
            }
        }
        worst
    }
}

fn unpack(m: usize, upper: &[f64]) -> Vec<Vec<f64>> {
    let mut out = alloc::vec![alloc::vec![0.0; m]; m];
    let mut idx = 0;
    for i in 0..m {
        for j in i..m {
            out[i][j] = upper[idx];
            out[j][i] = upper[idx];
            idx += 1;
        }
    }
    out
}

pub fn mass_quadratic_form<F: MetricFamily + ?Sized>(
    family: &F,
    schedule: &RadiusSchedule,
    quad: &QuadratureSpec,
) -> Result<MassQuadraticForm> {
    mass_quadratic_form_with(family, schedule, quad, &MassOptions::default())
}

pub fn mass_quadratic_form_with<F: MetricFamily + ?Sized>(
    family: &F,
    schedule: &RadiusSchedule,
    quad: &QuadratureSpec,
    options: &MassOptions,
) -> Result<MassQuadraticForm> {
    check_schedule(family, schedule)?;
    let meta = metadata(family);
    let m = meta.base_dim;
    let len = m * (m + 1) / 2;
    let norm = meta.sphere_area * meta.fiber_length;
    let radii = schedule.radii();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(radii.len());
    for &r in &radii {
        let v = boundary_integral_vec(
            |p| quadratic_form_integrand(family, p, options.derivative),
            len,
            family.model(),
            r,
            quad,
        )?;
        rows.push(v.into_iter().map(|x| x / norm).collect());
    }
    // entries are extrapolated against the scale of the whole form
    let scale = rows.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let nominal = (m - 2) as f64;
    let mut limits = Vec::with_capacity(len);
    let mut residual = 0.0f64;
    for e in 0..len {
        let values: Vec<f64> = rows.iter().map(|r| r[e]).collect();
        let fit = extrapolate(
            &radii,
            &values,
            nominal,
            0.5,
            2.0 * nominal,
            options.relative_tolerance * scale,
            1e-12 * scale,
        )?;
        residual = residual.max(fit.residual);
        limits.push(fit.limit);
    }
    Ok(MassQuadraticForm {
        matrix: unpack(m, &limits),
        residual,
        per_radius: radii.iter().copied().zip(rows.iter().map(|r| unpack(m, r))).collect(),
        model: meta,
    })
}

/// GB masses of one metric presented in two charts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvarianceReport {
    pub first: MassReport,
    pub second: MassReport,
    pub difference: f64,
}

pub fn chart_invariance_check<A, B>(
    first: &A,
    second: &B,
    schedule: &RadiusSchedule,
    quad: &QuadratureSpec,
) -> Result<InvarianceReport>
where
    A: MetricFamily + ?Sized,
    B: MetricFamily + ?Sized,
{
    let a = mass_gb(first, schedule, quad)?;
    let b = mass_gb(second, schedule, quad)?;
    let difference = (a.extrapolated - b.extrapolated).abs();
    Ok(InvarianceReport {
        first: a,
        second: b,
        difference,
    })
}
